//! The weighted-language interface shared by automata and RNN evaluators.

use crate::alphabet::{Alphabet, Word};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::rational::{format_rational, Rational};
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::cmp::Ordering;
use std::fmt;

pub const DEFAULT_PRECISION_BITS: u32 = 64;
pub const MAX_PRECISION_BITS: u32 = 4096;

/// A weight: exact whenever the evaluator can stay in the rationals, an
/// enclosing interval otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Weight {
    Exact(Rational),
    Approx(Interval),
}

impl Weight {
    pub fn zero() -> Self {
        Weight::Exact(Rational::zero())
    }

    pub fn one() -> Self {
        Weight::Exact(Rational::one())
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Weight::Exact(r) => Some(r),
            Weight::Approx(_) => None,
        }
    }

    pub fn into_exact(self) -> Option<Rational> {
        match self {
            Weight::Exact(r) => Some(r),
            Weight::Approx(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Weight::Exact(_))
    }

    pub fn lower(&self) -> &Rational {
        match self {
            Weight::Exact(r) => r,
            Weight::Approx(iv) => iv.lower(),
        }
    }

    pub fn upper(&self) -> &Rational {
        match self {
            Weight::Exact(r) => r,
            Weight::Approx(iv) => iv.upper(),
        }
    }

    fn as_interval(&self, bits: u32) -> Interval {
        match self {
            Weight::Exact(r) => Interval::point(r.clone(), bits),
            Weight::Approx(iv) => iv.clone(),
        }
    }

    fn bits(&self) -> u32 {
        match self {
            Weight::Exact(_) => u32::MAX,
            Weight::Approx(iv) => iv.precision_bits(),
        }
    }

    fn combine(
        &self,
        other: &Weight,
        exact: impl Fn(&Rational, &Rational) -> Rational,
        approx: impl Fn(&Interval, &Interval) -> Interval,
    ) -> Weight {
        match (self, other) {
            (Weight::Exact(a), Weight::Exact(b)) => Weight::Exact(exact(a, b)),
            _ => {
                let bits = self.bits().min(other.bits());
                Weight::Approx(approx(&self.as_interval(bits), &other.as_interval(bits)))
            }
        }
    }

    pub fn add(&self, other: &Weight) -> Weight {
        self.combine(other, |a, b| a + b, Interval::add)
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        self.combine(other, |a, b| a - b, Interval::sub)
    }

    pub fn mul(&self, other: &Weight) -> Weight {
        self.combine(other, |a, b| a * b, Interval::mul)
    }

    pub fn abs(&self) -> Weight {
        match self {
            Weight::Exact(r) => Weight::Exact(num_traits::Signed::abs(r)),
            Weight::Approx(iv) => Weight::Approx(iv.abs()),
        }
    }

    /// `Some(ordering)` when decided; exact weights always decide.
    pub fn cmp_rational(&self, c: &Rational) -> Option<Ordering> {
        match self {
            Weight::Exact(r) => Some(r.cmp(c)),
            Weight::Approx(iv) => iv.cmp_rational(c),
        }
    }

    /// `Some(ordering)` of `self` against `other` when the enclosures decide.
    pub fn cmp_weight(&self, other: &Weight) -> Option<Ordering> {
        match (self, other) {
            (Weight::Exact(a), Weight::Exact(b)) => Some(a.cmp(b)),
            _ => {
                if self.lower() > other.upper() {
                    Some(Ordering::Greater)
                } else if self.upper() < other.lower() {
                    Some(Ordering::Less)
                } else if self.lower() == self.upper() && other.lower() == other.upper() {
                    Some(self.lower().cmp(other.lower()))
                } else {
                    None
                }
            }
        }
    }
}

impl From<Rational> for Weight {
    fn from(r: Rational) -> Self {
        Weight::Exact(r)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Exact(r) => write!(f, "{}", format_rational(r)),
            Weight::Approx(iv) => write!(f, "{iv}"),
        }
    }
}

/// A map `Σ* → ℚ` evaluated incrementally along prefixes.
///
/// `start`, `extend` and `finish` let enumerators share work between words
/// with a common prefix; `weight` folds them for a single word. Evaluation
/// is deterministic and side-effect free.
pub trait WeightedLanguage: Sync {
    type Prefix: Clone + Send + Sync;

    fn alphabet(&self) -> &Alphabet;

    /// Whether the constructor asserted `Σ f(w) = 1` and `f ≥ 0`.
    fn declared_consistent(&self) -> bool;

    fn start(&self, bits: u32) -> Result<Self::Prefix>;

    fn extend(&self, prefix: &Self::Prefix, symbol: usize, bits: u32) -> Result<Self::Prefix>;

    fn finish(&self, prefix: &Self::Prefix) -> Result<Weight>;

    fn precision_bits(&self) -> u32 {
        DEFAULT_PRECISION_BITS
    }

    fn weight(&self, w: &Word) -> Result<Weight> {
        self.weight_at(w, self.precision_bits())
    }

    /// Weight with interval enclosures computed at `bits` of precision.
    fn weight_at(&self, w: &Word, bits: u32) -> Result<Weight> {
        self.alphabet().check(w)?;
        let mut prefix = self.start(bits)?;
        for &s in w.ids() {
            prefix = self.extend(&prefix, s, bits)?;
        }
        self.finish(&prefix)
    }
}

impl<T: WeightedLanguage + ?Sized> WeightedLanguage for &T {
    type Prefix = T::Prefix;

    fn alphabet(&self) -> &Alphabet {
        (**self).alphabet()
    }
    fn declared_consistent(&self) -> bool {
        (**self).declared_consistent()
    }
    fn start(&self, bits: u32) -> Result<Self::Prefix> {
        (**self).start(bits)
    }
    fn extend(&self, prefix: &Self::Prefix, symbol: usize, bits: u32) -> Result<Self::Prefix> {
        (**self).extend(prefix, symbol, bits)
    }
    fn finish(&self, prefix: &Self::Prefix) -> Result<Weight> {
        (**self).finish(prefix)
    }
    fn precision_bits(&self) -> u32 {
        (**self).precision_bits()
    }
}

/// Level-by-level shortlex evaluator: level `ℓ` holds the prefixes of all
/// words of length `ℓ` in lexicographic order, so concatenating levels
/// reproduces the shortlex stream. Each level is scored in parallel on the
/// current rayon pool; results keep their order.
pub struct LevelEvaluator<'a, F: WeightedLanguage> {
    lang: &'a F,
    bits: u32,
    level: usize,
    frontier: Vec<(Word, F::Prefix)>,
}

impl<'a, F: WeightedLanguage> LevelEvaluator<'a, F> {
    pub fn new(lang: &'a F) -> Result<Self> {
        let bits = lang.precision_bits();
        let start = lang.start(bits)?;
        Ok(LevelEvaluator {
            lang,
            bits,
            level: 0,
            frontier: vec![(Word::empty(), start)],
        })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// Weights of the current level, in lexicographic order.
    pub fn weights(&self) -> Result<Vec<(Word, Weight)>> {
        self.frontier
            .par_iter()
            .map(|(w, p)| Ok((w.clone(), self.lang.finish(p)?)))
            .collect()
    }

    pub fn advance(&mut self) -> Result<()> {
        let size = self.lang.alphabet().len();
        let next = self
            .frontier
            .par_iter()
            .map(|(w, p)| {
                (0..size)
                    .map(|s| Ok((w.child(s), self.lang.extend(p, s, self.bits)?)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        self.frontier = next.into_iter().flatten().collect();
        self.level += 1;
        Ok(())
    }
}

/// All `(w, f(w))` for `|w| ≤ max_len`, in shortlex order.
pub fn weights_upto<F: WeightedLanguage>(f: &F, max_len: usize) -> Result<Vec<(Word, Weight)>> {
    let mut eval = LevelEvaluator::new(f)?;
    let mut out = eval.weights()?;
    while eval.level() < max_len {
        eval.advance()?;
        out.extend(eval.weights()?);
    }
    Ok(out)
}

/// `Σ_{|w| ≤ max_len} f(w)`.
pub fn cumulative_mass<F: WeightedLanguage>(f: &F, max_len: usize) -> Result<Weight> {
    Ok(weights_upto(f, max_len)?
        .iter()
        .fold(Weight::zero(), |acc, (_, w)| acc.add(w)))
}

/// Masses `Σ_{|w| ≤ L} f(w)` for every `L ≤ max_len`.
pub fn mass_profile<F: WeightedLanguage>(f: &F, max_len: usize) -> Result<Vec<Weight>> {
    let mut eval = LevelEvaluator::new(f)?;
    let mut acc = Weight::zero();
    let mut out = Vec::with_capacity(max_len + 1);
    loop {
        for (_, w) in eval.weights()? {
            acc = acc.add(&w);
        }
        out.push(acc.clone());
        if eval.level() == max_len {
            return Ok(out);
        }
        eval.advance()?;
    }
}

pub(crate) fn require_same_alphabet(a: &Alphabet, b: &Alphabet) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::AlphabetMismatch(format!(
            "{:?} vs {:?}",
            a.symbols(),
            b.symbols()
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn mixed_arithmetic_widens_to_intervals() {
        let a = Weight::Exact(rat(1, 2));
        let b = Weight::Approx(Interval::new(rat(1, 4), rat(1, 3), 8));
        let p = a.mul(&b);
        assert_eq!(p, Weight::Approx(Interval::new(rat(1, 8), rat(1, 6), 8)));
        assert_eq!(p.cmp_rational(&rat(1, 7)), None);
        assert_eq!(p.cmp_rational(&rat(1, 5)), Some(Ordering::Less));
        assert_eq!(a.sub(&b).cmp_rational(&rat(1, 7)), Some(Ordering::Greater));
    }
}
