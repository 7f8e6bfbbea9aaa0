//! Base-2 softmax over logits of the form `offset + log2(scale)`.

use crate::error::{Error, Result};
use crate::interval::{pow2, Interval};
use crate::language::Weight;
use crate::rational::{format_rational, parse_rational, Rational};
use num_traits::{One, Signed, Zero};
use std::fmt;

/// A logit `offset + log2(scale)` with rational `offset` and positive
/// rational `scale`. Plain rational logits have `scale = 1`; the scale lets
/// biases such as `log2((1-2ε)/(4ε))` stay exact for every rational `ε`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Logit {
    pub offset: Rational,
    pub scale: Rational,
}

impl Logit {
    pub fn new(offset: Rational, scale: Rational) -> Result<Self> {
        if !scale.is_positive() {
            return Err(Error::InvalidArgument(format!(
                "log2 argument must be positive, got {}",
                format_rational(&scale)
            )));
        }
        Ok(Logit { offset, scale })
    }

    /// `log2(scale)`, folded into `offset` when `scale` is a power of two.
    pub fn log2_of(scale: Rational) -> Result<Self> {
        match crate::rational::exact_log2(&scale) {
            Some(k) => Ok(Logit::from(crate::rational::int(k))),
            None => Logit::new(Rational::zero(), scale),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.scale.is_one().then_some(&self.offset)
    }

    pub fn plus(&self, x: &Rational) -> Logit {
        Logit {
            offset: &self.offset + x,
            scale: self.scale.clone(),
        }
    }

    /// Parses `"p/q"`, `"log2(r)"` or `"p/q+log2(r)"`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let (head, log_part) = match text.find("log2(") {
            Some(at) => {
                let inner = text[at + 5..]
                    .strip_suffix(')')
                    .ok_or_else(|| Error::MalformedRational(text.to_string()))?;
                let head = text[..at].trim().trim_end_matches('+').trim();
                (head, Some(inner))
            }
            None => (text, None),
        };
        let offset = if head.is_empty() {
            Rational::zero()
        } else {
            parse_rational(head)?
        };
        let scale = match log_part {
            Some(inner) => parse_rational(inner)?,
            None => Rational::one(),
        };
        Logit::new(offset, scale)
    }
}

impl From<Rational> for Logit {
    fn from(offset: Rational) -> Self {
        Logit {
            offset,
            scale: Rational::one(),
        }
    }
}

impl fmt::Display for Logit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.offset.is_zero(), self.scale.is_one()) {
            (_, true) => write!(f, "{}", format_rational(&self.offset)),
            (true, false) => write!(f, "log2({})", format_rational(&self.scale)),
            (false, false) => {
                write!(
                    f,
                    "{}+log2({})",
                    format_rational(&self.offset),
                    format_rational(&self.scale)
                )
            }
        }
    }
}

/// `softmax₂(x)_i = 2^{x_i} / Σ_j 2^{x_j}`: exact rationals when every
/// logit is an integer, certified enclosures at `bits` otherwise.
pub fn softmax2(logits: &[Rational], bits: u32) -> Vec<Weight> {
    let logits: Vec<Logit> = logits.iter().cloned().map(Logit::from).collect();
    softmax2_logits(&logits, bits)
}

/// Exact whenever all offsets differ by integers; the shift by the minimum
/// offset then clears every fractional power.
pub fn softmax2_logits(logits: &[Logit], bits: u32) -> Vec<Weight> {
    assert!(!logits.is_empty(), "softmax of an empty vector");
    let base = &logits[0].offset;
    let exact = logits.iter().all(|l| (&l.offset - base).is_integer());
    if exact {
        let min = logits.iter().map(|l| &l.offset).min().unwrap();
        let terms: Vec<Rational> = logits
            .iter()
            .map(|l| {
                let shift = &l.offset - min;
                &l.scale * crate::interval::pow2_int(shift.numer())
            })
            .collect();
        let total: Rational = terms.iter().sum();
        return terms
            .into_iter()
            .map(|t| Weight::Exact(t / &total))
            .collect();
    }
    // p_i = 1 / Σ_j (s_j/s_i) 2^{o_j - o_i}; monotone, so refinement nests.
    logits
        .iter()
        .map(|li| {
            let denom = logits
                .iter()
                .fold(Interval::point(Rational::zero(), bits), |acc, lj| {
                    let ratio = &lj.scale / &li.scale;
                    let power = pow2(&(&lj.offset - &li.offset), bits);
                    acc.add(&power.mul(&Interval::point(ratio, bits)))
                });
            Weight::Approx(denom.recip())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn exact(ws: Vec<Weight>) -> Vec<Rational> {
        ws.into_iter()
            .map(|w| w.into_exact().expect("exact"))
            .collect()
    }

    #[test]
    fn uniform() {
        assert_eq!(
            exact(softmax2(&[int(0), int(0), int(0)], 64)),
            vec![rat(1, 3); 3]
        );
    }

    #[test]
    fn two_two_one() {
        assert_eq!(
            exact(softmax2(&[int(1), int(1), int(0)], 64)),
            vec![rat(2, 5), rat(2, 5), rat(1, 5)]
        );
    }

    #[test]
    fn two_thirds() {
        assert_eq!(
            exact(softmax2(&[int(1), int(0)], 64)),
            vec![rat(2, 3), rat(1, 3)]
        );
    }

    #[test]
    fn shared_fraction_stays_exact() {
        // differences are integers even though the logits are not
        assert_eq!(
            exact(softmax2(&[rat(3, 2), rat(1, 2)], 64)),
            vec![rat(2, 3), rat(1, 3)]
        );
    }

    #[test]
    fn log_scaled_logits_are_exact() {
        // ε = 1/7: 2^L = (1-2ε)/(4ε) = 5/4
        let l = Logit::log2_of(rat(5, 4)).unwrap();
        let ws = exact(softmax2_logits(&[l.clone(), l, Logit::from(int(0))], 64));
        assert_eq!(ws, vec![rat(5, 14), rat(5, 14), rat(2, 7)]);
    }

    #[test]
    fn fractional_logits_give_enclosures() {
        let ws = softmax2(&[rat(1, 2), int(0)], 40);
        // 2^{1/2} / (2^{1/2} + 1) ≈ 0.5858
        let iv = match &ws[0] {
            Weight::Approx(iv) => iv.clone(),
            _ => panic!("expected enclosure"),
        };
        assert!(iv.contains(&rat(5857, 10000)) || iv.lower() > &rat(5857, 10000));
        assert!(iv.upper() < &rat(5859, 10000));
        let total = ws[0].add(&ws[1]);
        assert!(total.lower() <= &int(1) && &int(1) <= total.upper());
    }

    #[test]
    fn enclosures_nest_under_refinement() {
        let logits = [rat(1, 3), rat(-2, 5), int(2)];
        for bits in [8u32, 16, 32] {
            let coarse = softmax2(&logits, bits);
            let fine = softmax2(&logits, bits + 8);
            for (c, f) in coarse.iter().zip(&fine) {
                assert!(c.lower() <= f.lower() && f.upper() <= c.upper());
            }
        }
    }

    #[test]
    fn parses_logit_forms() {
        assert_eq!(Logit::parse("3/2").unwrap(), Logit::from(rat(3, 2)));
        assert_eq!(
            Logit::parse("log2(5/4)").unwrap(),
            Logit::new(int(0), rat(5, 4)).unwrap()
        );
        assert_eq!(
            Logit::parse("1+log2(3)").unwrap(),
            Logit::new(int(1), int(3)).unwrap()
        );
        assert!(Logit::parse("log2(-1)").is_err());
        assert_eq!(
            Logit::parse(&Logit::new(int(1), int(3)).unwrap().to_string()).unwrap(),
            Logit::new(int(1), int(3)).unwrap()
        );
    }
}
