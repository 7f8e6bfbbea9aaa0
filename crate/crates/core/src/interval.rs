//! Outward-rounded dyadic enclosures for the values that leave the rationals
//! (powers `2^(p/q)` with non-integer exponent).

use crate::rational::Rational;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Closed interval `[lower, upper]` certified to contain the true value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lower: Rational,
    upper: Rational,
    precision_bits: u32,
}

impl Interval {
    pub fn new(lower: Rational, upper: Rational, precision_bits: u32) -> Self {
        assert!(lower <= upper, "interval bounds out of order");
        Interval {
            lower,
            upper,
            precision_bits,
        }
    }

    pub fn point(value: Rational, precision_bits: u32) -> Self {
        Interval {
            lower: value.clone(),
            upper: value,
            precision_bits,
        }
    }

    pub fn lower(&self) -> &Rational {
        &self.lower
    }

    pub fn upper(&self) -> &Rational {
        &self.upper
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn width(&self) -> Rational {
        &self.upper - &self.lower
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lower <= x && x <= &self.upper
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lower <= self.lower && self.upper <= other.upper
    }

    /// Ordering against a rational, when the enclosure decides it.
    pub fn cmp_rational(&self, c: &Rational) -> Option<Ordering> {
        if &self.lower > c {
            Some(Ordering::Greater)
        } else if &self.upper < c {
            Some(Ordering::Less)
        } else if self.lower == self.upper {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval {
            lower: &self.lower + &o.lower,
            upper: &self.upper + &o.upper,
            precision_bits: self.precision_bits.min(o.precision_bits),
        }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval {
            lower: &self.lower - &o.upper,
            upper: &self.upper - &o.lower,
            precision_bits: self.precision_bits.min(o.precision_bits),
        }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let products = [
            &self.lower * &o.lower,
            &self.lower * &o.upper,
            &self.upper * &o.lower,
            &self.upper * &o.upper,
        ];
        let lower = products.iter().min().unwrap().clone();
        let upper = products.iter().max().unwrap().clone();
        Interval {
            lower,
            upper,
            precision_bits: self.precision_bits.min(o.precision_bits),
        }
    }

    /// Reciprocal of a strictly positive interval.
    pub fn recip(&self) -> Interval {
        assert!(
            self.lower.is_positive(),
            "reciprocal of an interval touching zero"
        );
        Interval {
            lower: self.upper.recip(),
            upper: self.lower.recip(),
            precision_bits: self.precision_bits,
        }
    }

    pub fn abs(&self) -> Interval {
        if !self.lower.is_negative() {
            self.clone()
        } else if !self.upper.is_positive() {
            Interval {
                lower: -&self.upper,
                upper: -&self.lower,
                precision_bits: self.precision_bits,
            }
        } else {
            let upper = (-&self.lower).max(self.upper.clone());
            Interval {
                lower: Rational::zero(),
                upper,
                precision_bits: self.precision_bits,
            }
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            crate::rational::format_rational(&self.lower),
            crate::rational::format_rational(&self.upper)
        )
    }
}

/// `2^k` for integer `k`, exact.
pub fn pow2_int(k: &BigInt) -> Rational {
    let shift: usize = k.magnitude().try_into().expect("exponent too large");
    let p = BigInt::one() << shift;
    if k.is_negative() {
        Rational::new(BigInt::one(), p)
    } else {
        Rational::from_integer(p)
    }
}

/// Enclosure of `2^x`. Exact (zero width) when `x` is an integer; otherwise
/// `[floor(2^x * 2^bits), floor(2^x * 2^bits) + 1] / 2^bits`, scaled by the
/// integer part. Raising `bits` never widens the enclosure.
pub fn pow2(x: &Rational, bits: u32) -> Interval {
    let whole = x.floor();
    let frac = x - &whole;
    let scale = pow2_int(whole.numer());
    if frac.is_zero() {
        return Interval::point(scale, bits);
    }
    // 2^(p/q) with 0 < p < q
    let p: usize = frac
        .numer()
        .magnitude()
        .try_into()
        .expect("exponent numerator too large");
    let q: u32 = frac
        .denom()
        .magnitude()
        .try_into()
        .expect("exponent denominator too large");
    let radicand = BigUint::one() << (p + bits as usize * q as usize);
    let root = radicand.nth_root(q);
    let unit = Rational::new(BigInt::one(), BigInt::one() << bits as usize);
    let lo = Rational::from_integer(BigInt::from(root)) * &unit;
    let hi = &lo + &unit;
    Interval::new(lo * &scale, hi * &scale, bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn integer_exponents_are_exact() {
        assert_eq!(pow2(&int(3), 16), Interval::point(int(8), 16));
        assert_eq!(pow2(&int(-2), 16), Interval::point(rat(1, 4), 16));
    }

    #[test]
    fn sqrt2_enclosure() {
        let iv = pow2(&rat(1, 2), 20);
        let lo = iv.lower() * iv.lower();
        let hi = iv.upper() * iv.upper();
        assert!(lo <= int(2) && int(2) <= hi);
        assert!(iv.width() <= rat(1, 1 << 20));
    }

    #[test]
    fn negative_fractional_exponent() {
        // 2^(-1/2) = 2^(-1) * 2^(1/2)
        let iv = pow2(&rat(-1, 2), 24);
        let lo = iv.lower() * iv.lower();
        let hi = iv.upper() * iv.upper();
        assert!(lo <= rat(1, 2) && rat(1, 2) <= hi);
    }

    #[test]
    fn refinement_is_nested() {
        for (p, q) in [(1, 3), (2, 3), (5, 7), (-7, 5), (13, 4)] {
            let x = rat(p, q);
            for bits in [4u32, 8, 16, 32] {
                let coarse = pow2(&x, bits);
                let fine = pow2(&x, bits + 8);
                assert!(fine.is_subset_of(&coarse), "2^{x} at {bits}");
            }
        }
    }

    #[test]
    fn comparisons() {
        let iv = Interval::new(rat(1, 3), rat(1, 2), 8);
        assert_eq!(iv.cmp_rational(&rat(1, 4)), Some(Ordering::Greater));
        assert_eq!(iv.cmp_rational(&rat(3, 4)), Some(Ordering::Less));
        assert_eq!(iv.cmp_rational(&rat(2, 5)), None);
        assert_eq!(
            Interval::new(rat(-1, 2), rat(1, 3), 8).abs(),
            Interval::new(int(0), rat(1, 2), 8)
        );
    }
}
