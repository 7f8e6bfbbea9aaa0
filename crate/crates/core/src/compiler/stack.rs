//! Base-4 stack codec. A binary stack `b₁b₂…` (top first) is stored as
//! `Σ (2bᵢ+1)/4^i`: digits 1 and 3 keep every content distinct and make
//! the top readable by thresholds on `4·value`.

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, rat, Rational};
use num_traits::{One, Signed, Zero};

/// Encodes a stack given top first.
pub fn encode_stack(bits: &[bool]) -> Rational {
    bits.iter()
        .rev()
        .fold(Rational::zero(), |acc, &b| push(&acc, b))
}

/// Inverse of [`encode_stack`]; fails on values that are not codewords.
pub fn decode_stack(value: &Rational) -> Result<Vec<bool>> {
    let bad = || Error::NotACodeword(format_rational(value));
    if value.is_negative() || *value >= Rational::one() {
        return Err(bad());
    }
    let mut bits = Vec::new();
    let mut v = value.clone();
    while !v.is_zero() {
        let scaled = &v * int(4);
        let digit = scaled.floor();
        let bit = if digit == int(1) {
            false
        } else if digit == int(3) {
            true
        } else {
            return Err(bad());
        };
        bits.push(bit);
        v = scaled - digit;
        // a codeword has a power-of-four denominator and terminates
        if bits.len() > 4 * value.denom().bits() as usize + 4 {
            return Err(bad());
        }
    }
    Ok(bits)
}

pub fn push(value: &Rational, bit: bool) -> Rational {
    value / int(4) + if bit { rat(3, 4) } else { rat(1, 4) }
}

/// `None` for the empty stack.
pub fn top(value: &Rational) -> Option<bool> {
    if value.is_zero() {
        None
    } else {
        Some(*value >= rat(1, 2))
    }
}

/// Pops the top bit; popping the empty stack leaves it empty.
pub fn pop(value: &Rational) -> Rational {
    match top(value) {
        None => Rational::zero(),
        Some(b) => value * int(4) - if b { int(3) } else { int(1) },
    }
}

/// The unshifted map `Σ bᵢ/4^i`. Not injective: trailing zeros vanish, so
/// `"1"` and `"10"` share the value `1/4`. Kept for comparison only; the
/// compiler never uses it.
pub fn encode_stack_literal(bits: &[bool]) -> Rational {
    let mut acc = Rational::zero();
    let mut place = rat(1, 4);
    for &b in bits {
        if b {
            acc += &place;
        }
        place /= int(4);
    }
    acc
}

/// Always `false`: [`encode_stack_literal`] cannot be decoded.
pub const LITERAL_CODEC_IS_INJECTIVE: bool = false;

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bits(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    #[test]
    fn examples() {
        assert_eq!(encode_stack(&bits("1")), rat(3, 4));
        assert_eq!(decode_stack(&rat(3, 4)).unwrap(), bits("1"));
        assert_eq!(encode_stack(&[]), int(0));
        assert_eq!(encode_stack(&bits("10")), rat(13, 16));
        assert_eq!(decode_stack(&int(0)).unwrap(), Vec::<bool>::new());
    }

    #[test]
    fn literal_codec_collides() {
        assert_eq!(encode_stack_literal(&bits("1")), rat(1, 4));
        assert_eq!(
            encode_stack_literal(&bits("1")),
            encode_stack_literal(&bits("10"))
        );
        assert_ne!(encode_stack(&bits("1")), encode_stack(&bits("10")));
    }

    #[test]
    fn rejects_non_codewords() {
        for v in [rat(1, 2), rat(1, 3), int(1), rat(-1, 4), rat(1, 16)] {
            assert!(decode_stack(&v).is_err(), "{v}");
        }
    }

    #[test]
    fn stack_operations() {
        let s = encode_stack(&bits("01"));
        assert_eq!(top(&s), Some(false));
        assert_eq!(pop(&s), encode_stack(&bits("1")));
        assert_eq!(push(&s, true), encode_stack(&bits("101")));
        assert_eq!(top(&int(0)), None);
        assert_eq!(pop(&int(0)), int(0));
    }

    proptest! {
        #[test]
        fn round_trip(stack in prop::collection::vec(any::<bool>(), 0..40)) {
            let v = encode_stack(&stack);
            prop_assert_eq!(decode_stack(&v).unwrap(), stack.clone());
            prop_assert!(v >= int(0) && v < int(1));
            if let Some((&t, rest)) = stack.split_first() {
                prop_assert_eq!(top(&v), Some(t));
                prop_assert_eq!(pop(&v), encode_stack(rest));
            }
        }

        #[test]
        fn injective(a in prop::collection::vec(any::<bool>(), 0..12), b in prop::collection::vec(any::<bool>(), 0..12)) {
            prop_assert_eq!(encode_stack(&a) == encode_stack(&b), a == b);
        }
    }
}
