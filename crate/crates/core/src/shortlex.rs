//! Exhaustive enumeration of `Σ^{≤L}` (or `Σ*`) in shortlex order.

use crate::alphabet::{Alphabet, Word};

/// Iterator over words by length, then lexicographically by the alphabet's
/// declared symbol order.
#[derive(Clone, Debug)]
pub struct Shortlex {
    size: usize,
    max_len: Option<usize>,
    next: Option<Vec<usize>>,
}

pub fn shortlex_enumerate(alphabet: &Alphabet, max_len: Option<usize>) -> Shortlex {
    Shortlex {
        size: alphabet.len(),
        max_len,
        next: Some(Vec::new()),
    }
}

impl Iterator for Shortlex {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        // odometer increment; overflow moves to the next length
        let mut i = succ.len();
        loop {
            if i == 0 {
                succ = vec![0; current.len() + 1];
                break;
            }
            i -= 1;
            if succ[i] + 1 < self.size {
                succ[i] += 1;
                break;
            }
            succ[i] = 0;
        }
        if self.max_len.is_none_or(|m| succ.len() <= m) {
            self.next = Some(succ);
        }
        Some(Word::from_ids(current))
    }
}

/// `Σ_{i=0}^{L} |Σ|^i`.
pub fn count_upto(alphabet_size: usize, max_len: usize) -> u128 {
    let mut total = 0u128;
    let mut level = 1u128;
    for _ in 0..=max_len {
        total += level;
        level *= alphabet_size as u128;
    }
    total
}

/// Position of `w` in the shortlex order (0 for ε).
pub fn shortlex_index(alphabet_size: usize, w: &Word) -> u128 {
    let offset = if w.is_empty() {
        0
    } else {
        count_upto(alphabet_size, w.len() - 1)
    };
    let rank = w
        .ids()
        .iter()
        .fold(0u128, |acc, &s| acc * alphabet_size as u128 + s as u128);
    offset + rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn render(a: &Alphabet, max: usize) -> Vec<String> {
        shortlex_enumerate(a, Some(max))
            .map(|w| a.render(&w))
            .collect()
    }

    #[test]
    fn binary_up_to_one() {
        assert_eq!(render(&Alphabet::binary(), 1), vec!["", "0", "1"]);
    }

    #[test]
    fn unary_up_to_three() {
        assert_eq!(render(&Alphabet::unary(), 3), vec!["", "a", "aa", "aaa"]);
    }

    #[test]
    fn binary_up_to_two() {
        let words = render(&Alphabet::binary(), 2);
        assert_eq!(words.len(), 7);
        assert_eq!(words.last().unwrap(), "11");
    }

    #[test]
    fn zero_bound_yields_only_epsilon() {
        assert_eq!(render(&Alphabet::binary(), 0), vec![""]);
    }

    #[test]
    fn unbounded_stream_continues() {
        let a = Alphabet::binary();
        let w: Vec<_> = shortlex_enumerate(&a, None).take(16).collect();
        assert_eq!(a.render(&w[7]), "000");
        assert_eq!(a.render(&w[15]), "0000");
    }

    #[test]
    fn index_matches_position() {
        let a = Alphabet::new(["x", "y", "z"]).unwrap();
        for (i, w) in shortlex_enumerate(&a, Some(4)).enumerate() {
            assert_eq!(shortlex_index(3, &w), i as u128);
        }
    }
}
