use crate::alphabet::{Alphabet, Word};
use crate::error::{Error, Result};

/// Deterministic acceptor; a missing transition rejects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Alphabet,
    start: usize,
    accepting: Vec<bool>,
    delta: Vec<Vec<Option<usize>>>,
}

impl Dfa {
    pub fn new(
        alphabet: Alphabet,
        num_states: usize,
        start: usize,
        accepting: impl IntoIterator<Item = usize>,
        transitions: impl IntoIterator<Item = (usize, usize, usize)>,
    ) -> Result<Self> {
        let check = |q: usize| {
            if q < num_states {
                Ok(q)
            } else {
                Err(Error::InvalidAutomaton(format!(
                    "DFA state {q} out of range"
                )))
            }
        };
        check(start)?;
        let mut acc = vec![false; num_states];
        for q in accepting {
            acc[check(q)?] = true;
        }
        let mut delta = vec![vec![None; alphabet.len()]; num_states];
        for (from, sym, to) in transitions {
            check(from)?;
            check(to)?;
            if sym >= alphabet.len() {
                return Err(Error::UnknownSymbol(format!("#{sym}")));
            }
            if delta[from][sym].replace(to).is_some_and(|old| old != to) {
                return Err(Error::InvalidAutomaton(format!(
                    "two targets for ({from}, {})",
                    alphabet.name(sym)
                )));
            }
        }
        Ok(Dfa {
            alphabet,
            start,
            accepting: acc,
            delta,
        })
    }

    /// One accepting state looping on every symbol.
    pub fn sigma_star(alphabet: Alphabet) -> Self {
        let loops: Vec<_> = (0..alphabet.len()).map(|s| (0, s, 0)).collect();
        Dfa::new(alphabet, 1, 0, [0], loops).unwrap()
    }

    pub fn empty_language(alphabet: Alphabet) -> Self {
        Dfa::new(alphabet, 1, 0, [], []).unwrap()
    }

    /// Accepts exactly the words of length `n`.
    pub fn length_exactly(alphabet: Alphabet, n: usize) -> Self {
        let size = alphabet.len();
        let trans: Vec<_> = (0..n)
            .flat_map(|q| (0..size).map(move |s| (q, s, q + 1)))
            .collect();
        Dfa::new(alphabet, n + 1, 0, [n], trans).unwrap()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn next(&self, q: usize, symbol: usize) -> Option<usize> {
        self.delta[q][symbol]
    }

    pub fn accepts(&self, w: &Word) -> Result<bool> {
        self.alphabet.check(w)?;
        let mut q = self.start;
        for &s in w.ids() {
            match self.delta[q][s] {
                Some(next) => q = next,
                None => return Ok(false),
            }
        }
        Ok(self.accepting[q])
    }
}
