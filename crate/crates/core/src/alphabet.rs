//! Alphabets, the end marker, and words.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

pub const END_MARKER: &str = "$";

/// Ordered set of distinct symbols. Symbol `i` has id `i`; in `Σ_$` the end
/// marker takes id `len()`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = S>) -> Result<Self> {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::InvalidAlphabet("no symbols".into()));
        }
        for (i, s) in symbols.iter().enumerate() {
            if s.is_empty() {
                return Err(Error::InvalidAlphabet("empty symbol".into()));
            }
            if s == END_MARKER {
                return Err(Error::InvalidAlphabet(
                    "`$` is reserved for the end marker".into(),
                ));
            }
            if symbols[..i].contains(s) {
                return Err(Error::InvalidAlphabet(format!("duplicate symbol `{s}`")));
            }
        }
        Ok(Alphabet { symbols })
    }

    pub fn binary() -> Self {
        Alphabet::new(["0", "1"]).unwrap()
    }

    pub fn unary() -> Self {
        Alphabet::new(["a"]).unwrap()
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `|Σ_$|`.
    pub fn len_with_marker(&self) -> usize {
        self.symbols.len() + 1
    }

    pub fn end_marker(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn name(&self, id: usize) -> &str {
        if id == self.symbols.len() {
            END_MARKER
        } else {
            &self.symbols[id]
        }
    }

    pub fn id(&self, symbol: &str) -> Result<usize> {
        self.symbols
            .iter()
            .position(|s| s == symbol)
            .ok_or_else(|| Error::UnknownSymbol(symbol.to_string()))
    }

    /// Id in `Σ_$` (accepts `$`).
    pub fn id_with_marker(&self, symbol: &str) -> Result<usize> {
        if symbol == END_MARKER {
            Ok(self.end_marker())
        } else {
            self.id(symbol)
        }
    }

    fn single_chars(&self) -> bool {
        self.symbols.iter().all(|s| s.chars().count() == 1)
    }

    /// Parses a word. Single-character alphabets read the text character by
    /// character; otherwise symbols are separated by whitespace or commas.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        let ids = if self.single_chars() && !text.contains([' ', ',']) {
            text.chars()
                .map(|c| self.id(&c.to_string()))
                .collect::<Result<Vec<_>>>()?
        } else {
            text.split([' ', ','])
                .filter(|t| !t.is_empty())
                .map(|t| self.id(t))
                .collect::<Result<Vec<_>>>()?
        };
        Ok(Word::from_ids(ids))
    }

    pub fn render(&self, word: &Word) -> String {
        let sep = if self.single_chars() { "" } else { " " };
        word.ids()
            .iter()
            .map(|&i| self.name(i))
            .collect::<Vec<_>>()
            .join(sep)
    }

    pub fn check(&self, word: &Word) -> Result<()> {
        match word.ids().iter().find(|&&i| i >= self.len()) {
            Some(i) => Err(Error::UnknownSymbol(format!("#{i}"))),
            None => Ok(()),
        }
    }
}

impl TryFrom<Vec<String>> for Alphabet {
    type Error = Error;
    fn try_from(v: Vec<String>) -> Result<Self> {
        Alphabet::new(v)
    }
}

impl From<Alphabet> for Vec<String> {
    fn from(a: Alphabet) -> Self {
        a.symbols
    }
}

/// Finite word stored as symbol ids; the end marker is never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_ids(ids: Vec<usize>) -> Self {
        Word(ids)
    }

    pub fn ids(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `w_{:n}`.
    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n].to_vec())
    }

    pub fn push(&mut self, id: usize) {
        self.0.push(id);
    }

    pub fn child(&self, id: usize) -> Word {
        let mut w = self.clone();
        w.push(id);
        w
    }
}

/// Shortlex order: by length, then lexicographically by symbol id.
pub fn shortlex_cmp(a: &Word, b: &Word) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.ids().cmp(b.ids()))
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join("."))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_alphabets() {
        assert!(Alphabet::new(Vec::<String>::new()).is_err());
        assert!(Alphabet::new(["a", "$"]).is_err());
        assert!(Alphabet::new(["a", "a"]).is_err());
    }

    #[test]
    fn marker_ids() {
        let a = Alphabet::binary();
        assert_eq!(a.end_marker(), 2);
        assert_eq!(a.id_with_marker("$").unwrap(), 2);
        assert_eq!(a.name(2), "$");
    }

    #[test]
    fn parse_and_render() {
        let a = Alphabet::binary();
        let w = a.parse_word("0110").unwrap();
        assert_eq!(w.ids(), &[0, 1, 1, 0]);
        assert_eq!(a.render(&w), "0110");
        assert_eq!(a.parse_word("").unwrap(), Word::empty());
        assert!(a.parse_word("012").is_err());

        let b = Alphabet::new(["ab", "c"]).unwrap();
        let w = b.parse_word("ab c ab").unwrap();
        assert_eq!(w.ids(), &[0, 1, 0]);
        assert_eq!(b.render(&w), "ab c ab");
    }

    #[test]
    fn prefix() {
        let w = Word::from_ids(vec![1, 0, 1]);
        assert_eq!(w.prefix(2).ids(), &[1, 0]);
        assert_eq!(w.prefix(0), Word::empty());
    }
}
