//! Alphabets, symbols and finite words.

use crate::error::Error;
use crate::Result;
use std::cmp::Ordering;
use std::fmt;

/// A letter, identified by its index in the owning [`Alphabet`].
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Symbol(pub u8);

impl Symbol {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// An ordered, duplicate-free set of display characters.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Alphabet {
    chars: Vec<char>,
}

impl Alphabet {
    pub fn new(chars: impl IntoIterator<Item = char>) -> Result<Self> {
        let chars: Vec<char> = chars.into_iter().collect();
        if chars.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        for (i, &c) in chars.iter().enumerate() {
            if chars[..i].contains(&c) {
                return Err(Error::DuplicateChar(c));
            }
        }
        Ok(Alphabet { chars })
    }

    pub fn from_str(s: &str) -> Result<Self> {
        Self::new(s.chars())
    }

    /// Alphabet of decimal digits `0..size`, for beta-shift automata.
    pub fn digits(size: usize) -> Result<Self> {
        assert!(size <= 10, "digit alphabets use single characters 0-9");
        Self::new((0..size).map(|d| char::from(b'0' + d as u8)))
    }

    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.chars.len()).map(|i| Symbol(i as u8))
    }

    pub fn symbol(&self, c: char) -> Result<Symbol> {
        self.chars
            .iter()
            .position(|&x| x == c)
            .map(|i| Symbol(i as u8))
            .ok_or(Error::UnknownChar(c))
    }

    pub fn char(&self, s: Symbol) -> char {
        self.chars[s.index()]
    }

    pub fn word(&self, s: &str) -> Result<Word> {
        let mut syms = Vec::with_capacity(s.len());
        for c in s.chars() {
            syms.push(self.symbol(c)?);
        }
        Ok(Word(syms))
    }

    pub fn format(&self, w: &Word) -> String {
        w.0.iter().map(|&s| self.char(s)).collect()
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.chars {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// A finite word over some alphabet. The empty word is `Word::default()`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Word(pub Vec<Symbol>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, s: Symbol) {
        self.0.push(s);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn repeat(&self, n: usize) -> Word {
        let mut v = Vec::with_capacity(self.len() * n);
        for _ in 0..n {
            v.extend_from_slice(&self.0);
        }
        Word(v)
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> Word {
        Word(self.0[range].to_vec())
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.len() >= self.0.len() && other.0[..self.0.len()] == self.0[..]
    }

    pub fn is_proper_prefix_of(&self, other: &Word) -> bool {
        self.0.len() < other.0.len() && self.is_prefix_of(other)
    }

    pub fn is_factor_of(&self, other: &Word) -> bool {
        if self.is_empty() {
            return true;
        }
        other.0.windows(self.len()).any(|w| w == self.0)
    }

    /// All factors of length at most `max_len`, the empty word included.
    pub fn factors(&self, max_len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for len in 1..=max_len.min(self.len()) {
            for w in self.0.windows(len) {
                out.push(Word(w.to_vec()));
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// Left rotation by `k` positions.
    pub fn rotate(&self, k: usize) -> Word {
        if self.is_empty() {
            return Word::empty();
        }
        let k = k % self.len();
        let mut v = self.0[k..].to_vec();
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    /// Length-then-lexicographic comparison, the order used whenever a
    /// shortest witness is extracted.
    pub fn len_lex_cmp(&self, other: &Word) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.cmp(other))
    }
}

impl FromIterator<Symbol> for Word {
    fn from_iter<T: IntoIterator<Item = Symbol>>(iter: T) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// All words of length exactly `n` over an alphabet of `k` letters,
/// lexicographic order.
pub fn all_words(k: usize, n: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * k);
        for w in &out {
            for s in 0..k {
                let mut v = w.clone();
                v.push(Symbol(s as u8));
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// All words of length at most `n`, length-lex order.
pub fn all_words_up_to(k: usize, n: usize) -> Vec<Word> {
    (0..=n).flat_map(|l| all_words(k, l)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alphabet_rejects_duplicates() {
        assert!(Alphabet::from_str("aba").is_err());
        assert!(Alphabet::from_str("").is_err());
    }

    #[test]
    fn word_roundtrip() {
        let ab = Alphabet::from_str("ab").unwrap();
        let w = ab.word("abba").unwrap();
        assert_eq!(ab.format(&w), "abba");
        assert_eq!(w.len(), 4);
    }

    #[test]
    fn rotation_and_factors() {
        let ab = Alphabet::from_str("ab").unwrap();
        let w = ab.word("aab").unwrap();
        assert_eq!(ab.format(&w.rotate(1)), "aba");
        let f = w.factors(2);
        let shown: Vec<String> = f.iter().map(|x| ab.format(x)).collect();
        assert!(shown.contains(&"aa".to_string()));
        assert!(shown.contains(&"ab".to_string()));
        assert!(!shown.contains(&"ba".to_string()));
    }

    #[test]
    fn word_enumeration() {
        assert_eq!(all_words(2, 3).len(), 8);
        assert_eq!(all_words_up_to(2, 3).len(), 1 + 2 + 4 + 8);
    }
}
