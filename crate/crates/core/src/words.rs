//! Reduced words over a finite signed alphabet, i.e. elements of the free
//! group `F(A)`.
//!
//! Text format: when every symbol is a single lowercase ASCII letter the
//! alphabet is *compact* and a word is written letter by letter, lowercase
//! for a generator and uppercase for its inverse (`baB` is `b a b^-1`).
//! Otherwise symbols are joined with `.` and an inverse is written with its
//! first character uppercased (`x1.X2` is `x1 x2^-1`).

use std::fmt;
use std::ops::Mul;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest alphabet expressible in the compact one-letter text format.
pub const MAX_COMPACT_LETTERS: usize = 26;

/// Ordered list of distinct generator symbols.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alphabet {
    symbols: Arc<[String]>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = S>) -> Result<Self> {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet must not be empty".into()));
        }
        for (i, s) in symbols.iter().enumerate() {
            let mut chars = s.chars();
            let first_ok = chars.next().is_some_and(|c| c.is_ascii_lowercase());
            if !first_ok || !chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit()) {
                return Err(Error::InvalidAlphabet(format!(
                    "symbol {s:?} must be a lowercase letter followed by lowercase letters or digits"
                )));
            }
            if symbols[..i].contains(s) {
                return Err(Error::InvalidAlphabet(format!("duplicate symbol {s:?}")));
            }
        }
        Ok(Alphabet { symbols: symbols.into() })
    }

    /// The first `n` letters `a, b, c, ...`.
    pub fn letters(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_COMPACT_LETTERS {
            return Err(Error::InvalidAlphabet(format!(
                "letter alphabets have 1..={MAX_COMPACT_LETTERS} symbols, got {n}"
            )));
        }
        Alphabet::new((0..n).map(|i| ((b'a' + i as u8) as char).to_string()))
    }

    /// Parses a compact alphabet such as `"ab"`.
    pub fn from_letters(text: &str) -> Result<Self> {
        Alphabet::new(text.chars().map(|c| c.to_string()))
    }

    /// Fresh symbols `prefix1, prefix2, ..., prefixN`. `n` may be zero, which
    /// is the alphabet of the trivial free group.
    pub fn indexed(prefix: &str, n: usize) -> Self {
        let symbols: Vec<String> = (1..=n).map(|i| format!("{prefix}{i}")).collect();
        Alphabet { symbols: symbols.into() }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbol(&self, index: usize) -> &str {
        &self.symbols[index]
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn index_of(&self, symbol: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == symbol)
    }

    pub fn is_compact(&self) -> bool {
        self.symbols.iter().all(|s| s.len() == 1)
    }

    /// Parses a word and returns its free reduction.
    pub fn parse(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        let mut letters = Vec::new();
        if self.is_compact() {
            for c in text.chars() {
                letters.push(self.parse_token(&c.to_string())?);
            }
        } else if !text.is_empty() {
            for token in text.split('.') {
                letters.push(self.parse_token(token.trim())?);
            }
        }
        Ok(Word::from_letters(letters))
    }

    fn parse_token(&self, token: &str) -> Result<Letter> {
        if let Some(i) = self.index_of(token) {
            return Ok(Letter::new(i));
        }
        let mut chars = token.chars();
        if let Some(first) = chars.next() {
            if first.is_ascii_uppercase() {
                let lowered: String =
                    std::iter::once(first.to_ascii_lowercase()).chain(chars).collect();
                if let Some(i) = self.index_of(&lowered) {
                    return Ok(Letter::new(i).inverse());
                }
            }
        }
        Err(Error::UnknownSymbol(token.to_string()))
    }

    /// Parses a comma-separated list of words; identity entries are kept.
    pub fn parse_list(&self, text: &str) -> Result<Vec<Word>> {
        if text.trim().is_empty() {
            return Ok(Vec::new());
        }
        text.split(',').map(|w| self.parse(w)).collect()
    }

    pub fn format(&self, word: &Word) -> String {
        let tokens = word.letters().iter().map(|l| self.format_letter(*l));
        if self.is_compact() {
            tokens.collect()
        } else {
            tokens.collect::<Vec<_>>().join(".")
        }
    }

    fn format_letter(&self, letter: Letter) -> String {
        let s = self.symbol(letter.symbol);
        if letter.inverse {
            let mut chars = s.chars();
            let first = chars.next().map(|c| c.to_ascii_uppercase());
            first.into_iter().chain(chars).collect()
        } else {
            s.to_string()
        }
    }

    /// Multiplies two words after checking both are over this alphabet.
    pub fn multiply(&self, u: &Word, v: &Word) -> Result<Word> {
        u.check_alphabet(self)?;
        v.check_alphabet(self)?;
        Ok(u * v)
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.symbols.iter()).finish()
    }
}

/// A generator or its inverse.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Letter {
    pub symbol: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(symbol: usize) -> Self {
        Letter { symbol, inverse: false }
    }

    #[must_use]
    pub fn inverse(self) -> Self {
        Letter { symbol: self.symbol, inverse: !self.inverse }
    }

    pub fn cancels(self, other: Letter) -> bool {
        self.symbol == other.symbol && self.inverse != other.inverse
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    /// Free reduction of an arbitrary letter sequence.
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            match out.last() {
                Some(&last) if last.cancels(l) => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Word { letters: out }
    }

    pub fn generator(symbol: usize) -> Self {
        Word { letters: vec![Letter::new(symbol)] }
    }

    /// `a_symbol ^ exponent`.
    pub fn generator_power(symbol: usize, exponent: i64) -> Self {
        let l = if exponent < 0 { Letter::new(symbol).inverse() } else { Letter::new(symbol) };
        Word { letters: vec![l; exponent.unsigned_abs() as usize] }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    #[must_use]
    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    #[must_use]
    pub fn pow(&self, exponent: i64) -> Word {
        let base = if exponent < 0 { self.inverse() } else { self.clone() };
        let mut acc = Word::identity();
        for _ in 0..exponent.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    /// `u v u^-1 v^-1`.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        &(&(u * v) * &u.inverse()) * &v.inverse()
    }

    pub fn check_alphabet(&self, alphabet: &Alphabet) -> Result<()> {
        match self.letters.iter().map(|l| l.symbol).max() {
            Some(m) if m >= alphabet.len() => {
                Err(Error::AlphabetMismatch { expected: alphabet.len(), found: m + 1 })
            }
            _ => Ok(()),
        }
    }

    /// Exponent sum of every generator (the image in `Z^n`).
    pub fn exponent_sums(&self, n: usize) -> Vec<i64> {
        let mut v = vec![0i64; n];
        for l in &self.letters {
            v[l.symbol] += if l.inverse { -1 } else { 1 };
        }
        v
    }
}

impl Mul<&Word> for &Word {
    type Output = Word;

    fn mul(self, rhs: &Word) -> Word {
        // only the junction can cancel
        let mut k = 0;
        while k < self.len().min(rhs.len())
            && self.letters[self.len() - 1 - k].cancels(rhs.letters[k])
        {
            k += 1;
        }
        let mut letters = Vec::with_capacity(self.len() + rhs.len() - 2 * k);
        letters.extend_from_slice(&self.letters[..self.len() - k]);
        letters.extend_from_slice(&rhs.letters[k..]);
        Word { letters }
    }
}

impl Mul for Word {
    type Output = Word;

    fn mul(self, rhs: Word) -> Word {
        &self * &rhs
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word::from_letters(iter)
    }
}
