//! Generators, their formal inverses, and words over them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GscError;

/// A generator or a formal inverse of one.
///
/// Encoded as `2 * generator + inverse_bit`, so the derived ordering is
/// `a < a' < b < b' < ...` and inversion is flipping the low bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Letter(u32);

impl Letter {
    pub fn generator(index: usize) -> Self {
        Letter((index as u32) << 1)
    }

    pub fn new(index: usize, inverse: bool) -> Self {
        Letter(((index as u32) << 1) | inverse as u32)
    }

    pub fn index(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }

    /// Position in the ordered list of all `2|S|` letters.
    pub fn code(self) -> usize {
        self.0 as usize
    }

    pub fn from_code(code: usize) -> Self {
        Letter(code as u32)
    }
}

/// The ordered generating set `S`. Inverses are implicit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new<I, T>(names: I) -> Result<Self, GscError>
    where
        I: IntoIterator<Item = T>,
        T: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() || name.contains('\'') || name.chars().any(char::is_whitespace) {
                return Err(GscError::Schema {
                    path: format!("/alphabet/{i}"),
                    message: format!("invalid generator name {name:?}"),
                });
            }
            if names[..i].contains(name) {
                return Err(GscError::Schema {
                    path: format!("/alphabet/{i}"),
                    message: format!("duplicate generator {name:?}"),
                });
            }
        }
        Ok(Alphabet { names })
    }

    /// Alphabet `x1, x2, ..., xn`.
    pub fn numbered(n: usize) -> Self {
        Alphabet {
            names: (1..=n).map(|i| format!("x{i}")).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// All letters and inverses in canonical order.
    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..2 * self.names.len()).map(Letter::from_code)
    }

    pub fn generators(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.names.len()).map(Letter::generator)
    }

    pub fn contains(&self, letter: Letter) -> bool {
        letter.index() < self.names.len()
    }

    /// Parses `s` or `s'`.
    pub fn parse_letter(&self, text: &str) -> Result<Letter, GscError> {
        let (base, inverse) = match text.strip_suffix('\'') {
            Some(base) => (base, true),
            None => (text, false),
        };
        if base.contains('\'') {
            return Err(GscError::BadLetter(text.to_string()));
        }
        self.names
            .iter()
            .position(|n| n == base)
            .map(|i| Letter::new(i, inverse))
            .ok_or_else(|| GscError::BadLetter(text.to_string()))
    }

    pub fn letter_name(&self, letter: Letter) -> String {
        let base = &self.names[letter.index()];
        if letter.is_inverse() {
            format!("{base}'")
        } else {
            base.clone()
        }
    }

    /// Parses a word. Tokens are separated by whitespace; when the text has no
    /// whitespace and every generator is a single character, each character
    /// (with an optional trailing `'`) is a token. `1` or the empty string is
    /// the empty word. `^-1` is accepted as a synonym for `'`.
    pub fn parse_word(&self, text: &str) -> Result<Word, GscError> {
        let text = text.trim().replace("^-1", "'");
        if text.is_empty() || text == "1" {
            return Ok(Word::empty());
        }
        let tokens: Vec<String> = if text.contains(char::is_whitespace) {
            text.split_whitespace().map(str::to_string).collect()
        } else if self.names.iter().all(|n| n.chars().count() == 1) {
            let mut tokens: Vec<String> = Vec::new();
            for ch in text.chars() {
                if ch == '\'' {
                    match tokens.last_mut() {
                        Some(last) => last.push('\''),
                        None => return Err(GscError::BadLetter(text.clone())),
                    }
                } else {
                    tokens.push(ch.to_string());
                }
            }
            tokens
        } else {
            vec![text.clone()]
        };
        let letters = tokens
            .iter()
            .map(|t| self.parse_letter(t))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Word::from(letters))
    }

    pub fn format_word(&self, word: &Word) -> String {
        if word.is_empty() {
            return "1".to_string();
        }
        let parts: Vec<String> = word.iter().map(|&l| self.letter_name(l)).collect();
        if self.names.iter().all(|n| n.chars().count() == 1) {
            parts.concat()
        } else {
            parts.join(" ")
        }
    }
}

/// A word in `S ∪ S⁻¹`, i.e. an element of the free group `F(S)` before
/// reduction.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Letter> {
        self.0.iter()
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// `self · other` followed by free reduction.
    pub fn mul(&self, other: &Word) -> Word {
        self.concat(other).free_reduced()
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1].inverse())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_freely_reduced()
            && match (self.0.first(), self.0.last()) {
                (Some(&f), Some(&l)) if self.len() > 1 => f != l.inverse(),
                _ => true,
            }
    }

    pub fn free_reduced(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.len());
        for &l in &self.0 {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// Strips a conjugating prefix/suffix pair so the word is cyclically
    /// reduced. Returns the conjugator `c` and the core `r` with
    /// `self = c r c⁻¹` (after free reduction).
    pub fn cyclic_core(&self) -> (Word, Word) {
        let reduced = self.free_reduced();
        let letters = reduced.letters();
        let mut lo = 0;
        let mut hi = letters.len();
        while hi - lo >= 2 && letters[lo] == letters[hi - 1].inverse() {
            lo += 1;
            hi -= 1;
        }
        (Word(letters[..lo].to_vec()), Word(letters[lo..hi].to_vec()))
    }

    pub fn rotated(&self, by: usize) -> Word {
        if self.is_empty() {
            return Word::empty();
        }
        let k = by % self.len();
        let mut letters = self.0[k..].to_vec();
        letters.extend_from_slice(&self.0[..k]);
        Word(letters)
    }

    pub fn subword(&self, start: usize, len: usize) -> Word {
        Word(self.0[start..start + len].to_vec())
    }

    /// Shortlex comparison (shorter first, then lexicographic on letter order).
    pub fn shortlex_cmp(&self, other: &Word) -> std::cmp::Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }

    pub fn pow(&self, k: usize) -> Word {
        let mut letters = Vec::with_capacity(self.len() * k);
        for _ in 0..k {
            letters.extend_from_slice(&self.0);
        }
        Word(letters)
    }
}

impl From<Vec<Letter>> for Word {
    fn from(letters: Vec<Letter>) -> Self {
        Word(letters)
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<T: IntoIterator<Item = Letter>>(iter: T) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Word {
    type Item = &'a Letter;
    type IntoIter = std::slice::Iter<'a, Letter>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for Word {
    /// Alphabet-free rendering, `x0 x1' ...`. Use [`Alphabet::format_word`]
    /// for named output.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "x{}{}", l.index(), if l.is_inverse() { "'" } else { "" })?;
        }
        Ok(())
    }
}
