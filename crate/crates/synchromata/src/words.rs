//! Finite words over the alphabet `X_n = {0, .., n-1}`.

use std::fmt;

use crate::error::{Error, Result};

/// A letter of `X_n`, stored as its integer value.
pub type Letter = usize;

/// A finite word over `X_n`. The empty word is a legal value.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Parses a word from decimal digit characters, e.g. `"021"`.
    pub fn from_digits(digits: &str) -> Result<Self> {
        let mut letters = Vec::with_capacity(digits.len());
        for c in digits.chars() {
            let d = c.to_digit(10).ok_or(Error::Parse {
                line: 0,
                message: format!("invalid word digit {c:?}"),
            })?;
            letters.push(d as Letter);
        }
        Ok(Word(letters))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn repeat(&self, times: usize) -> Word {
        let mut v = Vec::with_capacity(self.0.len() * times);
        for _ in 0..times {
            v.extend_from_slice(&self.0);
        }
        Word(v)
    }

    /// True iff the word is not a proper power of a strictly shorter word.
    pub fn is_prime(&self) -> Result<bool> {
        if self.0.is_empty() {
            return Err(Error::EmptyWord);
        }
        let len = self.0.len();
        for period in 1..len {
            if !len.is_multiple_of(period) {
                continue;
            }
            if (period..len).all(|i| self.0[i] == self.0[i - period]) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The shortest word whose power equals this word.
    pub fn primitive_root(&self) -> Word {
        let len = self.0.len();
        for period in 1..=len {
            if !len.is_multiple_of(period) {
                continue;
            }
            if (period..len).all(|i| self.0[i] == self.0[i - period]) {
                return Word(self.0[..period].to_vec());
            }
        }
        self.clone()
    }

    /// Clockwise rotation by `i`: the last `i` letters move to the front.
    pub fn rotation(&self, i: usize) -> Word {
        if self.0.is_empty() {
            return self.clone();
        }
        let mut v = self.0.clone();
        let shift = i % v.len();
        v.rotate_right(shift);
        Word(v)
    }

    /// Least `i` with `self.rotation(i) == other`, if any.
    pub fn rotation_index(&self, other: &Word) -> Result<Option<usize>> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        for i in 0..self.len().max(1) {
            if &self.rotation(i) == other {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    pub fn is_rotation_of(&self, other: &Word) -> Result<bool> {
        Ok(self.rotation_index(other)?.is_some())
    }

    /// Rank of the word among all words of its length over `X_n`,
    /// most significant letter first.
    pub fn rank(&self, alphabet: usize) -> usize {
        let mut r = 0usize;
        for &l in &self.0 {
            r = r * alphabet + l;
        }
        r
    }

    pub fn from_rank(mut rank: usize, len: usize, alphabet: usize) -> Word {
        let mut v = vec![0; len];
        for i in (0..len).rev() {
            v[i] = rank % alphabet;
            rank /= alphabet;
        }
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        if self.0.iter().all(|&l| l < 10) {
            for l in &self.0 {
                write!(f, "{l}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
            write!(f, "{}", parts.join("."))
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// `n^len` guarded against overflow and against the word-materialization cap.
pub fn count_words(alphabet: usize, len: usize, cap: usize) -> Result<usize> {
    let mut total = 1usize;
    for _ in 0..len {
        total = total
            .checked_mul(alphabet)
            .filter(|&t| t <= cap)
            .ok_or_else(|| {
                Error::BudgetExceeded(format!("{alphabet}^{len} words exceed cap {cap}"))
            })?;
    }
    Ok(total)
}
