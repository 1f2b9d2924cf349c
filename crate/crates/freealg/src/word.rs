//! Words over a finite alphabet: the monomial basis of the free algebra.

use std::cmp::Ordering;
use std::fmt;

/// A word in the free monoid on `alphabet_size` letters, stored as a flat
/// sequence of 0-based letter indices. The empty word is the unit monomial.
///
/// The derived-order replacement below is deglex: shorter words first, then
/// lexicographic. The maximal element of a polynomial's support under this
/// order is its leading word.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(i: u8) -> Self {
        Word(vec![i])
    }

    /// Builds a word from letter indices.
    pub fn from_letters(letters: impl Into<Vec<u8>>) -> Self {
        Word(letters.into())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn pow(&self, e: usize) -> Word {
        let mut v = Vec::with_capacity(self.0.len() * e);
        for _ in 0..e {
            v.extend_from_slice(&self.0);
        }
        Word(v)
    }

    /// Largest letter index occurring, or `None` for the empty word.
    pub fn max_letter(&self) -> Option<u8> {
        self.0.iter().copied().max()
    }

    /// Smallest period of the word via the KMP failure function.
    ///
    /// A period `p` means `w[i] == w[i+p]` for all valid `i`; the word is a
    /// proper power exactly when its smallest period divides its length
    /// strictly.
    pub fn smallest_period(&self) -> usize {
        let n = self.0.len();
        if n == 0 {
            return 0;
        }
        let mut fail = vec![0usize; n];
        let w = &self.0;
        let mut k = 0usize;
        for i in 1..n {
            while k > 0 && w[i] != w[k] {
                k = fail[k - 1];
            }
            if w[i] == w[k] {
                k += 1;
            }
            fail[i] = k;
        }
        n - fail[n - 1]
    }

    /// True when the word is not a proper power of a shorter word.
    pub fn is_primitive(&self) -> bool {
        let n = self.0.len();
        if n == 0 {
            return false;
        }
        let p = self.smallest_period();
        !(p < n && n.is_multiple_of(p))
    }

    /// Checks whether `p` is a period: `w[i] == w[i+p]` for all `i < len-p`.
    pub fn has_period(&self, p: usize) -> bool {
        if p == 0 || p > self.0.len() {
            return false;
        }
        (0..self.0.len() - p).all(|i| self.0[i] == self.0[i + p])
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n].to_vec())
    }

    pub fn suffix(&self, n: usize) -> Word {
        Word(self.0[self.0.len() - n..].to_vec())
    }

    /// Renders with the standard naming: `x, y` for rank <= 2, else `x1..xn`.
    pub fn format(&self, alphabet_size: usize) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let c = self.0[i];
            let mut run = 1;
            while i + run < self.0.len() && self.0[i + run] == c {
                run += 1;
            }
            let name = letter_name(c, alphabet_size);
            if run == 1 {
                parts.push(name);
            } else {
                parts.push(format!("{name}^{run}"));
            }
            i += run;
        }
        parts.join("*")
    }
}

pub fn letter_name(index: u8, alphabet_size: usize) -> String {
    if alphabet_size <= 2 {
        match index {
            0 => "x".to_string(),
            _ => "y".to_string(),
        }
    } else {
        format!("x{}", index as usize + 1)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Deglex: length first, then lexicographic on letter indices.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format(2))
    }
}
