//! Sparse noncommutative polynomials: finite maps from words to nonzero
//! field coefficients.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::AlgError;
use crate::field::Field;
use crate::word::Word;

/// Total degree, with the zero polynomial sitting strictly below every
/// integer degree.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Degree {
    NegInf,
    Finite(i64),
}

impl Degree {
    pub fn finite(self) -> Option<i64> {
        match self {
            Degree::NegInf => None,
            Degree::Finite(d) => Some(d),
        }
    }

    pub fn plus(self, other: Degree) -> Degree {
        match (self, other) {
            (Degree::Finite(a), Degree::Finite(b)) => Degree::Finite(a + b),
            _ => Degree::NegInf,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInf => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

impl From<usize> for Degree {
    fn from(d: usize) -> Self {
        Degree::Finite(d as i64)
    }
}

/// A polynomial in the free associative algebra on `alphabet_size` letters.
///
/// Invariants: no stored coefficient is zero; all coefficients live in
/// `field`. The zero polynomial has an empty term map.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial<F: Field> {
    field: F,
    alphabet_size: usize,
    terms: BTreeMap<Word, F::Elem>,
}

impl<F: Field> Polynomial<F> {
    pub fn zero(field: F, alphabet_size: usize) -> Self {
        assert!(alphabet_size >= 1, "alphabet must have at least one letter");
        Polynomial {
            field,
            alphabet_size,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: F, alphabet_size: usize, c: F::Elem) -> Self {
        let mut p = Self::zero(field, alphabet_size);
        p.add_term(Word::empty(), c);
        p
    }

    pub fn one(field: F, alphabet_size: usize) -> Self {
        let c = field.one();
        Self::constant(field, alphabet_size, c)
    }

    /// The i-th letter as a polynomial.
    pub fn var(field: F, alphabet_size: usize, i: u8) -> Self {
        assert!((i as usize) < alphabet_size, "letter index out of range");
        let c = field.one();
        let mut p = Self::zero(field, alphabet_size);
        p.add_term(Word::letter(i), c);
        p
    }

    pub fn monomial(field: F, alphabet_size: usize, word: Word, coeff: F::Elem) -> Self {
        if let Some(m) = word.max_letter() {
            assert!(
                (m as usize) < alphabet_size,
                "word uses letters outside the alphabet"
            );
        }
        let mut p = Self::zero(field, alphabet_size);
        p.add_term(word, coeff);
        p
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending deglex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &F::Elem)> {
        self.terms.iter()
    }

    /// Coefficient of a word, zero when absent.
    pub fn coeff(&self, w: &Word) -> F::Elem {
        self.terms
            .get(w)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Adds `c * w` in place, dropping the entry if it cancels.
    pub fn add_term(&mut self, w: Word, c: F::Elem) {
        if self.field.is_zero(&c) {
            return;
        }
        match self.terms.remove(&w) {
            None => {
                self.terms.insert(w, c);
            }
            Some(old) => {
                let s = self.field.add(&old, &c);
                if !self.field.is_zero(&s) {
                    self.terms.insert(w, s);
                }
            }
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<(), AlgError> {
        if self.field != other.field {
            return Err(AlgError::MixedFields {
                left: self.field.descriptor(),
                right: other.field.descriptor(),
            });
        }
        if self.alphabet_size != other.alphabet_size {
            return Err(AlgError::AlphabetMismatch {
                left: self.alphabet_size,
                right: other.alphabet_size,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.field.clone(), self.alphabet_size);
        for (w, c) in &self.terms {
            out.terms.insert(w.clone(), self.field.neg(c));
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgError> {
        self.add(&other.neg())
    }

    pub fn scalar_mul(&self, c: &F::Elem) -> Self {
        let mut out = Self::zero(self.field.clone(), self.alphabet_size);
        if self.field.is_zero(c) {
            return out;
        }
        for (w, a) in &self.terms {
            out.add_term(w.clone(), self.field.mul(a, c));
        }
        out
    }

    /// Noncommutative product; word product is concatenation.
    pub fn mul(&self, other: &Self) -> Result<Self, AlgError> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.field.clone(), self.alphabet_size);
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                out.add_term(wa.concat(wb), self.field.mul(ca, cb));
            }
        }
        Ok(out)
    }

    /// `self^e` by repeated multiplication; `e = 0` gives 1.
    pub fn pow(&self, e: usize) -> Result<Self, AlgError> {
        let mut acc = Self::one(self.field.clone(), self.alphabet_size);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// The commutator `self*other - other*self`.
    pub fn commutator(&self, other: &Self) -> Result<Self, AlgError> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn degree(&self) -> Degree {
        match self.terms.keys().next_back() {
            None => Degree::NegInf,
            Some(w) => Degree::Finite(w.len() as i64),
        }
    }

    /// Leading word in deglex order.
    pub fn leading_word(&self) -> Option<&Word> {
        self.terms.keys().next_back()
    }

    pub fn constant_term(&self) -> F::Elem {
        self.coeff(&Word::empty())
    }

    /// Copy without its constant term.
    pub fn strip_constant(&self) -> Self {
        let mut out = self.clone();
        out.terms.remove(&Word::empty());
        out
    }

    /// Terms of degree exactly `d`.
    pub fn homogeneous_slice(&self, d: usize) -> Self {
        let mut out = Self::zero(self.field.clone(), self.alphabet_size);
        for (w, c) in &self.terms {
            if w.len() == d {
                out.terms.insert(w.clone(), c.clone());
            }
        }
        out
    }

    /// The homogeneous component of maximal degree.
    pub fn leading_form(&self) -> Result<HomogeneousForm<F>, AlgError> {
        let d = self.degree().finite().ok_or(AlgError::ZeroPolynomial)? as usize;
        Ok(HomogeneousForm {
            degree: d,
            form: self.homogeneous_slice(d),
        })
    }

    /// Max over the support of the sum of letter weights; `NegInf` for zero.
    ///
    /// Weights must cover the alphabet and be at least 1, so that the
    /// weighted degree collapses to the total degree at weights (1, .., 1).
    pub fn weighted_degree(&self, weights: &[i64]) -> Result<Degree, AlgError> {
        if weights.len() != self.alphabet_size {
            return Err(AlgError::BadWeights(format!(
                "expected {} weights, got {}",
                self.alphabet_size,
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| **w < 1) {
            return Err(AlgError::BadWeights(format!("weight {w} is below 1")));
        }
        let mut best: Option<i64> = None;
        for w in self.terms.keys() {
            let s: i64 = w.letters().iter().map(|&l| weights[l as usize]).sum();
            best = Some(best.map_or(s, |b: i64| b.max(s)));
        }
        Ok(best.map_or(Degree::NegInf, Degree::Finite))
    }

    /// Evaluates the polynomial at the given images: letter `i` is replaced
    /// by `images[i]` and each word is multiplied out in order. This is the
    /// unique ring homomorphism extending the assignment.
    pub fn substitute(&self, images: &[Self]) -> Result<Self, AlgError> {
        if images.len() != self.alphabet_size {
            return Err(AlgError::ArityMismatch {
                expected: self.alphabet_size,
                got: images.len(),
            });
        }
        let (target_field, target_alpha) = match images.first() {
            Some(im) => (im.field.clone(), im.alphabet_size),
            None => (self.field.clone(), self.alphabet_size),
        };
        for im in images {
            if im.field != target_field {
                return Err(AlgError::MixedFields {
                    left: target_field.descriptor(),
                    right: im.field.descriptor(),
                });
            }
            if im.alphabet_size != target_alpha {
                return Err(AlgError::AlphabetMismatch {
                    left: target_alpha,
                    right: im.alphabet_size,
                });
            }
        }
        if self.field != target_field {
            return Err(AlgError::MixedFields {
                left: self.field.descriptor(),
                right: target_field.descriptor(),
            });
        }
        let mut out = Self::zero(target_field.clone(), target_alpha);
        for (w, c) in &self.terms {
            let mut acc = Self::constant(target_field.clone(), target_alpha, c.clone());
            for &letter in w.letters() {
                acc = acc.mul(&images[letter as usize])?;
            }
            out = out.add(&acc)?;
        }
        Ok(out)
    }

    /// If `self == c * other` for a scalar `c != 0`, returns `c`.
    pub fn proportionality_scalar(&self, other: &Self) -> Option<F::Elem> {
        if self.is_zero() || other.is_zero() {
            return None;
        }
        if self.terms.len() != other.terms.len() {
            return None;
        }
        let (w0, b0) = other.terms.iter().next()?;
        let a0 = self.terms.get(w0)?;
        let c = self.field.div(a0, b0).ok()?;
        for (w, b) in &other.terms {
            let a = self.terms.get(w)?;
            if *a != self.field.mul(&c, b) {
                return None;
            }
        }
        Some(c)
    }

    /// Terms sorted for printing: degree descending, lexicographic ascending
    /// within a degree.
    pub fn sorted_terms_for_display(&self) -> Vec<(&Word, &F::Elem)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(wa, _), (wb, _)| {
            wb.len()
                .cmp(&wa.len())
                .then_with(|| wa.letters().cmp(wb.letters()))
        });
        v
    }
}

/// A polynomial all of whose words share one length.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HomogeneousForm<F: Field> {
    form: Polynomial<F>,
    degree: usize,
}

impl<F: Field> HomogeneousForm<F> {
    pub fn poly(&self) -> &Polynomial<F> {
        &self.form
    }

    pub fn into_poly(self) -> Polynomial<F> {
        self.form
    }

    pub fn degree(&self) -> usize {
        self.degree
    }
}

impl<F: Field> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let one = self.field.one();
        let mut first = true;
        for (w, c) in self.sorted_terms_for_display() {
            let mut cs = self.field.format_elem(c);
            let mut sign = "+";
            if let Some(stripped) = cs.strip_prefix('-') {
                sign = "-";
                cs = stripped.to_string();
            }
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else if sign == "-" {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let coeff_is_one = *c == one || cs == "1";
            if w.is_empty() {
                write!(f, "{cs}")?;
            } else if coeff_is_one {
                write!(f, "{}", w.format(self.alphabet_size))?;
            } else {
                write!(f, "{}*{}", cs, w.format(self.alphabet_size))?;
            }
        }
        Ok(())
    }
}
