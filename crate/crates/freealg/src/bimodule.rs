//! Monomial classification for the bimodule structure over the two-sided
//! polynomial action of a fixed primitive word, and a bounded-degree exact
//! solver for the commutator equation `[u^m, s] + [u^n, r] = 0`.

use std::collections::BTreeMap;

use crate::error::AlgError;
use crate::field::Field;
use crate::linalg::Matrix;
use crate::poly::Polynomial;
use crate::word::Word;

/// Which of the three submodule types the pair `(u, t)` generates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum MonomialClass {
    /// `t = 1`.
    Type1,
    /// No head/tail overlap relation with `u`.
    Type2,
    /// `t` is a proper head of `u` with matching tail `t2`, `t*u = u*t2`,
    /// realized by `u = (v1 v2)^k v1`, `t1 = v1 v2`, `t2 = v2 v1`.
    Type3 {
        v1: Word,
        v2: Word,
        k: usize,
        t1: Word,
        t2: Word,
    },
}

/// Classifies `(u, t)`. The word `u` must be primitive; classification then
/// never fails.
///
/// `t` is Type3 exactly when it is a proper head of `u` whose length is a
/// period of `u`; the pair `(v1, v2, k)` comes out of that period, and the
/// primitivity of `u` forces `v1` nonempty and `v1 v2 != v2 v1`.
pub fn classify_monomial(u: &Word, t: &Word) -> Result<MonomialClass, AlgError> {
    if !u.is_primitive() {
        return Err(AlgError::ImprimitiveU);
    }
    if t.is_empty() {
        return Ok(MonomialClass::Type1);
    }
    let l = t.len();
    let n = u.len();
    if l < n && u.prefix(l) == *t && u.has_period(l) {
        let t2 = u.suffix(l);
        debug_assert_eq!(t.concat(u), u.concat(&t2));
        let rem = n % l;
        debug_assert!(
            rem != 0,
            "period dividing the length contradicts primitivity"
        );
        let v1 = u.prefix(rem);
        let v2 = Word::from_letters(u.letters()[rem..l].to_vec());
        let k = n / l;
        debug_assert_eq!(t.pow(k).concat(&v1), *u);
        debug_assert_ne!(v1.concat(&v2), v2.concat(&v1));
        return Ok(MonomialClass::Type3 {
            v1,
            v2,
            k,
            t1: t.clone(),
            t2,
        });
    }
    Ok(MonomialClass::Type2)
}

/// A basis of the bounded solution space of `[u^m, s] + [u^n, r] = 0`.
#[derive(Clone, Debug)]
pub struct CommutatorEqSolution<F: Field> {
    pub basis: Vec<(Polynomial<F>, Polynomial<F>)>,
    pub bound: usize,
}

impl<F: Field> CommutatorEqSolution<F> {
    pub fn kernel_dim(&self) -> usize {
        self.basis.len()
    }
}

/// All words over two letters of length at most `max_len`, in deglex order.
pub fn words_up_to(max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for l in 0..2u8 {
                let mut v = w.letters().to_vec();
                v.push(l);
                next.push(Word::from_letters(v));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out.sort();
    out
}

/// Solves `[u^m, s] + [u^n, r] = 0` exactly for all `(s, r)` supported on
/// words of degree at most `degree_bound`, returning a kernel basis. Every
/// basis pair is re-verified by direct polynomial arithmetic.
pub fn solve_commutator_equation<F: Field>(
    u: &Word,
    m: u32,
    n: u32,
    degree_bound: usize,
    field: &F,
) -> Result<CommutatorEqSolution<F>, AlgError> {
    if u.is_empty() {
        return Err(AlgError::ZeroInput);
    }
    if m < 1 || n < 1 {
        return Err(AlgError::BadBound(format!(
            "commutator powers must be >= 1, got ({m}, {n})"
        )));
    }
    let unknown_words = words_up_to(degree_bound);
    let u_poly = Polynomial::monomial(field.clone(), 2, u.clone(), field.one());
    let u_m = u_poly.pow(m as usize)?;
    let u_n = u_poly.pow(n as usize)?;

    // Column images: [u^m, w] for the s-side, [u^n, w] for the r-side.
    let mut column_polys: Vec<Polynomial<F>> = Vec::new();
    for w in &unknown_words {
        let wp = Polynomial::monomial(field.clone(), 2, w.clone(), field.one());
        column_polys.push(u_m.commutator(&wp)?);
    }
    for w in &unknown_words {
        let wp = Polynomial::monomial(field.clone(), 2, w.clone(), field.one());
        column_polys.push(u_n.commutator(&wp)?);
    }

    let mut row_index: BTreeMap<Word, usize> = BTreeMap::new();
    for p in &column_polys {
        for (w, _) in p.terms() {
            let next = row_index.len();
            row_index.entry(w.clone()).or_insert(next);
        }
    }
    let mut a = Matrix::zeros(field.clone(), row_index.len().max(1), column_polys.len());
    for (col, p) in column_polys.iter().enumerate() {
        for (w, c) in p.terms() {
            a.set(row_index[w], col, c.clone());
        }
    }

    let nw = unknown_words.len();
    let mut basis = Vec::new();
    for v in a.kernel_basis() {
        let mut s = Polynomial::zero(field.clone(), 2);
        let mut r = Polynomial::zero(field.clone(), 2);
        for (i, w) in unknown_words.iter().enumerate() {
            s.add_term(w.clone(), v[i].clone());
            r.add_term(w.clone(), v[nw + i].clone());
        }
        let check = u_m.commutator(&s)?.add(&u_n.commutator(&r)?)?;
        assert!(check.is_zero(), "kernel vector failed re-verification");
        basis.push((s, r));
    }
    Ok(CommutatorEqSolution {
        basis,
        bound: degree_bound,
    })
}
