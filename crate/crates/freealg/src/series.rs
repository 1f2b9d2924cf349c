//! Truncated series over the free group on `{x, y}`: reduced group words,
//! arithmetic with exactness-floor bookkeeping, restricted root solvers,
//! fractional powers, and the negative-power witness scan.
//!
//! A full Mal'tsev-Neumann element has well-ordered (generally infinite)
//! support; the desk-scale stand-in here is a finite term map together with
//! a floor: every term of degree at least the floor is exact, and nothing
//! below the floor is stored or claimed.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::AlgError;
use crate::field::Field;
use crate::linalg::Matrix;
use crate::poly::Polynomial;
use crate::word::Word;

/// A freely reduced word over `{x, x^-1, y, y^-1}`.
///
/// Letters are stored as signed codes: `+1 = x`, `-1 = x^-1`, `+2 = y`,
/// `-2 = y^-1`. The degree is the exponent sum, a group homomorphism onto
/// the integers.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GroupWord(Vec<i8>);

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord(Vec::new())
    }

    /// Generator `x` (letter 0) or `y` (letter 1), optionally inverted.
    pub fn generator(letter: u8, inverted: bool) -> Self {
        let code = match letter {
            0 => 1i8,
            _ => 2i8,
        };
        GroupWord(vec![if inverted { -code } else { code }])
    }

    /// Reduces an arbitrary signed-letter sequence.
    pub fn from_codes(codes: impl IntoIterator<Item = i8>) -> Self {
        let mut stack: Vec<i8> = Vec::new();
        for c in codes {
            debug_assert!(c != 0 && c.abs() <= 2);
            if let Some(&top) = stack.last() {
                if top == -c {
                    stack.pop();
                    continue;
                }
            }
            stack.push(c);
        }
        GroupWord(stack)
    }

    pub fn codes(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Exponent sum.
    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&c| if c > 0 { 1i64 } else { -1 }).sum()
    }

    pub fn mul(&self, other: &GroupWord) -> GroupWord {
        GroupWord::from_codes(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord(self.0.iter().rev().map(|&c| -c).collect())
    }

    pub fn pow(&self, e: i64) -> GroupWord {
        let base = if e >= 0 { self.clone() } else { self.inverse() };
        let mut acc = GroupWord::identity();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    pub fn contains_inverse_letter(&self) -> bool {
        self.0.iter().any(|&c| c < 0)
    }

    /// If the word is `v^n` letter-for-letter, returns `v`.
    pub fn nth_power_split(&self, n: usize) -> Option<GroupWord> {
        if n == 0 || !self.0.len().is_multiple_of(n) {
            return None;
        }
        let chunk = self.0.len() / n;
        let head = &self.0[..chunk];
        if self.0.chunks(chunk).all(|c| c == head) {
            Some(GroupWord(head.to_vec()))
        } else {
            None
        }
    }

    fn rank(c: i8) -> u8 {
        match c {
            1 => 0,
            -1 => 1,
            2 => 2,
            _ => 3,
        }
    }

    /// Deterministic tie-break order: length, then letterwise with
    /// `x < x^-1 < y < y^-1`.
    pub fn lex_key(&self) -> (usize, Vec<u8>) {
        (
            self.0.len(),
            self.0.iter().map(|&c| Self::rank(c)).collect(),
        )
    }

    pub fn format(&self) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let c = self.0[i];
            let mut run = 1i64;
            while i + (run as usize) < self.0.len() && self.0[i + run as usize] == c {
                run += 1;
            }
            let name = if c.abs() == 1 { "x" } else { "y" };
            let exp = if c > 0 { run } else { -run };
            if exp == 1 {
                parts.push(name.to_string());
            } else {
                parts.push(format!("{name}^{exp}"));
            }
            i += run as usize;
        }
        parts.join("*")
    }
}

impl Ord for GroupWord {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.lex_key().cmp(&other.lex_key())
    }
}

impl PartialOrd for GroupWord {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Display for GroupWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.format())
    }
}

/// Exactness floor: `Exact` plays the role of minus infinity (the series is
/// exact everywhere), `At(k)` guarantees exactness only for degrees >= k.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Floor {
    Exact,
    At(i64),
}

impl Floor {
    fn admits(self, degree: i64) -> bool {
        match self {
            Floor::Exact => true,
            Floor::At(k) => degree >= k,
        }
    }

    fn max(self, other: Floor) -> Floor {
        match (self, other) {
            (Floor::Exact, f) | (f, Floor::Exact) => f,
            (Floor::At(a), Floor::At(b)) => Floor::At(a.max(b)),
        }
    }

    /// `floor + top`, treating either minus infinity as absorbing.
    fn plus(self, top: Option<i64>) -> Floor {
        match (self, top) {
            (Floor::Exact, _) | (_, None) => Floor::Exact,
            (Floor::At(a), Some(t)) => Floor::At(a + t),
        }
    }
}

impl std::fmt::Display for Floor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Floor::Exact => write!(f, "-inf"),
            Floor::At(k) => write!(f, "{k}"),
        }
    }
}

/// Finite window of a Mal'tsev-Neumann series.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncatedSeries<F: Field> {
    field: F,
    floor: Floor,
    terms: BTreeMap<GroupWord, F::Elem>,
}

impl<F: Field> TruncatedSeries<F> {
    pub fn zero(field: F) -> Self {
        TruncatedSeries {
            field,
            floor: Floor::Exact,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(field: F, w: GroupWord, c: F::Elem) -> Self {
        let mut s = Self::zero(field);
        s.add_term(w, c);
        s
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn floor(&self) -> Floor {
        self.floor
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupWord, &F::Elem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Maximal term degree, `None` when no terms are stored.
    pub fn top(&self) -> Option<i64> {
        self.terms.keys().map(|w| w.degree()).max()
    }

    pub fn coeff(&self, w: &GroupWord) -> F::Elem {
        self.terms
            .get(w)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn add_term(&mut self, w: GroupWord, c: F::Elem) {
        if self.field.is_zero(&c) || !self.floor.admits(w.degree()) {
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

    /// Lowers or raises the floor claim, discarding terms that fall outside.
    pub fn with_floor(mut self, floor: Floor) -> Self {
        self.floor = floor;
        self.terms.retain(|w, _| floor.admits(w.degree()));
        self
    }

    fn check_field(&self, other: &Self) -> Result<(), AlgError> {
        if self.field != other.field {
            return Err(AlgError::MixedFields {
                left: self.field.descriptor(),
                right: other.field.descriptor(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgError> {
        self.check_field(other)?;
        let floor = self.floor.max(other.floor);
        let mut out = TruncatedSeries {
            field: self.field.clone(),
            floor,
            terms: BTreeMap::new(),
        };
        for (w, c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            field: self.field.clone(),
            floor: self.floor,
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.clone(), self.field.neg(c)))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgError> {
        self.add(&other.neg())
    }

    /// Term-by-term product with free reduction. The result floor is the
    /// tightest degree below which cross terms could involve unknown parts
    /// of either factor; terms below it are discarded, and a result whose
    /// floor exceeds its top is an error since nothing provable remains.
    pub fn mul(&self, other: &Self) -> Result<Self, AlgError> {
        self.check_field(other)?;
        let cand1 = self.floor.plus(other.top());
        let cand2 = other.floor.plus(self.top());
        // Unknown-times-unknown guard, only binding when a factor is empty.
        let cand3 = match (self.floor, other.floor) {
            (Floor::At(a), Floor::At(b)) => Floor::At(a + b),
            _ => Floor::Exact,
        };
        let floor = cand1.max(cand2).max(cand3);
        let mut out = TruncatedSeries {
            field: self.field.clone(),
            floor,
            terms: BTreeMap::new(),
        };
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                out.add_term(wa.mul(wb), self.field.mul(ca, cb));
            }
        }
        if let Floor::At(k) = floor {
            match out.top() {
                Some(t) if t >= k => {}
                top => {
                    return Err(AlgError::FloorCollapse {
                        floor: k,
                        top: top.map_or("-inf".to_string(), |t| t.to_string()),
                    })
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<Self, AlgError> {
        let mut acc =
            TruncatedSeries::monomial(self.field.clone(), GroupWord::identity(), self.field.one());
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Display order: degree descending, then the deterministic word order.
    pub fn sorted_terms_for_display(&self) -> Vec<(&GroupWord, &F::Elem)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| {
            b.degree()
                .cmp(&a.degree())
                .then_with(|| a.lex_key().cmp(&b.lex_key()))
        });
        v
    }
}

impl<F: Field> std::fmt::Display for TruncatedSeries<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in self.sorted_terms_for_display() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = self.field.format_elem(c);
            if w.is_empty() {
                write!(f, "{cs}")?;
            } else if cs == "1" {
                write!(f, "{w}")?;
            } else {
                write!(f, "{cs}*{w}")?;
            }
        }
        Ok(())
    }
}

/// Parses a group word in the printed format: letters `x`, `y` with
/// optional signed integer exponents joined by `*`, or `1` for the
/// identity. Example: `x*y^-1*x^2`.
pub fn parse_group_word(text: &str) -> Result<GroupWord, AlgError> {
    let text = text.trim();
    if text == "1" {
        return Ok(GroupWord::identity());
    }
    let mut codes: Vec<i8> = Vec::new();
    for (i, part) in text.split('*').enumerate() {
        let part = part.trim();
        let (letter, exp_str) = match part.split_once('^') {
            Some((l, e)) => (l.trim(), Some(e.trim())),
            None => (part, None),
        };
        let code = match letter {
            "x" => 1i8,
            "y" => 2i8,
            other => {
                return Err(AlgError::UnknownVariable {
                    pos: i,
                    name: other.to_string(),
                })
            }
        };
        let exp: i64 = match exp_str {
            None => 1,
            Some(e) => e.parse().map_err(|_| AlgError::SyntaxError {
                pos: i,
                msg: format!("cannot parse exponent `{e}`"),
            })?,
        };
        let signed = if exp >= 0 { code } else { -code };
        for _ in 0..exp.unsigned_abs() {
            codes.push(signed);
        }
    }
    Ok(GroupWord::from_codes(codes))
}

/// Parses an exact series: signed sum of terms `[coeff *] group-word`.
/// Coefficients follow the field's own format (`3`, `-2`, `1/2` over the
/// rationals).
pub fn parse_series<F: Field>(text: &str, field: &F) -> Result<TruncatedSeries<F>, AlgError> {
    let mut out = TruncatedSeries::zero(field.clone());
    let mut rest = text.trim();
    if rest.is_empty() {
        return Err(AlgError::SyntaxError {
            pos: 0,
            msg: "empty series expression".to_string(),
        });
    }
    let mut sign_negative = false;
    if let Some(r) = rest.strip_prefix('-') {
        sign_negative = true;
        rest = r.trim_start();
    } else if let Some(r) = rest.strip_prefix('+') {
        rest = r.trim_start();
    }
    loop {
        // A term extends to the next top-level +/- that is not an exponent sign.
        let bytes = rest.as_bytes();
        let mut split = bytes.len();
        for (i, &b) in bytes.iter().enumerate() {
            if (b == b'+' || b == b'-') && i > 0 {
                let prev = bytes[..i]
                    .iter()
                    .rev()
                    .copied()
                    .find(|c| !c.is_ascii_whitespace());
                if prev != Some(b'^') {
                    split = i;
                    break;
                }
            }
        }
        let (term, tail) = rest.split_at(split);
        parse_series_term(term.trim(), field, sign_negative, &mut out)?;
        if tail.is_empty() {
            break;
        }
        sign_negative = tail.starts_with('-');
        rest = tail[1..].trim_start();
    }
    Ok(out)
}

fn parse_series_term<F: Field>(
    term: &str,
    field: &F,
    negative: bool,
    out: &mut TruncatedSeries<F>,
) -> Result<(), AlgError> {
    if term.is_empty() {
        return Err(AlgError::SyntaxError {
            pos: 0,
            msg: "empty term".to_string(),
        });
    }
    // Leading numeric factor, if any.
    let (coeff_str, word_str) = if term.starts_with(|c: char| c.is_ascii_digit()) {
        match term.split_once('*') {
            Some((c, w)) if c.trim().chars().all(|ch| ch.is_ascii_digit() || ch == '/') => {
                (Some(c.trim()), w.trim())
            }
            _ => (Some(term), ""),
        }
    } else {
        (None, term)
    };
    let mut coeff = match coeff_str {
        None => field.one(),
        Some(c) => {
            let (num, den) = match c.split_once('/') {
                None => (c, None),
                Some((n, d)) => (n, Some(d)),
            };
            let num = num.parse().map_err(|_| AlgError::BadCoefficient {
                pos: 0,
                msg: format!("cannot read `{c}`"),
            })?;
            let den = match den {
                None => None,
                Some(d) => Some(d.parse().map_err(|_| AlgError::BadCoefficient {
                    pos: 0,
                    msg: format!("cannot read `{c}`"),
                })?),
            };
            field.from_fraction(num, den)?
        }
    };
    if negative {
        coeff = field.neg(&coeff);
    }
    let word = if word_str.is_empty() {
        GroupWord::identity()
    } else {
        parse_group_word(word_str)?
    };
    out.add_term(word, coeff);
    Ok(())
}

/// Embeds a rank-two polynomial as an exact series over positive words.
pub fn embed_polynomial<F: Field>(p: &Polynomial<F>) -> Result<TruncatedSeries<F>, AlgError> {
    if p.alphabet_size() != 2 {
        return Err(AlgError::NotRankTwo {
            got: p.alphabet_size(),
        });
    }
    let mut s = TruncatedSeries::zero(p.field().clone());
    for (w, c) in p.terms() {
        s.add_term(embed_word(w), c.clone());
    }
    Ok(s)
}

pub fn embed_word(w: &Word) -> GroupWord {
    GroupWord::from_codes(w.letters().iter().map(|&l| if l == 0 { 1i8 } else { 2 }))
}

/// Result of a root solve: the truncated root and the exact residual the
/// solver last computed (`root^n - g`), trustworthy above the input floor.
///
/// The root's floor is calibrated to the residual guarantee: it is set to
/// `-window - deg(w)` so that floor propagation through `root^n` lands
/// exactly on the verified window. It asserts that the root solves the
/// equation above `-window`, not that its low-degree terms agree with any
/// particular infinite solution below the solved slices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RootResult<F: Field> {
    pub root: TruncatedSeries<F>,
    pub residual: TruncatedSeries<F>,
}

/// Square root in characteristic two.
///
/// The leading part of `g` must be a single word that halves into `w^2`;
/// corrections are solved slice by slice against the pairing
/// `c -> w c + c w` over a division-and-conjugation candidate basis. A
/// slice without a finite solution reports `BasisExhausted`; in particular
/// a single-word slice whose conjugation orbit under `w` is infinite has no
/// finite solution at any basis size.
pub fn mn_sqrt_char2<F: Field>(
    g: &TruncatedSeries<F>,
    window: i64,
    basis_rounds: u32,
) -> Result<RootResult<F>, AlgError> {
    if g.field().characteristic() != 2 {
        return Err(AlgError::PreconditionFailed(
            "square-root solver requires characteristic 2".to_string(),
        ));
    }
    nth_root_inner(g, 2, window, basis_rounds)
}

/// Restricted n-th root: the leading part must be a single word that splits
/// as `w^n`, and the characteristic must not divide `n` (except for the
/// characteristic-two square root, which routes through the same solver).
pub fn mn_nth_root<F: Field>(
    g: &TruncatedSeries<F>,
    n: u32,
    window: i64,
    basis_rounds: u32,
) -> Result<RootResult<F>, AlgError> {
    let ch = g.field().characteristic();
    if n < 2 {
        return Err(AlgError::BadBound(format!(
            "root index must be >= 2, got {n}"
        )));
    }
    if ch != 0 && (n as u64).is_multiple_of(ch) && !(ch == 2 && n == 2) {
        return Err(AlgError::CharDividesN { ch, n });
    }
    nth_root_inner(g, n, window, basis_rounds)
}

type Slice<F> = Vec<(GroupWord, <F as Field>::Elem)>;

fn leading_slice<F: Field>(s: &TruncatedSeries<F>) -> Option<(i64, Slice<F>)> {
    let top = s.top()?;
    let slice = s
        .terms()
        .filter(|(w, _)| w.degree() == top)
        .map(|(w, c)| (w.clone(), c.clone()))
        .collect();
    Some((top, slice))
}

fn nth_root_inner<F: Field>(
    g: &TruncatedSeries<F>,
    n: u32,
    window: i64,
    basis_rounds: u32,
) -> Result<RootResult<F>, AlgError> {
    let field = g.field().clone();
    let not_power = |msg: String| {
        if n == 2 {
            AlgError::NotASquareLeading(msg)
        } else {
            AlgError::NotAnNthPowerLeading(msg)
        }
    };
    let Some((_top, lead)) = leading_slice(g) else {
        return Err(AlgError::ZeroInput);
    };
    if lead.len() != 1 {
        return Err(not_power(format!(
            "leading part has {} words, need exactly one",
            lead.len()
        )));
    }
    let (lead_word, lead_coeff) = lead.into_iter().next().expect("one element");
    let w = lead_word
        .nth_power_split(n as usize)
        .ok_or_else(|| not_power(format!("`{lead_word}` does not split into {n} equal parts")))?;
    let a = field
        .nth_root(&lead_coeff, n)
        .ok_or_else(|| not_power(format!("leading coefficient has no {n}-th root")))?;
    let mw = w.degree();
    // The residual below the requested window is only meaningful if the
    // input is exact there.
    if let Floor::At(k) = g.floor() {
        if k > -window {
            return Err(AlgError::InsufficientFloor {
                required: -window,
                actual: k.to_string(),
            });
        }
    }

    let mut h = TruncatedSeries::monomial(field.clone(), w.clone(), a.clone());
    // a^(n-1): common coefficient of every first-order insertion.
    let mut a_pow = field.one();
    for _ in 0..n - 1 {
        a_pow = field.mul(&a_pow, &a);
    }
    let mut guard = 0u32;
    loop {
        guard += 1;
        if guard > 10_000 {
            return Err(AlgError::CapExceeded { cap: 10_000 });
        }
        let residual = h.pow(n)?.sub(g)?;
        let visible: Vec<(GroupWord, F::Elem)> = residual
            .terms()
            .filter(|(wd, _)| wd.degree() >= -window)
            .map(|(wd, c)| (wd.clone(), c.clone()))
            .collect();
        let Some(s_deg) = visible.iter().map(|(wd, _)| wd.degree()).max() else {
            let root_floor = match (g.floor(), residual.is_empty()) {
                (Floor::Exact, true) => Floor::Exact,
                _ => Floor::At(-window - mw),
            };
            let root = h.with_floor(root_floor);
            return Ok(RootResult { root, residual });
        };
        let slice: BTreeMap<GroupWord, F::Elem> = visible
            .into_iter()
            .filter(|(wd, _)| wd.degree() == s_deg)
            .collect();
        let correction = solve_slice(&field, &w, &a_pow, n, &slice, basis_rounds).ok_or(
            AlgError::BasisExhausted {
                degree: s_deg,
                rounds: basis_rounds,
            },
        )?;
        for (wd, c) in correction {
            h.add_term(wd, c);
        }
    }
}

/// Solves `a_pow * sum_i w^i c w^(n-1-i) = -slice` for a homogeneous
/// correction `c` supported on a division-closure candidate basis. Returns
/// the correction terms, or `None` when every basis round leaves the system
/// inconsistent.
fn solve_slice<F: Field>(
    field: &F,
    w: &GroupWord,
    a_pow: &F::Elem,
    n: u32,
    slice: &BTreeMap<GroupWord, F::Elem>,
    basis_rounds: u32,
) -> Option<Vec<(GroupWord, F::Elem)>> {
    let w_inv = w.inverse();
    let mut basis: BTreeSet<GroupWord> = BTreeSet::new();
    for t in slice.keys() {
        for i in 0..n {
            let left = w_inv.pow(i as i64);
            let right = w_inv.pow((n - 1 - i) as i64);
            basis.insert(left.mul(t).mul(&right));
        }
    }
    for round in 0..=basis_rounds {
        if round > 0 {
            let snapshot: Vec<GroupWord> = basis.iter().cloned().collect();
            for b in snapshot {
                basis.insert(w_inv.mul(&b).mul(w));
                basis.insert(w.mul(&b).mul(&w_inv));
            }
        }
        let cand: Vec<GroupWord> = basis.iter().cloned().collect();
        let mut row_index: BTreeMap<GroupWord, usize> = BTreeMap::new();
        let mut entries: Vec<(usize, usize, F::Elem)> = Vec::new();
        for (col, b) in cand.iter().enumerate() {
            for i in 0..n {
                let img = w.pow(i as i64).mul(b).mul(&w.pow((n - 1 - i) as i64));
                let next = row_index.len();
                let row = *row_index.entry(img).or_insert(next);
                entries.push((row, col, a_pow.clone()));
            }
        }
        for t in slice.keys() {
            let next = row_index.len();
            row_index.entry(t.clone()).or_insert(next);
        }
        let mut a = Matrix::zeros(field.clone(), row_index.len(), cand.len());
        for (r, c, v) in &entries {
            let cur = a.get(*r, *c).clone();
            a.set(*r, *c, field.add(&cur, v));
        }
        let mut b = vec![field.zero(); row_index.len()];
        for (t, c) in slice {
            b[row_index[t]] = field.neg(c);
        }
        if let Some(sol) = a.solve(&b) {
            return Some(
                cand.into_iter()
                    .zip(sol)
                    .filter(|(_, c)| !field.is_zero(c))
                    .collect(),
            );
        }
    }
    None
}

/// Result of a fractional power, with the normalized exponent when the
/// input was not in lowest terms.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FractionalPower<F: Field> {
    pub result: TruncatedSeries<F>,
    pub exponent: (i64, i64),
    pub normalized_from: Option<(i64, i64)>,
}

/// `g^(m/n)` as the m-th power of the n-th root, with the internal root
/// window widened so the product floor still covers the requested window.
pub fn mn_fractional_power<F: Field>(
    g: &TruncatedSeries<F>,
    m: i64,
    n: i64,
    window: i64,
    basis_rounds: u32,
) -> Result<FractionalPower<F>, AlgError> {
    if m < 1 || n < 1 {
        return Err(AlgError::BadBound(format!(
            "exponent {m}/{n} must have positive parts"
        )));
    }
    let gcd = num_integer::gcd(m, n);
    let (mr, nr) = (m / gcd, n / gcd);
    let normalized_from = if gcd > 1 { Some((m, n)) } else { None };
    if nr == 1 {
        let mut acc =
            TruncatedSeries::monomial(g.field().clone(), GroupWord::identity(), g.field().one());
        for _ in 0..mr {
            acc = acc.mul(g)?;
        }
        return Ok(FractionalPower {
            result: acc,
            exponent: (mr, nr),
            normalized_from,
        });
    }
    let top = g.top().ok_or(AlgError::ZeroInput)?;
    if top % nr != 0 {
        return Err(AlgError::NotAnNthPowerLeading(format!(
            "top degree {top} is not divisible by {nr}"
        )));
    }
    let mw = top / nr;
    let widened = window + ((mr - 2).max(0)) * mw.max(0);
    let rooted = mn_nth_root(g, nr as u32, widened, basis_rounds)?;
    let mut acc = rooted.root.clone();
    for _ in 1..mr {
        acc = acc.mul(&rooted.root)?;
    }
    Ok(FractionalPower {
        result: acc,
        exponent: (mr, nr),
        normalized_from,
    })
}

/// Scans the exact region for a stored word of positive degree containing
/// an inverse letter; the highest degree wins and ties go to the
/// deterministic word order.
pub fn negative_power_witness<F: Field>(s: &TruncatedSeries<F>) -> Option<GroupWord> {
    s.terms()
        .map(|(w, _)| w)
        .filter(|w| w.degree() > 0 && w.contains_inverse_letter())
        .min_by(|a, b| {
            b.degree()
                .cmp(&a.degree())
                .then_with(|| a.lex_key().cmp(&b.lex_key()))
        })
        .cloned()
}

/// Which reading of the family's low-order part to build.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SVariant {
    /// `s = xy + yx`, the variant the square-root construction supports.
    Lemma10,
    /// `s = xy + u`.
    Theorem9,
}

/// `g = ((xy)^k x)^2 + s` over a characteristic-two field, as an exact
/// series.
pub fn build_theorem9_input<F: Field>(
    k: i64,
    field: &F,
    variant: SVariant,
) -> Result<TruncatedSeries<F>, AlgError> {
    if k < 2 {
        return Err(AlgError::BadK(k));
    }
    if field.characteristic() != 2 {
        return Err(AlgError::PreconditionFailed(
            "family is defined over characteristic 2".to_string(),
        ));
    }
    let x = GroupWord::generator(0, false);
    let y = GroupWord::generator(1, false);
    let xy = x.mul(&y);
    let yx = y.mul(&x);
    let u = xy.pow(k).mul(&x);
    let mut g = TruncatedSeries::zero(field.clone());
    g.add_term(u.mul(&u), field.one());
    g.add_term(xy, field.one());
    match variant {
        SVariant::Lemma10 => g.add_term(yx, field.one()),
        SVariant::Theorem9 => g.add_term(u, field.one()),
    }
    Ok(g)
}
