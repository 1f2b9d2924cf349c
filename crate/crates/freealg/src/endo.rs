//! Endomorphisms of the rank-two free algebra, given by the images of the
//! two letters. Includes elementary/affine automorphisms, a degree-reduction
//! decomposition into elementary factors with failure certificates,
//! inversion, the retraction toolkit, and a bounded coordinate certifier.

use rand::Rng;

use crate::error::AlgError;
use crate::field::Field;
use crate::linalg::Matrix;
use crate::poly::{Degree, Polynomial};
use crate::word::Word;

/// An endomorphism of the free algebra on `{x, y}`, stored as the images of
/// the two letters. Application is the unique ring homomorphism extending
/// the assignment.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Endomorphism<F: Field> {
    image_x: Polynomial<F>,
    image_y: Polynomial<F>,
}

impl<F: Field> Endomorphism<F> {
    pub fn new(image_x: Polynomial<F>, image_y: Polynomial<F>) -> Result<Self, AlgError> {
        if image_x.alphabet_size() != 2 || image_y.alphabet_size() != 2 {
            return Err(AlgError::NotRankTwo {
                got: image_x.alphabet_size().max(image_y.alphabet_size()),
            });
        }
        if image_x.field() != image_y.field() {
            return Err(AlgError::MixedFields {
                left: image_x.field().descriptor(),
                right: image_y.field().descriptor(),
            });
        }
        Ok(Endomorphism { image_x, image_y })
    }

    pub fn identity(field: F) -> Self {
        Endomorphism {
            image_x: Polynomial::var(field.clone(), 2, 0),
            image_y: Polynomial::var(field, 2, 1),
        }
    }

    pub fn field(&self) -> &F {
        self.image_x.field()
    }

    pub fn image_x(&self) -> &Polynomial<F> {
        &self.image_x
    }

    pub fn image_y(&self) -> &Polynomial<F> {
        &self.image_y
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.field().clone())
    }

    pub fn apply(&self, p: &Polynomial<F>) -> Result<Polynomial<F>, AlgError> {
        p.substitute(&[self.image_x.clone(), self.image_y.clone()])
    }

    /// Composition with the contract
    /// `apply(compose(e1, e2), p) = apply(e1, apply(e2, p))`.
    pub fn compose(&self, other: &Self) -> Result<Self, AlgError> {
        Ok(Endomorphism {
            image_x: self.apply(&other.image_x)?,
            image_y: self.apply(&other.image_y)?,
        })
    }

    /// The map `x -> x + y^m, y -> y`.
    pub fn shift_x_by_power_of_y(field: F, m: usize) -> Self {
        let x = Polynomial::var(field.clone(), 2, 0);
        let ym = Polynomial::monomial(field.clone(), 2, Word::letter(1).pow(m), field.one());
        Endomorphism {
            image_x: x.add(&ym).expect("same field"),
            image_y: Polynomial::var(field, 2, 1),
        }
    }

    /// The map `x -> x, y -> y + x^m`.
    pub fn shift_y_by_power_of_x(field: F, m: usize) -> Self {
        let y = Polynomial::var(field.clone(), 2, 1);
        let xm = Polynomial::monomial(field.clone(), 2, Word::letter(0).pow(m), field.one());
        Endomorphism {
            image_x: Polynomial::var(field.clone(), 2, 0),
            image_y: y.add(&xm).expect("same field"),
        }
    }
}

/// One elementary building block of a tame automorphism.
///
/// Degree-one content always lives in `LinearAffine`; the `AddTo*` variants
/// carry a univariate polynomial of degree at least 2 in the other letter.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ElementaryFactor<F: Field> {
    /// `x -> a*x + b*y + t0, y -> c*x + d*y + t1` with `ad - bc != 0`,
    /// matrix stored row-major as `[a, b, c, d]`.
    LinearAffine {
        matrix: [F::Elem; 4],
        translation: [F::Elem; 2],
    },
    /// `x -> x + h(y), y -> y`.
    AddToX(Polynomial<F>),
    /// `x -> x, y -> y + h(x)`.
    AddToY(Polynomial<F>),
}

impl<F: Field> ElementaryFactor<F> {
    pub fn to_endo(&self, field: &F) -> Endomorphism<F> {
        match self {
            ElementaryFactor::LinearAffine {
                matrix,
                translation,
            } => {
                let x = Polynomial::var(field.clone(), 2, 0);
                let y = Polynomial::var(field.clone(), 2, 1);
                let lin = |a: &F::Elem, b: &F::Elem, t: &F::Elem| {
                    x.scalar_mul(a)
                        .add(&y.scalar_mul(b))
                        .and_then(|s| s.add(&Polynomial::constant(field.clone(), 2, t.clone())))
                        .expect("same field")
                };
                Endomorphism {
                    image_x: lin(&matrix[0], &matrix[1], &translation[0]),
                    image_y: lin(&matrix[2], &matrix[3], &translation[1]),
                }
            }
            ElementaryFactor::AddToX(h) => {
                let x = Polynomial::var(field.clone(), 2, 0);
                Endomorphism {
                    image_x: x.add(h).expect("same field"),
                    image_y: Polynomial::var(field.clone(), 2, 1),
                }
            }
            ElementaryFactor::AddToY(h) => {
                let y = Polynomial::var(field.clone(), 2, 1);
                Endomorphism {
                    image_x: Polynomial::var(field.clone(), 2, 0),
                    image_y: y.add(h).expect("same field"),
                }
            }
        }
    }

    pub fn invert(&self, field: &F) -> ElementaryFactor<F> {
        match self {
            ElementaryFactor::AddToX(h) => ElementaryFactor::AddToX(h.neg()),
            ElementaryFactor::AddToY(h) => ElementaryFactor::AddToY(h.neg()),
            ElementaryFactor::LinearAffine {
                matrix,
                translation,
            } => {
                let det = Matrix::det2(field, matrix);
                let di = field
                    .inv(&det)
                    .expect("factor invariant: invertible matrix");
                let inv = [
                    field.mul(&matrix[3], &di),
                    field.neg(&field.mul(&matrix[1], &di)),
                    field.neg(&field.mul(&matrix[2], &di)),
                    field.mul(&matrix[0], &di),
                ];
                let t0 = field.neg(&field.add(
                    &field.mul(&inv[0], &translation[0]),
                    &field.mul(&inv[1], &translation[1]),
                ));
                let t1 = field.neg(&field.add(
                    &field.mul(&inv[2], &translation[0]),
                    &field.mul(&inv[3], &translation[1]),
                ));
                ElementaryFactor::LinearAffine {
                    matrix: inv,
                    translation: [t0, t1],
                }
            }
        }
    }
}

/// An ordered factorization into elementary automorphisms. Composing the
/// factors left to right (a left fold under [`Endomorphism::compose`])
/// reproduces the decomposed map exactly.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Decomposition<F: Field> {
    pub factors: Vec<ElementaryFactor<F>>,
}

impl<F: Field> Decomposition<F> {
    pub fn recompose(&self, field: &F) -> Endomorphism<F> {
        let mut acc = Endomorphism::identity(field.clone());
        for f in &self.factors {
            acc = acc.compose(&f.to_endo(field)).expect("same field");
        }
        acc
    }

    pub fn invert(&self, field: &F) -> Decomposition<F> {
        Decomposition {
            factors: self.factors.iter().rev().map(|f| f.invert(field)).collect(),
        }
    }
}

/// Which structural condition ruled out an automorphism.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FailCondition {
    SingularLinearPart,
    DegreeDivisibilityFails,
    LeadingFormNotPower,
}

impl FailCondition {
    pub fn message(self) -> &'static str {
        match self {
            FailCondition::SingularLinearPart => "singular linear part",
            FailCondition::DegreeDivisibilityFails => "degree divisibility fails",
            FailCondition::LeadingFormNotPower => "leading form not a power",
        }
    }
}

/// Certificate of non-decomposability: the violated condition together with
/// the reduced state at which it was observed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NotAutomorphism<F: Field> {
    pub condition: FailCondition,
    pub state_x: Polynomial<F>,
    pub state_y: Polynomial<F>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DecomposeOutcome<F: Field> {
    Tame(Decomposition<F>),
    NotAutomorphism(NotAutomorphism<F>),
}

fn finite_deg<F: Field>(p: &Polynomial<F>) -> i64 {
    p.degree().finite().unwrap_or(-1)
}

/// Decomposes an endomorphism into elementary factors by degree reduction.
///
/// Loop invariant: the current pair arises from the input by composing
/// elementary automorphisms on the right, so pushing the inverses in reverse
/// order after the terminal affine factor recomposes the input exactly.
/// Each reduction step strictly decreases the degree sum, so the loop
/// terminates. Failure returns the violated condition and the state at
/// failure as a re-checkable certificate.
pub fn decompose_tame<F: Field>(e: &Endomorphism<F>) -> DecomposeOutcome<F> {
    let field = e.field().clone();
    let mut cur = e.clone();
    let mut steps: Vec<ElementaryFactor<F>> = Vec::new();
    loop {
        let dx = finite_deg(&cur.image_x);
        let dy = finite_deg(&cur.image_y);
        if dx <= 1 && dy <= 1 {
            let coeff_of = |p: &Polynomial<F>, letter: u8| p.coeff(&Word::letter(letter));
            let matrix = [
                coeff_of(&cur.image_x, 0),
                coeff_of(&cur.image_x, 1),
                coeff_of(&cur.image_y, 0),
                coeff_of(&cur.image_y, 1),
            ];
            let det = Matrix::det2(&field, &matrix);
            if field.is_zero(&det) {
                return DecomposeOutcome::NotAutomorphism(NotAutomorphism {
                    condition: FailCondition::SingularLinearPart,
                    state_x: cur.image_x,
                    state_y: cur.image_y,
                });
            }
            let translation = [cur.image_x.constant_term(), cur.image_y.constant_term()];
            let mut factors = vec![ElementaryFactor::LinearAffine {
                matrix,
                translation,
            }];
            factors.extend(steps.into_iter().rev());
            return DecomposeOutcome::Tame(Decomposition { factors });
        }

        // Reduce the larger image against the smaller one.
        let reduce_y = dy >= dx;
        let (dbig, dsmall) = if reduce_y { (dy, dx) } else { (dx, dy) };
        if dsmall < 1 || dbig % dsmall != 0 {
            return DecomposeOutcome::NotAutomorphism(NotAutomorphism {
                condition: FailCondition::DegreeDivisibilityFails,
                state_x: cur.image_x,
                state_y: cur.image_y,
            });
        }
        let d = (dbig / dsmall) as usize;
        let (big, small) = if reduce_y {
            (&cur.image_y, &cur.image_x)
        } else {
            (&cur.image_x, &cur.image_y)
        };
        let v_small_pow = small
            .leading_form()
            .expect("nonzero by degree check")
            .into_poly()
            .pow(d)
            .expect("same field");
        let v_big = big
            .leading_form()
            .expect("nonzero by degree check")
            .into_poly();
        let Some(c) = v_big.proportionality_scalar(&v_small_pow) else {
            return DecomposeOutcome::NotAutomorphism(NotAutomorphism {
                condition: FailCondition::LeadingFormNotPower,
                state_x: cur.image_x,
                state_y: cur.image_y,
            });
        };
        let correction = small.pow(d).expect("same field").scalar_mul(&c);
        let reduced = big.sub(&correction).expect("same field");
        // Record the inverse of the applied elementary map.
        let monomial_h = Polynomial::monomial(
            field.clone(),
            2,
            Word::letter(if reduce_y { 0 } else { 1 }).pow(d),
            c.clone(),
        );
        let inverse_factor = if d >= 2 {
            if reduce_y {
                ElementaryFactor::AddToY(monomial_h)
            } else {
                ElementaryFactor::AddToX(monomial_h)
            }
        } else {
            let one = field.one();
            let zero = field.zero();
            let matrix = if reduce_y {
                [one.clone(), zero.clone(), c.clone(), one.clone()]
            } else {
                [one.clone(), c.clone(), zero.clone(), one.clone()]
            };
            ElementaryFactor::LinearAffine {
                matrix,
                translation: [zero.clone(), zero],
            }
        };
        steps.push(inverse_factor);
        if reduce_y {
            cur.image_y = reduced;
        } else {
            cur.image_x = reduced;
        }
    }
}

/// Inverse of a decomposable endomorphism.
pub fn invert<F: Field>(e: &Endomorphism<F>) -> Result<Endomorphism<F>, NotAutomorphism<F>> {
    match decompose_tame(e) {
        DecomposeOutcome::Tame(dec) => Ok(dec.invert(e.field()).recompose(e.field())),
        DecomposeOutcome::NotAutomorphism(cert) => Err(cert),
    }
}

/// True when the endomorphism is idempotent.
pub fn is_retraction<F: Field>(e: &Endomorphism<F>) -> bool {
    match e.compose(e) {
        Ok(sq) => sq == *e,
        Err(_) => false,
    }
}

/// Result of the idempotent-power search.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RetractionPower<F: Field> {
    pub power: u64,
    pub retraction: Endomorphism<F>,
}

/// Searches for an idempotent power of `e` by repeated squaring, having
/// first checked that `e` fixes `p`. Powers not of the form `2^t` are never
/// inspected, so an endomorphism whose idempotent lives at an odd power can
/// report `NoConvergence`; that outcome does not classify the input.
pub fn iterate_to_retraction<F: Field>(
    e: &Endomorphism<F>,
    p: &Polynomial<F>,
    max_iter: u32,
) -> Result<RetractionPower<F>, AlgError> {
    if e.apply(p)? != *p {
        return Err(AlgError::NotFixing);
    }
    let mut power = e.clone();
    let mut m: u64 = 1;
    let mut compositions = 0u32;
    loop {
        let squared = power.compose(&power)?;
        compositions += 1;
        if squared == power {
            return Ok(RetractionPower {
                power: m,
                retraction: power,
            });
        }
        if compositions > max_iter {
            return Err(AlgError::NoConvergence { max_iter });
        }
        power = squared;
        m *= 2;
    }
}

/// Writes `q` as a univariate polynomial in `r` by subduction, returning the
/// coefficients by ascending power of `r`. Fails when `q` is not in `K[r]`.
pub fn expand_in_generator<F: Field>(q: &Polynomial<F>, r: &Polynomial<F>) -> Option<Vec<F::Elem>> {
    let field = q.field().clone();
    let r_deg = r.degree().finite()?;
    if r_deg < 1 {
        return None;
    }
    let mut rest = q.clone();
    let mut coeffs: Vec<F::Elem> = Vec::new();
    loop {
        match rest.degree() {
            Degree::NegInf => break,
            Degree::Finite(0) => {
                set_coeff(&mut coeffs, 0, rest.constant_term(), &field);
                break;
            }
            Degree::Finite(d) => {
                if d % r_deg != 0 {
                    return None;
                }
                let e = (d / r_deg) as usize;
                let v_re = r
                    .leading_form()
                    .expect("nonconstant")
                    .into_poly()
                    .pow(e)
                    .expect("same field");
                let v_rest = rest.leading_form().expect("nonzero").into_poly();
                let c = v_rest.proportionality_scalar(&v_re)?;
                rest = rest
                    .sub(&r.pow(e).expect("same field").scalar_mul(&c))
                    .expect("same field");
                set_coeff(&mut coeffs, e, c, &field);
            }
        }
    }
    Some(coeffs)
}

fn set_coeff<F: Field>(coeffs: &mut Vec<F::Elem>, idx: usize, c: F::Elem, field: &F) {
    while coeffs.len() <= idx {
        coeffs.push(field.zero());
    }
    coeffs[idx] = c;
}

/// Extracts the single generator `r` with both images inside `K[r]`, by
/// subduction on the two images. The result is normalized to leading
/// coefficient 1 and zero constant term, and both images are re-expanded in
/// `r` as a postcondition check.
///
/// The guard is deliberately lighter than full idempotence: the identity and
/// non-commuting images are rejected, which is what the subduction needs.
pub fn retract_generator<F: Field>(e: &Endomorphism<F>) -> Result<Polynomial<F>, AlgError> {
    let field = e.field().clone();
    if e.is_identity() {
        return Err(AlgError::NotARetraction(
            "the identity is not a proper retraction".to_string(),
        ));
    }
    if !e.image_x.commutator(&e.image_y)?.is_zero() {
        return Err(AlgError::NotARetraction(
            "images do not commute".to_string(),
        ));
    }
    let mut gens: Vec<Polynomial<F>> = [&e.image_x, &e.image_y]
        .into_iter()
        .map(|p| p.strip_constant())
        .filter(|p| match p.degree() {
            Degree::Finite(d) => d >= 1,
            Degree::NegInf => false,
        })
        .collect();
    if gens.is_empty() {
        return Err(AlgError::NotARetraction(
            "both images are constant".to_string(),
        ));
    }
    while gens.len() == 2 {
        gens.sort_by_key(|p| finite_deg(p));
        let da = finite_deg(&gens[0]);
        let db = finite_deg(&gens[1]);
        if db % da != 0 {
            return Err(AlgError::ProperSubductionFailure(format!(
                "degree {db} not a multiple of degree {da}"
            )));
        }
        let d = (db / da) as usize;
        let va_pow = gens[0]
            .leading_form()
            .expect("nonconstant")
            .into_poly()
            .pow(d)?;
        let vb = gens[1].leading_form().expect("nonconstant").into_poly();
        let Some(c) = vb.proportionality_scalar(&va_pow) else {
            return Err(AlgError::ProperSubductionFailure(
                "leading form is not a power of the smaller generator".to_string(),
            ));
        };
        let reduced = gens[1]
            .sub(&gens[0].pow(d)?.scalar_mul(&c))?
            .strip_constant();
        if finite_deg(&reduced) >= 1 {
            gens[1] = reduced;
        } else {
            gens.pop();
        }
    }
    let mut r = gens.pop().expect("one generator remains");
    let lead_word = r.leading_word().expect("nonconstant").clone();
    let lead = r.coeff(&lead_word);
    r = r.scalar_mul(&field.inv(&lead)?).strip_constant();
    for image in [&e.image_x, &e.image_y] {
        let stripped = image.strip_constant();
        if !stripped.is_zero() && expand_in_generator(&stripped, &r).is_none() {
            return Err(AlgError::ProperSubductionFailure(
                "an image is not a univariate polynomial in the extracted generator".to_string(),
            ));
        }
    }
    Ok(r)
}

/// Output of the orbit-separation search.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrbitWitness<F: Field> {
    pub m: u32,
    pub value: Polynomial<F>,
    pub value_deg_r: i64,
}

/// Finds the least shift exponent `M` such that composing the retraction
/// with `x -> x + y^M` (or the mirrored shift) moves `r` to an element of
/// `K[r]` of `r`-degree above 1. The search cap grows once before giving up.
pub fn orbit_witness<F: Field>(
    ret: &Endomorphism<F>,
    r: &Polynomial<F>,
) -> Result<OrbitWitness<F>, AlgError> {
    let field = ret.field().clone();
    let r_deg = match r.degree() {
        Degree::Finite(d) if d >= 1 => d,
        _ => {
            return Err(AlgError::PreconditionFailed(
                "generator must be nonconstant".into(),
            ))
        }
    };
    if ret.is_identity() {
        return Err(AlgError::PreconditionFailed(
            "identity is not a proper retraction".into(),
        ));
    }
    if ret.apply(r)? != *r {
        return Err(AlgError::PreconditionFailed(
            "retraction does not fix the generator".into(),
        ));
    }
    let uses_letter =
        |p: &Polynomial<F>, letter: u8| p.terms().any(|(w, _)| w.letters().contains(&letter));
    // Shift the letter occurring in r by a power of the other letter, which
    // must have a nonconstant image under the retraction.
    let shift_y_into_x = uses_letter(r, 0) && finite_deg(&ret.image_y) >= 1;
    let shift_x_into_y = uses_letter(r, 1) && finite_deg(&ret.image_x) >= 1;
    if !shift_y_into_x && !shift_x_into_y {
        return Err(AlgError::PreconditionFailed(
            "no shift direction available: the generator misses the letter whose image is nonconstant".into(),
        ));
    }
    let base_cap =
        (finite_deg(&ret.image_x).max(0) + finite_deg(&ret.image_y).max(0) + r_deg + 2) as u32;
    for cap in [base_cap, base_cap * 2] {
        for m in 0..=cap {
            let alpha = if shift_y_into_x {
                Endomorphism::shift_x_by_power_of_y(field.clone(), m as usize)
            } else {
                Endomorphism::shift_y_by_power_of_x(field.clone(), m as usize)
            };
            let moved = ret.apply(&alpha.apply(r)?)?;
            if expand_in_generator(&moved.strip_constant(), r).is_none() {
                return Err(AlgError::PreconditionFailed(
                    "retraction image is not inside K[r]".into(),
                ));
            }
            let deg_r = match moved.degree() {
                Degree::Finite(d) => d / r_deg,
                Degree::NegInf => 0,
            };
            if deg_r > 1 {
                return Ok(OrbitWitness {
                    m,
                    value: moved,
                    value_deg_r: deg_r,
                });
            }
        }
    }
    Err(AlgError::CapExceeded { cap: base_cap * 2 })
}

/// A successful coordinate certification: a complement `q` and a full
/// elementary factorization of the automorphism `(p, q)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoordinateCertificate<F: Field> {
    pub q: Polynomial<F>,
    pub decomposition: Decomposition<F>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CertifyOutcome<F: Field> {
    Certificate(CoordinateCertificate<F>),
    /// Bounded search exhausted. Not a proof that `p` is not a coordinate.
    NoCertificateWithinBounds,
}

/// Greedy bounded search for a coordinate certificate.
///
/// Each round solves, by exact linear algebra, for a univariate correction
/// `h` whose first-order insertion into the occurrences of one letter
/// cancels every homogeneous slice of the current polynomial at or above its
/// degree; the candidate move is then applied exactly and kept only if the
/// degree strictly drops. Corrections beyond first order are not modeled, so
/// some coordinates are missed; the search never claims non-coordinacy.
pub fn coordinate_certify<F: Field>(
    p: &Polynomial<F>,
    search_bound: usize,
) -> Result<CertifyOutcome<F>, AlgError> {
    let field = p.field().clone();
    if p.alphabet_size() != 2 {
        return Err(AlgError::NotRankTwo {
            got: p.alphabet_size(),
        });
    }
    if !matches!(p.degree(), Degree::Finite(d) if d >= 1) {
        return Err(AlgError::ConstantInput);
    }
    let mut current = p.clone();
    let mut tau_inverse = Endomorphism::identity(field.clone());
    while finite_deg(&current) > 1 {
        let mut committed = false;
        for target_letter in [0u8, 1u8] {
            let Some(h) = solve_insertion_correction(&current, target_letter, search_bound) else {
                continue;
            };
            if h.is_zero() {
                continue;
            }
            let move_endo = match target_letter {
                0 => Endomorphism::new(
                    Polynomial::var(field.clone(), 2, 0).add(&h)?,
                    Polynomial::var(field.clone(), 2, 1),
                )?,
                _ => Endomorphism::new(
                    Polynomial::var(field.clone(), 2, 0),
                    Polynomial::var(field.clone(), 2, 1).add(&h)?,
                )?,
            };
            let candidate = move_endo.apply(&current)?;
            if candidate.degree() < current.degree() && !candidate.is_zero() {
                let move_inverse = match target_letter {
                    0 => Endomorphism::new(
                        Polynomial::var(field.clone(), 2, 0).sub(&h)?,
                        Polynomial::var(field.clone(), 2, 1),
                    )?,
                    _ => Endomorphism::new(
                        Polynomial::var(field.clone(), 2, 0),
                        Polynomial::var(field.clone(), 2, 1).sub(&h)?,
                    )?,
                };
                tau_inverse = tau_inverse.compose(&move_inverse)?;
                current = candidate;
                committed = true;
                break;
            }
        }
        if !committed {
            return Ok(CertifyOutcome::NoCertificateWithinBounds);
        }
    }
    // Degree one: complete with a complementary linear form.
    let a = current.coeff(&Word::letter(0));
    let q_lin = if !field.is_zero(&a) {
        Polynomial::var(field.clone(), 2, 1)
    } else {
        Polynomial::var(field.clone(), 2, 0)
    };
    let q = tau_inverse.apply(&q_lin)?;
    let pair = Endomorphism::new(p.clone(), q.clone())?;
    match decompose_tame(&pair) {
        DecomposeOutcome::Tame(dec) => Ok(CertifyOutcome::Certificate(CoordinateCertificate {
            q,
            decomposition: dec,
        })),
        DecomposeOutcome::NotAutomorphism(_) => Ok(CertifyOutcome::NoCertificateWithinBounds),
    }
}

/// Solves for `h` (univariate in the letter opposite to `target_letter`,
/// degree at most `bound`) such that the first-order insertions of `h` at
/// the occurrences of `target_letter` cancel all slices of `p` of degree
/// at least `deg(p)`.
fn solve_insertion_correction<F: Field>(
    p: &Polynomial<F>,
    target_letter: u8,
    bound: usize,
) -> Option<Polynomial<F>> {
    let field = p.field().clone();
    let deg = p.degree().finite()? as usize;
    let other_letter = 1 - target_letter;
    let n_unknowns = bound + 1;

    // Row space: words of degree in [deg, deg - 1 + bound].
    struct RowBuilder<G: Field> {
        field: G,
        width: usize,
        index: std::collections::BTreeMap<Word, usize>,
        rows: Vec<(Word, Vec<G::Elem>)>,
    }
    impl<G: Field> RowBuilder<G> {
        fn touch(&mut self, w: Word, col: Option<(usize, G::Elem)>) {
            let idx = *self.index.entry(w.clone()).or_insert_with(|| {
                self.rows.push((w, vec![self.field.zero(); self.width]));
                self.rows.len() - 1
            });
            if let Some((c, v)) = col {
                let cur = self.rows[idx].1[c].clone();
                self.rows[idx].1[c] = self.field.add(&cur, &v);
            }
        }
    }
    let mut builder = RowBuilder {
        field: field.clone(),
        width: n_unknowns,
        index: Default::default(),
        rows: Vec::new(),
    };
    let mut rhs_words: std::collections::BTreeMap<Word, F::Elem> = Default::default();
    for (w, coef) in p.terms() {
        if w.len() >= deg {
            rhs_words.insert(w.clone(), coef.clone());
        }
        // First-order insertions: replace one occurrence of the target
        // letter by other_letter^j.
        for (i, &l) in w.letters().iter().enumerate() {
            if l != target_letter {
                continue;
            }
            for j in 0..=bound {
                let new_len = w.len() - 1 + j;
                if new_len < deg || new_len > deg - 1 + bound {
                    continue;
                }
                let mut letters = Vec::with_capacity(new_len);
                letters.extend_from_slice(&w.letters()[..i]);
                letters.extend(std::iter::repeat_n(other_letter, j));
                letters.extend_from_slice(&w.letters()[i + 1..]);
                builder.touch(Word::from_letters(letters), Some((j, coef.clone())));
            }
        }
    }
    for w in rhs_words.keys() {
        builder.touch(w.clone(), None);
    }
    if builder.rows.is_empty() {
        return None;
    }
    let mut a = Matrix::zeros(field.clone(), builder.rows.len(), n_unknowns);
    let mut b = vec![field.zero(); builder.rows.len()];
    for (w, cols) in &builder.rows {
        let r = builder.index[w];
        for (c, v) in cols.iter().enumerate() {
            a.set(r, c, v.clone());
        }
        if let Some(coef) = rhs_words.get(w) {
            b[r] = field.neg(coef);
        }
    }
    let sol = a.solve(&b)?;
    let mut h = Polynomial::zero(field.clone(), 2);
    for (j, c) in sol.into_iter().enumerate() {
        h.add_term(Word::letter(other_letter).pow(j), c);
    }
    Some(h)
}

/// Draws a random tame automorphism as a bounded product of elementary
/// factors. A nonlinear factor raises one accumulated image to a power, so
/// it is only drawn while the resulting degree and support stay at desk
/// scale; otherwise the factor falls back to a linear-affine one.
pub fn random_tame<F: Field>(field: &F, rng: &mut impl Rng, max_factors: usize) -> Endomorphism<F> {
    let mut acc = Endomorphism::identity(field.clone());
    let n = rng.random_range(1..=max_factors);
    for _ in 0..n {
        let kind = rng.random_range(0..3u32);
        let factor = if kind == 0 {
            random_linear_affine(field, rng)
        } else {
            let d = rng.random_range(2..=3usize);
            let base = if kind == 1 {
                &acc.image_y
            } else {
                &acc.image_x
            };
            let base_deg = finite_deg(base).max(1) as usize;
            let base_terms = base.num_terms().max(1);
            let too_big =
                base_deg * d > 24 || (d == 2 && base_terms > 20) || (d == 3 && base_terms > 5);
            if too_big {
                random_linear_affine(field, rng)
            } else {
                let c = random_nonzero(field, rng);
                let letter = if kind == 1 { 1u8 } else { 0u8 };
                let h = Polynomial::monomial(field.clone(), 2, Word::letter(letter).pow(d), c);
                if kind == 1 {
                    ElementaryFactor::AddToX(h)
                } else {
                    ElementaryFactor::AddToY(h)
                }
            }
        };
        acc = acc.compose(&factor.to_endo(field)).expect("same field");
    }
    acc
}

fn random_linear_affine<F: Field>(field: &F, rng: &mut impl Rng) -> ElementaryFactor<F> {
    // Mostly monomial or triangular matrices; dense ones merge the supports
    // of both images, so they stay the exception.
    let zero = field.zero();
    let translation = [random_small(field, rng), random_small(field, rng)];
    let shape = rng.random_range(0..4u32);
    if shape < 3 {
        let a = random_nonzero(field, rng);
        let d = random_nonzero(field, rng);
        let matrix = match shape {
            0 => [a, zero.clone(), zero, d],
            1 => [zero.clone(), a, d, zero],
            _ => {
                let b = random_small(field, rng);
                [a, b, zero, d]
            }
        };
        return ElementaryFactor::LinearAffine {
            matrix,
            translation,
        };
    }
    loop {
        let matrix = [
            random_small(field, rng),
            random_small(field, rng),
            random_small(field, rng),
            random_small(field, rng),
        ];
        if field.is_zero(&Matrix::det2(field, &matrix)) {
            continue;
        }
        return ElementaryFactor::LinearAffine {
            matrix,
            translation,
        };
    }
}

pub(crate) fn random_small<F: Field>(field: &F, rng: &mut impl Rng) -> F::Elem {
    let ch = field.characteristic();
    let range = if ch == 0 { 7 } else { ch.min(7) as i64 };
    field.from_integer(rng.random_range(-(range - 1) / 2..=range / 2))
}

pub(crate) fn random_nonzero<F: Field>(field: &F, rng: &mut impl Rng) -> F::Elem {
    loop {
        let c = random_small(field, rng);
        if !field.is_zero(&c) {
            return c;
        }
    }
}
