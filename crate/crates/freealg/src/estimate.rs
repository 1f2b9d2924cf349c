//! Degree-estimate checking: hypothesis verification and the inequality
//! harness, algebraic-dependence testing via commutators, the
//! commutator-degree counterexample family, and the lemma-level inequality
//! checks.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::endo::{self, Endomorphism};
use crate::error::AlgError;
use crate::field::Field;
use crate::poly::{Degree, Polynomial};
use crate::word::Word;

/// Two nonzero elements of a free algebra commute exactly when they are
/// algebraically dependent, so the dependence test is the commutator test.
pub fn alg_dependent<F: Field>(a: &Polynomial<F>, b: &Polynomial<F>) -> Result<bool, AlgError> {
    if a.is_zero() || b.is_zero() {
        return Err(AlgError::ZeroInput);
    }
    Ok(a.commutator(b)?.is_zero())
}

/// Everything the degree-estimate inequality check produces.
///
/// `bound = d_ratio * w` exactly, as rationals; `inequality_holds` compares
/// `lhs` against `bound` without rounding. When the hypotheses fail the
/// report is informational only.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EstimateReport {
    pub hypotheses_hold: bool,
    pub dep_leading: bool,
    pub div_fail: bool,
    pub alg_indep: bool,
    /// `deg([f,g]) / (deg f + deg g)`; zero when the commutator vanishes.
    pub d_ratio: BigRational,
    pub w: i64,
    pub lhs: Degree,
    pub bound: BigRational,
    pub inequality_holds: bool,
}

fn divides(a: i64, b: i64) -> bool {
    a > 0 && b % a == 0
}

fn degree_at_least(lhs: Degree, bound: &BigRational) -> bool {
    match lhs {
        Degree::NegInf => false,
        Degree::Finite(d) => BigRational::from_integer(BigInt::from(d)) >= *bound,
    }
}

pub fn check_estimate<F: Field>(
    f: &Polynomial<F>,
    g: &Polynomial<F>,
    p: &Polynomial<F>,
) -> Result<EstimateReport, AlgError> {
    if f.is_zero() || g.is_zero() || p.is_zero() {
        return Err(AlgError::ZeroInput);
    }
    if f.alphabet_size() != 2 || g.alphabet_size() != 2 || p.alphabet_size() != 2 {
        return Err(AlgError::NotRankTwo {
            got: f
                .alphabet_size()
                .max(g.alphabet_size())
                .max(p.alphabet_size()),
        });
    }
    let df = f.degree().finite().expect("nonzero");
    let dg = g.degree().finite().expect("nonzero");
    if df < 1 || dg < 1 {
        return Err(AlgError::ConstantInput);
    }
    let dep_leading = alg_dependent(f.leading_form()?.poly(), g.leading_form()?.poly())?;
    let div_fail = !divides(df, dg) && !divides(dg, df);
    let alg_indep = !alg_dependent(f, g)?;
    let hypotheses_hold = dep_leading && div_fail && alg_indep;

    let comm_deg = f.commutator(g)?.degree();
    let d_ratio = match comm_deg {
        Degree::NegInf => BigRational::from_integer(BigInt::from(0)),
        Degree::Finite(dc) => BigRational::new(BigInt::from(dc), BigInt::from(df + dg)),
    };
    let w = p
        .weighted_degree(&[df, dg])?
        .finite()
        .expect("p is nonzero");
    let lhs = p.substitute(&[f.clone(), g.clone()])?.degree();
    let bound = &d_ratio * BigRational::from_integer(BigInt::from(w));
    let inequality_holds = degree_at_least(lhs, &bound);
    Ok(EstimateReport {
        hypotheses_hold,
        dep_leading,
        div_fail,
        alg_indep,
        d_ratio,
        w,
        lhs,
        bound,
        inequality_holds,
    })
}

/// The commutator-degree family: `u = (xy)^k x`, `v = xy`, `w = yx`,
/// `f = u^3 + uv + uw + wu`, `g = u^2 + v + w`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CounterexampleFamily<F: Field> {
    pub k: i64,
    pub u: Polynomial<F>,
    pub v: Polynomial<F>,
    pub w: Polynomial<F>,
    pub r: Polynomial<F>,
    pub s: Polynomial<F>,
    pub f: Polynomial<F>,
    pub g: Polynomial<F>,
    pub f_deg: i64,
    pub g_deg: i64,
    pub comm_deg: i64,
    /// `deg([f,g]) / deg(g)` as an exact rational.
    pub ratio: BigRational,
}

/// Words of the family for a given `k`.
pub fn family_words(k: i64) -> (Word, Word, Word) {
    let xy = Word::from_letters(vec![0u8, 1]);
    let u = xy.pow(k as usize).concat(&Word::letter(0));
    let yx = Word::from_letters(vec![1u8, 0]);
    (u, xy, yx)
}

pub fn build_counterexample<F: Field>(
    k: i64,
    field: &F,
) -> Result<CounterexampleFamily<F>, AlgError> {
    if k < 2 {
        return Err(AlgError::BadK(k));
    }
    let one = field.one();
    let (uw, vw, ww) = family_words(k);
    let u = Polynomial::monomial(field.clone(), 2, uw, one.clone());
    let v = Polynomial::monomial(field.clone(), 2, vw, one.clone());
    let w = Polynomial::monomial(field.clone(), 2, ww, one);
    let r = u.mul(&v)?.add(&u.mul(&w)?)?.add(&w.mul(&u)?)?;
    let s = v.add(&w)?;
    let f = u.pow(3)?.add(&r)?;
    let g = u.pow(2)?.add(&s)?;
    let f_deg = f.degree().finite().expect("nonzero");
    let g_deg = g.degree().finite().expect("nonzero");
    let comm_deg = f
        .commutator(&g)?
        .degree()
        .finite()
        .ok_or(AlgError::ZeroInput)?;
    let ratio = BigRational::new(BigInt::from(comm_deg), BigInt::from(g_deg));
    Ok(CounterexampleFamily {
        k,
        u,
        v,
        w,
        r,
        s,
        f,
        g,
        f_deg,
        g_deg,
        comm_deg,
        ratio,
    })
}

/// Outcome of the commutator-degree conjecture check on one pair.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConjectureReport {
    pub min_deg: i64,
    pub comm_deg: Degree,
    pub violated: bool,
}

/// Checks the inequality `deg([f,g]) > min(deg f, deg g)` on a pair that
/// satisfies the conjecture's hypotheses; each failed hypothesis is reported
/// by name instead.
pub fn check_conjecture_inequality<F: Field>(
    f: &Polynomial<F>,
    g: &Polynomial<F>,
) -> Result<ConjectureReport, AlgError> {
    if f.is_zero() || g.is_zero() {
        return Err(AlgError::ZeroInput);
    }
    let df = f.degree().finite().expect("nonzero");
    let dg = g.degree().finite().expect("nonzero");
    if df < 1 || dg < 1 {
        return Err(AlgError::ConstantInput);
    }
    if alg_dependent(f, g)? {
        return Err(AlgError::HypothesesNotMet(
            "f and g are algebraically dependent".to_string(),
        ));
    }
    if !alg_dependent(f.leading_form()?.poly(), g.leading_form()?.poly())? {
        return Err(AlgError::HypothesesNotMet(
            "leading forms are algebraically independent".to_string(),
        ));
    }
    if divides(df, dg) || divides(dg, df) {
        return Err(AlgError::HypothesesNotMet(
            "one degree divides the other".to_string(),
        ));
    }
    let comm_deg = f.commutator(g)?.degree();
    let min_deg = df.min(dg);
    let violated = match comm_deg {
        Degree::NegInf => true,
        Degree::Finite(dc) => dc <= min_deg,
    };
    Ok(ConjectureReport {
        min_deg,
        comm_deg,
        violated,
    })
}

/// Weighted-degree lower bound for a two-letter-monomial carrier:
/// `w_{m,n}(p) >= m + n`, strict when some monomial of degree above 2
/// contains both letters.
pub fn check_lemma4<F: Field>(p: &Polynomial<F>, m: i64, n: i64) -> Result<bool, AlgError> {
    if p.alphabet_size() != 2 {
        return Err(AlgError::NotRankTwo {
            got: p.alphabet_size(),
        });
    }
    let has_mixed = p
        .terms()
        .any(|(w, _)| w.letters().contains(&0) && w.letters().contains(&1));
    if !has_mixed {
        return Err(AlgError::HypothesesNotMet(
            "no monomial contains both letters".to_string(),
        ));
    }
    let strict = p
        .terms()
        .any(|(w, _)| w.len() > 2 && w.letters().contains(&0) && w.letters().contains(&1));
    let wd = p
        .weighted_degree(&[m, n])?
        .finite()
        .ok_or(AlgError::ZeroInput)?;
    Ok(if strict { wd > m + n } else { wd >= m + n })
}

/// Substitution degree lower bound: `deg(p(f,g)) >= deg([f,g])` for an
/// injective pair and a carrier with a mixed monomial.
pub fn check_lemma5<F: Field>(
    p: &Polynomial<F>,
    f: &Polynomial<F>,
    g: &Polynomial<F>,
) -> Result<bool, AlgError> {
    let comm = f.commutator(g)?;
    if comm.is_zero() {
        return Err(AlgError::HypothesesNotMet(
            "images commute, the pair is not injective".to_string(),
        ));
    }
    let has_mixed = p
        .terms()
        .any(|(w, _)| w.letters().contains(&0) && w.letters().contains(&1));
    if !has_mixed {
        return Err(AlgError::HypothesesNotMet(
            "no monomial contains both letters".to_string(),
        ));
    }
    let lhs = p.substitute(&[f.clone(), g.clone()])?.degree();
    Ok(lhs >= comm.degree())
}

/// Iterated-commutator growth: `deg([e^k(x), e^k(y)]) >= k + 2` for
/// `k = 1..=k_max`, for an injective non-automorphism.
pub fn check_lemma6<F: Field>(e: &Endomorphism<F>, k_max: u32) -> Result<bool, AlgError> {
    let comm = e.image_x().commutator(e.image_y())?;
    if comm.is_zero() {
        return Err(AlgError::HypothesesNotMet(
            "images commute, the endomorphism is not injective".to_string(),
        ));
    }
    if matches!(endo::decompose_tame(e), endo::DecomposeOutcome::Tame(_)) {
        return Err(AlgError::HypothesesNotMet(
            "endomorphism is an automorphism".to_string(),
        ));
    }
    let mut power = e.clone();
    for k in 1..=k_max {
        let c = power.image_x().commutator(power.image_y())?;
        match c.degree() {
            Degree::Finite(d) if d >= k as i64 + 2 => {}
            _ => return Ok(false),
        }
        if k < k_max {
            power = power.compose(e)?;
        }
    }
    Ok(true)
}

/// One generated inequality-harness instance.
#[derive(Clone, Debug)]
pub struct HarnessInstance<F: Field> {
    pub f: Polynomial<F>,
    pub g: Polynomial<F>,
    pub p: Polynomial<F>,
    pub report: EstimateReport,
}

/// Summary of a seeded harness run.
#[derive(Clone, Debug)]
pub struct HarnessSummary {
    pub cases_requested: u32,
    pub cases_with_hypotheses: u32,
    pub violations: u32,
    pub attempts: u32,
}

/// An `(f, g, p)` harness instance.
pub type InstanceTriple<F> = (Polynomial<F>, Polynomial<F>, Polynomial<F>);

/// Generates instances shaped as `f = h^a + lower, g = h^b + lower` with
/// mutually non-dividing exponents, so the leading forms are dependent and
/// the degree-divisibility hypothesis fails by construction; random tails
/// keep the pair independent in almost every draw.
pub fn gen_estimate_instance<F: Field>(
    field: &F,
    rng: &mut impl Rng,
) -> Result<InstanceTriple<F>, AlgError> {
    let core_deg = rng.random_range(2..=3usize);
    let core_word = random_word(rng, core_deg);
    let mut core = Polynomial::monomial(
        field.clone(),
        2,
        core_word,
        endo::random_nonzero(field, rng),
    );
    // A short tail on the core keeps instances off the pure-monomial axis.
    if rng.random_range(0..2) == 0 {
        core.add_term(random_word(rng, 1), endo::random_small(field, rng));
    }
    let (a, b) = *[(2usize, 3usize), (3, 2), (3, 4), (4, 3)]
        .get(rng.random_range(0..4))
        .expect("index in range");
    let f = add_tail(core.pow(a)?, field, rng, a * core_deg)?;
    let g = add_tail(core.pow(b)?, field, rng, b * core_deg)?;
    let mut p = Polynomial::zero(field.clone(), 2);
    for _ in 0..rng.random_range(1..=4) {
        let len = rng.random_range(0..=3usize);
        let word = random_word(rng, len);
        p.add_term(word, endo::random_small(field, rng));
    }
    if p.is_zero() {
        p = Polynomial::one(field.clone(), 2);
    }
    Ok((f, g, p))
}

fn random_word(rng: &mut impl Rng, len: usize) -> Word {
    Word::from_letters(
        (0..len)
            .map(|_| rng.random_range(0..2u32) as u8)
            .collect::<Vec<_>>(),
    )
}

fn add_tail<F: Field>(
    mut p: Polynomial<F>,
    field: &F,
    rng: &mut impl Rng,
    top: usize,
) -> Result<Polynomial<F>, AlgError> {
    let n = rng.random_range(0..=5);
    for _ in 0..n {
        let len = rng.random_range(0..top);
        p.add_term(random_word(rng, len), endo::random_small(field, rng));
    }
    Ok(p)
}

/// Runs the seeded inequality harness until `cases` instances with all
/// hypotheses satisfied have been checked. Any instance where the
/// inequality fails is counted as a violation.
pub fn run_estimate_harness<F: Field>(
    field: &F,
    cases: u32,
    seed: u64,
) -> Result<(HarnessSummary, Vec<HarnessInstance<F>>), AlgError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut summary = HarnessSummary {
        cases_requested: cases,
        cases_with_hypotheses: 0,
        violations: 0,
        attempts: 0,
    };
    let mut failures = Vec::new();
    while summary.cases_with_hypotheses < cases {
        summary.attempts += 1;
        if summary.attempts > cases * 100 {
            return Err(AlgError::HypothesesNotMet(
                "instance generator failed to reach the requested case count".to_string(),
            ));
        }
        let (f, g, p) = gen_estimate_instance(field, &mut rng)?;
        let report = check_estimate(&f, &g, &p)?;
        if !report.hypotheses_hold {
            continue;
        }
        summary.cases_with_hypotheses += 1;
        if !report.inequality_holds {
            summary.violations += 1;
            failures.push(HarnessInstance { f, g, p, report });
        }
    }
    Ok((summary, failures))
}
