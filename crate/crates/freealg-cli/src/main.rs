//! Command-line front end: exact free-algebra arithmetic, degree-estimate
//! reports, endomorphism tooling, truncated series solvers, bimodule
//! classification, and the quantitative reproduction commands.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use freealg::bimodule;
use freealg::endo::{
    self, CertifyOutcome, DecomposeOutcome, Decomposition, ElementaryFactor, Endomorphism,
};
use freealg::estimate;
use freealg::field::{parse_field_selector, Field, FieldSel, PrimeField, Rationals};
use freealg::parse::{parse_compact_word, parse_poly};
use freealg::poly::{Degree, Polynomial};
use freealg::series::{self, Floor, SVariant, TruncatedSeries};
use freealg::AlgError;

#[derive(Parser)]
#[command(
    name = "freealg",
    version,
    about = "Exact computation in the rank-two free algebra"
)]
struct Cli {
    /// Coefficient field: `q` or `fp:<prime>`.
    #[arg(long, global = true, default_value = "q")]
    field: String,
    /// Number of letters (rank-two commands require 2).
    #[arg(long, global = true, default_value_t = 2)]
    alphabet: usize,
    /// Seed for randomized harnesses.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output rendering.
    #[arg(long, global = true, value_enum, default_value_t = OutputMode::Json)]
    output: OutputMode,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputMode {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Polynomial arithmetic.
    Poly {
        #[command(subcommand)]
        cmd: PolyCmd,
    },
    /// Degree-estimate checks and the counterexample family.
    Degest {
        #[command(subcommand)]
        cmd: DegestCmd,
    },
    /// Endomorphism and automorphism tooling.
    Endo {
        #[command(subcommand)]
        cmd: EndoCmd,
    },
    /// Truncated Mal'tsev-Neumann series.
    Mn {
        #[command(subcommand)]
        cmd: MnCmd,
    },
    /// Bimodule monomial classification and the commutator equation.
    Bimod {
        #[command(subcommand)]
        cmd: BimodCmd,
    },
    /// Reproduction runs for the quantitative families.
    Repro {
        #[command(subcommand)]
        cmd: ReproCmd,
    },
}

#[derive(Subcommand)]
enum PolyCmd {
    Add(TwoExprs),
    Mul(TwoExprs),
    Comm(TwoExprs),
    Deg(OneExpr),
    Wdeg {
        #[arg(long)]
        a: String,
        /// Comma-separated positive letter weights, e.g. `2,3`.
        #[arg(long)]
        weights: String,
    },
    Subst {
        #[arg(long)]
        p: String,
        /// Image of each letter, repeated per letter.
        #[arg(long = "image", required = true)]
        images: Vec<String>,
    },
    Parse(OneExpr),
}

#[derive(Args)]
struct TwoExprs {
    #[arg(long)]
    a: String,
    #[arg(long)]
    b: String,
}

#[derive(Args)]
struct OneExpr {
    #[arg(long)]
    a: String,
}

#[derive(Subcommand)]
enum DegestCmd {
    Check {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        p: String,
    },
    Counterexample {
        #[arg(long)]
        k: i64,
    },
    Conjecture {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    Lemma4 {
        #[arg(long)]
        p: String,
        #[arg(long)]
        m: i64,
        #[arg(long)]
        n: i64,
    },
    Lemma5 {
        #[arg(long)]
        p: String,
        #[arg(long)]
        fx: String,
        #[arg(long)]
        fy: String,
    },
    Lemma6 {
        #[arg(long)]
        fx: String,
        #[arg(long)]
        fy: String,
        #[arg(long, default_value_t = 4)]
        k_max: u32,
    },
    /// Seeded random-instance inequality harness.
    Harness {
        #[arg(long, default_value_t = 200)]
        cases: u32,
    },
}

#[derive(Args)]
struct EndoImages {
    #[arg(long)]
    fx: String,
    #[arg(long)]
    fy: String,
}

#[derive(Subcommand)]
enum EndoCmd {
    Apply {
        #[command(flatten)]
        images: EndoImages,
        #[arg(long)]
        p: String,
    },
    Compose {
        #[command(flatten)]
        images: EndoImages,
        #[arg(long)]
        gx: String,
        #[arg(long)]
        gy: String,
    },
    Decompose {
        #[command(flatten)]
        images: EndoImages,
    },
    Invert {
        #[command(flatten)]
        images: EndoImages,
    },
    IsRetraction {
        #[command(flatten)]
        images: EndoImages,
    },
    IterateRetraction {
        #[command(flatten)]
        images: EndoImages,
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 32)]
        max_iter: u32,
    },
    RetractGen {
        #[command(flatten)]
        images: EndoImages,
    },
    OrbitWitness {
        #[command(flatten)]
        images: EndoImages,
        #[arg(long)]
        r: String,
    },
    Coordinate {
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 6)]
        bound: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SVariantArg {
    Lemma10,
    Theorem9,
}

impl From<SVariantArg> for SVariant {
    fn from(v: SVariantArg) -> SVariant {
        match v {
            SVariantArg::Lemma10 => SVariant::Lemma10,
            SVariantArg::Theorem9 => SVariant::Theorem9,
        }
    }
}

#[derive(Subcommand)]
enum MnCmd {
    /// Build the characteristic-two family input `u^2 + s`.
    Build {
        #[arg(long)]
        k: i64,
        #[arg(long, value_enum, default_value_t = SVariantArg::Lemma10)]
        s_variant: SVariantArg,
    },
    Sqrt {
        /// Family parameter; builds `u^2 + s` over the selected field.
        #[arg(long, conflicts_with = "g")]
        k: Option<i64>,
        /// Explicit series, e.g. `x^2 + x*y^-1`.
        #[arg(long)]
        g: Option<String>,
        #[arg(long, default_value_t = 10)]
        window: i64,
        #[arg(long, default_value_t = 3)]
        basis_rounds: u32,
        #[arg(long, value_enum, default_value_t = SVariantArg::Lemma10)]
        s_variant: SVariantArg,
    },
    NthRoot {
        #[arg(long)]
        g: String,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 10)]
        window: i64,
        #[arg(long, default_value_t = 3)]
        basis_rounds: u32,
    },
    FracPow {
        #[arg(long, conflicts_with = "g")]
        k: Option<i64>,
        #[arg(long)]
        g: Option<String>,
        #[arg(long)]
        m: i64,
        #[arg(long)]
        n: i64,
        #[arg(long, default_value_t = 10)]
        window: i64,
        #[arg(long, default_value_t = 3)]
        basis_rounds: u32,
        #[arg(long, value_enum, default_value_t = SVariantArg::Lemma10)]
        s_variant: SVariantArg,
    },
    /// Scan for a positive-degree monomial containing an inverse letter,
    /// either in an explicit series or after the family power pipeline.
    Witness {
        #[arg(long, conflicts_with = "g")]
        k: Option<i64>,
        #[arg(long)]
        g: Option<String>,
        #[arg(long, default_value_t = 3)]
        m: i64,
        #[arg(long, default_value_t = 2)]
        n: i64,
        #[arg(long, default_value_t = 10)]
        window: i64,
        #[arg(long, default_value_t = 3)]
        basis_rounds: u32,
        #[arg(long, value_enum, default_value_t = SVariantArg::Lemma10)]
        s_variant: SVariantArg,
    },
}

#[derive(Subcommand)]
enum BimodCmd {
    Classify {
        /// Compact word, e.g. `xyx`.
        #[arg(long)]
        u: String,
        /// Compact word; `1` for the empty word.
        #[arg(long, default_value = "1")]
        t: String,
    },
    Solve {
        #[arg(long)]
        u: String,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        bound: usize,
    },
}

#[derive(Subcommand)]
enum ReproCmd {
    Theorem8 {
        /// Inclusive range, e.g. `2..6`.
        #[arg(long, default_value = "2..6")]
        k_range: String,
    },
    Theorem9 {
        #[arg(long, default_value_t = 2)]
        k: i64,
        #[arg(long, default_value_t = 10)]
        window: i64,
        #[arg(long, default_value_t = 3)]
        basis_rounds: u32,
        #[arg(long, value_enum, default_value_t = SVariantArg::Lemma10)]
        s_variant: SVariantArg,
    },
}

fn main() {
    let cli = Cli::parse();
    let sel = match parse_field_selector(&cli.field) {
        Ok(s) => s,
        Err(e) => fail(&e),
    };
    let result = match sel {
        FieldSel::Q => run(Rationals, &cli),
        FieldSel::Fp(p) => match PrimeField::new(p) {
            Ok(f) => run(f, &cli),
            Err(e) => fail(&e),
        },
    };
    match result {
        Ok(value) => match cli.output {
            OutputMode::Json => {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&value).expect("valid json")
                )
            }
            OutputMode::Text => println!("{}", render_text(&value)),
        },
        Err(e) => fail(&e),
    }
}

fn fail(e: &AlgError) -> ! {
    let obj = json!({
        "code": e.code(),
        "message": e.to_string(),
        "context": {},
    });
    eprintln!("{obj}");
    std::process::exit(1);
}

/// Text rendering: tables print as aligned rows, everything else as
/// `key: value` lines.
fn render_text(v: &Value) -> String {
    if let Some(rows) = v.get("table").and_then(|t| t.as_array()) {
        let mut out = String::new();
        if let Some(header) = v.get("columns").and_then(|c| c.as_array()) {
            let names: Vec<String> = header.iter().map(plain).collect();
            out.push_str(&names.join("\t"));
            out.push('\n');
        }
        for row in rows {
            if let Some(cells) = row.as_array() {
                let cells: Vec<String> = cells.iter().map(plain).collect();
                out.push_str(&cells.join("\t"));
                out.push('\n');
            }
        }
        return out.trim_end().to_string();
    }
    match v {
        Value::Object(map) => map
            .iter()
            .map(|(k, val)| format!("{k}: {}", plain(val)))
            .collect::<Vec<_>>()
            .join("\n"),
        other => plain(other),
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn run<F: Field>(field: F, cli: &Cli) -> Result<Value, AlgError> {
    match &cli.command {
        Command::Poly { cmd } => run_poly(field, cli, cmd),
        Command::Degest { cmd } => run_degest(field, cli, cmd),
        Command::Endo { cmd } => run_endo(field, cli, cmd),
        Command::Mn { cmd } => run_mn(field, cmd),
        Command::Bimod { cmd } => run_bimod(field, cmd),
        Command::Repro { cmd } => run_repro(field, cmd),
    }
}

fn need_rank2(alphabet: usize) -> Result<(), AlgError> {
    if alphabet != 2 {
        return Err(AlgError::NotRankTwo { got: alphabet });
    }
    Ok(())
}

fn degree_json(d: Degree) -> Value {
    match d {
        Degree::NegInf => Value::String("-inf".to_string()),
        Degree::Finite(n) => json!(n),
    }
}

/// Exact fraction as a string; integral values print without a denominator.
fn ratio_string(r: &freealg::BigRational) -> String {
    Rationals.format_elem(r)
}

fn poly_value<F: Field>(p: &Polynomial<F>) -> Value {
    json!({
        "expr": p.to_string(),
        "degree": degree_json(p.degree()),
        "terms": p.num_terms(),
    })
}

fn run_poly<F: Field>(field: F, cli: &Cli, cmd: &PolyCmd) -> Result<Value, AlgError> {
    let n = cli.alphabet;
    let parse = |s: &str| parse_poly(s, &field, n);
    let out = |p: Polynomial<F>| -> Value {
        json!({
            "field": field.descriptor(),
            "alphabet": n,
            "result": poly_value(&p),
        })
    };
    match cmd {
        PolyCmd::Add(t) => Ok(out(parse(&t.a)?.add(&parse(&t.b)?)?)),
        PolyCmd::Mul(t) => Ok(out(parse(&t.a)?.mul(&parse(&t.b)?)?)),
        PolyCmd::Comm(t) => Ok(out(parse(&t.a)?.commutator(&parse(&t.b)?)?)),
        PolyCmd::Deg(o) => {
            let p = parse(&o.a)?;
            Ok(json!({
                "field": field.descriptor(),
                "degree": degree_json(p.degree()),
            }))
        }
        PolyCmd::Wdeg { a, weights } => {
            let p = parse(a)?;
            let ws: Result<Vec<i64>, _> = weights.split(',').map(|w| w.trim().parse()).collect();
            let ws = ws.map_err(|_| AlgError::BadWeights(format!("cannot parse `{weights}`")))?;
            Ok(json!({
                "field": field.descriptor(),
                "weights": ws,
                "weighted_degree": degree_json(p.weighted_degree(&ws)?),
            }))
        }
        PolyCmd::Subst { p, images } => {
            let target = parse(p)?;
            let imgs: Result<Vec<_>, _> = images.iter().map(|s| parse(s)).collect();
            Ok(out(target.substitute(&imgs?)?))
        }
        PolyCmd::Parse(o) => {
            let p = parse(&o.a)?;
            let terms: Vec<Value> = p
                .sorted_terms_for_display()
                .into_iter()
                .map(|(w, c)| json!([w.format(n), field.format_elem(c), w.len()]))
                .collect();
            Ok(json!({
                "field": field.descriptor(),
                "alphabet": n,
                "canonical": p.to_string(),
                "terms": terms,
            }))
        }
    }
}

fn estimate_report_value(rep: &estimate::EstimateReport) -> Value {
    json!({
        "hypotheses_hold": rep.hypotheses_hold,
        "dep_leading": rep.dep_leading,
        "div_fail": rep.div_fail,
        "alg_indep": rep.alg_indep,
        "D": ratio_string(&rep.d_ratio),
        "w": rep.w,
        "lhs": degree_json(rep.lhs),
        "bound": ratio_string(&rep.bound),
        "inequality_holds": rep.inequality_holds,
    })
}

fn run_degest<F: Field>(field: F, cli: &Cli, cmd: &DegestCmd) -> Result<Value, AlgError> {
    need_rank2(cli.alphabet)?;
    let parse = |s: &str| parse_poly(s, &field, 2);
    match cmd {
        DegestCmd::Check { f, g, p } => {
            let rep = estimate::check_estimate(&parse(f)?, &parse(g)?, &parse(p)?)?;
            let mut v = estimate_report_value(&rep);
            v["field"] = json!(field.descriptor());
            Ok(v)
        }
        DegestCmd::Counterexample { k } => {
            let fam = estimate::build_counterexample(*k, &field)?;
            Ok(json!({
                "field": field.descriptor(),
                "k": fam.k,
                "u": fam.u.to_string(),
                "v": fam.v.to_string(),
                "w": fam.w.to_string(),
                "r": fam.r.to_string(),
                "s": fam.s.to_string(),
                "f": fam.f.to_string(),
                "g": fam.g.to_string(),
                "deg_f": fam.f_deg,
                "deg_g": fam.g_deg,
                "deg_comm": fam.comm_deg,
                "ratio": ratio_string(&fam.ratio),
            }))
        }
        DegestCmd::Conjecture { f, g } => {
            let rep = estimate::check_conjecture_inequality(&parse(f)?, &parse(g)?)?;
            Ok(json!({
                "field": field.descriptor(),
                "min_deg": rep.min_deg,
                "comm_deg": degree_json(rep.comm_deg),
                "violated": rep.violated,
            }))
        }
        DegestCmd::Lemma4 { p, m, n } => {
            let holds = estimate::check_lemma4(&parse(p)?, *m, *n)?;
            Ok(json!({"field": field.descriptor(), "holds": holds}))
        }
        DegestCmd::Lemma5 { p, fx, fy } => {
            let holds = estimate::check_lemma5(&parse(p)?, &parse(fx)?, &parse(fy)?)?;
            Ok(json!({"field": field.descriptor(), "holds": holds}))
        }
        DegestCmd::Lemma6 { fx, fy, k_max } => {
            let e = Endomorphism::new(parse(fx)?, parse(fy)?)?;
            let holds = estimate::check_lemma6(&e, *k_max)?;
            Ok(json!({"field": field.descriptor(), "k_max": k_max, "holds": holds}))
        }
        DegestCmd::Harness { cases } => {
            let (summary, failures) = estimate::run_estimate_harness(&field, *cases, cli.seed)?;
            let failure_list: Vec<Value> = failures
                .iter()
                .map(|inst| {
                    json!({
                        "f": inst.f.to_string(),
                        "g": inst.g.to_string(),
                        "p": inst.p.to_string(),
                        "report": estimate_report_value(&inst.report),
                    })
                })
                .collect();
            Ok(json!({
                "field": field.descriptor(),
                "seed": cli.seed,
                "cases": summary.cases_with_hypotheses,
                "attempts": summary.attempts,
                "violations": summary.violations,
                "all_hold": summary.violations == 0,
                "failures": failure_list,
            }))
        }
    }
}

fn factor_value<F: Field>(field: &F, f: &ElementaryFactor<F>) -> Value {
    match f {
        ElementaryFactor::LinearAffine {
            matrix,
            translation,
        } => json!({
            "kind": "LinearAffine",
            "matrix": [
                [field.format_elem(&matrix[0]), field.format_elem(&matrix[1])],
                [field.format_elem(&matrix[2]), field.format_elem(&matrix[3])],
            ],
            "translation": [
                field.format_elem(&translation[0]),
                field.format_elem(&translation[1]),
            ],
        }),
        ElementaryFactor::AddToX(h) => json!({"kind": "AddToX", "h": h.to_string()}),
        ElementaryFactor::AddToY(h) => json!({"kind": "AddToY", "h": h.to_string()}),
    }
}

fn decomposition_value<F: Field>(field: &F, dec: &Decomposition<F>) -> Value {
    Value::Array(dec.factors.iter().map(|f| factor_value(field, f)).collect())
}

fn run_endo<F: Field>(field: F, cli: &Cli, cmd: &EndoCmd) -> Result<Value, AlgError> {
    need_rank2(cli.alphabet)?;
    let parse = |s: &str| parse_poly(s, &field, 2);
    let build = |im: &EndoImages| -> Result<Endomorphism<F>, AlgError> {
        Endomorphism::new(parse(&im.fx)?, parse(&im.fy)?)
    };
    match cmd {
        EndoCmd::Apply { images, p } => {
            let e = build(images)?;
            let out = e.apply(&parse(p)?)?;
            Ok(json!({"field": field.descriptor(), "result": poly_value(&out)}))
        }
        EndoCmd::Compose { images, gx, gy } => {
            let e1 = build(images)?;
            let e2 = Endomorphism::new(parse(gx)?, parse(gy)?)?;
            let c = e1.compose(&e2)?;
            Ok(json!({
                "field": field.descriptor(),
                "image_x": c.image_x().to_string(),
                "image_y": c.image_y().to_string(),
            }))
        }
        EndoCmd::Decompose { images } => {
            let e = build(images)?;
            match endo::decompose_tame(&e) {
                DecomposeOutcome::Tame(dec) => Ok(json!({
                    "field": field.descriptor(),
                    "status": "automorphism",
                    "factors": decomposition_value(&field, &dec),
                })),
                DecomposeOutcome::NotAutomorphism(cert) => Ok(json!({
                    "field": field.descriptor(),
                    "status": "not_automorphism",
                    "condition": cert.condition.message(),
                    "state": {
                        "fx": cert.state_x.to_string(),
                        "fy": cert.state_y.to_string(),
                    },
                })),
            }
        }
        EndoCmd::Invert { images } => {
            let e = build(images)?;
            match endo::invert(&e) {
                Ok(inv) => Ok(json!({
                    "field": field.descriptor(),
                    "image_x": inv.image_x().to_string(),
                    "image_y": inv.image_y().to_string(),
                })),
                Err(cert) => {
                    let obj = json!({
                        "code": "NotAutomorphism",
                        "message": format!("not an automorphism: {}", cert.condition.message()),
                        "context": {
                            "condition": cert.condition.message(),
                            "fx": cert.state_x.to_string(),
                            "fy": cert.state_y.to_string(),
                        },
                    });
                    eprintln!("{obj}");
                    std::process::exit(1);
                }
            }
        }
        EndoCmd::IsRetraction { images } => {
            let e = build(images)?;
            Ok(json!({
                "field": field.descriptor(),
                "is_retraction": endo::is_retraction(&e),
            }))
        }
        EndoCmd::IterateRetraction {
            images,
            p,
            max_iter,
        } => {
            let e = build(images)?;
            let res = endo::iterate_to_retraction(&e, &parse(p)?, *max_iter)?;
            Ok(json!({
                "field": field.descriptor(),
                "m": res.power,
                "image_x": res.retraction.image_x().to_string(),
                "image_y": res.retraction.image_y().to_string(),
            }))
        }
        EndoCmd::RetractGen { images } => {
            let e = build(images)?;
            let r = endo::retract_generator(&e)?;
            Ok(json!({"field": field.descriptor(), "generator": r.to_string()}))
        }
        EndoCmd::OrbitWitness { images, r } => {
            let e = build(images)?;
            let w = endo::orbit_witness(&e, &parse(r)?)?;
            Ok(json!({
                "field": field.descriptor(),
                "M": w.m,
                "value": w.value.to_string(),
                "deg_r": w.value_deg_r,
            }))
        }
        EndoCmd::Coordinate { p, bound } => match endo::coordinate_certify(&parse(p)?, *bound)? {
            CertifyOutcome::Certificate(cert) => Ok(json!({
                "field": field.descriptor(),
                "status": "coordinate",
                "q": cert.q.to_string(),
                "factors": decomposition_value(&field, &cert.decomposition),
            })),
            CertifyOutcome::NoCertificateWithinBounds => Ok(json!({
                "field": field.descriptor(),
                "status": "no_certificate_within_bounds",
                "bound": bound,
            })),
        },
    }
}

fn series_value<F: Field>(field: &F, s: &TruncatedSeries<F>) -> Value {
    let terms: Vec<Value> = s
        .sorted_terms_for_display()
        .into_iter()
        .map(|(w, c)| json!([w.format(), field.format_elem(c), w.degree()]))
        .collect();
    json!({
        "floor": match s.floor() {
            Floor::Exact => Value::String("-inf".to_string()),
            Floor::At(k) => json!(k),
        },
        "top": s.top().map_or(Value::String("-inf".to_string()), |t| json!(t)),
        "terms": terms,
    })
}

fn mn_input<F: Field>(
    field: &F,
    k: Option<i64>,
    g: &Option<String>,
    variant: SVariant,
) -> Result<TruncatedSeries<F>, AlgError> {
    match (k, g) {
        (Some(k), None) => series::build_theorem9_input(k, field, variant),
        (None, Some(expr)) => series::parse_series(expr, field),
        _ => Err(AlgError::BadBound(
            "provide exactly one of --k or --g".to_string(),
        )),
    }
}

fn run_mn<F: Field>(field: F, cmd: &MnCmd) -> Result<Value, AlgError> {
    match cmd {
        MnCmd::Build { k, s_variant } => {
            let g = series::build_theorem9_input(*k, &field, (*s_variant).into())?;
            Ok(json!({
                "field": field.descriptor(),
                "k": k,
                "g": series_value(&field, &g),
            }))
        }
        MnCmd::Sqrt {
            k,
            g,
            window,
            basis_rounds,
            s_variant,
        } => {
            let input = mn_input(&field, *k, g, (*s_variant).into())?;
            let res = series::mn_sqrt_char2(&input, *window, *basis_rounds)?;
            Ok(json!({
                "field": field.descriptor(),
                "window": window,
                "h": series_value(&field, &res.root),
                "residual_top": res.residual.top().map_or(Value::String("-inf".into()), |t| json!(t)),
            }))
        }
        MnCmd::NthRoot {
            g,
            n,
            window,
            basis_rounds,
        } => {
            let input = series::parse_series(g, &field)?;
            let res = series::mn_nth_root(&input, *n, *window, *basis_rounds)?;
            Ok(json!({
                "field": field.descriptor(),
                "n": n,
                "window": window,
                "h": series_value(&field, &res.root),
                "residual_top": res.residual.top().map_or(Value::String("-inf".into()), |t| json!(t)),
            }))
        }
        MnCmd::FracPow {
            k,
            g,
            m,
            n,
            window,
            basis_rounds,
            s_variant,
        } => {
            let input = mn_input(&field, *k, g, (*s_variant).into())?;
            let fp = series::mn_fractional_power(&input, *m, *n, *window, *basis_rounds)?;
            Ok(json!({
                "field": field.descriptor(),
                "exponent": format!("{}/{}", fp.exponent.0, fp.exponent.1),
                "normalized_from": fp.normalized_from.map(|(a, b)| format!("{a}/{b}")),
                "result": series_value(&field, &fp.result),
            }))
        }
        MnCmd::Witness {
            k,
            g,
            m,
            n,
            window,
            basis_rounds,
            s_variant,
        } => {
            let scanned = match (k, g) {
                (None, Some(expr)) => series::parse_series(expr, &field)?,
                _ => {
                    let input = mn_input(&field, *k, g, (*s_variant).into())?;
                    series::mn_fractional_power(&input, *m, *n, *window, *basis_rounds)?.result
                }
            };
            let witness = series::negative_power_witness(&scanned);
            Ok(json!({
                "field": field.descriptor(),
                "witness": witness.map(|w| json!({
                    "word": w.format(),
                    "degree": w.degree(),
                })),
            }))
        }
    }
}

fn run_bimod<F: Field>(field: F, cmd: &BimodCmd) -> Result<Value, AlgError> {
    match cmd {
        BimodCmd::Classify { u, t } => {
            let uw = parse_compact_word(u)?;
            let tw = parse_compact_word(t)?;
            let class = bimodule::classify_monomial(&uw, &tw)?;
            Ok(match class {
                bimodule::MonomialClass::Type1 => json!({"class": "Type1"}),
                bimodule::MonomialClass::Type2 => json!({"class": "Type2"}),
                bimodule::MonomialClass::Type3 { v1, v2, k, t1, t2 } => json!({
                    "class": "Type3",
                    "v1": v1.format(2),
                    "v2": v2.format(2),
                    "k": k,
                    "t1": t1.format(2),
                    "t2": t2.format(2),
                }),
            })
        }
        BimodCmd::Solve { u, m, n, bound } => {
            let uw = parse_compact_word(u)?;
            let sol = bimodule::solve_commutator_equation(&uw, *m, *n, *bound, &field)?;
            let basis: Vec<Value> = sol
                .basis
                .iter()
                .map(|(s, r)| json!({"s": s.to_string(), "r": r.to_string()}))
                .collect();
            Ok(json!({
                "field": field.descriptor(),
                "bound": sol.bound,
                "kernel_dim": sol.kernel_dim(),
                "basis": basis,
            }))
        }
    }
}

fn parse_k_range(s: &str) -> Result<(i64, i64), AlgError> {
    let parts: Vec<&str> = s.split("..").collect();
    if parts.len() != 2 {
        return Err(AlgError::BadBound(format!(
            "range `{s}` must look like `2..6`"
        )));
    }
    let lo: i64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| AlgError::BadBound(format!("cannot parse lower bound in `{s}`")))?;
    let hi: i64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| AlgError::BadBound(format!("cannot parse upper bound in `{s}`")))?;
    if lo > hi {
        return Err(AlgError::BadBound(format!("empty range `{s}`")));
    }
    Ok((lo, hi))
}

fn run_repro<F: Field>(field: F, cmd: &ReproCmd) -> Result<Value, AlgError> {
    match cmd {
        ReproCmd::Theorem8 { k_range } => {
            let (lo, hi) = parse_k_range(k_range)?;
            let mut rows = Vec::new();
            for k in lo..=hi {
                let fam = estimate::build_counterexample(k, &field)?;
                let conj = estimate::check_conjecture_inequality(&fam.f, &fam.g)?;
                rows.push(json!([
                    k,
                    fam.f_deg,
                    fam.g_deg,
                    fam.comm_deg,
                    ratio_string(&fam.ratio),
                    conj.violated,
                ]));
            }
            Ok(json!({
                "field": field.descriptor(),
                "columns": ["k", "deg_f", "deg_g", "deg_comm", "ratio", "conjecture_violated"],
                "table": rows,
            }))
        }
        ReproCmd::Theorem9 {
            k,
            window,
            basis_rounds,
            s_variant,
        } => {
            let g = series::build_theorem9_input(*k, &field, (*s_variant).into())?;
            let error_value = |e: &AlgError| {
                json!({
                    "status": "error",
                    "code": e.code(),
                    "message": e.to_string(),
                })
            };
            let sqrt_value = match series::mn_sqrt_char2(&g, *window, *basis_rounds) {
                Ok(res) => json!({
                    "status": "ok",
                    "h": series_value(&field, &res.root),
                    "residual_top": res
                        .residual
                        .top()
                        .map_or(Value::String("-inf".into()), |t| json!(t)),
                }),
                Err(e) => error_value(&e),
            };
            // The 3/2 power needs the root solved one window deeper, so it
            // can fail even when the square root above succeeded.
            let pipeline = match series::mn_fractional_power(&g, 3, 2, *window, *basis_rounds) {
                Ok(fp) => {
                    let witness = series::negative_power_witness(&fp.result);
                    json!({
                        "status": "ok",
                        "power": series_value(&field, &fp.result),
                        "witness": witness
                            .map(|w| json!({"word": w.format(), "degree": w.degree()})),
                    })
                }
                Err(e) => error_value(&e),
            };
            Ok(json!({
                "field": field.descriptor(),
                "k": k,
                "window": window,
                "g": series_value(&field, &g),
                "sqrt": sqrt_value,
                "frac_pow_3_2": pipeline,
            }))
        }
    }
}
