use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ramanujan_core::complex::{assign_colors, build_complex, class_sizes};
use ramanujan_core::construction::{Construction, Params, DEFAULT_CAP};
use ramanujan_core::cyclic_algebra::{BasisChoice, BetaChoice, CyclicAlgebra, LocalizedMatrix};
use ramanujan_core::example::{binary_algebra, diff_table, render_table, septic_algebra, septic_checks};
use ramanujan_core::galois::{ExtElem, Fq};
use ramanujan_core::polyring::{format_poly, format_poly_ascending, PolyRing, RationalFn};
use ramanujan_core::projgroup::{expected_order, ProjError};
use ramanujan_core::quotient::QuotientError;
use ramanujan_core::spectra::{
    assemble_hecke, check_operators, dense_spectrum, ramanujan_verdict, sparse_spectrum, SpectraError,
    MEMBERSHIP_TOL,
};
use ramanujan_core::Error;

mod verify;

const SCHEMA_VERSION: &str = "1";

#[derive(Parser)]
#[command(name = "ramanujan", version, about = "Explicit Ramanujan complexes over F_q")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generators, relations and header sets, plus the chosen quotient.
    Construct(RunArgs),
    /// Selects α and reports the local ring L and the index r.
    Quotient(RunArgs),
    /// Runs the invariant suite; exits 5 on any failure.
    Verify(VerifyArgs),
    /// Closes the reduced generators and exports the Cayley complex.
    Cayley(RunArgs),
    /// Hecke spectrum and Ramanujan verdict.
    Spectrum(RunArgs),
    /// Reproduces the worked examples and diffs them against the golden data.
    ReproduceExample(OutArgs),
}

#[derive(Args, Clone)]
pub(crate) struct OutArgs {
    /// Write output into this directory instead of stdout.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args, Clone)]
pub(crate) struct RunArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    d: usize,
    #[arg(long, default_value_t = 1)]
    e: usize,
    #[arg(long, default_value_t = 1)]
    s: u32,
    /// Frobenius exponent ℓ, prime to d.
    #[arg(long, default_value_t = 1)]
    ell: u32,
    /// Modulus of F_{q^d}, e.g. "x^3+x+1" or "[1,1,0,1]".
    #[arg(long)]
    modulus: Option<String>,
    /// "auto" or comma-separated coordinates in the power basis.
    #[arg(long, default_value = "auto")]
    beta: String,
    /// normal | power | normal-from:c0,c1,… | explicit:c,…;c,…
    #[arg(long, default_value = "normal")]
    basis: String,
    #[arg(long)]
    target_r: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
    #[arg(long, default_value_t = MEMBERSHIP_TOL)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Dense)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Highest cell dimension for the complex.
    #[arg(long)]
    max_dim: Option<usize>,
    /// Iteration limit of the sparse eigensolver.
    #[arg(long, default_value_t = 20_000)]
    max_iter: usize,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Clone)]
pub(crate) struct VerifyArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Generator file written by `construct`, checked instead of trusted.
    #[arg(long)]
    generators: Option<PathBuf>,
    /// Skip the closure order check.
    #[arg(long)]
    no_closure: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Dense,
    Sparse,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
}

/// Failure carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Quotient(QuotientError::NoSuitableAlpha { .. }) => 3,
            Error::Proj(ProjError::CapExceeded { .. })
            | Error::Spectra(SpectraError::DenseCapExceeded { .. }) => 4,
            Error::Spectra(SpectraError::NonCommutingOperators { .. })
            | Error::Complex(_) => 5,
            _ => 2,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn parse_coeffs(text: &str, q: u64) -> Result<Vec<u32>, Failure> {
    text.split(',')
        .map(|t| {
            let c: u64 = t
                .trim()
                .parse()
                .map_err(|_| Failure::invalid(format!("bad coefficient {t:?}")))?;
            if c >= q {
                return Err(Failure::invalid(format!("coefficient {c} is not below q = {q}")));
            }
            Ok(c as u32)
        })
        .collect()
}

fn padded(mut v: Vec<u32>, d: usize) -> Result<ExtElem, Failure> {
    if v.len() > d {
        return Err(Failure::invalid(format!("expected at most {d} coordinates")));
    }
    v.resize(d, 0);
    Ok(ExtElem(v))
}

pub(crate) fn params(a: &RunArgs) -> Result<Params, Failure> {
    if a.d < 2 || a.e == 0 || a.s == 0 {
        return Err(Failure::invalid("need d ≥ 2, e ≥ 1 and s ≥ 1"));
    }
    let mut p = Params::new(a.q, a.d, a.e, a.s);
    p.ell = a.ell;
    p.target_r = a.target_r;
    if let Some(m) = &a.modulus {
        let f = Fq::from_order(a.q).map_err(|e| Failure::invalid(e.to_string()))?;
        let poly = PolyRing::new(f)
            .parse(m)
            .map_err(|e| Failure::invalid(e.to_string()))?;
        p.modulus = Some(poly);
    }
    if a.beta != "auto" {
        p.beta = BetaChoice::Explicit(padded(parse_coeffs(&a.beta, a.q)?, a.d)?);
    }
    p.basis = match a.basis.as_str() {
        "normal" => BasisChoice::Normal,
        "power" => BasisChoice::Power,
        other => {
            if let Some(rest) = other.strip_prefix("normal-from:") {
                BasisChoice::NormalFrom(padded(parse_coeffs(rest, a.q)?, a.d)?)
            } else if let Some(rest) = other.strip_prefix("explicit:") {
                BasisChoice::Explicit(
                    rest.split(';')
                        .map(|c| padded(parse_coeffs(c, a.q)?, a.d))
                        .collect::<Result<_, _>>()?,
                )
            } else {
                return Err(Failure::invalid(format!("unknown basis {other:?}")));
            }
        }
    };
    Ok(p)
}

pub(crate) fn emit(out: &OutArgs, name: &str, body: &str) -> Result<(), Failure> {
    match &out.out_dir {
        None => {
            print!("{body}");
            Ok(())
        }
        Some(dir) => {
            fs::create_dir_all(dir)
                .and_then(|()| fs::write(dir.join(name), body))
                .map_err(|e| Failure::invalid(format!("cannot write {}: {e}", dir.display())))
        }
    }
}

pub(crate) fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn rational_text(r: &RationalFn) -> String {
    if r.den().is_one() {
        format_poly_ascending(r.num(), "x")
    } else {
        format!(
            "({})/({})",
            format_poly_ascending(r.num(), "x"),
            format_poly_ascending(r.den(), "x")
        )
    }
}

fn localized_json(m: &LocalizedMatrix) -> Value {
    let d = m.mat.size();
    let entries: Vec<Vec<&[u32]>> = (0..d)
        .map(|i| (0..d).map(|j| m.mat.get(i, j).coeffs()).collect())
        .collect();
    json!({
        "den_pow": m.den_pow,
        "rows": m.mat.render("x"),
        "entries": entries,
    })
}

fn params_json(p: &Params) -> Value {
    json!({"q": p.q, "d": p.d, "e": p.e, "s": p.s, "ell": p.ell, "target_r": p.target_r})
}

fn algebra_json(alg: &CyclicAlgebra, p: &Params) -> Value {
    json!({
        "modulus": alg.ext().modulus(),
        "modulus_text": format_poly(alg.ext().modulus(), "v"),
        "basis": alg.basis(),
        "basis_choice": match &p.basis {
            BasisChoice::Normal => "normal",
            BasisChoice::Power => "power",
            BasisChoice::NormalFrom(_) => "normal-from",
            BasisChoice::Explicit(_) => "explicit",
        },
        "beta": alg.beta(),
        "beta_auto": p.beta == BetaChoice::Auto,
        "norm_form": alg.norm_form().t,
        "y": format_poly_ascending(alg.y(), "x"),
        "one_plus_y": format_poly_ascending(alg.one_plus_y(), "x"),
    })
}

fn quotient_json(c: &Construction) -> Value {
    let qp = &c.quotient;
    json!({
        "e": qp.e,
        "s": qp.s,
        "alpha": qp.alpha,
        "gamma": qp.gamma,
        "p": qp.p,
        "g": qp.g,
        "p_text": format_poly(&qp.p, "λ"),
        "g_text": format_poly(&qp.g, "λ"),
        "r": qp.r,
        "L_order": qp.ring.order().to_string(),
        "L0_order": qp.ring.residue_order(),
        "alpha_scanned": qp.scanned.to_string(),
    })
}

fn generators_json(alg: &CyclicAlgebra) -> Result<Vec<Value>, Failure> {
    alg.coset_reps()
        .iter()
        .enumerate()
        .map(|(i, u)| {
            let b = alg.b_matrix(u).map_err(|e| Failure::from(Error::from(e)))?;
            let r = alg.u_to_r(u).map_err(|e| Failure::from(Error::from(e)))?;
            let conj = alg
                .b_unit(u)
                .ok()
                .and_then(|unit| alg.conj_rep(&unit).split_laurent())
                .map(|(a, bm)| json!({"A": a.to_rows(), "B": bm.to_rows()}));
            Ok(json!({
                "index": i,
                "u": u,
                "r": r,
                "matrix": localized_json(&b),
                "conj": conj,
            }))
        })
        .collect()
}

fn cmd_construct(a: &RunArgs) -> Result<(), Failure> {
    let p = params(a)?;
    let c = Construction::new(&p)?;
    let alg = &c.alg;
    let headers: Vec<Value> = (1..alg.d())
        .map(|k| {
            let set = c.headers.get(k);
            json!({
                "k": k,
                "size": set.len(),
                "words": set.iter().map(|h| h.word.clone()).collect::<Vec<_>>(),
            })
        })
        .collect();
    let reduced: Vec<Value> = c
        .generators
        .iter()
        .map(|g| json!({"k": g.k, "rows": g.mat.rows()}))
        .collect();
    let v = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "construct",
        "params": params_json(&p),
        "algebra": algebra_json(alg, &p),
        "z_matrix": localized_json(&alg.z_matrix()),
        "generators": generators_json(alg)?,
        "relations": c.relations,
        "header_sets": headers,
        "quotient": quotient_json(&c),
        "reduced_generators": reduced,
    });
    emit(&a.out, "construct.json", &pretty(&v))
}

fn cmd_quotient(a: &RunArgs) -> Result<(), Failure> {
    let p = params(a)?;
    let c = Construction::new(&p)?;
    let mut v = quotient_json(&c);
    let obj = v.as_object_mut().expect("object");
    obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
    obj.insert("command".into(), json!("quotient"));
    obj.insert("beta".into(), json!(c.alg.beta()));
    emit(&a.out, "quotient.json", &pretty(&v))
}

fn cmd_cayley(a: &RunArgs) -> Result<(), Failure> {
    let p = params(a)?;
    let c = Construction::new(&p)?;
    let closure = c.closure(a.cap)?;
    let r = c.quotient.r;
    let colors = assign_colors(&closure, r).map_err(Error::from)?;
    let max_dim = a.max_dim.unwrap_or(p.d - 1);
    let mut cx = build_complex(&closure, max_dim);
    cx.set_colors(colors.clone());
    match a.format {
        Format::Csv => emit(&a.out, "edges.csv", &closure.edges_csv()),
        Format::Dot => emit(&a.out, "cayley.dot", &cx.to_dot()),
        Format::Json => {
            let expected = expected_order(p.d, &c.quotient.ring, r)
                .ok()
                .map(|n| n.to_string());
            let v = json!({
                "schema_version": SCHEMA_VERSION,
                "command": "cayley",
                "params": params_json(&p),
                "order": closure.order(),
                "expected_order": expected,
                "degree_by_color": closure.degree_by_color(),
                "r": r,
                "class_sizes": class_sizes(&colors, r),
                "cell_counts": (0..=cx.max_dim()).map(|i| cx.cell_count(i)).collect::<Vec<_>>(),
                "every_edge_in_triangle": (p.d > 2).then(|| cx.every_edge_in_triangle()),
            });
            emit(&a.out, "cayley.json", &pretty(&v))
        }
    }
}

fn cmd_spectrum(a: &RunArgs) -> Result<(), Failure> {
    let p = params(a)?;
    let c = Construction::new(&p)?;
    let closure = c.closure(a.cap)?;
    let r = c.quotient.r;
    let ops = assemble_hecke(&closure);
    let q = p.q;
    let mut report = match a.mode {
        ModeArg::Dense => dense_spectrum(&closure, &ops, q, r, a.tol).map_err(Error::from)?,
        ModeArg::Sparse => {
            if !check_operators(&ops).map_err(Error::from)? {
                return Err(Failure {
                    code: 5,
                    message: "A_{d-k} is not the transpose of A_k".into(),
                });
            }
            let colors = assign_colors(&closure, r).map_err(Error::from)?;
            sparse_spectrum(&ops, &colors, q, r, a.tol, a.max_iter).map_err(Error::from)?
        }
    };
    ramanujan_verdict(&mut report);
    let mut v = serde_json::to_value(&report).expect("serializable");
    let obj = v.as_object_mut().expect("object");
    obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
    obj.insert("command".into(), json!("spectrum"));
    emit(&a.out, "spectrum.json", &pretty(&v))
}

fn cmd_reproduce(out: &OutArgs) -> Result<(), Failure> {
    let mut text = String::new();
    let rendered = render_table(&binary_algebra()).map_err(|e| Failure::from(Error::from(e)))?;
    let diffs = diff_table(&rendered);
    let mut ok = diffs.is_empty();
    if ok {
        text.push_str("table: 7 generators, 3x3 and 9x9 forms match\n");
    } else {
        for (line, want, got) in &diffs {
            text.push_str(&format!("table line {line}: expected {want:?}, got {got:?}\n"));
        }
    }
    for (name, pass) in septic_checks(&septic_algebra()) {
        text.push_str(&format!("septic {name}: {}\n", if pass { "match" } else { "MISMATCH" }));
        ok &= pass;
    }
    emit(out, "reproduce.txt", &text)?;
    if ok {
        Ok(())
    } else {
        Err(Failure {
            code: 5,
            message: "golden data mismatch".into(),
        })
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Construct(a) => cmd_construct(&a),
        Command::Quotient(a) => cmd_quotient(&a),
        Command::Verify(a) => verify::cmd_verify(&a),
        Command::Cayley(a) => cmd_cayley(&a),
        Command::Spectrum(a) => cmd_spectrum(&a),
        Command::ReproduceExample(o) => cmd_reproduce(&o),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
