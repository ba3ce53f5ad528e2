//! The `verify` subcommand: named invariant checks with pass/fail/skip status.

use std::fs;

use serde_json::{json, Value};

use ramanujan_core::construction::Construction;
use ramanujan_core::cyclic_algebra::{AlgebraError, LocalizedMatrix, PolyMatrix};
use ramanujan_core::polyring::Poly;
use ramanujan_core::projgroup::{expected_order, proj_mul, ProjMatrix};
use ramanujan_core::spectra::q_binomial;
use ramanujan_core::Error;

use crate::{emit, params, pretty, rational_text, Failure, VerifyArgs, SCHEMA_VERSION};

struct Check {
    name: &'static str,
    status: &'static str,
    detail: String,
}

impl Check {
    fn new(name: &'static str, ok: bool, detail: impl Into<String>) -> Self {
        Self {
            name,
            status: if ok { "pass" } else { "fail" },
            detail: detail.into(),
        }
    }

    fn skipped(name: &'static str, detail: impl Into<String>) -> Self {
        Self {
            name,
            status: "skipped",
            detail: detail.into(),
        }
    }
}

fn bad_file(msg: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: format!("generator file: {}", msg.into()),
    }
}

/// Generator matrices from a `construct` output file.
fn load_generators(path: &std::path::Path, d: usize) -> Result<Vec<LocalizedMatrix>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| bad_file(e.to_string()))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| bad_file(e.to_string()))?;
    let gens = v["generators"]
        .as_array()
        .ok_or_else(|| bad_file("missing \"generators\""))?;
    gens.iter()
        .map(|g| {
            let m = &g["matrix"];
            let den_pow = m["den_pow"]
                .as_u64()
                .ok_or_else(|| bad_file("missing den_pow"))?;
            let rows = m["entries"]
                .as_array()
                .filter(|r| r.len() == d)
                .ok_or_else(|| bad_file("entries must have d rows"))?;
            let mut entries = Vec::with_capacity(d * d);
            for row in rows {
                let row = row
                    .as_array()
                    .filter(|r| r.len() == d)
                    .ok_or_else(|| bad_file("rows must have d entries"))?;
                for e in row {
                    let coeffs: Vec<u32> = serde_json::from_value(e.clone())
                        .map_err(|e| bad_file(e.to_string()))?;
                    entries.push(Poly::from_coeffs(coeffs));
                }
            }
            Ok(LocalizedMatrix::new(
                PolyMatrix::from_entries(d, entries),
                den_pow as u32,
            ))
        })
        .collect()
}

fn inverse_pairs(a: &[ProjMatrix], b: &[ProjMatrix], c: &Construction) -> bool {
    let ring = &c.quotient.ring;
    a.iter().all(|x| {
        b.iter()
            .any(|y| proj_mul(x, y, ring) == ProjMatrix::identity(x.d()))
    })
}

pub(crate) fn cmd_verify(args: &VerifyArgs) -> Result<(), Failure> {
    let a = &args.run;
    let p = params(a)?;
    let c = Construction::new(&p)?;
    let alg = &c.alg;
    let d = alg.d();
    let r = alg.ring();
    let mut checks = Vec::new();

    let computed = alg.generators();
    let gens = match &args.generators {
        Some(path) => {
            let loaded = load_generators(path, d)?;
            let same = loaded.len() == computed.len()
                && loaded
                    .iter()
                    .zip(&computed)
                    .all(|(x, y)| x.equals(y, alg.one_plus_y(), r));
            checks.push(Check::new(
                "generators_match",
                same,
                format!("{} generators in file", loaded.len()),
            ));
            loaded
        }
        None => computed,
    };

    let zd = alg.z_matrix().mat.pow(d as u64, r);
    checks.push(Check::new(
        "z_power",
        zd == PolyMatrix::scalar(d, alg.one_plus_y().clone()),
        format!("z^{d} = (1+y)·I"),
    ));

    let want = r
        .rational(alg.y().clone(), alg.one_plus_y().clone())
        .map_err(|e| Failure::from(Error::from(e)))?;
    let bad: Vec<usize> = gens
        .iter()
        .enumerate()
        .filter(|(_, b)| b.det(alg.one_plus_y(), r) != want)
        .map(|(i, _)| i)
        .collect();
    checks.push(Check::new(
        "det_identity",
        bad.is_empty(),
        if bad.is_empty() {
            format!("det(b_u) = {} for all u", rational_text(&want))
        } else {
            format!("fails for generators {bad:?}")
        },
    ));

    let nonscalar = c
        .relations
        .iter()
        .filter(|t| {
            !t.iter()
                .fold(LocalizedMatrix::identity(d), |acc, &i| acc.mul(&gens[i], r))
                .is_scalar()
        })
        .count();
    checks.push(Check::new(
        "relations",
        !c.relations.is_empty() && nonscalar == 0,
        format!("{} relations of length {d}, {nonscalar} not scalar", c.relations.len()),
    ));

    let sizes = c.headers.sizes();
    let want_sizes: Vec<usize> = (1..d).map(|k| q_binomial(d, k, p.q) as usize).collect();
    checks.push(Check::new(
        "header_sizes",
        sizes == want_sizes,
        format!("|S_k| = {sizes:?}, expected {want_sizes:?}"),
    ));

    checks.push(match alg.reld_check() {
        Ok(ok) => Check::new("reld", ok, format!("b^{d} scalar")),
        Err(AlgebraError::NotCharPower { .. }) => {
            Check::skipped("reld", "characteristic is not a power of d")
        }
        Err(e) => Check::new("reld", false, e.to_string()),
    });

    let by_k: Vec<Vec<ProjMatrix>> = (1..d)
        .map(|k| {
            c.generators
                .iter()
                .filter(|g| g.k == k)
                .map(|g| g.mat.clone())
                .collect()
        })
        .collect();
    let paired = (1..d).all(|k| inverse_pairs(&by_k[k - 1], &by_k[d - k - 1], &c));
    checks.push(Check::new("inverse_pairs", paired, "S_{d-k} = S_k^{-1} in PGL_d(L)"));

    if args.no_closure {
        checks.push(Check::skipped("order_match", "disabled"));
    } else {
        match expected_order(d, &c.quotient.ring, c.quotient.r) {
            Ok(want) => {
                let closure = c.closure(a.cap)?;
                checks.push(Check::new(
                    "order_match",
                    closure.order() as u128 == want,
                    format!("closure {} vs expected {want}", closure.order()),
                ));
            }
            Err(e) => checks.push(Check::skipped("order_match", e.to_string())),
        }
    }

    let passed = checks.iter().all(|c| c.status != "fail");
    let v = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "verify",
        "passed": passed,
        "checks": checks
            .iter()
            .map(|c| json!({"name": c.name, "status": c.status, "detail": c.detail}))
            .collect::<Vec<_>>(),
    });
    emit(&a.out, "verify.json", &pretty(&v))?;
    if passed {
        Ok(())
    } else {
        let failed: Vec<&str> = checks
            .iter()
            .filter(|c| c.status == "fail")
            .map(|c| c.name)
            .collect();
        Err(Failure {
            code: 5,
            message: format!("failed invariants: {}", failed.join(", ")),
        })
    }
}
