//! Choice of the ideal, the local ring L = F_q[x]/(g^s), reduction of the
//! generators into PGL_d(L), and the index r of PSL_d(L) in their image.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::cyclic_algebra::{CyclicAlgebra, LocalizedMatrix};
use crate::galois::{gcd_u64, ExtElem, ExtField};
use crate::polyring::{LocalRing, Poly, PolyError};
use crate::projgroup::{canonicalize, ProjError, ProjMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuotientError {
    #[error("no suitable α found after scanning {scanned} candidates")]
    NoSuitableAlpha { scanned: u128 },
    #[error("1+y(x) is not a unit modulo g^s")]
    NonUnitDenominator,
    #[error("unsupported parameters: {0}")]
    UnsupportedParams(String),
    #[error("extension field is not defined over the algebra's base field")]
    BaseMismatch,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Proj(#[from] ProjError),
}

#[derive(Clone, Debug, Serialize)]
pub struct QuotientParams {
    pub e: usize,
    pub s: u32,
    pub alpha: ExtElem,
    pub gamma: ExtElem,
    /// Minimal polynomial of γ.
    pub p: Poly,
    /// Minimal polynomial of α.
    pub g: Poly,
    pub r: u64,
    /// Number of α examined, including the accepted one.
    pub scanned: u128,
    #[serde(skip)]
    pub ring: Arc<LocalRing>,
}

fn check_s(d: usize, q: u32, s: u32) -> Result<(), QuotientError> {
    if s > 1 && gcd_u64(d as u64, u64::from(q)) != 1 {
        return Err(QuotientError::UnsupportedParams(format!(
            "s = {s} > 1 requires d = {d} prime to q = {q}"
        )));
    }
    Ok(())
}

/// Scans α ∈ F_{q^e} in index order for the first with γ = y(α) generating
/// F_{q^e}, γ ∉ {0, −1}, and (when given) index r equal to `target_r`.
pub fn select_alpha(
    alg: &CyclicAlgebra,
    fqe: &Arc<ExtField>,
    s: u32,
    target_r: Option<u64>,
) -> Result<QuotientParams, QuotientError> {
    if fqe.base().spec() != alg.ext().base().spec() {
        return Err(QuotientError::BaseMismatch);
    }
    let d = alg.d();
    let q = alg.q();
    check_s(d, q, s)?;
    let e = fqe.degree();
    let minus_one = fqe.neg(&fqe.one());
    let mut scanned = 0u128;
    for alpha in fqe.elements() {
        scanned += 1;
        let gamma = fqe.eval_poly(alg.y(), &alpha);
        if gamma.is_zero() || gamma == minus_one || !fqe.is_field_generator(&gamma, e) {
            continue;
        }
        let r = index_r(d, fqe, &gamma, s)?;
        if target_r.is_some_and(|t| t != r) {
            continue;
        }
        let g = fqe.min_poly(&alpha);
        let p = fqe.min_poly(&gamma);
        let ring = LocalRing::new(fqe.base().clone(), g.clone(), s)?;
        return Ok(QuotientParams {
            e,
            s,
            alpha,
            gamma,
            p,
            g,
            r,
            scanned,
            ring,
        });
    }
    Err(QuotientError::NoSuitableAlpha { scanned })
}

/// Order of a = γ/(1+γ) in L₀^×/(L₀^×)^d, via the power a^{(Q−1)/c} with
/// c = gcd(d, Q − 1).
pub fn index_r(d: usize, l0: &ExtField, gamma: &ExtElem, s: u32) -> Result<u64, QuotientError> {
    check_s(d, l0.base().q(), s)?;
    let one_plus = l0.add(&l0.one(), gamma);
    let a = l0
        .div(gamma, &one_plus)
        .map_err(|_| QuotientError::NonUnitDenominator)?;
    if a.is_zero() {
        return Err(QuotientError::UnsupportedParams("γ = 0".into()));
    }
    let big_q = l0.order();
    let c = gcd_u64(d as u64, (big_q - 1) as u64) as u128;
    let b = l0.pow(&a, (big_q - 1) / c);
    let mut r = 1u64;
    let mut cur = b.clone();
    while cur != l0.one() {
        cur = l0.mul(&cur, &b);
        r += 1;
    }
    Ok(r)
}

/// Smallest r ≥ 1 with a^r a d-th power in L^×, by listing all d-th powers.
/// Intended for small rings.
pub fn index_r_exhaustive(d: usize, ring: &LocalRing, a: u64) -> u64 {
    let powers: std::collections::HashSet<u64> = ring
        .elements()
        .filter(|&u| ring.is_unit(u))
        .map(|u| ring.pow(u, d as u128))
        .collect();
    let mut cur = a;
    let mut r = 1;
    while !powers.contains(&cur) {
        cur = ring.mul(cur, a);
        r += 1;
    }
    r
}

/// Substitutes x into L, clears the (1+y)^k denominator, and canonicalizes.
pub fn reduce_to_l(
    b: &LocalizedMatrix,
    ring: &LocalRing,
    one_plus_y: &Poly,
) -> Result<ProjMatrix, QuotientError> {
    if !ring.is_unit(ring.from_poly(one_plus_y)) {
        return Err(QuotientError::NonUnitDenominator);
    }
    let d = b.mat.size();
    let entries: Vec<u64> = b.mat.entries().iter().map(|p| ring.from_poly(p)).collect();
    Ok(canonicalize(&entries, d, ring)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclic_algebra::{BasisChoice, BetaChoice};
    use crate::example::binary_algebra;
    use crate::galois::Fq;
    use crate::polyring::{format_poly, PolyRing};
    use crate::projgroup::det;

    fn f2_ext(e: usize) -> Arc<ExtField> {
        ExtField::new(Fq::prime(2).unwrap(), e, 1).unwrap()
    }

    #[test]
    fn binary_e4() {
        let alg = binary_algebra();
        let fqe = f2_ext(4);
        let qp = select_alpha(&alg, &fqe, 1, None).unwrap();
        assert_eq!(qp.alpha, fqe.generator());
        assert_eq!(qp.gamma, ExtElem(vec![0, 1, 0, 1]));
        assert_eq!(format_poly(&qp.p, "λ"), "λ^4+λ^3+λ^2+λ+1");
        assert_eq!(format_poly(&qp.g, "λ"), "λ^4+λ+1");
        assert_eq!(qp.r, 3);
        let ring = PolyRing::new(Fq::prime(2).unwrap());
        let comp = ring.compose(&qp.p, alg.y());
        assert!(ring.rem(&comp, &qp.g).is_zero());
    }

    #[test]
    fn binary_e2_and_e1() {
        let alg = binary_algebra();
        let fqe = f2_ext(2);
        let qp = select_alpha(&alg, &fqe, 1, None).unwrap();
        let omega = fqe.generator();
        assert_eq!(qp.alpha, omega);
        assert_eq!(qp.gamma, fqe.mul(&omega, &omega));
        assert_eq!(qp.p.coeffs(), &[1, 1, 1]);
        assert_eq!(qp.g.coeffs(), &[1, 1, 1]);
        assert_eq!(qp.r, 3);
        let e1 = f2_ext(1);
        assert!(matches!(
            select_alpha(&alg, &e1, 1, None),
            Err(QuotientError::NoSuitableAlpha { scanned: 2 })
        ));
    }

    #[test]
    fn index_examples() {
        let f3 = Fq::prime(3).unwrap();
        let l0 = ExtField::new(f3, 1, 1).unwrap();
        assert_eq!(index_r(2, &l0, &l0.one(), 1), Ok(2));
        for e in 1..=4 {
            let l = f2_ext(e);
            for gamma in l.elements().skip(2) {
                if gamma == l.one() {
                    continue;
                }
                assert_eq!(index_r(2, &l, &gamma, 1), Ok(1));
            }
        }
        assert!(matches!(
            index_r(2, &f2_ext(2), &f2_ext(2).generator(), 2),
            Err(QuotientError::UnsupportedParams(_))
        ));
    }

    #[test]
    fn index_matches_exhaustive() {
        for (q, e, d, s) in [(2u32, 2usize, 3usize, 1u32), (2, 4, 3, 1), (7, 1, 3, 1), (7, 1, 3, 2), (3, 2, 2, 2), (4, 1, 3, 1)] {
            let f = Fq::from_order(u64::from(q)).unwrap();
            let l0 = ExtField::new(f.clone(), e, 1).unwrap();
            let ring = LocalRing::new(f, l0.modulus().clone(), s).unwrap();
            for gamma in l0.elements() {
                let one_plus = l0.add(&l0.one(), &gamma);
                if gamma.is_zero() || one_plus.is_zero() {
                    continue;
                }
                let a = l0.div(&gamma, &one_plus).unwrap();
                let code = ring.from_poly(&l0.as_poly(&a));
                assert_eq!(
                    index_r(d, &l0, &gamma, s).unwrap(),
                    index_r_exhaustive(d, &ring, code)
                );
            }
        }
    }

    #[test]
    fn reduced_generators_are_invertible() {
        let alg = binary_algebra();
        for e in [2, 4] {
            let fqe = f2_ext(e);
            let qp = select_alpha(&alg, &fqe, 1, None).unwrap();
            let reduced: Vec<ProjMatrix> = alg
                .generators()
                .iter()
                .map(|b| reduce_to_l(b, &qp.ring, alg.one_plus_y()).unwrap())
                .collect();
            assert_eq!(reduced.len(), 7);
            for m in &reduced {
                assert!(qp.ring.is_unit(det(m.entries(), 3, &qp.ring)));
            }
        }
        let fqe = f2_ext(2);
        let qp = select_alpha(&alg, &fqe, 1, None).unwrap();
        let id = LocalizedMatrix::identity(3);
        assert_eq!(
            reduce_to_l(&id, &qp.ring, alg.one_plus_y()).unwrap(),
            ProjMatrix::identity(3)
        );
    }

    #[test]
    fn reduced_determinants_match_index_class() {
        // det(b_u) ≡ γ/(1+γ) modulo d-th powers.
        let f = Fq::prime(7).unwrap();
        let ext = ExtField::new(f.clone(), 3, 1).unwrap();
        let alg = CyclicAlgebra::new(ext, BasisChoice::Normal, BetaChoice::Auto).unwrap();
        let l0 = ExtField::new(f, 1, 1).unwrap();
        let qp = select_alpha(&alg, &l0, 1, None).unwrap();
        let ring = &qp.ring;
        let cubes: std::collections::HashSet<u64> =
            (1..7).map(|u| ring.pow(u, 3)).collect();
        let gamma = ring.from_poly(&l0.as_poly(&qp.gamma));
        let a = ring.mul(gamma, ring.inverse(ring.add(1, gamma)).unwrap());
        for b in alg.generators() {
            let entries: Vec<u64> = b.mat.entries().iter().map(|x| ring.from_poly(x)).collect();
            let dt = det(&entries, 3, ring);
            let scale = ring.pow(ring.from_poly(alg.one_plus_y()), 3 * u128::from(b.den_pow));
            let value = ring.mul(dt, ring.inverse(scale).unwrap());
            let ratio = ring.mul(value, ring.inverse(a).unwrap());
            assert!(cubes.contains(&ratio));
        }
    }
}
