//! End-to-end assembly: algebra, ideal, reduced generators S_k, and closure.

use std::sync::Arc;

use crate::cyclic_algebra::{header_sets, relations_p, BasisChoice, BetaChoice, CyclicAlgebra, HeaderSets};
use crate::galois::{ExtField, Fq};
use crate::polyring::Poly;
use crate::projgroup::{closure, order_generators, Generator, GroupClosure, ProjMatrix};
use crate::quotient::{reduce_to_l, select_alpha, QuotientError, QuotientParams};
use crate::Error;

pub const DEFAULT_CAP: usize = 2_000_000;

#[derive(Clone, Debug)]
pub struct Params {
    pub q: u64,
    pub d: usize,
    pub e: usize,
    pub s: u32,
    pub ell: u32,
    /// Modulus of F_{q^d} over F_q; the first irreducible one when absent.
    pub modulus: Option<Poly>,
    pub basis: BasisChoice,
    pub beta: BetaChoice,
    pub target_r: Option<u64>,
}

impl Params {
    pub fn new(q: u64, d: usize, e: usize, s: u32) -> Self {
        Self {
            q,
            d,
            e,
            s,
            ell: 1,
            modulus: None,
            basis: BasisChoice::Normal,
            beta: BetaChoice::Auto,
            target_r: None,
        }
    }
}

/// Builds the algebra described by `params` (e, s and target_r unused).
pub fn algebra(params: &Params) -> Result<CyclicAlgebra, Error> {
    let d = params.d;
    if d < 2 {
        return Err(Error::InvalidParams(format!("d = {d} must be at least 2")));
    }
    let f = Fq::from_order(params.q)?;
    let ext = match &params.modulus {
        Some(m) => {
            if m.degree() != Some(d) {
                return Err(Error::InvalidParams(format!("modulus must have degree {d}")));
            }
            ExtField::with_modulus(f, m.clone(), params.ell)?
        }
        None => ExtField::new(f, d, params.ell)?,
    };
    Ok(CyclicAlgebra::new(ext, params.basis.clone(), params.beta.clone())?)
}

#[derive(Debug)]
pub struct Construction {
    pub alg: CyclicAlgebra,
    pub quotient: QuotientParams,
    pub relations: Vec<Vec<usize>>,
    pub headers: HeaderSets,
    /// Reduced S_1, …, S_{d−1}, each sorted.
    pub generators: Vec<Generator>,
}

impl Construction {
    pub fn new(params: &Params) -> Result<Self, Error> {
        if params.e == 0 || params.s == 0 {
            return Err(Error::InvalidParams("e and s must be positive".into()));
        }
        let alg = algebra(params)?;
        let fqe = ExtField::new(alg.ext().base().clone(), params.e, 1)?;
        if params.beta != BetaChoice::Auto {
            return Self::with_algebra(alg, &fqe, params.s, params.target_r);
        }
        // Auto β: the first β with nonzero trace for which some α works.
        let ext = alg.ext().clone();
        let mut last = None;
        for beta in ext.elements().filter(|b| ext.trace(b) != 0) {
            let alg = CyclicAlgebra::new(
                ext.clone(),
                params.basis.clone(),
                BetaChoice::Explicit(beta),
            )?;
            match Self::with_algebra(alg, &fqe, params.s, params.target_r) {
                Err(Error::Quotient(QuotientError::NoSuitableAlpha { scanned })) => {
                    last = Some(scanned);
                }
                other => return other,
            }
        }
        Err(QuotientError::NoSuitableAlpha {
            scanned: last.unwrap_or(0),
        }
        .into())
    }

    pub fn with_algebra(
        alg: CyclicAlgebra,
        fqe: &Arc<ExtField>,
        s: u32,
        target_r: Option<u64>,
    ) -> Result<Self, Error> {
        let quotient = select_alpha(&alg, fqe, s, target_r)?;
        let relations = relations_p(&alg);
        let headers = header_sets(&alg, &relations);
        let mut sets = Vec::with_capacity(alg.d() - 1);
        for k in 1..alg.d() {
            let set = headers
                .get(k)
                .iter()
                .map(|h| reduce_to_l(&h.mat, &quotient.ring, alg.one_plus_y()))
                .collect::<Result<Vec<ProjMatrix>, _>>()?;
            sets.push(set);
        }
        let generators = order_generators(sets);
        Ok(Self {
            alg,
            quotient,
            relations,
            headers,
            generators,
        })
    }

    pub fn closure(&self, cap: usize) -> Result<GroupClosure, Error> {
        Ok(closure(
            self.quotient.ring.clone(),
            self.alg.d(),
            self.generators.clone(),
            cap,
        )?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projgroup::expected_order;

    #[test]
    fn small_closures_match_order_formula() {
        for (q, d, e, s) in [(3, 2, 1, 1), (5, 2, 1, 2), (2, 2, 3, 1), (5, 2, 1, 1), (4, 2, 1, 1)] {
            let c = Construction::new(&Params::new(q, d, e, s)).unwrap();
            let g = c.closure(DEFAULT_CAP).unwrap();
            let expect = expected_order(d, &c.quotient.ring, c.quotient.r).unwrap();
            assert_eq!(g.order() as u128, expect, "q={q} d={d} e={e} s={s}");
            if (q, s) == (3, 1) {
                assert_eq!(expect, 24);
            }
        }
    }

    #[test]
    fn small_residue_field_does_not_reach_psl() {
        // Over F_3[x]/(x−1)² the generators only produce a lift of PGL_2(F_3).
        let c = Construction::new(&Params::new(3, 2, 1, 2)).unwrap();
        let g = c.closure(DEFAULT_CAP).unwrap();
        assert_eq!(g.order(), 24);
        assert_eq!(expected_order(2, &c.quotient.ring, c.quotient.r), Ok(648));
    }

    #[test]
    fn generator_counts() {
        let c = Construction::new(&Params::new(2, 3, 2, 1)).unwrap();
        let counts: Vec<usize> = (1..3)
            .map(|k| c.generators.iter().filter(|g| g.k == k).count())
            .collect();
        assert_eq!(counts, vec![7, 7]);
        assert_eq!(c.quotient.r, 3);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(matches!(
            Construction::new(&Params::new(6, 2, 1, 1)),
            Err(Error::Galois(_))
        ));
        assert!(matches!(
            Construction::new(&Params::new(2, 1, 1, 1)),
            Err(Error::InvalidParams(_))
        ));
    }
}
