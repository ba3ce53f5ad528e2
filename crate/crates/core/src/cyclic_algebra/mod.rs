//! The cyclic algebra generated by F_{q^d} and z with z·c = φ(c)·z and
//! z^d = 1+y, its generators b_u = u(1 − z⁻¹)u⁻¹, and the explicit splitting
//! over F_q[x, 1/(1+y(x))].

mod element;
mod relations;
mod split;

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use element::{AlgebraElement, ConjMatrix, Unit};
pub use relations::{header_sets, relations_p, rewrite_search, HeaderElem, HeaderSets, RewriteReport};
pub use split::{LocalizedMatrix, PolyMatrix};

use crate::galois::{ExtElem, ExtField, GaloisError};
use crate::linalg::FqMatrix;
use crate::polyring::{Poly, PolyRing};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("trace of β is zero")]
    TraceZero,
    #[error("u must be nonzero")]
    ZeroU,
    #[error("element has no implemented inverse")]
    NotInvertible,
    #[error("norm of r is not 1")]
    NormNotOne,
    #[error("pair completion is not defined for d = 2; use b_(r)⁻¹ = b_(−r)")]
    DegenerateD2,
    #[error("d = {d} is not a power of the characteristic {p}")]
    NotCharPower { d: usize, p: u32 },
    #[error("basis elements are linearly dependent over F_q")]
    DependentBasis,
    #[error("r and s define the same generator")]
    SamePair,
    #[error(transparent)]
    Galois(#[from] GaloisError),
}

/// How the F_q-basis ζ_0,…,ζ_{d−1} of F_{q^d} is chosen.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BasisChoice {
    /// Conjugates of the first normal element.
    Normal,
    /// 1, v, …, v^{d−1} for the root v of the modulus.
    Power,
    /// Conjugates ζ, φ(ζ), … of a given element.
    NormalFrom(ExtElem),
    Explicit(Vec<ExtElem>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BetaChoice {
    /// First element in index order with nonzero trace.
    Auto,
    Explicit(ExtElem),
}

/// Coefficients t_1,…,t_d of Norm(1+βx) = 1 + t_1x + ⋯ + t_dx^d.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormForm {
    pub t: Vec<u32>,
}

impl NormForm {
    /// y(x) = t_1x + ⋯ + t_dx^d.
    pub fn y(&self) -> Poly {
        let mut v = vec![0];
        v.extend_from_slice(&self.t);
        Poly::from_coeffs(v)
    }
}

/// Coefficients of Π_{i<n}(1 + φ^i(β)λ) − 1.
pub fn norm_form(ext: &ExtField, beta: &ExtElem) -> Result<NormForm, AlgebraError> {
    ext.check(beta)?;
    if ext.trace(beta) == 0 {
        return Err(AlgebraError::TraceZero);
    }
    let mut prod: Vec<ExtElem> = vec![ext.one()];
    for c in ext.conjugates(beta) {
        let mut next = vec![ext.zero(); prod.len() + 1];
        for (i, a) in prod.iter().enumerate() {
            next[i] = ext.add(&next[i], a);
            next[i + 1] = ext.add(&next[i + 1], &ext.mul(a, &c));
        }
        prod = next;
    }
    let t = prod[1..]
        .iter()
        .map(|c| ext.to_base(c).expect("norm form has coefficients in F_q"))
        .collect();
    Ok(NormForm { t })
}

/// The algebra together with a chosen basis, β, and the resulting splitting.
#[derive(Debug)]
pub struct CyclicAlgebra {
    ext: Arc<ExtField>,
    ring: PolyRing,
    d: usize,
    basis: Vec<ExtElem>,
    /// Inverse of the matrix whose columns are the ζ_i in the power basis.
    to_basis: FqMatrix,
    beta: ExtElem,
    norm_form: NormForm,
    y: Poly,
    one_plus_y: Poly,
    phi: FqMatrix,
    z: PolyMatrix,
    reps: Vec<ExtElem>,
    /// Coordinates of ζ_a·φ^j(ζ_b), indexed [(j·d + a)·d + b].
    structure: Vec<Vec<u32>>,
}

impl CyclicAlgebra {
    pub fn new(
        ext: Arc<ExtField>,
        basis: BasisChoice,
        beta: BetaChoice,
    ) -> Result<Self, AlgebraError> {
        let d = ext.degree();
        let f = ext.base().clone();
        let basis = match basis {
            BasisChoice::Normal => ext.conjugates(&ext.normal_basis()),
            BasisChoice::Power => (0..d).map(|j| ext.monomial(j)).collect(),
            BasisChoice::NormalFrom(z0) => {
                ext.check(&z0)?;
                ext.conjugates(&z0)
            }
            BasisChoice::Explicit(v) => {
                for b in &v {
                    ext.check(b)?;
                }
                v
            }
        };
        if basis.len() != d {
            return Err(AlgebraError::DependentBasis);
        }
        let cols: Vec<Vec<u32>> = basis.iter().map(|b| b.0.clone()).collect();
        let to_basis = FqMatrix::from_columns(&cols)
            .inverse(&f)
            .ok_or(AlgebraError::DependentBasis)?;
        let beta = match beta {
            BetaChoice::Auto => ext
                .elements()
                .find(|b| ext.trace(b) != 0)
                .ok_or(AlgebraError::TraceZero)?,
            BetaChoice::Explicit(b) => b,
        };
        let norm_form = norm_form(&ext, &beta)?;
        let ring = PolyRing::new(f.clone());
        let y = norm_form.y();
        let one_plus_y = ring.add(&y, &Poly::one());
        let reps = coset_representatives(&ext);
        let mut alg = Self {
            ext,
            ring,
            d,
            basis,
            to_basis,
            beta,
            norm_form,
            y,
            one_plus_y,
            phi: FqMatrix::identity(d),
            z: PolyMatrix::identity(d),
            reps,
            structure: Vec::new(),
        };
        let phi_cols: Vec<Vec<u32>> = alg
            .basis
            .iter()
            .map(|b| alg.coords(&alg.ext.frobenius(b, 1)))
            .collect();
        alg.phi = FqMatrix::from_columns(&phi_cols);
        let rho_beta_phi = alg.rho(&alg.beta).mul(&alg.phi, &f);
        let mut z = PolyMatrix::zeros(d);
        for i in 0..d {
            for j in 0..d {
                z.set(
                    i,
                    j,
                    Poly::from_coeffs(vec![alg.phi.get(i, j), rho_beta_phi.get(i, j)]),
                );
            }
        }
        alg.z = z;
        let mut structure = Vec::with_capacity(d * d * d);
        for j in 0..d {
            for a in 0..d {
                for b in 0..d {
                    let prod = alg.ext.mul(
                        &alg.basis[a],
                        &alg.ext.frobenius(&alg.basis[b], j as i64),
                    );
                    structure.push(alg.coords(&prod));
                }
            }
        }
        alg.structure = structure;
        Ok(alg)
    }

    pub fn ext(&self) -> &Arc<ExtField> {
        &self.ext
    }

    /// Polynomial ring F_q[x] (also used for F_q[y]).
    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn q(&self) -> u32 {
        self.ext.base().q()
    }

    pub fn basis(&self) -> &[ExtElem] {
        &self.basis
    }

    pub fn beta(&self) -> &ExtElem {
        &self.beta
    }

    pub fn norm_form(&self) -> &NormForm {
        &self.norm_form
    }

    /// y(x).
    pub fn y(&self) -> &Poly {
        &self.y
    }

    pub fn one_plus_y(&self) -> &Poly {
        &self.one_plus_y
    }

    /// Coordinates of an element of F_{q^d} in the chosen basis.
    pub fn coords(&self, a: &ExtElem) -> Vec<u32> {
        self.to_basis.mul_vec(&a.0, self.ext.base())
    }

    pub fn from_coords(&self, c: &[u32]) -> ExtElem {
        self.basis
            .iter()
            .zip(c)
            .fold(self.ext.zero(), |acc, (b, &k)| {
                self.ext.add(&acc, &self.ext.scale(k, b))
            })
    }

    /// Matrix of multiplication by `c` in the chosen basis.
    pub fn rho(&self, c: &ExtElem) -> FqMatrix {
        let cols: Vec<Vec<u32>> = self
            .basis
            .iter()
            .map(|b| self.coords(&self.ext.mul(c, b)))
            .collect();
        FqMatrix::from_columns(&cols)
    }

    /// Matrix of φ in the chosen basis.
    pub fn phi_matrix(&self) -> &FqMatrix {
        &self.phi
    }

    /// Image of z: (I + ρ(β)x)·Φ.
    pub fn z_matrix(&self) -> LocalizedMatrix {
        LocalizedMatrix::new(self.z.clone(), 0)
    }

    /// Image of z⁻¹ = z^{d−1}/(1+y).
    pub fn z_inverse_matrix(&self) -> LocalizedMatrix {
        LocalizedMatrix::new(self.z.pow(self.d as u64 - 1, &self.ring), 1)
    }

    /// Image of b = 1 − z⁻¹.
    pub fn b_matrix_one(&self) -> LocalizedMatrix {
        let zi = self.z.pow(self.d as u64 - 1, &self.ring);
        let num = PolyMatrix::scalar(self.d, self.one_plus_y.clone()).sub(&zi, &self.ring);
        LocalizedMatrix::new(num, 1)
    }

    /// Image of b_u = ρ(u)·b·ρ(u)⁻¹.
    pub fn b_matrix(&self, u: &ExtElem) -> Result<LocalizedMatrix, AlgebraError> {
        self.ext.check(u)?;
        if u.is_zero() {
            return Err(AlgebraError::ZeroU);
        }
        let f = self.ext.base();
        let ru = self.rho(u);
        let ru_inv = ru.inverse(f).expect("ρ(u) is invertible for u ≠ 0");
        let b = self.b_matrix_one();
        let mat = PolyMatrix::from_constant(&ru)
            .mul(&b.mat, &self.ring)
            .mul(&PolyMatrix::from_constant(&ru_inv), &self.ring);
        Ok(LocalizedMatrix::new(mat, 1))
    }

    /// Image of b_(r) = 1 − r·z⁻¹.
    pub fn b_r_matrix(&self, r: &ExtElem) -> Result<LocalizedMatrix, AlgebraError> {
        self.ext.check(r)?;
        let zi = self.z.pow(self.d as u64 - 1, &self.ring);
        let rz = PolyMatrix::from_constant(&self.rho(r)).mul(&zi, &self.ring);
        let num = PolyMatrix::scalar(self.d, self.one_plus_y.clone()).sub(&rz, &self.ring);
        Ok(LocalizedMatrix::new(num, 1))
    }

    /// Coset representatives u_i = w^i of F_{q^d}^×/F_q^× for the first
    /// primitive element w, i < (q^d − 1)/(q − 1).
    pub fn coset_reps(&self) -> &[ExtElem] {
        &self.reps
    }

    /// The generator images b_{u_i}, in representative order.
    pub fn generators(&self) -> Vec<LocalizedMatrix> {
        self.reps
            .iter()
            .map(|u| self.b_matrix(u).expect("representatives are nonzero"))
            .collect()
    }

    /// Index of the representative in the F_q^×-coset of `u`.
    pub fn coset_index(&self, u: &ExtElem) -> Option<usize> {
        if u.is_zero() {
            return None;
        }
        let f = self.ext.base();
        (1..f.q()).find_map(|c| {
            let scaled = self.ext.scale(c, u);
            self.reps.iter().position(|r| *r == scaled)
        })
    }

    /// r = u/φ⁻¹(u), so that u·z⁻¹·u⁻¹ = r·z⁻¹ and b_u = b_(r).
    pub fn u_to_r(&self, u: &ExtElem) -> Result<ExtElem, AlgebraError> {
        self.ext.check(u)?;
        if u.is_zero() {
            return Err(AlgebraError::ZeroU);
        }
        Ok(self.ext.div(u, &self.ext.frobenius(u, -1))?)
    }

    /// The representative u with u_to_r(u) = r.
    pub fn r_to_u(&self, r: &ExtElem) -> Result<ExtElem, AlgebraError> {
        self.ext.check(r)?;
        if r.is_zero() || self.ext.norm(r) != 1 {
            return Err(AlgebraError::NormNotOne);
        }
        Ok(self
            .reps
            .iter()
            .find(|u| self.u_to_r(u).as_ref() == Ok(r))
            .expect("every norm-one element is u/φ⁻¹(u) for some u")
            .clone())
    }

    /// Given b_(r) ≠ b_(s), the unique (r′, s′) with b_(r)b_(r′) = b_(s)b_(s′):
    /// r′ = c·φ(s), s′ = c·φ(r) for c = (s − r)/(φ(s) − φ(r)).
    pub fn pair_completion(
        &self,
        r: &ExtElem,
        s: &ExtElem,
    ) -> Result<(ExtElem, ExtElem), AlgebraError> {
        if self.d == 2 {
            return Err(AlgebraError::DegenerateD2);
        }
        for a in [r, s] {
            self.ext.check(a)?;
            if a.is_zero() || self.ext.norm(a) != 1 {
                return Err(AlgebraError::NormNotOne);
            }
        }
        if r == s {
            return Err(AlgebraError::SamePair);
        }
        let e = &self.ext;
        let c = e.div(
            &e.sub(s, r),
            &e.sub(&e.frobenius(s, 1), &e.frobenius(r, 1)),
        )?;
        Ok((e.mul(&c, &e.frobenius(s, 1)), e.mul(&c, &e.frobenius(r, 1))))
    }

    /// For d = 2: b_(r)⁻¹ = b_(−r) projectively.
    pub fn inverse_rule_d2(&self, r: &ExtElem) -> ExtElem {
        self.ext.neg(r)
    }

    /// Whether b^d equals the scalar y/(1+y); requires d to be a power of p.
    pub fn reld_check(&self) -> Result<bool, AlgebraError> {
        let p = self.ext.base().p();
        let mut d = self.d;
        while d.is_multiple_of(p as usize) {
            d /= p as usize;
        }
        if d != 1 || self.d == 1 {
            return Err(AlgebraError::NotCharPower { d: self.d, p });
        }
        let b = self.b_matrix_one();
        let power = LocalizedMatrix::new(b.mat.pow(self.d as u64, &self.ring), self.d as u32);
        let expected = self.ring.rational(self.y.clone(), self.one_plus_y.clone()).expect("nonzero");
        Ok(power.scalar_value(&self.one_plus_y, &self.ring) == Some(expected))
    }

    /// ζ_a·φ^j(ζ_b) in coordinates.
    fn structure(&self, j: usize, a: usize, b: usize) -> &[u32] {
        &self.structure[(j * self.d + a) * self.d + b]
    }
}

fn coset_representatives(ext: &ExtField) -> Vec<ExtElem> {
    let q = u128::from(ext.base().q());
    let count = (ext.order() - 1) / (q - 1);
    let w = ext.primitive_element();
    let mut reps = Vec::with_capacity(count as usize);
    let mut cur = ext.one();
    for _ in 0..count {
        reps.push(cur.clone());
        cur = ext.mul(&cur, &w);
    }
    reps
}

#[cfg(test)]
mod tests;
