//! Elements of the algebra over F_q(y) and the conjugation representation.
//!
//! An element is stored by its d² coordinates over F_q(y) in the basis
//! ζ_i·z^j, coordinate index j·d + i.

use serde::{Deserialize, Serialize};

use super::{AlgebraError, CyclicAlgebra};
use crate::galois::ExtElem;
use crate::linalg::FqMatrix;
use crate::polyring::{Poly, RationalFn};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraElement {
    coords: Vec<RationalFn>,
}

impl AlgebraElement {
    pub fn coords(&self) -> &[RationalFn] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(RationalFn::is_zero)
    }

    fn block(&self, j: usize, d: usize) -> &[RationalFn] {
        &self.coords[j * d..(j + 1) * d]
    }

    /// Indices j whose z^j-coefficient is nonzero.
    fn support(&self, d: usize) -> Vec<usize> {
        (0..d)
            .filter(|&j| self.block(j, d).iter().any(|c| !c.is_zero()))
            .collect()
    }
}

/// An invertible element carried with its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unit {
    pub elem: AlgebraElement,
    pub inv: AlgebraElement,
}

/// d²×d² matrix over F_q(y), row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjMatrix {
    n: usize,
    entries: Vec<RationalFn>,
}

impl ConjMatrix {
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &RationalFn {
        &self.entries[i * self.n + j]
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                let e = self.get(i, j);
                if i == j {
                    e.is_one()
                } else {
                    e.is_zero()
                }
            })
        })
    }

    pub fn mul(&self, other: &Self, alg: &CyclicAlgebra) -> Self {
        let r = alg.ring();
        let n = self.n;
        let mut entries = vec![RationalFn::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    entries[i * n + j] = r.rat_add(&entries[i * n + j], &r.rat_mul(a, b));
                }
            }
        }
        Self { n, entries }
    }

    /// Writes the matrix as A + (1/y)·B with A, B over F_q, if it has that shape.
    pub fn split_laurent(&self) -> Option<(FqMatrix, FqMatrix)> {
        let mut a = FqMatrix::zeros(self.n, self.n);
        let mut b = FqMatrix::zeros(self.n, self.n);
        let y = Poly::x();
        for i in 0..self.n {
            for j in 0..self.n {
                let e = self.get(i, j);
                if e.den().is_one() {
                    if e.num().degree().unwrap_or(0) > 0 {
                        return None;
                    }
                    a.set(i, j, e.num().coeff(0));
                } else if *e.den() == y && e.num().degree().unwrap_or(0) <= 1 {
                    a.set(i, j, e.num().coeff(1));
                    b.set(i, j, e.num().coeff(0));
                } else {
                    return None;
                }
            }
        }
        Some((a, b))
    }

    /// True iff every entry is a polynomial in 1/y.
    pub fn entries_in_inverse_y(&self) -> bool {
        self.entries.iter().all(|e| {
            let den = e.den();
            let k = den.degree().unwrap_or(0);
            *den == Poly::monomial(1, k) && e.num().degree().unwrap_or(0) <= k
        })
    }
}

/// 1+y as a polynomial in the central variable y.
fn one_plus_var() -> Poly {
    Poly::from_coeffs(vec![1, 1])
}

impl CyclicAlgebra {
    pub fn elem_zero(&self) -> AlgebraElement {
        AlgebraElement {
            coords: vec![RationalFn::zero(); self.d * self.d],
        }
    }

    /// c·z^j for c ∈ F_{q^d}.
    pub fn elem_monomial(&self, c: &ExtElem, j: usize) -> AlgebraElement {
        let mut out = self.elem_zero();
        for (i, k) in self.coords(c).into_iter().enumerate() {
            out.coords[j * self.d + i] = self.ring.rat_from_poly(Poly::constant(k));
        }
        out
    }

    pub fn elem_one(&self) -> AlgebraElement {
        self.elem_monomial(&self.ext.one(), 0)
    }

    pub fn elem_z(&self) -> AlgebraElement {
        self.elem_monomial(&self.ext.one(), 1)
    }

    /// The basis vector ζ_i·z^j.
    pub fn elem_basis(&self, i: usize, j: usize) -> AlgebraElement {
        let mut out = self.elem_zero();
        out.coords[j * self.d + i] = RationalFn::one();
        out
    }

    pub fn elem_add(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .map(|(x, y)| self.ring.rat_add(x, y))
                .collect(),
        }
    }

    pub fn elem_sub(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .map(|(x, y)| self.ring.rat_sub(x, y))
                .collect(),
        }
    }

    /// Multiplication by a central scalar from F_q(y).
    pub fn elem_scale(&self, s: &RationalFn, a: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            coords: a.coords.iter().map(|x| self.ring.rat_mul(s, x)).collect(),
        }
    }

    pub fn elem_mul(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        let d = self.d;
        let r = &self.ring;
        let one_plus_y = r.rat_from_poly(one_plus_var());
        let mut out = self.elem_zero();
        for j in 0..d {
            for ia in 0..d {
                let ca = &a.coords[j * d + ia];
                if ca.is_zero() {
                    continue;
                }
                for k in 0..d {
                    let (target, wrap) = if j + k >= d { (j + k - d, true) } else { (j + k, false) };
                    for ib in 0..d {
                        let cb = &b.coords[k * d + ib];
                        if cb.is_zero() {
                            continue;
                        }
                        let mut prod = r.rat_mul(ca, cb);
                        if wrap {
                            prod = r.rat_mul(&prod, &one_plus_y);
                        }
                        for (ic, &s) in self.structure(j, ia, ib).iter().enumerate() {
                            if s == 0 {
                                continue;
                            }
                            let term = r.rat_mul(&prod, &r.rat_from_poly(Poly::constant(s)));
                            let slot = &mut out.coords[target * d + ic];
                            *slot = r.rat_add(slot, &term);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn elem_pow(&self, a: &AlgebraElement, e: u32) -> AlgebraElement {
        (0..e).fold(self.elem_one(), |acc, _| self.elem_mul(&acc, a))
    }

    /// The scalar s when a = s·1.
    fn as_scalar(&self, a: &AlgebraElement) -> Option<RationalFn> {
        let one = self.elem_one();
        let pivot = one.coords.iter().position(|c| !c.is_zero())?;
        let s = self.ring.rat_div(&a.coords[pivot], &one.coords[pivot]).ok()?;
        (self.elem_scale(&s, &one) == *a).then_some(s)
    }

    /// Inverse of a monomial c·z^j (c ∈ F_{q^d}(y)) or of 1 + w with w a
    /// monomial whose d-th power is central.
    pub fn elem_inverse(&self, a: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        let d = self.d;
        let support = a.support(d);
        match support.as_slice() {
            [j] => self.monomial_inverse(a, *j),
            [0, _] => {
                let one = self.elem_one();
                if a.block(0, d) != one.block(0, d) {
                    return Err(AlgebraError::NotInvertible);
                }
                // (1 + w)⁻¹ = Σ_{m<d} (−w)^m / (1 − (−w)^d).
                let neg_w = self.elem_sub(&one, a);
                let s = self
                    .as_scalar(&self.elem_pow(&neg_w, d as u32))
                    .ok_or(AlgebraError::NotInvertible)?;
                let denom = self.ring.rat_sub(&RationalFn::one(), &s);
                let denom_inv = self
                    .ring
                    .rat_inv(&denom)
                    .map_err(|_| AlgebraError::NotInvertible)?;
                let mut sum = self.elem_zero();
                let mut pw = one;
                for _ in 0..d {
                    sum = self.elem_add(&sum, &pw);
                    pw = self.elem_mul(&pw, &neg_w);
                }
                Ok(self.elem_scale(&denom_inv, &sum))
            }
            _ => Err(AlgebraError::NotInvertible),
        }
    }

    fn monomial_inverse(
        &self,
        a: &AlgebraElement,
        j: usize,
    ) -> Result<AlgebraElement, AlgebraError> {
        let d = self.d;
        let mut c = self.elem_zero();
        c.coords[..d].clone_from_slice(a.block(j, d));
        // c⁻¹ = Π_{t≥1} φ^t(c) / N(c).
        let mut others = self.elem_one();
        let mut conj = c.clone();
        for _ in 1..d {
            conj = self.elem_phi(&conj);
            others = self.elem_mul(&others, &conj);
        }
        let norm = self
            .as_scalar(&self.elem_mul(&c, &others))
            .ok_or(AlgebraError::NotInvertible)?;
        let norm_inv = self
            .ring
            .rat_inv(&norm)
            .map_err(|_| AlgebraError::NotInvertible)?;
        let c_inv = self.elem_scale(&norm_inv, &others);
        if j == 0 {
            return Ok(c_inv);
        }
        // (c·z^j)⁻¹ = z^{d−j}·c⁻¹/(1+y).
        let zpow = self.elem_monomial(&self.ext.one(), d - j);
        let inv_one_plus_y = self
            .ring
            .rational(Poly::one(), one_plus_var())
            .expect("nonzero");
        Ok(self.elem_scale(&inv_one_plus_y, &self.elem_mul(&zpow, &c_inv)))
    }

    /// φ applied to an element of F_{q^d}(y) (the z⁰ block).
    fn elem_phi(&self, a: &AlgebraElement) -> AlgebraElement {
        let d = self.d;
        let mut out = self.elem_zero();
        for i in 0..d {
            for k in 0..d {
                let m = self.phi.get(k, i);
                if m == 0 || a.coords[i].is_zero() {
                    continue;
                }
                let term = self
                    .ring
                    .rat_mul(&a.coords[i], &self.ring.rat_from_poly(Poly::constant(m)));
                out.coords[k] = self.ring.rat_add(&out.coords[k], &term);
            }
        }
        out
    }

    pub fn unit(&self, a: AlgebraElement) -> Result<Unit, AlgebraError> {
        let inv = self.elem_inverse(&a)?;
        debug_assert_eq!(self.elem_mul(&a, &inv), self.elem_one());
        Ok(Unit { elem: a, inv })
    }

    pub fn unit_mul(&self, a: &Unit, b: &Unit) -> Unit {
        Unit {
            elem: self.elem_mul(&a.elem, &b.elem),
            inv: self.elem_mul(&b.inv, &a.inv),
        }
    }

    /// b_u = u(1 − z⁻¹)u⁻¹ as an element of the algebra.
    pub fn b_unit(&self, u: &ExtElem) -> Result<Unit, AlgebraError> {
        self.ext.check(u)?;
        if u.is_zero() {
            return Err(AlgebraError::ZeroU);
        }
        let uu = self.unit(self.elem_monomial(u, 0))?;
        let z = self.unit(self.elem_z())?;
        let b = self.unit(self.elem_sub(&self.elem_one(), &z.inv))?;
        let conj = self.elem_mul(&self.elem_mul(&uu.elem, &b.elem), &uu.inv);
        self.unit(conj)
    }

    /// Matrix of x ↦ a·x·a⁻¹ on the basis ζ_i·z^j; column j·d + i is the image of ζ_i·z^j.
    pub fn conj_rep(&self, a: &Unit) -> ConjMatrix {
        let n = self.d * self.d;
        let mut entries = vec![RationalFn::zero(); n * n];
        for j in 0..self.d {
            for i in 0..self.d {
                let col = j * self.d + i;
                let image = self.elem_mul(&self.elem_mul(&a.elem, &self.elem_basis(i, j)), &a.inv);
                for (row, c) in image.coords.into_iter().enumerate() {
                    entries[row * n + col] = c;
                }
            }
        }
        ConjMatrix { n, entries }
    }
}
