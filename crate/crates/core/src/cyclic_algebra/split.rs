//! Square matrices over F_q[x] and their localizations at 1+y(x).

use serde::{Deserialize, Serialize};

use crate::linalg::FqMatrix;
use crate::polyring::{format_poly_ascending, Poly, PolyRing, RationalFn};

/// Square matrix over F_q[x], row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PolyMatrix {
    n: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            entries: vec![Poly::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, Poly::one())
    }

    pub fn scalar(n: usize, c: Poly) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.entries[i * n + i] = c.clone();
        }
        m
    }

    pub fn from_entries(n: usize, entries: Vec<Poly>) -> Self {
        assert_eq!(entries.len(), n * n);
        Self { n, entries }
    }

    pub fn from_constant(m: &FqMatrix) -> Self {
        assert_eq!(m.rows(), m.cols());
        let n = m.rows();
        Self {
            n,
            entries: (0..n * n)
                .map(|k| Poly::constant(m.get(k / n, k % n)))
                .collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.entries[i * self.n + j] = p;
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<Poly>> {
        self.entries.chunks(self.n).map(<[Poly]>::to_vec).collect()
    }

    pub fn add(&self, other: &Self, r: &PolyRing) -> Self {
        Self {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| r.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self, r: &PolyRing) -> Self {
        Self {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| r.sub(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Poly, r: &PolyRing) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().map(|a| r.mul(a, c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self, r: &PolyRing) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Poly::zero();
                for k in 0..n {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    acc = r.add(&acc, &r.mul(a, other.get(k, j)));
                }
                out.entries[i * n + j] = acc;
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64, r: &PolyRing) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, r);
            }
            base = base.mul(&base, r);
            e >>= 1;
        }
        acc
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self, r: &PolyRing) -> Poly {
        let n = self.n;
        if n == 0 {
            return Poly::one();
        }
        let mut m = self.entries.clone();
        let mut prev = Poly::one();
        let mut negate = false;
        for k in 0..n - 1 {
            if m[k * n + k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[i * n + k].is_zero()) else {
                    return Poly::zero();
                };
                for j in 0..n {
                    m.swap(k * n + j, p * n + j);
                }
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = r.sub(
                        &r.mul(&m[k * n + k], &m[i * n + j]),
                        &r.mul(&m[i * n + k], &m[k * n + j]),
                    );
                    m[i * n + j] = r.divmod(&num, &prev).expect("nonzero pivot").0;
                }
            }
            prev = m[k * n + k].clone();
        }
        let det = m[n * n - 1].clone();
        if negate {
            r.neg(&det)
        } else {
            det
        }
    }

    /// Classical adjugate, so that `self · adj = det · I`.
    pub fn adjugate(&self, r: &PolyRing) -> Self {
        let n = self.n;
        if n == 1 {
            return Self::identity(1);
        }
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let minor = Self {
                    n: n - 1,
                    entries: (0..n)
                        .filter(|&a| a != i)
                        .flat_map(|a| {
                            (0..n)
                                .filter(|&b| b != j)
                                .map(move |b| (a, b))
                        })
                        .map(|(a, b)| self.get(a, b).clone())
                        .collect(),
                };
                let c = minor.det(r);
                out.entries[j * n + i] = if (i + j) % 2 == 1 { r.neg(&c) } else { c };
            }
        }
        out
    }

    /// Divides out the content and makes the first nonzero entry monic, giving
    /// one representative per class modulo F_q(x)^× scalars.
    pub fn primitive(&self, r: &PolyRing) -> Self {
        let content = self
            .entries
            .iter()
            .fold(Poly::zero(), |acc, e| r.gcd(&acc, e));
        if content.is_zero() {
            return self.clone();
        }
        let mut entries: Vec<Poly> = self
            .entries
            .iter()
            .map(|e| r.divmod(e, &content).expect("nonzero").0)
            .collect();
        let lead = entries
            .iter()
            .find(|e| !e.is_zero())
            .map(Poly::lead)
            .expect("nonzero matrix");
        let inv = r.field().inv(lead).expect("nonzero");
        for e in &mut entries {
            *e = r.scale(inv, e);
        }
        Self { n: self.n, entries }
    }

    pub fn is_scalar(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| {
            (0..n).all(|j| {
                if i == j {
                    self.get(i, i) == self.get(0, 0)
                } else {
                    self.get(i, j).is_zero()
                }
            })
        })
    }

    pub fn is_identity(&self) -> bool {
        self.is_scalar() && self.get(0, 0).is_one()
    }

    /// Rows of ascending-form entries joined by `" | "`.
    pub fn render(&self, var: &str) -> Vec<String> {
        self.entries
            .chunks(self.n)
            .map(|row| {
                row.iter()
                    .map(|p| format_poly_ascending(p, var))
                    .collect::<Vec<_>>()
                    .join(" | ")
            })
            .collect()
    }
}

/// The matrix `mat / (1+y(x))^den_pow` over the localization F_q[x, 1/(1+y)].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LocalizedMatrix {
    pub mat: PolyMatrix,
    pub den_pow: u32,
}

impl LocalizedMatrix {
    pub fn new(mat: PolyMatrix, den_pow: u32) -> Self {
        Self { mat, den_pow }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(PolyMatrix::identity(n), 0)
    }

    pub fn mul(&self, other: &Self, r: &PolyRing) -> Self {
        Self {
            mat: self.mat.mul(&other.mat, r),
            den_pow: self.den_pow + other.den_pow,
        }
    }

    /// Exact equality as matrices over F_q(x), by cross-multiplication.
    pub fn equals(&self, other: &Self, one_plus_y: &Poly, r: &PolyRing) -> bool {
        let (a, b) = if self.den_pow >= other.den_pow {
            let k = self.den_pow - other.den_pow;
            (
                self.mat.clone(),
                other.mat.scale(&r.pow(one_plus_y, u64::from(k)), r),
            )
        } else {
            let k = other.den_pow - self.den_pow;
            (
                self.mat.scale(&r.pow(one_plus_y, u64::from(k)), r),
                other.mat.clone(),
            )
        };
        a == b
    }

    /// Canonical representative of the class modulo scalars.
    pub fn projective_key(&self, r: &PolyRing) -> PolyMatrix {
        self.mat.primitive(r)
    }

    pub fn is_scalar(&self) -> bool {
        self.mat.is_scalar()
    }

    /// The determinant as a reduced rational function of x.
    pub fn det(&self, one_plus_y: &Poly, r: &PolyRing) -> RationalFn {
        let n = self.mat.size() as u64;
        let den = r.pow(one_plus_y, u64::from(self.den_pow) * n);
        r.rational(self.mat.det(r), den).expect("1+y is nonzero")
    }

    /// Value `c` when this matrix equals `c·I` exactly.
    pub fn scalar_value(&self, one_plus_y: &Poly, r: &PolyRing) -> Option<RationalFn> {
        if !self.mat.is_scalar() {
            return None;
        }
        Some(
            r.rational(
                self.mat.get(0, 0).clone(),
                r.pow(one_plus_y, u64::from(self.den_pow)),
            )
            .expect("1+y is nonzero"),
        )
    }
}
