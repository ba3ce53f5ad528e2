//! Exact arithmetic in F_q and its extensions F_{q^n}.
//!
//! `Fq` is the base field, built as `F_p[λ]/(modulus)`. Its elements are plain
//! `u32` codes: the coefficient vector over F_p read as base-p digits, lowest
//! degree least significant. Multiplication goes through log/exp tables.
//!
//! `ExtField` is a degree-n extension of an `Fq`, with elements stored as
//! coefficient vectors over F_q in the power basis of its modulus. The field
//! carries a Frobenius generator φ: a ↦ a^{q^ℓ} with gcd(ℓ, n) = 1.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::FqMatrix;
use crate::polyring::{Poly, PolyRing};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GaloisError {
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("element does not belong to this field: {0}")]
    SpecMismatch(String),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("modulus is not a monic irreducible polynomial of degree {0}")]
    ReducibleModulus(usize),
    #[error("frobenius exponent {ell} is not prime to the degree {n}")]
    BadFrobeniusExponent { ell: u32, n: u32 },
    #[error("field of order {0} is too large for table-based arithmetic")]
    TooLarge(u128),
}

/// Upper bound on |F_q| for which log/exp tables are built.
const MAX_BASE_ORDER: u64 = 1 << 24;

/// Description of F_q = F_p[λ]/(modulus).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub m: u32,
    /// Monic irreducible over F_p, lowest degree first.
    pub modulus: Vec<u32>,
}

#[derive(Debug)]
pub struct Fq {
    spec: FieldSpec,
    q: u32,
    /// exp[i] = g^i for a fixed primitive g, doubled in length to skip a reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

/// Distinct prime factors by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut i = 2u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            out.push(i);
            while n.is_multiple_of(i) {
                n /= i;
            }
        }
        i += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

/// Splits `q` as `p^m`.
pub fn prime_power(q: u64) -> Result<(u32, u32), GaloisError> {
    let factors = prime_factors(q);
    if factors.len() != 1 {
        return Err(GaloisError::NotPrimePower(q));
    }
    let p = factors[0];
    let mut m = 0;
    let mut r = q;
    while r > 1 {
        r /= p;
        m += 1;
    }
    Ok((p as u32, m))
}

impl Fq {
    /// The prime field F_p, presented with modulus λ.
    pub fn prime(p: u32) -> Result<Arc<Self>, GaloisError> {
        if !is_prime(u64::from(p)) {
            return Err(GaloisError::NotPrime(u64::from(p)));
        }
        Self::build(FieldSpec {
            p,
            m: 1,
            modulus: vec![0, 1],
        })
    }

    /// F_{p^m} with the lexicographically first irreducible modulus.
    pub fn new(p: u32, m: u32) -> Result<Arc<Self>, GaloisError> {
        let prime = Self::prime(p)?;
        if m == 1 {
            return Ok(prime);
        }
        let modulus = find_irreducible(&prime, m as usize);
        Self::build(FieldSpec {
            p,
            m,
            modulus: modulus.coeffs().to_vec(),
        })
    }

    /// F_q for a prime power q.
    pub fn from_order(q: u64) -> Result<Arc<Self>, GaloisError> {
        let (p, m) = prime_power(q)?;
        Self::new(p, m)
    }

    pub fn with_spec(spec: FieldSpec) -> Result<Arc<Self>, GaloisError> {
        let prime = Self::prime(spec.p)?;
        if spec.m > 1 || spec.modulus != [0, 1] {
            let ring = PolyRing::new(prime);
            let f = Poly::from_coeffs(spec.modulus.clone());
            if f.degree() != Some(spec.m as usize)
                || f.lead() != 1
                || spec.modulus.iter().any(|&c| c >= spec.p)
                || !ring.is_irreducible(&f)
            {
                return Err(GaloisError::ReducibleModulus(spec.m as usize));
            }
        }
        Self::build(spec)
    }

    fn build(spec: FieldSpec) -> Result<Arc<Self>, GaloisError> {
        let q = u64::from(spec.p).pow(spec.m);
        if q > MAX_BASE_ORDER {
            return Err(GaloisError::TooLarge(u128::from(q)));
        }
        let q = q as u32;
        let p = spec.p;
        let m = spec.m as usize;
        // Multiplication of digit vectors modulo the defining polynomial.
        let mul_slow = |a: u32, b: u32| -> u32 {
            let da = to_digits(a, p, m);
            let db = to_digits(b, p, m);
            let mut prod = vec![0u64; 2 * m];
            for (i, &x) in da.iter().enumerate() {
                for (j, &y) in db.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + u64::from(x) * u64::from(y)) % u64::from(p);
                }
            }
            for k in (m..2 * m).rev() {
                let c = prod[k];
                if c == 0 {
                    continue;
                }
                prod[k] = 0;
                for (i, &mc) in spec.modulus.iter().take(m).enumerate() {
                    let sub = c * u64::from(mc) % u64::from(p);
                    prod[k - m + i] = (prod[k - m + i] + u64::from(p) - sub) % u64::from(p);
                }
            }
            from_digits(prod[..m].iter().map(|&c| c as u32), p)
        };
        let order = q - 1;
        let factors = prime_factors(u64::from(order));
        let pow_slow = |a: u32, mut e: u64| -> u32 {
            let mut base = a;
            let mut acc = 1u32;
            while e > 0 {
                if e & 1 == 1 {
                    acc = mul_slow(acc, base);
                }
                base = mul_slow(base, base);
                e >>= 1;
            }
            acc
        };
        let generator = (1..q)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&f| pow_slow(g, u64::from(order) / f) != 1)
            })
            .expect("multiplicative group of a finite field is cyclic");
        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![0u32; q as usize];
        let mut cur = 1u32;
        for i in 0..order as usize {
            exp[i] = cur;
            exp[i + order as usize] = cur;
            log[cur as usize] = i as u32;
            cur = mul_slow(cur, generator);
        }
        Ok(Arc::new(Self { spec, q, exp, log }))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn p(&self) -> u32 {
        self.spec.p
    }

    pub fn m(&self) -> u32 {
        self.spec.m
    }

    /// Validates a code as an element of this field.
    pub fn element(&self, code: u32) -> Result<u32, GaloisError> {
        if code < self.q {
            Ok(code)
        } else {
            Err(GaloisError::SpecMismatch(format!(
                "{code} is not an element of F_{}",
                self.q
            )))
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(i64::from(self.spec.p)) as u32
    }

    pub fn digits(&self, a: u32) -> Vec<u32> {
        to_digits(a, self.spec.p, self.spec.m as usize)
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let p = self.spec.p;
        if self.spec.m == 1 {
            let s = a + b;
            if s >= p {
                s - p
            } else {
                s
            }
        } else if p == 2 {
            a ^ b
        } else {
            let (mut a, mut b) = (a, b);
            let mut out = 0;
            let mut place = 1;
            while a > 0 || b > 0 {
                out += ((a % p + b % p) % p) * place;
                a /= p;
                b /= p;
                place *= p;
            }
            out
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        let p = self.spec.p;
        if p == 2 {
            return a;
        }
        if self.spec.m == 1 {
            return if a == 0 { 0 } else { p - a };
        }
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        while a > 0 {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: u32) -> Result<u32, GaloisError> {
        if a == 0 {
            return Err(GaloisError::ZeroInverse);
        }
        let order = self.q - 1;
        Ok(self.exp[((order - self.log[a as usize]) % order) as usize])
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32, GaloisError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: u32, e: u128) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = u128::from(self.q - 1);
        let k = (u128::from(self.log[a as usize]) * (e % order)) % order;
        self.exp[k as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }
}

fn to_digits(mut a: u32, p: u32, m: usize) -> Vec<u32> {
    let mut out = vec![0; m];
    for d in out.iter_mut() {
        *d = a % p;
        a /= p;
    }
    out
}

fn from_digits(digits: impl DoubleEndedIterator<Item = u32>, p: u32) -> u32 {
    digits.rev().fold(0, |acc, d| acc * p + d)
}

/// Monic irreducible polynomial of degree `n` over `base`, first in the order
/// of the lower coefficients read as base-q digits (constant term least significant).
pub fn find_irreducible(base: &Arc<Fq>, n: usize) -> Poly {
    assert!(n >= 1, "degree must be positive");
    let ring = PolyRing::new(base.clone());
    let q = u128::from(base.q());
    let total = q.pow(n as u32);
    (0..total)
        .map(|idx| {
            let mut coeffs = Vec::with_capacity(n + 1);
            let mut rest = idx;
            for _ in 0..n {
                coeffs.push((rest % q) as u32);
                rest /= q;
            }
            coeffs.push(1);
            Poly::from_coeffs(coeffs)
        })
        .find(|f| ring.is_irreducible(f))
        .expect("irreducible polynomials exist in every degree")
}

/// Description of F_{q^n} over F_q.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExtSpec {
    pub base: FieldSpec,
    pub n: u32,
    /// Monic irreducible over F_q (codes), lowest degree first.
    pub modulus: Vec<u32>,
    pub frobenius_exp: u32,
}

/// Element of an extension: coefficients over F_q in the power basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExtElem(pub Vec<u32>);

impl ExtElem {
    pub fn coeffs(&self) -> &[u32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

#[derive(Debug)]
pub struct ExtField {
    base: Arc<Fq>,
    ring: PolyRing,
    n: usize,
    modulus: Poly,
    ell: u32,
    /// Matrix of a ↦ a^q in the power basis.
    qpow: FqMatrix,
    /// Matrix of φ: a ↦ a^{q^ℓ}.
    phi: FqMatrix,
    phi_inv: FqMatrix,
}

impl ExtField {
    /// Extension defined by the lexicographically first irreducible of degree `n`.
    pub fn new(base: Arc<Fq>, n: usize, ell: u32) -> Result<Arc<Self>, GaloisError> {
        let modulus = find_irreducible(&base, n);
        Self::with_modulus(base, modulus, ell)
    }

    pub fn with_modulus(base: Arc<Fq>, modulus: Poly, ell: u32) -> Result<Arc<Self>, GaloisError> {
        let ring = PolyRing::new(base.clone());
        let n = modulus.degree().unwrap_or(0);
        if n == 0
            || modulus.lead() != 1
            || modulus.coeffs().iter().any(|&c| c >= base.q())
            || !ring.is_irreducible(&modulus)
        {
            return Err(GaloisError::ReducibleModulus(n));
        }
        if gcd_u64(u64::from(ell), n as u64) != 1 {
            return Err(GaloisError::BadFrobeniusExponent { ell, n: n as u32 });
        }
        let mut field = Self {
            base: base.clone(),
            ring,
            n,
            modulus,
            ell,
            qpow: FqMatrix::identity(n),
            phi: FqMatrix::identity(n),
            phi_inv: FqMatrix::identity(n),
        };
        let cols: Vec<Vec<u32>> = (0..n)
            .map(|j| {
                let basis = field.monomial(j);
                field.pow(&basis, u128::from(base.q())).0
            })
            .collect();
        field.qpow = FqMatrix::from_columns(&cols);
        field.phi = field.qpow.pow(u64::from(ell), &base);
        field.phi_inv = field.phi.pow(n as u64 - 1, &base);
        Ok(Arc::new(field))
    }

    pub fn from_spec(spec: &ExtSpec) -> Result<Arc<Self>, GaloisError> {
        let base = Fq::with_spec(spec.base.clone())?;
        let modulus = Poly::from_coeffs(spec.modulus.clone());
        if modulus.degree() != Some(spec.n as usize) {
            return Err(GaloisError::ReducibleModulus(spec.n as usize));
        }
        Self::with_modulus(base, modulus, spec.frobenius_exp)
    }

    pub fn spec(&self) -> ExtSpec {
        ExtSpec {
            base: self.base.spec().clone(),
            n: self.n as u32,
            modulus: self.modulus.coeffs().to_vec(),
            frobenius_exp: self.ell,
        }
    }

    pub fn base(&self) -> &Arc<Fq> {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn frobenius_exp(&self) -> u32 {
        self.ell
    }

    /// |F_{q^n}|.
    pub fn order(&self) -> u128 {
        u128::from(self.base.q()).pow(self.n as u32)
    }

    pub fn zero(&self) -> ExtElem {
        ExtElem(vec![0; self.n])
    }

    pub fn one(&self) -> ExtElem {
        self.from_base(1)
    }

    pub fn from_base(&self, c: u32) -> ExtElem {
        let mut v = vec![0; self.n];
        v[0] = c;
        ExtElem(v)
    }

    /// The class of λ^j.
    pub fn monomial(&self, j: usize) -> ExtElem {
        let f = self.ring.rem(&Poly::monomial(1, j), &self.modulus);
        self.from_poly_reduced(&f)
    }

    /// The class of λ (the root of the modulus).
    pub fn generator(&self) -> ExtElem {
        self.monomial(1)
    }

    /// Validates a coefficient vector as an element of this field.
    pub fn element(&self, coeffs: Vec<u32>) -> Result<ExtElem, GaloisError> {
        if coeffs.len() != self.n {
            return Err(GaloisError::SpecMismatch(format!(
                "expected {} coefficients, got {}",
                self.n,
                coeffs.len()
            )));
        }
        for &c in &coeffs {
            self.base.element(c)?;
        }
        Ok(ExtElem(coeffs))
    }

    /// Checks that `a` has the shape of an element of this field.
    pub fn check(&self, a: &ExtElem) -> Result<(), GaloisError> {
        self.element(a.0.clone()).map(|_| ())
    }

    pub fn from_index(&self, mut idx: u128) -> ExtElem {
        let q = u128::from(self.base.q());
        ExtElem(
            (0..self.n)
                .map(|_| {
                    let c = (idx % q) as u32;
                    idx /= q;
                    c
                })
                .collect(),
        )
    }

    /// Inverse of `from_index`: coefficients as base-q digits, constant term least significant.
    pub fn index(&self, a: &ExtElem) -> u128 {
        let q = u128::from(self.base.q());
        a.0.iter().rev().fold(0, |acc, &c| acc * q + u128::from(c))
    }

    /// All elements in lexicographic (index) order.
    pub fn elements(&self) -> impl Iterator<Item = ExtElem> + '_ {
        (0..self.order()).map(move |i| self.from_index(i))
    }

    pub fn as_poly(&self, a: &ExtElem) -> Poly {
        Poly::from_coeffs(a.0.clone())
    }

    fn from_poly_reduced(&self, f: &Poly) -> ExtElem {
        let mut v = f.coeffs().to_vec();
        v.resize(self.n, 0);
        ExtElem(v)
    }

    pub fn from_poly(&self, f: &Poly) -> ExtElem {
        let r = self.ring.rem(f, &self.modulus);
        self.from_poly_reduced(&r)
    }

    /// Returns the base-field value when `a` lies in F_q.
    pub fn to_base(&self, a: &ExtElem) -> Option<u32> {
        if a.0[1..].iter().all(|&c| c == 0) {
            Some(a.0[0])
        } else {
            None
        }
    }

    pub fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        debug_assert_eq!(a.0.len(), self.n);
        debug_assert_eq!(b.0.len(), self.n);
        ExtElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| self.base.add(x, y))
                .collect(),
        )
    }

    pub fn sub(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        ExtElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| self.base.sub(x, y))
                .collect(),
        )
    }

    pub fn neg(&self, a: &ExtElem) -> ExtElem {
        ExtElem(a.0.iter().map(|&x| self.base.neg(x)).collect())
    }

    pub fn scale(&self, c: u32, a: &ExtElem) -> ExtElem {
        ExtElem(a.0.iter().map(|&x| self.base.mul(c, x)).collect())
    }

    pub fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        debug_assert_eq!(a.0.len(), self.n);
        debug_assert_eq!(b.0.len(), self.n);
        let prod = self.ring.mul(&self.as_poly(a), &self.as_poly(b));
        self.from_poly(&prod)
    }

    pub fn inv(&self, a: &ExtElem) -> Result<ExtElem, GaloisError> {
        if a.is_zero() {
            return Err(GaloisError::ZeroInverse);
        }
        let (g, u, _) = self.ring.ext_gcd(&self.as_poly(a), &self.modulus);
        debug_assert!(g.is_one());
        Ok(self.from_poly(&u))
    }

    pub fn div(&self, a: &ExtElem, b: &ExtElem) -> Result<ExtElem, GaloisError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &ExtElem, mut e: u128) -> ExtElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// φ^i(a) = a^{q^{ℓ i}}; negative `i` applies the inverse.
    pub fn frobenius(&self, a: &ExtElem, i: i64) -> ExtElem {
        let k = i.rem_euclid(self.n as i64) as u64;
        let mat = if k == self.n as u64 - 1 && self.n > 1 {
            self.phi_inv.clone()
        } else {
            self.phi.pow(k, &self.base)
        };
        ExtElem(mat.mul_vec(&a.0, &self.base))
    }

    /// a^{q^i} (the standard Frobenius, independent of ℓ).
    pub fn frobenius_q(&self, a: &ExtElem, i: u64) -> ExtElem {
        let mat = self.qpow.pow(i % self.n as u64, &self.base);
        ExtElem(mat.mul_vec(&a.0, &self.base))
    }

    /// The matrix of φ in the power basis.
    pub fn phi_matrix(&self) -> &FqMatrix {
        &self.phi
    }

    /// Relative trace and norm down to F_q.
    pub fn trace_and_norm(&self, a: &ExtElem) -> (u32, u32) {
        let mut tr = self.zero();
        let mut nm = self.one();
        let mut conj = a.clone();
        for _ in 0..self.n {
            tr = self.add(&tr, &conj);
            nm = self.mul(&nm, &conj);
            conj = self.frobenius(&conj, 1);
        }
        (
            self.to_base(&tr).expect("trace lies in the base field"),
            self.to_base(&nm).expect("norm lies in the base field"),
        )
    }

    pub fn trace(&self, a: &ExtElem) -> u32 {
        self.trace_and_norm(a).0
    }

    pub fn norm(&self, a: &ExtElem) -> u32 {
        self.trace_and_norm(a).1
    }

    /// Evaluates a polynomial over F_q at `a`.
    pub fn eval_poly(&self, f: &Poly, a: &ExtElem) -> ExtElem {
        f.coeffs().iter().rev().fold(self.zero(), |acc, &c| {
            self.add(&self.mul(&acc, a), &self.from_base(c))
        })
    }

    /// Minimal polynomial over F_q, by Gaussian elimination on the powers of `a`.
    pub fn min_poly(&self, a: &ExtElem) -> Poly {
        let mut powers: Vec<Vec<u32>> = vec![self.one().0];
        let mut cur = self.one();
        loop {
            cur = self.mul(&cur, a);
            let basis = FqMatrix::from_columns(&powers);
            if let Some(sol) = basis.solve(&cur.0, &self.base) {
                let mut coeffs: Vec<u32> = sol.iter().map(|&c| self.base.neg(c)).collect();
                coeffs.push(1);
                return Poly::from_coeffs(coeffs);
            }
            powers.push(cur.0.clone());
        }
    }

    /// True iff F_q(a) = F_{q^e}, where `e` must be the degree of this field.
    pub fn is_field_generator(&self, a: &ExtElem, e: usize) -> bool {
        if e != self.n {
            return false;
        }
        prime_factors(e as u64)
            .into_iter()
            .all(|p| self.frobenius_q(a, e as u64 / p) != *a)
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: &ExtElem) -> u128 {
        assert!(!a.is_zero());
        let group = self.order() - 1;
        let mut ord = group;
        for p in prime_factors(group as u64) {
            let p = u128::from(p);
            while ord.is_multiple_of(p) && self.pow(a, ord / p) == self.one() {
                ord /= p;
            }
        }
        ord
    }

    /// The first element (in index order) generating the multiplicative group.
    pub fn primitive_element(&self) -> ExtElem {
        let group = self.order() - 1;
        (1..self.order())
            .map(|i| self.from_index(i))
            .find(|a| self.multiplicative_order(a) == group)
            .expect("multiplicative group is cyclic")
    }

    /// The conjugates a, φ(a), …, φ^{n−1}(a).
    pub fn conjugates(&self, a: &ExtElem) -> Vec<ExtElem> {
        let mut out = Vec::with_capacity(self.n);
        let mut cur = a.clone();
        for _ in 0..self.n {
            out.push(cur.clone());
            cur = self.frobenius(&cur, 1);
        }
        out
    }

    pub fn is_normal_element(&self, a: &ExtElem) -> bool {
        let cols: Vec<Vec<u32>> = self.conjugates(a).into_iter().map(|c| c.0).collect();
        FqMatrix::from_columns(&cols).rank(&self.base) == self.n
    }

    /// First element in index order whose conjugates form a basis over F_q.
    pub fn normal_basis(&self) -> ExtElem {
        (1..self.order())
            .map(|i| self.from_index(i))
            .find(|a| self.is_normal_element(a))
            .expect("a normal basis always exists")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f8() -> Arc<ExtField> {
        let f2 = Fq::prime(2).unwrap();
        ExtField::new(f2, 3, 1).unwrap()
    }

    fn f16() -> Arc<ExtField> {
        let f2 = Fq::prime(2).unwrap();
        ExtField::new(f2, 4, 1).unwrap()
    }

    fn f343() -> Arc<ExtField> {
        let f7 = Fq::prime(7).unwrap();
        // α³ = 2
        ExtField::with_modulus(f7, Poly::from_coeffs(vec![5, 0, 0, 1]), 1).unwrap()
    }

    #[test]
    fn f8_products() {
        let f = f8();
        assert_eq!(f.modulus().coeffs(), &[1, 1, 0, 1]);
        let v = f.generator();
        let v2 = f.mul(&v, &v);
        assert_eq!(f.mul(&v, &v2), ExtElem(vec![1, 1, 0]));
        assert_eq!(f.inv(&f.one()).unwrap(), f.one());
        assert_eq!(f.inv(&f.zero()), Err(GaloisError::ZeroInverse));
    }

    #[test]
    fn f16_products() {
        let f = f16();
        assert_eq!(f.modulus().coeffs(), &[1, 1, 0, 0, 1]);
        let t = f.generator();
        let t3 = f.pow(&t, 3);
        assert_eq!(f.mul(&t, &t3), ExtElem(vec![1, 1, 0, 0]));
    }

    #[test]
    fn base_field_f4() {
        let f4 = Fq::new(2, 2).unwrap();
        assert_eq!(f4.q(), 4);
        for a in 1..4 {
            assert_eq!(f4.mul(a, f4.inv(a).unwrap()), 1);
            assert_eq!(f4.pow(a, 3), 1);
        }
        assert!(f4.element(4).is_err());
        let f9 = Fq::new(3, 2).unwrap();
        for a in 0..9 {
            assert_eq!(f9.add(a, f9.neg(a)), 0);
        }
    }

    #[test]
    fn frobenius_examples() {
        let f = f343();
        let alpha = f.generator();
        assert_eq!(f.frobenius(&alpha, 1), f.scale(4, &alpha));
        assert_eq!(f.frobenius(&f.one(), 2), f.one());
        let g = f8();
        let v = g.generator();
        assert_eq!(g.frobenius(&v, 1), g.mul(&v, &v));
        assert_eq!(g.frobenius(&v, 3), v);
        assert_eq!(g.frobenius(&g.frobenius(&v, 1), -1), v);
    }

    #[test]
    fn trace_examples() {
        let g = f8();
        let beta = g.add(&g.one(), &g.generator());
        assert_eq!(g.trace(&beta), 1);
        assert_eq!(g.trace(&g.zero()), 0);
        assert_eq!(g.norm(&g.one()), 1);
        let f = f343();
        let beta = f.sub(&f.generator(), &f.from_base(2));
        assert_eq!(f.trace(&beta), 1);
    }

    #[test]
    fn min_poly_examples() {
        let f = f16();
        let t = f.generator();
        let gamma = f.add(&f.pow(&t, 3), &t);
        assert_eq!(f.min_poly(&gamma).coeffs(), &[1, 1, 1, 1, 1]);
        assert_eq!(f.min_poly(&f.zero()).coeffs(), &[0, 1]);
        assert_eq!(f.min_poly(&t).coeffs(), &[1, 1, 0, 0, 1]);
    }

    #[test]
    fn generator_test_examples() {
        let f = f16();
        let t = f.generator();
        let gamma = f.add(&f.pow(&t, 3), &t);
        assert!(f.is_field_generator(&gamma, 4));
        assert!(!f.is_field_generator(&f.pow(&t, 5), 4));
        assert_eq!(f.min_poly(&f.pow(&t, 5)).coeffs(), &[1, 1, 1]);
        let f4 = ExtField::new(Fq::prime(2).unwrap(), 2, 1).unwrap();
        assert!(!f4.is_field_generator(&f4.one(), 2));
    }

    #[test]
    fn normal_basis_examples() {
        let f = f343();
        let zeta0 = ExtElem(vec![1, 1, 1]);
        assert!(f.is_normal_element(&zeta0));
        let nb = f.normal_basis();
        assert!(f.is_normal_element(&nb));
        let f4 = ExtField::new(Fq::prime(2).unwrap(), 2, 1).unwrap();
        assert!(f4.is_normal_element(&f4.generator()));
        // {1, v, v²} is a basis of F_8 but 1 is not normal.
        assert!(!f8().is_normal_element(&f8().one()));
    }

    #[test]
    fn find_irreducible_examples() {
        let f2 = Fq::prime(2).unwrap();
        assert_eq!(find_irreducible(&f2, 3).coeffs(), &[1, 1, 0, 1]);
        assert_eq!(find_irreducible(&f2, 1).coeffs(), &[0, 1]);
        assert_eq!(find_irreducible(&f2, 4).coeffs(), &[1, 1, 0, 0, 1]);
    }

    #[test]
    fn frobenius_exponent_must_be_coprime() {
        let f2 = Fq::prime(2).unwrap();
        assert!(matches!(
            ExtField::new(f2, 4, 2),
            Err(GaloisError::BadFrobeniusExponent { .. })
        ));
    }

    #[test]
    fn frobenius_with_ell() {
        let f2 = Fq::prime(2).unwrap();
        let f = ExtField::new(f2, 3, 2).unwrap();
        let v = f.generator();
        assert_eq!(f.frobenius(&v, 1), f.pow(&v, 4));
        assert_eq!(f.frobenius(&v, 3), v);
    }

    #[test]
    fn spec_mismatch_is_detected() {
        let f = f8();
        assert!(matches!(
            f.element(vec![1, 0, 0, 0]),
            Err(GaloisError::SpecMismatch(_))
        ));
        assert!(f.element(vec![2, 0, 0]).is_err());
        assert!(f.check(&f16().one()).is_err());
    }
}
