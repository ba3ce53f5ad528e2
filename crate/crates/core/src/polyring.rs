//! Polynomials over F_q, rational functions, and the local rings F_q[x]/(g^s).

use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::galois::Fq;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,
    #[error("element is not a unit of the local ring")]
    NonUnit,
    #[error("cannot parse polynomial {0:?}")]
    Parse(String),
    #[error("modulus of a local ring must be monic irreducible")]
    NotIrreducible,
    #[error("ring of order {0} exceeds the supported size")]
    TooLarge(u128),
}

/// Univariate polynomial, coefficients lowest degree first, no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Poly(Vec<u32>);

impl Poly {
    pub fn from_coeffs(mut coeffs: Vec<u32>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self(coeffs)
    }

    pub fn zero() -> Self {
        Self(Vec::new())
    }

    pub fn one() -> Self {
        Self(vec![1])
    }

    pub fn constant(c: u32) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// c·x^j.
    pub fn monomial(c: u32, j: usize) -> Self {
        let mut v = vec![0; j + 1];
        v[j] = c;
        Self::from_coeffs(v)
    }

    /// The variable x.
    pub fn x() -> Self {
        Self(vec![0, 1])
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// Leading coefficient, 0 for the zero polynomial.
    pub fn lead(&self) -> u32 {
        self.0.last().copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0 == [1]
    }
}

/// Arithmetic in F_q[x].
#[derive(Clone, Debug)]
pub struct PolyRing {
    f: Arc<Fq>,
}

impl PolyRing {
    pub fn new(f: Arc<Fq>) -> Self {
        Self { f }
    }

    pub fn field(&self) -> &Arc<Fq> {
        &self.f
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.0.len().max(b.0.len());
        Poly::from_coeffs(
            (0..n)
                .map(|i| self.f.add(a.coeff(i), b.coeff(i)))
                .collect(),
        )
    }

    pub fn neg(&self, a: &Poly) -> Poly {
        Poly(a.0.iter().map(|&c| self.f.neg(c)).collect())
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, c: u32, a: &Poly) -> Poly {
        Poly::from_coeffs(a.0.iter().map(|&x| self.f.mul(c, x)).collect())
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0u32; a.0.len() + b.0.len() - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                out[i + j] = self.f.add(out[i + j], self.f.mul(x, y));
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn pow(&self, a: &Poly, mut e: u64) -> Poly {
        let mut base = a.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn divmod(&self, a: &Poly, b: &Poly) -> Result<(Poly, Poly), PolyError> {
        let db = b.degree().ok_or(PolyError::DivisionByZeroPoly)?;
        let inv_lead = self.f.inv(b.lead()).expect("nonzero leading coefficient");
        let mut rem = a.0.clone();
        if rem.len() <= db {
            return Ok((Poly::zero(), a.clone()));
        }
        let mut quot = vec![0u32; rem.len() - db];
        for k in (db..rem.len()).rev() {
            let c = rem[k];
            if c == 0 {
                continue;
            }
            let factor = self.f.mul(c, inv_lead);
            quot[k - db] = factor;
            for (i, &bc) in b.0.iter().enumerate() {
                rem[k - db + i] = self.f.sub(rem[k - db + i], self.f.mul(factor, bc));
            }
        }
        rem.truncate(db);
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    /// Remainder; panics on a zero divisor.
    pub fn rem(&self, a: &Poly, b: &Poly) -> Poly {
        self.divmod(a, b).expect("nonzero divisor").1
    }

    pub fn monic(&self, a: &Poly) -> Poly {
        if a.is_zero() {
            return Poly::zero();
        }
        let inv = self.f.inv(a.lead()).expect("nonzero leading coefficient");
        self.scale(inv, a)
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, a: &Poly, b: &Poly) -> Poly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = self.rem(&x, &y);
            x = y;
            y = r;
        }
        self.monic(&x)
    }

    /// Returns (d, u, v) with u·a + v·b = d = gcd(a, b) monic.
    pub fn ext_gcd(&self, a: &Poly, b: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut u0, mut u1) = (Poly::one(), Poly::zero());
        let (mut v0, mut v1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = self.divmod(&r0, &r1).expect("nonzero divisor");
            let u2 = self.sub(&u0, &self.mul(&q, &u1));
            let v2 = self.sub(&v0, &self.mul(&q, &v1));
            r0 = std::mem::replace(&mut r1, r);
            u0 = std::mem::replace(&mut u1, u2);
            v0 = std::mem::replace(&mut v1, v2);
        }
        if r0.is_zero() {
            return (Poly::zero(), Poly::zero(), Poly::zero());
        }
        let inv = self.f.inv(r0.lead()).expect("nonzero leading coefficient");
        (
            self.scale(inv, &r0),
            self.scale(inv, &u0),
            self.scale(inv, &v0),
        )
    }

    /// f(h(x)).
    pub fn compose(&self, f: &Poly, h: &Poly) -> Poly {
        f.0.iter().rev().fold(Poly::zero(), |acc, &c| {
            self.add(&self.mul(&acc, h), &Poly::constant(c))
        })
    }

    pub fn eval(&self, f: &Poly, c: u32) -> u32 {
        f.0.iter()
            .rev()
            .fold(0, |acc, &k| self.f.add(self.f.mul(acc, c), k))
    }

    /// a^e mod m.
    pub fn pow_mod(&self, a: &Poly, mut e: u128, m: &Poly) -> Poly {
        let mut base = self.rem(a, m);
        let mut acc = self.rem(&Poly::one(), m);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.rem(&self.mul(&acc, &base), m);
            }
            base = self.rem(&self.mul(&base, &base), m);
            e >>= 1;
        }
        acc
    }

    /// Rabin-style test: gcd(x^{q^i} − x, f) = 1 for i ≤ n/2 and f | x^{q^n} − x.
    pub fn is_irreducible(&self, f: &Poly) -> bool {
        let Some(n) = f.degree() else {
            return false;
        };
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let q = u128::from(self.f.q());
        let x = Poly::x();
        let mut h = self.rem(&x, f);
        for i in 1..=n {
            h = self.pow_mod(&h, q, f);
            let diff = self.sub(&h, &x);
            if i <= n / 2 && !self.gcd(&diff, f).is_one() {
                return false;
            }
            if i == n {
                return self.rem(&diff, f).is_zero();
            }
        }
        unreachable!()
    }

    /// Parses `x^3+x+1`, `2x^2-x`, `λ^4+λ+1`, or a coefficient list `[1,1,0,1]`
    /// (lowest degree first). Integer coefficients are read in the prime field
    /// when q is prime, otherwise as element codes below q.
    pub fn parse(&self, text: &str) -> Result<Poly, PolyError> {
        let err = || PolyError::Parse(text.to_string());
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(err());
        }
        if t.starts_with('[') || t.chars().all(|c| c.is_ascii_digit() || c == ',' || c == '-') && t.contains(',') {
            let inner = t.trim_start_matches('[').trim_end_matches(']');
            let coeffs = inner
                .split(',')
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<i64>().map_err(|_| err()).and_then(|c| self.coeff_from_int(c).ok_or_else(err)))
                .collect::<Result<Vec<_>, _>>()?;
            return Ok(Poly::from_coeffs(coeffs));
        }
        let mut acc = Poly::zero();
        let mut chars = t.chars().peekable();
        while chars.peek().is_some() {
            let mut negative = false;
            while let Some(&c) = chars.peek() {
                match c {
                    '+' => {}
                    '-' | '−' => negative = !negative,
                    _ => break,
                }
                chars.next();
            }
            let mut digits = String::new();
            while let Some(&c) = chars.peek().filter(|c| c.is_ascii_digit()) {
                digits.push(c);
                chars.next();
            }
            if chars.peek() == Some(&'*') {
                chars.next();
            }
            let mut exponent = 0usize;
            if chars.peek().is_some_and(|c| c.is_alphabetic()) {
                chars.next();
                exponent = 1;
                if chars.peek() == Some(&'^') {
                    chars.next();
                    let mut e = String::new();
                    while let Some(&c) = chars.peek().filter(|c| c.is_ascii_digit()) {
                        e.push(c);
                        chars.next();
                    }
                    exponent = e.parse().map_err(|_| err())?;
                }
            } else if digits.is_empty() {
                return Err(err());
            }
            let coeff = if digits.is_empty() {
                1
            } else {
                let v: i64 = digits.parse().map_err(|_| err())?;
                self.coeff_from_int(v).ok_or_else(err)?
            };
            let coeff = if negative { self.f.neg(coeff) } else { coeff };
            acc = self.add(&acc, &Poly::monomial(coeff, exponent));
            if let Some(&c) = chars.peek() {
                if c != '+' && c != '-' && c != '−' {
                    return Err(err());
                }
            }
        }
        Ok(acc)
    }

    fn coeff_from_int(&self, v: i64) -> Option<u32> {
        if self.f.m() == 1 {
            Some(self.f.from_i64(v))
        } else if (0..i64::from(self.f.q())).contains(&v) {
            Some(v as u32)
        } else {
            None
        }
    }

    // Rational functions over F_q, always reduced with monic denominator.

    pub fn rational(&self, num: Poly, den: Poly) -> Result<RationalFn, PolyError> {
        if den.is_zero() {
            return Err(PolyError::DivisionByZeroPoly);
        }
        let g = self.gcd(&num, &den);
        let num = self.divmod(&num, &g)?.0;
        let den = self.divmod(&den, &g)?.0;
        let inv = self.f.inv(den.lead()).expect("nonzero");
        Ok(RationalFn {
            num: self.scale(inv, &num),
            den: self.scale(inv, &den),
        })
    }

    pub fn rat_from_poly(&self, p: Poly) -> RationalFn {
        RationalFn {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn rat_add(&self, a: &RationalFn, b: &RationalFn) -> RationalFn {
        if a.den == b.den {
            return self
                .rational(self.add(&a.num, &b.num), a.den.clone())
                .expect("nonzero denominator");
        }
        let num = self.add(&self.mul(&a.num, &b.den), &self.mul(&b.num, &a.den));
        self.rational(num, self.mul(&a.den, &b.den))
            .expect("nonzero denominator")
    }

    pub fn rat_neg(&self, a: &RationalFn) -> RationalFn {
        RationalFn {
            num: self.neg(&a.num),
            den: a.den.clone(),
        }
    }

    pub fn rat_sub(&self, a: &RationalFn, b: &RationalFn) -> RationalFn {
        self.rat_add(a, &self.rat_neg(b))
    }

    pub fn rat_mul(&self, a: &RationalFn, b: &RationalFn) -> RationalFn {
        if a.is_zero() || b.is_zero() {
            return RationalFn::zero();
        }
        self.rational(self.mul(&a.num, &b.num), self.mul(&a.den, &b.den))
            .expect("nonzero denominator")
    }

    pub fn rat_inv(&self, a: &RationalFn) -> Result<RationalFn, PolyError> {
        self.rational(a.den.clone(), a.num.clone())
    }

    pub fn rat_div(&self, a: &RationalFn, b: &RationalFn) -> Result<RationalFn, PolyError> {
        Ok(self.rat_mul(a, &self.rat_inv(b)?))
    }
}

/// Descending human-readable form such as `x^3+x+1`.
pub fn format_poly(p: &Poly, var: &str) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, &c) in p.coeffs().iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        if !out.is_empty() {
            out.push('+');
        }
        push_term(&mut out, c, i, var);
    }
    out
}

/// Ascending form such as `1+x+x^3`.
pub fn format_poly_ascending(p: &Poly, var: &str) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, &c) in p.coeffs().iter().enumerate() {
        if c == 0 {
            continue;
        }
        if !out.is_empty() {
            out.push('+');
        }
        push_term(&mut out, c, i, var);
    }
    out
}

fn push_term(out: &mut String, c: u32, i: usize, var: &str) {
    match (c, i) {
        (_, 0) => write!(out, "{c}").unwrap(),
        (1, 1) => out.push_str(var),
        (1, _) => write!(out, "{var}^{i}").unwrap(),
        (_, 1) => write!(out, "{c}{var}").unwrap(),
        _ => write!(out, "{c}{var}^{i}").unwrap(),
    }
}

/// Reduced fraction num/den with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalFn {
    num: Poly,
    den: Poly,
}

impl RationalFn {
    pub fn zero() -> Self {
        Self {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Self {
            num: Poly::one(),
            den: Poly::one(),
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }
}

/// The finite local ring L = F_q[x]/(g^s).
///
/// Elements are `u64` codes: the reduced representative's coefficients read
/// as base-q digits, constant term least significant. Small rings get full
/// addition and multiplication tables.
#[derive(Debug)]
pub struct LocalRing {
    ring: PolyRing,
    g: Poly,
    s: u32,
    modulus: Poly,
    len: usize,
    order: u64,
    tables: Option<Tables>,
}

#[derive(Debug)]
struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

/// Rings up to this order get operation tables.
const TABLE_LIMIT: u64 = 1024;
const NO_INVERSE: u32 = u32::MAX;

impl LocalRing {
    pub fn new(f: Arc<Fq>, g: Poly, s: u32) -> Result<Arc<Self>, PolyError> {
        let ring = PolyRing::new(f.clone());
        if s == 0 || g.lead() != 1 || !ring.is_irreducible(&g) {
            return Err(PolyError::NotIrreducible);
        }
        let modulus = ring.pow(&g, u64::from(s));
        let len = modulus.degree().expect("nonzero modulus");
        let order = u128::from(f.q()).pow(len as u32);
        if order > u128::from(u64::MAX >> 1) {
            return Err(PolyError::TooLarge(order));
        }
        let mut out = Self {
            ring,
            g,
            s,
            modulus,
            len,
            order: order as u64,
            tables: None,
        };
        if out.order <= TABLE_LIMIT {
            let n = out.order as usize;
            let polys: Vec<Poly> = (0..out.order).map(|c| out.to_poly(c)).collect();
            let mut add = vec![0u32; n * n];
            let mut mul = vec![0u32; n * n];
            for a in 0..n {
                for b in 0..n {
                    add[a * n + b] = out.from_poly(&out.ring.add(&polys[a], &polys[b])) as u32;
                    mul[a * n + b] = out.from_poly(&out.ring.mul(&polys[a], &polys[b])) as u32;
                }
            }
            let neg = (0..n).map(|a| out.from_poly(&out.ring.neg(&polys[a])) as u32).collect();
            let mut inv = vec![NO_INVERSE; n];
            for a in 0..n {
                if let Some(b) = (0..n).find(|&b| mul[a * n + b] == 1) {
                    inv[a] = b as u32;
                }
            }
            out.tables = Some(Tables { add, mul, neg, inv });
        }
        Ok(Arc::new(out))
    }

    pub fn poly_ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn field(&self) -> &Arc<Fq> {
        self.ring.field()
    }

    pub fn g(&self) -> &Poly {
        &self.g
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    /// |L| = q^{e·s}.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// |L₀| = q^e.
    pub fn residue_order(&self) -> u64 {
        u64::from(self.field().q()).pow(self.e() as u32)
    }

    pub fn e(&self) -> usize {
        self.g.degree().expect("nonzero")
    }

    pub fn zero(&self) -> u64 {
        0
    }

    pub fn one(&self) -> u64 {
        1
    }

    pub fn to_poly(&self, mut code: u64) -> Poly {
        let q = u64::from(self.field().q());
        let mut v = Vec::with_capacity(self.len);
        for _ in 0..self.len {
            v.push((code % q) as u32);
            code /= q;
        }
        Poly::from_coeffs(v)
    }

    /// Reduces a polynomial modulo g^s and encodes it.
    pub fn from_poly(&self, p: &Poly) -> u64 {
        let r = self.ring.rem(p, &self.modulus);
        let q = u64::from(self.field().q());
        r.coeffs()
            .iter()
            .rev()
            .fold(0, |acc, &c| acc * q + u64::from(c))
    }

    pub fn from_base(&self, c: u32) -> u64 {
        self.from_poly(&Poly::constant(c))
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        match &self.tables {
            Some(t) => u64::from(t.add[(a * self.order + b) as usize]),
            None => self.from_poly(&self.ring.add(&self.to_poly(a), &self.to_poly(b))),
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        match &self.tables {
            Some(t) => u64::from(t.neg[a as usize]),
            None => self.from_poly(&self.ring.neg(&self.to_poly(a))),
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        match &self.tables {
            Some(t) => u64::from(t.mul[(a * self.order + b) as usize]),
            None => self.from_poly(&self.ring.mul(&self.to_poly(a), &self.to_poly(b))),
        }
    }

    pub fn pow(&self, a: u64, mut e: u128) -> u64 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// True iff g does not divide the representative.
    pub fn is_unit(&self, a: u64) -> bool {
        match &self.tables {
            Some(t) => t.inv[a as usize] != NO_INVERSE,
            None => !self.ring.rem(&self.to_poly(a), &self.g).is_zero(),
        }
    }

    pub fn inverse(&self, a: u64) -> Result<u64, PolyError> {
        if let Some(t) = &self.tables {
            return match t.inv[a as usize] {
                NO_INVERSE => Err(PolyError::NonUnit),
                b => Ok(u64::from(b)),
            };
        }
        let (d, u, _) = self.ring.ext_gcd(&self.to_poly(a), &self.modulus);
        if !d.is_one() {
            return Err(PolyError::NonUnit);
        }
        Ok(self.from_poly(&u))
    }

    /// All elements, by code.
    pub fn elements(&self) -> std::ops::Range<u64> {
        0..self.order
    }
}
