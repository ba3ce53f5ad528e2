//! Hecke operators A_k on a finite quotient, their joint spectrum, and the
//! Ramanujan test against the region 𝔖_d.

use std::collections::HashMap;
use std::f64::consts::PI;

use nalgebra::{Complex, DMatrix, Schur, SymmetricEigen};
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::projgroup::GroupClosure;

pub type C64 = Complex<f64>;

pub const DENSE_CAP: usize = 20_000;
pub const REFINE_TOL: f64 = 1e-9;
pub const MEMBERSHIP_TOL: f64 = 1e-6;
pub const POWER_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectraError {
    #[error("dense mode supports at most {cap} vertices, got {n}")]
    DenseCapExceeded { n: usize, cap: usize },
    #[error("Hecke operators A_{a} and A_{b} do not commute")]
    NonCommutingOperators { a: usize, b: usize },
    #[error("no operators given")]
    NoOperators,
}

/// Number of k-dimensional subspaces of F_q^d.
pub fn q_binomial(d: usize, k: usize, q: u64) -> u64 {
    if k > d {
        return 0;
    }
    let q = u128::from(q);
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= q.pow((d - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    (num / den) as u64
}

/// Ordinary binomial coefficient.
pub fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Sparse 0/1 operator; row v lists the color-k out-neighbors of v.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeOperator {
    pub k: usize,
    n: usize,
    offsets: Vec<usize>,
    cols: Vec<u32>,
}

impl HeckeOperator {
    pub fn from_rows(k: usize, rows: Vec<Vec<u32>>) -> Self {
        let n = rows.len();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        offsets.push(0);
        for mut r in rows {
            r.sort_unstable();
            cols.extend(r);
            offsets.push(cols.len());
        }
        Self { k, n, offsets, cols }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, v: usize) -> &[u32] {
        &self.cols[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn row_sums(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.row(v).len()).collect()
    }

    /// Number of diagonal entries (self-loops).
    pub fn trace(&self) -> usize {
        (0..self.n)
            .map(|v| self.row(v).iter().filter(|&&w| w as usize == v).count())
            .sum()
    }

    pub fn transpose(&self) -> Self {
        let mut rows = vec![Vec::new(); self.n];
        for v in 0..self.n {
            for &w in self.row(v) {
                rows[w as usize].push(v as u32);
            }
        }
        Self::from_rows(self.k, rows)
    }

    /// Whether the two operators have identical entries.
    pub fn same_entries(&self, other: &Self) -> bool {
        self.n == other.n && self.offsets == other.offsets && self.cols == other.cols
    }

    /// Row v of self·other as sorted (column, count) pairs.
    fn product_row(&self, other: &Self, v: usize) -> Vec<(u32, u32)> {
        let mut acc: Vec<u32> = self
            .row(v)
            .iter()
            .flat_map(|&w| other.row(w as usize).iter().copied())
            .collect();
        acc.sort_unstable();
        let mut out: Vec<(u32, u32)> = Vec::new();
        for c in acc {
            match out.last_mut() {
                Some((last, n)) if *last == c => *n += 1,
                _ => out.push((c, 1)),
            }
        }
        out
    }

    /// Exact integer test of self·other = other·self.
    pub fn commutes_with(&self, other: &Self) -> bool {
        (0..self.n).all(|v| self.product_row(other, v) == other.product_row(self, v))
    }

    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        for (v, o) in out.iter_mut().enumerate() {
            *o = self.row(v).iter().map(|&w| x[w as usize]).sum();
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for v in 0..self.n {
            for &w in self.row(v) {
                m[(v, w as usize)] += 1.0;
            }
        }
        m
    }
}

/// A_1, …, A_{d−1} from the closure's colored edges.
pub fn assemble_hecke(closure: &GroupClosure) -> Vec<HeckeOperator> {
    let n = closure.order();
    let gens = closure.generators();
    (1..closure.d())
        .map(|k| {
            let ids: Vec<usize> = (0..gens.len()).filter(|&g| gens[g].k == k).collect();
            let rows = (0..n)
                .map(|v| ids.iter().map(|&g| closure.target(v, g)).collect())
                .collect();
            HeckeOperator::from_rows(k, rows)
        })
        .collect()
}

/// Checks that all operators commute pairwise and that A_{d−k} = A_k^T.
pub fn check_operators(ops: &[HeckeOperator]) -> Result<bool, SpectraError> {
    for a in 0..ops.len() {
        for b in a + 1..ops.len() {
            if !ops[a].commutes_with(&ops[b]) {
                return Err(SpectraError::NonCommutingOperators {
                    a: ops[a].k,
                    b: ops[b].k,
                });
            }
        }
    }
    let d = ops.len() + 1;
    Ok(ops
        .iter()
        .all(|op| op.transpose().same_entries(&ops[d - op.k - 1])))
}

/// λ_k = [d choose k]_q ζ^k for each r-th root of unity ζ.
pub fn trivial_tuples(r: u64, q: u64, d: usize) -> Vec<Vec<C64>> {
    (0..r)
        .map(|j| {
            let zeta = C64::from_polar(1.0, 2.0 * PI * j as f64 / r as f64);
            (1..d)
                .map(|k| zeta.powu(k as u32) * q_binomial(d, k, q) as f64)
                .collect()
        })
        .collect()
}

/// Exact check that the color characters are eigenvectors: every color-k
/// neighbor of v has color c(v) + k mod r.
pub fn characters_are_eigenvectors(ops: &[HeckeOperator], colors: &[u32], r: u64) -> bool {
    ops.iter().all(|op| {
        (0..op.n()).all(|v| {
            let want = (u64::from(colors[v]) + op.k as u64) % r;
            op.row(v).iter().all(|&w| u64::from(colors[w as usize]) == want)
        })
    })
}

/// Membership of (λ_1, …, λ_{d−1}) in 𝔖_d: all roots of
/// t^d + Σ_k (−1)^k c_k t^{d−k}, c_k = λ_k/q^{k(d−k)/2}, c_d = 1, on |t| = 1.
pub fn sd_membership(tuple: &[C64], q: u64, d: usize, tol: f64) -> bool {
    assert_eq!(tuple.len() + 1, d);
    let mut c: Vec<C64> = tuple
        .iter()
        .enumerate()
        .map(|(i, &l)| {
            let k = i + 1;
            l / (q as f64).powf((k * (d - k)) as f64 / 2.0)
        })
        .collect();
    c.push(C64::new(1.0, 0.0));
    // Monic coefficients a_j of t^j, j < d: a_{d−k} = (−1)^k c_k.
    let mut comp = DMatrix::<C64>::zeros(d, d);
    for i in 1..d {
        comp[(i, i - 1)] = C64::new(1.0, 0.0);
    }
    for k in 1..=d {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        comp[(d - k, d - 1)] = -(c[k - 1] * sign);
    }
    let roots: Vec<C64> = Schur::new(comp)
        .eigenvalues()
        .expect("complex Schur form is triangular")
        .iter()
        .copied()
        .collect();
    // A root of multiplicity m is only found to about ε^{1/m}, but the mean
    // of the computed cluster is accurate; test cluster means instead.
    root_clusters(&roots, ROOT_MERGE)
        .iter()
        .all(|z| (z.norm() - 1.0).abs() <= tol)
}

const ROOT_MERGE: f64 = 1e-3;

fn root_clusters(roots: &[C64], radius: f64) -> Vec<C64> {
    let n = roots.len();
    let mut label: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in 0..i {
            if (roots[i] - roots[j]).norm() <= radius {
                let (a, b) = (label[i], label[j]);
                for l in label.iter_mut() {
                    if *l == a {
                        *l = b;
                    }
                }
            }
        }
    }
    let mut sums: HashMap<usize, (C64, f64)> = HashMap::new();
    for (i, &l) in label.iter().enumerate() {
        let e = sums.entry(l).or_insert((C64::new(0.0, 0.0), 0.0));
        e.0 += roots[i];
        e.1 += 1.0;
    }
    sums.into_values().map(|(s, c)| s / c).collect()
}

/// Upper bound of |λ_k| over 𝔖_d: q^{k(d−k)/2}·binom(d, k).
pub fn sd_radius(q: u64, d: usize, k: usize) -> f64 {
    (q as f64).powf((k * (d - k)) as f64 / 2.0) * binomial(d, k) as f64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Dense,
    Sparse,
}

#[derive(Clone, Debug, Serialize)]
pub struct TupleEntry {
    /// λ_1, …, λ_{d−1} as (re, im).
    pub lambda: Vec<(f64, f64)>,
    pub multiplicity: usize,
    /// Multiplicity attributed to trivial character vectors.
    pub trivial: usize,
    #[serde(rename = "in_Sd")]
    pub in_sd: bool,
    /// Set when a nontrivial eigenvector shares the value of a trivial tuple.
    pub coincides_with_trivial: bool,
    /// Largest ‖A_k v − λ_k v‖ over the eigenvectors in this group.
    pub residual: f64,
}

impl TupleEntry {
    pub fn values(&self) -> Vec<C64> {
        self.lambda.iter().map(|&(a, b)| C64::new(a, b)).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SparseEstimate {
    pub k: usize,
    /// Largest |λ_k| on the complement of the trivial characters, from the
    /// Rayleigh quotient of A_kᵀA_k; a lower estimate of the true value.
    pub radius: f64,
    pub bound: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Ramanujan,
    NotRamanujan,
    Partial,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    pub n: usize,
    pub d: usize,
    pub q: u64,
    pub r: u64,
    pub mode: Mode,
    pub tol: f64,
    pub degrees: Vec<u64>,
    pub trivial_tuples: Vec<Vec<(f64, f64)>>,
    pub tuples: Vec<TupleEntry>,
    pub sparse: Vec<SparseEstimate>,
    pub verdict: Option<Verdict>,
}

fn cpair(z: C64) -> (f64, f64) {
    (z.re, z.im)
}

struct Orbits {
    m: usize,
    reps: Vec<usize>,
    orbit: Vec<u32>,
    pos: Vec<u32>,
}

/// Orbits of ⟨c⟩ acting by left multiplication, for c of largest order.
fn cyclic_orbits(closure: &GroupClosure) -> Orbits {
    let n = closure.order();
    let (mut c, mut m) = (0, 1);
    for a in 0..n {
        let o = closure.element_order(a);
        if o > m {
            c = a;
            m = o;
        }
    }
    let mut orbit = vec![u32::MAX; n];
    let mut pos = vec![0u32; n];
    let mut reps = Vec::new();
    for x in 0..n {
        if orbit[x] != u32::MAX {
            continue;
        }
        let id = reps.len() as u32;
        reps.push(x);
        let mut cur = x;
        for j in 0..m {
            orbit[cur] = id;
            pos[cur] = j as u32;
            cur = closure.multiply(c, cur) as usize;
        }
    }
    Orbits {
        m,
        reps,
        orbit,
        pos,
    }
}

/// Block of A_k on the Fourier component t of the left ⟨c⟩-action.
fn block(op: &HeckeOperator, orb: &Orbits, t: usize) -> DMatrix<C64> {
    let nb = orb.reps.len();
    let mut b = DMatrix::<C64>::zeros(nb, nb);
    for (o, &g) in orb.reps.iter().enumerate() {
        for &w in op.row(g) {
            let w = w as usize;
            let j = (orb.pos[w] as usize * t) % orb.m;
            b[(o, orb.orbit[w] as usize)] += C64::from_polar(1.0, 2.0 * PI * j as f64 / orb.m as f64);
        }
    }
    b
}

/// Splits span(V) into joint eigenspaces of the Hermitian matrices `hs`.
fn refine(v: DMatrix<C64>, hs: &[DMatrix<C64>], tol: f64) -> Vec<DMatrix<C64>> {
    let mut spaces = vec![v];
    for h in hs {
        let mut next = Vec::new();
        for v in spaces {
            if v.ncols() == 1 {
                next.push(v);
                continue;
            }
            let hv = v.adjoint() * h * &v;
            let hv = (&hv + hv.adjoint()) * C64::new(0.5, 0.0);
            let eig = SymmetricEigen::new(hv);
            let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
            order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
            let scale = 1.0 + eig.eigenvalues.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let mut start = 0;
            while start < order.len() {
                let mut end = start + 1;
                while end < order.len()
                    && eig.eigenvalues[order[end]] - eig.eigenvalues[order[end - 1]] <= tol * scale
                {
                    end += 1;
                }
                let cols: Vec<_> = order[start..end]
                    .iter()
                    .map(|&i| eig.eigenvectors.column(i).into_owned())
                    .collect();
                next.push(&v * DMatrix::from_columns(&cols));
                start = end;
            }
        }
        spaces = next;
    }
    spaces
}

struct RawTuple {
    lambda: Vec<C64>,
    mult: usize,
    residual: f64,
}

fn dense_block_tuples(blocks: &[DMatrix<C64>], tol: f64) -> Vec<RawTuple> {
    let nb = blocks[0].nrows();
    let i = C64::new(0.0, 1.0);
    let mut hs = Vec::new();
    for b in blocks {
        hs.push(b + b.adjoint());
        hs.push((b - b.adjoint()) * i);
    }
    let spaces = refine(DMatrix::identity(nb, nb), &hs, tol);
    spaces
        .into_iter()
        .map(|v| {
            let dim = v.ncols();
            let mut residual = 0.0f64;
            let lambda = blocks
                .iter()
                .map(|b| {
                    let bv = b * &v;
                    let l = (v.adjoint() * &bv).trace() / C64::new(dim as f64, 0.0);
                    residual = residual.max((bv - &v * l).norm());
                    l
                })
                .collect();
            RawTuple {
                lambda,
                mult: dim,
                residual,
            }
        })
        .collect()
}

fn group_tuples(mut raw: Vec<RawTuple>, tol: f64) -> Vec<TupleEntry> {
    raw.sort_by(|a, b| {
        a.lambda
            .iter()
            .zip(&b.lambda)
            .map(|(x, y)| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut groups: Vec<(Vec<C64>, usize, f64)> = Vec::new();
    for t in raw {
        let close = |g: &Vec<C64>| g.iter().zip(&t.lambda).all(|(a, b)| (a - b).norm() <= tol);
        let hit = groups
            .iter_mut()
            .rev()
            .take_while(|g| g.0[0].re >= t.lambda[0].re - tol)
            .find(|g| close(&g.0));
        match hit {
            Some(g) => {
                g.1 += t.mult;
                g.2 = g.2.max(t.residual);
            }
            None => groups.push((t.lambda, t.mult, t.residual)),
        }
    }
    groups
        .into_iter()
        .map(|(l, m, res)| TupleEntry {
            lambda: l.into_iter().map(cpair).collect(),
            multiplicity: m,
            trivial: 0,
            in_sd: false,
            coincides_with_trivial: false,
            residual: res,
        })
        .collect()
}

fn base_report(ops: &[HeckeOperator], q: u64, r: u64, mode: Mode, tol: f64) -> SpectrumReport {
    let d = ops.len() + 1;
    SpectrumReport {
        n: ops[0].n(),
        d,
        q,
        r,
        mode,
        tol,
        degrees: (1..d).map(|k| q_binomial(d, k, q)).collect(),
        trivial_tuples: trivial_tuples(r, q, d)
            .into_iter()
            .map(|t| t.into_iter().map(cpair).collect())
            .collect(),
        tuples: Vec::new(),
        sparse: Vec::new(),
        verdict: None,
    }
}

/// Full joint spectrum of A_1, …, A_{d−1}. The left action of a cyclic
/// subgroup ⟨c⟩ commutes with every A_k, so each operator splits into
/// |⟨c⟩| Fourier blocks that are diagonalized separately.
pub fn dense_spectrum(
    closure: &GroupClosure,
    ops: &[HeckeOperator],
    q: u64,
    r: u64,
    tol: f64,
) -> Result<SpectrumReport, SpectraError> {
    if ops.is_empty() {
        return Err(SpectraError::NoOperators);
    }
    let n = closure.order();
    if n > DENSE_CAP {
        return Err(SpectraError::DenseCapExceeded { n, cap: DENSE_CAP });
    }
    check_operators(ops)?;
    let orb = cyclic_orbits(closure);
    let mut raw = Vec::new();
    for t in 0..orb.m {
        let blocks: Vec<_> = ops.iter().map(|op| block(op, &orb, t)).collect();
        raw.extend(dense_block_tuples(&blocks, REFINE_TOL));
    }
    let mut report = base_report(ops, q, r, Mode::Dense, tol);
    report.tuples = group_tuples(raw, tol);
    Ok(report)
}

/// Power iteration on A_kᵀA_k restricted to functions with zero mean on
/// every color class, which is the orthogonal complement of the trivial
/// characters.
pub fn sparse_radius(
    op: &HeckeOperator,
    colors: &[u32],
    r: u64,
    max_iter: usize,
    seed: u64,
) -> (f64, usize, bool) {
    let n = op.n();
    let t = op.transpose();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
    let mut counts = vec![0usize; r as usize];
    for &c in colors {
        counts[c as usize] += 1;
    }
    let deflate = |x: &mut [f64]| {
        let mut sums = vec![0.0; r as usize];
        for (v, &c) in colors.iter().enumerate() {
            sums[c as usize] += x[v];
        }
        for (v, &c) in colors.iter().enumerate() {
            x[v] -= sums[c as usize] / counts[c as usize] as f64;
        }
        let norm = x.iter().map(|a| a * a).sum::<f64>().sqrt();
        for a in x.iter_mut() {
            *a /= norm;
        }
    };
    deflate(&mut x);
    let mut y = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut prev = 0.0;
    for it in 1..=max_iter {
        op.apply(&x, &mut y);
        t.apply(&y, &mut z);
        let rq: f64 = x.iter().zip(&z).map(|(a, b)| a * b).sum();
        std::mem::swap(&mut x, &mut z);
        deflate(&mut x);
        if it > 1 && (rq - prev).abs() <= POWER_TOL * rq.abs() {
            return (rq.max(0.0).sqrt(), it, true);
        }
        prev = rq;
    }
    (prev.max(0.0).sqrt(), max_iter, false)
}

/// Nontrivial spectral radius estimates of every A_k.
pub fn sparse_spectrum(
    ops: &[HeckeOperator],
    colors: &[u32],
    q: u64,
    r: u64,
    tol: f64,
    max_iter: usize,
) -> Result<SpectrumReport, SpectraError> {
    if ops.is_empty() {
        return Err(SpectraError::NoOperators);
    }
    let d = ops.len() + 1;
    let mut report = base_report(ops, q, r, Mode::Sparse, tol);
    let mut cache: HashMap<usize, (f64, usize, bool)> = HashMap::new();
    for op in ops {
        // A_{d−k} = A_kᵀ has the same singular values.
        let key = op.k.min(d - op.k);
        let (radius, iterations, converged) = *cache
            .entry(key)
            .or_insert_with(|| sparse_radius(&ops[key - 1], colors, r, max_iter, 0x5eed));
        report.sparse.push(SparseEstimate {
            k: op.k,
            radius,
            bound: sd_radius(q, d, op.k),
            iterations,
            converged,
        });
    }
    Ok(report)
}

/// Marks trivial tuples (matched once per character), tests the rest for
/// membership in 𝔖_d, and sets the verdict. Sparse reports are PARTIAL when
/// every radius estimate is within `tol` of the 𝔖_d bound.
pub fn ramanujan_verdict(report: &mut SpectrumReport) -> Verdict {
    let (q, d, tol) = (report.q, report.d, report.tol);
    let verdict = match report.mode {
        Mode::Sparse => {
            if report.sparse.iter().all(|s| s.radius <= s.bound + tol) {
                Verdict::Partial
            } else {
                Verdict::NotRamanujan
            }
        }
        Mode::Dense => {
            for triv in trivial_tuples(report.r, q, d) {
                if let Some(t) = report.tuples.iter_mut().find(|t| {
                    t.trivial < t.multiplicity
                        && t.values().iter().zip(&triv).all(|(a, b)| (a - b).norm() <= tol)
                }) {
                    t.trivial += 1;
                }
            }
            let mut ok = true;
            for t in &mut report.tuples {
                t.coincides_with_trivial = t.trivial > 0 && t.trivial < t.multiplicity;
                t.in_sd = sd_membership(&t.values(), q, d, tol);
                if t.trivial < t.multiplicity && !t.in_sd {
                    ok = false;
                }
            }
            if ok {
                Verdict::Ramanujan
            } else {
                Verdict::NotRamanujan
            }
        }
    };
    report.verdict = Some(verdict);
    verdict
}

/// Nontrivial tuples of a dense report.
pub fn nontrivial(report: &SpectrumReport) -> impl Iterator<Item = &TupleEntry> {
    report.tuples.iter().filter(|t| t.trivial < t.multiplicity)
}

/// Random point of the torus |z_i| = 1, Π z_i = 1, mapped to 𝔖_d.
pub fn torus_tuple(z: &[C64], q: u64) -> Vec<C64> {
    let d = z.len();
    // Elementary symmetric polynomials via the product Π (1 + z_i t).
    let mut e = vec![C64::new(0.0, 0.0); d + 1];
    e[0] = C64::new(1.0, 0.0);
    for &zi in z {
        for k in (1..=d).rev() {
            e[k] = e[k] + e[k - 1] * zi;
        }
    }
    (1..d)
        .map(|k| e[k] * (q as f64).powf((k * (d - k)) as f64 / 2.0))
        .collect()
}
