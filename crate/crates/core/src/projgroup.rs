//! Projective matrices over a finite local ring and breadth-first group closure.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::galois::gcd_u64;
use crate::polyring::LocalRing;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProjError {
    #[error("matrix is singular over the local ring")]
    SingularMatrix,
    #[error("closure exceeded the cap of {cap} elements ({reached} found)")]
    CapExceeded { cap: usize, reached: usize },
    #[error("unsupported parameters: {0}")]
    UnsupportedParams(String),
}

/// A d×d matrix over L scaled so that its first unit entry (row-major) is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ProjMatrix {
    d: usize,
    entries: Box<[u64]>,
}

impl ProjMatrix {
    pub fn identity(d: usize) -> Self {
        let mut e = vec![0u64; d * d];
        for i in 0..d {
            e[i * d + i] = 1;
        }
        Self {
            d,
            entries: e.into_boxed_slice(),
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.d + j]
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.entries.chunks(self.d).map(<[u64]>::to_vec).collect()
    }
}

/// Determinant over L by cofactor expansion.
pub fn det(entries: &[u64], d: usize, ring: &LocalRing) -> u64 {
    match d {
        0 => 1,
        1 => entries[0],
        2 => ring.sub(
            ring.mul(entries[0], entries[3]),
            ring.mul(entries[1], entries[2]),
        ),
        _ => {
            let mut acc = 0;
            for j in 0..d {
                let a = entries[j];
                if a == 0 {
                    continue;
                }
                let minor: Vec<u64> = (1..d)
                    .flat_map(|i| (0..d).filter(move |&c| c != j).map(move |c| (i, c)))
                    .map(|(i, c)| entries[i * d + c])
                    .collect();
                let term = ring.mul(a, det(&minor, d - 1, ring));
                acc = if j % 2 == 0 {
                    ring.add(acc, term)
                } else {
                    ring.sub(acc, term)
                };
            }
            acc
        }
    }
}

/// Scales by the inverse of the first unit entry; fails unless det is a unit.
pub fn canonicalize(entries: &[u64], d: usize, ring: &LocalRing) -> Result<ProjMatrix, ProjError> {
    assert_eq!(entries.len(), d * d);
    if !ring.is_unit(det(entries, d, ring)) {
        return Err(ProjError::SingularMatrix);
    }
    Ok(canonicalize_unchecked(entries, d, ring))
}

fn canonicalize_unchecked(entries: &[u64], d: usize, ring: &LocalRing) -> ProjMatrix {
    let pivot = entries
        .iter()
        .copied()
        .find(|&e| ring.is_unit(e))
        .expect("an invertible matrix has a unit entry");
    let inv = ring.inverse(pivot).expect("unit");
    ProjMatrix {
        d,
        entries: entries.iter().map(|&e| ring.mul(e, inv)).collect(),
    }
}

fn mul_raw(a: &[u64], b: &[u64], d: usize, ring: &LocalRing, out: &mut [u64]) {
    for i in 0..d {
        for j in 0..d {
            let mut acc = 0;
            for k in 0..d {
                acc = ring.add(acc, ring.mul(a[i * d + k], b[k * d + j]));
            }
            out[i * d + j] = acc;
        }
    }
}

pub fn proj_mul(a: &ProjMatrix, b: &ProjMatrix, ring: &LocalRing) -> ProjMatrix {
    let d = a.d;
    let mut out = vec![0u64; d * d];
    mul_raw(&a.entries, &b.entries, d, ring, &mut out);
    canonicalize_unchecked(&out, d, ring)
}

#[derive(Clone, Debug, Serialize)]
pub struct Generator {
    /// Color shift k: the generator comes from S_k.
    pub k: usize,
    pub mat: ProjMatrix,
}

/// The elements reached from the identity by right multiplication with the
/// generators, in breadth-first discovery order.
#[derive(Debug)]
pub struct GroupClosure {
    ring: Arc<LocalRing>,
    d: usize,
    elements: Vec<ProjMatrix>,
    index: HashMap<ProjMatrix, u32>,
    generators: Vec<Generator>,
    /// targets[v·ngen + g] = index of elements[v]·generators[g].
    targets: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub src: u32,
    pub dst: u32,
    pub color: usize,
    pub generator_id: usize,
}

/// Sorts each S_k by encoding and lists S_1 first, then S_2, and so on.
pub fn order_generators(sets: Vec<Vec<ProjMatrix>>) -> Vec<Generator> {
    let mut out = Vec::new();
    for (i, mut set) in sets.into_iter().enumerate() {
        set.sort();
        set.dedup();
        out.extend(set.into_iter().map(|mat| Generator { k: i + 1, mat }));
    }
    out
}

pub fn closure(
    ring: Arc<LocalRing>,
    d: usize,
    generators: Vec<Generator>,
    cap: usize,
) -> Result<GroupClosure, ProjError> {
    assert!(cap > 0);
    let identity = ProjMatrix::identity(d);
    let ngen = generators.len();
    let mut elements = vec![identity.clone()];
    let mut index = HashMap::from([(identity, 0u32)]);
    let mut targets: Vec<u32> = Vec::new();
    let mut scratch = vec![0u64; d * d];
    let mut head = 0;
    while head < elements.len() {
        for g in &generators {
            mul_raw(&elements[head].entries, &g.mat.entries, d, &ring, &mut scratch);
            let m = canonicalize_unchecked(&scratch, d, &ring);
            let idx = match index.get(&m) {
                Some(&i) => i,
                None => {
                    if elements.len() >= cap {
                        return Err(ProjError::CapExceeded {
                            cap,
                            reached: elements.len(),
                        });
                    }
                    let i = elements.len() as u32;
                    elements.push(m.clone());
                    index.insert(m, i);
                    i
                }
            };
            targets.push(idx);
        }
        head += 1;
    }
    debug_assert_eq!(targets.len(), elements.len() * ngen);
    Ok(GroupClosure {
        ring,
        d,
        elements,
        index,
        generators,
        targets,
    })
}

impl GroupClosure {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn ring(&self) -> &Arc<LocalRing> {
        &self.ring
    }

    pub fn elements(&self) -> &[ProjMatrix] {
        &self.elements
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn index_of(&self, m: &ProjMatrix) -> Option<u32> {
        self.index.get(m).copied()
    }

    /// Index of elements[v]·generators[g].
    pub fn target(&self, v: usize, g: usize) -> u32 {
        self.targets[v * self.generators.len() + g]
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        let ngen = self.generators.len();
        self.targets.iter().enumerate().map(move |(pos, &dst)| {
            let g = pos % ngen;
            Edge {
                src: (pos / ngen) as u32,
                dst,
                color: self.generators[g].k,
                generator_id: g,
            }
        })
    }

    /// Number of generators of each color k = 1, …, d−1.
    pub fn degree_by_color(&self) -> Vec<usize> {
        (1..self.d)
            .map(|k| self.generators.iter().filter(|g| g.k == k).count())
            .collect()
    }

    /// Index of a·b.
    pub fn multiply(&self, a: usize, b: usize) -> u32 {
        let m = proj_mul(&self.elements[a], &self.elements[b], &self.ring);
        self.index[&m]
    }

    /// Multiplicative order of an element.
    pub fn element_order(&self, a: usize) -> usize {
        let mut cur = self.elements[a].clone();
        let mut k = 1;
        while !cur.entries.iter().enumerate().all(|(i, &e)| {
            e == u64::from(i / self.d == i % self.d)
        }) {
            cur = proj_mul(&cur, &self.elements[a], &self.ring);
            k += 1;
        }
        k
    }

    /// CSV edge list with header `src,dst,color,generator_id`.
    pub fn edges_csv(&self) -> String {
        let mut out = String::from("src,dst,color,generator_id\n");
        for e in self.edges() {
            writeln!(out, "{},{},{},{}", e.src, e.dst, e.color, e.generator_id).unwrap();
        }
        out
    }
}

/// |PGL_d(F_Q)| = Q^{d(d−1)/2}·Π_{i=2}^{d}(Q^i − 1).
pub fn pgl_order(d: usize, big_q: u64) -> u128 {
    let q = u128::from(big_q);
    let mut n = q.pow((d * (d - 1) / 2) as u32);
    for i in 2..=d {
        n *= q.pow(i as u32) - 1;
    }
    n
}

/// |PSL_d(F_Q)| = |PGL_d(F_Q)|/gcd(d, Q − 1).
pub fn psl_order(d: usize, big_q: u64) -> u128 {
    pgl_order(d, big_q) / u128::from(gcd_u64(d as u64, big_q - 1))
}

/// r·|PSL_d(L)|. For s > 1 the order of SL_d(L) is |SL_d(L₀)|·Q^{(s−1)(d²−1)}
/// and the central subgroup {c : c^d = 1} is counted by enumeration.
pub fn expected_order(d: usize, ring: &LocalRing, r: u64) -> Result<u128, ProjError> {
    let big_q = ring.residue_order();
    let s = ring.s();
    if s == 1 {
        return Ok(u128::from(r) * psl_order(d, big_q));
    }
    let q = u64::from(ring.field().q());
    if gcd_u64(d as u64, q) != 1 {
        return Err(ProjError::UnsupportedParams(format!(
            "s = {s} > 1 requires d = {d} prime to q = {q}"
        )));
    }
    // |SL_d(F_Q)| and |PGL_d(F_Q)| coincide.
    let sl_residue = pgl_order(d, big_q);
    let sl = sl_residue * u128::from(big_q).pow((s - 1) * (d * d - 1) as u32);
    let roots = ring
        .elements()
        .filter(|&c| ring.pow(c, d as u128) == 1)
        .count() as u128;
    Ok(u128::from(r) * sl / roots)
}
