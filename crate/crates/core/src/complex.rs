//! The clique complex of the colored Cayley graph, vertex colors, and exports.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::projgroup::GroupClosure;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("coloring is inconsistent on edge {src} -> {dst} (color shift {k})")]
    InconsistentColoring { src: u32, dst: u32, k: usize },
    #[error("r must be at least 1")]
    ZeroColors,
}

#[derive(Clone, Debug)]
pub struct CayleyComplex {
    n: usize,
    d: usize,
    /// CSR adjacency of the undirected 1-skeleton, neighbors sorted.
    offsets: Vec<usize>,
    adj: Vec<u32>,
    /// cells[i] holds the (i+1)-cliques for i ≥ 1, flattened.
    cells: Vec<Vec<u32>>,
    edges: Vec<(u32, u32, usize, usize)>,
    colors: Option<Vec<u32>>,
}

/// Builds the complex with cells up to dimension `max_dim`, clamped to
/// 1 ≤ max_dim ≤ d − 1.
pub fn build_complex(closure: &GroupClosure, max_dim: usize) -> CayleyComplex {
    let n = closure.order();
    let d = closure.d();
    let max_dim = max_dim.clamp(1, (d - 1).max(1));
    let mut lists: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut edges = Vec::new();
    for e in closure.edges() {
        edges.push((e.src, e.dst, e.color, e.generator_id));
        if e.src != e.dst {
            lists[e.src as usize].push(e.dst);
            lists[e.dst as usize].push(e.src);
        }
    }
    let mut offsets = Vec::with_capacity(n + 1);
    let mut adj = Vec::new();
    offsets.push(0);
    for mut l in lists {
        l.sort_unstable();
        l.dedup();
        adj.extend(l);
        offsets.push(adj.len());
    }
    let mut cx = CayleyComplex {
        n,
        d,
        offsets,
        adj,
        cells: Vec::new(),
        edges,
        colors: None,
    };
    cx.cells = cx.enumerate_cliques(max_dim);
    cx
}

fn intersect(a: &[u32], b: &[u32]) -> Vec<u32> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

impl CayleyComplex {
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[self.offsets[v]..self.offsets[v + 1]]
    }

    fn higher_neighbors(&self, v: u32) -> &[u32] {
        let nb = self.neighbors(v as usize);
        let start = nb.partition_point(|&w| w <= v);
        &nb[start..]
    }

    /// Directed colored edges (src, dst, color, generator_id).
    pub fn colored_edges(&self) -> &[(u32, u32, usize, usize)] {
        &self.edges
    }

    pub fn max_dim(&self) -> usize {
        self.cells.len()
    }

    /// The i-cells as sorted (i+1)-tuples, for 0 ≤ i ≤ max_dim.
    pub fn cells(&self, i: usize) -> Vec<Vec<u32>> {
        match i {
            0 => (0..self.n as u32).map(|v| vec![v]).collect(),
            _ => self.cells[i - 1].chunks(i + 1).map(<[u32]>::to_vec).collect(),
        }
    }

    pub fn cell_count(&self, i: usize) -> usize {
        match i {
            0 => self.n,
            _ => self.cells[i - 1].len() / (i + 1),
        }
    }

    fn enumerate_cliques(&self, max_dim: usize) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); max_dim];
        let mut stack: Vec<u32> = Vec::new();
        for v in 0..self.n as u32 {
            stack.push(v);
            self.extend(&mut stack, self.higher_neighbors(v).to_vec(), max_dim, &mut out);
            stack.pop();
        }
        out
    }

    fn extend(&self, stack: &mut Vec<u32>, cand: Vec<u32>, max_dim: usize, out: &mut [Vec<u32>]) {
        for &w in &cand {
            stack.push(w);
            let dim = stack.len() - 1;
            out[dim - 1].extend_from_slice(stack);
            if dim < max_dim {
                let next = intersect(&cand, self.higher_neighbors(w));
                if !next.is_empty() {
                    self.extend(stack, next, max_dim, out);
                }
            }
            stack.pop();
        }
    }

    /// Whether every edge of the 1-skeleton lies in some triangle.
    pub fn every_edge_in_triangle(&self) -> bool {
        (0..self.n).all(|v| {
            self.neighbors(v)
                .iter()
                .all(|&w| !intersect(self.neighbors(v), self.neighbors(w as usize)).is_empty())
        })
    }

    pub fn set_colors(&mut self, colors: Vec<u32>) {
        assert_eq!(colors.len(), self.n);
        self.colors = Some(colors);
    }

    pub fn colors(&self) -> Option<&[u32]> {
        self.colors.as_deref()
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph cayley {\n");
        for v in 0..self.n {
            match &self.colors {
                Some(c) => writeln!(out, "  {v} [color={}];", c[v]).unwrap(),
                None => writeln!(out, "  {v};").unwrap(),
            }
        }
        for &(s, t, k, _) in &self.edges {
            writeln!(out, "  {s} -> {t} [color={k}, label={k}];").unwrap();
        }
        out.push_str("}\n");
        out
    }

    /// CSV of all i-cells for i ≥ 1: `dim,v0,v1,…`.
    pub fn cells_csv(&self) -> String {
        let mut out = String::from("dim,vertices\n");
        for i in 1..=self.max_dim() {
            for c in self.cells[i - 1].chunks(i + 1) {
                let vs: Vec<String> = c.iter().map(u32::to_string).collect();
                writeln!(out, "{i},{}", vs.join(" ")).unwrap();
            }
        }
        out
    }

    pub fn bundle(&self, meta: serde_json::Value) -> ComplexBundle {
        ComplexBundle {
            meta,
            edges: self
                .edges
                .iter()
                .map(|&(src, dst, color, generator_id)| BundleEdge {
                    src,
                    dst,
                    color,
                    generator_id,
                })
                .collect(),
            cells_by_dim: (1..=self.max_dim()).map(|i| self.cells(i)).collect(),
            colors: self.colors.clone(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct BundleEdge {
    pub src: u32,
    pub dst: u32,
    pub color: usize,
    pub generator_id: usize,
}

#[derive(Debug, Serialize)]
pub struct ComplexBundle {
    pub meta: serde_json::Value,
    pub edges: Vec<BundleEdge>,
    /// Entry i − 1 lists the i-cells.
    pub cells_by_dim: Vec<Vec<Vec<u32>>>,
    pub colors: Option<Vec<u32>>,
}

/// Colors in Z/r: 0 at the identity, head = tail + k along color-k edges.
pub fn assign_colors(closure: &GroupClosure, r: u64) -> Result<Vec<u32>, ComplexError> {
    if r == 0 {
        return Err(ComplexError::ZeroColors);
    }
    let r = r as usize;
    let n = closure.order();
    let gens = closure.generators();
    let mut color = vec![u32::MAX; n];
    color[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        for (g, generator) in gens.iter().enumerate() {
            let w = closure.target(v, g) as usize;
            let c = ((color[v] as usize + generator.k) % r) as u32;
            if color[w] == u32::MAX {
                color[w] = c;
                queue.push_back(w);
            } else if color[w] != c {
                return Err(ComplexError::InconsistentColoring {
                    src: v as u32,
                    dst: w as u32,
                    k: generator.k,
                });
            }
        }
    }
    Ok(color)
}

/// Sizes of the color classes 0, …, r − 1.
pub fn class_sizes(colors: &[u32], r: u64) -> Vec<usize> {
    let mut out = vec![0; r as usize];
    for &c in colors {
        out[c as usize] += 1;
    }
    out
}

/// Triangles by brute force over vertex triples adjacent in the edge list.
/// Quadratic in the degree per edge; meant as an independent check.
pub fn naive_triangle_count(n: usize, edges: &[(u32, u32)]) -> usize {
    let mut set = std::collections::HashSet::new();
    for &(a, b) in edges {
        if a != b {
            set.insert((a.min(b), a.max(b)));
        }
    }
    let mut nbrs = vec![Vec::new(); n];
    for &(a, b) in &set {
        nbrs[a as usize].push(b);
    }
    let mut count = 0;
    for &(a, b) in &set {
        for &c in &nbrs[b as usize] {
            if set.contains(&(a, c)) {
                count += 1;
            }
        }
    }
    count
}
