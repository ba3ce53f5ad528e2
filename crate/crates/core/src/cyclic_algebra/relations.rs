//! Relations of length d among the generators, the header sets S_k, and the
//! pair-exchange rewriting search.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use super::{CyclicAlgebra, LocalizedMatrix, PolyMatrix};

/// All d-tuples of generator indices whose product is a scalar, sorted.
///
/// For each prefix of length d − 1 the only possible last letter is the
/// generator proportional to the adjugate of the prefix product.
pub fn relations_p(alg: &CyclicAlgebra) -> Vec<Vec<usize>> {
    let r = alg.ring();
    let d = alg.d();
    let gens = alg.generators();
    let n = gens.len();
    let lookup: HashMap<PolyMatrix, usize> = gens
        .iter()
        .enumerate()
        .map(|(i, g)| (g.projective_key(r), i))
        .collect();
    let mut out = Vec::new();
    let mut prefix = vec![0usize; d - 1];
    loop {
        let prod = prefix
            .iter()
            .fold(PolyMatrix::identity(d), |acc, &i| acc.mul(&gens[i].mat, r));
        let want = prod.adjugate(r).primitive(r);
        if let Some(&last) = lookup.get(&want) {
            let mut t = prefix.clone();
            t.push(last);
            out.push(t);
        }
        // Odometer over prefixes, last position fastest.
        let mut pos = d - 1;
        loop {
            if pos == 0 {
                out.sort();
                return out;
            }
            pos -= 1;
            prefix[pos] += 1;
            if prefix[pos] < n {
                break;
            }
            prefix[pos] = 0;
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HeaderElem {
    /// Generator indices whose product gives this element.
    pub word: Vec<usize>,
    pub mat: LocalizedMatrix,
}

/// S_1, …, S_{d−1}: distinct classes of length-k prefix products.
#[derive(Clone, Debug, Serialize)]
pub struct HeaderSets {
    pub sets: Vec<Vec<HeaderElem>>,
}

impl HeaderSets {
    /// S_k for 1 ≤ k ≤ d − 1.
    pub fn get(&self, k: usize) -> &[HeaderElem] {
        &self.sets[k - 1]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.sets.iter().map(Vec::len).collect()
    }
}

pub fn header_sets(alg: &CyclicAlgebra, p: &[Vec<usize>]) -> HeaderSets {
    let r = alg.ring();
    let d = alg.d();
    let gens = alg.generators();
    let mut sets = Vec::with_capacity(d.saturating_sub(1));
    for k in 1..d {
        let mut seen: HashMap<PolyMatrix, ()> = HashMap::new();
        let mut set = Vec::new();
        for tuple in p {
            let word = tuple[..k].to_vec();
            let mat = word
                .iter()
                .fold(LocalizedMatrix::identity(d), |acc, &i| acc.mul(&gens[i], r));
            if seen.insert(mat.projective_key(r), ()).is_none() {
                set.push(HeaderElem { word, mat });
            }
        }
        sets.push(set);
    }
    HeaderSets { sets }
}

#[derive(Clone, Debug, Serialize)]
pub struct RewriteReport {
    pub start: Vec<usize>,
    pub total: usize,
    pub reached: usize,
    /// Largest number of rewrites needed to reach a tuple from `start`.
    pub depth: usize,
    /// Number of nontrivial two-letter relations b_a b_b = b_c b_e.
    pub pair_relations: usize,
}

/// Breadth-first search over P from its first tuple, where one step replaces
/// two adjacent letters ab by cd whenever b_a b_b = b_c b_d projectively.
pub fn rewrite_search(alg: &CyclicAlgebra, p: &[Vec<usize>]) -> RewriteReport {
    let r = alg.ring();
    let gens = alg.generators();
    let n = gens.len();
    let mut classes: HashMap<PolyMatrix, Vec<(usize, usize)>> = HashMap::new();
    for a in 0..n {
        for b in 0..n {
            let key = gens[a].mul(&gens[b], r).projective_key(r);
            classes.entry(key).or_default().push((a, b));
        }
    }
    let mut class_of = vec![0usize; n * n];
    let mut members: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut keys: Vec<_> = classes.into_iter().collect();
    keys.sort_by(|x, y| x.1.cmp(&y.1));
    for (id, (_, list)) in keys.into_iter().enumerate() {
        for &(a, b) in &list {
            class_of[a * n + b] = id;
        }
        members.push(list);
    }
    let pair_relations = members
        .iter()
        .map(|m| m.len() * (m.len() - 1) / 2)
        .sum();
    let in_p: HashMap<&[usize], ()> = p.iter().map(|t| (t.as_slice(), ())).collect();
    let Some(start) = p.first().cloned() else {
        return RewriteReport {
            start: Vec::new(),
            total: 0,
            reached: 0,
            depth: 0,
            pair_relations,
        };
    };
    let mut dist: HashMap<Vec<usize>, usize> = HashMap::from([(start.clone(), 0)]);
    let mut queue = VecDeque::from([start.clone()]);
    let mut depth = 0;
    while let Some(word) = queue.pop_front() {
        let dw = dist[&word];
        depth = depth.max(dw);
        for i in 0..word.len() - 1 {
            let class = class_of[word[i] * n + word[i + 1]];
            for &(a, b) in &members[class] {
                let mut next = word.clone();
                next[i] = a;
                next[i + 1] = b;
                if !dist.contains_key(&next) {
                    debug_assert!(in_p.contains_key(next.as_slice()));
                    dist.insert(next.clone(), dw + 1);
                    queue.push_back(next);
                }
            }
        }
    }
    RewriteReport {
        start,
        total: p.len(),
        reached: dist.keys().filter(|w| in_p.contains_key(w.as_slice())).count(),
        depth,
        pair_relations,
    }
}
