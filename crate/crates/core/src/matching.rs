//! Maximum-weight matching in general graphs with possibly negative edge
//! weights, plus a brute-force oracle.
//!
//! The solver drops non-positive edges, runs an O(n^3) primal-dual blossom
//! algorithm for the optimal weight, then fixes edges in ascending order so
//! the returned edge set is the lexicographically smallest optimum.

use crate::graph::{Graph, Vertex};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// Graph plus signed 64-bit edge weights.
#[derive(Clone, Debug)]
pub struct EdgeWeightedGraph {
    base: Graph,
    weights: BTreeMap<(Vertex, Vertex), i64>,
}

/// Set of pairwise endpoint-disjoint edges, each stored as (u, v), u < v.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Matching {
    pub edges: BTreeSet<(Vertex, Vertex)>,
}

#[derive(Error, Debug)]
pub enum MatchingError {
    #[error("brute-force cap exceeded: {0} edges > 24")]
    CapExceeded(usize),
}

impl EdgeWeightedGraph {
    pub fn new(base: Graph) -> Self {
        EdgeWeightedGraph {
            base,
            weights: BTreeMap::new(),
        }
    }

    pub fn from_weighted_edges(n: usize, edges: &[(Vertex, Vertex, i64)]) -> Self {
        let mut g = EdgeWeightedGraph::new(Graph::new(n));
        for &(u, v, w) in edges {
            g.set_weight(u, v, w);
        }
        g
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn set_weight(&mut self, u: Vertex, v: Vertex, w: i64) {
        if !self.base.has_edge(u, v) {
            self.base.add_edge(u, v);
        }
        self.weights.insert((u.min(v), u.max(v)), w);
    }

    pub fn weight(&self, u: Vertex, v: Vertex) -> i64 {
        *self
            .weights
            .get(&(u.min(v), u.max(v)))
            .expect("edge has no weight")
    }

    /// Edges (u, v, w) with u < v, ascending.
    pub fn weighted_edges(&self) -> Vec<(Vertex, Vertex, i64)> {
        self.weights.iter().map(|(&(u, v), &w)| (u, v, w)).collect()
    }
}

impl Matching {
    pub fn weight(&self, g: &EdgeWeightedGraph) -> i64 {
        self.edges.iter().map(|&(u, v)| g.weight(u, v)).sum()
    }

    pub fn is_valid(&self) -> bool {
        let mut seen = BTreeSet::new();
        for &(u, v) in &self.edges {
            if u == v || !seen.insert(u) || !seen.insert(v) {
                return false;
            }
        }
        true
    }

    pub fn covers(&self, v: Vertex) -> bool {
        self.edges.iter().any(|&(a, b)| a == v || b == v)
    }

    /// Sorted edge list for lexicographic comparison.
    fn key(&self) -> Vec<(Vertex, Vertex)> {
        self.edges.iter().copied().collect()
    }
}

/// Matching maximizing total weight (not cardinality); ties broken by the
/// lexicographically smallest edge set. Never contains a negative edge.
pub fn max_weight_matching(g: &EdgeWeightedGraph) -> Matching {
    let all = g.weighted_edges();
    let target = blossom_optimal_weight(g.n(), &all);
    // Fix edges greedily in ascending order: keep edge e iff some optimal
    // matching contains every fixed edge plus e and no discarded edge.
    let mut fixed: Vec<(Vertex, Vertex)> = Vec::new();
    let mut fixed_weight = 0i64;
    let mut live: Vec<(Vertex, Vertex, i64)> = all.clone();
    while !live.is_empty() {
        if fixed_weight == target {
            // The fixed set is itself optimal; any extension (zero-weight
            // edges) would be lexicographically larger.
            break;
        }
        let (u, v, w) = live[0];
        let rest: Vec<(Vertex, Vertex, i64)> = live
            .iter()
            .copied()
            .filter(|&(a, b, _)| a != u && a != v && b != u && b != v)
            .collect();
        if fixed_weight + w + blossom_optimal_weight(g.n(), &rest) == target {
            fixed.push((u, v));
            fixed_weight += w;
            live = rest;
        } else {
            live.remove(0);
        }
    }
    let m = Matching {
        edges: fixed.into_iter().collect(),
    };
    debug_assert!(m.is_valid());
    debug_assert_eq!(m.weight(g), target);
    debug_assert!(m.edges.iter().all(|&(u, v)| g.weight(u, v) >= 0));
    m
}

/// Exhaustive enumeration of all matchings; same tie-break rule.
pub fn brute_force_matching(g: &EdgeWeightedGraph) -> Result<Matching, MatchingError> {
    let edges = g.weighted_edges();
    if edges.len() > 24 {
        return Err(MatchingError::CapExceeded(edges.len()));
    }
    let mut best = Matching::default();
    let mut best_w = 0i64;
    for mask in 0u32..(1u32 << edges.len()) {
        let mut used: BTreeSet<Vertex> = BTreeSet::new();
        let mut ok = true;
        let mut w = 0i64;
        let mut m = Matching::default();
        for (i, &(u, v, ew)) in edges.iter().enumerate() {
            if mask >> i & 1 == 1 {
                if !used.insert(u) || !used.insert(v) {
                    ok = false;
                    break;
                }
                w += ew;
                m.edges.insert((u, v));
            }
        }
        if ok && (w > best_w || (w == best_w && m.key() < best.key())) {
            best = m;
            best_w = w;
        }
    }
    Ok(best)
}

/// Optimal matching weight over the positive-weight edges.
fn blossom_optimal_weight(n: usize, edges: &[(Vertex, Vertex, i64)]) -> i64 {
    let pos: Vec<(Vertex, Vertex, i64)> = edges.iter().copied().filter(|e| e.2 > 0).collect();
    if pos.is_empty() {
        return 0;
    }
    let mate = blossom::solve(n, &pos);
    let mut total = 0i64;
    for &(u, v, w) in &pos {
        if mate[u] == v {
            total += w;
        }
    }
    total
}

/// Primal-dual blossom algorithm for maximum-weight matching, following the
/// classic O(n^3) formulation. Returns mate[v] (usize::MAX = unmatched).
mod blossom {
    use super::Vertex;

    pub const NONE: usize = usize::MAX;

    struct Solver {
        nv: usize,
        edges: Vec<(usize, usize, i64)>,
        endpoint: Vec<usize>,
        neighbend: Vec<Vec<usize>>,
        mate: Vec<usize>,
        label: Vec<u8>,
        labelend: Vec<usize>,
        inblossom: Vec<usize>,
        blossomparent: Vec<usize>,
        blossomchilds: Vec<Vec<usize>>,
        blossombase: Vec<usize>,
        blossomendps: Vec<Vec<usize>>,
        bestedge: Vec<usize>,
        blossombestedges: Vec<Vec<usize>>,
        unusedblossoms: Vec<usize>,
        dualvar: Vec<i64>,
        allowedge: Vec<bool>,
        queue: Vec<usize>,
    }

    pub fn solve(n: usize, edges: &[(Vertex, Vertex, i64)]) -> Vec<usize> {
        if edges.is_empty() {
            return vec![NONE; n];
        }
        let nv = n;
        let ne = edges.len();
        let maxweight = edges.iter().map(|e| e.2).max().unwrap().max(0);
        let mut s = Solver {
            nv,
            edges: edges.to_vec(),
            endpoint: (0..2 * ne)
                .map(|p| if p % 2 == 0 { edges[p / 2].0 } else { edges[p / 2].1 })
                .collect(),
            neighbend: vec![vec![]; nv],
            mate: vec![NONE; nv],
            label: vec![0; 2 * nv],
            labelend: vec![NONE; 2 * nv],
            inblossom: (0..nv).collect(),
            blossomparent: vec![NONE; 2 * nv],
            blossomchilds: vec![vec![]; 2 * nv],
            blossombase: (0..nv).chain(std::iter::repeat(NONE).take(nv)).collect(),
            blossomendps: vec![vec![]; 2 * nv],
            bestedge: vec![NONE; 2 * nv],
            blossombestedges: vec![vec![]; 2 * nv],
            unusedblossoms: (nv..2 * nv).collect(),
            dualvar: std::iter::repeat(maxweight)
                .take(nv)
                .chain(std::iter::repeat(0).take(nv))
                .collect(),
            allowedge: vec![false; ne],
            queue: vec![],
        };
        for (k, &(i, j, _)) in edges.iter().enumerate() {
            s.neighbend[i].push(2 * k + 1);
            s.neighbend[j].push(2 * k);
        }
        s.run();
        s.mate
            .iter()
            .map(|&p| if p == NONE { NONE } else { s.endpoint[p] })
            .collect()
    }

    impl Solver {
        fn slack(&self, k: usize) -> i64 {
            let (i, j, wt) = self.edges[k];
            self.dualvar[i] + self.dualvar[j] - 2 * wt
        }

        fn blossom_leaves(&self, b: usize) -> Vec<usize> {
            let mut out = vec![];
            if b < self.nv {
                out.push(b);
            } else {
                for &t in &self.blossomchilds[b] {
                    if t < self.nv {
                        out.push(t);
                    } else {
                        out.extend(self.blossom_leaves(t));
                    }
                }
            }
            out
        }

        fn assign_label(&mut self, w: usize, t: u8, p: usize) {
            let b = self.inblossom[w];
            assert!(self.label[w] == 0 && self.label[b] == 0);
            self.label[w] = t;
            self.label[b] = t;
            self.labelend[w] = p;
            self.labelend[b] = p;
            self.bestedge[w] = NONE;
            self.bestedge[b] = NONE;
            if t == 1 {
                let leaves = self.blossom_leaves(b);
                self.queue.extend(leaves);
            } else if t == 2 {
                let base = self.blossombase[b];
                assert!(self.mate[base] != NONE);
                let mbase = self.mate[base];
                let ep = self.endpoint[mbase];
                self.assign_label(ep, 1, mbase ^ 1);
            }
        }

        fn scan_blossom(&mut self, v: usize, w: usize) -> usize {
            let mut path = vec![];
            let mut base = NONE;
            let (mut v, mut w) = (v, w);
            while v != NONE || w != NONE {
                let mut b = self.inblossom[v];
                if self.label[b] & 4 != 0 {
                    base = self.blossombase[b];
                    break;
                }
                assert!(self.label[b] == 1);
                path.push(b);
                self.label[b] = 5;
                assert!(self.labelend[b] == self.mate[self.blossombase[b]]);
                if self.labelend[b] == NONE {
                    v = NONE;
                } else {
                    v = self.endpoint[self.labelend[b]];
                    b = self.inblossom[v];
                    assert!(self.label[b] == 2);
                    assert!(self.labelend[b] != NONE);
                    v = self.endpoint[self.labelend[b]];
                }
                if w != NONE {
                    std::mem::swap(&mut v, &mut w);
                }
            }
            for b in path {
                self.label[b] = 1;
            }
            base
        }

        fn add_blossom(&mut self, base: usize, k: usize) {
            let (mut v, mut w, _) = self.edges[k];
            let bb = self.inblossom[base];
            let mut bv = self.inblossom[v];
            let mut bw = self.inblossom[w];
            let b = self.unusedblossoms.pop().unwrap();
            self.blossombase[b] = base;
            self.blossomparent[b] = NONE;
            self.blossomparent[bb] = b;
            self.blossomchilds[b] = vec![];
            self.blossomendps[b] = vec![];
            while bv != bb {
                self.blossomparent[bv] = b;
                self.blossomchilds[b].push(bv);
                self.blossomendps[b].push(self.labelend[bv]);
                assert!(self.labelend[bv] != NONE);
                v = self.endpoint[self.labelend[bv]];
                bv = self.inblossom[v];
            }
            self.blossomchilds[b].push(bb);
            self.blossomchilds[b].reverse();
            self.blossomendps[b].reverse();
            self.blossomendps[b].push(2 * k);
            while bw != bb {
                self.blossomparent[bw] = b;
                self.blossomchilds[b].push(bw);
                self.blossomendps[b].push(self.labelend[bw] ^ 1);
                assert!(self.labelend[bw] != NONE);
                w = self.endpoint[self.labelend[bw]];
                bw = self.inblossom[w];
            }
            assert!(self.label[bb] == 1);
            self.label[b] = 1;
            self.labelend[b] = self.labelend[bb];
            self.dualvar[b] = 0;
            for v in self.blossom_leaves(b) {
                if self.label[self.inblossom[v]] == 2 {
                    self.queue.push(v);
                }
                self.inblossom[v] = b;
            }
            let mut bestedgeto = vec![NONE; 2 * self.nv];
            for bv in self.blossomchilds[b].clone() {
                let nblists: Vec<Vec<usize>> = if self.blossombestedges[bv].is_empty() {
                    self.blossom_leaves(bv)
                        .iter()
                        .map(|&v| self.neighbend[v].iter().map(|p| p / 2).collect())
                        .collect()
                } else {
                    vec![self.blossombestedges[bv].clone()]
                };
                for nblist in nblists {
                    for k in nblist {
                        let (mut i, mut j, _) = self.edges[k];
                        if self.inblossom[j] == b {
                            std::mem::swap(&mut i, &mut j);
                        }
                        let _ = i;
                        let bj = self.inblossom[j];
                        let bestto = bestedgeto[bj];
                        if bj != b
                            && self.label[bj] == 1
                            && (bestto == NONE || self.slack(k) < self.slack(bestto))
                        {
                            bestedgeto[bj] = k;
                        }
                    }
                }
                self.blossombestedges[bv] = vec![];
                self.bestedge[bv] = NONE;
            }
            self.blossombestedges[b] = bestedgeto.into_iter().filter(|&k| k != NONE).collect();
            self.bestedge[b] = NONE;
            for &k in &self.blossombestedges[b] {
                if self.bestedge[b] == NONE || self.slack(k) < self.slack(self.bestedge[b]) {
                    self.bestedge[b] = k;
                }
            }
        }

        fn expand_blossom(&mut self, b: usize, endstage: bool) {
            for s in self.blossomchilds[b].clone() {
                self.blossomparent[s] = NONE;
                if s < self.nv {
                    self.inblossom[s] = s;
                } else if endstage && self.dualvar[s] == 0 {
                    self.expand_blossom(s, endstage);
                } else {
                    for v in self.blossom_leaves(s) {
                        self.inblossom[v] = s;
                    }
                }
            }
            if !endstage && self.label[b] == 2 {
                assert!(self.labelend[b] != NONE);
                let entrychild = self.inblossom[self.endpoint[self.labelend[b] ^ 1]];
                let mut j = self.blossomchilds[b]
                    .iter()
                    .position(|&r| r == entrychild)
                    .unwrap() as i32;
                let (jstep, endptrick): (i32, usize) = if j & 1 != 0 {
                    j -= self.blossomchilds[b].len() as i32;
                    (1, 0)
                } else {
                    (-1, 1)
                };
                let mut p = self.labelend[b];
                while j != 0 {
                    self.label[self.endpoint[p ^ 1]] = 0;
                    let q = wrap(&self.blossomendps[b], j - endptrick as i32) ^ endptrick ^ 1;
                    self.label[self.endpoint[q]] = 0;
                    let ep = self.endpoint[p ^ 1];
                    self.assign_label(ep, 2, p);
                    self.allowedge[wrap(&self.blossomendps[b], j - endptrick as i32) / 2] = true;
                    j += jstep;
                    p = wrap(&self.blossomendps[b], j - endptrick as i32) ^ endptrick;
                    self.allowedge[p / 2] = true;
                    j += jstep;
                }
                let bv = wrap(&self.blossomchilds[b], j);
                self.label[self.endpoint[p ^ 1]] = 2;
                self.label[bv] = 2;
                self.labelend[self.endpoint[p ^ 1]] = p;
                self.labelend[bv] = p;
                self.bestedge[bv] = NONE;
                j += jstep;
                while wrap(&self.blossomchilds[b], j) != entrychild {
                    let bv = wrap(&self.blossomchilds[b], j);
                    if self.label[bv] == 1 {
                        j += jstep;
                        continue;
                    }
                    let mut v = NONE;
                    for t in self.blossom_leaves(bv) {
                        v = t;
                        if self.label[v] != 0 {
                            break;
                        }
                    }
                    if v != NONE && self.label[v] != 0 {
                        assert!(self.label[v] == 2);
                        assert!(self.inblossom[v] == bv);
                        self.label[v] = 0;
                        self.label[self.endpoint[self.mate[self.blossombase[bv]]]] = 0;
                        let le = self.labelend[v];
                        self.assign_label(v, 2, le);
                    }
                    j += jstep;
                }
            }
            self.label[b] = 0;
            self.labelend[b] = NONE;
            self.blossombase[b] = NONE;
            self.bestedge[b] = NONE;
            self.blossomchilds[b] = vec![];
            self.blossomendps[b] = vec![];
            self.blossombestedges[b] = vec![];
            self.unusedblossoms.push(b);
        }

        fn augment_blossom(&mut self, b: usize, v: usize) {
            let mut t = v;
            while self.blossomparent[t] != b {
                t = self.blossomparent[t];
            }
            if t >= self.nv {
                self.augment_blossom(t, v);
            }
            let i = self.blossomchilds[b].iter().position(|&r| r == t).unwrap();
            let mut j = i as i32;
            let (jstep, endptrick): (i32, usize) = if i & 1 != 0 {
                j -= self.blossomchilds[b].len() as i32;
                (1, 0)
            } else {
                (-1, 1)
            };
            while j != 0 {
                j += jstep;
                let mut t = wrap(&self.blossomchilds[b], j);
                let p = wrap(&self.blossomendps[b], j - endptrick as i32) ^ endptrick;
                if t >= self.nv {
                    let ep = self.endpoint[p];
                    self.augment_blossom(t, ep);
                }
                j += jstep;
                t = wrap(&self.blossomchilds[b], j);
                if t >= self.nv {
                    let ep = self.endpoint[p ^ 1];
                    self.augment_blossom(t, ep);
                }
                self.mate[self.endpoint[p]] = p ^ 1;
                self.mate[self.endpoint[p ^ 1]] = p;
            }
            self.blossomchilds[b].rotate_left(i);
            self.blossomendps[b].rotate_left(i);
            self.blossombase[b] = self.blossombase[self.blossomchilds[b][0]];
            assert!(self.blossombase[b] == v);
        }

        fn augment_matching(&mut self, k: usize) {
            let (v, w, _) = self.edges[k];
            for &(mut s, mut p) in &[(v, 2 * k + 1), (w, 2 * k)] {
                loop {
                    let bs = self.inblossom[s];
                    assert!(self.label[bs] == 1);
                    assert!(self.labelend[bs] == self.mate[self.blossombase[bs]]);
                    if bs >= self.nv {
                        self.augment_blossom(bs, s);
                    }
                    self.mate[s] = p;
                    if self.labelend[bs] == NONE {
                        break;
                    }
                    let t = self.endpoint[self.labelend[bs]];
                    let bt = self.inblossom[t];
                    assert!(self.label[bt] == 2);
                    assert!(self.labelend[bt] != NONE);
                    s = self.endpoint[self.labelend[bt]];
                    let j = self.endpoint[self.labelend[bt] ^ 1];
                    assert!(self.blossombase[bt] == t);
                    if bt >= self.nv {
                        self.augment_blossom(bt, j);
                    }
                    self.mate[j] = self.labelend[bt];
                    p = self.labelend[bt] ^ 1;
                }
            }
        }

        fn run(&mut self) {
            let ne = self.edges.len();
            for _stage in 0..self.nv {
                self.label = vec![0; 2 * self.nv];
                self.bestedge = vec![NONE; 2 * self.nv];
                for b in self.nv..2 * self.nv {
                    self.blossombestedges[b] = vec![];
                }
                self.allowedge = vec![false; ne];
                self.queue = vec![];
                for v in 0..self.nv {
                    if self.mate[v] == NONE && self.label[self.inblossom[v]] == 0 {
                        self.assign_label(v, 1, NONE);
                    }
                }
                let mut augmented = false;
                loop {
                    while let Some(v) = self.queue.pop() {
                        assert!(self.label[self.inblossom[v]] == 1);
                        for p in self.neighbend[v].clone() {
                            let k = p / 2;
                            let w = self.endpoint[p];
                            if self.inblossom[v] == self.inblossom[w] {
                                continue;
                            }
                            let mut kslack = 0;
                            if !self.allowedge[k] {
                                kslack = self.slack(k);
                                if kslack <= 0 {
                                    self.allowedge[k] = true;
                                }
                            }
                            if self.allowedge[k] {
                                if self.label[self.inblossom[w]] == 0 {
                                    self.assign_label(w, 2, p ^ 1);
                                } else if self.label[self.inblossom[w]] == 1 {
                                    let base = self.scan_blossom(v, w);
                                    if base != NONE {
                                        self.add_blossom(base, k);
                                    } else {
                                        self.augment_matching(k);
                                        augmented = true;
                                        break;
                                    }
                                } else if self.label[w] == 0 {
                                    assert!(self.label[self.inblossom[w]] == 2);
                                    self.label[w] = 2;
                                    self.labelend[w] = p ^ 1;
                                }
                            } else if self.label[self.inblossom[w]] == 1 {
                                let b = self.inblossom[v];
                                if self.bestedge[b] == NONE
                                    || kslack < self.slack(self.bestedge[b])
                                {
                                    self.bestedge[b] = k;
                                }
                            } else if self.label[w] == 0
                                && (self.bestedge[w] == NONE
                                    || kslack < self.slack(self.bestedge[w]))
                            {
                                self.bestedge[w] = k;
                            }
                        }
                        if augmented {
                            break;
                        }
                    }
                    if augmented {
                        break;
                    }
                    // No augmenting path; pump slack out of the duals.
                    let mut deltatype = 1;
                    let mut delta = *self.dualvar[..self.nv].iter().min().unwrap();
                    let mut deltaedge = 0;
                    let mut deltablossom = 0;
                    for v in 0..self.nv {
                        if self.label[self.inblossom[v]] == 0 && self.bestedge[v] != NONE {
                            let d = self.slack(self.bestedge[v]);
                            if d < delta {
                                delta = d;
                                deltatype = 2;
                                deltaedge = self.bestedge[v];
                            }
                        }
                    }
                    for b in 0..2 * self.nv {
                        if self.blossomparent[b] == NONE
                            && self.label[b] == 1
                            && self.bestedge[b] != NONE
                        {
                            let d = self.slack(self.bestedge[b]) / 2;
                            if d < delta {
                                delta = d;
                                deltatype = 3;
                                deltaedge = self.bestedge[b];
                            }
                        }
                    }
                    for b in self.nv..2 * self.nv {
                        if self.blossombase[b] != NONE
                            && self.blossomparent[b] == NONE
                            && self.label[b] == 2
                            && self.dualvar[b] < delta
                        {
                            delta = self.dualvar[b];
                            deltatype = 4;
                            deltablossom = b;
                        }
                    }
                    for v in 0..self.nv {
                        match self.label[self.inblossom[v]] {
                            0 => {}
                            1 => self.dualvar[v] -= delta,
                            2 => self.dualvar[v] += delta,
                            _ => unreachable!(),
                        }
                    }
                    for b in self.nv..2 * self.nv {
                        if self.blossombase[b] != NONE && self.blossomparent[b] == NONE {
                            match self.label[b] {
                                0 => {}
                                1 => self.dualvar[b] += delta,
                                2 => self.dualvar[b] -= delta,
                                _ => unreachable!(),
                            }
                        }
                    }
                    match deltatype {
                        1 => break,
                        2 => {
                            let (mut i, j, _) = self.edges[deltaedge];
                            self.allowedge[deltaedge] = true;
                            if self.label[self.inblossom[i]] == 0 {
                                i = j;
                            }
                            assert!(self.label[self.inblossom[i]] == 1);
                            self.queue.push(i);
                        }
                        3 => {
                            self.allowedge[deltaedge] = true;
                            let (i, _, _) = self.edges[deltaedge];
                            assert!(self.label[self.inblossom[i]] == 1);
                            self.queue.push(i);
                        }
                        4 => self.expand_blossom(deltablossom, false),
                        _ => unreachable!(),
                    }
                }
                if !augmented {
                    break;
                }
                for b in self.nv..2 * self.nv {
                    if self.blossomparent[b] == NONE
                        && self.blossombase[b] != NONE
                        && self.label[b] == 1
                        && self.dualvar[b] == 0
                    {
                        self.expand_blossom(b, true);
                    }
                }
            }
            #[cfg(debug_assertions)]
            self.verify_optimum();
        }

        /// Complementary-slackness check on the final duals.
        #[cfg(debug_assertions)]
        fn verify_optimum(&self) {
            for k in 0..self.edges.len() {
                let (i, j, wt) = self.edges[k];
                let mut s = self.dualvar[i] + self.dualvar[j] - 2 * wt;
                let mut ib = vec![i];
                let mut jb = vec![j];
                while self.blossomparent[*ib.last().unwrap()] != NONE {
                    ib.push(self.blossomparent[*ib.last().unwrap()]);
                }
                while self.blossomparent[*jb.last().unwrap()] != NONE {
                    jb.push(self.blossomparent[*jb.last().unwrap()]);
                }
                ib.reverse();
                jb.reverse();
                for (&bi, &bj) in ib.iter().zip(jb.iter()) {
                    if bi != bj {
                        break;
                    }
                    s += 2 * self.dualvar[bi];
                }
                assert!(s >= 0, "negative slack");
                let matched = self.mate[i] != NONE
                    && self.mate[i] / 2 == k
                    && self.mate[j] != NONE
                    && self.mate[j] / 2 == k;
                if matched {
                    assert!(s == 0, "matched edge with slack");
                }
            }
            for v in 0..self.nv {
                assert!(self.mate[v] != NONE || self.dualvar[v] == 0);
            }
        }
    }

    /// Python-style indexing: negative j counts from the back.
    fn wrap(v: &[usize], j: i32) -> usize {
        if j >= 0 {
            v[j as usize]
        } else {
            v[v.len() - (-j) as usize]
        }
    }
}
