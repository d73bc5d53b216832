//! Graph representation, basic queries, induced-pattern detection, and
//! instance generation.
//!
//! Vertices are canonicalized to `0..n-1` and every iteration order is
//! ascending by id, so enumerated families downstream are reproducible.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt::Write as _;
use thiserror::Error;

pub type Vertex = usize;

/// Set of vertex ids; BTreeSet so iteration is ascending by id.
pub type VertexSet = BTreeSet<Vertex>;

pub fn vset(vs: &[Vertex]) -> VertexSet {
    vs.iter().copied().collect()
}

/// Simple undirected graph: no self-loops, symmetric adjacency, no
/// duplicate edges.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    adj: Vec<BTreeSet<Vertex>>,
}

/// Nonnegative 64-bit vertex weights; all arithmetic is overflow-checked.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct WeightFn {
    weights: Vec<u64>,
}

#[derive(Error, Debug)]
pub enum GraphError {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("vertex {0} out of range (n = {1})")]
    OutOfRange(Vertex, usize),
    #[error("search cap exceeded: {0}")]
    CapExceeded(String),
    #[error("rejection budget exhausted for filtered generation")]
    RejectionBudget,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            n,
            adj: vec![BTreeSet::new(); n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Self {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) {
        assert!(u != v, "self-loop");
        assert!(u < self.n && v < self.n, "vertex out of range");
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u != v && self.adj[u].contains(&v)
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(|a| a.len()).max().unwrap_or(0)
    }

    pub fn neighbors(&self, v: Vertex) -> &BTreeSet<Vertex> {
        &self.adj[v]
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        0..self.n
    }

    pub fn vertex_set(&self) -> VertexSet {
        (0..self.n).collect()
    }

    /// Edges as (u, v) with u < v, ascending.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// N[S].
    pub fn closed_neighborhood(&self, s: &VertexSet) -> VertexSet {
        let mut out = s.clone();
        for &v in s {
            out.extend(self.adj[v].iter().copied());
        }
        out
    }

    /// N(S) = N[S] \ S.
    pub fn open_neighborhood(&self, s: &VertexSet) -> VertexSet {
        let closed = self.closed_neighborhood(s);
        closed.difference(s).copied().collect()
    }

    pub fn closed_neighborhood_of(&self, v: Vertex) -> VertexSet {
        let mut out: VertexSet = self.adj[v].clone();
        out.insert(v);
        out
    }

    /// Maximal connected vertex sets, ordered by minimum vertex id.
    pub fn connected_components(&self) -> Vec<VertexSet> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut comp = VertexSet::new();
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(v) = stack.pop() {
                comp.insert(v);
                for &u in &self.adj[v] {
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// Components of the subgraph induced on `within`, ordered by minimum id.
    pub fn components_within(&self, within: &VertexSet) -> Vec<VertexSet> {
        let mut seen = VertexSet::new();
        let mut out = Vec::new();
        for &start in within {
            if seen.contains(&start) {
                continue;
            }
            let mut comp = VertexSet::new();
            let mut stack = vec![start];
            seen.insert(start);
            while let Some(v) = stack.pop() {
                comp.insert(v);
                for &u in &self.adj[v] {
                    if within.contains(&u) && seen.insert(u) {
                        stack.push(u);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.connected_components().len() == 1
    }

    pub fn is_independent(&self, s: &VertexSet) -> bool {
        for &u in s {
            for &v in s {
                if u < v && self.has_edge(u, v) {
                    return false;
                }
            }
        }
        true
    }

    /// Induced subgraph on `keep`; second result maps new id -> old id
    /// (ascending, so the relabeling is canonical).
    pub fn induced(&self, keep: &VertexSet) -> (Graph, Vec<Vertex>) {
        let order: Vec<Vertex> = keep.iter().copied().collect();
        let mut back = vec![usize::MAX; self.n];
        for (new, &old) in order.iter().enumerate() {
            back[old] = new;
        }
        let mut g = Graph::new(order.len());
        for (new, &old) in order.iter().enumerate() {
            for &w in &self.adj[old] {
                if keep.contains(&w) && back[w] > new {
                    g.add_edge(new, back[w]);
                }
            }
        }
        (g, order)
    }

    /// Graph minus a vertex set.
    pub fn remove(&self, removed: &VertexSet) -> (Graph, Vec<Vertex>) {
        let keep: VertexSet = (0..self.n).filter(|v| !removed.contains(v)).collect();
        self.induced(&keep)
    }

    /// True iff G[s] is connected and acyclic (and s nonempty).
    pub fn induces_tree(&self, s: &VertexSet) -> bool {
        if s.is_empty() {
            return false;
        }
        let mut m = 0;
        for &u in s {
            m += self.adj[u].iter().filter(|v| s.contains(v)).count();
        }
        m /= 2;
        m == s.len() - 1 && self.components_within(s).len() == 1
    }

    /// True iff `path` lists the vertices of an induced path in order.
    pub fn is_induced_path(&self, path: &[Vertex]) -> bool {
        let set: VertexSet = path.iter().copied().collect();
        if set.len() != path.len() {
            return false;
        }
        for i in 0..path.len() {
            for j in i + 1..path.len() {
                let adjacent = self.has_edge(path[i], path[j]);
                if adjacent != (j == i + 1) {
                    return false;
                }
            }
        }
        true
    }

    /// Distance matrix rows for one source (usize::MAX = unreachable).
    pub fn bfs_dist(&self, src: Vertex) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        dist[src] = 0;
        let mut queue = std::collections::VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            for &u in &self.adj[v] {
                if dist[u] == usize::MAX {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        dist
    }

    /// Text form in the same format load_graph reads.
    pub fn to_text(&self, w: Option<&WeightFn>) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "p {} {}", self.n, self.m());
        if let Some(w) = w {
            for v in 0..self.n {
                let _ = writeln!(s, "n {} {}", v, w.get(v));
            }
        }
        for (u, v) in self.edges() {
            let _ = writeln!(s, "e {u} {v}");
        }
        s
    }
}

impl WeightFn {
    pub fn new(weights: Vec<u64>) -> Self {
        WeightFn { weights }
    }

    pub fn uniform(n: usize) -> Self {
        WeightFn {
            weights: vec![1; n],
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn get(&self, v: Vertex) -> u64 {
        self.weights[v]
    }

    pub fn set(&mut self, v: Vertex, w: u64) {
        self.weights[v] = w;
    }

    /// Sum of weights over a set, overflow-checked.
    pub fn total(&self, s: &VertexSet) -> u64 {
        s.iter().fold(0u64, |acc, &v| {
            acc.checked_add(self.weights[v]).expect("weight overflow")
        })
    }

    pub fn total_all(&self) -> u64 {
        self.weights
            .iter()
            .fold(0u64, |acc, &w| acc.checked_add(w).expect("weight overflow"))
    }

    /// Weights restricted to a kept-vertex list (new id -> old id).
    pub fn restrict(&self, order: &[Vertex]) -> WeightFn {
        WeightFn {
            weights: order.iter().map(|&v| self.weights[v]).collect(),
        }
    }
}

/// Forbidden-structure classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphClass {
    /// No induced path on t vertices.
    Pt(usize),
    /// No induced cycle on >= t vertices.
    CgeT(usize),
    /// No induced subdivided claw with all three legs of length >= t.
    YgeT(usize),
    /// No induced subdivision of the lobster with every edge subdivided
    /// >= t-1 times (every lobster edge becomes a path of >= t edges).
    LgeT(usize),
    /// No induced copy of an explicit pattern.
    ExplicitH(Graph),
}

/// Parses the DIMACS-like text format: `p <n> <m>`, `e <u> <v>`,
/// optional `n <v> <w>`, `c` comments. Vertices 0-based.
pub fn load_graph(text: &str) -> Result<(Graph, WeightFn), GraphError> {
    let mut graph: Option<Graph> = None;
    let mut weights: Option<Vec<u64>> = None;
    let mut edges_seen = 0usize;
    let mut declared_m = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('c') {
            continue;
        }
        let mut it = l.split_whitespace();
        let tag = it.next().unwrap();
        let parse = |s: Option<&str>, what: &str| -> Result<usize, GraphError> {
            s.ok_or_else(|| GraphError::Parse {
                line,
                msg: format!("missing {what}"),
            })?
            .parse()
            .map_err(|e| GraphError::Parse {
                line,
                msg: format!("bad {what}: {e}"),
            })
        };
        match tag {
            "p" => {
                let n = parse(it.next(), "vertex count")?;
                declared_m = parse(it.next(), "edge count")?;
                graph = Some(Graph::new(n));
                weights = Some(vec![1; n]);
            }
            "e" => {
                let g = graph.as_mut().ok_or(GraphError::Parse {
                    line,
                    msg: "edge before header".into(),
                })?;
                let u = parse(it.next(), "endpoint")?;
                let v = parse(it.next(), "endpoint")?;
                if u == v {
                    return Err(GraphError::SelfLoop(u));
                }
                if u >= g.n() || v >= g.n() {
                    return Err(GraphError::OutOfRange(u.max(v), g.n()));
                }
                g.add_edge(u, v);
                edges_seen += 1;
            }
            "n" => {
                let ws = weights.as_mut().ok_or(GraphError::Parse {
                    line,
                    msg: "weight before header".into(),
                })?;
                let v = parse(it.next(), "vertex")?;
                let w = parse(it.next(), "weight")?;
                if v >= ws.len() {
                    return Err(GraphError::OutOfRange(v, ws.len()));
                }
                ws[v] = w as u64;
            }
            other => {
                return Err(GraphError::Parse {
                    line,
                    msg: format!("unknown line tag '{other}'"),
                })
            }
        }
    }
    let graph = graph.ok_or(GraphError::Parse {
        line: 0,
        msg: "missing 'p' header".into(),
    })?;
    if edges_seen != declared_m {
        return Err(GraphError::Parse {
            line: 0,
            msg: format!("header declares {declared_m} edges, found {edges_seen}"),
        });
    }
    let w = WeightFn::new(weights.unwrap());
    Ok((graph, w))
}

/// Injective map pattern vertex -> G vertex realizing an induced embedding,
/// or None. Backtracking with degree pruning.
pub fn find_induced_copy(g: &Graph, pattern: &Graph) -> Option<Vec<Vertex>> {
    find_induced_copy_capped(g, pattern, 12).expect("pattern above default cap")
}

pub fn find_induced_copy_capped(
    g: &Graph,
    pattern: &Graph,
    cap: usize,
) -> Result<Option<Vec<Vertex>>, GraphError> {
    if pattern.n() > cap {
        return Err(GraphError::CapExceeded(format!(
            "pattern on {} vertices exceeds cap {}",
            pattern.n(),
            cap
        )));
    }
    if pattern.n() > g.n() {
        return Ok(None);
    }
    // Order pattern vertices so each (after the first in its component)
    // touches an earlier one where possible; improves pruning.
    let mut order: Vec<Vertex> = Vec::new();
    let mut placed = vec![false; pattern.n()];
    while order.len() < pattern.n() {
        let next = (0..pattern.n())
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                (
                    pattern.adj[v].iter().filter(|&&u| placed[u]).count(),
                    pattern.degree(v),
                    usize::MAX - v,
                )
            })
            .unwrap();
        placed[next] = true;
        order.push(next);
    }
    let mut map = vec![usize::MAX; pattern.n()];
    let mut used = vec![false; g.n()];
    fn rec(
        g: &Graph,
        pattern: &Graph,
        order: &[Vertex],
        pos: usize,
        map: &mut Vec<Vertex>,
        used: &mut Vec<bool>,
    ) -> bool {
        if pos == order.len() {
            return true;
        }
        let p = order[pos];
        'cand: for c in 0..g.n() {
            if used[c] || g.degree(c) < pattern.degree(p) {
                continue;
            }
            for &q in order[..pos].iter() {
                let need = pattern.has_edge(p, q);
                if g.has_edge(c, map[q]) != need {
                    continue 'cand;
                }
            }
            map[p] = c;
            used[c] = true;
            if rec(g, pattern, order, pos + 1, map, used) {
                return true;
            }
            used[c] = false;
            map[p] = usize::MAX;
        }
        false
    }
    if rec(g, pattern, &order, 0, &mut map, &mut used) {
        Ok(Some(map))
    } else {
        Ok(None)
    }
}

/// True iff no forbidden induced structure of `class` exists; on false,
/// the witness vertex set is returned.
pub fn freeness_check(g: &Graph, class: &GraphClass) -> (bool, Option<VertexSet>) {
    match class {
        GraphClass::Pt(t) => match find_induced_path_of_len(g, *t) {
            Some(p) => (false, Some(p.into_iter().collect())),
            None => (true, None),
        },
        GraphClass::CgeT(t) => match find_long_induced_cycle(g, *t) {
            Some(c) => (false, Some(c.into_iter().collect())),
            None => (true, None),
        },
        GraphClass::YgeT(t) => match find_induced_claw(g, *t) {
            Some(c) => (false, Some(c.all_vertices())),
            None => (true, None),
        },
        GraphClass::LgeT(t) => match find_induced_lobster(g, *t) {
            Some(s) => (false, Some(s)),
            None => (true, None),
        },
        GraphClass::ExplicitH(h) => {
            match find_induced_copy_capped(g, h, 16).expect("explicit pattern too large") {
                Some(map) => (false, Some(map.into_iter().collect())),
                None => (true, None),
            }
        }
    }
}

/// Some induced path on exactly t vertices, if one exists.
pub fn find_induced_path_of_len(g: &Graph, t: usize) -> Option<Vec<Vertex>> {
    if t == 0 {
        return Some(vec![]);
    }
    if t == 1 {
        return if g.n() > 0 { Some(vec![0]) } else { None };
    }
    let mut path = Vec::new();
    for start in 0..g.n() {
        path.push(start);
        if extend_induced_path(g, &mut path, t) {
            return Some(path);
        }
        path.pop();
    }
    None
}

fn extend_induced_path(g: &Graph, path: &mut Vec<Vertex>, t: usize) -> bool {
    if path.len() == t {
        return true;
    }
    let last = *path.last().unwrap();
    let cands: Vec<Vertex> = g.adj[last].iter().copied().collect();
    'cand: for c in cands {
        for (i, &p) in path.iter().enumerate() {
            if p == c {
                continue 'cand;
            }
            let adjacent = g.has_edge(c, p);
            if adjacent != (i == path.len() - 1) {
                continue 'cand;
            }
        }
        path.push(c);
        if extend_induced_path(g, path, t) {
            return true;
        }
        path.pop();
    }
    false
}

/// Some induced cycle on >= t vertices, if one exists.
pub fn find_long_induced_cycle(g: &Graph, t: usize) -> Option<Vec<Vertex>> {
    let t = t.max(3);
    // Grow induced paths whose minimum vertex is the anchor; close a cycle
    // when the last vertex sees the anchor and nothing else on the path.
    for anchor in 0..g.n() {
        let mut path = vec![anchor];
        if let Some(c) = grow_cycle(g, anchor, &mut path, t) {
            return Some(c);
        }
    }
    None
}

fn grow_cycle(g: &Graph, anchor: Vertex, path: &mut Vec<Vertex>, t: usize) -> Option<Vec<Vertex>> {
    let last = *path.last().unwrap();
    if path.len() >= t && g.has_edge(last, anchor) {
        return Some(path.clone());
    }
    let cands: Vec<Vertex> = g.adj[last].iter().copied().collect();
    'cand: for c in cands {
        if c <= anchor {
            continue;
        }
        for (i, &p) in path.iter().enumerate() {
            if p == c {
                continue 'cand;
            }
            let adjacent = g.has_edge(c, p);
            let allowed = i == path.len() - 1 || (i == 0 && path.len() + 1 >= t);
            if adjacent && !allowed {
                continue 'cand;
            }
            if !adjacent && i == path.len() - 1 {
                continue 'cand;
            }
        }
        path.push(c);
        if let Some(found) = grow_cycle(g, anchor, path, t) {
            return Some(found);
        }
        path.pop();
    }
    None
}

/// An induced subdivided claw: center plus three legs (paths listed from
/// the center outward, center excluded).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClawWitness {
    pub center: Vertex,
    pub legs: [Vec<Vertex>; 3],
}

impl ClawWitness {
    pub fn all_vertices(&self) -> VertexSet {
        let mut s = VertexSet::from([self.center]);
        for leg in &self.legs {
            s.extend(leg.iter().copied());
        }
        s
    }

    pub fn tips(&self) -> [Vertex; 3] {
        [
            *self.legs[0].last().unwrap(),
            *self.legs[1].last().unwrap(),
            *self.legs[2].last().unwrap(),
        ]
    }

    /// Checks the witness against g: induced, center degree 3 inside, each
    /// leg an induced path of length >= t from the center.
    pub fn verify(&self, g: &Graph, t: usize) -> bool {
        let all = self.all_vertices();
        if all.len() != 1 + self.legs.iter().map(|l| l.len()).sum::<usize>() {
            return false;
        }
        for leg in &self.legs {
            if leg.len() < t {
                return false;
            }
            let mut seq = vec![self.center];
            seq.extend(leg.iter().copied());
            if !g.is_induced_path(&seq) {
                return false;
            }
        }
        // No adjacency across distinct legs.
        for i in 0..3 {
            for j in i + 1..3 {
                for &a in &self.legs[i] {
                    for &b in &self.legs[j] {
                        if g.has_edge(a, b) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// Some induced claw with all legs of length >= t, if one exists.
pub fn find_induced_claw(g: &Graph, t: usize) -> Option<ClawWitness> {
    let t = t.max(1);
    for center in 0..g.n() {
        let nbrs: Vec<Vertex> = g.adj[center].iter().copied().collect();
        for (i, &a) in nbrs.iter().enumerate() {
            for (j, &b) in nbrs.iter().enumerate().skip(i + 1) {
                if g.has_edge(a, b) {
                    continue;
                }
                for &c in nbrs.iter().skip(j + 1) {
                    if g.has_edge(a, c) || g.has_edge(b, c) {
                        continue;
                    }
                    if let Some(w) = grow_claw(g, center, [a, b, c], t) {
                        return Some(w);
                    }
                }
            }
        }
    }
    None
}

fn grow_claw(g: &Graph, center: Vertex, firsts: [Vertex; 3], t: usize) -> Option<ClawWitness> {
    let mut legs = [vec![firsts[0]], vec![firsts[1]], vec![firsts[2]]];
    if grow_claw_rec(g, center, &mut legs, t, 0) {
        Some(ClawWitness { center, legs })
    } else {
        None
    }
}

fn grow_claw_rec(
    g: &Graph,
    center: Vertex,
    legs: &mut [Vec<Vertex>; 3],
    t: usize,
    which: usize,
) -> bool {
    if which == 3 {
        return true;
    }
    if legs[which].len() >= t {
        return grow_claw_rec(g, center, legs, t, which + 1);
    }
    let last = *legs[which].last().unwrap();
    let cands: Vec<Vertex> = g.adj[last].iter().copied().collect();
    'cand: for cand in cands {
        if cand == center || g.has_edge(cand, center) {
            continue;
        }
        for (li, leg) in legs.iter().enumerate() {
            for (i, &p) in leg.iter().enumerate() {
                if p == cand {
                    continue 'cand;
                }
                let adjacent = g.has_edge(cand, p);
                let allowed = li == which && i == leg.len() - 1;
                if adjacent != allowed && adjacent {
                    continue 'cand;
                }
                if !adjacent && allowed {
                    continue 'cand;
                }
            }
        }
        legs[which].push(cand);
        if grow_claw_rec(g, center, legs, t, which) {
            return true;
        }
        legs[which].pop();
    }
    false
}

/// Builds the (>=t)-lobster pattern graph: spine a0..a4 and pendants at
/// a1,a2,a3, with every edge expanded into a path of exactly t edges.
pub fn lobster_pattern(t: usize) -> Graph {
    assert!(t >= 1);
    // 7 pattern edges, each a path of t edges: t-1 inner vertices per edge.
    // Base vertices: a0..a4 (0..5), b1,b2,b3 (5..8).
    let base_edges = [(0, 1), (1, 2), (2, 3), (3, 4), (1, 5), (2, 6), (3, 7)];
    let mut n = 8;
    let mut edges = Vec::new();
    for &(u, v) in &base_edges {
        let mut prev = u;
        for _ in 0..t - 1 {
            edges.push((prev, n));
            prev = n;
            n += 1;
        }
        edges.push((prev, v));
    }
    Graph::from_edges(n, &edges)
}

/// Some induced (>=t)-lobster, if one exists. Searches for an induced
/// subdivided-lobster tree: three spine centers of degree 3 joined by paths
/// of >= t edges, each carrying one pendant path, and end paths at the
/// outer centers. Free-ended arms are grown to exactly t edges (a longer
/// arm truncates to an induced one), interior arms to any length >= t.
pub fn find_induced_lobster(g: &Graph, t: usize) -> Option<VertexSet> {
    let t = t.max(1);
    let state = LobsterSearch { g, t };
    for c1 in 0..g.n() {
        for c2 in 0..g.n() {
            if c2 == c1 {
                continue;
            }
            for c3 in 0..g.n() {
                if c3 == c1 || c3 == c2 {
                    continue;
                }
                if let Some(s) = state.try_centers(c1, c2, c3) {
                    return Some(s);
                }
            }
        }
    }
    None
}

const FREE_END: Vertex = usize::MAX;

struct LobsterSearch<'a> {
    g: &'a Graph,
    t: usize,
}

impl<'a> LobsterSearch<'a> {
    fn try_centers(&self, c1: Vertex, c2: Vertex, c3: Vertex) -> Option<VertexSet> {
        let mut used = VertexSet::from([c1, c2, c3]);
        // Arm spec: (from, to); FREE_END marks pendant / spine-end arms.
        let specs = [
            (c1, c2),
            (c2, c3),
            (c1, FREE_END),
            (c1, FREE_END),
            (c2, FREE_END),
            (c3, FREE_END),
            (c3, FREE_END),
        ];
        self.grow_arm(&specs, 0, &mut used, [c1, c2, c3])
    }

    fn grow_arm(
        &self,
        specs: &[(Vertex, Vertex); 7],
        idx: usize,
        used: &mut VertexSet,
        centers: [Vertex; 3],
    ) -> Option<VertexSet> {
        if idx == 7 {
            // Pruning during growth forbids every non-tree adjacency except
            // an interior vertex prematurely touching its own target; the
            // final tree check catches those.
            let s = used.clone();
            if self.g.induces_tree(&s)
                && centers
                    .iter()
                    .all(|&c| self.g.adj[c].iter().filter(|v| s.contains(v)).count() == 3)
            {
                return Some(s);
            }
            return None;
        }
        let (from, to) = specs[idx];
        let mut arm = vec![from];
        self.extend_arm(specs, idx, used, centers, &mut arm, to)
    }

    fn extend_arm(
        &self,
        specs: &[(Vertex, Vertex); 7],
        idx: usize,
        used: &mut VertexSet,
        centers: [Vertex; 3],
        arm: &mut Vec<Vertex>,
        to: Vertex,
    ) -> Option<VertexSet> {
        let edges = arm.len() - 1;
        let last = *arm.last().unwrap();
        if to == FREE_END {
            if edges == self.t {
                return self.grow_arm(specs, idx + 1, used, centers);
            }
        } else if edges + 1 >= self.t && self.g.has_edge(last, to) {
            if let Some(s) = self.grow_arm(specs, idx + 1, used, centers) {
                return Some(s);
            }
        }
        if used.len() >= self.g.n() {
            return None;
        }
        let cands: Vec<Vertex> = self.g.adj[last].iter().copied().collect();
        'cand: for c in cands {
            if used.contains(&c) {
                continue;
            }
            // Induced-ness: a new arm vertex may touch only the previous
            // arm vertex and (when closing later) its own target.
            for &x in used.iter() {
                if x != last && x != to && self.g.has_edge(c, x) {
                    continue 'cand;
                }
            }
            arm.push(c);
            used.insert(c);
            if let Some(s) = self.extend_arm(specs, idx, used, centers, arm, to) {
                return Some(s);
            }
            used.remove(&c);
            arm.pop();
        }
        None
    }
}

/// Generator specs for the test and CLI surface.
#[derive(Clone, Debug)]
pub enum GeneratorSpec {
    Path(usize),
    Cycle(usize),
    Random { n: usize, p: Ratio01 },
    Split(usize),
    LineGraphOfRandom { n: usize, p: Ratio01 },
    RandomFiltered { n: usize, p: Ratio01, class: GraphClass },
}

/// Edge probability as an exact rational in [0,1].
#[derive(Clone, Copy, Debug)]
pub struct Ratio01 {
    pub num: u32,
    pub den: u32,
}

impl Ratio01 {
    pub fn new(num: u32, den: u32) -> Self {
        assert!(den > 0 && num <= den);
        Ratio01 { num, den }
    }

    fn sample(&self, rng: &mut impl Rng) -> bool {
        rng.gen_range(0..self.den) < self.num
    }
}

pub const DEFAULT_WEIGHT_RANGE: std::ops::RangeInclusive<u64> = 1..=100;

/// Deterministic for a fixed seed. Weights drawn uniformly from
/// DEFAULT_WEIGHT_RANGE.
pub fn generate(spec: &GeneratorSpec, seed: u64) -> Result<(Graph, WeightFn), GraphError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = match spec {
        GeneratorSpec::Path(n) => {
            Graph::from_edges(*n, &(1..*n).map(|i| (i - 1, i)).collect::<Vec<_>>())
        }
        GeneratorSpec::Cycle(n) => {
            assert!(*n >= 3, "cycle needs >= 3 vertices");
            let mut e: Vec<_> = (1..*n).map(|i| (i - 1, i)).collect();
            e.push((*n - 1, 0));
            Graph::from_edges(*n, &e)
        }
        GeneratorSpec::Random { n, p } => random_graph(*n, *p, &mut rng),
        GeneratorSpec::Split(n) => {
            // Clique on the first half, independent on the rest, random
            // edges across.
            let k = n / 2;
            let mut g = Graph::new(*n);
            for i in 0..k {
                for j in i + 1..k {
                    g.add_edge(i, j);
                }
            }
            for i in 0..k {
                for j in k..*n {
                    if rng.gen_bool(0.5) {
                        g.add_edge(i, j);
                    }
                }
            }
            g
        }
        GeneratorSpec::LineGraphOfRandom { n, p } => {
            let base = random_graph(*n, *p, &mut rng);
            line_graph(&base)
        }
        GeneratorSpec::RandomFiltered { n, p, class } => {
            let mut found = None;
            for _ in 0..2000 {
                let g = random_graph(*n, *p, &mut rng);
                if freeness_check(&g, class).0 {
                    found = Some(g);
                    break;
                }
            }
            found.ok_or(GraphError::RejectionBudget)?
        }
    };
    let w = WeightFn::new(
        (0..g.n())
            .map(|_| rng.gen_range(DEFAULT_WEIGHT_RANGE))
            .collect(),
    );
    Ok((g, w))
}

fn random_graph(n: usize, p: Ratio01, rng: &mut impl Rng) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if p.sample(rng) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// Line graph: one vertex per base edge, adjacent iff the base edges share
/// an endpoint. Line graphs contain no induced claw.
pub fn line_graph(base: &Graph) -> Graph {
    let edges = base.edges();
    let mut g = Graph::new(edges.len());
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            let (a, b) = edges[i];
            let (c, d) = edges[j];
            if a == c || a == d || b == c || b == d {
                g.add_edge(i, j);
            }
        }
    }
    g
}
