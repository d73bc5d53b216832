//! Shared generators for the test suites.

use crate::esd::{hedge, Esd, HEdge};
use crate::graph::{Graph, Vertex, VertexSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random valid decomposition together with its graph: eta-sets are drawn
/// first, then exactly the mandatory and a random sample of the permitted
/// edges are realized.
pub fn random_esd(seed: u64) -> (Graph, Esd) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h_n = rng.gen_range(1..=4usize);
    let mut h = Graph::new(h_n);
    for u in 0..h_n {
        for v in u + 1..h_n {
            if rng.gen_bool(0.5) {
                h.add_edge(u, v);
            }
        }
    }
    let mut d = Esd::new(h.clone());
    let mut next: Vertex = 0;
    let mut fresh = |rng: &mut ChaCha8Rng, max: usize| -> VertexSet {
        let k = rng.gen_range(0..=max);
        let s: VertexSet = (next..next + k).collect();
        next += k;
        s
    };
    for v in 0..h_n {
        let s = fresh(&mut rng, 2);
        d.set_eta_vertex(v, s);
    }
    for (u, v) in h.edges() {
        let all = fresh(&mut rng, 3);
        let sub = |rng: &mut ChaCha8Rng| -> VertexSet {
            all.iter().copied().filter(|_| rng.gen_bool(0.6)).collect()
        };
        let (end_u, end_v) = (sub(&mut rng), sub(&mut rng));
        d.set_eta_edge(u, v, all, end_u, end_v);
    }
    for t in d.triangles() {
        let s = fresh(&mut rng, 2);
        d.set_eta_triangle(t, s);
    }

    let mut g = Graph::new(next);
    // Internal edges, freely.
    let internal = |g: &mut Graph, s: &VertexSet, rng: &mut ChaCha8Rng| {
        let vs: Vec<Vertex> = s.iter().copied().collect();
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                if rng.gen_bool(0.4) {
                    g.add_edge(vs[i], vs[j]);
                }
            }
        }
    };
    for v in 0..h_n {
        internal(&mut g, d.eta_vertex(v), &mut rng);
    }
    for e in d.pattern_edges() {
        internal(&mut g, d.eta_edge(e), &mut rng);
    }
    for t in d.triangles() {
        internal(&mut g, d.eta_triangle(t), &mut rng);
    }
    // Mandatory: ends of distinct edges at a shared pattern vertex are
    // fully adjacent.
    for v in 0..h_n {
        let incident: Vec<HEdge> = d
            .pattern_edges()
            .into_iter()
            .filter(|&(a, b)| a == v || b == v)
            .collect();
        for i in 0..incident.len() {
            for j in i + 1..incident.len() {
                for &x in d.eta_end(incident[i], v) {
                    for &y in d.eta_end(incident[j], v) {
                        g.add_edge(x, y);
                    }
                }
            }
        }
    }
    // Optional permitted: eta(v) to an incident end.
    for v in 0..h_n {
        for e in d.pattern_edges() {
            if e.0 != v && e.1 != v {
                continue;
            }
            for &x in d.eta_vertex(v) {
                for &y in d.eta_end(e, v) {
                    if rng.gen_bool(0.5) {
                        g.add_edge(x, y);
                    }
                }
            }
        }
    }
    // Optional permitted: eta(T) to the intersection of both ends of a
    // triangle edge.
    for t in d.triangles() {
        for e in [hedge(t.0, t.1), hedge(t.0, t.2), hedge(t.1, t.2)] {
            for &x in d.eta_triangle(t).clone().iter() {
                for &y in d.eta_end(e, e.0).intersection(d.eta_end(e, e.1)) {
                    if rng.gen_bool(0.5) {
                        g.add_edge(x, y);
                    }
                }
            }
        }
    }
    (g, d)
}

/// A random independent set: a random subset of a randomly grown maximal one.
pub fn random_independent(g: &Graph, seed: u64) -> VertexSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<Vertex> = g.vertices().collect();
    for i in (1..order.len()).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let mut i = VertexSet::new();
    for v in order {
        if rng.gen_bool(0.6) && g.neighbors(v).iter().all(|u| !i.contains(u)) {
            i.insert(v);
        }
    }
    i
}

/// A random connected graph on up to `n_max` vertices.
pub fn random_connected(seed: u64, n_max: usize) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=n_max);
    loop {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(0.35) {
                    g.add_edge(u, v);
                }
            }
        }
        if g.is_connected() {
            return g;
        }
    }
}

/// A random connected graph avoiding the given class witness, by rejection.
pub fn random_connected_free(
    seed: u64,
    n_max: usize,
    class: &crate::graph::GraphClass,
) -> Graph {
    let mut s = seed;
    loop {
        let g = random_connected(s, n_max);
        if crate::graph::freeness_check(&g, class).0 {
            return g;
        }
        s = s.wrapping_add(0x9e3779b97f4a7c15);
    }
}

/// Random weights in 1..=30.
pub fn random_weights(n: usize, seed: u64) -> crate::graph::WeightFn {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    crate::graph::WeightFn::new((0..n).map(|_| rng.gen_range(1..=30)).collect())
}
