//! Balanced separators from induced paths.
//!
//! In a connected graph, growing an induced path that always steps toward
//! the currently heaviest region yields a path whose closed neighborhood is
//! a weight-balanced separator. The whole construction can be indexed by a
//! target length k and an anchor vertex z (identifying the heavy region as
//! the component containing z), giving a weight-oblivious family of at most
//! n^2 + 1 paths that works for every weight function. Graphs with no long
//! induced cycle additionally admit such separators of bounded length.

use crate::graph::{freeness_check, Graph, GraphClass, Vertex, VertexSet, WeightFn};
use crate::ratio::{le_frac, Ratio};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PathError {
    #[error("graph is not connected")]
    Disconnected,
    #[error("start vertex {0} out of range")]
    BadVertex(Vertex),
    #[error("no family member qualifies; this contradicts the separator guarantee")]
    NoQualifyingPath,
    #[error("no family member qualifies; input likely contains an induced cycle of length >= {0}")]
    ClassViolation(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GyarfasPath {
    pub start: Vertex,
    /// Path vertices in order; empty for the empty path.
    pub vertices: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparatorCertificate {
    pub path: GyarfasPath,
    pub alpha: Ratio,
    /// Heaviest component weight of each level graph G_0, ..., G_{k+1}.
    pub heaviest: Vec<u64>,
}

/// The level graph G_i as a vertex set: G with N[v_0..v_{i-1}] removed.
/// G_0 removes just v_0 (or u, for the empty path).
pub fn level_vertices(g: &Graph, start: Vertex, path: &[Vertex], i: usize) -> VertexSet {
    let removed: VertexSet = if i == 0 {
        [*path.first().unwrap_or(&start)].into()
    } else {
        g.closed_neighborhood(&path[..i].iter().copied().collect())
    };
    g.vertices().filter(|v| !removed.contains(v)).collect()
}

/// The deterministic path for a target vertex count and anchor z: each
/// extension steps to the smallest vertex of the previous level adjacent to
/// both the current endpoint and the component of the next level holding z.
fn indexed_path(g: &Graph, u: Vertex, target_len: usize, z: Vertex) -> Option<Vec<Vertex>> {
    let mut path = vec![];
    if target_len == 0 {
        return Some(path);
    }
    path.push(u);
    while path.len() < target_len {
        let ell = path.len() - 1;
        let here = level_vertices(g, u, &path, ell);
        let next_level = level_vertices(g, u, &path, ell + 1);
        if !next_level.contains(&z) {
            return None;
        }
        let heavy_region = g
            .components_within(&next_level)
            .into_iter()
            .find(|c| c.contains(&z))
            .unwrap();
        let last = path[ell];
        let candidate = here.iter().copied().find(|&x| {
            g.has_edge(x, last) && heavy_region.iter().any(|&y| g.has_edge(x, y))
        })?;
        path.push(candidate);
    }
    Some(path)
}

/// The weight-oblivious path family: the empty path plus the deterministic
/// path for every (length, anchor) pair, deduplicated; at most n^2 + 1
/// members, each an induced path starting at u.
pub fn gyarfas_family(g: &Graph, u: Vertex) -> Result<Vec<GyarfasPath>, PathError> {
    if u >= g.n() {
        return Err(PathError::BadVertex(u));
    }
    if !g.is_connected() {
        return Err(PathError::Disconnected);
    }
    let mut out = vec![GyarfasPath {
        start: u,
        vertices: vec![],
    }];
    let mut seen: Vec<Vec<Vertex>> = vec![vec![]];
    for target_len in 1..=g.n() {
        for z in g.vertices() {
            if let Some(p) = indexed_path(g, u, target_len, z) {
                if !seen.contains(&p) {
                    debug_assert!(g.is_induced_path(&p));
                    seen.push(p.clone());
                    out.push(GyarfasPath {
                        start: u,
                        vertices: p,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Checks the three separator properties for a path, weight function, and
/// balance parameter; on success returns the per-level heaviest component
/// weights (levels 0 through k+1).
pub fn certify(
    g: &Graph,
    u: Vertex,
    path: &[Vertex],
    w: &WeightFn,
    alpha: Ratio,
) -> Option<Vec<u64>> {
    if !path.is_empty() && path[0] != u {
        return None;
    }
    let total = w.total(&g.vertex_set());
    let k1 = if path.is_empty() { 0 } else { path.len() };
    let mut heaviest = vec![];
    for i in 0..=k1 {
        let level = level_vertices(g, u, path, i);
        let comps = g.components_within(&level);
        let best = comps.iter().map(|c| w.total(c)).max().unwrap_or(0);
        heaviest.push(best);
        if i == k1 {
            // Every component of the final level is light.
            if !le_frac(best, alpha.one_minus(), total) {
                return None;
            }
        } else {
            // Some heavy component of G_i is adjacent to v_i.
            let v_i = path[i];
            let ok = comps.iter().any(|c| {
                !le_frac(w.total(c), alpha.one_minus(), total)
                    && c.iter().any(|&x| g.has_edge(x, v_i))
            });
            if !ok {
                return None;
            }
        }
    }
    Some(heaviest)
}

/// The first family member satisfying the separator properties for (alpha, w).
pub fn gyarfas_select(
    g: &Graph,
    u: Vertex,
    w: &WeightFn,
    alpha: Ratio,
) -> Result<SeparatorCertificate, PathError> {
    assert!(
        alpha > Ratio::zero() && alpha < Ratio::new(1, 2),
        "balance parameter must lie in (0, 1/2)"
    );
    for p in gyarfas_family(g, u)? {
        if let Some(heaviest) = certify(g, u, &p.vertices, w, alpha) {
            return Ok(SeparatorCertificate {
                path: p,
                alpha,
                heaviest,
            });
        }
    }
    Err(PathError::NoQualifyingPath)
}

/// Short-path family for graphs with no induced cycle of length >= t: each
/// member has fewer than t vertices. Long members of the base family are
/// replaced by their two trailing windows of t-1 vertices.
pub fn long_hole_family(g: &Graph, t: usize) -> Result<Vec<GyarfasPath>, PathError> {
    assert!(t >= 4);
    let mut out: Vec<GyarfasPath> = vec![];
    let mut push = |p: GyarfasPath| {
        if !out.contains(&p) {
            out.push(p);
        }
    };
    for p in gyarfas_family(g, 0)? {
        let k1 = p.vertices.len();
        if k1 < t {
            push(p);
        } else {
            // Trailing windows (v_{k-t+1}..v_{k-1}) and (v_{k-t+2}..v_k),
            // each on t-1 vertices.
            let first = p.vertices[k1 - t..k1 - 1].to_vec();
            let second = p.vertices[k1 - t + 1..k1].to_vec();
            push(GyarfasPath {
                start: p.start,
                vertices: first,
            });
            push(GyarfasPath {
                start: p.start,
                vertices: second,
            });
        }
    }
    Ok(out)
}

/// The first short path whose closed neighborhood leaves only components of
/// weight at most (3/4) w(G). Guaranteed to exist when the graph has no
/// induced cycle on t or more vertices.
pub fn long_hole_select(
    g: &Graph,
    t: usize,
    w: &WeightFn,
) -> Result<SeparatorCertificate, PathError> {
    let total = w.total(&g.vertex_set());
    let bound = Ratio::new(3, 4);
    for p in long_hole_family(g, t)? {
        if p.vertices.is_empty() {
            continue;
        }
        let closed = g.closed_neighborhood(&p.vertices.iter().copied().collect());
        let rest: VertexSet = g.vertices().filter(|v| !closed.contains(v)).collect();
        let comps = g.components_within(&rest);
        let best = comps.iter().map(|c| w.total(c)).max().unwrap_or(0);
        if le_frac(best, bound, total) {
            return Ok(SeparatorCertificate {
                path: p,
                alpha: Ratio::new(1, 4),
                heaviest: vec![best],
            });
        }
    }
    let (free, _) = freeness_check(g, &GraphClass::CgeT(t));
    if free {
        Err(PathError::NoQualifyingPath)
    } else {
        Err(PathError::ClassViolation(t))
    }
}
