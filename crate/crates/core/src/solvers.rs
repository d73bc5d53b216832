//! MWIS solvers built on the disperser machinery.
//!
//! - [`mwis_bruteforce`]: branch-and-bound ground truth at desk scale
//! - [`qptas`]: the approximation recursion over good dispersers
//! - [`subexp_exact`]: the exact recursion over uniform dispersers
//! - [`mwis_hfree_approx`] / [`mwis_hfree_exact`]: wrappers for a general
//!   forbidden pattern whose components are paths and subdivided claws
//! - [`treedecomp_longhole`]: tree decompositions of long-hole-free graphs

use crate::assembly::{assemble, AssemblyError, AssemblyInput};
use crate::dispersers::{
    disperser_lget, disperser_yget, heavy_bound, independent_sets, strong_disperser_longhole,
    strong_disperser_pt, uniform_disperser, Disperser, DisperserEntry, DisperserError,
};
use crate::esd::{atoms, restrict_esd, AtomKind};
use crate::graph::{
    find_induced_copy_capped, freeness_check, Graph, GraphClass, GraphError, Vertex, VertexSet,
    WeightFn,
};
use crate::pathfinder::{long_hole_select, PathError};
use crate::ratio::{ceil_log2, BigRatio, Ratio};
use num_bigint::BigUint;
use std::collections::BTreeMap;
use std::time::Instant;

/// Largest instance the brute-force baseline accepts (per connected
/// component the search is exponential in the component size).
pub const BRUTE_CAP: usize = 24;

/// Largest separator / pattern-neighborhood over which independent
/// subsets are enumerated exhaustively.
const SUBSET_CAP: usize = 20;

/// Pattern-size cap for induced-copy searches in the wrapper solvers.
const EMBED_CAP: usize = 16;

#[derive(Debug, thiserror::Error)]
pub enum SolveError {
    #[error("instance size {n} exceeds the exhaustive-search cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("all weights are zero")]
    ZeroWeight,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("malformed pattern: {0}")]
    Pattern(String),
    #[error(transparent)]
    Disperser(#[from] DisperserError),
    #[error(transparent)]
    Assembly(#[from] AssemblyError),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Counters shared by every solver.
#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SolveStats {
    /// Recursion-tree nodes visited.
    pub nodes: u64,
    /// Maximum recursion depth reached.
    pub depth: usize,
    /// Matching-based assemblies performed.
    pub matching_calls: u64,
    /// Degree branches taken because no uniform disperser was available.
    pub fallback_branches: u64,
    /// Wall time of the top-level call, in milliseconds.
    pub wall_ms: u128,
}

impl SolveStats {
    fn absorb(&mut self, other: &SolveStats) {
        self.nodes += other.nodes;
        self.depth = self.depth.max(other.depth);
        self.matching_calls += other.matching_calls;
        self.fallback_branches += other.fallback_branches;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SolveResult {
    pub set: VertexSet,
    pub weight: u64,
    pub stats: SolveStats,
}

fn finish(g: &Graph, w: &WeightFn, set: VertexSet, mut stats: SolveStats, t0: Instant) -> SolveResult {
    debug_assert!(g.is_independent(&set), "solver produced a dependent set");
    stats.wall_ms = t0.elapsed().as_millis();
    SolveResult {
        weight: w.total(&set),
        set,
        stats,
    }
}

/// Maps new-id sets back through the `induced` name table.
fn unmap(names: &[Vertex], s: &VertexSet) -> VertexSet {
    s.iter().map(|&v| names[v]).collect()
}

/// Inverse name table: original vertex -> induced-subgraph vertex.
fn to_local(names: &[Vertex]) -> BTreeMap<Vertex, Vertex> {
    names.iter().enumerate().map(|(i, &v)| (v, i)).collect()
}

fn edgeless_within(g: &Graph, s: &VertexSet) -> bool {
    s.iter().all(|&v| g.neighbors(v).is_disjoint(s))
}

// ---------------------------------------------------------------------------
// Brute force
// ---------------------------------------------------------------------------

/// Exact optimum by branch-and-bound with component splitting. Deterministic
/// tie-break: within each connected component the optimal set that is
/// smallest in the standard set ordering is kept, and the per-component
/// choices are united.
pub fn mwis_bruteforce(g: &Graph, w: &WeightFn) -> Result<SolveResult, SolveError> {
    mwis_bruteforce_capped(g, w, BRUTE_CAP)
}

pub fn mwis_bruteforce_capped(
    g: &Graph,
    w: &WeightFn,
    cap: usize,
) -> Result<SolveResult, SolveError> {
    if g.n() > cap {
        return Err(SolveError::CapExceeded { n: g.n(), cap });
    }
    let t0 = Instant::now();
    let mut stats = SolveStats::default();
    let mut set = VertexSet::new();
    for comp in g.connected_components() {
        let (sub, names) = g.induced(&comp);
        let ws = w.restrict(&names);
        let rest: u64 = ws.total_all();
        let mut best: Option<(u64, Vec<Vertex>)> = None;
        let mut cur: Vec<Vertex> = vec![];
        branch_bound(&sub, &ws, 0, &mut cur, 0, rest, &mut best, &mut stats.nodes);
        let (_, chosen) = best.expect("search visits at least the empty set");
        set.extend(chosen.into_iter().map(|v| names[v]));
    }
    Ok(finish(g, w, set, stats, t0))
}

#[allow(clippy::too_many_arguments)]
fn branch_bound(
    g: &Graph,
    w: &WeightFn,
    idx: usize,
    cur: &mut Vec<Vertex>,
    cur_w: u64,
    rest: u64,
    best: &mut Option<(u64, Vec<Vertex>)>,
    nodes: &mut u64,
) {
    *nodes += 1;
    if let Some((bw, bs)) = best {
        // Strict pruning only, so equal-weight candidates still reach the
        // leaf comparison and the set tie-break below stays exact.
        if cur_w + rest < *bw || (cur_w + rest == *bw && !bs.is_empty() && cur.get(0) > bs.get(0)) {
            return;
        }
    }
    if idx == g.n() {
        let replace = match best {
            None => true,
            Some((bw, bs)) => cur_w > *bw || (cur_w == *bw && cur < bs),
        };
        if replace {
            *best = Some((cur_w, cur.clone()));
        }
        return;
    }
    let rest2 = rest - w.get(idx);
    if cur.iter().all(|&u| !g.has_edge(u, idx)) {
        cur.push(idx);
        branch_bound(g, w, idx + 1, cur, cur_w + w.get(idx), rest2, best, nodes);
        cur.pop();
    }
    branch_bound(g, w, idx + 1, cur, cur_w, rest2, best, nodes);
}

// ---------------------------------------------------------------------------
// Weight rescaling for the approximation scheme
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct RescaleCertificate {
    pub max_before: u64,
    /// The value the maximum weight is mapped to: n / eps.
    pub target: u64,
    pub max_after: u64,
    /// Vertices with positive rescaled weight.
    pub kept: usize,
    /// Vertices whose weight floored to zero.
    pub dropped: usize,
}

fn unit_fraction(eps: Ratio, what: &str) -> Result<i64, SolveError> {
    if !eps.is_positive() || eps.num() != 1 {
        return Err(SolveError::Precondition(format!(
            "{what} must be a positive unit fraction 1/k, got {eps}"
        )));
    }
    Ok(eps.den())
}

/// Rescales so the maximum weight becomes exactly n/eps, then floors.
/// Floored-to-zero vertices cost at most an eps fraction of the optimum.
pub fn rescale_weights(
    g: &Graph,
    w: &WeightFn,
    eps: Ratio,
) -> Result<(WeightFn, RescaleCertificate), SolveError> {
    let k = unit_fraction(eps, "rescale parameter")?;
    let max_before = g.vertices().map(|v| w.get(v)).max().unwrap_or(0);
    if max_before == 0 {
        return Err(SolveError::ZeroWeight);
    }
    let target = (g.n() as u64) * (k as u64);
    let mut out = vec![0u64; g.n()];
    let (mut kept, mut dropped) = (0usize, 0usize);
    for v in g.vertices() {
        let scaled = (w.get(v) as u128 * target as u128) / max_before as u128;
        out[v] = scaled as u64;
        if out[v] > 0 {
            kept += 1;
        } else {
            dropped += 1;
        }
    }
    let max_after = out.iter().copied().max().unwrap_or(0);
    debug_assert_eq!(max_after, target);
    Ok((
        WeightFn::new(out),
        RescaleCertificate {
            max_before,
            target,
            max_after,
            kept,
            dropped,
        },
    ))
}

// ---------------------------------------------------------------------------
// Approximation scheme
// ---------------------------------------------------------------------------

/// Parameters of one approximation run, all derived from the user epsilon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QptasConfig {
    /// User-facing accuracy parameter.
    pub eps: Ratio,
    /// Internal accuracy after dividing by the slack factor.
    pub eps_internal: Ratio,
    pub class: GraphClass,
    /// Initial solution-mass bound n^2 / eps_internal.
    pub m: u64,
    /// Safety parameter eps_internal / (1 + ceil(log2 m)).
    pub gamma: Ratio,
    /// The factor between user and internal epsilon (default 4).
    pub slack: i64,
}

pub fn qptas_config(
    g: &Graph,
    eps: Ratio,
    class: &GraphClass,
    slack: i64,
) -> Result<QptasConfig, SolveError> {
    unit_fraction(eps, "epsilon")?;
    assert!(slack >= 1);
    let eps_internal = eps.div_int(slack);
    let n = g.n().max(1) as u64;
    let m = n * n * eps_internal.den() as u64;
    let gamma = eps_internal.div_int(1 + ceil_log2(m.max(1)) as i64);
    Ok(QptasConfig {
        eps,
        eps_internal,
        class: class.clone(),
        m,
        gamma,
        slack,
    })
}

fn class_disperser(
    sub: &Graph,
    gamma: Ratio,
    class: &GraphClass,
) -> Result<Disperser, SolveError> {
    Ok(match class {
        GraphClass::Pt(t) => strong_disperser_pt(sub, gamma, *t)?,
        GraphClass::CgeT(t) => strong_disperser_longhole(sub, gamma, *t)?,
        GraphClass::YgeT(t) => disperser_yget(sub, gamma, *t)?,
        GraphClass::LgeT(t) => disperser_lget(sub, gamma, *t)?,
        GraphClass::ExplicitH(_) => {
            return Err(SolveError::Precondition(
                "no disperser builder for explicit patterns; use the wrapper solvers".into(),
            ))
        }
    })
}

struct QptasCtx<'a> {
    g: &'a Graph,
    w: &'a WeightFn,
    gamma: Ratio,
    class: &'a GraphClass,
    /// Per vertex set: the largest mass bound already answered, and the set
    /// returned for it. Valid for any smaller bound as well.
    memo: BTreeMap<VertexSet, (BigRatio, VertexSet)>,
    stats: SolveStats,
}

/// Approximation scheme for the disperser classes. The guarantee is
/// (1 - eps) * OPT against the user epsilon after the internal rescaling by
/// `slack` (default 4 via [`qptas`]).
pub fn qptas(
    g: &Graph,
    w: &WeightFn,
    eps: Ratio,
    class: &GraphClass,
) -> Result<SolveResult, SolveError> {
    qptas_with(g, w, eps, class, 4)
}

pub fn qptas_with(
    g: &Graph,
    w: &WeightFn,
    eps: Ratio,
    class: &GraphClass,
    slack: i64,
) -> Result<SolveResult, SolveError> {
    let t0 = Instant::now();
    let cfg = qptas_config(g, eps, class, slack)?;
    if g.vertices().all(|v| w.get(v) == 0) {
        return Ok(finish(g, w, VertexSet::new(), SolveStats::default(), t0));
    }
    let (w2, _cert) = rescale_weights(g, w, cfg.eps_internal)?;
    let live: VertexSet = g.vertices().filter(|&v| w2.get(v) > 0).collect();
    let mut ctx = QptasCtx {
        g,
        w: &w2,
        gamma: cfg.gamma,
        class,
        memo: BTreeMap::new(),
        stats: SolveStats::default(),
    };
    let set = qptas_rec(&mut ctx, live, BigRatio::from_integer(cfg.m), 0)?;
    let stats = ctx.stats;
    Ok(finish(g, w, set, stats, t0))
}

fn qptas_rec(
    ctx: &mut QptasCtx<'_>,
    s: VertexSet,
    mut m: BigRatio,
    depth: usize,
) -> Result<VertexSet, SolveError> {
    ctx.stats.nodes += 1;
    ctx.stats.depth = ctx.stats.depth.max(depth);
    if s.is_empty() {
        return Ok(s);
    }
    // Mass inside s can never exceed its total weight; capping keeps the
    // memo reusable across callers with inflated bounds.
    m = m.min(BigRatio::from_integer(ctx.w.total(&s)));
    if m.lt_one() {
        return Ok(VertexSet::new());
    }
    if edgeless_within(ctx.g, &s) {
        return Ok(s);
    }
    if let Some((cached_m, cached)) = ctx.memo.get(&s) {
        if *cached_m >= m {
            return Ok(cached.clone());
        }
    }
    let (sub, names) = ctx.g.induced(&s);
    let ws = ctx.w.restrict(&names);
    let local = to_local(&names);
    let disp = class_disperser(&sub, ctx.gamma, ctx.class)?;
    let delta = disp.params.delta;
    let m_child = m.mul_one_minus_pow(delta.base, delta.pow);
    let mut best = VertexSet::new();
    for entry in &disp.entries {
        let mut per_atom: BTreeMap<AtomKind, VertexSet> = BTreeMap::new();
        for atom in atoms(&sub, &entry.esd) {
            let orig = unmap(&names, &atom.vertices);
            // An atom equal to the whole instance makes no progress; a good
            // entry never needs solution mass from such an atom, so it is
            // treated as empty.
            let chosen = if orig.is_empty() || orig == s {
                VertexSet::new()
            } else {
                let inner = qptas_rec(ctx, orig, m_child.clone(), depth + 1)?;
                inner.iter().map(|v| local[v]).collect()
            };
            per_atom.insert(atom.kind, chosen);
        }
        let out = assemble(&AssemblyInput {
            g: &sub,
            w: &ws,
            d: &entry.esd,
            per_atom: &per_atom,
        })?;
        ctx.stats.matching_calls += 1;
        let candidate = unmap(&names, &out.result);
        if ctx.w.total(&candidate) > ctx.w.total(&best) {
            best = candidate;
        }
    }
    match ctx.memo.get(&s) {
        Some((cached_m, _)) if *cached_m >= m => {}
        _ => {
            ctx.memo.insert(s, (m, best.clone()));
        }
    }
    Ok(best)
}

// ---------------------------------------------------------------------------
// Subexponential exact recursion
// ---------------------------------------------------------------------------

/// Per-class parameters of the exact recursion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubexpConfig {
    /// Uniformity exponent.
    pub xi: Ratio,
    /// Degree-branch threshold factor: branch while |N[v]| > tau * n^xi.
    pub tau: Ratio,
    /// Brute-force cutoff; chosen as the least power 3^(1/xi) so that
    /// n0^p >= 3^q certifies n0 > e^(1/xi) in exact integers.
    pub n0: u128,
}

pub fn subexp_config(class: &GraphClass) -> Result<SubexpConfig, SolveError> {
    let cfg = match class {
        GraphClass::Pt(t) | GraphClass::CgeT(t) => {
            let lo = if matches!(class, GraphClass::Pt(_)) { 2 } else { 4 };
            if *t < lo {
                return Err(SolveError::Precondition(format!(
                    "class parameter must be at least {lo}, got {t}"
                )));
            }
            SubexpConfig {
                xi: Ratio::new(1, 2),
                tau: Ratio::new(1, 4 * (*t as i64 - 1)),
                n0: 9,
            }
        }
        GraphClass::YgeT(_) => SubexpConfig {
            xi: Ratio::new(1, 9),
            tau: Ratio::one(),
            n0: 3u128.pow(9),
        },
        GraphClass::LgeT(_) => SubexpConfig {
            xi: Ratio::new(1, 41),
            tau: Ratio::one(),
            n0: 3u128.pow(41),
        },
        GraphClass::ExplicitH(_) => {
            return Err(SolveError::Precondition(
                "no uniform disperser for explicit patterns; use the wrapper solvers".into(),
            ))
        }
    };
    debug_assert!({
        let p = cfg.xi.num() as u32;
        let q = cfg.xi.den() as u32;
        BigUint::from(cfg.n0).pow(p) >= BigUint::from(3u8).pow(q)
    });
    Ok(cfg)
}

/// Exact test of |N[v]| > tau * n^xi in integers.
fn exceeds_degree_threshold(closed_deg: usize, n: usize, tau: Ratio, xi: Ratio) -> bool {
    let (a, b) = (tau.num() as u32, tau.den() as u32);
    let (p, q) = (xi.num() as u32, xi.den() as u32);
    // tau = a/b: (b |N[v]|)^q > a^q n^p  <=>  |N[v]| > (a/b) n^(p/q).
    let lhs = (BigUint::from(b) * BigUint::from(closed_deg)).pow(q);
    let rhs = BigUint::from(a).pow(q) * BigUint::from(n).pow(p);
    lhs > rhs
}

/// All independent subsets of `x` in `g`, the empty set included.
fn independent_subsets(g: &Graph, x: &VertexSet) -> Result<Vec<VertexSet>, SolveError> {
    if x.len() > SUBSET_CAP {
        return Err(SolveError::CapExceeded {
            n: x.len(),
            cap: SUBSET_CAP,
        });
    }
    let elems: Vec<Vertex> = x.iter().copied().collect();
    let mut out = vec![];
    for mask in 0u32..(1u32 << elems.len()) {
        let cand: VertexSet = elems
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &v)| v)
            .collect();
        if g.is_independent(&cand) {
            out.push(cand);
        }
    }
    Ok(out)
}

/// Exact solver for the disperser classes. Equals [`mwis_bruteforce`] in
/// value on every instance where both run.
pub fn subexp_exact(g: &Graph, w: &WeightFn, class: &GraphClass) -> Result<SolveResult, SolveError> {
    let provider = |sub: &Graph| uniform_disperser(sub, class);
    subexp_exact_with(g, w, class, &provider)
}

/// Variant taking an explicit uniform-disperser source, so the
/// entry-processing path can be exercised with hand-built entries.
pub fn subexp_exact_with(
    g: &Graph,
    w: &WeightFn,
    class: &GraphClass,
    provider: &dyn Fn(&Graph) -> Result<DisperserEntry, DisperserError>,
) -> Result<SolveResult, SolveError> {
    let cfg = subexp_config(class)?;
    subexp_exact_configured(g, w, &cfg, provider)
}

/// Variant taking explicit recursion parameters.
pub fn subexp_exact_configured(
    g: &Graph,
    w: &WeightFn,
    cfg: &SubexpConfig,
    provider: &dyn Fn(&Graph) -> Result<DisperserEntry, DisperserError>,
) -> Result<SolveResult, SolveError> {
    let t0 = Instant::now();
    let mut stats = SolveStats::default();
    let set = subexp_rec(g, w, cfg, provider, &mut stats, g.vertex_set(), 0)?;
    Ok(finish(g, w, set, stats, t0))
}

fn subexp_rec(
    g: &Graph,
    w: &WeightFn,
    cfg: &SubexpConfig,
    provider: &dyn Fn(&Graph) -> Result<DisperserEntry, DisperserError>,
    stats: &mut SolveStats,
    s: VertexSet,
    depth: usize,
) -> Result<VertexSet, SolveError> {
    stats.nodes += 1;
    stats.depth = stats.depth.max(depth);
    if s.is_empty() {
        return Ok(s);
    }
    let n = s.len();
    let comps = g.components_within(&s);
    if comps.len() > 1 {
        let mut out = VertexSet::new();
        for c in comps {
            out.extend(subexp_rec(g, w, cfg, provider, stats, c, depth + 1)?);
        }
        return Ok(out);
    }
    if n as u128 <= cfg.n0 {
        let (sub, names) = g.induced(&s);
        let ws = w.restrict(&names);
        let r = mwis_bruteforce(&sub, &ws)?;
        stats.nodes += r.stats.nodes;
        return Ok(unmap(&names, &r.set));
    }
    // Degree branch: while some closed neighborhood is large, split on it.
    let big = s.iter().copied().find(|&v| {
        let closed = g.closed_neighborhood_of(v).intersection(&s).count();
        exceeds_degree_threshold(closed, n, cfg.tau, cfg.xi)
    });
    if let Some(v) = big {
        return branch_vertex(g, w, cfg, provider, stats, &s, v, depth);
    }
    let (sub, names) = g.induced(&s);
    let ws = w.restrict(&names);
    let local = to_local(&names);
    match provider(&sub) {
        Ok(entry) => {
            let mut best = VertexSet::new();
            for y in independent_subsets(&sub, &entry.x)? {
                let removed: VertexSet = entry
                    .x
                    .union(&sub.closed_neighborhood(&y))
                    .copied()
                    .collect();
                let d_y = restrict_esd(&sub, &entry.esd, &removed);
                let mut per_atom: BTreeMap<AtomKind, VertexSet> = BTreeMap::new();
                for atom in atoms(&sub, &d_y) {
                    let orig = unmap(&names, &atom.vertices);
                    let inner = if orig.is_empty() {
                        VertexSet::new()
                    } else {
                        subexp_rec(g, w, cfg, provider, stats, orig, depth + 1)?
                    };
                    per_atom.insert(atom.kind, inner.iter().map(|v| local[v]).collect());
                }
                let out = assemble(&AssemblyInput {
                    g: &sub,
                    w: &ws,
                    d: &d_y,
                    per_atom: &per_atom,
                })?;
                stats.matching_calls += 1;
                let mut candidate = unmap(&names, &out.result);
                candidate.extend(y.iter().map(|&v| names[v]));
                debug_assert!(g.is_independent(&candidate));
                if w.total(&candidate) > w.total(&best) {
                    best = candidate;
                }
            }
            Ok(best)
        }
        Err(_) => {
            // No uniform disperser available (constructive gap): fall back
            // to branching on a maximum-degree vertex. Exactness is kept;
            // only the running-time claim is lost, so the event is counted.
            stats.fallback_branches += 1;
            let v = s
                .iter()
                .copied()
                .max_by_key(|&v| (g.neighbors(v).intersection(&s).count(), std::cmp::Reverse(v)))
                .expect("nonempty instance");
            branch_vertex(g, w, cfg, provider, stats, &s, v, depth)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn branch_vertex(
    g: &Graph,
    w: &WeightFn,
    cfg: &SubexpConfig,
    provider: &dyn Fn(&Graph) -> Result<DisperserEntry, DisperserError>,
    stats: &mut SolveStats,
    s: &VertexSet,
    v: Vertex,
    depth: usize,
) -> Result<VertexSet, SolveError> {
    let without: VertexSet = s.iter().copied().filter(|&u| u != v).collect();
    let excl = subexp_rec(g, w, cfg, provider, stats, without, depth + 1)?;
    let closed = g.closed_neighborhood_of(v);
    let rest: VertexSet = s.difference(&closed).copied().collect();
    let mut incl = subexp_rec(g, w, cfg, provider, stats, rest, depth + 1)?;
    incl.insert(v);
    if w.total(&incl) > w.total(&excl) {
        Ok(incl)
    } else {
        Ok(excl)
    }
}

// ---------------------------------------------------------------------------
// Wrappers for a general forbidden pattern
// ---------------------------------------------------------------------------

/// Validates that every component of the pattern is a path or a subdivided
/// claw and returns the leg length of a single subdivided claw that contains
/// every component as an induced subgraph.
pub fn covering_claw_legs(h: &Graph) -> Result<usize, SolveError> {
    if h.n() == 0 {
        return Err(SolveError::Pattern("pattern has no vertices".into()));
    }
    let mut legs = 1usize;
    for comp in h.connected_components() {
        let (sub, _) = h.induced(&comp);
        if sub.m() + 1 != sub.n() {
            return Err(SolveError::Pattern(
                "a pattern component contains a cycle".into(),
            ));
        }
        if sub.vertices().any(|v| sub.degree(v) > 3) {
            return Err(SolveError::Pattern(
                "a pattern component has a vertex of degree four or more".into(),
            ));
        }
        let centers: Vec<Vertex> = sub.vertices().filter(|&v| sub.degree(v) == 3).collect();
        match centers.len() {
            0 => {
                // A path on p vertices embeds through the claw center using
                // two legs of length ceil((p-1)/2).
                let p = sub.n();
                legs = legs.max((p - 1).div_ceil(2));
            }
            1 => {
                let c = centers[0];
                for &first in sub.neighbors(c) {
                    let mut len = 1;
                    let (mut prev, mut cur) = (c, first);
                    while let Some(&next) =
                        sub.neighbors(cur).iter().find(|&&u| u != prev)
                    {
                        prev = cur;
                        cur = next;
                        len += 1;
                    }
                    legs = legs.max(len);
                }
            }
            _ => {
                return Err(SolveError::Pattern(
                    "a pattern component has two branch vertices".into(),
                ));
            }
        }
    }
    Ok(legs)
}

/// Greedy maximal family of pattern components simultaneously induced in
/// `g`, returned as the image vertex set of one embedding of their union.
fn maximal_component_embedding(g: &Graph, h: &Graph) -> Result<VertexSet, SolveError> {
    let mut chosen = VertexSet::new();
    for comp in h.connected_components() {
        let trial: VertexSet = chosen.union(&comp).copied().collect();
        let (pat, _) = h.induced(&trial);
        if find_induced_copy_capped(g, &pat, EMBED_CAP)?.is_some() {
            chosen = trial;
        }
    }
    if chosen.is_empty() {
        return Ok(VertexSet::new());
    }
    let (pat, _) = h.induced(&chosen);
    let image = find_induced_copy_capped(g, &pat, EMBED_CAP)?
        .expect("embedding found a moment ago");
    Ok(image.into_iter().collect())
}

fn require_pattern_free(g: &Graph, h: &Graph) -> Result<(), SolveError> {
    let (free, witness) = freeness_check(g, &GraphClass::ExplicitH(h.clone()));
    if free {
        Ok(())
    } else {
        Err(SolveError::Precondition(format!(
            "input contains the forbidden pattern on vertices {witness:?}"
        )))
    }
}

/// Approximation wrapper for an arbitrary forbidden pattern whose
/// components are paths and subdivided claws.
pub fn mwis_hfree_approx(
    g: &Graph,
    w: &WeightFn,
    eps: Ratio,
    h: &Graph,
) -> Result<SolveResult, SolveError> {
    unit_fraction(eps, "epsilon")?;
    let legs = covering_claw_legs(h)?;
    require_pattern_free(g, h)?;
    let t0 = Instant::now();
    let mut stats = SolveStats::default();
    if g.vertices().all(|v| w.get(v) == 0) {
        return Ok(finish(g, w, VertexSet::new(), stats, t0));
    }
    let beta = eps.div_int(2 * h.n() as i64);
    let j_cap = heavy_bound(beta, g.n()).min(g.n());
    let inner_class = GraphClass::YgeT(legs);
    let mut best = VertexSet::new();
    for j in independent_sets(g, j_cap) {
        stats.nodes += 1;
        let gprime: VertexSet = {
            let nj = g.closed_neighborhood(&j);
            g.vertices().filter(|v| !nj.contains(v)).collect()
        };
        let (gp, names) = g.induced(&gprime);
        let x = maximal_component_embedding(&gp, h)?;
        let nx = gp.closed_neighborhood(&x);
        let gpp_set: VertexSet = gp.vertices().filter(|v| !nx.contains(v)).collect();
        let (gpp, names2) = gp.induced(&gpp_set);
        let names2_orig: Vec<Vertex> = names2.iter().map(|&v| names[v]).collect();
        let wpp = w.restrict(&names2_orig);
        let r = qptas(&gpp, &wpp, eps.div_int(2), &inner_class)?;
        stats.absorb(&r.stats);
        let mut candidate = unmap(&names2_orig, &r.set);
        candidate.extend(j.iter().copied());
        debug_assert!(g.is_independent(&candidate));
        if w.total(&candidate) > w.total(&best) {
            best = candidate;
        }
    }
    Ok(finish(g, w, best, stats, t0))
}

/// Exact wrapper for an arbitrary forbidden pattern whose components are
/// paths and subdivided claws.
///
/// Unlike the approximation wrapper, pattern-freeness is not enforced:
/// every ingredient of the recursion (branching, exhaustive enumeration,
/// and the exact inner solver with its branching fallback) stays exact on
/// arbitrary inputs, so a stray pattern copy costs time, not correctness.
pub fn mwis_hfree_exact(g: &Graph, w: &WeightFn, h: &Graph) -> Result<SolveResult, SolveError> {
    let legs = covering_claw_legs(h)?;
    let t0 = Instant::now();
    let mut stats = SolveStats::default();
    let set = hfree_exact_rec(g, w, h, legs, &mut stats, g.vertex_set(), 0)?;
    Ok(finish(g, w, set, stats, t0))
}

fn hfree_exact_rec(
    g: &Graph,
    w: &WeightFn,
    h: &Graph,
    legs: usize,
    stats: &mut SolveStats,
    s: VertexSet,
    depth: usize,
) -> Result<VertexSet, SolveError> {
    stats.nodes += 1;
    stats.depth = stats.depth.max(depth);
    if s.is_empty() || edgeless_within(g, &s) {
        return Ok(s);
    }
    let comps = g.components_within(&s);
    if comps.len() > 1 {
        let mut out = VertexSet::new();
        for c in comps {
            out.extend(hfree_exact_rec(g, w, h, legs, stats, c, depth + 1)?);
        }
        return Ok(out);
    }
    let n = s.len();
    // Branch while some vertex has |N[v]| > n^(1/9), i.e. |N[v]|^9 > n.
    let big = s.iter().copied().find(|&v| {
        let closed = g.closed_neighborhood_of(v).intersection(&s).count();
        BigUint::from(closed).pow(9) > BigUint::from(n)
    });
    if let Some(v) = big {
        let without: VertexSet = s.iter().copied().filter(|&u| u != v).collect();
        let excl = hfree_exact_rec(g, w, h, legs, stats, without, depth + 1)?;
        let closed = g.closed_neighborhood_of(v);
        let rest: VertexSet = s.difference(&closed).copied().collect();
        let mut incl = hfree_exact_rec(g, w, h, legs, stats, rest, depth + 1)?;
        incl.insert(v);
        return Ok(if w.total(&incl) > w.total(&excl) { incl } else { excl });
    }
    // Low-degree regime: peel a maximal embedded component family, then
    // the remainder past its neighborhood avoids the covering claw.
    let (sub, names) = g.induced(&s);
    let ws = w.restrict(&names);
    let x = maximal_component_embedding(&sub, h)?;
    let nx = sub.closed_neighborhood(&x);
    debug_assert!(
        BigUint::from(nx.len()).pow(9) < BigUint::from(n) * BigUint::from(h.n()).pow(9),
        "pattern neighborhood exceeds the degree-regime bound"
    );
    let inner_class = GraphClass::YgeT(legs);
    let mut best = VertexSet::new();
    for z in independent_subsets(&sub, &nx)? {
        let removed: VertexSet = nx.union(&sub.closed_neighborhood(&z)).copied().collect();
        let rest: VertexSet = sub.vertices().filter(|v| !removed.contains(v)).collect();
        let (grest, names2) = sub.induced(&rest);
        let wrest = ws.restrict(&names2);
        let r = subexp_exact(&grest, &wrest, &inner_class)?;
        stats.absorb(&r.stats);
        let mut candidate: VertexSet = r.set.iter().map(|&v| names[names2[v]]).collect();
        candidate.extend(z.iter().map(|&v| names[v]));
        debug_assert!(g.is_independent(&candidate));
        if w.total(&candidate) > w.total(&best) {
            best = candidate;
        }
    }
    Ok(best)
}

// ---------------------------------------------------------------------------
// Tree decompositions of long-hole-free graphs
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub tree: Graph,
    /// One bag per tree vertex, by index.
    pub bags: Vec<VertexSet>,
    /// Largest bag size minus one.
    pub width: usize,
}

/// Checks vertex coverage, edge coverage and the connected-subtree property.
pub fn validate_treedecomp(g: &Graph, td: &TreeDecomposition) -> bool {
    let t = &td.tree;
    if td.bags.len() != t.n() || t.n() == 0 {
        return false;
    }
    if !t.is_connected() || t.m() + 1 != t.n() {
        return false;
    }
    let width = td.bags.iter().map(|b| b.len()).max().unwrap_or(0).saturating_sub(1);
    if width != td.width {
        return false;
    }
    for v in g.vertices() {
        let holders: VertexSet = (0..td.bags.len())
            .filter(|&i| td.bags[i].contains(&v))
            .collect();
        if holders.is_empty() || t.components_within(&holders).len() != 1 {
            return false;
        }
    }
    g.edges()
        .iter()
        .all(|&(u, v)| td.bags.iter().any(|b| b.contains(&u) && b.contains(&v)))
}

/// Builds a tree decomposition of a graph with no induced cycle on t or
/// more vertices. Each bag is the interface inherited from the parent plus
/// a separator formed from at most three balanced path neighborhoods, so a
/// bag holds at most a small multiple of (t-1)(maxdeg+1) vertices.
pub fn treedecomp_longhole(g: &Graph, t: usize) -> Result<TreeDecomposition, SolveError> {
    assert!(t >= 4, "hole length threshold must be at least 4");
    let mut bags: Vec<VertexSet> = vec![];
    let mut edges: Vec<(usize, usize)> = vec![];
    let mut roots: Vec<usize> = vec![];
    for comp in g.connected_components() {
        let root = td_rec(g, t, &comp, &VertexSet::new(), None, &mut bags, &mut edges)?;
        roots.push(root);
    }
    if bags.is_empty() {
        bags.push(VertexSet::new());
    }
    for pair in roots.windows(2) {
        edges.push((pair[0], pair[1]));
    }
    let mut tree = Graph::new(bags.len());
    for (a, b) in edges {
        tree.add_edge(a, b);
    }
    let width = bags.iter().map(|b| b.len()).max().unwrap_or(0).saturating_sub(1);
    let td = TreeDecomposition { tree, bags, width };
    debug_assert!(validate_treedecomp(g, &td));
    Ok(td)
}

fn td_rec(
    g: &Graph,
    t: usize,
    comp: &VertexSet,
    interface: &VertexSet,
    parent: Option<usize>,
    bags: &mut Vec<VertexSet>,
    edges: &mut Vec<(usize, usize)>,
) -> Result<usize, SolveError> {
    // Adversarial weighting concentrated on the working set: vertices
    // attached to the interface dominate plain ones.
    let wt = |v: Vertex| -> u64 { 1 + g.neighbors(v).intersection(interface).count() as u64 };
    let total: u64 = comp.iter().map(|&v| wt(v)).sum();
    let mut x = VertexSet::new();
    // Each balanced separator shrinks the heaviest remainder by 3/4, so
    // after three rounds every remainder is below half of the total.
    for _round in 0..3 {
        let rest: VertexSet = comp.difference(&x).copied().collect();
        let heavy = g
            .components_within(&rest)
            .into_iter()
            .find(|c| 2 * c.iter().map(|&v| wt(v)).sum::<u64>() > total);
        let Some(heavy) = heavy else { break };
        let (sub, names) = g.induced(&heavy);
        let wsub = WeightFn::new(names.iter().map(|&v| wt(v)).collect());
        let cert = long_hole_select(&sub, t, &wsub)?;
        let path: VertexSet = cert.path.vertices.iter().copied().collect();
        x.extend(sub.closed_neighborhood(&path).iter().map(|&v| names[v]));
    }
    let bag: VertexSet = interface.union(&x).copied().collect();
    let idx = bags.len();
    bags.push(bag);
    if let Some(p) = parent {
        edges.push((p, idx));
    }
    let rest: VertexSet = comp.difference(&x).copied().collect();
    for d in g.components_within(&rest) {
        let child_iface = g.open_neighborhood(&d);
        debug_assert!(child_iface.is_subset(&interface.union(&x).copied().collect()));
        td_rec(g, t, &d, &child_iface, Some(idx), bags, edges)?;
    }
    Ok(idx)
}
