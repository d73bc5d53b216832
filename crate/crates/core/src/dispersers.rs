//! Disperser families: weight-balanced cut/decomposition pairs.
//!
//! A disperser is a weight-oblivious family of entries (X, esd) such that
//! for every independent set carrying positive weight, some entry is "good":
//! every nontrivial atom loses a delta fraction of the weight (shrinking),
//! and the deleted set X is light relative to the whole graph and to the
//! complement of each nontrivial atom (safe). Dispersers drive the
//! approximation scheme; size-based ("uniform") single entries drive the
//! subexponential exact solver.
//!
//! The builders all follow the same two-stage shape: guess a small
//! independent set J whose closed neighborhood dominates the heavy vertices
//! (heavy = capturing a beta fraction of the independent set's weight; a
//! cover of logarithmic size always exists), take X = N(J), and if some
//! component of the remainder is still heavy, refine it with an inner
//! per-component family -- induced-path separators for graphs with no long
//! induced path or hole, the claw or lobster pipelines for graphs with no
//! long subdivided claw or lobster. Enumerating every choice makes the
//! result oblivious to the weights.

use std::collections::BTreeSet;

use num_bigint::BigUint;

use crate::esd::{atoms, partition_esd, relabel_esd, Esd};
use crate::graph::{Graph, GraphClass, Vertex, VertexSet, WeightFn};
use crate::pathfinder::{
    gyarfas_family, gyarfas_select, long_hole_family, long_hole_select, GyarfasPath, PathError,
};
use crate::ratio::{ge_root, le_frac, le_one_minus_frac_pow, lt_frac, Ratio};
use crate::tree_oracle::{
    augment_isolated, find_claw, find_lobster, ClawResult, LobsterResult, OracleError, SigmaParams,
};

/// One candidate cut: a deletion set X together with a decomposition of the
/// remaining graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisperserEntry {
    pub x: VertexSet,
    pub esd: Esd,
}

/// A rational raised to a power, kept factored so that thresholds like
/// gamma^40 stay exactly representable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RatioPow {
    pub base: Ratio,
    pub pow: u32,
}

impl RatioPow {
    pub fn new(base: Ratio, pow: u32) -> Self {
        assert!(pow >= 1);
        RatioPow { base, pow }
    }

    pub fn linear(base: Ratio) -> Self {
        Self::new(base, 1)
    }

    /// Lossy, for display only; never used in a gate.
    pub fn approx(&self) -> f64 {
        self.base.to_f64().powi(self.pow as i32)
    }
}

/// Parameters a builder guarantees for its output family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DisperserParams {
    /// Safety budget for the deleted set.
    pub gamma: Ratio,
    /// Shrinking guarantee: every nontrivial atom of a good entry weighs at
    /// most (1 - delta) of the total.
    pub delta: RatioPow,
    /// Uniformity exponent achievable for the class (size-based entries).
    pub xi: Ratio,
    /// Degree-bound coefficient for the uniform construction.
    pub tau: Ratio,
    /// Smallest instance size at which the uniform construction applies.
    pub n0: u64,
    /// Heavy-vertex threshold backing the guess step; the guessed set is
    /// bounded by the cover guarantee for half this value.
    pub beta: RatioPow,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disperser {
    pub entries: Vec<DisperserEntry>,
    pub params: DisperserParams,
    /// Every entry's decomposition has an edgeless pattern (a pure component
    /// partition), so atoms never need further decomposition downstream.
    pub strong: bool,
    /// Inner-pipeline branches that failed constructively while building.
    pub constructive_failures: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DisperserError {
    #[error("the designated independent set carries zero weight")]
    ZeroWeight,
    #[error("the designated set is not independent")]
    NotIndependent,
    #[error("no cover of the heavy vertices within the guaranteed bound {bound}")]
    CoverBoundExceeded { bound: usize },
    #[error("{0}")]
    Precondition(String),
    #[error("input contains a forbidden induced structure on {0:?}")]
    ClassWitness(VertexSet),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Path(#[from] PathError),
}

/// Outcome of the goodness test for one entry against one weight function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Goodness {
    pub shrinking: bool,
    pub safe: bool,
}

impl Goodness {
    pub fn good(&self) -> bool {
        self.shrinking && self.safe
    }
}

/// G - X with labels preserved: same vertex count, only edges between
/// surviving vertices. Trivial atoms are flagged by their degree in this
/// decomposed graph, not in G.
fn masked(g: &Graph, x: &VertexSet) -> Graph {
    let mut m = Graph::new(g.n());
    for (u, v) in g.edges() {
        if !x.contains(&u) && !x.contains(&v) {
            m.add_edge(u, v);
        }
    }
    m
}

/// Shrinking: every nontrivial atom weighs at most (1 - delta) w(G).
/// Safe: w(X) <= gamma w(G), and w(X) <= gamma w(V \ A) for every
/// nontrivial atom A. All comparisons exact.
pub fn is_good(
    g: &Graph,
    w: &WeightFn,
    entry: &DisperserEntry,
    gamma: Ratio,
    delta: RatioPow,
) -> Goodness {
    let total = w.total_all();
    let wx = w.total(&entry.x);
    let live = masked(g, &entry.x);
    let mut shrinking = true;
    let mut safe = le_frac(wx, gamma, total);
    for a in atoms(&live, &entry.esd) {
        if a.trivial {
            continue;
        }
        let wa = w.total(&a.vertices);
        if !le_one_minus_frac_pow(wa, delta.base, delta.pow, total) {
            shrinking = false;
        }
        if !le_frac(wx, gamma, total - wa) {
            safe = false;
        }
    }
    Goodness { shrinking, safe }
}

/// Size-based uniformity: |X| <= n^{-xi} (n - |A|) and |A| <= n - n^{xi}
/// for every atom. An entry with no atoms is measured against the empty
/// atom, so X = V(G) is never uniform (for n >= 2).
pub fn is_uniform(g: &Graph, entry: &DisperserEntry, xi: Ratio) -> bool {
    assert!(xi.is_positive() && xi < Ratio::one());
    let n = g.n() as u64;
    let p = xi.num() as u32;
    let q = xi.den() as u32;
    let xlen = entry.x.len() as u64;
    let mut sizes: Vec<u64> = atoms(g, &entry.esd)
        .iter()
        .map(|a| a.vertices.len() as u64)
        .collect();
    if sizes.is_empty() {
        sizes.push(0);
    }
    sizes.iter().all(|&alen| {
        if alen > n {
            return false;
        }
        let rest = n - alen;
        // |X| <= n^{-p/q} (n - |A|)  <=>  |X|^q n^p <= (n - |A|)^q
        let small_cut =
            BigUint::from(xlen).pow(q) * BigUint::from(n).pow(p) <= BigUint::from(rest).pow(q);
        // |A| <= n - n^{p/q}  <=>  (n - |A|)^q >= n^p
        small_cut && ge_root(rest, n, p, q)
    })
}

fn check_independent(g: &Graph, i: &VertexSet) -> Result<(), DisperserError> {
    for &u in i {
        for &v in i {
            if u < v && g.has_edge(u, v) {
                return Err(DisperserError::NotIndependent);
            }
        }
    }
    Ok(())
}

/// Vertices whose closed neighborhood captures at least a beta fraction of
/// the weight of the independent set I.
pub fn heavy_vertices(
    g: &Graph,
    w: &WeightFn,
    i: &VertexSet,
    beta: Ratio,
) -> Result<VertexSet, DisperserError> {
    check_independent(g, i)?;
    let wi = w.total(i);
    if wi == 0 {
        return Err(DisperserError::ZeroWeight);
    }
    Ok(g.vertices()
        .filter(|&v| {
            let captured: VertexSet = g
                .closed_neighborhood_of(v)
                .intersection(i)
                .copied()
                .collect();
            !lt_frac(w.total(&captured), beta, wi)
        })
        .collect())
}

/// The ceiling of beta^{-1} log2 n, computed exactly: the smallest k with
/// 2^{k p} >= n^q for beta = p/q. A single-vertex instance is measured as
/// n = 2 (the log-based bound degenerates to zero there while a heavy
/// vertex may still need covering).
pub fn heavy_bound(beta: Ratio, n: usize) -> usize {
    assert!(beta.is_positive());
    let p = beta.num() as u32;
    let q = beta.den() as u32;
    let target = BigUint::from(n.max(2) as u64).pow(q);
    let hit = |k: u32| (BigUint::from(1u8) << (k * p)) >= target;
    let (mut lo, mut hi) = (0u32, 1u32);
    while !hit(hi) {
        hi *= 2;
    }
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if hit(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo as usize
}

/// A subset J of I, of size within the guaranteed bound, whose closed
/// neighborhood covers every beta-heavy vertex. Greedy maximum coverage
/// first; if greedy overshoots the bound, an exhaustive search over small
/// subsets of I settles it.
pub fn heavy_cover_search(
    g: &Graph,
    w: &WeightFn,
    i: &VertexSet,
    beta: Ratio,
) -> Result<VertexSet, DisperserError> {
    assert!(beta.is_positive(), "cover bound needs a positive threshold");
    let z = heavy_vertices(g, w, i, beta)?;
    let bound = heavy_bound(beta, g.n());
    let covers = |v: Vertex, target: &VertexSet| -> VertexSet {
        g.closed_neighborhood_of(v)
            .intersection(target)
            .copied()
            .collect()
    };
    let mut j = VertexSet::new();
    let mut uncovered = z.clone();
    while !uncovered.is_empty() && j.len() < bound {
        // Smallest vertex among those covering the most.
        let best = i
            .iter()
            .copied()
            .max_by_key(|&v| (covers(v, &uncovered).len(), std::cmp::Reverse(v)));
        match best {
            Some(v) if !covers(v, &uncovered).is_empty() => {
                for c in covers(v, &uncovered) {
                    uncovered.remove(&c);
                }
                j.insert(v);
            }
            _ => break,
        }
    }
    if uncovered.is_empty() {
        return Ok(j);
    }
    let iv: Vec<Vertex> = i.iter().copied().collect();
    for size in 0..=bound.min(iv.len()) {
        for combo in itertools::Itertools::combinations(iv.iter().copied(), size) {
            let js: VertexSet = combo.into_iter().collect();
            let nj = g.closed_neighborhood(&js);
            if z.is_subset(&nj) {
                return Ok(js);
            }
        }
    }
    Err(DisperserError::CoverBoundExceeded { bound })
}

/// First entry good for the weights restricted to I, if any. This is the
/// defining property of a disperser, checked per instance.
pub fn goodness_witness(
    g: &Graph,
    w: &WeightFn,
    i: &VertexSet,
    disp: &Disperser,
) -> Option<usize> {
    let mut wi = WeightFn::new(vec![0; g.n()]);
    for &v in i {
        wi.set(v, w.get(v));
    }
    disp.entries
        .iter()
        .position(|e| is_good(g, &wi, e, disp.params.gamma, disp.params.delta).good())
}

/// All independent sets of size at most cap, smallest first; always
/// includes the empty set.
pub(crate) fn independent_sets(g: &Graph, cap: usize) -> Vec<VertexSet> {
    let mut out: Vec<VertexSet> = vec![VertexSet::new()];
    let mut frontier = vec![VertexSet::new()];
    for _ in 1..=cap {
        let mut next = vec![];
        for s in &frontier {
            let lo = s.iter().next_back().map_or(0, |&v| v + 1);
            for v in lo..g.n() {
                if s.iter().all(|&u| !g.has_edge(u, v)) {
                    let mut t = s.clone();
                    t.insert(v);
                    next.push(t);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Strong entry for a deletion set: the component partition of G - X.
fn component_entry(g: &Graph, x: VertexSet) -> DisperserEntry {
    let live: VertexSet = g.vertices().filter(|v| !x.contains(v)).collect();
    let esd = partition_esd(&g.components_within(&live));
    DisperserEntry { x, esd }
}

fn complement(g: &Graph, s: &VertexSet) -> VertexSet {
    g.vertices().filter(|v| !s.contains(v)).collect()
}

enum PathInner {
    Gyarfas,
    LongHole(usize),
}

fn path_family(g: &Graph, inner: &PathInner) -> Result<Vec<GyarfasPath>, PathError> {
    match inner {
        PathInner::Gyarfas => gyarfas_family(g, 0),
        PathInner::LongHole(t) => long_hole_family(g, *t),
    }
}

fn check_gamma(gamma: Ratio) {
    assert!(
        gamma.is_positive() && gamma < Ratio::one(),
        "safety budget must lie in (0, 1)"
    );
}

/// Strong disperser for graphs with no induced path on t vertices, with
/// delta = gamma / (4t). Members: for every independent guess J, the cut
/// N(J), and for every component of the remainder, N(J) together with the
/// lifted closed neighborhood of each induced-path family member.
pub fn strong_disperser_pt(g: &Graph, gamma: Ratio, t: usize) -> Result<Disperser, DisperserError> {
    assert!(t >= 1);
    build_strong(g, gamma, t, PathInner::Gyarfas)
}

/// Same construction for graphs with no induced cycle on >= t vertices,
/// using the short-path family (members of fewer than t vertices).
pub fn strong_disperser_longhole(
    g: &Graph,
    gamma: Ratio,
    t: usize,
) -> Result<Disperser, DisperserError> {
    assert!(t >= 4);
    build_strong(g, gamma, t, PathInner::LongHole(t))
}

fn build_strong(
    g: &Graph,
    gamma: Ratio,
    t: usize,
    inner: PathInner,
) -> Result<Disperser, DisperserError> {
    check_gamma(gamma);
    let p_gamma = gamma.div_int(4 * t as i64);
    let mut xs: BTreeSet<VertexSet> = BTreeSet::new();
    for j in independent_sets(g, g.n()) {
        let nj = g.open_neighborhood(&j);
        xs.insert(nj.clone());
        let live = complement(g, &g.closed_neighborhood(&j));
        for comp in g.components_within(&live) {
            let (sub, names) = g.induced(&comp);
            for p in path_family(&sub, &inner)? {
                let xq: VertexSet = if p.vertices.is_empty() {
                    [0].into()
                } else {
                    sub.closed_neighborhood(&p.vertices.iter().copied().collect())
                };
                let mut x = nj.clone();
                x.extend(xq.iter().map(|&v| names[v]));
                xs.insert(x);
            }
        }
    }
    let entries: Vec<DisperserEntry> = xs.into_iter().map(|x| component_entry(g, x)).collect();
    let params = DisperserParams {
        gamma,
        delta: RatioPow::linear(p_gamma),
        xi: Ratio::new(1, 2),
        tau: Ratio::new(1, 4 * (t.max(2) as i64 - 1)),
        n0: (4 * (t.max(2) as u64 - 1)).pow(2),
        beta: RatioPow::linear(gamma.div_int(8 * t as i64)),
    };
    Ok(Disperser {
        entries,
        params,
        strong: true,
        constructive_failures: 0,
    })
}

/// A single size-uniform entry for a connected instance of the given class,
/// built from uniform weights. Fails with a precondition error when the
/// instance is too small or too dense for the class's degree bound.
pub fn uniform_disperser(
    g: &Graph,
    class: &GraphClass,
) -> Result<DisperserEntry, DisperserError> {
    match class {
        GraphClass::Pt(t) => {
            if *t < 2 {
                return Err(DisperserError::Precondition(
                    "path length must be at least 2".into(),
                ));
            }
            uniform_path_entry(g, *t, false)
        }
        GraphClass::CgeT(t) => {
            if *t < 4 {
                return Err(DisperserError::Precondition(
                    "hole length must be at least 4".into(),
                ));
            }
            uniform_path_entry(g, *t, true)
        }
        GraphClass::YgeT(t) => uniform_claw_entry(g, *t),
        _ => Err(DisperserError::Precondition(
            "no uniform construction for this class".into(),
        )),
    }
}

/// Balanced-separator entry with xi = 1/2: X is the closed neighborhood of
/// a short induced path selected against uniform weights. Requires every
/// closed neighborhood to have at most sqrt(n) / (4 (t - 1)) vertices.
fn uniform_path_entry(g: &Graph, t: usize, holes: bool) -> Result<DisperserEntry, DisperserError> {
    if !g.is_connected() {
        return Err(PathError::Disconnected.into());
    }
    let n = g.n() as u128;
    let c = 4 * (t as u128 - 1);
    for v in g.vertices() {
        let d = g.closed_neighborhood_of(v).len() as u128;
        if (c * d) * (c * d) > n {
            return Err(DisperserError::Precondition(format!(
                "closed neighborhood of vertex {v} exceeds the degree bound"
            )));
        }
    }
    let w = WeightFn::uniform(g.n());
    let cert = if holes {
        long_hole_select(g, t, &w)?
    } else {
        gyarfas_select(g, 0, &w, Ratio::new(1, 4))?
    };
    let x: VertexSet = if cert.path.vertices.is_empty() {
        [cert.path.start].into()
    } else {
        g.closed_neighborhood(&cert.path.vertices.iter().copied().collect())
    };
    let entry = component_entry(g, x);
    if !is_uniform(g, &entry, Ratio::new(1, 2)) {
        return Err(DisperserError::Precondition(
            "selected cut misses the uniformity bounds".into(),
        ));
    }
    Ok(entry)
}

/// Uniform entry with xi = 1/9 for graphs with no induced subdivided claw
/// with legs of length >= t, via the claw pipeline at sigma = 1 / floor(n^{1/9}).
/// The sigma range needs floor(n^{1/9}) > 100 t, i.e. astronomically large
/// instances; smaller inputs get a precondition error.
fn uniform_claw_entry(g: &Graph, t: usize) -> Result<DisperserEntry, DisperserError> {
    if !g.is_connected() {
        return Err(DisperserError::Oracle(OracleError::Disconnected));
    }
    let n = g.n() as u64;
    let mut m = 1u64;
    while BigUint::from(m + 1).pow(9u32) <= BigUint::from(n) {
        m += 1;
    }
    if m <= 100 * t as u64 {
        return Err(DisperserError::Precondition(
            "instance below the size threshold for the claw construction".into(),
        ));
    }
    let sigma = Ratio::new(1, m as i64);
    let params_in = SigmaParams::new(t, sigma)?;
    let w = WeightFn::uniform(g.n());
    let xi = Ratio::new(1, 9);
    match find_claw(g, Some(&w), 0, &params_in)? {
        ClawResult::Claw(wit) => Err(DisperserError::ClassWitness(wit.all_vertices())),
        ClawResult::Family(f) => f
            .members
            .iter()
            .find(|e| is_uniform(g, e, xi))
            .cloned()
            .ok_or_else(|| {
                DisperserError::Precondition("no family member meets the uniformity bounds".into())
            }),
    }
}

enum GuessInner {
    Claw,
    Lobster,
}

/// Disperser for graphs with no induced subdivided claw with all legs of
/// length >= t, with delta = gamma^8; finding an actual claw is reported as
/// a class witness instead.
pub fn disperser_yget(g: &Graph, gamma: Ratio, t: usize) -> Result<Disperser, DisperserError> {
    disperser_yget_capped(g, gamma, t, g.n())
}

/// As [`disperser_yget`] with an explicit cap on the guessed independent
/// set's size (the full bound is never binding at small scale).
pub fn disperser_yget_capped(
    g: &Graph,
    gamma: Ratio,
    t: usize,
    j_cap: usize,
) -> Result<Disperser, DisperserError> {
    build_guess_heavy(g, gamma, t, GuessInner::Claw, j_cap)
}

/// Disperser for graphs with no induced subdivided lobster with every edge
/// path of length >= t, with delta = gamma^40.
pub fn disperser_lget(g: &Graph, gamma: Ratio, t: usize) -> Result<Disperser, DisperserError> {
    disperser_lget_capped(g, gamma, t, g.n())
}

pub fn disperser_lget_capped(
    g: &Graph,
    gamma: Ratio,
    t: usize,
    j_cap: usize,
) -> Result<Disperser, DisperserError> {
    build_guess_heavy(g, gamma, t, GuessInner::Lobster, j_cap)
}

fn build_guess_heavy(
    g: &Graph,
    gamma: Ratio,
    t: usize,
    inner: GuessInner,
    j_cap: usize,
) -> Result<Disperser, DisperserError> {
    check_gamma(gamma);
    assert!(t >= 1);
    // Any valid sigma works: the inner pipelines enumerate their whole
    // family when run weight-oblivious.
    let sigma = Ratio::new(1, 100 * t as i64 + 1);
    let params_in = SigmaParams::new(t, sigma)?;
    let mut seen: BTreeSet<(VertexSet, String)> = BTreeSet::new();
    let mut entries: Vec<DisperserEntry> = vec![];
    let mut push = |e: DisperserEntry, entries: &mut Vec<DisperserEntry>| {
        if seen.insert((e.x.clone(), e.esd.to_json())) {
            debug_assert!(
                crate::esd::validate_esd_within(g, &complement(g, &e.x), &e.esd).ok(),
                "lifted entry must decompose G - X"
            );
            entries.push(e);
        }
    };
    let mut failures = 0usize;
    for j in independent_sets(g, j_cap) {
        let nj = g.open_neighborhood(&j);
        push(component_entry(g, nj.clone()), &mut entries);
        let live = complement(g, &g.closed_neighborhood(&j));
        for comp in g.components_within(&live) {
            let (sub, names) = g.induced(&comp);
            let map = |s: &VertexSet| -> VertexSet { s.iter().map(|&v| names[v]).collect() };
            let family = match inner {
                GuessInner::Claw => match find_claw(&sub, None, 0, &params_in)? {
                    ClawResult::Claw(wit) => {
                        return Err(DisperserError::ClassWitness(map(&wit.all_vertices())))
                    }
                    ClawResult::Family(f) => f,
                },
                GuessInner::Lobster => match find_lobster(&sub, None, &params_in)? {
                    LobsterResult::Lobster(vs) => {
                        return Err(DisperserError::ClassWitness(map(&vs)))
                    }
                    LobsterResult::Family(f) => f,
                },
            };
            failures += family.constructive_failures;
            for m in &family.members {
                let inner_x = map(&m.x);
                let mut x = nj.clone();
                x.extend(inner_x.iter().copied());
                let lifted = relabel_esd(&m.esd, &names);
                // Everything outside the refined component (the guessed J
                // and the untouched components) joins as isolated pattern
                // vertices, one per connected piece.
                let covered: VertexSet = comp.difference(&inner_x).copied().collect();
                let rest: VertexSet = g
                    .vertices()
                    .filter(|v| !x.contains(v) && !covered.contains(v))
                    .collect();
                let esd = augment_isolated(&lifted, &g.components_within(&rest));
                push(DisperserEntry { x, esd }, &mut entries);
            }
        }
    }
    let (pow, xi) = match inner {
        GuessInner::Claw => (7, Ratio::new(1, 9)),
        GuessInner::Lobster => (39, Ratio::new(1, 41)),
    };
    let params = DisperserParams {
        gamma,
        delta: RatioPow::new(gamma, pow),
        xi,
        tau: Ratio::one(),
        n0: (100 * t as u64 + 1)
            .checked_pow(xi.den() as u32)
            .unwrap_or(u64::MAX),
        beta: RatioPow::new(gamma, pow),
    };
    Ok(Disperser {
        entries,
        params,
        strong: false,
        constructive_failures: failures,
    })
}

#[cfg(test)]
mod tests;
