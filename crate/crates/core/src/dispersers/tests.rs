use super::*;
use crate::esd::{trivial_esd, validate_esd_within};
use crate::graph::{find_induced_claw, find_induced_lobster};
use crate::testutil::{random_connected, random_independent, random_weights};
use proptest::prelude::*;

fn vset(vs: &[Vertex]) -> VertexSet {
    vs.iter().copied().collect()
}

fn path(n: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    Graph::from_edges(n, &edges)
}

fn cycle(n: usize) -> Graph {
    let mut edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    edges.push((n - 1, 0));
    Graph::from_edges(n, &edges)
}

fn star(leaves: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (1..=leaves).map(|v| (0, v)).collect();
    Graph::from_edges(leaves + 1, &edges)
}

/// Every entry decomposes exactly G - X; strong dispersers use edgeless
/// patterns throughout.
fn assert_disperser_shape(g: &Graph, disp: &Disperser) {
    assert!(!disp.entries.is_empty());
    for e in &disp.entries {
        let live: VertexSet = g.vertices().filter(|v| !e.x.contains(v)).collect();
        let val = validate_esd_within(g, &live, &e.esd);
        assert!(val.ok(), "entry invalid: {:?}", val.violations);
        if disp.strong {
            assert!(e.esd.pattern_edges().is_empty());
        }
    }
}

fn all_independent_sets(g: &Graph) -> Vec<VertexSet> {
    independent_sets(g, g.n())
}

#[test]
fn goodness_trivial_cases() {
    let g = path(3);
    let w = WeightFn::uniform(3);
    let gamma = Ratio::new(1, 4);
    let delta = RatioPow::linear(Ratio::new(1, 4));

    // No cut, one big atom: cannot shrink, trivially safe.
    let whole = DisperserEntry {
        x: VertexSet::new(),
        esd: trivial_esd(&g),
    };
    let res = is_good(&g, &w, &whole, gamma, delta);
    assert!(!res.shrinking);
    assert!(res.safe);
    assert!(!res.good());

    // Cutting everything is safe only for a zero weight function.
    let all = DisperserEntry {
        x: g.vertex_set(),
        esd: partition_esd(&[]),
    };
    let res = is_good(&g, &w, &all, gamma, delta);
    assert!(res.shrinking);
    assert!(!res.safe);
    let res = is_good(&g, &WeightFn::new(vec![0; 3]), &all, gamma, delta);
    assert!(res.safe);
}

#[test]
fn goodness_neighborhood_cut_branch() {
    // P7, weights concentrated on an independent set avoiding X = N(3):
    // every surviving component is light, and the cut weighs nothing, so
    // the entry is (0, 1/2)-good.
    let g = path(7);
    let mut w = WeightFn::new(vec![0; 7]);
    for v in [0, 3, 6] {
        w.set(v, 1);
    }
    let entry = component_entry(&g, g.open_neighborhood(&vset(&[3])));
    assert_eq!(entry.x, vset(&[2, 4]));
    let res = is_good(
        &g,
        &w,
        &entry,
        Ratio::zero(),
        RatioPow::linear(Ratio::new(1, 2)),
    );
    assert!(res.good());
    // The same entry fails once the cut itself carries weight.
    let res = is_good(
        &g,
        &WeightFn::uniform(7),
        &entry,
        Ratio::zero(),
        RatioPow::linear(Ratio::new(1, 2)),
    );
    assert!(!res.safe);
}

#[test]
fn uniformity_extremes() {
    // Two disjoint edges, no cut: atoms of size 2 = n - n^{1/2}.
    let g = Graph::from_edges(4, &[(0, 1), (2, 3)]);
    let empty = DisperserEntry {
        x: VertexSet::new(),
        esd: trivial_esd(&g),
    };
    assert!(is_uniform(&g, &empty, Ratio::new(1, 2)));

    // Deleting everything is never uniform (n >= 2).
    let all = DisperserEntry {
        x: g.vertex_set(),
        esd: partition_esd(&[]),
    };
    assert!(!is_uniform(&g, &all, Ratio::new(1, 2)));

    // Connected graph without a cut: the single atom is too big.
    let p = path(4);
    let whole = DisperserEntry {
        x: VertexSet::new(),
        esd: trivial_esd(&p),
    };
    assert!(!is_uniform(&p, &whole, Ratio::new(1, 2)));
}

#[test]
fn uniformity_is_exact_at_the_boundary() {
    // n = 9, xi = 1/2: need |A| <= 9 - 3 = 6 and |X| * 3 <= 9 - |A|.
    let g = Graph::new(9);
    let entry = |x: &[Vertex], a: &[Vertex]| DisperserEntry {
        x: vset(x),
        esd: partition_esd(&[vset(a)]),
    };
    let xi = Ratio::new(1, 2);
    assert!(is_uniform(&g, &entry(&[0], &[1, 2, 3, 4, 5, 6]), xi));
    assert!(!is_uniform(&g, &entry(&[0], &[1, 2, 3, 4, 5, 6, 7]), xi));
    assert!(is_uniform(&g, &entry(&[0, 1], &[2, 3, 4]), xi));
    assert!(!is_uniform(&g, &entry(&[0, 1], &[2, 3, 4, 5]), xi));
}

#[test]
fn heavy_vertices_cases() {
    let g = star(4);
    let w = WeightFn::uniform(5);

    // Zero threshold: everything is heavy.
    let all = heavy_vertices(&g, &w, &vset(&[1, 2]), Ratio::zero()).unwrap();
    assert_eq!(all, g.vertex_set());

    // Single-vertex set at threshold one: exactly the closed neighborhood.
    let nb = heavy_vertices(&g, &w, &vset(&[1]), Ratio::one()).unwrap();
    assert_eq!(nb, vset(&[0, 1]));

    // Two leaves at threshold 1/2: the center captures both, each leaf
    // captures itself, the other leaves capture nothing.
    let half = heavy_vertices(&g, &w, &vset(&[1, 2]), Ratio::new(1, 2)).unwrap();
    assert_eq!(half, vset(&[0, 1, 2]));

    assert_eq!(
        heavy_vertices(&g, &WeightFn::new(vec![0; 5]), &vset(&[1]), Ratio::one()),
        Err(DisperserError::ZeroWeight)
    );
    assert_eq!(
        heavy_vertices(&g, &w, &vset(&[0, 1]), Ratio::one()),
        Err(DisperserError::NotIndependent)
    );
}

#[test]
fn heavy_bound_values() {
    // ceil(beta^{-1} log2 n) via 2^{kp} >= n^q.
    assert_eq!(heavy_bound(Ratio::one(), 1), 1); // measured as n = 2
    assert_eq!(heavy_bound(Ratio::one(), 8), 3);
    assert_eq!(heavy_bound(Ratio::new(1, 2), 8), 6);
    assert_eq!(heavy_bound(Ratio::new(1, 4), 12), 15); // 2^14 < 12^4 <= 2^15
    assert_eq!(heavy_bound(Ratio::new(2, 3), 4), 3); // 2^{2k} >= 4^3 at k=3
}

#[test]
fn heavy_cover_cases() {
    // P4 with the two endpoints: nothing reaches both, so no heavy
    // vertices at threshold 1 and the empty cover suffices.
    let g = path(4);
    let w = WeightFn::uniform(4);
    let i = vset(&[0, 3]);
    assert_eq!(heavy_vertices(&g, &w, &i, Ratio::one()).unwrap().len(), 0);
    assert_eq!(heavy_cover_search(&g, &w, &i, Ratio::one()).unwrap().len(), 0);

    // Singleton set: it covers its own neighborhood.
    let g = path(2);
    let j = heavy_cover_search(&g, &WeightFn::uniform(2), &vset(&[0]), Ratio::one()).unwrap();
    assert_eq!(j, vset(&[0]));
}

#[test]
fn heavy_cover_random_instances() {
    for seed in 0..40 {
        let g = random_connected(seed, 12);
        let w = random_weights(g.n(), seed ^ 0xabcd);
        let i = random_independent(&g, seed ^ 0x1234);
        if w.total(&i) == 0 {
            continue;
        }
        let beta = Ratio::new(1, 4);
        let z = heavy_vertices(&g, &w, &i, beta).unwrap();
        let j = heavy_cover_search(&g, &w, &i, beta).unwrap();
        assert!(j.is_subset(&i));
        assert!(j.len() <= heavy_bound(beta, g.n()));
        let nj = g.closed_neighborhood(&j);
        assert!(z.is_subset(&nj), "cover misses a heavy vertex");
    }
}

/// Every independent set with positive restricted weight must have a good
/// entry; that is the defining property of the family.
fn assert_goodness_sweep(g: &Graph, disp: &Disperser, w: &WeightFn) {
    let mut checked = 0;
    for i in all_independent_sets(g) {
        if w.total(&i) == 0 {
            continue;
        }
        assert!(
            goodness_witness(g, w, &i, disp).is_some(),
            "no good entry for independent set {i:?}"
        );
        checked += 1;
    }
    assert!(checked > 0);
}

#[test]
fn strong_disperser_single_vertex() {
    let g = Graph::new(1);
    let disp = strong_disperser_pt(&g, Ratio::new(1, 4), 4).unwrap();
    assert_disperser_shape(&g, &disp);
    assert!(disp.strong);
    assert_goodness_sweep(&g, &disp, &WeightFn::uniform(1));
}

#[test]
fn strong_disperser_on_a_cograph() {
    // Join of a one-vertex graph with (triangle + edge): no induced P4.
    let mut g = Graph::from_edges(6, &[(0, 1), (0, 2), (1, 2), (3, 4)]);
    for v in 0..5 {
        g.add_edge(v, 5);
    }
    let disp = strong_disperser_pt(&g, Ratio::new(1, 4), 4).unwrap();
    assert_disperser_shape(&g, &disp);
    assert!(disp.strong);
    assert_eq!(disp.params.delta, RatioPow::linear(Ratio::new(1, 64)));
    assert_goodness_sweep(&g, &disp, &WeightFn::uniform(6));
    assert_goodness_sweep(&g, &disp, &random_weights(6, 7));
}

#[test]
fn strong_disperser_longhole_cases() {
    // C4 has no hole of length >= 5.
    let g = cycle(4);
    let disp = strong_disperser_longhole(&g, Ratio::new(1, 4), 5).unwrap();
    assert_disperser_shape(&g, &disp);
    assert_goodness_sweep(&g, &disp, &WeightFn::uniform(4));

    // A chordal graph has no hole at all, so t = 4 applies.
    let g = Graph::from_edges(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (1, 3), (3, 4)]);
    let disp = strong_disperser_longhole(&g, Ratio::new(1, 4), 4).unwrap();
    assert_disperser_shape(&g, &disp);
    assert_goodness_sweep(&g, &disp, &random_weights(5, 3));
}

#[test]
fn uniform_disperser_rejects_dense_or_small_instances() {
    // The degree precondition |N[v]| <= n^{1/2} / (4 (t-1)) fails on any
    // instance small enough to build here: a connected graph on n >= 3
    // vertices has a vertex of closed degree 3, forcing n >= 144(t-1)^2.
    let g = path(5);
    match uniform_disperser(&g, &GraphClass::Pt(6)) {
        Err(DisperserError::Precondition(_)) => {}
        other => panic!("expected a precondition error, got {other:?}"),
    }
    match uniform_disperser(&g, &GraphClass::CgeT(4)) {
        Err(DisperserError::Precondition(_)) => {}
        other => panic!("expected a precondition error, got {other:?}"),
    }
    // The claw construction needs floor(n^{1/9}) > 100t.
    match uniform_disperser(&g, &GraphClass::YgeT(1)) {
        Err(DisperserError::Precondition(_)) => {}
        other => panic!("expected a precondition error, got {other:?}"),
    }
}

#[test]
fn yget_disperser_on_a_line_graph() {
    // The line graph of K4 (the octahedron) is claw-free.
    let g = Graph::from_edges(
        6,
        &[
            (0, 1),
            (0, 2),
            (0, 4),
            (0, 5),
            (1, 2),
            (1, 3),
            (1, 5),
            (2, 3),
            (2, 4),
            (3, 4),
            (3, 5),
            (4, 5),
        ],
    );
    assert!(find_induced_claw(&g, 1).is_none());
    let disp = disperser_yget(&g, Ratio::new(1, 4), 1).unwrap();
    assert_disperser_shape(&g, &disp);
    assert!(!disp.strong);
    assert_eq!(disp.params.delta, RatioPow::new(Ratio::new(1, 4), 7));
    assert_eq!(disp.params.xi, Ratio::new(1, 9));
    assert_goodness_sweep(&g, &disp, &WeightFn::uniform(6));
    assert_goodness_sweep(&g, &disp, &random_weights(6, 11));
}

#[test]
fn yget_planted_claw_is_a_class_witness() {
    // A claw whose designated start vertex is a tip.
    let g = Graph::from_edges(4, &[(3, 0), (3, 1), (3, 2)]);
    match disperser_yget(&g, Ratio::new(1, 4), 1) {
        Err(DisperserError::ClassWitness(vs)) => assert_eq!(vs.len(), 4),
        other => panic!("expected a class witness, got {other:?}"),
    }
}

#[test]
fn lget_disperser_on_a_small_cycle() {
    let g = cycle(5);
    assert!(find_induced_lobster(&g, 1).is_none());
    let disp = disperser_lget(&g, Ratio::new(1, 4), 1).unwrap();
    assert_disperser_shape(&g, &disp);
    assert_eq!(disp.params.delta, RatioPow::new(Ratio::new(1, 4), 39));
    assert_eq!(disp.params.xi, Ratio::new(1, 41));
    assert_goodness_sweep(&g, &disp, &WeightFn::uniform(5));
}

#[test]
fn lget_planted_lobster_is_a_class_witness() {
    // Spine 1-8-2-9-3 with attachments on 1, 2, 3 and tips 0, 4.
    let g = Graph::from_edges(
        10,
        &[
            (0, 1),
            (1, 8),
            (8, 2),
            (2, 9),
            (9, 3),
            (3, 4),
            (1, 5),
            (2, 6),
            (3, 7),
        ],
    );
    assert!(find_induced_lobster(&g, 1).is_some());
    match disperser_lget(&g, Ratio::new(1, 4), 1) {
        Err(DisperserError::ClassWitness(vs)) => {
            assert!(find_induced_lobster(&g.induced(&vs).0, 1).is_some());
        }
        other => panic!("expected a class witness, got {other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Any graph on fewer than t vertices is trivially free of induced
    /// paths on t vertices, so the strong builder must always deliver a
    /// working family.
    #[test]
    fn strong_disperser_works_on_small_graphs(seed in 0u64..5000) {
        let g = random_connected(seed, 6);
        let disp = strong_disperser_pt(&g, Ratio::new(1, 4), 8).unwrap();
        assert_disperser_shape(&g, &disp);
        let w = random_weights(g.n(), seed ^ 0x77);
        assert_goodness_sweep(&g, &disp, &w);
    }

    #[test]
    fn longhole_disperser_works_on_small_graphs(seed in 0u64..5000) {
        let g = random_connected(seed, 5);
        let disp = strong_disperser_longhole(&g, Ratio::new(1, 3), 7).unwrap();
        assert_disperser_shape(&g, &disp);
        let w = random_weights(g.n(), seed ^ 0x99);
        assert_goodness_sweep(&g, &disp, &w);
    }
}
