use super::*;
use crate::graph::vset;
use crate::testutil::{random_esd, random_independent};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// P_3 = a(0) - b(1) - c(2) decomposed over a single-edge pattern:
/// eta(e) = {a,b,c}, eta(e,0) = {a}, eta(e,1) = {c}.
fn p3_strip() -> (Graph, Esd) {
    let g = Graph::from_edges(3, &[(0, 1), (1, 2)]);
    let mut d = Esd::new(Graph::from_edges(2, &[(0, 1)]));
    d.set_eta_edge(0, 1, vset(&[0, 1, 2]), vset(&[0]), vset(&[2]));
    (g, d)
}

fn atom_by_kind(atoms: &[Atom], kind: AtomKind) -> &Atom {
    atoms.iter().find(|a| a.kind == kind).unwrap()
}

#[test]
fn p3_strip_validates() {
    let (g, d) = p3_strip();
    let report = validate_esd(&g, &d);
    assert!(report.ok(), "{:?}", report.violations);
}

#[test]
fn p3_strip_with_misplaced_middle_is_invalid() {
    // Moving b into eta(0) leaves edge b-c with no permitted type.
    let g = Graph::from_edges(3, &[(0, 1), (1, 2)]);
    let mut d = Esd::new(Graph::from_edges(2, &[(0, 1)]));
    d.set_eta_edge(0, 1, vset(&[0, 2]), vset(&[0]), vset(&[2]));
    d.set_eta_vertex(0, vset(&[1]));
    let report = validate_esd(&g, &d);
    assert!(!report.ok());
    assert!(report
        .violations
        .contains(&EsdViolation::ForbiddenEdge { x: 1, y: 2 }));
}

#[test]
fn trivial_esd_shapes() {
    let k3 = Graph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]);
    let d = trivial_esd(&k3);
    assert_eq!(d.pattern().n(), 1);
    assert_eq!(d.pattern().m(), 0);
    assert_eq!(d.eta_vertex(0), &vset(&[0, 1, 2]));
    assert!(validate_esd(&k3, &d).ok());

    let edgeless = Graph::new(3);
    assert_eq!(trivial_esd(&edgeless).pattern().n(), 3);

    let p3_k2 = Graph::from_edges(5, &[(0, 1), (1, 2), (3, 4)]);
    let d = trivial_esd(&p3_k2);
    assert_eq!(d.pattern().n(), 2);
    let mut sizes: Vec<usize> = atoms(&p3_k2, &d).iter().map(|a| a.vertices.len()).collect();
    sizes.sort_unstable();
    assert_eq!(sizes, vec![2, 3]);
}

#[test]
fn p3_strip_atoms_by_formula() {
    let (g, d) = p3_strip();
    let e = (0, 1);
    let all = atoms(&g, &d);
    assert_eq!(atom_by_kind(&all, AtomKind::EdgeBot(e)).vertices, vset(&[1]));
    assert_eq!(
        atom_by_kind(&all, AtomKind::EdgeEnd(e, 0)).vertices,
        vset(&[0, 1])
    );
    assert_eq!(
        atom_by_kind(&all, AtomKind::EdgeEnd(e, 1)).vertices,
        vset(&[1, 2])
    );
    assert_eq!(
        atom_by_kind(&all, AtomKind::EdgeFull(e)).vertices,
        vset(&[0, 1, 2])
    );
    assert!(atom_by_kind(&all, AtomKind::Vertex(0)).vertices.is_empty());
    assert!(atom_by_kind(&all, AtomKind::Vertex(1)).vertices.is_empty());
    assert!(all.iter().all(|a| !a.trivial));
}

#[test]
fn trivial_esd_atoms_are_components() {
    let g = Graph::from_edges(5, &[(0, 1), (1, 2), (3, 4)]);
    let d = trivial_esd(&g);
    let all = atoms(&g, &d);
    assert_eq!(all.len(), 2);
    let comps = g.connected_components();
    for a in &all {
        assert!(comps.contains(&a.vertices));
        assert!(!a.trivial);
    }
    // An isolated vertex yields a trivial atom.
    let g = Graph::from_edges(3, &[(0, 1)]);
    let d = trivial_esd(&g);
    let all = atoms(&g, &d);
    assert_eq!(all.iter().filter(|a| a.trivial).count(), 1);
    assert_eq!(
        all.iter().find(|a| a.trivial).unwrap().vertices,
        vset(&[2])
    );
}

#[test]
fn conflict_cases() {
    let (g, d) = p3_strip();
    let all = atoms(&g, &d);
    let e = (0, 1);
    let bot = atom_by_kind(&all, AtomKind::EdgeBot(e));
    let at_u = atom_by_kind(&all, AtomKind::EdgeEnd(e, 0));
    let full = atom_by_kind(&all, AtomKind::EdgeFull(e));
    let a_u = atom_by_kind(&all, AtomKind::Vertex(0));
    let a_v = atom_by_kind(&all, AtomKind::Vertex(1));
    assert!(conflicts(bot, at_u, &d));
    assert!(conflicts(at_u, bot, &d));
    assert!(conflicts(full, a_u, &d));
    assert!(conflicts(at_u, a_u, &d));
    assert!(!conflicts(at_u, a_v, &d));
    assert!(!conflicts(bot, a_u, &d));

    // Vertex atoms of distinct nonadjacent pattern vertices never conflict.
    let g = Graph::new(2);
    let d = trivial_esd(&g);
    let all = atoms(&g, &d);
    assert!(!conflicts(&all[0], &all[1], &d));
}

#[test]
fn full_edge_atom_conflicts_with_triangle_atom() {
    // Pattern K_3; a single decomposed vertex in eta(T) so the triangle
    // exists. The full atom of each triangle edge conflicts with A_T.
    let h = Graph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]);
    let g = Graph::new(1);
    let mut d = Esd::new(h);
    d.set_eta_triangle((0, 1, 2), vset(&[0]));
    assert!(validate_esd(&g, &d).ok());
    let all = atoms(&g, &d);
    let a_t = atom_by_kind(&all, AtomKind::Triangle((0, 1, 2)));
    for e in [(0, 1), (0, 2), (1, 2)] {
        let full = atom_by_kind(&all, AtomKind::EdgeFull(e));
        assert!(conflicts(full, a_t, &d));
        assert!(conflicts(a_t, full, &d));
        assert!(!conflicts(atom_by_kind(&all, AtomKind::EdgeBot(e)), a_t, &d));
    }
}

#[test]
fn family_of_empty_set_on_trivial_esd() {
    let g = Graph::from_edges(5, &[(0, 1), (1, 2), (3, 4)]);
    let d = trivial_esd(&g);
    let fam = atom_family_of_independent_set(&g, &d, &VertexSet::new()).unwrap();
    assert!(fam.independent);
    assert_eq!(fam.atoms.len(), 2);
    assert_eq!(fam.union(), g.vertex_set());
}

#[test]
fn family_rules_on_p3_strip() {
    let (g, d) = p3_strip();
    let e = (0, 1);

    // I = {a, c} meets both ends: the full edge atom alone.
    let fam = atom_family_of_independent_set(&g, &d, &vset(&[0, 2])).unwrap();
    let kinds: Vec<AtomKind> = fam.atoms.iter().map(|a| a.kind).collect();
    assert_eq!(kinds, vec![AtomKind::EdgeFull(e)]);

    // I = {b} meets neither end: the middle atom, plus the (empty) vertex
    // atoms that no edge atom claims.
    let fam = atom_family_of_independent_set(&g, &d, &vset(&[1])).unwrap();
    let nonempty: Vec<AtomKind> = fam
        .atoms
        .iter()
        .filter(|a| !a.vertices.is_empty())
        .map(|a| a.kind)
        .collect();
    assert_eq!(nonempty, vec![AtomKind::EdgeBot(e)]);

    // Dependent sets are rejected.
    assert_eq!(
        atom_family_of_independent_set(&g, &d, &vset(&[0, 1])),
        Err(EsdError::NotIndependent)
    );
}

#[test]
fn restriction_examples() {
    let (g, d) = p3_strip();
    assert_eq!(restrict_esd(&g, &d, &VertexSet::new()), d);

    let r = restrict_esd(&g, &d, &vset(&[1]));
    assert_eq!(r.eta_edge((0, 1)), &vset(&[0, 2]));
    assert_eq!(r.eta_end((0, 1), 0), &vset(&[0]));
    assert_eq!(r.eta_end((0, 1), 1), &vset(&[2]));

    let g = Graph::from_edges(5, &[(0, 1), (1, 2), (3, 4)]);
    let d = trivial_esd(&g);
    let r = restrict_esd(&g, &d, &vset(&[3, 4]));
    assert!(r.eta_vertex(1).is_empty() || r.eta_vertex(0).is_empty());
}

#[test]
fn peripheral_examples() {
    let g = Graph::from_edges(5, &[(0, 1), (1, 2), (3, 4)]);
    assert!(peripheral_vertices(&g, &trivial_esd(&g)).is_empty());

    let (g, d) = p3_strip();
    assert_eq!(peripheral_vertices(&g, &d), vset(&[0, 2]));

    // A two-vertex end at a degree-one pattern vertex disqualifies its side.
    let mut d = Esd::new(Graph::from_edges(2, &[(0, 1)]));
    d.set_eta_edge(0, 1, vset(&[0, 1, 2]), vset(&[0, 1]), vset(&[2]));
    assert!(validate_esd(&g, &d).ok());
    assert_eq!(peripheral_vertices(&g, &d), vset(&[2]));
}

#[test]
fn shatter_examples() {
    // Z spread over three components: shattered.
    let g = Graph::from_edges(6, &[(0, 1), (2, 3), (4, 5)]);
    let d = trivial_esd(&g);
    assert_eq!(shatters(&g, &d, &vset(&[0, 2, 4])), Ok(true));

    // A claw with Z at the tips: the single component atom reaches all legs.
    let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]);
    let d = trivial_esd(&g);
    assert_eq!(shatters(&g, &d, &vset(&[1, 2, 3])), Ok(false));

    // Edgeless graphs are always shattered.
    let g = Graph::new(4);
    let d = trivial_esd(&g);
    assert_eq!(shatters(&g, &d, &vset(&[0, 1, 3])), Ok(true));

    // Cap.
    let g = Graph::new(40);
    let d = trivial_esd(&g);
    assert_eq!(
        shatters(&g, &d, &vset(&[0, 1, 2])),
        Err(EsdError::CapExceeded(40))
    );
}

#[test]
fn peripheral_triple_is_shattered() {
    // Three pendant edges z_i - a_i onto a triangle a_1 a_2 a_3; the pattern
    // is a star whose leaves carry the z_i as singleton ends. Every z_i is
    // peripheral and the decomposition shatters {z_0, z_1, z_2}.
    let g = Graph::from_edges(
        6,
        &[(0, 3), (1, 4), (2, 5), (3, 4), (3, 5), (4, 5)],
    );
    let h = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]);
    let mut d = Esd::new(h);
    d.set_eta_edge(0, 1, vset(&[0, 3]), vset(&[3]), vset(&[0]));
    d.set_eta_edge(0, 2, vset(&[1, 4]), vset(&[4]), vset(&[1]));
    d.set_eta_edge(0, 3, vset(&[2, 5]), vset(&[5]), vset(&[2]));
    assert!(validate_esd(&g, &d).ok(), "{:?}", validate_esd(&g, &d).violations);
    assert_eq!(peripheral_vertices(&g, &d), vset(&[0, 1, 2]));
    assert_eq!(shatters(&g, &d, &vset(&[0, 1, 2])), Ok(true));
}

#[test]
fn interchange_roundtrip_and_errors() {
    let (_, d) = p3_strip();
    let json = d.to_json();
    assert_eq!(Esd::from_json(&json).unwrap(), d);

    assert!(matches!(
        Esd::from_json("{"),
        Err(EsdError::Malformed(_))
    ));
    // Triangle reference not present in the pattern.
    let bad = r#"{
        "pattern": {"n": 3, "edges": [[0, 1]]},
        "eta": {
            "vertices": [[], [], []],
            "edges": [{"all": [0], "end_u": [0], "end_v": []}],
            "triangles": [{"corners": [0, 1, 2], "set": []}]
        }
    }"#;
    assert!(matches!(Esd::from_json(bad), Err(EsdError::Malformed(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_esd_is_valid_and_partitions(seed in any::<u64>()) {
        let (g, d) = random_esd(seed);
        let report = validate_esd(&g, &d);
        prop_assert!(report.ok(), "{:?}", report.violations);
        let total: usize = (0..d.pattern().n()).map(|v| d.eta_vertex(v).len()).sum::<usize>()
            + d.pattern_edges().iter().map(|&e| d.eta_edge(e).len()).sum::<usize>()
            + d.triangles().iter().map(|&t| d.eta_triangle(t).len()).sum::<usize>();
        prop_assert_eq!(total, g.n());
    }

    #[test]
    fn non_conflicting_atoms_are_disjoint_and_nonadjacent(seed in any::<u64>()) {
        let (g, d) = random_esd(seed);
        let all = atoms(&g, &d);
        prop_assert!(all.iter().filter(|a| !a.vertices.is_empty()).count() <= 5 * g.n().max(1));
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                if conflicts(&all[i], &all[j], &d) {
                    continue;
                }
                let (a, b) = (&all[i].vertices, &all[j].vertices);
                prop_assert!(a.is_disjoint(b), "{:?} and {:?} intersect", all[i].kind, all[j].kind);
                for &x in a {
                    for &y in b {
                        prop_assert!(
                            !g.has_edge(x, y),
                            "edge between {:?} and {:?}",
                            all[i].kind,
                            all[j].kind
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn independent_set_family_is_independent_and_covers(seed in any::<u64>()) {
        let (g, d) = random_esd(seed);
        let i = random_independent(&g, seed.wrapping_add(1));
        let fam = atom_family_of_independent_set(&g, &d, &i).unwrap();
        prop_assert!(fam.independent);
        for a in 0..fam.atoms.len() {
            for b in a + 1..fam.atoms.len() {
                prop_assert!(!conflicts(&fam.atoms[a], &fam.atoms[b], &d));
            }
        }
        prop_assert!(i.is_subset(&fam.union()));
    }

    #[test]
    fn restriction_stays_valid(seed in any::<u64>()) {
        let (g, d) = random_esd(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(2));
        let removed: VertexSet = g.vertices().filter(|_| rng.gen_bool(0.3)).collect();
        let r = restrict_esd(&g, &d, &removed);
        let live: VertexSet = g.vertices().filter(|v| !removed.contains(v)).collect();
        let report = validate_esd_within(&g, &live, &r);
        prop_assert!(report.ok(), "{:?}", report.violations);
    }

    #[test]
    fn interchange_roundtrips(seed in any::<u64>()) {
        let (_, d) = random_esd(seed);
        prop_assert_eq!(Esd::from_json(&d.to_json()).unwrap(), d);
    }
}
