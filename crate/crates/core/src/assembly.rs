//! Assembling per-atom independent sets into a global one.
//!
//! Given a decomposition (H, eta) and an independent set I(A) inside every
//! atom A, the best union over an independent atom family reduces to
//! maximum-weight matching in an auxiliary graph H': H plus one subdivision
//! vertex x_e per edge, with edge weights measuring how much an atom gains
//! over the vertex/bottom/triangle atoms it absorbs.

use crate::esd::{atoms, conflicts, Atom, AtomFamily, AtomKind, Esd, HEdge};
use crate::graph::{Graph, Vertex, VertexSet, WeightFn};
use crate::matching::{max_weight_matching, EdgeWeightedGraph, Matching};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AssemblyError {
    #[error("no independent set supplied for nonempty atom {0:?}")]
    MissingAtom(AtomKind),
    #[error("supplied set for atom {0:?} is not independent")]
    NotIndependent(AtomKind),
    #[error("supplied set for atom {0:?} is not contained in the atom")]
    NotSubset(AtomKind),
    #[error("atom family is not independent")]
    FamilyNotIndependent,
    #[error("edge set is not a matching")]
    NotAMatching,
}

#[derive(Debug, Clone)]
pub struct AssemblyInput<'a> {
    pub g: &'a Graph,
    pub w: &'a WeightFn,
    pub d: &'a Esd,
    /// Independent set chosen inside each atom, keyed by atom kind. Atoms
    /// with empty vertex set may be omitted (treated as the empty set).
    pub per_atom: &'a BTreeMap<AtomKind, VertexSet>,
}

#[derive(Debug, Clone)]
pub struct AssemblyOutput {
    pub aux: Auxiliary,
    pub offset_a: i64,
    pub matching: Matching,
    pub family: AtomFamily,
    pub result: VertexSet,
}

/// The auxiliary matching instance: H with a vertex x_e spliced in per edge.
/// Pattern vertices keep their indices; x_e for the i-th pattern edge (in
/// sorted order) is vertex h_n + i.
#[derive(Debug, Clone)]
pub struct Auxiliary {
    pub graph: EdgeWeightedGraph,
    pub h_n: usize,
    pub edge_order: Vec<HEdge>,
}

impl Auxiliary {
    pub fn x_vertex(&self, e: HEdge) -> Vertex {
        self.h_n + self.edge_order.iter().position(|&f| f == e).unwrap()
    }
}

fn checked_weights(in_: &AssemblyInput<'_>) -> Result<BTreeMap<AtomKind, i64>, AssemblyError> {
    let mut out = BTreeMap::new();
    for atom in atoms(in_.g, in_.d) {
        let set = match in_.per_atom.get(&atom.kind) {
            Some(s) => s.clone(),
            None if atom.vertices.is_empty() => VertexSet::new(),
            None => return Err(AssemblyError::MissingAtom(atom.kind)),
        };
        if !set.is_subset(&atom.vertices) {
            return Err(AssemblyError::NotSubset(atom.kind));
        }
        if !in_.g.is_independent(&set) {
            return Err(AssemblyError::NotIndependent(atom.kind));
        }
        out.insert(atom.kind, in_.w.total(&set) as i64);
    }
    Ok(out)
}

/// Builds (H', w') and the offset a. w'(x_eu) = w(I(A_e^u)) - w(I(A_u)) -
/// w(I(A_e^bot)); w'(e) additionally subtracts the far vertex atom and the
/// triangle atoms over e; a collects all vertex, bottom, and triangle atoms.
pub fn build_auxiliary(in_: &AssemblyInput<'_>) -> Result<(Auxiliary, i64), AssemblyError> {
    let wa = checked_weights(in_)?;
    let d = in_.d;
    let h_n = d.pattern().n();
    let edge_order = d.pattern_edges();

    let mut base = Graph::new(h_n + edge_order.len());
    let mut aux = {
        for (i, &(u, v)) in edge_order.iter().enumerate() {
            base.add_edge(u, v);
            base.add_edge(h_n + i, u);
            base.add_edge(h_n + i, v);
        }
        EdgeWeightedGraph::new(base)
    };
    for (i, &e) in edge_order.iter().enumerate() {
        let (u, v) = e;
        let x = h_n + i;
        let w_bot = wa[&AtomKind::EdgeBot(e)];
        let w_u = wa[&AtomKind::Vertex(u)];
        let w_v = wa[&AtomKind::Vertex(v)];
        aux.set_weight(x, u, wa[&AtomKind::EdgeEnd(e, u)] - w_u - w_bot);
        aux.set_weight(x, v, wa[&AtomKind::EdgeEnd(e, v)] - w_v - w_bot);
        let tri: i64 = d
            .triangles_of_edge(e)
            .into_iter()
            .map(|t| wa[&AtomKind::Triangle(t)])
            .sum();
        aux.set_weight(u, v, wa[&AtomKind::EdgeFull(e)] - w_u - w_v - w_bot - tri);
    }
    let offset_a: i64 = d
        .pattern()
        .vertices()
        .map(|v| wa[&AtomKind::Vertex(v)])
        .chain(edge_order.iter().map(|&e| wa[&AtomKind::EdgeBot(e)]))
        .chain(d.triangles().iter().map(|&t| wa[&AtomKind::Triangle(t)]))
        .sum();
    Ok((
        Auxiliary {
            graph: aux,
            h_n,
            edge_order,
        },
        offset_a,
    ))
}

/// M(A): edge e for A_e^{uv}, edge x_eu for A_e^u. Vertex, bottom, and
/// triangle atoms contribute nothing.
pub fn atoms_to_matching(
    family: &AtomFamily,
    d: &Esd,
    aux: &Auxiliary,
) -> Result<Matching, AssemblyError> {
    for (i, a) in family.atoms.iter().enumerate() {
        for b in &family.atoms[i + 1..] {
            if conflicts(a, b, d) {
                return Err(AssemblyError::FamilyNotIndependent);
            }
        }
    }
    let mut m = Matching {
        edges: Default::default(),
    };
    for a in &family.atoms {
        match a.kind {
            AtomKind::EdgeFull((u, v)) => {
                m.edges.insert((u.min(v), u.max(v)));
            }
            AtomKind::EdgeEnd(e, u) => {
                let x = aux.x_vertex(e);
                m.edges.insert((u.min(x), u.max(x)));
            }
            _ => {}
        }
    }
    debug_assert!(m.is_valid(), "independent atom family mapped to a non-matching");
    Ok(m)
}

/// A(M): the edge atom selected by each matched edge, the bottom atom of
/// every untouched pattern edge, and the vertex/triangle atoms nothing
/// claims.
pub fn matching_to_atoms(
    m: &Matching,
    g: &Graph,
    d: &Esd,
    aux: &Auxiliary,
) -> Result<AtomFamily, AssemblyError> {
    if !m.is_valid() {
        return Err(AssemblyError::NotAMatching);
    }
    let all = atoms(g, d);
    let by_kind: BTreeMap<AtomKind, &Atom> = all.iter().map(|a| (a.kind, a)).collect();
    let mut chosen: Vec<Atom> = vec![];
    let has = |a: Vertex, b: Vertex| m.edges.contains(&(a.min(b), a.max(b)));

    for &e in &aux.edge_order {
        let (u, v) = e;
        let x = aux.x_vertex(e);
        let kind = if has(u, v) {
            AtomKind::EdgeFull(e)
        } else if has(x, u) {
            AtomKind::EdgeEnd(e, u)
        } else if has(x, v) {
            AtomKind::EdgeEnd(e, v)
        } else {
            AtomKind::EdgeBot(e)
        };
        chosen.push((*by_kind[&kind]).clone());
    }
    for v in d.pattern().vertices() {
        if !m.covers(v) {
            chosen.push((*by_kind[&AtomKind::Vertex(v)]).clone());
        }
    }
    for t in d.triangles() {
        let edge_matched = [(t.0, t.1), (t.0, t.2), (t.1, t.2)]
            .iter()
            .any(|&(a, b)| has(a, b));
        if !edge_matched {
            chosen.push((*by_kind[&AtomKind::Triangle(t)]).clone());
        }
    }
    let family = AtomFamily {
        atoms: chosen,
        independent: true,
    };
    debug_assert!(
        family
            .atoms
            .iter()
            .enumerate()
            .all(|(i, a)| family.atoms[i + 1..].iter().all(|b| !conflicts(a, b, d))),
        "matching mapped to a conflicting atom family"
    );
    Ok(family)
}

/// Best union over independent atom families via maximum-weight matching.
pub fn assemble(in_: &AssemblyInput<'_>) -> Result<AssemblyOutput, AssemblyError> {
    let (aux, offset_a) = build_auxiliary(in_)?;
    let matching = max_weight_matching(&aux.graph);
    let family = matching_to_atoms(&matching, in_.g, in_.d, &aux)?;
    let mut result = VertexSet::new();
    for a in &family.atoms {
        if let Some(s) = in_.per_atom.get(&a.kind) {
            result.extend(s.iter().copied());
        }
    }
    debug_assert!(
        in_.g.is_independent(&result),
        "assembled set is not independent"
    );
    debug_assert_eq!(
        in_.w.total(&result) as i64,
        offset_a + matching.weight(&aux.graph),
        "assembled weight disagrees with offset plus matching weight"
    );
    Ok(AssemblyOutput {
        aux,
        offset_a,
        matching,
        family,
        result,
    })
}

/// Total chosen weight of a family under the per-atom selections.
pub fn family_weight(
    family: &AtomFamily,
    w: &WeightFn,
    per_atom: &BTreeMap<AtomKind, VertexSet>,
) -> i64 {
    family
        .atoms
        .iter()
        .map(|a| {
            per_atom
                .get(&a.kind)
                .map(|s| w.total(s) as i64)
                .unwrap_or(0)
        })
        .sum()
}
