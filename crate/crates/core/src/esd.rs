//! Extended strip decompositions: representation, validation, atoms,
//! conflicts, independent atom families, restriction, peripheral vertices,
//! and shattering checks.
//!
//! A decomposition of a graph G consists of a pattern graph H together with
//! vertex sets eta(v) per H-vertex, eta(e) per H-edge with designated end
//! subsets eta(e,u), eta(e,v), and eta(T) per triangle of H. The eta-sets
//! partition V(G) and constrain which G-edges may exist across them.

use crate::graph::{Graph, Vertex, VertexSet};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// An edge of the pattern graph, stored with endpoints sorted.
pub type HEdge = (Vertex, Vertex);

/// A triangle of the pattern graph, stored with corners sorted.
pub type HTriangle = (Vertex, Vertex, Vertex);

pub fn hedge(u: Vertex, v: Vertex) -> HEdge {
    (u.min(v), u.max(v))
}

pub fn htriangle(a: Vertex, b: Vertex, c: Vertex) -> HTriangle {
    let mut t = [a, b, c];
    t.sort_unstable();
    (t[0], t[1], t[2])
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EsdError {
    #[error("set is not independent")]
    NotIndependent,
    #[error("graph too large for exhaustive check: {0} vertices")]
    CapExceeded(usize),
    #[error("decomposition invalid after restriction: {0}")]
    InvalidRestriction(String),
    #[error("malformed decomposition data: {0}")]
    Malformed(String),
}

/// An extended strip decomposition. Immutable once built; every accessor is
/// total (maps are fully populated for the pattern's vertices, edges, and
/// triangles at construction).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Esd {
    pattern: Graph,
    eta_vertex: BTreeMap<Vertex, VertexSet>,
    eta_edge: BTreeMap<HEdge, VertexSet>,
    eta_end: BTreeMap<(HEdge, Vertex), VertexSet>,
    eta_triangle: BTreeMap<HTriangle, VertexSet>,
}

impl Esd {
    /// A decomposition over `pattern` with all eta-sets empty.
    pub fn new(pattern: Graph) -> Self {
        assert!(pattern.n() > 0, "pattern graph must be non-empty");
        let mut eta_vertex = BTreeMap::new();
        for v in pattern.vertices() {
            eta_vertex.insert(v, VertexSet::new());
        }
        let mut eta_edge = BTreeMap::new();
        let mut eta_end = BTreeMap::new();
        for (u, v) in pattern.edges() {
            let e = hedge(u, v);
            eta_edge.insert(e, VertexSet::new());
            eta_end.insert((e, u), VertexSet::new());
            eta_end.insert((e, v), VertexSet::new());
        }
        let mut eta_triangle = BTreeMap::new();
        for t in triangles_of(&pattern) {
            eta_triangle.insert(t, VertexSet::new());
        }
        Esd {
            pattern,
            eta_vertex,
            eta_edge,
            eta_end,
            eta_triangle,
        }
    }

    pub fn pattern(&self) -> &Graph {
        &self.pattern
    }

    pub fn pattern_edges(&self) -> Vec<HEdge> {
        self.eta_edge.keys().copied().collect()
    }

    pub fn triangles(&self) -> Vec<HTriangle> {
        self.eta_triangle.keys().copied().collect()
    }

    /// Triangles of the pattern containing edge `e`.
    pub fn triangles_of_edge(&self, e: HEdge) -> Vec<HTriangle> {
        self.eta_triangle
            .keys()
            .copied()
            .filter(|&(a, b, c)| {
                let (u, v) = e;
                (u == a || u == b || u == c) && (v == a || v == b || v == c)
            })
            .collect()
    }

    pub fn eta_vertex(&self, v: Vertex) -> &VertexSet {
        &self.eta_vertex[&v]
    }

    pub fn eta_edge(&self, e: HEdge) -> &VertexSet {
        &self.eta_edge[&e]
    }

    pub fn eta_end(&self, e: HEdge, endpoint: Vertex) -> &VertexSet {
        &self.eta_end[&(e, endpoint)]
    }

    pub fn eta_triangle(&self, t: HTriangle) -> &VertexSet {
        &self.eta_triangle[&t]
    }

    pub fn set_eta_vertex(&mut self, v: Vertex, s: VertexSet) {
        assert!(v < self.pattern.n());
        self.eta_vertex.insert(v, s);
    }

    pub fn set_eta_edge(&mut self, u: Vertex, v: Vertex, all: VertexSet, end_u: VertexSet, end_v: VertexSet) {
        let e = hedge(u, v);
        assert!(self.eta_edge.contains_key(&e), "edge not in pattern");
        self.eta_edge.insert(e, all);
        self.eta_end.insert((e, u), end_u);
        self.eta_end.insert((e, v), end_v);
    }

    pub fn set_eta_triangle(&mut self, t: HTriangle, s: VertexSet) {
        assert!(self.eta_triangle.contains_key(&t), "triangle not in pattern");
        self.eta_triangle.insert(t, s);
    }

    /// Union of all eta-sets: the vertex set of the decomposed graph.
    pub fn universe(&self) -> VertexSet {
        let mut u = VertexSet::new();
        for s in self
            .eta_vertex
            .values()
            .chain(self.eta_edge.values())
            .chain(self.eta_triangle.values())
        {
            u.extend(s.iter().copied());
        }
        u
    }

    pub fn to_file(&self) -> EsdFile {
        let edges: Vec<(usize, usize)> = self.eta_edge.keys().copied().collect();
        EsdFile {
            pattern: PatternFile {
                n: self.pattern.n(),
                edges: edges.clone(),
            },
            eta: EtaFile {
                vertices: (0..self.pattern.n())
                    .map(|v| self.eta_vertex[&v].iter().copied().collect())
                    .collect(),
                edges: edges
                    .iter()
                    .map(|&(u, v)| EdgeEtaFile {
                        all: self.eta_edge[&(u, v)].iter().copied().collect(),
                        end_u: self.eta_end[&((u, v), u)].iter().copied().collect(),
                        end_v: self.eta_end[&((u, v), v)].iter().copied().collect(),
                    })
                    .collect(),
                triangles: self
                    .eta_triangle
                    .iter()
                    .map(|(&(a, b, c), s)| TriangleEtaFile {
                        corners: [a, b, c],
                        set: s.iter().copied().collect(),
                    })
                    .collect(),
            },
        }
    }

    pub fn from_file(f: &EsdFile) -> Result<Esd, EsdError> {
        if f.pattern.n == 0 {
            return Err(EsdError::Malformed("pattern graph is empty".into()));
        }
        for &(u, v) in &f.pattern.edges {
            if u == v || u >= f.pattern.n || v >= f.pattern.n {
                return Err(EsdError::Malformed(format!("bad pattern edge ({u}, {v})")));
            }
        }
        if f.eta.vertices.len() != f.pattern.n {
            return Err(EsdError::Malformed(format!(
                "eta.vertices has {} entries for a {}-vertex pattern",
                f.eta.vertices.len(),
                f.pattern.n
            )));
        }
        if f.eta.edges.len() != f.pattern.edges.len() {
            return Err(EsdError::Malformed(format!(
                "eta.edges has {} entries for {} pattern edges",
                f.eta.edges.len(),
                f.pattern.edges.len()
            )));
        }
        let pattern = Graph::from_edges(f.pattern.n, &f.pattern.edges);
        if pattern.m() != f.pattern.edges.len() {
            return Err(EsdError::Malformed("duplicate pattern edge".into()));
        }
        let mut d = Esd::new(pattern);
        for (v, s) in f.eta.vertices.iter().enumerate() {
            d.set_eta_vertex(v, s.iter().copied().collect());
        }
        for (&(u, v), ee) in f.pattern.edges.iter().zip(&f.eta.edges) {
            d.set_eta_edge(
                u,
                v,
                ee.all.iter().copied().collect(),
                ee.end_u.iter().copied().collect(),
                ee.end_v.iter().copied().collect(),
            );
        }
        for te in &f.eta.triangles {
            let t = htriangle(te.corners[0], te.corners[1], te.corners[2]);
            if !d.eta_triangle.contains_key(&t) {
                return Err(EsdError::Malformed(format!(
                    "eta.triangles references {:?}, not a triangle of the pattern",
                    te.corners
                )));
            }
            d.set_eta_triangle(t, te.set.iter().copied().collect());
        }
        Ok(d)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Esd, EsdError> {
        let f: EsdFile =
            serde_json::from_str(text).map_err(|e| EsdError::Malformed(e.to_string()))?;
        Esd::from_file(&f)
    }
}

/// Interchange form: a pattern graph plus eta-sets, with eta.edges parallel
/// to pattern.edges (end_u belongs to the first listed endpoint).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EsdFile {
    pub pattern: PatternFile,
    pub eta: EtaFile,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PatternFile {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EtaFile {
    pub vertices: Vec<Vec<Vertex>>,
    pub edges: Vec<EdgeEtaFile>,
    #[serde(default)]
    pub triangles: Vec<TriangleEtaFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeEtaFile {
    pub all: Vec<Vertex>,
    pub end_u: Vec<Vertex>,
    pub end_v: Vec<Vertex>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TriangleEtaFile {
    pub corners: [Vertex; 3],
    pub set: Vec<Vertex>,
}

fn triangles_of(h: &Graph) -> Vec<HTriangle> {
    let mut out = vec![];
    for a in h.vertices() {
        for &b in h.neighbors(a) {
            if b <= a {
                continue;
            }
            for &c in h.neighbors(b) {
                if c > b && h.has_edge(a, c) {
                    out.push((a, b, c));
                }
            }
        }
    }
    out
}

/// The trivial decomposition: an edgeless pattern with one vertex per
/// connected component, mapped to that component.
pub fn trivial_esd(g: &Graph) -> Esd {
    let comps = g.connected_components();
    let h = Graph::new(comps.len().max(1));
    let mut d = Esd::new(h);
    for (i, c) in comps.into_iter().enumerate() {
        d.set_eta_vertex(i, c);
    }
    d
}

/// An edgeless-pattern decomposition over an explicit list of parts (which
/// need not be connected). With no parts, a single pattern vertex with an
/// empty image is used, matching `trivial_esd` on the empty graph.
pub fn partition_esd(parts: &[VertexSet]) -> Esd {
    let h = Graph::new(parts.len().max(1));
    let mut d = Esd::new(h);
    for (i, p) in parts.iter().enumerate() {
        d.set_eta_vertex(i, p.clone());
    }
    d
}

/// Renames every decomposed vertex through `names` (the inverse of an
/// induced-subgraph reindexing), leaving the pattern untouched.
pub fn relabel_esd(d: &Esd, names: &[Vertex]) -> Esd {
    let map = |s: &VertexSet| -> VertexSet { s.iter().map(|&v| names[v]).collect() };
    let mut out = Esd::new(d.pattern().clone());
    for v in 0..d.pattern().n() {
        out.set_eta_vertex(v, map(d.eta_vertex(v)));
    }
    for e in d.pattern_edges() {
        out.set_eta_edge(
            e.0,
            e.1,
            map(d.eta_edge(e)),
            map(d.eta_end(e, e.0)),
            map(d.eta_end(e, e.1)),
        );
    }
    for t in d.triangles() {
        let s = map(d.eta_triangle(t));
        out.set_eta_triangle(t, s);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EsdViolation {
    /// A vertex appears in `count` eta-sets instead of exactly one.
    NotPartitioned { vertex: Vertex, count: usize },
    /// An end set is not a subset of its edge set.
    EndNotSubset { edge: HEdge, endpoint: Vertex },
    /// eta(e, v) and eta(e', v) must be fully adjacent; edge (x, y) is missing.
    MissingAdjacency {
        shared: Vertex,
        e1: HEdge,
        e2: HEdge,
        x: Vertex,
        y: Vertex,
    },
    /// A graph edge is neither internal to an eta-set nor of a permitted type.
    ForbiddenEdge { x: Vertex, y: Vertex },
    /// The decomposition references a vertex outside the decomposed graph.
    ForeignVertex { vertex: Vertex },
}

impl fmt::Display for EsdViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EsdViolation::NotPartitioned { vertex, count } => {
                write!(f, "vertex {vertex} appears in {count} eta-sets")
            }
            EsdViolation::EndNotSubset { edge, endpoint } => {
                write!(f, "end set at {endpoint} of edge {edge:?} exceeds the edge set")
            }
            EsdViolation::MissingAdjacency { shared, e1, e2, x, y } => write!(
                f,
                "ends at {shared} of {e1:?} and {e2:?} not fully adjacent: ({x}, {y}) missing"
            ),
            EsdViolation::ForbiddenEdge { x, y } => {
                write!(f, "edge ({x}, {y}) is not of a permitted type")
            }
            EsdViolation::ForeignVertex { vertex } => {
                write!(f, "vertex {vertex} is not in the decomposed graph")
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct EsdValidation {
    pub violations: Vec<EsdViolation>,
}

impl EsdValidation {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Which eta-set a decomposed vertex lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Location {
    AtVertex(Vertex),
    AtEdge(HEdge),
    AtTriangle(HTriangle),
}

fn locations(d: &Esd) -> BTreeMap<Vertex, Vec<Location>> {
    let mut loc: BTreeMap<Vertex, Vec<Location>> = BTreeMap::new();
    for (&v, s) in &d.eta_vertex {
        for &x in s {
            loc.entry(x).or_default().push(Location::AtVertex(v));
        }
    }
    for (&e, s) in &d.eta_edge {
        for &x in s {
            loc.entry(x).or_default().push(Location::AtEdge(e));
        }
    }
    for (&t, s) in &d.eta_triangle {
        for &x in s {
            loc.entry(x).or_default().push(Location::AtTriangle(t));
        }
    }
    loc
}

/// Validates `d` as a decomposition of the subgraph of `g` induced by `live`
/// (with original vertex labels). Violations are data, not errors.
pub fn validate_esd_within(g: &Graph, live: &VertexSet, d: &Esd) -> EsdValidation {
    let mut violations = vec![];

    let loc = locations(d);
    for (&x, ls) in &loc {
        if x >= g.n() || !live.contains(&x) {
            violations.push(EsdViolation::ForeignVertex { vertex: x });
        } else if ls.len() != 1 {
            violations.push(EsdViolation::NotPartitioned {
                vertex: x,
                count: ls.len(),
            });
        }
    }
    for &x in live {
        if !loc.contains_key(&x) {
            violations.push(EsdViolation::NotPartitioned { vertex: x, count: 0 });
        }
    }

    for (&(e, endpoint), s) in &d.eta_end {
        if !s.is_subset(&d.eta_edge[&e]) {
            violations.push(EsdViolation::EndNotSubset { edge: e, endpoint });
        }
    }
    if !violations.is_empty() {
        return EsdValidation { violations };
    }

    // Full adjacency between the ends of distinct edges at a shared vertex.
    for v in d.pattern.vertices() {
        let incident: Vec<HEdge> = d
            .eta_edge
            .keys()
            .copied()
            .filter(|&(a, b)| a == v || b == v)
            .collect();
        for i in 0..incident.len() {
            for j in i + 1..incident.len() {
                let (e1, e2) = (incident[i], incident[j]);
                for &x in d.eta_end(e1, v) {
                    for &y in d.eta_end(e2, v) {
                        if x != y && !g.has_edge(x, y) {
                            violations.push(EsdViolation::MissingAdjacency {
                                shared: v,
                                e1,
                                e2,
                                x,
                                y,
                            });
                        }
                    }
                }
            }
        }
    }

    // Every edge of the decomposed graph is internal to one eta-set or of
    // one of the three permitted cross types.
    let in_end = |x: Vertex, e: HEdge, v: Vertex| d.eta_end(e, v).contains(&x);
    for (x, y) in g.edges() {
        if !live.contains(&x) || !live.contains(&y) {
            continue;
        }
        let (lx, ly) = (loc[&x][0], loc[&y][0]);
        if lx == ly {
            continue;
        }
        let permitted = |a: Vertex, la: Location, b: Vertex, lb: Location| match (la, lb) {
            // Ends of two distinct edges at a shared pattern vertex.
            (Location::AtEdge(e1), Location::AtEdge(e2)) => d.pattern.vertices().any(|v| {
                (e1.0 == v || e1.1 == v)
                    && (e2.0 == v || e2.1 == v)
                    && in_end(a, e1, v)
                    && in_end(b, e2, v)
            }),
            // A pattern-vertex set to an end of an incident edge.
            (Location::AtVertex(v), Location::AtEdge(e)) => {
                (e.0 == v || e.1 == v) && in_end(b, e, v)
            }
            // A triangle set to the intersection of both ends of a triangle edge.
            (Location::AtTriangle(t), Location::AtEdge(e)) => {
                let (ta, tb, tc) = t;
                let (u, v) = e;
                [ta, tb, tc].contains(&u)
                    && [ta, tb, tc].contains(&v)
                    && in_end(b, e, u)
                    && in_end(b, e, v)
            }
            _ => false,
        };
        if !permitted(x, lx, y, ly) && !permitted(y, ly, x, lx) {
            violations.push(EsdViolation::ForbiddenEdge { x, y });
        }
    }

    EsdValidation { violations }
}

/// Validates `d` as a decomposition of all of `g`.
pub fn validate_esd(g: &Graph, d: &Esd) -> EsdValidation {
    validate_esd_within(g, &g.vertex_set(), d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum AtomKind {
    /// eta(e) minus both ends.
    EdgeBot(HEdge),
    /// eta(u) plus eta(e) minus the far end.
    EdgeEnd(HEdge, Vertex),
    /// eta(u), eta(v), eta(e), and the triangle sets over e.
    EdgeFull(HEdge),
    /// eta(v).
    Vertex(Vertex),
    /// eta(T).
    Triangle(HTriangle),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub kind: AtomKind,
    pub vertices: VertexSet,
    pub trivial: bool,
}

/// All atoms of `d`, in a deterministic order; `g` is the decomposed graph
/// (used only to flag trivial atoms).
pub fn atoms(g: &Graph, d: &Esd) -> Vec<Atom> {
    let mut out = vec![];
    for v in d.pattern.vertices() {
        let vs = d.eta_vertex(v).clone();
        let trivial = d.pattern.degree(v) == 0
            && vs.len() == 1
            && vs.iter().all(|&x| g.degree(x) == 0);
        out.push(Atom {
            kind: AtomKind::Vertex(v),
            vertices: vs,
            trivial,
        });
    }
    for e in d.pattern_edges() {
        let (u, v) = e;
        let all = d.eta_edge(e);
        let end_u = d.eta_end(e, u);
        let end_v = d.eta_end(e, v);
        let bot: VertexSet = all
            .iter()
            .copied()
            .filter(|x| !end_u.contains(x) && !end_v.contains(x))
            .collect();
        let at_u: VertexSet = d
            .eta_vertex(u)
            .iter()
            .chain(all.iter().filter(|x| !end_v.contains(x)))
            .copied()
            .collect();
        let at_v: VertexSet = d
            .eta_vertex(v)
            .iter()
            .chain(all.iter().filter(|x| !end_u.contains(x)))
            .copied()
            .collect();
        let mut full: VertexSet = d
            .eta_vertex(u)
            .iter()
            .chain(d.eta_vertex(v).iter())
            .chain(all.iter())
            .copied()
            .collect();
        for t in d.triangles_of_edge(e) {
            full.extend(d.eta_triangle(t).iter().copied());
        }
        out.push(Atom {
            kind: AtomKind::EdgeBot(e),
            vertices: bot,
            trivial: false,
        });
        out.push(Atom {
            kind: AtomKind::EdgeEnd(e, u),
            vertices: at_u,
            trivial: false,
        });
        out.push(Atom {
            kind: AtomKind::EdgeEnd(e, v),
            vertices: at_v,
            trivial: false,
        });
        out.push(Atom {
            kind: AtomKind::EdgeFull(e),
            vertices: full,
            trivial: false,
        });
    }
    for t in d.triangles() {
        out.push(Atom {
            kind: AtomKind::Triangle(t),
            vertices: d.eta_triangle(t).clone(),
            trivial: false,
        });
    }
    out
}

fn incident(e: HEdge, v: Vertex) -> bool {
    e.0 == v || e.1 == v
}

fn edge_in_triangle(e: HEdge, t: HTriangle) -> bool {
    let c = [t.0, t.1, t.2];
    c.contains(&e.0) && c.contains(&e.1)
}

/// The pattern edge an edge atom belongs to, if any.
fn atom_edge(k: AtomKind) -> Option<HEdge> {
    match k {
        AtomKind::EdgeBot(e) | AtomKind::EdgeEnd(e, _) | AtomKind::EdgeFull(e) => Some(e),
        _ => None,
    }
}

/// The pattern vertices whose eta(v) the atom absorbs.
fn claimed(k: AtomKind) -> Vec<Vertex> {
    match k {
        AtomKind::EdgeEnd(_, u) => vec![u],
        AtomKind::EdgeFull((u, v)) => vec![u, v],
        _ => vec![],
    }
}

/// Whether two atoms conflict, i.e. the decomposition does not guarantee
/// them disjoint and non-adjacent. Symmetric; an atom conflicts with itself.
pub fn conflicts(a1: &Atom, a2: &Atom, _d: &Esd) -> bool {
    use AtomKind::*;
    let (k1, k2) = (a1.kind, a2.kind);
    if k1 == k2 {
        return true;
    }
    // The four atoms of one edge pairwise conflict.
    if let (Some(e), Some(f)) = (atom_edge(k1), atom_edge(k2)) {
        if e == f {
            return true;
        }
        // Edge atoms over distinct edges conflict iff both absorb eta(u)
        // for a shared endpoint u.
        return claimed(k1).iter().any(|u| claimed(k2).contains(u));
    }
    // An edge atom absorbing eta(u) conflicts with the vertex atom at u.
    let vertex_vs_edge = |kv: AtomKind, ke: AtomKind| match kv {
        Vertex(w) => claimed(ke).contains(&w),
        _ => false,
    };
    if vertex_vs_edge(k1, k2) || vertex_vs_edge(k2, k1) {
        return true;
    }
    // A full edge atom absorbs the triangle sets over its edge.
    let triangle_vs_edge = |kt: AtomKind, ke: AtomKind| match (kt, ke) {
        (Triangle(t), EdgeFull(e)) => edge_in_triangle(e, t),
        _ => false,
    };
    triangle_vs_edge(k1, k2) || triangle_vs_edge(k2, k1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomFamily {
    pub atoms: Vec<Atom>,
    pub independent: bool,
}

impl AtomFamily {
    pub fn union(&self) -> VertexSet {
        let mut u = VertexSet::new();
        for a in &self.atoms {
            u.extend(a.vertices.iter().copied());
        }
        u
    }
}

/// The canonical independent atom family covering an independent set `i`:
/// per edge the unique atom matching which ends `i` meets, plus the vertex
/// and triangle atoms that no chosen edge atom claims.
pub fn atom_family_of_independent_set(
    g: &Graph,
    d: &Esd,
    i: &VertexSet,
) -> Result<AtomFamily, EsdError> {
    if !g.is_independent(i) {
        return Err(EsdError::NotIndependent);
    }
    let all = atoms(g, d);
    let by_kind: BTreeMap<AtomKind, &Atom> = all.iter().map(|a| (a.kind, a)).collect();
    let meets = |s: &VertexSet| s.iter().any(|x| i.contains(x));

    let mut chosen: Vec<Atom> = vec![];
    for e in d.pattern_edges() {
        let (u, v) = e;
        let hit_u = meets(d.eta_end(e, u));
        let hit_v = meets(d.eta_end(e, v));
        let kind = match (hit_u, hit_v) {
            (true, true) => AtomKind::EdgeFull(e),
            (true, false) => AtomKind::EdgeEnd(e, u),
            (false, true) => AtomKind::EdgeEnd(e, v),
            (false, false) => AtomKind::EdgeBot(e),
        };
        chosen.push(by_kind[&kind].clone());
    }
    for v in d.pattern.vertices() {
        let free = d
            .pattern_edges()
            .iter()
            .filter(|&&e| incident(e, v))
            .all(|&e| !meets(d.eta_end(e, v)));
        if free {
            chosen.push(by_kind[&AtomKind::Vertex(v)].clone());
        }
    }
    for t in d.triangles() {
        let edges = [
            hedge(t.0, t.1),
            hedge(t.0, t.2),
            hedge(t.1, t.2),
        ];
        let free = edges
            .iter()
            .all(|&e| !meets(d.eta_end(e, e.0)) || !meets(d.eta_end(e, e.1)));
        if free {
            chosen.push(by_kind[&AtomKind::Triangle(t)].clone());
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
            .all(|(ix, a)| family.atoms[ix + 1..].iter().all(|b| !conflicts(a, b, d))),
        "constructed family has conflicting atoms"
    );
    assert!(
        i.is_subset(&family.union()),
        "constructed family does not cover the independent set"
    );
    Ok(family)
}

/// The decomposition with `removed` subtracted from every eta-set; the
/// pattern is unchanged. Validity for the reduced graph is the caller's
/// obligation and is checked in debug builds.
pub fn restrict_esd(g: &Graph, d: &Esd, removed: &VertexSet) -> Esd {
    let mut out = d.clone();
    let prune = |s: &mut VertexSet| s.retain(|x| !removed.contains(x));
    for s in out.eta_vertex.values_mut() {
        prune(s);
    }
    for s in out.eta_edge.values_mut() {
        prune(s);
    }
    for s in out.eta_end.values_mut() {
        prune(s);
    }
    for s in out.eta_triangle.values_mut() {
        prune(s);
    }
    #[cfg(debug_assertions)]
    {
        let live: VertexSet = g.vertices().filter(|v| !removed.contains(v)).collect();
        let check = validate_esd_within(g, &live, &out);
        assert!(
            check.ok(),
            "restriction produced an invalid decomposition: {:?}",
            check.violations
        );
    }
    #[cfg(not(debug_assertions))]
    let _ = g;
    out
}

/// Vertices z with a degree-one pattern vertex whose unique edge has end
/// set exactly {z}.
pub fn peripheral_vertices(_g: &Graph, d: &Esd) -> VertexSet {
    let mut out = VertexSet::new();
    for w in d.pattern.vertices() {
        if d.pattern.degree(w) != 1 {
            continue;
        }
        let u = *d.pattern.neighbors(w).iter().next().unwrap();
        let e = hedge(w, u);
        let end = d.eta_end(e, w);
        if end.len() == 1 {
            out.extend(end.iter().copied());
        }
    }
    out
}

pub const SHATTER_CAP: usize = 14;

/// Whether `d` shatters the triple `z`: no atom intersects or is adjacent to
/// all three paths of any triple of pairwise disjoint, pairwise nonadjacent
/// induced paths, each with one endpoint in `z`. Exhaustive; desk scale only.
pub fn shatters(g: &Graph, d: &Esd, z: &VertexSet) -> Result<bool, EsdError> {
    shatters_capped(g, d, z, SHATTER_CAP)
}

pub fn shatters_capped(g: &Graph, d: &Esd, z: &VertexSet, cap: usize) -> Result<bool, EsdError> {
    assert_eq!(z.len(), 3, "shattering is defined for triples");
    if g.n() > cap {
        return Err(EsdError::CapExceeded(g.n()));
    }
    let zs: Vec<Vertex> = z.iter().copied().collect();
    // All induced paths with the given endpoint, as vertex bitmasks.
    let paths_from = |start: Vertex| -> Vec<u32> {
        let mut out = vec![];
        let mut path = vec![start];
        let mut stack = vec![g.neighbors(start).iter().copied().collect::<Vec<_>>()];
        out.push(1u32 << start);
        while let Some(frontier) = stack.last_mut() {
            match frontier.pop() {
                Some(next) => {
                    // Extending keeps the path induced iff the new vertex is
                    // adjacent only to the current last vertex.
                    let last = *path.last().unwrap();
                    if path.contains(&next)
                        || path
                            .iter()
                            .any(|&p| p != last && g.has_edge(p, next))
                    {
                        continue;
                    }
                    path.push(next);
                    out.push(path.iter().fold(0u32, |m, &v| m | (1 << v)));
                    stack.push(g.neighbors(next).iter().copied().collect());
                }
                None => {
                    stack.pop();
                    path.pop();
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    };
    let all_paths: Vec<Vec<u32>> = zs.iter().map(|&s| paths_from(s)).collect();
    let nbr_mask: Vec<u32> = (0..g.n())
        .map(|v| g.neighbors(v).iter().fold(1u32 << v, |m, &u| m | (1 << u)))
        .collect();
    let closed = |mask: u32| -> u32 {
        (0..g.n())
            .filter(|&v| mask & (1 << v) != 0)
            .fold(0u32, |m, v| m | nbr_mask[v])
    };
    let closures: Vec<Vec<u32>> = all_paths
        .iter()
        .map(|ps| ps.iter().map(|&m| closed(m)).collect())
        .collect();

    for atom in atoms(g, d) {
        if atom.vertices.is_empty() {
            continue;
        }
        let reach = closed(atom.vertices.iter().fold(0u32, |m, &v| m | (1 << v)));
        // Paths from each z-vertex that this atom intersects or touches.
        let touched: Vec<Vec<(u32, u32)>> = (0..3)
            .map(|k| {
                all_paths[k]
                    .iter()
                    .zip(&closures[k])
                    .filter(|&(&m, _)| m & reach != 0)
                    .map(|(&m, &c)| (m, c))
                    .collect()
            })
            .collect();
        for &(m1, c1) in &touched[0] {
            for &(m2, c2) in &touched[1] {
                if m1 & c2 != 0 || m2 & c1 != 0 {
                    continue;
                }
                for &(m3, c3) in &touched[2] {
                    if m3 & (c1 | c2) == 0 && (m1 | m2) & c3 == 0 {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests;
