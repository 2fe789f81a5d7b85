//! Loopless multigraphs with stable vertex and edge identities.
//!
//! Every operation returns a new graph. Identities of surviving vertices
//! and edges are preserved, so an edge set selected before a deletion or
//! contraction still refers to the same edges afterwards. Contraction
//! additionally reports where every vertex went and which edges were
//! consumed or dropped as loops.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use thiserror::Error;

/// Stable vertex identifier.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VertexId(pub(crate) u32);

/// Stable edge identifier.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct EdgeId(pub(crate) u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v#{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e#{}", self.0)
    }
}

pub type VertexSet = std::collections::BTreeSet<VertexId>;
pub type EdgeSet = std::collections::BTreeSet<EdgeId>;

/// An edge record. Endpoints are unordered; `a` and `b` keep the order
/// they were given in, which only matters for display.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub a: VertexId,
    pub b: VertexId,
    label: String,
}

impl Edge {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn touches(&self, v: VertexId) -> bool {
        self.a == v || self.b == v
    }

    /// The endpoint that is not `v`. Panics if the edge is not incident to `v`.
    pub fn other(&self, v: VertexId) -> VertexId {
        if self.a == v {
            self.b
        } else {
            assert_eq!(self.b, v, "edge {} is not incident to {}", self.id, v);
            self.a
        }
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("loop at vertex {0} is not allowed")]
    SelfLoop(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(String),
    #[error("unknown edge {0}")]
    UnknownEdge(String),
    #[error("duplicate edge label {0}")]
    DuplicateLabel(String),
}

/// Records what a contraction did: where each old vertex went, which edges
/// were contracted away, and which surviving-candidate edges were dropped
/// because both endpoints merged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionMap {
    vertex_map: BTreeMap<VertexId, VertexId>,
    contracted: EdgeSet,
    dropped_loops: EdgeSet,
}

impl ContractionMap {
    /// Image of a vertex. Identity for vertices the contraction never saw,
    /// so maps stay total under composition.
    pub fn image(&self, v: VertexId) -> VertexId {
        self.vertex_map.get(&v).copied().unwrap_or(v)
    }

    pub fn vertex_map(&self) -> &BTreeMap<VertexId, VertexId> {
        &self.vertex_map
    }

    pub fn contracted(&self) -> &EdgeSet {
        &self.contracted
    }

    pub fn dropped_loops(&self) -> &EdgeSet {
        &self.dropped_loops
    }

    /// Ids from `edges` that still exist after the contraction.
    pub fn surviving(&self, edges: &EdgeSet) -> EdgeSet {
        edges
            .iter()
            .copied()
            .filter(|e| !self.contracted.contains(e) && !self.dropped_loops.contains(e))
            .collect()
    }

    /// The map of `self` followed by `later`.
    pub fn compose(&self, later: &ContractionMap) -> ContractionMap {
        let mut vertex_map = BTreeMap::new();
        for (&v, &mid) in &self.vertex_map {
            vertex_map.insert(v, later.image(mid));
        }
        for (&v, &img) in &later.vertex_map {
            vertex_map.entry(v).or_insert(img);
        }
        let mut contracted = self.contracted.clone();
        contracted.extend(later.contracted.iter().copied());
        let mut dropped_loops = self.dropped_loops.clone();
        dropped_loops.extend(later.dropped_loops.iter().copied());
        ContractionMap {
            vertex_map,
            contracted,
            dropped_loops,
        }
    }
}

/// A loopless multigraph. Vertices and edges are kept in ascending id
/// order; ids are never reused within one graph lineage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiGraph {
    vertices: Vec<VertexId>,
    names: BTreeMap<VertexId, String>,
    edges: Vec<Edge>,
    next_vertex: u32,
    next_edge: u32,
}

impl MultiGraph {
    pub fn new() -> Self {
        MultiGraph {
            vertices: Vec::new(),
            names: BTreeMap::new(),
            edges: Vec::new(),
            next_vertex: 0,
            next_edge: 0,
        }
    }

    /// Build a graph from vertex names and unlabeled edges. Edges get
    /// positional labels `e1`, `e2`, ... in input order.
    pub fn build(vertices: &[&str], edges: &[(&str, &str)]) -> Result<Self, GraphError> {
        let labeled: Vec<(&str, &str, Option<&str>)> =
            edges.iter().map(|&(a, b)| (a, b, None)).collect();
        Self::build_labeled(vertices, &labeled)
    }

    /// Build a graph from vertex names and optionally labeled edges.
    /// Unlabeled edges get positional labels `e<k>` (1-based input order);
    /// a clash with an explicit label is an error.
    pub fn build_labeled(
        vertices: &[&str],
        edges: &[(&str, &str, Option<&str>)],
    ) -> Result<Self, GraphError> {
        let mut g = MultiGraph::new();
        for &name in vertices {
            g.add_named_vertex(name)?;
        }
        for &(a, b, label) in edges {
            let va = g
                .vertex_by_name(a)
                .ok_or_else(|| GraphError::UnknownVertex(a.to_string()))?;
            let vb = g
                .vertex_by_name(b)
                .ok_or_else(|| GraphError::UnknownVertex(b.to_string()))?;
            g.add_edge_exact(va, vb, label.map(str::to_string))?;
        }
        Ok(g)
    }

    fn add_named_vertex(&mut self, name: &str) -> Result<VertexId, GraphError> {
        if self.vertex_by_name(name).is_some() {
            return Err(GraphError::DuplicateVertex(name.to_string()));
        }
        let id = VertexId(self.next_vertex);
        self.next_vertex += 1;
        self.vertices.push(id);
        self.names.insert(id, name.to_string());
        Ok(id)
    }

    /// Add an edge whose label must be exactly as given (or positional when
    /// absent). Used by the builders and the parsers, where a duplicate
    /// label is a user error.
    fn add_edge_exact(
        &mut self,
        a: VertexId,
        b: VertexId,
        label: Option<String>,
    ) -> Result<EdgeId, GraphError> {
        if a == b {
            return Err(GraphError::SelfLoop(self.names[&a].clone()));
        }
        let id = EdgeId(self.next_edge);
        let label = label.unwrap_or_else(|| format!("e{}", id.0 + 1));
        if self.edge_by_label(&label).is_some() {
            return Err(GraphError::DuplicateLabel(label));
        }
        self.next_edge += 1;
        self.edges.push(Edge { id, a, b, label });
        Ok(id)
    }

    /// Add a vertex with a fresh id; the name is derived from `base`,
    /// uniquified if taken.
    pub(crate) fn fresh_vertex(&mut self, base: &str) -> VertexId {
        let mut name = base.to_string();
        let mut k = 1;
        while self.vertex_by_name(&name).is_some() {
            k += 1;
            name = format!("{base}~{k}");
        }
        self.add_named_vertex(&name).expect("uniquified name")
    }

    /// Add an edge with a fresh id; label derived from `base` (or
    /// positional), uniquified if taken. For construction operations,
    /// which must never fail on label clashes.
    pub(crate) fn fresh_edge(&mut self, a: VertexId, b: VertexId, base: Option<&str>) -> EdgeId {
        assert_ne!(a, b, "constructions never create loops");
        let id = EdgeId(self.next_edge);
        let mut label = base
            .map(str::to_string)
            .unwrap_or_else(|| format!("e{}", id.0 + 1));
        let mut k = 1;
        while self.edge_by_label(&label).is_some() {
            k += 1;
            label = format!(
                "{}~{k}",
                base.map(str::to_string)
                    .unwrap_or_else(|| format!("e{}", id.0 + 1))
            );
        }
        self.next_edge += 1;
        self.edges.push(Edge { id, a, b, label });
        id
    }

    /// Re-point one endpoint of an existing edge. Internal to the
    /// construction operations (vertex splitting).
    pub(crate) fn set_endpoint(&mut self, e: EdgeId, from: VertexId, to: VertexId) {
        let pos = self
            .edges
            .binary_search_by_key(&e, |r| r.id)
            .expect("edge exists");
        let rec = &mut self.edges[pos];
        if rec.a == from {
            rec.a = to;
        } else {
            assert_eq!(rec.b, from, "edge {e} is not incident to {from}");
            rec.b = to;
        }
        assert_ne!(rec.a, rec.b, "endpoint move would create a loop");
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Vertices in ascending id order.
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.vertices.iter().copied().collect()
    }

    /// Edges in ascending id order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_ids(&self) -> EdgeSet {
        self.edges.iter().map(|e| e.id).collect()
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edges
            .binary_search_by_key(&id, |r| r.id)
            .ok()
            .map(|pos| &self.edges[pos])
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn name(&self, v: VertexId) -> Option<&str> {
        self.names.get(&v).map(String::as_str)
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertices
            .iter()
            .copied()
            .find(|v| self.names[v] == name)
    }

    pub fn edge_by_label(&self, label: &str) -> Option<EdgeId> {
        self.edges.iter().find(|e| e.label == label).map(|e| e.id)
    }

    /// Degree counting parallel edges.
    pub fn degree(&self, v: VertexId) -> usize {
        self.edges.iter().filter(|e| e.touches(v)).count()
    }

    /// Number of edges joining `u` and `v`.
    pub fn multiplicity(&self, u: VertexId, v: VertexId) -> usize {
        self.edges
            .iter()
            .filter(|e| (e.a == u && e.b == v) || (e.a == v && e.b == u))
            .count()
    }

    pub fn incident_edges(&self, v: VertexId) -> EdgeSet {
        self.edges
            .iter()
            .filter(|e| e.touches(v))
            .map(|e| e.id)
            .collect()
    }

    pub fn neighbors(&self, v: VertexId) -> VertexSet {
        self.edges
            .iter()
            .filter(|e| e.touches(v))
            .map(|e| e.other(v))
            .collect()
    }

    /// Delete the given edges; vertices are untouched, so isolated
    /// vertices may remain.
    pub fn delete_edges(&self, del: &EdgeSet) -> Result<Self, GraphError> {
        for &e in del {
            if self.edge(e).is_none() {
                return Err(GraphError::UnknownEdge(e.to_string()));
            }
        }
        let mut g = self.clone();
        g.edges.retain(|e| !del.contains(&e.id));
        Ok(g)
    }

    /// Contract the given edges: each connected component of the spanning
    /// subgraph on `con` collapses to its lowest-id member. Parallel edges
    /// that become loops are dropped and reported.
    pub fn contract_edges(&self, con: &EdgeSet) -> Result<(Self, ContractionMap), GraphError> {
        for &e in con {
            if self.edge(e).is_none() {
                return Err(GraphError::UnknownEdge(e.to_string()));
            }
        }
        let mut uf = UnionFind::new(&self.vertices);
        for e in &self.edges {
            if con.contains(&e.id) {
                uf.union(e.a, e.b);
            }
        }
        // lowest id in each class is its representative
        let mut rep: BTreeMap<VertexId, VertexId> = BTreeMap::new();
        for &v in &self.vertices {
            let root = uf.find(v);
            let r = rep.entry(root).or_insert(v);
            if v < *r {
                *r = v;
            }
        }
        let mut vertex_map = BTreeMap::new();
        for &v in &self.vertices {
            vertex_map.insert(v, rep[&uf.find(v)]);
        }
        let mut g = MultiGraph {
            vertices: Vec::new(),
            names: BTreeMap::new(),
            edges: Vec::new(),
            next_vertex: self.next_vertex,
            next_edge: self.next_edge,
        };
        for &v in &self.vertices {
            if vertex_map[&v] == v {
                g.vertices.push(v);
                g.names.insert(v, self.names[&v].clone());
            }
        }
        let mut dropped_loops = EdgeSet::new();
        for e in &self.edges {
            if con.contains(&e.id) {
                continue;
            }
            let a = vertex_map[&e.a];
            let b = vertex_map[&e.b];
            if a == b {
                dropped_loops.insert(e.id);
            } else {
                g.edges.push(Edge {
                    id: e.id,
                    a,
                    b,
                    label: e.label.clone(),
                });
            }
        }
        let map = ContractionMap {
            vertex_map,
            contracted: con.clone(),
            dropped_loops,
        };
        Ok((g, map))
    }

    /// Subgraph induced by a vertex set: those vertices and every edge with
    /// both endpoints inside.
    pub fn induced_subgraph(&self, keep: &VertexSet) -> Result<Self, GraphError> {
        for &v in keep {
            if !self.has_vertex(v) {
                return Err(GraphError::UnknownVertex(v.to_string()));
            }
        }
        let mut g = self.clone();
        g.vertices.retain(|v| keep.contains(v));
        g.names.retain(|v, _| keep.contains(v));
        g.edges
            .retain(|e| keep.contains(&e.a) && keep.contains(&e.b));
        Ok(g)
    }

    /// Subgraph induced by an edge set: those edges and exactly their
    /// endpoints. Vertices touched by no edge of the set are absent.
    pub fn edge_induced_subgraph(&self, keep: &EdgeSet) -> Result<Self, GraphError> {
        let mut touched = VertexSet::new();
        for &id in keep {
            let e = self
                .edge(id)
                .ok_or_else(|| GraphError::UnknownEdge(id.to_string()))?;
            touched.insert(e.a);
            touched.insert(e.b);
        }
        let mut g = self.clone();
        g.vertices.retain(|v| touched.contains(v));
        g.names.retain(|v, _| touched.contains(v));
        g.edges.retain(|e| keep.contains(&e.id));
        Ok(g)
    }

    /// Edges with one endpoint in `xs` and the other in `ys`.
    pub fn edges_between(&self, xs: &VertexSet, ys: &VertexSet) -> EdgeSet {
        self.edges
            .iter()
            .filter(|e| {
                (xs.contains(&e.a) && ys.contains(&e.b)) || (xs.contains(&e.b) && ys.contains(&e.a))
            })
            .map(|e| e.id)
            .collect()
    }

    /// Edges with exactly one endpoint in `u`.
    pub fn boundary(&self, u: &VertexSet) -> EdgeSet {
        self.edges
            .iter()
            .filter(|e| u.contains(&e.a) != u.contains(&e.b))
            .map(|e| e.id)
            .collect()
    }

    /// `s` together with every vertex adjacent to it.
    pub fn closed_neighborhood(&self, s: &VertexSet) -> VertexSet {
        let mut out = s.clone();
        for e in &self.edges {
            if s.contains(&e.a) {
                out.insert(e.b);
            }
            if s.contains(&e.b) {
                out.insert(e.a);
            }
        }
        out
    }

    /// Whether the spanning subgraph on `sub` is acyclic. Ids not present
    /// in the graph are ignored.
    pub fn is_forest(&self, sub: &EdgeSet) -> bool {
        let mut uf = UnionFind::new(&self.vertices);
        for e in &self.edges {
            if sub.contains(&e.id) && !uf.union(e.a, e.b) {
                return false;
            }
        }
        true
    }

    /// Connected components, each listed as a vertex set, ordered by their
    /// smallest vertex.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut adj: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
        for e in &self.edges {
            adj.entry(e.a).or_default().push(e.b);
            adj.entry(e.b).or_default().push(e.a);
        }
        let mut seen = VertexSet::new();
        let mut out = Vec::new();
        for &start in &self.vertices {
            if seen.contains(&start) {
                continue;
            }
            let mut comp = VertexSet::new();
            let mut queue = VecDeque::from([start]);
            seen.insert(start);
            while let Some(v) = queue.pop_front() {
                comp.insert(v);
                for &w in adj.get(&v).into_iter().flatten() {
                    if seen.insert(w) {
                        queue.push_back(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// A graph with no vertices counts as disconnected.
    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Whether `u` induces a simple complete subgraph: every pair joined by
    /// exactly one edge. Vacuously true for at most one vertex.
    pub fn is_clique(&self, u: &VertexSet) -> bool {
        let vs: Vec<VertexId> = u.iter().copied().collect();
        for (i, &x) in vs.iter().enumerate() {
            if !self.has_vertex(x) {
                return false;
            }
            for &y in &vs[i + 1..] {
                if self.multiplicity(x, y) != 1 {
                    return false;
                }
            }
        }
        true
    }

    /// Complete simple graph on `n` vertices named `v1`..`vn`.
    pub fn complete(n: usize) -> Self {
        let names: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((refs[i], refs[j]));
            }
        }
        Self::build(&refs, &edges).expect("complete graph is valid")
    }

    /// Cycle on `n >= 3` vertices named `v1`..`vn`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let names: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let mut edges = Vec::new();
        for i in 0..n {
            edges.push((refs[i], refs[(i + 1) % n]));
        }
        Self::build(&refs, &edges).expect("cycle is valid")
    }

    /// Path on `n >= 1` vertices named `v1`..`vn`.
    pub fn path(n: usize) -> Self {
        let names: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let mut edges = Vec::new();
        for i in 1..n {
            edges.push((refs[i - 1], refs[i]));
        }
        Self::build(&refs, &edges).expect("path is valid")
    }
}

impl Default for MultiGraph {
    fn default() -> Self {
        Self::new()
    }
}

struct UnionFind {
    parent: BTreeMap<VertexId, VertexId>,
}

impl UnionFind {
    fn new(vertices: &[VertexId]) -> Self {
        UnionFind {
            parent: vertices.iter().map(|&v| (v, v)).collect(),
        }
    }

    fn find(&mut self, v: VertexId) -> VertexId {
        let mut root = v;
        while self.parent[&root] != root {
            root = self.parent[&root];
        }
        let mut cur = v;
        while self.parent[&cur] != root {
            let next = self.parent[&cur];
            self.parent.insert(cur, root);
            cur = next;
        }
        root
    }

    /// Returns false when both ends were already in one class.
    fn union(&mut self, a: VertexId, b: VertexId) -> bool {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent.insert(hi, lo);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(g: &MultiGraph, labels: &[&str]) -> EdgeSet {
        labels
            .iter()
            .map(|l| g.edge_by_label(l).unwrap_or_else(|| panic!("label {l}")))
            .collect()
    }

    #[test]
    fn build_rejects_loops_and_duplicates() {
        assert!(matches!(
            MultiGraph::build(&["a"], &[("a", "a")]),
            Err(GraphError::SelfLoop(_))
        ));
        assert!(matches!(
            MultiGraph::build(&["a", "a"], &[]),
            Err(GraphError::DuplicateVertex(_))
        ));
        assert!(matches!(
            MultiGraph::build_labeled(&["a", "b"], &[("a", "b", Some("x")), ("a", "b", Some("x"))]),
            Err(GraphError::DuplicateLabel(_))
        ));
        assert!(matches!(
            MultiGraph::build(&["a"], &[("a", "b")]),
            Err(GraphError::UnknownVertex(_))
        ));
    }

    #[test]
    fn positional_labels_and_lookup() {
        let g = MultiGraph::build_labeled(
            &["a", "b", "c"],
            &[("a", "b", None), ("b", "c", Some("bc")), ("a", "c", None)],
        )
        .unwrap();
        assert!(g.edge_by_label("e1").is_some());
        assert!(g.edge_by_label("bc").is_some());
        assert!(g.edge_by_label("e3").is_some());
        assert_eq!(g.multiplicity(
            g.vertex_by_name("a").unwrap(),
            g.vertex_by_name("b").unwrap(),
        ), 1);
    }

    #[test]
    fn parallel_edges_count() {
        let g = MultiGraph::build(&["a", "b"], &[("a", "b"), ("a", "b"), ("a", "b")]).unwrap();
        let a = g.vertex_by_name("a").unwrap();
        let b = g.vertex_by_name("b").unwrap();
        assert_eq!(g.multiplicity(a, b), 3);
        assert_eq!(g.degree(a), 3);
        assert!(!g.is_clique(&g.vertex_set()));
    }

    #[test]
    fn deletion_keeps_isolated_vertices() {
        let g = MultiGraph::build(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        let d = g.delete_edges(&ids(&g, &["e1", "e2"])).unwrap();
        assert_eq!(d.vertex_count(), 3);
        assert_eq!(d.edge_count(), 0);
        assert_eq!(d.components().len(), 3);
    }

    #[test]
    fn contracting_a_matching_in_k4_leaves_four_parallel_edges() {
        let g = MultiGraph::complete(4);
        // v1v2 and v3v4 form a perfect matching
        let m: EdgeSet = g
            .edges()
            .iter()
            .filter(|e| {
                let (a, b) = (g.name(e.a).unwrap(), g.name(e.b).unwrap());
                (a, b) == ("v1", "v2") || (a, b) == ("v3", "v4")
            })
            .map(|e| e.id)
            .collect();
        assert_eq!(m.len(), 2);
        let (h, map) = g.contract_edges(&m).unwrap();
        assert_eq!(h.vertex_count(), 2);
        assert_eq!(h.edge_count(), 4);
        assert!(map.dropped_loops().is_empty());
        let u = h.vertices()[0];
        let w = h.vertices()[1];
        assert_eq!(h.multiplicity(u, w), 4);
    }

    #[test]
    fn contraction_drops_parallel_copies_as_loops() {
        let g = MultiGraph::build(&["a", "b", "c"], &[("a", "b"), ("a", "b"), ("b", "c")]).unwrap();
        let (h, map) = g.contract_edges(&ids(&g, &["e1"])).unwrap();
        assert_eq!(h.vertex_count(), 2);
        assert_eq!(h.edge_count(), 1);
        assert_eq!(map.dropped_loops().len(), 1);
        assert_eq!(map.image(g.vertex_by_name("b").unwrap()), g.vertex_by_name("a").unwrap());
    }

    #[test]
    fn contraction_maps_compose() {
        let g = MultiGraph::complete(4);
        let e1: EdgeSet = ids(&g, &["e1"]);
        let (h, m1) = g.contract_edges(&e1).unwrap();
        let e2: EdgeSet = h.edges().iter().take(1).map(|e| e.id).collect();
        let (k, m2) = h.contract_edges(&e2).unwrap();
        let mut both = e1.clone();
        both.extend(e2.iter().copied());
        let (k2, m12) = g.contract_edges(&both).unwrap();
        assert_eq!(k.vertex_count(), k2.vertex_count());
        let composed = m1.compose(&m2);
        for &v in g.vertices() {
            assert_eq!(composed.image(v), m12.image(v));
        }
    }

    #[test]
    fn forest_and_cycle_detection() {
        let g = MultiGraph::complete(4);
        let tree = ids(&g, &["e1", "e2", "e3"]); // v1v2, v1v3, v1v4: a star
        assert!(g.is_forest(&tree));
        let tri = ids(&g, &["e1", "e2", "e4"]); // v1v2, v1v3, v2v3
        assert!(!g.is_forest(&tri));
        let two = MultiGraph::build(&["a", "b"], &[("a", "b"), ("a", "b")]).unwrap();
        assert!(!two.is_forest(&two.edge_ids()));
    }

    #[test]
    fn boundary_and_neighborhoods() {
        let g = MultiGraph::complete(4);
        let u: VertexSet = [g.vertex_by_name("v1").unwrap(), g.vertex_by_name("v2").unwrap()]
            .into_iter()
            .collect();
        assert_eq!(g.boundary(&u).len(), 4);
        // both endpoints inside count as "between" the set and itself
        assert_eq!(g.edges_between(&u, &u.clone()).len(), 1);
        let rest: VertexSet = g.vertex_set().difference(&u).copied().collect();
        assert_eq!(g.edges_between(&u, &rest).len(), 4);
        assert_eq!(g.closed_neighborhood(&u), g.vertex_set());
    }

    #[test]
    fn induced_subgraphs_keep_ids() {
        let g = MultiGraph::complete(4);
        let u: VertexSet = ["v1", "v2", "v3"]
            .iter()
            .map(|n| g.vertex_by_name(n).unwrap())
            .collect();
        let h = g.induced_subgraph(&u).unwrap();
        assert_eq!(h.vertex_count(), 3);
        assert_eq!(h.edge_count(), 3);
        for e in h.edges() {
            assert_eq!(g.edge(e.id).unwrap().label(), e.label());
        }
        let sub = g.edge_induced_subgraph(&ids(&g, &["e1"])).unwrap();
        assert_eq!(sub.vertex_count(), 2);
        assert_eq!(sub.edge_count(), 1);
    }

    #[test]
    fn clique_detection() {
        let g = MultiGraph::complete(5);
        let u: VertexSet = ["v1", "v3", "v5"]
            .iter()
            .map(|n| g.vertex_by_name(n).unwrap())
            .collect();
        assert!(g.is_clique(&u));
        let p = MultiGraph::path(3);
        assert!(!p.is_clique(&p.vertex_set()));
        let single: VertexSet = [p.vertices()[0]].into_iter().collect();
        assert!(p.is_clique(&single));
        assert!(p.is_clique(&VertexSet::new()));
    }
}
