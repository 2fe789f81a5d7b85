//! Derived graphs: star augmentation, clique collapapse, vertex splitting,
//! edge-partition expansion, and the line / middle / subdivision family.
//!
//! Every operation keeps surviving ids stable and reports the new vertices
//! and edges it created, so constraint sets can be transported through a
//! construction and counted on the other side.

use std::collections::BTreeMap;

use num_rational::BigRational;
use thiserror::Error;

use crate::graph::{ContractionMap, EdgeId, EdgeSet, GraphError, MultiGraph, VertexId, VertexSet};
use crate::kirchhoff::EdgeWeighting;
use crate::partition::{CliquePartition, HypothesisReport};

#[derive(Error, Debug)]
pub enum ConstructError {
    #[error("edge set must be nonempty")]
    EmptyEdgeSet,
    #[error("not a subgraph: {0}")]
    NotASubgraph(String),
    #[error("not a partition of the edge set: {0}")]
    NotAPartition(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(HypothesisReport),
    #[error("edge set has a cycle")]
    NotAForest,
    #[error("cross edges are not all contained in the forced set")]
    CrossNotContained,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Result of adding one star per component of an edge-induced subgraph.
#[derive(Clone, Debug)]
pub struct StarAugmentation {
    pub graph: MultiGraph,
    /// The new edges, one per (component, component-vertex) pair.
    pub new_edges: EdgeSet,
    /// Each new center with the component it covers.
    pub centers: Vec<(VertexId, VertexSet)>,
}

/// For each connected component of the subgraph induced by `w`, add a new
/// vertex joined once to every vertex of that component.
pub fn star_graph(g: &MultiGraph, w: &EdgeSet) -> Result<StarAugmentation, ConstructError> {
    if w.is_empty() {
        return Err(ConstructError::EmptyEdgeSet);
    }
    let sub = g.edge_induced_subgraph(w)?;
    let mut graph = g.clone();
    let mut new_edges = EdgeSet::new();
    let mut centers = Vec::new();
    for (k, comp) in sub.components().into_iter().enumerate() {
        let center = graph.fresh_vertex(&format!("w{}", k + 1));
        let cname = graph.name(center).unwrap().to_string();
        for &v in &comp {
            let vname = graph.name(v).unwrap().to_string();
            let e = graph.fresh_edge(center, v, Some(&format!("{cname}:{vname}")));
            new_edges.insert(e);
        }
        centers.push((center, comp));
    }
    Ok(StarAugmentation {
        graph,
        new_edges,
        centers,
    })
}

/// Collapse every edge inside `u`: each connected piece of the subgraph
/// induced by `u` becomes one vertex.
pub fn bullet_contract(
    g: &MultiGraph,
    u: &VertexSet,
) -> Result<(MultiGraph, ContractionMap), ConstructError> {
    let inside = g.induced_subgraph(u)?.edge_ids();
    Ok(g.contract_edges(&inside)?)
}

/// Result of splitting one vertex.
#[derive(Clone, Debug)]
pub struct VertexSplit {
    pub graph: MultiGraph,
    pub new_vertex: VertexId,
    pub new_edge: EdgeId,
}

/// Split `v`: edges in `keep` stay at `v`, every other edge at `v` moves to
/// a fresh vertex `v'`, and a fresh edge joins `v` to `v'`. Contracting the
/// fresh edge recovers the original graph.
pub fn vertex_split(
    g: &MultiGraph,
    v: VertexId,
    keep: &EdgeSet,
) -> Result<VertexSplit, ConstructError> {
    let incident = g.incident_edges(v);
    for &e in keep {
        if !incident.contains(&e) {
            return Err(ConstructError::NotASubgraph(format!(
                "edge {e} is not incident to the split vertex"
            )));
        }
    }
    let mut graph = g.clone();
    let base = format!("{}'", g.name(v).ok_or_else(|| {
        ConstructError::Graph(GraphError::UnknownVertex(v.to_string()))
    })?);
    let new_vertex = graph.fresh_vertex(&base);
    for &e in incident.difference(keep) {
        graph.set_endpoint(e, v, new_vertex);
    }
    let vname = graph.name(v).unwrap().to_string();
    let wname = graph.name(new_vertex).unwrap().to_string();
    let new_edge = graph.fresh_edge(v, new_vertex, Some(&format!("{vname}:{wname}")));
    Ok(VertexSplit {
        graph,
        new_vertex,
        new_edge,
    })
}

/// Result of splitting against a subgraph: the expanded graph and the
/// fresh edges, which form a matching.
#[derive(Clone, Debug)]
pub struct DiamondSubgraph {
    pub graph: MultiGraph,
    pub new_edges: EdgeSet,
}

/// Split every vertex of the subgraph `(vs, es)` whose full incidence
/// exceeds its incidence inside the subgraph. The subgraph keeps its
/// edges; everything else at such a vertex moves to the split copy.
pub fn diamond_subgraph(
    g: &MultiGraph,
    vs: &VertexSet,
    es: &EdgeSet,
) -> Result<DiamondSubgraph, ConstructError> {
    for &v in vs {
        if !g.has_vertex(v) {
            return Err(ConstructError::NotASubgraph(format!(
                "vertex {v} is not in the graph"
            )));
        }
    }
    for &e in es {
        let rec = g
            .edge(e)
            .ok_or_else(|| ConstructError::NotASubgraph(format!("edge {e} is not in the graph")))?;
        if !vs.contains(&rec.a) || !vs.contains(&rec.b) {
            return Err(ConstructError::NotASubgraph(format!(
                "edge {e} leaves the subgraph's vertex set"
            )));
        }
    }
    let mut graph = g.clone();
    let mut new_edges = EdgeSet::new();
    for &v in vs {
        let keep: EdgeSet = g.incident_edges(v).intersection(es).copied().collect();
        if keep == g.incident_edges(v) {
            continue;
        }
        let split = vertex_split(&graph, v, &keep)?;
        graph = split.graph;
        new_edges.insert(split.new_edge);
    }
    Ok(DiamondSubgraph { graph, new_edges })
}

/// Result of expanding a graph along a partition of its edge set.
#[derive(Clone, Debug)]
pub struct DiamondPartition {
    /// The expanded graph. Original edges keep their ids, with endpoints
    /// moved onto per-part copies of the split vertices.
    pub graph: MultiGraph,
    /// Fresh edges joining each split vertex to its per-part copies; their
    /// components are stars centered at the split vertices.
    pub new_edges: EdgeSet,
    /// Split vertices (kept as the star centers), in id order.
    pub centers: Vec<VertexId>,
    /// The expanded graph with every original edge contracted.
    pub quotient: MultiGraph,
    pub quotient_map: ContractionMap,
    /// Quotient vertices that came from each part's copies, one entry per
    /// part; a single vertex when the part's subgraph is connected.
    pub part_vertices: Vec<Vec<VertexId>>,
}

/// Expand `g` along a partition of its edge set. Vertices whose incidence
/// lies inside a single part are kept; every other vertex becomes a star
/// center joined to one copy per part it meets, and each part's edges land
/// on the copies. The result does not depend on the order of the parts.
pub fn diamond_partition(
    g: &MultiGraph,
    parts: &[EdgeSet],
) -> Result<DiamondPartition, ConstructError> {
    let mut seen = EdgeSet::new();
    for (j, p) in parts.iter().enumerate() {
        if p.is_empty() {
            return Err(ConstructError::NotAPartition(format!("part {} is empty", j + 1)));
        }
        for &e in p {
            if g.edge(e).is_none() {
                return Err(ConstructError::NotAPartition(format!(
                    "edge {e} is not in the graph"
                )));
            }
            if !seen.insert(e) {
                return Err(ConstructError::NotAPartition(format!(
                    "edge {e} occurs in two parts"
                )));
            }
        }
    }
    if seen != g.edge_ids() {
        return Err(ConstructError::NotAPartition(
            "parts do not cover the edge set".to_string(),
        ));
    }

    let mut parts_of: BTreeMap<VertexId, Vec<usize>> = BTreeMap::new();
    for (j, p) in parts.iter().enumerate() {
        for &e in p {
            let rec = g.edge(e).unwrap();
            for v in [rec.a, rec.b] {
                let list = parts_of.entry(v).or_default();
                if list.last() != Some(&j) {
                    list.push(j);
                }
            }
        }
    }

    let mut graph = g.clone();
    let mut copy_of: BTreeMap<(VertexId, usize), VertexId> = BTreeMap::new();
    let mut centers = Vec::new();
    for &v in g.vertices() {
        let touched = parts_of.get(&v).cloned().unwrap_or_default();
        if touched.len() >= 2 {
            centers.push(v);
            let name = g.name(v).unwrap().to_string();
            for &j in &touched {
                let c = graph.fresh_vertex(&format!("{name}.{}", j + 1));
                copy_of.insert((v, j), c);
            }
        }
    }
    // move each part's edges onto the copies
    for (j, p) in parts.iter().enumerate() {
        for &e in p {
            let rec = g.edge(e).unwrap().clone();
            for v in [rec.a, rec.b] {
                if let Some(&c) = copy_of.get(&(v, j)) {
                    graph.set_endpoint(e, v, c);
                }
            }
        }
    }
    // join each center to its copies
    let mut new_edges = EdgeSet::new();
    for &v in &centers {
        let name = g.name(v).unwrap().to_string();
        for &j in &parts_of[&v] {
            let c = copy_of[&(v, j)];
            let e = graph.fresh_edge(v, c, Some(&format!("{name}:{}", j + 1)));
            new_edges.insert(e);
        }
    }

    let (quotient, quotient_map) = graph.contract_edges(&g.edge_ids())?;
    let mut part_vertices = Vec::new();
    for (j, p) in parts.iter().enumerate() {
        let mut imgs = VertexSet::new();
        for &e in p {
            let rec = g.edge(e).unwrap();
            for v in [rec.a, rec.b] {
                let in_expanded = copy_of.get(&(v, j)).copied().unwrap_or(v);
                imgs.insert(quotient_map.image(in_expanded));
            }
        }
        part_vertices.push(imgs.into_iter().collect());
    }

    Ok(DiamondPartition {
        graph,
        new_edges,
        centers,
        quotient,
        quotient_map,
        part_vertices,
    })
}

/// Result of collapsing parallel cross-edge classes after a clique collapse.
#[derive(Clone, Debug)]
pub struct CircReduction {
    /// The clique-collapsed graph before class collapsing.
    pub bullet: MultiGraph,
    pub bullet_map: ContractionMap,
    /// The collapsed graph: at most one representative per (clique vertex,
    /// free vertex, forced-or-not) class of parallel cross edges.
    pub reduced: MultiGraph,
    /// Weights on the reduced graph making its constrained tree sum match
    /// the uncollapsed one: each representative carries its class size
    /// times the per-edge factor; free-part edges keep weight one.
    pub weights: EdgeWeighting,
}

/// Collapse the clique parts and then merge each class of parallel cross
/// edges into one weighted representative. `r` marks the forced cross
/// edges; a forced class and an unforced class between the same pair stay
/// separate representatives.
pub fn circ_reduce(
    g: &MultiGraph,
    partition: &CliquePartition,
    r: &EdgeSet,
) -> Result<CircReduction, ConstructError> {
    let mut report = HypothesisReport::new();
    partition.check_standing(g, &mut report);
    let m = partition.m(g);
    report.push(
        "forced cross edges lie in the cross set",
        r.is_subset(&m),
        "",
    );
    if !report.ok() {
        return Err(ConstructError::Hypothesis(report));
    }

    let u = partition.u();
    let (bullet, bullet_map) = bullet_contract(g, &u)?;
    let mut weights = EdgeWeighting::new();
    let mut drop = EdgeSet::new();
    for (i, clique) in partition.cliques.iter().enumerate() {
        let size = BigRational::from_integer((clique.len() as i64).into());
        let one = BigRational::from_integer(1.into());
        let m_i = partition.m_i(g, i);
        // classes keyed by (free endpoint, forced?)
        let mut classes: BTreeMap<(VertexId, bool), Vec<EdgeId>> = BTreeMap::new();
        let v_i = bullet_map.image(*clique.iter().next().expect("nonempty clique"));
        for &e in &m_i {
            let rec = bullet.edge(e).expect("cross edges survive the collapse");
            let free = rec.other(v_i);
            classes.entry((free, r.contains(&e))).or_default().push(e);
        }
        for ((_, forced), ids) in classes {
            let keep = ids[0];
            for &e in &ids[1..] {
                drop.insert(e);
            }
            let mult = BigRational::from_integer((ids.len() as i64).into());
            let per_edge = if forced {
                size.clone()
            } else {
                &size / (&one + &size)
            };
            weights.set(keep, mult * per_edge);
        }
    }
    let reduced = bullet.delete_edges(&drop)?;
    Ok(CircReduction {
        bullet,
        bullet_map,
        reduced,
        weights,
    })
}

/// A line-style graph together with its provenance maps.
#[derive(Clone, Debug)]
pub struct LineGraph {
    pub graph: MultiGraph,
    /// Vertex of the line graph standing for each original edge.
    pub vertex_of_edge: BTreeMap<EdgeId, VertexId>,
    /// For each original vertex of degree at least two, the clique of line
    /// graph edges it generates. These cliques partition the line graph's
    /// edge set.
    pub parts: Vec<(VertexId, EdgeSet)>,
}

/// The line graph: one vertex per edge, and one edge per pair of distinct
/// edges sharing an endpoint. Parallel originals therefore produce
/// parallel copies (one through each shared endpoint).
pub fn line_graph(h: &MultiGraph) -> LineGraph {
    let mut graph = MultiGraph::new();
    let mut vertex_of_edge = BTreeMap::new();
    for e in h.edges() {
        let v = graph.fresh_vertex(e.label());
        vertex_of_edge.insert(e.id, v);
    }
    let mut parts = Vec::new();
    for &u in h.vertices() {
        let inc: Vec<EdgeId> = h.incident_edges(u).into_iter().collect();
        if inc.len() < 2 {
            continue;
        }
        let uname = h.name(u).unwrap();
        let mut part = EdgeSet::new();
        for i in 0..inc.len() {
            for j in i + 1..inc.len() {
                let a = vertex_of_edge[&inc[i]];
                let b = vertex_of_edge[&inc[j]];
                let id = graph.fresh_edge(a, b, Some(&format!("{uname}/{}", part.len() + 1)));
                part.insert(id);
            }
        }
        parts.push((u, part));
    }
    LineGraph {
        graph,
        vertex_of_edge,
        parts,
    }
}

/// A subdivision together with its provenance map. Original vertex ids are
/// preserved.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub graph: MultiGraph,
    /// The new midpoint vertex of each original edge.
    pub mid: BTreeMap<EdgeId, VertexId>,
}

/// Replace every edge by a length-two path through a fresh midpoint.
pub fn subdivision(h: &MultiGraph) -> Subdivision {
    let mut graph = h.delete_edges(&h.edge_ids()).expect("own edges");
    let mut mid = BTreeMap::new();
    for e in h.edges() {
        let m = graph.fresh_vertex(&format!("s_{}", e.label()));
        let an = h.name(e.a).unwrap().to_string();
        let bn = h.name(e.b).unwrap().to_string();
        let mn = graph.name(m).unwrap().to_string();
        graph.fresh_edge(e.a, m, Some(&format!("{an}:{mn}")));
        graph.fresh_edge(e.b, m, Some(&format!("{bn}:{mn}")));
        mid.insert(e.id, m);
    }
    Subdivision { graph, mid }
}

/// A middle graph together with its provenance maps. Original vertex ids
/// are preserved; midpoints are adjacent when their edges share an
/// endpoint.
#[derive(Clone, Debug)]
pub struct MiddleGraph {
    pub graph: MultiGraph,
    pub mid: BTreeMap<EdgeId, VertexId>,
    /// For each original vertex, the clique on it and its incident
    /// midpoints. These cliques partition the middle graph's edge set.
    pub parts: Vec<(VertexId, EdgeSet)>,
}

/// The subdivision plus line graph edges between midpoints.
pub fn middle_graph(h: &MultiGraph) -> MiddleGraph {
    let sub = subdivision(h);
    let mut graph = sub.graph;
    let mid = sub.mid;
    let mut parts = Vec::new();
    for &u in h.vertices() {
        let inc: Vec<EdgeId> = h.incident_edges(u).into_iter().collect();
        let uname = h.name(u).unwrap().to_string();
        let mut part: EdgeSet = graph
            .incident_edges(u)
            .into_iter()
            .filter(|&e| {
                let rec = graph.edge(e).unwrap();
                inc.iter().any(|orig| mid[orig] == rec.other(u))
            })
            .collect();
        for i in 0..inc.len() {
            for j in i + 1..inc.len() {
                let a = mid[&inc[i]];
                let b = mid[&inc[j]];
                let id = graph.fresh_edge(a, b, Some(&format!("{uname}/{}", part.len() + 1)));
                part.insert(id);
            }
        }
        if !part.is_empty() {
            parts.push((u, part));
        }
    }
    MiddleGraph { graph, mid, parts }
}

/// Result of rewriting an instance into the standing-condition shape.
#[derive(Clone, Debug)]
pub struct SpecialCaseReduction {
    pub graph: MultiGraph,
    /// The free part of the rewritten graph: the old free part plus the
    /// star centers.
    pub v0_prime: VertexSet,
    /// The forced set on the rewritten graph: exactly the star edges.
    pub w_prime: EdgeSet,
    /// Structural checks on the result, all expected to pass.
    pub certificate: HypothesisReport,
}

/// Given disjoint cliques and a forced forest `w` containing every edge
/// between distinct parts, star the forced set and delete those cross
/// edges. The result satisfies the standing conditions with the star
/// centers added to the free part, and its constrained count equals the
/// original one.
pub fn reduce_to_special_case(
    g: &MultiGraph,
    cliques: &[VertexSet],
    w: &EdgeSet,
) -> Result<SpecialCaseReduction, ConstructError> {
    if !g.is_forest(w) {
        return Err(ConstructError::NotAForest);
    }
    // part index per vertex: 0 for the free part
    let mut part: BTreeMap<VertexId, usize> = g.vertices().iter().map(|&v| (v, 0)).collect();
    for (i, c) in cliques.iter().enumerate() {
        for &v in c {
            part.insert(v, i + 1);
        }
    }
    let cross: EdgeSet = g
        .edges()
        .iter()
        .filter(|e| part[&e.a] != part[&e.b])
        .map(|e| e.id)
        .collect();
    if !cross.is_subset(w) {
        return Err(ConstructError::CrossNotContained);
    }
    let star = star_graph(g, w)?;
    let graph = star.graph.delete_edges(&cross)?;
    let mut v0_prime: VertexSet = g
        .vertices()
        .iter()
        .copied()
        .filter(|v| part[v] == 0)
        .collect();
    for (c, _) in &star.centers {
        v0_prime.insert(*c);
    }
    let partition = CliquePartition::new(v0_prime.clone(), cliques.to_vec());
    let mut certificate = HypothesisReport::new();
    partition.check_standing(&graph, &mut certificate);
    certificate.push(
        "star components centered at new vertices",
        star.centers
            .iter()
            .all(|(c, _)| !g.has_vertex(*c)),
        "",
    );
    Ok(SpecialCaseReduction {
        graph,
        v0_prime,
        w_prime: star.new_edges,
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kirchhoff::{count_constrained, count_spanning_trees};
    use num_bigint::BigInt;

    fn labels(g: &MultiGraph, ls: &[&str]) -> EdgeSet {
        ls.iter().map(|l| g.edge_by_label(l).unwrap()).collect()
    }

    fn names(g: &MultiGraph, ns: &[&str]) -> VertexSet {
        ns.iter().map(|n| g.vertex_by_name(n).unwrap()).collect()
    }

    #[test]
    fn star_adds_one_center_per_component() {
        let g = MultiGraph::complete(4);
        // e1 = v1v2 and e6 = v3v4: two components
        let w = labels(&g, &["e1", "e6"]);
        let star = star_graph(&g, &w).unwrap();
        assert_eq!(star.centers.len(), 2);
        assert_eq!(star.graph.vertex_count(), 6);
        assert_eq!(star.new_edges.len(), 4);
        // forcing the stars counts the same trees as forcing the originals
        assert_eq!(
            count_constrained(&star.graph, &star.new_edges),
            count_constrained(&g, &w)
        );
    }

    #[test]
    fn star_rejects_empty_set() {
        let g = MultiGraph::complete(3);
        assert!(matches!(
            star_graph(&g, &EdgeSet::new()),
            Err(ConstructError::EmptyEdgeSet)
        ));
    }

    #[test]
    fn star_then_partial_delete_preserves_constrained_count() {
        // deleting any subset of the starred set keeps the count
        let g = MultiGraph::complete(5);
        let w = labels(&g, &["e1", "e2"]); // v1v2, v1v3: one path component
        let star = star_graph(&g, &w).unwrap();
        let expected = count_constrained(&g, &w);
        assert_eq!(count_constrained(&star.graph, &star.new_edges), expected);
        for drop in [vec!["e1"], vec!["e2"], vec!["e1", "e2"]] {
            let dropped = star.graph.delete_edges(&labels(&star.graph, &drop)).unwrap();
            assert_eq!(count_constrained(&dropped, &star.new_edges), expected);
        }
    }

    #[test]
    fn bullet_collapses_each_clique() {
        let g = MultiGraph::build(
            &["z", "a1", "a2", "a3"],
            &[("a1", "a2"), ("a1", "a3"), ("a2", "a3"), ("z", "a1"), ("z", "a2")],
        )
        .unwrap();
        let (b, map) = bullet_contract(&g, &names(&g, &["a1", "a2", "a3"])).unwrap();
        assert_eq!(b.vertex_count(), 2);
        assert_eq!(b.edge_count(), 2); // both cross edges survive in parallel
        assert_eq!(map.image(g.vertex_by_name("a3").unwrap()), g.vertex_by_name("a1").unwrap());
    }

    #[test]
    fn split_moves_the_complement_and_contraction_undoes_it() {
        let g = MultiGraph::complete(4);
        let v1 = g.vertex_by_name("v1").unwrap();
        let keep = labels(&g, &["e1"]); // v1v2 stays
        let split = vertex_split(&g, v1, &keep).unwrap();
        assert_eq!(split.graph.degree(v1), 2); // e1 plus the fresh edge
        assert_eq!(split.graph.degree(split.new_vertex), 3);
        let back: EdgeSet = [split.new_edge].into_iter().collect();
        let (restored, _) = split.graph.contract_edges(&back).unwrap();
        assert_eq!(
            count_spanning_trees(&restored),
            count_spanning_trees(&g)
        );
        assert_eq!(restored.edge_ids(), g.edge_ids());
    }

    #[test]
    fn splitting_everything_leaves_a_pendant() {
        let g = MultiGraph::complete(3);
        let v1 = g.vertex_by_name("v1").unwrap();
        let split = vertex_split(&g, v1, &g.incident_edges(v1)).unwrap();
        assert_eq!(split.graph.degree(split.new_vertex), 1);
    }

    #[test]
    fn diamond_on_a_five_cycle_in_k5_gives_the_petersen_graph() {
        let g = MultiGraph::complete(5);
        let cyc = labels(&g, &["e1", "e5", "e8", "e10", "e4"]); // v1v2 v2v3 v3v4 v4v5 v1v5
        let d = diamond_subgraph(&g, &g.vertex_set(), &cyc).unwrap();
        let p = &d.graph;
        assert_eq!(p.vertex_count(), 10);
        assert_eq!(p.edge_count(), 15);
        assert!(p.vertices().iter().all(|&v| p.degree(v) == 3));
        assert_eq!(girth(p), Some(5));
        assert_eq!(count_spanning_trees(p), BigInt::from(2000));
        assert_eq!(d.new_edges.len(), 5);
        // the new edges form a matching
        let sub = p.edge_induced_subgraph(&d.new_edges).unwrap();
        assert!(sub.vertices().iter().all(|&v| sub.degree(v) == 1));
    }

    #[test]
    fn diamond_partition_matches_the_sequential_route() {
        let g = MultiGraph::complete(3);
        let parts: Vec<EdgeSet> = g.edge_ids().into_iter().map(|e| [e].into()).collect();
        let d = diamond_partition(&g, &parts).unwrap();
        assert_eq!(d.graph.vertex_count(), 9);
        assert_eq!(d.graph.edge_count(), 9);
        // sequential: one diamond per single-edge subgraph
        let mut seq = g.clone();
        for e in g.edges() {
            let vs: VertexSet = [seq.edge(e.id).unwrap().a, seq.edge(e.id).unwrap().b]
                .into_iter()
                .collect();
            let es: EdgeSet = [e.id].into();
            seq = diamond_subgraph(&seq, &vs, &es).unwrap().graph;
        }
        assert_eq!(seq.vertex_count(), 9);
        assert_eq!(count_spanning_trees(&d.graph), count_spanning_trees(&seq));
        let mut da: Vec<usize> = d.graph.vertices().iter().map(|&v| d.graph.degree(v)).collect();
        let mut db: Vec<usize> = seq.vertices().iter().map(|&v| seq.degree(v)).collect();
        da.sort();
        db.sort();
        assert_eq!(da, db);
    }

    #[test]
    fn diamond_partition_quotient_of_single_edges_is_the_subdivision() {
        let g = MultiGraph::complete(3);
        let parts: Vec<EdgeSet> = g.edge_ids().into_iter().map(|e| [e].into()).collect();
        let d = diamond_partition(&g, &parts).unwrap();
        // quotient: six vertices in a cycle
        assert_eq!(d.quotient.vertex_count(), 6);
        assert_eq!(d.quotient.edge_count(), 6);
        assert!(d.quotient.vertices().iter().all(|&v| d.quotient.degree(v) == 2));
        assert_eq!(count_spanning_trees(&d.quotient), BigInt::from(6));
        for pv in &d.part_vertices {
            assert_eq!(pv.len(), 1);
        }
    }

    #[test]
    fn diamond_partition_is_order_independent() {
        let g = MultiGraph::complete(4);
        let e: Vec<EdgeId> = g.edge_ids().into_iter().collect();
        let p1: Vec<EdgeSet> = vec![
            [e[0], e[1], e[3]].into_iter().collect(), // triangle on v1v2v3
            [e[2], e[4], e[5]].into_iter().collect(),
        ];
        let p2: Vec<EdgeSet> = vec![p1[1].clone(), p1[0].clone()];
        let d1 = diamond_partition(&g, &p1).unwrap();
        let d2 = diamond_partition(&g, &p2).unwrap();
        assert_eq!(
            count_spanning_trees(&d1.graph),
            count_spanning_trees(&d2.graph)
        );
        let mut deg1: Vec<usize> = d1.graph.vertices().iter().map(|&v| d1.graph.degree(v)).collect();
        let mut deg2: Vec<usize> = d2.graph.vertices().iter().map(|&v| d2.graph.degree(v)).collect();
        deg1.sort();
        deg2.sort();
        assert_eq!(deg1, deg2);
    }

    #[test]
    fn single_part_changes_nothing() {
        let g = MultiGraph::complete(4);
        let d = diamond_partition(&g, &[g.edge_ids()]).unwrap();
        assert_eq!(d.graph, g);
        assert!(d.new_edges.is_empty());
        assert_eq!(d.quotient.vertex_count(), 1);
    }

    #[test]
    fn diamond_partition_rejects_bad_partitions() {
        let g = MultiGraph::complete(3);
        let all = g.edge_ids();
        assert!(matches!(
            diamond_partition(&g, &[all.clone(), all.clone()]),
            Err(ConstructError::NotAPartition(_))
        ));
        assert!(matches!(
            diamond_partition(&g, &[EdgeSet::new()]),
            Err(ConstructError::NotAPartition(_))
        ));
        let partial: Vec<EdgeSet> = vec![[*all.iter().next().unwrap()].into()];
        assert!(matches!(
            diamond_partition(&g, &partial),
            Err(ConstructError::NotAPartition(_))
        ));
    }

    #[test]
    fn line_graph_of_k4() {
        let lg = line_graph(&MultiGraph::complete(4));
        assert_eq!(lg.graph.vertex_count(), 6);
        assert_eq!(lg.graph.edge_count(), 12);
        assert!(lg.graph.vertices().iter().all(|&v| lg.graph.degree(v) == 4));
        assert_eq!(count_spanning_trees(&lg.graph), BigInt::from(384));
        assert_eq!(lg.parts.len(), 4);
        // the per-vertex cliques partition the edges
        let mut seen = EdgeSet::new();
        for (_, p) in &lg.parts {
            for &e in p {
                assert!(seen.insert(e));
            }
        }
        assert_eq!(seen, lg.graph.edge_ids());
    }

    #[test]
    fn line_graph_of_parallel_pair() {
        let h = MultiGraph::build(&["a", "b"], &[("a", "b"), ("a", "b")]).unwrap();
        let lg = line_graph(&h);
        assert_eq!(lg.graph.vertex_count(), 2);
        assert_eq!(lg.graph.edge_count(), 2);
        assert_eq!(count_spanning_trees(&lg.graph), BigInt::from(2));
    }

    #[test]
    fn subdivision_of_a_triangle_is_a_six_cycle() {
        let s = subdivision(&MultiGraph::complete(3));
        assert_eq!(s.graph.vertex_count(), 6);
        assert_eq!(s.graph.edge_count(), 6);
        assert!(s.graph.vertices().iter().all(|&v| s.graph.degree(v) == 2));
        assert_eq!(count_spanning_trees(&s.graph), BigInt::from(6));
    }

    #[test]
    fn middle_graph_of_a_triangle() {
        let m = middle_graph(&MultiGraph::complete(3));
        assert_eq!(m.graph.vertex_count(), 6);
        assert_eq!(m.graph.edge_count(), 9);
        assert_eq!(count_spanning_trees(&m.graph), BigInt::from(54));
        assert_eq!(m.parts.len(), 3);
        let mut seen = EdgeSet::new();
        for (_, p) in &m.parts {
            assert_eq!(p.len(), 3);
            for &e in p {
                assert!(seen.insert(e));
            }
        }
        assert_eq!(seen, m.graph.edge_ids());
    }

    #[test]
    fn circ_reduce_merges_parallel_classes() {
        // clique a1a2a3, both a1 and a2 attached to the same free vertex z
        let g = MultiGraph::build(
            &["z", "a1", "a2", "a3"],
            &[("a1", "a2"), ("a1", "a3"), ("a2", "a3"), ("z", "a1"), ("z", "a2")],
        )
        .unwrap();
        let p = CliquePartition::new(names(&g, &["z"]), vec![names(&g, &["a1", "a2", "a3"])]);
        let red = circ_reduce(&g, &p, &EdgeSet::new()).unwrap();
        assert_eq!(red.bullet.edge_count(), 2);
        assert_eq!(red.reduced.edge_count(), 1);
        let e = red.reduced.edges()[0].id;
        // class of two edges, each weighing 3/4
        assert_eq!(
            red.weights.get(e),
            BigRational::new(6.into(), 4.into())
        );
    }

    #[test]
    fn circ_reduce_keeps_forced_and_unforced_classes_apart() {
        let g = MultiGraph::build(
            &["z", "a1", "a2"],
            &[("a1", "a2"), ("z", "a1"), ("z", "a2")],
        )
        .unwrap();
        let p = CliquePartition::new(names(&g, &["z"]), vec![names(&g, &["a1", "a2"])]);
        let r = labels(&g, &["e2"]);
        let red = circ_reduce(&g, &p, &r).unwrap();
        assert_eq!(red.reduced.edge_count(), 2);
        let forced = red.weights.get(g.edge_by_label("e2").unwrap());
        let free = red.weights.get(g.edge_by_label("e3").unwrap());
        assert_eq!(forced, BigRational::from_integer(2.into()));
        assert_eq!(free, BigRational::new(2.into(), 3.into()));
    }

    #[test]
    fn reduction_rewrites_into_standing_shape() {
        // two cliques joined through a free vertex and one clique-to-clique edge
        let g = MultiGraph::build(
            &["z", "a1", "a2", "b1", "b2"],
            &[
                ("a1", "a2"), ("b1", "b2"),
                ("z", "a1"), ("a2", "b1"), ("z", "b2"),
            ],
        )
        .unwrap();
        let cliques = vec![names(&g, &["a1", "a2"]), names(&g, &["b1", "b2"])];
        let w = labels(&g, &["e3", "e4", "e5"]);
        let red = reduce_to_special_case(&g, &cliques, &w).unwrap();
        assert!(red.certificate.ok(), "{}", red.certificate);
        assert_eq!(
            count_constrained(&red.graph, &red.w_prime),
            count_constrained(&g, &w)
        );
    }

    #[test]
    fn reduction_rejects_cycles_and_uncovered_cross_edges() {
        let g = MultiGraph::complete(4);
        assert!(matches!(
            reduce_to_special_case(&g, &[], &labels(&g, &["e1", "e2", "e4"])),
            Err(ConstructError::NotAForest)
        ));
        let cliques = vec![names(&g, &["v1", "v2"])];
        // cross edges v1v3, v1v4, v2v3, v2v4 not all inside w
        assert!(matches!(
            reduce_to_special_case(&g, &cliques, &labels(&g, &["e2"])),
            Err(ConstructError::CrossNotContained)
        ));
    }

    /// Shortest cycle length via edge removal and breadth-first distance.
    fn girth(g: &MultiGraph) -> Option<usize> {
        let mut best: Option<usize> = None;
        for e in g.edges() {
            let del: EdgeSet = [e.id].into_iter().collect();
            let h = g.delete_edges(&del).unwrap();
            if let Some(d) = bfs_distance(&h, e.a, e.b) {
                let cyc = d + 1;
                if best.map_or(true, |b| cyc < b) {
                    best = Some(cyc);
                }
            }
        }
        best
    }

    fn bfs_distance(g: &MultiGraph, from: VertexId, to: VertexId) -> Option<usize> {
        let mut dist: BTreeMap<VertexId, usize> = BTreeMap::new();
        let mut queue = std::collections::VecDeque::from([from]);
        dist.insert(from, 0);
        while let Some(v) = queue.pop_front() {
            if v == to {
                return Some(dist[&v]);
            }
            for w in g.neighbors(v) {
                if !dist.contains_key(&w) {
                    dist.insert(w, dist[&v] + 1);
                    queue.push_back(w);
                }
            }
        }
        None
    }
}
