//! Clique partitions and clique cuts, with structured hypothesis checking.
//!
//! The clique-collapse formulas all start from the same shape: the vertex
//! set splits into a free part `V0` and disjoint cliques `V1..Vk`, with no
//! edges between distinct cliques, and every clique vertex touching at most
//! one edge into `V0` (so the cross edges form stars centered in `V0`).
//! Checks are recorded one by one so a violation names what failed.

use serde::Serialize;

use crate::graph::{EdgeSet, MultiGraph, VertexSet};

/// One named hypothesis check.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CheckRecord {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

/// Every check a formula ran, in order.
#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct HypothesisReport {
    pub checks: Vec<CheckRecord>,
}

impl HypothesisReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        self.checks.push(CheckRecord {
            name: name.to_string(),
            ok,
            detail: detail.into(),
        });
    }

    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn first_failure(&self) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| !c.ok)
    }
}

impl std::fmt::Display for HypothesisReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.first_failure() {
            Some(c) => write!(f, "failed check `{}`: {}", c.name, c.detail),
            None => write!(f, "all {} checks passed", self.checks.len()),
        }
    }
}

/// A vertex partition into a free part and disjoint cliques.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliquePartition {
    pub v0: VertexSet,
    pub cliques: Vec<VertexSet>,
}

impl CliquePartition {
    pub fn new(v0: VertexSet, cliques: Vec<VertexSet>) -> Self {
        CliquePartition { v0, cliques }
    }

    /// Union of the cliques.
    pub fn u(&self) -> VertexSet {
        let mut u = VertexSet::new();
        for c in &self.cliques {
            u.extend(c.iter().copied());
        }
        u
    }

    /// Cross edges between clique `i` and the free part.
    pub fn m_i(&self, g: &MultiGraph, i: usize) -> EdgeSet {
        g.edges_between(&self.cliques[i], &self.v0)
    }

    /// All cross edges between cliques and the free part.
    pub fn m(&self, g: &MultiGraph) -> EdgeSet {
        let mut m = EdgeSet::new();
        for i in 0..self.cliques.len() {
            m.extend(self.m_i(g, i).iter().copied());
        }
        m
    }

    /// Basic shape: the parts are disjoint, cover every vertex, and each
    /// declared clique is a nonempty simple clique.
    pub fn check_shape(&self, g: &MultiGraph, report: &mut HypothesisReport) {
        let mut seen = VertexSet::new();
        let mut disjoint = true;
        let mut covered = 0usize;
        for v in self.v0.iter().chain(self.cliques.iter().flatten()) {
            if !seen.insert(*v) {
                disjoint = false;
            }
            covered += 1;
        }
        report.push(
            "parts disjoint",
            disjoint,
            "no vertex may appear in two parts",
        );
        let all = seen == g.vertex_set() && covered == g.vertex_count();
        report.push(
            "parts cover the graph",
            all,
            format!("{} vertices listed, graph has {}", covered, g.vertex_count()),
        );
        for (i, c) in self.cliques.iter().enumerate() {
            report.push(
                &format!("clique {} nonempty", i + 1),
                !c.is_empty(),
                format!("{} vertices", c.len()),
            );
            report.push(
                &format!("clique {} is a simple clique", i + 1),
                g.is_clique(c),
                "every pair inside must be joined by exactly one edge",
            );
        }
    }

    /// The standing conditions on top of the shape: no edges between
    /// distinct cliques, and every clique vertex meets at most one cross
    /// edge into the free part.
    pub fn check_standing(&self, g: &MultiGraph, report: &mut HypothesisReport) {
        self.check_shape(g, report);
        let mut cross_ok = true;
        for i in 0..self.cliques.len() {
            for j in i + 1..self.cliques.len() {
                if !g.edges_between(&self.cliques[i], &self.cliques[j]).is_empty() {
                    cross_ok = false;
                }
            }
        }
        report.push(
            "no edges between distinct cliques",
            cross_ok,
            "cross edges may only reach the free part",
        );
        let m = self.m(g);
        let mut star_ok = true;
        let mut bad = String::new();
        for v in self.u() {
            let deg = g
                .incident_edges(v)
                .intersection(&m)
                .count();
            if deg > 1 {
                star_ok = false;
                bad = format!(
                    "vertex {} meets {} cross edges",
                    g.name(v).unwrap_or("?"),
                    deg
                );
                break;
            }
        }
        report.push(
            "cross edges form stars centered in the free part",
            star_ok,
            if star_ok {
                "every clique vertex meets at most one cross edge".to_string()
            } else {
                bad
            },
        );
        report.push("graph connected", g.is_connected(), "");
    }
}

/// A clique separating two vertex classes: `s1` and `s2` partition the
/// rest and have disjoint closed neighborhoods.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueCut {
    pub u: VertexSet,
    pub s1: VertexSet,
    pub s2: VertexSet,
    pub w: EdgeSet,
}

impl CliqueCut {
    pub fn check(&self, g: &MultiGraph, report: &mut HypothesisReport) {
        report.push(
            "separator is a simple clique",
            !self.u.is_empty() && g.is_clique(&self.u),
            format!("{} vertices", self.u.len()),
        );
        let mut seen = self.u.clone();
        let mut disjoint = true;
        for v in self.s1.iter().chain(self.s2.iter()) {
            if !seen.insert(*v) {
                disjoint = false;
            }
        }
        report.push(
            "sides partition the rest",
            disjoint && seen == g.vertex_set(),
            "every vertex outside the clique lies on exactly one side",
        );
        let n1 = g.closed_neighborhood(&self.s1);
        let n2 = g.closed_neighborhood(&self.s2);
        report.push(
            "closed neighborhoods of the sides are disjoint",
            n1.is_disjoint(&n2),
            "no vertex may see both sides",
        );
        let inside = match g.induced_subgraph(&self.u) {
            Ok(h) => h.edge_ids(),
            Err(_) => EdgeSet::new(),
        };
        report.push(
            "constraint avoids the clique interior",
            self.w.iter().all(|e| !inside.contains(e)),
            "forced edges must not lie inside the separator",
        );
        report.push("graph connected", g.is_connected(), "");
    }

    /// The graph on the clique plus one side, with the part of `w` that
    /// lives there.
    pub fn side(&self, g: &MultiGraph, which: usize) -> (MultiGraph, EdgeSet) {
        let s = if which == 1 { &self.s1 } else { &self.s2 };
        let mut keep = self.u.clone();
        keep.extend(s.iter().copied());
        let h = g.induced_subgraph(&keep).expect("cut vertices exist");
        let ids = h.edge_ids();
        let w: EdgeSet = self.w.intersection(&ids).copied().collect();
        (h, w)
    }
}
