//! Seeded instance generators and verification campaigns.
//!
//! The standing hypotheses of the clique formulas are measure zero under
//! any uniform random graph model, so the generators build them by
//! construction instead of rejection sampling. Every generator is a pure
//! function of its seed; campaigns derive per-trial seeds from a master
//! stream, so a report is reproducible from (formula, spec) alone.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::construct::{line_graph, middle_graph};
use crate::enumerate::EnumError;
use crate::formulas::{
    cor51_pendant_clique, cor531_count, line_graph_formula, line_graph_via_subdivision,
    middle_graph_count, moon_count, prop31_count, regular_line_graph, thm12_matching,
    thm31_count, thm42_count, thm510_factorize, thm53_count, thm53_via_reduction, thm54_count,
    FormulaError, FormulaId, FormulaResult, LsubMode, RhsEval,
};
use crate::graph::{EdgeId, EdgeSet, MultiGraph, VertexId, VertexSet};
use crate::io::{edge_labels, vertex_names, write_graph_text};
use crate::kirchhoff::{count_constrained, count_spanning_trees, Count, TreeSum};
use crate::partition::{CliqueCut, CliquePartition};

/// Size limits for generated instances. Defaults keep every auxiliary
/// graph comfortably under the enumeration cap, so both evaluation routes
/// can always run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenBounds {
    pub max_vertices: usize,
    pub max_edges: usize,
    pub max_multiplicity: usize,
}

impl Default for GenBounds {
    fn default() -> Self {
        GenBounds {
            max_vertices: 8,
            max_edges: 12,
            max_multiplicity: 3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    Plain,
    CliquePartition,
    CliqueCut,
    EdgeCliquePartition,
    LineGraphSource,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub kind: GeneratorKind,
    pub bounds: GenBounds,
    pub seed: u64,
}

impl InstanceSpec {
    pub fn for_formula(id: FormulaId, seed: u64) -> Self {
        InstanceSpec {
            kind: default_kind(id),
            bounds: default_bounds(id),
            seed,
        }
    }
}

pub fn default_kind(id: FormulaId) -> GeneratorKind {
    match id {
        FormulaId::Moon | FormulaId::Prop31 => GeneratorKind::Plain,
        FormulaId::Thm12
        | FormulaId::Thm31
        | FormulaId::Thm42
        | FormulaId::Thm53
        | FormulaId::Cor531 => GeneratorKind::CliquePartition,
        FormulaId::Thm510 | FormulaId::Cor51 => GeneratorKind::CliqueCut,
        FormulaId::Thm54 => GeneratorKind::EdgeCliquePartition,
        FormulaId::Cor11 | FormulaId::Eq14 | FormulaId::Mid | FormulaId::Lsub => {
            GeneratorKind::LineGraphSource
        }
    }
}

pub fn default_bounds(id: FormulaId) -> GenBounds {
    match id {
        FormulaId::Moon => GenBounds {
            max_vertices: 6,
            max_edges: 15,
            max_multiplicity: 1,
        },
        // the derived middle/line graphs blow up quadratically in the
        // source degrees, so the sources stay small
        FormulaId::Mid | FormulaId::Lsub => GenBounds {
            max_vertices: 5,
            max_edges: 8,
            max_multiplicity: 2,
        },
        FormulaId::Cor11 | FormulaId::Eq14 => GenBounds {
            max_vertices: 7,
            max_edges: 12,
            max_multiplicity: 3,
        },
        _ => GenBounds::default(),
    }
}

/// Connected loopless multigraph within the bounds: a random spanning
/// tree plus extra edges under the multiplicity cap.
pub fn gen_connected_multigraph(seed: u64, nmax: usize, mmax: usize, multmax: usize) -> MultiGraph {
    assert!(nmax >= 1, "need room for at least one vertex");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=nmax);
    let mut g = MultiGraph::new();
    let verts: Vec<VertexId> = (1..=n).map(|i| g.fresh_vertex(&format!("v{i}"))).collect();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        g.fresh_edge(verts[i], verts[j], None);
    }
    let mult_cap = multmax.max(1);
    let budget = mmax.saturating_sub(n.saturating_sub(1));
    let extra = if n >= 2 && budget > 0 {
        rng.gen_range(0..=budget)
    } else {
        0
    };
    for _ in 0..extra {
        for _attempt in 0..8 {
            let a = verts[rng.gen_range(0..n)];
            let b = verts[rng.gen_range(0..n)];
            if a != b && g.multiplicity(a, b) < mult_cap {
                g.fresh_edge(a, b, None);
                break;
            }
        }
    }
    g
}

fn random_forest_subset(
    g: &MultiGraph,
    rng: &mut ChaCha8Rng,
    pool: &EdgeSet,
    density: f64,
) -> EdgeSet {
    let mut order: Vec<EdgeId> = pool.iter().copied().collect();
    order.shuffle(rng);
    let mut acc = EdgeSet::new();
    for e in order {
        if !rng.gen_bool(density) {
            continue;
        }
        acc.insert(e);
        if !g.is_forest(&acc) {
            acc.remove(&e);
        }
    }
    acc
}

/// A random forest among the graph's edges, for the reduction lemmas.
pub fn random_forest_edges(g: &MultiGraph, seed: u64) -> EdgeSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_forest_subset(g, &mut rng, &g.edge_ids(), 0.5)
}

/// Connected graph with at least one edge, for line-graph formulas.
pub fn gen_line_graph_source(seed: u64, bounds: &GenBounds) -> MultiGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let h = gen_connected_multigraph(
            rng.gen(),
            bounds.max_vertices.max(2),
            bounds.max_edges.max(1),
            bounds.max_multiplicity,
        );
        if h.edge_count() >= 1 {
            return h;
        }
    }
}

/// Connected regular multigraph via stub pairing, with a cycle fallback
/// if the dice stay cold.
pub fn gen_regular_multigraph(seed: u64, bounds: &GenBounds) -> MultiGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let maxv = bounds.max_vertices.clamp(2, 7);
    let mult_cap = bounds.max_multiplicity.max(1);
    for _attempt in 0..200 {
        let n = rng.gen_range(2..=maxv);
        let r = rng.gen_range(1..=3usize);
        if (n * r) % 2 != 0 || n * r / 2 > bounds.max_edges.max(1) {
            continue;
        }
        if r == 1 && n != 2 {
            continue; // 1-regular is connected only as a single edge
        }
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(r)).collect();
        stubs.shuffle(&mut rng);
        let mut pairs = Vec::new();
        let mut mult = std::collections::BTreeMap::new();
        let mut ok = true;
        for c in stubs.chunks(2) {
            let (a, b) = (c[0], c[1]);
            if a == b {
                ok = false;
                break;
            }
            let slot = mult.entry((a.min(b), a.max(b))).or_insert(0usize);
            *slot += 1;
            if *slot > mult_cap {
                ok = false;
                break;
            }
            pairs.push((a.min(b), a.max(b)));
        }
        if !ok {
            continue;
        }
        let mut g = MultiGraph::new();
        let vs: Vec<VertexId> = (1..=n).map(|i| g.fresh_vertex(&format!("v{i}"))).collect();
        for (a, b) in pairs {
            g.fresh_edge(vs[a], vs[b], None);
        }
        if g.is_connected() {
            return g;
        }
    }
    MultiGraph::cycle(maxv.max(3))
}

/// Clique-partition instance satisfying the standing conditions: cliques
/// V₁..V_k, a free block with its own multigraph, star-shaped cross edges,
/// connectivity; plus a forced free forest N and a cross subset R.
pub fn gen_clique_partition_instance(
    seed: u64,
    bounds: &GenBounds,
) -> (MultiGraph, CliquePartition, EdgeSet, EdgeSet) {
    gen_clique_partition_inner(seed, bounds, false, 1, 3)
}

/// Same, but with exactly one clique: the single-clique special case.
pub fn gen_single_clique_instance(
    seed: u64,
    bounds: &GenBounds,
) -> (MultiGraph, CliquePartition, EdgeSet, EdgeSet) {
    gen_clique_partition_inner(seed, bounds, false, 1, 1)
}

/// Same, but guaranteeing at least one parallel class: two vertices of
/// the first clique attach to the same free vertex, so the collapsed
/// graph has parallel cross edges for the reduction to merge.
pub fn gen_parallel_class_instance(
    seed: u64,
    bounds: &GenBounds,
) -> (MultiGraph, CliquePartition, EdgeSet, EdgeSet) {
    gen_clique_partition_inner(seed, bounds, true, 1, 3)
}

fn gen_clique_partition_inner(
    seed: u64,
    bounds: &GenBounds,
    force_parallel: bool,
    kmin: usize,
    kmax: usize,
) -> (MultiGraph, CliquePartition, EdgeSet, EdgeSet) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let maxv = bounds.max_vertices.max(4);
    let mult_cap = bounds.max_multiplicity.max(1);

    let v0_size = rng.gen_range(1..=2.min(maxv.saturating_sub(2)).max(1));
    let mut g = MultiGraph::new();
    let zs: Vec<VertexId> = (1..=v0_size)
        .map(|i| g.fresh_vertex(&format!("z{i}")))
        .collect();
    let v0: VertexSet = zs.iter().copied().collect();
    // free block: spanning tree plus a few extras, parallel edges welcome
    for i in 1..v0_size {
        let j = rng.gen_range(0..i);
        g.fresh_edge(zs[i], zs[j], None);
    }
    if v0_size >= 2 {
        for _ in 0..rng.gen_range(0..=2) {
            for _attempt in 0..6 {
                let a = zs[rng.gen_range(0..v0_size)];
                let b = zs[rng.gen_range(0..v0_size)];
                if a != b && g.multiplicity(a, b) < mult_cap {
                    g.fresh_edge(a, b, None);
                    break;
                }
            }
        }
    }

    let k = rng.gen_range(kmin..=kmax);
    let mut cliques: Vec<VertexSet> = Vec::new();
    let mut remaining = maxv - v0_size;
    for ci in 1..=k {
        if remaining == 0 {
            break;
        }
        let lo = if force_parallel && ci == 1 {
            2.min(remaining)
        } else {
            1
        };
        let hi = remaining.min(3).max(lo);
        let size = rng.gen_range(lo..=hi);
        remaining -= size;
        let members: Vec<VertexId> = (1..=size)
            .map(|j| g.fresh_vertex(&format!("c{ci}v{j}")))
            .collect();
        for i in 0..size {
            for j in i + 1..size {
                g.fresh_edge(members[i], members[j], None);
            }
        }
        // cross edges: at most one per clique vertex, first one mandatory
        // so the clique reaches the free block
        for (j, &x) in members.iter().enumerate() {
            let attach = j == 0
                || (force_parallel && ci == 1 && j == 1)
                || rng.gen_bool(0.55);
            if attach {
                let z = if force_parallel && ci == 1 && j <= 1 {
                    zs[0] // both early vertices onto the same free vertex
                } else {
                    zs[rng.gen_range(0..v0_size)]
                };
                g.fresh_edge(x, z, None);
            }
        }
        cliques.push(members.into_iter().collect());
    }

    let partition = CliquePartition::new(v0.clone(), cliques);
    let free_edges = g.induced_subgraph(&v0).expect("free block exists").edge_ids();
    let n = random_forest_subset(&g, &mut rng, &free_edges, 0.5);
    let m = partition.m(&g);
    let r: EdgeSet = m.iter().copied().filter(|_| rng.gen_bool(0.4)).collect();
    (g, partition, n, r)
}

/// Cliques joined pairwise by a matching: the hypotheses of the
/// two-clique-blocks formula. Returns the graph and the clique list; the
/// cross edges are recoverable as all edges between distinct cliques.
pub fn gen_matching_clique_instance(seed: u64, bounds: &GenBounds) -> (MultiGraph, Vec<VertexSet>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.gen_range(2..=3usize);
    let budget = bounds.max_vertices.max(2 * k);
    let mut sizes: Vec<usize> = (0..k).map(|_| rng.gen_range(1..=3)).collect();
    while sizes.iter().sum::<usize>() + (k - 1) > budget {
        match sizes.iter_mut().filter(|s| **s > 1).max() {
            Some(s) => *s -= 1,
            None => break,
        }
    }
    // a spanning tree over the parts, each cross edge consuming one
    // vertex slot on each side (the matching condition)
    let mut used = vec![0usize; k];
    let mut cross: Vec<(usize, usize)> = Vec::new();
    for i in 1..k {
        let open: Vec<usize> = (0..i).filter(|&j| used[j] < sizes[j]).collect();
        let j = if open.is_empty() {
            sizes[0] += 1; // grow the first part to make room
            0
        } else {
            open[rng.gen_range(0..open.len())]
        };
        used[j] += 1;
        used[i] += 1;
        cross.push((j, i));
    }
    // optional extra matching edges between parts with slots left
    for i in 0..k {
        for j in i + 1..k {
            if used[i] < sizes[i] && used[j] < sizes[j] && rng.gen_bool(0.3) {
                used[i] += 1;
                used[j] += 1;
                cross.push((i, j));
            }
        }
    }

    let mut g = MultiGraph::new();
    let parts: Vec<Vec<VertexId>> = sizes
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            (1..=s)
                .map(|j| g.fresh_vertex(&format!("p{}v{j}", i + 1)))
                .collect()
        })
        .collect();
    for members in &parts {
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                g.fresh_edge(members[i], members[j], None);
            }
        }
    }
    let mut slot = vec![0usize; k];
    for (i, j) in cross {
        let a = parts[i][slot[i]];
        let b = parts[j][slot[j]];
        slot[i] += 1;
        slot[j] += 1;
        g.fresh_edge(a, b, None);
    }
    let cliques = parts
        .into_iter()
        .map(|ms| ms.into_iter().collect())
        .collect();
    (g, cliques)
}

/// Clique separator instance: each clique vertex sees at most one side,
/// the sides never see each other, and a forest constraint stays clear of
/// the clique interior.
pub fn gen_clique_cut_instance(seed: u64, bounds: &GenBounds) -> (MultiGraph, CliqueCut) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let maxv = bounds.max_vertices.max(4);
    let mult_cap = bounds.max_multiplicity.max(1);
    let u_size = rng.gen_range(2..=3.min(maxv - 2));
    let mut g = MultiGraph::new();
    let us: Vec<VertexId> = (1..=u_size)
        .map(|i| g.fresh_vertex(&format!("u{i}")))
        .collect();
    for i in 0..u_size {
        for j in i + 1..u_size {
            g.fresh_edge(us[i], us[j], None);
        }
    }
    // split the clique into gates: side 1 may only touch the first
    // portion, side 2 only the second
    let gate = rng.gen_range(1..u_size);
    let (gates1, gates2) = us.split_at(gate);

    let build_side = |rng: &mut ChaCha8Rng,
                          g: &mut MultiGraph,
                          gates: &[VertexId],
                          tag: usize,
                          budget: usize|
     -> VertexSet {
        let size = rng.gen_range(1..=2.min(budget).max(1));
        let mut side = Vec::new();
        for i in 1..=size {
            let v = g.fresh_vertex(&format!("s{tag}v{i}"));
            // first edge reaches a gate or an earlier side vertex, so the
            // side stays connected to the separator
            let targets: Vec<VertexId> = if side.is_empty() {
                gates.to_vec()
            } else {
                gates.iter().chain(side.iter()).copied().collect()
            };
            let t = targets[rng.gen_range(0..targets.len())];
            g.fresh_edge(v, t, None);
            if rng.gen_bool(0.5) {
                for _attempt in 0..6 {
                    let t2 = targets[rng.gen_range(0..targets.len())];
                    if t2 != v && g.multiplicity(v, t2) < mult_cap {
                        g.fresh_edge(v, t2, None);
                        break;
                    }
                }
            }
            side.push(v);
        }
        side.into_iter().collect()
    };

    let budget = maxv - u_size;
    let s1 = build_side(&mut rng, &mut g, gates1, 1, budget.saturating_sub(1).max(1));
    let s2 = build_side(&mut rng, &mut g, gates2, 2, budget.saturating_sub(s1.len()).max(1));

    let inside = g.induced_subgraph(&us.iter().copied().collect()).unwrap().edge_ids();
    let outside: EdgeSet = g.edge_ids().difference(&inside).copied().collect();
    let w = random_forest_subset(&g, &mut rng, &outside, 0.3);
    let cut = CliqueCut {
        u: us.into_iter().collect(),
        s1,
        s2,
        w,
    };
    (g, cut)
}

/// Partition of the edge set into cliques, glued on shared vertices.
pub fn gen_edge_clique_partition(seed: u64, bounds: &GenBounds) -> (MultiGraph, Vec<EdgeSet>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let maxv = bounds.max_vertices.max(3);
    let max_edges = bounds.max_edges.max(3);
    let mut g = MultiGraph::new();
    let mut parts: Vec<EdgeSet> = Vec::new();
    let mut all: Vec<VertexId> = Vec::new();
    let k = rng.gen_range(1..=4usize);
    for pi in 1..=k {
        let size = rng.gen_range(2..=3usize);
        let shared = if all.is_empty() {
            0
        } else {
            rng.gen_range(1..=size.min(all.len()))
        };
        let fresh = (size - shared).min(maxv.saturating_sub(all.len()));
        let size = shared + fresh;
        if size < 2 || g.edge_count() + size * (size - 1) / 2 > max_edges {
            continue;
        }
        let mut members: Vec<VertexId> = Vec::new();
        let mut pool = all.clone();
        for _ in 0..shared {
            let idx = rng.gen_range(0..pool.len());
            members.push(pool.swap_remove(idx));
        }
        for j in 1..=fresh {
            let v = g.fresh_vertex(&format!("q{pi}v{j}"));
            members.push(v);
            all.push(v);
        }
        let mut part = EdgeSet::new();
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                part.insert(g.fresh_edge(members[i], members[j], None));
            }
        }
        parts.push(part);
    }
    if parts.is_empty() {
        // degenerate bounds: fall back to a single-edge part
        let a = g.fresh_vertex("q1v1");
        let b = g.fresh_vertex("q1v2");
        parts.push([g.fresh_edge(a, b, None)].into_iter().collect());
    }
    (g, parts)
}

/// A clique with one vertex hanging off it whose neighborhood the rest of
/// the graph cannot see.
pub fn gen_pendant_clique_instance(
    seed: u64,
    bounds: &GenBounds,
) -> (MultiGraph, VertexSet, VertexId) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let maxv = bounds.max_vertices.max(3);
    let mult_cap = bounds.max_multiplicity.max(1);
    let u_size = rng.gen_range(1..=4.min(maxv - 1));
    let mut g = MultiGraph::new();
    let mut us: Vec<VertexId> = (1..=u_size)
        .map(|i| g.fresh_vertex(&format!("u{i}")))
        .collect();
    for i in 0..u_size {
        for j in i + 1..u_size {
            g.fresh_edge(us[i], us[j], None);
        }
    }
    let w = g.fresh_vertex("w");
    us.shuffle(&mut rng);
    let d = rng.gen_range(1..=u_size);
    for &x in us.iter().take(d) {
        g.fresh_edge(w, x, None);
    }
    // the rest may only touch clique vertices w does not
    let free: Vec<VertexId> = us.iter().skip(d).copied().collect();
    if !free.is_empty() {
        let mut anchors = free;
        let extra = rng.gen_range(0..=maxv.saturating_sub(u_size + 1).min(2));
        for i in 1..=extra {
            let b = g.fresh_vertex(&format!("b{i}"));
            let t = anchors[rng.gen_range(0..anchors.len())];
            g.fresh_edge(b, t, None);
            if rng.gen_bool(0.5) {
                for _attempt in 0..6 {
                    let t2 = anchors[rng.gen_range(0..anchors.len())];
                    if t2 != b && g.multiplicity(b, t2) < mult_cap {
                        g.fresh_edge(b, t2, None);
                        break;
                    }
                }
            }
            anchors.push(b);
        }
    }
    let u: VertexSet = us.into_iter().collect();
    (g, u, w)
}

/// Clique plus trees hanging outside it, so that everything outside the
/// clique interior is a forest.
pub fn gen_outside_forest_instance(seed: u64, bounds: &GenBounds) -> (MultiGraph, VertexSet) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let maxv = bounds.max_vertices.max(2);
    let u_size = rng.gen_range(1..=4.min(maxv));
    let mut g = MultiGraph::new();
    let us: Vec<VertexId> = (1..=u_size)
        .map(|i| g.fresh_vertex(&format!("u{i}")))
        .collect();
    for i in 0..u_size {
        for j in i + 1..u_size {
            g.fresh_edge(us[i], us[j], None);
        }
    }
    let mut w = EdgeSet::new();
    let mut all = us.clone();
    let outside = rng.gen_range(0..=maxv - u_size);
    for i in 1..=outside {
        let a = g.fresh_vertex(&format!("a{i}"));
        let t = all[rng.gen_range(0..all.len())];
        w.insert(g.fresh_edge(a, t, None));
        all.push(a);
        if rng.gen_bool(0.4) {
            let t2 = all[rng.gen_range(0..all.len())];
            if t2 != a {
                let e = g.fresh_edge(a, t2, None);
                let mut cand = w.clone();
                cand.insert(e);
                if g.is_forest(&cand) {
                    w = cand;
                } else {
                    let single: EdgeSet = [e].into_iter().collect();
                    g = g.delete_edges(&single).expect("edge was just added");
                }
            }
        }
    }
    (g, us.into_iter().collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignFailure {
    pub trial: usize,
    pub seed: u64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub formula: String,
    pub trials: usize,
    pub seed: u64,
    pub failures: Vec<CampaignFailure>,
    pub elapsed_ms: u64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Copy with the timing field zeroed: reports are reproducible from
    /// the seed up to elapsed time.
    pub fn without_timing(&self) -> Self {
        VerificationReport {
            elapsed_ms: 0,
            ..self.clone()
        }
    }
}

/// Per-trial signal that the instance was too big to enumerate; the
/// campaign regenerates with the next derived seed.
struct Retry;

fn dump(g: &MultiGraph, headline: String, notes: &[String]) -> String {
    let mut out = headline;
    out.push('\n');
    out.push_str(&write_graph_text(g));
    for n in notes {
        out.push('\n');
        out.push_str(n);
    }
    out
}

fn note_vertices(g: &MultiGraph, label: &str, vs: &VertexSet) -> String {
    format!("{label}: {}", vertex_names(g, vs).join(" "))
}

fn note_edges(g: &MultiGraph, label: &str, es: &EdgeSet) -> String {
    format!("{label}: {}", edge_labels(g, es).join(" "))
}

/// Evaluate a formula through both routes and compare with the oracle.
fn check_routes<F>(
    g: &MultiGraph,
    oracle: &Count,
    notes: &[String],
    eval: F,
) -> Result<Option<String>, Retry>
where
    F: Fn(RhsEval) -> Result<FormulaResult, FormulaError>,
{
    let fast = match eval(RhsEval::MatrixTree) {
        Ok(r) => r.value,
        Err(FormulaError::Enumeration(EnumError::CapExceeded(_))) => return Err(Retry),
        Err(e) => return Ok(Some(dump(g, format!("fast route failed: {e}"), notes))),
    };
    let slow = match eval(RhsEval::enumeration()) {
        Ok(r) => r.value,
        Err(FormulaError::Enumeration(EnumError::CapExceeded(_))) => return Err(Retry),
        Err(e) => return Ok(Some(dump(g, format!("enumeration route failed: {e}"), notes))),
    };
    if fast != slow {
        return Ok(Some(dump(
            g,
            format!("evaluation routes disagree: {fast} against {slow}"),
            notes,
        )));
    }
    let expected = TreeSum::from_integer(oracle.clone());
    if fast != expected {
        return Ok(Some(dump(
            g,
            format!("formula gives {fast}, oracle gives {oracle}"),
            notes,
        )));
    }
    Ok(None)
}

fn run_one(id: FormulaId, seed: u64, bounds: &GenBounds) -> Result<Option<String>, Retry> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match id {
        FormulaId::Moon => {
            let n = rng.gen_range(2..=bounds.max_vertices.max(2));
            let g = MultiGraph::complete(n);
            let m = random_forest_subset(&g, &mut rng, &g.edge_ids(), 0.4);
            let oracle = count_constrained(&g, &m);
            let notes = [note_edges(&g, "forced", &m)];
            match moon_count(&g, &m) {
                Ok(res) if res.value == TreeSum::from_integer(oracle.clone()) => Ok(None),
                Ok(res) => Ok(Some(dump(
                    &g,
                    format!("formula gives {}, oracle gives {oracle}", res.value),
                    &notes,
                ))),
                Err(e) => Ok(Some(dump(&g, format!("formula failed: {e}"), &notes))),
            }
        }
        FormulaId::Thm12 => {
            let (g, cliques) = gen_matching_clique_instance(rng.gen(), bounds);
            let mut m0 = EdgeSet::new();
            for e in g.edges() {
                let part_a = cliques.iter().position(|c| c.contains(&e.a));
                let part_b = cliques.iter().position(|c| c.contains(&e.b));
                if part_a != part_b {
                    m0.insert(e.id);
                }
            }
            let oracle = count_constrained(&g, &m0);
            let notes: Vec<String> = cliques
                .iter()
                .enumerate()
                .map(|(i, c)| note_vertices(&g, &format!("clique {}", i + 1), c))
                .collect();
            check_routes(&g, &oracle, &notes, |rhs| thm12_matching(&g, &cliques, rhs))
        }
        FormulaId::Cor11 => {
            let h = gen_line_graph_source(rng.gen(), bounds);
            let oracle = count_spanning_trees(&line_graph(&h).graph);
            check_routes(&h, &oracle, &[], |rhs| line_graph_formula(&h, rhs))
        }
        FormulaId::Eq14 => {
            let h = gen_regular_multigraph(rng.gen(), bounds);
            let oracle = count_spanning_trees(&line_graph(&h).graph);
            check_routes(&h, &oracle, &[], |rhs| regular_line_graph(&h, rhs))
        }
        FormulaId::Prop31 => {
            let (g, u) = gen_outside_forest_instance(rng.gen(), bounds);
            let inside = g.induced_subgraph(&u).expect("clique exists").edge_ids();
            let w: EdgeSet = g.edge_ids().difference(&inside).copied().collect();
            let oracle = count_constrained(&g, &w);
            let notes = [note_vertices(&g, "clique", &u)];
            match prop31_count(&g, &u) {
                Ok(res) if res.value == TreeSum::from_integer(oracle.clone()) => Ok(None),
                Ok(res) => Ok(Some(dump(
                    &g,
                    format!("formula gives {}, oracle gives {oracle}", res.value),
                    &notes,
                ))),
                Err(e) => Ok(Some(dump(&g, format!("formula failed: {e}"), &notes))),
            }
        }
        FormulaId::Thm31 => {
            let (g, partition, n, _) = gen_single_clique_instance(rng.gen(), bounds);
            let mut forced = partition.m(&g);
            forced.extend(n.iter().copied());
            let oracle = count_constrained(&g, &forced);
            let notes = [
                note_vertices(&g, "clique", &partition.cliques[0]),
                note_edges(&g, "extra forced", &n),
            ];
            check_routes(&g, &oracle, &notes, |rhs| {
                thm31_count(&g, &partition.cliques[0], &n, rhs)
            })
        }
        FormulaId::Thm42 => {
            let (g, partition, n, _) = gen_clique_partition_instance(rng.gen(), bounds);
            let mut forced = partition.m(&g);
            forced.extend(n.iter().copied());
            let oracle = count_constrained(&g, &forced);
            let notes = partition_notes(&g, &partition, &n, None);
            check_routes(&g, &oracle, &notes, |rhs| thm42_count(&g, &partition, &n, rhs))
        }
        FormulaId::Thm53 => {
            let (g, partition, n, r) = gen_clique_partition_instance(rng.gen(), bounds);
            let mut forced = r.clone();
            forced.extend(n.iter().copied());
            let oracle = count_constrained(&g, &forced);
            let notes = partition_notes(&g, &partition, &n, Some(&r));
            if let Some(fail) = check_routes(&g, &oracle, &notes, |rhs| {
                thm53_count(&g, &partition, &n, &r, rhs)
            })? {
                return Ok(Some(fail));
            }
            // the parallel-class reduction must give the same value
            let direct = thm53_count(&g, &partition, &n, &r, RhsEval::MatrixTree)
                .expect("route already evaluated")
                .value;
            match thm53_via_reduction(&g, &partition, &n, &r) {
                Ok(res) if res.value == direct => Ok(None),
                Ok(res) => Ok(Some(dump(
                    &g,
                    format!("reduced form gives {}, direct form {direct}", res.value),
                    &notes,
                ))),
                Err(e) => Ok(Some(dump(&g, format!("reduction failed: {e}"), &notes))),
            }
        }
        FormulaId::Cor531 => {
            let (g, partition, n, _) = gen_clique_partition_instance(rng.gen(), bounds);
            let oracle = count_constrained(&g, &n);
            let notes = partition_notes(&g, &partition, &n, None);
            check_routes(&g, &oracle, &notes, |rhs| cor531_count(&g, &partition, &n, rhs))
        }
        FormulaId::Thm54 => {
            let (g, parts) = gen_edge_clique_partition(rng.gen(), bounds);
            let oracle = count_spanning_trees(&g);
            let notes: Vec<String> = parts
                .iter()
                .enumerate()
                .map(|(i, p)| note_edges(&g, &format!("part {}", i + 1), p))
                .collect();
            check_routes(&g, &oracle, &notes, |rhs| thm54_count(&g, &parts, rhs))
        }
        FormulaId::Mid => {
            let h = gen_connected_multigraph(
                rng.gen(),
                bounds.max_vertices.clamp(1, 5),
                bounds.max_edges.min(8),
                bounds.max_multiplicity,
            );
            let oracle = count_spanning_trees(&middle_graph(&h).graph);
            check_routes(&h, &oracle, &[], |rhs| middle_graph_count(&h, rhs))
        }
        FormulaId::Lsub => {
            let h = gen_line_graph_source(rng.gen(), bounds);
            let oracle = count_spanning_trees(&line_graph(&h).graph);
            check_routes(&h, &oracle, &[], |rhs| {
                line_graph_via_subdivision(&h, LsubMode::Corrected, rhs)
            })
        }
        FormulaId::Thm510 => {
            let (g, cut) = gen_clique_cut_instance(rng.gen(), bounds);
            let notes = [
                note_vertices(&g, "separator", &cut.u),
                note_vertices(&g, "side 1", &cut.s1),
                note_vertices(&g, "side 2", &cut.s2),
                note_edges(&g, "forced", &cut.w),
            ];
            match thm510_factorize(&g, &cut) {
                Ok(res) => {
                    let expected = TreeSum::from_integer(res.direct.clone());
                    if res.product == expected {
                        Ok(None)
                    } else {
                        Ok(Some(dump(
                            &g,
                            format!(
                                "factorized value {} against direct count {}",
                                res.product, res.direct
                            ),
                            &notes,
                        )))
                    }
                }
                Err(e) => Ok(Some(dump(&g, format!("factorization failed: {e}"), &notes))),
            }
        }
        FormulaId::Cor51 => {
            let (g, u, w) = gen_pendant_clique_instance(rng.gen(), bounds);
            let oracle = count_spanning_trees(&g);
            let notes = [
                note_vertices(&g, "clique", &u),
                format!("pendant: {}", g.name(w).unwrap_or("?")),
            ];
            match cor51_pendant_clique(&g, &u, w) {
                Ok(res) if res.value == TreeSum::from_integer(oracle.clone()) => Ok(None),
                Ok(res) => Ok(Some(dump(
                    &g,
                    format!("formula gives {}, oracle gives {oracle}", res.value),
                    &notes,
                ))),
                Err(e) => Ok(Some(dump(&g, format!("formula failed: {e}"), &notes))),
            }
        }
    }
}

fn partition_notes(
    g: &MultiGraph,
    partition: &CliquePartition,
    n: &EdgeSet,
    r: Option<&EdgeSet>,
) -> Vec<String> {
    let mut notes = vec![note_vertices(g, "free part", &partition.v0)];
    for (i, c) in partition.cliques.iter().enumerate() {
        notes.push(note_vertices(g, &format!("clique {}", i + 1), c));
    }
    notes.push(note_edges(g, "extra forced", n));
    if let Some(r) = r {
        notes.push(note_edges(g, "forced cross", r));
    }
    notes
}

const MAX_REGENERATIONS: usize = 8;

/// Pit one formula against the oracle on `trials` generated instances.
pub fn run_campaign(id: FormulaId, spec: &InstanceSpec, trials: usize) -> VerificationReport {
    let start = Instant::now();
    let mut master = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut failures = Vec::new();
    for trial in 0..trials {
        let mut attempts = 0;
        loop {
            attempts += 1;
            let s: u64 = master.gen();
            match run_one(id, s, &spec.bounds) {
                Ok(None) => break,
                Ok(Some(detail)) => {
                    failures.push(CampaignFailure {
                        trial,
                        seed: s,
                        detail,
                    });
                    break;
                }
                Err(Retry) if attempts < MAX_REGENERATIONS => continue,
                Err(Retry) => {
                    failures.push(CampaignFailure {
                        trial,
                        seed: s,
                        detail: format!(
                            "instance exceeded the enumeration cap {attempts} times in a row"
                        ),
                    });
                    break;
                }
            }
        }
    }
    VerificationReport {
        formula: id.to_string(),
        trials,
        seed: spec.seed,
        failures,
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}

/// The documented erratum, recorded as campaign data: the bare
/// subdivision sum does not count the line graph's trees.
pub fn lsub_printed_erratum() -> VerificationReport {
    let start = Instant::now();
    let h = MultiGraph::complete(3);
    let printed = line_graph_via_subdivision(&h, LsubMode::Printed, RhsEval::MatrixTree)
        .expect("triangle satisfies the hypotheses")
        .value;
    let oracle = count_spanning_trees(&line_graph(&h).graph);
    let mut failures = Vec::new();
    if printed != TreeSum::from_integer(oracle.clone()) {
        failures.push(CampaignFailure {
            trial: 0,
            seed: 0,
            detail: dump(
                &h,
                format!("printed reading gives {printed}, oracle gives {oracle}"),
                &[],
            ),
        });
    }
    VerificationReport {
        formula: "lsub (printed reading)".into(),
        trials: 1,
        seed: 0,
        failures,
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::HypothesisReport;

    #[test]
    fn connected_generator_is_deterministic_and_in_bounds() {
        for seed in 0..20 {
            let a = gen_connected_multigraph(seed, 8, 14, 3);
            let b = gen_connected_multigraph(seed, 8, 14, 3);
            assert_eq!(a, b);
            assert!(a.vertex_count() <= 8);
            assert!(a.edge_count() <= 14);
            assert!(a.vertex_count() == 1 || a.is_connected());
            assert!(a.is_connected() || a.vertex_count() == 1);
        }
    }

    #[test]
    fn singleton_and_simple_bounds() {
        assert_eq!(gen_connected_multigraph(5, 1, 10, 3).vertex_count(), 1);
        for seed in 0..20 {
            let g = gen_connected_multigraph(seed, 6, 12, 1);
            for e in g.edges() {
                assert_eq!(g.multiplicity(e.a, e.b), 1, "seed {seed} not simple");
            }
        }
    }

    #[test]
    fn clique_partition_instances_pass_their_checks() {
        let bounds = GenBounds::default();
        for seed in 0..30 {
            let (g, partition, n, r) = gen_clique_partition_instance(seed, &bounds);
            let mut report = HypothesisReport::new();
            partition.check_standing(&g, &mut report);
            assert!(report.ok(), "seed {seed}: {report}");
            assert!(g.is_forest(&n), "seed {seed}: N not a forest");
            assert!(
                n.iter().all(|&e| {
                    let rec = g.edge(e).unwrap();
                    partition.v0.contains(&rec.a) && partition.v0.contains(&rec.b)
                }),
                "seed {seed}: N leaks outside the free part"
            );
            assert!(r.is_subset(&partition.m(&g)), "seed {seed}: R outside M");
        }
    }

    #[test]
    fn parallel_class_instances_actually_have_parallel_classes() {
        let bounds = GenBounds::default();
        for seed in 0..20 {
            let (g, partition, _, _) = gen_parallel_class_instance(seed, &bounds);
            let (bullet, _) = crate::construct::bullet_contract(&g, &partition.u()).unwrap();
            let has_parallel = bullet
                .edges()
                .iter()
                .any(|e| bullet.multiplicity(e.a, e.b) >= 2);
            assert!(has_parallel, "seed {seed}: no parallel class to reduce");
        }
    }

    #[test]
    fn clique_cut_instances_pass_their_checks() {
        let bounds = GenBounds::default();
        for seed in 0..30 {
            let (g, cut) = gen_clique_cut_instance(seed, &bounds);
            let mut report = HypothesisReport::new();
            cut.check(&g, &mut report);
            assert!(report.ok(), "seed {seed}: {report}");
            assert!(g.is_forest(&cut.w));
        }
    }

    #[test]
    fn edge_partition_instances_partition_the_edges() {
        let bounds = GenBounds::default();
        for seed in 0..30 {
            let (g, parts) = gen_edge_clique_partition(seed, &bounds);
            assert!(g.is_connected(), "seed {seed}");
            let mut seen = EdgeSet::new();
            for p in &parts {
                for &e in p {
                    assert!(seen.insert(e), "seed {seed}: edge in two parts");
                }
                let sub = g.edge_induced_subgraph(p).unwrap();
                assert!(sub.is_clique(&sub.vertex_set()), "seed {seed}: part not a clique");
            }
            assert_eq!(seen, g.edge_ids(), "seed {seed}: parts miss edges");
        }
    }

    #[test]
    fn regular_generator_yields_connected_regular_graphs() {
        let bounds = GenBounds::default();
        for seed in 0..30 {
            let g = gen_regular_multigraph(seed, &bounds);
            assert!(g.is_connected(), "seed {seed}");
            let d0 = g.degree(g.vertices()[0]);
            for &v in g.vertices() {
                assert_eq!(g.degree(v), d0, "seed {seed} not regular");
            }
        }
    }

    #[test]
    fn pendant_instances_satisfy_the_peel_hypotheses() {
        let bounds = GenBounds::default();
        for seed in 0..30 {
            let (g, u, w) = gen_pendant_clique_instance(seed, &bounds);
            assert!(
                cor51_pendant_clique(&g, &u, w).is_ok(),
                "seed {seed} violates the hypotheses"
            );
        }
    }

    #[test]
    fn outside_forest_instances_are_forests_outside() {
        let bounds = GenBounds::default();
        for seed in 0..30 {
            let (g, u) = gen_outside_forest_instance(seed, &bounds);
            let inside = g.induced_subgraph(&u).unwrap().edge_ids();
            let w: EdgeSet = g.edge_ids().difference(&inside).copied().collect();
            assert!(g.is_forest(&w), "seed {seed}");
            assert!(g.is_connected(), "seed {seed}");
        }
    }

    #[test]
    fn forest_helper_returns_forests() {
        let g = gen_connected_multigraph(3, 8, 14, 3);
        let f = random_forest_edges(&g, 11);
        assert!(g.is_forest(&f));
        assert_eq!(f, random_forest_edges(&g, 11));
    }

    #[test]
    fn small_campaigns_pass_for_every_formula() {
        for id in FormulaId::ALL {
            let spec = InstanceSpec::for_formula(id, 0xC0FFEE);
            let report = run_campaign(id, &spec, 6);
            assert!(
                report.passed(),
                "{id}: {}",
                report
                    .failures
                    .first()
                    .map(|f| f.detail.as_str())
                    .unwrap_or("")
            );
        }
    }

    #[test]
    fn campaign_reports_reproduce() {
        let spec = InstanceSpec::for_formula(FormulaId::Thm42, 99);
        let a = run_campaign(FormulaId::Thm42, &spec, 4).without_timing();
        let b = run_campaign(FormulaId::Thm42, &spec, 4).without_timing();
        assert_eq!(a, b);
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn printed_reading_demo_records_the_known_failure() {
        let report = lsub_printed_erratum();
        assert_eq!(report.failures.len(), 1);
        assert!(report.failures[0].detail.contains("192"));
        assert!(report.failures[0].detail.contains('3'));
    }
}
