//! Explicit spanning tree enumeration by deletion and contraction.
//!
//! Independent of the determinant machinery, so the two can check each
//! other. Branching is on the lowest surviving edge id: include it
//! (contract) first, then exclude it (delete) when the rest stays
//! connected. This order makes the output list reproducible.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::graph::{EdgeId, EdgeSet, MultiGraph, VertexId};
use crate::kirchhoff::{EdgeWeighting, TreeSum};

/// Default bound on the number of trees emitted before giving up.
pub const DEFAULT_TREE_CAP: usize = 1_000_000;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum EnumError {
    #[error("spanning tree cap of {0} exceeded")]
    CapExceeded(usize),
}

/// All spanning trees, each as a set of original edge ids. Disconnected
/// input yields an empty list.
pub fn enumerate_spanning_trees(g: &MultiGraph, cap: usize) -> Result<Vec<EdgeSet>, EnumError> {
    if g.vertex_count() == 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    recurse(g, &mut chosen, &mut out, cap)?;
    Ok(out)
}

fn recurse(
    g: &MultiGraph,
    chosen: &mut Vec<EdgeId>,
    out: &mut Vec<EdgeSet>,
    cap: usize,
) -> Result<(), EnumError> {
    if !g.is_connected() {
        return Ok(());
    }
    if g.vertex_count() == 1 {
        if out.len() >= cap {
            return Err(EnumError::CapExceeded(cap));
        }
        out.push(chosen.iter().copied().collect());
        return Ok(());
    }
    let e = g.edges()[0].id;
    let singleton: EdgeSet = [e].into_iter().collect();

    let (contracted, _) = g.contract_edges(&singleton).expect("edge exists");
    chosen.push(e);
    recurse(&contracted, chosen, out, cap)?;
    chosen.pop();

    let deleted = g.delete_edges(&singleton).expect("edge exists");
    // a bridge is forced into every tree; skip the dead branch
    if deleted.is_connected() {
        recurse(&deleted, chosen, out, cap)?;
    }
    Ok(())
}

/// Spanning trees containing every edge of `n`. Cyclic `n` yields none.
pub fn enumerate_constrained(
    g: &MultiGraph,
    n: &EdgeSet,
    cap: usize,
) -> Result<Vec<EdgeSet>, EnumError> {
    if n.is_empty() {
        return enumerate_spanning_trees(g, cap);
    }
    if !g.is_forest(n) {
        return Ok(Vec::new());
    }
    let (h, _) = g.contract_edges(n).expect("constraint edges exist");
    let partial = enumerate_spanning_trees(&h, cap)?;
    Ok(partial
        .into_iter()
        .map(|mut t| {
            t.extend(n.iter().copied());
            t
        })
        .collect())
}

/// Sum over the enumerated trees of the product of edge weights, as a
/// reference for the determinant-based fast path.
pub fn tree_sum_by_enumeration(
    g: &MultiGraph,
    w: &EdgeWeighting,
    n: &EdgeSet,
    cap: usize,
) -> Result<TreeSum, EnumError> {
    if g.vertex_count() == 0 {
        return Ok(TreeSum::zero());
    }
    let mut total = TreeSum::zero();
    for tree in enumerate_constrained(g, n, cap)? {
        let mut prod = TreeSum::one();
        for &e in &tree {
            prod *= w.get(e);
        }
        total += prod;
    }
    Ok(total)
}

/// Number of edges of `tree` incident to `v`, in `g`'s incidence.
pub fn tree_incidence(g: &MultiGraph, tree: &EdgeSet, v: VertexId) -> usize {
    tree.iter()
        .filter(|&&e| g.edge(e).map(|r| r.touches(v)).unwrap_or(false))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kirchhoff::count_spanning_trees;
    use num_bigint::BigInt;

    #[test]
    fn k4_has_sixteen_distinct_trees() {
        let g = MultiGraph::complete(4);
        let trees = enumerate_spanning_trees(&g, DEFAULT_TREE_CAP).unwrap();
        assert_eq!(trees.len(), 16);
        let unique: std::collections::BTreeSet<_> = trees.iter().cloned().collect();
        assert_eq!(unique.len(), 16);
        for t in &trees {
            assert_eq!(t.len(), 3);
            assert!(g.is_forest(t));
        }
        assert_eq!(BigInt::from(trees.len()), count_spanning_trees(&g));
    }

    #[test]
    fn parallel_edges_give_distinct_trees() {
        let g = MultiGraph::build(&["a", "b"], &[("a", "b"), ("a", "b")]).unwrap();
        let trees = enumerate_spanning_trees(&g, DEFAULT_TREE_CAP).unwrap();
        assert_eq!(trees.len(), 2);
        assert_ne!(trees[0], trees[1]);
    }

    #[test]
    fn disconnected_gives_nothing() {
        let g = MultiGraph::build(&["a", "b", "c"], &[("a", "b")]).unwrap();
        assert!(enumerate_spanning_trees(&g, DEFAULT_TREE_CAP)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn constrained_enumeration_k4() {
        let g = MultiGraph::complete(4);
        let one: EdgeSet = [g.edge_by_label("e1").unwrap()].into_iter().collect();
        let trees = enumerate_constrained(&g, &one, DEFAULT_TREE_CAP).unwrap();
        assert_eq!(trees.len(), 8);
        for t in &trees {
            assert!(t.is_superset(&one));
        }
        let tri: EdgeSet = ["e1", "e2", "e4"]
            .iter()
            .map(|l| g.edge_by_label(l).unwrap())
            .collect();
        assert!(enumerate_constrained(&g, &tri, DEFAULT_TREE_CAP)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn cap_is_enforced() {
        let g = MultiGraph::complete(5); // 125 trees
        assert_eq!(
            enumerate_spanning_trees(&g, 100),
            Err(EnumError::CapExceeded(100))
        );
        assert_eq!(enumerate_spanning_trees(&g, 125).unwrap().len(), 125);
    }

    #[test]
    fn deterministic_order() {
        let g = MultiGraph::complete(4);
        let a = enumerate_spanning_trees(&g, DEFAULT_TREE_CAP).unwrap();
        let b = enumerate_spanning_trees(&g, DEFAULT_TREE_CAP).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn incidence_counts() {
        let g = MultiGraph::complete(4);
        let star: EdgeSet = ["e1", "e2", "e3"]
            .iter()
            .map(|l| g.edge_by_label(l).unwrap())
            .collect();
        let v1 = g.vertex_by_name("v1").unwrap();
        let v2 = g.vertex_by_name("v2").unwrap();
        assert_eq!(tree_incidence(&g, &star, v1), 3);
        assert_eq!(tree_incidence(&g, &star, v2), 1);
    }

    #[test]
    fn single_vertex_has_the_empty_tree() {
        let g = MultiGraph::build(&["a"], &[]).unwrap();
        let trees = enumerate_spanning_trees(&g, DEFAULT_TREE_CAP).unwrap();
        assert_eq!(trees, vec![EdgeSet::new()]);
    }
}
