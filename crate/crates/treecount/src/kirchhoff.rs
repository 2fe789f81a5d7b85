//! Spanning tree counts through Laplacian determinants, in exact arithmetic.
//!
//! The count is the determinant of the Laplacian with the row and column of
//! the lowest-id vertex removed; parallel edges enter through multiplicity.
//! The weighted variant sums, over all spanning trees, the product of edge
//! weights. No floating point anywhere.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::graph::{EdgeId, EdgeSet, MultiGraph};

/// Exact nonnegative integer count.
pub type Count = BigInt;

/// Exact rational tree sum.
pub type TreeSum = BigRational;

/// Positive rational weights on edges, defaulting to 1.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EdgeWeighting {
    weights: BTreeMap<EdgeId, TreeSum>,
}

impl EdgeWeighting {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, e: EdgeId, w: TreeSum) {
        debug_assert!(w.is_positive(), "edge weights are positive");
        self.weights.insert(e, w);
    }

    pub fn get(&self, e: EdgeId) -> TreeSum {
        self.weights
            .get(&e)
            .cloned()
            .unwrap_or_else(|| TreeSum::one())
    }

    pub fn explicit(&self) -> &BTreeMap<EdgeId, TreeSum> {
        &self.weights
    }

    /// Multiply every weight (default 1 included) by `c` is not expressible
    /// pointwise; this scales only the explicit entries and is used by tests
    /// together with a full assignment.
    pub fn assign_all(g: &MultiGraph, c: &TreeSum) -> Self {
        let mut w = Self::new();
        for e in g.edges() {
            w.set(e.id, c.clone());
        }
        w
    }
}

/// Number of spanning trees. Zero for disconnected graphs and for the
/// empty graph; one for a single vertex.
pub fn count_spanning_trees(g: &MultiGraph) -> Count {
    match g.vertex_count() {
        0 => return Count::zero(),
        1 => return Count::one(),
        _ => {}
    }
    let m = laplacian_minor(g);
    det_bareiss(m)
}

/// Number of spanning trees containing every edge of `m`: contract `m` and
/// count, or zero when `m` has a cycle.
pub fn count_constrained(g: &MultiGraph, m: &EdgeSet) -> Count {
    if m.is_empty() {
        return count_spanning_trees(g);
    }
    if !g.is_forest(m) {
        return Count::zero();
    }
    let (h, _) = g.contract_edges(m).expect("constraint edges exist");
    count_spanning_trees(&h)
}

/// Sum over spanning trees of the product of edge weights.
pub fn weighted_tree_sum(g: &MultiGraph, w: &EdgeWeighting) -> TreeSum {
    match g.vertex_count() {
        0 => return TreeSum::zero(),
        1 => return TreeSum::one(),
        _ => {}
    }
    let m = weighted_laplacian_minor(g, w);
    det_rational(m)
}

/// Sum over spanning trees containing every edge of `n` of the product of
/// edge weights. The factor for `n` itself is included.
pub fn weighted_tree_sum_constrained(g: &MultiGraph, w: &EdgeWeighting, n: &EdgeSet) -> TreeSum {
    if n.is_empty() {
        return weighted_tree_sum(g, w);
    }
    if !g.is_forest(n) {
        return TreeSum::zero();
    }
    let mut fixed = TreeSum::one();
    for &e in n {
        fixed *= w.get(e);
    }
    let (h, _) = g.contract_edges(n).expect("constraint edges exist");
    fixed * weighted_tree_sum(&h, w)
}

fn vertex_index(g: &MultiGraph) -> BTreeMap<crate::graph::VertexId, usize> {
    g.vertices()
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i))
        .collect()
}

/// Laplacian with the first row and column removed.
fn laplacian_minor(g: &MultiGraph) -> Vec<Vec<BigInt>> {
    let idx = vertex_index(g);
    let n = g.vertex_count();
    let mut l = vec![vec![BigInt::zero(); n]; n];
    for e in g.edges() {
        let (i, j) = (idx[&e.a], idx[&e.b]);
        l[i][i] += 1;
        l[j][j] += 1;
        l[i][j] -= 1;
        l[j][i] -= 1;
    }
    l.remove(0);
    for row in &mut l {
        row.remove(0);
    }
    l
}

fn weighted_laplacian_minor(g: &MultiGraph, w: &EdgeWeighting) -> Vec<Vec<BigRational>> {
    let idx = vertex_index(g);
    let n = g.vertex_count();
    let mut l = vec![vec![BigRational::zero(); n]; n];
    for e in g.edges() {
        let (i, j) = (idx[&e.a], idx[&e.b]);
        let c = w.get(e.id);
        l[i][i] += &c;
        l[j][j] += &c;
        l[i][j] -= &c;
        l[j][i] -= &c;
    }
    l.remove(0);
    for row in &mut l {
        row.remove(0);
    }
    l
}

/// Fraction-free Bareiss elimination. Every division is exact, so the whole
/// computation stays in integers.
fn det_bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1i32;
    let mut denom = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &denom;
            }
            m[i][k] = BigInt::zero();
        }
        denom = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Plain Gaussian elimination over the rationals.
fn det_rational(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    if n == 0 {
        return BigRational::one();
    }
    let mut det = BigRational::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    det = -det;
                }
                None => return BigRational::zero(),
            }
        }
        let pivot = m[k][k].clone();
        det *= &pivot;
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let factor = &m[i][k] / &pivot;
            for j in k..n {
                let sub = &factor * &m[k][j];
                m[i][j] -= sub;
            }
        }
    }
    det
}
