//! Spanning-tree counts: the Kirchhoff cofactor determinant, and a brute
//! force enumeration of edge subsets that serves as an independent check.
//!
//! Parallel edges are distinguishable, so an edge of multiplicity `h`
//! contributes `h` separate candidates to the enumeration.

use num_bigint::{BigUint, ToBigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::MultiGraph;

/// Default cap on the number of `(V-1)`-edge subsets the enumerator may face.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 5_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMethod {
    Kirchhoff,
    Enumeration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeCount {
    pub value: BigUint,
    pub method: CountMethod,
}

/// Spanning trees via the determinant of the cofactor at vertex 0.
/// Disconnected graphs give 0; a single vertex gives 1.
pub fn tau_kirchhoff(graph: &MultiGraph) -> Result<TreeCount> {
    tau_kirchhoff_at(graph, 0)
}

/// As [`tau_kirchhoff`], deleting `vertex` instead of vertex 0.
pub fn tau_kirchhoff_at(graph: &MultiGraph, vertex: usize) -> Result<TreeCount> {
    if graph.vertex_count() == 0 {
        return Err(Error::InvalidGraph(
            "the empty graph has no spanning trees".into(),
        ));
    }
    let det = graph.cofactor(vertex)?.det()?;
    let value = det
        .to_biguint()
        .ok_or_else(|| Error::Inconsistent(format!("negative Laplacian cofactor {det}")))?;
    Ok(TreeCount {
        value,
        method: CountMethod::Kirchhoff,
    })
}

/// `C(E, V-1)`: how many edge subsets [`tau_enumerate`] would face.
pub fn enumeration_subsets(graph: &MultiGraph) -> BigUint {
    let e = graph.total_multiplicity();
    let k = graph.vertex_count().saturating_sub(1) as u64;
    binomial(e, k)
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Counts spanning trees by examining `(V-1)`-subsets of the edge multiset.
///
/// Refuses with [`Error::BudgetExceeded`] when `C(E, V-1)` exceeds `budget`.
pub fn tau_enumerate(graph: &MultiGraph, budget: u64) -> Result<TreeCount> {
    let n = graph.vertex_count();
    if n == 0 {
        return Err(Error::InvalidGraph(
            "the empty graph has no spanning trees".into(),
        ));
    }
    let subsets = enumeration_subsets(graph);
    if subsets > budget.to_biguint().expect("u64 fits") {
        return Err(Error::BudgetExceeded(format!(
            "{subsets} edge subsets exceed the enumeration budget of {budget}"
        )));
    }
    let value = if n == 1 {
        BigUint::one()
    } else {
        BigUint::from(count_trees(graph))
    };
    Ok(TreeCount {
        value,
        method: CountMethod::Enumeration,
    })
}

fn count_trees(graph: &MultiGraph) -> u64 {
    let n = graph.vertex_count();
    let k = n - 1;
    let edges: Vec<(usize, usize)> = graph
        .edges()
        .flat_map(|(u, v, m)| std::iter::repeat_n((u, v), m as usize))
        .collect();
    if edges.len() < k {
        return 0;
    }
    // Split on the first chosen edge; each branch is independent.
    (0..=edges.len() - k)
        .into_par_iter()
        .map(|first| {
            let mut uf = RollbackUnionFind::new(n);
            let (u, v) = edges[first];
            uf.union(u, v);
            extend(&edges, first + 1, 1, k, &mut uf)
        })
        .sum()
}

/// Number of ways to add `k - chosen` edges from `edges[next..]` to the
/// forest in `uf` without closing a cycle.
fn extend(
    edges: &[(usize, usize)],
    next: usize,
    chosen: usize,
    k: usize,
    uf: &mut RollbackUnionFind,
) -> u64 {
    if chosen == k {
        return 1;
    }
    let mut total = 0;
    for i in next..=edges.len() - (k - chosen) {
        let (u, v) = edges[i];
        if uf.union(u, v) {
            total += extend(edges, i + 1, chosen + 1, k, uf);
            uf.undo();
        }
    }
    total
}

/// Union by size, no path compression, so unions can be undone in LIFO order.
struct RollbackUnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    history: Vec<usize>,
}

impl RollbackUnionFind {
    fn new(n: usize) -> Self {
        RollbackUnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
            history: Vec::new(),
        }
    }

    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    /// Returns false (and records nothing) if `u` and `v` are already joined.
    fn union(&mut self, u: usize, v: usize) -> bool {
        let (mut a, mut b) = (self.find(u), self.find(v));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        self.history.push(b);
        true
    }

    fn undo(&mut self) {
        let b = self.history.pop().expect("undo without union");
        let a = self.parent[b];
        self.size[a] -= self.size[b];
        self.parent[b] = b;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::build_multigraph;
    use crate::continuants::Word;

    fn tau_k(g: &MultiGraph) -> u64 {
        u64::try_from(&tau_kirchhoff(g).unwrap().value).unwrap()
    }

    fn tau_e(g: &MultiGraph) -> u64 {
        u64::try_from(&tau_enumerate(g, DEFAULT_ENUMERATION_BUDGET).unwrap().value).unwrap()
    }

    fn triangle() -> MultiGraph {
        MultiGraph::plain(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 1)]).unwrap()
    }

    #[test]
    fn kirchhoff_examples() {
        assert_eq!(tau_k(&triangle()), 3);
        let h = build_multigraph(&Word::from_u64s(&[2, 2, 2]).unwrap()).unwrap();
        assert_eq!(tau_k(&h), 12);
        assert_eq!(tau_k(&MultiGraph::plain(2, &[]).unwrap()), 0);
        assert_eq!(tau_k(&MultiGraph::plain(1, &[]).unwrap()), 1);
        assert!(tau_kirchhoff(&MultiGraph::plain(0, &[]).unwrap()).is_err());
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(tau_e(&triangle()), 3);
        assert_eq!(tau_e(&MultiGraph::plain(2, &[(0, 1, 3)]).unwrap()), 3);
        let h = build_multigraph(&Word::from_u64s(&[2, 3, 2]).unwrap()).unwrap();
        assert_eq!(tau_e(&h), 40);
        assert_eq!(tau_e(&MultiGraph::plain(3, &[(0, 1, 2)]).unwrap()), 0);
        assert_eq!(tau_e(&MultiGraph::plain(1, &[]).unwrap()), 1);
    }

    #[test]
    fn complete_graphs_match_cayley() {
        for n in 2..=7usize {
            let edges: Vec<_> = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j, 1)))
                .collect();
            let g = MultiGraph::plain(n, &edges).unwrap();
            let cayley = (n as u64).pow(n as u32 - 2);
            assert_eq!(tau_k(&g), cayley);
            assert_eq!(tau_e(&g), cayley);
        }
    }

    #[test]
    fn enumeration_refuses_over_budget() {
        let edges: Vec<_> = (0..10usize)
            .flat_map(|i| (i + 1..10).map(move |j| (i, j, 2)))
            .collect();
        let g = MultiGraph::plain(10, &edges).unwrap();
        assert!(matches!(
            tau_enumerate(&g, 1000),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10u32.into());
        assert_eq!(binomial(2, 5), 0u32.into());
        assert_eq!(binomial(15, 11), 1365u32.into());
    }
}
