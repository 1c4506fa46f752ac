//! Graph families indexed by words.
//!
//! * the rooted multigraph `H_w`: two paths of lengths `m` and `m-1`,
//!   with vertex `i` joined to the root by `w_i - deg_path(i)` parallel edges;
//! * the simple graph `G_w`: the same idea with parallel root edges replaced
//!   by edges to an anchor star `a_1..a_q`, and every path doubled;
//! * padded versions of `G_w` with pendant vertices hanging off `a_1`.

use serde::{Deserialize, Serialize};

use crate::continuants::Word;
use crate::error::{Error, Result};
use crate::graph::{MultiGraph, VertexRole};
use crate::linalg::{tridiagonal_matrix, IntMatrix};

/// Validated parameters of the simple-graph family: `m >= 3`, `q >= 1` and a
/// word of length `m` over `{2, ..., q+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionParams {
    m: usize,
    q: u32,
    word: Word,
}

impl ConstructionParams {
    pub fn new(m: usize, q: u32, word: Word) -> Result<Self> {
        if m < 3 {
            return Err(Error::InvalidParams(format!("m = {m}, need m >= 3")));
        }
        if q < 1 {
            return Err(Error::InvalidParams("q = 0, need q >= 1".into()));
        }
        if word.len() != m {
            return Err(Error::InvalidParams(format!(
                "word has length {}, expected m = {m}",
                word.len()
            )));
        }
        let cap = u64::from(q) + 1;
        let xs = word.to_u64s().unwrap_or_default();
        if xs.len() != m || xs.iter().any(|&x| x > cap) {
            return Err(Error::InvalidParams(format!(
                "word {word} has an entry above q + 1 = {cap}"
            )));
        }
        Ok(ConstructionParams { m, q, word })
    }

    /// Infers `m` from the word length.
    pub fn for_word(q: u32, word: Word) -> Result<Self> {
        Self::new(word.len(), q, word)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    /// Vertex count of `G_w`: `4m + q - 1`.
    pub fn vertex_count(&self) -> usize {
        4 * self.m + self.q as usize - 1
    }
}

/// Degree of vertex `i` in the path `1 - 2 - ... - r`.
pub fn path_degree(i: usize, r: usize) -> Result<u64> {
    if r < 1 || i < 1 || i > r {
        return Err(Error::IndexOutOfRange { index: i, len: r });
    }
    Ok(u64::from(i > 1) + u64::from(i < r))
}

/// Root multiplicities `(h, h')` with `h_i = w_i - deg_{P_m}(i)` and
/// `h'_i = w_i - deg_{P_{m-1}}(i)`.
pub fn root_multiplicities(word: &Word) -> Result<(Vec<u64>, Vec<u64>)> {
    let m = word.len();
    if m < 3 {
        return Err(Error::InvalidParams(format!(
            "word length {m}, need m >= 3"
        )));
    }
    let xs = word
        .to_u64s()
        .ok_or_else(|| Error::InvalidParams(format!("word {word} has entries beyond 64 bits")))?;
    // Entries are >= 2 and path degrees <= 2, so nothing underflows.
    let h = (1..=m)
        .map(|i| Ok(xs[i - 1] - path_degree(i, m)?))
        .collect::<Result<_>>()?;
    let hp = (1..m)
        .map(|i| Ok(xs[i - 1] - path_degree(i, m - 1)?))
        .collect::<Result<_>>()?;
    Ok((h, hp))
}

/// The multigraph `H_w`, vertex order `rho, u_1..u_m, u'_1..u'_{m-1}`.
///
/// Entries are not capped: any word of length at least 3 is accepted.
pub fn build_multigraph(word: &Word) -> Result<MultiGraph> {
    let (h, hp) = root_multiplicities(word)?;
    let m = h.len();
    let mut vertices = vec![VertexRole::Root];
    vertices.extend((1..=m as u32).map(VertexRole::PathU));
    vertices.extend((1..m as u32).map(VertexRole::PathUPrime));
    let mut g = MultiGraph::new(vertices);
    let u = |i: usize| i;
    let up = |i: usize| m + i;
    for i in 1..m {
        g.add_edge(u(i), u(i + 1), 1)?;
    }
    for i in 1..m - 1 {
        g.add_edge(up(i), up(i + 1), 1)?;
    }
    for (i, &hi) in h.iter().enumerate() {
        g.add_edge(0, u(i + 1), hi)?;
    }
    for (i, &hi) in hp.iter().enumerate() {
        g.add_edge(0, up(i + 1), hi)?;
    }
    Ok(g)
}

/// Index layout of `G_w`.
struct SimpleLayout {
    m: usize,
}

impl SimpleLayout {
    const ROOT: usize = 0;
    fn u(&self, i: usize) -> usize {
        i
    }
    fn v(&self, i: usize) -> usize {
        self.m + i
    }
    fn up(&self, i: usize) -> usize {
        2 * self.m + i
    }
    fn vp(&self, i: usize) -> usize {
        3 * self.m - 1 + i
    }
    fn anchor(&self, t: usize) -> usize {
        4 * self.m - 2 + t
    }
}

/// The simple graph `G_w` on `4m + q - 1` vertices, ordered
/// `rho, u_1..u_m, v_1..v_m, u'_1..u'_{m-1}, v'_1..v'_{m-1}, a_1..a_q`.
pub fn build_simple_graph(params: &ConstructionParams) -> Result<MultiGraph> {
    let (m, q) = (params.m, params.q as usize);
    let (h, hp) = root_multiplicities(&params.word)?;
    let at = SimpleLayout { m };

    let mut vertices = vec![VertexRole::Root];
    vertices.extend((1..=m as u32).map(VertexRole::PathU));
    vertices.extend((1..=m as u32).map(VertexRole::PathV));
    vertices.extend((1..m as u32).map(VertexRole::PathUPrime));
    vertices.extend((1..m as u32).map(VertexRole::PathVPrime));
    vertices.extend((1..=q as u32).map(VertexRole::Anchor));
    let mut g = MultiGraph::new(vertices);

    for t in 1..=q {
        g.add_edge(SimpleLayout::ROOT, at.anchor(t), 1)?;
    }
    for i in 1..m {
        g.add_edge(at.u(i), at.u(i + 1), 1)?;
        g.add_edge(at.v(i), at.v(i + 1), 1)?;
    }
    for i in 1..m - 1 {
        g.add_edge(at.up(i), at.up(i + 1), 1)?;
        g.add_edge(at.vp(i), at.vp(i + 1), 1)?;
    }
    for (i, &hi) in (1..=m).zip(&h) {
        for t in 1..=hi as usize {
            g.add_edge(at.u(i), at.anchor(t), 1)?;
            g.add_edge(at.v(i), at.anchor(t), 1)?;
        }
    }
    for (i, &hi) in (1..m).zip(&hp) {
        for t in 1..=hi as usize {
            g.add_edge(at.up(i), at.anchor(t), 1)?;
            g.add_edge(at.vp(i), at.anchor(t), 1)?;
        }
    }
    debug_assert_eq!(g.vertex_count(), params.vertex_count());
    Ok(g)
}

/// Adds pendant vertices `z_j` joined to `a_1` until the graph has `n`
/// vertices. Pendant edges are bridges, so the tree count is unchanged.
pub fn pad_graph(graph: &MultiGraph, n: usize) -> Result<MultiGraph> {
    let current = graph.vertex_count();
    if n < current {
        return Err(Error::InvalidArgument(format!(
            "cannot pad a {current}-vertex graph down to {n} vertices"
        )));
    }
    let anchor = graph
        .position(VertexRole::Anchor(1))
        .ok_or_else(|| Error::InvalidArgument("graph has no anchor a:1 to pad at".into()))?;
    let existing = graph
        .vertices()
        .iter()
        .filter(|r| matches!(r, VertexRole::Pad(_)))
        .count();
    let mut g = graph.clone();
    for j in 1..=n - current {
        let z = g.add_vertex(VertexRole::Pad((existing + j) as u32));
        g.add_edge(anchor, z, 1)?;
    }
    Ok(g)
}

/// Permutation of `G_w` (or its padding) exchanging each `u` vertex with its
/// `v` twin and each `u'` with its `v'` twin, fixing everything else.
pub fn twin_swap_permutation(graph: &MultiGraph) -> Result<Vec<usize>> {
    graph
        .vertices()
        .iter()
        .map(|&r| {
            let image = match r {
                VertexRole::PathU(i) => VertexRole::PathV(i),
                VertexRole::PathV(i) => VertexRole::PathU(i),
                VertexRole::PathUPrime(i) => VertexRole::PathVPrime(i),
                VertexRole::PathVPrime(i) => VertexRole::PathUPrime(i),
                other => other,
            };
            graph
                .position(image)
                .ok_or_else(|| Error::InvalidArgument(format!("vertex {r} has no twin {image}")))
        })
        .collect()
}

/// The block decomposition of the root cofactor `M` of `G_w`:
///
/// ```text
///     [ A  0  0  0  P ]
///     [ 0  A  0  0  P ]
/// M = [ 0  0  B  0  Q ]        R = [ B    0    Q ]
///     [ 0  0  0  B  Q ]            [ 0    A    P ]
///     [ P' P' Q' Q' F ]            [ 2Q'  2P'  F ]
/// ```
///
/// with `A = T_m(w)`, `B = T_{m-1}(w_1..w_{m-1})` and `det M = det A det B det R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CofactorBlocks {
    pub a: IntMatrix,
    pub b: IntMatrix,
    pub p: IntMatrix,
    pub q: IntMatrix,
    pub f: IntMatrix,
    pub r: IntMatrix,
    /// The cofactor itself, rows in the order `u, v, u', v', anchors`.
    pub cofactor: IntMatrix,
}

/// Builds `G_w`, deletes the root and splits the cofactor into blocks,
/// checking the zero pattern and that both twin copies agree.
pub fn extract_blocks(params: &ConstructionParams) -> Result<CofactorBlocks> {
    let g = build_simple_graph(params)?;
    blocks_of(&g, params)
}

pub(crate) fn blocks_of(g: &MultiGraph, params: &ConstructionParams) -> Result<CofactorBlocks> {
    let (m, q) = (params.m, params.q as usize);
    let root = g
        .position(VertexRole::Root)
        .ok_or_else(|| Error::Inconsistent("graph has no root".into()))?;
    let raw = g.cofactor(root)?;

    // Reorder to u, v, u', v', anchors. This is the identity for the
    // canonical vertex order, but keeps the partition honest if not.
    let order: Vec<VertexRole> = (1..=m as u32)
        .map(VertexRole::PathU)
        .chain((1..=m as u32).map(VertexRole::PathV))
        .chain((1..m as u32).map(VertexRole::PathUPrime))
        .chain((1..m as u32).map(VertexRole::PathVPrime))
        .chain((1..=q as u32).map(VertexRole::Anchor))
        .collect();
    if order.len() != raw.rows() {
        return Err(Error::Inconsistent(format!(
            "cofactor has {} rows, expected {}",
            raw.rows(),
            order.len()
        )));
    }
    let perm = order
        .iter()
        .map(|&r| {
            let pos = g
                .position(r)
                .ok_or_else(|| Error::Inconsistent(format!("missing {r}")))?;
            Ok(if pos > root { pos - 1 } else { pos })
        })
        .collect::<Result<Vec<_>>>()?;
    let cofactor = raw.permute_symmetric(&perm)?;

    let (s_u, s_v, s_up, s_vp) = (0..m, m..2 * m, 2 * m..3 * m - 1, 3 * m - 1..4 * m - 2);
    let s_a = 4 * m - 2..4 * m - 2 + q;
    let block = |r: &std::ops::Range<usize>, c: &std::ops::Range<usize>| {
        cofactor.submatrix(r.clone(), c.clone())
    };
    let paths = [&s_u, &s_v, &s_up, &s_vp];
    for (i, ri) in paths.iter().enumerate() {
        for (j, rj) in paths.iter().enumerate() {
            if i != j && !block(ri, rj).is_zero() {
                return Err(Error::Inconsistent(format!(
                    "path blocks {i} and {j} are coupled"
                )));
            }
        }
    }

    let a = block(&s_u, &s_u);
    let b = block(&s_up, &s_up);
    let p = block(&s_u, &s_a);
    let qb = block(&s_up, &s_a);
    let f = block(&s_a, &s_a);
    let expected_a = tridiagonal_matrix(&params.word);
    let expected_b = tridiagonal_matrix(&params.word.prefix(m - 1).expect("m >= 3"));
    let checks = [
        (a == expected_a, "A is not T_m(w)"),
        (block(&s_v, &s_v) == a, "the two A copies differ"),
        (b == expected_b, "B is not T_{m-1}(w)"),
        (block(&s_vp, &s_vp) == b, "the two B copies differ"),
        (block(&s_v, &s_a) == p, "the two P copies differ"),
        (block(&s_vp, &s_a) == qb, "the two Q copies differ"),
        (
            block(&s_a, &s_u) == p.transpose(),
            "anchor rows do not mirror P",
        ),
        (
            block(&s_a, &s_v) == p.transpose(),
            "anchor rows do not mirror P",
        ),
        (
            block(&s_a, &s_up) == qb.transpose(),
            "anchor rows do not mirror Q",
        ),
        (
            block(&s_a, &s_vp) == qb.transpose(),
            "anchor rows do not mirror Q",
        ),
    ];
    if let Some((_, msg)) = checks.iter().find(|(ok, _)| !ok) {
        return Err(Error::Inconsistent((*msg).to_string()));
    }

    let qt2 = qb.transpose().scaled(2);
    let pt2 = p.transpose().scaled(2);
    let z_ba = IntMatrix::zeros(m - 1, m);
    let z_ab = IntMatrix::zeros(m, m - 1);
    let r = IntMatrix::from_blocks(&[
        vec![&b, &z_ba, &qb],
        vec![&z_ab, &a, &p],
        vec![&qt2, &pt2, &f],
    ])?;
    Ok(CofactorBlocks {
        a,
        b,
        p,
        q: qb,
        f,
        r,
        cofactor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn w(xs: &[u64]) -> Word {
        Word::from_u64s(xs).unwrap()
    }

    fn params(q: u32, xs: &[u64]) -> ConstructionParams {
        ConstructionParams::for_word(q, w(xs)).unwrap()
    }

    #[test]
    fn path_degree_examples() {
        assert_eq!(path_degree(1, 3).unwrap(), 1);
        assert_eq!(path_degree(2, 3).unwrap(), 2);
        assert_eq!(path_degree(1, 1).unwrap(), 0);
        assert!(path_degree(0, 3).is_err());
        assert!(path_degree(4, 3).is_err());
    }

    #[test]
    fn multigraph_root_multiplicities() {
        assert_eq!(
            root_multiplicities(&w(&[2, 2, 2])).unwrap(),
            (vec![1, 0, 1], vec![1, 1])
        );
        assert_eq!(
            root_multiplicities(&w(&[2, 3, 2])).unwrap(),
            (vec![1, 1, 1], vec![1, 2])
        );
    }

    #[test]
    fn multigraph_shape() {
        let g = build_multigraph(&w(&[2, 2, 2])).unwrap();
        assert_eq!(g.vertex_count(), 6);
        assert!(g.is_connected().unwrap());
        // rho-u_2 has multiplicity 0 and is omitted
        assert_eq!(g.multiplicity(0, 2), 0);
        assert_eq!(g.multiplicity(0, 1), 1);
        let g = build_multigraph(&w(&[2, 3, 2])).unwrap();
        assert_eq!(g.multiplicity(0, 5), 2); // rho - u'_2
        assert!(!g.is_simple());
        // no cap on entries for the multigraph
        assert!(build_multigraph(&w(&[9, 17, 2, 40])).is_ok());
        assert!(build_multigraph(&w(&[2, 2])).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(ConstructionParams::for_word(1, w(&[2, 3, 2])).is_err());
        assert!(ConstructionParams::for_word(0, w(&[2, 2, 2])).is_err());
        assert!(ConstructionParams::for_word(1, w(&[2, 2])).is_err());
        assert!(ConstructionParams::new(4, 1, w(&[2, 2, 2])).is_err());
        assert!(ConstructionParams::for_word(2, w(&[2, 3, 2])).is_ok());
    }

    #[test]
    fn simple_graph_examples() {
        let g = build_simple_graph(&params(1, &[2, 2, 2])).unwrap();
        assert_eq!(g.vertex_count(), 12);
        assert!(g.is_simple() && g.is_connected().unwrap());

        let g = build_simple_graph(&params(2, &[2, 3, 2])).unwrap();
        assert_eq!(g.vertex_count(), 13);
        let a1 = g.position(VertexRole::Anchor(1)).unwrap();
        let a2 = g.position(VertexRole::Anchor(2)).unwrap();
        for role in [VertexRole::PathU(2), VertexRole::PathV(2)] {
            let x = g.position(role).unwrap();
            assert_eq!(g.multiplicity(x, a1), 1);
            assert_eq!(g.multiplicity(x, a2), 0);
        }
    }

    #[test]
    fn sweep_simple_connected_and_twin_symmetric() {
        for m in 3..=5usize {
            for q in 1..=4u32 {
                for word in crate::spectrum::enumerate_words(m, q).unwrap() {
                    let p = ConstructionParams::new(m, q, word).unwrap();
                    let g = build_simple_graph(&p).unwrap();
                    assert_eq!(g.vertex_count(), 4 * m + q as usize - 1);
                    assert!(g.is_simple());
                    assert!(g.is_connected().unwrap());
                    let swap = twin_swap_permutation(&g).unwrap();
                    assert!(g.is_automorphism(&swap));
                }
            }
        }
    }

    #[test]
    fn endpoint_multiplicities_positive() {
        for m in 3..=6usize {
            for word in crate::spectrum::enumerate_words(m, 3).unwrap() {
                let (h, hp) = root_multiplicities(&word).unwrap();
                assert!(h[0] >= 1 && h[m - 1] >= 1);
                assert!(hp[0] >= 1 && hp[m - 2] >= 1);
            }
        }
    }

    #[test]
    fn padding() {
        let g = build_simple_graph(&params(1, &[2, 2, 2])).unwrap();
        assert_eq!(pad_graph(&g, 12).unwrap(), g);
        let padded = pad_graph(&g, 15).unwrap();
        assert_eq!(padded.vertex_count(), 15);
        let a1 = padded.position(VertexRole::Anchor(1)).unwrap();
        for j in 1..=3 {
            let z = padded.position(VertexRole::Pad(j)).unwrap();
            assert_eq!(padded.degree(z), 1);
            assert_eq!(padded.multiplicity(z, a1), 1);
        }
        assert!(pad_graph(&g, 11).is_err());
        // padding twice keeps pad labels distinct
        let twice = pad_graph(&pad_graph(&g, 13).unwrap(), 14).unwrap();
        assert!(twice.position(VertexRole::Pad(2)).is_some());
        // graphs without anchors cannot be padded
        assert!(pad_graph(&build_multigraph(&w(&[2, 2, 2])).unwrap(), 8).is_err());
    }

    #[test]
    fn blocks_for_smallest_word() {
        let blocks = extract_blocks(&params(1, &[2, 2, 2])).unwrap();
        assert_eq!(blocks.a, tridiagonal_matrix(&w(&[2, 2, 2])));
        assert_eq!(blocks.b, tridiagonal_matrix(&w(&[2, 2])));
        let row_sums: Vec<BigInt> = (0..3).map(|i| blocks.p.row(i).iter().sum()).collect();
        assert_eq!(row_sums, vec![BigInt::from(-1), 0.into(), (-1).into()]);
        assert_eq!(blocks.r.rows(), 2 * 3 - 1 + 1);
    }

    #[test]
    fn factorization_holds_for_small_families() {
        for q in 1..=3u32 {
            for word in crate::spectrum::enumerate_words(3, q).unwrap() {
                let blocks = extract_blocks(&ConstructionParams::new(3, q, word).unwrap()).unwrap();
                let lhs = blocks.cofactor.det().unwrap();
                let rhs =
                    blocks.a.det().unwrap() * blocks.b.det().unwrap() * blocks.r.det().unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }
}
