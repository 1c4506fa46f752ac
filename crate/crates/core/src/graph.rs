//! Loopless multigraphs with labeled vertex roles.
//!
//! Vertex order is part of a graph's identity: it fixes the row order of
//! the Laplacian and of every cofactor taken from it.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

/// What a vertex stands for in one of the constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexRole {
    Root,
    Anchor(u32),
    PathU(u32),
    PathV(u32),
    PathUPrime(u32),
    PathVPrime(u32),
    Pad(u32),
    Plain(u64),
}

impl fmt::Display for VertexRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexRole::Root => f.write_str("rho"),
            VertexRole::Anchor(t) => write!(f, "a:{t}"),
            VertexRole::PathU(i) => write!(f, "u:{i}"),
            VertexRole::PathV(i) => write!(f, "v:{i}"),
            VertexRole::PathUPrime(i) => write!(f, "u':{i}"),
            VertexRole::PathVPrime(i) => write!(f, "v':{i}"),
            VertexRole::Pad(j) => write!(f, "z:{j}"),
            VertexRole::Plain(id) => write!(f, "plain:{id}"),
        }
    }
}

impl FromStr for VertexRole {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "rho" {
            return Ok(VertexRole::Root);
        }
        let bad = || Error::MalformedDocument(format!("unknown vertex role {s:?}"));
        let (tag, param) = s.split_once(':').ok_or_else(bad)?;
        // Role indices are 1-based; plain ids are free-form.
        let index = || -> Result<u32> {
            match param.parse::<u32>() {
                Ok(p) if p >= 1 => Ok(p),
                _ => Err(bad()),
            }
        };
        Ok(match tag {
            "a" => VertexRole::Anchor(index()?),
            "u" => VertexRole::PathU(index()?),
            "v" => VertexRole::PathV(index()?),
            "u'" => VertexRole::PathUPrime(index()?),
            "v'" => VertexRole::PathVPrime(index()?),
            "z" => VertexRole::Pad(index()?),
            "plain" => VertexRole::Plain(param.parse().map_err(|_| bad())?),
            _ => return Err(bad()),
        })
    }
}

/// A loopless multigraph. Edges are stored once, as `(u, v)` with `u < v`,
/// together with a positive multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiGraph {
    vertices: Vec<VertexRole>,
    edges: BTreeMap<(usize, usize), u64>,
}

impl MultiGraph {
    /// Graph with no edges.
    pub fn new(vertices: Vec<VertexRole>) -> Self {
        MultiGraph {
            vertices,
            edges: BTreeMap::new(),
        }
    }

    /// `n` vertices labeled `plain:0 .. plain:n-1` with the given edges.
    /// Repeated pairs accumulate multiplicity.
    pub fn plain(n: usize, edges: &[(usize, usize, u64)]) -> Result<Self> {
        let mut g = MultiGraph::new((0..n as u64).map(VertexRole::Plain).collect());
        for &(u, v, mult) in edges {
            g.add_edge(u, v, mult)?;
        }
        Ok(g)
    }

    /// Adds `mult` parallel copies of `{u, v}`. Zero multiplicity is a no-op.
    pub fn add_edge(&mut self, u: usize, v: usize, mult: u64) -> Result<()> {
        let n = self.vertices.len();
        if u >= n || v >= n {
            return Err(Error::InvalidGraph(format!(
                "edge {{{u},{v}}} references a vertex outside 0..{n}"
            )));
        }
        if u == v {
            return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
        }
        if mult > 0 {
            *self.edges.entry((u.min(v), u.max(v))).or_insert(0) += mult;
        }
        Ok(())
    }

    pub fn add_vertex(&mut self, role: VertexRole) -> usize {
        self.vertices.push(role);
        self.vertices.len() - 1
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[VertexRole] {
        &self.vertices
    }

    pub fn position(&self, role: VertexRole) -> Option<usize> {
        self.vertices.iter().position(|&r| r == role)
    }

    /// Distinct edges with their multiplicities, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.edges.iter().map(|(&(u, v), &m)| (u, v, m))
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> u64 {
        self.edges.get(&(u.min(v), u.max(v))).copied().unwrap_or(0)
    }

    /// Number of edges counted with multiplicity.
    pub fn total_multiplicity(&self) -> u64 {
        self.edges.values().sum()
    }

    pub fn degree(&self, v: usize) -> u64 {
        self.edges()
            .filter(|&(a, b, _)| a == v || b == v)
            .map(|(_, _, m)| m)
            .sum()
    }

    pub fn is_simple(&self) -> bool {
        self.edges.values().all(|&m| m == 1)
    }

    pub fn is_connected(&self) -> Result<bool> {
        let n = self.vertices.len();
        if n == 0 {
            return Err(Error::InvalidGraph(
                "connectivity of the empty graph".into(),
            ));
        }
        let mut adj = vec![Vec::new(); n];
        for (u, v, _) in self.edges() {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    reached += 1;
                    queue.push_back(y);
                }
            }
        }
        Ok(reached == n)
    }

    /// Degree matrix minus multiplicity-weighted adjacency.
    pub fn laplacian(&self) -> IntMatrix {
        let n = self.vertices.len();
        let mut l = IntMatrix::zeros(n, n);
        for (u, v, m) in self.edges() {
            let m = BigInt::from(m);
            l[(u, u)] += &m;
            l[(v, v)] += &m;
            l[(u, v)] -= &m;
            l[(v, u)] -= &m;
        }
        l
    }

    /// The Laplacian with row and column `vertex` removed.
    pub fn cofactor(&self, vertex: usize) -> Result<IntMatrix> {
        self.laplacian().delete_row_col(vertex)
    }

    /// Graph with every vertex relabeled by `f`; edges untouched.
    pub fn relabel(&self, mut f: impl FnMut(VertexRole) -> VertexRole) -> Self {
        MultiGraph {
            vertices: self.vertices.iter().map(|&r| f(r)).collect(),
            edges: self.edges.clone(),
        }
    }

    /// Whether mapping vertex `i` to `perm[i]` preserves every edge
    /// multiplicity.
    pub fn is_automorphism(&self, perm: &[usize]) -> bool {
        let n = self.vertices.len();
        let mut seen = vec![false; n];
        if perm.len() != n
            || !perm
                .iter()
                .all(|&p| p < n && !std::mem::replace(&mut seen[p], true))
        {
            return false;
        }
        self.edges()
            .all(|(u, v, m)| self.multiplicity(perm[u], perm[v]) == m)
    }

    /// Canonical JSON document.
    pub fn encode(&self) -> String {
        let doc = GraphDocument {
            vertices: self
                .vertices
                .iter()
                .enumerate()
                .map(|(id, r)| VertexRecord {
                    id,
                    role: r.to_string(),
                })
                .collect(),
            edges: self
                .edges()
                .map(|(u, v, mult)| EdgeRecord { u, v, mult })
                .collect(),
        };
        serde_json::to_string(&doc).expect("graph documents always serialize")
    }

    /// Parses and validates a graph document.
    ///
    /// Edge records may come in any order and with `u > v`, but each
    /// unordered pair may appear only once.
    pub fn decode(text: &str) -> Result<Self> {
        let doc: GraphDocument =
            serde_json::from_str(text).map_err(|e| Error::MalformedDocument(e.to_string()))?;
        let mut vertices = Vec::with_capacity(doc.vertices.len());
        for (i, rec) in doc.vertices.iter().enumerate() {
            if rec.id != i {
                return Err(Error::MalformedDocument(format!(
                    "vertex record {i} has id {}, ids must be listed in index order",
                    rec.id
                )));
            }
            vertices.push(rec.role.parse()?);
        }
        let mut g = MultiGraph::new(vertices);
        for e in &doc.edges {
            if e.mult == 0 {
                return Err(Error::InvalidGraph(format!(
                    "edge {{{},{}}} has multiplicity 0",
                    e.u, e.v
                )));
            }
            if g.multiplicity(e.u, e.v) > 0 {
                return Err(Error::MalformedDocument(format!(
                    "edge {{{},{}}} listed twice",
                    e.u, e.v
                )));
            }
            g.add_edge(e.u, e.v, e.mult)?;
        }
        Ok(g)
    }

    /// Graphviz rendering; multiplicities appear as edge labels.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n");
        for (i, r) in self.vertices.iter().enumerate() {
            out.push_str(&format!("  {i} [label=\"{r}\"];\n"));
        }
        for (u, v, m) in self.edges() {
            if m == 1 {
                out.push_str(&format!("  {u} -- {v};\n"));
            } else {
                out.push_str(&format!("  {u} -- {v} [label=\"{m}\"];\n"));
            }
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDocument {
    vertices: Vec<VertexRecord>,
    edges: Vec<EdgeRecord>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexRecord {
    id: usize,
    role: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeRecord {
    u: usize,
    v: usize,
    mult: u64,
}
