//! Graphs, the configuration model and degree-preserving switches.
//!
//! Vertices are dense `usize` indices `0..n`. A [`Multigraph`] is the raw
//! projection of a half-edge matching and may hold loops and parallel edges;
//! a [`Graph`] is always simple.

mod families;
pub(crate) mod io;
mod sample;

pub use families::{complete, cycle, disjoint_union, path, petersen};
pub use io::{read_edge_list, write_edge_list};
pub use sample::{sample_configuration, sample_matching, sample_simple_regular, HalfEdgeMatching};

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::rng::Rng;

/// Undirected edge `{u, v}`; stored with `u <= v` when normalized.
pub type Edge = (usize, usize);

fn normalize((u, v): Edge) -> Edge {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

/// A multigraph: loops and parallel edges allowed. A loop adds 2 to its
/// vertex's degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multigraph {
    n: usize,
    edges: Vec<Edge>,
    degree: Vec<usize>,
}

impl Multigraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut degree = vec![0; n];
        let mut out = Vec::new();
        for e in edges {
            let (u, v) = normalize(e);
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            degree[u] += 1;
            degree[v] += 1;
            out.push((u, v));
        }
        Ok(Multigraph { n, edges: out, degree })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges with multiplicity, each normalized to `u <= v`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.degree[v]
    }

    pub fn degree_sum(&self) -> usize {
        self.degree.iter().sum()
    }

    pub fn loop_count(&self) -> usize {
        self.edges.iter().filter(|(u, v)| u == v).count()
    }

    /// True iff there are no loops and no parallel edges.
    pub fn is_simple(&self) -> bool {
        if self.loop_count() > 0 {
            return false;
        }
        let mut sorted = self.edges.clone();
        sorted.sort_unstable();
        sorted.windows(2).all(|w| w[0] != w[1])
    }

    /// Number of edges with one end in `s` and the other in `t`, with
    /// multiplicity. Loops never count since `s` and `t` are disjoint.
    pub fn edges_between(&self, s: &[usize], t: &[usize]) -> Result<usize> {
        let side = membership(self.n, s, t)?;
        Ok(self
            .edges
            .iter()
            .filter(|&&(u, v)| {
                matches!(
                    (side[u], side[v]),
                    (Side::S, Side::T) | (Side::T, Side::S)
                )
            })
            .count())
    }

    /// Converts to a simple [`Graph`], failing on the first loop or repeated edge.
    pub fn into_graph(self) -> Result<Graph> {
        Graph::from_edges(self.n, self.edges)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    None,
    S,
    T,
}

fn membership(n: usize, s: &[usize], t: &[usize]) -> Result<Vec<Side>> {
    let mut side = vec![Side::None; n];
    for (set, label) in [(s, Side::S), (t, Side::T)] {
        for &v in set {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            match side[v] {
                Side::None => side[v] = label,
                Side::S if label == Side::T => return Err(Error::OverlappingSets(v)),
                _ => {
                    return Err(Error::InvalidParameters(format!(
                        "vertex {v} repeated in a vertex set"
                    )))
                }
            }
        }
    }
    Ok(side)
}

/// How the endpoints of two switched edges are re-paired.
///
/// For `e1 = {u, v}` and `e2 = {x, y}`, `Straight` produces `{u, x}, {v, y}`
/// and `Crossed` produces `{u, y}, {v, x}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pairing {
    Straight,
    Crossed,
}

/// A simple undirected graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    num_edges: usize,
    regular: Option<usize>,
}

impl Graph {
    /// Builds a simple graph, rejecting loops, repeated edges and out-of-range
    /// endpoints.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        let mut num_edges = 0;
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::InvalidParameters(format!("loop at vertex {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
            num_edges += 1;
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::InvalidParameters(format!(
                    "repeated edge {{{}, {}}}",
                    u.min(w[0]),
                    u.max(w[0])
                )));
            }
        }
        let regular = regular_degree(&adj);
        Ok(Graph {
            adj,
            num_edges,
            regular,
        })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// The common degree if every vertex has the same degree.
    pub fn regular_degree(&self) -> Option<usize> {
        self.regular
    }

    /// Degree sum; `n * d` for a d-regular graph.
    pub fn volume(&self) -> usize {
        2 * self.num_edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    /// Number of edges with one endpoint in `s` and the other in `t`.
    /// The two sets must be disjoint.
    pub fn edges_between(&self, s: &[usize], t: &[usize]) -> Result<usize> {
        let side = membership(self.n(), s, t)?;
        Ok(s
            .iter()
            .map(|&u| self.adj[u].iter().filter(|&&v| side[v] == Side::T).count())
            .sum())
    }

    /// Returns a copy with `e1 = {u, v}` and `e2 = {x, y}` replaced according
    /// to `pairing`. Degrees are unchanged.
    pub fn switch_edges(&self, e1: Edge, e2: Edge, pairing: Pairing) -> Result<Graph> {
        let mut g = self.clone();
        g.switch_in_place(e1, e2, pairing)?;
        Ok(g)
    }

    /// In-place version of [`Graph::switch_edges`]; leaves `self` untouched on error.
    pub fn switch_in_place(&mut self, e1: Edge, e2: Edge, pairing: Pairing) -> Result<()> {
        let (u, v) = e1;
        let (x, y) = match pairing {
            Pairing::Straight => e2,
            Pairing::Crossed => (e2.1, e2.0),
        };
        if !self.has_edge(u, v) || !self.has_edge(x, y) {
            return Err(Error::SwitchRejected("edge not present"));
        }
        if u == x || u == y || v == x || v == y {
            return Err(Error::SwitchRejected("endpoints not distinct"));
        }
        if self.has_edge(u, x) || self.has_edge(v, y) {
            return Err(Error::SwitchRejected("replacement edge already present"));
        }
        self.remove_arc(u, v);
        self.remove_arc(x, y);
        self.insert_arc(u, x);
        self.insert_arc(v, y);
        Ok(())
    }

    /// Attempts one switch on two uniformly random edges with a random
    /// pairing. Returns the removed and added edges when the switch applied.
    pub fn random_switch(&mut self, rng: &mut Rng) -> Option<([Edge; 2], [Edge; 2])> {
        if self.num_edges < 2 {
            return None;
        }
        let e1 = self.random_edge(rng);
        let e2 = self.random_edge(rng);
        let pairing = if rng.random_bool(0.5) {
            Pairing::Straight
        } else {
            Pairing::Crossed
        };
        let (x, y) = match pairing {
            Pairing::Straight => e2,
            Pairing::Crossed => (e2.1, e2.0),
        };
        self.switch_in_place(e1, e2, pairing).ok()?;
        Some((
            [normalize(e1), normalize(e2)],
            [normalize((e1.0, x)), normalize((e1.1, y))],
        ))
    }

    /// A uniformly random edge with a random orientation.
    fn random_edge(&self, rng: &mut Rng) -> Edge {
        // uniform over half-edges is uniform over oriented edges
        let mut target = rng.random_range(0..self.volume());
        for (u, list) in self.adj.iter().enumerate() {
            if target < list.len() {
                return (u, list[target]);
            }
            target -= list.len();
        }
        unreachable!("half-edge index beyond volume")
    }

    fn remove_arc(&mut self, u: usize, v: usize) {
        for (a, b) in [(u, v), (v, u)] {
            let pos = self.adj[a].binary_search(&b).expect("edge present");
            self.adj[a].remove(pos);
        }
    }

    fn insert_arc(&mut self, u: usize, v: usize) {
        for (a, b) in [(u, v), (v, u)] {
            let pos = self.adj[a].binary_search(&b).unwrap_err();
            self.adj[a].insert(pos, b);
        }
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n() {
            return Err(Error::SizeMismatch {
                expected: self.n(),
                found: perm.len(),
            });
        }
        Graph::from_edges(self.n(), self.edges().map(|(u, v)| (perm[u], perm[v])))
    }
}

fn regular_degree(adj: &[Vec<usize>]) -> Option<usize> {
    let first = adj.first()?.len();
    adj.iter().all(|l| l.len() == first).then_some(first)
}
