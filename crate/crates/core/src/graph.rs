//! Finite simple undirected graphs on dense vertex ids `0..n`.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An unordered vertex pair stored with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
}

impl Edge {
    /// Canonical edge on `{a, b}`.
    ///
    /// Panics if `a == b`.
    pub fn new(a: usize, b: usize) -> Self {
        assert_ne!(a, b, "an edge needs two distinct endpoints");
        if a < b {
            Edge { u: a, v: b }
        } else {
            Edge { u: b, v: a }
        }
    }

    pub fn try_new(a: usize, b: usize) -> Result<Self> {
        if a == b {
            return Err(Error::Loop(a));
        }
        Ok(Edge::new(a, b))
    }

    pub fn contains(&self, x: usize) -> bool {
        self.u == x || self.v == x
    }

    /// The endpoint that is not `x`. `x` must be an endpoint.
    pub fn other(&self, x: usize) -> usize {
        debug_assert!(self.contains(x));
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.u, self.v)
    }
}

/// Immutable simple graph. Neighbour lists are kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from vertex pairs. Repeated pairs are merged; loops and
    /// out-of-range ids are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (a, b) in edges {
            for x in [a, b] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if a == b {
                return Err(Error::Loop(a));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { adj })
    }

    /// Graph whose edges are the set bits of `mask`, indexed in graph6 order
    /// `(0,1), (0,2), (1,2), (0,3), ...`.
    pub fn from_upper_triangle_mask(n: usize, mask: u64) -> Self {
        let mut edges = Vec::new();
        let mut bit = 0;
        for j in 1..n {
            for i in 0..j {
                if mask >> bit & 1 == 1 {
                    edges.push((i, j));
                }
                bit += 1;
            }
        }
        Graph::from_edges(n, edges).expect("pairs are in range and loop-free")
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|j| (0..j).map(move |i| (i, j)));
        Graph::from_edges(n, edges).unwrap()
    }

    /// Cycle `0-1-...-(n-1)-0`, for `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycles need at least 3 vertices");
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    /// Path `0-1-...-(n-1)`.
    pub fn path(n: usize) -> Self {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    /// Star with centre 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).unwrap()
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.order()`.
    pub fn disjoint_union(&self, other: &Graph) -> Self {
        let shift = self.order();
        let edges = self
            .edges()
            .into_iter()
            .map(|e| (e.u, e.v))
            .chain(other.edges().into_iter().map(|e| (e.u + shift, e.v + shift)));
        Graph::from_edges(shift + other.order(), edges).unwrap()
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.order() && self.adj[u].binary_search(&v).is_ok()
    }

    /// All edges, sorted.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, list) in self.adj.iter().enumerate() {
            for &v in list.iter().filter(|&&v| v > u) {
                out.push(Edge { u, v });
            }
        }
        out
    }

    /// Edges incident to `v`, ordered by the other endpoint.
    pub fn incident_edges(&self, v: usize) -> impl Iterator<Item = Edge> + '_ {
        self.adj[v].iter().map(move |&w| Edge::new(v, w))
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.order() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.order(),
            })
        }
    }

    /// Maximum degree; 0 for edgeless graphs.
    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// Vertex sets of the connected components, each sorted, ordered by their
    /// minimum vertex.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for &y in &self.adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                        stack.push(y);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        debug_assert!({
            let mut all: Vec<usize> = comps.iter().flatten().copied().collect();
            all.sort_unstable();
            all == (0..n).collect::<Vec<_>>()
        });
        comps
    }

    /// Shortest-path distances from `r` in edges; `None` for unreachable
    /// vertices.
    pub fn bfs_distances(&self, r: usize) -> Result<Vec<Option<usize>>> {
        self.check_vertex(r)?;
        let mut dist = vec![None; self.order()];
        dist[r] = Some(0);
        let mut queue = VecDeque::from([r]);
        while let Some(x) = queue.pop_front() {
            let d = dist[x].unwrap();
            for &y in &self.adj[x] {
                if dist[y].is_none() {
                    dist[y] = Some(d + 1);
                    queue.push_back(y);
                }
            }
        }
        Ok(dist)
    }

    /// The subgraph induced by `vertices` (treated as a set), relabelled to
    /// `0..k` in increasing order of the original ids.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<InducedSubgraph> {
        let mut to_old: Vec<usize> = vertices.to_vec();
        to_old.sort_unstable();
        to_old.dedup();
        for &v in &to_old {
            self.check_vertex(v)?;
        }
        let to_new: BTreeMap<usize, usize> =
            to_old.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut edges = Vec::new();
        for (i, &v) in to_old.iter().enumerate() {
            for w in &self.adj[v] {
                if let Some(&j) = to_new.get(w) {
                    if i < j {
                        edges.push((i, j));
                    }
                }
            }
        }
        let graph = Graph::from_edges(to_old.len(), edges)?;
        Ok(InducedSubgraph {
            graph,
            to_old,
            to_new,
        })
    }
}

/// An induced subgraph together with its vertex relabelling.
#[derive(Clone, Debug)]
pub struct InducedSubgraph {
    pub graph: Graph,
    /// `to_old[new] = old`.
    pub to_old: Vec<usize>,
    /// `to_new[old] = new`.
    pub to_new: BTreeMap<usize, usize>,
}

impl InducedSubgraph {
    pub fn old_edge(&self, e: Edge) -> Edge {
        Edge::new(self.to_old[e.u], self.to_old[e.v])
    }

    /// The relabelled edge, if both endpoints lie in the subgraph.
    pub fn new_edge(&self, e: Edge) -> Option<Edge> {
        let a = *self.to_new.get(&e.u)?;
        let b = *self.to_new.get(&e.v)?;
        Some(Edge::new(a, b))
    }
}
