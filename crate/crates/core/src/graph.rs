//! Simple undirected graphs on at most 64 vertices, stored as adjacency bitsets.

use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

/// Largest supported vertex count. Adjacency rows are single `u64` words.
pub const MAX_ORDER: usize = 64;

/// A set of vertices as a bitmask.
pub type VertexSet = u64;

/// Iterates the members of a vertex set in increasing order.
pub fn members(mut set: VertexSet) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if set == 0 {
            None
        } else {
            let v = set.trailing_zeros() as usize;
            set &= set - 1;
            Some(v)
        }
    })
}

#[inline]
pub fn bit(v: usize) -> VertexSet {
    1u64 << v
}

/// Mask with the low `n` bits set.
#[inline]
pub fn full_set(n: usize) -> VertexSet {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Builds a vertex set from indices.
pub fn set_of<I: IntoIterator<Item = usize>>(vs: I) -> VertexSet {
    vs.into_iter().fold(0, |acc, v| acc | bit(v))
}

/// A finite simple undirected graph on vertices `0..n`.
///
/// Optional vertex labels only affect reporting; equality and hashing ignore them.
#[derive(Clone, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    adj: Vec<VertexSet>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.adj == other.adj
    }
}

impl Eq for Graph {}

impl Hash for Graph {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.adj.hash(state);
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges=[", self.n)?;
        for (i, (u, v)) in self.edges().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}-{}", self.label(u), self.label(v))?;
        }
        write!(f, "])")
    }
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    ///
    /// Panics if `n > MAX_ORDER`; use [`Graph::try_new`] for untrusted sizes.
    pub fn new(n: usize) -> Self {
        Self::try_new(n).expect("graph order exceeds MAX_ORDER")
    }

    pub fn try_new(n: usize) -> Result<Self, GraphError> {
        if n > MAX_ORDER {
            return Err(GraphError::TooLarge {
                order: n,
                limit: MAX_ORDER,
            });
        }
        Ok(Graph {
            n,
            adj: vec![0; n],
            labels: None,
        })
    }

    /// Builds a graph from an edge list, rejecting loops, duplicates and bad indices.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Self::try_new(n)?;
        for &(u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if g.has_edge(u, v) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            g.insert_edge(u, v);
        }
        Ok(g)
    }

    /// Builds a graph from adjacency rows. Rows must be symmetric and loop-free.
    pub fn from_adjacency(adj: Vec<VertexSet>) -> Result<Self, GraphError> {
        let n = adj.len();
        let mut g = Self::try_new(n)?;
        let mask = full_set(n);
        for (u, &row) in adj.iter().enumerate() {
            if row & !mask != 0 {
                return Err(GraphError::InvalidVertex {
                    vertex: (row & !mask).trailing_zeros() as usize,
                    order: n,
                });
            }
            if row & bit(u) != 0 {
                return Err(GraphError::SelfLoop(u));
            }
            for v in members(row) {
                if adj[v] & bit(u) == 0 {
                    return Err(GraphError::Asymmetric(u, v));
                }
            }
        }
        g.adj = adj;
        Ok(g)
    }

    pub(crate) fn from_adjacency_unchecked(adj: Vec<VertexSet>) -> Self {
        Graph {
            n: adj.len(),
            adj,
            labels: None,
        }
    }

    pub fn with_labels<S: Into<String>>(mut self, labels: Vec<S>) -> Self {
        assert_eq!(labels.len(), self.n, "one label per vertex");
        self.labels = Some(labels.into_iter().map(Into::into).collect());
        self
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Display name of vertex `v`: its label, or the index.
    pub fn label(&self, v: usize) -> String {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => v.to_string(),
        }
    }

    /// Index of the vertex carrying `label`.
    pub fn vertex_by_label(&self, label: &str) -> Option<usize> {
        self.labels.as_ref()?.iter().position(|l| l == label)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Number of edges.
    pub fn size(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn vertex_set(&self) -> VertexSet {
        full_set(self.n)
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.adj[v]
    }

    pub fn adjacency(&self) -> &[VertexSet] {
        &self.adj
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u] & bit(v) != 0
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| members(self.adj[u] & !full_set(u + 1)).map(move |v| (u, v)))
    }

    /// Unordered vertex pairs that are not edges, `u < v`.
    pub fn non_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::InvalidVertex {
                vertex: v,
                order: self.n,
            })
        }
    }

    #[inline]
    pub(crate) fn insert_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v);
        self.adj[u] |= bit(v);
        self.adj[v] |= bit(u);
    }

    #[inline]
    pub(crate) fn erase_edge(&mut self, u: usize, v: usize) {
        self.adj[u] &= !bit(v);
        self.adj[v] &= !bit(u);
    }

    /// Copy with the edge `uv` added. Adding an existing edge is an error.
    pub fn add_edge(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if self.has_edge(u, v) {
            return Err(GraphError::DuplicateEdge(u, v));
        }
        let mut g = self.clone();
        g.insert_edge(u, v);
        Ok(g)
    }

    /// Copy with the edge `uv` removed.
    pub fn remove_edge(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        if !self.has_edge(u, v) {
            return Err(GraphError::NotAnEdge(u, v));
        }
        let mut g = self.clone();
        g.erase_edge(u, v);
        Ok(g)
    }

    /// Deletes `v`; vertices above `v` shift down by one.
    pub fn delete_vertex(&self, v: usize) -> Result<Graph, GraphError> {
        self.check_vertex(v)?;
        Ok(self.induced(self.vertex_set() & !bit(v)).0)
    }

    /// Deletes a set of vertices; survivors keep their relative order.
    pub fn delete_vertices(&self, set: VertexSet) -> Graph {
        self.induced(self.vertex_set() & !set).0
    }

    /// Subgraph induced by `keep`, relabelled to `0..|keep|` in increasing order.
    /// Also returns the original index of each new vertex.
    pub fn induced(&self, keep: VertexSet) -> (Graph, Vec<usize>) {
        let keep = keep & self.vertex_set();
        let old: Vec<usize> = members(keep).collect();
        let mut index = [usize::MAX; MAX_ORDER];
        for (i, &v) in old.iter().enumerate() {
            index[v] = i;
        }
        let adj = old
            .iter()
            .map(|&v| members(self.adj[v] & keep).fold(0, |acc, w| acc | bit(index[w])))
            .collect();
        let mut g = Graph::from_adjacency_unchecked(adj);
        if let Some(l) = &self.labels {
            g.labels = Some(old.iter().map(|&v| l[v].clone()).collect());
        }
        (g, old)
    }

    /// Contracts the edge `uv`: the merged vertex takes index `min(u, v)`,
    /// the other endpoint is removed, loops and parallel edges disappear.
    pub fn contract_edge(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if !self.has_edge(u, v) {
            return Err(GraphError::NotAnEdge(u, v));
        }
        let (keep, gone) = (u.min(v), u.max(v));
        let mut g = self.clone();
        for w in members(self.adj[gone]) {
            if w != keep {
                g.insert_edge(keep, w);
            }
        }
        Ok(g.induced(g.vertex_set() & !bit(gone)).0)
    }

    pub fn complement(&self) -> Graph {
        let mask = full_set(self.n);
        let adj = (0..self.n)
            .map(|v| !self.adj[v] & mask & !bit(v))
            .collect();
        Graph {
            n: self.n,
            adj,
            labels: self.labels.clone(),
        }
    }

    /// Disjoint union: `other`'s vertices follow this graph's.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let n = self.n + other.n;
        assert!(n <= MAX_ORDER, "graph order exceeds MAX_ORDER");
        let mut adj = self.adj.clone();
        adj.extend(other.adj.iter().map(|&r| r << self.n));
        let mut g = Graph::from_adjacency_unchecked(adj);
        g.labels = merge_labels(self, other);
        g
    }

    /// Graph sum `G + H`: disjoint union plus every edge between the two sides.
    pub fn join(&self, other: &Graph) -> Graph {
        let mut g = self.disjoint_union(other);
        let left = full_set(self.n);
        let right = full_set(g.n) & !left;
        for v in 0..self.n {
            g.adj[v] |= right;
        }
        for v in self.n..g.n {
            g.adj[v] |= left;
        }
        g
    }

    /// Relabels by `perm`: old vertex `v` becomes `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut adj = vec![0; self.n];
        for v in 0..self.n {
            adj[perm[v]] = members(self.adj[v]).fold(0, |acc, w| acc | bit(perm[w]));
        }
        let mut g = Graph::from_adjacency_unchecked(adj);
        if let Some(l) = &self.labels {
            let mut nl = vec![String::new(); self.n];
            for v in 0..self.n {
                nl[perm[v]] = l[v].clone();
            }
            g.labels = Some(nl);
        }
        g
    }

    /// Vertices reachable from `start` inside `within`.
    pub fn reach(&self, start: usize, within: VertexSet) -> VertexSet {
        let mut seen = bit(start) & within;
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0;
            for v in members(frontier) {
                next |= self.adj[v];
            }
            next &= within & !seen;
            seen |= next;
            frontier = next;
        }
        seen
    }

    /// Whether `set` induces a connected subgraph. The empty set is not connected.
    pub fn is_connected_set(&self, set: VertexSet) -> bool {
        if set == 0 {
            return false;
        }
        self.reach(set.trailing_zeros() as usize, set) == set
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.is_connected_set(self.vertex_set())
    }

    /// Connected components as vertex sets, ordered by smallest member.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut left = self.vertex_set();
        let mut out = Vec::new();
        while left != 0 {
            let c = self.reach(left.trailing_zeros() as usize, left);
            out.push(c);
            left &= !c;
        }
        out
    }

    pub fn isolated_vertices(&self) -> VertexSet {
        (0..self.n).filter(|&v| self.adj[v] == 0).fold(0, |a, v| a | bit(v))
    }

    /// Same order, and every edge of `self` is an edge of `other`.
    pub fn is_spanning_subgraph_of(&self, other: &Graph) -> bool {
        self.n == other.n && (0..self.n).all(|v| self.adj[v] & !other.adj[v] == 0)
    }

    /// Triangles `(a, b, c)` with `a < b < c`.
    pub fn triangles(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (a, b) in self.edges() {
            for c in members(self.adj[a] & self.adj[b] & !full_set(b + 1)) {
                out.push((a, b, c));
            }
        }
        out
    }

    /// True when the graph contains a cycle.
    pub fn has_cycle(&self) -> bool {
        self.size() + self.components().len() > self.n
    }
}

fn merge_labels(a: &Graph, b: &Graph) -> Option<Vec<String>> {
    if a.labels.is_none() && b.labels.is_none() {
        return None;
    }
    let mut out: Vec<String> = (0..a.n).map(|v| a.label(v)).collect();
    out.extend((0..b.n).map(|v| match &b.labels {
        Some(l) => l[v].clone(),
        None => (a.n + v).to_string(),
    }));
    Some(out)
}
