//! Static and temporal graph model.
//!
//! Vertices are dense ids `0..n`. Edges are unordered pairs stored as
//! `(min, max)`; every layer keeps its edges sorted and deduplicated so
//! membership is a binary search and iteration is in canonical order.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vertex = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("vertex id {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("a temporal graph needs at least one layer")]
    NoLayers,
    #[error("layer position {position} out of range 0..={tau}")]
    PositionOutOfRange { position: usize, tau: usize },
}

/// An undirected edge, normalized so that `u() < v()`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    u: Vertex,
    v: Vertex,
}

impl Edge {
    /// Panics on a self-loop; use [`Edge::try_new`] for untrusted input.
    pub fn new(a: Vertex, b: Vertex) -> Edge {
        Edge::try_new(a, b).expect("self-loops are not edges")
    }

    pub fn try_new(a: Vertex, b: Vertex) -> Result<Edge, GraphError> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(Edge { u: a, v: b }),
            std::cmp::Ordering::Greater => Ok(Edge { u: b, v: a }),
            std::cmp::Ordering::Equal => Err(GraphError::SelfLoop(a)),
        }
    }

    #[inline]
    pub fn u(self) -> Vertex {
        self.u
    }

    #[inline]
    pub fn v(self) -> Vertex {
        self.v
    }

    #[inline]
    pub fn endpoints(self) -> (Vertex, Vertex) {
        (self.u, self.v)
    }

    #[inline]
    pub fn touches(self, x: Vertex) -> bool {
        self.u == x || self.v == x
    }

    /// The endpoint opposite to `x`, if `x` is an endpoint.
    pub fn other(self, x: Vertex) -> Option<Vertex> {
        if self.u == x {
            Some(self.v)
        } else if self.v == x {
            Some(self.u)
        } else {
            None
        }
    }

    pub fn shares_endpoint(self, other: Edge) -> bool {
        self.touches(other.u) || self.touches(other.v)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.u, self.v)
    }
}

fn normalize_edges(
    n: usize,
    edges: impl IntoIterator<Item = Edge>,
) -> Result<Vec<Edge>, GraphError> {
    let mut out: Vec<Edge> = edges.into_iter().collect();
    for e in &out {
        if e.v as usize >= n {
            return Err(GraphError::VertexOutOfRange { vertex: e.v, n });
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Borrowed view of one static graph: a vertex count and a sorted edge slice.
#[derive(Debug, Clone, Copy)]
pub struct Layer<'a> {
    n: usize,
    edges: &'a [Edge],
}

impl<'a> Layer<'a> {
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edges(&self) -> &'a [Edge] {
        self.edges
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn contains(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    /// Sorted list of vertices incident to at least one edge.
    pub fn touched_vertices(&self) -> Vec<Vertex> {
        let mut vs: Vec<Vertex> = self.edges.iter().flat_map(|e| [e.u, e.v]).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// Neighbour lists indexed by vertex id. Allocates `O(n)`.
    pub fn adjacency(&self) -> Vec<Vec<Vertex>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in self.edges {
            adj[e.u as usize].push(e.v);
            adj[e.v as usize].push(e.u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    pub fn to_owned_graph(&self) -> StaticGraph {
        StaticGraph {
            n: self.n,
            edges: self.edges.to_vec(),
        }
    }
}

/// An owned static graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StaticGraph {
    n: usize,
    edges: Vec<Edge>,
}

impl StaticGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<StaticGraph, GraphError> {
        Ok(StaticGraph {
            n,
            edges: normalize_edges(n, edges)?,
        })
    }

    pub fn from_pairs(n: usize, pairs: &[(Vertex, Vertex)]) -> Result<StaticGraph, GraphError> {
        let edges = pairs
            .iter()
            .map(|&(a, b)| Edge::try_new(a, b))
            .collect::<Result<Vec<_>, _>>()?;
        StaticGraph::new(n, edges)
    }

    pub fn empty(n: usize) -> StaticGraph {
        StaticGraph {
            n,
            edges: Vec::new(),
        }
    }

    pub fn complete(n: usize) -> StaticGraph {
        let mut edges = Vec::new();
        for a in 0..n as Vertex {
            for b in a + 1..n as Vertex {
                edges.push(Edge::new(a, b));
            }
        }
        StaticGraph { n, edges }
    }

    pub fn path(n: usize) -> StaticGraph {
        let edges = (1..n as Vertex).map(|b| Edge::new(b - 1, b)).collect();
        StaticGraph { n, edges }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn view(&self) -> Layer<'_> {
        Layer {
            n: self.n,
            edges: &self.edges,
        }
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.view().contains(e)
    }

    pub fn into_edges(self) -> Vec<Edge> {
        self.edges
    }
}

/// A fixed vertex set together with an ordered, non-empty sequence of edge sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TemporalGraph {
    n: usize,
    layers: Vec<Vec<Edge>>,
    underlying: Vec<Edge>,
}

impl TemporalGraph {
    pub fn new(n: usize, layers: Vec<Vec<Edge>>) -> Result<TemporalGraph, GraphError> {
        if layers.is_empty() {
            return Err(GraphError::NoLayers);
        }
        let layers = layers
            .into_iter()
            .map(|l| normalize_edges(n, l))
            .collect::<Result<Vec<_>, _>>()?;
        let underlying = union_of(&layers);
        Ok(TemporalGraph {
            n,
            layers,
            underlying,
        })
    }

    pub fn from_static(g: &StaticGraph, tau: usize) -> TemporalGraph {
        let layers = vec![g.edges.clone(); tau.max(1)];
        TemporalGraph {
            n: g.n,
            underlying: g.edges.clone(),
            layers,
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Lifetime: number of layers.
    #[inline]
    pub fn tau(&self) -> usize {
        self.layers.len()
    }

    /// Layer `i`, 0-based.
    #[inline]
    pub fn layer(&self, i: usize) -> Layer<'_> {
        Layer {
            n: self.n,
            edges: &self.layers[i],
        }
    }

    pub fn layers(&self) -> impl ExactSizeIterator<Item = Layer<'_>> + '_ {
        self.layers.iter().map(move |l| Layer {
            n: self.n,
            edges: l,
        })
    }

    pub fn underlying(&self) -> Layer<'_> {
        Layer {
            n: self.n,
            edges: &self.underlying,
        }
    }

    /// Number of edges of the underlying graph.
    pub fn m(&self) -> usize {
        self.underlying.len()
    }

    pub fn total_edge_entries(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    /// Recomputes the union of the layers and compares it with the cached one.
    pub fn check_union(&self) -> bool {
        union_of(&self.layers) == self.underlying
    }

    /// Inserts `count` edgeless layers so that the first of them gets index
    /// `position` (0-based; `position == tau` appends).
    pub fn add_empty_layers(
        &self,
        position: usize,
        count: usize,
    ) -> Result<TemporalGraph, GraphError> {
        if position > self.tau() {
            return Err(GraphError::PositionOutOfRange {
                position,
                tau: self.tau(),
            });
        }
        let mut layers = Vec::with_capacity(self.tau() + count);
        layers.extend_from_slice(&self.layers[..position]);
        layers.extend(std::iter::repeat_with(Vec::new).take(count));
        layers.extend_from_slice(&self.layers[position..]);
        Ok(TemporalGraph {
            n: self.n,
            layers,
            underlying: self.underlying.clone(),
        })
    }

    /// Inserts `count` edgeless layers between every two successive layers.
    pub fn spread_empty_layers(&self, count: usize) -> TemporalGraph {
        let mut g = self.clone();
        for i in (1..self.tau()).rev() {
            g = g.add_empty_layers(i, count).expect("position within range");
        }
        g
    }

    /// Same layers on a larger vertex set; new vertices are isolated everywhere.
    pub fn with_vertex_count(&self, n: usize) -> Result<TemporalGraph, GraphError> {
        if let Some(e) = self.underlying.last() {
            if e.v as usize >= n {
                return Err(GraphError::VertexOutOfRange { vertex: e.v, n });
            }
        }
        Ok(TemporalGraph {
            n,
            layers: self.layers.clone(),
            underlying: self.underlying.clone(),
        })
    }
}

fn union_of(layers: &[Vec<Edge>]) -> Vec<Edge> {
    let mut all: Vec<Edge> = layers.iter().flatten().copied().collect();
    all.sort_unstable();
    all.dedup();
    all
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = self.parent[x as usize];
        }
        x
    }

    /// Returns false if `a` and `b` were already in the same set.
    pub fn union(&mut self, a: u32, b: u32) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
        true
    }

    pub fn set_size(&mut self, x: u32) -> usize {
        let r = self.find(x);
        self.size[r as usize] as usize
    }
}

/// Maps a sparse sorted vertex list onto local ids `0..len`.
#[derive(Debug, Clone)]
pub(crate) struct LocalIds {
    vertices: Vec<Vertex>,
}

impl LocalIds {
    pub(crate) fn new(mut vertices: Vec<Vertex>) -> LocalIds {
        vertices.sort_unstable();
        vertices.dedup();
        LocalIds { vertices }
    }

    #[inline]
    pub(crate) fn len(&self) -> usize {
        self.vertices.len()
    }

    #[inline]
    pub(crate) fn get(&self, v: Vertex) -> Option<u32> {
        self.vertices.binary_search(&v).ok().map(|i| i as u32)
    }

    #[inline]
    pub(crate) fn global(&self, local: u32) -> Vertex {
        self.vertices[local as usize]
    }
}
