//! Simple undirected graphs with stable edge ids, and subgraphs expressed as
//! vertex/edge masks over a fixed host graph.

use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("parallel edge {0}-{1}")]
    MultiEdge(usize, usize),
}

/// A simple undirected graph. Edge `i` is `edges()[i]` with the smaller
/// endpoint first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<(usize, usize)>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<usize, GraphError> {
        let n = self.adj.len();
        if u >= n {
            return Err(GraphError::VertexOutOfRange(u));
        }
        if v >= n {
            return Err(GraphError::VertexOutOfRange(v));
        }
        if u == v {
            return Err(GraphError::Loop(u));
        }
        if self.edge_id(u, v).is_some() {
            return Err(GraphError::MultiEdge(u.min(v), u.max(v)));
        }
        let id = self.edges.len();
        self.edges.push((u.min(v), u.max(v)));
        self.adj[u].push((v, id));
        self.adj[v].push((u, id));
        Ok(id)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> (usize, usize) {
        self.edges[id]
    }

    /// `(neighbor, edge id)` pairs.
    pub fn incident(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().map(|&(w, _)| w)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        self.adj.get(u)?.iter().find(|&&(w, _)| w == v).map(|&(_, id)| id)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_id(u, v).is_some()
    }

    /// BFS distances from a set of sources inside the subgraph `within`
    /// (the whole graph when `None`).
    pub fn distances_from(&self, sources: &[usize], within: Option<&Subgraph>) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if within.is_none_or(|h| h.has_vertex(s)) && dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &(w, e) in &self.adj[u] {
                if let Some(h) = within {
                    if !h.has_edge(e) || !h.has_vertex(w) {
                        continue;
                    }
                }
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Minimum distance between two vertex sets; `None` if unreachable.
    pub fn set_distance(&self, a: &[usize], b: &[usize]) -> Option<usize> {
        let dist = self.distances_from(a, None);
        b.iter().filter_map(|&v| dist[v]).min()
    }

    /// Length of a shortest cycle, `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        let n = self.vertex_count();
        let mut best: Option<usize> = None;
        let mut dist = vec![usize::MAX; n];
        let mut parent_edge = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for root in 0..n {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            parent_edge.iter_mut().for_each(|e| *e = usize::MAX);
            dist[root] = 0;
            queue.clear();
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                if best.is_some_and(|b| 2 * dist[u] + 1 >= b) {
                    break;
                }
                for &(w, e) in &self.adj[u] {
                    if e == parent_edge[u] {
                        continue;
                    }
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent_edge[w] = e;
                        queue.push_back(w);
                    } else {
                        let len = dist[u] + dist[w] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    /// Connected components as a vertex-to-component-index map plus count.
    pub fn components(&self, within: Option<&Subgraph>) -> (Vec<Option<usize>>, usize) {
        let n = self.vertex_count();
        let mut comp = vec![None; n];
        let mut count = 0;
        for s in 0..n {
            if comp[s].is_some() || within.is_some_and(|h| !h.has_vertex(s)) {
                continue;
            }
            for (v, d) in self.distances_from(&[s], within).into_iter().enumerate() {
                if d.is_some() {
                    comp[v] = Some(count);
                }
            }
            count += 1;
        }
        (comp, count)
    }

    pub fn is_connected(&self) -> bool {
        self.components(None).1 <= 1
    }
}

/// A subgraph of a host [`Graph`], as masks indexed by host vertex and edge ids.
/// Every edge in the mask has both endpoints in the vertex mask.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subgraph {
    vertices: Vec<bool>,
    edges: Vec<bool>,
}

impl Subgraph {
    pub fn empty(g: &Graph) -> Self {
        Subgraph {
            vertices: vec![false; g.vertex_count()],
            edges: vec![false; g.edge_count()],
        }
    }

    pub fn full(g: &Graph) -> Self {
        Subgraph {
            vertices: vec![true; g.vertex_count()],
            edges: vec![true; g.edge_count()],
        }
    }

    /// Vertex set plus edge ids; endpoints of listed edges are added.
    pub fn from_parts(
        g: &Graph,
        vertices: impl IntoIterator<Item = usize>,
        edges: impl IntoIterator<Item = usize>,
    ) -> Self {
        let mut h = Subgraph::empty(g);
        for v in vertices {
            h.vertices[v] = true;
        }
        for e in edges {
            h.add_edge(g, e);
        }
        h
    }

    /// Subgraph induced by a vertex set.
    pub fn induced(g: &Graph, vertices: impl IntoIterator<Item = usize>) -> Self {
        let mut h = Subgraph::empty(g);
        for v in vertices {
            h.vertices[v] = true;
        }
        for (id, &(u, v)) in g.edges().iter().enumerate() {
            h.edges[id] = h.vertices[u] && h.vertices[v];
        }
        h
    }

    pub fn has_vertex(&self, v: usize) -> bool {
        self.vertices[v]
    }

    pub fn has_edge(&self, e: usize) -> bool {
        self.edges[e]
    }

    pub fn add_vertex(&mut self, v: usize) {
        self.vertices[v] = true;
    }

    pub fn add_edge(&mut self, g: &Graph, e: usize) {
        let (u, v) = g.edge(e);
        self.edges[e] = true;
        self.vertices[u] = true;
        self.vertices[v] = true;
    }

    pub fn remove_edge(&mut self, e: usize) {
        self.edges[e] = false;
    }

    /// Removes a vertex together with its incident edges.
    pub fn remove_vertex(&mut self, g: &Graph, v: usize) {
        self.vertices[v] = false;
        for &(_, e) in g.incident(v) {
            self.edges[e] = false;
        }
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.vertices.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    pub fn edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.iter().filter(|&&b| b).count()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().filter(|&&b| b).count()
    }

    pub fn vertex_mask(&self) -> &[bool] {
        &self.vertices
    }

    pub fn edge_mask(&self) -> &[bool] {
        &self.edges
    }

    /// Degree of `v` counting only edges of this subgraph.
    pub fn degree(&self, g: &Graph, v: usize) -> usize {
        g.incident(v).iter().filter(|&&(_, e)| self.edges[e]).count()
    }

    pub fn is_subgraph_of(&self, other: &Subgraph) -> bool {
        self.vertices.iter().zip(&other.vertices).all(|(&a, &b)| !a || b)
            && self.edges.iter().zip(&other.edges).all(|(&a, &b)| !a || b)
    }

    pub fn is_well_formed(&self, g: &Graph) -> bool {
        self.vertices.len() == g.vertex_count()
            && self.edges.len() == g.edge_count()
            && self.edges().all(|e| {
                let (u, v) = g.edge(e);
                self.vertices[u] && self.vertices[v]
            })
    }

    pub fn union(&self, other: &Subgraph) -> Subgraph {
        Subgraph {
            vertices: self
                .vertices
                .iter()
                .zip(&other.vertices)
                .map(|(&a, &b)| a || b)
                .collect(),
            edges: self.edges.iter().zip(&other.edges).map(|(&a, &b)| a || b).collect(),
        }
    }

    pub fn intersection(&self, other: &Subgraph) -> Subgraph {
        Subgraph {
            vertices: self
                .vertices
                .iter()
                .zip(&other.vertices)
                .map(|(&a, &b)| a && b)
                .collect(),
            edges: self.edges.iter().zip(&other.edges).map(|(&a, &b)| a && b).collect(),
        }
    }

    pub fn component_count(&self, g: &Graph) -> usize {
        g.components(Some(self)).1
    }

    /// Materializes the subgraph as a standalone graph on its vertices,
    /// returning the graph and the new-to-host vertex map.
    pub fn to_graph(&self, g: &Graph) -> (Graph, Vec<usize>) {
        let verts: Vec<usize> = self.vertices().collect();
        let mut index = vec![usize::MAX; g.vertex_count()];
        for (i, &v) in verts.iter().enumerate() {
            index[v] = i;
        }
        let mut h = Graph::empty(verts.len());
        for e in self.edges() {
            let (u, v) = g.edge(e);
            h.add_edge(index[u], index[v]).expect("subgraph of a simple graph");
        }
        (h, verts)
    }
}
