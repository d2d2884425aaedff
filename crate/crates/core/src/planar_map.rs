//! Plane graphs as rotation systems.
//!
//! Each undirected edge `e = (u, v)` with `u < v` owns two half-edges
//! (darts): `2e` from `u` to `v` and `2e + 1` from `v` to `u`. The rotation
//! at a vertex is the cyclic order of its outgoing darts. Faces are traced
//! with `next(u -> v) = (v -> w)` where `w` follows `u` in the rotation at `v`.

use crate::graph::{Graph, Subgraph};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("half-edge {from}->{to} points outside the vertex range")]
    VertexOutOfRange { from: usize, to: usize },
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("duplicate half-edge {from}->{to} (parallel edge)")]
    DuplicateHalfEdge { from: usize, to: usize },
    #[error("half-edge {from}->{to} has no twin {to}->{from}")]
    DanglingTwin { from: usize, to: usize },
    #[error("vertex sequence {0:?} is not a cycle of the map")]
    NotACycle(Vec<usize>),
    #[error("vertex sequence {0:?} is not a path of the map")]
    NotAPath(Vec<usize>),
    #[error("no face with index {0}")]
    NoSuchFace(usize),
    #[error("no half-edge {0}->{1}")]
    NoSuchHalfEdge(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanarityError {
    #[error("map has no vertices")]
    Empty,
    #[error("map is disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error("V - E + F = {euler_characteristic}, embedding has genus {genus}")]
    NonzeroGenus { euler_characteristic: i64, genus: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneReport {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
}

/// Closed walk of vertices `c0 c1 ... c(k-1)` with the edge `c(k-1) c0` implied.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CycleRef(pub Vec<usize>);

/// Directed path `p0 p1 ... pl`; `p0` is the designated first vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PathRef(pub Vec<usize>);

impl CycleRef {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    /// Edge ids of the cycle, or an error if it is not a cycle of `g`.
    pub fn edge_ids(&self, g: &Graph) -> Result<Vec<usize>, MapError> {
        let k = self.0.len();
        let mut seen = vec![false; g.vertex_count()];
        if k < 3 {
            return Err(MapError::NotACycle(self.0.clone()));
        }
        let mut out = Vec::with_capacity(k);
        for i in 0..k {
            let (u, v) = (self.0[i], self.0[(i + 1) % k]);
            if u >= g.vertex_count() || seen[u] {
                return Err(MapError::NotACycle(self.0.clone()));
            }
            seen[u] = true;
            match g.edge_id(u, v) {
                Some(e) => out.push(e),
                None => return Err(MapError::NotACycle(self.0.clone())),
            }
        }
        Ok(out)
    }

    pub fn as_subgraph(&self, g: &Graph) -> Result<Subgraph, MapError> {
        Ok(Subgraph::from_parts(g, self.0.iter().copied(), self.edge_ids(g)?))
    }
}

impl PathRef {
    /// Number of edges.
    pub fn length(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.contains(&v)
    }

    pub fn edge_ids(&self, g: &Graph) -> Result<Vec<usize>, MapError> {
        let mut seen = vec![false; g.vertex_count()];
        if self.0.is_empty() {
            return Err(MapError::NotAPath(self.0.clone()));
        }
        for &v in &self.0 {
            if v >= g.vertex_count() || seen[v] {
                return Err(MapError::NotAPath(self.0.clone()));
            }
            seen[v] = true;
        }
        self.0
            .windows(2)
            .map(|w| g.edge_id(w[0], w[1]).ok_or_else(|| MapError::NotAPath(self.0.clone())))
            .collect()
    }

    pub fn as_subgraph(&self, g: &Graph) -> Result<Subgraph, MapError> {
        Ok(Subgraph::from_parts(g, self.0.iter().copied(), self.edge_ids(g)?))
    }
}

/// A connected-or-not plane map: graph plus rotation system plus traced faces.
#[derive(Debug, Clone)]
pub struct PlaneMap {
    graph: Graph,
    rotation: Vec<Vec<usize>>,
    face_of: Vec<usize>,
    faces: Vec<Vec<usize>>,
    outer: usize,
}

pub fn dart_tail(g: &Graph, d: usize) -> usize {
    let (u, v) = g.edge(d / 2);
    if d.is_multiple_of(2) {
        u
    } else {
        v
    }
}

pub fn dart_head(g: &Graph, d: usize) -> usize {
    dart_tail(g, d ^ 1)
}

impl PlaneMap {
    /// Builds a map from per-vertex neighbor lists in cyclic order.
    pub fn build(rotation_table: &[Vec<usize>]) -> Result<PlaneMap, MapError> {
        let n = rotation_table.len();
        for (v, rot) in rotation_table.iter().enumerate() {
            for (i, &w) in rot.iter().enumerate() {
                if w >= n {
                    return Err(MapError::VertexOutOfRange { from: v, to: w });
                }
                if w == v {
                    return Err(MapError::Loop(v));
                }
                if rot[..i].contains(&w) {
                    return Err(MapError::DuplicateHalfEdge { from: v, to: w });
                }
                if !rotation_table[w].contains(&v) {
                    return Err(MapError::DanglingTwin { from: v, to: w });
                }
            }
        }
        let mut graph = Graph::empty(n);
        for (v, rot) in rotation_table.iter().enumerate() {
            for &w in rot {
                if v < w {
                    graph.add_edge(v, w).expect("checked above");
                }
            }
        }
        let rotation: Vec<Vec<usize>> = rotation_table
            .iter()
            .enumerate()
            .map(|(v, rot)| {
                rot.iter()
                    .map(|&w| {
                        let e = graph.edge_id(v, w).unwrap();
                        if v < w {
                            2 * e
                        } else {
                            2 * e + 1
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(Self::from_parts(graph, rotation, None))
    }

    fn from_parts(graph: Graph, rotation: Vec<Vec<usize>>, outer_dart: Option<usize>) -> PlaneMap {
        let darts = 2 * graph.edge_count();
        let mut pos = vec![0; darts];
        for rot in &rotation {
            for (i, &d) in rot.iter().enumerate() {
                pos[d] = i;
            }
        }
        let mut face_of = vec![usize::MAX; darts];
        let mut faces = Vec::new();
        for start in 0..darts {
            if face_of[start] != usize::MAX {
                continue;
            }
            let id = faces.len();
            let mut walk = Vec::new();
            let mut d = start;
            loop {
                face_of[d] = id;
                walk.push(d);
                let twin = d ^ 1;
                let v = dart_tail(&graph, twin);
                let rot = &rotation[v];
                d = rot[(pos[twin] + 1) % rot.len()];
                if d == start {
                    break;
                }
            }
            faces.push(walk);
        }
        for v in 0..graph.vertex_count() {
            if graph.degree(v) == 0 {
                faces.push(Vec::new());
            }
        }
        let outer = outer_dart.map_or(0, |d| face_of[d]);
        PlaneMap {
            graph,
            rotation,
            face_of,
            faces,
            outer,
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn outer_face(&self) -> usize {
        self.outer
    }

    pub fn with_outer_face(mut self, face: usize) -> Result<PlaneMap, MapError> {
        if face >= self.faces.len() {
            return Err(MapError::NoSuchFace(face));
        }
        self.outer = face;
        Ok(self)
    }

    /// Dart ids of a face walk, in traversal order.
    pub fn face_darts(&self, face: usize) -> &[usize] {
        &self.faces[face]
    }

    /// Length of the facial walk (number of darts).
    pub fn face_len(&self, face: usize) -> usize {
        self.faces[face].len()
    }

    /// Vertices of a face in walk order (with repetition for non-cycle faces).
    pub fn face_walk(&self, face: usize) -> Vec<usize> {
        if self.faces[face].is_empty() {
            // empty walk of an isolated vertex; recover it
            let isolated: Vec<usize> = (0..self.vertex_count())
                .filter(|&v| self.graph.degree(v) == 0)
                .collect();
            let idx = face - (self.faces.len() - isolated.len());
            return vec![isolated[idx]];
        }
        self.faces[face].iter().map(|&d| dart_tail(&self.graph, d)).collect()
    }

    /// Distinct vertices incident with a face, sorted.
    pub fn face_vertices(&self, face: usize) -> Vec<usize> {
        let mut vs = self.face_walk(face);
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// Edge ids on a face boundary, sorted and deduplicated.
    pub fn face_edges(&self, face: usize) -> Vec<usize> {
        let mut es: Vec<usize> = self.faces[face].iter().map(|&d| d / 2).collect();
        es.sort_unstable();
        es.dedup();
        es
    }

    /// The face walk as a cycle, if the face is bounded by a cycle.
    pub fn face_cycle(&self, face: usize) -> Option<CycleRef> {
        let walk = self.face_walk(face);
        let mut sorted = walk.clone();
        sorted.sort_unstable();
        sorted.dedup();
        (walk.len() >= 3 && sorted.len() == walk.len()).then_some(CycleRef(walk))
    }

    pub fn face_of_dart(&self, dart: usize) -> usize {
        self.face_of[dart]
    }

    pub fn dart(&self, from: usize, to: usize) -> Option<usize> {
        let e = self.graph.edge_id(from, to)?;
        Some(if from < to { 2 * e } else { 2 * e + 1 })
    }

    pub fn face_of_half_edge(&self, from: usize, to: usize) -> Result<usize, MapError> {
        self.dart(from, to)
            .map(|d| self.face_of[d])
            .ok_or(MapError::NoSuchHalfEdge(from, to))
    }

    /// A half-edge `(from, to)` on the face, usable as a stable face handle.
    pub fn face_handle(&self, face: usize) -> Option<(usize, usize)> {
        let d = *self.faces.get(face)?.first()?;
        Some((dart_tail(&self.graph, d), dart_head(&self.graph, d)))
    }

    /// Faces incident with a vertex.
    pub fn faces_at(&self, v: usize) -> Vec<usize> {
        let mut fs: Vec<usize> = self.rotation[v].iter().map(|&d| self.face_of[d]).collect();
        if fs.is_empty() {
            fs = (0..self.faces.len())
                .filter(|&f| self.faces[f].is_empty() && self.face_walk(f) == [v])
                .collect();
        }
        fs.sort_unstable();
        fs.dedup();
        fs
    }

    /// Neighbors of each vertex in rotation order.
    pub fn rotation_table(&self) -> Vec<Vec<usize>> {
        self.rotation
            .iter()
            .map(|rot| rot.iter().map(|&d| dart_head(&self.graph, d)).collect())
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.graph.is_connected()
    }

    pub fn validate_plane(&self) -> Result<PlaneReport, PlanarityError> {
        let n = self.vertex_count();
        if n == 0 {
            return Err(PlanarityError::Empty);
        }
        let (_, components) = self.graph.components(None);
        if components > 1 {
            return Err(PlanarityError::Disconnected { components });
        }
        let chi = n as i64 - self.edge_count() as i64 + self.face_count() as i64;
        if chi != 2 {
            return Err(PlanarityError::NonzeroGenus {
                euler_characteristic: chi,
                genus: (2 - chi) / 2,
            });
        }
        Ok(PlaneReport {
            vertices: n,
            edges: self.edge_count(),
            faces: self.face_count(),
        })
    }

    /// Shortest cycle length; `None` stands for infinity (forests).
    pub fn girth(&self) -> Option<usize> {
        self.graph.girth()
    }

    pub fn distance(&self, a: &[usize], b: &[usize]) -> Option<usize> {
        self.graph.set_distance(a, b)
    }

    /// Splits the map along a cycle into `(int(C), ext(C))`. The side holding
    /// the outer face is the exterior.
    pub fn cycle_sides(&self, cycle: &CycleRef) -> Result<(Subgraph, Subgraph), MapError> {
        let g = &self.graph;
        let cycle_edges = cycle.edge_ids(g)?;
        let mut on_cycle = vec![false; g.edge_count()];
        for &e in &cycle_edges {
            on_cycle[e] = true;
        }
        // flood fill faces from the outer face without crossing the cycle
        let mut exterior = vec![false; self.faces.len()];
        let mut stack = vec![self.outer];
        exterior[self.outer] = true;
        while let Some(f) = stack.pop() {
            for &d in &self.faces[f] {
                if on_cycle[d / 2] {
                    continue;
                }
                let other = self.face_of[d ^ 1];
                if !exterior[other] {
                    exterior[other] = true;
                    stack.push(other);
                }
            }
        }
        let base = cycle.as_subgraph(g)?;
        let mut int = base.clone();
        let mut ext = base;
        for e in 0..g.edge_count() {
            if on_cycle[e] {
                continue;
            }
            if exterior[self.face_of[2 * e]] {
                ext.add_edge(g, e);
            } else {
                int.add_edge(g, e);
            }
        }
        for v in 0..g.vertex_count() {
            if g.degree(v) == 0 {
                // isolated vertices only occur in disconnected maps
                ext.add_vertex(v);
            }
        }
        Ok((int, ext))
    }

    /// A cycle is tame when its interior is the cycle itself, or (length at
    /// least 8) the cycle plus one chord, or (length at least 9) the cycle
    /// plus one vertex with exactly three neighbors on it.
    pub fn is_tame(&self, cycle: &CycleRef) -> Result<bool, MapError> {
        let g = &self.graph;
        let (int, _) = self.cycle_sides(cycle)?;
        let k = cycle.len();
        let extra_vertices = int.vertex_count() - k;
        let extra_edges = int.edge_count() - k;
        if extra_vertices == 0 && extra_edges == 0 {
            return Ok(true);
        }
        if k >= 8 && extra_vertices == 0 && extra_edges == 1 {
            return Ok(true);
        }
        if k >= 9 && extra_vertices == 1 && extra_edges == 3 {
            let v = int.vertices().find(|v| !cycle.0.contains(v)).unwrap();
            let on_c = g.neighbors(v).filter(|w| cycle.0.contains(w)).count();
            return Ok(int.degree(g, v) == 3 && on_c == 3);
        }
        Ok(false)
    }

    /// Deletes vertices (with incident edges) and edges, renumbering the
    /// surviving vertices in increasing order. Faces are retraced.
    pub fn subgraph_delete(&self, vertices: &[usize], edges: &[usize]) -> Deletion {
        let g = &self.graph;
        let mut keep_v = vec![true; g.vertex_count()];
        for &v in vertices {
            keep_v[v] = false;
        }
        let mut keep_e = vec![true; g.edge_count()];
        for &e in edges {
            keep_e[e] = false;
        }
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            if !keep_v[u] || !keep_v[v] {
                keep_e[e] = false;
            }
        }
        let old_of_new: Vec<usize> = (0..g.vertex_count()).filter(|&v| keep_v[v]).collect();
        let mut new_of_old = vec![usize::MAX; g.vertex_count()];
        for (i, &v) in old_of_new.iter().enumerate() {
            new_of_old[v] = i;
        }
        let table: Vec<Vec<usize>> = old_of_new
            .iter()
            .map(|&v| {
                self.rotation[v]
                    .iter()
                    .filter(|&&d| keep_e[d / 2])
                    .map(|&d| new_of_old[dart_head(g, d)])
                    .collect()
            })
            .collect();
        let mut map = PlaneMap::build(&table).expect("deletion preserves a valid rotation system");
        let surviving = self.faces[self.outer].iter().copied().find(|&d| keep_e[d / 2]);
        if let Some(d) = surviving {
            let (u, v) = (dart_tail(g, d), dart_head(g, d));
            if let Some(nd) = map.dart(new_of_old[u], new_of_old[v]) {
                map.outer = map.face_of[nd];
            }
        }
        let disconnected = !map.is_connected();
        Deletion {
            map,
            old_of_new,
            disconnected,
        }
    }

    /// DOT rendering; faces are listed as comments.
    pub fn to_dot(
        &self,
        vertex_label: impl Fn(usize) -> String,
        edge_attrs: impl Fn(usize) -> Option<String>,
        comments: &[String],
    ) -> String {
        let mut out = String::from("graph G {\n");
        for c in comments {
            let _ = writeln!(out, "  // {c}");
        }
        for f in 0..self.faces.len() {
            let walk: Vec<String> = self.face_walk(f).iter().map(|v| v.to_string()).collect();
            let tag = if f == self.outer { " (outer)" } else { "" };
            let _ = writeln!(out, "  // face {f}{tag}: {}", walk.join(" "));
        }
        for v in 0..self.vertex_count() {
            let _ = writeln!(out, "  {v} [label=\"{}\"];", vertex_label(v));
        }
        for (e, &(u, v)) in self.graph.edges().iter().enumerate() {
            match edge_attrs(e) {
                Some(a) => {
                    let _ = writeln!(out, "  {u} -- {v} [{a}];");
                }
                None => {
                    let _ = writeln!(out, "  {u} -- {v};");
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Result of [`PlaneMap::subgraph_delete`].
#[derive(Debug, Clone)]
pub struct Deletion {
    pub map: PlaneMap,
    /// `old_of_new[i]` is the original id of new vertex `i`.
    pub old_of_new: Vec<usize>,
    pub disconnected: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn cycle_map(n: usize) -> PlaneMap {
        let table: Vec<Vec<usize>> = (0..n).map(|i| vec![(i + 1) % n, (i + n - 1) % n]).collect();
        PlaneMap::build(&table).unwrap()
    }

    #[test]
    fn five_cycle_has_two_pentagonal_faces() {
        let m = cycle_map(5);
        assert_eq!(m.face_count(), 2);
        assert!((0..2).all(|f| m.face_len(f) == 5));
        assert_eq!(m.validate_plane().unwrap().faces, 2);
        assert_eq!(m.girth(), Some(5));
    }

    #[test]
    fn single_vertex_is_a_sphere() {
        let m = PlaneMap::build(&[vec![]]).unwrap();
        assert_eq!(m.face_count(), 1);
        let r = m.validate_plane().unwrap();
        assert_eq!((r.vertices, r.edges, r.faces), (1, 0, 1));
        assert_eq!(m.face_walk(0), vec![0]);
    }

    #[test]
    fn malformed_rotations_are_named() {
        assert_eq!(
            PlaneMap::build(&[vec![1], vec![]]).unwrap_err(),
            MapError::DanglingTwin { from: 0, to: 1 }
        );
        assert_eq!(PlaneMap::build(&[vec![0]]).unwrap_err(), MapError::Loop(0));
        assert_eq!(
            PlaneMap::build(&[vec![1, 1], vec![0]]).unwrap_err(),
            MapError::DuplicateHalfEdge { from: 0, to: 1 }
        );
        assert_eq!(
            PlaneMap::build(&[vec![3]]).unwrap_err(),
            MapError::VertexOutOfRange { from: 0, to: 3 }
        );
    }

    #[test]
    fn disconnected_map_is_flagged() {
        let mut table: Vec<Vec<usize>> = (0..5).map(|i| vec![(i + 1) % 5, (i + 4) % 5]).collect();
        table.extend((0..5).map(|i| vec![5 + (i + 1) % 5, 5 + (i + 4) % 5]));
        let m = PlaneMap::build(&table).unwrap();
        assert_eq!(
            m.validate_plane().unwrap_err(),
            PlanarityError::Disconnected { components: 2 }
        );
    }

    #[test]
    fn path_distance_and_forest_girth() {
        let m = PlaneMap::build(&[vec![1], vec![0, 2], vec![1, 3], vec![2]]).unwrap();
        assert_eq!(m.girth(), None);
        assert_eq!(m.face_count(), 1);
        assert_eq!(m.distance(&[0], &[3]), Some(3));
        assert_eq!(m.distance(&[1, 2], &[1]), Some(0));
    }

    #[test]
    fn antipodal_distance_in_ten_cycle() {
        let m = cycle_map(10);
        assert_eq!(m.distance(&[0], &[5]), Some(5));
    }

    #[test]
    fn facial_cycle_interior_is_itself() {
        let m = cycle_map(5);
        let outer = m.outer_face();
        let inner = 1 - outer;
        let c = m.face_cycle(inner).unwrap();
        let (int, ext) = m.cycle_sides(&c).unwrap();
        assert_eq!(int.vertex_count(), 5);
        assert_eq!(int.edge_count(), 5);
        assert_eq!(ext.edge_count(), 5);
        assert!(m.is_tame(&c).unwrap());
    }

    #[test]
    fn delete_vertex_of_five_cycle() {
        let m = cycle_map(5);
        let d = m.subgraph_delete(&[0], &[]);
        assert_eq!(d.map.vertex_count(), 4);
        assert_eq!(d.map.edge_count(), 3);
        assert_eq!(d.map.face_count(), 1);
        assert!(!d.disconnected);
        assert_eq!(d.old_of_new, vec![1, 2, 3, 4]);
        let same = m.subgraph_delete(&[], &[]);
        assert_eq!(same.map.rotation_table(), m.rotation_table());
    }

    #[test]
    fn rotation_table_round_trips() {
        let table = vec![vec![1, 2, 3], vec![0], vec![0], vec![0]];
        let m = PlaneMap::build(&table).unwrap();
        assert_eq!(m.rotation_table(), table);
    }
}
