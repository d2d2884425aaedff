//! JSON instance files and the binary planar-code import.
//!
//! An instance is a rotation system (neighbors of each vertex in cyclic
//! order), one color list per vertex, and optional marks: an outer face, up
//! to two special faces, a path and a marked subgraph. Faces are named by a
//! half-edge `[from, to]` on their boundary walk.

use crate::color::{Color, ColorSet};
use crate::coloring::ListAssignment;
use crate::graph::Subgraph;
use crate::planar_map::{MapError, PathRef, PlaneMap};
use serde::{Deserialize, Serialize};
use std::sync::Arc;
use thiserror::Error;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub version: u32,
    pub a: usize,
    pub rotation: Vec<Vec<usize>>,
    pub lists: Vec<Vec<Color>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer: Option<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub faces: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marked: Option<Marked>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Marked {
    pub vertices: Vec<usize>,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("version: expected {FORMAT_VERSION}, found {0}")]
    Version(u32),
    #[error("a: must be positive")]
    ZeroA,
    #[error("rotation: {0}")]
    Rotation(MapError),
    #[error("lists: expected {expected} lists, found {found}")]
    ListCount { expected: usize, found: usize },
    #[error("lists[{vertex}]: color {color} repeated")]
    RepeatedColor { vertex: usize, color: Color },
    #[error("{field}: half-edge {from}->{to} is not an edge")]
    NoSuchHalfEdge { field: String, from: usize, to: usize },
    #[error("faces: at most two faces may be marked, found {0}")]
    TooManyFaces(usize),
    #[error("path: {0}")]
    Path(String),
    #[error("marked: {0}")]
    Marked(String),
    #[error("planar code: {0}")]
    PlanarCode(String),
}

/// A validated instance.
#[derive(Debug, Clone)]
pub struct Instance {
    pub a: usize,
    pub map: Arc<PlaneMap>,
    pub lists: ListAssignment,
    pub faces: Vec<usize>,
    pub path: Option<PathRef>,
    pub marked: Option<Subgraph>,
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<InstanceFile, InstanceError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn validate(&self) -> Result<Instance, InstanceError> {
        if self.version != FORMAT_VERSION {
            return Err(InstanceError::Version(self.version));
        }
        if self.a == 0 {
            return Err(InstanceError::ZeroA);
        }
        let map = PlaneMap::build(&self.rotation).map_err(InstanceError::Rotation)?;
        let n = map.vertex_count();
        if self.lists.len() != n {
            return Err(InstanceError::ListCount {
                expected: n,
                found: self.lists.len(),
            });
        }
        let mut lists = Vec::with_capacity(n);
        for (v, l) in self.lists.iter().enumerate() {
            let set: ColorSet = l.iter().copied().collect();
            if set.len() != l.len() {
                let mut seen = std::collections::HashSet::new();
                let color = *l.iter().find(|c| !seen.insert(**c)).expect("a repeat");
                return Err(InstanceError::RepeatedColor { vertex: v, color });
            }
            lists.push(set);
        }
        let face_of = |field: &str, [from, to]: [usize; 2], map: &PlaneMap| {
            map.face_of_half_edge(from, to)
                .map_err(|_| InstanceError::NoSuchHalfEdge {
                    field: field.to_string(),
                    from,
                    to,
                })
        };
        let map = match self.outer {
            Some(h) => {
                let f = face_of("outer", h, &map)?;
                map.with_outer_face(f).expect("existing face")
            }
            None => map,
        };
        if self.faces.len() > 2 {
            return Err(InstanceError::TooManyFaces(self.faces.len()));
        }
        let faces = self
            .faces
            .iter()
            .enumerate()
            .map(|(i, &h)| face_of(&format!("faces[{i}]"), h, &map))
            .collect::<Result<Vec<_>, _>>()?;
        let g = map.graph();
        let path = match &self.path {
            None => None,
            Some(p) => {
                let p = PathRef(p.clone());
                p.edge_ids(g).map_err(|e| InstanceError::Path(e.to_string()))?;
                Some(p)
            }
        };
        let marked = match &self.marked {
            None => None,
            Some(m) => {
                let mut s = Subgraph::empty(g);
                for &v in &m.vertices {
                    if v >= n {
                        return Err(InstanceError::Marked(format!("vertex {v} out of range")));
                    }
                    s.add_vertex(v);
                }
                for &[u, v] in &m.edges {
                    let e = g
                        .edge_id(u, v)
                        .ok_or_else(|| InstanceError::Marked(format!("{u}-{v} is not an edge")))?;
                    s.add_edge(g, e);
                }
                Some(s)
            }
        };
        Ok(Instance {
            a: self.a,
            map: Arc::new(map),
            lists: ListAssignment::new(lists),
            faces,
            path,
            marked,
        })
    }
}

impl Instance {
    /// The file form; faces are named by their first dart.
    pub fn to_file(&self) -> InstanceFile {
        let g = self.map.graph();
        let handle = |f: usize| self.map.face_handle(f).map(|(u, v)| [u, v]);
        InstanceFile {
            version: FORMAT_VERSION,
            a: self.a,
            rotation: self.map.rotation_table(),
            lists: self.lists.0.iter().map(|l| l.iter().collect()).collect(),
            outer: handle(self.map.outer_face()),
            faces: self.faces.iter().filter_map(|&f| handle(f)).collect(),
            path: self.path.as_ref().map(|p| p.0.clone()),
            marked: self.marked.as_ref().map(|s| Marked {
                vertices: s.vertices().collect(),
                edges: s
                    .edges()
                    .map(|e| {
                        let (u, v) = g.edge(e);
                        [u, v]
                    })
                    .collect(),
            }),
        }
    }

    pub fn new(a: usize, map: Arc<PlaneMap>, lists: ListAssignment) -> Instance {
        Instance {
            a,
            map,
            lists,
            faces: Vec::new(),
            path: None,
            marked: None,
        }
    }
}

const PLANAR_CODE_HEADER: &[u8] = b">>planar_code<<";

/// Reads rotation systems from planar code: an optional `>>planar_code<<`
/// header, then per graph a vertex count byte followed by, for each vertex,
/// its 1-based neighbors in cyclic order terminated by 0.
pub fn read_planar_code(bytes: &[u8]) -> Result<Vec<Vec<Vec<usize>>>, InstanceError> {
    let mut i = if bytes.starts_with(PLANAR_CODE_HEADER) {
        PLANAR_CODE_HEADER.len()
    } else {
        0
    };
    let mut out = Vec::new();
    let err = |m: &str| InstanceError::PlanarCode(m.to_string());
    while i < bytes.len() {
        let n = bytes[i] as usize;
        i += 1;
        if n == 0 {
            return Err(err("two-byte vertex counts are not supported"));
        }
        let mut rot = Vec::with_capacity(n);
        for _ in 0..n {
            let mut nbrs = Vec::new();
            loop {
                let &b = bytes.get(i).ok_or_else(|| err("truncated input"))?;
                i += 1;
                if b == 0 {
                    break;
                }
                let w = b as usize;
                if w > n {
                    return Err(err(&format!("neighbor {w} exceeds vertex count {n}")));
                }
                nbrs.push(w - 1);
            }
            rot.push(nbrs);
        }
        out.push(rot);
    }
    Ok(out)
}

/// Writes rotation systems in planar code with the header.
pub fn write_planar_code(graphs: &[Vec<Vec<usize>>]) -> Vec<u8> {
    let mut out = PLANAR_CODE_HEADER.to_vec();
    for rot in graphs {
        out.push(rot.len() as u8);
        for nbrs in rot {
            out.extend(nbrs.iter().map(|&w| (w + 1) as u8));
            out.push(0);
        }
    }
    out
}
