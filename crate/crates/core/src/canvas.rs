//! Canvases `(a, G, S, L)`: potentials, sub- and supercanvases, singular
//! shapes, configurations near `S`, relaxations and theorem verifiers.
//!
//! A canvas lives inside a host plane map: both `G` and `S` are subgraphs of
//! the host, so `T|H` and `T/H` keep vertex and edge ids.

use crate::color::ColorSet;
use crate::coloring::{ListAssignment, SetColoring};
use crate::graph::{Graph, Subgraph};
use crate::planar_map::{CycleRef, PlaneMap};
use crate::solver::{is_critical_within, CriticalityError, CriticalityReport};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::sync::Arc;
use thiserror::Error;

/// Common denominator of `α = 33/88` and `ε = 1/88`.
pub const SCALE: i64 = 88;
pub const ALPHA88: i64 = 33;
pub const EPS88: i64 = 1;
/// `88 · 3`, the lower bound on `d` for non-singular critical canvases.
pub const CANVAS_BOUND88: i64 = 264;
/// `(1 + ε) / ε`.
pub const HYPCYL_FACTOR: i64 = (SCALE + EPS88) / EPS88;

pub fn alpha() -> Ratio<i64> {
    Ratio::new(ALPHA88, SCALE)
}

pub fn epsilon() -> Ratio<i64> {
    Ratio::new(EPS88, SCALE)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanvasError {
    #[error("a must be positive")]
    ZeroA,
    #[error("{lists} lists for {vertices} vertices")]
    ListCount { lists: usize, vertices: usize },
    #[error("the marked subgraph is not contained in the canvas graph")]
    NotContained,
    #[error("the canvas graph has girth {0}, below 5")]
    Girth(usize),
    #[error("vertex {vertex} outside the marked subgraph has {size} colors, fewer than {need}")]
    ShortList { vertex: usize, size: usize, need: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Criticality(#[from] CriticalityError),
}

#[derive(Debug, Clone)]
pub struct Canvas {
    pub a: usize,
    pub map: Arc<PlaneMap>,
    /// The canvas graph `G` inside the host.
    pub g: Subgraph,
    pub s: Subgraph,
    /// Indexed by host vertex.
    pub lists: ListAssignment,
}

impl Canvas {
    pub fn new(
        a: usize,
        map: Arc<PlaneMap>,
        g: Subgraph,
        s: Subgraph,
        lists: ListAssignment,
    ) -> Result<Canvas, CanvasError> {
        if a == 0 {
            return Err(CanvasError::ZeroA);
        }
        let host = map.graph();
        if lists.len() != host.vertex_count() {
            return Err(CanvasError::ListCount {
                lists: lists.len(),
                vertices: host.vertex_count(),
            });
        }
        if !s.is_subgraph_of(&g) || !s.is_well_formed(host) || !g.is_well_formed(host) {
            return Err(CanvasError::NotContained);
        }
        if let Some(k) = g.to_graph(host).0.girth() {
            if k < 5 {
                return Err(CanvasError::Girth(k));
            }
        }
        for v in g.vertices().filter(|&v| !s.has_vertex(v)) {
            if lists.size(v) < 3 * a {
                return Err(CanvasError::ShortList {
                    vertex: v,
                    size: lists.size(v),
                    need: 3 * a,
                });
            }
        }
        Ok(Canvas { a, map, g, s, lists })
    }

    /// The canvas on the whole host map.
    pub fn on_map(a: usize, map: Arc<PlaneMap>, s: Subgraph, lists: ListAssignment) -> Result<Canvas, CanvasError> {
        let g = Subgraph::full(map.graph());
        Canvas::new(a, map, g, s, lists)
    }

    pub fn host(&self) -> &Graph {
        self.map.graph()
    }

    pub fn outside_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.g.vertices().filter(|&v| !self.s.has_vertex(v))
    }

    pub fn outside_edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.g.edges().filter(|&e| !self.s.has_edge(e))
    }

    /// Neighbors of `v` in `G`.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.host()
            .incident(v)
            .iter()
            .filter(|&&(_, e)| self.g.has_edge(e))
            .map(|&(w, _)| w)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.g.degree(self.host(), v)
    }

    /// Neighbors of an outside vertex that lie in `V(S)`.
    pub fn s_neighbors(&self, v: usize) -> Vec<usize> {
        self.neighbors(v).filter(|&w| self.s.has_vertex(w)).collect()
    }

    fn has_s_neighbor(&self, v: usize) -> bool {
        self.neighbors(v).any(|w| self.s.has_vertex(w))
    }

    /// `c(S)`.
    pub fn s_components(&self) -> usize {
        self.s.component_count(self.host())
    }

    pub fn criticality(&self) -> Result<CriticalityReport, CriticalityError> {
        is_critical_within(self.host(), &self.g, &self.s, &self.lists, self.a)
    }

    pub fn is_critical(&self) -> Result<bool, CriticalityError> {
        match self.criticality() {
            Ok(r) => Ok(r.critical),
            Err(CriticalityError::SEqualsG) => Ok(false),
            Err(e) => Err(e),
        }
    }

    fn check_between(&self, h: &Subgraph) -> Result<(), CanvasError> {
        if self.s.is_subgraph_of(h) && h.is_subgraph_of(&self.g) && h.is_well_formed(self.host()) {
            Ok(())
        } else {
            Err(CanvasError::NotContained)
        }
    }

    /// `T|H = (a, H, S, L)`.
    pub fn sub(&self, h: &Subgraph) -> Result<Canvas, CanvasError> {
        self.check_between(h)?;
        Ok(Canvas {
            g: h.clone(),
            ..self.clone()
        })
    }

    /// `T/H = (a, G, H, L)`.
    pub fn sup(&self, h: &Subgraph) -> Result<Canvas, CanvasError> {
        self.check_between(h)?;
        Ok(Canvas {
            s: h.clone(),
            ..self.clone()
        })
    }

    pub fn potentials(&self) -> PotentialReport {
        let v = self.outside_vertices().count();
        let mut e = 0;
        let mut q = 0;
        for id in self.outside_edges() {
            e += 1;
            let (x, y) = self.host().edge(id);
            q += usize::from(self.s.has_vertex(x)) + usize::from(self.s.has_vertex(y));
        }
        PotentialReport::new(v, e, q)
    }

    /// Both derived canvases and the cross terms.
    pub fn sub_super(&self, h: &Subgraph) -> Result<SubSuper, CanvasError> {
        let sub = self.sub(h)?;
        let sup = self.sup(h)?;
        let host = self.host();
        // q_T(H, S): edges of G outside H at vertices of H not in S
        let q_cross: usize = h
            .vertices()
            .filter(|&v| !self.s.has_vertex(v))
            .map(|v| {
                host.incident(v)
                    .iter()
                    .filter(|&&(_, e)| self.g.has_edge(e) && !h.has_edge(e))
                    .count()
            })
            .sum();
        let dt88 = sub.potentials().d88 + ALPHA88 * q_cross as i64;
        Ok(SubSuper {
            sub,
            sup,
            q_cross,
            dt88,
        })
    }

    /// Residuals of the additivity identities for `H`; all zero when they hold.
    pub fn additivity(&self, h: &Subgraph) -> Result<Additivity, CanvasError> {
        let ss = self.sub_super(h)?;
        let t = self.potentials();
        let a = ss.sub.potentials();
        let b = ss.sup.potentials();
        let i = |x: usize| x as i64;
        Ok(Additivity {
            def: t.def88 - a.def88 - b.def88,
            v: i(t.v) - i(a.v) - i(b.v),
            e: i(t.e) - i(a.e) - i(b.e),
            q: i(t.q) - i(a.q) - i(b.q) + i(ss.q_cross),
            d: t.d88 - ss.dt88 - b.d88,
            s_subadditive: t.s88 <= a.s88 + b.s88,
            d_superadditive: t.d88 >= a.d88 + b.d88,
        })
    }

    /// The value of `88 d` predicted for canvases with at most one vertex
    /// outside `S`.
    pub fn small_canvas_d88(&self) -> Option<i64> {
        let p = self.potentials();
        let e = p.e as i64;
        match p.v {
            0 => Some((3 * SCALE - 2 * ALPHA88) * e),
            1 => {
                let v = self.outside_vertices().next()?;
                Some((3 * SCALE - 2 * ALPHA88) * e - 5 * SCALE + ALPHA88 * self.degree(v) as i64 - EPS88)
            }
            _ => None,
        }
    }

    /// Structural shape of the whole canvas.
    pub fn shape(&self) -> Shape {
        let outside: Vec<usize> = self.outside_vertices().collect();
        let extra: Vec<usize> = self.outside_edges().collect();
        let host = self.host();
        if outside.is_empty() && extra.len() == 1 {
            return Shape::Chord;
        }
        if let ([x], 3) = (outside.as_slice(), extra.len()) {
            let all_spokes = extra.iter().all(|&e| {
                let (u, v) = host.edge(e);
                let other = if u == *x {
                    v
                } else if v == *x {
                    u
                } else {
                    return false;
                };
                self.s.has_vertex(other)
            });
            if all_spokes {
                return Shape::Tripod;
            }
        }
        Shape::NonSingular
    }

    /// Shape plus normality, decided by scanning the subcanvases that add a
    /// single edge or a single vertex with three spokes to `S`.
    pub fn classify(&self) -> Classification {
        let shape = self.shape();
        let normal = self.singular_subcanvases().next().is_none();
        Classification { shape, normal }
    }

    /// Every `H` with `T|H` singular.
    pub fn singular_subcanvases(&self) -> impl Iterator<Item = Subgraph> + '_ {
        let host = self.host();
        let chords = self.outside_edges().filter_map(move |e| {
            let (u, v) = host.edge(e);
            (self.s.has_vertex(u) && self.s.has_vertex(v)).then(|| {
                let mut h = self.s.clone();
                h.add_edge(host, e);
                h
            })
        });
        let tripods = self.outside_vertices().flat_map(move |x| {
            let spokes: Vec<usize> = host
                .incident(x)
                .iter()
                .filter(|&&(w, e)| self.g.has_edge(e) && self.s.has_vertex(w))
                .map(|&(_, e)| e)
                .collect();
            choose3(&spokes).into_iter().map(move |three| {
                let mut h = self.s.clone();
                for e in three {
                    h.add_edge(host, e);
                }
                h
            })
        });
        chords
            .chain(tripods)
            .filter(move |h| self.sub(h).is_ok_and(|t| t.shape() != Shape::NonSingular))
    }

    /// `γ(T) = (v(T), e(T), Σ_{v ∉ S} |L(v)|)`.
    pub fn gamma(&self) -> (usize, usize, usize) {
        let p = self.potentials();
        let lists = self.outside_vertices().map(|v| self.lists.size(v)).sum();
        (p.v, p.e, lists)
    }

    pub fn find_configurations(&self) -> Vec<ConfigurationHit> {
        let host = self.host();
        let mut hits = Vec::new();
        for e in self.outside_edges() {
            let (u, v) = host.edge(e);
            if self.s.has_vertex(u) && self.s.has_vertex(v) {
                hits.push(ConfigurationHit::ChordEdge { edge: e });
            }
        }
        let outside: Vec<usize> = self.outside_vertices().collect();
        for &v in &outside {
            let ns = self.s_neighbors(v);
            if ns.len() >= 2 {
                hits.push(ConfigurationHit::TwoNeighborVertex {
                    vertex: v,
                    s_neighbors: ns,
                });
            }
        }
        for path in self.outside_paths(5) {
            let k = path.len() - 1;
            let candidates = [
                ConfigurationHit::NeighboringPath { path: path.clone() },
                ConfigurationHit::SemiNeighboring3 { path: path.clone() },
                ConfigurationHit::SemiNeighboring5 { path: path.clone() },
            ];
            for hit in candidates {
                let oriented = match &hit {
                    // a neighboring path is reported once, from its smaller end
                    ConfigurationHit::NeighboringPath { path } => k >= 1 && path[0] < path[k],
                    _ => true,
                };
                if oriented && hit.holds(self) {
                    hits.push(hit);
                }
            }
        }
        for &c in &outside {
            let nbrs: Vec<usize> = self.neighbors(c).filter(|w| !self.s.has_vertex(*w)).collect();
            for leaves in choose3(&nbrs) {
                let hit = ConfigurationHit::NeighboringClaw { center: c, leaves };
                if hit.holds(self) {
                    hits.push(hit);
                }
            }
        }
        hits
    }

    /// Simple paths of `G − V(S)` with 1 to `max_len + 1` vertices, in both
    /// directions.
    fn outside_paths(&self, max_len: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        for v in self.outside_vertices() {
            path.push(v);
            self.extend_paths(&mut path, max_len, &mut out);
            path.pop();
        }
        out
    }

    fn extend_paths(&self, path: &mut Vec<usize>, max_len: usize, out: &mut Vec<Vec<usize>>) {
        out.push(path.clone());
        if path.len() > max_len {
            return;
        }
        let last = *path.last().unwrap();
        let next: Vec<usize> = self
            .neighbors(last)
            .filter(|w| !self.s.has_vertex(*w) && !path.contains(w))
            .collect();
        for w in next {
            path.push(w);
            self.extend_paths(path, max_len, out);
            path.pop();
        }
    }

    /// Neighboring 2-paths each of whose vertices has exactly one neighbor
    /// in `S`, as `(path, spokes)`.
    pub fn relaxable_paths(&self) -> Vec<([usize; 3], [usize; 3])> {
        let mut out = Vec::new();
        for path in self.outside_paths(2) {
            if path.len() != 3 || path[0] > path[2] {
                continue;
            }
            let spokes: Vec<Vec<usize>> = path.iter().map(|&p| self.s_neighbors(p)).collect();
            if spokes.iter().all(|n| n.len() == 1) {
                out.push(([path[0], path[1], path[2]], [spokes[0][0], spokes[1][0], spokes[2][0]]));
            }
        }
        out
    }

    /// `T/H` with `H = S + P + {p_i u_i}`.
    pub fn relax(&self, p: [usize; 3]) -> Result<Canvas, RelaxError> {
        let host = self.host();
        let edge = |x: usize, y: usize| host.edge_id(x, y).filter(|&e| self.g.has_edge(e));
        let hit = ConfigurationHit::NeighboringPath { path: p.to_vec() };
        if !hit.holds(self) {
            return Err(RelaxError::NotNeighboring(p));
        }
        let mut h = self.s.clone();
        for &x in &p[..3] {
            let ns = self.s_neighbors(x);
            let [u] = ns.as_slice() else {
                return Err(RelaxError::SpokeNotUnique(x));
            };
            h.add_edge(host, edge(x, *u).expect("spoke is an edge"));
        }
        h.add_edge(host, edge(p[0], p[1]).expect("path edge"));
        h.add_edge(host, edge(p[1], p[2]).expect("path edge"));
        Ok(self.sup(&h).expect("S ⊆ H ⊆ G"))
    }

    /// All `k`-relaxations with `k ≤ depth`, each with the paths relaxed, in
    /// lexicographic order of those paths; duplicates of the same marked
    /// subgraph are kept once.
    pub fn relaxations(&self, depth: usize) -> Vec<(Vec<[usize; 3]>, Canvas)> {
        let mut out: Vec<(Vec<[usize; 3]>, Canvas)> = vec![(Vec::new(), self.clone())];
        let mut frontier = 0;
        for _ in 0..depth {
            let end = out.len();
            for i in frontier..end {
                let (paths, t) = out[i].clone();
                for (p, _) in t.relaxable_paths() {
                    let r = t.relax(p).expect("relaxable path");
                    if out.iter().any(|(_, o)| o.s == r.s) {
                        continue;
                    }
                    let mut ps = paths.clone();
                    ps.push(p);
                    out.push((ps, r));
                }
            }
            frontier = end;
        }
        out
    }

    /// Finds which outcome (a)–(e) of the configuration lemma holds.
    pub fn verify_lemma_neipaths(&self) -> Result<NeipathsOutcome, CanvasError> {
        self.require_two_components()?;
        let hits = self.find_configurations();
        let pick = |want: fn(&ConfigurationHit) -> bool| hits.iter().find(|h| want(h)).cloned();
        type Want = fn(&ConfigurationHit) -> bool;
        let order: [(char, Want); 5] = [
            ('a', |h| matches!(h, ConfigurationHit::ChordEdge { .. })),
            ('b', |h| matches!(h, ConfigurationHit::TwoNeighborVertex { .. })),
            (
                'c',
                |h| matches!(h, ConfigurationHit::NeighboringPath { path } if path.len() == 3),
            ),
            ('d', |h| matches!(h, ConfigurationHit::SemiNeighboring3 { .. })),
            ('e', |h| matches!(h, ConfigurationHit::SemiNeighboring5 { .. })),
        ];
        for (label, want) in order {
            if let Some(hit) = pick(want) {
                return Ok(NeipathsOutcome { outcome: label, hit });
            }
        }
        Err(CanvasError::Precondition("no configuration outcome found".into()))
    }

    /// Finds which outcome (1)–(5) of the relaxation lemma holds, searching
    /// `(≤2)`-relaxations for the last two.
    pub fn verify_lemma_neiparel(&self) -> Result<NeiparelOutcome, CanvasError> {
        self.require_two_components()?;
        let hits = self.find_configurations();
        let first = [
            (
                1u8,
                hits.iter().find(|h| matches!(h, ConfigurationHit::ChordEdge { .. })),
            ),
            (
                2,
                hits.iter()
                    .find(|h| matches!(h, ConfigurationHit::TwoNeighborVertex { .. })),
            ),
            (
                3,
                hits.iter()
                    .find(|h| matches!(h, ConfigurationHit::NeighboringClaw { .. })),
            ),
        ];
        for (outcome, hit) in first {
            if let Some(hit) = hit {
                return Ok(NeiparelOutcome {
                    outcome,
                    relaxed: Vec::new(),
                    hit: hit.clone(),
                });
            }
        }
        let relaxations = self.relaxations(2);
        for outcome in [4u8, 5] {
            for (relaxed, t) in &relaxations {
                let found = t.find_configurations().into_iter().find(|h| match outcome {
                    4 => matches!(h, ConfigurationHit::SemiNeighboring3 { .. }),
                    _ => matches!(h, ConfigurationHit::SemiNeighboring5 { .. }),
                });
                if let Some(hit) = found {
                    return Ok(NeiparelOutcome {
                        outcome,
                        relaxed: relaxed.clone(),
                        hit,
                    });
                }
            }
        }
        Err(CanvasError::Precondition("no relaxation outcome found".into()))
    }

    fn require_two_components(&self) -> Result<(), CanvasError> {
        match self.s_components() {
            c if c <= 2 => Ok(()),
            c => Err(CanvasError::Precondition(format!("S has {c} components"))),
        }
    }

    /// `ψ_L` and `A_T` when the canvas is nice.
    pub fn nice_view(&self) -> Option<NiceView> {
        let host = self.host();
        let a = self.a;
        let mut psi = SetColoring::empty(host.vertex_count());
        for v in self.s.vertices() {
            if self.lists.size(v) != a {
                return None;
            }
            psi.set(v, self.lists.get(v).clone());
        }
        for e in self.s.edges() {
            let (u, v) = host.edge(e);
            if !self.lists.get(u).is_disjoint(self.lists.get(v)) {
                return None;
            }
        }
        let mut available = vec![None; host.vertex_count()];
        for z in self.outside_vertices() {
            if self.lists.size(z) != 3 * a {
                return None;
            }
            let ns = self.s_neighbors(z);
            if let [v] = ns.as_slice() {
                if !self.lists.get(*v).is_subset(self.lists.get(z)) {
                    return None;
                }
            }
            let blocked = ns.iter().fold(ColorSet::new(), |acc, &u| acc.union(self.lists.get(u)));
            available[z] = Some(self.lists.get(z).difference(&blocked));
        }
        Some(NiceView { psi, available })
    }

    /// The bound for a canvas already known to be critical.
    pub fn canvas_bound(&self) -> Result<CanvasBound, CanvasError> {
        if self.shape() != Shape::NonSingular {
            return Err(CanvasError::Precondition("the canvas is singular".into()));
        }
        self.require_two_components()?;
        let d88 = self.potentials().d88;
        Ok(CanvasBound {
            d88,
            holds: d88 >= CANVAS_BOUND88,
        })
    }

    /// Checks criticality, then `d(T) ≥ 3`.
    pub fn verify_thm_canvas(&self) -> Result<CanvasBound, CanvasError> {
        if !self.is_critical()? {
            return Err(CanvasError::Precondition("the canvas is not critical".into()));
        }
        self.canvas_bound()
    }

    /// Checks the criticality inheritance of `T|H` and `T/H` for a critical
    /// `T`; returns the verdicts of the claims whose hypotheses apply.
    pub fn verify_sub_super_criticality(&self, h: &Subgraph) -> Result<(Option<bool>, Option<bool>), CanvasError> {
        let ss = self.sub_super(h)?;
        let host = self.host();
        let closed = h.vertices().filter(|&v| !self.s.has_vertex(v)).all(|v| {
            host.incident(v)
                .iter()
                .all(|&(_, e)| !self.g.has_edge(e) || h.has_edge(e))
        });
        let sub = if *h != self.s && closed {
            Some(ss.sub.is_critical()?)
        } else {
            None
        };
        let sup = if *h != self.g {
            Some(ss.sup.is_critical()?)
        } else {
            None
        };
        Ok((sub, sup))
    }
}

fn choose3(items: &[usize]) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for i in 0..items.len() {
        for j in i + 1..items.len() {
            for k in j + 1..items.len() {
                out.push([items[i], items[j], items[k]]);
            }
        }
    }
    out
}

pub fn gamma_compare(t1: &Canvas, t2: &Canvas) -> Ordering {
    t1.gamma().cmp(&t2.gamma())
}

/// Potentials of a canvas, scaled by 88 so that every value is an integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PotentialReport {
    pub v: usize,
    pub e: usize,
    pub q: usize,
    pub def88: i64,
    pub s88: i64,
    pub d88: i64,
}

impl PotentialReport {
    pub fn new(v: usize, e: usize, q: usize) -> Self {
        let (vi, ei, qi) = (v as i64, e as i64, q as i64);
        let def88 = SCALE * (3 * ei - 5 * vi);
        let s88 = EPS88 * vi + ALPHA88 * qi;
        PotentialReport {
            v,
            e,
            q,
            def88,
            s88,
            d88: def88 - s88,
        }
    }

    pub fn def(&self) -> Ratio<i64> {
        Ratio::new(self.def88, SCALE)
    }

    pub fn s(&self) -> Ratio<i64> {
        Ratio::new(self.s88, SCALE)
    }

    pub fn d(&self) -> Ratio<i64> {
        Ratio::new(self.d88, SCALE)
    }
}

impl std::fmt::Display for PotentialReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "v={} e={} q={} def={} s={} d={} (d88={})",
            self.v,
            self.e,
            self.q,
            self.def(),
            self.s(),
            self.d(),
            self.d88
        )
    }
}

#[derive(Debug, Clone)]
pub struct SubSuper {
    pub sub: Canvas,
    pub sup: Canvas,
    /// `q_T(H, S)`.
    pub q_cross: usize,
    /// `88 · d_T(T|H)`.
    pub dt88: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Additivity {
    pub def: i64,
    pub v: i64,
    pub e: i64,
    pub q: i64,
    pub d: i64,
    pub s_subadditive: bool,
    pub d_superadditive: bool,
}

impl Additivity {
    pub fn exact(&self) -> bool {
        [self.def, self.v, self.e, self.q, self.d] == [0; 5] && self.s_subadditive && self.d_superadditive
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    Chord,
    Tripod,
    NonSingular,
}

impl std::fmt::Display for Shape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Shape::Chord => "chord",
            Shape::Tripod => "tripod",
            Shape::NonSingular => "non-singular",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub shape: Shape,
    pub normal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ConfigurationHit {
    /// An edge outside `S` with both ends in `V(S)`.
    ChordEdge {
        edge: usize,
    },
    /// A vertex outside `S` with at least two neighbors in `S`.
    TwoNeighborVertex {
        vertex: usize,
        s_neighbors: Vec<usize>,
    },
    NeighboringPath {
        path: Vec<usize>,
    },
    SemiNeighboring3 {
        path: Vec<usize>,
    },
    SemiNeighboring5 {
        path: Vec<usize>,
    },
    NeighboringClaw {
        center: usize,
        leaves: [usize; 3],
    },
}

impl ConfigurationHit {
    /// Re-checks the defining clauses against `t`.
    pub fn holds(&self, t: &Canvas) -> bool {
        let host = t.host();
        let outside = |v: usize| t.g.has_vertex(v) && !t.s.has_vertex(v);
        let is_path = |p: &[usize]| {
            !p.is_empty()
                && p.iter().all(|&v| outside(v))
                && p.windows(2)
                    .all(|w| host.edge_id(w[0], w[1]).is_some_and(|e| t.g.has_edge(e)))
                && (0..p.len()).all(|i| !p[..i].contains(&p[i]))
        };
        let touches = |p: &[usize], idx: &[usize]| idx.iter().all(|&i| t.has_s_neighbor(p[i]));
        match self {
            ConfigurationHit::ChordEdge { edge } => {
                let (u, v) = host.edge(*edge);
                t.g.has_edge(*edge) && !t.s.has_edge(*edge) && t.s.has_vertex(u) && t.s.has_vertex(v)
            }
            ConfigurationHit::TwoNeighborVertex { vertex, s_neighbors } => {
                outside(*vertex) && s_neighbors.len() >= 2 && *s_neighbors == t.s_neighbors(*vertex)
            }
            ConfigurationHit::NeighboringPath { path } => {
                is_path(path) && touches(path, &(0..path.len()).collect::<Vec<_>>())
            }
            ConfigurationHit::SemiNeighboring3 { path } => {
                path.len() == 4 && is_path(path) && touches(path, &[0, 1, 3])
            }
            ConfigurationHit::SemiNeighboring5 { path } => {
                path.len() == 6 && is_path(path) && touches(path, &[0, 1, 4, 5])
            }
            ConfigurationHit::NeighboringClaw { center, leaves } => {
                outside(*center)
                    && t.has_s_neighbor(*center)
                    && leaves.iter().all(|&u| {
                        outside(u)
                            && u != *center
                            && t.has_s_neighbor(u)
                            && host.edge_id(*center, u).is_some_and(|e| t.g.has_edge(e))
                    })
                    && leaves[0] != leaves[1]
                    && leaves[1] != leaves[2]
                    && leaves[0] != leaves[2]
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelaxError {
    #[error("{0:?} is not a neighboring 2-path")]
    NotNeighboring([usize; 3]),
    #[error("vertex {0} does not have a unique neighbor in S")]
    SpokeNotUnique(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeipathsOutcome {
    pub outcome: char,
    pub hit: ConfigurationHit,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeiparelOutcome {
    pub outcome: u8,
    /// Paths relaxed, in order, to reach the canvas holding the witness.
    pub relaxed: Vec<[usize; 3]>,
    pub hit: ConfigurationHit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceView {
    pub psi: SetColoring,
    /// `A_T(v)` for vertices outside `S`.
    pub available: Vec<Option<ColorSet>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanvasBound {
    pub d88: i64,
    pub holds: bool,
}

/// The face bounded by the cycle, if any.
pub fn bounded_face(map: &PlaneMap, c: &CycleRef) -> Option<usize> {
    bounded_faces(map, c).into_iter().next()
}

/// Every face bounded by the cycle; two when the map is the cycle itself.
pub fn bounded_faces(map: &PlaneMap, c: &CycleRef) -> Vec<usize> {
    let Ok(mut edges) = c.edge_ids(map.graph()) else {
        return Vec::new();
    };
    edges.sort_unstable();
    (0..map.face_count())
        .filter(|&f| map.face_len(f) == c.len() && map.face_edges(f) == edges)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypcylReport {
    pub vertices: usize,
    pub edges: usize,
    pub c1: usize,
    pub c2: usize,
    /// `3|E| − 5|V| + |C1| + |C2|`.
    pub euler: i64,
    pub euler_holds: bool,
    /// `89 (|C1| + |C2|)`.
    pub bound: usize,
    pub bound_holds: bool,
    pub critical: Option<bool>,
    pub d88: Option<i64>,
    /// Assertions that failed on a critical instance.
    pub violations: Vec<String>,
}

/// Computes both sides of the Euler inequality and the vertex bound for two
/// facial cycles; with `check_criticality` the canvas `(a, G, C1 ∪ C2, L)`
/// is tested and, when critical, both inequalities are asserted.
pub fn verify_hypcyl(
    map: &Arc<PlaneMap>,
    c1: &CycleRef,
    c2: &CycleRef,
    lists: &ListAssignment,
    a: usize,
    check_criticality: bool,
) -> Result<HypcylReport, CanvasError> {
    let g = map.graph();
    let f1 = bounded_face(map, c1).ok_or_else(|| CanvasError::Precondition("C1 does not bound a face".into()))?;
    let f2 = bounded_faces(map, c2);
    if f2.is_empty() {
        return Err(CanvasError::Precondition("C2 does not bound a face".into()));
    }
    if f2.iter().all(|&f| f == f1) {
        return Err(CanvasError::Precondition("C1 and C2 bound the same face".into()));
    }
    if let Some(k) = g.girth() {
        if k < 5 {
            return Err(CanvasError::Girth(k));
        }
    }
    let (n, m) = (g.vertex_count(), g.edge_count());
    let euler = 3 * m as i64 - 5 * n as i64 + (c1.len() + c2.len()) as i64;
    let bound = HYPCYL_FACTOR as usize * (c1.len() + c2.len());
    let mut report = HypcylReport {
        vertices: n,
        edges: m,
        c1: c1.len(),
        c2: c2.len(),
        euler,
        euler_holds: euler <= 0,
        bound,
        bound_holds: n <= bound,
        critical: None,
        d88: None,
        violations: Vec::new(),
    };
    if check_criticality {
        let s = c1
            .as_subgraph(g)
            .map_err(|e| CanvasError::Precondition(e.to_string()))?
            .union(
                &c2.as_subgraph(g)
                    .map_err(|e| CanvasError::Precondition(e.to_string()))?,
            );
        let t = Canvas::on_map(a, map.clone(), s, lists.clone())?;
        let critical = t.is_critical()?;
        report.critical = Some(critical);
        report.d88 = Some(t.potentials().d88);
        if critical {
            if !report.euler_holds {
                report.violations.push(format!("euler {euler} > 0"));
            }
            if !report.bound_holds {
                report.violations.push(format!("{n} vertices exceed {bound}"));
            }
            if t.shape() == Shape::NonSingular && t.potentials().d88 < CANVAS_BOUND88 {
                report
                    .violations
                    .push(format!("d88 {} < {}", t.potentials().d88, CANVAS_BOUND88));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map_of(n: usize, edges: &[(usize, usize)]) -> Arc<PlaneMap> {
        // rotation: neighbors in increasing order is planar for the small
        // trees and cycles used here
        let g = Graph::from_edges(n, edges).unwrap();
        let rot: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v).collect()).collect();
        Arc::new(PlaneMap::build(&rot).unwrap())
    }

    fn canvas(n: usize, edges: &[(usize, usize)], s_vertices: &[usize], s_edges: &[(usize, usize)]) -> Canvas {
        let map = map_of(n, edges);
        let g = map.graph();
        let s = Subgraph::from_parts(
            g,
            s_vertices.iter().copied(),
            s_edges.iter().map(|&(u, v)| g.edge_id(u, v).unwrap()),
        );
        Canvas::on_map(1, map.clone(), s, ListAssignment::uniform(n, 3)).unwrap()
    }

    #[test]
    fn constants() {
        assert_eq!(HYPCYL_FACTOR, 89);
        assert_eq!(
            (Ratio::from_integer(1) + epsilon()) / epsilon(),
            Ratio::from_integer(89)
        );
        assert_eq!(alpha(), Ratio::new(3, 8));
    }

    #[test]
    fn chord_and_tripod_values() {
        let chord = canvas(2, &[(0, 1)], &[0, 1], &[]);
        assert_eq!(chord.shape(), Shape::Chord);
        assert_eq!(chord.potentials().d88, 198);
        assert_eq!(chord.potentials().d(), Ratio::new(9, 4));

        let tripod = canvas(4, &[(0, 3), (1, 3), (2, 3)], &[0, 1, 2], &[]);
        assert_eq!(tripod.shape(), Shape::Tripod);
        assert_eq!(tripod.potentials().d88, 252);
        assert_eq!(tripod.potentials().d(), Ratio::new(63, 22));
    }

    #[test]
    fn whole_graph_marked_has_zero_potential() {
        let t = canvas(3, &[(0, 1), (1, 2)], &[0, 1, 2], &[(0, 1), (1, 2)]);
        assert_eq!(t.potentials(), PotentialReport::new(0, 0, 0));
        assert_eq!(t.potentials().d88, 0);
    }

    #[test]
    fn small_canvas_closed_forms() {
        let tripod = canvas(4, &[(0, 3), (1, 3), (2, 3)], &[0, 1, 2], &[]);
        assert_eq!(tripod.small_canvas_d88(), Some(tripod.potentials().d88));
        let pendant = canvas(2, &[(0, 1)], &[0], &[]);
        assert_eq!(pendant.small_canvas_d88(), Some(pendant.potentials().d88));
    }

    #[test]
    fn two_neighbor_vertex_is_non_singular() {
        let t = canvas(3, &[(0, 2), (1, 2)], &[0, 1], &[]);
        assert_eq!(t.shape(), Shape::NonSingular);
        assert!(t.classify().normal);
        let hits = t.find_configurations();
        assert!(hits.contains(&ConfigurationHit::TwoNeighborVertex {
            vertex: 2,
            s_neighbors: vec![0, 1]
        }));
    }

    #[test]
    fn tripod_inside_makes_it_abnormal() {
        let t = canvas(5, &[(0, 3), (1, 3), (2, 3), (3, 4)], &[0, 1, 2], &[]);
        assert_eq!(t.shape(), Shape::NonSingular);
        assert!(!t.classify().normal);
    }

    #[test]
    fn neighboring_path_and_relaxation() {
        // S = {0,1,2}, path 3-4-5 with spokes 0-3, 1-4, 2-5
        let t = canvas(6, &[(0, 3), (1, 4), (2, 5), (3, 4), (4, 5)], &[0, 1, 2], &[]);
        assert!(t
            .find_configurations()
            .contains(&ConfigurationHit::NeighboringPath { path: vec![3, 4, 5] }));
        let r = t.relax([3, 4, 5]).unwrap();
        let (before, after) = (t.potentials(), r.potentials());
        assert_eq!(before.v - after.v, 3);
        assert_eq!(r.s.vertex_count() - t.s.vertex_count(), 3);
        assert_eq!(r.s.edge_count() - t.s.edge_count(), 5);
        assert!(t.s.is_subgraph_of(&r.s));
        assert_eq!(t.relaxations(2).len(), 2);
    }

    #[test]
    fn relax_rejects_non_neighboring() {
        let t = canvas(6, &[(0, 3), (2, 5), (3, 4), (4, 5)], &[0, 2], &[]);
        assert_eq!(t.relax([3, 4, 5]).unwrap_err(), RelaxError::NotNeighboring([3, 4, 5]));
    }

    #[test]
    fn gamma_order() {
        let t = canvas(6, &[(0, 3), (1, 4), (2, 5), (3, 4), (4, 5)], &[0, 1, 2], &[]);
        let r = t.relax([3, 4, 5]).unwrap();
        assert_eq!(gamma_compare(&t, &t), Ordering::Equal);
        assert_eq!(gamma_compare(&r, &t), Ordering::Less);
    }

    #[test]
    fn additivity_on_a_path() {
        let t = canvas(6, &[(0, 3), (1, 4), (2, 5), (3, 4), (4, 5)], &[0, 1, 2], &[]);
        let g = t.host();
        let h = Subgraph::from_parts(g, [0, 1, 2, 3], [g.edge_id(0, 3).unwrap()]);
        let r = t.additivity(&h).unwrap();
        assert!(r.exact(), "{r:?}");
        let ss = t.sub_super(&h).unwrap();
        assert_eq!(ss.q_cross, 1);
    }

    #[test]
    fn nice_view_available_sets() {
        let map = map_of(3, &[(0, 1), (1, 2)]);
        let g = map.graph();
        let s = Subgraph::from_parts(g, [0], []);
        let lists = ListAssignment::new(vec![
            ColorSet::from([0]),
            ColorSet::from([0, 1, 2]),
            ColorSet::from([3, 4, 5]),
        ]);
        let t = Canvas::on_map(1, map.clone(), s, lists).unwrap();
        let view = t.nice_view().unwrap();
        assert_eq!(view.available[1].as_ref().unwrap().len(), 2);
        assert_eq!(view.available[2].as_ref().unwrap().len(), 3);
    }

    #[test]
    fn chord_is_excluded_from_the_bound() {
        let chord = canvas(2, &[(0, 1)], &[0, 1], &[]);
        assert!(matches!(chord.canvas_bound(), Err(CanvasError::Precondition(_))));
        assert!(chord.potentials().d88 < CANVAS_BOUND88);
    }
}
