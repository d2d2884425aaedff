//! List assignments, set colorings and the definitional predicates built on
//! them: flaws, path validity, connection of the first path vertex to a flaw,
//! the forbidden set `c(G, P, L)`, and the hypothesis checkers.

use crate::color::{Color, ColorSet};
use crate::graph::Graph;
use crate::planar_map::{MapError, PathRef, PlaneMap};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One color list per vertex.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ListAssignment(pub Vec<ColorSet>);

impl ListAssignment {
    pub fn new(lists: Vec<ColorSet>) -> Self {
        ListAssignment(lists)
    }

    /// Every vertex gets `{0, ..., size - 1}`.
    pub fn uniform(n: usize, size: usize) -> Self {
        ListAssignment(vec![ColorSet::range(0, size); n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, v: usize) -> &ColorSet {
        &self.0[v]
    }

    pub fn set(&mut self, v: usize, list: ColorSet) {
        self.0[v] = list;
    }

    pub fn size(&self, v: usize) -> usize {
        self.0[v].len()
    }

    pub fn max_color(&self) -> Option<Color> {
        self.0.iter().filter_map(|l| l.max()).max()
    }

    pub fn map_colors(&self, f: impl Fn(Color) -> Color) -> ListAssignment {
        ListAssignment(self.0.iter().map(|l| l.map(&f)).collect())
    }

    pub fn restrict(&self, old_of_new: &[usize]) -> ListAssignment {
        ListAssignment(old_of_new.iter().map(|&v| self.0[v].clone()).collect())
    }
}

/// Partial assignment of color sets to vertices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SetColoring(pub Vec<Option<ColorSet>>);

impl SetColoring {
    pub fn empty(n: usize) -> Self {
        SetColoring(vec![None; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, v: usize) -> Option<&ColorSet> {
        self.0.get(v).and_then(|c| c.as_ref())
    }

    pub fn set(&mut self, v: usize, c: ColorSet) {
        self.0[v] = Some(c);
    }

    pub fn is_total(&self) -> bool {
        self.0.iter().all(Option::is_some)
    }

    pub fn assigned(&self) -> impl Iterator<Item = (usize, &ColorSet)> {
        self.0
            .iter()
            .enumerate()
            .filter_map(|(v, c)| c.as_ref().map(|c| (v, c)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ColoringViolation {
    Unassigned(usize),
    WrongSize { vertex: usize, size: usize },
    NotInList(usize),
    Conflict(usize, usize),
}

/// Checks a coloring against lists and edges. Unassigned vertices are an
/// error only when `total` is set.
pub fn check_set_coloring(
    g: &Graph,
    lists: &ListAssignment,
    a: usize,
    coloring: &SetColoring,
    total: bool,
) -> Result<(), ColoringViolation> {
    for v in 0..g.vertex_count() {
        match coloring.get(v) {
            None if total => return Err(ColoringViolation::Unassigned(v)),
            None => {}
            Some(c) => {
                if c.len() != a {
                    return Err(ColoringViolation::WrongSize {
                        vertex: v,
                        size: c.len(),
                    });
                }
                if !c.is_subset(lists.get(v)) {
                    return Err(ColoringViolation::NotInList(v));
                }
            }
        }
    }
    for &(u, v) in g.edges() {
        if let (Some(x), Some(y)) = (coloring.get(u), coloring.get(v)) {
            if !x.is_disjoint(y) {
                return Err(ColoringViolation::Conflict(u, v));
            }
        }
    }
    Ok(())
}

pub fn is_set_coloring(g: &Graph, lists: &ListAssignment, a: usize, coloring: &SetColoring) -> bool {
    check_set_coloring(g, lists, a, coloring, true).is_ok()
}

/// `|L(v)| = 2a`.
pub fn is_deficient(lists: &ListAssignment, a: usize, v: usize) -> bool {
    lists.size(v) == 2 * a
}

/// Flaw edges as `(u, v)` with `u < v`. With a path, edges touching it are
/// excluded.
pub fn flaw_edges(g: &Graph, lists: &ListAssignment, a: usize, path: Option<&PathRef>) -> Vec<(usize, usize)> {
    g.edges()
        .iter()
        .copied()
        .filter(|&(u, v)| {
            is_deficient(lists, a, u)
                && is_deficient(lists, a, v)
                && path.is_none_or(|p| !p.contains(u) && !p.contains(v))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlawInfo {
    pub edge: (usize, usize),
    /// Distance to the nearest `2a`-vertex other than the flaw's ends.
    pub to_other_deficient: Option<usize>,
    /// Distance to the nearest other flaw (minimum over endpoint pairs).
    pub to_other_flaw: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlawReport {
    pub flaws: Vec<FlawInfo>,
    pub connection: Option<Connection>,
}

pub fn flaws(g: &Graph, lists: &ListAssignment, a: usize, path: Option<&PathRef>) -> FlawReport {
    let edges = flaw_edges(g, lists, a, path);
    let flaws = edges
        .iter()
        .map(|&(u, v)| {
            let dist = g.distances_from(&[u, v], None);
            let to_other_deficient = (0..g.vertex_count())
                .filter(|&w| w != u && w != v && is_deficient(lists, a, w))
                .filter_map(|w| dist[w])
                .min();
            let to_other_flaw = edges
                .iter()
                .filter(|&&e| e != (u, v))
                .filter_map(|&(x, y)| match (dist[x], dist[y]) {
                    (Some(p), Some(q)) => Some(p.min(q)),
                    (p, q) => p.or(q),
                })
                .min();
            FlawInfo {
                edge: (u, v),
                to_other_deficient,
                to_other_flaw,
            }
        })
        .collect();
    let connection = path
        .filter(|p| !p.vertices().is_empty())
        .map(|p| connection_status(g, lists, a, p));
    FlawReport { flaws, connection }
}

/// One way the first path vertex reaches a flaw `uv` (oriented so `u` is the
/// near end).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConnectionWitness {
    Adjacent { u: usize, v: usize },
    Path { x: usize, y: usize, u: usize, v: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Connection {
    NotConnected,
    Adjacent { u: usize, v: usize },
    UniquelyConnected { x: usize, y: usize, u: usize, v: usize },
    MultiplyConnected { witnesses: Vec<ConnectionWitness> },
}

/// All adjacency edges `pu` and paths `pxyuv` witnessing that the first
/// vertex of `path` is connected to a flaw.
pub fn connection_witnesses(g: &Graph, lists: &ListAssignment, a: usize, path: &PathRef) -> Vec<ConnectionWitness> {
    let Some(p) = path.first() else {
        return Vec::new();
    };
    let flaws = flaw_edges(g, lists, a, Some(path));
    let mut out = Vec::new();
    for &(s, t) in &flaws {
        for (u, v) in [(s, t), (t, s)] {
            if g.has_edge(p, u) {
                out.push(ConnectionWitness::Adjacent { u, v });
            }
        }
    }
    let off_path = |w: usize| !path.contains(w);
    for x in g.neighbors(p) {
        if !off_path(x) || !is_deficient(lists, a, x) {
            continue;
        }
        for y in g.neighbors(x) {
            if y == p || !off_path(y) || lists.size(y) != 3 * a {
                continue;
            }
            for &(s, t) in &flaws {
                for (u, v) in [(s, t), (t, s)] {
                    let distinct = [p, x, y].iter().all(|&z| z != u && z != v);
                    if distinct && g.has_edge(y, u) {
                        out.push(ConnectionWitness::Path { x, y, u, v });
                    }
                }
            }
        }
    }
    out
}

pub fn connection_status(g: &Graph, lists: &ListAssignment, a: usize, path: &PathRef) -> Connection {
    let w = connection_witnesses(g, lists, a, path);
    match w.as_slice() {
        [] => Connection::NotConnected,
        [ConnectionWitness::Adjacent { u, v }] => Connection::Adjacent { u: *u, v: *v },
        [ConnectionWitness::Path { x, y, u, v }] => Connection::UniquelyConnected {
            x: *x,
            y: *y,
            u: *u,
            v: *v,
        },
        _ => Connection::MultiplyConnected { witnesses: w },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ForbiddenSetError {
    #[error("path has length {0}, at most 2 allowed")]
    PathTooLong(usize),
    #[error("first path vertex is connected to flaws in {0} ways")]
    MultiplyConnected(usize),
    #[error("list of vertex {0} has too few colors to choose from")]
    InsufficientColors(usize),
}

/// The set `c(G, P, L)`. Where a choice is left open the lowest colors are
/// taken.
pub fn compute_c(g: &Graph, path: &PathRef, lists: &ListAssignment, a: usize) -> Result<ColorSet, ForbiddenSetError> {
    let len = path.length();
    if len > 2 {
        return Err(ForbiddenSetError::PathTooLong(len));
    }
    if len <= 1 {
        return Ok(ColorSet::new());
    }
    match connection_status(g, lists, a, path) {
        Connection::NotConnected => Ok(ColorSet::new()),
        Connection::Adjacent { u, .. } => Ok(lists.get(u).clone()),
        Connection::UniquelyConnected { x, y, u, .. } => {
            let c1 = lists
                .get(y)
                .difference(lists.get(u))
                .lowest(a)
                .ok_or(ForbiddenSetError::InsufficientColors(y))?;
            lists
                .get(x)
                .difference(&c1)
                .lowest(a)
                .ok_or(ForbiddenSetError::InsufficientColors(x))
        }
        Connection::MultiplyConnected { witnesses } => Err(ForbiddenSetError::MultiplyConnected(witnesses.len())),
    }
}

/// Whether the color set of `p` avoids `c`. An uncolored `p` counts as disjoint.
pub fn is_pc_disjoint(coloring: &SetColoring, p: usize, c: &ColorSet) -> bool {
    coloring.get(p).is_none_or(|s| s.is_disjoint(c))
}

/// One verdict line of a hypothesis check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clause {
    pub id: String,
    pub holds: bool,
    pub witness: Vec<usize>,
    pub detail: String,
}

impl Clause {
    fn new(id: &str, holds: bool, witness: Vec<usize>, detail: impl Into<String>) -> Self {
        Clause {
            id: id.to_string(),
            holds,
            witness,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub check: String,
    pub clauses: Vec<Clause>,
}

impl HypothesisReport {
    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|c| c.holds)
    }

    pub fn failed_clauses(&self) -> impl Iterator<Item = &Clause> {
        self.clauses.iter().filter(|c| !c.holds)
    }

    pub fn clause(&self, id: &str) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.id == id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypothesisError {
    #[error("no face with index {0}")]
    NoSuchFace(usize),
    #[error("the two faces must differ")]
    SameFace,
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("list assignment has {lists} entries for {vertices} vertices")]
    ListCount { lists: usize, vertices: usize },
}

fn girth_clause(map: &PlaneMap) -> Clause {
    let girth = map.girth();
    Clause::new(
        "girth-at-least-5",
        girth.is_none_or(|g| g >= 5),
        Vec::new(),
        format!("girth {}", girth.map_or("infinite".to_string(), |g| g.to_string())),
    )
}

fn list_sizes_clause(lists: &ListAssignment, a: usize) -> Clause {
    let bad: Vec<usize> = (0..lists.len())
        .filter(|&v| lists.size(v) != 2 * a && lists.size(v) != 3 * a)
        .collect();
    Clause::new("lists-2a-or-3a", bad.is_empty(), bad, "every list has size 2a or 3a")
}

fn flaw_distance_clauses(
    g: &Graph,
    lists: &ListAssignment,
    a: usize,
    to_deficient: usize,
    to_flaw: usize,
) -> [Clause; 2] {
    let report = flaws(g, lists, a, None);
    let near_deficient: Vec<usize> = report
        .flaws
        .iter()
        .filter(|f| f.to_other_deficient.is_some_and(|d| d < to_deficient))
        .flat_map(|f| [f.edge.0, f.edge.1])
        .collect();
    let near_flaw: Vec<usize> = report
        .flaws
        .iter()
        .filter(|f| f.to_other_flaw.is_some_and(|d| d < to_flaw))
        .flat_map(|f| [f.edge.0, f.edge.1])
        .collect();
    [
        Clause::new(
            "flaw-far-from-2a-vertices",
            near_deficient.is_empty(),
            near_deficient,
            format!("each flaw at distance at least {to_deficient} from any other 2a-vertex"),
        ),
        Clause::new(
            "flaw-far-from-flaws",
            near_flaw.is_empty(),
            near_flaw,
            format!("each flaw at distance at least {to_flaw} from any other flaw"),
        ),
    ]
}

fn check_lists_len(map: &PlaneMap, lists: &ListAssignment) -> Result<(), HypothesisError> {
    if lists.len() != map.vertex_count() {
        return Err(HypothesisError::ListCount {
            lists: lists.len(),
            vertices: map.vertex_count(),
        });
    }
    Ok(())
}

fn deficient_on_faces(map: &PlaneMap, lists: &ListAssignment, a: usize, faces: &[usize], id: &str) -> Clause {
    let mut on = vec![false; map.vertex_count()];
    for &f in faces {
        for v in map.face_vertices(f) {
            on[v] = true;
        }
    }
    let off: Vec<usize> = (0..map.vertex_count())
        .filter(|&v| is_deficient(lists, a, v) && !on[v])
        .collect();
    Clause::new(id, off.is_empty(), off, "every 2a-vertex lies on a marked face")
}

/// Hypotheses of the two-face colorability theorem.
pub fn check_thm_cyl_hypotheses(
    map: &PlaneMap,
    f1: usize,
    f2: usize,
    lists: &ListAssignment,
    a: usize,
) -> Result<HypothesisReport, HypothesisError> {
    check_lists_len(map, lists)?;
    for f in [f1, f2] {
        if f >= map.face_count() {
            return Err(HypothesisError::NoSuchFace(f));
        }
    }
    if f1 == f2 {
        return Err(HypothesisError::SameFace);
    }
    let mut clauses = vec![
        girth_clause(map),
        list_sizes_clause(lists, a),
        deficient_on_faces(map, lists, a, &[f1, f2], "2a-incident-with-f1-or-f2"),
    ];
    clauses.extend(flaw_distance_clauses(map.graph(), lists, a, 3, 4));
    Ok(HypothesisReport {
        check: "thm-cyl".into(),
        clauses,
    })
}

/// Hypotheses of the one-face corollary.
pub fn check_cor_distflaws_hypotheses(
    map: &PlaneMap,
    f: usize,
    lists: &ListAssignment,
    a: usize,
) -> Result<HypothesisReport, HypothesisError> {
    check_lists_len(map, lists)?;
    if f >= map.face_count() {
        return Err(HypothesisError::NoSuchFace(f));
    }
    let mut clauses = vec![
        girth_clause(map),
        list_sizes_clause(lists, a),
        deficient_on_faces(map, lists, a, &[f], "2a-incident-with-f"),
    ];
    clauses.extend(flaw_distance_clauses(map.graph(), lists, a, 3, 4));
    Ok(HypothesisReport {
        check: "cor-distflaws".into(),
        clauses,
    })
}

/// Whether `path` lies on the boundary of the outer face.
pub fn path_on_outer_face(map: &PlaneMap, path: &PathRef) -> Result<bool, MapError> {
    let edges = path.edge_ids(map.graph())?;
    let outer = map.outer_face();
    let fv = map.face_vertices(outer);
    let fe = map.face_edges(outer);
    Ok(
        path.vertices().iter().all(|v| fv.binary_search(v).is_ok())
            && edges.iter().all(|e| fe.binary_search(e).is_ok()),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidityError {
    #[error("path is not contained in the outer face boundary")]
    PathNotOnOuterFace,
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Solver(#[from] crate::solver::SolveError),
}

fn validity_clauses(
    map: &PlaneMap,
    path: &PathRef,
    lists: &ListAssignment,
    a: usize,
) -> Result<Vec<Clause>, ValidityError> {
    if !path_on_outer_face(map, path)? {
        return Err(ValidityError::PathNotOnOuterFace);
    }
    let outer = map.face_vertices(map.outer_face());
    let on_outer = |v: &usize| outer.binary_search(v).is_ok();
    let interior_bad: Vec<usize> = (0..map.vertex_count())
        .filter(|v| !on_outer(v) && lists.size(*v) != 3 * a)
        .collect();
    let outer_bad: Vec<usize> = outer
        .iter()
        .copied()
        .filter(|&v| !path.contains(v) && lists.size(v) != 2 * a && lists.size(v) != 3 * a)
        .collect();
    let pg = path.as_subgraph(map.graph())?;
    let colorable = crate::solver::solve_within(map.graph(), &pg, lists, a)?.is_some();
    Ok(vec![
        Clause::new(
            "interior-lists-3a",
            interior_bad.is_empty(),
            interior_bad,
            "interior vertices have lists of size 3a",
        ),
        Clause::new(
            "outer-lists-2a-or-3a",
            outer_bad.is_empty(),
            outer_bad,
            "outer non-path vertices have lists of size 2a or 3a",
        ),
        Clause::new(
            "path-colorable",
            colorable,
            path.vertices().to_vec(),
            "the path is (L:a)-colorable",
        ),
    ])
}

/// `(a, P)`-validity of a list assignment.
pub fn is_ap_valid(map: &PlaneMap, path: &PathRef, lists: &ListAssignment, a: usize) -> Result<bool, ValidityError> {
    Ok(validity_clauses(map, path, lists, a)?.iter().all(|c| c.holds))
}

/// Hypotheses of the precolored-path theorem with at most two flaws.
pub fn check_thm_2flaws_hypotheses(
    map: &PlaneMap,
    path: &PathRef,
    lists: &ListAssignment,
    a: usize,
) -> Result<HypothesisReport, HypothesisError> {
    check_lists_len(map, lists)?;
    let g = map.graph();
    path.edge_ids(g)?;
    let mut clauses = vec![girth_clause(map)];
    let len = path.length();
    clauses.push(Clause::new(
        "path-length-at-most-2",
        len <= 2,
        path.vertices().to_vec(),
        format!("path length {len}"),
    ));
    match validity_clauses(map, path, lists, a) {
        Ok(cs) => clauses.extend(cs),
        Err(ValidityError::PathNotOnOuterFace) => clauses.push(Clause::new(
            "path-on-outer-face",
            false,
            path.vertices().to_vec(),
            "the path lies on the outer face boundary",
        )),
        Err(ValidityError::Map(e)) => return Err(e.into()),
        Err(ValidityError::Solver(e)) => clauses.push(Clause::new("path-colorable", false, Vec::new(), e.to_string())),
    }
    let report = flaws(g, lists, a, Some(path));
    let flaw_vertices: Vec<usize> = report.flaws.iter().flat_map(|f| [f.edge.0, f.edge.1]).collect();
    clauses.push(Clause::new(
        "at-most-two-flaws",
        report.flaws.len() <= 2,
        flaw_vertices,
        format!("{} flaws", report.flaws.len()),
    ));
    let close: Vec<usize> = report
        .flaws
        .iter()
        .filter(|f| f.to_other_flaw.is_some_and(|d| d < 3))
        .flat_map(|f| [f.edge.0, f.edge.1])
        .collect();
    clauses.push(Clause::new(
        "flaws-at-distance-3",
        close.is_empty(),
        close,
        "distance between flaws is at least three",
    ));
    if len == 2 {
        let multiple = matches!(report.connection, Some(Connection::MultiplyConnected { .. }));
        clauses.push(Clause::new(
            "unique-connection",
            !multiple,
            path.first().into_iter().collect(),
            "the first path vertex is not connected to a flaw or connected in a unique way",
        ));
    }
    Ok(HypothesisReport {
        check: "thm-2flaws".into(),
        clauses,
    })
}

/// Vertices of the facial cycle with a `2a`-list that have degree at least
/// three or lie on no 5-face.
pub fn rogue_vertices(
    map: &PlaneMap,
    face: usize,
    lists: &ListAssignment,
    a: usize,
) -> Result<Vec<usize>, HypothesisError> {
    if face >= map.face_count() {
        return Err(HypothesisError::NoSuchFace(face));
    }
    let g = map.graph();
    Ok(map
        .face_vertices(face)
        .into_iter()
        .filter(|&u| {
            is_deficient(lists, a, u) && (g.degree(u) >= 3 || map.faces_at(u).iter().all(|&f| map.face_len(f) != 5))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_graph(n: usize) -> Graph {
        Graph::from_edges(n, &(0..n - 1).map(|i| (i, i + 1)).collect::<Vec<_>>()).unwrap()
    }

    fn sets(v: &[&[Color]]) -> ListAssignment {
        ListAssignment(v.iter().map(|s| s.iter().copied().collect()).collect())
    }

    #[test]
    fn five_cycle_two_fold_coloring() {
        let g = Graph::from_edges(5, &(0..5).map(|i| (i, (i + 1) % 5)).collect::<Vec<_>>()).unwrap();
        let lists = ListAssignment::uniform(5, 6);
        let col = SetColoring(
            [[1, 2], [3, 4], [1, 2], [3, 4], [5, 0]]
                .iter()
                .map(|c| Some(ColorSet::from(*c)))
                .collect(),
        );
        assert!(is_set_coloring(&g, &lists, 2, &col));
    }

    #[test]
    fn conflict_is_reported() {
        let g = path_graph(2);
        let lists = ListAssignment::uniform(2, 1);
        let col = SetColoring(vec![Some(ColorSet::from([0])); 2]);
        assert_eq!(
            check_set_coloring(&g, &lists, 1, &col, true),
            Err(ColoringViolation::Conflict(0, 1))
        );
        assert!(is_set_coloring(
            &Graph::empty(0),
            &ListAssignment::default(),
            1,
            &SetColoring::default()
        ));
    }

    #[test]
    fn flaw_excludes_path_vertices() {
        let g = path_graph(3);
        let lists = sets(&[&[1, 2], &[1, 2], &[1, 2]]);
        assert_eq!(flaw_edges(&g, &lists, 1, None).len(), 2);
        let p = PathRef(vec![0]);
        assert_eq!(flaw_edges(&g, &lists, 1, Some(&p)), vec![(1, 2)]);
    }

    #[test]
    fn unique_connection_and_c() {
        // P = 0 1 2 with p0 = 0, then 0 - x - y - u - v with x = 3, y = 4, flaw uv = 56
        let g = Graph::from_edges(7, &[(0, 1), (1, 2), (0, 3), (3, 4), (4, 5), (5, 6)]).unwrap();
        let lists = sets(&[
            &[7, 8, 9],
            &[7, 8, 9],
            &[7, 8, 9],
            &[4, 5],
            &[1, 2, 3],
            &[1, 2],
            &[6, 7],
        ]);
        let p = PathRef(vec![0, 1, 2]);
        assert_eq!(
            connection_status(&g, &lists, 1, &p),
            Connection::UniquelyConnected { x: 3, y: 4, u: 5, v: 6 }
        );
        assert_eq!(compute_c(&g, &p, &lists, 1).unwrap(), ColorSet::from([4]));
        assert_eq!(compute_c(&g, &PathRef(vec![0, 1]), &lists, 1).unwrap(), ColorSet::new());
    }

    #[test]
    fn adjacent_connection_returns_list() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (0, 3), (3, 4)]).unwrap();
        let lists = sets(&[&[1, 2, 3], &[1, 2, 3], &[1, 2, 3], &[4, 5], &[5, 6]]);
        let p = PathRef(vec![0, 1, 2]);
        assert_eq!(
            connection_status(&g, &lists, 1, &p),
            Connection::Adjacent { u: 3, v: 4 }
        );
        assert_eq!(compute_c(&g, &p, &lists, 1).unwrap(), ColorSet::from([4, 5]));
    }

    #[test]
    fn pc_disjointness() {
        let col = SetColoring(vec![Some(ColorSet::from([1]))]);
        assert!(!is_pc_disjoint(&col, 0, &ColorSet::from([1, 2])));
        assert!(is_pc_disjoint(&col, 0, &ColorSet::new()));
        let col3 = SetColoring(vec![Some(ColorSet::from([3]))]);
        assert!(is_pc_disjoint(&col3, 0, &ColorSet::from([1, 2])));
    }
}
