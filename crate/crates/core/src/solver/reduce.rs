//! Preprocessing reductions with replayable traces.

use super::{Compiled, SolveError};
use crate::color::ColorSet;
use crate::coloring::{is_deficient, ListAssignment, SetColoring};
use crate::graph::{Graph, Subgraph};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

/// An instance with stable vertex ids: the active part of a host graph,
/// lists, and a partial precoloring.
#[derive(Debug, Clone)]
pub struct WorkingProblem {
    pub graph: Graph,
    pub active: Subgraph,
    pub lists: ListAssignment,
    pub a: usize,
    pub fixed: SetColoring,
}

impl WorkingProblem {
    pub fn new(graph: Graph, lists: ListAssignment, a: usize) -> Self {
        let active = Subgraph::full(&graph);
        let fixed = SetColoring::empty(graph.vertex_count());
        WorkingProblem {
            graph,
            active,
            lists,
            a,
            fixed,
        }
    }

    pub fn with_fixed(mut self, fixed: SetColoring) -> Self {
        self.fixed = fixed;
        self
    }

    fn compiled(&self, within: &Subgraph) -> Result<Compiled, SolveError> {
        let mut c = Compiled::new(&self.graph, Some(within), &self.lists, self.a)?;
        for (v, set) in self.fixed.assigned() {
            if within.has_vertex(v) {
                c.fix(v, set);
            }
        }
        Ok(c)
    }

    /// A coloring of the active vertices respecting the precoloring.
    pub fn solve(&self) -> Result<Option<SetColoring>, SolveError> {
        self.solve_until(None)
    }

    pub fn solve_until(&self, deadline: Option<std::time::Instant>) -> Result<Option<SetColoring>, SolveError> {
        let mut c = self.compiled(&self.active)?;
        c.set_deadline(deadline);
        c.run(self.graph.vertex_count())
    }

    fn active_degree(&self, v: usize) -> usize {
        self.active.degree(&self.graph, v)
    }

    fn active_neighbors(&self, v: usize) -> Vec<usize> {
        self.graph
            .incident(v)
            .iter()
            .filter(|&&(_, e)| self.active.has_edge(e))
            .map(|&(w, _)| w)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReductionStep {
    /// `vertex` had a list of at least `(deg + 1) a` colors.
    Greedy {
        vertex: usize,
        neighbors: Vec<usize>,
        list: ColorSet,
    },
    /// The flaw `uv` was colored and deleted; neighbor lists were shrunk.
    Flaw {
        u: usize,
        v: usize,
        color_u: ColorSet,
        color_v: ColorSet,
        shrunk: Vec<(usize, ColorSet)>,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
}

impl ReductionTrace {
    /// Replays the trace backwards, turning a coloring of the reduced
    /// instance into one of the original.
    pub fn lift(&self, coloring: &SetColoring, a: usize) -> SetColoring {
        let mut out = coloring.clone();
        for step in self.steps.iter().rev() {
            match step {
                ReductionStep::Greedy {
                    vertex,
                    neighbors,
                    list,
                } => {
                    let taken = neighbors
                        .iter()
                        .filter_map(|&w| out.get(w))
                        .fold(ColorSet::new(), |acc, c| acc.union(c));
                    let c = list.difference(&taken).lowest(a).expect("greedy room");
                    out.set(*vertex, c);
                }
                ReductionStep::Flaw {
                    u, v, color_u, color_v, ..
                } => {
                    out.set(*u, color_u.clone());
                    out.set(*v, color_v.clone());
                }
            }
        }
        out
    }
}

/// Deletes one uncolored vertex `v` with `|L(v)| ≥ (deg(v) + 1) a`.
pub fn reduce_greedy_vertex(p: &WorkingProblem) -> Option<(WorkingProblem, ReductionStep)> {
    let v = p
        .active
        .vertices()
        .find(|&v| p.fixed.get(v).is_none() && p.lists.size(v) >= (p.active_degree(v) + 1) * p.a)?;
    let step = ReductionStep::Greedy {
        vertex: v,
        neighbors: p.active_neighbors(v),
        list: p.lists.get(v).clone(),
    };
    let mut q = p.clone();
    q.active.remove_vertex(&q.graph, v);
    Some((q, step))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlawRefusal {
    #[error("edge {0}-{1} is not an active flaw")]
    NotAFlaw(usize, usize),
    #[error("vertex {0} is precolored")]
    Precolored(usize),
    #[error("neighbor {0} is adjacent to both ends of the flaw")]
    CommonNeighbor(usize),
    #[error("neighbors {0} and {1} of the flaw are adjacent")]
    NeighborsAdjacent(usize, usize),
    #[error("neighbor {0} is adjacent to another 2a-vertex")]
    NeighborNearDeficient(usize),
    #[error("neighbor {0} is within distance 2 of another flaw")]
    NeighborNearFlaw(usize),
    #[error("neighbor {0} would keep fewer than 2a colors")]
    ShortList(usize),
}

/// Colors the flaw `uv` with the lowest available colors, deletes it, and
/// shrinks each neighbor's list to `2a` colors avoiding its deleted
/// neighbor's set. Refuses unless the neighborhood conditions hold: the
/// neighbors are uncolored, independent, not adjacent to other `2a`-vertices,
/// and at distance at least three from other flaws.
pub fn reduce_flaw(p: &WorkingProblem, u: usize, v: usize) -> Result<(WorkingProblem, ReductionStep), FlawRefusal> {
    let g = &p.graph;
    let a = p.a;
    let edge = g.edge_id(u, v).filter(|&e| p.active.has_edge(e));
    if edge.is_none() || !is_deficient(&p.lists, a, u) || !is_deficient(&p.lists, a, v) {
        return Err(FlawRefusal::NotAFlaw(u, v));
    }
    for x in [u, v] {
        if p.fixed.get(x).is_some() {
            return Err(FlawRefusal::Precolored(x));
        }
    }
    let mut nbrs: Vec<(usize, usize)> = Vec::new();
    for z in [u, v] {
        for w in p.active_neighbors(z) {
            if w == u || w == v {
                continue;
            }
            if nbrs.iter().any(|&(x, _)| x == w) {
                return Err(FlawRefusal::CommonNeighbor(w));
            }
            nbrs.push((w, z));
        }
    }
    for &(w, _) in &nbrs {
        if p.fixed.get(w).is_some() {
            return Err(FlawRefusal::Precolored(w));
        }
        for x in p.active_neighbors(w) {
            if x == u || x == v {
                continue;
            }
            if nbrs.iter().any(|&(y, _)| y == x) {
                return Err(FlawRefusal::NeighborsAdjacent(w.min(x), w.max(x)));
            }
            if is_deficient(&p.lists, a, x) {
                return Err(FlawRefusal::NeighborNearDeficient(w));
            }
        }
    }
    let other_flaws: Vec<(usize, usize)> = p
        .active
        .edges()
        .map(|e| g.edge(e))
        .filter(|&(x, y)| {
            (x, y) != (u.min(v), u.max(v)) && is_deficient(&p.lists, a, x) && is_deficient(&p.lists, a, y)
        })
        .collect();
    for &(w, _) in &nbrs {
        let d = g.distances_from(&[w], Some(&p.active));
        if other_flaws
            .iter()
            .any(|&(x, y)| d[x].is_some_and(|k| k < 3) || d[y].is_some_and(|k| k < 3))
        {
            return Err(FlawRefusal::NeighborNearFlaw(w));
        }
    }
    let color_u = p.lists.get(u).lowest(a).expect("2a list");
    let color_v = p.lists.get(v).difference(&color_u).lowest(a).expect("2a list");
    let mut q = p.clone();
    let mut shrunk = Vec::new();
    for &(w, z) in &nbrs {
        let used = if z == u { &color_u } else { &color_v };
        let list = p
            .lists
            .get(w)
            .difference(used)
            .lowest(2 * a)
            .ok_or(FlawRefusal::ShortList(w))?;
        shrunk.push((w, p.lists.get(w).clone()));
        q.lists.set(w, list);
    }
    q.active.remove_vertex(g, u);
    q.active.remove_vertex(g, v);
    Ok((
        q,
        ReductionStep::Flaw {
            u,
            v,
            color_u,
            color_v,
            shrunk,
        },
    ))
}

/// Blocks (maximal 2-connected pieces, bridges, isolated vertices) of the
/// active graph and its cut vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutDecomposition {
    pub blocks: Vec<Subgraph>,
    pub cut_vertices: Vec<usize>,
}

/// Splits the active graph at its cut vertices; `None` when there is none.
pub fn decompose_cut(p: &WorkingProblem) -> Option<CutDecomposition> {
    let g = &p.graph;
    let n = g.vertex_count();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut is_cut = vec![false; n];
    let mut blocks: Vec<Subgraph> = Vec::new();
    let mut edge_stack: Vec<usize> = Vec::new();
    let mut time = 0;
    for root in p.active.vertices() {
        if disc[root] != usize::MAX {
            continue;
        }
        if p.active_degree(root) == 0 {
            disc[root] = time;
            time += 1;
            blocks.push(Subgraph::from_parts(g, [root], []));
            continue;
        }
        // iterative DFS: (vertex, parent edge, next incidence index)
        let mut stack: Vec<(usize, Option<usize>, usize)> = vec![(root, None, 0)];
        disc[root] = time;
        low[root] = time;
        time += 1;
        let mut root_children = 0;
        while let Some(&mut (x, pe, ref mut i)) = stack.last_mut() {
            let inc = g.incident(x);
            if *i < inc.len() {
                let (y, e) = inc[*i];
                *i += 1;
                if !p.active.has_edge(e) || Some(e) == pe {
                    continue;
                }
                if disc[y] == usize::MAX {
                    edge_stack.push(e);
                    disc[y] = time;
                    low[y] = time;
                    time += 1;
                    if x == root {
                        root_children += 1;
                    }
                    stack.push((y, Some(e), 0));
                } else if disc[y] < disc[x] {
                    edge_stack.push(e);
                    low[x] = low[x].min(disc[y]);
                }
            } else {
                stack.pop();
                if let Some(&(parent, _, _)) = stack.last() {
                    low[parent] = low[parent].min(low[x]);
                    if low[x] >= disc[parent] {
                        if parent != root {
                            is_cut[parent] = true;
                        }
                        let pe = pe.unwrap();
                        let mut block = Subgraph::empty(g);
                        while let Some(e) = edge_stack.pop() {
                            block.add_edge(g, e);
                            if e == pe {
                                break;
                            }
                        }
                        blocks.push(block);
                    }
                }
            }
        }
        if root_children > 1 {
            is_cut[root] = true;
        }
    }
    let cut_vertices: Vec<usize> = (0..n).filter(|&v| is_cut[v]).collect();
    (!cut_vertices.is_empty()).then_some(CutDecomposition { blocks, cut_vertices })
}

/// Solves block by block: each cut vertex is limited to the colorings that
/// extend into everything hanging below it, then the blocks are colored top
/// down. Exact; falls back to a direct solve without cut vertices.
pub fn solve_by_blocks(p: &WorkingProblem) -> Result<Option<SetColoring>, SolveError> {
    let Some(dec) = decompose_cut(p) else {
        return p.solve();
    };
    let g = &p.graph;
    let n = g.vertex_count();
    let is_cut: Vec<bool> = (0..n).map(|v| dec.cut_vertices.binary_search(&v).is_ok()).collect();
    let mut blocks_at: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (b, block) in dec.blocks.iter().enumerate() {
        for v in block.vertices() {
            blocks_at[v].push(b);
        }
    }
    let base = |v: usize| -> Vec<ColorSet> {
        match p.fixed.get(v) {
            Some(c) => vec![c.clone()],
            None => p.lists.get(v).subsets(p.a),
        }
    };
    let solve_block = |b: usize, restrict: &HashMap<usize, Vec<ColorSet>>| -> Result<Option<SetColoring>, SolveError> {
        let mut c = p.compiled(&dec.blocks[b])?;
        for (&v, cands) in restrict {
            if dec.blocks[b].has_vertex(v) {
                c.restrict(v, Some(cands));
            }
        }
        c.run(n)
    };

    // orient the block-cut forest
    let mut parent_cut: Vec<Option<usize>> = vec![None; dec.blocks.len()];
    let mut seen = vec![false; dec.blocks.len()];
    let mut order: Vec<usize> = Vec::new();
    let mut roots = Vec::new();
    for r in 0..dec.blocks.len() {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        roots.push(r);
        let mut queue = std::collections::VecDeque::from([r]);
        while let Some(b) = queue.pop_front() {
            order.push(b);
            for c in dec.blocks[b].vertices().filter(|&v| is_cut[v]) {
                if Some(c) == parent_cut[b] {
                    continue;
                }
                for &child in &blocks_at[c] {
                    if !seen[child] {
                        seen[child] = true;
                        parent_cut[child] = Some(c);
                        queue.push_back(child);
                    }
                }
            }
        }
    }
    let child_cuts = |b: usize| -> Vec<usize> {
        dec.blocks[b]
            .vertices()
            .filter(|&v| is_cut[v] && Some(v) != parent_cut[b])
            .collect()
    };

    // bottom-up: feasible colorings of each cut vertex for the part below it
    let mut feasible: HashMap<usize, Vec<ColorSet>> = HashMap::new();
    for &b in order.iter().rev() {
        let Some(c) = parent_cut[b] else { continue };
        let below: HashMap<usize, Vec<ColorSet>> =
            child_cuts(b).into_iter().map(|x| (x, feasible[&x].clone())).collect();
        let current = feasible.remove(&c).unwrap_or_else(|| base(c));
        let mut keep = Vec::new();
        for sigma in current {
            let mut r = below.clone();
            r.insert(c, vec![sigma.clone()]);
            if solve_block(b, &r)?.is_some() {
                keep.push(sigma);
            }
        }
        feasible.insert(c, keep);
    }

    // top-down stitching
    let mut out = SetColoring::empty(n);
    for &b in &order {
        let mut r: HashMap<usize, Vec<ColorSet>> =
            child_cuts(b).into_iter().map(|x| (x, feasible[&x].clone())).collect();
        if let Some(c) = parent_cut[b] {
            r.insert(c, vec![out.get(c).expect("parent colored first").clone()]);
        }
        match solve_block(b, &r)? {
            Some(col) => {
                for (v, set) in col.assigned() {
                    out.set(v, set.clone());
                }
            }
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::is_set_coloring;

    #[test]
    fn greedy_removes_low_degree_vertices() {
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let p = WorkingProblem::new(g, ListAssignment::uniform(4, 3), 1);
        let (q, step) = reduce_greedy_vertex(&p).unwrap();
        assert!(matches!(step, ReductionStep::Greedy { vertex: 1, .. }));
        assert_eq!(q.active.vertex_count(), 3);
        let center_only = {
            let mut q = p.clone();
            for v in 1..4 {
                q.active.remove_vertex(&q.graph, v);
            }
            q
        };
        assert!(reduce_greedy_vertex(&center_only).is_some());
    }

    #[test]
    fn degree_three_with_3a_stays() {
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let mut lists = ListAssignment::uniform(4, 3);
        for v in 1..4 {
            lists.set(v, ColorSet::from([0]));
        }
        let p = WorkingProblem::new(g, lists, 1);
        assert!(reduce_greedy_vertex(&p).is_none());
    }

    #[test]
    fn isolated_flaw_reduces_to_nothing() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let p = WorkingProblem::new(g.clone(), ListAssignment::uniform(2, 2), 1);
        let (q, step) = reduce_flaw(&p, 0, 1).unwrap();
        assert_eq!(q.active.vertex_count(), 0);
        let trace = ReductionTrace { steps: vec![step] };
        let col = trace.lift(&SetColoring::empty(2), 1);
        assert!(is_set_coloring(&g, &p.lists, 1, &col));
    }

    #[test]
    fn flaw_near_deficient_vertex_is_refused() {
        // flaw 0-1, neighbor 2 of 1 is adjacent to the 2a-vertex 3
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let lists = ListAssignment::new(vec![
            ColorSet::from([0, 1]),
            ColorSet::from([0, 1]),
            ColorSet::from([0, 1, 2]),
            ColorSet::from([0, 1]),
        ]);
        let p = WorkingProblem::new(g, lists, 1);
        assert_eq!(
            reduce_flaw(&p, 0, 1).unwrap_err(),
            FlawRefusal::NeighborNearDeficient(2)
        );
    }

    #[test]
    fn two_pentagons_sharing_a_vertex() {
        let e = [
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 4),
            (4, 0),
            (0, 5),
            (5, 6),
            (6, 7),
            (7, 8),
            (8, 0),
        ];
        let g = Graph::from_edges(9, &e).unwrap();
        let p = WorkingProblem::new(g.clone(), ListAssignment::uniform(9, 3), 1);
        let d = decompose_cut(&p).unwrap();
        assert_eq!(d.blocks.len(), 2);
        assert_eq!(d.cut_vertices, vec![0]);
        let col = solve_by_blocks(&p).unwrap().unwrap();
        assert!(is_set_coloring(&g, &p.lists, 1, &col));
    }

    #[test]
    fn tree_splits_into_edges() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        let p = WorkingProblem::new(g, ListAssignment::uniform(5, 2), 1);
        let d = decompose_cut(&p).unwrap();
        assert_eq!(d.blocks.len(), 4);
        assert!(d.blocks.iter().all(|b| b.edge_count() == 1));
    }

    #[test]
    fn two_connected_is_a_no_op() {
        let e: Vec<_> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        let g = Graph::from_edges(5, &e).unwrap();
        let p = WorkingProblem::new(g, ListAssignment::uniform(5, 3), 1);
        assert!(decompose_cut(&p).is_none());
    }
}
