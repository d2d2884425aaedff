//! Criticality with respect to a precolored subgraph.
//!
//! `G` is `(a, L, S)`-critical when every proper subgraph `H ⊇ S` admits a
//! coloring of `S` that extends to `H` but not to `G`. A witness for `H` is
//! also one for every subgraph of `H` containing `S`, so it suffices to check
//! the maximal proper subgraphs: `G - e` for edges outside `S` and `G - v` for
//! vertices outside `S` with no edges.

use super::{extends, Compiled, SolveError};
use crate::color::{Color, ColorSet};
use crate::coloring::{ListAssignment, SetColoring};
use crate::graph::{Graph, Subgraph};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::ops::ControlFlow;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MaximalSubgraph {
    MinusEdge(usize),
    MinusVertex(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalityReport {
    pub critical: bool,
    /// For each witnessed maximal subgraph, a coloring of `S` extending to it
    /// but not to `G`.
    pub witnesses: Vec<(MaximalSubgraph, SetColoring)>,
    pub unwitnessed: Vec<MaximalSubgraph>,
    pub colorings_examined: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CriticalityError {
    #[error("the marked subgraph equals the whole graph")]
    SEqualsG,
    #[error("the marked subgraph is not contained in the graph")]
    NotSubgraph,
    #[error("the graph is (L:a)-colorable")]
    Colorable,
    #[error("every coloring of the marked subgraph extends")]
    EveryColoringExtends,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Colors whose occurrence sets (the vertices whose list holds them) agree
/// are interchangeable by a list-preserving permutation.
fn color_classes(lists: &ListAssignment, vertices: impl Iterator<Item = usize>) -> HashMap<Color, usize> {
    let mut occ: HashMap<Color, Vec<usize>> = HashMap::new();
    for v in vertices {
        for c in lists.get(v).iter() {
            occ.entry(c).or_default().push(v);
        }
    }
    let mut classes: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut out = HashMap::new();
    let mut keys: Vec<_> = occ.into_iter().collect();
    keys.sort();
    for (c, o) in keys {
        let n = classes.len();
        let id = *classes.entry(o).or_insert(n);
        out.insert(c, id);
    }
    out
}

/// Enumerates colorings of `order` (a list of vertices of `s`) that respect
/// the edges of `s` among them, one per orbit of list-preserving color
/// permutations that act within occurrence classes.
pub(crate) fn for_each_partial_coloring(
    g: &Graph,
    within: &Subgraph,
    s: &Subgraph,
    lists: &ListAssignment,
    a: usize,
    order: &[usize],
    mut f: impl FnMut(&[ColorSet]) -> ControlFlow<()>,
) {
    let class_of = color_classes(lists, within.vertices());
    let mut pos = vec![usize::MAX; g.vertex_count()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    // earlier neighbors through edges of s
    let earlier: Vec<Vec<usize>> = order
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            g.incident(v)
                .iter()
                .filter(|&&(w, e)| s.has_edge(e) && pos[w] < i)
                .map(|&(w, _)| pos[w])
                .collect()
        })
        .collect();
    let candidates: Vec<Vec<ColorSet>> = order.iter().map(|&v| lists.get(v).subsets(a)).collect();
    let mut class_colors: Vec<Vec<Color>> = Vec::new();
    for (&c, &k) in &class_of {
        if class_colors.len() <= k {
            class_colors.resize(k + 1, Vec::new());
        }
        class_colors[k].push(c);
    }
    for cs in &mut class_colors {
        cs.sort_unstable();
    }
    let mut chosen: Vec<ColorSet> = Vec::with_capacity(order.len());
    let _ = rec(
        &candidates,
        &earlier,
        &class_of,
        &class_colors,
        &mut chosen,
        ColorSet::new(),
        &mut f,
    );

    fn rec(
        candidates: &[Vec<ColorSet>],
        earlier: &[Vec<usize>],
        class_of: &HashMap<Color, usize>,
        class_colors: &[Vec<Color>],
        chosen: &mut Vec<ColorSet>,
        used: ColorSet,
        f: &mut impl FnMut(&[ColorSet]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let i = chosen.len();
        if i == candidates.len() {
            return f(chosen);
        }
        'cand: for c in &candidates[i] {
            if earlier[i].iter().any(|&j| !chosen[j].is_disjoint(c)) {
                continue;
            }
            // the fresh colors taken from a class must be its lowest fresh ones
            let mut fresh: Vec<(usize, Color)> = c
                .iter()
                .filter(|x| !used.contains(*x))
                .map(|x| (class_of[&x], x))
                .collect();
            fresh.sort_unstable();
            let mut j = 0;
            while j < fresh.len() {
                let k = fresh[j].0;
                let mut pool = class_colors[k].iter().filter(|x| !used.contains(**x));
                while j < fresh.len() && fresh[j].0 == k {
                    if pool.next() != Some(&fresh[j].1) {
                        continue 'cand;
                    }
                    j += 1;
                }
            }
            chosen.push(c.clone());
            let r = rec(candidates, earlier, class_of, class_colors, chosen, used.union(c), f);
            chosen.pop();
            r?;
        }
        ControlFlow::Continue(())
    }
}

fn check_containment(within: &Subgraph, s: &Subgraph) -> Result<(), CriticalityError> {
    if !s.is_subgraph_of(within) {
        return Err(CriticalityError::NotSubgraph);
    }
    if s == within {
        return Err(CriticalityError::SEqualsG);
    }
    Ok(())
}

/// Maximal proper subgraphs of `within` that contain `s`.
pub fn maximal_subgraphs(g: &Graph, within: &Subgraph, s: &Subgraph) -> Vec<MaximalSubgraph> {
    let mut out: Vec<MaximalSubgraph> = within
        .edges()
        .filter(|&e| !s.has_edge(e))
        .map(MaximalSubgraph::MinusEdge)
        .collect();
    out.extend(
        within
            .vertices()
            .filter(|&v| !s.has_vertex(v) && within.degree(g, v) == 0)
            .map(MaximalSubgraph::MinusVertex),
    );
    out
}

fn apply(g: &Graph, h: &Subgraph, m: MaximalSubgraph) -> Subgraph {
    let mut h = h.clone();
    match m {
        MaximalSubgraph::MinusEdge(e) => h.remove_edge(e),
        MaximalSubgraph::MinusVertex(v) => h.remove_vertex(g, v),
    }
    h
}

/// Decides `(a, L, S)`-criticality of the whole graph.
pub fn is_critical(
    g: &Graph,
    s: &Subgraph,
    lists: &ListAssignment,
    a: usize,
) -> Result<CriticalityReport, CriticalityError> {
    is_critical_within(g, &Subgraph::full(g), s, lists, a)
}

/// Decides `(a, L, S)`-criticality of the subgraph `within`.
pub fn is_critical_within(
    g: &Graph,
    within: &Subgraph,
    s: &Subgraph,
    lists: &ListAssignment,
    a: usize,
) -> Result<CriticalityReport, CriticalityError> {
    check_containment(within, s)?;
    Compiled::new(g, None, lists, a)?;
    let maximal = maximal_subgraphs(g, within, s);

    // a vertex outside s with room for a greedy color never blocks extension
    for v in within.vertices().filter(|&v| !s.has_vertex(v)) {
        let d = within.degree(g, v);
        if lists.size(v) >= (d + 1) * a {
            let blocker = g
                .incident(v)
                .iter()
                .find(|&&(_, e)| within.has_edge(e))
                .map_or(MaximalSubgraph::MinusVertex(v), |&(_, e)| MaximalSubgraph::MinusEdge(e));
            return Ok(CriticalityReport {
                critical: false,
                witnesses: Vec::new(),
                unwitnessed: vec![blocker],
                colorings_examined: 0,
            });
        }
    }

    // outside part: edges of within not in s, with their ends
    let mut outside = Subgraph::empty(g);
    for v in within.vertices().filter(|&v| !s.has_vertex(v)) {
        outside.add_vertex(v);
    }
    for e in within.edges().filter(|&e| !s.has_edge(e)) {
        outside.add_edge(g, e);
    }
    let roots: Vec<usize> = s.vertices().filter(|&v| outside.has_vertex(v)).collect();

    let mut whole = Compiled::new(g, Some(&outside), lists, a)?;
    let mut parts: Vec<(MaximalSubgraph, Compiled)> = maximal
        .iter()
        .map(|&m| Ok((m, Compiled::new(g, Some(&apply(g, &outside, m)), lists, a)?)))
        .collect::<Result<_, SolveError>>()?;
    let mut on_s = Compiled::new(g, Some(s), lists, a)?;

    let mut witnesses: Vec<(MaximalSubgraph, SetColoring)> = Vec::new();
    let mut examined = 0u64;
    let mut error: Option<SolveError> = None;
    let n = g.vertex_count();
    for_each_partial_coloring(g, within, s, lists, a, &roots, |psi| {
        examined += 1;
        let mut step = || -> Result<bool, SolveError> {
            for (&v, c) in roots.iter().zip(psi) {
                on_s.fix(v, c);
                whole.fix(v, c);
            }
            let Some(full) = on_s.run(n)? else {
                return Ok(false);
            };
            if whole.feasible()? {
                return Ok(false);
            }
            let mut i = 0;
            while i < parts.len() {
                let (m, c) = &mut parts[i];
                for (&v, col) in roots.iter().zip(psi) {
                    c.fix(v, col);
                }
                if c.feasible()? {
                    witnesses.push((*m, full.clone()));
                    parts.swap_remove(i);
                } else {
                    i += 1;
                }
            }
            Ok(parts.is_empty())
        };
        match step() {
            Ok(true) => ControlFlow::Break(()),
            Ok(false) => ControlFlow::Continue(()),
            Err(e) => {
                error = Some(e);
                ControlFlow::Break(())
            }
        }
    });
    if let Some(e) = error {
        return Err(e.into());
    }
    witnesses.sort_by_key(|w| w.0);
    let mut unwitnessed: Vec<MaximalSubgraph> = parts.into_iter().map(|p| p.0).collect();
    unwitnessed.sort();
    Ok(CriticalityReport {
        critical: unwitnessed.is_empty(),
        witnesses,
        unwitnessed,
        colorings_examined: examined,
    })
}

/// Criticality straight from the definition: every proper subgraph `H ⊇ S`
/// is tried against every coloring of `S`, with no symmetry reduction.
pub fn is_critical_brute_force(
    g: &Graph,
    s: &Subgraph,
    lists: &ListAssignment,
    a: usize,
) -> Result<bool, CriticalityError> {
    let full = Subgraph::full(g);
    check_containment(&full, s)?;
    let outside: Vec<usize> = (0..g.vertex_count()).filter(|&v| !s.has_vertex(v)).collect();
    let mut subgraphs = Vec::new();
    for xmask in 0u64..(1 << outside.len()) {
        let mut base = s.clone();
        for (i, &v) in outside.iter().enumerate() {
            if xmask >> i & 1 == 1 {
                base.add_vertex(v);
            }
        }
        let free: Vec<usize> = (0..g.edge_count())
            .filter(|&e| {
                let (u, v) = g.edge(e);
                !s.has_edge(e) && base.has_vertex(u) && base.has_vertex(v)
            })
            .collect();
        for emask in 0u64..(1 << free.len()) {
            let mut h = base.clone();
            for (i, &e) in free.iter().enumerate() {
                if emask >> i & 1 == 1 {
                    h.add_edge(g, e);
                }
            }
            if h != full {
                subgraphs.push(h);
            }
        }
    }
    let mut witnessed = vec![false; subgraphs.len()];
    let s_vertices: Vec<usize> = s.vertices().collect();
    let mut psi = SetColoring::empty(g.vertex_count());
    let mut err = None;
    all_colorings(g, s, lists, a, &s_vertices, 0, &mut psi, &mut |psi| {
        let r = (|| -> Result<(), SolveError> {
            if extends(g, None, lists, a, s, psi)? {
                return Ok(());
            }
            for (i, h) in subgraphs.iter().enumerate() {
                if !witnessed[i] && extends(g, Some(h), lists, a, s, psi)? {
                    witnessed[i] = true;
                }
            }
            Ok(())
        })();
        if let Err(e) = r {
            err = Some(e);
        }
    });
    if let Some(e) = err {
        return Err(e.into());
    }
    Ok(witnessed.iter().all(|&w| w))
}

#[allow(clippy::too_many_arguments)]
fn all_colorings(
    g: &Graph,
    s: &Subgraph,
    lists: &ListAssignment,
    a: usize,
    order: &[usize],
    i: usize,
    psi: &mut SetColoring,
    f: &mut impl FnMut(&SetColoring),
) {
    if i == order.len() {
        f(psi);
        return;
    }
    let v = order[i];
    for c in lists.get(v).subsets(a) {
        let clash = g
            .incident(v)
            .iter()
            .any(|&(w, e)| s.has_edge(e) && psi.get(w).is_some_and(|d| !d.is_disjoint(&c)));
        if clash {
            continue;
        }
        psi.set(v, c);
        all_colorings(g, s, lists, a, order, i + 1, psi, f);
        psi.0[v] = None;
    }
}

/// A minimal non-colorable subgraph, found by deleting edges and vertices
/// while the remainder stays non-colorable.
pub fn extract_critical(g: &Graph, lists: &ListAssignment, a: usize) -> Result<Subgraph, CriticalityError> {
    let mut h = Subgraph::full(g);
    if Compiled::new(g, Some(&h), lists, a)?.feasible()? {
        return Err(CriticalityError::Colorable);
    }
    loop {
        let mut changed = false;
        for e in 0..g.edge_count() {
            if !h.has_edge(e) {
                continue;
            }
            let mut t = h.clone();
            t.remove_edge(e);
            if !Compiled::new(g, Some(&t), lists, a)?.feasible()? {
                h = t;
                changed = true;
            }
        }
        for v in 0..g.vertex_count() {
            if !h.has_vertex(v) {
                continue;
            }
            let mut t = h.clone();
            t.remove_vertex(g, v);
            if !Compiled::new(g, Some(&t), lists, a)?.feasible()? {
                h = t;
                changed = true;
            }
        }
        if !changed {
            return Ok(h);
        }
    }
}

/// A critical subgraph `H ⊇ S`: fixes one coloring of `S` that does not
/// extend and deletes edges and vertices while it still does not extend.
pub fn find_critical_subcanvas(
    g: &Graph,
    s: &Subgraph,
    lists: &ListAssignment,
    a: usize,
) -> Result<Subgraph, CriticalityError> {
    let full = Subgraph::full(g);
    check_containment(&full, s)?;
    let order: Vec<usize> = s.vertices().collect();
    let mut whole = Compiled::new(g, None, lists, a)?;
    let mut bad: Option<Vec<ColorSet>> = None;
    let mut err = None;
    for_each_partial_coloring(g, &full, s, lists, a, &order, |psi| {
        for (&v, c) in order.iter().zip(psi) {
            whole.fix(v, c);
        }
        match whole.feasible() {
            Ok(true) => ControlFlow::Continue(()),
            Ok(false) => {
                bad = Some(psi.to_vec());
                ControlFlow::Break(())
            }
            Err(e) => {
                err = Some(e);
                ControlFlow::Break(())
            }
        }
    });
    if let Some(e) = err {
        return Err(e.into());
    }
    let psi = bad.ok_or(CriticalityError::EveryColoringExtends)?;
    let fails = |h: &Subgraph| -> Result<bool, SolveError> {
        let mut c = Compiled::new(g, Some(h), lists, a)?;
        for (&v, col) in order.iter().zip(&psi) {
            c.fix(v, col);
        }
        Ok(!c.feasible()?)
    };
    let mut h = full;
    loop {
        let mut changed = false;
        for e in 0..g.edge_count() {
            if h.has_edge(e) && !s.has_edge(e) {
                let mut t = h.clone();
                t.remove_edge(e);
                if fails(&t)? {
                    h = t;
                    changed = true;
                }
            }
        }
        for v in 0..g.vertex_count() {
            if h.has_vertex(v) && !s.has_vertex(v) {
                let mut t = h.clone();
                t.remove_vertex(g, v);
                if fails(&t)? {
                    h = t;
                    changed = true;
                }
            }
        }
        if !changed {
            return Ok(h);
        }
    }
}

/// For `G = A ∪ B` with `S ⊆ A` and `B ≠ A ∩ B`, checks that criticality of
/// `G` relative to `S` passes to `B` relative to `A ∩ B`.
pub fn verify_lemma_sgcrit(
    g: &Graph,
    s: &Subgraph,
    lists: &ListAssignment,
    a: usize,
    part_a: &Subgraph,
    part_b: &Subgraph,
) -> Result<bool, CriticalityError> {
    let full = Subgraph::full(g);
    if part_a.union(part_b) != full {
        return Err(CriticalityError::Precondition("A ∪ B is not the whole graph".into()));
    }
    if !s.is_subgraph_of(part_a) {
        return Err(CriticalityError::Precondition("S is not contained in A".into()));
    }
    let meet = part_a.intersection(part_b);
    if &meet == part_b {
        return Err(CriticalityError::Precondition("B equals A ∩ B".into()));
    }
    if !is_critical(g, s, lists, a)?.critical {
        return Err(CriticalityError::Precondition("the graph is not critical".into()));
    }
    Ok(is_critical_within(g, part_b, &meet, lists, a)?.critical)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge_is_critical() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let l = ListAssignment::new(vec![ColorSet::from([1]); 2]);
        let s = Subgraph::from_parts(&g, [0], []);
        let r = is_critical(&g, &s, &l, 1).unwrap();
        assert!(r.critical);
        assert!(is_critical_brute_force(&g, &s, &l, 1).unwrap());
    }

    #[test]
    fn colorable_graph_with_empty_s_is_not_critical() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let l = ListAssignment::uniform(2, 2);
        let s = Subgraph::empty(&g);
        assert!(!is_critical(&g, &s, &l, 1).unwrap().critical);
        assert!(!is_critical_brute_force(&g, &s, &l, 1).unwrap());
    }

    #[test]
    fn greedy_vertex_blocks_criticality() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let l = ListAssignment::new(vec![
            ColorSet::from([1]),
            ColorSet::from([1, 2, 3]),
            ColorSet::from([2]),
        ]);
        let s = Subgraph::from_parts(&g, [0, 2], []);
        assert!(!is_critical(&g, &s, &l, 1).unwrap().critical);
    }

    #[test]
    fn s_equal_g_is_rejected() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let l = ListAssignment::uniform(2, 2);
        assert_eq!(
            is_critical(&g, &Subgraph::full(&g), &l, 1),
            Err(CriticalityError::SEqualsG)
        );
    }

    #[test]
    fn extract_from_edge_plus_pendant() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let l = ListAssignment::new(vec![
            ColorSet::from([1]),
            ColorSet::from([1]),
            ColorSet::from([1, 2, 3]),
        ]);
        let h = extract_critical(&g, &l, 1).unwrap();
        assert_eq!(h.vertices().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(h.edge_count(), 1);
    }

    #[test]
    fn extract_triangle_from_k4() {
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let l = ListAssignment::uniform(4, 2);
        let h = extract_critical(&g, &l, 1).unwrap();
        assert_eq!((h.vertex_count(), h.edge_count()), (3, 3));
    }

    #[test]
    fn subcanvas_drops_pendant() {
        // s = {0}, edge 0-1 forced conflict, pendant 1-2 harmless
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let l = ListAssignment::new(vec![
            ColorSet::from([1]),
            ColorSet::from([1]),
            ColorSet::from([1, 2, 3]),
        ]);
        let s = Subgraph::from_parts(&g, [0], []);
        let h = find_critical_subcanvas(&g, &s, &l, 1).unwrap();
        assert!(!h.has_vertex(2));
        assert!(is_critical_within(&g, &h, &s, &l, 1).unwrap().critical);
    }
}
