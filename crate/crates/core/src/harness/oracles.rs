//! Oracle suites: each reduction against the direct solver, and the
//! maximal-subgraph criticality check against the definition.
//!
//! Reductions run on sampled list assignments over every enumerated graph.
//! Greedy deletion and block decomposition must preserve solvability in
//! both directions on every instance. Flaw reduction commits to one coloring
//! of the flaw, so on arbitrary instances only its lifted colorings are
//! checked; on instances meeting the one-face hypotheses the reduced
//! instance must stay colorable.

use super::graphs::{enumerate_girth5_graphs, enumerate_plane_girth5};
use super::{Partial, SuiteError, SuiteParams, SuiteResult};
use crate::color::{Color, ColorSet};
use crate::coloring::{check_cor_distflaws_hypotheses, flaw_edges, is_set_coloring, ListAssignment, SetColoring};
use crate::graph::{Graph, Subgraph};
use crate::instance::Instance;
use crate::planar_map::PlaneMap;
use crate::solver::critical::{is_critical, is_critical_brute_force};
use crate::solver::reduce::{
    decompose_cut, reduce_flaw, reduce_greedy_vertex, solve_by_blocks, ReductionTrace, WorkingProblem,
};
use crate::solver::SolveError;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::sync::Arc;

fn random_list(rng: &mut ChaCha8Rng, universe: usize, size: usize) -> ColorSet {
    sample(rng, universe, size.min(universe))
        .into_iter()
        .map(|c| c as Color)
        .collect()
}

fn witness(map: &Arc<PlaneMap>, lists: &ListAssignment, a: usize, faces: Vec<usize>) -> serde_json::Value {
    let mut inst = Instance::new(a, map.clone(), lists.clone());
    inst.faces = faces;
    serde_json::to_value(inst.to_file()).expect("serializable")
}

/// A total coloring that satisfies the lists and keeps the precolored sets.
fn valid(p: &WorkingProblem, c: &SetColoring) -> bool {
    is_set_coloring(&p.graph, &p.lists, p.a, c) && p.fixed.assigned().all(|(v, set)| c.get(v) == Some(set))
}

/// Cut vertices by deletion: removing one splits its component.
fn cut_vertices_by_deletion(g: &Graph) -> Vec<usize> {
    let (_, base) = g.components(None);
    (0..g.vertex_count())
        .filter(|&v| {
            let mut h = Subgraph::full(g);
            h.remove_vertex(g, v);
            g.components(Some(&h)).1 > base
        })
        .collect()
}

/// Checks a block decomposition against cut vertices found by deletion: the
/// blocks partition the edges, no block has a cut vertex of its own, and
/// the block-cut forest has the right number of blocks.
fn decomposition_mismatch(g: &Graph, p: &WorkingProblem) -> Option<String> {
    let expected = cut_vertices_by_deletion(g);
    let Some(dec) = decompose_cut(p) else {
        return (!expected.is_empty()).then(|| format!("no decomposition, expected cut vertices {expected:?}"));
    };
    if dec.cut_vertices != expected {
        return Some(format!("cut vertices {:?}, expected {expected:?}", dec.cut_vertices));
    }
    let mut cover = vec![0; g.edge_count()];
    for b in &dec.blocks {
        for e in b.edges() {
            cover[e] += 1;
        }
        let (h, _) = b.to_graph(g);
        if h.vertex_count() > 2 && !cut_vertices_by_deletion(&h).is_empty() {
            return Some(format!("block {:?} has a cut vertex", b.vertices().collect::<Vec<_>>()));
        }
    }
    if cover.iter().any(|&k| k != 1) {
        return Some("blocks do not partition the edges".into());
    }
    let (_, comps) = g.components(None);
    let incidences: usize = dec
        .cut_vertices
        .iter()
        .map(|&v| dec.blocks.iter().filter(|b| b.has_vertex(v)).count() - 1)
        .sum();
    (dec.blocks.len() != comps + incidences)
        .then(|| format!("{} blocks, expected {}", dec.blocks.len(), comps + incidences))
}

fn check_general(
    p: &WorkingProblem,
    name: &str,
    wit: impl Fn() -> serde_json::Value,
    mutate: bool,
    part: &mut Partial,
) -> Result<(), SolveError> {
    let direct = p.solve()?;
    part.bump(if direct.is_some() { "colorable" } else { "not_colorable" }, 1);
    if direct.as_ref().is_some_and(|c| !valid(p, c)) {
        part.violation(name, "direct solver returned an invalid coloring", wit());
    }
    let agree = |reduced: bool| (reduced == direct.is_some()) != mutate;

    let mut q = p.clone();
    let mut trace = ReductionTrace::default();
    while let Some((r, step)) = reduce_greedy_vertex(&q) {
        trace.steps.push(step);
        q = r;
    }
    if !trace.steps.is_empty() {
        part.bump("greedy_checked", 1);
        part.bump("greedy_steps", trace.steps.len() as u64);
        let reduced = q.solve()?;
        if !agree(reduced.is_some()) {
            part.violation(
                name,
                format!("greedy deletion changed solvability (reduced: {})", reduced.is_some()),
                wit(),
            );
        }
        if let Some(c) = reduced {
            if !valid(p, &trace.lift(&c, p.a)) {
                part.violation(name, "greedy lift is not a coloring", wit());
            }
        }
    }

    for (u, v) in flaw_edges(&p.graph, &p.lists, p.a, None) {
        let Ok((r, step)) = reduce_flaw(p, u, v) else {
            part.bump("flaw_refused", 1);
            continue;
        };
        part.bump("flaw_checked", 1);
        let reduced = r.solve()?;
        match reduced {
            Some(c) => {
                let lifted = ReductionTrace { steps: vec![step] }.lift(&c, p.a);
                if !valid(p, &lifted) != mutate {
                    part.violation(name, format!("flaw {u}-{v} lift is not a coloring"), wit());
                }
            }
            None if direct.is_some() => part.bump("flaw_one_sided", 1),
            None => {}
        }
    }

    if let Some(detail) = decomposition_mismatch(&p.graph, p) {
        part.violation(name, detail, wit());
    }
    if decompose_cut(p).is_some() {
        part.bump("blocks_checked", 1);
        let by_blocks = solve_by_blocks(p)?;
        if !agree(by_blocks.is_some()) {
            part.violation(
                name,
                format!(
                    "block decomposition changed solvability (blocks: {})",
                    by_blocks.is_some()
                ),
                wit(),
            );
        }
        if by_blocks.as_ref().is_some_and(|c| !valid(p, c)) {
            part.violation(name, "block-wise coloring is invalid", wit());
        }
    }
    Ok(())
}

/// A one-face instance with a flaw on the face; `None` when the sampled
/// sizes break the hypotheses.
fn sample_face_instance(
    rng: &mut ChaCha8Rng,
    map: &PlaneMap,
    a: usize,
    universe: usize,
) -> Option<(usize, ListAssignment)> {
    let g = map.graph();
    let f = rng.random_range(0..map.face_count());
    let edges = map.face_edges(f);
    if edges.is_empty() {
        return None;
    }
    let (u, v) = g.edge(edges[rng.random_range(0..edges.len())]);
    let on_face = map.face_vertices(f);
    let lists: Vec<ColorSet> = (0..g.vertex_count())
        .map(|w| {
            let short = w == u || w == v || (on_face.contains(&w) && rng.random_bool(0.25));
            random_list(rng, universe, if short { 2 * a } else { 3 * a })
        })
        .collect();
    let lists = ListAssignment::new(lists);
    let report = check_cor_distflaws_hypotheses(map, f, &lists, a).ok()?;
    report.passed().then_some((f, lists))
}

fn check_face_instance(
    map: &Arc<PlaneMap>,
    f: usize,
    lists: &ListAssignment,
    a: usize,
    name: &str,
    mutate: bool,
    part: &mut Partial,
) -> Result<(), SolveError> {
    let g = map.graph();
    let p = WorkingProblem::new(g.clone(), lists.clone(), a);
    let wit = || witness(map, lists, a, vec![f]);
    if p.solve()?.is_none() {
        part.violation(name, "hypotheses hold but the instance is not colorable", wit());
    }
    for (u, v) in flaw_edges(g, lists, a, None) {
        let Ok((r, step)) = reduce_flaw(&p, u, v) else {
            part.bump("face_flaw_refused", 1);
            continue;
        };
        part.bump("face_flaw_checked", 1);
        match r.solve()? {
            Some(c) if !mutate => {
                if !valid(&p, &ReductionTrace { steps: vec![step] }.lift(&c, a)) {
                    part.violation(name, format!("flaw {u}-{v} lift is not a coloring"), wit());
                }
            }
            Some(_) => part.violation(name, format!("flaw {u}-{v} reduced instance colorable"), wit()),
            None => part.violation(name, format!("flaw {u}-{v} reduction lost colorability"), wit()),
        }
    }
    Ok(())
}

fn reductions_on(index: usize, map: Arc<PlaneMap>, a: usize, per_graph: usize, params: &SuiteParams) -> Partial {
    let mut part = Partial::default();
    let g = map.graph().clone();
    let n = g.vertex_count();
    let universe = params.universe_for(a);
    let mut rng =
        ChaCha8Rng::seed_from_u64(params.seed ^ ((index as u64) << 8 | a as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    for k in 0..per_graph {
        let name = format!("a{a}/graph{index}/sample{k}");
        let lists: Vec<ColorSet> = (0..n)
            .map(|v| {
                let sizes = [a, 2 * a, 2 * a, 3 * a, 3 * a, (g.degree(v) + 1) * a];
                let size = sizes[rng.random_range(0..sizes.len())];
                random_list(&mut rng, universe, size)
            })
            .collect();
        let lists = ListAssignment::new(lists);
        let mut fixed = SetColoring::empty(n);
        if rng.random_bool(0.25) {
            let v = rng.random_range(0..n);
            let choices = lists.get(v).subsets(a);
            if !choices.is_empty() {
                fixed.set(v, choices[rng.random_range(0..choices.len())].clone());
            }
        }
        let p = WorkingProblem::new(g.clone(), lists.clone(), a).with_fixed(fixed);
        let wit = || witness(&map, &lists, a, Vec::new());
        part.instances += 1;
        if let Err(e) = check_general(&p, &name, wit, params.mutate, &mut part) {
            part.violation(&name, format!("solver error: {e}"), wit());
        }

        if let Some((f, lists)) = sample_face_instance(&mut rng, &map, a, universe) {
            part.instances += 1;
            part.bump("face_instances", 1);
            let name = format!("a{a}/graph{index}/face-sample{k}");
            if let Err(e) = check_face_instance(&map, f, &lists, a, &name, params.mutate, &mut part) {
                part.violation(&name, format!("solver error: {e}"), witness(&map, &lists, a, vec![f]));
            }
        }
    }
    part
}

/// Greedy deletion, flaw reduction and block decomposition against the
/// direct solver on sampled lists over all graphs with at most `nmax`
/// vertices. `samples` is spread evenly over graphs, per value of `a`.
pub fn run_reductions_suite(params: &SuiteParams) -> Result<SuiteResult, SuiteError> {
    let mut result = SuiteResult::new("reductions", params);
    let maps: Vec<Arc<PlaneMap>> = enumerate_plane_girth5(params.nmax)?.into_iter().map(Arc::new).collect();
    result.bump("graphs", maps.len() as u64);
    let per_graph = params.samples.div_ceil(maps.len().max(1));
    for &a in &params.a {
        let parts: Vec<Partial> = maps
            .par_iter()
            .enumerate()
            .map(|(i, m)| reductions_on(i, m.clone(), a, per_graph, params))
            .collect();
        for p in parts {
            result.absorb(p);
        }
    }
    Ok(result)
}

/// Brute-force work for one instance: colorings of `S` times subgraphs
/// between `S` and `G`.
fn brute_force_cost(g: &Graph, s: &Subgraph, lists: &ListAssignment, a: usize) -> u128 {
    let colorings: u128 = s.vertices().map(|v| super::lists::binomial(lists.size(v), a)).product();
    let outside = g.vertex_count() - s.vertex_count();
    let free = g.edge_count() - s.edge_count();
    colorings << (outside + free).min(100)
}

/// Largest brute-force cost attempted; bigger instances are counted and
/// skipped.
const BRUTE_FORCE_BUDGET: u128 = 1 << 22;

fn shortcut_on(index: usize, g: &Graph, a: usize, params: &SuiteParams) -> Partial {
    let mut part = Partial::default();
    let n = g.vertex_count();
    let universe = 3 * a;
    let full = Subgraph::full(g);
    for vmask in 0u32..(1 << n) {
        let in_s: Vec<usize> = (0..n).filter(|&v| vmask >> v & 1 == 1).collect();
        let induced: Vec<usize> = (0..g.edge_count())
            .filter(|&e| {
                let (u, v) = g.edge(e);
                vmask >> u & 1 == 1 && vmask >> v & 1 == 1
            })
            .collect();
        for emask in 0u64..(1 << induced.len()) {
            let s = Subgraph::from_parts(
                g,
                in_s.iter().copied(),
                (0..induced.len()).filter(|i| emask >> i & 1 == 1).map(|i| induced[i]),
            );
            if s == full {
                continue;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(
                params.seed
                    ^ (((index as u64) << 40) | ((vmask as u64) << 20) | emask << 4 | a as u64)
                        .wrapping_mul(0x9E37_79B9_7F4A_7C15),
            );
            // a tight pattern just below the greedy threshold, then a random one
            let tight = ListAssignment::new(
                (0..n)
                    .map(|v| {
                        if s.has_vertex(v) {
                            ColorSet::range(0, 2 * a)
                        } else {
                            ColorSet::range(0, (g.degree(v) * a).clamp(a, universe))
                        }
                    })
                    .collect(),
            );
            let random = ListAssignment::new(
                (0..n)
                    .map(|v| {
                        let hi = if s.has_vertex(v) { 2 * a } else { (g.degree(v) + 1) * a };
                        let size = rng.random_range(a..=hi.max(a));
                        random_list(&mut rng, universe.max(size), size)
                    })
                    .collect(),
            );
            for (kind, lists) in [("tight", tight), ("random", random)] {
                if brute_force_cost(g, &s, &lists, a) > BRUTE_FORCE_BUDGET {
                    part.bump("skipped_over_budget", 1);
                    continue;
                }
                part.instances += 1;
                let name = format!("a{a}/graph{index}/v{vmask:b}/e{emask:b}/{kind}");
                let verdicts = is_critical(g, &s, &lists, a)
                    .and_then(|r| Ok((r.critical, is_critical_brute_force(g, &s, &lists, a)?)));
                let wit = || {
                    let map = Arc::new(any_embedding(g));
                    let mut inst = Instance::new(a, map, lists.clone());
                    inst.marked = Some(s.clone());
                    serde_json::to_value(inst.to_file()).expect("serializable")
                };
                match verdicts {
                    Ok((fast, slow)) => {
                        part.bump(if slow { "critical" } else { "not_critical" }, 1);
                        if (fast == slow) == params.mutate {
                            part.violation(&name, format!("shortcut says {fast}, definition says {slow}"), wit());
                        }
                    }
                    Err(e) => part.violation(&name, format!("criticality error: {e}"), wit()),
                }
            }
        }
    }
    part
}

fn any_embedding(g: &Graph) -> PlaneMap {
    super::graphs::planar_embeddings(g, Some(1)).pop().expect("planar")
}

/// The maximal-subgraph criticality check against the all-subgraphs
/// definition, for every `S` on every graph with at most `nmax` vertices.
pub fn run_shortcut_suite(params: &SuiteParams) -> Result<SuiteResult, SuiteError> {
    let mut result = SuiteResult::new("crit-shortcut", params);
    let graphs = enumerate_girth5_graphs(params.nmax)?;
    result.bump("graphs", graphs.len() as u64);
    for &a in &params.a {
        let parts: Vec<Partial> = graphs
            .par_iter()
            .enumerate()
            .map(|(i, g)| shortcut_on(i, g, a, params))
            .collect();
        for p in parts {
            result.absorb(p);
        }
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cut_vertices_of_a_path_and_a_cycle() {
        let path = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(cut_vertices_by_deletion(&path), vec![1, 2]);
        let c5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert!(cut_vertices_by_deletion(&c5).is_empty());
    }

    #[test]
    fn block_decomposition_of_two_pentagons_sharing_a_vertex() {
        let mut edges: Vec<(usize, usize)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        edges.extend([(0, 5), (5, 6), (6, 7), (7, 8), (8, 0)]);
        let g = Graph::from_edges(9, &edges).unwrap();
        let p = WorkingProblem::new(g.clone(), ListAssignment::uniform(9, 3), 1);
        assert_eq!(decomposition_mismatch(&g, &p), None);
        assert_eq!(decompose_cut(&p).unwrap().blocks.len(), 2);
    }
}
