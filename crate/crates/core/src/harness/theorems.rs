//! Exhaustive checks of the colorability theorems on small plane maps.
//!
//! Hypotheses depend only on list sizes, so each map contributes size
//! patterns. A pattern is peeled greedily (vertices with at least
//! `(deg + 1) a` colors are colored last), and only the remaining core, plus
//! the vertices whose lists enter `c(G, P, L)` and the path itself, gets
//! every list assignment up to color renaming. Patterns with isomorphic
//! labelled cores share one enumeration.
//!
//! Lists on an independent set `D` of core vertices are not enumerated.
//! For fixed lists elsewhere, colorings of `G - D` are collected until no
//! choice of lists on `D` blocks all of them; each blocking choice found on
//! the way is solved outright, yielding either a new coloring or a
//! counterexample.

use super::graphs::{enumerate_girth5_graphs, inequivalent_embeddings, LabelledIsoSet};
use super::lists::for_each_canonical;
use super::{Partial, SuiteError, SuiteParams, SuiteResult};
use crate::color::ColorSet;
use crate::coloring::{
    check_cor_distflaws_hypotheses, check_thm_2flaws_hypotheses, check_thm_cyl_hypotheses, compute_c,
    connection_status, is_set_coloring, Connection, ListAssignment, SetColoring,
};
use crate::graph::{Graph, Subgraph};
use crate::instance::Instance;
use crate::planar_map::{PathRef, PlaneMap};
use crate::solver::reduce::{reduce_greedy_vertex, ReductionStep, ReductionTrace, WorkingProblem};
use crate::solver::SolveError;
use rayon::prelude::*;
use std::collections::HashSet;
use std::ops::ControlFlow;
use std::sync::Arc;

/// Detailed violations kept per core; the rest are only counted.
const STORED_PER_CORE: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceTheorem {
    /// 2a-lists on two distinct marked faces.
    TwoFaces,
    /// 2a-lists on one marked face.
    OneFace,
}

/// A hypothesis-satisfying size pattern with representative lists.
#[derive(Debug, Clone)]
struct Case {
    map: Arc<PlaneMap>,
    faces: Vec<usize>,
    path: Option<PathRef>,
    lists: ListAssignment,
}

/// The enumeration shared by all cases with one labelled core.
struct Job {
    case: Case,
    core: Subgraph,
    trace: ReductionTrace,
    /// Vertices whose lists are enumerated, in row order.
    rows: Vec<usize>,
    /// Core vertices whose lists are chosen adversarially.
    free: Vec<usize>,
    members: u64,
}

fn representative(sizes: &[usize], path: Option<&PathRef>, a: usize) -> ListAssignment {
    let mut lists: Vec<ColorSet> = sizes.iter().map(|&s| ColorSet::range(0, s)).collect();
    if let Some(p) = path {
        for (i, &v) in p.vertices().iter().enumerate() {
            lists[v] = ColorSet::range((a * (i % 2)) as u16, a);
        }
    }
    ListAssignment::new(lists)
}

fn path_coloring(n: usize, path: &PathRef, lists: &ListAssignment) -> SetColoring {
    let mut psi = SetColoring::empty(n);
    for &v in path.vertices() {
        psi.set(v, lists.get(v).clone());
    }
    psi
}

fn peel(p: WorkingProblem) -> (WorkingProblem, ReductionTrace) {
    let mut p = p;
    let mut trace = ReductionTrace::default();
    while let Some((q, step)) = reduce_greedy_vertex(&p) {
        trace.steps.push(step);
        p = q;
    }
    (p, trace)
}

/// The trace with each greedy list replaced by the vertex's list in `lists`.
fn relist(trace: &ReductionTrace, lists: &ListAssignment) -> ReductionTrace {
    ReductionTrace {
        steps: trace
            .steps
            .iter()
            .map(|s| match s {
                ReductionStep::Greedy { vertex, neighbors, .. } => ReductionStep::Greedy {
                    vertex: *vertex,
                    neighbors: neighbors.clone(),
                    list: lists.get(*vertex).clone(),
                },
                other => other.clone(),
            })
            .collect(),
    }
}

fn face_cases(g: &Graph, which: FaceTheorem, a: usize) -> (u64, Vec<Case>) {
    let maps: Vec<Arc<PlaneMap>> = inequivalent_embeddings(g).into_iter().map(Arc::new).collect();
    let n = g.vertex_count();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for map in &maps {
        let faces = map.face_count();
        let choices: Vec<Vec<usize>> = match which {
            FaceTheorem::TwoFaces => (0..faces)
                .flat_map(|f1| (f1 + 1..faces).map(move |f2| vec![f1, f2]))
                .collect(),
            FaceTheorem::OneFace => (0..faces).map(|f| vec![f]).collect(),
        };
        for fs in choices {
            let mut on: Vec<usize> = fs.iter().flat_map(|&f| map.face_vertices(f)).collect();
            on.sort_unstable();
            on.dedup();
            for sub in 0u32..(1 << on.len()) {
                let x: u32 = on
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| sub >> i & 1 == 1)
                    .fold(0, |m, (_, &v)| m | 1 << v);
                if !seen.insert(x) {
                    continue;
                }
                let sizes: Vec<usize> = (0..n).map(|v| if x >> v & 1 == 1 { 2 * a } else { 3 * a }).collect();
                let lists = representative(&sizes, None, a);
                let report = match which {
                    FaceTheorem::TwoFaces => check_thm_cyl_hypotheses(map, fs[0], fs[1], &lists, a),
                    FaceTheorem::OneFace => check_cor_distflaws_hypotheses(map, fs[0], &lists, a),
                }
                .expect("faces and lists are well formed");
                if report.passed() {
                    out.push(Case {
                        map: map.clone(),
                        faces: fs.clone(),
                        path: None,
                        lists,
                    });
                }
            }
        }
    }
    (maps.len() as u64, out)
}

/// Directed paths with at most two edges along the boundary of face `f`.
fn boundary_paths(map: &PlaneMap, f: usize) -> Vec<Vec<usize>> {
    let g = map.graph();
    let verts = map.face_vertices(f);
    let edges = map.face_edges(f);
    let on_face = |u: usize, v: usize| g.edge_id(u, v).is_some_and(|e| edges.binary_search(&e).is_ok());
    let mut out: Vec<Vec<usize>> = verts.iter().map(|&v| vec![v]).collect();
    let mut frontier = out.clone();
    for _ in 0..2 {
        let mut next = Vec::new();
        for p in &frontier {
            let last = *p.last().expect("nonempty");
            for w in g.neighbors(last) {
                if !p.contains(&w) && on_face(last, w) {
                    let mut q = p.clone();
                    q.push(w);
                    next.push(q);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn path_cases(g: &Graph, a: usize) -> (u64, Vec<Case>) {
    let maps = inequivalent_embeddings(g);
    let n = g.vertex_count();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for base in &maps {
        for f in 0..base.face_count() {
            let map = Arc::new(base.clone().with_outer_face(f).expect("existing face"));
            let verts = map.face_vertices(f);
            for p in boundary_paths(&map, f) {
                let free: Vec<usize> = verts.iter().copied().filter(|v| !p.contains(v)).collect();
                for sub in 0u32..(1 << free.len()) {
                    let x: u32 = free
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| sub >> i & 1 == 1)
                        .fold(0, |m, (_, &v)| m | 1 << v);
                    if !seen.insert((p.clone(), x)) {
                        continue;
                    }
                    let sizes: Vec<usize> = (0..n).map(|v| if x >> v & 1 == 1 { 2 * a } else { 3 * a }).collect();
                    let path = PathRef(p.clone());
                    let lists = representative(&sizes, Some(&path), a);
                    let report = check_thm_2flaws_hypotheses(&map, &path, &lists, a).expect("well formed");
                    if report.passed() {
                        out.push(Case {
                            map: map.clone(),
                            faces: Vec::new(),
                            path: Some(path),
                            lists,
                        });
                    }
                }
            }
        }
    }
    (maps.len() as u64, out)
}

/// Peels a case and returns its core, the enumerated rows and the labels
/// identifying the labelled core.
fn reduce_case(case: &Case, a: usize) -> (Subgraph, ReductionTrace, Vec<usize>, Graph, Vec<u32>) {
    let g = case.map.graph();
    let n = g.vertex_count();
    let mut p = WorkingProblem::new(g.clone(), case.lists.clone(), a);
    let mut role = vec![0u32; n];
    if let Some(path) = &case.path {
        p = p.with_fixed(path_coloring(n, path, &case.lists));
        for (i, &v) in path.vertices().iter().enumerate() {
            role[v] = 1 + i as u32;
        }
        match connection_status(g, &case.lists, a, path) {
            Connection::Adjacent { u, .. } => role[u] |= 1 << 4,
            Connection::UniquelyConnected { x, y, u, .. } => {
                role[u] |= 1 << 4;
                role[x] |= 2 << 4;
                role[y] |= 3 << 4;
            }
            _ => {}
        }
    }
    let (q, trace) = peel(p);
    let core = q.active;
    let rows: Vec<usize> = (0..n).filter(|&v| core.has_vertex(v) || role[v] != 0).collect();
    // the key graph: core edges among the rows
    let index: Vec<Option<usize>> = {
        let mut ix = vec![None; n];
        for (i, &v) in rows.iter().enumerate() {
            ix[v] = Some(i);
        }
        ix
    };
    let edges: Vec<(usize, usize)> = core
        .edges()
        .map(|e| {
            let (u, v) = g.edge(e);
            (index[u].expect("core row"), index[v].expect("core row"))
        })
        .collect();
    let key = Graph::from_edges(rows.len(), &edges).expect("simple");
    let labels: Vec<u32> = rows
        .iter()
        .map(|&v| case.lists.size(v) as u32 | role[v] << 8 | (core.has_vertex(v) as u32) << 16)
        .collect();
    (core, trace, rows, key, labels)
}

/// A largest independent set of core vertices that are neither precolored
/// nor read by `c(G, P, L)`; ties go to the lexicographically first.
fn free_set(case: &Case, core: &Subgraph, labels: &[u32], rows: &[usize]) -> Vec<usize> {
    let g = case.map.graph();
    let cand: Vec<usize> = rows
        .iter()
        .zip(labels)
        .filter(|&(&v, &l)| core.has_vertex(v) && l >> 8 & 0xff == 0)
        .map(|(&v, _)| v)
        .collect();
    let mut best: Vec<usize> = Vec::new();
    for mask in 0u32..(1 << cand.len()) {
        if mask.count_ones() as usize <= best.len() {
            continue;
        }
        let set: Vec<usize> = (0..cand.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| cand[i])
            .collect();
        let independent = set
            .iter()
            .enumerate()
            .all(|(i, &u)| set[i + 1..].iter().all(|&v| !g.has_edge(u, v)));
        if independent {
            best = set;
        }
    }
    best
}

fn build_jobs(cases: Vec<Case>, a: usize) -> Vec<Job> {
    let reduced: Vec<_> = cases.into_par_iter().map(|c| (reduce_case(&c, a), c)).collect();
    let mut iso = LabelledIsoSet::default();
    let mut jobs: Vec<Job> = Vec::new();
    for ((core, trace, rows, key, labels), case) in reduced {
        let (idx, new) = iso.insert(&key, &labels);
        if new {
            let free = free_set(&case, &core, &labels, &rows);
            let rows = rows.into_iter().filter(|v| !free.contains(v)).collect();
            jobs.push(Job {
                case,
                core,
                trace,
                rows,
                free,
                members: 0,
            });
        }
        jobs[idx].members += 1;
    }
    jobs
}

fn witness(case: &Case, lists: &ListAssignment, a: usize) -> serde_json::Value {
    let inst = Instance {
        a,
        map: case.map.clone(),
        lists: lists.clone(),
        faces: case.faces.clone(),
        path: case.path.clone(),
        marked: None,
    };
    serde_json::to_value(inst.to_file()).expect("serializable")
}

/// Indices, one per free vertex, of candidate lists under which every
/// coloring in the witness set is blocked somewhere. `blocked[w][i]` is the
/// mask of witnesses that candidate `i` of free vertex `w` blocks.
fn blocking_choice(blocked: &[Vec<u128>], witnesses: usize) -> Option<Vec<usize>> {
    let full = if witnesses == 128 {
        u128::MAX
    } else {
        (1u128 << witnesses) - 1
    };
    // per free vertex, the distinct masks not dominated by another
    let options: Vec<Vec<(u128, usize)>> = blocked
        .iter()
        .map(|masks| {
            let mut uniq: Vec<(u128, usize)> = Vec::new();
            for (i, &m) in masks.iter().enumerate() {
                if !uniq.iter().any(|&(o, _)| o == m) {
                    uniq.push((m, i));
                }
            }
            let mut maximal: Vec<(u128, usize)> = uniq
                .iter()
                .copied()
                .filter(|&(m, _)| !uniq.iter().any(|&(o, _)| o != m && o & m == m))
                .collect();
            maximal.sort_by_key(|&(m, _)| std::cmp::Reverse(m.count_ones()));
            maximal
        })
        .collect();
    let mut reach = vec![0u128; options.len() + 1];
    for w in (0..options.len()).rev() {
        reach[w] = reach[w + 1] | options[w].iter().fold(0, |acc, &(m, _)| acc | m);
    }
    let mut dead: HashSet<(usize, u128)> = HashSet::new();
    let mut choice = vec![0; options.len()];
    fn dfs(
        w: usize,
        cur: u128,
        full: u128,
        options: &[Vec<(u128, usize)>],
        reach: &[u128],
        dead: &mut HashSet<(usize, u128)>,
        choice: &mut [usize],
    ) -> bool {
        if w == options.len() {
            return cur == full;
        }
        if cur | reach[w] != full || dead.contains(&(w, cur)) {
            return false;
        }
        for &(m, i) in &options[w] {
            choice[w] = i;
            if dfs(w + 1, cur | m, full, options, reach, dead, choice) {
                return true;
            }
        }
        dead.insert((w, cur));
        false
    }
    dfs(0, 0, full, &options, &reach, &mut dead, &mut choice).then_some(choice)
}

fn run_job(job: &Job, job_idx: usize, a: usize, params: &SuiteParams) -> Partial {
    let mut part = Partial::default();
    let g = job.case.map.graph();
    let n = g.vertex_count();
    let universe = params.universe_for(a);
    let sizes: Vec<usize> = job.rows.iter().map(|&v| job.case.lists.size(v)).collect();
    part.max("max_core_vertices", job.core.vertex_count() as u64);
    part.max("max_enumerated_vertices", job.rows.len() as u64);
    part.max("max_free_vertices", job.free.len() as u64);
    let palette = ColorSet::range(0, universe);
    let candidates: Vec<Vec<ColorSet>> = job
        .free
        .iter()
        .map(|&w| palette.subsets(job.case.lists.size(w)))
        .collect();
    let core_neighbors: Vec<Vec<usize>> = job
        .free
        .iter()
        .map(|&w| {
            g.incident(w)
                .iter()
                .filter(|&&(_, e)| job.core.has_edge(e))
                .map(|&(u, _)| u)
                .collect()
        })
        .collect();
    let mut stored = 0;
    let mut fail = |part: &mut Partial, j: u64, detail: String, lists: &ListAssignment| {
        part.bump("violations", 1);
        if stored < STORED_PER_CORE {
            stored += 1;
            part.violation(
                format!("a{a}/n{n}/core{job_idx}/assignment{j}"),
                detail,
                witness(&job.case, lists, a),
            );
        }
    };
    let mut j = 0u64;
    let _ = for_each_canonical(&sizes, universe, |rows| {
        j += 1;
        part.bump("assignments", 1);
        let mut lists = job.case.lists.clone();
        for (i, &v) in job.rows.iter().enumerate() {
            lists.set(v, rows[i].clone());
        }
        let mut fixed = SetColoring::empty(n);
        if let Some(path) = &job.case.path {
            let p = path.vertices();
            if p.windows(2).any(|w| !lists.get(w[0]).is_disjoint(lists.get(w[1]))) {
                part.bump("skipped_path_not_colored", 1);
                return ControlFlow::Continue(());
            }
            let c = match compute_c(g, path, &lists, a) {
                Ok(c) => c,
                Err(e) => {
                    fail(&mut part, j, format!("c(G,P,L) undefined: {e}"), &lists);
                    return ControlFlow::Continue(());
                }
            };
            if !lists.get(p[0]).is_disjoint(&c) {
                part.bump("skipped_not_pc_disjoint", 1);
                return ControlFlow::Continue(());
            }
            fixed = path_coloring(n, path, &lists);
        }
        // blocked[w][i]: witnesses that candidate list i of free vertex w blocks
        let mut blocked: Vec<Vec<u128>> = candidates.iter().map(|c| vec![0; c.len()]).collect();
        let mut witnesses = 0usize;
        loop {
            let Some(choice) = blocking_choice(&blocked, witnesses) else {
                part.bump("colored", 1);
                part.max("max_witness_colorings", witnesses as u64);
                return ControlFlow::Continue(());
            };
            part.bump("blocking_rounds", 1);
            for (k, &w) in job.free.iter().enumerate() {
                lists.set(w, candidates[k][choice[k]].clone());
            }
            let wp = WorkingProblem {
                graph: g.clone(),
                active: job.core.clone(),
                lists: lists.clone(),
                a,
                fixed: fixed.clone(),
            };
            let col = match wp.solve_until(params.deadline()) {
                Ok(Some(col)) => col,
                Ok(None) => {
                    fail(&mut part, j, "no (L:a)-coloring found".into(), &lists);
                    return ControlFlow::Continue(());
                }
                Err(SolveError::Timeout) => {
                    fail(&mut part, j, "solver timed out".into(), &lists);
                    return ControlFlow::Continue(());
                }
                Err(e) => {
                    fail(&mut part, j, format!("solver error: {e}"), &lists);
                    return ControlFlow::Continue(());
                }
            };
            let full = relist(&job.trace, &lists).lift(&col, a);
            let respects = fixed.assigned().all(|(v, s)| full.get(v) == Some(s));
            let ok = is_set_coloring(g, &lists, a, &full) && respects;
            if ok == params.mutate {
                fail(&mut part, j, "lifted coloring rejected by the validator".into(), &lists);
                return ControlFlow::Continue(());
            }
            if witnesses == 128 {
                fail(&mut part, j, "more than 128 witness colorings needed".into(), &lists);
                return ControlFlow::Continue(());
            }
            for (k, nbrs) in core_neighbors.iter().enumerate() {
                let taken = nbrs
                    .iter()
                    .filter_map(|&u| col.get(u))
                    .fold(ColorSet::new(), |acc, c| acc.union(c));
                for (i, cand) in candidates[k].iter().enumerate() {
                    if cand.difference(&taken).len() < a {
                        blocked[k][i] |= 1 << witnesses;
                    }
                }
            }
            witnesses += 1;
        }
    });
    part
}

fn run_cases(
    name: &str,
    params: &SuiteParams,
    make: impl Fn(&Graph, usize) -> (u64, Vec<Case>) + Sync,
) -> Result<SuiteResult, SuiteError> {
    let mut result = SuiteResult::new(name, params);
    let graphs = enumerate_girth5_graphs(params.nmax)?;
    result.bump("graphs", graphs.len() as u64);
    for &a in &params.a {
        let per_graph: Vec<(u64, Vec<Case>)> = graphs.par_iter().map(|g| make(g, a)).collect();
        let mut cases = Vec::new();
        for (embeddings, cs) in per_graph {
            result.bump("embeddings", embeddings);
            cases.extend(cs);
        }
        result.instances += cases.len() as u64;
        let jobs = build_jobs(cases, a);
        result.bump("cores", jobs.len() as u64);
        result.bump("cases_sharing_a_core", jobs.iter().map(|j| j.members - 1).sum());
        let parts: Vec<Partial> = jobs
            .par_iter()
            .enumerate()
            .map(|(i, job)| run_job(job, i, a, params))
            .collect();
        for mut p in parts {
            p.instances = 0;
            result.absorb(p);
        }
    }
    Ok(result)
}

/// Every pattern meeting the face hypotheses is colorable for every list
/// assignment.
pub fn run_face_suite(which: FaceTheorem, params: &SuiteParams) -> Result<SuiteResult, SuiteError> {
    let name = match which {
        FaceTheorem::TwoFaces => "thm-cyl",
        FaceTheorem::OneFace => "cor-distflaws",
    };
    run_cases(name, params, |g, a| face_cases(g, which, a))
}

/// Every `(p0, c)`-disjoint coloring of the path extends.
pub fn run_path_suite(params: &SuiteParams) -> Result<SuiteResult, SuiteError> {
    run_cases("thm-2flaws", params, path_cases)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_paths_of_a_pentagon() {
        let rot: Vec<Vec<usize>> = (0..5).map(|i| vec![(i + 4) % 5, (i + 1) % 5]).collect();
        let map = PlaneMap::build(&rot).unwrap();
        // 5 single vertices, 10 directed edges, 10 directed 2-paths
        assert_eq!(boundary_paths(&map, 0).len(), 25);
    }

    #[test]
    fn relist_replaces_greedy_lists() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let lists = ListAssignment::new(vec![ColorSet::range(0, 2), ColorSet::range(0, 2)]);
        let (_, trace) = peel(WorkingProblem::new(g, lists, 1));
        let other = ListAssignment::new(vec![ColorSet::range(5, 2), ColorSet::range(7, 2)]);
        let lifted = relist(&trace, &other).lift(&SetColoring::empty(2), 1);
        assert!(lifted.get(0).unwrap().is_subset(other.get(0)));
        assert!(lifted.get(1).unwrap().is_subset(other.get(1)));
    }
}
