//! Canvas suites: discovery of critical canvases on small maps, the
//! potential identities, and the two-face Euler bound.
//!
//! Discovery runs over connected graphs with one embedding each; the
//! potentials and the configuration outcomes depend on `(G, S)` only. An
//! outside vertex of degree at most two with `3a` colors never blocks
//! extension, so outside vertices have degree at least three and `V(S)` is
//! everything else. Outside lists have exactly `3a` colors and run over all
//! assignments up to renaming. Lists on `S` are the union of the outside
//! colors and `a|V(S)|` fresh ones: criticality only grows with the
//! `S`-lists, and any coloring of `S` can be renamed into these.

use super::graphs::{enumerate_girth5_graphs, enumerate_plane_girth5, inequivalent_embeddings, random_plane_girth5};
use super::lists::for_each_canonical;
use super::{Partial, SuiteError, SuiteParams, SuiteResult};
use crate::canvas::{
    verify_hypcyl, Canvas, ConfigurationHit, PotentialReport, Shape, ALPHA88, CANVAS_BOUND88, EPS88, SCALE,
};
use crate::color::{Color, ColorSet};
use crate::coloring::ListAssignment;
use crate::graph::{Graph, Subgraph};
use crate::instance::{Instance, Marked};
use crate::planar_map::PlaneMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::HashMap;
use std::ops::ControlFlow;
use std::sync::Arc;

/// A critical canvas found by [`discover`].
#[derive(Debug, Clone)]
pub struct Discovered {
    pub graph: usize,
    pub canvas: Canvas,
}

#[derive(Debug, Clone, Default)]
pub struct Discovery {
    pub canvases: Vec<Discovered>,
    pub stats: Partial,
}

fn canvas_witness(t: &Canvas) -> serde_json::Value {
    let g = t.host();
    let inst = Instance {
        a: t.a,
        map: t.map.clone(),
        lists: t.lists.clone(),
        faces: Vec::new(),
        path: None,
        marked: Some(t.s.clone()),
    };
    let mut file = inst.to_file();
    file.marked = Some(Marked {
        vertices: t.s.vertices().collect(),
        edges: t
            .s
            .edges()
            .map(|e| {
                let (u, v) = g.edge(e);
                [u, v]
            })
            .collect(),
    });
    serde_json::to_value(file).expect("serializable")
}

/// Lists under which the canvas `(G, S)` is critical, trying outside lists
/// in canonical order.
fn critical_lists(
    map: &Arc<PlaneMap>,
    s: &Subgraph,
    outside: &[usize],
    a: usize,
    part: &mut Partial,
) -> Option<ListAssignment> {
    let n = map.vertex_count();
    let universe = 3 * a * outside.len();
    let fresh = a * s.vertex_count();
    let sizes = vec![3 * a; outside.len()];
    let mut found = None;
    let _ = for_each_canonical(&sizes, universe, |rows| {
        part.bump("list_assignments_tried", 1);
        let used: ColorSet = rows.iter().fold(ColorSet::new(), |acc, r| acc.union(r));
        let s_list = used.union(&ColorSet::range(universe as Color, fresh));
        let mut lists = vec![s_list; n];
        for (i, &v) in outside.iter().enumerate() {
            lists[v] = rows[i].clone();
        }
        let lists = ListAssignment::new(lists);
        let t = Canvas::on_map(a, map.clone(), s.clone(), lists.clone()).expect("valid canvas");
        if t.is_critical().expect("criticality is decidable here") {
            found = Some(lists);
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    });
    found
}

fn discover_on(index: usize, map: Arc<PlaneMap>, a: usize) -> Discovery {
    let g = map.graph().clone();
    let n = g.vertex_count();
    let mut out = Discovery::default();
    let part = &mut out.stats;
    let deg3: Vec<usize> = (0..n).filter(|&v| g.degree(v) >= 3).collect();
    // verdicts keyed by (outside, chords, S-edges among roots)
    let mut memo: HashMap<(u32, Vec<usize>, Vec<usize>), Option<ListAssignment>> = HashMap::new();
    for omask in 0u32..(1 << deg3.len()) {
        let outside: Vec<usize> = (0..deg3.len())
            .filter(|i| omask >> i & 1 == 1)
            .map(|i| deg3[i])
            .collect();
        let in_s = |v: usize| !outside.contains(&v);
        let s_edges: Vec<usize> = (0..g.edge_count())
            .filter(|&e| {
                let (u, v) = g.edge(e);
                in_s(u) && in_s(v)
            })
            .collect();
        for emask in 0u64..(1 << s_edges.len()) {
            if outside.is_empty() && emask == (1 << s_edges.len()) - 1 {
                continue;
            }
            let chosen: Vec<usize> = (0..s_edges.len())
                .filter(|i| emask >> i & 1 == 1)
                .map(|i| s_edges[i])
                .collect();
            let s = Subgraph::from_parts(&g, (0..n).filter(|&v| in_s(v)), chosen.iter().copied());
            if s.component_count(&g) > 2 {
                continue;
            }
            part.bump("canvases_considered", 1);
            let chords: Vec<usize> = s_edges.iter().copied().filter(|&e| !s.has_edge(e)).collect();
            let mut root = vec![false; n];
            for e in (0..g.edge_count()).filter(|&e| !s.has_edge(e)) {
                let (u, v) = g.edge(e);
                root[u] = true;
                root[v] = true;
            }
            let root_edges: Vec<usize> = chosen
                .iter()
                .copied()
                .filter(|&e| {
                    let (u, v) = g.edge(e);
                    root[u] && root[v]
                })
                .collect();
            let key = (omask, chords, root_edges);
            let lists = match memo.get(&key) {
                Some(l) => l.clone(),
                None => {
                    part.bump("criticality_keys", 1);
                    let l = critical_lists(&map, &s, &outside, a, part);
                    memo.insert(key, l.clone());
                    l
                }
            };
            if let Some(lists) = lists {
                let t = Canvas::on_map(a, map.clone(), s, lists).expect("valid canvas");
                part.bump("critical", 1);
                out.canvases.push(Discovered {
                    graph: index,
                    canvas: t,
                });
            }
        }
    }
    out
}

/// Critical canvases with `c(S) ≤ 2` on connected maps with at most `nmax`
/// vertices.
pub fn discover(nmax: usize, a: usize) -> Result<Discovery, SuiteError> {
    let maps = enumerate_plane_girth5(nmax)?;
    let parts: Vec<Discovery> = maps
        .into_par_iter()
        .enumerate()
        .map(|(i, m)| discover_on(i, Arc::new(m), a))
        .collect();
    let mut all = Discovery::default();
    all.stats.bump("graphs", parts.len() as u64);
    for p in parts {
        all.canvases.extend(p.canvases);
        for (k, v) in p.stats.stats {
            all.stats.bump(&k, v);
        }
    }
    Ok(all)
}

fn label(d: &Discovered, a: usize) -> String {
    let t = &d.canvas;
    format!("a{a}/graph{}/v{}e{}", d.graph, t.potentials().v, t.potentials().e)
}

fn check_canvas_bound(d: &Discovered, a: usize, mutate: bool, part: &mut Partial) {
    let t = &d.canvas;
    let p = t.potentials();
    if t.shape() != Shape::NonSingular {
        part.bump("singular", 1);
        return;
    }
    part.bump("non_singular", 1);
    part.min("min_non_singular_d88", p.d88.max(0) as u64);
    let holds = p.d88 >= CANVAS_BOUND88;
    if holds == mutate {
        part.violation(
            label(d, a),
            format!("d88 = {} below {CANVAS_BOUND88}", p.d88),
            canvas_witness(t),
        );
    }
}

fn check_neipaths(d: &Discovered, a: usize, mutate: bool, part: &mut Partial) {
    let t = &d.canvas;
    match t.verify_lemma_neipaths() {
        Ok(o) if o.hit.holds(t) != mutate => part.bump(&format!("outcome_{}", o.outcome), 1),
        Ok(o) => part.violation(
            label(d, a),
            format!("outcome ({}) does not re-validate", o.outcome),
            canvas_witness(t),
        ),
        Err(e) => part.violation(label(d, a), e.to_string(), canvas_witness(t)),
    }
}

fn check_neiparel(d: &Discovered, a: usize, mutate: bool, part: &mut Partial) {
    let t = &d.canvas;
    match t.verify_lemma_neiparel() {
        Ok(o) => {
            let mut r = t.clone();
            let mut ok = true;
            for p in &o.relaxed {
                match r.relax(*p) {
                    Ok(next) => r = next,
                    Err(_) => ok = false,
                }
            }
            ok &= o.relaxed.len() <= 2 && o.hit.holds(&r);
            ok &= match o.outcome {
                1 => matches!(o.hit, ConfigurationHit::ChordEdge { .. }),
                2 => matches!(o.hit, ConfigurationHit::TwoNeighborVertex { .. }),
                3 => matches!(o.hit, ConfigurationHit::NeighboringClaw { .. }),
                4 => matches!(o.hit, ConfigurationHit::SemiNeighboring3 { .. }),
                _ => matches!(o.hit, ConfigurationHit::SemiNeighboring5 { .. }),
            };
            if ok != mutate {
                part.bump(&format!("outcome_{}", o.outcome), 1);
                part.max("max_relaxation_depth", o.relaxed.len() as u64);
            } else {
                part.violation(
                    label(d, a),
                    format!("outcome ({}) does not re-validate", o.outcome),
                    canvas_witness(t),
                );
            }
        }
        Err(e) => part.violation(label(d, a), e.to_string(), canvas_witness(t)),
    }
}

/// Criticality of `T|H` for `H = S` plus one component of `G - V(S)` with
/// all its edges, and of `T/H` for `H = G - e` and for `H = S` plus one
/// outside vertex with its edges to `S`.
fn check_sgcrit(d: &Discovered, a: usize, mutate: bool, part: &mut Partial) {
    let t = &d.canvas;
    let g = t.host();
    let mut subgraphs = Vec::new();
    let outside = Subgraph::induced(g, t.outside_vertices());
    let (comp, count) = g.components(Some(&outside));
    for c in 0..count {
        let mut h = t.s.clone();
        for v in t.outside_vertices().filter(|&v| comp[v] == Some(c)) {
            h.add_vertex(v);
            for &(_, e) in g.incident(v) {
                if t.g.has_edge(e) {
                    h.add_edge(g, e);
                }
            }
        }
        subgraphs.push(h);
    }
    for v in t.outside_vertices() {
        let mut h = t.s.clone();
        h.add_vertex(v);
        for &(w, e) in g.incident(v) {
            if t.g.has_edge(e) && t.s.has_vertex(w) {
                h.add_edge(g, e);
            }
        }
        subgraphs.push(h);
    }
    for e in t.outside_edges() {
        let mut h = t.g.clone();
        h.remove_edge(e);
        subgraphs.push(h);
    }
    for h in subgraphs {
        match t.verify_sub_super_criticality(&h) {
            Ok((sub, sup)) => {
                for verdict in [sub, sup].into_iter().flatten() {
                    part.bump("claims_checked", 1);
                    if verdict == mutate {
                        part.violation(
                            label(d, a),
                            "a derived canvas is not critical".to_string(),
                            canvas_witness(t),
                        );
                    }
                }
            }
            Err(e) => part.violation(label(d, a), e.to_string(), canvas_witness(t)),
        }
    }
}

/// Runs discovery once per `a` and applies the named check to each critical
/// canvas.
pub fn run_discovery_suite(name: &str, params: &SuiteParams) -> Result<SuiteResult, SuiteError> {
    let mut result = SuiteResult::new(name, params);
    for &a in &params.a {
        let found = discover(params.nmax, a)?;
        result.absorb(found.stats);
        let parts: Vec<Partial> = found
            .canvases
            .par_iter()
            .map(|d| {
                let mut part = Partial::default();
                match name {
                    "thm-canvas" => check_canvas_bound(d, a, params.mutate, &mut part),
                    "lemma-neipaths" => check_neipaths(d, a, params.mutate, &mut part),
                    "lemma-neiparel" => check_neiparel(d, a, params.mutate, &mut part),
                    _ => check_sgcrit(d, a, params.mutate, &mut part),
                }
                part
            })
            .collect();
        result.instances += found.canvases.len() as u64;
        for p in parts {
            result.absorb(p);
        }
    }
    Ok(result)
}

/// Potentials straight from the definitions, as `(v, e, q, 88 def, 88 s,
/// 88 d)`.
fn recount(g: &Graph, gs: &Subgraph, s: &Subgraph) -> [i64; 6] {
    let v = gs.vertices().filter(|&x| !s.has_vertex(x)).count() as i64;
    let e = gs.edges().filter(|&x| !s.has_edge(x)).count() as i64;
    let q: i64 = s
        .vertices()
        .map(|x| {
            g.incident(x)
                .iter()
                .filter(|&&(_, id)| gs.has_edge(id) && !s.has_edge(id))
                .count() as i64
        })
        .sum();
    let def = SCALE * (3 * e - 5 * v);
    let sv = EPS88 * v + ALPHA88 * q;
    [v, e, q, def, sv, def - sv]
}

fn as_array(p: &PotentialReport) -> [i64; 6] {
    [p.v as i64, p.e as i64, p.q as i64, p.def88, p.s88, p.d88]
}

fn random_subgraph_between(rng: &mut ChaCha8Rng, g: &Graph, lo: &Subgraph, hi: &Subgraph) -> Subgraph {
    let mut h = lo.clone();
    for v in hi.vertices() {
        if !h.has_vertex(v) && rng.random_bool(0.5) {
            h.add_vertex(v);
        }
    }
    for e in hi.edges() {
        let (u, v) = g.edge(e);
        if !h.has_edge(e) && h.has_vertex(u) && h.has_vertex(v) && rng.random_bool(0.5) {
            h.add_edge(g, e);
        }
    }
    h
}

/// Samples canvases `T` over the enumerated maps and subgraphs `S ⊆ H ⊆ G`,
/// checking the additivity identities against a recount from the
/// definitions.
pub fn run_additivity_suite(params: &SuiteParams) -> Result<SuiteResult, SuiteError> {
    let mut result = SuiteResult::new("lemma-addit", params);
    let maps: Vec<Arc<PlaneMap>> = enumerate_plane_girth5(params.nmax)?.into_iter().map(Arc::new).collect();
    let chunks = 64usize;
    let per = params.samples.div_ceil(chunks);
    let parts: Vec<Partial> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut part = Partial::default();
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed ^ (c as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            for i in 0..per.min(params.samples.saturating_sub(c * per)) {
                let map = maps[rng.random_range(0..maps.len())].clone();
                let g = map.graph();
                let full = Subgraph::full(g);
                let gsub = random_subgraph_between(&mut rng, g, &Subgraph::empty(g), &full);
                let s = random_subgraph_between(&mut rng, g, &Subgraph::empty(g), &gsub);
                let h = random_subgraph_between(&mut rng, g, &s, &gsub);
                let a = params.a[rng.random_range(0..params.a.len())];
                let lists = ListAssignment::uniform(g.vertex_count(), 3 * a);
                let t = Canvas::new(a, map.clone(), gsub.clone(), s.clone(), lists).expect("valid canvas");
                part.instances += 1;
                let add = t.additivity(&h).expect("S ⊆ H ⊆ G");
                let rt = recount(g, &gsub, &s);
                let rsub = recount(g, &h, &s);
                let rsup = recount(g, &gsub, &h);
                let q_cross: i64 = h
                    .vertices()
                    .filter(|&v| !s.has_vertex(v))
                    .map(|v| {
                        g.incident(v)
                            .iter()
                            .filter(|&&(_, e)| gsub.has_edge(e) && !h.has_edge(e))
                            .count() as i64
                    })
                    .sum();
                let mut problems = Vec::new();
                if as_array(&t.potentials()) != rt {
                    problems.push("potentials differ from the recount".to_string());
                }
                let identities = [
                    ("def", rt[3] - rsub[3] - rsup[3]),
                    ("v", rt[0] - rsub[0] - rsup[0]),
                    ("e", rt[1] - rsub[1] - rsup[1]),
                    ("q", rt[2] - rsub[2] - rsup[2] + q_cross),
                    ("d", rt[5] - (rsub[5] + ALPHA88 * q_cross) - rsup[5]),
                ];
                for (name, r) in identities {
                    if r != 0 {
                        problems.push(format!("{name} identity off by {r}"));
                    }
                }
                if rt[4] > rsub[4] + rsup[4] {
                    problems.push("s is not subadditive".into());
                }
                if rt[5] < rsub[5] + rsup[5] {
                    problems.push("d is not superadditive".into());
                }
                let agree = add.exact() == problems.is_empty();
                if !agree {
                    problems.push(format!("canvas residuals {add:?} disagree with the recount"));
                }
                if params.mutate {
                    problems.push("forced failure".into());
                }
                if !problems.is_empty() {
                    let witness = serde_json::json!({
                        "instance": canvas_witness(&t),
                        "h_vertices": h.vertices().collect::<Vec<_>>(),
                        "h_edges": h.edges().map(|e| g.edge(e)).collect::<Vec<_>>(),
                    });
                    part.violation(format!("sample{}", c * per + i), problems.join("; "), witness);
                }
            }
            part
        })
        .collect();
    for p in parts {
        result.absorb(p);
    }
    Ok(result)
}

/// Canvases with at most one vertex outside `S` against the closed forms.
pub fn run_small_canvas_suite(params: &SuiteParams) -> Result<SuiteResult, SuiteError> {
    let mut result = SuiteResult::new("lemma-small", params);
    let maps = enumerate_plane_girth5(params.nmax)?;
    for map in maps {
        let map = Arc::new(map);
        let g = map.graph();
        let n = g.vertex_count();
        for out in std::iter::once(None).chain((0..n).map(Some)) {
            let allowed: Vec<usize> = (0..g.edge_count())
                .filter(|&e| out.is_none_or(|v| g.edge(e).0 != v && g.edge(e).1 != v))
                .collect();
            for emask in 0u64..(1 << allowed.len()) {
                let edges = (0..allowed.len()).filter(|i| emask >> i & 1 == 1).map(|i| allowed[i]);
                let s = Subgraph::from_parts(g, (0..n).filter(|&v| Some(v) != out), edges);
                let t = Canvas::on_map(1, map.clone(), s, ListAssignment::uniform(n, 3)).expect("valid canvas");
                result.instances += 1;
                let e = t.potentials().e as i64;
                // (3 - 2α) e, and −5 + α deg(v) − ε on top for one vertex
                let expected = match out {
                    None => (3 * SCALE - 2 * ALPHA88) * e,
                    Some(v) => (3 * SCALE - 2 * ALPHA88) * e - 5 * SCALE + ALPHA88 * g.degree(v) as i64 - EPS88,
                };
                let got = t.potentials().d88;
                if (got == expected && t.small_canvas_d88() == Some(expected)) == params.mutate {
                    result.violations.push(super::Violation {
                        instance: format!(
                            "n{n}/out{}/edges{emask:#x}",
                            out.map_or("-".to_string(), |v| v.to_string())
                        ),
                        detail: format!("d88 = {got}, expected {expected}"),
                        witness: canvas_witness(&t),
                    });
                }
            }
        }
    }
    Ok(result)
}

/// The standard dodecahedron: outer 5-cycle `0..5`, middle 10-cycle
/// `5..15`, inner 5-cycle `15..20`.
pub fn dodecahedron() -> PlaneMap {
    let mut pos = vec![(0.0f64, 0.0f64); 20];
    let at = |r: f64, deg: f64| (r * deg.to_radians().cos(), r * deg.to_radians().sin());
    for i in 0..5 {
        pos[i] = at(3.0, 72.0 * i as f64);
        pos[5 + 2 * i] = at(2.0, 72.0 * i as f64);
        pos[6 + 2 * i] = at(2.0, 72.0 * i as f64 + 36.0);
        pos[15 + i] = at(1.0, 72.0 * i as f64 + 36.0);
    }
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, 5 + 2 * i));
        edges.push((15 + i, 15 + (i + 1) % 5));
        edges.push((15 + i, 6 + 2 * i));
    }
    for j in 0..10 {
        edges.push((5 + j, 5 + (j + 1) % 10));
    }
    let g = Graph::from_edges(20, &edges).expect("simple");
    let rot: Vec<Vec<usize>> = (0..20)
        .map(|v| {
            let mut ns: Vec<usize> = g.neighbors(v).collect();
            let angle = |w: &usize| (pos[*w].1 - pos[v].1).atan2(pos[*w].0 - pos[v].0);
            ns.sort_by(|x, y| angle(x).total_cmp(&angle(y)));
            ns
        })
        .collect();
    PlaneMap::build(&rot).expect("plane rotation")
}

/// Every pair of distinct faces bounded by cycles, across all embeddings
/// of the enumerated graphs, random maps and the dodecahedron.
pub fn run_hypcyl_suite(params: &SuiteParams) -> Result<SuiteResult, SuiteError> {
    let mut result = SuiteResult::new("hypcyl", params);
    let mut corpus: Vec<(String, PlaneMap)> = Vec::new();
    for (i, g) in enumerate_girth5_graphs(params.nmax)?.iter().enumerate() {
        for (j, m) in inequivalent_embeddings(g).into_iter().enumerate() {
            corpus.push((format!("graph{i}/embedding{j}"), m));
        }
    }
    let random = params.samples.min(200);
    for k in 0..random {
        let n = 10 + k % 31;
        corpus.push((
            format!("random{k}/n{n}"),
            random_plane_girth5(params.seed.wrapping_add(k as u64), n, 20),
        ));
    }
    corpus.push(("dodecahedron".into(), dodecahedron()));
    let a = params.a.first().copied().unwrap_or(1);
    let parts: Vec<Partial> = corpus
        .into_par_iter()
        .map(|(name, map)| {
            let mut part = Partial::default();
            let map = Arc::new(map);
            let g = map.graph();
            let cycles: Vec<_> = (0..map.face_count())
                .filter_map(|f| map.face_cycle(f).map(|c| (f, c)))
                .collect();
            let lists = ListAssignment::uniform(g.vertex_count(), 3 * a);
            // criticality is only decided on the small maps
            let decide = g.vertex_count() <= 7;
            for i in 0..cycles.len() {
                for j in i + 1..cycles.len() {
                    let (c1, c2) = (&cycles[i].1, &cycles[j].1);
                    part.instances += 1;
                    let report = match verify_hypcyl(&map, c1, c2, &lists, a, decide) {
                        Ok(r) => r,
                        Err(e) => {
                            part.violation(&name, e.to_string(), serde_json::Value::Null);
                            continue;
                        }
                    };
                    // with V - E + F = 2: 3E - 5V + |C1| + |C2| = -Σ (|f| - 5) over the other faces
                    let other: i64 = (0..map.face_count())
                        .filter(|&f| f != cycles[i].0 && f != cycles[j].0)
                        .map(|f| map.face_len(f) as i64 - 5)
                        .sum();
                    if report.euler != -other {
                        part.violation(
                            &name,
                            format!("euler {} disagrees with the face recount {}", report.euler, -other),
                            serde_json::Value::Null,
                        );
                    }
                    if report.critical == Some(true) {
                        part.bump("critical", 1);
                    }
                    if report.euler == 0 {
                        part.bump("equality", 1);
                        if name == "dodecahedron" {
                            part.bump("dodecahedron_equality", 1);
                        }
                    }
                    let holds = report.euler_holds && report.violations.is_empty();
                    if holds == params.mutate {
                        let mut detail = format!("euler {}", report.euler);
                        for v in &report.violations {
                            detail.push_str("; ");
                            detail.push_str(v);
                        }
                        part.violation(&name, detail, serde_json::to_value(&report).expect("serializable"));
                    }
                }
            }
            part
        })
        .collect();
    for p in parts {
        result.absorb(p);
    }
    Ok(result)
}
