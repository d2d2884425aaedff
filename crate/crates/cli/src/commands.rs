use crate::{Outcome, SuiteArgs};
use anyhow::{anyhow, bail, Context, Result};
use fraclist_core::canvas::{verify_hypcyl, Canvas, Shape, CANVAS_BOUND88};
use fraclist_core::color::ColorSet;
use fraclist_core::coloring::{
    check_cor_distflaws_hypotheses, check_thm_2flaws_hypotheses, check_thm_cyl_hypotheses, compute_c, flaw_edges,
    is_pc_disjoint, is_set_coloring, Clause, SetColoring,
};
use fraclist_core::harness::{run_suite, SuiteParams};
use fraclist_core::instance::{read_planar_code, Instance, InstanceFile, FORMAT_VERSION};
use fraclist_core::solver::reduce::WorkingProblem;
use fraclist_core::solver::{extends, extract_critical};
use serde::Serialize;
use serde_json::json;
use std::path::Path;
use std::time::{Duration, Instant};

pub const THEOREMS: &[&str] = &["thm-cyl", "cor-distflaws", "thm-2flaws", "thm-canvas", "hypcyl"];

/// Suites that sample and so need an explicit seed.
const SEEDED_SUITES: &[&str] = &["lemma-addit", "hypcyl", "reductions", "crit-shortcut"];

fn load(path: &Path) -> Result<Instance> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file = InstanceFile::parse(&text).with_context(|| format!("parsing {}", path.display()))?;
    file.validate()
        .with_context(|| format!("validating {}", path.display()))
}

fn sets(c: &SetColoring) -> Vec<Option<Vec<u16>>> {
    c.0.iter().map(|s| s.as_ref().map(|s| s.iter().collect())).collect()
}

fn show(s: &ColorSet) -> String {
    let items: Vec<String> = s.iter().map(|c| c.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

pub fn solve(path: &Path, json: bool, timeout: Option<u64>) -> Result<Outcome> {
    let inst = load(path)?;
    let g = inst.map.graph();
    let deadline = timeout.map(|ms| Instant::now() + Duration::from_millis(ms));
    let found = WorkingProblem::new(g.clone(), inst.lists.clone(), inst.a).solve_until(deadline)?;
    match found {
        Some(c) => {
            if !is_set_coloring(g, &inst.lists, inst.a, &c) {
                bail!("internal error: the solver returned an invalid coloring");
            }
            if json {
                println!("{}", json!({"status": "sat", "coloring": sets(&c)}));
            } else {
                println!("(L:{})-coloring found", inst.a);
                for (v, s) in c.assigned() {
                    println!("{v}: {}", show(s));
                }
            }
        }
        None => {
            let core = extract_critical(g, &inst.lists, inst.a)?;
            let vertices: Vec<usize> = core.vertices().collect();
            let edges: Vec<[usize; 2]> = core
                .edges()
                .map(|e| {
                    let (u, v) = g.edge(e);
                    [u, v]
                })
                .collect();
            if json {
                println!(
                    "{}",
                    json!({"status": "unsat", "certificate": {"vertices": vertices, "edges": edges}})
                );
            } else {
                println!("no (L:{})-coloring", inst.a);
                println!("minimal non-colorable subgraph: vertices {vertices:?}, edges {edges:?}");
            }
        }
    }
    Ok(Outcome::Clean)
}

#[derive(Debug, Serialize)]
struct Conclusion {
    holds: bool,
    detail: String,
}

#[derive(Debug, Serialize)]
struct CheckReport {
    theorem: String,
    hypotheses: Vec<Clause>,
    hypotheses_hold: bool,
    /// Absent when the hypotheses fail.
    conclusion: Option<Conclusion>,
}

fn marked_faces<const K: usize>(inst: &Instance, theorem: &str) -> Result<[usize; K]> {
    inst.faces
        .clone()
        .try_into()
        .map_err(|f: Vec<usize>| anyhow!("faces: {theorem} needs {K} marked face(s), found {}", f.len()))
}

fn clause(id: &str, holds: bool, detail: impl Into<String>) -> Clause {
    Clause {
        id: id.into(),
        holds,
        witness: Vec::new(),
        detail: detail.into(),
    }
}

fn solver_conclusion(inst: &Instance) -> Result<Conclusion> {
    let p = WorkingProblem::new(inst.map.graph().clone(), inst.lists.clone(), inst.a);
    Ok(match p.solve()? {
        Some(_) => Conclusion {
            holds: true,
            detail: "SAT".into(),
        },
        None => Conclusion {
            holds: false,
            detail: "UNSAT".into(),
        },
    })
}

/// Every `(p0, c)`-disjoint coloring of the path extends.
fn path_conclusion(inst: &Instance) -> Result<Conclusion> {
    let g = inst.map.graph();
    let (lists, a) = (&inst.lists, inst.a);
    let path = inst
        .path
        .as_ref()
        .ok_or_else(|| anyhow!("path: thm-2flaws needs a marked path"))?;
    let c = compute_c(g, path, lists, a)?;
    let on_path = path.as_subgraph(g)?;
    let p = path.vertices();
    let choices: Vec<Vec<ColorSet>> = p.iter().map(|&v| lists.get(v).subsets(a)).collect();
    let mut index = vec![0usize; p.len()];
    let mut tried = 0u64;
    if choices.iter().any(|c| c.is_empty()) {
        return Ok(Conclusion {
            holds: true,
            detail: "P has no coloring".into(),
        });
    }
    loop {
        let mut psi = SetColoring::empty(g.vertex_count());
        for (i, &v) in p.iter().enumerate() {
            psi.set(v, choices[i][index[i]].clone());
        }
        let proper = p
            .windows(2)
            .all(|w| psi.get(w[0]).unwrap().is_disjoint(psi.get(w[1]).unwrap()));
        if proper && is_pc_disjoint(&psi, p[0], &c) {
            tried += 1;
            if !extends(g, None, lists, a, &on_path, &psi)? {
                let shown: Vec<String> = p
                    .iter()
                    .map(|&v| format!("{v}={}", show(psi.get(v).unwrap())))
                    .collect();
                return Ok(Conclusion {
                    holds: false,
                    detail: format!("coloring {} of P does not extend", shown.join(" ")),
                });
            }
        }
        // odometer over the per-vertex choices
        let mut i = 0;
        loop {
            if i == p.len() {
                return Ok(Conclusion {
                    holds: true,
                    detail: format!("all {tried} (p0,c)-disjoint colorings of P extend (c = {})", show(&c)),
                });
            }
            index[i] += 1;
            if index[i] < choices[i].len() {
                break;
            }
            index[i] = 0;
            i += 1;
        }
    }
}

fn canvas_check(inst: &Instance) -> Result<(Vec<Clause>, Option<Conclusion>)> {
    let s = inst
        .marked
        .clone()
        .ok_or_else(|| anyhow!("marked: thm-canvas needs a marked subgraph S"))?;
    let t = match Canvas::on_map(inst.a, inst.map.clone(), s, inst.lists.clone()) {
        Ok(t) => t,
        Err(e) => return Ok((vec![clause("canvas", false, e.to_string())], None)),
    };
    let comps = t.s_components();
    let mut clauses = vec![
        clause("canvas", true, "valid canvas"),
        clause(
            "s-components-at-most-2",
            comps <= 2,
            format!("S has {comps} components"),
        ),
    ];
    let shape = t.shape();
    clauses.push(clause(
        "non-singular",
        shape == Shape::NonSingular,
        format!("shape {shape}"),
    ));
    if clauses.iter().all(|c| c.holds) {
        let critical = t.is_critical()?;
        clauses.push(clause(
            "critical",
            critical,
            if critical { "critical" } else { "not critical" },
        ));
    }
    if !clauses.iter().all(|c| c.holds) {
        return Ok((clauses, None));
    }
    let bound = t.canvas_bound()?;
    let d = t.potentials().d();
    Ok((
        clauses,
        Some(Conclusion {
            holds: bound.holds,
            detail: format!(
                "d(T) = {d} (d88 = {}) {} 3 (d88 = {CANVAS_BOUND88})",
                bound.d88,
                if bound.holds { ">=" } else { "<" },
            ),
        }),
    ))
}

fn hypcyl_check(inst: &Instance, skip_criticality: bool) -> Result<(Vec<Clause>, Option<Conclusion>)> {
    let [f1, f2] = marked_faces::<2>(inst, "hypcyl")?;
    let map = &inst.map;
    let cycles = [map.face_cycle(f1), map.face_cycle(f2)];
    let mut clauses: Vec<Clause> = cycles
        .iter()
        .zip(["f1-is-a-cycle", "f2-is-a-cycle"])
        .map(|(c, id)| {
            clause(
                id,
                c.is_some(),
                if c.is_some() {
                    "facial cycle"
                } else {
                    "boundary walk repeats a vertex"
                },
            )
        })
        .collect();
    let girth = map.girth();
    clauses.push(clause(
        "girth-at-least-5",
        girth.is_none_or(|k| k >= 5),
        format!("girth {}", girth.map_or("infinite".to_string(), |k| k.to_string())),
    ));
    clauses.push(clause(
        "connected",
        map.is_connected(),
        if map.is_connected() {
            "connected"
        } else {
            "disconnected"
        },
    ));
    if !clauses.iter().all(|c| c.holds) {
        return Ok((clauses, None));
    }
    let [Some(c1), Some(c2)] = cycles else {
        unreachable!("checked above")
    };
    let r = verify_hypcyl(map, &c1, &c2, &inst.lists, inst.a, !skip_criticality)?;
    let mut detail = format!(
        "Euler value {} ({} 0), bound {} {} {}",
        r.euler,
        if r.euler_holds { "<=" } else { ">" },
        r.vertices,
        if r.bound_holds { "<=" } else { ">" },
        r.bound
    );
    match r.critical {
        Some(true) => detail.push_str("; critical, both asserted"),
        Some(false) => detail.push_str("; not critical, bound not asserted"),
        None => detail.push_str("; criticality not decided"),
    }
    for v in &r.violations {
        detail.push_str(&format!("; {v}"));
    }
    Ok((
        clauses,
        Some(Conclusion {
            holds: r.euler_holds && r.violations.is_empty(),
            detail,
        }),
    ))
}

pub fn check(path: &Path, theorem: &str, json: bool, skip_criticality: bool) -> Result<Outcome> {
    if !THEOREMS.contains(&theorem) {
        bail!("unknown theorem {theorem:?}; known: {}", THEOREMS.join(", "));
    }
    let inst = load(path)?;
    let (lists, a) = (&inst.lists, inst.a);
    let (hypotheses, conclusion) = match theorem {
        "thm-cyl" | "cor-distflaws" => {
            let report = if theorem == "thm-cyl" {
                let [f1, f2] = marked_faces::<2>(&inst, theorem)?;
                check_thm_cyl_hypotheses(&inst.map, f1, f2, lists, a)?
            } else {
                let [f] = marked_faces::<1>(&inst, theorem)?;
                check_cor_distflaws_hypotheses(&inst.map, f, lists, a)?
            };
            let conclusion = if report.passed() {
                Some(solver_conclusion(&inst)?)
            } else {
                None
            };
            (report.clauses, conclusion)
        }
        "thm-2flaws" => {
            let path = inst
                .path
                .as_ref()
                .ok_or_else(|| anyhow!("path: thm-2flaws needs a marked path"))?;
            let report = check_thm_2flaws_hypotheses(&inst.map, path, lists, a)?;
            let conclusion = if report.passed() {
                Some(path_conclusion(&inst)?)
            } else {
                None
            };
            (report.clauses, conclusion)
        }
        "thm-canvas" => canvas_check(&inst)?,
        _ => hypcyl_check(&inst, skip_criticality)?,
    };
    let report = CheckReport {
        theorem: theorem.into(),
        hypotheses_hold: hypotheses.iter().all(|c| c.holds),
        hypotheses,
        conclusion,
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        for c in &report.hypotheses {
            println!("{}: {} ({})", c.id, if c.holds { "PASS" } else { "FAIL" }, c.detail);
        }
        match &report.conclusion {
            Some(c) => println!(
                "hypotheses: PASS; conclusion ({}): {}",
                if theorem == "thm-cyl" || theorem == "cor-distflaws" {
                    "solver"
                } else {
                    theorem
                },
                c.detail
            ),
            None => {
                let failed: Vec<&str> = report
                    .hypotheses
                    .iter()
                    .filter(|c| !c.holds)
                    .map(|c| c.id.as_str())
                    .collect();
                println!("hypotheses: FAIL ({}); conclusion not attempted", failed.join(", "));
            }
        }
    }
    Ok(match report.conclusion {
        Some(Conclusion { holds: false, .. }) => Outcome::Alarm,
        _ => Outcome::Clean,
    })
}

pub fn suite(args: SuiteArgs) -> Result<Outcome> {
    if SEEDED_SUITES.contains(&args.name.as_str()) && args.seed.is_none() {
        bail!("seed: suite {} samples at random and needs --seed", args.name);
    }
    if args.a.is_empty() || args.a.contains(&0) {
        bail!("a: values must be positive");
    }
    let params = SuiteParams {
        nmax: args.nmax,
        a: args.a,
        universe: args.universe,
        seed: args.seed.unwrap_or(0),
        samples: args.samples,
        threads: args.threads,
        timeout_ms: args.timeout,
        mutate: args.mutate,
    };
    let result = run_suite(&args.name, &params)?;
    std::fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let json_path = args.out.join(format!("{}.json", result.suite));
    let csv_path = args.out.join(format!("{}.csv", result.suite));
    std::fs::write(&json_path, result.to_json()).with_context(|| format!("writing {}", json_path.display()))?;
    std::fs::write(&csv_path, result.to_csv()).with_context(|| format!("writing {}", csv_path.display()))?;
    if args.json {
        println!("{}", result.to_json());
    } else {
        println!(
            "{}: {} instances, {} violations, {:.2?}",
            result.suite,
            result.instances,
            result.violations.len(),
            result.elapsed
        );
        for (k, v) in &result.stats {
            println!("  {k} = {v}");
        }
        for v in result.violations.iter().take(5) {
            println!("violation {}: {}", v.instance, v.detail);
        }
        println!("wrote {} and {}", json_path.display(), csv_path.display());
    }
    Ok(if result.passed() {
        Outcome::Clean
    } else {
        Outcome::Alarm
    })
}

pub fn export(path: &Path, json: bool) -> Result<Outcome> {
    let inst = load(path)?;
    let g = inst.map.graph();
    let a = inst.a;
    let flaws = flaw_edges(g, &inst.lists, a, inst.path.as_ref());
    let on_path = match &inst.path {
        Some(p) => p.edge_ids(g)?,
        None => Vec::new(),
    };
    let mut comments = vec![format!("a = {a}")];
    for (i, &f) in inst.faces.iter().enumerate() {
        let walk: Vec<String> = inst.map.face_walk(f).iter().map(|v| v.to_string()).collect();
        comments.push(format!("marked face f{}: {}", i + 1, walk.join(" ")));
    }
    if let Some(p) = &inst.path {
        comments.push(format!("path P: {:?}", p.vertices()));
    }
    let text = inst.map.to_dot(
        |v| format!("{v}\\n|L|={}", inst.lists.size(v)),
        |e| {
            let (u, v) = g.edge(e);
            if flaws.contains(&(u, v)) {
                Some("color=red, penwidth=2, label=\"flaw\"".into())
            } else if on_path.contains(&e) {
                Some("style=bold".into())
            } else if inst.marked.as_ref().is_some_and(|s| s.has_edge(e)) {
                Some("color=blue".into())
            } else {
                None
            }
        },
        &comments,
    );
    if json {
        println!("{}", json!({"dot": text, "instance": inst.to_file()}));
    } else {
        print!("{text}");
    }
    Ok(Outcome::Clean)
}

pub fn import(path: &Path, a: usize, list_size: Option<usize>) -> Result<Outcome> {
    if a == 0 {
        bail!("a: must be positive");
    }
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let size = list_size.unwrap_or(3 * a);
    for (i, rotation) in read_planar_code(&bytes)?.into_iter().enumerate() {
        let n = rotation.len();
        let file = InstanceFile {
            version: FORMAT_VERSION,
            a,
            rotation,
            lists: vec![(0..size as u16).collect(); n],
            outer: None,
            faces: Vec::new(),
            path: None,
            marked: None,
        };
        file.validate().with_context(|| format!("graph {i}"))?;
        println!("{}", serde_json::to_string(&file)?);
    }
    Ok(Outcome::Clean)
}
