//! The eight acceptance criteria, one PASS/FAIL line each. Exits nonzero if
//! any criterion fails.

use fraclist_core::canvas::{verify_hypcyl, Canvas, Shape, CANVAS_BOUND88, HYPCYL_FACTOR};
use fraclist_core::coloring::ListAssignment;
use fraclist_core::graph::Subgraph;
use fraclist_core::harness::canvases::dodecahedron;
use fraclist_core::harness::{run_suite, SuiteParams, SuiteResult};
use fraclist_core::planar_map::{CycleRef, PlaneMap};
use std::sync::Arc;
use std::time::{Duration, Instant};

const CONSTANTS_LIMIT: Duration = Duration::from_secs(1);
const ADDITIVITY_LIMIT: Duration = Duration::from_secs(60);
const ADDITIVITY_SAMPLES: usize = 10_000;
const ADDITIVITY_NMAX: usize = 9;
const FACE_THEOREMS_LIMIT: Duration = Duration::from_secs(30 * 60);
const FACE_THEOREMS_NMAX: usize = 8;
const CANVAS_LIMIT: Duration = Duration::from_secs(30 * 60);
/// Discovery scopes as `(a, nmax)`.
const CANVAS_SCOPES: [(usize, usize); 2] = [(1, 9), (2, 7)];
const REDUCTIONS_LIMIT: Duration = Duration::from_secs(10 * 60);
const REDUCTIONS_NMAX: usize = 9;
const REDUCTIONS_SAMPLES: usize = 50_000;
const SHORTCUT_LIMIT: Duration = Duration::from_secs(10 * 60);
const SHORTCUT_SCOPES: [(usize, usize); 2] = [(1, 7), (2, 6)];
const EULER_PER_INSTANCE: Duration = Duration::from_secs(1);
const EULER_NMAX: usize = 8;
const SEED: u64 = 2024;

type Verdict = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Verdict);

fn params(nmax: usize, a: &[usize]) -> SuiteParams {
    SuiteParams {
        nmax,
        a: a.to_vec(),
        seed: SEED,
        ..SuiteParams::default()
    }
}

fn suite(name: &str, p: &SuiteParams) -> Result<SuiteResult, String> {
    let r = run_suite(name, p).map_err(|e| format!("{name}: {e}"))?;
    match r.violations.first() {
        None if r.instances > 0 => Ok(r),
        None => Err(format!("{name}: no instances checked")),
        Some(v) => Err(format!(
            "{name}: {} violations, first {} ({})",
            r.violations.len(),
            v.instance,
            v.detail
        )),
    }
}

fn map_of(rot: Vec<Vec<usize>>) -> Arc<PlaneMap> {
    Arc::new(PlaneMap::build(&rot).expect("plane rotation"))
}

fn constants() -> Verdict {
    let edge = map_of(vec![vec![1], vec![0]]);
    let chord = Canvas::on_map(
        1,
        edge.clone(),
        Subgraph::from_parts(edge.graph(), [0, 1], []),
        ListAssignment::uniform(2, 1),
    )
    .map_err(|e| e.to_string())?;
    let claw = map_of(vec![vec![1, 2, 3], vec![0], vec![0], vec![0]]);
    let tripod = Canvas::on_map(
        1,
        claw.clone(),
        Subgraph::from_parts(claw.graph(), [1, 2, 3], []),
        ListAssignment::uniform(4, 3),
    )
    .map_err(|e| e.to_string())?;
    let whole = Canvas::on_map(
        1,
        claw.clone(),
        Subgraph::full(claw.graph()),
        ListAssignment::uniform(4, 3),
    )
    .map_err(|e| e.to_string())?;
    let got = (
        chord.shape(),
        chord.potentials().d88,
        chord.potentials().d().to_string(),
        tripod.shape(),
        tripod.potentials().d88,
        tripod.potentials().d().to_string(),
        whole.potentials().d88,
        HYPCYL_FACTOR,
    );
    let want = (
        Shape::Chord,
        198,
        "9/4".to_string(),
        Shape::Tripod,
        252,
        "63/22".to_string(),
        0,
        89,
    );
    if got == want {
        Ok("chord d = 9/4 (198/88), tripod d = 63/22 (252/88), d(G = S) = 0, (1 + ε)/ε = 89".into())
    } else {
        Err(format!("got {got:?}"))
    }
}

fn additivity() -> Verdict {
    let p = SuiteParams {
        samples: ADDITIVITY_SAMPLES,
        ..params(ADDITIVITY_NMAX, &[1, 2])
    };
    let r = suite("lemma-addit", &p)?;
    if (r.instances as usize) < ADDITIVITY_SAMPLES {
        return Err(format!("only {} pairs sampled", r.instances));
    }
    Ok(format!(
        "{} (T, H) pairs on maps up to {ADDITIVITY_NMAX} vertices, 0 violations",
        r.instances
    ))
}

fn face_theorems() -> Verdict {
    let p = params(FACE_THEOREMS_NMAX, &[1, 2]);
    let mut parts = Vec::new();
    for name in ["thm-cyl", "cor-distflaws", "thm-2flaws"] {
        let r = suite(name, &p)?;
        parts.push(format!("{name} {}", r.instances));
    }
    Ok(format!(
        "a in {{1, 2}}, n <= {FACE_THEOREMS_NMAX}, instances: {}, 0 counterexamples",
        parts.join(", ")
    ))
}

fn canvas_bound() -> Verdict {
    let mut parts = Vec::new();
    for (a, nmax) in CANVAS_SCOPES {
        let r = suite("thm-canvas", &params(nmax, &[a]))?;
        parts.push(format!(
            "a = {a}, n <= {nmax}: {} critical, {} non-singular, min d88 {}",
            r.instances,
            r.stat("non_singular"),
            r.stat("min_non_singular_d88")
        ));
        if r.stat("non_singular") > 0 && (r.stat("min_non_singular_d88") as i64) < CANVAS_BOUND88 {
            return Err(format!(
                "minimum d88 {} below {CANVAS_BOUND88}",
                r.stat("min_non_singular_d88")
            ));
        }
    }
    Ok(parts.join("; "))
}

/// Nonzero `outcome_*` counters as `label count` pairs.
fn outcomes(r: &SuiteResult, labels: &[&str]) -> String {
    labels
        .iter()
        .map(|l| (l, r.stat(&format!("outcome_{l}"))))
        .filter(|&(_, k)| k > 0)
        .map(|(l, k)| format!("{l} {k}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn configurations() -> Verdict {
    let mut parts = Vec::new();
    for (a, nmax) in CANVAS_SCOPES {
        let p = params(nmax, &[a]);
        let paths = suite("lemma-neipaths", &p)?;
        let relaxed = suite("lemma-neiparel", &p)?;
        parts.push(format!(
            "a = {a}, n <= {nmax}: {} canvases, outcomes ({}) and ({}), relaxation depth <= {}",
            paths.instances,
            outcomes(&paths, &["a", "b", "c", "d", "e"]),
            outcomes(&relaxed, &["1", "2", "3", "4", "5"]),
            relaxed.stat("max_relaxation_depth")
        ));
    }
    Ok(format!("{}, 0 alarms", parts.join("; ")))
}

fn reductions() -> Verdict {
    let p = SuiteParams {
        samples: REDUCTIONS_SAMPLES,
        ..params(REDUCTIONS_NMAX, &[1, 2])
    };
    let r = suite("reductions", &p)?;
    Ok(format!(
        "{} instances up to {REDUCTIONS_NMAX} vertices, a in {{1, 2}}, 0 violations",
        r.instances
    ))
}

fn shortcut() -> Verdict {
    let mut parts = Vec::new();
    for (a, nmax) in SHORTCUT_SCOPES {
        let r = suite("crit-shortcut", &params(nmax, &[a]))?;
        if r.stat("skipped_over_budget") > 0 {
            return Err(format!(
                "{} instances skipped over budget",
                r.stat("skipped_over_budget")
            ));
        }
        parts.push(format!("a = {a}, n <= {nmax}: {} instances agree", r.instances));
    }
    Ok(parts.join("; "))
}

fn euler() -> Verdict {
    let start = Instant::now();
    let r = suite("hypcyl", &params(EULER_NMAX, &[1]))?;
    let per = start.elapsed() / r.instances.max(1) as u32;
    if per > EULER_PER_INSTANCE {
        return Err(format!("{per:?} per instance"));
    }
    let d = Arc::new(dodecahedron());
    let report = verify_hypcyl(
        &d,
        &CycleRef((0..5).collect()),
        &CycleRef((15..20).collect()),
        &ListAssignment::uniform(20, 3),
        1,
        false,
    )
    .map_err(|e| e.to_string())?;
    if report.euler != 0 || r.stat("dodecahedron_equality") == 0 {
        return Err(format!("dodecahedron value {}", report.euler));
    }
    Ok(format!(
        "{} face pairs, {} with equality, dodecahedron value 0, {per:?} per instance",
        r.instances,
        r.stat("equality")
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("exact constants", CONSTANTS_LIMIT, constants),
        ("additivity", ADDITIVITY_LIMIT, additivity),
        ("face and path theorems", FACE_THEOREMS_LIMIT, face_theorems),
        ("canvas bound", CANVAS_LIMIT, canvas_bound),
        ("configuration and relaxation outcomes", CANVAS_LIMIT, configurations),
        ("reductions", REDUCTIONS_LIMIT, reductions),
        ("criticality shortcut", SHORTCUT_LIMIT, shortcut),
        ("euler inequality", Duration::MAX, euler),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let verdict = run();
        let elapsed = start.elapsed();
        let verdict = match verdict {
            Ok(detail) if elapsed > limit => Err(format!("{detail}; took {elapsed:.1?}, limit {limit:?}")),
            v => v,
        };
        match verdict {
            Ok(detail) => println!("criterion {} ({name}): PASS ({detail}; {elapsed:.1?})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL ({detail}; {elapsed:.1?})", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of 8 criteria failed");
        std::process::exit(1);
    }
    println!("all 8 criteria passed");
}
