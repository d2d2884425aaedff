use fraclist_core::coloring::{is_set_coloring, ListAssignment, SetColoring};
use fraclist_core::harness::canvases::dodecahedron;
use fraclist_core::instance::{write_planar_code, Instance, InstanceFile};
use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn fraclist(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_fraclist"))
        .args(args)
        .env("FRACLIST_THREADS", "1")
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn cycle_rotation(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|i| vec![(i + n - 1) % n, (i + 1) % n]).collect()
}

fn instance_json(a: usize, rotation: Vec<Vec<usize>>, lists: Vec<Vec<u16>>, faces: Vec<[usize; 2]>) -> String {
    serde_json::to_string(&InstanceFile {
        version: 1,
        a,
        rotation,
        lists,
        outer: None,
        faces,
        path: None,
        marked: None,
    })
    .unwrap()
}

#[test]
fn solve_finds_a_valid_coloring() {
    let dir = TempDir::new().unwrap();
    let text = instance_json(2, cycle_rotation(5), vec![(0..5).collect(); 5], vec![]);
    let p = write(&dir, "c5.json", &text);
    let r = fraclist(&["solve", arg(&p), "--json"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["status"], "sat");
    let coloring: Vec<Option<Vec<u16>>> = serde_json::from_value(v["coloring"].clone()).unwrap();
    let inst = InstanceFile::parse(&text).unwrap().validate().unwrap();
    let c = SetColoring(
        coloring
            .into_iter()
            .map(|c| c.map(|s| s.into_iter().collect()))
            .collect(),
    );
    assert!(is_set_coloring(inst.map.graph(), &inst.lists, 2, &c));

    let plain = fraclist(&["solve", arg(&p)]);
    assert!(plain.stdout.starts_with("(L:2)-coloring found"));
    assert_eq!(plain.stdout.lines().count(), 6);
}

#[test]
fn solve_reports_a_certificate() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "edge.json",
        &instance_json(1, vec![vec![1], vec![0]], vec![vec![1], vec![1]], vec![]),
    );
    let r = fraclist(&["solve", arg(&p), "--json"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["status"], "unsat");
    assert_eq!(v["certificate"]["vertices"], serde_json::json!([0, 1]));
    assert_eq!(v["certificate"]["edges"].as_array().unwrap().len(), 1);
    assert!(fraclist(&["solve", arg(&p)]).stdout.starts_with("no (L:1)-coloring"));
}

#[test]
fn malformed_input_exits_with_two() {
    let dir = TempDir::new().unwrap();
    let garbage = write(&dir, "garbage.json", "{ not json");
    let r = fraclist(&["solve", arg(&garbage)]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.starts_with("error:"));

    let one_way = write(
        &dir,
        "rot.json",
        &instance_json(1, vec![vec![1], vec![]], vec![vec![0], vec![1]], vec![]),
    );
    let r = fraclist(&["solve", arg(&one_way)]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("rotation"), "{}", r.stderr);

    assert_eq!(fraclist(&["solve", "/nonexistent/instance.json"]).code, 2);
}

#[test]
fn check_reports_clauses_and_conclusion() {
    let dir = TempDir::new().unwrap();
    let good = write(
        &dir,
        "c5.json",
        &instance_json(
            1,
            cycle_rotation(5),
            vec![vec![0, 1, 2], vec![0, 1], vec![0, 1, 2], vec![0, 1, 2], vec![0, 1, 2]],
            vec![[0, 1]],
        ),
    );
    let r = fraclist(&["check", arg(&good), "--theorem", "cor-distflaws"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("girth-at-least-5: PASS"));
    assert!(
        r.stdout.contains("hypotheses: PASS; conclusion (solver): SAT"),
        "{}",
        r.stdout
    );

    let json = fraclist(&["check", arg(&good), "--theorem", "cor-distflaws", "--json"]);
    assert_eq!(json.code, 0);
    let v: Value = serde_json::from_str(&json.stdout).unwrap();
    assert!(v.is_object());

    // single-color lists break the list-size clause; the theorem says nothing
    let short = write(
        &dir,
        "short.json",
        &instance_json(1, cycle_rotation(5), vec![vec![0]; 5], vec![[0, 1], [1, 0]]),
    );
    let r = fraclist(&["check", arg(&short), "--theorem", "thm-cyl"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("lists-2a-or-3a: FAIL"));
    assert!(r.stdout.contains("hypotheses: FAIL"));
    assert!(r.stdout.contains("conclusion not attempted"));

    assert_eq!(fraclist(&["check", arg(&good), "--theorem", "no-such-theorem"]).code, 2);
}

#[test]
fn hypcyl_on_the_dodecahedron() {
    let map = Arc::new(dodecahedron());
    let face_of = |vs: &[usize]| (0..map.face_count()).find(|&f| map.face_vertices(f) == vs).unwrap();
    let inst = Instance {
        a: 1,
        map: map.clone(),
        lists: ListAssignment::uniform(20, 3),
        faces: vec![face_of(&[0, 1, 2, 3, 4]), face_of(&[15, 16, 17, 18, 19])],
        path: None,
        marked: None,
    };
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "dodecahedron.json", &inst.to_file().to_json());
    let r = fraclist(&["check", arg(&p), "--theorem", "hypcyl", "--skip-criticality"]);
    assert_eq!(r.code, 0, "{}{}", r.stdout, r.stderr);
    assert!(r.stdout.contains("Euler value 0"), "{}", r.stdout);
}

#[test]
fn suites_are_reproducible_and_can_fail() {
    let dir = TempDir::new().unwrap();
    let out = |name: &str| {
        let d = dir.path().join(name);
        std::fs::create_dir_all(&d).unwrap();
        d
    };
    let (first, second) = (out("first"), out("second"));
    for d in [&first, &second] {
        let r = fraclist(&[
            "suite",
            "lemma-addit",
            "--nmax",
            "6",
            "--samples",
            "1000",
            "--seed",
            "7",
            "--out",
            arg(d),
        ]);
        assert_eq!(r.code, 0, "{}", r.stderr);
    }
    let read = |d: &Path| std::fs::read_to_string(d.join("lemma-addit.json")).unwrap();
    assert_eq!(read(&first), read(&second));
    assert!(first.join("lemma-addit.csv").exists());

    let mutated = fraclist(&["suite", "lemma-small", "--nmax", "5", "--mutate", "--out", arg(&first)]);
    assert_eq!(mutated.code, 1);
    assert!(mutated.stdout.contains("violation"));

    assert_eq!(fraclist(&["suite", "no-such-suite", "--out", arg(&first)]).code, 2);
    let unseeded = fraclist(&["suite", "lemma-addit", "--out", arg(&first)]);
    assert_eq!(unseeded.code, 2);
    assert!(unseeded.stderr.contains("--seed"));
}

#[test]
fn export_draws_nodes_and_flaws() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "c5.json",
        &instance_json(
            1,
            cycle_rotation(5),
            vec![vec![0, 1], vec![0, 1], vec![0, 1, 2], vec![0, 1, 2], vec![0, 1, 2]],
            vec![],
        ),
    );
    let r = fraclist(&["export", arg(&p)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.starts_with("graph G {"));
    assert_eq!(r.stdout.matches("|L|=").count(), 5);
    assert_eq!(r.stdout.matches("label=\"flaw\"").count(), 1);

    let j = fraclist(&["export", arg(&p), "--json"]);
    let v: Value = serde_json::from_str(&j.stdout).unwrap();
    assert_eq!(v["dot"].as_str().unwrap().trim_end(), r.stdout.trim_end());
    assert_eq!(v["instance"]["rotation"].as_array().unwrap().len(), 5);
}

#[test]
fn import_reads_planar_code() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("maps.pc");
    std::fs::write(&p, write_planar_code(&[cycle_rotation(5), vec![vec![1], vec![0]]])).unwrap();
    let r = fraclist(&["import", arg(&p), "--a", "2"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let files: Vec<InstanceFile> = r.stdout.lines().map(|l| InstanceFile::parse(l).unwrap()).collect();
    assert_eq!(files.len(), 2);
    assert_eq!(files[0].lists, vec![(0..6).collect::<Vec<u16>>(); 5]);
    assert_eq!(files[0].a, 2);
    assert!(files.iter().all(|f| f.validate().is_ok()));

    let bad = write(&dir, "bad.pc", "not planar code");
    assert_eq!(fraclist(&["import", arg(&bad)]).code, 2);
}
