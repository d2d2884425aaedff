use fraclist_core::color::ColorSet;
use fraclist_core::coloring::{
    check_cor_distflaws_hypotheses, check_thm_2flaws_hypotheses, check_thm_cyl_hypotheses, compute_c,
    connection_status, flaw_edges, is_ap_valid, rogue_vertices, Connection, ListAssignment,
};
use fraclist_core::harness::canvases::dodecahedron;
use fraclist_core::harness::graphs::random_plane_girth5;
use fraclist_core::planar_map::{PathRef, PlaneMap};
use proptest::prelude::*;

fn lists(sizes: &[usize]) -> ListAssignment {
    ListAssignment::new(sizes.iter().map(|&k| ColorSet::range(0, k)).collect())
}

fn cycle(n: usize) -> PlaneMap {
    PlaneMap::build(&(0..n).map(|i| vec![(i + n - 1) % n, (i + 1) % n]).collect::<Vec<_>>()).unwrap()
}

fn tree(n: usize, edges: &[(usize, usize)]) -> PlaneMap {
    let mut rot = vec![Vec::new(); n];
    for &(u, v) in edges {
        rot[u].push(v);
        rot[v].push(u);
    }
    PlaneMap::build(&rot).unwrap()
}

fn face_with(m: &PlaneMap, vertices: &[usize]) -> usize {
    (0..m.face_count()).find(|&f| m.face_vertices(f) == vertices).unwrap()
}

/// Whether the path has a proper coloring, by trying every choice.
fn path_colorable_by_brute_force(path: &[usize], l: &ListAssignment, a: usize) -> bool {
    fn go(path: &[usize], l: &ListAssignment, a: usize, prev: Option<&ColorSet>) -> bool {
        let Some((&v, rest)) = path.split_first() else {
            return true;
        };
        l.get(v)
            .subsets(a)
            .iter()
            .any(|c| prev.is_none_or(|p| p.is_disjoint(c)) && go(rest, l, a, Some(c)))
    }
    go(path, l, a, None)
}

#[test]
fn validity_examples() {
    let m = cycle(5);
    assert!(is_ap_valid(&m, &PathRef(vec![0]), &lists(&[3; 5]), 1).unwrap());

    // a 2a-vertex off the outer face
    let d = dodecahedron();
    let mut l = lists(&[3; 20]);
    let inner = d.face_vertices(d.outer_face());
    let off = (0..20).find(|v| !inner.contains(v)).unwrap();
    l.set(off, ColorSet::range(0, 2));
    assert!(!is_ap_valid(&d, &PathRef(vec![inner[0]]), &l, 1).unwrap());

    // path ends with equal lists: colorable exactly when the lists can split
    for (size, a) in [(1, 1), (2, 1), (2, 2), (4, 2)] {
        let mut l = lists(&[3 * a; 5]);
        l.set(0, ColorSet::range(0, size));
        l.set(1, ColorSet::range(0, size));
        let expected = path_colorable_by_brute_force(&[0, 1], &l, a);
        assert_eq!(expected, size == 2 * a);
        assert_eq!(
            is_ap_valid(&m, &PathRef(vec![0, 1]), &l, a).unwrap(),
            expected,
            "size {size}, a {a}"
        );
    }
}

#[test]
fn connection_examples() {
    let m = tree(7, &[(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]);
    let p = PathRef(vec![0, 1, 2]);
    assert_eq!(
        connection_status(m.graph(), &lists(&[3; 7]), 1, &p),
        Connection::NotConnected
    );
    let mut l = lists(&[1, 1, 1, 2, 2, 3, 3]);
    l.set(1, ColorSet::from([5]));
    assert_eq!(
        connection_status(m.graph(), &l, 1, &p),
        Connection::Adjacent { u: 3, v: 4 }
    );
    assert_eq!(compute_c(m.graph(), &p, &l, 1).unwrap(), ColorSet::range(0, 2));
    assert_eq!(
        compute_c(m.graph(), &PathRef(vec![0, 1]), &l, 1).unwrap(),
        ColorSet::new()
    );
}

#[test]
fn two_face_hypotheses() {
    let m = cycle(12);
    assert!(check_thm_cyl_hypotheses(&m, 0, 1, &lists(&[3; 12]), 1)
        .unwrap()
        .passed());

    // flaws 0-1 and 4-5 are at distance three
    let mut sizes = [3; 12];
    for v in [0, 1, 4, 5] {
        sizes[v] = 2;
    }
    let r = check_thm_cyl_hypotheses(&m, 0, 1, &lists(&sizes), 1).unwrap();
    assert!(!r.clause("flaw-far-from-flaws").unwrap().holds);
    assert!(r.clause("2a-incident-with-f1-or-f2").unwrap().holds);

    let d = dodecahedron();
    let (outer, inner) = (face_with(&d, &[0, 1, 2, 3, 4]), face_with(&d, &[15, 16, 17, 18, 19]));
    let mut l = lists(&[3; 20]);
    l.set(5, ColorSet::range(0, 2));
    let r = check_thm_cyl_hypotheses(&d, outer, inner, &l, 1).unwrap();
    assert!(!r.passed());
    assert_eq!(r.clause("2a-incident-with-f1-or-f2").unwrap().witness, vec![5]);
}

#[test]
fn one_face_hypotheses() {
    let m = cycle(10);
    assert!(check_cor_distflaws_hypotheses(&m, 0, &lists(&[3; 10]), 1)
        .unwrap()
        .passed());
    let mut sizes = [3; 10];
    sizes[4] = 2;
    assert!(check_cor_distflaws_hypotheses(&m, 0, &lists(&sizes), 1)
        .unwrap()
        .passed());
    // flaw 0-1 and a 2a-vertex at distance two
    let mut sizes = [3; 10];
    for v in [0, 1, 3] {
        sizes[v] = 2;
    }
    let r = check_cor_distflaws_hypotheses(&m, 0, &lists(&sizes), 1).unwrap();
    assert!(!r.clause("flaw-far-from-2a-vertices").unwrap().holds);
}

#[test]
fn path_hypotheses() {
    let m = cycle(15);
    assert!(check_thm_2flaws_hypotheses(&m, &PathRef(vec![0]), &lists(&[3; 15]), 1)
        .unwrap()
        .passed());
    let mut sizes = [3; 15];
    for v in [1, 2, 6, 7, 11, 12] {
        sizes[v] = 2;
    }
    let r = check_thm_2flaws_hypotheses(&m, &PathRef(vec![0]), &lists(&sizes), 1).unwrap();
    assert!(!r.clause("at-most-two-flaws").unwrap().holds);

    // p0 adjacent to two flaws
    let t = tree(7, &[(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]);
    let mut l = lists(&[1, 1, 1, 2, 2, 2, 2]);
    l.set(1, ColorSet::from([5]));
    let p = PathRef(vec![0, 1, 2]);
    assert!(matches!(
        connection_status(t.graph(), &l, 1, &p),
        Connection::MultiplyConnected { .. }
    ));
    let r = check_thm_2flaws_hypotheses(&t, &p, &l, 1).unwrap();
    assert!(!r.clause("unique-connection").unwrap().holds);
}

#[test]
fn rogue_examples() {
    let m = cycle(5);
    let mut l = lists(&[3; 5]);
    l.set(0, ColorSet::range(0, 2));
    assert!(rogue_vertices(&m, 0, &l, 1).unwrap().is_empty());

    let d = dodecahedron();
    let outer = face_with(&d, &[0, 1, 2, 3, 4]);
    let mut l = lists(&[3; 20]);
    l.set(0, ColorSet::range(0, 2));
    assert_eq!(rogue_vertices(&d, outer, &l, 1).unwrap(), vec![0]);
    assert!(rogue_vertices(&d, outer, &lists(&[3; 20]), 1).unwrap().is_empty());
}

/// A random map with list sizes drawn from `a`, `2a` and `3a`.
fn instance(seed: u64, n: usize, a: usize, pattern: &[u8]) -> (PlaneMap, ListAssignment) {
    let m = random_plane_girth5(seed, n, 10);
    let l = ListAssignment::new(
        (0..n)
            .map(|v| {
                let k = [2 * a, 3 * a, 3 * a, a][pattern[v % pattern.len()] as usize % 4];
                ColorSet::range((v % 3) as u16, k)
            })
            .collect(),
    );
    (m, l)
}

/// Directed 2-paths along the outer face.
fn outer_two_paths(m: &PlaneMap) -> Vec<PathRef> {
    let walk = m.face_walk(m.outer_face());
    let k = walk.len();
    (0..k)
        .map(|i| vec![walk[i], walk[(i + 1) % k], walk[(i + 2) % k]])
        .filter(|p| p[0] != p[2])
        .map(PathRef)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn forbidden_set_sizes(seed in any::<u64>(), n in 3usize..14, a in 1usize..3, pattern in prop::collection::vec(0u8..4, 1..8)) {
        let (m, l) = instance(seed, n, a, &pattern);
        for p in outer_two_paths(&m) {
            let Ok(c) = compute_c(m.graph(), &p, &l, a) else { continue };
            let adjacent = matches!(connection_status(m.graph(), &l, a, &p), Connection::Adjacent { .. });
            prop_assert!([0, a, 2 * a].contains(&c.len()));
            prop_assert_eq!(c.len() == 2 * a, adjacent);
        }
    }

    #[test]
    fn path_covering_every_2a_vertex_leaves_no_flaw(seed in any::<u64>(), n in 3usize..14, a in 1usize..3) {
        let m = random_plane_girth5(seed, n, 10);
        for p in outer_two_paths(&m) {
            let l = ListAssignment::new(
                (0..n).map(|v| ColorSet::range(0, if p.contains(v) { 2 * a } else { 3 * a })).collect(),
            );
            prop_assert!(flaw_edges(m.graph(), &l, a, Some(&p)).is_empty());
        }
    }

    #[test]
    fn growing_a_list_never_breaks_flaw_distances(seed in any::<u64>(), n in 3usize..14, pattern in prop::collection::vec(0u8..3, 1..8), pick in any::<prop::sample::Index>()) {
        let a = 1;
        let (m, l) = instance(seed, n, a, &pattern);
        let deficient: Vec<usize> = (0..n).filter(|&v| l.size(v) == 2 * a).collect();
        prop_assume!(!deficient.is_empty());
        let v = deficient[pick.index(deficient.len())];
        let mut grown = l.clone();
        grown.set(v, l.get(v).union(&ColorSet::range(100, a)));
        for f in 0..m.face_count() {
            let before = check_cor_distflaws_hypotheses(&m, f, &l, a).unwrap();
            let after = check_cor_distflaws_hypotheses(&m, f, &grown, a).unwrap();
            for id in ["flaw-far-from-2a-vertices", "flaw-far-from-flaws"] {
                prop_assert!(!before.clause(id).unwrap().holds || after.clause(id).unwrap().holds, "{}", id);
            }
        }
    }

    #[test]
    fn connection_witnesses_revalidate(seed in any::<u64>(), n in 3usize..14, a in 1usize..3, pattern in prop::collection::vec(0u8..3, 1..8)) {
        let (m, l) = instance(seed, n, a, &pattern);
        let g = m.graph();
        for p in outer_two_paths(&m) {
            let p0 = p.vertices()[0];
            match connection_status(g, &l, a, &p) {
                Connection::Adjacent { u, v } => {
                    prop_assert!(g.has_edge(p0, u) && g.has_edge(u, v));
                    prop_assert_eq!(g.set_distance(&[p0], &[u, v]), Some(1));
                }
                Connection::UniquelyConnected { x, y, u, v } => {
                    prop_assert!(g.has_edge(p0, x) && g.has_edge(x, y) && g.has_edge(y, u) && g.has_edge(u, v));
                    prop_assert_eq!((l.size(x), l.size(y)), (2 * a, 3 * a));
                    prop_assert_eq!((l.size(u), l.size(v)), (2 * a, 2 * a));
                }
                _ => {}
            }
        }
    }
}
