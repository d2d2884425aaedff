use fraclist_core::color::ColorSet;
use fraclist_core::coloring::{check_cor_distflaws_hypotheses, check_thm_cyl_hypotheses, ListAssignment};
use fraclist_core::graph::Graph;
use fraclist_core::harness::graphs::{enumerate_girth5_graphs, enumerate_plane_girth5};
use fraclist_core::harness::lists::{binomial, for_each_canonical, orbit_size};
use fraclist_core::harness::{run_suite, SuiteParams, SUITES};
use std::collections::HashSet;
use std::ops::ControlFlow;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Smallest sorted edge list over all relabelings.
fn canonical_edges(edges: &[(usize, usize)], perms: &[Vec<usize>]) -> Vec<(usize, usize)> {
    perms
        .iter()
        .map(|p| {
            let mut e: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (p[u].min(p[v]), p[u].max(p[v]))).collect();
            e.sort_unstable();
            e
        })
        .min()
        .unwrap_or_default()
}

/// Isomorphism classes of connected graphs of girth at least five on
/// exactly `n` labelled vertices, by filtering every edge subset.
fn girth5_classes_by_brute_force(n: usize) -> usize {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let perms = permutations(n);
    let mut classes = HashSet::new();
    for mask in 0u64..(1 << pairs.len()) {
        if (mask.count_ones() as usize) + 1 < n {
            continue;
        }
        let edges: Vec<(usize, usize)> = (0..pairs.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| pairs[i])
            .collect();
        let g = Graph::from_edges(n, &edges).unwrap();
        if g.is_connected() && g.girth().is_none_or(|k| k >= 5) {
            classes.insert(canonical_edges(&edges, &perms));
        }
    }
    classes.len()
}

#[test]
fn small_graph_enumeration_matches_brute_force() {
    let graphs = enumerate_girth5_graphs(5).unwrap();
    // the trees on at most five vertices and the pentagon
    assert_eq!(graphs.len(), 9);
    let all = enumerate_girth5_graphs(6).unwrap();
    for n in 1..=6 {
        let ours = all.iter().filter(|g| g.vertex_count() == n).count();
        assert_eq!(ours, girth5_classes_by_brute_force(n), "n = {n}");
    }
}

/// Orbits of list assignments under every renaming of the palette.
fn orbits_by_brute_force(sizes: &[usize], universe: usize) -> usize {
    let perms = permutations(universe);
    let choices: Vec<Vec<u32>> = sizes
        .iter()
        .map(|&k| (0u32..1 << universe).filter(|m| m.count_ones() as usize == k).collect())
        .collect();
    let mut seen = HashSet::new();
    let mut idx = vec![0; sizes.len()];
    loop {
        let rows: Vec<u32> = idx.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
        let canon = perms
            .iter()
            .map(|p| {
                rows.iter()
                    .map(|&m| {
                        (0..universe)
                            .filter(|&c| m >> c & 1 == 1)
                            .fold(0u32, |acc, c| acc | 1 << p[c])
                    })
                    .collect::<Vec<_>>()
            })
            .min()
            .unwrap();
        seen.insert(canon);
        let mut i = 0;
        loop {
            if i == idx.len() {
                return seen.len();
            }
            idx[i] += 1;
            if idx[i] < choices[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn canonical_lists_are_one_per_orbit() {
    for (sizes, universe) in [
        (vec![1, 2, 2], 4),
        (vec![2, 2, 2], 4),
        (vec![1, 3], 5),
        (vec![2, 3, 2, 3], 5),
    ] {
        let mut count = 0;
        let mut covered = 0u128;
        let _ = for_each_canonical(&sizes, universe, |lists| {
            count += 1;
            covered += orbit_size(lists, universe);
            ControlFlow::Continue(())
        });
        assert_eq!(
            count,
            orbits_by_brute_force(&sizes, universe),
            "{sizes:?} over {universe}"
        );
        let total: u128 = sizes.iter().map(|&k| binomial(universe, k)).product();
        assert_eq!(covered, total);
    }
}

/// Colorability by trying every choice of `a`-subsets.
fn colorable(g: &Graph, lists: &[u32], a: u32) -> bool {
    fn go(v: usize, g: &Graph, lists: &[u32], a: u32, chosen: &mut Vec<u32>) -> bool {
        if v == lists.len() {
            return true;
        }
        let blocked = g.neighbors(v).filter(|&w| w < v).fold(0, |acc, w| acc | chosen[w]);
        // walk the submasks of the list
        let mut sub = lists[v];
        loop {
            if sub.count_ones() == a && sub & blocked == 0 {
                chosen.push(sub);
                if go(v + 1, g, lists, a, chosen) {
                    return true;
                }
                chosen.pop();
            }
            if sub == 0 {
                return false;
            }
            sub = (sub - 1) & lists[v];
        }
    }
    go(0, g, lists, a, &mut Vec::new())
}

fn to_lists(masks: &[u32]) -> ListAssignment {
    ListAssignment::new(
        masks
            .iter()
            .map(|&m| (0..32u16).filter(|c| m >> c & 1 == 1).collect::<ColorSet>())
            .collect(),
    )
}

#[test]
fn face_theorems_hold_on_every_labelled_assignment() {
    const UNIVERSE: u32 = 4;
    let options: Vec<u32> = (0u32..1 << UNIVERSE)
        .filter(|m| matches!(m.count_ones(), 2 | 3))
        .collect();
    let (mut one_face, mut two_faces) = (0u64, 0u64);
    for m in enumerate_plane_girth5(5).unwrap() {
        let n = m.vertex_count();
        let g = m.graph();
        let mut idx = vec![0usize; n];
        loop {
            let masks: Vec<u32> = idx.iter().map(|&i| options[i]).collect();
            let l = to_lists(&masks);
            for f in 0..m.face_count() {
                if check_cor_distflaws_hypotheses(&m, f, &l, 1).unwrap().passed() {
                    one_face += 1;
                    assert!(colorable(g, &masks, 1), "{masks:?} on face {f}");
                }
                for f2 in f + 1..m.face_count() {
                    if check_thm_cyl_hypotheses(&m, f, f2, &l, 1).unwrap().passed() {
                        two_faces += 1;
                        assert!(colorable(g, &masks, 1), "{masks:?} on faces {f}, {f2}");
                    }
                }
            }
            let Some(i) = (0..n).find(|&i| idx[i] + 1 < options.len()) else {
                break;
            };
            idx[i] += 1;
            idx[..i].fill(0);
        }
    }
    assert!(one_face > 0 && two_faces > 0);

    let params = SuiteParams {
        nmax: 5,
        universe: Some(UNIVERSE as usize),
        ..SuiteParams::default()
    };
    assert!(run_suite("thm-cyl", &params).unwrap().passed());
    assert!(run_suite("cor-distflaws", &params).unwrap().passed());
}

fn small_params(mutate: bool) -> SuiteParams {
    SuiteParams {
        nmax: 6,
        a: vec![1],
        seed: 11,
        samples: 300,
        mutate,
        ..SuiteParams::default()
    }
}

#[test]
fn every_suite_is_clean_at_small_size() {
    for name in SUITES {
        let r = run_suite(name, &small_params(false)).unwrap();
        assert!(r.passed(), "{name}: {:?}", r.violations.first());
        assert!(r.instances > 0, "{name} checked nothing");
    }
}

#[test]
fn every_suite_can_fail() {
    for name in SUITES {
        let r = run_suite(name, &small_params(true)).unwrap();
        assert!(!r.violations.is_empty(), "{name} did not notice the corrupted check");
    }
}

#[test]
fn wider_palette_spot_check() {
    let params = SuiteParams {
        nmax: 6,
        universe: Some(6),
        ..SuiteParams::default()
    };
    for name in ["thm-cyl", "cor-distflaws", "thm-2flaws"] {
        assert!(run_suite(name, &params).unwrap().passed(), "{name}");
    }
}

#[test]
fn seeded_runs_are_reproducible() {
    let mut params = SuiteParams {
        nmax: 7,
        seed: 7,
        samples: 1000,
        threads: Some(1),
        ..SuiteParams::default()
    };
    for name in ["lemma-addit", "reductions"] {
        let first = run_suite(name, &params).unwrap().to_json();
        params.threads = Some(2);
        let second = run_suite(name, &params).unwrap().to_json();
        params.threads = Some(1);
        assert_eq!(first, second, "{name}");
    }
}

#[test]
fn unknown_suite_is_an_error() {
    assert!(run_suite("no-such-suite", &SuiteParams::default()).is_err());
}
