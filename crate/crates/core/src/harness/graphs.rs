//! Exhaustive and random generation of plane graphs of girth at least five.

use crate::graph::Graph;
use crate::planar_map::PlaneMap;
use petgraph::algo::isomorphism::{is_isomorphic, is_isomorphic_matching, subgraph_isomorphisms_iter};
use petgraph::graph::UnGraph;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeSet, HashMap};
use thiserror::Error;

/// Largest vertex count the exhaustive generator accepts.
pub const NMAX_CAP: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("n_max = {0} exceeds the cap of {NMAX_CAP}")]
    CapExceeded(usize),
}

fn to_petgraph(g: &Graph) -> UnGraph<(), ()> {
    let mut p = UnGraph::with_capacity(g.vertex_count(), g.edge_count());
    for _ in 0..g.vertex_count() {
        p.add_node(());
    }
    for &(u, v) in g.edges() {
        p.add_edge((u as u32).into(), (v as u32).into(), ());
    }
    p
}

/// Vertex count, edge count and sorted (degree, neighbor degrees) pairs.
type Invariant = (usize, usize, Vec<(usize, Vec<usize>)>);

/// Sorted (label, degree, sorted neighbor (label, degree)) triples.
type LabelledSignature = Vec<(u32, usize, Vec<(u32, usize)>)>;

/// A petgraph copy carrying vertex labels as node weights.
type LabelledGraph = UnGraph<u32, ()>;

/// Vertex and edge sets of each face, sorted.
pub type FacialKey = Vec<(Vec<usize>, Vec<usize>)>;

fn invariant(g: &Graph) -> Invariant {
    let mut sig: Vec<(usize, Vec<usize>)> = (0..g.vertex_count())
        .map(|v| {
            let mut nd: Vec<usize> = g.neighbors(v).map(|w| g.degree(w)).collect();
            nd.sort_unstable();
            (g.degree(v), nd)
        })
        .collect();
    sig.sort();
    (g.vertex_count(), g.edge_count(), sig)
}

/// Keeps one graph per isomorphism class, in first-seen order.
#[derive(Default)]
struct IsoSet {
    buckets: HashMap<Invariant, Vec<UnGraph<(), ()>>>,
}

impl IsoSet {
    fn insert(&mut self, g: &Graph) -> bool {
        let p = to_petgraph(g);
        let bucket = self.buckets.entry(invariant(g)).or_default();
        if bucket.iter().any(|q| is_isomorphic(q, &p)) {
            return false;
        }
        bucket.push(p);
        true
    }
}

/// Deduplicates vertex-labelled graphs up to label-preserving isomorphism.
#[derive(Default)]
pub struct LabelledIsoSet {
    buckets: HashMap<LabelledSignature, Vec<(LabelledGraph, usize)>>,
    len: usize,
}

impl LabelledIsoSet {
    /// The class index of `g` with vertex labels `labels`, and whether the
    /// class is new. Indices count up from zero in first-seen order.
    pub fn insert(&mut self, g: &Graph, labels: &[u32]) -> (usize, bool) {
        let mut sig: LabelledSignature = (0..g.vertex_count())
            .map(|v| {
                let mut nd: Vec<(u32, usize)> = g.neighbors(v).map(|w| (labels[w], g.degree(w))).collect();
                nd.sort_unstable();
                (labels[v], g.degree(v), nd)
            })
            .collect();
        sig.sort();
        let mut p = UnGraph::with_capacity(g.vertex_count(), g.edge_count());
        for &l in labels {
            p.add_node(l);
        }
        for &(u, v) in g.edges() {
            p.add_edge((u as u32).into(), (v as u32).into(), ());
        }
        let bucket = self.buckets.entry(sig).or_default();
        for (q, idx) in bucket.iter() {
            if is_isomorphic_matching(q, &p, |x, y| x == y, |_, _| true) {
                return (*idx, false);
            }
        }
        let idx = self.len;
        self.len += 1;
        bucket.push((p, idx));
        (idx, true)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

/// Vertex permutations preserving adjacency.
pub fn automorphisms(g: &Graph) -> Vec<Vec<usize>> {
    let p = to_petgraph(g);
    let mut nm = |_: &(), _: &()| true;
    let mut em = |_: &(), _: &()| true;
    subgraph_isomorphisms_iter(&&p, &&p, &mut nm, &mut em)
        .map(|it| it.collect())
        .unwrap_or_default()
}

/// Rotation systems of `g` that embed it in the plane, each as a map.
/// Stops after `limit` maps when given.
pub fn planar_embeddings(g: &Graph, limit: Option<usize>) -> Vec<PlaneMap> {
    let n = g.vertex_count();
    let nbrs: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v).collect()).collect();
    // Euler per component with edges: F = 2 - V + E
    let (comp, count) = g.components(None);
    let mut cv = vec![0usize; count];
    let mut ce = vec![0usize; count];
    for v in 0..n {
        cv[comp[v].expect("every vertex")] += 1;
    }
    for &(u, _) in g.edges() {
        ce[comp[u].expect("every vertex")] += 1;
    }
    let target: usize = (0..count).filter(|&c| ce[c] > 0).map(|c| 2 + ce[c] - cv[c]).sum();
    let mut out = Vec::new();
    let mut rot: Vec<Vec<usize>> = vec![Vec::new(); n];
    fn perms(rest: &[usize]) -> Vec<Vec<usize>> {
        if rest.is_empty() {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for i in 0..rest.len() {
            let mut r = rest.to_vec();
            let x = r.remove(i);
            for mut p in perms(&r) {
                p.insert(0, x);
                out.push(p);
            }
        }
        out
    }
    let choices: Vec<Vec<Vec<usize>>> = nbrs
        .iter()
        .map(|ns| match ns.split_first() {
            None => vec![Vec::new()],
            Some((&first, rest)) => perms(rest)
                .into_iter()
                .map(|mut p| {
                    p.insert(0, first);
                    p
                })
                .collect(),
        })
        .collect();
    fn go(
        v: usize,
        choices: &[Vec<Vec<usize>>],
        rot: &mut Vec<Vec<usize>>,
        target: usize,
        limit: Option<usize>,
        out: &mut Vec<PlaneMap>,
    ) {
        if limit.is_some_and(|l| out.len() >= l) {
            return;
        }
        if v == choices.len() {
            let map = PlaneMap::build(rot).expect("rotation of a simple graph");
            let isolated = (0..rot.len()).filter(|&x| rot[x].is_empty()).count();
            if map.face_count() - isolated == target {
                out.push(map);
            }
            return;
        }
        for c in &choices[v] {
            rot[v] = c.clone();
            go(v + 1, choices, rot, target, limit, out);
        }
    }
    go(0, &choices, &mut rot, target, limit, &mut out);
    out
}

pub fn is_planar(g: &Graph) -> bool {
    !planar_embeddings(g, Some(1)).is_empty()
}

/// Facial incidence of a map: per face, its sorted vertex and edge sets.
pub fn facial_key(map: &PlaneMap) -> FacialKey {
    let mut key: FacialKey = (0..map.face_count())
        .map(|f| (map.face_vertices(f), map.face_edges(f)))
        .collect();
    key.sort();
    key
}

fn permuted_key(g: &Graph, key: &[(Vec<usize>, Vec<usize>)], sigma: &[usize]) -> FacialKey {
    let mut out: FacialKey = key
        .iter()
        .map(|(vs, es)| {
            let mut vs: Vec<usize> = vs.iter().map(|&v| sigma[v]).collect();
            vs.sort_unstable();
            let mut es: Vec<usize> = es
                .iter()
                .map(|&e| {
                    let (u, v) = g.edge(e);
                    g.edge_id(sigma[u], sigma[v]).expect("automorphism")
                })
                .collect();
            es.sort_unstable();
            (vs, es)
        })
        .collect();
    out.sort();
    out
}

/// Plane embeddings of `g` up to automorphisms preserving facial incidence.
pub fn inequivalent_embeddings(g: &Graph) -> Vec<PlaneMap> {
    let mut by_key: Vec<(FacialKey, PlaneMap)> = Vec::new();
    let mut seen = BTreeSet::new();
    for m in planar_embeddings(g, None) {
        let k = facial_key(&m);
        if seen.insert(k.clone()) {
            by_key.push((k, m));
        }
    }
    if by_key.len() <= 1 {
        return by_key.into_iter().map(|(_, m)| m).collect();
    }
    let autos = automorphisms(g);
    let mut canon_seen = BTreeSet::new();
    let mut out = Vec::new();
    for (k, m) in by_key {
        let canon = autos.iter().map(|s| permuted_key(g, &k, s)).min().unwrap_or(k);
        if canon_seen.insert(canon) {
            out.push(m);
        }
    }
    out
}

/// Connected planar graphs of girth at least five on `1..=n_max` vertices,
/// one per isomorphism class, ordered by vertex count then generation order.
///
/// Every connected graph has a vertex whose removal leaves it connected, so
/// adding a vertex to each graph of the previous level in every
/// girth-preserving way reaches all classes; both properties are hereditary.
pub fn enumerate_girth5_graphs(n_max: usize) -> Result<Vec<Graph>, GenerateError> {
    if n_max > NMAX_CAP {
        return Err(GenerateError::CapExceeded(n_max));
    }
    if n_max == 0 {
        return Ok(Vec::new());
    }
    let mut all = vec![Graph::empty(1)];
    let mut level = vec![Graph::empty(1)];
    for n in 2..=n_max {
        let mut seen = IsoSet::default();
        let mut next = Vec::new();
        for g in &level {
            let dist: Vec<Vec<Option<usize>>> = (0..n - 1).map(|v| g.distances_from(&[v], None)).collect();
            for mask in 1u32..(1 << (n - 1)) {
                let xs: Vec<usize> = (0..n - 1).filter(|&v| mask >> v & 1 == 1).collect();
                let far = xs
                    .iter()
                    .enumerate()
                    .all(|(i, &x)| xs[i + 1..].iter().all(|&y| dist[x][y].is_none_or(|d| d >= 3)));
                if !far {
                    continue;
                }
                let mut h = g.clone();
                let mut edges: Vec<(usize, usize)> = h.edges().to_vec();
                edges.extend(xs.iter().map(|&x| (x, n - 1)));
                h = Graph::from_edges(n, &edges).expect("simple");
                if seen.insert(&h) && is_planar(&h) {
                    next.push(h);
                }
            }
        }
        all.extend(next.iter().cloned());
        level = next;
    }
    Ok(all)
}

/// One plane map per graph of [`enumerate_girth5_graphs`].
pub fn enumerate_plane_girth5(n_max: usize) -> Result<Vec<PlaneMap>, GenerateError> {
    Ok(enumerate_girth5_graphs(n_max)?
        .iter()
        .map(|g| planar_embeddings(g, Some(1)).pop().expect("planar by construction"))
        .collect())
}

/// Grows a random plane map of girth at least five with `n` vertices by
/// pendant insertions and face-splitting chords, then adds chords until
/// `tries` consecutive attempts fail.
pub fn random_plane_girth5(seed: u64, n: usize, tries: usize) -> PlaneMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if n <= 1 {
        return PlaneMap::build(&vec![Vec::new(); n]).expect("empty map");
    }
    let mut rot: Vec<Vec<usize>> = vec![vec![1], vec![0]];
    // a corner (v, u): the angle at v just after the edge to u
    let corners_of_face = |map: &PlaneMap, f: usize| -> Vec<(usize, usize)> {
        let walk = map.face_walk(f);
        (0..walk.len()).map(|i| (walk[(i + 1) % walk.len()], walk[i])).collect()
    };
    let insert_after = |rot: &mut Vec<Vec<usize>>, v: usize, u: usize, x: usize| {
        let i = rot[v].iter().position(|&w| w == u).expect("corner");
        rot[v].insert(i + 1, x);
    };
    while rot.len() < n {
        let map = PlaneMap::build(&rot).expect("valid rotation");
        let f = rng.random_range(0..map.face_count());
        let corners = corners_of_face(&map, f);
        let &(v, u) = corners.choose(&mut rng).expect("non-empty face");
        let x = rot.len();
        insert_after(&mut rot, v, u, x);
        rot.push(vec![v]);
        if rng.random_bool(0.5) {
            try_chord(&mut rot, &mut rng, &corners_of_face, &insert_after, 8);
        }
    }
    let mut failures = 0;
    while failures < tries {
        if try_chord(&mut rot, &mut rng, &corners_of_face, &insert_after, 1) {
            failures = 0;
        } else {
            failures += 1;
        }
    }
    PlaneMap::build(&rot).expect("valid rotation")
}

fn try_chord<R: Rng>(
    rot: &mut Vec<Vec<usize>>,
    rng: &mut R,
    corners_of_face: &impl Fn(&PlaneMap, usize) -> Vec<(usize, usize)>,
    insert_after: &impl Fn(&mut Vec<Vec<usize>>, usize, usize, usize),
    attempts: usize,
) -> bool {
    let map = PlaneMap::build(rot).expect("valid rotation");
    let g = map.graph();
    for _ in 0..attempts {
        let f = rng.random_range(0..map.face_count());
        let corners = corners_of_face(&map, f);
        if corners.len() < 2 {
            continue;
        }
        let &(v1, u1) = corners.choose(rng).unwrap();
        let &(v2, u2) = corners.choose(rng).unwrap();
        if v1 == v2 || g.has_edge(v1, v2) {
            continue;
        }
        if g.distances_from(&[v1], None)[v2].is_some_and(|d| d < 4) {
            continue;
        }
        insert_after(rot, v1, u1, v2);
        insert_after(rot, v2, u2, v1);
        return true;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_is_empty() {
        assert!(enumerate_girth5_graphs(0).unwrap().is_empty());
        assert!(matches!(
            enumerate_girth5_graphs(11),
            Err(GenerateError::CapExceeded(11))
        ));
    }

    #[test]
    fn c5_is_planar_with_two_faces() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let maps = inequivalent_embeddings(&g);
        assert_eq!(maps.len(), 1);
        assert_eq!(maps[0].face_count(), 2);
    }

    #[test]
    fn random_maps_are_valid() {
        for seed in 0..20 {
            let m = random_plane_girth5(seed, 15, 30);
            assert_eq!(m.vertex_count(), 15);
            m.validate_plane().unwrap();
            assert!(m.girth().is_none_or(|k| k >= 5));
        }
        let a = random_plane_girth5(3, 12, 10);
        let b = random_plane_girth5(3, 12, 10);
        assert_eq!(a.rotation_table(), b.rotation_table());
    }
}
