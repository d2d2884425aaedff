//! Exact `(L:a)`-coloring search.
//!
//! Colors of a problem are renumbered densely and stored in fixed-width
//! bitsets. The search picks the unassigned vertex with the fewest candidate
//! sets, tries its `a`-subsets in lexicographic order and prunes any
//! neighbor left with fewer than `a` available colors.

pub mod critical;
pub mod reduce;

use crate::color::{Color, ColorSet};
use crate::coloring::{check_set_coloring, ColoringViolation, ListAssignment, SetColoring};
use crate::graph::{Graph, Subgraph};
use std::collections::HashMap;
use std::time::Instant;
use thiserror::Error;

pub use critical::{
    extract_critical, find_critical_subcanvas, is_critical, is_critical_brute_force, is_critical_within,
    verify_lemma_sgcrit, CriticalityError, CriticalityReport, MaximalSubgraph,
};
pub use reduce::{
    decompose_cut, reduce_flaw, reduce_greedy_vertex, solve_by_blocks, CutDecomposition, FlawRefusal, ReductionStep,
    ReductionTrace, WorkingProblem,
};

/// Largest supported `a`.
pub const MAX_A: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("a must be positive")]
    ZeroA,
    #[error("a = {0} exceeds the supported maximum {MAX_A}")]
    ATooLarge(usize),
    #[error("list assignment has {lists} entries for {vertices} vertices")]
    ListCount { lists: usize, vertices: usize },
    #[error("precoloring is not a valid coloring: {0:?}")]
    InvalidPrecoloring(ColoringViolation),
    #[error("search exceeded its deadline")]
    Timeout,
}

/// Fixed-width color bitset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bits<const W: usize>(pub [u64; W]);

impl<const W: usize> Default for Bits<W> {
    fn default() -> Self {
        Bits([0; W])
    }
}

impl<const W: usize> Bits<W> {
    #[inline]
    pub fn bit(i: usize) -> Self {
        let mut b = Self::default();
        b.0[i / 64] |= 1 << (i % 64);
        b
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn and(self, o: Self) -> Self {
        let mut r = self;
        for (x, y) in r.0.iter_mut().zip(o.0) {
            *x &= y;
        }
        r
    }

    #[inline]
    pub fn andnot(self, o: Self) -> Self {
        let mut r = self;
        for (x, y) in r.0.iter_mut().zip(o.0) {
            *x &= !y;
        }
        r
    }

    #[inline]
    pub fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn is_subset(&self, o: &Self) -> bool {
        self.andnot(*o).is_zero()
    }

    #[inline]
    pub fn intersects(&self, o: &Self) -> bool {
        !self.and(*o).is_zero()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + t)
            })
        })
    }

    /// All `k`-subsets in lexicographic order of their bit indices.
    pub fn subsets(&self, k: usize, out: &mut Vec<Self>) {
        out.clear();
        let idx: Vec<usize> = self.ones().collect();
        let n = idx.len();
        if k > n {
            return;
        }
        let mut pick: Vec<usize> = (0..k).collect();
        loop {
            let mut b = Self::default();
            for &p in &pick {
                b.set(idx[p]);
            }
            out.push(b);
            let Some(i) = (0..k).rev().find(|&i| pick[i] < n - k + i) else {
                return;
            };
            pick[i] += 1;
            for j in i + 1..k {
                pick[j] = pick[j - 1] + 1;
            }
        }
    }
}

/// Dense color numbering for one problem.
#[derive(Debug, Clone)]
pub struct ColorIndex {
    of: HashMap<Color, usize>,
    colors: Vec<Color>,
}

impl ColorIndex {
    pub fn new(sets: impl IntoIterator<Item = Color>) -> Self {
        let mut colors: Vec<Color> = sets.into_iter().collect();
        colors.sort_unstable();
        colors.dedup();
        let of = colors.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        ColorIndex { of, colors }
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    /// Bits of the colors in `s` that are indexed; others are dropped.
    pub fn encode<const W: usize>(&self, s: &ColorSet) -> Bits<W> {
        let mut b = Bits::default();
        for c in s.iter() {
            if let Some(&i) = self.of.get(&c) {
                b.set(i);
            }
        }
        b
    }

    /// Whether every color of `s` is indexed.
    pub fn covers(&self, s: &ColorSet) -> bool {
        s.iter().all(|c| self.of.contains_key(&c))
    }

    pub fn decode<const W: usize>(&self, b: &Bits<W>) -> ColorSet {
        b.ones().map(|i| self.colors[i]).collect()
    }
}

/// A search problem over local vertices `0..n`, reusable across runs with
/// different candidate restrictions.
#[derive(Debug, Clone)]
pub struct Engine<const W: usize> {
    adj: Vec<Vec<usize>>,
    lists: Vec<Bits<W>>,
    allowed: Vec<Option<Vec<Bits<W>>>>,
    a: usize,
    deadline: Option<Instant>,
    nodes: u64,
    timed_out: bool,
}

impl<const W: usize> Engine<W> {
    pub fn new(adj: Vec<Vec<usize>>, lists: Vec<Bits<W>>, a: usize) -> Self {
        let n = adj.len();
        Engine {
            adj,
            lists,
            allowed: vec![None; n],
            a,
            deadline: None,
            nodes: 0,
            timed_out: false,
        }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn set_deadline(&mut self, deadline: Option<Instant>) {
        self.deadline = deadline;
    }

    /// Restricts local vertex `v` to the given candidate sets (`None` lifts it).
    /// Candidates that are not `a`-subsets of the list are dropped.
    pub fn restrict(&mut self, v: usize, candidates: Option<Vec<Bits<W>>>) {
        let (a, list) = (self.a, self.lists[v]);
        self.allowed[v] = candidates.map(|mut c| {
            c.retain(|s| s.count() == a && s.is_subset(&list));
            c
        });
    }

    /// Fixes local vertex `v` to a single set, reusing the allocation.
    pub fn fix(&mut self, v: usize, set: Bits<W>) {
        let valid = set.count() == self.a && set.is_subset(&self.lists[v]);
        match &mut self.allowed[v] {
            Some(c) => {
                c.clear();
                if valid {
                    c.push(set);
                }
            }
            slot => *slot = Some(if valid { vec![set] } else { Vec::new() }),
        }
    }

    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    /// Runs the search; `Err(Timeout)` if the deadline passed.
    pub fn run(&mut self) -> Result<Option<Vec<Bits<W>>>, SolveError> {
        let n = self.adj.len();
        let mut avail = self.lists.clone();
        for (allowed, list) in self.allowed.iter().zip(&avail) {
            if let Some(c) = allowed {
                if c.is_empty() {
                    return Ok(None);
                }
            } else if list.count() < self.a {
                return Ok(None);
            }
        }
        let mut assigned: Vec<Option<Bits<W>>> = vec![None; n];
        self.timed_out = false;
        let found = self.descend(&mut avail, &mut assigned, n);
        if self.timed_out {
            return Err(SolveError::Timeout);
        }
        Ok(found.then(|| assigned.into_iter().map(|s| s.unwrap()).collect()))
    }

    fn candidate_count(&self, v: usize, avail: &Bits<W>) -> usize {
        match &self.allowed[v] {
            Some(c) => c.iter().filter(|s| s.is_subset(avail)).count(),
            None => binomial(avail.count(), self.a),
        }
    }

    fn descend(&mut self, avail: &mut [Bits<W>], assigned: &mut [Option<Bits<W>>], remaining: usize) -> bool {
        if remaining == 0 {
            return true;
        }
        self.nodes += 1;
        if self.nodes.is_multiple_of(4096) {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.timed_out = true;
                }
            }
        }
        if self.timed_out {
            return false;
        }
        let mut best: Option<(usize, usize, usize)> = None;
        for v in 0..avail.len() {
            if assigned[v].is_some() {
                continue;
            }
            let count = self.candidate_count(v, &avail[v]);
            if count == 0 {
                return false;
            }
            let free_nbrs = self.adj[v].iter().filter(|&&w| assigned[w].is_none()).count();
            let better = match best {
                None => true,
                Some((_, bc, bd)) => count < bc || (count == bc && free_nbrs > bd),
            };
            if better {
                best = Some((v, count, free_nbrs));
            }
        }
        let (v, _, _) = best.expect("remaining > 0");
        let mut cands = Vec::new();
        match &self.allowed[v] {
            Some(c) => cands.extend(c.iter().copied().filter(|s| s.is_subset(&avail[v]))),
            None => avail[v].subsets(self.a, &mut cands),
        }
        let nbrs = self.adj[v].clone();
        let mut saved: Vec<(usize, Bits<W>)> = Vec::with_capacity(nbrs.len());
        for s in cands {
            saved.clear();
            let mut ok = true;
            for &w in &nbrs {
                if assigned[w].is_some() {
                    continue;
                }
                let next = avail[w].andnot(s);
                if next != avail[w] {
                    saved.push((w, avail[w]));
                    avail[w] = next;
                    if next.count() < self.a {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                assigned[v] = Some(s);
                if self.descend(avail, assigned, remaining - 1) {
                    return true;
                }
                assigned[v] = None;
            }
            for &(w, old) in saved.iter().rev() {
                avail[w] = old;
            }
            if self.timed_out {
                return false;
            }
        }
        false
    }
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r.min(usize::MAX as u128) as usize
}

/// A problem compiled for the smallest bitset width that fits its colors.
#[derive(Debug, Clone)]
pub enum AnyEngine {
    W2(Engine<2>),
    W8(Engine<8>),
    W1024(Engine<1024>),
}

/// Restriction of the solver to a subgraph of a host graph, with a fixed
/// dense numbering of both vertices and colors.
#[derive(Debug, Clone)]
pub struct Compiled {
    pub engine: AnyEngine,
    pub colors: ColorIndex,
    /// Host vertex of each local vertex.
    pub host_of: Vec<usize>,
    /// Local vertex of each host vertex, if active.
    pub local_of: Vec<Option<usize>>,
}

macro_rules! with_engine {
    ($self:expr, $e:ident => $body:expr) => {
        match $self {
            AnyEngine::W2($e) => $body,
            AnyEngine::W8($e) => $body,
            AnyEngine::W1024($e) => $body,
        }
    };
}

impl Compiled {
    /// Compiles the problem on `within` (all of `g` if `None`).
    pub fn new(g: &Graph, within: Option<&Subgraph>, lists: &ListAssignment, a: usize) -> Result<Compiled, SolveError> {
        check_params(g, lists, a)?;
        let active = |v: usize| within.is_none_or(|s| s.has_vertex(v));
        let host_of: Vec<usize> = (0..g.vertex_count()).filter(|&v| active(v)).collect();
        let mut local_of = vec![None; g.vertex_count()];
        for (i, &v) in host_of.iter().enumerate() {
            local_of[v] = Some(i);
        }
        let mut adj = vec![Vec::new(); host_of.len()];
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            if within.is_none_or(|s| s.has_edge(e)) {
                if let (Some(x), Some(y)) = (local_of[u], local_of[v]) {
                    adj[x].push(y);
                    adj[y].push(x);
                }
            }
        }
        let colors = ColorIndex::new(host_of.iter().flat_map(|&v| lists.get(v).iter()));
        let engine = if colors.len() <= 128 {
            AnyEngine::W2(Engine::new(
                adj,
                host_of.iter().map(|&v| colors.encode(lists.get(v))).collect(),
                a,
            ))
        } else if colors.len() <= 512 {
            AnyEngine::W8(Engine::new(
                adj,
                host_of.iter().map(|&v| colors.encode(lists.get(v))).collect(),
                a,
            ))
        } else {
            AnyEngine::W1024(Engine::new(
                adj,
                host_of.iter().map(|&v| colors.encode(lists.get(v))).collect(),
                a,
            ))
        };
        Ok(Compiled {
            engine,
            colors,
            host_of,
            local_of,
        })
    }

    pub fn set_deadline(&mut self, deadline: Option<Instant>) {
        with_engine!(&mut self.engine, e => e.set_deadline(deadline))
    }

    /// Restricts host vertex `v` to the given candidate sets. Candidates using
    /// colors outside every list are dropped. Inactive vertices are ignored.
    pub fn restrict(&mut self, v: usize, candidates: Option<&[ColorSet]>) {
        let Some(l) = self.local_of[v] else {
            return;
        };
        let colors = &self.colors;
        with_engine!(&mut self.engine, e => {
            let enc = candidates.map(|cs| cs.iter().filter(|c| colors.covers(c)).map(|c| colors.encode(c)).collect());
            e.restrict(l, enc)
        })
    }

    /// Fixes host vertex `v` to `set`. A set using colors outside every list
    /// makes the problem infeasible.
    pub fn fix(&mut self, v: usize, set: &ColorSet) {
        let Some(l) = self.local_of[v] else {
            return;
        };
        if !self.colors.covers(set) {
            with_engine!(&mut self.engine, e => e.restrict(l, Some(Vec::new())));
            return;
        }
        let colors = &self.colors;
        with_engine!(&mut self.engine, e => e.fix(l, colors.encode(set)))
    }

    pub fn release(&mut self, v: usize) {
        if let Some(l) = self.local_of[v] {
            with_engine!(&mut self.engine, e => e.restrict(l, None))
        }
    }

    /// Runs the search, returning a coloring indexed by host vertices.
    pub fn run(&mut self, host_n: usize) -> Result<Option<SetColoring>, SolveError> {
        let colors = &self.colors;
        let host_of = &self.host_of;
        with_engine!(&mut self.engine, e => {
            Ok(e.run()?.map(|sol| {
                let mut out = SetColoring::empty(host_n);
                for (l, s) in sol.iter().enumerate() {
                    out.set(host_of[l], colors.decode(s));
                }
                out
            }))
        })
    }

    /// Feasibility only.
    pub fn feasible(&mut self) -> Result<bool, SolveError> {
        with_engine!(&mut self.engine, e => Ok(e.run()?.is_some()))
    }
}

fn check_params(g: &Graph, lists: &ListAssignment, a: usize) -> Result<(), SolveError> {
    if a == 0 {
        return Err(SolveError::ZeroA);
    }
    if a > MAX_A {
        return Err(SolveError::ATooLarge(a));
    }
    if lists.len() != g.vertex_count() {
        return Err(SolveError::ListCount {
            lists: lists.len(),
            vertices: g.vertex_count(),
        });
    }
    Ok(())
}

/// Search options shared by the public entry points.
#[derive(Debug, Clone, Copy, Default)]
pub struct SearchOptions {
    pub deadline: Option<Instant>,
}

/// Finds an `(L:a)`-coloring of `within` (or all of `g`) in which every
/// vertex with candidates uses one of them.
pub fn search(
    g: &Graph,
    within: Option<&Subgraph>,
    lists: &ListAssignment,
    a: usize,
    candidates: &[Option<Vec<ColorSet>>],
    opts: SearchOptions,
) -> Result<Option<SetColoring>, SolveError> {
    let mut c = Compiled::new(g, within, lists, a)?;
    c.set_deadline(opts.deadline);
    for (v, cand) in candidates.iter().enumerate() {
        if let Some(cs) = cand {
            c.restrict(v, Some(cs));
        }
    }
    c.run(g.vertex_count())
}

/// An `(L:a)`-coloring of `g`, if one exists.
pub fn solve(g: &Graph, lists: &ListAssignment, a: usize) -> Result<Option<SetColoring>, SolveError> {
    search(g, None, lists, a, &[], SearchOptions::default())
}

/// An `(L:a)`-coloring of the subgraph `h`, if one exists.
pub fn solve_within(
    g: &Graph,
    h: &Subgraph,
    lists: &ListAssignment,
    a: usize,
) -> Result<Option<SetColoring>, SolveError> {
    search(g, Some(h), lists, a, &[], SearchOptions::default())
}

/// Checks that `psi` colors exactly the vertices of `s` and is an
/// `(L:a)`-coloring of the subgraph `s` (only edges of `s` count).
pub fn check_on_subgraph(
    g: &Graph,
    s: &Subgraph,
    lists: &ListAssignment,
    a: usize,
    psi: &SetColoring,
) -> Result<(), ColoringViolation> {
    let (sg, host_of) = s.to_graph(g);
    let local = SetColoring(host_of.iter().map(|&v| psi.get(v).cloned()).collect());
    check_set_coloring(&sg, &lists.restrict(&host_of), a, &local, true)
}

/// Whether `psi`, a coloring of `s`, extends to an `(L:a)`-coloring of `h`
/// (all of `g` if `None`).
pub fn extends(
    g: &Graph,
    h: Option<&Subgraph>,
    lists: &ListAssignment,
    a: usize,
    s: &Subgraph,
    psi: &SetColoring,
) -> Result<bool, SolveError> {
    check_params(g, lists, a)?;
    check_on_subgraph(g, s, lists, a, psi).map_err(SolveError::InvalidPrecoloring)?;
    let mut c = Compiled::new(g, h, lists, a)?;
    for v in s.vertices() {
        if let Some(set) = psi.get(v) {
            c.fix(v, set);
        }
    }
    c.feasible()
}

/// A precoloring-extension instance.
#[derive(Debug, Clone)]
pub struct ExtensionProblem {
    pub graph: Graph,
    pub lists: ListAssignment,
    pub a: usize,
    pub s: Subgraph,
    pub psi: Option<SetColoring>,
}

impl ExtensionProblem {
    /// A coloring of the graph extending `psi` (or any coloring of `s` when
    /// `psi` is absent).
    pub fn solve(&self, opts: SearchOptions) -> Result<Option<SetColoring>, SolveError> {
        let mut cands: Vec<Option<Vec<ColorSet>>> = vec![None; self.graph.vertex_count()];
        if let Some(psi) = &self.psi {
            check_on_subgraph(&self.graph, &self.s, &self.lists, self.a, psi)
                .map_err(SolveError::InvalidPrecoloring)?;
            for v in self.s.vertices() {
                cands[v] = psi.get(v).map(|c| vec![c.clone()]);
            }
        }
        search(&self.graph, None, &self.lists, self.a, &cands, opts)
    }
}
