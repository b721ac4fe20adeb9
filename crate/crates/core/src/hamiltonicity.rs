//! Degree-sequence certificates, exact Hamilton cycle searches for graphs,
//! digraphs and orientation patterns, bipartite matchings and 1-factors, and
//! the rotation-extension construction for dense digraphs.

use crate::error::{check_cap, domain, LabError, Result};
use crate::graph::{AnyGraph, Digraph, Graph};
use crate::rational::{format_rational, Rational};
use rayon::prelude::*;
use std::collections::VecDeque;
use std::fmt;

/// Default order limit for [`hamilton_oracle`].
pub const DEFAULT_HAMILTON_CAP: usize = 20;
/// Default order limit for pattern and path searches.
pub const DEFAULT_PATTERN_CAP: usize = 16;
/// Searches keep vertex sets in a `u64`.
pub const MAX_SEARCH_ORDER: usize = 64;

/// A Hamilton cycle as a cyclic vertex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HamCycle {
    pub order: Vec<usize>,
}

impl HamCycle {
    fn covers(&self, n: usize) -> bool {
        let mut seen = vec![false; n];
        self.order.len() == n && self.order.iter().all(|&v| v < n && !std::mem::replace(&mut seen[v], true))
    }

    fn steps(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let k = self.order.len();
        (0..k).map(move |i| (self.order[i], self.order[(i + 1) % k]))
    }

    pub fn is_valid_graph(&self, g: &Graph) -> bool {
        g.n() >= 3 && self.covers(g.n()) && self.steps().all(|(u, v)| g.has_edge(u, v))
    }

    pub fn is_valid_digraph(&self, d: &Digraph) -> bool {
        d.n() >= 2 && self.covers(d.n()) && self.steps().all(|(u, v)| d.has_arc(u, v))
    }

    /// Position `i` of the word governs the edge between `order[i]` and `order[i+1]`.
    pub fn realizes(&self, d: &Digraph, pattern: &OrientedPattern) -> bool {
        pattern.len() == self.order.len()
            && self.covers(d.n())
            && self.steps().zip(pattern.word()).all(|((u, v), &dir)| match dir {
                Dir::F => d.has_arc(u, v),
                Dir::B => d.has_arc(v, u),
            })
    }
}

/// Edge direction along a traversal: forward or backward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dir {
    F,
    B,
}

/// A cyclic word over `{f, b}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrientedPattern {
    word: Vec<Dir>,
}

impl OrientedPattern {
    pub fn new(word: Vec<Dir>) -> Self {
        OrientedPattern { word }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let word = text
            .trim()
            .chars()
            .map(|c| match c {
                'f' | 'F' => Ok(Dir::F),
                'b' | 'B' => Ok(Dir::B),
                other => domain(format!("pattern letters are f and b, found {other:?}")),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(OrientedPattern { word })
    }

    /// `f^n`, a consistently oriented cycle.
    pub fn directed(n: usize) -> Self {
        OrientedPattern { word: vec![Dir::F; n] }
    }

    /// `fbfb…` of length `n`.
    pub fn alternating(n: usize) -> Self {
        OrientedPattern { word: (0..n).map(|i| if i % 2 == 0 { Dir::F } else { Dir::B }).collect() }
    }

    pub fn word(&self) -> &[Dir] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// Consecutive letters differ, ignoring the wrap-around.
    pub fn is_alternating(&self) -> bool {
        self.word.windows(2).all(|w| w[0] != w[1])
    }

    pub fn rotated(&self, k: usize) -> Self {
        let mut word = self.word.clone();
        if !word.is_empty() {
            word.rotate_left(k % self.word.len());
        }
        OrientedPattern { word }
    }

    /// Positions `i` with both cycle edges pointing at `order[i]`.
    pub fn sinks(&self) -> usize {
        let k = self.word.len();
        (0..k).filter(|&i| self.word[(i + k - 1) % k] == Dir::F && self.word[i] == Dir::B).count()
    }

    pub fn sources(&self) -> usize {
        let k = self.word.len();
        (0..k).filter(|&i| self.word[(i + k - 1) % k] == Dir::B && self.word[i] == Dir::F).count()
    }
}

impl fmt::Display for OrientedPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.word {
            f.write_str(if *d == Dir::F { "f" } else { "b" })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertificateKind {
    Dirac,
    Posa,
    Chvatal,
    GhouilaHouri,
    NashWilliams,
    /// The robust-outexpander degree sequence condition with parameter `η`.
    RobDegSeq(Rational),
}

impl CertificateKind {
    pub fn for_digraphs(&self) -> bool {
        matches!(self, CertificateKind::GhouilaHouri | CertificateKind::NashWilliams | CertificateKind::RobDegSeq(_))
    }

    pub fn name(&self) -> String {
        match self {
            CertificateKind::Dirac => "dirac".into(),
            CertificateKind::Posa => "posa".into(),
            CertificateKind::Chvatal => "chvatal".into(),
            CertificateKind::GhouilaHouri => "ghouila-houri".into(),
            CertificateKind::NashWilliams => "nash-williams".into(),
            CertificateKind::RobDegSeq(eta) => format!("robdegseq(eta={})", format_rational(eta)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub satisfied: bool,
    /// 1-based index `i` of the first violated inequality.
    pub failing_index: Option<usize>,
    pub reason: Option<String>,
}

impl Certificate {
    fn pass(kind: CertificateKind) -> Self {
        Certificate { kind, satisfied: true, failing_index: None, reason: None }
    }

    fn fail(kind: CertificateKind, i: usize, reason: String) -> Self {
        Certificate { kind, satisfied: false, failing_index: Some(i), reason: Some(reason) }
    }
}

/// Evaluates a sufficient condition for Hamiltonicity on sorted degree
/// sequences `d_1 ≤ … ≤ d_n`.
pub fn certify(g: AnyGraph, kind: &CertificateKind) -> Result<Certificate> {
    let n = g.n();
    match (g, kind.for_digraphs()) {
        (AnyGraph::Graph(_), true) => return Err(LabError::KindMismatch { expected: "digraph", found: "graph" }),
        (AnyGraph::Digraph(_), false) => return Err(LabError::KindMismatch { expected: "graph", found: "digraph" }),
        _ => {}
    }
    if n < 3 && !matches!(kind, CertificateKind::RobDegSeq(_)) {
        return domain("Hamiltonicity certificates need at least 3 vertices");
    }
    if n == 0 {
        return domain("the graph has no vertices");
    }
    let kind = kind.clone();
    Ok(match g {
        AnyGraph::Graph(g) => {
            let d = g.degree_sequence();
            // 1-based access
            let at = |i: usize| d[i - 1];
            match kind {
                CertificateKind::Dirac => {
                    if 2 * at(1) >= n {
                        Certificate::pass(kind)
                    } else {
                        Certificate::fail(kind, 1, format!("δ = {} < n/2", at(1)))
                    }
                }
                CertificateKind::Posa => {
                    if let Some(i) = (1..n).take_while(|&i| 2 * i + 1 < n).find(|&i| at(i) < i + 1) {
                        Certificate::fail(kind, i, format!("d_{i} = {} < {}", at(i), i + 1))
                    } else if n % 2 == 1 && at(n.div_ceil(2)) < n.div_ceil(2) {
                        let i = n.div_ceil(2);
                        Certificate::fail(kind, i, format!("d_{i} = {} < {i}", at(i)))
                    } else {
                        Certificate::pass(kind)
                    }
                }
                CertificateKind::Chvatal => match (1..n).take_while(|&i| 2 * i < n).find(|&i| at(i) < i + 1 && at(n - i) < n - i) {
                    Some(i) => Certificate::fail(kind, i, format!("d_{i} = {} < {} and d_{} = {} < {}", at(i), i + 1, n - i, at(n - i), n - i)),
                    None => Certificate::pass(kind),
                },
                _ => unreachable!("digraph kinds are rejected above"),
            }
        }
        AnyGraph::Digraph(dg) => {
            let (dout, din) = dg.degree_sequences();
            match kind {
                CertificateKind::GhouilaHouri => {
                    let m = dg.min_semidegree();
                    if 2 * m >= n {
                        Certificate::pass(kind)
                    } else {
                        Certificate::fail(kind, 1, format!("δ⁰ = {m} < n/2"))
                    }
                }
                CertificateKind::NashWilliams => {
                    if !dg.is_strongly_connected() {
                        Certificate { kind, satisfied: false, failing_index: None, reason: Some("not strongly connected".into()) }
                    } else {
                        match degree_pair_violation(&dout, &din, &Rational::from_integer(1), |i| Some(n - i), |i| n - i) {
                            Some((i, why)) => Certificate::fail(kind, i, why),
                            None => Certificate::pass(kind),
                        }
                    }
                }
                CertificateKind::RobDegSeq(ref eta) => {
                    let eta_n = *eta * n as i64;
                    // first disjunct: d_i ≥ i + ηn; subscript n − i − ηn floored
                    let sub = |i: usize| {
                        let j = (Rational::from_integer((n - i) as i64) - eta_n).floor().to_integer();
                        (j >= 1).then_some(j as usize)
                    };
                    match degree_pair_violation(&dout, &din, &eta_n, sub, |i| n - i) {
                        Some((i, why)) => Certificate::fail(kind.clone(), i, why),
                        None => Certificate::pass(kind.clone()),
                    }
                }
                _ => unreachable!("graph kinds are rejected above"),
            }
        }
    })
}

/// First `i < n/2` violating `d⁺_i ≥ i + gap or d⁻_{sub(i)} ≥ rhs(i)`, or its mirror image.
fn degree_pair_violation(
    dout: &[usize],
    din: &[usize],
    gap: &Rational,
    sub: impl Fn(usize) -> Option<usize>,
    rhs: impl Fn(usize) -> usize,
) -> Option<(usize, String)> {
    let n = dout.len();
    for i in (1..n).take_while(|&i| 2 * i < n) {
        let need = Rational::from_integer(i as i64) + gap;
        for (first, second, a, b) in [(dout, din, "+", "-"), (din, dout, "-", "+")] {
            let left = Rational::from_integer(first[i - 1] as i64) >= need;
            let right = sub(i).is_some_and(|j| j <= n && second[j - 1] >= rhs(i));
            if !left && !right {
                let j = sub(i).map_or("-".to_string(), |j| j.to_string());
                return Some((i, format!("d{a}_{i} = {} < {} and d{b}_{j} < {}", first[i - 1], format_rational(&need), rhs(i))));
            }
        }
    }
    None
}

/// Maximum bipartite matching over `u64` adjacency rows; `left` and `right`
/// select the participating vertices. Returns whether every left vertex is matched.
fn masks_have_perfect_matching(adj: &[u64], left: u64, right: u64) -> bool {
    if left.count_ones() != right.count_ones() {
        return false;
    }
    let mut mate_of_right = [u8::MAX; 64];
    let mut l = left;
    while l != 0 {
        let u = l.trailing_zeros() as usize;
        l &= l - 1;
        let mut seen = 0u64;
        if !augment(u, adj, right, &mut seen, &mut mate_of_right) {
            return false;
        }
    }
    true
}

fn augment(u: usize, adj: &[u64], right: u64, seen: &mut u64, mate: &mut [u8; 64]) -> bool {
    let mut c = adj[u] & right & !*seen;
    while c != 0 {
        let v = c.trailing_zeros() as usize;
        c &= c - 1;
        *seen |= 1 << v;
        if mate[v] == u8::MAX || augment(mate[v] as usize, adj, right, seen, mate) {
            mate[v] = u as u8;
            return true;
        }
    }
    false
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            v
        })
    })
}

/// Depth-first Hamilton cycle search from vertex 0 with a 1-factor relaxation
/// as the pruning test at every node.
struct HamSearch<'a> {
    out: &'a [u64],
    inn: &'a [u64],
    full: u64,
}

impl HamSearch<'_> {
    fn feasible(&self, end: usize, unvisited: u64) -> bool {
        let from = unvisited | 1 << end;
        let to = unvisited | 1;
        for u in bits(unvisited) {
            if self.inn[u] & from == 0 || self.out[u] & to == 0 {
                return false;
            }
        }
        // everything left must be reachable from `end` inside the unvisited set
        let mut reach = 1u64 << end;
        let mut frontier = reach;
        while frontier != 0 {
            let mut next = 0;
            for v in bits(frontier) {
                next |= self.out[v] & (unvisited | 1);
            }
            frontier = next & !reach;
            reach |= next;
        }
        if reach & to != to {
            return false;
        }
        // successors must form a bijection from {end} ∪ U onto U ∪ {start}
        masks_have_perfect_matching(self.out, from, to)
    }

    fn dfs(&self, path: &mut Vec<usize>, visited: u64) -> bool {
        let end = *path.last().expect("path starts at vertex 0");
        let unvisited = self.full & !visited;
        if unvisited == 0 {
            return self.out[end] & 1 == 1;
        }
        if !self.feasible(end, unvisited) {
            return false;
        }
        let mut cands = self.out[end] & unvisited;
        let here = 1u64 << end;
        for u in bits(unvisited) {
            if self.inn[u] & (unvisited | here) == here {
                // only `end` can precede u
                cands &= 1 << u;
            }
        }
        for v in bits(cands) {
            path.push(v);
            if self.dfs(path, visited | 1 << v) {
                return true;
            }
            path.pop();
        }
        false
    }

    fn solve(&self, n: usize) -> Option<Vec<usize>> {
        let first: Vec<usize> = bits(self.out[0] & self.full & !1).collect();
        first.into_par_iter().find_map_first(|v| {
            let mut path = vec![0, v];
            self.dfs(&mut path, 1 | 1 << v).then_some(path)
        })
        .filter(|p| p.len() == n)
    }
}

fn ham_masks(out: &[u64], inn: &[u64]) -> Option<Vec<usize>> {
    let n = out.len();
    if n < 2 {
        return None;
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    if (0..n).any(|v| out[v] == 0 || inn[v] == 0) {
        return None;
    }
    HamSearch { out, inn, full }.solve(n)
}

/// Exact Hamilton cycle search on a graph; `None` means there is none.
pub fn hamilton_oracle(g: &Graph) -> Result<Option<HamCycle>> {
    hamilton_oracle_capped(g, DEFAULT_HAMILTON_CAP)
}

pub fn hamilton_oracle_capped(g: &Graph, cap: usize) -> Result<Option<HamCycle>> {
    check_cap("order for Hamilton search", g.n(), cap.min(MAX_SEARCH_ORDER))?;
    if g.n() < 3 {
        return Ok(None);
    }
    let m = g.masks();
    Ok(ham_masks(&m, &m).map(|order| HamCycle { order }))
}

pub fn hamilton_oracle_digraph(d: &Digraph) -> Result<Option<HamCycle>> {
    hamilton_oracle_digraph_capped(d, DEFAULT_HAMILTON_CAP)
}

pub fn hamilton_oracle_digraph_capped(d: &Digraph, cap: usize) -> Result<Option<HamCycle>> {
    check_cap("order for Hamilton search", d.n(), cap.min(MAX_SEARCH_ORDER))?;
    Ok(ham_masks(&d.out_masks(), &d.in_masks()).map(|order| HamCycle { order }))
}

pub fn hamilton_oracle_any(g: AnyGraph) -> Result<Option<HamCycle>> {
    match g {
        AnyGraph::Graph(g) => hamilton_oracle(g),
        AnyGraph::Digraph(d) => hamilton_oracle_digraph(d),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrientedOutcome {
    Found(HamCycle),
    NotFound,
    /// No host can contain the pattern, e.g. an alternating word of odd length.
    Impossible(String),
}

impl OrientedOutcome {
    pub fn cycle(&self) -> Option<&HamCycle> {
        match self {
            OrientedOutcome::Found(c) => Some(c),
            _ => None,
        }
    }
}

fn step_rows<'a>(dir: Dir, out: &'a [u64], inn: &'a [u64]) -> &'a [u64] {
    match dir {
        Dir::F => out,
        Dir::B => inn,
    }
}

struct PatternSearch<'a> {
    out: &'a [u64],
    inn: &'a [u64],
    word: Vec<Dir>,
    full: u64,
}

impl PatternSearch<'_> {
    fn dfs(&self, path: &mut Vec<usize>, visited: u64) -> bool {
        let i = path.len() - 1;
        let end = path[i];
        let n = self.word.len();
        let unvisited = self.full & !visited;
        if unvisited == 0 {
            return step_rows(self.word[n - 1], self.out, self.inn)[end] & 1 == 1;
        }
        // the last vertex must close the cycle back to vertex 0
        let closer = step_rows(self.word[n - 1], self.inn, self.out)[0];
        if closer & unvisited == 0 {
            return false;
        }
        let touch = unvisited | 1 << end | 1;
        if bits(unvisited).any(|u| (self.out[u] | self.inn[u]) & touch & !(1 << u) == 0) {
            return false;
        }
        let mut cands = step_rows(self.word[i], self.out, self.inn)[end] & unvisited;
        if unvisited.count_ones() == 1 {
            cands &= closer;
        }
        for v in bits(cands) {
            path.push(v);
            if self.dfs(path, visited | 1 << v) {
                return true;
            }
            path.pop();
        }
        false
    }
}

/// Searches for a Hamilton cycle whose edge directions follow `pattern` up to
/// rotation of the word. Reflections are a different query and are not tried.
pub fn oriented_hamilton_oracle(d: &Digraph, pattern: &OrientedPattern) -> Result<OrientedOutcome> {
    oriented_hamilton_oracle_capped(d, pattern, DEFAULT_PATTERN_CAP)
}

pub fn oriented_hamilton_oracle_capped(d: &Digraph, pattern: &OrientedPattern, cap: usize) -> Result<OrientedOutcome> {
    let n = d.n();
    check_cap("order for oriented Hamilton search", n, cap.min(MAX_SEARCH_ORDER))?;
    if pattern.len() != n {
        return domain(format!("pattern length {} differs from the order {n}", pattern.len()));
    }
    if n < 3 {
        return domain("oriented Hamilton cycles need at least 3 vertices");
    }
    if n % 2 == 1 && pattern.is_alternating() {
        return Ok(OrientedOutcome::Impossible(format!("an anti-directed cycle needs even length, the word has length {n}")));
    }
    let (out, inn) = (d.out_masks(), d.in_masks());
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut rotations: Vec<Vec<Dir>> = Vec::new();
    for k in 0..n {
        let w = pattern.rotated(k).word;
        if !rotations.contains(&w) {
            rotations.push(w);
        }
    }
    // vertex 0 is fixed at position 0, so trying every rotation covers every placement
    let jobs: Vec<(usize, usize)> = rotations
        .iter()
        .enumerate()
        .flat_map(|(r, w)| bits(step_rows(w[0], &out, &inn)[0] & full & !1).map(move |v| (r, v)))
        .collect();
    let found = jobs.into_par_iter().find_map_first(|(r, v)| {
        let search = PatternSearch { out: &out, inn: &inn, word: rotations[r].clone(), full };
        let mut path = vec![0, v];
        search.dfs(&mut path, 1 | 1 << v).then_some((r, path))
    });
    Ok(match found {
        Some((r, order)) => {
            // re-anchor so that the returned cycle realizes the word as given
            let shift = (0..n).find(|&k| pattern.rotated(k).word == rotations[r]).expect("rotation came from the pattern");
            let mut order = order;
            order.rotate_right(shift);
            OrientedOutcome::Found(HamCycle { order })
        }
        None => OrientedOutcome::NotFound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NeutralPairs {
    /// Unordered `{x, z}` with a common out-neighbour `y`, counted per `y`.
    pub count: u64,
    /// The input had 2-cycles, which were left out of the count.
    pub two_cycles: bool,
}

/// Neutral pairs over the oriented part of `d` (arcs whose reverse is absent).
pub fn neutral_pairs(d: &Digraph) -> NeutralPairs {
    let count = (0..d.n())
        .map(|y| {
            let k = d.in_neighbours(y).ones().filter(|&x| !d.has_arc(y, x)).count() as u64;
            k * k.saturating_sub(1) / 2
        })
        .sum();
    NeutralPairs { count, two_cycles: d.has_two_cycle() }
}

/// For a cycle pattern: the number of sink positions.
pub fn neutral_pairs_cycle(pattern: &OrientedPattern) -> usize {
    pattern.sinks()
}

/// A path `x = p_0, …, p_k = y` with `word[i]` giving the direction of `p_i p_{i+1}`.
pub fn find_oriented_path(d: &Digraph, x: usize, y: usize, word: &OrientedPattern) -> Result<Option<Vec<usize>>> {
    find_oriented_path_capped(d, x, y, word, DEFAULT_PATTERN_CAP)
}

pub fn find_oriented_path_capped(d: &Digraph, x: usize, y: usize, word: &OrientedPattern, cap: usize) -> Result<Option<Vec<usize>>> {
    let n = d.n();
    check_cap("order for oriented path search", n, cap.min(MAX_SEARCH_ORDER))?;
    if x >= n || y >= n {
        return Err(LabError::VertexOutOfRange { vertex: x.max(y), n });
    }
    if x == y {
        return domain("the path endpoints must differ");
    }
    let k = word.len();
    if k == 0 || k > n - 1 {
        return domain(format!("the word length must lie in 1..={}", n - 1));
    }
    let (out, inn) = (d.out_masks(), d.in_masks());
    fn go(out: &[u64], inn: &[u64], w: &[Dir], y: usize, path: &mut Vec<usize>, used: u64) -> bool {
        let i = path.len() - 1;
        if i == w.len() {
            return true;
        }
        let end = path[i];
        let mut cands = step_rows(w[i], out, inn)[end] & !used;
        if i + 1 == w.len() {
            cands &= 1 << y;
        } else {
            cands &= !(1 << y);
        }
        for v in bits(cands) {
            path.push(v);
            if go(out, inn, w, y, path, used | 1 << v) {
                return true;
            }
            path.pop();
        }
        false
    }
    let mut path = vec![x];
    Ok(go(&out, &inn, word.word(), y, &mut path, 1 << x).then_some(path))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchingOutcome {
    /// `mate[a]` is the partner of left vertex `a`.
    Saturating(Vec<usize>),
    /// A left set `set` whose neighbourhood `neighbourhood` is smaller.
    HallViolator { matching: Vec<Option<usize>>, set: Vec<usize>, neighbourhood: Vec<usize> },
}

impl MatchingOutcome {
    pub fn is_saturating(&self) -> bool {
        matches!(self, MatchingOutcome::Saturating(_))
    }
}

/// Hopcroft–Karp on the bipartite graph with left side `0..adj.len()`,
/// right side `0..right`. When the maximum matching misses a left vertex,
/// the left vertices reachable from it by alternating paths form a Hall violator.
pub fn bipartite_matching(adj: &[Vec<usize>], right: usize) -> Result<MatchingOutcome> {
    let left = adj.len();
    if let Some(&v) = adj.iter().flatten().find(|&&v| v >= right) {
        return Err(LabError::VertexOutOfRange { vertex: v, n: right });
    }
    const NONE: usize = usize::MAX;
    let mut mate_l = vec![NONE; left];
    let mut mate_r = vec![NONE; right];
    let mut dist = vec![0usize; left];
    loop {
        // layered BFS from free left vertices
        let mut queue = VecDeque::new();
        for a in 0..left {
            if mate_l[a] == NONE {
                dist[a] = 0;
                queue.push_back(a);
            } else {
                dist[a] = NONE;
            }
        }
        let mut found = false;
        while let Some(a) = queue.pop_front() {
            for &b in &adj[a] {
                match mate_r[b] {
                    NONE => found = true,
                    a2 if dist[a2] == NONE => {
                        dist[a2] = dist[a] + 1;
                        queue.push_back(a2);
                    }
                    _ => {}
                }
            }
        }
        if !found {
            break;
        }
        fn dfs(a: usize, adj: &[Vec<usize>], mate_l: &mut [usize], mate_r: &mut [usize], dist: &mut [usize]) -> bool {
            for &b in &adj[a] {
                let a2 = mate_r[b];
                if a2 == NONE || (dist[a2] == dist[a] + 1 && dfs(a2, adj, mate_l, mate_r, dist)) {
                    mate_l[a] = b;
                    mate_r[b] = a;
                    return true;
                }
            }
            dist[a] = NONE;
            false
        }
        let mut progress = false;
        for a in 0..left {
            if mate_l[a] == NONE && dfs(a, adj, &mut mate_l, &mut mate_r, &mut dist) {
                progress = true;
            }
        }
        if !progress {
            break;
        }
    }
    let Some(free) = (0..left).find(|&a| mate_l[a] == NONE) else {
        return Ok(MatchingOutcome::Saturating(mate_l));
    };
    let mut in_s = vec![false; left];
    let mut in_t = vec![false; right];
    in_s[free] = true;
    let mut queue = VecDeque::from([free]);
    while let Some(a) = queue.pop_front() {
        for &b in &adj[a] {
            if !in_t[b] {
                in_t[b] = true;
                let a2 = mate_r[b];
                if a2 != NONE && !in_s[a2] {
                    in_s[a2] = true;
                    queue.push_back(a2);
                }
            }
        }
    }
    Ok(MatchingOutcome::HallViolator {
        matching: mate_l.iter().map(|&b| (b != NONE).then_some(b)).collect(),
        set: (0..left).filter(|&a| in_s[a]).collect(),
        neighbourhood: (0..right).filter(|&b| in_t[b]).collect(),
    })
}

/// Matching between the vertex lists `a` and `b` of a graph; the outcome is in positions of those lists.
pub fn bipartite_matching_graph(g: &Graph, a: &[usize], b: &[usize]) -> Result<MatchingOutcome> {
    let adj: Vec<Vec<usize>> = a.iter().map(|&u| b.iter().enumerate().filter(|&(_, &v)| g.has_edge(u, v)).map(|(j, _)| j).collect()).collect();
    bipartite_matching(&adj, b.len())
}

/// A spanning set of vertex-disjoint directed cycles. Each cycle starts at its
/// least vertex; cycles are sorted by that vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleCover {
    pub cycles: Vec<Vec<usize>>,
}

impl CycleCover {
    pub fn from_successors(succ: &[usize]) -> Result<Self> {
        let n = succ.len();
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut c = Vec::new();
            let mut v = s;
            while !seen[v] {
                seen[v] = true;
                c.push(v);
                v = succ[v];
                if v >= n {
                    return Err(LabError::VertexOutOfRange { vertex: v, n });
                }
            }
            if v != s {
                return domain("the successor map is not a permutation");
            }
            cycles.push(c);
        }
        Ok(CycleCover { cycles })
    }

    pub fn successors(&self, n: usize) -> Vec<usize> {
        let mut succ = vec![0; n];
        for c in &self.cycles {
            for (i, &v) in c.iter().enumerate() {
                succ[v] = c[(i + 1) % c.len()];
            }
        }
        succ
    }

    pub fn predecessors(&self, n: usize) -> Vec<usize> {
        let mut pred = vec![0; n];
        for c in &self.cycles {
            for (i, &v) in c.iter().enumerate() {
                pred[c[(i + 1) % c.len()]] = v;
            }
        }
        pred
    }

    pub fn cycle_of(&self, n: usize) -> Vec<usize> {
        let mut which = vec![0; n];
        for (k, c) in self.cycles.iter().enumerate() {
            for &v in c {
                which[v] = k;
            }
        }
        which
    }

    pub fn is_valid(&self, d: &Digraph) -> bool {
        let n = d.n();
        let mut seen = vec![false; n];
        self.cycles.iter().all(|c| {
            c.len() >= 2
                && (0..c.len()).all(|i| {
                    let v = c[i];
                    v < n && !std::mem::replace(&mut seen[v], true) && d.has_arc(v, c[(i + 1) % c.len()])
                })
        }) && seen.iter().all(|&s| s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OneFactorOutcome {
    Factor(CycleCover),
    /// Vertices whose out-neighbourhoods together are too small.
    NoFactor { violator: Vec<usize>, out_neighbourhood: Vec<usize> },
}

impl OneFactorOutcome {
    pub fn factor(&self) -> Option<&CycleCover> {
        match self {
            OneFactorOutcome::Factor(f) => Some(f),
            OneFactorOutcome::NoFactor { .. } => None,
        }
    }
}

/// Auxiliary bipartite graph of `d`: left and right copies of `V`, `a ~ b` for each arc `ab`.
pub fn auxiliary_bipartite(d: &Digraph) -> Vec<Vec<usize>> {
    (0..d.n()).map(|v| d.out_neighbours(v).ones().collect()).collect()
}

/// A 1-factor from a perfect matching of the auxiliary bipartite graph.
pub fn one_factor(d: &Digraph) -> Result<OneFactorOutcome> {
    if d.n() == 0 {
        return domain("the digraph has no vertices");
    }
    Ok(match bipartite_matching(&auxiliary_bipartite(d), d.n())? {
        MatchingOutcome::Saturating(mate) => OneFactorOutcome::Factor(CycleCover::from_successors(&mate)?),
        MatchingOutcome::HallViolator { set, neighbourhood, .. } => OneFactorOutcome::NoFactor { violator: set, out_neighbourhood: neighbourhood },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RotationStep {
    OneFactor,
    Close,
    Absorb,
    Audit,
}

impl fmt::Display for RotationStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RotationStep::OneFactor => "one-factor",
            RotationStep::Close => "close",
            RotationStep::Absorb => "absorb",
            RotationStep::Audit => "audit",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RotationTrace {
    pub initial_cycles: usize,
    pub extensions: usize,
    /// Closures by a single crossing arc.
    pub case1: usize,
    /// Closures after one rotation of an end.
    pub case2: usize,
    pub rotations: usize,
    pub absorptions: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RotationOutcome {
    Cycle(HamCycle),
    Failed { step: RotationStep, path_len: usize, detail: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationReport {
    pub outcome: RotationOutcome,
    pub trace: RotationTrace,
}

impl RotationReport {
    pub fn cycle(&self) -> Option<&HamCycle> {
        match &self.outcome {
            RotationOutcome::Cycle(c) => Some(c),
            RotationOutcome::Failed { .. } => None,
        }
    }
}

/// Path state for the rotation-extension procedure. The reversed digraph turns
/// start-side moves into end-side moves.
struct RotState<'a> {
    out: &'a [Vec<bool>],
    on_path: Vec<bool>,
    /// Successor in the original 1-factor, for vertices off the path.
    next: &'a [usize],
}

impl RotState<'_> {
    fn arc(&self, u: usize, v: usize) -> bool {
        self.out[u][v]
    }

    /// Appends whole factor cycles while the end has an out-neighbour off the path.
    fn extend_end(&mut self, path: &mut Vec<usize>) -> usize {
        let mut count = 0;
        loop {
            let end = *path.last().expect("nonempty path");
            let Some(w) = (0..self.out.len()).find(|&w| !self.on_path[w] && self.arc(end, w)) else {
                return count;
            };
            let mut v = w;
            loop {
                path.push(v);
                self.on_path[v] = true;
                v = self.next[v];
                if v == w {
                    break;
                }
            }
            count += 1;
        }
    }

    /// Cycle on the path's vertices: direct closure or one crossing arc.
    fn close(&self, path: &[usize]) -> Option<Vec<usize>> {
        let k = path.len() - 1;
        if self.arc(path[k], path[0]) {
            return Some(path.to_vec());
        }
        // u_k → u_l, u_j → u_0, u_{l−1} → u_{j+1} with 1 ≤ l ≤ j ≤ k−1
        for l in 1..k {
            if !self.arc(path[k], path[l]) {
                continue;
            }
            for j in l..k {
                if self.arc(path[j], path[0]) && self.arc(path[l - 1], path[j + 1]) {
                    let mut c = path[j + 1..=k].to_vec();
                    c.extend_from_slice(&path[l..=j]);
                    c.extend_from_slice(&path[..l]);
                    return Some(c);
                }
            }
        }
        None
    }

    /// End rotations: `u_k → u_l` and `u_{l−1} → u_m` (l < m ≤ k) give the path
    /// `u_0…u_{l−1} u_m…u_k u_l…u_{m−1}` on the same vertices.
    fn rotations<'p>(&'p self, path: &'p [usize]) -> impl Iterator<Item = Vec<usize>> + 'p {
        let k = path.len() - 1;
        (1..k).filter(move |&l| self.arc(path[k], path[l])).flat_map(move |l| {
            (l + 1..=k).filter(move |&m| self.arc(path[l - 1], path[m])).map(move |m| {
                let mut p = path[..l].to_vec();
                p.extend_from_slice(&path[m..=k]);
                p.extend_from_slice(&path[l..m]);
                p
            })
        })
    }
}

fn reversed(p: &[usize]) -> Vec<usize> {
    p.iter().rev().copied().collect()
}

/// Builds a Hamilton cycle from a 1-factor by repeatedly extending a path
/// through whole factor cycles, closing it by one crossing arc (or a rotation
/// followed by one), and absorbing the remaining cycles. Every choice takes
/// the smallest admissible index. Failure is reported as a value.
pub fn rotation_extension_hamilton(d: &Digraph) -> Result<RotationReport> {
    let n = d.n();
    let mut trace = RotationTrace::default();
    let failed = |step, path_len, detail: &str, trace: RotationTrace| {
        Ok(RotationReport { outcome: RotationOutcome::Failed { step, path_len, detail: detail.to_string() }, trace })
    };
    if n < 2 {
        return failed(RotationStep::OneFactor, 0, "fewer than two vertices", trace);
    }
    let cover = match one_factor(d)? {
        OneFactorOutcome::Factor(c) => c,
        OneFactorOutcome::NoFactor { violator, .. } => {
            return failed(RotationStep::OneFactor, 0, &format!("Hall violator of size {}", violator.len()), trace);
        }
    };
    trace.initial_cycles = cover.cycles.len();
    let fwd: Vec<Vec<bool>> = (0..n).map(|u| (0..n).map(|v| d.has_arc(u, v)).collect()).collect();
    let bwd: Vec<Vec<bool>> = (0..n).map(|u| (0..n).map(|v| d.has_arc(v, u)).collect()).collect();
    let succ = cover.successors(n);
    let pred = cover.predecessors(n);
    let first = &cover.cycles[0];
    // break the first cycle after its last vertex
    let mut path = first.clone();
    let mut on_path = vec![false; n];
    for &v in &path {
        on_path[v] = true;
    }
    let budget = 4 * n * n + 16;
    for _ in 0..budget {
        // extend at both ends until neither has a neighbour off the path
        loop {
            let mut s = RotState { out: &fwd, on_path: std::mem::take(&mut on_path), next: &succ };
            let a = s.extend_end(&mut path);
            let mut rev = reversed(&path);
            let mut r = RotState { out: &bwd, on_path: s.on_path, next: &pred };
            let b = r.extend_end(&mut rev);
            path = reversed(&rev);
            on_path = r.on_path;
            trace.extensions += a + b;
            if a + b == 0 {
                break;
            }
        }
        let s = RotState { out: &fwd, on_path: on_path.clone(), next: &succ };
        let r = RotState { out: &bwd, on_path: on_path.clone(), next: &pred };
        let mut cycle = s.close(&path).inspect(|c| {
            if c.as_slice() != path.as_slice() {
                trace.case1 += 1;
            }
        });
        if cycle.is_none() {
            let rev = reversed(&path);
            cycle = r.close(&rev).map(|c| reversed(&c)).inspect(|_| trace.case1 += 1);
        }
        if cycle.is_none() {
            // one rotation at either end, then a direct or single-arc closure
            let end_side = s.rotations(&path).find_map(|p| s.close(&p));
            let rev = reversed(&path);
            cycle = end_side.or_else(|| r.rotations(&rev).find_map(|p| r.close(&p).map(|c| reversed(&c))));
            if cycle.is_some() {
                trace.case2 += 1;
            }
        }
        let Some(cycle) = cycle else {
            // a rotation that exposes an outside neighbour lets extension resume
            let off = |v: usize, rows: &[Vec<bool>]| (0..n).any(|w| !on_path[w] && rows[v][w]);
            let rotated = s.rotations(&path).find(|p| off(*p.last().expect("nonempty"), &fwd));
            if let Some(p) = rotated {
                path = p;
                trace.rotations += 1;
                continue;
            }
            let rev = reversed(&path);
            if let Some(p) = r.rotations(&rev).find(|p| off(*p.last().expect("nonempty"), &bwd)) {
                path = reversed(&p);
                trace.rotations += 1;
                continue;
            }
            return failed(RotationStep::Close, path.len(), "no crossing arc or rotation closes the path", trace);
        };
        if cycle.len() == n {
            let ham = HamCycle { order: cycle };
            if !ham.is_valid_digraph(d) {
                return failed(RotationStep::Audit, n, "constructed cycle failed the audit", trace);
            }
            return Ok(RotationReport { outcome: RotationOutcome::Cycle(ham), trace });
        }
        // absorb: leave the cycle through an arc to an outside factor cycle
        let k = cycle.len();
        let exit = (0..k).find_map(|i| (0..n).find(|&w| !on_path[w] && fwd[cycle[i]][w]).map(|w| (i, w)));
        if let Some((i, w)) = exit {
            let mut p: Vec<usize> = (1..=k).map(|t| cycle[(i + t) % k]).collect();
            let mut v = w;
            loop {
                p.push(v);
                on_path[v] = true;
                v = succ[v];
                if v == w {
                    break;
                }
            }
            path = p;
            trace.absorptions += 1;
            continue;
        }
        let entry = (0..k).find_map(|i| (0..n).find(|&w| !on_path[w] && fwd[w][cycle[i]]).map(|w| (i, w)));
        if let Some((i, w)) = entry {
            let mut p = Vec::new();
            let mut v = succ[w];
            loop {
                p.push(v);
                on_path[v] = true;
                if v == w {
                    break;
                }
                v = succ[v];
            }
            p.extend((0..k).map(|t| cycle[(i + t) % k]));
            path = p;
            trace.absorptions += 1;
            continue;
        }
        return failed(RotationStep::Absorb, cycle.len(), "no arc between the cycle and the rest", trace);
    }
    failed(RotationStep::Close, path.len(), "iteration budget exhausted", trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{chvatal_extremal, complete_bipartite, cycle_graph, petersen_graph, random_digraph, random_graph};
    use crate::enumerate::all_graphs;
    use crate::rational::rat;

    fn brute_force_hamiltonian(g: &Graph) -> bool {
        // permutations of 1..n with vertex 0 fixed
        let n = g.n();
        if n < 3 {
            return false;
        }
        let mut rest: Vec<usize> = (1..n).collect();
        fn permute(k: usize, rest: &mut Vec<usize>, g: &Graph) -> bool {
            if k == rest.len() {
                let mut order = vec![0];
                order.extend_from_slice(rest);
                return (0..order.len()).all(|i| g.has_edge(order[i], order[(i + 1) % order.len()]));
            }
            for i in k..rest.len() {
                rest.swap(k, i);
                if permute(k + 1, rest, g) {
                    return true;
                }
                rest.swap(k, i);
            }
            false
        }
        permute(0, &mut rest, g)
    }

    #[test]
    fn bottleneck_constructions() {
        let h = crate::constructions::haggkvist_graph(3).unwrap();
        assert_eq!(h.min_semidegree(), 5);
        assert!(hamilton_oracle_digraph(&h).unwrap().is_none());
        let a = crate::constructions::antidirected_counterexample(1).unwrap();
        assert_eq!(a.min_semidegree(), 4);
        assert_eq!(oriented_hamilton_oracle(&a, &OrientedPattern::alternating(12)).unwrap(), OrientedOutcome::NotFound);
    }

    #[test]
    fn certificates() {
        let k4 = Graph::complete(4);
        assert!(certify(AnyGraph::Graph(&k4), &CertificateKind::Chvatal).unwrap().satisfied);
        let c = certify(AnyGraph::Graph(&chvatal_extremal(8, 3).unwrap()), &CertificateKind::Chvatal).unwrap();
        assert_eq!((c.satisfied, c.failing_index), (false, Some(3)));
        let c5 = cycle_graph(5).unwrap();
        assert!(!certify(AnyGraph::Graph(&c5), &CertificateKind::Dirac).unwrap().satisfied);
        assert!(certify(AnyGraph::Graph(&c5), &CertificateKind::GhouilaHouri).is_err());
        let cn = Digraph::directed_cycle(6);
        let r = certify(AnyGraph::Digraph(&cn), &CertificateKind::RobDegSeq(rat(2, 6))).unwrap();
        assert_eq!((r.satisfied, r.failing_index), (false, Some(1)));
        let kd = Digraph::complete(6);
        assert!(certify(AnyGraph::Digraph(&kd), &CertificateKind::RobDegSeq(rat(1, 6))).unwrap().satisfied);
        assert!(certify(AnyGraph::Digraph(&kd), &CertificateKind::NashWilliams).unwrap().satisfied);
        assert!(certify(AnyGraph::Digraph(&kd), &CertificateKind::GhouilaHouri).unwrap().satisfied);
        assert!(certify(AnyGraph::Graph(&Graph::complete(5)), &CertificateKind::Posa).unwrap().satisfied);
        // K_{2,3} fails Pósa at the middle index
        let p = certify(AnyGraph::Graph(&complete_bipartite(2, 3)), &CertificateKind::Posa).unwrap();
        assert!(!p.satisfied);
    }

    #[test]
    fn oracle_examples() {
        let c = hamilton_oracle(&Graph::complete(4)).unwrap().unwrap();
        assert!(c.is_valid_graph(&Graph::complete(4)));
        assert!(hamilton_oracle(&chvatal_extremal(8, 3).unwrap()).unwrap().is_none());
        assert!(hamilton_oracle(&petersen_graph()).unwrap().is_none());
        assert!(hamilton_oracle(&Graph::complete(21)).is_err());
        let d = Digraph::directed_cycle(7);
        assert_eq!(hamilton_oracle_digraph(&d).unwrap().unwrap().order, (0..7).collect::<Vec<_>>());
        assert!(hamilton_oracle_digraph(&Digraph::from_arcs(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()).unwrap().is_none());
    }

    #[test]
    fn oracle_agrees_with_permutations() {
        for n in 3..=6 {
            for g in all_graphs(n).unwrap() {
                assert_eq!(hamilton_oracle(&g).unwrap().is_some(), brute_force_hamiltonian(&g), "{g:?}");
            }
        }
        for seed in 0..20 {
            let g = random_graph(8, 0.45, seed).unwrap();
            assert_eq!(hamilton_oracle(&g).unwrap().is_some(), brute_force_hamiltonian(&g));
        }
    }

    #[test]
    fn digraph_oracle_matches_permutations() {
        for seed in 0..40 {
            let d = random_digraph(7, 0.35, seed).unwrap();
            let mut rest: Vec<usize> = (1..7).collect();
            let mut any = false;
            permutations(&mut rest, 0, &mut |p| {
                let mut o = vec![0];
                o.extend_from_slice(p);
                any |= HamCycle { order: o }.is_valid_digraph(&d);
            });
            assert_eq!(hamilton_oracle_digraph(&d).unwrap().is_some(), any, "seed {seed}");
        }
    }

    fn permutations(v: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
        if k == v.len() {
            f(v);
            return;
        }
        for i in k..v.len() {
            v.swap(k, i);
            permutations(v, k + 1, f);
            v.swap(k, i);
        }
    }

    #[test]
    fn sharpness_construction() {
        for n in 3..=10 {
            for r in (1..n).take_while(|&r| 2 * r < n) {
                let g = chvatal_extremal(n, r).unwrap();
                let d = g.degree_sequence();
                assert_eq!((d[r - 1], d[n - r - 1]), (r, n - r - 1));
                assert!(hamilton_oracle(&g).unwrap().is_none());
            }
        }
    }

    #[test]
    fn oriented_patterns() {
        let d = Digraph::directed_cycle(6);
        let c = oriented_hamilton_oracle(&d, &OrientedPattern::directed(6)).unwrap();
        assert!(c.cycle().unwrap().realizes(&d, &OrientedPattern::directed(6)));
        let k4 = Digraph::complete(4);
        let alt = OrientedPattern::alternating(4);
        assert!(oriented_hamilton_oracle(&k4, &alt).unwrap().cycle().unwrap().realizes(&k4, &alt));
        assert!(matches!(oriented_hamilton_oracle(&Digraph::complete(5), &OrientedPattern::alternating(5)).unwrap(), OrientedOutcome::Impossible(_)));
        // a directed cycle contains no other orientation
        assert_eq!(oriented_hamilton_oracle(&d, &OrientedPattern::parse("fffffb").unwrap()).unwrap(), OrientedOutcome::NotFound);
        let p = OrientedPattern::parse("ffbfbb").unwrap();
        let t = crate::constructions::random_tournament(6, 2);
        if let OrientedOutcome::Found(c) = oriented_hamilton_oracle(&t, &p).unwrap() {
            assert!(c.realizes(&t, &p));
        }
    }

    #[test]
    fn neutral_pair_counts() {
        assert_eq!(neutral_pairs_cycle(&OrientedPattern::directed(5)), 0);
        assert_eq!(neutral_pairs_cycle(&OrientedPattern::alternating(4)), 2);
        assert_eq!(neutral_pairs_cycle(&OrientedPattern::parse("fffb").unwrap()), 1);
        let alt = Digraph::from_arcs(4, &[(0, 1), (2, 1), (2, 3), (0, 3)]).unwrap();
        assert_eq!(neutral_pairs(&alt), NeutralPairs { count: 2, two_cycles: false });
        assert!(neutral_pairs(&Digraph::complete(3)).two_cycles);
        for w in ["ffbfbbfb", "fbbbff", "ffff"] {
            let p = OrientedPattern::parse(w).unwrap();
            assert_eq!(p.sinks(), p.sources());
        }
    }

    #[test]
    fn oriented_paths() {
        let d = Digraph::from_arcs(4, &[(0, 1), (0, 2), (3, 2)]).unwrap();
        assert_eq!(find_oriented_path(&d, 0, 1, &OrientedPattern::parse("f").unwrap()).unwrap(), Some(vec![0, 1]));
        assert_eq!(find_oriented_path(&d, 0, 3, &OrientedPattern::parse("fb").unwrap()).unwrap(), Some(vec![0, 2, 3]));
        assert_eq!(find_oriented_path(&d, 0, 3, &OrientedPattern::parse("ff").unwrap()).unwrap(), None);
        assert!(find_oriented_path(&d, 1, 1, &OrientedPattern::parse("f").unwrap()).is_err());
    }

    #[test]
    fn matchings() {
        let full: Vec<Vec<usize>> = vec![vec![0, 1, 2]; 3];
        assert!(bipartite_matching(&full, 3).unwrap().is_saturating());
        let star = vec![vec![0], vec![0], vec![0, 1, 2]];
        match bipartite_matching(&star, 3).unwrap() {
            MatchingOutcome::HallViolator { set, neighbourhood, .. } => {
                assert_eq!(set, vec![0, 1]);
                assert_eq!(neighbourhood, vec![0]);
            }
            other => panic!("expected a violator, got {other:?}"),
        }
        let c6 = cycle_graph(6).unwrap();
        assert!(bipartite_matching_graph(&c6, &[0, 2, 4], &[1, 3, 5]).unwrap().is_saturating());
    }

    #[test]
    fn one_factors() {
        let c = Digraph::directed_cycle(5);
        let f = one_factor(&c).unwrap();
        assert_eq!(f.factor().unwrap().cycles, vec![vec![0, 1, 2, 3, 4]]);
        let sink = Digraph::from_arcs(3, &[(0, 1), (1, 0), (0, 2)]).unwrap();
        assert!(one_factor(&sink).unwrap().factor().is_none());
        let k3 = Digraph::complete(3);
        assert!(one_factor(&k3).unwrap().factor().unwrap().is_valid(&k3));
    }

    #[test]
    fn rotation_extension() {
        let k = Digraph::complete(6);
        assert!(rotation_extension_hamilton(&k).unwrap().cycle().unwrap().is_valid_digraph(&k));
        let c = Digraph::directed_cycle(8);
        assert_eq!(rotation_extension_hamilton(&c).unwrap().cycle().unwrap().order, (0..8).collect::<Vec<_>>());
        let d = random_digraph(40, 0.5, 3).unwrap();
        let rep = rotation_extension_hamilton(&d).unwrap();
        assert!(rep.cycle().expect("dense random digraph").is_valid_digraph(&d));
        let two = Digraph::directed_cycle(3).induced(&[0, 1, 2]);
        let mut split = Digraph::new(6);
        for (u, v) in two.arcs() {
            split.add_arc(u, v);
            split.add_arc(u + 3, v + 3);
        }
        assert!(matches!(rotation_extension_hamilton(&split).unwrap().outcome, RotationOutcome::Failed { step: RotationStep::Absorb, .. }));
    }
}
