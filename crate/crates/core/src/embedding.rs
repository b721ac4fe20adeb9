//! Greedy embedding along a regularity graph, blow-ups, and the exact
//! oracles for subgraph containment, extremal numbers, Ramsey numbers and
//! perfect packings.

use crate::enumerate::{graphs_up_to_iso, is_isomorphic, MAX_ENUMERATION_ORDER};
use crate::error::{check_cap, domain, hypothesis, LabError, Result};
use crate::graph::{AnyGraph, Digraph, Graph, VertexSet};
use crate::rational::{big_pow, format_rational, ge_scaled, to_big, Rational};
use crate::szemeredi::ReducedGraph;
use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rayon::prelude::*;
use std::collections::HashMap;

/// Largest pattern the subgraph oracle accepts.
pub const MAX_PATTERN_ORDER: usize = 10;
/// Default order limit for [`extremal_number`].
pub const DEFAULT_EXTREMAL_ORDER: usize = 8;
/// Default search limit for [`ramsey_oracle`].
pub const DEFAULT_RAMSEY_ORDER: usize = 7;
/// Largest host for [`packing_oracle`].
pub const MAX_PACKING_ORDER: usize = 18;
pub const MAX_CHROMATIC_ORDER: usize = 24;

/// `R^s`: vertex `i` of `R` becomes `i·s..(i+1)·s`, edges become complete bipartite graphs.
pub fn blow_up(r: &Graph, s: usize) -> Result<Graph> {
    if s == 0 {
        return domain("blow-up factor must be at least 1");
    }
    let mut g = Graph::new(r.n() * s);
    for (u, v) in r.edges() {
        for a in 0..s {
            for b in 0..s {
                g.add_edge(u * s + a, v * s + b);
            }
        }
    }
    Ok(g)
}

/// An injective map from pattern vertices to host vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub map: Vec<usize>,
    /// `candidate_trace[j][i]`: candidates left for pattern vertex `i` after step `j`.
    pub candidate_trace: Option<Vec<Vec<usize>>>,
}

impl Embedding {
    fn plain(map: Vec<usize>) -> Self {
        Embedding { map, candidate_trace: None }
    }

    fn injective(&self, n: usize) -> bool {
        let mut seen = vec![false; n];
        self.map.iter().all(|&v| v < n && !std::mem::replace(&mut seen[v], true))
    }

    /// Injective and edge-preserving.
    pub fn is_valid(&self, h: &Graph, g: &Graph) -> bool {
        self.map.len() == h.n() && self.injective(g.n()) && h.edges().all(|(u, v)| g.has_edge(self.map[u], self.map[v]))
    }

    pub fn is_valid_digraph(&self, h: &Digraph, g: &Digraph) -> bool {
        self.map.len() == h.n() && self.injective(g.n()) && h.arcs().all(|(u, v)| g.has_arc(self.map[u], self.map[v]))
    }
}

/// Where the greedy embedding ran out of admissible vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailurePoint {
    /// Index of the pattern vertex that could not be placed.
    pub step: usize,
    /// Unused candidates it had.
    pub candidates: usize,
    /// Candidate-set sizes of all pattern vertices at that moment.
    pub sizes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GreedyOutcome {
    Embedded(Embedding),
    Stuck(FailurePoint),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyReport {
    pub outcome: GreedyOutcome,
    /// `Δ` used in the hypotheses (at least 1).
    pub delta: usize,
    /// Whether every candidate set of a not-yet-placed vertex stayed at
    /// least `s + Δεm` up to the end of the run.
    pub size_bound_held: bool,
}

impl GreedyReport {
    pub fn embedding(&self) -> Option<&Embedding> {
        match &self.outcome {
            GreedyOutcome::Embedded(e) => Some(e),
            GreedyOutcome::Stuck(_) => None,
        }
    }
}

/// `(d − ε)^Δ − Δε ≥ d^Δ/2`, i.e. `ε` is admissible as `ε₀` (the left side
/// decreases in `ε`, so any `ε` at most a valid `ε₀` passes too).
pub fn epsilon0_condition(epsilon: Rational, d: Rational, delta: usize) -> bool {
    if epsilon >= d {
        return false;
    }
    let (e, dd) = (to_big(&epsilon), to_big(&d));
    let k = delta as u32;
    let lhs = big_pow(&(&dd - &e), k) - BigRational::from_integer(BigInt::from(delta)) * &e;
    lhs * BigRational::from_integer(BigInt::from(2)) >= big_pow(&dd, k)
}

/// Embeds `h` into `g` one vertex at a time in index order, with `u_i`
/// placed in cluster `sigma[i]` of the regularity graph `r`. Each step picks
/// the least unused candidate `v` such that every later neighbour `u_i` keeps
/// at least `(d − ε)|Y(u_i)|` candidates after intersecting with `N(v)`.
pub fn greedy_embed(h: &Graph, g: &Graph, r: &ReducedGraph, sigma: &[usize], s: usize) -> Result<GreedyReport> {
    let (eps, d) = (r.epsilon, r.d);
    let k = r.clusters.len();
    if g.n() != r.pure.n() || r.clusters.iter().any(|c| c.universe() != g.n()) {
        return domain("the regularity graph does not belong to this host graph");
    }
    if sigma.len() != h.n() {
        return domain("σ must assign a cluster to every vertex of H");
    }
    if s == 0 {
        return domain("s must be at least 1");
    }
    if !d.is_positive() {
        return domain("d must be positive");
    }
    if k == 0 {
        return hypothesis("the regularity graph has no clusters");
    }
    let m = r.clusters[0].len();
    if r.clusters.iter().any(|c| c.len() != m) {
        return hypothesis("clusters must have equal sizes");
    }
    let delta = h.max_degree().max(1);
    // m ≥ 2s/d^Δ
    if BigRational::from_integer(BigInt::from(m)) * big_pow(&to_big(&d), delta as u32) < BigRational::from_integer(BigInt::from(2 * s)) {
        return hypothesis(format!("cluster size {m} is below 2s/d^Δ with s = {s}, d = {}, Δ = {delta}", format_rational(&d)));
    }
    if !epsilon0_condition(eps, d, delta) {
        return hypothesis(format!("ε = {} violates (d − ε)^Δ − Δε ≥ d^Δ/2", format_rational(&eps)));
    }
    let mut load = vec![0usize; k];
    for (u, &c) in sigma.iter().enumerate() {
        if c >= k {
            return domain(format!("σ({u}) = {c} is not a cluster"));
        }
        load[c] += 1;
        if load[c] > s {
            return hypothesis(format!("more than s = {s} vertices of H are sent to cluster {c}"));
        }
    }
    for (u, v) in h.edges() {
        if !r.r.has_edge(sigma[u], sigma[v]) {
            return hypothesis(format!("edge {u}{v} of H is not mapped to an edge of R"));
        }
    }

    let hn = h.n();
    let bound = eps * delta as i64;
    // |Y| ≥ s + Δεm, compared exactly
    let size_ok = |y: usize| Rational::from_integer(y as i64 - s as i64) >= bound * m as i64;
    let mut y: Vec<VertexSet> = sigma.iter().map(|&c| r.clusters[c].clone()).collect();
    let mut used = FixedBitSet::with_capacity(g.n());
    let mut map = Vec::with_capacity(hn);
    let mut trace = Vec::with_capacity(hn);
    let mut size_bound_held = true;
    let keep = d - eps;
    for j in 0..hn {
        let later: Vec<usize> = h.neighbours(j).ones().filter(|&i| i > j).collect();
        let mut chosen = None;
        for v in y[j].iter().filter(|&v| !used.contains(v)) {
            let ok = later.iter().all(|&i| {
                let kept = y[i].intersection_count(g.neighbours(v));
                keep.is_negative() || ge_scaled(kept, &keep, y[i].len())
            });
            if ok {
                chosen = Some(v);
                break;
            }
        }
        let Some(v) = chosen else {
            let candidates = y[j].iter().filter(|&v| !used.contains(v)).count();
            return Ok(GreedyReport {
                outcome: GreedyOutcome::Stuck(FailurePoint { step: j, candidates, sizes: y.iter().map(VertexSet::len).collect() }),
                delta,
                size_bound_held,
            });
        };
        used.insert(v);
        map.push(v);
        for &i in &later {
            y[i] = y[i].intersection(&VertexSet::from_bitset(g.neighbours(v).clone()));
        }
        y[j] = VertexSet::from_vertices(g.n(), [v])?;
        size_bound_held &= (j + 1..hn).all(|i| size_ok(y[i].len()));
        trace.push(y.iter().map(VertexSet::len).collect());
    }
    Ok(GreedyReport { outcome: GreedyOutcome::Embedded(Embedding { map, candidate_trace: Some(trace) }), delta, size_bound_held })
}

/// Pattern and host in adjacency-list / bitset form; graphs use the same rows twice.
struct Matcher<'a> {
    hn: usize,
    /// For the pattern vertex at each search position: earlier positions it must send arcs to / receive arcs from.
    order: Vec<usize>,
    need_out_rows: Vec<Vec<usize>>,
    need_in_rows: Vec<Vec<usize>>,
    allowed: Vec<FixedBitSet>,
    out: Vec<&'a FixedBitSet>,
    inn: Vec<&'a FixedBitSet>,
    gn: usize,
}

impl<'a> Matcher<'a> {
    fn new(h_out: &[Vec<usize>], h_in: &[Vec<usize>], out: Vec<&'a FixedBitSet>, inn: Vec<&'a FixedBitSet>) -> Self {
        let hn = h_out.len();
        let gn = out.len();
        let deg = |u: usize| h_out[u].len() + h_in[u].len();
        let mut order: Vec<usize> = Vec::with_capacity(hn);
        let mut placed = vec![false; hn];
        for _ in 0..hn {
            let next = (0..hn)
                .filter(|&u| !placed[u])
                .max_by_key(|&u| {
                    let links = h_out[u].iter().chain(&h_in[u]).filter(|&&w| placed[w]).count();
                    (links, deg(u), std::cmp::Reverse(u))
                })
                .expect("unplaced vertex remains");
            placed[next] = true;
            order.push(next);
        }
        let pos: Vec<usize> = {
            let mut p = vec![0; hn];
            for (i, &u) in order.iter().enumerate() {
                p[u] = i;
            }
            p
        };
        // the image of u must lie in out-rows of images of in-neighbours placed earlier, and in in-rows of out-neighbours
        let need_out_rows = order.iter().map(|&u| h_in[u].iter().filter(|&&w| pos[w] < pos[u]).map(|&w| pos[w]).collect()).collect();
        let need_in_rows = order.iter().map(|&u| h_out[u].iter().filter(|&&w| pos[w] < pos[u]).map(|&w| pos[w]).collect()).collect();
        let allowed = order
            .iter()
            .map(|&u| {
                let mut b = FixedBitSet::with_capacity(gn);
                for v in 0..gn {
                    if out[v].count_ones(..) >= h_out[u].len() && inn[v].count_ones(..) >= h_in[u].len() {
                        b.insert(v);
                    }
                }
                b
            })
            .collect();
        Matcher { hn, order, need_out_rows, need_in_rows, allowed, out, inn, gn }
    }

    fn candidates(&self, p: usize, images: &[usize], used: &FixedBitSet) -> FixedBitSet {
        let mut c = self.allowed[p].clone();
        for &q in &self.need_out_rows[p] {
            c.intersect_with(self.out[images[q]]);
        }
        for &q in &self.need_in_rows[p] {
            c.intersect_with(self.inn[images[q]]);
        }
        c.difference_with(used);
        c
    }

    fn extend(&self, images: &mut Vec<usize>, used: &mut FixedBitSet) -> bool {
        let p = images.len();
        if p == self.hn {
            return true;
        }
        for v in self.candidates(p, images, used).ones() {
            images.push(v);
            used.insert(v);
            if self.extend(images, used) {
                return true;
            }
            used.set(v, false);
            images.pop();
        }
        false
    }

    fn solve(&self) -> Option<Vec<usize>> {
        if self.hn > self.gn {
            return None;
        }
        if self.hn == 0 {
            return Some(Vec::new());
        }
        let first: Vec<usize> = self.allowed[0].ones().collect();
        let images = first.par_iter().find_map_first(|&v| {
            let mut images = vec![v];
            let mut used = FixedBitSet::with_capacity(self.gn);
            used.insert(v);
            self.extend(&mut images, &mut used).then_some(images)
        })?;
        let mut map = vec![0; self.hn];
        for (p, &u) in self.order.iter().enumerate() {
            map[u] = images[p];
        }
        Some(map)
    }
}

fn lists_of_graph(h: &Graph) -> Vec<Vec<usize>> {
    (0..h.n()).map(|u| h.neighbours(u).ones().collect()).collect()
}

/// Exact backtracking search for a copy of `h` in `g` (not necessarily induced).
pub fn subgraph_oracle(h: &Graph, g: &Graph) -> Result<Option<Embedding>> {
    check_cap("pattern order", h.n(), MAX_PATTERN_ORDER)?;
    Ok(contains_graph(h, g).map(Embedding::plain))
}

fn contains_graph(h: &Graph, g: &Graph) -> Option<Vec<usize>> {
    if h.n() > g.n() || h.edge_count() > g.edge_count() {
        return None;
    }
    let lists = lists_of_graph(h);
    // each undirected edge is recorded once, from the later to the earlier endpoint
    let empty = vec![Vec::new(); h.n()];
    let rows: Vec<&FixedBitSet> = (0..g.n()).map(|v| g.neighbours(v)).collect();
    let m = Matcher::new(&lists, &empty, rows.clone(), rows);
    // degree filter with the full degree
    let mut m = m;
    for (p, &u) in m.order.clone().iter().enumerate() {
        let need = lists[u].len();
        let mut b = FixedBitSet::with_capacity(g.n());
        for v in 0..g.n() {
            if g.degree(v) >= need {
                b.insert(v);
            }
        }
        m.allowed[p] = b;
    }
    m.solve()
}

pub fn subgraph_oracle_digraph(h: &Digraph, g: &Digraph) -> Result<Option<Embedding>> {
    check_cap("pattern order", h.n(), MAX_PATTERN_ORDER)?;
    if h.n() > g.n() || h.arc_count() > g.arc_count() {
        return Ok(None);
    }
    let out: Vec<Vec<usize>> = (0..h.n()).map(|u| h.out_neighbours(u).ones().collect()).collect();
    let inn: Vec<Vec<usize>> = (0..h.n()).map(|u| h.in_neighbours(u).ones().collect()).collect();
    let rows_out: Vec<&FixedBitSet> = (0..g.n()).map(|v| g.out_neighbours(v)).collect();
    let rows_in: Vec<&FixedBitSet> = (0..g.n()).map(|v| g.in_neighbours(v)).collect();
    Ok(Matcher::new(&out, &inn, rows_out, rows_in).solve().map(Embedding::plain))
}

pub fn subgraph_oracle_any(h: AnyGraph, g: AnyGraph) -> Result<Option<Embedding>> {
    match (h, g) {
        (AnyGraph::Graph(h), AnyGraph::Graph(g)) => subgraph_oracle(h, g),
        (AnyGraph::Digraph(h), AnyGraph::Digraph(g)) => subgraph_oracle_digraph(h, g),
        (h, g) => Err(LabError::KindMismatch { expected: h.kind(), found: g.kind() }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalResult {
    pub n: usize,
    /// `ex(n, H)`.
    pub value: usize,
    /// Every extremal graph up to isomorphism, canonically labelled.
    pub extremal: Vec<Graph>,
}

impl ExtremalResult {
    pub fn witness(&self) -> &Graph {
        &self.extremal[0]
    }
}

/// `ex(n, H)` by isomorph-free generation of `H`-free graphs.
pub fn extremal_number(n: usize, h: &Graph) -> Result<ExtremalResult> {
    extremal_number_capped(n, h, DEFAULT_EXTREMAL_ORDER)
}

pub fn extremal_number_capped(n: usize, h: &Graph, cap: usize) -> Result<ExtremalResult> {
    check_cap("order", n, cap.min(MAX_ENUMERATION_ORDER))?;
    check_cap("pattern order", h.n(), MAX_PATTERN_ORDER)?;
    let free = graphs_up_to_iso(n, &|g: &Graph| contains_graph(h, g).is_none())?;
    let value = free.iter().map(Graph::edge_count).max().expect("the empty graph is H-free unless H has no edges");
    let extremal = free.into_iter().filter(|g| g.edge_count() == value).collect();
    Ok(ExtremalResult { n, value, extremal })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamseyReport {
    /// `R(H)` when it is at most the search limit.
    pub number: Option<usize>,
    /// Largest order searched at which some colouring avoids a monochromatic `H`.
    pub largest_avoiding: Option<usize>,
    /// Red edges of such a colouring of `K_{largest_avoiding}`.
    pub certificate: Option<Graph>,
    pub searched_up_to: usize,
}

/// Smallest `n ≤ n_max` such that every red/blue colouring of `K_n` has a
/// monochromatic `H`. Colourings are enumerated as red graphs up to isomorphism.
pub fn ramsey_oracle(h: &Graph, n_max: usize) -> Result<RamseyReport> {
    check_cap("Ramsey search order", n_max, MAX_ENUMERATION_ORDER)?;
    check_cap("pattern order", h.n(), MAX_PATTERN_ORDER)?;
    let mut largest_avoiding = None;
    let mut certificate = None;
    for n in 1..=n_max {
        let good = graphs_up_to_iso(n, &|g: &Graph| contains_graph(h, g).is_none() && contains_graph(h, &g.complement()).is_none())?;
        match good.into_iter().next() {
            Some(g) => {
                largest_avoiding = Some(n);
                certificate = Some(g);
            }
            None => return Ok(RamseyReport { number: Some(n), largest_avoiding, certificate, searched_up_to: n }),
        }
    }
    Ok(RamseyReport { number: None, largest_avoiding, certificate, searched_up_to: n_max })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackingResult {
    pub copies: Vec<Embedding>,
    pub perfect: bool,
}

/// Vertex masks of `|F|`-subsets spanning a copy of `F`, grouped by least vertex.
fn copy_sets(g: &Graph, f: &Graph) -> Vec<Vec<u64>> {
    let n = g.n();
    let k = f.n();
    let mut by_low = vec![Vec::new(); n];
    let mut subset: Vec<usize> = (0..k).collect();
    if k == 0 || k > n {
        return by_low;
    }
    loop {
        let sub = g.induced(&subset);
        if sub.edge_count() >= f.edge_count() && contains_graph(f, &sub).is_some() {
            let mask = subset.iter().fold(0u64, |m, &v| m | 1 << v);
            by_low[subset[0]].push(mask);
        }
        // next k-subset in lexicographic order
        let mut i = k;
        while i > 0 && subset[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        subset[i - 1] += 1;
        for j in i..k {
            subset[j] = subset[j - 1] + 1;
        }
    }
    by_low
}

fn best_packing(mask: u64, sets: &[Vec<u64>], memo: &mut HashMap<u64, usize>) -> usize {
    if mask == 0 {
        return 0;
    }
    if let Some(&b) = memo.get(&mask) {
        return b;
    }
    let low = mask.trailing_zeros() as usize;
    let mut best = best_packing(mask & !(1 << low), sets, memo);
    for &s in &sets[low] {
        if s & mask == s {
            best = best.max(1 + best_packing(mask & !s, sets, memo));
        }
    }
    memo.insert(mask, best);
    best
}

fn perfect_packing(mask: u64, sets: &[Vec<u64>], dead: &mut std::collections::HashSet<u64>, out: &mut Vec<u64>) -> bool {
    if mask == 0 {
        return true;
    }
    if dead.contains(&mask) {
        return false;
    }
    let low = mask.trailing_zeros() as usize;
    for &s in &sets[low] {
        if s & mask == s {
            out.push(s);
            if perfect_packing(mask & !s, sets, dead, out) {
                return true;
            }
            out.pop();
        }
    }
    dead.insert(mask);
    false
}

fn embed_on_mask(g: &Graph, f: &Graph, mask: u64) -> Embedding {
    let verts: Vec<usize> = (0..g.n()).filter(|&v| mask >> v & 1 == 1).collect();
    let local = contains_graph(f, &g.induced(&verts)).expect("mask was recorded as spanning a copy");
    Embedding::plain(local.into_iter().map(|i| verts[i]).collect())
}

/// Vertex-disjoint copies of `f` in `g`. In perfect mode the search stops at
/// the first perfect packing (or proves none exists); otherwise it returns a
/// maximum packing.
pub fn packing_oracle(g: &Graph, f: &Graph, perfect: bool) -> Result<PackingResult> {
    check_cap("host order for packing", g.n(), MAX_PACKING_ORDER)?;
    check_cap("pattern order", f.n(), MAX_PATTERN_ORDER)?;
    if f.n() == 0 {
        return domain("the packed graph needs at least one vertex");
    }
    if perfect && g.n() % f.n() != 0 {
        return domain(format!("|F| = {} does not divide |G| = {}", f.n(), g.n()));
    }
    let sets = copy_sets(g, f);
    let full: u64 = if g.n() == 64 { u64::MAX } else { (1u64 << g.n()) - 1 };
    let chosen = if perfect {
        let mut out = Vec::new();
        let mut dead = std::collections::HashSet::new();
        if perfect_packing(full, &sets, &mut dead, &mut out) {
            out
        } else {
            Vec::new()
        }
    } else {
        let mut memo = HashMap::new();
        let mut out = Vec::new();
        let mut mask = full;
        let mut left = best_packing(mask, &sets, &mut memo);
        while left > 0 {
            let low = mask.trailing_zeros() as usize;
            let skip = best_packing(mask & !(1 << low), &sets, &mut memo);
            if skip == left {
                mask &= !(1 << low);
                continue;
            }
            let s = *sets[low]
                .iter()
                .find(|&&s| s & mask == s && 1 + best_packing(mask & !s, &sets, &mut memo) == left)
                .expect("memoised optimum is attained");
            out.push(s);
            mask &= !s;
            left -= 1;
        }
        out
    };
    let covered: u32 = chosen.iter().map(|s| s.count_ones()).sum();
    let copies = chosen.iter().map(|&s| embed_on_mask(g, f, s)).collect();
    Ok(PackingResult { copies, perfect: covered as usize == g.n() && g.n() > 0 })
}

fn colourable(g: &Graph, k: usize, colour: &mut Vec<Option<usize>>) -> bool {
    // most constrained uncoloured vertex first
    let n = g.n();
    let mut pick = None;
    let mut best = (0usize, 0usize);
    for v in 0..n {
        if colour[v].is_some() {
            continue;
        }
        let mut seen = 0u64;
        for u in g.neighbours(v).ones() {
            if let Some(c) = colour[u] {
                seen |= 1 << c;
            }
        }
        let key = (seen.count_ones() as usize, g.degree(v));
        if pick.is_none() || key > best {
            pick = Some((v, seen));
            best = key;
        }
    }
    let Some((v, seen)) = pick else { return true };
    let used = colour.iter().flatten().copied().max().map_or(0, |c| c + 1);
    for c in 0..k.min(used + 1) {
        if seen >> c & 1 == 0 {
            colour[v] = Some(c);
            if colourable(g, k, colour) {
                return true;
            }
        }
    }
    colour[v] = None;
    false
}

/// Exact chromatic number by backtracking.
pub fn chromatic_number(g: &Graph) -> Result<usize> {
    check_cap("order for chromatic number", g.n(), MAX_CHROMATIC_ORDER)?;
    if g.n() == 0 {
        return Ok(0);
    }
    let mut k = if g.edge_count() == 0 { 1 } else { 2 };
    loop {
        if colourable(g, k, &mut vec![None; g.n()]) {
            return Ok(k);
        }
        k += 1;
    }
}

/// The greedy bound `χ ≤ Δ + 1`.
pub fn greedy_colour_bound(g: &Graph) -> usize {
    if g.n() == 0 {
        0
    } else {
        g.max_degree() + 1
    }
}

/// `true` when the two graphs are isomorphic; for checking extremal witnesses.
pub fn same_graph(g: &Graph, h: &Graph) -> Result<bool> {
    is_isomorphic(g, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{c6_sharpness_graph, complete_bipartite, cycle_graph, named_graph, path_graph, petersen_graph, random_graph, turan_count, turan_graph};
    use crate::rational::rat;
    use crate::szemeredi::{regularity_graph, Partition};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn blow_ups() {
        let k2 = Graph::complete(2);
        let b = blow_up(&k2, 3).unwrap();
        assert!(is_isomorphic(&b, &complete_bipartite(3, 3)).unwrap());
        let c3 = cycle_graph(3).unwrap();
        assert_eq!(blow_up(&c3, 1).unwrap(), c3);
        assert_eq!(blow_up(&c3, 2).unwrap().edge_count(), 12);
        assert!(blow_up(&c3, 0).is_err());
    }

    #[test]
    fn subgraph_examples() {
        let k3 = Graph::complete(3);
        assert!(subgraph_oracle(&k3, &cycle_graph(5).unwrap()).unwrap().is_none());
        let c4 = cycle_graph(4).unwrap();
        let e = subgraph_oracle(&c4, &complete_bipartite(2, 2)).unwrap().unwrap();
        assert!(e.is_valid(&c4, &complete_bipartite(2, 2)));
        assert!(subgraph_oracle(&Graph::complete(11), &Graph::complete(12)).is_err());
        // the Petersen graph has girth 5 but contains C_9
        let p = petersen_graph();
        assert!(subgraph_oracle(&c4, &p).unwrap().is_none());
        assert!(subgraph_oracle(&cycle_graph(9).unwrap(), &p).unwrap().is_some());
    }

    #[test]
    fn subgraph_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for trial in 0..40 {
            let g = random_graph(6, 0.5, trial).unwrap();
            let h = random_graph(4, rng.gen_range(0.2..0.8), 100 + trial).unwrap();
            let brute = permutations_of(6, 4).into_iter().any(|m| h.edges().all(|(u, v)| g.has_edge(m[u], m[v])));
            assert_eq!(subgraph_oracle(&h, &g).unwrap().is_some(), brute, "trial {trial}");
        }
    }

    fn permutations_of(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for p in permutations_of(n, k - 1) {
            for v in 0..n {
                if !p.contains(&v) {
                    let mut q = p.clone();
                    q.push(v);
                    out.push(q);
                }
            }
        }
        out
    }

    #[test]
    fn digraph_subgraphs() {
        let c3 = Digraph::directed_cycle(3);
        let t = crate::constructions::regular_tournament(5).unwrap();
        assert!(subgraph_oracle_digraph(&c3, &t).unwrap().unwrap().is_valid_digraph(&c3, &t));
        let transitive = Digraph::from_arcs(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(subgraph_oracle_digraph(&c3, &transitive).unwrap().is_none());
        assert!(subgraph_oracle_any(AnyGraph::Graph(&Graph::new(2)), AnyGraph::Digraph(&c3)).is_err());
    }

    #[test]
    fn extremal_numbers() {
        let r = extremal_number(5, &Graph::complete(3)).unwrap();
        assert_eq!(r.value, 6);
        assert_eq!(r.extremal.len(), 1);
        assert!(is_isomorphic(r.witness(), &turan_graph(5, 3).unwrap()).unwrap());
        assert_eq!(extremal_number(6, &Graph::complete(2)).unwrap().value, 0);
        assert_eq!(extremal_number(4, &cycle_graph(4).unwrap()).unwrap().value, 4);
        assert_eq!(extremal_number(6, &Graph::complete(4)).unwrap().value, turan_count(6, 4).unwrap());
    }

    #[test]
    fn dense_six_vertex_graphs_contain_triangles() {
        // every graph on 6 vertices with t_2(6) + 1 = 10 edges contains K_3
        let dense = graphs_up_to_iso(6, &|_| true).unwrap();
        for g in dense.iter().filter(|g| g.edge_count() == 10) {
            assert!(subgraph_oracle(&Graph::complete(3), g).unwrap().is_some());
        }
    }

    #[test]
    fn extremal_lower_bound_from_chromatic_number() {
        let c5 = cycle_graph(5).unwrap();
        let chi = chromatic_number(&c5).unwrap();
        assert_eq!(chi, 3);
        for n in 3..=7 {
            assert!(extremal_number(n, &c5).unwrap().value >= turan_count(n, chi).unwrap());
        }
    }

    #[test]
    fn ramsey_small_cases() {
        assert_eq!(ramsey_oracle(&Graph::complete(2), 4).unwrap().number, Some(2));
        assert_eq!(ramsey_oracle(&path_graph(3), 5).unwrap().number, Some(3));
        let r = ramsey_oracle(&Graph::complete(3), 6).unwrap();
        assert_eq!(r.number, Some(6));
        let cert = r.certificate.unwrap();
        assert_eq!(cert.n(), 5);
        assert!(subgraph_oracle(&Graph::complete(3), &cert).unwrap().is_none());
        assert!(subgraph_oracle(&Graph::complete(3), &cert.complement()).unwrap().is_none());
        let partial = ramsey_oracle(&Graph::complete(3), 4).unwrap();
        assert_eq!((partial.number, partial.largest_avoiding), (None, Some(4)));
    }

    #[test]
    fn packings() {
        let c6 = cycle_graph(6).unwrap();
        assert!(packing_oracle(&c6, &c6, true).unwrap().perfect);
        let k33 = complete_bipartite(3, 3);
        let p = packing_oracle(&k33, &c6, true).unwrap();
        assert!(p.perfect && p.copies[0].is_valid(&c6, &k33));
        let sharp = c6_sharpness_graph(12).unwrap();
        assert!(!packing_oracle(&sharp, &c6, true).unwrap().perfect);
        let max = packing_oracle(&sharp, &c6, false).unwrap();
        assert_eq!(max.copies.len(), 1);
        assert!(packing_oracle(&Graph::complete(7), &c6, true).is_err());
        let tri = packing_oracle(&Graph::complete(9), &Graph::complete(3), true).unwrap();
        assert_eq!(tri.copies.len(), 3);
    }

    #[test]
    fn chromatic_numbers() {
        assert_eq!(chromatic_number(&petersen_graph()).unwrap(), 3);
        assert_eq!(chromatic_number(&Graph::complete(5)).unwrap(), 5);
        assert_eq!(chromatic_number(&complete_bipartite(3, 4)).unwrap(), 2);
        assert_eq!(chromatic_number(&named_graph("C7").unwrap()).unwrap(), 3);
        assert_eq!(greedy_colour_bound(&petersen_graph()), 4);
    }

    fn dense_triangle_blow_up(m: usize, seed: u64) -> (Graph, ReducedGraph) {
        let n = 3 * m;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = Graph::new(n);
        for a in 0..3 {
            for b in a + 1..3 {
                for u in 0..m {
                    for v in 0..m {
                        if rng.gen_bool(0.9) {
                            g.add_edge(a * m + u, b * m + v);
                        }
                    }
                }
            }
        }
        // clusters this small are too coarse for the sampled checker at ε = 1/20,
        // so the regularity graph is given directly
        let clusters = (0..3).map(|i| VertexSet::range(n, i * m..(i + 1) * m)).collect();
        let r = ReducedGraph { r: Graph::complete(3), epsilon: rat(1, 20), d: rat(7, 10), pure: g.clone(), clusters, exceptional: VertexSet::new(n), exhaustive: false };
        (g, r)
    }

    #[test]
    fn greedy_embeds_triangle() {
        let (g, r) = dense_triangle_blow_up(30, 3);
        assert_eq!(r.r.edge_count(), 3);
        let k3 = Graph::complete(3);
        let rep = greedy_embed(&k3, &g, &r, &[0, 1, 2], 1).unwrap();
        let e = rep.embedding().expect("embeds");
        assert!(e.is_valid(&k3, &g));
        assert!(subgraph_oracle(&k3, &g).unwrap().is_some());
        assert!(rep.size_bound_held);
        assert_eq!(e.candidate_trace.as_ref().unwrap().len(), 3);
    }

    #[test]
    fn greedy_preconditions() {
        let (g, r) = dense_triangle_blow_up(30, 3);
        let k3 = Graph::complete(3);
        // m = 30 < 2s/d^Δ = 2·20/0.49
        assert!(matches!(greedy_embed(&k3, &g, &r, &[0, 1, 2], 20), Err(LabError::Hypothesis(_))));
        assert!(matches!(greedy_embed(&k3, &g, &r, &[0, 0, 2], 2), Err(LabError::Hypothesis(_))));
        assert!(greedy_embed(&k3, &g, &r, &[0, 1], 1).is_err());
        assert!(epsilon0_condition(rat(1, 20), rat(7, 10), 2));
        assert!(!epsilon0_condition(rat(1, 5), rat(1, 2), 2));
    }

    #[test]
    fn greedy_single_edge() {
        let g = complete_bipartite(4, 4);
        let p = Partition::with_exceptional(8, VertexSet::new(8), vec![VertexSet::range(8, 0..4), VertexSet::range(8, 4..8)]).unwrap();
        let r = regularity_graph(&g, &p, rat(1, 10), rat(1, 2)).unwrap();
        let rep = greedy_embed(&Graph::complete(2), &g, &r, &[0, 1], 1).unwrap();
        assert_eq!(rep.embedding().unwrap().map, vec![0, 4]);
    }
}
