//! The regularity lemma as an energy-increment loop, the degree-form
//! reduction to a pure graph, and reduced (di)graphs.
//!
//! Energy is `‖A_P‖² = Σ_{I,J ∈ P} |I||J| d(I,J)²` over ordered pairs of
//! classes, diagonal blocks included. For digraphs `d(I,J)` counts arcs
//! from `I` to `J`.

use crate::error::{domain, hypothesis, LabError, Result};
use crate::graph::{AnyGraph, Digraph, Graph, VertexSet};
use crate::rational::{
    ceil_scaled, floor_scaled, format_rational, ge_scaled, le_scaled, pow, require_open_unit, require_unit, to_big, Rational,
};
use crate::regularity::{
    check_pair_regular_auto, check_pair_superregular, low_degree_vertices, PairSpec, PropertyOutcome, RegularityVerdict, ScanMode,
    DEFAULT_PAIR_CAP,
};
use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use std::collections::HashMap;

/// Sampled `X` subsets per pair when a side exceeds the exhaustive cap.
pub const DEFAULT_SAMPLES: usize = 512;
pub const DEFAULT_SEED: u64 = 7;

/// How pair regularity is decided inside the loop and the audits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    /// Pairs with both sides at most this large are scanned exhaustively.
    pub cap: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { cap: DEFAULT_PAIR_CAP, samples: DEFAULT_SAMPLES, seed: DEFAULT_SEED }
    }
}

impl CheckOptions {
    fn verdict(&self, host: AnyGraph, a: &VertexSet, b: &VertexSet, eps: Rational, salt: u64) -> Result<RegularityVerdict> {
        let spec = PairSpec::new(host, a.clone(), b.clone(), eps, Rational::zero());
        check_pair_regular_auto(&spec, self.cap, self.samples, self.seed.wrapping_add(salt.wrapping_mul(0x9e37_79b9_7f4a_7c15)))
    }

    fn exhaustive_for(&self, a: &VertexSet, b: &VertexSet) -> bool {
        a.len().max(b.len()) <= self.cap
    }
}

fn host_row(host: AnyGraph<'_>, v: usize) -> &FixedBitSet {
    match host {
        AnyGraph::Graph(g) => g.neighbours(v),
        AnyGraph::Digraph(d) => d.out_neighbours(v),
    }
}

fn host_col(host: AnyGraph<'_>, v: usize) -> &FixedBitSet {
    match host {
        AnyGraph::Graph(g) => g.neighbours(v),
        AnyGraph::Digraph(d) => d.in_neighbours(v),
    }
}

fn is_directed(host: AnyGraph) -> bool {
    matches!(host, AnyGraph::Digraph(_))
}

fn edges_between(host: AnyGraph, a: &VertexSet, b: &VertexSet) -> usize {
    a.iter().map(|v| host_row(host, v).intersection_count(b.bits())).sum()
}

fn density(host: AnyGraph, a: &VertexSet, b: &VertexSet) -> Rational {
    Rational::new(edges_between(host, a, b) as i64, (a.len() * b.len()) as i64)
}

/// Pairs of entries of `idx` to examine: `i < j` for graphs, all `i ≠ j` for digraphs.
fn index_pairs(idx: &[usize], directed: bool) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (p, &i) in idx.iter().enumerate() {
        for (q, &j) in idx.iter().enumerate() {
            if p < q || (directed && p > q) {
                out.push((i, j));
            }
        }
    }
    out
}

/// A partition of `0..n` into classes. An optional exceptional class may be
/// empty; every other class is non-empty. The balancing classes, when
/// recorded, all have the same size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    n: usize,
    classes: Vec<VertexSet>,
    balancing: Option<Vec<usize>>,
    exceptional: Option<usize>,
}

impl Partition {
    fn build(n: usize, classes: Vec<VertexSet>, exceptional: Option<usize>, balancing: Option<Vec<usize>>) -> Result<Self> {
        let mut seen = VertexSet::new(n);
        for (i, c) in classes.iter().enumerate() {
            if c.universe() != n {
                return domain("partition classes must range over the same vertex set");
            }
            if c.is_empty() && exceptional != Some(i) {
                return domain(format!("class {i} is empty"));
            }
            if !c.is_disjoint(&seen) {
                return domain(format!("class {i} overlaps an earlier class"));
            }
            seen = seen.union(c);
        }
        if seen.len() != n {
            return domain("partition classes do not cover every vertex");
        }
        if let Some(e) = exceptional {
            if e >= classes.len() {
                return domain("exceptional class index out of range");
            }
        }
        if let Some(b) = &balancing {
            let mut sizes = b.iter().map(|&i| classes.get(i).map(VertexSet::len));
            let first = sizes.next().flatten();
            if b.iter().any(|&i| i >= classes.len() || Some(i) == exceptional) {
                return domain("balancing index out of range or exceptional");
            }
            if sizes.any(|s| s != first) {
                return domain("balancing classes must have equal sizes");
            }
            let mut sorted = b.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != b.len() {
                return domain("balancing indices repeat");
            }
        }
        Ok(Partition { n, classes, balancing, exceptional })
    }

    pub fn new(n: usize, classes: Vec<VertexSet>) -> Result<Self> {
        Self::build(n, classes, None, None)
    }

    pub fn from_lists(n: usize, lists: &[Vec<usize>]) -> Result<Self> {
        let classes = lists.iter().map(|l| VertexSet::from_vertices(n, l.iter().copied())).collect::<Result<Vec<_>>>()?;
        Self::new(n, classes)
    }

    /// Exceptional set at index 0 followed by the clusters, which all become balancing.
    pub fn with_exceptional(n: usize, exceptional: VertexSet, clusters: Vec<VertexSet>) -> Result<Self> {
        let k = clusters.len();
        let mut classes = Vec::with_capacity(k + 1);
        classes.push(exceptional);
        classes.extend(clusters);
        Self::build(n, classes, Some(0), Some((1..=k).collect()))
    }

    pub fn singletons(n: usize) -> Self {
        let classes = (0..n).map(|v| VertexSet::range(n, v..v + 1)).collect();
        Partition { n, classes, balancing: Some((0..n).collect()), exceptional: None }
    }

    pub fn trivial(n: usize) -> Result<Self> {
        if n == 0 {
            return domain("the trivial partition needs at least one vertex");
        }
        Self::new(n, vec![VertexSet::full(n)])
    }

    /// Marks the given classes as a balancing subset.
    pub fn with_balancing(self, balancing: Vec<usize>) -> Result<Self> {
        Self::build(self.n, self.classes, self.exceptional, Some(balancing))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[VertexSet] {
        &self.classes
    }

    pub fn class(&self, i: usize) -> &VertexSet {
        &self.classes[i]
    }

    pub fn balancing(&self) -> Option<&[usize]> {
        self.balancing.as_deref()
    }

    pub fn exceptional(&self) -> Option<usize> {
        self.exceptional
    }

    /// The exceptional class, or an empty set.
    pub fn exceptional_set(&self) -> VertexSet {
        self.exceptional.map(|e| self.classes[e].clone()).unwrap_or_else(|| VertexSet::new(self.n))
    }

    /// Every class except the exceptional one, in order.
    pub fn clusters(&self) -> Vec<VertexSet> {
        (0..self.len()).filter(|&i| Some(i) != self.exceptional).map(|i| self.classes[i].clone()).collect()
    }

    /// `class_of[v]` is the index of the class containing `v`.
    pub fn class_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.n];
        for (i, c) in self.classes.iter().enumerate() {
            for v in c.iter() {
                out[v] = i;
            }
        }
        out
    }

    pub fn is_refinement_of(&self, coarse: &Partition) -> bool {
        if self.n != coarse.n {
            return false;
        }
        let owner = coarse.class_of();
        self.classes.iter().all(|c| {
            let mut it = c.iter();
            match it.next() {
                None => true,
                Some(v) => it.all(|u| owner[u] == owner[v]),
            }
        })
    }

    pub fn to_lists(&self) -> Vec<Vec<usize>> {
        self.classes.iter().map(VertexSet::to_vec).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnergyReport {
    /// `‖A_P‖²`, exact.
    pub value: BigRational,
    pub class_count: usize,
    /// `densities[i][j] = d(P_i, P_j)`; zero when a class is empty.
    pub densities: Vec<Vec<Rational>>,
}

fn check_universe(host: AnyGraph, p: &Partition) -> Result<()> {
    if host.n() != p.n() {
        return domain(format!("partition is over {} vertices but the {} has {}", p.n(), host.kind(), host.n()));
    }
    Ok(())
}

/// Edge counts `S[i][j] = Σ_{v ∈ P_i} |N⁺(v) ∩ P_j|`.
fn block_counts(host: AnyGraph, p: &Partition) -> Vec<Vec<u64>> {
    let owner = p.class_of();
    let k = p.len();
    let mut s = vec![vec![0u64; k]; k];
    for (i, c) in p.classes().iter().enumerate() {
        for v in c.iter() {
            for u in host_row(host, v).ones() {
                s[i][owner[u]] += 1;
            }
        }
    }
    s
}

pub fn energy_any(host: AnyGraph, p: &Partition) -> Result<EnergyReport> {
    check_universe(host, p)?;
    let s = block_counts(host, p);
    let sizes: Vec<usize> = p.classes().iter().map(VertexSet::len).collect();
    let l = sizes.iter().filter(|&&z| z > 0).fold(BigInt::one(), |acc, &z| acc.lcm(&BigInt::from(z)));
    let scale: Vec<BigInt> = sizes.iter().map(|&z| if z == 0 { BigInt::zero() } else { &l / BigInt::from(z) }).collect();
    let mut num = BigInt::zero();
    let mut densities = vec![vec![Rational::zero(); p.len()]; p.len()];
    for i in 0..p.len() {
        for j in 0..p.len() {
            if sizes[i] == 0 || sizes[j] == 0 {
                continue;
            }
            densities[i][j] = Rational::new(s[i][j] as i64, (sizes[i] * sizes[j]) as i64);
            if s[i][j] > 0 {
                let sq = BigInt::from(s[i][j]) * BigInt::from(s[i][j]);
                num += sq * &scale[i] * &scale[j];
            }
        }
    }
    Ok(EnergyReport { value: BigRational::new(num, &l * &l), class_count: p.len(), densities })
}

/// `‖A_P‖²` of a graph's adjacency matrix.
pub fn energy(g: &Graph, p: &Partition) -> Result<EnergyReport> {
    energy_any(AnyGraph::Graph(g), p)
}

pub fn energy_digraph(d: &Digraph, p: &Partition) -> Result<EnergyReport> {
    energy_any(AnyGraph::Digraph(d), p)
}

/// Splits every class, in ascending vertex order, into chunks of size `t`
/// and at most one smaller remainder. The full-size chunks are the balancing subset.
pub fn balance_split(p: &Partition, t: usize) -> Result<Partition> {
    if t == 0 {
        return domain("chunk size must be positive");
    }
    let n = p.n();
    let mut classes = Vec::new();
    let mut balancing = Vec::new();
    for c in p.classes() {
        let verts = c.to_vec();
        for chunk in verts.chunks(t) {
            if chunk.len() == t {
                balancing.push(classes.len());
            }
            classes.push(VertexSet::from_vertices(n, chunk.iter().copied())?);
        }
    }
    Partition::build(n, classes, None, Some(balancing))
}

/// The ε-balanced refinement with `t = ⌈εn/|P|⌉`; requires `|P| ≤ εn`.
pub fn balance_refine(p: &Partition, epsilon: Rational, n: usize) -> Result<Partition> {
    require_open_unit("epsilon", &epsilon)?;
    if p.n() != n {
        return domain(format!("partition is over {} vertices, not {n}", p.n()));
    }
    if p.is_empty() {
        return domain("empty partition");
    }
    if !le_scaled(p.len(), &epsilon, n) {
        return hypothesis(format!("|P| = {} exceeds εn with ε = {}, n = {n}", p.len(), format_rational(&epsilon)));
    }
    balance_split(p, ceil_scaled(&epsilon, n).div_ceil(p.len()).max(1))
}

fn loop_t(epsilon: &Rational, n: usize, parts: usize) -> usize {
    // ⌈εn/|P|⌉ computed exactly
    let num = *epsilon.numer() as i128 * n as i128;
    let den = *epsilon.denom() as i128 * parts as i128;
    (((num + den - 1) / den) as usize).max(1)
}

/// A pair of classes `(I, J)` with `X ⊆ I`, `Y ⊆ J` whose density deviates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairWitness {
    pub i: usize,
    pub j: usize,
    pub x: VertexSet,
    pub y: VertexSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessRefinement {
    pub partition: Partition,
    pub energy_before: BigRational,
    pub energy_after: BigRational,
    /// `Σ |X||Y| (d(X,Y) − d(I,J))²` over the witnesses.
    pub gain_bound: BigRational,
}

impl WitnessRefinement {
    pub fn gain(&self) -> BigRational {
        &self.energy_after - &self.energy_before
    }

    pub fn bound_holds(&self) -> bool {
        self.gain() >= self.gain_bound
    }
}

fn validate_witnesses(host: AnyGraph, p: &Partition, witnesses: &[PairWitness], epsilon: &Rational) -> Result<BigRational> {
    let directed = is_directed(host);
    let mut seen = std::collections::HashSet::new();
    let mut bound = BigRational::zero();
    for (k, w) in witnesses.iter().enumerate() {
        let bad = |msg: &str| LabError::Domain(format!("witness {k}: {msg}"));
        if w.i >= p.len() || w.j >= p.len() {
            return Err(bad("class index out of range"));
        }
        if w.i == w.j {
            return Err(bad("the two classes must differ"));
        }
        let key = if directed { (w.i, w.j) } else { (w.i.min(w.j), w.i.max(w.j)) };
        if !seen.insert(key) {
            return Err(bad("pair of classes used twice"));
        }
        let (ci, cj) = (p.class(w.i), p.class(w.j));
        if w.x.universe() != p.n() || w.y.universe() != p.n() || !w.x.is_subset(ci) || !w.y.is_subset(cj) {
            return Err(bad("X and Y must lie in their classes"));
        }
        if w.x.is_empty() || w.y.is_empty() || !ge_scaled(w.x.len(), epsilon, ci.len()) || !ge_scaled(w.y.len(), epsilon, cj.len()) {
            return Err(bad("X or Y is smaller than ε times its class"));
        }
        let dev = density(host, &w.x, &w.y) - density(host, ci, cj);
        if dev.abs() < *epsilon {
            return Err(bad("density deviation is below ε"));
        }
        let size = BigRational::from_integer(BigInt::from(w.x.len() * w.y.len()));
        bound += size * to_big(&(dev * dev));
    }
    Ok(bound)
}

fn atoms(host_n: usize, p: &Partition, witnesses: &[PairWitness]) -> Result<Partition> {
    let mut cuts: Vec<Vec<&VertexSet>> = vec![Vec::new(); p.len()];
    for w in witnesses {
        cuts[w.i].push(&w.x);
        cuts[w.j].push(&w.y);
    }
    let mut classes = Vec::new();
    let mut exceptional = None;
    for (k, c) in p.classes().iter().enumerate() {
        let mut by_sig: HashMap<Vec<bool>, usize> = HashMap::new();
        let mut parts: Vec<VertexSet> = Vec::new();
        for v in c.iter() {
            let sig: Vec<bool> = cuts[k].iter().map(|s| s.contains(v)).collect();
            let idx = *by_sig.entry(sig).or_insert_with(|| {
                parts.push(VertexSet::new(host_n));
                parts.len() - 1
            });
            parts[idx].insert(v);
        }
        if c.is_empty() && p.exceptional() == Some(k) {
            exceptional = Some(classes.len());
            classes.push(c.clone());
            continue;
        }
        if p.exceptional() == Some(k) && parts.len() == 1 {
            exceptional = Some(classes.len());
        }
        classes.extend(parts);
    }
    Partition::build(host_n, classes, exceptional, None)
}

/// Refines every class into the atoms cut out by the witness sets lying in it.
/// Atoms of a class are ordered by their least vertex.
pub fn witness_refine_any(host: AnyGraph, p: &Partition, witnesses: &[PairWitness], epsilon: Rational) -> Result<WitnessRefinement> {
    require_open_unit("epsilon", &epsilon)?;
    check_universe(host, p)?;
    let gain_bound = validate_witnesses(host, p, witnesses, &epsilon)?;
    let refined = atoms(p.n(), p, witnesses)?;
    let energy_before = energy_any(host, p)?.value;
    let energy_after = energy_any(host, &refined)?.value;
    Ok(WitnessRefinement { partition: refined, energy_before, energy_after, gain_bound })
}

pub fn witness_refine(g: &Graph, p: &Partition, witnesses: &[PairWitness], epsilon: Rational) -> Result<WitnessRefinement> {
    witness_refine_any(AnyGraph::Graph(g), p, witnesses, epsilon)
}

/// One boost of the loop: refine by witnesses, then rebalance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoostRecord {
    pub irregular_pairs: usize,
    pub balancing_classes: usize,
    pub energy_before: BigRational,
    pub energy_after: BigRational,
    pub gain_bound: BigRational,
    /// Whether `energy_after − energy_before > ε⁵n²/4`.
    pub gain_exceeds_increment: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularPartition {
    /// Exceptional set at index 0, then the clusters.
    pub partition: Partition,
    pub epsilon: Rational,
    pub k0: usize,
    pub iterations: usize,
    /// Iteration cap `⌊4/ε⁵⌋`.
    pub iteration_cap: u128,
    /// Energy of each ε-balanced partition visited, starting with the initial one.
    pub energy_trace: Vec<BigRational>,
    pub boosts: Vec<BoostRecord>,
    /// Cluster index pairs (0-based among the clusters) found irregular.
    pub irregular_pairs: Vec<(usize, usize)>,
    /// False when some pair was decided by sampling.
    pub exhaustive: bool,
    /// Hypotheses of the lemma that failed at this scale; recorded, not fatal.
    pub flags: Vec<String>,
}

impl RegularPartition {
    pub fn clusters(&self) -> Vec<VertexSet> {
        self.partition.clusters()
    }

    pub fn exceptional(&self) -> VertexSet {
        self.partition.exceptional_set()
    }

    pub fn energy_increasing(&self) -> bool {
        self.energy_trace.windows(2).all(|w| w[1] > w[0])
    }
}

/// `⌊4/ε⁵⌋`, saturating.
pub fn iteration_cap(epsilon: &Rational) -> u128 {
    let e5 = to_big(&pow(epsilon, 5));
    let q = (BigRational::from_integer(BigInt::from(4)) / e5).floor().to_integer();
    q.to_u128().unwrap_or(u128::MAX)
}

/// As many classes of size `⌊n/k0⌋` as fit (at least `k0`); the remainder,
/// smaller than one class, is the exceptional class `C₀`.
fn initial_partition(n: usize, k0: usize) -> Result<Partition> {
    let m = n / k0;
    let k = n / m;
    let mut classes: Vec<VertexSet> = (0..k).map(|i| VertexSet::range(n, i * m..(i + 1) * m)).collect();
    let balancing = (0..k).collect();
    if k * m < n {
        // the highest-indexed vertices form C₀
        classes.push(VertexSet::range(n, k * m..n));
    }
    Partition::build(n, classes, None, Some(balancing))
}

struct PairScan {
    irregular: Vec<((usize, usize), RegularityVerdict)>,
    exhaustive: bool,
}

fn scan_pairs(host: AnyGraph, p: &Partition, idx: &[usize], epsilon: Rational, opts: &CheckOptions) -> Result<PairScan> {
    let pairs = index_pairs(idx, is_directed(host));
    let exhaustive = pairs.iter().all(|&(i, j)| opts.exhaustive_for(p.class(i), p.class(j)));
    let verdicts: Vec<Result<RegularityVerdict>> = pairs
        .par_iter()
        .map(|&(i, j)| opts.verdict(host, p.class(i), p.class(j), epsilon, (i * p.len() + j) as u64))
        .collect();
    let mut irregular = Vec::new();
    for (pair, v) in pairs.into_iter().zip(verdicts) {
        let v = v?;
        if !v.holds {
            irregular.push((pair, v));
        }
    }
    Ok(PairScan { irregular, exhaustive })
}

/// Runs the energy-increment loop from at least `k0` equal clusters.
pub fn regularity_partition_any(host: AnyGraph, epsilon: Rational, k0: usize, opts: &CheckOptions) -> Result<RegularPartition> {
    require_open_unit("epsilon", &epsilon)?;
    let n = host.n();
    if k0 == 0 {
        return domain("k0 must be positive");
    }
    if n == 0 || n < k0 {
        return Err(LabError::Infeasible(format!("n = {n} is too small for k0 = {k0}")));
    }
    let cap = iteration_cap(&epsilon);
    let increment = to_big(&pow(&epsilon, 5)) * BigRational::from_integer(BigInt::from(n * n)) / BigRational::from_integer(BigInt::from(4));
    let mut flags = Vec::new();
    let mut p = initial_partition(n, k0)?;
    let leftover = n % (n / k0);
    if !le_scaled(leftover, &epsilon, n) {
        flags.push(format!("initial leftover |C0| = {leftover} exceeds εn"));
    }
    let mut trace = vec![energy_any(host, &p)?.value];
    let mut boosts = Vec::new();
    let mut exhaustive = true;
    loop {
        let balancing = p.balancing().expect("loop partitions are balanced").to_vec();
        let scan = scan_pairs(host, &p, &balancing, epsilon, opts)?;
        exhaustive &= scan.exhaustive;
        let c = balancing.len();
        if le_scaled(scan.irregular.len(), &epsilon, c * c) {
            let pos: HashMap<usize, usize> = balancing.iter().enumerate().map(|(k, &i)| (i, k)).collect();
            let irregular_pairs = scan.irregular.iter().map(|((i, j), _)| (pos[i], pos[j])).collect();
            let in_c: Vec<VertexSet> = balancing.iter().map(|&i| p.class(i).clone()).collect();
            let mut v0 = VertexSet::new(n);
            for (i, cl) in p.classes().iter().enumerate() {
                if !balancing.contains(&i) {
                    v0 = v0.union(cl);
                }
            }
            if c < k0 {
                flags.push(format!("only {c} clusters, fewer than k0 = {k0}"));
            }
            return Ok(RegularPartition {
                partition: Partition::with_exceptional(n, v0, in_c)?,
                epsilon,
                k0,
                iterations: boosts.len(),
                iteration_cap: cap,
                energy_trace: trace,
                boosts,
                irregular_pairs,
                exhaustive,
                flags,
            });
        }
        if boosts.len() as u128 >= cap {
            return Err(LabError::Infeasible(format!("no good partition within ⌊4/ε⁵⌋ = {cap} boosts")));
        }
        let witnesses: Vec<PairWitness> = scan
            .irregular
            .iter()
            .map(|((i, j), v)| {
                let w = v.witness.as_ref().expect("irregular verdicts carry witnesses");
                PairWitness { i: *i, j: *j, x: w.x.clone(), y: w.y.clone() }
            })
            .collect();
        let refined = witness_refine_any(host, &p, &witnesses, epsilon)?;
        let t = loop_t(&epsilon, n, refined.partition.len());
        let next = balance_split(&refined.partition, t)?;
        let leftover: usize = next.classes().iter().filter(|c| c.len() != t).map(VertexSet::len).sum();
        if !le_scaled(leftover, &epsilon, n) {
            flags.push(format!("boost {}: {leftover} vertices outside the balancing subset exceed εn", boosts.len() + 1));
        }
        let after = energy_any(host, &next)?.value;
        let before = trace.last().expect("trace starts non-empty").clone();
        boosts.push(BoostRecord {
            irregular_pairs: scan.irregular.len(),
            balancing_classes: c,
            gain_exceeds_increment: &after - &before > increment,
            energy_before: before,
            energy_after: after.clone(),
            gain_bound: refined.gain_bound,
        });
        trace.push(after);
        p = next;
    }
}

pub fn regularity_partition(g: &Graph, epsilon: Rational, k0: usize) -> Result<RegularPartition> {
    regularity_partition_any(AnyGraph::Graph(g), epsilon, k0, &CheckOptions::default())
}

pub fn regularity_partition_digraph(d: &Digraph, epsilon: Rational, k0: usize) -> Result<RegularPartition> {
    regularity_partition_any(AnyGraph::Digraph(d), epsilon, k0, &CheckOptions::default())
}

/// `ε′ = min(ε/40, d/10, ε²d)` (the `d` terms are dropped when `d = 0`) and
/// `k′₀ = max(k0, ⌈10/ε⌉)`, clamped to `n`.
pub fn inner_parameters(epsilon: Rational, d: Rational, k0: usize, n: usize) -> (Rational, usize) {
    let mut e = epsilon / 40;
    if d.is_positive() {
        e = e.min(d / 10).min(epsilon * epsilon * d);
    }
    let k = k0.max((Rational::from_integer(10) / epsilon).ceil().to_integer() as usize);
    (e, k.min(n))
}

/// Counters from the five reduction steps.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DegreeFormTrace {
    pub red_pairs: usize,
    pub red_edges_deleted: usize,
    pub evicted_step1: usize,
    pub blue_pairs: usize,
    pub marked_edges: usize,
    pub evicted_step3: usize,
    pub blue_edges_deleted: usize,
    pub internal_edges_deleted: usize,
    pub leftover_step5: usize,
    pub chunk_size: usize,
}

/// Output of the degree form: the pure graph `G′` and the final partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeForm<G> {
    pub pure: G,
    /// Exceptional set at index 0, then equal-size clusters.
    pub partition: Partition,
    pub epsilon: Rational,
    pub d: Rational,
    pub k0: usize,
    pub inner_epsilon: Rational,
    pub inner_k0: usize,
    pub inner_iterations: usize,
    pub inner_flags: Vec<String>,
    pub trace: DegreeFormTrace,
}

impl<G> DegreeForm<G> {
    pub fn clusters(&self) -> Vec<VertexSet> {
        self.partition.clusters()
    }

    pub fn exceptional(&self) -> VertexSet {
        self.partition.exceptional_set()
    }
}

/// Working copy: the pure graph as a digraph (symmetric for graphs).
struct Pure {
    directed: bool,
    out: Vec<FixedBitSet>,
    inn: Vec<FixedBitSet>,
}

impl Pure {
    fn from_host(host: AnyGraph) -> Self {
        let n = host.n();
        Pure {
            directed: is_directed(host),
            out: (0..n).map(|v| host_row(host, v).clone()).collect(),
            inn: (0..n).map(|v| host_col(host, v).clone()).collect(),
        }
    }

    /// Removes the edge `u → w` (both directions for graphs).
    fn remove(&mut self, u: usize, w: usize) -> bool {
        if !self.out[u].contains(w) {
            return false;
        }
        self.out[u].set(w, false);
        self.inn[w].set(u, false);
        if !self.directed {
            self.out[w].set(u, false);
            self.inn[u].set(w, false);
        }
        true
    }

    fn into_graph(self) -> Graph {
        let n = self.out.len();
        let mut g = Graph::new(n);
        for (u, row) in self.out.iter().enumerate() {
            for w in row.ones().filter(|&w| w > u) {
                g.add_edge(u, w);
            }
        }
        g
    }

    fn into_digraph(self) -> Digraph {
        let n = self.out.len();
        let mut d = Digraph::new(n);
        for (u, row) in self.out.iter().enumerate() {
            for w in row.ones() {
                d.add_arc(u, w);
            }
        }
        d
    }
}

fn validate_degree_params(epsilon: &Rational, d: &Rational) -> Result<()> {
    require_open_unit("epsilon", epsilon)?;
    require_unit("d", d)?;
    if *d >= Rational::one() {
        return domain("d must lie in [0,1)");
    }
    Ok(())
}

struct Reduction {
    pure: Pure,
    partition: Partition,
    trace: DegreeFormTrace,
}

/// Steps 1–5 applied to an inner partition (exceptional set plus equal clusters).
fn reduce(host: AnyGraph, inner: &Partition, epsilon: Rational, d: Rational, inner_epsilon: Rational, opts: &CheckOptions) -> Result<Reduction> {
    let n = host.n();
    check_universe(host, inner)?;
    let clusters = inner.clusters();
    let k = clusters.len();
    if k == 0 {
        return Err(LabError::Infeasible("the inner partition has no clusters".into()));
    }
    let m = clusters[0].len();
    if clusters.iter().any(|c| c.len() != m) {
        return domain("inner clusters must have equal sizes");
    }
    let directed = is_directed(host);
    let mut trace = DegreeFormTrace::default();
    let mut v0 = inner.exceptional_set();
    let mut pure = Pure::from_host(host);
    let idx: Vec<usize> = (0..k).collect();
    let pairs = index_pairs(&idx, directed);
    let verdicts: Vec<Result<RegularityVerdict>> = pairs
        .par_iter()
        .map(|&(i, j)| opts.verdict(host, &clusters[i], &clusters[j], inner_epsilon, (i * k + j) as u64))
        .collect();
    let mut red = Vec::new();
    let mut regular = Vec::new();
    for (pair, v) in pairs.into_iter().zip(verdicts) {
        if v?.holds {
            regular.push(pair);
        } else {
            red.push(pair);
        }
    }
    trace.red_pairs = red.len();
    let evict_bound = epsilon / 10;

    // step 1: red edges
    let mut red_count = vec![0usize; n];
    for &(i, j) in &red {
        for v in clusters[i].iter() {
            red_count[v] += host_row(host, v).intersection_count(clusters[j].bits());
        }
        for v in clusters[j].iter() {
            red_count[v] += host_col(host, v).intersection_count(clusters[i].bits());
        }
    }
    for v in 0..n {
        if !v0.contains(v) && ge_scaled(red_count[v], &evict_bound, n) {
            v0.insert(v);
            trace.evicted_step1 += 1;
        }
    }
    for &(i, j) in &red {
        trace.red_edges_deleted += delete_pair_edges(host, &mut pure, &clusters[i], &clusters[j], &v0);
    }

    // step 2: blue pairs and marking
    let blue_max = d + inner_epsilon;
    let keep = floor_scaled(&(d + inner_epsilon * 2), m);
    let mut marked = vec![0usize; n];
    let mut blue = Vec::new();
    for &(i, j) in &regular {
        if density(host, &clusters[i], &clusters[j]) > blue_max {
            continue;
        }
        blue.push((i, j));
        let mut arcs: std::collections::HashSet<(usize, usize)> = std::collections::HashSet::new();
        for v in clusters[i].iter() {
            let nb: Vec<usize> = host_row(host, v).ones().filter(|&w| clusters[j].contains(w)).collect();
            for &w in nb.iter().skip(keep) {
                arcs.insert((v, w));
            }
        }
        for v in clusters[j].iter() {
            let nb: Vec<usize> = host_col(host, v).ones().filter(|&w| clusters[i].contains(w)).collect();
            for &w in nb.iter().skip(keep) {
                arcs.insert((w, v));
            }
        }
        for &(u, w) in &arcs {
            marked[u] += 1;
            marked[w] += 1;
        }
        trace.marked_edges += arcs.len();
    }
    trace.blue_pairs = blue.len();

    // step 3: evict heavily marked vertices, drop blue edges
    for v in 0..n {
        if !v0.contains(v) && ge_scaled(marked[v], &evict_bound, n) {
            v0.insert(v);
            trace.evicted_step3 += 1;
        }
    }
    for &(i, j) in &blue {
        trace.blue_edges_deleted += delete_pair_edges(host, &mut pure, &clusters[i], &clusters[j], &v0);
    }

    // step 4: edges inside clusters
    let shrunk: Vec<VertexSet> = clusters.iter().map(|c| c.difference(&v0)).collect();
    for c in &shrunk {
        let verts = c.to_vec();
        for &u in &verts {
            for &w in &verts {
                if (directed || u < w) && pure.remove(u, w) {
                    trace.internal_edges_deleted += 1;
                }
            }
        }
    }

    // step 5: equal subclusters of size ⌈εn/(4k′)⌉
    let chunk = {
        let num = *epsilon.numer() as i128 * n as i128;
        let den = *epsilon.denom() as i128 * 4 * k as i128;
        (((num + den - 1) / den) as usize).max(1)
    };
    trace.chunk_size = chunk;
    let mut final_clusters = Vec::new();
    for c in &shrunk {
        let verts = c.to_vec();
        for part in verts.chunks(chunk) {
            if part.len() == chunk {
                final_clusters.push(VertexSet::from_vertices(n, part.iter().copied())?);
            } else {
                for &v in part {
                    v0.insert(v);
                }
                trace.leftover_step5 += part.len();
            }
        }
    }
    let partition = Partition::with_exceptional(n, v0, final_clusters)?;
    Ok(Reduction { pure, partition, trace })
}

/// Deletes edges `u → w` with `u ∈ a`, `w ∈ b` unless an endpoint is exceptional.
fn delete_pair_edges(host: AnyGraph, pure: &mut Pure, a: &VertexSet, b: &VertexSet, v0: &VertexSet) -> usize {
    let mut count = 0;
    for u in a.iter().filter(|&u| !v0.contains(u)) {
        let targets: Vec<usize> = host_row(host, u).ones().filter(|&w| b.contains(w) && !v0.contains(w)).collect();
        for w in targets {
            if pure.remove(u, w) {
                count += 1;
            }
        }
    }
    count
}

fn degree_form_impl(
    host: AnyGraph,
    epsilon: Rational,
    d: Rational,
    k0: usize,
    inner: Option<&Partition>,
    inner_epsilon: Option<Rational>,
    opts: &CheckOptions,
) -> Result<(Reduction, Rational, usize, usize, Vec<String>)> {
    validate_degree_params(&epsilon, &d)?;
    let n = host.n();
    if k0 == 0 {
        return domain("k0 must be positive");
    }
    if n < k0 {
        return Err(LabError::Infeasible(format!("n = {n} is below k0 = {k0}")));
    }
    let (e_default, k_inner) = inner_parameters(epsilon, d, k0, n);
    let e_inner = inner_epsilon.unwrap_or(e_default);
    require_open_unit("inner epsilon", &e_inner)?;
    let (part, iterations, flags) = match inner {
        Some(p) => (p.clone(), 0, Vec::new()),
        None => {
            let rp = regularity_partition_any(host, e_inner, k_inner, opts)?;
            (rp.partition, rp.iterations, rp.flags)
        }
    };
    let red = reduce(host, &part, epsilon, d, e_inner, opts)?;
    Ok((red, e_inner, k_inner, iterations, flags))
}

/// The degree form: runs the regularity loop with the inner parameters of
/// [`inner_parameters`] and applies the five reduction steps.
pub fn degree_form(g: &Graph, epsilon: Rational, d: Rational, k0: usize) -> Result<DegreeForm<Graph>> {
    degree_form_opts(g, epsilon, d, k0, &CheckOptions::default())
}

pub fn degree_form_opts(g: &Graph, epsilon: Rational, d: Rational, k0: usize, opts: &CheckOptions) -> Result<DegreeForm<Graph>> {
    let (red, ie, ik, it, flags) = degree_form_impl(AnyGraph::Graph(g), epsilon, d, k0, None, None, opts)?;
    Ok(DegreeForm {
        pure: red.pure.into_graph(),
        partition: red.partition,
        epsilon,
        d,
        k0,
        inner_epsilon: ie,
        inner_k0: ik,
        inner_iterations: it,
        inner_flags: flags,
        trace: red.trace,
    })
}

/// Steps 1–5 on a supplied inner partition (exceptional set plus equal clusters)
/// with inner regularity parameter `inner_epsilon`.
pub fn degree_form_with_inner(g: &Graph, inner: &Partition, epsilon: Rational, d: Rational, inner_epsilon: Rational) -> Result<DegreeForm<Graph>> {
    let k0 = inner.clusters().len().max(1);
    let (red, ie, _, _, _) = degree_form_impl(AnyGraph::Graph(g), epsilon, d, 1, Some(inner), Some(inner_epsilon), &CheckOptions::default())?;
    Ok(DegreeForm {
        pure: red.pure.into_graph(),
        partition: red.partition,
        epsilon,
        d,
        k0,
        inner_epsilon: ie,
        inner_k0: k0,
        inner_iterations: 0,
        inner_flags: Vec::new(),
        trace: red.trace,
    })
}

/// The directed degree form: the same five steps on ordered pairs, counting
/// both in- and out-edges at each vertex.
pub fn degree_form_digraph(dg: &Digraph, epsilon: Rational, d: Rational, k0: usize) -> Result<DegreeForm<Digraph>> {
    degree_form_digraph_opts(dg, epsilon, d, k0, &CheckOptions::default())
}

pub fn degree_form_digraph_opts(dg: &Digraph, epsilon: Rational, d: Rational, k0: usize, opts: &CheckOptions) -> Result<DegreeForm<Digraph>> {
    let (red, ie, ik, it, flags) = degree_form_impl(AnyGraph::Digraph(dg), epsilon, d, k0, None, None, opts)?;
    Ok(DegreeForm {
        pure: red.pure.into_digraph(),
        partition: red.partition,
        epsilon,
        d,
        k0,
        inner_epsilon: ie,
        inner_k0: ik,
        inner_iterations: it,
        inner_flags: flags,
        trace: red.trace,
    })
}

pub fn degree_form_digraph_with_inner(dg: &Digraph, inner: &Partition, epsilon: Rational, d: Rational, inner_epsilon: Rational) -> Result<DegreeForm<Digraph>> {
    let k0 = inner.clusters().len().max(1);
    let (red, ie, _, _, _) = degree_form_impl(AnyGraph::Digraph(dg), epsilon, d, 1, Some(inner), Some(inner_epsilon), &CheckOptions::default())?;
    Ok(DegreeForm {
        pure: red.pure.into_digraph(),
        partition: red.partition,
        epsilon,
        d,
        k0,
        inner_epsilon: ie,
        inner_k0: k0,
        inner_iterations: 0,
        inner_flags: Vec::new(),
        trace: red.trace,
    })
}

/// Post-hoc check of the degree-form guarantees. For graphs the in-degree
/// condition coincides with the degree condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeFormAudit {
    /// `k ≥ k0` and `|V₀| ≤ εn`.
    pub cluster_count_and_exceptional: bool,
    pub equal_sizes: bool,
    /// `d⁺_{G′}(x) > d⁺_G(x) − (d+ε)n` for every `x` (the plain degree for graphs).
    pub out_degree_loss: bool,
    pub in_degree_loss: bool,
    pub clusters_empty: bool,
    /// Every pair of clusters in `G′` is empty, or ε-regular with density `> d`.
    pub pairs_regular: bool,
    /// False when some pair was decided by sampling.
    pub pairs_exhaustive: bool,
    pub failures: Vec<String>,
}

impl DegreeFormAudit {
    pub fn all_hold(&self) -> bool {
        self.cluster_count_and_exceptional && self.equal_sizes && self.out_degree_loss && self.in_degree_loss && self.clusters_empty && self.pairs_regular
    }
}

fn audit_impl(host: AnyGraph, pure: AnyGraph, p: &Partition, epsilon: Rational, d: Rational, k0: usize, opts: &CheckOptions) -> Result<DegreeFormAudit> {
    let n = host.n();
    check_universe(host, p)?;
    check_universe(pure, p)?;
    let clusters = p.clusters();
    let v0 = p.exceptional_set();
    let mut failures = Vec::new();
    let cce = clusters.len() >= k0 && le_scaled(v0.len(), &epsilon, n);
    if !cce {
        failures.push(format!("k = {} (k0 = {k0}), |V0| = {}", clusters.len(), v0.len()));
    }
    let equal_sizes = clusters.windows(2).all(|w| w[0].len() == w[1].len());
    if !equal_sizes {
        failures.push("cluster sizes differ".into());
    }
    let bound = d + epsilon;
    let mut out_ok = true;
    let mut in_ok = true;
    for x in 0..n {
        let out_loss = host_row(host, x).count_ones(..) - host_row(pure, x).count_ones(..);
        let in_loss = host_col(host, x).count_ones(..) - host_col(pure, x).count_ones(..);
        if ge_scaled(out_loss, &bound, n) {
            out_ok = false;
            failures.push(format!("vertex {x} lost {out_loss} out-edges"));
        }
        if ge_scaled(in_loss, &bound, n) {
            in_ok = false;
            failures.push(format!("vertex {x} lost {in_loss} in-edges"));
        }
    }
    let mut clusters_empty = true;
    for (i, c) in clusters.iter().enumerate() {
        if edges_between(pure, c, c) > 0 {
            clusters_empty = false;
            failures.push(format!("cluster {i} spans an edge"));
        }
    }
    let idx: Vec<usize> = (0..clusters.len()).collect();
    let pairs = index_pairs(&idx, is_directed(pure));
    let pairs_exhaustive = pairs.iter().all(|&(i, j)| opts.exhaustive_for(&clusters[i], &clusters[j]));
    let k = clusters.len();
    let results: Vec<Result<Option<String>>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let dens = density(pure, &clusters[i], &clusters[j]);
            if dens.is_zero() {
                return Ok(None);
            }
            if dens <= d {
                return Ok(Some(format!("pair ({i},{j}) has density {} ≤ d", format_rational(&dens))));
            }
            let v = opts.verdict(pure, &clusters[i], &clusters[j], epsilon, (i * k + j) as u64)?;
            Ok((!v.holds).then(|| format!("pair ({i},{j}) is not ε-regular")))
        })
        .collect();
    let mut pairs_regular = true;
    for r in results {
        if let Some(msg) = r? {
            pairs_regular = false;
            failures.push(msg);
        }
    }
    Ok(DegreeFormAudit {
        cluster_count_and_exceptional: cce,
        equal_sizes,
        out_degree_loss: out_ok,
        in_degree_loss: in_ok,
        clusters_empty,
        pairs_regular,
        pairs_exhaustive,
        failures,
    })
}

pub fn audit_degree_form(g: &Graph, form: &DegreeForm<Graph>) -> Result<DegreeFormAudit> {
    audit_degree_form_opts(g, form, &CheckOptions::default())
}

pub fn audit_degree_form_opts(g: &Graph, form: &DegreeForm<Graph>, opts: &CheckOptions) -> Result<DegreeFormAudit> {
    audit_impl(AnyGraph::Graph(g), AnyGraph::Graph(&form.pure), &form.partition, form.epsilon, form.d, form.k0, opts)
}

pub fn audit_degree_form_digraph(dg: &Digraph, form: &DegreeForm<Digraph>) -> Result<DegreeFormAudit> {
    audit_impl(AnyGraph::Digraph(dg), AnyGraph::Digraph(&form.pure), &form.partition, form.epsilon, form.d, form.k0, &CheckOptions::default())
}

/// Reduced graph over the clusters of a partition (exceptional class excluded).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedGraph {
    pub r: Graph,
    pub epsilon: Rational,
    pub d: Rational,
    pub pure: Graph,
    pub clusters: Vec<VertexSet>,
    pub exceptional: VertexSet,
    pub exhaustive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedDigraph {
    pub r: Digraph,
    pub epsilon: Rational,
    pub d: Rational,
    pub pure: Digraph,
    pub clusters: Vec<VertexSet>,
    pub exceptional: VertexSet,
    pub exhaustive: bool,
}

#[derive(Clone, Copy)]
enum Threshold {
    Above,
    AtLeast,
}

fn cluster_edges(host: AnyGraph, p: &Partition, epsilon: Rational, d: Rational, rule: Threshold, opts: &CheckOptions) -> Result<(Vec<(usize, usize)>, Vec<VertexSet>, bool)> {
    require_open_unit("epsilon", &epsilon)?;
    require_unit("d", &d)?;
    if host.n() != p.n() {
        return Err(LabError::Domain(format!("partition is over {} vertices but the pure {} has {}", p.n(), host.kind(), host.n())));
    }
    let clusters = p.clusters();
    let idx: Vec<usize> = (0..clusters.len()).collect();
    let pairs = index_pairs(&idx, is_directed(host));
    let exhaustive = pairs.iter().all(|&(i, j)| opts.exhaustive_for(&clusters[i], &clusters[j]));
    let k = clusters.len();
    let keep: Vec<Result<bool>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let dens = density(host, &clusters[i], &clusters[j]);
            let dense = match rule {
                Threshold::Above => dens > d,
                Threshold::AtLeast => dens >= d && dens.is_positive(),
            };
            if !dense {
                return Ok(false);
            }
            Ok(opts.verdict(host, &clusters[i], &clusters[j], epsilon, (i * k + j) as u64)?.holds)
        })
        .collect();
    let mut edges = Vec::new();
    for (pair, ok) in pairs.into_iter().zip(keep) {
        if ok? {
            edges.push(pair);
        }
    }
    Ok((edges, clusters, exhaustive))
}

fn build_reduced(pure: &Graph, p: &Partition, epsilon: Rational, d: Rational, rule: Threshold, opts: &CheckOptions) -> Result<ReducedGraph> {
    let (edges, clusters, exhaustive) = cluster_edges(AnyGraph::Graph(pure), p, epsilon, d, rule, opts)?;
    Ok(ReducedGraph {
        r: Graph::from_edges(clusters.len(), &edges)?,
        epsilon,
        d,
        pure: pure.clone(),
        clusters,
        exceptional: p.exceptional_set(),
        exhaustive,
    })
}

/// `V_iV_j ∈ E(R)` iff `(V_i, V_j)_{G′}` is ε-regular with density `> d`.
pub fn reduced_graph(pure: &Graph, p: &Partition, epsilon: Rational, d: Rational) -> Result<ReducedGraph> {
    build_reduced(pure, p, epsilon, d, Threshold::Above, &CheckOptions::default())
}

pub fn reduced_graph_opts(pure: &Graph, p: &Partition, epsilon: Rational, d: Rational, opts: &CheckOptions) -> Result<ReducedGraph> {
    build_reduced(pure, p, epsilon, d, Threshold::Above, opts)
}

/// Like [`reduced_graph`] but with density at least `d` (and positive).
pub fn regularity_graph(g: &Graph, p: &Partition, epsilon: Rational, d: Rational) -> Result<ReducedGraph> {
    build_reduced(g, p, epsilon, d, Threshold::AtLeast, &CheckOptions::default())
}

/// `V_i → V_j` iff arcs from `V_i` to `V_j` in `G′` form an ε-regular pair of
/// density at least `d` (and positive).
pub fn reduced_digraph(pure: &Digraph, p: &Partition, epsilon: Rational, d: Rational) -> Result<ReducedDigraph> {
    reduced_digraph_opts(pure, p, epsilon, d, &CheckOptions::default())
}

pub fn reduced_digraph_opts(pure: &Digraph, p: &Partition, epsilon: Rational, d: Rational, opts: &CheckOptions) -> Result<ReducedDigraph> {
    let (arcs, clusters, exhaustive) = cluster_edges(AnyGraph::Digraph(pure), p, epsilon, d, Threshold::AtLeast, opts)?;
    Ok(ReducedDigraph {
        r: Digraph::from_arcs(clusters.len(), &arcs)?,
        epsilon,
        d,
        pure: pure.clone(),
        clusters,
        exceptional: p.exceptional_set(),
        exhaustive,
    })
}

/// Checks `δ(R) ≥ (c − 2d)|R|` when `δ(G) ≥ cn` and `2ε ≤ d ≤ c/2`. With
/// `c = None` the measured `δ(G)/n` is used.
pub fn mindeg_audit(g: &Graph, reduced: &ReducedGraph, c: Option<Rational>) -> Result<PropertyOutcome> {
    let n = g.n();
    if n == 0 {
        return domain("empty graph");
    }
    let c = c.unwrap_or_else(|| Rational::new(g.min_degree() as i64, n as i64));
    let (eps, d) = (reduced.epsilon, reduced.d);
    if !ge_scaled(g.min_degree(), &c, n) {
        return Ok(PropertyOutcome::Vacuous(format!("δ(G) < cn for c = {}", format_rational(&c))));
    }
    if eps * 2 > d || d > c / 2 || !d.is_positive() {
        return Ok(PropertyOutcome::Vacuous("parameters outside 0 < 2ε ≤ d ≤ c/2".into()));
    }
    let k = reduced.r.n();
    if k == 0 {
        return Ok(PropertyOutcome::Vacuous("reduced graph has no vertices".into()));
    }
    let need = c - d * 2;
    if ge_scaled(reduced.r.min_degree(), &need, k) {
        Ok(PropertyOutcome::Holds)
    } else {
        Ok(PropertyOutcome::Violated(format!("δ(R) = {} < (c − 2d)|R| with |R| = {k}", reduced.r.min_degree())))
    }
}

/// Subclusters obtained by discarding low-degree vertices along selected reduced-graph edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Superregularized {
    pub subclusters: Vec<VertexSet>,
    /// Vertices moved out of each cluster, low-degree ones first.
    pub removed: Vec<VertexSet>,
    pub low_degree: Vec<VertexSet>,
    pub exceptional: VertexSet,
    /// `(i, j, holds)` for the `(2ε, d − (Δ+1)ε)`-superregularity audit of each selected edge.
    pub audits: Vec<(usize, usize, bool)>,
    pub audit_epsilon: Rational,
    pub audit_d: Rational,
}

impl Superregularized {
    pub fn audit_holds(&self) -> bool {
        self.audits.iter().all(|a| a.2)
    }
}

/// For each cluster `V_i` removes exactly `⌊Δεm⌋` vertices: every vertex with at
/// most `(d − ε)m` neighbours in `V_j` for some selected edge `V_iV_j`, padded
/// with the highest-indexed remaining vertices. `Δ` is the maximum degree of
/// the selected edge set.
pub fn superregularize_path(pure: &Graph, p: &Partition, edges: &[(usize, usize)], epsilon: Rational, d: Rational) -> Result<Superregularized> {
    require_open_unit("epsilon", &epsilon)?;
    require_unit("d", &d)?;
    if pure.n() != p.n() {
        return domain("partition does not match the graph");
    }
    let clusters = p.clusters();
    let k = clusters.len();
    if k == 0 {
        return domain("no clusters");
    }
    let m = clusters[0].len();
    if clusters.iter().any(|c| c.len() != m) {
        return domain("clusters must have equal sizes");
    }
    let mut deg = vec![0usize; k];
    for &(i, j) in edges {
        if i >= k || j >= k || i == j {
            return domain(format!("edge ({i},{j}) is not a pair of distinct clusters"));
        }
        deg[i] += 1;
        deg[j] += 1;
    }
    let delta = deg.iter().copied().max().unwrap_or(0);
    let host = AnyGraph::Graph(pure);
    let opts = CheckOptions::default();
    for (e, &(i, j)) in edges.iter().enumerate() {
        let dens = density(host, &clusters[i], &clusters[j]);
        if dens <= d {
            return hypothesis(format!("pair ({i},{j}) has density {} ≤ d", format_rational(&dens)));
        }
        if !opts.verdict(host, &clusters[i], &clusters[j], epsilon, e as u64)?.holds {
            return hypothesis(format!("pair ({i},{j}) is not ε-regular"));
        }
    }
    let quota = floor_scaled(&(epsilon * delta as i64), m);
    let n = pure.n();
    let mut low = vec![VertexSet::new(n); k];
    for &(i, j) in edges {
        for (a, b) in [(i, j), (j, i)] {
            let spec = PairSpec::graph(pure, clusters[a].clone(), clusters[b].clone(), epsilon).with_d(d);
            low[a] = low[a].union(&low_degree_vertices(&spec, &clusters[b])?);
        }
    }
    let mut removed = Vec::with_capacity(k);
    let mut subclusters = Vec::with_capacity(k);
    let mut exceptional = p.exceptional_set();
    for i in 0..k {
        if low[i].len() > quota {
            return hypothesis(format!("cluster {i} has {} low-degree vertices, more than ⌊Δεm⌋ = {quota}", low[i].len()));
        }
        let mut out = low[i].clone();
        let mut rest: Vec<usize> = clusters[i].difference(&low[i]).to_vec();
        while out.len() < quota {
            out.insert(rest.pop().expect("quota below cluster size"));
        }
        exceptional = exceptional.union(&out);
        subclusters.push(clusters[i].difference(&out));
        removed.push(out);
    }
    let audit_epsilon = (epsilon * 2).min(Rational::new(999_999, 1_000_000));
    let audit_d = (d - epsilon * (delta as i64 + 1)).max(Rational::zero());
    let mut audits = Vec::with_capacity(edges.len());
    for &(i, j) in edges {
        let spec = PairSpec::graph(pure, subclusters[i].clone(), subclusters[j].clone(), audit_epsilon).with_d(audit_d);
        let mode = if subclusters[i].len().max(subclusters[j].len()) <= opts.cap {
            ScanMode::Exhaustive { cap: opts.cap }
        } else {
            ScanMode::Sampled { samples: opts.samples, seed: opts.seed }
        };
        let holds = !subclusters[i].is_empty() && !subclusters[j].is_empty() && check_pair_superregular(&spec, mode)?.holds;
        audits.push((i, j, holds));
    }
    Ok(Superregularized { subclusters, removed, low_degree: low, exceptional, audits, audit_epsilon, audit_d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{complete_bipartite, cycle_graph, random_graph};
    use crate::rational::rat;

    fn big(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    /// Projects the adjacency matrix onto block-constant matrices entry by entry.
    fn projected_norm(g: &Graph, p: &Partition) -> BigRational {
        let owner = p.class_of();
        let mut total = BigRational::zero();
        for u in 0..g.n() {
            for v in 0..g.n() {
                let (i, j) = (p.class(owner[u]), p.class(owner[v]));
                let mut s = 0i64;
                for a in i.iter() {
                    for b in j.iter() {
                        s += g.has_edge(a, b) as i64;
                    }
                }
                let mean = BigRational::new(BigInt::from(s), BigInt::from((i.len() * j.len()) as i64));
                total += &mean * &mean;
            }
        }
        total
    }

    #[test]
    fn energy_extremes() {
        let g = random_graph(12, 0.4, 3).unwrap();
        let e = g.edge_count() as i64;
        assert_eq!(energy(&g, &Partition::singletons(12)).unwrap().value, big(2 * e));
        let one = energy(&g, &Partition::trivial(12).unwrap()).unwrap();
        assert_eq!(one.value, BigRational::new(BigInt::from(4 * e * e), BigInt::from(144)));
    }

    #[test]
    fn energy_of_four_cycle_matches_projection() {
        let c4 = cycle_graph(4).unwrap();
        let p = Partition::from_lists(4, &[vec![0, 2], vec![1, 3]]).unwrap();
        let rep = energy(&c4, &p).unwrap();
        assert_eq!(rep.value, projected_norm(&c4, &p));
        assert_eq!(rep.value, big(8));
        let q = Partition::from_lists(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(energy(&c4, &q).unwrap().value, projected_norm(&c4, &q));
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::from_lists(4, &[vec![0, 1], vec![1, 2, 3]]).is_err());
        assert!(Partition::from_lists(4, &[vec![0, 1], vec![2]]).is_err());
        assert!(Partition::from_lists(3, &[vec![0, 1, 2], vec![]]).is_err());
        let p = Partition::with_exceptional(3, VertexSet::new(3), vec![VertexSet::range(3, 0..3)]).unwrap();
        assert_eq!(p.exceptional(), Some(0));
        assert!(p.with_balancing(vec![0]).is_err());
    }

    #[test]
    fn balance_refine_examples() {
        let p = Partition::from_lists(10, &[(0..7).collect(), (7..10).collect()]).unwrap();
        let q = balance_refine(&p, rat(1, 2), 10).unwrap();
        let sizes: Vec<usize> = q.classes().iter().map(VertexSet::len).collect();
        assert_eq!(sizes, vec![3, 3, 1, 3]);
        assert_eq!(q.balancing().unwrap(), &[0, 1, 3]);
        assert!(q.is_refinement_of(&p));

        let single = Partition::trivial(8).unwrap();
        let q = balance_refine(&single, rat(1, 4), 8).unwrap();
        assert_eq!(q.classes().iter().map(VertexSet::len).collect::<Vec<_>>(), vec![2, 2, 2, 2]);
        assert_eq!(balance_refine(&q, rat(3, 4), 8).unwrap().classes(), q.classes());

        let many = Partition::singletons(10);
        assert!(matches!(balance_refine(&many, rat(1, 2), 10), Err(LabError::Hypothesis(_))));
    }

    fn half_graph(m: usize) -> Graph {
        let mut g = Graph::new(2 * m);
        for i in 0..m {
            for j in 0..m {
                if i <= j {
                    g.add_edge(i, m + j);
                }
            }
        }
        g
    }

    #[test]
    fn witness_refine_gain() {
        let g = half_graph(6);
        let p = Partition::from_lists(12, &[(0..6).collect(), (6..12).collect()]).unwrap();
        let none = witness_refine(&g, &p, &[], rat(1, 4)).unwrap();
        assert_eq!(none.partition, p);
        assert_eq!(none.gain(), BigRational::zero());
        let w = PairWitness {
            i: 0,
            j: 1,
            x: VertexSet::from_vertices(12, 0..3).unwrap(),
            y: VertexSet::from_vertices(12, 9..12).unwrap(),
        };
        let r = witness_refine(&g, &p, &[w.clone()], rat(1, 4)).unwrap();
        // d(X,Y) = 1 against d(I,J) = 21/36
        assert_eq!(r.gain_bound, BigRational::new(BigInt::from(9 * 15 * 15), BigInt::from(36 * 36)));
        assert!(r.bound_holds());
        assert_eq!(r.partition.len(), 4);
        assert!(witness_refine(&g, &p, &[w.clone(), w], rat(1, 4)).is_err());
    }

    #[test]
    fn shared_class_gets_at_most_four_atoms() {
        let g = random_graph(12, 0.5, 11).unwrap();
        let p = Partition::from_lists(12, &[(0..4).collect(), (4..8).collect(), (8..12).collect()]).unwrap();
        let eps = rat(1, 100);
        let mk = |i, j, x: Vec<usize>, y: Vec<usize>| PairWitness {
            i,
            j,
            x: VertexSet::from_vertices(12, x).unwrap(),
            y: VertexSet::from_vertices(12, y).unwrap(),
        };
        // pick witnesses whose deviation is positive
        let mut ws = Vec::new();
        for (j, ys) in [(1usize, 4..8), (2, 8..12)] {
            'search: for xm in 1u32..16 {
                for ym in 1u32..16 {
                    let x: Vec<usize> = (0..4).filter(|b| xm >> b & 1 == 1).collect();
                    let y: Vec<usize> = ys.clone().enumerate().filter(|(b, _)| ym >> b & 1 == 1).map(|(_, v)| v).collect();
                    let w = mk(0, j, x, y);
                    if validate_witnesses(AnyGraph::Graph(&g), &p, std::slice::from_ref(&w), &eps).is_ok() {
                        ws.push(w);
                        break 'search;
                    }
                }
            }
        }
        assert_eq!(ws.len(), 2);
        let r = witness_refine(&g, &p, &ws, eps).unwrap();
        let in_first = r.partition.classes().iter().filter(|c| c.is_subset(p.class(0))).count();
        assert!(in_first <= 4);
        assert!(r.bound_holds());
    }

    #[test]
    fn complete_and_empty_need_no_boost() {
        for g in [Graph::complete(12), Graph::new(12)] {
            let r = regularity_partition(&g, rat(1, 4), 3).unwrap();
            assert_eq!(r.iterations, 0);
            assert_eq!(r.clusters().len(), 3);
            assert!(r.exceptional().is_empty());
        }
    }

    #[test]
    fn random_graph_terminates_with_increasing_energy() {
        let g = random_graph(60, 0.5, 7).unwrap();
        let r = regularity_partition(&g, rat(9, 20), 2).unwrap();
        assert!(r.iterations as u128 <= iteration_cap(&rat(9, 20)));
        assert!(r.energy_increasing());
        let g = random_graph(40, 0.5, 1).unwrap();
        let r = regularity_partition(&g, rat(1, 5), 4).unwrap();
        assert!(r.iterations >= 1);
        assert!(r.energy_increasing());
        assert!(r.boosts.iter().all(|b| b.gain_exceeds_increment && b.energy_after > b.energy_before));
        assert_eq!(iteration_cap(&rat(9, 20)), 216);
    }

    #[test]
    fn inner_parameter_choice() {
        let (e, k) = inner_parameters(rat(9, 20), rat(1, 20), 2, 60);
        assert_eq!(e, rat(1, 200));
        assert_eq!(k, 23);
        assert_eq!(inner_parameters(rat(1, 2), Rational::zero(), 30, 25), (rat(1, 80), 25));
    }

    #[test]
    fn degree_form_complete_graph() {
        let g = Graph::complete(30);
        let f = degree_form(&g, rat(9, 20), rat(1, 20), 2).unwrap();
        let audit = audit_degree_form(&g, &f).unwrap();
        assert!(audit.all_hold(), "{:?}", audit.failures);
        for c in f.clusters() {
            for u in c.iter() {
                for v in c.iter() {
                    assert!(!f.pure.has_edge(u, v));
                }
            }
        }
        let e = Graph::new(25);
        let f = degree_form(&e, rat(9, 20), rat(1, 20), 2).unwrap();
        assert_eq!(f.pure, e);
        assert!(audit_degree_form(&e, &f).unwrap().all_hold());
    }

    #[test]
    fn degree_form_random_audit() {
        let g = random_graph(60, 0.5, 7).unwrap();
        let f = degree_form(&g, rat(9, 20), rat(1, 20), 2).unwrap();
        let audit = audit_degree_form(&g, &f).unwrap();
        assert!(audit.all_hold(), "{:?}", audit.failures);
    }

    #[test]
    fn hand_built_inner_partition_runs_all_steps() {
        // clusters 0..6, 6..12, 12..18: (0,1) complete, (1,2) a perfect matching, (0,2) empty
        let n = 18;
        let mut g = Graph::new(n);
        for u in 0..6 {
            for v in 6..12 {
                g.add_edge(u, v);
            }
            g.add_edge(6 + u, 12 + u);
        }
        g.add_edge(1, 2);
        let inner = Partition::with_exceptional(n, VertexSet::new(n), (0..3).map(|i| VertexSet::range(n, 6 * i..6 * i + 6)).collect()).unwrap();
        let f = degree_form_with_inner(&g, &inner, rat(9, 10), rat(1, 2), rat(1, 5)).unwrap();
        assert_eq!(f.trace.red_pairs, 1);
        assert_eq!(f.trace.red_edges_deleted, 6);
        assert_eq!(f.trace.evicted_step1, 0);
        assert_eq!(f.trace.blue_pairs, 1);
        assert_eq!(f.trace.internal_edges_deleted, 1);
        assert_eq!(f.trace.chunk_size, 2);
        assert_eq!(f.clusters().len(), 9);
        assert!(!f.pure.has_edge(1, 2));
        assert!(!f.pure.has_edge(6, 12));
        assert!(f.pure.has_edge(0, 6));
        let audit = audit_degree_form(&g, &f).unwrap();
        assert!(audit.out_degree_loss && audit.clusters_empty && audit.equal_sizes);
    }

    #[test]
    fn blue_pairs_mark_and_drop_edges() {
        // one complete pair counts as blue once d + ε' reaches 1
        let n = 12;
        let mut g = Graph::new(n);
        for u in 0..6 {
            for v in 6..12 {
                g.add_edge(u, v);
            }
        }
        let inner = Partition::with_exceptional(n, VertexSet::new(n), vec![VertexSet::range(n, 0..6), VertexSet::range(n, 6..12)]).unwrap();
        let f = degree_form_with_inner(&g, &inner, rat(1, 2), rat(4, 5), rat(1, 5)).unwrap();
        assert_eq!(f.trace.blue_pairs, 1);
        assert_eq!(f.trace.marked_edges, 0);
        assert_eq!(f.trace.blue_edges_deleted, 36);
        assert_eq!(f.pure.edge_count(), 0);
        let f = degree_form_with_inner(&g, &inner, rat(1, 2), rat(1, 5), rat(1, 5)).unwrap();
        assert_eq!(f.trace.blue_pairs, 0);
        assert_eq!(f.pure.edge_count(), 36);
    }

    #[test]
    fn reduced_graph_extremes() {
        let n = 12;
        let p = Partition::with_exceptional(n, VertexSet::new(n), (0..4).map(|i| VertexSet::range(n, 3 * i..3 * i + 3)).collect()).unwrap();
        let mut full = Graph::complete(n);
        for c in p.clusters() {
            let v = c.to_vec();
            for &a in &v {
                for &b in &v {
                    if a < b {
                        full.remove_edge(a, b);
                    }
                }
            }
        }
        let r = reduced_graph(&full, &p, rat(1, 4), rat(1, 2)).unwrap();
        assert_eq!(r.r.edge_count(), 6);
        let r = reduced_graph(&Graph::new(n), &p, rat(1, 4), rat(1, 2)).unwrap();
        assert_eq!(r.r.edge_count(), 0);
        assert!(reduced_graph(&Graph::new(n + 1), &p, rat(1, 4), rat(1, 2)).is_err());
    }

    #[test]
    fn mindeg_on_random_instance() {
        let g = random_graph(40, 0.7, 5).unwrap();
        let f = degree_form(&g, rat(1, 10), rat(1, 5), 2).unwrap();
        let r = reduced_graph(&f.pure, &f.partition, f.epsilon, f.d).unwrap();
        let out = mindeg_audit(&g, &r, None).unwrap();
        assert!(!out.is_violated(), "{out:?}");
    }

    #[test]
    fn superregularize_complete_pairs_only_pads() {
        let g = complete_bipartite(10, 10);
        let p = Partition::with_exceptional(20, VertexSet::new(20), vec![VertexSet::range(20, 0..10), VertexSet::range(20, 10..20)]).unwrap();
        let s = superregularize_path(&g, &p, &[(0, 1)], rat(1, 10), rat(1, 2)).unwrap();
        assert!(s.low_degree.iter().all(VertexSet::is_empty));
        assert_eq!(s.removed[0].to_vec(), vec![9]);
        assert_eq!(s.subclusters[1].len(), 9);
        assert!(s.audit_holds());
    }

    #[test]
    fn superregularize_drops_low_degree_vertices() {
        // K_{20,20} minus every edge at vertex 0 and at vertex 39
        let mut g = complete_bipartite(20, 20);
        for v in 20..40 {
            g.remove_edge(0, v);
        }
        for u in 1..20 {
            g.remove_edge(u, 39);
        }
        let p = Partition::with_exceptional(40, VertexSet::new(40), vec![VertexSet::range(40, 0..20), VertexSet::range(40, 20..40)]).unwrap();
        let s = superregularize_path(&g, &p, &[(0, 1)], rat(3, 10), rat(7, 10)).unwrap();
        assert_eq!(s.low_degree[0].to_vec(), vec![0]);
        assert_eq!(s.low_degree[1].to_vec(), vec![39]);
        assert_eq!(s.removed[0].to_vec(), vec![0, 15, 16, 17, 18, 19]);
        assert_eq!(s.removed[1].to_vec(), vec![34, 35, 36, 37, 38, 39]);
        assert!(s.audit_holds());
    }
}
