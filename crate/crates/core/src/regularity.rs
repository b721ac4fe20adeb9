//! Exhaustive and sampled checks of ε-regularity and superregularity.
//!
//! For a fixed `X` the extreme values of `d(X, Y)` over all `Y` of a given
//! size are attained by taking the `|Y|` vertices with the most (or fewest)
//! neighbours in `X`. The exact scan therefore enumerates every qualifying
//! `X` and decides all `Y` at once from the sorted degree profile; only the
//! witness `Y` is recovered by enumeration.

use crate::error::{check_cap, domain, hypothesis, Result};
use crate::graph::{AnyGraph, Digraph, Graph, VertexSet};
use crate::rational::{ceil_scaled, format_rational, ge_scaled, gt_scaled, le_scaled, require_open_unit, require_unit, Rational};
use fixedbitset::FixedBitSet;
use num_traits::{Signed, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Exhaustive scans refuse sides larger than this unless told otherwise.
pub const DEFAULT_PAIR_CAP: usize = 14;
/// Whole-vertex-set scans for digraphs.
pub const DEFAULT_DIGRAPH_CAP: usize = 14;
/// Hard ceiling for exhaustive scans regardless of the requested cap.
pub const MAX_EXHAUSTIVE_SIDE: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanMode {
    Exhaustive { cap: usize },
    Sampled { samples: usize, seed: u64 },
}

impl Default for ScanMode {
    fn default() -> Self {
        ScanMode::Exhaustive { cap: DEFAULT_PAIR_CAP }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    /// Qualifying subsets whose density is off.
    Subsets,
    /// A single vertex of too low degree; `x` is that vertex.
    Degree,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub x: VertexSet,
    pub y: VertexSet,
    pub density: Rational,
    pub deviation: Rational,
    pub kind: WitnessKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularityVerdict {
    pub holds: bool,
    pub witness: Option<Witness>,
    /// Number of `X` subsets examined; each is tested against all qualifying `Y` at once.
    pub checked_pairs: u64,
    pub sampled: bool,
}

/// A pair `(A, B)` in a host graph together with the parameters `ε` and `d`.
#[derive(Debug, Clone)]
pub struct PairSpec<'a> {
    pub host: AnyGraph<'a>,
    pub a: VertexSet,
    pub b: VertexSet,
    pub epsilon: Rational,
    pub d: Rational,
}

impl<'a> PairSpec<'a> {
    pub fn new(host: AnyGraph<'a>, a: VertexSet, b: VertexSet, epsilon: Rational, d: Rational) -> Self {
        PairSpec { host, a, b, epsilon, d }
    }

    pub fn graph(g: &'a Graph, a: VertexSet, b: VertexSet, epsilon: Rational) -> Self {
        PairSpec { host: AnyGraph::Graph(g), a, b, epsilon, d: Rational::zero() }
    }

    pub fn with_d(mut self, d: Rational) -> Self {
        self.d = d;
        self
    }

    fn validate(&self) -> Result<()> {
        require_open_unit("epsilon", &self.epsilon)?;
        require_unit("d", &self.d)?;
        let n = self.host.n();
        if self.a.universe() != n || self.b.universe() != n {
            return domain("vertex sets must range over the host vertex set");
        }
        if self.a.is_empty() || self.b.is_empty() {
            return domain("pair sides must be non-empty");
        }
        if !self.a.is_disjoint(&self.b) {
            return domain("pair sides must be disjoint");
        }
        Ok(())
    }

    /// `d(A, B)`; for a digraph host only arcs from `A` to `B` count.
    pub fn density(&self) -> Rational {
        match self.host {
            AnyGraph::Graph(g) => g.density(&self.a, &self.b),
            AnyGraph::Digraph(d) => d.density(&self.a, &self.b),
        }
        .expect("validated non-empty sides")
    }

    fn row(&self, v: usize) -> &FixedBitSet {
        match self.host {
            AnyGraph::Graph(g) => g.neighbours(v),
            AnyGraph::Digraph(d) => d.out_neighbours(v),
        }
    }

    fn col(&self, v: usize) -> &FixedBitSet {
        match self.host {
            AnyGraph::Graph(g) => g.neighbours(v),
            AnyGraph::Digraph(d) => d.in_neighbours(v),
        }
    }
}

/// Violation region: `d(X,Y) >= hi` or `d(X,Y) <= lo`.
#[derive(Debug, Clone, Copy)]
struct Band {
    hi: Option<Rational>,
    lo: Option<Rational>,
}

impl Band {
    fn violated(&self, e: usize, x: usize, y: usize) -> bool {
        let cells = x * y;
        self.hi.is_some_and(|h| ge_scaled(e, &h, cells)) || self.lo.is_some_and(|l| !l.is_negative() && le_scaled(e, &l, cells))
    }
}

/// Bipartite adjacency in local coordinates: `cols[j]` lists the `A`-side
/// neighbours of the `j`-th `B`-side vertex.
struct Local {
    a: Vec<usize>,
    b: Vec<usize>,
    cols: Vec<FixedBitSet>,
}

impl Local {
    fn from_pair(spec: &PairSpec) -> Self {
        let a = spec.a.to_vec();
        let b = spec.b.to_vec();
        let cols = b
            .iter()
            .map(|&v| {
                let col = spec.col(v);
                let mut bits = FixedBitSet::with_capacity(a.len());
                for (i, &u) in a.iter().enumerate() {
                    if col.contains(u) {
                        bits.insert(i);
                    }
                }
                bits
            })
            .collect();
        Local { a, b, cols }
    }

    fn from_digraph(g: &Digraph) -> Self {
        let n = g.n();
        Local { a: (0..n).collect(), b: (0..n).collect(), cols: (0..n).map(|v| g.in_neighbours(v).clone()).collect() }
    }

    fn col_masks(&self) -> Vec<u64> {
        self.cols.iter().map(|c| c.ones().fold(0u64, |m, i| m | 1 << i)).collect()
    }
}

/// Returns the smallest violating `|Y|` and whether the top (dense) end violates.
fn extreme_violation(degs: &[usize], x_size: usize, min_y: usize, band: &Band, hist: &mut Vec<usize>) -> Option<(usize, bool)> {
    hist.clear();
    hist.resize(x_size + 1, 0);
    for &d in degs {
        hist[d] += 1;
    }
    let q = degs.len();
    // walk sizes upwards, tracking the top-s and bottom-s sums
    let (mut top, mut bot) = (0usize, 0usize);
    let (mut ti, mut tleft) = (x_size, hist[x_size]);
    let (mut bi, mut bleft) = (0usize, hist[0]);
    for s in 1..=q {
        while tleft == 0 {
            ti -= 1;
            tleft = hist[ti];
        }
        top += ti;
        tleft -= 1;
        while bleft == 0 {
            bi += 1;
            bleft = hist[bi];
        }
        bot += bi;
        bleft -= 1;
        if s < min_y {
            continue;
        }
        if band.hi.is_some_and(|h| ge_scaled(top, &h, x_size * s)) {
            return Some((s, true));
        }
        if band.lo.is_some_and(|l| !l.is_negative() && le_scaled(bot, &l, x_size * s)) {
            return Some((s, false));
        }
    }
    None
}

struct Found {
    x: Vec<usize>,
    y: Vec<usize>,
    e: usize,
}

fn exhaustive_scan(local: &Local, min_x: usize, min_y: usize, band: Band) -> (Option<Found>, u64) {
    let p = local.a.len();
    let q = local.b.len();
    let cols = local.col_masks();
    let full: u64 = (1u64 << p) - 1;
    let qualifying = |upto: u64| (1..=upto).filter(|m| m.count_ones() as usize >= min_x).count() as u64;
    // blocks are scanned in order so the least violating X ends the search early
    let block = 1u64 << 14;
    let mut start = 1u64;
    while start <= full {
        let end = (start + block).min(full + 1);
        let hit = (start as u32..end as u32)
            .into_par_iter()
            .with_min_len(1 << 10)
            .map(u64::from)
            .filter(|&xm| {
                let xs = xm.count_ones() as usize;
                if xs < min_x {
                    return false;
                }
                let degs: Vec<usize> = cols.iter().map(|c| (c & xm).count_ones() as usize).collect();
                extreme_violation(&degs, xs, min_y, &band, &mut Vec::with_capacity(xs + 1)).is_some()
            })
            .min();
        if let Some(xm) = hit {
            let (y, e) = least_y(&cols, xm, q, min_y, &band);
            let x = (0..p).filter(|i| xm >> i & 1 == 1).map(|i| local.a[i]).collect();
            let y = (0..q).filter(|j| y >> j & 1 == 1).map(|j| local.b[j]).collect();
            return (Some(Found { x, y, e }), qualifying(xm));
        }
        start = end;
    }
    (None, qualifying(full))
}

fn least_y(cols: &[u64], xm: u64, q: usize, min_y: usize, band: &Band) -> (u64, usize) {
    let xs = xm.count_ones() as usize;
    let degs: Vec<usize> = cols.iter().map(|c| (c & xm).count_ones() as usize).collect();
    let mut sums = vec![0usize; 1 << q];
    for ym in 1u64..(1u64 << q) {
        let low = ym.trailing_zeros() as usize;
        sums[ym as usize] = sums[(ym & (ym - 1)) as usize] + degs[low];
        let ys = ym.count_ones() as usize;
        if ys >= min_y && band.violated(sums[ym as usize], xs, ys) {
            return (ym, sums[ym as usize]);
        }
    }
    unreachable!("extreme profile reported a violation that no Y realises")
}

fn sampled_scan(local: &Local, min_x: usize, min_y: usize, band: Band, samples: usize, seed: u64) -> (Option<Found>, u64) {
    let p = local.a.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hist = Vec::new();
    let mut checked = 0u64;
    for round in 0..samples.max(1) {
        // first round probes X = A
        let xs: Vec<usize> = if round == 0 {
            (0..p).collect()
        } else {
            let size = rng.gen_range(min_x.max(1)..=p);
            let mut v = sample(&mut rng, p, size).into_vec();
            v.sort_unstable();
            v
        };
        if xs.len() < min_x {
            continue;
        }
        let mut xbits = FixedBitSet::with_capacity(p);
        xs.iter().for_each(|&i| xbits.insert(i));
        let degs: Vec<usize> = local.cols.iter().map(|c| c.intersection_count(&xbits)).collect();
        checked += 1;
        if let Some((s, top)) = extreme_violation(&degs, xs.len(), min_y, &band, &mut hist) {
            let mut order: Vec<usize> = (0..degs.len()).collect();
            if top {
                order.sort_by_key(|&j| (std::cmp::Reverse(degs[j]), j));
            } else {
                order.sort_by_key(|&j| (degs[j], j));
            }
            let mut ys: Vec<usize> = order[..s].to_vec();
            ys.sort_unstable();
            let e = ys.iter().map(|&j| degs[j]).sum();
            return (
                Some(Found { x: xs.iter().map(|&i| local.a[i]).collect(), y: ys.iter().map(|&j| local.b[j]).collect(), e }),
                checked,
            );
        }
    }
    (None, checked)
}

fn run_scan(local: &Local, min_x: usize, min_y: usize, band: Band, mode: ScanMode, what: &'static str) -> Result<(Option<Found>, u64, bool)> {
    match mode {
        ScanMode::Exhaustive { cap } => {
            check_cap(what, local.a.len().max(local.b.len()), cap.min(MAX_EXHAUSTIVE_SIDE))?;
            let (f, c) = exhaustive_scan(local, min_x, min_y, band);
            Ok((f, c, false))
        }
        ScanMode::Sampled { samples, seed } => {
            let (f, c) = sampled_scan(local, min_x, min_y, band, samples, seed);
            Ok((f, c, true))
        }
    }
}

fn subsets_witness(n: usize, found: Found, reference: Option<Rational>) -> Witness {
    let density = Rational::new(found.e as i64, (found.x.len() * found.y.len()) as i64);
    let deviation = match reference {
        Some(r) => (density - r).abs(),
        None => Rational::zero(),
    };
    Witness {
        x: VertexSet::from_vertices(n, found.x).expect("local indices map into the host"),
        y: VertexSet::from_vertices(n, found.y).expect("local indices map into the host"),
        density,
        deviation,
        kind: WitnessKind::Subsets,
    }
}

/// ε-regularity of `(A, B)`: every `X ⊆ A`, `Y ⊆ B` with `|X| ≥ ε|A|`,
/// `|Y| ≥ ε|B|` has `|d(X,Y) − d(A,B)| < ε`. The reported witness is the
/// violating pair with the least `X` bitmask (bit `i` = `i`-th smallest vertex
/// of `A`), then the least `Y` bitmask.
pub fn check_pair_regular(spec: &PairSpec, mode: ScanMode) -> Result<RegularityVerdict> {
    spec.validate()?;
    let local = Local::from_pair(spec);
    let dab = spec.density();
    let eps = spec.epsilon;
    let band = Band { hi: Some(dab + eps), lo: Some(dab - eps) };
    let min_x = ceil_scaled(&eps, local.a.len()).max(1);
    let min_y = ceil_scaled(&eps, local.b.len()).max(1);
    let (found, checked, sampled) = run_scan(&local, min_x, min_y, band, mode, "pair side size")?;
    let n = spec.host.n();
    Ok(RegularityVerdict {
        holds: found.is_none(),
        witness: found.map(|f| subsets_witness(n, f, Some(dab))),
        checked_pairs: checked,
        sampled,
    })
}

fn degree_witness(n: usize, v: usize, other: &VertexSet, deg: usize, d: Rational, v_on_left: bool, own: &VertexSet) -> Witness {
    let single = VertexSet::from_vertices(n, [v]).expect("vertex of host");
    let density = Rational::new(deg as i64, other.len() as i64);
    let (x, y) = if v_on_left { (single, other.clone()) } else { (own.clone(), single) };
    Witness { x, y, density, deviation: d - density, kind: WitnessKind::Degree }
}

/// `(ε, d)`-superregularity: every qualifying `(X, Y)` has `d(X,Y) > d`, every
/// `a ∈ A` has more than `d|B|` neighbours in `B`, and every `b ∈ B` more than
/// `d|A|` in `A`. Degree failures are reported first, as a singleton side.
pub fn check_pair_superregular(spec: &PairSpec, mode: ScanMode) -> Result<RegularityVerdict> {
    spec.validate()?;
    let n = spec.host.n();
    let d = spec.d;
    for v in spec.a.iter() {
        let deg = spec.row(v).intersection_count(spec.b.bits());
        if !gt_scaled(deg, &d, spec.b.len()) {
            return Ok(RegularityVerdict {
                holds: false,
                witness: Some(degree_witness(n, v, &spec.b, deg, d, true, &spec.a)),
                checked_pairs: 0,
                sampled: false,
            });
        }
    }
    for v in spec.b.iter() {
        let deg = spec.col(v).intersection_count(spec.a.bits());
        if !gt_scaled(deg, &d, spec.a.len()) {
            return Ok(RegularityVerdict {
                holds: false,
                witness: Some(degree_witness(n, v, &spec.a, deg, d, false, &spec.a)),
                checked_pairs: 0,
                sampled: false,
            });
        }
    }
    let local = Local::from_pair(spec);
    let eps = spec.epsilon;
    let band = Band { hi: None, lo: Some(d) };
    let min_x = ceil_scaled(&eps, local.a.len()).max(1);
    let min_y = ceil_scaled(&eps, local.b.len()).max(1);
    let (found, checked, sampled) = run_scan(&local, min_x, min_y, band, mode, "pair side size")?;
    Ok(RegularityVerdict {
        holds: found.is_none(),
        witness: found.map(|f| {
            let mut w = subsets_witness(n, f, None);
            w.deviation = d - w.density;
            w
        }),
        checked_pairs: checked,
        sampled,
    })
}

fn check_digraph_params(eps: &Rational, d: &Rational) -> Result<()> {
    require_open_unit("epsilon", eps)?;
    require_unit("d", d)
}

/// A digraph on `n` vertices is ε-regular of density `d` when all
/// `X, Y ⊆ V` (possibly overlapping) with `|X|, |Y| ≥ εn` satisfy
/// `|d(X,Y) − d| < ε`, counting arcs from `X` to `Y`.
pub fn check_digraph_regular(g: &Digraph, epsilon: Rational, d: Rational, mode: ScanMode) -> Result<RegularityVerdict> {
    check_digraph_params(&epsilon, &d)?;
    let n = g.n();
    if n == 0 {
        return domain("empty digraph");
    }
    if let ScanMode::Exhaustive { cap } = mode {
        check_cap("digraph order", n, cap)?;
    }
    let local = Local::from_digraph(g);
    let band = Band { hi: Some(d + epsilon), lo: Some(d - epsilon) };
    let min = ceil_scaled(&epsilon, n).max(1);
    let (found, checked, sampled) = run_scan(&local, min, min, band, mode, "digraph order")?;
    Ok(RegularityVerdict {
        holds: found.is_none(),
        witness: found.map(|f| subsets_witness(n, f, Some(d))),
        checked_pairs: checked,
        sampled,
    })
}

/// `[ε, d]`-superregular: ε-regular of density `d` and `δ⁰ ≥ dn`.
pub fn check_digraph_superregular(g: &Digraph, epsilon: Rational, d: Rational, mode: ScanMode) -> Result<RegularityVerdict> {
    check_digraph_params(&epsilon, &d)?;
    let n = g.n();
    let full = VertexSet::full(n);
    for v in 0..n {
        let deg = g.out_degree(v).min(g.in_degree(v));
        if !ge_scaled(deg, &d, n) {
            let single = VertexSet::from_vertices(n, [v])?;
            let density = Rational::new(deg as i64, n as i64);
            return Ok(RegularityVerdict {
                holds: false,
                witness: Some(Witness { x: single, y: full, density, deviation: d - density, kind: WitnessKind::Degree }),
                checked_pairs: 0,
                sampled: false,
            });
        }
    }
    check_digraph_regular(g, epsilon, d, mode)
}

/// `{a ∈ A : |N(a) ∩ Y| ≤ (d − ε)|Y|}` with `d = spec.d`.
pub fn low_degree_vertices(spec: &PairSpec, y: &VertexSet) -> Result<VertexSet> {
    spec.validate()?;
    if !y.is_subset(&spec.b) {
        return domain("Y must be a subset of B");
    }
    if !ge_scaled(y.len(), &spec.epsilon, spec.b.len()) {
        return hypothesis(format!("|Y| = {} is below ε|B| with ε = {}", y.len(), format_rational(&spec.epsilon)));
    }
    let bound = spec.d - spec.epsilon;
    let n = spec.host.n();
    let mut out = VertexSet::new(n);
    for a in spec.a.iter() {
        let deg = spec.row(a).intersection_count(y.bits());
        if !bound.is_negative() && le_scaled(deg, &bound, y.len()) {
            out.insert(a);
        }
    }
    Ok(out)
}

/// Result of testing one of the pair-perturbation statements on an instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PropertyOutcome {
    /// The hypotheses fail on this instance.
    Vacuous(String),
    Holds,
    Violated(String),
}

impl PropertyOutcome {
    pub fn is_violated(&self) -> bool {
        matches!(self, PropertyOutcome::Violated(_))
    }

    pub fn is_vacuous(&self) -> bool {
        matches!(self, PropertyOutcome::Vacuous(_))
    }
}

fn exhaustive() -> ScanMode {
    ScanMode::Exhaustive { cap: DEFAULT_PAIR_CAP }
}

/// Reusable checks of how regularity behaves under small changes to a pair.
pub mod props {
    use super::*;
    use crate::rational::pow;
    use num_traits::One;

    fn regular(g: &Graph, a: &VertexSet, b: &VertexSet, eps: Rational) -> Result<bool> {
        if eps >= Rational::one() {
            return Ok(true);
        }
        Ok(check_pair_regular(&PairSpec::graph(g, a.clone(), b.clone(), eps), exhaustive())?.holds)
    }

    fn superregular(g: &Graph, a: &VertexSet, b: &VertexSet, eps: Rational, d: Rational) -> Result<bool> {
        let eps = eps.min(Rational::new(999_999, 1_000_000));
        let d = d.max(Rational::zero());
        Ok(check_pair_superregular(&PairSpec::graph(g, a.clone(), b.clone(), eps).with_d(d), exhaustive())?.holds)
    }

    /// In an ε-regular pair of density `d`, fewer than `ε|A|` vertices have at
    /// most `(d − ε)|Y|` neighbours in any `Y ⊆ B` with `|Y| ≥ ε|B|`.
    pub fn neighbours(g: &Graph, a: &VertexSet, b: &VertexSet, eps: Rational, y: &VertexSet) -> Result<PropertyOutcome> {
        if !regular(g, a, b, eps)? {
            return Ok(PropertyOutcome::Vacuous("pair not ε-regular".into()));
        }
        if !y.is_subset(b) || !ge_scaled(y.len(), &eps, b.len()) {
            return Ok(PropertyOutcome::Vacuous("Y too small".into()));
        }
        let spec = PairSpec::graph(g, a.clone(), b.clone(), eps);
        let d = spec.density();
        let low = low_degree_vertices(&spec.with_d(d), y)?;
        if ge_scaled(low.len(), &eps, a.len()) {
            return Ok(PropertyOutcome::Violated(format!("{} low-degree vertices", low.len())));
        }
        Ok(PropertyOutcome::Holds)
    }

    /// Regularity of a pair agrees in a graph and in its complement.
    pub fn complement(g: &Graph, a: &VertexSet, b: &VertexSet, eps: Rational) -> Result<PropertyOutcome> {
        let here = regular(g, a, b, eps)?;
        let there = regular(&g.complement(), a, b, eps)?;
        if here != there {
            return Ok(PropertyOutcome::Violated(format!("regular in G: {here}, in complement: {there}")));
        }
        Ok(PropertyOutcome::Holds)
    }

    /// Large subsets `A' ⊆ A`, `B' ⊆ B` of an ε-regular pair form an
    /// `ε/α`-regular pair of density above `d − ε`, for `ε ≤ α ≤ 1/2`.
    pub fn subsets(g: &Graph, a: &VertexSet, b: &VertexSet, eps: Rational, alpha: Rational, a2: &VertexSet, b2: &VertexSet) -> Result<PropertyOutcome> {
        if alpha < eps || alpha > Rational::new(1, 2) {
            return Ok(PropertyOutcome::Vacuous("α outside [ε, 1/2]".into()));
        }
        if !a2.is_subset(a) || !b2.is_subset(b) || a2.is_empty() || b2.is_empty() {
            return domain("A', B' must be non-empty subsets of A, B");
        }
        if !ge_scaled(a2.len(), &alpha, a.len()) || !ge_scaled(b2.len(), &alpha, b.len()) {
            return Ok(PropertyOutcome::Vacuous("subsets below α".into()));
        }
        if !regular(g, a, b, eps)? {
            return Ok(PropertyOutcome::Vacuous("pair not ε-regular".into()));
        }
        let d = g.density(a, b)?;
        let d2 = g.density(a2, b2)?;
        if d2 <= d - eps {
            return Ok(PropertyOutcome::Violated(format!("density {} not above d − ε", format_rational(&d2))));
        }
        if !regular(g, a2, b2, eps / alpha)? {
            return Ok(PropertyOutcome::Violated("subpair not ε/α-regular".into()));
        }
        Ok(PropertyOutcome::Holds)
    }

    /// Adding at most `√ε|A|` and `√ε|B|` vertices to an ε-regular pair of
    /// density `d > 2√ε` gives a `5ε^{1/4}`-regular pair of density at least
    /// `d − 2ε^{1/4}`. Takes `r = ε^{1/4}` so every quantity stays rational.
    pub fn supersets(g: &Graph, a: &VertexSet, b: &VertexSet, r: Rational, a2: &VertexSet, b2: &VertexSet) -> Result<PropertyOutcome> {
        let eps = pow(&r, 4);
        let sqrt = pow(&r, 2);
        if !a.is_subset(a2) || !b.is_subset(b2) || !a2.is_disjoint(b2) {
            return domain("A', B' must be disjoint supersets of A, B");
        }
        let d = g.density(a, b)?;
        if !(eps < d && sqrt * 2 < d) {
            return Ok(PropertyOutcome::Vacuous("density too low for the statement".into()));
        }
        if !le_scaled(a2.len() - a.len(), &sqrt, a.len()) || !le_scaled(b2.len() - b.len(), &sqrt, b.len()) {
            return Ok(PropertyOutcome::Vacuous("too many added vertices".into()));
        }
        if !regular(g, a, b, eps)? {
            return Ok(PropertyOutcome::Vacuous("pair not ε-regular".into()));
        }
        let d2 = g.density(a2, b2)?;
        if d2 < d - r * 2 {
            return Ok(PropertyOutcome::Violated(format!("density {} below d − 2ε^(1/4)", format_rational(&d2))));
        }
        if !regular(g, a2, b2, r * 5)? {
            return Ok(PropertyOutcome::Violated("enlarged pair not 5ε^(1/4)-regular".into()));
        }
        Ok(PropertyOutcome::Holds)
    }

    /// Removing up to a `√ε` fraction from each side of an `(ε, d)`-superregular
    /// pair leaves a `(√ε, d − √ε)`-superregular pair, when `ε ≤ 1/9` and
    /// `ε² < d`. Takes `r = √ε`.
    pub fn removing_superregular(g: &Graph, a: &VertexSet, b: &VertexSet, r: Rational, d: Rational, a2: &VertexSet, b2: &VertexSet) -> Result<PropertyOutcome> {
        let eps = r * r;
        if eps > Rational::new(1, 9) || eps * eps >= d {
            return Ok(PropertyOutcome::Vacuous("parameters outside the statement".into()));
        }
        if !a2.is_subset(a) || !b2.is_subset(b) || a2.is_empty() || b2.is_empty() {
            return domain("A', B' must be non-empty subsets of A, B");
        }
        let keep = Rational::one() - r;
        if !ge_scaled(a2.len(), &keep, a.len()) || !ge_scaled(b2.len(), &keep, b.len()) {
            return Ok(PropertyOutcome::Vacuous("too many vertices removed".into()));
        }
        if !superregular(g, a, b, eps, d)? {
            return Ok(PropertyOutcome::Vacuous("pair not superregular".into()));
        }
        if !superregular(g, a2, b2, r, d - r)? {
            return Ok(PropertyOutcome::Violated("remaining pair not (√ε, d − √ε)-superregular".into()));
        }
        Ok(PropertyOutcome::Holds)
    }

    /// Adding at most `√ε m` vertices with at least `dm/3` neighbours on the
    /// opposite side to an `(ε, d)`-superregular pair with `|A| = |B| = m`
    /// gives a `(2√ε, d/6)`-superregular pair. Takes `r = √ε`.
    pub fn adding_superregular(g: &Graph, a: &VertexSet, b: &VertexSet, r: Rational, d: Rational, extra_a: &VertexSet, extra_b: &VertexSet) -> Result<PropertyOutcome> {
        let m = a.len();
        if b.len() != m {
            return Ok(PropertyOutcome::Vacuous("sides differ in size".into()));
        }
        let all = a.union(b);
        if !extra_a.is_disjoint(&all) || !extra_b.is_disjoint(&all) || !extra_a.is_disjoint(extra_b) {
            return domain("added vertices must be new and disjoint");
        }
        if !le_scaled(extra_a.len(), &r, m) || !le_scaled(extra_b.len(), &r, m) {
            return Ok(PropertyOutcome::Vacuous("too many added vertices".into()));
        }
        if r >= Rational::one() || !d.is_positive() {
            return Ok(PropertyOutcome::Vacuous("parameters outside the statement".into()));
        }
        let third = d / 3;
        if extra_a.iter().any(|v| !ge_scaled(g.degree_into(v, b), &third, m)) || extra_b.iter().any(|v| !ge_scaled(g.degree_into(v, a), &third, m)) {
            return Ok(PropertyOutcome::Vacuous("added vertex with too few neighbours".into()));
        }
        if !superregular(g, a, b, r * r, d)? {
            return Ok(PropertyOutcome::Vacuous("pair not superregular".into()));
        }
        if !superregular(g, &a.union(extra_a), &b.union(extra_b), r * 2, d / 6)? {
            return Ok(PropertyOutcome::Violated("enlarged pair not (2√ε, d/6)-superregular".into()));
        }
        Ok(PropertyOutcome::Holds)
    }
}

/// Convenience for callers that want a verdict on `(A, B)` regardless of size:
/// exhaustive within `cap`, otherwise sampled with the given seed.
pub fn check_pair_regular_auto(spec: &PairSpec, cap: usize, samples: usize, seed: u64) -> Result<RegularityVerdict> {
    let big = spec.a.len().max(spec.b.len()) > cap;
    let mode = if big { ScanMode::Sampled { samples, seed } } else { ScanMode::Exhaustive { cap } };
    check_pair_regular(spec, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::LabError;
    use crate::rational::rat;

    fn bipartite(p: usize, q: usize, edges: &[(usize, usize)]) -> (Graph, VertexSet, VertexSet) {
        let mut g = Graph::new(p + q);
        for &(i, j) in edges {
            g.add_edge(i, p + j);
        }
        (g, VertexSet::range(p + q, 0..p), VertexSet::range(p + q, p..p + q))
    }

    fn naive_regular(g: &Graph, a: &VertexSet, b: &VertexSet, eps: Rational) -> bool {
        let av = a.to_vec();
        let bv = b.to_vec();
        let dab = g.density(a, b).unwrap();
        for xm in 1u32..1 << av.len() {
            let x = VertexSet::from_vertices(g.n(), (0..av.len()).filter(|i| xm >> i & 1 == 1).map(|i| av[i])).unwrap();
            if !ge_scaled(x.len(), &eps, av.len()) {
                continue;
            }
            for ym in 1u32..1 << bv.len() {
                let y = VertexSet::from_vertices(g.n(), (0..bv.len()).filter(|j| ym >> j & 1 == 1).map(|j| bv[j])).unwrap();
                if ge_scaled(y.len(), &eps, bv.len()) && (g.density(&x, &y).unwrap() - dab).abs() >= eps {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn complete_bipartite_is_regular_for_every_epsilon() {
        let edges: Vec<_> = (0..5).flat_map(|i| (0..5).map(move |j| (i, j))).collect();
        let (g, a, b) = bipartite(5, 5, &edges);
        for eps in [rat(1, 100), rat(1, 2), rat(9, 10)] {
            let v = check_pair_regular(&PairSpec::graph(&g, a.clone(), b.clone(), eps), ScanMode::default()).unwrap();
            assert!(v.holds);
            assert!(v.witness.is_none());
        }
    }

    #[test]
    fn half_empty_pair_has_least_witness() {
        // a0, a1 see everything; a2, a3 see nothing: density 1/2
        let edges: Vec<_> = (0..2).flat_map(|i| (0..4).map(move |j| (i, j))).collect();
        let (g, a, b) = bipartite(4, 4, &edges);
        let v = check_pair_regular(&PairSpec::graph(&g, a, b, rat(1, 4)), ScanMode::default()).unwrap();
        assert!(!v.holds);
        let w = v.witness.unwrap();
        assert_eq!(w.x.to_vec(), vec![0]);
        assert_eq!(w.y.to_vec(), vec![4]);
        assert_eq!(w.deviation, rat(1, 2));
    }

    #[test]
    fn matches_naive_scan_on_small_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..60 {
            let p = rng.gen_range(1..=5);
            let q = rng.gen_range(1..=5);
            let edges: Vec<_> = (0..p).flat_map(|i| (0..q).map(move |j| (i, j))).filter(|_| rng.gen_bool(0.5)).collect();
            let (g, a, b) = bipartite(p, q, &edges);
            let eps = rat(rng.gen_range(1..10), 10);
            let fast = check_pair_regular(&PairSpec::graph(&g, a.clone(), b.clone(), eps), ScanMode::default()).unwrap();
            assert_eq!(fast.holds, naive_regular(&g, &a, &b, eps));
            if let Some(w) = fast.witness {
                assert!(w.deviation >= eps);
                assert!(ge_scaled(w.x.len(), &eps, p) && ge_scaled(w.y.len(), &eps, q));
            }
        }
    }

    #[test]
    fn superregular_reports_isolated_vertex() {
        let edges: Vec<_> = (0..3).flat_map(|i| (0..4).map(move |j| (i, j))).collect();
        let (g, a, b) = bipartite(4, 4, &edges);
        let spec = PairSpec::graph(&g, a, b, rat(1, 4)).with_d(rat(1, 10));
        let v = check_pair_superregular(&spec, ScanMode::default()).unwrap();
        assert!(!v.holds);
        let w = v.witness.unwrap();
        assert_eq!(w.kind, WitnessKind::Degree);
        assert_eq!(w.x.to_vec(), vec![3]);
    }

    #[test]
    fn cap_is_enforced() {
        let g = Graph::new(40);
        let spec = PairSpec::graph(&g, VertexSet::range(40, 0..20), VertexSet::range(40, 20..40), rat(1, 2));
        assert!(matches!(check_pair_regular(&spec, ScanMode::default()), Err(LabError::CapExceeded { .. })));
        let sampled = check_pair_regular(&spec, ScanMode::Sampled { samples: 10, seed: 1 }).unwrap();
        assert!(sampled.holds && sampled.sampled);
    }

    #[test]
    fn rejects_bad_parameters() {
        let g = Graph::new(4);
        let a = VertexSet::range(4, 0..2);
        let b = VertexSet::range(4, 1..4);
        assert!(check_pair_regular(&PairSpec::graph(&g, a.clone(), b, rat(1, 2)), ScanMode::default()).is_err());
        let b = VertexSet::range(4, 2..4);
        assert!(check_pair_regular(&PairSpec::graph(&g, a, b, rat(3, 2)), ScanMode::default()).is_err());
    }

    #[test]
    fn complete_digraph_is_regular_but_cycle_is_not_superregular() {
        let d = Digraph::complete(6);
        let v = check_digraph_regular(&d, rat(1, 2), rat(4, 5), ScanMode::default()).unwrap();
        // d(X, X) drops below 1 because loops are absent
        assert!(v.holds);
        let c = Digraph::directed_cycle(6);
        assert!(!check_digraph_superregular(&c, rat(1, 10), rat(1, 2), ScanMode::default()).unwrap().holds);
    }

    #[test]
    fn low_degree_vertices_follow_threshold() {
        let edges = [(0, 0), (0, 1), (0, 2), (1, 0), (2, 0), (2, 1)];
        let (g, a, b) = bipartite(3, 3, &edges);
        let spec = PairSpec::graph(&g, a, b.clone(), rat(1, 3)).with_d(rat(2, 3));
        let low = low_degree_vertices(&spec, &b).unwrap();
        assert_eq!(low.to_vec(), vec![1]);
    }
}
