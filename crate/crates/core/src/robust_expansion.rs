//! Robust out-, in- and diexpansion: exact checkers with least violators, the
//! degree-sequence condition, and harnesses for the perturbation properties.

use crate::error::{check_cap, domain, LabError, Result};
use crate::graph::{Digraph, VertexSet};
use crate::hamiltonicity::{certify, hamilton_oracle_digraph_capped, Certificate, CertificateKind};
use crate::rational::{ceil_scaled, format_rational, ge_scaled, require_open_unit, Rational};
use crate::regularity::PropertyOutcome;
use crate::szemeredi::{degree_form_digraph_opts, reduced_digraph_opts, CheckOptions};
use crate::AnyGraph;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Default order limit for the exhaustive scan.
pub const DEFAULT_EXPANDER_CAP: usize = 18;
/// Subsets are enumerated as `u32` masks.
pub const MAX_EXPANDER_ORDER: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `RN⁺`: vertices with many in-neighbours in `S`.
    Out,
    /// `RN⁻`: vertices with many out-neighbours in `S`.
    In,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExpansionMode {
    Out,
    In,
    Di,
}

impl ExpansionMode {
    fn directions(self) -> &'static [Direction] {
        match self {
            ExpansionMode::Out => &[Direction::Out],
            ExpansionMode::In => &[Direction::In],
            ExpansionMode::Di => &[Direction::Out, Direction::In],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionSpec {
    pub nu: Rational,
    pub tau: Rational,
    pub mode: ExpansionMode,
}

impl ExpansionSpec {
    pub fn new(nu: Rational, tau: Rational, mode: ExpansionMode) -> Result<Self> {
        require_open_unit("ν", &nu)?;
        require_open_unit("τ", &tau)?;
        if nu > tau {
            return domain(format!("need ν ≤ τ, got ν = {} and τ = {}", format_rational(&nu), format_rational(&tau)));
        }
        Ok(ExpansionSpec { nu, tau, mode })
    }

    pub fn out(nu: Rational, tau: Rational) -> Result<Self> {
        Self::new(nu, tau, ExpansionMode::Out)
    }

    /// The weakened parameters `(ν/2, 2τ)` of the perturbation statements,
    /// without the `τ < 1` check (a `τ ≥ 1/2` leaves no qualifying sets).
    fn halved(&self) -> Self {
        ExpansionSpec { nu: self.nu / 2, tau: self.tau * 2, mode: self.mode }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violator {
    pub set: Vec<usize>,
    pub direction: Direction,
    pub neighbourhood: usize,
    /// `|S| + νn`.
    pub required: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionVerdict {
    pub holds: bool,
    pub violator: Option<Violator>,
    /// Every qualifying set was checked.
    pub exhaustive: bool,
    pub sets_checked: u64,
}

fn rows(d: &Digraph, dir: Direction) -> Vec<u64> {
    match dir {
        Direction::Out => d.in_masks(),
        Direction::In => d.out_masks(),
    }
}

/// `RN⁺_ν(S) = {x : |N⁻(x) ∩ S| ≥ νn}`, or `RN⁻_ν(S)` with out-neighbours.
pub fn robust_neighbourhood(d: &Digraph, s: &VertexSet, nu: Rational, dir: Direction) -> Result<VertexSet> {
    if s.universe() != d.n() {
        return domain("the set does not live on this digraph");
    }
    if s.is_empty() {
        return domain("the set must be nonempty");
    }
    let n = d.n();
    let out: Vec<usize> = (0..n)
        .filter(|&x| {
            let row = match dir {
                Direction::Out => d.in_neighbours(x),
                Direction::In => d.out_neighbours(x),
            };
            ge_scaled(s.intersection_count(row), &nu, n)
        })
        .collect();
    VertexSet::from_vertices(n, out)
}

/// Sizes `s` with `τn < s < (1−τ)n`, as a bit mask.
fn qualifying_sizes(n: usize, tau: &Rational) -> u64 {
    let tn = *tau * n as i64;
    let upper = (Rational::from_integer(1) - tau) * n as i64;
    (0..=n).filter(|&s| Rational::from_integer(s as i64) > tn && Rational::from_integer(s as i64) < upper).fold(0, |m, s| m | 1 << s)
}

fn rn_size(rows: &[u64], s: u64, threshold: u32) -> usize {
    rows.iter().filter(|&&r| (r & s).count_ones() >= threshold).count()
}

struct Scan {
    rows: Vec<u64>,
    threshold: u32,
    extra: usize,
    sizes: u64,
}

impl Scan {
    fn new(d: &Digraph, spec: &ExpansionSpec, dir: Direction) -> Self {
        let n = d.n();
        // integer counts: ≥ νn  ⇔  ≥ ⌈νn⌉
        let t = ceil_scaled(&spec.nu, n);
        Scan { rows: rows(d, dir), threshold: t as u32, extra: t, sizes: qualifying_sizes(n, &spec.tau) }
    }

    fn violates(&self, s: u64) -> bool {
        let k = s.count_ones();
        self.sizes >> k & 1 == 1 && rn_size(&self.rows, s, self.threshold) < k as usize + self.extra
    }

    fn least(&self, n: usize) -> Option<u64> {
        if self.sizes == 0 {
            return None;
        }
        let limit = 1u32 << n;
        (1..limit).into_par_iter().with_min_len(1 << 10).find_first(|&m| self.violates(m as u64)).map(u64::from)
    }
}

fn violator(n: usize, spec: &ExpansionSpec, scan: &Scan, mask: u64, dir: Direction) -> Violator {
    let set: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
    Violator {
        neighbourhood: rn_size(&scan.rows, mask, scan.threshold),
        required: Rational::from_integer(set.len() as i64) + spec.nu * n as i64,
        set,
        direction: dir,
    }
}

fn check_unvalidated(d: &Digraph, spec: &ExpansionSpec, cap: usize) -> Result<ExpansionVerdict> {
    let n = d.n();
    check_cap("order for the exhaustive expansion scan", n, cap.min(MAX_EXPANDER_ORDER))?;
    let mut best: Option<(u64, Direction, Scan)> = None;
    for &dir in spec.mode.directions() {
        let scan = Scan::new(d, spec, dir);
        if let Some(m) = scan.least(n) {
            if best.as_ref().is_none_or(|(b, _, _)| m < *b) {
                best = Some((m, dir, scan));
            }
        }
    }
    let per_direction = (1u64 << n) - 1;
    let sets_checked = per_direction * spec.mode.directions().len() as u64;
    Ok(match best {
        Some((m, dir, scan)) => ExpansionVerdict { holds: false, violator: Some(violator(n, spec, &scan, m, dir)), exhaustive: true, sets_checked },
        None => ExpansionVerdict { holds: true, violator: None, exhaustive: true, sets_checked },
    })
}

/// Exhaustive check over every `S` with `τn < |S| < (1−τ)n`; a failure
/// carries the numerically least violating set.
pub fn check_expander(d: &Digraph, spec: &ExpansionSpec) -> Result<ExpansionVerdict> {
    check_expander_capped(d, spec, DEFAULT_EXPANDER_CAP)
}

pub fn check_expander_capped(d: &Digraph, spec: &ExpansionSpec, cap: usize) -> Result<ExpansionVerdict> {
    ExpansionSpec::new(spec.nu, spec.tau, spec.mode)?;
    check_unvalidated(d, spec, cap)
}

/// Random qualifying sets only; `holds` means no violator was found.
pub fn check_expander_sampled(d: &Digraph, spec: &ExpansionSpec, samples: usize, seed: u64) -> Result<ExpansionVerdict> {
    ExpansionSpec::new(spec.nu, spec.tau, spec.mode)?;
    let n = d.n();
    check_cap("order for the sampled expansion scan", n, 64)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sizes: Vec<usize> = (0..=n).filter(|&s| qualifying_sizes(n, &spec.tau) >> s & 1 == 1).collect();
    let scans: Vec<(Direction, Scan)> = spec.mode.directions().iter().map(|&dir| (dir, Scan::new(d, spec, dir))).collect();
    let mut checked = 0;
    if !sizes.is_empty() {
        for _ in 0..samples {
            let k = sizes[rng.gen_range(0..sizes.len())];
            let mask = sample(&mut rng, n, k).into_iter().fold(0u64, |m, v| m | 1 << v);
            for (dir, scan) in &scans {
                checked += 1;
                if scan.violates(mask) {
                    return Ok(ExpansionVerdict { holds: false, violator: Some(violator(n, spec, scan, mask, *dir)), exhaustive: false, sets_checked: checked });
                }
            }
        }
    }
    Ok(ExpansionVerdict { holds: true, violator: None, exhaustive: false, sets_checked: checked })
}

impl Violator {
    /// Recomputes the robust neighbourhood of the set and confirms the shortfall.
    pub fn revalidate(&self, d: &Digraph, spec: &ExpansionSpec) -> Result<bool> {
        let n = d.n();
        let s = VertexSet::from_vertices(n, self.set.iter().copied())?;
        let rn = robust_neighbourhood(d, &s, spec.nu, self.direction)?;
        let sizes = qualifying_sizes(n, &spec.tau);
        Ok(sizes >> s.len() & 1 == 1 && Rational::from_integer(rn.len() as i64) < Rational::from_integer(s.len() as i64) + spec.nu * n as i64)
    }
}

/// The degree sequence condition with parameter `η`; subscripts `n − i − ηn` are floored.
pub fn robdegseq_condition(d: &Digraph, eta: Rational) -> Result<Certificate> {
    require_open_unit("η", &eta)?;
    certify(AnyGraph::Digraph(d), &CertificateKind::RobDegSeq(eta))
}

fn delete_vertices(d: &Digraph, v0: &[usize]) -> Digraph {
    let keep: Vec<usize> = (0..d.n()).filter(|v| !v0.contains(v)).collect();
    d.induced(&keep)
}

fn describe(v: &Violator) -> String {
    format!("{:?} set {:?} has |RN| = {} < {}", v.direction, v.set, v.neighbourhood, format_rational(&v.required))
}

/// Deleting at most `νn/4` vertices from a robust `(ν, τ)`-expander leaves a
/// robust `(ν/2, 2τ)`-expander.
pub fn removing_property(d: &Digraph, spec: &ExpansionSpec, v0: &[usize]) -> Result<PropertyOutcome> {
    let n = d.n();
    if let Some(&v) = v0.iter().find(|&&v| v >= n) {
        return Err(LabError::VertexOutOfRange { vertex: v, n });
    }
    if Rational::from_integer(4 * v0.len() as i64) > spec.nu * n as i64 {
        return Ok(PropertyOutcome::Vacuous(format!("|V₀| = {} exceeds νn/4", v0.len())));
    }
    if !check_expander(d, spec)?.holds {
        return Ok(PropertyOutcome::Vacuous("not a robust expander".into()));
    }
    let smaller = delete_vertices(d, v0);
    Ok(match check_unvalidated(&smaller, &spec.halved(), DEFAULT_EXPANDER_CAP)?.violator {
        None => PropertyOutcome::Holds,
        Some(v) => PropertyOutcome::Violated(describe(&v)),
    })
}

/// `bigger` is `d` (on its first `n` vertices) plus at most `ν²n` new vertices
/// with arbitrary adjacency; it should be a robust `(ν/2, 2τ)`-expander.
pub fn adding_property(d: &Digraph, spec: &ExpansionSpec, bigger: &Digraph) -> Result<PropertyOutcome> {
    let n = d.n();
    if bigger.n() < n || bigger.induced(&(0..n).collect::<Vec<_>>()) != *d {
        return domain("the larger digraph must contain the original on its first vertices");
    }
    let added = bigger.n() - n;
    if Rational::from_integer(added as i64) > spec.nu * spec.nu * n as i64 {
        return Ok(PropertyOutcome::Vacuous(format!("{added} new vertices exceed ν²n")));
    }
    if !check_expander(d, spec)?.holds {
        return Ok(PropertyOutcome::Vacuous("not a robust expander".into()));
    }
    Ok(match check_unvalidated(bigger, &spec.halved(), DEFAULT_EXPANDER_CAP)?.violator {
        None => PropertyOutcome::Holds,
        Some(v) => PropertyOutcome::Violated(describe(&v)),
    })
}

/// Appends `extra` vertices joined to and from the rest with probability `p`.
pub fn add_random_vertices(d: &Digraph, extra: usize, p: f64, seed: u64) -> Result<Digraph> {
    if !(0.0..=1.0).contains(&p) {
        return domain("p must lie in [0,1]");
    }
    let n = d.n();
    let mut g = Digraph::new(n + extra);
    for (u, v) in d.arcs() {
        g.add_arc(u, v);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for u in n..n + extra {
        for v in 0..n + extra {
            if u != v {
                if rng.gen_bool(p) {
                    g.add_arc(u, v);
                }
                if v < n && rng.gen_bool(p) {
                    g.add_arc(v, u);
                }
            }
        }
    }
    Ok(g)
}

/// A robust `(ν, τ)`-outexpander with `δ⁰ ≥ ηn` is a robust `(ν³, 2τ)`-inexpander.
pub fn inout_property(d: &Digraph, nu: Rational, tau: Rational, eta: Rational) -> Result<PropertyOutcome> {
    let spec = ExpansionSpec::out(nu, tau)?;
    let n = d.n();
    if !ge_scaled(d.min_semidegree(), &eta, n) {
        return Ok(PropertyOutcome::Vacuous("δ⁰ < ηn".into()));
    }
    if !check_expander(d, &spec)?.holds {
        return Ok(PropertyOutcome::Vacuous("not a robust outexpander".into()));
    }
    let target = ExpansionSpec { nu: nu * nu * nu, tau: tau * 2, mode: ExpansionMode::In };
    Ok(match check_unvalidated(d, &target, DEFAULT_EXPANDER_CAP)?.violator {
        None => PropertyOutcome::Holds,
        Some(v) => PropertyOutcome::Violated(describe(&v)),
    })
}

/// A robust outexpander with `δ⁰ ≥ ηn` has a Hamilton cycle (checked by the oracle).
pub fn expander_hamilton_property(d: &Digraph, spec: &ExpansionSpec, eta: Rational) -> Result<PropertyOutcome> {
    if !ge_scaled(d.min_semidegree(), &eta, d.n()) {
        return Ok(PropertyOutcome::Vacuous("δ⁰ < ηn".into()));
    }
    if !check_expander(d, spec)?.holds {
        return Ok(PropertyOutcome::Vacuous("not a robust expander".into()));
    }
    Ok(match hamilton_oracle_digraph_capped(d, DEFAULT_EXPANDER_CAP)? {
        Some(_) => PropertyOutcome::Holds,
        None => PropertyOutcome::Violated("no Hamilton cycle".into()),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedExpansionAudit {
    pub clusters: usize,
    pub exceptional: usize,
    pub reduced_min_semidegree: usize,
    /// `δ⁰(R) ≥ η|R|/2`.
    pub semidegree_holds: bool,
    /// `R` is a robust `(ν/2, 2τ)`-outexpander.
    pub expansion: ExpansionVerdict,
}

impl ReducedExpansionAudit {
    pub fn all_hold(&self) -> bool {
        self.semidegree_holds && self.expansion.holds
    }
}

/// Runs the digraph degree form and checks whether the reduced digraph
/// inherits expansion and semidegree. An audit, not a guarantee.
pub fn reduced_expansion_audit(
    d: &Digraph,
    epsilon: Rational,
    density: Rational,
    k0: usize,
    spec: &ExpansionSpec,
    eta: Rational,
    opts: &CheckOptions,
) -> Result<ReducedExpansionAudit> {
    let form = degree_form_digraph_opts(d, epsilon, density, k0, opts)?;
    let reduced = reduced_digraph_opts(&form.pure, &form.partition, epsilon, density, opts)?;
    let r = &reduced.r;
    let k = r.n();
    let semi = r.min_semidegree();
    let expansion = check_unvalidated(r, &ExpansionSpec { nu: spec.nu / 2, tau: spec.tau * 2, mode: ExpansionMode::Out }, DEFAULT_EXPANDER_CAP)?;
    Ok(ReducedExpansionAudit {
        clusters: k,
        exceptional: form.exceptional().len(),
        reduced_min_semidegree: semi,
        semidegree_holds: k > 0 && ge_scaled(2 * semi, &eta, k),
        expansion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{random_digraph, random_tournament};
    use crate::rational::rat;

    fn naive(d: &Digraph, spec: &ExpansionSpec, dir: Direction) -> Option<Vec<usize>> {
        let n = d.n();
        for mask in 1u64..1 << n {
            let s = VertexSet::from_mask(n, mask);
            let k = Rational::from_integer(s.len() as i64);
            if !(k > spec.tau * n as i64 && k < (Rational::from_integer(1) - spec.tau) * n as i64) {
                continue;
            }
            let rn = robust_neighbourhood(d, &s, spec.nu, dir).unwrap();
            if Rational::from_integer(rn.len() as i64) < k + spec.nu * n as i64 {
                return Some(s.to_vec());
            }
        }
        None
    }

    #[test]
    fn neighbourhood_examples() {
        let k = Digraph::complete(6);
        let s = VertexSet::from_vertices(6, [0, 1]).unwrap();
        assert_eq!(robust_neighbourhood(&k, &s, rat(1, 6), Direction::Out).unwrap().len(), 6);
        assert!(robust_neighbourhood(&Digraph::new(6), &s, rat(1, 6), Direction::Out).unwrap().is_empty());
        let c8 = Digraph::directed_cycle(8);
        let s = VertexSet::range(8, 0..4);
        assert_eq!(robust_neighbourhood(&c8, &s, rat(1, 8), Direction::Out).unwrap().to_vec(), vec![1, 2, 3, 4]);
        assert_eq!(robust_neighbourhood(&c8, &s, rat(1, 8), Direction::In).unwrap().to_vec(), vec![0, 1, 2, 7]);
        assert!(robust_neighbourhood(&c8, &VertexSet::new(8), rat(1, 8), Direction::Out).is_err());
    }

    #[test]
    fn checker_examples() {
        let spec = ExpansionSpec::out(rat(1, 10), rat(1, 5)).unwrap();
        assert!(check_expander(&Digraph::complete(10), &spec).unwrap().holds);
        let spec = ExpansionSpec::out(rat(1, 5), rat(1, 5)).unwrap();
        let v = check_expander(&Digraph::directed_cycle(10), &spec).unwrap();
        assert!(!v.holds);
        let viol = v.violator.unwrap();
        assert_eq!(viol.neighbourhood, 0);
        assert!(viol.revalidate(&Digraph::directed_cycle(10), &spec).unwrap());
        assert!(ExpansionSpec::out(rat(1, 2), rat(1, 3)).is_err());
        assert!(check_expander(&Digraph::complete(19), &ExpansionSpec::out(rat(1, 10), rat(1, 5)).unwrap()).is_err());
    }

    #[test]
    fn least_violator_matches_naive_scan() {
        for seed in 0..30 {
            let d = random_digraph(9, 0.45, seed).unwrap();
            for mode in [ExpansionMode::Out, ExpansionMode::In] {
                let spec = ExpansionSpec::new(rat(1, 9), rat(2, 9), mode).unwrap();
                let dir = if mode == ExpansionMode::Out { Direction::Out } else { Direction::In };
                let got = check_expander(&d, &spec).unwrap().violator.map(|v| v.set);
                // the naive scan walks masks in the same numeric order
                assert_eq!(got, naive(&d, &spec, dir), "seed {seed}");
            }
        }
    }

    #[test]
    fn di_mode_needs_both() {
        let t = random_tournament(13, 5);
        let spec = ExpansionSpec::new(rat(1, 13), rat(1, 4), ExpansionMode::Di).unwrap();
        let di = check_expander(&t, &spec).unwrap();
        let out = check_expander(&t, &ExpansionSpec { mode: ExpansionMode::Out, ..spec.clone() }).unwrap();
        let inn = check_expander(&t, &ExpansionSpec { mode: ExpansionMode::In, ..spec.clone() }).unwrap();
        assert_eq!(di.holds, out.holds && inn.holds);
        if let Some(v) = di.violator {
            assert!(v.revalidate(&t, &spec).unwrap());
        }
    }

    #[test]
    fn sampled_mode_finds_cycle_violators() {
        let spec = ExpansionSpec::out(rat(1, 5), rat(1, 5)).unwrap();
        let v = check_expander_sampled(&Digraph::directed_cycle(30), &spec, 20, 1).unwrap();
        assert!(!v.holds && !v.exhaustive);
        assert!(v.violator.unwrap().revalidate(&Digraph::directed_cycle(30), &spec).unwrap());
    }

    #[test]
    fn degree_sequence_condition() {
        assert!(robdegseq_condition(&Digraph::complete(8), rat(1, 8)).unwrap().satisfied);
        let c = robdegseq_condition(&Digraph::directed_cycle(8), rat(2, 8)).unwrap();
        assert_eq!((c.satisfied, c.failing_index), (false, Some(1)));
        assert!(robdegseq_condition(&Digraph::complete(8), rat(0, 1)).is_err());
    }

    #[test]
    fn perturbations_of_complete_digraphs() {
        let d = Digraph::complete(12);
        let spec = ExpansionSpec::out(rat(1, 3), rat(1, 3)).unwrap();
        assert_eq!(removing_property(&d, &spec, &[0]).unwrap(), PropertyOutcome::Holds);
        assert!(removing_property(&d, &spec, &[0, 1]).unwrap().is_vacuous());
        let bigger = add_random_vertices(&d, 1, 0.5, 3).unwrap();
        assert_eq!(adding_property(&d, &spec, &bigger).unwrap(), PropertyOutcome::Holds);
        assert!(adding_property(&Digraph::new(12), &spec, &bigger).is_err());
    }

    #[test]
    fn inout_and_hamiltonicity_on_tournaments() {
        for seed in 0..10 {
            let t = random_tournament(9, seed);
            let spec = ExpansionSpec::out(rat(1, 9), rat(2, 9)).unwrap();
            assert!(!inout_property(&t, rat(1, 9), rat(2, 9), rat(1, 9)).unwrap().is_violated());
            assert!(!expander_hamilton_property(&t, &spec, rat(1, 9)).unwrap().is_violated());
        }
    }

    #[test]
    fn reduced_expansion_runs() {
        let d = random_digraph(16, 0.6, 2).unwrap();
        let spec = ExpansionSpec::out(rat(1, 6), rat(1, 6)).unwrap();
        let a = reduced_expansion_audit(&d, rat(9, 20), rat(1, 20), 2, &spec, rat(1, 4), &CheckOptions::default()).unwrap();
        assert!(a.clusters >= 2);
    }
}
