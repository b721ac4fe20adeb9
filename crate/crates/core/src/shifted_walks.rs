//! Shifted walks and skewed traverses in a reduced digraph carrying a
//! 1-factor, and the substitution step that moves one unit of load between
//! clusters.

use crate::error::{domain, LabError, Result};
use crate::graph::Digraph;
use crate::hamiltonicity::{one_factor, CycleCover, OneFactorOutcome};
use std::collections::VecDeque;

/// A reduced digraph together with a 1-factor `F` and its successor and predecessor maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorContext {
    pub r: Digraph,
    pub factor: CycleCover,
    pub succ: Vec<usize>,
    pub pred: Vec<usize>,
    pub cycle_of: Vec<usize>,
}

impl FactorContext {
    pub fn new(r: Digraph, factor: CycleCover) -> Result<Self> {
        if !factor.is_valid(&r) {
            return domain("F is not a 1-factor of R");
        }
        let k = r.n();
        Ok(FactorContext { succ: factor.successors(k), pred: factor.predecessors(k), cycle_of: factor.cycle_of(k), r, factor })
    }

    /// Uses the 1-factor found by bipartite matching.
    pub fn from_one_factor(r: Digraph) -> Result<Self> {
        match one_factor(&r)? {
            OneFactorOutcome::Factor(f) => Self::new(r, f),
            OneFactorOutcome::NoFactor { violator, .. } => Err(LabError::Hypothesis(format!("R has no 1-factor (Hall violator of size {})", violator.len()))),
        }
    }

    /// `F = V_0 V_1 … V_{k−1}` as the given Hamilton cycle of `r`.
    pub fn with_hamilton_cycle(r: Digraph, order: &[usize]) -> Result<Self> {
        let k = r.n();
        let mut succ = vec![usize::MAX; k];
        for i in 0..order.len() {
            let v = order[i];
            if v >= k {
                return Err(LabError::VertexOutOfRange { vertex: v, n: k });
            }
            succ[v] = order[(i + 1) % order.len()];
        }
        if order.len() != k || succ.contains(&usize::MAX) {
            return domain("the cycle must visit every cluster once");
        }
        Self::new(r, CycleCover::from_successors(&succ)?)
    }

    pub fn k(&self) -> usize {
        self.r.n()
    }

    pub fn is_hamiltonian(&self) -> bool {
        self.factor.cycles.len() == 1
    }

    fn check_cluster(&self, c: usize) -> Result<()> {
        if c >= self.k() {
            return Err(LabError::VertexOutOfRange { vertex: c, n: self.k() });
        }
        Ok(())
    }
}

/// `W(A,B) = X_1 C_1 X⁻_1 X_2 C_2 X⁻_2 … X_t C_t X⁻_t X_{t+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftedWalk {
    /// `X_1 = A, …, X_{t+1} = B`.
    pub entries: Vec<usize>,
    /// `X⁻_1, …, X⁻_t`.
    pub exits: Vec<usize>,
}

impl ShiftedWalk {
    /// Number of cycles traversed.
    pub fn cycles_traversed(&self) -> usize {
        self.exits.len()
    }

    /// Clusters `X_2, X⁻_2, …, X_t, X⁻_t`.
    pub fn internal(&self) -> Vec<usize> {
        let t = self.exits.len();
        (1..t).flat_map(|i| [self.entries[i], self.exits[i]]).collect()
    }

    /// The full cluster sequence, going once round `C_i` from each `X_i`.
    pub fn expand(&self, ctx: &FactorContext) -> Vec<usize> {
        let mut seq = Vec::new();
        for (i, &x) in self.entries.iter().enumerate().take(self.exits.len()) {
            let mut v = x;
            loop {
                seq.push(v);
                if v == self.exits[i] {
                    break;
                }
                v = ctx.succ[v];
            }
        }
        seq.push(*self.entries.last().expect("a walk has at least one entry"));
        seq
    }
}

/// Structural checks on a shifted walk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkAudit {
    pub endpoints: bool,
    pub exits_are_predecessors: bool,
    pub hops_are_edges: bool,
    pub avoids_internally: bool,
    /// `W ∖ B` visits all clusters of each touched cycle equally often.
    pub equal_visits: bool,
    pub unique_entries: bool,
    pub unique_exits: bool,
}

impl WalkAudit {
    pub fn all_hold(&self) -> bool {
        self.endpoints && self.exits_are_predecessors && self.hops_are_edges && self.avoids_internally && self.equal_visits && self.unique_entries && self.unique_exits
    }
}

fn distinct(v: &[usize]) -> bool {
    let mut s = v.to_vec();
    s.sort_unstable();
    s.windows(2).all(|w| w[0] != w[1])
}

fn equal_on_cycles(ctx: &FactorContext, counts: &[usize]) -> bool {
    ctx.factor.cycles.iter().all(|c| c.iter().all(|&v| counts[v] == counts[c[0]]))
}

pub fn audit_shifted_walk(ctx: &FactorContext, w: &ShiftedWalk, a: usize, b: usize, avoid: &[usize]) -> WalkAudit {
    let t = w.exits.len();
    let ok_shape = w.entries.len() == t + 1;
    let mut counts = vec![0; ctx.k()];
    if ok_shape {
        let seq = w.expand(ctx);
        for &v in &seq[..seq.len() - 1] {
            counts[v] += 1;
        }
    }
    WalkAudit {
        endpoints: ok_shape && w.entries[0] == a && w.entries[t] == b,
        exits_are_predecessors: ok_shape && (0..t).all(|i| w.exits[i] == ctx.pred[w.entries[i]]),
        hops_are_edges: ok_shape && (0..t).all(|i| ctx.r.has_arc(w.exits[i], w.entries[i + 1])),
        avoids_internally: w.internal().iter().all(|c| !avoid.contains(c)),
        equal_visits: ok_shape && equal_on_cycles(ctx, &counts),
        unique_entries: distinct(&w.entries[1.min(w.entries.len())..]),
        unique_exits: distinct(&w.exits),
    }
}

/// Breadth-first search over entry clusters: from entry `X` the next entry is
/// any out-neighbour of `X⁻`. Intermediate entries and their exits must avoid
/// `avoid`; `A`, `A⁻` and `B` are exempt. Returns a walk with the least
/// number of traversed cycles, ties broken towards smaller cluster indices,
/// or `None` if that number exceeds `t_max`.
pub fn find_shifted_walk(ctx: &FactorContext, a: usize, b: usize, avoid: &[usize], t_max: usize) -> Result<Option<ShiftedWalk>> {
    ctx.check_cluster(a)?;
    ctx.check_cluster(b)?;
    if a == b {
        return Ok(Some(ShiftedWalk { entries: vec![a], exits: Vec::new() }));
    }
    let k = ctx.k();
    let blocked: Vec<bool> = (0..k).map(|c| avoid.contains(&c)).collect();
    let mut parent = vec![usize::MAX; k];
    let mut depth = vec![usize::MAX; k];
    depth[a] = 0;
    let mut queue = VecDeque::from([a]);
    while let Some(x) = queue.pop_front() {
        if depth[x] >= t_max {
            continue;
        }
        for y in ctx.r.out_neighbours(ctx.pred[x]).ones() {
            if depth[y] != usize::MAX {
                continue;
            }
            if y != b && (blocked[y] || blocked[ctx.pred[y]]) {
                continue;
            }
            depth[y] = depth[x] + 1;
            parent[y] = x;
            if y == b {
                let mut entries = vec![b];
                let mut v = b;
                while v != a {
                    v = parent[v];
                    entries.push(v);
                }
                entries.reverse();
                let exits = entries[..entries.len() - 1].iter().map(|&e| ctx.pred[e]).collect();
                return Ok(Some(ShiftedWalk { entries, exits }));
            }
            queue.push_back(y);
        }
    }
    Ok(None)
}

/// `T(A,B) = A V_{i_1}, V_{i_1−1} V_{i_2}, …, V_{i_t−1} B`; its length is `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewedTraverse {
    pub edges: Vec<(usize, usize)>,
}

impl SkewedTraverse {
    pub fn length(&self) -> usize {
        self.edges.len() - 1
    }

    /// Sources of the listed edges: `A, V_{i_1−1}, …`.
    pub fn sources(&self) -> Vec<usize> {
        self.edges.iter().map(|e| e.0).collect()
    }

    /// Every pair is an arc of `R` and each source after the first is the
    /// predecessor of the previous target.
    pub fn is_valid(&self, ctx: &FactorContext, a: usize, b: usize) -> bool {
        !self.edges.is_empty()
            && self.edges[0].0 == a
            && self.edges.last().is_some_and(|e| e.1 == b)
            && self.edges.iter().all(|&(u, v)| ctx.r.has_arc(u, v))
            && self.edges.windows(2).all(|w| w[1].0 == ctx.pred[w[0].1])
    }

    /// The shifted walk `A V_{i_1} F V_{i_1−1} V_{i_2} … F V_{i_t−1} B`:
    /// after each edge except the last it goes once round `F`.
    pub fn to_walk(&self, ctx: &FactorContext) -> Vec<usize> {
        let mut seq = vec![self.edges[0].0];
        for (i, &(_, v)) in self.edges.iter().enumerate() {
            if i + 1 == self.edges.len() {
                seq.push(v);
                break;
            }
            let mut x = v;
            loop {
                seq.push(x);
                x = ctx.succ[x];
                if x == v {
                    break;
                }
            }
        }
        seq
    }
}

/// Shortest skewed traverse from `a` to `b`, with `F` a Hamilton cycle of `R`.
pub fn find_skewed_traverse(ctx: &FactorContext, a: usize, b: usize) -> Result<Option<SkewedTraverse>> {
    ctx.check_cluster(a)?;
    ctx.check_cluster(b)?;
    if !ctx.is_hamiltonian() {
        return domain("skewed traverses need F to be a single Hamilton cycle");
    }
    let k = ctx.k();
    // states are edge sources; from source s any arc s → y either ends at b or makes pred(y) the next source
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; k];
    let mut seen = vec![false; k];
    seen[a] = true;
    let mut queue = VecDeque::from([a]);
    while let Some(s) = queue.pop_front() {
        for y in ctx.r.out_neighbours(s).ones() {
            if y == b {
                let mut edges = vec![(s, b)];
                let mut src = s;
                while let Some((prev, target)) = parent[src] {
                    edges.push((prev, target));
                    src = prev;
                }
                edges.reverse();
                return Ok(Some(SkewedTraverse { edges }));
            }
            let next = ctx.pred[y];
            if !seen[next] {
                seen[next] = true;
                parent[next] = Some((s, y));
                queue.push_back(next);
            }
        }
    }
    Ok(None)
}

/// Per-cluster load `a(i)`, the neutral-pair budget of each cluster, and the target `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterAssignment {
    pub a: Vec<usize>,
    pub neutral_slots: Vec<usize>,
    pub m: usize,
}

impl ClusterAssignment {
    pub fn new(a: Vec<usize>, neutral_slots: Vec<usize>, m: usize) -> Result<Self> {
        if a.len() != neutral_slots.len() {
            return domain("loads and neutral slots must have one entry per cluster");
        }
        Ok(ClusterAssignment { a, neutral_slots, m })
    }

    pub fn is_balanced(&self) -> bool {
        self.a.iter().all(|&x| x == self.m)
    }

    /// `max_i |a(i) − m|`.
    pub fn imbalance(&self) -> usize {
        self.a.iter().map(|&x| x.abs_diff(self.m)).max().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.a.iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RebalanceMode {
    /// Replace neutral-pair sections along a skewed traverse.
    Traverse,
    /// Replace copies of `F` by a pair of shifted walks.
    Walk,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Recipe {
    Traverse {
        traverse: SkewedTraverse,
        /// Clusters whose neutral slots were used.
        consumed: Vec<usize>,
    },
    Walk {
        first: SkewedTraverse,
        second: SkewedTraverse,
        /// `W(V_{i−1}, V_j) W(V_j, V_{i+1}) F V_{i−1}`, ending at `V_{i−1}`.
        walk: Vec<usize>,
        /// The walk replaces this many copies of `F`.
        copies: usize,
    },
}

/// Moves one unit of load from `i_over` to `j_under`.
pub fn rebalance(assign: &ClusterAssignment, ctx: &FactorContext, i_over: usize, j_under: usize, mode: RebalanceMode) -> Result<(ClusterAssignment, Recipe)> {
    ctx.check_cluster(i_over)?;
    ctx.check_cluster(j_under)?;
    if assign.a.len() != ctx.k() {
        return domain("the assignment must have one load per cluster");
    }
    if assign.a[i_over] <= assign.m || assign.a[j_under] >= assign.m {
        return domain(format!("need a({i_over}) > m and a({j_under}) < m"));
    }
    if !ctx.is_hamiltonian() {
        return domain("rebalancing needs F to be a Hamilton cycle");
    }
    let before = ctx.pred[i_over];
    let mut next = assign.clone();
    next.a[i_over] -= 1;
    next.a[j_under] += 1;
    match mode {
        RebalanceMode::Traverse => {
            let traverse = find_skewed_traverse(ctx, before, j_under)?.ok_or_else(|| LabError::Infeasible(format!("no skewed traverse from {before} to {j_under}")))?;
            let consumed = traverse.sources();
            for &c in &consumed {
                if next.neutral_slots[c] == 0 {
                    return Err(LabError::Infeasible(format!("cluster {c} has no neutral slot left")));
                }
                next.neutral_slots[c] -= 1;
            }
            Ok((next, Recipe::Traverse { traverse, consumed }))
        }
        RebalanceMode::Walk => {
            let after = ctx.succ[i_over];
            // both walks are nontrivial even when their ends coincide, so each visits every cluster equally
            let first = find_skewed_traverse(ctx, before, j_under)?.ok_or_else(|| LabError::Infeasible(format!("no shifted walk from {before} to {j_under}")))?;
            let second = find_skewed_traverse(ctx, j_under, after)?.ok_or_else(|| LabError::Infeasible(format!("no shifted walk from {j_under} to {after}")))?;
            let mut walk = first.to_walk(ctx);
            walk.pop();
            walk.extend(second.to_walk(ctx));
            // then along F from V_{i+1} to V_{i−1}
            let mut x = ctx.succ[after];
            while x != ctx.succ[before] {
                walk.push(x);
                x = ctx.succ[x];
            }
            let copies = (walk.len() - 1) / ctx.k();
            Ok((next, Recipe::Walk { first, second, walk, copies }))
        }
    }
}

/// Load change made by a recipe: visits of the replacement minus visits of what it replaces.
pub fn recipe_delta(ctx: &FactorContext, recipe: &Recipe) -> Vec<i64> {
    let k = ctx.k();
    let mut delta = vec![0i64; k];
    match recipe {
        Recipe::Traverse { traverse, .. } => {
            // each section V_p V_{p+1} V_p becomes V_p Y V_p
            for &(s, y) in &traverse.edges {
                delta[ctx.succ[s]] -= 1;
                delta[y] += 1;
            }
        }
        Recipe::Walk { walk, copies, .. } => {
            for &v in &walk[..walk.len() - 1] {
                delta[v] += 1;
            }
            for d in delta.iter_mut() {
                *d -= *copies as i64;
            }
        }
    }
    delta
}

/// Rebalances step by step, always pairing the least overloaded cluster with
/// the least underloaded one, until balanced.
pub fn balance(assign: &ClusterAssignment, ctx: &FactorContext, mode: RebalanceMode) -> Result<(ClusterAssignment, Vec<Recipe>)> {
    if assign.total() != assign.m * assign.a.len() {
        return domain("total load differs from k·m, so no balanced assignment exists");
    }
    let mut cur = assign.clone();
    let mut steps = Vec::new();
    while let (Some(i), Some(j)) = (cur.a.iter().position(|&x| x > cur.m), cur.a.iter().position(|&x| x < cur.m)) {
        let (next, recipe) = rebalance(&cur, ctx, i, j, mode)?;
        cur = next;
        steps.push(recipe);
    }
    Ok((cur, steps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::random_digraph;

    fn complete_ctx(k: usize) -> FactorContext {
        FactorContext::with_hamilton_cycle(Digraph::complete(k), &(0..k).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn walks_in_complete_digraphs() {
        let ctx = complete_ctx(6);
        let w = find_shifted_walk(&ctx, 2, 4, &[], 5).unwrap().unwrap();
        assert_eq!(w.cycles_traversed(), 1);
        assert_eq!(w.exits, vec![1]);
        assert!(audit_shifted_walk(&ctx, &w, 2, 4, &[]).all_hold());
        assert_eq!(w.expand(&ctx), vec![2, 3, 4, 5, 0, 1, 4]);
        let same = find_shifted_walk(&ctx, 3, 3, &[], 0).unwrap().unwrap();
        assert_eq!((same.cycles_traversed(), same.entries.clone()), (0, vec![3]));
    }

    #[test]
    fn walks_through_several_cycles() {
        // two 3-cycles of F joined by single arcs
        let mut r = Digraph::new(6);
        for (u, v) in [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 4), (5, 1)] {
            r.add_arc(u, v);
        }
        let f = CycleCover { cycles: vec![vec![0, 1, 2], vec![3, 4, 5]] };
        let ctx = FactorContext::new(r, f).unwrap();
        // from 0: exit 2 → 4; from 4: exit 3 has no chords, so 1 is unreachable directly
        let w = find_shifted_walk(&ctx, 0, 4, &[], 3).unwrap().unwrap();
        assert_eq!(w.entries, vec![0, 4]);
        assert!(audit_shifted_walk(&ctx, &w, 0, 4, &[]).all_hold());
        assert!(find_shifted_walk(&ctx, 0, 5, &[], 3).unwrap().is_none());
        assert!(find_shifted_walk(&ctx, 4, 0, &[], 5).unwrap().is_none());
    }

    #[test]
    fn avoidance_is_internal_only() {
        let mut r = Digraph::directed_cycle(5);
        r.add_arc(4, 2);
        r.add_arc(1, 4);
        let ctx = FactorContext::with_hamilton_cycle(r, &[0, 1, 2, 3, 4]).unwrap();
        // 0 → (exit 4) 2 → (exit 1) 4
        let w = find_shifted_walk(&ctx, 0, 4, &[], 4).unwrap().unwrap();
        assert_eq!(w.entries, vec![0, 2, 4]);
        assert!(audit_shifted_walk(&ctx, &w, 0, 4, &[]).all_hold());
        assert!(find_shifted_walk(&ctx, 0, 4, &[2], 4).unwrap().is_none());
        assert!(find_shifted_walk(&ctx, 0, 4, &[1], 4).unwrap().is_none());
        assert!(find_shifted_walk(&ctx, 0, 4, &[4], 4).unwrap().is_some());
        assert!(find_shifted_walk(&ctx, 0, 4, &[], 1).unwrap().is_none());
    }

    #[test]
    fn skewed_traverses() {
        let ctx = complete_ctx(5);
        let t = find_skewed_traverse(&ctx, 1, 3).unwrap().unwrap();
        assert_eq!((t.length(), t.edges.clone()), (0, vec![(1, 3)]));
        let bare = FactorContext::with_hamilton_cycle(Digraph::directed_cycle(5), &[0, 1, 2, 3, 4]).unwrap();
        for a in 0..5 {
            for b in 0..5 {
                let found = find_skewed_traverse(&bare, a, b).unwrap();
                assert_eq!(found.is_some(), b == (a + 1) % 5, "{a} {b}");
            }
        }
        let mut r = Digraph::directed_cycle(6);
        r.add_arc(0, 3);
        let ctx = FactorContext::with_hamilton_cycle(r, &[0, 1, 2, 3, 4, 5]).unwrap();
        // 0 → 3, then from 2 → 3 is only the cycle arc: targets reachable are 1, 3
        let t = find_skewed_traverse(&ctx, 0, 3).unwrap().unwrap();
        assert!(t.is_valid(&ctx, 0, 3));
        let two_cycles = FactorContext::new(Digraph::complete(4), CycleCover { cycles: vec![vec![0, 1], vec![2, 3]] }).unwrap();
        assert!(find_skewed_traverse(&two_cycles, 0, 2).is_err());
    }

    #[test]
    fn traverse_walks_visit_evenly() {
        for seed in 0..10 {
            let r = random_digraph(8, 0.5, seed).unwrap();
            let Ok(Some(c)) = crate::hamiltonicity::hamilton_oracle_digraph(&r) else { continue };
            let ctx = FactorContext::with_hamilton_cycle(r, &c.order).unwrap();
            for (a, b) in [(0, 5), (3, 1)] {
                if let Some(t) = find_skewed_traverse(&ctx, a, b).unwrap() {
                    assert!(t.is_valid(&ctx, a, b));
                    let w = t.to_walk(&ctx);
                    let mut counts = vec![0; 8];
                    for &v in &w[1..w.len() - 1] {
                        counts[v] += 1;
                    }
                    assert!(counts.iter().all(|&x| x == counts[0]), "seed {seed}");
                }
            }
        }
    }

    #[test]
    fn rebalancing() {
        let ctx = complete_ctx(5);
        let start = ClusterAssignment::new(vec![4, 2, 3, 3, 3], vec![2; 5], 3).unwrap();
        for mode in [RebalanceMode::Traverse, RebalanceMode::Walk] {
            let (next, recipe) = rebalance(&start, &ctx, 0, 1, mode).unwrap();
            assert!(next.is_balanced());
            assert_eq!(next.total(), start.total());
            let delta = recipe_delta(&ctx, &recipe);
            assert_eq!(delta, vec![-1, 1, 0, 0, 0], "{mode:?}");
        }
        let balanced = ClusterAssignment::new(vec![3; 5], vec![2; 5], 3).unwrap();
        assert!(rebalance(&balanced, &ctx, 0, 1, RebalanceMode::Traverse).is_err());
        let starved = ClusterAssignment::new(vec![4, 2, 3, 3, 3], vec![0; 5], 3).unwrap();
        assert!(matches!(rebalance(&starved, &ctx, 0, 1, RebalanceMode::Traverse), Err(LabError::Infeasible(_))));
    }

    #[test]
    fn balancing_several_units() {
        let r = random_digraph(7, 0.6, 1).unwrap();
        let c = crate::hamiltonicity::hamilton_oracle_digraph(&r).unwrap().expect("seed 1 is Hamiltonian");
        let ctx = FactorContext::with_hamilton_cycle(r, &c.order).unwrap();
        let start = ClusterAssignment::new(vec![8, 5, 5, 5, 2, 5, 5], vec![10; 7], 5).unwrap();
        for mode in [RebalanceMode::Traverse, RebalanceMode::Walk] {
            let (end, steps) = balance(&start, &ctx, mode).unwrap();
            assert!(end.is_balanced());
            assert_eq!(steps.len(), 3);
            for s in &steps {
                let d = recipe_delta(&ctx, s);
                assert_eq!((d[0], d[4], d.iter().map(|x| x.abs()).sum::<i64>()), (-1, 1, 2), "{mode:?}");
            }
        }
    }
}
