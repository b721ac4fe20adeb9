//! Extremal and sharpness constructions, plus seeded random graphs.

use crate::error::{domain, Result};
use crate::graph::{Digraph, Graph, VertexSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Sizes of the `k` classes of a balanced partition of `n`, largest first.
pub fn balanced_sizes(n: usize, k: usize) -> Vec<usize> {
    (0..k).map(|i| n / k + usize::from(i < n % k)).collect()
}

/// The Turán graph `T_{r−1}(n)`: complete `(r−1)`-partite with class sizes
/// differing by at most one. Classes are consecutive vertex ranges, largest first.
pub fn turan_graph(n: usize, r: usize) -> Result<Graph> {
    if r < 2 {
        return domain("Turán graph needs r >= 2");
    }
    let sizes = balanced_sizes(n, r - 1);
    let mut class = Vec::with_capacity(n);
    for (c, &s) in sizes.iter().enumerate() {
        class.extend(std::iter::repeat_n(c, s));
    }
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if class[u] != class[v] {
                g.add_edge(u, v);
            }
        }
    }
    Ok(g)
}

/// `t_{r−1}(n)`, the number of edges of `T_{r−1}(n)`.
pub fn turan_count(n: usize, r: usize) -> Result<usize> {
    if r < 2 {
        return domain("Turán number needs r >= 2");
    }
    let sq: usize = balanced_sizes(n, r - 1).iter().map(|s| s * s).sum();
    Ok((n * n - sq) / 2)
}

/// Vertices `v_1..v_n` (ids `0..n`); `v_i v_j` is an edge when `i, j ≥ r+1`,
/// or when `i ≤ r` and `j ≥ n−r+1`. Non-Hamiltonian, and its degree sequence
/// fails the Chvátal condition exactly at `r`.
pub fn chvatal_extremal(n: usize, r: usize) -> Result<Graph> {
    if r == 0 || 2 * r >= n {
        return domain(format!("need 1 <= r < n/2, got n = {n}, r = {r}"));
    }
    let mut g = Graph::new(n);
    for i in 1..=n {
        for j in i + 1..=n {
            if (i > r && j > r) || (i <= r && j > n - r) {
                g.add_edge(i - 1, j - 1);
            }
        }
    }
    Ok(g)
}

/// Regular tournament on `m` (odd) vertices: `i → j` iff `(j − i) mod m ∈ {1, …, (m−1)/2}`.
pub fn regular_tournament(m: usize) -> Result<Digraph> {
    if m % 2 == 0 {
        return domain("regular tournaments need an odd order");
    }
    let mut d = Digraph::new(m);
    for i in 0..m {
        for j in 0..m {
            let gap = (j + m - i) % m;
            if gap >= 1 && gap <= (m - 1) / 2 {
                d.add_arc(i, j);
            }
        }
    }
    Ok(d)
}

/// The four blocks of the bottleneck constructions, as consecutive ranges.
#[derive(Debug, Clone)]
pub struct FourBlocks {
    pub a: VertexSet,
    pub b: VertexSet,
    pub c: VertexSet,
    pub d: VertexSet,
}

fn four_cycle_blocks(sizes: [usize; 4], tournament_m: usize) -> Result<(Digraph, FourBlocks)> {
    let n: usize = sizes.iter().sum();
    let starts = [0, sizes[0], sizes[0] + sizes[1], sizes[0] + sizes[1] + sizes[2]];
    let range = |k: usize| starts[k]..starts[k] + sizes[k];
    let mut g = Digraph::new(n);
    let t = regular_tournament(tournament_m)?;
    for block in [0, 2] {
        for (u, v) in t.arcs() {
            g.add_arc(starts[block] + u, starts[block] + v);
        }
    }
    // A → B → C → D → A
    for k in 0..4 {
        for u in range(k) {
            for v in range((k + 1) % 4) {
                g.add_arc(u, v);
            }
        }
    }
    // B–D complete bipartite, oriented by index parity so degrees split evenly
    for (i, u) in range(1).enumerate() {
        for (j, v) in range(3).enumerate() {
            if (i + j) % 2 == 0 {
                g.add_arc(u, v);
            } else {
                g.add_arc(v, u);
            }
        }
    }
    let blocks = FourBlocks {
        a: VertexSet::range(n, range(0)),
        b: VertexSet::range(n, range(1)),
        c: VertexSet::range(n, range(2)),
        d: VertexSet::range(n, range(3)),
    };
    Ok((g, blocks))
}

/// Häggkvist's non-Hamiltonian oriented graph on `n = 4m + 3` vertices
/// (`m` odd) with `δ⁰ = (3n − 5)/8`: `|A| = |C| = m` regular tournaments,
/// `|B| = m + 2`, `|D| = m + 1`, all arcs `A→B→C→D→A`, and `B`–`D`
/// oriented as evenly as possible.
pub fn haggkvist_graph(m: usize) -> Result<Digraph> {
    haggkvist_blocks(m).map(|(g, _)| g)
}

pub fn haggkvist_blocks(m: usize) -> Result<(Digraph, FourBlocks)> {
    if m % 2 == 0 {
        return domain("the construction needs m odd");
    }
    four_cycle_blocks([m, m + 2, m, m + 1], m)
}

/// Oriented graph on `n = 8m + 4` vertices with `δ⁰ = 3m + 1` and no
/// anti-directed Hamilton cycle: four blocks of size `2m + 1`, `A` and `C`
/// regular tournaments, `A→B→C→D→A` and `B`–`D` oriented evenly.
pub fn antidirected_counterexample(m: usize) -> Result<Digraph> {
    antidirected_blocks(m).map(|(g, _)| g)
}

pub fn antidirected_blocks(m: usize) -> Result<(Digraph, FourBlocks)> {
    if m == 0 {
        return domain("m must be positive");
    }
    let s = 2 * m + 1;
    four_cycle_blocks([s, s, s, s], s)
}

/// `K_{n/2+1} ⊔ K_{n/2−1}` for `6 | n`: minimum degree `n/2 − 2` and no
/// perfect `C_6`-packing.
pub fn c6_sharpness_graph(n: usize) -> Result<Graph> {
    if n == 0 || n % 6 != 0 {
        return domain("n must be a positive multiple of 6");
    }
    Ok(Graph::complete(n / 2 + 1).disjoint_union(&Graph::complete(n / 2 - 1)))
}

pub fn cycle_graph(n: usize) -> Result<Graph> {
    if n < 3 {
        return domain("cycles need at least 3 vertices");
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges)
}

pub fn path_graph(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &edges).expect("path edges are in range")
}

pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let mut g = Graph::new(a + b);
    for u in 0..a {
        for v in a..a + b {
            g.add_edge(u, v);
        }
    }
    g
}

pub fn petersen_graph() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::from_edges(10, &edges).expect("fixed edge list")
}

/// `G(n, p)`: pairs `u < v` are visited in lexicographic order, one Bernoulli draw each.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Result<Graph> {
    check_probability(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    Ok(g)
}

/// `D(n, p)`: ordered pairs `u ≠ v` in lexicographic order, one draw each.
pub fn random_digraph(n: usize, p: f64, seed: u64) -> Result<Digraph> {
    check_probability(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = Digraph::new(n);
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(p) {
                d.add_arc(u, v);
            }
        }
    }
    Ok(d)
}

pub fn random_tournament(n: usize, seed: u64) -> Digraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = Digraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(0.5) {
                d.add_arc(u, v);
            } else {
                d.add_arc(v, u);
            }
        }
    }
    d
}

/// Random oriented graph: each pair gets no arc with probability `1 − p`,
/// otherwise one of the two orientations uniformly.
pub fn random_oriented(n: usize, p: f64, seed: u64) -> Result<Digraph> {
    check_probability(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = Digraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                if rng.gen_bool(0.5) {
                    d.add_arc(u, v);
                } else {
                    d.add_arc(v, u);
                }
            }
        }
    }
    Ok(d)
}

/// Random bipartite graph with sides `0..a` and `a..a+b`.
pub fn random_bipartite(a: usize, b: usize, p: f64, seed: u64) -> Result<(Graph, VertexSet, VertexSet)> {
    check_probability(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = a + b;
    let mut g = Graph::new(n);
    for u in 0..a {
        for v in a..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    Ok((g, VertexSet::range(n, 0..a), VertexSet::range(n, a..n)))
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return domain(format!("probability {p} outside [0, 1]"));
    }
    Ok(())
}

/// Named small graphs: `K<n>`, `C<n>`, `P<n>` (path on n vertices), `K<a>,<b>`, `petersen`.
pub fn named_graph(name: &str) -> Result<Graph> {
    let lower = name.trim().to_ascii_lowercase();
    let num = |s: &str| s.parse::<usize>().map_err(|_| crate::LabError::Domain(format!("unknown graph name {name:?}")));
    if lower == "petersen" {
        return Ok(petersen_graph());
    }
    if let Some(rest) = lower.strip_prefix('k') {
        if let Some((a, b)) = rest.split_once(',') {
            return Ok(complete_bipartite(num(a)?, num(b)?));
        }
        return Ok(Graph::complete(num(rest)?));
    }
    if let Some(rest) = lower.strip_prefix('c') {
        return cycle_graph(num(rest)?);
    }
    if let Some(rest) = lower.strip_prefix('p') {
        return Ok(path_graph(num(rest)?));
    }
    domain(format!("unknown graph name {name:?}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn turan_sizes_and_counts() {
        let g = turan_graph(9, 6).unwrap();
        assert_eq!(g.edge_count(), 32);
        assert_eq!(balanced_sizes(9, 5), vec![2, 2, 2, 2, 1]);
        assert_eq!(turan_count(4, 3).unwrap(), 4);
        assert_eq!(turan_count(7, 2).unwrap(), 0);
        for n in 1..15 {
            for r in 2..7 {
                assert_eq!(turan_graph(n, r).unwrap().edge_count(), turan_count(n, r).unwrap());
            }
        }
    }

    #[test]
    fn chvatal_degree_sequence() {
        let g = chvatal_extremal(8, 3).unwrap();
        assert_eq!(g.degree_sequence(), vec![3, 3, 3, 4, 4, 7, 7, 7]);
        let g = chvatal_extremal(6, 1).unwrap();
        assert_eq!(g.degree_sequence()[0], 1);
        assert!(chvatal_extremal(6, 3).is_err());
    }

    #[test]
    fn haggkvist_semidegree() {
        let g = haggkvist_graph(3).unwrap();
        assert_eq!(g.n(), 15);
        assert!(g.is_oriented());
        assert_eq!(g.min_semidegree(), 5);
        let g = haggkvist_graph(1).unwrap();
        assert_eq!((g.n(), g.min_semidegree()), (7, 2));
        assert!(haggkvist_graph(2).is_err());
    }

    #[test]
    fn antidirected_semidegree() {
        let g = antidirected_counterexample(1).unwrap();
        assert_eq!(g.n(), 12);
        assert!(g.is_oriented());
        assert_eq!(g.min_semidegree(), 4);
        assert_eq!(antidirected_counterexample(2).unwrap().min_semidegree(), 7);
    }

    #[test]
    fn c6_sharpness_degree() {
        let g = c6_sharpness_graph(12).unwrap();
        assert_eq!(g.min_degree(), 4);
        assert_eq!(g.edge_count(), 31);
        assert!(c6_sharpness_graph(8).is_err());
    }

    #[test]
    fn regular_tournament_is_regular() {
        let t = regular_tournament(7).unwrap();
        assert!(t.is_tournament());
        assert!((0..7).all(|v| t.out_degree(v) == 3 && t.in_degree(v) == 3));
    }

    #[test]
    fn random_generators_are_reproducible() {
        assert_eq!(random_graph(10, 0.5, 1).unwrap(), random_graph(10, 0.5, 1).unwrap());
        assert_ne!(random_digraph(10, 0.5, 1).unwrap(), random_digraph(10, 0.5, 2).unwrap());
        assert!(random_graph(5, 1.5, 0).is_err());
    }

    #[test]
    fn named_graphs() {
        assert_eq!(named_graph("K4").unwrap().edge_count(), 6);
        assert_eq!(named_graph("C6").unwrap().edge_count(), 6);
        assert_eq!(named_graph("K3,3").unwrap().edge_count(), 9);
        assert_eq!(named_graph("P3").unwrap().edge_count(), 2);
        assert_eq!(named_graph("petersen").unwrap().edge_count(), 15);
        assert!(named_graph("Q3").is_err());
    }
}
