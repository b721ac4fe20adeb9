//! Shared fixtures for the benchmarks.

use reglab::constructions::{random_bipartite, random_digraph, random_graph};
use reglab::shifted_walks::FactorContext;
use reglab::{Digraph, Graph, VertexSet};

/// Seeded `G(n, 1/2)`.
pub fn half_random_graph(n: usize, seed: u64) -> Graph {
    random_graph(n, 0.5, seed).expect("1/2 is a probability")
}

/// A random bipartite pair with sides `0..m` and `m..2m`.
pub fn random_pair(m: usize, seed: u64) -> (Graph, VertexSet, VertexSet) {
    random_bipartite(m, m, 0.5, seed).expect("1/2 is a probability")
}

pub fn dense_digraph(n: usize, seed: u64) -> Digraph {
    random_digraph(n, 0.6, seed).expect("0.6 is a probability")
}

/// Left and right adjacency lists of a random bipartite graph with `m + m` vertices.
pub fn bipartite_lists(m: usize, seed: u64) -> Vec<Vec<usize>> {
    let (g, a, b) = random_pair(m, seed);
    let right = b.to_vec();
    a.iter().map(|u| right.iter().enumerate().filter(|&(_, &v)| g.has_edge(u, v)).map(|(j, _)| j).collect()).collect()
}

/// A reduced-digraph stand-in with the 1-factor found by matching.
pub fn factor_context(k: usize, seed: u64) -> FactorContext {
    (seed..)
        .find_map(|s| FactorContext::from_one_factor(dense_digraph(k, s)).ok())
        .expect("dense random digraphs have 1-factors")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        assert_eq!(half_random_graph(20, 1).n(), 20);
        assert_eq!(bipartite_lists(6, 2).len(), 6);
        assert_eq!(factor_context(10, 3).k(), 10);
    }
}
