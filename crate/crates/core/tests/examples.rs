//! Worked examples through the public API.

use reglab::constructions::*;
use reglab::embedding::{packing_oracle, subgraph_oracle};
use reglab::hamiltonicity::{hamilton_oracle, hamilton_oracle_digraph, oriented_hamilton_oracle, OrientedOutcome, OrientedPattern};
use reglab::io::{parse_graph_file, write_digraph, GraphFile};
use reglab::rational::rat;
use reglab::shifted_walks::*;
use reglab::{Digraph, Graph};

#[test]
fn turan_graphs() {
    let t = turan_graph(9, 6).unwrap();
    assert_eq!(t.edge_count(), 32);
    assert_eq!(turan_count(9, 6).unwrap(), 32);
    for n in 0..8 {
        assert_eq!(turan_count(n, 2).unwrap(), 0);
    }
    // t_2(4) = 4 meets (r−2)/(r−1) · n²/2 with equality
    assert_eq!(turan_count(4, 3).unwrap() * 2 * 2, 16);
    for r in 2..=5 {
        for n in 0..=10 {
            let t = turan_graph(n, r).unwrap();
            assert_eq!(t.edge_count(), turan_count(n, r).unwrap());
            assert!(t.edge_count() * 2 * (r - 1) <= (r - 2) * n * n);
            if n >= r {
                assert!(subgraph_oracle(&Graph::complete(r), &t).unwrap().is_none(), "T({n},{r}) contains K{r}");
            }
        }
    }
    assert!(turan_graph(5, 1).is_err());
}

#[test]
fn chvatal_graphs() {
    let mut deg = chvatal_extremal(8, 3).unwrap().degree_sequence();
    deg.sort_unstable();
    assert_eq!(deg, vec![3, 3, 3, 4, 4, 7, 7, 7]);
    let mut pendant = chvatal_extremal(6, 1).unwrap().degree_sequence();
    pendant.sort_unstable();
    assert_eq!(pendant[0], 1);
    assert!(hamilton_oracle(&chvatal_extremal(8, 3).unwrap()).unwrap().is_none());
    assert!(chvatal_extremal(8, 4).is_err());
}

#[test]
fn tournaments_and_bottlenecks() {
    assert_eq!(regular_tournament(3).unwrap(), Digraph::directed_cycle(3));
    assert!((0..5).all(|v| regular_tournament(5).unwrap().out_degree(v) == 2));
    assert!(regular_tournament(7).unwrap().is_oriented());
    assert!(regular_tournament(4).is_err());

    let h1 = haggkvist_graph(1).unwrap();
    assert_eq!((h1.n(), h1.min_semidegree()), (7, 2));
    let h3 = haggkvist_graph(3).unwrap();
    assert_eq!(8 * h3.min_semidegree(), 3 * h3.n() - 5);
    assert!(hamilton_oracle_digraph(&h3).unwrap().is_none());
    assert!(haggkvist_graph(2).is_err());

    let a = antidirected_counterexample(1).unwrap();
    assert_eq!((a.n(), a.min_semidegree()), (12, 4));
    assert!(!a.has_two_cycle());
    assert!(matches!(oriented_hamilton_oracle(&a, &OrientedPattern::alternating(12)).unwrap(), OrientedOutcome::NotFound));
}

#[test]
fn c6_sharpness() {
    let g = c6_sharpness_graph(12).unwrap();
    assert_eq!((g.min_degree(), g.edge_count()), (4, 21 + 10));
    assert!(!packing_oracle(&g, &cycle_graph(6).unwrap(), true).unwrap().perfect);
    assert!(c6_sharpness_graph(10).is_err());
}

#[test]
fn random_generators() {
    assert_eq!(random_graph(9, 0.0, 3).unwrap().edge_count(), 0);
    assert_eq!(random_graph(9, 1.0, 3).unwrap(), Graph::complete(9));
    assert_eq!(random_digraph(6, 1.0, 3).unwrap(), Digraph::complete(6));
    // frozen fixture values for the seeded generator
    assert_eq!(random_graph(10, 0.5, 1).unwrap().edge_count(), 26);
    assert_eq!(random_digraph(10, 0.5, 1).unwrap().arc_count(), 46);
}

#[test]
fn graph_files_round_trip() {
    let d = haggkvist_graph(1).unwrap();
    let text = write_digraph(&d);
    match parse_graph_file(&text, 100).unwrap() {
        GraphFile::Digraph(back) => assert_eq!(back, d),
        GraphFile::Graph(_) => panic!("kind changed"),
    }
    assert!(parse_graph_file("graph 3\n0 0\n", 100).is_err());
    assert!(parse_graph_file("graph 3\n0 3\n", 100).is_err());
}

#[test]
fn shifted_walk_examples() {
    let ctx = FactorContext::with_hamilton_cycle(Digraph::complete(6), &[0, 1, 2, 3, 4, 5]).unwrap();
    for a in 0..6 {
        for b in 0..6 {
            let w = find_shifted_walk(&ctx, a, b, &[], 4).unwrap().unwrap();
            // one lap ends at pred(a), which has every cluster but itself as out-neighbour
            let expected = if a == b { 0 } else if b == (a + 5) % 6 { 2 } else { 1 };
            assert_eq!(w.cycles_traversed(), expected, "{a} -> {b}");
            if a != b {
                assert_eq!(find_skewed_traverse(&ctx, a, b).unwrap().unwrap().length(), 0);
            }
        }
    }
    let bare = FactorContext::with_hamilton_cycle(Digraph::directed_cycle(6), &[0, 1, 2, 3, 4, 5]).unwrap();
    assert_eq!(find_skewed_traverse(&bare, 2, 3).unwrap().unwrap().length(), 0);
    assert!(find_skewed_traverse(&bare, 2, 4).unwrap().is_none());

    let start = ClusterAssignment::new(vec![4, 2, 3, 3, 3, 3], vec![1; 6], 3).unwrap();
    let (next, _) = rebalance(&start, &ctx, 0, 1, RebalanceMode::Traverse).unwrap();
    assert!(next.is_balanced());
    assert!(rebalance(&next, &ctx, 0, 1, RebalanceMode::Traverse).is_err());
}

#[test]
fn three_step_rebalance_on_an_expander() {
    // a seeded reduced digraph with a Hamilton cycle and load off by three at two clusters
    let r = random_digraph(9, 0.5, 4).unwrap();
    let cycle = hamilton_oracle_digraph(&r).unwrap().expect("seed 4 is Hamiltonian");
    let ctx = FactorContext::with_hamilton_cycle(r, &cycle.order).unwrap();
    let start = ClusterAssignment::new(vec![7, 4, 4, 4, 1, 4, 4, 4, 4], vec![5; 9], 4).unwrap();
    assert_eq!(start.imbalance(), 3);
    let (end, steps) = balance(&start, &ctx, RebalanceMode::Walk).unwrap();
    assert!(end.is_balanced());
    assert_eq!(steps.len(), 3);
    for s in &steps {
        let mut expected = vec![0i64; 9];
        expected[0] = -1;
        expected[4] = 1;
        assert_eq!(recipe_delta(&ctx, s), expected);
    }
    assert_eq!(rat(end.total() as i64, 9), rat(4, 1));
}
