use criterion::{criterion_group, criterion_main, Criterion};
use reglab::constructions::{chvatal_extremal, haggkvist_graph};
use reglab::embedding::subgraph_oracle;
use reglab::enumerate::canonical_code;
use reglab::hamiltonicity::{bipartite_matching, hamilton_oracle, hamilton_oracle_digraph, rotation_extension_hamilton};
use reglab::rational::rat;
use reglab::regularity::{check_pair_regular, PairSpec, ScanMode};
use reglab::robust_expansion::{check_expander, ExpansionSpec};
use reglab::shifted_walks::find_shifted_walk;
use reglab::szemeredi::{energy, regularity_partition, Partition};
use reglab::Graph;
use reglab_bench::*;
use std::hint::black_box;

fn regularity(c: &mut Criterion) {
    let (g, a, b) = random_pair(10, 1);
    c.bench_function("pair_regular_exhaustive_10x10", |bch| {
        bch.iter(|| {
            let spec = PairSpec::graph(&g, a.clone(), b.clone(), rat(1, 4));
            black_box(check_pair_regular(&spec, ScanMode::Exhaustive { cap: 14 }).unwrap())
        })
    });
    let g = half_random_graph(60, 7);
    let p = Partition::from_lists(60, &(0..6).map(|i| (i * 10..i * 10 + 10).collect()).collect::<Vec<_>>()).unwrap();
    c.bench_function("energy_60_six_classes", |bch| bch.iter(|| black_box(energy(&g, &p).unwrap())));
    let g = half_random_graph(40, 3);
    c.bench_function("regularity_partition_40", |bch| bch.iter(|| black_box(regularity_partition(&g, rat(45, 100), 2).unwrap())));
}

fn hamiltonicity(c: &mut Criterion) {
    let g = chvatal_extremal(10, 4).unwrap();
    c.bench_function("hamilton_none_chvatal_10_4", |bch| bch.iter(|| black_box(hamilton_oracle(&g).unwrap())));
    let h = haggkvist_graph(3).unwrap();
    c.bench_function("hamilton_none_haggkvist_15", |bch| bch.iter(|| black_box(hamilton_oracle_digraph(&h).unwrap())));
    let d = dense_digraph(40, 3);
    c.bench_function("rotation_extension_40", |bch| bch.iter(|| black_box(rotation_extension_hamilton(&d).unwrap())));
    let adj = bipartite_lists(64, 5);
    c.bench_function("hopcroft_karp_64", |bch| bch.iter(|| black_box(bipartite_matching(&adj, 64).unwrap())));
}

fn expansion(c: &mut Criterion) {
    let d = dense_digraph(14, 2);
    let spec = ExpansionSpec::out(rat(1, 14), rat(1, 5)).unwrap();
    c.bench_function("expander_exhaustive_14", |bch| bch.iter(|| black_box(check_expander(&d, &spec).unwrap())));
    let ctx = factor_context(24, 4);
    c.bench_function("shifted_walks_all_pairs_24", |bch| {
        bch.iter(|| {
            for a in 0..24 {
                for b in 0..24 {
                    black_box(find_shifted_walk(&ctx, a, b, &[], 24).unwrap());
                }
            }
        })
    });
}

fn oracles(c: &mut Criterion) {
    let g = half_random_graph(12, 9);
    let k4 = Graph::complete(4);
    c.bench_function("subgraph_k4_in_g12", |bch| bch.iter(|| black_box(subgraph_oracle(&k4, &g).unwrap())));
    let g = half_random_graph(9, 4);
    c.bench_function("canonical_code_9", |bch| bch.iter(|| black_box(canonical_code(&g).unwrap())));
}

criterion_group! {
    name = kernels;
    config = Criterion::default().sample_size(10);
    targets = regularity, hamiltonicity, expansion, oracles
}
criterion_main!(kernels);
