//! One built-in fixture per subcommand, run through the ordinary argument
//! parser with in-memory graphs standing in for files.

use reglab::constructions as cons;
use reglab::io::GraphFile;
use reglab::{Digraph, Graph};
use serde_json::{json, Value};

pub struct Fixture {
    pub argv: Vec<String>,
    pub graphs: Vec<(String, GraphFile)>,
    pub expected: &'static str,
    /// JSON pointers into the report and the values they must hold.
    pub checks: Vec<(&'static str, Value)>,
    pub source: &'static str,
}

const G: &str = "selftest:graph";

fn fixture(argv: &str, graph: Option<GraphFile>, expected: &'static str, checks: Vec<(&'static str, Value)>, source: &'static str) -> Fixture {
    Fixture {
        argv: argv.split_whitespace().map(str::to_string).collect(),
        graphs: graph.map(|g| vec![(G.to_string(), g)]).unwrap_or_default(),
        expected,
        checks,
        source,
    }
}

fn graph(g: Graph) -> Option<GraphFile> {
    Some(GraphFile::Graph(g))
}

fn digraph(d: Digraph) -> Option<GraphFile> {
    Some(GraphFile::Digraph(d))
}

fn half_graph(m: usize) -> Graph {
    let mut g = Graph::new(2 * m);
    for i in 0..m {
        for j in i..m {
            g.add_edge(i, m + j);
        }
    }
    g
}

pub fn lookup(command: &str) -> Option<Fixture> {
    let f = match command {
        "construct" => fixture(
            "construct haggkvist --m 3",
            None,
            "computed",
            vec![("/witness/n", json!(15)), ("/witness/min_semidegree", json!(5))],
            "haggkvist_graph(3) has 15 vertices and minimum semidegree (3n-5)/8 = 5",
        ),
        "density" => fixture(
            "density selftest:graph --left 0-1 --right 2-3",
            graph(Graph::from_edges(4, &[(0, 2), (0, 3), (1, 2)]).expect("valid edges")),
            "computed",
            vec![("/witness/density", json!("3/4"))],
            "three of the four pairs between two 2-sets are edges",
        ),
        "check-regular" => fixture(
            "check-regular --graph selftest:graph --left 0-5 --right 6-11 --eps 1/4",
            graph(half_graph(6)),
            "fails",
            vec![("/witness/kind", json!("subsets"))],
            "the half-graph on 6+6 vertices is not 1/4-regular",
        ),
        "check-superregular" => {
            let mut g = cons::complete_bipartite(3, 3);
            for b in 3..6 {
                g.remove_edge(0, b);
            }
            fixture(
                "check-superregular selftest:graph --left 0-2 --right 3-5 --eps 1/10 --d 1/2",
                graph(g),
                "fails",
                vec![("/witness/kind", json!("degree")), ("/witness/x", json!([0]))],
                "a pair with an isolated vertex fails with that vertex as degree witness",
            )
        }
        "partition" => fixture(
            "partition selftest:graph --eps 45/100 --k0 2",
            graph(Graph::complete(12)),
            "holds",
            vec![("/witness/iterations", json!(0))],
            "a complete graph needs no boost",
        ),
        "degree-form" => fixture(
            "degree-form selftest:graph --eps 45/100 --d 1/20 --k0 2",
            graph(cons::random_graph(60, 0.5, 7).expect("valid probability")),
            "holds",
            vec![],
            "G(60, 1/2) with seed 7 passes all five degree-form postconditions",
        ),
        "reduce" => fixture(
            "reduce selftest:graph --eps 1/4 --d 1/2 --clusters 0-1;2-3;4-5;6-7",
            graph(Graph::complete(8)),
            "holds",
            vec![("/witness/k", json!(4)), ("/witness/edge_count", json!(6))],
            "pairs of density 1 give a complete reduced graph",
        ),
        "certify" => fixture(
            "certify selftest:graph --kind chvatal",
            graph(cons::chvatal_extremal(8, 3).expect("valid parameters")),
            "fails",
            vec![("/witness/failing_index", json!(3))],
            "the Chvátal extremal graph (8,3) has d_3 = 3 and d_5 = 4",
        ),
        "hamilton" => fixture(
            "hamilton selftest:graph",
            graph(cons::chvatal_extremal(8, 3).expect("valid parameters")),
            "none",
            vec![],
            "the Chvátal extremal graph (8,3) is not Hamiltonian",
        ),
        "oriented-hamilton" => fixture(
            "oriented-hamilton selftest:graph --alternating",
            digraph(cons::antidirected_counterexample(1).expect("valid parameter")),
            "none",
            vec![],
            "the m = 1 counterexample on 12 vertices has no anti-directed Hamilton cycle",
        ),
        "oriented-path" => fixture(
            "oriented-path selftest:graph --from 0 --to 1 --word f",
            digraph(Digraph::directed_cycle(5)),
            "found",
            vec![("/witness/path", json!([0, 1]))],
            "a single forward arc is a path for the word f",
        ),
        "matching" => fixture(
            "matching selftest:graph --left 0-2 --right 3",
            graph(Graph::from_edges(4, &[(0, 3), (1, 3), (2, 3)]).expect("valid edges")),
            "none",
            vec![],
            "three left vertices sharing one neighbour violate Hall's condition",
        ),
        "one-factor" => fixture(
            "one-factor selftest:graph",
            digraph(cons::haggkvist_graph(3).expect("valid parameter")),
            "none",
            vec![],
            "haggkvist_graph(3) has no 1-factor since |B| > |D|",
        ),
        "rotation-hamilton" => fixture(
            "rotation-hamilton selftest:graph",
            digraph(Digraph::complete(5)),
            "found",
            vec![("/audit/valid", json!(true))],
            "the complete digraph on 5 vertices",
        ),
        "expander" => fixture(
            "expander selftest:graph --nu 1/5 --tau 1/5 --mode out",
            digraph(Digraph::directed_cycle(10)),
            "fails",
            vec![("/audit/violator_revalidates", json!(true))],
            "a directed 10-cycle has empty robust outneighbourhoods at nu = 1/5",
        ),
        "rn" => fixture(
            "rn selftest:graph --set 0-3 --nu 1/8 --direction out",
            digraph(Digraph::directed_cycle(8)),
            "computed",
            vec![("/witness/neighbourhood", json!([1, 2, 3, 4]))],
            "successors of {0,..,3} on a directed 8-cycle",
        ),
        "shifted-walk" => fixture(
            "shifted-walk selftest:graph --from 0 --to 2 --cycle 0,1,2,3,4,5",
            digraph(Digraph::complete(6)),
            "found",
            vec![("/witness/t", json!(1)), ("/audit/all_hold", json!(true))],
            "one lap of a complete reduced digraph",
        ),
        "skewed-traverse" => fixture(
            "skewed-traverse selftest:graph --from 0 --to 3 --cycle 0,1,2,3,4,5",
            digraph(Digraph::complete(6)),
            "found",
            vec![("/witness/length", json!(0))],
            "a single edge in a complete reduced digraph",
        ),
        "rebalance" => fixture(
            "rebalance selftest:graph --loads 4,2,3,3,3,3 --slots 1,1,1,1,1,1 --m 3 --cycle 0,1,2,3,4,5",
            digraph(Digraph::complete(6)),
            "holds",
            vec![("/witness/loads", json!([3, 3, 3, 3, 3, 3]))],
            "one step balances (m+1, m-1, m, ...) on a complete reduced digraph",
        ),
        "ex-number" => fixture("ex-number --n 5 --pattern K3", None, "found", vec![("/witness/value", json!(6))], "ex(5, K3) = 6"),
        "ramsey" => fixture("ramsey --pattern K3 --n-max 6", None, "found", vec![("/witness/number", json!(6))], "R(K3) = 6"),
        "packing" => fixture(
            "packing selftest:graph --pattern C6",
            graph(cons::c6_sharpness_graph(12).expect("valid order")),
            "fails",
            vec![],
            "K7 plus K5 has no perfect C6-packing since neither order is divisible by 6",
        ),
        "embed" => fixture(
            "embed selftest:graph --pattern K2 --clusters 0-3;4-7 --eps 1/10 --d 1/2 --sigma 0,1 --s 1",
            graph(cons::complete_bipartite(4, 4)),
            "found",
            vec![("/audit/valid", json!(true))],
            "a single edge along a complete pair",
        ),
        "oracle-embed" => fixture("oracle-embed selftest:graph --pattern K3", graph(cons::cycle_graph(5).expect("valid order")), "none", vec![], "C5 is triangle-free"),
        _ => return None,
    };
    Some(f)
}

/// Names of the pointers whose values differ from the fixture.
pub fn failed_checks(report: &Value, checks: &[(&'static str, Value)]) -> Vec<String> {
    checks.iter().filter(|(ptr, want)| report.pointer(ptr) != Some(want)).map(|(ptr, _)| ptr.to_string()).collect()
}
