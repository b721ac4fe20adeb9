use clap::{Args, Parser, Subcommand, ValueEnum};
use reglab::io::parse_vertex_list;
use reglab::{parse_rational, Rational};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "reglab", version, about = "Regularity, embedding and Hamiltonicity experiments on small graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Clone, Default)]
pub struct Common {
    /// Seed for every randomised step.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Override the default size cap of the underlying search.
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    /// Exit with status 1 unless the verdict matches.
    #[arg(long, global = true, value_enum)]
    pub expect: Option<Expect>,
    /// Run the built-in fixture for this subcommand instead of the given inputs.
    #[arg(long, global = true)]
    pub selftest: bool,
    /// Record the wall-clock time in `runtime_ms` (otherwise 0, keeping reports reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Expect {
    Holds,
    Fails,
    Found,
    None,
}

impl Expect {
    pub fn as_str(self) -> &'static str {
        match self {
            Expect::Holds => "holds",
            Expect::Fails => "fails",
            Expect::Found => "found",
            Expect::None => "none",
        }
    }
}

/// Sorted vertex list given as `0-4,7`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VList(pub Vec<usize>);

/// Ordered list of counts given as `4,2,3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counts(pub Vec<usize>);

/// Clusters separated by `;`, each a vertex list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clusters(pub Vec<Vec<usize>>);

pub fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

pub fn vlist_arg(s: &str) -> Result<VList, String> {
    parse_vertex_list(s).map(VList).map_err(|e| e.to_string())
}

pub fn counts_arg(s: &str) -> Result<Counts, String> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<usize>().map_err(|_| format!("not a count: {p:?}")))
        .collect::<Result<Vec<_>, _>>()
        .map(Counts)
}

pub fn clusters_arg(s: &str) -> Result<Clusters, String> {
    s.split(';')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| parse_vertex_list(p).map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()
        .map(Clusters)
}

/// The input graph, either positional or via `--graph`.
#[derive(Debug, Args, Clone)]
pub struct Input {
    #[arg(value_name = "GRAPH")]
    pub path: Option<PathBuf>,
    #[arg(long = "graph", value_name = "GRAPH", conflicts_with = "path")]
    pub flag: Option<PathBuf>,
}

#[derive(Debug, Args, Clone)]
pub struct Pair {
    #[arg(long, value_parser = vlist_arg)]
    pub left: Option<VList>,
    #[arg(long, value_parser = vlist_arg)]
    pub right: Option<VList>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CertKind {
    Dirac,
    Posa,
    Chvatal,
    GhouilaHouri,
    NashWilliams,
    Robdegseq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Out,
    In,
    Di,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirArg {
    Out,
    In,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RebalanceArg {
    Traverse,
    Walk,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a graph from a named family and write it as a graph file.
    Construct(ConstructArgs),
    /// Edge density between two vertex sets.
    Density {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        pair: Pair,
    },
    /// ε-regularity of a pair, or of a whole digraph when no sides are given.
    CheckRegular(RegularArgs),
    /// (ε,d)-superregularity of a pair, or [ε,d]-superregularity of a digraph.
    CheckSuperregular(RegularArgs),
    /// Regularity partition by repeated energy boosts.
    Partition {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_parser = rational_arg)]
        eps: Option<Rational>,
        #[arg(long)]
        k0: Option<usize>,
        /// Decide large pairs by this many random subset samples.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Degree form: pure graph, exceptional set and equal clusters, with the audit.
    DegreeForm {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_parser = rational_arg)]
        eps: Option<Rational>,
        #[arg(long, value_parser = rational_arg)]
        d: Option<Rational>,
        #[arg(long)]
        k0: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
        /// Write the pure graph here.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Reduced (di)graph of given clusters, or of a fresh degree form when none are given.
    Reduce {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_parser = rational_arg)]
        eps: Option<Rational>,
        #[arg(long, value_parser = rational_arg)]
        d: Option<Rational>,
        #[arg(long, value_parser = clusters_arg)]
        clusters: Option<Clusters>,
        #[arg(long, value_parser = vlist_arg)]
        exceptional: Option<VList>,
        #[arg(long)]
        k0: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
        /// Write the reduced graph here.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Evaluate a sufficient degree condition for Hamiltonicity.
    Certify {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        kind: Option<CertKind>,
        #[arg(long, value_parser = rational_arg)]
        eta: Option<Rational>,
    },
    /// Exact Hamilton cycle search.
    Hamilton {
        #[command(flatten)]
        input: Input,
    },
    /// Hamilton cycle realising a cyclic direction word.
    OrientedHamilton {
        #[command(flatten)]
        input: Input,
        /// Word over `f`/`b`.
        #[arg(long)]
        word: Option<String>,
        #[arg(long, conflicts_with_all = ["word", "directed"])]
        alternating: bool,
        #[arg(long, conflicts_with = "word")]
        directed: bool,
    },
    /// Path from one vertex to another realising a direction word.
    OrientedPath {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        from: Option<usize>,
        #[arg(long)]
        to: Option<usize>,
        #[arg(long)]
        word: Option<String>,
    },
    /// Matching saturating the left side, or a Hall violator.
    Matching {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        pair: Pair,
    },
    /// Spanning cycle cover of a digraph, or a Hall violator.
    OneFactor {
        #[command(flatten)]
        input: Input,
    },
    /// Hamilton cycle by rotation and extension from a 1-factor.
    RotationHamilton {
        #[command(flatten)]
        input: Input,
    },
    /// Robust (ν,τ)-expansion check.
    Expander {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_parser = rational_arg)]
        nu: Option<Rational>,
        #[arg(long, value_parser = rational_arg)]
        tau: Option<Rational>,
        #[arg(long, value_enum, default_value = "out")]
        mode: ModeArg,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Robust ν-neighbourhood of a vertex set.
    Rn {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_parser = vlist_arg)]
        set: Option<VList>,
        #[arg(long, value_parser = rational_arg)]
        nu: Option<Rational>,
        #[arg(long, value_enum, default_value = "out")]
        direction: DirArg,
    },
    /// Shortest shifted walk between two clusters of a reduced digraph.
    ShiftedWalk {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        from: Option<usize>,
        #[arg(long)]
        to: Option<usize>,
        #[arg(long, value_parser = vlist_arg)]
        avoid: Option<VList>,
        #[arg(long)]
        t_max: Option<usize>,
        /// Use this Hamilton cycle as the 1-factor instead of a matched one.
        #[arg(long, value_parser = counts_arg)]
        cycle: Option<Counts>,
    },
    /// Shortest skewed traverse along a Hamilton 1-factor.
    SkewedTraverse {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        from: Option<usize>,
        #[arg(long)]
        to: Option<usize>,
        #[arg(long, value_parser = counts_arg)]
        cycle: Option<Counts>,
    },
    /// Move cluster load until every cluster holds `m`.
    Rebalance {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_parser = counts_arg)]
        loads: Option<Counts>,
        #[arg(long, value_parser = counts_arg)]
        slots: Option<Counts>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, value_enum, default_value = "traverse")]
        mode: RebalanceArg,
        /// Single step from this overfull cluster (needs `--under`).
        #[arg(long, requires = "under")]
        over: Option<usize>,
        #[arg(long, requires = "over")]
        under: Option<usize>,
        #[arg(long, value_parser = counts_arg)]
        cycle: Option<Counts>,
    },
    /// Extremal number ex(n, H) by exhaustive generation.
    ExNumber {
        #[arg(long)]
        n: Option<usize>,
        /// Pattern: a graph file or a name such as `K3`, `C4`, `P3`, `K2,3`, `petersen`.
        #[arg(long)]
        pattern: Option<String>,
    },
    /// Ramsey number R(H) up to a search limit.
    Ramsey {
        #[arg(long)]
        pattern: Option<String>,
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Perfect (or with `--maximum`, maximum) packing of a pattern.
    Packing {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        pattern: Option<String>,
        #[arg(long)]
        maximum: bool,
    },
    /// Greedy embedding along the regularity graph of given clusters.
    Embed {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        pattern: Option<String>,
        #[arg(long, value_parser = clusters_arg)]
        clusters: Option<Clusters>,
        #[arg(long, value_parser = vlist_arg)]
        exceptional: Option<VList>,
        #[arg(long, value_parser = rational_arg)]
        eps: Option<Rational>,
        #[arg(long, value_parser = rational_arg)]
        d: Option<Rational>,
        /// Cluster of each pattern vertex, in order.
        #[arg(long, value_parser = counts_arg)]
        sigma: Option<Counts>,
        #[arg(long)]
        s: Option<usize>,
    },
    /// Exact subgraph containment search.
    OracleEmbed {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        pattern: Option<String>,
    },
}

#[derive(Debug, Args)]
pub struct RegularArgs {
    #[command(flatten)]
    pub input: Input,
    #[command(flatten)]
    pub pair: Pair,
    #[arg(long, value_parser = rational_arg)]
    pub eps: Option<Rational>,
    #[arg(long, value_parser = rational_arg)]
    pub d: Option<Rational>,
    /// Scan this many random subsets instead of every qualifying one.
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    /// turan, chvatal, regular-tournament, haggkvist, antidirected, c6, cycle, path,
    /// complete, complete-digraph, directed-cycle, bipartite, named, random-graph,
    /// random-digraph, random-tournament, random-oriented, random-bipartite,
    /// blow-up, complement.
    #[arg(value_name = "FAMILY")]
    pub family: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub a: Option<usize>,
    #[arg(long)]
    pub b: Option<usize>,
    #[arg(long, value_parser = rational_arg)]
    pub p: Option<Rational>,
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long)]
    pub name: Option<String>,
    /// Source graph for `blow-up` and `complement`.
    #[arg(long)]
    pub from: Option<PathBuf>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Construct(_) => "construct",
            Command::Density { .. } => "density",
            Command::CheckRegular(_) => "check-regular",
            Command::CheckSuperregular(_) => "check-superregular",
            Command::Partition { .. } => "partition",
            Command::DegreeForm { .. } => "degree-form",
            Command::Reduce { .. } => "reduce",
            Command::Certify { .. } => "certify",
            Command::Hamilton { .. } => "hamilton",
            Command::OrientedHamilton { .. } => "oriented-hamilton",
            Command::OrientedPath { .. } => "oriented-path",
            Command::Matching { .. } => "matching",
            Command::OneFactor { .. } => "one-factor",
            Command::RotationHamilton { .. } => "rotation-hamilton",
            Command::Expander { .. } => "expander",
            Command::Rn { .. } => "rn",
            Command::ShiftedWalk { .. } => "shifted-walk",
            Command::SkewedTraverse { .. } => "skewed-traverse",
            Command::Rebalance { .. } => "rebalance",
            Command::ExNumber { .. } => "ex-number",
            Command::Ramsey { .. } => "ramsey",
            Command::Packing { .. } => "packing",
            Command::Embed { .. } => "embed",
            Command::OracleEmbed { .. } => "oracle-embed",
        }
    }
}
