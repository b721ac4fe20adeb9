use crate::args::*;
use crate::error::{need, usage, CliError, Result};
use crate::report::{big, rat, set, sets, Outcome, Verdict};
use reglab::constructions as cons;
use reglab::embedding::{self, blow_up, greedy_embed, packing_oracle, ramsey_oracle, subgraph_oracle_any, GreedyOutcome};
use reglab::graph::DEFAULT_MAX_VERTICES;
use reglab::hamiltonicity::{
    self as ham, certify, neutral_pairs, neutral_pairs_cycle, one_factor, rotation_extension_hamilton, CertificateKind, HamCycle, MatchingOutcome,
    OneFactorOutcome, OrientedOutcome, OrientedPattern, RotationOutcome,
};
use reglab::io::{parse_graph_file, write_digraph, write_graph, GraphFile};
use reglab::rational::to_f64;
use reglab::regularity::{self as reg, PairSpec, PropertyOutcome, RegularityVerdict, ScanMode, WitnessKind};
use reglab::robust_expansion::{self as rx, check_expander_capped, check_expander_sampled, robust_neighbourhood, Direction, ExpansionMode, ExpansionSpec};
use reglab::shifted_walks::*;
use reglab::szemeredi::{self as sz, CheckOptions, DegreeFormAudit, DegreeFormTrace, Partition};
use reglab::{Digraph, Graph, Rational, VertexSet};
use serde_json::{json, Value};
use std::collections::HashMap;
use std::path::{Path, PathBuf};

/// Common flags plus in-memory graphs that stand in for files during selftests.
pub struct Ctx {
    pub common: Common,
    pub fixtures: HashMap<String, GraphFile>,
}

impl Ctx {
    pub fn new(common: Common) -> Self {
        Ctx { common, fixtures: HashMap::new() }
    }

    fn seed(&self) -> u64 {
        self.common.seed.unwrap_or(sz::DEFAULT_SEED)
    }

    fn cap(&self, default: usize) -> usize {
        self.common.cap.unwrap_or(default)
    }

    fn read(&self, path: &Path) -> Result<GraphFile> {
        let key = path.to_string_lossy().into_owned();
        if let Some(g) = self.fixtures.get(&key) {
            return Ok(g.clone());
        }
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: key, source })?;
        Ok(parse_graph_file(&text, DEFAULT_MAX_VERTICES)?)
    }

    fn load(&self, input: &Input) -> Result<(GraphFile, String)> {
        let path = need(input.path.as_ref().or(input.flag.as_ref()), "input graph")?;
        Ok((self.read(path)?, path.to_string_lossy().into_owned()))
    }

    /// A graph file if one exists under that name, else a named small graph.
    fn pattern(&self, spec: &str) -> Result<GraphFile> {
        let path = PathBuf::from(spec);
        if self.fixtures.contains_key(spec) || path.is_file() {
            return self.read(&path);
        }
        Ok(GraphFile::Graph(cons::named_graph(spec)?))
    }

    fn write(&self, path: &Path, text: &str) -> Result<()> {
        std::fs::write(path, text).map_err(|source| CliError::Io { path: path.to_string_lossy().into_owned(), source })
    }
}

pub fn run(cmd: &Command, ctx: &Ctx) -> Result<Outcome> {
    match cmd {
        Command::Construct(a) => construct(a, ctx),
        Command::Density { input, pair } => density(input, pair, ctx),
        Command::CheckRegular(a) => check_regular(a, ctx, false),
        Command::CheckSuperregular(a) => check_regular(a, ctx, true),
        Command::Partition { input, eps, k0, samples } => partition(input, *eps, *k0, *samples, ctx),
        Command::DegreeForm { input, eps, d, k0, samples, output } => degree_form(input, *eps, *d, *k0, *samples, output.as_deref(), ctx),
        Command::Reduce { input, eps, d, clusters, exceptional, k0, samples, output } => {
            reduce(input, *eps, *d, clusters.as_ref(), exceptional.as_ref(), *k0, *samples, output.as_deref(), ctx)
        }
        Command::Certify { input, kind, eta } => certify_cmd(input, *kind, *eta, ctx),
        Command::Hamilton { input } => hamilton(input, ctx),
        Command::OrientedHamilton { input, word, alternating, directed } => oriented_hamilton(input, word.as_deref(), *alternating, *directed, ctx),
        Command::OrientedPath { input, from, to, word } => oriented_path(input, *from, *to, word.as_deref(), ctx),
        Command::Matching { input, pair } => matching(input, pair, ctx),
        Command::OneFactor { input } => one_factor_cmd(input, ctx),
        Command::RotationHamilton { input } => rotation(input, ctx),
        Command::Expander { input, nu, tau, mode, samples } => expander(input, *nu, *tau, *mode, *samples, ctx),
        Command::Rn { input, set, nu, direction } => rn(input, set.as_ref(), *nu, *direction, ctx),
        Command::ShiftedWalk { input, from, to, avoid, t_max, cycle } => shifted_walk(input, *from, *to, avoid.as_ref(), *t_max, cycle.as_ref(), ctx),
        Command::SkewedTraverse { input, from, to, cycle } => skewed_traverse(input, *from, *to, cycle.as_ref(), ctx),
        Command::Rebalance { input, loads, slots, m, mode, over, under, cycle } => {
            rebalance_cmd(input, loads.as_ref(), slots.as_ref(), *m, *mode, over.zip(*under), cycle.as_ref(), ctx)
        }
        Command::ExNumber { n, pattern } => ex_number(*n, pattern.as_deref(), ctx),
        Command::Ramsey { pattern, n_max } => ramsey(pattern.as_deref(), *n_max, ctx),
        Command::Packing { input, pattern, maximum } => packing(input, pattern.as_deref(), *maximum, ctx),
        Command::Embed { input, pattern, clusters, exceptional, eps, d, sigma, s } => {
            embed(input, pattern.as_deref(), clusters.as_ref(), exceptional.as_ref(), *eps, *d, sigma.as_ref(), *s, ctx)
        }
        Command::OracleEmbed { input, pattern } => oracle_embed(input, pattern.as_deref(), ctx),
    }
}

fn graph_of(g: GraphFile, cmd: &str) -> Result<Graph> {
    match g {
        GraphFile::Graph(g) => Ok(g),
        GraphFile::Digraph(_) => usage(format!("{cmd} needs an undirected graph")),
    }
}

fn digraph_of(g: GraphFile, cmd: &str) -> Result<Digraph> {
    match g {
        GraphFile::Digraph(d) => Ok(d),
        GraphFile::Graph(_) => usage(format!("{cmd} needs a digraph")),
    }
}

fn vset(n: usize, list: &VList) -> Result<VertexSet> {
    Ok(VertexSet::from_vertices(n, list.0.iter().copied())?)
}

fn summary(g: &GraphFile) -> Value {
    match g {
        GraphFile::Graph(g) => {
            let mut deg = g.degree_sequence();
            deg.sort_unstable();
            json!({"kind": "graph", "n": g.n(), "edges": g.edge_count(), "min_degree": g.min_degree(), "degrees": deg})
        }
        GraphFile::Digraph(d) => {
            let (mut out, mut inn) = d.degree_sequences();
            out.sort_unstable();
            inn.sort_unstable();
            json!({"kind": "digraph", "n": d.n(), "arcs": d.arc_count(), "min_semidegree": d.min_semidegree(), "out_degrees": out, "in_degrees": inn})
        }
    }
}

fn edges(g: &Graph) -> Value {
    g.edges().map(|(u, v)| json!([u, v])).collect()
}

fn arcs(d: &Digraph) -> Value {
    d.arcs().map(|(u, v)| json!([u, v])).collect()
}

fn prob(p: &Rational) -> Result<f64> {
    if *p < Rational::from_integer(0) || *p > Rational::from_integer(1) {
        return usage("--p must lie in [0, 1]");
    }
    Ok(to_f64(p))
}

fn construct(a: &ConstructArgs, ctx: &Ctx) -> Result<Outcome> {
    let family = need(a.family.as_deref(), "FAMILY")?;
    let seed = ctx.seed();
    let n = || need(a.n, "--n");
    let m = || need(a.m, "--m");
    let p = || need(a.p.as_ref(), "--p").and_then(prob);
    let mut out = Outcome::new(Verdict::Computed).param("family", family);
    let mut seeded = false;
    let g = match family {
        "turan" => GraphFile::Graph(cons::turan_graph(n()?, need(a.r, "--r")?)?),
        "chvatal" => GraphFile::Graph(cons::chvatal_extremal(n()?, need(a.r, "--r")?)?),
        "regular-tournament" => GraphFile::Digraph(cons::regular_tournament(m()?)?),
        "haggkvist" => GraphFile::Digraph(cons::haggkvist_graph(m()?)?),
        "antidirected" => GraphFile::Digraph(cons::antidirected_counterexample(m()?)?),
        "c6" => GraphFile::Graph(cons::c6_sharpness_graph(n()?)?),
        "cycle" => GraphFile::Graph(cons::cycle_graph(n()?)?),
        "path" => GraphFile::Graph(cons::path_graph(n()?)),
        "complete" => GraphFile::Graph(Graph::complete(n()?)),
        "complete-digraph" => GraphFile::Digraph(Digraph::complete(n()?)),
        "directed-cycle" => GraphFile::Digraph(Digraph::directed_cycle(n()?)),
        "bipartite" => GraphFile::Graph(cons::complete_bipartite(need(a.a, "--a")?, need(a.b, "--b")?)),
        "named" => GraphFile::Graph(cons::named_graph(need(a.name.as_deref(), "--name")?)?),
        "random-graph" => {
            seeded = true;
            GraphFile::Graph(cons::random_graph(n()?, p()?, seed)?)
        }
        "random-digraph" => {
            seeded = true;
            GraphFile::Digraph(cons::random_digraph(n()?, p()?, seed)?)
        }
        "random-tournament" => {
            seeded = true;
            GraphFile::Digraph(cons::random_tournament(n()?, seed))
        }
        "random-oriented" => {
            seeded = true;
            GraphFile::Digraph(cons::random_oriented(n()?, p()?, seed)?)
        }
        "random-bipartite" => {
            seeded = true;
            GraphFile::Graph(cons::random_bipartite(need(a.a, "--a")?, need(a.b, "--b")?, p()?, seed)?.0)
        }
        "blow-up" => {
            let r = graph_of(ctx.read(need(a.from.as_deref(), "--from")?)?, "blow-up")?;
            GraphFile::Graph(blow_up(&r, need(a.s, "--s")?)?)
        }
        "complement" => GraphFile::Graph(graph_of(ctx.read(need(a.from.as_deref(), "--from")?)?, "complement")?.complement()),
        other => return usage(format!("unknown family {other:?}")),
    };
    for (key, v) in [("n", a.n), ("r", a.r), ("m", a.m), ("a", a.a), ("b", a.b), ("s", a.s)] {
        if let Some(v) = v {
            out = out.param(key, v);
        }
    }
    if let Some(p) = &a.p {
        out = out.param("p", rat(p));
    }
    if let Some(name) = &a.name {
        out = out.param("name", name.as_str());
    }
    if seeded {
        out = out.seed(seed);
    }
    let text = reglab::io::write_graph_file(&g);
    match &a.output {
        Some(path) => {
            ctx.write(path, &text)?;
            out = out.param("output", path.to_string_lossy().into_owned());
        }
        None => out.stdout = Some(text),
    }
    Ok(out.witness(summary(&g)))
}

fn density(input: &Input, pair: &Pair, ctx: &Ctx) -> Result<Outcome> {
    let (g, name) = ctx.load(input)?;
    let n = g.n();
    let (left, right) = (need(pair.left.as_ref(), "--left")?, need(pair.right.as_ref(), "--right")?);
    let (a, b) = (vset(n, left)?, vset(n, right)?);
    let (count, d) = match &g {
        GraphFile::Graph(g) => (g.edges_between(&a, &b), g.density(&a, &b)?),
        GraphFile::Digraph(dg) => (dg.arcs_between(&a, &b), dg.density(&a, &b)?),
    };
    Ok(Outcome::new(Verdict::Computed)
        .param("graph", name)
        .param("left", left.0.clone())
        .param("right", right.0.clone())
        .witness(json!({"density": rat(&d), "edges_between": count})))
}

fn scan_mode(samples: Option<usize>, ctx: &Ctx, default_cap: usize) -> ScanMode {
    match samples {
        Some(samples) => ScanMode::Sampled { samples, seed: ctx.seed() },
        None => ScanMode::Exhaustive { cap: ctx.cap(default_cap) },
    }
}

fn regularity_outcome(v: &RegularityVerdict) -> Outcome {
    let mut out = Outcome::new(Verdict::holds_if(v.holds)).audit(json!({"checked_pairs": v.checked_pairs, "sampled": v.sampled}));
    if let Some(w) = &v.witness {
        let kind = match w.kind {
            WitnessKind::Subsets => "subsets",
            WitnessKind::Degree => "degree",
        };
        out = out.witness(json!({"kind": kind, "x": set(&w.x), "y": set(&w.y), "density": rat(&w.density), "deviation": rat(&w.deviation)}));
    }
    out
}

fn check_regular(a: &RegularArgs, ctx: &Ctx, superregular: bool) -> Result<Outcome> {
    let (g, name) = ctx.load(&a.input)?;
    let eps = need(a.eps, "--eps")?;
    let d = if superregular { need(a.d, "--d")? } else { a.d.unwrap_or_default() };
    let cmd = if superregular { "check-superregular" } else { "check-regular" };
    let mut params = Outcome::new(Verdict::Computed).param("graph", name).param("eps", rat(&eps));
    if superregular || a.d.is_some() {
        params = params.param("d", rat(&d));
    }
    let verdict = match (&a.pair.left, &a.pair.right, &g) {
        (Some(left), Some(right), _) => {
            params = params.param("left", left.0.clone()).param("right", right.0.clone());
            let spec = PairSpec::new(g.as_any(), vset(g.n(), left)?, vset(g.n(), right)?, eps, d);
            let mode = scan_mode(a.samples, ctx, reg::DEFAULT_PAIR_CAP);
            if superregular {
                reg::check_pair_superregular(&spec, mode)?
            } else {
                reg::check_pair_regular(&spec, mode)?
            }
        }
        (None, None, GraphFile::Digraph(dg)) => {
            let mode = scan_mode(a.samples, ctx, reg::DEFAULT_DIGRAPH_CAP);
            if superregular {
                reg::check_digraph_superregular(dg, eps, d, mode)?
            } else {
                reg::check_digraph_regular(dg, eps, d, mode)?
            }
        }
        _ => return usage(format!("{cmd} needs --left and --right (they may be omitted only for a digraph)")),
    };
    let mut out = regularity_outcome(&verdict);
    out.parameters = params.parameters;
    if let Some(samples) = a.samples {
        out = out.param("samples", samples).seed(ctx.seed());
    }
    Ok(out)
}

fn check_options(samples: Option<usize>, ctx: &Ctx) -> CheckOptions {
    CheckOptions { cap: ctx.cap(reg::DEFAULT_PAIR_CAP), samples: samples.unwrap_or(sz::DEFAULT_SAMPLES), seed: ctx.seed() }
}

fn partition_json(p: &Partition) -> Value {
    let exceptional = p.exceptional().map(|i| set(p.class(i))).unwrap_or_else(|| json!([]));
    let clusters: Vec<Value> = (0..p.len()).filter(|&i| Some(i) != p.exceptional()).map(|i| set(p.class(i))).collect();
    json!({"exceptional": exceptional, "clusters": clusters})
}

fn partition(input: &Input, eps: Option<Rational>, k0: Option<usize>, samples: Option<usize>, ctx: &Ctx) -> Result<Outcome> {
    let (g, name) = ctx.load(input)?;
    let (eps, k0) = (need(eps, "--eps")?, need(k0, "--k0")?);
    let opts = check_options(samples, ctx);
    let rp = sz::regularity_partition_any(g.as_any(), eps, k0, &opts)?;
    let boosts: Vec<Value> = rp
        .boosts
        .iter()
        .map(|b| {
            json!({
                "irregular_pairs": b.irregular_pairs,
                "balancing_classes": b.balancing_classes,
                "energy_before": big(&b.energy_before),
                "energy_after": big(&b.energy_after),
                "gain_bound": big(&b.gain_bound),
                "gain_exceeds_increment": b.gain_exceeds_increment,
            })
        })
        .collect();
    let within_cap = (rp.iterations as u128) <= rp.iteration_cap;
    let mut witness = partition_json(&rp.partition);
    witness["iterations"] = json!(rp.iterations);
    Ok(Outcome::new(Verdict::holds_if(within_cap && rp.energy_increasing()))
        .param("graph", name)
        .param("eps", rat(&eps))
        .param("k0", k0)
        .param("cap", opts.cap)
        .param("samples", opts.samples)
        .seed(opts.seed)
        .witness(witness)
        .audit(json!({
            "iteration_cap": rp.iteration_cap.to_string(),
            "energy_trace": rp.energy_trace.iter().map(big).collect::<Vec<_>>(),
            "boosts": boosts,
            "irregular_pairs": rp.irregular_pairs,
            "exhaustive": rp.exhaustive,
            "flags": rp.flags,
        })))
}

fn trace_json(t: &DegreeFormTrace) -> Value {
    json!({
        "red_pairs": t.red_pairs,
        "red_edges_deleted": t.red_edges_deleted,
        "evicted_step1": t.evicted_step1,
        "blue_pairs": t.blue_pairs,
        "marked_edges": t.marked_edges,
        "evicted_step3": t.evicted_step3,
        "blue_edges_deleted": t.blue_edges_deleted,
        "internal_edges_deleted": t.internal_edges_deleted,
        "leftover_step5": t.leftover_step5,
        "chunk_size": t.chunk_size,
    })
}

fn form_audit_json(a: &DegreeFormAudit) -> Value {
    json!({
        "cluster_count_and_exceptional": a.cluster_count_and_exceptional,
        "equal_sizes": a.equal_sizes,
        "out_degree_loss": a.out_degree_loss,
        "in_degree_loss": a.in_degree_loss,
        "clusters_empty": a.clusters_empty,
        "pairs_regular": a.pairs_regular,
        "pairs_exhaustive": a.pairs_exhaustive,
        "failures": a.failures,
    })
}

fn degree_form(input: &Input, eps: Option<Rational>, d: Option<Rational>, k0: Option<usize>, samples: Option<usize>, output: Option<&Path>, ctx: &Ctx) -> Result<Outcome> {
    let (g, name) = ctx.load(input)?;
    let (eps, d, k0) = (need(eps, "--eps")?, need(d, "--d")?, need(k0, "--k0")?);
    let opts = check_options(samples, ctx);
    let (partition, trace, inner, audit, text) = match &g {
        GraphFile::Graph(g) => {
            let f = sz::degree_form_opts(g, eps, d, k0, &opts)?;
            let audit = sz::audit_degree_form_opts(g, &f, &opts)?;
            let inner = json!({"epsilon": rat(&f.inner_epsilon), "k0": f.inner_k0, "iterations": f.inner_iterations, "flags": f.inner_flags});
            (f.partition.clone(), f.trace.clone(), inner, audit, write_graph(&f.pure))
        }
        GraphFile::Digraph(dg) => {
            let f = sz::degree_form_digraph_opts(dg, eps, d, k0, &opts)?;
            let audit = sz::audit_degree_form_digraph(dg, &f)?;
            let inner = json!({"epsilon": rat(&f.inner_epsilon), "k0": f.inner_k0, "iterations": f.inner_iterations, "flags": f.inner_flags});
            (f.partition.clone(), f.trace.clone(), inner, audit, write_digraph(&f.pure))
        }
    };
    let mut out = Outcome::new(Verdict::holds_if(audit.all_hold()))
        .param("graph", name)
        .param("eps", rat(&eps))
        .param("d", rat(&d))
        .param("k0", k0)
        .param("cap", opts.cap)
        .param("samples", opts.samples)
        .seed(opts.seed)
        .witness(partition_json(&partition))
        .audit(json!({"postconditions": form_audit_json(&audit), "trace": trace_json(&trace), "inner": inner}));
    if let Some(path) = output {
        ctx.write(path, &text)?;
        out = out.param("output", path.to_string_lossy().into_owned());
    }
    Ok(out)
}

fn property_json(p: &PropertyOutcome) -> Value {
    match p {
        PropertyOutcome::Holds => json!({"outcome": "holds"}),
        PropertyOutcome::Vacuous(why) => json!({"outcome": "vacuous", "detail": why}),
        PropertyOutcome::Violated(why) => json!({"outcome": "violated", "detail": why}),
    }
}

#[allow(clippy::too_many_arguments)]
fn reduce(
    input: &Input,
    eps: Option<Rational>,
    d: Option<Rational>,
    clusters: Option<&Clusters>,
    exceptional: Option<&VList>,
    k0: Option<usize>,
    samples: Option<usize>,
    output: Option<&Path>,
    ctx: &Ctx,
) -> Result<Outcome> {
    let (g, name) = ctx.load(input)?;
    let (eps, d) = (need(eps, "--eps")?, need(d, "--d")?);
    let n = g.n();
    let opts = check_options(samples, ctx);
    let mut out = Outcome::new(Verdict::Computed).param("graph", name).param("eps", rat(&eps)).param("d", rat(&d)).param("cap", opts.cap);
    // Without explicit clusters the pure graph and partition come from the degree form.
    let given = match clusters {
        Some(c) => {
            let ex = match exceptional {
                Some(list) => vset(n, list)?,
                None => VertexSet::new(n),
            };
            let cl = c.0.iter().map(|l| Ok(VertexSet::from_vertices(n, l.iter().copied())?)).collect::<Result<Vec<_>>>()?;
            out = out.param("clusters", c.0.clone()).param("exceptional", ex.to_vec());
            Some(Partition::with_exceptional(n, ex, cl)?)
        }
        None => {
            out = out.param("k0", need(k0, "--k0 (or --clusters)")?).param("samples", opts.samples).seed(opts.seed);
            None
        }
    };
    let k0 = k0.unwrap_or(1);
    match &g {
        GraphFile::Graph(g) => {
            let (pure, p) = match given {
                Some(p) => (g.clone(), p),
                None => {
                    let f = sz::degree_form_opts(g, eps, d, k0, &opts)?;
                    (f.pure, f.partition)
                }
            };
            let r = sz::reduced_graph_opts(&pure, &p, eps, d, &opts)?;
            let mindeg = sz::mindeg_audit(g, &r, None)?;
            out.verdict = Verdict::holds_if(!mindeg.is_violated());
            if let Some(path) = output {
                ctx.write(path, &write_graph(&r.r))?;
                out = out.param("output", path.to_string_lossy().into_owned());
            }
            Ok(out
                .witness(json!({"k": r.r.n(), "edge_count": r.r.edge_count(), "edges": edges(&r.r), "clusters": sets(&r.clusters), "exceptional": set(&r.exceptional)}))
                .audit(json!({"mindeg": property_json(&mindeg), "exhaustive": r.exhaustive})))
        }
        GraphFile::Digraph(dg) => {
            let (pure, p) = match given {
                Some(p) => (dg.clone(), p),
                None => {
                    let f = sz::degree_form_digraph_opts(dg, eps, d, k0, &opts)?;
                    (f.pure, f.partition)
                }
            };
            let r = sz::reduced_digraph_opts(&pure, &p, eps, d, &opts)?;
            if let Some(path) = output {
                ctx.write(path, &write_digraph(&r.r))?;
                out = out.param("output", path.to_string_lossy().into_owned());
            }
            Ok(out
                .witness(json!({"k": r.r.n(), "arc_count": r.r.arc_count(), "arcs": arcs(&r.r), "min_semidegree": r.r.min_semidegree(), "clusters": sets(&r.clusters), "exceptional": set(&r.exceptional)}))
                .audit(json!({"exhaustive": r.exhaustive})))
        }
    }
}

fn certify_cmd(input: &Input, kind: Option<CertKind>, eta: Option<Rational>, ctx: &Ctx) -> Result<Outcome> {
    let (g, name) = ctx.load(input)?;
    let kind = match need(kind, "--kind")? {
        CertKind::Dirac => CertificateKind::Dirac,
        CertKind::Posa => CertificateKind::Posa,
        CertKind::Chvatal => CertificateKind::Chvatal,
        CertKind::GhouilaHouri => CertificateKind::GhouilaHouri,
        CertKind::NashWilliams => CertificateKind::NashWilliams,
        CertKind::Robdegseq => CertificateKind::RobDegSeq(need(eta, "--eta")?),
    };
    let c = certify(g.as_any(), &kind)?;
    let mut out = Outcome::new(Verdict::holds_if(c.satisfied)).param("graph", name).param("kind", kind.name());
    if let Some(eta) = &eta {
        out = out.param("eta", rat(eta));
    }
    Ok(out.witness(json!({"failing_index": c.failing_index, "reason": c.reason})))
}

fn cycle_outcome(c: Option<&HamCycle>, valid: impl Fn(&HamCycle) -> bool) -> Outcome {
    match c {
        Some(c) => Outcome::new(Verdict::Found).witness(json!({"order": c.order})).audit(json!({"valid": valid(c)})),
        None => Outcome::new(Verdict::None),
    }
}

fn hamilton(input: &Input, ctx: &Ctx) -> Result<Outcome> {
    let (g, name) = ctx.load(input)?;
    let cap = ctx.cap(ham::DEFAULT_HAMILTON_CAP);
    let out = match &g {
        GraphFile::Graph(g) => cycle_outcome(ham::hamilton_oracle_capped(g, cap)?.as_ref(), |c| c.is_valid_graph(g)),
        GraphFile::Digraph(d) => cycle_outcome(ham::hamilton_oracle_digraph_capped(d, cap)?.as_ref(), |c| c.is_valid_digraph(d)),
    };
    Ok(out.param("graph", name).param("cap", cap))
}

fn pattern_of(word: Option<&str>, alternating: bool, directed: bool, n: usize) -> Result<OrientedPattern> {
    match (word, alternating, directed) {
        (Some(w), false, false) => Ok(OrientedPattern::parse(w)?),
        (None, true, false) => Ok(OrientedPattern::alternating(n)),
        (None, false, true) => Ok(OrientedPattern::directed(n)),
        _ => usage("give exactly one of --word, --alternating, --directed"),
    }
}

fn word_string(p: &OrientedPattern) -> String {
    p.word().iter().map(|d| if *d == ham::Dir::F { 'f' } else { 'b' }).collect()
}

fn oriented_hamilton(input: &Input, word: Option<&str>, alternating: bool, directed: bool, ctx: &Ctx) -> Result<Outcome> {
    let (g, name) = ctx.load(input)?;
    let d = digraph_of(g, "oriented-hamilton")?;
    let pattern = pattern_of(word, alternating, directed, d.n())?;
    let cap = ctx.cap(ham::DEFAULT_PATTERN_CAP);
    let np = neutral_pairs(&d);
    let mut audit = json!({
        "host_neutral_pairs": np.count,
        "host_two_cycles": np.two_cycles,
        "pattern_neutral_pairs": neutral_pairs_cycle(&pattern),
        "pattern_sinks": pattern.sinks(),
        "pattern_sources": pattern.sources(),
    });
    let out = match ham::oriented_hamilton_oracle_capped(&d, &pattern, cap)? {
        OrientedOutcome::Found(c) => {
            audit["realizes"] = json!(c.realizes(&d, &pattern));
            Outcome::new(Verdict::Found).witness(json!({"order": c.order}))
        }
        OrientedOutcome::NotFound => Outcome::new(Verdict::None),
        OrientedOutcome::Impossible(why) => {
            audit["impossible"] = json!(why);
            Outcome::new(Verdict::None)
        }
    };
    Ok(out.param("graph", name).param("word", word_string(&pattern)).param("cap", cap).audit(audit))
}

fn oriented_path(input: &Input, from: Option<usize>, to: Option<usize>, word: Option<&str>, ctx: &Ctx) -> Result<Outcome> {
    let (g, name) = ctx.load(input)?;
    let d = digraph_of(g, "oriented-path")?;
    let (x, y) = (need(from, "--from")?, need(to, "--to")?);
    let pattern = OrientedPattern::parse(need(word, "--word")?)?;
    let cap = ctx.cap(ham::DEFAULT_PATTERN_CAP);
    let path = ham::find_oriented_path_capped(&d, x, y, &pattern, cap)?;
    let mut out = Outcome::new(Verdict::found_if(path.is_some()));
    if let Some(p) = path {
        out = out.witness(json!({"path": p}));
    }
    Ok(out.param("graph", name).param("from", x).param("to", y).param("word", word_string(&pattern)).param("cap", cap))
}

fn matching(input: &Input, pair: &Pair, ctx: &Ctx) -> Result<Outcome> {
    let (g, name) = ctx.load(input)?;
    let g = graph_of(g, "matching")?;
    let (left, right) = (need(pair.left.as_ref(), "--left")?, need(pair.right.as_ref(), "--right")?);
    for &v in left.0.iter().chain(&right.0) {
        if v >= g.n() {
            return Err(reglab::LabError::VertexOutOfRange { vertex: v, n: g.n() }.into());
        }
    }
    let (a, b) = (&left.0, &right.0);
    let out = match ham::bipartite_matching_graph(&g, a, b)? {
        MatchingOutcome::Saturating(mate) => {
            let pairs: Vec<Value> = mate.iter().enumerate().map(|(i, &j)| json!([a[i], b[j]])).collect();
            Outcome::new(Verdict::Found).witness(json!({"matching": pairs}))
        }
        MatchingOutcome::HallViolator { matching, set, neighbourhood } => {
            let pairs: Vec<Value> = matching.iter().enumerate().filter_map(|(i, j)| j.map(|j| json!([a[i], b[j]]))).collect();
            let s: Vec<usize> = set.iter().map(|&i| a[i]).collect();
            let t: Vec<usize> = neighbourhood.iter().map(|&j| b[j]).collect();
            Outcome::new(Verdict::None).witness(json!({"violator": s, "neighbourhood": t, "matching": pairs}))
        }
    };
    Ok(out.param("graph", name).param("left", a.clone()).param("right", b.clone()))
}

fn one_factor_cmd(input: &Input, ctx: &Ctx) -> Result<Outcome> {
    let (g, name) = ctx.load(input)?;
    let d = digraph_of(g, "one-factor")?;
    let out = match one_factor(&d)? {
        OneFactorOutcome::Factor(f) => Outcome::new(Verdict::Found).witness(json!({"cycles": f.cycles})).audit(json!({"valid": f.is_valid(&d)})),
        OneFactorOutcome::NoFactor { violator, out_neighbourhood } => {
            Outcome::new(Verdict::None).witness(json!({"violator": violator, "out_neighbourhood": out_neighbourhood}))
        }
    };
    Ok(out.param("graph", name))
}

fn rotation(input: &Input, ctx: &Ctx) -> Result<Outcome> {
    let (g, name) = ctx.load(input)?;
    let d = digraph_of(g, "rotation-hamilton")?;
    let r = rotation_extension_hamilton(&d)?;
    let t = &r.trace;
    let trace = json!({
        "initial_cycles": t.initial_cycles,
        "extensions": t.extensions,
        "case1": t.case1,
        "case2": t.case2,
        "rotations": t.rotations,
        "absorptions": t.absorptions,
    });
    let out = match &r.outcome {
        RotationOutcome::Cycle(c) => Outcome::new(Verdict::Found).witness(json!({"order": c.order})).audit(json!({"valid": c.is_valid_digraph(&d), "trace": trace})),
        RotationOutcome::Failed { step, path_len, detail } => Outcome::new(Verdict::None).audit(json!({
            "failed_step": format!("{step:?}").to_lowercase(),
            "path_len": path_len,
            "detail": detail,
            "trace": trace,
        })),
    };
    Ok(out.param("graph", name))
}

fn expander(input: &Input, nu: Option<Rational>, tau: Option<Rational>, mode: ModeArg, samples: Option<usize>, ctx: &Ctx) -> Result<Outcome> {
    let (g, name) = ctx.load(input)?;
    let d = digraph_of(g, "expander")?;
    let (nu, tau) = (need(nu, "--nu")?, need(tau, "--tau")?);
    let (mode, mode_name) = match mode {
        ModeArg::Out => (ExpansionMode::Out, "out"),
        ModeArg::In => (ExpansionMode::In, "in"),
        ModeArg::Di => (ExpansionMode::Di, "di"),
    };
    let spec = ExpansionSpec::new(nu, tau, mode)?;
    let mut out = Outcome::new(Verdict::Computed).param("graph", name).param("nu", rat(&nu)).param("tau", rat(&tau)).param("mode", mode_name);
    let v = match samples {
        Some(s) => {
            out = out.param("samples", s).seed(ctx.seed());
            check_expander_sampled(&d, &spec, s, ctx.seed())?
        }
        None => {
            let cap = ctx.cap(rx::DEFAULT_EXPANDER_CAP);
            out = out.param("cap", cap);
            check_expander_capped(&d, &spec, cap)?
        }
    };
    out.verdict = Verdict::holds_if(v.holds);
    let mut audit = json!({"exhaustive": v.exhaustive, "sets_checked": v.sets_checked});
    if let Some(viol) = &v.violator {
        let dir = match viol.direction {
            Direction::Out => "out",
            Direction::In => "in",
        };
        audit["violator_revalidates"] = json!(viol.revalidate(&d, &spec)?);
        out = out.witness(json!({"set": viol.set, "direction": dir, "neighbourhood": viol.neighbourhood, "required": rat(&viol.required)}));
    }
    Ok(out.audit(audit))
}

fn rn(input: &Input, list: Option<&VList>, nu: Option<Rational>, direction: DirArg, ctx: &Ctx) -> Result<Outcome> {
    let (g, name) = ctx.load(input)?;
    let d = digraph_of(g, "rn")?;
    let list = need(list, "--set")?;
    let nu = need(nu, "--nu")?;
    let (dir, dir_name) = match direction {
        DirArg::Out => (Direction::Out, "out"),
        DirArg::In => (Direction::In, "in"),
    };
    let r = robust_neighbourhood(&d, &vset(d.n(), list)?, nu, dir)?;
    Ok(Outcome::new(Verdict::Computed)
        .param("graph", name)
        .param("set", list.0.clone())
        .param("nu", rat(&nu))
        .param("direction", dir_name)
        .witness(json!({"neighbourhood": set(&r), "size": r.len()})))
}

fn factor_context(d: Digraph, cycle: Option<&Counts>, need_hamiltonian: bool, ctx: &Ctx) -> Result<(FactorContext, &'static str)> {
    if let Some(c) = cycle {
        return Ok((FactorContext::with_hamilton_cycle(d, &c.0)?, "given"));
    }
    if need_hamiltonian {
        let cap = ctx.cap(ham::DEFAULT_HAMILTON_CAP);
        return match ham::hamilton_oracle_digraph_capped(&d, cap)? {
            Some(c) => Ok((FactorContext::with_hamilton_cycle(d, &c.order)?, "hamilton-oracle")),
            None => usage("the digraph has no Hamilton cycle to use as F"),
        };
    }
    Ok((FactorContext::from_one_factor(d)?, "matching"))
}

fn shifted_walk(input: &Input, from: Option<usize>, to: Option<usize>, avoid: Option<&VList>, t_max: Option<usize>, cycle: Option<&Counts>, ctx: &Ctx) -> Result<Outcome> {
    let (g, name) = ctx.load(input)?;
    let d = digraph_of(g, "shifted-walk")?;
    let (a, b) = (need(from, "--from")?, need(to, "--to")?);
    let avoid = avoid.map(|l| l.0.clone()).unwrap_or_default();
    let t_max = t_max.unwrap_or(d.n());
    let (fc, source) = factor_context(d, cycle, false, ctx)?;
    let w = find_shifted_walk(&fc, a, b, &avoid, t_max)?;
    let mut out = Outcome::new(Verdict::found_if(w.is_some()))
        .param("graph", name)
        .param("from", a)
        .param("to", b)
        .param("avoid", avoid.clone())
        .param("t_max", t_max)
        .param("factor", source);
    if let Some(w) = w {
        let au = audit_shifted_walk(&fc, &w, a, b, &avoid);
        out = out
            .witness(json!({"entries": w.entries, "exits": w.exits, "t": w.cycles_traversed(), "walk": w.expand(&fc)}))
            .audit(json!({
                "all_hold": au.all_hold(),
                "endpoints": au.endpoints,
                "exits_are_predecessors": au.exits_are_predecessors,
                "hops_are_edges": au.hops_are_edges,
                "avoids_internally": au.avoids_internally,
                "equal_visits": au.equal_visits,
                "unique_entries": au.unique_entries,
                "unique_exits": au.unique_exits,
            }));
    }
    Ok(out.merge_audit(json!({"factor_cycles": fc.factor.cycles})))
}

fn traverse_json(t: &SkewedTraverse) -> Value {
    json!({"edges": t.edges, "length": t.length(), "sources": t.sources()})
}

fn skewed_traverse(input: &Input, from: Option<usize>, to: Option<usize>, cycle: Option<&Counts>, ctx: &Ctx) -> Result<Outcome> {
    let (g, name) = ctx.load(input)?;
    let d = digraph_of(g, "skewed-traverse")?;
    let (a, b) = (need(from, "--from")?, need(to, "--to")?);
    let (fc, source) = factor_context(d, cycle, true, ctx)?;
    let t = find_skewed_traverse(&fc, a, b)?;
    let mut out = Outcome::new(Verdict::found_if(t.is_some())).param("graph", name).param("from", a).param("to", b).param("factor", source);
    if let Some(t) = t {
        out = out.witness(traverse_json(&t)).audit(json!({"valid": t.is_valid(&fc, a, b), "walk": t.to_walk(&fc)}));
    }
    Ok(out.merge_audit(json!({"cycle": fc.factor.cycles[0]})))
}

fn recipe_json(fc: &FactorContext, r: &Recipe) -> Value {
    let delta = recipe_delta(fc, r);
    match r {
        Recipe::Traverse { traverse, consumed } => json!({"kind": "traverse", "traverse": traverse_json(traverse), "consumed": consumed, "delta": delta}),
        Recipe::Walk { first, second, walk, copies } => json!({
            "kind": "walk",
            "first": traverse_json(first),
            "second": traverse_json(second),
            "walk": walk,
            "copies": copies,
            "delta": delta,
        }),
    }
}

#[allow(clippy::too_many_arguments)]
fn rebalance_cmd(
    input: &Input,
    loads: Option<&Counts>,
    slots: Option<&Counts>,
    m: Option<usize>,
    mode: RebalanceArg,
    step: Option<(usize, usize)>,
    cycle: Option<&Counts>,
    ctx: &Ctx,
) -> Result<Outcome> {
    let (g, name) = ctx.load(input)?;
    let d = digraph_of(g, "rebalance")?;
    let loads = need(loads, "--loads")?;
    let m = need(m, "--m")?;
    let slots = slots.map(|s| s.0.clone()).unwrap_or_else(|| vec![usize::MAX / 4; loads.0.len()]);
    let (mode, mode_name) = match mode {
        RebalanceArg::Traverse => (RebalanceMode::Traverse, "traverse"),
        RebalanceArg::Walk => (RebalanceMode::Walk, "walk"),
    };
    let (fc, source) = factor_context(d, cycle, true, ctx)?;
    let start = ClusterAssignment::new(loads.0.clone(), slots, m)?;
    let (end, recipes) = match step {
        Some((i, j)) => {
            let (end, r) = rebalance(&start, &fc, i, j, mode)?;
            (end, vec![r])
        }
        None => balance(&start, &fc, mode)?,
    };
    let mut out = Outcome::new(Verdict::holds_if(end.is_balanced()))
        .param("graph", name)
        .param("loads", loads.0.clone())
        .param("m", m)
        .param("mode", mode_name)
        .param("factor", source);
    if let Some((i, j)) = step {
        out = out.param("over", i).param("under", j);
    }
    Ok(out
        .witness(json!({"loads": end.a, "steps": recipes.iter().map(|r| recipe_json(&fc, r)).collect::<Vec<_>>()}))
        .audit(json!({"imbalance_before": start.imbalance(), "imbalance_after": end.imbalance(), "total_before": start.total(), "total_after": end.total(), "cycle": fc.factor.cycles[0]})))
}

fn pattern_graph(ctx: &Ctx, spec: Option<&str>, cmd: &str) -> Result<(Graph, String)> {
    let spec = need(spec, "--pattern")?;
    Ok((graph_of(ctx.pattern(spec)?, cmd)?, spec.to_string()))
}

fn ex_number(n: Option<usize>, pattern: Option<&str>, ctx: &Ctx) -> Result<Outcome> {
    let n = need(n, "--n")?;
    let (h, spec) = pattern_graph(ctx, pattern, "ex-number")?;
    let cap = ctx.cap(embedding::DEFAULT_EXTREMAL_ORDER);
    let r = embedding::extremal_number_capped(n, &h, cap)?;
    Ok(Outcome::new(Verdict::Found)
        .param("n", n)
        .param("pattern", spec)
        .param("cap", cap)
        .witness(json!({"value": r.value, "extremal": r.extremal.iter().map(edges).collect::<Vec<_>>()}))
        .audit(json!({"extremal_graphs": r.extremal.len()})))
}

fn ramsey(pattern: Option<&str>, n_max: Option<usize>, ctx: &Ctx) -> Result<Outcome> {
    let (h, spec) = pattern_graph(ctx, pattern, "ramsey")?;
    let n_max = n_max.unwrap_or(embedding::DEFAULT_RAMSEY_ORDER);
    let r = ramsey_oracle(&h, n_max)?;
    Ok(Outcome::new(Verdict::found_if(r.number.is_some()))
        .param("pattern", spec)
        .param("n_max", n_max)
        .witness(json!({
            "number": r.number,
            "largest_avoiding": r.largest_avoiding,
            "certificate_red_edges": r.certificate.as_ref().map(edges),
        }))
        .audit(json!({"searched_up_to": r.searched_up_to})))
}

fn packing(input: &Input, pattern: Option<&str>, maximum: bool, ctx: &Ctx) -> Result<Outcome> {
    let (g, name) = ctx.load(input)?;
    let g = graph_of(g, "packing")?;
    let (f, spec) = pattern_graph(ctx, pattern, "packing")?;
    let r = packing_oracle(&g, &f, !maximum)?;
    let valid = r.copies.iter().all(|e| e.is_valid(&f, &g));
    Ok(Outcome::new(Verdict::holds_if(r.perfect))
        .param("graph", name)
        .param("pattern", spec)
        .param("mode", if maximum { "maximum" } else { "perfect" })
        .witness(json!({"copies": r.copies.iter().map(|e| e.map.clone()).collect::<Vec<_>>(), "perfect": r.perfect}))
        .audit(json!({"copies_valid": valid, "divisible": f.n() > 0 && g.n() % f.n() == 0})))
}

#[allow(clippy::too_many_arguments)]
fn embed(
    input: &Input,
    pattern: Option<&str>,
    clusters: Option<&Clusters>,
    exceptional: Option<&VList>,
    eps: Option<Rational>,
    d: Option<Rational>,
    sigma: Option<&Counts>,
    s: Option<usize>,
    ctx: &Ctx,
) -> Result<Outcome> {
    let (g, name) = ctx.load(input)?;
    let g = graph_of(g, "embed")?;
    let (h, spec) = pattern_graph(ctx, pattern, "embed")?;
    let clusters = need(clusters, "--clusters")?;
    let (eps, d, sigma, s) = (need(eps, "--eps")?, need(d, "--d")?, need(sigma, "--sigma")?, need(s, "--s")?);
    let n = g.n();
    let ex = match exceptional {
        Some(l) => vset(n, l)?,
        None => VertexSet::new(n),
    };
    let cl = clusters.0.iter().map(|l| Ok(VertexSet::from_vertices(n, l.iter().copied())?)).collect::<Result<Vec<_>>>()?;
    let p = Partition::with_exceptional(n, ex, cl)?;
    let r = sz::regularity_graph(&g, &p, eps, d)?;
    let rep = greedy_embed(&h, &g, &r, &sigma.0, s)?;
    let out = match &rep.outcome {
        GreedyOutcome::Embedded(e) => Outcome::new(Verdict::Found)
            .witness(json!({"map": e.map, "candidate_trace": e.candidate_trace}))
            .audit(json!({"valid": e.is_valid(&h, &g), "delta": rep.delta, "size_bound_held": rep.size_bound_held})),
        GreedyOutcome::Stuck(fp) => Outcome::new(Verdict::None).audit(json!({
            "stuck_at": fp.step,
            "candidates": fp.candidates,
            "sizes": fp.sizes,
            "delta": rep.delta,
            "size_bound_held": rep.size_bound_held,
        })),
    };
    Ok(out
        .param("graph", name)
        .param("pattern", spec)
        .param("clusters", clusters.0.clone())
        .param("eps", rat(&eps))
        .param("d", rat(&d))
        .param("sigma", sigma.0.clone())
        .param("s", s)
        .merge_audit(json!({"regularity_graph_edges": edges(&r.r)})))
}

fn oracle_embed(input: &Input, pattern: Option<&str>, ctx: &Ctx) -> Result<Outcome> {
    let (g, name) = ctx.load(input)?;
    let spec = need(pattern, "--pattern")?;
    let h = ctx.pattern(spec)?;
    let found = subgraph_oracle_any(h.as_any(), g.as_any())?;
    let mut out = Outcome::new(Verdict::found_if(found.is_some())).param("graph", name).param("pattern", spec);
    if let Some(e) = found {
        let valid = match (&h, &g) {
            (GraphFile::Graph(h), GraphFile::Graph(g)) => e.is_valid(h, g),
            (GraphFile::Digraph(h), GraphFile::Digraph(g)) => e.is_valid_digraph(h, g),
            _ => false,
        };
        out = out.witness(json!({"map": e.map})).audit(json!({"valid": valid}));
    }
    Ok(out)
}
