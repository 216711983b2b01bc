//! `cutlab` — run oracles, online algorithms, adversary families, advice
//! schemes, regret players, order searches, and scenario sweeps from the
//! command line. Outputs are JSON or CSV files; every stochastic command
//! takes a master seed and is fully reproducible.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;
use std::path::{Path, PathBuf};

use cutlab::advice::{
    advice_optimal, min_degree_advice, min_degree_tape, tape_for_optimal, AdviceTape,
};
use cutlab::adversaries::{gen_path_attachment, gen_clique_pair, gen_gnp, gen_isolated_vertex, gen_attached_vertex, FamilyInstance};
use cutlab::algorithms::by_key;
use cutlab::engine::{run, OnlineCutAlgorithm};
use cutlab::graph::{ArrivalOrder, Graph};
use cutlab::greedy_order::{
    construct_maxcut_order, construct_mincut_order, verify_min_over_orders,
};
use cutlab::harness::{emit_report, run_scenario, ExperimentConfig, ExperimentResult, Scenario};
use cutlab::oracles::{brute_force_maxcut, brute_force_mincut, stoer_wagner_mincut, Sense};
use cutlab::regret::{
    coinflip_p3_adversary, ftco, path_adversary, regret, telescoping_identity_check,
    uniform_edge_player, WeightSequence,
};
use cutlab::seeding::stream_seed;

#[derive(Parser)]
#[command(name = "cutlab", version, about = "online minimum-cut laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact offline optima for a graph file, cross-checked between oracles.
    Oracle(OracleArgs),
    /// Adversarial instance families.
    #[command(subcommand)]
    Family(FamilyCommand),
    /// One online run on a fixed graph and order.
    Run(RunArgs),
    /// Scenario sweep with CSV/JSON reports; exits nonzero if any acceptance
    /// predicate fails.
    Sweep(SweepArgs),
    /// Regret players on weight sequences.
    Regret(RegretArgs),
    /// Advice tapes: generate, spend, and account for bits.
    Advice(AdviceArgs),
    /// Order search and constructive order builders.
    Permsearch(PermsearchArgs),
    /// Re-emit reports from a saved sweep result.
    Report(ReportArgs),
}

#[derive(Args)]
struct OracleArgs {
    /// Graph file (`p <n> <m>` header, `e <u> <v> [<w>]` lines).
    #[arg(long)]
    graph: PathBuf,
    /// min | max
    #[arg(long, default_value = "min")]
    sense: String,
    /// Output JSON path (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum FamilyCommand {
    /// Generate one instance: graph file plus a JSON sidecar with role labels.
    Gen(FamilyGenArgs),
}

#[derive(Args)]
struct FamilyGenArgs {
    /// isolated | attached | path-attach | clique-pair | gnp
    #[arg(long)]
    family: String,
    #[arg(long)]
    n: usize,
    /// Connectivity parameter for attached/clique-pair.
    #[arg(long)]
    k: Option<usize>,
    /// Clique size for clique-pair; edge probability for gnp.
    #[arg(long)]
    p: Option<f64>,
    /// Prefix split for path-attach/clique-pair as a bitstring, e.g. `1100` (1 = S or C).
    #[arg(long)]
    labels: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path prefix; writes `<out>.graph` and `<out>.json`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    graph: PathBuf,
    /// trivial | sparse | greedy-min | greedy-max | advice-optimal | min-degree
    #[arg(long)]
    alg: String,
    /// Comma-separated vertex ids; a seeded random order if omitted.
    #[arg(long)]
    order: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Advice tape as `<hex>:<bits>`; generated when the algorithm needs one
    /// and no tape is given.
    #[arg(long)]
    tape: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// classic-bounds | advice | random-order | sparse | gnp | regret-upper |
    /// regret-lower | greedy-order
    scenario: String,
    /// Flat `key = value` config file; CLI flags override its keys.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    /// Comma-separated algorithm keys.
    #[arg(long)]
    alg: Option<String>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    budget: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Report directory (defaults to `sweep-<scenario>`).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RegretArgs {
    /// ftco | uniform
    #[arg(long, default_value = "ftco")]
    player: String,
    /// Base graph file; defaults to a path on `--n` vertices.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    /// Weight-sequence JSON file; generated by `--adversary` if omitted.
    #[arg(long)]
    seq: Option<PathBuf>,
    /// path | coinflip
    #[arg(long)]
    adversary: Option<String>,
    #[arg(long, default_value_t = 100)]
    steps: usize,
    #[arg(long, default_value_t = 0.3)]
    eps: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Trace CSV path (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AdviceArgs {
    #[arg(long)]
    graph: PathBuf,
    /// optimal | min-degree
    #[arg(long, default_value = "optimal")]
    scheme: String,
    /// Comma-separated vertex ids; a seeded random order if omitted.
    #[arg(long)]
    order: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PermsearchArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Algorithm to search over (exhaustive, n <= 8).
    #[arg(long, default_value = "greedy-min")]
    alg: String,
    /// min | max
    #[arg(long, default_value = "min")]
    objective: String,
    /// Target value; the brute-force optimum if omitted.
    #[arg(long)]
    target: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    /// `result.json` written by `sweep`.
    #[arg(long)]
    result: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

fn main() {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(2);
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Oracle(args) => cmd_oracle(args),
        Command::Family(FamilyCommand::Gen(args)) => cmd_family_gen(args),
        Command::Run(args) => cmd_run(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Regret(args) => cmd_regret(args),
        Command::Advice(args) => cmd_advice(args),
        Command::Permsearch(args) => cmd_permsearch(args),
        Command::Report(args) => cmd_report(args),
    }
}

fn load_graph(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading graph file {}", path.display()))?;
    Graph::from_text(&text).with_context(|| format!("parsing graph file {}", path.display()))
}

fn parse_order(g: &Graph, spec: Option<&str>, seed: u64) -> Result<ArrivalOrder> {
    match spec {
        Some(text) => {
            let ids: Vec<usize> = text
                .split(',')
                .map(|tok| tok.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .context("parsing --order")?;
            Ok(ArrivalOrder::new(ids)?)
        }
        None => Ok(cutlab::engine::seeded_order(
            g.n(),
            stream_seed(seed, "cli-order", 0),
        )),
    }
}

fn write_or_print(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(path, content)
                .with_context(|| format!("writing {}", path.display()))?;
            eprintln!("wrote {}", path.display());
        }
        None => println!("{content}"),
    }
    Ok(())
}

fn cmd_oracle(args: OracleArgs) -> Result<i32> {
    let g = load_graph(&args.graph)?;
    let output = match args.sense.as_str() {
        "min" => {
            let (value, witness) = brute_force_mincut(&g)?;
            let sw = if g.n() >= 2 {
                Some(stoer_wagner_mincut(&g)?.0)
            } else {
                None
            };
            json!({
                "sense": "min",
                "value": value,
                "witness_x": witness.vertices_on(cutlab::graph::Side::X),
                "stoer_wagner_value": sw,
                "oracles_agree": sw.map(|v| v == value),
            })
        }
        "max" => {
            let (value, witness) = brute_force_maxcut(&g)?;
            json!({
                "sense": "max",
                "value": value,
                "witness_x": witness.vertices_on(cutlab::graph::Side::X),
            })
        }
        other => bail!("unknown sense '{other}' (use min or max)"),
    };
    write_or_print(args.out.as_deref(), &serde_json::to_string_pretty(&output)?)?;
    Ok(0)
}

fn cmd_family_gen(args: FamilyGenArgs) -> Result<i32> {
    let labels: Option<Vec<bool>> = args.labels.as_deref().map(|s| {
        s.chars()
            .map(|c| match c {
                '1' => Ok(true),
                '0' => Ok(false),
                other => Err(anyhow!("labels must be 0/1, found '{other}'")),
            })
            .collect::<Result<Vec<bool>>>()
    }).transpose()?;
    let balanced = |len: usize| -> Vec<bool> { (0..len).map(|j| j < len / 2).collect() };

    let (graph, sidecar) = match args.family.as_str() {
        "isolated" => instance_parts(gen_isolated_vertex(args.n)?),
        "attached" => instance_parts(gen_attached_vertex(args.n, args.k.unwrap_or(1))?),
        "path-attach" => {
            let labels = labels.unwrap_or_else(|| balanced(args.n.saturating_sub(4)));
            instance_parts(gen_path_attachment(args.n, &labels)?)
        }
        "clique-pair" => {
            let p = args.p.unwrap_or(4.0) as usize;
            let labels = labels.unwrap_or_else(|| balanced(args.n.saturating_sub(2 * p)));
            instance_parts(gen_clique_pair(args.n, p, args.k.unwrap_or(1), &labels)?)
        }
        "gnp" => {
            let prob = args.p.unwrap_or(0.5);
            let g = gen_gnp(args.n, prob, args.seed)?;
            let sidecar = json!({
                "label": format!("gnp(n={},p={},seed={})", args.n, prob, args.seed),
                "n": args.n, "m": g.m(), "p": prob, "seed": args.seed,
            });
            (g, sidecar)
        }
        other => bail!("unknown family '{other}'"),
    };
    let graph_path = args.out.with_extension("graph");
    let json_path = args.out.with_extension("json");
    write_or_print(Some(&graph_path), &graph.to_text())?;
    write_or_print(Some(&json_path), &serde_json::to_string_pretty(&sidecar)?)?;
    Ok(0)
}

fn instance_parts(inst: FamilyInstance) -> (Graph, serde_json::Value) {
    let sidecar = json!({
        "label": inst.label,
        "n": inst.graph.n(),
        "m": inst.graph.m(),
        "roles": inst.roles,
    });
    (inst.graph, sidecar)
}

fn algorithm_by_key(key: &str) -> Result<Box<dyn OnlineCutAlgorithm>> {
    match key {
        "advice-optimal" => Ok(advice_optimal()),
        "min-degree" => Ok(min_degree_advice()),
        other => by_key(other).ok_or_else(|| anyhow!("unknown algorithm '{other}'")),
    }
}

fn cmd_run(args: RunArgs) -> Result<i32> {
    let g = load_graph(&args.graph)?;
    let alg = algorithm_by_key(&args.alg)?;
    let order = parse_order(&g, args.order.as_deref(), args.seed)?;
    let tape = if alg.uses_advice() {
        Some(match args.tape.as_deref() {
            Some(spec) => {
                let (hex, bits) = spec
                    .split_once(':')
                    .ok_or_else(|| anyhow!("tape must be `<hex>:<bits>`"))?;
                AdviceTape::from_hex(hex, bits.parse().context("parsing tape bit length")?)?
            }
            None => match args.alg.as_str() {
                "advice-optimal" => tape_for_optimal(&g, &order)?,
                "min-degree" => min_degree_tape(&g, &order)?,
                _ => bail!("no tape generator for '{}'", args.alg),
            },
        })
    } else {
        if args.tape.is_some() {
            bail!("algorithm '{}' does not consume advice", args.alg);
        }
        None
    };
    let record = run(&g, &order, alg.as_ref(), tape.as_ref())?;
    let tape_json = tape.map(|t| {
        let (hex, bits) = t.to_hex();
        json!({ "hex": hex, "bits": bits })
    });
    let output = json!({ "record": record, "tape": tape_json });
    write_or_print(args.out.as_deref(), &serde_json::to_string_pretty(&output)?)?;
    Ok(0)
}

fn cmd_sweep(args: SweepArgs) -> Result<i32> {
    let scenario = Scenario::from_key(&args.scenario)
        .ok_or_else(|| anyhow!("unknown scenario '{}'", args.scenario))?;
    let mut config = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            let parsed = ExperimentConfig::from_text(&text)?;
            if parsed.scenario != scenario {
                bail!(
                    "config file is for scenario '{}', command line says '{}'",
                    parsed.scenario,
                    scenario
                );
            }
            parsed
        }
        None => ExperimentConfig::new(scenario),
    };
    if let Some(n) = args.n {
        config.n = Some(n);
    }
    if let Some(k) = args.k {
        config.k = Some(k);
    }
    if let Some(p) = args.p {
        config.p = Some(p);
    }
    if let Some(eps) = args.eps {
        config.eps = Some(eps);
    }
    if let Some(alg) = &args.alg {
        config.set_key("algs", alg).map_err(|e| anyhow!(e))?;
    }
    if let Some(v) = args.samples {
        config.samples = Some(v);
    }
    if let Some(v) = args.trials {
        config.trials = Some(v);
    }
    if let Some(v) = args.steps {
        config.steps = Some(v);
    }
    if let Some(v) = args.budget {
        config.budget = Some(v);
    }
    if let Some(v) = args.seed {
        config.seed = v;
    }
    let out_dir = args
        .out
        .or_else(|| config.out.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(format!("sweep-{scenario}")));
    config.out = Some(out_dir.display().to_string());

    let result = run_scenario(&config)?;
    let paths = emit_report(&result, &out_dir)?;
    let result_path = out_dir.join("result.json");
    std::fs::write(&result_path, serde_json::to_string_pretty(&result)?)
        .with_context(|| format!("writing {}", result_path.display()))?;
    println!(
        "{}: {} rows, {} passed, scenario {}",
        scenario,
        result.summary.rows,
        result.summary.rows_passed,
        if result.summary.pass { "PASS" } else { "FAIL" }
    );
    for note in &result.summary.notes {
        println!("  {note}");
    }
    println!(
        "reports: {} {} {} {}",
        paths.rows_csv.display(),
        paths.long_csv.display(),
        paths.summary_json.display(),
        result_path.display()
    );
    Ok(if result.summary.pass { 0 } else { 1 })
}

fn cmd_regret(args: RegretArgs) -> Result<i32> {
    let (g, seq) = match (&args.seq, args.adversary.as_deref()) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading sequence {}", path.display()))?;
            let seq = WeightSequence::from_json_str(&text)?;
            let g = match &args.graph {
                Some(p) => load_graph(p)?,
                None => bail!("--seq needs --graph for the base graph"),
            };
            seq.check_matches(&g)?;
            (g, seq)
        }
        (None, Some("path")) => {
            let n = args.n.unwrap_or(10);
            let seq = path_adversary(
                n,
                args.steps,
                &vec![args.eps; args.steps],
                stream_seed(args.seed, "adversary", 0),
            )?;
            (Graph::path(n), seq)
        }
        (None, Some("coinflip")) => {
            let seq = coinflip_p3_adversary(args.steps, stream_seed(args.seed, "adversary", 0));
            (Graph::path(3), seq)
        }
        (None, Some(other)) => bail!("unknown adversary '{other}' (use path or coinflip)"),
        (None, None) => match &args.graph {
            Some(p) => {
                let g = load_graph(p)?;
                let seq = cutlab::regret::budgeted_random_sequence(
                    &g,
                    args.steps,
                    args.eps * args.steps as f64,
                    stream_seed(args.seed, "adversary", 0),
                )?;
                (g, seq)
            }
            None => bail!("give --seq, --adversary, or --graph"),
        },
    };
    let trace = match args.player.as_str() {
        "ftco" => ftco(&g, &seq)?,
        "uniform" => uniform_edge_player(&g, &seq, stream_seed(args.seed, "player", 0))?,
        other => bail!("unknown player '{other}' (use ftco or uniform)"),
    };
    write_or_print(args.out.as_deref(), &trace.to_csv())?;
    let mut lines = vec![format!("regret = {}", regret(&trace))];
    if args.player == "ftco" {
        let report = telescoping_identity_check(&g, &seq, &trace)?;
        lines.push(format!(
            "identity lhs={} rhs={} equal={} delta_sum={} variation_bound={}",
            report.lhs, report.rhs, report.equal, report.delta_sum, report.variation_bound
        ));
    }
    if let Some(out) = &args.out {
        let seq_path = out.with_extension("seq.json");
        std::fs::write(&seq_path, seq.to_json_string())?;
        eprintln!("wrote {}", seq_path.display());
    }
    for line in lines {
        eprintln!("{line}");
    }
    Ok(0)
}

fn cmd_advice(args: AdviceArgs) -> Result<i32> {
    let g = load_graph(&args.graph)?;
    let order = parse_order(&g, args.order.as_deref(), args.seed)?;
    let (alg, tape): (Box<dyn OnlineCutAlgorithm>, AdviceTape) = match args.scheme.as_str() {
        "optimal" => (advice_optimal(), tape_for_optimal(&g, &order)?),
        "min-degree" => (min_degree_advice(), min_degree_tape(&g, &order)?),
        other => bail!("unknown scheme '{other}' (use optimal or min-degree)"),
    };
    let record = run(&g, &order, alg.as_ref(), Some(&tape))?;
    let (opt, opt_oracle) = if g.n() <= cutlab::oracles::ENUM_CAP {
        (brute_force_mincut(&g)?.0, "brute-force")
    } else {
        (stoer_wagner_mincut(&g)?.0, "stoer-wagner")
    };
    let (hex, bits) = tape.to_hex();
    let output = json!({
        "scheme": args.scheme,
        "tape": { "hex": hex, "bits": bits },
        "order": order.as_slice(),
        "value": record.value,
        "advice_bits_consumed": record.advice_bits,
        "opt": opt,
        "opt_oracle": opt_oracle,
        "attains_opt": record.value == opt,
        "record": record,
    });
    write_or_print(args.out.as_deref(), &serde_json::to_string_pretty(&output)?)?;
    Ok(0)
}

fn cmd_permsearch(args: PermsearchArgs) -> Result<i32> {
    let g = load_graph(&args.graph)?;
    let alg = algorithm_by_key(&args.alg)?;
    let (sense, constructed) = match args.objective.as_str() {
        "min" => {
            let (order, _) = construct_mincut_order(&g)?;
            (Sense::Min, order)
        }
        "max" => {
            let (order, _) = construct_maxcut_order(&g)?;
            (Sense::Max, order)
        }
        other => bail!("unknown objective '{other}' (use min or max)"),
    };
    let target = match args.target {
        Some(t) => t,
        None => match sense {
            Sense::Min => brute_force_mincut(&g)?.0.finite(),
            Sense::Max => brute_force_maxcut(&g)?.0.finite(),
        },
    };
    let search = verify_min_over_orders(&g, alg.as_ref(), target, sense)?;
    let fmt_ids = |ids: &[usize]| {
        ids.iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    let output = json!({
        "objective": args.objective,
        "target": target,
        "best_value": search.best_value,
        "matches_target": search.matches_target,
        "witness_order": fmt_ids(search.witness.as_slice()),
        "constructed_order": fmt_ids(constructed.as_slice()),
    });
    write_or_print(args.out.as_deref(), &serde_json::to_string_pretty(&output)?)?;
    Ok(if search.matches_target { 0 } else { 1 })
}

fn cmd_report(args: ReportArgs) -> Result<i32> {
    let text = std::fs::read_to_string(&args.result)
        .with_context(|| format!("reading {}", args.result.display()))?;
    let result: ExperimentResult =
        serde_json::from_str(&text).context("parsing sweep result JSON")?;
    let paths = emit_report(&result, &args.out)?;
    println!(
        "re-emitted {} {} {}",
        paths.rows_csv.display(),
        paths.long_csv.display(),
        paths.summary_json.display()
    );
    Ok(if result.summary.pass { 0 } else { 1 })
}
