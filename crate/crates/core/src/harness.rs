//! Experiment orchestration: flat-file configs, seeded scenario sweeps, and
//! byte-stable CSV/JSON reports.
//!
//! Every stochastic scenario draws all of its randomness from one master seed
//! through [`crate::seeding::stream_seed`], so any single instance or trial
//! can be replayed in isolation from the emitted rows.

use crate::advice::{advice_optimal, fooling_pair_search, tape_for_optimal};
use crate::adversaries::{adaptive_two_vertex_game, clique_pair_family, gen_clique_pair, gen_gnp, GameVariant};
use crate::algorithms::{
    builtin_algorithms, by_key, greedy_min, greedy_submodular_max, greedy_submodular_min_demo,
    sparse_alg,
};
use crate::engine::{expected_value_random_order, run, ExpectationMode};
use crate::graph::{ArrivalOrder, CutValue, Graph};
use crate::greedy_order::{
    check_maxcut_order_conditions, check_mincut_order_conditions, construct_maxcut_order,
    construct_mincut_order, construct_submodular_order, verify_min_over_orders,
};
use crate::oracles::{
    brute_force_maxcut, brute_force_mincut, brute_force_set_optimum, stoer_wagner_mincut, Sense,
    SetFunction,
};
use crate::regret::{
    budgeted_random_sequence, ftco, path_adversary, telescoping_identity_check,
    uniform_edge_player, uniform_player_step_regret,
};
use crate::seeding::stream_seed;
use rand::Rng;
use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config parse error at line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error("scenario error: {0}")]
    Scenario(String),
    #[error("io error on {path}: {err}")]
    Io { path: String, err: String },
    #[error(transparent)]
    Graph(#[from] crate::graph::GraphError),
    #[error(transparent)]
    Oracle(#[from] crate::oracles::OracleError),
    #[error("engine: {0}")]
    Engine(#[from] crate::engine::EngineError),
    #[error(transparent)]
    Advice(#[from] crate::advice::AdviceError),
    #[error(transparent)]
    Adversary(#[from] crate::adversaries::AdversaryError),
    #[error(transparent)]
    Regret(#[from] crate::regret::RegretError),
    #[error(transparent)]
    Order(#[from] crate::greedy_order::OrderError),
    #[error("algorithm: {0}")]
    Algorithm(#[from] crate::algorithms::AlgorithmError),
    #[error("unknown algorithm key '{0}'")]
    UnknownAlgorithm(String),
}

/// The eight scenario tags, each bound to one family of desk-scale checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scenario {
    ClassicBounds,
    Advice,
    RandomOrder,
    Sparse,
    Gnp,
    RegretUpper,
    RegretLower,
    GreedyOrder,
}

impl Scenario {
    pub const ALL: [Scenario; 8] = [
        Scenario::ClassicBounds,
        Scenario::Advice,
        Scenario::RandomOrder,
        Scenario::Sparse,
        Scenario::Gnp,
        Scenario::RegretUpper,
        Scenario::RegretLower,
        Scenario::GreedyOrder,
    ];

    pub fn key(&self) -> &'static str {
        match self {
            Scenario::ClassicBounds => "classic-bounds",
            Scenario::Advice => "advice",
            Scenario::RandomOrder => "random-order",
            Scenario::Sparse => "sparse",
            Scenario::Gnp => "gnp",
            Scenario::RegretUpper => "regret-upper",
            Scenario::RegretLower => "regret-lower",
            Scenario::GreedyOrder => "greedy-order",
        }
    }

    pub fn from_key(key: &str) -> Option<Scenario> {
        Scenario::ALL.iter().copied().find(|s| s.key() == key)
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// Flat, typed experiment configuration. Unset fields fall back to the
/// scenario's documented defaults; CLI flags override config-file keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub n: Option<usize>,
    pub k: Option<usize>,
    /// Clique size for the clique-pair family; edge probability for G(n, p).
    pub p: Option<f64>,
    pub eps: Option<f64>,
    /// Algorithm keys; empty means every built-in.
    pub algs: Vec<String>,
    pub samples: Option<usize>,
    pub trials: Option<usize>,
    pub steps: Option<usize>,
    pub budget: Option<f64>,
    /// Master seed; all per-component streams derive from it.
    pub seed: u64,
    pub graph: Option<String>,
    pub out: Option<String>,
}

impl ExperimentConfig {
    pub fn new(scenario: Scenario) -> ExperimentConfig {
        ExperimentConfig {
            scenario,
            n: None,
            k: None,
            p: None,
            eps: None,
            algs: Vec::new(),
            samples: None,
            trials: None,
            steps: None,
            budget: None,
            seed: 0,
            graph: None,
            out: None,
        }
    }

    /// Parses the flat `key = value` config format (`#` comments allowed).
    pub fn from_text(text: &str) -> Result<ExperimentConfig, HarnessError> {
        let mut scenario = None;
        let mut pending: Vec<(usize, String, String)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(HarnessError::Config {
                line: lineno + 1,
                msg: "expected `key = value`".into(),
            })?;
            let (key, value) = (key.trim().to_string(), value.trim().to_string());
            if key == "scenario" {
                scenario = Some(Scenario::from_key(&value).ok_or(HarnessError::Config {
                    line: lineno + 1,
                    msg: format!("unknown scenario '{value}'"),
                })?);
            } else {
                pending.push((lineno + 1, key, value));
            }
        }
        let scenario = scenario.ok_or(HarnessError::Config {
            line: 0,
            msg: "missing `scenario = <tag>`".into(),
        })?;
        let mut config = ExperimentConfig::new(scenario);
        for (line, key, value) in pending {
            config
                .set_key(&key, &value)
                .map_err(|msg| HarnessError::Config { line, msg })?;
        }
        Ok(config)
    }

    /// Sets one typed field from its text form; used by both the file parser
    /// and CLI flag overrides.
    pub fn set_key(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
            value.parse().map_err(|_| format!("bad value '{value}' for {key}"))
        }
        match key {
            "n" => self.n = Some(parse(key, value)?),
            "k" => self.k = Some(parse(key, value)?),
            "p" => self.p = Some(parse(key, value)?),
            "eps" => self.eps = Some(parse(key, value)?),
            "algs" => {
                self.algs = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(str::to_string)
                    .collect()
            }
            "samples" => self.samples = Some(parse(key, value)?),
            "trials" => self.trials = Some(parse(key, value)?),
            "steps" => self.steps = Some(parse(key, value)?),
            "budget" => self.budget = Some(parse(key, value)?),
            "seed" => self.seed = parse(key, value)?,
            "graph" => self.graph = Some(value.to_string()),
            "out" => self.out = Some(value.to_string()),
            other => return Err(format!("unknown config key '{other}'")),
        }
        Ok(())
    }

    /// Canonical text form; `from_text(to_text(c)) == c`.
    pub fn to_text(&self) -> String {
        let mut out = format!("scenario = {}\n", self.scenario);
        if !self.algs.is_empty() {
            out.push_str(&format!("algs = {}\n", self.algs.join(",")));
        }
        if let Some(v) = self.budget {
            out.push_str(&format!("budget = {v}\n"));
        }
        if let Some(v) = self.eps {
            out.push_str(&format!("eps = {v}\n"));
        }
        if let Some(v) = &self.graph {
            out.push_str(&format!("graph = {v}\n"));
        }
        if let Some(v) = self.k {
            out.push_str(&format!("k = {v}\n"));
        }
        if let Some(v) = self.n {
            out.push_str(&format!("n = {v}\n"));
        }
        if let Some(v) = &self.out {
            out.push_str(&format!("out = {v}\n"));
        }
        if let Some(v) = self.p {
            out.push_str(&format!("p = {v}\n"));
        }
        if let Some(v) = self.samples {
            out.push_str(&format!("samples = {v}\n"));
        }
        out.push_str(&format!("seed = {}\n", self.seed));
        if let Some(v) = self.steps {
            out.push_str(&format!("steps = {v}\n"));
        }
        if let Some(v) = self.trials {
            out.push_str(&format!("trials = {v}\n"));
        }
        out
    }

    fn algorithms(&self) -> Result<Vec<Box<dyn crate::engine::OnlineCutAlgorithm>>, HarnessError> {
        if self.algs.is_empty() {
            return Ok(builtin_algorithms());
        }
        self.algs
            .iter()
            .map(|key| by_key(key).ok_or_else(|| HarnessError::UnknownAlgorithm(key.clone())))
            .collect()
    }
}

/// One instance/trial outcome. `ratio` is only present when the optimum is
/// finite and positive; infinite optima are flagged instead.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub instance: String,
    pub alg: String,
    pub opt: Option<f64>,
    pub opt_infinite: bool,
    pub value: f64,
    pub ratio: Option<f64>,
    pub std_error: Option<f64>,
    pub bound: Option<f64>,
    /// Scenario-specific auxiliary quantity (documented per scenario):
    /// minimum degree for gnp rows, realized variation for regret rows.
    pub aux: Option<f64>,
    pub pass: bool,
}

impl ResultRow {
    fn new(instance: impl Into<String>, alg: impl Into<String>, value: f64) -> ResultRow {
        ResultRow {
            instance: instance.into(),
            alg: alg.into(),
            opt: None,
            opt_infinite: false,
            value,
            ratio: None,
            std_error: None,
            bound: None,
            aux: None,
            pass: true,
        }
    }

    fn with_opt(mut self, opt: CutValue) -> ResultRow {
        match opt {
            CutValue::Infinite => self.opt_infinite = true,
            CutValue::Finite(v) => {
                self.opt = Some(v);
                if v > 0.0 {
                    self.ratio = Some(self.value / v);
                }
            }
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub scenario: Scenario,
    pub rows: usize,
    pub rows_passed: usize,
    /// The scenario's acceptance predicate over all rows.
    pub pass: bool,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub rows: Vec<ResultRow>,
    pub summary: Summary,
}

fn summarize(
    scenario: Scenario,
    rows: Vec<ResultRow>,
    pass: bool,
    notes: Vec<String>,
    config: &ExperimentConfig,
) -> ExperimentResult {
    let rows_passed = rows.iter().filter(|r| r.pass).count();
    ExperimentResult {
        config: config.clone(),
        summary: Summary {
            scenario,
            rows: rows.len(),
            rows_passed,
            pass,
            notes,
        },
        rows,
    }
}

/// Runs one scenario sweep. Deterministic given the config's master seed.
pub fn run_scenario(config: &ExperimentConfig) -> Result<ExperimentResult, HarnessError> {
    match config.scenario {
        Scenario::ClassicBounds => classic_bounds(config),
        Scenario::Advice => advice_scenario(config),
        Scenario::RandomOrder => random_order(config),
        Scenario::Sparse => sparse_scenario(config),
        Scenario::Gnp => gnp_scenario(config),
        Scenario::RegretUpper => regret_upper(config),
        Scenario::RegretLower => regret_lower(config),
        Scenario::GreedyOrder => greedy_order_scenario(config),
    }
}

/// Adaptive two-vertex games: every built-in deterministic algorithm is
/// forced to at least `n - 3` (isolated-vertex variant) or `n - 2`
/// (attachment variant) on 6 <= n <= 12.
fn classic_bounds(config: &ExperimentConfig) -> Result<ExperimentResult, HarnessError> {
    let k = config.k.unwrap_or(2);
    let ns: Vec<usize> = match config.n {
        Some(n) => vec![n],
        None => (6..=12).collect(),
    };
    let mut rows = Vec::new();
    for &n in &ns {
        for alg in config.algorithms()? {
            for (variant, bound) in [
                (GameVariant::A, n as f64 - 3.0),
                (GameVariant::B, n as f64 - 2.0),
            ] {
                let out = adaptive_two_vertex_game(alg.as_ref(), variant, n, k)?;
                let opt = match variant {
                    GameVariant::A => CutValue::Finite(0.0),
                    GameVariant::B => CutValue::Finite(k as f64),
                };
                let value = out.value.finite();
                let mut row = ResultRow::new(
                    format!("{:?}-n{}", variant, n).to_lowercase(),
                    alg.name(),
                    value,
                )
                .with_opt(opt);
                row.bound = Some(bound);
                row.pass = value >= bound;
                rows.push(row);
            }
        }
    }
    let pass = rows.iter().all(|r| r.pass);
    Ok(summarize(Scenario::ClassicBounds, rows, pass, vec![], config))
}

/// Optimal-advice round trips on seeded graphs (value = optimum with exactly
/// `n - 1` bits), plus fooling pairs on the clique-pair family for every
/// budget below `n - 2p - 1`.
fn advice_scenario(config: &ExperimentConfig) -> Result<ExperimentResult, HarnessError> {
    let graphs = config.samples.unwrap_or(50);
    let orders_per_graph = config.trials.unwrap_or(5);
    let mut rows = Vec::new();
    for i in 0..graphs {
        let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(config.seed, "advice-graph", i as u64));
        let n = 2 + (rng.gen::<u64>() % 7) as usize;
        let density = rng.gen_range(0.2..0.9);
        let mut triples = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen::<f64>() < density {
                    triples.push((u, v, 1.0));
                }
            }
        }
        let g = Graph::new(n, triples)?;
        let (opt, _) = brute_force_mincut(&g)?;
        for j in 0..orders_per_graph {
            let mut order: Vec<usize> = (0..n).collect();
            crate::engine::shuffle(&mut order, &mut rng);
            let order = ArrivalOrder::new(order)?;
            let tape = tape_for_optimal(&g, &order)?;
            let record = run(&g, &order, advice_optimal().as_ref(), Some(&tape))?;
            let mut row = ResultRow::new(format!("g{i}-o{j}"), "advice-optimal", record.value.finite())
                .with_opt(opt);
            row.aux = Some(record.advice_bits as f64);
            row.pass = record.value == opt && record.advice_bits == n - 1;
            rows.push(row);
        }
    }

    let n = config.n.unwrap_or(12);
    let p = config.p.unwrap_or(4.0) as usize;
    let k = config.k.unwrap_or(1);
    let family = clique_pair_family(n, p, k)?;
    let graphs: Vec<Graph> = family.iter().map(|inst| inst.graph.clone()).collect();
    let prefix: Vec<usize> = (0..n - 2 * p).collect();
    let max_budget = n - 2 * p - 1;
    for budget in 0..max_budget {
        let found = fooling_pair_search(advice_optimal().as_ref(), &graphs, &prefix, budget)?;
        let mut row = ResultRow::new(format!("clique-pair-b{budget}"), "advice-optimal", 0.0);
        row.bound = Some(p as f64 - 1.0);
        match found {
            Some(pair) => {
                row.value = pair.forced_value;
                row.opt = Some(pair.opt_value);
                row.ratio = Some(pair.forced_value / pair.opt_value);
                row.pass = pair.forced_value >= p as f64 - 1.0;
            }
            None => row.pass = false,
        }
        rows.push(row);
    }

    let pass = rows.iter().all(|r| r.pass);
    Ok(summarize(Scenario::Advice, rows, pass, vec![], config))
}

/// Random-order expectation on the balanced clique-pair family: every
/// algorithm's Monte-Carlo mean sits above `(n/64) * k` minus three standard
/// errors.
fn random_order(config: &ExperimentConfig) -> Result<ExperimentResult, HarnessError> {
    let n = config.n.unwrap_or(12);
    let eps = config.eps.unwrap_or(0.25);
    let k = config.k.unwrap_or(2);
    let samples = config.samples.unwrap_or(100_000);
    let side = (eps * n as f64).round() as usize;
    let p = n / 2 - side;
    let q = n - 2 * p;
    let labels: Vec<bool> = (0..q).map(|j| j < side).collect();
    let inst = gen_clique_pair(n, p, k, &labels)?;
    let (opt, _) = brute_force_mincut(&inst.graph)?;
    let bound = n as f64 / 64.0 * k as f64;
    let mut rows = Vec::new();
    for (ai, alg) in config.algorithms()?.iter().enumerate() {
        let e = expected_value_random_order(
            &inst.graph,
            alg.as_ref(),
            ExpectationMode::MonteCarlo {
                samples,
                seed: stream_seed(config.seed, "random-order", ai as u64),
            },
        )?;
        let mut row = ResultRow::new(&inst.label, alg.name(), e.mean).with_opt(opt);
        row.std_error = Some(e.std_error);
        row.bound = Some(bound);
        row.pass = e.mean >= bound - 3.0 * e.std_error;
        rows.push(row);
    }
    let pass = rows.iter().all(|r| r.pass);
    Ok(summarize(Scenario::RandomOrder, rows, pass, vec![], config))
}

fn random_connected_sparse(n: usize, seed: u64) -> Result<Graph, HarnessError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // spanning-tree backbone plus random extras keeps m <= 3n
    loop {
        let mut triples = Vec::new();
        let mut order: Vec<usize> = (0..n).collect();
        crate::engine::shuffle(&mut order, &mut rng);
        for i in 1..n {
            let parent = order[rng.gen_range(0..i)];
            triples.push((order[i].min(parent), order[i].max(parent), 1.0));
        }
        let extras = rng.gen_range(0..=(2 * n).min(n * (n - 1) / 2 - (n - 1)));
        for _ in 0..extras {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u != v {
                triples.push((u.min(v), u.max(v), 1.0));
            }
        }
        // duplicate extras fold into weights; regenerate if that happened
        let g = Graph::new(n, triples)?;
        if g.edges().iter().all(|e| e.w == 1.0) && g.m() <= 3 * n {
            return Ok(g);
        }
    }
}

/// The sparse-graph algorithm under random order: its exact expectation is
/// the mean degree `2m/n` (enumeration at n <= 9, Monte Carlo above).
fn sparse_scenario(config: &ExperimentConfig) -> Result<ExperimentResult, HarnessError> {
    let count = config.samples.unwrap_or(50);
    let mut rows = Vec::new();
    for i in 0..count {
        let seed = stream_seed(config.seed, "sparse-graph", i as u64);
        let n = 5 + (seed % 5) as usize; // 5..=9: exact enumeration territory
        let g = random_connected_sparse(n, seed)?;
        let closed_form = 2.0 * g.total_weight() / n as f64;
        let (opt, _) = brute_force_mincut(&g)?;
        let e = expected_value_random_order(&g, sparse_alg().as_ref(), ExpectationMode::Exact)?;
        let mut row = ResultRow::new(format!("sparse-{i}-n{n}"), "sparse", e.mean).with_opt(opt);
        row.bound = Some(closed_form);
        row.pass = crate::graph::weight_eq(e.mean, closed_form);
        rows.push(row);
    }
    // larger graphs: the closed form holds within Monte-Carlo error
    for i in 0..5usize {
        let seed = stream_seed(config.seed, "sparse-large", i as u64);
        let n = 10 + 2 * i;
        let g = random_connected_sparse(n, seed)?;
        let closed_form = 2.0 * g.total_weight() / n as f64;
        let (opt, _) = stoer_wagner_mincut(&g)?;
        let e = expected_value_random_order(
            &g,
            sparse_alg().as_ref(),
            ExpectationMode::MonteCarlo {
                samples: config.trials.unwrap_or(20_000),
                seed: stream_seed(config.seed, "sparse-mc", i as u64),
            },
        )?;
        let mut row =
            ResultRow::new(format!("sparse-large-{i}-n{n}"), "sparse", e.mean).with_opt(opt);
        row.std_error = Some(e.std_error);
        row.bound = Some(closed_form);
        row.pass = (e.mean - closed_form).abs() <= 3.0 * e.std_error.max(1e-9);
        rows.push(row);
    }
    let pass = rows.iter().all(|r| r.pass);
    Ok(summarize(Scenario::Sparse, rows, pass, vec![], config))
}

/// Dense random graphs: the minimum cut equals the minimum degree in at least
/// 95% of seeds, and the first-vertex value stays within `[0.5np, 1.5np]` in
/// at least 95% of seeds.
fn gnp_scenario(config: &ExperimentConfig) -> Result<ExperimentResult, HarnessError> {
    let n = config.n.unwrap_or(200);
    let prob = config.p.unwrap_or(0.1);
    let seeds = config.trials.unwrap_or(100);
    let np = n as f64 * prob;
    let mut rows = Vec::new();
    let mut lambda_eq = 0usize;
    let mut trivial_ok = 0usize;
    for i in 0..seeds {
        let g = gen_gnp(n, prob, stream_seed(config.seed, "gnp", i as u64))?;
        let (lambda, _) = stoer_wagner_mincut(&g)?;
        let delta = crate::graph::degree_stats(&g)?.min_degree;
        let lambda = lambda.finite();
        let eq = crate::graph::weight_eq(lambda, delta);
        lambda_eq += eq as usize;
        let mut row = ResultRow::new(format!("gnp-{i}"), "lambda-vs-delta", lambda);
        row.aux = Some(delta);
        row.pass = eq;
        rows.push(row);

        // the trivial strategy's value is the first arrival's degree
        let mut rng =
            ChaCha8Rng::seed_from_u64(stream_seed(config.seed, "gnp-order", i as u64));
        let first = rng.gen_range(0..n);
        let value = g.weighted_degree(first);
        let ok = (0.5 * np..=1.5 * np).contains(&value);
        trivial_ok += ok as usize;
        let mut row = ResultRow::new(format!("gnp-{i}"), "trivial", value);
        row.bound = Some(np);
        row.pass = ok;
        rows.push(row);
    }
    let frac_lambda = lambda_eq as f64 / seeds as f64;
    let frac_trivial = trivial_ok as f64 / seeds as f64;
    let pass = frac_lambda >= 0.95 && frac_trivial >= 0.95;
    let notes = vec![
        format!("lambda=delta fraction: {frac_lambda}"),
        format!("trivial within [0.5np, 1.5np] fraction: {frac_trivial}"),
    ];
    Ok(summarize(Scenario::Gnp, rows, pass, notes, config))
}

/// Follow-the-current-optimal on seeded budgeted sequences: the telescoping
/// identity holds to 1e-9 and regret never exceeds budget + initial optimum.
fn regret_upper(config: &ExperimentConfig) -> Result<ExperimentResult, HarnessError> {
    let sequences = config.trials.unwrap_or(100);
    let max_steps = config.steps.unwrap_or(1000);
    let mut rows = Vec::new();
    for i in 0..sequences {
        let seed = stream_seed(config.seed, "regret-upper", i as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(4..=9);
        let g = match i % 4 {
            0 => Graph::path(n),
            1 => Graph::cycle(n),
            2 => Graph::complete(n),
            _ => loop {
                let cand = gen_gnp(n, 0.5, rng.gen())?;
                if cand.n() >= 2 && cand.m() >= 1 {
                    break cand;
                }
            },
        };
        let steps = rng.gen_range(1..=max_steps);
        let budget = config.budget.unwrap_or_else(|| rng.gen_range(0.5..8.0));
        let seq = budgeted_random_sequence(&g, steps, budget, rng.gen())?;
        let trace = ftco(&g, &seq)?;
        let report = telescoping_identity_check(&g, &seq, &trace)?;
        let mincut_w0 = stoer_wagner_mincut(&g)?.0.finite();
        let bound = seq.declared_budget() + mincut_w0;
        let regret = trace.regret();
        let mut row = ResultRow::new(format!("seq-{i}-T{steps}"), "ftco", regret);
        row.bound = Some(bound);
        row.aux = Some(seq.variation());
        row.pass = report.equal && report.delta_within_variation && regret <= bound + 1e-9;
        rows.push(row);
    }
    let pass = rows.iter().all(|r| r.pass);
    Ok(summarize(Scenario::RegretUpper, rows, pass, vec![], config))
}

/// The uniform-edge player against the discounted-edge path adversary: the
/// empirical mean regret dominates the exact expectation minus three standard
/// errors, and the realized-variation form of the lower bound a fortiori.
fn regret_lower(config: &ExperimentConfig) -> Result<ExperimentResult, HarnessError> {
    let n = config.n.unwrap_or(10);
    let steps = config.steps.unwrap_or(1000);
    let eps = config.eps.unwrap_or(0.3);
    let trials = config.trials.unwrap_or(10_000);
    let g = Graph::path(n);
    let epsilons = vec![eps; steps];
    let mut rows = Vec::with_capacity(trials);
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    let mut variation_sum = 0.0;
    for i in 0..trials {
        let seq = path_adversary(
            n,
            steps,
            &epsilons,
            stream_seed(config.seed, "adversary", i as u64),
        )?;
        let trace = uniform_edge_player(&g, &seq, stream_seed(config.seed, "player", i as u64))?;
        let regret = trace.regret();
        sum += regret;
        sumsq += regret * regret;
        let variation = seq.variation();
        variation_sum += variation;
        let mut row = ResultRow::new(format!("trial-{i}"), "uniform-edge", regret);
        row.aux = Some(variation);
        rows.push(row);
    }
    let t = trials as f64;
    let mean = sum / t;
    let se = if trials > 1 {
        (((sumsq - sum * sum / t) / (t - 1.0)).max(0.0) / t).sqrt()
    } else {
        0.0
    };
    let exact = uniform_player_step_regret(n, eps) * steps as f64;
    let paper_bound = (1.0 - 1.0 / (n * n) as f64) * (variation_sum / t) / 2.0;
    let pass = mean >= exact - 3.0 * se && mean >= paper_bound;
    let notes = vec![
        format!("mean regret: {mean}"),
        format!("std error: {se}"),
        format!("exact expectation: {exact}"),
        format!("realized-variation lower bound: {paper_bound}"),
    ];
    Ok(summarize(Scenario::RegretLower, rows, pass, notes, config))
}

/// Constructive orders and exhaustive order search, plus the submodular
/// greedy checks with generated cut and coverage functions.
fn greedy_order_scenario(config: &ExperimentConfig) -> Result<ExperimentResult, HarnessError> {
    let builder_graphs = config.samples.unwrap_or(100);
    let search_graphs = config.trials.unwrap_or(20);
    let functions = config.steps.unwrap_or(50);
    let mut rows = Vec::new();

    for i in 0..builder_graphs {
        let seed = stream_seed(config.seed, "builder", i as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=config.n.unwrap_or(12));
        let mut triples = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen::<f64>() < 0.5 {
                    let w = if rng.gen::<bool>() {
                        rng.gen_range(1..=3) as f64
                    } else {
                        rng.gen_range(0.1..2.0)
                    };
                    triples.push((u, v, w));
                }
            }
        }
        let g = Graph::new(n, triples)?;
        let opt_min = brute_force_mincut(&g)?.0;
        let (order, cut) = construct_mincut_order(&g)?;
        let conditions = check_mincut_order_conditions(&g, &cut, &order).is_ok();
        let achieved = run(&g, &order, greedy_min().as_ref(), None)?.value;
        let mut row =
            ResultRow::new(format!("build-min-{i}-n{n}"), "greedy-min", achieved.finite())
                .with_opt(opt_min);
        row.pass = conditions && achieved == opt_min;
        rows.push(row);

        let opt_max = brute_force_maxcut(&g)?.0;
        let (order, cut) = construct_maxcut_order(&g)?;
        let conditions = check_maxcut_order_conditions(&g, &cut, &order).is_ok();
        let achieved = run(&g, &order, crate::algorithms::greedy_max().as_ref(), None)?.value;
        let mut row =
            ResultRow::new(format!("build-max-{i}-n{n}"), "greedy-max", achieved.finite())
                .with_opt(opt_max);
        row.pass = conditions && achieved == opt_max;
        rows.push(row);
    }

    for i in 0..search_graphs {
        let seed = stream_seed(config.seed, "order-search", i as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=6);
        let g = loop {
            let cand = gen_gnp(n, 0.7, rng.gen())?;
            if cand.is_connected() {
                break cand;
            }
        };
        let opt = brute_force_mincut(&g)?.0.finite();
        let search = verify_min_over_orders(&g, greedy_min().as_ref(), opt, Sense::Min)?;
        let mut row = ResultRow::new(format!("search-{i}-n{n}"), "greedy-min", opt);
        row.value = search.best_value.finite();
        row.opt = Some(opt);
        row.pass = search.matches_target;
        rows.push(row);
    }

    for i in 0..functions {
        let seed = stream_seed(config.seed, "setfn", i as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ground = rng.gen_range(2..=8);
        let f = if i % 2 == 0 {
            let g = loop {
                let cand = gen_gnp(ground, 0.6, rng.gen())?;
                if cand.m() >= 1 {
                    break cand;
                }
            };
            SetFunction::cut_function(&g)?
        } else {
            let sets: Vec<u64> = (0..ground).map(|_| rng.gen::<u64>() & 0x3ff).collect();
            SetFunction::coverage(sets)?
        };
        let order = construct_submodular_order(&f)?;
        let greedy = greedy_submodular_max(&f, &order)?;
        let best = brute_force_set_optimum(&f, Sense::Max)?;
        let mut row = ResultRow::new(format!("setfn-{i}"), "greedy-submodular", greedy.value);
        row.opt = Some(best.value);
        row.pass = crate::graph::weight_eq(greedy.value, best.value);
        rows.push(row);
    }

    // the minimization counterexample: greedy returns 0, the minimum is -1
    let counter = SetFunction::from_table(2, vec![0.0, 1.0, 1.0, -1.0])?;
    let (chosen, value) = greedy_submodular_min_demo(&counter, &[0, 1])?;
    let best = brute_force_set_optimum(&counter, Sense::Min)?;
    let mut row = ResultRow::new("min-counterexample", "greedy-submodular-min", value);
    row.opt = Some(best.value);
    row.pass = chosen == 0 && value == 0.0 && best.value == -1.0;
    rows.push(row);

    let pass = rows.iter().all(|r| r.pass);
    Ok(summarize(Scenario::GreedyOrder, rows, pass, vec![], config))
}

/// Paths of the emitted report files.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportPaths {
    pub rows_csv: PathBuf,
    pub summary_json: PathBuf,
    pub long_csv: PathBuf,
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Rows CSV, one line per instance/trial.
pub fn rows_to_csv(rows: &[ResultRow]) -> String {
    let mut out =
        String::from("instance,alg,opt,opt_infinite,value,ratio,std_error,bound,aux,pass\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.instance,
            r.alg,
            fmt_opt(r.opt),
            r.opt_infinite,
            r.value,
            fmt_opt(r.ratio),
            fmt_opt(r.std_error),
            fmt_opt(r.bound),
            fmt_opt(r.aux),
            r.pass
        ));
    }
    out
}

/// Plot-ready long format: one `(instance, alg, metric, value)` row per
/// present metric.
pub fn rows_to_long_csv(rows: &[ResultRow]) -> String {
    let mut out = String::from("instance,alg,metric,value\n");
    for r in rows {
        let mut push = |metric: &str, v: f64| {
            out.push_str(&format!("{},{},{},{}\n", r.instance, r.alg, metric, v));
        };
        push("value", r.value);
        if let Some(v) = r.opt {
            push("opt", v);
        }
        if let Some(v) = r.ratio {
            push("ratio", v);
        }
        if let Some(v) = r.std_error {
            push("std_error", v);
        }
        if let Some(v) = r.bound {
            push("bound", v);
        }
        if let Some(v) = r.aux {
            push("aux", v);
        }
        push("pass", r.pass as u8 as f64);
    }
    out
}

#[derive(Serialize)]
struct SummaryFile<'a> {
    config: &'a ExperimentConfig,
    summary: &'a Summary,
}

/// Writes `rows.csv`, `summary.json`, and `long.csv` under `out_dir`.
/// Byte-stable for identical results.
pub fn emit_report(result: &ExperimentResult, out_dir: &Path) -> Result<ReportPaths, HarnessError> {
    let io_err = |path: &Path, err: std::io::Error| HarnessError::Io {
        path: path.display().to_string(),
        err: err.to_string(),
    };
    std::fs::create_dir_all(out_dir).map_err(|e| io_err(out_dir, e))?;
    let rows_csv = out_dir.join("rows.csv");
    std::fs::write(&rows_csv, rows_to_csv(&result.rows)).map_err(|e| io_err(&rows_csv, e))?;
    let long_csv = out_dir.join("long.csv");
    std::fs::write(&long_csv, rows_to_long_csv(&result.rows)).map_err(|e| io_err(&long_csv, e))?;
    let summary_json = out_dir.join("summary.json");
    let file = SummaryFile {
        config: &result.config,
        summary: &result.summary,
    };
    let json = serde_json::to_string_pretty(&file).expect("summary serializes");
    std::fs::write(&summary_json, json).map_err(|e| io_err(&summary_json, e))?;
    Ok(ReportPaths {
        rows_csv,
        summary_json,
        long_csv,
    })
}
