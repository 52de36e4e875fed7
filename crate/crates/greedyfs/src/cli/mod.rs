//! The `greedyfs` command-line interface.
//!
//! Five subcommands: `synth` writes a synthetic dataset, `rank` runs the
//! greedy selection and saves the trace plus a reusable model, `eval` scores
//! a saved model over seeded data subsets, `align` traces kernel alignment
//! along a feature order, and `vc` estimates VC dimensions of blind affine
//! classes.
//!
//! Every flag can also be supplied through a JSON config file (`--config`);
//! explicit flags win over file values, and unknown file keys are rejected.
//! Subcommands that draw randomness require a seed, from either source.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 data error,
//! 3 numerical failure.

use crate::data::{generate_synthetic, load_csv, make_splits, write_csv, SplitPlan};
use crate::error::{Error, Result};
use crate::greedy::{run_greedy_tuned, GreedyConfig, SearchPlacement};
use crate::kernel::alignment_trace;
use crate::metrics::{confusion, score_suite, Metric, ScoreReport};
use crate::models::{HyperSearchSpec, MlpConfig, ModelSpec, PipelineModel, SvmConfig};
use crate::rng::{mix, stream_rng, Stream};
use crate::vc::{empirical_vc, point_cap};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::{Path, PathBuf};

/// Seed-mix tag for the final model fit after ranking.
const TAG_FINAL_MODEL: u64 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "greedyfs",
    about = "Greedy classifier-driven feature selection and diagnostics",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic binary-classification CSV.
    Synth(SynthArgs),
    /// Rank features greedily and save the trace, table, and final model.
    Rank(RankArgs),
    /// Score a saved model over seeded subsets of a dataset.
    Eval(EvalArgs),
    /// Trace Gram-matrix norm and target alignment along a feature order.
    Align(AlignArgs),
    /// Estimate the VC dimension of a blind affine threshold class.
    Vc(VcArgs),
}

/// Runs the CLI and returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Synth(args) => cmd_synth(args),
        Command::Rank(args) => cmd_rank(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Align(args) => cmd_align(args),
        Command::Vc(args) => cmd_vc(args),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn read_config<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T> {
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let text = fs::read_to_string(p)?;
            serde_json::from_str(&text)
                .map_err(|e| Error::config(format!("config {}: {e}", p.display())))
        }
    }
}

fn require_seed(flag: Option<u64>, file: Option<u64>) -> Result<u64> {
    flag.or(file)
        .ok_or_else(|| Error::config("a seed is required: pass --seed or set it in the config"))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::numerical(format!("serialization: {e}")))?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

// ---------------------------------------------------------------- synth --

#[derive(Debug, Args)]
struct SynthArgs {
    /// Number of examples.
    #[arg(long)]
    n: Option<usize>,
    /// Number of features (at least 7).
    #[arg(long)]
    d: Option<usize>,
    /// Log-scale of the informative tail terms.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct SynthFile {
    n: Option<usize>,
    d: Option<usize>,
    alpha: Option<f64>,
    seed: Option<u64>,
    out: Option<PathBuf>,
}

fn cmd_synth(args: SynthArgs) -> Result<()> {
    let file: SynthFile = read_config(args.config.as_deref())?;
    let n = args.n.or(file.n).unwrap_or(1000);
    let d = args.d.or(file.d).unwrap_or(15);
    let alpha = args.alpha.or(file.alpha).unwrap_or(-8.0);
    let seed = require_seed(args.seed, file.seed)?;
    let out = args
        .out
        .or(file.out)
        .unwrap_or_else(|| PathBuf::from("synth.csv"));

    let ds = generate_synthetic(n, d, alpha, seed)?;
    write_csv(&ds, &out)?;
    let (neg, pos) = ds.class_counts();
    println!(
        "wrote {} ({} examples, {} features, {pos} positive / {neg} negative)",
        out.display(),
        ds.n(),
        ds.d()
    );
    Ok(())
}

// ----------------------------------------------------------------- rank --

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
enum ClassifierKind {
    Svm,
    Mlp,
}

#[derive(Debug, Args)]
struct RankArgs {
    /// Input CSV with a label column.
    #[arg(long)]
    data: Option<PathBuf>,
    /// Name of the label column.
    #[arg(long)]
    label_col: Option<String>,
    #[arg(long, value_enum)]
    classifier: Option<ClassifierKind>,
    /// Train/validation splits per candidate (at least 2).
    #[arg(long)]
    q: Option<usize>,
    /// Stopping threshold.
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for candidate evaluation (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Output directory for trace.json, table.txt, and model.json.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RankFile {
    data: Option<PathBuf>,
    label_col: Option<String>,
    classifier: Option<ClassifierKind>,
    q: Option<usize>,
    tau: Option<f64>,
    seed: Option<u64>,
    workers: Option<usize>,
    out: Option<PathBuf>,
    validation_fraction: Option<f64>,
    metric: Option<Metric>,
    max_features: Option<usize>,
    fixed_splits: Option<bool>,
    search: Option<SearchPlacement>,
    search_spec: Option<HyperSearchSpec>,
    svm: Option<SvmConfig>,
    mlp: Option<MlpConfig>,
}

fn install_workers(workers: Option<usize>) -> Result<()> {
    if let Some(w) = workers {
        if w == 0 {
            return Err(Error::config("--workers must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .map_err(|e| Error::config(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn cmd_rank(args: RankArgs) -> Result<()> {
    let file: RankFile = read_config(args.config.as_deref())?;
    let data = args
        .data
        .or(file.data)
        .ok_or_else(|| Error::config("--data is required"))?;
    let label_col = args
        .label_col
        .or(file.label_col)
        .unwrap_or_else(|| "label".to_string());
    let seed = require_seed(args.seed, file.seed)?;
    install_workers(args.workers.or(file.workers))?;
    let out_dir = args.out.or(file.out).unwrap_or_else(|| PathBuf::from("."));

    let cfg = GreedyConfig {
        q: args.q.or(file.q).unwrap_or(7),
        validation_fraction: file.validation_fraction.unwrap_or(1.0 / 3.0),
        tau: args.tau.or(file.tau).unwrap_or(9e-2),
        metric: file.metric.unwrap_or(Metric::Tss),
        max_features: file.max_features,
        fixed_splits: file.fixed_splits.unwrap_or(false),
        search: file.search.unwrap_or(SearchPlacement::OncePerRun),
        search_spec: file.search_spec.unwrap_or_default(),
        seed,
    };
    let spec = match args.classifier.or(file.classifier).unwrap_or(ClassifierKind::Svm) {
        ClassifierKind::Svm => ModelSpec::Svm(file.svm.unwrap_or_default()),
        ClassifierKind::Mlp => ModelSpec::Mlp(file.mlp.unwrap_or_default()),
    };

    let ds = load_csv(&data, &label_col)?;
    let (trace, final_spec) = run_greedy_tuned(&ds, &spec, &cfg)?;

    fs::create_dir_all(&out_dir)?;
    write_json(&out_dir.join("trace.json"), &trace)?;
    fs::write(out_dir.join("table.txt"), trace.render_table())?;
    let model = PipelineModel::fit(
        &ds,
        &trace.selected,
        &final_spec,
        mix(seed, &[TAG_FINAL_MODEL]),
    )?;
    model.save(&out_dir.join("model.json"))?;

    print!("{}", trace.render_table());
    println!(
        "wrote trace.json, table.txt, model.json to {}",
        out_dir.display()
    );
    Ok(())
}

// ----------------------------------------------------------------- eval --

#[derive(Debug, Args)]
struct EvalArgs {
    /// Saved model from `rank`.
    #[arg(long)]
    model: Option<PathBuf>,
    /// CSV to evaluate on, same schema as the ranking data.
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long)]
    label_col: Option<String>,
    /// Number of seeded evaluation subsets.
    #[arg(long)]
    splits: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output JSON report path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct EvalFile {
    model: Option<PathBuf>,
    data: Option<PathBuf>,
    label_col: Option<String>,
    splits: Option<usize>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    /// Fraction of the data in each evaluation subset.
    fraction: Option<f64>,
}

#[derive(Debug, Serialize)]
struct MetricSummary {
    metric: &'static str,
    mean: Option<f64>,
    std: Option<f64>,
    /// Subsets where the score was defined.
    defined_splits: usize,
}

#[derive(Debug, Serialize)]
struct EvalReport {
    model: PathBuf,
    data: PathBuf,
    splits: usize,
    fraction: f64,
    seed: u64,
    summary: Vec<MetricSummary>,
    per_split: Vec<ScoreReport>,
}

fn cmd_eval(args: EvalArgs) -> Result<()> {
    let file: EvalFile = read_config(args.config.as_deref())?;
    let model_path = args
        .model
        .or(file.model)
        .ok_or_else(|| Error::config("--model is required"))?;
    let data_path = args
        .data
        .or(file.data)
        .ok_or_else(|| Error::config("--data is required"))?;
    let label_col = args
        .label_col
        .or(file.label_col)
        .unwrap_or_else(|| "label".to_string());
    let splits = args.splits.or(file.splits).unwrap_or(5);
    let fraction = file.fraction.unwrap_or(0.5);
    let seed = require_seed(args.seed, file.seed)?;
    let out = args
        .out
        .or(file.out)
        .unwrap_or_else(|| PathBuf::from("report.json"));
    if splits == 0 {
        return Err(Error::config("--splits must be at least 1"));
    }

    let model = PipelineModel::load(&model_path)?;
    let ds = load_csv(&data_path, &label_col)?;

    // Each evaluation subset is the held-out side of a seeded stratified
    // split, so the subsets differ while staying label-balanced.
    let plan_seed = stream_rng(seed, Stream::Eval).gen();
    let plan = SplitPlan::new(splits, fraction, plan_seed);
    let subsets = make_splits(ds.n(), ds.y(), &plan)?;
    let mut per_split = Vec::with_capacity(splits);
    for subset in &subsets {
        let part = ds.rows(&subset.valid_idx);
        let preds = model.predict(&part)?;
        per_split.push(score_suite(&confusion(&preds, part.y())?));
    }

    let summary: Vec<MetricSummary> = ScoreReport::NAMES
        .iter()
        .map(|&(name, metric)| {
            let vals: Vec<f64> = per_split.iter().filter_map(|r| r.get(metric)).collect();
            if vals.is_empty() {
                return MetricSummary {
                    metric: name,
                    mean: None,
                    std: None,
                    defined_splits: 0,
                };
            }
            let n = vals.len() as f64;
            let mean = vals.iter().sum::<f64>() / n;
            let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
            MetricSummary {
                metric: name,
                mean: Some(mean),
                std: Some(var.sqrt()),
                defined_splits: vals.len(),
            }
        })
        .collect();

    for s in &summary {
        match (s.mean, s.std) {
            (Some(m), Some(sd)) => println!("{:<18} {m:.4} \u{b1} {sd:.4}", s.metric),
            _ => println!("{:<18} undefined on every subset", s.metric),
        }
    }
    let report = EvalReport {
        model: model_path,
        data: data_path,
        splits,
        fraction,
        seed,
        summary,
        per_split,
    };
    write_json(&out, &report)?;
    println!("wrote {}", out.display());
    Ok(())
}

// ---------------------------------------------------------------- align --

#[derive(Debug, Args)]
struct AlignArgs {
    /// Input CSV with a label column.
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long)]
    label_col: Option<String>,
    /// Comma-separated 1-based feature order, e.g. "6,2,1". Defaults to
    /// natural order.
    #[arg(long)]
    order: Option<String>,
    /// Kernel width; defaults to 1/d.
    #[arg(long)]
    gamma: Option<f64>,
    /// Output CSV path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct AlignFile {
    data: Option<PathBuf>,
    label_col: Option<String>,
    order: Option<String>,
    gamma: Option<f64>,
    out: Option<PathBuf>,
}

fn parse_order(text: &str, d: usize) -> Result<Vec<usize>> {
    let mut order = Vec::new();
    for part in text.split(',') {
        let k: usize = part
            .trim()
            .parse()
            .map_err(|_| Error::config(format!("bad feature number '{}'", part.trim())))?;
        if k == 0 || k > d {
            return Err(Error::config(format!(
                "feature number {k} is outside 1..={d}"
            )));
        }
        order.push(k - 1);
    }
    Ok(order)
}

fn cmd_align(args: AlignArgs) -> Result<()> {
    let file: AlignFile = read_config(args.config.as_deref())?;
    let data = args
        .data
        .or(file.data)
        .ok_or_else(|| Error::config("--data is required"))?;
    let label_col = args
        .label_col
        .or(file.label_col)
        .unwrap_or_else(|| "label".to_string());
    let out = args
        .out
        .or(file.out)
        .unwrap_or_else(|| PathBuf::from("alignment.csv"));

    let ds = load_csv(&data, &label_col)?;
    let order = match args.order.or(file.order) {
        Some(text) => parse_order(&text, ds.d())?,
        None => (0..ds.d()).collect(),
    };
    let gamma = args
        .gamma
        .or(file.gamma)
        .unwrap_or(1.0 / ds.d() as f64);

    let points = alignment_trace(&ds, &order, gamma)?;
    let mut csv = String::from("k,frobenius_norm,target_alignment\n");
    for p in &points {
        csv.push_str(&format!(
            "{},{},{}\n",
            p.prefix_len, p.frobenius_norm, p.target_alignment
        ));
    }
    fs::write(&out, csv)?;
    println!(
        "wrote {} ({} prefixes, gamma = {gamma})",
        out.display(),
        points.len()
    );
    Ok(())
}

// ------------------------------------------------------------------- vc --

#[derive(Debug, Args)]
struct VcArgs {
    /// Ambient dimension.
    #[arg(long)]
    dim: Option<usize>,
    /// Blind features (1-based), comma separated or repeated.
    #[arg(long, value_delimiter = ',')]
    blind: Vec<usize>,
    /// Random point sets tried per size.
    #[arg(long)]
    trials: Option<usize>,
    /// Largest set size to try.
    #[arg(long)]
    s_max: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Optional JSON report path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct VcFile {
    dim: Option<usize>,
    blind: Option<Vec<usize>>,
    trials: Option<usize>,
    s_max: Option<usize>,
    seed: Option<u64>,
    out: Option<PathBuf>,
}

fn cmd_vc(args: VcArgs) -> Result<()> {
    let file: VcFile = read_config(args.config.as_deref())?;
    let dim = args
        .dim
        .or(file.dim)
        .ok_or_else(|| Error::config("--dim is required"))?;
    let blind = if args.blind.is_empty() {
        file.blind.unwrap_or_default()
    } else {
        args.blind
    };
    let trials = args.trials.or(file.trials).unwrap_or(50);
    let s_max = args.s_max.or(file.s_max).unwrap_or_else(|| point_cap(dim));
    let seed = require_seed(args.seed, file.seed)?;

    let est = empirical_vc(dim, &blind, trials, s_max, seed)?;
    println!(
        "empirical VC lower bound: {} (dim {}, blind {:?})",
        est.lower_bound, est.dim, est.blind
    );
    let witness: Vec<String> = est.witness.iter().map(|p| format!("{p:?}")).collect();
    println!("witness: {}", witness.join(" "));
    match est.failed_at {
        Some(s) => println!("no shattered set of size {s} found within budget"),
        None => println!("search exhausted the size budget while still succeeding"),
    }
    if let Some(out) = args.out.or(file.out) {
        write_json(&out, &est)?;
        println!("wrote {}", out.display());
    }
    Ok(())
}
