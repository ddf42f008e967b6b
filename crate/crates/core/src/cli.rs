// SPDX-License-Identifier: MIT OR Apache-2.0

//! Command-line front end: `generate`, `detect`, `eval`, and `bench`.
//!
//! Settings are layered: built-in defaults, then a JSON `--config` file,
//! then individual flags. Failures print one JSON object on stderr and exit
//! with 2 (validation), 3 (I/O), or 4 (numerical).

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::data::TimeSeriesDataset;
use crate::detection::{BoundVariant, CandidateSet};
use crate::error::{Error, Result};
use crate::harness::{
    bench, excess_risk_for, run_experiment, write_timelines_csv, BoundInputs, DetectionReport, ExcessRiskSummary,
    ExperimentConfig, Method,
};
use crate::io::{
    default_feature_names, metadata_path, read_dataset_csv, read_json, sibling, write_atomic, write_dataset_csv,
    write_json, DatasetMetadata, DatasetSchema, LoadedDataset,
};
use crate::learners::LearnerFamily;
use crate::synth::{generate_feature_addition, generate_replicate, FeatureAdditionSpec, SyntheticDataset, SyntheticSpec};

#[derive(Debug, Parser)]
#[command(name = "splitsearch", version, about = "Change-point search for time-ordered regression data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic dataset and its metadata sidecar.
    Generate(GenerateArgs),
    /// Run detectors on a dataset and write their reports.
    Detect(DetectArgs),
    /// Write error timelines and per-method summaries, over one or more seeds.
    Eval(EvalArgs),
    /// Time methods and write a median-milliseconds table.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Candidates {
    Full,
    SqrtGrid,
    List,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Generator {
    /// 40 inputs, 2000 rows, change after row 1000.
    #[default]
    Desk,
    /// 1000 inputs, 10000 rows, change after row 5000.
    Paper,
    /// 100 old and 5 new inputs, 2000 rows, change after row 1000.
    FeatureAddition,
}

#[derive(Debug, Args)]
pub struct SharedArgs {
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Destination file; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// JSON file of settings; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct DatasetArgs {
    #[arg(long)]
    pub target_col: Option<String>,
    #[arg(long)]
    pub eta_col: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub old_cols: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',')]
    pub new_cols: Option<Vec<String>>,
    /// Response bound B.
    #[arg(long)]
    pub bound: Option<f64>,
}

#[derive(Debug, Args)]
pub struct DetectionArgs {
    /// Method to run; repeat for several.
    #[arg(long = "method")]
    pub methods: Vec<Method>,
    #[arg(long, value_enum)]
    pub candidates: Option<Candidates>,
    /// Comma-separated one-based split indices for `--candidates list`.
    #[arg(long, value_delimiter = ',')]
    pub candidate_list: Option<Vec<usize>>,
    /// `least-squares`, `ridge:L`, `logistic`, `l1-logistic:L`, `kernel:G,L`, or `constant`.
    #[arg(long, value_parser = parse_learner)]
    pub learner: Option<LearnerFamily>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long, requires = "p2")]
    pub p1: Option<usize>,
    #[arg(long, requires = "p1")]
    pub p2: Option<usize>,
    #[arg(long)]
    pub max_k: Option<usize>,
    #[arg(long)]
    pub multi_k: Option<usize>,
    /// Moving-average window for smoothed timelines.
    #[arg(long)]
    pub window: Option<usize>,
    #[arg(long)]
    pub record_timings: bool,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub shared: SharedArgs,
    #[arg(long, value_enum, default_value_t = Generator::Desk)]
    pub generator: Generator,
    #[arg(long, default_value_t = 0)]
    pub replicate: usize,
    /// Override the number of rows.
    #[arg(long)]
    pub rows: Option<usize>,
    /// Override the last first-regime row.
    #[arg(long)]
    pub change_at: Option<usize>,
    /// Override the number of inputs (old inputs for feature addition).
    #[arg(long)]
    pub inputs: Option<usize>,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    #[command(flatten)]
    pub shared: SharedArgs,
    #[command(flatten)]
    pub dataset: DatasetArgs,
    #[command(flatten)]
    pub detection: DetectionArgs,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub shared: SharedArgs,
    #[command(flatten)]
    pub dataset: DatasetArgs,
    #[command(flatten)]
    pub detection: DetectionArgs,
    /// Number of consecutive seeds starting at `--seed`. Without `--input`,
    /// each seed gets a freshly generated dataset.
    #[arg(long, default_value_t = 1)]
    pub seeds: usize,
    #[arg(long, value_enum, default_value_t = Generator::Desk)]
    pub generator: Generator,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub shared: SharedArgs,
    #[command(flatten)]
    pub dataset: DatasetArgs,
    #[command(flatten)]
    pub detection: DetectionArgs,
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
}

/// Contents of a `--config` file. Every field is optional.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: Option<ExperimentConfig>,
    pub methods: Option<Vec<Method>>,
    pub schema: Option<DatasetSchema>,
    pub synthetic: Option<SyntheticSpec>,
    pub feature_addition: Option<FeatureAdditionSpec>,
}

fn parse_learner(s: &str) -> std::result::Result<LearnerFamily, String> {
    let (name, params) = s.split_once(':').unwrap_or((s, ""));
    let values: Vec<f64> = if params.is_empty() {
        Vec::new()
    } else {
        params
            .split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|_| format!("bad number '{v}' in learner '{s}'")))
            .collect::<std::result::Result<_, _>>()?
    };
    let want = |n: usize| {
        if values.len() == n {
            Ok(())
        } else {
            Err(format!("learner '{name}' takes {n} parameter(s), got {}", values.len()))
        }
    };
    match name {
        "least-squares" | "ls" => want(0).map(|_| LearnerFamily::LeastSquares),
        "constant" => want(0).map(|_| LearnerFamily::Constant),
        "logistic" => want(0).map(|_| LearnerFamily::Logistic),
        "ridge" => want(1).map(|_| LearnerFamily::Ridge { lambda: values[0] }),
        "l1-logistic" => want(1).map(|_| LearnerFamily::L1Logistic { lambda: values[0] }),
        "kernel" => want(2).map(|_| LearnerFamily::KernelRidge {
            bandwidth: values[0],
            lambda: values[1],
        }),
        _ => Err(format!("unknown learner '{name}'")),
    }
}

/// Parses `args`, runs the command, and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            report_error("usage", &e.to_string(), 2);
            return 2;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            let code = e.exit_code();
            report_error(e.kind(), &e.to_string(), code);
            code
        }
    }
}

fn report_error(kind: &str, message: &str, code: i32) {
    let obj = serde_json::json!({ "error": kind, "message": message.trim_end(), "exit_code": code });
    let _ = writeln!(std::io::stderr(), "{obj}");
}

/// Runs a parsed command inside a pool of the requested size.
pub fn execute(cli: Cli) -> Result<()> {
    let threads = match &cli.command {
        Command::Generate(a) => a.shared.threads,
        Command::Detect(a) => a.shared.threads,
        Command::Eval(a) => a.shared.threads,
        Command::Bench(a) => a.shared.threads,
    };
    match threads {
        Some(0) => Err(Error::invalid("--threads must be >= 1")),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            pool.install(|| dispatch(cli.command))
        }
        None => dispatch(cli.command),
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Generate(a) => cmd_generate(&a),
        Command::Detect(a) => cmd_detect(&a),
        Command::Eval(a) => cmd_eval(&a),
        Command::Bench(a) => cmd_bench(&a),
    }
}

fn load_config(shared: &SharedArgs) -> Result<RunConfig> {
    match &shared.config {
        Some(path) => read_json(path),
        None => Ok(RunConfig::default()),
    }
}

fn experiment_config(run: &RunConfig, shared: &SharedArgs, det: &DetectionArgs) -> Result<ExperimentConfig> {
    let mut cfg = run.experiment.clone().unwrap_or_default();
    if let Some(seed) = shared.seed {
        cfg.seed = seed;
    }
    if let Some(family) = &det.learner {
        cfg.family = family.clone();
    }
    match (det.candidates, &det.candidate_list) {
        (Some(Candidates::List), Some(list)) => cfg.candidates = CandidateSet::Explicit(list.clone()),
        (Some(Candidates::List), None) => return Err(Error::invalid("--candidates list needs --candidate-list")),
        (Some(Candidates::Full), None) => cfg.candidates = CandidateSet::Full,
        (Some(Candidates::SqrtGrid), None) => cfg.candidates = CandidateSet::SqrtGrid,
        (None, Some(list)) => cfg.candidates = CandidateSet::Explicit(list.clone()),
        (Some(_), Some(_)) => return Err(Error::invalid("--candidate-list requires --candidates list")),
        (None, None) => {}
    }
    if let Some(delta) = det.delta {
        cfg.delta = delta;
    }
    if let (Some(p1), Some(p2)) = (det.p1, det.p2) {
        cfg.bound_dims = Some((p1, p2));
    }
    if let Some(k) = det.max_k {
        cfg.max_k = k;
    }
    if let Some(k) = det.multi_k {
        cfg.multi_k = k;
    }
    if let Some(w) = det.window {
        cfg.smoothing_window = Some(w);
    }
    if det.record_timings {
        cfg.record_timings = true;
    }
    if !(cfg.delta > 0.0 && cfg.delta < 1.0) {
        return Err(Error::invalid(format!("delta must lie in (0, 1), got {}", cfg.delta)));
    }
    Ok(cfg)
}

fn methods(run: &RunConfig, det: &DetectionArgs) -> Result<Vec<Method>> {
    let methods = if det.methods.is_empty() {
        run.methods.clone().unwrap_or_else(|| vec![Method::Sas])
    } else {
        det.methods.clone()
    };
    if methods.is_empty() {
        return Err(Error::invalid("at least one --method is required"));
    }
    Ok(methods)
}

/// Reads `--input`. Without explicit partition flags, the old/new columns
/// and bound recorded in a `<stem>.meta.json` sidecar are used when present.
fn load_dataset(run: &RunConfig, shared: &SharedArgs, args: &DatasetArgs) -> Result<LoadedDataset> {
    let path = shared.input.as_ref().ok_or_else(|| Error::invalid("--input is required"))?;
    let mut schema = run.schema.clone().unwrap_or_default();
    if let Some(c) = &args.target_col {
        schema.target_col = c.clone();
    }
    if args.eta_col.is_some() {
        schema.eta_col = args.eta_col.clone();
    }
    if args.old_cols.is_some() {
        schema.old_cols = args.old_cols.clone();
    }
    if args.new_cols.is_some() {
        schema.new_cols = args.new_cols.clone();
    }
    if args.bound.is_some() {
        schema.bound = args.bound;
    }
    let meta = metadata_path(path);
    if schema.old_cols.is_none() && schema.new_cols.is_none() && meta.exists() {
        let meta: DatasetMetadata = read_json(&meta)?;
        schema.old_cols = Some(meta.old_columns);
        schema.new_cols = Some(meta.new_columns);
        schema.bound = schema.bound.or(Some(meta.bound));
    }
    read_dataset_csv(path, &schema)
}

fn emit(output: Option<&Path>, fill: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match output {
        Some(path) => write_atomic(path, fill),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            fill(&mut lock)?;
            lock.flush().map_err(|e| Error::io("<stdout>", e))
        }
    }
}

fn json_to(w: &mut dyn Write, value: &impl Serialize) -> Result<()> {
    let io = |e: std::io::Error| Error::io("<output>", e);
    serde_json::to_writer_pretty(&mut *w, value).map_err(|e| io(e.into()))?;
    writeln!(w).map_err(io)
}

fn synthetic_spec(run: &RunConfig, generator: Generator, seed: Option<u64>) -> SyntheticSpec {
    let mut spec = run.synthetic.clone().unwrap_or_else(|| match generator {
        Generator::Paper => SyntheticSpec::paper_scale(0),
        _ => SyntheticSpec::desk_scale(0),
    });
    if let Some(seed) = seed {
        spec.seed = seed;
    }
    spec
}

fn feature_spec(run: &RunConfig, seed: Option<u64>) -> FeatureAdditionSpec {
    let mut spec = run.feature_addition.clone().unwrap_or_else(|| FeatureAdditionSpec::desk_scale(0));
    if let Some(seed) = seed {
        spec.seed = seed;
    }
    spec
}

/// One generated dataset with its metadata.
fn generate_one(
    run: &RunConfig,
    generator: Generator,
    seed: Option<u64>,
    replicate: usize,
    overrides: (Option<usize>, Option<usize>, Option<usize>),
) -> Result<(SyntheticDataset, DatasetMetadata)> {
    let (rows, change_at, inputs) = overrides;
    let (set, spec_json, seed) = match generator {
        Generator::FeatureAddition => {
            let mut spec = feature_spec(run, seed);
            spec.m = rows.unwrap_or(spec.m);
            spec.change_at = change_at.unwrap_or(spec.change_at.min(spec.m));
            spec.old_features = inputs.unwrap_or(spec.old_features);
            let json = serde_json::to_value(&spec).expect("spec serializes");
            (generate_feature_addition(&spec)?, json, spec.seed)
        }
        _ => {
            let mut spec = synthetic_spec(run, generator, seed);
            spec.m = rows.unwrap_or(spec.m);
            spec.change_at = change_at.unwrap_or(spec.change_at.min(spec.m));
            spec.num_inputs = inputs.unwrap_or(spec.num_inputs);
            let json = serde_json::to_value(&spec).expect("spec serializes");
            (generate_replicate(&spec, replicate)?, json, spec.seed)
        }
    };
    let names = default_feature_names(set.data.num_features());
    let d = set.data.old_features();
    let meta = DatasetMetadata {
        spec: spec_json,
        feasibility_scale: set.scale,
        seed,
        replicate: set.replicate,
        true_split: set.true_split,
        old_columns: names[..d].to_vec(),
        new_columns: names[d..].to_vec(),
        column_order: set.column_order.clone(),
        normalization: set.normalization,
        bound: set.data.bound(),
    };
    Ok((set, meta))
}

fn cmd_generate(a: &GenerateArgs) -> Result<()> {
    let run = load_config(&a.shared)?;
    let output = a.shared.output.as_ref().ok_or_else(|| Error::invalid("generate needs --output"))?;
    let (set, meta) = generate_one(&run, a.generator, a.shared.seed, a.replicate, (a.rows, a.change_at, a.inputs))?;
    let names = default_feature_names(set.data.num_features());
    write_dataset_csv(output, &set.data, &names)?;
    write_json(&metadata_path(output), &meta)
}

fn cmd_detect(a: &DetectArgs) -> Result<()> {
    let run = load_config(&a.shared)?;
    let cfg = experiment_config(&run, &a.shared, &a.detection)?;
    let methods = methods(&run, &a.detection)?;
    let loaded = load_dataset(&run, &a.shared, &a.dataset)?;
    let reports = run_experiment(&loaded.data, &methods, &cfg)?;
    emit(a.shared.output.as_deref(), |w| match a.shared.format {
        Format::Json => json_to(w, &reports),
        Format::Csv => write_timelines_csv(&reports, w),
    })
}

/// Per-method slice of an evaluation summary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub method: Method,
    pub mean_mse: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub t_hat: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub change_times: Option<Vec<usize>>,
    pub empirical_risk: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub true_risk: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub excess_risk: Option<ExcessRiskSummary>,
}

/// Results of one seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalSummary {
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub dataset: Option<DatasetMetadata>,
    pub config: ExperimentConfig,
    pub methods: Vec<MethodSummary>,
}

fn summarize(data: &TimeSeriesDataset, reports: &[DetectionReport], cfg: &ExperimentConfig) -> Result<Vec<MethodSummary>> {
    reports
        .iter()
        .map(|r| {
            let variant = match r.method {
                Method::Sas => Some(BoundVariant::Full),
                Method::SasGrid | Method::Sasf => Some(BoundVariant::Grid),
                _ => None,
            };
            let excess_risk = match (variant, cfg.bound_dims, r.true_risk) {
                (Some(variant), Some((p1, p2)), Some(fitted)) => Some(excess_risk_for(
                    data,
                    fitted,
                    &cfg.search_config(data),
                    BoundInputs {
                        p1,
                        p2,
                        delta: cfg.delta,
                        variant,
                    },
                )?),
                _ => None,
            };
            Ok(MethodSummary {
                method: r.method,
                mean_mse: r.mean_mse,
                t_hat: r.t_hat,
                change_times: r.change_times.clone(),
                empirical_risk: r.empirical_risk,
                true_risk: r.true_risk,
                bound: r.bound,
                excess_risk,
            })
        })
        .collect()
}

fn write_seeded_timelines(runs: &[(u64, Vec<DetectionReport>)], w: &mut dyn Write) -> Result<()> {
    let io = |e: std::io::Error| Error::io("<timelines>", e);
    writeln!(w, "seed,t,method,sq_error,smoothed").map_err(io)?;
    for (seed, reports) in runs {
        for r in reports {
            for (i, (e, s)) in r.timeline.iter().zip(&r.smoothed).enumerate() {
                writeln!(w, "{seed},{},{},{e},{s}", i + 1, r.method).map_err(io)?;
            }
        }
    }
    Ok(())
}

/// Path of the summary written next to an eval timeline file.
pub fn summary_path(output: &Path) -> PathBuf {
    sibling(output, "summary.json")
}

fn cmd_eval(a: &EvalArgs) -> Result<()> {
    if a.seeds == 0 {
        return Err(Error::invalid("--seeds must be >= 1"));
    }
    let run = load_config(&a.shared)?;
    let base = experiment_config(&run, &a.shared, &a.detection)?;
    let methods = methods(&run, &a.detection)?;
    let fixed = match &a.shared.input {
        Some(_) => Some(load_dataset(&run, &a.shared, &a.dataset)?),
        None => None,
    };
    let mut runs = Vec::with_capacity(a.seeds);
    let mut summaries = Vec::with_capacity(a.seeds);
    for i in 0..a.seeds {
        let seed = base.seed.wrapping_add(i as u64);
        let cfg = ExperimentConfig { seed, ..base.clone() };
        let (data, meta) = match &fixed {
            Some(loaded) => (loaded.data.clone(), None),
            None => {
                let (set, meta) = generate_one(&run, a.generator, Some(seed), 0, (None, None, None))?;
                (set.data, Some(meta))
            }
        };
        let reports = run_experiment(&data, &methods, &cfg)?;
        summaries.push(EvalSummary {
            seed,
            dataset: meta,
            config: cfg.clone(),
            methods: summarize(&data, &reports, &cfg)?,
        });
        runs.push((seed, reports));
    }
    match &a.shared.output {
        Some(path) => {
            write_atomic(path, |w| {
                if runs.len() == 1 {
                    write_timelines_csv(&runs[0].1, w)
                } else {
                    write_seeded_timelines(&runs, w)
                }
            })?;
            write_json(&summary_path(path), &summaries)
        }
        None => emit(None, |w| json_to(w, &summaries)),
    }
}

fn cmd_bench(a: &BenchArgs) -> Result<()> {
    let run = load_config(&a.shared)?;
    let cfg = experiment_config(&run, &a.shared, &a.detection)?;
    let methods = methods(&run, &a.detection)?;
    let loaded = load_dataset(&run, &a.shared, &a.dataset)?;
    let table = bench(&loaded.data, &methods, a.reps, &cfg)?;
    let io = |e: std::io::Error| Error::io("<bench>", e);
    let format = a.shared.format;
    emit(a.shared.output.as_deref(), |w| match format {
        Format::Json => json_to(w, &table.rows),
        Format::Csv => {
            writeln!(w, "method,median_ms").map_err(io)?;
            for r in &table.rows {
                writeln!(w, "{},{}", r.method, r.median_ms).map_err(io)?;
            }
            Ok(())
        }
    })?;
    if let Some(path) = &a.shared.output {
        let (suffix, fill): (&str, Box<dyn FnOnce(&mut dyn Write) -> Result<()>>) = match format {
            Format::Json => ("raw.json", Box::new(|w| json_to(w, &table.raw))),
            Format::Csv => (
                "raw.csv",
                Box::new(|w| {
                    writeln!(w, "method,repetition,ms").map_err(io)?;
                    for r in &table.raw {
                        writeln!(w, "{},{},{}", r.method, r.repetition, r.ms).map_err(io)?;
                    }
                    Ok(())
                }),
            ),
        };
        write_atomic(&sibling(path, suffix), fill)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn learner_strings() {
        assert_eq!(parse_learner("ls").unwrap(), LearnerFamily::LeastSquares);
        assert_eq!(parse_learner("ridge:0.5").unwrap(), LearnerFamily::Ridge { lambda: 0.5 });
        assert_eq!(
            parse_learner("kernel:2,0.1").unwrap(),
            LearnerFamily::KernelRidge {
                bandwidth: 2.0,
                lambda: 0.1
            }
        );
        assert!(parse_learner("ridge").is_err());
        assert!(parse_learner("forest").is_err());
    }

    #[test]
    fn flags_override_config_file() {
        let cli = Cli::try_parse_from(["splitsearch", "detect", "--seed", "9", "--delta", "0.2", "--candidates", "sqrt-grid"]).unwrap();
        let Command::Detect(a) = cli.command else { panic!() };
        let run = RunConfig {
            experiment: Some(ExperimentConfig {
                seed: 3,
                delta: 0.1,
                multi_k: 2,
                ..Default::default()
            }),
            ..Default::default()
        };
        let cfg = experiment_config(&run, &a.shared, &a.detection).unwrap();
        assert_eq!((cfg.seed, cfg.delta, cfg.multi_k), (9, 0.2, 2));
        assert_eq!(cfg.candidates, CandidateSet::SqrtGrid);
    }

    #[test]
    fn partial_config_json_parses() {
        let run: RunConfig = serde_json::from_str(r#"{"experiment": {"max_k": 5}, "methods": ["sas", "caf"]}"#).unwrap();
        assert_eq!(run.experiment.unwrap().max_k, 5);
        assert_eq!(run.methods.unwrap(), vec![Method::Sas, Method::Caf]);
        assert!(serde_json::from_str::<RunConfig>(r#"{"bogus": 1}"#).is_err());
    }
}
