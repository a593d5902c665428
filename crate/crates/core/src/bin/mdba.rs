use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use mdba::harness::{emit_report, load_dataset, run_experiment, run_method_on, DatasetSource, ExperimentConfig, ExperimentReport};
use mdba::mdba::Method;
use mdba::simulate::{build_world, ScenarioSpec, SimulatedWorld};
use mdba::synth::{well_specified_world, WellSpecifiedSpec};
use mdba::{ingest_csv, BiasEstimate, DatasetSchema, DecisionSet, Error, GoldStandardSet};

#[derive(Parser)]
#[command(name = "mdba", version, about = "Estimate per-human TPR-gap bias from decisions and a small gold-standard pool")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Comma-separated subset of MDBA, MDBA-Naive, SR, GS, CL.
    #[arg(long, global = true, value_delimiter = ',')]
    methods: Option<Vec<String>>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Build a simulated world and save it to --out-dir.
    Simulate,
    /// Run estimators on a saved world or on user-supplied CSV files.
    Assess {
        /// Directory written by `simulate`.
        #[arg(long, conflicts_with_all = ["decisions", "gold"])]
        world: Option<PathBuf>,
        /// Gold-pool size per group drawn from the world's reserve.
        #[arg(long, default_value_t = 200)]
        gs_size: usize,
        /// One CSV per human; the file stem is the human id.
        #[arg(long, num_args = 1.., requires_all = ["gold", "schema"])]
        decisions: Vec<PathBuf>,
        #[arg(long)]
        gold: Option<PathBuf>,
        /// Schema naming both the decision and the label column.
        #[arg(long)]
        schema: Option<PathBuf>,
    },
    /// Run the full Monte-Carlo grid and write report files to --out-dir.
    Benchmark,
    /// Re-render a saved report.json.
    Report {
        #[arg(long)]
        input: PathBuf,
    },
}

/// Configuration accepted by `simulate`.
#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(default)]
struct SimulateConfig {
    dataset: DatasetSource,
    scenario: ScenarioSpec,
}

enum Failure {
    Invalid(String),
    Partial(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

fn read_config<T: Default + for<'de> Deserialize<'de>>(path: &Option<PathBuf>) -> Result<T, Failure> {
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Failure::Invalid(format!("{}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| Failure::Invalid(format!("{}: {e}", p.display())))
        }
    }
}

fn parse_methods(cli: &Cli, default: &[Method]) -> Result<Vec<Method>, Failure> {
    match &cli.methods {
        None => Ok(default.to_vec()),
        Some(names) => Ok(names.iter().map(|m| Method::parse(m)).collect::<mdba::Result<_>>()?),
    }
}

fn out_dir(cli: &Cli, fallback: &str) -> PathBuf {
    cli.out_dir.clone().unwrap_or_else(|| PathBuf::from(fallback))
}

fn simulate(cli: &Cli) -> Result<(), Failure> {
    let config: SimulateConfig = read_config(&cli.config)?;
    let seed = cli.seed.unwrap_or(0);
    let world = match &config.dataset {
        DatasetSource::WellSpecified { spec } => well_specified_world(
            &WellSpecifiedSpec {
                prevalence: config.scenario.prevalence,
                gs_per_group: config.scenario.gs_reserve_per_group,
                ..spec.clone()
            },
            seed,
        )?,
        source => {
            let dataset = load_dataset(source)?.expect("non-generated source has a dataset");
            build_world(&dataset, &config.scenario, seed)?
        }
    };
    let dir = out_dir(cli, "world");
    world.save(&dir)?;
    log::info!("saved {} humans to {}", world.humans.len(), dir.display());
    let flagged = world
        .humans
        .iter()
        .filter(|h| h.tpr_a.closest_attainable || h.tpr_not_a.closest_attainable)
        .count();
    if flagged > 0 {
        log::warn!("{flagged} humans missed their TPR band and use the closest attainable rate");
    }
    println!("{}", dir.display());
    Ok(())
}

#[derive(Serialize)]
struct HumanRow {
    method: Method,
    human_id: String,
    true_gap: Option<f64>,
    #[serde(flatten)]
    estimate: Option<EstimateSummary>,
    error: Option<String>,
}

#[derive(Serialize)]
struct EstimateSummary {
    gap: f64,
    raw_gap: f64,
    uncertainty: f64,
    threshold_pairs: usize,
    attained_rpr_a: Option<f64>,
    attained_rpr_not_a: Option<f64>,
    nearest_fallback: bool,
}

impl From<&BiasEstimate> for EstimateSummary {
    fn from(e: &BiasEstimate) -> Self {
        Self {
            gap: e.gap.value,
            raw_gap: e.raw_gap,
            uncertainty: e.uncertainty,
            threshold_pairs: e.thresholds_used.len(),
            attained_rpr_a: e.attained_rpr_a,
            attained_rpr_not_a: e.attained_rpr_not_a,
            nearest_fallback: e.nearest_fallback,
        }
    }
}

fn load_user_data(decisions: &[PathBuf], gold: &Path, schema: &Path) -> Result<(Vec<DecisionSet>, GoldStandardSet), Failure> {
    let schema = DatasetSchema::from_json_file(schema)?;
    if schema.decision_column.is_none() || schema.label_column.is_none() {
        return Err(Failure::Invalid("schema must name both decision_column and label_column".into()));
    }
    let decision_schema = DatasetSchema { label_column: None, ..schema.clone() };
    let gold_schema = DatasetSchema { decision_column: None, ..schema };
    let gold = ingest_csv(gold, &gold_schema)?;
    let mut sets = Vec::new();
    for path in decisions {
        let data = ingest_csv(path, &decision_schema)?;
        if data.feature_names != gold.feature_names {
            return Err(Failure::Invalid(format!(
                "{}: encoded features differ from the gold file (check categorical levels)",
                path.display()
            )));
        }
        let id = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        sets.push(DecisionSet::new(id, data.instances)?);
    }
    Ok((sets, GoldStandardSet::new(gold.instances)?))
}

fn assess(cli: &Cli, world: &Option<PathBuf>, gs_size: usize, decisions: &[PathBuf], gold: &Option<PathBuf>, schema: &Option<PathBuf>) -> Result<(), Failure> {
    let config: ExperimentConfig = read_config(&cli.config)?;
    let methods = parse_methods(cli, &config.methods)?;
    let seed = cli.seed.unwrap_or(config.base_seed);
    let (sets, gold, truths) = match (world, gold, schema) {
        (Some(dir), _, _) => {
            let world = SimulatedWorld::load(dir)?;
            (world.decision_sets()?, world.gold_pool(gs_size)?, Some(world.true_gaps()))
        }
        (None, Some(gold), Some(schema)) => {
            let (sets, gold) = load_user_data(decisions, gold, schema)?;
            (sets, gold, None)
        }
        _ => return Err(Failure::Invalid("pass --world, or --decisions with --gold and --schema".into())),
    };

    let mut rows = Vec::new();
    for &method in &methods {
        match run_method_on(method, &sets, &gold, &config, seed) {
            Ok(outcomes) => {
                for (k, o) in outcomes.iter().enumerate() {
                    rows.push(HumanRow {
                        method,
                        human_id: o.human_id.clone(),
                        true_gap: truths.as_ref().map(|t| t[k]),
                        estimate: o.ok().map(EstimateSummary::from),
                        error: o.result.as_ref().err().map(|e| e.to_string()),
                    });
                }
            }
            Err(e) => {
                for (k, set) in sets.iter().enumerate() {
                    rows.push(HumanRow {
                        method,
                        human_id: set.human_id.clone(),
                        true_gap: truths.as_ref().map(|t| t[k]),
                        estimate: None,
                        error: Some(e.to_string()),
                    });
                }
            }
        }
    }

    let rendered = match cli.format {
        Format::Json => serde_json::to_string_pretty(&rows).map_err(Error::from)? + "\n",
        Format::Csv => assessment_csv(&rows)?,
    };
    match &cli.out_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(Error::from)?;
            let name = match cli.format {
                Format::Json => "assessment.json",
                Format::Csv => "assessment.csv",
            };
            std::fs::write(dir.join(name), rendered).map_err(Error::from)?;
        }
        None => print!("{rendered}"),
    }
    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    if failed > 0 {
        return Err(Failure::Partial(format!("{failed} of {} estimates failed", rows.len())));
    }
    Ok(())
}

fn assessment_csv(rows: &[HumanRow]) -> Result<String, Failure> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record([
        "method", "human_id", "true_gap", "gap", "raw_gap", "uncertainty", "threshold_pairs",
        "attained_rpr_a", "attained_rpr_not_a", "nearest_fallback", "error",
    ])
    .map_err(Error::from)?;
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in rows {
        let e = r.estimate.as_ref();
        wtr.write_record([
            r.method.name().to_string(),
            r.human_id.clone(),
            opt(r.true_gap),
            opt(e.map(|e| e.gap)),
            opt(e.map(|e| e.raw_gap)),
            opt(e.map(|e| e.uncertainty)),
            e.map(|e| e.threshold_pairs.to_string()).unwrap_or_default(),
            opt(e.and_then(|e| e.attained_rpr_a)),
            opt(e.and_then(|e| e.attained_rpr_not_a)),
            e.map(|e| e.nearest_fallback.to_string()).unwrap_or_default(),
            r.error.clone().unwrap_or_default(),
        ])
        .map_err(Error::from)?;
    }
    let bytes = wtr.into_inner().map_err(|e| Failure::Invalid(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// One line per cell: key, mean MAE with its interval, and the comparison
/// against MDBA when there is one.
fn print_summary(report: &ExperimentReport, format: Format) -> Result<(), Failure> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match format {
        Format::Json => {
            let cells: Vec<_> = report
                .cells
                .iter()
                .map(|c| {
                    serde_json::json!({
                        "dataset": c.key.dataset,
                        "prevalence": c.key.prevalence,
                        "bias_kind": c.key.bias_kind,
                        "gs_size": c.key.gs_size,
                        "method": c.key.method,
                        "mean_mae": c.mean_mae,
                        "ci_low": c.ci_low,
                        "ci_high": c.ci_high,
                        "n_ok": c.n_ok,
                        "n_failed": c.n_failed,
                    })
                })
                .collect();
            let summary = serde_json::json!({ "cells": cells, "comparisons": report.comparisons });
            writeln!(out, "{}", serde_json::to_string_pretty(&summary).map_err(Error::from)?).map_err(Error::from)?;
        }
        Format::Csv => {
            writeln!(out, "dataset,prevalence,bias_kind,gs_size,method,mean_mae,ci_low,ci_high,n_ok,n_failed,vs_mdba_p,stars")
                .map_err(Error::from)?;
            let opt = |v: Option<f64>| v.map(|x| format!("{x:.6}")).unwrap_or_default();
            for c in &report.cells {
                let cmp = report.comparisons.iter().find(|m| {
                    m.other == c.key.method
                        && m.dataset == c.key.dataset
                        && m.prevalence == c.key.prevalence
                        && m.bias_kind == c.key.bias_kind
                        && m.gs_size == c.key.gs_size
                });
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{},{}",
                    c.key.dataset,
                    c.key.prevalence,
                    c.key.bias_kind,
                    c.key.gs_size,
                    c.key.method,
                    opt(c.mean_mae),
                    opt(c.ci_low),
                    opt(c.ci_high),
                    c.n_ok,
                    c.n_failed,
                    opt(cmp.and_then(|m| m.paired.p_value)),
                    cmp.map(|m| m.paired.stars.as_str()).unwrap_or("")
                )
                .map_err(Error::from)?;
            }
        }
    }
    Ok(())
}

fn benchmark(cli: &Cli) -> Result<(), Failure> {
    let mut config: ExperimentConfig = read_config(&cli.config)?;
    if let Some(seed) = cli.seed {
        config.base_seed = seed;
    }
    config.methods = parse_methods(cli, &config.methods)?;
    config.validate()?;
    let report = run_experiment(&config)?;
    let dir = out_dir(cli, "results");
    for path in emit_report(&report, &dir)? {
        log::info!("wrote {}", path.display());
    }
    print_summary(&report, cli.format)?;
    match report.failed_records() {
        0 => Ok(()),
        n => Err(Failure::Partial(format!("{n} iteration records failed; see report.json"))),
    }
}

fn report(cli: &Cli, input: &Path) -> Result<(), Failure> {
    let report = ExperimentReport::from_json_file(input)?;
    if let Some(dir) = &cli.out_dir {
        for path in emit_report(&report, dir)? {
            log::info!("wrote {}", path.display());
        }
    }
    print_summary(&report, cli.format)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    // Usage errors are validation errors; 2 is reserved for partial failures.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match &cli.command {
        Command::Simulate => simulate(&cli),
        Command::Assess { world, gs_size, decisions, gold, schema } => assess(&cli, world, *gs_size, decisions, gold, schema),
        Command::Benchmark => benchmark(&cli),
        Command::Report { input } => report(&cli, input),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            log::error!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Partial(msg)) => {
            log::warn!("{msg}");
            ExitCode::from(2)
        }
    }
}
