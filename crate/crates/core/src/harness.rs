//! Seeded Monte-Carlo comparison of the estimators.
//!
//! Every iteration builds a fresh world with seed `base_seed + iteration`,
//! runs each enabled method for each gold-pool size and scores the per-human
//! estimates against the true gaps by mean absolute error. Cells are keyed by
//! `(dataset, prevalence, bias kind, gold-pool size, method)` and kept in
//! configuration order, so reports do not depend on scheduling.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{cl_estimate, gs_estimate, sr_estimate, ClConfig};
use crate::data::{ingest_csv, Dataset, DatasetSchema, DecisionSet, GoldStandardSet};
use crate::error::{Error, Result};
use crate::mdba::{estimate_bias, fit_human, BiasEstimate, FittedHuman, HumanOutcome, MdbaConfig, Method};
use crate::metrics::{mae, SelectionNormalization};
use crate::simulate::{build_world_from_shaped, shape_prevalence, BiasKind, ScenarioSpec, SimulatedWorld};
use crate::stats::{significance_test, star_level, t_interval, TestKind};
use crate::synth::{generate, well_specified_world, SyntheticConfig, WellSpecifiedSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DatasetSource {
    Synthetic {
        #[serde(default)]
        config: SyntheticConfig,
    },
    Csv {
        name: String,
        path: PathBuf,
        schema: DatasetSchema,
    },
    /// Worlds from [`well_specified_world`]; only the correct-ordering kind
    /// applies and the scenario's prevalence overrides the spec's.
    WellSpecified {
        #[serde(default)]
        spec: WellSpecifiedSpec,
    },
}

impl Default for DatasetSource {
    fn default() -> Self {
        DatasetSource::Synthetic {
            config: SyntheticConfig::default(),
        }
    }
}

impl DatasetSource {
    pub fn name(&self) -> &str {
        match self {
            DatasetSource::Synthetic { .. } => "synthetic",
            DatasetSource::Csv { name, .. } => name,
            DatasetSource::WellSpecified { .. } => "well_specified",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub dataset: DatasetSource,
    pub prevalences: Vec<f64>,
    pub bias_kinds: Vec<BiasKind>,
    /// Gold-pool sizes, per group.
    pub gs_sizes: Vec<usize>,
    pub iterations: usize,
    pub confidence_level: f64,
    pub methods: Vec<Method>,
    pub significance_test: TestKind,
    pub base_seed: u64,
    /// Scenario template; prevalence and bias kind are set per cell.
    pub scenario: ScenarioSpec,
    /// Settings for MDBA; its learner is shared by the GS and CL baselines.
    pub mdba: MdbaConfig,
    pub cl_folds: usize,
    pub sr_normalization: SelectionNormalization,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            dataset: DatasetSource::default(),
            prevalences: vec![0.2, 0.3],
            bias_kinds: vec![BiasKind::CorrectOrdering, BiasKind::IncorrectOrdering],
            gs_sizes: vec![100, 200, 300, 400],
            iterations: 20,
            confidence_level: 0.95,
            methods: vec![Method::Mdba, Method::Sr, Method::Gs, Method::Cl],
            significance_test: TestKind::PairedT,
            base_seed: 0,
            scenario: ScenarioSpec::default(),
            mdba: MdbaConfig::default(),
            cl_folds: 5,
            sr_normalization: SelectionNormalization::Proportion,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let config: Self = serde_json::from_str(&fs::read_to_string(path)?)?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations < 2 {
            return Err(Error::Config("at least 2 iterations are needed for intervals and tests".into()));
        }
        if !(self.confidence_level > 0.0 && self.confidence_level < 1.0) {
            return Err(Error::Config(format!("confidence level {} outside (0, 1)", self.confidence_level)));
        }
        if self.methods.is_empty() || self.prevalences.is_empty() || self.bias_kinds.is_empty() || self.gs_sizes.is_empty() {
            return Err(Error::Config("methods, prevalences, bias kinds and gold-pool sizes must be non-empty".into()));
        }
        let mut seen = self.methods.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.methods.len() {
            return Err(Error::Config("a method is listed twice".into()));
        }
        if self.gs_sizes.iter().any(|&g| g == 0 || g > self.scenario.gs_reserve_per_group) {
            return Err(Error::Config(format!(
                "gold-pool sizes must lie in 1..={}",
                self.scenario.gs_reserve_per_group
            )));
        }
        if matches!(self.dataset, DatasetSource::WellSpecified { .. })
            && self.bias_kinds.contains(&BiasKind::IncorrectOrdering)
        {
            return Err(Error::Config("well-specified worlds support only correct ordering".into()));
        }
        for &p in &self.prevalences {
            ScenarioSpec {
                prevalence: p,
                ..self.scenario.clone()
            }
            .validate()?;
        }
        self.mdba.validate()
    }
}

/// Per-iteration outcome of one method in one cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub seed: u64,
    pub mae: Option<f64>,
    pub error: Option<String>,
    pub human_ids: Vec<String>,
    pub estimates: Vec<f64>,
    pub truths: Vec<f64>,
    /// Humans whose threshold search fell back to the nearest ratio.
    pub nearest_fallbacks: usize,
}

impl IterationRecord {
    fn failed(iteration: usize, seed: u64, error: String) -> Self {
        Self {
            iteration,
            seed,
            mae: None,
            error: Some(error),
            human_ids: Vec::new(),
            estimates: Vec::new(),
            truths: Vec::new(),
            nearest_fallbacks: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellKey {
    pub dataset: String,
    pub prevalence: f64,
    pub bias_kind: BiasKind,
    pub gs_size: usize,
    pub method: Method,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    #[serde(flatten)]
    pub key: CellKey,
    pub mean_mae: Option<f64>,
    pub half_width: Option<f64>,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub n_ok: usize,
    pub n_failed: usize,
    pub records: Vec<IterationRecord>,
}

impl Cell {
    /// MAE per iteration, `None` for failed iterations.
    pub fn maes(&self) -> Vec<Option<f64>> {
        self.records.iter().map(|r| r.mae).collect()
    }
}

/// MDBA against one other method on the same cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub dataset: String,
    pub prevalence: f64,
    pub bias_kind: BiasKind,
    pub gs_size: usize,
    pub reference: Method,
    pub other: Method,
    #[serde(flatten)]
    pub paired: PairedComparison,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairedComparison {
    pub n_pairs: usize,
    pub reference_mean: Option<f64>,
    pub other_mean: Option<f64>,
    /// `(other - reference) / other * 100`, over paired iterations.
    pub improvement_pct: Option<f64>,
    pub test: TestKind,
    pub p_value: Option<f64>,
    pub degenerate: bool,
    /// Set only when the reference method has the lower mean MAE.
    pub stars: String,
}

/// Paired comparison over iterations where both methods succeeded.
pub fn compare(reference: &[Option<f64>], other: &[Option<f64>], test: TestKind) -> PairedComparison {
    let (r, o): (Vec<f64>, Vec<f64>) = reference
        .iter()
        .zip(other)
        .filter_map(|(a, b)| Some(((*a)?, (*b)?)))
        .unzip();
    let n = r.len();
    let mean = |v: &[f64]| (n > 0).then(|| v.iter().sum::<f64>() / n as f64);
    let (rm, om) = (mean(&r), mean(&o));
    let improvement_pct = match (rm, om) {
        (Some(rm), Some(om)) if om != 0.0 => Some((om - rm) / om * 100.0),
        (Some(rm), Some(om)) if rm == om => Some(0.0),
        _ => None,
    };
    let test_result = significance_test(&r, &o, test).ok();
    let p_value = test_result.map(|t| t.p_value);
    let better = matches!((rm, om), (Some(a), Some(b)) if a < b);
    PairedComparison {
        n_pairs: n,
        reference_mean: rm,
        other_mean: om,
        improvement_pct,
        test,
        p_value,
        degenerate: test_result.is_some_and(|t| t.degenerate),
        stars: match (better, p_value) {
            (true, Some(p)) => star_level(p).to_string(),
            _ => String::new(),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub generator: String,
    pub confidence_level: f64,
    pub interval: String,
    pub bounds_note: String,
    pub significance_test: String,
    pub base_seed: u64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub metadata: ReportMetadata,
    pub config: ExperimentConfig,
    pub cells: Vec<Cell>,
    pub comparisons: Vec<Comparison>,
}

impl ExperimentReport {
    pub fn failed_records(&self) -> usize {
        self.cells.iter().map(|c| c.n_failed).sum()
    }

    pub fn cell(&self, prevalence: f64, bias_kind: BiasKind, gs_size: usize, method: Method) -> Option<&Cell> {
        self.cells.iter().find(|c| {
            c.key.prevalence == prevalence
                && c.key.bias_kind == bias_kind
                && c.key.gs_size == gs_size
                && c.key.method == method
        })
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }
}

/// The source dataset, or `None` for sources that generate worlds directly.
pub fn load_dataset(source: &DatasetSource) -> Result<Option<Dataset>> {
    match source {
        DatasetSource::Synthetic { config } => generate(config).map(Some),
        DatasetSource::Csv { path, schema, .. } => ingest_csv(path, schema).map(Some),
        DatasetSource::WellSpecified { .. } => Ok(None),
    }
}

/// Runs one method on one world and gold-pool size.
pub fn run_method(
    method: Method,
    world: &SimulatedWorld,
    gs_size: usize,
    config: &ExperimentConfig,
    seed: u64,
) -> Result<Vec<HumanOutcome<BiasEstimate>>> {
    run_method_on(method, &world.decision_sets()?, &world.gold_pool(gs_size)?, config, seed)
}

/// Runs one method on explicit decision sets and a gold pool. `seed` drives
/// the CL cross-validation folds.
pub fn run_method_on(
    method: Method,
    sets: &[DecisionSet],
    gold: &GoldStandardSet,
    config: &ExperimentConfig,
    seed: u64,
) -> Result<Vec<HumanOutcome<BiasEstimate>>> {
    let learner = &config.mdba.learner;
    match method {
        Method::Mdba => estimate_bias(sets, gold, &MdbaConfig { naive_mode: false, ..config.mdba.clone() }),
        Method::MdbaNaive => estimate_bias(
            sets,
            gold,
            &MdbaConfig {
                naive_mode: true,
                rescale_by_c: false,
                ..config.mdba.clone()
            },
        ),
        Method::Sr => Ok(sr_estimate(sets, config.sr_normalization)),
        Method::Gs => gs_estimate(sets, gold, learner),
        Method::Cl => cl_estimate(sets, gold, learner, &ClConfig { folds: config.cl_folds, seed }),
    }
}

/// Per-human results with errors already rendered, in human order.
type Scored = std::result::Result<Vec<(String, std::result::Result<BiasEstimate, String>)>, String>;

fn rendered(outcome: Result<Vec<HumanOutcome<BiasEstimate>>>) -> Scored {
    outcome
        .map(|o| o.into_iter().map(|h| (h.human_id, h.result.map_err(|e| e.to_string()))).collect())
        .map_err(|e| e.to_string())
}

/// Records for one method on one world, one per gold-pool size. The MDBA
/// variants fit each human's model and thresholds once and reuse them for
/// every pool size.
fn run_method_all_sizes(method: Method, world: &SimulatedWorld, config: &ExperimentConfig, iteration: usize, seed: u64) -> Vec<IterationRecord> {
    let mdba_config = match method {
        Method::Mdba => Some(MdbaConfig { naive_mode: false, ..config.mdba.clone() }),
        Method::MdbaNaive => Some(MdbaConfig { naive_mode: true, rescale_by_c: false, ..config.mdba.clone() }),
        _ => None,
    };
    let Some(mdba_config) = mdba_config else {
        return config
            .gs_sizes
            .iter()
            .map(|&gs| score(iteration, seed, world, rendered(run_method(method, world, gs, config, seed))))
            .collect();
    };
    let sets = match world.decision_sets() {
        Ok(s) => s,
        Err(e) => return config.gs_sizes.iter().map(|_| IterationRecord::failed(iteration, seed, e.to_string())).collect(),
    };
    let fitted: Vec<std::result::Result<FittedHuman, String>> =
        sets.par_iter().map(|set| fit_human(set, &mdba_config).map_err(|e| e.to_string())).collect();
    config
        .gs_sizes
        .iter()
        .map(|&gs| {
            let scored = world.gold_pool(gs).map_err(|e| e.to_string()).map(|gold| {
                sets.iter()
                    .zip(&fitted)
                    .map(|(set, f)| {
                        let result = match f {
                            Ok(f) => f.assess(set, &gold, &mdba_config).map_err(|e| e.to_string()),
                            Err(e) => Err(e.clone()),
                        };
                        (set.human_id.clone(), result)
                    })
                    .collect()
            });
            score(iteration, seed, world, scored)
        })
        .collect()
}

fn score(iteration: usize, seed: u64, world: &SimulatedWorld, outcome: Scored) -> IterationRecord {
    let outcomes = match outcome {
        Ok(o) => o,
        Err(e) => return IterationRecord::failed(iteration, seed, e),
    };
    let mut record = IterationRecord {
        iteration,
        seed,
        mae: None,
        error: None,
        human_ids: Vec::new(),
        estimates: Vec::new(),
        truths: Vec::new(),
        nearest_fallbacks: 0,
    };
    let mut errors = Vec::new();
    for ((human_id, result), h) in outcomes.iter().zip(&world.humans) {
        match result {
            Ok(est) => {
                record.human_ids.push(h.id.clone());
                record.estimates.push(est.gap.value);
                record.truths.push(h.true_gap);
                record.nearest_fallbacks += usize::from(est.nearest_fallback);
            }
            Err(e) => errors.push(format!("{human_id}: {e}")),
        }
    }
    if errors.is_empty() {
        match mae(&record.estimates, &record.truths) {
            Ok(v) => record.mae = Some(v),
            Err(e) => record.error = Some(e.to_string()),
        }
    } else {
        record.error = Some(errors.join("; "));
    }
    record
}

struct Job {
    p_idx: usize,
    b_idx: usize,
    iteration: usize,
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let dataset = load_dataset(&config.dataset)?;
    let shaped: Vec<Result<Dataset>> = config
        .prevalences
        .iter()
        .map(|&p| match &dataset {
            Some(ds) => shape_prevalence(&ds.instances, p, &config.scenario.simulator).map(|instances| Dataset {
                feature_names: ds.feature_names.clone(),
                instances,
            }),
            None => Ok(Dataset {
                feature_names: Vec::new(),
                instances: Vec::new(),
            }),
        })
        .collect();

    let jobs: Vec<Job> = (0..config.prevalences.len())
        .flat_map(|p_idx| {
            (0..config.bias_kinds.len()).flat_map(move |b_idx| {
                (0..config.iterations).map(move |iteration| Job { p_idx, b_idx, iteration })
            })
        })
        .collect();

    // results[job] = records indexed by [gs_idx][method_idx]
    let results: Vec<Vec<Vec<IterationRecord>>> = jobs
        .par_iter()
        .map(|job| {
            let seed = config.base_seed.wrapping_add(job.iteration as u64);
            let spec = ScenarioSpec {
                prevalence: config.prevalences[job.p_idx],
                bias_kind: config.bias_kinds[job.b_idx],
                ..config.scenario.clone()
            };
            let world = match (&config.dataset, &shaped[job.p_idx]) {
                (DatasetSource::WellSpecified { spec: ws }, _) => well_specified_world(
                    &WellSpecifiedSpec {
                        prevalence: spec.prevalence,
                        gs_per_group: spec.gs_reserve_per_group,
                        ..ws.clone()
                    },
                    seed,
                ),
                (_, Ok(ds)) => build_world_from_shaped(ds, &spec, seed),
                (_, Err(e)) => Err(Error::Simulation(format!("prevalence shaping failed: {e}"))),
            };
            // by_method[m][gs]
            let by_method: Vec<Vec<IterationRecord>> = config
                .methods
                .iter()
                .map(|&m| match &world {
                    Ok(w) => run_method_all_sizes(m, w, config, job.iteration, seed),
                    Err(e) => config
                        .gs_sizes
                        .iter()
                        .map(|_| IterationRecord::failed(job.iteration, seed, format!("world: {e}")))
                        .collect(),
                })
                .collect();
            (0..config.gs_sizes.len())
                .map(|g| by_method.iter().map(|records| records[g].clone()).collect())
                .collect()
        })
        .collect();

    let dataset_name = config.dataset.name().to_string();
    let mut cells = Vec::new();
    for (p_idx, &prevalence) in config.prevalences.iter().enumerate() {
        for (b_idx, &bias_kind) in config.bias_kinds.iter().enumerate() {
            for (g_idx, &gs_size) in config.gs_sizes.iter().enumerate() {
                for (m_idx, &method) in config.methods.iter().enumerate() {
                    let records: Vec<IterationRecord> = jobs
                        .iter()
                        .zip(&results)
                        .filter(|(j, _)| j.p_idx == p_idx && j.b_idx == b_idx)
                        .map(|(_, r)| r[g_idx][m_idx].clone())
                        .collect();
                    cells.push(summarize(
                        CellKey {
                            dataset: dataset_name.clone(),
                            prevalence,
                            bias_kind,
                            gs_size,
                            method,
                        },
                        records,
                        config.confidence_level,
                    ));
                }
            }
        }
    }

    let mut comparisons = Vec::new();
    if config.methods.contains(&Method::Mdba) {
        for reference in cells.iter().filter(|c| c.key.method == Method::Mdba) {
            for other in cells.iter().filter(|c| {
                c.key.method != Method::Mdba
                    && c.key.prevalence == reference.key.prevalence
                    && c.key.bias_kind == reference.key.bias_kind
                    && c.key.gs_size == reference.key.gs_size
            }) {
                comparisons.push(Comparison {
                    dataset: dataset_name.clone(),
                    prevalence: reference.key.prevalence,
                    bias_kind: reference.key.bias_kind,
                    gs_size: reference.key.gs_size,
                    reference: Method::Mdba,
                    other: other.key.method,
                    paired: compare(&reference.maes(), &other.maes(), config.significance_test),
                });
            }
        }
    }

    Ok(ExperimentReport {
        metadata: ReportMetadata {
            generator: format!("mdba {}", env!("CARGO_PKG_VERSION")),
            confidence_level: config.confidence_level,
            interval: "symmetric Student-t interval on per-iteration MAE".into(),
            bounds_note: "both 0.90 and 0.95 bounds are in use for this protocol; the level is configurable".into(),
            significance_test: config.significance_test.label().into(),
            base_seed: config.base_seed,
            iterations: config.iterations,
        },
        config: config.clone(),
        cells,
        comparisons,
    })
}

fn summarize(key: CellKey, records: Vec<IterationRecord>, level: f64) -> Cell {
    let ok: Vec<f64> = records.iter().filter_map(|r| r.mae).collect();
    let n_failed = records.len() - ok.len();
    let mean = (!ok.is_empty()).then(|| ok.iter().sum::<f64>() / ok.len() as f64);
    let half = t_interval(&ok, level).ok().map(|(_, h)| h);
    Cell {
        key,
        mean_mae: mean,
        half_width: half,
        ci_low: mean.zip(half).map(|(m, h)| m - h),
        ci_high: mean.zip(half).map(|(m, h)| m + h),
        n_ok: ok.len(),
        n_failed,
        records,
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn figure_name(prevalence: f64, bias_kind: BiasKind, dataset: &str) -> String {
    format!("plot_{dataset}_p{}_{}.csv", prevalence.to_string().replace('.', "_"), bias_kind.label())
}

/// Writes `report.json`, `cells.csv` and one `plot_*.csv` per
/// (dataset, prevalence, bias kind). Returns the written paths in order.
pub fn emit_report(report: &ExperimentReport, out_dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = out_dir.as_ref();
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();

    let json_path = dir.join("report.json");
    fs::write(&json_path, serde_json::to_string_pretty(report)? + "\n")?;
    written.push(json_path);

    let iterations = report.cells.iter().map(|c| c.records.len()).max().unwrap_or(0);
    let cells_path = dir.join("cells.csv");
    let mut wtr = csv::Writer::from_path(&cells_path)?;
    let mut header: Vec<String> = [
        "dataset", "prevalence", "bias_kind", "gs_size", "method", "mean_mae", "ci_low", "ci_high", "n_ok", "n_failed",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    header.extend((0..iterations).map(|i| format!("mae_iter_{i}")));
    wtr.write_record(&header)?;
    for c in &report.cells {
        let mut row = vec![
            c.key.dataset.clone(),
            c.key.prevalence.to_string(),
            c.key.bias_kind.label().to_string(),
            c.key.gs_size.to_string(),
            c.key.method.name().to_string(),
            opt(c.mean_mae),
            opt(c.ci_low),
            opt(c.ci_high),
            c.n_ok.to_string(),
            c.n_failed.to_string(),
        ];
        row.extend((0..iterations).map(|i| opt(c.records.get(i).and_then(|r| r.mae))));
        wtr.write_record(&row)?;
    }
    wtr.flush()?;
    written.push(cells_path);

    // One figure per (dataset, prevalence, bias kind), x = gold-pool size.
    let mut figures: Vec<(String, f64, BiasKind)> = Vec::new();
    for c in &report.cells {
        let key = (c.key.dataset.clone(), c.key.prevalence, c.key.bias_kind);
        if !figures.contains(&key) {
            figures.push(key);
        }
    }
    for (dataset, prevalence, bias_kind) in figures {
        let in_figure: Vec<&Cell> = report
            .cells
            .iter()
            .filter(|c| c.key.dataset == dataset && c.key.prevalence == prevalence && c.key.bias_kind == bias_kind)
            .collect();
        let mut methods: Vec<Method> = Vec::new();
        let mut sizes: Vec<usize> = Vec::new();
        for c in &in_figure {
            if !methods.contains(&c.key.method) {
                methods.push(c.key.method);
            }
            if !sizes.contains(&c.key.gs_size) {
                sizes.push(c.key.gs_size);
            }
        }
        let path = dir.join(figure_name(prevalence, bias_kind, &dataset));
        let mut wtr = csv::Writer::from_path(&path)?;
        let mut header = vec!["gs_size".to_string()];
        for m in &methods {
            header.extend([format!("{m}_mean"), format!("{m}_low"), format!("{m}_high")]);
        }
        wtr.write_record(&header)?;
        for &size in &sizes {
            let mut row = vec![size.to_string()];
            for &m in &methods {
                let cell = in_figure.iter().find(|c| c.key.gs_size == size && c.key.method == m);
                row.push(opt(cell.and_then(|c| c.mean_mae)));
                row.push(opt(cell.and_then(|c| c.ci_low)));
                row.push(opt(cell.and_then(|c| c.ci_high)));
            }
            wtr.write_record(&row)?;
        }
        wtr.flush()?;
        written.push(path);
    }
    Ok(written)
}
