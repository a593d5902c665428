//! Generators for evaluation worlds: gold-label prevalence shaping, biased
//! decision simulators for the two bias regimes, and world assembly with the
//! true per-human gaps recorded for scoring.
//!
//! In both regimes the disadvantaged group `a` receives the biased decisions
//! and group `~a` receives the gold labels with a fraction of positives
//! flipped to negative.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::data::{
    ingest_csv, sample_gs_pool, stratified_partition, write_csv, Dataset, DecisionSet, GoldStandardSet,
    Group, Instance, InstanceId,
};
use crate::error::{Error, Result};
use crate::learners::{LogisticConfig, LogisticModel};
use crate::metrics::{confusion, tpr_gap};
use crate::seeded_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BiasKind {
    /// Group-`a` decisions threshold a model of the gold label; only the bar
    /// differs between groups.
    CorrectOrdering,
    /// Group-`a` decisions come from a model whose `Z x A` coefficient is
    /// pushed down, reordering candidates within the group.
    IncorrectOrdering,
}

impl BiasKind {
    pub fn label(self) -> &'static str {
        match self {
            BiasKind::CorrectOrdering => "correct_ordering",
            BiasKind::IncorrectOrdering => "incorrect_ordering",
        }
    }
}

impl std::fmt::Display for BiasKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScenarioSpec {
    pub bias_kind: BiasKind,
    /// Number of humans.
    pub k: usize,
    /// Explicit group-`a` TPR targets for the correct-ordering simulator;
    /// when absent, `k` equally spaced values over `tpr_range`.
    pub tpr_targets: Option<Vec<f64>>,
    pub tpr_range: (f64, f64),
    /// Band half-width for the correct-ordering threshold search.
    pub tpr_tolerance: f64,
    pub advantaged_tpr: f64,
    pub advantaged_tolerance: f64,
    /// Positive gold-label prevalence, equal across groups.
    pub prevalence: f64,
    /// Feature interacted with the group indicator (incorrect ordering).
    pub interaction_feature: String,
    pub tpr_low: f64,
    /// Spacing between successive humans' TPRs (incorrect ordering); when
    /// absent, `(tpr_range.1 - tpr_low) / (k - 1)`.
    pub tpr_gap: Option<f64>,
    /// Amount subtracted from the interaction coefficient per step.
    pub step: f64,
    pub decrement_cap: usize,
    /// Instances per group held back for gold-standard pools.
    pub gs_reserve_per_group: usize,
    /// Learner used by every simulator model.
    pub simulator: LogisticConfig,
}

impl Default for ScenarioSpec {
    fn default() -> Self {
        Self {
            bias_kind: BiasKind::CorrectOrdering,
            k: 10,
            tpr_targets: None,
            tpr_range: (0.54, 0.90),
            tpr_tolerance: 0.01,
            advantaged_tpr: 0.95,
            advantaged_tolerance: 0.01,
            prevalence: 0.2,
            interaction_feature: "x1".into(),
            tpr_low: 0.5,
            tpr_gap: None,
            step: 0.01,
            decrement_cap: 100_000,
            gs_reserve_per_group: 400,
            simulator: LogisticConfig::default(),
        }
    }
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::Config("scenario needs at least one human".into()));
        }
        if !(self.prevalence > 0.0 && self.prevalence < 1.0) {
            return Err(Error::Config(format!("prevalence {} outside (0, 1)", self.prevalence)));
        }
        for t in self.targets() {
            if !(t > 0.0 && t <= 1.0) {
                return Err(Error::Config(format!("TPR target {t} outside (0, 1]")));
            }
        }
        if let Some(targets) = &self.tpr_targets {
            if targets.len() != self.k {
                return Err(Error::Config(format!(
                    "{} TPR targets for {} humans",
                    targets.len(),
                    self.k
                )));
            }
        }
        if !(self.step >= 0.0) || self.tpr_tolerance < 0.0 || self.advantaged_tolerance < 0.0 {
            return Err(Error::Config("step and tolerances must be non-negative".into()));
        }
        Ok(())
    }

    /// Correct-ordering targets, lowest (most biased) first.
    pub fn targets(&self) -> Vec<f64> {
        match &self.tpr_targets {
            Some(t) => t.clone(),
            None => equally_spaced(self.tpr_range.0, self.tpr_range.1, self.k),
        }
    }

    pub fn effective_tpr_gap(&self) -> f64 {
        self.tpr_gap.unwrap_or_else(|| {
            if self.k > 1 {
                (self.tpr_range.1 - self.tpr_low) / (self.k - 1) as f64
            } else {
                0.0
            }
        })
    }
}

/// `n` values from `low` to `high` inclusive with equal spacing.
pub fn equally_spaced(low: f64, high: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![low],
        _ => (0..n)
            .map(|i| low + (high - low) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// Achieved rate against its target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TprOutcome {
    pub target: f64,
    pub achieved: f64,
    /// The achieved rate lies outside the target band; the closest
    /// attainable value was used instead.
    pub closest_attainable: bool,
}

/// Group-`a` decisions from one simulator run.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupASimulation {
    pub outcome: TprOutcome,
    /// Score cut (correct ordering) or accepted interaction coefficient
    /// (incorrect ordering).
    pub parameter: f64,
    /// Decrements applied before acceptance (incorrect ordering only).
    pub steps: usize,
    /// Unmodified simulator-model scores of the group-`a` instances, in
    /// instance order.
    pub reference_scores: Vec<f64>,
    /// Decisions for the group-`a` instances, in instance order.
    pub decisions: Vec<bool>,
}

fn gold_of(inst: &Instance) -> Result<bool> {
    inst.gold_label.ok_or_else(|| {
        Error::Simulation(format!("instance {:?} has no gold label", inst.id))
    })
}

fn group_indices(instances: &[Instance], group: Group) -> Vec<usize> {
    (0..instances.len()).filter(|&i| instances[i].group == group).collect()
}

/// Relabels gold labels so that each group has exactly `ceil(p * n_g)`
/// positives: a logistic model is fitted on the current labels and the
/// highest-scoring instances of each group become positive. Equal scores keep
/// their original order.
pub fn shape_prevalence(instances: &[Instance], p: f64, learner: &LogisticConfig) -> Result<Vec<Instance>> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::Simulation(format!("prevalence {p} outside (0, 1]")));
    }
    let rows: Vec<Vec<f64>> = instances.iter().map(Instance::design_row).collect();
    let labels = instances.iter().map(gold_of).collect::<Result<Vec<bool>>>()?;
    let model = LogisticModel::fit(&rows, &labels, learner)?;
    let mut out = instances.to_vec();
    for group in Group::BOTH {
        let members = group_indices(instances, group);
        if members.is_empty() {
            return Err(Error::Simulation(format!("group {group} is empty")));
        }
        let wanted = p * members.len() as f64;
        if wanted < 1.0 {
            return Err(Error::Simulation(format!(
                "prevalence {p} yields {wanted:.3} positives in group {group}"
            )));
        }
        let take = (wanted - 1e-9).ceil() as usize;
        let mut order = members.clone();
        let score = |i: usize| model.decision_function(&rows[i]);
        order.sort_by(|&i, &j| score(j).total_cmp(&score(i)));
        for (rank, &i) in order.iter().enumerate() {
            out[i].gold_label = Some(rank < take);
        }
    }
    Ok(out)
}

fn tpr_over(decisions: &[bool], gold: &[bool]) -> Option<f64> {
    let positives = gold.iter().filter(|&&y| y).count();
    (positives > 0).then(|| {
        decisions
            .iter()
            .zip(gold)
            .filter(|(&d, &y)| d && y)
            .count() as f64
            / positives as f64
    })
}

/// Threshold search on the group-`a` scores of a model fitted to this human's
/// gold labels.
///
/// Every distinct group-`a` score is a candidate cut (`score >= cut` is
/// positive). A unique cut whose TPR lies in `target ± tol` is taken;
/// otherwise the cut with TPR closest to the target, ties going to the higher
/// cut. Writes the decisions of group `a` into `instances`.
pub fn simulate_correct_ordering(
    instances: &mut [Instance],
    target: f64,
    tol: f64,
    learner: &LogisticConfig,
) -> Result<GroupASimulation> {
    let rows: Vec<Vec<f64>> = instances.iter().map(Instance::design_row).collect();
    let labels = instances.iter().map(gold_of).collect::<Result<Vec<bool>>>()?;
    let model = LogisticModel::fit(&rows, &labels, learner)?;
    let members = group_indices(instances, Group::A);
    let scores: Vec<f64> = members.iter().map(|&i| model.proba_row(&rows[i])).collect();
    let gold: Vec<bool> = members.iter().map(|&i| labels[i]).collect();
    let positives = gold.iter().filter(|&&y| y).count();
    if positives == 0 {
        return Err(Error::Simulation("group a has no gold positives".into()));
    }

    // Descending sweep: TPR at each distinct cut from cumulative counts.
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&i, &j| scores[j].total_cmp(&scores[i]));
    let mut sweep: Vec<(f64, f64)> = Vec::new();
    let mut tp = 0usize;
    let mut idx = 0;
    while idx < order.len() {
        let cut = scores[order[idx]];
        while idx < order.len() && scores[order[idx]] == cut {
            tp += usize::from(gold[order[idx]]);
            idx += 1;
        }
        sweep.push((cut, tp as f64 / positives as f64));
    }
    let inside: Vec<&(f64, f64)> = sweep.iter().filter(|(_, r)| (r - target).abs() <= tol).collect();
    let (cut, achieved) = if inside.len() == 1 {
        *inside[0]
    } else {
        // `sweep` runs from high cut to low, so the first minimum is the
        // higher cut.
        *sweep
            .iter()
            .min_by(|a, b| (a.1 - target).abs().total_cmp(&(b.1 - target).abs()))
            .expect("group a is non-empty")
    };
    let decisions: Vec<bool> = scores.iter().map(|&s| s >= cut).collect();
    for (&i, &d) in members.iter().zip(&decisions) {
        instances[i].decision = Some(d);
    }
    Ok(GroupASimulation {
        outcome: TprOutcome {
            target,
            achieved,
            closest_attainable: (achieved - target).abs() > tol + 1e-12,
        },
        parameter: cut,
        steps: 0,
        reference_scores: scores,
        decisions,
    })
}

/// Group-`~a` decisions: the gold labels with a uniformly chosen subset of
/// positives flipped to negative. The flip count minimises the distance to
/// the target TPR, preferring fewer flips on ties.
pub fn simulate_advantaged_noise(instances: &mut [Instance], target: f64, tol: f64, seed: u64) -> Result<TprOutcome> {
    let members = group_indices(instances, Group::NotA);
    let mut positives = Vec::new();
    for &i in &members {
        let y = gold_of(&instances[i])?;
        instances[i].decision = Some(y);
        if y {
            positives.push(i);
        }
    }
    let p = positives.len();
    if p == 0 {
        return Err(Error::Simulation("group ~a has no gold positives".into()));
    }
    let flips = (0..=p)
        .min_by(|&a, &b| {
            let da = ((p - a) as f64 / p as f64 - target).abs();
            let db = ((p - b) as f64 / p as f64 - target).abs();
            da.total_cmp(&db)
        })
        .expect("non-empty range");
    positives.shuffle(&mut seeded_rng(seed, 0));
    for &i in positives.iter().take(flips) {
        instances[i].decision = Some(false);
    }
    let achieved = (p - flips) as f64 / p as f64;
    Ok(TprOutcome {
        target,
        achieved,
        closest_attainable: (achieved - target).abs() > tol + 1e-12,
    })
}

/// Appends `Z x A` to every design row.
fn interaction_rows(instances: &[Instance], z_index: usize) -> Vec<Vec<f64>> {
    instances
        .iter()
        .map(|inst| {
            let mut row = inst.design_row();
            row.push(inst.features[z_index] * inst.group.indicator());
            row
        })
        .collect()
}

/// Positive decisions for the top `ceil(p * n)` scores, stable on ties.
fn top_fraction(scores: &[f64], p: f64) -> Vec<bool> {
    let take = ((p * scores.len() as f64) - 1e-9).ceil().max(0.0) as usize;
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&i, &j| scores[j].total_cmp(&scores[i]));
    let mut out = vec![false; scores.len()];
    for &i in order.iter().take(take) {
        out[i] = true;
    }
    out
}

/// Parameters of the interaction-coefficient search.
#[derive(Debug, Clone, PartialEq)]
pub struct IncorrectOrderingParams {
    pub z_index: usize,
    pub prevalence: f64,
    pub tpr_low: f64,
    pub tpr_gap: f64,
    pub step: f64,
    pub decrement_cap: usize,
}

/// Incorrect-ordering decisions for group `a` of every human.
///
/// One logistic model with an added `Z x A` column is fitted on the gold pool
/// and all human sets together. For each human the interaction coefficient is
/// lowered by `step` at a time and group `a`'s top-`p` fraction by score is
/// selected:
///
/// * the first human is accepted once the TPR enters `tpr_low ± tpr_gap`,
///   at the step within that stretch whose TPR is closest to `tpr_low`;
/// * every later human is accepted at the last step whose TPR is still at
///   least the previous human's TPR plus `tpr_gap`. While the TPR is below
///   that level from the start, the search keeps lowering.
///
/// With `step = 0` only the unmodified coefficient is tried. Failing to
/// accept within `decrement_cap` steps is an error naming the human.
pub fn simulate_incorrect_ordering(
    humans: &mut [Vec<Instance>],
    gold: &[Instance],
    params: &IncorrectOrderingParams,
    learner: &LogisticConfig,
) -> Result<Vec<GroupASimulation>> {
    let mut pooled_rows = interaction_rows(gold, params.z_index);
    let mut pooled_labels = gold.iter().map(gold_of).collect::<Result<Vec<bool>>>()?;
    for h in humans.iter() {
        pooled_rows.extend(interaction_rows(h, params.z_index));
        pooled_labels.extend(h.iter().map(gold_of).collect::<Result<Vec<bool>>>()?);
    }
    let fitted = LogisticModel::fit(&pooled_rows, &pooled_labels, learner)?;
    let coef_index = fitted.n_features() - 1;
    let start = fitted.coefficient(coef_index).expect("interaction column exists");

    let mut previous_tpr: Option<f64> = None;
    let mut out = Vec::with_capacity(humans.len());
    for (k, human) in humans.iter_mut().enumerate() {
        let members = group_indices(human, Group::A);
        let rows_a: Vec<Vec<f64>> = interaction_rows(human, params.z_index)
            .into_iter()
            .enumerate()
            .filter(|(i, _)| human[*i].group == Group::A)
            .map(|(_, r)| r)
            .collect();
        let gold_a: Vec<bool> = members.iter().map(|&i| gold_of(&human[i])).collect::<Result<_>>()?;
        if !gold_a.iter().any(|&y| y) {
            return Err(Error::Simulation(format!("human {} has no group-a gold positives", k + 1)));
        }
        let mut model = fitted.clone();
        let mut evaluate = |coef: f64| -> (Vec<f64>, Vec<bool>, f64) {
            model.set_coefficient(coef_index, coef).expect("valid index");
            let scores: Vec<f64> = rows_a.iter().map(|r| model.decision_function(r)).collect();
            let decisions = top_fraction(&scores, params.prevalence);
            let tpr = tpr_over(&decisions, &gold_a).expect("positives checked");
            (scores, decisions, tpr)
        };
        let reference_scores = evaluate(start).0;

        let max_steps = if params.step == 0.0 { 0 } else { params.decrement_cap };
        let (target, accepted) = match previous_tpr {
            None => {
                let target = params.tpr_low;
                let mut accepted: Option<(usize, f64, Vec<bool>, f64)> = None;
                for s in 0..=max_steps {
                    let coef = start - params.step * s as f64;
                    let (_, decisions, tpr) = evaluate(coef);
                    if (tpr - target).abs() <= params.tpr_gap + 1e-12 {
                        if accepted.as_ref().is_none_or(|a| (tpr - target).abs() < (a.3 - target).abs()) {
                            accepted = Some((s, coef, decisions, tpr));
                        }
                    } else if accepted.is_some() {
                        break;
                    }
                }
                (target, accepted)
            }
            Some(prev) => {
                let target = prev + params.tpr_gap;
                let mut candidate = None;
                let mut accepted = None;
                for s in 0..=max_steps {
                    let coef = start - params.step * s as f64;
                    let (_, decisions, tpr) = evaluate(coef);
                    if tpr >= target - 1e-12 {
                        candidate = Some((s, coef, decisions, tpr));
                    } else if candidate.is_some() {
                        accepted = candidate.take();
                        break;
                    }
                }
                if params.step == 0.0 {
                    accepted = candidate;
                }
                (target, accepted)
            }
        };
        let Some((steps, coef, decisions, tpr)) = accepted else {
            return Err(Error::Simulation(format!(
                "human {} did not reach TPR target {target:.4} within {max_steps} coefficient steps",
                k + 1
            )));
        };
        for (&i, &d) in members.iter().zip(&decisions) {
            human[i].decision = Some(d);
        }
        previous_tpr = Some(tpr);
        let band = if k == 0 { params.tpr_gap } else { f64::INFINITY };
        out.push(GroupASimulation {
            outcome: TprOutcome {
                target,
                achieved: tpr,
                closest_attainable: (tpr - target).abs() > band + 1e-12,
            },
            parameter: coef,
            steps,
            reference_scores,
            decisions,
        });
    }
    Ok(out)
}

/// Eq.-1 TPR gap of a human's decisions against the retained gold labels.
pub fn true_gap(instances: &[Instance]) -> Result<f64> {
    let decisions: Vec<bool> = instances
        .iter()
        .map(|i| i.decision.ok_or_else(|| Error::Simulation("instance without decision".into())))
        .collect::<Result<_>>()?;
    let gold = instances.iter().map(gold_of).collect::<Result<Vec<bool>>>()?;
    let groups: Vec<Group> = instances.iter().map(|i| i.group).collect();
    Ok(tpr_gap(&confusion(&decisions, &gold, &groups)?)?.value)
}

/// One simulated human with gold labels retained on every instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulatedHuman {
    pub id: String,
    #[serde(skip)]
    pub instances: Vec<Instance>,
    pub true_gap: f64,
    pub tpr_a: TprOutcome,
    pub tpr_not_a: TprOutcome,
}

impl SimulatedHuman {
    /// The human's decisions with gold labels stripped.
    pub fn decision_set(&self) -> Result<DecisionSet> {
        let stripped = self
            .instances
            .iter()
            .map(|i| Instance {
                gold_label: None,
                ..i.clone()
            })
            .collect();
        DecisionSet::new(self.id.clone(), stripped)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulatedWorld {
    pub feature_names: Vec<String>,
    pub humans: Vec<SimulatedHuman>,
    /// Gold-labelled instances reserved for gold-standard pools.
    pub reserve: Vec<Instance>,
    pub spec: ScenarioSpec,
    pub seed: u64,
}

/// Stream offsets so that world-building steps draw independently.
const STREAM_RESERVE: u64 = 1;
const STREAM_PARTITION: u64 = 2;
const STREAM_NOISE: u64 = 1_000;
const STREAM_GOLD_POOL: u64 = 3;

pub fn human_id(k: usize) -> String {
    format!("human_{:02}", k + 1)
}

impl SimulatedWorld {
    pub fn decision_sets(&self) -> Result<Vec<DecisionSet>> {
        self.humans.iter().map(SimulatedHuman::decision_set).collect()
    }

    pub fn true_gaps(&self) -> Vec<f64> {
        self.humans.iter().map(|h| h.true_gap).collect()
    }

    /// Class-stratified gold pool of `per_group` instances per group drawn
    /// from the reserve. Pools of different sizes for one world are nested.
    pub fn gold_pool(&self, per_group: usize) -> Result<GoldStandardSet> {
        let seed = self.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ STREAM_GOLD_POOL;
        sample_gs_pool(&self.reserve, per_group, seed)
    }

    /// Writes `human_XX.csv`, `gold.csv` and `manifest.json` into `dir`.
    pub fn save(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir)?;
        for h in &self.humans {
            write_csv(fs::File::create(dir.join(format!("{}.csv", h.id)))?, &self.feature_names, &h.instances)?;
        }
        write_csv(fs::File::create(dir.join("gold.csv"))?, &self.feature_names, &self.reserve)?;
        let manifest = WorldManifest {
            feature_names: self.feature_names.clone(),
            seed: self.seed,
            spec: self.spec.clone(),
            humans: self.humans.clone(),
            gold_file: "gold.csv".into(),
        };
        fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest)? + "\n")?;
        Ok(())
    }

    pub fn load(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        let manifest: WorldManifest = serde_json::from_str(&fs::read_to_string(dir.join("manifest.json"))?)?;
        let schema = Dataset {
            feature_names: manifest.feature_names.clone(),
            instances: Vec::new(),
        }
        .csv_schema();
        let mut humans = manifest.humans;
        for h in &mut humans {
            h.instances = ingest_csv(dir.join(format!("{}.csv", h.id)), &schema)?.instances;
        }
        let reserve = ingest_csv(dir.join(&manifest.gold_file), &schema)?.instances;
        Ok(Self {
            feature_names: manifest.feature_names,
            humans,
            reserve,
            spec: manifest.spec,
            seed: manifest.seed,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct WorldManifest {
    feature_names: Vec<String>,
    seed: u64,
    spec: ScenarioSpec,
    humans: Vec<SimulatedHuman>,
    gold_file: String,
}

/// Shapes prevalence, reserves the gold pool, partitions the remainder into
/// `spec.k` stratified human sets, simulates decisions and records the true
/// gaps.
pub fn build_world(dataset: &Dataset, spec: &ScenarioSpec, seed: u64) -> Result<SimulatedWorld> {
    spec.validate()?;
    let shaped = Dataset {
        feature_names: dataset.feature_names.clone(),
        instances: shape_prevalence(&dataset.instances, spec.prevalence, &spec.simulator)?,
    };
    build_world_from_shaped(&shaped, spec, seed)
}

/// [`build_world`] for a dataset whose gold labels already carry the target
/// prevalence, so repeated worlds can share one shaping pass.
pub fn build_world_from_shaped(dataset: &Dataset, spec: &ScenarioSpec, seed: u64) -> Result<SimulatedWorld> {
    spec.validate()?;
    let shaped = &dataset.instances;
    let reserve = sample_gs_pool(shaped, spec.gs_reserve_per_group, seed ^ STREAM_RESERVE.rotate_left(32))?
        .instances()
        .to_vec();
    let reserved: BTreeSet<InstanceId> = reserve.iter().map(|i| i.id).collect();
    let remainder: Vec<Instance> = shaped.iter().filter(|i| !reserved.contains(&i.id)).cloned().collect();
    let mut parts = stratified_partition(&remainder, spec.k, seed ^ STREAM_PARTITION.rotate_left(32))?;

    let group_a = match spec.bias_kind {
        BiasKind::CorrectOrdering => {
            let targets = spec.targets();
            parts
                .iter_mut()
                .zip(&targets)
                .map(|(part, &t)| simulate_correct_ordering(part, t, spec.tpr_tolerance, &spec.simulator))
                .collect::<Result<Vec<_>>>()?
        }
        BiasKind::IncorrectOrdering => {
            let z_index = dataset.feature_index(&spec.interaction_feature).ok_or_else(|| {
                Error::Config(format!("interaction feature `{}` not in dataset", spec.interaction_feature))
            })?;
            let params = IncorrectOrderingParams {
                z_index,
                prevalence: spec.prevalence,
                tpr_low: spec.tpr_low,
                tpr_gap: spec.effective_tpr_gap(),
                step: spec.step,
                decrement_cap: spec.decrement_cap,
            };
            simulate_incorrect_ordering(&mut parts, &reserve, &params, &spec.simulator)?
        }
    };

    let mut humans = Vec::with_capacity(spec.k);
    for (k, (mut part, sim)) in parts.into_iter().zip(group_a).enumerate() {
        let noise_seed = seed ^ (STREAM_NOISE + k as u64).rotate_left(32);
        let tpr_not_a =
            simulate_advantaged_noise(&mut part, spec.advantaged_tpr, spec.advantaged_tolerance, noise_seed)?;
        let gap = true_gap(&part)?;
        humans.push(SimulatedHuman {
            id: human_id(k),
            instances: part,
            true_gap: gap,
            tpr_a: sim.outcome,
            tpr_not_a,
        });
    }
    Ok(SimulatedWorld {
        feature_names: dataset.feature_names.clone(),
        humans,
        reserve,
        spec: spec.clone(),
        seed,
    })
}
