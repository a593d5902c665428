//! Synthetic datasets.
//!
//! [`generate`] produces a tabular dataset with five informative Gaussian
//! features, a balanced group attribute and labels drawn from a logistic
//! model that includes an `x1 x A` interaction. It stands in for the public
//! census-style datasets when none is supplied.
//!
//! [`well_specified_world`] builds a world whose human decisions are a single
//! cut on one feature per group, so that a tree model of the decisions is
//! exact and the gold pool is large enough for rate errors to be small.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Group, Instance, InstanceId};
use crate::error::{Error, Result};
use crate::seeded_rng;
use crate::simulate::{human_id, true_gap, ScenarioSpec, SimulatedHuman, SimulatedWorld, TprOutcome};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SyntheticConfig {
    pub n: usize,
    /// Probability that an instance belongs to group `a`.
    pub group_share: f64,
    pub weights: [f64; 5],
    pub intercept: f64,
    /// Coefficient of `x1 x A` in the label model.
    pub interaction: f64,
    /// Shift applied to group `a`'s features.
    pub group_shift: f64,
    pub dataset_id: u32,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            n: 10_800,
            group_share: 0.5,
            weights: [1.2, -0.8, 0.6, 0.5, -0.4],
            intercept: -1.0,
            interaction: 0.5,
            group_shift: -0.3,
            dataset_id: 0,
            seed: 0,
        }
    }
}

pub const FEATURE_NAMES: [&str; 5] = ["x1", "x2", "x3", "x4", "x5"];

pub fn generate(config: &SyntheticConfig) -> Result<Dataset> {
    if config.n < 2 || !(config.group_share > 0.0 && config.group_share < 1.0) {
        return Err(Error::Config("synthetic data needs n >= 2 and group share in (0, 1)".into()));
    }
    let mut rng = seeded_rng(config.seed, 0);
    let instances = (0..config.n)
        .map(|row| {
            let group = if rng.random::<f64>() < config.group_share { Group::A } else { Group::NotA };
            let shift = if group == Group::A { config.group_shift } else { 0.0 };
            let x: Vec<f64> = (0..5).map(|_| rng.sample::<f64, _>(StandardNormal) + shift).collect();
            let mut logit = config.intercept
                + x.iter().zip(&config.weights).map(|(a, b)| a * b).sum::<f64>();
            if group == Group::A {
                logit += config.interaction * x[0];
            }
            let label = rng.random::<f64>() < 1.0 / (1.0 + (-logit).exp());
            Instance::new(InstanceId { dataset: config.dataset_id, row: row as u64 }, x, group)
                .with_gold_label(label)
        })
        .collect();
    Ok(Dataset {
        feature_names: FEATURE_NAMES.iter().map(|s| s.to_string()).collect(),
        instances,
    })
}

/// Settings for [`well_specified_world`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WellSpecifiedSpec {
    pub n_per_human: usize,
    pub gs_per_group: usize,
    pub prevalence: f64,
    /// Group-`a` TPR per human; the human count is the length.
    pub tpr_a: Vec<f64>,
    pub tpr_not_a: f64,
    /// Uninformative uniform features appended after the score feature.
    pub noise_features: usize,
}

impl Default for WellSpecifiedSpec {
    fn default() -> Self {
        Self {
            n_per_human: 2000,
            gs_per_group: 1000,
            prevalence: 0.2,
            tpr_a: vec![0.55, 0.65, 0.75, 0.85, 0.95],
            tpr_not_a: 0.95,
            noise_features: 2,
        }
    }
}

/// `n` jittered grid points `(i + u_i) / n` in random order: evenly spread
/// over `[0, 1)` so empirical rates track their population values closely.
fn stratified_uniform(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    let mut xs: Vec<f64> = (0..n).map(|i| (i as f64 + rng.random::<f64>()) / n as f64).collect();
    rand::seq::SliceRandom::shuffle(xs.as_mut_slice(), rng);
    xs
}

/// World in which each human's decision is `x >= 1 - tpr_g * p` on a score
/// feature `x`, the gold label is `x >= 1 - p`, and the remaining features
/// are noise. A human's TPR in group `g` is therefore `tpr_g` up to grid
/// resolution.
pub fn well_specified_world(spec: &WellSpecifiedSpec, seed: u64) -> Result<SimulatedWorld> {
    if spec.tpr_a.is_empty() || spec.n_per_human < 4 || spec.gs_per_group == 0 {
        return Err(Error::Config("well-specified world needs humans and non-empty sets".into()));
    }
    let mut rng = seeded_rng(seed, 0);
    let mut row = 0u64;
    let mut make = |n_g: usize, group: Group, cut: Option<f64>, rng: &mut rand_chacha::ChaCha8Rng| {
        stratified_uniform(n_g, rng)
            .into_iter()
            .map(|x| {
                let mut features = vec![x];
                features.extend((0..spec.noise_features).map(|_| rng.random::<f64>()));
                let mut inst = Instance::new(InstanceId { dataset: 0, row }, features, group)
                    .with_gold_label(x >= 1.0 - spec.prevalence);
                if let Some(cut) = cut {
                    inst.decision = Some(x >= cut);
                }
                row += 1;
                inst
            })
            .collect::<Vec<_>>()
    };

    let mut humans = Vec::with_capacity(spec.tpr_a.len());
    for (k, &tpr_a) in spec.tpr_a.iter().enumerate() {
        let half = spec.n_per_human / 2;
        let mut instances = make(half, Group::A, Some(1.0 - tpr_a * spec.prevalence), &mut rng);
        instances.extend(make(
            spec.n_per_human - half,
            Group::NotA,
            Some(1.0 - spec.tpr_not_a * spec.prevalence),
            &mut rng,
        ));
        let rate = |g: Group| {
            let pos: Vec<&Instance> = instances.iter().filter(|i| i.group == g && i.gold_label == Some(true)).collect();
            pos.iter().filter(|i| i.decision == Some(true)).count() as f64 / pos.len().max(1) as f64
        };
        let (achieved_a, achieved_not_a) = (rate(Group::A), rate(Group::NotA));
        humans.push(SimulatedHuman {
            id: human_id(k),
            true_gap: true_gap(&instances)?,
            tpr_a: TprOutcome { target: tpr_a, achieved: achieved_a, closest_attainable: false },
            tpr_not_a: TprOutcome {
                target: spec.tpr_not_a,
                achieved: achieved_not_a,
                closest_attainable: false,
            },
            instances,
        });
    }
    let mut reserve = make(spec.gs_per_group, Group::A, None, &mut rng);
    reserve.extend(make(spec.gs_per_group, Group::NotA, None, &mut rng));

    let mut feature_names = vec!["score".to_string()];
    feature_names.extend((0..spec.noise_features).map(|i| format!("noise{}", i + 1)));
    Ok(SimulatedWorld {
        feature_names,
        humans,
        reserve,
        spec: ScenarioSpec {
            k: spec.tpr_a.len(),
            tpr_targets: Some(spec.tpr_a.clone()),
            prevalence: spec.prevalence,
            gs_reserve_per_group: spec.gs_per_group,
            ..ScenarioSpec::default()
        },
        seed,
    })
}
