//! Comparison estimators: selection-rate gap (SR), a model trained on the
//! gold pool (GS), and confident-learning label cleaning (CL).
//!
//! GS and CL measure each human's decisions against a *model's* labels, so
//! the human decision plays the prediction role and the model output plays
//! the reference role.

use serde::{Deserialize, Serialize};

use crate::data::{DecisionSet, GoldStandardSet};
use crate::error::{Error, Result};
use crate::learners::{cross_val_proba, LearnerConfig, Model, ProbClassifier};
use crate::mdba::{BiasEstimate, HumanOutcome, Method};
use crate::metrics::{
    confusion, selection_gap_value, tpr_gap, GapKind, GapValue, SelectionNormalization,
};

/// Minimum gold labels per class before the GS model is trained.
pub const MIN_GS_PER_CLASS: usize = 20;

pub fn sr_estimate(sets: &[DecisionSet], norm: SelectionNormalization) -> Vec<HumanOutcome<BiasEstimate>> {
    sets.iter()
        .map(|set| HumanOutcome {
            human_id: set.human_id.clone(),
            result: selection_gap_value(set, norm).map(|value| {
                let gap = GapValue {
                    value,
                    kind: GapKind::SelectionRate,
                    oriented_on: crate::Group::A,
                };
                BiasEstimate::plain(&set.human_id, Method::Sr, gap)
            }),
        })
        .collect()
}

/// TPR gap of the human's decisions measured against reference labels for
/// the same instances.
pub fn gap_against_reference(set: &DecisionSet, reference: &[bool]) -> Result<GapValue> {
    let conf = confusion(&set.decisions(), reference, &set.groups())?;
    tpr_gap(&conf)
}

fn estimates_against_model(
    sets: &[DecisionSet],
    model: &Model,
    method: Method,
) -> Vec<HumanOutcome<BiasEstimate>> {
    sets.iter()
        .map(|set| HumanOutcome {
            human_id: set.human_id.clone(),
            result: model.predict_proba(&set.design_rows()).and_then(|probs| {
                let reference: Vec<bool> = probs.iter().map(|&p| p >= 0.5).collect();
                gap_against_reference(set, &reference)
                    .map(|gap| BiasEstimate::plain(&set.human_id, method, gap))
            }),
        })
        .collect()
}

/// Trains on the gold pool and uses the model's labels (threshold 0.5) as the
/// reference for every human.
pub fn gs_estimate(
    sets: &[DecisionSet],
    gold: &GoldStandardSet,
    learner: &LearnerConfig,
) -> Result<Vec<HumanOutcome<BiasEstimate>>> {
    let labels = gold.labels();
    let positives = labels.iter().filter(|&&y| y).count();
    let negatives = labels.len() - positives;
    if positives.min(negatives) < MIN_GS_PER_CLASS {
        return Err(Error::Training(format!(
            "gold-standard pool has {positives} positive and {negatives} negative labels; \
             need at least {MIN_GS_PER_CLASS} of each"
        )));
    }
    let model = learner.fit(&gold.design_rows(), &labels)?;
    Ok(estimates_against_model(sets, &model, Method::Gs))
}

/// Counts of (given label, confidently estimated label), binary case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfidentJoint {
    /// `counts[given][estimated]`, with index 1 for the positive class.
    pub counts: [[u64; 2]; 2],
    /// Per-class confidence thresholds `t_j`.
    pub thresholds: [f64; 2],
    /// Estimated label per example, `None` when no class is confident.
    pub assignments: Vec<Option<bool>>,
}

impl ConfidentJoint {
    pub fn off_diagonal(&self) -> u64 {
        self.counts[0][1] + self.counts[1][0]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    /// Whether the example was counted off the diagonal.
    pub fn is_flagged(&self, index: usize, given: bool) -> bool {
        matches!(self.assignments[index], Some(est) if est != given)
    }
}

/// Builds the confident joint from positive-class probabilities.
///
/// `t_j` is the mean class-`j` probability over examples labelled `j`. An
/// example qualifies for class `j` when its class-`j` probability is at least
/// `t_j`; among qualifying classes the larger probability wins, and an exact
/// tie keeps the given label.
pub fn cl_confident_joint(probs: &[f64], labels: &[bool]) -> Result<ConfidentJoint> {
    if probs.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: probs.len(),
            right: labels.len(),
        });
    }
    let class_prob = |p: f64, class: usize| if class == 1 { p } else { 1.0 - p };
    let mut thresholds = [0.0; 2];
    for (class, t) in thresholds.iter_mut().enumerate() {
        let members: Vec<f64> = probs
            .iter()
            .zip(labels)
            .filter(|(_, &y)| usize::from(y) == class)
            .map(|(&p, _)| class_prob(p, class))
            .collect();
        if members.is_empty() {
            return Err(Error::Validation(format!(
                "class {class} is absent from the given labels"
            )));
        }
        *t = members.iter().sum::<f64>() / members.len() as f64;
    }

    let mut counts = [[0u64; 2]; 2];
    let mut assignments = Vec::with_capacity(probs.len());
    for (&p, &y) in probs.iter().zip(labels) {
        let given = usize::from(y);
        let q = [class_prob(p, 0) >= thresholds[0], class_prob(p, 1) >= thresholds[1]];
        let estimated = match q {
            [false, false] => None,
            [true, false] => Some(0),
            [false, true] => Some(1),
            [true, true] => {
                let (p0, p1) = (class_prob(p, 0), class_prob(p, 1));
                Some(if p1 > p0 {
                    1
                } else if p0 > p1 {
                    0
                } else {
                    given
                })
            }
        };
        if let Some(j) = estimated {
            counts[given][j] += 1;
        }
        assignments.push(estimated.map(|j| j == 1));
    }
    Ok(ConfidentJoint {
        counts,
        thresholds,
        assignments,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ClConfig {
    pub folds: usize,
    pub seed: u64,
}

impl Default for ClConfig {
    fn default() -> Self {
        Self { folds: 5, seed: 0 }
    }
}

/// Outcome of cleaning a labelled pool.
#[derive(Debug, Clone)]
pub struct CleanedPool {
    pub joint: ConfidentJoint,
    /// `true` for examples that survive pruning.
    pub keep: Vec<bool>,
}

impl CleanedPool {
    pub fn pruned(&self) -> usize {
        self.keep.iter().filter(|&&k| !k).count()
    }
}

/// Cross-validated probabilities, confident joint, and removal of every
/// example counted off the diagonal.
pub fn cl_clean(
    rows: &[Vec<f64>],
    labels: &[bool],
    learner: &LearnerConfig,
    config: &ClConfig,
) -> Result<CleanedPool> {
    let probs = cross_val_proba(learner, rows, labels, config.folds, config.seed)?;
    let joint = cl_confident_joint(&probs, labels)?;
    let keep: Vec<bool> = labels
        .iter()
        .enumerate()
        .map(|(i, &y)| !joint.is_flagged(i, y))
        .collect();
    Ok(CleanedPool { joint, keep })
}

/// Merges gold labels with every human's decisions, cleans the merged pool,
/// retrains on what survives and measures each human against the cleaned
/// model's labels.
pub fn cl_estimate(
    sets: &[DecisionSet],
    gold: &GoldStandardSet,
    learner: &LearnerConfig,
    config: &ClConfig,
) -> Result<Vec<HumanOutcome<BiasEstimate>>> {
    let mut rows = gold.design_rows();
    let mut labels = gold.labels();
    for set in sets {
        rows.extend(set.design_rows());
        labels.extend(set.decisions());
    }
    let cleaned = cl_clean(&rows, &labels, learner, config)?;
    let (kept_rows, kept_labels): (Vec<Vec<f64>>, Vec<bool>) = rows
        .into_iter()
        .zip(labels)
        .zip(&cleaned.keep)
        .filter(|(_, &k)| k)
        .map(|(pair, _)| pair)
        .unzip();
    let positives = kept_labels.iter().filter(|&&y| y).count();
    if positives == 0 || positives == kept_labels.len() {
        return Err(Error::DegeneratePool(
            "pruning removed an entire class from the merged pool".into(),
        ));
    }
    let model = learner.fit(&kept_rows, &kept_labels)?;
    Ok(estimates_against_model(sets, &model, Method::Cl))
}
