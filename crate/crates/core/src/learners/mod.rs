//! Trainable binary probabilistic classifiers.
//!
//! Two families are built in: a linear [`LogisticModel`] and gradient-boosted
//! regression trees ([`BoostedTreesModel`]). Having both lets a simulation
//! generate labels with one functional form while the estimators model them
//! with the other.

mod logistic;
mod trees;

pub use logistic::{LogisticConfig, LogisticModel, LogisticObjective};
pub use trees::{BoostedTreesConfig, BoostedTreesModel, RegressionTree, TreeNode};

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seeded_rng;

pub(crate) fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^t)` without overflow.
pub(crate) fn softplus(t: f64) -> f64 {
    t.max(0.0) + (-t.abs()).exp().ln_1p()
}

pub(crate) fn log_loss_from_logit(t: f64, y: f64) -> f64 {
    softplus(t) - y * t
}

/// Shared training preconditions; returns the feature arity.
pub(crate) fn check_training_data(rows: &[Vec<f64>], targets: &[bool]) -> Result<usize> {
    if rows.len() != targets.len() {
        return Err(Error::LengthMismatch {
            left: rows.len(),
            right: targets.len(),
        });
    }
    if rows.len() < 2 {
        return Err(Error::Training(format!(
            "need at least 2 rows, got {}",
            rows.len()
        )));
    }
    let positives = targets.iter().filter(|&&t| t).count();
    if positives == 0 || positives == targets.len() {
        return Err(Error::Training("targets contain a single class".into()));
    }
    let arity = rows[0].len();
    for row in rows {
        if row.len() != arity {
            return Err(Error::Arity {
                expected: arity,
                got: row.len(),
            });
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::Training("non-finite feature value".into()));
        }
    }
    Ok(arity)
}

/// A trained binary scorer.
pub trait ProbClassifier {
    fn n_features(&self) -> usize;

    /// Probability of the positive class for one row; the row must have the
    /// model's arity.
    fn proba_row(&self, row: &[f64]) -> f64;

    fn predict_proba(&self, rows: &[Vec<f64>]) -> Result<Vec<f64>> {
        rows.iter()
            .map(|row| {
                if row.len() != self.n_features() {
                    Err(Error::Arity {
                        expected: self.n_features(),
                        got: row.len(),
                    })
                } else {
                    Ok(self.proba_row(row))
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Model {
    Logistic(LogisticModel),
    BoostedTrees(BoostedTreesModel),
}

impl ProbClassifier for Model {
    fn n_features(&self) -> usize {
        match self {
            Model::Logistic(m) => m.n_features(),
            Model::BoostedTrees(m) => m.n_features,
        }
    }

    fn proba_row(&self, row: &[f64]) -> f64 {
        match self {
            Model::Logistic(m) => m.proba_row(row),
            Model::BoostedTrees(m) => m.proba_row(row),
        }
    }
}

impl Model {
    pub fn coefficients(&self) -> Result<&[f64]> {
        match self {
            Model::Logistic(m) => Ok(m.weights()),
            Model::BoostedTrees(_) => Err(Error::Unsupported(
                "boosted trees have no linear coefficients".into(),
            )),
        }
    }

    /// Returns a copy with one linear coefficient replaced.
    pub fn with_coefficient(&self, index: usize, value: f64) -> Result<Model> {
        match self {
            Model::Logistic(m) => {
                let mut m = m.clone();
                m.set_coefficient(index, value)?;
                Ok(Model::Logistic(m))
            }
            Model::BoostedTrees(_) => Err(Error::Unsupported(
                "cannot set a coefficient on boosted trees".into(),
            )),
        }
    }
}

pub const MODEL_DOCUMENT_VERSION: u32 = 1;

/// Versioned on-disk form of a trained model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDocument {
    pub version: u32,
    pub model: Model,
}

impl ModelDocument {
    pub fn new(model: Model) -> Self {
        Self {
            version: MODEL_DOCUMENT_VERSION,
            model,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Self = serde_json::from_str(text)?;
        if doc.version != MODEL_DOCUMENT_VERSION {
            return Err(Error::Validation(format!(
                "unsupported model document version {}",
                doc.version
            )));
        }
        Ok(doc)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum LearnerConfig {
    Logistic(LogisticConfig),
    BoostedTrees(BoostedTreesConfig),
}

impl Default for LearnerConfig {
    fn default() -> Self {
        LearnerConfig::BoostedTrees(BoostedTreesConfig::default())
    }
}

impl LearnerConfig {
    pub fn logistic() -> Self {
        LearnerConfig::Logistic(LogisticConfig::default())
    }

    pub fn fit(&self, rows: &[Vec<f64>], targets: &[bool]) -> Result<Model> {
        match self {
            LearnerConfig::Logistic(c) => LogisticModel::fit(rows, targets, c).map(Model::Logistic),
            LearnerConfig::BoostedTrees(c) => {
                BoostedTreesModel::fit(rows, targets, c).map(Model::BoostedTrees)
            }
        }
    }
}

/// Assigns each row to one of `k` folds, stratified by target: each class is
/// shuffled and dealt round-robin.
pub fn stratified_folds(targets: &[bool], k: usize, seed: u64) -> Result<Vec<usize>> {
    if k < 2 {
        return Err(Error::Config("need at least 2 folds".into()));
    }
    let mut fold = vec![0; targets.len()];
    let mut cursor = 0;
    for (stream, class) in [false, true].into_iter().enumerate() {
        let mut members: Vec<usize> = (0..targets.len()).filter(|&i| targets[i] == class).collect();
        if members.len() < k {
            return Err(Error::Training(format!(
                "class {} has {} rows, fewer than {k} folds",
                u8::from(class),
                members.len()
            )));
        }
        members.shuffle(&mut seeded_rng(seed, stream as u64));
        for i in members {
            fold[i] = cursor % k;
            cursor += 1;
        }
    }
    Ok(fold)
}

/// Out-of-fold positive-class probabilities from stratified `k`-fold
/// cross-validation.
pub fn cross_val_proba(
    config: &LearnerConfig,
    rows: &[Vec<f64>],
    targets: &[bool],
    k: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    check_training_data(rows, targets)?;
    let folds = stratified_folds(targets, k, seed)?;
    let mut out = vec![0.0; rows.len()];
    for f in 0..k {
        let (train_rows, train_targets): (Vec<Vec<f64>>, Vec<bool>) = (0..rows.len())
            .filter(|&i| folds[i] != f)
            .map(|i| (rows[i].clone(), targets[i]))
            .unzip();
        let model = config.fit(&train_rows, &train_targets)?;
        for i in (0..rows.len()).filter(|&i| folds[i] == f) {
            out[i] = model.proba_row(&rows[i]);
        }
    }
    Ok(out)
}

/// Mean log-loss of probabilities against targets, clipped away from 0 and 1.
pub fn mean_log_loss(probs: &[f64], targets: &[bool]) -> f64 {
    let eps = 1e-15;
    probs
        .iter()
        .zip(targets)
        .map(|(&p, &t)| {
            let p = p.clamp(eps, 1.0 - eps);
            if t {
                -p.ln()
            } else {
                -(1.0 - p).ln()
            }
        })
        .sum::<f64>()
        / probs.len() as f64
}

/// Picks the grid entry with the lowest stratified 3-fold log-loss. Ties keep
/// the earliest entry. Returns the winner and every entry's score.
pub fn tune(
    grid: &[LearnerConfig],
    rows: &[Vec<f64>],
    targets: &[bool],
    seed: u64,
) -> Result<(LearnerConfig, Vec<f64>)> {
    if grid.is_empty() {
        return Err(Error::Config("empty tuning grid".into()));
    }
    let mut scores = Vec::with_capacity(grid.len());
    for config in grid {
        let probs = cross_val_proba(config, rows, targets, 3, seed)?;
        scores.push(mean_log_loss(&probs, targets));
    }
    let best = scores
        .iter()
        .enumerate()
        .fold(0, |best, (i, s)| if *s < scores[best] { i } else { best });
    Ok((grid[best].clone(), scores))
}

/// A small default grid over both families.
pub fn default_grid() -> Vec<LearnerConfig> {
    let mut grid = vec![LearnerConfig::logistic()];
    for max_depth in [2, 3, 4] {
        for n_trees in [50, 100] {
            grid.push(LearnerConfig::BoostedTrees(BoostedTreesConfig {
                n_trees,
                max_depth,
                ..Default::default()
            }));
        }
    }
    grid
}
