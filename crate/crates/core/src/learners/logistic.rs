use serde::{Deserialize, Serialize};

use super::{check_training_data, sigmoid, softplus};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LogisticConfig {
    pub learning_rate: f64,
    pub max_iterations: usize,
    pub l2: f64,
    pub tolerance: f64,
}

impl Default for LogisticConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.1,
            max_iterations: 2000,
            l2: 1e-4,
            tolerance: 1e-8,
        }
    }
}

/// Mean log-loss plus `l2 / 2 * ||w||^2` (the bias is not penalised).
#[derive(Debug, Clone, Copy)]
pub struct LogisticObjective<'a> {
    pub rows: &'a [Vec<f64>],
    pub targets: &'a [bool],
    pub l2: f64,
}

impl LogisticObjective<'_> {
    pub fn loss(&self, weights: &[f64], bias: f64) -> f64 {
        let n = self.rows.len() as f64;
        let data: f64 = self
            .rows
            .iter()
            .zip(self.targets)
            .map(|(row, &y)| {
                let t = dot(weights, row) + bias;
                softplus(t) - if y { t } else { 0.0 }
            })
            .sum();
        data / n + 0.5 * self.l2 * weights.iter().map(|w| w * w).sum::<f64>()
    }

    pub fn gradient(&self, weights: &[f64], bias: f64) -> (Vec<f64>, f64) {
        let n = self.rows.len() as f64;
        let mut grad = vec![0.0; weights.len()];
        let mut grad_bias = 0.0;
        for (row, &y) in self.rows.iter().zip(self.targets) {
            let residual = sigmoid(dot(weights, row) + bias) - f64::from(u8::from(y));
            for (g, x) in grad.iter_mut().zip(row) {
                *g += residual * x;
            }
            grad_bias += residual;
        }
        for (g, w) in grad.iter_mut().zip(weights) {
            *g = *g / n + self.l2 * w;
        }
        (grad, grad_bias / n)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Linear logistic model. Weights are stored on the original feature scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticModel {
    weights: Vec<f64>,
    bias: f64,
    pub config: LogisticConfig,
}

impl LogisticModel {
    pub fn from_parts(weights: Vec<f64>, bias: f64, config: LogisticConfig) -> Self {
        Self {
            weights,
            bias,
            config,
        }
    }

    /// Full-batch gradient descent from zero on standardised features.
    ///
    /// A step that would increase the objective is rejected and retried with
    /// half the learning rate, so the accepted loss sequence never rises.
    pub fn fit(rows: &[Vec<f64>], targets: &[bool], config: &LogisticConfig) -> Result<Self> {
        Self::fit_with_trace(rows, targets, config).map(|(model, _)| model)
    }

    /// As [`LogisticModel::fit`], also returning the objective after every
    /// accepted step (starting with the zero-weight loss).
    pub fn fit_with_trace(
        rows: &[Vec<f64>],
        targets: &[bool],
        config: &LogisticConfig,
    ) -> Result<(Self, Vec<f64>)> {
        let arity = check_training_data(rows, targets)?;
        let n = rows.len() as f64;
        let mut mean = vec![0.0; arity];
        for row in rows {
            for (m, x) in mean.iter_mut().zip(row) {
                *m += x / n;
            }
        }
        let mut scale = vec![0.0; arity];
        for row in rows {
            for ((s, x), m) in scale.iter_mut().zip(row).zip(&mean) {
                *s += (x - m) * (x - m) / n;
            }
        }
        for s in scale.iter_mut() {
            *s = if *s > 1e-24 { s.sqrt() } else { 1.0 };
        }
        let standardized: Vec<Vec<f64>> = rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&mean)
                    .zip(&scale)
                    .map(|((x, m), s)| (x - m) / s)
                    .collect()
            })
            .collect();
        let objective = LogisticObjective {
            rows: &standardized,
            targets,
            l2: config.l2,
        };

        let mut w = vec![0.0; arity];
        let mut b = 0.0;
        let mut loss = objective.loss(&w, b);
        let mut trace = vec![loss];
        let mut lr = config.learning_rate;
        let mut step = 0;
        while step < config.max_iterations {
            let (gw, gb) = objective.gradient(&w, b);
            let grad_norm = (gw.iter().map(|g| g * g).sum::<f64>() + gb * gb).sqrt();
            if grad_norm < config.tolerance {
                break;
            }
            let cand_w: Vec<f64> = w.iter().zip(&gw).map(|(wi, gi)| wi - lr * gi).collect();
            let cand_b = b - lr * gb;
            let cand_loss = objective.loss(&cand_w, cand_b);
            step += 1;
            if !cand_loss.is_finite() {
                return Err(Error::Divergence { step });
            }
            if cand_loss > loss {
                lr *= 0.5;
                if lr < 1e-12 {
                    break;
                }
                continue;
            }
            let improvement = loss - cand_loss;
            w = cand_w;
            b = cand_b;
            loss = cand_loss;
            trace.push(loss);
            if improvement < config.tolerance {
                break;
            }
        }

        let weights: Vec<f64> = w.iter().zip(&scale).map(|(wi, s)| wi / s).collect();
        let bias = b - weights.iter().zip(&mean).map(|(wi, m)| wi * m).sum::<f64>();
        Ok((
            Self {
                weights,
                bias,
                config: config.clone(),
            },
            trace,
        ))
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    pub fn coefficient(&self, index: usize) -> Option<f64> {
        self.weights.get(index).copied()
    }

    pub fn set_coefficient(&mut self, index: usize, value: f64) -> Result<()> {
        let arity = self.weights.len();
        let slot = self.weights.get_mut(index).ok_or_else(|| {
            Error::Config(format!("coefficient index {index} out of range for {arity} weights"))
        })?;
        *slot = value;
        Ok(())
    }

    pub fn n_features(&self) -> usize {
        self.weights.len()
    }

    pub fn decision_function(&self, row: &[f64]) -> f64 {
        dot(&self.weights, row) + self.bias
    }

    pub fn proba_row(&self, row: &[f64]) -> f64 {
        sigmoid(self.decision_function(row))
    }
}
