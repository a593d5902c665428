use serde::{Deserialize, Serialize};

use super::{check_training_data, log_loss_from_logit, sigmoid};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BoostedTreesConfig {
    pub n_trees: usize,
    pub max_depth: usize,
    /// Shrinkage applied to every tree's leaf values.
    pub learning_rate: f64,
    pub min_leaf: usize,
    /// L2 penalty on leaf values (added to the hessian sum).
    pub l2: f64,
}

impl Default for BoostedTreesConfig {
    fn default() -> Self {
        Self {
            n_trees: 100,
            max_depth: 3,
            learning_rate: 0.1,
            min_leaf: 5,
            l2: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TreeNode {
    /// Rows with `x[feature] < threshold` go left.
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf { value: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionTree {
    pub nodes: Vec<TreeNode>,
}

impl RegressionTree {
    pub fn predict(&self, row: &[f64]) -> f64 {
        let mut idx = 0;
        loop {
            match self.nodes[idx] {
                TreeNode::Leaf { value } => return value,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => idx = if row[feature] < threshold { left } else { right },
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[TreeNode], idx: usize) -> usize {
            match nodes[idx] {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Split { left, right, .. } => 1 + walk(nodes, left).max(walk(nodes, right)),
            }
        }
        walk(&self.nodes, 0)
    }

    fn scale_leaves(&mut self, factor: f64) {
        for node in &mut self.nodes {
            if let TreeNode::Leaf { value } = node {
                *value *= factor;
            }
        }
    }
}

/// Gradient-boosted regression trees on the log-odds scale with a logistic
/// link. Leaf values are second-order (Newton) steps; split gain is the
/// usual `G^2 / (H + l2)` improvement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoostedTreesModel {
    pub base_log_odds: f64,
    pub trees: Vec<RegressionTree>,
    pub n_features: usize,
    pub config: BoostedTreesConfig,
}

struct Grower<'a> {
    rows: &'a [Vec<f64>],
    grad: &'a [f64],
    hess: &'a [f64],
    config: &'a BoostedTreesConfig,
    go_left: Vec<bool>,
}

struct NodeRows {
    /// Row indices of this node, sorted by each feature in turn.
    sorted: Vec<Vec<usize>>,
    len: usize,
}

struct SplitChoice {
    feature: usize,
    threshold: f64,
    gain: f64,
}

impl Grower<'_> {
    fn score(&self, g: f64, h: f64) -> f64 {
        g * g / (h + self.config.l2)
    }

    fn leaf_value(&self, node: &NodeRows) -> f64 {
        let (g, h) = node.sorted[0]
            .iter()
            .fold((0.0, 0.0), |(g, h), &i| (g + self.grad[i], h + self.hess[i]));
        g / (h + self.config.l2)
    }

    /// Best split over all features. Ties keep the lowest feature index, then
    /// the lowest threshold, because only strictly better gains replace.
    fn best_split(&self, node: &NodeRows) -> Option<SplitChoice> {
        let min_leaf = self.config.min_leaf.max(1);
        if node.len < 2 * min_leaf {
            return None;
        }
        let (g_total, h_total) = node.sorted[0]
            .iter()
            .fold((0.0, 0.0), |(g, h), &i| (g + self.grad[i], h + self.hess[i]));
        let parent = self.score(g_total, h_total);
        let mut best: Option<SplitChoice> = None;
        for (feature, order) in node.sorted.iter().enumerate() {
            let (mut g_left, mut h_left) = (0.0, 0.0);
            for pos in 0..order.len() - 1 {
                let i = order[pos];
                g_left += self.grad[i];
                h_left += self.hess[i];
                let left_count = pos + 1;
                if left_count < min_leaf || order.len() - left_count < min_leaf {
                    continue;
                }
                let here = self.rows[i][feature];
                let next = self.rows[order[pos + 1]][feature];
                if next <= here {
                    continue;
                }
                let gain = self.score(g_left, h_left)
                    + self.score(g_total - g_left, h_total - h_left)
                    - parent;
                if best.as_ref().is_none_or(|b| gain > b.gain) {
                    best = Some(SplitChoice {
                        feature,
                        threshold: here + (next - here) / 2.0,
                        gain,
                    });
                }
            }
        }
        best.filter(|b| b.gain >= 0.0)
    }

    fn split(&mut self, node: NodeRows, choice: &SplitChoice) -> (NodeRows, NodeRows) {
        for &i in &node.sorted[0] {
            self.go_left[i] = self.rows[i][choice.feature] < choice.threshold;
        }
        let mut left = Vec::with_capacity(node.sorted.len());
        let mut right = Vec::with_capacity(node.sorted.len());
        for order in node.sorted {
            let (l, r): (Vec<usize>, Vec<usize>) = order.into_iter().partition(|&i| self.go_left[i]);
            left.push(l);
            right.push(r);
        }
        let left_len = left[0].len();
        let right_len = right[0].len();
        (
            NodeRows {
                sorted: left,
                len: left_len,
            },
            NodeRows {
                sorted: right,
                len: right_len,
            },
        )
    }

    fn grow(&mut self, root: NodeRows) -> RegressionTree {
        let mut nodes = vec![TreeNode::Leaf { value: 0.0 }];
        let mut stack = vec![(0usize, root, 0usize)];
        while let Some((idx, node, depth)) = stack.pop() {
            let choice = if depth < self.config.max_depth {
                self.best_split(&node)
            } else {
                None
            };
            match choice {
                Some(choice) => {
                    let (left, right) = self.split(node, &choice);
                    let left_idx = nodes.len();
                    nodes.push(TreeNode::Leaf { value: 0.0 });
                    nodes.push(TreeNode::Leaf { value: 0.0 });
                    nodes[idx] = TreeNode::Split {
                        feature: choice.feature,
                        threshold: choice.threshold,
                        left: left_idx,
                        right: left_idx + 1,
                    };
                    stack.push((left_idx + 1, right, depth + 1));
                    stack.push((left_idx, left, depth + 1));
                }
                None => {
                    nodes[idx] = TreeNode::Leaf {
                        value: self.config.learning_rate * self.leaf_value(&node),
                    };
                }
            }
        }
        RegressionTree { nodes }
    }
}

impl BoostedTreesModel {
    /// Fits `n_trees` stages. A stage that would raise the training loss has
    /// its leaf values halved until it does not (or is zeroed), so the staged
    /// training loss is non-increasing.
    pub fn fit(rows: &[Vec<f64>], targets: &[bool], config: &BoostedTreesConfig) -> Result<Self> {
        let arity = check_training_data(rows, targets)?;
        if !(config.learning_rate > 0.0) || config.l2 < 0.0 {
            return Err(Error::Config(
                "boosted trees need a positive learning rate and non-negative l2".into(),
            ));
        }
        let n = rows.len();
        let positives = targets.iter().filter(|&&t| t).count() as f64;
        let prior = positives / n as f64;
        let base_log_odds = (prior / (1.0 - prior)).ln();

        let presorted: Vec<Vec<usize>> = (0..arity)
            .map(|f| {
                let mut order: Vec<usize> = (0..n).collect();
                order.sort_by(|&a, &b| rows[a][f].total_cmp(&rows[b][f]).then(a.cmp(&b)));
                order
            })
            .collect();

        let y: Vec<f64> = targets.iter().map(|&t| f64::from(u8::from(t))).collect();
        let mut logits = vec![base_log_odds; n];
        let mut loss = mean_loss(&logits, &y);
        let mut trees = Vec::with_capacity(config.n_trees);
        let mut grad = vec![0.0; n];
        let mut hess = vec![0.0; n];
        for stage in 0..config.n_trees {
            for i in 0..n {
                let p = sigmoid(logits[i]);
                grad[i] = y[i] - p;
                hess[i] = p * (1.0 - p);
            }
            let mut grower = Grower {
                rows,
                grad: &grad,
                hess: &hess,
                config,
                go_left: vec![false; n],
            };
            let mut tree = grower.grow(NodeRows {
                sorted: presorted.clone(),
                len: n,
            });
            let contrib: Vec<f64> = rows.iter().map(|r| tree.predict(r)).collect();
            let mut factor = 1.0;
            let mut candidate = add(&logits, &contrib, factor);
            let mut cand_loss = mean_loss(&candidate, &y);
            let mut halvings = 0;
            while cand_loss > loss && halvings < 40 {
                factor *= 0.5;
                halvings += 1;
                candidate = add(&logits, &contrib, factor);
                cand_loss = mean_loss(&candidate, &y);
            }
            if cand_loss > loss {
                factor = 0.0;
                candidate = logits.clone();
                cand_loss = loss;
            }
            if !cand_loss.is_finite() {
                return Err(Error::Divergence { step: stage });
            }
            if factor != 1.0 {
                tree.scale_leaves(factor);
            }
            logits = candidate;
            loss = cand_loss;
            trees.push(tree);
        }
        Ok(Self {
            base_log_odds,
            trees,
            n_features: arity,
            config: config.clone(),
        })
    }

    pub fn log_odds_row(&self, row: &[f64]) -> f64 {
        self.base_log_odds + self.trees.iter().map(|t| t.predict(row)).sum::<f64>()
    }

    pub fn proba_row(&self, row: &[f64]) -> f64 {
        sigmoid(self.log_odds_row(row))
    }

    /// Mean training log-loss after 0, 1, ..., `n_trees` stages.
    pub fn staged_log_loss(&self, rows: &[Vec<f64>], targets: &[bool]) -> Vec<f64> {
        let y: Vec<f64> = targets.iter().map(|&t| f64::from(u8::from(t))).collect();
        let mut logits = vec![self.base_log_odds; rows.len()];
        let mut out = vec![mean_loss(&logits, &y)];
        for tree in &self.trees {
            for (l, r) in logits.iter_mut().zip(rows) {
                *l += tree.predict(r);
            }
            out.push(mean_loss(&logits, &y));
        }
        out
    }
}

fn add(logits: &[f64], contrib: &[f64], factor: f64) -> Vec<f64> {
    logits.iter().zip(contrib).map(|(l, c)| l + factor * c).collect()
}

fn mean_loss(logits: &[f64], y: &[f64]) -> f64 {
    logits
        .iter()
        .zip(y)
        .map(|(&t, &yi)| log_loss_from_logit(t, yi))
        .sum::<f64>()
        / logits.len() as f64
}
