//! Paired significance tests, t-intervals and rank correlation.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal, StudentsT};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestKind {
    #[default]
    PairedT,
    Wilcoxon,
}

impl TestKind {
    pub fn label(self) -> &'static str {
        match self {
            TestKind::PairedT => "paired_t",
            TestKind::Wilcoxon => "wilcoxon_signed_rank",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignificanceResult {
    pub kind: TestKind,
    pub p_value: f64,
    pub statistic: f64,
    /// The paired differences carry no variance (or are all zero).
    pub degenerate: bool,
}

fn differences(a: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.len() < 2 {
        return Err(Error::Validation(format!(
            "paired test needs at least 2 pairs, got {}",
            a.len()
        )));
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(Error::Validation("paired test on non-finite values".into()));
    }
    Ok(a.iter().zip(b).map(|(x, y)| x - y).collect())
}

pub fn significance_test(a: &[f64], b: &[f64], kind: TestKind) -> Result<SignificanceResult> {
    match kind {
        TestKind::PairedT => paired_t_test(a, b),
        TestKind::Wilcoxon => wilcoxon_signed_rank(a, b),
    }
}

fn mean_and_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Two-sided paired t-test.
///
/// With zero-variance differences the statistic is undefined: a zero mean
/// gives `p = 1`, a constant non-zero shift gives `p = 0`, both flagged.
pub fn paired_t_test(a: &[f64], b: &[f64]) -> Result<SignificanceResult> {
    let d = differences(a, b)?;
    let (mean, sd) = mean_and_sd(&d);
    let scale = d.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if sd <= 1e-14 * scale.max(f64::MIN_POSITIVE) || sd == 0.0 {
        let shifted = mean != 0.0;
        return Ok(SignificanceResult {
            kind: TestKind::PairedT,
            p_value: if shifted { 0.0 } else { 1.0 },
            statistic: if shifted { mean.signum() * f64::INFINITY } else { 0.0 },
            degenerate: true,
        });
    }
    let n = d.len() as f64;
    let t = mean / (sd / n.sqrt());
    let dist = StudentsT::new(0.0, 1.0, n - 1.0).map_err(|e| Error::Validation(e.to_string()))?;
    let p = (2.0 * dist.sf(t.abs())).min(1.0);
    Ok(SignificanceResult {
        kind: TestKind::PairedT,
        p_value: p,
        statistic: t,
        degenerate: false,
    })
}

/// Largest sample handled by the exact null distribution.
const WILCOXON_EXACT_MAX: usize = 30;

/// Two-sided Wilcoxon signed-rank test on paired differences.
///
/// Zero differences are dropped. Without ties and with at most
/// [`WILCOXON_EXACT_MAX`] non-zero pairs the p-value is exact; otherwise a
/// normal approximation with tie correction and continuity correction is
/// used. The statistic is `W+`, the rank sum of positive differences.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64]) -> Result<SignificanceResult> {
    let d: Vec<f64> = differences(a, b)?.into_iter().filter(|v| *v != 0.0).collect();
    if d.is_empty() {
        return Ok(SignificanceResult {
            kind: TestKind::Wilcoxon,
            p_value: 1.0,
            statistic: 0.0,
            degenerate: true,
        });
    }
    let n = d.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].abs().total_cmp(&d[j].abs()));
    let mut ranks = vec![0.0; n];
    let mut tie_term = 0.0;
    let mut has_ties = false;
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && d[order[end]].abs() == d[order[start]].abs() {
            end += 1;
        }
        let avg = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = avg;
        }
        let t = (end - start) as f64;
        if end - start > 1 {
            has_ties = true;
            tie_term += t * t * t - t;
        }
        start = end;
    }
    let w_plus: f64 = (0..n).filter(|&i| d[i] > 0.0).map(|i| ranks[i]).sum();

    let p = if !has_ties && n <= WILCOXON_EXACT_MAX {
        exact_signed_rank_p(n, w_plus.round() as usize)
    } else {
        let nf = n as f64;
        let mean = nf * (nf + 1.0) / 4.0;
        let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_term / 48.0;
        if var <= 0.0 {
            1.0
        } else {
            let z = ((w_plus - mean).abs() - 0.5).max(0.0) / var.sqrt();
            let normal = Normal::new(0.0, 1.0).expect("standard normal");
            (2.0 * normal.sf(z)).min(1.0)
        }
    };
    Ok(SignificanceResult {
        kind: TestKind::Wilcoxon,
        p_value: p,
        statistic: w_plus,
        degenerate: false,
    })
}

/// Two-sided exact p-value of `W+ = w` under the signed-rank null with ranks
/// `1..=n`.
fn exact_signed_rank_p(n: usize, w: usize) -> f64 {
    let max = n * (n + 1) / 2;
    // counts[s] = number of sign assignments with rank sum s.
    let mut counts = vec![0f64; max + 1];
    counts[0] = 1.0;
    for r in 1..=n {
        for s in (r..=max).rev() {
            counts[s] += counts[s - r];
        }
    }
    let total = 2f64.powi(n as i32);
    let lower: f64 = counts[..=w.min(max)].iter().sum();
    let upper: f64 = counts[w.min(max)..].iter().sum();
    (2.0 * lower.min(upper) / total).min(1.0)
}

/// Mean and symmetric Student-t half-width at `level`.
pub fn t_interval(values: &[f64], level: f64) -> Result<(f64, f64)> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::Validation(format!("confidence level {level} outside (0, 1)")));
    }
    if values.len() < 2 {
        return Err(Error::Validation("interval needs at least 2 values".into()));
    }
    let (mean, sd) = mean_and_sd(values);
    let n = values.len() as f64;
    let dist = StudentsT::new(0.0, 1.0, n - 1.0).map_err(|e| Error::Validation(e.to_string()))?;
    let q = dist.inverse_cdf(0.5 + level / 2.0);
    Ok((mean, q * sd / n.sqrt()))
}

/// Kendall's tau-b between two equally long sequences.
pub fn kendall_tau(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let (mut concordant, mut discordant, mut ties_x, mut ties_y) = (0i64, 0i64, 0i64, 0i64);
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let dx = (x[i] - x[j]).partial_cmp(&0.0);
            let dy = (y[i] - y[j]).partial_cmp(&0.0);
            match (dx, dy) {
                (Some(std::cmp::Ordering::Equal), Some(std::cmp::Ordering::Equal)) => {}
                (Some(std::cmp::Ordering::Equal), _) => ties_x += 1,
                (_, Some(std::cmp::Ordering::Equal)) => ties_y += 1,
                (a, b) if a == b => concordant += 1,
                _ => discordant += 1,
            }
        }
    }
    let denom = (((concordant + discordant + ties_x) * (concordant + discordant + ties_y)) as f64).sqrt();
    if denom == 0.0 {
        return Err(Error::Validation("Kendall tau of constant sequences".into()));
    }
    Ok((concordant - discordant) as f64 / denom)
}

/// Star marks at the usual 0.01 / 0.05 / 0.1 cut-offs.
pub fn star_level(p: f64) -> &'static str {
    if p < 0.01 {
        "***"
    } else if p < 0.05 {
        "**"
    } else if p < 0.1 {
        "*"
    } else {
        ""
    }
}
