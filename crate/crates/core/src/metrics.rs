//! Confusion counts, group gaps, the recall-to-precision ratio and MAE.

use serde::{Deserialize, Serialize};

use crate::data::{DecisionSet, Group};
use crate::error::{Error, Result};

/// Confusion cells for one group.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cells {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    pub fn_: u64,
}

impl Cells {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn reference_positives(&self) -> u64 {
        self.tp + self.fn_
    }

    pub fn reference_negatives(&self) -> u64 {
        self.fp + self.tn
    }

    pub fn predicted_positives(&self) -> u64 {
        self.tp + self.fp
    }

    fn record(&mut self, prediction: bool, reference: bool) {
        match (prediction, reference) {
            (true, true) => self.tp += 1,
            (true, false) => self.fp += 1,
            (false, false) => self.tn += 1,
            (false, true) => self.fn_ += 1,
        }
    }

    pub fn tpr(&self) -> Result<f64> {
        match self.reference_positives() {
            0 => Err(Error::UndefinedRate("true positive rate with no positive references".into())),
            d => Ok(self.tp as f64 / d as f64),
        }
    }

    pub fn fpr(&self) -> Result<f64> {
        match self.reference_negatives() {
            0 => Err(Error::UndefinedRate("false positive rate with no negative references".into())),
            d => Ok(self.fp as f64 / d as f64),
        }
    }

    pub fn ppv(&self) -> Result<f64> {
        match self.predicted_positives() {
            0 => Err(Error::UndefinedRate("precision with no positive predictions".into())),
            d => Ok(self.tp as f64 / d as f64),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupConfusion {
    pub a: Cells,
    pub not_a: Cells,
}

impl GroupConfusion {
    pub fn get(&self, group: Group) -> &Cells {
        match group {
            Group::A => &self.a,
            Group::NotA => &self.not_a,
        }
    }

    fn get_mut(&mut self, group: Group) -> &mut Cells {
        match group {
            Group::A => &mut self.a,
            Group::NotA => &mut self.not_a,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapKind {
    TruePositiveRate,
    FalsePositiveRate,
    SelectionRate,
}

/// A between-group difference `rate(oriented_on) - rate(other)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapValue {
    pub value: f64,
    pub kind: GapKind,
    pub oriented_on: Group,
}

impl GapValue {
    fn new(value: f64, kind: GapKind, oriented_on: Group) -> Self {
        debug_assert!(value.abs() <= 1.0 + 1e-12);
        Self {
            value,
            kind,
            oriented_on,
        }
    }
}

pub fn confusion(predictions: &[bool], references: &[bool], groups: &[Group]) -> Result<GroupConfusion> {
    if predictions.len() != references.len() {
        return Err(Error::LengthMismatch {
            left: predictions.len(),
            right: references.len(),
        });
    }
    if predictions.len() != groups.len() {
        return Err(Error::LengthMismatch {
            left: predictions.len(),
            right: groups.len(),
        });
    }
    if predictions.is_empty() {
        return Err(Error::Validation("confusion over zero instances".into()));
    }
    let mut conf = GroupConfusion::default();
    for ((&p, &r), &g) in predictions.iter().zip(references).zip(groups) {
        conf.get_mut(g).record(p, r);
    }
    Ok(conf)
}

fn rate_gap(
    conf: &GroupConfusion,
    oriented_on: Group,
    kind: GapKind,
    rate: impl Fn(&Cells) -> Result<f64>,
) -> Result<GapValue> {
    let first = rate(conf.get(oriented_on))
        .map_err(|e| Error::UndefinedRate(format!("group {oriented_on}: {e}")))?;
    let other = oriented_on.other();
    let second =
        rate(conf.get(other)).map_err(|e| Error::UndefinedRate(format!("group {other}: {e}")))?;
    Ok(GapValue::new(first - second, kind, oriented_on))
}

/// `TPR_a - TPR_~a`.
pub fn tpr_gap(conf: &GroupConfusion) -> Result<GapValue> {
    tpr_gap_oriented(conf, Group::A)
}

pub fn tpr_gap_oriented(conf: &GroupConfusion, oriented_on: Group) -> Result<GapValue> {
    rate_gap(conf, oriented_on, GapKind::TruePositiveRate, Cells::tpr)
}

/// `FPR_a - FPR_~a`.
pub fn fpr_gap(conf: &GroupConfusion) -> Result<GapValue> {
    rate_gap(conf, Group::A, GapKind::FalsePositiveRate, Cells::fpr)
}

/// Recall over precision for one group, simplified to `(TP + FP) / (TP + FN)`:
/// predicted positives over reference positives.
pub fn rpr_ratio(cells: &Cells) -> Result<f64> {
    match cells.reference_positives() {
        0 => Err(Error::UndefinedRate("RPR ratio with no positive references".into())),
        d => Ok(cells.predicted_positives() as f64 / d as f64),
    }
}

/// How [`selection_rate_gap`] normalises positive decisions per group.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionNormalization {
    /// Positive-decision proportion within each group.
    #[default]
    Proportion,
    /// Raw count of positive decisions within each group.
    RawCount,
}

/// Positive-decision proportion in group `a` minus that in group `~a`.
pub fn selection_rate_gap(set: &DecisionSet) -> Result<GapValue> {
    let value = selection_gap_value(set, SelectionNormalization::Proportion)?;
    Ok(GapValue::new(value, GapKind::SelectionRate, Group::A))
}

/// Selection gap under either normalisation. The raw-count variant is not
/// bounded by 1 and therefore is not a [`GapValue`].
pub fn selection_gap_value(set: &DecisionSet, norm: SelectionNormalization) -> Result<f64> {
    let mut positives = [0u64; 2];
    let mut totals = [0u64; 2];
    for inst in set.instances() {
        let slot = usize::from(inst.group == Group::NotA);
        totals[slot] += 1;
        positives[slot] += u64::from(inst.decision == Some(true));
    }
    if totals.contains(&0) {
        return Err(Error::Validation(format!(
            "decision set `{}` has an empty group",
            set.human_id
        )));
    }
    Ok(match norm {
        SelectionNormalization::Proportion => {
            positives[0] as f64 / totals[0] as f64 - positives[1] as f64 / totals[1] as f64
        }
        SelectionNormalization::RawCount => positives[0] as f64 - positives[1] as f64,
    })
}

pub fn mae(estimates: &[f64], truths: &[f64]) -> Result<f64> {
    if estimates.len() != truths.len() {
        return Err(Error::LengthMismatch {
            left: estimates.len(),
            right: truths.len(),
        });
    }
    if estimates.is_empty() {
        return Err(Error::Validation("mean absolute error over zero pairs".into()));
    }
    Ok(estimates
        .iter()
        .zip(truths)
        .map(|(e, t)| (e - t).abs())
        .sum::<f64>()
        / estimates.len() as f64)
}
