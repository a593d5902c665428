//! The per-human model estimator.
//!
//! For each human:
//!
//! 1. fit a model of the human's decisions on their own instances;
//! 2. for each group separately, find every threshold at which the model's
//!    positive predictions number `c` times the human's positive decisions
//!    (the recall-to-precision ratio, which simplifies to that count ratio);
//! 3. classify the gold pool with each qualifying threshold pair;
//! 4. average the resulting TPR gaps against the gold labels, optionally
//!    dividing by `c`.
//!
//! The naive variant skips step 2 and uses thresholds `{0.5, 0.5}`.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{DecisionSet, GoldStandardSet, Group, InstanceId};
use crate::error::{Error, Result};
use crate::learners::{cross_val_proba, LearnerConfig, Model, ProbClassifier};
use crate::metrics::{GapKind, GapValue};

/// Which estimator produced a [`BiasEstimate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "MDBA")]
    Mdba,
    #[serde(rename = "MDBA-Naive")]
    MdbaNaive,
    #[serde(rename = "SR")]
    Sr,
    #[serde(rename = "GS")]
    Gs,
    #[serde(rename = "CL")]
    Cl,
}

impl Method {
    pub const ALL: [Method; 5] = [Method::Mdba, Method::MdbaNaive, Method::Sr, Method::Gs, Method::Cl];

    pub fn name(self) -> &'static str {
        match self {
            Method::Mdba => "MDBA",
            Method::MdbaNaive => "MDBA-Naive",
            Method::Sr => "SR",
            Method::Gs => "GS",
            Method::Cl => "CL",
        }
    }

    pub fn parse(s: &str) -> Result<Method> {
        Method::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Config(format!("unknown method `{s}`")))
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Scores the threshold search runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ThresholdScores {
    /// The fitted model's scores on its own training instances.
    InSample,
    /// Out-of-fold scores from stratified `folds`-fold refits of the
    /// configured learner. A flexible learner nearly memorises its training
    /// decisions, so in-sample counts say little about how many positives it
    /// predicts on unseen instances.
    CrossFitted { folds: usize, seed: u64 },
}

impl Default for ThresholdScores {
    fn default() -> Self {
        ThresholdScores::CrossFitted { folds: 5, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MdbaConfig {
    /// Target ratio of predicted to actual positive decisions, per group.
    pub c: f64,
    pub learner: LearnerConfig,
    /// Relative tolerance: a threshold qualifies when `|ratio / c - 1| <= tol`.
    pub rpr_tolerance: f64,
    pub rescale_by_c: bool,
    pub naive_mode: bool,
    pub threshold_scores: ThresholdScores,
}

impl Default for MdbaConfig {
    fn default() -> Self {
        Self {
            c: 1.0,
            learner: LearnerConfig::default(),
            rpr_tolerance: 0.01,
            rescale_by_c: true,
            naive_mode: false,
            threshold_scores: ThresholdScores::default(),
        }
    }
}

impl MdbaConfig {
    pub fn naive() -> Self {
        Self {
            naive_mode: true,
            rescale_by_c: false,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::Config(format!("c must be positive, got {}", self.c)));
        }
        if !(self.rpr_tolerance > 0.0) {
            return Err(Error::Config("rpr tolerance must be positive".into()));
        }
        if let ThresholdScores::CrossFitted { folds, .. } = self.threshold_scores {
            if folds < 2 {
                return Err(Error::Config("cross-fitted thresholds need at least 2 folds".into()));
            }
        }
        Ok(())
    }

    pub fn method(&self) -> Method {
        if self.naive_mode {
            Method::MdbaNaive
        } else {
            Method::Mdba
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdPair {
    pub pi_a: f64,
    pub pi_not_a: f64,
}

impl ThresholdPair {
    pub const NAIVE: ThresholdPair = ThresholdPair {
        pi_a: 0.5,
        pi_not_a: 0.5,
    };

    pub fn for_group(&self, group: Group) -> f64 {
        match group {
            Group::A => self.pi_a,
            Group::NotA => self.pi_not_a,
        }
    }
}

/// Qualifying thresholds for one group with the ratio each attains.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupThresholds {
    pub group: Group,
    pub thresholds: Vec<f64>,
    pub attained: Vec<f64>,
    /// No candidate was within tolerance; the single nearest one is kept.
    pub nearest_fallback: bool,
}

impl GroupThresholds {
    pub fn mean_attained(&self) -> f64 {
        self.attained.iter().sum::<f64>() / self.attained.len() as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RprThresholds {
    pub a: GroupThresholds,
    pub not_a: GroupThresholds,
}

impl RprThresholds {
    /// Cartesian pairing of the per-group threshold lists.
    pub fn pairs(&self) -> Vec<ThresholdPair> {
        self.a
            .thresholds
            .iter()
            .flat_map(|&pi_a| {
                self.not_a
                    .thresholds
                    .iter()
                    .map(move |&pi_not_a| ThresholdPair { pi_a, pi_not_a })
            })
            .collect()
    }

    pub fn nearest_fallback(&self) -> bool {
        self.a.nearest_fallback || self.not_a.nearest_fallback
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiasEstimate {
    pub human_id: String,
    pub gap: GapValue,
    pub method: Method,
    pub thresholds_used: Vec<ThresholdPair>,
    pub c_used: f64,
    /// Mean attained count ratio per group over the thresholds used; absent
    /// for methods without a ratio target.
    pub attained_rpr_a: Option<f64>,
    pub attained_rpr_not_a: Option<f64>,
    /// Mean gap over threshold pairs before any division by `c`.
    pub raw_gap: f64,
    /// Standard deviation of the gap across threshold pairs.
    pub uncertainty: f64,
    pub nearest_fallback: bool,
}

impl BiasEstimate {
    /// Estimate record for methods that have no thresholds or ratio target.
    pub(crate) fn plain(human_id: &str, method: Method, gap: GapValue) -> Self {
        Self {
            human_id: human_id.to_string(),
            gap,
            method,
            thresholds_used: Vec::new(),
            c_used: 1.0,
            attained_rpr_a: None,
            attained_rpr_not_a: None,
            raw_gap: gap.value,
            uncertainty: 0.0,
            nearest_fallback: false,
        }
    }
}

/// Result for one human; failures do not abort the other humans.
#[derive(Debug)]
pub struct HumanOutcome<T> {
    pub human_id: String,
    pub result: Result<T>,
}

impl<T> HumanOutcome<T> {
    pub fn ok(&self) -> Option<&T> {
        self.result.as_ref().ok()
    }
}

/// Collects successful results, or the first failure with its human id.
pub fn collect_outcomes<T>(outcomes: Vec<HumanOutcome<T>>) -> Result<Vec<T>> {
    outcomes
        .into_iter()
        .map(|o| {
            o.result
                .map_err(|e| Error::Validation(format!("human `{}`: {e}", o.human_id)))
        })
        .collect()
}

/// Fits one decision model per human, in parallel, preserving input order.
pub fn train_human_models(sets: &[DecisionSet], learner: &LearnerConfig) -> Vec<HumanOutcome<Model>> {
    sets.par_iter()
        .map(|set| HumanOutcome {
            human_id: set.human_id.clone(),
            result: learner.fit(&set.design_rows(), &set.decisions()),
        })
        .collect()
}

/// Scores and decisions of one group, scores sorted ascending.
struct GroupScores {
    sorted_scores: Vec<f64>,
    positives: usize,
}

impl GroupScores {
    fn count_at_or_above(&self, threshold: f64) -> usize {
        self.sorted_scores.len() - self.sorted_scores.partition_point(|&s| s < threshold)
    }
}

fn group_scores(scores: &[f64], decisions: &[bool], groups: &[Group], group: Group) -> GroupScores {
    let mut sorted_scores = Vec::new();
    let mut positives = 0;
    for ((&s, &d), &g) in scores.iter().zip(decisions).zip(groups) {
        if g == group {
            sorted_scores.push(s);
            positives += usize::from(d);
        }
    }
    sorted_scores.sort_by(f64::total_cmp);
    GroupScores {
        sorted_scores,
        positives,
    }
}

fn search_group(gs: &GroupScores, group: Group, c: f64, tol: f64) -> Result<GroupThresholds> {
    if gs.positives == 0 {
        return Err(Error::UndefinedRate(format!(
            "RPR ratio undefined: no positive decisions in group {group}"
        )));
    }
    let mut candidates: Vec<f64> = gs.sorted_scores.clone();
    candidates.push(0.0);
    candidates.push(1.0);
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    let ratio = |t: f64| gs.count_at_or_above(t) as f64 / gs.positives as f64;
    let mut thresholds = Vec::new();
    let mut attained = Vec::new();
    for &t in &candidates {
        let r = ratio(t);
        if (r / c - 1.0).abs() <= tol {
            thresholds.push(t);
            attained.push(r);
        }
    }
    if !thresholds.is_empty() {
        return Ok(GroupThresholds {
            group,
            thresholds,
            attained,
            nearest_fallback: false,
        });
    }
    // Nearest attainable ratio; ties go to the higher threshold.
    let mut best = candidates[0];
    for &t in &candidates {
        if (ratio(t) - c).abs() <= (ratio(best) - c).abs() {
            best = t;
        }
    }
    Ok(GroupThresholds {
        group,
        thresholds: vec![best],
        attained: vec![ratio(best)],
        nearest_fallback: true,
    })
}

/// Per-group thresholds at which the model's predicted positives on the
/// human's instances are `c` times the human's positive decisions.
///
/// Candidates are the distinct scores on the group plus 0 and 1; a score
/// `>= threshold` counts as a positive prediction.
pub fn find_rpr_thresholds(
    model: &dyn ProbClassifier,
    set: &DecisionSet,
    c: f64,
    tol: f64,
) -> Result<RprThresholds> {
    let scores = model.predict_proba(&set.design_rows())?;
    rpr_thresholds_from_scores(&scores, set, c, tol)
}

/// Threshold search on precomputed scores for the human's instances, in set
/// order.
pub fn rpr_thresholds_from_scores(
    scores: &[f64],
    set: &DecisionSet,
    c: f64,
    tol: f64,
) -> Result<RprThresholds> {
    if scores.len() != set.len() {
        return Err(Error::LengthMismatch {
            left: scores.len(),
            right: set.len(),
        });
    }
    let decisions = set.decisions();
    let groups = set.groups();
    let search = |g: Group| search_group(&group_scores(scores, &decisions, &groups, g), g, c, tol);
    Ok(RprThresholds {
        a: search(Group::A)?,
        not_a: search(Group::NotA)?,
    })
}

/// Attained count ratio of fixed thresholds, used by the naive variant.
fn attained_at(model: &dyn ProbClassifier, set: &DecisionSet, pair: ThresholdPair) -> Result<RprThresholds> {
    let scores = model.predict_proba(&set.design_rows())?;
    let decisions = set.decisions();
    let groups = set.groups();
    let at = |g: Group| -> GroupThresholds {
        let gs = group_scores(&scores, &decisions, &groups, g);
        let t = pair.for_group(g);
        let attained = if gs.positives == 0 {
            f64::NAN
        } else {
            gs.count_at_or_above(t) as f64 / gs.positives as f64
        };
        GroupThresholds {
            group: g,
            thresholds: vec![t],
            attained: vec![attained],
            nearest_fallback: false,
        }
    };
    Ok(RprThresholds {
        a: at(Group::A),
        not_a: at(Group::NotA),
    })
}

/// Gold pool scored once per human: positive-label scores per group, sorted.
struct GoldPositives {
    a: Vec<f64>,
    not_a: Vec<f64>,
}

impl GoldPositives {
    fn new(model: &dyn ProbClassifier, gold: &GoldStandardSet) -> Result<Self> {
        let scores = model.predict_proba(&gold.design_rows())?;
        let mut a = Vec::new();
        let mut not_a = Vec::new();
        for (inst, s) in gold.instances().iter().zip(scores) {
            if inst.gold_label == Some(true) {
                match inst.group {
                    Group::A => a.push(s),
                    Group::NotA => not_a.push(s),
                }
            }
        }
        a.sort_by(f64::total_cmp);
        not_a.sort_by(f64::total_cmp);
        Ok(Self { a, not_a })
    }

    fn tpr(&self, group: Group, threshold: f64) -> f64 {
        let s = match group {
            Group::A => &self.a,
            Group::NotA => &self.not_a,
        };
        (s.len() - s.partition_point(|&v| v < threshold)) as f64 / s.len() as f64
    }
}

fn check_gold(gold: &GoldStandardSet) -> Result<()> {
    for g in Group::BOTH {
        if !gold
            .instances()
            .iter()
            .any(|i| i.group == g && i.gold_label == Some(true))
        {
            return Err(Error::UndefinedRate(format!(
                "gold-standard set has no positive labels in group {g}"
            )));
        }
    }
    Ok(())
}

/// Step 2 for one human: the naive pair, or every qualifying pair. With
/// cross-fitted threshold scores the configured learner is refit on each
/// fold of the human's set and `model` is not consulted.
pub fn select_thresholds(model: &dyn ProbClassifier, set: &DecisionSet, config: &MdbaConfig) -> Result<RprThresholds> {
    if config.naive_mode {
        return attained_at(model, set, ThresholdPair::NAIVE);
    }
    match config.threshold_scores {
        ThresholdScores::InSample => find_rpr_thresholds(model, set, config.c, config.rpr_tolerance),
        ThresholdScores::CrossFitted { folds, seed } => {
            let scores = cross_val_proba(&config.learner, &set.design_rows(), &set.decisions(), folds, seed)?;
            rpr_thresholds_from_scores(&scores, set, config.c, config.rpr_tolerance)
        }
    }
}

/// Steps 2-4 for one human given an already-trained model.
pub fn assess_with_model(
    model: &dyn ProbClassifier,
    set: &DecisionSet,
    gold: &GoldStandardSet,
    config: &MdbaConfig,
) -> Result<BiasEstimate> {
    config.validate()?;
    check_gold(gold)?;
    let search = select_thresholds(model, set, config)?;
    assess_with_thresholds(model, set, gold, config, &search)
}

/// A human's decision model and thresholds, reusable across gold pools.
#[derive(Debug, Clone)]
pub struct FittedHuman {
    pub model: Model,
    pub thresholds: RprThresholds,
}

/// Steps 1-2 for one human.
pub fn fit_human(set: &DecisionSet, config: &MdbaConfig) -> Result<FittedHuman> {
    config.validate()?;
    let model = config.learner.fit(&set.design_rows(), &set.decisions())?;
    let thresholds = select_thresholds(&model, set, config)?;
    Ok(FittedHuman { model, thresholds })
}

impl FittedHuman {
    /// Steps 3-4 against one gold pool.
    pub fn assess(&self, set: &DecisionSet, gold: &GoldStandardSet, config: &MdbaConfig) -> Result<BiasEstimate> {
        check_gold(gold)?;
        assess_with_thresholds(&self.model, set, gold, config, &self.thresholds)
    }
}

/// Steps 3-4 for one human given a model and the thresholds to apply.
pub fn assess_with_thresholds(
    model: &dyn ProbClassifier,
    set: &DecisionSet,
    gold: &GoldStandardSet,
    config: &MdbaConfig,
    search: &RprThresholds,
) -> Result<BiasEstimate> {
    let gold_pos = GoldPositives::new(model, gold)?;
    let pairs = search.pairs();
    let gaps: Vec<f64> = pairs
        .iter()
        .map(|p| gold_pos.tpr(Group::A, p.pi_a) - gold_pos.tpr(Group::NotA, p.pi_not_a))
        .collect();
    let n = gaps.len() as f64;
    let raw_gap = gaps.iter().sum::<f64>() / n;
    let uncertainty = (gaps.iter().map(|g| (g - raw_gap).powi(2)).sum::<f64>() / n).sqrt();
    let value = if config.rescale_by_c {
        raw_gap / config.c
    } else {
        raw_gap
    };
    Ok(BiasEstimate {
        human_id: set.human_id.clone(),
        gap: GapValue {
            value: value.clamp(-1.0, 1.0),
            kind: GapKind::TruePositiveRate,
            oriented_on: Group::A,
        },
        method: config.method(),
        thresholds_used: pairs,
        c_used: config.c,
        attained_rpr_a: Some(search.a.mean_attained()),
        attained_rpr_not_a: Some(search.not_a.mean_attained()),
        raw_gap,
        uncertainty,
        nearest_fallback: search.nearest_fallback(),
    })
}

/// Warns when the gold pool shares instances with any decision set.
pub fn check_disjoint(sets: &[DecisionSet], gold: &GoldStandardSet) -> usize {
    let gold_ids: BTreeSet<InstanceId> = gold.ids();
    let overlap = sets
        .iter()
        .flat_map(|s| s.instances())
        .filter(|i| gold_ids.contains(&i.id))
        .count();
    if overlap > 0 {
        log::warn!("{overlap} decision-set instances also appear in the gold-standard pool");
    }
    overlap
}

/// Runs the full estimator for every human. Humans are processed in parallel
/// and returned in input order.
pub fn estimate_bias(
    sets: &[DecisionSet],
    gold: &GoldStandardSet,
    config: &MdbaConfig,
) -> Result<Vec<HumanOutcome<BiasEstimate>>> {
    config.validate()?;
    check_gold(gold)?;
    check_disjoint(sets, gold);
    Ok(sets
        .par_iter()
        .map(|set| HumanOutcome {
            human_id: set.human_id.clone(),
            result: fit_human(set, config).and_then(|fitted| fitted.assess(set, gold, config)),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Instance;
    use crate::learners::LogisticConfig;

    /// Model whose score is the first feature, clamped to [0, 1].
    struct FirstFeature;

    impl ProbClassifier for FirstFeature {
        fn n_features(&self) -> usize {
            2
        }
        fn proba_row(&self, row: &[f64]) -> f64 {
            row[0].clamp(0.0, 1.0)
        }
    }

    fn set_from(scores_a: &[f64], dec_a: &[bool], scores_b: &[f64], dec_b: &[bool]) -> DecisionSet {
        let mut instances = Vec::new();
        let mut row = 0;
        for (g, scores, decs) in [(Group::A, scores_a, dec_a), (Group::NotA, scores_b, dec_b)] {
            for (&s, &d) in scores.iter().zip(decs) {
                instances.push(Instance::new(InstanceId { dataset: 0, row }, vec![s], g).with_decision(d));
                row += 1;
            }
        }
        DecisionSet::new("h", instances).unwrap()
    }

    /// Independent oracle: try every candidate and count directly.
    fn brute_force(scores: &[f64], positives: usize, c: f64, tol: f64) -> Vec<f64> {
        let mut cands: Vec<f64> = scores.to_vec();
        cands.extend([0.0, 1.0]);
        cands.sort_by(f64::total_cmp);
        cands.dedup();
        cands
            .into_iter()
            .filter(|&t| {
                let count = scores.iter().filter(|&&s| s >= t).count();
                ((count as f64 / positives as f64) / c - 1.0).abs() <= tol
            })
            .collect()
    }

    #[test]
    fn thresholds_match_exhaustive_sweep() {
        // 30 distinct scores, 10 positive decisions, plus a tie block.
        let scores_a: Vec<f64> = (0..30).map(|i| (i as f64 + 0.5) / 31.0).chain([0.7, 0.7]).collect();
        let dec_a: Vec<bool> = (0..32).map(|i| i >= 22).collect();
        let scores_b = [0.2, 0.6, 0.9];
        let dec_b = [false, true, true];
        let set = set_from(&scores_a, &dec_a, &scores_b, &dec_b);
        for c in [0.5, 1.0, 1.5] {
            let found = find_rpr_thresholds(&FirstFeature, &set, c, 0.05).unwrap();
            assert_eq!(found.a.thresholds, brute_force(&scores_a, 10, c, 0.05), "c={c}");
            assert!(!found.a.nearest_fallback);
            for (&t, &r) in found.a.thresholds.iter().zip(&found.a.attained) {
                let count = scores_a.iter().filter(|&&s| s >= t).count();
                assert_eq!(r, count as f64 / 10.0);
            }
        }
        // c = 1 admits exactly 10 positive predictions on group a.
        let found = find_rpr_thresholds(&FirstFeature, &set, 1.0, 0.05).unwrap();
        for &t in &found.a.thresholds {
            assert_eq!(scores_a.iter().filter(|&&s| s >= t).count(), 10);
        }
    }

    #[test]
    fn perfect_model_qualifies_one_half() {
        let scores_a = [0.1, 0.2, 0.8, 0.9];
        let dec_a = [false, false, true, true];
        let set = set_from(&scores_a, &dec_a, &[0.3, 0.7], &[false, true]);
        let found = find_rpr_thresholds(&FirstFeature, &set, 1.0, 0.05).unwrap();
        // Every threshold in (0.2, 0.8] admits the same two positives; 0.8 is the observed one.
        assert_eq!(found.a.thresholds, vec![0.8]);
        let naive = attained_at(&FirstFeature, &set, ThresholdPair::NAIVE).unwrap();
        assert_eq!(naive.a.attained, vec![1.0]);
        assert_eq!(naive.not_a.attained, vec![1.0]);
    }

    #[test]
    fn unattainable_ratio_falls_back_to_nearest() {
        // Every score is exactly 1, so even the highest threshold predicts all positive.
        let set = set_from(&[1.0, 1.0, 1.0, 1.0], &[true, false, false, false], &[1.0, 1.0], &[true, false]);
        let found = find_rpr_thresholds(&FirstFeature, &set, 1.0, 0.05).unwrap();
        assert!(found.a.nearest_fallback);
        assert_eq!(found.a.thresholds.len(), 1);
        assert_eq!(found.a.attained, vec![4.0]);
        assert!(found.nearest_fallback());
    }

    #[test]
    fn no_positive_decisions_is_undefined() {
        let set = set_from(&[0.1, 0.4], &[false, false], &[0.3, 0.7], &[false, true]);
        assert!(matches!(
            find_rpr_thresholds(&FirstFeature, &set, 1.0, 0.05),
            Err(Error::UndefinedRate(_))
        ));
    }

    #[test]
    fn gap_averages_pairs_and_rescales() {
        // Gold: group a positives with scores 0.3, 0.6, 0.9; group ~a 0.5, 0.95.
        let mut gold = Vec::new();
        for (i, (g, s, y)) in [
            (Group::A, 0.3, true),
            (Group::A, 0.6, true),
            (Group::A, 0.9, true),
            (Group::A, 0.1, false),
            (Group::NotA, 0.5, true),
            (Group::NotA, 0.95, true),
            (Group::NotA, 0.2, false),
        ]
        .into_iter()
        .enumerate()
        {
            gold.push(Instance::new(InstanceId { dataset: 1, row: i as u64 }, vec![s], g).with_gold_label(y));
        }
        let gold = GoldStandardSet::new(gold).unwrap();
        let set = set_from(&[0.1, 0.55, 0.65, 0.95], &[false, true, false, true], &[0.4, 0.8], &[true, false]);
        let config = MdbaConfig {
            c: 1.0,
            rpr_tolerance: 0.01,
            threshold_scores: ThresholdScores::InSample,
            ..Default::default()
        };
        let est = assess_with_model(&FirstFeature, &set, &gold, &config).unwrap();
        // group a: thresholds giving exactly 2 of 4 predicted positive -> 0.65
        // group ~a: exactly 1 of 2 -> 0.8
        assert_eq!(est.thresholds_used, vec![ThresholdPair { pi_a: 0.65, pi_not_a: 0.8 }]);
        // TPR_a(0.65) = 1/3, TPR_~a(0.8) = 1/2
        assert!((est.gap.value - (1.0 / 3.0 - 0.5)).abs() < 1e-12);
        assert_eq!(est.uncertainty, 0.0);

        let halved = MdbaConfig {
            c: 2.0,
            ..config.clone()
        };
        let est2 = assess_with_model(&FirstFeature, &set, &gold, &halved).unwrap();
        assert!((est2.gap.value - est2.raw_gap / 2.0).abs() < 1e-12);

        let naive = assess_with_model(&FirstFeature, &set, &gold, &MdbaConfig::naive()).unwrap();
        assert_eq!(naive.thresholds_used, vec![ThresholdPair::NAIVE]);
        assert_eq!(naive.method, Method::MdbaNaive);
        // TPR_a(0.5) = 2/3, TPR_~a(0.5) = 1
        assert!((naive.gap.value - (2.0 / 3.0 - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn single_class_human_fails_alone() {
        let mk = |id: &str, all_pos: bool| {
            let instances = (0..20)
                .map(|i| {
                    let g = if i % 2 == 0 { Group::A } else { Group::NotA };
                    Instance::new(InstanceId { dataset: 0, row: i }, vec![i as f64], g)
                        .with_decision(all_pos || i > 9)
                })
                .collect();
            DecisionSet::new(id, instances).unwrap()
        };
        let sets = vec![mk("h1", false), mk("h2", true), mk("h3", false)];
        let outcomes = train_human_models(&sets, &LearnerConfig::Logistic(LogisticConfig::default()));
        assert_eq!(outcomes.len(), 3);
        assert!(outcomes[0].result.is_ok());
        assert!(matches!(outcomes[1].result, Err(Error::Training(_))));
        assert!(outcomes[2].result.is_ok());
        assert_eq!(outcomes[1].human_id, "h2");
        // Identical sets give identical models.
        let (m1, m3) = (outcomes[0].ok().unwrap(), outcomes[2].ok().unwrap());
        assert_eq!(m1, m3);
    }

    #[test]
    fn config_validation() {
        assert!(MdbaConfig { c: 0.0, ..Default::default() }.validate().is_err());
        assert!(MdbaConfig { rpr_tolerance: 0.0, ..Default::default() }.validate().is_err());
        let one_fold = ThresholdScores::CrossFitted { folds: 1, seed: 0 };
        assert!(MdbaConfig { threshold_scores: one_fold, ..Default::default() }.validate().is_err());
        assert_eq!(Method::parse("mdba-naive").unwrap(), Method::MdbaNaive);
    }
}
