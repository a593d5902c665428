use std::collections::BTreeSet;

use mdba::baselines::sr_estimate;
use mdba::data::{ingest_reader, sample_gs_pool, stratified_partition, write_csv, Dataset};
use mdba::learners::{BoostedTreesConfig, BoostedTreesModel, LogisticConfig, LogisticModel};
use mdba::mdba::rpr_thresholds_from_scores;
use mdba::metrics::{confusion, mae, rpr_ratio, tpr_gap, tpr_gap_oriented, Cells, SelectionNormalization};
use mdba::{DecisionSet, Group, Instance, InstanceId};
use proptest::prelude::*;

fn group_of(a: bool) -> Group {
    if a {
        Group::A
    } else {
        Group::NotA
    }
}

/// (group, gold label) pairs, at least `min_per_stratum` in every stratum.
fn labelled_instances(min_per_stratum: usize) -> impl Strategy<Value = Vec<Instance>> {
    prop::collection::vec((any::<bool>(), any::<bool>(), -5.0f64..5.0), 0..120).prop_map(move |extra| {
        let mut out = Vec::new();
        let mut push = |a: bool, y: bool, x: f64| {
            let row = out.len() as u64;
            out.push(Instance::new(InstanceId { dataset: 0, row }, vec![x], group_of(a)).with_gold_label(y));
        };
        for a in [true, false] {
            for y in [true, false] {
                for _ in 0..min_per_stratum {
                    push(a, y, 0.0);
                }
            }
        }
        for (a, y, x) in extra {
            push(a, y, x);
        }
        out
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partition_balances_every_stratum(data in labelled_instances(6), k in 1usize..6, seed in any::<u64>()) {
        let parts = stratified_partition(&data, k, seed).unwrap();
        prop_assert_eq!(parts.len(), k);
        let mut seen = BTreeSet::new();
        for part in &parts {
            for inst in part {
                prop_assert!(seen.insert(inst.id));
            }
        }
        prop_assert_eq!(seen.len(), data.len());
        for a in [Group::A, Group::NotA] {
            for y in [true, false] {
                let counts: Vec<usize> = parts
                    .iter()
                    .map(|p| p.iter().filter(|i| i.group == a && i.gold_label == Some(y)).count())
                    .collect();
                let (lo, hi) = (counts.iter().min().unwrap(), counts.iter().max().unwrap());
                prop_assert!(hi - lo <= 1, "stratum counts {:?}", counts);
            }
        }
        prop_assert_eq!(parts, stratified_partition(&data, k, seed).unwrap());
    }

    #[test]
    fn gold_pool_is_a_subset_without_duplicates(data in labelled_instances(10), per_group in 2usize..20, seed in any::<u64>()) {
        let pool = sample_gs_pool(&data, per_group, seed).unwrap();
        let ids: Vec<InstanceId> = pool.instances().iter().map(|i| i.id).collect();
        let unique: BTreeSet<InstanceId> = ids.iter().copied().collect();
        prop_assert_eq!(unique.len(), ids.len());
        for inst in pool.instances() {
            prop_assert!(data.contains(inst));
        }
        for g in Group::BOTH {
            prop_assert_eq!(pool.instances().iter().filter(|i| i.group == g).count(), per_group);
        }
    }

    #[test]
    fn csv_round_trip_is_exact(rows in prop::collection::vec((any::<bool>(), any::<bool>(), any::<bool>(), -1e6f64..1e6, -1e-3f64..1e-3), 1..60)) {
        let names = vec!["x".to_string(), "tiny".to_string()];
        let instances: Vec<Instance> = rows
            .iter()
            .enumerate()
            .map(|(i, &(a, y, d, x, t))| {
                Instance::new(InstanceId { dataset: 3, row: i as u64 }, vec![x, t], group_of(a))
                    .with_gold_label(y)
                    .with_decision(d)
            })
            .collect();
        let mut buf = Vec::new();
        write_csv(&mut buf, &names, &instances).unwrap();
        let schema = Dataset { feature_names: names.clone(), instances: instances.clone() }.csv_schema();
        let back = ingest_reader(buf.as_slice(), &schema).unwrap();
        prop_assert_eq!(back.feature_names, names);
        prop_assert_eq!(back.instances, instances);
    }

    #[test]
    fn confusion_and_gap_match_recount(triples in prop::collection::vec((any::<bool>(), any::<bool>(), any::<bool>()), 1..200)) {
        let preds: Vec<bool> = triples.iter().map(|t| t.0).collect();
        let refs: Vec<bool> = triples.iter().map(|t| t.1).collect();
        let groups: Vec<Group> = triples.iter().map(|t| group_of(t.2)).collect();
        let conf = confusion(&preds, &refs, &groups).unwrap();
        for (g, cells) in [(Group::A, conf.a), (Group::NotA, conf.not_a)] {
            let count = |p: bool, r: bool| triples.iter().filter(|t| group_of(t.2) == g && t.0 == p && t.1 == r).count() as u64;
            prop_assert_eq!(cells, Cells { tp: count(true, true), fp: count(true, false), tn: count(false, false), fn_: count(false, true) });
        }
        if let Ok(gap) = tpr_gap(&conf) {
            let flipped = tpr_gap_oriented(&conf, Group::NotA).unwrap();
            prop_assert_eq!(flipped.value, -gap.value);
        }
    }

    #[test]
    fn rpr_ratio_equals_recall_over_precision(tp in 1u64..5000, fp in 0u64..5000, fn_ in 0u64..5000, tn in 0u64..5000) {
        let cells = Cells { tp, fp, tn, fn_ };
        let lhs = rpr_ratio(&cells).unwrap();
        let rhs = cells.tpr().unwrap() / cells.ppv().unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.max(1.0));
    }

    #[test]
    fn mae_properties(pairs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..50), rot in 0usize..50) {
        let est: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let truth: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        let m = mae(&est, &truth).unwrap();
        prop_assert!(m >= 0.0);
        prop_assert_eq!(mae(&est, &est).unwrap(), 0.0);
        if est != truth {
            prop_assert!(m > 0.0);
        }
        let r = rot % est.len();
        let (mut e2, mut t2) = (est.clone(), truth.clone());
        e2.rotate_left(r);
        t2.rotate_left(r);
        prop_assert!((mae(&e2, &t2).unwrap() - m).abs() < 1e-12);
    }

    #[test]
    fn sr_ignores_order_and_feature_values(rows in prop::collection::vec((any::<bool>(), any::<bool>(), -3.0f64..3.0), 2..80), rot in 0usize..80) {
        prop_assume!(rows.iter().any(|r| r.0) && rows.iter().any(|r| !r.0));
        let build = |rows: &[(bool, bool, f64)], scale: f64| {
            let inst = rows
                .iter()
                .enumerate()
                .map(|(i, &(a, d, x))| Instance::new(InstanceId { dataset: 0, row: i as u64 }, vec![x * scale], group_of(a)).with_decision(d))
                .collect();
            DecisionSet::new("h", inst).unwrap()
        };
        let base = sr_estimate(&[build(&rows, 1.0)], SelectionNormalization::Proportion)[0].ok().unwrap().gap.value;
        let mut rotated = rows.clone();
        rotated.rotate_left(rot % rows.len());
        let moved = sr_estimate(&[build(&rotated, -7.0)], SelectionNormalization::Proportion)[0].ok().unwrap().gap.value;
        prop_assert!((base - moved).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn logistic_accepted_steps_never_increase_loss(rows in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0, any::<bool>()), 10..60)) {
        let x: Vec<Vec<f64>> = rows.iter().map(|r| vec![r.0, r.1]).collect();
        let y: Vec<bool> = rows.iter().map(|r| r.2).collect();
        prop_assume!(y.iter().any(|&v| v) && y.iter().any(|&v| !v));
        let cfg = LogisticConfig { max_iterations: 300, ..LogisticConfig::default() };
        let (_, trace) = LogisticModel::fit_with_trace(&x, &y, &cfg).unwrap();
        for w in trace.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12);
        }
    }

    #[test]
    fn boosted_staged_loss_never_increases(rows in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0, any::<bool>()), 20..80)) {
        let x: Vec<Vec<f64>> = rows.iter().map(|r| vec![r.0, r.1]).collect();
        let y: Vec<bool> = rows.iter().map(|r| r.2).collect();
        prop_assume!(y.iter().any(|&v| v) && y.iter().any(|&v| !v));
        let cfg = BoostedTreesConfig { n_trees: 30, max_depth: 2, min_leaf: 2, ..BoostedTreesConfig::default() };
        let model = BoostedTreesModel::fit(&x, &y, &cfg).unwrap();
        let staged = model.staged_log_loss(&x, &y);
        for w in staged.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn threshold_search_matches_brute_force(
        rows in prop::collection::vec((any::<bool>(), any::<bool>(), 0u8..=20), 2..80),
        c in 0.5f64..2.0,
        tol in 0.0f64..0.2,
    ) {
        for g in [true, false] {
            prop_assume!(rows.iter().any(|r| r.0 == g && r.1));
        }
        let instances = rows
            .iter()
            .enumerate()
            .map(|(i, &(a, d, _))| Instance::new(InstanceId { dataset: 0, row: i as u64 }, vec![0.0], group_of(a)).with_decision(d))
            .collect();
        let set = DecisionSet::new("h", instances).unwrap();
        let scores: Vec<f64> = rows.iter().map(|r| f64::from(r.2) / 20.0).collect();
        let found = rpr_thresholds_from_scores(&scores, &set, c, tol).unwrap();
        for (g, got) in [(true, &found.a), (false, &found.not_a)] {
            let in_group: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].0 == g).collect();
            let positives = in_group.iter().filter(|&&i| rows[i].1).count() as f64;
            let ratio = |t: f64| in_group.iter().filter(|&&i| scores[i] >= t).count() as f64 / positives;
            let mut candidates: Vec<f64> = in_group.iter().map(|&i| scores[i]).chain([0.0, 1.0]).collect();
            candidates.sort_by(f64::total_cmp);
            candidates.dedup();
            let in_band: Vec<f64> = candidates.iter().copied().filter(|&t| (ratio(t) / c - 1.0).abs() <= tol).collect();
            for (&t, &r) in got.thresholds.iter().zip(&got.attained) {
                prop_assert_eq!(r, ratio(t));
            }
            if in_band.is_empty() {
                prop_assert!(got.nearest_fallback);
                prop_assert_eq!(got.thresholds.len(), 1);
                let best = candidates.iter().map(|&t| (ratio(t) - c).abs()).fold(f64::INFINITY, f64::min);
                prop_assert_eq!((got.attained[0] - c).abs(), best);
            } else {
                prop_assert!(!got.nearest_fallback);
                prop_assert_eq!(&got.thresholds, &in_band);
            }
        }
    }
}
