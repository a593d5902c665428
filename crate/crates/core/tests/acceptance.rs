//! Acceptance gate. Runs every criterion, prints one line per criterion and
//! exits non-zero when any of them fails.

use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use mdba::baselines::cl_confident_joint;
use mdba::harness::{emit_report, run_experiment, ExperimentConfig, ExperimentReport};
use mdba::learners::LogisticObjective;
use mdba::mdba::{estimate_bias, collect_outcomes, MdbaConfig, Method};
use mdba::metrics::{confusion, mae, rpr_ratio, selection_rate_gap, tpr_gap, Cells};
use mdba::simulate::{build_world, BiasKind, ScenarioSpec};
use mdba::stats::kendall_tau;
use mdba::synth::{generate, well_specified_world, SyntheticConfig, WellSpecifiedSpec};
use mdba::{seeded_rng, DecisionSet, Group, Instance, InstanceId};
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

/// MAE of MDBA (or its naive variant) on one well-specified world, plus the
/// estimates and truths in human order.
fn well_specified_run(seed: u64, config: &MdbaConfig) -> (f64, Vec<f64>, Vec<f64>) {
    let world = well_specified_world(&WellSpecifiedSpec::default(), seed).unwrap();
    let sets = world.decision_sets().unwrap();
    let gold = world.gold_pool(WellSpecifiedSpec::default().gs_per_group).unwrap();
    let estimates: Vec<f64> = collect_outcomes(estimate_bias(&sets, &gold, config).unwrap())
        .unwrap()
        .iter()
        .map(|e| e.gap.value)
        .collect();
    let truths = world.true_gaps();
    (mae(&estimates, &truths).unwrap(), estimates, truths)
}

fn recovery() -> Outcome {
    let start = Instant::now();
    let (_, est, truth) = well_specified_run(0, &MdbaConfig::default());
    let elapsed = start.elapsed();
    let worst = est.iter().zip(&truth).map(|(e, t)| (e - t).abs()).fold(0.0, f64::max);
    outcome(
        worst <= 0.02 && elapsed < Duration::from_secs(60),
        format!("max |estimate - truth| {worst:.4} (limit 0.02) over 5 humans, {:.1} s (limit 60 s)", secs(elapsed)),
    )
}

fn ranking(mdba_maes: &mut Vec<f64>, naive_maes: &mut Vec<f64>) -> Outcome {
    let mut worst_tau = f64::INFINITY;
    for seed in 0..10 {
        let (m, est, truth) = well_specified_run(seed, &MdbaConfig::default());
        worst_tau = worst_tau.min(kendall_tau(&est, &truth).unwrap());
        mdba_maes.push(m);
        naive_maes.push(well_specified_run(seed, &MdbaConfig::naive()).0);
    }
    outcome(worst_tau == 1.0, format!("minimum Kendall tau {worst_tau:.3} over 10 seeds (required 1.0)"))
}

fn grid_config() -> ExperimentConfig {
    ExperimentConfig {
        prevalences: vec![0.2],
        bias_kinds: vec![BiasKind::CorrectOrdering],
        gs_sizes: vec![200],
        iterations: 20,
        methods: vec![Method::Mdba, Method::Sr, Method::Cl],
        ..ExperimentConfig::default()
    }
}

fn directional(report: &ExperimentReport, elapsed: Duration) -> Outcome {
    let mut pass = elapsed < Duration::from_secs(600);
    let mut parts = Vec::new();
    let mdba = report.cell(0.2, BiasKind::CorrectOrdering, 200, Method::Mdba).unwrap();
    for other in [Method::Sr, Method::Cl] {
        let cell = report.cell(0.2, BiasKind::CorrectOrdering, 200, other).unwrap();
        let cmp = report
            .comparisons
            .iter()
            .find(|c| c.other == other)
            .unwrap();
        let p = cmp.paired.p_value.unwrap_or(1.0);
        let ok = mdba.n_failed == 0
            && cell.n_failed == 0
            && mdba.mean_mae.unwrap() < cell.mean_mae.unwrap()
            && p < 0.05;
        pass &= ok;
        parts.push(format!(
            "MDBA {:.4} vs {other} {:.4} (paired-t p {p:.2e})",
            mdba.mean_mae.unwrap_or(f64::NAN),
            cell.mean_mae.unwrap_or(f64::NAN)
        ));
    }
    parts.push(format!("{:.0} s (limit 600 s)", secs(elapsed)));
    outcome(pass, parts.join("; "))
}

fn fidelity() -> Outcome {
    let dataset = generate(&SyntheticConfig::default()).unwrap();
    let spec = ScenarioSpec::default();
    let (mut checked, mut flagged, mut bad) = (0, 0, Vec::new());
    for seed in 0..20 {
        let world = build_world(&dataset, &spec, seed).unwrap();
        for h in &world.humans {
            checked += 1;
            let a = &h.tpr_a;
            if a.closest_attainable {
                flagged += 1;
            } else if (a.achieved - a.target).abs() > 0.01 + 1e-12 {
                bad.push(format!("seed {seed} {} tpr_a {:.4} vs {:.4}", h.id, a.achieved, a.target));
            }
            if (h.tpr_not_a.achieved - 0.95).abs() > 0.01 + 1e-12 {
                bad.push(format!("seed {seed} {} tpr_~a {:.4}", h.id, h.tpr_not_a.achieved));
            }
        }
    }
    let mut detail = format!("{checked} humans over 20 worlds, {flagged} flagged closest-attainable, {} out of band", bad.len());
    if let Some(first) = bad.first() {
        detail.push_str(&format!(" (first: {first})"));
    }
    outcome(bad.is_empty(), detail)
}

fn random_instances(rng: &mut impl Rng, n: usize) -> (Vec<bool>, Vec<bool>, Vec<Group>) {
    let preds = (0..n).map(|_| rng.random_bool(0.5)).collect();
    let refs = (0..n).map(|_| rng.random_bool(0.4)).collect();
    let groups = (0..n).map(|_| if rng.random_bool(0.5) { Group::A } else { Group::NotA }).collect();
    (preds, refs, groups)
}

fn metric_oracle() -> Outcome {
    let mut rng = seeded_rng(5, 0);
    let mut mismatches = 0;
    for _ in 0..1000 {
        let n = rng.random_range(1..=200);
        let (preds, refs, groups) = random_instances(&mut rng, n);
        // Independent recount: [group][pred][ref].
        let mut counts = [[[0u64; 2]; 2]; 2];
        for i in 0..n {
            counts[usize::from(groups[i] == Group::NotA)][usize::from(preds[i])][usize::from(refs[i])] += 1;
        }
        let conf = confusion(&preds, &refs, &groups).unwrap();
        for (g, cells) in [conf.a, conf.not_a].iter().enumerate() {
            let c = counts[g];
            if (cells.tp, cells.fp, cells.tn, cells.fn_) != (c[1][1], c[1][0], c[0][0], c[0][1]) {
                mismatches += 1;
            }
            let ref_pos = c[1][1] + c[0][1];
            match rpr_ratio(cells) {
                Ok(r) if ref_pos > 0 => {
                    mismatches += usize::from((r - (c[1][1] + c[1][0]) as f64 / ref_pos as f64).abs() > 1e-12)
                }
                Err(_) if ref_pos == 0 => {}
                _ => mismatches += 1,
            }
        }
        let tpr = |g: usize| {
            let c = counts[g];
            let pos = c[1][1] + c[0][1];
            (pos > 0).then(|| c[1][1] as f64 / pos as f64)
        };
        match (tpr_gap(&conf), tpr(0), tpr(1)) {
            (Ok(gap), Some(a), Some(b)) => mismatches += usize::from((gap.value - (a - b)).abs() > 1e-12),
            (Err(_), None, _) | (Err(_), _, None) => {}
            _ => mismatches += 1,
        }

        let instances: Vec<Instance> = (0..n)
            .map(|i| {
                Instance::new(InstanceId { dataset: 0, row: i as u64 }, vec![0.0], groups[i]).with_decision(preds[i])
            })
            .collect();
        let share = |g: usize| {
            let c = counts[g];
            let total = c.iter().flatten().sum::<u64>();
            (total > 0).then(|| (c[1][0] + c[1][1]) as f64 / total as f64)
        };
        // An empty group is rejected either when building the set or by the gap.
        let sr = DecisionSet::new("h", instances).and_then(|set| selection_rate_gap(&set));
        match (sr, share(0), share(1)) {
            (Ok(gap), Some(a), Some(b)) => mismatches += usize::from((gap.value - (a - b)).abs() > 1e-12),
            (Err(_), None, _) | (Err(_), _, None) => {}
            _ => mismatches += 1,
        }

        let est: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let truth: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mut total = 0.0;
        for i in 0..n {
            total += if est[i] > truth[i] { est[i] - truth[i] } else { truth[i] - est[i] };
        }
        mismatches += usize::from((mae(&est, &truth).unwrap() - total / n as f64).abs() > 1e-12);
    }
    outcome(mismatches == 0, format!("{mismatches} mismatches over 1000 random instance sets of size <= 200"))
}

fn rpr_identity() -> Outcome {
    let mut rng = seeded_rng(6, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..100_000 {
        let cells = Cells {
            tp: rng.random_range(1..1000),
            fp: rng.random_range(0..1000),
            tn: rng.random_range(0..1000),
            fn_: rng.random_range(0..1000),
        };
        let lhs = rpr_ratio(&cells).unwrap();
        let rhs = cells.tpr().unwrap() / cells.ppv().unwrap();
        worst = worst.max((lhs - rhs).abs());
    }
    outcome(worst <= 1e-12, format!("max |(TP+FP)/(TP+FN) - TPR/PPV| {worst:.2e} over 100000 confusions (limit 1e-12)"))
}

fn gradient_check() -> Outcome {
    let mut rng = seeded_rng(7, 0);
    let mut worst: f64 = 0.0;
    let h = 1e-6;
    for _ in 0..100 {
        let n = rng.random_range(5..60);
        let d = rng.random_range(1..8);
        let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..d).map(|_| rng.random_range(-2.0..2.0)).collect()).collect();
        let targets: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
        let obj = LogisticObjective { rows: &rows, targets: &targets, l2: rng.random_range(0.0..0.1) };
        let w: Vec<f64> = (0..d).map(|_| rng.random_range(-1.5..1.5)).collect();
        let b = rng.random_range(-1.0..1.0);
        let (gw, gb) = obj.gradient(&w, b);
        let mut analytic = gw;
        analytic.push(gb);
        let mut numeric = Vec::with_capacity(d + 1);
        for j in 0..d {
            let (mut up, mut down) = (w.clone(), w.clone());
            up[j] += h;
            down[j] -= h;
            numeric.push((obj.loss(&up, b) - obj.loss(&down, b)) / (2.0 * h));
        }
        numeric.push((obj.loss(&w, b + h) - obj.loss(&w, b - h)) / (2.0 * h));
        let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let diff: Vec<f64> = analytic.iter().zip(&numeric).map(|(a, b)| a - b).collect();
        let rel = norm(&diff) / (norm(&analytic) + norm(&numeric)).max(1e-12);
        worst = worst.max(rel);
    }
    outcome(worst < 1e-6, format!("max relative error {worst:.2e} over 100 problems (limit 1e-6)"))
}

fn confident_joint_sanity() -> Outcome {
    // 50 positives and 50 negatives with well separated, calibrated scores.
    let probs: Vec<f64> = (0..100)
        .map(|i| if i < 50 { 0.70 + 0.005 * i as f64 } else { 0.05 + 0.005 * (i - 50) as f64 })
        .collect();
    let clean: Vec<bool> = (0..100).map(|i| i < 50).collect();
    let joint = cl_confident_joint(&probs, &clean).unwrap();
    let clean_ok = joint.off_diagonal() == 0;

    // Flip the five examples the model is most sure about, so each one's
    // given label is the class it is most confidently not.
    let mut order: Vec<usize> = (0..100).collect();
    order.sort_by(|&i, &j| {
        let conf = |k: usize| probs[k].max(1.0 - probs[k]);
        conf(j).total_cmp(&conf(i)).then(i.cmp(&j))
    });
    let planted: Vec<usize> = order[..5].to_vec();
    let mut noisy = clean.clone();
    for &i in &planted {
        noisy[i] = !noisy[i];
    }
    let joint = cl_confident_joint(&probs, &noisy).unwrap();
    let flagged: Vec<usize> = (0..100).filter(|&i| joint.is_flagged(i, noisy[i])).collect();
    let planted_ok = joint.off_diagonal() == 5 && flagged == {
        let mut p = planted.clone();
        p.sort();
        p
    };
    outcome(
        clean_ok && planted_ok,
        format!(
            "clean off-diagonal {}; planted 5 flips, off-diagonal {}, flagged set matches: {}",
            if clean_ok { 0 } else { 1 },
            joint.off_diagonal(),
            planted_ok
        ),
    )
}

fn ablation(mdba_maes: &[f64], naive_maes: &[f64]) -> Outcome {
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (m_easy, n_easy) = (mean(mdba_maes), mean(naive_maes));
    let easy_ok = (m_easy - n_easy).abs() < 0.01;

    let config = ExperimentConfig {
        bias_kinds: vec![BiasKind::IncorrectOrdering],
        methods: vec![Method::Mdba, Method::MdbaNaive],
        ..grid_config()
    };
    let report = run_experiment(&config).unwrap();
    let m = report.cell(0.2, BiasKind::IncorrectOrdering, 200, Method::Mdba).unwrap();
    let n = report.cell(0.2, BiasKind::IncorrectOrdering, 200, Method::MdbaNaive).unwrap();
    let (m_hard, n_hard) = (m.mean_mae.unwrap_or(f64::NAN), n.mean_mae.unwrap_or(f64::NAN));
    let p = report.comparisons.first().and_then(|c| c.paired.p_value).unwrap_or(f64::NAN);
    let hard_ok = m.n_failed == 0 && n.n_failed == 0 && m_hard <= n_hard;
    outcome(
        easy_ok && hard_ok,
        format!(
            "well-specified: MDBA {m_easy:.4} vs naive {n_easy:.4} (|diff| limit 0.01); \
             incorrect ordering, 20 iterations: MDBA {m_hard:.4} vs naive {n_hard:.4} (paired-t p {p:.2e}, required MDBA <= naive)"
        ),
    )
}

fn identical_dirs(a: &Path, b: &Path) -> (bool, usize) {
    let mut names: Vec<_> = fs::read_dir(a).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    let other = fs::read_dir(b).unwrap().count();
    let same = names.len() == other
        && names.iter().all(|n| fs::read(a.join(n)).ok() == fs::read(b.join(n)).ok());
    (same, names.len())
}

fn main() {
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();
    let mut record = |id, name, o: Outcome| {
        println!("criterion {id:>2} [{}] {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        results.push((id, name, o));
    };

    record(1, "recovery on a well-specified world", recovery());
    let (mut mdba_easy, mut naive_easy) = (Vec::new(), Vec::new());
    record(2, "ranking on well-specified worlds", ranking(&mut mdba_easy, &mut naive_easy));

    let first_dir = tempfile::tempdir().unwrap();
    let start = Instant::now();
    let report = run_experiment(&grid_config()).unwrap();
    let elapsed = start.elapsed();
    emit_report(&report, first_dir.path()).unwrap();
    record(3, "MDBA beats SR and CL on correct ordering", directional(&report, elapsed));

    record(4, "simulation fidelity", fidelity());
    record(5, "metric oracle equivalence", metric_oracle());
    record(6, "RPR identity", rpr_identity());
    record(7, "logistic gradient check", gradient_check());
    record(8, "confident joint sanity", confident_joint_sanity());
    record(9, "ablation consistency", ablation(&mdba_easy, &naive_easy));

    let second_dir = tempfile::tempdir().unwrap();
    let rerun = run_experiment(&grid_config()).unwrap();
    emit_report(&rerun, second_dir.path()).unwrap();
    let (same, files) = identical_dirs(first_dir.path(), second_dir.path());
    record(10, "deterministic re-run", outcome(same, format!("{files} report files, byte-identical: {same}")));

    let failed: Vec<u32> = results.iter().filter(|r| !r.2.pass).map(|r| r.0).collect();
    println!(
        "acceptance: {} of {} criteria passed{}",
        results.len() - failed.len(),
        results.len(),
        if failed.is_empty() { String::new() } else { format!("; failed: {failed:?}") }
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
