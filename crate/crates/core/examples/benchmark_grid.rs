//! A small seeded comparison of all estimators, written as report files.

use mdba::harness::{emit_report, run_experiment, ExperimentConfig};
use mdba::mdba::Method;
use mdba::simulate::BiasKind;

fn main() -> mdba::Result<()> {
    let config = ExperimentConfig {
        prevalences: vec![0.2],
        bias_kinds: vec![BiasKind::CorrectOrdering],
        gs_sizes: vec![100, 200],
        iterations: 3,
        methods: Method::ALL.to_vec(),
        ..ExperimentConfig::default()
    };
    let report = run_experiment(&config)?;
    for c in &report.cells {
        println!(
            "{} gs={} {:<10} mean MAE {:.4} [{:.4}, {:.4}]",
            c.key.bias_kind,
            c.key.gs_size,
            c.key.method.name(),
            c.mean_mae.unwrap_or(f64::NAN),
            c.ci_low.unwrap_or(f64::NAN),
            c.ci_high.unwrap_or(f64::NAN)
        );
    }
    for c in &report.comparisons {
        println!(
            "gs={} MDBA vs {}: improvement {:.1}% p {:.3} {}",
            c.gs_size,
            c.other,
            c.paired.improvement_pct.unwrap_or(f64::NAN),
            c.paired.p_value.unwrap_or(f64::NAN),
            c.paired.stars
        );
    }
    let dir = std::env::temp_dir().join("mdba_example_report");
    for path in emit_report(&report, &dir)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}
