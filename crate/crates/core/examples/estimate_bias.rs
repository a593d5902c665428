//! Simulate ten decision-makers with known TPR gaps, then recover the gaps
//! from their decisions and a 200-per-group gold pool.

use mdba::mdba::{collect_outcomes, estimate_bias, MdbaConfig};
use mdba::simulate::{build_world, ScenarioSpec};
use mdba::synth::{generate, SyntheticConfig};

fn main() -> mdba::Result<()> {
    let dataset = generate(&SyntheticConfig::default())?;
    let world = build_world(&dataset, &ScenarioSpec::default(), 1)?;
    let sets = world.decision_sets()?;
    let gold = world.gold_pool(200)?;

    let mdba = collect_outcomes(estimate_bias(&sets, &gold, &MdbaConfig::default())?)?;
    let naive = collect_outcomes(estimate_bias(&sets, &gold, &MdbaConfig::naive())?)?;

    println!("{:<10} {:>8} {:>8} {:>8} {:>6}", "human", "true", "MDBA", "naive", "pairs");
    for ((h, m), n) in world.humans.iter().zip(&mdba).zip(&naive) {
        println!(
            "{:<10} {:>8.3} {:>8.3} {:>8.3} {:>6}",
            h.id,
            h.true_gap,
            m.gap.value,
            n.gap.value,
            m.thresholds_used.len()
        );
    }
    let truths = world.true_gaps();
    let est = |v: &[mdba::BiasEstimate]| v.iter().map(|e| e.gap.value).collect::<Vec<_>>();
    println!("MAE: MDBA {:.4}, naive {:.4}", mdba::metrics::mae(&est(&mdba), &truths)?, mdba::metrics::mae(&est(&naive), &truths)?);
    Ok(())
}
