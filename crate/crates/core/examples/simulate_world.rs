//! Build both kinds of biased world, print achieved TPRs and save one to disk.

use mdba::simulate::{build_world, BiasKind, ScenarioSpec, SimulatedWorld};
use mdba::synth::{generate, SyntheticConfig};

fn main() -> mdba::Result<()> {
    let dataset = generate(&SyntheticConfig::default())?;
    for kind in [BiasKind::CorrectOrdering, BiasKind::IncorrectOrdering] {
        let world = build_world(&dataset, &ScenarioSpec { bias_kind: kind, ..ScenarioSpec::default() }, 0)?;
        println!("{kind}:");
        for h in &world.humans {
            println!(
                "  {} tpr_a {:.3} (target {:.3}) tpr_~a {:.3} gap {:+.3}",
                h.id, h.tpr_a.achieved, h.tpr_a.target, h.tpr_not_a.achieved, h.true_gap
            );
        }
        if kind == BiasKind::CorrectOrdering {
            let dir = std::env::temp_dir().join("mdba_example_world");
            world.save(&dir)?;
            let back = SimulatedWorld::load(&dir)?;
            println!("  saved to {} and reloaded {} humans", dir.display(), back.humans.len());
        }
    }
    Ok(())
}
