//! Per-group threshold search on one human: in-sample scores against
//! cross-fitted scores.

use mdba::learners::{cross_val_proba, LearnerConfig, ProbClassifier};
use mdba::mdba::{find_rpr_thresholds, rpr_thresholds_from_scores};
use mdba::simulate::{build_world, BiasKind, ScenarioSpec};
use mdba::synth::{generate, SyntheticConfig};

fn main() -> mdba::Result<()> {
    let dataset = generate(&SyntheticConfig::default())?;
    let spec = ScenarioSpec { bias_kind: BiasKind::IncorrectOrdering, ..ScenarioSpec::default() };
    let world = build_world(&dataset, &spec, 3)?;
    let set = world.humans[2].decision_set()?;

    let learner = LearnerConfig::default();
    let model = learner.fit(&set.design_rows(), &set.decisions())?;
    let in_sample = find_rpr_thresholds(&model, &set, 1.0, 0.01)?;
    let oof = cross_val_proba(&learner, &set.design_rows(), &set.decisions(), 5, 0)?;
    let cross_fitted = rpr_thresholds_from_scores(&oof, &set, 1.0, 0.01)?;

    for (name, t) in [("in-sample", &in_sample), ("cross-fitted", &cross_fitted)] {
        println!("{name}:");
        for g in [&t.a, &t.not_a] {
            println!(
                "  group {:<2} thresholds {:?} ratio {:.3}{}",
                g.group.label(),
                g.thresholds.iter().map(|x| (x * 1000.0).round() / 1000.0).collect::<Vec<_>>(),
                g.mean_attained(),
                if g.nearest_fallback { " (nearest)" } else { "" }
            );
        }
    }
    println!("model arity {}", model.n_features());
    Ok(())
}
