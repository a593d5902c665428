//! Logistic regression and boosted trees on XOR, plus a model round trip
//! through its JSON document.

use mdba::learners::{BoostedTreesConfig, LearnerConfig, ModelDocument, ProbClassifier};

fn main() -> mdba::Result<()> {
    let rows = vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0]];
    let targets = vec![false, true, true, false];
    let trees = LearnerConfig::BoostedTrees(BoostedTreesConfig { n_trees: 50, max_depth: 2, min_leaf: 1, ..Default::default() });

    for (name, learner) in [("logistic", LearnerConfig::logistic()), ("boosted trees", trees)] {
        let model = learner.fit(&rows, &targets)?;
        let probs = model.predict_proba(&rows)?;
        let correct = probs.iter().zip(&targets).filter(|(&p, &y)| (p >= 0.5) == y).count();
        println!("{name}: probabilities {:.3?}, accuracy {}/4", probs, correct);

        let text = ModelDocument::new(model.clone()).to_json()?;
        let back = ModelDocument::from_json(&text)?;
        println!("  document {} bytes, round trip identical: {}", text.len(), back.model == model);
    }
    Ok(())
}
