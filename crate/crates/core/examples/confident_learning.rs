//! Flip 10% of labels at random, find them with the confident joint and
//! compare the flip rate before and after pruning.

use mdba::baselines::{cl_clean, ClConfig};
use mdba::learners::LearnerConfig;
use mdba::seeded_rng;
use rand::Rng;
use rand_distr::StandardNormal;

fn main() -> mdba::Result<()> {
    let mut rng = seeded_rng(11, 0);
    let n = 2000;
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..3).map(|_| rng.sample::<f64, _>(StandardNormal)).collect())
        .collect();
    let clean: Vec<bool> = rows.iter().map(|r| 1.5 * r[0] - r[1] + 0.5 * r[2] > 0.3).collect();
    let flipped: Vec<bool> = (0..n).map(|_| rng.random_bool(0.1)).collect();
    let noisy: Vec<bool> = clean.iter().zip(&flipped).map(|(&y, &f)| y ^ f).collect();

    let pool = cl_clean(&rows, &noisy, &LearnerConfig::logistic(), &ClConfig::default())?;
    let kept = pool.keep.iter().filter(|&&k| k).count();
    let kept_flips = (0..n).filter(|&i| pool.keep[i] && flipped[i]).count();
    println!("confident joint {:?}, thresholds {:.3?}", pool.joint.counts, pool.joint.thresholds);
    println!(
        "flip rate {:.3} before, {:.3} after pruning {} examples",
        flipped.iter().filter(|&&f| f).count() as f64 / n as f64,
        kept_flips as f64 / kept as f64,
        pool.pruned()
    );
    Ok(())
}
