//! Scores a prediction series against ground truth the way the challenge does.

use fiqa_harness::metrics::{average_ranks, challenge_score, plcc, srocc};
use fiqa_harness::ScoreSeries;

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    // a model that is right about the order but compresses the scale
    let gt = [0.12, 0.35, 0.35, 0.48, 0.61, 0.77, 0.90, 0.95];
    let pred: Vec<f64> = gt.iter().map(|g| 0.3 + 0.4 * g * g).collect();
    let series = ScoreSeries::from_vectors(&pred, &gt)?;

    let s = srocc(&series)?;
    let p = plcc(&series)?;
    println!("ground-truth ranks {:?}", average_ranks(&gt));
    println!(
        "SROCC {s:.4}  PLCC {p:.4}  Score {:.4}",
        challenge_score(s, p)
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
