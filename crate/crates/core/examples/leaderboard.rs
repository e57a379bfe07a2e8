//! Ranks the published challenge results and flags budget violations.

use std::path::Path;

use fiqa_harness::io::{leaderboard_csv, read_team_results};
use fiqa_harness::metrics::build_leaderboard;

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data/table1.csv");
    let board = build_leaderboard(&read_team_results(path)?)?;
    print!("{}", leaderboard_csv(&board));
    for e in board.iter().filter(|e| !(e.flops_ok() && e.params_ok())) {
        println!(
            "{} breaks the budget: {:.4} GFLOPs, {:.4}M params",
            e.team, e.gflops, e.params_millions
        );
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
