//! Builds score strata over a skewed MOS distribution and draws a balanced
//! training stream from them.

use fiqa_harness::sampling::{build_strata, draw, tail_oversample, DEFAULT_BINS};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    // most faces are mid quality; the tails are rare
    let items: Vec<(String, f64)> = (0..200)
        .map(|i| {
            let u = i as f64 / 199.0;
            (format!("face{i:03}"), 0.5 + 0.45 * (2.0 * u - 1.0).powi(5))
        })
        .collect();
    let items = tail_oversample(&items, 0.1, 0.9, 3)?;
    let plan = draw(&build_strata(&items, DEFAULT_BINS)?, 10_000, 7)?;

    let mut counts = vec![0usize; plan.num_bins()];
    for (b, _) in plan.draws() {
        counts[*b] += 1;
    }
    for (b, members) in plan.bins().iter().enumerate() {
        println!(
            "[{:.1}, {:.1}{} {:>3} items, {:>5} draws",
            plan.bin_edges()[b],
            plan.bin_edges()[b + 1],
            if b + 1 == plan.num_bins() { "]" } else { ")" },
            members.len(),
            counts[b]
        );
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
