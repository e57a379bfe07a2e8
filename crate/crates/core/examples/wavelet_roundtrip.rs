//! One level of the 2-D Haar transform: sub-band energies and reconstruction.

use fiqa_harness::imageops::{haar_dwt2, haar_idwt2, ImagePlane};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let p = ImagePlane::from_fn(32, 48, |y, x| {
        let edge = if x > 20 { 0.8 } else { 0.2 };
        edge + 0.05 * ((y * 7 + x * 3) % 11) as f64 / 11.0
    })?;
    let q = haar_dwt2(&p)?;
    println!("input energy {:.6}", p.energy());
    for (name, band) in q.bands() {
        println!(
            "  {name}: {:.6} ({:.2}%)",
            band.energy(),
            100.0 * band.energy() / p.energy()
        );
    }
    println!(
        "round-trip max error {:.2e}",
        haar_idwt2(&q).max_abs_diff(&p)
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
