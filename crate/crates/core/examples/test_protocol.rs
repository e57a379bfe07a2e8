//! Test-time geometry: short-side resize with a center crop, and the
//! random-patch protocol with score aggregation.

use fiqa_harness::imageops::{
    aggregate_patch_scores, bilinear_resize, center_crop, random_crops, resize_short_side,
    ImagePlane,
};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let (h, w) = resize_short_side(480, 640, 288);
    let crop = center_crop(h, w, 288, 288)?;
    println!(
        "480x640 -> {h}x{w}, center crop at ({}, {})",
        crop.top, crop.left
    );

    let img = ImagePlane::from_fn(480, 640, |y, x| ((y / 40 + x / 40) % 2) as f64 * 0.6 + 0.2)?;
    let resized = bilinear_resize(&img, h, w);
    let center = resized.crop(crop)?;
    println!("center crop {}x{}", center.height(), center.width());

    // the patch "score" is just mean brightness here
    let patches = random_crops(h, w, 224, 224, 20, 1)?;
    let scores: Vec<f64> = patches
        .iter()
        .map(|r| {
            let p = resized.crop(*r).unwrap();
            p.data().iter().sum::<f64>() / p.data().len() as f64
        })
        .collect();
    println!(
        "20 patches, aggregated score {:.4}",
        aggregate_patch_scores(&scores)?
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
