//! Train the regressor on a simulated walk and score the held-out frames.
//!
//! ```text
//! cargo run --release --example pose_regression -- 200 40
//! ```

use rayon::prelude::*;

use radpose::experiment::{evaluate, holdout_split, mean_pose_baseline};
use radpose::regressor::train;
use radpose::simulator::make_skeleton_dataset;
use radpose::{FeatureVector, MotionParams, Pipeline, Profile, RadarConfig, TrainConfig};

fn main() -> radpose::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().expect("integer argument"));
    let frames = args.next().unwrap_or(500);
    let epochs = args.next().unwrap_or(100);

    let cfg = RadarConfig::hupr_tdm();
    let (cubes, poses) = make_skeleton_dataset(frames, MotionParams::default(), &cfg, 42)?;
    let pipeline = Pipeline::new(&cfg, Profile::balanced(), 64)?;
    let features: Vec<FeatureVector> = cubes.par_iter().map(|c| pipeline.features(c)).collect::<radpose::Result<_>>()?;

    let (train_x, test_x) = holdout_split(&features);
    let (train_y, test_y) = holdout_split(&poses);
    let report = train(&train_x, &train_y, &TrainConfig { epochs, ..TrainConfig::default() })?;
    let trace = &report.loss_trace;
    println!("loss {:.0} -> {:.0} mm^2 over {epochs} epochs", trace[0], trace[trace.len() - 1]);

    let ours = evaluate(&report.weights, &test_x, &test_y)?;
    let mean = mean_pose_baseline(&train_y, &test_y)?;
    println!("held-out: {}", ours.record());
    println!("mean pose: {}", mean.record());
    Ok(())
}
