//! Per-stage latency for the lightest and heaviest profiles.
//!
//! ```text
//! cargo run --release --example latency_bench -- 200
//! ```

use radpose::bench::{bench, BenchConfig};
use radpose::io::write_cube;
use radpose::regressor::{MlpShape, MlpWeights};
use radpose::simulator::make_skeleton_dataset;
use radpose::{MotionParams, Pipeline, Profile, RadarConfig};

fn main() -> radpose::Result<()> {
    let reps = std::env::args().nth(1).map_or(100, |s| s.parse().expect("reps"));
    let cfg = RadarConfig::hupr_tdm();
    let (cubes, _) = make_skeleton_dataset(20, MotionParams::default(), &cfg, 0)?;
    let mut bytes = Vec::new();
    for c in &cubes {
        write_cube(c, &mut bytes)?;
    }
    for profile in [Profile::ultra_light(), Profile::ultra_precision()] {
        let shape = MlpShape::new(profile.grid.feature_len(), profile.hidden1, profile.hidden2, 42)?;
        let p = Pipeline::new(&cfg, profile, 64)?;
        let summary = bench(&bytes, &p, &MlpWeights::init(shape, 0), BenchConfig { reps, warmup: 10 })?;
        println!("{}", summary.profile);
        for s in &summary.stages {
            println!("  {:>5} {:>8.3} ± {:.3} ms {:>5.1}%", s.name, s.mean_ms, s.std_ms, s.percent);
        }
        println!("  total {:.3} ms", summary.total_mean_ms());
    }
    Ok(())
}
