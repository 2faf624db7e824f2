//! Write and re-read each binary format plus a metrics record.

use radpose::io::{read_cubes, read_pose_set, read_weights, write_cube, write_pose_set, write_weights};
use radpose::records::MetricsRecord;
use radpose::regressor::{MlpShape, MlpWeights};
use radpose::{MotionParams, RadarConfig, SkeletonSequence};

fn main() -> radpose::Result<()> {
    let seq = SkeletonSequence::new(RadarConfig::hupr_tdm(), MotionParams::default(), 9)?;
    let (cubes, poses) = seq.frames(3)?;

    let mut radc = Vec::new();
    for c in &cubes {
        write_cube(c, &mut radc)?;
    }
    let mut pose = Vec::new();
    write_pose_set(&poses, &mut pose)?;
    let w = MlpWeights::init(MlpShape::new(99, 8, 8, 42)?, 1);
    let mut prnw = Vec::new();
    write_weights(&w, &mut prnw)?;

    let rec = MetricsRecord::new()
        .with("radc_bytes", radc.len())
        .with("pose_bytes", pose.len())
        .with("weights_bytes", prnw.len())
        .with("cubes_equal", (read_cubes(&mut radc.as_slice())? == cubes).to_string())
        .with("poses_equal", (read_pose_set(&mut pose.as_slice())? == poses).to_string())
        .with("weights_equal", (read_weights(&mut prnw.as_slice())? == w.quantized()).to_string());
    println!("{rec}");
    println!("{:?}", &radc[..20]);
    Ok(())
}
