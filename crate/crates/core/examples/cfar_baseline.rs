//! The classical front end on one frame: CFAR hits before and after the
//! morphological clean-up.

use radpose::baseline::{baseline_features, CfarParams};
use radpose::{MotionParams, Pipeline, Profile, RadarConfig, SkeletonSequence};

fn main() -> radpose::Result<()> {
    let cfg = RadarConfig::hupr_tdm();
    let (cube, _) = SkeletonSequence::new(cfg, MotionParams::default(), 5)?.frame(3)?;
    let p = Pipeline::new(&cfg, Profile::balanced(), 64)?;
    for (label, params) in [("default", CfarParams::default()), ("extended", CfarParams::extended_target())] {
        let out = baseline_features(&cube, p.spatial_mask(), &params, (4, 4))?;
        println!(
            "{label:>9} {params:?}: {} raw hits, {} after open/close",
            out.raw_detections.count(),
            out.detections.count()
        );
        for row in 0..64 {
            let line: String = (0..64).map(|a| if *out.detections.get(row, a) { '#' } else { '.' }).collect();
            if line.contains('#') {
                println!("  r{row:02} {line}");
            }
        }
    }
    Ok(())
}
