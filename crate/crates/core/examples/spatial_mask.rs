//! Region-of-interest size for every built-in profile, and what it does to
//! a cube's energy.

use radpose::ssp::apply_spatial_mask;
use radpose::{MotionParams, Pipeline, Profile, RadarConfig, SkeletonSequence};

fn main() -> radpose::Result<()> {
    let cfg = RadarConfig::hupr_tdm();
    let (cube, _) = SkeletonSequence::new(cfg, MotionParams::default(), 1)?.frame(0)?;
    for profile in Profile::builtins() {
        let name = profile.name.clone();
        let p = Pipeline::new(&cfg, profile, 64)?;
        let kept = apply_spatial_mask(&cube, p.spatial_mask())?;
        println!(
            "{name:>16}: {:>4} of {} cells, energy kept {:.1}%",
            p.spatial_mask().count(),
            64 * 64,
            100.0 * kept.energy() / cube.energy()
        );
    }
    Ok(())
}
