//! Coarse, medium and fine views of one frame and the 99-value feature
//! vector built from them.

use radpose::hmsf::PoolGrid;
use radpose::{MotionParams, Pipeline, Profile, RadarConfig, SkeletonSequence};

fn main() -> radpose::Result<()> {
    let cfg = RadarConfig::hupr_tdm();
    let (cube, _) = SkeletonSequence::new(cfg, MotionParams::default(), 2)?.frame(10)?;
    for profile in [Profile::balanced(), Profile::balanced().with_literal_pooling()] {
        let grid: PoolGrid = profile.grid;
        let front = Pipeline::new(&cfg, profile, 64)?.front_end(&cube)?;
        let s = &front.scales;
        println!("grid {:?}", (grid.r, grid.a, grid.d));
        println!("  coarse {:?}", s.coarse_pooled);
        println!("  medium {:?}", s.medium_pooled);
        println!("  fused  {} channels x {:?}", s.fused.channels(), s.fused.dims());
        let f = &front.features.values;
        println!("  {} features, first {:.4?}", f.len(), &f[..3.min(f.len())]);
    }
    Ok(())
}
