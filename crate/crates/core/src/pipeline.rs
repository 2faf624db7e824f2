//! End-to-end inference: SSP → MCP → magnitude → HMSF → global pooling →
//! MLP, with per-stage timing.

use std::time::Instant;

use crate::baseline::{baseline_features, BaselineOutput};
use crate::error::{mismatch, Result};
use crate::flops::{flop_estimate, working_set_bytes, FlopBreakdown};
use crate::hmsf::{global_features, multiscale, FeatureVector, MultiScale};
use crate::mcp::{refine_motion, MotionOutput};
use crate::profile::Profile;
use crate::radar::{build_axis_maps, derive_params, AxisMaps, RadarConfig};
use crate::regressor::{prn_forward, MlpWeights};
use crate::ssp::{apply_spatial_mask, build_spatial_mask, SpatialMask};
use crate::tensor::{magnitude, CubeDims, Pose, RadCube};

pub const STAGES: [&str; 5] = ["io", "ssp", "mcp", "hmsf", "prn"];

#[derive(Debug, Clone, PartialEq)]
pub struct StageTiming {
    pub name: &'static str,
    pub seconds: f64,
    pub percent: f64,
    pub flops: u64,
    pub bytes: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StageReport {
    pub stages: Vec<StageTiming>,
}

impl StageReport {
    /// Builds a report from raw seconds in [`STAGES`] order.
    pub fn from_seconds(seconds: [f64; 5], flops: [u64; 5], bytes: [u64; 5]) -> Self {
        let total: f64 = seconds.iter().sum();
        let stages = STAGES
            .iter()
            .enumerate()
            .map(|(i, &name)| StageTiming {
                name,
                seconds: seconds[i],
                percent: if total > 0.0 {
                    100.0 * seconds[i] / total
                } else {
                    100.0 / STAGES.len() as f64
                },
                flops: flops[i],
                bytes: bytes[i],
            })
            .collect();
        Self { stages }
    }

    pub fn stage(&self, name: &str) -> Option<&StageTiming> {
        self.stages.iter().find(|s| s.name == name)
    }

    pub fn total_seconds(&self) -> f64 {
        self.stages.iter().map(|s| s.seconds).sum()
    }

    pub fn total_percent(&self) -> f64 {
        self.stages.iter().map(|s| s.percent).sum()
    }
}

/// Every intermediate of one front-end pass.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontEnd {
    pub spatial_cube: RadCube,
    pub motion: MotionOutput,
    pub scales: MultiScale,
    pub features: FeatureVector,
}

/// A profile bound to a radar geometry, with the spatial mask precomputed.
#[derive(Debug, Clone)]
pub struct Pipeline {
    profile: Profile,
    axes: AxisMaps,
    spatial_mask: SpatialMask,
    flops: FlopBreakdown,
    bytes: [u64; 5],
}

impl Pipeline {
    pub fn new(cfg: &RadarConfig, profile: Profile, range_bins: usize) -> Result<Self> {
        let params = derive_params(cfg)?;
        let axes = build_axis_maps(cfg, &params, range_bins)?;
        Self::with_axes(axes, profile)
    }

    pub fn with_axes(axes: AxisMaps, profile: Profile) -> Result<Self> {
        profile.validate()?;
        let spatial_mask = build_spatial_mask(&profile.spatial_bounds()?, &axes);
        let joints = 14;
        let flops = flop_estimate(&profile, &axes, joints)?;
        let [s, m, h, p] = working_set_bytes(&profile, dims_of(&axes), joints)?;
        Ok(Self {
            profile,
            axes,
            spatial_mask,
            flops,
            bytes: [0, s, m, h, p],
        })
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn axes(&self) -> &AxisMaps {
        &self.axes
    }

    pub fn spatial_mask(&self) -> &SpatialMask {
        &self.spatial_mask
    }

    pub fn flops(&self) -> &FlopBreakdown {
        &self.flops
    }

    pub fn dims(&self) -> CubeDims {
        dims_of(&self.axes)
    }

    fn check(&self, cube: &RadCube) -> Result<()> {
        if cube.dims() != self.dims() {
            return Err(mismatch(self.dims(), cube.dims()));
        }
        Ok(())
    }

    fn stage_flops(&self) -> [u64; 5] {
        let f = &self.flops;
        [0, f.ssp(), f.mcp(), f.hmsf(), f.prn()]
    }

    /// Front end only, with (ssp, mcp, hmsf) seconds.
    pub fn front_end_timed(&self, cube: &RadCube) -> Result<(FrontEnd, [f64; 3])> {
        self.check(cube)?;
        let t0 = Instant::now();
        let spatial_cube = apply_spatial_mask(cube, &self.spatial_mask)?;
        let t1 = Instant::now();
        let motion = refine_motion(
            &spatial_cube,
            &self.spatial_mask,
            &self.axes,
            &self.profile.doppler,
            self.profile.window_radius,
        )?;
        let t2 = Instant::now();
        let fine = magnitude(&motion.motion_cube);
        let scales = multiscale(&fine, self.profile.pool)?;
        let features = global_features(&scales.fused, &motion.descriptors, self.profile.grid)?;
        let t3 = Instant::now();
        let secs = [
            (t1 - t0).as_secs_f64(),
            (t2 - t1).as_secs_f64(),
            (t3 - t2).as_secs_f64(),
        ];
        Ok((
            FrontEnd {
                spatial_cube,
                motion,
                scales,
                features,
            },
            secs,
        ))
    }

    pub fn front_end(&self, cube: &RadCube) -> Result<FrontEnd> {
        Ok(self.front_end_timed(cube)?.0)
    }

    pub fn features(&self, cube: &RadCube) -> Result<FeatureVector> {
        Ok(self.front_end(cube)?.features)
    }

    /// Full inference. The `io` stage is reported as zero here; the bench
    /// harness fills it with decode time.
    pub fn run(&self, cube: &RadCube, weights: &MlpWeights) -> Result<(Pose, StageReport)> {
        self.run_with_io(cube, weights, 0.0)
    }

    pub fn run_with_io(&self, cube: &RadCube, weights: &MlpWeights, io_seconds: f64) -> Result<(Pose, StageReport)> {
        let (front, [ssp, mcp, hmsf]) = self.front_end_timed(cube)?;
        let t = Instant::now();
        let pose = prn_forward(weights, &front.features)?;
        let prn = t.elapsed().as_secs_f64();
        let report = StageReport::from_seconds([io_seconds, ssp, mcp, hmsf, prn], self.stage_flops(), self.bytes);
        Ok((pose, report))
    }

    /// Classical CFAR front end on the same ROI and pooling grid.
    pub fn baseline(&self, cube: &RadCube) -> Result<BaselineOutput> {
        self.check(cube)?;
        baseline_features(
            cube,
            &self.spatial_mask,
            &self.profile.cfar,
            (self.profile.grid.r, self.profile.grid.a),
        )
    }
}

fn dims_of(axes: &AxisMaps) -> CubeDims {
    CubeDims::new(axes.range_bins(), axes.angle_bins(), axes.doppler_bins())
}
