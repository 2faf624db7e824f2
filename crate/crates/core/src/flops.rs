//! Analytic operation counts and working-set estimates per stage.
//!
//! | term        | count                                              |
//! |-------------|----------------------------------------------------|
//! | masks       | `2·R·A` comparisons (spatial + Doppler)            |
//! | argmax      | `R·A·D`                                            |
//! | local stats | `N_roi·(2R_w+1)²·2` (mean and variance passes)     |
//! | pooling     | one multiply-add per covered cell, per scale, plus the global pool over 3 channels |
//! | upsampling  | `2·R·A·D·8` (two scales, 8 MACs per output cell)   |
//! | MLP         | `2·param_count`                                    |
//!
//! `N_roi` is the number of cells inside the profile's spatial ROI, which is
//! where local statistics are evaluated.

use crate::error::Result;
use crate::hmsf::{pooled_dims, PoolGrid};
use crate::profile::Profile;
use crate::radar::AxisMaps;
use crate::regressor::{param_count, MlpShape};
use crate::ssp::build_spatial_mask;
use crate::tensor::CubeDims;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FlopBreakdown {
    pub masks: u64,
    pub argmax: u64,
    pub local_stats: u64,
    pub pooling: u64,
    pub upsampling: u64,
    pub mlp: u64,
}

impl FlopBreakdown {
    pub fn total(&self) -> u64 {
        self.masks + self.argmax + self.local_stats + self.pooling + self.upsampling + self.mlp
    }

    pub fn ssp(&self) -> u64 {
        self.masks / 2
    }

    pub fn mcp(&self) -> u64 {
        self.masks - self.masks / 2 + self.argmax + self.local_stats
    }

    pub fn hmsf(&self) -> u64 {
        self.pooling + self.upsampling
    }

    pub fn prn(&self) -> u64 {
        self.mlp
    }
}

fn covered(dims: CubeDims, kernel: [usize; 3]) -> u64 {
    let out = pooled_dims(dims, kernel);
    let eff = |k: usize, n: usize| k.min(n).max(1);
    (out.range * eff(kernel[0], dims.range)) as u64
        * (out.angle * eff(kernel[1], dims.angle)) as u64
        * (out.doppler * eff(kernel[2], dims.doppler)) as u64
}

/// MLP shape implied by a profile for `joints` output joints.
pub fn profile_mlp_shape(profile: &Profile, joints: usize) -> Result<MlpShape> {
    MlpShape::new(profile.grid.feature_len(), profile.hidden1, profile.hidden2, 3 * joints)
}

/// Closed-form operation count for one frame under `profile`.
pub fn flop_estimate(profile: &Profile, axes: &AxisMaps, joints: usize) -> Result<FlopBreakdown> {
    let dims = CubeDims::new(axes.range_bins(), axes.angle_bins(), axes.doppler_bins());
    let (r, a, d) = (dims.range as u64, dims.angle as u64, dims.doppler as u64);
    let roi = build_spatial_mask(&profile.spatial_bounds()?, axes).count() as u64;
    let w = 2 * profile.window_radius as u64 + 1;
    let grid: PoolGrid = profile.grid;
    let global_kernel = grid.kernel_for(dims)?;
    let s = profile.pool;
    Ok(FlopBreakdown {
        masks: 2 * r * a,
        argmax: r * a * d,
        local_stats: roi * w * w * 2,
        pooling: covered(dims, [s.s_c; 3]) + covered(dims, [s.s_m; 3]) + 3 * covered(dims, global_kernel),
        upsampling: 2 * r * a * d * 8,
        mlp: 2 * param_count(&profile_mlp_shape(profile, joints)?),
    })
}

/// Rough peak bytes held live by each stage: (ssp, mcp, hmsf, prn).
pub fn working_set_bytes(profile: &Profile, dims: CubeDims, joints: usize) -> Result<[u64; 4]> {
    let cells = dims.len() as u64;
    let plane = (dims.range * dims.angle) as u64;
    let complex = 8 * cells;
    let real = 8 * cells;
    let shape = profile_mlp_shape(profile, joints)?;
    let activations = 8 * (shape.input + shape.hidden1 + shape.hidden2 + shape.output) as u64;
    Ok([
        2 * complex + plane,
        2 * complex + plane * (8 + 8 + 8 + 8 + 1),
        real * 6,
        8 * param_count(&shape) + activations,
    ])
}
