//! Hierarchical multi-scale fusion of magnitude cubes.

use crate::error::{mismatch, Error, Result};
use crate::mcp::MotionDescriptors;
use crate::tensor::{CubeDims, RealCube};

/// Coarse and medium pooling kernels, applied as a scalar per axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PoolSpec {
    pub s_c: usize,
    pub s_m: usize,
}

impl PoolSpec {
    pub fn new(s_c: usize, s_m: usize) -> Result<Self> {
        if s_c == 0 || s_m == 0 {
            return Err(Error::InvalidArgument("pooling kernels must be >= 1".into()));
        }
        Ok(Self { s_c, s_m })
    }
}

/// Target grid for global feature pooling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PoolGrid {
    pub r: usize,
    pub a: usize,
    pub d: usize,
}

impl PoolGrid {
    pub const DEFAULT: PoolGrid = PoolGrid { r: 4, a: 4, d: 2 };
    pub const LITERAL: PoolGrid = PoolGrid { r: 1, a: 1, d: 1 };

    pub fn new(r: usize, a: usize, d: usize) -> Result<Self> {
        if r == 0 || a == 0 || d == 0 {
            return Err(Error::InvalidArgument("pooling grid entries must be >= 1".into()));
        }
        Ok(Self { r, a, d })
    }

    pub fn cells(&self) -> usize {
        self.r * self.a * self.d
    }

    /// Length of the feature vector built on this grid.
    pub fn feature_len(&self) -> usize {
        3 * self.cells() + 3
    }

    /// Per-axis kernel that pools `dims` onto this grid.
    pub fn kernel_for(&self, dims: CubeDims) -> Result<[usize; 3]> {
        let k = [dims.range / self.r, dims.angle / self.a, dims.doppler / self.d];
        if k.contains(&0) {
            return Err(Error::InvalidArgument(format!(
                "grid {self:?} is finer than the cube {dims:?}"
            )));
        }
        Ok(k)
    }
}

impl Default for PoolGrid {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Output dims of a non-overlapping pool with per-axis clamped kernels.
pub fn pooled_dims(dims: CubeDims, kernel: [usize; 3]) -> CubeDims {
    let eff = effective_kernel(dims, kernel);
    CubeDims::new(dims.range / eff[0], dims.angle / eff[1], dims.doppler / eff[2])
}

fn effective_kernel(dims: CubeDims, kernel: [usize; 3]) -> [usize; 3] {
    [
        kernel[0].min(dims.range).max(1),
        kernel[1].min(dims.angle).max(1),
        kernel[2].min(dims.doppler).max(1),
    ]
}

/// Scalar-kernel average pool, stride = kernel, no padding.
pub fn avg_pool3(x: &RealCube, k: usize) -> Result<RealCube> {
    avg_pool3_axes(x, [k, k, k])
}

/// Average pool with an independent kernel per (range, angle, Doppler)
/// axis. Kernels are clamped to the axis length; trailing cells that do not
/// fill a whole block are dropped.
pub fn avg_pool3_axes(x: &RealCube, kernel: [usize; 3]) -> Result<RealCube> {
    if kernel.contains(&0) {
        return Err(Error::InvalidArgument("pooling kernel must be >= 1".into()));
    }
    let dims = x.dims();
    let [kr, ka, kd] = effective_kernel(dims, kernel);
    let out_dims = pooled_dims(dims, kernel);
    let mut out = RealCube::zeros(x.channels(), out_dims);
    let norm = (kr * ka * kd) as f64;
    for c in 0..x.channels() {
        for r in 0..out_dims.range {
            for a in 0..out_dims.angle {
                for d in 0..out_dims.doppler {
                    let mut sum = 0.0;
                    for rr in r * kr..(r + 1) * kr {
                        for aa in a * ka..(a + 1) * ka {
                            let base = x.index(c, rr, aa, d * kd);
                            sum += x.data()[base..base + kd].iter().sum::<f64>();
                        }
                    }
                    out.set(c, r, a, d, sum / norm);
                }
            }
        }
    }
    Ok(out)
}

/// Source index pair and blend weight for one output coordinate.
fn sample_axis(i: usize, src: usize, dst: usize) -> (usize, usize, f64) {
    let s = ((i as f64 + 0.5) * (src as f64 / dst as f64) - 0.5).clamp(0.0, (src - 1) as f64);
    let lo = s.floor() as usize;
    let hi = (lo + 1).min(src - 1);
    (lo, hi, s - lo as f64)
}

fn lerp(a: f64, b: f64, w: f64) -> f64 {
    a + w * (b - a)
}

/// Trilinear upsampling with half-pixel centres.
pub fn upsample_trilinear(x: &RealCube, target: CubeDims) -> Result<RealCube> {
    let src = x.dims();
    if target.range < src.range || target.angle < src.angle || target.doppler < src.doppler {
        return Err(Error::InvalidArgument(format!(
            "upsample target {target:?} smaller than source {src:?}"
        )));
    }
    if src.is_empty() {
        return Err(Error::InvalidArgument("cannot upsample an empty cube".into()));
    }
    let rs: Vec<_> = (0..target.range).map(|i| sample_axis(i, src.range, target.range)).collect();
    let as_: Vec<_> = (0..target.angle).map(|i| sample_axis(i, src.angle, target.angle)).collect();
    let ds: Vec<_> = (0..target.doppler).map(|i| sample_axis(i, src.doppler, target.doppler)).collect();
    let mut out = RealCube::zeros(x.channels(), target);
    for c in 0..x.channels() {
        for (r, &(r0, r1, wr)) in rs.iter().enumerate() {
            for (a, &(a0, a1, wa)) in as_.iter().enumerate() {
                for (d, &(d0, d1, wd)) in ds.iter().enumerate() {
                    let v = |rr, aa, dd| x.get(c, rr, aa, dd);
                    let c00 = lerp(v(r0, a0, d0), v(r0, a0, d1), wd);
                    let c01 = lerp(v(r0, a1, d0), v(r0, a1, d1), wd);
                    let c10 = lerp(v(r1, a0, d0), v(r1, a0, d1), wd);
                    let c11 = lerp(v(r1, a1, d0), v(r1, a1, d1), wd);
                    let c0 = lerp(c00, c01, wa);
                    let c1 = lerp(c10, c11, wa);
                    out.set(c, r, a, d, lerp(c0, c1, wr));
                }
            }
        }
    }
    Ok(out)
}

/// Stacks three single-channel cubes as channels (coarse, medium, fine).
pub fn fuse(coarse: &RealCube, medium: &RealCube, fine: &RealCube) -> Result<RealCube> {
    let dims = fine.dims();
    for part in [coarse, medium, fine] {
        if part.dims() != dims {
            return Err(mismatch(dims, part.dims()));
        }
        if part.channels() != 1 {
            return Err(mismatch(1, part.channels()));
        }
    }
    let mut data = Vec::with_capacity(3 * dims.len());
    for part in [coarse, medium, fine] {
        data.extend_from_slice(part.data());
    }
    RealCube::from_vec(3, dims, data)
}

/// Pooled descriptor fed to the regressor.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub values: Vec<f64>,
}

impl FeatureVector {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }
}

/// Pools every channel of `fused` to `grid`, flattens in (channel, r, a, d)
/// order and appends the motion descriptors.
pub fn global_features(
    fused: &RealCube,
    desc: &MotionDescriptors,
    grid: PoolGrid,
) -> Result<FeatureVector> {
    let kernel = grid.kernel_for(fused.dims())?;
    let pooled = avg_pool3_axes(fused, kernel)?;
    let got = pooled.dims();
    if (got.range, got.angle, got.doppler) != (grid.r, grid.a, grid.d) {
        return Err(mismatch(grid, got));
    }
    let mut values = pooled.data().to_vec();
    values.extend_from_slice(&desc.to_array());
    Ok(FeatureVector { values })
}

/// Coarse, medium and fine maps at full resolution plus their fusion.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiScale {
    pub coarse_pooled: CubeDims,
    pub medium_pooled: CubeDims,
    pub fused: RealCube,
}

/// Pools the magnitude cube at both kernels, upsamples back and fuses with
/// the unpooled fine map.
pub fn multiscale(fine: &RealCube, spec: PoolSpec) -> Result<MultiScale> {
    if fine.channels() != 1 {
        return Err(mismatch(1, fine.channels()));
    }
    let dims = fine.dims();
    let coarse = avg_pool3(fine, spec.s_c)?;
    let medium = avg_pool3(fine, spec.s_m)?;
    let coarse_up = upsample_trilinear(&coarse, dims)?;
    let medium_up = upsample_trilinear(&medium, dims)?;
    Ok(MultiScale {
        coarse_pooled: coarse.dims(),
        medium_pooled: medium.dims(),
        fused: fuse(&coarse_up, &medium_up, fine)?,
    })
}
