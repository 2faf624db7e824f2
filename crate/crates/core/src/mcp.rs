//! Motion continuity preservation.
//!
//! Per range–angle cell: pick the strongest Doppler bin, convert it to a
//! radial velocity, measure how consistent that velocity is with its
//! neighbours, and keep only cells whose speed and local spread fall inside
//! the configured envelopes.

use crate::error::{mismatch, Error, Result};
use crate::radar::AxisMaps;
use crate::tensor::{apply_mask, norm_sqr, Grid2, Mask, RadCube};

/// Dominant Doppler bin and its velocity for every cell.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityField {
    pub k_star: Grid2<usize>,
    pub velocity: Grid2<f64>,
}

impl VelocityField {
    pub fn shape(&self) -> (usize, usize) {
        self.velocity.shape()
    }

    /// Field from explicit velocities; `k_star` is left at zero.
    pub fn from_velocities(velocity: Grid2<f64>) -> Self {
        Self {
            k_star: Grid2::filled(velocity.rows(), velocity.cols(), 0),
            velocity,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalStats {
    pub mean: Grid2<f64>,
    pub variance: Grid2<f64>,
    pub radius: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DopplerThresholds {
    pub v_min: f64,
    pub v_max: f64,
    /// Bounds on the local standard deviation, not the variance.
    pub sigma_min: f64,
    pub sigma_max: f64,
}

impl DopplerThresholds {
    pub fn vacuous() -> Self {
        Self {
            v_min: 0.0,
            v_max: f64::INFINITY,
            sigma_min: 0.0,
            sigma_max: f64::INFINITY,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0 <= self.v_min && self.v_min < self.v_max && 0.0 <= self.sigma_min && self.sigma_min < self.sigma_max) {
            return Err(Error::InvalidArgument(format!("invalid Doppler thresholds {self:?}")));
        }
        Ok(())
    }
}

pub type DopplerMask = Mask;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MotionDescriptors {
    pub mean: f64,
    pub std: f64,
    pub max_abs: f64,
}

impl MotionDescriptors {
    pub fn to_array(self) -> [f64; 3] {
        [self.mean, self.std, self.max_abs]
    }
}

/// Argmax of `|cube[r,a,·]|` with ties going to the lowest index.
fn argmax_cell(spectrum: &[num_complex::Complex32]) -> usize {
    let mut best = 0;
    let mut best_power = f64::NEG_INFINITY;
    for (k, z) in spectrum.iter().enumerate() {
        let p = norm_sqr(*z);
        if p > best_power {
            best = k;
            best_power = p;
        }
    }
    best
}

pub fn dominant_doppler(cube: &RadCube, axes: &AxisMaps) -> Result<VelocityField> {
    let dims = cube.dims();
    if axes.doppler_bins() != dims.doppler {
        return Err(mismatch(dims.doppler, axes.doppler_bins()));
    }
    let k_star = Grid2::from_fn(dims.range, dims.angle, |r, a| argmax_cell(cube.cell(r, a)));
    let velocity = Grid2::from_fn(dims.range, dims.angle, |r, a| axes.velocity_mps[*k_star.get(r, a)]);
    Ok(VelocityField { k_star, velocity })
}

fn window_stats(v: &Grid2<f64>, r: usize, a: usize, radius: usize) -> (f64, f64) {
    let r0 = r.saturating_sub(radius);
    let r1 = (r + radius).min(v.rows() - 1);
    let a0 = a.saturating_sub(radius);
    let a1 = (a + radius).min(v.cols() - 1);
    let count = ((r1 - r0 + 1) * (a1 - a0 + 1)) as f64;
    let mut sum = 0.0;
    for rr in r0..=r1 {
        for aa in a0..=a1 {
            sum += v.get(rr, aa);
        }
    }
    let mean = sum / count;
    let mut sq = 0.0;
    for rr in r0..=r1 {
        for aa in a0..=a1 {
            let dev = v.get(rr, aa) - mean;
            sq += dev * dev;
        }
    }
    (mean, sq / count)
}

/// Population mean and variance over the `(2R_w+1)²` window, shrunk at the
/// grid border.
pub fn local_stats(field: &VelocityField, radius: usize) -> Result<LocalStats> {
    local_stats_within(field, radius, None)
}

/// As [`local_stats`], but only evaluated where `region` is set; other cells
/// hold zero. Values inside the region are identical to the full version.
pub fn local_stats_within(
    field: &VelocityField,
    radius: usize,
    region: Option<&Mask>,
) -> Result<LocalStats> {
    if radius < 1 {
        return Err(Error::InvalidArgument("window radius must be >= 1".into()));
    }
    let (rows, cols) = field.shape();
    if let Some(m) = region {
        if m.shape() != (rows, cols) {
            return Err(mismatch((rows, cols), m.shape()));
        }
    }
    let mut mean = Grid2::filled(rows, cols, 0.0);
    let mut variance = Grid2::filled(rows, cols, 0.0);
    for r in 0..rows {
        for a in 0..cols {
            if region.is_some_and(|m| !*m.get(r, a)) {
                continue;
            }
            let (mu, var) = window_stats(&field.velocity, r, a, radius);
            mean.set(r, a, mu);
            variance.set(r, a, var);
        }
    }
    Ok(LocalStats {
        mean,
        variance,
        radius,
    })
}

/// `σ_min ≤ σ ≤ σ_max` and `v_min ≤ |v| ≤ v_max`, all inclusive.
pub fn doppler_mask(
    field: &VelocityField,
    stats: &LocalStats,
    th: &DopplerThresholds,
) -> Result<DopplerMask> {
    let shape = field.shape();
    if stats.variance.shape() != shape {
        return Err(mismatch(shape, stats.variance.shape()));
    }
    Ok(Mask::from_fn(shape.0, shape.1, |r, a| {
        let sigma = stats.variance.get(r, a).sqrt();
        let speed = field.velocity.get(r, a).abs();
        th.sigma_min <= sigma && sigma <= th.sigma_max && th.v_min <= speed && speed <= th.v_max
    }))
}

/// `R_motion = R · M_dop` broadcast along Doppler.
pub fn apply_doppler_mask(cube: &RadCube, mask: &DopplerMask) -> Result<RadCube> {
    apply_mask(cube, mask)
}

/// Mean, population standard deviation and max |v| over the masked-in
/// cells; all zero when the mask is empty.
pub fn global_descriptors(field: &VelocityField, mask: &DopplerMask) -> Result<MotionDescriptors> {
    if mask.shape() != field.shape() {
        return Err(mismatch(field.shape(), mask.shape()));
    }
    let selected: Vec<f64> = field
        .velocity
        .iter()
        .zip(mask.iter())
        .filter_map(|(v, &keep)| keep.then_some(*v))
        .collect();
    if selected.is_empty() {
        return Ok(MotionDescriptors::default());
    }
    let n = selected.len() as f64;
    let mean = selected.iter().sum::<f64>() / n;
    let var = selected.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let max_abs = selected.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(MotionDescriptors {
        mean,
        std: var.sqrt(),
        max_abs,
    })
}

/// Everything MCP produces for one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct MotionOutput {
    pub field: VelocityField,
    pub stats: LocalStats,
    /// Doppler-consistency mask re-ANDed with the spatial mask.
    pub mask: DopplerMask,
    pub descriptors: MotionDescriptors,
    pub motion_cube: RadCube,
}

/// Runs the full MCP stage on an SSP-filtered cube.
///
/// Local statistics are only evaluated inside the spatial mask; cells
/// outside it are excluded from the Doppler mask regardless.
pub fn refine_motion(
    spatial_cube: &RadCube,
    spatial_mask: &Mask,
    axes: &AxisMaps,
    thresholds: &DopplerThresholds,
    radius: usize,
) -> Result<MotionOutput> {
    let field = dominant_doppler(spatial_cube, axes)?;
    let stats = local_stats_within(&field, radius, Some(spatial_mask))?;
    let mask = doppler_mask(&field, &stats, thresholds)?.and(spatial_mask)?;
    let descriptors = global_descriptors(&field, &mask)?;
    let motion_cube = apply_doppler_mask(spatial_cube, &mask)?;
    Ok(MotionOutput {
        field,
        stats,
        mask,
        descriptors,
        motion_cube,
    })
}
