//! Classical detector front end: ROI, Doppler-collapsed energy map, 2D
//! cell-averaging CFAR and binary morphology.

use crate::error::{mismatch, Error, Result};
use crate::hmsf::FeatureVector;
use crate::tensor::{apply_mask, norm_sqr, Grid2, Mask, RadCube};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CfarParams {
    pub guard: usize,
    pub train: usize,
    pub p_fa: f64,
}

impl Default for CfarParams {
    fn default() -> Self {
        Self {
            guard: 1,
            train: 4,
            p_fa: 1e-3,
        }
    }
}

impl CfarParams {
    /// Wider guard band and looser threshold, so bodies spanning several
    /// cells survive the opening.
    pub fn extended_target() -> Self {
        Self {
            guard: 2,
            train: 4,
            p_fa: 0.1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.train < 1 || !(self.p_fa > 0.0 && self.p_fa < 1.0) {
            return Err(Error::InvalidArgument(format!("invalid CFAR parameters {self:?}")));
        }
        Ok(())
    }

    /// Cells per side of the full window.
    pub fn reach(&self) -> usize {
        self.guard + self.train
    }
}

/// `α = N·(p_fa^(−1/N) − 1)`.
pub fn threshold_factor(n_train: usize, p_fa: f64) -> f64 {
    let n = n_train as f64;
    n * (libm::pow(p_fa, -1.0 / n) - 1.0)
}

/// Per-cell energy `Σ_d |z|²`.
pub fn collapse_doppler(cube: &RadCube) -> Grid2<f64> {
    let dims = cube.dims();
    Grid2::from_fn(dims.range, dims.angle, |r, a| {
        cube.cell(r, a).iter().map(|z| norm_sqr(*z)).sum()
    })
}

/// Square-ring CA-CFAR. Training cells that fall outside the map are
/// dropped and N is recounted for that cell.
pub fn ca_cfar_2d(map: &Grid2<f64>, params: &CfarParams) -> Result<Mask> {
    params.validate()?;
    let (rows, cols) = map.shape();
    let reach = params.reach();
    if rows <= 2 * reach || cols <= 2 * reach {
        return Err(Error::InvalidArgument(format!(
            "CFAR window of reach {reach} does not fit a {rows}x{cols} map"
        )));
    }
    let g = params.guard as isize;
    let w = reach as isize;
    Ok(Mask::from_fn(rows, cols, |r, c| {
        let mut sum = 0.0;
        let mut n = 0usize;
        for dr in -w..=w {
            for dc in -w..=w {
                if dr.abs() <= g && dc.abs() <= g {
                    continue;
                }
                let rr = r as isize + dr;
                let cc = c as isize + dc;
                if rr < 0 || cc < 0 || rr >= rows as isize || cc >= cols as isize {
                    continue;
                }
                sum += map.get(rr as usize, cc as usize);
                n += 1;
            }
        }
        let noise = sum / n as f64;
        *map.get(r, c) > threshold_factor(n, params.p_fa) * noise
    }))
}

fn erode(m: &Mask) -> Mask {
    let (rows, cols) = m.shape();
    Mask::from_fn(rows, cols, |r, c| {
        if r == 0 || c == 0 || r + 1 == rows || c + 1 == cols {
            return false;
        }
        (r - 1..=r + 1).all(|rr| (c - 1..=c + 1).all(|cc| *m.get(rr, cc)))
    })
}

fn dilate(m: &Mask) -> Mask {
    let (rows, cols) = m.shape();
    Mask::from_fn(rows, cols, |r, c| {
        (r.saturating_sub(1)..=(r + 1).min(rows - 1))
            .any(|rr| (c.saturating_sub(1)..=(c + 1).min(cols - 1)).any(|cc| *m.get(rr, cc)))
    })
}

fn pad(m: &Mask) -> Mask {
    let (rows, cols) = m.shape();
    Mask::from_fn(rows + 2, cols + 2, |r, c| {
        r >= 1 && c >= 1 && r <= rows && c <= cols && *m.get(r - 1, c - 1)
    })
}

fn crop(m: &Mask) -> Mask {
    let (rows, cols) = m.shape();
    Mask::from_fn(rows - 2, cols - 2, |r, c| *m.get(r + 1, c + 1))
}

/// 3×3 opening. Cells beyond the border count as background.
pub fn morph_open(m: &Mask) -> Mask {
    if m.data().is_empty() {
        return m.clone();
    }
    dilate(&erode(m))
}

/// 3×3 closing on a plane padded by one cell, so dilation can spill past
/// the border before the erosion pulls it back.
pub fn morph_close(m: &Mask) -> Mask {
    if m.data().is_empty() {
        return m.clone();
    }
    crop(&erode(&dilate(&pad(m))))
}

/// Opening followed by closing.
pub fn morph_open_close(m: &Mask) -> Mask {
    morph_close(&morph_open(m))
}

/// Detected energy pooled onto a `grid.0 × grid.1` range–angle grid,
/// flattened row-major, followed by the detection count.
pub fn featurize_detections(
    detections: &Mask,
    energy: &Grid2<f64>,
    grid: (usize, usize),
) -> Result<FeatureVector> {
    if detections.shape() != energy.shape() {
        return Err(mismatch(energy.shape(), detections.shape()));
    }
    let (rows, cols) = energy.shape();
    let (gr, ga) = grid;
    if gr == 0 || ga == 0 || gr > rows || ga > cols {
        return Err(Error::InvalidArgument(format!(
            "grid {grid:?} does not fit a {rows}x{cols} map"
        )));
    }
    let (kr, ka) = (rows / gr, cols / ga);
    let mut values = Vec::with_capacity(gr * ga + 1);
    for br in 0..gr {
        for ba in 0..ga {
            let mut sum = 0.0;
            for r in br * kr..(br + 1) * kr {
                for a in ba * ka..(ba + 1) * ka {
                    if *detections.get(r, a) {
                        sum += energy.get(r, a);
                    }
                }
            }
            values.push(sum / (kr * ka) as f64);
        }
    }
    values.push(detections.count() as f64);
    Ok(FeatureVector::new(values))
}

/// Intermediate maps of the baseline front end.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselineOutput {
    pub energy: Grid2<f64>,
    pub raw_detections: Mask,
    pub detections: Mask,
    pub features: FeatureVector,
}

/// ROI → energy map → CFAR → opening/closing → pooled features.
pub fn baseline_features(
    cube: &RadCube,
    roi: &Mask,
    params: &CfarParams,
    grid: (usize, usize),
) -> Result<BaselineOutput> {
    let energy = collapse_doppler(&apply_mask(cube, roi)?);
    let raw_detections = ca_cfar_2d(&energy, params)?;
    let detections = morph_open_close(&raw_detections);
    let features = featurize_detections(&detections, &energy, grid)?;
    Ok(BaselineOutput {
        energy,
        raw_detections,
        detections,
        features,
    })
}
