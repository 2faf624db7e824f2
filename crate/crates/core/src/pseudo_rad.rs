//! Lifting a range–angle heatmap and a range–Doppler heatmap into a
//! factorized range–angle–Doppler cube.

use crate::error::{mismatch, Error, Result};
use crate::tensor::{CubeDims, Grid2, RealCube};

/// `out[r,a,d] = H_RA[r,a] · H_RD[r,d] / Σ_d H_RD[r,d]`; rows of `H_RD`
/// that sum to zero give an all-zero slab.
pub fn build_pseudo_rad(h_ra: &Grid2<f64>, h_rd: &Grid2<f64>) -> Result<RealCube> {
    if h_ra.rows() != h_rd.rows() {
        return Err(mismatch(h_ra.rows(), h_rd.rows()));
    }
    for (i, v) in h_ra.iter().chain(h_rd.iter()).enumerate() {
        if !(*v >= 0.0) {
            return Err(Error::NegativeInput(i));
        }
    }
    let dims = CubeDims::new(h_ra.rows(), h_ra.cols(), h_rd.cols());
    let mut out = RealCube::zeros(1, dims);
    for r in 0..dims.range {
        let row = &h_rd.data()[r * dims.doppler..(r + 1) * dims.doppler];
        let total: f64 = row.iter().sum();
        if total == 0.0 {
            continue;
        }
        let normalized: Vec<f64> = row.iter().map(|v| v / total).collect();
        for a in 0..dims.angle {
            let ra = *h_ra.get(r, a);
            for (d, w) in normalized.iter().enumerate() {
                out.set(0, r, a, d, ra * w);
            }
        }
    }
    Ok(out)
}
