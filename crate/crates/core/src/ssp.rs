//! Spatial structure preservation: a range–angle region of interest.

use crate::error::{Error, Result};
use crate::radar::AxisMaps;
use crate::tensor::{apply_mask, Mask, RadCube};

/// Plausible radial and angular extent of a person (metres, radians).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialBounds {
    pub d_min: f64,
    pub d_max: f64,
    pub theta_min: f64,
    pub theta_max: f64,
}

impl SpatialBounds {
    pub fn new(d_min: f64, d_max: f64, theta_min: f64, theta_max: f64) -> Result<Self> {
        let b = Self {
            d_min,
            d_max,
            theta_min,
            theta_max,
        };
        b.validate()?;
        Ok(b)
    }

    pub fn from_degrees(d_min: f64, d_max: f64, theta_min_deg: f64, theta_max_deg: f64) -> Result<Self> {
        Self::new(d_min, d_max, theta_min_deg.to_radians(), theta_max_deg.to_radians())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.d_min < self.d_max && self.theta_min < self.theta_max) {
            return Err(Error::InvalidArgument(format!(
                "spatial bounds must satisfy d_min < d_max and θ_min < θ_max: {self:?}"
            )));
        }
        Ok(())
    }
}

/// R × A mask, true inside the region of interest.
pub type SpatialMask = Mask;

/// Inclusive on both ends of both intervals.
pub fn build_spatial_mask(bounds: &SpatialBounds, axes: &AxisMaps) -> SpatialMask {
    Mask::from_fn(axes.range_bins(), axes.angle_bins(), |r, a| {
        let d = axes.range_m[r];
        let theta = axes.angle_rad[a];
        bounds.d_min <= d && d <= bounds.d_max && bounds.theta_min <= theta && theta <= bounds.theta_max
    })
}

/// `R_spatial[r,a,d] = R[r,a,d] · M_spatial[r,a]`; masked cells become exact zeros.
pub fn apply_spatial_mask(cube: &RadCube, mask: &SpatialMask) -> Result<RadCube> {
    apply_mask(cube, mask)
}
