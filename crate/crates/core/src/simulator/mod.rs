//! Point-scatterer FMCW simulator.
//!
//! Each scatterer contributes a separable tone
//!
//! ```text
//! s[n,k,m] = A · exp(j2π f_IF n / f_s) · exp(j4π v T_r k / λ) · exp(j2π (l m / λ) sin θ)
//! ```
//!
//! with `f_IF = 2 S d / c` (stop-and-hop: `d` is frozen for the frame).
//! Positive `v` means approaching and lands above the zero-Doppler bin.
//!
//! Noise is circular complex Gaussian with `E|w|² = σ²`, drawn in sample
//! order from a ChaCha8 stream seeded with `seed`: each pair of uniforms
//! `u = (next_u64 >> 11) · 2⁻⁵³` feeds Box–Muller as
//! `ρ = sqrt(-2 ln(1 - u₁))`, `re = ρ cos(2π u₂)`, `im = ρ sin(2π u₂)`,
//! both scaled by `σ / √2`.

mod skeleton;

pub use skeleton::{
    make_skeleton_dataset, rest_pose_offsets, MotionParams, SkeletonScene, SkeletonSequence,
};

use num_complex::Complex64;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::radar::{derive_params, DerivedParams, RadarConfig, RawCube, SPEED_OF_LIGHT};

use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scatterer {
    /// Radial distance (m).
    pub range_m: f64,
    /// Azimuth from boresight (rad).
    pub azimuth_rad: f64,
    /// Radial velocity (m/s), positive when approaching.
    pub velocity_mps: f64,
    pub amplitude: Complex64,
}

impl Scatterer {
    pub fn new(range_m: f64, azimuth_rad: f64, velocity_mps: f64, amplitude: Complex64) -> Self {
        Self {
            range_m,
            azimuth_rad,
            velocity_mps,
            amplitude,
        }
    }

    fn validate(&self, cfg: &RadarConfig, params: &DerivedParams) -> Result<()> {
        let max_range = params.max_range(cfg);
        if !(self.range_m > 0.0 && self.range_m < max_range) {
            return Err(Error::ScattererOutOfRange(format!(
                "range {} m outside (0, {max_range})",
                self.range_m
            )));
        }
        if !(self.azimuth_rad.abs() < PI / 2.0) {
            return Err(Error::ScattererOutOfRange(format!(
                "azimuth {} rad outside (-π/2, π/2)",
                self.azimuth_rad
            )));
        }
        if !(self.velocity_mps.abs() < params.max_velocity) {
            return Err(Error::ScattererOutOfRange(format!(
                "velocity {} m/s outside ±{}",
                self.velocity_mps, params.max_velocity
            )));
        }
        if !(self.amplitude.re.is_finite() && self.amplitude.im.is_finite()) {
            return Err(Error::ScattererOutOfRange("non-finite amplitude".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Scene {
    pub scatterers: Vec<Scatterer>,
    /// Standard deviation of the complex noise per raw sample.
    pub noise_sigma: f64,
    /// Static scatterers; their velocity must be zero.
    pub clutter: Vec<Scatterer>,
}

impl Scene {
    pub fn new(scatterers: Vec<Scatterer>) -> Self {
        Self {
            scatterers,
            noise_sigma: 0.0,
            clutter: Vec::new(),
        }
    }
}

/// SplitMix64 finaliser, used to derive independent per-frame seeds.
pub fn mix_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn unit_uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// One standard circular complex Gaussian sample with `E|w|² = 1`.
fn complex_gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let u1 = 1.0 - unit_uniform(rng);
    let u2 = unit_uniform(rng);
    let rho = libm::sqrt(-2.0 * libm::log(u1)) * std::f64::consts::FRAC_1_SQRT_2;
    let phase = 2.0 * PI * u2;
    Complex64::new(rho * libm::cos(phase), rho * libm::sin(phase))
}

#[inline]
fn phasor(cycles: f64) -> Complex64 {
    let phase = 2.0 * PI * cycles;
    Complex64::new(libm::cos(phase), libm::sin(phase))
}

fn add_scatterer(raw: &mut RawCube, p: &Scatterer, cfg: &RadarConfig, params: &DerivedParams) {
    let (ns, nd, na) = raw.dims();
    let if_cycles_per_sample = 2.0 * params.slope * p.range_m / SPEED_OF_LIGHT / cfg.sample_rate;
    let doppler_cycles_per_chirp = 2.0 * p.velocity_mps * params.chirp_interval / params.wavelength;
    let spatial_cycles_per_element =
        cfg.element_spacing / params.wavelength * libm::sin(p.azimuth_rad);

    let fast: Vec<Complex64> = (0..ns)
        .map(|n| phasor(if_cycles_per_sample * n as f64))
        .collect();
    let mut slow_angle = Vec::with_capacity(nd * na);
    for k in 0..nd {
        let slow = p.amplitude * phasor(doppler_cycles_per_chirp * k as f64);
        for m in 0..na {
            slow_angle.push(slow * phasor(spatial_cycles_per_element * m as f64));
        }
    }
    for (plane, f) in raw.data_mut().chunks_exact_mut(nd * na).zip(&fast) {
        for (z, s) in plane.iter_mut().zip(&slow_angle) {
            *z += f * s;
        }
    }
}

/// Raw `N_s × N_d × N_a` ADC cube for a scene. Deterministic in `seed`.
pub fn synthesize_frame(scene: &Scene, cfg: &RadarConfig, seed: u64) -> Result<RawCube> {
    let params = derive_params(cfg)?;
    if !(scene.noise_sigma >= 0.0 && scene.noise_sigma.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "noise sigma must be >= 0, got {}",
            scene.noise_sigma
        )));
    }
    for p in &scene.scatterers {
        p.validate(cfg, &params)?;
    }
    for p in &scene.clutter {
        p.validate(cfg, &params)?;
        if p.velocity_mps != 0.0 {
            return Err(Error::InvalidArgument(format!(
                "clutter scatterer must be static, got {} m/s",
                p.velocity_mps
            )));
        }
    }

    let mut raw = RawCube::zeros(cfg.samples_per_chirp, cfg.chirps_per_frame, cfg.antennas);
    for p in scene.scatterers.iter().chain(&scene.clutter) {
        add_scatterer(&mut raw, p, cfg, &params);
    }
    if scene.noise_sigma > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for z in raw.data_mut() {
            *z += complex_gaussian(&mut rng) * scene.noise_sigma;
        }
    }
    Ok(raw)
}

/// Bin indices `(r, a, d)` where a scatterer's peak is expected after the
/// FFT chain, clamped to the cube extent.
pub fn expected_bins(
    p: &Scatterer,
    cfg: &RadarConfig,
    params: &DerivedParams,
    range_bins: usize,
    angle_bins: usize,
    doppler_bins: usize,
) -> (usize, usize, usize) {
    let clamp = |x: f64, len: usize| x.round().clamp(0.0, (len - 1) as f64) as usize;
    let r = clamp(p.range_m / params.range_resolution, range_bins);
    let half_a = (angle_bins / 2) as f64;
    let a = clamp(
        half_a + half_a * (2.0 * cfg.element_spacing / params.wavelength) * libm::sin(p.azimuth_rad),
        angle_bins,
    );
    let half_d = (doppler_bins / 2) as f64;
    let d = clamp(half_d + p.velocity_mps / params.max_velocity * half_d, doppler_bins);
    (r, a, d)
}

/// The scatterer that lands exactly on bin centre `(r, a, d)`.
pub fn on_grid_scatterer(
    cfg: &RadarConfig,
    params: &DerivedParams,
    bins: (usize, usize, usize),
    amplitude: Complex64,
) -> Scatterer {
    let (r, a, d) = bins;
    let half_a = (cfg.antennas / 2) as f64;
    let half_d = (cfg.chirps_per_frame / 2) as f64;
    let sin_theta =
        (a as f64 - half_a) / half_a * params.wavelength / (2.0 * cfg.element_spacing);
    Scatterer {
        range_m: r as f64 * params.range_resolution,
        azimuth_rad: libm::asin(sin_theta.clamp(-1.0, 1.0)),
        velocity_mps: (d as f64 - half_d) / half_d * params.max_velocity,
        amplitude,
    }
}
