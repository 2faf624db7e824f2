//! FMCW waveform parameters and the mappings from FFT bins to physical units.
//!
//! A frame is `N_d` chirps of `N_s` fast-time samples on each of `N_a`
//! virtual antenna elements. After the three FFT stages (see [`crate::fft`])
//! range bin `r` sits at `r * Δr` metres, Doppler bin `d` at
//! `v_amb * (d - D/2) / (D/2)` m/s, and angle bin `a` at
//! `asin((λ / 2l) * (a - A/2) / (A/2))` radians.

use num_complex::Complex64;

use crate::error::{mismatch, Error, Result};

/// Speed of light used for every radar conversion (m/s).
///
/// Rounded to 3e8 like radar datasheets; the 4.17 cm resolution quoted for a
/// 3.6 GHz sweep assumes this value.
pub const SPEED_OF_LIGHT: f64 = 3.0e8;

/// FMCW waveform and array parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadarConfig {
    /// Chirp start frequency `f_c` (Hz).
    pub start_frequency: f64,
    /// Sweep bandwidth `B` (Hz).
    pub bandwidth: f64,
    /// Chirp ramp duration `T_chirp` (s).
    pub chirp_duration: f64,
    /// Idle time between chirps `T_idle` (s).
    pub idle_time: f64,
    /// ADC sample rate `f_s` (Hz).
    pub sample_rate: f64,
    /// Fast-time samples per chirp `N_s`.
    pub samples_per_chirp: usize,
    /// Chirps per frame `N_d`; equals the number of Doppler bins.
    pub chirps_per_frame: usize,
    /// Virtual antenna elements `N_a`; equals the number of angle bins.
    pub antennas: usize,
    /// Element spacing `l` (m).
    pub element_spacing: f64,
}

impl RadarConfig {
    /// 77 GHz / 3.6 GHz sweep with 60 µs chirps and 7 µs idle, producing
    /// 256 × 16 × 64 raw cubes.
    ///
    /// The ADC rate is `N_s / T_chirp` so the sampled sweep covers the full
    /// bandwidth and the fast-time bin spacing is exactly `c / 2B`.
    pub fn hupr_like() -> Self {
        let start_frequency = 77.0e9;
        let chirp_duration = 60.0e-6;
        let samples_per_chirp = 256;
        Self {
            start_frequency,
            bandwidth: 3.6e9,
            chirp_duration,
            idle_time: 7.0e-6,
            sample_rate: samples_per_chirp as f64 / chirp_duration,
            samples_per_chirp,
            chirps_per_frame: 16,
            antennas: 64,
            element_spacing: SPEED_OF_LIGHT / start_frequency / 2.0,
        }
    }

    /// [`hupr_like`](Self::hupr_like) with time-multiplexed transmitters:
    /// the same-antenna chirp interval grows to 234 µs, so
    /// `v_amb = λ / 4T_r ≈ 4.16 m/s` and a Doppler bin spans ≈ 0.52 m/s.
    pub fn hupr_tdm() -> Self {
        Self {
            idle_time: 174.0e-6,
            ..Self::hupr_like()
        }
    }

    pub const PRESETS: [&'static str; 2] = ["hupr-like", "hupr-tdm"];

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "hupr-like" => Some(Self::hupr_like()),
            "hupr-tdm" => Some(Self::hupr_tdm()),
            _ => None,
        }
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.start_frequency
    }

    pub fn validate(&self) -> Result<()> {
        let reals = [
            ("start_frequency", self.start_frequency),
            ("bandwidth", self.bandwidth),
            ("chirp_duration", self.chirp_duration),
            ("idle_time", self.idle_time),
            ("sample_rate", self.sample_rate),
            ("element_spacing", self.element_spacing),
        ];
        for (name, value) in reals {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be positive and finite, got {value}"
                )));
            }
        }
        let counts = [
            ("samples_per_chirp", self.samples_per_chirp),
            ("chirps_per_frame", self.chirps_per_frame),
            ("antennas", self.antennas),
        ];
        for (name, value) in counts {
            if value < 2 || !value.is_power_of_two() {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be a power of two >= 2, got {value}"
                )));
            }
        }
        // The N_s samples must fit inside one ramp. Compared with a relative
        // slack so that the exact-fit preset is not rejected by rounding.
        let window = self.sample_rate * self.chirp_duration;
        if window < self.samples_per_chirp as f64 * (1.0 - 1e-12) {
            return Err(Error::InvalidConfig(format!(
                "{} samples at {} Hz do not fit in a {} s chirp",
                self.samples_per_chirp, self.sample_rate, self.chirp_duration
            )));
        }
        Ok(())
    }
}

impl Default for RadarConfig {
    fn default() -> Self {
        Self::hupr_like()
    }
}

/// Physical constants derived from a [`RadarConfig`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    /// λ = c / f_c (m).
    pub wavelength: f64,
    /// S = B / T_chirp (Hz/s).
    pub slope: f64,
    /// T_r = T_chirp + T_idle (s).
    pub chirp_interval: f64,
    /// Δr = c / 2B (m).
    pub range_resolution: f64,
    /// v_amb = λ / 4T_r (m/s).
    pub max_velocity: f64,
}

impl DerivedParams {
    /// Largest range representable by the complex fast-time spectrum.
    pub fn max_range(&self, cfg: &RadarConfig) -> f64 {
        cfg.sample_rate * SPEED_OF_LIGHT / (2.0 * self.slope)
    }
}

pub fn derive_params(cfg: &RadarConfig) -> Result<DerivedParams> {
    cfg.validate()?;
    let wavelength = SPEED_OF_LIGHT / cfg.start_frequency;
    let chirp_interval = cfg.chirp_duration + cfg.idle_time;
    Ok(DerivedParams {
        wavelength,
        slope: cfg.bandwidth / cfg.chirp_duration,
        chirp_interval,
        range_resolution: SPEED_OF_LIGHT / (2.0 * cfg.bandwidth),
        max_velocity: wavelength / (4.0 * chirp_interval),
    })
}

/// Lookup tables from bin index to physical coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisMaps {
    /// Metres per range bin, length R.
    pub range_m: Vec<f64>,
    /// Azimuth in radians per angle bin, length A. Index A/2 is boresight.
    pub angle_rad: Vec<f64>,
    /// Radial velocity in m/s per Doppler bin, length D. Index D/2 is zero.
    pub velocity_mps: Vec<f64>,
}

impl AxisMaps {
    pub fn range_bins(&self) -> usize {
        self.range_m.len()
    }

    pub fn angle_bins(&self) -> usize {
        self.angle_rad.len()
    }

    pub fn doppler_bins(&self) -> usize {
        self.velocity_mps.len()
    }

    /// Explicit tables, mainly for tests and hand-built geometries.
    pub fn from_tables(range_m: Vec<f64>, angle_rad: Vec<f64>, velocity_mps: Vec<f64>) -> Self {
        Self {
            range_m,
            angle_rad,
            velocity_mps,
        }
    }
}

pub fn build_axis_maps(
    cfg: &RadarConfig,
    params: &DerivedParams,
    range_bins: usize,
) -> Result<AxisMaps> {
    cfg.validate()?;
    if range_bins == 0 || range_bins > cfg.samples_per_chirp {
        return Err(Error::InvalidArgument(format!(
            "range bins must be in 1..={}, got {range_bins}",
            cfg.samples_per_chirp
        )));
    }
    let range_m = (0..range_bins)
        .map(|r| r as f64 * params.range_resolution)
        .collect();

    let half_a = (cfg.antennas / 2) as f64;
    let spatial_scale = params.wavelength / (2.0 * cfg.element_spacing);
    let angle_rad = (0..cfg.antennas)
        .map(|a| {
            let u = spatial_scale * ((a as f64 - half_a) / half_a);
            libm::asin(u.clamp(-1.0, 1.0))
        })
        .collect();

    let half_d = (cfg.chirps_per_frame / 2) as f64;
    let velocity_mps = (0..cfg.chirps_per_frame)
        .map(|d| params.max_velocity * ((d as f64 - half_d) / half_d))
        .collect();

    Ok(AxisMaps {
        range_m,
        angle_rad,
        velocity_mps,
    })
}

/// Raw ADC samples for one frame, laid out `[n][k][m]`: fast-time sample
/// outermost, then chirp, then antenna element.
#[derive(Debug, Clone, PartialEq)]
pub struct RawCube {
    samples: usize,
    chirps: usize,
    antennas: usize,
    data: Vec<Complex64>,
}

impl RawCube {
    pub fn zeros(samples: usize, chirps: usize, antennas: usize) -> Self {
        Self {
            samples,
            chirps,
            antennas,
            data: vec![Complex64::new(0.0, 0.0); samples * chirps * antennas],
        }
    }

    pub fn from_vec(
        samples: usize,
        chirps: usize,
        antennas: usize,
        data: Vec<Complex64>,
    ) -> Result<Self> {
        let expected = samples * chirps * antennas;
        if data.len() != expected {
            return Err(mismatch(expected, data.len()));
        }
        Ok(Self {
            samples,
            chirps,
            antennas,
            data,
        })
    }

    /// `(N_s, N_d, N_a)`.
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.samples, self.chirps, self.antennas)
    }

    #[inline]
    pub fn index(&self, n: usize, k: usize, m: usize) -> usize {
        (n * self.chirps + k) * self.antennas + m
    }

    #[inline]
    pub fn get(&self, n: usize, k: usize, m: usize) -> Complex64 {
        self.data[self.index(n, k, m)]
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn scale(&self, alpha: Complex64) -> Self {
        Self {
            data: self.data.iter().map(|z| z * alpha).collect(),
            ..*self
        }
    }
}

impl std::ops::Add for &RawCube {
    type Output = RawCube;

    fn add(self, rhs: &RawCube) -> RawCube {
        assert_eq!(self.dims(), rhs.dims(), "raw cube dims differ");
        RawCube {
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
            ..*self
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hupr_preset_matches_datasheet_values() {
        let cfg = RadarConfig::hupr_like();
        let p = derive_params(&cfg).unwrap();
        assert!((p.range_resolution - 0.0417).abs() < 5e-5, "{}", p.range_resolution);
        assert!((p.chirp_interval - 67e-6).abs() < 1e-15);
        assert!((p.max_velocity - 14.54).abs() < 5e-3, "{}", p.max_velocity);
        // 256 bins of 4.17 cm
        assert!((p.max_range(&cfg) - 10.66).abs() < 0.01);
    }

    #[test]
    fn rejects_bad_configs() {
        let mut cfg = RadarConfig::hupr_like();
        cfg.antennas = 48;
        assert!(matches!(derive_params(&cfg), Err(Error::InvalidConfig(_))));
        let mut cfg = RadarConfig::hupr_like();
        cfg.bandwidth = -1.0;
        assert!(derive_params(&cfg).is_err());
        let mut cfg = RadarConfig::hupr_like();
        cfg.sample_rate = 1.0e6;
        assert!(derive_params(&cfg).is_err());
    }

    #[test]
    fn axis_maps_centre_and_edges() {
        let cfg = RadarConfig::hupr_like();
        let p = derive_params(&cfg).unwrap();
        let axes = build_axis_maps(&cfg, &p, 64).unwrap();
        assert_eq!(axes.velocity_mps[8], 0.0);
        assert_eq!(axes.velocity_mps[0], -p.max_velocity);
        assert!((axes.velocity_mps[12] - p.max_velocity * 0.5).abs() < 1e-12);
        assert!((axes.velocity_mps[12] - 7.27).abs() < 5e-3);
        assert_eq!(axes.angle_rad[32], 0.0);
        for k in 1..32 {
            assert_eq!(axes.angle_rad[32 + k], -axes.angle_rad[32 - k]);
        }
        assert!(axes.range_m.windows(2).all(|w| w[0] < w[1]));
        assert!(axes.angle_rad.windows(2).all(|w| w[0] < w[1]));
        assert!(axes.velocity_mps.windows(2).all(|w| w[0] < w[1]));
        assert!(build_axis_maps(&cfg, &p, 257).is_err());
    }
}
