//! Radix-2 FFT and the range → angle → Doppler transform chain.
//!
//! Every forward transform is scaled by `1/N`, so a unit-amplitude tone on
//! an exact bin produces a spectral peak of magnitude 1.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::radar::RawCube;
use crate::tensor::{to_c32, CubeDims, RadCube};

/// Precomputed twiddles and bit-reversal table for one power-of-two length.
#[derive(Debug, Clone)]
pub struct FftPlan {
    len: usize,
    twiddles: Vec<Complex64>,
    reversed: Vec<usize>,
}

impl FftPlan {
    pub fn new(len: usize) -> Result<Self> {
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "FFT length must be a power of two, got {len}"
            )));
        }
        let twiddles = (0..len / 2)
            .map(|k| {
                let angle = -2.0 * std::f64::consts::PI * k as f64 / len as f64;
                Complex64::new(libm::cos(angle), libm::sin(angle))
            })
            .collect();
        let bits = len.trailing_zeros();
        let reversed = (0..len)
            .map(|i| if bits == 0 { 0 } else { i.reverse_bits() >> (usize::BITS - bits) })
            .collect();
        Ok(Self {
            len,
            twiddles,
            reversed,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// In-place unnormalised DFT, `X[f] = Σ x[n] e^{-j2πfn/N}`.
    pub fn transform(&self, buf: &mut [Complex64]) {
        assert_eq!(buf.len(), self.len, "buffer length does not match plan");
        for i in 0..self.len {
            let j = self.reversed[i];
            if i < j {
                buf.swap(i, j);
            }
        }
        let mut half = 1;
        while half < self.len {
            let stride = self.len / (2 * half);
            for block in buf.chunks_exact_mut(2 * half) {
                let (lo, hi) = block.split_at_mut(half);
                for (j, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                    let t = self.twiddles[j * stride] * *b;
                    *b = *a - t;
                    *a += t;
                }
            }
            half *= 2;
        }
    }

    /// In-place forward DFT scaled by `1/N`.
    pub fn forward(&self, buf: &mut [Complex64]) {
        self.transform(buf);
        let scale = 1.0 / self.len as f64;
        for z in buf.iter_mut() {
            *z *= scale;
        }
    }
}

/// Rotates a spectrum by half its length so index `N/2` holds DC.
pub fn fftshift(buf: &mut [Complex64]) {
    let half = buf.len() / 2;
    buf.rotate_left(half);
}

/// Taper applied along each axis before its transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Window {
    #[default]
    Rectangular,
    Hann,
}

impl Window {
    fn coefficients(self, len: usize) -> Option<Vec<f64>> {
        match self {
            Window::Rectangular => None,
            Window::Hann => Some(
                (0..len)
                    .map(|n| {
                        0.5 - 0.5 * libm::cos(2.0 * std::f64::consts::PI * n as f64 / len as f64)
                    })
                    .collect(),
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainOptions {
    /// Number of leading fast-time bins kept as range bins.
    pub range_bins: usize,
    pub window: Window,
}

impl ChainOptions {
    pub fn new(range_bins: usize) -> Self {
        Self {
            range_bins,
            window: Window::Rectangular,
        }
    }
}

/// Full-precision output of [`fft_chain_reference`], laid out `[r][a][d]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexCube64 {
    pub dims: CubeDims,
    pub data: Vec<Complex64>,
}

/// Range, angle and Doppler FFTs in f64.
///
/// The angle and Doppler spectra are half-shifted so that index `A/2` is
/// boresight and index `D/2` is zero velocity.
pub fn fft_chain_reference(raw: &RawCube, opts: &ChainOptions) -> Result<ComplexCube64> {
    let (ns, nd, na) = raw.dims();
    let r_bins = opts.range_bins;
    if r_bins == 0 || r_bins > ns {
        return Err(Error::DimensionMismatch {
            expected: format!("1..={ns} range bins"),
            actual: r_bins.to_string(),
        });
    }
    let range_plan = FftPlan::new(ns)?;
    let angle_plan = FftPlan::new(na)?;
    let doppler_plan = FftPlan::new(nd)?;
    let range_win = opts.window.coefficients(ns);
    let angle_win = opts.window.coefficients(na);
    let doppler_win = opts.window.coefficients(nd);

    let dims = CubeDims::new(r_bins, na, nd);
    let mut out = vec![Complex64::new(0.0, 0.0); dims.len()];
    let idx = |r: usize, a: usize, d: usize| (r * na + a) * nd + d;

    // Fast time: one transform per (chirp, element); results land in
    // out[r][m][k], the antenna index occupying the angle slot.
    let mut column = vec![Complex64::new(0.0, 0.0); ns];
    for k in 0..nd {
        for m in 0..na {
            for (n, z) in column.iter_mut().enumerate() {
                *z = raw.get(n, k, m);
            }
            if let Some(w) = &range_win {
                column.iter_mut().zip(w).for_each(|(z, w)| *z *= w);
            }
            range_plan.forward(&mut column);
            for r in 0..r_bins {
                out[idx(r, m, k)] = column[r];
            }
        }
    }

    // Antennas.
    let mut row = vec![Complex64::new(0.0, 0.0); na];
    for r in 0..r_bins {
        for k in 0..nd {
            for (m, z) in row.iter_mut().enumerate() {
                *z = out[idx(r, m, k)];
            }
            if let Some(w) = &angle_win {
                row.iter_mut().zip(w).for_each(|(z, w)| *z *= w);
            }
            angle_plan.forward(&mut row);
            fftshift(&mut row);
            for (a, z) in row.iter().enumerate() {
                out[idx(r, a, k)] = *z;
            }
        }
    }

    // Slow time, contiguous per cell.
    for spectrum in out.chunks_exact_mut(nd) {
        if let Some(w) = &doppler_win {
            spectrum.iter_mut().zip(w).for_each(|(z, w)| *z *= w);
        }
        doppler_plan.forward(spectrum);
        fftshift(spectrum);
    }

    Ok(ComplexCube64 { dims, data: out })
}

/// [`fft_chain_reference`] rounded to the f32 storage of [`RadCube`].
pub fn fft_chain(raw: &RawCube, opts: &ChainOptions) -> Result<RadCube> {
    let reference = fft_chain_reference(raw, opts)?;
    RadCube::from_vec(
        reference.dims,
        reference.data.into_iter().map(to_c32).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_dft(x: &[Complex64]) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|f| {
                x.iter()
                    .enumerate()
                    .map(|(t, z)| {
                        let ang = -2.0 * std::f64::consts::PI * (f * t % n) as f64 / n as f64;
                        z * Complex64::new(ang.cos(), ang.sin())
                    })
                    .sum::<Complex64>()
                    / n as f64
            })
            .collect()
    }

    #[test]
    fn matches_naive_dft() {
        for len in [1usize, 2, 4, 8, 64] {
            let x: Vec<Complex64> = (0..len)
                .map(|i| Complex64::new((i as f64 * 0.7).sin(), (i as f64 * 1.3).cos()))
                .collect();
            let mut y = x.clone();
            FftPlan::new(len).unwrap().forward(&mut y);
            for (a, b) in y.iter().zip(naive_dft(&x)) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert!(FftPlan::new(12).is_err());
        assert!(FftPlan::new(0).is_err());
    }

    #[test]
    fn shift_moves_dc_to_centre() {
        let mut v: Vec<Complex64> = (0..8).map(|i| Complex64::new(i as f64, 0.0)).collect();
        fftshift(&mut v);
        assert_eq!(v[4].re, 0.0);
        assert_eq!(v[0].re, 4.0);
    }

    #[test]
    fn chain_rejects_bad_range_bins() {
        let raw = RawCube::zeros(8, 4, 4);
        assert!(fft_chain(&raw, &ChainOptions::new(9)).is_err());
        assert!(fft_chain(&raw, &ChainOptions::new(0)).is_err());
    }

    #[test]
    fn all_zero_in_all_zero_out() {
        let raw = RawCube::zeros(16, 8, 8);
        let cube = fft_chain(&raw, &ChainOptions::new(16)).unwrap();
        assert!(cube.data().iter().all(|z| z.re == 0.0 && z.im == 0.0));
    }

    #[test]
    fn hann_window_still_peaks_on_tone() {
        let mut raw = RawCube::zeros(16, 8, 8);
        for n in 0..16 {
            for k in 0..8 {
                for m in 0..8 {
                    let ph = 2.0 * std::f64::consts::PI * (3.0 * n as f64 / 16.0);
                    let i = raw.index(n, k, m);
                    raw.data_mut()[i] = Complex64::new(ph.cos(), ph.sin());
                }
            }
        }
        let opts = ChainOptions {
            range_bins: 16,
            window: Window::Hann,
        };
        let cube = fft_chain_reference(&raw, &opts).unwrap();
        let (best, _) = cube
            .data
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, z)| if z.norm() > acc.1 { (i, z.norm()) } else { acc });
        // r = 3, a = 4 (boresight), d = 4 (zero Doppler)
        assert_eq!(best, (3 * 8 + 4) * 8 + 4);
    }
}
