//! Dense tensor containers shared by every stage.

use num_complex::{Complex32, Complex64};

use crate::error::{mismatch, Error, Result};

/// Fixed joint order of the 14-joint skeleton used throughout the crate.
pub const JOINT_NAMES: [&str; 14] = [
    "head",
    "neck",
    "right_shoulder",
    "left_shoulder",
    "right_elbow",
    "left_elbow",
    "right_wrist",
    "left_wrist",
    "right_hip",
    "left_hip",
    "right_knee",
    "left_knee",
    "right_ankle",
    "left_ankle",
];

/// `(R, A, D)` extent of a range–angle–Doppler cube.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CubeDims {
    pub range: usize,
    pub angle: usize,
    pub doppler: usize,
}

impl CubeDims {
    pub const fn new(range: usize, angle: usize, doppler: usize) -> Self {
        Self {
            range,
            angle,
            doppler,
        }
    }

    pub fn len(&self) -> usize {
        self.range * self.angle * self.doppler
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Complex range–angle–Doppler cube, row-major with range outermost and
/// Doppler innermost.
#[derive(Debug, Clone, PartialEq)]
pub struct RadCube {
    dims: CubeDims,
    data: Vec<Complex32>,
}

impl RadCube {
    pub fn zeros(dims: CubeDims) -> Self {
        Self {
            dims,
            data: vec![Complex32::new(0.0, 0.0); dims.len()],
        }
    }

    pub fn from_vec(dims: CubeDims, data: Vec<Complex32>) -> Result<Self> {
        if data.len() != dims.len() {
            return Err(mismatch(dims.len(), data.len()));
        }
        if let Some(i) = data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidArgument(format!("non-finite cube value at {i}")));
        }
        Ok(Self { dims, data })
    }

    pub fn dims(&self) -> CubeDims {
        self.dims
    }

    #[inline]
    pub fn index(&self, r: usize, a: usize, d: usize) -> usize {
        (r * self.dims.angle + a) * self.dims.doppler + d
    }

    #[inline]
    pub fn get(&self, r: usize, a: usize, d: usize) -> Complex32 {
        self.data[self.index(r, a, d)]
    }

    #[inline]
    pub fn set(&mut self, r: usize, a: usize, d: usize, value: Complex32) {
        let i = self.index(r, a, d);
        self.data[i] = value;
    }

    /// Doppler spectrum of one range–angle cell.
    #[inline]
    pub fn cell(&self, r: usize, a: usize) -> &[Complex32] {
        let start = self.index(r, a, 0);
        &self.data[start..start + self.dims.doppler]
    }

    pub fn data(&self) -> &[Complex32] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex32] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<Complex32> {
        self.data
    }

    /// Sum of squared magnitudes, accumulated in f64.
    pub fn energy(&self) -> f64 {
        self.data.iter().map(|z| norm_sqr(*z)).sum()
    }
}

/// `|z|²` computed in f64. The products of f32 inputs are exact in f64.
#[inline]
pub fn norm_sqr(z: Complex32) -> f64 {
    let re = z.re as f64;
    let im = z.im as f64;
    re * re + im * im
}

pub(crate) fn to_c32(z: Complex64) -> Complex32 {
    Complex32::new(z.re as f32, z.im as f32)
}

/// Real-valued tensor with an explicit channel axis, laid out
/// `[channel][range][angle][doppler]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealCube {
    channels: usize,
    dims: CubeDims,
    data: Vec<f64>,
}

impl RealCube {
    pub fn zeros(channels: usize, dims: CubeDims) -> Self {
        Self {
            channels,
            dims,
            data: vec![0.0; channels * dims.len()],
        }
    }

    pub fn from_vec(channels: usize, dims: CubeDims, data: Vec<f64>) -> Result<Self> {
        if channels == 0 {
            return Err(Error::InvalidArgument("channel axis must be >= 1".into()));
        }
        if data.len() != channels * dims.len() {
            return Err(mismatch(channels * dims.len(), data.len()));
        }
        Ok(Self {
            channels,
            dims,
            data,
        })
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn dims(&self) -> CubeDims {
        self.dims
    }

    #[inline]
    pub fn index(&self, c: usize, r: usize, a: usize, d: usize) -> usize {
        ((c * self.dims.range + r) * self.dims.angle + a) * self.dims.doppler + d
    }

    #[inline]
    pub fn get(&self, c: usize, r: usize, a: usize, d: usize) -> f64 {
        self.data[self.index(c, r, a, d)]
    }

    #[inline]
    pub fn set(&mut self, c: usize, r: usize, a: usize, d: usize, value: f64) {
        let i = self.index(c, r, a, d);
        self.data[i] = value;
    }

    pub fn channel(&self, c: usize) -> &[f64] {
        let n = self.dims.len();
        &self.data[c * n..(c + 1) * n]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }
}

/// Elementwise `|z|` of a complex cube as a single-channel real cube.
pub fn magnitude(cube: &RadCube) -> RealCube {
    RealCube {
        channels: 1,
        dims: cube.dims(),
        data: cube.data().iter().map(|z| norm_sqr(*z).sqrt()).collect(),
    }
}

/// Dense 2-D grid over (range, angle), row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid2<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Grid2<T> {
    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Self {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }
}

impl<T> Grid2<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(mismatch(rows * cols, data.len()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: T) {
        self.data[r * self.cols + c] = value;
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.data.iter()
    }
}

/// Binary range–angle mask.
pub type Mask = Grid2<bool>;

impl Grid2<bool> {
    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    pub fn and(&self, other: &Mask) -> Result<Mask> {
        if self.shape() != other.shape() {
            return Err(mismatch(self.shape(), other.shape()));
        }
        Ok(Mask {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| *a && *b).collect(),
        })
    }
}

/// Zero every Doppler spectrum whose (range, angle) cell is off in `mask`.
/// Kept cells are copied bit-for-bit.
pub fn apply_mask(cube: &RadCube, mask: &Mask) -> Result<RadCube> {
    let dims = cube.dims();
    if mask.shape() != (dims.range, dims.angle) {
        return Err(mismatch((dims.range, dims.angle), mask.shape()));
    }
    let mut out = RadCube::zeros(dims);
    for (cell, (&keep, dst)) in mask
        .iter()
        .zip(out.data_mut().chunks_exact_mut(dims.doppler))
        .enumerate()
    {
        if keep {
            let start = cell * dims.doppler;
            dst.copy_from_slice(&cube.data()[start..start + dims.doppler]);
        }
    }
    Ok(out)
}

/// J × 3 joint coordinates in millimetres, ordered as [`JOINT_NAMES`] when
/// J = 14.
#[derive(Debug, Clone, PartialEq)]
pub struct Pose {
    joints: Vec<[f64; 3]>,
}

impl Pose {
    pub fn new(joints: Vec<[f64; 3]>) -> Result<Self> {
        if joints.is_empty() {
            return Err(Error::InvalidArgument("pose needs at least one joint".into()));
        }
        if joints.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite joint coordinate".into()));
        }
        Ok(Self { joints })
    }

    /// Builds a pose from a flat `[x0, y0, z0, x1, ...]` vector.
    pub fn from_flat(values: &[f64]) -> Result<Self> {
        if values.is_empty() || values.len() % 3 != 0 {
            return Err(Error::InvalidArgument(format!(
                "flat pose length {} is not a positive multiple of 3",
                values.len()
            )));
        }
        Self::new(values.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect())
    }

    pub fn joints(&self) -> &[[f64; 3]] {
        &self.joints
    }

    pub fn num_joints(&self) -> usize {
        self.joints.len()
    }

    pub fn flat(&self) -> Vec<f64> {
        self.joints.iter().flatten().copied().collect()
    }

    /// Rounds every coordinate to the nearest f32, the precision of the POSE
    /// file format.
    pub fn quantized(&self) -> Self {
        Self {
            joints: self
                .joints
                .iter()
                .map(|j| j.map(|v| v as f32 as f64))
                .collect(),
        }
    }
}
