//! Parametric gait generator producing skeleton scenes and labelled cubes.
//!
//! Coordinates are metres in the radar frame: `x` to the radar's right, `y`
//! along boresight, `z` up, origin at the antenna phase centre. Emitted
//! poses are the same coordinates in millimetres.
//!
//! Frame `i` is sampled at `t = i · frame_interval_s`:
//!
//! ```text
//! root(t) = (x0 + Wx sin(2π fx t + ψx),  y0 + Wy sin(2π fy t + ψy),  0)
//! φ(t)    = 2π f_gait t + φ0
//! joint   = root + rest + (0,  L · swing_j · sin φ,  T · bob_j · sin 2φ)
//! ```
//!
//! Arms and legs swing along boresight in antiphase (`swing_j` ∈ {±½, ±1});
//! head, neck, shoulders and hips bob vertically (`bob_j` = 1). The phases
//! `ψx, ψy, φ0` are drawn from the dataset seed.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{mix_seed, synthesize_frame, Scatterer, Scene};
use crate::error::{Error, Result};
use crate::fft::{fft_chain, ChainOptions, Window};
use crate::radar::{derive_params, DerivedParams, RadarConfig, RawCube};
use crate::tensor::{Pose, RadCube, JOINT_NAMES};

use std::f64::consts::PI;

/// Rest-pose offsets from the root (pelvis level, radar height), metres.
const REST: [[f64; 3]; 14] = [
    [0.0, 0.0, 0.65],
    [0.0, 0.0, 0.45],
    [0.20, 0.0, 0.40],
    [-0.20, 0.0, 0.40],
    [0.25, 0.0, 0.12],
    [-0.25, 0.0, 0.12],
    [0.27, 0.0, -0.12],
    [-0.27, 0.0, -0.12],
    [0.12, 0.0, -0.05],
    [-0.12, 0.0, -0.05],
    [0.12, 0.0, -0.50],
    [-0.12, 0.0, -0.50],
    [0.12, 0.0, -0.92],
    [-0.12, 0.0, -0.92],
];

/// Boresight swing weight per joint (limbs).
const SWING: [f64; 14] = [
    0.0, 0.0, 0.0, 0.0, 0.5, -0.5, 1.0, -1.0, 0.0, 0.0, -0.5, 0.5, -1.0, 1.0,
];

/// Vertical bob weight per joint (torso).
const BOB: [f64; 14] = [
    1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0,
];

/// Reflectivity per joint.
const RCS: [f64; 14] = [
    0.8, 0.7, 0.9, 0.9, 0.6, 0.6, 0.5, 0.5, 1.0, 1.0, 0.7, 0.7, 0.5, 0.5,
];

/// Joint pairs joined by a bone. Each bone carries evenly spaced interior
/// scatterers in addition to its end joints.
const BONES: [(usize, usize); 15] = [
    (0, 1),
    (1, 2),
    (1, 3),
    (2, 4),
    (4, 6),
    (3, 5),
    (5, 7),
    (1, 8),
    (1, 9),
    (8, 9),
    (8, 10),
    (10, 12),
    (9, 11),
    (11, 13),
    (2, 3),
];

/// Reflectivity of bone-interior scatterers relative to their end joints.
const BONE_RCS: f64 = 0.6;

pub fn rest_pose_offsets() -> [[f64; 3]; 14] {
    REST
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotionParams {
    pub gait_frequency_hz: f64,
    pub frame_interval_s: f64,
    /// Vertical bob amplitude `T` of the torso joints (m).
    pub torso_amplitude_m: f64,
    /// Boresight swing amplitude `L` of wrists and ankles (m).
    pub limb_amplitude_m: f64,
    /// Root centre `(x0, y0)` (m).
    pub root_center_m: [f64; 2],
    /// Root wander half-ranges `(Wx, Wy)` (m).
    pub root_wander_m: [f64; 2],
    /// Root wander frequencies `(fx, fy)` (Hz).
    pub wander_frequency_hz: [f64; 2],
    pub noise_sigma: f64,
    /// Static scatterers placed once per dataset.
    pub clutter_count: usize,
    pub clutter_amplitude: f64,
    /// Interior scatterers per bone; 0 models joints as isolated points.
    pub bone_points: usize,
    /// Range bins kept from the fast-time FFT.
    pub range_bins: usize,
    /// Taper used when forming cubes.
    pub window: Window,
}

impl Default for MotionParams {
    /// Walking in place at 1.2 Hz while drifting around the room: torso
    /// radial speed stays below 0.5 m/s, wrists and ankles peak near 2.4 m/s.
    fn default() -> Self {
        Self {
            gait_frequency_hz: 1.2,
            frame_interval_s: 0.1,
            torso_amplitude_m: 0.025,
            limb_amplitude_m: 0.32,
            root_center_m: [0.0, 1.8],
            root_wander_m: [0.6, 0.5],
            wander_frequency_hz: [0.031, 0.023],
            noise_sigma: 1.0,
            clutter_count: 3,
            clutter_amplitude: 1.5,
            bone_points: 3,
            range_bins: 64,
            window: Window::Hann,
        }
    }
}

impl MotionParams {
    /// Same scene with every motion amplitude zeroed.
    pub fn still(self) -> Self {
        Self {
            torso_amplitude_m: 0.0,
            limb_amplitude_m: 0.0,
            root_wander_m: [0.0, 0.0],
            ..self
        }
    }

    /// Upper bound on any joint's speed (m/s).
    pub fn max_speed(&self) -> f64 {
        let omega = 2.0 * PI * self.gait_frequency_hz;
        let root = (self.root_wander_m[0] * 2.0 * PI * self.wander_frequency_hz[0])
            .hypot(self.root_wander_m[1] * 2.0 * PI * self.wander_frequency_hz[1]);
        let limb = self.limb_amplitude_m * omega;
        let torso = self.torso_amplitude_m * 2.0 * omega;
        root + limb.max(torso)
    }
}

/// One frame's skeleton and the scatterers that represent it.
#[derive(Debug, Clone, PartialEq)]
pub struct SkeletonScene {
    pub pose: Pose,
    /// One scatterer per joint in [`JOINT_NAMES`] order, then the bone
    /// interior points bone by bone.
    pub scatterers: Vec<Scatterer>,
    pub motion: MotionParams,
}

/// Deterministic, randomly accessible gait sequence.
#[derive(Debug, Clone)]
pub struct SkeletonSequence {
    cfg: RadarConfig,
    params: DerivedParams,
    motion: MotionParams,
    seed: u64,
    gait_phase: f64,
    wander_phase: [f64; 2],
    clutter: Vec<Scatterer>,
}

impl SkeletonSequence {
    pub fn new(cfg: RadarConfig, motion: MotionParams, seed: u64) -> Result<Self> {
        let params = derive_params(&cfg)?;
        let speed = motion.max_speed();
        if speed >= params.max_velocity {
            return Err(Error::MotionExceedsVelocity {
                speed,
                limit: params.max_velocity,
            });
        }
        if motion.range_bins == 0 || motion.range_bins > cfg.samples_per_chirp {
            return Err(Error::InvalidArgument(format!(
                "range bins {} outside 1..={}",
                motion.range_bins, cfg.samples_per_chirp
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, u64::MAX));
        let gait_phase = rng.gen_range(0.0..2.0 * PI);
        let wander_phase = [rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.0..2.0 * PI)];
        let max_clutter_range = params.range_resolution * (motion.range_bins as f64 - 2.0);
        let clutter = (0..motion.clutter_count)
            .map(|_| {
                let range = rng.gen_range(0.6..max_clutter_range.max(0.7));
                let azimuth = rng.gen_range(-0.8..0.8);
                let phase: f64 = rng.gen_range(0.0..2.0 * PI);
                Scatterer::new(
                    range,
                    azimuth,
                    0.0,
                    Complex64::from_polar(motion.clutter_amplitude, phase),
                )
            })
            .collect();
        Ok(Self {
            cfg,
            params,
            motion,
            seed,
            gait_phase,
            wander_phase,
            clutter,
        })
    }

    pub fn config(&self) -> &RadarConfig {
        &self.cfg
    }

    pub fn motion(&self) -> &MotionParams {
        &self.motion
    }

    pub fn chain_options(&self) -> ChainOptions {
        ChainOptions {
            range_bins: self.motion.range_bins,
            window: self.motion.window,
        }
    }

    /// Gait phase offset φ0 and wander phases (ψx, ψy) drawn from the seed.
    pub fn phases(&self) -> (f64, [f64; 2]) {
        (self.gait_phase, self.wander_phase)
    }

    pub fn time(&self, frame: usize) -> f64 {
        frame as f64 * self.motion.frame_interval_s
    }

    /// Joint positions and velocities (m, m/s) at time `t`.
    pub fn kinematics(&self, t: f64) -> (Vec<[f64; 3]>, Vec<[f64; 3]>) {
        let m = &self.motion;
        let omega = 2.0 * PI * m.gait_frequency_hz;
        let phi = omega * t + self.gait_phase;
        let wx = 2.0 * PI * m.wander_frequency_hz[0];
        let wy = 2.0 * PI * m.wander_frequency_hz[1];
        let root = [
            m.root_center_m[0] + m.root_wander_m[0] * libm::sin(wx * t + self.wander_phase[0]),
            m.root_center_m[1] + m.root_wander_m[1] * libm::sin(wy * t + self.wander_phase[1]),
            0.0,
        ];
        let root_vel = [
            m.root_wander_m[0] * wx * libm::cos(wx * t + self.wander_phase[0]),
            m.root_wander_m[1] * wy * libm::cos(wy * t + self.wander_phase[1]),
            0.0,
        ];
        let (sin_phi, cos_phi) = (libm::sin(phi), libm::cos(phi));
        let (sin_2phi, cos_2phi) = (libm::sin(2.0 * phi), libm::cos(2.0 * phi));
        let mut positions = Vec::with_capacity(JOINT_NAMES.len());
        let mut velocities = Vec::with_capacity(JOINT_NAMES.len());
        for j in 0..JOINT_NAMES.len() {
            let swing = m.limb_amplitude_m * SWING[j];
            let bob = m.torso_amplitude_m * BOB[j];
            positions.push([
                root[0] + REST[j][0],
                root[1] + REST[j][1] + swing * sin_phi,
                root[2] + REST[j][2] + bob * sin_2phi,
            ]);
            velocities.push([
                root_vel[0],
                root_vel[1] + swing * omega * cos_phi,
                root_vel[2] + bob * 2.0 * omega * cos_2phi,
            ]);
        }
        (positions, velocities)
    }

    pub fn pose(&self, frame: usize) -> Pose {
        let (positions, _) = self.kinematics(self.time(frame));
        Pose::new(positions.iter().map(|p| p.map(|v| v * 1000.0)).collect())
            .expect("gait produces finite joints")
            .quantized()
    }

    /// Scatterer positions, velocities and reflectivities: joints first,
    /// then `bone_points` evenly spaced points per bone.
    fn body_points(&self, t: f64) -> Vec<([f64; 3], [f64; 3], f64)> {
        let (positions, velocities) = self.kinematics(t);
        let mut points: Vec<_> = (0..positions.len())
            .map(|j| (positions[j], velocities[j], RCS[j]))
            .collect();
        let n = self.motion.bone_points;
        for &(a, b) in &BONES {
            for i in 1..=n {
                let w = i as f64 / (n + 1) as f64;
                let lerp = |u: [f64; 3], v: [f64; 3]| {
                    [
                        u[0] + w * (v[0] - u[0]),
                        u[1] + w * (v[1] - u[1]),
                        u[2] + w * (v[2] - u[2]),
                    ]
                };
                points.push((
                    lerp(positions[a], positions[b]),
                    lerp(velocities[a], velocities[b]),
                    BONE_RCS * 0.5 * (RCS[a] + RCS[b]),
                ));
            }
        }
        points
    }

    pub fn scene(&self, frame: usize) -> Result<SkeletonScene> {
        let points = self.body_points(self.time(frame));
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(self.seed, 2 * frame as u64));
        let mut scatterers = Vec::with_capacity(points.len());
        for (p, v, rcs) in points {
            let range = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            let radial = -(p[0] * v[0] + p[1] * v[1] + p[2] * v[2]) / range;
            if radial.abs() >= self.params.max_velocity {
                return Err(Error::MotionExceedsVelocity {
                    speed: radial.abs(),
                    limit: self.params.max_velocity,
                });
            }
            let phase: f64 = rng.gen_range(0.0..2.0 * PI);
            scatterers.push(Scatterer::new(
                range,
                libm::asin(p[0] / range),
                radial,
                Complex64::from_polar(rcs, phase),
            ));
        }
        Ok(SkeletonScene {
            pose: self.pose(frame),
            scatterers,
            motion: self.motion,
        })
    }

    pub fn raw(&self, frame: usize) -> Result<RawCube> {
        let skeleton = self.scene(frame)?;
        let scene = Scene {
            scatterers: skeleton.scatterers,
            noise_sigma: self.motion.noise_sigma,
            clutter: self.clutter.clone(),
        };
        synthesize_frame(&scene, &self.cfg, mix_seed(self.seed, 2 * frame as u64 + 1))
    }

    pub fn frame(&self, frame: usize) -> Result<(RadCube, Pose)> {
        let raw = self.raw(frame)?;
        Ok((fft_chain(&raw, &self.chain_options())?, self.pose(frame)))
    }

    /// Frames `0..n`, generated in parallel and returned in index order.
    pub fn frames(&self, n: usize) -> Result<(Vec<RadCube>, Vec<Pose>)> {
        let pairs: Vec<(RadCube, Pose)> = (0..n)
            .into_par_iter()
            .map(|i| self.frame(i))
            .collect::<Result<_>>()?;
        Ok(pairs.into_iter().unzip())
    }
}

pub fn make_skeleton_dataset(
    n_frames: usize,
    motion: MotionParams,
    cfg: &RadarConfig,
    seed: u64,
) -> Result<(Vec<RadCube>, Vec<Pose>)> {
    if n_frames == 0 {
        return Err(Error::InvalidArgument("n_frames must be >= 1".into()));
    }
    SkeletonSequence::new(*cfg, motion, seed)?.frames(n_frames)
}
