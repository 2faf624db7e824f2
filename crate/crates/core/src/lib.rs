//! Physics-guided mmWave human pose estimation.
//!
//! An FMCW radar frame is turned into a range–angle–Doppler cube, filtered
//! by a spatial region of interest and a Doppler motion-consistency mask,
//! pooled at several scales and regressed to a 14-joint skeleton by a small
//! MLP. A CFAR/morphology front end is included as the classical baseline.
//!
//! ```
//! use radpose::{Pipeline, Profile, RadarConfig, SkeletonSequence, MotionParams};
//!
//! let cfg = RadarConfig::hupr_tdm();
//! let seq = SkeletonSequence::new(cfg, MotionParams::default(), 7).unwrap();
//! let (cube, _pose) = seq.frame(0).unwrap();
//! let pipeline = Pipeline::new(&cfg, Profile::balanced(), 64).unwrap();
//! let features = pipeline.features(&cube).unwrap();
//! assert_eq!(features.len(), 99);
//! ```

pub mod baseline;
pub mod bench;
pub mod error;
pub mod experiment;
pub mod fft;
pub mod flops;
pub mod hmsf;
pub mod io;
pub mod mcp;
pub mod pipeline;
pub mod profile;
pub mod pseudo_rad;
pub mod radar;
pub mod records;
pub mod regressor;
pub mod simulator;
pub mod ssp;
pub mod tensor;

pub use error::{Error, Result};
pub use fft::{fft_chain, fft_chain_reference, ChainOptions, Window};
pub use hmsf::{FeatureVector, PoolGrid, PoolSpec};
pub use mcp::{DopplerThresholds, MotionDescriptors};
pub use pipeline::{Pipeline, StageReport};
pub use profile::Profile;
pub use radar::{build_axis_maps, derive_params, AxisMaps, DerivedParams, RadarConfig, RawCube};
pub use regressor::{majpe, pa_majpe, MlpShape, MlpWeights, TrainConfig};
pub use simulator::{MotionParams, Scatterer, Scene, SkeletonSequence};
pub use ssp::SpatialBounds;
pub use tensor::{CubeDims, Pose, RadCube, RealCube};
