//! Pose regression network: a three-layer ReLU MLP, its training loop and
//! the joint-error metrics.

mod metrics;
mod mlp;
mod train;

pub use metrics::{majpe, pa_majpe, procrustes_align, symmetric_eigen};
pub use mlp::{
    accumulate_gradient, forward_raw, half_mse, param_count, prn_backward, prn_forward,
    Activations, MlpShape, MlpWeights,
};
pub use train::{predict, train, TrainConfig, TrainReport};
