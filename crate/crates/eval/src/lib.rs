//! Trainable scalar value networks. Three architectures share one struct:
//! stacked valid-padding convolutions (C), or a same-padding convolution
//! followed by residual blocks (R1 with two blocks and a 1×1 convolution,
//! R2 with eight blocks), then dense layers into a single output neuron
//! scaled by `L·tanh`, which makes the output bound a structural invariant.
//! An optional policy head (one extra 1×1 convolution producing per-cell
//! logits, plus a pass logit where the game has one) supports PUCT search.
//!
//! All math is f32 with per-sample forward/backward passes, so batch
//! evaluation is exactly batch-partition invariant and checkpoints
//! round-trip bit-identically.

pub mod checkpoint;
pub mod layers;
pub mod network;
pub mod spec;
pub mod train;

pub use checkpoint::{load_checkpoint, save_checkpoint, CheckpointMeta};
pub use network::ValueNetwork;
pub use spec::{Architecture, NetworkSpec};
pub use train::{
    batch_grads, batch_loss, pretrain_terminal, train_step, PretrainConfig, PretrainStats,
    ReplaySample, TrainConfig, TrainLoss,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NetError {
    #[error("input shape mismatch: expected {expected:?}, got {got:?}")]
    ShapeMismatch { expected: (usize, usize, usize), got: (usize, usize, usize) },
    #[error("invalid network configuration: {0}")]
    Config(String),
    #[error("training step rejected: {0}; network state unchanged")]
    StepRejected(String),
    #[error("checkpoint i/o: {0}")]
    Io(String),
    #[error("checkpoint format: {0}")]
    Format(String),
}
