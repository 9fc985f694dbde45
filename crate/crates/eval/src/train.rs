//! Training: MSE value regression (plus cross-entropy when a policy head is
//! present), Adam with gradient-norm clipping, and supervised pre-training
//! on random terminal states.

use crate::network::ValueNetwork;
use crate::NetError;
use mxz_games::encode::{encode, FeatureTensor};
use mxz_games::playout::random_playout;
use mxz_games::{Encoding, GameConfig, TerminalHeuristic};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// One training sample: an encoded state, its scalar target, and (for
/// policy networks) a sparse distribution over policy-logit indices.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReplaySample {
    pub features: FeatureTensor,
    pub target: f32,
    pub policy: Option<Vec<(u32, f32)>>,
}

impl ReplaySample {
    pub fn value(features: FeatureTensor, target: f32) -> ReplaySample {
        ReplaySample { features, target, policy: None }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TrainConfig {
    pub learning_rate: f32,
    /// Global gradient-norm clip.
    pub clip: f32,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig { learning_rate: 1e-3, clip: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct TrainLoss {
    pub total: f64,
    pub value_mse: f64,
    pub policy_ce: f64,
}

/// Loss of the network on a batch without touching any state; the oracle
/// side of gradient checks uses this.
pub fn batch_loss(net: &ValueNetwork, batch: &[ReplaySample]) -> Result<TrainLoss, NetError> {
    let mut grads = Vec::new();
    loss_and_grads(net, batch, false, &mut grads)
}

fn loss_and_grads(
    net: &ValueNetwork,
    batch: &[ReplaySample],
    want_grads: bool,
    grads: &mut Vec<f32>,
) -> Result<TrainLoss, NetError> {
    if batch.is_empty() {
        return Err(NetError::Config("training batch is empty".into()));
    }
    let bound = net.spec.bound as f32;
    for s in batch {
        net.check_shape(&s.features)?;
        if !s.target.is_finite() || s.target.abs() > bound + 1e-6 {
            return Err(NetError::Config(format!(
                "target {} outside [-{bound}, {bound}]",
                s.target
            )));
        }
    }
    if want_grads {
        grads.clear();
        grads.resize(net.param_count(), 0.0);
    }
    let inv_n = 1.0 / batch.len() as f32;
    let mut value_mse = 0.0f64;
    let mut policy_ce = 0.0f64;
    for sample in batch {
        let fwd = net.forward(&sample.features.data);
        let err = fwd.value - sample.target;
        value_mse += f64::from(err) * f64::from(err);
        let mut dlogits_store = None;
        if let (Some(logits), Some(target)) = (&fwd.policy_logits, &sample.policy) {
            // Cross-entropy against the full softmax; illegal logits carry
            // zero target mass and get pushed down.
            let max = logits.iter().cloned().fold(f32::NEG_INFINITY, f32::max);
            let exps: Vec<f32> = logits.iter().map(|&z| (z - max).exp()).collect();
            let sum: f32 = exps.iter().sum();
            let log_sum = sum.ln() + max;
            let mut ce = 0.0f32;
            let mut dlogits: Vec<f32> = exps.iter().map(|&e| e / sum * inv_n).collect();
            for &(idx, p) in target {
                ce -= p * (logits[idx as usize] - log_sum);
                dlogits[idx as usize] -= p * inv_n;
            }
            policy_ce += f64::from(ce);
            dlogits_store = Some(dlogits);
        }
        if want_grads {
            let dvalue = 2.0 * err * inv_n;
            net.backward(&fwd, dvalue, dlogits_store.as_deref(), grads);
        }
    }
    value_mse /= batch.len() as f64;
    policy_ce /= batch.len() as f64;
    Ok(TrainLoss { total: value_mse + policy_ce, value_mse, policy_ce })
}

/// One gradient step on the batch. Returns the pre-step loss. A non-finite
/// loss or gradient rejects the step and leaves the network untouched.
pub fn train_step(
    net: &mut ValueNetwork,
    batch: &[ReplaySample],
    cfg: TrainConfig,
) -> Result<TrainLoss, NetError> {
    let mut grads = Vec::new();
    let loss = loss_and_grads(net, batch, true, &mut grads)?;
    if !loss.total.is_finite() {
        return Err(NetError::StepRejected(format!("non-finite loss {}", loss.total)));
    }
    let norm_sq: f64 = grads.iter().map(|&g| f64::from(g) * f64::from(g)).sum();
    if !norm_sq.is_finite() {
        return Err(NetError::StepRejected("non-finite gradient".into()));
    }
    let norm = norm_sq.sqrt();
    if norm > f64::from(cfg.clip) {
        let scale = (f64::from(cfg.clip) / norm) as f32;
        for g in &mut grads {
            *g *= scale;
        }
    }
    // Adam with bias correction.
    net.adam_t += 1;
    let t = net.adam_t as f64;
    let (b1, b2, eps) = (0.9f64, 0.999f64, 1e-8f64);
    let c1 = 1.0 - b1.powf(t);
    let c2 = 1.0 - b2.powf(t);
    let lr = f64::from(cfg.learning_rate);
    let mut updates = vec![0.0f32; grads.len()];
    for i in 0..grads.len() {
        let g = f64::from(grads[i]);
        let m = b1 * f64::from(net.adam_m[i]) + (1.0 - b1) * g;
        let v = b2 * f64::from(net.adam_v[i]) + (1.0 - b2) * g * g;
        net.adam_m[i] = m as f32;
        net.adam_v[i] = v as f32;
        updates[i] = (lr * (m / c1) / ((v / c2).sqrt() + eps)) as f32;
    }
    let mut params = net.flat_params();
    for (p, u) in params.iter_mut().zip(&updates) {
        *p -= u;
    }
    net.set_flat_params(&params)?;
    net.step += 1;
    Ok(loss)
}

/// Analytic gradient of the batch loss in flat layer order (pre-clip);
/// exposed for finite-difference verification.
pub fn batch_grads(net: &ValueNetwork, batch: &[ReplaySample]) -> Result<Vec<f32>, NetError> {
    let mut grads = Vec::new();
    loss_and_grads(net, batch, true, &mut grads)?;
    Ok(grads)
}

/// Value MSE of the batch evaluated through the f64 shadow forward pass;
/// the numeric side of gradient checks differentiates this.
pub fn shadow_value_loss_f64(net: &ValueNetwork, batch: &[ReplaySample]) -> Result<f64, NetError> {
    let mut acc = 0.0f64;
    for s in batch {
        let v = net.shadow_value_f64(&s.features)?;
        let err = v - f64::from(s.target);
        acc += err * err;
    }
    Ok(acc / batch.len() as f64)
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PretrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub train: TrainConfig,
    pub encoding: Encoding,
    pub seed: u64,
}

impl Default for PretrainConfig {
    fn default() -> Self {
        PretrainConfig {
            epochs: 3,
            batch_size: 64,
            train: TrainConfig::default(),
            encoding: Encoding::default(),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PretrainStats {
    pub games: usize,
    pub samples: usize,
    pub final_loss: f64,
}

/// Pre-initialize a value network on the terminal states of uniformly
/// random games: play `n_games`, collect one (terminal state, heuristic
/// value) sample per game, and regress for the configured epochs.
pub fn pretrain_terminal(
    net: &mut ValueNetwork,
    game: &GameConfig,
    n_games: usize,
    heuristic: TerminalHeuristic,
    cfg: &PretrainConfig,
) -> Result<PretrainStats, NetError> {
    if n_games == 0 {
        return Err(NetError::Config("pretraining needs at least one game".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut samples = Vec::with_capacity(n_games);
    for _ in 0..n_games {
        let end = random_playout(&game.initial_state(), &mut rng);
        let target = end.terminal_value(heuristic) as f32;
        samples.push(ReplaySample::value(encode(&end, cfg.encoding), target));
    }
    let mut final_loss = 0.0;
    let mut order: Vec<usize> = (0..samples.len()).collect();
    for _ in 0..cfg.epochs {
        order.shuffle(&mut rng);
        for chunk in order.chunks(cfg.batch_size.max(1)) {
            let batch: Vec<ReplaySample> = chunk.iter().map(|&i| samples[i].clone()).collect();
            final_loss = train_step(net, &batch, cfg.train)?.total;
        }
    }
    Ok(PretrainStats { games: n_games, samples: samples.len(), final_loss })
}
