//! Checkpoint persistence. Format `MXZ1`:
//!
//! ```text
//! bytes 0..4   magic "MXZ1" (version 1)
//! u32 LE       JSON header length
//! header       CheckpointMeta as JSON
//! payload      param_count little-endian f32, layer-ordered, row-major
//! ```
//!
//! Parameters are stored exactly as held in memory, so
//! load(save(net)) reproduces bit-identical evaluations.

use crate::network::ValueNetwork;
use crate::spec::NetworkSpec;
use crate::NetError;
use mxz_games::{GameId, TerminalHeuristic};
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};
use std::path::Path;

pub const MAGIC: &[u8; 4] = b"MXZ1";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckpointMeta {
    pub version: u32,
    pub spec: NetworkSpec,
    /// Present when the network carries a policy head.
    pub policy_game: Option<GameId>,
    pub step: u64,
    pub games_trained: u64,
    pub init_seed: u64,
    /// Heuristic whose values the network was trained to predict.
    #[serde(default)]
    pub heuristic: Option<TerminalHeuristic>,
    /// Digest of the training configuration that produced this checkpoint.
    pub config_digest: String,
    pub param_count: usize,
}

pub fn save_checkpoint(net: &ValueNetwork, path: &Path, config_digest: &str) -> Result<(), NetError> {
    let meta = CheckpointMeta {
        version: 1,
        spec: net.spec,
        policy_game: net.policy_game(),
        step: net.step,
        games_trained: net.games_trained,
        init_seed: net.init_seed,
        heuristic: net.heuristic,
        config_digest: config_digest.to_string(),
        param_count: net.param_count(),
    };
    let header = serde_json::to_vec(&meta).map_err(|e| NetError::Io(e.to_string()))?;
    let io = |e: std::io::Error| NetError::Io(format!("{}: {e}", path.display()));
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir).map_err(io)?;
        }
    }
    let mut file = std::io::BufWriter::new(std::fs::File::create(path).map_err(io)?);
    file.write_all(MAGIC).map_err(io)?;
    file.write_all(&(header.len() as u32).to_le_bytes()).map_err(io)?;
    file.write_all(&header).map_err(io)?;
    for p in net.flat_params() {
        file.write_all(&p.to_le_bytes()).map_err(io)?;
    }
    file.flush().map_err(io)?;
    Ok(())
}

pub fn load_checkpoint(path: &Path) -> Result<(ValueNetwork, CheckpointMeta), NetError> {
    let io = |e: std::io::Error| NetError::Io(format!("{}: {e}", path.display()));
    let mut file = std::io::BufReader::new(std::fs::File::open(path).map_err(io)?);
    let mut magic = [0u8; 4];
    file.read_exact(&mut magic).map_err(io)?;
    if &magic != MAGIC {
        return Err(NetError::Format(format!(
            "bad magic {:?}; not an MXZ1 checkpoint",
            String::from_utf8_lossy(&magic)
        )));
    }
    let mut len = [0u8; 4];
    file.read_exact(&mut len).map_err(io)?;
    let mut header = vec![0u8; u32::from_le_bytes(len) as usize];
    file.read_exact(&mut header).map_err(io)?;
    let meta: CheckpointMeta =
        serde_json::from_slice(&header).map_err(|e| NetError::Format(e.to_string()))?;
    if meta.version != 1 {
        return Err(NetError::Format(format!("unsupported checkpoint version {}", meta.version)));
    }
    let mut net = match meta.policy_game {
        Some(game) => ValueNetwork::with_policy(meta.spec, meta.init_seed, game)?,
        None => ValueNetwork::new(meta.spec, meta.init_seed)?,
    };
    if net.param_count() != meta.param_count {
        return Err(NetError::Format(format!(
            "parameter count mismatch: header says {}, architecture needs {}",
            meta.param_count,
            net.param_count()
        )));
    }
    let mut payload = vec![0u8; meta.param_count * 4];
    file.read_exact(&mut payload).map_err(io)?;
    let params: Vec<f32> = payload
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
        .collect();
    net.set_flat_params(&params)?;
    net.step = meta.step;
    net.games_trained = meta.games_trained;
    net.heuristic = meta.heuristic;
    Ok((net, meta))
}

/// Stable digest of an arbitrary config string, hex-encoded.
pub fn digest(text: &str) -> String {
    use std::hash::{Hash, Hasher};
    let mut h = rustc_hash::FxHasher::default();
    text.hash(&mut h);
    format!("{:016x}", h.finish())
}
