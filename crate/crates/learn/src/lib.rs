//! The two zero-learning loops: the descent framework (deep best-first
//! self-play whose whole search tree becomes training data) and an
//! AlphaZero-style baseline (PUCT self-play learning game outcomes and root
//! visit policies), sharing replay memory, configuration presets and the
//! training-run driver.

pub mod config;
pub mod evaluator;
pub mod memory;
pub mod record;
pub mod run;
pub mod selfplay;

pub use config::{Framework, LearnConfig, ReplayMode, RunBudget};
pub use evaluator::NetEvaluator;
pub use memory::ReplayMemory;
pub use record::GameRecord;
pub use run::{training_run, RunOptions, RunSummary};
pub use selfplay::{azlite_selfplay_game, descent_selfplay_game, learning_phase, PhaseStats};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LearnError {
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Search(#[from] mxz_search::SearchError),
    #[error(transparent)]
    Net(#[from] mxz_eval::NetError),
    #[error("i/o: {0}")]
    Io(String),
}

/// Deterministic seed derivation (splitmix64 over seed ^ tag).
pub fn mix_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
