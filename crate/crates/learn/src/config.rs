//! Learning configuration, the A/B parameter presets, desk-scale variants,
//! and the `key = value` config-file format.

use crate::LearnError;
use mxz_eval::{Architecture, TrainConfig};
use mxz_games::{Encoding, GameConfig, GameId, TerminalHeuristic};
use mxz_search::SearchBudget;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Framework {
    Descent,
    AzLite,
}

impl Framework {
    pub fn name(&self) -> &'static str {
        match self {
            Framework::Descent => "descent",
            Framework::AzLite => "az-lite",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReplayMode {
    /// Memory cleared after each learning phase.
    Off,
    /// Retained under capacity eviction.
    Standard,
    /// Retained, with the newest game's samples guaranteed in each draw.
    Modified,
}

/// How long a training run lasts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RunBudget {
    Games(u64),
    /// Stop once this many network evaluations have been spent in self-play
    /// search (the fair cross-framework comparison axis).
    NetEvals(u64),
    WallSeconds(u64),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LearnConfig {
    pub game: GameConfig,
    pub framework: Framework,
    /// Search budget per action (τ as wall time, or iterations at desk scale).
    pub budget: SearchBudget,
    /// Training batch size B.
    pub batch_size: usize,
    /// Replay memory capacity μ (samples).
    pub memory_capacity: usize,
    /// Sampling rate σ: fraction of memory drawn per learning phase.
    pub sampling_rate: f64,
    pub heuristic: TerminalHeuristic,
    pub symmetry_augment: bool,
    pub sides_encoding: bool,
    pub replay_mode: ReplayMode,
    pub architecture: Architecture,
    pub filters: usize,
    pub dense: usize,
    /// Batched leaf evaluation in the self-play search.
    pub batched_eval: bool,
    /// PUCT exploration constant (az-lite).
    pub mcts_c: f64,
    pub mcts_fpu: bool,
    /// MCTS evaluation batch size under virtual loss (az-lite).
    pub mcts_batch: usize,
    /// Proportional-to-visits move sampling for the first k plies (az-lite).
    pub temperature_moves: usize,
    pub games_per_phase: usize,
    pub train: TrainConfig,
    /// Random games for terminal pre-initialization (0 disables).
    pub pretrain_games: usize,
    pub pretrain_epochs: usize,
    pub seed: u64,
}

impl LearnConfig {
    fn base(game: GameConfig, framework: Framework) -> LearnConfig {
        let heuristic = default_heuristic(game.id, framework);
        LearnConfig {
            game,
            framework,
            budget: SearchBudget::Iterations(if framework == Framework::Descent { 128 } else { 160 }),
            batch_size: 256,
            memory_capacity: 60_000,
            sampling_rate: 0.05,
            heuristic,
            symmetry_augment: false,
            sides_encoding: false,
            replay_mode: ReplayMode::Standard,
            architecture: if framework == Framework::Descent { Architecture::C } else { Architecture::R1 },
            filters: if framework == Framework::Descent { 24 } else { 16 },
            dense: if framework == Framework::Descent { 64 } else { 32 },
            batched_eval: true,
            mcts_c: 1.25,
            mcts_fpu: true,
            mcts_batch: 1,
            temperature_moves: 6,
            games_per_phase: 1,
            train: TrainConfig::default(),
            pretrain_games: 2_000,
            pretrain_epochs: 2,
            seed: 0,
        }
    }

    /// The A parameter set: τ=1s, B=3000, μ=2·10⁶, σ=5%, standard replay,
    /// no symmetry augmentation, no sides encoding.
    pub fn preset_a(game: GameConfig) -> LearnConfig {
        LearnConfig {
            budget: SearchBudget::TimeMillis(1_000),
            batch_size: 3_000,
            memory_capacity: 2_000_000,
            sampling_rate: 0.05,
            replay_mode: ReplayMode::Standard,
            symmetry_augment: false,
            sides_encoding: false,
            ..LearnConfig::base(game, Framework::Descent)
        }
    }

    /// The B parameter set: τ=2s, B=3000, μ=250, σ=2%, plus symmetry
    /// augmentation, modified experience replay and sides encoding.
    pub fn preset_b(game: GameConfig) -> LearnConfig {
        LearnConfig {
            budget: SearchBudget::TimeMillis(2_000),
            batch_size: 3_000,
            memory_capacity: 250,
            sampling_rate: 0.02,
            replay_mode: ReplayMode::Modified,
            symmetry_augment: true,
            sides_encoding: true,
            ..LearnConfig::base(game, Framework::Descent)
        }
    }

    /// Desk-scale descent config: iteration budgets for machine
    /// independence, B-style feature set (symmetry, sides, modified replay).
    pub fn desk_descent(game: GameConfig) -> LearnConfig {
        LearnConfig {
            symmetry_augment: true,
            sides_encoding: true,
            replay_mode: ReplayMode::Modified,
            ..LearnConfig::base(game, Framework::Descent)
        }
    }

    /// Desk-scale az-lite baseline: PUCT with first-play urgency, outcome
    /// targets, policy head.
    pub fn desk_azlite(game: GameConfig) -> LearnConfig {
        LearnConfig {
            heuristic: TerminalHeuristic::ClassicGain,
            ..LearnConfig::base(game, Framework::AzLite)
        }
    }

    pub fn preset(name: &str, game: GameConfig) -> Result<LearnConfig, LearnError> {
        match name.trim().to_ascii_lowercase().as_str() {
            "a" => Ok(LearnConfig::preset_a(game)),
            "b" => Ok(LearnConfig::preset_b(game)),
            "desk-descent" | "desk" => Ok(LearnConfig::desk_descent(game)),
            "desk-azlite" | "azlite" | "az-lite" => Ok(LearnConfig::desk_azlite(game)),
            other => Err(LearnError::Config(format!("unknown preset `{other}`"))),
        }
    }

    pub fn encoding(&self) -> Encoding {
        Encoding { sides: self.sides_encoding }
    }

    pub fn validate(&self) -> Result<(), LearnError> {
        if !(self.sampling_rate > 0.0 && self.sampling_rate <= 1.0) {
            return Err(LearnError::Config(format!("sampling rate σ={} not in (0, 1]", self.sampling_rate)));
        }
        if self.batch_size == 0 {
            return Err(LearnError::Config("batch size B must be >= 1".into()));
        }
        if self.framework == Framework::AzLite {
            if self.memory_capacity < self.batch_size {
                return Err(LearnError::Config("az-lite requires μ >= B".into()));
            }
            if self.heuristic != TerminalHeuristic::ClassicGain {
                return Err(LearnError::Config(
                    "az-lite trains on game outcomes; heuristic must be classic gain".into(),
                ));
            }
        }
        self.heuristic
            .bound(&self.game)
            .map_err(|e| LearnError::Config(e.to_string()))?;
        Ok(())
    }

    /// One line capturing everything that affects training, for digests.
    pub fn digest_text(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// Parse a `key = value` config file (# comments allowed). Unknown keys
    /// are rejected. `game` and `preset` apply first regardless of order.
    pub fn from_file(path: &Path) -> Result<LearnConfig, LearnError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LearnError::Io(format!("{}: {e}", path.display())))?;
        LearnConfig::from_kv_text(&text)
    }

    pub fn from_kv_text(text: &str) -> Result<LearnConfig, LearnError> {
        let mut pairs = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(LearnError::Config(format!("line {}: expected key = value", lineno + 1)));
            };
            pairs.push((k.trim().to_ascii_lowercase(), v.trim().to_string()));
        }
        let game = match pairs.iter().find(|(k, _)| k == "game") {
            Some((_, v)) => GameConfig::parse(v).map_err(|e| LearnError::Config(e.to_string()))?,
            None => GameConfig::hex(5).expect("default game"),
        };
        let mut cfg = match pairs.iter().find(|(k, _)| k == "preset") {
            Some((_, v)) => LearnConfig::preset(v, game)?,
            None => LearnConfig::desk_descent(game),
        };
        for (k, v) in &pairs {
            cfg.apply_kv(k, v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn apply_kv(&mut self, key: &str, value: &str) -> Result<(), LearnError> {
        let bad = |what: &str| LearnError::Config(format!("bad value `{value}` for {what}"));
        match key {
            "game" | "preset" => {} // handled by from_kv_text
            "framework" => {
                self.framework = match value.to_ascii_lowercase().as_str() {
                    "descent" => Framework::Descent,
                    "az-lite" | "azlite" => Framework::AzLite,
                    _ => return Err(bad("framework")),
                }
            }
            "budget" | "tau" => self.budget = value.parse().map_err(|_| bad("budget"))?,
            "batch_size" | "b" => self.batch_size = value.parse().map_err(|_| bad("batch_size"))?,
            "memory" | "mu" => self.memory_capacity = value.parse().map_err(|_| bad("memory"))?,
            "sampling_rate" | "sigma" => {
                self.sampling_rate = value.parse().map_err(|_| bad("sampling_rate"))?
            }
            "heuristic" => {
                self.heuristic =
                    TerminalHeuristic::parse(value).map_err(|e| LearnError::Config(e.to_string()))?
            }
            "symmetry" => self.symmetry_augment = parse_bool(value).ok_or_else(|| bad("symmetry"))?,
            "sides" => self.sides_encoding = parse_bool(value).ok_or_else(|| bad("sides"))?,
            "replay" => {
                self.replay_mode = match value.to_ascii_lowercase().as_str() {
                    "off" => ReplayMode::Off,
                    "standard" => ReplayMode::Standard,
                    "modified" => ReplayMode::Modified,
                    _ => return Err(bad("replay")),
                }
            }
            "arch" | "architecture" => {
                self.architecture =
                    Architecture::parse(value).map_err(|e| LearnError::Config(e.to_string()))?
            }
            "filters" | "f" => self.filters = value.parse().map_err(|_| bad("filters"))?,
            "dense" | "d" => self.dense = value.parse().map_err(|_| bad("dense"))?,
            "batched_eval" => self.batched_eval = parse_bool(value).ok_or_else(|| bad("batched_eval"))?,
            "mcts_c" => self.mcts_c = value.parse().map_err(|_| bad("mcts_c"))?,
            "mcts_fpu" => self.mcts_fpu = parse_bool(value).ok_or_else(|| bad("mcts_fpu"))?,
            "mcts_batch" => self.mcts_batch = value.parse().map_err(|_| bad("mcts_batch"))?,
            "temperature_moves" => {
                self.temperature_moves = value.parse().map_err(|_| bad("temperature_moves"))?
            }
            "games_per_phase" => {
                self.games_per_phase = value.parse().map_err(|_| bad("games_per_phase"))?
            }
            "lr" | "learning_rate" => {
                self.train.learning_rate = value.parse().map_err(|_| bad("learning_rate"))?
            }
            "clip" => self.train.clip = value.parse().map_err(|_| bad("clip"))?,
            "pretrain_games" => {
                self.pretrain_games = value.parse().map_err(|_| bad("pretrain_games"))?
            }
            "pretrain_epochs" => {
                self.pretrain_epochs = value.parse().map_err(|_| bad("pretrain_epochs"))?
            }
            "seed" => self.seed = value.parse().map_err(|_| bad("seed"))?,
            other => return Err(LearnError::Config(format!("unknown config key `{other}`"))),
        }
        Ok(())
    }
}

fn default_heuristic(game: GameId, framework: Framework) -> TerminalHeuristic {
    match (framework, game) {
        (Framework::AzLite, _) => TerminalHeuristic::ClassicGain,
        (_, GameId::Othello) => TerminalHeuristic::Scoring,
        _ => TerminalHeuristic::Depth,
    }
}

fn parse_bool(v: &str) -> Option<bool> {
    match v.to_ascii_lowercase().as_str() {
        "on" | "true" | "yes" | "1" => Some(true),
        "off" | "false" | "no" | "0" => Some(false),
        _ => None,
    }
}
