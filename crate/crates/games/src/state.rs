//! The game-agnostic state wrapper and terminal heuristics.

use crate::breakthrough::BreakthroughState;
use crate::hex::HexState;
use crate::othello::OthelloState;
use crate::{Action, ConfigError, GameConfig, GameId, Player, RuleViolation};
use serde::{Deserialize, Serialize};

/// Terminal-state evaluation. `ClassicGain` is the plain game result,
/// `Depth` favours quick wins and slow defeats, `Scoring` the final score
/// differential (Othello only, where a score exists).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TerminalHeuristic {
    ClassicGain,
    Depth,
    Scoring,
}

impl TerminalHeuristic {
    pub fn parse(s: &str) -> Result<TerminalHeuristic, ConfigError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "classic" | "classic-gain" | "gain" => Ok(TerminalHeuristic::ClassicGain),
            "depth" => Ok(TerminalHeuristic::Depth),
            "scoring" | "score" => Ok(TerminalHeuristic::Scoring),
            other => Err(ConfigError::BadMove(format!("unknown heuristic `{other}`"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            TerminalHeuristic::ClassicGain => "classic",
            TerminalHeuristic::Depth => "depth",
            TerminalHeuristic::Scoring => "scoring",
        }
    }

    /// Bound `L` on `|terminal_value|` for this heuristic and game.
    pub fn bound(&self, config: &GameConfig) -> Result<f64, ConfigError> {
        match self {
            TerminalHeuristic::ClassicGain => Ok(1.0),
            TerminalHeuristic::Depth => Ok(config.l_max() as f64),
            TerminalHeuristic::Scoring => {
                if config.id == GameId::Othello {
                    Ok(config.cell_count() as f64)
                } else {
                    Err(ConfigError::HeuristicUnsupported { heuristic: "scoring", game: config.id })
                }
            }
        }
    }
}

/// An immutable position in one of the three games. All operations are pure;
/// `apply` returns a new state. States hash and compare on their full
/// identity (board, side to move, move count, Othello pass streak), which is
/// exactly the transposition-table key with collision rejection via `Eq`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GameState {
    Hex(HexState),
    Othello(OthelloState),
    Breakthrough(BreakthroughState),
}

impl GameState {
    pub fn game_id(&self) -> GameId {
        match self {
            GameState::Hex(_) => GameId::Hex,
            GameState::Othello(_) => GameId::Othello,
            GameState::Breakthrough(_) => GameId::Breakthrough,
        }
    }

    pub fn config(&self) -> GameConfig {
        match self {
            GameState::Hex(s) => GameConfig {
                id: GameId::Hex,
                rows: s.size(),
                cols: s.size(),
                breakthrough_cap: 0,
            },
            GameState::Othello(s) => GameConfig {
                id: GameId::Othello,
                rows: s.size(),
                cols: s.size(),
                breakthrough_cap: 0,
            },
            GameState::Breakthrough(s) => GameConfig {
                id: GameId::Breakthrough,
                rows: s.rows(),
                cols: s.cols(),
                breakthrough_cap: s.cap(),
            },
        }
    }

    /// (rows, cols).
    pub fn dims(&self) -> (u8, u8) {
        let cfg = self.config();
        (cfg.rows, cfg.cols)
    }

    /// Raw cell markers, row-major: 0 empty, 1 first player, 2 second player.
    pub fn cells(&self) -> &[u8] {
        match self {
            GameState::Hex(s) => s.cells(),
            GameState::Othello(s) => s.cells(),
            GameState::Breakthrough(s) => s.cells(),
        }
    }

    pub fn to_move(&self) -> Player {
        match self {
            GameState::Hex(s) => s.to_move(),
            GameState::Othello(s) => s.to_move(),
            GameState::Breakthrough(s) => s.to_move(),
        }
    }

    /// Number of moves played so far (ℓ). Othello passes count.
    pub fn move_count(&self) -> u16 {
        match self {
            GameState::Hex(s) => s.move_count(),
            GameState::Othello(s) => s.move_count(),
            GameState::Breakthrough(s) => s.move_count(),
        }
    }

    pub fn pass_streak(&self) -> u8 {
        match self {
            GameState::Othello(s) => s.pass_streak(),
            _ => 0,
        }
    }

    pub fn is_terminal(&self) -> bool {
        match self {
            GameState::Hex(s) => s.is_terminal(),
            GameState::Othello(s) => s.is_terminal(),
            GameState::Breakthrough(s) => s.is_terminal(),
        }
    }

    /// Legal actions in a deterministic stable order (row-major, and for
    /// Breakthrough by origin then destination). Panics on terminal states:
    /// querying one is a usage error.
    pub fn legal_actions(&self) -> Vec<Action> {
        match self {
            GameState::Hex(s) => s.legal_actions(),
            GameState::Othello(s) => s.legal_actions(),
            GameState::Breakthrough(s) => s.legal_actions(),
        }
    }

    pub fn apply(&self, action: Action) -> Result<GameState, RuleViolation> {
        match self {
            GameState::Hex(s) => s.apply(action).map(GameState::Hex),
            GameState::Othello(s) => s.apply(action).map(GameState::Othello),
            GameState::Breakthrough(s) => s.apply(action).map(GameState::Breakthrough),
        }
    }

    /// Game result in {-1, 0, +1} from the first player's perspective.
    /// Panics on non-terminal states.
    pub fn gain(&self) -> f64 {
        match self {
            GameState::Hex(s) => s.gain(),
            GameState::Othello(s) => {
                assert!(s.is_terminal(), "gain queried on a non-terminal othello state");
                s.gain()
            }
            GameState::Breakthrough(s) => s.gain(),
        }
    }

    /// Evaluate a terminal state under `heuristic`, from the first player's
    /// perspective. Always within `[-L, L]` for the heuristic's bound.
    pub fn terminal_value(&self, heuristic: TerminalHeuristic) -> f64 {
        assert!(self.is_terminal(), "terminal_value queried on a non-terminal state");
        match heuristic {
            TerminalHeuristic::ClassicGain => self.gain(),
            TerminalHeuristic::Depth => {
                let l_max = self.config().l_max() as f64;
                self.gain() * (l_max + 1.0 - self.move_count() as f64)
            }
            TerminalHeuristic::Scoring => match self {
                GameState::Othello(s) => s.differential() as f64,
                _ => panic!("scoring heuristic is only defined for othello"),
            },
        }
    }
}
