//! Rules, terminal scoring, symmetries and tensor encoding for the three
//! supported games: Hex (n×n), Othello (even n×n) and Breakthrough (h×w).
//!
//! Everything here is pure and deterministic: states are immutable values,
//! `apply` returns a fresh state, and action order is fixed row-major so that
//! tie-breaking downstream is reproducible.

pub mod breakthrough;
pub mod encode;
pub mod hex;
pub mod notation;
pub mod othello;
pub mod playout;
pub mod state;
pub mod symmetry;

pub use encode::{Encoding, FeatureTensor};
pub use state::{GameState, TerminalHeuristic};
pub use symmetry::Symmetry;

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// The two players. All scalar values in this workspace are expressed from
/// `First`'s perspective (zero-sum convention).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    First,
    Second,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::First => Player::Second,
            Player::Second => Player::First,
        }
    }

    /// +1.0 for `First`, -1.0 for `Second`.
    pub fn sign(self) -> f64 {
        match self {
            Player::First => 1.0,
            Player::Second => -1.0,
        }
    }
}

/// Which game a state belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GameId {
    Hex,
    Othello,
    Breakthrough,
}

impl fmt::Display for GameId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameId::Hex => write!(f, "hex"),
            GameId::Othello => write!(f, "othello"),
            GameId::Breakthrough => write!(f, "breakthrough"),
        }
    }
}

impl FromStr for GameId {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "hex" => Ok(GameId::Hex),
            "othello" | "reversi" => Ok(GameId::Othello),
            "breakthrough" | "bt" => Ok(GameId::Breakthrough),
            other => Err(ConfigError::UnknownGame(other.to_string())),
        }
    }
}

/// A board coordinate. `row` 0 is the top row, `col` 0 the leftmost column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Coord {
    pub row: u8,
    pub col: u8,
}

impl Coord {
    pub fn new(row: u8, col: u8) -> Coord {
        Coord { row, col }
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", (b'a' + self.col) as char, self.row as u16 + 1)
    }
}

/// One move. Hex and Othello place a stone (`Place`), Othello additionally
/// passes when no placement flips (`Pass`), Breakthrough steps a piece one
/// row forward (`Step`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Action {
    Place(Coord),
    Pass,
    Step { from: Coord, to: Coord },
}

/// Rejected `apply` calls name the rule that was violated.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RuleViolation {
    #[error("game is already over")]
    GameOver,
    #[error("cell {0} is occupied")]
    CellOccupied(Coord),
    #[error("cell {0} is outside the board")]
    OutOfBounds(Coord),
    #[error("placement at {0} flips no disc")]
    NoFlip(Coord),
    #[error("pass is illegal while a flipping placement exists")]
    PassWithMoves,
    #[error("no piece of the side to move on {0}")]
    NotYourPiece(Coord),
    #[error("destination {to} is not reachable from {from}: {why}")]
    BadStep { from: Coord, to: Coord, why: &'static str },
    #[error("action kind {0:?} does not belong to this game")]
    WrongActionKind(Action),
}

/// Errors raised while building configurations (sizes, heuristics, notation).
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("unknown game `{0}`")]
    UnknownGame(String),
    #[error("{0}")]
    InvalidSize(String),
    #[error("heuristic `{heuristic}` is not defined for {game}")]
    HeuristicUnsupported { heuristic: &'static str, game: GameId },
    #[error("cannot parse `{0}` as a move")]
    BadMove(String),
    #[error("cannot parse board text: {0}")]
    BadBoard(String),
}

/// A game plus its board dimensions; the factory for initial states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GameConfig {
    pub id: GameId,
    pub rows: u8,
    pub cols: u8,
    /// Move-count cap used as `L_max` for Breakthrough. Unreachable in play:
    /// every Breakthrough move advances one piece one row, so a game lasts at
    /// most sum-over-pieces of rows-to-travel, far below the default cap.
    pub breakthrough_cap: u16,
}

impl GameConfig {
    pub fn hex(n: u8) -> Result<GameConfig, ConfigError> {
        if n < 2 || n > 13 {
            return Err(ConfigError::InvalidSize(format!("hex size {n} not in 2..=13")));
        }
        Ok(GameConfig { id: GameId::Hex, rows: n, cols: n, breakthrough_cap: 0 })
    }

    pub fn othello(n: u8) -> Result<GameConfig, ConfigError> {
        if n < 4 || n > 12 || n % 2 != 0 {
            return Err(ConfigError::InvalidSize(format!("othello size {n} must be even, 4..=12")));
        }
        Ok(GameConfig { id: GameId::Othello, rows: n, cols: n, breakthrough_cap: 0 })
    }

    pub fn breakthrough(rows: u8, cols: u8) -> Result<GameConfig, ConfigError> {
        if rows < 3 || cols < 2 || rows > 10 || cols > 10 {
            return Err(ConfigError::InvalidSize(format!(
                "breakthrough {rows}x{cols} not in 3..=10 x 2..=10"
            )));
        }
        Ok(GameConfig { id: GameId::Breakthrough, rows, cols, breakthrough_cap: 1024 })
    }

    /// Parse "hex5", "othello6", "breakthrough5x5" and friends.
    pub fn parse(spec: &str) -> Result<GameConfig, ConfigError> {
        let s = spec.trim().to_ascii_lowercase();
        let split = s.find(|c: char| c.is_ascii_digit()).unwrap_or(s.len());
        let (name, size) = s.split_at(split);
        let id: GameId = name.trim_end_matches(['-', '_', ' ']).parse()?;
        match id {
            GameId::Hex => GameConfig::hex(parse_dim(size, 5)?),
            GameId::Othello => GameConfig::othello(parse_dim(size, 6)?),
            GameId::Breakthrough => {
                if size.is_empty() {
                    GameConfig::breakthrough(5, 5)
                } else if let Some((r, c)) = size.split_once('x') {
                    GameConfig::breakthrough(parse_dim(r, 5)?, parse_dim(c, 5)?)
                } else {
                    let n = parse_dim(size, 5)?;
                    GameConfig::breakthrough(n, n)
                }
            }
        }
    }

    pub fn cell_count(&self) -> usize {
        self.rows as usize * self.cols as usize
    }

    /// Upper bound on the number of moves in any game (`L_max`).
    pub fn l_max(&self) -> u16 {
        match self.id {
            GameId::Hex => self.cell_count() as u16,
            // Placements plus a pass allowance: at most one pass between two
            // placements (two in a row end the game) plus the two final ones.
            GameId::Othello => 2 * (self.cell_count() as u16 - 4) + 2,
            GameId::Breakthrough => self.breakthrough_cap,
        }
    }

    pub fn initial_state(&self) -> GameState {
        match self.id {
            GameId::Hex => GameState::Hex(hex::HexState::new(self.rows)),
            GameId::Othello => GameState::Othello(othello::OthelloState::new(self.rows)),
            GameId::Breakthrough => GameState::Breakthrough(breakthrough::BreakthroughState::new(
                self.rows,
                self.cols,
                self.breakthrough_cap,
            )),
        }
    }
}

impl fmt::Display for GameConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.id {
            GameId::Breakthrough => write!(f, "{}{}x{}", self.id, self.rows, self.cols),
            _ => write!(f, "{}{}", self.id, self.rows),
        }
    }
}

fn parse_dim(s: &str, default: u8) -> Result<u8, ConfigError> {
    if s.is_empty() {
        return Ok(default);
    }
    s.parse::<u8>()
        .map_err(|_| ConfigError::InvalidSize(format!("bad dimension `{s}`")))
}
