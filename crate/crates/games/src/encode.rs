//! State-to-tensor encoding for value networks.
//!
//! Plane layout (all entries in {0, 0.5, 1}):
//!
//! | plane | hex                  | othello              | breakthrough         |
//! |-------|----------------------|----------------------|----------------------|
//! | 0     | first-player stones  | first-player discs   | first-player pieces  |
//! | 1     | second-player stones | second-player discs  | second-player pieces |
//! | 2     | 1s iff first to move | 1s iff first to move | 1s iff first to move |
//! | 3     |:                    | pass-streak / 2      |:                    |
//! | +0*   | first's target edges (top+bottom rows) | board border | first's target row (row 0) |
//! | +1*   | second's target edges (left+right cols) | board border | second's target row (last row) |
//!
//! Rows marked `*` are the two constant side planes appended only when
//! `Encoding::sides` is on. They mark each player's target edges or rows;
//! Othello has no target edges so both planes mark the border ring.
//!
//! Actions are never encoded; only states are.

use crate::{GameConfig, GameId, GameState, Player};
use std::hash::{Hash, Hasher};

/// Encoding options. `sides` appends the two constant side planes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Encoding {
    pub sides: bool,
}

impl Default for Encoding {
    fn default() -> Self {
        Encoding { sides: false }
    }
}

impl Encoding {
    pub fn with_sides() -> Encoding {
        Encoding { sides: true }
    }

    /// Number of planes produced for a game under this encoding. A pure
    /// function of (game, encoding), independent of the position.
    pub fn plane_count(&self, game: GameId) -> usize {
        let base = match game {
            GameId::Othello => 4,
            _ => 3,
        };
        base + if self.sides { 2 } else { 0 }
    }

    /// Tensor shape (planes, rows, cols) for a game configuration.
    pub fn shape(&self, config: &GameConfig) -> (usize, usize, usize) {
        (self.plane_count(config.id), config.rows as usize, config.cols as usize)
    }
}

/// Dense planes × height × width tensor of finite f32 values.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FeatureTensor {
    pub planes: usize,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f32>,
}

impl Eq for FeatureTensor {}

impl Hash for FeatureTensor {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.planes.hash(state);
        self.rows.hash(state);
        self.cols.hash(state);
        for v in &self.data {
            v.to_bits().hash(state);
        }
    }
}

impl FeatureTensor {
    pub fn zeros(planes: usize, rows: usize, cols: usize) -> FeatureTensor {
        FeatureTensor { planes, rows, cols, data: vec![0.0; planes * rows * cols] }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.planes, self.rows, self.cols)
    }

    #[inline]
    pub fn at(&self, plane: usize, row: usize, col: usize) -> f32 {
        self.data[(plane * self.rows + row) * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, plane: usize, row: usize, col: usize, v: f32) {
        self.data[(plane * self.rows + row) * self.cols + col] = v;
    }
}

/// Encode a state into its feature tensor. Deterministic; distinct boards,
/// movers or pass streaks give distinct tensors within one game.
pub fn encode(state: &GameState, encoding: Encoding) -> FeatureTensor {
    let cfg = state.config();
    let (planes, rows, cols) = encoding.shape(&cfg);
    let mut t = FeatureTensor::zeros(planes, rows, cols);

    let cells = state.cells();
    for r in 0..rows {
        for c in 0..cols {
            match cells[r * cols + c] {
                1 => t.set(0, r, c, 1.0),
                2 => t.set(1, r, c, 1.0),
                _ => {}
            }
        }
    }
    if state.to_move() == Player::First {
        for r in 0..rows {
            for c in 0..cols {
                t.set(2, r, c, 1.0);
            }
        }
    }
    let mut next_plane = 3;
    if cfg.id == GameId::Othello {
        let streak = f32::from(state.pass_streak().min(2)) / 2.0;
        if streak != 0.0 {
            for r in 0..rows {
                for c in 0..cols {
                    t.set(3, r, c, streak);
                }
            }
        }
        next_plane = 4;
    }
    if encoding.sides {
        let (p1, p2) = (next_plane, next_plane + 1);
        match cfg.id {
            GameId::Hex => {
                for c in 0..cols {
                    t.set(p1, 0, c, 1.0);
                    t.set(p1, rows - 1, c, 1.0);
                }
                for r in 0..rows {
                    t.set(p2, r, 0, 1.0);
                    t.set(p2, r, cols - 1, 1.0);
                }
            }
            GameId::Othello => {
                for r in 0..rows {
                    for c in 0..cols {
                        if r == 0 || r == rows - 1 || c == 0 || c == cols - 1 {
                            t.set(p1, r, c, 1.0);
                            t.set(p2, r, c, 1.0);
                        }
                    }
                }
            }
            GameId::Breakthrough => {
                for c in 0..cols {
                    t.set(p1, 0, c, 1.0);
                    t.set(p2, rows - 1, c, 1.0);
                }
            }
        }
    }
    t
}

/// Size of the policy-logit space for a game: one logit per cell for Hex,
/// one per cell plus a pass logit for Othello, and three direction channels
/// per origin cell for Breakthrough (column delta -1, 0, +1).
pub fn policy_size(config: &GameConfig) -> usize {
    let cells = config.cell_count();
    match config.id {
        GameId::Hex => cells,
        GameId::Othello => cells + 1,
        GameId::Breakthrough => cells * 3,
    }
}

/// Map an action to its policy-logit index. The action must belong to the
/// given game configuration.
pub fn policy_index(config: &GameConfig, action: crate::Action) -> usize {
    let cols = config.cols as usize;
    match (config.id, action) {
        (GameId::Hex, crate::Action::Place(c)) | (GameId::Othello, crate::Action::Place(c)) => {
            c.row as usize * cols + c.col as usize
        }
        (GameId::Othello, crate::Action::Pass) => config.cell_count(),
        (GameId::Breakthrough, crate::Action::Step { from, to }) => {
            let channel = (to.col as isize - from.col as isize + 1) as usize;
            (from.row as usize * cols + from.col as usize) * 3 + channel
        }
        (id, a) => panic!("action {a:?} does not belong to {id}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::GameConfig;

    #[test]
    fn empty_hex_board_planes() {
        let cfg = GameConfig::hex(5).unwrap();
        let t = encode(&cfg.initial_state(), Encoding::default());
        assert_eq!(t.shape(), (3, 5, 5));
        for r in 0..5 {
            for c in 0..5 {
                assert_eq!(t.at(0, r, c), 0.0);
                assert_eq!(t.at(1, r, c), 0.0);
                assert_eq!(t.at(2, r, c), 1.0);
            }
        }
    }

    #[test]
    fn apply_changes_the_encoding() {
        for cfg in [
            GameConfig::hex(5).unwrap(),
            GameConfig::othello(6).unwrap(),
            GameConfig::breakthrough(5, 5).unwrap(),
        ] {
            let s = cfg.initial_state();
            let t0 = encode(&s, Encoding::default());
            let next = s.apply(s.legal_actions()[0]).unwrap();
            let t1 = encode(&next, Encoding::default());
            assert_ne!(t0, t1, "{cfg}");
        }
    }

    #[test]
    fn hex_side_planes_mark_target_edges() {
        let cfg = GameConfig::hex(4).unwrap();
        let t = encode(&cfg.initial_state(), Encoding::with_sides());
        assert_eq!(t.shape(), (5, 4, 4));
        for c in 0..4 {
            assert_eq!(t.at(3, 0, c), 1.0);
            assert_eq!(t.at(3, 3, c), 1.0);
        }
        for r in 0..4 {
            assert_eq!(t.at(4, r, 0), 1.0);
            assert_eq!(t.at(4, r, 3), 1.0);
        }
        assert_eq!(t.at(3, 1, 1), 0.0);
        assert_eq!(t.at(4, 1, 1), 0.0);
        assert_eq!(t.at(3, 1, 0), 0.0);
        assert_eq!(t.at(4, 0, 1), 0.0);
    }

    #[test]
    fn othello_pass_streak_is_visible() {
        let cfg = GameConfig::othello(6).unwrap();
        let rows = "x . . . . .\n. . . . . .\n. . . . . .\n. . . . . .\n. . . . . .\n. . . . . o";
        let s0 = crate::GameState::from_text_at(&cfg, rows, crate::Player::First, 8, 0).unwrap();
        let s1 = s0.apply(crate::Action::Pass).unwrap();
        let t0 = encode(&s0, Encoding::default());
        let t1 = encode(&s1, Encoding::default());
        assert_eq!(t0.at(3, 0, 0), 0.0);
        assert_eq!(t1.at(3, 0, 0), 0.5);
    }

    #[test]
    fn policy_index_is_a_bijection_on_legal_actions() {
        for cfg in [
            GameConfig::hex(4).unwrap(),
            GameConfig::othello(4).unwrap(),
            GameConfig::breakthrough(5, 5).unwrap(),
        ] {
            let s = cfg.initial_state();
            let mut seen = std::collections::HashSet::new();
            for a in s.legal_actions() {
                let idx = policy_index(&cfg, a);
                assert!(idx < policy_size(&cfg));
                assert!(seen.insert(idx), "duplicate policy index in {cfg}");
            }
        }
    }
}
