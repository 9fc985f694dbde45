//! Board symmetries: state transforms, plane-wise tensor transforms, policy
//! index permutations, and sample expansion for data augmentation.
//!
//! Groups: Hex {identity, 180° rotation}; Othello the 8 dihedral symmetries
//! of the square; Breakthrough {identity, left-right mirror}.

use crate::encode::{policy_size, FeatureTensor};
use crate::{breakthrough, hex, othello, Action, Coord, GameConfig, GameId, GameState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symmetry {
    Identity,
    Rot90,
    Rot180,
    Rot270,
    /// Mirror columns (left-right flip).
    FlipCols,
    /// Mirror rows (top-bottom flip).
    FlipRows,
    /// Transpose (main diagonal).
    Transpose,
    /// Anti-transpose (anti-diagonal).
    AntiTranspose,
}

impl Symmetry {
    /// The symmetry group of a game.
    pub fn group(game: GameId) -> &'static [Symmetry] {
        use Symmetry::*;
        match game {
            GameId::Hex => &[Identity, Rot180],
            GameId::Othello => {
                &[Identity, Rot90, Rot180, Rot270, FlipCols, FlipRows, Transpose, AntiTranspose]
            }
            GameId::Breakthrough => &[Identity, FlipCols],
        }
    }

    /// Where cell (r, c) of an `rows`×`cols` board lands. The transforms that
    /// swap the axes (rotations by 90°/270°, transposes) are only used on
    /// square boards.
    pub fn map(self, rows: usize, cols: usize, r: usize, c: usize) -> (usize, usize) {
        match self {
            Symmetry::Identity => (r, c),
            Symmetry::Rot90 => (c, rows - 1 - r),
            Symmetry::Rot180 => (rows - 1 - r, cols - 1 - c),
            Symmetry::Rot270 => (cols - 1 - c, r),
            Symmetry::FlipCols => (r, cols - 1 - c),
            Symmetry::FlipRows => (rows - 1 - r, c),
            Symmetry::Transpose => (c, r),
            Symmetry::AntiTranspose => (cols - 1 - c, rows - 1 - r),
        }
    }

    fn map_coord(self, rows: usize, cols: usize, coord: Coord) -> Coord {
        let (r, c) = self.map(rows, cols, coord.row as usize, coord.col as usize);
        Coord::new(r as u8, c as u8)
    }
}

/// Apply a symmetry to a state. Side to move, move count and pass streak are
/// unchanged; only the geometry moves. The symmetry must belong to the
/// game's group.
pub fn transform_state(state: &GameState, sym: Symmetry) -> GameState {
    let cfg = state.config();
    debug_assert!(Symmetry::group(cfg.id).contains(&sym), "{sym:?} not in {}'s group", cfg.id);
    let (rows, cols) = (cfg.rows as usize, cfg.cols as usize);
    let cells = state.cells();
    let mut out = vec![0u8; cells.len()];
    for r in 0..rows {
        for c in 0..cols {
            let (nr, nc) = sym.map(rows, cols, r, c);
            out[nr * cols + nc] = cells[r * cols + c];
        }
    }
    match state {
        GameState::Hex(s) => {
            GameState::Hex(hex::HexState::from_cells(s.size(), out, s.to_move(), s.move_count()))
        }
        GameState::Othello(s) => GameState::Othello(othello::OthelloState::from_cells(
            s.size(),
            out,
            s.to_move(),
            s.move_count(),
            s.pass_streak(),
        )),
        GameState::Breakthrough(s) => GameState::Breakthrough(breakthrough::BreakthroughState::from_cells(
            s.rows(),
            s.cols(),
            out,
            s.to_move(),
            s.move_count(),
            s.cap(),
        )),
    }
}

/// Apply a symmetry to an action.
pub fn transform_action(config: &GameConfig, action: Action, sym: Symmetry) -> Action {
    let (rows, cols) = (config.rows as usize, config.cols as usize);
    match action {
        Action::Place(c) => Action::Place(sym.map_coord(rows, cols, c)),
        Action::Pass => Action::Pass,
        Action::Step { from, to } => Action::Step {
            from: sym.map_coord(rows, cols, from),
            to: sym.map_coord(rows, cols, to),
        },
    }
}

/// Plane-wise geometric transform of a feature tensor.
pub fn transform_tensor(t: &FeatureTensor, sym: Symmetry) -> FeatureTensor {
    let (rows, cols) = (t.rows, t.cols);
    let transposes = matches!(
        sym,
        Symmetry::Rot90 | Symmetry::Rot270 | Symmetry::Transpose | Symmetry::AntiTranspose
    );
    let (orows, ocols) = if transposes { (cols, rows) } else { (rows, cols) };
    let mut out = FeatureTensor::zeros(t.planes, orows, ocols);
    for p in 0..t.planes {
        for r in 0..rows {
            for c in 0..cols {
                let (nr, nc) = sym.map(rows, cols, r, c);
                out.set(p, nr, nc, t.at(p, r, c));
            }
        }
    }
    out
}

/// Permutation of policy-logit indices under a symmetry: `perm[old] = new`.
/// Breakthrough's left-right mirror swaps the two diagonal channels.
pub fn policy_permutation(config: &GameConfig, sym: Symmetry) -> Vec<usize> {
    let (rows, cols) = (config.rows as usize, config.cols as usize);
    let n = policy_size(config);
    let mut perm = vec![0usize; n];
    match config.id {
        GameId::Hex | GameId::Othello => {
            for r in 0..rows {
                for c in 0..cols {
                    let (nr, nc) = sym.map(rows, cols, r, c);
                    perm[r * cols + c] = nr * cols + nc;
                }
            }
            if config.id == GameId::Othello {
                perm[n - 1] = n - 1; // pass maps to pass
            }
        }
        GameId::Breakthrough => {
            for r in 0..rows {
                for c in 0..cols {
                    let (nr, nc) = sym.map(rows, cols, r, c);
                    for ch in 0..3 {
                        let nch = match sym {
                            Symmetry::FlipCols => 2 - ch,
                            _ => ch,
                        };
                        perm[(r * cols + c) * 3 + ch] = (nr * cols + nc) * 3 + nch;
                    }
                }
            }
        }
    }
    perm
}

/// Expand one (tensor, target) sample into its orbit under the game's
/// symmetry group, duplicates removed, original included. The target scalar
/// is unchanged by geometry.
pub fn symmetry_expand(game: GameId, sample: &(FeatureTensor, f32)) -> Vec<(FeatureTensor, f32)> {
    let mut out: Vec<(FeatureTensor, f32)> = Vec::new();
    for &sym in Symmetry::group(game) {
        let t = transform_tensor(&sample.0, sym);
        if !out.iter().any(|(seen, _)| *seen == t) {
            out.push((t, sample.1));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encode::encode;
    use crate::{Encoding, GameConfig};

    fn sample_state(cfg: &GameConfig, moves: usize) -> GameState {
        let mut s = cfg.initial_state();
        let mut k = 2usize;
        for _ in 0..moves {
            if s.is_terminal() {
                break;
            }
            let actions = s.legal_actions();
            s = s.apply(actions[k % actions.len()]).unwrap();
            k = k.wrapping_mul(29).wrapping_add(11);
        }
        s
    }

    #[test]
    fn othello_sample_expands_to_eight() {
        let cfg = GameConfig::othello(6).unwrap();
        let s = sample_state(&cfg, 7);
        let t = encode(&s, Encoding::default());
        let orbit = symmetry_expand(cfg.id, &(t.clone(), 0.25));
        assert_eq!(orbit.len(), 8);
        assert!(orbit.iter().any(|(ot, _)| *ot == t));
        assert!(orbit.iter().all(|(_, v)| *v == 0.25));
    }

    #[test]
    fn hex_sample_expands_to_two() {
        let cfg = GameConfig::hex(5).unwrap();
        let s = sample_state(&cfg, 6);
        let t = encode(&s, Encoding::with_sides());
        let orbit = symmetry_expand(cfg.id, &(t, -3.0));
        assert_eq!(orbit.len(), 2);
    }

    #[test]
    fn symmetric_position_deduplicates() {
        let cfg = GameConfig::othello(6).unwrap();
        let t = encode(&cfg.initial_state(), Encoding::default());
        let orbit = symmetry_expand(cfg.id, &(t, 0.0));
        // The initial position has 180-degree symmetry.
        assert!(orbit.len() < 8, "expected duplicates removed, got {}", orbit.len());
    }

    #[test]
    fn expanding_twice_is_expanding_once() {
        let cfg = GameConfig::othello(4).unwrap();
        let s = sample_state(&cfg, 3);
        let t = encode(&s, Encoding::default());
        let once = symmetry_expand(cfg.id, &(t, 1.0));
        let mut twice: Vec<(crate::FeatureTensor, f32)> = Vec::new();
        for sample in &once {
            for out in symmetry_expand(cfg.id, sample) {
                if !twice.iter().any(|(seen, _)| *seen == out.0) {
                    twice.push(out);
                }
            }
        }
        assert_eq!(once.len(), twice.len());
        for (t, _) in &once {
            assert!(twice.iter().any(|(u, _)| u == t));
        }
    }

    #[test]
    fn encode_commutes_with_state_transform() {
        for (cfg, sides) in [
            (GameConfig::hex(5).unwrap(), true),
            (GameConfig::hex(4).unwrap(), false),
            (GameConfig::othello(6).unwrap(), true),
            (GameConfig::othello(4).unwrap(), false),
            (GameConfig::breakthrough(5, 5).unwrap(), true),
        ] {
            let enc = Encoding { sides };
            for moves in [0usize, 3, 9] {
                let s = sample_state(&cfg, moves);
                for &sym in Symmetry::group(cfg.id) {
                    let lhs = encode(&transform_state(&s, sym), enc);
                    let rhs = transform_tensor(&encode(&s, enc), sym);
                    assert_eq!(lhs, rhs, "{cfg} {sym:?} after {moves} moves");
                }
            }
        }
    }

    #[test]
    fn policy_permutation_tracks_action_transform() {
        use crate::encode::{policy_index, policy_size};
        for cfg in [
            GameConfig::hex(4).unwrap(),
            GameConfig::othello(6).unwrap(),
            GameConfig::breakthrough(5, 5).unwrap(),
        ] {
            let s = sample_state(&cfg, 2);
            for &sym in Symmetry::group(cfg.id) {
                let perm = policy_permutation(&cfg, sym);
                assert_eq!(perm.len(), policy_size(&cfg));
                let mut sorted = perm.clone();
                sorted.sort_unstable();
                sorted.dedup();
                assert_eq!(sorted.len(), perm.len(), "not a permutation");
                if s.is_terminal() {
                    continue;
                }
                for a in s.legal_actions() {
                    let direct = policy_index(&cfg, transform_action(&cfg, a, sym));
                    assert_eq!(perm[policy_index(&cfg, a)], direct, "{cfg} {sym:?} {a}");
                }
            }
        }
    }
}
