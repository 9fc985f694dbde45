//! Uniform-random playouts, used for terminal pre-initialization and for
//! rule invariant tests.

use crate::{Action, GameState};
use rand::Rng;

/// Play uniformly random legal moves until the game ends; returns the
/// terminal state. Bounded by the game's move cap.
pub fn random_playout<R: Rng>(start: &GameState, rng: &mut R) -> GameState {
    let mut state = start.clone();
    let cap = state.config().l_max() as usize + 1;
    for _ in 0..cap {
        if state.is_terminal() {
            return state;
        }
        let actions = state.legal_actions();
        let action = actions[rng.random_range(0..actions.len())];
        state = state.apply(action).expect("legal action rejected");
    }
    panic!("random playout exceeded the move cap without terminating");
}

/// One uniformly random legal move.
pub fn random_action<R: Rng>(state: &GameState, rng: &mut R) -> Action {
    let actions = state.legal_actions();
    actions[rng.random_range(0..actions.len())]
}
