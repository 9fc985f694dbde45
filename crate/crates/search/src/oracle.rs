//! Exhaustive negamax oracle with a memoized state map, plus reachable-state
//! enumeration. Independent of the iterative searches it is used to check:
//! a plain full-width minimax recursion over exact terminal values.

use mxz_games::{Action, GameState, Player, TerminalHeuristic};
use rustc_hash::{FxHashMap, FxHashSet};

pub struct Oracle {
    heuristic: TerminalHeuristic,
    memo: FxHashMap<GameState, f64>,
}

impl Oracle {
    pub fn new(heuristic: TerminalHeuristic) -> Oracle {
        Oracle { heuristic, memo: FxHashMap::default() }
    }

    pub fn heuristic(&self) -> TerminalHeuristic {
        self.heuristic
    }

    /// Exact minimax value of a state, first-player perspective.
    pub fn value(&mut self, state: &GameState) -> f64 {
        if state.is_terminal() {
            return state.terminal_value(self.heuristic);
        }
        if let Some(&v) = self.memo.get(state) {
            return v;
        }
        let maximizing = state.to_move() == Player::First;
        let mut best = if maximizing { f64::NEG_INFINITY } else { f64::INFINITY };
        for action in state.legal_actions() {
            let child = state.apply(action).expect("legal action rejected");
            let v = self.value(&child);
            if (maximizing && v > best) || (!maximizing && v < best) {
                best = v;
            }
        }
        self.memo.insert(state.clone(), best);
        best
    }

    /// All minimax-optimal actions, in stable order.
    pub fn optimal_actions(&mut self, state: &GameState) -> Vec<Action> {
        let target = self.value(state);
        state
            .legal_actions()
            .into_iter()
            .filter(|&a| {
                let child = state.apply(a).expect("legal action rejected");
                self.value(&child) == target
            })
            .collect()
    }

    /// The lowest-index optimal action.
    pub fn best_action(&mut self, state: &GameState) -> Action {
        self.optimal_actions(state)[0]
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }
}

/// Breadth-first enumeration of every state reachable from `initial` by
/// legal play, deduplicated. Returns (non-terminal states, total count
/// including terminals).
pub fn reachable_states(initial: &GameState) -> (Vec<GameState>, usize) {
    let mut seen: FxHashSet<GameState> = FxHashSet::default();
    let mut frontier = vec![initial.clone()];
    let mut interior = Vec::new();
    let mut total = 0usize;
    seen.insert(initial.clone());
    while let Some(state) = frontier.pop() {
        total += 1;
        if state.is_terminal() {
            continue;
        }
        for action in state.legal_actions() {
            let child = state.apply(action).expect("legal action rejected");
            if seen.insert(child.clone()) {
                frontier.push(child);
            }
        }
        interior.push(state);
    }
    (interior, total)
}
