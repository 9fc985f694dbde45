//! The per-decision report emitted by every search algorithm. Serializes to
//! one JSON line with keys: engine, action, value, iterations, expansions,
//! leaf_evals, net_evals, eval_batches, root (per-action stats) and
//! optionally selections (MCTS instrumentation).

use mxz_games::Action;
use serde::{Deserialize, Serialize};

/// Stats for one root action.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootActionStat {
    pub action: Action,
    /// v(s,a) for minimax searches, mean Q for MCTS.
    pub value: f64,
    /// n(s,a) selection count (minimax) .
    pub selections: u32,
    /// Backed-up visit count (MCTS).
    pub visits: u32,
}

/// One recorded MCTS interior selection (instrumentation only).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionEvent {
    /// True once every child of the node had been visited at least once.
    pub all_visited: bool,
    pub chosen: usize,
    /// Q values from the mover's perspective at selection time.
    pub mover_q: Vec<f64>,
    pub visits: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub engine: String,
    pub action: Action,
    /// Root value from the first player's perspective.
    pub value: f64,
    pub iterations: u64,
    pub expansions: u64,
    /// Leaf evaluations: terminal lookups plus network calls.
    pub leaf_evals: u64,
    /// Evaluator (network) evaluations only.
    pub net_evals: u64,
    /// Number of evaluator invocations (batches).
    pub eval_batches: u64,
    pub root: Vec<RootActionStat>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub selections: Option<Vec<SelectionEvent>>,
}

impl SearchReport {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }

    /// Counter sanity: evaluations never undercount expansions.
    pub fn counters_consistent(&self) -> bool {
        self.leaf_evals >= self.expansions
    }
}
