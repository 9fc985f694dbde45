//! Decision-time search algorithms: unbounded best-first minimax and its
//! safe-decision variant, the descent iteration that extends every selection
//! to a terminal state, iterative-deepening alpha-beta with move ordering,
//! and rollout-free MCTS (UCT or PUCT, optional first-play urgency, batched
//! with virtual loss).
//!
//! Conventions shared by every algorithm:
//! - all values are from the first player's perspective; maximizing nodes
//!   are those where the first player moves;
//! - action order is the stable order of `GameState::legal_actions`, and
//!   every tie (best action, safest action, bandit scores) breaks towards
//!   the lowest action index;
//! - terminal states are evaluated exactly by the terminal heuristic, never
//!   by the evaluator.

pub mod alphabeta;
pub mod batch;
pub mod budget;
pub mod evaluator;
pub mod mcts;
pub mod oracle;
pub mod report;
pub mod table;
pub mod ubfm;

pub use alphabeta::{id_alphabeta_decide, AlphaBetaOptions};
pub use batch::batched_child_evaluation;
pub use budget::SearchBudget;
pub use evaluator::{EvalError, Evaluator, FnEvaluator, HashNoiseEvaluator, LeafEval, PessimisticEvaluator, ZeroEvaluator};
pub use mcts::{mcts_decide, MctsConfig};
pub use oracle::Oracle;
pub use report::{RootActionStat, SearchReport};
pub use table::{NodeEntry, TranspositionTable};
pub use ubfm::{
    best_action, descent_decide, descent_iteration, iteration_traced, ubfm_decide,
    ubfm_iteration, MinimaxOptions,
};

use mxz_games::RuleViolation;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("evaluator failure: {0}")]
    Evaluator(#[from] EvalError),
    #[error("invalid search configuration: {0}")]
    Config(String),
    #[error("rule violation inside search: {0}")]
    Rules(#[from] RuleViolation),
}
