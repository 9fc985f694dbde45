//! The state evaluator abstraction consumed by every search algorithm, plus
//! small deterministic evaluators used by tests, baselines and probes.

use mxz_games::{GameState, Player};
use std::fmt;
use thiserror::Error;

/// Evaluation of one non-terminal leaf. `priors` (PUCT only) is a
/// probability distribution aligned with the state's legal actions.
#[derive(Debug, Clone)]
pub struct LeafEval {
    pub value: f64,
    pub priors: Option<Vec<f64>>,
}

impl LeafEval {
    pub fn value(v: f64) -> LeafEval {
        LeafEval { value: v, priors: None }
    }
}

#[derive(Debug, Clone, Error)]
#[error("{0}")]
pub struct EvalError(pub String);

/// A state evaluator. Implementations must be batch-partition invariant:
/// evaluating states one at a time or in any grouping yields the same
/// scalars. Only non-terminal states are ever passed in.
pub trait Evaluator: Sync {
    /// Bound `L` on `|value|`.
    fn bound(&self) -> f64;

    /// Whether `priors` are populated (required for PUCT).
    fn has_policy(&self) -> bool {
        false
    }

    /// Evaluate a batch, order-preserving.
    fn evaluate(&self, states: &[GameState]) -> Result<Vec<LeafEval>, EvalError>;

    /// Short description for reports and logs.
    fn describe(&self) -> String {
        "evaluator".to_string()
    }
}

/// Evaluates every state as 0.
pub struct ZeroEvaluator {
    pub bound: f64,
}

impl Evaluator for ZeroEvaluator {
    fn bound(&self) -> f64 {
        self.bound
    }

    fn evaluate(&self, states: &[GameState]) -> Result<Vec<LeafEval>, EvalError> {
        Ok(states.iter().map(|_| LeafEval::value(0.0)).collect())
    }

    fn describe(&self) -> String {
        "zero".to_string()
    }
}

/// Values every unexplored state as lost for the side to move. Under
/// best-first minimax this makes unexpanded children look better than any
/// proven alternative to the parent, so the search keeps expanding until the
/// reachable tree is exhausted; decisions at its fixed point are exact.
pub struct PessimisticEvaluator {
    pub bound: f64,
}

impl Evaluator for PessimisticEvaluator {
    fn bound(&self) -> f64 {
        self.bound
    }

    fn evaluate(&self, states: &[GameState]) -> Result<Vec<LeafEval>, EvalError> {
        Ok(states
            .iter()
            .map(|s| {
                let v = match s.to_move() {
                    Player::First => -self.bound,
                    Player::Second => self.bound,
                };
                LeafEval::value(v)
            })
            .collect())
    }

    fn describe(&self) -> String {
        "pessimistic".to_string()
    }
}

/// Deterministic pseudo-random values derived from the state hash; useful
/// for exercising pruning soundness on varied leaf values.
pub struct HashNoiseEvaluator {
    pub bound: f64,
    pub seed: u64,
}

impl Evaluator for HashNoiseEvaluator {
    fn bound(&self) -> f64 {
        self.bound
    }

    fn evaluate(&self, states: &[GameState]) -> Result<Vec<LeafEval>, EvalError> {
        Ok(states
            .iter()
            .map(|s| {
                use std::hash::{Hash, Hasher};
                let mut h = rustc_hash::FxHasher::default();
                self.seed.hash(&mut h);
                s.hash(&mut h);
                let bits = h.finish();
                // Map to (-bound, bound), never exactly on the bound.
                let unit = (bits >> 11) as f64 / (1u64 << 53) as f64;
                LeafEval::value((2.0 * unit - 1.0) * 0.999 * self.bound)
            })
            .collect())
    }

    fn describe(&self) -> String {
        format!("noise:{}", self.seed)
    }
}

/// Wrap a plain function as an evaluator; handy for crafted tests.
pub struct FnEvaluator<F: Fn(&GameState) -> f64 + Sync> {
    pub bound: f64,
    pub f: F,
}

impl<F: Fn(&GameState) -> f64 + Sync> Evaluator for FnEvaluator<F> {
    fn bound(&self) -> f64 {
        self.bound
    }

    fn evaluate(&self, states: &[GameState]) -> Result<Vec<LeafEval>, EvalError> {
        Ok(states.iter().map(|s| LeafEval::value((self.f)(s))).collect())
    }

    fn describe(&self) -> String {
        "fn".to_string()
    }
}

impl fmt::Debug for dyn Evaluator + '_ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Evaluator({})", self.describe())
    }
}
