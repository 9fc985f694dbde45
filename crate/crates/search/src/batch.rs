//! Child-evaluation plumbing shared by the minimax searches: terminal
//! children are scored exactly by the heuristic, non-terminal children go to
//! the evaluator either one call per child or as a single batch. Both paths
//! return identical scalars; only the evaluator invocation count differs.

use crate::evaluator::{EvalError, Evaluator};
use crate::SearchError;
use mxz_games::{GameState, TerminalHeuristic};

/// Evaluation counters carried through a search.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct EvalCounters {
    /// Terminal lookups plus network evaluations.
    pub leaf_evals: u64,
    /// Network evaluations only.
    pub net_evals: u64,
    /// Evaluator invocations.
    pub eval_batches: u64,
}

pub(crate) fn evaluate_states(
    states: &[GameState],
    eval: &dyn Evaluator,
    heuristic: TerminalHeuristic,
    batched: bool,
    counters: &mut EvalCounters,
) -> Result<Vec<f64>, EvalError> {
    let mut out = vec![0.0f64; states.len()];
    let mut pending_idx = Vec::new();
    for (i, s) in states.iter().enumerate() {
        if s.is_terminal() {
            out[i] = s.terminal_value(heuristic);
        } else {
            pending_idx.push(i);
        }
    }
    counters.leaf_evals += states.len() as u64;
    counters.net_evals += pending_idx.len() as u64;
    if batched {
        if !pending_idx.is_empty() {
            let batch: Vec<GameState> = pending_idx.iter().map(|&i| states[i].clone()).collect();
            let evals = eval.evaluate(&batch)?;
            counters.eval_batches += 1;
            for (&i, e) in pending_idx.iter().zip(evals) {
                out[i] = e.value;
            }
        }
    } else {
        for &i in &pending_idx {
            let evals = eval.evaluate(std::slice::from_ref(&states[i]))?;
            counters.eval_batches += 1;
            out[i] = evals[0].value;
        }
    }
    Ok(out)
}

/// Evaluate a node's children as one evaluator batch. Returns exactly the
/// scalars that one-at-a-time evaluation would produce, in order; terminal
/// children are scored by the heuristic, an empty slice yields an empty
/// result without touching the evaluator.
pub fn batched_child_evaluation(
    children: &[GameState],
    eval: &dyn Evaluator,
    heuristic: TerminalHeuristic,
) -> Result<Vec<f64>, SearchError> {
    let mut counters = EvalCounters::default();
    Ok(evaluate_states(children, eval, heuristic, true, &mut counters)?)
}
