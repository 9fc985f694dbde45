//! Iterative-deepening alpha-beta with move ordering. While budget remains,
//! the depth grows by one and a full fail-soft alpha-beta search runs; the
//! best move found for each state is memorized and searched first at the
//! next depth. The decision comes from the deepest fully completed depth.
//!
//! The batched form pre-evaluates all horizon children of a frontier node as
//! one evaluator call and then applies the identical cutoff scan, so root
//! values and decisions match the unbatched search exactly; only evaluation
//! counts differ. Deepening stops early once a completed search never hit
//! the depth limit: deeper searches would be identical.

use crate::batch::{evaluate_states, EvalCounters};
use crate::evaluator::Evaluator;
use crate::report::{RootActionStat, SearchReport};
use crate::{SearchBudget, SearchError};
use mxz_games::{GameState, Player, TerminalHeuristic};
use rustc_hash::FxHashMap;
use std::time::Instant;

#[derive(Debug, Clone, Copy)]
pub struct AlphaBetaOptions {
    /// Evaluate frontier children as one batch per node.
    pub batched: bool,
    /// Search the previous depth's best move first.
    pub ordering: bool,
}

impl Default for AlphaBetaOptions {
    fn default() -> Self {
        AlphaBetaOptions { batched: false, ordering: true }
    }
}

struct Ctx<'a> {
    eval: &'a dyn Evaluator,
    heuristic: TerminalHeuristic,
    opts: AlphaBetaOptions,
    /// Previous best move per state (stable action index).
    best_move: FxHashMap<GameState, usize>,
    counters: EvalCounters,
    expansions: u64,
    depth_limited: bool,
}

impl Ctx<'_> {
    fn order(&self, state: &GameState, len: usize) -> Vec<usize> {
        let mut order: Vec<usize> = (0..len).collect();
        if self.opts.ordering {
            if let Some(&bi) = self.best_move.get(state) {
                if bi < len {
                    order.remove(bi);
                    order.insert(0, bi);
                }
            }
        }
        order
    }

    fn leaf(&mut self, state: &GameState) -> Result<f64, SearchError> {
        let values = evaluate_states(
            std::slice::from_ref(state),
            self.eval,
            self.heuristic,
            true,
            &mut self.counters,
        )?;
        Ok(values[0])
    }

    fn search(
        &mut self,
        state: &GameState,
        depth: u32,
        mut alpha: f64,
        mut beta: f64,
    ) -> Result<f64, SearchError> {
        if state.is_terminal() {
            self.counters.leaf_evals += 1;
            return Ok(state.terminal_value(self.heuristic));
        }
        if depth == 0 {
            self.depth_limited = true;
            return self.leaf(state);
        }
        self.expansions += 1;
        let actions = state.legal_actions();
        let order = self.order(state, actions.len());
        let maximizing = state.to_move() == Player::First;
        let mut best_value = if maximizing { f64::NEG_INFINITY } else { f64::INFINITY };
        let mut best_idx = order[0];

        let frontier_values: Option<Vec<f64>> = if depth == 1 && self.opts.batched {
            let children = order
                .iter()
                .map(|&i| state.apply(actions[i]))
                .collect::<Result<Vec<GameState>, _>>()?;
            if children.iter().any(|c| !c.is_terminal()) {
                self.depth_limited = true;
            }
            Some(evaluate_states(&children, self.eval, self.heuristic, true, &mut self.counters)?)
        } else {
            None
        };

        for (k, &i) in order.iter().enumerate() {
            let value = match &frontier_values {
                Some(vals) => vals[k],
                None => {
                    let child = state.apply(actions[i])?;
                    self.search(&child, depth - 1, alpha, beta)?
                }
            };
            if maximizing {
                if value > best_value {
                    best_value = value;
                    best_idx = i;
                }
                alpha = alpha.max(best_value);
            } else {
                if value < best_value {
                    best_value = value;
                    best_idx = i;
                }
                beta = beta.min(best_value);
            }
            if alpha >= beta {
                break;
            }
        }
        self.best_move.insert(state.clone(), best_idx);
        Ok(best_value)
    }

    /// Full-window root search returning (best index, root value, per-action
    /// values as seen by the scan: pruned siblings carry their bound).
    fn search_root(&mut self, state: &GameState, depth: u32) -> Result<(usize, f64, Vec<f64>), SearchError> {
        let actions = state.legal_actions();
        let order = self.order(state, actions.len());
        let maximizing = state.to_move() == Player::First;
        self.expansions += 1;
        let mut alpha = f64::NEG_INFINITY;
        let mut beta = f64::INFINITY;
        let mut best_value = if maximizing { f64::NEG_INFINITY } else { f64::INFINITY };
        let mut best_idx = order[0];
        let mut seen = vec![f64::NAN; actions.len()];
        for &i in &order {
            let child = state.apply(actions[i])?;
            let value = self.search(&child, depth - 1, alpha, beta)?;
            seen[i] = value;
            if maximizing {
                if value > best_value {
                    best_value = value;
                    best_idx = i;
                }
                alpha = alpha.max(best_value);
            } else {
                if value < best_value {
                    best_value = value;
                    best_idx = i;
                }
                beta = beta.min(best_value);
            }
        }
        self.best_move.insert(state.clone(), best_idx);
        Ok((best_idx, best_value, seen))
    }
}

/// Iterative-deepening alpha-beta decision. An iteration budget of `d` runs
/// depths 1..=d; a wall-time budget deepens while time remains. The reported
/// iteration count is the number of completed depths.
pub fn id_alphabeta_decide(
    state: &GameState,
    budget: SearchBudget,
    eval: &dyn Evaluator,
    heuristic: TerminalHeuristic,
    opts: AlphaBetaOptions,
) -> Result<SearchReport, SearchError> {
    assert!(!state.is_terminal(), "decide called on a terminal state");
    let started = Instant::now();
    let mut ctx = Ctx {
        eval,
        heuristic,
        opts,
        best_move: FxHashMap::default(),
        counters: EvalCounters::default(),
        expansions: 0,
        depth_limited: false,
    };
    let actions = state.legal_actions();
    let mut completed: u32 = 0;
    let (mut chosen, mut value, mut seen);
    loop {
        let depth = completed + 1;
        ctx.depth_limited = false;
        let (idx, v, s) = ctx.search_root(state, depth)?;
        completed = depth;
        chosen = idx;
        value = v;
        seen = s;
        let exact = !ctx.depth_limited;
        let done = match budget {
            SearchBudget::Iterations(n) => completed as u64 >= n,
            SearchBudget::TimeMillis(_) => {
                started.elapsed() >= budget.as_duration().unwrap()
            }
        };
        if exact || done {
            break;
        }
    }
    let root = actions
        .iter()
        .enumerate()
        .map(|(i, &action)| RootActionStat {
            action,
            value: if seen[i].is_nan() { 0.0 } else { seen[i] },
            selections: 0,
            visits: 0,
        })
        .collect();
    Ok(SearchReport {
        engine: "id-ab".to_string(),
        action: actions[chosen],
        value,
        iterations: completed as u64,
        expansions: ctx.expansions,
        leaf_evals: ctx.counters.leaf_evals,
        net_evals: ctx.counters.net_evals,
        eval_batches: ctx.counters.eval_batches,
        root,
        selections: None,
    })
}
