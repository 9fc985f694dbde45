//! Unbounded best-first minimax and the descent variant.
//!
//! One minimax iteration follows best actions from the root. The first
//! unexpanded state it reaches is added to the table with every child
//! evaluated; already-expanded states recurse into the current best child,
//! refresh v(s, a_b) on unwind and bump the selection count n(s, a_b).
//! A descent iteration differs in one point: after expanding a node it keeps
//! selecting downward, so every descent selection path ends at a terminal
//! state and terminal values propagate up the whole path.
//!
//! Iterations leave stored values minimax-consistent: for every expanded
//! state, its value as seen by the parent equals max/min over its own
//! children, because updates propagate along the entire selected path. A
//! consequence used by `decide`: an iteration that expands nothing and
//! changes nothing is a fixed point: every later iteration would replay the
//! same principal variation verbatim, so the remaining budget can be applied
//! as bulk selection counts along that variation.

use crate::batch::{evaluate_states, EvalCounters};
use crate::evaluator::Evaluator;
use crate::report::{RootActionStat, SearchReport};
use crate::table::{NodeEntry, TranspositionTable};
use crate::{SearchBudget, SearchError};
use mxz_games::{Action, GameState, TerminalHeuristic};
use std::time::Instant;

/// Options for the minimax deciders.
#[derive(Debug, Clone, Copy)]
pub struct MinimaxOptions {
    /// Play the most-selected root action instead of the best-valued one.
    pub safe: bool,
    /// Evaluate the children of an expansion as one evaluator batch.
    pub batched: bool,
}

impl Default for MinimaxOptions {
    fn default() -> Self {
        MinimaxOptions { safe: false, batched: false }
    }
}

struct Ctx<'a> {
    table: &'a mut TranspositionTable,
    eval: &'a dyn Evaluator,
    heuristic: TerminalHeuristic,
    batched: bool,
    descent: bool,
    counters: EvalCounters,
    expansions: u64,
    expanded_this_iter: bool,
    changed_this_iter: bool,
    trace: Option<Vec<(GameState, usize)>>,
}

impl Ctx<'_> {
    fn expand(&mut self, state: &GameState) -> Result<(), SearchError> {
        let actions = state.legal_actions();
        let children: Result<Vec<GameState>, _> =
            actions.iter().map(|&a| state.apply(a)).collect();
        let values =
            evaluate_states(&children?, self.eval, self.heuristic, self.batched, &mut self.counters)?;
        self.table.insert(state.clone(), NodeEntry::from_expansion(actions, values));
        self.expansions += 1;
        self.expanded_this_iter = true;
        Ok(())
    }

    fn iterate(&mut self, state: &GameState) -> Result<f64, SearchError> {
        if state.is_terminal() {
            self.counters.leaf_evals += 1;
            return Ok(state.terminal_value(self.heuristic));
        }
        let newly_expanded = !self.table.contains(state);
        if newly_expanded {
            self.expand(state)?;
        }
        if !newly_expanded || self.descent {
            let entry = self.table.get(state).expect("state expanded above");
            let idx = entry.best_index(state.to_move());
            let child = state.apply(entry.actions[idx])?;
            if let Some(trace) = &mut self.trace {
                trace.push((state.clone(), idx));
            }
            let value = self.iterate(&child)?;
            let entry = self.table.get_mut(state).expect("state expanded above");
            if entry.values[idx] != value {
                entry.values[idx] = value;
                self.changed_this_iter = true;
            }
            entry.selections[idx] += 1;
        }
        let entry = self.table.get(state).expect("state expanded above");
        Ok(entry.values[entry.best_index(state.to_move())])
    }

    /// Reconcile stored edge values with the current values of shared
    /// transposition children. Alg-style iterations refresh an edge only
    /// when they select it, so a child reached through several parents can
    /// leave the other parents' edges stale; a search that looks converged
    /// may just be starved of fresh values. Processing entries by
    /// decreasing move count (children always sit one move deeper) restores
    /// global consistency in one pass. Returns whether anything changed.
    fn reconcile(&mut self) -> bool {
        let mut keys: Vec<GameState> = self.table.iter().map(|(s, _)| s.clone()).collect();
        keys.sort_by_key(|s| std::cmp::Reverse(s.move_count()));
        let mut changed = false;
        for state in keys {
            let entry = self.table.get(&state).unwrap();
            let actions = entry.actions.clone();
            let mut values = entry.values.clone();
            for (i, &a) in actions.iter().enumerate() {
                let child = state.apply(a).expect("stored action is legal");
                if child.is_terminal() {
                    continue;
                }
                if let Some(child_entry) = self.table.get(&child) {
                    let fresh = child_entry.values[child_entry.best_index(child.to_move())];
                    if values[i] != fresh {
                        values[i] = fresh;
                        changed = true;
                    }
                }
            }
            self.table.get_mut(&state).unwrap().values = values;
        }
        changed
    }

    /// Expand states the principal variation starves. Best-first selection
    /// with a heuristic evaluator can reach a fixed point while unexpanded
    /// states are still reachable (the evaluator mis-ranks them forever);
    /// with iteration budget left, decide() spends it expanding those states
    /// breadth-first so that an unlimited budget converges to the full
    /// reachable closure and therefore to exact values. Returns the number
    /// of expansions performed (each counts as one iteration of budget).
    fn force_expand(&mut self, root: &GameState, limit: u64) -> Result<u64, SearchError> {
        if limit == 0 {
            return Ok(0);
        }
        let mut forced = 0u64;
        let mut queue = std::collections::VecDeque::new();
        let mut seen = rustc_hash::FxHashSet::default();
        queue.push_back(root.clone());
        seen.insert(root.clone());
        while let Some(state) = queue.pop_front() {
            let Some(entry) = self.table.get(&state) else { continue };
            for action in entry.actions.clone() {
                let child = state.apply(action)?;
                if child.is_terminal() || !seen.insert(child.clone()) {
                    continue;
                }
                if !self.table.contains(&child) {
                    self.expand(&child)?;
                    forced += 1;
                    if forced >= limit {
                        return Ok(forced);
                    }
                }
                queue.push_back(child);
            }
        }
        Ok(forced)
    }

    /// Apply `extra` fixed-point iterations in bulk: each one walks the
    /// frozen principal variation, bumping one selection per interior node
    /// and one terminal evaluation at its end.
    fn bulk_replay(&mut self, root: &GameState, extra: u64) {
        let mut state = root.clone();
        loop {
            if state.is_terminal() {
                self.counters.leaf_evals += extra;
                return;
            }
            let entry = self.table.get(&state).expect("fixed-point PV is fully expanded");
            let idx = entry.best_index(state.to_move());
            let next = state.apply(entry.actions[idx]).expect("stored action is legal");
            self.table.get_mut(&state).unwrap().selections[idx] += extra as u32;
            state = next;
        }
    }
}

/// One unbounded-minimax iteration. Returns the root value after the
/// iteration (the value of the best action).
pub fn ubfm_iteration(
    table: &mut TranspositionTable,
    state: &GameState,
    eval: &dyn Evaluator,
    heuristic: TerminalHeuristic,
    batched: bool,
) -> Result<f64, SearchError> {
    let mut ctx = Ctx {
        table,
        eval,
        heuristic,
        batched,
        descent: false,
        counters: EvalCounters::default(),
        expansions: 0,
        expanded_this_iter: false,
        changed_this_iter: false,
        trace: None,
    };
    ctx.iterate(state)
}

/// One descent iteration: like [`ubfm_iteration`] but the selection path is
/// extended to a terminal state even across fresh expansions.
pub fn descent_iteration(
    table: &mut TranspositionTable,
    state: &GameState,
    eval: &dyn Evaluator,
    heuristic: TerminalHeuristic,
    batched: bool,
) -> Result<f64, SearchError> {
    let mut ctx = Ctx {
        table,
        eval,
        heuristic,
        batched,
        descent: true,
        counters: EvalCounters::default(),
        expansions: 0,
        expanded_this_iter: false,
        changed_this_iter: false,
        trace: None,
    };
    ctx.iterate(state)
}

/// Like [`ubfm_iteration`] / [`descent_iteration`] but also returns the
/// selection path: every interior state recursed through, with the selected
/// action index. Used by instrumented tests and tree audits.
pub fn iteration_traced(
    table: &mut TranspositionTable,
    state: &GameState,
    eval: &dyn Evaluator,
    heuristic: TerminalHeuristic,
    batched: bool,
    descent: bool,
) -> Result<(f64, Vec<(GameState, usize)>), SearchError> {
    let mut ctx = Ctx {
        table,
        eval,
        heuristic,
        batched,
        descent,
        counters: EvalCounters::default(),
        expansions: 0,
        expanded_this_iter: false,
        changed_this_iter: false,
        trace: Some(Vec::new()),
    };
    let value = ctx.iterate(state)?;
    Ok((value, ctx.trace.take().unwrap()))
}

/// The best stored action for the side to move; panics if the state has not
/// been expanded (querying one is a usage error).
pub fn best_action(table: &TranspositionTable, state: &GameState) -> Action {
    let entry = table
        .get(state)
        .unwrap_or_else(|| panic!("best_action queried on an unexpanded state"));
    entry.actions[entry.best_index(state.to_move())]
}

/// Unbounded minimax decision: run iterations until the budget is spent
/// (at least one always completes), then play either the best-valued root
/// action or, with `safe`, the most-selected one.
pub fn ubfm_decide(
    table: &mut TranspositionTable,
    state: &GameState,
    budget: SearchBudget,
    eval: &dyn Evaluator,
    heuristic: TerminalHeuristic,
    opts: MinimaxOptions,
) -> Result<SearchReport, SearchError> {
    decide(table, state, budget, eval, heuristic, opts, false)
}

/// Descent decision: identical protocol with descent iterations.
pub fn descent_decide(
    table: &mut TranspositionTable,
    state: &GameState,
    budget: SearchBudget,
    eval: &dyn Evaluator,
    heuristic: TerminalHeuristic,
    opts: MinimaxOptions,
) -> Result<SearchReport, SearchError> {
    decide(table, state, budget, eval, heuristic, opts, true)
}

fn decide(
    table: &mut TranspositionTable,
    state: &GameState,
    budget: SearchBudget,
    eval: &dyn Evaluator,
    heuristic: TerminalHeuristic,
    opts: MinimaxOptions,
    descent: bool,
) -> Result<SearchReport, SearchError> {
    assert!(!state.is_terminal(), "decide called on a terminal state");
    let started = Instant::now();
    let mut ctx = Ctx {
        table,
        eval,
        heuristic,
        batched: opts.batched,
        descent,
        counters: EvalCounters::default(),
        expansions: 0,
        expanded_this_iter: false,
        changed_this_iter: false,
        trace: None,
    };
    let mut iterations: u64 = 0;
    loop {
        ctx.expanded_this_iter = false;
        ctx.changed_this_iter = false;
        ctx.iterate(state)?;
        iterations += 1;
        let fixed_point =
            !ctx.expanded_this_iter && !ctx.changed_this_iter && !ctx.reconcile();
        match budget {
            SearchBudget::Iterations(n) => {
                if fixed_point && iterations < n {
                    let forced = ctx.force_expand(state, n - iterations)?;
                    iterations += forced;
                    if forced > 0 {
                        ctx.reconcile();
                    } else {
                        ctx.bulk_replay(state, n - iterations);
                        iterations = n;
                    }
                }
                if iterations >= n {
                    break;
                }
            }
            SearchBudget::TimeMillis(_) => {
                let deadline = budget.as_duration().unwrap();
                if fixed_point || started.elapsed() >= deadline {
                    break;
                }
            }
        }
    }

    let entry = ctx.table.get(state).expect("root expanded by the first iteration");
    let mover = state.to_move();
    let chosen_idx =
        if opts.safe { entry.safest_index(mover) } else { entry.best_index(mover) };
    let root = entry
        .actions
        .iter()
        .enumerate()
        .map(|(i, &action)| RootActionStat {
            action,
            value: entry.values[i],
            selections: entry.selections[i],
            visits: 0,
        })
        .collect();
    let engine = match (descent, opts.safe) {
        (false, false) => "ubfm",
        (false, true) => "ubfms",
        (true, true) => "descent",
        (true, false) => "descent-unsafe",
    };
    Ok(SearchReport {
        engine: engine.to_string(),
        action: entry.actions[chosen_idx],
        value: entry.values[entry.best_index(mover)],
        iterations,
        expansions: ctx.expansions,
        leaf_evals: ctx.counters.leaf_evals,
        net_evals: ctx.counters.net_evals,
        eval_batches: ctx.counters.eval_batches,
        root,
        selections: None,
    })
}
