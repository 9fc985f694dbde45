//! Rollout-free MCTS. Leaves are scored by the evaluator (terminal leaves
//! exactly by the heuristic), never by playouts. Selection uses UCT
//! (Q + c·sqrt(ln N / n)) or PUCT (Q + c·P·sqrt(N)/(1+n)); Q values are
//! stored from the first player's perspective and the bandit maximizes or
//! minimizes accordingly. Values are rescaled into [-1, 1] by default so
//! exploration constants are comparable across terminal heuristics.
//!
//! Without first-play urgency, unvisited children are selected before the
//! bandit formula applies; with it they compete immediately, their missing
//! exploitation term replaced by `fpu_value` (default: the parent's current
//! estimate) and their visit count treated as one inside the UCT radical.
//!
//! A batch of size b runs b sequential selections under virtual loss (one
//! pending visit per on-path edge, valued as a loss for the selecting side),
//! evaluates the collected non-terminal leaves as one evaluator call, then
//! backs everything up and restores the pending counters. All virtual losses
//! are restored before the final move is ranked.

use crate::batch::EvalCounters;
use crate::evaluator::Evaluator;
use crate::report::{RootActionStat, SearchReport, SelectionEvent};
use crate::table::{NodeEntry, TranspositionTable};
use crate::{SearchBudget, SearchError};
use mxz_games::{GameState, TerminalHeuristic};
use std::time::Instant;

#[derive(Debug, Clone)]
pub struct MctsConfig {
    /// Exploration constant.
    pub c: f64,
    pub use_fpu: bool,
    /// Substitute exploitation value for unvisited children under FPU, in
    /// the Q scale; `None` uses the parent's current estimate.
    pub fpu_value: Option<f64>,
    /// PUCT selection using the evaluator's policy priors.
    pub use_puct: bool,
    /// Selections per evaluator batch (b >= 1).
    pub batch: usize,
    /// Pending visits added per on-path edge during a batch.
    pub virtual_loss: u32,
    /// Rescale values into [-1, 1] for Q and the c scale.
    pub normalize: bool,
    /// Record every interior selection in the report (instrumentation).
    pub log_selections: bool,
}

impl Default for MctsConfig {
    fn default() -> Self {
        MctsConfig {
            c: 1.0,
            use_fpu: false,
            fpu_value: None,
            use_puct: false,
            batch: 1,
            virtual_loss: 1,
            normalize: true,
            log_selections: false,
        }
    }
}

impl MctsConfig {
    pub fn engine_name(&self) -> String {
        let mut name = format!("mcts?c={}", self.c);
        if self.use_puct {
            name.push_str("&puct=on");
        }
        if self.use_fpu {
            name.push_str("&fpu=on");
        }
        if self.batch != 1 {
            name.push_str(&format!("&b={}", self.batch));
        }
        name
    }
}

enum Leaf {
    /// Terminal leaf with its already-scaled value.
    Terminal(f64),
    /// Unexpanded state waiting for the evaluator.
    Pending(GameState),
}

struct Selection {
    path: Vec<(GameState, usize)>,
    leaf: Leaf,
}

struct Ctx<'a> {
    table: &'a mut TranspositionTable,
    eval: &'a dyn Evaluator,
    heuristic: TerminalHeuristic,
    cfg: &'a MctsConfig,
    scale: f64,
    counters: EvalCounters,
    expansions: u64,
    log: Vec<SelectionEvent>,
}

/// Bandit selection over one node, free of the search context so the hot
/// path borrows the entry straight from the table.
fn select_index(cfg: &MctsConfig, bound: f64, mover: mxz_games::Player, entry: &NodeEntry) -> usize {
    let sign = mover.sign();
    let k = entry.action_count();

    if !cfg.use_fpu {
        // Mandatory first visit: unvisited children go first, in order.
        for i in 0..k {
            if entry.visits[i] == 0 && entry.pending[i] == 0 {
                return i;
            }
        }
    }

    let n_node = entry.visit_total + entry.pending_total;
    let ln_n = (n_node.max(1) as f64).ln();
    let sqrt_n = (n_node as f64).sqrt();
    // One pending visit counts as a loss for the selecting side.
    let loss = -sign * if cfg.normalize { 1.0 } else { bound };
    let fpu = cfg.fpu_value.unwrap_or_else(|| entry.node_estimate());

    let mut best = 0usize;
    let mut best_score = f64::NEG_INFINITY;
    for i in 0..k {
        let n_eff = entry.visits[i] as u64 + entry.pending[i] as u64;
        let exploit = if n_eff == 0 {
            sign * fpu
        } else {
            let w = entry.value_sums[i] + entry.pending[i] as f64 * loss;
            sign * (w / n_eff as f64)
        };
        let explore = if cfg.use_puct {
            let p = entry.priors.as_ref().map_or(0.0, |p| p[i]);
            p * sqrt_n / (1.0 + n_eff as f64)
        } else {
            (ln_n / n_eff.max(1) as f64).sqrt()
        };
        let score = exploit + cfg.c * explore;
        if score > best_score {
            best_score = score;
            best = i;
        }
    }
    best
}

impl Ctx<'_> {
    fn log_selection(&mut self, entry: &NodeEntry, sign: f64, chosen: usize) {
        let all_visited = entry.visits.iter().all(|&v| v > 0);
        let mover_q: Vec<f64> = (0..entry.action_count())
            .map(|i| {
                if entry.visits[i] == 0 {
                    f64::NEG_INFINITY
                } else {
                    sign * entry.value_sums[i] / entry.visits[i] as f64
                }
            })
            .collect();
        self.log.push(SelectionEvent {
            all_visited,
            chosen,
            mover_q,
            visits: entry.visits.clone(),
        });
    }

    fn select_one(&mut self, root: &GameState) -> Result<Selection, SearchError> {
        let mut path: Vec<(GameState, usize)> = Vec::new();
        let mut state = root.clone();
        let leaf = loop {
            if state.is_terminal() {
                self.counters.leaf_evals += 1;
                break Leaf::Terminal(state.terminal_value(self.heuristic) * self.scale);
            }
            let Some(entry) = self.table.get(&state) else {
                break Leaf::Pending(state);
            };
            let idx = select_index(self.cfg, self.eval.bound(), state.to_move(), entry);
            let action = entry.actions[idx];
            if self.cfg.log_selections {
                let entry = entry.clone();
                self.log_selection(&entry, state.to_move().sign(), idx);
            }
            let child = state.apply(action)?;
            path.push((state, idx));
            state = child;
        };
        // Reserve the path: pending visits make the next selection in this
        // batch diverge.
        for (s, idx) in &path {
            let e = self.table.get_mut(s).unwrap();
            e.pending[*idx] += self.cfg.virtual_loss;
            e.pending_total += self.cfg.virtual_loss as u64;
        }
        Ok(Selection { path, leaf })
    }

    fn backup(&mut self, path: &[(GameState, usize)], leaf: Option<&GameState>, value: f64) {
        for (s, idx) in path.iter().rev() {
            let e = self.table.get_mut(s).unwrap();
            e.visits[*idx] += 1;
            e.value_sums[*idx] += value;
            e.visit_total += 1;
            e.pending[*idx] -= self.cfg.virtual_loss;
            e.pending_total -= self.cfg.virtual_loss as u64;
        }
        if let Some(s) = leaf {
            self.table.get_mut(s).unwrap().visit_total += 1;
        }
    }
}

/// MCTS decision. The final move is the most-visited root child, ties broken
/// by Q from the mover's perspective and then by action index.
pub fn mcts_decide(
    table: &mut TranspositionTable,
    state: &GameState,
    budget: SearchBudget,
    eval: &dyn Evaluator,
    heuristic: TerminalHeuristic,
    cfg: &MctsConfig,
) -> Result<SearchReport, SearchError> {
    assert!(!state.is_terminal(), "decide called on a terminal state");
    if cfg.batch == 0 {
        return Err(SearchError::Config("mcts batch size must be >= 1".into()));
    }
    if cfg.use_puct && !eval.has_policy() {
        return Err(SearchError::Config("puct selection requires an evaluator with a policy".into()));
    }
    let started = Instant::now();
    let scale = if cfg.normalize { 1.0 / eval.bound() } else { 1.0 };
    let mut ctx = Ctx {
        table,
        eval,
        heuristic,
        cfg,
        scale,
        counters: EvalCounters::default(),
        expansions: 0,
        log: Vec::new(),
    };

    // Expand the root up front so every iteration selects a root edge.
    if !ctx.table.contains(state) {
        let evals = ctx.eval.evaluate(std::slice::from_ref(state))?;
        ctx.counters.leaf_evals += 1;
        ctx.counters.net_evals += 1;
        ctx.counters.eval_batches += 1;
        let mut leaf = evals.into_iter().next().unwrap();
        leaf.value *= scale;
        ctx.table.insert(state.clone(), NodeEntry::from_mcts_expansion(state.legal_actions(), &leaf));
        ctx.expansions += 1;
    }

    let mut completed: u64 = 0;
    loop {
        let batch = match budget {
            SearchBudget::Iterations(n) => {
                if completed >= n {
                    break;
                }
                (cfg.batch as u64).min(n - completed) as usize
            }
            SearchBudget::TimeMillis(_) => {
                if completed > 0 && started.elapsed() >= budget.as_duration().unwrap() {
                    break;
                }
                cfg.batch
            }
        };
        let mut selections = Vec::with_capacity(batch);
        for _ in 0..batch {
            selections.push(ctx.select_one(state)?);
        }
        // One evaluator call for every pending leaf of the batch.
        let pending_states: Vec<GameState> = selections
            .iter()
            .filter_map(|s| match &s.leaf {
                Leaf::Pending(st) => Some(st.clone()),
                Leaf::Terminal(_) => None,
            })
            .collect();
        let mut pending_evals = if pending_states.is_empty() {
            Vec::new()
        } else {
            let evals = ctx.eval.evaluate(&pending_states)?;
            ctx.counters.leaf_evals += pending_states.len() as u64;
            ctx.counters.net_evals += pending_states.len() as u64;
            ctx.counters.eval_batches += 1;
            evals
        }
        .into_iter();

        for sel in &selections {
            match &sel.leaf {
                Leaf::Terminal(v) => ctx.backup(&sel.path, None, *v),
                Leaf::Pending(st) => {
                    let mut leaf = pending_evals.next().expect("one eval per pending leaf");
                    leaf.value *= scale;
                    if !ctx.table.contains(st) {
                        ctx.table
                            .insert(st.clone(), NodeEntry::from_mcts_expansion(st.legal_actions(), &leaf));
                        ctx.expansions += 1;
                    }
                    ctx.backup(&sel.path, Some(st), leaf.value);
                }
            }
        }
        completed += batch as u64;
    }

    let entry = ctx.table.get(state).expect("root expanded above");
    debug_assert_eq!(entry.pending_total, 0, "virtual losses must be restored");
    let sign = state.to_move().sign();
    let q = |i: usize| -> f64 {
        if entry.visits[i] == 0 {
            f64::NEG_INFINITY
        } else {
            sign * entry.value_sums[i] / f64::from(entry.visits[i])
        }
    };
    let mut chosen = 0usize;
    for i in 1..entry.action_count() {
        if entry.visits[i] > entry.visits[chosen]
            || (entry.visits[i] == entry.visits[chosen] && q(i) > q(chosen))
        {
            chosen = i;
        }
    }
    let unscale = 1.0 / scale;
    let total_visits: u64 = entry.visits.iter().map(|&v| u64::from(v)).sum();
    let root_value = if total_visits == 0 {
        entry.leaf_value * unscale
    } else {
        entry.value_sums.iter().sum::<f64>() / total_visits as f64 * unscale
    };
    let root = entry
        .actions
        .iter()
        .enumerate()
        .map(|(i, &action)| RootActionStat {
            action,
            value: if entry.visits[i] == 0 {
                0.0
            } else {
                entry.value_sums[i] / f64::from(entry.visits[i]) * unscale
            },
            selections: 0,
            visits: entry.visits[i],
        })
        .collect();
    Ok(SearchReport {
        engine: cfg.engine_name(),
        action: entry.actions[chosen],
        value: root_value,
        iterations: completed,
        expansions: ctx.expansions,
        leaf_evals: ctx.counters.leaf_evals,
        net_evals: ctx.counters.net_evals,
        eval_batches: ctx.counters.eval_batches,
        root,
        selections: if cfg.log_selections { Some(ctx.log) } else { None },
    })
}
