//! Agents and the engine-name grammar.
//!
//! An agent spec is an engine name with optional `?key=value&...` options:
//!
//! - engines: `ubfm`, `ubfms`, `descent`, `id-ab`,
//!   `mcts?c=0.5&b=4&fpu=on&puct=on`, plus the baselines `random` and
//!   `oracle` (exhaustive negamax; tiny boards only);
//! - common options: `net=PATH` (checkpoint evaluator), `eval=zero` /
//!   `eval=pessimistic` / `eval=noise:SEED`, `h=classic|depth|scoring`,
//!   `budget=128` / `budget=500ms` (overrides the harness default),
//!   `batched=on|off`;
//! - mcts options: `c`, `b`, `fpu` (`on`, `off` or a number), `puct`,
//!   `norm=off` for raw-scale Q.

use crate::HarnessError;
use mxz_eval::load_checkpoint;
use mxz_games::{Action, Encoding, GameConfig, GameId, GameState, TerminalHeuristic};
use mxz_learn::NetEvaluator;
use mxz_search::{
    descent_decide, id_alphabeta_decide, mcts_decide, ubfm_decide, AlphaBetaOptions, Evaluator,
    HashNoiseEvaluator, MctsConfig, MinimaxOptions, Oracle, PessimisticEvaluator, SearchBudget,
    SearchReport, TranspositionTable, ZeroEvaluator,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// A playing agent. One instance plays one game at a time; `reset` is
/// called before each game (engines clear their transposition table there).
pub trait Agent: Send {
    fn name(&self) -> &str;
    fn reset(&mut self, seed: u64);
    fn choose(&mut self, state: &GameState)
        -> Result<(Action, Option<SearchReport>), HarnessError>;
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum EngineKind {
    Ubfm { safe: bool },
    Descent { safe: bool },
    IdAb,
    Mcts,
    Random,
    OracleNegamax,
}

/// Parsed, resolvable agent description. Building an agent resolves the
/// evaluator (loading checkpoints as needed); building is cheap enough to
/// do once per worker.
#[derive(Debug, Clone)]
pub struct AgentSpec {
    pub spec: String,
    kind: EngineKind,
    options: Vec<(String, String)>,
}

impl AgentSpec {
    pub fn parse(spec: &str) -> Result<AgentSpec, HarnessError> {
        let bad = |why: &str| HarnessError::AgentSpec { spec: spec.to_string(), why: why.into() };
        let (name, query) = match spec.split_once('?') {
            Some((n, q)) => (n.trim(), q),
            None => (spec.trim(), ""),
        };
        let kind = match name.to_ascii_lowercase().as_str() {
            "ubfm" => EngineKind::Ubfm { safe: false },
            "ubfms" => EngineKind::Ubfm { safe: true },
            "descent" => EngineKind::Descent { safe: true },
            "descent-unsafe" => EngineKind::Descent { safe: false },
            "id-ab" | "idab" | "ab" => EngineKind::IdAb,
            "mcts" => EngineKind::Mcts,
            "random" => EngineKind::Random,
            "oracle" => EngineKind::OracleNegamax,
            other => return Err(bad(&format!("unknown engine `{other}`"))),
        };
        let mut options = Vec::new();
        for pair in query.split('&').filter(|p| !p.is_empty()) {
            let Some((k, v)) = pair.split_once('=') else {
                return Err(bad(&format!("malformed option `{pair}`")));
            };
            options.push((k.trim().to_ascii_lowercase(), v.trim().to_string()));
        }
        Ok(AgentSpec { spec: spec.to_string(), kind, options })
    }

    fn option(&self, key: &str) -> Option<&str> {
        self.options.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// Re-encode with one option set (used by sweeps).
    pub fn with_option(&self, key: &str, value: &str) -> AgentSpec {
        let mut options = self.options.clone();
        match options.iter_mut().find(|(k, _)| k == key) {
            Some(entry) => entry.1 = value.to_string(),
            None => options.push((key.to_string(), value.to_string())),
        }
        let name = self.spec.split('?').next().unwrap().to_string();
        let query: Vec<String> = options.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let spec =
            if query.is_empty() { name } else { format!("{name}?{}", query.join("&")) };
        AgentSpec::parse(&spec).expect("re-encoded spec parses")
    }

    /// Resolve the evaluator and instantiate the agent for a game.
    pub fn build(
        &self,
        game: &GameConfig,
        default_budget: SearchBudget,
    ) -> Result<Box<dyn Agent>, HarnessError> {
        let bad = |why: String| HarnessError::AgentSpec { spec: self.spec.clone(), why };
        let budget = match self.option("budget") {
            Some(b) => b.parse().map_err(|e: String| bad(e))?,
            None => default_budget,
        };
        match self.kind {
            EngineKind::Random => Ok(Box::new(RandomAgent {
                name: self.spec.clone(),
                rng: ChaCha8Rng::seed_from_u64(0),
            })),
            EngineKind::OracleNegamax => {
                let heuristic = self.heuristic(game)?;
                Ok(Box::new(OracleAgent {
                    name: self.spec.clone(),
                    oracle: Oracle::new(heuristic),
                }))
            }
            _ => {
                let (evaluator, heuristic) = self.evaluator_and_heuristic(game)?;
                let batched = match self.option("batched") {
                    Some(v) => v == "on" || v == "true" || v == "1",
                    None => true,
                };
                let mcts = if self.kind == EngineKind::Mcts {
                    let mut cfg = MctsConfig::default();
                    if let Some(c) = self.option("c") {
                        cfg.c = c.parse().map_err(|_| bad(format!("bad c `{c}`")))?;
                    }
                    if let Some(b) = self.option("b") {
                        cfg.batch = b.parse().map_err(|_| bad(format!("bad b `{b}`")))?;
                    }
                    match self.option("fpu") {
                        None | Some("off") => {}
                        Some("on") => cfg.use_fpu = true,
                        Some(v) => {
                            cfg.use_fpu = true;
                            cfg.fpu_value =
                                Some(v.parse().map_err(|_| bad(format!("bad fpu `{v}`")))?);
                        }
                    }
                    cfg.use_puct = matches!(self.option("puct"), Some("on" | "true" | "1"));
                    if let Some("off") = self.option("norm") {
                        cfg.normalize = false;
                    }
                    Some(cfg)
                } else {
                    None
                };
                Ok(Box::new(SearchAgent {
                    name: self.spec.clone(),
                    kind: self.kind,
                    evaluator,
                    heuristic,
                    budget,
                    batched,
                    mcts,
                    table: TranspositionTable::new(),
                }))
            }
        }
    }

    fn heuristic(&self, game: &GameConfig) -> Result<TerminalHeuristic, HarnessError> {
        match self.option("h") {
            Some(h) => TerminalHeuristic::parse(h)
                .map_err(|e| HarnessError::AgentSpec { spec: self.spec.clone(), why: e.to_string() }),
            None => Ok(match game.id {
                GameId::Othello => TerminalHeuristic::Scoring,
                _ => TerminalHeuristic::ClassicGain,
            }),
        }
    }

    /// Resolve the evaluator and the terminal heuristic together: search is
    /// only coherent when terminal values and network predictions share one
    /// scale, so a checkpoint's training heuristic wins over the per-game
    /// default (an explicit `h=` option overrides both).
    fn evaluator_and_heuristic(
        &self,
        game: &GameConfig,
    ) -> Result<(Arc<dyn Evaluator + Send + Sync>, TerminalHeuristic), HarnessError> {
        let err = |why: String| HarnessError::AgentSpec { spec: self.spec.clone(), why };
        if let Some(path) = self.option("net") {
            let (net, _) = load_checkpoint(std::path::Path::new(path))?;
            let planes = net.spec.input.0;
            let sides = planes > Encoding::default().plane_count(game.id);
            let heuristic = match self.option("h") {
                Some(h) => TerminalHeuristic::parse(h).map_err(|e| err(e.to_string()))?,
                None => net.heuristic.unwrap_or_else(|| infer_heuristic(game, net.spec.bound)),
            };
            let expected = heuristic.bound(game).map_err(|e| err(e.to_string()))?;
            if (expected - net.spec.bound).abs() > 1e-9 {
                return Err(err(format!(
                    "heuristic {} has bound {expected} but the checkpoint was trained with bound {}",
                    heuristic.name(),
                    net.spec.bound
                )));
            }
            return Ok((Arc::new(NetEvaluator::new(net, Encoding { sides })), heuristic));
        }
        let heuristic = self.heuristic(game)?;
        let bound = heuristic.bound(game).map_err(|e| err(e.to_string()))?;
        let evaluator: Arc<dyn Evaluator + Send + Sync> = match self.option("eval") {
            None | Some("zero") => Arc::new(ZeroEvaluator { bound }),
            Some("pessimistic") => Arc::new(PessimisticEvaluator { bound: 0.5 }),
            Some(v) if v.starts_with("noise") => {
                let seed = v.split(':').nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
                Arc::new(HashNoiseEvaluator { bound, seed })
            }
            Some(other) => return Err(err(format!("unknown evaluator `{other}`"))),
        };
        Ok((evaluator, heuristic))
    }
}

struct SearchAgent {
    name: String,
    kind: EngineKind,
    evaluator: Arc<dyn Evaluator + Send + Sync>,
    heuristic: TerminalHeuristic,
    budget: SearchBudget,
    batched: bool,
    mcts: Option<MctsConfig>,
    table: TranspositionTable,
}

impl Agent for SearchAgent {
    fn name(&self) -> &str {
        &self.name
    }

    fn reset(&mut self, _seed: u64) {
        // The transposition table persists across moves within one game and
        // is cleared between games.
        self.table.clear();
    }

    fn choose(
        &mut self,
        state: &GameState,
    ) -> Result<(Action, Option<SearchReport>), HarnessError> {
        let eval: &dyn Evaluator = self.evaluator.as_ref();
        let started = std::time::Instant::now();
        let report = match self.kind {
            EngineKind::Ubfm { safe } => ubfm_decide(
                &mut self.table,
                state,
                self.budget,
                eval,
                self.heuristic,
                MinimaxOptions { safe, batched: self.batched },
            )?,
            EngineKind::Descent { safe } => descent_decide(
                &mut self.table,
                state,
                self.budget,
                eval,
                self.heuristic,
                MinimaxOptions { safe, batched: self.batched },
            )?,
            EngineKind::IdAb => id_alphabeta_decide(
                state,
                self.budget,
                eval,
                self.heuristic,
                AlphaBetaOptions { batched: self.batched, ordering: true },
            )?,
            EngineKind::Mcts => mcts_decide(
                &mut self.table,
                state,
                self.budget,
                eval,
                self.heuristic,
                self.mcts.as_ref().expect("mcts config present"),
            )?,
            EngineKind::Random | EngineKind::OracleNegamax => unreachable!(),
        };
        // Wall-time budgets are soft: a move finishing its current
        // iteration may overrun. Logged, never forfeited.
        if let Some(limit) = self.budget.as_duration() {
            let spent = started.elapsed();
            if spent > limit * 2 {
                eprintln!(
                    "note: {} overran its {limit:?} budget ({spent:?}) on one move",
                    self.name
                );
            }
        }
        Ok((report.action, Some(report)))
    }
}

struct RandomAgent {
    name: String,
    rng: ChaCha8Rng,
}

impl Agent for RandomAgent {
    fn name(&self) -> &str {
        &self.name
    }

    fn reset(&mut self, seed: u64) {
        self.rng = ChaCha8Rng::seed_from_u64(seed);
    }

    fn choose(
        &mut self,
        state: &GameState,
    ) -> Result<(Action, Option<SearchReport>), HarnessError> {
        let actions = state.legal_actions();
        Ok((actions[self.rng.random_range(0..actions.len())], None))
    }
}

struct OracleAgent {
    name: String,
    oracle: Oracle,
}

impl Agent for OracleAgent {
    fn name(&self) -> &str {
        &self.name
    }

    fn reset(&mut self, _seed: u64) {}

    fn choose(
        &mut self,
        state: &GameState,
    ) -> Result<(Action, Option<SearchReport>), HarnessError> {
        Ok((self.oracle.best_action(state), None))
    }
}

/// Heuristic a checkpoint without metadata was most plausibly trained for,
/// judged by its output bound.
fn infer_heuristic(game: &GameConfig, bound: f64) -> TerminalHeuristic {
    for h in [TerminalHeuristic::ClassicGain, TerminalHeuristic::Depth, TerminalHeuristic::Scoring] {
        if let Ok(b) = h.bound(game) {
            if (b - bound).abs() < 1e-9 {
                return h;
            }
        }
    }
    TerminalHeuristic::ClassicGain
}
