//! Self-play game generation and the learning phase.
//!
//! Descent self-play: every move is a safe descent decision; when the game
//! ends, the whole surviving search tree is harvested: one sample per
//! expanded state, target = its minimax value in the partial tree, plus one
//! sample per terminal state touched by the tree with its exact heuristic
//! value. Nothing learned during the search is thrown away, which yields
//! far more samples per game than the played line alone.
//!
//! Az-lite self-play: every move is a PUCT-MCTS decision (visit-sampled for
//! the first few plies); only the played states are harvested, value target
//! = final gain, policy target = root visit distribution.

use crate::config::{Framework, LearnConfig, ReplayMode};
use crate::memory::ReplayMemory;
use crate::record::GameRecord;
use crate::{mix_seed, LearnError};
use mxz_eval::{train_step, ReplaySample, TrainLoss, ValueNetwork};
use mxz_games::encode::{encode, policy_index};
use mxz_games::symmetry::{policy_permutation, symmetry_expand, Symmetry};
use mxz_games::GameState;
use mxz_search::{
    descent_decide, mcts_decide, Evaluator, MctsConfig, MinimaxOptions, SearchReport,
    TranspositionTable,
};
use rand::distr::weighted::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashSet;

/// Play one descent self-play game and harvest the final partial game tree.
pub fn descent_selfplay_game(
    eval: &dyn Evaluator,
    cfg: &LearnConfig,
    seed: u64,
) -> Result<(GameRecord, Vec<ReplaySample>), LearnError> {
    assert_eq!(cfg.framework, Framework::Descent);
    let mut table = TranspositionTable::new();
    let mut state = cfg.game.initial_state();
    let mut moves = Vec::new();
    let mut reports: Vec<SearchReport> = Vec::new();
    while !state.is_terminal() {
        let report = descent_decide(
            &mut table,
            &state,
            cfg.budget,
            eval,
            cfg.heuristic,
            MinimaxOptions { safe: true, batched: cfg.batched_eval },
        )?;
        state = state.apply(report.action).map_err(mxz_search::SearchError::Rules)?;
        moves.push(report.action);
        reports.push(report);
    }
    let encoding = cfg.encoding();
    let mut samples = Vec::with_capacity(table.len());
    let mut terminals_seen: FxHashSet<GameState> = FxHashSet::default();
    for (s, entry) in table.iter() {
        let target = entry.values[entry.best_index(s.to_move())] as f32;
        samples.push(ReplaySample::value(encode(s, encoding), target));
        for &action in &entry.actions {
            let child = s.apply(action).map_err(mxz_search::SearchError::Rules)?;
            if child.is_terminal() && terminals_seen.insert(child.clone()) {
                let value = child.terminal_value(cfg.heuristic) as f32;
                samples.push(ReplaySample::value(encode(&child, encoding), value));
            }
        }
    }
    let record = GameRecord {
        framework: cfg.framework.name().to_string(),
        game: cfg.game.to_string(),
        seed,
        gain: state.gain(),
        heuristic_value: state.terminal_value(cfg.heuristic),
        length: state.move_count(),
        moves,
        reports,
    };
    Ok((record, samples))
}

/// Play one az-lite self-play game: PUCT search, temperature phase, one
/// sample per played state.
pub fn azlite_selfplay_game(
    eval: &dyn Evaluator,
    cfg: &LearnConfig,
    seed: u64,
) -> Result<(GameRecord, Vec<ReplaySample>), LearnError> {
    assert_eq!(cfg.framework, Framework::AzLite);
    let mcts_cfg = MctsConfig {
        c: cfg.mcts_c,
        use_fpu: cfg.mcts_fpu,
        fpu_value: None,
        use_puct: true,
        batch: cfg.mcts_batch.max(1),
        virtual_loss: 1,
        normalize: true,
        log_selections: false,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, 0xA7));
    let mut table = TranspositionTable::new();
    let mut state = cfg.game.initial_state();
    let mut moves = Vec::new();
    let mut reports: Vec<SearchReport> = Vec::new();
    let mut played: Vec<GameState> = Vec::new();
    let mut policies: Vec<Vec<(u32, f32)>> = Vec::new();
    let game_cfg = cfg.game;
    while !state.is_terminal() {
        let report =
            mcts_decide(&mut table, &state, cfg.budget, eval, cfg.heuristic, &mcts_cfg)?;
        let visits: Vec<u32> = report.root.iter().map(|s| s.visits).collect();
        let total: u32 = visits.iter().sum();
        // Policy target: root visit distribution over legal actions.
        let policy: Vec<(u32, f32)> = report
            .root
            .iter()
            .filter(|s| s.visits > 0)
            .map(|s| (policy_index(&game_cfg, s.action) as u32, s.visits as f32 / total as f32))
            .collect();
        let action = if moves.len() < cfg.temperature_moves && total > 0 {
            let dist = WeightedIndex::new(&visits)
                .map_err(|e| LearnError::Config(format!("visit sampling: {e}")))?;
            report.root[dist.sample(&mut rng)].action
        } else {
            report.action
        };
        played.push(state.clone());
        policies.push(policy);
        state = state.apply(action).map_err(mxz_search::SearchError::Rules)?;
        moves.push(action);
        reports.push(report);
    }
    let gain = state.gain();
    let encoding = cfg.encoding();
    let samples = played
        .iter()
        .zip(policies)
        .map(|(s, policy)| ReplaySample {
            features: encode(s, encoding),
            target: gain as f32,
            policy: Some(policy),
        })
        .collect();
    let record = GameRecord {
        framework: cfg.framework.name().to_string(),
        game: cfg.game.to_string(),
        seed,
        gain,
        heuristic_value: state.terminal_value(cfg.heuristic),
        length: state.move_count(),
        moves,
        reports,
    };
    Ok((record, samples))
}

#[derive(Debug, Clone, Copy, Default)]
pub struct PhaseStats {
    pub drawn: usize,
    pub trained: usize,
    pub steps: usize,
    pub loss: TrainLoss,
}

/// One learning phase: draw ⌈σ·|memory|⌉ samples without replacement
/// (modified replay guarantees the newest game), optionally expand them
/// under the game's symmetry group, and train in mini-batches of B (final
/// partial batch allowed). Replay mode `Off` clears the memory afterwards.
pub fn learning_phase(
    memory: &mut ReplayMemory,
    net: &mut ValueNetwork,
    cfg: &LearnConfig,
    seed: u64,
) -> Result<PhaseStats, LearnError> {
    if memory.is_empty() {
        return Err(LearnError::Config("learning phase on an empty memory".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let include_newest = cfg.replay_mode == ReplayMode::Modified;
    let drawn = memory.draw(cfg.sampling_rate, include_newest, &mut rng);
    let drawn_count = drawn.len();
    let mut train_set: Vec<ReplaySample> = if cfg.symmetry_augment {
        let mut out = Vec::with_capacity(drawn.len() * 2);
        for sample in drawn {
            out.extend(expand_sample(&cfg.game, sample));
        }
        out
    } else {
        drawn
    };
    train_set.shuffle(&mut rng);
    let mut stats = PhaseStats { drawn: drawn_count, trained: train_set.len(), ..Default::default() };
    let mut total = TrainLoss::default();
    for batch in train_set.chunks(cfg.batch_size) {
        let loss = train_step(net, batch, cfg.train)?;
        total.total += loss.total;
        total.value_mse += loss.value_mse;
        total.policy_ce += loss.policy_ce;
        stats.steps += 1;
    }
    if stats.steps > 0 {
        let n = stats.steps as f64;
        stats.loss =
            TrainLoss { total: total.total / n, value_mse: total.value_mse / n, policy_ce: total.policy_ce / n };
    }
    if cfg.replay_mode == ReplayMode::Off {
        memory.clear();
    }
    Ok(stats)
}

/// Orbit of one sample under the game's symmetry group, policy targets
/// permuted alongside the planes, duplicates removed.
fn expand_sample(game: &mxz_games::GameConfig, sample: ReplaySample) -> Vec<ReplaySample> {
    match &sample.policy {
        None => symmetry_expand(game.id, &(sample.features.clone(), sample.target))
            .into_iter()
            .map(|(features, target)| ReplaySample::value(features, target))
            .collect(),
        Some(policy) => {
            let mut out: Vec<ReplaySample> = Vec::new();
            for &sym in Symmetry::group(game.id) {
                let features = mxz_games::symmetry::transform_tensor(&sample.features, sym);
                if out.iter().any(|s| s.features == features) {
                    continue;
                }
                let perm = policy_permutation(game, sym);
                let mapped =
                    policy.iter().map(|&(idx, p)| (perm[idx as usize] as u32, p)).collect();
                out.push(ReplaySample {
                    features,
                    target: sample.target,
                    policy: Some(mapped),
                });
            }
            out
        }
    }
}
