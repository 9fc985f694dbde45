//! The training-run driver: alternates self-play games with learning
//! phases, writes periodic checkpoints, a metrics CSV
//! (phase,games,samples,loss,probe_winrate,wall_seconds) and a JSONL game
//! stream, and resumes from the latest checkpoint in the output directory.

use crate::config::{Framework, LearnConfig, RunBudget};
use crate::evaluator::NetEvaluator;
use crate::memory::ReplayMemory;
use crate::selfplay::{azlite_selfplay_game, descent_selfplay_game, learning_phase};
use crate::{mix_seed, LearnError};
use mxz_eval::{
    load_checkpoint, pretrain_terminal, save_checkpoint, NetworkSpec, PretrainConfig,
    ValueNetwork,
};
use mxz_games::playout::random_action;
use mxz_games::{GameState, Player};
use mxz_search::{descent_decide, Evaluator, MinimaxOptions, TranspositionTable};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub budget: RunBudget,
    /// Save a checkpoint every this many games (0: only first and last).
    pub checkpoint_cadence: u64,
    /// Paired probe games against a uniform-random mover per probe (0: off).
    pub probe_games: usize,
    /// Probe every this many learning phases.
    pub probe_cadence: u64,
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub games: u64,
    pub phases: u64,
    pub samples: u64,
    pub net_evals: u64,
    pub checkpoints: Vec<PathBuf>,
    pub final_checkpoint: PathBuf,
    pub resumed_from: Option<u64>,
}

fn checkpoint_path(dir: &Path, games: u64) -> PathBuf {
    dir.join(format!("ckpt_{games:08}.mxz"))
}

fn latest_checkpoint(dir: &Path) -> Option<(u64, PathBuf)> {
    let mut best: Option<(u64, PathBuf)> = None;
    for entry in std::fs::read_dir(dir).ok()?.flatten() {
        let name = entry.file_name().to_string_lossy().into_owned();
        if let Some(games) = name
            .strip_prefix("ckpt_")
            .and_then(|s| s.strip_suffix(".mxz"))
            .and_then(|s| s.parse::<u64>().ok())
        {
            if best.as_ref().is_none_or(|(g, _)| games > *g) {
                best = Some((games, entry.path()));
            }
        }
    }
    best
}

/// Build the configured network, fresh or pre-initialized on random
/// terminal states.
pub fn build_network(cfg: &LearnConfig) -> Result<ValueNetwork, LearnError> {
    let spec = NetworkSpec::for_game(cfg.architecture, &cfg.game, cfg.encoding(), cfg.heuristic)?
        .with_widths(cfg.filters, cfg.dense);
    let mut net = match cfg.framework {
        Framework::Descent => ValueNetwork::new(spec, cfg.seed)?,
        Framework::AzLite => ValueNetwork::with_policy(spec, cfg.seed, cfg.game.id)?,
    };
    net.heuristic = Some(cfg.heuristic);
    Ok(net)
}

/// Train. Alternates `games_per_phase` self-play games with one learning
/// phase until the budget is spent; emits checkpoints (including the
/// initial, pretrained one) plus metrics and game-record streams. Resumes
/// from the newest checkpoint in `out_dir` when one exists; resuming is
/// idempotent: resuming twice from the same checkpoint produces identical
/// outputs because the per-game seeds derive from the game index.
pub fn training_run(cfg: &LearnConfig, opts: &RunOptions) -> Result<RunSummary, LearnError> {
    cfg.validate()?;
    let started = Instant::now();
    let dir = &opts.out_dir;
    std::fs::create_dir_all(dir).map_err(|e| LearnError::Io(format!("{}: {e}", dir.display())))?;
    let digest = mxz_eval::checkpoint::digest(&cfg.digest_text());

    let resumed = latest_checkpoint(dir);
    let resumed_from = resumed.as_ref().map(|(g, _)| *g);
    let mut net = match &resumed {
        Some((_, path)) => {
            let (net, meta) = load_checkpoint(path)?;
            if meta.config_digest != digest {
                return Err(LearnError::Config(format!(
                    "checkpoint {} was trained under a different configuration",
                    path.display()
                )));
            }
            net
        }
        None => {
            let mut net = build_network(cfg)?;
            if cfg.pretrain_games > 0 {
                let pre = PretrainConfig {
                    epochs: cfg.pretrain_epochs,
                    batch_size: cfg.batch_size.min(256),
                    train: cfg.train,
                    encoding: cfg.encoding(),
                    seed: mix_seed(cfg.seed, 0x13E),
                };
                pretrain_terminal(&mut net, &cfg.game, cfg.pretrain_games, cfg.heuristic, &pre)?;
            }
            net
        }
    };

    let mut checkpoints = Vec::new();
    if resumed.is_none() {
        let p = checkpoint_path(dir, 0);
        save_checkpoint(&net, &p, &digest)?;
        checkpoints.push(p);
    }

    let metrics_path = dir.join("metrics.csv");
    let mut metrics = open_append(&metrics_path)?;
    if metrics_is_empty(&metrics_path) {
        writeln!(metrics, "phase,games,samples,loss,probe_winrate,wall_seconds")
            .map_err(|e| LearnError::Io(e.to_string()))?;
    }
    let mut records = open_append(&dir.join("games.jsonl"))?;

    let mut memory = ReplayMemory::new(cfg.memory_capacity);
    let mut games: u64 = net.games_trained;
    let mut phases: u64 = 0;
    let mut net_evals: u64 = 0;
    let mut last_probe = String::new();
    let done = |games: u64, net_evals: u64, started: &Instant| match opts.budget {
        RunBudget::Games(n) => games >= n,
        RunBudget::NetEvals(n) => net_evals >= n,
        RunBudget::WallSeconds(s) => started.elapsed().as_secs() >= s,
    };

    while !done(games, net_evals, &started) {
        // Self-play block.
        let mut block_samples = 0u64;
        for _ in 0..cfg.games_per_phase.max(1) {
            let game_seed = mix_seed(cfg.seed, games.wrapping_add(1));
            let eval = NetEvaluator::new(net.clone(), cfg.encoding());
            let (record, samples) = match cfg.framework {
                Framework::Descent => descent_selfplay_game(&eval, cfg, game_seed)?,
                Framework::AzLite => azlite_selfplay_game(&eval, cfg, game_seed)?,
            };
            net_evals += record.reports.iter().map(|r| r.net_evals).sum::<u64>();
            block_samples += samples.len() as u64;
            memory.push_game(samples);
            writeln!(records, "{}", record.to_json_line())
                .map_err(|e| LearnError::Io(e.to_string()))?;
            games += 1;
            net.games_trained = games;
            if done(games, net_evals, &started) {
                break;
            }
        }
        // Learning phase.
        let stats = learning_phase(&mut memory, &mut net, cfg, mix_seed(cfg.seed, 0xF00 + phases))?;
        phases += 1;
        // Optional probe against the uniform-random baseline.
        if opts.probe_games > 0 && opts.probe_cadence > 0 && phases % opts.probe_cadence == 0 {
            let rate = probe_vs_random(&net, cfg, opts.probe_games, mix_seed(cfg.seed, 0xBEEF + phases))?;
            last_probe = format!("{rate:.3}");
        } else {
            last_probe.clear();
        }
        writeln!(
            metrics,
            "{phases},{games},{block_samples},{:.6},{last_probe},{:.1}",
            stats.loss.total,
            started.elapsed().as_secs_f64()
        )
        .map_err(|e| LearnError::Io(e.to_string()))?;
        if opts.checkpoint_cadence > 0 && games % opts.checkpoint_cadence == 0 {
            let p = checkpoint_path(dir, games);
            save_checkpoint(&net, &p, &digest)?;
            checkpoints.push(p);
        }
    }
    metrics.flush().ok();
    records.flush().ok();
    let final_path = checkpoint_path(dir, games);
    save_checkpoint(&net, &final_path, &digest)?;
    if checkpoints.last() != Some(&final_path) {
        checkpoints.push(final_path.clone());
    }
    Ok(RunSummary {
        games,
        phases,
        samples: memory.inserted(),
        net_evals,
        checkpoints,
        final_checkpoint: final_path,
        resumed_from,
    })
}

fn open_append(path: &Path) -> Result<std::io::BufWriter<std::fs::File>, LearnError> {
    std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map(std::io::BufWriter::new)
        .map_err(|e| LearnError::Io(format!("{}: {e}", path.display())))
}

fn metrics_is_empty(path: &Path) -> bool {
    std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true)
}

/// Paired-color probe: the network (driven by safe descent at the training
/// budget) against a uniform-random mover. Returns the win rate in [0, 1].
fn probe_vs_random(
    net: &ValueNetwork,
    cfg: &LearnConfig,
    games: usize,
    seed: u64,
) -> Result<f64, LearnError> {
    let eval = NetEvaluator::new(net.clone(), cfg.encoding());
    let mut wins = 0.0f64;
    for g in 0..games {
        let net_first = g % 2 == 0;
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, g as u64));
        let mut table = TranspositionTable::new();
        let mut state = cfg.game.initial_state();
        while !state.is_terminal() {
            let net_turn = (state.to_move() == Player::First) == net_first;
            let action = if net_turn {
                descent_decide(
                    &mut table,
                    &state,
                    cfg.budget,
                    &eval as &dyn Evaluator,
                    cfg.heuristic,
                    MinimaxOptions { safe: true, batched: cfg.batched_eval },
                )?
                .action
            } else {
                random_action(&state, &mut rng)
            };
            state = state.apply(action).map_err(mxz_search::SearchError::Rules)?;
        }
        let gain = state.gain();
        let net_gain = if net_first { gain } else { -gain };
        wins += match net_gain {
            g if g > 0.0 => 1.0,
            g if g < 0.0 => 0.0,
            _ => 0.5,
        };
    }
    Ok(wins / games as f64)
}

/// Quick sanity accessor used by tests: a game state for this config.
pub fn initial_state(cfg: &LearnConfig) -> GameState {
    cfg.game.initial_state()
}
