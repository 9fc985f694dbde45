//! `mxz`: train value networks by self-play and reproduce the comparative
//! search experiments at desk scale.

use anyhow::{bail, Result};
use clap::{Parser, Subcommand};
use mxz_games::{GameConfig, TerminalHeuristic};
use mxz_harness::curve::{checkpoint_series, curve_csv, curve_plot_script, ProbeSpec};
use mxz_harness::sweep::{sweep_csv, SweepParameter};
use mxz_harness::tournament::{outcomes_csv, outcomes_table};
use mxz_harness::{learning_curve, play_match, run_tournament, sweep, AgentSpec, TournamentSpec};
use mxz_learn::{training_run, LearnConfig, RunBudget, RunOptions};
use mxz_search::SearchBudget;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "mxz", about = "game-tree search and zero-learning engine", version)]
struct Cli {
    /// Base seed for all randomized work.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for match parallelism (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    /// Search budget per move: iterations ("128") or wall time ("500ms").
    #[arg(long, global = true, default_value = "128")]
    budget: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a training loop from a key=value config file.
    Train {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Self-play games to run.
        #[arg(long, conflicts_with_all = ["evals", "wall"])]
        games: Option<u64>,
        /// Stop after this many network evaluations in search.
        #[arg(long)]
        evals: Option<u64>,
        /// Stop after this many wall-clock seconds.
        #[arg(long)]
        wall: Option<u64>,
        /// Checkpoint every N games (0: first and last only).
        #[arg(long, default_value_t = 200)]
        checkpoint_cadence: u64,
        /// Paired probe games vs the random mover per probe (0: off).
        #[arg(long, default_value_t = 0)]
        probe_games: usize,
        #[arg(long, default_value_t = 10)]
        probe_cadence: u64,
    },
    /// Pre-initialize a network on random terminal states and save it.
    Pretrain {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Random games to harvest (overrides the config).
        #[arg(long)]
        games: Option<usize>,
    },
    /// Play one match between two agents and print the record.
    Match {
        #[arg(long)]
        game: String,
        #[arg(long)]
        first: String,
        #[arg(long)]
        second: String,
        /// Append the JSON record to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Paired-color series between every pair of agents.
    Tournament {
        #[arg(long)]
        game: String,
        /// Comma-separated agent specs.
        #[arg(long, value_delimiter = ',')]
        agents: Vec<String>,
        /// Matches per color per pair.
        #[arg(long, default_value_t = 50)]
        matches: usize,
        /// Output directory for CSV and match records.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep one engine option against a fixed reference.
    Sweep {
        #[arg(long)]
        game: String,
        /// Subject agent (the option under sweep is overwritten per value).
        #[arg(long)]
        agent: String,
        #[arg(long)]
        reference: String,
        /// One of: c, b, budget.
        #[arg(long)]
        param: String,
        #[arg(long, value_delimiter = ',')]
        values: Vec<String>,
        #[arg(long, default_value_t = 50)]
        matches: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Win-rate curve of a checkpoint series against a baseline.
    Curve {
        /// Training output directory containing ckpt_*.mxz.
        #[arg(long)]
        checkpoints: PathBuf,
        #[arg(long, default_value = "random")]
        baseline: String,
        /// Engine driving the checkpoints.
        #[arg(long, default_value = "ubfms")]
        engine: String,
        #[arg(long)]
        game: String,
        #[arg(long, default_value_t = 50)]
        matches: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fast internal validation suite.
    Selfcheck,
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    if cli.workers > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(cli.workers).build_global().ok();
    }
    let budget: SearchBudget =
        cli.budget.parse().map_err(|e: String| anyhow::anyhow!("--budget: {e}"))?;
    match cli.command {
        Command::Train {
            config,
            out,
            games,
            evals,
            wall,
            checkpoint_cadence,
            probe_games,
            probe_cadence,
        } => {
            let mut cfg = LearnConfig::from_file(&config)?;
            if cli.seed != 0 {
                cfg.seed = cli.seed;
            }
            let run_budget = match (games, evals, wall) {
                (Some(g), _, _) => RunBudget::Games(g),
                (_, Some(e), _) => RunBudget::NetEvals(e),
                (_, _, Some(w)) => RunBudget::WallSeconds(w),
                _ => bail!("one of --games / --evals / --wall is required"),
            };
            let summary = training_run(
                &cfg,
                &RunOptions {
                    budget: run_budget,
                    checkpoint_cadence,
                    probe_games,
                    probe_cadence,
                    out_dir: out,
                },
            )?;
            println!(
                "trained {} games over {} phases ({} net evals); final checkpoint {}",
                summary.games,
                summary.phases,
                summary.net_evals,
                summary.final_checkpoint.display()
            );
        }
        Command::Pretrain { config, out, games } => {
            let mut cfg = LearnConfig::from_file(&config)?;
            if let Some(g) = games {
                cfg.pretrain_games = g;
            }
            if cli.seed != 0 {
                cfg.seed = cli.seed;
            }
            let mut net = mxz_learn::run::build_network(&cfg)?;
            let pre = mxz_eval::PretrainConfig {
                epochs: cfg.pretrain_epochs,
                batch_size: cfg.batch_size.min(256),
                train: cfg.train,
                encoding: cfg.encoding(),
                seed: mxz_learn::mix_seed(cfg.seed, 0x13E),
            };
            let stats = mxz_eval::pretrain_terminal(
                &mut net,
                &cfg.game,
                cfg.pretrain_games,
                cfg.heuristic,
                &pre,
            )?;
            mxz_eval::save_checkpoint(
                &net,
                &out,
                &mxz_eval::checkpoint::digest(&cfg.digest_text()),
            )?;
            println!(
                "pretrained on {} terminal samples from {} games (final loss {:.4}); saved {}",
                stats.samples,
                stats.games,
                stats.final_loss,
                out.display()
            );
        }
        Command::Match { game, first, second, out } => {
            let game = GameConfig::parse(&game)?;
            let mut a = AgentSpec::parse(&first)?.build(&game, budget)?;
            let mut b = AgentSpec::parse(&second)?.build(&game, budget)?;
            let record = play_match(a.as_mut(), b.as_mut(), &game, cli.seed)?;
            record.validate(&game).map_err(|e| anyhow::anyhow!("replay validation: {e}"))?;
            println!("{}", record.to_json_line());
            if let Some(path) = out {
                append_line(&path, &record.to_json_line())?;
            }
        }
        Command::Tournament { game, agents, matches, out } => {
            let game = GameConfig::parse(&game)?;
            let agents: Result<Vec<AgentSpec>, _> =
                agents.iter().map(|s| AgentSpec::parse(s)).collect();
            let spec = TournamentSpec {
                game,
                agents: agents?,
                matches_per_color: matches,
                budget,
                seed: cli.seed,
            };
            let outcomes = run_tournament(&spec)?;
            validate_outcomes(&game, &outcomes)?;
            print!("{}", outcomes_table(&outcomes));
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir)?;
                std::fs::write(dir.join("tournament.csv"), outcomes_csv(&outcomes))?;
                let mut lines = String::new();
                for o in &outcomes {
                    for r in &o.records {
                        lines.push_str(&r.to_json_line());
                        lines.push('\n');
                    }
                }
                std::fs::write(dir.join("matches.jsonl"), lines)?;
                println!("wrote {}", dir.join("tournament.csv").display());
            }
        }
        Command::Sweep { game, agent, reference, param, values, matches, out } => {
            let game = GameConfig::parse(&game)?;
            let parameter = SweepParameter::parse(&param)?;
            let rows = sweep(
                &game,
                &AgentSpec::parse(&agent)?,
                &AgentSpec::parse(&reference)?,
                parameter,
                &values,
                matches,
                budget,
                cli.seed,
            )?;
            let csv = sweep_csv(parameter, &rows);
            print!("{csv}");
            if let Some(path) = out {
                if let Some(dir) = path.parent() {
                    std::fs::create_dir_all(dir).ok();
                }
                std::fs::write(&path, csv)?;
                println!("wrote {}", path.display());
            }
        }
        Command::Curve { checkpoints, baseline, engine, game, matches, out } => {
            let game = GameConfig::parse(&game)?;
            let series = checkpoint_series(&checkpoints);
            let probe = ProbeSpec {
                game,
                baseline: AgentSpec::parse(&baseline)?,
                matches_per_color: matches,
                budget,
                seed: cli.seed,
                engine,
            };
            let points = learning_curve(&series, &probe)?;
            std::fs::create_dir_all(&out)?;
            let csv_path = out.join("curve.csv");
            std::fs::write(&csv_path, curve_csv(&points))?;
            std::fs::write(out.join("curve.gnuplot"), curve_plot_script("curve.csv", "curve.png"))?;
            for p in &points {
                println!(
                    "checkpoint {} ({} games): {:.1}% [{:.1}, {:.1}]",
                    p.index,
                    p.games_trained,
                    100.0 * p.win_rate,
                    100.0 * p.wilson_low,
                    100.0 * p.wilson_high
                );
            }
            println!("wrote {}", csv_path.display());
        }
        Command::Selfcheck => selfcheck(budget)?,
    }
    Ok(())
}

fn append_line(path: &PathBuf, line: &str) -> Result<()> {
    use std::io::Write;
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).ok();
    }
    let mut f = std::fs::OpenOptions::new().create(true).append(true).open(path)?;
    writeln!(f, "{line}")?;
    Ok(())
}

fn validate_outcomes(
    game: &GameConfig,
    outcomes: &[mxz_harness::PairOutcome],
) -> Result<()> {
    for o in outcomes {
        for r in &o.records {
            r.validate(game).map_err(|e| anyhow::anyhow!("replay validation: {e}"))?;
        }
    }
    Ok(())
}

/// Fast end-to-end validation: oracle exactness spot checks, pruning
/// soundness, checkpoint round-trip and replay validation.
fn selfcheck(budget: SearchBudget) -> Result<()> {
    use mxz_search::{
        id_alphabeta_decide, ubfm_decide, AlphaBetaOptions, HashNoiseEvaluator, MinimaxOptions,
        Oracle, PessimisticEvaluator, TranspositionTable,
    };
    let pass = |name: &str, ok: bool| -> Result<()> {
        println!("{}: {}", name, if ok { "PASS" } else { "FAIL" });
        if !ok {
            bail!("selfcheck failed at {name}");
        }
        Ok(())
    };

    // 1. UBFM picks gain-optimal moves on sampled hex-3 positions.
    let cfg = GameConfig::hex(3)?;
    let (interior, _) = mxz_search::oracle::reachable_states(&cfg.initial_state());
    let mut oracle = Oracle::new(TerminalHeuristic::ClassicGain);
    let eval = PessimisticEvaluator { bound: 0.5 };
    let mut ok = true;
    for state in interior.iter().step_by(97) {
        let mut table = TranspositionTable::new();
        let report = ubfm_decide(
            &mut table,
            state,
            SearchBudget::Iterations(100_000),
            &eval,
            TerminalHeuristic::ClassicGain,
            MinimaxOptions { safe: true, batched: true },
        )?;
        ok &= oracle.optimal_actions(state).contains(&report.action);
    }
    pass("oracle exactness (hex 3, sampled)", ok)?;

    // 2. Alpha-beta equals unpruned minimax values (depth 2, spot check).
    let ocfg = GameConfig::othello(6)?;
    let noise = HashNoiseEvaluator { bound: 36.0, seed: 12 };
    let state = ocfg.initial_state();
    let ab = id_alphabeta_decide(
        &state,
        SearchBudget::Iterations(2),
        &noise,
        TerminalHeuristic::Scoring,
        AlphaBetaOptions::default(),
    )?;
    let full = id_alphabeta_decide(
        &state,
        SearchBudget::Iterations(2),
        &noise,
        TerminalHeuristic::Scoring,
        AlphaBetaOptions { batched: true, ordering: false },
    )?;
    pass("alpha-beta soundness (othello 6, depth 2)", ab.value == full.value)?;

    // 3. Checkpoint round-trip.
    let spec = mxz_eval::NetworkSpec::new(
        mxz_eval::Architecture::C,
        8,
        16,
        (3, 5, 5),
        25.0,
    )?;
    let net = mxz_eval::ValueNetwork::new(spec, 7)?;
    let path = std::env::temp_dir().join(format!("mxz-selfcheck-{}.mxz", std::process::id()));
    mxz_eval::save_checkpoint(&net, &path, "selfcheck")?;
    let (loaded, _) = mxz_eval::load_checkpoint(&path)?;
    std::fs::remove_file(&path).ok();
    pass("checkpoint round-trip", loaded.flat_params() == net.flat_params())?;

    // 4. Match replay validation, random vs random.
    let hex5 = GameConfig::hex(5)?;
    let mut a = AgentSpec::parse("random")?.build(&hex5, budget)?;
    let mut b = AgentSpec::parse("random")?.build(&hex5, budget)?;
    let record = play_match(a.as_mut(), b.as_mut(), &hex5, 9)?;
    pass("match replay validation", record.validate(&hex5).is_ok())?;
    println!("selfcheck complete");
    Ok(())
}
