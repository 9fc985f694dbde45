//! Learning curves: evaluate a checkpoint series against a fixed baseline
//! with paired colors, emit CSV plus a gnuplot script.

use crate::agent::AgentSpec;
use crate::stats::wilson;
use crate::tournament::{run_tournament, TournamentSpec};
use crate::HarnessError;
use mxz_games::GameConfig;
use mxz_search::SearchBudget;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone)]
pub struct ProbeSpec {
    pub game: GameConfig,
    pub baseline: AgentSpec,
    /// Matches per color per checkpoint.
    pub matches_per_color: usize,
    pub budget: SearchBudget,
    pub seed: u64,
    /// Engine to drive the checkpoint evaluator ("ubfms", "descent", ...).
    pub engine: String,
}

#[derive(Debug, Clone)]
pub struct CurvePoint {
    pub index: usize,
    pub games_trained: u64,
    pub wins: usize,
    pub draws: usize,
    pub games: usize,
    pub win_rate: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
}

/// Sorted checkpoint files (`ckpt_*.mxz`) in a training output directory.
pub fn checkpoint_series(dir: &Path) -> Vec<(u64, PathBuf)> {
    let mut found = Vec::new();
    if let Ok(entries) = std::fs::read_dir(dir) {
        for entry in entries.flatten() {
            let name = entry.file_name().to_string_lossy().into_owned();
            if let Some(games) = name
                .strip_prefix("ckpt_")
                .and_then(|s| s.strip_suffix(".mxz"))
                .and_then(|s| s.parse::<u64>().ok())
            {
                found.push((games, entry.path()));
            }
        }
    }
    found.sort();
    found
}

/// Evaluate each checkpoint against the baseline. Missing or unreadable
/// checkpoint files are skipped with a warning on stderr.
pub fn learning_curve(
    checkpoints: &[(u64, PathBuf)],
    probe: &ProbeSpec,
) -> Result<Vec<CurvePoint>, HarnessError> {
    if checkpoints.is_empty() {
        return Err(HarnessError::Invalid("learning curve needs at least one checkpoint".into()));
    }
    let mut points = Vec::new();
    for (index, (games_trained, path)) in checkpoints.iter().enumerate() {
        if !path.exists() {
            eprintln!("warning: skipping missing checkpoint {}", path.display());
            continue;
        }
        let spec_string = format!("{}?net={}", probe.engine, path.display());
        let agent = match AgentSpec::parse(&spec_string) {
            Ok(a) => a,
            Err(e) => {
                eprintln!("warning: skipping {}: {e}", path.display());
                continue;
            }
        };
        let spec = TournamentSpec {
            game: probe.game,
            agents: vec![agent, probe.baseline.clone()],
            matches_per_color: probe.matches_per_color,
            budget: probe.budget,
            seed: mxz_learn::mix_seed(probe.seed, *games_trained),
        };
        let outcome = &run_tournament(&spec)?[0];
        let (lo, hi) = wilson(outcome.a_wins as f64, outcome.games() as f64, 1.96);
        points.push(CurvePoint {
            index,
            games_trained: *games_trained,
            wins: outcome.a_wins,
            draws: outcome.draws,
            games: outcome.games(),
            win_rate: outcome.a_win_rate(),
            wilson_low: lo,
            wilson_high: hi,
        });
    }
    Ok(points)
}

pub fn curve_csv(points: &[CurvePoint]) -> String {
    let mut out =
        String::from("checkpoint,games_trained,probe_games,wins,draws,win_pct,wilson_low,wilson_high\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{},{},{},{:.2},{:.4},{:.4}\n",
            p.index,
            p.games_trained,
            p.games,
            p.wins,
            p.draws,
            100.0 * p.win_rate,
            p.wilson_low,
            p.wilson_high
        ));
    }
    out
}

/// A self-contained gnuplot script rendering the curve CSV next to it.
pub fn curve_plot_script(csv_name: &str, png_name: &str) -> String {
    format!(
        "set datafile separator ','\n\
         set terminal pngcairo size 900,540\n\
         set output '{png_name}'\n\
         set xlabel 'self-play games trained'\n\
         set ylabel 'win % vs baseline'\n\
         set yrange [0:100]\n\
         set key left bottom\n\
         plot '{csv_name}' skip 1 using 2:6 with linespoints title 'win %', \\\n\
              '' skip 1 using 2:($7*100):($8*100) with filledcurves fs transparent solid 0.15 title '95% Wilson'\n"
    )
}
