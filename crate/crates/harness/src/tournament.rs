//! Paired-color tournaments: every ordered agent pair plays an equal number
//! of matches with each color assignment, matches run across a worker pool
//! with per-match seeds, and results aggregate into win/draw tables with
//! Wilson intervals.

use crate::agent::AgentSpec;
use crate::matches::{play_match, MatchRecord, MatchResult};
use crate::stats::wilson;
use crate::HarnessError;
use mxz_games::GameConfig;
use mxz_search::SearchBudget;
use rayon::prelude::*;

#[derive(Debug, Clone)]
pub struct TournamentSpec {
    pub game: GameConfig,
    pub agents: Vec<AgentSpec>,
    /// Matches per color assignment for each unordered pair.
    pub matches_per_color: usize,
    pub budget: SearchBudget,
    pub seed: u64,
}

/// Aggregated outcome of one unordered pair (a, b), counted from `a`'s
/// perspective over both color assignments.
#[derive(Debug, Clone)]
pub struct PairOutcome {
    pub a: String,
    pub b: String,
    pub a_wins: usize,
    pub b_wins: usize,
    pub draws: usize,
    /// a's wins split by the color a played.
    pub a_wins_as_first: usize,
    pub a_wins_as_second: usize,
    pub records: Vec<MatchRecord>,
}

impl PairOutcome {
    pub fn games(&self) -> usize {
        self.a_wins + self.b_wins + self.draws
    }

    pub fn a_win_rate(&self) -> f64 {
        self.a_wins as f64 / self.games() as f64
    }

    pub fn draw_rate(&self) -> f64 {
        self.draws as f64 / self.games() as f64
    }

    pub fn a_wilson(&self, z: f64) -> (f64, f64) {
        wilson(self.a_wins as f64, self.games() as f64, z)
    }
}

/// Run the full pairing. Matches are independent (own agents, own tree
/// state, per-match seeds) and run in parallel; aggregation is
/// order-independent.
pub fn run_tournament(spec: &TournamentSpec) -> Result<Vec<PairOutcome>, HarnessError> {
    if spec.agents.len() < 2 {
        return Err(HarnessError::Invalid("a tournament needs at least two agents".into()));
    }
    if spec.matches_per_color == 0 {
        return Err(HarnessError::Invalid("matches per color must be >= 1".into()));
    }
    // Resolve every agent up front so a bad spec aborts before any match.
    for agent in &spec.agents {
        agent.build(&spec.game, spec.budget)?;
    }
    let mut outcomes = Vec::new();
    for i in 0..spec.agents.len() {
        for j in (i + 1)..spec.agents.len() {
            outcomes.push(run_pair(spec, i, j)?);
        }
    }
    Ok(outcomes)
}

fn run_pair(spec: &TournamentSpec, i: usize, j: usize) -> Result<PairOutcome, HarnessError> {
    let a = &spec.agents[i];
    let b = &spec.agents[j];
    // One entry per match: (a plays first?, match index).
    let plan: Vec<(bool, usize)> = (0..spec.matches_per_color)
        .flat_map(|k| [(true, k), (false, k)])
        .collect();
    let records: Result<Vec<MatchRecord>, HarnessError> = plan
        .par_iter()
        .map(|&(a_first, k)| {
            let tag = ((i as u64) << 40) ^ ((j as u64) << 24) ^ ((a_first as u64) << 16) ^ k as u64;
            let seed = mxz_learn::mix_seed(spec.seed, tag);
            let (first_spec, second_spec) = if a_first { (a, b) } else { (b, a) };
            let mut first = first_spec.build(&spec.game, spec.budget)?;
            let mut second = second_spec.build(&spec.game, spec.budget)?;
            play_match(first.as_mut(), second.as_mut(), &spec.game, seed)
        })
        .collect();
    let records = records?;
    let mut outcome = PairOutcome {
        a: a.spec.clone(),
        b: b.spec.clone(),
        a_wins: 0,
        b_wins: 0,
        draws: 0,
        a_wins_as_first: 0,
        a_wins_as_second: 0,
        records: Vec::new(),
    };
    for ((a_first, _), record) in plan.iter().zip(records) {
        match (record.result, a_first) {
            (MatchResult::Draw, _) => outcome.draws += 1,
            (MatchResult::FirstWins, true) | (MatchResult::SecondWins, false) => {
                outcome.a_wins += 1;
                if *a_first {
                    outcome.a_wins_as_first += 1;
                } else {
                    outcome.a_wins_as_second += 1;
                }
            }
            _ => outcome.b_wins += 1,
        }
        outcome.records.push(record);
    }
    Ok(outcome)
}

/// CSV rows for the outcomes: one per pair, counts and percentages, with
/// the 95% Wilson interval on the first agent's win rate.
pub fn outcomes_csv(outcomes: &[PairOutcome]) -> String {
    let mut out = String::from(
        "a,b,games,a_wins,b_wins,draws,a_win_pct,draw_pct,a_wilson_low,a_wilson_high\n",
    );
    for o in outcomes {
        let (lo, hi) = o.a_wilson(1.96);
        out.push_str(&format!(
            "{},{},{},{},{},{},{:.2},{:.2},{:.4},{:.4}\n",
            o.a,
            o.b,
            o.games(),
            o.a_wins,
            o.b_wins,
            o.draws,
            100.0 * o.a_win_rate(),
            100.0 * o.draw_rate(),
            lo,
            hi
        ));
    }
    out
}

/// Aligned text table in the win/draw-row layout: one column per pair.
pub fn outcomes_table(outcomes: &[PairOutcome]) -> String {
    let headers: Vec<String> = outcomes.iter().map(|o| format!("{} vs {}", o.a, o.b)).collect();
    let width = headers.iter().map(|h| h.len()).max().unwrap_or(8).max(8);
    let mut out = String::new();
    out.push_str(&format!("{:<6}", "rate"));
    for h in &headers {
        out.push_str(&format!(" | {h:>width$}"));
    }
    out.push('\n');
    out.push_str(&"-".repeat(6 + headers.len() * (width + 3)));
    out.push('\n');
    out.push_str(&format!("{:<6}", "win"));
    for o in outcomes {
        out.push_str(&format!(" | {:>width$}", format!("{:.1}%", 100.0 * o.a_win_rate())));
    }
    out.push('\n');
    out.push_str(&format!("{:<6}", "draw"));
    for o in outcomes {
        out.push_str(&format!(" | {:>width$}", format!("{:.1}%", 100.0 * o.draw_rate())));
    }
    out.push('\n');
    out
}
