//! Parameter sweeps: for each value of one engine option, run the
//! paired-color series between the adjusted agent and a fixed reference.

use crate::agent::AgentSpec;
use crate::tournament::{run_tournament, PairOutcome, TournamentSpec};
use crate::HarnessError;
use mxz_games::GameConfig;
use mxz_search::SearchBudget;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    ExplorationC,
    BatchB,
    Budget,
}

impl SweepParameter {
    pub fn parse(s: &str) -> Result<SweepParameter, HarnessError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "c" => Ok(SweepParameter::ExplorationC),
            "b" | "batch" | "batch_b" => Ok(SweepParameter::BatchB),
            "budget" => Ok(SweepParameter::Budget),
            other => Err(HarnessError::Invalid(format!("unknown sweep parameter `{other}`"))),
        }
    }

    pub fn key(&self) -> &'static str {
        match self {
            SweepParameter::ExplorationC => "c",
            SweepParameter::BatchB => "b",
            SweepParameter::Budget => "budget",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub value: String,
    pub outcome: PairOutcome,
}

/// One tournament per value: `subject` with the parameter applied against
/// the fixed `reference`.
pub fn sweep(
    game: &GameConfig,
    subject: &AgentSpec,
    reference: &AgentSpec,
    parameter: SweepParameter,
    values: &[String],
    matches_per_color: usize,
    budget: SearchBudget,
    seed: u64,
) -> Result<Vec<SweepRow>, HarnessError> {
    if values.is_empty() {
        return Err(HarnessError::Invalid("sweep needs at least one value".into()));
    }
    let mut rows = Vec::with_capacity(values.len());
    for (k, value) in values.iter().enumerate() {
        let adjusted = subject.with_option(parameter.key(), value);
        let spec = TournamentSpec {
            game: *game,
            agents: vec![adjusted, reference.clone()],
            matches_per_color,
            budget,
            seed: mxz_learn::mix_seed(seed, k as u64),
        };
        let mut outcomes = run_tournament(&spec)?;
        rows.push(SweepRow { value: value.clone(), outcome: outcomes.remove(0) });
    }
    Ok(rows)
}

pub fn sweep_csv(parameter: SweepParameter, rows: &[SweepRow]) -> String {
    let mut out = format!(
        "{},games,wins,draws,win_pct,draw_pct,wilson_low,wilson_high,reference\n",
        parameter.key()
    );
    for row in rows {
        let o = &row.outcome;
        let (lo, hi) = o.a_wilson(1.96);
        out.push_str(&format!(
            "{},{},{},{},{:.2},{:.2},{:.4},{:.4},{}\n",
            row.value,
            o.games(),
            o.a_wins,
            o.draws,
            100.0 * o.a_win_rate(),
            100.0 * o.draw_rate(),
            lo,
            hi,
            o.b
        ));
    }
    out
}
