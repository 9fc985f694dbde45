//! Single matches: alternating engine moves from the initial position,
//! per-move timing, forfeit on illegal moves, and replay validation.

use crate::agent::Agent;
use crate::HarnessError;
use mxz_games::{Action, GameConfig, Player};
use serde::{Deserialize, Serialize};
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MatchResult {
    FirstWins,
    SecondWins,
    Draw,
}

impl MatchResult {
    pub fn from_gain(gain: f64) -> MatchResult {
        if gain > 0.0 {
            MatchResult::FirstWins
        } else if gain < 0.0 {
            MatchResult::SecondWins
        } else {
            MatchResult::Draw
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatchRecord {
    pub game: String,
    pub first: String,
    pub second: String,
    pub seed: u64,
    pub result: MatchResult,
    pub moves: Vec<Action>,
    pub move_millis: Vec<f64>,
    /// Set when an engine played an illegal move and forfeited; carries the
    /// diagnostic naming the violated rule.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub forfeit: Option<String>,
}

impl MatchRecord {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }

    /// Re-simulate the move list and check the stored result. Forfeited
    /// matches validate the legal prefix only.
    pub fn validate(&self, config: &GameConfig) -> Result<(), String> {
        let mut state = config.initial_state();
        for (i, &action) in self.moves.iter().enumerate() {
            if state.is_terminal() {
                return Err(format!("match over before move {i}"));
            }
            state = state.apply(action).map_err(|e| format!("move {i} ({action}): {e}"))?;
        }
        if self.forfeit.is_some() {
            return Ok(());
        }
        if !state.is_terminal() {
            return Err("move list ends before the game does".into());
        }
        let expected = MatchResult::from_gain(state.gain());
        if expected != self.result {
            return Err(format!("stored {:?} but replay gives {expected:?}", self.result));
        }
        Ok(())
    }
}

/// Play one match. Deterministic under iteration budgets and a fixed seed.
pub fn play_match(
    first: &mut dyn Agent,
    second: &mut dyn Agent,
    game: &GameConfig,
    seed: u64,
) -> Result<MatchRecord, HarnessError> {
    first.reset(mxz_learn::mix_seed(seed, 1));
    second.reset(mxz_learn::mix_seed(seed, 2));
    let mut state = game.initial_state();
    let mut moves = Vec::new();
    let mut move_millis = Vec::new();
    let mut forfeit = None;
    let result = loop {
        if state.is_terminal() {
            break MatchResult::from_gain(state.gain());
        }
        let mover = state.to_move();
        let agent: &mut dyn Agent =
            if mover == Player::First { &mut *first } else { &mut *second };
        let t0 = Instant::now();
        let (action, _) = agent.choose(&state)?;
        move_millis.push(t0.elapsed().as_secs_f64() * 1e3);
        match state.apply(action) {
            Ok(next) => {
                moves.push(action);
                state = next;
            }
            Err(violation) => {
                // Forfeit: surface the engine bug loudly in the record.
                forfeit = Some(format!("{} played illegal {action}: {violation}", agent.name()));
                break match mover {
                    Player::First => MatchResult::SecondWins,
                    Player::Second => MatchResult::FirstWins,
                };
            }
        }
    };
    Ok(MatchRecord {
        game: game.to_string(),
        first: first.name().to_string(),
        second: second.name().to_string(),
        seed,
        result,
        moves,
        move_millis,
        forfeit,
    })
}
