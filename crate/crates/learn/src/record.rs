//! Self-play game records, one JSON line per game.

use mxz_games::{Action, GameConfig, GameState};
use mxz_search::SearchReport;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GameRecord {
    pub framework: String,
    pub game: String,
    pub seed: u64,
    pub moves: Vec<Action>,
    pub reports: Vec<SearchReport>,
    /// Final result in {-1, 0, +1} from the first player's perspective.
    pub gain: f64,
    /// Terminal value under the training heuristic.
    pub heuristic_value: f64,
    pub length: u16,
}

impl GameRecord {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }

    /// Re-simulate the move list from the initial position; returns the
    /// terminal state if every move is legal and the game ends exactly at
    /// the last move.
    pub fn replay(&self, config: &GameConfig) -> Result<GameState, String> {
        let mut state = config.initial_state();
        for (i, &action) in self.moves.iter().enumerate() {
            if state.is_terminal() {
                return Err(format!("game over before move {i}"));
            }
            state = state.apply(action).map_err(|e| format!("move {i} ({action}): {e}"))?;
        }
        if !state.is_terminal() {
            return Err("move list ends before the game does".into());
        }
        if state.gain() != self.gain {
            return Err(format!("recorded gain {} but replay gives {}", self.gain, state.gain()));
        }
        Ok(state)
    }
}
