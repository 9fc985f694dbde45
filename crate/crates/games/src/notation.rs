//! Textual notation: moves as `c4` / `pass` / `b2a3`, boards as character
//! grids with `.` empty, `x` first player, `o` second player, one row per
//! line, top row first. Hex rows are indented by one extra space each to
//! suggest the rhombus; the parser ignores all whitespace inside a row.

use crate::hex::HexState;
use crate::othello::OthelloState;
use crate::breakthrough::BreakthroughState;
use crate::{Action, ConfigError, Coord, GameConfig, GameId, GameState, Player};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Place(c) => write!(f, "{c}"),
            Action::Pass => write!(f, "pass"),
            Action::Step { from, to } => write!(f, "{from}{to}"),
        }
    }
}

fn parse_coord(s: &str) -> Option<(Coord, &str)> {
    let mut chars = s.char_indices();
    let (_, col) = chars.next()?;
    if !col.is_ascii_lowercase() {
        return None;
    }
    let digits_end = s[1..]
        .char_indices()
        .take_while(|(_, ch)| ch.is_ascii_digit())
        .map(|(i, _)| i + 2)
        .last()?;
    let row: u16 = s[1..digits_end].parse().ok()?;
    if row == 0 || row > 256 {
        return None;
    }
    let coord = Coord::new((row - 1) as u8, col as u8 - b'a');
    Some((coord, &s[digits_end..]))
}

impl FromStr for Action {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Action, ConfigError> {
        let raw = s.trim().to_ascii_lowercase();
        if raw == "pass" {
            return Ok(Action::Pass);
        }
        let body = raw.replace('-', "");
        let (first, rest) = parse_coord(&body).ok_or_else(|| ConfigError::BadMove(s.to_string()))?;
        if rest.is_empty() {
            return Ok(Action::Place(first));
        }
        let (second, rest) = parse_coord(rest).ok_or_else(|| ConfigError::BadMove(s.to_string()))?;
        if !rest.is_empty() {
            return Err(ConfigError::BadMove(s.to_string()));
        }
        Ok(Action::Step { from: first, to: second })
    }
}

impl Serialize for Action {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Action {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Action, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

impl GameState {
    /// Render the board as a character grid.
    pub fn board_text(&self) -> String {
        let (rows, cols) = self.dims();
        let cells = self.cells();
        let hex = self.game_id() == GameId::Hex;
        let mut out = String::new();
        for r in 0..rows as usize {
            if hex {
                out.push_str(&" ".repeat(r));
            }
            for c in 0..cols as usize {
                out.push(match cells[r * cols as usize + c] {
                    1 => 'x',
                    2 => 'o',
                    _ => '.',
                });
                if c + 1 < cols as usize {
                    out.push(' ');
                }
            }
            out.push('\n');
        }
        out
    }

    /// Parse a board grid into a state. The move count is derived from the
    /// piece count where possible (Hex: stones; Othello: discs − 4 assuming
    /// no passes so far); Breakthrough and custom histories can use
    /// [`GameState::from_text_at`].
    pub fn from_text(config: &GameConfig, text: &str, to_move: Player) -> Result<GameState, ConfigError> {
        let cells = parse_cells(config, text)?;
        let stones = cells.iter().filter(|&&c| c != 0).count() as u16;
        let move_count = match config.id {
            GameId::Hex => stones,
            GameId::Othello => stones.saturating_sub(4),
            GameId::Breakthrough => 0,
        };
        GameState::from_text_at(config, text, to_move, move_count, 0)
    }

    pub fn from_text_at(
        config: &GameConfig,
        text: &str,
        to_move: Player,
        move_count: u16,
        pass_streak: u8,
    ) -> Result<GameState, ConfigError> {
        let cells = parse_cells(config, text)?;
        Ok(match config.id {
            GameId::Hex => {
                GameState::Hex(HexState::from_cells(config.rows, cells, to_move, move_count))
            }
            GameId::Othello => GameState::Othello(OthelloState::from_cells(
                config.rows,
                cells,
                to_move,
                move_count,
                pass_streak,
            )),
            GameId::Breakthrough => GameState::Breakthrough(BreakthroughState::from_cells(
                config.rows,
                config.cols,
                cells,
                to_move,
                move_count,
                config.breakthrough_cap,
            )),
        })
    }
}

fn parse_cells(config: &GameConfig, text: &str) -> Result<Vec<u8>, ConfigError> {
    let mut cells = Vec::with_capacity(config.cell_count());
    let rows: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    if rows.len() != config.rows as usize {
        return Err(ConfigError::BadBoard(format!(
            "expected {} rows, found {}",
            config.rows,
            rows.len()
        )));
    }
    for line in rows {
        let mut count = 0usize;
        for ch in line.chars() {
            let cell = match ch {
                '.' | '_' => 0,
                'x' | 'X' | 'b' | 'B' => 1,
                'o' | 'O' | 'w' | 'W' => 2,
                c if c.is_whitespace() => continue,
                c => return Err(ConfigError::BadBoard(format!("bad cell character `{c}`"))),
            };
            cells.push(cell);
            count += 1;
        }
        if count != config.cols as usize {
            return Err(ConfigError::BadBoard(format!(
                "expected {} columns, found {count}",
                config.cols
            )));
        }
    }
    Ok(cells)
}
