//! Breakthrough on an h×w board. The first player starts on the bottom rows
//! and advances towards row 0; the second player mirrors. A piece steps one
//! row forward: straight only onto an empty square, diagonally onto an empty
//! square or an enemy piece (capture). Reaching the opponent's home row or
//! removing every enemy piece wins. A player left with no legal move loses
//! (their pieces are fully blocked), which keeps "non-terminal implies at
//! least one action" true without a stalemate rule.
//!
//! Boards with at least four rows give each player two rows of pieces,
//! smaller boards one row.

use crate::{Action, Coord, Player, RuleViolation};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BreakthroughState {
    rows: u8,
    cols: u8,
    /// 0 empty, 1 first player, 2 second player; row-major.
    cells: Vec<u8>,
    to_move: Player,
    move_count: u16,
    winner: Option<Player>,
    /// Configured move cap (`L_max`); unreachable since every move advances
    /// one piece one row and total possible advancement is finite.
    cap: u16,
}

impl BreakthroughState {
    pub fn new(rows: u8, cols: u8, cap: u16) -> BreakthroughState {
        let (h, w) = (rows as usize, cols as usize);
        let mut cells = vec![0u8; h * w];
        let depth = if h >= 4 { 2 } else { 1 };
        for r in 0..depth {
            for c in 0..w {
                cells[r * w + c] = 2;
                cells[(h - 1 - r) * w + c] = 1;
            }
        }
        BreakthroughState {
            rows,
            cols,
            cells,
            to_move: Player::First,
            move_count: 0,
            winner: None,
            cap,
        }
    }

    pub(crate) fn from_cells(
        rows: u8,
        cols: u8,
        cells: Vec<u8>,
        to_move: Player,
        move_count: u16,
        cap: u16,
    ) -> BreakthroughState {
        let mut st = BreakthroughState { rows, cols, cells, to_move, move_count, winner: None, cap };
        st.winner = st.detect_winner();
        st
    }

    pub fn rows(&self) -> u8 {
        self.rows
    }

    pub fn cols(&self) -> u8 {
        self.cols
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    pub fn to_move(&self) -> Player {
        self.to_move
    }

    pub fn move_count(&self) -> u16 {
        self.move_count
    }

    pub fn cap(&self) -> u16 {
        self.cap
    }

    pub fn piece_count(&self, p: Player) -> usize {
        let mark = if p == Player::First { 1 } else { 2 };
        self.cells.iter().filter(|&&c| c == mark).count()
    }

    pub fn winner(&self) -> Option<Player> {
        self.winner
    }

    pub fn is_terminal(&self) -> bool {
        self.winner.is_some()
    }

    fn mark(p: Player) -> u8 {
        match p {
            Player::First => 1,
            Player::Second => 2,
        }
    }

    /// Forward row delta for a player: first advances towards row 0.
    fn dir(p: Player) -> isize {
        match p {
            Player::First => -1,
            Player::Second => 1,
        }
    }

    fn target_row(&self, p: Player) -> u8 {
        match p {
            Player::First => 0,
            Player::Second => self.rows - 1,
        }
    }

    fn detect_winner(&self) -> Option<Player> {
        for p in [Player::First, Player::Second] {
            let mark = Self::mark(p);
            let row = self.target_row(p) as usize;
            let w = self.cols as usize;
            if self.cells[row * w..(row + 1) * w].iter().any(|&c| c == mark) {
                return Some(p);
            }
        }
        if self.piece_count(Player::First) == 0 {
            return Some(Player::Second);
        }
        if self.piece_count(Player::Second) == 0 {
            return Some(Player::First);
        }
        if self.moves_for(self.to_move).is_empty() {
            return Some(self.to_move.opponent());
        }
        None
    }

    fn moves_for(&self, p: Player) -> Vec<Action> {
        let (h, w) = (self.rows as isize, self.cols as isize);
        let own = Self::mark(p);
        let dr = Self::dir(p);
        let mut out = Vec::new();
        for idx in 0..self.cells.len() {
            if self.cells[idx] != own {
                continue;
            }
            let (r, c) = ((idx as isize) / w, (idx as isize) % w);
            let nr = r + dr;
            if nr < 0 || nr >= h {
                continue; // already on the target row: game would be over
            }
            for dc in [-1isize, 0, 1] {
                let nc = c + dc;
                if nc < 0 || nc >= w {
                    continue;
                }
                let dest = self.cells[(nr * w + nc) as usize];
                let ok = if dc == 0 { dest == 0 } else { dest != own };
                if ok {
                    out.push(Action::Step {
                        from: Coord::new(r as u8, c as u8),
                        to: Coord::new(nr as u8, nc as u8),
                    });
                }
            }
        }
        out
    }

    pub fn legal_actions(&self) -> Vec<Action> {
        assert!(!self.is_terminal(), "legal_actions queried on a terminal breakthrough state");
        self.moves_for(self.to_move)
    }

    pub fn apply(&self, action: Action) -> Result<BreakthroughState, RuleViolation> {
        if self.is_terminal() {
            return Err(RuleViolation::GameOver);
        }
        let (from, to) = match action {
            Action::Step { from, to } => (from, to),
            other => return Err(RuleViolation::WrongActionKind(other)),
        };
        for c in [from, to] {
            if c.row >= self.rows || c.col >= self.cols {
                return Err(RuleViolation::OutOfBounds(c));
            }
        }
        let w = self.cols as usize;
        let own = Self::mark(self.to_move);
        let fi = from.row as usize * w + from.col as usize;
        let ti = to.row as usize * w + to.col as usize;
        if self.cells[fi] != own {
            return Err(RuleViolation::NotYourPiece(from));
        }
        if to.row as isize - from.row as isize != Self::dir(self.to_move) {
            return Err(RuleViolation::BadStep { from, to, why: "must advance exactly one row" });
        }
        let dc = to.col as isize - from.col as isize;
        if dc.abs() > 1 {
            return Err(RuleViolation::BadStep { from, to, why: "must stay within one column" });
        }
        if dc == 0 && self.cells[ti] != 0 {
            return Err(RuleViolation::BadStep { from, to, why: "straight move needs an empty square" });
        }
        if dc != 0 && self.cells[ti] == own {
            return Err(RuleViolation::BadStep { from, to, why: "own piece on the destination" });
        }
        let mut next = self.clone();
        next.cells[fi] = 0;
        next.cells[ti] = own;
        next.to_move = self.to_move.opponent();
        next.move_count += 1;
        next.winner = next.detect_winner();
        debug_assert!(next.move_count <= next.cap, "breakthrough move cap exceeded");
        Ok(next)
    }

    pub fn gain(&self) -> f64 {
        match self.winner {
            Some(p) => p.sign(),
            None => panic!("gain queried on a non-terminal breakthrough state"),
        }
    }
}
