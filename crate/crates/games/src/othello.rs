//! Othello on an even n×n board. The first player plays the dark discs and
//! moves first. Pass is an explicit action, legal exactly when no placement
//! flips, so every non-terminal state offers at least one action. Two
//! consecutive passes end the game, as does a full board.

use crate::{Action, Coord, Player, RuleViolation};

const DIRS: [(isize, isize); 8] =
    [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)];

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OthelloState {
    size: u8,
    /// 0 empty, 1 first player (dark), 2 second player (light); row-major.
    cells: Vec<u8>,
    to_move: Player,
    move_count: u16,
    pass_streak: u8,
}

impl OthelloState {
    pub fn new(size: u8) -> OthelloState {
        let n = size as usize;
        let mut cells = vec![0u8; n * n];
        let (hi, lo) = (n / 2, n / 2 - 1);
        cells[lo * n + lo] = 2;
        cells[hi * n + hi] = 2;
        cells[lo * n + hi] = 1;
        cells[hi * n + lo] = 1;
        OthelloState { size, cells, to_move: Player::First, move_count: 0, pass_streak: 0 }
    }

    pub(crate) fn from_cells(
        size: u8,
        cells: Vec<u8>,
        to_move: Player,
        move_count: u16,
        pass_streak: u8,
    ) -> OthelloState {
        OthelloState { size, cells, to_move, move_count, pass_streak }
    }

    pub fn size(&self) -> u8 {
        self.size
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

    pub fn pass_streak(&self) -> u8 {
        self.pass_streak
    }

    pub fn disc_count(&self, p: Player) -> usize {
        let mark = if p == Player::First { 1 } else { 2 };
        self.cells.iter().filter(|&&c| c == mark).count()
    }

    pub fn is_terminal(&self) -> bool {
        self.pass_streak >= 2 || self.cells.iter().all(|&c| c != 0)
    }

    fn mark(&self) -> u8 {
        match self.to_move {
            Player::First => 1,
            Player::Second => 2,
        }
    }

    /// Discs flipped by the side to move placing at `idx`, in scan order.
    fn flips_at(&self, idx: usize) -> Vec<usize> {
        let n = self.size as isize;
        let own = self.mark();
        let other = 3 - own;
        let (r0, c0) = ((idx as isize) / n, (idx as isize) % n);
        let mut flips = Vec::new();
        for (dr, dc) in DIRS {
            let (mut r, mut c) = (r0 + dr, c0 + dc);
            let mut line = Vec::new();
            while r >= 0 && r < n && c >= 0 && c < n {
                let cell = self.cells[(r * n + c) as usize];
                if cell == other {
                    line.push((r * n + c) as usize);
                } else if cell == own {
                    flips.extend_from_slice(&line);
                    break;
                } else {
                    break;
                }
                r += dr;
                c += dc;
            }
        }
        flips
    }

    fn has_placement(&self) -> bool {
        (0..self.cells.len()).any(|idx| self.cells[idx] == 0 && !self.flips_at(idx).is_empty())
    }

    pub fn legal_actions(&self) -> Vec<Action> {
        assert!(!self.is_terminal(), "legal_actions queried on a terminal othello state");
        let n = self.size as usize;
        let mut out = Vec::new();
        for idx in 0..self.cells.len() {
            if self.cells[idx] == 0 && !self.flips_at(idx).is_empty() {
                out.push(Action::Place(Coord::new((idx / n) as u8, (idx % n) as u8)));
            }
        }
        if out.is_empty() {
            out.push(Action::Pass);
        }
        out
    }

    pub fn apply(&self, action: Action) -> Result<OthelloState, RuleViolation> {
        if self.is_terminal() {
            return Err(RuleViolation::GameOver);
        }
        match action {
            Action::Place(coord) => {
                if coord.row >= self.size || coord.col >= self.size {
                    return Err(RuleViolation::OutOfBounds(coord));
                }
                let idx = coord.row as usize * self.size as usize + coord.col as usize;
                if self.cells[idx] != 0 {
                    return Err(RuleViolation::CellOccupied(coord));
                }
                let flips = self.flips_at(idx);
                if flips.is_empty() {
                    return Err(RuleViolation::NoFlip(coord));
                }
                let mut next = self.clone();
                let own = self.mark();
                next.cells[idx] = own;
                for f in flips {
                    next.cells[f] = own;
                }
                next.pass_streak = 0;
                next.to_move = self.to_move.opponent();
                next.move_count += 1;
                Ok(next)
            }
            Action::Pass => {
                if self.has_placement() {
                    return Err(RuleViolation::PassWithMoves);
                }
                let mut next = self.clone();
                next.pass_streak += 1;
                next.to_move = self.to_move.opponent();
                next.move_count += 1;
                Ok(next)
            }
            other => Err(RuleViolation::WrongActionKind(other)),
        }
    }

    /// Disc differential from the first player's perspective.
    pub fn differential(&self) -> i32 {
        self.disc_count(Player::First) as i32 - self.disc_count(Player::Second) as i32
    }

    pub fn gain(&self) -> f64 {
        assert!(self.is_terminal(), "gain queried on a non-terminal othello state");
        match self.differential() {
            d if d > 0 => 1.0,
            d if d < 0 => -1.0,
            _ => 0.0,
        }
    }
}
