//! Hex on an n×n rhombus. The first player connects the top and bottom rows,
//! the second player the left and right columns. Cells are hexagonally
//! adjacent: (r-1,c), (r-1,c+1), (r,c-1), (r,c+1), (r+1,c-1), (r+1,c).
//!
//! Connection detection uses a union-find carried inside the state with four
//! virtual nodes (one per board edge); `apply` clones it, unions the new
//! stone with its same-colour neighbours and checks the two virtual edges.

use crate::{Action, Coord, Player, RuleViolation};
use std::hash::{Hash, Hasher};

/// Array union-find with path halving and union by rank.
#[derive(Debug, Clone)]
struct UnionFind {
    parent: Vec<u16>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n as u16).collect(), rank: vec![0; n] }
    }

    fn find(&mut self, mut x: u16) -> u16 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    fn union(&mut self, a: u16, b: u16) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        let (ra, rb) = (ra as usize, rb as usize);
        if self.rank[ra] < self.rank[rb] {
            self.parent[ra] = rb as u16;
        } else if self.rank[ra] > self.rank[rb] {
            self.parent[rb] = ra as u16;
        } else {
            self.parent[rb] = ra as u16;
            self.rank[ra] += 1;
        }
    }

    fn connected(&mut self, a: u16, b: u16) -> bool {
        self.find(a) == self.find(b)
    }
}

#[derive(Debug, Clone)]
pub struct HexState {
    size: u8,
    /// 0 empty, 1 first player, 2 second player; row-major.
    cells: Vec<u8>,
    to_move: Player,
    move_count: u16,
    winner: Option<Player>,
    links: UnionFind,
}

// The union-find and cached winner are derived data; identity is the board,
// the mover and the move count.
impl PartialEq for HexState {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size
            && self.cells == other.cells
            && self.to_move == other.to_move
            && self.move_count == other.move_count
    }
}
impl Eq for HexState {}

impl Hash for HexState {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.size.hash(state);
        self.cells.hash(state);
        self.to_move.hash(state);
        self.move_count.hash(state);
    }
}

impl HexState {
    pub fn new(size: u8) -> HexState {
        let cells = vec![0u8; size as usize * size as usize];
        HexState {
            size,
            cells,
            to_move: Player::First,
            move_count: 0,
            winner: None,
            links: UnionFind::new(size as usize * size as usize + 4),
        }
    }

    /// Rebuild a state from raw cells; used by notation parsing and symmetry
    /// transforms. The union-find and winner are recomputed from scratch.
    pub(crate) fn from_cells(size: u8, cells: Vec<u8>, to_move: Player, move_count: u16) -> HexState {
        let mut st = HexState {
            size,
            cells,
            to_move,
            move_count,
            winner: None,
            links: UnionFind::new(size as usize * size as usize + 4),
        };
        for idx in 0..st.cells.len() {
            if st.cells[idx] != 0 {
                st.link_stone(idx);
            }
        }
        for owner in [Player::First, Player::Second] {
            if st.edge_connected(owner) {
                st.winner = Some(owner);
                break;
            }
        }
        st
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

    pub fn winner(&self) -> Option<Player> {
        self.winner
    }

    pub fn is_terminal(&self) -> bool {
        self.winner.is_some()
    }

    fn index(&self, c: Coord) -> usize {
        c.row as usize * self.size as usize + c.col as usize
    }

    // Virtual union-find nodes for the four edges.
    fn top(&self) -> u16 {
        (self.size as u16) * (self.size as u16)
    }
    fn bottom(&self) -> u16 {
        self.top() + 1
    }
    fn left(&self) -> u16 {
        self.top() + 2
    }
    fn right(&self) -> u16 {
        self.top() + 3
    }

    fn neighbours(&self, idx: usize) -> impl Iterator<Item = usize> + '_ {
        let n = self.size as isize;
        let (r, c) = ((idx as isize) / n, (idx as isize) % n);
        const DELTAS: [(isize, isize); 6] = [(-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0)];
        DELTAS.iter().filter_map(move |&(dr, dc)| {
            let (nr, nc) = (r + dr, c + dc);
            if nr >= 0 && nr < n && nc >= 0 && nc < n {
                Some((nr * n + nc) as usize)
            } else {
                None
            }
        })
    }

    /// Union `idx` with its same-colour neighbours and its player's edges.
    fn link_stone(&mut self, idx: usize) {
        let colour = self.cells[idx];
        let n = self.size as usize;
        let (r, c) = (idx / n, idx % n);
        if colour == 1 {
            if r == 0 {
                let e = self.top();
                self.links.union(idx as u16, e);
            }
            if r == n - 1 {
                let e = self.bottom();
                self.links.union(idx as u16, e);
            }
        } else {
            if c == 0 {
                let e = self.left();
                self.links.union(idx as u16, e);
            }
            if c == n - 1 {
                let e = self.right();
                self.links.union(idx as u16, e);
            }
        }
        let neighbours: Vec<usize> = self.neighbours(idx).collect();
        for nb in neighbours {
            if self.cells[nb] == colour {
                self.links.union(idx as u16, nb as u16);
            }
        }
    }

    fn edge_connected(&mut self, owner: Player) -> bool {
        match owner {
            Player::First => {
                let (a, b) = (self.top(), self.bottom());
                self.links.connected(a, b)
            }
            Player::Second => {
                let (a, b) = (self.left(), self.right());
                self.links.connected(a, b)
            }
        }
    }

    pub fn legal_actions(&self) -> Vec<Action> {
        assert!(!self.is_terminal(), "legal_actions queried on a terminal hex state");
        let n = self.size as usize;
        let mut out = Vec::with_capacity(self.cells.len() - self.move_count as usize);
        for idx in 0..self.cells.len() {
            if self.cells[idx] == 0 {
                out.push(Action::Place(Coord::new((idx / n) as u8, (idx % n) as u8)));
            }
        }
        out
    }

    pub fn apply(&self, action: Action) -> Result<HexState, RuleViolation> {
        if self.is_terminal() {
            return Err(RuleViolation::GameOver);
        }
        let coord = match action {
            Action::Place(c) => c,
            other => return Err(RuleViolation::WrongActionKind(other)),
        };
        if coord.row >= self.size || coord.col >= self.size {
            return Err(RuleViolation::OutOfBounds(coord));
        }
        let idx = self.index(coord);
        if self.cells[idx] != 0 {
            return Err(RuleViolation::CellOccupied(coord));
        }
        let mut next = self.clone();
        next.cells[idx] = match self.to_move {
            Player::First => 1,
            Player::Second => 2,
        };
        next.link_stone(idx);
        if next.edge_connected(self.to_move) {
            next.winner = Some(self.to_move);
        }
        next.to_move = self.to_move.opponent();
        next.move_count += 1;
        Ok(next)
    }

    /// Terminal gain from the first player's perspective. Hex has no draws.
    pub fn gain(&self) -> f64 {
        match self.winner {
            Some(p) => p.sign(),
            None => panic!("gain queried on a non-terminal hex state"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::GameConfig;

    fn hex(n: u8) -> HexState {
        HexState::new(n)
    }

    #[test]
    fn empty_board_has_one_action_per_cell() {
        assert_eq!(hex(3).legal_actions().len(), 9);
        assert_eq!(hex(5).legal_actions().len(), 25);
    }

    #[test]
    fn apply_places_one_stone_of_the_mover() {
        let s = hex(5);
        let next = s.apply(Action::Place(Coord::new(2, 2))).unwrap();
        let count = |st: &HexState, mark: u8| st.cells().iter().filter(|&&c| c == mark).count();
        assert_eq!(count(&next, 1), 1);
        assert_eq!(count(&next, 2), 0);
        assert_eq!(next.to_move(), Player::Second);
        assert_eq!(next.move_count(), 1);
        // input unmodified
        assert_eq!(count(&s, 1), 0);
    }

    #[test]
    fn first_player_wins_with_top_bottom_chain() {
        // x down column b, o elsewhere; x completes the chain last.
        let mut s = hex(3);
        let moves = ["b1", "a2", "b2", "a3", "b3"];
        for m in moves {
            let a: Action = m.parse().unwrap();
            s = s.apply(a).unwrap();
        }
        assert!(s.is_terminal());
        assert_eq!(s.winner(), Some(Player::First));
        assert_eq!(s.gain(), 1.0);
    }

    #[test]
    fn second_player_wins_left_right() {
        let mut s = hex(3);
        let moves = ["a1", "a2", "b1", "b2", "a3", "c2"];
        for m in moves {
            let a: Action = m.parse().unwrap();
            s = s.apply(a).unwrap();
        }
        assert!(s.is_terminal());
        assert_eq!(s.winner(), Some(Player::Second));
        assert_eq!(s.gain(), -1.0);
    }

    #[test]
    fn occupied_cell_is_rejected() {
        let s = hex(3).apply(Action::Place(Coord::new(0, 0))).unwrap();
        let err = s.apply(Action::Place(Coord::new(0, 0))).unwrap_err();
        assert_eq!(err, RuleViolation::CellOccupied(Coord::new(0, 0)));
    }

    #[test]
    fn stone_count_invariant_along_a_game() {
        let mut s = hex(4);
        let mut k = 0u32;
        while !s.is_terminal() {
            let first = s.cells().iter().filter(|&&c| c == 1).count() as i32;
            let second = s.cells().iter().filter(|&&c| c == 2).count() as i32;
            assert!(first - second == 0 || first - second == 1);
            let a = s.legal_actions()[k as usize % s.legal_actions().len()];
            s = s.apply(a).unwrap();
            k = k.wrapping_mul(31).wrapping_add(7);
        }
    }

    #[test]
    fn hex11_depth_value_example() {
        // First player wins at move 21 on hex 11: column b filled by x (11
        // stones), o stones parked on columns d and f (10 stones).
        let cfg = GameConfig::hex(11).unwrap();
        let mut s = cfg.initial_state();
        for i in 0..11u8 {
            let x = Action::Place(Coord::new(i, 1));
            s = s.apply(x).unwrap();
            if s.is_terminal() {
                break;
            }
            let o = Action::Place(Coord::new(i, if i % 2 == 0 { 3 } else { 5 }));
            s = s.apply(o).unwrap();
        }
        assert!(s.is_terminal());
        assert_eq!(s.move_count(), 21);
        assert_eq!(s.terminal_value(crate::TerminalHeuristic::Depth), 101.0);
    }

    #[test]
    #[should_panic(expected = "terminal")]
    fn legal_actions_on_terminal_is_a_contract_violation() {
        let mut s = hex(2);
        for m in ["a1", "b1", "a2"] {
            let a: Action = m.parse().unwrap();
            s = s.apply(a).unwrap();
        }
        assert!(s.is_terminal());
        let _ = s.legal_actions();
    }
}
