//! The transposition table: canonical state -> node record, shared across
//! every path that reaches the same state. The map is keyed by the full
//! `GameState` so hash collisions are rejected by equality, and states
//! reached by transposed move orders share one entry (move counts match, so
//! depth-dependent terminal values stay coherent).

use crate::evaluator::LeafEval;
use mxz_games::{Action, GameState, Player};
use rustc_hash::FxHashMap;

/// Per-state record. Minimax searches use `values`/`selections`; MCTS
/// additionally tracks visit counts, value sums, priors and pending virtual
/// losses, all indexed by the stable action order.
#[derive(Debug, Clone)]
pub struct NodeEntry {
    pub actions: Vec<Action>,
    /// v(s,a), first-player perspective.
    pub values: Vec<f64>,
    /// n(s,a): how often action a was selected while s was interior.
    pub selections: Vec<u32>,
    pub expanded: bool,
    /// N(s): backed-up visits through this node (MCTS).
    pub visit_total: u64,
    /// Per-action backed-up visit counts (MCTS).
    pub visits: Vec<u32>,
    /// Per-action sums of backed-up values (MCTS; Q = sum / visits).
    pub value_sums: Vec<f64>,
    /// P(s,a) from the policy head (PUCT only).
    pub priors: Option<Vec<f64>>,
    /// Pending virtual-loss visits per action (batched MCTS).
    pub pending: Vec<u32>,
    pub pending_total: u64,
    /// The evaluator's value for this state at expansion (MCTS leaf eval).
    pub leaf_value: f64,
}

impl NodeEntry {
    pub fn from_expansion(actions: Vec<Action>, values: Vec<f64>) -> NodeEntry {
        let k = actions.len();
        NodeEntry {
            actions,
            values,
            selections: vec![0; k],
            expanded: true,
            visit_total: 0,
            visits: vec![0; k],
            value_sums: vec![0.0; k],
            priors: None,
            pending: vec![0; k],
            pending_total: 0,
            leaf_value: 0.0,
        }
    }

    pub fn from_mcts_expansion(actions: Vec<Action>, leaf: &LeafEval) -> NodeEntry {
        let mut e = NodeEntry::from_expansion(actions, Vec::new());
        e.values = vec![0.0; e.actions.len()];
        e.priors = leaf.priors.clone();
        e.leaf_value = leaf.value;
        e
    }

    pub fn action_count(&self) -> usize {
        self.actions.len()
    }

    /// Index of the best action for `mover`: argmax of v(s,a) for the first
    /// player, argmin for the second, ties to the lowest index.
    pub fn best_index(&self, mover: Player) -> usize {
        let sign = mover.sign();
        let mut best = 0usize;
        for i in 1..self.values.len() {
            if sign * self.values[i] > sign * self.values[best] {
                best = i;
            }
        }
        best
    }

    /// Index of the safest action for `mover`: most selected, ties broken by
    /// value (from the mover's perspective) then lowest index.
    pub fn safest_index(&self, mover: Player) -> usize {
        let sign = mover.sign();
        let mut best = 0usize;
        for i in 1..self.selections.len() {
            let better = self.selections[i] > self.selections[best]
                || (self.selections[i] == self.selections[best]
                    && sign * self.values[i] > sign * self.values[best]);
            if better {
                best = i;
            }
        }
        best
    }

    /// Mean Q of this node (MCTS), falling back to the leaf evaluation when
    /// no child has been backed up yet.
    pub fn node_estimate(&self) -> f64 {
        let n: u64 = self.visits.iter().map(|&v| v as u64).sum();
        if n == 0 {
            self.leaf_value
        } else {
            self.value_sums.iter().sum::<f64>() / n as f64
        }
    }
}

#[derive(Debug, Default)]
pub struct TranspositionTable {
    map: FxHashMap<GameState, NodeEntry>,
}

impl TranspositionTable {
    pub fn new() -> TranspositionTable {
        TranspositionTable { map: FxHashMap::default() }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn clear(&mut self) {
        self.map.clear();
    }

    pub fn contains(&self, state: &GameState) -> bool {
        self.map.contains_key(state)
    }

    pub fn get(&self, state: &GameState) -> Option<&NodeEntry> {
        self.map.get(state)
    }

    pub fn get_mut(&mut self, state: &GameState) -> Option<&mut NodeEntry> {
        self.map.get_mut(state)
    }

    pub fn insert(&mut self, state: GameState, entry: NodeEntry) {
        self.map.insert(state, entry);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GameState, &NodeEntry)> {
        self.map.iter()
    }
}
