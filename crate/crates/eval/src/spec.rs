//! Network shape descriptions.

use crate::NetError;
use mxz_games::{Encoding, GameConfig, GameId, TerminalHeuristic};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Architecture {
    C,
    R1,
    R2,
}

impl Architecture {
    pub fn parse(s: &str) -> Result<Architecture, NetError> {
        match s.trim().to_ascii_uppercase().as_str() {
            "C" => Ok(Architecture::C),
            "R1" => Ok(Architecture::R1),
            "R2" => Ok(Architecture::R2),
            other => Err(NetError::Config(format!("unknown architecture `{other}`"))),
        }
    }

    pub fn residual_blocks(&self) -> usize {
        match self {
            Architecture::C => 0,
            Architecture::R1 => 2,
            Architecture::R2 => 8,
        }
    }

    /// Hidden dense layers before the output neuron.
    pub fn hidden_dense(&self) -> usize {
        match self {
            Architecture::C | Architecture::R1 => 1,
            Architecture::R2 => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkSpec {
    pub architecture: Architecture,
    /// Filter count F (3×3 kernels throughout).
    pub filters: usize,
    /// Dense-layer width D.
    pub dense: usize,
    /// Input shape (planes, rows, cols).
    pub input: (usize, usize, usize),
    /// Output bound L: outputs live in [-L, L] via L·tanh.
    pub bound: f64,
}

impl NetworkSpec {
    pub fn new(
        architecture: Architecture,
        filters: usize,
        dense: usize,
        input: (usize, usize, usize),
        bound: f64,
    ) -> Result<NetworkSpec, NetError> {
        if filters == 0 || dense == 0 {
            return Err(NetError::Config("F and D must be >= 1".into()));
        }
        if input.0 == 0 || input.1 == 0 || input.2 == 0 {
            return Err(NetError::Config(format!("degenerate input shape {input:?}")));
        }
        if !(bound.is_finite() && bound > 0.0) {
            return Err(NetError::Config("bound L must be finite and positive".into()));
        }
        if architecture == Architecture::C && input.1.min(input.2) < 3 {
            return Err(NetError::Config(
                "C-network needs a board of at least 3x3 for its valid convolutions".into(),
            ));
        }
        Ok(NetworkSpec { architecture, filters, dense, input, bound })
    }

    /// Spec for a game at a given encoding and heuristic: input shape and
    /// bound derive from them. Desk-scale default widths: C-net F=24 D=64,
    /// R-nets F=16 D=32.
    pub fn for_game(
        architecture: Architecture,
        config: &GameConfig,
        encoding: Encoding,
        heuristic: TerminalHeuristic,
    ) -> Result<NetworkSpec, NetError> {
        let (planes, rows, cols) = encoding.shape(config);
        let bound = heuristic
            .bound(config)
            .map_err(|e| NetError::Config(e.to_string()))?;
        let (filters, dense) = match architecture {
            Architecture::C => (24, 64),
            _ => (16, 32),
        };
        NetworkSpec::new(architecture, filters, dense, (planes, rows, cols), bound)
    }

    pub fn with_widths(mut self, filters: usize, dense: usize) -> NetworkSpec {
        self.filters = filters;
        self.dense = dense;
        self
    }

    /// Number of stacked valid convolutions in the C network: as many as the
    /// board admits (each shrinks both sides by 2), capped at 3.
    pub fn c_conv_layers(&self) -> usize {
        let min_dim = self.input.1.min(self.input.2);
        ((min_dim - 1) / 2).clamp(1, 3)
    }

    /// Per-cell policy channels for a game (1 for placements, 3 for the
    /// Breakthrough step directions), plus whether a pass logit exists.
    pub fn policy_layout(game: GameId) -> (usize, bool) {
        match game {
            GameId::Hex => (1, false),
            GameId::Othello => (1, true),
            GameId::Breakthrough => (3, false),
        }
    }
}
