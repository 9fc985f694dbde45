//! Tournament and experiment harness: agents selectable by name string,
//! paired-color match series with replay validation, win/draw tables with
//! Wilson intervals, parameter sweeps and learning curves.

pub mod agent;
pub mod curve;
pub mod matches;
pub mod stats;
pub mod sweep;
pub mod tournament;

pub use agent::{Agent, AgentSpec};
pub use curve::{learning_curve, CurvePoint, ProbeSpec};
pub use matches::{play_match, MatchRecord, MatchResult};
pub use stats::wilson;
pub use sweep::{sweep, SweepParameter};
pub use tournament::{run_tournament, PairOutcome, TournamentSpec};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("agent spec `{spec}`: {why}")]
    AgentSpec { spec: String, why: String },
    #[error(transparent)]
    Search(#[from] mxz_search::SearchError),
    #[error(transparent)]
    Net(#[from] mxz_eval::NetError),
    #[error("i/o: {0}")]
    Io(String),
    #[error("{0}")]
    Invalid(String),
}
