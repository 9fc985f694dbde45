//! Search budgets: a fixed iteration count (deterministic, used by every
//! equivalence test and by desk-scale training) or wall-clock time per
//! action, matching the benchmark protocol. At least one iteration always
//! completes in either mode.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use std::time::Duration;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchBudget {
    Iterations(u64),
    TimeMillis(u64),
}

impl SearchBudget {
    pub fn iterations(n: u64) -> SearchBudget {
        assert!(n > 0, "budget must be positive");
        SearchBudget::Iterations(n)
    }

    pub fn millis(ms: u64) -> SearchBudget {
        assert!(ms > 0, "budget must be positive");
        SearchBudget::TimeMillis(ms)
    }

    pub fn as_duration(&self) -> Option<Duration> {
        match self {
            SearchBudget::TimeMillis(ms) => Some(Duration::from_millis(*ms)),
            SearchBudget::Iterations(_) => None,
        }
    }
}

impl fmt::Display for SearchBudget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchBudget::Iterations(n) => write!(f, "{n}"),
            SearchBudget::TimeMillis(ms) => write!(f, "{ms}ms"),
        }
    }
}

impl FromStr for SearchBudget {
    type Err = String;

    /// Plain integers are iteration counts; `500ms` or `2s` are wall time.
    fn from_str(s: &str) -> Result<SearchBudget, String> {
        let t = s.trim().to_ascii_lowercase();
        let parse = |digits: &str| digits.parse::<u64>().map_err(|e| e.to_string());
        let budget = if let Some(ms) = t.strip_suffix("ms") {
            SearchBudget::TimeMillis(parse(ms)?)
        } else if let Some(secs) = t.strip_suffix('s') {
            SearchBudget::TimeMillis(parse(secs)? * 1000)
        } else {
            SearchBudget::Iterations(parse(&t)?)
        };
        match budget {
            SearchBudget::Iterations(0) | SearchBudget::TimeMillis(0) => {
                Err("budget must be positive".to_string())
            }
            b => Ok(b),
        }
    }
}
