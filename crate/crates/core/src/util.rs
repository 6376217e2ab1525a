//! Small shared utilities: numeric tolerances and wall-clock budgets.

use std::time::{Duration, Instant};

/// Numeric tolerances used by floating-point verifiers and constructions.
///
/// All checks in this crate take tolerances explicitly rather than baking
/// in magic constants; these are the documented defaults.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Maximum allowed deviation of `‖value‖` from 1 on any edge.
    pub eps_unit: f64,
    /// Maximum allowed norm of a per-vertex balance residual.
    pub eps_kcl: f64,
    /// Maximum allowed deviation of a tangent angle from `2π/3`.
    pub eps_angle: f64,
    /// Distance below which two flow values (up to sign) are treated as
    /// the same direction when building a value index.
    pub clustering: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eps_unit: 1e-9,
            eps_kcl: 1e-9,
            eps_angle: 1e-8,
            clustering: 1e-7,
        }
    }
}

/// A wall-clock budget for potentially long-running searches.
///
/// Searches check the budget periodically and report exhaustion as a
/// distinct outcome, never as silent failure.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    deadline: Option<Instant>,
}

impl Budget {
    /// No limit: the search runs to completion.
    pub fn unlimited() -> Self {
        Budget { deadline: None }
    }

    /// Limit the search to `ms` milliseconds from now.
    pub fn from_millis(ms: u64) -> Self {
        Budget {
            deadline: Some(Instant::now() + Duration::from_millis(ms)),
        }
    }

    /// True once the deadline has passed.
    pub fn exhausted(&self) -> bool {
        match self.deadline {
            Some(d) => Instant::now() >= d,
            None => false,
        }
    }
}

/// Format a float with 17 significant digits, enough to round-trip `f64`.
pub fn format_f64(x: f64) -> String {
    format!("{:.16e}", x)
}
