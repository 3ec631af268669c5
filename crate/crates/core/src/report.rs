use serde::{Deserialize, Serialize};

/// One side-by-side evaluation of an inequality.
///
/// `slack` is the signed margin in the direction of the inequality
/// (`rhs − lhs` for `≤`, `lhs − rhs` for `≥`), so a violation shows up as a
/// negative slack. `holds` allows a violation of at most
/// `tolerance · max(1, |rhs|)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub tolerance: f64,
    pub holds: bool,
}

impl InequalityReport {
    /// `lhs ≤ rhs`
    pub fn le(lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Self::build(lhs, rhs, margin(rhs, lhs), tolerance)
    }

    /// `lhs ≥ rhs`
    pub fn ge(lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Self::build(lhs, rhs, margin(lhs, rhs), tolerance)
    }

    /// `|lhs − rhs| ≤ tolerance · max(1, |rhs|)`, with slack `−|lhs − rhs|`.
    pub fn eq(lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let gap = if lhs == rhs { 0.0 } else { (lhs - rhs).abs() };
        let bound = tolerance * scale(rhs);
        Self {
            lhs,
            rhs,
            slack: -gap,
            tolerance,
            holds: gap <= bound,
        }
    }

    fn build(lhs: f64, rhs: f64, slack: f64, tolerance: f64) -> Self {
        let holds = !slack.is_nan() && slack >= -tolerance * scale(rhs);
        Self {
            lhs,
            rhs,
            slack,
            tolerance,
            holds,
        }
    }
}

fn scale(x: f64) -> f64 {
    if x.is_finite() {
        x.abs().max(1.0)
    } else {
        1.0
    }
}

/// `big − small` with `∞ − ∞ = 0`.
fn margin(big: f64, small: f64) -> f64 {
    if big == small {
        0.0
    } else {
        big - small
    }
}
