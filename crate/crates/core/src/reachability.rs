//! Attainable set of the second problem and constructive controllability
//! witnesses for the first.
//!
//! For P2 the attainable set from the identity is
//!
//! ```text
//! { 0 < |z| ≤ (t + sinh t)/2,  t = arcosh((x² − y²)/2 + 1),  x > 0 }  ∪  { x ≥ |y|, z = 0 }
//! ```
//!
//! (`ẋ = u1 ≥ 0` on every admissible P2 trajectory, so points with `x < 0`
//! are never attained even where the `arcosh` is defined.)
//!
//! For P1 every point is attainable. The planner here builds explicit
//! admissible schedules out of lightlike straight segments, vertical
//! timelike segments and clockwise lightlike circles; a clockwise circle of
//! radius `R` traversed at unit lateral speed changes `z` by `2πR − πR²`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::GroupPoint;
use crate::oracle::{ControlLaw, ControlSchedule};
use crate::tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Interior,
    Boundary,
    Outside,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub verdict: Verdict,
    /// `|z| − (t + sinh t)/2` off the plane `z = 0`, `x − |y|` on it; absent
    /// when the boundary time is undefined.
    pub witness: Option<f64>,
}

/// `arcosh((x² − y²)/2 + 1)` when `x² ≥ y²`.
pub fn boundary_time(x: f64, y: f64) -> Option<f64> {
    let d = 0.5 * (x - y) * (x + y);
    if d.is_nan() || d < 0.0 {
        return None;
    }
    // arcosh(1 + d) = ln(1 + d + √(d(d + 2))), accurate for small d.
    Some((d + (d * (d + 2.0)).sqrt()).ln_1p())
}

/// `(t + sinh t)/2`, the largest `|z|` attainable over `(x, y)` with boundary time `t`.
pub fn z_bound(t: f64) -> f64 {
    0.5 * (t + t.sinh())
}

pub fn membership_p2(q: &GroupPoint) -> Membership {
    let tol = tolerance::BOUNDARY;
    if q.z.abs() <= tol {
        let slack = q.x - q.y.abs();
        let verdict = if slack > tol {
            Verdict::Interior
        } else if slack >= -tol {
            Verdict::Boundary
        } else {
            Verdict::Outside
        };
        return Membership {
            verdict,
            witness: Some(slack),
        };
    }
    let Some(t) = boundary_time(q.x, q.y) else {
        return Membership {
            verdict: Verdict::Outside,
            witness: None,
        };
    };
    let witness = q.z.abs() - z_bound(t);
    let verdict = if q.x < 0.0 {
        Verdict::Outside
    } else if witness < -tol {
        Verdict::Interior
    } else if witness <= tol {
        Verdict::Boundary
    } else {
        Verdict::Outside
    };
    Membership {
        verdict,
        witness: Some(witness),
    }
}

/// Radius of the clockwise lightlike unit-speed circle whose `z`-change is
/// `dz < 0`: the larger root of `πR² − 2πR + dz = 0`.
pub fn descending_loop_radius(dz: f64) -> f64 {
    1.0 + (1.0 - dz / PI).sqrt()
}

/// One clockwise lightlike circle through the current point, returning to it
/// and changing `z` by `dz < 0`.
fn descending_loop(schedule: &mut ControlSchedule, dz: f64) {
    let r = descending_loop_radius(dz);
    schedule.push(
        2.0 * PI * r,
        ControlLaw::Circular {
            lateral: 1.0,
            phase: 0.0,
            rate: -1.0 / r,
            axial: 1.0,
        },
    );
}

/// Admissible P1 schedule from the identity to `target`.
///
/// A lightlike segment `u = (cos φ, sin φ, 1)` reaches `(x1, y1, ρ)` with
/// `ρ = |(x1, y1)|`; the remaining `Δz = z1 − ρ` is removed by a vertical
/// timelike segment (`Δz > 0`) or a single clockwise lightlike circle
/// (`Δz < 0`).
pub fn plan_reach_p1(target: &GroupPoint) -> Result<ControlSchedule> {
    if !target.is_finite() {
        return Err(Error::InvalidParameter("target must be finite".into()));
    }
    let mut schedule = ControlSchedule::default();
    let rho = target.x.hypot(target.y);
    if rho > 0.0 {
        schedule.push(rho, ControlLaw::constant(target.x / rho, target.y / rho, 1.0));
    }
    let dz = target.z - rho;
    if dz > 0.0 {
        schedule.push(dz, ControlLaw::constant(0.0, 0.0, 1.0));
    } else if dz < 0.0 {
        descending_loop(&mut schedule, dz);
    }
    Ok(schedule)
}

/// Closed P1 loop of positive length: a vertical timelike segment of height
/// `height` (length `height`) followed by a clockwise lightlike circle that
/// cancels the gained `z`.
pub fn timelike_loop_p1(height: f64) -> Result<ControlSchedule> {
    if !(height > 0.0 && height.is_finite()) {
        return Err(Error::InvalidParameter(format!("loop height must be positive, got {height}")));
    }
    let mut schedule = ControlSchedule::default();
    schedule.push(height, ControlLaw::constant(0.0, 0.0, 1.0));
    descending_loop(&mut schedule, -height);
    Ok(schedule)
}

/// Length of one [`timelike_loop_p1`] used by [`closed_timelike_loop_p1`].
pub const UNIT_LOOP_LENGTH: f64 = 1.0;

/// Closed loop at the identity with length at least `min_length`, built from
/// `⌊min_length / J_one⌋ + 1` copies of the unit loop (one spare copy keeps
/// the quadrature of `J` above the bound).
pub fn closed_timelike_loop_p1(min_length: f64) -> Result<ControlSchedule> {
    if !(min_length > 0.0 && min_length.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "minimum length must be positive, got {min_length}"
        )));
    }
    let copies = (min_length / UNIT_LOOP_LENGTH).floor() as usize + 1;
    Ok(timelike_loop_p1(UNIT_LOOP_LENGTH)?.repeated(copies))
}

/// A P1 trajectory from the identity to `target` of length at least
/// `min_length`: closed loops first, then [`plan_reach_p1`].
pub fn long_path_p1(target: &GroupPoint, min_length: f64) -> Result<ControlSchedule> {
    Ok(closed_timelike_loop_p1(min_length)?.then(&plan_reach_p1(target)?))
}
