use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{multiply, Control, Covector, GroupPoint, ProblemId};

/// One time-stamped state along an admissible trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub q: GroupPoint,
    /// Present for extremals, absent for plain control schedules.
    pub h: Option<Covector>,
    pub u: Control,
    /// Accumulated Lorentzian length `J(t)`.
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub problem: ProblemId,
    pub samples: Vec<Sample>,
}

impl Trajectory {
    pub fn new(problem: ProblemId, samples: Vec<Sample>) -> Self {
        Self { problem, samples }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn first(&self) -> &Sample {
        &self.samples[0]
    }

    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectory has at least one sample")
    }

    pub fn endpoint(&self) -> GroupPoint {
        self.last().q
    }

    pub fn total_length(&self) -> f64 {
        self.last().length
    }

    pub fn duration(&self) -> f64 {
        self.last().t - self.first().t
    }

    /// Time grid, states and lengths well formed: `t` strictly increasing from
    /// zero, `J(0) = 0`, `J` nondecreasing.
    pub fn check_well_formed(&self) -> Result<()> {
        let first = self
            .samples
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty trajectory".into()))?;
        if first.t != 0.0 || first.length != 0.0 {
            return Err(Error::InvalidParameter("trajectory must start at t = 0 with J = 0".into()));
        }
        for w in self.samples.windows(2) {
            if !(w[1].t > w[0].t) {
                return Err(Error::InvalidParameter(format!("time not increasing at t = {}", w[1].t)));
            }
            if w[1].length < w[0].length {
                return Err(Error::InvalidParameter(format!("length decreasing at t = {}", w[1].t)));
            }
        }
        Ok(())
    }

    /// Same time grid, states visited in reverse order.
    pub fn time_reversed(&self) -> Trajectory {
        let mut samples = self.samples.clone();
        let states: Vec<_> = self.samples.iter().rev().map(|s| (s.q, s.h, s.u)).collect();
        for (s, (q, h, u)) in samples.iter_mut().zip(states) {
            s.q = q;
            s.h = h;
            s.u = u;
        }
        Trajectory::new(self.problem, samples)
    }

    /// Left translation `q ↦ g·q` of every state. Frame components of
    /// covectors and controls are left-invariant and stay unchanged.
    pub fn left_translated(&self, g: &GroupPoint) -> Trajectory {
        let samples = self
            .samples
            .iter()
            .map(|s| Sample {
                q: multiply(g, &s.q),
                ..*s
            })
            .collect();
        Trajectory::new(self.problem, samples)
    }
}
