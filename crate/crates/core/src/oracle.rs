//! Fixed-step RK4 integration of the Pontryagin system and of control
//! schedules. This is the independent referee for the closed forms in
//! [`crate::extremals`]: it only uses the vector field, never the formulas.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extremals::{covector_flow, maximize_control, ControlDecision, ExtremalKind, ExtremalParams};
use crate::group::{classify_control, length_integrand, velocity, ConeClass, Control, Covector, GroupPoint, ProblemId};
use crate::trajectory::{Sample, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum IntegratorOrder {
    #[default]
    Rk4,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    /// Upper bound on the step; each segment is split into equal steps no
    /// longer than this.
    pub step: f64,
    pub order: IntegratorOrder,
    pub max_steps: usize,
    /// Keep every n-th step in the returned trajectory (segment ends are
    /// always kept).
    pub record_every: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            step: 1e-3,
            order: IntegratorOrder::Rk4,
            max_steps: 50_000_000,
            record_every: 1,
        }
    }
}

impl IntegratorConfig {
    pub fn with_step(step: f64) -> Self {
        Self {
            step,
            ..Self::default()
        }
    }

    pub fn recording_every(mut self, n: usize) -> Self {
        self.record_every = n;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::InvalidParameter(format!("step must be positive, got {}", self.step)));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidParameter("record_every must be at least 1".into()));
        }
        Ok(())
    }

    fn steps_for(&self, duration: f64) -> Result<usize> {
        let n = (duration / self.step).ceil();
        if n > self.max_steps as f64 {
            return Err(Error::InvalidParameter(format!(
                "duration {duration} needs {n} steps, more than max_steps = {}",
                self.max_steps
            )));
        }
        Ok((n as usize).max(1))
    }
}

/// One classical Runge–Kutta step for `ẏ = f(t, y)`.
pub fn rk4_step<const N: usize, E>(
    f: &impl Fn(f64, &[f64; N]) -> std::result::Result<[f64; N], E>,
    t: f64,
    y: &[f64; N],
    h: f64,
) -> std::result::Result<[f64; N], E> {
    let shifted = |k: &[f64; N], c: f64| {
        let mut out = *y;
        for i in 0..N {
            out[i] += c * k[i];
        }
        out
    };
    let k1 = f(t, y)?;
    let k2 = f(t + 0.5 * h, &shifted(&k1, 0.5 * h))?;
    let k3 = f(t + 0.5 * h, &shifted(&k2, 0.5 * h))?;
    let k4 = f(t + h, &shifted(&k3, h))?;
    let mut out = *y;
    for i in 0..N {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    Ok(out)
}

/// Integrates the extremal flow from the identity with initial covector `h0`,
/// with `J` carried as an extra state component.
pub fn integrate_pontryagin(
    problem: ProblemId,
    kind: ExtremalKind,
    h0: &Covector,
    duration: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    if !(duration >= 0.0 && duration.is_finite()) {
        return Err(Error::InvalidParameter(format!("duration must be nonnegative, got {duration}")));
    }
    let in_region = match (kind, maximize_control(problem, h0, kind)) {
        (ExtremalKind::Normal, ControlDecision::Maximizer { .. }) => true,
        (ExtremalKind::Abnormal, ControlDecision::RayOfMaximizers { .. }) => true,
        _ => false,
    };
    if !in_region {
        // Reuse the family validation for a precise message.
        ExtremalParams::from_covector(problem, kind, h0)?;
        return Err(Error::LeftAdmissibleRegion { t: 0.0 });
    }

    let flow = covector_flow(problem, kind);
    let rhs = |t: f64, y: &[f64; 7]| -> Result<[f64; 7]> {
        let q = GroupPoint::new(y[0], y[1], y[2]);
        let h = Covector::new(y[3], y[4], y[5]);
        let rate = flow.rate(&q, &h)?;
        let speed = length_integrand(problem, &rate.control).map_err(|_| Error::LeftAdmissibleRegion { t })?;
        Ok([
            rate.q_dot[0],
            rate.q_dot[1],
            rate.q_dot[2],
            rate.h_dot[0],
            rate.h_dot[1],
            rate.h_dot[2],
            speed,
        ])
    };
    let sample = |t: f64, y: &[f64; 7]| -> Result<Sample> {
        let h = Covector::new(y[3], y[4], y[5]);
        Ok(Sample {
            t,
            q: GroupPoint::new(y[0], y[1], y[2]),
            h: Some(h),
            u: flow.control(&h)?,
            length: y[6],
        })
    };

    let mut y = [0.0, 0.0, 0.0, h0.h1, h0.h2, h0.h3, 0.0];
    let mut samples = vec![sample(0.0, &y)?];
    if duration > 0.0 {
        let n = cfg.steps_for(duration)?;
        let dt = duration / n as f64;
        for k in 0..n {
            let t = k as f64 * dt;
            y = rk4_step(&rhs, t, &y, dt)?;
            if (k + 1) % cfg.record_every == 0 || k + 1 == n {
                let t_next = if k + 1 == n { duration } else { (k + 1) as f64 * dt };
                samples.push(sample(t_next, &y)?);
            }
        }
    }

    let end = samples.last().expect("nonempty").h.expect("covector recorded");
    let (axial, _, _) = end.cone_coordinates(problem);
    if !(axial < 0.0 && end.is_finite()) {
        return Err(Error::LeftAdmissibleRegion { t: duration });
    }
    Ok(Trajectory::new(problem, samples))
}

/// How the control varies within one schedule piece; `τ` is the time since
/// the start of the piece.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum ControlLaw {
    Constant { u: Control },
    /// Cone axis component `axial`; the transverse part has magnitude
    /// `lateral` and angle `phase + rate·τ`. For P1 this is
    /// `(lateral cos φ, lateral sin φ, axial)`, for P2
    /// `(axial, lateral cos φ, lateral sin φ)`.
    Circular {
        lateral: f64,
        phase: f64,
        rate: f64,
        axial: f64,
    },
    /// The control of an extremal started at the piece's initial point.
    Extremal { params: ExtremalParams },
}

impl ControlLaw {
    pub fn constant(u1: f64, u2: f64, u3: f64) -> Self {
        ControlLaw::Constant {
            u: Control::new(u1, u2, u3),
        }
    }

    pub fn control_at(&self, problem: ProblemId, tau: f64) -> Result<Control> {
        match *self {
            ControlLaw::Constant { u } => Ok(u),
            ControlLaw::Circular {
                lateral,
                phase,
                rate,
                axial,
            } => {
                let (s, c) = (phase + rate * tau).sin_cos();
                Ok(match problem {
                    ProblemId::P1 => Control::new(lateral * c, lateral * s, axial),
                    ProblemId::P2 => Control::new(axial, lateral * c, lateral * s),
                })
            }
            ControlLaw::Extremal { params } => Ok(params.eval(tau)?.u),
        }
    }

    fn check_admissible(&self, problem: ProblemId) -> std::result::Result<(), String> {
        match *self {
            ControlLaw::Constant { u } => {
                if classify_control(problem, &u).is_admissible() {
                    Ok(())
                } else {
                    Err(format!("constant control {u:?} outside the {problem} cone"))
                }
            }
            ControlLaw::Circular {
                lateral,
                phase,
                rate,
                axial,
            } => {
                if !(lateral.is_finite() && phase.is_finite() && rate.is_finite() && axial.is_finite()) {
                    return Err("circular law parameters must be finite".into());
                }
                // The class is invariant under the rotation, so one instant decides.
                let u = self.control_at(problem, 0.0).map_err(|e| e.to_string())?;
                if classify_control(problem, &u).is_admissible() {
                    Ok(())
                } else {
                    Err(format!("circular law needs axial >= |lateral|, got {axial} < {lateral}"))
                }
            }
            ControlLaw::Extremal { params } => {
                if params.problem() != problem {
                    return Err(format!("extremal of {} used in a {problem} schedule", params.problem()));
                }
                params.validate().map_err(|e| e.to_string())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlPiece {
    pub duration: f64,
    #[serde(flatten)]
    pub law: ControlLaw,
}

/// Piecewise control; pieces are applied one after another.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ControlSchedule {
    pub pieces: Vec<ControlPiece>,
}

impl ControlSchedule {
    pub fn new(pieces: Vec<ControlPiece>) -> Self {
        Self { pieces }
    }

    pub fn push(&mut self, duration: f64, law: ControlLaw) {
        self.pieces.push(ControlPiece { duration, law });
    }

    pub fn total_duration(&self) -> f64 {
        self.pieces.iter().map(|p| p.duration).sum()
    }

    pub fn then(mut self, other: &ControlSchedule) -> Self {
        self.pieces.extend_from_slice(&other.pieces);
        self
    }

    pub fn repeated(&self, times: usize) -> Self {
        let mut pieces = Vec::with_capacity(self.pieces.len() * times);
        for _ in 0..times {
            pieces.extend_from_slice(&self.pieces);
        }
        Self { pieces }
    }

    /// Rejects the schedule unless every piece is admissible for `problem`.
    pub fn validate(&self, problem: ProblemId) -> Result<()> {
        for (index, piece) in self.pieces.iter().enumerate() {
            if !(piece.duration > 0.0 && piece.duration.is_finite()) {
                return Err(Error::InadmissiblePiece {
                    index,
                    reason: format!("duration must be positive and finite, got {}", piece.duration),
                });
            }
            piece
                .law
                .check_admissible(problem)
                .map_err(|reason| Error::InadmissiblePiece { index, reason })?;
        }
        Ok(())
    }
}

/// Integrates `q̇ = Σ uᵢ Xᵢ(q)` along the schedule from `q0`.
pub fn integrate_schedule(
    problem: ProblemId,
    q0: &GroupPoint,
    sched: &ControlSchedule,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    sched.validate(problem)?;
    if !q0.is_finite() {
        return Err(Error::InvalidParameter("initial point must be finite".into()));
    }
    let first_u = match sched.pieces.first() {
        Some(p) => p.law.control_at(problem, 0.0)?,
        None => Control::default(),
    };
    let mut samples = vec![Sample {
        t: 0.0,
        q: *q0,
        h: None,
        u: first_u,
        length: 0.0,
    }];
    let mut y = [q0.x, q0.y, q0.z, 0.0];
    let mut t0 = 0.0;
    let mut global_step = 0usize;
    for piece in &sched.pieces {
        let law = piece.law;
        let rhs = |tau: f64, y: &[f64; 4]| -> Result<[f64; 4]> {
            let u = law.control_at(problem, tau)?;
            let v = velocity(&GroupPoint::new(y[0], y[1], y[2]), &u);
            let speed = match classify_control(problem, &u) {
                ConeClass::Inadmissible => return Err(Error::LeftAdmissibleRegion { t: t0 + tau }),
                _ => length_integrand(problem, &u)?,
            };
            Ok([v[0], v[1], v[2], speed])
        };
        let n = cfg.steps_for(piece.duration)?;
        let dt = piece.duration / n as f64;
        for k in 0..n {
            y = rk4_step(&rhs, k as f64 * dt, &y, dt)?;
            global_step += 1;
            let last = k + 1 == n;
            if last || global_step % cfg.record_every == 0 {
                let tau = if last { piece.duration } else { (k + 1) as f64 * dt };
                samples.push(Sample {
                    t: t0 + tau,
                    q: GroupPoint::new(y[0], y[1], y[2]),
                    h: None,
                    u: law.control_at(problem, tau)?,
                    length: y[3],
                });
            }
        }
        t0 += piece.duration;
    }
    Ok(Trajectory::new(problem, samples))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Deviation {
    /// Max Euclidean coordinate distance between states.
    pub state: f64,
    /// Max Euclidean distance between covectors, when both carry them.
    pub covector: Option<f64>,
}

/// Sample-by-sample comparison of two trajectories on the same time grid.
pub fn max_deviation(a: &Trajectory, b: &Trajectory) -> Result<Deviation> {
    if a.problem != b.problem {
        return Err(Error::GridMismatch(format!("problems differ: {} vs {}", a.problem, b.problem)));
    }
    if a.len() != b.len() {
        return Err(Error::GridMismatch(format!("sample counts differ: {} vs {}", a.len(), b.len())));
    }
    let mut state: f64 = 0.0;
    let mut covector: Option<f64> = Some(0.0);
    for (sa, sb) in a.samples.iter().zip(&b.samples) {
        if (sa.t - sb.t).abs() > 1e-12 * sa.t.abs().max(1.0) {
            return Err(Error::GridMismatch(format!("times differ: {} vs {}", sa.t, sb.t)));
        }
        state = state.max(sa.q.coordinate_distance(&sb.q));
        covector = match (covector, sa.h, sb.h) {
            (Some(m), Some(ha), Some(hb)) => {
                let d = ((ha.h1 - hb.h1).powi(2) + (ha.h2 - hb.h2).powi(2) + (ha.h3 - hb.h3).powi(2)).sqrt();
                Some(m.max(d))
            }
            _ => None,
        };
    }
    Ok(Deviation { state, covector })
}
