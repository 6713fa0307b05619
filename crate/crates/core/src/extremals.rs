//! Maximization of the Pontryagin function and closed-form extremals.
//!
//! Both problems share the vertical subsystem
//!
//! ```text
//! ḣ1 = −h3·u2,   ḣ2 = h3·u1,   ḣ3 = 0,   q̇ = Σ uᵢ Xᵢ(q)
//! ```
//!
//! obtained from the canonical system `ȧ = −c u2/2, ḃ = c u1/2, ċ = 0`.
//! The extremal control is selected pointwise from `h`:
//!
//! | problem | kind     | control                        | covector region            |
//! |---------|----------|--------------------------------|----------------------------|
//! | P1      | normal   | `(h1, h2, −h3)`                | `h3² − h1² − h2² = 1, h3<0` |
//! | P1      | abnormal | `(h1, h2, r)/r`, `r = |(h1,h2)|` | `h3 = −r`                |
//! | P2      | normal   | `(−h1, h2, h3)`                | `h1² − h2² − h3² = 1, h1<0` |
//! | P2      | abnormal | `(|(h2,h3)|, h2, h3)`          | `h1 = −|(h2,h3)|`          |

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{
    classify_control, length_integrand, pontryagin_value, transverse_norm, velocity, ConeClass, Control, Covector,
    GroupPoint, ProblemId, Tangent,
};
use crate::tolerance;
use crate::trajectory::{Sample, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtremalKind {
    Abnormal,
    Normal,
}

impl ExtremalKind {
    /// Cost multiplier `ν`.
    pub fn multiplier(self) -> f64 {
        match self {
            ExtremalKind::Abnormal => 0.0,
            ExtremalKind::Normal => -1.0,
        }
    }
}

/// Outcome of `max_{u ∈ U} h_u^ν`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ControlDecision {
    /// The Pontryagin function is unbounded above on the cone.
    NoMaximum,
    /// The maximum 0 is attained only at `u = 0`.
    TrivialOnly,
    /// Unit-speed representative of the maximizing ray. `value` is the
    /// Pontryagin function at `control`; `speed` its Lorentzian speed.
    Maximizer { control: Control, value: f64, speed: f64 },
    /// Every positive multiple of the lightlike `direction` attains the maximum 0.
    RayOfMaximizers { direction: Control },
}

/// Pointwise maximization of the Pontryagin function over the problem's cone.
pub fn maximize_control(problem: ProblemId, h: &Covector, kind: ExtremalKind) -> ControlDecision {
    let (axial, t1, t2) = h.cone_coordinates(problem);
    let n = transverse_norm(t1, t2);
    // Past cone of the dual form: the axial component is negative.
    let past = axial < 0.0;
    let gap = -axial - n;
    match kind {
        ExtremalKind::Abnormal => {
            if axial == 0.0 && n == 0.0 {
                // Excluded by nontriviality of (p, ν).
                return ControlDecision::NoMaximum;
            }
            let tol = tolerance::CONE * axial.abs().max(n);
            if past && gap.abs() <= tol {
                ControlDecision::RayOfMaximizers {
                    direction: ray_direction(problem, h),
                }
            } else if past && gap > tol {
                ControlDecision::TrivialOnly
            } else {
                ControlDecision::NoMaximum
            }
        }
        ExtremalKind::Normal => {
            let square = h.lorentz_square(problem);
            if !past || square <= 0.0 {
                return ControlDecision::NoMaximum;
            }
            let tol = tolerance::NORM * h.norm_squared().max(1.0);
            if (square - 1.0).abs() <= tol {
                let control = ray_direction(problem, h).scaled(1.0 / square.sqrt());
                let value = pontryagin_value(problem, h, &control, -1.0)
                    .expect("maximizing control lies in the cone");
                let speed = length_integrand(problem, &control).expect("maximizing control lies in the cone");
                ControlDecision::Maximizer { control, value, speed }
            } else if square > 1.0 {
                ControlDecision::TrivialOnly
            } else {
                ControlDecision::NoMaximum
            }
        }
    }
}

/// `(h1, h2, −h3)` for P1, `(−h1, h2, h3)` for P2.
fn ray_direction(problem: ProblemId, h: &Covector) -> Control {
    match problem {
        ProblemId::P1 => Control::new(h.h1, h.h2, -h.h3),
        ProblemId::P2 => Control::new(-h.h1, h.h2, h.h3),
    }
}

/// Right-hand side of the coupled `(q, h)` system for one extremal family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CovectorFlow {
    pub problem: ProblemId,
    pub kind: ExtremalKind,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowRate {
    pub q_dot: Tangent,
    pub h_dot: [f64; 3],
    pub control: Control,
}

pub fn covector_flow(problem: ProblemId, kind: ExtremalKind) -> CovectorFlow {
    CovectorFlow { problem, kind }
}

impl CovectorFlow {
    /// The extremal control selected at `h`.
    pub fn control(&self, h: &Covector) -> Result<Control> {
        match (self.problem, self.kind) {
            (ProblemId::P1, ExtremalKind::Normal) => Ok(Control::new(h.h1, h.h2, -h.h3)),
            (ProblemId::P1, ExtremalKind::Abnormal) => {
                let r = transverse_norm(h.h1, h.h2);
                if r == 0.0 {
                    return Err(Error::DegenerateCovector("h1 = h2 = 0 leaves the abnormal direction undefined"));
                }
                Ok(Control::new(h.h1 / r, h.h2 / r, 1.0))
            }
            (ProblemId::P2, ExtremalKind::Normal) => Ok(Control::new(-h.h1, h.h2, h.h3)),
            (ProblemId::P2, ExtremalKind::Abnormal) => {
                let n = transverse_norm(h.h2, h.h3);
                if n == 0.0 {
                    return Err(Error::DegenerateCovector("h2 = h3 = 0 gives the zero abnormal covector"));
                }
                Ok(Control::new(n, h.h2, h.h3))
            }
        }
    }

    pub fn rate(&self, q: &GroupPoint, h: &Covector) -> Result<FlowRate> {
        let u = self.control(h)?;
        Ok(FlowRate {
            q_dot: velocity(q, &u),
            h_dot: [-h.h3 * u.u2, h.h3 * u.u1, 0.0],
            control: u,
        })
    }
}

/// Position, covector and control of an extremal at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremalState {
    pub q: GroupPoint,
    pub h: Covector,
    pub u: Control,
}

/// Parameters of the four extremal families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ExtremalParams {
    /// Covector `(cos θ, sin θ, −1)`, `θ = θ0 − t`.
    P1Abnormal { theta0: f64 },
    /// Covector `(sinh a cos θ, sinh a sin θ, −cosh a)`, `θ = θ0 − t cosh a`.
    P1Normal { theta0: f64, a: f64 },
    /// Initial covector `(−|(h2_0, h3)|, h2_0, h3)`.
    P2Abnormal { h2_0: f64, h3: f64 },
    /// Initial covector `(h1_0, h2_0, h3)` with `h1_0² − h2_0² − h3² = 1`, `h1_0 < 0`.
    P2Normal { h1_0: f64, h2_0: f64, h3: f64 },
}

impl ExtremalParams {
    pub fn problem(&self) -> ProblemId {
        match self {
            ExtremalParams::P1Abnormal { .. } | ExtremalParams::P1Normal { .. } => ProblemId::P1,
            ExtremalParams::P2Abnormal { .. } | ExtremalParams::P2Normal { .. } => ProblemId::P2,
        }
    }

    pub fn kind(&self) -> ExtremalKind {
        match self {
            ExtremalParams::P1Abnormal { .. } | ExtremalParams::P2Abnormal { .. } => ExtremalKind::Abnormal,
            ExtremalParams::P1Normal { .. } | ExtremalParams::P2Normal { .. } => ExtremalKind::Normal,
        }
    }

    /// P2 normal parameters on the unit hyperboloid, `h1_0` solved from
    /// `(h2_0, h3)`.
    pub fn p2_normal_from(h2_0: f64, h3: f64) -> Self {
        ExtremalParams::P2Normal {
            h1_0: -(1.0 + h2_0 * h2_0 + h3 * h3).sqrt(),
            h2_0,
            h3,
        }
    }

    pub fn initial_covector(&self) -> Covector {
        match *self {
            ExtremalParams::P1Abnormal { theta0 } => Covector::new(theta0.cos(), theta0.sin(), -1.0),
            ExtremalParams::P1Normal { theta0, a } => {
                Covector::new(a.sinh() * theta0.cos(), a.sinh() * theta0.sin(), -a.cosh())
            }
            ExtremalParams::P2Abnormal { h2_0, h3 } => Covector::new(-transverse_norm(h2_0, h3), h2_0, h3),
            ExtremalParams::P2Normal { h1_0, h2_0, h3 } => Covector::new(h1_0, h2_0, h3),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = match *self {
            ExtremalParams::P1Abnormal { theta0 } => theta0.is_finite(),
            ExtremalParams::P1Normal { theta0, a } => theta0.is_finite() && a.is_finite(),
            ExtremalParams::P2Abnormal { h2_0, h3 } => h2_0.is_finite() && h3.is_finite(),
            ExtremalParams::P2Normal { h1_0, h2_0, h3 } => h1_0.is_finite() && h2_0.is_finite() && h3.is_finite(),
        };
        if !finite {
            return Err(Error::InvalidParameter("extremal parameters must be finite".into()));
        }
        match *self {
            ExtremalParams::P2Abnormal { h2_0, h3 } if h2_0 == 0.0 && h3 == 0.0 => {
                Err(Error::DegenerateCovector("h2_0 = h3 = 0 gives the zero abnormal covector"))
            }
            ExtremalParams::P2Normal { h1_0, h2_0, h3 } => check_p2_normalization(h1_0, h2_0, h3),
            _ => Ok(()),
        }
    }

    /// Recover the parameters of the extremal whose initial covector is `h`.
    pub fn from_covector(problem: ProblemId, kind: ExtremalKind, h: &Covector) -> Result<Self> {
        let params = match (problem, kind) {
            (ProblemId::P1, ExtremalKind::Abnormal) => {
                let r = transverse_norm(h.h1, h.h2);
                if r == 0.0 {
                    return Err(Error::DegenerateCovector("h1 = h2 = 0 leaves the abnormal direction undefined"));
                }
                if (h.h3 + r).abs() > tolerance::CONE * r {
                    return Err(Error::Normalization {
                        h1: h.h1,
                        h2: h.h2,
                        h3: h.h3,
                        detail: "abnormal P1 covector needs h3 = -|(h1, h2)|",
                    });
                }
                ExtremalParams::P1Abnormal {
                    theta0: h.h2.atan2(h.h1),
                }
            }
            (ProblemId::P1, ExtremalKind::Normal) => {
                let square = h.lorentz_square(ProblemId::P1);
                if h.h3 >= 0.0 || (square - 1.0).abs() > tolerance::NORM * h.norm_squared().max(1.0) {
                    return Err(Error::Normalization {
                        h1: h.h1,
                        h2: h.h2,
                        h3: h.h3,
                        detail: "normal P1 covector needs h3^2 - h1^2 - h2^2 = 1 and h3 < 0",
                    });
                }
                ExtremalParams::P1Normal {
                    theta0: h.h2.atan2(h.h1),
                    a: transverse_norm(h.h1, h.h2).asinh(),
                }
            }
            (ProblemId::P2, ExtremalKind::Abnormal) => {
                let n = transverse_norm(h.h2, h.h3);
                if n == 0.0 || (h.h1 + n).abs() > tolerance::CONE * n {
                    return Err(Error::Normalization {
                        h1: h.h1,
                        h2: h.h2,
                        h3: h.h3,
                        detail: "abnormal P2 covector needs h1 = -|(h2, h3)| != 0",
                    });
                }
                ExtremalParams::P2Abnormal { h2_0: h.h2, h3: h.h3 }
            }
            (ProblemId::P2, ExtremalKind::Normal) => {
                check_p2_normalization(h.h1, h.h2, h.h3)?;
                ExtremalParams::P2Normal {
                    h1_0: h.h1,
                    h2_0: h.h2,
                    h3: h.h3,
                }
            }
        };
        Ok(params)
    }

    pub fn eval(&self, t: f64) -> Result<ExtremalState> {
        match *self {
            ExtremalParams::P1Abnormal { theta0 } => Ok(eval_abnormal_p1(theta0, t)),
            ExtremalParams::P1Normal { theta0, a } => Ok(eval_normal_p1(theta0, a, t)),
            ExtremalParams::P2Abnormal { h2_0, h3 } => eval_abnormal_p2(h2_0, h3, t),
            ExtremalParams::P2Normal { h1_0, h2_0, h3 } => eval_normal_p2(h1_0, h2_0, h3, t),
        }
    }
}

fn check_p2_normalization(h1_0: f64, h2_0: f64, h3: f64) -> Result<()> {
    let h = Covector::new(h1_0, h2_0, h3);
    let square = h.lorentz_square(ProblemId::P2);
    if h1_0 < 0.0 && (square - 1.0).abs() <= tolerance::NORM * h.norm_squared().max(1.0) {
        Ok(())
    } else {
        Err(Error::Normalization {
            h1: h1_0,
            h2: h2_0,
            h3,
            detail: "normal P2 covector needs h1^2 - h2^2 - h3^2 = 1 and h1 < 0",
        })
    }
}

/// An extremal family member together with its duration `t1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremalSpec {
    pub params: ExtremalParams,
    pub duration: f64,
}

impl ExtremalSpec {
    pub fn new(params: ExtremalParams, duration: f64) -> Self {
        Self { params, duration }
    }

    pub fn problem(&self) -> ProblemId {
        self.params.problem()
    }

    pub fn kind(&self) -> ExtremalKind {
        self.params.kind()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.duration >= 0.0 && self.duration.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "duration must be finite and nonnegative, got {}",
                self.duration
            )));
        }
        self.params.validate()
    }

    pub fn endpoint(&self) -> Result<GroupPoint> {
        Ok(self.params.eval(self.duration)?.q)
    }
}

/// Abnormal P1 extremal: lightlike circle of unit radius.
///
/// `x = sin θ0 − sin(θ0 − t)`, `y = cos(θ0 − t) − cos θ0`, `z = (t + sin t)/2`.
pub fn eval_abnormal_p1(theta0: f64, t: f64) -> ExtremalState {
    let phase = theta0 - t;
    let (s, c) = phase.sin_cos();
    let q = GroupPoint::new(theta0.sin() - s, c - theta0.cos(), 0.5 * (t + t.sin()));
    ExtremalState {
        q,
        h: Covector::new(c, s, -1.0),
        u: Control::new(c, s, 1.0),
    }
}

/// Normal P1 extremal with `h3 = −cosh a`.
pub fn eval_normal_p1(theta0: f64, a: f64, t: f64) -> ExtremalState {
    let k = a.cosh();
    let sh = a.sinh();
    let th = a.tanh();
    let phase = theta0 - t * k;
    let (s, c) = phase.sin_cos();
    let q = GroupPoint::new(
        th * (theta0.sin() - s),
        th * (c - theta0.cos()),
        0.5 * t * (1.0 / k + k) + 0.5 * th * th * (t * k).sin(),
    );
    let h = Covector::new(sh * c, sh * s, -k);
    ExtremalState {
        q,
        h,
        u: Control::new(h.h1, h.h2, k),
    }
}

/// Abnormal P2 extremal (lightlike).
///
/// For `h3 ≠ 0`, with `C = arsinh(h2_0/h3)` and `τ = C + |h3| t`:
/// `x = sinh τ − sinh C`, `y = sgn h3 (cosh τ − cosh C)`,
/// `z = (h3 t + sinh(h3 t))/2`. For `h3 = 0` the straight line
/// `x = |h2_0| t, y = h2_0 t, z = 0`.
pub fn eval_abnormal_p2(h2_0: f64, h3: f64, t: f64) -> Result<ExtremalState> {
    ExtremalParams::P2Abnormal { h2_0, h3 }.validate()?;
    let (q, h2) = if h3 == 0.0 {
        (GroupPoint::new(h2_0.abs() * t, h2_0 * t, 0.0), h2_0)
    } else {
        let c = (h2_0 / h3).asinh();
        let big_t = h3.abs() * t;
        let mid = c + 0.5 * big_t;
        let half = (0.5 * big_t).sinh();
        if mid.cosh().is_finite() {
            // sinh τ − sinh C = 2 cosh(C + T/2) sinh(T/2), likewise for cosh.
            let x = 2.0 * mid.cosh() * half;
            let y = h3.signum() * 2.0 * mid.sinh() * half;
            let s = h3 * t;
            let q = GroupPoint::new(x, y, 0.5 * (s + s.sinh()));
            (q, h3 * (c + big_t).sinh())
        } else {
            // |h2_0/h3| beyond the range of cosh: same curve, covector form.
            let h1_0 = -transverse_norm(h2_0, h3);
            let (q, h) = p2_flow(h1_0, h2_0, h3, t);
            (q, h.h2)
        }
    };
    let u = Control::new(transverse_norm(h2, h3), h2, h3);
    Ok(ExtremalState {
        q,
        h: Covector::new(-u.u1, h2, h3),
        u,
    })
}

/// Normal P2 extremal, `s = h3 t`:
///
/// ```text
/// x = (h2⁰(cosh s − 1) − h1⁰ sinh s)/h3
/// y = (h2⁰ sinh s − h1⁰(cosh s − 1))/h3
/// z = ((2h3² − (h1⁰)² + (h2⁰)²) s + ((h1⁰)² − (h2⁰)²) sinh s)/(2h3²)
/// ```
///
/// evaluated in a form that is regular at `h3 = 0`, where it reduces to
/// `x = −h1⁰ t, y = h2⁰ t, z = 0`.
pub fn eval_normal_p2(h1_0: f64, h2_0: f64, h3: f64, t: f64) -> Result<ExtremalState> {
    ExtremalParams::P2Normal { h1_0, h2_0, h3 }.validate()?;
    let (q, h) = p2_flow(h1_0, h2_0, h3, t);
    Ok(ExtremalState {
        q,
        h,
        u: Control::new(-h.h1, h.h2, h.h3),
    })
}

/// Flow of `ḣ1 = −h3 h2, ḣ2 = −h3 h1` with `q̇ = −h1 X1 + h2 X2 + h3 X3`,
/// shared by both P2 families.
fn p2_flow(h1_0: f64, h2_0: f64, h3: f64, t: f64) -> (GroupPoint, Covector) {
    let s = h3 * t;
    let (f1, f2, f3) = (sinhc(s), coshm1c(s), sinh_minus_c3(s));
    let a = (h1_0 - h2_0) * (h1_0 + h2_0);
    let q = GroupPoint::new(
        t * (h2_0 * f2 - h1_0 * f1),
        t * (h2_0 * f1 - h1_0 * f2),
        s + 0.5 * a * h3 * t * t * t * f3,
    );
    let (sh, ch) = (s.sinh(), s.cosh());
    let h = Covector::new(h1_0 * ch - h2_0 * sh, h2_0 * ch - h1_0 * sh, h3);
    (q, h)
}

/// `sinh(s)/s`.
pub(crate) fn sinhc(s: f64) -> f64 {
    if s == 0.0 {
        1.0
    } else {
        s.sinh() / s
    }
}

/// `(cosh(s) − 1)/s`.
pub(crate) fn coshm1c(s: f64) -> f64 {
    if s == 0.0 {
        0.0
    } else {
        let h = (0.5 * s).sinh();
        2.0 * h * h / s
    }
}

/// `(sinh(s) − s)/s³`.
pub(crate) fn sinh_minus_c3(s: f64) -> f64 {
    if s.abs() < 0.5 {
        let s2 = s * s;
        // Horner form of Σ s^(2k) / (2k + 3)!
        1.0 / 6.0
            + s2 * (1.0 / 120.0
                + s2 * (1.0 / 5040.0
                    + s2 * (1.0 / 362_880.0 + s2 * (1.0 / 39_916_800.0 + s2 * (1.0 / 6_227_020_800.0)))))
    } else {
        (s.sinh() - s) / (s * s * s)
    }
}

/// Uniformly sampled extremal with `J` filled analytically: `J = t` on
/// normal extremals (unit Lorentzian speed), `J = 0` on abnormal ones.
pub fn sample_extremal(spec: &ExtremalSpec, n_samples: usize) -> Result<Trajectory> {
    if n_samples < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 samples, got {n_samples}")));
    }
    spec.validate()?;
    if spec.duration <= 0.0 {
        return Err(Error::InvalidParameter("sampling needs a positive duration".into()));
    }
    let dt = spec.duration / (n_samples - 1) as f64;
    let normal = spec.kind() == ExtremalKind::Normal;
    let samples = (0..n_samples)
        .map(|k| {
            let t = if k + 1 == n_samples { spec.duration } else { k as f64 * dt };
            let state = spec.params.eval(t)?;
            Ok(Sample {
                t,
                q: state.q,
                h: Some(state.h),
                u: state.u,
                length: if normal { t } else { 0.0 },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Trajectory::new(spec.problem(), samples))
}

/// Extremal controls always sit in the closed cone; abnormal ones on its boundary.
pub fn expected_cone_class(kind: ExtremalKind) -> ConeClass {
    match kind {
        ExtremalKind::Abnormal => ConeClass::Lightlike,
        ExtremalKind::Normal => ConeClass::Timelike,
    }
}

/// Checks `classify_control` against [`expected_cone_class`].
pub fn control_matches_kind(problem: ProblemId, kind: ExtremalKind, u: &Control) -> bool {
    classify_control(problem, u) == expected_cone_class(kind)
}
