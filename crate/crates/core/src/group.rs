//! Heisenberg group, its left-invariant frame and the two Lorentzian cones.
//!
//! Points are written in canonical coordinates `(x, y, z)` with the product
//!
//! ```text
//! (x, y, z)·(x', y', z') = (x + x', y + y', z + z' + (x y' − y x')/2)
//! ```
//!
//! which is the unique group law for which
//! `X1 = ∂x − (y/2) ∂z`, `X2 = ∂y + (x/2) ∂z`, `X3 = ∂z` are left-invariant.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance;

/// Which of the two Lorentzian problems is meant.
///
/// `P1` uses the cone `u1² + u2² ≤ u3², u3 ≥ 0`, `P2` the cone
/// `u2² + u3² ≤ u1², u1 ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProblemId {
    P1,
    P2,
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemId::P1 => f.write_str("P1"),
            ProblemId::P2 => f.write_str("P2"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct GroupPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl GroupPoint {
    pub const IDENTITY: GroupPoint = GroupPoint { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn inverse(&self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    /// Euclidean distance in coordinates (not a group-invariant quantity).
    pub fn coordinate_distance(&self, other: &GroupPoint) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    pub fn coordinate_norm(&self) -> f64 {
        self.coordinate_distance(&Self::IDENTITY)
    }
}

impl Mul for GroupPoint {
    type Output = GroupPoint;

    fn mul(self, rhs: GroupPoint) -> GroupPoint {
        multiply(&self, &rhs)
    }
}

pub fn multiply(g: &GroupPoint, h: &GroupPoint) -> GroupPoint {
    GroupPoint {
        x: g.x + h.x,
        y: g.y + h.y,
        z: g.z + h.z + 0.5 * (g.x * h.y - g.y * h.x),
    }
}

/// A tangent vector in coordinates `(ẋ, ẏ, ż)`.
pub type Tangent = [f64; 3];

/// The left-invariant frame `X1(q), X2(q), X3(q)` as coordinate triples.
pub fn frame_at(q: &GroupPoint) -> [Tangent; 3] {
    [[1.0, 0.0, -0.5 * q.y], [0.0, 1.0, 0.5 * q.x], [0.0, 0.0, 1.0]]
}

/// Velocity `Σ uᵢ Xᵢ(q)` of the control system at `q`.
pub fn velocity(q: &GroupPoint, u: &Control) -> Tangent {
    [u.u1, u.u2, 0.5 * (q.x * u.u2 - q.y * u.u1) + u.u3]
}

/// Adjoint variables in the frame, `hᵢ = ⟨p, Xᵢ⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Covector {
    pub h1: f64,
    pub h2: f64,
    pub h3: f64,
}

/// Adjoint variables in canonical coordinates, `(a, b, c) = (p_x, p_y, p_z)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CanonicalCovector {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Covector {
    pub const fn new(h1: f64, h2: f64, h3: f64) -> Self {
        Self { h1, h2, h3 }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.h1, self.h2, self.h3]
    }

    pub fn is_finite(&self) -> bool {
        self.h1.is_finite() && self.h2.is_finite() && self.h3.is_finite()
    }

    pub fn norm_squared(&self) -> f64 {
        self.h1 * self.h1 + self.h2 * self.h2 + self.h3 * self.h3
    }

    /// Frame components of the canonical covector `p` attached at `q`.
    pub fn from_canonical(p: &CanonicalCovector, q: &GroupPoint) -> Self {
        Self {
            h1: p.a - 0.5 * p.c * q.y,
            h2: p.b + 0.5 * p.c * q.x,
            h3: p.c,
        }
    }

    pub fn to_canonical(&self, q: &GroupPoint) -> CanonicalCovector {
        CanonicalCovector {
            a: self.h1 + 0.5 * self.h3 * q.y,
            b: self.h2 - 0.5 * self.h3 * q.x,
            c: self.h3,
        }
    }

    /// The dual quadratic form of the problem: `h3² − h1² − h2²` for P1,
    /// `h1² − h2² − h3²` for P2. Positive on timelike covectors.
    pub fn lorentz_square(&self, problem: ProblemId) -> f64 {
        let (axial, a, b) = self.cone_coordinates(problem);
        let n = transverse_norm(a, b);
        (axial.abs() - n) * (axial.abs() + n)
    }

    /// `(axial, transverse₁, transverse₂)` components for the problem's cone.
    pub fn cone_coordinates(&self, problem: ProblemId) -> (f64, f64, f64) {
        match problem {
            ProblemId::P1 => (self.h3, self.h1, self.h2),
            ProblemId::P2 => (self.h1, self.h2, self.h3),
        }
    }

    /// `u · h`.
    pub fn pair(&self, u: &Control) -> f64 {
        self.h1 * u.u1 + self.h2 * u.u2 + self.h3 * u.u3
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Control {
    pub u1: f64,
    pub u2: f64,
    pub u3: f64,
}

impl Control {
    pub const fn new(u1: f64, u2: f64, u3: f64) -> Self {
        Self { u1, u2, u3 }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.u1, self.u2, self.u3]
    }

    pub fn scaled(self, k: f64) -> Self {
        Self::new(k * self.u1, k * self.u2, k * self.u3)
    }

    pub fn is_finite(&self) -> bool {
        self.u1.is_finite() && self.u2.is_finite() && self.u3.is_finite()
    }

    /// `(axial, transverse₁, transverse₂)` components for the problem's cone.
    pub fn cone_coordinates(&self, problem: ProblemId) -> (f64, f64, f64) {
        match problem {
            ProblemId::P1 => (self.u3, self.u1, self.u2),
            ProblemId::P2 => (self.u1, self.u2, self.u3),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeClass {
    Inadmissible,
    Lightlike,
    Timelike,
}

impl ConeClass {
    pub fn is_admissible(self) -> bool {
        !matches!(self, ConeClass::Inadmissible)
    }
}

/// `√(a² + b²)` computed identically for `(a, b)` and `(b, a)`.
pub(crate) fn transverse_norm(a: f64, b: f64) -> f64 {
    let (lo, hi) = if a.abs() <= b.abs() { (a, b) } else { (b, a) };
    hi.hypot(lo)
}

pub fn classify_control(problem: ProblemId, u: &Control) -> ConeClass {
    let (axial, a, b) = u.cone_coordinates(problem);
    let n = transverse_norm(a, b);
    let gap = axial - n;
    let tol = tolerance::CONE * axial.abs().max(n);
    if !gap.is_finite() {
        ConeClass::Inadmissible
    } else if gap > tol {
        ConeClass::Timelike
    } else if gap.abs() <= tol && axial >= 0.0 {
        ConeClass::Lightlike
    } else {
        ConeClass::Inadmissible
    }
}

/// Lorentzian speed `√(u3² − u1² − u2²)` (P1) or `√(u1² − u2² − u3²)` (P2).
pub fn length_integrand(problem: ProblemId, u: &Control) -> Result<f64> {
    match classify_control(problem, u) {
        ConeClass::Inadmissible => Err(Error::InadmissibleControl {
            problem,
            u1: u.u1,
            u2: u.u2,
            u3: u.u3,
        }),
        ConeClass::Lightlike => Ok(0.0),
        ConeClass::Timelike => {
            let (axial, a, b) = u.cone_coordinates(problem);
            let n = transverse_norm(a, b);
            Ok(((axial - n) * (axial + n)).sqrt())
        }
    }
}

/// Pontryagin function `⟨h, u⟩ − ν·speed(u)`.
pub fn pontryagin_value(problem: ProblemId, h: &Covector, u: &Control, nu: f64) -> Result<f64> {
    if nu > 0.0 || nu.is_nan() {
        return Err(Error::PositiveMultiplier(nu));
    }
    let speed = length_integrand(problem, u)?;
    Ok(h.pair(u) - nu * speed)
}
