//! Inversion of the P2 exponential map and the Lorentzian distance.
//!
//! Normal P2 extremals are unit-speed, so the length of the maximizer
//! reaching `q1` is its duration `t1`. The covector hyperboloid
//! `h1² − h2² − h3² = 1, h1 < 0` is parametrized by
//! `h1 = −√(1 + r²), (h2, h3) = r (cos ψ, sin ψ)`, which leaves an
//! unconstrained 3-variable root problem in `(r, ψ, t1)`.
//!
//! The multi-start Newton search is seeded with an exact reduction: along a
//! normal extremal with `s = h3 t`,
//!
//! ```text
//! x² − y² = 4 (1 + h3²) sinh²(s/2) / h3²,    z = s + (1 + h3²)(sinh s − s) / (2 h3²)
//! ```
//!
//! so `|s|` is explicit in `u = |h3|` and `|z|` becomes a function of `u`
//! alone, increasing from 0 (`u → 0`) to the boundary value
//! `(T + sinh T)/2` (`u → ∞`). Bisection in `ln u` then fixes `(h3, t1)`,
//! and `(h1⁰, h2⁰)` follow from a 2×2 linear solve.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extremals::{coshm1c, sinh_minus_c3, sinhc, ExtremalParams, ExtremalSpec};
use crate::group::GroupPoint;
use crate::reachability::{boundary_time, membership_p2, Verdict};
use crate::tolerance;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShootingConfig {
    pub r_grid: Vec<f64>,
    pub angle_count: usize,
    pub t_grid: Vec<f64>,
    pub max_iterations: usize,
    /// Central-difference step for the Jacobian.
    pub fd_step: f64,
    /// Endpoint error accepted as converged.
    pub tolerance: f64,
}

impl Default for ShootingConfig {
    fn default() -> Self {
        Self {
            r_grid: vec![0.0, 0.5, 1.0, 2.0, 4.0],
            angle_count: 8,
            t_grid: vec![0.5, 1.0, 2.0, 5.0, 10.0],
            max_iterations: 100,
            fd_step: 1e-6,
            tolerance: tolerance::SHOOT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShootingResult {
    /// The maximizer: a P2 normal extremal for interior targets, the lightlike
    /// abnormal one for boundary targets.
    pub spec: ExtremalSpec,
    pub endpoint_error: f64,
    /// Lorentzian length of the maximizer.
    pub distance: f64,
    /// Newton iterations spent on the winning start.
    pub iterations: usize,
    /// Number of multi-start runs that converged.
    pub converged_starts: usize,
    /// Distinct converged solutions other than the winner.
    pub alternatives: Vec<ExtremalSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Distance {
    Finite { value: f64, maximizer: ShootingResult },
    PositiveInfinity,
    /// The target is not in the causal future of the identity.
    Undefined,
}

impl Distance {
    pub fn value(&self) -> Option<f64> {
        match self {
            Distance::Finite { value, .. } => Some(*value),
            _ => None,
        }
    }
}

/// Lorentzian distance from the identity in P2.
pub fn lorentz_distance_p2(target: &GroupPoint) -> Result<Distance> {
    lorentz_distance_p2_with(target, &ShootingConfig::default())
}

pub fn lorentz_distance_p2_with(target: &GroupPoint, cfg: &ShootingConfig) -> Result<Distance> {
    if membership_p2(target).verdict == Verdict::Outside {
        return Ok(Distance::Undefined);
    }
    let maximizer = shoot_p2_with(target, cfg)?;
    Ok(Distance::Finite {
        value: maximizer.distance,
        maximizer,
    })
}

/// In P1 every pair of points is joined by admissible curves of arbitrarily
/// large length.
pub fn lorentz_distance_p1(_target: &GroupPoint) -> Distance {
    Distance::PositiveInfinity
}

pub fn shoot_p2(target: &GroupPoint) -> Result<ShootingResult> {
    shoot_p2_with(target, &ShootingConfig::default())
}

pub fn shoot_p2_with(target: &GroupPoint, cfg: &ShootingConfig) -> Result<ShootingResult> {
    if !target.is_finite() {
        return Err(Error::InvalidParameter("target must be finite".into()));
    }
    match membership_p2(target).verdict {
        Verdict::Outside => Err(Error::OutsideAttainableSet),
        Verdict::Boundary => boundary_maximizer(target),
        Verdict::Interior if target.z.abs() <= tolerance::BOUNDARY => Ok(straight_maximizer(target)),
        Verdict::Interior => newton_multistart(target, cfg),
    }
}

fn finish(spec: ExtremalSpec, target: &GroupPoint, distance: f64) -> Result<ShootingResult> {
    let endpoint_error = spec.endpoint()?.coordinate_distance(target);
    Ok(ShootingResult {
        spec,
        endpoint_error,
        distance,
        iterations: 0,
        converged_starts: 0,
        alternatives: Vec::new(),
    })
}

/// `z = 0, x > |y|`: the `h3 = 0` normal line `x = −h1 t, y = h2 t`.
fn straight_maximizer(target: &GroupPoint) -> ShootingResult {
    let t1 = ((target.x - target.y) * (target.x + target.y)).sqrt();
    let params = ExtremalParams::P2Normal {
        h1_0: -target.x / t1,
        h2_0: target.y / t1,
        h3: 0.0,
    };
    let spec = ExtremalSpec::new(params, t1);
    // Parameters are exact up to round-off, so evaluation cannot fail.
    finish(spec, target, t1).expect("straight-line maximizer is a valid normal extremal")
}

/// Boundary targets are reached only by lightlike abnormal extremals, of length 0.
fn boundary_maximizer(target: &GroupPoint) -> Result<ShootingResult> {
    let spec = if target.z.abs() <= tolerance::BOUNDARY {
        let h2_0 = if target.y >= 0.0 { 1.0 } else { -1.0 };
        ExtremalSpec::new(ExtremalParams::P2Abnormal { h2_0, h3: 0.0 }, target.x.max(0.0))
    } else {
        // With |h3| = 1: x + sgn(h3)·y = e^C (e^T − 1), T = |h3| t.
        let sign = target.z.signum();
        let big_t = boundary_time(target.x, target.y).ok_or(Error::OutsideAttainableSet)?;
        let ratio = (target.x + sign * target.y) / big_t.exp_m1();
        if !(ratio > 0.0 && ratio.is_finite()) {
            return Err(Error::NoConvergence {
                best_residual: f64::INFINITY,
            });
        }
        let c = ratio.ln();
        ExtremalSpec::new(
            ExtremalParams::P2Abnormal {
                h2_0: sign * c.sinh(),
                h3: sign,
            },
            big_t,
        )
    };
    finish(spec, target, 0.0)
}

/// `|s|` and `|z|` reached by the normal extremal with `|h3| = u` whose
/// endpoint has `x² − y² = rho²`.
fn reduced_profile(rho: f64, u: f64) -> (f64, f64) {
    let s = 2.0 * (rho * u / (2.0 * (1.0 + u * u).sqrt())).asinh();
    let t = s / u;
    // (1 + u²)(sinh s − s)/(2u²) written as (1 + u²) s t² f3(s) / 2
    (s, s + 0.5 * (1.0 + u * u) * s * t * t * sinh_minus_c3(s))
}

/// Exact inversion for `z ≠ 0` interior targets, as `(r, ψ, t1)`.
fn reduced_seed(target: &GroupPoint) -> Option<[f64; 3]> {
    let rho = ((target.x - target.y) * (target.x + target.y)).sqrt();
    let z = target.z.abs();
    if !(rho > 0.0 && z > 0.0 && target.x > 0.0) {
        return None;
    }
    let g = |ln_u: f64| reduced_profile(rho, ln_u.exp()).1 - z;
    let (mut lo, mut hi) = (-1.0f64, 1.0f64);
    while g(lo) >= 0.0 {
        lo -= 2.0;
        if lo < -700.0 {
            return None;
        }
    }
    while g(hi) <= 0.0 {
        hi += 2.0;
        if hi > 700.0 {
            return None;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if g(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let u = (0.5 * (lo + hi)).exp();
    let (s_abs, _) = reduced_profile(rho, u);
    let sign = target.z.signum();
    let (s, t) = (sign * s_abs, s_abs / u);
    let (f1, f2) = (sinhc(s), coshm1c(s));
    // x/t = f2 h2 − f1 h1, y/t = f1 h2 − f2 h1, determinant f2² − f1² = −sinhc(s/2)²
    let d = sinhc(0.5 * s).powi(2);
    let h2 = (f1 * target.y / t - f2 * target.x / t) / d;
    let h3 = sign * u;
    let seed = [h2.hypot(h3), h3.atan2(h2), t];
    seed.iter().all(|v| v.is_finite()).then_some(seed)
}

/// Maps `(r, ψ, t1)` to extremal parameters.
fn params_from(p: &[f64; 3]) -> ExtremalParams {
    let (r, psi) = (p[0], p[1]);
    ExtremalParams::P2Normal {
        h1_0: -(1.0 + r * r).sqrt(),
        h2_0: r * psi.cos(),
        h3: r * psi.sin(),
    }
}

fn residual(p: &[f64; 3], target: &GroupPoint) -> Option<[f64; 3]> {
    let q = params_from(p).eval(p[2]).ok()?.q;
    let r = [q.x - target.x, q.y - target.y, q.z - target.z];
    r.iter().all(|v| v.is_finite()).then_some(r)
}

fn norm(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn jacobian(p: &[f64; 3], target: &GroupPoint, step: f64) -> Option<[[f64; 3]; 3]> {
    let mut jac = [[0.0; 3]; 3];
    for j in 0..3 {
        let mut plus = *p;
        let mut minus = *p;
        plus[j] += step;
        minus[j] -= step;
        let fp = residual(&plus, target)?;
        let fm = residual(&minus, target)?;
        for i in 0..3 {
            jac[i][j] = (fp[i] - fm[i]) / (2.0 * step);
        }
    }
    Some(jac)
}

/// Gaussian elimination with partial pivoting; `None` when singular.
fn solve3(a: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let mut m = [[0.0; 4]; 3];
    for i in 0..3 {
        m[i][..3].copy_from_slice(&a[i]);
        m[i][3] = b[i];
    }
    let scale = a.iter().flatten().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if scale == 0.0 {
        return None;
    }
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[pivot][col].abs() <= 1e-14 * scale {
            return None;
        }
        m.swap(col, pivot);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for k in col..4 {
                m[row][k] -= f * m[col][k];
            }
        }
    }
    let mut x = [0.0; 3];
    for i in (0..3).rev() {
        let mut s = m[i][3];
        for k in i + 1..3 {
            s -= m[i][k] * x[k];
        }
        x[i] = s / m[i][i];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Newton direction, falling back to a Levenberg–Marquardt step when the
/// Jacobian is singular (e.g. at `r = 0`, where `ψ` drops out).
fn newton_direction(jac: &[[f64; 3]; 3], f: &[f64; 3]) -> Option<[f64; 3]> {
    let rhs = [-f[0], -f[1], -f[2]];
    if let Some(d) = solve3(*jac, rhs) {
        return Some(d);
    }
    let mut jtj = [[0.0; 3]; 3];
    let mut jtf = [0.0; 3];
    for i in 0..3 {
        for j in 0..3 {
            jtj[i][j] = (0..3).map(|k| jac[k][i] * jac[k][j]).sum();
        }
        jtf[i] = -(0..3).map(|k| jac[k][i] * f[k]).sum::<f64>();
    }
    let trace = jtj[0][0] + jtj[1][1] + jtj[2][2];
    let mu = 1e-6 * trace.max(1e-12);
    for (i, row) in jtj.iter_mut().enumerate() {
        row[i] += mu;
    }
    solve3(jtj, jtf)
}

struct Run {
    point: [f64; 3],
    error: f64,
    iterations: usize,
}

fn newton_run(start: [f64; 3], target: &GroupPoint, cfg: &ShootingConfig) -> Run {
    let mut p = start;
    let Some(mut f) = residual(&p, target) else {
        return Run {
            point: p,
            error: f64::INFINITY,
            iterations: 0,
        };
    };
    let mut err = norm(&f);
    let floor = 1e-13 * target.coordinate_norm().max(1.0);
    let mut iterations = 0;
    while iterations < cfg.max_iterations && err > floor {
        iterations += 1;
        let Some(jac) = jacobian(&p, target, cfg.fd_step) else { break };
        let Some(dir) = newton_direction(&jac, &f) else { break };
        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..40 {
            let trial = [p[0] + alpha * dir[0], p[1] + alpha * dir[1], p[2] + alpha * dir[2]];
            if trial[2] > 0.0 {
                if let Some(ft) = residual(&trial, target) {
                    let et = norm(&ft);
                    if et < err {
                        accepted = Some((trial, ft, et));
                        break;
                    }
                }
            }
            alpha *= 0.5;
        }
        let Some((trial, ft, et)) = accepted else { break };
        p = trial;
        f = ft;
        err = et;
    }
    Run {
        point: p,
        error: err,
        iterations,
    }
}

fn newton_multistart(target: &GroupPoint, cfg: &ShootingConfig) -> Result<ShootingResult> {
    let mut starts: Vec<[f64; 3]> = reduced_seed(target).into_iter().collect();
    for &r in &cfg.r_grid {
        for k in 0..cfg.angle_count.max(1) {
            let psi = 2.0 * std::f64::consts::PI * k as f64 / cfg.angle_count.max(1) as f64;
            for &t in &cfg.t_grid {
                starts.push([r, psi, t]);
            }
        }
    }
    let runs: Vec<Run> = starts.par_iter().map(|s| newton_run(*s, target, cfg)).collect();

    let best_residual = runs.iter().map(|r| r.error).fold(f64::INFINITY, f64::min);
    let mut converged: Vec<&Run> = runs.iter().filter(|r| r.error <= cfg.tolerance).collect();
    if converged.is_empty() {
        return Err(Error::NoConvergence { best_residual });
    }
    // Longest first; ties broken by residual, then start order (stable sort).
    converged.sort_by(|a, b| b.point[2].total_cmp(&a.point[2]).then(a.error.total_cmp(&b.error)));
    let winner = converged[0];
    let mut alternatives: Vec<ExtremalSpec> = Vec::new();
    let mut seen = vec![winner.point[2]];
    for run in &converged[1..] {
        let t = run.point[2];
        if seen.iter().all(|s| (s - t).abs() > 1e-6 * s.abs().max(1.0)) {
            seen.push(t);
            alternatives.push(ExtremalSpec::new(canonical_params(&run.point), t));
        }
    }
    let spec = ExtremalSpec::new(canonical_params(&winner.point), winner.point[2]);
    Ok(ShootingResult {
        endpoint_error: spec.endpoint()?.coordinate_distance(target),
        distance: winner.point[2],
        spec,
        iterations: winner.iterations,
        converged_starts: converged.len(),
        alternatives,
    })
}

/// Parameters with `r ≥ 0`.
fn canonical_params(p: &[f64; 3]) -> ExtremalParams {
    if p[0] < 0.0 {
        params_from(&[-p[0], p[1] + std::f64::consts::PI, p[2]])
    } else {
        params_from(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremals::{eval_abnormal_p2, eval_normal_p2, ExtremalKind};

    #[test]
    fn straight_line_target() {
        let res = shoot_p2(&GroupPoint::new(2.0, 0.0, 0.0)).unwrap();
        assert_eq!(res.distance, 2.0);
        assert_eq!(
            res.spec.params,
            ExtremalParams::P2Normal {
                h1_0: -1.0,
                h2_0: 0.0,
                h3: 0.0
            }
        );
        assert_eq!(res.endpoint_error, 0.0);
    }

    #[test]
    fn round_trip_interior() {
        let h1_0 = -(2.0f64).sqrt();
        let target = eval_normal_p2(h1_0, 0.0, 1.0, 1.5).unwrap().q;
        let res = shoot_p2(&target).unwrap();
        assert!((res.distance - 1.5).abs() <= 1e-6 * 1.5, "{res:?}");
        assert!(res.endpoint_error <= 1e-8);
        assert_eq!(res.spec.kind(), ExtremalKind::Normal);
    }

    #[test]
    fn boundary_target_has_zero_distance() {
        let target = eval_abnormal_p2(0.0, 1.0, 1.0).unwrap().q;
        let res = shoot_p2(&target).unwrap();
        assert_eq!(res.distance, 0.0);
        assert_eq!(res.spec.kind(), ExtremalKind::Abnormal);
        assert!(res.endpoint_error <= 1e-9, "{res:?}");

        let target = eval_abnormal_p2(-0.6, -1.7, 0.9).unwrap().q;
        let res = shoot_p2(&target).unwrap();
        assert!(res.endpoint_error <= 1e-9, "{res:?}");

        let res = shoot_p2(&GroupPoint::new(3.0, -3.0, 0.0)).unwrap();
        assert_eq!(res.distance, 0.0);
        assert!(res.endpoint_error <= 1e-12);
    }

    #[test]
    fn outside_rejected() {
        assert_eq!(shoot_p2(&GroupPoint::new(1.0, 2.0, 0.0)), Err(Error::OutsideAttainableSet));
    }

    #[test]
    fn distance_verdicts() {
        assert_eq!(lorentz_distance_p2(&GroupPoint::new(1.0, 2.0, 0.0)).unwrap(), Distance::Undefined);
        let b = GroupPoint::new(1f64.sinh(), 1f64.cosh() - 1.0, 0.5 * (1.0 + 1f64.sinh()));
        assert_eq!(lorentz_distance_p2(&b).unwrap().value(), Some(0.0));
        assert_eq!(lorentz_distance_p1(&GroupPoint::new(1.0, 1.0, 1.0)), Distance::PositiveInfinity);
    }

    #[test]
    fn reduced_profile_is_increasing() {
        for rho in [0.01, 0.5, 2.0, 40.0, 3000.0] {
            let mut prev = 0.0;
            for k in -300..300 {
                let (_, z) = reduced_profile(rho, (k as f64 * 0.05).exp());
                // strictly increasing until it saturates at the boundary value in f64
                assert!(z > prev || (k > 100 && z >= prev * (1.0 - 1e-12)), "rho {rho} k {k}");
                prev = z;
            }
            let big_t = boundary_time(rho, 0.0).unwrap();
            assert!(prev <= 0.5 * (big_t + big_t.sinh()) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn reduced_seed_is_exact() {
        for (h2, h3, t) in [(0.3, 1.1, 2.0), (-1.5, -0.2, 4.0), (0.0, 2.0, 5.0), (1.9, -1.9, 0.1)] {
            let params = ExtremalParams::p2_normal_from(h2, h3);
            let q = params.eval(t).unwrap().q;
            let seed = reduced_seed(&q).unwrap();
            // z is flat in |h3| near the boundary, so the seed is only a start
            assert!((seed[2] - t).abs() <= 1e-6 * t, "{seed:?}");
            let polished = newton_run(seed, &q, &ShootingConfig::default());
            assert!(polished.error <= tolerance::SHOOT);
            assert!((polished.point[2] - t).abs() <= 1e-9 * t, "{:?}", polished.point);
        }
    }

    #[test]
    fn far_target_near_the_boundary() {
        let q = GroupPoint::new(3237.8023682661424, -3237.633430627826, -276.8389500862222);
        let res = shoot_p2(&q).unwrap();
        assert!(res.endpoint_error <= tolerance::SHOOT, "{res:?}");
    }

    #[test]
    fn linear_solver() {
        let a = [[2.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 4.0]];
        let x = solve3(a, [3.0, 5.0, 5.0]).unwrap();
        for (xi, e) in x.iter().zip([1.0, 1.0, 1.0]) {
            assert!((xi - e).abs() < 1e-14);
        }
        assert!(solve3([[1.0, 2.0, 3.0], [2.0, 4.0, 6.0], [0.0, 0.0, 1.0]], [1.0, 2.0, 3.0]).is_none());
    }
}
