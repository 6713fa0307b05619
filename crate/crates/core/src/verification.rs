//! Seeded sweeps comparing each closed-form family with RK4 integration of
//! its Pontryagin system on the same time grid.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::extremals::{ExtremalKind, ExtremalParams, ExtremalSpec};
use crate::group::ProblemId;
use crate::oracle::{integrate_pontryagin, max_deviation, Deviation, IntegratorConfig};
use crate::tolerance;
use crate::trajectory::{Sample, Trajectory};

/// Box the random parameters are drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DrawDomain {
    /// `|a| ≤ a_max` for P1 normal.
    pub a_max: f64,
    /// `|h2_0|, |h3| ≤ h_max` for P2.
    pub h_max: f64,
    pub t_min: f64,
    pub t_max: f64,
    /// Optional cap on `|h3|·t1` for P2 draws. P2 extremals grow like
    /// `exp(|h3| t)`, so a fixed absolute budget needs a bounded rapidity.
    pub max_rapidity: Option<f64>,
}

/// Rapidity cap used by [`DrawDomain::default`]. Past `|h3|·t1 ≈ 10` the
/// coordinates exceed `1e8` and a `1e-7` absolute budget is below the
/// rounding of the closed form itself.
pub const DEFAULT_MAX_RAPIDITY: f64 = 8.0;

impl Default for DrawDomain {
    fn default() -> Self {
        Self {
            a_max: 2.0,
            h_max: 2.0,
            t_min: 0.1,
            t_max: 10.0,
            max_rapidity: Some(DEFAULT_MAX_RAPIDITY),
        }
    }
}

impl DrawDomain {
    pub fn unbounded_rapidity(self) -> Self {
        Self {
            max_rapidity: None,
            ..self
        }
    }
}

/// One random extremal of the given family.
pub fn draw_spec<R: Rng>(rng: &mut R, problem: ProblemId, kind: ExtremalKind, dom: &DrawDomain) -> ExtremalSpec {
    let sym = |rng: &mut R, m: f64| rng.random_range(-m..=m);
    let params = match (problem, kind) {
        (ProblemId::P1, ExtremalKind::Abnormal) => ExtremalParams::P1Abnormal {
            theta0: rng.random_range(0.0..2.0 * PI),
        },
        (ProblemId::P1, ExtremalKind::Normal) => ExtremalParams::P1Normal {
            theta0: rng.random_range(0.0..2.0 * PI),
            a: sym(rng, dom.a_max),
        },
        (ProblemId::P2, ExtremalKind::Abnormal) => loop {
            let (h2_0, h3) = (sym(rng, dom.h_max), sym(rng, dom.h_max));
            if h2_0 != 0.0 || h3 != 0.0 {
                break ExtremalParams::P2Abnormal { h2_0, h3 };
            }
        },
        (ProblemId::P2, ExtremalKind::Normal) => {
            let h2_0 = sym(rng, dom.h_max);
            ExtremalParams::p2_normal_from(h2_0, sym(rng, dom.h_max))
        }
    };
    let mut t_max = dom.t_max;
    if let (Some(cap), ExtremalParams::P2Abnormal { h3, .. } | ExtremalParams::P2Normal { h3, .. }) =
        (dom.max_rapidity, params)
    {
        if h3 != 0.0 {
            t_max = t_max.min(cap / h3.abs()).max(dom.t_min);
        }
    }
    ExtremalSpec::new(params, rng.random_range(dom.t_min..=t_max))
}

/// `n` draws from a ChaCha8 stream seeded with `seed`.
pub fn draw_specs(seed: u64, n: usize, problem: ProblemId, kind: ExtremalKind, dom: &DrawDomain) -> Vec<ExtremalSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| draw_spec(&mut rng, problem, kind, dom)).collect()
}

/// RK4 trajectory of `spec` and the closed form sampled at the same times.
pub fn oracle_pair(spec: &ExtremalSpec, cfg: &IntegratorConfig) -> Result<(Trajectory, Trajectory)> {
    spec.validate()?;
    let h0 = spec.params.initial_covector();
    let rk = integrate_pontryagin(spec.problem(), spec.kind(), &h0, spec.duration, cfg)?;
    let normal = spec.kind() == ExtremalKind::Normal;
    let samples = rk
        .samples
        .iter()
        .map(|s| {
            let st = spec.params.eval(s.t)?;
            Ok(Sample {
                t: s.t,
                q: st.q,
                h: Some(st.h),
                u: st.u,
                length: if normal { s.t } else { 0.0 },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((Trajectory::new(spec.problem(), samples), rk))
}

/// Closed form vs RK4 at step `step`, recording at most about 2000 samples.
pub fn closed_form_deviation(spec: &ExtremalSpec, step: f64) -> Result<Deviation> {
    let steps = (spec.duration / step).ceil().max(1.0) as usize;
    let cfg = IntegratorConfig::with_step(step).recording_every((steps / 2000).max(1));
    let (exact, rk) = oracle_pair(spec, &cfg)?;
    max_deviation(&exact, &rk)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSettings {
    pub problem: ProblemId,
    pub kind: ExtremalKind,
    pub sweeps: usize,
    pub step: f64,
    pub seed: u64,
    pub budget: f64,
    pub domain: DrawDomain,
}

impl SweepSettings {
    pub fn new(problem: ProblemId, kind: ExtremalKind, sweeps: usize, step: f64, seed: u64) -> Self {
        Self {
            problem,
            kind,
            sweeps,
            step,
            seed,
            budget: tolerance::DEVIATION,
            domain: DrawDomain::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DrawOutcome {
    pub index: usize,
    pub spec: ExtremalSpec,
    pub deviation: Deviation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub settings: SweepSettings,
    pub worst_deviation: f64,
    pub worst_covector_deviation: Option<f64>,
    pub worst_index: Option<usize>,
    pub within_budget: bool,
    pub draws: Vec<DrawOutcome>,
}

/// Runs the sweep; draws are generated sequentially from the seed and
/// evaluated in parallel, and the report lists them in draw order.
pub fn verify_family(settings: &SweepSettings) -> Result<SweepReport> {
    if !(settings.step > 0.0 && settings.step.is_finite()) {
        return Err(Error::InvalidParameter(format!("step must be positive, got {}", settings.step)));
    }
    let specs = draw_specs(settings.seed, settings.sweeps, settings.problem, settings.kind, &settings.domain);
    let draws = specs
        .par_iter()
        .enumerate()
        .map(|(index, spec)| {
            Ok(DrawOutcome {
                index,
                spec: *spec,
                deviation: closed_form_deviation(spec, settings.step)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut worst = 0.0;
    let mut worst_index = None;
    let mut worst_cov: Option<f64> = Some(0.0);
    for d in &draws {
        if d.deviation.state > worst || worst_index.is_none() {
            worst = d.deviation.state;
            worst_index = Some(d.index);
        }
        worst_cov = match (worst_cov, d.deviation.covector) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
    }
    if draws.is_empty() {
        worst_cov = None;
    }
    Ok(SweepReport {
        settings: *settings,
        worst_deviation: worst,
        worst_covector_deviation: worst_cov,
        worst_index,
        within_budget: worst <= settings.budget,
        draws,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn draws_are_reproducible() {
        let dom = DrawDomain::default();
        let a = draw_specs(7, 20, ProblemId::P2, ExtremalKind::Normal, &dom);
        let b = draw_specs(7, 20, ProblemId::P2, ExtremalKind::Normal, &dom);
        assert_eq!(a, b);
        for s in &a {
            s.validate().unwrap();
            assert!(s.duration >= dom.t_min && s.duration <= dom.t_max);
            if let ExtremalParams::P2Normal { h3, .. } = s.params {
                assert!(h3.abs() * s.duration <= DEFAULT_MAX_RAPIDITY + 1e-12 || s.duration == dom.t_min);
            }
        }
    }

    #[test]
    fn small_sweep_passes_and_is_ordered() {
        let mut st = SweepSettings::new(ProblemId::P1, ExtremalKind::Abnormal, 4, 1e-3, 1);
        st.domain.t_max = 2.0;
        let r = verify_family(&st).unwrap();
        assert_eq!(r.draws.iter().map(|d| d.index).collect::<Vec<_>>(), vec![0, 1, 2, 3]);
        assert!(r.within_budget, "{}", r.worst_deviation);
        assert_eq!(r, verify_family(&st).unwrap());
    }

    #[test]
    fn coarse_step_fails_budget_without_error() {
        let mut st = SweepSettings::new(ProblemId::P1, ExtremalKind::Normal, 3, 0.1, 2);
        st.domain.t_max = 5.0;
        let r = verify_family(&st).unwrap();
        assert!(!r.within_budget);
    }
}
