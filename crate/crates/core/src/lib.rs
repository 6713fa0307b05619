//! Closed-form extremals, an RK4 verification oracle, attainable sets and
//! Lorentzian distance for the two left-invariant Lorentzian problems on
//! the Heisenberg group.
//!
//! * [`group`]: group law, left-invariant frame, causal cones and the
//!   Pontryagin function.
//! * [`extremals`]: pointwise maximization of the Pontryagin function and
//!   the four closed-form extremal families.
//! * [`oracle`]: fixed-step RK4 integration of the Pontryagin system and of
//!   arbitrary admissible control schedules.
//! * [`reachability`]: attainable set of the second problem, controllability
//!   planner and closed timelike loops for the first.
//! * [`shooting`]: exponential-map inversion and Lorentzian distance.
//! * [`verification`]: seeded closed-form vs RK4 sweeps.
//! * [`ledger`]: where the implemented formulas differ from the printed ones.

pub mod error;
pub mod extremals;
pub mod group;
pub mod ledger;
pub mod oracle;
pub mod reachability;
pub mod shooting;
pub mod tolerance;
pub mod trajectory;
pub mod verification;

pub use error::{Error, Result};
pub use extremals::{
    covector_flow, eval_abnormal_p1, eval_abnormal_p2, eval_normal_p1, eval_normal_p2, maximize_control,
    sample_extremal, ControlDecision, CovectorFlow, ExtremalKind, ExtremalParams, ExtremalSpec, ExtremalState,
};
pub use group::{
    classify_control, frame_at, length_integrand, multiply, pontryagin_value, CanonicalCovector, ConeClass, Control,
    Covector, GroupPoint, ProblemId,
};
pub use oracle::{
    integrate_pontryagin, integrate_schedule, max_deviation, ControlLaw, ControlPiece, ControlSchedule, Deviation,
    IntegratorConfig,
};
pub use reachability::{
    boundary_time, closed_timelike_loop_p1, membership_p2, plan_reach_p1, Membership, Verdict,
};
pub use shooting::{lorentz_distance_p1, lorentz_distance_p2, shoot_p2, Distance, ShootingResult};
pub use trajectory::{Sample, Trajectory};
