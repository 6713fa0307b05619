use heisenberg_lorentz::reachability::{long_path_p1, z_bound};
use heisenberg_lorentz::verification::{draw_specs, DrawDomain};
use heisenberg_lorentz::*;
use proptest::prelude::*;

fn target() -> impl Strategy<Value = GroupPoint> {
    (-5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64).prop_map(|(x, y, z)| GroupPoint::new(x, y, z))
}

fn admissible(schedule: &ControlSchedule) -> bool {
    schedule.pieces.iter().all(|p| {
        [0.0, 0.5 * p.duration, p.duration]
            .iter()
            .all(|&tau| classify_control(ProblemId::P1, &p.law.control_at(ProblemId::P1, tau).unwrap()).is_admissible())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn planner_reaches_targets(q in target()) {
        let plan = plan_reach_p1(&q).unwrap();
        prop_assert!(admissible(&plan));
        let tr = integrate_schedule(ProblemId::P1, &GroupPoint::IDENTITY, &plan, &IntegratorConfig::default()).unwrap();
        prop_assert!(tr.endpoint().coordinate_distance(&q) <= tolerance::PLAN);
    }

    #[test]
    fn lengths_are_unbounded(q in target(), j in 1.0..30.0f64) {
        let sched = long_path_p1(&q, j).unwrap();
        let tr = integrate_schedule(ProblemId::P1, &GroupPoint::IDENTITY, &sched, &IntegratorConfig::default()).unwrap();
        prop_assert!(tr.endpoint().coordinate_distance(&q) <= tolerance::PLAN);
        prop_assert!(tr.total_length() >= j);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn shrinking_z_keeps_membership(x in 0.0..5.0f64, frac in -1.0..1.0f64, zf in -1.0..1.0f64, k in 0.0..1.0f64) {
        let y = frac * x;
        let t = boundary_time(x, y).unwrap();
        let q = GroupPoint::new(x, y, zf * z_bound(t));
        let shrunk = GroupPoint::new(x, y, k * q.z);
        if membership_p2(&q).verdict != Verdict::Outside {
            prop_assert_ne!(membership_p2(&shrunk).verdict, Verdict::Outside);
        }
    }

    #[test]
    fn points_beyond_the_bound_are_outside(x in 0.01..5.0f64, frac in -0.99..0.99f64, sign in prop_oneof![Just(1.0), Just(-1.0)]) {
        let y = frac * x;
        let t = boundary_time(x, y).unwrap();
        let q = GroupPoint::new(x, y, sign * 1.01 * z_bound(t));
        prop_assert_eq!(membership_p2(&q).verdict, Verdict::Outside);
    }

    #[test]
    fn negative_x_is_outside(x in -5.0..-1e-3f64, y in -5.0..5.0f64, z in -5.0..5.0f64) {
        prop_assert_eq!(membership_p2(&GroupPoint::new(x, y, z)).verdict, Verdict::Outside);
    }
}

#[test]
fn normal_endpoints_are_never_outside() {
    for spec in draw_specs(17, 1000, ProblemId::P2, ExtremalKind::Normal, &DrawDomain::default()) {
        let q = spec.endpoint().unwrap();
        assert_ne!(membership_p2(&q).verdict, Verdict::Outside, "{spec:?} -> {q:?}");
    }
}

#[test]
fn abnormal_endpoints_are_boundary() {
    let dom = DrawDomain {
        max_rapidity: Some(6.0),
        ..DrawDomain::default()
    };
    for spec in draw_specs(18, 200, ProblemId::P2, ExtremalKind::Abnormal, &dom) {
        let q = spec.endpoint().unwrap();
        let t = boundary_time(q.x, q.y).unwrap();
        assert!((q.z.abs() - z_bound(t)).abs() <= 1e-9 * z_bound(t).max(1.0), "{spec:?}");
        assert_eq!(membership_p2(&q).verdict, Verdict::Boundary, "{spec:?}");
    }
}

#[test]
fn loop_doubling_doubles_length() {
    let cfg = IntegratorConfig::default();
    let one = closed_timelike_loop_p1(3.0).unwrap();
    let two = one.repeated(2);
    let j1 = integrate_schedule(ProblemId::P1, &GroupPoint::IDENTITY, &one, &cfg).unwrap();
    let j2 = integrate_schedule(ProblemId::P1, &GroupPoint::IDENTITY, &two, &cfg).unwrap();
    assert!((j2.total_length() - 2.0 * j1.total_length()).abs() <= 1e-9 * j1.total_length());
    assert!(j2.endpoint().coordinate_norm() <= tolerance::PLAN);
}
