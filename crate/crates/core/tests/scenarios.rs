use std::f64::consts::{FRAC_PI_2, PI};

use pulseloop::experiments::{
    curve_residual, run_case_iii, run_fluctuated_composite, run_ha_hb_comparison, sweep, ParamGrid, SweepScenario,
};
use pulseloop::papercheck::{piecewise_reference_profile, strong_global_profile};
use pulseloop::su2::wrap_phase;
use pulseloop::{
    bloch_to_state, global_sine_profile, parse_sequence, piecewise_sine_profile, propagate, BlochVector,
    FluctuatedPulse, FluctuationProfile, GridSpec, PulseSequence, StateVector,
};

fn state_gap(a: &StateVector, b: &StateVector) -> f64 {
    let (x, y) = (a.amplitudes(), b.amplitudes());
    (x[0] - y[0]).norm().max((x[1] - y[1]).norm())
}

#[test]
fn propagated_path_follows_the_fluctuated_curve() {
    let seq = PulseSequence::composite_90x180y90x();
    for p in [piecewise_reference_profile(), global_sine_profile(0.3, 0.2, 3, 7).unwrap()] {
        let h = FluctuatedPulse::new(seq.clone(), p.clone());
        let traj = propagate(&h, &bloch_to_state(&BlochVector::PLUS_Y), &GridSpec::default()).unwrap();
        let r = curve_residual(&traj, &seq, &p).unwrap();
        assert!(r < 1e-6, "residual {r}");
    }
}

#[test]
fn redundant_breakpoints_do_not_change_the_result() {
    let grid = GridSpec::default();
    let psi0 = bloch_to_state(&BlochVector::PLUS_Z);
    let single = parse_sequence("180x").unwrap();
    let split = parse_sequence("90x 90x").unwrap();
    let a = propagate(&single, &psi0, &grid).unwrap();
    let b = propagate(&split, &psi0, &grid).unwrap();
    assert!(state_gap(a.final_state(), b.final_state()) < 1e-10);

    let seq = PulseSequence::composite_90x180y90x();
    let c = propagate(&seq, &psi0, &grid).unwrap();
    let d = propagate(&seq, &psi0, &grid.clone().with_breakpoints(&[0.1, 0.5, 0.9])).unwrap();
    assert!(state_gap(c.final_state(), d.final_state()) < 1e-10);
}

#[test]
fn rk4_converges_at_fourth_order() {
    let h = FluctuatedPulse::new(PulseSequence::composite_90x180y90x(), global_sine_profile(0.2, 0.2, 2, 3).unwrap());
    let psi0 = bloch_to_state(&BlochVector::PLUS_Z);
    let reference = propagate(&h, &psi0, &GridSpec::new(16384).unwrap()).unwrap();
    let err = |n: usize| {
        let t = propagate(&h, &psi0, &GridSpec::new(n).unwrap()).unwrap();
        state_gap(t.final_state(), reference.final_state())
    };
    let (e1, e2) = (err(256), err(512));
    let ratio = e1 / e2;
    assert!((12.0..20.0).contains(&ratio), "errors {e1:e} {e2:e}, ratio {ratio}");
}

#[test]
fn case_iii_examples() {
    let grid = GridSpec::default();
    let f = global_sine_profile(0.05, 0.05, 17, 23).unwrap();
    let r = run_case_iii(&f, &f, &grid);
    assert!(r.failure.is_none());
    let size = r.check("abs_gamma_dynamical_closed_form").unwrap().observed[0];
    assert!(size < 0.05, "{size}");
    assert!(r.check("trajectory_vs_closed_form").unwrap().observed[0] < 1e-6);

    let strong = strong_global_profile();
    let r = run_case_iii(&strong, &strong, &grid);
    assert!(r.check("abs_gamma_dynamical_trajectory").unwrap().observed[0] < 1e-6);
    assert!(r.check("abs_gamma_dynamical_closed_form").unwrap().observed[0] < 1e-6);
}

#[test]
fn zero_profile_hb_reaches_plus_x() {
    let r = run_ha_hb_comparison(&FluctuationProfile::zero(), &GridSpec::default());
    assert!(r.passed(), "{}", r.to_json());
    let end = r.endpoint("hb_fluctuated").unwrap();
    assert!(end.max_deviation(&BlochVector::PLUS_X) < 1e-6);
    // H_B's drive is not orthogonal to its path; H_A's is.
    assert!(r.check("hb_max_axis_overlap").unwrap().observed[0] > 0.1);
    assert!(r.check("ha_max_axis_overlap").unwrap().observed[0] < 1e-8);
}

#[test]
fn piecewise_family_stays_geometric() {
    let params = ParamGrid { f0: vec![0.0, 0.1, 0.5], g0: vec![0.0, 0.1, 0.5], xi: vec![5], eta: vec![5] };
    let rows = sweep(SweepScenario::PiecewiseSine, &params, &GridSpec::default()).unwrap();
    assert_eq!(rows.len(), 9);
    for row in &rows {
        let g = row.report.gate.as_ref().expect("cyclic");
        assert!(wrap_phase(g.plus.gamma_geometric + FRAC_PI_2).abs() < 1e-5, "f0 {} g0 {}", row.f0, row.g0);
    }
}

#[test]
fn sweep_is_deterministic_and_matches_single_runs() {
    let params = ParamGrid { f0: vec![0.05, 0.2], g0: vec![0.1], xi: vec![3, 4], eta: vec![] };
    let grid = GridSpec::new(2048).unwrap();
    let a = sweep(SweepScenario::GlobalSine, &params, &grid).unwrap();
    let b = sweep(SweepScenario::GlobalSine, &params, &grid).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());

    let single = ParamGrid { f0: vec![0.2], g0: vec![0.1], xi: vec![4], eta: vec![4] };
    let one = sweep(SweepScenario::GlobalSine, &single, &grid).unwrap();
    let direct = run_fluctuated_composite(&global_sine_profile(0.2, 0.1, 4, 4).unwrap(), &grid);
    assert_eq!(serde_json::to_string(&one[0].report).unwrap(), serde_json::to_string(&direct).unwrap());
    assert_eq!(serde_json::to_string(&a[3].report).unwrap(), serde_json::to_string(&direct).unwrap());
}

#[test]
fn asymmetric_profile_is_reported_not_judged() {
    let seq = PulseSequence::composite_90x180y90x();
    // g on the first piece only breaks both symmetries.
    let g_src = piecewise_sine_profile(0.0, 0.4, 1, 1, &[0.0, 0.25, 1.0]).unwrap();
    let f_src = piecewise_sine_profile(0.1, 0.0, 2, 1, seq.breakpoints()).unwrap();
    let p = FluctuationProfile::combine(&f_src, &g_src);
    let r = run_fluctuated_composite(&p, &GridSpec::default());
    assert!(r.passed(), "{}", r.to_json());
    let gd = r.check("gamma_dynamical_plus").unwrap();
    assert!(gd.expected.is_none());
    assert!(gd.observed[0].abs() > 1e-3);
    let omega = r.gate.as_ref().unwrap().solid_angle_plus.unwrap();
    assert!((omega - PI).abs() > 1e-3);
}
