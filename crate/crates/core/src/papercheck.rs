//! End-to-end reproduction checks, one per published result.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;

use serde::Serialize;

use crate::error::Result;
use crate::experiments::{
    composite_compatible_tabulated, run_fluctuated_composite, run_ha_hb_comparison, run_ideal_composite, sweep,
    FluctuatedHa, FluctuatedHb, ParamGrid, ScenarioReport, SweepScenario, Verdict,
};
use crate::fluctuation::{
    fluctuated_curve_at, fluctuated_hamiltonian_at, global_sine_profile, piecewise_sine_profile, BasisSign,
    FluctuatedPulse, FluctuationProfile, SymmetryClass,
};
use crate::phase::{decompose_phase, dynamical_phase, dynamical_phase_closed_form, PhaseDecomposition};
use crate::propagator::{propagate, reference_unitary, ConstantHamiltonian, GridSpec, Hamiltonian, DEFAULT_CYCLIC_TOL};
use crate::pulse::PulseSequence;
use crate::su2::{bloch_to_state, su2_rotation, wrap_phase, BlochVector, HamiltonianSample, StateVector};
use crate::tolerances as tol;

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub title: String,
    pub verdict: Verdict,
    pub detail: String,
}

impl CriterionResult {
    fn judged(id: u32, title: &str, pass: bool, detail: String) -> Self {
        let verdict = if pass { Verdict::Pass } else { Verdict::Fail };
        Self { id, title: title.to_string(), verdict, detail }
    }

    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Reported => "INFO",
        };
        write!(f, "[{tag}] {:>2}. {}: {}", self.id, self.title, self.detail)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PapercheckReport {
    pub steps_per_unit_time: usize,
    pub criteria: Vec<CriterionResult>,
}

impl PapercheckReport {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(CriterionResult::passed)
    }
}

/// `f0 = g0 = 0.1`, `ξ = η = 5` on the pieces of the composite pulse.
pub fn piecewise_reference_profile() -> FluctuationProfile {
    let seq = PulseSequence::composite_90x180y90x();
    piecewise_sine_profile(0.1, 0.1, 5, 5, seq.breakpoints()).expect("valid parameters")
}

/// `f0 = g0 = 0.1`, `ξ = η = 5` global sine.
pub fn global_reference_profile() -> FluctuationProfile {
    global_sine_profile(0.1, 0.1, 5, 5).expect("valid parameters")
}

/// `f0 = g0 = 1`, `ξ = η = 10` global sine, used for `H̃_A` / `H̃_B`.
pub fn strong_global_profile() -> FluctuationProfile {
    global_sine_profile(1.0, 1.0, 10, 10).expect("valid parameters")
}

/// Collects the named checks; fails if any is missing or failed.
fn require(report: &ScenarioReport, names: &[&str]) -> (bool, String) {
    if let Some(reason) = &report.failure {
        return (false, reason.clone());
    }
    let mut ok = true;
    let mut parts = Vec::new();
    for name in names {
        match report.check(name) {
            Some(c) => {
                ok &= c.passed();
                let dev = c.deviation.map(|d| format!("{d:.2e}")).unwrap_or_else(|| "-".into());
                parts.push(format!("{name} dev {dev}"));
            }
            None => {
                ok = false;
                parts.push(format!("{name} missing"));
            }
        }
    }
    (ok, parts.join(", "))
}

fn symmetry_clause(report: &ScenarioReport, expected: SymmetryClass) -> (bool, String) {
    match report.symmetry {
        Some(s) => (s == expected, format!("class {s:?} (want {expected:?})")),
        None => (false, "class missing".into()),
    }
}

pub fn criterion_1(grid: &GridSpec) -> CriterionResult {
    let r = run_ideal_composite(grid);
    let (ok, detail) = require(
        &r,
        &["gate_vs_y_pi", "gamma_plus", "gamma_minus", "gamma_dynamical_plus", "gamma_dynamical_minus"],
    );
    CriterionResult::judged(1, "ideal 90x180y90x gate and phases", ok, detail)
}

pub fn criterion_2(grid: &GridSpec) -> CriterionResult {
    let r = run_ideal_composite(grid);
    let (ok, detail) = require(&r, &["solid_angle_plus", "geometric_vs_half_solid_angle"]);
    let omega = r.check("solid_angle_plus").map(|c| c.observed[0]).unwrap_or(f64::NAN);
    CriterionResult::judged(2, "ideal solid angle", ok, format!("Omega {omega:.9}, {detail}"))
}

pub fn criterion_3(grid: &GridSpec) -> CriterionResult {
    let r = run_fluctuated_composite(&piecewise_reference_profile(), grid);
    let (ok, detail) = require(
        &r,
        &[
            "cyclicity_plus",
            "cyclicity_minus",
            "gamma_plus",
            "gamma_minus",
            "gamma_dynamical_plus",
            "gamma_dynamical_minus",
            "gamma_dynamical_closed_form_plus",
        ],
    );
    let (sym_ok, sym) = symmetry_clause(&r, SymmetryClass::ReflectSymmetric);
    CriterionResult::judged(3, "piecewise sine profile phases", ok && sym_ok, format!("{sym}, {detail}"))
}

pub fn criterion_4(grid: &GridSpec) -> CriterionResult {
    let r = run_fluctuated_composite(&global_reference_profile(), grid);
    let (ok, detail) = require(
        &r,
        &["gamma_plus", "gamma_minus", "gamma_geometric_plus", "gamma_geometric_minus", "solid_angle_plus"],
    );
    let (sym_ok, sym) = symmetry_clause(&r, SymmetryClass::ShiftSymmetric);
    CriterionResult::judged(4, "global sine profile phases", ok && sym_ok, format!("{sym}, {detail}"))
}

fn endpoint_text(r: &ScenarioReport, label: &str) -> String {
    r.endpoint(label).map(|b| b.to_string()).unwrap_or_else(|| "missing".into())
}

pub fn criterion_5(grid: &GridSpec) -> CriterionResult {
    let r = run_ha_hb_comparison(&strong_global_profile(), grid);
    let (ok, detail) = require(&r, &["ha_fluctuated_endpoint"]);
    CriterionResult::judged(
        5,
        "H_A endpoint under fluctuation",
        ok,
        format!("end {}, {detail}", endpoint_text(&r, "ha_fluctuated")),
    )
}

pub fn criterion_6(grid: &GridSpec) -> CriterionResult {
    let r = run_ha_hb_comparison(&strong_global_profile(), grid);
    let (ok, detail) = require(&r, &["hb_fluctuated_endpoint"]);
    let mut text = format!("end {} vs (0.95, -0.26, -0.16), {detail}", endpoint_text(&r, "hb_fluctuated"));
    // Same amplitudes with one period per ξ over the whole pulse.
    let alt = piecewise_sine_profile(1.0, 1.0, 10, 10, &[0.0, 1.0])
        .and_then(|p| propagate(&FluctuatedHb { profile: p }, &StateVector::ground(), grid));
    if let Ok(traj) = alt {
        text.push_str(&format!("; with sin(2*pi*10*t) instead: end {}", traj.final_bloch()));
    }
    CriterionResult::judged(6, "H_B endpoint under fluctuation", ok, text)
}

/// `max |m̃·ñ|` over cell midpoints of the analytic fluctuated curve.
pub fn max_orthogonality_defect(profile: &FluctuationProfile, points: usize) -> Result<f64> {
    let seq = PulseSequence::composite_90x180y90x();
    let mut worst = 0.0f64;
    for k in 0..points {
        let t = (k as f64 + 0.5) / points as f64;
        let m = fluctuated_hamiltonian_at(&seq, profile, t)?.axis;
        for sign in [BasisSign::Plus, BasisSign::Minus] {
            worst = worst.max(m.dot(&fluctuated_curve_at(&seq, profile, t, sign)?).abs());
        }
    }
    Ok(worst)
}

pub fn criterion_7(_grid: &GridSpec) -> CriterionResult {
    let profiles = [
        ("zero", FluctuationProfile::zero()),
        ("piecewise", piecewise_reference_profile()),
        ("global", global_reference_profile()),
        ("global_strong", strong_global_profile()),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, p) in &profiles {
        match max_orthogonality_defect(p, 1024) {
            Ok(d) => {
                ok &= d < tol::ORTHOGONALITY;
                parts.push(format!("{name} {d:.1e}"));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("{name} error: {e}"));
            }
        }
    }
    CriterionResult::judged(7, "drive orthogonal to the curve", ok, parts.join(", "))
}

/// Deterministic low-discrepancy numbers in `[-0.5, 0.5)`.
fn weyl(index: usize, stream: usize) -> f64 {
    let alpha = [SQRT_2, 3f64.sqrt(), 5f64.sqrt(), 7f64.sqrt()][stream % 4];
    ((index as f64 + 1.0) * alpha).fract() - 0.5
}

/// Twenty closing tabulated profiles with deterministic coefficients.
pub fn weyl_tabulated_profiles() -> Vec<FluctuationProfile> {
    (0..20)
        .map(|i| {
            let f_modes: Vec<f64> = (0..3).map(|k| 1.2 * weyl(7 * i + k, 0)).collect();
            let g_modes: Vec<f64> = (0..4).map(|k| 0.8 * weyl(11 * i + k, 1 + (i % 3))).collect();
            composite_compatible_tabulated(&f_modes, &g_modes, 256).expect("256 is a multiple of 4")
        })
        .collect()
}

/// Trajectory quadrature vs closed-form dynamical phase for `n+`.
pub fn dynamical_oracle_gap(profile: &FluctuationProfile, grid: &GridSpec) -> Result<(f64, f64)> {
    let h = FluctuatedPulse::new(PulseSequence::composite_90x180y90x(), profile.clone());
    let traj = propagate(&h, &bloch_to_state(&BlochVector::PLUS_Y), grid)?;
    let quad = dynamical_phase(&traj, &h)?;
    let closed = dynamical_phase_closed_form(profile, BasisSign::Plus, grid);
    Ok(((quad - closed).abs(), closed.abs()))
}

pub fn criterion_8_with(profiles: &[FluctuationProfile], grid: &GridSpec) -> CriterionResult {
    let mut worst = 0.0f64;
    let mut largest = 0.0f64;
    for (i, p) in profiles.iter().enumerate() {
        match dynamical_oracle_gap(p, grid) {
            Ok((gap, size)) => {
                worst = worst.max(gap);
                largest = largest.max(size);
            }
            Err(e) => return CriterionResult::judged(8, "dynamical phase oracles agree", false, format!("profile {i}: {e}")),
        }
    }
    CriterionResult::judged(
        8,
        "dynamical phase oracles agree",
        worst <= tol::DYNAMICAL_CROSS_ORACLE && !profiles.is_empty(),
        format!("{} profiles, max gap {worst:.2e}, max |gamma_d| {largest:.3}", profiles.len()),
    )
}

pub fn criterion_8(grid: &GridSpec) -> CriterionResult {
    criterion_8_with(&weyl_tabulated_profiles(), grid)
}

fn property_hamiltonians() -> Vec<(&'static str, Box<dyn Hamiltonian>, BlochVector)> {
    let seq = PulseSequence::composite_90x180y90x();
    vec![
        ("ideal", Box::new(seq.clone()), BlochVector::PLUS_Y),
        ("piecewise", Box::new(FluctuatedPulse::new(seq.clone(), piecewise_reference_profile())), BlochVector::PLUS_Y),
        ("global", Box::new(FluctuatedPulse::new(seq, global_reference_profile())), BlochVector::PLUS_Y),
        ("ha", Box::new(FluctuatedHa { profile: strong_global_profile() }), BlochVector::PLUS_Z),
        ("hb", Box::new(FluctuatedHb { profile: strong_global_profile() }), BlochVector::PLUS_Z),
    ]
}

fn state_distance(a: &StateVector, b: &StateVector) -> f64 {
    let (x, y) = (a.amplitudes(), b.amplitudes());
    (x[0] - y[0]).norm().max((x[1] - y[1]).norm())
}

fn phase_distance(a: &PhaseDecomposition, b: &PhaseDecomposition) -> f64 {
    [
        wrap_phase(a.gamma_total - b.gamma_total).abs(),
        (a.gamma_dynamical - b.gamma_dynamical).abs(),
        wrap_phase(a.gamma_geometric - b.gamma_geometric).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

/// Largest final-state change when the grid is doubled, per Hamiltonian.
pub fn grid_doubling_gaps(grid: &GridSpec) -> Result<Vec<(&'static str, f64)>> {
    let fine = grid.doubled();
    property_hamiltonians()
        .into_iter()
        .map(|(name, h, n0)| {
            let psi0 = bloch_to_state(&n0);
            let a = propagate(h.as_ref(), &psi0, grid)?;
            let b = propagate(h.as_ref(), &psi0, &fine)?;
            Ok((name, state_distance(a.final_state(), b.final_state())))
        })
        .collect()
}

/// Global phases used by the gauge check.
pub fn gauge_phases() -> Vec<f64> {
    (0..10).map(|k| 2.0 * PI * (weyl(k, 2) + 0.5)).collect()
}

pub fn max_gauge_change(grid: &GridSpec, phases: &[f64]) -> Result<f64> {
    let seq = PulseSequence::composite_90x180y90x();
    let cases = [
        FluctuationProfile::zero(),
        piecewise_reference_profile(),
        composite_compatible_tabulated(&[0.4, -0.3], &[0.6, 0.2], 256)?,
    ];
    let mut worst = 0.0f64;
    for p in cases {
        let h = FluctuatedPulse::new(seq.clone(), p);
        for n in [BlochVector::PLUS_Y, -BlochVector::PLUS_Y] {
            let psi0 = bloch_to_state(&n);
            let base = decompose_phase(&propagate(&h, &psi0, grid)?, &h, DEFAULT_CYCLIC_TOL)?;
            for &alpha in phases {
                let shifted = propagate(&h, &psi0.with_global_phase(alpha), grid)?;
                worst = worst.max(phase_distance(&base, &decompose_phase(&shifted, &h, DEFAULT_CYCLIC_TOL)?));
            }
        }
    }
    Ok(worst)
}

/// Constant fields checked against the closed-form rotation.
pub fn constant_field_samples() -> Vec<HamiltonianSample> {
    (0..8)
        .map(|k| {
            let axis = BlochVector::in_plane(2.0 * PI * (weyl(k, 3) + 0.5));
            HamiltonianSample::new(3.0 + 20.0 * (weyl(k, 0) + 0.5), axis, 10.0 * weyl(k, 1))
        })
        .collect()
}

pub fn max_constant_field_deviation(grid: &GridSpec, samples: &[HamiltonianSample]) -> Result<f64> {
    let mut worst = 0.0f64;
    for s in samples {
        let [x, y, z] = s.field();
        let magnitude = (x * x + y * y + z * z).sqrt();
        let expected = su2_rotation(&BlochVector::from_direction(x, y, z)?, magnitude);
        let u = reference_unitary(&ConstantHamiltonian(*s), grid)?;
        worst = worst.max(u.max_deviation(&expected));
    }
    Ok(worst)
}

pub fn criterion_9(grid: &GridSpec) -> CriterionResult {
    let title = "property suite";
    let run = || -> Result<(bool, String)> {
        let mut norm = 0.0f64;
        for (_, h, n0) in property_hamiltonians() {
            norm = norm.max(propagate(h.as_ref(), &bloch_to_state(&n0), grid)?.max_norm_drift());
        }
        let gauge = max_gauge_change(grid, &gauge_phases())?;
        let doubling = grid_doubling_gaps(grid)?;
        let worst_doubling = doubling.iter().map(|d| d.1).fold(0.0, f64::max);
        let constant = max_constant_field_deviation(grid, &constant_field_samples())?;
        let ok = norm <= tol::NORM
            && gauge <= tol::GAUGE
            && worst_doubling <= tol::GRID_DOUBLING
            && constant <= tol::CONSTANT_PROPAGATION;
        let per_case: Vec<String> = doubling.iter().map(|(n, d)| format!("{n} {d:.1e}")).collect();
        Ok((
            ok,
            format!(
                "norm {norm:.1e}, gauge {gauge:.1e}, doubling [{}], constant {constant:.1e}",
                per_case.join(", ")
            ),
        ))
    };
    match run() {
        Ok((ok, detail)) => CriterionResult::judged(9, title, ok, detail),
        Err(e) => CriterionResult::judged(9, title, false, e.to_string()),
    }
}

/// Geometric phase shift over built-in families; never blocking.
pub fn criterion_10(grid: &GridSpec) -> CriterionResult {
    let params = ParamGrid { f0: vec![0.0, 0.1, 0.5], g0: vec![0.0, 0.1, 0.5], xi: vec![5, 10], eta: vec![] };
    let mut parts = Vec::new();
    for scenario in [SweepScenario::PiecewiseSine, SweepScenario::GlobalSine] {
        let text = match sweep(scenario, &params, grid) {
            Ok(rows) => {
                let shifts: Vec<f64> = rows
                    .iter()
                    .filter_map(|r| r.report.check("geometric_shift_plus").map(|c| c.observed[0].abs()))
                    .collect();
                let worst = shifts.iter().copied().fold(0.0, f64::max);
                format!("{} {}/{} points, max |shift| {worst:.2e}", scenario.name(), shifts.len(), rows.len())
            }
            Err(e) => format!("{}: {e}", scenario.name()),
        };
        parts.push(text);
    }
    CriterionResult {
        id: 10,
        title: "geometric phase conjecture probe".into(),
        verdict: Verdict::Reported,
        detail: parts.join("; "),
    }
}

pub fn run_papercheck(grid: &GridSpec) -> PapercheckReport {
    let criteria: [fn(&GridSpec) -> CriterionResult; 10] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
    ];
    PapercheckReport {
        steps_per_unit_time: grid.steps_per_unit_time,
        criteria: criteria.iter().map(|c| c(grid)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weyl_profiles_are_distinct_and_close() {
        let ps = weyl_tabulated_profiles();
        assert_eq!(ps.len(), 20);
        assert_ne!(ps[0].f(0.4), ps[1].f(0.4));
        for p in &ps {
            assert!(crate::fluctuation::check_boundary_conditions(p).satisfied);
        }
    }

    #[test]
    fn gauge_phases_span_the_circle() {
        let phases = gauge_phases();
        assert_eq!(phases.len(), 10);
        assert!(phases.iter().all(|a| (0.0..2.0 * PI).contains(a)));
    }

    #[test]
    fn orthogonality_defect_is_tiny_for_zero_profile() {
        assert!(max_orthogonality_defect(&FluctuationProfile::zero(), 64).unwrap() < 1e-14);
    }
}
