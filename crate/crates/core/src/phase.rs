//! Total, dynamical and geometric (Aharonov–Anandan) phases of cyclic
//! evolutions, enclosed solid angles, and gate reconstruction from the
//! phases of a basis pair.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::fluctuation::{composite_theta, BasisSign, FluctuatedPulse, FluctuationProfile};
use crate::propagator::{
    cyclicity_check, propagate, reference_unitary, GridSpec, Hamiltonian, Side, Trajectory, DEFAULT_CYCLIC_TOL,
};
use crate::pulse::PulseSequence;
use crate::su2::{bloch_to_state, energy_expectation, wrap_phase, BlochVector, Unitary2, C64};

/// Breakpoint positions must agree to this precision between a trajectory
/// and the Hamiltonian it is integrated against.
const GRID_MATCH_TOL: f64 = 1e-12;
/// Closed paths must return to within this distance of their start.
pub const PATH_CLOSURE_TOL: f64 = 1e-6;
/// Maximum great-circle step between consecutive path points.
pub const PATH_MAX_STEP: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseDecomposition {
    pub gamma_total: f64,
    pub gamma_dynamical: f64,
    pub gamma_geometric: f64,
    pub fidelity: f64,
}

/// Composite Simpson rule over one sub-interval with an even number of
/// equal steps.
fn simpson(values: &[f64], step: f64) -> f64 {
    debug_assert!(values.len() >= 3 && values.len() % 2 == 1);
    let n = values.len() - 1;
    let mut acc = values[0] + values[n];
    for (k, v) in values.iter().enumerate().take(n).skip(1) {
        acc += if k % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    acc * step / 3.0
}

/// Integrates `integrand(t, side)` over `[0, 1]` split at `bounds`, taking
/// left limits at the right end of every piece.
fn piecewise_simpson(times: &[f64], marks: &[usize], mut integrand: impl FnMut(usize, Side) -> f64) -> Result<f64> {
    let mut total = 0.0;
    for w in marks.windows(2) {
        let (i0, i1) = (w[0], w[1]);
        if (i1 - i0) % 2 != 0 {
            return Err(Error::GridMismatch(format!(
                "sub-interval [{}, {}] has an odd number of steps",
                times[i0], times[i1]
            )));
        }
        let values: Vec<f64> = (i0..=i1)
            .map(|k| integrand(k, if k == i1 { Side::Left } else { Side::Right }))
            .collect();
        let step = (times[i1] - times[i0]) / (i1 - i0) as f64;
        total += simpson(&values, step);
    }
    Ok(total)
}

/// `γ_d = -∫₀¹ ⟨ψ(t)|H(t)|ψ(t)⟩ dt` by Simpson quadrature on the
/// trajectory's own nodes.
pub fn dynamical_phase(traj: &Trajectory, h: &dyn Hamiltonian) -> Result<f64> {
    let bounds = traj.boundary_times();
    for bp in h.breakpoints().into_iter().filter(|t| *t > 0.0 && *t < 1.0) {
        if !bounds.iter().any(|b| (b - bp).abs() <= GRID_MATCH_TOL) {
            return Err(Error::GridMismatch(format!(
                "Hamiltonian breakpoint {bp} is not a boundary of the trajectory"
            )));
        }
    }
    let times = traj.times();
    let states = traj.states();
    let integral = piecewise_simpson(times, traj.boundary_nodes(), |k, side| {
        energy_expectation(&states[k], &h.sample(times[k], side))
    })?;
    Ok(-integral)
}

/// `γ̃_d± = ∓½ ∫₀¹ g'(t) cos(θ(t) + f(t)) dt` for the composite pulse,
/// evaluated directly from the profile.
pub fn dynamical_phase_closed_form(p: &FluctuationProfile, sign: BasisSign, grid: &GridSpec) -> f64 {
    let mut bounds = p.breakpoints();
    bounds.extend_from_slice(&[0.25, 0.75]);
    let (times, marks) = grid.nodes(&bounds);
    let integral = piecewise_simpson(&times, &marks, |k, side| {
        let t = times[k];
        p.dg(t, side) * (composite_theta(t) + p.f(t)).cos()
    })
    .expect("grid nodes always have even sub-intervals");
    -sign.value() * 0.5 * integral
}

/// Splits the phase acquired by a cyclic evolution into its dynamical and
/// geometric parts.
pub fn decompose_phase(traj: &Trajectory, h: &dyn Hamiltonian, tol: f64) -> Result<PhaseDecomposition> {
    let c = cyclicity_check(traj, tol);
    if !c.cyclic {
        return Err(Error::NonCyclic { fidelity: c.fidelity, total_phase: c.total_phase });
    }
    let dynamical = dynamical_phase(traj, h)?;
    Ok(PhaseDecomposition {
        gamma_total: c.total_phase,
        gamma_dynamical: wrap_phase(dynamical),
        gamma_geometric: wrap_phase(c.total_phase - dynamical),
        fidelity: c.fidelity,
    })
}

fn cross(a: &BlochVector, b: &BlochVector) -> [f64; 3] {
    a.cross(b)
}

/// Signed solid angle enclosed by a closed path on the unit sphere; positive
/// when the path runs counter-clockwise as seen from outside the enclosed
/// region.
///
/// The path is fanned into triangles from a reference direction (the
/// normalized centroid, or the path's area vector when the centroid
/// vanishes) and the signed triangle areas are summed.
pub fn solid_angle(path: &[BlochVector]) -> Result<f64> {
    if path.len() < 4 {
        return Err(domain("a closed path needs at least four points"));
    }
    let first = path[0];
    let last = path[path.len() - 1];
    if first.max_deviation(&last) > PATH_CLOSURE_TOL {
        return Err(domain(format!("path is open: starts at {first}, ends at {last}")));
    }
    if let Some((k, w)) = path.windows(2).enumerate().find(|(_, w)| w[0].angle_to(&w[1]) >= PATH_MAX_STEP) {
        return Err(domain(format!(
            "path is too sparse: step {k} spans {:.4} rad (limit {PATH_MAX_STEP})",
            w[0].angle_to(&w[1])
        )));
    }

    let mut centroid = [0.0; 3];
    let mut area = [0.0; 3];
    for w in path.windows(2) {
        let c = cross(&w[0], &w[1]);
        for i in 0..3 {
            centroid[i] += w[0].components()[i];
            area[i] += c[i];
        }
    }
    let reference = BlochVector::from_direction(centroid[0], centroid[1], centroid[2])
        .ok()
        .filter(|_| centroid.iter().map(|c| c * c).sum::<f64>().sqrt() > 1e-3 * path.len() as f64)
        .or_else(|| BlochVector::from_direction(area[0], area[1], area[2]).ok())
        .ok_or_else(|| domain("path is degenerate: no reference direction"))?;

    let mut omega = 0.0;
    for w in path.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let c = cross(a, b);
        let numer = reference.x * c[0] + reference.y * c[1] + reference.z * c[2];
        let denom = 1.0 + reference.dot(a) + a.dot(b) + b.dot(&reference);
        omega += 2.0 * numer.atan2(denom);
    }
    Ok(omega)
}

/// `U = e^{iγ+}|n+⟩⟨n+| + e^{iγ-}|n-⟩⟨n-|` with `n- = -n+`.
pub fn reconstruct_gate(n_plus: &BlochVector, gamma_plus: f64, gamma_minus: f64) -> Unitary2 {
    let projector = |n: &BlochVector| {
        let [a, b] = bloch_to_state(n).amplitudes();
        [[a * a.conj(), a * b.conj()], [b * a.conj(), b * b.conj()]]
    };
    let pp = projector(n_plus);
    let pm = projector(&-*n_plus);
    let ep = C64::from_polar(1.0, gamma_plus);
    let em = C64::from_polar(1.0, gamma_minus);
    let mut m = [[C64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = ep * pp[i][j] + em * pm[i][j];
        }
    }
    Unitary2::from_matrix(m, 1e-8).expect("projector sum with unit phases is unitary")
}

#[derive(Debug, Clone, Serialize)]
pub struct GateReport {
    pub basis_plus: BlochVector,
    pub basis_minus: BlochVector,
    pub plus: PhaseDecomposition,
    pub minus: PhaseDecomposition,
    /// Gate rebuilt from the two total phases.
    pub unitary: Unitary2,
    /// Propagator obtained by evolving `|0⟩` and `|1⟩`.
    pub reference_unitary: Unitary2,
    /// Elementwise distance between the two, up to global phase.
    pub gate_deviation: f64,
    /// `max_t |m(t)·n+(t)|` along the `n+` run; zero for a purely
    /// geometric drive.
    pub max_drive_overlap: f64,
    /// `|γ_g(n-) + γ_g(n+)|` wrapped to `[0, π]`.
    pub geometric_antisymmetry_residual: f64,
    /// Solid angle enclosed by `n+(t)`, when the path is closed and dense.
    pub solid_angle_plus: Option<f64>,
}

fn max_drive_overlap(traj: &Trajectory, h: &dyn Hamiltonian) -> f64 {
    traj.times()
        .iter()
        .zip(traj.bloch())
        .map(|(&t, n)| {
            let s = h.sample(t, Side::Right);
            if s.omega == 0.0 {
                0.0
            } else {
                s.axis.dot(n).abs()
            }
        })
        .fold(0.0, f64::max)
}

/// Runs both basis vectors through `h`, decomposes their phases and
/// rebuilds the gate.
pub fn gate_from_hamiltonian(h: &dyn Hamiltonian, n_plus: &BlochVector, grid: &GridSpec) -> Result<GateReport> {
    let n_minus = -*n_plus;
    let traj_plus = propagate(h, &bloch_to_state(n_plus), grid)?;
    let traj_minus = propagate(h, &bloch_to_state(&n_minus), grid)?;
    let plus = decompose_phase(&traj_plus, h, DEFAULT_CYCLIC_TOL)?;
    let minus = decompose_phase(&traj_minus, h, DEFAULT_CYCLIC_TOL)?;
    let unitary = reconstruct_gate(n_plus, plus.gamma_total, minus.gamma_total);
    let reference = reference_unitary(h, grid)?;
    Ok(GateReport {
        basis_plus: *n_plus,
        basis_minus: n_minus,
        plus,
        minus,
        unitary,
        reference_unitary: reference,
        gate_deviation: unitary.deviation_up_to_phase(&reference),
        max_drive_overlap: max_drive_overlap(&traj_plus, h),
        geometric_antisymmetry_residual: wrap_phase(plus.gamma_geometric + minus.gamma_geometric).abs(),
        solid_angle_plus: solid_angle(traj_plus.bloch()).ok(),
    })
}

/// [`gate_from_hamiltonian`] for a pulse sequence, optionally fluctuated.
pub fn gate_from_simulation(
    seq: &PulseSequence,
    profile: Option<&FluctuationProfile>,
    n_plus: &BlochVector,
    grid: &GridSpec,
) -> Result<GateReport> {
    let profile = profile.cloned().unwrap_or_else(FluctuationProfile::zero);
    let h = FluctuatedPulse::new(seq.clone(), profile);
    gate_from_hamiltonian(&h, n_plus, grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fluctuation::{global_sine_profile, piecewise_sine_profile};
    use crate::propagator::ConstantHamiltonian;
    use crate::su2::{su2_rotation, HamiltonianSample, StateVector};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn composite() -> PulseSequence {
        PulseSequence::composite_90x180y90x()
    }

    #[test]
    fn simpson_is_exact_for_cubics() {
        let n = 8;
        let h = 1.0 / n as f64;
        let values: Vec<f64> = (0..=n).map(|k| (k as f64 * h).powi(3)).collect();
        assert!((simpson(&values, h) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn ideal_composite_has_no_dynamical_phase() {
        let seq = composite();
        let grid = GridSpec::default();
        for n in [BlochVector::PLUS_Y, -BlochVector::PLUS_Y] {
            let traj = propagate(&seq, &bloch_to_state(&n), &grid).unwrap();
            assert!(dynamical_phase(&traj, &seq).unwrap().abs() < 1e-9);
        }
    }

    #[test]
    fn grid_mismatch_is_detected() {
        let seq = composite();
        let traj = propagate(&ConstantHamiltonian(HamiltonianSample::zero()), &StateVector::ground(), &GridSpec::new(256).unwrap())
            .unwrap();
        assert!(matches!(dynamical_phase(&traj, &seq), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn ha_dynamical_phase_vanishes() {
        // H_A = πσy/4 keeps ⟨σy⟩ = 0 along the x-z great circle.
        let h = ConstantHamiltonian(HamiltonianSample::new(FRAC_PI_2, BlochVector::PLUS_Y, 0.0));
        let traj = propagate(&h, &StateVector::ground(), &GridSpec::default()).unwrap();
        // brute-force rectangle rule on the propagated expectation
        let brute: f64 = traj.states()[..traj.len() - 1]
            .iter()
            .zip(traj.times().windows(2))
            .map(|(psi, w)| energy_expectation(psi, &h.0) * (w[1] - w[0]))
            .sum();
        let gd = dynamical_phase(&traj, &h).unwrap();
        assert!(brute.abs() < 1e-12);
        assert!(gd.abs() < 1e-12);
    }

    #[test]
    fn closed_form_examples() {
        let grid = GridSpec::default();
        let zero_g = FluctuationProfile::combine(&global_sine_profile(0.4, 0.0, 3, 1).unwrap(), &FluctuationProfile::zero());
        assert_eq!(dynamical_phase_closed_form(&zero_g, BasisSign::Plus, &grid), 0.0);
        let p = piecewise_sine_profile(0.1, 0.1, 5, 5, composite().breakpoints()).unwrap();
        assert!(dynamical_phase_closed_form(&p, BasisSign::Plus, &grid).abs() < 1e-8);
        assert!(dynamical_phase_closed_form(&p, BasisSign::Minus, &grid).abs() < 1e-8);
    }

    #[test]
    fn decompose_ideal_composite() {
        let seq = composite();
        let traj = propagate(&seq, &bloch_to_state(&BlochVector::PLUS_Y), &GridSpec::default()).unwrap();
        let d = decompose_phase(&traj, &seq, DEFAULT_CYCLIC_TOL).unwrap();
        assert!((d.gamma_total + FRAC_PI_2).abs() < 1e-8);
        assert!(d.gamma_dynamical.abs() < 1e-9);
        assert!((d.gamma_geometric + FRAC_PI_2).abs() < 1e-8);
    }

    #[test]
    fn decompose_zero_hamiltonian() {
        let h = ConstantHamiltonian(HamiltonianSample::zero());
        let traj = propagate(&h, &StateVector::ground(), &GridSpec::default()).unwrap();
        let d = decompose_phase(&traj, &h, DEFAULT_CYCLIC_TOL).unwrap();
        assert_eq!((d.gamma_total, d.gamma_dynamical, d.gamma_geometric), (0.0, 0.0, 0.0));
    }

    #[test]
    fn non_cyclic_is_an_error() {
        let h = ConstantHamiltonian(HamiltonianSample::new(FRAC_PI_2, BlochVector::PLUS_Y, 0.0));
        let traj = propagate(&h, &StateVector::ground(), &GridSpec::default()).unwrap();
        match decompose_phase(&traj, &h, DEFAULT_CYCLIC_TOL) {
            Err(Error::NonCyclic { fidelity, .. }) => assert!((fidelity - 0.5f64.sqrt()).abs() < 1e-8),
            other => panic!("expected NonCyclic, got {other:?}"),
        }
    }

    fn great_circle(n: usize) -> Vec<BlochVector> {
        (0..=n)
            .map(|k| BlochVector::in_plane(2.0 * PI * k as f64 / n as f64))
            .collect()
    }

    #[test]
    fn equator_encloses_a_hemisphere() {
        let omega = solid_angle(&great_circle(400)).unwrap();
        assert!((omega - 2.0 * PI).abs() < 1e-3);
        let mut reversed = great_circle(400);
        reversed.reverse();
        // a great circle bounds 2π on either side, so only |Ω| is fixed
        assert!((solid_angle(&reversed).unwrap().abs() - 2.0 * PI).abs() < 1e-3);
    }

    #[test]
    fn small_cap_matches_closed_form() {
        // cap of polar angle a: Ω = 2π(1 - cos a)
        let a: f64 = 0.4;
        let path: Vec<BlochVector> = (0..=600)
            .map(|k| BlochVector::from_angles(a, 2.0 * PI * k as f64 / 600.0))
            .collect();
        let omega = solid_angle(&path).unwrap();
        assert!((omega - 2.0 * PI * (1.0 - a.cos())).abs() < 1e-4);
    }

    #[test]
    fn solid_angle_rejects_open_and_sparse_paths() {
        let mut open = great_circle(400);
        open.pop();
        assert!(solid_angle(&open).is_err());
        assert!(solid_angle(&great_circle(40)).is_err());
    }

    #[test]
    fn ideal_composite_encloses_pi() {
        let seq = composite();
        let traj = propagate(&seq, &bloch_to_state(&BlochVector::PLUS_Y), &GridSpec::default()).unwrap();
        assert!((solid_angle(traj.bloch()).unwrap() - PI).abs() < 1e-3);
    }

    #[test]
    fn reconstruct_gate_examples() {
        let u = reconstruct_gate(&BlochVector::PLUS_Y, -FRAC_PI_2, FRAC_PI_2);
        assert!(u.max_deviation(&su2_rotation(&BlochVector::PLUS_Y, PI)) < 1e-10);
        let id = reconstruct_gate(&BlochVector::PLUS_X, 0.0, 0.0);
        assert!(id.max_deviation(&Unitary2::identity()) < 1e-12);
        // projector oracle: |0⟩⟨0| e^{-iπ/2} + |1⟩⟨1| e^{iπ/2}
        let rz = reconstruct_gate(&BlochVector::PLUS_Z, -FRAC_PI_2, FRAC_PI_2);
        let m = rz.matrix();
        assert!((m[0][0] - C64::new(0.0, -1.0)).norm() < 1e-15);
        assert!((m[1][1] - C64::new(0.0, 1.0)).norm() < 1e-15);
        assert!(m[0][1].norm() < 1e-15 && m[1][0].norm() < 1e-15);
        assert!(rz.max_deviation(&su2_rotation(&BlochVector::PLUS_Z, PI)) < 1e-12);
    }

    #[test]
    fn gate_reports() {
        let grid = GridSpec::default();
        let ideal = gate_from_simulation(&composite(), None, &BlochVector::PLUS_Y, &grid).unwrap();
        let y180 = su2_rotation(&BlochVector::PLUS_Y, PI);
        assert!(ideal.unitary.deviation_up_to_phase(&y180) < 1e-8);
        assert!(ideal.gate_deviation < 1e-8);
        assert!(ideal.max_drive_overlap < 1e-10);

        let p = piecewise_sine_profile(0.1, 0.1, 5, 5, composite().breakpoints()).unwrap();
        let noisy = gate_from_simulation(&composite(), Some(&p), &BlochVector::PLUS_Y, &grid).unwrap();
        assert!(noisy.unitary.deviation_up_to_phase(&y180) < 1e-6);
        assert!(noisy.geometric_antisymmetry_residual < 1e-6);

        let zero = gate_from_hamiltonian(&ConstantHamiltonian(HamiltonianSample::zero()), &BlochVector::PLUS_Z, &grid).unwrap();
        assert!(zero.unitary.max_deviation(&Unitary2::identity()) < 1e-12);
    }
}
