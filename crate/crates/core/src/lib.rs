//! Single-qubit composite-pulse dynamics under regular fluctuations, with
//! the acquired phases split into dynamical and geometric parts.
//!
//! The layers, bottom up:
//!
//! * [`su2`]: Bloch vectors, kets, 2×2 unitaries and closed-form rotations.
//! * [`pulse`]: the `90x 180y 90x` pulse notation and its ideal drive.
//! * [`fluctuation`]: the `(f, g)` noise model, built-in profiles, symmetry
//!   classification and the fluctuated drive.
//! * [`propagator`]: breakpoint-aligned RK4 for `i dψ/dt = H(t)ψ`.
//! * [`phase`]: dynamical/geometric phase split, solid angles, gate
//!   reconstruction.
//! * [`experiments`]: canned scenarios, parameter sweeps and the end-to-end
//!   reproduction check.

pub mod config;
pub mod error;
pub mod experiments;
pub mod export;
pub mod fluctuation;
pub mod papercheck;
pub mod phase;
pub mod propagator;
pub mod pulse;
mod spline;
pub mod su2;
pub mod tolerances;

pub use error::{Error, ParseError, Result};
pub use fluctuation::{
    check_boundary_conditions, classify_symmetry, fluctuated_curve_at, fluctuated_hamiltonian_at,
    global_sine_profile, piecewise_sine_profile, tabulated_profile, BasisSign, FluctuatedPulse,
    FluctuationProfile, SymmetryClass,
};
pub use phase::{
    decompose_phase, dynamical_phase, dynamical_phase_closed_form, gate_from_hamiltonian, gate_from_simulation,
    reconstruct_gate, solid_angle, GateReport, PhaseDecomposition,
};
pub use propagator::{cyclicity_check, propagate, reference_unitary, GridSpec, Hamiltonian, Side, Trajectory};
pub use pulse::{parse_sequence, PulseSegment, PulseSequence};
pub use su2::{
    bloch_to_state, energy_expectation, state_to_bloch, su2_rotation, BlochVector, HamiltonianSample, StateVector,
    Unitary2,
};
