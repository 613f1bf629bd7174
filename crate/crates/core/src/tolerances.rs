//! Tolerances and reference values for the reproduction checks.
//!
//! Every threshold used by the end-to-end checks lives here, so the CLI's
//! `papercheck` and the acceptance tests cannot drift apart.

/// Ideal composite pulse: gate vs `exp(-iπσy/2)` up to global phase.
pub const IDEAL_GATE: f64 = 1e-8;
/// Ideal composite pulse: `γ± = ∓π/2`.
pub const IDEAL_TOTAL_PHASE: f64 = 1e-8;
/// Ideal composite pulse: `γ_d = 0`.
pub const IDEAL_DYNAMICAL_PHASE: f64 = 1e-9;

/// Solid angle of a basis trajectory vs π.
pub const SOLID_ANGLE: f64 = 1e-3;
/// `γ_g = -Ω/2 (mod 2π)`.
pub const SOLID_ANGLE_RELATION: f64 = 1e-3;

/// `1 - |⟨ψ(0)|ψ(1)⟩|` for the fluctuated composite pulse.
pub const FLUCTUATED_CYCLICITY: f64 = 1e-9;
/// Fluctuated composite pulse: phases vs `∓π/2` and `γ̃_d` vs 0.
pub const FLUCTUATED_PHASE: f64 = 1e-6;

/// `H̃_A` endpoint, per component.
pub const HA_ENDPOINT: f64 = 1e-6;
/// `H̃_B` endpoint, per component (reference values carry two decimals).
pub const HB_ENDPOINT: f64 = 0.01;
/// Published `H̃_B` endpoint for `f0 = g0 = 1`, `ξ = η = 10`.
pub const HB_FLUCTUATED_ENDPOINT: [f64; 3] = [0.95, -0.26, -0.16];

/// `max |m̃(t)·ñ(t)|`.
pub const ORTHOGONALITY: f64 = 1e-10;
/// Trajectory quadrature vs closed-form dynamical phase.
pub const DYNAMICAL_CROSS_ORACLE: f64 = 1e-6;

/// Norm of every stored state.
pub const NORM: f64 = 1e-9;
/// Change of any phase under a global phase of the initial state.
pub const GAUGE: f64 = 1e-10;
/// Final-state change when the grid is doubled.
pub const GRID_DOUBLING: f64 = 1e-9;
/// Constant Hamiltonian vs closed-form rotation.
pub const CONSTANT_PROPAGATION: f64 = 1e-8;

/// Fluctuated curve vs propagated Bloch vector at every node.
pub const CURVE_REPRODUCTION: f64 = 1e-6;
/// Fluctuated gate vs ideal gate, up to global phase.
pub const FLUCTUATED_GATE: f64 = 1e-6;
