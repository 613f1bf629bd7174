//! Fixed-step RK4 integration of `i dψ/dt = H(t) ψ` over `[0, 1]`.
//!
//! Hamiltonians are smooth between declared breakpoints and may jump at
//! them. The integration grid places a node on every breakpoint, so no RK4
//! step straddles a jump, and the last stage of each sub-interval reads the
//! left limit of the Hamiltonian.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::su2::{state_to_bloch, BlochVector, HamiltonianSample, StateVector, Unitary2, C64};

/// Which one-sided limit to take at a jump.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A time-dependent Hamiltonian on `[0, 1]`.
pub trait Hamiltonian: Sync {
    /// Times where the Hamiltonian may be discontinuous. Values outside
    /// `(0, 1)` are ignored.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }

    /// `H(t)`, using the `side` limit when `t` is a breakpoint.
    fn sample(&self, t: f64, side: Side) -> HamiltonianSample;
}

impl<H: Hamiltonian + ?Sized> Hamiltonian for &H {
    fn breakpoints(&self) -> Vec<f64> {
        (**self).breakpoints()
    }

    fn sample(&self, t: f64, side: Side) -> HamiltonianSample {
        (**self).sample(t, side)
    }
}

/// A time-independent Hamiltonian.
#[derive(Debug, Clone, Copy)]
pub struct ConstantHamiltonian(pub HamiltonianSample);

impl Hamiltonian for ConstantHamiltonian {
    fn sample(&self, _t: f64, _side: Side) -> HamiltonianSample {
        self.0
    }
}

pub const DEFAULT_STEPS: usize = 16384;
pub const MIN_STEPS: usize = 256;

/// Two breakpoints closer than this are treated as one.
const BREAKPOINT_MERGE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub steps_per_unit_time: usize,
    /// Extra breakpoints on top of the Hamiltonian's own.
    #[serde(default)]
    pub breakpoints: Vec<f64>,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { steps_per_unit_time: DEFAULT_STEPS, breakpoints: Vec::new() }
    }
}

impl GridSpec {
    pub fn new(steps_per_unit_time: usize) -> Result<Self> {
        if steps_per_unit_time < MIN_STEPS {
            return Err(domain(format!(
                "grid needs at least {MIN_STEPS} steps per unit time, got {steps_per_unit_time}"
            )));
        }
        Ok(Self { steps_per_unit_time, breakpoints: Vec::new() })
    }

    pub fn with_breakpoints(mut self, extra: &[f64]) -> Self {
        self.breakpoints.extend_from_slice(extra);
        self
    }

    /// The same grid with twice the resolution.
    pub fn doubled(&self) -> Self {
        Self { steps_per_unit_time: self.steps_per_unit_time * 2, breakpoints: self.breakpoints.clone() }
    }

    /// Sorted boundaries `[0, ..., 1]` combining the grid's and `extra`.
    pub fn boundaries(&self, extra: &[f64]) -> Vec<f64> {
        merge_breakpoints(self.breakpoints.iter().chain(extra.iter()).copied())
    }

    /// Node times and the node index of every boundary. Each sub-interval
    /// gets an even number (at least two) of equal steps.
    pub fn nodes(&self, extra: &[f64]) -> (Vec<f64>, Vec<usize>) {
        let bounds = self.boundaries(extra);
        let mut times = vec![0.0];
        let mut marks = vec![0];
        for w in bounds.windows(2) {
            let (a, b) = (w[0], w[1]);
            let n = steps_for(self.steps_per_unit_time, b - a);
            for k in 1..n {
                times.push(a + (b - a) * k as f64 / n as f64);
            }
            times.push(b);
            marks.push(times.len() - 1);
        }
        (times, marks)
    }
}

fn steps_for(steps_per_unit_time: usize, width: f64) -> usize {
    let raw = (steps_per_unit_time as f64 * width - 1e-9).ceil().max(2.0) as usize;
    raw + raw % 2
}

pub(crate) fn merge_breakpoints(points: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut inner: Vec<f64> = points.filter(|t| *t > 0.0 && *t < 1.0).collect();
    inner.sort_by(f64::total_cmp);
    let mut out = vec![0.0];
    for t in inner {
        let last = *out.last().unwrap();
        if t - last > BREAKPOINT_MERGE_TOL {
            out.push(t);
        }
    }
    if 1.0 - *out.last().unwrap() <= BREAKPOINT_MERGE_TOL && out.len() > 1 {
        out.pop();
    }
    out.push(1.0);
    out
}

/// Dense solution of a propagation.
#[derive(Debug, Clone)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<StateVector>,
    bloch: Vec<BlochVector>,
    boundary_nodes: Vec<usize>,
    max_norm_drift: f64,
}

impl Trajectory {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    pub fn bloch(&self) -> &[BlochVector] {
        &self.bloch
    }

    /// Node indices of `0`, each breakpoint, and `1`.
    pub fn boundary_nodes(&self) -> &[usize] {
        &self.boundary_nodes
    }

    pub fn boundary_times(&self) -> Vec<f64> {
        self.boundary_nodes.iter().map(|&i| self.times[i]).collect()
    }

    pub fn initial_state(&self) -> &StateVector {
        &self.states[0]
    }

    pub fn final_state(&self) -> &StateVector {
        self.states.last().expect("trajectory is never empty")
    }

    pub fn final_bloch(&self) -> BlochVector {
        *self.bloch.last().expect("trajectory is never empty")
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Largest `| ‖ψ‖ - 1 |` seen after a step, before renormalization.
    pub fn max_norm_drift(&self) -> f64 {
        self.max_norm_drift
    }
}

#[inline]
fn derivative(h: &HamiltonianSample, psi: [C64; 2]) -> [C64; 2] {
    let hp = h.apply_raw(psi);
    let minus_i = C64::new(0.0, -1.0);
    [minus_i * hp[0], minus_i * hp[1]]
}

#[inline]
fn axpy(psi: [C64; 2], k: [C64; 2], s: f64) -> [C64; 2] {
    [psi[0] + k[0] * s, psi[1] + k[1] * s]
}

fn checked_sample(h: &dyn Hamiltonian, t: f64, side: Side) -> Result<HamiltonianSample> {
    let s = h.sample(t, side);
    if !s.is_finite() {
        return Err(Error::Integration { time: t, message: format!("non-finite Hamiltonian sample {s:?}") });
    }
    Ok(s)
}

/// Integrates from `psi0` at `t = 0` to `t = 1`, storing every node.
pub fn propagate(h: &dyn Hamiltonian, psi0: &StateVector, grid: &GridSpec) -> Result<Trajectory> {
    if grid.steps_per_unit_time < MIN_STEPS {
        return Err(domain(format!("grid needs at least {MIN_STEPS} steps per unit time")));
    }
    let (times, boundary_nodes) = grid.nodes(&h.breakpoints());
    let mut states = Vec::with_capacity(times.len());
    let mut psi = psi0.amplitudes();
    states.push(*psi0);
    let mut max_norm_drift = 0.0f64;

    for seg in boundary_nodes.windows(2) {
        for k in seg[0]..seg[1] {
            let (t0, t1) = (times[k], times[k + 1]);
            let dt = t1 - t0;
            let tm = t0 + 0.5 * dt;
            let h0 = checked_sample(h, t0, Side::Right)?;
            let hm = checked_sample(h, tm, Side::Right)?;
            let h1 = checked_sample(h, t1, Side::Left)?;

            let k1 = derivative(&h0, psi);
            let k2 = derivative(&hm, axpy(psi, k1, 0.5 * dt));
            let k3 = derivative(&hm, axpy(psi, k2, 0.5 * dt));
            let k4 = derivative(&h1, axpy(psi, k3, dt));
            let next = [
                psi[0] + (k1[0] + k2[0] * 2.0 + k3[0] * 2.0 + k4[0]) * (dt / 6.0),
                psi[1] + (k1[1] + k2[1] * 2.0 + k3[1] * 2.0 + k4[1]) * (dt / 6.0),
            ];
            let norm = (next[0].norm_sqr() + next[1].norm_sqr()).sqrt();
            max_norm_drift = max_norm_drift.max((norm - 1.0).abs());
            psi = [next[0] / norm, next[1] / norm];
            states.push(StateVector::from_raw_normalized(psi));
        }
    }

    let bloch = states.iter().map(state_to_bloch).collect();
    Ok(Trajectory { times, states, bloch, boundary_nodes, max_norm_drift })
}

pub const DEFAULT_CYCLIC_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cyclicity {
    pub cyclic: bool,
    /// `|⟨ψ(0)|ψ(1)⟩|`.
    pub fidelity: f64,
    /// `arg ⟨ψ(0)|ψ(1)⟩` in `(-π, π]`.
    pub total_phase: f64,
}

pub fn cyclicity_check(traj: &Trajectory, tol: f64) -> Cyclicity {
    let overlap = traj.initial_state().inner(traj.final_state());
    let fidelity = overlap.norm();
    let total_phase = crate::su2::wrap_phase(overlap.arg());
    Cyclicity { cyclic: 1.0 - fidelity < tol, fidelity, total_phase }
}

/// The propagator `U(1, 0)` assembled from the evolutions of `|0⟩` and `|1⟩`.
pub fn reference_unitary(h: &dyn Hamiltonian, grid: &GridSpec) -> Result<Unitary2> {
    let first = propagate(h, &StateVector::ground(), grid)?;
    let second = propagate(h, &StateVector::excited(), grid)?;
    Unitary2::from_columns(first.final_state().amplitudes(), second.final_state().amplitudes())
}
