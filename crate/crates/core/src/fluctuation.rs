//! Regular fluctuations of the composite-pulse trajectory.
//!
//! A profile is a pair of smooth functions `f` (polar-angle shift) and `g`
//! (azimuth shift) on `[0, 1]` vanishing at both ends. For the `90x 180y
//! 90x` sequence the perturbed basis curve is
//!
//! ```text
//! ñ±(t) = ±( sin(θ+f) sin(φ+g), -sin(θ+f) cos(φ+g), cos(θ+f) ),  θ = 2πt - π/2
//! ```
//!
//! and it is generated by the drive `ω̃ = ω + f'`, rf phase `φ + g`, plus a
//! detuning `g'` along z.

use std::f64::consts::{FRAC_PI_2, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::propagator::{merge_breakpoints, Hamiltonian, Side};
use crate::pulse::{check_time, PulseSequence};
use crate::spline::CubicSpline;
use crate::su2::{BlochVector, HamiltonianSample};

/// Boundary residuals at or above this fail the closure condition.
pub const BOUNDARY_TOL: f64 = 1e-9;
/// Number of samples used by [`classify_symmetry`].
pub const SYMMETRY_GRID: usize = 1024;
pub const SYMMETRY_TOL: f64 = 1e-9;
pub const ZERO_G_TOL: f64 = 1e-12;

/// One of the two fluctuation functions.
#[derive(Debug, Clone, PartialEq)]
pub enum Waveform {
    Zero,
    /// `a sin(2π c u_i(t))` with `u_i` the local coordinate of piece `i`.
    PiecewiseSine { amplitude: f64, cycles: u32, knots: Vec<f64> },
    /// `a sin(8π c t)`.
    GlobalSine { amplitude: f64, cycles: u32 },
    Tabulated(CubicSpline),
}

impl Waveform {
    fn piece(knots: &[f64], t: f64, side: Side) -> usize {
        let last = knots.len() - 2;
        let found = match side {
            Side::Right => knots[1..].iter().position(|&k| t < k),
            Side::Left => knots[1..].iter().position(|&k| t <= k),
        };
        found.unwrap_or(last)
    }

    pub fn value(&self, t: f64) -> f64 {
        match self {
            Waveform::Zero => 0.0,
            Waveform::PiecewiseSine { amplitude, cycles, knots } => {
                let i = Self::piece(knots, t, Side::Right);
                let u = (t - knots[i]) / (knots[i + 1] - knots[i]);
                amplitude * (TAU * f64::from(*cycles) * u).sin()
            }
            Waveform::GlobalSine { amplitude, cycles } => {
                amplitude * (4.0 * TAU * f64::from(*cycles) * t).sin()
            }
            Waveform::Tabulated(s) => s.value(t),
        }
    }

    pub fn derivative(&self, t: f64, side: Side) -> f64 {
        match self {
            Waveform::Zero => 0.0,
            Waveform::PiecewiseSine { amplitude, cycles, knots } => {
                let i = Self::piece(knots, t, side);
                let width = knots[i + 1] - knots[i];
                let u = (t - knots[i]) / width;
                let k = TAU * f64::from(*cycles);
                amplitude * k / width * (k * u).cos()
            }
            Waveform::GlobalSine { amplitude, cycles } => {
                let k = 4.0 * TAU * f64::from(*cycles);
                amplitude * k * (k * t).cos()
            }
            Waveform::Tabulated(s) => s.derivative(t),
        }
    }

    /// Interior points where the derivative may jump.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Waveform::PiecewiseSine { knots, .. } => knots[1..knots.len() - 1].to_vec(),
            _ => Vec::new(),
        }
    }
}

/// Which builder produced a profile and with what parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileMeta {
    pub builder: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xi: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<u32>,
}

impl ProfileMeta {
    fn named(builder: &str) -> Self {
        Self { builder: builder.to_string(), f0: None, g0: None, xi: None, eta: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FluctuationProfile {
    f: Waveform,
    g: Waveform,
    meta: ProfileMeta,
}

impl FluctuationProfile {
    pub fn new(f: Waveform, g: Waveform, meta: ProfileMeta) -> Self {
        Self { f, g, meta }
    }

    /// No fluctuation at all.
    pub fn zero() -> Self {
        Self::new(Waveform::Zero, Waveform::Zero, ProfileMeta::named("zero"))
    }

    /// `f` from one profile, `g` from another.
    pub fn combine(f_source: &FluctuationProfile, g_source: &FluctuationProfile) -> Self {
        let meta = ProfileMeta {
            builder: format!("combined({}, {})", f_source.meta.builder, g_source.meta.builder),
            f0: f_source.meta.f0,
            g0: g_source.meta.g0,
            xi: f_source.meta.xi,
            eta: g_source.meta.eta,
        };
        Self::new(f_source.f.clone(), g_source.g.clone(), meta)
    }

    pub fn f_waveform(&self) -> &Waveform {
        &self.f
    }

    pub fn g_waveform(&self) -> &Waveform {
        &self.g
    }

    pub fn meta(&self) -> &ProfileMeta {
        &self.meta
    }

    pub fn f(&self, t: f64) -> f64 {
        self.f.value(t)
    }

    pub fn g(&self, t: f64) -> f64 {
        self.g.value(t)
    }

    pub fn df(&self, t: f64, side: Side) -> f64 {
        self.f.derivative(t, side)
    }

    pub fn dg(&self, t: f64, side: Side) -> f64 {
        self.g.derivative(t, side)
    }

    /// Interior breakpoints of either function.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut all = self.f.breakpoints();
        all.extend(self.g.breakpoints());
        let merged = merge_breakpoints(all.into_iter());
        merged[1..merged.len() - 1].to_vec()
    }
}

fn check_cycles(name: &str, cycles: u32) -> Result<()> {
    if cycles == 0 {
        return Err(domain(format!("{name} must be a positive integer, got 0")));
    }
    Ok(())
}

/// Converts a configured cycle count to an integer, rejecting anything that
/// would break closure of the fluctuated curve.
pub fn cycles_from_f64(name: &str, value: f64) -> Result<u32> {
    if !value.is_finite() || value.fract() != 0.0 || value < 1.0 || value > f64::from(u32::MAX) {
        return Err(domain(format!("{name} must be a positive integer, got {value}")));
    }
    Ok(value as u32)
}

fn check_amplitude(name: &str, a: f64) -> Result<()> {
    if !a.is_finite() {
        return Err(domain(format!("{name} must be finite, got {a}")));
    }
    Ok(())
}

fn check_knots(knots: &[f64]) -> Result<()> {
    if knots.len() < 2
        || knots[0] != 0.0
        || *knots.last().unwrap() != 1.0
        || knots.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
    {
        return Err(domain(format!("breakpoints must increase strictly from 0 to 1, got {knots:?}")));
    }
    Ok(())
}

/// `f = f0 sin(2πξ u_i(t))`, `g = g0 sin(2πη u_i(t))` on every piece
/// `[t_{i-1}, t_i]` of `breakpoints`.
pub fn piecewise_sine_profile(f0: f64, g0: f64, xi: u32, eta: u32, breakpoints: &[f64]) -> Result<FluctuationProfile> {
    check_amplitude("f0", f0)?;
    check_amplitude("g0", g0)?;
    check_cycles("xi", xi)?;
    check_cycles("eta", eta)?;
    check_knots(breakpoints)?;
    let knots = breakpoints.to_vec();
    Ok(FluctuationProfile::new(
        Waveform::PiecewiseSine { amplitude: f0, cycles: xi, knots: knots.clone() },
        Waveform::PiecewiseSine { amplitude: g0, cycles: eta, knots },
        ProfileMeta { builder: "piecewise_sine".into(), f0: Some(f0), g0: Some(g0), xi: Some(xi), eta: Some(eta) },
    ))
}

/// `f = f0 sin(8πξ t)`, `g = g0 sin(8πη t)`.
pub fn global_sine_profile(f0: f64, g0: f64, xi: u32, eta: u32) -> Result<FluctuationProfile> {
    check_amplitude("f0", f0)?;
    check_amplitude("g0", g0)?;
    check_cycles("xi", xi)?;
    check_cycles("eta", eta)?;
    Ok(FluctuationProfile::new(
        Waveform::GlobalSine { amplitude: f0, cycles: xi },
        Waveform::GlobalSine { amplitude: g0, cycles: eta },
        ProfileMeta { builder: "global_sine".into(), f0: Some(f0), g0: Some(g0), xi: Some(xi), eta: Some(eta) },
    ))
}

/// Spline-interpolated profile from `[t, f, g]` rows covering `[0, 1]`.
/// Boundary values are not checked here; see [`check_boundary_conditions`].
pub fn tabulated_profile(samples: &[[f64; 3]]) -> Result<FluctuationProfile> {
    if samples.len() < 3 {
        return Err(domain("a tabulated profile needs at least three samples"));
    }
    let first = samples[0][0];
    let last = samples[samples.len() - 1][0];
    if first != 0.0 || last != 1.0 {
        return Err(domain(format!("tabulated samples must span [0, 1], got [{first}, {last}]")));
    }
    let t: Vec<f64> = samples.iter().map(|r| r[0]).collect();
    let f = CubicSpline::new(t.clone(), samples.iter().map(|r| r[1]).collect())?;
    let g = CubicSpline::new(t, samples.iter().map(|r| r[2]).collect())?;
    Ok(FluctuationProfile::new(Waveform::Tabulated(f), Waveform::Tabulated(g), ProfileMeta::named("tabulated")))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryCheck {
    pub satisfied: bool,
    /// `[f(0), g(0), f(1), g(1)]`.
    pub residuals: [f64; 4],
}

impl BoundaryCheck {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()))
    }
}

pub fn check_boundary_conditions(p: &FluctuationProfile) -> BoundaryCheck {
    let residuals = [p.f(0.0), p.g(0.0), p.f(1.0), p.g(1.0)];
    BoundaryCheck { satisfied: residuals.iter().all(|r| r.abs() < BOUNDARY_TOL), residuals }
}

/// Symmetries under which the fluctuated dynamical phase cancels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SymmetryClass {
    /// `g ≡ 0`.
    ZeroG,
    /// `f(t + ½) = f(t)` and `g'(t + ½) = g'(t)`.
    ShiftSymmetric,
    /// `f(1 - t) = -f(t)` and `g'(1 - t) = g'(t)`.
    ReflectSymmetric,
    Unclassified,
}

impl SymmetryClass {
    /// Whether the class guarantees a vanishing dynamical phase.
    pub fn cancels_dynamical_phase(&self) -> bool {
        !matches!(self, SymmetryClass::Unclassified)
    }
}

/// Tests the cancellation identities on cell midpoints, which never land on
/// the composite-pulse breakpoints.
pub fn classify_symmetry(p: &FluctuationProfile) -> SymmetryClass {
    let n = SYMMETRY_GRID;
    let unit: Vec<f64> = (0..n).map(|k| (k as f64 + 0.5) / n as f64).collect();

    let max_g = unit
        .iter()
        .chain([0.0, 1.0].iter())
        .fold(0.0f64, |m, &t| m.max(p.g(t).abs()));
    if max_g < ZERO_G_TOL {
        return SymmetryClass::ZeroG;
    }

    let shift = unit.iter().map(|t| 0.5 * t).all(|t| {
        (p.f(t + 0.5) - p.f(t)).abs() < SYMMETRY_TOL
            && (p.dg(t + 0.5, Side::Right) - p.dg(t, Side::Right)).abs() < SYMMETRY_TOL
    });
    if shift {
        return SymmetryClass::ShiftSymmetric;
    }

    let reflect = unit.iter().all(|&t| {
        (p.f(1.0 - t) + p.f(t)).abs() < SYMMETRY_TOL
            && (p.dg(1.0 - t, Side::Right) - p.dg(t, Side::Right)).abs() < SYMMETRY_TOL
    });
    if reflect {
        return SymmetryClass::ReflectSymmetric;
    }
    SymmetryClass::Unclassified
}

/// A pulse sequence driven through a fluctuation profile.
#[derive(Debug, Clone)]
pub struct FluctuatedPulse {
    seq: PulseSequence,
    profile: FluctuationProfile,
}

impl FluctuatedPulse {
    pub fn new(seq: PulseSequence, profile: FluctuationProfile) -> Self {
        Self { seq, profile }
    }

    pub fn sequence(&self) -> &PulseSequence {
        &self.seq
    }

    pub fn profile(&self) -> &FluctuationProfile {
        &self.profile
    }
}

impl Hamiltonian for FluctuatedPulse {
    fn breakpoints(&self) -> Vec<f64> {
        let mut all = self.seq.breakpoints().to_vec();
        all.extend(self.profile.breakpoints());
        all
    }

    fn sample(&self, t: f64, side: Side) -> HamiltonianSample {
        let p = &self.profile;
        HamiltonianSample::new(
            self.seq.ideal_amplitude() + p.df(t, side),
            BlochVector::in_plane(self.seq.phase_at(t, side) + p.g(t)),
            p.dg(t, side),
        )
    }
}

/// Fluctuated drive at `t` (right limit at breakpoints).
pub fn fluctuated_hamiltonian_at(seq: &PulseSequence, p: &FluctuationProfile, t: f64) -> Result<HamiltonianSample> {
    check_time(t)?;
    Ok(FluctuatedPulse::new(seq.clone(), p.clone()).sample(t, Side::Right))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BasisSign {
    Plus,
    Minus,
}

impl BasisSign {
    pub fn value(self) -> f64 {
        match self {
            BasisSign::Plus => 1.0,
            BasisSign::Minus => -1.0,
        }
    }
}

/// `θ(t) = 2πt - π/2` of the composite pulse.
pub fn composite_theta(t: f64) -> f64 {
    TAU * t - FRAC_PI_2
}

/// Azimuth `φ(t)` of the composite pulse: π/2 during the 180y pulse.
fn composite_phi(seq: &PulseSequence, t: f64) -> f64 {
    seq.phase_at(t, Side::Right)
}

/// Point of the fluctuated basis curve `ñ±(t)`; only defined for `90x 180y 90x`.
pub fn fluctuated_curve_at(seq: &PulseSequence, p: &FluctuationProfile, t: f64, sign: BasisSign) -> Result<BlochVector> {
    check_time(t)?;
    if !seq.is_composite_90x180y90x() {
        return Err(domain(format!(
            "the fluctuated reference curve is only defined for 90x 180y 90x, got {seq}"
        )));
    }
    let theta = composite_theta(t) + p.f(t);
    let phi = composite_phi(seq, t) + p.g(t);
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let s = sign.value();
    Ok(BlochVector { x: s * st * sp, y: -s * st * cp, z: s * ct })
}

/// Whether a profile keeps the composite-pulse curve continuous: on top of
/// the end-point conditions, `f` must vanish where φ jumps.
pub fn continuous_on_composite(p: &FluctuationProfile) -> bool {
    [0.25, 0.75].iter().all(|&t| (composite_theta(t) + p.f(t)).sin().abs() < BOUNDARY_TOL)
}
