//! Exact two-level linear algebra: Bloch vectors, normalized kets, 2×2
//! unitaries, Pauli algebra and closed-form SU(2) rotations.
//!
//! Conventions: ħ = 1, `H = ½ (ω m + δ ẑ)·σ`, and a rotation by `angle`
//! about `axis` is `exp(-i angle/2 axis·σ)`.

use std::fmt;
use std::ops::{Mul, Neg};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// Tolerance used to accept user-supplied unit vectors and kets before
/// they are renormalized.
pub const UNIT_ACCEPT_TOL: f64 = 1e-9;

/// A point on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const PLUS_X: BlochVector = BlochVector { x: 1.0, y: 0.0, z: 0.0 };
    pub const PLUS_Y: BlochVector = BlochVector { x: 0.0, y: 1.0, z: 0.0 };
    pub const PLUS_Z: BlochVector = BlochVector { x: 0.0, y: 0.0, z: 1.0 };
    pub const MINUS_Z: BlochVector = BlochVector { x: 0.0, y: 0.0, z: -1.0 };

    /// Accepts a vector whose norm is within `1e-9` of one and snaps it
    /// onto the sphere.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > UNIT_ACCEPT_TOL {
            return Err(domain(format!(
                "Bloch vector ({x}, {y}, {z}) has norm {norm}, expected 1"
            )));
        }
        Ok(Self { x: x / norm, y: y / norm, z: z / norm })
    }

    /// Normalizes any finite non-zero direction.
    pub fn from_direction(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(domain(format!("cannot normalize direction ({x}, {y}, {z})")));
        }
        Ok(Self { x: x / norm, y: y / norm, z: z / norm })
    }

    /// `(cos φ, sin φ, 0)`: the drive axis for rf phase `φ`.
    pub fn in_plane(phase: f64) -> Self {
        let (s, c) = phase.sin_cos();
        Self { x: c, y: s, z: 0.0 }
    }

    /// Point with polar angle `theta` and azimuth `phi`. Negative polar
    /// angles are allowed (they land on the antipodal azimuth).
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self { x: st * cp, y: st * sp, z: ct }
    }

    pub fn components(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(&self, other: &BlochVector) -> [f64; 3] {
        [
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        ]
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Great-circle distance in radians.
    pub fn angle_to(&self, other: &BlochVector) -> f64 {
        let c = self.cross(other);
        let s = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
        s.atan2(self.dot(other))
    }

    /// Largest componentwise deviation.
    pub fn max_deviation(&self, other: &BlochVector) -> f64 {
        (self.x - other.x)
            .abs()
            .max((self.y - other.y).abs())
            .max((self.z - other.z).abs())
    }
}

impl Neg for BlochVector {
    type Output = BlochVector;

    fn neg(self) -> BlochVector {
        BlochVector { x: -self.x, y: -self.y, z: -self.z }
    }
}

impl fmt::Display for BlochVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.6}, {:.6}, {:.6})", self.x, self.y, self.z)
    }
}

/// A normalized ket `c0|0⟩ + c1|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector {
    c: [C64; 2],
}

impl StateVector {
    /// Accepts amplitudes whose norm is within `1e-9` of one.
    pub fn new(c0: C64, c1: C64) -> Result<Self> {
        let norm = (c0.norm_sqr() + c1.norm_sqr()).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > UNIT_ACCEPT_TOL {
            return Err(domain(format!("state ({c0}, {c1}) has norm {norm}, expected 1")));
        }
        Ok(Self { c: [c0 / norm, c1 / norm] })
    }

    /// Normalizes any non-zero amplitude pair.
    pub fn from_unnormalized(c0: C64, c1: C64) -> Result<Self> {
        let norm = (c0.norm_sqr() + c1.norm_sqr()).sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(domain("cannot normalize the zero vector"));
        }
        Ok(Self { c: [c0 / norm, c1 / norm] })
    }

    pub fn ground() -> Self {
        Self { c: [ONE, ZERO] }
    }

    pub fn excited() -> Self {
        Self { c: [ZERO, ONE] }
    }

    pub(crate) fn from_raw_normalized(c: [C64; 2]) -> Self {
        Self { c }
    }

    pub fn c0(&self) -> C64 {
        self.c[0]
    }

    pub fn c1(&self) -> C64 {
        self.c[1]
    }

    pub fn amplitudes(&self) -> [C64; 2] {
        self.c
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.c[0].conj() * other.c[0] + self.c[1].conj() * other.c[1]
    }

    pub fn norm(&self) -> f64 {
        (self.c[0].norm_sqr() + self.c[1].norm_sqr()).sqrt()
    }

    /// `e^{iα} |ψ⟩`.
    pub fn with_global_phase(&self, alpha: f64) -> Self {
        let p = C64::from_polar(1.0, alpha);
        Self { c: [self.c[0] * p, self.c[1] * p] }
    }
}

/// Gauge: `c0` real and non-negative; the south pole maps to `|1⟩`.
pub fn bloch_to_state(n: &BlochVector) -> StateVector {
    let r = n.x.hypot(n.y);
    if r == 0.0 {
        return if n.z >= 0.0 { StateVector::ground() } else { StateVector::excited() };
    }
    let c0 = ((1.0 + n.z) / 2.0).max(0.0).sqrt();
    let s = ((1.0 - n.z) / 2.0).max(0.0).sqrt();
    let c1 = C64::new(n.x / r, n.y / r) * s;
    StateVector::from_unnormalized(C64::new(c0, 0.0), c1)
        .expect("unit Bloch vector yields a non-zero ket")
}

/// `n = ⟨ψ|σ|ψ⟩`.
pub fn state_to_bloch(psi: &StateVector) -> BlochVector {
    let [a, b] = psi.c;
    let cross = a.conj() * b;
    let x = 2.0 * cross.re;
    let y = 2.0 * cross.im;
    let z = a.norm_sqr() - b.norm_sqr();
    let norm = (x * x + y * y + z * z).sqrt();
    BlochVector { x: x / norm, y: y / norm, z: z / norm }
}

/// One instant of `H = ½ ω m·σ + ½ δ σz`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianSample {
    pub omega: f64,
    pub axis: BlochVector,
    pub detuning_z: f64,
}

impl HamiltonianSample {
    pub fn new(omega: f64, axis: BlochVector, detuning_z: f64) -> Self {
        Self { omega, axis, detuning_z }
    }

    pub fn zero() -> Self {
        Self { omega: 0.0, axis: BlochVector::PLUS_X, detuning_z: 0.0 }
    }

    /// The rotation vector `Ω = ω m + δ ẑ`; `H = ½ Ω·σ`.
    pub fn field(&self) -> [f64; 3] {
        [
            self.omega * self.axis.x,
            self.omega * self.axis.y,
            self.omega * self.axis.z + self.detuning_z,
        ]
    }

    pub fn is_finite(&self) -> bool {
        self.omega.is_finite()
            && self.detuning_z.is_finite()
            && self.axis.components().iter().all(|c| c.is_finite())
    }

    pub fn matrix(&self) -> [[C64; 2]; 2] {
        let [fx, fy, fz] = self.field();
        pauli_combination(0.5 * fx, 0.5 * fy, 0.5 * fz)
    }

    /// `H|ψ⟩` on raw amplitudes.
    #[inline]
    pub(crate) fn apply_raw(&self, psi: [C64; 2]) -> [C64; 2] {
        let [fx, fy, fz] = self.field();
        let (hx, hy, hz) = (0.5 * fx, 0.5 * fy, 0.5 * fz);
        let off_lo = C64::new(hx, hy); // ⟨1|H|0⟩
        let off_hi = C64::new(hx, -hy); // ⟨0|H|1⟩
        [psi[0] * hz + off_hi * psi[1], off_lo * psi[0] - psi[1] * hz]
    }
}

/// `⟨ψ|H|ψ⟩ = (ω/2) m·n + (δ/2) n_z`.
pub fn energy_expectation(psi: &StateVector, h: &HamiltonianSample) -> f64 {
    let n = state_to_bloch(psi);
    0.5 * h.omega * h.axis.dot(&n) + 0.5 * h.detuning_z * n.z
}

/// `x σx + y σy + z σz`.
pub fn pauli_combination(x: f64, y: f64, z: f64) -> [[C64; 2]; 2] {
    [
        [C64::new(z, 0.0), C64::new(x, -y)],
        [C64::new(x, y), C64::new(-z, 0.0)],
    ]
}

pub fn sigma_x() -> [[C64; 2]; 2] {
    pauli_combination(1.0, 0.0, 0.0)
}

pub fn sigma_y() -> [[C64; 2]; 2] {
    pauli_combination(0.0, 1.0, 0.0)
}

pub fn sigma_z() -> [[C64; 2]; 2] {
    pauli_combination(0.0, 0.0, 1.0)
}

/// A 2×2 complex matrix expected to be unitary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary2 {
    m: [[C64; 2]; 2],
}

impl Unitary2 {
    pub fn identity() -> Self {
        Self { m: [[ONE, ZERO], [ZERO, ONE]] }
    }

    /// Wraps a matrix, rejecting it unless `U†U = I` within `tol`.
    pub fn from_matrix(m: [[C64; 2]; 2], tol: f64) -> Result<Self> {
        let u = Self { m };
        let dev = u.unitarity_defect();
        if dev.is_nan() || dev > tol {
            return Err(domain(format!("matrix is not unitary (|U†U - I| = {dev:e})")));
        }
        Ok(u)
    }

    /// Builds a unitary from two columns; the second column is
    /// orthonormalized against the first.
    pub fn from_columns(first: [C64; 2], second: [C64; 2]) -> Result<Self> {
        let n0 = (first[0].norm_sqr() + first[1].norm_sqr()).sqrt();
        if n0.is_nan() || n0 == 0.0 {
            return Err(domain("first column is zero"));
        }
        let a = [first[0] / n0, first[1] / n0];
        let proj = a[0].conj() * second[0] + a[1].conj() * second[1];
        let b = [second[0] - a[0] * proj, second[1] - a[1] * proj];
        let n1 = (b[0].norm_sqr() + b[1].norm_sqr()).sqrt();
        if n1.is_nan() || n1 == 0.0 {
            return Err(domain("columns are linearly dependent"));
        }
        Ok(Self { m: [[a[0], b[0] / n1], [a[1], b[1] / n1]] })
    }

    pub fn matrix(&self) -> [[C64; 2]; 2] {
        self.m
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.m[row][col]
    }

    pub fn dagger(&self) -> Self {
        let m = self.m;
        Self { m: [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]] }
    }

    pub fn apply(&self, psi: &StateVector) -> StateVector {
        let [a, b] = psi.amplitudes();
        let out = [
            self.m[0][0] * a + self.m[0][1] * b,
            self.m[1][0] * a + self.m[1][1] * b,
        ];
        StateVector::from_unnormalized(out[0], out[1]).expect("unitary maps unit kets to unit kets")
    }

    pub fn trace(&self) -> C64 {
        self.m[0][0] + self.m[1][1]
    }

    /// `max |(U†U - I)_{ij}|`.
    pub fn unitarity_defect(&self) -> f64 {
        let p = matmul(&self.dagger().m, &self.m);
        max_abs_diff(&p, &Self::identity().m)
    }

    /// Elementwise `max |A_{ij} - B_{ij}|`.
    pub fn max_deviation(&self, other: &Unitary2) -> f64 {
        max_abs_diff(&self.m, &other.m)
    }

    /// `min_α max |e^{iα} A_{ij} - B_{ij}|`, with α taken from the phase of
    /// `tr(A†B)`.
    pub fn deviation_up_to_phase(&self, other: &Unitary2) -> f64 {
        let overlap = matmul(&self.dagger().m, &other.m);
        let tr = overlap[0][0] + overlap[1][1];
        let phase = if tr.norm() > 0.0 { tr / tr.norm() } else { ONE };
        let mut aligned = self.m;
        for row in aligned.iter_mut() {
            for v in row.iter_mut() {
                *v *= phase;
            }
        }
        max_abs_diff(&aligned, &other.m)
    }

    /// Average gate fidelity-style overlap `|tr(A†B)|/2`.
    pub fn phase_insensitive_overlap(&self, other: &Unitary2) -> f64 {
        let p = matmul(&self.dagger().m, &other.m);
        (p[0][0] + p[1][1]).norm() / 2.0
    }
}

impl Mul for Unitary2 {
    type Output = Unitary2;

    fn mul(self, rhs: Unitary2) -> Unitary2 {
        Unitary2 { m: matmul(&self.m, &rhs.m) }
    }
}

impl Serialize for Unitary2 {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Parts {
            re: [[f64; 2]; 2],
            im: [[f64; 2]; 2],
        }
        let m = self.m;
        Parts {
            re: [[m[0][0].re, m[0][1].re], [m[1][0].re, m[1][1].re]],
            im: [[m[0][0].im, m[0][1].im], [m[1][0].im, m[1][1].im]],
        }
        .serialize(serializer)
    }
}

pub(crate) fn matmul(a: &[[C64; 2]; 2], b: &[[C64; 2]; 2]) -> [[C64; 2]; 2] {
    let mut out = [[ZERO; 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn max_abs_diff(a: &[[C64; 2]; 2], b: &[[C64; 2]; 2]) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            worst = worst.max((a[i][j] - b[i][j]).norm());
        }
    }
    worst
}

/// `exp(-i angle/2 axis·σ) = cos(angle/2) I - i sin(angle/2) axis·σ`.
pub fn su2_rotation(axis: &BlochVector, angle: f64) -> Unitary2 {
    let (s, c) = (0.5 * angle).sin_cos();
    let p = pauli_combination(axis.x, axis.y, axis.z);
    let mut m = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let id = if i == j { c } else { 0.0 };
            m[i][j] = C64::new(id, 0.0) - I * s * p[i][j];
        }
    }
    Unitary2 { m }
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_phase(angle: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let mut a = angle.rem_euclid(TAU);
    if a > PI {
        a -= TAU;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn bloch_to_state_examples() {
        let n = bloch_to_state(&BlochVector::PLUS_Z);
        assert!(close(n.c0(), ONE, 1e-15) && close(n.c1(), ZERO, 1e-15));

        let y = bloch_to_state(&BlochVector::PLUS_Y);
        assert!(close(y.c0(), C64::new(FRAC_1_SQRT_2, 0.0), 1e-15));
        assert!(close(y.c1(), C64::new(0.0, FRAC_1_SQRT_2), 1e-15));

        let x = bloch_to_state(&BlochVector::PLUS_X);
        assert!(close(x.c0(), C64::new(FRAC_1_SQRT_2, 0.0), 1e-15));
        assert!(close(x.c1(), C64::new(FRAC_1_SQRT_2, 0.0), 1e-15));

        let s = bloch_to_state(&BlochVector::MINUS_Z);
        assert_eq!(s.amplitudes(), [ZERO, ONE]);
    }

    #[test]
    fn plus_y_state_matches_written_form_up_to_global_phase() {
        // e^{iπ/4}(|0⟩ + i|1⟩)/√2
        let written = StateVector::new(
            C64::from_polar(FRAC_1_SQRT_2, FRAC_PI_4),
            C64::from_polar(FRAC_1_SQRT_2, FRAC_PI_4) * I,
        )
        .unwrap();
        let ours = bloch_to_state(&BlochVector::PLUS_Y);
        assert!((ours.inner(&written).norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn state_to_bloch_examples() {
        let b = state_to_bloch(&StateVector::ground());
        assert!(b.max_deviation(&BlochVector::PLUS_Z) < 1e-15);

        let psi = StateVector::new(C64::new(FRAC_1_SQRT_2, 0.0), C64::new(0.0, FRAC_1_SQRT_2)).unwrap();
        assert!(state_to_bloch(&psi).max_deviation(&BlochVector::PLUS_Y) < 1e-15);
        let rotated = psi.with_global_phase(FRAC_PI_4);
        assert!(state_to_bloch(&rotated).max_deviation(&BlochVector::PLUS_Y) < 1e-15);
    }

    #[test]
    fn rejects_non_unit_inputs() {
        assert!(BlochVector::new(1.0, 1.0, 0.0).is_err());
        assert!(BlochVector::from_direction(0.0, 0.0, 0.0).is_err());
        assert!(StateVector::from_unnormalized(ZERO, ZERO).is_err());
        assert!(StateVector::new(ONE, ONE).is_err());
    }

    /// Brute-force `⟨ψ|H|ψ⟩` from the explicit matrix.
    fn matrix_element(psi: &StateVector, h: &HamiltonianSample) -> C64 {
        let m = h.matrix();
        let [a, b] = psi.amplitudes();
        let ha = m[0][0] * a + m[0][1] * b;
        let hb = m[1][0] * a + m[1][1] * b;
        a.conj() * ha + b.conj() * hb
    }

    #[test]
    fn energy_expectation_examples() {
        let y = bloch_to_state(&BlochVector::PLUS_Y);
        let h = HamiltonianSample::new(2.0 * PI, BlochVector::PLUS_X, 0.0);
        assert!(energy_expectation(&y, &h).abs() < 1e-15);

        let hz = HamiltonianSample::new(0.0, BlochVector::PLUS_Y, 2.0 * PI);
        assert!((energy_expectation(&StateVector::ground(), &hz) - PI).abs() < 1e-15);

        let x = bloch_to_state(&BlochVector::PLUS_X);
        let hx = HamiltonianSample::new(FRAC_PI_2, BlochVector::PLUS_X, 0.0);
        let oracle = matrix_element(&x, &hx);
        assert!(oracle.im.abs() < 1e-15);
        assert!((oracle.re - FRAC_PI_4).abs() < 1e-15);
        assert!((energy_expectation(&x, &hx) - oracle.re).abs() < 1e-12);
    }

    #[test]
    fn rotation_examples() {
        let id = su2_rotation(&BlochVector::PLUS_X, 0.0);
        assert!(id.max_deviation(&Unitary2::identity()) < 1e-15);

        let rz = su2_rotation(&BlochVector::PLUS_Z, PI);
        let expect = Unitary2::from_matrix(
            [[C64::from_polar(1.0, -FRAC_PI_2), ZERO], [ZERO, C64::from_polar(1.0, FRAC_PI_2)]],
            1e-12,
        )
        .unwrap();
        assert!(rz.max_deviation(&expect) < 1e-15);

        let x90 = su2_rotation(&BlochVector::PLUS_X, FRAC_PI_2);
        let y180 = su2_rotation(&BlochVector::PLUS_Y, PI);
        let composite = x90 * y180 * x90;
        assert!(composite.max_deviation(&y180) < 1e-12);
    }

    #[test]
    fn rotation_moves_bloch_vectors_right_handedly() {
        // +90° about x takes +y to +z.
        let u = su2_rotation(&BlochVector::PLUS_X, FRAC_PI_2);
        let out = state_to_bloch(&u.apply(&bloch_to_state(&BlochVector::PLUS_Y)));
        assert!(out.max_deviation(&BlochVector::PLUS_Z) < 1e-14);
    }

    #[test]
    fn deviation_up_to_phase_ignores_global_phase() {
        let u = su2_rotation(&BlochVector::PLUS_Y, PI);
        let mut m = u.matrix();
        for row in m.iter_mut() {
            for v in row.iter_mut() {
                *v *= C64::from_polar(1.0, 0.7);
            }
        }
        let shifted = Unitary2::from_matrix(m, 1e-12).unwrap();
        assert!(shifted.max_deviation(&u) > 0.1);
        assert!(shifted.deviation_up_to_phase(&u) < 1e-14);
    }

    #[test]
    fn wrap_phase_range() {
        assert_eq!(wrap_phase(PI), PI);
        assert!((wrap_phase(-PI) - PI).abs() < 1e-15);
        assert!((wrap_phase(3.0 * PI / 2.0) + FRAC_PI_2).abs() < 1e-15);
        assert!((wrap_phase(-FRAC_PI_2) + FRAC_PI_2).abs() < 1e-15);
        assert_eq!(wrap_phase(0.0), 0.0);
    }

    #[test]
    fn from_columns_orthonormalizes() {
        let u = Unitary2::from_columns([ONE, ZERO], [C64::new(0.1, 0.0), ONE]).unwrap();
        assert!(u.unitarity_defect() < 1e-15);
        assert!(Unitary2::from_columns([ONE, ZERO], [ONE, ZERO]).is_err());
    }
}
