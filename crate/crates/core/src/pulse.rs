//! Pulse-sequence notation.
//!
//! ```text
//! seq   := pulse+
//! pulse := ANGLE (AXIS | "(" SIGNED_NUMBER ")")
//! AXIS  := "x" | "y" | "-x" | "-y"
//! ```
//!
//! `90x 180y 90x` (or `90x180y90x`) is a 90° rotation about +x, then 180°
//! about +y, then 90° about +x. `90(30)` drives at rf phase 30°. Durations
//! are proportional to rotation angle at a constant drive amplitude, and the
//! whole sequence is scaled to unit time.

use std::f64::consts::TAU;
use std::fmt;

use crate::error::{domain, ParseError, Result};
use crate::propagator::{Hamiltonian, Side};
use crate::su2::{su2_rotation, BlochVector, HamiltonianSample, Unitary2};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSegment {
    pub angle_deg: f64,
    /// rf phase: 0 = +x, 90 = +y.
    pub phase_deg: f64,
    pub t_start: f64,
    pub t_end: f64,
}

impl PulseSegment {
    pub fn duration(&self) -> f64 {
        self.t_end - self.t_start
    }

    pub fn axis(&self) -> BlochVector {
        BlochVector::in_plane(self.phase_deg.to_radians())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PulseSequence {
    segments: Vec<PulseSegment>,
    breakpoints: Vec<f64>,
    total_angle_deg: f64,
}

impl PulseSequence {
    /// Lays out `(angle_deg, phase_deg)` pulses over unit time.
    pub fn from_pulses(pulses: &[(f64, f64)]) -> Result<Self> {
        if pulses.is_empty() {
            return Err(domain("a pulse sequence needs at least one pulse"));
        }
        if let Some((a, _)) = pulses.iter().find(|(a, _)| !(a.is_finite() && *a > 0.0)) {
            return Err(domain(format!("pulse angle must be positive, got {a}")));
        }
        if let Some((_, p)) = pulses.iter().find(|(_, p)| !p.is_finite()) {
            return Err(domain(format!("pulse phase must be finite, got {p}")));
        }
        let total: f64 = pulses.iter().map(|(a, _)| a).sum();
        let mut breakpoints = Vec::with_capacity(pulses.len() + 1);
        breakpoints.push(0.0);
        let mut cumulative = 0.0;
        for (i, (a, _)) in pulses.iter().enumerate() {
            cumulative += a;
            breakpoints.push(if i + 1 == pulses.len() { 1.0 } else { cumulative / total });
        }
        let segments = pulses
            .iter()
            .zip(breakpoints.windows(2))
            .map(|(&(angle_deg, phase_deg), w)| PulseSegment {
                angle_deg,
                phase_deg,
                t_start: w[0],
                t_end: w[1],
            })
            .collect();
        Ok(Self { segments, breakpoints, total_angle_deg: total })
    }

    /// The `90x 180y 90x` sequence.
    pub fn composite_90x180y90x() -> Self {
        Self::from_pulses(&[(90.0, 0.0), (180.0, 90.0), (90.0, 0.0)]).expect("valid sequence")
    }

    pub fn segments(&self) -> &[PulseSegment] {
        &self.segments
    }

    /// `[0, t1, ..., 1]`.
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn total_angle_deg(&self) -> f64 {
        self.total_angle_deg
    }

    /// Constant drive amplitude ω that rotates every segment by its angle
    /// in its allotted time: the total angle in radians.
    pub fn ideal_amplitude(&self) -> f64 {
        self.total_angle_deg / 360.0 * TAU
    }

    pub fn is_composite_90x180y90x(&self) -> bool {
        const EXPECTED: [(f64, f64); 3] = [(90.0, 0.0), (180.0, 90.0), (90.0, 0.0)];
        self.segments.len() == 3
            && self.segments.iter().zip(EXPECTED).all(|(s, (a, p))| {
                (s.angle_deg - a).abs() < 1e-12 && (s.phase_deg - p).rem_euclid(360.0) < 1e-12
            })
    }

    pub(crate) fn segment_index(&self, t: f64, side: Side) -> usize {
        let last = self.segments.len() - 1;
        match side {
            Side::Right => self.segments.iter().position(|s| t < s.t_end).unwrap_or(last),
            Side::Left => self.segments.iter().position(|s| t <= s.t_end).unwrap_or(last),
        }
    }

    /// rf phase in radians of the piece active at `t`.
    pub fn phase_at(&self, t: f64, side: Side) -> f64 {
        self.segments[self.segment_index(t, side)].phase_deg.to_radians()
    }

    pub(crate) fn sample(&self, t: f64, side: Side) -> HamiltonianSample {
        HamiltonianSample::new(
            self.ideal_amplitude(),
            BlochVector::in_plane(self.phase_at(t, side)),
            0.0,
        )
    }

    /// The ideal drive at `t`; at an interior breakpoint the later pulse
    /// applies.
    pub fn ideal_hamiltonian_at(&self, t: f64) -> Result<HamiltonianSample> {
        check_time(t)?;
        Ok(self.sample(t, Side::Right))
    }

    /// Product of the per-pulse rotations, first pulse rightmost.
    pub fn closed_form_unitary(&self) -> Unitary2 {
        self.segments.iter().fold(Unitary2::identity(), |acc, s| {
            su2_rotation(&s.axis(), s.angle_deg.to_radians()) * acc
        })
    }
}

impl Hamiltonian for PulseSequence {
    fn breakpoints(&self) -> Vec<f64> {
        self.breakpoints.clone()
    }

    fn sample(&self, t: f64, side: Side) -> HamiltonianSample {
        PulseSequence::sample(self, t, side)
    }
}

impl fmt::Display for PulseSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.segments.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            let phase = s.phase_deg.rem_euclid(360.0);
            let axis = match phase {
                0.0 => Some("x"),
                90.0 => Some("y"),
                180.0 => Some("-x"),
                270.0 => Some("-y"),
                _ => None,
            };
            match axis {
                Some(a) => write!(f, "{}{a}", s.angle_deg)?,
                None => write!(f, "{}({})", s.angle_deg, s.phase_deg)?,
            }
        }
        Ok(())
    }
}

pub(crate) fn check_time(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(domain(format!("time {t} outside [0, 1]")));
    }
    Ok(())
}

/// Parses pulse notation into a schedule over `[0, 1]`.
pub fn parse_sequence(text: &str) -> std::result::Result<PulseSequence, ParseError> {
    let mut lexer = Lexer { bytes: text.as_bytes(), pos: 0, token: 0 };
    let mut pulses = Vec::new();
    loop {
        lexer.skip_ws();
        if lexer.at_end() {
            break;
        }
        lexer.token += 1;
        pulses.push(lexer.pulse()?);
    }
    if pulses.is_empty() {
        return Err(ParseError { token: 0, offset: 0, message: "empty pulse sequence".into() });
    }
    Ok(PulseSequence::from_pulses(&pulses).expect("parser only yields positive finite pulses"))
}

struct Lexer<'a> {
    bytes: &'a [u8],
    pos: usize,
    token: usize,
}

impl Lexer<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.bytes.len()
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn error(&self, offset: usize, message: impl Into<String>) -> ParseError {
        ParseError { token: self.token, offset, message: message.into() }
    }

    fn number(&mut self, signed: bool) -> std::result::Result<f64, ParseError> {
        let start = self.pos;
        if signed && matches!(self.peek(), Some(b'-' | b'+')) {
            self.pos += 1;
        }
        while self.peek().is_some_and(|b| b.is_ascii_digit() || b == b'.') {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap_or("");
        text.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| self.error(start, format!("expected a number, found {:?}", self.rest_of_token(start))))
    }

    fn rest_of_token(&self, start: usize) -> String {
        let end = self.bytes[start..]
            .iter()
            .position(|b| b.is_ascii_whitespace())
            .map_or(self.bytes.len(), |p| start + p);
        String::from_utf8_lossy(&self.bytes[start..end]).into_owned()
    }

    fn pulse(&mut self) -> std::result::Result<(f64, f64), ParseError> {
        let start = self.pos;
        if !self.peek().is_some_and(|b| b.is_ascii_digit() || b == b'.') {
            return Err(self.error(
                start,
                format!("expected a positive rotation angle, found {:?}", self.rest_of_token(start)),
            ));
        }
        let angle = self.number(false)?;
        if angle <= 0.0 {
            return Err(self.error(start, format!("rotation angle must be positive, got {angle}")));
        }
        let axis_at = self.pos;
        let phase = match (self.peek(), self.bytes.get(self.pos + 1).copied()) {
            (Some(b'x'), _) => {
                self.pos += 1;
                0.0
            }
            (Some(b'y'), _) => {
                self.pos += 1;
                90.0
            }
            (Some(b'-'), Some(b'x')) => {
                self.pos += 2;
                180.0
            }
            (Some(b'-'), Some(b'y')) => {
                self.pos += 2;
                270.0
            }
            (Some(b'('), _) => {
                self.pos += 1;
                self.skip_ws();
                let p = self.number(true)?;
                self.skip_ws();
                if self.peek() != Some(b')') {
                    return Err(self.error(self.pos, "expected ')' after rf phase"));
                }
                self.pos += 1;
                p
            }
            (None, _) => return Err(self.error(axis_at, "missing axis after rotation angle")),
            _ => {
                return Err(self.error(
                    axis_at,
                    format!(
                        "unknown axis {:?} (expected x, y, -x, -y or (phase))",
                        self.rest_of_token(axis_at)
                    ),
                ))
            }
        };
        Ok((angle, phase))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn parses_composite_pulse() {
        let seq = parse_sequence("90x 180y 90x").unwrap();
        assert_eq!(seq.segments().len(), 3);
        assert_eq!(seq.breakpoints(), &[0.0, 0.25, 0.75, 1.0]);
        let phases: Vec<f64> = seq.segments().iter().map(|s| s.phase_deg).collect();
        assert_eq!(phases, vec![0.0, 90.0, 0.0]);
        assert!(seq.is_composite_90x180y90x());
        assert_eq!(seq, parse_sequence("90x180y90x").unwrap());
    }

    #[test]
    fn single_pulse_covers_unit_time() {
        let seq = parse_sequence("180y").unwrap();
        assert_eq!(seq.breakpoints(), &[0.0, 1.0]);
        assert_eq!(seq.segments()[0].phase_deg, 90.0);
        assert!((seq.ideal_amplitude() - PI).abs() < 1e-15);
    }

    #[test]
    fn parse_errors_report_token() {
        let err = parse_sequence("90q").unwrap_err();
        assert_eq!(err.token, 1);
        assert_eq!(err.offset, 2);

        let err = parse_sequence("90x 0y").unwrap_err();
        assert_eq!(err.token, 2);
        assert!(err.message.contains("positive"));

        let err = parse_sequence("90x -90y").unwrap_err();
        assert_eq!(err.token, 2);

        assert_eq!(parse_sequence("").unwrap_err().token, 0);
        assert_eq!(parse_sequence("   ").unwrap_err().token, 0);
        assert!(parse_sequence("90").is_err());
        assert!(parse_sequence("90(30").is_err());
        assert!(parse_sequence("90xy").is_err());
    }

    #[test]
    fn phase_notation_and_negative_axes() {
        let seq = parse_sequence("90(30) 45-x 45-y 10( -15.5 )").unwrap();
        let phases: Vec<f64> = seq.segments().iter().map(|s| s.phase_deg).collect();
        assert_eq!(phases, vec![30.0, 180.0, 270.0, -15.5]);
        assert_eq!(seq.to_string(), "90(30) 45-x 45-y 10(-15.5)");
    }

    #[test]
    fn amplitude_examples() {
        let seq = PulseSequence::composite_90x180y90x();
        assert!((seq.ideal_amplitude() - 2.0 * PI).abs() < 1e-15);
        let four = parse_sequence("90x 90y 90x 90y").unwrap();
        assert!((four.ideal_amplitude() - 2.0 * PI).abs() < 1e-15);
        // each segment rotates by exactly 90°
        for s in four.segments() {
            assert!((four.ideal_amplitude() * s.duration() - PI / 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn ideal_hamiltonian_examples() {
        let seq = PulseSequence::composite_90x180y90x();
        let h = seq.ideal_hamiltonian_at(0.1).unwrap();
        assert!((h.omega - 2.0 * PI).abs() < 1e-15);
        assert!(h.axis.max_deviation(&BlochVector::PLUS_X) < 1e-15);
        let h = seq.ideal_hamiltonian_at(0.5).unwrap();
        assert!(h.axis.max_deviation(&BlochVector::PLUS_Y) < 1e-15);
        let h = seq.ideal_hamiltonian_at(0.25).unwrap();
        assert!(h.axis.max_deviation(&BlochVector::PLUS_Y) < 1e-15);
        assert_eq!(h.detuning_z, 0.0);
        assert!(seq.ideal_hamiltonian_at(1.0).is_ok());
        assert!(seq.ideal_hamiltonian_at(1.5).is_err());
        assert!(seq.ideal_hamiltonian_at(-0.1).is_err());
        // left limit at a breakpoint belongs to the earlier pulse
        assert!(seq.sample(0.25, Side::Left).axis.max_deviation(&BlochVector::PLUS_X) < 1e-15);
    }

    #[test]
    fn composite_closed_form_is_y_pi() {
        let seq = parse_sequence("90x 180y 90x").unwrap();
        let y180 = su2_rotation(&BlochVector::PLUS_Y, PI);
        assert!(seq.closed_form_unitary().max_deviation(&y180) < 1e-10);
    }

    #[test]
    fn durations_sum_to_one() {
        let seq = parse_sequence("17x 33.3y 91(12) 7-x 200-y 0.5x").unwrap();
        let mut sum = 0.0;
        let mut comp = 0.0;
        for s in seq.segments() {
            let y = s.duration() - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        assert!((sum - 1.0).abs() < 1e-15);
        assert_eq!(*seq.breakpoints().last().unwrap(), 1.0);
        for w in seq.segments().windows(2) {
            assert_eq!(w[0].t_end, w[1].t_start);
        }
    }
}
