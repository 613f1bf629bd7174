//! CSV writers for trajectories and sweeps.

use std::io::{self, Write};

use crate::experiments::{Check, SweepPoint};
use crate::propagator::Trajectory;
use crate::su2::wrap_phase;

pub const TRAJECTORY_HEADER: &str = "t,nx,ny,nz,re_c0,im_c0,re_c1,im_c1";

pub const SWEEP_HEADER: &str = "scenario,f0,g0,xi,eta,symmetry,gamma_total_plus,gamma_dynamical_plus,\
gamma_geometric_plus,gamma_total_minus,gamma_dynamical_minus,gamma_geometric_minus,geometric_shift_plus,\
solid_angle_plus,fidelity_plus,end_x,end_y,end_z,passed,failure";

/// `%.12g`-style formatting.
pub fn fmt_g12(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{v:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{v:.11e}");
        let (mantissa, exponent) = s.split_once('e').expect("exponent present");
        let mantissa = if mantissa.contains('.') { mantissa.trim_end_matches('0').trim_end_matches('.') } else { mantissa };
        format!("{mantissa}e{exponent}")
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_g12).unwrap_or_default()
}

/// Writes every `every`-th node plus the last one.
pub fn write_trajectory_csv<W: Write + ?Sized>(out: &mut W, traj: &Trajectory, every: usize) -> io::Result<()> {
    let every = every.max(1);
    writeln!(out, "# gauge: c0 real and non-negative, south pole -> (0, 1)")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRAJECTORY_HEADER.split(','))?;
    let last = traj.len().saturating_sub(1);
    for (k, ((t, psi), n)) in traj.times().iter().zip(traj.states()).zip(traj.bloch()).enumerate() {
        if k % every != 0 && k != last {
            continue;
        }
        let [c0, c1] = psi.amplitudes();
        w.write_record([*t, n.x, n.y, n.z, c0.re, c0.im, c1.re, c1.im].map(fmt_g12))?;
    }
    w.flush()
}

fn first_observed(c: Option<&Check>) -> Option<f64> {
    c.and_then(|c| c.observed.first().copied())
}

pub fn write_sweep_csv<W: Write + ?Sized>(out: &mut W, points: &[SweepPoint]) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER.split(','))?;
    for p in points {
        let r = &p.report;
        let gate = r.gate.as_ref();
        let symmetry = r.symmetry.map(|s| format!("{s:?}")).unwrap_or_default();
        let end = r
            .endpoint("n_plus_final")
            .or_else(|| r.endpoint("hb_fluctuated"))
            .map(|b| b.components());
        let shift = gate.map(|g| wrap_phase(g.plus.gamma_geometric + std::f64::consts::FRAC_PI_2));
        let fields = [
            p.scenario.name().to_string(),
            fmt_g12(p.f0),
            fmt_g12(p.g0),
            p.xi.to_string(),
            p.eta.to_string(),
            symmetry,
            opt(gate.map(|g| g.plus.gamma_total)),
            opt(gate.map(|g| g.plus.gamma_dynamical)),
            opt(gate.map(|g| g.plus.gamma_geometric)),
            opt(gate.map(|g| g.minus.gamma_total)),
            opt(gate.map(|g| g.minus.gamma_dynamical)),
            opt(gate.map(|g| g.minus.gamma_geometric)),
            opt(shift),
            opt(gate.and_then(|g| g.solid_angle_plus).or_else(|| first_observed(r.check("solid_angle_plus")))),
            opt(gate.map(|g| g.plus.fidelity)),
            opt(end.map(|e| e[0])),
            opt(end.map(|e| e[1])),
            opt(end.map(|e| e[2])),
            r.passed().to_string(),
            r.failure.clone().unwrap_or_default(),
        ];
        w.write_record(&fields)?;
    }
    w.flush()
}
