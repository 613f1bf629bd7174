//! JSON profile configuration.
//!
//! ```json
//! {"kind": "piecewise_sine", "f0": 0.1, "g0": 0.1, "xi": 5, "eta": 5}
//! {"kind": "global_sine", "f0": 1.0, "g0": 1.0, "xi": 10, "eta": 10}
//! {"kind": "tabulated", "samples": [[0.0, 0.0, 0.0], [0.5, 0.01, 0.02], [1.0, 0.0, 0.0]]}
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fluctuation::{
    check_boundary_conditions, cycles_from_f64, global_sine_profile, piecewise_sine_profile, tabulated_profile,
    FluctuationProfile,
};
use crate::pulse::PulseSequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    PiecewiseSine,
    GlobalSine,
    Tabulated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileConfig {
    pub kind: ProfileKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<[f64; 3]>>,
}

impl ProfileConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid profile JSON: {e}")))
    }

    fn required(&self, name: &str, value: Option<f64>) -> Result<f64> {
        value.ok_or_else(|| Error::Config(format!("{:?} profile needs \"{name}\"", self.kind)))
    }

    /// Builds the profile; piecewise sines use the pieces of `seq`.
    /// Profiles violating the end-point conditions are rejected.
    pub fn build(&self, seq: &PulseSequence) -> Result<FluctuationProfile> {
        let profile = match self.kind {
            ProfileKind::PiecewiseSine | ProfileKind::GlobalSine => {
                if self.samples.is_some() {
                    return Err(Error::Config("\"samples\" is only valid for tabulated profiles".into()));
                }
                let f0 = self.required("f0", self.f0)?;
                let g0 = self.required("g0", self.g0)?;
                let xi = cycles_from_f64("xi", self.required("xi", self.xi)?)?;
                let eta = cycles_from_f64("eta", self.required("eta", self.eta)?)?;
                if self.kind == ProfileKind::PiecewiseSine {
                    piecewise_sine_profile(f0, g0, xi, eta, seq.breakpoints())?
                } else {
                    global_sine_profile(f0, g0, xi, eta)?
                }
            }
            ProfileKind::Tabulated => {
                if self.f0.is_some() || self.g0.is_some() || self.xi.is_some() || self.eta.is_some() {
                    return Err(Error::Config("tabulated profiles take only \"samples\"".into()));
                }
                let samples = self
                    .samples
                    .as_ref()
                    .ok_or_else(|| Error::Config("tabulated profile needs \"samples\"".into()))?;
                tabulated_profile(samples)?
            }
        };
        let check = check_boundary_conditions(&profile);
        if !check.satisfied {
            return Err(Error::Config(format!(
                "profile violates f(0) = g(0) = f(1) = g(1) = 0: residuals {:?}",
                check.residuals
            )));
        }
        Ok(profile)
    }
}
