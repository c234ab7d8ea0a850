use std::path::PathBuf;

use gevrey_core::{ComplexPoint, DecayRule, SpectrumSpec, StateVector};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::failure::Failure;

pub const SCHEMA_VERSION: u32 = 1;

/// Head length of closed-form vectors when neither the job nor `--truncation` sets one.
pub const DEFAULT_TRUNCATION: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Classify,
    Sector,
    Simulate,
    Estimate,
    Counterexample,
    Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Roumieu,
    Beurling,
    Analytic,
}

/// Which canonical adversarial construction a `counterexample` job builds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseSelector {
    BoundedRe,
    BoundedReOscillating,
    ReToPlusInfinity,
    ReToMinusInfinity,
    FiniteControl,
}

/// Initial vectors on the wire.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum VectorSpec {
    Finite {
        coeffs: Vec<ComplexPoint>,
    },
    /// `c_k = scale · k^{−power} · e^{−rate·k^{stretch}}`.
    ClosedForm {
        #[serde(default = "one")]
        scale: f64,
        #[serde(default)]
        power: f64,
        #[serde(default)]
        rate: f64,
        #[serde(default = "one")]
        stretch: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        truncation: Option<usize>,
    },
}

fn one() -> f64 {
    1.0
}

impl VectorSpec {
    /// `truncation` overrides the vector's own head length.
    pub fn build(&self, truncation: Option<usize>) -> Result<StateVector, Failure> {
        let v = match self {
            VectorSpec::Finite { coeffs } => StateVector::finite(coeffs.iter().map(|c| c.to_complex()).collect()),
            VectorSpec::ClosedForm { scale, power, rate, stretch, truncation: own } => {
                let rule = DecayRule { scale: *scale, power: *power, rate: *rate, stretch: *stretch };
                StateVector::closed_form(rule, truncation.or(*own).unwrap_or(DEFAULT_TRUNCATION))
            }
        };
        Ok(v?)
    }

    /// Inverse of [`VectorSpec::build`]; `None` for vectors that went through the calculus.
    pub fn describe(v: &StateVector) -> Option<Self> {
        if let Some(rule) = v.decay_rule() {
            return Some(VectorSpec::ClosedForm {
                scale: rule.scale,
                power: rule.power,
                rate: rule.rate,
                stretch: rule.stretch,
                truncation: Some(v.truncation()),
            });
        }
        if v.has_tail() {
            return None;
        }
        let coeffs = v.head().iter().map(|c: &Complex<f64>| ComplexPoint::new(c.re, c.im)).collect::<Result<_, _>>();
        coeffs.ok().map(|coeffs| VectorSpec::Finite { coeffs })
    }
}

/// One batch job. Field requirements depend on `command`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub schema_version: u32,
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<Variant>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vector: Option<VectorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_window: Option<[u32; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case_kind: Option<CaseSelector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_minus: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
}

/// Parses a job, reporting the line and column of malformed JSON.
pub fn parse_job(text: &str) -> Result<JobSpec, Failure> {
    let job: JobSpec = serde_json::from_str(text).map_err(Failure::from_json)?;
    job.validate()?;
    Ok(job)
}

fn missing(field: &str, command: Command) -> Failure {
    Failure::invalid(format!("{command:?} jobs need `{field}`").to_lowercase())
}

fn check_grid(name: &str, grid: &Option<Vec<f64>>, strictly_positive: bool) -> Result<(), Failure> {
    let Some(g) = grid else { return Ok(()) };
    if g.is_empty() {
        return Err(Failure::invalid(format!("`{name}` is empty")));
    }
    let bad = g.iter().find(|x| !x.is_finite() || **x < 0.0 || (strictly_positive && **x == 0.0));
    match bad {
        Some(x) => Err(Failure::invalid(format!("`{name}` holds {x}"))),
        None => Ok(()),
    }
}

impl JobSpec {
    pub fn validate(&self) -> Result<(), Failure> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Failure::invalid(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let c = self.command;
        let needs_spectrum = matches!(c, Command::Classify | Command::Sector | Command::Simulate | Command::Estimate);
        if needs_spectrum && self.spectrum.is_none() {
            return Err(missing("spectrum", c));
        }
        if matches!(c, Command::Simulate | Command::Estimate) && self.vector.is_none() {
            return Err(missing("vector", c));
        }
        match c {
            Command::Classify => {
                if self.variant != Some(Variant::Analytic) && self.beta.is_none() {
                    return Err(missing("beta", c));
                }
            }
            Command::Counterexample => {
                if self.case_kind.is_none() {
                    return Err(missing("case_kind", c));
                }
                if self.beta.is_none() {
                    return Err(missing("beta", c));
                }
                match self.variant {
                    Some(Variant::Beurling) if self.b_minus.is_none() => return Err(missing("b_minus", c)),
                    Some(Variant::Analytic) => {
                        return Err(Failure::invalid("counterexample variants are roumieu or beurling"))
                    }
                    _ => {}
                }
                if self.spectrum.is_some() || self.vector.is_some() {
                    return Err(Failure::invalid("counterexample jobs build their own spectrum and vector"));
                }
            }
            _ => {}
        }
        check_grid("t_grid", &self.t_grid, false)?;
        check_grid("s_grid", &self.s_grid, true)?;
        if let Some([lo, hi]) = self.n_window {
            if lo > hi {
                return Err(Failure::invalid(format!("n_window [{lo}, {hi}] is reversed")));
            }
        }
        Ok(())
    }
}
