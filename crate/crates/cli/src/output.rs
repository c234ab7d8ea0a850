use gevrey_core::classifier::ClassificationVerdict;
use gevrey_core::counterexamples::{CaseVariant, FailureReport};
use gevrey_core::evolution::{AdmissibilityCertificate, GrowthTable, OrderEstimate};
use gevrey_core::serde_float;
use gevrey_core::SpectrumSpec;
use serde::{Deserialize, Serialize};

use crate::failure::Failure;
use crate::job::{CaseSelector, Command, VectorSpec, SCHEMA_VERSION};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyOutput {
    #[serde(flatten)]
    pub verdict: ClassificationVerdict<f64>,
    /// Closed-form least Roumieu order; absent when the spectrum does not determine it.
    #[serde(with = "serde_float::option")]
    pub minimal_roumieu_order: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorOutput {
    /// Whether the spectrum has the analyticity property a sector needs.
    pub analytic: bool,
    pub theta: Option<f64>,
    /// `θ ≤ 10⁻⁹`: the sector has collapsed onto the positive axis.
    pub degenerate: bool,
    pub reason: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Admissibility {
    pub admissible: bool,
    /// First probed `t` at which `f ∉ D(e^{tA})`.
    pub failing_t: Option<f64>,
    pub reason: Option<String>,
    pub certificate: Option<AdmissibilityCertificate<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulateOutput {
    pub admissibility: Admissibility,
    /// `‖A^n y(t)‖` over the grid; absent when `f` is not admissible.
    pub growth_table: Option<GrowthTable<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateRow {
    pub t: f64,
    #[serde(flatten)]
    pub estimate: OrderEstimate<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateOutput {
    pub admissibility: Admissibility,
    pub estimates: Vec<EstimateRow>,
    #[serde(with = "serde_float::option")]
    pub minimal_roumieu_order: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub kind: CaseSelector,
    #[serde(flatten)]
    pub variant: CaseVariant<f64>,
    pub beta: f64,
    pub spectrum: SpectrumSpec,
    pub vector: VectorSpec,
    pub witness_functional: VectorSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleOutput {
    pub case: CaseRecord,
    pub admissibility: Admissibility,
    pub report: FailureReport<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    /// Largest discrepancy seen, in the check's own unit.
    #[serde(with = "serde_float")]
    pub max_error: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyOutput {
    pub seed: u64,
    pub checks: Vec<CheckResult>,
    pub all_passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum Output {
    Classify(ClassifyOutput),
    Sector(SectorOutput),
    Simulate(SimulateOutput),
    Estimate(EstimateOutput),
    Counterexample(CounterexampleOutput),
    Verify(VerifyOutput),
}

impl Output {
    pub fn command(&self) -> Command {
        match self {
            Output::Classify(_) => Command::Classify,
            Output::Sector(_) => Command::Sector,
            Output::Simulate(_) => Command::Simulate,
            Output::Estimate(_) => Command::Estimate,
            Output::Counterexample(_) => Command::Counterexample,
            Output::Verify(_) => Command::Verify,
        }
    }
}

/// Everything a run prints: a result or a failure, tagged with the schema version.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
#[allow(clippy::large_enum_variant)]
pub enum Response {
    Failed {
        schema_version: u32,
        command: Option<Command>,
        error: Failure,
    },
    Done {
        schema_version: u32,
        #[serde(flatten)]
        output: Output,
    },
}

impl Response {
    pub fn done(output: Output) -> Self {
        Response::Done { schema_version: SCHEMA_VERSION, output }
    }

    pub fn failed(command: Option<Command>, error: Failure) -> Self {
        Response::Failed { schema_version: SCHEMA_VERSION, command, error }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("responses serialize") + "\n"
    }

    pub fn parse(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}
