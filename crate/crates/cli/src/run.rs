use std::path::{Path, PathBuf};

use gevrey_core::classifier::{
    classify_analytic, classify_beurling, classify_roumieu, minimal_roumieu_order, sector, VerdictMethod,
};
use gevrey_core::counterexamples::{build_adversarial, build_oscillating, verify_failure, CaseKind, CaseVariant};
use gevrey_core::evolution::{estimate_gevrey_order, GrowthTable, DEFAULT_WINDOW};
use gevrey_core::spectral_model::sector_is_degenerate;
use gevrey_core::{AdversarialCase, DiagonalOperator, Error, StateVector, WeakSolution};

use crate::failure::{exit, Failure};
use crate::job::{CaseSelector, Command, JobSpec, Variant, VectorSpec};
use crate::output::{
    Admissibility, CaseRecord, ClassifyOutput, CounterexampleOutput, EstimateOutput, EstimateRow, Output, Response,
    SectorOutput, SimulateOutput,
};
use crate::verify;

const SIMULATE_T_GRID: [f64; 3] = [0.1, 1.0, 10.0];
const SIMULATE_N_WINDOW: [u32; 2] = [0, 5];
const CASE_GRID: [f64; 3] = [0.1, 1.0, 10.0];
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// Command-line settings that override or extend the job.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub truncation: Option<usize>,
    pub seed: Option<u64>,
}

/// What the process prints and how it exits.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub response: Response,
    pub exit_code: i32,
    /// Rows for `--format csv` and for the `output_path` side-file.
    pub csv: Option<String>,
}

impl Outcome {
    fn failed(command: Option<Command>, f: Failure) -> Self {
        Self { exit_code: f.exit_code(), response: Response::failed(command, f), csv: None }
    }

    /// Standard output text and exit code for the requested format.
    ///
    /// Failures always render as JSON.
    pub fn render(&self, format: Format) -> (String, i32) {
        match (&self.response, format, &self.csv) {
            (Response::Done { .. }, Format::Csv, Some(rows)) => (rows.clone(), self.exit_code),
            (Response::Done { output, .. }, Format::Csv, None) => {
                let f = Failure::invalid(format!("{:?} has no CSV output", output.command()).to_lowercase());
                (Response::failed(Some(output.command()), f.clone()).to_json(), f.exit_code())
            }
            _ => (self.response.to_json(), self.exit_code),
        }
    }
}

/// Runs a parsed job and writes the CSV side-file when `output_path` is set.
pub fn run(job: &JobSpec, overrides: &Overrides) -> Outcome {
    let result = dispatch(job, overrides).and_then(|(output, csv)| {
        if let (Some(path), Some(rows)) = (&job.output_path, &csv) {
            write_side_file(path, rows)?;
        }
        Ok((output, csv))
    });
    match result {
        Ok((output, csv)) => {
            let exit_code = exit_code_for(&output);
            Outcome { response: Response::done(output), exit_code, csv }
        }
        Err(f) => Outcome::failed(Some(job.command), f),
    }
}

/// Parses and runs; malformed jobs become exit-3 outcomes.
pub fn run_text(text: &str, overrides: &Overrides) -> Outcome {
    match crate::job::parse_job(text) {
        Ok(job) => run(&job, overrides),
        Err(f) => {
            let command = serde_json::from_str::<serde_json::Value>(text)
                .ok()
                .and_then(|v| serde_json::from_value(v.get("command")?.clone()).ok());
            Outcome::failed(command, f)
        }
    }
}

fn write_side_file(path: &Path, rows: &str) -> Result<(), Failure> {
    std::fs::write(path, rows)
        .map_err(|e| Failure::invalid(format!("cannot write {}: {e}", PathBuf::from(path).display())))
}

fn exit_code_for(output: &Output) -> i32 {
    match output {
        Output::Classify(c) if c.verdict.method == VerdictMethod::Undecided => exit::UNDECIDED,
        Output::Verify(v) if !v.all_passed => exit::CONSTRAINT_VIOLATION,
        _ => exit::DONE,
    }
}

type Dispatched = (Output, Option<String>);

fn dispatch(job: &JobSpec, o: &Overrides) -> Result<Dispatched, Failure> {
    match job.command {
        Command::Classify => classify(job).map(|c| (Output::Classify(c), None)),
        Command::Sector => sector_job(job).map(|s| (Output::Sector(s), None)),
        Command::Simulate => simulate(job, o),
        Command::Estimate => estimate(job, o),
        Command::Counterexample => counterexample(job, o),
        Command::Verify => {
            let seed = o.seed.or(job.seed).unwrap_or(DEFAULT_SEED);
            Ok((Output::Verify(verify::run_suite(seed, &verify::Sizes::default())), None))
        }
    }
}

fn operator(job: &JobSpec) -> Result<DiagonalOperator, Failure> {
    let spec = job.spectrum.clone().expect("validated");
    Ok(DiagonalOperator::new(spec)?)
}

/// `None` when the order is not a closed-form quantity of the spectrum.
fn closed_form_order(a: &DiagonalOperator) -> Result<Option<f64>, Failure> {
    match minimal_roumieu_order(a) {
        Ok(b) => Ok(Some(b)),
        Err(Error::Unsupported(_)) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn classify(job: &JobSpec) -> Result<ClassifyOutput, Failure> {
    let a = operator(job)?;
    let verdict = match job.variant.unwrap_or(Variant::Roumieu) {
        Variant::Roumieu => classify_roumieu(&a, job.beta.expect("validated"))?,
        Variant::Beurling => classify_beurling(&a, job.beta.expect("validated"))?,
        Variant::Analytic => classify_analytic(&a)?,
    };
    Ok(ClassifyOutput { verdict, minimal_roumieu_order: closed_form_order(&a)? })
}

fn sector_job(job: &JobSpec) -> Result<SectorOutput, Failure> {
    let a = operator(job)?;
    match sector(&a) {
        Ok(theta) => Ok(SectorOutput {
            analytic: true,
            theta: Some(theta),
            degenerate: sector_is_degenerate(theta),
            reason: None,
        }),
        Err(e @ (Error::HypothesisFailed(_) | Error::UndefinedSector(_))) => {
            Ok(SectorOutput { analytic: false, theta: None, degenerate: false, reason: Some(e.to_string()) })
        }
        Err(e) => Err(e.into()),
    }
}

/// Builds `y(t)`, or records why `f` is not admissible.
fn solve(
    a: DiagonalOperator,
    f: StateVector,
    t_grid: &[f64],
) -> Result<(Option<WeakSolution>, Admissibility), Failure> {
    match WeakSolution::with_grid(a, f, t_grid) {
        Ok(sol) => {
            let certificate = Some(sol.certificate().clone());
            Ok((Some(sol), Admissibility { admissible: true, failing_t: None, reason: None, certificate }))
        }
        Err(Error::NotAdmissible { t, reason }) => {
            Ok((None, Admissibility { admissible: false, failing_t: t, reason: Some(reason), certificate: None }))
        }
        Err(e) => Err(e.into()),
    }
}

fn simulate(job: &JobSpec, o: &Overrides) -> Result<Dispatched, Failure> {
    let a = operator(job)?;
    let f = job.vector.as_ref().expect("validated").build(o.truncation)?;
    let ts = job.t_grid.clone().unwrap_or_else(|| SIMULATE_T_GRID.to_vec());
    let [lo, hi] = job.n_window.unwrap_or(SIMULATE_N_WINDOW);
    let ns: Vec<u32> = (lo..=hi).collect();
    let (sol, admissibility) = solve(a, f, &ts)?;
    let table = sol.map(|s| GrowthTable::sweep(&s, &ns, &ts)).transpose()?;
    let csv = Some(table.clone().unwrap_or_default().to_csv());
    Ok((Output::Simulate(SimulateOutput { admissibility, growth_table: table }), csv))
}

fn estimate(job: &JobSpec, o: &Overrides) -> Result<Dispatched, Failure> {
    let a = operator(job)?;
    let minimal_roumieu_order = closed_form_order(&a)?;
    let f = job.vector.as_ref().expect("validated").build(o.truncation)?;
    let ts = job.t_grid.clone().unwrap_or_else(|| vec![1.0]);
    let [lo, hi] = job.n_window.unwrap_or([DEFAULT_WINDOW.0, DEFAULT_WINDOW.1]);
    let (sol, admissibility) = solve(a, f, &ts)?;
    let mut estimates = Vec::new();
    if let Some(sol) = &sol {
        for &t in &ts {
            estimates.push(EstimateRow { t, estimate: estimate_gevrey_order(sol, t, lo, hi)? });
        }
    }
    let mut csv = String::from("t,beta_hat,window_lo,window_hi,regression_residual,divergent\n");
    for r in &estimates {
        let e = &r.estimate;
        let beta = e.beta_hat.map(|b| b.to_string()).unwrap_or_default();
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.t, beta, e.window_lo, e.window_hi, e.regression_residual, e.divergent
        ));
    }
    let out = EstimateOutput { admissibility, estimates, minimal_roumieu_order };
    Ok((Output::Estimate(out), Some(csv)))
}

/// Builds the canonical case a job names.
pub fn build_case(job: &JobSpec) -> Result<AdversarialCase, Failure> {
    let beta = job.beta.expect("validated");
    let variant = match job.variant {
        Some(Variant::Beurling) => CaseVariant::Beurling { b_minus: job.b_minus.expect("validated") },
        _ => CaseVariant::Roumieu,
    };
    let selector = job.case_kind.expect("validated");
    let kind = match selector {
        CaseSelector::BoundedReOscillating => {
            if variant != CaseVariant::Roumieu {
                return Err(Failure::invalid("the oscillating case has a Roumieu variant only"));
            }
            return Ok(build_oscillating(beta)?);
        }
        CaseSelector::BoundedRe => CaseKind::BoundedRe,
        CaseSelector::ReToPlusInfinity => CaseKind::ReToPlusInfinity,
        CaseSelector::ReToMinusInfinity => CaseKind::ReToMinusInfinity,
        CaseSelector::FiniteControl => CaseKind::FiniteControl,
    };
    Ok(build_adversarial(kind, beta, variant)?)
}

fn counterexample(job: &JobSpec, o: &Overrides) -> Result<Dispatched, Failure> {
    let mut case = build_case(job)?;
    if let Some(n) = o.truncation {
        if case.vector.has_tail() {
            case.vector = case.vector.with_truncation(n)?;
        }
    }
    let ts = job.t_grid.clone().unwrap_or_else(|| CASE_GRID.to_vec());
    let ss = job.s_grid.clone().unwrap_or_else(|| CASE_GRID.to_vec());
    let (_, admissibility) = solve(case.operator()?, case.vector.clone(), &ts)?;
    let report = verify_failure(&case, &ss)?;
    let describe = |v| VectorSpec::describe(v).ok_or_else(|| Failure::invalid("case vector has no wire form"));
    let record = CaseRecord {
        kind: job.case_kind.expect("validated"),
        variant: case.variant,
        beta: case.beta,
        spectrum: case.eigenvalues.clone(),
        vector: describe(&case.vector)?,
        witness_functional: describe(&case.witness_functional)?,
    };
    let csv = report.partial_sum_trace.to_csv();
    Ok((Output::Counterexample(CounterexampleOutput { case: record, admissibility, report }), Some(csv)))
}
