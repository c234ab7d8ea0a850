//! Batch front-end for `gevrey-core`: one JSON job in, one JSON result out.

pub mod failure;
pub mod job;
pub mod output;
pub mod run;
pub mod verify;

pub use failure::{exit, Failure, FailureCode};
pub use job::{parse_job, JobSpec, VectorSpec, SCHEMA_VERSION};
pub use output::{Output, Response};
pub use run::{run, run_text, Format, Outcome, Overrides};
