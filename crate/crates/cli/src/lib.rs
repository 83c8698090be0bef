//! Batch front end: job spec files in, deterministic JSON reports out.

pub mod report;
pub mod run;
pub mod spec;

pub use report::{Report, Status};
pub use run::{run_spec, run_text, RunOptions};
pub use spec::{JobSpec, Task};
