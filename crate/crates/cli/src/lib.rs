//! Library side of the `pidbounds` command: analysis files, sweeps, the
//! parallel runner and output writers.

pub mod output;
pub mod report;
pub mod runner;
pub mod spec_file;
pub mod sweep;

pub use runner::{run, PointOutput, Record, RunOptions};
pub use spec_file::{parse_spec, parse_spec_str, AnalysisSpec};
