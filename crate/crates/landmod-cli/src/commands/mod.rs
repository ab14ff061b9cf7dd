//! Command implementations. Each takes the parsed configuration and an
//! output directory, writes its primary files, and returns an assertion
//! error (exit code 1) only after everything is on disk.

mod analyze;
mod bench;
mod estimate;
mod info;
mod oracle;
mod sample;

pub use analyze::{cmd_analyze, AnalyzeKind};
pub use bench::{cmd_bench, BenchSuite};
pub use estimate::{cmd_anneal, cmd_estimate};
pub use info::cmd_info;
pub use oracle::{cmd_oracle, run_oracle_sweep, OracleReport};
pub use sample::cmd_sample;

use landmod::landscape::LandscapeParams;
use landmod::models::DENSE_CAP;

pub(crate) fn params_desc(p: &LandscapeParams) -> String {
    format!("f={:?} alpha={} c={}", p.f, p.alpha, p.c)
}

pub(crate) const CAP: u64 = DENSE_CAP;
