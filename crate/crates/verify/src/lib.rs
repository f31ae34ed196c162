//! Seeded verification runner for `affine-core`.
//!
//! Every identity in [`identities::IDENTITIES`] is evaluated on `trials`
//! independent seeded samples. Each case draws from its own ChaCha8 stream,
//! seeded by the run seed XOR the FNV-1a hash of the case id, so any case can
//! be re-run alone with `--case` and produces the same residual.

pub mod config;
pub mod digest;
pub mod identities;
pub mod report;
pub mod runner;

pub use config::{parse_complex, ConfigError, Suite, SuiteConfig, DEFAULT_SEED};
pub use report::{emit_report, parse_report, read_report, render_table, CaseRecord, SuiteReport, Summary};
pub use runner::{plan, run_suites, CaseSpec};
