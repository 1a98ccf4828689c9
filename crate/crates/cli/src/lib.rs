//! Front end for `hookext`: sweeps, tables, matrix dumps and a results cache.

pub mod app;
pub mod cache;
pub mod checks;
pub mod config;
pub mod dump;
pub mod record;
pub mod sweep;

pub use checks::{CheckKind, CheckOutcome, VerifyReport};
pub use record::{Family, RecordRow, ResultRecord};
pub use sweep::SweepSpec;
