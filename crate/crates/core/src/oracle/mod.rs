//! Ground truth for tests and benchmarks: a solution certifier and a
//! brute-force optimal solver for tiny instances.

mod brute;
mod certify;

pub use brute::{brute_force_optimal, OracleOutcome, DEFAULT_STATE_CAP};
pub use certify::{certify, Certificate, CertifiedViolation};
