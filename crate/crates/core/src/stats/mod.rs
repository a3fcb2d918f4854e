//! Two-sample Kolmogorov–Smirnov tests, ensemble comparison summaries and
//! Pearson correlation.

mod compare;
mod ks;
mod pearson;

pub use compare::{compare_to_ensemble, ComparisonSummary, EnsembleComparison, P_THRESHOLD};
pub use ks::{kolmogorov_sf, ks_p_value, ks_two_sample, KsResult};
pub use pearson::{pearson, PearsonResult};
