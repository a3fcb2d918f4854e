pub mod concentration;
pub mod error;
pub mod graph;
pub mod ledger;
pub mod metrics;
pub mod network;
pub mod nullmodels;
pub mod report;
pub mod scalar;
pub mod stats;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// `f64` instantiations of the generic numeric types.
pub type Centrality = metrics::CentralityVector<f64>;
pub type Structure = metrics::StructureReport<f64>;
pub type Shares = concentration::ShareVector<f64>;
pub type Concentration = concentration::ConcentrationReport<f64>;
pub type Ks = stats::KsResult<f64>;
pub type Pearson = stats::PearsonResult<f64>;
pub type Comparison = stats::EnsembleComparison<f64>;
