//! Column-building null models over the transaction table of
//! multi-transaction drawers.
//!
//! * [`simulate_uniform`]: every acceptor (discounter) of the universe is
//!   listed `ceil(L / n)` times, the list is shuffled and the first `L`
//!   entries become the new column.
//! * [`simulate_degree_preserving`]: the observed acceptor and discounter
//!   columns are independently permuted.
//!
//! The drawer column never changes.

mod analytic;
mod ensemble;
mod simulate;
mod table;

pub use analytic::{
    analytic_coincidence, expected_repartition, Coincidence, ExpectedRow, MAX_TRANSACTIONS,
};
pub use ensemble::{
    replicate_seed, run_ensemble, DegreeFlavors, EnsembleConfig, EnsembleResult, MetricSet,
    ReplicateResult, DEFAULT_REPLICATES,
};
pub use simulate::{simulate, simulate_degree_preserving, simulate_uniform, Variant};
pub use table::{make_table, make_table_with, TransactionTable, Universe};
