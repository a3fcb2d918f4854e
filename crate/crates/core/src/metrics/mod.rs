//! Node centralities, global structure indicators, acceptor-to-discounter
//! ratio repartitions and shared-drawer distributions.

mod centrality;
mod ratio;
mod shared;
mod structure;

pub use centrality::{
    betweenness_all, centralization, closeness_all, eigenvector_all, CentralityKind,
    CentralityVector, Normalization, EIGEN_MAX_ITERATIONS, EIGEN_TOLERANCE,
};
pub use ratio::{
    ad_ratio_repartition, BinRow, DrawerRatio, PerDrawerStats, RatioRepartition, TxBin,
    ALL_BIN_LABEL,
};
pub use shared::{shared_peer_distribution, SharedPeerDistribution, PEER_BUCKETS};
pub use structure::{
    average_path_length, global_clustering, main_component_share, structure_report,
    structure_with_centralities, StructureReport,
};
