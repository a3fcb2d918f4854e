use rayon::prelude::*;
use serde::Serialize;

use super::simulate::{simulate, Variant};
use super::table::TransactionTable;
use crate::error::{Error, Result};
use crate::metrics::{
    shared_peer_distribution, structure_report, RatioRepartition, SharedPeerDistribution,
    StructureReport,
};
use crate::network::{Direction, Role, TriadNetwork, Weighting};

pub const DEFAULT_REPLICATES: usize = 100;

/// Metrics computed on each simulated network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MetricSet {
    pub repartition: bool,
    pub shared_peers: bool,
    pub structure: bool,
}

impl Default for MetricSet {
    fn default() -> Self {
        Self {
            repartition: true,
            shared_peers: true,
            structure: false,
        }
    }
}

impl MetricSet {
    /// Parses a comma list of `repartition`, `shared`, `structure` or `all`.
    pub fn parse_list(s: &str) -> Result<Self> {
        let mut m = Self {
            repartition: false,
            shared_peers: false,
            structure: false,
        };
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part {
                "repartition" => m.repartition = true,
                "shared" => m.shared_peers = true,
                "structure" => m.structure = true,
                "all" => {
                    m = Self {
                        repartition: true,
                        shared_peers: true,
                        structure: true,
                    }
                }
                other => return Err(Error::Config(format!("unknown metric {other:?}"))),
            }
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleConfig {
    pub variant: Variant,
    pub replicates: usize,
    pub master_seed: u64,
    pub metrics: MetricSet,
}

impl EnsembleConfig {
    pub fn new(variant: Variant, master_seed: u64) -> Self {
        Self {
            variant,
            replicates: DEFAULT_REPLICATES,
            master_seed,
            metrics: MetricSet::default(),
        }
    }
}

/// Mean binary (distinct-partner) and transaction-weighted degree of one
/// role in a network.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DegreeFlavors {
    pub binary_mean: f64,
    pub transaction_mean: f64,
}

impl DegreeFlavors {
    fn of(n: &TriadNetwork, role: Role) -> Self {
        let nodes = n.nodes_with(role);
        let mean = |w| {
            nodes
                .iter()
                .map(|&v| n.degree_at(v, Direction::All, w, None) as f64)
                .sum::<f64>()
                / nodes.len() as f64
        };
        Self {
            binary_mean: mean(Weighting::Binary),
            transaction_mean: mean(Weighting::Transaction),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicateResult {
    pub index: usize,
    pub seed: u64,
    /// SHA-256 of the simulated table.
    pub digest: String,
    pub repartition: Option<RatioRepartition>,
    pub shared_acceptors: Option<SharedPeerDistribution>,
    pub shared_discounters: Option<SharedPeerDistribution>,
    pub structure: Option<StructureReport<f64>>,
    pub acceptor_degree: DegreeFlavors,
    pub discounter_degree: DegreeFlavors,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleResult {
    pub variant: Variant,
    pub replicates: usize,
    pub master_seed: u64,
    pub results: Vec<ReplicateResult>,
}

impl EnsembleResult {
    /// Per-bin mean of the replicate repartition percentages, with the
    /// bin's drawer count from the first replicate.
    pub fn mean_rows(&self) -> Option<Vec<crate::metrics::BinRow>> {
        let reps: Vec<&RatioRepartition> = self
            .results
            .iter()
            .filter_map(|r| r.repartition.as_ref())
            .collect();
        let first = reps.first()?;
        let n = reps.len() as f64;
        Some(
            first
                .rows
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    let avg = |f: fn(&crate::metrics::BinRow) -> f64| {
                        reps.iter().map(|r| f(&r.rows[i])).sum::<f64>() / n
                    };
                    crate::metrics::BinRow {
                        bin: row.bin.clone(),
                        drawers: row.drawers,
                        more_discounters_pct: avg(|r| r.more_discounters_pct),
                        equal_pct: avg(|r| r.equal_pct),
                        fewer_discounters_pct: avg(|r| r.fewer_discounters_pct),
                    }
                })
                .collect(),
        )
    }
}

/// SplitMix64 finaliser over the master seed and replicate index.
pub fn replicate_seed(master_seed: u64, index: usize) -> u64 {
    let mut z = master_seed
        ^ (index as u64)
            .wrapping_add(1)
            .wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn run_one(t: &TransactionTable, cfg: &EnsembleConfig, index: usize) -> Result<ReplicateResult> {
    let seed = replicate_seed(cfg.master_seed, index);
    let sim = simulate(t, cfg.variant, seed);
    if !sim.drawer_column().eq(t.drawer_column()) {
        return Err(Error::InvalidArgument("drawer column changed".into()));
    }
    if cfg.variant == Variant::DegreePreserving
        && (sim.acceptor_counts() != t.acceptor_counts()
            || sim.discounter_counts() != t.discounter_counts())
    {
        return Err(Error::InvalidArgument(
            "actor transaction counts changed".into(),
        ));
    }
    let net = sim.to_network()?;
    let repartition = if cfg.metrics.repartition {
        Some(RatioRepartition::from_rows(
            sim.rows()
                .iter()
                .map(|r| (&r.drawer, &r.acceptor, &r.discounter)),
            |d| d.clone(),
        )?)
    } else {
        None
    };
    let (shared_acceptors, shared_discounters) = if cfg.metrics.shared_peers {
        (
            Some(shared_peer_distribution(&net, Role::Acceptor)?),
            Some(shared_peer_distribution(&net, Role::Discounter)?),
        )
    } else {
        (None, None)
    };
    let structure = if cfg.metrics.structure {
        Some(structure_report(net.undirected_projection())?)
    } else {
        None
    };
    Ok(ReplicateResult {
        index,
        seed,
        digest: sim.digest(),
        repartition,
        shared_acceptors,
        shared_discounters,
        structure,
        acceptor_degree: DegreeFlavors::of(&net, Role::Acceptor),
        discounter_degree: DegreeFlavors::of(&net, Role::Discounter),
    })
}

/// Replicates run in parallel and are merged by index, so the result does
/// not depend on scheduling. The first failing replicate (by index) aborts.
pub fn run_ensemble(t: &TransactionTable, cfg: &EnsembleConfig) -> Result<EnsembleResult> {
    if cfg.replicates == 0 {
        return Err(Error::InvalidArgument(
            "replicates must be at least 1".into(),
        ));
    }
    let results: Vec<Result<ReplicateResult>> = (0..cfg.replicates)
        .into_par_iter()
        .map(|i| run_one(t, cfg, i))
        .collect();
    let results = results
        .into_iter()
        .enumerate()
        .map(|(index, r)| {
            r.map_err(|e| Error::Replicate {
                index,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EnsembleResult {
        variant: cfg.variant,
        replicates: cfg.replicates,
        master_seed: cfg.master_seed,
        results,
    })
}
