//! End-to-end analysis of a dataset into a [`ReportBundle`] plus the side
//! tables written next to `report.json`.

mod output;
mod svg;

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::concentration::{
    concentration_report, hhi, market_portions, region_breakdown, ConcentrationReport, ShareMode,
};
use crate::error::{Error, Result};
use crate::ledger::{
    summarize, validate_dataset, write_agents_csv, write_bills_csv, LedgerDataset, RuleSet,
    SummaryStats, ValidationReport,
};
use crate::metrics::{
    eigenvector_all, shared_peer_distribution, structure_with_centralities, BinRow,
    CentralityVector, PerDrawerStats, StructureReport,
};
use crate::network::{build_network, Demography, Direction, Role, TriadNetwork, Weighting};
use crate::nullmodels::{
    expected_repartition, make_table_with, run_ensemble, EnsembleConfig, EnsembleResult,
    ExpectedRow, MetricSet, TransactionTable, Universe, Variant, DEFAULT_REPLICATES,
};
use crate::stats::compare_to_ensemble;

pub use output::{
    ensemble_file_name, write_ensemble_json, write_ensembles, write_geography_csv,
    write_ks_summary, write_metrics_csv, write_outputs, write_report_json, write_table4_csv,
    write_table5_csv, KsEntry, EDGES_FILE, GEOGRAPHY_FILE, KS_SUMMARY_FILE, METRICS_FILE,
    REPORT_FILE, TABLE4_FILE, TABLE5_FILE,
};
pub use svg::svg_histogram;

/// Discounters need at least this many drawers for a geography entry.
pub const GEOGRAPHY_MIN_DRAWERS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportConfig {
    /// Required when `variants` is non-empty.
    pub seed: Option<u64>,
    pub replicates: usize,
    pub variants: Vec<Variant>,
    pub ensemble_metrics: MetricSet,
    pub universe: Universe,
    pub rules: RuleSet,
    pub geography_min_drawers: usize,
}

impl Default for ReportConfig {
    fn default() -> Self {
        Self {
            seed: None,
            replicates: DEFAULT_REPLICATES,
            variants: Vec::new(),
            ensemble_metrics: MetricSet::default(),
            universe: Universe::Network,
            rules: RuleSet::default(),
            geography_min_drawers: GEOGRAPHY_MIN_DRAWERS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockStatus {
    Computed,
    Skipped,
}

/// A report section. Skipped blocks carry a reason instead of data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Block<T> {
    pub config_hash: String,
    pub status: BlockStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<T>,
}

impl<T> Block<T> {
    fn computed(hash: &str, data: T) -> Self {
        Self {
            config_hash: hash.to_string(),
            status: BlockStatus::Computed,
            reason: None,
            data: Some(data),
        }
    }

    fn skipped(hash: &str, reason: impl Into<String>) -> Self {
        Self {
            config_hash: hash.to_string(),
            status: BlockStatus::Skipped,
            reason: Some(reason.into()),
            data: None,
        }
    }

    pub fn is_computed(&self) -> bool {
        self.status == BlockStatus::Computed
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinMeanMax {
    pub min: f64,
    pub mean: f64,
    pub max: f64,
}

impl MinMeanMax {
    pub fn of(values: impl IntoIterator<Item = f64>) -> Option<Self> {
        let (mut min, mut max, mut sum, mut n) = (f64::INFINITY, f64::NEG_INFINITY, 0.0, 0usize);
        for v in values {
            min = min.min(v);
            max = max.max(v);
            sum += v;
            n += 1;
        }
        (n > 0).then(|| Self {
            min,
            mean: sum / n as f64,
            max,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub seed: Option<u64>,
    pub replicates: usize,
    pub variants: Vec<Variant>,
    pub config_hash: String,
    pub dataset_digest: String,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeStats {
    pub in_degree: MinMeanMax,
    pub out_degree: MinMeanMax,
    pub all_degree: MinMeanMax,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsBlock {
    /// Distinct-partner counts.
    pub degree_binary: DegreeStats,
    /// Bill counts.
    pub degree_transaction: DegreeStats,
    pub closeness: MinMeanMax,
    pub betweenness: MinMeanMax,
    pub eigenvector: MinMeanMax,
    pub structure: StructureReport<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableInfo {
    pub rows: usize,
    pub drawers: usize,
    pub acceptors_in_rows: usize,
    pub discounters_in_rows: usize,
    pub acceptor_universe: usize,
    pub discounter_universe: usize,
    pub universe: Universe,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table4Block {
    pub rows: Vec<BinRow>,
    pub acceptors_per_drawer: PerDrawerStats,
    pub discounters_per_drawer: PerDrawerStats,
    pub median_ratio: f64,
    pub expected_uniform: Vec<ExpectedRow>,
    pub table: TableInfo,
}

/// Number of actors per drawer count, the shape behind a frequency plot of
/// acceptors and discounters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DrawerFrequency {
    pub drawers: u64,
    pub actors: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table5Block {
    pub acceptors: ConcentrationReport<f64>,
    pub discounters: ConcentrationReport<f64>,
    pub acceptor_frequency: Vec<DrawerFrequency>,
    pub discounter_frequency: Vec<DrawerFrequency>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionSharePct {
    pub region: String,
    pub share_pct: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscounterGeography {
    pub discounter_id: String,
    pub drawers: u64,
    pub hhi: f64,
    pub regions: Vec<RegionSharePct>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeographyBlock {
    pub min_drawers: usize,
    pub hhi: MinMeanMax,
    pub discounters: Vec<DiscounterGeography>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulatedStructure {
    pub clustering: MinMeanMax,
    pub closeness_centralization: MinMeanMax,
    pub betweenness_centralization: MinMeanMax,
    pub main_component_share: MinMeanMax,
    pub average_path_length: MinMeanMax,
}

impl SimulatedStructure {
    fn of(reports: &[&StructureReport<f64>]) -> Option<Self> {
        let pick =
            |f: fn(&StructureReport<f64>) -> f64| MinMeanMax::of(reports.iter().map(|r| f(r)));
        Some(Self {
            clustering: pick(|r| r.clustering)?,
            closeness_centralization: pick(|r| r.closeness_centralization)?,
            betweenness_centralization: pick(|r| r.betweenness_centralization)?,
            main_component_share: pick(|r| r.main_component_share)?,
            average_path_length: pick(|r| r.average_path_length)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariantComparison {
    pub variant: Variant,
    pub replicates: usize,
    pub master_seed: u64,
    pub simulation_rows: Option<Vec<BinRow>>,
    pub ks: Vec<KsEntry>,
    pub acceptor_binary_degree: MinMeanMax,
    pub discounter_binary_degree: MinMeanMax,
    pub structure: Option<SimulatedStructure>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportBundle {
    pub metadata: Metadata,
    pub validation: Block<ValidationReport>,
    pub demography: Block<Demography>,
    pub summary: Block<SummaryStats>,
    pub metrics: Block<MetricsBlock>,
    pub table4: Block<Table4Block>,
    pub table5: Block<Table5Block>,
    pub geography: Block<GeographyBlock>,
    pub ensemble_comparison: Block<Vec<VariantComparison>>,
}

/// Per-node centralities in network node order.
#[derive(Debug, Clone)]
pub struct Centralities {
    pub closeness: CentralityVector<f64>,
    pub betweenness: CentralityVector<f64>,
    pub eigenvector: CentralityVector<f64>,
}

/// The bundle together with the intermediate results side tables need.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub network: TriadNetwork,
    pub table: Option<TransactionTable>,
    pub centralities: Centralities,
    pub ensembles: Vec<EnsembleResult>,
    pub bundle: ReportBundle,
}

impl Analysis {
    pub fn ks_entries(&self) -> Vec<KsEntry> {
        self.bundle
            .ensemble_comparison
            .data
            .iter()
            .flatten()
            .flat_map(|v| v.ks.iter().cloned())
            .collect()
    }
}

/// SHA-256 of the dataset's canonical CSV serialisation and taxonomy.
pub fn dataset_digest(d: &LedgerDataset) -> Result<String> {
    let mut h = Sha256::new();
    write_agents_csv(&mut h, d)?;
    h.write_all(&[0x1e])?;
    write_bills_csv(&mut h, d)?;
    h.write_all(&[0x1e])?;
    serde_json::to_writer(&mut h, d.taxonomy())?;
    Ok(hex::encode(h.finalize()))
}

pub fn config_hash(cfg: &ReportConfig, dataset_digest: &str) -> Result<String> {
    let mut h = Sha256::new();
    serde_json::to_writer(&mut h, cfg)?;
    h.update(dataset_digest.as_bytes());
    Ok(hex::encode(h.finalize()))
}

fn in_block<T>(block: &'static str, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Block {
        block,
        source: Box::new(e),
    })
}

fn degree_stats(n: &TriadNetwork, w: Weighting) -> DegreeStats {
    let stat = |dir| {
        MinMeanMax::of((0..n.node_count()).map(|v| n.degree_at(v, dir, w, None) as f64))
            .expect("non-empty network")
    };
    DegreeStats {
        in_degree: stat(Direction::In),
        out_degree: stat(Direction::Out),
        all_degree: stat(Direction::All),
    }
}

fn metrics_block(n: &TriadNetwork) -> Result<(MetricsBlock, Centralities)> {
    let g = n.undirected_projection();
    let (structure, closeness, betweenness) = structure_with_centralities(g)?;
    let c = Centralities {
        closeness,
        betweenness,
        eigenvector: eigenvector_all(g)?,
    };
    let mmm = |v: &CentralityVector<f64>| {
        MinMeanMax::of(v.values.iter().copied()).expect("non-empty graph")
    };
    let block = MetricsBlock {
        degree_binary: degree_stats(n, Weighting::Binary),
        degree_transaction: degree_stats(n, Weighting::Transaction),
        closeness: mmm(&c.closeness),
        betweenness: mmm(&c.betweenness),
        eigenvector: mmm(&c.eigenvector),
        structure,
    };
    Ok((block, c))
}

pub fn table4_block(t: &TransactionTable, universe: Universe) -> Result<Table4Block> {
    let rep = crate::metrics::RatioRepartition::from_rows(
        t.rows()
            .iter()
            .map(|r| (&r.drawer, &r.acceptor, &r.discounter)),
        |d| d.clone(),
    )?;
    Ok(Table4Block {
        rows: rep.rows,
        acceptors_per_drawer: rep.acceptors_per_drawer,
        discounters_per_drawer: rep.discounters_per_drawer,
        median_ratio: rep.median_ratio,
        expected_uniform: expected_repartition(t)?,
        table: TableInfo {
            rows: t.len(),
            drawers: t.drawer_counts().len(),
            acceptors_in_rows: t.acceptor_counts().len(),
            discounters_in_rows: t.discounter_counts().len(),
            acceptor_universe: t.acceptor_universe().len(),
            discounter_universe: t.discounter_universe().len(),
            universe,
        },
    })
}

fn frequency(n: &TriadNetwork, role: Role) -> Result<Vec<DrawerFrequency>> {
    let mut m: BTreeMap<u64, usize> = BTreeMap::new();
    for (_, c) in market_portions(n, role, ShareMode::Relationship)? {
        *m.entry(c).or_default() += 1;
    }
    Ok(m.into_iter()
        .map(|(drawers, actors)| DrawerFrequency { drawers, actors })
        .collect())
}

fn table5_block(n: &TriadNetwork) -> Result<Table5Block> {
    Ok(Table5Block {
        acceptors: concentration_report(n, Role::Acceptor)?,
        discounters: concentration_report(n, Role::Discounter)?,
        acceptor_frequency: frequency(n, Role::Acceptor)?,
        discounter_frequency: frequency(n, Role::Discounter)?,
    })
}

fn geography_block(
    n: &TriadNetwork,
    d: &LedgerDataset,
    min_drawers: usize,
) -> Result<Option<GeographyBlock>> {
    let mut discounters = Vec::new();
    for (id, drawers) in market_portions(n, Role::Discounter, ShareMode::Relationship)? {
        if (drawers as usize) < min_drawers {
            continue;
        }
        let shares = region_breakdown::<f64>(n, &id, d.taxonomy())?;
        discounters.push(DiscounterGeography {
            discounter_id: id.to_string(),
            drawers,
            hhi: hhi(&shares),
            regions: shares
                .entries
                .iter()
                .map(|(region, share_pct)| RegionSharePct {
                    region: region.clone(),
                    share_pct: *share_pct,
                })
                .collect(),
        });
    }
    Ok(
        MinMeanMax::of(discounters.iter().map(|g| g.hhi)).map(|hhi| GeographyBlock {
            min_drawers,
            hhi,
            discounters,
        }),
    )
}

fn compare_variant(t: &TransactionTable, e: &EnsembleResult) -> Result<VariantComparison> {
    let observed = t.to_network()?;
    let name = e.variant.name();
    let mut ks = Vec::new();
    let reps: Vec<Vec<f64>> = e
        .results
        .iter()
        .filter_map(|r| r.repartition.as_ref().map(|x| x.ratios()))
        .collect();
    if !reps.is_empty() {
        let obs = crate::metrics::ad_ratio_repartition(&observed)?.ratios();
        ks.push(KsEntry::new(
            "ad_ratio",
            compare_to_ensemble(&obs, &reps)?.summary(name),
        ));
    }
    for (metric, role, pick) in [
        ("shared_acceptors", Role::Acceptor, 0),
        ("shared_discounters", Role::Discounter, 1),
    ] {
        let reps: Vec<Vec<f64>> = e
            .results
            .iter()
            .filter_map(|r| {
                if pick == 0 {
                    r.shared_acceptors.as_ref()
                } else {
                    r.shared_discounters.as_ref()
                }
            })
            .map(|s| s.values())
            .collect();
        if !reps.is_empty() {
            let obs = shared_peer_distribution(&observed, role)?.values();
            ks.push(KsEntry::new(
                metric,
                compare_to_ensemble(&obs, &reps)?.summary(name),
            ));
        }
    }
    let structures: Vec<&StructureReport<f64>> = e
        .results
        .iter()
        .filter_map(|r| r.structure.as_ref())
        .collect();
    Ok(VariantComparison {
        variant: e.variant,
        replicates: e.replicates,
        master_seed: e.master_seed,
        simulation_rows: e.mean_rows(),
        ks,
        acceptor_binary_degree: MinMeanMax::of(
            e.results.iter().map(|r| r.acceptor_degree.binary_mean),
        )
        .expect("replicates ≥ 1"),
        discounter_binary_degree: MinMeanMax::of(
            e.results.iter().map(|r| r.discounter_degree.binary_mean),
        )
        .expect("replicates ≥ 1"),
        structure: SimulatedStructure::of(&structures),
    })
}

/// Runs every requested variant on `t` and compares each ensemble with
/// the observed table.
pub fn run_variants(
    t: &TransactionTable,
    cfg: &ReportConfig,
    seed: u64,
) -> Result<(Vec<EnsembleResult>, Vec<VariantComparison>)> {
    let mut ensembles = Vec::new();
    let mut comparisons = Vec::new();
    for &variant in &cfg.variants {
        let ecfg = EnsembleConfig {
            variant,
            replicates: cfg.replicates,
            master_seed: seed,
            metrics: cfg.ensemble_metrics,
        };
        let e = run_ensemble(t, &ecfg)?;
        comparisons.push(compare_variant(t, &e)?);
        ensembles.push(e);
    }
    Ok((ensembles, comparisons))
}

/// Builds the network and every report block. Module errors are wrapped
/// with the block name; blocks that do not apply are marked skipped.
pub fn run_pipeline(d: &LedgerDataset, cfg: &ReportConfig) -> Result<Analysis> {
    if !cfg.variants.is_empty() && cfg.seed.is_none() {
        return Err(Error::Config(
            "a seed is required to run null-model ensembles".into(),
        ));
    }
    let digest = dataset_digest(d)?;
    let hash = config_hash(cfg, &digest)?;
    let h = hash.as_str();

    let network = in_block("demography", build_network(d))?;
    let validation = Block::computed(h, validate_dataset(d, &cfg.rules));
    let demography = Block::computed(h, network.demography());
    let summary = Block::computed(h, in_block("summary", summarize(d))?);
    let (metrics, centralities) = in_block("metrics", metrics_block(&network))?;
    let metrics = Block::computed(h, metrics);

    let table = match make_table_with(&network, cfg.universe) {
        Ok(t) => Some(t),
        Err(Error::NoMultiTransactionDrawers) => None,
        Err(e) => return in_block("table4", Err(e)),
    };
    const NO_MULTI: &str = "no multi-transaction drawers";
    let table4 = match &table {
        Some(t) => Block::computed(h, in_block("table4", table4_block(t, cfg.universe))?),
        None => Block::skipped(h, NO_MULTI),
    };
    let table5 = Block::computed(h, in_block("table5", table5_block(&network))?);
    let geography = match in_block(
        "geography",
        geography_block(&network, d, cfg.geography_min_drawers),
    )? {
        Some(g) => Block::computed(h, g),
        None => Block::skipped(
            h,
            format!(
                "no discounter with at least {} drawers",
                cfg.geography_min_drawers
            ),
        ),
    };

    let (ensembles, ensemble_comparison) = match (&table, cfg.seed) {
        _ if cfg.variants.is_empty() => (
            Vec::new(),
            Block::skipped(h, "no null-model variant requested"),
        ),
        (None, _) => (Vec::new(), Block::skipped(h, NO_MULTI)),
        (Some(t), Some(seed)) => {
            let (e, c) = in_block("ensemble_comparison", run_variants(t, cfg, seed))?;
            (e, Block::computed(h, c))
        }
        (Some(_), None) => unreachable!("seed checked above"),
    };

    let bundle = ReportBundle {
        metadata: Metadata {
            tool: "billnet".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            seed: cfg.seed,
            replicates: cfg.replicates,
            variants: cfg.variants.clone(),
            config_hash: hash.clone(),
            dataset_digest: digest,
            provenance: d.provenance().to_string(),
        },
        validation,
        demography,
        summary,
        metrics,
        table4,
        table5,
        geography,
        ensemble_comparison,
    };
    Ok(Analysis {
        network,
        table,
        centralities,
        ensembles,
        bundle,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ledger::fixtures::dataset;

    #[test]
    fn single_triad() {
        let a = run_pipeline(&dataset(&[("P", "A", "K")]), &ReportConfig::default()).unwrap();
        let d = a.bundle.demography.data.unwrap();
        assert_eq!(
            (d.total_nodes, d.drawers, d.acceptors, d.discounters),
            (3, 1, 1, 1)
        );
        assert_eq!(a.bundle.table4.status, BlockStatus::Skipped);
        assert_eq!(a.bundle.ensemble_comparison.status, BlockStatus::Skipped);
        assert!(a.bundle.metrics.is_computed());
    }

    #[test]
    fn every_block_carries_hash() {
        let mut cfg = ReportConfig {
            seed: Some(3),
            replicates: 4,
            variants: Variant::ALL.to_vec(),
            ..ReportConfig::default()
        };
        cfg.geography_min_drawers = 1;
        let a = run_pipeline(
            &dataset(&[
                ("P", "A1", "K1"),
                ("P", "A2", "K1"),
                ("Q", "A1", "K2"),
                ("Q", "A1", "K1"),
            ]),
            &cfg,
        )
        .unwrap();
        let v = serde_json::to_value(&a.bundle).unwrap();
        let hash = v["metadata"]["config_hash"].as_str().unwrap();
        for (k, block) in v.as_object().unwrap() {
            if k != "metadata" {
                assert_eq!(block["config_hash"].as_str(), Some(hash), "{k}");
                assert_eq!(block["status"], "computed", "{k}");
            }
        }
        assert_eq!(a.ensembles.len(), 2);
    }

    #[test]
    fn ensembles_need_seed() {
        let cfg = ReportConfig {
            variants: vec![Variant::Uniform],
            ..ReportConfig::default()
        };
        assert!(matches!(
            run_pipeline(&dataset(&[("P", "A", "K")]), &cfg),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn hash_tracks_config() {
        let d = dataset(&[("P", "A", "K")]);
        let dig = dataset_digest(&d).unwrap();
        let a = config_hash(&ReportConfig::default(), &dig).unwrap();
        let b = config_hash(
            &ReportConfig {
                replicates: 5,
                ..ReportConfig::default()
            },
            &dig,
        )
        .unwrap();
        assert_ne!(a, b);
    }
}
