use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use super::svg::svg_histogram;
use super::{Analysis, ReportBundle, Table4Block, VariantComparison};
use crate::error::{Error, Result};
use crate::metrics::{
    BinRow, PerDrawerStats, SharedPeerDistribution, StructureReport, PEER_BUCKETS,
};
use crate::nullmodels::{EnsembleResult, Variant};
use crate::stats::ComparisonSummary;

pub const REPORT_FILE: &str = "report.json";
pub const TABLE4_FILE: &str = "table4.csv";
pub const TABLE5_FILE: &str = "table5.csv";
pub const METRICS_FILE: &str = "metrics.csv";
pub const GEOGRAPHY_FILE: &str = "geography.csv";
pub const EDGES_FILE: &str = "edges.csv";
pub const KS_SUMMARY_FILE: &str = "ks_summary.json";

/// One line of `ks_summary.json`: which distribution was compared, then
/// the comparison summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KsEntry {
    pub metric: String,
    #[serde(flatten)]
    pub summary: ComparisonSummary,
}

impl KsEntry {
    pub fn new(metric: &str, summary: ComparisonSummary) -> Self {
        Self {
            metric: metric.to_string(),
            summary,
        }
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.into())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

pub fn write_report_json(path: &Path, bundle: &ReportBundle) -> Result<()> {
    write_json(path, bundle)
}

fn bin_record(source: &str, r: &BinRow) -> [String; 6] {
    [
        source.to_string(),
        r.bin.clone(),
        r.drawers.to_string(),
        r.more_discounters_pct.to_string(),
        r.equal_pct.to_string(),
        r.fewer_discounters_pct.to_string(),
    ]
}

/// Observed rows, the analytic expectation under uniform draws, then one
/// block of mean simulation rows per compared variant.
pub fn write_table4_csv<W: Write>(
    w: W,
    observed: Option<&Table4Block>,
    comparisons: &[VariantComparison],
) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record([
        "source",
        "bin",
        "drawers",
        "more_discounters_pct",
        "equal_pct",
        "fewer_discounters_pct",
    ])
    .map_err(csv_err)?;
    if let Some(t4) = observed {
        for r in &t4.rows {
            wtr.write_record(bin_record("observed", r))
                .map_err(csv_err)?;
        }
        for r in &t4.expected_uniform {
            let row = BinRow {
                bin: r.bin.clone(),
                drawers: r.drawers,
                more_discounters_pct: r.more_discounters_pct,
                equal_pct: r.equal_pct,
                fewer_discounters_pct: r.fewer_discounters_pct,
            };
            wtr.write_record(bin_record("analytic_uniform", &row))
                .map_err(csv_err)?;
        }
    }
    for v in comparisons {
        let source = format!("simulation_{}", v.variant.name());
        for r in v.simulation_rows.iter().flatten() {
            wtr.write_record(bin_record(&source, r)).map_err(csv_err)?;
        }
    }
    wtr.flush()?;
    Ok(())
}

pub fn write_table5_csv<W: Write>(w: W, a: &Analysis) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record([
        "role",
        "actors",
        "portions",
        "hhi",
        "highest_penetration_pct",
        "top3_pct",
        "top5_pct",
        "top10_pct",
        "top15_pct",
    ])
    .map_err(csv_err)?;
    if let Some(t5) = &a.bundle.table5.data {
        for (role, c) in [("acceptor", &t5.acceptors), ("discounter", &t5.discounters)] {
            let mut rec = vec![
                role.to_string(),
                c.actors.to_string(),
                c.portions.to_string(),
                c.hhi.to_string(),
                c.highest_penetration.to_string(),
            ];
            rec.extend(c.top_k_shares.values().map(f64::to_string));
            wtr.write_record(rec).map_err(csv_err)?;
        }
    }
    wtr.flush()?;
    Ok(())
}

pub fn write_metrics_csv<W: Write>(w: W, a: &Analysis) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["node_id", "closeness", "betweenness", "eigenvector"])
        .map_err(csv_err)?;
    let c = &a.centralities;
    for (i, id) in a.network.ids().iter().enumerate() {
        wtr.write_record([
            id.to_string(),
            c.closeness.values[i].to_string(),
            c.betweenness.values[i].to_string(),
            c.eigenvector.values[i].to_string(),
        ])
        .map_err(csv_err)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn write_geography_csv<W: Write>(w: W, a: &Analysis) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["discounter_id", "region", "share_pct"])
        .map_err(csv_err)?;
    if let Some(g) = &a.bundle.geography.data {
        for d in &g.discounters {
            for r in &d.regions {
                wtr.write_record([
                    d.discounter_id.as_str(),
                    r.region.as_str(),
                    &r.share_pct.to_string(),
                ])
                .map_err(csv_err)?;
            }
        }
    }
    wtr.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct RepartitionView<'a> {
    rows: &'a [BinRow],
    acceptors_per_drawer: &'a PerDrawerStats,
    discounters_per_drawer: &'a PerDrawerStats,
    median_ratio: f64,
}

#[derive(Serialize)]
struct SharedView<'a> {
    histogram: &'a [usize; 11],
    zero_share_pct: f64,
}

impl<'a> SharedView<'a> {
    fn of(s: &'a SharedPeerDistribution) -> Self {
        Self {
            histogram: &s.histogram,
            zero_share_pct: s.zero_share_pct(),
        }
    }
}

#[derive(Serialize)]
struct ReplicateView<'a> {
    index: usize,
    seed: u64,
    digest: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    repartition: Option<RepartitionView<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    shared_acceptors: Option<SharedView<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    shared_discounters: Option<SharedView<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    structure: Option<&'a StructureReport<f64>>,
    acceptor_degree: &'a crate::nullmodels::DegreeFlavors,
    discounter_degree: &'a crate::nullmodels::DegreeFlavors,
}

#[derive(Serialize)]
struct EnsembleView<'a> {
    variant: Variant,
    replicates: usize,
    master_seed: u64,
    peer_buckets: [&'static str; 11],
    results: Vec<ReplicateView<'a>>,
}

/// Per-replicate metric blocks. Per-drawer and per-actor lists are left
/// out; the table digest identifies each simulated table.
pub fn write_ensemble_json<W: Write>(mut w: W, e: &EnsembleResult) -> Result<()> {
    let view = EnsembleView {
        variant: e.variant,
        replicates: e.replicates,
        master_seed: e.master_seed,
        peer_buckets: PEER_BUCKETS,
        results: e
            .results
            .iter()
            .map(|r| ReplicateView {
                index: r.index,
                seed: r.seed,
                digest: &r.digest,
                repartition: r.repartition.as_ref().map(|x| RepartitionView {
                    rows: &x.rows,
                    acceptors_per_drawer: &x.acceptors_per_drawer,
                    discounters_per_drawer: &x.discounters_per_drawer,
                    median_ratio: x.median_ratio,
                }),
                shared_acceptors: r.shared_acceptors.as_ref().map(SharedView::of),
                shared_discounters: r.shared_discounters.as_ref().map(SharedView::of),
                structure: r.structure.as_ref(),
                acceptor_degree: &r.acceptor_degree,
                discounter_degree: &r.discounter_degree,
            })
            .collect(),
    };
    serde_json::to_writer_pretty(&mut w, &view)?;
    w.write_all(b"\n")?;
    Ok(())
}

pub fn write_ks_summary<W: Write>(mut w: W, entries: &[KsEntry]) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, entries)?;
    w.write_all(b"\n")?;
    Ok(())
}

pub fn ensemble_file_name(v: Variant) -> String {
    format!("ensemble_{}.json", v.name())
}

/// Writes `ensemble_<variant>.json` for each ensemble.
pub fn write_ensembles(dir: &Path, ensembles: &[EnsembleResult]) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    for e in ensembles {
        write_with(&dir.join(ensemble_file_name(e.variant)), |w| {
            write_ensemble_json(w, e)
        })?;
    }
    Ok(())
}

pub(crate) fn write_with(
    path: &Path,
    f: impl FnOnce(&mut BufWriter<File>) -> Result<()>,
) -> Result<()> {
    let mut w = create(path)?;
    f(&mut w)?;
    w.flush()?;
    Ok(())
}

fn histogram_svgs(a: &Analysis) -> Vec<(String, String)> {
    let mut out = Vec::new();
    if let Some(t) = &a.table {
        if let Ok(rep) =
            crate::metrics::ad_ratio_repartition(&t.to_network().expect("non-empty table"))
        {
            let edges = [0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, f64::INFINITY];
            let labels: Vec<String> = edges
                .windows(2)
                .map(|w| {
                    if w[1].is_infinite() {
                        format!("≥{}", w[0])
                    } else {
                        format!("[{}, {})", w[0], w[1])
                    }
                })
                .collect();
            let mut counts = vec![0usize; labels.len()];
            for x in rep.ratios() {
                let i = edges
                    .windows(2)
                    .position(|w| x >= w[0] && x < w[1])
                    .unwrap_or(labels.len() - 1);
                counts[i] += 1;
            }
            out.push((
                "ad_ratio.svg".into(),
                svg_histogram("Acceptor-to-discounter ratio per drawer", &labels, &counts),
            ));
        }
    }
    let labels: Vec<String> = PEER_BUCKETS.iter().map(|s| s.to_string()).collect();
    for (role, file) in [
        (crate::network::Role::Acceptor, "shared_acceptors.svg"),
        (crate::network::Role::Discounter, "shared_discounters.svg"),
    ] {
        if let Ok(s) = crate::metrics::shared_peer_distribution(&a.network, role) {
            let title = format!("Share of fellow {}s with a common drawer (%)", role.name());
            out.push((file.into(), svg_histogram(&title, &labels, &s.histogram)));
        }
    }
    if let Some(t5) = &a.bundle.table5.data {
        for (role, freq) in [
            ("acceptor", &t5.acceptor_frequency),
            ("discounter", &t5.discounter_frequency),
        ] {
            let labels: Vec<String> = freq.iter().map(|f| f.drawers.to_string()).collect();
            let counts: Vec<usize> = freq.iter().map(|f| f.actors).collect();
            let title = format!("Drawers per {role}");
            out.push((
                format!("drawers_per_{role}.svg"),
                svg_histogram(&title, &labels, &counts),
            ));
        }
    }
    out
}

/// Writes every output of an analysis into `dir` under fixed names.
pub fn write_outputs(dir: &Path, a: &Analysis, svg: bool) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    write_report_json(&dir.join(REPORT_FILE), &a.bundle)?;
    let comparisons = a
        .bundle
        .ensemble_comparison
        .data
        .as_deref()
        .unwrap_or_default();
    write_with(&dir.join(TABLE4_FILE), |w| {
        write_table4_csv(w, a.bundle.table4.data.as_ref(), comparisons)
    })?;
    write_with(&dir.join(TABLE5_FILE), |w| write_table5_csv(w, a))?;
    write_with(&dir.join(METRICS_FILE), |w| write_metrics_csv(w, a))?;
    write_with(&dir.join(GEOGRAPHY_FILE), |w| write_geography_csv(w, a))?;
    write_with(&dir.join(EDGES_FILE), |w| a.network.write_edge_list(w))?;
    for e in &a.ensembles {
        write_with(
            &dir.join(format!("ensemble_{}.json", e.variant.name())),
            |w| write_ensemble_json(w, e),
        )?;
    }
    if !a.ensembles.is_empty() {
        write_with(&dir.join(KS_SUMMARY_FILE), |w| {
            write_ks_summary(w, &a.ks_entries())
        })?;
    }
    if svg {
        for (name, body) in histogram_svgs(a) {
            std::fs::write(dir.join(name), body)?;
        }
    }
    Ok(())
}
