use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ledger::AgentId;
use crate::network::TriadNetwork;

/// Transaction-count bins for multi-transaction drawers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum TxBin {
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "3")]
    Three,
    #[serde(rename = "4")]
    Four,
    #[serde(rename = "5-9")]
    FiveToNine,
    #[serde(rename = "10+")]
    TenPlus,
}

impl TxBin {
    pub const ALL: [TxBin; 5] = [
        TxBin::Two,
        TxBin::Three,
        TxBin::Four,
        TxBin::FiveToNine,
        TxBin::TenPlus,
    ];

    /// `None` for fewer than two transactions.
    pub fn of(transactions: usize) -> Option<TxBin> {
        match transactions {
            0 | 1 => None,
            2 => Some(TxBin::Two),
            3 => Some(TxBin::Three),
            4 => Some(TxBin::Four),
            5..=9 => Some(TxBin::FiveToNine),
            _ => Some(TxBin::TenPlus),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            TxBin::Two => "2",
            TxBin::Three => "3",
            TxBin::Four => "4",
            TxBin::FiveToNine => "5-9",
            TxBin::TenPlus => "10+",
        }
    }
}

impl fmt::Display for TxBin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One row of the repartition: how many drawers, and the percentage with
/// more, as many, or fewer discounters than acceptors. Empty bins report
/// zero percentages.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BinRow {
    pub bin: String,
    pub drawers: usize,
    pub more_discounters_pct: f64,
    pub equal_pct: f64,
    pub fewer_discounters_pct: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DrawerRatio {
    pub drawer: AgentId,
    pub transactions: usize,
    pub acceptors: usize,
    pub discounters: usize,
    /// Acceptors over discounters.
    pub ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerDrawerStats {
    pub mean: f64,
    pub se: f64,
    pub max: usize,
    pub min: usize,
}

impl PerDrawerStats {
    fn of(values: &[usize]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<usize>() as f64 / n;
        let var = if values.len() > 1 {
            values
                .iter()
                .map(|&v| (v as f64 - mean).powi(2))
                .sum::<f64>()
                / (n - 1.0)
        } else {
            0.0
        };
        Self {
            mean,
            se: (var / n).sqrt(),
            max: values.iter().copied().max().unwrap_or(0),
            min: values.iter().copied().min().unwrap_or(0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioRepartition {
    /// One row per [`TxBin`], then the `All > 1` row.
    pub rows: Vec<BinRow>,
    /// Per multi-transaction drawer, in drawer order.
    pub drawers: Vec<DrawerRatio>,
    pub acceptors_per_drawer: PerDrawerStats,
    pub discounters_per_drawer: PerDrawerStats,
    /// Lower median of the ratios.
    pub median_ratio: f64,
}

pub const ALL_BIN_LABEL: &str = "All > 1";

impl RatioRepartition {
    /// Repartition from `(drawer, acceptor, discounter)` rows; `label`
    /// names drawer keys. Drawers with fewer than two rows are ignored.
    pub fn from_rows<K, I, F>(rows: I, label: F) -> Result<Self>
    where
        K: Ord + Copy,
        I: IntoIterator<Item = (K, K, K)>,
        F: Fn(K) -> AgentId,
    {
        let mut per: BTreeMap<K, (usize, BTreeSet<K>, BTreeSet<K>)> = BTreeMap::new();
        for (d, a, k) in rows {
            let e = per.entry(d).or_default();
            e.0 += 1;
            e.1.insert(a);
            e.2.insert(k);
        }
        let drawers: Vec<DrawerRatio> = per
            .into_iter()
            .filter(|(_, (n, _, _))| *n >= 2)
            .map(|(d, (n, a, k))| DrawerRatio {
                drawer: label(d),
                transactions: n,
                acceptors: a.len(),
                discounters: k.len(),
                ratio: a.len() as f64 / k.len() as f64,
            })
            .collect();
        if drawers.is_empty() {
            return Err(Error::NoMultiTransactionDrawers);
        }
        Ok(Self::from_drawers(drawers))
    }

    fn from_drawers(drawers: Vec<DrawerRatio>) -> Self {
        let mut tallies: BTreeMap<TxBin, [usize; 3]> =
            TxBin::ALL.iter().map(|&b| (b, [0; 3])).collect();
        for d in &drawers {
            let bin = TxBin::of(d.transactions).expect("multi-transaction drawer");
            let slot = match d.discounters.cmp(&d.acceptors) {
                std::cmp::Ordering::Greater => 0,
                std::cmp::Ordering::Equal => 1,
                std::cmp::Ordering::Less => 2,
            };
            tallies.get_mut(&bin).unwrap()[slot] += 1;
        }
        let row = |label: &str, t: [usize; 3]| {
            let n: usize = t.iter().sum();
            let pct = |c: usize| {
                if n == 0 {
                    0.0
                } else {
                    100.0 * c as f64 / n as f64
                }
            };
            BinRow {
                bin: label.to_string(),
                drawers: n,
                more_discounters_pct: pct(t[0]),
                equal_pct: pct(t[1]),
                fewer_discounters_pct: pct(t[2]),
            }
        };
        let mut all = [0usize; 3];
        let mut rows: Vec<BinRow> = tallies
            .iter()
            .map(|(b, t)| {
                for i in 0..3 {
                    all[i] += t[i];
                }
                row(b.label(), *t)
            })
            .collect();
        rows.push(row(ALL_BIN_LABEL, all));

        let a: Vec<usize> = drawers.iter().map(|d| d.acceptors).collect();
        let k: Vec<usize> = drawers.iter().map(|d| d.discounters).collect();
        let mut ratios: Vec<f64> = drawers.iter().map(|d| d.ratio).collect();
        ratios.sort_by(f64::total_cmp);
        Self {
            rows,
            acceptors_per_drawer: PerDrawerStats::of(&a),
            discounters_per_drawer: PerDrawerStats::of(&k),
            median_ratio: ratios[(ratios.len() - 1) / 2],
            drawers,
        }
    }

    pub fn row(&self, label: &str) -> Option<&BinRow> {
        self.rows.iter().find(|r| r.bin == label)
    }

    pub fn ratios(&self) -> Vec<f64> {
        self.drawers.iter().map(|d| d.ratio).collect()
    }
}

pub fn ad_ratio_repartition(n: &TriadNetwork) -> Result<RatioRepartition> {
    RatioRepartition::from_rows(
        n.triples()
            .iter()
            .map(|t| (t.drawer, t.acceptor, t.discounter)),
        |d| n.ids()[d].clone(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ledger::fixtures::dataset;
    use crate::network::build_network;

    fn rep(bills: &[(&str, &str, &str)]) -> RatioRepartition {
        ad_ratio_repartition(&build_network(&dataset(bills)).unwrap()).unwrap()
    }

    #[test]
    fn one_acceptor_two_discounters() {
        let r = rep(&[("P", "A1", "D1"), ("P", "A1", "D2")]);
        let d = &r.drawers[0];
        assert_eq!((d.acceptors, d.discounters, d.ratio), (1, 2, 0.5));
        let row = r.row("2").unwrap();
        assert_eq!((row.drawers, row.more_discounters_pct), (1, 100.0));
    }

    #[test]
    fn two_acceptors_one_discounter() {
        let r = rep(&[("P", "A1", "D1"), ("P", "A2", "D1")]);
        assert_eq!(r.drawers[0].ratio, 2.0);
        assert_eq!(r.row("2").unwrap().fewer_discounters_pct, 100.0);
    }

    #[test]
    fn balanced_three_transactions() {
        let r = rep(&[("P", "A1", "D1"), ("P", "A2", "D2"), ("P", "A1", "D2")]);
        assert_eq!(r.drawers[0].ratio, 1.0);
        let row = r.row("3").unwrap();
        assert_eq!((row.drawers, row.equal_pct), (1, 100.0));
        assert_eq!(r.row(ALL_BIN_LABEL).unwrap().drawers, 1);
    }

    #[test]
    fn singles_only_is_an_error() {
        let n = build_network(&dataset(&[("P", "A", "D"), ("Q", "A", "D")])).unwrap();
        assert!(matches!(
            ad_ratio_repartition(&n),
            Err(Error::NoMultiTransactionDrawers)
        ));
    }

    #[test]
    fn lower_median_and_bins() {
        let r = rep(&[
            ("P", "A1", "D1"),
            ("P", "A1", "D2"),
            ("Q", "A1", "D1"),
            ("Q", "A2", "D1"),
            ("S", "A1", "D1"),
            ("S", "A1", "D1"),
            ("S", "A1", "D1"),
            ("S", "A1", "D1"),
            ("S", "A1", "D1"),
            ("S", "A1", "D1"),
            ("S", "A1", "D1"),
            ("S", "A1", "D1"),
            ("S", "A1", "D1"),
            ("S", "A1", "D1"),
        ]);
        // ratios 0.5, 2.0, 1.0 -> sorted 0.5, 1.0, 2.0
        assert_eq!(r.median_ratio, 1.0);
        assert_eq!(r.row("10+").unwrap().drawers, 1);
        let total: usize = r.rows[..5].iter().map(|b| b.drawers).sum();
        assert_eq!(total, r.row(ALL_BIN_LABEL).unwrap().drawers);
        assert_eq!(r.acceptors_per_drawer.max, 2);
    }
}
