use std::collections::HashSet;

use serde::Serialize;

use super::{LedgerDataset, RegionCode};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionShare {
    pub region: RegionCode,
    pub share_pct: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryStats {
    pub bill_count: usize,
    pub mean_amount_pounds: f64,
    pub mean_maturity_days: f64,
    pub mean_rate_pct: f64,
    pub drawers: usize,
    pub acceptors: usize,
    pub discounters: usize,
    /// Share of distinct drawers per taxonomy region, in taxonomy order.
    pub drawer_region_shares: Vec<RegionShare>,
}

pub fn summarize(d: &LedgerDataset) -> Result<SummaryStats> {
    let bills = d.bills();
    if bills.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let n = bills.len() as f64;
    let mean_amount_pounds = bills.iter().map(|b| b.amount_pence as f64).sum::<f64>() / n / 240.0;
    let mean_maturity_days = bills.iter().map(|b| b.maturity_days as f64).sum::<f64>() / n;
    let mean_rate_pct = bills.iter().map(|b| b.discount_rate_bp as f64).sum::<f64>() / n / 100.0;

    let mut drawers = Vec::new();
    let mut seen = HashSet::new();
    for b in bills {
        if seen.insert(&b.drawer_id) {
            drawers.push(&b.drawer_id);
        }
    }
    let acceptors: HashSet<_> = bills.iter().map(|b| &b.acceptor_id).collect();
    let discounters: HashSet<_> = bills.iter().map(|b| &b.discounter_id).collect();

    let tax = d.taxonomy();
    let mut counts = vec![0usize; tax.len()];
    for id in &drawers {
        let region = &d.agent(id).expect("checked dataset").region;
        counts[tax.bucket(Some(region))] += 1;
    }
    let drawer_region_shares = tax
        .codes()
        .zip(&counts)
        .map(|(code, &c)| RegionShare {
            region: code.clone(),
            share_pct: 100.0 * c as f64 / drawers.len() as f64,
        })
        .collect();

    Ok(SummaryStats {
        bill_count: bills.len(),
        mean_amount_pounds,
        mean_maturity_days,
        mean_rate_pct,
        drawers: drawers.len(),
        acceptors: acceptors.len(),
        discounters: discounters.len(),
        drawer_region_shares,
    })
}
