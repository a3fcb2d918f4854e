//! Market concentration: HHI, highest market penetration, top-k shares and
//! per-discounter geographic concentration.
//!
//! A market "portion" is one distinct drawer relationship. Discounters are
//! linked to a drawer through any acceptor.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ledger::{AgentId, RegionCode, RegionTaxonomy};
use crate::network::{Role, TriadNetwork};
use crate::scalar::Scalar;

pub const TOP_K: [usize; 4] = [3, 5, 10, 15];

/// Labelled percentage shares, summing to 100.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShareVector<T> {
    pub entries: Vec<(String, T)>,
}

impl<T: Scalar> ShareVector<T> {
    /// Shares proportional to `weights`.
    pub fn from_counts<I, S>(counts: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, u64)>,
        S: Into<String>,
    {
        let raw: Vec<(String, u64)> = counts.into_iter().map(|(s, c)| (s.into(), c)).collect();
        let total: u64 = raw.iter().map(|r| r.1).sum();
        if total == 0 {
            return Err(Error::InvalidArgument("shares of an empty market".into()));
        }
        let total_t = T::from_u64(total).expect("u64 fits");
        Ok(Self {
            entries: raw
                .into_iter()
                .map(|(s, c)| {
                    (
                        s,
                        T::hundred() * T::from_u64(c).expect("u64 fits") / total_t,
                    )
                })
                .collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn shares(&self) -> impl Iterator<Item = T> + '_ {
        self.entries.iter().map(|e| e.1)
    }

    pub fn get(&self, label: &str) -> Option<T> {
        self.entries.iter().find(|e| e.0 == label).map(|e| e.1)
    }

    /// Entries by descending share, ties by label.
    pub fn ranked(&self) -> Vec<&(String, T)> {
        let mut v: Vec<&(String, T)> = self.entries.iter().collect();
        v.sort_by(|a, b| {
            b.1.partial_cmp(&a.1)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| a.0.cmp(&b.0))
        });
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ShareMode {
    /// One portion per distinct drawer relationship.
    Relationship,
    /// One portion per bill.
    BillWeighted,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcentrationReport<T> {
    pub actors: usize,
    pub portions: u64,
    pub hhi: T,
    pub highest_penetration: T,
    pub top_k_shares: BTreeMap<usize, T>,
}

fn check_role(role: Role) -> Result<()> {
    if role == Role::Drawer {
        return Err(Error::InvalidArgument(
            "market shares are defined for acceptors and discounters".into(),
        ));
    }
    Ok(())
}

/// Portions per actor of `role`, in agent-id order.
pub fn market_portions(
    n: &TriadNetwork,
    role: Role,
    mode: ShareMode,
) -> Result<Vec<(AgentId, u64)>> {
    check_role(role)?;
    let out: Vec<(AgentId, u64)> = match mode {
        ShareMode::Relationship => n
            .drawer_portfolios(role)
            .into_iter()
            .map(|(a, drawers)| (n.ids()[a].clone(), drawers.len() as u64))
            .collect(),
        ShareMode::BillWeighted => {
            let mut m: BTreeMap<usize, u64> = BTreeMap::new();
            for t in n.triples() {
                let a = if role == Role::Acceptor {
                    t.acceptor
                } else {
                    t.discounter
                };
                *m.entry(a).or_default() += 1;
            }
            m.into_iter()
                .map(|(a, c)| (n.ids()[a].clone(), c))
                .collect()
        }
    };
    if out.is_empty() {
        return Err(Error::RoleTooSmall {
            role: role.name(),
            found: 0,
            needed: 1,
        });
    }
    Ok(out)
}

pub fn market_shares<T: Scalar>(n: &TriadNetwork, role: Role) -> Result<ShareVector<T>> {
    market_shares_with(n, role, ShareMode::Relationship)
}

pub fn market_shares_with<T: Scalar>(
    n: &TriadNetwork,
    role: Role,
    mode: ShareMode,
) -> Result<ShareVector<T>> {
    let portions = market_portions(n, role, mode)?;
    ShareVector::from_counts(portions.into_iter().map(|(a, c)| (a.to_string(), c)))
}

/// Sum of squared percentage shares, on the 0–10,000 scale.
pub fn hhi<T: Scalar>(s: &ShareVector<T>) -> T {
    s.shares().map(|x| x * x).sum()
}

/// Largest percentage of all drawers reached by one actor of `role`.
pub fn highest_penetration<T: Scalar>(n: &TriadNetwork, role: Role) -> Result<T> {
    check_role(role)?;
    let drawers = n.nodes_with(Role::Drawer).len();
    if drawers == 0 {
        return Err(Error::NoDrawers);
    }
    let best = market_portions(n, role, ShareMode::Relationship)?
        .into_iter()
        .map(|(_, c)| c)
        .max()
        .unwrap_or(0);
    Ok(T::hundred() * T::from_u64(best).expect("u64 fits") / T::of_usize(drawers))
}

/// Sum of the `k` largest shares, with the listed actors.
pub fn top_k<T: Scalar>(s: &ShareVector<T>, k: usize) -> (Vec<String>, T) {
    let ranked = s.ranked();
    let top = &ranked[..k.min(ranked.len())];
    (
        top.iter().map(|e| e.0.clone()).collect(),
        top.iter().map(|e| e.1).sum(),
    )
}

pub fn top_k_share<T: Scalar>(s: &ShareVector<T>, k: usize) -> Result<T> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    Ok(top_k(s, k).1)
}

pub fn concentration_report<T: Scalar>(
    n: &TriadNetwork,
    role: Role,
) -> Result<ConcentrationReport<T>> {
    let portions = market_portions(n, role, ShareMode::Relationship)?;
    let total: u64 = portions.iter().map(|p| p.1).sum();
    let shares = ShareVector::<T>::from_counts(portions.iter().map(|(a, c)| (a.to_string(), *c)))?;
    Ok(ConcentrationReport {
        actors: portions.len(),
        portions: total,
        hhi: hhi(&shares),
        highest_penetration: highest_penetration(n, role)?,
        top_k_shares: TOP_K.iter().map(|&k| (k, top_k(&shares, k).1)).collect(),
    })
}

/// Shares of the discounter's distinct drawers per taxonomy region, every
/// region listed in taxonomy order. Drawers without a known region count
/// in the unknown bucket.
pub fn region_breakdown<T: Scalar>(
    n: &TriadNetwork,
    discounter: &AgentId,
    taxonomy: &RegionTaxonomy,
) -> Result<ShareVector<T>> {
    let k = n
        .index_of(discounter)
        .ok_or_else(|| Error::UnknownNode(discounter.to_string()))?;
    let mut counts = vec![0u64; taxonomy.len()];
    let mut any = false;
    for d in n
        .drawer_portfolios(Role::Discounter)
        .remove(&k)
        .unwrap_or_default()
    {
        counts[taxonomy.bucket(n.region(d))] += 1;
        any = true;
    }
    if !any {
        return Err(Error::EmptyPortfolio(discounter.to_string()));
    }
    ShareVector::from_counts(taxonomy.codes().map(RegionCode::to_string).zip(counts))
}

pub fn geographic_hhi<T: Scalar>(
    n: &TriadNetwork,
    discounter: &AgentId,
    taxonomy: &RegionTaxonomy,
) -> Result<T> {
    Ok(hhi(&region_breakdown(n, discounter, taxonomy)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ledger::fixtures::{agent, bill, dataset};
    use crate::ledger::{Category, LedgerDataset};
    use crate::network::build_network;

    fn shares(v: &[f64]) -> ShareVector<f64> {
        ShareVector {
            entries: v
                .iter()
                .enumerate()
                .map(|(i, &s)| (format!("a{i:02}"), s))
                .collect(),
        }
    }

    #[test]
    fn distinct_drawers_define_portions() {
        let n = build_network(&dataset(&[
            ("P1", "A1", "K"),
            ("P2", "A1", "K"),
            ("P3", "A1", "K"),
            ("P1", "A1", "K"),
            ("P4", "A2", "K"),
            ("P4", "A2", "K"),
            ("P4", "A2", "K"),
            ("P4", "A2", "K"),
            ("P4", "A2", "K"),
        ]))
        .unwrap();
        let s = market_shares::<f64>(&n, Role::Acceptor).unwrap();
        assert_eq!(s.get("A1"), Some(75.0));
        assert_eq!(s.get("A2"), Some(25.0));
        let w = market_shares_with::<f64>(&n, Role::Acceptor, ShareMode::BillWeighted).unwrap();
        assert!((w.get("A2").unwrap() - 500.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn ratio_share_from_counts() {
        let s = ShareVector::<f64>::from_counts([("top", 325), ("rest", 6_075 - 325)]).unwrap();
        assert!((s.get("top").unwrap() - 5.35).abs() < 0.005);
    }

    #[test]
    fn hhi_examples() {
        assert_eq!(hhi(&shares(&[100.0])), 10_000.0);
        assert_eq!(hhi(&shares(&[50.0, 50.0])), 5_000.0);
        assert!((hhi(&shares(&[60.0, 30.0, 10.0])) - 4_600.0).abs() < 1e-9);
        assert_eq!(
            hhi(&ShareVector::<f32> {
                entries: vec![("a".into(), 100.0)]
            }),
            10_000.0
        );
    }

    #[test]
    fn top_k_examples() {
        let s = shares(&[40.0, 30.0, 20.0, 10.0]);
        assert_eq!(top_k_share(&s, 2).unwrap(), 70.0);
        assert_eq!(top_k_share(&s, 9).unwrap(), 100.0);
        let flat = shares(&[10.0; 10]);
        let (who, sum) = top_k(&flat, 3);
        assert!((sum - 30.0).abs() < 1e-12);
        assert_eq!(who, vec!["a00", "a01", "a02"]);
        assert!(top_k_share(&s, 0).is_err());
    }

    #[test]
    fn penetration_of_universal_actor() {
        let n = build_network(&dataset(&[
            ("P1", "A1", "K"),
            ("P2", "A1", "K"),
            ("P3", "A2", "K"),
        ]))
        .unwrap();
        assert_eq!(
            highest_penetration::<f64>(&n, Role::Discounter).unwrap(),
            100.0
        );
        assert!(
            (highest_penetration::<f64>(&n, Role::Acceptor).unwrap() - 200.0 / 3.0).abs() < 1e-12
        );
    }

    fn geo(regions: &[&str]) -> (TriadNetwork, RegionTaxonomy) {
        let mut agents = vec![
            agent("A", Category::MerchantBank, "uk"),
            agent("K", Category::DiscountHouse, "uk"),
        ];
        let mut bills = Vec::new();
        for (i, r) in regions.iter().enumerate() {
            let id = format!("P{i}");
            agents.push(agent(&id, Category::NonFinancial, r));
            bills.push(bill(&format!("B{i}"), &id, "A", "K"));
        }
        let d = LedgerDataset::new(agents, bills, RegionTaxonomy::default(), "t").unwrap();
        (build_network(&d).unwrap(), d.taxonomy().clone())
    }

    #[test]
    fn region_breakdown_examples() {
        let (n, t) = geo(&["uk", "uk", "latin_america", "latin_america"]);
        let s = region_breakdown::<f64>(&n, &AgentId::new("K"), &t).unwrap();
        assert_eq!(s.len(), 9);
        assert_eq!(s.get("uk"), Some(50.0));
        assert_eq!(s.get("latin_america"), Some(50.0));
        let (n, t) = geo(&["africa"]);
        assert_eq!(
            geographic_hhi::<f64>(&n, &AgentId::new("K"), &t).unwrap(),
            10_000.0
        );
        assert!(matches!(
            region_breakdown::<f64>(&n, &AgentId::new("A"), &t),
            Err(Error::EmptyPortfolio(_))
        ));
    }

    #[test]
    fn uniform_nine_regions() {
        let t = RegionTaxonomy::default();
        let codes: Vec<String> = t.codes().map(|c| c.to_string()).collect();
        let regions: Vec<&str> = codes.iter().map(String::as_str).collect();
        let (n, t) = geo(&regions);
        let h = geographic_hhi::<f64>(&n, &AgentId::new("K"), &t).unwrap();
        assert!((h - 10_000.0 / 9.0).abs() < 1e-9);
    }

    #[test]
    fn report_fields() {
        let n = build_network(&dataset(&[
            ("P1", "A1", "K1"),
            ("P2", "A2", "K1"),
            ("P3", "A3", "K2"),
        ]))
        .unwrap();
        let r = concentration_report::<f64>(&n, Role::Discounter).unwrap();
        assert_eq!((r.actors, r.portions), (2, 3));
        assert_eq!(r.top_k_shares[&3], 100.0);
        assert!((r.hhi - (200.0f64 / 3.0).powi(2) - (100.0f64 / 3.0).powi(2)).abs() < 1e-9);
    }
}
