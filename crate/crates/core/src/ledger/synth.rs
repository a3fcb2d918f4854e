//! Calibrated synthetic ledgers.
//!
//! Each drawer gets a bill count from its transaction bin, then a small
//! "home set" of acceptors and a (typically larger) home set of
//! discounters. Every home-set member is used on at least one of the
//! drawer's bills, so the number of distinct acceptors/discounters per
//! drawer equals the home-set size. Actor popularity follows a Zipf-like
//! weighting, with optional planted top actors whose drawer reach is exact.

use chrono::{Duration, NaiveDate};
use rand::distr::weighted::WeightedIndex;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, LogNormal, Normal, Poisson};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{
    AgentId, AgentRecord, BillId, BillRecord, Category, LedgerDataset, RegionCode, RegionTaxonomy,
};
use crate::error::{Error, Result};

/// Number of drawers per transaction-count bin: 1, 2, 3, 4, 5–9, 10+.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DrawerBins {
    pub one: usize,
    pub two: usize,
    pub three: usize,
    pub four: usize,
    pub five_to_nine: usize,
    pub ten_plus: usize,
}

impl DrawerBins {
    pub fn total(&self) -> usize {
        self.one + self.two + self.three + self.four + self.five_to_nine + self.ten_plus
    }

    fn min_bills(&self) -> usize {
        self.one
            + 2 * self.two
            + 3 * self.three
            + 4 * self.four
            + 5 * self.five_to_nine
            + 10 * self.ten_plus
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionTarget {
    pub region: RegionCode,
    pub share_pct: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthConfig {
    pub bills: usize,
    pub drawers: usize,
    pub acceptors: usize,
    pub discounters: usize,
    /// Agents acting as both drawer and acceptor.
    pub multi_role: usize,
    pub drawer_bins: DrawerBins,
    /// Mean distinct acceptors per drawer before capping at its bill count.
    pub acceptor_home_mean: f64,
    pub discounter_home_mean: f64,
    /// Zipf exponent of acceptor popularity.
    pub acceptor_skew: f64,
    pub discounter_skew: f64,
    pub region_shares: Vec<RegionTarget>,
    pub mean_amount_pence: f64,
    pub mean_maturity_days: f64,
    pub mean_rate_bp: f64,
    #[serde(default)]
    pub planted_top_acceptor_drawers: Option<usize>,
    #[serde(default)]
    pub planted_top_discounter_drawers: Option<usize>,
    #[serde(default = "default_year")]
    pub year: i32,
    #[serde(default)]
    pub taxonomy: Option<RegionTaxonomy>,
    pub seed: u64,
}

fn default_year() -> i32 {
    1906
}

impl SynthConfig {
    /// The 1906 discount-ledger demography: 23,493 bills, 3,554 drawers,
    /// 1,439 acceptors and 145 discounters over 4,970 agents.
    pub fn calibrated_1906(seed: u64) -> Self {
        let shares = [
            ("uk", 13.56),
            ("continental_europe", 17.50),
            ("usa_canada", 20.40),
            ("latin_america", 15.14),
            ("india_far_east", 19.78),
            ("africa", 5.46),
            ("oceania", 2.11),
            ("rest_of_world", 6.05),
        ];
        Self {
            bills: 23_493,
            drawers: 3_554,
            acceptors: 1_439,
            discounters: 145,
            multi_role: 168,
            drawer_bins: DrawerBins {
                one: 2_173,
                two: 558,
                three: 239,
                four: 158,
                five_to_nine: 286,
                ten_plus: 140,
            },
            acceptor_home_mean: 2.9,
            discounter_home_mean: 3.6,
            acceptor_skew: 0.8,
            discounter_skew: 1.1,
            region_shares: shares
                .into_iter()
                .map(|(r, s)| RegionTarget {
                    region: RegionCode::new(r),
                    share_pct: s,
                })
                .collect(),
            mean_amount_pence: 1_346.0 * 240.0,
            mean_maturity_days: 44.0,
            mean_rate_bp: 417.0,
            planted_top_acceptor_drawers: Some(325),
            planted_top_discounter_drawers: Some(705),
            year: 1906,
            taxonomy: None,
            seed,
        }
    }

    pub fn taxonomy(&self) -> RegionTaxonomy {
        self.taxonomy.clone().unwrap_or_default()
    }

    /// SHA-256 of the canonical JSON encoding.
    pub fn digest(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(json))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.drawers == 0 || self.acceptors == 0 || self.discounters == 0 {
            return bad("role counts must be positive".into());
        }
        if self.drawer_bins.total() != self.drawers {
            return bad(format!(
                "drawer bins sum to {}, expected {} drawers",
                self.drawer_bins.total(),
                self.drawers
            ));
        }
        let taxonomy = self.taxonomy();
        let mut sum = 0.0;
        for t in &self.region_shares {
            if t.share_pct.is_nan() || t.share_pct < 0.0 {
                return bad(format!("negative share for {}", t.region));
            }
            if !taxonomy.contains(&t.region) {
                return bad(format!("region {} not in taxonomy", t.region));
            }
            sum += t.share_pct;
        }
        if (sum - 100.0).abs() > 1e-9 {
            return bad(format!("region shares sum to {sum}, expected 100"));
        }
        for (name, v) in [
            ("acceptor_home_mean", self.acceptor_home_mean),
            ("discounter_home_mean", self.discounter_home_mean),
        ] {
            if v.is_nan() || v < 1.0 {
                return bad(format!("{name} must be at least 1"));
            }
        }
        for (name, v) in [
            ("acceptor_skew", self.acceptor_skew),
            ("discounter_skew", self.discounter_skew),
            ("mean_amount_pence", self.mean_amount_pence),
            ("mean_rate_bp", self.mean_rate_bp),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return bad(format!("{name} must be non-negative"));
            }
        }
        if self.mean_maturity_days.is_nan() || self.mean_maturity_days < 1.0 {
            return bad("mean_maturity_days must be at least 1".into());
        }
        Ok(())
    }

    fn check_feasible(&self) -> Result<()> {
        let infeasible = |m: String| Err(Error::Infeasible(m));
        if self.bills < self.drawers {
            return infeasible(format!(
                "{} bills cannot cover {} drawers",
                self.bills, self.drawers
            ));
        }
        let min = self.drawer_bins.min_bills();
        if self.bills < min {
            return infeasible(format!(
                "drawer bins need at least {min} bills, have {}",
                self.bills
            ));
        }
        if self.drawer_bins.ten_plus == 0 {
            let b = &self.drawer_bins;
            let max = b.one + 2 * b.two + 3 * b.three + 4 * b.four + 9 * b.five_to_nine;
            if self.bills > max {
                return infeasible(format!("drawer bins hold at most {max} bills"));
            }
        }
        if self.multi_role > self.drawers.min(self.acceptors) {
            return infeasible("multi_role exceeds drawer or acceptor count".into());
        }
        if self.multi_role == self.acceptors
            && self.multi_role > 0
            && self.drawers == self.multi_role
        {
            return infeasible("every drawer would have to accept its own bills".into());
        }
        for (role, planted, n) in [
            (
                "acceptor",
                self.planted_top_acceptor_drawers,
                self.acceptors,
            ),
            (
                "discounter",
                self.planted_top_discounter_drawers,
                self.discounters,
            ),
        ] {
            if let Some(p) = planted {
                if p == 0 || p > self.drawers {
                    return infeasible(format!(
                        "planted top {role} reach {p} outside 1..={}",
                        self.drawers
                    ));
                }
                if n > 1 && p == 1 {
                    return infeasible(format!("planted top {role} reach must exceed 1"));
                }
            }
        }
        Ok(())
    }
}

/// Generates a dataset from `cfg`. Pure function of the config, seed
/// included.
pub fn synthesize(cfg: &SynthConfig) -> Result<LedgerDataset> {
    cfg.validate()?;
    cfg.check_feasible()?;
    let taxonomy = cfg.taxonomy();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let nd = cfg.drawers;
    let na = cfg.acceptors;
    let nk = cfg.discounters;
    let overlap = cfg.multi_role;

    // Drawer i < nd - overlap is a pure drawer; the rest are acceptors
    // na - overlap .. na acting as drawers too.
    let drawer_self: Vec<Option<usize>> = (0..nd)
        .map(|i| (i >= nd - overlap).then(|| na - overlap + (i - (nd - overlap))))
        .collect();

    let bill_counts = drawer_bill_counts(cfg, &mut rng)?;

    let a_sizes = home_sizes(&bill_counts, cfg.acceptor_home_mean, na, &mut rng)?;
    let k_sizes = home_sizes(&bill_counts, cfg.discounter_home_mean, nk, &mut rng)?;
    let a_sets = assign_home_sets(
        "acceptor",
        a_sizes,
        &bill_counts,
        na,
        cfg.acceptor_skew,
        cfg.planted_top_acceptor_drawers,
        &drawer_self,
        &mut rng,
    )?;
    let no_self = vec![None; nd];
    let k_sets = assign_home_sets(
        "discounter",
        k_sizes,
        &bill_counts,
        nk,
        cfg.discounter_skew,
        cfg.planted_top_discounter_drawers,
        &no_self,
        &mut rng,
    )?;

    let width = 5.max(format!("{}", nd.max(na).max(nk).max(cfg.bills)).len());
    let drawer_ids: Vec<AgentId> = (0..nd)
        .map(|i| match drawer_self[i] {
            Some(a) => AgentId::new(format!("A{:0width$}", a + 1)),
            None => AgentId::new(format!("D{:0width$}", i + 1)),
        })
        .collect();
    let acceptor_ids: Vec<AgentId> = (0..na)
        .map(|a| AgentId::new(format!("A{:0width$}", a + 1)))
        .collect();
    let discounter_ids: Vec<AgentId> = (0..nk)
        .map(|k| AgentId::new(format!("K{:0width$}", k + 1)))
        .collect();

    let uk = RegionCode::new(RegionTaxonomy::UK);
    let drawer_regions = drawer_regions(cfg, &taxonomy, &drawer_self, &uk, &mut rng)?;

    let mut agents = Vec::with_capacity(nd + na + nk - overlap);
    for i in 0..nd - overlap {
        agents.push(AgentRecord {
            agent_id: drawer_ids[i].clone(),
            name: format!("Drawer {}", i + 1),
            category: Category::NonFinancial,
            city: None,
            region: drawer_regions[i].clone(),
        });
    }
    let acceptor_categories = [
        (Category::MerchantBank, 6.0),
        (Category::AngloForeignBank, 2.0),
        (Category::ForeignBank, 1.0),
        (Category::ClearingBank, 1.0),
    ];
    let discounter_categories = [
        (Category::DiscountHouse, 4.0),
        (Category::AngloForeignBank, 2.0),
        (Category::ClearingBank, 1.0),
        (Category::MerchantBank, 3.0),
    ];
    let pick = |cats: &[(Category, f64)], rng: &mut ChaCha8Rng| {
        let w = WeightedIndex::new(cats.iter().map(|c| c.1)).expect("positive weights");
        cats[w.sample(rng)].0
    };
    let home_region = if taxonomy.contains(&uk) {
        uk.clone()
    } else {
        taxonomy.unknown().clone()
    };
    for (a, id) in acceptor_ids.iter().enumerate().take(na) {
        let category = pick(&acceptor_categories, &mut rng);
        agents.push(AgentRecord {
            agent_id: id.clone(),
            name: format!("Acceptor {}", a + 1),
            category,
            city: Some("London".into()),
            region: home_region.clone(),
        });
    }
    for (k, id) in discounter_ids.iter().enumerate().take(nk) {
        let category = pick(&discounter_categories, &mut rng);
        agents.push(AgentRecord {
            agent_id: id.clone(),
            name: format!("Discounter {}", k + 1),
            category,
            city: Some("London".into()),
            region: home_region.clone(),
        });
    }

    // Triples per drawer: every home-set member at least once.
    let mut triples = Vec::with_capacity(cfg.bills);
    for i in 0..nd {
        let b = bill_counts[i];
        let acc = fill_sequence(&a_sets[i], b, &mut rng);
        let disc = fill_sequence(&k_sets[i], b, &mut rng);
        for (a, k) in acc.into_iter().zip(disc) {
            triples.push((i, a, k));
        }
    }
    triples.shuffle(&mut rng);

    let sigma = 1.0_f64;
    let amount = LogNormal::new(
        cfg.mean_amount_pence.max(1.0).ln() - sigma * sigma / 2.0,
        sigma,
    )
    .expect("valid lognormal");
    let maturity = Gamma::new(4.0, cfg.mean_maturity_days / 4.0).expect("valid gamma");
    let rate = Normal::new(cfg.mean_rate_bp, 40.0).expect("valid normal");
    let start = NaiveDate::from_ymd_opt(cfg.year, 1, 1)
        .ok_or_else(|| Error::Config(format!("invalid year {}", cfg.year)))?;
    let days_in_year = if NaiveDate::from_ymd_opt(cfg.year, 2, 29).is_some() {
        366
    } else {
        365
    };

    let bills = triples
        .into_iter()
        .enumerate()
        .map(|(n, (i, a, k))| BillRecord {
            bill_id: BillId::new(format!("B{:0width$}", n + 1)),
            date: start + Duration::days(rng.random_range(0..days_in_year)),
            amount_pence: (amount.sample(&mut rng).round() as u64).max(1),
            maturity_days: (maturity.sample(&mut rng).round() as u32).max(1),
            discount_rate_bp: rate.sample(&mut rng).round().max(0.0) as u32,
            drawer_id: drawer_ids[i].clone(),
            acceptor_id: acceptor_ids[a].clone(),
            discounter_id: discounter_ids[k].clone(),
        })
        .collect();

    LedgerDataset::new(agents, bills, taxonomy, format!("synth:{}", cfg.digest()))
}

fn drawer_bill_counts(cfg: &SynthConfig, rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
    let bins = &cfg.drawer_bins;
    let mut counts = Vec::with_capacity(cfg.drawers);
    for (n, c) in [
        (bins.one, 1),
        (bins.two, 2),
        (bins.three, 3),
        (bins.four, 4),
    ] {
        counts.extend(std::iter::repeat_n(c, n));
    }
    let fixed: usize = counts.iter().sum();
    let mut mid: Vec<usize> = (0..bins.five_to_nine)
        .map(|_| rng.random_range(5..=9))
        .collect();
    let mut big = vec![10usize; bins.ten_plus];

    if bins.ten_plus > 0 {
        // Shrink mid-bin draws until the 10+ drawers can take the rest.
        let budget = cfg.bills - fixed - 10 * bins.ten_plus;
        let mut mid_total: usize = mid.iter().sum();
        while mid_total > budget {
            let i = rng.random_range(0..mid.len());
            if mid[i] > 5 {
                mid[i] -= 1;
                mid_total -= 1;
            }
        }
        let extra = budget - mid_total;
        let pareto = rand_distr::Pareto::new(1.0, 1.2).expect("valid pareto");
        let weights: Vec<f64> = (0..big.len()).map(|_| pareto.sample(rng)).collect();
        let total_w: f64 = weights.iter().sum();
        let mut assigned = 0;
        let mut fracs = Vec::with_capacity(big.len());
        for (i, w) in weights.iter().enumerate() {
            let exact = extra as f64 * w / total_w;
            let whole = exact.floor() as usize;
            big[i] += whole;
            assigned += whole;
            fracs.push((exact - whole as f64, i));
        }
        fracs.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        for &(_, i) in fracs.iter().take(extra - assigned) {
            big[i] += 1;
        }
    } else {
        let target = cfg.bills - fixed;
        let mut mid_total: usize = mid.iter().sum();
        while mid_total != target {
            let i = rng.random_range(0..mid.len());
            if mid_total > target && mid[i] > 5 {
                mid[i] -= 1;
                mid_total -= 1;
            } else if mid_total < target && mid[i] < 9 {
                mid[i] += 1;
                mid_total += 1;
            }
        }
    }
    counts.extend(mid);
    counts.extend(big);
    counts.shuffle(rng);
    debug_assert_eq!(counts.iter().sum::<usize>(), cfg.bills);
    Ok(counts)
}

fn home_sizes(
    bill_counts: &[usize],
    mean: f64,
    n_actors: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<usize>> {
    let extra = (mean > 1.0).then(|| Poisson::new(mean - 1.0).expect("positive mean"));
    Ok(bill_counts
        .iter()
        .map(|&b| {
            let s = 1 + extra.as_ref().map_or(0, |p| p.sample(rng) as usize);
            s.min(b).min(n_actors)
        })
        .collect())
}

#[allow(clippy::too_many_arguments)]
fn assign_home_sets(
    role: &str,
    mut sizes: Vec<usize>,
    bill_counts: &[usize],
    n_actors: usize,
    skew: f64,
    planted: Option<usize>,
    drawer_self: &[Option<usize>],
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Vec<usize>>> {
    let nd = sizes.len();
    let excludes = |i: usize, a: usize| drawer_self[i] == Some(a);
    let planted = if n_actors == 1 { None } else { planted };
    let needed = match planted {
        Some(p) => p + n_actors - 1,
        None => n_actors,
    };
    let mut total: usize = sizes.iter().sum();
    if total < needed {
        let mut order: Vec<usize> = (0..nd).collect();
        order.shuffle(rng);
        'grow: loop {
            let before = total;
            for &i in &order {
                if total >= needed {
                    break 'grow;
                }
                if sizes[i] < bill_counts[i].min(n_actors) {
                    sizes[i] += 1;
                    total += 1;
                }
            }
            if total == before {
                return Err(Error::Infeasible(format!(
                    "not enough bills to give each of {n_actors} {role}s a drawer"
                )));
            }
        }
    }

    let mut sets: Vec<Vec<usize>> = vec![Vec::new(); nd];
    let mut reach = vec![0usize; n_actors];

    if let Some(p) = planted {
        let mut order: Vec<usize> = (0..nd).filter(|&i| !excludes(i, 0)).collect();
        order.shuffle(rng);
        if order.len() < p {
            return Err(Error::Infeasible(format!("cannot plant {role} reach {p}")));
        }
        for &i in &order[..p] {
            sets[i].push(0);
        }
        reach[0] = p;
    }
    let cap = planted.map_or(usize::MAX, |p| p - 1);
    let first = usize::from(planted.is_some());

    // Coverage: every remaining actor gets one drawer with a free slot.
    let mut free: Vec<usize> = (0..nd).filter(|&i| sets[i].len() < sizes[i]).collect();
    let mut actors: Vec<usize> = (first..n_actors).collect();
    actors.shuffle(rng);
    for a in actors {
        let mut placed = false;
        for _ in 0..64 {
            if free.is_empty() {
                break;
            }
            let slot = rng.random_range(0..free.len());
            let i = free[slot];
            if excludes(i, a) || sets[i].contains(&a) {
                continue;
            }
            sets[i].push(a);
            reach[a] += 1;
            if sets[i].len() >= sizes[i] {
                free.swap_remove(slot);
            }
            placed = true;
            break;
        }
        if !placed {
            let pos = free
                .iter()
                .position(|&i| !excludes(i, a) && !sets[i].contains(&a))
                .ok_or_else(|| Error::Infeasible(format!("cannot place {role} {a}")))?;
            let i = free[pos];
            sets[i].push(a);
            reach[a] += 1;
            if sets[i].len() >= sizes[i] {
                free.swap_remove(pos);
            }
        }
    }

    // Fill remaining slots by popularity, never letting an actor reach the
    // planted maximum.
    let weights: Vec<f64> = (first..n_actors)
        .map(|a| 1.0 / ((a - first + 1) as f64).powf(skew))
        .collect();
    let sampler = if weights.is_empty() {
        None
    } else {
        Some(WeightedIndex::new(&weights).expect("positive weights"))
    };
    let mut fill_order: Vec<usize> = (0..nd).collect();
    fill_order.shuffle(rng);
    for i in fill_order {
        while sets[i].len() < sizes[i] {
            let ok = |a: usize, sets: &[Vec<usize>], reach: &[usize]| {
                !excludes(i, a) && !sets[i].contains(&a) && reach[a] < cap
            };
            let mut chosen = None;
            if let Some(s) = &sampler {
                for _ in 0..64 {
                    let a = first + s.sample(rng);
                    if ok(a, &sets, &reach) {
                        chosen = Some(a);
                        break;
                    }
                }
            }
            if chosen.is_none() {
                let start = rng.random_range(0..n_actors);
                chosen = (0..n_actors)
                    .map(|o| (start + o) % n_actors)
                    .find(|&a| a >= first && ok(a, &sets, &reach));
            }
            match chosen {
                Some(a) => {
                    sets[i].push(a);
                    reach[a] += 1;
                }
                None => break,
            }
        }
        if sets[i].is_empty() {
            return Err(Error::Infeasible(format!(
                "drawer {i} has no eligible {role}"
            )));
        }
    }
    Ok(sets)
}

fn fill_sequence(set: &[usize], len: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut seq = set.to_vec();
    while seq.len() < len {
        seq.push(set[rng.random_range(0..set.len())]);
    }
    seq.shuffle(rng);
    seq
}

/// Largest-remainder apportionment of drawer regions; multi-role drawers
/// (London acceptors) are pinned to the home region.
fn drawer_regions(
    cfg: &SynthConfig,
    taxonomy: &RegionTaxonomy,
    drawer_self: &[Option<usize>],
    uk: &RegionCode,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<RegionCode>> {
    let nd = cfg.drawers;
    let mut counts: Vec<(RegionCode, usize)> = Vec::new();
    let mut fracs = Vec::new();
    let mut assigned = 0;
    for (idx, t) in cfg.region_shares.iter().enumerate() {
        let exact = t.share_pct / 100.0 * nd as f64;
        let whole = exact.floor() as usize;
        counts.push((t.region.clone(), whole));
        assigned += whole;
        fracs.push((exact - whole as f64, idx));
    }
    fracs.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    for &(_, idx) in fracs.iter().take(nd.saturating_sub(assigned)) {
        counts[idx].1 += 1;
    }
    if counts.is_empty() {
        counts.push((taxonomy.unknown().clone(), nd));
    }

    let pinned = drawer_self.iter().filter(|s| s.is_some()).count();
    let mut pool = Vec::with_capacity(nd - pinned);
    let mut pinned_left = pinned;
    for (code, c) in &counts {
        let mut c = *c;
        if code == uk {
            if c < pinned {
                return Err(Error::Infeasible(format!(
                    "{pinned} multi-role drawers exceed the {c} drawers planned for {uk}"
                )));
            }
            c -= pinned;
            pinned_left = 0;
        }
        pool.extend(std::iter::repeat_n(code.clone(), c));
    }
    if pinned_left > 0 {
        return Err(Error::Infeasible(format!(
            "multi-role drawers need a share for region {uk}"
        )));
    }
    pool.shuffle(rng);
    let mut pool = pool.into_iter();
    Ok(drawer_self
        .iter()
        .map(|s| match s {
            Some(_) => uk.clone(),
            None => pool.next().expect("pool sized to pure drawers"),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use std::collections::{BTreeMap, BTreeSet};

    use super::*;
    use crate::ledger::summarize;

    fn small(seed: u64) -> SynthConfig {
        SynthConfig {
            bills: 400,
            drawers: 120,
            acceptors: 40,
            discounters: 12,
            multi_role: 5,
            drawer_bins: DrawerBins {
                one: 60,
                two: 20,
                three: 10,
                four: 10,
                five_to_nine: 12,
                ten_plus: 8,
            },
            acceptor_home_mean: 1.8,
            discounter_home_mean: 2.5,
            acceptor_skew: 0.8,
            discounter_skew: 1.0,
            region_shares: vec![
                RegionTarget {
                    region: "uk".into(),
                    share_pct: 40.0,
                },
                RegionTarget {
                    region: "africa".into(),
                    share_pct: 60.0,
                },
            ],
            mean_amount_pence: 240_000.0,
            mean_maturity_days: 60.0,
            mean_rate_bp: 400.0,
            planted_top_acceptor_drawers: Some(30),
            planted_top_discounter_drawers: Some(50),
            year: 1906,
            taxonomy: None,
            seed,
        }
    }

    fn role_sets(d: &LedgerDataset) -> [BTreeSet<AgentId>; 3] {
        let mut s: [BTreeSet<AgentId>; 3] = Default::default();
        for b in d.bills() {
            s[0].insert(b.drawer_id.clone());
            s[1].insert(b.acceptor_id.clone());
            s[2].insert(b.discounter_id.clone());
        }
        s
    }

    #[test]
    fn role_counts_and_bins_are_exact() {
        let cfg = small(7);
        let d = synthesize(&cfg).unwrap();
        assert_eq!(d.bills().len(), 400);
        let [dr, ac, di] = role_sets(&d);
        assert_eq!((dr.len(), ac.len(), di.len()), (120, 40, 12));
        assert_eq!(d.agents().len(), 120 + 40 + 12 - 5);
        let mut per_drawer: BTreeMap<&AgentId, usize> = BTreeMap::new();
        for b in d.bills() {
            *per_drawer.entry(&b.drawer_id).or_default() += 1;
        }
        let mut hist = [0usize; 6];
        for &c in per_drawer.values() {
            hist[match c {
                1..=4 => c - 1,
                5..=9 => 4,
                _ => 5,
            }] += 1;
        }
        assert_eq!(hist, [60, 20, 10, 10, 12, 8]);
        for b in d.bills() {
            assert_ne!(b.drawer_id, b.acceptor_id);
        }
    }

    #[test]
    fn planted_reach_is_exact_and_maximal() {
        let d = synthesize(&small(3)).unwrap();
        let mut acc: BTreeMap<&AgentId, BTreeSet<&AgentId>> = BTreeMap::new();
        let mut disc: BTreeMap<&AgentId, BTreeSet<&AgentId>> = BTreeMap::new();
        for b in d.bills() {
            acc.entry(&b.acceptor_id).or_default().insert(&b.drawer_id);
            disc.entry(&b.discounter_id)
                .or_default()
                .insert(&b.drawer_id);
        }
        let top = |m: &BTreeMap<&AgentId, BTreeSet<&AgentId>>| {
            let mut v: Vec<usize> = m.values().map(|s| s.len()).collect();
            v.sort_unstable_by(|a, b| b.cmp(a));
            (v[0], v[1])
        };
        let (a0, a1) = top(&acc);
        let (k0, k1) = top(&disc);
        assert_eq!(a0, 30);
        assert!(a1 < 30);
        assert_eq!(k0, 50);
        assert!(k1 < 50);
    }

    #[test]
    fn same_seed_same_dataset() {
        let a = synthesize(&small(11)).unwrap();
        let b = synthesize(&small(11)).unwrap();
        assert_eq!(a, b);
        let c = synthesize(&small(12)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn region_shares_within_half_point() {
        let d = synthesize(&small(5)).unwrap();
        let s = summarize(&d).unwrap();
        let get = |c: &str| {
            s.drawer_region_shares
                .iter()
                .find(|r| r.region.as_str() == c)
                .unwrap()
                .share_pct
        };
        assert!((get("uk") - 40.0).abs() <= 0.5);
        assert!((get("africa") - 60.0).abs() <= 0.5);
    }

    #[test]
    fn fewer_bills_than_drawers_is_infeasible() {
        let mut cfg = small(1);
        cfg.bills = 3;
        cfg.drawers = 5;
        cfg.drawer_bins = DrawerBins {
            one: 5,
            two: 0,
            three: 0,
            four: 0,
            five_to_nine: 0,
            ten_plus: 0,
        };
        assert!(matches!(synthesize(&cfg), Err(Error::Infeasible(_))));
    }

    #[test]
    fn bad_configs_rejected() {
        let mut cfg = small(1);
        cfg.region_shares[0].share_pct = 39.0;
        assert!(matches!(synthesize(&cfg), Err(Error::Config(_))));
        let mut cfg = small(1);
        cfg.drawer_bins.one += 1;
        assert!(matches!(synthesize(&cfg), Err(Error::Config(_))));
        let mut cfg = small(1);
        cfg.acceptors = 0;
        assert!(matches!(synthesize(&cfg), Err(Error::Config(_))));
    }

    #[test]
    fn config_json_round_trip() {
        let cfg = SynthConfig::calibrated_1906(42);
        let s = serde_json::to_string(&cfg).unwrap();
        let back: SynthConfig = serde_json::from_str(&s).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.digest(), cfg.digest());
    }
}
