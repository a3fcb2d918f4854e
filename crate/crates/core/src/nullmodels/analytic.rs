use std::collections::BTreeMap;

use num_traits::{FromPrimitive, Num};
use serde::Serialize;

use super::table::TransactionTable;
use crate::error::{Error, Result};
use crate::metrics::{TxBin, ALL_BIN_LABEL};

/// Largest `k` accepted by [`analytic_coincidence`].
pub const MAX_TRANSACTIONS: usize = 64;

/// Probabilities that `k` independent uniform draws give more, as many or
/// fewer distinct discounters than distinct acceptors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Coincidence<T> {
    pub equal: T,
    pub more_discounters: T,
    pub fewer_discounters: T,
}

/// `p[j]` = probability of exactly `j` distinct values in `k` uniform draws
/// from `n`.
fn distinct_counts<T>(k: usize, n: usize) -> Result<Vec<T>>
where
    T: Num + FromPrimitive + Clone,
{
    let of = |x: usize| {
        T::from_usize(x).ok_or_else(|| Error::InvalidArgument(format!("{x} not representable")))
    };
    let nn = of(n)?;
    let top = k.min(n);
    let mut p = vec![T::zero(); top + 1];
    p[0] = T::one();
    for _ in 0..k {
        let mut next = vec![T::zero(); top + 1];
        for j in 1..=top {
            let stay = p[j].clone() * of(j)? / nn.clone();
            let grow = p[j - 1].clone() * of(n - j + 1)? / nn.clone();
            next[j] = stay + grow;
        }
        p = next;
    }
    Ok(p)
}

/// Exact for rational `T`. Errors for `k < 2`, `k > 64` or an empty universe.
pub fn analytic_coincidence<T>(
    k: usize,
    n_acceptors: usize,
    n_discounters: usize,
) -> Result<Coincidence<T>>
where
    T: Num + FromPrimitive + Clone,
{
    if !(2..=MAX_TRANSACTIONS).contains(&k) {
        return Err(Error::InvalidArgument(format!(
            "k must lie in 2..={MAX_TRANSACTIONS}, got {k}"
        )));
    }
    if n_acceptors == 0 || n_discounters == 0 {
        return Err(Error::InvalidArgument(
            "universe sizes must be positive".into(),
        ));
    }
    let pa = distinct_counts::<T>(k, n_acceptors)?;
    let pd = distinct_counts::<T>(k, n_discounters)?;
    let (mut equal, mut more, mut fewer) = (T::zero(), T::zero(), T::zero());
    for (a, wa) in pa.iter().enumerate().skip(1) {
        for (d, wd) in pd.iter().enumerate().skip(1) {
            let w = wa.clone() * wd.clone();
            match d.cmp(&a) {
                std::cmp::Ordering::Greater => more = more + w,
                std::cmp::Ordering::Equal => equal = equal + w,
                std::cmp::Ordering::Less => fewer = fewer + w,
            }
        }
    }
    Ok(Coincidence {
        equal,
        more_discounters: more,
        fewer_discounters: fewer,
    })
}

/// Expected repartition row under independent uniform draws, in percent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpectedRow {
    pub bin: String,
    pub drawers: usize,
    pub more_discounters_pct: f64,
    pub equal_pct: f64,
    pub fewer_discounters_pct: f64,
    /// Drawers left out because they exceed [`MAX_TRANSACTIONS`].
    pub skipped: usize,
}

/// Averages [`analytic_coincidence`] over the table's drawers, per bin and
/// overall, using the table's universe sizes.
pub fn expected_repartition(t: &TransactionTable) -> Result<Vec<ExpectedRow>> {
    let (na, nd) = (t.acceptor_universe().len(), t.discounter_universe().len());
    let mut cache: BTreeMap<usize, Coincidence<f64>> = BTreeMap::new();
    let mut sums: BTreeMap<TxBin, ([f64; 3], usize, usize)> =
        TxBin::ALL.iter().map(|&b| (b, ([0.0; 3], 0, 0))).collect();
    for &k in t.drawer_counts().values() {
        let Some(bin) = TxBin::of(k) else { continue };
        let e = sums.get_mut(&bin).unwrap();
        if k > MAX_TRANSACTIONS {
            e.2 += 1;
            continue;
        }
        let c = match cache.get(&k) {
            Some(c) => c,
            None => {
                let c = analytic_coincidence::<f64>(k, na, nd)?;
                cache.entry(k).or_insert(c)
            }
        };
        e.0[0] += c.more_discounters;
        e.0[1] += c.equal;
        e.0[2] += c.fewer_discounters;
        e.1 += 1;
    }
    let row = |bin: &str, s: [f64; 3], n: usize, skipped: usize| {
        let pct = |x: f64| if n == 0 { 0.0 } else { 100.0 * x / n as f64 };
        ExpectedRow {
            bin: bin.to_string(),
            drawers: n,
            more_discounters_pct: pct(s[0]),
            equal_pct: pct(s[1]),
            fewer_discounters_pct: pct(s[2]),
            skipped,
        }
    };
    let mut all = ([0.0; 3], 0, 0);
    let mut rows: Vec<ExpectedRow> = sums
        .iter()
        .map(|(b, (s, n, sk))| {
            for (acc, x) in all.0.iter_mut().zip(s) {
                *acc += x;
            }
            all.1 += n;
            all.2 += sk;
            row(b.label(), *s, *n, *sk)
        })
        .collect();
    rows.push(row(ALL_BIN_LABEL, all.0, all.1, all.2));
    Ok(rows)
}
