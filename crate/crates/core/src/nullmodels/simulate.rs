use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::table::TransactionTable;
use crate::ledger::AgentId;
use crate::network::Transaction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Variant {
    #[serde(rename = "uniform")]
    Uniform,
    #[serde(rename = "degree")]
    DegreePreserving,
}

impl Variant {
    pub const ALL: [Variant; 2] = [Variant::Uniform, Variant::DegreePreserving];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Uniform => "uniform",
            Variant::DegreePreserving => "degree",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform" => Ok(Variant::Uniform),
            "degree" => Ok(Variant::DegreePreserving),
            _ => Err(format!(
                "unknown variant {s:?} (expected uniform or degree)"
            )),
        }
    }
}

pub fn simulate(t: &TransactionTable, variant: Variant, seed: u64) -> TransactionTable {
    match variant {
        Variant::Uniform => simulate_uniform(t, seed),
        Variant::DegreePreserving => simulate_degree_preserving(t, seed),
    }
}

fn rebuild(
    t: &TransactionTable,
    acceptors: Vec<AgentId>,
    discounters: Vec<AgentId>,
) -> TransactionTable {
    let rows = t
        .rows()
        .iter()
        .zip(acceptors)
        .zip(discounters)
        .map(|((r, a), k)| Transaction {
            bill_id: r.bill_id.clone(),
            drawer: r.drawer.clone(),
            acceptor: a,
            discounter: k,
        })
        .collect();
    t.with_rows(rows)
}

fn built_column(universe: &[AgentId], len: usize, rng: &mut ChaCha8Rng) -> Vec<AgentId> {
    let copies = len.div_ceil(universe.len());
    let mut col: Vec<AgentId> = universe
        .iter()
        .flat_map(|a| std::iter::repeat_n(a, copies))
        .cloned()
        .collect();
    col.shuffle(rng);
    col.truncate(len);
    col
}

/// Uniform column building. Acceptor column first, then discounters, from
/// one ChaCha8 stream seeded with `seed`.
pub fn simulate_uniform(t: &TransactionTable, seed: u64) -> TransactionTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = built_column(t.acceptor_universe(), t.len(), &mut rng);
    let k = built_column(t.discounter_universe(), t.len(), &mut rng);
    rebuild(t, a, k)
}

/// Independent uniform permutations of the observed acceptor and
/// discounter columns.
pub fn simulate_degree_preserving(t: &TransactionTable, seed: u64) -> TransactionTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a: Vec<AgentId> = t.rows().iter().map(|r| r.acceptor.clone()).collect();
    let mut k: Vec<AgentId> = t.rows().iter().map(|r| r.discounter.clone()).collect();
    a.shuffle(&mut rng);
    k.shuffle(&mut rng);
    rebuild(t, a, k)
}
