use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::ledger::AgentId;
use crate::network::{Role, Transaction, TriadNetwork};

/// Which actors the uniform model may draw from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Universe {
    /// Every acceptor/discounter of the source network.
    #[default]
    Network,
    /// Only actors appearing in the table's rows.
    Table,
}

/// Aligned drawer/acceptor/discounter columns. Tables from [`make_table`]
/// hold one row per bill of a multi-transaction drawer, in bill-id order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransactionTable {
    rows: Vec<Transaction>,
    acceptors: Vec<AgentId>,
    discounters: Vec<AgentId>,
}

impl TransactionTable {
    /// Checks that every row's actors belong to the universes. Universes are
    /// sorted and deduplicated. Single-row drawers are allowed here so that
    /// hand-built tables can be simulated; [`make_table`] never yields them.
    pub fn new(
        rows: Vec<Transaction>,
        acceptors: Vec<AgentId>,
        discounters: Vec<AgentId>,
    ) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::NoMultiTransactionDrawers);
        }
        let acceptors: Vec<AgentId> = acceptors
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let discounters: Vec<AgentId> = discounters
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        for r in &rows {
            if acceptors.binary_search(&r.acceptor).is_err() {
                return Err(Error::InvalidArgument(format!(
                    "acceptor {} outside universe",
                    r.acceptor
                )));
            }
            if discounters.binary_search(&r.discounter).is_err() {
                return Err(Error::InvalidArgument(format!(
                    "discounter {} outside universe",
                    r.discounter
                )));
            }
        }
        Ok(Self {
            rows,
            acceptors,
            discounters,
        })
    }

    pub(crate) fn with_rows(&self, rows: Vec<Transaction>) -> Self {
        Self {
            rows,
            acceptors: self.acceptors.clone(),
            discounters: self.discounters.clone(),
        }
    }

    pub fn rows(&self) -> &[Transaction] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn acceptor_universe(&self) -> &[AgentId] {
        &self.acceptors
    }

    pub fn discounter_universe(&self) -> &[AgentId] {
        &self.discounters
    }

    fn counts(&self, pick: impl Fn(&Transaction) -> &AgentId) -> BTreeMap<AgentId, usize> {
        let mut m = BTreeMap::new();
        for r in &self.rows {
            *m.entry(pick(r).clone()).or_default() += 1;
        }
        m
    }

    pub fn drawer_counts(&self) -> BTreeMap<AgentId, usize> {
        self.counts(|r| &r.drawer)
    }

    pub fn acceptor_counts(&self) -> BTreeMap<AgentId, usize> {
        self.counts(|r| &r.acceptor)
    }

    pub fn discounter_counts(&self) -> BTreeMap<AgentId, usize> {
        self.counts(|r| &r.discounter)
    }

    pub fn drawer_column(&self) -> impl Iterator<Item = &AgentId> {
        self.rows.iter().map(|r| &r.drawer)
    }

    /// SHA-256 over the rows, hex encoded.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        for r in &self.rows {
            for f in [
                r.bill_id.as_str(),
                r.drawer.as_str(),
                r.acceptor.as_str(),
                r.discounter.as_str(),
            ] {
                h.update(f.as_bytes());
                h.update([0x1f]);
            }
            h.update([0x1e]);
        }
        hex::encode(h.finalize())
    }

    pub fn to_network(&self) -> Result<TriadNetwork> {
        TriadNetwork::from_transactions(&self.rows, |_| None)
    }
}

pub fn make_table(n: &TriadNetwork) -> Result<TransactionTable> {
    make_table_with(n, Universe::Network)
}

/// Rows are the bills of multi-transaction drawers, sorted by bill id.
pub fn make_table_with(n: &TriadNetwork, universe: Universe) -> Result<TransactionTable> {
    let counts = n.drawer_bill_counts();
    let mut rows: Vec<Transaction> = n
        .triples()
        .iter()
        .zip(n.bill_ids())
        .filter(|(t, _)| counts[t.drawer] >= 2)
        .map(|(t, b)| Transaction {
            bill_id: b.clone(),
            drawer: n.ids()[t.drawer].clone(),
            acceptor: n.ids()[t.acceptor].clone(),
            discounter: n.ids()[t.discounter].clone(),
        })
        .collect();
    if rows.is_empty() {
        return Err(Error::NoMultiTransactionDrawers);
    }
    rows.sort_by(|a, b| a.bill_id.cmp(&b.bill_id));
    let (acceptors, discounters) = match universe {
        Universe::Network => {
            let ids = |r| {
                n.nodes_with(r)
                    .into_iter()
                    .map(|v| n.ids()[v].clone())
                    .collect::<Vec<_>>()
            };
            (ids(Role::Acceptor), ids(Role::Discounter))
        }
        Universe::Table => (
            rows.iter().map(|r| r.acceptor.clone()).collect(),
            rows.iter().map(|r| r.discounter.clone()).collect(),
        ),
    };
    TransactionTable::new(rows, acceptors, discounters)
}
