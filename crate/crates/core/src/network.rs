//! The compound-relation network: each bill contributes one
//! drawer→acceptor (DA) and one acceptor→discounter (AD) link occurrence.
//! The indirect drawer–discounter relation is not stored as an edge; it is
//! recovered through the bill table when needed.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::ledger::{AgentId, BillId, LedgerDataset, RegionCode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum EdgeKind {
    #[serde(rename = "DA")]
    DrawerAcceptor,
    #[serde(rename = "AD")]
    AcceptorDiscounter,
}

impl EdgeKind {
    pub fn code(self) -> &'static str {
        match self {
            EdgeKind::DrawerAcceptor => "DA",
            EdgeKind::AcceptorDiscounter => "AD",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Drawer,
    Acceptor,
    Discounter,
}

impl Role {
    pub fn name(self) -> &'static str {
        match self {
            Role::Drawer => "drawer",
            Role::Acceptor => "acceptor",
            Role::Discounter => "discounter",
        }
    }

    fn bit(self) -> u8 {
        1 << self as u8
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Role flags of a node.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Roles(u8);

impl Roles {
    pub fn has(self, r: Role) -> bool {
        self.0 & r.bit() != 0
    }

    pub fn count(self) -> u32 {
        self.0.count_ones()
    }

    fn insert(&mut self, r: Role) {
        self.0 |= r.bit();
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    In,
    Out,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weighting {
    /// Distinct partners.
    Binary,
    /// Bill occurrences.
    Transaction,
}

/// A directed link with its multiplicity and the bills realizing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Link {
    pub kind: EdgeKind,
    pub src: usize,
    pub dst: usize,
    pub weight: u64,
    pub bills: Vec<BillId>,
}

/// One bill reduced to its three parties.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transaction {
    pub bill_id: BillId,
    pub drawer: AgentId,
    pub acceptor: AgentId,
    pub discounter: AgentId,
}

/// Bill row with parties as node indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BillTriple {
    pub drawer: usize,
    pub acceptor: usize,
    pub discounter: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Demography {
    pub total_nodes: usize,
    pub drawers: usize,
    pub acceptors: usize,
    pub discounters: usize,
    /// Nodes holding two or more roles.
    pub multi_role: usize,
}

#[derive(Debug, Clone)]
pub struct TriadNetwork {
    ids: Vec<AgentId>,
    roles: Vec<Roles>,
    regions: Vec<Option<RegionCode>>,
    links: Vec<Link>,
    out_links: Vec<Vec<usize>>,
    in_links: Vec<Vec<usize>>,
    bill_ids: Vec<BillId>,
    triples: Vec<BillTriple>,
    projection: SimpleGraph,
}

pub fn build_network(d: &LedgerDataset) -> Result<TriadNetwork> {
    let txs: Vec<Transaction> = d
        .bills()
        .iter()
        .map(|b| Transaction {
            bill_id: b.bill_id.clone(),
            drawer: b.drawer_id.clone(),
            acceptor: b.acceptor_id.clone(),
            discounter: b.discounter_id.clone(),
        })
        .collect();
    TriadNetwork::from_transactions(&txs, |id| d.agent(id).map(|a| a.region.clone()))
}

impl TriadNetwork {
    /// Builds the network over the agents named on `txs`. Nodes are
    /// ordered by agent id.
    pub fn from_transactions<F>(txs: &[Transaction], region_of: F) -> Result<Self>
    where
        F: Fn(&AgentId) -> Option<RegionCode>,
    {
        if txs.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let ids: Vec<AgentId> = txs
            .iter()
            .flat_map(|t| [&t.drawer, &t.acceptor, &t.discounter])
            .collect::<BTreeSet<_>>()
            .into_iter()
            .cloned()
            .collect();
        let index: HashMap<&AgentId, usize> =
            ids.iter().enumerate().map(|(i, id)| (id, i)).collect();
        let n = ids.len();

        let mut roles = vec![Roles::default(); n];
        let mut link_map: BTreeMap<(EdgeKind, usize, usize), (u64, Vec<BillId>)> = BTreeMap::new();
        let mut triples = Vec::with_capacity(txs.len());
        for t in txs {
            let (d, a, k) = (index[&t.drawer], index[&t.acceptor], index[&t.discounter]);
            roles[d].insert(Role::Drawer);
            roles[a].insert(Role::Acceptor);
            roles[k].insert(Role::Discounter);
            for key in [
                (EdgeKind::DrawerAcceptor, d, a),
                (EdgeKind::AcceptorDiscounter, a, k),
            ] {
                let e = link_map.entry(key).or_default();
                e.0 += 1;
                e.1.push(t.bill_id.clone());
            }
            triples.push(BillTriple {
                drawer: d,
                acceptor: a,
                discounter: k,
            });
        }

        let links: Vec<Link> = link_map
            .into_iter()
            .map(|((kind, src, dst), (weight, bills))| Link {
                kind,
                src,
                dst,
                weight,
                bills,
            })
            .collect();
        let mut out_links = vec![Vec::new(); n];
        let mut in_links = vec![Vec::new(); n];
        for (i, l) in links.iter().enumerate() {
            out_links[l.src].push(i);
            in_links[l.dst].push(i);
        }
        let projection = SimpleGraph::from_edges(ids.clone(), links.iter().map(|l| (l.src, l.dst)));
        let regions = ids.iter().map(&region_of).collect();

        Ok(Self {
            ids,
            roles,
            regions,
            links,
            out_links,
            in_links,
            bill_ids: txs.iter().map(|t| t.bill_id.clone()).collect(),
            triples,
            projection,
        })
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn ids(&self) -> &[AgentId] {
        &self.ids
    }

    pub fn index_of(&self, id: &AgentId) -> Option<usize> {
        self.ids.binary_search(id).ok()
    }

    pub fn roles(&self, node: usize) -> Roles {
        self.roles[node]
    }

    pub fn region(&self, node: usize) -> Option<&RegionCode> {
        self.regions[node].as_ref()
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn bill_count(&self) -> usize {
        self.triples.len()
    }

    /// Bills in input order, parties as node indices.
    pub fn triples(&self) -> &[BillTriple] {
        &self.triples
    }

    pub fn bill_ids(&self) -> &[BillId] {
        &self.bill_ids
    }

    /// Nodes holding `role`, in id order.
    pub fn nodes_with(&self, role: Role) -> Vec<usize> {
        (0..self.node_count())
            .filter(|&v| self.roles[v].has(role))
            .collect()
    }

    pub fn demography(&self) -> Demography {
        let count = |r| self.roles.iter().filter(|x| x.has(r)).count();
        Demography {
            total_nodes: self.node_count(),
            drawers: count(Role::Drawer),
            acceptors: count(Role::Acceptor),
            discounters: count(Role::Discounter),
            multi_role: self.roles.iter().filter(|r| r.count() >= 2).count(),
        }
    }

    pub fn degree(&self, node: &AgentId, dir: Direction, w: Weighting) -> Result<u64> {
        let v = self
            .index_of(node)
            .ok_or_else(|| Error::UnknownNode(node.to_string()))?;
        Ok(self.degree_at(v, dir, w, None))
    }

    /// Degree restricted to links of one kind.
    pub fn kind_degree(
        &self,
        node: &AgentId,
        kind: EdgeKind,
        dir: Direction,
        w: Weighting,
    ) -> Result<u64> {
        let v = self
            .index_of(node)
            .ok_or_else(|| Error::UnknownNode(node.to_string()))?;
        Ok(self.degree_at(v, dir, w, Some(kind)))
    }

    pub fn degree_at(&self, v: usize, dir: Direction, w: Weighting, kind: Option<EdgeKind>) -> u64 {
        let sum = |list: &[usize]| -> u64 {
            list.iter()
                .map(|&i| &self.links[i])
                .filter(|l| kind.is_none_or(|k| l.kind == k))
                .map(|l| match w {
                    Weighting::Binary => 1,
                    Weighting::Transaction => l.weight,
                })
                .sum()
        };
        match dir {
            Direction::In => sum(&self.in_links[v]),
            Direction::Out => sum(&self.out_links[v]),
            Direction::All => sum(&self.in_links[v]) + sum(&self.out_links[v]),
        }
    }

    /// Number of bills on which each node is the drawer.
    pub fn drawer_bill_counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.node_count()];
        for t in &self.triples {
            c[t.drawer] += 1;
        }
        c
    }

    /// Drawers named on at least two bills, in id order.
    pub fn multi_transaction_drawers(&self) -> Vec<AgentId> {
        self.multi_transaction_drawer_nodes()
            .into_iter()
            .map(|v| self.ids[v].clone())
            .collect()
    }

    pub fn multi_transaction_drawer_nodes(&self) -> Vec<usize> {
        self.drawer_bill_counts()
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c >= 2)
            .map(|(v, _)| v)
            .collect()
    }

    /// For every actor of `role` (acceptor or discounter), the sorted set
    /// of distinct drawers it is linked to. Discounters reach drawers
    /// through any acceptor.
    pub fn drawer_portfolios(&self, role: Role) -> BTreeMap<usize, Vec<usize>> {
        let mut map: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for t in &self.triples {
            let actor = match role {
                Role::Acceptor => t.acceptor,
                Role::Discounter => t.discounter,
                Role::Drawer => t.drawer,
            };
            map.entry(actor).or_default().insert(t.drawer);
        }
        map.into_iter()
            .map(|(k, v)| (k, v.into_iter().collect()))
            .collect()
    }

    /// Cached undirected simple projection.
    pub fn undirected_projection(&self) -> &SimpleGraph {
        &self.projection
    }

    /// Writes `kind,src_id,dst_id,weight` rows.
    pub fn write_edge_list<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::Io(e.into());
        wtr.write_record(["kind", "src_id", "dst_id", "weight"])
            .map_err(io)?;
        for l in &self.links {
            wtr.write_record([
                l.kind.code(),
                self.ids[l.src].as_str(),
                self.ids[l.dst].as_str(),
                &l.weight.to_string(),
            ])
            .map_err(io)?;
        }
        wtr.flush()?;
        Ok(())
    }
}
