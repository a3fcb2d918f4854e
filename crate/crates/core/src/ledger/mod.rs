//! Bill and agent records, the region taxonomy, and dataset-level
//! operations: parsing, validation, summaries and synthetic generation.

mod io;
mod summary;
mod synth;
mod validate;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use io::{
    parse_ledger, read_ledger, read_taxonomy, write_agents_csv, write_bills_csv, write_ledger,
    AGENTS_HEADER, BILLS_HEADER,
};
pub use summary::{summarize, RegionShare, SummaryStats};
pub use synth::{synthesize, DrawerBins, SynthConfig};
pub use validate::{validate_dataset, Rule, RuleSet, ValidationReport, Violation};

macro_rules! id_newtype {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(Arc<str>);

        impl $name {
            pub fn new(s: impl AsRef<str>) -> Self {
                Self(Arc::from(s.as_ref()))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{:?}", &*self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                Self::new(s)
            }
        }
    };
}

id_newtype!(
    /// Opaque agent identifier (a transcription-normalized name key).
    AgentId
);
id_newtype!(
    /// Opaque bill identifier.
    BillId
);
id_newtype!(
    /// Region code from a [`RegionTaxonomy`].
    RegionCode
);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    MerchantBank,
    ClearingBank,
    AngloForeignBank,
    ForeignBank,
    DiscountHouse,
    NonFinancial,
    Unknown,
}

impl Category {
    pub const ALL: [Category; 7] = [
        Category::MerchantBank,
        Category::ClearingBank,
        Category::AngloForeignBank,
        Category::ForeignBank,
        Category::DiscountHouse,
        Category::NonFinancial,
        Category::Unknown,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::MerchantBank => "merchant_bank",
            Category::ClearingBank => "clearing_bank",
            Category::AngloForeignBank => "anglo_foreign_bank",
            Category::ForeignBank => "foreign_bank",
            Category::DiscountHouse => "discount_house",
            Category::NonFinancial => "non_financial",
            Category::Unknown => "unknown",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Category::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown category {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentRecord {
    pub agent_id: AgentId,
    pub name: String,
    pub category: Category,
    pub city: Option<String>,
    pub region: RegionCode,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BillRecord {
    pub bill_id: BillId,
    pub date: NaiveDate,
    pub amount_pence: u64,
    pub maturity_days: u32,
    pub discount_rate_bp: u32,
    pub drawer_id: AgentId,
    pub acceptor_id: AgentId,
    pub discounter_id: AgentId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub code: RegionCode,
    pub name: String,
}

/// Ordered region codes plus the code used for unlocated agents.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawTaxonomy", into = "RawTaxonomy")]
pub struct RegionTaxonomy {
    regions: Vec<Region>,
    unknown: RegionCode,
}

#[derive(Serialize, Deserialize)]
struct RawTaxonomy {
    regions: Vec<Region>,
    unknown: RegionCode,
}

impl TryFrom<RawTaxonomy> for RegionTaxonomy {
    type Error = Error;

    fn try_from(raw: RawTaxonomy) -> Result<Self> {
        RegionTaxonomy::new(raw.regions, raw.unknown)
    }
}

impl From<RegionTaxonomy> for RawTaxonomy {
    fn from(t: RegionTaxonomy) -> Self {
        RawTaxonomy {
            regions: t.regions,
            unknown: t.unknown,
        }
    }
}

impl RegionTaxonomy {
    pub fn new(regions: Vec<Region>, unknown: RegionCode) -> Result<Self> {
        let mut seen = HashSet::new();
        for r in &regions {
            if !seen.insert(&r.code) {
                return Err(Error::Taxonomy(format!("duplicate region code {}", r.code)));
            }
        }
        if !seen.contains(&unknown) {
            return Err(Error::Taxonomy(format!(
                "unknown code {unknown} is not one of the region codes"
            )));
        }
        Ok(Self { regions, unknown })
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    pub fn codes(&self) -> impl Iterator<Item = &RegionCode> {
        self.regions.iter().map(|r| &r.code)
    }

    pub fn len(&self) -> usize {
        self.regions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }

    pub fn unknown(&self) -> &RegionCode {
        &self.unknown
    }

    pub fn contains(&self, code: &RegionCode) -> bool {
        self.regions.iter().any(|r| &r.code == code)
    }

    pub fn position(&self, code: &RegionCode) -> Option<usize> {
        self.regions.iter().position(|r| &r.code == code)
    }

    /// Bucket index for `code`; codes outside the taxonomy fall into the
    /// unknown bucket.
    pub fn bucket(&self, code: Option<&RegionCode>) -> usize {
        code.and_then(|c| self.position(c))
            .or_else(|| self.position(&self.unknown))
            .expect("unknown code is part of the taxonomy")
    }

    /// The code for UK-based agents in the default taxonomy.
    pub const UK: &'static str = "uk";
}

impl Default for RegionTaxonomy {
    /// Eight named regions plus `unknown`.
    fn default() -> Self {
        let regions = [
            ("uk", "United Kingdom"),
            ("continental_europe", "Continental Europe"),
            ("usa_canada", "USA and Canada"),
            ("latin_america", "Latin America"),
            ("india_far_east", "India and the Far East"),
            ("africa", "Africa"),
            ("oceania", "Oceania"),
            ("rest_of_world", "Rest of the world"),
            ("unknown", "Unknown"),
        ]
        .into_iter()
        .map(|(code, name)| Region {
            code: RegionCode::new(code),
            name: name.to_string(),
        })
        .collect();
        Self::new(regions, RegionCode::new("unknown")).expect("default taxonomy is valid")
    }
}

/// Agents, bills and taxonomy with referential integrity checked on
/// construction.
#[derive(Debug, Clone)]
pub struct LedgerDataset {
    agents: Vec<AgentRecord>,
    bills: Vec<BillRecord>,
    taxonomy: RegionTaxonomy,
    provenance: String,
    index: HashMap<AgentId, usize>,
}

impl PartialEq for LedgerDataset {
    /// Provenance is metadata and does not take part in equality.
    fn eq(&self, other: &Self) -> bool {
        self.agents == other.agents && self.bills == other.bills && self.taxonomy == other.taxonomy
    }
}

impl LedgerDataset {
    /// Builds a dataset, checking ids, regions and bill references. Errors
    /// report `row + 2` as the line, i.e. the line of a header-first CSV.
    pub fn new(
        agents: Vec<AgentRecord>,
        bills: Vec<BillRecord>,
        taxonomy: RegionTaxonomy,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        let agent_lines: Vec<u64> = (0..agents.len() as u64).map(|i| i + 2).collect();
        let bill_lines: Vec<u64> = (0..bills.len() as u64).map(|i| i + 2).collect();
        Self::checked(
            agents,
            &agent_lines,
            bills,
            &bill_lines,
            taxonomy,
            provenance.into(),
        )
    }

    pub(crate) fn checked(
        agents: Vec<AgentRecord>,
        agent_lines: &[u64],
        bills: Vec<BillRecord>,
        bill_lines: &[u64],
        taxonomy: RegionTaxonomy,
        provenance: String,
    ) -> Result<Self> {
        let mut index = HashMap::with_capacity(agents.len());
        for (i, a) in agents.iter().enumerate() {
            if index.insert(a.agent_id.clone(), i).is_some() {
                return Err(Error::DuplicateId {
                    file: "agents".into(),
                    line: agent_lines[i],
                    kind: "agent",
                    id: a.agent_id.to_string(),
                });
            }
            if !taxonomy.contains(&a.region) {
                return Err(Error::UnknownRegion {
                    line: agent_lines[i],
                    agent_id: a.agent_id.to_string(),
                    code: a.region.to_string(),
                });
            }
        }
        let mut bill_ids = HashSet::with_capacity(bills.len());
        for (i, b) in bills.iter().enumerate() {
            if !bill_ids.insert(&b.bill_id) {
                return Err(Error::DuplicateId {
                    file: "bills".into(),
                    line: bill_lines[i],
                    kind: "bill",
                    id: b.bill_id.to_string(),
                });
            }
            for (field, id) in [
                ("drawer_id", &b.drawer_id),
                ("acceptor_id", &b.acceptor_id),
                ("discounter_id", &b.discounter_id),
            ] {
                if !index.contains_key(id) {
                    return Err(Error::DanglingReference {
                        line: bill_lines[i],
                        bill_id: b.bill_id.to_string(),
                        field,
                        agent_id: id.to_string(),
                    });
                }
            }
        }
        Ok(Self {
            agents,
            bills,
            taxonomy,
            provenance,
            index,
        })
    }

    pub fn agents(&self) -> &[AgentRecord] {
        &self.agents
    }

    pub fn bills(&self) -> &[BillRecord] {
        &self.bills
    }

    pub fn taxonomy(&self) -> &RegionTaxonomy {
        &self.taxonomy
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn agent(&self, id: &AgentId) -> Option<&AgentRecord> {
        self.index.get(id).map(|&i| &self.agents[i])
    }

    pub fn is_empty(&self) -> bool {
        self.bills.is_empty()
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn default_taxonomy_has_nine_codes() {
        let t = RegionTaxonomy::default();
        assert_eq!(t.len(), 9);
        assert_eq!(t.unknown().as_str(), "unknown");
        assert_eq!(t.bucket(Some(&RegionCode::new("mars"))), 8);
    }

    #[test]
    fn taxonomy_rejects_duplicates_and_missing_unknown() {
        let r = |c: &str| Region {
            code: RegionCode::new(c),
            name: c.into(),
        };
        assert!(RegionTaxonomy::new(vec![r("a"), r("a")], RegionCode::new("a")).is_err());
        assert!(RegionTaxonomy::new(vec![r("a")], RegionCode::new("b")).is_err());
    }

    #[test]
    fn dangling_reference_names_the_row() {
        let agents = vec![
            agent("P", Category::NonFinancial, "uk"),
            agent("R", Category::DiscountHouse, "uk"),
        ];
        let bills = vec![bill("B1", "P", "Q", "R")];
        let err = LedgerDataset::new(agents, bills, RegionTaxonomy::default(), "t").unwrap_err();
        match err {
            Error::DanglingReference {
                line,
                bill_id,
                field,
                ..
            } => {
                assert_eq!((line, bill_id.as_str(), field), (2, "B1", "acceptor_id"));
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn duplicate_ids_rejected() {
        let agents = vec![
            agent("P", Category::NonFinancial, "uk"),
            agent("P", Category::NonFinancial, "uk"),
        ];
        assert!(matches!(
            LedgerDataset::new(agents, vec![], RegionTaxonomy::default(), "t"),
            Err(Error::DuplicateId {
                kind: "agent",
                line: 3,
                ..
            })
        ));
        let d = dataset(&[("P", "Q", "R")]);
        let mut bills = d.bills().to_vec();
        bills.push(bills[0].clone());
        assert!(matches!(
            LedgerDataset::new(d.agents().to_vec(), bills, RegionTaxonomy::default(), "t"),
            Err(Error::DuplicateId { kind: "bill", .. })
        ));
    }

    #[test]
    fn unknown_region_rejected() {
        let agents = vec![agent("P", Category::NonFinancial, "atlantis")];
        assert!(matches!(
            LedgerDataset::new(agents, vec![], RegionTaxonomy::default(), "t"),
            Err(Error::UnknownRegion { .. })
        ));
    }

    #[test]
    fn category_round_trips_through_str() {
        for c in Category::ALL {
            assert_eq!(c.as_str().parse::<Category>().unwrap(), c);
        }
        assert!("bank".parse::<Category>().is_err());
    }
}
