use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{LedgerDataset, RegionCode, RegionTaxonomy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// Every acceptor must be located in the home (London) region.
    LondonAcceptor,
    PositiveMaturity,
    PositiveAmount,
    /// Drawer, acceptor and discounter of a bill are three distinct agents.
    DistinctParties,
}

impl Rule {
    pub const ALL: [Rule; 4] = [
        Rule::LondonAcceptor,
        Rule::PositiveMaturity,
        Rule::PositiveAmount,
        Rule::DistinctParties,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::LondonAcceptor => "london-acceptor",
            Rule::PositiveMaturity => "positive-maturity",
            Rule::PositiveAmount => "positive-amount",
            Rule::DistinctParties => "distinct-parties",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Rule::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| format!("unknown rule {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleSet {
    pub enabled: BTreeSet<Rule>,
    pub home_region: RegionCode,
}

impl RuleSet {
    pub fn none() -> Self {
        Self {
            enabled: BTreeSet::new(),
            home_region: RegionCode::new(RegionTaxonomy::UK),
        }
    }

    pub fn with(mut self, rule: Rule) -> Self {
        self.enabled.insert(rule);
        self
    }

    /// Parses a comma-separated rule list such as `london-acceptor,positive-maturity`.
    pub fn parse_list(list: &str) -> Result<Self, String> {
        let mut set = Self::none();
        for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            set.enabled.insert(name.parse()?);
        }
        Ok(set)
    }
}

impl Default for RuleSet {
    fn default() -> Self {
        Self::none().with(Rule::PositiveMaturity)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rule: Rule,
    pub subject_id: String,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_dataset(d: &LedgerDataset, rules: &RuleSet) -> ValidationReport {
    let mut violations = Vec::new();
    let on = |r| rules.enabled.contains(&r);

    if on(Rule::LondonAcceptor) {
        let mut seen = HashSet::new();
        for b in d.bills() {
            if !seen.insert(&b.acceptor_id) {
                continue;
            }
            let a = d.agent(&b.acceptor_id).expect("checked dataset");
            if a.region != rules.home_region {
                violations.push(Violation {
                    rule: Rule::LondonAcceptor,
                    subject_id: a.agent_id.to_string(),
                    message: format!("acceptor located in region {}", a.region),
                });
            }
        }
    }
    for b in d.bills() {
        if on(Rule::PositiveMaturity) && b.maturity_days == 0 {
            violations.push(Violation {
                rule: Rule::PositiveMaturity,
                subject_id: b.bill_id.to_string(),
                message: "maturity_days is 0".into(),
            });
        }
        if on(Rule::PositiveAmount) && b.amount_pence == 0 {
            violations.push(Violation {
                rule: Rule::PositiveAmount,
                subject_id: b.bill_id.to_string(),
                message: "amount_pence is 0".into(),
            });
        }
        if on(Rule::DistinctParties)
            && (b.drawer_id == b.acceptor_id
                || b.acceptor_id == b.discounter_id
                || b.drawer_id == b.discounter_id)
        {
            violations.push(Violation {
                rule: Rule::DistinctParties,
                subject_id: b.bill_id.to_string(),
                message: "an agent holds two roles on the same bill".into(),
            });
        }
    }
    ValidationReport { violations }
}
