use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use chrono::NaiveDate;

use super::{
    AgentId, AgentRecord, BillId, BillRecord, Category, LedgerDataset, RegionCode, RegionTaxonomy,
};
use crate::error::{Error, Result};

pub const AGENTS_HEADER: [&str; 5] = ["agent_id", "name", "category", "city", "region"];
pub const BILLS_HEADER: [&str; 8] = [
    "bill_id",
    "date",
    "amount_pence",
    "maturity_days",
    "discount_rate_bp",
    "drawer_id",
    "acceptor_id",
    "discounter_id",
];

const DATE_FORMAT: &str = "%Y-%m-%d";

fn reader<R: Read>(r: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(r)
}

fn csv_error(file: &str, e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    Error::Parse {
        file: file.to_string(),
        line,
        message: e.to_string(),
    }
}

fn check_header<R: Read>(file: &str, rdr: &mut csv::Reader<R>, expected: &[&str]) -> Result<()> {
    let found: Vec<String> = rdr
        .headers()
        .map_err(|e| csv_error(file, e))?
        .iter()
        .map(str::to_string)
        .collect();
    if found != expected {
        return Err(Error::Header {
            file: file.to_string(),
            found,
            expected: expected.iter().map(|s| s.to_string()).collect(),
        });
    }
    Ok(())
}

fn parse_field<T: std::str::FromStr>(file: &str, line: u64, name: &str, raw: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    raw.parse::<T>().map_err(|e| Error::Parse {
        file: file.to_string(),
        line,
        message: format!("{name}: {e} ({raw:?})"),
    })
}

fn non_empty(file: &str, line: u64, name: &str, raw: &str) -> Result<()> {
    if raw.is_empty() {
        return Err(Error::Parse {
            file: file.to_string(),
            line,
            message: format!("{name} is empty"),
        });
    }
    Ok(())
}

/// Parses `agents.csv` and `bills.csv` streams into a checked dataset.
/// Row order of both files is preserved.
pub fn parse_ledger<A: Read, B: Read>(
    agents: A,
    bills: B,
    taxonomy: RegionTaxonomy,
) -> Result<LedgerDataset> {
    parse_with_provenance(agents, bills, taxonomy, "stream".to_string())
}

fn parse_with_provenance<A: Read, B: Read>(
    agents: A,
    bills: B,
    taxonomy: RegionTaxonomy,
    provenance: String,
) -> Result<LedgerDataset> {
    let mut agent_rows = Vec::new();
    let mut agent_lines = Vec::new();
    let mut rdr = reader(agents);
    check_header("agents", &mut rdr, &AGENTS_HEADER)?;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_error("agents", e))?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        non_empty("agents", line, "agent_id", &rec[0])?;
        non_empty("agents", line, "region", &rec[4])?;
        let category: Category = parse_field("agents", line, "category", &rec[2])?;
        agent_rows.push(AgentRecord {
            agent_id: AgentId::new(&rec[0]),
            name: rec[1].to_string(),
            category,
            city: (!rec[3].is_empty()).then(|| rec[3].to_string()),
            region: RegionCode::new(&rec[4]),
        });
        agent_lines.push(line);
    }

    let mut bill_rows = Vec::new();
    let mut bill_lines = Vec::new();
    let mut rdr = reader(bills);
    check_header("bills", &mut rdr, &BILLS_HEADER)?;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_error("bills", e))?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        for (i, name) in [
            (0, "bill_id"),
            (5, "drawer_id"),
            (6, "acceptor_id"),
            (7, "discounter_id"),
        ] {
            non_empty("bills", line, name, &rec[i])?;
        }
        let date = NaiveDate::parse_from_str(&rec[1], DATE_FORMAT).map_err(|e| Error::Parse {
            file: "bills".into(),
            line,
            message: format!("date: {e} ({:?})", &rec[1]),
        })?;
        bill_rows.push(BillRecord {
            bill_id: BillId::new(&rec[0]),
            date,
            amount_pence: parse_field("bills", line, "amount_pence", &rec[2])?,
            maturity_days: parse_field("bills", line, "maturity_days", &rec[3])?,
            discount_rate_bp: parse_field("bills", line, "discount_rate_bp", &rec[4])?,
            drawer_id: AgentId::new(&rec[5]),
            acceptor_id: AgentId::new(&rec[6]),
            discounter_id: AgentId::new(&rec[7]),
        });
        bill_lines.push(line);
    }

    LedgerDataset::checked(
        agent_rows,
        &agent_lines,
        bill_rows,
        &bill_lines,
        taxonomy,
        provenance,
    )
}

/// Reads a dataset from disk. Without a taxonomy path the default
/// nine-region taxonomy is used.
pub fn read_ledger(agents: &Path, bills: &Path, taxonomy: Option<&Path>) -> Result<LedgerDataset> {
    let taxonomy = match taxonomy {
        Some(p) => read_taxonomy(p)?,
        None => RegionTaxonomy::default(),
    };
    parse_with_provenance(
        BufReader::new(File::open(agents)?),
        BufReader::new(File::open(bills)?),
        taxonomy,
        format!("{} + {}", agents.display(), bills.display()),
    )
}

pub fn read_taxonomy(path: &Path) -> Result<RegionTaxonomy> {
    let raw = fs::read(path)?;
    Ok(serde_json::from_slice(&raw)?)
}

pub fn write_agents_csv<W: Write>(w: W, d: &LedgerDataset) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    let io = |e: csv::Error| Error::Io(e.into());
    wtr.write_record(AGENTS_HEADER).map_err(io)?;
    for a in d.agents() {
        wtr.write_record([
            a.agent_id.as_str(),
            &a.name,
            a.category.as_str(),
            a.city.as_deref().unwrap_or(""),
            a.region.as_str(),
        ])
        .map_err(io)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn write_bills_csv<W: Write>(w: W, d: &LedgerDataset) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    let io = |e: csv::Error| Error::Io(e.into());
    wtr.write_record(BILLS_HEADER).map_err(io)?;
    for b in d.bills() {
        wtr.write_record([
            b.bill_id.as_str(),
            &b.date.format(DATE_FORMAT).to_string(),
            &b.amount_pence.to_string(),
            &b.maturity_days.to_string(),
            &b.discount_rate_bp.to_string(),
            b.drawer_id.as_str(),
            b.acceptor_id.as_str(),
            b.discounter_id.as_str(),
        ])
        .map_err(io)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Writes `agents.csv`, `bills.csv` and `taxonomy.json` into `dir`.
pub fn write_ledger(dir: &Path, d: &LedgerDataset) -> Result<()> {
    fs::create_dir_all(dir)?;
    write_agents_csv(BufWriter::new(File::create(dir.join("agents.csv"))?), d)?;
    write_bills_csv(BufWriter::new(File::create(dir.join("bills.csv"))?), d)?;
    let mut tax = serde_json::to_string_pretty(d.taxonomy())?;
    tax.push('\n');
    fs::write(dir.join("taxonomy.json"), tax)?;
    Ok(())
}
