//! Command-line front end: ingest, synthesize, analyze and compare bill
//! ledgers against the two column-building null models.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use billnet::ledger::{
    read_ledger, summarize, synthesize, validate_dataset, write_ledger, LedgerDataset, RuleSet,
    SynthConfig,
};
use billnet::network::build_network;
use billnet::nullmodels::{make_table_with, MetricSet, Universe, Variant, DEFAULT_REPLICATES};
use billnet::report::{
    run_pipeline, run_variants, table4_block, write_ensembles, write_ks_summary, write_outputs,
    write_table4_csv, KsEntry, ReportConfig, KS_SUMMARY_FILE, TABLE4_FILE,
};
use billnet::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_VALIDATION: u8 = 3;
const EXIT_COMPUTATION: u8 = 4;

#[derive(Parser)]
#[command(name = "billnet")]
#[command(about = "Network analysis of bill-of-exchange ledgers")]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a dataset, printing summary JSON
    Ingest {
        #[command(flatten)]
        input: Input,
        /// Comma-separated validation rules (default: positive-maturity)
        #[arg(long)]
        rules: Option<String>,
    },
    /// Write a synthetic dataset
    Synth {
        /// Output directory
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        seed: Seed,
        /// Generator configuration as JSON
        #[arg(long, conflicts_with = "preset")]
        config: Option<PathBuf>,
        /// Built-in configuration
        #[arg(long, value_enum, default_value_t = Preset::Calibrated1906)]
        preset: Preset,
    },
    /// Compute the observed report blocks and side tables
    Analyze {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
        #[command(flatten)]
        model: Model,
    },
    /// Run null-model ensembles and write their per-replicate metrics
    Simulate {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
        #[command(flatten)]
        seed: Seed,
        #[command(flatten)]
        model: Model,
    },
    /// Run ensembles and compare them with the observed distributions
    Compare {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
        #[command(flatten)]
        seed: Seed,
        #[command(flatten)]
        model: Model,
    },
    /// Full run: observed blocks, ensembles and comparisons
    Report {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
        #[command(flatten)]
        seed: Seed,
        #[command(flatten)]
        model: Model,
    },
}

#[derive(Args)]
struct Input {
    #[arg(long)]
    agents: PathBuf,
    #[arg(long)]
    bills: PathBuf,
    /// Region taxonomy JSON (default: built-in nine regions)
    #[arg(long)]
    taxonomy: Option<PathBuf>,
}

#[derive(Args)]
struct Output {
    #[arg(long)]
    out: PathBuf,
    /// Also write SVG histograms
    #[arg(long)]
    svg: bool,
}

#[derive(Args)]
struct Seed {
    /// Master seed
    #[arg(long, env = "BILLNET_SEED")]
    seed: Option<u64>,
}

impl Seed {
    fn require(&self) -> Result<u64, Failure> {
        self.seed
            .ok_or_else(|| Failure::usage("a seed is required: pass --seed or set BILLNET_SEED"))
    }
}

#[derive(Args)]
struct Model {
    #[arg(long, default_value_t = DEFAULT_REPLICATES)]
    replicates: usize,
    /// Null model; both run when omitted
    #[arg(long, value_enum)]
    variant: Option<VariantArg>,
    /// Comma-separated validation rules (default: positive-maturity)
    #[arg(long)]
    rules: Option<String>,
    /// Ensemble metrics: repartition, shared, structure or all
    #[arg(long, default_value = "repartition,shared")]
    metrics: String,
    /// Actors eligible for uniform draws
    #[arg(long, value_enum, default_value_t = UniverseArg::Network)]
    universe: UniverseArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Uniform,
    Degree,
}

#[derive(Clone, Copy, ValueEnum)]
enum UniverseArg {
    Network,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    #[value(name = "calibrated-1906")]
    Calibrated1906,
}

struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    fn usage(msg: &str) -> Self {
        Self {
            code: EXIT_USAGE,
            error: anyhow::anyhow!("{msg}"),
        }
    }

    fn validation(error: anyhow::Error) -> Self {
        Self {
            code: EXIT_VALIDATION,
            error,
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. }
        | Error::Header { .. }
        | Error::DanglingReference { .. }
        | Error::DuplicateId { .. }
        | Error::UnknownRegion { .. }
        | Error::Taxonomy(_)
        | Error::Json(_)
        | Error::Io(_) => EXIT_PARSE,
        Error::Infeasible(_) | Error::Config(_) => EXIT_VALIDATION,
        _ => EXIT_COMPUTATION,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self {
            code: exit_code(&e),
            error: e.into(),
        }
    }
}

/// Errors after loading come from computation or output, never parsing.
fn computing(e: Error) -> Failure {
    let code = match exit_code(&e) {
        EXIT_PARSE => EXIT_COMPUTATION,
        c => c,
    };
    Failure {
        code,
        error: e.into(),
    }
}

fn load(input: &Input) -> Result<LedgerDataset, Failure> {
    let d = read_ledger(&input.agents, &input.bills, input.taxonomy.as_deref())?;
    if d.is_empty() {
        return Err(Error::EmptyDataset.into());
    }
    Ok(d)
}

fn rules(list: Option<&str>) -> Result<RuleSet, Failure> {
    match list {
        None => Ok(RuleSet::default()),
        Some(l) => RuleSet::parse_list(l).map_err(|m| Failure::usage(&m)),
    }
}

fn report_config(
    model: &Model,
    seed: Option<u64>,
    with_variants: bool,
) -> Result<ReportConfig, Failure> {
    let variants = match (with_variants, model.variant) {
        (false, _) => Vec::new(),
        (true, None) => Variant::ALL.to_vec(),
        (true, Some(VariantArg::Uniform)) => vec![Variant::Uniform],
        (true, Some(VariantArg::Degree)) => vec![Variant::DegreePreserving],
    };
    if model.replicates == 0 {
        return Err(Failure::usage("--replicates must be at least 1"));
    }
    Ok(ReportConfig {
        seed,
        replicates: model.replicates,
        variants,
        ensemble_metrics: MetricSet::parse_list(&model.metrics)
            .map_err(|e| Failure::usage(&e.to_string()))?,
        universe: match model.universe {
            UniverseArg::Network => Universe::Network,
            UniverseArg::Table => Universe::Table,
        },
        rules: rules(model.rules.as_deref())?,
        ..ReportConfig::default()
    })
}

fn print_json(value: &serde_json::Value) -> anyhow::Result<()> {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    serde_json::to_writer_pretty(&mut lock, value)?;
    writeln!(lock)?;
    Ok(())
}

fn write_file(
    path: &Path,
    f: impl FnOnce(&mut BufWriter<File>) -> billnet::Result<()>,
) -> Result<(), Failure> {
    let mut w = BufWriter::new(File::create(path).map_err(|e| computing(e.into()))?);
    f(&mut w).map_err(computing)?;
    w.flush().map_err(|e| computing(e.into()))?;
    Ok(())
}

fn cmd_ingest(input: &Input, rule_list: Option<&str>) -> Result<(), Failure> {
    let d = load(input)?;
    let rules = rules(rule_list)?;
    let report = validate_dataset(&d, &rules);
    let network = build_network(&d).map_err(computing)?;
    let out = serde_json::json!({
        "summary": summarize(&d).map_err(computing)?,
        "demography": network.demography(),
        "validation": report,
    });
    print_json(&out).map_err(|e| Failure {
        code: EXIT_COMPUTATION,
        error: e,
    })?;
    if !report.is_clean() {
        for v in &report.violations {
            eprintln!(
                "violation [{}] {}: {}",
                v.rule.name(),
                v.subject_id,
                v.message
            );
        }
        return Err(Failure::validation(anyhow::anyhow!(
            "{} validation violation(s)",
            report.violations.len()
        )));
    }
    Ok(())
}

fn cmd_synth(out: &Path, seed: u64, config: Option<&Path>, preset: Preset) -> Result<(), Failure> {
    let mut cfg = match config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::from(Error::from(e)))
                .map_err(|f| Failure {
                    error: f.error.context(format!("reading {}", path.display())),
                    ..f
                })?;
            serde_json::from_str::<SynthConfig>(&text).map_err(|e| Failure {
                code: EXIT_PARSE,
                error: anyhow::Error::from(e).context(format!("parsing {}", path.display())),
            })?
        }
        None => match preset {
            Preset::Calibrated1906 => SynthConfig::calibrated_1906(seed),
        },
    };
    cfg.seed = seed;
    // Generate fully before touching the output directory.
    let d = synthesize(&cfg)?;
    write_ledger(out, &d).map_err(computing)?;
    eprintln!("wrote {} bills to {}", d.bills().len(), out.display());
    Ok(())
}

fn cmd_analyze(input: &Input, output: &Output, cfg: &ReportConfig) -> Result<(), Failure> {
    let d = load(input)?;
    let a = run_pipeline(&d, cfg).map_err(computing)?;
    write_outputs(&output.out, &a, output.svg).map_err(computing)?;
    if let Some(v) = &a.bundle.validation.data {
        if !v.is_clean() {
            return Err(Failure::validation(anyhow::anyhow!(
                "{} validation violation(s); report written",
                v.violations.len()
            )));
        }
    }
    Ok(())
}

fn cmd_simulate(
    input: &Input,
    out: &Path,
    cfg: &ReportConfig,
    compare: bool,
) -> Result<(), Failure> {
    let d = load(input)?;
    let seed = cfg.seed.expect("seed required");
    let network = build_network(&d).map_err(computing)?;
    let table = make_table_with(&network, cfg.universe).map_err(computing)?;
    let observed = table4_block(&table, cfg.universe).map_err(computing)?;
    let (ensembles, comparisons) = run_variants(&table, cfg, seed).map_err(computing)?;
    std::fs::create_dir_all(out).map_err(|e| computing(e.into()))?;
    write_ensembles(out, &ensembles).map_err(computing)?;
    write_file(&out.join(TABLE4_FILE), |w| {
        write_table4_csv(w, Some(&observed), &comparisons)
    })?;
    if compare {
        let entries: Vec<KsEntry> = comparisons
            .iter()
            .flat_map(|c| c.ks.iter().cloned())
            .collect();
        write_file(&out.join(KS_SUMMARY_FILE), |w| {
            write_ks_summary(w, &entries)
        })?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Ingest { input, rules } => cmd_ingest(&input, rules.as_deref()),
        Command::Synth {
            out,
            seed,
            config,
            preset,
        } => cmd_synth(&out, seed.require()?, config.as_deref(), preset),
        Command::Analyze {
            input,
            output,
            model,
        } => {
            let cfg = report_config(&model, None, false)?;
            cmd_analyze(&input, &output, &cfg)
        }
        Command::Simulate {
            input,
            output,
            seed,
            model,
        } => {
            let cfg = report_config(&model, Some(seed.require()?), true)?;
            cmd_simulate(&input, &output.out, &cfg, false)
        }
        Command::Compare {
            input,
            output,
            seed,
            model,
        } => {
            let cfg = report_config(&model, Some(seed.require()?), true)?;
            cmd_simulate(&input, &output.out, &cfg, true)
        }
        Command::Report {
            input,
            output,
            seed,
            model,
        } => {
            let cfg = report_config(&model, Some(seed.require()?), true)?;
            cmd_analyze(&input, &output, &cfg)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli).map_err(|f| Failure {
        error: f.error.context("billnet failed"),
        ..f
    }) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
