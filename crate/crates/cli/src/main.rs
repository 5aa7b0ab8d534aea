//! `coherence`: check, extend, and simulate conditional previsions from the
//! command line.
//!
//! Exit codes: 0 coherent or ok, 1 incoherent, 2 any error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use coherence_core::crq::conjunction;
use coherence_core::events::{self, Cell, DEFAULT_ATOM_CAP};
use coherence_core::kaufmann::{simulate_conditional, JointDistribution, SimOptions, RNG_ALGORITHM};
use coherence_core::rational;
use coherence_core::{check_coherence, extension_interval, Assessment, Event};

use coherence_cli::document::Loaded;
use coherence_cli::error::CliError;
use coherence_cli::report::{self, CaseDoc, CompoundDoc, ConstituentDoc, IntervalDoc, ReportDocument, SimulationDoc, Q};

const ATOM_CAP_VAR: &str = "COHERENCE_ATOM_CAP";

#[derive(Debug, Parser)]
#[command(name = "coherence", version, about = "Exact coherence checking for conditional previsions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether the assessed previsions are coherent.
    Check { file: PathBuf },
    /// Interval of coherent previsions for one more quantity.
    Extend {
        file: PathBuf,
        /// `conjunction:I,J`, `disjunction:I,J`, `negated-conjunction:I,J`,
        /// `quasi-conjunction:I,J`, `iterated:I:<given>` or `event:<expr>:<given>`.
        #[arg(long)]
        target: String,
    },
    /// Value table and prevision bounds of the conjunction of two members.
    Conjoin {
        file: PathBuf,
        #[arg(long = "i")]
        i: usize,
        #[arg(long = "j")]
        j: usize,
    },
    /// Constituents generated by the members and compounds.
    Constituents { file: PathBuf },
    /// Estimate P(C|A) by sampling worlds until the antecedent holds.
    Simulate {
        #[arg(long)]
        pa: String,
        #[arg(long)]
        pac: String,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 40)]
        max_len: u32,
        #[arg(long)]
        seed: u64,
    },
}

/// A finished command: the report plus its exit code.
struct Output {
    summary: String,
    report: ReportDocument,
    code: u8,
}

fn atom_cap() -> Result<usize, CliError> {
    match std::env::var(ATOM_CAP_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Invalid(format!("{ATOM_CAP_VAR}={v:?} is not a count"))),
        Err(_) => Ok(DEFAULT_ATOM_CAP),
    }
}

fn load(path: &Path) -> Result<Loaded, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    Loaded::parse(&text, atom_cap()?)
}

fn check(file: &Path) -> Result<Output, CliError> {
    let loaded = load(file)?;
    let report = check_coherence(&loaded.assessment()?)?;
    let doc = ReportDocument::from_check(&report);
    Ok(Output {
        summary: format!("verdict: {}", report::verdict(report.coherent)),
        report: doc,
        code: if report.coherent { 0 } else { 1 },
    })
}

fn extend(file: &Path, target: &str) -> Result<Output, CliError> {
    let mut loaded = load(file)?;
    let base = loaded.assessment()?;
    let crq = loaded.target(target)?;
    let iv = extension_interval(&base, &crq)?;
    let mut doc = ReportDocument::new("extend");
    doc.verdict = Some(report::verdict(true).into());
    doc.interval = Some(IntervalDoc::new(target, &iv));
    let status = if iv.attained { "endpoints verified" } else { "endpoints not verified" };
    Ok(Output { summary: format!("interval: {}, {} ({status})", iv.lower, iv.upper), report: doc, code: 0 })
}

fn conjoin(file: &Path, i: usize, j: usize) -> Result<Output, CliError> {
    let mut loaded = load(file)?;
    let conj = loaded.target(&format!("conjunction:{i},{j}"))?;
    let x = loaded.members[i].clone();
    let y = loaded.members[j].clone();
    let compound = conjunction(&x, &y)?;
    let base = Assessment::from_members(vec![x, y])?;
    let iv = extension_interval(&base, &conj)?;
    let u = &loaded.universe;
    let doc = CompoundDoc {
        kind: compound.kind.name().into(),
        operands: vec![i, j],
        given: u.render(conj.given()),
        cases: conj
            .cases()
            .iter()
            .map(|(e, v)| CaseDoc { event: u.render(e), value: Q(v.clone()) })
            .collect(),
        lower: Q(iv.lower.clone()),
        upper: Q(iv.upper.clone()),
    };
    let mut report = ReportDocument::new("conjoin");
    report.compound = Some(doc);
    Ok(Output { summary: format!("bounds: {}, {}", iv.lower, iv.upper), report, code: 0 })
}

fn constituents(file: &Path) -> Result<Output, CliError> {
    let loaded = load(file)?;
    let family = loaded.family();
    if family.is_empty() {
        return Err(CliError::Invalid("the document has no members".into()));
    }
    let parts = events::constituents(&family)?;
    let u = &loaded.universe;
    let doc = |id: usize, c: &events::Constituent| ConstituentDoc {
        id,
        assignment: u.render_world(c.assignment, parts.support),
        worlds: c.worlds.len(),
        cells: c
            .cells
            .iter()
            .map(|cell| match cell {
                Cell::Outside => "outside".into(),
                Cell::Value(v) => rational::format(v),
            })
            .collect(),
    };
    let mut report = ReportDocument::new("constituents");
    report.constituents = parts.outside.iter().map(|c| doc(0, c)).collect();
    report.constituents.extend(parts.inside.iter().map(|c| doc(c.id, c)));
    let summary = format!(
        "{} constituents inside the conditioning events{}",
        parts.inside.len(),
        if parts.outside.is_some() { " plus one outside" } else { "" }
    );
    Ok(Output { summary, report, code: 0 })
}

fn simulate(pa: &str, pac: &str, trials: u64, max_len: u32, seed: u64) -> Result<Output, CliError> {
    let pa = rational::parse(pa).map_err(|e| CliError::at("--pa".into(), e))?;
    let pac = rational::parse(pac).map_err(|e| CliError::at("--pac".into(), e))?;
    let dist = JointDistribution::from_antecedent(&pa, &pac)?;
    let (a, c) = (Event::atom(0), Event::atom(1));
    let exact = dist.conditional(&c, &a, "the antecedent")?;
    let est = simulate_conditional(&dist, &a, &c, &SimOptions::new(trials, max_len, seed))?;
    let sim = SimulationDoc {
        rng: RNG_ALGORITHM.into(),
        seed,
        trials: est.trials,
        max_len,
        mean: est.mean,
        std_error: est.std_error,
        indeterminate_count: est.indeterminate_count,
        indeterminate_fraction: est.indeterminate_fraction(),
        exact: Q(exact.clone()),
    };
    let mut report = ReportDocument::new("simulate");
    report.simulation = Some(sim);
    Ok(Output {
        summary: format!("mean {:.6} +/- {:.6}, exact {exact}", est.mean, est.std_error),
        report,
        code: 0,
    })
}

fn run(cli: Cli) -> Result<Output, CliError> {
    match cli.command {
        Command::Check { file } => check(&file),
        Command::Extend { file, target } => extend(&file, &target),
        Command::Conjoin { file, i, j } => conjoin(&file, i, j),
        Command::Constituents { file } => constituents(&file),
        Command::Simulate { pa, pac, trials, max_len, seed } => simulate(&pa, &pac, trials, max_len, seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(out) => {
            // the summary is a comment so stdout stays a valid report
            print!("# {}\n{}", out.summary, out.report.to_toml());
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
