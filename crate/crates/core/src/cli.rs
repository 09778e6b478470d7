//! The `varfree` command line.
//!
//! Exit codes: 0 success or certified, 1 input error, 2 unknown or budget
//! exhausted, 3 refuted or counterexample.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::certify::{certify, CertReport, CertStatus, Certificate};
use crate::corpus::{embedded_file, run_corpus, Corpus, CorpusReport};
use crate::egraph::{build_free_algebra, Budget, BuildOutcome};
use crate::error::{Error, Result};
use crate::finalg::{satisfies_all, FiniteAlgebra};
use crate::report::{CheckReport, FreeReport, Report};
use crate::terms::GeneratorProfile;
use crate::variety::VarietyDef;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_REFUTED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "varfree", version, about = "Finite free algebras of many-sorted varieties")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Copy)]
pub struct BudgetArgs {
    /// Stop once the e-graph holds this many classes.
    #[arg(long, env = "VF_BUDGET_CLASSES", default_value_t = Budget::default().max_classes)]
    pub budget_classes: usize,
    /// Stop after this many saturation rounds.
    #[arg(long, env = "VF_BUDGET_ROUNDS", default_value_t = Budget::default().max_rounds)]
    pub budget_rounds: usize,
}

impl From<BudgetArgs> for Budget {
    fn from(b: BudgetArgs) -> Budget {
        Budget { max_classes: b.budget_classes, max_rounds: b.budget_rounds }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the free algebra on a generator profile such as `elem=3` or `edge=2,vertex=1`.
    Free {
        variety: PathBuf,
        profile: String,
        /// Representatives listed per sort.
        #[arg(long, default_value_t = 32)]
        max_reps: usize,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Write the JSON report here (`-` for standard output).
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Check a certificate for a variety.
    Certify {
        variety: PathBuf,
        certificate: PathBuf,
        /// Lower the certificate's ranks to at most this.
        #[arg(long)]
        rank: Option<usize>,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Write the JSON report here (`-` for standard output).
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Check a finite algebra (`.alg.json`) against a variety's axioms.
    Check {
        variety: PathBuf,
        algebra: PathBuf,
        /// Write the JSON report here (`-` for standard output).
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run the bundled corpus, or the entries named.
    Corpus {
        entries: Vec<String>,
        /// Comma-separated entry names.
        #[arg(long, value_delimiter = ',')]
        filter: Vec<String>,
        /// Read the corpus from a directory instead of the bundled copy.
        #[arg(long)]
        data_dir: Option<PathBuf>,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Write the JSON report here (`-` for standard output).
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn load_variety(path: &Path) -> Result<VarietyDef> {
    VarietyDef::parse(&read(path)?).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

/// Files named in a certificate resolve next to it, then in the bundled
/// corpus.
fn load_certificate(path: &Path, v: &VarietyDef) -> Result<Certificate> {
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let resolve = |name: &str| {
        let p = dir.join(name);
        if p.exists() {
            read(&p)
        } else {
            embedded_file(name).map(str::to_string).ok_or_else(|| Error::Invalid(format!("{}: not found", p.display())))
        }
    };
    Certificate::parse(&read(path)?, v, &resolve).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn emit<T: Serialize>(report: &Report<T>, json: &Option<PathBuf>, out: &mut dyn Write) -> Result<bool> {
    match json {
        Some(p) if p.as_os_str() == "-" => {
            writeln!(out, "{}", report.to_pretty())?;
            Ok(true)
        }
        Some(p) => {
            std::fs::write(p, report.to_pretty() + "\n")?;
            Ok(false)
        }
        None => Ok(false),
    }
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    let start = Instant::now();
    match cmd {
        Command::Free { variety, profile, max_reps, budget, json } => {
            let v = load_variety(&variety)?;
            let x = GeneratorProfile::from_spec(&v.sig, &profile)?;
            let budget = Budget::from(budget);
            let outcome = build_free_algebra(&v, &x, budget)?;
            let report = Report::new("free", FreeReport::new(&v, &x, &outcome, budget, max_reps), start.elapsed());
            if !emit(&report, &json, out)? {
                print_free(&report.body, out)?;
            }
            Ok(match outcome {
                BuildOutcome::Saturated(_) => EXIT_OK,
                BuildOutcome::BudgetExceeded(_) => EXIT_UNKNOWN,
            })
        }
        Command::Certify { variety, certificate, rank, budget, json } => {
            let v = load_variety(&variety)?;
            let mut cert = load_certificate(&certificate, &v)?;
            if let Some(n) = rank {
                cert.cap_rank(n)?;
            }
            let body = certify(&v, &cert, budget.into())?;
            let report = Report::new("certify", body, start.elapsed());
            if !emit(&report, &json, out)? {
                print_cert(&report.body, out)?;
            }
            Ok(status_code(&report.body.status))
        }
        Command::Check { variety, algebra, json } => {
            let v = load_variety(&variety)?;
            let value: serde_json::Value = serde_json::from_str(&read(&algebra)?)?;
            let alg = FiniteAlgebra::from_json(&v.sig, &value)?;
            let failure = satisfies_all(&alg, &v).err();
            let body = CheckReport::new(&v, alg.sizes(), failure.as_ref());
            let report = Report::new("check", body, start.elapsed());
            if !emit(&report, &json, out)? {
                print_check(&report.body, out)?;
            }
            Ok(if failure.is_none() { EXIT_OK } else { EXIT_REFUTED })
        }
        Command::Corpus { mut entries, filter, data_dir, budget, json } => {
            let corpus = match data_dir {
                Some(dir) => Corpus::load(&dir)?,
                None => Corpus::embedded()?,
            };
            entries.extend(filter);
            let selection = (!entries.is_empty()).then_some(entries.as_slice());
            let body = run_corpus(&corpus, selection, budget.into())?;
            let code = corpus_code(&body);
            let report = Report::new("corpus", body, start.elapsed());
            if !emit(&report, &json, out)? {
                print_corpus(&report.body, out)?;
            }
            Ok(code)
        }
    }
}

fn status_code(s: &CertStatus) -> i32 {
    match s {
        CertStatus::Certified { .. } | CertStatus::CertifiedConditional { .. } => EXIT_OK,
        CertStatus::Refuted { .. } => EXIT_REFUTED,
        CertStatus::Unknown { .. } | CertStatus::NotApplicable { .. } => EXIT_UNKNOWN,
    }
}

fn corpus_code(r: &CorpusReport) -> i32 {
    if r.pass {
        return EXIT_OK;
    }
    let mismatch = r
        .entries
        .iter()
        .any(|e| e.expectations.iter().any(|x| !x.pass) || matches!(e.certificate.status, CertStatus::Refuted { .. }));
    if mismatch {
        EXIT_REFUTED
    } else {
        EXIT_UNKNOWN
    }
}

fn print_free(r: &FreeReport, out: &mut dyn Write) -> Result<()> {
    writeln!(out, "variety {} on {}", r.variety, r.profile)?;
    if let Some(b) = &r.budget_exceeded {
        writeln!(out, "budget exceeded: {b}")?;
        return Ok(());
    }
    writeln!(out, "saturated after {} rounds, {} nodes, {} classes", r.rounds, r.nodes, r.classes)?;
    for s in &r.sorts {
        writeln!(out, "{}: {} element(s)", s.sort, s.size)?;
        for (i, t) in s.elements.iter().enumerate() {
            writeln!(out, "  {i:>4}  {t}")?;
        }
        if s.truncated {
            writeln!(out, "  ... {} more", s.size - s.elements.len())?;
        }
    }
    if !r.generators.is_empty() {
        let gens: Vec<String> = r.generators.iter().map(|g| format!("{}->{}", g.name, g.element)).collect();
        writeln!(out, "generators: {}", gens.join(" "))?;
    }
    writeln!(out, "total size {}", r.total_size.unwrap_or_default())?;
    Ok(())
}

fn print_cert(r: &CertReport, out: &mut dyn Write) -> Result<()> {
    writeln!(out, "variety {} via {}", r.variety, r.route)?;
    for n in &r.nondegeneracy {
        writeln!(out, "  nondegeneracy of {} at {}: {}", n.variety, n.sort, n.verdict)?;
    }
    for c in &r.consequences {
        writeln!(out, "  {} in {}: {}", c.axiom, c.variety, c.verdict)?;
    }
    for p in &r.profiles {
        let sizes = match &p.sizes {
            Some(s) => format!("{s:?}"),
            None => "budget exceeded".to_string(),
        };
        writeln!(out, "  free {} on {:?}: {sizes}", p.variety, p.profile)?;
    }
    let searched = r.iso_matrix.iter().filter(|e| e.verdict != crate::certify::IsoVerdict::SizesDiffer).count();
    if !r.iso_matrix.is_empty() {
        writeln!(out, "  {} profile pairs compared, {searched} by isomorphism search", r.iso_matrix.len())?;
    }
    for a in &r.assemblies {
        let verdict = a.failure.as_deref().unwrap_or("satisfies the subvariety");
        writeln!(out, "  trivial action on {} generator(s), sizes {:?}: {verdict}", a.generators, a.sizes)?;
    }
    for n in &r.notes {
        writeln!(out, "  note: {n}")?;
    }
    writeln!(out, "{}", r.status)?;
    Ok(())
}

fn print_check(r: &CheckReport, out: &mut dyn Write) -> Result<()> {
    match &r.counterexample {
        None => writeln!(out, "the algebra satisfies every axiom of {}", r.variety)?,
        Some(c) => {
            let asg: Vec<String> = c.assignment.iter().map(|g| format!("{}->{}", g.name, g.element)).collect();
            writeln!(out, "axiom {} fails: {} at {}", c.axiom, c.identity, asg.join(" "))?;
        }
    }
    Ok(())
}

fn print_corpus(r: &CorpusReport, out: &mut dyn Write) -> Result<()> {
    for e in &r.entries {
        let ok = e.expectations.iter().filter(|x| x.pass).count();
        writeln!(
            out,
            "{} {:<36} sizes {ok}/{}  {}",
            if e.pass { "ok  " } else { "FAIL" },
            e.name,
            e.expectations.len(),
            e.certificate.status
        )?;
        for x in e.expectations.iter().filter(|x| !x.pass) {
            writeln!(out, "       {}: expected {}, observed {}", x.profile, x.expected, x.observed)?;
        }
    }
    if let Some(d) = &r.swap_demo {
        writeln!(
            out,
            "{} sort swap on {} objects and {} morphisms: involution {}, functorial {}, one generator vs swap isomorphic {}",
            if d.pass { "ok  " } else { "FAIL" },
            d.objects_checked,
            d.morphisms_checked,
            d.involution,
            d.functorial,
            d.swapped_isomorphic
        )?;
    }
    writeln!(out, "{}", if r.pass { "all entries pass" } else { "some entries fail" })?;
    Ok(())
}
