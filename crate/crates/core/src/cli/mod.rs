//! Command-line front end: `check`, `valuate` and `skeleton`.
//!
//! Exit codes: 0 when the run completed (FAIL verdicts included) and any
//! golden file matched, 1 on a golden mismatch, 2 on configuration or
//! capability errors.

mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

pub use config::{RunConfig, StrategyConfig};

use crate::claims::{run_checks, run_claims, RunOptions};
use crate::document::{body_of_text, ReportDocument, SkeletonSection};
use crate::error::{Error, Result};
use crate::instances::InstanceSpec;
use crate::skeleton::{compute_skeleton, skeleton_sample, RELATION_CONVENTION};
use crate::valuation::DerivedValuation;

/// Claims reported by the `skeleton` command.
pub const SKELETON_CLAIMS: [&str; 5] = ["def2.5.onto", "def2.6", "prop3.3.i", "prop3.3.ii", "prop3.4"];

#[derive(Debug, Parser)]
#[command(name = "filtval", version, about = "Derived valuations of filtered modules and their axioms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run claim checkers and write a report.
    Check(CommonArgs),
    /// Print the derived valuation of module elements.
    Valuate {
        #[command(flatten)]
        common: CommonArgs,
        /// Module elements in canonical form.
        #[arg(allow_negative_numbers = true)]
        elements: Vec<String>,
    },
    /// Compute a skeleton and the claims about it.
    Skeleton(CommonArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Catalog id (i1..i7) or an inline constructor as JSON.
    #[arg(long)]
    pub instance: Option<String>,
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Claim ids, comma separated, or `all`.
    #[arg(long, value_delimiter = ',')]
    pub checks: Vec<String>,
    /// `exhaustive` or `bounded_random`.
    #[arg(long)]
    pub strategy: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub level_bound: Option<u32>,
    /// Report path; the report goes to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Golden report to compare against, ignoring `metadata`.
    #[arg(long)]
    pub expect: Option<PathBuf>,
    /// Largest representative subset tried by `prop3.4`.
    #[arg(long)]
    pub n_max: Option<usize>,
}

impl CommonArgs {
    /// The config file, if any, with the flags laid over it.
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(id) = &self.instance {
            cfg.instance = Some(if id.trim_start().starts_with('{') {
                serde_json::from_str(id).map_err(|e| Error::config("--instance", e.to_string()))?
            } else {
                InstanceSpec::Catalog(id.clone())
            });
        }
        if !self.checks.is_empty() {
            cfg.checks = self.checks.clone();
            cfg.selection()?;
        }
        if let Some(kind) = &self.strategy {
            cfg.strategy = StrategyConfig {
                kind: Some(kind.clone()),
                ..cfg.strategy
            };
        }
        cfg.strategy.seed = self.seed.or(cfg.strategy.seed);
        cfg.strategy.samples = self.samples.or(cfg.strategy.samples);
        cfg.strategy.level_bound = self.level_bound.or(cfg.strategy.level_bound);
        if let Some(out) = &self.out {
            cfg.output = Some(out.clone());
        }
        if let Some(expect) = &self.expect {
            cfg.expect = Some(expect.clone());
        }
        if let Some(n) = self.n_max {
            cfg.n_max = n;
        }
        Ok(cfg)
    }
}

/// Outcome of a completed run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Completed,
    GoldenMismatch,
}

impl Outcome {
    pub fn exit_code(self) -> ExitCode {
        match self {
            Outcome::Completed => ExitCode::SUCCESS,
            Outcome::GoldenMismatch => ExitCode::from(1),
        }
    }
}

/// Parses the process arguments and runs the command.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

pub fn run(command: &Command) -> Result<Outcome> {
    match command {
        Command::Check(args) => cmd_check(&args.resolve()?),
        Command::Valuate { common, elements } => {
            let mut cfg = common.resolve()?;
            if !elements.is_empty() {
                cfg.elements = elements.clone();
            }
            cmd_valuate(&cfg)
        }
        Command::Skeleton(args) => cmd_skeleton(&args.resolve()?),
    }
}

fn options(cfg: &RunConfig, inst: &crate::instances::FilteredInstance) -> Result<RunOptions> {
    Ok(RunOptions {
        n_max: cfg.n_max,
        ..RunOptions::new(cfg.strategy.resolve(inst)?)
    })
}

/// Builds the `check` report document.
pub fn check_document(cfg: &RunConfig) -> Result<ReportDocument> {
    let started = Instant::now();
    let selection = cfg.selection()?;
    let inst = cfg.build_instance()?;
    let opts = options(cfg, &inst)?;
    let reports = run_checks(&inst, &selection, &opts)?;
    Ok(ReportDocument::new(inst.id(), opts.strategy, &reports, elapsed_ms(started)))
}

/// Builds the `skeleton` report document.
pub fn skeleton_document(cfg: &RunConfig) -> Result<ReportDocument> {
    let started = Instant::now();
    let inst = cfg.build_instance()?;
    let opts = options(cfg, &inst)?;
    let reports = run_claims(&inst, &SKELETON_CLAIMS, true, &opts)?;
    let nu = DerivedValuation::new(&inst);
    let sample = skeleton_sample(&inst, &opts.strategy)?;
    let skeleton = compute_skeleton(&nu, &sample, &opts.strategy)?;
    let reps: Vec<String> = skeleton.representatives.iter().map(ToString::to_string).collect();
    let classes = skeleton
        .class_of
        .iter()
        .map(|(x, &c)| (x.to_string(), reps[c].clone()))
        .collect();
    let note = if reps.is_empty() {
        format!("{RELATION_CONVENTION}; empty skeleton: every element lies in the core")
    } else {
        format!("{RELATION_CONVENTION}; {} classes", reps.len())
    };
    let mut doc = ReportDocument::new(inst.id(), opts.strategy, &reports, 0);
    doc.skeleton = Some(SkeletonSection {
        representatives: reps,
        classes,
        note,
    });
    doc.metadata.runtime_ms = elapsed_ms(started);
    Ok(doc)
}

fn elapsed_ms(started: Instant) -> u64 {
    started.elapsed().as_millis().try_into().unwrap_or(u64::MAX)
}

pub fn cmd_check(cfg: &RunConfig) -> Result<Outcome> {
    emit(cfg, &check_document(cfg)?)
}

pub fn cmd_skeleton(cfg: &RunConfig) -> Result<Outcome> {
    let doc = skeleton_document(cfg)?;
    if cfg.output.is_some() {
        let section = doc.skeleton.as_ref().expect("skeleton section");
        println!("representatives [{}]", section.representatives.join(","));
        println!("{}", section.note);
    }
    emit(cfg, &doc)
}

/// Prints `element: value` for each requested element.
pub fn cmd_valuate(cfg: &RunConfig) -> Result<Outcome> {
    let inst = cfg.build_instance()?;
    if cfg.elements.is_empty() {
        return Err(Error::config("elements", "no elements given"));
    }
    let nu = DerivedValuation::new(&inst);
    let mut lines = String::new();
    for text in &cfg.elements {
        let x = inst.parse_module(text)?;
        lines.push_str(&format!("{x}: {}\n", nu.nu(&x)?));
    }
    match &cfg.output {
        Some(path) => write_file(path, &lines)?,
        None => print!("{lines}"),
    }
    Ok(Outcome::Completed)
}

/// Writes the report and compares it with the golden file, if one is set.
fn emit(cfg: &RunConfig, doc: &ReportDocument) -> Result<Outcome> {
    let text = doc.render()?;
    match &cfg.output {
        Some(path) => {
            write_file(path, &text)?;
            for r in &doc.results {
                println!("{} {}", r.claim_id, r.verdict);
            }
        }
        None => print!("{text}"),
    }
    let Some(golden) = &cfg.expect else {
        return Ok(Outcome::Completed);
    };
    let expected = std::fs::read_to_string(golden)
        .map_err(|e| Error::config("expect", format!("cannot read {}: {e}", golden.display())))?;
    let expected = body_of_text(&expected).map_err(|e| Error::config("expect", e.to_string()))?;
    let actual = doc.body()?;
    if expected == actual {
        return Ok(Outcome::Completed);
    }
    eprintln!("report differs from golden {}", golden.display());
    if let Some((i, (e, a))) = expected
        .lines()
        .zip(actual.lines())
        .enumerate()
        .find(|(_, (e, a))| e != a)
    {
        eprintln!("line {}: expected {e}", i + 1);
        eprintln!("line {}:   actual {a}", i + 1);
    }
    Ok(Outcome::GoldenMismatch)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, text)?;
    Ok(())
}
