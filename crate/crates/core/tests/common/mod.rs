#![allow(dead_code)]

pub mod oracle;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use filtval::algebra::Element;
use filtval::cli::RunConfig;
use filtval::document::ReportDocument;
use filtval::report::{CheckReport, Witness};

pub fn goldens_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("goldens")
}

/// A shipped golden report together with the config that produced it.
pub struct Golden {
    pub name: String,
    /// `check` or `skeleton`, taken from the file name prefix.
    pub command: String,
    pub config: PathBuf,
    pub report: PathBuf,
}

impl Golden {
    pub fn run_config(&self) -> RunConfig {
        RunConfig::load(&self.config).expect("golden config parses")
    }

    pub fn document(&self) -> ReportDocument {
        let text = std::fs::read_to_string(&self.report).expect("golden report exists");
        ReportDocument::parse(&text).expect("golden report parses")
    }
}

/// Every `goldens/configs/<command>_<name>.json`, sorted by name.
pub fn goldens() -> Vec<Golden> {
    let dir = goldens_dir();
    let mut out: Vec<Golden> = std::fs::read_dir(dir.join("configs"))
        .expect("goldens/configs exists")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .map(|config| {
            let name = config.file_stem().unwrap().to_string_lossy().into_owned();
            let command = name.split('_').next().unwrap().to_string();
            let report = dir.join(format!("{name}.json"));
            Golden {
                name,
                command,
                config,
                report,
            }
        })
        .collect();
    out.sort_by(|a, b| a.name.cmp(&b.name));
    out
}

pub fn filtval(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_filtval"))
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn find<'a>(reports: &'a [CheckReport], claim: &str) -> &'a CheckReport {
    reports
        .iter()
        .find(|r| r.claim_id == claim)
        .unwrap_or_else(|| panic!("no {claim} report"))
}

/// The witness roles as rendered elements, in the order given.
pub fn roles(w: &Witness, names: &[&str]) -> Vec<String> {
    names
        .iter()
        .map(|n| w.get(n).unwrap_or_else(|| panic!("witness lacks {n}")).to_string())
        .collect()
}

pub fn rendered(xs: &[Element]) -> Vec<String> {
    xs.iter().map(Element::to_string).collect()
}
