//! The claim vocabulary and the dispatcher that runs claims on an instance.

use std::collections::BTreeSet;

use crate::algebra::{self_test_structure, Element};
use crate::error::{Error, Result};
use crate::filtration::{check_filtered_module, check_filtered_ring, check_strong, require_capability};
use crate::instances::FilteredInstance;
use crate::report::{CheckReport, SearchStrategy};
use crate::skeleton::{check_nu_independent, check_prop33, check_prop34, compute_skeleton, skeleton_sample, Skeleton};
use crate::valuation::{
    check_axiom_i, check_axiom_ii, check_axiom_iii, check_axiom_iv, check_onto_nontrivial, check_prop21_i,
    check_prop21_ii, check_prop21_iii, check_prop21_iv, check_prop21_v, check_prop21_vi,
    check_strong_implies_trivial, valuation_pair, DerivedValuation,
};

/// Every claim id, in the order reports list them.
pub const CLAIMS: [&str; 27] = [
    "structure",
    "def2.1.i",
    "def2.1.ii",
    "def2.1.iii",
    "def2.3.i",
    "def2.3.ii",
    "def2.3.iii",
    "def2.2",
    "def2.4",
    "def2.5.i",
    "def2.5.ii",
    "def2.5.iii",
    "def2.5.iv",
    "def2.5.onto",
    "prop2.1.i",
    "prop2.1.ii",
    "prop2.1.iii",
    "prop2.1.iv",
    "prop2.1.v",
    "prop2.1.vi",
    "prop2.1.vii",
    "prop3.1",
    "def2.6",
    "def2.7",
    "prop3.3.i",
    "prop3.3.ii",
    "prop3.4",
];

pub const DEFAULT_N_MAX: usize = 2;
pub const MAX_N_MAX: usize = 3;
/// Samples drawn on infinite instances when no strategy is given.
pub const DEFAULT_SAMPLES: usize = 1000;

/// Which claims to run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Selection {
    /// Everything applicable; inapplicable claims report INCONCLUSIVE.
    All,
    /// These claims, each of which must be applicable.
    Listed(Vec<&'static str>),
}

impl Selection {
    /// Parses claim ids, rejecting unknown ones. `"all"` selects everything.
    pub fn parse<S: AsRef<str>>(ids: &[S]) -> Result<Selection> {
        if ids.is_empty() || ids.iter().any(|s| s.as_ref() == "all") {
            return Ok(Selection::All);
        }
        let mut wanted = BTreeSet::new();
        for id in ids {
            let id = id.as_ref();
            let pos = CLAIMS
                .iter()
                .position(|c| *c == id)
                .ok_or_else(|| Error::config("checks", format!("unknown claim id {id:?}")))?;
            wanted.insert(pos);
        }
        Ok(Selection::Listed(wanted.into_iter().map(|i| CLAIMS[i]).collect()))
    }

    pub fn claims(&self) -> Vec<&'static str> {
        match self {
            Selection::All => CLAIMS.to_vec(),
            Selection::Listed(c) => c.clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub strategy: SearchStrategy,
    /// Largest representative subset in `prop3.4`.
    pub n_max: usize,
    /// The set tested by `def2.7`; the skeleton representatives when absent.
    pub independent_set: Option<Vec<Element>>,
}

impl RunOptions {
    pub fn new(strategy: SearchStrategy) -> Self {
        RunOptions {
            strategy,
            n_max: DEFAULT_N_MAX,
            independent_set: None,
        }
    }
}

/// Exhaustive on finite instances, seeded sampling otherwise.
pub fn default_strategy(inst: &FilteredInstance) -> SearchStrategy {
    if inst.finite() {
        SearchStrategy::Exhaustive
    } else {
        SearchStrategy::bounded(0, DEFAULT_SAMPLES, crate::report::DEFAULT_LEVEL_BOUND)
    }
}

/// Runs the selected claims in canonical order.
///
/// Capability errors abort a listed selection. Under [`Selection::All`]
/// they become INCONCLUSIVE reports naming the missing capability.
pub fn run_checks(inst: &FilteredInstance, selection: &Selection, options: &RunOptions) -> Result<Vec<CheckReport>> {
    run_claims(inst, &selection.claims(), selection == &Selection::All, options)
}

/// Runs `claims` in the order given. With `lenient` set, capability errors
/// become INCONCLUSIVE reports instead of aborting the run.
pub fn run_claims(
    inst: &FilteredInstance,
    claims: &[&str],
    lenient: bool,
    options: &RunOptions,
) -> Result<Vec<CheckReport>> {
    if options.n_max == 0 || options.n_max > MAX_N_MAX {
        return Err(Error::config("n_max", format!("must be between 1 and {MAX_N_MAX}")));
    }
    require_capability(inst, &options.strategy)?;
    let mut runner = Runner::new(inst, options);
    let mut out = Vec::new();
    for &claim in claims {
        match runner.run(claim) {
            Ok(report) => out.push(report),
            Err(Error::Capability(reason)) if lenient => {
                out.push(CheckReport::inconclusive(claim, options.strategy, format!("not applicable: {reason}")));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Evaluates claims one at a time, sharing the checks that report several
/// claims at once.
struct Runner<'a> {
    inst: &'a FilteredInstance,
    options: &'a RunOptions,
    nu: DerivedValuation<'a>,
    ring: Option<Vec<CheckReport>>,
    module: Option<Vec<CheckReport>>,
    strong: Option<Vec<CheckReport>>,
    skeleton: Option<(Vec<Element>, Skeleton)>,
    prop33: Option<[CheckReport; 2]>,
}

impl<'a> Runner<'a> {
    fn new(inst: &'a FilteredInstance, options: &'a RunOptions) -> Self {
        Runner {
            inst,
            options,
            nu: DerivedValuation::new(inst),
            ring: None,
            module: None,
            strong: None,
            skeleton: None,
            prop33: None,
        }
    }

    fn skeleton(&mut self) -> Result<&(Vec<Element>, Skeleton)> {
        if self.skeleton.is_none() {
            let s = &self.options.strategy;
            let sample = skeleton_sample(self.inst, s)?;
            let skeleton = compute_skeleton(&self.nu, &sample, s)?;
            self.skeleton = Some((sample, skeleton));
        }
        Ok(self.skeleton.as_ref().unwrap())
    }

    fn prop33(&mut self, item: usize) -> Result<CheckReport> {
        if self.prop33.is_none() {
            let s = self.options.strategy;
            self.skeleton()?;
            let (sample, skeleton) = self.skeleton.as_ref().unwrap();
            self.prop33 = Some(check_prop33(&self.nu, skeleton, sample, &s)?);
        }
        Ok(self.prop33.as_ref().unwrap()[item].clone())
    }

    fn run(&mut self, claim: &str) -> Result<CheckReport> {
        let s = self.options.strategy;
        let (inst, nu) = (self.inst, &self.nu);
        let pick = |reports: &[CheckReport]| {
            reports
                .iter()
                .find(|r| r.claim_id == claim)
                .cloned()
                .expect("checker reports the claim")
        };
        match claim {
            "structure" => self_test_structure(inst, &s),
            "def2.1.i" | "def2.1.ii" | "def2.1.iii" => {
                if self.ring.is_none() {
                    self.ring = Some(check_filtered_ring(inst, &s)?);
                }
                Ok(pick(self.ring.as_ref().unwrap()))
            }
            "def2.3.i" | "def2.3.ii" | "def2.3.iii" => {
                if self.module.is_none() {
                    self.module = Some(check_filtered_module(inst, &s)?);
                }
                Ok(pick(self.module.as_ref().unwrap()))
            }
            "def2.2" | "def2.4" => {
                if self.strong.is_none() {
                    self.strong = Some(check_strong(inst, &s)?);
                }
                Ok(pick(self.strong.as_ref().unwrap()))
            }
            "def2.5.i" => check_axiom_i(nu, &s),
            "def2.5.ii" => check_axiom_ii(nu, &s),
            "def2.5.iii" => check_axiom_iii(nu, &s),
            "def2.5.iv" => check_axiom_iv(nu, &s),
            "def2.5.onto" => check_onto_nontrivial(nu, &s),
            "prop2.1.i" => check_prop21_i(nu, &s),
            "prop2.1.ii" => check_prop21_ii(nu, &s),
            "prop2.1.iii" => check_prop21_iii(nu, &s),
            "prop2.1.iv" => check_prop21_iv(nu, &s),
            "prop2.1.v" => check_prop21_v(nu, &s),
            "prop2.1.vi" => check_prop21_vi(nu, &s),
            "prop2.1.vii" => valuation_pair(nu, &s).map(|(_, report)| report),
            "prop3.1" => check_strong_implies_trivial(nu, &s),
            "def2.6" => Ok(self.skeleton()?.1.relation.clone()),
            "def2.7" => match &self.options.independent_set {
                Some(set) => check_nu_independent(&self.nu, set, "def2.7", &s),
                None => {
                    self.skeleton()?;
                    let reps = &self.skeleton.as_ref().unwrap().1.representatives;
                    check_nu_independent(&self.nu, reps, "def2.7", &s)
                }
            },
            "prop3.3.i" => self.prop33(0),
            "prop3.3.ii" => self.prop33(1),
            "prop3.4" => {
                let n_max = self.options.n_max;
                self.skeleton()?;
                let skeleton = &self.skeleton.as_ref().unwrap().1;
                check_prop34(&self.nu, skeleton, n_max, &s)
            }
            other => Err(Error::config("checks", format!("unknown claim id {other:?}"))),
        }
    }
}
