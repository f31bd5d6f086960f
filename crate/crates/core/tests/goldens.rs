//! Shipped golden reports: they match a fresh run, their verdicts agree
//! with the oracle, and every FAIL witness replays.

mod common;

use common::oracle::Oracle;
use common::{filtval, goldens};
use filtval::cli::{check_document, skeleton_document, RunConfig};
use filtval::document::{body_of_text, ReportDocument};
use filtval::replay::replay_report;
use filtval::report::Verdict;

fn fresh(command: &str, cfg: &RunConfig) -> ReportDocument {
    match command {
        "check" => check_document(cfg).unwrap(),
        "skeleton" => skeleton_document(cfg).unwrap(),
        other => panic!("unknown golden command {other}"),
    }
}

#[test]
fn shipped_goldens_cover_the_catalog() {
    let names: Vec<String> = goldens().into_iter().map(|g| g.name).collect();
    for id in ["i1", "i2", "i3", "i4", "i5", "i6", "i7"] {
        assert!(names.contains(&format!("check_{id}")), "{names:?}");
    }
    for id in ["i1", "i5", "i6"] {
        assert!(names.contains(&format!("skeleton_{id}")), "{names:?}");
    }
}

#[test]
fn fresh_runs_match_the_goldens() {
    for g in goldens() {
        let cfg = g.run_config();
        let first = fresh(&g.command, &cfg).body().unwrap();
        let second = fresh(&g.command, &cfg).body().unwrap();
        assert_eq!(first, second, "{} is not deterministic", g.name);
        let golden = body_of_text(&std::fs::read_to_string(&g.report).unwrap()).unwrap();
        assert_eq!(first, golden, "{} differs from its golden", g.name);
    }
}

#[test]
fn the_binary_accepts_every_golden() {
    let dir = tempfile::tempdir().unwrap();
    for g in goldens() {
        let out = dir.path().join(format!("{}.json", g.name));
        let run = filtval(&[
            &g.command,
            "--config",
            g.config.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--expect",
            g.report.to_str().unwrap(),
        ]);
        assert_eq!(run.status.code(), Some(0), "{}: {}", g.name, String::from_utf8_lossy(&run.stderr));
    }
}

#[test]
fn a_doctored_golden_is_a_mismatch() {
    let g = goldens().into_iter().find(|g| g.name == "check_i1").unwrap();
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(&g.report).unwrap();
    let doctored = dir.path().join("doctored.json");
    std::fs::write(&doctored, text.replacen("\"FAIL\"", "\"PASS\"", 1)).unwrap();
    let run = filtval(&["check", "--config", g.config.to_str().unwrap(), "--expect", doctored.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(1));

    // only metadata differs: still a match
    let retimed = dir.path().join("retimed.json");
    let mut doc = g.document();
    doc.metadata.runtime_ms = 123_456;
    std::fs::write(&retimed, doc.render().unwrap()).unwrap();
    let run = filtval(&["check", "--config", g.config.to_str().unwrap(), "--expect", retimed.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(0));
}

#[test]
fn every_golden_failure_replays() {
    let mut replayed = 0;
    for g in goldens() {
        let inst = g.run_config().build_instance().unwrap();
        for report in g.document().reports().iter().filter(|r| r.is_fail()) {
            assert!(replay_report(&inst, report).unwrap(), "{} {}", g.name, report.claim_id);
            replayed += 1;
        }
    }
    assert!(replayed > 40, "only {replayed} witnesses replayed");
}

/// Golden verdicts on finite instances against the oracle, for the claims
/// whose oracle is cheap enough to run on every catalog instance.
#[test]
fn golden_verdicts_agree_with_the_oracle() {
    for g in goldens().into_iter().filter(|g| g.command == "check") {
        let inst = g.run_config().build_instance().unwrap();
        if !inst.finite() || inst.module_elements().unwrap().len() > 100 {
            continue;
        }
        let o = Oracle::new(&inst);
        let doc = g.document();
        let verdict = |claim: &str| doc.results.iter().find(|r| r.claim_id == claim).unwrap().verdict;
        let expect = |ok: bool| if ok { Verdict::Pass } else { Verdict::Fail };
        assert_eq!(verdict("def2.5.i"), expect(o.axiom_i().is_none()), "{}", g.name);
        assert_eq!(verdict("def2.5.ii"), expect(o.axiom_ii().is_none()), "{}", g.name);
        assert_eq!(verdict("def2.5.iii"), expect(o.axiom_iii().is_none()), "{}", g.name);
        assert_eq!(verdict("def2.5.iv"), expect(o.axiom_iv().is_none()), "{}", g.name);
        assert_eq!(verdict("def2.5.onto"), expect(!o.degenerate()), "{}", g.name);
        assert_eq!(verdict("prop2.1.iv"), expect(o.prop21_iv().is_none()), "{}", g.name);
        assert_eq!(verdict("prop2.1.v"), expect(o.prop21_v().is_none()), "{}", g.name);
        assert_eq!(verdict("def2.2"), expect(o.strong(false)), "{}", g.name);
        assert_eq!(verdict("def2.4"), expect(o.strong(true)), "{}", g.name);
        let reps = o.skeleton();
        assert_eq!(verdict("prop3.3.i"), expect(o.dependent_pair(&reps).is_none()), "{}", g.name);
        assert_eq!(verdict("prop3.4"), expect(!o.prop34_violated(&reps, 2)), "{}", g.name);
    }
}
