//! One line per acceptance criterion. Exits non-zero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::oracle::{Oracle, INF};
use common::{filtval, goldens};
use filtval::algebra::{Element, ExtendedValue};
use filtval::claims::{run_checks, RunOptions, Selection};
use filtval::cli::{check_document, skeleton_document};
use filtval::document::body_of_text;
use filtval::filtration::{check_filtered_module, check_filtered_ring};
use filtval::instances::{catalog, make_trivial_strong, FilteredInstance};
use filtval::replay::replay_report;
use filtval::report::{CheckReport, SearchStrategy, Verdict};
use filtval::skeleton::compute_skeleton;
use filtval::valuation::{valuation_pair, DerivedValuation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run(inst: &FilteredInstance, claims: &[&str], strategy: SearchStrategy) -> Result<Vec<CheckReport>, String> {
    let selection = Selection::parse(claims).map_err(|e| e.to_string())?;
    run_checks(inst, &selection, &RunOptions::new(strategy)).map_err(|e| e.to_string())
}

fn get<'a>(reports: &'a [CheckReport], claim: &str) -> &'a CheckReport {
    reports.iter().find(|r| r.claim_id == claim).expect("claim was requested")
}

fn role<'a>(r: &'a CheckReport, name: &str) -> Option<&'a str> {
    r.witness.as_ref().and_then(|w| w.get(name))
}

fn instance(id: &str) -> Result<FilteredInstance, String> {
    catalog(id).map_err(|e| e.to_string())
}

fn filtration_axioms() -> Outcome {
    let started = Instant::now();
    let mut checked = 0;
    for id in ["i1", "i2", "i3", "i5", "i6", "i7"] {
        let inst = instance(id)?;
        let mut reports = check_filtered_ring(&inst, &SearchStrategy::Exhaustive).map_err(|e| e.to_string())?;
        reports.extend(check_filtered_module(&inst, &SearchStrategy::Exhaustive).map_err(|e| e.to_string())?);
        for r in &reports {
            ensure(r.is_pass(), || format!("{id} {} is {}", r.claim_id, r.verdict))?;
            checked += 1;
        }
    }
    let i4 = instance("i4")?;
    let bounded = SearchStrategy::bounded(1, 1000, 8);
    let mut reports = check_filtered_ring(&i4, &bounded).map_err(|e| e.to_string())?;
    reports.extend(check_filtered_module(&i4, &bounded).map_err(|e| e.to_string())?);
    for r in &reports {
        ensure(r.is_pass(), || format!("i4 {} is {}", r.claim_id, r.verdict))?;
        checked += 1;
    }
    let elapsed = started.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("{checked} reports PASS in {} ms", elapsed.as_millis()))
}

fn valuation_table() -> Outcome {
    let inst = instance("i1")?;
    let nu = DerivedValuation::new(&inst);
    let oracle = Oracle::new(&inst);
    for r in 0..9u64 {
        let x = Element::Residue(r);
        let expected = match r {
            0 => ExtendedValue::Infinite { exact: true },
            3 | 6 => ExtendedValue::Finite(1),
            _ => ExtendedValue::Finite(0),
        };
        let cached = nu.nu(&x).map_err(|e| e.to_string())?;
        let uncached = nu.nu_uncached(&x).map_err(|e| e.to_string())?;
        ensure(cached == expected && cached.is_exact() == expected.is_exact(), || {
            format!("nu({r}) = {cached}, expected {expected}")
        })?;
        ensure(uncached == cached && uncached.is_exact() == cached.is_exact(), || {
            format!("nu({r}): cached {cached}, uncached {uncached}")
        })?;
        let scanned = oracle.v(&x);
        let agrees = match cached.finite() {
            Some(v) => scanned == u64::from(v),
            None => scanned == INF,
        };
        ensure(agrees, || format!("nu({r}) = {cached} but the brute-force scan gives {scanned}"))?;
    }
    Ok("nu = 0 on units, 1 on {3,6}, inf(exact) on {0}; cached, uncached and scan agree".into())
}

fn valuation_axioms() -> Outcome {
    let axioms = ["def2.5.i", "def2.5.ii", "def2.5.iii", "def2.5.iv"];
    let i5 = run(&instance("i5")?, &axioms, SearchStrategy::Exhaustive)?;
    for r in &i5 {
        ensure(r.is_pass(), || format!("i5 {} is {}", r.claim_id, r.verdict))?;
    }
    let inst = instance("i1")?;
    let i1 = run(&inst, &axioms, SearchStrategy::Exhaustive)?;
    for claim in ["def2.5.i", "def2.5.ii"] {
        ensure(get(&i1, claim).is_pass(), || format!("i1 {claim} is {}", get(&i1, claim).verdict))?;
    }
    let iv = get(&i1, "def2.5.iv");
    ensure(iv.is_fail() && role(iv, "a") == Some("3"), || format!("i1 def2.5.iv: {iv:?}"))?;
    let iii = get(&i1, "def2.5.iii");
    let golden = golden_result("check_i1", "def2.5.iii")?;
    ensure(iii.verdict == golden.verdict && iii.witness == golden.witness, || {
        format!("i1 def2.5.iii {iii:?} differs from golden {golden:?}")
    })?;
    let oracle = Oracle::new(&inst).axiom_iii();
    let expected: Option<Vec<String>> = oracle.map(|w| w.iter().map(Element::to_string).collect());
    let got: Option<Vec<String>> = iii
        .witness
        .as_ref()
        .map(|w| ["a", "b", "z", "x"].iter().map(|k| w.get(k).unwrap_or("").to_string()).collect());
    ensure(expected == got, || format!("oracle {expected:?}, checker {got:?}"))?;
    Ok(format!(
        "i5 all PASS; i1 i,ii PASS, iv FAIL a=3, iii {} (a,b,z,x)=({}) as pinned",
        iii.verdict,
        got.unwrap_or_default().join(",")
    ))
}

fn golden_result(name: &str, claim: &str) -> Result<CheckReport, String> {
    let g = goldens()
        .into_iter()
        .find(|g| g.name == name)
        .ok_or_else(|| format!("no golden {name}"))?;
    g.document()
        .reports()
        .into_iter()
        .find(|r| r.claim_id == claim)
        .ok_or_else(|| format!("golden {name} lacks {claim}"))
}

fn degeneracy_and_triviality() -> Outcome {
    let i6 = run(&instance("i6")?, &["def2.5.onto", "prop3.1"], SearchStrategy::Exhaustive)?;
    let onto = get(&i6, "def2.5.onto");
    ensure(
        role(onto, "kind") == Some("degenerate") && role(onto, "image") == Some("{inf}"),
        || format!("i6 def2.5.onto: {onto:?}"),
    )?;
    let p31 = get(&i6, "prop3.1");
    ensure(
        p31.is_pass() && p31.note.as_deref().is_some_and(|n| n.contains("consistent")),
        || format!("i6 prop3.1: {p31:?}"),
    )?;
    let strong_field = make_trivial_strong(7).map_err(|e| e.to_string())?;
    let r = run(&strong_field, &["def2.2", "def2.4", "prop3.1"], SearchStrategy::Exhaustive)?;
    for claim in ["def2.2", "def2.4", "prop3.1"] {
        ensure(get(&r, claim).is_pass(), || format!("trivial_strong(7) {claim}: {:?}", get(&r, claim)))?;
    }
    let trivial = get(&r, "prop3.1").note.clone().unwrap_or_default();
    ensure(trivial.contains("trivial up to level"), || format!("triviality note: {trivial}"))?;
    Ok("i6 degenerate image {inf}, prop3.1 consistent; F7 with R_n = R strong and trivial".into())
}

fn consequences_suite() -> Outcome {
    for id in ["i1", "i3", "i5"] {
        let r = run(&instance(id)?, &["prop2.1.i", "prop2.1.ii", "prop2.1.iii"], SearchStrategy::Exhaustive)?;
        for rep in &r {
            ensure(rep.is_pass(), || format!("{id} {} is {}", rep.claim_id, rep.verdict))?;
        }
    }
    let i5 = instance("i5")?;
    let vi = run(&i5, &["prop2.1.vi"], SearchStrategy::Exhaustive)?;
    ensure(vi[0].is_pass(), || format!("i5 prop2.1.vi: {:?}", vi[0]))?;
    let i1_vi = run(&instance("i1")?, &["prop2.1.vi"], SearchStrategy::Exhaustive)?.remove(0);
    let golden = golden_result("check_i1", "prop2.1.vi")?;
    ensure(
        i1_vi.is_fail()
            && role(&i1_vi, "a") == Some("3")
            && role(&i1_vi, "x") == Some("3")
            && i1_vi.witness == golden.witness,
        || format!("i1 prop2.1.vi: {i1_vi:?}"),
    )?;
    let nu = DerivedValuation::new(&i5);
    let (pair, report) = valuation_pair(&nu, &SearchStrategy::Exhaustive).map_err(|e| e.to_string())?;
    let field: BTreeSet<Element> = i5.ring_elements().map_err(|e| e.to_string())?.iter().cloned().collect();
    let zero: BTreeSet<Element> = [Element::Residue(0)].into();
    ensure(pair.a.members() == Some(&field), || format!("A = {}", pair.a.label()))?;
    ensure(pair.p.members() == Some(&zero), || format!("P = {}", pair.p.label()))?;
    ensure(report.is_pass(), || format!("i5 prop2.1.vii: {report:?}"))?;
    Ok("i,ii,iii PASS on i1,i3,i5; vi PASS on i5, FAIL (3,3) on i1; vii on i5 A = F7, P = {0}".into())
}

fn pair_closed_form() -> Outcome {
    let inst = instance("i4")?;
    let nu = DerivedValuation::new(&inst);
    let strategy = SearchStrategy::bounded(1, 500, 8);
    let (pair, report) = valuation_pair(&nu, &strategy).map_err(|e| e.to_string())?;
    ensure(report.is_pass(), || format!("i4 prop2.1.vii: {report:?}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let module = inst.module();
    // probes: units, powers of 3 and a few of their multiples
    let probes: Vec<Element> = (0..12)
        .flat_map(|k| [3i128.pow(k), 2 * 3i128.pow(k), -(3i128.pow(k))])
        .map(Element::Int)
        .collect();
    for _ in 0..500 {
        let a: i128 = rng.random_range(-100_000..100_000);
        let ae = Element::Int(a);
        let raises = probes.iter().all(|x| {
            let (vax, vx) = (nu.nu(&module.act(&ae, x)).unwrap(), nu.nu(x).unwrap());
            vax >= vx
        });
        let strict = probes.iter().all(|x| nu.nu(&module.act(&ae, x)).unwrap() > nu.nu(x).unwrap());
        ensure(pair.a.contains(&ae) && raises, || format!("{a} should lie in A"))?;
        ensure(pair.p.contains(&ae) == (a % 3 == 0), || format!("P membership of {a}"))?;
        ensure(strict == (a % 3 == 0), || format!("sampled definition disagrees on {a}"))?;
        ensure(pair.core.contains(&ae) == (a == 0), || format!("core membership of {a}"))?;
    }
    ensure(pair.core.contains(&Element::Int(0)), || "0 outside the core".into())?;
    Ok("A = Z, P = 3Z, core = {0} on 500 seeded samples".into())
}

fn skeleton_criterion() -> Outcome {
    let mut reps_seen = Vec::new();
    for (id, expected) in [("i1", vec!["1", "3"]), ("i5", vec!["1"])] {
        let inst = instance(id)?;
        let nu = DerivedValuation::new(&inst);
        let all = inst.module_elements().map_err(|e| e.to_string())?;
        let sk = compute_skeleton(&nu, all, &SearchStrategy::Exhaustive).map_err(|e| e.to_string())?;
        let reps: Vec<String> = sk.representatives.iter().map(Element::to_string).collect();
        ensure(reps == expected, || format!("{id} skeleton {reps:?}"))?;
        reps_seen.push(format!("{id} [{}]", reps.join(",")));
    }
    let i5 = run(&instance("i5")?, &["prop3.3.i", "prop3.3.ii", "prop3.4"], SearchStrategy::Exhaustive)?;
    for r in &i5 {
        ensure(r.is_pass(), || format!("i5 {}: {r:?}", r.claim_id))?;
    }
    let i1 = run(&instance("i1")?, &["prop3.3.i", "prop3.3.ii", "prop3.4"], SearchStrategy::Exhaustive)?;
    let p33i = get(&i1, "prop3.3.i");
    ensure(
        p33i.is_fail() && role(p33i, "x") == Some("3") && role(p33i, "y") == Some("1"),
        || format!("i1 prop3.3.i: {p33i:?}"),
    )?;
    ensure(get(&i1, "prop3.3.ii").is_pass(), || format!("i1 prop3.3.ii: {:?}", get(&i1, "prop3.3.ii")))?;
    let p34 = get(&i1, "prop3.4");
    ensure(
        p34.is_fail() && role(p34, "a1") == Some("0") && role(p34, "a2") == Some("3"),
        || format!("i1 prop3.4: {p34:?}"),
    )?;
    Ok(format!("{}; i1 prop3.3.i FAIL (3,1), prop3.4 FAIL (0,3); the rest PASS", reps_seen.join(", ")))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let all = goldens();
    for g in &all {
        let cfg = g.run_config();
        let doc = |_: ()| match g.command.as_str() {
            "skeleton" => skeleton_document(&cfg),
            _ => check_document(&cfg),
        };
        let first = doc(()).and_then(|d| d.body()).map_err(|e| e.to_string())?;
        let second = doc(()).and_then(|d| d.body()).map_err(|e| e.to_string())?;
        ensure(first == second, || format!("{} differs between runs", g.name))?;

        let out_a = dir.path().join(format!("{}_a.json", g.name));
        let out_b = dir.path().join(format!("{}_b.json", g.name));
        for out in [&out_a, &out_b] {
            let run = filtval(&[
                &g.command,
                "--config",
                g.config.to_str().unwrap(),
                "--out",
                out.to_str().unwrap(),
                "--expect",
                g.report.to_str().unwrap(),
            ]);
            ensure(run.status.code() == Some(0), || {
                format!("{} golden comparison exited {:?}", g.name, run.status.code())
            })?;
        }
        let read = |p: &std::path::Path| {
            std::fs::read_to_string(p)
                .map_err(|e| e.to_string())
                .and_then(|t| body_of_text(&t).map_err(|e| e.to_string()))
        };
        ensure(read(&out_a)? == read(&out_b)?, || format!("{} binary runs differ", g.name))?;
    }
    Ok(format!("{} goldens: identical bodies across runs, all comparisons exit 0", all.len()))
}

fn replay_soundness() -> Outcome {
    let mut replayed = 0;
    for g in goldens() {
        let inst = g.run_config().build_instance().map_err(|e| e.to_string())?;
        for r in g.document().reports().iter().filter(|r| r.verdict == Verdict::Fail) {
            let ok = replay_report(&inst, r).map_err(|e| format!("{} {}: {e}", g.name, r.claim_id))?;
            ensure(ok, || format!("{} {} witness does not replay", g.name, r.claim_id))?;
            replayed += 1;
        }
    }
    Ok(format!("{replayed} FAIL witnesses replayed, 0 discrepancies"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("filtration axioms", filtration_axioms),
        ("derived valuation table", valuation_table),
        ("valuation axiom suite", valuation_axioms),
        ("degeneracy and triviality", degeneracy_and_triviality),
        ("consequences of the axioms", consequences_suite),
        ("valuation pair closed form", pair_closed_form),
        ("skeleton", skeleton_criterion),
        ("determinism", determinism),
        ("replay soundness", replay_soundness),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {} ({name}): PASS: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
