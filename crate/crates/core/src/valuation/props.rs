//! Consequences of the valuation axioms, checked directly against `ν`
//! rather than inferred from the axiom verdicts.

use crate::algebra::{Element, ExtendedValue, INFINITY};
use crate::error::Result;
use crate::filtration::{check_depth, check_strong, require_capability};
use crate::report::{CheckReport, Search, SearchStrategy, Verdict, Witness};

use super::axioms::{
    check_axiom_i, check_axiom_ii, check_axiom_iii, check_axiom_iv, check_onto_nontrivial,
    check_transfer, model_search, pair_witness, triple_witness, violation,
};
use super::derived::{DerivedValuation, Membership};

/// `ν(x) = ν(y) ⇒ ν(ax) = ν(ay)`; witness `(a, x, y)`.
pub fn check_prop21_i(nu: &DerivedValuation<'_>, strategy: &SearchStrategy) -> Result<CheckReport> {
    let claim = "prop2.1.i";
    let inst = nu.instance();
    require_capability(inst, strategy)?;
    if strategy.is_exhaustive() {
        let m = nu.model()?;
        let mut search = model_search(m);
        let classes = m.values().len();
        'groups: for g in m.groups() {
            let a = g.rep;
            // the value of ν(a·) on the least element of each class
            let mut first: Vec<Option<ExtendedValue>> = vec![None; classes];
            let mut constant = vec![true; classes];
            for y in m.module_indices() {
                let c = m.class(y);
                match first[c] {
                    None => first[c] = Some(m.nu_act(a, y)),
                    Some(v) if v != m.nu_act(a, y) => constant[c] = false,
                    Some(_) => {}
                }
            }
            for x in m.module_indices() {
                if constant[m.class(x)] {
                    continue;
                }
                let y = m
                    .module_indices()
                    .find(|&y| m.class(y) == m.class(x) && m.nu_act(a, y) != m.nu_act(a, x))
                    .expect("class is not constant");
                let values = [m.nu(x), m.nu(y), m.nu_act(a, x), m.nu_act(a, y)];
                let w = || triple_witness(m.ring_element(a), m.module_element(x), m.module_element(y));
                if violation(&mut search, &values, w) {
                    break 'groups;
                }
            }
        }
        return Ok(search.finish(claim, *strategy));
    }
    let mut rng = strategy.rng();
    let mut search = Search::new();
    let (ring, module) = (inst.ring(), inst.module());
    let bound = strategy.level_bound().unwrap_or_default();
    for _ in 0..strategy.samples() {
        let a = ring.sample(&mut rng, bound);
        let x = module.sample(&mut rng, bound);
        // a partner of equal value: a unit multiple when one is designated
        let y = match inst.unit_list().iter().find(|u| ring.contains(u) && **u != ring.one()) {
            Some(u) => module.act(u, &x),
            None => module.sample(&mut rng, bound),
        };
        let values = [
            nu.value(&x),
            nu.value(&y),
            nu.value(&module.act(&a, &x)),
            nu.value(&module.act(&a, &y)),
        ];
        search.observe(&values);
        if values[0] == values[1]
            && values[2] != values[3]
            && violation(&mut search, &values, || triple_witness(&a, &x, &y))
        {
            break;
        }
    }
    Ok(search.finish(claim, *strategy))
}

/// `ν(−x) = ν(x)`; witness `x`.
pub fn check_prop21_ii(nu: &DerivedValuation<'_>, strategy: &SearchStrategy) -> Result<CheckReport> {
    let claim = "prop2.1.ii";
    let inst = nu.instance();
    require_capability(inst, strategy)?;
    let mut search = Search::new();
    let module = inst.module();
    let mut test = |x: &Element| -> bool {
        let (v, w) = (nu.value(x), nu.value(&module.neg(x)));
        search.observe(&[v, w]);
        v != w && violation(&mut search, &[v, w], || Witness::new().element("x", x))
    };
    if strategy.is_exhaustive() {
        for x in inst.module_elements()? {
            if test(x) {
                break;
            }
        }
    } else {
        let mut rng = strategy.rng();
        let bound = strategy.level_bound().unwrap_or_default();
        for _ in 0..strategy.samples() {
            if test(&module.sample(&mut rng, bound)) {
                break;
            }
        }
    }
    Ok(search.finish(claim, *strategy))
}

/// `ν(x) ≠ ν(y) ⇒ ν(x+y) = min{ν(x), ν(y)}`; witness `(x, y)`.
pub fn check_prop21_iii(nu: &DerivedValuation<'_>, strategy: &SearchStrategy) -> Result<CheckReport> {
    let claim = "prop2.1.iii";
    let inst = nu.instance();
    require_capability(inst, strategy)?;
    if strategy.is_exhaustive() {
        let m = nu.model()?;
        let mut search = model_search(m);
        'scan: for x in m.module_indices() {
            for y in m.module_indices() {
                let s = m.add(x, y);
                if m.nu(x) != m.nu(y) && m.nu(s) != m.nu(x).min(m.nu(y)) {
                    let w = || pair_witness(m.module_element(x), m.module_element(y));
                    if violation(&mut search, &[m.nu(x), m.nu(y), m.nu(s)], w) {
                        break 'scan;
                    }
                }
            }
        }
        return Ok(search.finish(claim, *strategy));
    }
    let mut rng = strategy.rng();
    let mut search = Search::new();
    let module = inst.module();
    let bound = strategy.level_bound().unwrap_or_default();
    for _ in 0..strategy.samples() {
        let x = module.sample(&mut rng, bound);
        let y = module.sample(&mut rng, bound);
        let values = [nu.value(&x), nu.value(&y), nu.value(&module.add(&x, &y))];
        search.observe(&values);
        if values[0] != values[1]
            && values[2] != values[0].min(values[1])
            && violation(&mut search, &values, || pair_witness(&x, &y))
        {
            break;
        }
    }
    Ok(search.finish(claim, *strategy))
}

/// `z ∉ ν⁻¹(∞) ∧ ν(az) = ν(bz) ⇒ ν(ax) = ν(bx)` for every `x`.
pub fn check_prop21_iv(nu: &DerivedValuation<'_>, strategy: &SearchStrategy) -> Result<CheckReport> {
    check_transfer(
        nu,
        strategy,
        "prop2.1.iv",
        |az, bz, z| !z.is_infinite() && az == bz,
        |ax, bx, _| ax != bx,
    )
}

/// `ν(az) < ν(bz) ⇒ ν(ax) < ν(bx)` for every `x ∉ ν⁻¹(∞)`.
pub fn check_prop21_v(nu: &DerivedValuation<'_>, strategy: &SearchStrategy) -> Result<CheckReport> {
    check_transfer(
        nu,
        strategy,
        "prop2.1.v",
        |az, bz, _| az < bz,
        |ax, bx, x| !x.is_infinite() && ax >= bx,
    )
}

/// `N` is a prime submodule: a proper submodule with
/// `ax ∈ N ⇒ x ∈ N ∨ aM ⊆ N`.
///
/// The witness carries a `kind`: `improper` when `N = M`, `not_submodule`
/// with the offending operands, or `prime` with `(a, x)` and an element `y`
/// with `ay ∉ N` showing `aM ⊄ N`.
pub fn check_prime_submodule(
    nu: &DerivedValuation<'_>,
    n: &Membership<'_>,
    claim: &str,
    strategy: &SearchStrategy,
) -> Result<CheckReport> {
    let inst = nu.instance();
    require_capability(inst, strategy)?;
    let (ring, module) = (inst.ring(), inst.module());
    let mut search = Search::new();
    if !n.is_exact() {
        search.taint();
    }
    let note = format!("N = {}", n.label());

    let (rs, xs): (Vec<Element>, Vec<Element>) = if strategy.is_exhaustive() {
        (inst.ring_elements()?.to_vec(), inst.module_elements()?.to_vec())
    } else {
        let mut rng = strategy.rng();
        let bound = strategy.level_bound().unwrap_or_default();
        let units = inst.unit_list().iter().filter(|u| module.contains(u)).cloned();
        let xs = units.chain((0..strategy.samples()).map(|_| module.sample(&mut rng, bound))).collect();
        let rs = (0..strategy.samples()).map(|_| ring.sample(&mut rng, bound)).collect();
        (rs, xs)
    };

    if xs.iter().all(|x| n.contains(x)) {
        if strategy.is_exhaustive() {
            search.fail(Witness::new().label("kind", "improper"));
        } else {
            search.undecided("every sampled element lies in N");
        }
        return Ok(search.finish(claim, *strategy).with_note(note));
    }

    let zero = module.zero();
    if !n.contains(&zero) {
        search.fail(Witness::new().label("kind", "not_submodule").element("x", &zero));
    }
    let inside: Vec<&Element> = xs.iter().filter(|x| n.contains(x)).collect();
    'closure: for x in &inside {
        for y in &inside {
            if !n.contains(&module.add(x, y)) {
                search.fail(Witness::new().label("kind", "not_submodule").element("x", x).element("y", y));
                break 'closure;
            }
        }
        for a in &rs {
            if !n.contains(&module.act(a, x)) {
                search.fail(Witness::new().label("kind", "not_submodule").element("a", a).element("x", x));
                break 'closure;
            }
        }
    }

    if !search.found() {
        'prime: for a in &rs {
            // aM ⊆ N is decided lazily, once per a
            let mut escape: Option<Option<&Element>> = None;
            for x in &xs {
                if !n.contains(&module.act(a, x)) || n.contains(x) {
                    continue;
                }
                let y = *escape.get_or_insert_with(|| xs.iter().find(|y| !n.contains(&module.act(a, y))));
                if let Some(y) = y {
                    search.fail(
                        Witness::new()
                            .label("kind", "prime")
                            .element("a", a)
                            .element("x", x)
                            .element("y", y),
                    );
                    break 'prime;
                }
            }
        }
    }
    Ok(search.finish(claim, *strategy).with_note(note))
}

/// The core `ν⁻¹(∞)` is a prime submodule (claim `prop2.1.vi`).
pub fn check_prop21_vi(nu: &DerivedValuation<'_>, strategy: &SearchStrategy) -> Result<CheckReport> {
    check_prime_submodule(nu, &nu.core(), "prop2.1.vi", strategy)
}

/// A valuation whose ring filtration is strong forces `Rᵢ = R` for all `i`
/// (claim `prop3.1`).
///
/// The hypotheses are that both filtrations are strong and that `ν` is a
/// genuine valuation: the four axioms and non-degeneracy all pass. When a
/// hypothesis fails the claim holds vacuously; when one is undecided so is
/// the claim. The note always records whether the ring filtration is trivial.
pub fn check_strong_implies_trivial(nu: &DerivedValuation<'_>, strategy: &SearchStrategy) -> Result<CheckReport> {
    let claim = "prop3.1";
    let inst = nu.instance();
    require_capability(inst, strategy)?;

    let depth = check_depth(inst, strategy);
    let ring = inst.ring();
    let candidates: Vec<Element> = if strategy.is_exhaustive() {
        inst.ring_elements()?.to_vec()
    } else {
        let mut rng = strategy.rng();
        let bound = strategy.level_bound().unwrap_or_default();
        let mut c = vec![ring.one()];
        c.extend((0..strategy.samples()).map(|_| ring.sample(&mut rng, bound)));
        c
    };
    let levels = inst.ring_filtration();
    let below = (1..=depth).find_map(|n| candidates.iter().find(|r| !levels.level_member(r, n)).map(|r| (n, r)));
    let triviality = match below {
        None => format!("ring filtration trivial up to level {depth}"),
        Some((n, r)) => format!("ring filtration not trivial: {r} is outside level {n}"),
    };

    let mut hypotheses = check_strong(inst, strategy)?;
    hypotheses.extend([
        check_axiom_i(nu, strategy)?,
        check_axiom_ii(nu, strategy)?,
        check_axiom_iii(nu, strategy)?,
        check_axiom_iv(nu, strategy)?,
        check_onto_nontrivial(nu, strategy)?,
    ]);
    if let Some(failed) = hypotheses.iter().find(|r| r.is_fail()) {
        let reason = if failed.claim_id == "def2.5.onto" {
            "nu is degenerate, consistent".to_string()
        } else {
            "not strong or not a valuation".to_string()
        };
        return Ok(CheckReport::pass(claim, *strategy)
            .with_note(format!("vacuous: {} fails, {reason}", failed.claim_id))
            .with_note(triviality));
    }
    if let Some(open) = hypotheses.iter().find(|r| r.verdict == Verdict::Inconclusive) {
        return Ok(CheckReport::inconclusive(
            claim,
            *strategy,
            format!("hypothesis {} undecided", open.claim_id),
        )
        .with_note(triviality));
    }
    Ok(match below {
        None => CheckReport::pass(claim, *strategy).with_note(triviality),
        Some((n, r)) => CheckReport::fail(claim, *strategy, Witness::new().level("n", n).element("x", r))
            .with_note("every hypothesis passes")
            .with_note(triviality),
    })
}

/// `ν(ax) ≥ ν(x)` for all `x` in the sample; used where `R₀ = R`.
pub(crate) fn raises_all(nu: &DerivedValuation<'_>, a: &Element, xs: &[Element]) -> bool {
    let module = nu.instance().module();
    xs.iter().all(|x| nu.value(&module.act(a, x)) >= nu.value(x))
}

/// `ν(ax) > ν(x)` for all `x ∉ ν⁻¹(∞)` in the sample.
pub(crate) fn raises_strictly(nu: &DerivedValuation<'_>, a: &Element, xs: &[Element]) -> bool {
    let module = nu.instance().module();
    xs.iter()
        .filter(|x| nu.value(x) != INFINITY)
        .all(|x| nu.value(&module.act(a, x)) > nu.value(x))
}
