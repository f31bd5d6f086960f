//! The `~ν` relation, skeletons, `ν`-independence and the skeleton
//! propositions.
//!
//! `x ~ν y` is taken to mean `ν(x) ∈ ν(Ry)` and `ν(y) ∈ ν(Rx)` on
//! `M ∖ ν⁻¹(∞)`. Nothing guarantees this is an equivalence relation, so
//! every skeleton carries a report on reflexivity, symmetry and
//! transitivity over the elements it was computed from.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::algebra::{Element, ExtendedValue};
use crate::error::{Error, Result};
use crate::filtration::require_capability;
use crate::instances::FilteredInstance;
use crate::report::{CheckReport, Search, SearchStrategy, Witness};
use crate::valuation::{model_search, violation, DerivedValuation, ValueSet};

/// Label recorded with every skeleton: the relation is a chosen reading.
pub const RELATION_CONVENTION: &str = "relation: adopted-convention";

/// Least-first representatives of the `~ν` classes of a sample.
#[derive(Debug, Clone)]
pub struct Skeleton {
    pub representatives: Vec<Element>,
    /// Representative index of every non-core element of the sample.
    pub class_of: BTreeMap<Element, usize>,
    /// Relation axioms over the sample (claim `def2.6`).
    pub relation: CheckReport,
}

impl Skeleton {
    /// Whether the relation axioms held, so the classes really partition.
    pub fn is_partition(&self) -> bool {
        self.relation.is_pass()
    }
}

/// `ν(Ry)` for each element asked about, computed once.
struct Orbits<'n, 'a> {
    nu: &'n DerivedValuation<'a>,
    strategy: SearchStrategy,
    cache: HashMap<Element, ValueSet>,
}

impl<'n, 'a> Orbits<'n, 'a> {
    fn new(nu: &'n DerivedValuation<'a>, strategy: &SearchStrategy) -> Self {
        Orbits {
            nu,
            strategy: *strategy,
            cache: HashMap::new(),
        }
    }

    fn get(&mut self, y: &Element) -> Result<&ValueSet> {
        if !self.cache.contains_key(y) {
            let orbit = self.nu.value_orbit(y, &self.strategy)?;
            self.cache.insert(y.clone(), orbit);
        }
        Ok(&self.cache[y])
    }
}

fn require_finite_value(nu: &DerivedValuation<'_>, x: &Element) -> Result<ExtendedValue> {
    let v = nu.nu(x)?;
    if v.is_infinite() {
        return Err(Error::InfiniteElement(x.to_string()));
    }
    Ok(v)
}

/// `x ~ν y`.
pub fn equivalent(nu: &DerivedValuation<'_>, x: &Element, y: &Element, strategy: &SearchStrategy) -> Result<bool> {
    let (vx, vy) = (require_finite_value(nu, x)?, require_finite_value(nu, y)?);
    let ox = nu.value_orbit(x, strategy)?;
    let oy = nu.value_orbit(y, strategy)?;
    Ok(oy.contains(vx) && ox.contains(vy))
}

/// The elements skeleton claims quantify over: the whole module on finite
/// carriers, otherwise the unit list and seeded samples, sorted.
pub fn skeleton_sample(inst: &FilteredInstance, strategy: &SearchStrategy) -> Result<Vec<Element>> {
    require_capability(inst, strategy)?;
    if strategy.is_exhaustive() {
        return Ok(inst.module_elements()?.to_vec());
    }
    let module = inst.module();
    let mut rng = strategy.rng();
    let bound = strategy.level_bound().unwrap_or_default();
    let set: BTreeSet<Element> = inst
        .unit_list()
        .iter()
        .filter(|u| module.contains(u))
        .cloned()
        .chain((0..strategy.samples()).map(|_| module.sample(&mut rng, bound)))
        .collect();
    Ok(set.into_iter().collect())
}

/// Partitions the non-core part of `sample` by `~ν`, choosing the least
/// element of each class. Errors if an orbit on the sample is inexact.
pub fn compute_skeleton(nu: &DerivedValuation<'_>, sample: &[Element], strategy: &SearchStrategy) -> Result<Skeleton> {
    let mut elements: Vec<Element> = sample.to_vec();
    elements.sort();
    elements.dedup();
    for x in &elements {
        nu.instance().ensure_module(x)?;
    }
    let elements: Vec<Element> = elements.into_iter().filter(|x| !nu.value(x).is_infinite()).collect();

    // ~ν depends on x only through (ν(x), ν(Rx)).
    let mut orbits = Orbits::new(nu, strategy);
    let mut signatures: Vec<(ExtendedValue, ValueSet, Element)> = Vec::new();
    let mut signature_of: Vec<usize> = Vec::with_capacity(elements.len());
    let mut index: HashMap<(ExtendedValue, String), usize> = HashMap::new();
    for x in &elements {
        let orbit = orbits.get(x)?.clone();
        if !orbit.exact {
            return Err(Error::Capability(format!("value orbit of {x} is not exact")));
        }
        let v = nu.value(x);
        let key = (v, orbit.to_string());
        let s = *index.entry(key).or_insert_with(|| {
            signatures.push((v, orbit, x.clone()));
            signatures.len() - 1
        });
        signature_of.push(s);
    }
    let related = |s: usize, t: usize| signatures[t].1.contains(signatures[s].0) && signatures[s].1.contains(signatures[t].0);

    let mut search = Search::new();
    let k = signatures.len();
    'axioms: for s in 0..k {
        if !related(s, s) {
            search.fail(Witness::new().label("kind", "reflexive").element("x", &signatures[s].2));
            break;
        }
        for t in 0..k {
            if related(s, t) != related(t, s) {
                search.fail(
                    Witness::new()
                        .label("kind", "symmetric")
                        .element("x", &signatures[s].2)
                        .element("y", &signatures[t].2),
                );
                break 'axioms;
            }
        }
    }
    if !search.found() {
        'transitive: for s in 0..k {
            for t in (0..k).filter(|&t| related(s, t)) {
                if let Some(u) = (0..k).find(|&u| related(t, u) && !related(s, u)) {
                    search.fail(
                        Witness::new()
                            .label("kind", "transitive")
                            .element("x", &signatures[s].2)
                            .element("y", &signatures[t].2)
                            .element("z", &signatures[u].2),
                    );
                    break 'transitive;
                }
            }
        }
    }
    let mut relation = search
        .finish("def2.6", *strategy)
        .with_note(format!("{RELATION_CONVENTION}; {} elements outside the core", elements.len()));
    if relation.is_fail() {
        relation = relation.with_note("classes are not a partition");
    }

    let mut representatives: Vec<Element> = Vec::new();
    let mut rep_signature: Vec<usize> = Vec::new();
    let mut class_of = BTreeMap::new();
    for (x, &s) in elements.iter().zip(&signature_of) {
        let class = match rep_signature.iter().position(|&r| related(s, r)) {
            Some(c) => c,
            None => {
                representatives.push(x.clone());
                rep_signature.push(s);
                representatives.len() - 1
            }
        };
        class_of.insert(x.clone(), class);
    }
    if representatives.is_empty() {
        relation = relation.with_note("empty skeleton: every element lies in the core");
    }
    Ok(Skeleton {
        representatives,
        class_of,
        relation,
    })
}

/// `S ∩ ν⁻¹(∞) = ∅` and `ν(x) ∉ ν(Ry)` for distinct `x, y ∈ S` (claim
/// `def2.7`, or `prop3.3.i` on a skeleton). A failing pair also records an
/// `a` with `ν(ay) = ν(x)` when one is found.
pub fn check_nu_independent(
    nu: &DerivedValuation<'_>,
    set: &[Element],
    claim: &str,
    strategy: &SearchStrategy,
) -> Result<CheckReport> {
    let inst = nu.instance();
    require_capability(inst, strategy)?;
    for x in set {
        inst.ensure_module(x)?;
    }
    let mut search = Search::new();
    if let Some(x) = set.iter().find(|x| nu.value(x).is_infinite()) {
        let v = nu.value(x);
        violation(&mut search, &[v], || Witness::new().label("kind", "core").element("x", x));
        return Ok(search.finish(claim, *strategy));
    }
    let mut orbits = Orbits::new(nu, strategy);
    'pairs: for x in set {
        for y in set.iter().filter(|y| *y != x) {
            let orbit = orbits.get(y)?;
            if !orbit.exact {
                search.taint();
            }
            let vx = nu.value(x);
            if orbit.contains(vx) {
                let mut w = Witness::new().element("x", x).element("y", y);
                if let Some(a) = orbit_preimage(nu, y, vx, strategy)? {
                    w = w.element("a", &a);
                }
                if orbit.exact {
                    search.fail(w);
                    break 'pairs;
                }
                search.undecided("a dependent pair rests on an inexact orbit");
            }
        }
    }
    let rendered: Vec<String> = set.iter().map(Element::to_string).collect();
    Ok(search
        .finish(claim, *strategy)
        .with_note(format!("S = [{}]", rendered.join(","))))
}

/// The least `a` with `ν(ay) = v`, searched over the ring on finite
/// carriers and over units, level generators and samples otherwise.
fn orbit_preimage(
    nu: &DerivedValuation<'_>,
    y: &Element,
    v: ExtendedValue,
    strategy: &SearchStrategy,
) -> Result<Option<Element>> {
    let inst = nu.instance();
    let (ring, module) = (inst.ring(), inst.module());
    let hits = |a: &Element| nu.value(&module.act(a, y)) == v;
    if inst.finite() {
        return Ok(inst.ring_elements()?.iter().find(|a| hits(a)).cloned());
    }
    let bound = strategy.level_bound().unwrap_or(crate::report::DEFAULT_LEVEL_BOUND);
    let generators = (0..=bound).flat_map(|n| inst.ring_filtration().level_generators(n).unwrap_or_default());
    let mut rng = strategy.rng();
    let samples: Vec<Element> = (0..strategy.samples()).map(|_| ring.sample(&mut rng, bound)).collect();
    Ok(inst
        .unit_list()
        .iter()
        .cloned()
        .chain(std::iter::once(ring.zero()))
        .chain(generators)
        .chain(samples)
        .find(|a| ring.contains(a) && hits(a)))
}

/// Claims `prop3.3.i` and `prop3.3.ii` on a skeleton: `(i)` the representatives are `ν`-independent,
/// `(ii)` every non-core `x` of the sample has exactly one representative
/// `λ` with `ν(Rx) = ν(Rλ)`.
///
/// Item `(ii)` compares whole orbits. The weaker membership reading
/// `ν(x) ∈ ν(Rλ)` is evaluated as well and reported in the note.
pub fn check_prop33(
    nu: &DerivedValuation<'_>,
    skeleton: &Skeleton,
    sample: &[Element],
    strategy: &SearchStrategy,
) -> Result<[CheckReport; 2]> {
    let first = check_nu_independent(nu, &skeleton.representatives, "prop3.3.i", strategy)?;

    let mut orbits = Orbits::new(nu, strategy);
    let mut search = Search::new();
    let mut membership_miss: Option<(Element, usize)> = None;
    let reps = &skeleton.representatives;
    let rep_orbits: Vec<ValueSet> = reps.iter().map(|r| orbits.get(r).cloned()).collect::<Result<_>>()?;
    let mut elements: Vec<&Element> = sample.iter().filter(|x| !nu.value(x).is_infinite()).collect();
    elements.sort();
    elements.dedup();
    for x in elements {
        let orbit = orbits.get(x)?.clone();
        if !orbit.exact {
            search.taint();
        }
        let matches: Vec<&Element> = reps
            .iter()
            .zip(&rep_orbits)
            .filter(|(_, o)| o.same_set(&orbit))
            .map(|(r, _)| r)
            .collect();
        let containing = rep_orbits.iter().filter(|o| o.contains(nu.value(x))).count();
        if containing != 1 && membership_miss.is_none() {
            membership_miss = Some((x.clone(), containing));
        }
        if matches.len() != 1 && !search.found() {
            let listed: Vec<String> = matches.iter().map(|m| m.to_string()).collect();
            search.fail(
                Witness::new()
                    .element("x", x)
                    .label("matches", format!("[{}]", listed.join(",")))
                    .label("representatives", render_list(reps)),
            );
        }
    }
    let note = match membership_miss {
        None => "membership reading nu(x) in nu(R lambda) also unique".to_string(),
        Some((x, n)) => format!("membership reading nu(x) in nu(R lambda) fails: {x} matches {n} representatives"),
    };
    let rendered: Vec<String> = reps.iter().map(Element::to_string).collect();
    let second = search
        .finish("prop3.3.ii", *strategy)
        .with_note(format!("representatives [{}]; orbit equality reading", rendered.join(",")))
        .with_note(note);
    Ok([first, second])
}

fn render_list(xs: &[Element]) -> String {
    let parts: Vec<String> = xs.iter().map(Element::to_string).collect();
    format!("[{}]", parts.join(","))
}

/// Claim `prop3.4`: whenever `a₁λ₁ + ⋯ + aₖλₖ = 0` over distinct representatives
/// with `k ≤ n_max`, every `aᵢ ∈ (ν⁻¹(∞):M)`.
///
/// Representative subsets are visited in lexicographic order of their index
/// lists (`[λ₁]`, `[λ₁,λ₂]`, `[λ₂]`, …) and coefficient tuples in
/// lexicographic order, so the witness is the first vanishing combination
/// with a coefficient outside the colon ideal. It names the offending
/// coefficient `j` and an element `y` with `a_j y ∉ ν⁻¹(∞)`.
pub fn check_prop34(
    nu: &DerivedValuation<'_>,
    skeleton: &Skeleton,
    n_max: usize,
    strategy: &SearchStrategy,
) -> Result<CheckReport> {
    let claim = "prop3.4";
    let inst = nu.instance();
    if !inst.finite() {
        return Err(Error::Capability(format!(
            "{claim} enumerates coefficient tuples and needs a finite instance, not {}",
            inst.id()
        )));
    }
    let m = nu.model()?;
    let mut search = model_search(m);
    let reps: Vec<usize> = skeleton.representatives.iter().map(|r| m.module_index(r)).collect();
    let zero = m.module_zero();
    // a ∉ (ν⁻¹(∞):M) is witnessed by the least y with ν(ay) finite
    let escape: Vec<Option<usize>> = m
        .ring_indices()
        .map(|a| m.module_indices().find(|&y| !m.nu_act(a, y).is_infinite()))
        .collect();
    // a ↦ aλ inverted, for the last coordinate
    let preimages: Vec<HashMap<usize, Vec<usize>>> = reps
        .iter()
        .map(|&lambda| {
            let mut map: HashMap<usize, Vec<usize>> = HashMap::new();
            for a in m.ring_indices() {
                map.entry(m.act(a, lambda)).or_default().push(a);
            }
            map
        })
        .collect();

    let mut subsets: Vec<Vec<usize>> = Vec::new();
    fn extend(prefix: &mut Vec<usize>, start: usize, len: usize, n_max: usize, out: &mut Vec<Vec<usize>>) {
        for i in start..len {
            prefix.push(i);
            out.push(prefix.clone());
            if prefix.len() < n_max {
                extend(prefix, i + 1, len, n_max, out);
            }
            prefix.pop();
        }
    }
    extend(&mut Vec::new(), 0, reps.len(), n_max, &mut subsets);

    let mut combinations: u64 = 0;
    'subsets: for subset in &subsets {
        let k = subset.len();
        let last = subset[k - 1];
        let mut coeffs = vec![0usize; k - 1];
        loop {
            let partial = coeffs
                .iter()
                .zip(subset)
                .fold(zero, |acc, (&a, &i)| m.add(acc, m.act(a, reps[i])));
            let target = m.neg(partial);
            for &ak in preimages[last].get(&target).map(Vec::as_slice).unwrap_or(&[]) {
                combinations += 1;
                let tuple: Vec<usize> = coeffs.iter().copied().chain([ak]).collect();
                if let Some((j, y)) = tuple.iter().enumerate().find_map(|(j, &a)| escape[a].map(|y| (j, y))) {
                    let mut w = Witness::new();
                    for (i, (&a, &r)) in tuple.iter().zip(subset).enumerate() {
                        w = w
                            .element(&format!("a{}", i + 1), m.ring_element(a))
                            .element(&format!("lambda{}", i + 1), m.module_element(reps[r]));
                    }
                    w = w.level("j", j as u32 + 1).element("y", m.module_element(y));
                    let values = [m.nu_act(tuple[j], y)];
                    if violation(&mut search, &values, || w) {
                        break 'subsets;
                    }
                }
            }
            // odometer over the first k-1 coefficients
            let mut pos = k - 1;
            loop {
                if pos == 0 {
                    continue 'subsets;
                }
                pos -= 1;
                coeffs[pos] += 1;
                if coeffs[pos] < m.ring_len() {
                    break;
                }
                coeffs[pos] = 0;
            }
        }
    }
    Ok(search.finish(claim, *strategy).with_note(format!(
        "n_max = {n_max}; {} representative subsets, {combinations} vanishing combinations visited",
        subsets.len()
    )))
}
