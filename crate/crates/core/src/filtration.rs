//! Filtrations as level-membership oracles, and the filtered-ring,
//! filtered-module and strong-filtration checkers.
//!
//! `RₙMₘ` in the strong-filtration condition is read as the additive
//! subgroup generated by the products `rm`, not the bare product set.

use std::collections::HashSet;
use std::sync::Arc;

use crate::algebra::Element;
use crate::error::{Error, Result};
use crate::instances::FilteredInstance;
use crate::report::{CheckReport, Search, SearchStrategy, Witness, DEFAULT_LEVEL_BOUND};

/// Answers "is `x` in level `n`".
pub trait Filtration: Send + Sync {
    fn level_member(&self, x: &Element, n: u32) -> bool;

    /// A finite additive generating set of level `n`, when one is known.
    fn level_generators(&self, _n: u32) -> Option<Vec<Element>> {
        None
    }
}

/// Levels `pⁿR` on `ℤ` or on residues modulo some `m`.
#[derive(Debug, Clone)]
pub struct PowerFiltration {
    p: u64,
}

impl PowerFiltration {
    pub fn new(p: u64) -> Self {
        PowerFiltration { p }
    }
}

impl Filtration for PowerFiltration {
    fn level_member(&self, x: &Element, n: u32) -> bool {
        match x {
            Element::Int(v) => match (self.p as i128).checked_pow(n) {
                Some(pn) => v % pn == 0,
                None => *v == 0,
            },
            // Residues are taken modulo a power of p, where pⁿℤ/pᵏ is the
            // set of residues divisible by pⁿ (just {0} once n ≥ k).
            Element::Residue(r) => {
                if *r == 0 {
                    return true;
                }
                let mut rest = *r;
                for _ in 0..n {
                    if rest % self.p != 0 {
                        return false;
                    }
                    rest /= self.p;
                }
                true
            }
            _ => false,
        }
    }

    fn level_generators(&self, n: u32) -> Option<Vec<Element>> {
        (self.p as i128)
            .checked_pow(n)
            .map(|pn| vec![Element::Int(pn)])
    }
}

/// Levels `(xⁿ)` on truncated polynomials.
#[derive(Debug, Clone, Copy)]
pub struct XAdicFiltration;

impl Filtration for XAdicFiltration {
    fn level_member(&self, x: &Element, n: u32) -> bool {
        match x {
            Element::Poly(c) => c.iter().take(n as usize).all(|&v| v == 0),
            _ => false,
        }
    }
}

/// Level 0 is everything, every later level is `{0}`.
#[derive(Debug, Clone)]
pub struct TrivialTailFiltration {
    zero: Element,
}

impl TrivialTailFiltration {
    pub fn new(zero: Element) -> Self {
        TrivialTailFiltration { zero }
    }
}

impl Filtration for TrivialTailFiltration {
    fn level_member(&self, x: &Element, n: u32) -> bool {
        n == 0 || *x == self.zero
    }
}

/// Every level is the whole carrier.
#[derive(Debug, Clone, Copy)]
pub struct ConstantFiltration;

impl Filtration for ConstantFiltration {
    fn level_member(&self, _x: &Element, _n: u32) -> bool {
        true
    }
}

/// `(Mⁿ)ₖ = (Mₖ)ⁿ` on tuples.
pub struct ComponentwiseFiltration {
    base: Arc<dyn Filtration>,
}

impl ComponentwiseFiltration {
    pub fn new(base: Arc<dyn Filtration>) -> Self {
        ComponentwiseFiltration { base }
    }
}

impl Filtration for ComponentwiseFiltration {
    fn level_member(&self, x: &Element, n: u32) -> bool {
        match x {
            Element::Tuple(parts) => parts.iter().all(|p| self.base.level_member(p, n)),
            _ => false,
        }
    }
}

/// A filtration given by an arbitrary predicate; used for fixtures.
pub struct FnFiltration<F>(pub F);

impl<F> Filtration for FnFiltration<F>
where
    F: Fn(&Element, u32) -> bool + Send + Sync,
{
    fn level_member(&self, x: &Element, n: u32) -> bool {
        (self.0)(x, n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Side {
    Ring,
    Module,
}

/// Uniform view over the ring or the module of an instance.
#[derive(Clone, Copy)]
pub(crate) struct Carrier<'a> {
    pub inst: &'a FilteredInstance,
    pub side: Side,
}

impl<'a> Carrier<'a> {
    pub fn new(inst: &'a FilteredInstance, side: Side) -> Self {
        Carrier { inst, side }
    }

    pub fn zero(&self) -> Element {
        match self.side {
            Side::Ring => self.inst.ring().zero(),
            Side::Module => self.inst.module().zero(),
        }
    }

    pub fn add(&self, x: &Element, y: &Element) -> Element {
        match self.side {
            Side::Ring => self.inst.ring().add(x, y),
            Side::Module => self.inst.module().add(x, y),
        }
    }

    pub fn neg(&self, x: &Element) -> Element {
        match self.side {
            Side::Ring => self.inst.ring().neg(x),
            Side::Module => self.inst.module().neg(x),
        }
    }

    /// The ring acting on this carrier: multiplication or scalar action.
    pub fn act(&self, r: &Element, x: &Element) -> Element {
        match self.side {
            Side::Ring => self.inst.ring().mul(r, x),
            Side::Module => self.inst.module().act(r, x),
        }
    }

    pub fn member(&self, x: &Element, n: u32) -> bool {
        match self.side {
            Side::Ring => self.inst.ring_filtration().level_member(x, n),
            Side::Module => self.inst.module_filtration().level_member(x, n),
        }
    }

    /// Generators of level `n` as elements of this carrier. Filtrations
    /// state generators over the integers, so a generator outside the
    /// carrier is read through the carrier's parser (`9` becomes `0` in
    /// `ℤ/9`). `None` when some generator has no such reading.
    pub fn generators(&self, n: u32) -> Option<Vec<Element>> {
        let gens = match self.side {
            Side::Ring => self.inst.ring_filtration().level_generators(n),
            Side::Module => self.inst.module_filtration().level_generators(n),
        }?;
        gens.into_iter()
            .map(|g| match self.side {
                Side::Ring if self.inst.ring().contains(&g) => Some(g),
                Side::Module if self.inst.module().contains(&g) => Some(g),
                Side::Ring => self.inst.parse_ring(&g.to_string()).ok(),
                Side::Module => self.inst.parse_module(&g.to_string()).ok(),
            })
            .collect()
    }

    pub fn elements(&self) -> Result<&'a [Element]> {
        match self.side {
            Side::Ring => self.inst.ring_elements(),
            Side::Module => self.inst.module_elements(),
        }
    }

    pub fn sample(&self, rng: &mut rand_chacha::ChaCha8Rng, level_bound: u32) -> Element {
        match self.side {
            Side::Ring => self.inst.ring().sample(rng, level_bound),
            Side::Module => self.inst.module().sample(rng, level_bound),
        }
    }

    /// Highest level `≤ bound` reached by scanning upward from 0.
    pub fn top(&self, x: &Element, bound: u32) -> u32 {
        let mut n = 0;
        while n < bound && self.member(x, n + 1) {
            n += 1;
        }
        n
    }

    fn claim(&self, item: &str) -> String {
        match self.side {
            Side::Ring => format!("def2.1.{item}"),
            Side::Module => format!("def2.3.{item}"),
        }
    }

    fn role(&self) -> &'static str {
        match self.side {
            Side::Ring => "s",
            Side::Module => "x",
        }
    }
}

/// Levels scanned by the filtration checkers.
pub fn check_depth(inst: &FilteredInstance, strategy: &SearchStrategy) -> u32 {
    match strategy {
        SearchStrategy::Exhaustive => inst.stabilization_depth().unwrap_or(DEFAULT_LEVEL_BOUND) + 2,
        SearchStrategy::BoundedRandom { level_bound, .. } => *level_bound,
    }
}

pub(crate) fn require_capability(inst: &FilteredInstance, strategy: &SearchStrategy) -> Result<()> {
    if strategy.is_exhaustive() && !inst.finite() {
        return Err(Error::Capability(format!(
            "exhaustive search requested on infinite instance {}",
            inst.id()
        )));
    }
    Ok(())
}

/// `R₀ = R`, `Rₙ₊₁ ⊆ Rₙ` with every level an additive subgroup, and `RₙRₘ ⊆ Rₙ₊ₘ`.
pub fn check_filtered_ring(inst: &FilteredInstance, strategy: &SearchStrategy) -> Result<Vec<CheckReport>> {
    check_filtered(Carrier::new(inst, Side::Ring), strategy)
}

/// `M₀ = M`, `Mₙ₊₁ ⊆ Mₙ` with every level an additive subgroup, and `RₙMₘ ⊆ Mₙ₊ₘ`.
pub fn check_filtered_module(inst: &FilteredInstance, strategy: &SearchStrategy) -> Result<Vec<CheckReport>> {
    check_filtered(Carrier::new(inst, Side::Module), strategy)
}

fn check_filtered(c: Carrier<'_>, strategy: &SearchStrategy) -> Result<Vec<CheckReport>> {
    require_capability(c.inst, strategy)?;
    let depth = check_depth(c.inst, strategy);
    let ring = Carrier::new(c.inst, Side::Ring);

    let (elements, ring_elements): (Vec<Element>, Vec<Element>) = match strategy {
        SearchStrategy::Exhaustive => (c.elements()?.to_vec(), ring.elements()?.to_vec()),
        SearchStrategy::BoundedRandom { samples, .. } => {
            let mut rng = strategy.rng();
            let xs = (0..*samples).map(|_| c.sample(&mut rng, depth)).collect();
            let rs = (0..*samples).map(|_| ring.sample(&mut rng, depth)).collect();
            (xs, rs)
        }
    };

    let mut level_zero = Search::new();
    for x in &elements {
        if !c.member(x, 0) {
            level_zero.fail(Witness::new().element("x", x));
            break;
        }
    }

    let mut nested = Search::new();
    'antitone: for x in &elements {
        for n in 0..depth {
            if c.member(x, n + 1) && !c.member(x, n) {
                nested.fail(Witness::new().label("kind", "antitone").element("x", x).level("n", n));
                break 'antitone;
            }
        }
    }
    let tops: Vec<u32> = elements.iter().map(|x| c.top(x, depth)).collect();
    if !nested.found() {
        let zero = c.zero();
        if let Some(n) = (0..=depth).find(|&n| !c.member(&zero, n)) {
            nested.fail(Witness::new().label("kind", "zero").level("n", n));
        }
    }
    if !nested.found() {
        for (x, &t) in elements.iter().zip(&tops) {
            if !c.member(&c.neg(x), t) {
                nested.fail(Witness::new().label("kind", "neg").element("x", x).level("n", t));
                break;
            }
        }
    }
    if !nested.found() {
        match strategy {
            SearchStrategy::Exhaustive => {
                'pairs: for (x, &tx) in elements.iter().zip(&tops) {
                    for (y, &ty) in elements.iter().zip(&tops) {
                        let n = tx.min(ty);
                        if !c.member(&c.add(x, y), n) {
                            nested.fail(add_witness(x, y, n));
                            break 'pairs;
                        }
                    }
                }
            }
            SearchStrategy::BoundedRandom { .. } => {
                for (i, x) in elements.iter().enumerate() {
                    let j = (i * 7 + 3) % elements.len();
                    let y = &elements[j];
                    let n = tops[i].min(tops[j]);
                    if !c.member(&c.add(x, y), n) {
                        nested.fail(add_witness(x, y, n));
                        break;
                    }
                }
            }
        }
    }

    let ring_tops: Vec<u32> = ring_elements.iter().map(|r| ring.top(r, depth)).collect();
    let mut product = Search::new();
    let mut check_pair = |r: &Element, tr: u32, x: &Element, tx: u32| -> bool {
        let rx = c.act(r, x);
        if c.member(&rx, tr + tx) {
            return false;
        }
        let (n, m) = (0..=tr)
            .flat_map(|n| (0..=tx).map(move |m| (n, m)))
            .find(|&(n, m)| !c.member(&rx, n + m))
            .unwrap_or((tr, tx));
        product.fail(
            Witness::new()
                .element("r", r)
                .element(c.role(), x)
                .level("n", n)
                .level("m", m),
        );
        true
    };
    match strategy {
        SearchStrategy::Exhaustive => {
            'outer: for (r, &tr) in ring_elements.iter().zip(&ring_tops) {
                for (x, &tx) in elements.iter().zip(&tops) {
                    if check_pair(r, tr, x, tx) {
                        break 'outer;
                    }
                }
            }
        }
        SearchStrategy::BoundedRandom { .. } => {
            for ((r, &tr), (x, &tx)) in ring_elements.iter().zip(&ring_tops).zip(elements.iter().zip(&tops)) {
                if check_pair(r, tr, x, tx) {
                    break;
                }
            }
        }
    }

    let levels = format!("levels 0..={depth}");
    Ok(vec![
        level_zero.finish(&c.claim("i"), *strategy),
        nested.finish(&c.claim("ii"), *strategy).with_note(levels.clone()),
        product.finish(&c.claim("iii"), *strategy).with_note(levels),
    ])
}

fn add_witness(x: &Element, y: &Element, n: u32) -> Witness {
    Witness::new()
        .label("kind", "add")
        .element("x", x)
        .element("y", y)
        .level("n", n)
}

/// Additive subgroup generated by `generators` inside a finite group.
pub(crate) fn generated_subgroup(
    c: &Carrier<'_>,
    generators: impl IntoIterator<Item = Element>,
) -> HashSet<Element> {
    let zero = c.zero();
    let mut members: Vec<Element> = vec![zero.clone()];
    let mut set: HashSet<Element> = HashSet::from([zero]);
    for g in generators {
        if set.contains(&g) {
            continue;
        }
        // ⟨S, g⟩ is the union of the cosets S + kg up to the order of g mod S.
        let base = members.clone();
        let mut shift = g.clone();
        while !set.contains(&shift) {
            for b in &base {
                let e = c.add(b, &shift);
                if set.insert(e.clone()) {
                    members.push(e);
                }
            }
            shift = c.add(&shift, &g);
        }
    }
    set
}

/// `⟨RₙRₘ⟩ = Rₙ₊ₘ` (claim `def2.2`) and `⟨RₙMₘ⟩ = Mₙ₊ₘ` (claim `def2.4`).
pub fn check_strong(inst: &FilteredInstance, strategy: &SearchStrategy) -> Result<Vec<CheckReport>> {
    require_capability(inst, strategy)?;
    Ok(vec![
        check_strong_side(Carrier::new(inst, Side::Ring), strategy)?,
        check_strong_side(Carrier::new(inst, Side::Module), strategy)?,
    ])
}

pub fn check_strong_ring(inst: &FilteredInstance, strategy: &SearchStrategy) -> Result<CheckReport> {
    require_capability(inst, strategy)?;
    check_strong_side(Carrier::new(inst, Side::Ring), strategy)
}

pub fn check_strong_module(inst: &FilteredInstance, strategy: &SearchStrategy) -> Result<CheckReport> {
    require_capability(inst, strategy)?;
    check_strong_side(Carrier::new(inst, Side::Module), strategy)
}

fn check_strong_side(c: Carrier<'_>, strategy: &SearchStrategy) -> Result<CheckReport> {
    let claim = match c.side {
        Side::Ring => "def2.2",
        Side::Module => "def2.4",
    };
    let depth = check_depth(c.inst, strategy);
    let ring = Carrier::new(c.inst, Side::Ring);
    let mut search = Search::new();

    match strategy {
        SearchStrategy::Exhaustive => {
            let ring_levels: Vec<Vec<Element>> = (0..=depth)
                .map(|n| Ok(ring.elements()?.iter().filter(|r| ring.member(r, n)).cloned().collect()))
                .collect::<Result<_>>()?;
            let all = c.elements()?;
            let level = |n: u32| -> Vec<&Element> { all.iter().filter(|x| c.member(x, n)).collect() };
            let levels: Vec<Vec<&Element>> = (0..=depth).map(level).collect();
            'levels: for n in 0..=depth {
                for m in 0..=depth {
                    let products: HashSet<Element> = ring_levels[n as usize]
                        .iter()
                        .flat_map(|r| levels[m as usize].iter().map(move |x| c.act(r, x)))
                        .collect();
                    let mut products: Vec<Element> = products.into_iter().collect();
                    products.sort();
                    let generated = generated_subgroup(&c, products);
                    let target = level(n + m);
                    let missing = target.iter().find(|x| !generated.contains(**x));
                    let mut extra: Vec<&Element> =
                        generated.iter().filter(|x| !c.member(x, n + m)).collect();
                    extra.sort();
                    let bad = match (missing, extra.first()) {
                        (Some(x), Some(y)) if y < x => Some((*y, "extra")),
                        (Some(x), _) => Some((*x, "missing")),
                        (None, Some(y)) => Some((*y, "extra")),
                        (None, None) => None,
                    };
                    if let Some((x, side)) = bad {
                        search.fail(
                            Witness::new()
                                .level("n", n)
                                .level("m", m)
                                .element("x", x)
                                .label("side", side),
                        );
                        break 'levels;
                    }
                }
            }
            Ok(search.finish(claim, *strategy).with_note(format!("level pairs up to {depth}")))
        }
        SearchStrategy::BoundedRandom { .. } => {
            // Sound only in one direction: a generator of Rₙ₊ₘ that is ± a
            // product of generators proves ⊇; anything else stays undecided.
            'levels: for n in 0..=depth {
                for m in 0..=depth.saturating_sub(n) {
                    let (Some(gr), Some(gm), Some(target)) =
                        (ring.generators(n), c.generators(m), c.generators(n + m))
                    else {
                        search.undecided(format!("no level generators for ({n},{m})"));
                        break 'levels;
                    };
                    let products: Vec<Element> =
                        gr.iter().flat_map(|r| gm.iter().map(move |x| c.act(r, x))).collect();
                    if let Some(p) = products.iter().find(|p| !c.member(p, n + m)) {
                        search.fail(
                            Witness::new()
                                .level("n", n)
                                .level("m", m)
                                .element("x", p)
                                .label("side", "extra"),
                        );
                        break 'levels;
                    }
                    for t in &target {
                        let negated = c.neg(t);
                        if !products.iter().any(|p| p == t || *p == negated) {
                            search.undecided(format!(
                                "generator {t} of level {} not matched by a product",
                                n + m
                            ));
                            break 'levels;
                        }
                    }
                }
            }
            Ok(search
                .finish(claim, *strategy)
                .with_note(format!("generator check within level bound {depth}")))
        }
    }
}
