use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use crate::algebra::{Element, ExtendedValue, INFINITY};
use crate::error::{Error, Result};
use crate::instances::FilteredInstance;
use crate::report::SearchStrategy;

use super::model::FiniteModel;

/// Upper limit of the membership scan on carriers without a stabilization depth.
pub const DEFAULT_NU_CAP: u32 = 128;

/// Samples used for value orbits on infinite carriers without a closed form.
const ORBIT_SAMPLES: usize = 256;

/// `ν(t) = min{i | t ∈ Mᵢ ∖ Mᵢ₊₁}` computed by scanning levels upward.
///
/// The scan is exact on instances with a stabilization depth and at zero on
/// instances whose levels intersect to `{0}`. Anything else that survives
/// `cap` levels becomes `Infinite { exact: false }`.
pub struct DerivedValuation<'a> {
    instance: &'a FilteredInstance,
    cap: u32,
    cache: RwLock<HashMap<Element, ExtendedValue>>,
    model: OnceLock<Option<FiniteModel<'a>>>,
}

impl<'a> DerivedValuation<'a> {
    pub fn new(instance: &'a FilteredInstance) -> Self {
        DerivedValuation::with_cap(instance, DEFAULT_NU_CAP)
    }

    pub fn with_cap(instance: &'a FilteredInstance, cap: u32) -> Self {
        DerivedValuation {
            instance,
            cap,
            cache: RwLock::new(HashMap::new()),
            model: OnceLock::new(),
        }
    }

    pub fn instance(&self) -> &'a FilteredInstance {
        self.instance
    }

    pub fn nu(&self, x: &Element) -> Result<ExtendedValue> {
        self.instance.ensure_module(x)?;
        Ok(self.value(x))
    }

    pub fn nu_uncached(&self, x: &Element) -> Result<ExtendedValue> {
        self.instance.ensure_module(x)?;
        Ok(self.scan(x))
    }

    /// Cached `ν` of an element already known to lie in the module.
    pub(crate) fn value(&self, x: &Element) -> ExtendedValue {
        if let Some(v) = self.cache.read().unwrap().get(x) {
            return *v;
        }
        let v = self.scan(x);
        self.cache.write().unwrap().insert(x.clone(), v);
        v
    }

    pub(crate) fn scan(&self, x: &Element) -> ExtendedValue {
        let inst = self.instance;
        let levels = inst.module_filtration();
        if inst.stabilizes_to_zero() && inst.module().is_zero(x) {
            return INFINITY;
        }
        let limit = inst.stabilization_depth().unwrap_or(self.cap);
        let mut here = levels.level_member(x, 0);
        for i in 0..limit {
            let next = levels.level_member(x, i + 1);
            if here && !next {
                return ExtendedValue::Finite(i);
            }
            here = next;
        }
        ExtendedValue::Infinite {
            exact: inst.stabilization_depth().is_some(),
        }
    }

    /// Lookup tables over the whole carrier; errors on infinite instances.
    pub fn model(&self) -> Result<&FiniteModel<'a>> {
        self.model
            .get_or_init(|| FiniteModel::build(self))
            .as_ref()
            .ok_or_else(|| {
                Error::Capability(format!(
                    "instance {} is not finite",
                    self.instance.id()
                ))
            })
    }

    /// `ν(Ry) = {ν(ay) : a ∈ R}`.
    pub fn value_orbit(&self, y: &Element, strategy: &SearchStrategy) -> Result<ValueSet> {
        self.instance.ensure_module(y)?;
        if self.instance.finite() {
            let model = self.model()?;
            return Ok(model.orbit(model.module_index(y)));
        }
        let nu_y = self.value(y);
        if let Some(orbit) = self
            .instance
            .closed_forms()
            .and_then(|f| f.value_orbit(nu_y))
        {
            return Ok(ValueSet {
                exact: orbit.exact && nu_y.is_exact(),
                ..orbit
            });
        }
        let (samples, bound) = match strategy {
            SearchStrategy::BoundedRandom {
                samples,
                level_bound,
                ..
            } => (*samples, *level_bound),
            SearchStrategy::Exhaustive => (ORBIT_SAMPLES, crate::report::DEFAULT_LEVEL_BOUND),
        };
        let mut rng = strategy.rng();
        let ring = self.instance.ring();
        let module = self.instance.module();
        let mut values: Vec<ExtendedValue> = vec![self.value(y), self.value(&module.act(&ring.zero(), y))];
        for _ in 0..samples {
            let a = ring.sample(&mut rng, bound);
            values.push(self.value(&module.act(&a, y)));
        }
        let mut set = ValueSet::from_values(values);
        set.exact = false;
        Ok(set)
    }

    /// The core `ν⁻¹(∞)`.
    pub fn core(&self) -> Membership<'a> {
        let inst = self.instance;
        if inst.finite() {
            if let Ok(model) = self.model() {
                let members = model
                    .module_indices()
                    .filter(|&x| model.nu(x).is_infinite())
                    .map(|x| model.module_element(x).clone());
                return Membership::explicit(members, !model.tainted());
            }
        }
        if let Some(forms) = inst.closed_forms() {
            if forms.in_core(&inst.module().zero()).is_some() {
                return Membership::rule("closed form", true, move |x: &Element| {
                    forms.in_core(x).unwrap_or(false)
                });
            }
        }
        if inst.stabilizes_to_zero() {
            let zero = inst.module().zero();
            return Membership::rule("{0}", true, move |x: &Element| *x == zero);
        }
        Membership::rule("nu = inf (scan)", false, {
            let probe = DerivedValuation::with_cap(inst, self.cap);
            let cache = Arc::new(RwLock::new(HashMap::new()));
            move |x: &Element| {
                if let Some(v) = cache.read().unwrap().get(x) {
                    return *v;
                }
                let v = probe.scan(x).is_infinite();
                cache.write().unwrap().insert(x.clone(), v);
                v
            }
        })
    }

    /// `(N : M) = {a ∈ R : aM ⊆ N}`.
    ///
    /// Exact on finite carriers; elsewhere decided on `ORBIT_SAMPLES` sampled
    /// module elements and flagged inexact.
    pub fn colon(&self, n: &Membership<'a>) -> Result<Membership<'a>> {
        let inst = self.instance;
        if inst.finite() {
            let model = self.model()?;
            let members = model
                .ring_indices()
                .filter(|&a| {
                    model
                        .module_indices()
                        .all(|x| n.contains(model.module_element(model.act(a, x))))
                })
                .map(|a| model.ring_element(a).clone());
            return Ok(Membership::explicit(members, n.is_exact()));
        }
        let mut rng = SearchStrategy::bounded(0, ORBIT_SAMPLES, 0).rng();
        let probes: Vec<Element> = (0..ORBIT_SAMPLES)
            .map(|_| inst.module().sample(&mut rng, crate::report::DEFAULT_LEVEL_BOUND))
            .chain(inst.unit_list().iter().filter(|u| inst.module().contains(u)).cloned())
            .collect();
        let n = n.clone();
        Ok(Membership::rule("bounded search", false, move |a: &Element| {
            probes.iter().all(|x| n.contains(&inst.module().act(a, x)))
        }))
    }

    /// `(ν⁻¹(∞) : M)`, using the instance closed form when there is one.
    pub fn core_colon(&self) -> Result<Membership<'a>> {
        let inst = self.instance;
        if !inst.finite() {
            if let Some(forms) = inst.closed_forms() {
                if forms.in_core_colon(&inst.ring().zero()).is_some() {
                    return Ok(Membership::rule("closed form", true, move |a: &Element| {
                        forms.in_core_colon(a).unwrap_or(false)
                    }));
                }
            }
        }
        self.colon(&self.core())
    }

    /// The image of `ν` on a finite carrier.
    pub fn image(&self) -> Result<BTreeSet<ExtendedValue>> {
        let model = self.model()?;
        Ok(model.module_indices().map(|x| model.nu(x)).collect())
    }
}

/// A set of values `finite_points ∪ [ray_from, ∞) ∪ {∞}?`, kept normalized
/// so that structural equality is set equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueSet {
    pub finite_points: BTreeSet<u32>,
    pub ray_from: Option<u32>,
    pub contains_infinity: bool,
    pub exact: bool,
}

impl ValueSet {
    pub fn from_values(values: impl IntoIterator<Item = ExtendedValue>) -> Self {
        let mut set = ValueSet {
            finite_points: BTreeSet::new(),
            ray_from: None,
            contains_infinity: false,
            exact: true,
        };
        for v in values {
            if !v.is_exact() {
                set.exact = false;
            }
            match v {
                ExtendedValue::Finite(n) => {
                    set.finite_points.insert(n);
                }
                ExtendedValue::Infinite { .. } => set.contains_infinity = true,
            }
        }
        set
    }

    /// `{v, v+1, …} ∪ {∞}`.
    pub fn ray(from: u32) -> Self {
        ValueSet {
            finite_points: BTreeSet::new(),
            ray_from: Some(from),
            contains_infinity: true,
            exact: true,
        }
    }

    pub fn infinity_only() -> Self {
        ValueSet::from_values([INFINITY])
    }

    pub fn contains(&self, v: ExtendedValue) -> bool {
        match v {
            ExtendedValue::Finite(n) => {
                self.finite_points.contains(&n) || self.ray_from.is_some_and(|r| n >= r)
            }
            ExtendedValue::Infinite { .. } => self.contains_infinity,
        }
    }

    fn normalized(&self) -> (BTreeSet<u32>, Option<u32>, bool) {
        let mut points = self.finite_points.clone();
        let mut ray = self.ray_from;
        if let Some(mut r) = ray {
            points.retain(|&p| p < r);
            while r > 0 && points.remove(&(r - 1)) {
                r -= 1;
            }
            ray = Some(r);
        }
        (points, ray, self.contains_infinity)
    }

    /// Set equality, ignoring exactness.
    pub fn same_set(&self, other: &ValueSet) -> bool {
        self.normalized() == other.normalized()
    }
}

impl fmt::Display for ValueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (points, ray, inf) = self.normalized();
        let mut parts: Vec<String> = points.iter().map(u32::to_string).collect();
        if let Some(r) = ray {
            parts.push(format!(">={r}"));
        }
        if inf {
            parts.push("inf".into());
        }
        write!(f, "{{{}}}", parts.join(","))
    }
}

type Test<'a> = Arc<dyn Fn(&Element) -> bool + Send + Sync + 'a>;

/// Membership in a subset of a carrier: explicit on finite carriers,
/// a predicate elsewhere.
#[derive(Clone)]
pub struct Membership<'a> {
    label: String,
    exact: bool,
    members: Option<BTreeSet<Element>>,
    test: Test<'a>,
}

impl<'a> Membership<'a> {
    pub fn explicit(members: impl IntoIterator<Item = Element>, exact: bool) -> Self {
        let members: BTreeSet<Element> = members.into_iter().collect();
        let label = render_set(&members);
        let shared = Arc::new(members.clone());
        Membership {
            label,
            exact,
            members: Some(members),
            test: Arc::new(move |x| shared.contains(x)),
        }
    }

    pub fn rule(
        label: impl Into<String>,
        exact: bool,
        test: impl Fn(&Element) -> bool + Send + Sync + 'a,
    ) -> Self {
        Membership {
            label: label.into(),
            exact,
            members: None,
            test: Arc::new(test),
        }
    }

    pub fn contains(&self, x: &Element) -> bool {
        (self.test)(x)
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn members(&self) -> Option<&BTreeSet<Element>> {
        self.members.as_ref()
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

impl fmt::Debug for Membership<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Membership")
            .field("label", &self.label)
            .field("exact", &self.exact)
            .finish()
    }
}

/// `{a,b,c}` for small sets, `<n elements>` otherwise.
pub(crate) fn render_set<'e>(members: impl IntoIterator<Item = &'e Element>) -> String {
    let members: Vec<&Element> = members.into_iter().collect();
    if members.len() > 16 {
        return format!("<{} elements>", members.len());
    }
    let parts: Vec<String> = members.iter().map(|m| m.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}
