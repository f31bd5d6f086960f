//! The catalog of concrete filtered rings and modules.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{
    DirectSum, Element, ExtendedValue, Integers, ModuleOps, RegularModule, RingOps, TruncatedPoly,
    Zmod,
};
use crate::error::{Error, Result};
use crate::filtration::{
    ComponentwiseFiltration, ConstantFiltration, Filtration, PowerFiltration,
    TrivialTailFiltration, XAdicFiltration,
};
use crate::valuation::ValueSet;

/// Instance-provided closed forms used where enumeration is impossible.
pub trait ClosedForms: Send + Sync {
    /// `ν(Ry)` as a function of `ν(y)`.
    fn value_orbit(&self, _nu_y: ExtendedValue) -> Option<ValueSet> {
        None
    }
    fn in_pair_ring(&self, _a: &Element) -> Option<bool> {
        None
    }
    fn in_pair_ideal(&self, _a: &Element) -> Option<bool> {
        None
    }
    fn in_core(&self, _x: &Element) -> Option<bool> {
        None
    }
    fn in_core_colon(&self, _a: &Element) -> Option<bool> {
        None
    }
    fn describe_pair(&self) -> Option<(String, String)> {
        None
    }
}

/// `ℤ` with the `p`-adic filtration: `ν(ay) = ν(a) + ν(y)`.
#[derive(Debug)]
pub struct PadicIntegerForms {
    p: u64,
}

impl ClosedForms for PadicIntegerForms {
    fn value_orbit(&self, nu_y: ExtendedValue) -> Option<ValueSet> {
        Some(match nu_y.finite() {
            Some(v) => ValueSet::ray(v),
            None => ValueSet::infinity_only(),
        })
    }

    fn in_pair_ring(&self, a: &Element) -> Option<bool> {
        matches!(a, Element::Int(_)).then_some(true)
    }

    fn in_pair_ideal(&self, a: &Element) -> Option<bool> {
        match a {
            Element::Int(v) => Some(v % self.p as i128 == 0),
            _ => None,
        }
    }

    fn in_core(&self, x: &Element) -> Option<bool> {
        match x {
            Element::Int(v) => Some(*v == 0),
            _ => None,
        }
    }

    fn in_core_colon(&self, a: &Element) -> Option<bool> {
        self.in_core(a)
    }

    fn describe_pair(&self) -> Option<(String, String)> {
        Some(("Z".into(), format!("{}Z", self.p)))
    }
}

/// A ring, a module over it, a filtration on each, and the metadata the
/// checkers rely on. Immutable after construction.
pub struct FilteredInstance {
    id: String,
    ring: Arc<dyn RingOps>,
    module: Arc<dyn ModuleOps>,
    ring_filtration: Arc<dyn Filtration>,
    module_filtration: Arc<dyn Filtration>,
    stabilizes_to_zero: bool,
    stabilization_depth: Option<u32>,
    unit_list: Vec<Element>,
    closed_forms: Option<Arc<dyn ClosedForms>>,
}

impl FilteredInstance {
    pub fn new(
        id: impl Into<String>,
        ring: Arc<dyn RingOps>,
        module: Arc<dyn ModuleOps>,
        ring_filtration: Arc<dyn Filtration>,
        module_filtration: Arc<dyn Filtration>,
    ) -> Self {
        FilteredInstance {
            id: id.into(),
            ring,
            module,
            ring_filtration,
            module_filtration,
            stabilizes_to_zero: false,
            stabilization_depth: None,
            unit_list: Vec::new(),
            closed_forms: None,
        }
    }

    /// Asserts `∩ₙ Mₙ = {0}`.
    pub fn stabilizing_to_zero(mut self) -> Self {
        self.stabilizes_to_zero = true;
        self
    }

    /// Asserts both filtrations are constant from level `depth` on.
    pub fn with_stabilization_depth(mut self, depth: u32) -> Self {
        self.stabilization_depth = Some(depth);
        self
    }

    pub fn with_units(mut self, units: Vec<Element>) -> Self {
        self.unit_list = units;
        self
    }

    pub fn with_closed_forms(mut self, forms: Arc<dyn ClosedForms>) -> Self {
        self.closed_forms = Some(forms);
        self
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn ring(&self) -> &dyn RingOps {
        self.ring.as_ref()
    }

    pub fn module(&self) -> &dyn ModuleOps {
        self.module.as_ref()
    }

    pub fn ring_filtration(&self) -> &dyn Filtration {
        self.ring_filtration.as_ref()
    }

    pub fn module_filtration(&self) -> &dyn Filtration {
        self.module_filtration.as_ref()
    }

    pub fn finite(&self) -> bool {
        self.ring.elements().is_some() && self.module.elements().is_some()
    }

    pub fn carrier_sizes(&self) -> Option<(usize, usize)> {
        Some((self.ring.elements()?.len(), self.module.elements()?.len()))
    }

    pub fn stabilizes_to_zero(&self) -> bool {
        self.stabilizes_to_zero
    }

    pub fn stabilization_depth(&self) -> Option<u32> {
        self.stabilization_depth
    }

    pub fn unit_list(&self) -> &[Element] {
        &self.unit_list
    }

    pub fn closed_forms(&self) -> Option<&dyn ClosedForms> {
        self.closed_forms.as_deref()
    }

    pub fn ring_elements(&self) -> Result<&[Element]> {
        self.ring.elements().ok_or_else(|| {
            Error::Capability(format!("ring of instance {} is not enumerable", self.id))
        })
    }

    pub fn module_elements(&self) -> Result<&[Element]> {
        self.module.elements().ok_or_else(|| {
            Error::Capability(format!("module of instance {} is not enumerable", self.id))
        })
    }

    pub fn parse_ring(&self, s: &str) -> Result<Element> {
        let e = self.ring.parse(s)?;
        self.ensure_ring(&e)?;
        Ok(e)
    }

    pub fn parse_module(&self, s: &str) -> Result<Element> {
        let e = self.module.parse(s)?;
        self.ensure_module(&e)?;
        Ok(e)
    }

    pub fn ensure_ring(&self, a: &Element) -> Result<()> {
        if self.ring.contains(a) {
            Ok(())
        } else {
            Err(Error::ForeignElement {
                element: a.to_string(),
                carrier: "ring",
                instance: self.id.clone(),
            })
        }
    }

    pub fn ensure_module(&self, x: &Element) -> Result<()> {
        if self.module.contains(x) {
            Ok(())
        } else {
            Err(Error::ForeignElement {
                element: x.to_string(),
                carrier: "module",
                instance: self.id.clone(),
            })
        }
    }
}

impl std::fmt::Debug for FilteredInstance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FilteredInstance")
            .field("id", &self.id)
            .field("ring", &self.ring.name())
            .field("module", &self.module.name())
            .field("stabilizes_to_zero", &self.stabilizes_to_zero)
            .field("stabilization_depth", &self.stabilization_depth)
            .finish()
    }
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::BadParameter(format!("{p} is not prime")))
    }
}

fn regular(ring: Arc<dyn RingOps>) -> Arc<dyn ModuleOps> {
    Arc::new(RegularModule::new(ring))
}

/// `ℤ/pᵏ` over itself with levels `(pⁿ)`.
pub fn make_zmod_padic(p: u64, k: u32) -> Result<FilteredInstance> {
    require_prime(p)?;
    if k == 0 {
        return Err(Error::BadParameter("exponent must be at least 1".into()));
    }
    let modulus = p
        .checked_pow(k)
        .filter(|m| *m <= 1 << 20)
        .ok_or_else(|| Error::BadParameter(format!("{p}^{k} is too large")))?;
    let ring: Arc<dyn RingOps> = Arc::new(Zmod::new(modulus)?);
    let filtration: Arc<dyn Filtration> = Arc::new(PowerFiltration::new(p));
    Ok(FilteredInstance::new(
        format!("zmod_padic({p},{k})"),
        ring.clone(),
        regular(ring),
        filtration.clone(),
        filtration,
    )
    .stabilizing_to_zero()
    .with_stabilization_depth(k)
    .with_units(vec![Element::Residue(1), Element::Residue(modulus - 1)]))
}

/// `𝔽_q[x]/(xᴺ)` over itself with levels `(xⁿ)`.
pub fn make_poly_truncated(q: u64, n: usize) -> Result<FilteredInstance> {
    require_prime(q)?;
    let ring: Arc<dyn RingOps> = Arc::new(TruncatedPoly::new(q, n)?);
    let filtration: Arc<dyn Filtration> = Arc::new(XAdicFiltration);
    let one = ring.one();
    Ok(FilteredInstance::new(
        format!("poly_truncated({q},{n})"),
        ring.clone(),
        regular(ring),
        filtration.clone(),
        filtration,
    )
    .stabilizing_to_zero()
    .with_stabilization_depth(n as u32)
    .with_units(vec![one]))
}

/// `ℤ` over itself with the `p`-adic levels `(pⁿ)`.
pub fn make_int_padic(p: u64) -> Result<FilteredInstance> {
    require_prime(p)?;
    let ring: Arc<dyn RingOps> = Arc::new(Integers::new(Some(p)));
    let filtration: Arc<dyn Filtration> = Arc::new(PowerFiltration::new(p));
    Ok(FilteredInstance::new(
        format!("int_padic({p})"),
        ring.clone(),
        regular(ring),
        filtration.clone(),
        filtration,
    )
    .stabilizing_to_zero()
    .with_units(vec![Element::Int(1), Element::Int(-1)])
    .with_closed_forms(Arc::new(PadicIntegerForms { p })))
}

/// `𝔽_q` with `R₀ = 𝔽_q` and `Rₙ = {0}` for `n ≥ 1`.
pub fn make_field_trivial_tail(q: u64) -> Result<FilteredInstance> {
    require_prime(q)?;
    let ring: Arc<dyn RingOps> = Arc::new(Zmod::new(q)?);
    let filtration: Arc<dyn Filtration> = Arc::new(TrivialTailFiltration::new(ring.zero()));
    let units = ring.elements().unwrap()[1..].to_vec();
    Ok(FilteredInstance::new(
        format!("field_trivial_tail({q})"),
        ring.clone(),
        regular(ring),
        filtration.clone(),
        filtration,
    )
    .stabilizing_to_zero()
    .with_stabilization_depth(1)
    .with_units(units))
}

/// `ℤ/m` with every level equal to the whole ring.
pub fn make_trivial_strong(modulus: u64) -> Result<FilteredInstance> {
    let ring: Arc<dyn RingOps> = Arc::new(Zmod::new(modulus)?);
    let filtration: Arc<dyn Filtration> = Arc::new(ConstantFiltration);
    Ok(FilteredInstance::new(
        format!("trivial_strong({modulus})"),
        ring.clone(),
        regular(ring),
        filtration.clone(),
        filtration,
    )
    .with_stabilization_depth(0)
    .with_units(vec![Element::Residue(1)]))
}

/// `Mᵏ` over the same filtered ring, with `(Mᵏ)ₙ = (Mₙ)ᵏ`.
pub fn make_direct_sum(inst: &FilteredInstance, copies: usize) -> Result<FilteredInstance> {
    let module: Arc<dyn ModuleOps> = Arc::new(DirectSum::new(inst.module.clone(), copies)?);
    let filtration: Arc<dyn Filtration> =
        Arc::new(ComponentwiseFiltration::new(inst.module_filtration.clone()));
    let mut out = FilteredInstance::new(
        format!("direct_sum({},{copies})", inst.id),
        inst.ring.clone(),
        module,
        inst.ring_filtration.clone(),
        filtration,
    )
    .with_units(inst.unit_list.clone());
    out.stabilizes_to_zero = inst.stabilizes_to_zero;
    out.stabilization_depth = inst.stabilization_depth;
    Ok(out)
}

/// Frozen catalog ids.
pub const CATALOG_IDS: [&str; 7] = ["i1", "i2", "i3", "i4", "i5", "i6", "i7"];

pub fn catalog(id: &str) -> Result<FilteredInstance> {
    let mut inst = match id {
        "i1" => make_zmod_padic(3, 2),
        "i2" => make_zmod_padic(2, 3),
        "i3" => make_poly_truncated(5, 4),
        "i4" => make_int_padic(3),
        "i5" => make_field_trivial_tail(7),
        "i6" => make_trivial_strong(4),
        "i7" => make_direct_sum(&catalog("i1")?, 2),
        other => {
            return Err(Error::config(
                "instance",
                format!("unknown catalog id {other:?} (expected one of i1..i7)"),
            ))
        }
    }?;
    inst.id = id.to_string();
    Ok(inst)
}

/// Inline constructor as it appears in config files: `{"kind": ..., "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum Constructor {
    ZmodPadic { p: u64, k: u32 },
    PolyTruncated { q: u64, n: usize },
    IntPadic { p: u64 },
    FieldTrivialTail { q: u64 },
    TrivialStrong { modulus: u64 },
    DirectSum { base: Box<InstanceSpec>, copies: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InstanceSpec {
    Catalog(String),
    Inline(Constructor),
}

impl InstanceSpec {
    pub fn build(&self) -> Result<FilteredInstance> {
        match self {
            InstanceSpec::Catalog(id) => catalog(id),
            InstanceSpec::Inline(c) => match c {
                Constructor::ZmodPadic { p, k } => make_zmod_padic(*p, *k),
                Constructor::PolyTruncated { q, n } => make_poly_truncated(*q, *n),
                Constructor::IntPadic { p } => make_int_padic(*p),
                Constructor::FieldTrivialTail { q } => make_field_trivial_tail(*q),
                Constructor::TrivialStrong { modulus } => make_trivial_strong(*modulus),
                Constructor::DirectSum { base, copies } => make_direct_sum(&base.build()?, *copies),
            },
        }
    }
}
