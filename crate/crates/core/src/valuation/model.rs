//! Index tables over a finite instance.
//!
//! Elements are addressed by their position in element order, so the least
//! index is the least element and scanning indices upward finds the
//! first counterexample in element order.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::algebra::{Element, ExtendedValue};
use crate::instances::FilteredInstance;

use super::derived::{DerivedValuation, ValueSet};

/// Ring elements with identical action profiles `x ↦ ν(ax)`.
#[derive(Debug, Clone)]
pub struct ProfileGroup {
    /// Least member.
    pub rep: usize,
    pub members: Vec<usize>,
}

pub struct FiniteModel<'a> {
    inst: &'a FilteredInstance,
    ring: &'a [Element],
    module: &'a [Element],
    ring_index: HashMap<&'a Element, usize>,
    module_index: HashMap<&'a Element, usize>,
    nu: Vec<ExtendedValue>,
    act: Vec<u32>,
    neg: Vec<u32>,
    add: OnceLock<Vec<u32>>,
    groups: Vec<ProfileGroup>,
    group_of: Vec<usize>,
    /// Distinct values of ν in increasing order.
    values: Vec<ExtendedValue>,
    class_of: Vec<usize>,
    tainted: bool,
}

impl<'a> FiniteModel<'a> {
    pub(crate) fn build(valuation: &DerivedValuation<'a>) -> Option<Self> {
        let inst = valuation.instance();
        let ring = inst.ring().elements()?;
        let module = inst.module().elements()?;
        let ring_index: HashMap<&Element, usize> =
            ring.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let module_index: HashMap<&Element, usize> =
            module.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let locate = |e: &Element| -> u32 {
            *module_index
                .get(e)
                .unwrap_or_else(|| panic!("{e} escaped the module carrier of {}", inst.id()))
                as u32
        };

        let nu: Vec<ExtendedValue> = module.iter().map(|x| valuation.scan(x)).collect();
        let tainted = nu.iter().any(|v| !v.is_exact());
        let mut act = Vec::with_capacity(ring.len() * module.len());
        for r in ring {
            for x in module {
                act.push(locate(&inst.module().act(r, x)));
            }
        }
        let neg = module.iter().map(|x| locate(&inst.module().neg(x))).collect();

        let mut groups: Vec<ProfileGroup> = Vec::new();
        let mut by_profile: HashMap<Vec<ExtendedValue>, usize> = HashMap::new();
        let mut group_of = Vec::with_capacity(ring.len());
        for a in 0..ring.len() {
            let profile: Vec<ExtendedValue> = act[a * module.len()..(a + 1) * module.len()]
                .iter()
                .map(|&i| nu[i as usize])
                .collect();
            let g = *by_profile.entry(profile).or_insert_with(|| {
                groups.push(ProfileGroup {
                    rep: a,
                    members: Vec::new(),
                });
                groups.len() - 1
            });
            groups[g].members.push(a);
            group_of.push(g);
        }

        let mut values = nu.clone();
        values.sort();
        values.dedup();
        let class_of = nu
            .iter()
            .map(|v| values.binary_search(v).unwrap())
            .collect();

        Some(FiniteModel {
            inst,
            ring,
            module,
            ring_index,
            module_index,
            nu,
            act,
            neg,
            add: OnceLock::new(),
            groups,
            group_of,
            values,
            class_of,
            tainted,
        })
    }

    pub fn instance(&self) -> &'a FilteredInstance {
        self.inst
    }

    /// Whether some value on the carrier came from a capped scan.
    pub fn tainted(&self) -> bool {
        self.tainted
    }

    pub fn ring_len(&self) -> usize {
        self.ring.len()
    }

    pub fn module_len(&self) -> usize {
        self.module.len()
    }

    pub fn ring_indices(&self) -> std::ops::Range<usize> {
        0..self.ring.len()
    }

    pub fn module_indices(&self) -> std::ops::Range<usize> {
        0..self.module.len()
    }

    pub fn ring_element(&self, a: usize) -> &'a Element {
        &self.ring[a]
    }

    pub fn module_element(&self, x: usize) -> &'a Element {
        &self.module[x]
    }

    pub fn ring_index(&self, r: &Element) -> usize {
        self.ring_index[r]
    }

    pub fn module_index(&self, x: &Element) -> usize {
        self.module_index[x]
    }

    pub fn nu(&self, x: usize) -> ExtendedValue {
        self.nu[x]
    }

    pub fn act(&self, a: usize, x: usize) -> usize {
        self.act[a * self.module.len() + x] as usize
    }

    /// `ν(a·x)`.
    pub fn nu_act(&self, a: usize, x: usize) -> ExtendedValue {
        self.nu[self.act(a, x)]
    }

    pub fn neg(&self, x: usize) -> usize {
        self.neg[x] as usize
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        let n = self.module.len();
        let table = self.add.get_or_init(|| {
            let mut t = Vec::with_capacity(n * n);
            for x in self.module {
                for y in self.module {
                    t.push(self.module_index[&self.inst.module().add(x, y)] as u32);
                }
            }
            t
        });
        table[x * n + y] as usize
    }

    pub fn module_zero(&self) -> usize {
        self.module_index(&self.inst.module().zero())
    }

    pub fn ring_mul(&self, a: usize, b: usize) -> usize {
        self.ring_index(&self.inst.ring().mul(&self.ring[a], &self.ring[b]))
    }

    pub fn ring_add(&self, a: usize, b: usize) -> usize {
        self.ring_index(&self.inst.ring().add(&self.ring[a], &self.ring[b]))
    }

    pub fn ring_neg(&self, a: usize) -> usize {
        self.ring_index(&self.inst.ring().neg(&self.ring[a]))
    }

    pub fn ring_zero(&self) -> usize {
        self.ring_index(&self.inst.ring().zero())
    }

    pub fn ring_one(&self) -> usize {
        self.ring_index(&self.inst.ring().one())
    }

    /// Profile groups ordered by their least member.
    pub fn groups(&self) -> &[ProfileGroup] {
        &self.groups
    }

    pub fn group_of(&self, a: usize) -> usize {
        self.group_of[a]
    }

    pub fn values(&self) -> &[ExtendedValue] {
        &self.values
    }

    /// Position of `ν(x)` in [`FiniteModel::values`].
    pub fn class(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn in_core(&self, x: usize) -> bool {
        self.nu[x].is_infinite()
    }

    pub fn orbit(&self, y: usize) -> ValueSet {
        ValueSet::from_values(self.ring_indices().map(|a| self.nu_act(a, y)))
    }
}
