//! Brute-force reference evaluation.
//!
//! Everything here is computed from the definitions with nested loops over
//! the carriers, the raw ring and module operations and the level
//! predicates. Nothing from the checkers, the finite model or the closed
//! forms is used. Witnesses are the first violation in nested loop order
//! over the carrier enumeration.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use filtval::algebra::Element;
use filtval::instances::FilteredInstance;

/// Value of a core element.
pub const INF: u64 = u64::MAX;

pub struct Oracle<'a> {
    pub inst: &'a FilteredInstance,
    pub r: Vec<Element>,
    pub m: Vec<Element>,
    pub depth: u32,
    values: HashMap<Element, u64>,
}

impl<'a> Oracle<'a> {
    pub fn new(inst: &'a FilteredInstance) -> Self {
        let r = inst.ring_elements().expect("finite ring").to_vec();
        let m = inst.module_elements().expect("finite module").to_vec();
        let depth = inst.stabilization_depth().expect("finite instance") + 2;
        let mut oracle = Oracle {
            inst,
            r,
            m,
            depth,
            values: HashMap::new(),
        };
        let values = oracle.m.iter().map(|x| (x.clone(), oracle.scan(x))).collect();
        oracle.values = values;
        oracle
    }

    /// `min{i | x ∈ Mᵢ ∖ Mᵢ₊₁}` over the levels up to the depth.
    pub fn scan(&self, x: &Element) -> u64 {
        let f = self.inst.module_filtration();
        (0..=self.depth)
            .find(|&i| f.level_member(x, i) && !f.level_member(x, i + 1))
            .map_or(INF, u64::from)
    }

    pub fn v(&self, x: &Element) -> u64 {
        self.values[x]
    }

    pub fn act(&self, a: &Element, x: &Element) -> Element {
        self.inst.module().act(a, x)
    }

    pub fn va(&self, a: &Element, x: &Element) -> u64 {
        self.v(&self.act(a, x))
    }

    fn add(&self, x: &Element, y: &Element) -> Element {
        self.inst.module().add(x, y)
    }

    /// `ν(a·x)` for every `x`, in carrier order.
    fn row(&self, a: &Element) -> Vec<u64> {
        self.m.iter().map(|x| self.va(a, x)).collect()
    }

    pub fn image(&self) -> BTreeSet<u64> {
        self.m.iter().map(|x| self.v(x)).collect()
    }

    pub fn in_core(&self, x: &Element) -> bool {
        self.v(x) == INF
    }

    /// `a ∈ (ν⁻¹(∞) : M)`.
    pub fn in_colon(&self, a: &Element) -> bool {
        self.m.iter().all(|x| self.va(a, x) == INF)
    }

    // ---- filtrations

    fn ring_level(&self, a: &Element, n: u32) -> bool {
        self.inst.ring_filtration().level_member(a, n)
    }

    fn module_level(&self, x: &Element, n: u32) -> bool {
        self.inst.module_filtration().level_member(x, n)
    }

    /// Level 0 is everything, levels descend and are subgroups, and
    /// `RₙRₘ ⊆ Rₙ₊ₘ`, all up to the depth.
    pub fn ring_filtration_ok(&self) -> [bool; 3] {
        let ring = self.inst.ring();
        let d = self.depth;
        let top = self.r.iter().all(|a| self.ring_level(a, 0));
        let subgroups = (0..=d).all(|n| {
            let level: Vec<&Element> = self.r.iter().filter(|a| self.ring_level(a, n)).collect();
            self.ring_level(&ring.zero(), n)
                && level.iter().all(|a| self.ring_level(a, n.saturating_sub(1)))
                && level
                    .iter()
                    .all(|a| level.iter().all(|b| self.ring_level(&ring.add(a, &ring.neg(b)), n)))
        });
        let products = (0..=d).all(|n| {
            (0..=d).all(|k| {
                self.r.iter().filter(|a| self.ring_level(a, n)).all(|a| {
                    self.r
                        .iter()
                        .filter(|b| self.ring_level(b, k))
                        .all(|b| self.ring_level(&ring.mul(a, b), n + k))
                })
            })
        });
        [top, subgroups, products]
    }

    pub fn module_filtration_ok(&self) -> [bool; 3] {
        let module = self.inst.module();
        let d = self.depth;
        let top = self.m.iter().all(|x| self.module_level(x, 0));
        let subgroups = (0..=d).all(|n| {
            let level: Vec<&Element> = self.m.iter().filter(|x| self.module_level(x, n)).collect();
            self.module_level(&module.zero(), n)
                && level.iter().all(|x| self.module_level(x, n.saturating_sub(1)))
                && level
                    .iter()
                    .all(|x| level.iter().all(|y| self.module_level(&module.add(x, &module.neg(y)), n)))
        });
        let products = (0..=d).all(|n| {
            (0..=d).all(|k| {
                self.r.iter().filter(|a| self.ring_level(a, n)).all(|a| {
                    self.m
                        .iter()
                        .filter(|x| self.module_level(x, k))
                        .all(|x| self.module_level(&module.act(a, x), n + k))
                })
            })
        });
        [top, subgroups, products]
    }

    /// `Rₙ·Lₘ` generates `Lₙ₊ₘ` for all `n, m` up to the depth, where `L` is
    /// the ring (`module = false`) or the module filtration.
    pub fn strong(&self, module: bool) -> bool {
        let d = self.depth;
        let carrier: &[Element] = if module { &self.m } else { &self.r };
        let member = |x: &Element, n| if module { self.module_level(x, n) } else { self.ring_level(x, n) };
        let add = |x: &Element, y: &Element| {
            if module {
                self.inst.module().add(x, y)
            } else {
                self.inst.ring().add(x, y)
            }
        };
        let zero = if module { self.inst.module().zero() } else { self.inst.ring().zero() };
        for n in 0..=d {
            for k in 0..=d {
                let mut span: BTreeSet<Element> = BTreeSet::from([zero.clone()]);
                let mut products = Vec::new();
                for a in self.r.iter().filter(|a| self.ring_level(a, n)) {
                    for x in carrier.iter().filter(|x| member(x, k)) {
                        products.push(if module {
                            self.act(a, x)
                        } else {
                            self.inst.ring().mul(a, x)
                        });
                    }
                }
                // closure under adding generators and their negatives
                let negs: Vec<Element> = products
                    .iter()
                    .map(|p| {
                        if module {
                            self.inst.module().neg(p)
                        } else {
                            self.inst.ring().neg(p)
                        }
                    })
                    .collect();
                loop {
                    let before = span.len();
                    let current: Vec<Element> = span.iter().cloned().collect();
                    for s in &current {
                        for g in products.iter().chain(&negs) {
                            span.insert(add(s, g));
                        }
                    }
                    if span.len() == before {
                        break;
                    }
                }
                let level: BTreeSet<Element> = carrier.iter().filter(|x| member(x, n + k)).cloned().collect();
                if span != level {
                    return false;
                }
            }
        }
        true
    }

    /// Every ring level up to the depth is the whole ring.
    pub fn ring_filtration_trivial(&self) -> bool {
        (0..=self.depth).all(|n| self.r.iter().all(|a| self.ring_level(a, n)))
    }

    // ---- valuation axioms, first violations

    pub fn axiom_i(&self) -> Option<[Element; 2]> {
        for x in &self.m {
            for y in &self.m {
                if self.v(&self.add(x, y)) < self.v(x).min(self.v(y)) {
                    return Some([x.clone(), y.clone()]);
                }
            }
        }
        None
    }

    pub fn axiom_ii(&self) -> Option<[Element; 3]> {
        let vals: Vec<u64> = self.m.iter().map(|x| self.v(x)).collect();
        for a in &self.r {
            let row = self.row(a);
            for (i, x) in self.m.iter().enumerate() {
                for (j, y) in self.m.iter().enumerate() {
                    if vals[i] <= vals[j] && row[i] > row[j] {
                        return Some([a.clone(), x.clone(), y.clone()]);
                    }
                }
            }
        }
        None
    }

    /// First `(a, b, z, x)` with `antecedent(ν(az), ν(bz), ν(z))` and
    /// `violated(ν(ax), ν(bx), ν(x))`.
    pub fn transfer(
        &self,
        antecedent: impl Fn(u64, u64, u64) -> bool,
        violated: impl Fn(u64, u64, u64) -> bool,
    ) -> Option<[Element; 4]> {
        for a in &self.r {
            let ra = self.row(a);
            for b in &self.r {
                let rb = self.row(b);
                for (k, z) in self.m.iter().enumerate() {
                    if !antecedent(ra[k], rb[k], self.v(z)) {
                        continue;
                    }
                    for (i, x) in self.m.iter().enumerate() {
                        if violated(ra[i], rb[i], self.v(x)) {
                            return Some([a.clone(), b.clone(), z.clone(), x.clone()]);
                        }
                    }
                }
            }
        }
        None
    }

    pub fn axiom_iii(&self) -> Option<[Element; 4]> {
        self.transfer(|az, bz, z| z != INF && az <= bz, |ax, bx, _| ax > bx)
    }

    /// First `a` outside the colon ideal with no `a′` making `a′a` preserve
    /// every value, with the first `y` such that `ν(ay) < ∞`.
    pub fn axiom_iv(&self) -> Option<[Element; 2]> {
        let ring = self.inst.ring();
        for a in &self.r {
            let Some(y) = self.m.iter().find(|y| self.va(a, y) != INF) else {
                continue;
            };
            let inverted = self.r.iter().any(|a2| {
                let b = ring.mul(a2, a);
                self.m.iter().all(|x| self.va(&b, x) == self.v(x))
            });
            if !inverted {
                return Some([a.clone(), y.clone()]);
            }
        }
        None
    }

    pub fn degenerate(&self) -> bool {
        self.image() == BTreeSet::from([INF])
    }

    // ---- consequences of the axioms

    pub fn prop21_i(&self) -> Option<[Element; 3]> {
        let vals: Vec<u64> = self.m.iter().map(|x| self.v(x)).collect();
        for a in &self.r {
            let row = self.row(a);
            for (i, x) in self.m.iter().enumerate() {
                for (j, y) in self.m.iter().enumerate() {
                    if vals[i] == vals[j] && row[i] != row[j] {
                        return Some([a.clone(), x.clone(), y.clone()]);
                    }
                }
            }
        }
        None
    }

    pub fn prop21_ii(&self) -> Option<Element> {
        let module = self.inst.module();
        self.m.iter().find(|x| self.v(&module.neg(x)) != self.v(x)).cloned()
    }

    pub fn prop21_iii(&self) -> Option<[Element; 2]> {
        for x in &self.m {
            for y in &self.m {
                let (vx, vy) = (self.v(x), self.v(y));
                if vx != vy && self.v(&self.add(x, y)) != vx.min(vy) {
                    return Some([x.clone(), y.clone()]);
                }
            }
        }
        None
    }

    pub fn prop21_iv(&self) -> Option<[Element; 4]> {
        self.transfer(|az, bz, z| z != INF && az == bz, |ax, bx, _| ax != bx)
    }

    pub fn prop21_v(&self) -> Option<[Element; 4]> {
        self.transfer(|az, bz, _| az < bz, |ax, bx, x| x != INF && ax >= bx)
    }

    /// Whether the core is a proper submodule, and the first prime
    /// violation `(a, x)` with `ax` in the core, `x` outside it and `aM` not
    /// inside it.
    pub fn core_proper(&self) -> bool {
        self.m.iter().any(|x| !self.in_core(x))
    }

    pub fn core_prime_violation(&self) -> Option<[Element; 2]> {
        for a in &self.r {
            if self.in_colon(a) {
                continue;
            }
            for x in &self.m {
                if self.in_core(&self.act(a, x)) && !self.in_core(x) {
                    return Some([a.clone(), x.clone()]);
                }
            }
        }
        None
    }

    /// `(A, P)` by definition.
    pub fn pair(&self) -> (Vec<Element>, Vec<Element>) {
        let a = self
            .r
            .iter()
            .filter(|a| self.m.iter().all(|x| self.va(a, x) >= self.v(x)))
            .cloned()
            .collect();
        let p = self
            .r
            .iter()
            .filter(|a| self.m.iter().filter(|x| !self.in_core(x)).all(|x| self.va(a, x) > self.v(x)))
            .cloned()
            .collect();
        (a, p)
    }

    // ---- skeletons

    /// `{ν(ay) : a ∈ R}`.
    pub fn orbit(&self, y: &Element) -> BTreeSet<u64> {
        self.r.iter().map(|a| self.va(a, y)).collect()
    }

    pub fn related(&self, x: &Element, y: &Element) -> bool {
        self.orbit(y).contains(&self.v(x)) && self.orbit(x).contains(&self.v(y))
    }

    /// Least-first representatives under the relation.
    pub fn skeleton(&self) -> Vec<Element> {
        let mut reps: Vec<Element> = Vec::new();
        for x in self.m.iter().filter(|x| !self.in_core(x)) {
            if !reps.iter().any(|r| self.related(x, r)) {
                reps.push(x.clone());
            }
        }
        reps
    }

    /// Whether the relation is an equivalence on the non-core elements.
    pub fn relation_is_equivalence(&self) -> bool {
        let xs: Vec<&Element> = self.m.iter().filter(|x| !self.in_core(x)).collect();
        xs.iter().all(|x| self.related(x, x))
            && xs.iter().all(|x| xs.iter().all(|y| self.related(x, y) == self.related(y, x)))
            && xs.iter().all(|x| {
                xs.iter()
                    .filter(|y| self.related(x, y))
                    .all(|y| xs.iter().filter(|z| self.related(y, z)).all(|z| self.related(x, z)))
            })
    }

    /// First ordered pair `(x, y)` of distinct set members with
    /// `ν(x) ∈ ν(Ry)`, or a core member.
    pub fn dependent_pair(&self, set: &[Element]) -> Option<Vec<Element>> {
        if let Some(x) = set.iter().find(|x| self.in_core(x)) {
            return Some(vec![x.clone()]);
        }
        for x in set {
            for y in set.iter().filter(|y| *y != x) {
                if self.orbit(y).contains(&self.v(x)) {
                    return Some(vec![x.clone(), y.clone()]);
                }
            }
        }
        None
    }

    /// Whether each non-core element has exactly one representative with
    /// the same orbit.
    pub fn unique_orbit_match(&self, reps: &[Element]) -> bool {
        self.m.iter().filter(|x| !self.in_core(x)).all(|x| {
            let ox = self.orbit(x);
            reps.iter().filter(|r| self.orbit(r) == ox).count() == 1
        })
    }

    /// Whether some vanishing combination `Σ aᵢλᵢ = 0` over at most `n_max`
    /// distinct representatives has a coefficient outside the colon ideal.
    pub fn prop34_violated(&self, reps: &[Element], n_max: usize) -> bool {
        let module = self.inst.module();
        let colon: Vec<bool> = self.r.iter().map(|a| self.in_colon(a)).collect();
        let mut subsets: Vec<Vec<usize>> = vec![vec![]];
        for i in 0..reps.len() {
            let grown: Vec<Vec<usize>> = subsets
                .iter()
                .filter(|s| s.len() < n_max)
                .map(|s| {
                    let mut s = s.clone();
                    s.push(i);
                    s
                })
                .collect();
            subsets.extend(grown);
        }
        for subset in subsets.iter().filter(|s| !s.is_empty()) {
            let mut coeffs = vec![0usize; subset.len()];
            loop {
                let sum = subset.iter().zip(&coeffs).fold(module.zero(), |acc, (&l, &c)| {
                    self.add(&acc, &self.act(&self.r[c], &reps[l]))
                });
                if module.is_zero(&sum) && coeffs.iter().any(|&c| !colon[c]) {
                    return true;
                }
                let mut pos = 0;
                loop {
                    if pos == coeffs.len() {
                        break;
                    }
                    coeffs[pos] += 1;
                    if coeffs[pos] < self.r.len() {
                        break;
                    }
                    coeffs[pos] = 0;
                    pos += 1;
                }
                if pos == coeffs.len() {
                    break;
                }
            }
        }
        false
    }
}
