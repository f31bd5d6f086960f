//! Ring and module laws checked on the carriers of an instance.

use rand::Rng;

use crate::algebra::{Element, ModuleOps, RingOps};
use crate::error::{Error, Result};
use crate::instances::FilteredInstance;
use crate::report::{CheckReport, Search, SearchStrategy, Witness};

/// Largest argument space a single law is enumerated over in full.
pub const LAW_BUDGET: usize = 1 << 21;
/// Seeded argument tuples per law once the space exceeds the budget.
pub const LAW_SAMPLES: usize = 1 << 18;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Law {
    AddAssoc,
    AddComm,
    AddZero,
    AddNeg,
    MulAssoc,
    MulComm,
    MulOne,
    Distributive,
    ModuleAddAssoc,
    ModuleAddComm,
    ModuleAddZero,
    ModuleAddNeg,
    ActOverRingSum,
    ActOverModuleSum,
    ActCompose,
    ActOne,
}

impl Law {
    pub const ALL: [Law; 16] = [
        Law::AddAssoc,
        Law::AddComm,
        Law::AddZero,
        Law::AddNeg,
        Law::MulAssoc,
        Law::MulComm,
        Law::MulOne,
        Law::Distributive,
        Law::ModuleAddAssoc,
        Law::ModuleAddComm,
        Law::ModuleAddZero,
        Law::ModuleAddNeg,
        Law::ActOverRingSum,
        Law::ActOverModuleSum,
        Law::ActCompose,
        Law::ActOne,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Law::AddAssoc => "add_assoc",
            Law::AddComm => "add_comm",
            Law::AddZero => "add_zero",
            Law::AddNeg => "add_neg",
            Law::MulAssoc => "mul_assoc",
            Law::MulComm => "mul_comm",
            Law::MulOne => "mul_one",
            Law::Distributive => "distributive",
            Law::ModuleAddAssoc => "module_add_assoc",
            Law::ModuleAddComm => "module_add_comm",
            Law::ModuleAddZero => "module_add_zero",
            Law::ModuleAddNeg => "module_add_neg",
            Law::ActOverRingSum => "act_ring_sum",
            Law::ActOverModuleSum => "act_module_sum",
            Law::ActCompose => "act_compose",
            Law::ActOne => "act_one",
        }
    }

    pub fn from_name(name: &str) -> Option<Law> {
        Law::ALL.into_iter().find(|l| l.name() == name)
    }

    /// Number of ring and module arguments.
    pub fn arity(self) -> (usize, usize) {
        match self {
            Law::AddAssoc | Law::MulAssoc | Law::Distributive => (3, 0),
            Law::AddComm | Law::MulComm => (2, 0),
            Law::AddZero | Law::AddNeg | Law::MulOne => (1, 0),
            Law::ModuleAddAssoc => (0, 3),
            Law::ModuleAddComm => (0, 2),
            Law::ModuleAddZero | Law::ModuleAddNeg => (0, 1),
            Law::ActOverRingSum | Law::ActCompose => (2, 1),
            Law::ActOverModuleSum => (1, 2),
            Law::ActOne => (0, 1),
        }
    }

    /// Witness role of each argument, ring arguments first.
    pub fn roles(self) -> Vec<&'static str> {
        let (r, m) = self.arity();
        ["a", "b", "c"][..r].iter().chain(&["x", "y", "z"][..m]).copied().collect()
    }

    /// Evaluates the law on ring arguments followed by module arguments.
    pub fn holds(self, ring: &dyn RingOps, module: &dyn ModuleOps, args: &[&Element]) -> bool {
        let (r, m) = (ring, module);
        match (self, args) {
            (Law::AddAssoc, [a, b, c]) => r.add(&r.add(a, b), c) == r.add(a, &r.add(b, c)),
            (Law::AddComm, [a, b]) => r.add(a, b) == r.add(b, a),
            (Law::AddZero, [a]) => r.add(a, &r.zero()) == **a,
            (Law::AddNeg, [a]) => r.add(a, &r.neg(a)) == r.zero(),
            (Law::MulAssoc, [a, b, c]) => r.mul(&r.mul(a, b), c) == r.mul(a, &r.mul(b, c)),
            (Law::MulComm, [a, b]) => r.mul(a, b) == r.mul(b, a),
            (Law::MulOne, [a]) => r.mul(a, &r.one()) == **a,
            (Law::Distributive, [a, b, c]) => r.mul(a, &r.add(b, c)) == r.add(&r.mul(a, b), &r.mul(a, c)),
            (Law::ModuleAddAssoc, [x, y, z]) => m.add(&m.add(x, y), z) == m.add(x, &m.add(y, z)),
            (Law::ModuleAddComm, [x, y]) => m.add(x, y) == m.add(y, x),
            (Law::ModuleAddZero, [x]) => m.add(x, &m.zero()) == **x,
            (Law::ModuleAddNeg, [x]) => m.add(x, &m.neg(x)) == m.zero(),
            (Law::ActOverRingSum, [a, b, x]) => m.act(&r.add(a, b), x) == m.add(&m.act(a, x), &m.act(b, x)),
            (Law::ActOverModuleSum, [a, x, y]) => m.act(a, &m.add(x, y)) == m.add(&m.act(a, x), &m.act(a, y)),
            (Law::ActCompose, [a, b, x]) => m.act(&r.mul(a, b), x) == m.act(a, &m.act(b, x)),
            (Law::ActOne, [x]) => m.act(&r.one(), x) == **x,
            _ => panic!("law {} applied to {} arguments", self.name(), args.len()),
        }
    }
}

/// Checks every ring and module law (claim `structure`).
///
/// Exhaustive mode enumerates each law's whole argument space when it has at
/// most `LAW_BUDGET` points and otherwise draws `LAW_SAMPLES` seeded tuples
/// from the carriers, noting which laws were sampled.
pub fn self_test_structure(inst: &FilteredInstance, strategy: &SearchStrategy) -> Result<CheckReport> {
    let claim = "structure";
    let (ring, module) = (inst.ring(), inst.module());
    if strategy.is_exhaustive() && !inst.finite() {
        return Err(Error::Capability(format!(
            "exhaustive structure test requested on infinite instance {}",
            inst.id()
        )));
    }
    let mut rng = strategy.rng();
    let bound = strategy.level_bound().unwrap_or_default();
    let mut search = Search::new();
    let mut sampled: Vec<String> = Vec::new();

    for law in Law::ALL {
        let (r, m) = law.arity();
        let mut found: Option<Vec<Element>> = None;
        if strategy.is_exhaustive() {
            let domains: Vec<&[Element]> = std::iter::repeat_n(inst.ring_elements()?, r)
                .chain(std::iter::repeat_n(inst.module_elements()?, m))
                .collect();
            let space = domains.iter().try_fold(1usize, |acc, d| acc.checked_mul(d.len()));
            match space {
                Some(n) if n <= LAW_BUDGET => {
                    let mut idx = vec![0usize; domains.len()];
                    'odometer: loop {
                        let args: Vec<&Element> = idx.iter().zip(&domains).map(|(&i, d)| &d[i]).collect();
                        if !law.holds(ring, module, &args) {
                            found = Some(args.into_iter().cloned().collect());
                            break;
                        }
                        let mut pos = idx.len();
                        loop {
                            if pos == 0 {
                                break 'odometer;
                            }
                            pos -= 1;
                            idx[pos] += 1;
                            if idx[pos] < domains[pos].len() {
                                break;
                            }
                            idx[pos] = 0;
                        }
                    }
                }
                _ => {
                    sampled.push(law.name().to_string());
                    for _ in 0..LAW_SAMPLES {
                        let args: Vec<&Element> =
                            domains.iter().map(|d| &d[rng.random_range(0..d.len())]).collect();
                        if !law.holds(ring, module, &args) {
                            found = Some(args.into_iter().cloned().collect());
                            break;
                        }
                    }
                }
            }
        } else {
            for _ in 0..strategy.samples() {
                let mut args: Vec<Element> = (0..r).map(|_| ring.sample(&mut rng, bound)).collect();
                args.extend((0..m).map(|_| module.sample(&mut rng, bound)));
                let refs: Vec<&Element> = args.iter().collect();
                if !law.holds(ring, module, &refs) {
                    found = Some(args);
                    break;
                }
            }
        }
        if let Some(args) = found {
            let mut w = Witness::new().label("law", law.name());
            for (role, e) in law.roles().into_iter().zip(&args) {
                w = w.element(role, e);
            }
            search.fail(w);
            break;
        }
    }

    let report = search.finish(claim, *strategy);
    Ok(if sampled.is_empty() {
        report
    } else {
        report.with_note(format!("{LAW_SAMPLES} seeded tuples each for {}", sampled.join(",")))
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::algebra::{RegularModule, Zmod};
    use crate::filtration::PowerFiltration;
    use crate::instances::catalog;

    /// `ℤ/9` whose addition is wrong on exactly one pair.
    struct CorruptedAdd(Zmod);

    impl RingOps for CorruptedAdd {
        fn name(&self) -> String {
            "corrupted".into()
        }
        fn zero(&self) -> Element {
            self.0.zero()
        }
        fn one(&self) -> Element {
            self.0.one()
        }
        fn add(&self, a: &Element, b: &Element) -> Element {
            if (a, b) == (&Element::Residue(2), &Element::Residue(3)) {
                return Element::Residue(4);
            }
            self.0.add(a, b)
        }
        fn neg(&self, a: &Element) -> Element {
            self.0.neg(a)
        }
        fn mul(&self, a: &Element, b: &Element) -> Element {
            self.0.mul(a, b)
        }
        fn contains(&self, a: &Element) -> bool {
            self.0.contains(a)
        }
        fn elements(&self) -> Option<&[Element]> {
            self.0.elements()
        }
        fn sample(&self, rng: &mut ChaCha8Rng, bound: u32) -> Element {
            self.0.sample(rng, bound)
        }
        fn parse(&self, s: &str) -> crate::error::Result<Element> {
            self.0.parse(s)
        }
    }

    #[test]
    fn catalog_carriers_satisfy_the_laws() {
        for id in ["i1", "i2", "i5", "i6", "i7"] {
            let inst = catalog(id).unwrap();
            let r = self_test_structure(&inst, &SearchStrategy::Exhaustive).unwrap();
            assert!(r.is_pass() && r.note.is_none(), "{id}: {r:?}");
        }
        let i4 = catalog("i4").unwrap();
        assert!(self_test_structure(&i4, &SearchStrategy::bounded(1, 500, 8)).unwrap().is_pass());
        assert!(self_test_structure(&i4, &SearchStrategy::Exhaustive).is_err());
    }

    #[test]
    fn corrupted_addition_is_caught() {
        let ring: Arc<dyn RingOps> = Arc::new(CorruptedAdd(Zmod::new(9).unwrap()));
        let levels = Arc::new(PowerFiltration::new(3));
        let inst = FilteredInstance::new("fixture", ring.clone(), Arc::new(RegularModule::new(ring)), levels.clone(), levels)
            .with_stabilization_depth(2);
        let r = self_test_structure(&inst, &SearchStrategy::Exhaustive).unwrap();
        let w = r.witness.expect("violation");
        assert_eq!(w.get("law"), Some("add_assoc"));
        let args: Vec<Element> = ["a", "b", "c"].iter().map(|k| inst.parse_ring(w.get(k).unwrap()).unwrap()).collect();
        let refs: Vec<&Element> = args.iter().collect();
        assert!(!Law::AddAssoc.holds(inst.ring(), inst.module(), &refs));
    }
}
