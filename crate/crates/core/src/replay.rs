//! Independent re-evaluation of FAIL witnesses.
//!
//! Replay uses the carrier arithmetic, the level oracles and an uncached
//! `ν` scan only. It never calls a checker, so a witness that replays is a
//! violation in its own right.

use std::collections::HashSet;

use crate::algebra::{split_tuple, Element, ExtendedValue, Law};
use crate::error::{Error, Result};
use crate::filtration::{generated_subgroup, Carrier, Side};
use crate::instances::FilteredInstance;
use crate::report::{CheckReport, Verdict, Witness};
use crate::valuation::DerivedValuation;

/// Re-evaluates the witness of a FAIL report. Returns `Ok(true)` when the
/// violation is reproduced, `Ok(false)` when it is not.
pub fn replay_report(inst: &FilteredInstance, report: &CheckReport) -> Result<bool> {
    if report.verdict != Verdict::Fail {
        return Err(Error::BadParameter(format!("{} is not a FAIL report", report.claim_id)));
    }
    let witness = report
        .witness
        .as_ref()
        .ok_or_else(|| Error::BadParameter(format!("{} has no witness", report.claim_id)))?;
    replay_witness(inst, &report.claim_id, witness)
}

pub fn replay_witness(inst: &FilteredInstance, claim: &str, witness: &Witness) -> Result<bool> {
    Replayer {
        inst,
        nu: DerivedValuation::new(inst),
        w: witness,
    }
    .replay(claim)
}

struct Replayer<'a> {
    inst: &'a FilteredInstance,
    nu: DerivedValuation<'a>,
    w: &'a Witness,
}

impl Replayer<'_> {
    fn text(&self, role: &str) -> Result<&str> {
        self.w
            .get(role)
            .ok_or_else(|| Error::BadParameter(format!("witness is missing {role:?}")))
    }

    fn r(&self, role: &str) -> Result<Element> {
        self.inst.parse_ring(self.text(role)?)
    }

    fn m(&self, role: &str) -> Result<Element> {
        self.inst.parse_module(self.text(role)?)
    }

    fn level(&self, role: &str) -> Result<u32> {
        let t = self.text(role)?;
        t.parse().map_err(|_| Error::parse(t, "expected a level"))
    }

    fn v(&self, x: &Element) -> ExtendedValue {
        self.nu.nu_uncached(x).expect("element parsed from the module")
    }

    fn act(&self, a: &Element, x: &Element) -> Element {
        self.inst.module().act(a, x)
    }

    fn va(&self, a: &Element, x: &Element) -> ExtendedValue {
        self.v(&self.act(a, x))
    }

    fn ring_all(&self) -> Result<&[Element]> {
        self.inst.ring_elements()
    }

    fn module_all(&self) -> Result<&[Element]> {
        self.inst.module_elements()
    }

    /// `{ν(ay) : a ∈ R}` by enumeration.
    fn orbit(&self, y: &Element) -> Result<HashSet<ExtendedValue>> {
        Ok(self.ring_all()?.iter().map(|a| self.va(a, y)).collect())
    }

    fn in_a(&self, a: &Element) -> Result<bool> {
        if let Some(f) = self.inst.closed_forms().filter(|_| !self.inst.finite()) {
            return f.in_pair_ring(a).ok_or_else(|| Error::Capability("no closed form".into()));
        }
        Ok(self.module_all()?.iter().all(|x| self.va(a, x) >= self.v(x)))
    }

    fn in_p(&self, a: &Element) -> Result<bool> {
        if let Some(f) = self.inst.closed_forms().filter(|_| !self.inst.finite()) {
            return f.in_pair_ideal(a).ok_or_else(|| Error::Capability("no closed form".into()));
        }
        Ok(self
            .module_all()?
            .iter()
            .filter(|x| !self.v(x).is_infinite())
            .all(|x| self.va(a, x) > self.v(x)))
    }

    fn related(&self, x: &Element, y: &Element) -> Result<bool> {
        Ok(self.orbit(y)?.contains(&self.v(x)) && self.orbit(x)?.contains(&self.v(y)))
    }

    fn replay(&self, claim: &str) -> Result<bool> {
        let inst = self.inst;
        let (ring, module) = (inst.ring(), inst.module());
        let kind = self.w.get("kind");
        match claim {
            "structure" => {
                let law = Law::from_name(self.text("law")?)
                    .ok_or_else(|| Error::BadParameter("unknown law".into()))?;
                let (r, _) = law.arity();
                let args: Vec<Element> = law
                    .roles()
                    .into_iter()
                    .enumerate()
                    .map(|(i, role)| if i < r { self.r(role) } else { self.m(role) })
                    .collect::<Result<_>>()?;
                let refs: Vec<&Element> = args.iter().collect();
                Ok(!law.holds(ring, module, &refs))
            }
            "def2.1.i" => Ok(!inst.ring_filtration().level_member(&self.r("x")?, 0)),
            "def2.3.i" => Ok(!inst.module_filtration().level_member(&self.m("x")?, 0)),
            "def2.1.ii" | "def2.3.ii" => {
                let side = if claim == "def2.1.ii" { Side::Ring } else { Side::Module };
                let c = Carrier::new(inst, side);
                let parse = |role: &str| if side == Side::Ring { self.r(role) } else { self.m(role) };
                let n = self.level("n")?;
                match kind {
                    Some("antitone") => {
                        let x = parse("x")?;
                        Ok(c.member(&x, n + 1) && !c.member(&x, n))
                    }
                    Some("zero") => Ok(!c.member(&c.zero(), n)),
                    Some("neg") => {
                        let x = parse("x")?;
                        Ok(c.member(&x, n) && !c.member(&c.neg(&x), n))
                    }
                    Some("add") => {
                        let (x, y) = (parse("x")?, parse("y")?);
                        Ok(c.member(&x, n) && c.member(&y, n) && !c.member(&c.add(&x, &y), n))
                    }
                    _ => Err(Error::BadParameter("unknown witness kind".into())),
                }
            }
            "def2.1.iii" | "def2.3.iii" => {
                let (n, m) = (self.level("n")?, self.level("m")?);
                let r = self.r("r")?;
                if claim == "def2.1.iii" {
                    let s = self.r("s")?;
                    let lv = inst.ring_filtration();
                    Ok(lv.level_member(&r, n) && lv.level_member(&s, m) && !lv.level_member(&ring.mul(&r, &s), n + m))
                } else {
                    let x = self.m("x")?;
                    Ok(inst.ring_filtration().level_member(&r, n)
                        && inst.module_filtration().level_member(&x, m)
                        && !inst.module_filtration().level_member(&self.act(&r, &x), n + m))
                }
            }
            "def2.2" | "def2.4" => {
                let side = if claim == "def2.2" { Side::Ring } else { Side::Module };
                let c = Carrier::new(inst, side);
                let rc = Carrier::new(inst, Side::Ring);
                let (n, m) = (self.level("n")?, self.level("m")?);
                let x = if side == Side::Ring { self.r("x")? } else { self.m("x")? };
                let in_level = c.member(&x, n + m);
                let in_span = if inst.finite() {
                    let rs: Vec<&Element> = rc.elements()?.iter().filter(|r| rc.member(r, n)).collect();
                    let xs: Vec<&Element> = c.elements()?.iter().filter(|y| c.member(y, m)).collect();
                    let products: Vec<Element> = rs.iter().flat_map(|r| xs.iter().map(|y| c.act(r, y))).collect();
                    generated_subgroup(&c, products).contains(&x)
                } else {
                    // bounded witnesses are products of level generators
                    let (Some(gr), Some(gm)) = (rc.generators(n), c.generators(m)) else {
                        return Err(Error::Capability("no level generators".into()));
                    };
                    gr.iter().any(|r| gm.iter().any(|y| c.act(r, y) == x))
                };
                match self.text("side")? {
                    "missing" => Ok(in_level && !in_span),
                    "extra" => Ok(!in_level && in_span),
                    _ => Err(Error::BadParameter("unknown side".into())),
                }
            }
            "def2.5.i" => {
                let (x, y) = (self.m("x")?, self.m("y")?);
                Ok(self.v(&module.add(&x, &y)) < self.v(&x).min(self.v(&y)))
            }
            "def2.5.ii" => {
                let (a, x, y) = (self.r("a")?, self.m("x")?, self.m("y")?);
                Ok(self.v(&x) <= self.v(&y) && self.va(&a, &x) > self.va(&a, &y))
            }
            "def2.5.iii" | "prop2.1.iv" | "prop2.1.v" => {
                let (a, b, z, x) = (self.r("a")?, self.r("b")?, self.m("z")?, self.m("x")?);
                let (az, bz, ax, bx) = (self.va(&a, &z), self.va(&b, &z), self.va(&a, &x), self.va(&b, &x));
                let (vz, vx) = (self.v(&z), self.v(&x));
                Ok(match claim {
                    "def2.5.iii" => !vz.is_infinite() && az <= bz && ax > bx,
                    "prop2.1.iv" => !vz.is_infinite() && az == bz && ax != bx,
                    _ => az < bz && !vx.is_infinite() && ax >= bx,
                })
            }
            "def2.5.iv" => {
                let (a, y) = (self.r("a")?, self.m("y")?);
                if self.va(&a, &y).is_infinite() {
                    return Ok(false);
                }
                let xs = self.module_all()?;
                let found = self.ring_all()?.iter().any(|a2| {
                    let b = ring.mul(a2, &a);
                    xs.iter().all(|x| self.va(&b, x) == self.v(x))
                });
                Ok(!found)
            }
            "def2.5.onto" => Ok(self.module_all()?.iter().all(|x| self.v(x).is_infinite())),
            "prop2.1.i" => {
                let (a, x, y) = (self.r("a")?, self.m("x")?, self.m("y")?);
                Ok(self.v(&x) == self.v(&y) && self.va(&a, &x) != self.va(&a, &y))
            }
            "prop2.1.ii" => {
                let x = self.m("x")?;
                Ok(self.v(&module.neg(&x)) != self.v(&x))
            }
            "prop2.1.iii" => {
                let (x, y) = (self.m("x")?, self.m("y")?);
                let (vx, vy) = (self.v(&x), self.v(&y));
                Ok(vx != vy && self.v(&module.add(&x, &y)) != vx.min(vy))
            }
            "prop2.1.vi" => {
                let core = |x: &Element| self.v(x).is_infinite();
                match kind {
                    Some("improper") => Ok(self.module_all()?.iter().all(core)),
                    Some("prime") => {
                        let (a, x, y) = (self.r("a")?, self.m("x")?, self.m("y")?);
                        Ok(core(&self.act(&a, &x)) && !core(&x) && !core(&self.act(&a, &y)))
                    }
                    Some("not_submodule") => match (self.w.get("a"), self.w.get("y")) {
                        (Some(_), _) => {
                            let (a, x) = (self.r("a")?, self.m("x")?);
                            Ok(core(&x) && !core(&self.act(&a, &x)))
                        }
                        (None, Some(_)) => {
                            let (x, y) = (self.m("x")?, self.m("y")?);
                            Ok(core(&x) && core(&y) && !core(&module.add(&x, &y)))
                        }
                        (None, None) => Ok(!core(&self.m("x")?)),
                    },
                    _ => Err(Error::BadParameter("unknown witness kind".into())),
                }
            }
            "prop2.1.vii" if kind == Some("closed_form") => {
                let (a, x) = (self.r("a")?, self.m("x")?);
                let forms = inst.closed_forms().ok_or_else(|| Error::Capability("no closed form".into()))?;
                let (vax, vx) = (self.va(&a, &x), self.v(&x));
                Ok(match self.text("set")? {
                    "A" => forms.in_pair_ring(&a) == Some(true) && vax < vx,
                    _ => forms.in_pair_ideal(&a) == Some(true) && !vx.is_infinite() && vax <= vx,
                })
            }
            "prop2.1.vii" => {
                let a = self.r("a")?;
                let b = self.w.get("b").map(|_| self.r("b")).transpose()?;
                let op = self.text("op")?;
                match (kind, op, b) {
                    (Some("p_not_in_a"), _, _) => Ok(self.in_p(&a)? && !self.in_a(&a)?),
                    (Some("a_not_subring"), "one", _) => Ok(!self.in_a(&a)?),
                    (Some("a_not_subring"), "neg", _) => Ok(self.in_a(&a)? && !self.in_a(&ring.neg(&a))?),
                    (Some("a_not_subring"), "add", Some(b)) => {
                        Ok(self.in_a(&a)? && self.in_a(&b)? && !self.in_a(&ring.add(&a, &b))?)
                    }
                    (Some("a_not_subring"), "mul", Some(b)) => {
                        Ok(self.in_a(&a)? && self.in_a(&b)? && !self.in_a(&ring.mul(&a, &b))?)
                    }
                    (Some("p_not_ideal"), "zero", _) => Ok(!self.in_p(&a)?),
                    (Some("p_not_ideal"), "neg", _) => Ok(self.in_p(&a)? && !self.in_p(&ring.neg(&a))?),
                    (Some("p_not_ideal"), "add", Some(b)) => {
                        Ok(self.in_p(&a)? && self.in_p(&b)? && !self.in_p(&ring.add(&a, &b))?)
                    }
                    (Some("p_not_ideal"), "mul", Some(b)) => {
                        Ok(self.in_a(&a)? && self.in_p(&b)? && !self.in_p(&ring.mul(&a, &b))?)
                    }
                    (Some("pair_condition"), _, _) => {
                        if self.in_a(&a)? {
                            return Ok(false);
                        }
                        for b in self.ring_all()? {
                            let ab = ring.mul(&a, b);
                            if self.in_p(b)? && self.in_a(&ab)? && !self.in_p(&ab)? {
                                return Ok(false);
                            }
                        }
                        Ok(true)
                    }
                    _ => Err(Error::BadParameter("unknown witness kind".into())),
                }
            }
            "prop3.1" => Ok(!inst.ring_filtration().level_member(&self.r("x")?, self.level("n")?)),
            "def2.6" => match kind {
                Some("reflexive") => {
                    let x = self.m("x")?;
                    Ok(!self.related(&x, &x)?)
                }
                Some("symmetric") => {
                    let (x, y) = (self.m("x")?, self.m("y")?);
                    Ok(self.related(&x, &y)? != self.related(&y, &x)?)
                }
                Some("transitive") => {
                    let (x, y, z) = (self.m("x")?, self.m("y")?, self.m("z")?);
                    Ok(self.related(&x, &y)? && self.related(&y, &z)? && !self.related(&x, &z)?)
                }
                _ => Err(Error::BadParameter("unknown witness kind".into())),
            },
            "def2.7" | "prop3.3.i" => {
                let x = self.m("x")?;
                if kind == Some("core") {
                    return Ok(self.v(&x).is_infinite());
                }
                let y = self.m("y")?;
                if x == y || self.v(&x).is_infinite() || self.v(&y).is_infinite() {
                    return Ok(false);
                }
                match self.w.get("a") {
                    Some(_) => Ok(self.va(&self.r("a")?, &y) == self.v(&x)),
                    None => Ok(self.orbit(&y)?.contains(&self.v(&x))),
                }
            }
            "prop3.3.ii" => {
                let x = self.m("x")?;
                let reps = self.list("representatives")?;
                let claimed = self.list("matches")?;
                let ox = self.orbit(&x)?;
                let mut matching = Vec::new();
                for r in reps {
                    if self.orbit(&r)? == ox {
                        matching.push(r);
                    }
                }
                Ok(!self.v(&x).is_infinite() && matching.len() != 1 && matching == claimed)
            }
            "prop3.4" => {
                let mut sum = module.zero();
                let mut lambdas = Vec::new();
                let mut i = 1;
                while self.w.get(&format!("a{i}")).is_some() {
                    let a = self.r(&format!("a{i}"))?;
                    let lambda = self.m(&format!("lambda{i}"))?;
                    sum = module.add(&sum, &self.act(&a, &lambda));
                    lambdas.push(lambda);
                    i += 1;
                }
                let j = self.level("j")?;
                let aj = self.r(&format!("a{j}"))?;
                let y = self.m("y")?;
                let distinct = lambdas.iter().collect::<HashSet<_>>().len() == lambdas.len();
                Ok(distinct && module.is_zero(&sum) && !self.va(&aj, &y).is_infinite())
            }
            other => Err(Error::BadParameter(format!("no replay rule for {other:?}"))),
        }
    }

    fn list(&self, role: &str) -> Result<Vec<Element>> {
        let t = self.text(role)?;
        let inner = t
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| Error::parse(t, "expected a bracketed list"))?;
        if inner.trim().is_empty() {
            return Ok(Vec::new());
        }
        let parts = split_tuple(&format!("({inner})")).map_err(|r| Error::parse(t, r))?
            .into_iter()
            .map(str::to_string)
            .collect::<Vec<_>>();
        parts.iter().map(|p| self.inst.parse_module(p)).collect()
    }
}
