//! Ring and module carriers: `ℤ/m`, `ℤ`, `𝔽_q[x]/(xᴺ)`, the regular module
//! of a ring, and finite direct sums.

use std::sync::{Arc, OnceLock};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::element::{parse_poly_terms, split_tuple, Element};
use crate::error::{Error, Result};

/// Exact arithmetic on a commutative ring with identity.
pub trait RingOps: Send + Sync {
    fn name(&self) -> String;
    fn zero(&self) -> Element;
    fn one(&self) -> Element;
    fn add(&self, a: &Element, b: &Element) -> Element;
    fn neg(&self, a: &Element) -> Element;
    fn mul(&self, a: &Element, b: &Element) -> Element;
    /// Whether `a` is a canonical element of this carrier.
    fn contains(&self, a: &Element) -> bool;
    /// Every element exactly once, in element order. `None` for infinite carriers.
    fn elements(&self) -> Option<&[Element]>;
    fn sample(&self, rng: &mut ChaCha8Rng, level_bound: u32) -> Element;
    fn parse(&self, s: &str) -> Result<Element>;

    fn sub(&self, a: &Element, b: &Element) -> Element {
        self.add(a, &self.neg(b))
    }
}

/// An abelian group with an action of some ring.
pub trait ModuleOps: Send + Sync {
    fn name(&self) -> String;
    fn zero(&self) -> Element;
    fn add(&self, x: &Element, y: &Element) -> Element;
    fn neg(&self, x: &Element) -> Element;
    /// Scalar action `r · x`.
    fn act(&self, r: &Element, x: &Element) -> Element;
    fn contains(&self, x: &Element) -> bool;
    fn elements(&self) -> Option<&[Element]>;
    fn sample(&self, rng: &mut ChaCha8Rng, level_bound: u32) -> Element;
    fn parse(&self, s: &str) -> Result<Element>;

    fn is_zero(&self, x: &Element) -> bool {
        *x == self.zero()
    }
}

fn sample_from(elements: &[Element], rng: &mut ChaCha8Rng) -> Element {
    elements[rng.random_range(0..elements.len())].clone()
}

fn residue(a: &Element) -> u64 {
    match a {
        Element::Residue(r) => *r,
        other => panic!("expected a residue, got {other:?}"),
    }
}

fn integer(a: &Element) -> i128 {
    match a {
        Element::Int(n) => *n,
        other => panic!("expected an integer, got {other:?}"),
    }
}

fn coefficients(a: &Element) -> &[u64] {
    match a {
        Element::Poly(c) => c,
        other => panic!("expected a polynomial, got {other:?}"),
    }
}

/// `ℤ/m` with residues in `[0, m)`.
#[derive(Debug)]
pub struct Zmod {
    modulus: u64,
    elements: OnceLock<Vec<Element>>,
}

impl Zmod {
    pub fn new(modulus: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::BadParameter(format!(
                "modulus must be at least 2, got {modulus}"
            )));
        }
        Ok(Zmod {
            modulus,
            elements: OnceLock::new(),
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    fn reduce(&self, v: i128) -> Element {
        Element::Residue(v.rem_euclid(self.modulus as i128) as u64)
    }
}

impl RingOps for Zmod {
    fn name(&self) -> String {
        format!("Z/{}", self.modulus)
    }

    fn zero(&self) -> Element {
        Element::Residue(0)
    }

    fn one(&self) -> Element {
        Element::Residue(1)
    }

    fn add(&self, a: &Element, b: &Element) -> Element {
        Element::Residue((residue(a) + residue(b)) % self.modulus)
    }

    fn neg(&self, a: &Element) -> Element {
        Element::Residue((self.modulus - residue(a)) % self.modulus)
    }

    fn mul(&self, a: &Element, b: &Element) -> Element {
        let p = (residue(a) as u128 * residue(b) as u128) % self.modulus as u128;
        Element::Residue(p as u64)
    }

    fn contains(&self, a: &Element) -> bool {
        matches!(a, Element::Residue(r) if *r < self.modulus)
    }

    fn elements(&self) -> Option<&[Element]> {
        Some(
            self.elements
                .get_or_init(|| (0..self.modulus).map(Element::Residue).collect()),
        )
    }

    fn sample(&self, rng: &mut ChaCha8Rng, _level_bound: u32) -> Element {
        sample_from(self.elements().unwrap(), rng)
    }

    fn parse(&self, s: &str) -> Result<Element> {
        let v: i128 = s
            .trim()
            .parse()
            .map_err(|_| Error::parse(s, "expected a decimal integer"))?;
        Ok(self.reduce(v))
    }
}

/// The integers. Samples are biased towards multiples of `bias_prime`
/// powers so that high filtration levels actually get exercised.
#[derive(Debug, Default)]
pub struct Integers {
    bias_prime: Option<u64>,
}

impl Integers {
    pub fn new(bias_prime: Option<u64>) -> Self {
        Integers { bias_prime }
    }
}

impl RingOps for Integers {
    fn name(&self) -> String {
        "Z".into()
    }

    fn zero(&self) -> Element {
        Element::Int(0)
    }

    fn one(&self) -> Element {
        Element::Int(1)
    }

    fn add(&self, a: &Element, b: &Element) -> Element {
        Element::Int(
            integer(a)
                .checked_add(integer(b))
                .expect("integer overflow in Z"),
        )
    }

    fn neg(&self, a: &Element) -> Element {
        Element::Int(-integer(a))
    }

    fn mul(&self, a: &Element, b: &Element) -> Element {
        Element::Int(
            integer(a)
                .checked_mul(integer(b))
                .expect("integer overflow in Z"),
        )
    }

    fn contains(&self, a: &Element) -> bool {
        matches!(a, Element::Int(_))
    }

    fn elements(&self) -> Option<&[Element]> {
        None
    }

    fn sample(&self, rng: &mut ChaCha8Rng, level_bound: u32) -> Element {
        match self.bias_prime {
            Some(p) => {
                let k = rng.random_range(0..=level_bound.min(32));
                let unit: i128 = rng.random_range(-50..=50);
                Element::Int((p as i128).pow(k) * unit)
            }
            None => Element::Int(rng.random_range(-1_000_000..=1_000_000)),
        }
    }

    fn parse(&self, s: &str) -> Result<Element> {
        s.trim()
            .parse()
            .map(Element::Int)
            .map_err(|_| Error::parse(s, "expected a decimal integer"))
    }
}

/// `𝔽_q[x]/(xᴺ)`.
#[derive(Debug)]
pub struct TruncatedPoly {
    q: u64,
    len: usize,
    elements: OnceLock<Vec<Element>>,
}

impl TruncatedPoly {
    pub fn new(q: u64, len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::BadParameter("truncation must be at least 1".into()));
        }
        let size = (q as u128).checked_pow(len as u32);
        if !matches!(size, Some(s) if s <= 1 << 24) {
            return Err(Error::BadParameter(format!(
                "F_{q}[x]/(x^{len}) is too large to enumerate"
            )));
        }
        Ok(TruncatedPoly {
            q,
            len,
            elements: OnceLock::new(),
        })
    }

    pub fn truncation(&self) -> usize {
        self.len
    }

    fn from_coeffs(&self, mut c: Vec<u64>) -> Element {
        c.truncate(self.len);
        Element::poly(c)
    }
}

impl RingOps for TruncatedPoly {
    fn name(&self) -> String {
        format!("F_{}[x]/(x^{})", self.q, self.len)
    }

    fn zero(&self) -> Element {
        Element::Poly(Vec::new())
    }

    fn one(&self) -> Element {
        self.from_coeffs(vec![1])
    }

    fn add(&self, a: &Element, b: &Element) -> Element {
        let (a, b) = (coefficients(a), coefficients(b));
        let n = a.len().max(b.len());
        let c = (0..n)
            .map(|i| (a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0)) % self.q)
            .collect();
        self.from_coeffs(c)
    }

    fn neg(&self, a: &Element) -> Element {
        let c = coefficients(a)
            .iter()
            .map(|&v| (self.q - v) % self.q)
            .collect();
        self.from_coeffs(c)
    }

    fn mul(&self, a: &Element, b: &Element) -> Element {
        let (a, b) = (coefficients(a), coefficients(b));
        let mut c = vec![0u64; self.len];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate().take(self.len.saturating_sub(i)) {
                c[i + j] = (c[i + j] + ai * bj) % self.q;
            }
        }
        self.from_coeffs(c)
    }

    fn contains(&self, a: &Element) -> bool {
        match a {
            Element::Poly(c) => {
                c.len() <= self.len && c.last() != Some(&0) && c.iter().all(|&v| v < self.q)
            }
            _ => false,
        }
    }

    fn elements(&self) -> Option<&[Element]> {
        Some(self.elements.get_or_init(|| {
            let size = self.q.pow(self.len as u32);
            let mut all: Vec<Element> = (0..size)
                .map(|mut code| {
                    let mut c = Vec::with_capacity(self.len);
                    for _ in 0..self.len {
                        c.push(code % self.q);
                        code /= self.q;
                    }
                    Element::poly(c)
                })
                .collect();
            all.sort();
            all
        }))
    }

    fn sample(&self, rng: &mut ChaCha8Rng, _level_bound: u32) -> Element {
        sample_from(self.elements().unwrap(), rng)
    }

    fn parse(&self, s: &str) -> Result<Element> {
        let terms = parse_poly_terms(s).map_err(|r| Error::parse(s, r))?;
        let mut c = vec![0i128; self.len];
        for (coeff, deg) in terms {
            if deg < self.len {
                c[deg] += coeff;
            }
        }
        let q = self.q as i128;
        Ok(self.from_coeffs(c.into_iter().map(|v| v.rem_euclid(q) as u64).collect()))
    }
}

/// A ring regarded as a module over itself.
pub struct RegularModule {
    ring: Arc<dyn RingOps>,
}

impl RegularModule {
    pub fn new(ring: Arc<dyn RingOps>) -> Self {
        RegularModule { ring }
    }
}

impl ModuleOps for RegularModule {
    fn name(&self) -> String {
        self.ring.name()
    }

    fn zero(&self) -> Element {
        self.ring.zero()
    }

    fn add(&self, x: &Element, y: &Element) -> Element {
        self.ring.add(x, y)
    }

    fn neg(&self, x: &Element) -> Element {
        self.ring.neg(x)
    }

    fn act(&self, r: &Element, x: &Element) -> Element {
        self.ring.mul(r, x)
    }

    fn contains(&self, x: &Element) -> bool {
        self.ring.contains(x)
    }

    fn elements(&self) -> Option<&[Element]> {
        self.ring.elements()
    }

    fn sample(&self, rng: &mut ChaCha8Rng, level_bound: u32) -> Element {
        self.ring.sample(rng, level_bound)
    }

    fn parse(&self, s: &str) -> Result<Element> {
        self.ring.parse(s)
    }
}

/// `Mᵏ` with componentwise operations.
pub struct DirectSum {
    base: Arc<dyn ModuleOps>,
    copies: usize,
    elements: OnceLock<Option<Vec<Element>>>,
}

impl DirectSum {
    pub fn new(base: Arc<dyn ModuleOps>, copies: usize) -> Result<Self> {
        if copies == 0 {
            return Err(Error::BadParameter("direct sum needs at least one copy".into()));
        }
        Ok(DirectSum {
            base,
            copies,
            elements: OnceLock::new(),
        })
    }

    fn parts<'a>(&self, x: &'a Element) -> &'a [Element] {
        match x {
            Element::Tuple(p) if p.len() == self.copies => p,
            other => panic!("expected a {}-tuple, got {other:?}", self.copies),
        }
    }

    fn zip_with(&self, x: &Element, y: &Element, f: impl Fn(&Element, &Element) -> Element) -> Element {
        Element::Tuple(
            self.parts(x)
                .iter()
                .zip(self.parts(y))
                .map(|(a, b)| f(a, b))
                .collect(),
        )
    }
}

impl ModuleOps for DirectSum {
    fn name(&self) -> String {
        format!("({})^{}", self.base.name(), self.copies)
    }

    fn zero(&self) -> Element {
        Element::Tuple(vec![self.base.zero(); self.copies])
    }

    fn add(&self, x: &Element, y: &Element) -> Element {
        self.zip_with(x, y, |a, b| self.base.add(a, b))
    }

    fn neg(&self, x: &Element) -> Element {
        Element::Tuple(self.parts(x).iter().map(|a| self.base.neg(a)).collect())
    }

    fn act(&self, r: &Element, x: &Element) -> Element {
        Element::Tuple(self.parts(x).iter().map(|a| self.base.act(r, a)).collect())
    }

    fn contains(&self, x: &Element) -> bool {
        match x {
            Element::Tuple(p) => p.len() == self.copies && p.iter().all(|a| self.base.contains(a)),
            _ => false,
        }
    }

    fn elements(&self) -> Option<&[Element]> {
        self.elements
            .get_or_init(|| {
                let base = self.base.elements()?;
                let mut acc: Vec<Vec<Element>> = vec![Vec::new()];
                for _ in 0..self.copies {
                    acc = acc
                        .into_iter()
                        .flat_map(|prefix| {
                            base.iter().map(move |b| {
                                let mut next = prefix.clone();
                                next.push(b.clone());
                                next
                            })
                        })
                        .collect();
                }
                Some(acc.into_iter().map(Element::Tuple).collect())
            })
            .as_deref()
    }

    fn sample(&self, rng: &mut ChaCha8Rng, level_bound: u32) -> Element {
        Element::Tuple(
            (0..self.copies)
                .map(|_| self.base.sample(rng, level_bound))
                .collect(),
        )
    }

    fn parse(&self, s: &str) -> Result<Element> {
        let parts = split_tuple(s).map_err(|r| Error::parse(s, r))?;
        if parts.len() != self.copies {
            return Err(Error::parse(
                s,
                format!("expected {} components, found {}", self.copies, parts.len()),
            ));
        }
        Ok(Element::Tuple(
            parts
                .into_iter()
                .map(|p| self.base.parse(p))
                .collect::<Result<_>>()?,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;

    #[test]
    fn zmod_basics() {
        let z9 = Zmod::new(9).unwrap();
        let e = z9.elements().unwrap();
        assert_eq!(e.len(), 9);
        for x in e {
            assert_eq!(z9.add(x, &z9.neg(x)), z9.zero());
        }
        assert_eq!(z9.mul(&Element::Residue(3), &Element::Residue(3)), Element::Residue(0));
        assert_eq!(z9.parse("-1").unwrap(), Element::Residue(8));
        assert!(Zmod::new(1).is_err());
    }

    #[test]
    fn truncated_poly_enumeration() {
        let r = TruncatedPoly::new(5, 4).unwrap();
        let e = r.elements().unwrap();
        assert_eq!(e.len(), 625);
        assert!(e.windows(2).all(|w| w[0] < w[1]));
        assert!(e.iter().all(|x| r.contains(x)));
        for x in e {
            assert_eq!(r.add(x, &r.neg(x)), r.zero());
        }
        let x = r.parse("x").unwrap();
        let x3 = r.mul(&x, &r.mul(&x, &x));
        assert_eq!(x3.to_string(), "x^3");
        assert_eq!(r.mul(&x3, &x), r.zero());
        assert_eq!(r.parse("x^2+2x^3").unwrap(), Element::poly(vec![0, 0, 1, 2]));
        assert_eq!(r.parse("7+x^5").unwrap(), Element::poly(vec![2]));
    }

    #[test]
    fn direct_sum_enumerates_lexicographically() {
        let base: Arc<dyn RingOps> = Arc::new(Zmod::new(9).unwrap());
        let m = DirectSum::new(Arc::new(RegularModule::new(base)), 2).unwrap();
        let e = m.elements().unwrap();
        assert_eq!(e.len(), 81);
        assert!(e.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(m.parse("(3,1)").unwrap().to_string(), "(3,1)");
        assert!(m.parse("(3,1,2)").is_err());
        assert_eq!(
            m.act(&Element::Residue(3), &m.parse("(3,1)").unwrap()).to_string(),
            "(0,3)"
        );
    }

    #[test]
    fn integer_sampling_is_seeded() {
        let z = Integers::new(Some(3));
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        let xs: Vec<_> = (0..50).map(|_| z.sample(&mut a, 8)).collect();
        let ys: Vec<_> = (0..50).map(|_| z.sample(&mut b, 8)).collect();
        assert_eq!(xs, ys);
    }

    proptest! {
        #[test]
        fn printed_poly_parses_back(code in 0u64..625) {
            let r = TruncatedPoly::new(5, 4).unwrap();
            let x = r.elements().unwrap()[code as usize].clone();
            prop_assert_eq!(r.parse(&x.to_string()).unwrap(), x);
        }

        #[test]
        fn printed_integer_parses_back(n in any::<i64>()) {
            let z = Integers::new(None);
            let x = Element::Int(n as i128);
            prop_assert_eq!(z.parse(&x.to_string()).unwrap(), x);
        }
    }
}
