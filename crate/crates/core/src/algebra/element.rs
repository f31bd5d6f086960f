use std::cmp::Ordering;
use std::fmt;

/// Canonical encoding of a ring or module element.
///
/// Every constructor produces the unique canonical form, so structural
/// equality is element equality:
/// residues live in `[0, m)`, polynomials are low-to-high coefficient lists
/// without trailing zeros, tuples hold canonical components.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Element {
    Int(i128),
    Residue(u64),
    Poly(Vec<u64>),
    Tuple(Vec<Element>),
}

impl Element {
    /// Builds a polynomial from low-to-high coefficients, trimming trailing zeros.
    pub fn poly(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Element::Poly(coeffs)
    }

    fn variant_rank(&self) -> u8 {
        match self {
            Element::Int(_) => 0,
            Element::Residue(_) => 1,
            Element::Poly(_) => 2,
            Element::Tuple(_) => 3,
        }
    }
}

/// `element_order`: numeric for integers and residues, degree-then-lexicographic
/// (leading coefficient first) for polynomials, lexicographic for tuples.
impl Ord for Element {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Element::Int(a), Element::Int(b)) => a.cmp(b),
            (Element::Residue(a), Element::Residue(b)) => a.cmp(b),
            (Element::Poly(a), Element::Poly(b)) => a
                .len()
                .cmp(&b.len())
                .then_with(|| a.iter().rev().cmp(b.iter().rev())),
            (Element::Tuple(a), Element::Tuple(b)) => a.cmp(b),
            _ => self.variant_rank().cmp(&other.variant_rank()),
        }
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Int(n) => write!(f, "{n}"),
            Element::Residue(r) => write!(f, "{r}"),
            Element::Poly(coeffs) => {
                let mut first = true;
                for (deg, &c) in coeffs.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    if !first {
                        f.write_str("+")?;
                    }
                    first = false;
                    match (deg, c) {
                        (0, c) => write!(f, "{c}")?,
                        (1, 1) => f.write_str("x")?,
                        (1, c) => write!(f, "{c}x")?,
                        (d, 1) => write!(f, "x^{d}")?,
                        (d, c) => write!(f, "{c}x^{d}")?,
                    }
                }
                if first {
                    f.write_str("0")?;
                }
                Ok(())
            }
            Element::Tuple(parts) => {
                f.write_str("(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Parses a polynomial string such as `"2+x^2+3x^3"` into signed
/// `(coefficient, degree)` terms. Terms may repeat; the caller reduces.
pub(crate) fn parse_poly_terms(input: &str) -> Result<Vec<(i128, usize)>, String> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty polynomial".into());
    }
    let mut terms = Vec::new();
    let mut rest = s.as_str();
    while !rest.is_empty() {
        let (sign, body) = match rest.as_bytes()[0] {
            b'+' => (1, &rest[1..]),
            b'-' => (-1, &rest[1..]),
            _ if terms.is_empty() => (1, rest),
            _ => return Err(format!("expected '+' or '-' before {rest:?}")),
        };
        let end = body[1.min(body.len())..]
            .find(['+', '-'])
            .map(|i| i + 1)
            .unwrap_or(body.len());
        let term = &body[..end];
        rest = &body[end..];
        if term.is_empty() {
            return Err("empty term".into());
        }
        let (coeff_str, var_part) = match term.find('x') {
            Some(i) => (&term[..i], Some(&term[i + 1..])),
            None => (term, None),
        };
        let coeff: i128 = if coeff_str.is_empty() {
            1
        } else {
            coeff_str
                .parse()
                .map_err(|_| format!("bad coefficient {coeff_str:?}"))?
        };
        let degree = match var_part {
            None => 0,
            Some("") => 1,
            Some(p) => p
                .strip_prefix('^')
                .and_then(|d| d.parse::<usize>().ok())
                .ok_or_else(|| format!("bad exponent in {term:?}"))?,
        };
        terms.push((sign * coeff, degree));
    }
    Ok(terms)
}

/// Splits `"(a,b,(c,d))"` into its top-level components.
pub(crate) fn split_tuple(input: &str) -> Result<Vec<&str>, String> {
    let s = input.trim();
    let inner = s
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| "tuple must be parenthesised".to_string())?;
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (i, c) in inner.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.checked_sub(1).ok_or("unbalanced parentheses")?,
            ',' if depth == 0 => {
                parts.push(inner[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err("unbalanced parentheses".into());
    }
    parts.push(inner[start..].trim());
    Ok(parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_rendering() {
        assert_eq!(Element::poly(vec![0, 0, 1, 2]).to_string(), "x^2+2x^3");
        assert_eq!(Element::poly(vec![1, 1]).to_string(), "1+x");
        assert_eq!(Element::poly(vec![0, 3]).to_string(), "3x");
        assert_eq!(Element::poly(vec![0, 0, 0]).to_string(), "0");
        assert_eq!(Element::poly(vec![4]).to_string(), "4");
    }

    #[test]
    fn poly_order_is_degree_first() {
        let one = Element::poly(vec![1]);
        let x = Element::poly(vec![0, 1]);
        let one_plus_x = Element::poly(vec![1, 1]);
        let two = Element::poly(vec![2]);
        assert!(Element::poly(vec![]) < one);
        assert!(one < two);
        assert!(two < x);
        assert!(x < one_plus_x);
    }

    #[test]
    fn tuples_render_and_split() {
        let t = Element::Tuple(vec![Element::Residue(3), Element::Residue(1)]);
        assert_eq!(t.to_string(), "(3,1)");
        assert_eq!(split_tuple("(3, (1,2))").unwrap(), vec!["3", "(1,2)"]);
        assert!(split_tuple("3,1").is_err());
    }

    #[test]
    fn poly_terms() {
        assert_eq!(parse_poly_terms("x^2+2x^3").unwrap(), vec![(1, 2), (2, 3)]);
        assert_eq!(parse_poly_terms("-1+x").unwrap(), vec![(-1, 0), (1, 1)]);
        assert!(parse_poly_terms("x^").is_err());
        assert!(parse_poly_terms("").is_err());
    }
}
