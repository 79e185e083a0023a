//! Sparse Laurent polynomials in one variable with arbitrary-precision
//! integer coefficients.
//!
//! All Kazhdan-Lusztig data in this crate lives in the variable `v`; the
//! `q`-normalization (`q = v^-2` up to the length shift) only shows up as
//! the output of [`h_to_p`], where the returned polynomial's exponents are
//! `q`-powers.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("exponent {exponent} is incompatible with length difference {ldiff}")]
    Parity { exponent: i32, ldiff: i32 },
    #[error("cannot parse polynomial {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

/// Laurent polynomial `sum c_i v^i`; zero coefficients are never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i32, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `c * v^exp`.
    pub fn monomial(c: impl Into<BigInt>, exp: i32) -> Self {
        let c = c.into();
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(exp, c);
        }
        Self { coeffs }
    }

    /// The variable itself, `v^1`.
    pub fn var() -> Self {
        Self::monomial(1, 1)
    }

    pub fn from_terms<C: Into<BigInt>>(terms: impl IntoIterator<Item = (i32, C)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i32) -> BigInt {
        self.coeffs.get(&exp).cloned().unwrap_or_default()
    }

    /// Iterates `(exponent, coefficient)` in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i32, &BigInt)> + '_ {
        self.coeffs.iter().map(|(&e, c)| (e, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn add_term(&mut self, exp: i32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(exp) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Multiplies by `v^k`.
    pub fn shift(&self, k: i32) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(&e, x)| (e, x * c)).collect(),
        }
    }

    /// The bar involution `v -> v^-1`.
    pub fn bar(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Value at `v = 1`.
    pub fn eval_one(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    pub fn is_bar_invariant(&self) -> bool {
        self.coeffs.iter().all(|(&e, c)| self.coeffs.get(&-e) == Some(c))
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.coeffs.values().all(|c| !c.is_negative())
    }

    /// Keeps only terms with exponent `<= bound`.
    pub fn truncate_above(&self, bound: i32) -> Self {
        Self {
            coeffs: self.coeffs.range(..=bound).map(|(&e, c)| (e, c.clone())).collect(),
        }
    }

    /// Canonical text form in the given variable, ascending exponents,
    /// e.g. `v^-2 + 2 + v^2`.
    pub fn to_text(&self, var: char) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (&e, c)) in self.coeffs.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let unit = abs.is_one();
            if e == 0 {
                out.push_str(&abs.to_string());
                continue;
            }
            if !unit {
                out.push_str(&abs.to_string());
            }
            out.push(var);
            if e != 1 {
                out.push('^');
                out.push_str(&e.to_string());
            }
        }
        out
    }

    /// Parses the canonical text form (and some looser variants: `*`
    /// between coefficient and variable, arbitrary term order, repeated
    /// exponents).
    pub fn parse_in(input: &str, var: char) -> Result<Self, LaurentError> {
        let err = |reason: &str| LaurentError::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty input"));
        }
        // Split into signed terms; a '-' directly after '^' belongs to the exponent.
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        let mut prev: Option<char> = None;
        for ch in compact.chars() {
            if (ch == '+' || ch == '-') && prev != Some('^') {
                if !cur.is_empty() {
                    terms.push((neg, std::mem::take(&mut cur)));
                } else if prev.is_some() && prev != Some('+') && prev != Some('-') {
                    return Err(err("dangling sign"));
                }
                neg = ch == '-';
            } else {
                cur.push(ch);
            }
            prev = Some(ch);
        }
        if cur.is_empty() {
            return Err(err("trailing sign"));
        }
        terms.push((neg, cur));

        let mut p = Self::zero();
        for (neg, t) in terms {
            let (coef_part, exp) = match t.find(var) {
                None => (t.as_str(), 0),
                Some(pos) => {
                    let rest = &t[pos + var.len_utf8()..];
                    let exp = if rest.is_empty() {
                        1
                    } else if let Some(e) = rest.strip_prefix('^') {
                        e.parse::<i32>().map_err(|_| err("bad exponent"))?
                    } else {
                        return Err(err("unexpected text after variable"));
                    };
                    (t[..pos].trim_end_matches('*'), exp)
                }
            };
            let c = if coef_part.is_empty() {
                BigInt::one()
            } else {
                BigInt::from_str(coef_part).map_err(|_| err("bad coefficient"))?
            };
            p.add_term(exp, if neg { -c } else { c });
        }
        Ok(p)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text('v'))
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({})", self.to_text('v'))
    }
}

impl FromStr for LaurentPoly {
    type Err = LaurentError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_in(s, 'v')
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        Self::monomial(c, 0)
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (&e, c) in &rhs.coeffs {
            self.add_term(e, c.clone());
        }
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        for (&e, c) in &rhs.coeffs {
            self.add_term(e, -c);
        }
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&ea, ca) in &self.coeffs {
            for (&eb, cb) in &rhs.coeffs {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

/// Converts an `h`-polynomial in `v` to the Kazhdan-Lusztig polynomial in
/// `q`: the coefficient of `q^j` in the result is the coefficient of
/// `v^(ldiff - 2j)` in `h`.
pub fn h_to_p(h: &LaurentPoly, ldiff: i32) -> Result<LaurentPoly, LaurentError> {
    let mut p = LaurentPoly::zero();
    for (e, c) in h.terms() {
        if e > ldiff || (ldiff - e) % 2 != 0 {
            return Err(LaurentError::Parity { exponent: e, ldiff });
        }
        p.add_term((ldiff - e) / 2, c.clone());
    }
    Ok(p)
}

/// Inverse of [`h_to_p`]: `h(v) = v^ldiff * P(v^-2)`.
pub fn p_to_h(p: &LaurentPoly, ldiff: i32) -> LaurentPoly {
    LaurentPoly {
        coeffs: p.coeffs.iter().map(|(&j, c)| (ldiff - 2 * j, c.clone())).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let a = p("v^-1 + v");
        assert_eq!(&a * &a, p("v^-2 + 2 + v^2"));
        assert_eq!(&a + &LaurentPoly::zero(), a);
        let d = &p("v^4 + v^2") - &p("v^2");
        assert_eq!(d, p("v^4"));
        assert_eq!(d.len(), 1);
    }

    #[test]
    fn bar_examples() {
        assert_eq!(p("v + v^3").bar(), p("v^-3 + v^-1"));
        assert_eq!(p("5").bar(), p("5"));
    }

    #[test]
    fn text_form() {
        assert_eq!(p("v^2 + 2 + v^-2").to_string(), "v^-2 + 2 + v^2");
        assert_eq!(p("v - v^-1").to_string(), "-v^-1 + v");
        assert_eq!(p("-3v^2 + 1").to_string(), "1 - 3v^2");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert_eq!(LaurentPoly::parse_in("1 + q", 'q').unwrap().to_text('q'), "1 + q");
        assert_eq!(p("2*v^3 - v^3"), p("v^3"));
        assert!("v^".parse::<LaurentPoly>().is_err());
        assert!("1 +".parse::<LaurentPoly>().is_err());
        assert!("x".parse::<LaurentPoly>().is_err());
    }

    #[test]
    fn h_to_p_examples() {
        let q = |s: &str| LaurentPoly::parse_in(s, 'q').unwrap();
        assert_eq!(h_to_p(&p("v^4 + v^2"), 4).unwrap(), q("1 + q"));
        assert_eq!(h_to_p(&p("v^7"), 7).unwrap(), q("1"));
        assert_eq!(h_to_p(&p("1"), 0).unwrap(), q("1"));
        assert_eq!(
            h_to_p(&p("v^3"), 4),
            Err(LaurentError::Parity { exponent: 3, ldiff: 4 })
        );
        assert!(h_to_p(&p("v^6"), 4).is_err());
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        proptest::collection::vec((-6i32..=6, -20i64..=20), 0..6).prop_map(LaurentPoly::from_terms)
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn bar_is_ring_involution(a in arb_poly(), b in arb_poly()) {
            prop_assert_eq!(a.bar().bar(), a.clone());
            prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
        }

        #[test]
        fn text_roundtrip(a in arb_poly()) {
            prop_assert_eq!(a.to_string().parse::<LaurentPoly>().unwrap(), a);
        }

        #[test]
        fn p_to_h_inverts(terms in proptest::collection::vec((0i32..=5, 1i64..=9), 0..5), extra in 0i32..4) {
            let pq = LaurentPoly::from_terms(terms);
            let ldiff = 2 * pq.max_exp().unwrap_or(0) + extra;
            let h = p_to_h(&pq, ldiff);
            prop_assert_eq!(h_to_p(&h, ldiff).unwrap(), pq);
        }
    }
}
