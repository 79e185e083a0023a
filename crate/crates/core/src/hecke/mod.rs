//! The Hecke algebra of a finite Coxeter group over `Z[v, v^-1]`.
//!
//! Normalization: `H_s^2 = H_e + (v^-1 - v) H_s`, `bar(v) = v^-1`,
//! `bar(H_s) = H_s + (v - v^-1) H_e`, and the Kazhdan-Lusztig basis element
//! `H̲_x = H_x + sum_{y<x} h_{y,x} H_y` with `h_{y,x} in v Z[v]`. In this
//! normalization `h_{y,x}(v) = v^{l(x)-l(y)} P_{y,x}(v^-2)`.

mod kl;
mod rpoly;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::coxeter::{Element, GroupTable};
use crate::laurent::LaurentPoly;

pub use kl::KLTable;
pub use rpoly::{KlRecursive, RPolynomials};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// `v^-1 - v`
fn quad_coeff() -> LaurentPoly {
    LaurentPoly::from_terms([(-1, 1), (1, -1)])
}

/// A finite combination `sum p_y H_y`; zero coefficients are never stored.
#[derive(Clone)]
pub struct HeckeElement {
    table: Arc<GroupTable>,
    terms: BTreeMap<u32, LaurentPoly>,
}

impl PartialEq for HeckeElement {
    fn eq(&self, other: &Self) -> bool {
        self.table.owner() == other.table.owner() && self.terms == other.terms
    }
}

impl Eq for HeckeElement {}

impl HeckeElement {
    pub fn zero(table: Arc<GroupTable>) -> Self {
        Self {
            table,
            terms: BTreeMap::new(),
        }
    }

    /// The standard basis element `H_w` for an element index.
    pub fn standard(table: Arc<GroupTable>, w: u32) -> Self {
        let mut h = Self::zero(table);
        h.terms.insert(w, LaurentPoly::one());
        h
    }

    pub fn identity(table: Arc<GroupTable>) -> Self {
        Self::standard(table, 0)
    }

    pub(crate) fn from_index_terms(
        table: Arc<GroupTable>,
        terms: impl IntoIterator<Item = (u32, LaurentPoly)>,
    ) -> Self {
        let mut h = Self::zero(table);
        for (w, p) in terms {
            h.add_at(w, &p);
        }
        h
    }

    /// `H̲_s = H_s + v H_e`.
    pub fn kl_generator(table: Arc<GroupTable>, s: usize) -> Self {
        let s_idx = table.left_mul(s, 0);
        Self::from_index_terms(table, [(s_idx, LaurentPoly::one()), (0, LaurentPoly::var())])
    }

    pub fn table(&self) -> &Arc<GroupTable> {
        &self.table
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `H_w`.
    pub fn coeff(&self, w: &Element) -> LaurentPoly {
        self.table
            .index_of(w)
            .and_then(|i| self.terms.get(&i).cloned())
            .unwrap_or_default()
    }

    pub fn coeff_index(&self, w: u32) -> Option<&LaurentPoly> {
        self.terms.get(&w)
    }

    /// Terms in element order (length, then canonical key).
    pub fn terms(&self) -> impl Iterator<Item = (&Element, &LaurentPoly)> + '_ {
        self.terms.iter().map(|(&i, p)| (self.table.element(i), p))
    }

    pub fn index_terms(&self) -> impl DoubleEndedIterator<Item = (u32, &LaurentPoly)> + '_ {
        self.terms.iter().map(|(&i, p)| (i, p))
    }

    pub(crate) fn add_at(&mut self, w: u32, p: &LaurentPoly) {
        if p.is_zero() {
            return;
        }
        let entry = self.terms.entry(w).or_default();
        *entry += p;
        if entry.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&w, p) in &other.terms {
            out.add_at(w, p);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&w, p) in &other.terms {
            out.add_at(w, &-p);
        }
        out
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(&w, p)| (w, p * c))
            .filter(|(_, p)| !p.is_zero())
            .collect();
        Self {
            table: self.table.clone(),
            terms,
        }
    }

    /// Multiplication by the standard generator `H_s` on either side.
    pub fn std_mult_gen(&self, s: usize, side: Side) -> Self {
        let quad = quad_coeff();
        let mut out = Self::zero(self.table.clone());
        for (&y, p) in &self.terms {
            let ys = match side {
                Side::Right => self.table.right_mul(y, s),
                Side::Left => self.table.left_mul(s, y),
            };
            out.add_at(ys, p);
            if self.table.length(ys) < self.table.length(y) {
                out.add_at(y, &(p * &quad));
            }
        }
        out
    }

    /// Multiplication by `H̲_s = H_s + v` on either side.
    pub fn kl_mult_gen(&self, s: usize, side: Side) -> Self {
        self.std_mult_gen(s, side).add(&self.scale(&LaurentPoly::var()))
    }

    /// Product in the Hecke algebra.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.table.clone());
        for (&y, p) in &self.terms {
            // H_y * other = H_{a1}(H_{a2}( ... (H_{ak} other)))
            let mut acc = other.clone();
            for &s in self.table.word(y).iter().rev() {
                acc = acc.std_mult_gen(s as usize, Side::Left);
            }
            out = out.add(&acc.scale(p));
        }
        out
    }

    /// The bar involution: `bar(p H_y) = bar(p) bar(H_y)`, with
    /// `bar(H_y)` the product of `bar(H_s)` along a reduced word of `y`.
    pub fn bar_involution(&self) -> Self {
        let dual = LaurentPoly::from_terms([(1, 1), (-1, -1)]);
        let mut out = Self::zero(self.table.clone());
        for (&y, p) in &self.terms {
            let mut acc = Self::identity(self.table.clone());
            for &s in self.table.word(y).iter().rev() {
                let s = s as usize;
                acc = acc.std_mult_gen(s, Side::Left).add(&acc.scale(&dual));
            }
            out = out.add(&acc.scale(&p.bar()));
        }
        out
    }

    /// Evaluates the element at `v = 1` coefficientwise, i.e. the image in
    /// the group algebra.
    pub fn specialize_one(&self) -> BTreeMap<u32, num_bigint::BigInt> {
        self.terms.iter().map(|(&w, p)| (w, p.eval_one())).collect()
    }
}

impl fmt::Debug for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for HeckeElement {
    /// `(p) H_word + ...` with 1-based digit words.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&w, p)| {
                let word = format_word(self.table.word(w), self.table.rank());
                let name = if word.is_empty() { "H_e".to_string() } else { format!("H_{word}") };
                if *p == LaurentPoly::one() {
                    name
                } else {
                    format!("({p}) {name}")
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

pub(crate) fn format_word(word: &[u8], rank: usize) -> String {
    if rank >= 10 {
        word.iter().map(|s| (s + 1).to_string()).collect::<Vec<_>>().join(",")
    } else {
        word.iter().map(|s| char::from(b'1' + s)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::CoxeterSystem;

    fn v(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn generator_rules() {
        let sys = CoxeterSystem::from_label("A2").unwrap();
        let t = sys.table().unwrap();
        let s = t.left_mul(0, 0);
        let he = HeckeElement::identity(t.clone());
        let hs = HeckeElement::standard(t.clone(), s);
        assert_eq!(he.std_mult_gen(0, Side::Right), hs);
        let ss = hs.std_mult_gen(0, Side::Right);
        assert_eq!(
            ss,
            HeckeElement::from_index_terms(t.clone(), [(0, v("1")), (s, v("v^-1 - v"))])
        );
        let sss = ss.std_mult_gen(0, Side::Right);
        let expected = HeckeElement::from_index_terms(
            t.clone(),
            [(s, v("1")), (0, v("v^-1 - v")), (s, &v("v^-1 - v") * &v("v^-1 - v"))],
        );
        assert_eq!(sss, expected);
        assert_eq!(sss, hs.mul(&hs).mul(&hs));
        assert_eq!(ss, hs.std_mult_gen(0, Side::Left));
    }

    #[test]
    fn bar_examples() {
        let sys = CoxeterSystem::from_label("A2").unwrap();
        let t = sys.table().unwrap();
        let he = HeckeElement::identity(t.clone());
        assert_eq!(he.bar_involution(), he);
        let s = t.left_mul(0, 0);
        let hs = HeckeElement::standard(t.clone(), s);
        let bar_hs = hs.bar_involution();
        assert_eq!(
            bar_hs,
            HeckeElement::from_index_terms(t.clone(), [(s, v("1")), (0, v("v - v^-1"))])
        );
        assert_eq!(hs.mul(&bar_hs), he);
        for x in 0..t.len() as u32 {
            let hx = HeckeElement::standard(t.clone(), x);
            assert_eq!(hx.bar_involution().bar_involution(), hx);
        }
        let ks = HeckeElement::kl_generator(t.clone(), 1);
        assert_eq!(ks.bar_involution(), ks);
    }

    #[test]
    fn bar_is_multiplicative() {
        let sys = CoxeterSystem::from_label("B2").unwrap();
        let t = sys.table().unwrap();
        for a in 0..t.len() as u32 {
            for b in 0..t.len() as u32 {
                let ha = HeckeElement::standard(t.clone(), a).scale(&v("2v + v^-3"));
                let hb = HeckeElement::standard(t.clone(), b);
                assert_eq!(
                    ha.mul(&hb).bar_involution(),
                    ha.bar_involution().mul(&hb.bar_involution())
                );
            }
        }
    }
}
