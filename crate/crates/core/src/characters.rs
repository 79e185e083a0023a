//! Characters of Soergel-type objects in the Hecke algebra: Bott-Samelson
//! products, decomposition into the Kazhdan-Lusztig basis, standard and
//! costandard shifts, and tilting characters. No bimodule is ever built;
//! graded ranks are read off from these characters.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::coxeter::{CoxeterError, Element};
use crate::hecke::{HeckeElement, KLTable, Side};
use crate::laurent::LaurentPoly;
use crate::parabolic::{Coset, CosetTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharacterError {
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error("generator {s} is a right descent of the element")]
    Descent { s: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    Delta,
    Nabla,
}

/// `Delta_y = R_y[-l(y)]` or `nabla_y = R_y[l(y)]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardCharacter {
    pub element: Element,
    pub shift: i32,
    pub flavor: Flavor,
}

impl StandardCharacter {
    pub fn delta(y: &Element) -> Self {
        Self {
            element: y.clone(),
            shift: -(y.length() as i32),
            flavor: Flavor::Delta,
        }
    }

    pub fn nabla(y: &Element) -> Self {
        Self {
            element: y.clone(),
            shift: y.length() as i32,
            flavor: Flavor::Nabla,
        }
    }
}

/// Graded multiplicities `c_y(v)` in `h = sum_y c_y H̲_y`, keyed by element
/// index (ascending = length then key).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KLMultiplicities {
    entries: BTreeMap<u32, LaurentPoly>,
}

impl KLMultiplicities {
    pub fn get_index(&self, y: u32) -> Option<&LaurentPoly> {
        self.entries.get(&y)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &LaurentPoly)> + '_ {
        self.entries.iter().map(|(&y, c)| (y, c))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Rebuilds `sum_y c_y H̲_y`.
    pub fn reconstruct(&self, kl: &KLTable) -> HeckeElement {
        self.entries.iter().fold(HeckeElement::zero(kl.group().clone()), |acc, (&y, c)| {
            acc.add(&kl.kl_basis_index(y).scale(c))
        })
    }
}

/// `H̲_{s_1} H̲_{s_2} ... H̲_{s_k}` for a word of 0-based generators, in the
/// order written; the empty word gives `H_e`.
pub fn bs_character(kl: &KLTable, word: &[usize]) -> Result<HeckeElement, CoxeterError> {
    let rank = kl.system().rank();
    let mut h = HeckeElement::identity(kl.group().clone());
    for &s in word {
        if s >= rank {
            return Err(CoxeterError::BadGenerator(s + 1));
        }
        h = h.kl_mult_gen(s, Side::Right);
    }
    Ok(h)
}

/// Expands `h` in the Kazhdan-Lusztig basis by repeatedly removing the
/// top term: the largest index in the support is Bruhat-maximal there.
pub fn decompose_kl(kl: &KLTable, h: &HeckeElement) -> KLMultiplicities {
    let mut rest = h.clone();
    let mut entries = BTreeMap::new();
    loop {
        let Some((y, c)) = rest.index_terms().next_back().map(|(y, c)| (y, c.clone())) else {
            break;
        };
        rest = rest.sub(&kl.kl_basis_index(y).scale(&c));
        entries.insert(y, c);
    }
    KLMultiplicities { entries }
}

/// Multiplicities `m(y)` in `H̲_x H̲_s = H̲_{xs} + sum_y m(y) H̲_y` for `xs > x`.
pub fn branch_multiplicities(
    kl: &KLTable,
    x: &Element,
    s: usize,
) -> Result<BTreeMap<u32, LaurentPoly>, CharacterError> {
    let t = kl.group();
    let xi = t.index_of(x).ok_or(CoxeterError::OwnerMismatch)?;
    if s >= t.rank() {
        return Err(CoxeterError::BadGenerator(s + 1).into());
    }
    if t.right_descents(xi).contains(s) {
        return Err(CharacterError::Descent { s });
    }
    let xs = t.right_mul(xi, s);
    let product = kl.kl_basis_index(xi).kl_mult_gen(s, Side::Right);
    let mut mult = decompose_kl(kl, &product).entries;
    let top = mult.remove(&xs);
    debug_assert_eq!(top, Some(LaurentPoly::one()));
    Ok(mult)
}

/// Graded rank of `Hom(B_x, nabla_y)`: the polynomial `h_{y,x}`.
pub fn nabla_hom_rank(kl: &KLTable, x: &Element, y: &Element) -> Result<LaurentPoly, CoxeterError> {
    kl.h_polynomial(y, x)
}

/// The character of the indecomposable tilting object attached to a coset,
/// together with the twisting element (the longest element of the ambient
/// group). The twist changes the ring action only, never multiplicities.
#[derive(Debug, Clone)]
pub struct TiltingCharacter {
    pub character: HeckeElement,
    pub longest_rep: Element,
    pub twist: Element,
}

pub fn tilting_character(kl: &KLTable, cosets: &CosetTable, coset: &Coset) -> Result<TiltingCharacter, CoxeterError> {
    if cosets.get(&coset.id).is_none() || kl.system() != cosets.system() {
        return Err(CoxeterError::OwnerMismatch);
    }
    Ok(TiltingCharacter {
        character: kl.kl_basis(&coset.longest)?,
        longest_rep: coset.longest.clone(),
        twist: kl.system().longest_element(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{CoxeterSystem, GeneratorSet};

    fn setup(label: &str) -> (CoxeterSystem, KLTable) {
        let sys = CoxeterSystem::from_label(label).unwrap();
        let kl = KLTable::new(&sys).unwrap();
        (sys, kl)
    }

    fn v(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn bs_examples() {
        let (sys, kl) = setup("A2");
        let t = kl.group().clone();
        assert_eq!(bs_character(&kl, &[]).unwrap(), HeckeElement::identity(t.clone()));
        assert_eq!(bs_character(&kl, &[0]).unwrap(), HeckeElement::kl_generator(t.clone(), 0));
        let w0 = sys.longest_element();
        let s1 = sys.generator(0).unwrap();
        let bs = bs_character(&kl, &[0, 1, 0]).unwrap();
        assert_eq!(bs, kl.kl_basis(&w0).unwrap().add(&kl.kl_basis(&s1).unwrap()));
        let dec = decompose_kl(&kl, &bs);
        assert_eq!(dec.len(), 2);
        assert_eq!(dec.get_index(t.index_of(&w0).unwrap()), Some(&LaurentPoly::one()));
        assert_eq!(dec.get_index(t.index_of(&s1).unwrap()), Some(&LaurentPoly::one()));
        assert!(bs_character(&kl, &[2]).is_err());
    }

    #[test]
    fn decompose_examples() {
        let (sys, kl) = setup("A2");
        let t = kl.group().clone();
        let x = sys.parse_element("12").unwrap();
        let dec = decompose_kl(&kl, &kl.kl_basis(&x).unwrap());
        assert_eq!(dec.iter().collect::<Vec<_>>(), vec![(t.index_of(&x).unwrap(), &LaurentPoly::one())]);
        let ss = bs_character(&kl, &[1, 1]).unwrap();
        let dec = decompose_kl(&kl, &ss);
        let s2 = t.index_of(&sys.generator(1).unwrap()).unwrap();
        assert_eq!(dec.iter().collect::<Vec<_>>(), vec![(s2, &v("v^-1 + v"))]);
        assert_eq!(dec.reconstruct(&kl), ss);
    }

    #[test]
    fn branch_examples() {
        let (sys, kl) = setup("A2");
        let t = kl.group().clone();
        assert!(branch_multiplicities(&kl, &sys.identity(), 0).unwrap().is_empty());
        let s1 = sys.generator(0).unwrap();
        assert!(branch_multiplicities(&kl, &s1, 1).unwrap().is_empty());
        let x = sys.parse_element("12").unwrap();
        let m = branch_multiplicities(&kl, &x, 0).unwrap();
        assert_eq!(m.into_iter().collect::<Vec<_>>(), vec![(t.index_of(&s1).unwrap(), LaurentPoly::one())]);
        assert!(matches!(
            branch_multiplicities(&kl, &s1, 0),
            Err(CharacterError::Descent { s: 0 })
        ));
    }

    #[test]
    fn nabla_hom_examples() {
        let (sys, kl) = setup("A2");
        let w0 = sys.longest_element();
        let e = sys.identity();
        assert_eq!(nabla_hom_rank(&kl, &w0, &w0).unwrap(), LaurentPoly::one());
        assert_eq!(nabla_hom_rank(&kl, &w0, &e).unwrap(), v("v^3"));
        let s1 = sys.generator(0).unwrap();
        let s2 = sys.generator(1).unwrap();
        assert!(nabla_hom_rank(&kl, &s1, &s2).unwrap().is_zero());
        let d = StandardCharacter::delta(&w0);
        let n = StandardCharacter::nabla(&w0);
        assert_eq!((d.shift, n.shift), (-3, 3));
    }

    #[test]
    fn tilting_examples() {
        let (sys, kl) = setup("A2");
        let w0 = sys.longest_element();
        let regular = CosetTable::new(&sys, GeneratorSet::empty()).unwrap();
        let c = regular.coset_of(&w0).unwrap();
        assert_eq!(tilting_character(&kl, &regular, c).unwrap().character, kl.kl_basis(&w0).unwrap());
        let sing = CosetTable::new(&sys, GeneratorSet::from_indices([0])).unwrap();
        let c = sing.coset_of(&sys.identity()).unwrap();
        let tc = tilting_character(&kl, &sing, c).unwrap();
        assert_eq!(tc.character, kl.kl_basis(&sys.generator(0).unwrap()).unwrap());
        assert_eq!(tc.twist, w0);
        let full = CosetTable::new(&sys, GeneratorSet::full(2)).unwrap();
        let tc = tilting_character(&kl, &full, &full.cosets()[0]).unwrap();
        assert_eq!(tc.character, kl.kl_basis(&w0).unwrap());
    }
}
