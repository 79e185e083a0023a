//! Standard parabolic subgroups `W_I` and the left cosets `x W_I`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::coxeter::{CoxeterError, CoxeterSystem, Element, ElementKey, GeneratorSet, GroupTable};
use crate::laurent::LaurentPoly;

/// Identifies a coset by the canonical key of its shortest representative.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CosetId(ElementKey);

impl CosetId {
    pub fn key(&self) -> &ElementKey {
        &self.0
    }
}

impl fmt::Debug for CosetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CosetId({:?})", self.0)
    }
}

#[derive(Clone, Debug)]
pub struct Coset {
    pub id: CosetId,
    pub shortest: Element,
    pub longest: Element,
    pub(crate) shortest_index: u32,
    pub(crate) longest_index: u32,
}

impl Coset {
    pub fn shortest_index(&self) -> u32 {
        self.shortest_index
    }

    pub fn longest_index(&self) -> u32 {
        self.longest_index
    }
}

/// The decomposition `W = disjoint union of x W_I`, cosets ordered by their
/// shortest representatives (length, then key).
pub struct CosetTable {
    system: CoxeterSystem,
    table: Arc<GroupTable>,
    subset: GeneratorSet,
    longest_in_subset: Element,
    cosets: Vec<Coset>,
    /// element index -> position in `cosets`
    membership: Vec<u32>,
    by_id: HashMap<CosetId, usize>,
}

impl CosetTable {
    pub fn new(system: &CoxeterSystem, subset: GeneratorSet) -> Result<Self, CoxeterError> {
        if !subset.is_subset(GeneratorSet::full(system.rank())) {
            return Err(CoxeterError::BadGenerator(subset.iter().last().unwrap_or(0) + 1));
        }
        let table = system.table()?;
        let w_i = system.longest_in(subset);
        let w_i_idx = table.index_of(&w_i).unwrap();
        let n = table.len();
        // shortest representative: strip right descents in I
        let mut shortest_of = vec![0u32; n];
        for w in 0..n as u32 {
            shortest_of[w as usize] = match (table.right_descents(w).bits() & subset.bits()).trailing_zeros() {
                64 => w,
                s => shortest_of[table.right_mul(w, s as usize) as usize],
            };
        }
        let mut cosets = Vec::new();
        let mut position = HashMap::new();
        for w in 0..n as u32 {
            if shortest_of[w as usize] == w {
                let longest = table.multiply(w, w_i_idx);
                position.insert(w, cosets.len() as u32);
                cosets.push(Coset {
                    id: CosetId(table.element(w).key().clone()),
                    shortest: table.element(w).clone(),
                    longest: table.element(longest).clone(),
                    shortest_index: w,
                    longest_index: longest,
                });
            }
        }
        let membership = shortest_of.iter().map(|s| position[s]).collect();
        let by_id = cosets.iter().enumerate().map(|(i, c)| (c.id.clone(), i)).collect();
        Ok(Self {
            system: system.clone(),
            table,
            subset,
            longest_in_subset: w_i,
            cosets,
            membership,
            by_id,
        })
    }

    pub fn system(&self) -> &CoxeterSystem {
        &self.system
    }

    pub fn subset(&self) -> GeneratorSet {
        self.subset
    }

    /// `w_I`.
    pub fn longest_in_subset(&self) -> &Element {
        &self.longest_in_subset
    }

    pub fn cosets(&self) -> &[Coset] {
        &self.cosets
    }

    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }

    /// The coset `w W_I`.
    pub fn coset_of(&self, w: &Element) -> Result<&Coset, CoxeterError> {
        let i = self.table.index_of(w).ok_or(CoxeterError::OwnerMismatch)?;
        Ok(&self.cosets[self.membership[i as usize] as usize])
    }

    pub fn get(&self, id: &CosetId) -> Option<&Coset> {
        self.by_id.get(id).map(|&i| &self.cosets[i])
    }

    /// Elements of the coset, ascending.
    pub fn members(&self, coset: &Coset) -> Vec<Element> {
        let pos = self.membership[coset.shortest_index as usize];
        self.membership
            .iter()
            .enumerate()
            .filter(|(_, &m)| m == pos)
            .map(|(w, _)| self.table.element(w as u32).clone())
            .collect()
    }
}

/// `pi_I(v) = sum_{z in W_I} v^{l(w_I) - 2 l(z)}`.
pub fn poincare_poly(system: &CoxeterSystem, subset: GeneratorSet) -> LaurentPoly {
    let elements = system.parabolic_elements(subset);
    let top = elements.iter().map(Element::length).max().unwrap_or(0) as i32;
    let mut p = LaurentPoly::zero();
    for z in &elements {
        p.add_term(top - 2 * z.length() as i32, 1.into());
    }
    p
}
