//! Layer dimensions of the Andersen filtration on `Hom(Delta(lambda_ybar),
//! K(lambda_xbar))`: for longest coset representatives `y, x` the layer `i`
//! has dimension `n^i`, the coefficient of `v^i` in `h_{y,x}`, so that
//! `sum_i dim F^i/F^{i+1} q^{(l(x)-l(y)-i)/2} = P_{y,x}(q)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use thiserror::Error;

use crate::coxeter::{CoxeterError, CoxeterSystem, GeneratorSet, Weight};
use crate::filtration::{gysin_model, layers_to_poly, pairing_layer_dims, FiltrationError};
use crate::hecke::KLTable;
use crate::laurent::{h_to_p, LaurentError, LaurentPoly};
use crate::parabolic::{Coset, CosetId, CosetTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AndersenError {
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error(transparent)]
    Filtration(#[from] FiltrationError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error("coset does not belong to this block")]
    ForeignCoset,
}

/// The pair `W_lambdabar ⊃ W_lambda`: an ambient system and the subset of
/// its simple reflections generating the singular subgroup.
#[derive(Clone, Debug)]
pub struct BlockDescriptor {
    pub ambient: CoxeterSystem,
    pub singular_subset: GeneratorSet,
    pub weight: Option<Weight>,
}

impl BlockDescriptor {
    pub fn new(ambient: CoxeterSystem, singular_subset: GeneratorSet) -> Result<Self, CoxeterError> {
        if !singular_subset.is_subset(GeneratorSet::full(ambient.rank())) {
            return Err(CoxeterError::BadGenerator(singular_subset.iter().last().unwrap_or(0) + 1));
        }
        Ok(Self {
            ambient,
            singular_subset,
            weight: None,
        })
    }
}

/// The block of a rho-dominant weight of a Weyl group.
pub fn block_from_weight(system: &CoxeterSystem, lambda: &Weight) -> Result<BlockDescriptor, CoxeterError> {
    if !system.is_crystallographic() {
        return Err(CoxeterError::Unsupported(format!("weights for {}", system.descriptor())));
    }
    let (ambient, singular_subset) = system.integral_block(lambda)?;
    Ok(BlockDescriptor {
        ambient,
        singular_subset,
        weight: Some(lambda.clone()),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AndersenReport {
    pub ybar_id: CosetId,
    pub xbar_id: CosetId,
    /// Shortest representatives, as words.
    pub ybar: String,
    pub xbar: String,
    /// Longest representatives, as words.
    pub y: String,
    pub x: String,
    pub ldiff: i32,
    pub p: LaurentPoly,
    pub h: LaurentPoly,
    pub layers: BTreeMap<usize, usize>,
    pub total: BigInt,
}

impl AndersenReport {
    /// `sum_i layers[i] q^{(ldiff-i)/2}`; `None` if some layer has the wrong
    /// parity or lies outside `[0, ldiff]`.
    pub fn layer_polynomial(&self) -> Option<LaurentPoly> {
        let mut p = LaurentPoly::zero();
        for (&i, &n) in &self.layers {
            let i = i as i32;
            if i > self.ldiff || (self.ldiff - i) % 2 != 0 {
                return None;
            }
            p.add_term((self.ldiff - i) / 2, BigInt::from(n));
        }
        Some(p)
    }

    /// The identity `sum_i dim F^i/F^{i+1} q^{(ldiff-i)/2} = P` together with
    /// `total = P(1)`.
    pub fn satisfies_identity(&self) -> bool {
        self.layer_polynomial().as_ref() == Some(&self.p) && self.total == self.p.eval_one()
    }
}

/// A block with its coset decomposition and Kazhdan-Lusztig table.
pub struct AndersenBlock {
    descriptor: BlockDescriptor,
    kl: KLTable,
    cosets: CosetTable,
}

impl AndersenBlock {
    pub fn new(descriptor: BlockDescriptor) -> Result<Self, CoxeterError> {
        let kl = KLTable::new(&descriptor.ambient)?;
        Self::with_table(descriptor, kl)
    }

    /// Reuses an existing table of the ambient system.
    pub fn with_table(descriptor: BlockDescriptor, kl: KLTable) -> Result<Self, CoxeterError> {
        if kl.system() != &descriptor.ambient {
            return Err(CoxeterError::OwnerMismatch);
        }
        let cosets = CosetTable::new(&descriptor.ambient, descriptor.singular_subset)?;
        Ok(Self { descriptor, kl, cosets })
    }

    pub fn descriptor(&self) -> &BlockDescriptor {
        &self.descriptor
    }

    pub fn system(&self) -> &CoxeterSystem {
        &self.descriptor.ambient
    }

    pub fn kl(&self) -> &KLTable {
        &self.kl
    }

    pub fn cosets(&self) -> &CosetTable {
        &self.cosets
    }

    /// The coset containing the element spelled by `word`.
    pub fn coset_of_word(&self, word: &str) -> Result<&Coset, CoxeterError> {
        let w = self.system().parse_element(word)?;
        self.cosets.coset_of(&w)
    }

    pub fn layers(&self, ybar: &Coset, xbar: &Coset) -> Result<AndersenReport, AndersenError> {
        let known = |c: &Coset| self.cosets.get(&c.id).map(Coset::longest_index) == Some(c.longest_index());
        if !known(ybar) || !known(xbar) {
            return Err(AndersenError::ForeignCoset);
        }
        let t = self.kl.group();
        let (yi, xi) = (ybar.longest_index(), xbar.longest_index());
        let ldiff = t.length(xi) as i32 - t.length(yi) as i32;
        let h = self.kl.h_index(yi, xi);
        let p = if h.is_zero() { LaurentPoly::zero() } else { h_to_p(&h, ldiff)? };
        let layers = h
            .terms()
            .map(|(i, c)| (i as usize, usize::try_from(c.clone()).expect("non-negative")))
            .collect();
        let sys = self.system();
        Ok(AndersenReport {
            ybar_id: ybar.id.clone(),
            xbar_id: xbar.id.clone(),
            ybar: sys.word_string(&ybar.shortest),
            xbar: sys.word_string(&xbar.shortest),
            y: sys.word_string(&ybar.longest),
            x: sys.word_string(&xbar.longest),
            ldiff,
            total: p.eval_one(),
            p,
            h,
            layers,
        })
    }

    /// One report per coset pair with `y <= x`, ordered by `xbar` then
    /// `ybar` (each by length, then canonical key).
    pub fn full_table(&self) -> Vec<AndersenReport> {
        self.kl.compute_all();
        let t = self.kl.group();
        let cosets = self.cosets.cosets();
        cosets
            .par_iter()
            .flat_map_iter(|xbar| {
                cosets
                    .iter()
                    .filter(|ybar| t.bruhat_leq(ybar.longest_index(), xbar.longest_index()))
                    .map(|ybar| self.layers(ybar, xbar).expect("cosets of this block"))
                    .collect::<Vec<_>>()
            })
            .collect()
    }
}

pub fn andersen_layers(block: &AndersenBlock, ybar: &Coset, xbar: &Coset) -> Result<AndersenReport, AndersenError> {
    block.layers(ybar, xbar)
}

pub fn full_block_table(block: &AndersenBlock) -> Vec<AndersenReport> {
    block.full_table()
}

/// Recomputes the layers through the graded-sequence model of `h` and its
/// model pairing, and compares them with the report.
pub fn cross_check(report: &AndersenReport) -> Result<bool, AndersenError> {
    if report.h.is_zero() {
        return Ok(report.layers.values().all(|&n| n == 0));
    }
    let ldiff = u32::try_from(report.ldiff).map_err(|_| FiltrationError::Parity {
        exponent: report.h.min_exp().unwrap_or(0),
        ldiff: 0,
    })?;
    let model = gysin_model(&report.h, ldiff)?;
    if !model.is_selfdual() {
        return Ok(false);
    }
    let layers = pairing_layer_dims(&model.pairing_matrix())?;
    Ok(layers == report.layers && layers_to_poly(&layers) == report.h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn block(label: &str, singular: &[usize]) -> AndersenBlock {
        let sys = CoxeterSystem::from_label(label).unwrap();
        AndersenBlock::new(BlockDescriptor::new(sys, GeneratorSet::from_indices(singular.iter().copied())).unwrap()).unwrap()
    }

    fn q(s: &str) -> LaurentPoly {
        LaurentPoly::parse_in(s, 'q').unwrap()
    }

    #[test]
    fn weight_blocks() {
        let a2 = CoxeterSystem::from_label("A2").unwrap();
        let b = block_from_weight(&a2, &Weight::zero(2)).unwrap();
        assert_eq!(b.ambient, a2);
        assert!(b.singular_subset.is_empty());
        let b = block_from_weight(&a2, &Weight::rho(2).neg()).unwrap();
        assert_eq!(b.singular_subset, GeneratorSet::full(2));
        let lambda = Weight::fundamental(2, 0).sub(&Weight::rho(2));
        let b = block_from_weight(&a2, &lambda).unwrap();
        assert_eq!(b.singular_subset, GeneratorSet::from_indices([1]));
        let bad = Weight::from_integers(&[-3, 0]);
        assert!(matches!(block_from_weight(&a2, &bad), Err(CoxeterError::NotDominant(_))));
        let i5 = CoxeterSystem::dihedral(5);
        assert!(matches!(block_from_weight(&i5, &Weight::zero(2)), Err(CoxeterError::Unsupported(_))));
    }

    #[test]
    fn layer_examples() {
        let b = block("A2", &[]);
        let e = b.coset_of_word("").unwrap();
        let w0 = b.coset_of_word("121").unwrap();
        let r = b.layers(e, w0).unwrap();
        assert_eq!(r.layers, BTreeMap::from([(3, 1)]));
        assert_eq!((r.p.clone(), r.total.clone()), (q("1"), BigInt::from(1)));
        assert!(r.satisfies_identity());
        let r = b.layers(w0, w0).unwrap();
        assert_eq!(r.layers, BTreeMap::from([(0, 1)]));
        assert_eq!(r.p, q("1"));

        let b = block("A3", &[]);
        let r = b.layers(b.coset_of_word("").unwrap(), b.coset_of_word("2132").unwrap()).unwrap();
        assert_eq!(r.layers, BTreeMap::from([(2, 1), (4, 1)]));
        assert_eq!(r.p, q("1 + q"));
        assert_eq!(r.total, BigInt::from(2));
        assert!(r.satisfies_identity());
        assert!(cross_check(&r).unwrap());
    }

    #[test]
    fn incomparable_pair_is_empty() {
        let b = block("A2", &[]);
        let r = b.layers(b.coset_of_word("1").unwrap(), b.coset_of_word("2").unwrap()).unwrap();
        assert!(r.layers.is_empty());
        assert!(r.p.is_zero());
        assert_eq!(r.total, BigInt::from(0));
        assert!(r.satisfies_identity());
        assert!(cross_check(&r).unwrap());
    }

    #[test]
    fn a2_tables() {
        let regular = block("A2", &[]).full_table();
        assert_eq!(regular.len(), 19);
        assert!(regular.iter().all(|r| r.p == q("1")));
        let full = block("A2", &[0, 1]).full_table();
        assert_eq!(full.len(), 1);
        assert_eq!((full[0].y.as_str(), full[0].x.as_str()), ("121", "121"));
        let b = block("A2", &[0]);
        let t = b.kl().group().clone();
        let mut expected = 0;
        for xbar in b.cosets().cosets() {
            for ybar in b.cosets().cosets() {
                expected += usize::from(t.bruhat_leq(ybar.longest_index(), xbar.longest_index()));
            }
        }
        let table = b.full_table();
        assert_eq!(table.len(), expected);
        assert!(table.iter().all(|r| r.satisfies_identity() && cross_check(r).unwrap()));
    }

    #[test]
    fn cross_check_negative_control() {
        let b = block("A2", &[]);
        let mut r = b.layers(b.coset_of_word("").unwrap(), b.coset_of_word("121").unwrap()).unwrap();
        assert!(cross_check(&r).unwrap());
        r.layers = BTreeMap::from([(2, 1)]);
        assert!(!cross_check(&r).unwrap());
        assert!(!r.satisfies_identity());
    }

    #[test]
    fn weight_independence() {
        let a2 = CoxeterSystem::from_label("A2").unwrap();
        let tables: Vec<Vec<AndersenReport>> = [Weight::zero(2), Weight::rho(2), Weight::from_integers(&[3, 1])]
            .iter()
            .map(|w| AndersenBlock::new(block_from_weight(&a2, w).unwrap()).unwrap().full_table())
            .collect();
        assert_eq!(tables[0], tables[1]);
        assert_eq!(tables[0], tables[2]);
    }

    #[test]
    fn foreign_coset() {
        let a = block("A2", &[]);
        let b = block("A2", &[0]);
        let c = b.coset_of_word("").unwrap();
        assert!(matches!(a.layers(c, c), Err(AndersenError::ForeignCoset)));
    }
}
