//! Rational weights in the fundamental-weight basis, the dot action, and the
//! integrality / isotropy reflection subgroups of a weight.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Cartan, CoxeterError, CoxeterSystem, Element, GeneratorSet};

/// Coordinates `lambda_i = <lambda, alpha_i^vee>`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Weight {
    coords: Vec<BigRational>,
}

impl Weight {
    pub fn new(coords: Vec<BigRational>) -> Self {
        Self { coords }
    }

    pub fn from_integers(coords: &[i64]) -> Self {
        Self::new(coords.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn zero(rank: usize) -> Self {
        Self::new(vec![BigRational::zero(); rank])
    }

    /// Half the sum of the positive roots: all coordinates 1.
    pub fn rho(rank: usize) -> Self {
        Self::new(vec![BigRational::one(); rank])
    }

    pub fn fundamental(rank: usize, i: usize) -> Self {
        let mut w = Self::zero(rank);
        w.coords[i] = BigRational::one();
        w
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coords.iter().map(|a| -a).collect())
    }

    /// `<lambda, beta^vee>` for a coroot given in simple-coroot coordinates.
    pub fn pair_coroot(&self, coroot: &[i32]) -> BigRational {
        self.coords
            .iter()
            .zip(coroot)
            .filter(|(_, &c)| c != 0)
            .map(|(l, &c)| l * BigInt::from(c))
            .sum()
    }

    /// `s_i(lambda) = lambda - lambda_i alpha_i`, where `alpha_i` has
    /// fundamental coordinates `c[j][i]`.
    fn reflect_simple(&self, cartan: &Cartan, i: usize) -> Self {
        let li = self.coords[i].clone();
        if li.is_zero() {
            return self.clone();
        }
        Self::new(
            self.coords
                .iter()
                .enumerate()
                .map(|(j, lj)| lj - &li * BigInt::from(cartan[j][i]))
                .collect(),
        )
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Weight({self})")
    }
}

impl FromStr for Weight {
    type Err = CoxeterError;

    /// Comma-separated rationals, e.g. `0,-1/2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let coords = s
            .split(',')
            .map(|p| {
                BigRational::from_str(p.trim()).map_err(|_| CoxeterError::Parse {
                    what: "weight",
                    input: s.to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(coords))
    }
}

/// The reflection subgroups attached to a weight `lambda`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isotropy {
    /// Positive roots `beta` (simple-root coordinates) with
    /// `<lambda + rho, beta^vee>` integral; they generate `W_lambdabar`.
    pub integral_roots: Vec<Vec<i32>>,
    /// The canonical simple system of the integral roots.
    pub integral_simple: Vec<Vec<i32>>,
    /// Positive roots with `<lambda + rho, beta^vee> = 0`; they generate `W_lambda`.
    pub singular_roots: Vec<Vec<i32>>,
    /// The canonical simple system of the singular roots.
    pub singular_simple: Vec<Vec<i32>>,
    /// Whether every root is integral, i.e. `W_lambdabar = W`.
    pub integral: bool,
}

impl CoxeterSystem {
    fn check_weight(&self, lambda: &Weight) -> Result<&super::RootDatum, CoxeterError> {
        let rd = self.root_datum()?;
        if lambda.rank() != self.rank() {
            return Err(CoxeterError::Parse {
                what: "weight",
                input: lambda.to_string(),
            });
        }
        Ok(rd)
    }

    /// Linear action `w(lambda)`.
    pub fn act(&self, w: &Element, lambda: &Weight) -> Result<Weight, CoxeterError> {
        let rd = self.check_weight(lambda)?;
        self.check(w)?;
        let word = self.reduced_word(w);
        Ok(word
            .iter()
            .rev()
            .fold(lambda.clone(), |acc, &s| acc.reflect_simple(&rd.cartan, s)))
    }

    /// Dot action `w . lambda = w(lambda + rho) - rho`.
    pub fn dot_action(&self, w: &Element, lambda: &Weight) -> Result<Weight, CoxeterError> {
        let rho = Weight::rho(self.rank());
        Ok(self.act(w, &lambda.add(&rho))?.sub(&rho))
    }

    /// `<lambda + rho, beta^vee>` for every positive root `beta`, in
    /// positive-root order.
    pub fn shifted_pairings(&self, lambda: &Weight) -> Result<Vec<BigRational>, CoxeterError> {
        let rd = self.check_weight(lambda)?;
        let shifted = lambda.add(&Weight::rho(self.rank()));
        Ok(rd.positive_coroots.iter().map(|c| shifted.pair_coroot(c)).collect())
    }

    /// `lambda` is rho-dominant when `<lambda + rho, beta^vee>` is never a
    /// negative integer.
    pub fn is_rho_dominant(&self, lambda: &Weight) -> Result<bool, CoxeterError> {
        Ok(self
            .shifted_pairings(lambda)?
            .iter()
            .all(|p| !(p.is_integer() && p.is_negative())))
    }

    pub fn isotropy_groups(&self, lambda: &Weight) -> Result<Isotropy, CoxeterError> {
        let rd = self.root_datum()?;
        let pairings = self.shifted_pairings(lambda)?;
        let pick = |pred: &dyn Fn(&BigRational) -> bool| -> Vec<usize> {
            (0..pairings.len()).filter(|&k| pred(&pairings[k])).collect()
        };
        let integral = pick(&|p| p.is_integer());
        let singular = pick(&|p| p.is_zero());
        let roots = |idx: &[usize]| idx.iter().map(|&k| rd.positive_roots[k].clone()).collect();
        Ok(Isotropy {
            integral: integral.len() == rd.positive_roots.len(),
            integral_simple: roots(&self.simple_subsystem(&integral)),
            singular_simple: roots(&self.simple_subsystem(&singular)),
            integral_roots: roots(&integral),
            singular_roots: roots(&singular),
        })
    }

    /// Simple system of the positive subsystem given by positive-root
    /// indices: `beta` is simple iff `s_beta` makes exactly one root of the
    /// subsystem negative.
    pub(crate) fn simple_subsystem(&self, subset: &[usize]) -> Vec<usize> {
        let rd = self.root_datum().expect("crystallographic");
        subset
            .iter()
            .copied()
            .filter(|&b| {
                let negated = subset
                    .iter()
                    .filter(|&&g| {
                        let coef = self.coroot_pairing(b, &rd.positive_roots[g]);
                        rd.positive_roots[g]
                            .iter()
                            .zip(&rd.positive_roots[b])
                            .any(|(x, y)| x - coef * y < 0)
                    })
                    .count();
                negated == 1
            })
            .collect()
    }

    /// `<beta_k^vee, gamma>` for the `k`-th positive root.
    pub(crate) fn coroot_pairing(&self, k: usize, gamma: &[i32]) -> i32 {
        let rd = self.root_datum().expect("crystallographic");
        let n = self.rank();
        let cv = &rd.positive_coroots[k];
        (0..n)
            .filter(|&i| cv[i] != 0)
            .map(|i| cv[i] * (0..n).map(|j| rd.cartan[i][j] * gamma[j]).sum::<i32>())
            .sum()
    }

    /// Re-presents the reflection subgroup generated by the given simple
    /// system (positive-root indices) as a Weyl group of its own.
    pub(crate) fn subsystem_cartan(&self, simple: &[usize]) -> Cartan {
        let rd = self.root_datum().expect("crystallographic");
        simple
            .iter()
            .map(|&a| {
                simple
                    .iter()
                    .map(|&b| self.coroot_pairing(a, &rd.positive_roots[b]))
                    .collect()
            })
            .collect()
    }

    /// `W_lambdabar` as its own system together with the subset of its
    /// simple reflections generating `W_lambda`. Requires rho-dominance.
    pub fn integral_block(&self, lambda: &Weight) -> Result<(CoxeterSystem, GeneratorSet), CoxeterError> {
        if !self.is_rho_dominant(lambda)? {
            return Err(CoxeterError::NotDominant(lambda.to_string()));
        }
        let rd = self.root_datum()?;
        let pairings = self.shifted_pairings(lambda)?;
        let integral: Vec<usize> = (0..pairings.len()).filter(|&k| pairings[k].is_integer()).collect();
        let simple = self.simple_subsystem(&integral);
        let ambient = if simple.len() == self.rank() && simple.iter().enumerate().all(|(i, &k)| i == k) {
            self.clone()
        } else {
            CoxeterSystem::from_cartan(self.subsystem_cartan(&simple))?
        };
        let singular = GeneratorSet::from_indices(
            simple
                .iter()
                .enumerate()
                .filter(|(_, &k)| pairings[k].is_zero())
                .map(|(i, _)| i),
        );
        debug_assert!(rd.positive_roots.len() >= simple.len());
        Ok((ambient, singular))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> CoxeterSystem {
        CoxeterSystem::from_label("A2").unwrap()
    }

    fn w(s: &str) -> Weight {
        s.parse().unwrap()
    }

    #[test]
    fn dot_action_examples() {
        let sys = a2();
        let rho = Weight::rho(2);
        for x in sys.enumerate().unwrap() {
            assert_eq!(sys.dot_action(&x, &rho.neg()).unwrap(), rho.neg());
        }
        let s1 = sys.generator(0).unwrap();
        // -alpha_1 = (-2, 1) in fundamental coordinates
        assert_eq!(sys.dot_action(&s1, &Weight::zero(2)).unwrap(), w("-2,1"));
        let w0 = sys.longest_element();
        assert_eq!(sys.dot_action(&w0, &Weight::zero(2)).unwrap(), w("-2,-2"));
    }

    #[test]
    fn dot_action_requires_roots() {
        let d = CoxeterSystem::dihedral(5);
        assert!(matches!(
            d.dot_action(&d.identity(), &Weight::zero(2)),
            Err(CoxeterError::Unsupported(_))
        ));
    }

    #[test]
    fn isotropy_examples() {
        let sys = a2();
        let iso = sys.isotropy_groups(&Weight::zero(2)).unwrap();
        assert!(iso.integral);
        assert_eq!(iso.integral_simple, vec![vec![1, 0], vec![0, 1]]);
        assert!(iso.singular_roots.is_empty());

        let iso = sys.isotropy_groups(&Weight::rho(2).neg()).unwrap();
        assert_eq!(iso.singular_roots.len(), 3);
        assert_eq!(iso.singular_simple.len(), 2);

        let lambda = Weight::fundamental(2, 0).sub(&Weight::rho(2));
        let iso = sys.isotropy_groups(&lambda).unwrap();
        assert_eq!(iso.singular_roots, vec![vec![0, 1]]);
        assert_eq!(iso.singular_simple, vec![vec![0, 1]]);
    }

    #[test]
    fn non_integral_block() {
        let sys = a2();
        // lambda + rho = (1/2, 1/2): only alpha_1 + alpha_2 is integral
        let lambda = w("-1/2,-1/2");
        let iso = sys.isotropy_groups(&lambda).unwrap();
        assert!(!iso.integral);
        assert_eq!(iso.integral_roots, vec![vec![1, 1]]);
        let (ambient, sing) = sys.integral_block(&lambda).unwrap();
        assert_eq!(ambient.descriptor(), "A1");
        assert!(sing.is_empty());

        // B2 with lambda + rho = (1/2, 1): the integral roots form A1 x A1
        let b2 = CoxeterSystem::from_label("B2").unwrap();
        let lambda = w("-1/2,0");
        let iso = b2.isotropy_groups(&lambda).unwrap();
        assert_eq!(iso.integral_roots.len(), 2);
        let (ambient, _) = b2.integral_block(&lambda).unwrap();
        assert_eq!(ambient.descriptor(), "A1xA1");
        assert_eq!(ambient.order(), 4);
    }

    #[test]
    fn dominance() {
        let sys = a2();
        assert!(sys.is_rho_dominant(&Weight::zero(2)).unwrap());
        assert!(!sys.is_rho_dominant(&w("-2,1")).unwrap());
        assert!(matches!(
            sys.integral_block(&w("-2,1")),
            Err(CoxeterError::NotDominant(_))
        ));
    }

    #[test]
    fn weight_text() {
        assert_eq!(w("0, -1/2").to_string(), "0,-1/2");
        assert!("a,b".parse::<Weight>().is_err());
    }
}
