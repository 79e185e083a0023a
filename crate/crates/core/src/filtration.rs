//! Pairing filtrations over the power series ring `Q[[v]]`: Smith valuations
//! of a Gram matrix, the layer dimensions of the induced filtration, and the
//! graded-sequence model of a costalk/stalk pair.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::laurent::LaurentPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiltrationError {
    #[error("a pivot valuation is not determined modulo v^{truncation}")]
    InsufficientTruncation { truncation: usize },
    #[error("matrix is not injective: {remaining} row(s) without a pivot")]
    RankDeficient { remaining: usize },
    #[error("exponent {exponent} has the wrong parity or range for length difference {ldiff}")]
    Parity { exponent: i32, ldiff: u32 },
    #[error("coefficient of v^{exponent} is negative")]
    NegativeCoefficient { exponent: i32 },
    #[error("negative exponent {0} in a power series entry")]
    NegativeExponent(i32),
    #[error("ragged matrix: row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, found: usize, expected: usize },
}

/// A power series known modulo `v^N`.
#[derive(Clone, PartialEq, Eq)]
pub struct PSeries {
    coeffs: Vec<BigRational>,
}

impl PSeries {
    pub fn zero(truncation: usize) -> Self {
        Self {
            coeffs: vec![BigRational::zero(); truncation],
        }
    }

    pub fn one(truncation: usize) -> Self {
        Self::monomial(BigRational::one(), 0, truncation)
    }

    /// `c v^k`, vanishing if `k >= N`.
    pub fn monomial(c: BigRational, k: usize, truncation: usize) -> Self {
        let mut s = Self::zero(truncation);
        if k < truncation {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>, truncation: usize) -> Self {
        coeffs.resize(truncation, BigRational::zero());
        Self { coeffs }
    }

    pub fn from_poly(p: &LaurentPoly, truncation: usize) -> Result<Self, FiltrationError> {
        let mut s = Self::zero(truncation);
        for (e, c) in p.terms() {
            if e < 0 {
                return Err(FiltrationError::NegativeExponent(e));
            }
            if (e as usize) < truncation {
                s.coeffs[e as usize] = BigRational::from_integer(c.clone());
            }
        }
        Ok(s)
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Index of the first nonzero coefficient; `None` if all stored
    /// coefficients vanish (valuation `>= N`).
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.truncation();
        let mut out = vec![BigRational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in other.coeffs[..n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self { coeffs: out }
    }

    /// Multiplicative inverse of a unit (nonzero constant term).
    pub fn inverse(&self) -> Option<Self> {
        let c0 = self.coeffs.first()?;
        if c0.is_zero() {
            return None;
        }
        let inv0 = c0.recip();
        let n = self.truncation();
        let mut out = vec![BigRational::zero(); n];
        out[0] = inv0.clone();
        for k in 1..n {
            let mut acc = BigRational::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &self.coeffs[j] * &out[k - j];
                }
            }
            out[k] = -acc * &inv0;
        }
        Some(Self { coeffs: out })
    }

    /// Divides by `v^k`; the result is known modulo `v^{N-k}`.
    fn shift_down(&self, k: usize) -> Self {
        Self {
            coeffs: self.coeffs[k..].to_vec(),
        }
    }

    /// Multiplies by `v^k` and restores truncation `n`.
    fn shift_up(&self, k: usize, n: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.extend(self.coeffs.iter().take(n - k).cloned());
        Self::from_coeffs(coeffs, n)
    }
}

impl fmt::Debug for PSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("({c})v"),
                _ => format!("({c})v^{k}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "O(v^{})", self.truncation())
        } else {
            write!(f, "{} + O(v^{})", terms.join(" + "), self.truncation())
        }
    }
}

/// A matrix of power series with a common truncation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PSeriesMatrix {
    rows: usize,
    cols: usize,
    truncation: usize,
    entries: Vec<PSeries>,
    /// For matrices of genuine polynomials: the sum over rows of the maximal
    /// entry degree, an upper bound for the valuation of any nonzero minor.
    degree_bound: Option<usize>,
}

impl PSeriesMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<PSeries>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count");
        let truncation = entries.first().map_or(1, PSeries::truncation);
        assert!(entries.iter().all(|e| e.truncation() == truncation), "uniform truncation");
        Self {
            rows,
            cols,
            truncation,
            entries,
            degree_bound: None,
        }
    }

    /// Builds a matrix from polynomial entries with non-negative exponents.
    /// The default truncation is the sum of all entry degrees plus 2.
    pub fn from_polynomials(grid: &[Vec<LaurentPoly>], truncation: Option<usize>) -> Result<Self, FiltrationError> {
        let rows = grid.len();
        let cols = grid.first().map_or(0, Vec::len);
        let mut degree_sum = 0usize;
        let mut bound = 0usize;
        for (r, row) in grid.iter().enumerate() {
            if row.len() != cols {
                return Err(FiltrationError::Ragged {
                    row: r,
                    found: row.len(),
                    expected: cols,
                });
            }
            let mut row_max = 0;
            for p in row {
                if let Some(e) = p.min_exp().filter(|&e| e < 0) {
                    return Err(FiltrationError::NegativeExponent(e));
                }
                let deg = p.max_exp().unwrap_or(0) as usize;
                degree_sum += deg;
                row_max = row_max.max(deg);
            }
            bound += row_max;
        }
        let n = truncation.unwrap_or(degree_sum + 2).max(1);
        let entries = grid
            .iter()
            .flatten()
            .map(|p| PSeries::from_poly(p, n))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            rows,
            cols,
            truncation: n,
            entries,
            degree_bound: Some(bound),
        })
    }

    /// `diag(v^{d_1}, ..., v^{d_r})`.
    pub fn diagonal(valuations: &[usize], truncation: usize) -> Self {
        let r = valuations.len();
        let mut entries = vec![PSeries::zero(truncation); r * r];
        for (k, &d) in valuations.iter().enumerate() {
            entries[k * r + k] = PSeries::monomial(BigRational::one(), d, truncation);
        }
        Self {
            rows: r,
            cols: r,
            truncation,
            entries,
            degree_bound: Some(valuations.iter().sum()),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn entry(&self, r: usize, c: usize) -> &PSeries {
        &self.entries[r * self.cols + c]
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let n = self.truncation.min(other.truncation);
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = PSeries::zero(n);
                for k in 0..self.cols {
                    let a = PSeries::from_coeffs(self.entry(r, k).coeffs[..n].to_vec(), n);
                    let b = PSeries::from_coeffs(other.entry(k, c).coeffs[..n].to_vec(), n);
                    acc = acc.add(&a.mul(&b));
                }
                entries.push(acc);
            }
        }
        Self::new(self.rows, other.cols, entries)
    }
}

/// The valuations `d_k` of the diagonal form of `m` over the valuation ring,
/// ascending. Elimination always pivots on an entry of minimal valuation, so
/// every intermediate entry stays exact modulo `v^N`.
pub fn smith_valuations(m: &PSeriesMatrix) -> Result<Vec<usize>, FiltrationError> {
    let n = m.truncation;
    let mut rows: Vec<Vec<PSeries>> = (0..m.rows)
        .map(|r| m.entries[r * m.cols..(r + 1) * m.cols].to_vec())
        .collect();
    let mut live_cols: Vec<usize> = (0..m.cols).collect();
    let mut out = Vec::with_capacity(m.rows);
    while !rows.is_empty() {
        let mut best: Option<(usize, usize, usize)> = None;
        for (r, row) in rows.iter().enumerate() {
            for (ci, &c) in live_cols.iter().enumerate() {
                if let Some(d) = row[c].valuation() {
                    if best.is_none_or(|(b, _, _)| d < b) {
                        best = Some((d, r, ci));
                    }
                }
            }
        }
        let Some((d, pr, pci)) = best else {
            let rank_deficient = rows.len() > live_cols.len() || m.degree_bound.is_some_and(|b| b < n);
            return Err(if rank_deficient {
                FiltrationError::RankDeficient { remaining: rows.len() }
            } else {
                FiltrationError::InsufficientTruncation { truncation: n }
            });
        };
        let pc = live_cols[pci];
        let pivot_row = rows.swap_remove(pr);
        live_cols.remove(pci);
        let unit_inv = pivot_row[pc].shift_down(d).inverse().expect("pivot is a unit times v^d");
        let reduced: Vec<(usize, PSeries)> = live_cols.iter().map(|&c| (c, pivot_row[c].shift_down(d))).collect();
        for row in rows.iter_mut() {
            if row[pc].valuation().is_none() {
                continue;
            }
            let factor = row[pc].shift_down(d).mul(&unit_inv);
            for (c, p) in &reduced {
                row[*c] = row[*c].sub(&factor.mul(p).shift_up(d, n));
            }
        }
        out.push(d);
    }
    out.sort_unstable();
    Ok(out)
}

/// Histogram of the Smith valuations: layer `i` has dimension
/// `dim F^i - dim F^{i+1}` of the specialized filtration.
pub fn pairing_layer_dims(m: &PSeriesMatrix) -> Result<BTreeMap<usize, usize>, FiltrationError> {
    let mut layers = BTreeMap::new();
    for d in smith_valuations(m)? {
        *layers.entry(d).or_insert(0) += 1;
    }
    Ok(layers)
}

/// The decomposition of a costalk-into-stalk inclusion into elementary
/// sequences `C[v][-i] -> C[v][i] -> (C[v]/(v^i))[i]`, plus a free part of
/// rank `free_rank` in degree 0 on both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSequenceModel {
    pub costalk_degrees: Vec<i32>,
    pub stalk_degrees: Vec<i32>,
    /// Each entry `i > 0` is one summand `(C[v]/(v^i))[i]`.
    pub cokernel_pieces: Vec<u32>,
    pub free_rank: usize,
}

impl GradedSequenceModel {
    /// Degrees of the cokernel summand `(C[v]/(v^i))[i]`.
    pub fn piece_degrees(i: u32) -> Vec<i32> {
        let i = i as i32;
        (0..i).map(|k| i - 1 - 2 * k).collect()
    }

    /// All cokernel degrees, descending.
    pub fn cokernel_degrees(&self) -> Vec<i32> {
        let mut d: Vec<i32> = self.cokernel_pieces.iter().flat_map(|&i| Self::piece_degrees(i)).collect();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    /// Hard Lefschetz: every piece is symmetric about degree 0.
    pub fn is_selfdual(&self) -> bool {
        self.cokernel_pieces.iter().all(|&i| {
            let mut d = Self::piece_degrees(i);
            let mut neg: Vec<i32> = d.iter().map(|x| -x).collect();
            d.sort_unstable();
            neg.sort_unstable();
            d == neg
        })
    }

    /// The Gram matrix `diag(1, ..., 1, v^{i_1}, ...)` of the model pairing.
    pub fn pairing_matrix(&self) -> PSeriesMatrix {
        let mut vals = vec![0usize; self.free_rank];
        vals.extend(self.cokernel_pieces.iter().map(|&i| i as usize));
        let n = vals.iter().max().copied().unwrap_or(0) + 2;
        PSeriesMatrix::diagonal(&vals, n)
    }
}

/// Builds the graded-sequence model of an `h`-polynomial `sum n^i v^i`:
/// `n^i` pieces of size `i` for each `i > 0`, and free rank `n^0`.
pub fn gysin_model(h: &LaurentPoly, ldiff: u32) -> Result<GradedSequenceModel, FiltrationError> {
    let mut model = GradedSequenceModel {
        costalk_degrees: Vec::new(),
        stalk_degrees: Vec::new(),
        cokernel_pieces: Vec::new(),
        free_rank: 0,
    };
    for (i, c) in h.terms() {
        if i < 0 || i > ldiff as i32 || (ldiff as i32 - i) % 2 != 0 {
            return Err(FiltrationError::Parity { exponent: i, ldiff });
        }
        if c.is_negative() {
            return Err(FiltrationError::NegativeCoefficient { exponent: i });
        }
        let count = usize::try_from(c.clone()).unwrap_or(usize::MAX);
        if i == 0 {
            model.free_rank += count;
            model.costalk_degrees.extend(std::iter::repeat_n(0, count));
            model.stalk_degrees.extend(std::iter::repeat_n(0, count));
        } else {
            model.cokernel_pieces.extend(std::iter::repeat_n(i as u32, count));
            model.costalk_degrees.extend(std::iter::repeat_n(i, count));
            model.stalk_degrees.extend(std::iter::repeat_n(-i, count));
        }
    }
    Ok(model)
}

/// `sum_i layers[i] v^i` as a polynomial, for comparison with `h`.
pub fn layers_to_poly(layers: &BTreeMap<usize, usize>) -> LaurentPoly {
    LaurentPoly::from_terms(layers.iter().map(|(&i, &n)| (i as i32, BigInt::from(n))))
}
