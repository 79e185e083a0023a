use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use super::HeckeElement;
use crate::coxeter::{CoxeterError, CoxeterSystem, Element, GroupTable};
use crate::laurent::{h_to_p, LaurentPoly};

/// Column `x` of the table: `h[y] = h_{y,x}` for every index `y <= x`
/// (zero when `y` is not below `x` in the Bruhat order).
type Column = Arc<Vec<LaurentPoly>>;

/// Memoized Kazhdan-Lusztig data of one Coxeter system.
///
/// Columns are computed on demand by the canonical-basis induction
/// `H̲_x = H̲_s H̲_{sx} - sum_{z < sx, sz < z} mu(z, sx) H̲_z`, using the
/// smallest left descent `s` of `x`. Lookups take a read lock; a column is
/// inserted once and never changes, so racing writers are harmless.
pub struct KLTable {
    system: CoxeterSystem,
    table: Arc<GroupTable>,
    columns: RwLock<Vec<Option<Column>>>,
}

impl KLTable {
    pub fn new(system: &CoxeterSystem) -> Result<Self, CoxeterError> {
        let table = system.table()?;
        let n = table.len();
        Ok(Self {
            system: system.clone(),
            table,
            columns: RwLock::new(vec![None; n]),
        })
    }

    pub fn system(&self) -> &CoxeterSystem {
        &self.system
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        &self.table
    }

    fn index(&self, w: &Element) -> Result<u32, CoxeterError> {
        self.table.index_of(w).ok_or(CoxeterError::OwnerMismatch)
    }

    fn cached(&self, x: u32) -> Option<Column> {
        self.columns.read().unwrap()[x as usize].clone()
    }

    fn store(&self, x: u32, col: Column) -> Column {
        let mut guard = self.columns.write().unwrap();
        guard[x as usize].get_or_insert(col).clone()
    }

    pub fn is_computed(&self, x: u32) -> bool {
        self.columns.read().unwrap()[x as usize].is_some()
    }

    pub fn num_computed(&self) -> usize {
        self.columns.read().unwrap().iter().filter(|c| c.is_some()).count()
    }

    /// Column `x`, computing it (and whatever it depends on) if needed.
    pub(crate) fn column(&self, x: u32) -> Column {
        if let Some(c) = self.cached(x) {
            return c;
        }
        if x != 0 {
            let s = self.table.left_descents(x).first().unwrap();
            let sx = self.table.left_mul(s, x);
            let prev = self.column(sx);
            for z in self.mu_terms(&prev, sx, s) {
                self.column(z.0);
            }
        }
        let col = self.compute_column(x);
        self.store(x, Arc::new(col))
    }

    /// `(z, mu(z, sx))` for `z < sx` with `sz < z` and nonzero `mu`.
    fn mu_terms(&self, prev: &[LaurentPoly], sx: u32, s: usize) -> Vec<(u32, BigInt)> {
        (0..sx)
            .filter(|&z| self.table.left_descents(z).contains(s))
            .filter_map(|z| {
                let mu = prev[z as usize].coeff(1);
                (!mu.is_zero()).then_some((z, mu))
            })
            .collect()
    }

    /// Computes column `x` assuming its dependencies are cached.
    fn compute_column(&self, x: u32) -> Vec<LaurentPoly> {
        let t = &self.table;
        let mut out = vec![LaurentPoly::zero(); x as usize + 1];
        if x == 0 {
            out[0] = LaurentPoly::one();
            return out;
        }
        let s = t.left_descents(x).first().unwrap();
        let sx = t.left_mul(s, x);
        let prev = self.cached(sx).expect("dependency computed");
        // H̲_s H_y = H_{sy} + v^{+-1} H_y
        for (y, h) in prev.iter().enumerate() {
            if h.is_zero() {
                continue;
            }
            let y = y as u32;
            let sy = t.left_mul(s, y);
            let up = t.length(sy) > t.length(y);
            debug_assert!((sy as usize) <= x as usize);
            out[sy as usize] += h;
            out[y as usize] += &h.shift(if up { 1 } else { -1 });
        }
        for (z, mu) in self.mu_terms(&prev, sx, s) {
            let cz = self.cached(z).expect("dependency computed");
            for (y, h) in cz.iter().enumerate() {
                if !h.is_zero() {
                    out[y] -= &h.scale(&mu);
                }
            }
        }
        out
    }

    /// Fills every column, one length level at a time, in parallel within
    /// a level.
    pub fn compute_all(&self) {
        let t = &self.table;
        let n = t.len() as u32;
        let mut start = 0u32;
        while start < n {
            let len = t.length(start);
            let mut end = start;
            while end < n && t.length(end) == len {
                end += 1;
            }
            let todo: Vec<u32> = (start..end).filter(|&x| !self.is_computed(x)).collect();
            let cols: Vec<(u32, Vec<LaurentPoly>)> =
                todo.into_par_iter().map(|x| (x, self.compute_column(x))).collect();
            for (x, c) in cols {
                self.store(x, Arc::new(c));
            }
            start = end;
        }
    }

    /// `h_{y,x}` by index.
    pub fn h_index(&self, y: u32, x: u32) -> LaurentPoly {
        if y > x {
            return LaurentPoly::zero();
        }
        self.column(x)[y as usize].clone()
    }

    /// `h_{y,x}`: the coefficient of `H_y` in `H̲_x`.
    pub fn h_polynomial(&self, y: &Element, x: &Element) -> Result<LaurentPoly, CoxeterError> {
        Ok(self.h_index(self.index(y)?, self.index(x)?))
    }

    /// `P_{y,x}(q)`, read off from `h_{y,x}`.
    pub fn kl_polynomial(&self, y: &Element, x: &Element) -> Result<LaurentPoly, CoxeterError> {
        let h = self.h_polynomial(y, x)?;
        let ldiff = x.length() as i32 - y.length() as i32;
        Ok(h_to_p(&h, ldiff).expect("h-polynomials satisfy the parity bound"))
    }

    /// `mu(y, x)`: the coefficient of `v` in `h_{y,x}`.
    pub fn mu(&self, y: &Element, x: &Element) -> Result<BigInt, CoxeterError> {
        Ok(self.h_polynomial(y, x)?.coeff(1))
    }

    pub fn mu_index(&self, y: u32, x: u32) -> BigInt {
        self.h_index(y, x).coeff(1)
    }

    pub fn kl_basis_index(&self, x: u32) -> HeckeElement {
        let col = self.column(x);
        HeckeElement::from_index_terms(
            self.table.clone(),
            col.iter()
                .enumerate()
                .filter(|(_, h)| !h.is_zero())
                .map(|(y, h)| (y as u32, h.clone())),
        )
    }

    /// `H̲_x` in the standard basis.
    pub fn kl_basis(&self, x: &Element) -> Result<HeckeElement, CoxeterError> {
        Ok(self.kl_basis_index(self.index(x)?))
    }

    /// Nonzero entries of a computed column, for persistence.
    pub fn column_entries(&self, x: u32) -> Option<Vec<(u32, LaurentPoly)>> {
        self.cached(x).map(|c| {
            c.iter()
                .enumerate()
                .filter(|(_, h)| !h.is_zero())
                .map(|(y, h)| (y as u32, h.clone()))
                .collect()
        })
    }

    /// Indices of computed columns, ascending.
    pub fn computed_columns(&self) -> Vec<u32> {
        let guard = self.columns.read().unwrap();
        (0..guard.len() as u32).filter(|&x| guard[x as usize].is_some()).collect()
    }

    /// Installs a column loaded from elsewhere. Returns `false` (and leaves
    /// the table unchanged) if a column is already present.
    pub fn insert_column(&self, x: u32, entries: Vec<(u32, LaurentPoly)>) -> bool {
        if self.is_computed(x) {
            return false;
        }
        let mut col = vec![LaurentPoly::zero(); x as usize + 1];
        for (y, h) in entries {
            if (y as usize) < col.len() {
                col[y as usize] = h;
            }
        }
        self.store(x, Arc::new(col));
        true
    }

    /// Recomputes column `x` from cached dependencies, bypassing the cached
    /// value of `x` itself.
    pub fn recompute_column(&self, x: u32) -> Vec<(u32, LaurentPoly)> {
        if x != 0 {
            let s = self.table.left_descents(x).first().unwrap();
            let sx = self.table.left_mul(s, x);
            let prev = self.column(sx);
            for (z, _) in self.mu_terms(&prev, sx, s) {
                self.column(z);
            }
        }
        self.compute_column(x)
            .into_iter()
            .enumerate()
            .filter(|(_, h)| !h.is_zero())
            .map(|(y, h)| (y as u32, h))
            .collect()
    }
}
