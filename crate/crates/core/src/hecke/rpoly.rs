//! The classical route to Kazhdan-Lusztig polynomials: R-polynomials, then
//! `P_{y,x}` by downward induction from
//! `q^{l(x)-l(y)} bar(P_{y,x}) - P_{y,x} = sum_{y<z<=x} R_{y,z} P_{z,x}`.
//!
//! Everything here is in the variable `q` and shares nothing with the
//! canonical-basis induction in `kl.rs` except the group table.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::coxeter::{CoxeterError, Element, GroupTable};
use crate::laurent::LaurentPoly;

/// All `R_{y,x}` of a group; `rows[x][y]` for `y <= x` by index.
pub struct RPolynomials {
    table: Arc<GroupTable>,
    rows: Vec<Vec<LaurentPoly>>,
}

impl RPolynomials {
    /// For `sx < x`: `R_{y,x} = R_{sy,sx}` if `sy < y`, otherwise
    /// `(q-1) R_{y,sx} + q R_{sy,sx}`.
    pub fn new(table: Arc<GroupTable>) -> Self {
        let n = table.len();
        let q = LaurentPoly::monomial(1, 1);
        let q_minus_one = LaurentPoly::from_terms([(1, 1), (0, -1)]);
        let mut rows: Vec<Vec<LaurentPoly>> = Vec::with_capacity(n);
        rows.push(vec![LaurentPoly::one()]);
        for x in 1..n as u32 {
            let s = table.left_descents(x).first().unwrap();
            let sx = table.left_mul(s, x);
            let get = |rows: &Vec<Vec<LaurentPoly>>, y: u32| -> LaurentPoly {
                rows[sx as usize].get(y as usize).cloned().unwrap_or_default()
            };
            let mut row = vec![LaurentPoly::zero(); x as usize + 1];
            for y in 0..=x {
                if y == x {
                    row[y as usize] = LaurentPoly::one();
                    continue;
                }
                if !table.bruhat_leq(y, x) {
                    continue;
                }
                let sy = table.left_mul(s, y);
                row[y as usize] = if table.length(sy) < table.length(y) {
                    get(&rows, sy)
                } else {
                    &(&q_minus_one * &get(&rows, y)) + &(&q * &get(&rows, sy))
                };
            }
            rows.push(row);
        }
        Self { table, rows }
    }

    pub fn r_index(&self, y: u32, x: u32) -> LaurentPoly {
        self.rows[x as usize].get(y as usize).cloned().unwrap_or_default()
    }

    pub fn r_polynomial(&self, y: &Element, x: &Element) -> Result<LaurentPoly, CoxeterError> {
        let y = self.table.index_of(y).ok_or(CoxeterError::OwnerMismatch)?;
        let x = self.table.index_of(x).ok_or(CoxeterError::OwnerMismatch)?;
        Ok(self.r_index(y, x))
    }

    pub fn table(&self) -> &Arc<GroupTable> {
        &self.table
    }
}

/// Kazhdan-Lusztig polynomials `P_{y,x}(q)` from R-polynomials, memoized
/// per column `x`.
pub struct KlRecursive {
    r: RPolynomials,
    columns: RwLock<HashMap<u32, Arc<HashMap<u32, LaurentPoly>>>>,
}

impl KlRecursive {
    pub fn new(table: Arc<GroupTable>) -> Self {
        Self {
            r: RPolynomials::new(table),
            columns: RwLock::new(HashMap::new()),
        }
    }

    pub fn r_polynomials(&self) -> &RPolynomials {
        &self.r
    }

    fn column(&self, x: u32) -> Arc<HashMap<u32, LaurentPoly>> {
        if let Some(c) = self.columns.read().unwrap().get(&x) {
            return c.clone();
        }
        let t = &self.r.table;
        let interval = t.lower_interval(x);
        let lx = t.length(x) as i32;
        let mut p: HashMap<u32, LaurentPoly> = HashMap::with_capacity(interval.len());
        p.insert(x, LaurentPoly::one());
        for &y in interval.iter().rev().skip(1) {
            let d = lx - t.length(y) as i32;
            let mut sum = LaurentPoly::zero();
            for &z in interval.iter().filter(|&&z| z > y) {
                if !t.bruhat_leq(y, z) {
                    continue;
                }
                let r = self.r.r_index(y, z);
                if !r.is_zero() {
                    sum += &(&r * &p[&z]);
                }
            }
            // q^d bar(P) only has degrees > (d-1)/2, so P is minus the low part.
            let low = sum.truncate_above((d - 1).div_euclid(2));
            p.insert(y, -low);
        }
        let col = Arc::new(p);
        self.columns.write().unwrap().entry(x).or_insert(col).clone()
    }

    pub fn p_index(&self, y: u32, x: u32) -> LaurentPoly {
        self.column(x).get(&y).cloned().unwrap_or_default()
    }

    /// `P_{y,x}(q)`; zero unless `y <= x`.
    pub fn kl_polynomial(&self, y: &Element, x: &Element) -> Result<LaurentPoly, CoxeterError> {
        let t = &self.r.table;
        let y = t.index_of(y).ok_or(CoxeterError::OwnerMismatch)?;
        let x = t.index_of(x).ok_or(CoxeterError::OwnerMismatch)?;
        Ok(self.p_index(y, x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::CoxeterSystem;

    fn q(s: &str) -> LaurentPoly {
        LaurentPoly::parse_in(s, 'q').unwrap()
    }

    #[test]
    fn r_polynomial_basics() {
        let sys = CoxeterSystem::from_label("A2").unwrap();
        let r = RPolynomials::new(sys.table().unwrap());
        let e = sys.identity();
        let s = sys.generator(0).unwrap();
        assert_eq!(r.r_polynomial(&e, &s).unwrap(), q("q - 1"));
        assert_eq!(r.r_polynomial(&s, &s).unwrap(), q("1"));
        assert_eq!(r.r_polynomial(&s, &e).unwrap(), q("0"));
        // R_{e,w0} in S3 is (q-1)^3 + q(q-1)
        let w0 = sys.longest_element();
        assert_eq!(r.r_polynomial(&e, &w0).unwrap(), q("q^3 - 2q^2 + 2q - 1"));
    }

    #[test]
    fn s3_all_one() {
        let sys = CoxeterSystem::from_label("A2").unwrap();
        let t = sys.table().unwrap();
        let kl = KlRecursive::new(t.clone());
        let mut count = 0;
        for x in 0..t.len() as u32 {
            for y in 0..t.len() as u32 {
                if t.bruhat_leq(y, x) {
                    count += 1;
                    assert_eq!(kl.p_index(y, x), q("1"));
                } else {
                    assert!(kl.p_index(y, x).is_zero());
                }
            }
        }
        assert_eq!(count, 19);
    }

    #[test]
    fn s4_3412() {
        let sys = CoxeterSystem::from_label("A3").unwrap();
        let kl = KlRecursive::new(sys.table().unwrap());
        let x = sys.parse_element("2132").unwrap();
        assert_eq!(kl.kl_polynomial(&sys.identity(), &x).unwrap(), q("1 + q"));
        assert_eq!(kl.kl_polynomial(&x, &x).unwrap(), q("1"));
    }
}
