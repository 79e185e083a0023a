//! Cartan matrices for the finite crystallographic types, Coxeter matrix
//! recognition, and finiteness checks.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::CoxeterError;

/// Convention: `cartan[i][j] = <alpha_i^vee, alpha_j>`.
pub type Cartan = Vec<Vec<i32>>;

/// One irreducible finite type (or the dihedral family).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiniteType {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    E(usize),
    F4,
    G2,
    I2(u32),
}

impl FiniteType {
    pub fn rank(self) -> usize {
        match self {
            Self::A(n) | Self::B(n) | Self::C(n) | Self::D(n) | Self::E(n) => n,
            Self::F4 => 4,
            Self::G2 | Self::I2(_) => 2,
        }
    }

    pub fn label(self) -> String {
        match self {
            Self::A(n) => format!("A{n}"),
            Self::B(n) => format!("B{n}"),
            Self::C(n) => format!("C{n}"),
            Self::D(n) => format!("D{n}"),
            Self::E(n) => format!("E{n}"),
            Self::F4 => "F4".into(),
            Self::G2 => "G2".into(),
            Self::I2(m) => format!("I2({m})"),
        }
    }

    pub fn parse(s: &str) -> Result<Self, CoxeterError> {
        let bad = || CoxeterError::UnknownType(s.to_string());
        let s = s.trim();
        let upper = s.to_ascii_uppercase();
        if let Some(rest) = upper.strip_prefix("I2(") {
            let m: u32 = rest.strip_suffix(')').ok_or_else(bad)?.parse().map_err(|_| bad())?;
            if m < 2 {
                return Err(bad());
            }
            return Ok(Self::I2(m));
        }
        if upper == "H3" || upper == "H4" {
            return Err(CoxeterError::Unsupported(format!(
                "{upper} has irrational root data"
            )));
        }
        let mut chars = upper.chars();
        let letter = chars.next().ok_or_else(bad)?;
        let n: usize = chars.as_str().parse().map_err(|_| bad())?;
        let t = match (letter, n) {
            ('A', n) if n >= 1 => Self::A(n),
            ('B', n) if n >= 2 => Self::B(n),
            ('C', n) if n >= 2 => Self::C(n),
            ('D', n) if n >= 4 => Self::D(n),
            ('E', n) if (6..=8).contains(&n) => Self::E(n),
            ('F', 4) => Self::F4,
            ('G', 2) => Self::G2,
            _ => return Err(bad()),
        };
        Ok(t)
    }

    /// Bourbaki-numbered Cartan matrix; `None` for non-crystallographic
    /// dihedral types.
    pub fn cartan(self) -> Option<Cartan> {
        let n = self.rank();
        let mut c = vec![vec![0i32; n]; n];
        for (i, row) in c.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut link = |i: usize, j: usize, cij: i32, cji: i32| {
            c[i][j] = cij;
            c[j][i] = cji;
        };
        match self {
            Self::A(n) => (1..n).for_each(|i| link(i - 1, i, -1, -1)),
            Self::B(n) => {
                (1..n - 1).for_each(|i| link(i - 1, i, -1, -1));
                link(n - 2, n - 1, -1, -2);
            }
            Self::C(n) => {
                (1..n - 1).for_each(|i| link(i - 1, i, -1, -1));
                link(n - 2, n - 1, -2, -1);
            }
            Self::D(n) => {
                (1..n - 1).for_each(|i| link(i - 1, i, -1, -1));
                link(n - 3, n - 1, -1, -1);
            }
            Self::E(n) => {
                link(0, 2, -1, -1);
                link(1, 3, -1, -1);
                (3..n).for_each(|i| link(i - 1, i, -1, -1));
            }
            Self::F4 => {
                link(0, 1, -1, -1);
                link(1, 2, -1, -2);
                link(2, 3, -1, -1);
            }
            Self::G2 => link(0, 1, -3, -1),
            Self::I2(3) => link(0, 1, -1, -1),
            Self::I2(4) => link(0, 1, -1, -2),
            Self::I2(6) => link(0, 1, -3, -1),
            Self::I2(2) => {}
            Self::I2(_) => return None,
        }
        Some(c)
    }

    pub fn coxeter_matrix(self) -> Vec<Vec<u32>> {
        match self {
            Self::I2(m) => vec![vec![1, m], vec![m, 1]],
            _ => coxeter_from_cartan(&self.cartan().expect("crystallographic")),
        }
    }

    pub fn order(self) -> u128 {
        let fact = |n: usize| (1..=n as u128).product::<u128>();
        match self {
            Self::A(n) => fact(n + 1),
            Self::B(n) | Self::C(n) => (1u128 << n) * fact(n),
            Self::D(n) => (1u128 << (n - 1)) * fact(n),
            Self::E(6) => 51_840,
            Self::E(7) => 2_903_040,
            Self::E(_) => 696_729_600,
            Self::F4 => 1152,
            Self::G2 => 12,
            Self::I2(m) => 2 * m as u128,
        }
    }
}

/// Candidate presets of a given rank, in recognition priority order
/// (B before C: they share a Coxeter matrix).
fn presets_of_rank(n: usize) -> Vec<FiniteType> {
    let mut out = Vec::new();
    if n >= 1 {
        out.push(FiniteType::A(n));
    }
    if n >= 2 {
        out.push(FiniteType::B(n));
        out.push(FiniteType::C(n));
    }
    if n >= 4 {
        out.push(FiniteType::D(n));
    }
    if (6..=8).contains(&n) {
        out.push(FiniteType::E(n));
    }
    if n == 4 {
        out.push(FiniteType::F4);
    }
    if n == 2 {
        out.push(FiniteType::G2);
    }
    out
}

pub fn coxeter_from_cartan(c: &Cartan) -> Vec<Vec<u32>> {
    let n = c.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        1
                    } else {
                        match c[i][j] * c[j][i] {
                            0 => 2,
                            1 => 3,
                            2 => 4,
                            3 => 6,
                            _ => 0,
                        }
                    }
                })
                .collect()
        })
        .collect()
}

/// Connected components of the Dynkin diagram, each as a sorted index list.
fn components(adj: impl Fn(usize, usize) -> bool, n: usize) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut comps = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut k = 0;
        while k < comp.len() {
            let i = comp[k];
            for j in 0..n {
                if !seen[j] && adj(i, j) {
                    seen[j] = true;
                    comp.push(j);
                }
            }
            k += 1;
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

/// Label of a Cartan matrix if it is a preset, or a product of presets laid
/// out in contiguous blocks (e.g. `A1xA1`).
pub fn recognize_cartan(c: &Cartan) -> Option<String> {
    let n = c.len();
    if n == 0 {
        return Some("trivial".into());
    }
    let comps = components(|i, j| i != j && c[i][j] != 0, n);
    let mut labels = Vec::new();
    let mut next = 0;
    for comp in &comps {
        if comp[0] != next || comp[comp.len() - 1] != next + comp.len() - 1 {
            return None;
        }
        next += comp.len();
        let block: Cartan = comp.iter().map(|&i| comp.iter().map(|&j| c[i][j]).collect()).collect();
        let t = presets_of_rank(block.len())
            .into_iter()
            .find(|t| t.cartan().as_ref() == Some(&block))?;
        labels.push(t.label());
    }
    Some(labels.join("x"))
}

/// Label of a Coxeter matrix if it matches a single preset exactly.
pub fn recognize_coxeter(m: &[Vec<u32>]) -> Option<FiniteType> {
    let n = m.len();
    if n == 2 && ![2, 3, 4, 6].contains(&m[0][1]) && m[0][1] != 0 {
        return Some(FiniteType::I2(m[0][1]));
    }
    presets_of_rank(n).into_iter().find(|t| t.coxeter_matrix() == m)
}

/// Squared lengths of the simple roots (one root per component normalized
/// to 2), or `None` if the matrix is not symmetrizable.
pub fn symmetrizer(c: &Cartan) -> Option<Vec<BigRational>> {
    let n = c.len();
    let comps = components(|i, j| i != j && c[i][j] != 0, n);
    let mut norms: Vec<Option<BigRational>> = vec![None; n];
    for comp in comps {
        norms[comp[0]] = Some(BigRational::from_integer(2.into()));
        let mut stack = vec![comp[0]];
        while let Some(i) = stack.pop() {
            let ni = norms[i].clone().unwrap();
            for j in 0..n {
                if i == j || c[i][j] == 0 {
                    continue;
                }
                // n_i c_ij = n_j c_ji
                let nj = &ni * BigRational::new(c[i][j].into(), c[j][i].into());
                match &norms[j] {
                    None => {
                        norms[j] = Some(nj);
                        stack.push(j);
                    }
                    Some(existing) if *existing != nj => return None,
                    Some(_) => {}
                }
            }
        }
    }
    norms.into_iter().collect()
}

/// Exact Sylvester test on the symmetrized form `(alpha_i, alpha_j)`.
pub fn is_positive_definite_symmetrized(c: &Cartan, norms: &[BigRational]) -> bool {
    let n = c.len();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| &norms[i] * BigRational::from_integer(c[i][j].into()) / BigRational::from_integer(2.into()))
                .collect()
        })
        .collect();
    for k in 0..n {
        if !a[k][k].is_positive() {
            return false;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &a[k][k];
            for j in k..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
        }
    }
    true
}

/// Floating-point Cholesky test of the cosine form `-cos(pi / m_ij)`, used
/// only to tell non-crystallographic finite types apart from infinite ones.
pub fn cosine_form_positive_definite(m: &[Vec<u32>]) -> bool {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match m[i][j] {
                    1 => 1.0,
                    0 => -1.0,
                    mij => -(std::f64::consts::PI / mij as f64).cos(),
                })
                .collect()
        })
        .collect();
    for k in 0..n {
        if a[k][k] <= 1e-9 {
            return false;
        }
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                a[i][j] -= f * a[k][j];
            }
        }
    }
    true
}

/// Builds a Cartan matrix realizing a Coxeter matrix whose entries are all
/// in {2, 3, 4, 6}. Double and triple bonds are oriented from the lower
/// index to the higher one (type B / G convention).
pub fn cartan_from_coxeter(m: &[Vec<u32>]) -> Option<Cartan> {
    let n = m.len();
    let mut c = vec![vec![0i32; n]; n];
    for i in 0..n {
        c[i][i] = 2;
        for j in i + 1..n {
            let (cij, cji) = match m[i][j] {
                2 => (0, 0),
                3 => (-1, -1),
                4 => (-1, -2),
                6 => (-3, -1),
                _ => return None,
            };
            c[i][j] = cij;
            c[j][i] = cji;
        }
    }
    Some(c)
}

/// Structural validity of a candidate Cartan matrix.
pub fn validate_cartan(c: &Cartan) -> Result<(), CoxeterError> {
    let n = c.len();
    for (i, row) in c.iter().enumerate() {
        if row.len() != n {
            return Err(CoxeterError::InvalidMatrix("Cartan matrix is not square".into()));
        }
        if row[i] != 2 {
            return Err(CoxeterError::InvalidMatrix("Cartan diagonal must be 2".into()));
        }
        for j in 0..n {
            if i != j {
                let (a, b) = (c[i][j], c[j][i]);
                if a > 0 || (a == 0) != (b == 0) {
                    return Err(CoxeterError::InvalidMatrix(format!(
                        "invalid off-diagonal pair ({a}, {b})"
                    )));
                }
                if a * b > 3 {
                    return Err(CoxeterError::InfiniteType);
                }
            }
        }
    }
    Ok(())
}

pub fn is_forest(adj: impl Fn(usize, usize) -> bool, n: usize) -> bool {
    let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| adj(i, j)).count();
    edges + components(adj, n).len() == n
}
