//! Finite Coxeter systems: elements, length, descents, Bruhat order,
//! enumeration, and (for Weyl groups) weights with the dot action.
//!
//! Crystallographic elements are keyed by their action on the root lattice
//! (the images of the simple roots, in simple-root coordinates). Dihedral
//! groups `I2(m)` are keyed by an alternating normal-form word. Generator
//! indices are 0-based internally and 1-based in every text interface.

pub mod cartan;
mod table;
mod weight;

use std::collections::hash_map::DefaultHasher;
use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use num_rational::BigRational;
use thiserror::Error;

pub use cartan::{Cartan, FiniteType};
pub use table::GroupTable;
pub use weight::{Isotropy, Weight};

/// Groups larger than this are never enumerated.
pub const MAX_ENUMERATION: u128 = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoxeterError {
    #[error("unknown Coxeter type {0:?}")]
    UnknownType(String),
    #[error("Coxeter matrix is not of finite type")]
    InfiniteType,
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("elements belong to different Coxeter systems")]
    OwnerMismatch,
    #[error("generator {0} out of range")]
    BadGenerator(usize),
    #[error("cannot parse {what} {input:?}")]
    Parse { what: &'static str, input: String },
    #[error("group of order {0} is too large to enumerate")]
    TooLarge(u128),
    #[error("weight {0} is not rho-dominant")]
    NotDominant(String),
}

/// A subset of the simple reflections, as a bitmask over 0-based indices.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorSet(u64);

impl GeneratorSet {
    pub const fn empty() -> Self {
        Self(0)
    }

    pub fn full(rank: usize) -> Self {
        Self(if rank >= 64 { u64::MAX } else { (1u64 << rank) - 1 })
    }

    pub fn from_indices(idx: impl IntoIterator<Item = usize>) -> Self {
        Self(idx.into_iter().fold(0, |acc, i| acc | (1 << i)))
    }

    pub fn contains(self, s: usize) -> bool {
        s < 64 && self.0 & (1 << s) != 0
    }

    pub fn insert(&mut self, s: usize) {
        self.0 |= 1 << s;
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Smallest index in the set.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.contains(i))
    }

    /// Parses `"1,3"` (1-based); the empty string is the empty set.
    pub fn parse(s: &str, rank: usize) -> Result<Self, CoxeterError> {
        let mut set = Self::empty();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let i: usize = part.parse().map_err(|_| CoxeterError::Parse {
                what: "generator subset",
                input: s.to_string(),
            })?;
            if i == 0 || i > rank {
                return Err(CoxeterError::BadGenerator(i));
            }
            set.insert(i - 1);
        }
        Ok(set)
    }
}

impl fmt::Display for GeneratorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|i| (i + 1).to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl fmt::Debug for GeneratorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum ElementKey {
    /// Column-major images of the simple roots: entry `j * rank + i` is the
    /// coefficient of `alpha_i` in `w(alpha_j)`.
    Roots(Box<[i32]>),
    /// Alternating word `s_first s_other s_first ...` of length `len`;
    /// `first` is 0 for the identity and for the longest element.
    Dihedral { first: u8, len: u32 },
}

/// A group element with cached length and descent sets.
#[derive(Clone)]
pub struct Element {
    owner: u64,
    key: ElementKey,
    length: u32,
    left: GeneratorSet,
    right: GeneratorSet,
}

impl Element {
    pub fn key(&self) -> &ElementKey {
        &self.key
    }

    pub fn length(&self) -> u32 {
        self.length
    }

    pub fn left_descents(&self) -> GeneratorSet {
        self.left
    }

    pub fn right_descents(&self) -> GeneratorSet {
        self.right
    }

    pub fn is_identity(&self) -> bool {
        self.length == 0
    }

    pub fn owner(&self) -> u64 {
        self.owner
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.owner == other.owner && self.key == other.key
    }
}

impl Eq for Element {}

impl Hash for Element {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.owner.hash(state);
        self.key.hash(state);
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Length first, then canonical key.
impl Ord for Element {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.length, &self.key, self.owner).cmp(&(other.length, &other.key, other.owner))
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element(l={}, {:?})", self.length, self.key)
    }
}

#[derive(Debug)]
pub(crate) struct RootDatum {
    pub cartan: Cartan,
    /// Positive roots in simple-root coordinates; the first `rank` entries
    /// are the simple roots in order.
    pub positive_roots: Vec<Vec<i32>>,
    /// Matching coroots in simple-coroot coordinates.
    pub positive_coroots: Vec<Vec<i32>>,
}

#[derive(Debug)]
enum Kind {
    Crystallographic(RootDatum),
    Dihedral { m: u32 },
}

struct SystemInner {
    id: u64,
    descriptor: String,
    rank: usize,
    coxeter: Vec<Vec<u32>>,
    kind: Kind,
    table: OnceLock<Arc<GroupTable>>,
}

/// A finite Coxeter system `(W, S)`. Cheap to clone; immutable apart from
/// the lazily built enumeration table.
#[derive(Clone)]
pub struct CoxeterSystem {
    inner: Arc<SystemInner>,
}

impl fmt::Debug for CoxeterSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoxeterSystem({})", self.inner.descriptor)
    }
}

impl PartialEq for CoxeterSystem {
    fn eq(&self, other: &Self) -> bool {
        self.inner.id == other.inner.id
    }
}

impl Eq for CoxeterSystem {}

fn descriptor_id(descriptor: &str) -> u64 {
    let mut h = DefaultHasher::new();
    descriptor.hash(&mut h);
    h.finish()
}

fn matrix_text(m: &[Vec<impl fmt::Display>]) -> String {
    let rows: Vec<String> = m
        .iter()
        .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
        .collect();
    format!("[{}]", rows.join(","))
}

impl CoxeterSystem {
    /// Builds a system from a type label such as `A3`, `B2`, `I2(5)`, a
    /// product `A1xA1`, or `trivial`.
    pub fn from_label(label: &str) -> Result<Self, CoxeterError> {
        let label = label.trim();
        if label.eq_ignore_ascii_case("trivial") {
            return Self::from_cartan(Vec::new());
        }
        let parts: Vec<&str> = label.split(['x', 'X']).collect();
        if parts.len() == 1 {
            let t = FiniteType::parse(label)?;
            return match t {
                FiniteType::I2(m) => Ok(Self::dihedral(m)),
                _ => Self::from_cartan(t.cartan().expect("crystallographic preset")),
            };
        }
        let mut blocks = Vec::new();
        for p in parts {
            let t = FiniteType::parse(p)?;
            let c = t.cartan().ok_or_else(|| {
                CoxeterError::Unsupported("dihedral factors in products".into())
            })?;
            blocks.push(c);
        }
        let n: usize = blocks.iter().map(Vec::len).sum();
        let mut c = vec![vec![0; n]; n];
        let mut off = 0;
        for b in blocks {
            for (i, row) in b.iter().enumerate() {
                for (j, &x) in row.iter().enumerate() {
                    c[off + i][off + j] = x;
                }
            }
            off += b.len();
        }
        Self::from_cartan(c)
    }

    /// Parses either a type label or a Coxeter matrix written as
    /// `[[1,3],[3,1]]`.
    pub fn parse(descriptor: &str) -> Result<Self, CoxeterError> {
        let d = descriptor.trim();
        if let Some(body) = d.strip_prefix("coxeter:") {
            return Self::from_coxeter_matrix(coxeter_entries(body)?);
        }
        if let Some(body) = d.strip_prefix("cartan:") {
            let c = parse_matrix(body)?
                .into_iter()
                .map(|r| r.into_iter().map(|x| x as i32).collect())
                .collect();
            return Self::from_cartan(c);
        }
        if d.starts_with('[') {
            return Self::from_coxeter_matrix(coxeter_entries(d)?);
        }
        Self::from_label(d)
    }

    /// Builds a system from a Coxeter matrix (`0` stands for infinity).
    /// Preset matrices are recognized and get the preset's label.
    pub fn from_coxeter_matrix(m: Vec<Vec<u32>>) -> Result<Self, CoxeterError> {
        let n = m.len();
        for (i, row) in m.iter().enumerate() {
            if row.len() != n {
                return Err(CoxeterError::InvalidMatrix("matrix is not square".into()));
            }
            if row[i] != 1 {
                return Err(CoxeterError::InvalidMatrix("diagonal entries must be 1".into()));
            }
            for j in 0..n {
                if i != j && (m[j][i] != row[j] || row[j] == 1) {
                    return Err(CoxeterError::InvalidMatrix(format!(
                        "bad entry m[{}][{}] = {}",
                        i + 1,
                        j + 1,
                        row[j]
                    )));
                }
            }
        }
        if let Some(t) = cartan::recognize_coxeter(&m) {
            return Self::from_label(&t.label());
        }
        if m.iter().flatten().any(|&x| x == 0) {
            return Err(CoxeterError::InfiniteType);
        }
        if !cartan::is_forest(|i, j| i != j && m[i][j] > 2, n) {
            return Err(CoxeterError::InfiniteType);
        }
        match cartan::cartan_from_coxeter(&m) {
            Some(c) => {
                let norms = cartan::symmetrizer(&c).ok_or(CoxeterError::InfiniteType)?;
                if !cartan::is_positive_definite_symmetrized(&c, &norms) {
                    return Err(CoxeterError::InfiniteType);
                }
                Self::build_crystallographic(c, Some(format!("coxeter:{}", matrix_text(&m))))
            }
            None if cartan::cosine_form_positive_definite(&m) => Err(CoxeterError::Unsupported(
                "non-crystallographic finite types of rank > 2".into(),
            )),
            None => Err(CoxeterError::InfiniteType),
        }
    }

    /// Builds a Weyl group from a Cartan matrix `c[i][j] = <alpha_i^vee, alpha_j>`.
    pub fn from_cartan(c: Cartan) -> Result<Self, CoxeterError> {
        Self::build_crystallographic(c, None)
    }

    fn build_crystallographic(c: Cartan, fallback: Option<String>) -> Result<Self, CoxeterError> {
        cartan::validate_cartan(&c)?;
        let n = c.len();
        if !cartan::is_forest(|i, j| i != j && c[i][j] != 0, n) {
            return Err(CoxeterError::InfiniteType);
        }
        let norms = cartan::symmetrizer(&c).ok_or(CoxeterError::InfiniteType)?;
        if !cartan::is_positive_definite_symmetrized(&c, &norms) {
            return Err(CoxeterError::InfiniteType);
        }
        let descriptor = cartan::recognize_cartan(&c)
            .or(fallback)
            .unwrap_or_else(|| format!("cartan:{}", matrix_text(&c)));
        let positive_roots = generate_positive_roots(&c)?;
        let positive_coroots = positive_roots
            .iter()
            .map(|beta| coroot_of(beta, &c, &norms))
            .collect();
        let coxeter = cartan::coxeter_from_cartan(&c);
        Ok(Self {
            inner: Arc::new(SystemInner {
                id: descriptor_id(&descriptor),
                descriptor,
                rank: n,
                coxeter,
                kind: Kind::Crystallographic(RootDatum {
                    cartan: c,
                    positive_roots,
                    positive_coroots,
                }),
                table: OnceLock::new(),
            }),
        })
    }

    /// The dihedral group `I2(m)` of order `2m`, in normal-form representation.
    pub fn dihedral(m: u32) -> Self {
        assert!(m >= 2, "dihedral order parameter must be at least 2");
        let descriptor = FiniteType::I2(m).label();
        Self {
            inner: Arc::new(SystemInner {
                id: descriptor_id(&descriptor),
                descriptor,
                rank: 2,
                coxeter: vec![vec![1, m], vec![m, 1]],
                kind: Kind::Dihedral { m },
                table: OnceLock::new(),
            }),
        }
    }

    pub fn rank(&self) -> usize {
        self.inner.rank
    }

    /// Canonical descriptor: a type label when recognized, otherwise the
    /// normalized matrix.
    pub fn descriptor(&self) -> &str {
        &self.inner.descriptor
    }

    pub fn id(&self) -> u64 {
        self.inner.id
    }

    pub fn coxeter_matrix(&self) -> &[Vec<u32>] {
        &self.inner.coxeter
    }

    pub fn is_crystallographic(&self) -> bool {
        matches!(self.inner.kind, Kind::Crystallographic(_))
    }

    pub(crate) fn root_datum(&self) -> Result<&RootDatum, CoxeterError> {
        match &self.inner.kind {
            Kind::Crystallographic(rd) => Ok(rd),
            Kind::Dihedral { .. } => Err(CoxeterError::Unsupported(format!(
                "{} has no root datum",
                self.descriptor()
            ))),
        }
    }

    pub fn cartan_matrix(&self) -> Option<&Cartan> {
        self.root_datum().ok().map(|rd| &rd.cartan)
    }

    /// Positive roots in simple-root coordinates (crystallographic only).
    pub fn positive_roots(&self) -> Option<&[Vec<i32>]> {
        self.root_datum().ok().map(|rd| rd.positive_roots.as_slice())
    }

    pub fn num_positive_roots(&self) -> usize {
        match &self.inner.kind {
            Kind::Crystallographic(rd) => rd.positive_roots.len(),
            Kind::Dihedral { m } => *m as usize,
        }
    }

    /// Group order, computed without enumerating the group: for Weyl groups
    /// by orbit-stabilizer on fundamental weights.
    pub fn order(&self) -> u128 {
        match &self.inner.kind {
            Kind::Dihedral { m } => 2 * *m as u128,
            Kind::Crystallographic(rd) => {
                let n = self.rank();
                let mut total: u128 = 1;
                for k in (0..n).rev() {
                    total *= fundamental_orbit_size(&rd.cartan, k, k + 1);
                }
                total
            }
        }
    }

    fn check(&self, w: &Element) -> Result<(), CoxeterError> {
        if w.owner == self.inner.id {
            Ok(())
        } else {
            Err(CoxeterError::OwnerMismatch)
        }
    }

    fn check_gen(&self, s: usize) -> Result<(), CoxeterError> {
        if s < self.rank() {
            Ok(())
        } else {
            Err(CoxeterError::BadGenerator(s + 1))
        }
    }

    fn element_from_key(&self, key: ElementKey) -> Element {
        let (length, left, right) = match (&self.inner.kind, &key) {
            (Kind::Crystallographic(rd), ElementKey::Roots(cols)) => root_element_stats(rd, cols),
            (Kind::Dihedral { m }, ElementKey::Dihedral { first, len }) => {
                dihedral_stats(*m, *first, *len)
            }
            _ => unreachable!("key kind matches system kind"),
        };
        Element {
            owner: self.inner.id,
            key,
            length,
            left,
            right,
        }
    }

    pub fn identity(&self) -> Element {
        let key = match &self.inner.kind {
            Kind::Crystallographic(_) => {
                let n = self.rank();
                let mut cols = vec![0i32; n * n];
                for i in 0..n {
                    cols[i * n + i] = 1;
                }
                ElementKey::Roots(cols.into())
            }
            Kind::Dihedral { .. } => ElementKey::Dihedral { first: 0, len: 0 },
        };
        self.element_from_key(key)
    }

    /// The simple reflection `s` (0-based).
    pub fn generator(&self, s: usize) -> Result<Element, CoxeterError> {
        self.check_gen(s)?;
        Ok(self.mul_gen_right_unchecked(&self.identity(), s))
    }

    pub fn generators(&self) -> Vec<Element> {
        (0..self.rank()).map(|s| self.generator(s).unwrap()).collect()
    }

    fn mul_gen_right_unchecked(&self, w: &Element, s: usize) -> Element {
        let key = match (&self.inner.kind, &w.key) {
            (Kind::Crystallographic(rd), ElementKey::Roots(cols)) => {
                let n = self.rank();
                let mut out = cols.to_vec();
                // w s_k (alpha_j) = w(alpha_j) - c[k][j] w(alpha_k)
                for j in 0..n {
                    let c = rd.cartan[s][j];
                    if c != 0 {
                        for i in 0..n {
                            out[j * n + i] -= c * cols[s * n + i];
                        }
                    }
                }
                ElementKey::Roots(out.into())
            }
            (Kind::Dihedral { m }, ElementKey::Dihedral { first, len }) => {
                dihedral_mul_right(*m, *first, *len, s as u8)
            }
            _ => unreachable!(),
        };
        self.element_from_key(key)
    }

    fn mul_gen_left_unchecked(&self, s: usize, w: &Element) -> Element {
        let key = match (&self.inner.kind, &w.key) {
            (Kind::Crystallographic(rd), ElementKey::Roots(cols)) => {
                let n = self.rank();
                let mut out = cols.to_vec();
                // s_k(beta) = beta - <alpha_k^vee, beta> alpha_k
                for j in 0..n {
                    let pairing: i32 = (0..n).map(|i| rd.cartan[s][i] * cols[j * n + i]).sum();
                    out[j * n + s] -= pairing;
                }
                ElementKey::Roots(out.into())
            }
            (Kind::Dihedral { m }, ElementKey::Dihedral { first, len }) => {
                dihedral_mul_left(*m, *first, *len, s as u8)
            }
            _ => unreachable!(),
        };
        self.element_from_key(key)
    }

    /// `w * s`.
    pub fn mul_gen_right(&self, w: &Element, s: usize) -> Result<Element, CoxeterError> {
        self.check(w)?;
        self.check_gen(s)?;
        Ok(self.mul_gen_right_unchecked(w, s))
    }

    /// `s * w`.
    pub fn mul_gen_left(&self, s: usize, w: &Element) -> Result<Element, CoxeterError> {
        self.check(w)?;
        self.check_gen(s)?;
        Ok(self.mul_gen_left_unchecked(s, w))
    }

    pub fn multiply(&self, w: &Element, u: &Element) -> Result<Element, CoxeterError> {
        self.check(w)?;
        self.check(u)?;
        match (&w.key, &u.key) {
            (ElementKey::Roots(a), ElementKey::Roots(b)) => {
                let n = self.rank();
                let mut out = vec![0i32; n * n];
                for j in 0..n {
                    for k in 0..n {
                        let bkj = b[j * n + k];
                        if bkj != 0 {
                            for i in 0..n {
                                out[j * n + i] += a[k * n + i] * bkj;
                            }
                        }
                    }
                }
                Ok(self.element_from_key(ElementKey::Roots(out.into())))
            }
            _ => Ok(self
                .reduced_word(u)
                .into_iter()
                .fold(w.clone(), |acc, s| self.mul_gen_right_unchecked(&acc, s))),
        }
    }

    pub fn inverse(&self, w: &Element) -> Result<Element, CoxeterError> {
        self.check(w)?;
        let word = self.reduced_word(w);
        Ok(self.element_of_word(word.iter().rev().copied()))
    }

    fn element_of_word(&self, word: impl IntoIterator<Item = usize>) -> Element {
        word.into_iter()
            .fold(self.identity(), |acc, s| self.mul_gen_right_unchecked(&acc, s))
    }

    /// Product of the generators in `word` (0-based), which need not be reduced.
    pub fn from_word(&self, word: &[usize]) -> Result<Element, CoxeterError> {
        for &s in word {
            self.check_gen(s)?;
        }
        Ok(self.element_of_word(word.iter().copied()))
    }

    /// Lexicographically smallest reduced word (0-based generators).
    pub fn reduced_word(&self, w: &Element) -> Vec<usize> {
        let mut word = Vec::with_capacity(w.length as usize);
        let mut cur = w.clone();
        while let Some(s) = cur.left.first() {
            word.push(s);
            cur = self.mul_gen_left_unchecked(s, &cur);
        }
        word
    }

    /// Parses a word: concatenated 1-based digits (`"2132"`), or a
    /// comma-separated list (`"10,2,3"`). The empty string is the identity.
    pub fn parse_word(&self, text: &str) -> Result<Vec<usize>, CoxeterError> {
        let t = text.trim();
        let bad = || CoxeterError::Parse {
            what: "word",
            input: text.to_string(),
        };
        // in rank >= 10 a bare number that names a generator >= 10 is that
        // generator, so one-letter canonical words read back correctly
        let single = t.parse::<usize>().ok().filter(|&i| i >= 10 && i <= self.rank());
        let raw: Vec<usize> = if let Some(i) = single {
            vec![i]
        } else if t.contains(',') {
            t.split(',')
                .map(|p| p.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<_, _>>()?
        } else {
            t.chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
                .collect::<Result<_, _>>()?
        };
        raw.into_iter()
            .map(|i| {
                if i == 0 || i > self.rank() {
                    Err(CoxeterError::BadGenerator(i))
                } else {
                    Ok(i - 1)
                }
            })
            .collect()
    }

    pub fn parse_element(&self, text: &str) -> Result<Element, CoxeterError> {
        let word = self.parse_word(text)?;
        self.from_word(&word)
    }

    /// Canonical text form: the lexicographically smallest reduced word in
    /// 1-based indices, comma-separated when the rank is 10 or more.
    pub fn word_string(&self, w: &Element) -> String {
        let word = self.reduced_word(w);
        if self.rank() >= 10 {
            word.iter().map(|s| (s + 1).to_string()).collect::<Vec<_>>().join(",")
        } else {
            word.iter().map(|s| char::from(b'1' + *s as u8)).collect()
        }
    }

    /// Bruhat order test `y <= x`, by the descent recursion. Answers come
    /// from the memoized table when the group has been enumerated.
    pub fn bruhat_leq(&self, y: &Element, x: &Element) -> Result<bool, CoxeterError> {
        self.check(y)?;
        self.check(x)?;
        if let Some(t) = self.inner.table.get() {
            return Ok(t.bruhat_leq(t.index_of(y).unwrap(), t.index_of(x).unwrap()));
        }
        let (mut y, mut x) = (y.clone(), x.clone());
        loop {
            if y == x {
                return Ok(true);
            }
            if y.length >= x.length {
                return Ok(false);
            }
            let s = x.left.first().expect("x is not the identity");
            x = self.mul_gen_left_unchecked(s, &x);
            if y.left.contains(s) {
                y = self.mul_gen_left_unchecked(s, &y);
            }
        }
    }

    /// The unique element with full descent set.
    pub fn longest_element(&self) -> Element {
        self.longest_in(GeneratorSet::full(self.rank()))
    }

    /// Longest element of the standard parabolic subgroup `W_I`.
    pub fn longest_in(&self, subset: GeneratorSet) -> Element {
        let mut w = self.identity();
        while let Some(s) = subset.iter().find(|&s| s < self.rank() && !w.right.contains(s)) {
            w = self.mul_gen_right_unchecked(&w, s);
        }
        w
    }

    /// Elements of the standard parabolic subgroup `W_I`, by breadth-first
    /// closure (in discovery order).
    pub fn parabolic_elements(&self, subset: GeneratorSet) -> Vec<Element> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let mut queue = VecDeque::from([self.identity()]);
        seen.insert(self.identity());
        while let Some(w) = queue.pop_front() {
            for s in subset.iter().filter(|&s| s < self.rank()) {
                let ws = self.mul_gen_right_unchecked(&w, s);
                if seen.insert(ws.clone()) {
                    queue.push_back(ws);
                }
            }
            out.push(w);
        }
        out
    }

    /// The memoized enumeration of the whole group.
    pub fn table(&self) -> Result<Arc<GroupTable>, CoxeterError> {
        if let Some(t) = self.inner.table.get() {
            return Ok(t.clone());
        }
        let order = self.order();
        if order > MAX_ENUMERATION {
            return Err(CoxeterError::TooLarge(order));
        }
        let t = Arc::new(GroupTable::build(self));
        Ok(self.inner.table.get_or_init(|| t).clone())
    }

    /// All elements, ordered by length then canonical key.
    pub fn enumerate(&self) -> Result<Vec<Element>, CoxeterError> {
        Ok(self.table()?.elements().to_vec())
    }
}

fn coxeter_entries(text: &str) -> Result<Vec<Vec<u32>>, CoxeterError> {
    parse_matrix(text)?
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| {
                    u32::try_from(x).map_err(|_| CoxeterError::InvalidMatrix(format!("entry {x}")))
                })
                .collect()
        })
        .collect()
}

fn parse_matrix(text: &str) -> Result<Vec<Vec<i64>>, CoxeterError> {
    let bad = || CoxeterError::Parse {
        what: "matrix",
        input: text.to_string(),
    };
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = t.strip_prefix('[').and_then(|s| s.strip_suffix(']')).ok_or_else(bad)?;
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    let inner = inner.strip_prefix('[').and_then(|s| s.strip_suffix(']')).ok_or_else(bad)?;
    inner
        .split("],[")
        .map(|row| {
            row.split(',')
                .map(|x| x.parse::<i64>().map_err(|_| bad()))
                .collect()
        })
        .collect()
}

fn generate_positive_roots(c: &Cartan) -> Result<Vec<Vec<i32>>, CoxeterError> {
    let n = c.len();
    let simple: Vec<Vec<i32>> = (0..n)
        .map(|i| (0..n).map(|j| i32::from(i == j)).collect())
        .collect();
    let mut seen: HashSet<Vec<i32>> = simple.iter().cloned().collect();
    let mut roots = simple.clone();
    let mut k = 0;
    while k < roots.len() {
        let beta = roots[k].clone();
        for i in 0..n {
            let pairing: i32 = (0..n).map(|j| c[i][j] * beta[j]).sum();
            if pairing >= 0 {
                continue;
            }
            let mut gamma = beta.clone();
            gamma[i] -= pairing;
            if seen.insert(gamma.clone()) {
                roots.push(gamma);
                if roots.len() > 10_000 {
                    return Err(CoxeterError::InfiniteType);
                }
            }
        }
        k += 1;
    }
    let mut rest = roots.split_off(n);
    rest.sort_by(|a, b| {
        let (ha, hb): (i32, i32) = (a.iter().sum(), b.iter().sum());
        ha.cmp(&hb).then_with(|| b.cmp(a))
    });
    roots.extend(rest);
    Ok(roots)
}

fn coroot_of(beta: &[i32], c: &Cartan, norms: &[BigRational]) -> Vec<i32> {
    use num_traits::ToPrimitive;
    let n = c.len();
    let two = BigRational::from_integer(2.into());
    // (beta, beta) = sum_ij b_i b_j n_i c_ij / 2
    let mut nb = BigRational::from_integer(0.into());
    for i in 0..n {
        for j in 0..n {
            if beta[i] != 0 && beta[j] != 0 && c[i][j] != 0 {
                nb += &norms[i] * BigRational::from_integer((beta[i] * beta[j] * c[i][j]).into())
                    / &two;
            }
        }
    }
    (0..n)
        .map(|i| {
            let x = &norms[i] * BigRational::from_integer(beta[i].into()) / &nb;
            debug_assert!(x.is_integer());
            x.to_integer().to_i32().expect("small coroot coefficient")
        })
        .collect()
}

/// Length and descent sets of the element acting by `cols`.
fn root_element_stats(rd: &RootDatum, cols: &[i32]) -> (u32, GeneratorSet, GeneratorSet) {
    let n = rd.cartan.len();
    let mut right = GeneratorSet::empty();
    for j in 0..n {
        if cols[j * n..(j + 1) * n].iter().any(|&x| x < 0) {
            right.insert(j);
        }
    }
    let mut length = 0;
    let mut left = GeneratorSet::empty();
    let mut img = vec![0i32; n];
    for beta in &rd.positive_roots {
        img.iter_mut().for_each(|x| *x = 0);
        for (j, &b) in beta.iter().enumerate() {
            if b != 0 {
                for i in 0..n {
                    img[i] += b * cols[j * n + i];
                }
            }
        }
        if img.iter().any(|&x| x < 0) {
            length += 1;
            // w(beta) = -alpha_k  <=>  w^{-1}(alpha_k) < 0
            let mut nz = img.iter().enumerate().filter(|(_, &x)| x != 0);
            if let (Some((k, &-1)), None) = (nz.next(), nz.next()) {
                left.insert(k);
            }
        }
    }
    (length, left, right)
}

fn dihedral_last(first: u8, len: u32) -> u8 {
    if len % 2 == 1 {
        first
    } else {
        1 - first
    }
}

fn dihedral_norm(m: u32, first: u8, len: u32) -> ElementKey {
    if len == 0 || len == m {
        ElementKey::Dihedral { first: 0, len }
    } else {
        ElementKey::Dihedral { first, len }
    }
}

fn dihedral_stats(m: u32, first: u8, len: u32) -> (u32, GeneratorSet, GeneratorSet) {
    if len == 0 {
        return (0, GeneratorSet::empty(), GeneratorSet::empty());
    }
    if len == m {
        return (m, GeneratorSet::full(2), GeneratorSet::full(2));
    }
    let left = GeneratorSet::from_indices([first as usize]);
    let right = GeneratorSet::from_indices([dihedral_last(first, len) as usize]);
    (len, left, right)
}

fn dihedral_mul_right(m: u32, first: u8, len: u32, s: u8) -> ElementKey {
    if len == 0 {
        return dihedral_norm(m, s, 1);
    }
    if len == m {
        // pick the normal form of w0 ending in s and drop that letter
        let f = if m % 2 == 1 { s } else { 1 - s };
        return dihedral_norm(m, f, m - 1);
    }
    if dihedral_last(first, len) == s {
        dihedral_norm(m, first, len - 1)
    } else {
        dihedral_norm(m, first, len + 1)
    }
}

fn dihedral_mul_left(m: u32, first: u8, len: u32, s: u8) -> ElementKey {
    if len == 0 {
        return dihedral_norm(m, s, 1);
    }
    if len == m {
        return dihedral_norm(m, 1 - s, m - 1);
    }
    if first == s {
        dihedral_norm(m, 1 - s, len - 1)
    } else {
        dihedral_norm(m, s, len + 1)
    }
}

/// Size of the orbit of the fundamental weight `omega_k` under the subgroup
/// generated by the first `gens` simple reflections.
fn fundamental_orbit_size(c: &Cartan, k: usize, gens: usize) -> u128 {
    let n = c.len();
    let start: Vec<i64> = (0..n).map(|i| i64::from(i == k)).collect();
    let mut seen: HashSet<Vec<i64>> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(l) = queue.pop_front() {
        for i in 0..gens {
            if l[i] == 0 {
                continue;
            }
            // s_i(lambda)_j = lambda_j - lambda_i c[j][i]
            let next: Vec<i64> = (0..n).map(|j| l[j] - l[i] * i64::from(c[j][i])).collect();
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    seen.len() as u128
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(label: &str) -> CoxeterSystem {
        CoxeterSystem::from_label(label).unwrap()
    }

    #[test]
    fn preset_data() {
        let a2 = sys("A2");
        assert_eq!(a2.num_positive_roots(), 3);
        assert_eq!(a2.order(), 6);
        let b2 = sys("B2");
        assert_eq!(b2.order(), 8);
        assert_eq!(b2.longest_element().length(), 4);
        let m = CoxeterSystem::from_coxeter_matrix(vec![vec![1, 3], vec![3, 1]]).unwrap();
        assert_eq!(m, a2);
        assert_eq!(m.descriptor(), "A2");
        for label in ["A1", "A5", "B4", "C3", "D4", "D5", "E6", "E7", "E8", "F4", "G2"] {
            let s = sys(label);
            let t = FiniteType::parse(label).unwrap();
            assert_eq!(s.order(), t.order(), "{label}");
            assert_eq!(
                s.longest_element().length() as usize,
                s.num_positive_roots(),
                "{label}"
            );
        }
        assert_eq!(sys("A1xA1").order(), 4);
        assert_eq!(sys("I2(7)").order(), 14);
    }

    #[test]
    fn matrix_errors() {
        let affine = vec![vec![1, 3, 3], vec![3, 1, 3], vec![3, 3, 1]];
        assert_eq!(
            CoxeterSystem::from_coxeter_matrix(affine).unwrap_err(),
            CoxeterError::InfiniteType
        );
        let inf = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(
            CoxeterSystem::from_coxeter_matrix(inf).unwrap_err(),
            CoxeterError::InfiniteType
        );
        let h3 = vec![vec![1, 5, 2], vec![5, 1, 3], vec![2, 3, 1]];
        assert!(matches!(
            CoxeterSystem::from_coxeter_matrix(h3),
            Err(CoxeterError::Unsupported(_))
        ));
        let b3tilde = vec![vec![1, 4, 2], vec![4, 1, 4], vec![2, 4, 1]];
        assert_eq!(
            CoxeterSystem::from_coxeter_matrix(b3tilde).unwrap_err(),
            CoxeterError::InfiniteType
        );
        assert!(CoxeterSystem::from_coxeter_matrix(vec![vec![1, 3], vec![2, 1]]).is_err());
        let i5 = CoxeterSystem::from_coxeter_matrix(vec![vec![1, 5], vec![5, 1]]).unwrap();
        assert_eq!(i5.descriptor(), "I2(5)");
        let a3_renumbered = vec![vec![1, 2, 3], vec![2, 1, 3], vec![3, 3, 1]];
        let s = CoxeterSystem::from_coxeter_matrix(a3_renumbered).unwrap();
        assert_eq!(s.order(), 24);
        assert!(s.descriptor().starts_with("coxeter:"));
        assert_eq!(CoxeterSystem::parse(s.descriptor()).unwrap(), s);
        assert_eq!(CoxeterSystem::parse("[[1,4],[4,1]]").unwrap().descriptor(), "B2");
    }

    #[test]
    fn multiplication_examples() {
        let a2 = sys("A2");
        let s1 = a2.generator(0).unwrap();
        let s2 = a2.generator(1).unwrap();
        let e = a2.identity();
        assert_eq!(a2.multiply(&s1, &e).unwrap(), s1);
        assert_eq!(a2.multiply(&s1, &s1).unwrap(), e);
        let w = a2.from_word(&[0, 1, 0]).unwrap();
        assert_eq!(w, a2.from_word(&[1, 0, 1]).unwrap());
        assert_eq!(w.length(), 3);
        let s1s2 = a2.multiply(&s1, &s2).unwrap();
        assert_eq!(a2.inverse(&s1s2).unwrap(), a2.multiply(&s2, &s1).unwrap());
        let other = sys("B2");
        assert_eq!(
            a2.multiply(&s1, &other.identity()).unwrap_err(),
            CoxeterError::OwnerMismatch
        );
    }

    #[test]
    fn dihedral_arithmetic() {
        for m in 2..=8 {
            let d = CoxeterSystem::dihedral(m);
            let els = d.enumerate().unwrap();
            assert_eq!(els.len(), 2 * m as usize);
            let w0 = d.longest_element();
            assert_eq!(w0.length(), m);
            // braid relation
            let a: Vec<usize> = (0..m as usize).map(|k| k % 2).collect();
            let b: Vec<usize> = (0..m as usize).map(|k| (k + 1) % 2).collect();
            assert_eq!(d.from_word(&a).unwrap(), d.from_word(&b).unwrap());
            for w in &els {
                for s in 0..2 {
                    let ws = d.mul_gen_right(w, s).unwrap();
                    assert_eq!(d.mul_gen_right(&ws, s).unwrap(), *w);
                    assert_eq!(ws.length() < w.length(), w.right_descents().contains(s));
                    let sw = d.mul_gen_left(s, w).unwrap();
                    assert_eq!(sw.length() < w.length(), w.left_descents().contains(s));
                }
            }
        }
    }

    #[test]
    fn words() {
        let a3 = sys("A3");
        let x = a3.parse_element("2132").unwrap();
        assert_eq!(a3.word_string(&x), "2132");
        assert_eq!(a3.word_string(&a3.parse_element("2312").unwrap()), "2132");
        assert_eq!(a3.word_string(&a3.identity()), "");
        assert_eq!(a3.parse_element("11").unwrap(), a3.identity());
        assert!(a3.parse_word("15").is_err());
        assert_eq!(a3.parse_word("3,2,1").unwrap(), vec![2, 1, 0]);
    }

    #[test]
    fn enumeration_examples() {
        let a2 = sys("A2");
        let lens: Vec<u32> = a2.enumerate().unwrap().iter().map(Element::length).collect();
        assert_eq!(lens, vec![0, 1, 1, 2, 2, 3]);
        assert_eq!(sys("I2(5)").enumerate().unwrap().len(), 10);
        assert_eq!(sys("A3").longest_element().length(), 6);
        let w0 = a2.longest_element();
        assert_eq!(w0.right_descents(), GeneratorSet::full(2));
    }

    #[test]
    fn generator_sets() {
        let s = GeneratorSet::parse("1,3", 3).unwrap();
        assert_eq!(s.to_string(), "1,3");
        assert_eq!(s.len(), 2);
        assert!(GeneratorSet::parse("", 3).unwrap().is_empty());
        assert!(GeneratorSet::parse("4", 3).is_err());
    }

    #[test]
    fn high_rank_words() {
        let a10 = CoxeterSystem::from_label("A10").unwrap();
        let s10 = a10.generator(9).unwrap();
        assert_eq!(a10.word_string(&s10), "10");
        assert_eq!(a10.parse_element("10").unwrap(), s10);
        let w = a10.parse_element("10,2,3").unwrap();
        assert_eq!(w.length(), 3);
        assert_eq!(a10.parse_element(&a10.word_string(&w)).unwrap(), w);
        assert_eq!(a10.parse_element("12").unwrap().length(), 2);
        assert!(a10.parse_element("11,1").is_err());
    }
}
