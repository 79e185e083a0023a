use std::collections::{HashMap, VecDeque};
use std::sync::OnceLock;

use super::{CoxeterSystem, Element, ElementKey, GeneratorSet};

/// Dense enumeration of a finite Coxeter group: elements sorted by length
/// then canonical key, with generator multiplication tables and a lazily
/// filled Bruhat matrix. Element indices are `u32` positions in that order.
pub struct GroupTable {
    owner: u64,
    rank: usize,
    elements: Vec<Element>,
    index: HashMap<ElementKey, u32>,
    left: Vec<u32>,
    right: Vec<u32>,
    words: Vec<Vec<u8>>,
    bruhat: OnceLock<Vec<Vec<u64>>>,
}

impl GroupTable {
    pub(super) fn build(sys: &CoxeterSystem) -> Self {
        let rank = sys.rank();
        let e = sys.identity();
        let mut found: HashMap<ElementKey, Element> = HashMap::from([(e.key.clone(), e.clone())]);
        let mut queue = VecDeque::from([e]);
        while let Some(w) = queue.pop_front() {
            for s in 0..rank {
                let ws = sys.mul_gen_right_unchecked(&w, s);
                if !found.contains_key(&ws.key) {
                    found.insert(ws.key.clone(), ws.clone());
                    queue.push_back(ws);
                }
            }
        }
        let mut elements: Vec<Element> = found.into_values().collect();
        elements.sort();
        let index: HashMap<ElementKey, u32> = elements
            .iter()
            .enumerate()
            .map(|(i, w)| (w.key.clone(), i as u32))
            .collect();
        let n = elements.len();
        let mut left = vec![0u32; n * rank];
        let mut right = vec![0u32; n * rank];
        for (i, w) in elements.iter().enumerate() {
            for s in 0..rank {
                right[i * rank + s] = index[&sys.mul_gen_right_unchecked(w, s).key];
                left[i * rank + s] = index[&sys.mul_gen_left_unchecked(s, w).key];
            }
        }
        // lex-min reduced words: w = s * (s w) with s the smallest left descent
        let mut words: Vec<Vec<u8>> = vec![Vec::new(); n];
        for i in 1..n {
            let s = elements[i].left.first().unwrap();
            let rest = left[i * rank + s] as usize;
            let mut word = Vec::with_capacity(elements[i].length as usize);
            word.push(s as u8);
            word.extend_from_slice(&words[rest]);
            words[i] = word;
        }
        Self {
            owner: sys.id(),
            rank,
            elements,
            index,
            left,
            right,
            words,
            bruhat: OnceLock::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn owner(&self) -> u64 {
        self.owner
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn element(&self, i: u32) -> &Element {
        &self.elements[i as usize]
    }

    pub fn index_of(&self, w: &Element) -> Option<u32> {
        if w.owner != self.owner {
            return None;
        }
        self.index.get(&w.key).copied()
    }

    pub fn length(&self, i: u32) -> u32 {
        self.elements[i as usize].length
    }

    pub fn left_descents(&self, i: u32) -> GeneratorSet {
        self.elements[i as usize].left
    }

    pub fn right_descents(&self, i: u32) -> GeneratorSet {
        self.elements[i as usize].right
    }

    /// Index of `s * w`.
    #[inline]
    pub fn left_mul(&self, s: usize, i: u32) -> u32 {
        self.left[i as usize * self.rank + s]
    }

    /// Index of `w * s`.
    #[inline]
    pub fn right_mul(&self, i: u32, s: usize) -> u32 {
        self.right[i as usize * self.rank + s]
    }

    /// Lexicographically smallest reduced word, 0-based.
    pub fn word(&self, i: u32) -> &[u8] {
        &self.words[i as usize]
    }

    pub fn identity(&self) -> u32 {
        0
    }

    pub fn longest(&self) -> u32 {
        (self.len() - 1) as u32
    }

    /// Product `a * b` through the multiplication tables.
    pub fn multiply(&self, a: u32, b: u32) -> u32 {
        self.words[b as usize]
            .iter()
            .fold(a, |acc, &s| self.right_mul(acc, s as usize))
    }

    pub fn inverse(&self, a: u32) -> u32 {
        self.words[a as usize]
            .iter()
            .fold(0, |acc, &s| self.left_mul(s as usize, acc))
    }

    fn bruhat_rows(&self) -> &Vec<Vec<u64>> {
        self.bruhat.get_or_init(|| {
            let n = self.len();
            let words = n.div_ceil(64);
            let mut rows: Vec<Vec<u64>> = Vec::with_capacity(n);
            rows.push({
                let mut r = vec![0u64; words];
                r[0] = 1;
                r
            });
            for x in 1..n {
                let s = self.elements[x].left.first().unwrap();
                let sx = self.left_mul(s, x as u32) as usize;
                let mut row = vec![0u64; words];
                // y <= x  iff  min(y, sy) <= sx
                for y in 0..n {
                    let probe = if self.elements[y].left.contains(s) {
                        self.left_mul(s, y as u32) as usize
                    } else {
                        y
                    };
                    if rows[sx][probe / 64] >> (probe % 64) & 1 == 1 {
                        row[y / 64] |= 1 << (y % 64);
                    }
                }
                rows.push(row);
            }
            rows
        })
    }

    /// Bruhat order `y <= x` on indices (memoized bit matrix).
    pub fn bruhat_leq(&self, y: u32, x: u32) -> bool {
        let rows = self.bruhat_rows();
        rows[x as usize][y as usize / 64] >> (y % 64) & 1 == 1
    }

    /// Indices `y <= x`, ascending.
    pub fn lower_interval(&self, x: u32) -> Vec<u32> {
        let row = &self.bruhat_rows()[x as usize];
        (0..=x).filter(|&y| row[y as usize / 64] >> (y % 64) & 1 == 1).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_are_consistent() {
        for label in ["A3", "B3", "G2", "I2(5)"] {
            let sys = CoxeterSystem::from_label(label).unwrap();
            let t = sys.table().unwrap();
            assert_eq!(t.len() as u128, sys.order());
            for i in 0..t.len() as u32 {
                assert_eq!(t.word(i).len() as u32, t.length(i));
                let w: Vec<usize> = t.word(i).iter().map(|&s| s as usize).collect();
                assert_eq!(sys.from_word(&w).unwrap(), *t.element(i));
                assert_eq!(t.multiply(i, t.inverse(i)), 0);
                for s in 0..t.rank() {
                    assert_eq!(t.right_mul(t.right_mul(i, s), s), i);
                }
            }
            assert_eq!(t.length(t.longest()) as usize, sys.num_positive_roots());
        }
    }

    #[test]
    fn a2_has_19_comparable_pairs() {
        let sys = CoxeterSystem::from_label("A2").unwrap();
        let t = sys.table().unwrap();
        let n = t.len() as u32;
        let count = (0..n).flat_map(|x| (0..n).map(move |y| (y, x))).filter(|&(y, x)| t.bruhat_leq(y, x)).count();
        assert_eq!(count, 19);
        let s1 = t.index_of(&sys.generator(0).unwrap()).unwrap();
        let s2 = t.index_of(&sys.generator(1).unwrap()).unwrap();
        let s2s1 = t.index_of(&sys.from_word(&[1, 0]).unwrap()).unwrap();
        assert!(!t.bruhat_leq(s1, s2));
        assert!(t.bruhat_leq(s1, s2s1));
    }
}
