//! Small finite groups as concrete permutation groups.

mod catalog;
mod perm;

pub use catalog::{catalog, GroupSpec};
pub use perm::Perm;

use crate::error::{Error, Result};
use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::{Arc, OnceLock};

/// Hard cap on enumerated group order.
pub const ORDER_CAP: usize = 10080;
/// Multiplication tables are only built below this order.
const TABLE_CAP: usize = 2048;

/// A finite permutation group with all elements enumerated.
///
/// Elements are numbered in breadth-first order from the identity (index 0),
/// where element `i` is `gens[g] * elements[parent]` for the first generator
/// `g` (in order) that reaches it.
#[derive(Debug)]
pub struct PermGroup {
    name: String,
    spec: GroupSpec,
    degree: usize,
    gens: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    parent: Vec<(usize, usize)>,
    inverses: Vec<usize>,
    table: OnceLock<Vec<u32>>,
}

pub type GroupRef = Arc<PermGroup>;

impl PartialEq for PermGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.gens == other.gens
    }
}

impl Eq for PermGroup {}

impl PermGroup {
    /// Enumerate the group generated by `gens`.
    pub fn enumerate(name: &str, spec: GroupSpec, degree: usize, gens: Vec<Perm>) -> Result<Self> {
        for g in &gens {
            if g.degree() != degree {
                return Err(Error::InvalidPermutation(format!(
                    "generator {g:?} has degree {}, expected {degree}",
                    g.degree()
                )));
            }
        }
        let id = Perm::identity(degree);
        let mut elements = vec![id.clone()];
        let mut index = HashMap::from([(id, 0usize)]);
        let mut parent = vec![(usize::MAX, usize::MAX)];
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for (k, g) in gens.iter().enumerate() {
                let x = g.compose(&elements[i]);
                if index.contains_key(&x) {
                    continue;
                }
                if elements.len() >= ORDER_CAP {
                    return Err(Error::OrderCapExceeded { cap: ORDER_CAP });
                }
                index.insert(x.clone(), elements.len());
                queue.push_back(elements.len());
                elements.push(x);
                parent.push((i, k));
            }
        }
        let inverses = elements.iter().map(|x| index[&x.inverse()]).collect();
        Ok(PermGroup {
            name: name.to_string(),
            spec,
            degree,
            gens,
            elements,
            index,
            parent,
            inverses,
            table: OnceLock::new(),
        })
    }

    /// Group generated by 1-based cycle lists.
    pub fn from_cycles(name: &str, gens: &[Vec<Vec<u32>>]) -> Result<Self> {
        let degree = gens
            .iter()
            .flatten()
            .flatten()
            .copied()
            .max()
            .unwrap_or(1)
            .max(1) as usize;
        let perms = gens
            .iter()
            .map(|c| Perm::from_cycles(degree, c))
            .collect::<Result<Vec<_>>>()?;
        Self::enumerate(
            name,
            GroupSpec::Generators {
                generators: gens.to_vec(),
            },
            degree,
            perms,
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.gens
    }

    pub fn num_generators(&self) -> usize {
        self.gens.len()
    }

    pub fn element(&self, i: usize) -> &Perm {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Index of the k-th generator.
    pub fn generator_index(&self, k: usize) -> usize {
        self.index[&self.gens[k]]
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.inverses[i]
    }

    fn table(&self) -> Option<&Vec<u32>> {
        if self.order() > TABLE_CAP {
            return None;
        }
        Some(self.table.get_or_init(|| {
            let n = self.order();
            let mut t = vec![0u32; n * n];
            for i in 0..n {
                for j in 0..n {
                    t[i * n + j] = self.index[&self.elements[i].compose(&self.elements[j])] as u32;
                }
            }
            t
        }))
    }

    /// Index of `elements[i] * elements[j]`.
    pub fn mul(&self, i: usize, j: usize) -> usize {
        match self.table() {
            Some(t) => t[i * self.order() + j] as usize,
            None => self.index[&self.elements[i].compose(&self.elements[j])],
        }
    }

    /// x * h * x^-1
    pub fn conjugate(&self, x: usize, h: usize) -> usize {
        self.mul(self.mul(x, h), self.inverses[x])
    }

    /// Generator word w with `element(i) = gens[w[0]] * gens[w[1]] * ...`.
    pub fn word(&self, mut i: usize) -> Vec<usize> {
        let mut w = Vec::new();
        while i != 0 {
            let (p, g) = self.parent[i];
            w.push(g);
            i = p;
        }
        w
    }

    /// `(parent, generator)` with `element(i) = gens[generator] * element(parent)`;
    /// meaningless for the identity.
    pub fn parent(&self, i: usize) -> (usize, usize) {
        self.parent[i]
    }

    pub fn element_order(&self, i: usize) -> usize {
        let mut k = 1;
        let mut x = i;
        while x != 0 {
            x = self.mul(x, i);
            k += 1;
        }
        k
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup {
            elements: (0..self.order()).collect(),
            gens: (0..self.num_generators())
                .map(|k| self.generator_index(k))
                .collect(),
        }
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup {
            elements: vec![0],
            gens: Vec::new(),
        }
    }

    /// Subgroup generated by the given element indices.
    pub fn subgroup(&self, gens: &[usize]) -> Subgroup {
        let mut gens: Vec<usize> = gens.iter().copied().filter(|&g| g != 0).collect();
        gens.dedup();
        let mut seen = HashSet::from([0usize]);
        let mut elements = vec![0usize];
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = self.mul(g, x);
                if seen.insert(y) {
                    elements.push(y);
                    queue.push_back(y);
                }
            }
        }
        elements.sort_unstable();
        Subgroup { elements, gens }
    }

    /// Sylow p-subgroup by iterated extension through normalizers.
    pub fn sylow(&self, p: u64) -> Subgroup {
        let p = p as usize;
        let mut target = 1;
        let mut n = self.order();
        while n.is_multiple_of(p) {
            n /= p;
            target *= p;
        }
        if target == 1 {
            return self.trivial();
        }
        let is_p_elem = |x: usize| is_power_of(self.element_order(x), p);
        let first = (0..self.order())
            .filter(|&x| is_p_elem(x))
            .max_by_key(|&x| (self.element_order(x), std::cmp::Reverse(x)))
            .unwrap();
        let mut cur = self.subgroup(&[first]);
        while cur.order() < target {
            let norm = self.normalizer(&cur);
            let y = norm
                .elements
                .iter()
                .copied()
                .find(|&y| !cur.contains(y) && is_p_elem(y))
                .expect("a p-element outside a non-Sylow p-subgroup exists in its normalizer");
            let mut g = cur.gens.clone();
            g.push(y);
            cur = self.subgroup(&g);
        }
        cur
    }

    /// `{ x : x H x^-1 = H }`.
    pub fn normalizer(&self, h: &Subgroup) -> Subgroup {
        let set: HashSet<usize> = h.elements.iter().copied().collect();
        let elems: Vec<usize> = (0..self.order())
            .filter(|&x| h.gens.iter().all(|&g| set.contains(&self.conjugate(x, g))))
            .collect();
        self.subgroup_from_elements(elems)
    }

    /// Wrap a known closed element set, choosing a small generating set.
    pub fn subgroup_from_elements(&self, mut elements: Vec<usize>) -> Subgroup {
        elements.sort_unstable();
        let mut gens = Vec::new();
        let mut span = self.subgroup(&[]);
        for &x in &elements {
            if span.order() == elements.len() {
                break;
            }
            if !span.contains(x) {
                gens.push(x);
                span = self.subgroup(&gens);
            }
        }
        Subgroup { elements, gens }
    }

    pub fn is_subgroup(&self, h: &Subgroup) -> bool {
        let set: HashSet<usize> = h.elements.iter().copied().collect();
        set.contains(&0)
            && h.elements.iter().all(|&x| x < self.order())
            && h.elements
                .iter()
                .all(|&x| h.elements.iter().all(|&y| set.contains(&self.mul(x, y))))
    }

    pub fn are_conjugate(&self, a: &Subgroup, b: &Subgroup) -> bool {
        if a.order() != b.order() {
            return false;
        }
        let bset: HashSet<usize> = b.elements.iter().copied().collect();
        (0..self.order()).any(|x| a.gens.iter().all(|&g| bset.contains(&self.conjugate(x, g))))
    }

    /// All subgroups of one Sylow p-subgroup, up to G-conjugacy, by order.
    pub fn p_subgroups_up_to_conjugacy(&self, p: u64) -> Result<Vec<Subgroup>> {
        let syl = self.sylow(p);
        if syl.order() > 64 {
            return Err(Error::SylowTooLarge(syl.order()));
        }
        let mut all: Vec<Subgroup> = vec![self.trivial()];
        let mut seen: HashSet<Vec<usize>> = HashSet::from([vec![0]]);
        let mut i = 0;
        while i < all.len() {
            let s = all[i].clone();
            for &x in &syl.elements {
                if s.contains(x) {
                    continue;
                }
                let mut g = s.gens.clone();
                g.push(x);
                let t = self.subgroup(&g);
                if seen.insert(t.elements.clone()) {
                    all.push(t);
                }
            }
            i += 1;
        }
        all.sort_by_key(|s| (s.order(), s.elements.clone()));
        let mut reps: Vec<Subgroup> = Vec::new();
        for s in all {
            if !reps.iter().any(|r| self.are_conjugate(r, &s)) {
                reps.push(s);
            }
        }
        Ok(reps)
    }

    /// Left coset representatives of h, each the minimal index in its coset.
    pub fn coset_reps(&self, h: &Subgroup) -> Vec<usize> {
        let mut covered = vec![false; self.order()];
        let mut reps = Vec::new();
        for x in 0..self.order() {
            if covered[x] {
                continue;
            }
            reps.push(x);
            for &y in &h.elements {
                covered[self.mul(x, y)] = true;
            }
        }
        reps
    }

    /// The subgroup as a permutation group in its own right, generated by
    /// the images of `h.gens` (in order).
    pub fn subgroup_as_group(&self, h: &Subgroup, name: &str) -> Result<PermGroup> {
        let gens: Vec<Perm> = h.gens.iter().map(|&g| self.elements[g].clone()).collect();
        let spec = GroupSpec::Generators {
            generators: gens.iter().map(|g| g.cycles()).collect(),
        };
        PermGroup::enumerate(name, spec, self.degree, gens)
    }

    /// Prime-power decomposition check: is the order a power of p?
    pub fn is_p_group(&self, p: u64) -> bool {
        is_power_of(self.order(), p as usize)
    }
}

fn is_power_of(mut n: usize, p: usize) -> bool {
    while n > 1 && n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

/// A subgroup of a fixed ambient group, by element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    /// Sorted element indices in the ambient group.
    pub elements: Vec<usize>,
    /// Generating element indices.
    pub gens: Vec<usize>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerate_small_groups() {
        assert_eq!(catalog("symmetric:4").unwrap().order(), 24);
        assert_eq!(catalog("dihedral:5").unwrap().order(), 10);
        assert_eq!(catalog("klein_four").unwrap().order(), 4);
        let s4 = PermGroup::from_cycles("S4", &[vec![vec![1, 2]], vec![vec![1, 2, 3, 4]]]).unwrap();
        assert_eq!(s4.order(), 24);
    }

    #[test]
    fn words_reproduce_elements() {
        let g = catalog("symmetric:4").unwrap();
        for i in 0..g.order() {
            let mut x = Perm::identity(g.degree());
            for &k in g.word(i).iter().rev() {
                x = g.generators()[k].compose(&x);
            }
            assert_eq!(&x, g.element(i));
        }
    }

    #[test]
    fn sylow_and_normalizer() {
        let s5 = catalog("symmetric:5").unwrap();
        let p5 = s5.sylow(5);
        assert_eq!(p5.order(), 5);
        assert_eq!(s5.normalizer(&p5).order(), 20);
        assert_eq!(s5.normalizer(&s5.sylow(3)).order(), 12);
        assert_eq!(s5.sylow(7).order(), 1);
        let s4 = catalog("symmetric:4").unwrap();
        assert_eq!(s4.sylow(2).order(), 8);
        let w = s5.whole();
        assert_eq!(s5.normalizer(&w).order(), 120);
    }

    #[test]
    fn p_subgroup_lists() {
        let z5 = catalog("cyclic:5").unwrap();
        let l = z5.p_subgroups_up_to_conjugacy(5).unwrap();
        assert_eq!(l.iter().map(|s| s.order()).collect::<Vec<_>>(), vec![1, 5]);
        let v4 = catalog("klein_four").unwrap();
        let l = v4.p_subgroups_up_to_conjugacy(2).unwrap();
        assert_eq!(
            l.iter().map(|s| s.order()).collect::<Vec<_>>(),
            vec![1, 2, 2, 2, 4]
        );
        let s4 = catalog("symmetric:4").unwrap();
        let l = s4.p_subgroups_up_to_conjugacy(3).unwrap();
        assert_eq!(l.iter().map(|s| s.order()).collect::<Vec<_>>(), vec![1, 3]);
    }

    #[test]
    fn order_cap() {
        assert!(matches!(
            catalog("symmetric:8"),
            Err(Error::OrderCapExceeded { .. })
        ));
    }

    #[test]
    fn coset_reps_are_minimal() {
        let s5 = catalog("symmetric:5").unwrap();
        let p = s5.sylow(5);
        let reps = s5.coset_reps(&p);
        assert_eq!(reps.len(), 24);
        assert_eq!(reps[0], 0);
    }
}
