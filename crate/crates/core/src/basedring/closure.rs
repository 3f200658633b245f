//! Word-length closure: the based ring spanned by a set of generators
//! under a tensor-product oracle.
//!
//! Phase one enumerates every simple summand of a word of length at most
//! `max_word_length` in the generators and their duals, layer by layer.
//! Phase two multiplies every pair of enumerated simples; a product row
//! with a summand outside the enumeration is left out of the ring, which
//! is then truncated. The result does not depend on the order of work.

use super::BasedRing;
use crate::error::Result;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Limits on a closure run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Budget {
    pub max_simples: usize,
    pub max_tensor_dim: usize,
    pub max_word_length: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_simples: 64,
            max_tensor_dim: 144,
            max_word_length: 6,
        }
    }
}

/// One summand of a tensor product or of a generator.
#[derive(Clone, Debug)]
pub struct Summand<O> {
    pub object: O,
    pub negligible: bool,
}

/// Source of simple objects and their tensor products.
pub trait FusionOracle {
    type Obj: Clone;

    fn unit(&self) -> Self::Obj;
    /// Index of a registered object isomorphic to `x`.
    fn lookup(&self, x: &Self::Obj) -> Result<Option<usize>>;
    /// Register a new simple; returns its index (the registration count).
    fn register(&mut self, x: Self::Obj) -> Result<usize>;
    fn object(&self, i: usize) -> &Self::Obj;
    fn dual(&self, x: &Self::Obj) -> Result<Self::Obj>;
    /// Indecomposable summands of an arbitrary object.
    fn split(&self, x: &Self::Obj) -> Result<Vec<Summand<Self::Obj>>>;
    /// Dimension used against the tensor-dimension budget.
    fn size(&self, x: &Self::Obj) -> usize;
    /// Summands of `X_i ⊗ X_j` for every pair.
    fn products(&self, pairs: &[(usize, usize)]) -> Vec<Result<Vec<Summand<Self::Obj>>>>;
    /// Called for every negligible summand met.
    fn note_negligible(&mut self, _x: &Self::Obj) -> Result<()> {
        Ok(())
    }
    /// When true only `i <= j` is computed and mirrored.
    fn commutative(&self) -> bool {
        false
    }
}

/// Outcome of [`closure`]; index 0 is the unit.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Closure {
    pub word_length: Vec<usize>,
    pub duals: Vec<usize>,
    /// Indices of the simple summands of the generators (word length 1).
    pub generator_classes: Vec<Vec<usize>>,
    pub products: BTreeMap<(usize, usize), Vec<(usize, u64)>>,
    pub closed: bool,
    pub stop_reason: Option<String>,
}

impl Closure {
    pub fn len(&self) -> usize {
        self.word_length.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word_length.is_empty()
    }

    /// The ring on the given labels, truncated at `level` unless closed.
    pub fn ring(&self, labels: Vec<String>, level: usize) -> Result<BasedRing> {
        let constants = self
            .products
            .iter()
            .flat_map(|(&(i, j), row)| row.iter().map(move |&(k, v)| (i, j, k, v)));
        let truncated = !self.closed;
        BasedRing::new(
            labels,
            0,
            self.duals.clone(),
            constants,
            truncated,
            truncated.then_some(level as u32),
        )
    }
}

struct State<'a, O: FusionOracle> {
    oracle: &'a mut O,
    budget: Budget,
    out: Closure,
}

enum Halt {
    SimpleCap,
}

impl<O: FusionOracle> State<'_, O> {
    fn stop(&mut self, why: String) {
        self.out.closed = false;
        if self.out.stop_reason.is_none() {
            self.out.stop_reason = Some(why);
        }
    }

    fn add(&mut self, x: O::Obj, wl: usize) -> Result<std::result::Result<usize, Halt>> {
        if let Some(k) = self.oracle.lookup(&x)? {
            return Ok(Ok(k));
        }
        if self.out.len() >= self.budget.max_simples {
            self.stop(format!("more than {} simples", self.budget.max_simples));
            return Ok(Err(Halt::SimpleCap));
        }
        let d = self.oracle.dual(&x)?;
        let k = self.oracle.register(x)?;
        self.out.word_length.push(wl);
        self.out.duals.push(k);
        match self.oracle.lookup(&d)? {
            Some(j) => {
                self.out.duals[k] = j;
                self.out.duals[j] = k;
            }
            None => {
                if self.out.len() >= self.budget.max_simples {
                    self.stop(format!("more than {} simples", self.budget.max_simples));
                    return Ok(Err(Halt::SimpleCap));
                }
                let j = self.oracle.register(d)?;
                self.out.word_length.push(wl);
                self.out.duals.push(k);
                self.out.duals[k] = j;
            }
        }
        Ok(Ok(k))
    }

    fn admissible(&self, i: usize, j: usize) -> bool {
        self.oracle.size(self.oracle.object(i)) * self.oracle.size(self.oracle.object(j))
            <= self.budget.max_tensor_dim
    }
}

/// Run the two-phase closure from `generators`.
pub fn closure<O: FusionOracle>(
    oracle: &mut O,
    generators: &[O::Obj],
    budget: Budget,
) -> Result<Closure> {
    let mut st = State {
        oracle,
        budget,
        out: Closure {
            closed: true,
            ..Default::default()
        },
    };
    let unit = st.oracle.unit();
    if let Err(Halt::SimpleCap) = st.add(unit, 0)? {
        return Ok(st.out);
    }
    let mut gens: Vec<usize> = Vec::new();
    for g in generators {
        let mut classes = Vec::new();
        for s in st.oracle.split(g)? {
            if s.negligible {
                st.oracle.note_negligible(&s.object)?;
                continue;
            }
            match st.add(s.object, 1)? {
                Ok(k) => classes.push(k),
                Err(Halt::SimpleCap) => return Ok(st.out),
            }
        }
        st.out.generator_classes.push(classes);
    }
    for k in 1..st.out.len() {
        gens.push(k);
    }
    if budget.max_word_length == 0 {
        st.stop("word length budget is zero".into());
    }
    // phase one: words of length up to the budget
    let mut cache: BTreeMap<(usize, usize), Vec<Summand<O::Obj>>> = BTreeMap::new();
    for layer in 1..budget.max_word_length {
        let frontier: Vec<usize> = (0..st.out.len())
            .filter(|&k| st.out.word_length[k] == layer)
            .collect();
        if frontier.is_empty() {
            break;
        }
        let mut pairs = Vec::new();
        for &x in &frontier {
            for &g in &gens {
                if !st.admissible(x, g) {
                    st.stop(format!(
                        "tensor dimension {} exceeds {}",
                        st.oracle.size(st.oracle.object(x)) * st.oracle.size(st.oracle.object(g)),
                        budget.max_tensor_dim
                    ));
                    continue;
                }
                pairs.push(key(st.oracle.commutative(), x, g));
                if !st.oracle.commutative() {
                    pairs.push((g, x));
                }
            }
        }
        pairs.sort_unstable();
        pairs.dedup();
        pairs.retain(|p| !cache.contains_key(p));
        let results = st.oracle.products(&pairs);
        for (p, r) in pairs.into_iter().zip(results) {
            let summands = r?;
            for s in &summands {
                if s.negligible {
                    st.oracle.note_negligible(&s.object)?;
                } else if let Err(Halt::SimpleCap) = st.add(s.object.clone(), layer + 1)? {
                    return Ok(st.out);
                }
            }
            cache.insert(p, summands);
        }
    }
    // phase two: every pair of enumerated simples
    let n = st.out.len();
    let comm = st.oracle.commutative();
    let mut pairs = Vec::new();
    for i in 1..n {
        for j in 1..n {
            if comm && j < i {
                continue;
            }
            if !st.admissible(i, j) {
                st.stop(format!(
                    "tensor dimension {} exceeds {}",
                    st.oracle.size(st.oracle.object(i)) * st.oracle.size(st.oracle.object(j)),
                    budget.max_tensor_dim
                ));
                continue;
            }
            if !cache.contains_key(&(i, j)) {
                pairs.push((i, j));
            }
        }
    }
    let results = st.oracle.products(&pairs);
    for (p, r) in pairs.into_iter().zip(results) {
        cache.insert(p, r?);
    }
    for k in 0..n {
        st.out.products.insert((0, k), vec![(k, 1)]);
        st.out.products.insert((k, 0), vec![(k, 1)]);
    }
    for (&(i, j), summands) in &cache {
        let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
        let mut complete = true;
        for s in summands {
            if s.negligible {
                st.oracle.note_negligible(&s.object)?;
                continue;
            }
            match st.oracle.lookup(&s.object)? {
                Some(k) => *counts.entry(k).or_insert(0) += 1,
                None => {
                    complete = false;
                }
            }
        }
        if !complete {
            st.stop(format!(
                "a product has a summand of word length above {}",
                budget.max_word_length
            ));
            continue;
        }
        let row: Vec<(usize, u64)> = counts.into_iter().collect();
        if comm {
            st.out.products.insert((j, i), row.clone());
        }
        st.out.products.insert((i, j), row);
    }
    Ok(st.out)
}

fn key(commutative: bool, a: usize, b: usize) -> (usize, usize) {
    if commutative {
        (a.min(b), a.max(b))
    } else {
        (a, b)
    }
}

/// Oracle over the basis of an existing ring; products missing from the
/// ring are errors.
pub struct RingOracle<'a> {
    ring: &'a BasedRing,
    registered: Vec<usize>,
    index: BTreeMap<usize, usize>,
}

impl<'a> RingOracle<'a> {
    pub fn new(ring: &'a BasedRing) -> Self {
        RingOracle {
            ring,
            registered: Vec::new(),
            index: BTreeMap::new(),
        }
    }

    /// Ring index of each registered simple.
    pub fn registered(&self) -> &[usize] {
        &self.registered
    }
}

impl FusionOracle for RingOracle<'_> {
    type Obj = usize;

    fn unit(&self) -> usize {
        self.ring.unit()
    }

    fn lookup(&self, x: &usize) -> Result<Option<usize>> {
        Ok(self.index.get(x).copied())
    }

    fn register(&mut self, x: usize) -> Result<usize> {
        let k = self.registered.len();
        self.registered.push(x);
        self.index.insert(x, k);
        Ok(k)
    }

    fn object(&self, i: usize) -> &usize {
        &self.registered[i]
    }

    fn dual(&self, x: &usize) -> Result<usize> {
        Ok(self.ring.dual(*x))
    }

    fn split(&self, x: &usize) -> Result<Vec<Summand<usize>>> {
        Ok(vec![Summand {
            object: *x,
            negligible: false,
        }])
    }

    fn size(&self, _x: &usize) -> usize {
        1
    }

    fn products(&self, pairs: &[(usize, usize)]) -> Vec<Result<Vec<Summand<usize>>>> {
        pairs
            .iter()
            .map(|&(i, j)| {
                let (a, b) = (self.registered[i], self.registered[j]);
                let row = self.ring.product(a, b).ok_or_else(|| {
                    crate::error::Error::Mismatch(format!(
                        "product {} * {} is outside the stored ring",
                        self.ring.label(a),
                        self.ring.label(b)
                    ))
                })?;
                Ok(row
                    .iter()
                    .flat_map(|&(k, v)| {
                        std::iter::repeat_n(
                            Summand {
                                object: k,
                                negligible: false,
                            },
                            v as usize,
                        )
                    })
                    .collect())
            })
            .collect()
    }

    fn commutative(&self) -> bool {
        self.ring.is_commutative()
    }
}

/// Closure of `generators` (indices of `ring`) inside `ring`, returned as
/// a ring labelled by the original labels.
pub fn ring_closure(
    ring: &BasedRing,
    generators: &[usize],
    budget: Budget,
) -> Result<(BasedRing, Vec<usize>)> {
    let mut o = RingOracle::new(ring);
    let c = closure(&mut o, generators, budget)?;
    let labels = o
        .registered()
        .iter()
        .map(|&i| ring.label(i).to_string())
        .collect();
    Ok((
        c.ring(labels, budget.max_word_length)?,
        o.registered().to_vec(),
    ))
}

#[cfg(test)]
mod tests {
    use super::super::{catalog, group_ring, iso_search, IsoOptions};
    use super::*;

    #[test]
    fn closure_inside_group_ring() {
        let z12 = group_ring(&[12], None).unwrap();
        let g3 = z12.index_of("g(3)").unwrap();
        let (sub, _) = ring_closure(&z12, &[g3], Budget::default()).unwrap();
        assert!(!sub.is_truncated());
        assert!(iso_search(
            &sub,
            &group_ring(&[4], None).unwrap(),
            &IsoOptions::default()
        )
        .unwrap()
        .is_some());
    }

    #[test]
    fn truncation_follows_word_length() {
        let z = group_ring(&[0], Some(8)).unwrap();
        let g = z.index_of("g(1)").unwrap();
        let budget = Budget {
            max_word_length: 2,
            ..Default::default()
        };
        let (sub, _) = ring_closure(&z, &[g], budget).unwrap();
        // 1, g^{±1}, g^{±2}
        assert_eq!(sub.rank(), 5);
        assert!(sub.is_truncated());
        let a = sub.index_of("g(1)").unwrap();
        let b = sub.index_of("g(-1)").unwrap();
        assert!(sub.product(a, b).is_some());
        assert!(sub.product(a, a).is_some());
        let c = sub.index_of("g(2)").unwrap();
        assert!(sub.product(a, c).is_none());
    }

    #[test]
    fn verlinde_closure_from_fundamental() {
        let v = catalog("ver_p(7)").unwrap();
        let (sub, _) = ring_closure(&v, &[1], Budget::default()).unwrap();
        assert_eq!(sub.rank(), 6);
        assert!(!sub.is_truncated());
    }
}
