//! Based rings (fusion rings, possibly truncated at a word length):
//! validation, Frobenius–Perron dimensions, characters, formal codegrees,
//! isomorphism search, products and a catalog of named rings.

mod catalog;
pub mod closure;
mod iso;
mod spectral;

pub use catalog::{
    catalog, group_ring, k_inf_trunc, k_l, k_l_tilde, osp12_trunc, pgl2_trunc, sl2_trunc, ver_p,
    ver_p_plus, verlinde, verlinde_even,
};
pub use closure::{closure, ring_closure, Budget, Closure, FusionOracle, RingOracle, Summand};
pub use iso::{embed_search, is_embedding, is_isomorphism, iso_search, IsoOptions};
pub use spectral::{characters, formal_codegree, RingCharacter};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A based ring with basis `X_0..X_{n-1}`.
///
/// Products are stored per ordered pair; in a truncated ring a pair is
/// absent exactly when its product leaves the stored basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "BasedRingJson", try_from = "BasedRingJson")]
pub struct BasedRing {
    basis: Vec<String>,
    unit: usize,
    dual: Vec<usize>,
    products: BTreeMap<(usize, usize), Vec<(usize, u64)>>,
    truncated: bool,
    level: Option<u32>,
}

/// Outcome of [`BasedRing::validate`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<String>,
    /// Number of associativity triples not checked because a needed
    /// product is missing.
    pub skipped: usize,
    /// The first skipped triples `(i, j, k)`.
    pub skipped_examples: Vec<[usize; 3]>,
}

const SKIPPED_LISTED: usize = 64;

/// Based-ring file format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasedRingJson {
    pub basis: Vec<String>,
    pub unit: usize,
    pub dual: Vec<usize>,
    pub constants: Vec<[u64; 4]>,
    pub truncated: bool,
    pub level: Option<u32>,
}

impl BasedRing {
    /// Build from constants `(i, j, k, N_ij^k)`; zero entries are dropped.
    /// Untruncated rings must define every product.
    pub fn new(
        basis: Vec<String>,
        unit: usize,
        dual: Vec<usize>,
        constants: impl IntoIterator<Item = (usize, usize, usize, u64)>,
        truncated: bool,
        level: Option<u32>,
    ) -> Result<Self> {
        let n = basis.len();
        if unit >= n || dual.len() != n || dual.iter().any(|&d| d >= n) {
            return Err(Error::Parse("unit or dual index out of range".into()));
        }
        let mut products: BTreeMap<(usize, usize), BTreeMap<usize, u64>> = BTreeMap::new();
        for (i, j, k, v) in constants {
            if i >= n || j >= n || k >= n {
                return Err(Error::Parse(format!("constant ({i},{j},{k}) out of range")));
            }
            if v > 0 {
                *products.entry((i, j)).or_default().entry(k).or_default() += v;
            }
        }
        let products: BTreeMap<_, Vec<_>> = products
            .into_iter()
            .map(|(key, row)| (key, row.into_iter().collect()))
            .collect();
        if !truncated && products.len() != n * n {
            return Err(Error::Parse(format!(
                "untruncated ring defines {} of {} products",
                products.len(),
                n * n
            )));
        }
        Ok(BasedRing {
            basis,
            unit,
            dual,
            products,
            truncated,
            level: if truncated { level } else { None },
        })
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn label(&self, i: usize) -> &str {
        &self.basis[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.basis.iter().position(|b| b == label)
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn dual(&self, i: usize) -> usize {
        self.dual[i]
    }

    pub fn duals(&self) -> &[usize] {
        &self.dual
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn level(&self) -> Option<u32> {
        self.level
    }

    pub fn is_complete(&self, i: usize, j: usize) -> bool {
        self.products.contains_key(&(i, j))
    }

    /// `X_i X_j` as sorted `(k, N_ij^k)`, or `None` when outside the
    /// truncation.
    pub fn product(&self, i: usize, j: usize) -> Option<&[(usize, u64)]> {
        self.products.get(&(i, j)).map(|v| v.as_slice())
    }

    pub fn n(&self, i: usize, j: usize, k: usize) -> Option<u64> {
        self.product(i, j)
            .map(|row| row.iter().find(|(x, _)| *x == k).map_or(0, |(_, v)| *v))
    }

    pub fn products(&self) -> impl Iterator<Item = ((usize, usize), &[(usize, u64)])> {
        self.products.iter().map(|(k, v)| (*k, v.as_slice()))
    }

    /// All constants `(i, j, k, v)` in lexicographic order.
    pub fn constants(&self) -> Vec<(usize, usize, usize, u64)> {
        self.products
            .iter()
            .flat_map(|(&(i, j), row)| row.iter().map(move |&(k, v)| (i, j, k, v)))
            .collect()
    }

    pub fn is_commutative(&self) -> bool {
        self.products
            .iter()
            .all(|(&(i, j), row)| self.product(j, i).is_none_or(|r| r == row.as_slice()))
    }

    /// `X_i` is invertible when `X_i X_{i*} = 1`.
    pub fn is_invertible(&self, i: usize) -> bool {
        self.product(i, self.dual[i]) == Some(&[(self.unit, 1)][..])
    }

    /// Multiplicative order of an invertible element, when all needed
    /// powers are stored.
    pub fn order(&self, i: usize) -> Option<usize> {
        if !self.is_invertible(i) {
            return None;
        }
        let mut cur = i;
        let mut k = 1;
        while cur != self.unit {
            match self.product(cur, i) {
                Some([(next, 1)]) => cur = *next,
                _ => return None,
            }
            k += 1;
            if k > self.rank() + 1 {
                return None;
            }
        }
        Some(k)
    }

    /// Sum of the coefficients of `X_i X_j`.
    pub fn row_sum(&self, i: usize, j: usize) -> Option<u64> {
        self.product(i, j).map(|r| r.iter().map(|(_, v)| v).sum())
    }

    /// Left multiplication by `X_i` in the basis: `L[k][j] = N_ij^k`.
    pub fn left_matrix(&self, i: usize) -> Result<Vec<Vec<u64>>> {
        let n = self.rank();
        let mut m = vec![vec![0; n]; n];
        for j in 0..n {
            for &(k, v) in self.product(i, j).ok_or(Error::Truncated)? {
                m[k][j] = v;
            }
        }
        Ok(m)
    }

    /// The same ring with basis relabelled by `perm` (new index of old `i`
    /// is `perm[i]`).
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.rank();
        let mut basis = vec![String::new(); n];
        let mut dual = vec![0; n];
        for i in 0..n {
            basis[perm[i]] = self.basis[i].clone();
            dual[perm[i]] = perm[self.dual[i]];
        }
        BasedRing::new(
            basis,
            perm[self.unit],
            dual,
            self.constants()
                .into_iter()
                .map(|(i, j, k, v)| (perm[i], perm[j], perm[k], v)),
            self.truncated,
            self.level,
        )
    }

    /// Check the based-ring axioms: unit, involutive duality fixing the
    /// unit, `N_ij^0 = δ(j, i*)`, `N_ij^k = N_{j*i*}^{k*}`, associativity.
    pub fn validate(&self) -> ValidationReport {
        let n = self.rank();
        let u = self.unit;
        let mut rep = ValidationReport::default();
        let mut bad = |s: String| rep.violations.push(s);
        if self.dual[u] != u {
            bad("unit is not self-dual".into());
        }
        for i in 0..n {
            if self.dual[self.dual[i]] != i {
                bad(format!("duality is not an involution at {i}"));
            }
        }
        for j in 0..n {
            for (a, b) in [(u, j), (j, u)] {
                match self.product(a, b) {
                    Some(row) if row == [(j, 1)] => {}
                    Some(_) => bad(format!("unit law fails for X_{j}")),
                    None if self.truncated => {}
                    None => bad(format!("product ({a},{b}) missing")),
                }
            }
        }
        for (&(i, j), row) in &self.products {
            let n0 = row.iter().find(|(k, _)| *k == u).map_or(0, |x| x.1);
            let want = u64::from(j == self.dual[i]);
            if n0 != want {
                bad(format!("N_({i},{j})^unit = {n0}, expected {want}"));
            }
            if let Some(other) = self.product(self.dual[j], self.dual[i]) {
                let mut mapped: Vec<(usize, u64)> =
                    row.iter().map(|&(k, v)| (self.dual[k], v)).collect();
                mapped.sort_unstable();
                if mapped != other {
                    bad(format!("duality anti-symmetry fails for ({i},{j})"));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    match (self.triple_left(i, j, k), self.triple_right(i, j, k)) {
                        (Some(l), Some(r)) => {
                            if l != r {
                                rep.violations
                                    .push(format!("associativity fails for ({i},{j},{k})"));
                            }
                        }
                        _ => {
                            if rep.skipped_examples.len() < SKIPPED_LISTED {
                                rep.skipped_examples.push([i, j, k]);
                            }
                            rep.skipped += 1;
                        }
                    }
                }
            }
        }
        rep.ok = rep.violations.is_empty();
        rep
    }

    fn triple_left(&self, i: usize, j: usize, k: usize) -> Option<BTreeMap<usize, u64>> {
        let mut acc = BTreeMap::new();
        for &(m, a) in self.product(i, j)? {
            for &(l, b) in self.product(m, k)? {
                *acc.entry(l).or_insert(0) += a * b;
            }
        }
        Some(acc)
    }

    fn triple_right(&self, i: usize, j: usize, k: usize) -> Option<BTreeMap<usize, u64>> {
        let mut acc = BTreeMap::new();
        for &(m, a) in self.product(j, k)? {
            for &(l, b) in self.product(i, m)? {
                *acc.entry(l).or_insert(0) += a * b;
            }
        }
        Some(acc)
    }

    /// External product `self ⊠ other`, basis index `i * other.rank() + j`.
    pub fn product_ring(&self, other: &BasedRing) -> Result<BasedRing> {
        let nb = other.rank();
        let idx = |i: usize, j: usize| i * nb + j;
        let mut basis = Vec::with_capacity(self.rank() * nb);
        let mut dual = Vec::with_capacity(self.rank() * nb);
        for i in 0..self.rank() {
            for j in 0..nb {
                basis.push(format!("{}.{}", self.basis[i], other.basis[j]));
                dual.push(idx(self.dual[i], other.dual[j]));
            }
        }
        let mut constants = Vec::new();
        for (&(i1, j1), r1) in &self.products {
            for (&(i2, j2), r2) in &other.products {
                for &(k1, v1) in r1 {
                    for &(k2, v2) in r2 {
                        constants.push((idx(i1, i2), idx(j1, j2), idx(k1, k2), v1 * v2));
                    }
                }
            }
        }
        let truncated = self.truncated || other.truncated;
        let level = match (self.level, other.level) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        BasedRing::new(
            basis,
            idx(self.unit, other.unit),
            dual,
            constants,
            truncated,
            level,
        )
    }

    pub fn to_json(&self) -> BasedRingJson {
        BasedRingJson {
            basis: self.basis.clone(),
            unit: self.unit,
            dual: self.dual.clone(),
            constants: self
                .constants()
                .into_iter()
                .map(|(i, j, k, v)| [i as u64, j as u64, k as u64, v])
                .collect(),
            truncated: self.truncated,
            level: self.level,
        }
    }

    pub fn from_json(j: &BasedRingJson) -> Result<Self> {
        let n = j.basis.len() as u64;
        if j.constants.iter().any(|c| c[..3].iter().any(|&x| x >= n)) {
            return Err(Error::Parse("constant index out of range".into()));
        }
        BasedRing::new(
            j.basis.clone(),
            j.unit,
            j.dual.clone(),
            j.constants
                .iter()
                .map(|c| (c[0] as usize, c[1] as usize, c[2] as usize, c[3])),
            j.truncated,
            j.level,
        )
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("ring JSON serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        BasedRing::from_json(&serde_json::from_str(s)?)
    }

    /// Restriction to the basis elements `keep` (must contain the unit and
    /// be closed under duals); products leaving the subset are dropped and
    /// the result is marked truncated when any are.
    pub fn restrict(&self, keep: &[usize], level: Option<u32>) -> Result<BasedRing> {
        let pos: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(a, &b)| (b, a)).collect();
        let unit = *pos
            .get(&self.unit)
            .ok_or_else(|| Error::Parse("subset misses the unit".into()))?;
        let dual = keep
            .iter()
            .map(|&i| {
                pos.get(&self.dual[i])
                    .copied()
                    .ok_or_else(|| Error::Parse("subset not closed under duals".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut constants = Vec::new();
        let mut dropped = false;
        for (&(i, j), row) in &self.products {
            let (Some(&a), Some(&b)) = (pos.get(&i), pos.get(&j)) else {
                continue;
            };
            if row.iter().all(|(k, _)| pos.contains_key(k)) {
                constants.extend(row.iter().map(|&(k, v)| (a, b, pos[&k], v)));
            } else {
                dropped = true;
            }
        }
        let missing = keep
            .iter()
            .any(|&i| keep.iter().any(|&j| !self.is_complete(i, j)));
        let truncated = dropped || missing;
        BasedRing::new(
            keep.iter().map(|&i| self.basis[i].clone()).collect(),
            unit,
            dual,
            constants,
            truncated,
            if truncated {
                level.or(self.level)
            } else {
                None
            },
        )
    }
}

impl From<BasedRing> for BasedRingJson {
    fn from(r: BasedRing) -> Self {
        r.to_json()
    }
}

impl TryFrom<BasedRingJson> for BasedRing {
    type Error = Error;

    fn try_from(j: BasedRingJson) -> Result<Self> {
        BasedRing::from_json(&j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip_is_bit_exact() {
        let r = ver_p(5).unwrap();
        let s = r.to_json_string();
        let back = BasedRing::from_json_str(&s).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json_string(), s);
        let t = k_inf_trunc(3).unwrap();
        assert_eq!(BasedRing::from_json_str(&t.to_json_string()).unwrap(), t);
        assert!(BasedRing::from_json_str(r#"{"basis":["a"],"unit":0,"dual":[0],"constants":[[0,0,0,1]],"truncated":false,"level":null,"extra":1}"#).is_err());
    }

    #[test]
    fn validation_catches_perturbation() {
        let k3 = k_l(3).unwrap();
        assert!(k3.validate().ok);
        let mut cs = k3.constants();
        for c in cs.iter_mut() {
            if (c.0, c.1, c.2) == (1, 1, 1) {
                c.3 += 1;
            }
        }
        let bad =
            BasedRing::new(k3.basis().to_vec(), 0, k3.duals().to_vec(), cs, false, None).unwrap();
        let rep = bad.validate();
        assert!(!rep.ok);
        assert!(rep.violations.iter().any(|v| v.contains("associativity")));
    }

    #[test]
    fn orders_and_products() {
        let z4 = group_ring(&[4], None).unwrap();
        assert!(z4.validate().ok);
        let orders: Vec<_> = (0..4).map(|i| z4.order(i).unwrap()).collect();
        let mut sorted = orders.clone();
        sorted.sort();
        assert_eq!(sorted, vec![1, 2, 4, 4]);
        let v = group_ring(&[2], None).unwrap();
        let vv = v.product_ring(&v).unwrap();
        assert!(vv.validate().ok);
        assert!(iso_search(
            &vv,
            &group_ring(&[2, 2], None).unwrap(),
            &IsoOptions::default()
        )
        .unwrap()
        .is_some());
        assert!(iso_search(&z4, &vv, &IsoOptions::default())
            .unwrap()
            .is_none());
    }
}
