use super::QObject;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// One term `coeff · χ^chi · W_w`, with `W_w` the irreducible SL(2)-module
/// of dimension `w + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ThetaTerm {
    pub chi: u64,
    pub w: u32,
    pub coeff: i64,
}

/// Element of `R[χ]/(χ^n - 1)`, optionally reduced modulo
/// `1 + χ + .. + χ^{n-1}` (then no term has `chi = n - 1`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaElem {
    pub n: u64,
    pub terms: Vec<ThetaTerm>,
    pub reduced: bool,
}

impl ThetaElem {
    fn from_map(n: u64, map: BTreeMap<(u64, u32), i64>, reduced: bool) -> Self {
        let terms = map
            .into_iter()
            .filter(|&(_, c)| c != 0)
            .map(|((chi, w), coeff)| ThetaTerm { chi, w, coeff })
            .collect();
        ThetaElem { n, terms, reduced }
    }

    fn map(&self) -> BTreeMap<(u64, u32), i64> {
        self.terms.iter().map(|t| ((t.chi, t.w), t.coeff)).collect()
    }

    pub fn zero(n: u64, reduced: bool) -> Self {
        ThetaElem {
            n,
            terms: Vec::new(),
            reduced,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Replace `χ^{n-1}` by `-(1 + χ + .. + χ^{n-2})`.
    pub fn reduce(&self) -> Self {
        let mut map = self.map();
        let top: Vec<(u32, i64)> = map
            .iter()
            .filter(|((chi, _), _)| *chi == self.n - 1)
            .map(|(&(_, w), &c)| (w, c))
            .collect();
        for (w, c) in top {
            map.remove(&(self.n - 1, w));
            for e in 0..self.n - 1 {
                *map.entry((e, w)).or_insert(0) -= c;
            }
        }
        ThetaElem::from_map(self.n, map, true)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut map = self.map();
        for t in &other.terms {
            *map.entry((t.chi, t.w)).or_insert(0) += t.coeff;
        }
        Ok(ThetaElem::from_map(self.n, map, self.reduced))
    }

    /// Product in `R[χ]/(χ^n - 1)`, with `W_s W_t = W_{|s-t|} + .. + W_{s+t}`;
    /// reduced inputs give a reduced output.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut map: BTreeMap<(u64, u32), i64> = BTreeMap::new();
        for a in &self.terms {
            for b in &other.terms {
                let chi = (a.chi + b.chi) % self.n;
                let mut u = a.w.abs_diff(b.w);
                while u <= a.w + b.w {
                    *map.entry((chi, u)).or_insert(0) += a.coeff * b.coeff;
                    u += 2;
                }
            }
        }
        let out = ThetaElem::from_map(self.n, map, false);
        Ok(if self.reduced { out.reduce() } else { out })
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.reduced != other.reduced {
            return Err(Error::Mismatch("θ elements of different shapes".into()));
        }
        Ok(())
    }

    /// Coefficients as a vector indexed by `(chi, w)` for `w <= max_w`.
    pub fn coordinates(&self, max_w: u32) -> Vec<i64> {
        let mut v = vec![0; (self.n as usize) * (max_w as usize + 1)];
        for t in &self.terms {
            if t.w <= max_w {
                v[t.chi as usize * (max_w as usize + 1) + t.w as usize] = t.coeff;
            }
        }
        v
    }

    pub fn max_w(&self) -> u32 {
        self.terms.iter().map(|t| t.w).max().unwrap_or(0)
    }
}

impl fmt::Display for ThetaElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let sign = if t.coeff < 0 {
                "-"
            } else if i > 0 {
                "+"
            } else {
                ""
            };
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(sign)?;
            if i > 0 || t.coeff < 0 {
                f.write_str(" ")?;
            }
            if t.coeff.abs() != 1 {
                write!(f, "{}", t.coeff.abs())?;
            }
            write!(f, "χ^{}·W_{}", t.chi, t.w)?;
        }
        Ok(())
    }
}

/// `θ(V(m,d)) = Σ_r χ^{m-r} W_{s_r - 1}` where `s_r` counts the
/// `k in [0, d)` with `k ≡ r mod n`; returned unreduced and reduced.
pub fn theta(x: &QObject) -> Result<(ThetaElem, ThetaElem)> {
    let n = x.order.n().ok_or(Error::GenericOrder)?;
    let mut map = BTreeMap::new();
    for r in 0..n.min(x.d as u64) {
        let s = (x.d as u64 - r).div_ceil(n);
        let chi = (x.m - r as i64).rem_euclid(n as i64) as u64;
        *map.entry((chi, (s - 1) as u32)).or_insert(0) += 1;
    }
    let un = ThetaElem::from_map(n, map, false);
    let red = un.reduce();
    Ok((un, red))
}

#[cfg(test)]
mod tests {
    use super::super::{QObject, QOrder};
    use super::*;

    fn w(n: u64, terms: &[(u64, u32, i64)]) -> ThetaElem {
        ThetaElem::from_map(
            n,
            terms.iter().map(|&(c, w, k)| ((c, w), k)).collect(),
            true,
        )
    }

    #[test]
    fn theta_of_invertibles_and_strings() {
        let o = QOrder::root(7).unwrap();
        let (un, _) = theta(&QObject::new(o, 3, 1).unwrap()).unwrap();
        assert_eq!(
            un.terms,
            vec![ThetaTerm {
                chi: 3,
                w: 0,
                coeff: 1
            }]
        );
        // V(m, 2m+1): χ^m + .. + χ^{-m}
        let (un, _) = theta(&QObject::new(o, 2, 5).unwrap()).unwrap();
        let chis: Vec<u64> = un.terms.iter().map(|t| t.chi).collect();
        assert_eq!(chis, vec![0, 1, 2, 5, 6]);
        assert!(un.terms.iter().all(|t| t.w == 0 && t.coeff == 1));
    }

    #[test]
    fn weight_count_for_long_strings() {
        for n in [3u64, 5, 7] {
            let o = QOrder::root(n).unwrap();
            for r in 1..=3i64 {
                let (_, red) =
                    theta(&QObject::new(o, 0, (2 * r * n as i64 + 1) as usize).unwrap()).unwrap();
                assert_eq!(
                    red,
                    w(n, &[(0, 2 * r as u32, 1), (0, 2 * r as u32 - 1, -1)])
                );
                let (_, red) =
                    theta(&QObject::new(o, -1, (2 * r * n as i64 - 1) as usize).unwrap()).unwrap();
                assert_eq!(
                    red,
                    w(n, &[(0, 2 * r as u32 - 2, 1), (0, 2 * r as u32 - 1, -1)])
                );
            }
        }
    }

    #[test]
    fn negligibles_reduce_to_zero() {
        let o = QOrder::root(5).unwrap();
        for m in 0..5 {
            for d in [5usize, 10, 15] {
                assert!(theta(&QObject::new(o, m, d).unwrap()).unwrap().1.is_zero());
            }
        }
    }

    #[test]
    fn reduction_is_idempotent_and_multiplicative() {
        let o = QOrder::root(5).unwrap();
        let xs: Vec<QObject> = [(1, 2), (3, 4), (0, 6), (2, 7)]
            .iter()
            .map(|&(m, d)| QObject::new(o, m, d).unwrap())
            .collect();
        for a in &xs {
            let (ua, ra) = theta(a).unwrap();
            assert_eq!(ra.reduce(), ra);
            for b in &xs {
                let (ub, rb) = theta(b).unwrap();
                assert_eq!(ua.mul(&ub).unwrap().reduce(), ra.mul(&rb).unwrap());
            }
        }
    }
}
