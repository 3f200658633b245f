//! Representations of the Hopf algebra generated by a grouplike `g` and a
//! skew-primitive `E` with `gEg^{-1} = qE`, `Δ(E) = E⊗g + 1⊗E`: the
//! generic-q fusion rule, the root-of-unity objects `V(m,d)` with their
//! q-dimensions, ν-grading and θ images, an exact tensor-product oracle and
//! the extraction of the semisimplified ring.

mod oracle;
mod ring;
mod theta;

pub use oracle::{oracle_tensor, oracle_tensor_decomp, QField, TensorResult};
pub use ring::{
    extract_ring, gl2_agreement, gl2_ring, qcase_target, Gl2Agreement, QcaseGenerators,
    QcaseReport, ThetaRow,
};
pub use theta::{theta, ThetaElem, ThetaTerm};

use crate::error::{Error, Result};
use crate::exact_linalg::Field;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Order of `q`: an odd root of unity of order `n >= 3`, or not a root of
/// unity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum QOrder {
    Root(u64),
    Generic,
}

impl QOrder {
    pub fn root(n: u64) -> Result<Self> {
        if n < 3 || n.is_multiple_of(2) {
            return Err(Error::UnsupportedOrder(n));
        }
        Ok(QOrder::Root(n))
    }

    pub fn n(&self) -> Option<u64> {
        match self {
            QOrder::Root(n) => Some(*n),
            QOrder::Generic => None,
        }
    }

    /// Canonical representative of a weight exponent.
    pub fn reduce(&self, w: i64) -> i64 {
        match self {
            QOrder::Root(n) => w.rem_euclid(*n as i64),
            QOrder::Generic => w,
        }
    }
}

/// The indecomposable `V(m,d)`: a Jordan block of size `d` for `E` whose
/// top vector has `g`-eigenvalue `q^m` (`m` taken mod n at a root of
/// unity). Generic `V(m,d)` is `V_{m, m-d+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QObject {
    pub order: QOrder,
    pub m: i64,
    pub d: usize,
}

impl QObject {
    pub fn new(order: QOrder, m: i64, d: usize) -> Result<Self> {
        if let QOrder::Root(n) = order {
            QOrder::root(n)?;
        }
        if d == 0 {
            return Err(Error::InvalidModule("V(m,d) needs d >= 1".into()));
        }
        Ok(QObject {
            order,
            m: order.reduce(m),
            d,
        })
    }

    /// `V_{m1,m2}` for generic q.
    pub fn from_weights(m1: i64, m2: i64) -> Result<Self> {
        if m1 < m2 {
            return Err(Error::InvalidModule(format!(
                "weights ({m1},{m2}) are not dominant"
            )));
        }
        QObject::new(QOrder::Generic, m1, (m1 - m2 + 1) as usize)
    }

    /// `(m1, m2) = (m, m - d + 1)`.
    pub fn weights(&self) -> (i64, i64) {
        (self.m, self.m - self.d as i64 + 1)
    }

    pub fn unit(order: QOrder) -> Self {
        QObject { order, m: 0, d: 1 }
    }

    /// At a root of unity of order n, `V(m,d)` is negligible iff n | d.
    pub fn is_negligible(&self) -> bool {
        self.order
            .n()
            .is_some_and(|n| (self.d as u64).is_multiple_of(n))
    }

    /// `V(m,d)^* = V(d-1-m, d)`.
    pub fn dual(&self) -> Self {
        QObject {
            order: self.order,
            m: self.order.reduce(self.d as i64 - 1 - self.m),
            d: self.d,
        }
    }

    /// `g`-weight exponent of the k-th basis vector (`E v_k = v_{k-1}`).
    pub fn weight(&self, k: usize) -> i64 {
        self.m - k as i64
    }

    pub fn label(&self) -> String {
        format!("V({},{})", self.m, self.d)
    }
}

impl fmt::Display for QObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Clebsch–Gordan rule of GL(2):
/// `(m1,m2) ⊗ (n1,n2) = ⊕_{j=0}^{min(m1-m2, n1-n2)} (m1+n1-j, m2+n2+j)`.
pub fn gl2_fusion(a: (i64, i64), b: (i64, i64)) -> Result<Vec<(i64, i64)>> {
    if a.0 < a.1 || b.0 < b.1 {
        return Err(Error::InvalidModule("weights must be dominant".into()));
    }
    let k = (a.0 - a.1).min(b.0 - b.1);
    Ok((0..=k).map(|j| (a.0 + b.0 - j, a.1 + b.1 + j)).collect())
}

/// Pivotal dimension `q^{m-d+1} + .. + q^m` (the trace of `g`).
pub fn qdim<F: Field>(field: &F, x: &QObject, q: &F::Elem) -> Result<F::Elem> {
    let qi = field
        .inv(q)
        .ok_or_else(|| Error::InvalidField("q must be nonzero".into()))?;
    let pow = |e: i64| {
        if e >= 0 {
            field.pow(q, e as u64)
        } else {
            field.pow(&qi, e.unsigned_abs())
        }
    };
    let mut acc = field.zero();
    for k in 0..x.d {
        acc = field.add(&acc, &pow(x.weight(k)));
    }
    Ok(acc)
}

/// `ν(V(m,d)) = 2m - d + 1 mod 2n`.
pub fn nu(x: &QObject) -> Result<u64> {
    let n = x.order.n().ok_or(Error::GenericOrder)? as i64;
    Ok((2 * x.m - x.d as i64 + 1).rem_euclid(2 * n) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::{CycloField, RatFuncField};

    #[test]
    fn gl2_examples() {
        assert_eq!(gl2_fusion((1, 0), (1, 0)).unwrap(), vec![(2, 0), (1, 1)]);
        assert_eq!(gl2_fusion((2, 2), (3, 1)).unwrap(), vec![(5, 3)]);
        assert_eq!(gl2_fusion((3, 0), (1, 0)).unwrap(), vec![(4, 0), (3, 1)]);
        assert!(gl2_fusion((0, 1), (1, 0)).is_err());
    }

    #[test]
    fn qdim_examples() {
        let f = CycloField::new(5);
        let q = f.zeta();
        let o = QOrder::root(5).unwrap();
        assert_eq!(qdim(&f, &QObject::unit(o), &q).unwrap(), f.one());
        assert!(f.is_zero(&qdim(&f, &QObject::new(o, 3, 5).unwrap(), &q).unwrap()));
        let v12 = QObject::new(o, 1, 2).unwrap();
        assert_eq!(qdim(&f, &v12, &q).unwrap(), f.add(&f.one(), &q));
        let t = RatFuncField;
        let d = qdim(&t, &QObject::from_weights(2, 0).unwrap(), &t.t()).unwrap();
        assert_eq!(d, t.add(&t.add(&t.one(), &t.t()), &t.t_pow(2)));
    }

    #[test]
    fn nu_examples() {
        let o = QOrder::root(7).unwrap();
        assert_eq!(nu(&QObject::new(o, 3, 1).unwrap()).unwrap(), 6);
        assert_eq!(nu(&QObject::unit(o)).unwrap(), 0);
        assert_eq!(nu(&QObject::new(o, 6, 6).unwrap()).unwrap(), 7);
        assert_eq!(
            nu(&QObject::from_weights(1, 0).unwrap()),
            Err(Error::GenericOrder)
        );
    }

    #[test]
    fn objects_normalize() {
        assert_eq!(QOrder::root(4), Err(Error::UnsupportedOrder(4)));
        let o = QOrder::root(5).unwrap();
        let x = QObject::new(o, -1, 9).unwrap();
        assert_eq!(x.m, 4);
        assert_eq!(x.dual().dual(), x);
        assert_eq!(QObject::new(o, 2, 1).unwrap().dual().m, 3);
        assert!(QObject::new(o, 0, 10).unwrap().is_negligible());
    }
}
