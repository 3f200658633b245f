use super::{QObject, QOrder};
use crate::decomp::{decompose_rep, DecompField, DecompOptions};
use crate::error::{Error, Result};
use crate::exact_linalg::{CycloField, Mat, RatFuncField};
use crate::modrep::Rep;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A field holding the chosen `q`.
pub trait QField: DecompField {
    fn q_pow(&self, k: i64) -> Self::Elem;
}

impl QField for CycloField {
    fn q_pow(&self, k: i64) -> Self::Elem {
        self.zeta_pow(k)
    }
}

impl QField for RatFuncField {
    fn q_pow(&self, k: i64) -> Self::Elem {
        self.t_pow(k)
    }
}

/// Decomposition of `X ⊗ Y` into the objects `V(m,d)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorResult {
    pub x: QObject,
    pub y: QObject,
    /// Non-negligible summands, sorted.
    pub summands: Vec<QObject>,
    /// Negligible summands, sorted.
    pub negligible: Vec<QObject>,
    pub negligible_dim: usize,
    /// `Δ(E)` acts nilpotently on the tensor space.
    pub nilpotent: bool,
}

/// Matrices of `g` (diagonal) and `E` on `X ⊗ Y` in the basis
/// `v_i ⊗ w_j`, with `Δ(g) = g⊗g`, `Δ(E) = E⊗g + 1⊗E`, together with the
/// weight exponent of each basis vector.
struct TensorSpace<F: QField> {
    field: F,
    dim: usize,
    weights: Vec<i64>,
    /// sparse columns of `Δ(E)`: `(row, coefficient)`
    e_cols: Vec<Vec<(usize, F::Elem)>>,
}

impl<F: QField> TensorSpace<F> {
    fn new(field: &F, x: &QObject, y: &QObject) -> Self {
        let (d1, d2) = (x.d, y.d);
        let idx = |i: usize, j: usize| i * d2 + j;
        let mut weights = Vec::with_capacity(d1 * d2);
        let mut e_cols = Vec::with_capacity(d1 * d2);
        for i in 0..d1 {
            for j in 0..d2 {
                weights.push(x.weight(i) + y.weight(j));
                let mut col = Vec::new();
                if i >= 1 {
                    col.push((idx(i - 1, j), field.q_pow(y.weight(j))));
                }
                if j >= 1 {
                    col.push((idx(i, j - 1), field.one()));
                }
                e_cols.push(col);
            }
        }
        TensorSpace {
            field: field.clone(),
            dim: d1 * d2,
            weights,
            e_cols,
        }
    }

    fn apply_e(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut out = vec![f.zero(); self.dim];
        for (c, x) in v.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (r, a) in &self.e_cols[c] {
                out[*r] = f.add(&out[*r], &f.mul(a, x));
            }
        }
        out
    }

    fn matrices(&self) -> (Mat<F>, Mat<F>) {
        let f = &self.field;
        let g = Mat::from_fn(f, self.dim, self.dim, |i, j| {
            if i == j {
                f.q_pow(self.weights[i])
            } else {
                f.zero()
            }
        });
        let mut e = Mat::zeros(f, self.dim, self.dim);
        for (c, col) in self.e_cols.iter().enumerate() {
            for (r, a) in col {
                e.set(*r, c, a.clone());
            }
        }
        (g, e)
    }
}

/// Strings of `Δ(E)` read off from the ranks of `E^k` between weight
/// spaces: the number of strings with top weight `t` and length `>= k+1`
/// is `rank(E^k: W_{t-k} -> W_t) - rank(E^{k+1}: W_{t-k} -> W_{t+1})`.
fn strings<F: QField>(space: &TensorSpace<F>, order: QOrder) -> Result<(Vec<(i64, usize)>, bool)> {
    let f = &space.field;
    let key = |w: i64| order.reduce(w);
    let mut spaces: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (i, &w) in space.weights.iter().enumerate() {
        spaces.entry(key(w)).or_default().push(i);
    }
    let mut rk: BTreeMap<(i64, usize), usize> = BTreeMap::new();
    let mut nilpotent = true;
    for (&s, basis) in &spaces {
        rk.insert((s, 0), basis.len());
        let mut vecs: Vec<Vec<F::Elem>> = basis
            .iter()
            .map(|&b| {
                let mut v = vec![f.zero(); space.dim];
                v[b] = f.one();
                v
            })
            .collect();
        let mut k = 0;
        loop {
            k += 1;
            vecs = vecs.iter().map(|v| space.apply_e(v)).collect();
            let target = key(s + k as i64);
            let coords = spaces.get(&target).map(|c| c.as_slice()).unwrap_or(&[]);
            let cols: Vec<Vec<F::Elem>> = vecs
                .iter()
                .map(|v| coords.iter().map(|&c| v[c].clone()).collect())
                .collect();
            let r = if coords.is_empty() {
                0
            } else {
                Mat::from_cols(f, coords.len(), &cols).rank()
            };
            rk.insert((s, k), r);
            if r == 0 {
                break;
            }
            if k > space.dim {
                nilpotent = false;
                break;
            }
        }
    }
    let get = |s: i64, k: usize| rk.get(&(key(s), k)).copied().unwrap_or(0) as i64;
    let tops: Vec<i64> = match order {
        QOrder::Root(n) => (0..n as i64).collect(),
        QOrder::Generic => {
            let lo = *space.weights.iter().min().unwrap_or(&0);
            let hi = *space.weights.iter().max().unwrap_or(&0);
            (lo..=hi).collect()
        }
    };
    // c(t, k): strings with top t and length >= k + 1
    let c = |t: i64, k: usize| get(t - k as i64, k) - get(t - k as i64, k + 1);
    let mut out = Vec::new();
    for &t in &tops {
        for len in 1..=space.dim {
            let mult = c(t, len - 1) - c(t, len);
            if mult < 0 {
                return Err(Error::Mismatch(format!(
                    "negative string count at top {t}, length {len}"
                )));
            }
            for _ in 0..mult {
                out.push((t, len));
            }
        }
    }
    Ok((out, nilpotent))
}

fn assemble(
    x: &QObject,
    y: &QObject,
    found: Vec<(i64, usize)>,
    nilpotent: bool,
) -> Result<TensorResult> {
    let total: usize = found.iter().map(|&(_, d)| d).sum();
    if total != x.d * y.d {
        return Err(Error::Mismatch(format!(
            "summands of {x} ⊗ {y} have total dimension {total}, expected {}",
            x.d * y.d
        )));
    }
    let mut summands = Vec::new();
    let mut negligible = Vec::new();
    for (m, d) in found {
        let o = QObject::new(x.order, m, d)?;
        if o.is_negligible() {
            negligible.push(o);
        } else {
            summands.push(o);
        }
    }
    summands.sort();
    negligible.sort();
    Ok(TensorResult {
        x: *x,
        y: *y,
        negligible_dim: negligible.iter().map(|o| o.d).sum(),
        summands,
        negligible,
        nilpotent,
    })
}

fn check_pair(x: &QObject, y: &QObject, max_dim: usize) -> Result<()> {
    if x.order != y.order {
        return Err(Error::Mismatch("objects for different q".into()));
    }
    if x.d * y.d > max_dim {
        return Err(Error::DimCapExceeded {
            dim: x.d * y.d,
            cap: max_dim,
        });
    }
    Ok(())
}

/// Decompose `X ⊗ Y` over `Q(ζ_n)` (or `Q(t)` for generic q) from the
/// explicit matrices of `g` and `Δ(E)`.
pub fn oracle_tensor(x: &QObject, y: &QObject, max_dim: usize) -> Result<TensorResult> {
    check_pair(x, y, max_dim)?;
    let (found, nilpotent) = match x.order {
        QOrder::Root(n) => strings(&TensorSpace::new(&CycloField::new(n), x, y), x.order)?,
        QOrder::Generic => strings(&TensorSpace::new(&RatFuncField, x, y), x.order)?,
    };
    assemble(x, y, found, nilpotent)
}

fn decomp_with<F: QField>(
    field: &F,
    x: &QObject,
    y: &QObject,
    opts: &DecompOptions,
) -> Result<Vec<(i64, usize)>> {
    let space = TensorSpace::new(field, x, y);
    let (g, e) = space.matrices();
    let rep = Rep::new(field, space.dim, vec![g, e])?;
    let dec = decompose_rep(&rep, opts)?;
    if dec.field != *field {
        return Err(Error::Mismatch("decomposition left the base field".into()));
    }
    let lo = *space.weights.iter().min().unwrap_or(&0);
    let hi = *space.weights.iter().max().unwrap_or(&0);
    let mut out = Vec::new();
    for piece in &dec.pieces {
        let (pg, pe) = (&piece.rep.gens()[0], &piece.rep.gens()[1]);
        let socle = pe.kernel();
        if socle.cols() != 1 {
            return Err(Error::Mismatch(format!(
                "summand with {}-dimensional E-kernel",
                socle.cols()
            )));
        }
        let v = socle.col(0);
        let gv = pg.mul_vec(&v);
        let top = (lo..=hi)
            .map(|t| x.order.reduce(t))
            .find(|&t| {
                let l = field.q_pow(t);
                gv.iter().zip(&v).all(|(a, b)| *a == field.mul(&l, b))
            })
            .ok_or_else(|| Error::Mismatch("top vector is not a weight vector".into()))?;
        out.push((top, piece.rep.dim()));
    }
    Ok(out)
}

/// The same decomposition through the general Krull–Schmidt engine over
/// the two-operator algebra `⟨g, E⟩`; used to cross-check
/// [`oracle_tensor`].
pub fn oracle_tensor_decomp(
    x: &QObject,
    y: &QObject,
    max_dim: usize,
    opts: &DecompOptions,
) -> Result<TensorResult> {
    check_pair(x, y, max_dim)?;
    let opts = DecompOptions {
        allow_extension: false,
        ..opts.clone()
    };
    let found = match x.order {
        QOrder::Root(n) => decomp_with(&CycloField::new(n), x, y, &opts)?,
        QOrder::Generic => decomp_with(&RatFuncField, x, y, &opts)?,
    };
    assemble(x, y, found, true)
}

#[cfg(test)]
mod tests {
    use super::super::{gl2_fusion, qdim};
    use super::*;
    use crate::exact_linalg::Field;

    #[test]
    fn invertible_shifts() {
        let o = QOrder::root(5).unwrap();
        for m in 0..5 {
            for (r, d) in [(0, 3), (2, 4), (4, 7)] {
                let x = QObject::new(o, m, 1).unwrap();
                let y = QObject::new(o, r, d).unwrap();
                let t = oracle_tensor(&x, &y, 144).unwrap();
                assert_eq!(t.summands, vec![QObject::new(o, m + r, d).unwrap()]);
                assert_eq!(oracle_tensor(&y, &x, 144).unwrap().summands, t.summands);
            }
        }
    }

    #[test]
    fn order_two_object() {
        for n in [3u64, 5, 7] {
            let o = QOrder::root(n).unwrap();
            let x = QObject::new(o, n as i64 - 1, n as usize - 1).unwrap();
            let t = oracle_tensor(&x, &x, 144).unwrap();
            assert_eq!(t.summands, vec![QObject::unit(o)]);
            assert!(t.nilpotent);
        }
    }

    #[test]
    fn generic_matches_gl2() {
        let a = QObject::from_weights(1, 0).unwrap();
        let t = oracle_tensor(&a, &a, 144).unwrap();
        let mut expect: Vec<QObject> = gl2_fusion((1, 0), (1, 0))
            .unwrap()
            .into_iter()
            .map(|(p, q)| QObject::from_weights(p, q).unwrap())
            .collect();
        expect.sort();
        assert_eq!(t.summands, expect);
    }

    #[test]
    fn decomposition_engine_agrees() {
        let opts = DecompOptions::default();
        let o = QOrder::root(3).unwrap();
        for (a, b) in [((0, 2), (0, 2)), ((1, 2), (2, 4)), ((0, 4), (2, 2))] {
            let x = QObject::new(o, a.0, a.1).unwrap();
            let y = QObject::new(o, b.0, b.1).unwrap();
            let r1 = oracle_tensor(&x, &y, 144).unwrap();
            let r2 = oracle_tensor_decomp(&x, &y, 144, &opts).unwrap();
            assert_eq!(r1, r2);
        }
        let x = QObject::from_weights(1, 0).unwrap();
        let y = QObject::from_weights(2, 0).unwrap();
        assert_eq!(
            oracle_tensor(&x, &y, 144).unwrap(),
            oracle_tensor_decomp(&x, &y, 144, &opts).unwrap()
        );
    }

    #[test]
    fn qdim_is_multiplicative() {
        let f = CycloField::new(5);
        let q = f.zeta();
        let o = QOrder::root(5).unwrap();
        let x = QObject::new(o, 1, 3).unwrap();
        let y = QObject::new(o, 4, 4).unwrap();
        let t = oracle_tensor(&x, &y, 144).unwrap();
        let lhs = f.mul(&qdim(&f, &x, &q).unwrap(), &qdim(&f, &y, &q).unwrap());
        let mut rhs = f.zero();
        for s in t.summands.iter().chain(&t.negligible) {
            rhs = f.add(&rhs, &qdim(&f, s, &q).unwrap());
        }
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn dimension_cap() {
        let o = QOrder::root(3).unwrap();
        let x = QObject::new(o, 0, 13).unwrap();
        assert!(matches!(
            oracle_tensor(&x, &x, 144),
            Err(Error::DimCapExceeded { .. })
        ));
    }
}
