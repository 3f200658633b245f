use super::BasedRing;
use crate::error::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// A ring homomorphism to the complex numbers, given by its values on the
/// basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RingCharacter {
    pub values: Vec<Complex64>,
}

const CHAR_TOL: f64 = 1e-9;
const CLUSTER_TOL: f64 = 1e-7;

impl RingCharacter {
    /// Largest violation of `φ(X_i)φ(X_j) = Σ N_ij^k φ(X_k)`, relative to
    /// `1 + |φ(X_i)φ(X_j)|`.
    pub fn defect(&self, r: &BasedRing) -> f64 {
        let mut worst = 0.0f64;
        for ((i, j), row) in r.products() {
            let lhs = self.values[i] * self.values[j];
            let rhs: Complex64 = row.iter().map(|&(k, v)| self.values[k] * v as f64).sum();
            worst = worst.max((lhs - rhs).norm() / (1.0 + lhs.norm()));
        }
        worst
    }
}

fn left_matrices(r: &BasedRing) -> Result<Vec<DMatrix<f64>>> {
    (0..r.rank())
        .map(|i| {
            let l = r.left_matrix(i)?;
            Ok(DMatrix::from_fn(r.rank(), r.rank(), |a, b| l[a][b] as f64))
        })
        .collect()
}

impl BasedRing {
    /// Frobenius–Perron dimensions: the positive common left eigenvector
    /// of the left multiplications, normalized at the unit.
    pub fn fp_dims(&self) -> Result<Vec<f64>> {
        if self.is_truncated() {
            return Err(Error::Truncated);
        }
        let n = self.rank();
        let ls = left_matrices(self)?;
        let mut a = DMatrix::<f64>::zeros(n, n);
        for l in &ls {
            a += l;
        }
        let at = a.transpose();
        let mut d = nalgebra::DVector::<f64>::from_element(n, 1.0);
        for _ in 0..100_000 {
            let mut next = &at * &d;
            let s = next[self.unit()];
            next /= s;
            let diff = (&next - &d).amax();
            d = next;
            if diff < 1e-14 {
                break;
            }
        }
        let dims: Vec<f64> = d.iter().copied().collect();
        for i in 0..n {
            for j in 0..n {
                let rhs: f64 = self
                    .product(i, j)
                    .expect("untruncated")
                    .iter()
                    .map(|&(k, v)| v as f64 * dims[k])
                    .sum();
                let lhs = dims[i] * dims[j];
                if (lhs - rhs).abs() > 1e-9 * (1.0 + lhs) {
                    return Err(Error::Mismatch(format!(
                        "power iteration did not converge at ({i},{j})"
                    )));
                }
            }
        }
        Ok(dims)
    }
}

fn inverse_iteration(
    m: &DMatrix<Complex64>,
    lambda: Complex64,
    unit: usize,
) -> Option<Vec<Complex64>> {
    let n = m.nrows();
    let shift = lambda + Complex64::new(1e-11, 1e-11) * (1.0 + lambda.norm());
    let a = m - DMatrix::<Complex64>::identity(n, n) * shift;
    let lu = a.lu();
    let mut x = nalgebra::DVector::<Complex64>::from_fn(n, |i, _| {
        Complex64::new(1.0 + i as f64 * 0.1, 0.3)
    });
    for _ in 0..4 {
        x = lu.solve(&x)?;
        let s = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if !(s.is_finite() && s > 0.0) {
            return None;
        }
        x /= Complex64::new(s, 0.0);
    }
    let u = x[unit];
    if u.norm() < 1e-12 {
        return None;
    }
    Some(x.iter().map(|z| z / u).collect())
}

/// Characters of a commutative untruncated ring, as common left
/// eigenvectors of the left multiplications (eigenvectors of a random real
/// combination with simple spectrum).
pub fn characters(r: &BasedRing) -> Result<Vec<RingCharacter>> {
    if r.is_truncated() {
        return Err(Error::Truncated);
    }
    if !r.is_commutative() {
        return Err(Error::NotCommutative);
    }
    let n = r.rank();
    let ls = left_matrices(r)?;
    'attempt: for attempt in 0..6u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(attempt);
        let mut m = DMatrix::<f64>::zeros(n, n);
        for l in &ls {
            m += l * rng.gen_range(0.5..1.5);
        }
        let mt = m.transpose();
        let eig: Vec<Complex64> = mt.clone().complex_eigenvalues().iter().copied().collect();
        let scale = 1.0 + eig.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for a in 0..n {
            for b in a + 1..n {
                if (eig[a] - eig[b]).norm() < CLUSTER_TOL * scale {
                    continue 'attempt;
                }
            }
        }
        let mc = mt.map(|x| Complex64::new(x, 0.0));
        let mut out = Vec::with_capacity(n);
        for &lambda in &eig {
            let Some(values) = inverse_iteration(&mc, lambda, r.unit()) else {
                continue 'attempt;
            };
            let ch = RingCharacter { values };
            if ch.defect(r) > CHAR_TOL {
                continue 'attempt;
            }
            out.push(ch);
        }
        out.sort_by(|a, b| {
            let key = |c: &RingCharacter| -> Vec<(i64, i64)> {
                c.values
                    .iter()
                    .map(|z| ((z.re * 1e8).round() as i64, (z.im * 1e8).round() as i64))
                    .collect()
            };
            key(a).cmp(&key(b))
        });
        return Ok(out);
    }
    Err(Error::ClusteringAmbiguous)
}

/// `f_φ = Σ_i φ(X_i) φ(X_{i*})`.
pub fn formal_codegree(r: &BasedRing, phi: &RingCharacter) -> Complex64 {
    (0..r.rank())
        .map(|i| phi.values[i] * phi.values[r.dual(i)])
        .sum()
}

#[cfg(test)]
mod tests {
    use super::super::{group_ring, k_l, ver_p};
    use super::*;

    #[test]
    fn fp_dims_of_small_rings() {
        let v5 = ver_p(5).unwrap();
        let d = v5.fp_dims().unwrap();
        assert!((d[1] - 1.618034).abs() < 1e-6);
        let k3 = k_l(3).unwrap();
        assert!((k3.fp_dims().unwrap()[1] - (1.0 + 2f64.sqrt())).abs() < 1e-6);
        assert!(group_ring(&[6], None)
            .unwrap()
            .fp_dims()
            .unwrap()
            .iter()
            .all(|x| (x - 1.0).abs() < 1e-12));
    }

    #[test]
    fn group_ring_characters_and_codegrees() {
        let r = group_ring(&[5], None).unwrap();
        let cs = characters(&r).unwrap();
        assert_eq!(cs.len(), 5);
        for c in &cs {
            assert!((formal_codegree(&r, c) - Complex64::new(5.0, 0.0)).norm() < 1e-9);
            assert!(c.values.iter().all(|z| (z.norm() - 1.0).abs() < 1e-9));
        }
    }

    #[test]
    fn k3_codegrees() {
        let l = 3usize;
        let r = k_l(l).unwrap();
        let cs = characters(&r).unwrap();
        assert_eq!(cs.len(), l + 1);
        for c in &cs {
            // φ(X_1) = q^2 + 1 + q^-2 = 1 + 2cos(2θ), q = e^{iθ}
            let x1 = c.values[1].re;
            let cos2 = (x1 - 1.0) / 2.0;
            let f = formal_codegree(&r, c).re;
            if (cos2 + 1.0).abs() < 1e-9 {
                assert!((f - (l + 1) as f64).abs() < 1e-9);
            } else {
                // (q - q^-1)^2 = 2cos(2θ) - 2
                let expect = -2.0 * (l + 1) as f64 / (2.0 * cos2 - 2.0);
                assert!((f - expect).abs() < 1e-9, "{f} vs {expect}");
            }
        }
    }
}
