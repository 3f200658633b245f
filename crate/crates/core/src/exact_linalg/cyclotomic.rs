use super::{Field, Rationals};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::sync::Arc;

/// The n-th cyclotomic polynomial, integer coefficients low-to-high.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    assert!(n >= 1);
    // x^n - 1 divided by Phi_d for every proper divisor d
    let mut num: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            let phi_d = cyclotomic_polynomial(d);
            num = exact_div_monic(&num, &phi_d);
        }
    }
    num
}

fn exact_div_monic(a: &[BigInt], m: &[BigInt]) -> Vec<BigInt> {
    let mut rem = a.to_vec();
    let dm = m.len() - 1;
    let mut quot = vec![BigInt::zero(); a.len() - dm];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dm].clone();
        if c.is_zero() {
            continue;
        }
        for (j, mj) in m.iter().enumerate() {
            rem[i + j] -= &c * mj;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(|x| x.is_zero()));
    quot
}

/// The cyclotomic field Q(zeta_n) = Q[x]/(Phi_n).
#[derive(Clone)]
pub struct CycloField(Arc<CycloInner>);

struct CycloInner {
    n: u64,
    phi: Vec<BigInt>,
}

/// Element of Q(zeta_n): `num / den` with `num` a coefficient vector over the
/// power basis, `den > 0`, and no common factor.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CycloElem {
    pub num: Vec<BigInt>,
    pub den: BigInt,
}

impl PartialEq for CycloField {
    fn eq(&self, other: &Self) -> bool {
        self.0.n == other.0.n
    }
}

impl Eq for CycloField {}

impl fmt::Debug for CycloField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.0.n)
    }
}

impl CycloField {
    pub fn new(n: u64) -> Self {
        assert!(n >= 1, "cyclotomic order must be positive");
        CycloField(Arc::new(CycloInner {
            n,
            phi: cyclotomic_polynomial(n),
        }))
    }

    pub fn order(&self) -> u64 {
        self.0.n
    }

    pub fn degree(&self) -> usize {
        self.0.phi.len() - 1
    }

    pub fn modulus(&self) -> &[BigInt] {
        &self.0.phi
    }

    /// A primitive n-th root of unity (the class of x).
    pub fn zeta(&self) -> CycloElem {
        let mut num = vec![BigInt::zero(); self.degree()];
        if self.degree() == 1 {
            // Q(zeta_1) = Q(zeta_2) = Q; zeta is 1 or -1
            num[0] = -self.0.phi[0].clone();
        } else {
            num[1] = BigInt::one();
        }
        self.normalize(num, BigInt::one())
    }

    /// zeta^k for any integer k.
    pub fn zeta_pow(&self, k: i64) -> CycloElem {
        let e = k.rem_euclid(self.0.n as i64) as u64;
        self.pow(&self.zeta(), e)
    }

    pub fn from_rational(&self, r: &BigRational) -> CycloElem {
        let mut num = vec![BigInt::zero(); self.degree()];
        num[0] = r.numer().clone();
        self.normalize(num, r.denom().clone())
    }

    /// Rational value when the element lies in Q.
    pub fn as_rational(&self, a: &CycloElem) -> Option<BigRational> {
        if a.num.iter().skip(1).all(|c| c.is_zero()) {
            Some(BigRational::new(a.num[0].clone(), a.den.clone()))
        } else {
            None
        }
    }

    fn normalize(&self, mut num: Vec<BigInt>, mut den: BigInt) -> CycloElem {
        if den.is_negative() {
            den = -den;
            for c in num.iter_mut() {
                *c = -c.clone();
            }
        }
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if num.iter().all(|c| c.is_zero()) {
            return CycloElem {
                num,
                den: BigInt::one(),
            };
        }
        if !g.is_one() && !g.is_zero() {
            for c in num.iter_mut() {
                *c = &*c / &g;
            }
            den /= &g;
        }
        CycloElem { num, den }
    }

    fn reduce_poly(&self, mut v: Vec<BigInt>) -> Vec<BigInt> {
        let d = self.degree();
        let phi = &self.0.phi;
        while v.len() > d {
            let c = v.pop().unwrap();
            if c.is_zero() {
                continue;
            }
            let shift = v.len() - d;
            for j in 0..d {
                v[shift + j] -= &c * &phi[j];
            }
        }
        v.resize(d, BigInt::zero());
        v
    }
}

impl Field for CycloField {
    type Elem = CycloElem;

    fn zero(&self) -> CycloElem {
        CycloElem {
            num: vec![BigInt::zero(); self.degree()],
            den: BigInt::one(),
        }
    }

    fn one(&self) -> CycloElem {
        self.from_int(1)
    }

    fn from_int(&self, n: i64) -> CycloElem {
        let mut num = vec![BigInt::zero(); self.degree()];
        num[0] = BigInt::from(n);
        CycloElem {
            num,
            den: BigInt::one(),
        }
    }

    fn add(&self, a: &CycloElem, b: &CycloElem) -> CycloElem {
        if a.den == b.den {
            let num = a.num.iter().zip(&b.num).map(|(x, y)| x + y).collect();
            return self.normalize(num, a.den.clone());
        }
        let num = a
            .num
            .iter()
            .zip(&b.num)
            .map(|(x, y)| x * &b.den + y * &a.den)
            .collect();
        self.normalize(num, &a.den * &b.den)
    }

    fn sub(&self, a: &CycloElem, b: &CycloElem) -> CycloElem {
        self.add(a, &self.neg(b))
    }

    fn neg(&self, a: &CycloElem) -> CycloElem {
        CycloElem {
            num: a.num.iter().map(|x| -x).collect(),
            den: a.den.clone(),
        }
    }

    fn mul(&self, a: &CycloElem, b: &CycloElem) -> CycloElem {
        let d = self.degree();
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, x) in a.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.num.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let num = self.reduce_poly(prod);
        self.normalize(num, &a.den * &b.den)
    }

    fn inv(&self, a: &CycloElem) -> Option<CycloElem> {
        if self.is_zero(a) {
            return None;
        }
        // Solve M x = e_0 where M is multiplication by a on the power basis.
        let d = self.degree();
        let q = Rationals;
        let a_rat: Vec<BigRational> = a
            .num
            .iter()
            .map(|c| BigRational::new(c.clone(), a.den.clone()))
            .collect();
        let mut cols: Vec<Vec<BigRational>> = Vec::with_capacity(d);
        let mut cur = a_rat;
        for _ in 0..d {
            cols.push(cur.clone());
            // multiply by x
            let mut shifted = vec![BigRational::zero(); d + 1];
            for (i, c) in cur.iter().enumerate() {
                shifted[i + 1] = c.clone();
            }
            let top = shifted.pop().unwrap();
            for j in 0..d {
                shifted[j] -= &top * BigRational::from_integer(self.0.phi[j].clone());
            }
            cur = shifted;
        }
        // augmented matrix rows
        let mut m: Vec<Vec<BigRational>> = (0..d)
            .map(|r| {
                let mut row: Vec<BigRational> = (0..d).map(|c| cols[c][r].clone()).collect();
                row.push(if r == 0 { q.one() } else { q.zero() });
                row
            })
            .collect();
        for col in 0..d {
            let piv = (col..d).find(|&r| !m[r][col].is_zero())?;
            m.swap(col, piv);
            let inv = m[col][col].recip();
            for x in m[col].iter_mut() {
                *x = &*x * &inv;
            }
            for r in 0..d {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    let pivot_row = m[col].clone();
                    for (x, y) in m[r].iter_mut().zip(&pivot_row) {
                        *x = &*x - &f * y;
                    }
                }
            }
        }
        let sol: Vec<BigRational> = m.iter().map(|row| row[d].clone()).collect();
        let mut den = BigInt::one();
        for s in &sol {
            den = den.lcm(s.denom());
        }
        let num = sol.iter().map(|s| s.numer() * (&den / s.denom())).collect();
        Some(self.normalize(num, den))
    }

    fn is_zero(&self, a: &CycloElem) -> bool {
        a.num.iter().all(|c| c.is_zero())
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn order(&self) -> Option<u64> {
        None
    }

    fn random_elem(&self, rng: &mut ChaCha8Rng) -> CycloElem {
        let num = (0..self.degree())
            .map(|_| BigInt::from(rng.gen_range(-3..=3)))
            .collect();
        self.normalize(num, BigInt::one())
    }

    fn fmt_elem(&self, a: &CycloElem) -> String {
        let mut terms = Vec::new();
        for (i, c) in a.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms.push(match i {
                0 => c.to_string(),
                1 => format!("{c}*z"),
                _ => format!("{c}*z^{i}"),
            });
        }
        let body = if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        };
        if a.den.is_one() {
            body
        } else {
            format!("({body})/{}", a.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(3), ints(&[1, 1, 1]));
        assert_eq!(cyclotomic_polynomial(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(12), ints(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn zeta_relation_q3() {
        let k = CycloField::new(3);
        let z = k.zeta();
        let zz = k.mul(&z, &z);
        let expected = k.sub(&k.neg(&k.one()), &z);
        assert_eq!(zz, expected);
        assert_eq!(k.pow(&z, 3), k.one());
    }

    #[test]
    fn inverse_roundtrip() {
        let k = CycloField::new(5);
        let a = k.add(&k.zeta(), &k.from_int(2));
        let ai = k.inv(&a).unwrap();
        assert_eq!(k.mul(&a, &ai), k.one());
        assert_eq!(k.mul(&k.zeta_pow(-1), &k.zeta()), k.one());
    }
}
