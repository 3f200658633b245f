use super::Field;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// The rational function field Q(t).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RatFuncField;

/// `num / den` in Z[t], coprime, overall content 1, leading coefficient of
/// `den` positive. Zero is `[] / [1]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    pub num: Vec<BigInt>,
    pub den: Vec<BigInt>,
}

fn trim(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn content(v: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in v {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let c = content(v);
    if c.is_zero() || c.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &c).collect()
}

fn pmul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn padd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let mut out: Vec<BigInt> = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_default();
            let y = b.get(i).cloned().unwrap_or_default();
            x + y
        })
        .collect();
    trim(&mut out);
    out
}

/// Pseudo-remainder of a by b.
fn prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = b[db].clone();
    while r.len() > db && !r.is_empty() {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        for x in r.iter_mut() {
            *x = &*x * &lb;
        }
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] -= &lr * bj;
        }
        trim(&mut r);
    }
    r
}

fn pgcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut a = primitive(a);
    let mut b = primitive(b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let r = prem(&a, &b);
        a = b;
        b = primitive(&r);
    }
    if a.last().is_some_and(|c| c.is_negative()) {
        a = a.iter().map(|x| -x).collect();
    }
    a
}

/// Exact division in Z[t] when b divides a over Q and b is primitive.
fn pdiv_exact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() {
        return Vec::new();
    }
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    let mut q = vec![BigInt::zero(); a.len() - db];
    for i in (0..q.len()).rev() {
        let c = &r[i + db] / lb;
        for (j, bj) in b.iter().enumerate() {
            r[i + j] -= &c * bj;
        }
        q[i] = c;
    }
    trim(&mut q);
    q
}

impl RatFuncField {
    pub fn t(&self) -> RatFunc {
        RatFunc {
            num: vec![BigInt::zero(), BigInt::one()],
            den: vec![BigInt::one()],
        }
    }

    /// t^k for any integer k.
    pub fn t_pow(&self, k: i64) -> RatFunc {
        let mut mono = vec![BigInt::zero(); k.unsigned_abs() as usize + 1];
        mono[k.unsigned_abs() as usize] = BigInt::one();
        if k >= 0 {
            RatFunc {
                num: mono,
                den: vec![BigInt::one()],
            }
        } else {
            RatFunc {
                num: vec![BigInt::one()],
                den: mono,
            }
        }
    }

    pub fn normalize(&self, mut num: Vec<BigInt>, mut den: Vec<BigInt>) -> RatFunc {
        trim(&mut num);
        trim(&mut den);
        assert!(!den.is_empty(), "zero denominator");
        if num.is_empty() {
            return self.zero();
        }
        let g = pgcd(&num, &den);
        if g.len() > 1 {
            num = pdiv_exact(&num, &g);
            den = pdiv_exact(&den, &g);
        }
        let c = content(&num).gcd(&content(&den));
        if !c.is_one() {
            num = num.iter().map(|x| x / &c).collect();
            den = den.iter().map(|x| x / &c).collect();
        }
        if den.last().unwrap().is_negative() {
            num = num.iter().map(|x| -x).collect();
            den = den.iter().map(|x| -x).collect();
        }
        RatFunc { num, den }
    }
}

impl Field for RatFuncField {
    type Elem = RatFunc;

    fn zero(&self) -> RatFunc {
        RatFunc {
            num: Vec::new(),
            den: vec![BigInt::one()],
        }
    }

    fn one(&self) -> RatFunc {
        self.from_int(1)
    }

    fn from_int(&self, n: i64) -> RatFunc {
        if n == 0 {
            return self.zero();
        }
        RatFunc {
            num: vec![BigInt::from(n)],
            den: vec![BigInt::one()],
        }
    }

    fn add(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        if a.num.is_empty() {
            return b.clone();
        }
        if b.num.is_empty() {
            return a.clone();
        }
        if a.den == b.den {
            return self.normalize(padd(&a.num, &b.num), a.den.clone());
        }
        let num = padd(&pmul(&a.num, &b.den), &pmul(&b.num, &a.den));
        self.normalize(num, pmul(&a.den, &b.den))
    }

    fn sub(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        self.add(a, &self.neg(b))
    }

    fn neg(&self, a: &RatFunc) -> RatFunc {
        RatFunc {
            num: a.num.iter().map(|x| -x).collect(),
            den: a.den.clone(),
        }
    }

    fn mul(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        if a.num.is_empty() || b.num.is_empty() {
            return self.zero();
        }
        self.normalize(pmul(&a.num, &b.num), pmul(&a.den, &b.den))
    }

    fn inv(&self, a: &RatFunc) -> Option<RatFunc> {
        if a.num.is_empty() {
            return None;
        }
        Some(self.normalize(a.den.clone(), a.num.clone()))
    }

    fn is_zero(&self, a: &RatFunc) -> bool {
        a.num.is_empty()
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn order(&self) -> Option<u64> {
        None
    }

    fn random_elem(&self, rng: &mut ChaCha8Rng) -> RatFunc {
        let num = (0..2)
            .map(|_| BigInt::from(rng.gen_range(-3..=3)))
            .collect();
        self.normalize(num, vec![BigInt::one()])
    }

    fn fmt_elem(&self, a: &RatFunc) -> String {
        fn poly(v: &[BigInt]) -> String {
            let terms: Vec<String> = v
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| match i {
                    0 => c.to_string(),
                    1 => format!("{c}*t"),
                    _ => format!("{c}*t^{i}"),
                })
                .collect();
            if terms.is_empty() {
                "0".into()
            } else {
                terms.join(" + ")
            }
        }
        if a.den.len() == 1 && a.den[0].is_one() {
            poly(&a.num)
        } else {
            format!("({})/({})", poly(&a.num), poly(&a.den))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_forms_agree() {
        let k = RatFuncField;
        let t = k.t();
        // (t^2 - 1)/(t - 1) == t + 1
        let num = k.sub(&k.mul(&t, &t), &k.one());
        let den = k.sub(&t, &k.one());
        let q = k.div(&num, &den).unwrap();
        assert_eq!(q, k.add(&t, &k.one()));
        assert_eq!(k.mul(&k.t_pow(-3), &k.t_pow(3)), k.one());
    }

    #[test]
    fn scaled_fractions_are_equal() {
        let k = RatFuncField;
        let a = k.normalize(
            vec![BigInt::from(2)],
            vec![BigInt::from(4), BigInt::from(6)],
        );
        let b = k.normalize(
            vec![BigInt::from(-1)],
            vec![BigInt::from(-2), BigInt::from(-3)],
        );
        assert_eq!(a, b);
    }
}
