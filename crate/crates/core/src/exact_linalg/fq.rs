use super::Field;
use crate::error::{Error, Result};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::sync::Arc;

const MAX_FIELD_SIZE: u64 = 1 << 24;
const ADD_TABLE_LIMIT: u32 = 1024;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The finite field GF(p^r).
///
/// Elements are `u32` codes: the polynomial `c_0 + c_1 t + ... + c_{r-1} t^{r-1}`
/// over GF(p) is stored as `sum c_i p^i`. The defining polynomial is the first
/// monic irreducible of degree `r` in increasing code order. Multiplication
/// goes through discrete log tables when `r > 1`.
#[derive(Clone)]
pub struct Fq(Arc<FqInner>);

struct FqInner {
    p: u32,
    r: u32,
    q: u32,
    /// Monic modulus, low-to-high, length r + 1.
    modulus: Vec<u32>,
    /// log[x] for x != 0.
    log: Vec<u32>,
    /// exp[i] = g^i for i in 0..2(q-1).
    exp: Vec<u32>,
    add_table: Option<Vec<u32>>,
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.r == other.0.r
    }
}

impl Eq for Fq {}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

// Small polynomial helpers over GF(p), low-to-high coefficients.
fn ptrim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn pmulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let pp = p as u64;
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % pp;
        }
    }
    let mut v: Vec<u32> = prod.into_iter().map(|x| x as u32).collect();
    prem(&mut v, m, p);
    v
}

/// In-place remainder modulo a monic polynomial.
fn prem(a: &mut Vec<u32>, m: &[u32], p: u32) {
    ptrim(a);
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = *a.last().unwrap() as u64;
        let shift = a.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            let idx = shift + i;
            let sub = (lead * c as u64) % p as u64;
            a[idx] = ((a[idx] as u64 + p as u64 - sub) % p as u64) as u32;
        }
        ptrim(a);
    }
}

fn ppowmod(base: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
    let mut acc = vec![1u32];
    let mut b = base.to_vec();
    prem(&mut b, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = pmulmod(&acc, &b, m, p);
        }
        b = pmulmod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

fn pgcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    ptrim(&mut a);
    ptrim(&mut b);
    while !b.is_empty() {
        // make b monic then reduce a mod b
        let inv = mod_inv(*b.last().unwrap(), p);
        for c in b.iter_mut() {
            *c = ((*c as u64 * inv as u64) % p as u64) as u32;
        }
        prem(&mut a, &b, p);
        std::mem::swap(&mut a, &mut b);
    }
    a
}

fn mod_inv(a: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// Rabin irreducibility test for a monic polynomial over GF(p).
fn is_irreducible_gfp(f: &[u32], p: u32) -> bool {
    let n = (f.len() - 1) as u64;
    if n == 1 {
        return true;
    }
    let x = vec![0u32, 1];
    let pp = p as u64;
    // x^(p^n) == x mod f
    let mut xp = x.clone();
    for _ in 0..n {
        xp = ppowmod(&xp, pp, f, p);
    }
    let mut xr = x.clone();
    prem(&mut xr, f, p);
    if xp != xr {
        return false;
    }
    for d in prime_factors(n) {
        let k = n / d;
        let mut y = x.clone();
        for _ in 0..k {
            y = ppowmod(&y, pp, f, p);
        }
        // y - x
        let mut diff = y.clone();
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = (diff[1] + p - 1) % p;
        ptrim(&mut diff);
        let g = pgcd(&diff, f, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

fn decode(code: u32, p: u32, r: u32) -> Vec<u32> {
    let mut v = Vec::with_capacity(r as usize);
    let mut c = code;
    for _ in 0..r {
        v.push(c % p);
        c /= p;
    }
    v
}

fn encode(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0u32, |acc, &c| acc * p + c)
}

impl Fq {
    /// GF(p^r). Fails when `p` is not prime or the field would be too large
    /// for the log tables.
    pub fn new(p: u64, r: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NonPrimeModulus(p));
        }
        if r == 0 {
            return Err(Error::InvalidField("extension degree must be >= 1".into()));
        }
        let q = (p as u128).pow(r);
        if q > MAX_FIELD_SIZE as u128 {
            return Err(Error::InvalidField(format!("GF({p}^{r}) is too large")));
        }
        let (p, q) = (p as u32, q as u32);
        if r == 1 {
            return Ok(Fq(Arc::new(FqInner {
                p,
                r,
                q,
                modulus: vec![0, 1],
                log: Vec::new(),
                exp: Vec::new(),
                add_table: None,
            })));
        }
        let pr = p.pow(r);
        let mut modulus = None;
        for low in 0..pr {
            let mut f = decode(low, p, r);
            f.push(1);
            if f[0] == 0 {
                continue;
            }
            if is_irreducible_gfp(&f, p) {
                modulus = Some(f);
                break;
            }
        }
        let modulus = modulus.expect("an irreducible polynomial of every degree exists");
        // primitive element search
        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let mut gen = None;
        for code in 2..q {
            let g = decode(code, p, r);
            let ok = factors
                .iter()
                .all(|&l| ppowmod(&g, order / l, &modulus, p) != vec![1u32]);
            if ok {
                gen = Some(g);
                break;
            }
        }
        let g = gen.expect("multiplicative group is cyclic");
        let n = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * n];
        let mut log = vec![0u32; q as usize];
        let mut cur = vec![1u32];
        for i in 0..n {
            let mut padded = cur.clone();
            padded.resize(r as usize, 0);
            let c = encode(&padded, p);
            exp[i] = c;
            exp[i + n] = c;
            log[c as usize] = i as u32;
            cur = pmulmod(&cur, &g, &modulus, p);
        }
        let mut inner = FqInner {
            p,
            r,
            q,
            modulus,
            log,
            exp,
            add_table: None,
        };
        if q <= ADD_TABLE_LIMIT {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = digit_add(a, b, p, r);
                }
            }
            inner.add_table = Some(t);
        }
        Ok(Fq(Arc::new(inner)))
    }

    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1)
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.r
    }

    pub fn size(&self) -> u32 {
        self.0.q
    }

    /// Monic defining polynomial over GF(p), low-to-high.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn name(&self) -> String {
        if self.0.r == 1 {
            format!("F{}", self.0.p)
        } else {
            format!("F{}", self.0.q)
        }
    }

    /// Coefficients over GF(p) of an element, low-to-high, length r.
    pub fn coeffs(&self, a: u32) -> Vec<u32> {
        decode(a, self.0.p, self.0.r)
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Result<u32> {
        if c.len() > self.0.r as usize || c.iter().any(|&x| x >= self.0.p) {
            return Err(Error::Parse(format!(
                "coefficient list {c:?} is not an element of {}",
                self.name()
            )));
        }
        let mut v = c.to_vec();
        v.resize(self.0.r as usize, 0);
        Ok(encode(&v, self.0.p))
    }

    /// The embedding of this field into `big`, given as the image of the
    /// generator `t` (the smallest root of our modulus in `big`).
    pub fn embedding_into(&self, big: &Fq) -> Result<Embedding> {
        if big.p() != self.p() || !big.degree().is_multiple_of(self.degree()) {
            return Err(Error::FieldMismatch);
        }
        if self.degree() == 1 {
            return Ok(Embedding {
                small: self.clone(),
                big: big.clone(),
                t_image: 0,
            });
        }
        let m = &self.0.modulus;
        for x in 0..big.size() {
            let mut acc = 0u32;
            for &c in m.iter().rev() {
                acc = big.add(&big.mul(&acc, &x), &c);
            }
            if acc == 0 {
                return Ok(Embedding {
                    small: self.clone(),
                    big: big.clone(),
                    t_image: x,
                });
            }
        }
        Err(Error::FieldMismatch)
    }

    #[inline]
    fn add_slow(&self, a: u32, b: u32) -> u32 {
        digit_add(a, b, self.0.p, self.0.r)
    }
}

fn digit_add(mut a: u32, mut b: u32, p: u32, r: u32) -> u32 {
    let mut out = 0u32;
    let mut place = 1u32;
    for _ in 0..r {
        let d = (a % p + b % p) % p;
        out += d * place;
        place *= p;
        a /= p;
        b /= p;
    }
    out
}

fn digit_neg(mut a: u32, p: u32, r: u32) -> u32 {
    let mut out = 0u32;
    let mut place = 1u32;
    for _ in 0..r {
        let d = (p - a % p) % p;
        out += d * place;
        place *= p;
        a /= p;
    }
    out
}

/// Field embedding GF(p^r) -> GF(p^R).
#[derive(Clone, Debug)]
pub struct Embedding {
    small: Fq,
    big: Fq,
    t_image: u32,
}

impl Embedding {
    pub fn apply(&self, a: u32) -> u32 {
        if self.small.degree() == 1 {
            return a;
        }
        let c = self.small.coeffs(a);
        let mut acc = 0u32;
        for &ci in c.iter().rev() {
            acc = self.big.add(&self.big.mul(&acc, &self.t_image), &ci);
        }
        acc
    }

    pub fn target(&self) -> &Fq {
        &self.big
    }
}

impl Field for Fq {
    type Elem = u32;

    #[inline]
    fn zero(&self) -> u32 {
        0
    }

    #[inline]
    fn one(&self) -> u32 {
        1
    }

    fn from_int(&self, n: i64) -> u32 {
        let p = self.0.p as i64;
        n.rem_euclid(p) as u32
    }

    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let inner = &*self.0;
        if inner.r == 1 {
            let s = a + b;
            if s >= inner.p {
                s - inner.p
            } else {
                s
            }
        } else if let Some(t) = &inner.add_table {
            t[(*a * inner.q + *b) as usize]
        } else {
            self.add_slow(*a, *b)
        }
    }

    #[inline]
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        self.add(a, &self.neg(b))
    }

    #[inline]
    fn neg(&self, a: &u32) -> u32 {
        let inner = &*self.0;
        if inner.r == 1 {
            if *a == 0 {
                0
            } else {
                inner.p - a
            }
        } else {
            digit_neg(*a, inner.p, inner.r)
        }
    }

    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        let inner = &*self.0;
        if inner.r == 1 {
            ((*a as u64 * *b as u64) % inner.p as u64) as u32
        } else if *a == 0 || *b == 0 {
            0
        } else {
            inner.exp[(inner.log[*a as usize] + inner.log[*b as usize]) as usize]
        }
    }

    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        let inner = &*self.0;
        if inner.r == 1 {
            Some(mod_inv(*a, inner.p))
        } else {
            let n = inner.q - 1;
            let l = inner.log[*a as usize];
            Some(inner.exp[((n - l) % n) as usize])
        }
    }

    fn characteristic(&self) -> u64 {
        self.0.p as u64
    }

    fn order(&self) -> Option<u64> {
        Some(self.0.q as u64)
    }

    fn random_elem(&self, rng: &mut ChaCha8Rng) -> u32 {
        rng.gen_range(0..self.0.q)
    }

    fn fmt_elem(&self, a: &u32) -> String {
        if self.0.r == 1 {
            return a.to_string();
        }
        let c = self.coeffs(*a);
        let mut terms = Vec::new();
        for (i, &ci) in c.iter().enumerate().rev() {
            if ci == 0 {
                continue;
            }
            let t = match (i, ci) {
                (0, _) => ci.to_string(),
                (1, 1) => "t".to_string(),
                (1, _) => format!("{ci}t"),
                (_, 1) => format!("t^{i}"),
                _ => format!("{ci}t^{i}"),
            };
            terms.push(t);
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }

    fn axpy(&self, dst: &mut [u32], c: &u32, src: &[u32]) {
        if *c == 0 {
            return;
        }
        let inner = &*self.0;
        if inner.r == 1 {
            let p = inner.p;
            if p <= 256 && src.len() >= 2 * p as usize {
                let mut table = [0u32; 256];
                for (x, t) in table.iter_mut().enumerate().take(p as usize) {
                    *t = ((x as u64 * *c as u64) % p as u64) as u32;
                }
                for (d, &s) in dst.iter_mut().zip(src) {
                    let v = *d + table[s as usize];
                    *d = if v >= p { v - p } else { v };
                }
            } else {
                for (d, &s) in dst.iter_mut().zip(src) {
                    if s != 0 {
                        let v = *d + ((s as u64 * *c as u64) % p as u64) as u32;
                        *d = if v >= p { v - p } else { v };
                    }
                }
            }
        } else {
            let lc = inner.log[*c as usize];
            for (d, &s) in dst.iter_mut().zip(src) {
                if s != 0 {
                    let prod = inner.exp[(inner.log[s as usize] + lc) as usize];
                    *d = self.add(d, &prod);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_basics() {
        let f = Fq::prime(5).unwrap();
        assert_eq!(f.mul(&3, &4), 2);
        assert_eq!(f.inv(&2), Some(3));
        assert_eq!(f.neg(&0), 0);
        assert!(matches!(Fq::prime(4), Err(Error::NonPrimeModulus(4))));
    }

    #[test]
    fn gf4_relation() {
        let f = Fq::new(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        let t = f.from_coeffs(&[0, 1]).unwrap();
        let t_plus_1 = f.from_coeffs(&[1, 1]).unwrap();
        assert_eq!(f.mul(&t, &t), t_plus_1);
    }

    #[test]
    fn modulus_is_first_irreducible() {
        // x^2 + 2 is the first monic irreducible quadratic over GF(5) in code order
        let f = Fq::new(5, 2).unwrap();
        assert_eq!(f.modulus(), &[2, 0, 1]);
        let f3 = Fq::new(3, 2).unwrap();
        assert_eq!(f3.modulus(), &[1, 0, 1]);
    }

    #[test]
    fn embedding_is_a_ring_map() {
        let small = Fq::new(2, 2).unwrap();
        let big = Fq::new(2, 4).unwrap();
        let e = small.embedding_into(&big).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(
                    e.apply(small.mul(&a, &b)),
                    big.mul(&e.apply(a), &e.apply(b))
                );
                assert_eq!(
                    e.apply(small.add(&a, &b)),
                    big.add(&e.apply(a), &e.apply(b))
                );
            }
        }
    }

    #[test]
    fn axpy_matches_scalar_loop() {
        for f in [Fq::prime(5).unwrap(), Fq::new(3, 3).unwrap()] {
            let src: Vec<u32> = (0..40).map(|i| i % f.size()).collect();
            let mut a: Vec<u32> = (0..40).map(|i| (i * 7 + 1) % f.size()).collect();
            let mut b = a.clone();
            let c = 2 % f.size();
            f.axpy(&mut a, &c, &src);
            for (d, s) in b.iter_mut().zip(&src) {
                *d = f.add(d, &f.mul(&c, s));
            }
            assert_eq!(a, b);
        }
    }
}
