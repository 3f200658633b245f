use super::Field;
use std::fmt;

/// Univariate polynomial, coefficients low-to-high with no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly<F: Field> {
    field: F,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> fmt::Debug for UniPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_var("x"))
    }
}

impl<F: Field> UniPoly<F> {
    pub fn new(field: &F, mut coeffs: Vec<F::Elem>) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        UniPoly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn from_ints(field: &F, c: &[i64]) -> Self {
        Self::new(field, c.iter().map(|&x| field.from_int(x)).collect())
    }

    pub fn zero(field: &F) -> Self {
        Self::new(field, Vec::new())
    }

    pub fn one(field: &F) -> Self {
        Self::new(field, vec![field.one()])
    }

    pub fn x(field: &F) -> Self {
        Self::new(field, vec![field.zero(), field.one()])
    }

    /// x - a
    pub fn linear(field: &F, a: &F::Elem) -> Self {
        Self::new(field, vec![field.neg(a), field.one()])
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&F::Elem> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> F::Elem {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| self.field.is_one(c))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(l) => {
                let inv = self.field.inv(l).expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        Self::new(f, self.coeffs.iter().map(|a| f.mul(a, c)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            f,
            (0..n)
                .map(|i| f.add(&self.coeff(i), &other.coeff(i)))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            f,
            (0..n)
                .map(|i| f.sub(&self.coeff(i), &other.coeff(i)))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Self::zero(f);
        }
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            f.axpy(&mut out[i..i + other.coeffs.len()], a, &other.coeffs);
        }
        Self::new(f, out)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(&self.field);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Quotient and remainder. Panics on division by zero.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let f = &self.field;
        let dd = d.degree().expect("division by zero polynomial");
        if self.coeffs.len() <= dd {
            return (Self::zero(f), self.clone());
        }
        let inv = f.inv(d.leading().unwrap()).unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![f.zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = f.mul(&rem[i + dd], &inv);
            if !f.is_zero(&c) {
                let neg = f.neg(&c);
                f.axpy(&mut rem[i..i + dd + 1], &neg, &d.coeffs);
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Self::new(f, quot), Self::new(f, rem))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        Self::new(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| f.mul(&f.from_int(i as i64), c))
                .collect(),
        )
    }

    pub fn eval(&self, x: &F::Elem) -> F::Elem {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    /// self^e mod m.
    pub fn powmod(&self, mut e: u128, m: &Self) -> Self {
        let mut acc = Self::one(&self.field).rem(m);
        let mut base = self.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    pub fn to_string_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let f = &self.field;
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if f.is_zero(c) {
                continue;
            }
            let cs = f.fmt_elem(c);
            let coef = if f.is_one(c) && i > 0 {
                String::new()
            } else if cs.contains(['+', ' ']) && i > 0 {
                format!("({cs})")
            } else {
                cs
            };
            terms.push(match i {
                0 => coef,
                1 => format!("{coef}{var}"),
                _ => format!("{coef}{var}^{i}"),
            });
        }
        terms.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::Fq;

    #[test]
    fn divrem_reconstructs() {
        let f = Fq::prime(7).unwrap();
        let a = UniPoly::from_ints(&f, &[3, 0, 5, 1, 2]);
        let b = UniPoly::from_ints(&f, &[1, 4, 1]);
        let (q, r) = a.divrem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn gcd_is_monic_common_factor() {
        let f = Fq::prime(5).unwrap();
        let common = UniPoly::from_ints(&f, &[2, 1]);
        let a = common.mul(&UniPoly::from_ints(&f, &[1, 1]));
        let b = common.mul(&UniPoly::from_ints(&f, &[3, 0, 1]));
        assert_eq!(a.gcd(&b), common);
    }
}
