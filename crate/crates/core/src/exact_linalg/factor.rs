use super::{Field, UniPoly};
use crate::error::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Factor a nonzero polynomial over a finite field into monic irreducibles
/// with multiplicities: square-free split, distinct-degree split, then
/// Cantor–Zassenhaus equal-degree splitting.
///
/// The leading coefficient is dropped. Output is sorted by degree and then
/// by coefficients, so it does not depend on the seed.
pub fn factor<F: Field>(f: &UniPoly<F>, seed: u64) -> Result<Vec<(UniPoly<F>, usize)>> {
    let field = f.field();
    let Some(q) = field.order() else {
        return Err(Error::InvalidField(
            "factorization needs a finite field".into(),
        ));
    };
    if f.is_zero() {
        return Err(Error::InvalidField(
            "cannot factor the zero polynomial".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (sq, mult) in squarefree(&f.monic(), q) {
        for (g, d) in distinct_degree(&sq, q) {
            for h in equal_degree(&g, d, q, &mut rng) {
                out.push((h, mult));
            }
        }
    }
    sort_factors(&mut out);
    Ok(out)
}

fn sort_key<F: Field>(p: &UniPoly<F>) -> (usize, Vec<String>) {
    let f = p.field();
    (
        p.degree().unwrap_or(0),
        p.coeffs().iter().rev().map(|c| f.fmt_elem(c)).collect(),
    )
}

fn sort_factors<F: Field>(v: &mut [(UniPoly<F>, usize)]) {
    v.sort_by_cached_key(|(p, m)| (sort_key(p), *m));
}

/// a^(q/p) is the p-th root in a field of q elements.
fn pth_root<F: Field>(f: &UniPoly<F>, q: u64) -> UniPoly<F> {
    let field = f.field();
    let p = field.characteristic() as usize;
    let e = q / p as u64;
    let coeffs = f
        .coeffs()
        .iter()
        .step_by(p)
        .map(|c| field.pow(c, e))
        .collect();
    UniPoly::new(field, coeffs)
}

/// Square-free decomposition of a monic polynomial: pairs (s, m) with the
/// s pairwise coprime, square-free, and f = prod s^m.
fn squarefree<F: Field>(f: &UniPoly<F>, q: u64) -> Vec<(UniPoly<F>, usize)> {
    let field = f.field();
    let p = field.characteristic() as usize;
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let d = f.derivative();
    if d.is_zero() {
        for (s, m) in squarefree(&pth_root(f, q), q) {
            out.push((s, m * p));
        }
        return out;
    }
    let mut c = f.gcd(&d);
    let mut w = f.divrem(&c).0;
    let mut i = 1;
    while w.degree().unwrap_or(0) > 0 {
        let y = w.gcd(&c);
        let fac = w.divrem(&y).0;
        if fac.degree().unwrap_or(0) > 0 {
            out.push((fac.monic(), i));
        }
        w = y;
        c = c.divrem(&w).0;
        i += 1;
    }
    if c.degree().unwrap_or(0) > 0 {
        for (s, m) in squarefree(&pth_root(&c.monic(), q), q) {
            out.push((s, m * p));
        }
    }
    out
}

/// Distinct-degree split of a monic square-free polynomial: pairs (g, d)
/// where g is the product of all irreducible factors of degree d.
fn distinct_degree<F: Field>(f: &UniPoly<F>, q: u64) -> Vec<(UniPoly<F>, usize)> {
    let field = f.field();
    let x = UniPoly::x(field);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.rem(&rest);
    let mut i = 1;
    while rest.degree().unwrap_or(0) >= 2 * i {
        h = h.powmod(q as u128, &rest);
        let g = h.sub(&x).gcd(&rest);
        if g.degree().unwrap_or(0) > 0 {
            rest = rest.divrem(&g).0;
            h = h.rem(&rest);
            out.push((g, i));
        }
        i += 1;
    }
    if let Some(d) = rest.degree().filter(|&d| d > 0) {
        out.push((rest.monic(), d));
    }
    out
}

fn random_poly<F: Field>(field: &F, deg_below: usize, rng: &mut ChaCha8Rng) -> UniPoly<F> {
    UniPoly::new(
        field,
        (0..deg_below).map(|_| field.random_elem(rng)).collect(),
    )
}

/// Split a product of distinct irreducibles of degree d.
fn equal_degree<F: Field>(
    g: &UniPoly<F>,
    d: usize,
    q: u64,
    rng: &mut ChaCha8Rng,
) -> Vec<UniPoly<F>> {
    let n = g.degree().unwrap_or(0);
    if n <= d {
        return vec![g.monic()];
    }
    let field = g.field();
    let char2 = field.characteristic() == 2;
    let r = q.trailing_zeros() as usize; // q = 2^r in characteristic 2
    loop {
        let a = random_poly(field, n, rng);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if char2 {
            // trace map a + a^2 + ... + a^(2^(rd-1))
            let mut acc = a.rem(g);
            let mut cur = acc.clone();
            for _ in 1..r * d {
                cur = cur.mul(&cur).rem(g);
                acc = acc.add(&cur);
            }
            acc
        } else {
            // a^((q^d - 1)/2) = (a^(1 + q + ... + q^(d-1)))^((q-1)/2)
            let mut frob = a.rem(g);
            let mut norm = frob.clone();
            for _ in 1..d {
                frob = frob.powmod(q as u128, g);
                norm = norm.mul(&frob).rem(g);
            }
            norm.powmod(((q - 1) / 2) as u128, g)
                .sub(&UniPoly::one(field))
        };
        let h = b.gcd(g);
        let hd = h.degree().unwrap_or(0);
        if hd > 0 && hd < n {
            let other = g.divrem(&h).0;
            let mut out = equal_degree(&h, d, q, rng);
            out.extend(equal_degree(&other, d, q, rng));
            return out;
        }
    }
}

/// Coprime factorization of a characteristic polynomial for Fitting
/// splitting.
#[derive(Clone, Debug)]
pub struct FittingSplit<F: Field> {
    /// `(radical, multiplicity, radical_is_irreducible)`; the parts
    /// `radical^multiplicity` are pairwise coprime with product the monic
    /// input.
    pub parts: Vec<(UniPoly<F>, usize, bool)>,
}

impl<F: Field> FittingSplit<F> {
    pub fn splits(&self) -> bool {
        self.parts.len() >= 2
    }

    /// Degree of an irreducible factor that needs a field extension, when
    /// the polynomial is a power of a single nonlinear irreducible.
    pub fn extension_degree(&self) -> Option<usize> {
        match self.parts.as_slice() {
            [(g, _, true)] if g.degree().unwrap_or(0) > 1 => g.degree(),
            _ => None,
        }
    }

    /// The polynomials `radical^multiplicity`.
    pub fn powers(&self) -> Vec<UniPoly<F>> {
        self.parts
            .iter()
            .map(|(g, m, _)| g.pow(*m as u64))
            .collect()
    }
}

/// Finite fields: full factorization grouped per irreducible. Infinite
/// fields: square-free decomposition, with linear factors x - r split off
/// for each hinted root r.
pub fn split_for_fitting<F: Field>(
    f: &UniPoly<F>,
    seed: u64,
    root_hints: &[F::Elem],
) -> Result<FittingSplit<F>> {
    let field = f.field();
    if field.order().is_some() {
        let parts = factor(f, seed)?
            .into_iter()
            .map(|(g, m)| (g, m, true))
            .collect();
        return Ok(FittingSplit { parts });
    }
    let mut parts = Vec::new();
    for (s, m) in yun_char0(&f.monic()) {
        let mut rest = s;
        for r in root_hints {
            if rest.degree().unwrap_or(0) == 0 {
                break;
            }
            if field.is_zero(&rest.eval(r)) {
                let lin = UniPoly::linear(field, r);
                rest = rest.divrem(&lin).0;
                parts.push((lin, m, true));
            }
        }
        if let Some(d) = rest.degree().filter(|&d| d > 0) {
            parts.push((rest.monic(), m, d == 1));
        }
    }
    sort_factors_3(&mut parts);
    Ok(FittingSplit { parts })
}

fn sort_factors_3<F: Field>(v: &mut [(UniPoly<F>, usize, bool)]) {
    v.sort_by_cached_key(|(p, m, _)| (sort_key(p), *m));
}

fn yun_char0<F: Field>(f: &UniPoly<F>) -> Vec<(UniPoly<F>, usize)> {
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let d = f.derivative();
    let a0 = f.gcd(&d);
    let mut b = f.divrem(&a0).0;
    let mut c = d.divrem(&a0).0;
    let mut dd = c.sub(&b.derivative());
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = b.gcd(&dd);
        b = b.divrem(&a).0;
        c = dd.divrem(&a).0;
        dd = c.sub(&b.derivative());
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.monic(), i));
        }
        i += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::{Fq, Rationals};

    fn product<F: Field>(field: &F, fs: &[(UniPoly<F>, usize)]) -> UniPoly<F> {
        fs.iter().fold(UniPoly::one(field), |acc, (g, m)| {
            acc.mul(&g.pow(*m as u64))
        })
    }

    #[test]
    fn small_factorizations() {
        let f5 = Fq::prime(5).unwrap();
        let fs = factor(&UniPoly::from_ints(&f5, &[1, 0, 1]), 0).unwrap();
        assert_eq!(
            fs,
            vec![
                (UniPoly::from_ints(&f5, &[2, 1]), 1),
                (UniPoly::from_ints(&f5, &[3, 1]), 1)
            ]
        );
        let f2 = Fq::prime(2).unwrap();
        let fs = factor(&UniPoly::from_ints(&f2, &[1, 1, 1]), 0).unwrap();
        assert_eq!(fs.len(), 1);
        let f3 = Fq::prime(3).unwrap();
        let fs = factor(&UniPoly::from_ints(&f3, &[0, -1, 0, 1]), 0).unwrap();
        assert_eq!(fs.len(), 3);
        assert!(fs.iter().all(|(g, m)| g.degree() == Some(1) && *m == 1));
    }

    #[test]
    fn repeated_and_pth_power_factors() {
        let f2 = Fq::prime(2).unwrap();
        // (x^2+x+1)^2 (x+1)^3 x^4
        let g = UniPoly::from_ints(&f2, &[1, 1, 1]);
        let l = UniPoly::from_ints(&f2, &[1, 1]);
        let x = UniPoly::x(&f2);
        let f = g.pow(2).mul(&l.pow(3)).mul(&x.pow(4));
        let fs = factor(&f, 3).unwrap();
        assert_eq!(product(&f2, &fs), f);
        assert_eq!(fs.len(), 3);
    }

    #[test]
    fn char0_split_with_hints() {
        let q = Rationals;
        // (x-1)^2 (x-2)^2 (x^2+1)
        let f = UniPoly::from_ints(&q, &[-1, 1])
            .pow(2)
            .mul(&UniPoly::from_ints(&q, &[-2, 1]).pow(2))
            .mul(&UniPoly::from_ints(&q, &[1, 0, 1]));
        let s = split_for_fitting(&f, 0, &[q.from_int(1), q.from_int(2)]).unwrap();
        assert_eq!(s.parts.len(), 3);
        let prod = s.powers().iter().fold(UniPoly::one(&q), |a, b| a.mul(b));
        assert_eq!(prod, f);
    }
}
