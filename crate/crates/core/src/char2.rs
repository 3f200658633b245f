//! Characteristic-2 arithmetic behind the tilting semisimplifications of
//! GL(n), SL(n), PGL(n): Lucas' theorem, the binomial parity facts, and
//! the pointed rings `Vec(Z^s)` and their SL/PGL variants.

use crate::basedring::BasedRing;
use crate::error::{Error, Result};
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// Largest number of elements a truncated char-2 ring may have.
pub const RING_CAP: usize = 4096;

/// Binary expansion `n = 2^{m_1} + .. + 2^{m_s}` with `m_1 < .. < m_s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryProfile {
    pub n: u64,
    pub digits: Vec<u32>,
    /// `n_j = 2^{m_1} + .. + 2^{m_j}`.
    pub partial_sums: Vec<u64>,
}

impl BinaryProfile {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parse("n must be positive".into()));
        }
        let digits: Vec<u32> = (0..64).filter(|&m| n >> m & 1 == 1).collect();
        let partial_sums = digits
            .iter()
            .scan(0u64, |acc, &m| {
                *acc += 1 << m;
                Some(*acc)
            })
            .collect();
        Ok(BinaryProfile {
            n,
            digits,
            partial_sums,
        })
    }

    pub fn s(&self) -> usize {
        self.digits.len()
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

fn small_binom_mod(a: u64, b: u64, p: u64) -> u64 {
    if b > a {
        return 0;
    }
    // a < p, so the factorials involved are units mod p
    let (mut num, mut den) = (1u64, 1u64);
    for i in 0..b {
        num = num * ((a - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    let mut inv = 1u64;
    let mut e = p - 2;
    let mut base = den;
    while e > 0 {
        if e & 1 == 1 {
            inv = inv * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    num * inv % p
}

/// `C(a, b) mod p` as the product of the digit binomials in base p.
pub fn lucas_binom(mut a: u64, mut b: u64, p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::Parse(format!("{p} is not prime")));
    }
    let mut acc = 1 % p;
    while b > 0 || a > 0 {
        let (ai, bi) = (a % p, b % p);
        acc = acc * small_binom_mod(ai, bi, p) % p;
        if acc == 0 {
            return Ok(0);
        }
        a /= p;
        b /= p;
    }
    Ok(acc)
}

/// `C(a, b)` exactly.
pub fn exact_binom(a: u64, b: u64) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigUint::from(1u32);
    for i in 0..b {
        acc = acc * (a - i) / (i + 1);
    }
    acc
}

/// Whether `l! / ((2^{k_1})! .. (2^{k_r})!)` is odd, for the binary parts
/// `2^{k_i}` of `l`, computed as `∏_j C(l_j, 2^{k_j})` over the partial sums.
pub fn multinomial_odd(l: u64) -> Result<bool> {
    let prof = BinaryProfile::new(l)?;
    for (&m, &nj) in prof.digits.iter().zip(&prof.partial_sums) {
        if lucas_binom(nj, 1 << m, 2)? == 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One verified parity statement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityClaim {
    pub claim: String,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityReport {
    pub profile: BinaryProfile,
    pub claims: Vec<ParityClaim>,
    pub ok: bool,
}

/// The parity facts for `n`: `C(n - n_j, i)` is even for `0 < i <= n_j`
/// (each j); `C(n, 2^m)` is odd exactly for the binary digits m of n; the
/// multinomial over the binary parts of n is odd.
pub fn parity_claims(n: u64) -> Result<ParityReport> {
    if !(1..=4096).contains(&n) {
        return Err(Error::Parse(format!("n = {n} outside 1..=4096")));
    }
    let profile = BinaryProfile::new(n)?;
    let mut claims = Vec::new();
    for (j, &nj) in profile.partial_sums.iter().enumerate() {
        let mut ok = true;
        for i in 1..=nj {
            ok &= lucas_binom(n - nj, i, 2)? == 0;
        }
        claims.push(ParityClaim {
            claim: format!("C({}, i) even for 0 < i <= n_{} = {nj}", n - nj, j + 1),
            ok,
        });
    }
    let mut odd_at = Vec::new();
    let mut m = 0u32;
    while 1u64 << m <= n {
        if lucas_binom(n, 1 << m, 2)? == 1 {
            odd_at.push(m);
        }
        m += 1;
    }
    claims.push(ParityClaim {
        claim: format!("C({n}, 2^m) odd exactly for m in {:?}", profile.digits),
        ok: odd_at == profile.digits,
    });
    claims.push(ParityClaim {
        claim: format!("multinomial over the binary parts of {n} is odd"),
        ok: multinomial_odd(n)?,
    });
    let ok = claims.iter().all(|c| c.ok);
    Ok(ParityReport {
        profile,
        claims,
        ok,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variant {
    GL,
    SL,
    PGL,
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "GL" => Ok(Variant::GL),
            "SL" => Ok(Variant::SL),
            "PGL" => Ok(Variant::PGL),
            _ => Err(Error::Parse(format!("unknown variant {s}"))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::GL => "GL",
            Variant::SL => "SL",
            Variant::PGL => "PGL",
        })
    }
}

/// The pointed ring of one variant, with its group presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Char2Ring {
    pub n: u64,
    pub variant: Variant,
    pub level: usize,
    /// Rank of the free abelian group of invertible simples.
    pub rank: usize,
    /// Generators `X_m` for the binary digits m of n.
    pub generators: Vec<String>,
    pub relation: Option<String>,
    pub ring: BasedRing,
}

fn label(digits: &[u32], v: &[i64]) -> String {
    let parts: Vec<String> = digits
        .iter()
        .zip(v)
        .filter(|(_, &e)| e != 0)
        .map(|(m, &e)| {
            if e == 1 {
                format!("X{m}")
            } else {
                format!("X{m}^{e}")
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Group ring of `Z^s` modulo `relation` (if any) restricted to the
/// subgroup cut out by `keep`, truncated to words of length <= `level` in
/// the `X_m^{±1}`.
fn lattice_ring(
    digits: &[u32],
    relation: Option<&[i64]>,
    keep: impl Fn(&[i64]) -> bool,
    level: usize,
) -> Result<BasedRing> {
    let s = digits.len();
    // canonical representative modulo the relation: last coordinate zero
    let canon = |v: &[i64]| -> Vec<i64> {
        match relation {
            Some(r) if s > 0 => {
                let k = v[s - 1] / r[s - 1];
                v.iter().zip(r).map(|(a, b)| a - k * b).collect()
            }
            _ => v.to_vec(),
        }
    };
    let mut elems: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
    let mut frontier = vec![vec![0i64; s]];
    elems.insert(vec![0; s], 0);
    for len in 1..=level {
        let mut next = Vec::new();
        for v in &frontier {
            for i in 0..s {
                for step in [1, -1] {
                    let mut w = v.clone();
                    w[i] += step;
                    let w = canon(&w);
                    if !elems.contains_key(&w) {
                        elems.insert(w.clone(), len);
                        next.push(w);
                    }
                }
            }
        }
        if elems.len() > RING_CAP {
            return Err(Error::BudgetExceeded(format!("more than {RING_CAP} words")));
        }
        frontier = next;
    }
    let basis: Vec<Vec<i64>> = elems.keys().filter(|v| keep(v)).cloned().collect();
    let index: BTreeMap<&Vec<i64>, usize> = basis.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let unit = index[&vec![0; s]];
    let neg = |v: &[i64]| canon(&v.iter().map(|x| -x).collect::<Vec<_>>());
    let dual = basis.iter().map(|v| index[&neg(v)]).collect();
    let mut constants = Vec::new();
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            let c = canon(&a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>());
            if let Some(&k) = index.get(&c) {
                constants.push((i, j, k, 1));
            }
        }
    }
    let labels = basis.iter().map(|v| label(digits, v)).collect();
    BasedRing::new(labels, unit, dual, constants, true, Some(level as u32))
}

/// The pointed ring of the semisimplified tilting category of GL(n),
/// SL(n) or PGL(n) in characteristic 2, truncated to words of length
/// <= `level` in the generators `X_{m_j}`.
pub fn char2_ring(n: u64, variant: Variant, level: usize) -> Result<Char2Ring> {
    if level > 6 {
        return Err(Error::BudgetExceeded(format!(
            "truncation level {level} > 6"
        )));
    }
    let prof = BinaryProfile::new(n)?;
    let s = prof.s();
    let digits = &prof.digits;
    let generators = digits.iter().map(|m| format!("X{m}")).collect();
    let ones = vec![1i64; s];
    let weights: Vec<i64> = digits.iter().map(|&m| 1i64 << m).collect();
    let (ring, rank, relation) = match variant {
        Variant::GL => (lattice_ring(digits, None, |_| true, level)?, s, None),
        Variant::SL => (
            lattice_ring(digits, Some(&ones), |_| true, level)?,
            s - 1,
            Some(format!("{} = 1", label(digits, &ones))),
        ),
        Variant::PGL => {
            let keep = |v: &[i64]| v.iter().zip(&weights).map(|(a, b)| a * b).sum::<i64>() == 0;
            let rel = weights
                .iter()
                .zip(digits)
                .map(|(w, m)| format!("{w}·e(X{m})"))
                .collect::<Vec<_>>()
                .join(" + ");
            (
                lattice_ring(digits, None, keep, level)?,
                s - 1,
                Some(format!("{rel} = 0")),
            )
        }
    };
    Ok(Char2Ring {
        n,
        variant,
        level,
        rank,
        generators,
        relation,
        ring,
    })
}

/// Everything the `char2` task reports for one n.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Char2Report {
    pub n: u64,
    pub s: usize,
    pub profile: BinaryProfile,
    pub parity: ParityReport,
    pub rings: Vec<Char2Ring>,
    pub ok: bool,
}

impl Char2Report {
    pub fn markdown(&self) -> String {
        let mut out = format!(
            "| n | digits | s | parity | GL rank | SL rank | PGL rank |\n|---|---|---|---|---|---|---|\n| {} | {:?} | {} | {} |",
            self.n,
            self.profile.digits,
            self.s,
            if self.parity.ok { "ok" } else { "FAIL" }
        );
        for r in &self.rings {
            out.push_str(&format!(" {} |", r.rank));
        }
        out.push('\n');
        out
    }
}

pub fn char2_report(n: u64, level: usize) -> Result<Char2Report> {
    let parity = parity_claims(n)?;
    let profile = parity.profile.clone();
    let s = profile.s();
    let rings = [Variant::GL, Variant::SL, Variant::PGL]
        .into_iter()
        .map(|v| char2_ring(n, v, level))
        .collect::<Result<Vec<_>>>()?;
    let ok = parity.ok
        && rings
            .iter()
            .all(|r| r.ring.validate().ok && (0..r.ring.rank()).all(|i| r.ring.is_invertible(i)));
    Ok(Char2Report {
        n,
        s,
        profile,
        parity,
        rings,
        ok,
    })
}

/// Exhaustive comparison of [`lucas_binom`] with exact binomials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LucasSweep {
    pub max_a: u64,
    pub primes: Vec<u64>,
    pub checked: u64,
    /// `(a, b, p, lucas, exact mod p)`, first few.
    pub mismatches: Vec<(u64, u64, u64, u64, u64)>,
    pub parity_max_n: u64,
    pub parity_failures: Vec<u64>,
    pub ok: bool,
}

pub fn lucas_sweep(max_a: u64, primes: &[u64], parity_max_n: u64) -> Result<LucasSweep> {
    let mut checked = 0;
    let mut mismatches = Vec::new();
    // Pascal's triangle, one row per a
    let mut row: Vec<BigUint> = vec![BigUint::zero(); max_a as usize + 1];
    row[0] = BigUint::from(1u32);
    for a in 0..=max_a {
        if a > 0 {
            for b in (1..=a as usize).rev() {
                let prev = row[b - 1].clone();
                row[b] += prev;
            }
        }
        for &p in primes {
            for (b, c) in row.iter().enumerate() {
                let exact = (c % p).to_u64().expect("residue fits");
                let l = lucas_binom(a, b as u64, p)?;
                checked += 1;
                if l != exact && mismatches.len() < 16 {
                    mismatches.push((a, b as u64, p, l, exact));
                }
            }
        }
    }
    let mut parity_failures = Vec::new();
    for n in 1..=parity_max_n {
        if !parity_claims(n)?.ok {
            parity_failures.push(n);
        }
    }
    let ok = mismatches.is_empty() && parity_failures.is_empty();
    Ok(LucasSweep {
        max_a,
        primes: primes.to_vec(),
        checked,
        mismatches,
        parity_max_n,
        parity_failures,
        ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lucas_examples() {
        assert_eq!(lucas_binom(10, 2, 2).unwrap(), 1);
        assert_eq!(lucas_binom(17, 0, 7).unwrap(), 1);
        assert_eq!(lucas_binom(5, 3, 5).unwrap(), 0);
        assert!(lucas_binom(5, 3, 4).is_err());
        assert_eq!(exact_binom(10, 2), BigUint::from(45u32));
    }

    #[test]
    fn multinomials() {
        for l in [3, 6, 7, 100, 4095] {
            assert!(multinomial_odd(l).unwrap());
        }
    }

    #[test]
    fn profile_and_parity() {
        let p = BinaryProfile::new(6).unwrap();
        assert_eq!(p.digits, vec![1, 2]);
        assert_eq!(p.partial_sums, vec![2, 6]);
        assert!(parity_claims(6).unwrap().ok);
        assert!(parity_claims(7).unwrap().ok);
        assert_eq!(BinaryProfile::new(64).unwrap().s(), 1);
    }

    #[test]
    fn ring_examples() {
        let gl = char2_ring(6, Variant::GL, 3).unwrap();
        assert_eq!(gl.rank, 2);
        // L1 ball of radius 3 in Z^2
        assert_eq!(gl.ring.rank(), 25);
        assert!(gl.ring.validate().ok);
        assert_eq!(char2_ring(4, Variant::GL, 3).unwrap().ring.rank(), 7);
        let sl = char2_ring(6, Variant::SL, 3).unwrap();
        assert_eq!(sl.rank, 1);
        assert_eq!(sl.relation.as_deref(), Some("X1*X2 = 1"));
        assert_eq!(sl.ring.rank(), 7);
        let pgl = char2_ring(6, Variant::PGL, 3).unwrap();
        assert_eq!(pgl.rank, 1);
        // kernel of 2a + 4b: multiples of X1^2*X2^-1, word length 3 each
        assert_eq!(pgl.ring.rank(), 3);
        assert_eq!(char2_ring(8, Variant::SL, 3).unwrap().ring.rank(), 1);
    }

    #[test]
    fn sweep_agrees_with_exact_binomials() {
        let sw = lucas_sweep(60, &[2, 3, 5, 7], 64).unwrap();
        assert!(sw.ok, "{:?}", sw.mismatches);
        assert_eq!(sw.checked, 61 * 61 * 4);
        assert_eq!(
            exact_binom(60, 30),
            BigUint::from(118_264_581_564_861_424u64)
        );
    }

    #[test]
    fn report_for_six() {
        let r = char2_report(6, 3).unwrap();
        assert_eq!(r.s, 2);
        assert!(r.ok);
        assert!(r.markdown().contains("| 6 |"));
    }
}
