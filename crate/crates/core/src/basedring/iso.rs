use super::BasedRing;
use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::time::{Duration, Instant};

/// Constraints and limits for [`iso_search`].
#[derive(Clone, Debug)]
pub struct IsoOptions {
    /// Forced assignments `a-index -> b-index`.
    pub pins: Vec<(usize, usize)>,
    pub timeout: Duration,
}

impl Default for IsoOptions {
    fn default() -> Self {
        IsoOptions {
            pins: Vec::new(),
            timeout: Duration::from_secs(60),
        }
    }
}

impl IsoOptions {
    pub fn with_pins(pins: Vec<(usize, usize)>) -> Self {
        IsoOptions {
            pins,
            ..Default::default()
        }
    }
}

type Invariant = (bool, bool, Vec<(Option<u64>, Option<u64>)>, Option<usize>);

/// Per-element data preserved by every isomorphism.
fn invariant(r: &BasedRing, i: usize) -> Invariant {
    let mut rows: Vec<(Option<u64>, Option<u64>)> = (0..r.rank())
        .map(|j| (r.row_sum(i, j), r.product(i, j).map(|p| p.len() as u64)))
        .collect();
    rows.sort_unstable();
    (i == r.unit(), r.dual(i) == i, rows, r.order(i))
}

struct Search<'a> {
    a: &'a BasedRing,
    b: &'a BasedRing,
    cand: Vec<Vec<usize>>,
    map: Vec<Option<usize>>,
    used: Vec<bool>,
    deadline: Instant,
    steps: u64,
    /// Only the stored products of `a` must be carried to `b`.
    embed: bool,
}

impl Search<'_> {
    /// Assigning `i -> x` agrees with every assigned pair so far.
    fn consistent(&self, i: usize, x: usize) -> bool {
        let (a, b) = (self.a, self.b);
        let ai = a.dual(i);
        if let Some(d) = self.map[ai] {
            if d != b.dual(x) {
                return false;
            }
        } else if ai == i && b.dual(x) != x {
            return false;
        }
        let check = |p: usize, q: usize, sp: usize, sq: usize| -> bool {
            match (a.product(p, q), b.product(sp, sq)) {
                (None, None) => true,
                (Some(ra), Some(rb)) => {
                    if ra.len() != rb.len() {
                        return false;
                    }
                    ra.iter().all(|&(k, v)| match self.map_or_self(k, i, x) {
                        Some(sk) => b.n(sp, sq, sk) == Some(v),
                        None => rb
                            .iter()
                            .any(|&(kk, vv)| vv == v && !self.used[kk] && kk != x),
                    })
                }
                (None, _) => self.embed,
                (Some(_), None) => false,
            }
        };
        for j in 0..a.rank() {
            let sj = if j == i { Some(x) } else { self.map[j] };
            let Some(sj) = sj else { continue };
            if !check(i, j, x, sj) || !check(j, i, sj, x) {
                return false;
            }
        }
        // products of assigned pairs that contain i
        for (&(p, q), row) in a.products.iter() {
            let (Some(sp), Some(sq)) = (self.map[p], self.map[q]) else {
                continue;
            };
            if let Some(&(_, v)) = row.iter().find(|(k, _)| *k == i) {
                if b.n(sp, sq, x) != Some(v) {
                    return false;
                }
            }
        }
        true
    }

    fn map_or_self(&self, k: usize, i: usize, x: usize) -> Option<usize> {
        if k == i {
            Some(x)
        } else {
            self.map[k]
        }
    }

    /// Candidates for `i` narrowed by assigned products containing `i`.
    fn live_candidates(&self, i: usize) -> Vec<usize> {
        let mut c: Vec<usize> = self.cand[i]
            .iter()
            .copied()
            .filter(|&x| !self.used[x])
            .collect();
        for (&(p, q), row) in self.a.products.iter() {
            if c.len() <= 1 {
                break;
            }
            let (Some(sp), Some(sq)) = (self.map[p], self.map[q]) else {
                continue;
            };
            if let Some(&(_, v)) = row.iter().find(|(k, _)| *k == i) {
                c.retain(|&x| self.b.n(sp, sq, x) == Some(v));
            }
        }
        c
    }

    fn run(&mut self) -> Result<bool> {
        self.steps += 1;
        if self.steps.is_multiple_of(1024) && Instant::now() > self.deadline {
            return Err(Error::Timeout);
        }
        let mut best: Option<(usize, Vec<usize>)> = None;
        for i in 0..self.a.rank() {
            if self.map[i].is_some() {
                continue;
            }
            let c = self.live_candidates(i);
            if best.as_ref().is_none_or(|(_, bc)| c.len() < bc.len()) {
                let empty = c.is_empty();
                best = Some((i, c));
                if empty {
                    break;
                }
            }
        }
        let Some((i, cands)) = best else {
            return Ok(true);
        };
        for x in cands {
            if !self.consistent(i, x) {
                continue;
            }
            self.map[i] = Some(x);
            self.used[x] = true;
            if self.run()? {
                return Ok(true);
            }
            self.map[i] = None;
            self.used[x] = false;
        }
        Ok(false)
    }
}

/// Check that `sigma` maps unit, duals, completeness and every constant.
pub fn is_isomorphism(a: &BasedRing, b: &BasedRing, sigma: &[usize]) -> bool {
    if a.rank() != b.rank() || sigma.len() != a.rank() || sigma[a.unit()] != b.unit() {
        return false;
    }
    let mut seen = vec![false; b.rank()];
    for &x in sigma {
        if x >= b.rank() || std::mem::replace(&mut seen[x], true) {
            return false;
        }
    }
    if (0..a.rank()).any(|i| sigma[a.dual(i)] != b.dual(sigma[i])) {
        return false;
    }
    (0..a.rank()).all(|i| {
        (0..a.rank()).all(|j| match (a.product(i, j), b.product(sigma[i], sigma[j])) {
            (None, None) => true,
            (Some(ra), Some(rb)) => {
                let mut mapped: Vec<(usize, u64)> =
                    ra.iter().map(|&(k, v)| (sigma[k], v)).collect();
                mapped.sort_unstable();
                mapped == rb
            }
            _ => false,
        })
    })
}

/// Search for a based-ring isomorphism `a -> b` (as the image list of
/// `a`'s basis). Truncated rings are compared including their
/// completeness masks. `None` certifies that no isomorphism satisfies the
/// pins.
pub fn iso_search(a: &BasedRing, b: &BasedRing, opts: &IsoOptions) -> Result<Option<Vec<usize>>> {
    if a.rank() != b.rank() || a.is_truncated() != b.is_truncated() {
        return Ok(None);
    }
    let n = a.rank();
    let mut classes: BTreeMap<Invariant, Vec<usize>> = BTreeMap::new();
    for x in 0..n {
        classes.entry(invariant(b, x)).or_default().push(x);
    }
    let mut cand = Vec::with_capacity(n);
    for i in 0..n {
        cand.push(classes.get(&invariant(a, i)).cloned().unwrap_or_default());
    }
    let s = Search {
        a,
        b,
        cand,
        map: vec![None; n],
        used: vec![false; n],
        deadline: Instant::now() + opts.timeout,
        steps: 0,
        embed: false,
    };
    let Some(map) = solve(s, &opts.pins)? else {
        return Ok(None);
    };
    if !is_isomorphism(a, b, &map) {
        return Err(Error::Mismatch(
            "search produced an invalid bijection".into(),
        ));
    }
    Ok(Some(map))
}

fn solve(mut s: Search<'_>, pins: &[(usize, usize)]) -> Result<Option<Vec<usize>>> {
    let (na, nb) = (s.a.rank(), s.b.rank());
    for &(i, x) in pins {
        if i >= na || x >= nb {
            return Err(Error::Parse(format!("pin ({i},{x}) out of range")));
        }
        if s.map[i].is_some_and(|y| y != x) || (s.used[x] && s.map[i] != Some(x)) {
            return Ok(None);
        }
        if s.map[i].is_none() {
            if !s.cand[i].contains(&x) || !s.consistent(i, x) {
                return Ok(None);
            }
            s.map[i] = Some(x);
            s.used[x] = true;
        }
    }
    if !s.run()? {
        return Ok(None);
    }
    Ok(Some(
        s.map.into_iter().map(|x| x.expect("complete")).collect(),
    ))
}

/// Check that `sigma` is injective, maps unit and duals, and carries every
/// stored product of `a` to the same product in `b`.
pub fn is_embedding(a: &BasedRing, b: &BasedRing, sigma: &[usize]) -> bool {
    if sigma.len() != a.rank() || sigma[a.unit()] != b.unit() {
        return false;
    }
    let mut seen = vec![false; b.rank()];
    for &x in sigma {
        if x >= b.rank() || std::mem::replace(&mut seen[x], true) {
            return false;
        }
    }
    if (0..a.rank()).any(|i| sigma[a.dual(i)] != b.dual(sigma[i])) {
        return false;
    }
    a.products()
        .all(|((i, j), ra)| match b.product(sigma[i], sigma[j]) {
            Some(rb) => {
                let mut mapped: Vec<(usize, u64)> =
                    ra.iter().map(|&(k, v)| (sigma[k], v)).collect();
                mapped.sort_unstable();
                mapped == rb
            }
            None => false,
        })
}

/// Search for an injective map of `a`'s basis into `b`'s preserving unit,
/// duals and every product stored in `a` (a truncated ring is compared
/// with a larger one). `None` certifies that no such map satisfies the
/// pins.
pub fn embed_search(a: &BasedRing, b: &BasedRing, opts: &IsoOptions) -> Result<Option<Vec<usize>>> {
    if a.rank() > b.rank() {
        return Ok(None);
    }
    let invertible = |r: &BasedRing, i: usize| r.is_invertible(i);
    let cand: Vec<Vec<usize>> = (0..a.rank())
        .map(|i| {
            (0..b.rank())
                .filter(|&x| {
                    (i == a.unit()) == (x == b.unit())
                        && (a.dual(i) == i) == (b.dual(x) == x)
                        && (!invertible(a, i) || invertible(b, x))
                })
                .collect()
        })
        .collect();
    let s = Search {
        a,
        b,
        cand,
        map: vec![None; a.rank()],
        used: vec![false; b.rank()],
        deadline: Instant::now() + opts.timeout,
        steps: 0,
        embed: true,
    };
    let Some(map) = solve(s, &opts.pins)? else {
        return Ok(None);
    };
    if !is_embedding(a, b, &map) {
        return Err(Error::Mismatch(
            "search produced an invalid embedding".into(),
        ));
    }
    Ok(Some(map))
}
