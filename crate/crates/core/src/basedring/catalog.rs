use super::BasedRing;
use crate::error::{Error, Result};

/// Truncated Clebsch–Gordan rule of level `n`: simples `L_1..L_{n-1}` with
/// `L_a L_b = ⊕ L_c`, `c = |a-b|+1, |a-b|+3, .., min(a+b-1, 2n-1-a-b)`.
pub fn verlinde(n: usize) -> Result<BasedRing> {
    verlinde_subset(n, 1, "L")
}

/// The span of the odd-labelled simples `L_1, L_3, ..` of [`verlinde`].
pub fn verlinde_even(n: usize, prefix: &str) -> Result<BasedRing> {
    verlinde_subset(n, 2, prefix)
}

fn verlinde_subset(n: usize, step: usize, prefix: &str) -> Result<BasedRing> {
    if n < 2 {
        return Err(Error::UnknownName(format!("Verlinde level {n} < 2")));
    }
    let labels: Vec<usize> = (1..n).step_by(step).collect();
    let pos = |c: usize| labels.iter().position(|&x| x == c);
    let mut constants = Vec::new();
    for (i, &a) in labels.iter().enumerate() {
        for (j, &b) in labels.iter().enumerate() {
            let lo = a.abs_diff(b) + 1;
            let hi = (a + b - 1).min(2 * n - 1 - a - b);
            let mut c = lo;
            while c <= hi {
                let k = pos(c).expect("parity keeps products in the subset");
                constants.push((i, j, k, 1));
                c += 2;
            }
        }
    }
    let basis = if step == 1 {
        labels.iter().map(|a| format!("{prefix}{a}")).collect()
    } else {
        (0..labels.len()).map(|i| format!("{prefix}{i}")).collect()
    };
    BasedRing::new(
        basis,
        0,
        (0..labels.len()).collect(),
        constants,
        false,
        None,
    )
}

/// Grothendieck ring of the Verlinde category in characteristic p.
pub fn ver_p(p: usize) -> Result<BasedRing> {
    verlinde(p)
}

/// Its even part, spanned by `L_1, L_3, .., L_{p-2}`.
pub fn ver_p_plus(p: usize) -> Result<BasedRing> {
    if p < 3 || p.is_multiple_of(2) {
        return Err(Error::UnknownName(format!(
            "ver_p_plus needs odd p >= 3, got {p}"
        )));
    }
    let r = verlinde_even(p, "L")?;
    let basis: Vec<String> = (0..r.rank()).map(|i| format!("L{}", 2 * i + 1)).collect();
    BasedRing::new(basis, 0, r.duals().to_vec(), r.constants(), false, None)
}

/// `X_0 = 1`, `X_1 X_i = X_{i-1} + X_i + X_{i+1}`, `X_1 X_l = X_{l-1}`.
pub fn k_l(l: usize) -> Result<BasedRing> {
    if l < 1 {
        return Err(Error::UnknownName("K_l needs l >= 1".into()));
    }
    verlinde_even(2 * l + 2, "X")
}

/// As [`k_l`] but with `X_1 X_l = X_{l-1} + X_l`.
pub fn k_l_tilde(l: usize) -> Result<BasedRing> {
    if l < 1 {
        return Err(Error::UnknownName("K_l_tilde needs l >= 1".into()));
    }
    verlinde_even(2 * l + 3, "X")
}

/// SO(3)-type rule `X_i X_j = X_{|i-j|} + .. + X_{i+j}` on `X_0..X_level`,
/// keeping the products with `i + j <= level`.
fn so3_trunc(level: usize, label: impl Fn(usize) -> String) -> Result<BasedRing> {
    let mut constants = Vec::new();
    for i in 0..=level {
        for j in 0..=level - i {
            for k in i.abs_diff(j)..=i + j {
                constants.push((i, j, k, 1));
            }
        }
    }
    BasedRing::new(
        (0..=level).map(label).collect(),
        0,
        (0..=level).collect(),
        constants,
        true,
        Some(level as u32),
    )
}

pub fn k_inf_trunc(level: usize) -> Result<BasedRing> {
    so3_trunc(level, |i| format!("X{i}"))
}

/// Rep PGL(2): `U_1, U_3, ..` by dimension.
pub fn pgl2_trunc(level: usize) -> Result<BasedRing> {
    so3_trunc(level, |i| format!("U{}", 2 * i + 1))
}

/// Rep OSp(1|2): simples of dimension `2i+1` with the same fusion rule.
pub fn osp12_trunc(level: usize) -> Result<BasedRing> {
    so3_trunc(level, |i| format!("P{}", 2 * i + 1))
}

/// Rep SL(2): `V_a V_b = V_{|a-b|} + V_{|a-b|+2} + .. + V_{a+b}` on
/// `V_0..V_level`, keeping the products with `a + b <= level`.
pub fn sl2_trunc(level: usize) -> Result<BasedRing> {
    let mut constants = Vec::new();
    for a in 0..=level {
        for b in 0..=level - a {
            let mut c = a.abs_diff(b);
            while c <= a + b {
                constants.push((a, b, c, 1));
                c += 2;
            }
        }
    }
    BasedRing::new(
        (0..=level).map(|a| format!("V{a}")).collect(),
        0,
        (0..=level).collect(),
        constants,
        true,
        Some(level as u32),
    )
}

/// Group ring of `Z/n_1 x .. x Z/n_k`, where `n_i = 0` stands for a free
/// factor `Z`; free coordinates are truncated to `|a|_1 <= level`.
pub fn group_ring(invariants: &[u64], level: Option<u32>) -> Result<BasedRing> {
    let free = invariants.iter().filter(|&&n| n == 0).count();
    if free > 0 && level.is_none() {
        return Err(Error::UnknownName(
            "free factors need a truncation level".into(),
        ));
    }
    if invariants.contains(&1) {
        return Err(Error::UnknownName("trivial cyclic factor".into()));
    }
    let lv = level.unwrap_or(0) as i64;
    let mut elems: Vec<Vec<i64>> = vec![vec![]];
    for &n in invariants {
        let range: Vec<i64> = if n == 0 {
            (-lv..=lv).collect()
        } else {
            (0..n as i64).collect()
        };
        elems = elems
            .into_iter()
            .flat_map(|e| {
                range.iter().map(move |&x| {
                    let mut f = e.clone();
                    f.push(x);
                    f
                })
            })
            .collect();
    }
    let free_norm = |e: &[i64]| -> i64 {
        e.iter()
            .zip(invariants)
            .filter(|(_, &n)| n == 0)
            .map(|(x, _)| x.abs())
            .sum()
    };
    elems.retain(|e| free_norm(e) <= lv);
    elems.sort_by_key(|e| (free_norm(e), e.clone()));
    let index = |e: &[i64]| elems.iter().position(|x| x == e);
    let combine = |a: &[i64], b: &[i64], sign: i64| -> Vec<i64> {
        a.iter()
            .zip(b)
            .zip(invariants)
            .map(|((x, y), &n)| {
                let s = x + sign * y;
                if n == 0 {
                    s
                } else {
                    s.rem_euclid(n as i64)
                }
            })
            .collect()
    };
    let zero = vec![0i64; invariants.len()];
    let mut constants = Vec::new();
    let mut dual = Vec::new();
    for (i, a) in elems.iter().enumerate() {
        dual.push(index(&combine(&zero, a, -1)).expect("truncation is symmetric"));
        for (j, b) in elems.iter().enumerate() {
            if let Some(k) = index(&combine(a, b, 1)) {
                constants.push((i, j, k, 1));
            }
        }
    }
    let basis = elems
        .iter()
        .map(|e| {
            let parts: Vec<String> = e.iter().map(|x| x.to_string()).collect();
            format!("g({})", parts.join(","))
        })
        .collect();
    let truncated = free > 0;
    BasedRing::new(
        basis,
        0,
        dual,
        constants,
        truncated,
        if truncated { level } else { None },
    )
}

fn split_args(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur).trim().to_string());
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

fn int_arg(name: &str, a: &str) -> Result<usize> {
    a.trim()
        .parse()
        .map_err(|_| Error::UnknownName(format!("{name}: bad argument {a:?}")))
}

/// Parse and build a catalog ring, e.g. `ver_p(5)`, `K_l(3)`,
/// `group_ring(8)`, `group_ring(0,2,level=3)`, `pgl2_trunc(4)`,
/// `product(ver_p_plus(5),group_ring(8))`.
pub fn catalog(spec: &str) -> Result<BasedRing> {
    let s = spec.trim();
    let (name, args) = match s.find('(') {
        Some(open) if s.ends_with(')') => (s[..open].trim(), split_args(&s[open + 1..s.len() - 1])),
        _ => match s.split_once(':') {
            Some((n, a)) => (n.trim(), split_args(a)),
            None => (s, Vec::new()),
        },
    };
    let one = || -> Result<usize> {
        match args.as_slice() {
            [a] => int_arg(name, a),
            _ => Err(Error::UnknownName(format!(
                "{name} takes one integer argument"
            ))),
        }
    };
    match name {
        "ver_p" => ver_p(one()?),
        "ver_p_plus" => ver_p_plus(one()?),
        "verlinde" => verlinde(one()?),
        "K_l" | "k_l" => k_l(one()?),
        "K_l_tilde" | "k_l_tilde" => k_l_tilde(one()?),
        "K_inf_trunc" | "k_inf_trunc" => k_inf_trunc(one()?),
        "sl2_trunc" => sl2_trunc(one()?),
        "pgl2_trunc" => pgl2_trunc(one()?),
        "osp12_trunc" => osp12_trunc(one()?),
        "group_ring" => {
            let mut inv = Vec::new();
            let mut level = None;
            for a in &args {
                match a.split_once('=') {
                    Some(("level", v)) => level = Some(int_arg(name, v)? as u32),
                    Some(_) => {
                        return Err(Error::UnknownName(format!(
                            "group_ring: bad argument {a:?}"
                        )))
                    }
                    // `Z4` and `C4` name the cyclic factor of order 4
                    None => {
                        inv.push(int_arg(name, a.trim().trim_start_matches(['Z', 'C']))? as u64)
                    }
                }
            }
            group_ring(&inv, level)
        }
        "product" => {
            if args.len() < 2 {
                return Err(Error::UnknownName(
                    "product takes at least two rings".into(),
                ));
            }
            let mut acc = catalog(&args[0])?;
            for a in &args[1..] {
                acc = acc.product_ring(&catalog(a)?)?;
            }
            Ok(acc)
        }
        _ => Err(Error::UnknownName(spec.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_catalog_rings() {
        let v3 = ver_p(3).unwrap();
        assert_eq!(v3.rank(), 2);
        assert_eq!(v3.product(1, 1), Some(&[(0, 1)][..]));
        let k3 = k_l(3).unwrap();
        assert_eq!(k3.rank(), 4);
        assert_eq!(k3.product(1, 3), Some(&[(2, 1)][..]));
        assert_eq!(k3.product(1, 2), Some(&[(1, 1), (2, 1), (3, 1)][..]));
        let kt = k_l_tilde(3).unwrap();
        assert_eq!(kt.product(1, 3), Some(&[(2, 1), (3, 1)][..]));
        for name in [
            "ver_p(7)",
            "ver_p_plus(7)",
            "K_l(4)",
            "K_l_tilde(2)",
            "K_inf_trunc(4)",
            "sl2_trunc(5)",
            "pgl2_trunc(3)",
            "osp12_trunc(3)",
            "group_ring(0,3,level=2)",
            "product(ver_p_plus(5),group_ring(8))",
        ] {
            let r = catalog(name).unwrap();
            let rep = r.validate();
            assert!(rep.ok, "{name}: {:?}", rep.violations);
        }
        assert_eq!(
            catalog("product(ver_p_plus(5),group_ring(8))")
                .unwrap()
                .rank(),
            16
        );
        assert_eq!(
            catalog("group_ring:Z4").unwrap(),
            group_ring(&[4], None).unwrap()
        );
        assert!(matches!(catalog("E8"), Err(Error::UnknownName(_))));
    }

    #[test]
    fn truncated_rings_report_skips() {
        let r = k_inf_trunc(3).unwrap();
        let rep = r.validate();
        assert!(rep.ok);
        assert!(rep.skipped > 0);
        assert!(!rep.skipped_examples.is_empty());
    }
}
