use super::{GroupRef, Perm, PermGroup};
use crate::error::{Error, Result};
use crate::exact_linalg::is_prime;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// A group literal: a catalog name or explicit 1-based generator cycles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Name(String),
    Generators { generators: Vec<Vec<Vec<u32>>> },
}

impl GroupSpec {
    pub fn build(&self) -> Result<GroupRef> {
        match self {
            GroupSpec::Name(n) => catalog(n),
            GroupSpec::Generators { generators } => {
                Ok(Arc::new(PermGroup::from_cycles("G", generators)?))
            }
        }
    }

    /// Accepts either JSON (`{"generators": ...}` or a quoted name) or a
    /// bare catalog name.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.starts_with('{') || t.starts_with('"') {
            Ok(serde_json::from_str(t)?)
        } else {
            Ok(GroupSpec::Name(t.to_string()))
        }
    }
}

fn split_top_level(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
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

fn parse_name(s: &str) -> (String, Vec<String>) {
    let s = s.trim();
    if let Some(open) = s.find('(') {
        if s.ends_with(')') && s.find(':').is_none_or(|c| c > open) {
            return (
                s[..open].trim().to_string(),
                split_top_level(&s[open + 1..s.len() - 1]),
            );
        }
    }
    if let Some(c) = s.find(':') {
        return (s[..c].trim().to_string(), split_top_level(&s[c + 1..]));
    }
    // short forms: S5, A4, Z5, C5, D5, V4
    let (head, tail) = s.split_at(s.find(|c: char| c.is_ascii_digit()).unwrap_or(s.len()));
    let long = match head {
        "S" => "symmetric",
        "A" => "alternating",
        "Z" | "C" => "cyclic",
        "D" => "dihedral",
        "V" if tail == "4" => return ("klein_four".into(), Vec::new()),
        _ => return (s.to_string(), Vec::new()),
    };
    if tail.is_empty() {
        return (s.to_string(), Vec::new());
    }
    (long.to_string(), vec![tail.to_string()])
}

fn one_int(name: &str, args: &[String]) -> Result<usize> {
    match args {
        [a] => a
            .parse()
            .map_err(|_| Error::UnknownName(format!("{name}: bad argument {a:?}"))),
        _ => Err(Error::UnknownName(format!(
            "{name} takes one integer argument"
        ))),
    }
}

fn cycle(points: impl IntoIterator<Item = u32>) -> Vec<u32> {
    points.into_iter().collect()
}

fn named(name: String, spec: &str, degree: usize, gens: Vec<Vec<Vec<u32>>>) -> Result<GroupRef> {
    let perms = gens
        .iter()
        .map(|c| Perm::from_cycles(degree, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(Arc::new(PermGroup::enumerate(
        &name,
        GroupSpec::Name(spec.to_string()),
        degree,
        perms,
    )?))
}

/// Build a named group: `cyclic:n`, `dihedral:n`, `symmetric:n`,
/// `alternating:n`, `klein_four`, `frobenius:p`, `direct_product(a,b)`,
/// plus the short forms `Zn`, `Cn`, `Dn`, `Sn`, `An`, `V4`.
pub fn catalog(spec: &str) -> Result<GroupRef> {
    let (name, args) = parse_name(spec);
    match name.as_str() {
        "cyclic" => {
            let n = one_int(&name, &args)?;
            let gens = if n > 1 {
                vec![vec![cycle(1..=n as u32)]]
            } else {
                vec![]
            };
            named(format!("Z{n}"), spec, n.max(1), gens)
        }
        "dihedral" => {
            let n = one_int(&name, &args)?;
            if n < 2 {
                return Err(Error::UnknownName("dihedral needs n >= 2".into()));
            }
            let refl: Vec<Vec<u32>> = (1..=n as u32 / 2)
                .map(|i| vec![i, n as u32 + 1 - i])
                .collect();
            named(
                format!("D{n}"),
                spec,
                n,
                vec![vec![cycle(1..=n as u32)], refl],
            )
        }
        "symmetric" => {
            let n = one_int(&name, &args)?;
            let gens = match n {
                0 | 1 => vec![],
                2 => vec![vec![vec![1, 2]]],
                _ => vec![vec![vec![1, 2]], vec![cycle(1..=n as u32)]],
            };
            named(format!("S{n}"), spec, n.max(1), gens)
        }
        "alternating" => {
            let n = one_int(&name, &args)?;
            let gens = match n {
                0..=2 => vec![],
                3 => vec![vec![vec![1, 2, 3]]],
                _ if n % 2 == 1 => vec![vec![vec![1, 2, 3]], vec![cycle(1..=n as u32)]],
                _ => vec![vec![vec![1, 2, 3]], vec![cycle(2..=n as u32)]],
            };
            named(format!("A{n}"), spec, n.max(1), gens)
        }
        "klein_four" => named(
            "V4".into(),
            spec,
            4,
            vec![vec![vec![1, 2], vec![3, 4]], vec![vec![1, 3], vec![2, 4]]],
        ),
        "frobenius" => {
            let p = one_int(&name, &args)?;
            if !is_prime(p as u64) {
                return Err(Error::NonPrimeModulus(p as u64));
            }
            // points 1..=p stand for residues 0..p-1
            let a = primitive_root(p);
            let mul: Perm = Perm((0..p).map(|x| ((x * a) % p) as u32).collect());
            let gens = vec![vec![cycle(1..=p as u32)], mul.cycles()];
            named(format!("F{}", p * (p - 1)), spec, p, gens)
        }
        "direct_product" => {
            if args.len() != 2 {
                return Err(Error::UnknownName("direct_product takes two groups".into()));
            }
            let a = catalog(&args[0])?;
            let b = catalog(&args[1])?;
            let shift = a.degree() as u32;
            let mut gens: Vec<Vec<Vec<u32>>> = a.generators().iter().map(|g| g.cycles()).collect();
            for g in b.generators() {
                gens.push(
                    g.cycles()
                        .into_iter()
                        .map(|c| c.into_iter().map(|x| x + shift).collect())
                        .collect(),
                );
            }
            named(
                format!("{}x{}", a.name(), b.name()),
                spec,
                a.degree() + b.degree(),
                gens,
            )
        }
        _ => Err(Error::UnknownName(spec.to_string())),
    }
}

fn primitive_root(p: usize) -> usize {
    if p == 2 {
        return 1;
    }
    (2..p)
        .find(|&g| {
            let mut x = 1;
            (1..p - 1).all(|_| {
                x = x * g % p;
                x != 1
            })
        })
        .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_orders() {
        assert_eq!(catalog("frobenius:5").unwrap().order(), 20);
        assert_eq!(
            catalog("direct_product(symmetric:2,symmetric:3)")
                .unwrap()
                .order(),
            12
        );
        assert_eq!(catalog("dihedral(5)").unwrap().order(), 10);
        assert_eq!(catalog("S3").unwrap().order(), 6);
        assert_eq!(catalog("alternating:5").unwrap().order(), 60);
        assert_eq!(catalog("alternating:4").unwrap().order(), 12);
        assert_eq!(catalog("cyclic:1").unwrap().order(), 1);
        assert!(matches!(catalog("monster"), Err(Error::UnknownName(_))));
    }

    #[test]
    fn literal_parsing() {
        let s = GroupSpec::parse(r#"{"generators": [[[1,2]], [[1,2,3,4,5]]]}"#).unwrap();
        assert_eq!(s.build().unwrap().order(), 120);
        assert_eq!(
            GroupSpec::parse("cyclic:5")
                .unwrap()
                .build()
                .unwrap()
                .order(),
            5
        );
    }
}
