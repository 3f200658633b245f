use crate::error::{Error, Result};
use crate::exact_linalg::{Field, Fq, Mat};
use crate::groups::GroupRef;
use crate::modrep::{GModule, ModuleJson};

/// Build a named generator module: `trivial`, `sign`, `perm`, `regular`,
/// `jordan:k`, `perm_mod_constants`, `sum_zero`, `sum_zero_mod_constants`,
/// `subsets:k` (permutation module on k-subsets of the moved points),
/// `specht:k` (two-row Specht module for the partition (n-k, k)),
/// `heller:n` (Ω^n of the trivial module, p-groups only), or `@path` for a
/// module JSON file.
pub fn generator_module(spec: &str, group: &GroupRef, field: &Fq) -> Result<GModule> {
    let s = spec.trim();
    if let Some(path) = s.strip_prefix('@') {
        let text = std::fs::read_to_string(path)?;
        let j: ModuleJson = serde_json::from_str(&text)?;
        let m = j.to_module_over(group)?;
        if m.field() != field {
            return Err(Error::FieldMismatch);
        }
        return Ok(m);
    }
    let (name, arg) = match s.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (s, None),
    };
    let int = || -> Result<i64> {
        arg.ok_or_else(|| Error::UnknownName(format!("{name} needs an argument")))?
            .trim()
            .parse()
            .map_err(|_| Error::UnknownName(format!("bad argument in {s:?}")))
    };
    match name {
        "trivial" => Ok(GModule::trivial(group, field)),
        "sign" => Ok(GModule::sign(group, field)),
        "perm" | "permutation" => Ok(GModule::permutation(group, field)),
        "regular" => Ok(GModule::regular(group, field)),
        "jordan" => GModule::jordan(group, field, int()? as usize),
        "perm_mod_constants" => GModule::perm_mod_constants(group, field),
        "sum_zero" => GModule::sum_zero(group, field),
        "sum_zero_mod_constants" => GModule::sum_zero_mod_constants(group, field),
        "subsets" => subset_module(group, field, int()? as usize),
        "specht" => two_row_specht(group, field, int()? as usize),
        "heller" => heller_power(&GModule::trivial(group, field), int()?),
        _ => Err(Error::UnknownName(format!("generator {s:?}"))),
    }
}

/// `Ω^n(a)` for any integer n, on a p-group.
pub fn heller_power(a: &GModule, n: i64) -> Result<GModule> {
    let mut m = a.clone();
    for _ in 0..n.unsigned_abs() {
        m = if n > 0 {
            m.heller_shift()?
        } else {
            m.heller_inverse()?
        };
    }
    Ok(m)
}

/// Permutation module on the k-element subsets of the moved points.
pub fn subset_module(group: &GroupRef, field: &Fq, k: usize) -> Result<GModule> {
    let n = group.degree();
    if k > n {
        return Err(Error::InvalidModule(format!(
            "no {k}-subsets of {n} points"
        )));
    }
    let subsets: Vec<u64> = (0u64..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .collect();
    let index: std::collections::HashMap<u64, usize> =
        subsets.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let d = subsets.len();
    let gens = group
        .generators()
        .iter()
        .map(|g| {
            let mut m = Mat::zeros(field, d, d);
            for (j, &s) in subsets.iter().enumerate() {
                let image = (0..n)
                    .filter(|&x| s >> x & 1 == 1)
                    .fold(0u64, |acc, x| acc | 1 << g.apply(x));
                m.set(index[&image], j, field.one());
            }
            m
        })
        .collect();
    GModule::new(group, field, d, gens)
}

/// Specht module `S^(n-k,k)` inside the permutation module on k-subsets,
/// spanned by the polytabloids `Σ_S (-1)^|S| {b_i for i ∉ S, a_i for i ∈ S}`
/// over disjoint column pairs `(a_i, b_i)`.
pub fn two_row_specht(group: &GroupRef, field: &Fq, k: usize) -> Result<GModule> {
    let n = group.degree();
    if 2 * k > n {
        return Err(Error::InvalidModule(format!(
            "(n-k, k) is not a partition for n = {n}, k = {k}"
        )));
    }
    let perm = subset_module(group, field, k)?;
    let subsets: Vec<u64> = (0u64..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .collect();
    let mut cols: Vec<Vec<u32>> = Vec::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    fn walk(
        n: usize,
        k: usize,
        used: u64,
        pairs: &mut Vec<(usize, usize)>,
        emit: &mut dyn FnMut(&[(usize, usize)]),
    ) {
        if pairs.len() == k {
            emit(pairs);
            return;
        }
        for a in 0..n {
            for b in 0..n {
                if a != b && used >> a & 1 == 0 && used >> b & 1 == 0 {
                    pairs.push((a, b));
                    walk(n, k, used | 1 << a | 1 << b, pairs, emit);
                    pairs.pop();
                }
            }
        }
    }
    walk(n, k, 0, &mut pairs, &mut |ps| {
        let mut v = vec![field.zero(); subsets.len()];
        for swap in 0u64..1 << k {
            let set = ps.iter().enumerate().fold(0u64, |acc, (i, &(a, b))| {
                acc | 1 << if swap >> i & 1 == 1 { a } else { b }
            });
            let idx = subsets.iter().position(|&m| m == set).expect("k-subset");
            let sign = if swap.count_ones() % 2 == 1 {
                field.from_int(-1)
            } else {
                field.one()
            };
            v[idx] = field.add(&v[idx], &sign);
        }
        cols.push(v);
    });
    let basis = Mat::from_cols(field, subsets.len(), &cols).column_space();
    GModule::from_rep(group, perm.rep().submodule(&basis)?)
}
