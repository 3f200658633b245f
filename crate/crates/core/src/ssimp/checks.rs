use super::{generator_module, semisimplify, FusionRun, RunOptions};
use crate::basedring::{group_ring, is_isomorphism, iso_search, ver_p_plus, IsoOptions};
use crate::decomp::{decompose, DecompOptions};
use crate::error::{Error, Result};
use crate::exact_linalg::Fq;
use crate::groups::{catalog, GroupRef, Subgroup};
use crate::modrep::{subgroup_group, GModule};
use serde::{Deserialize, Serialize};

/// Result of [`verify_restriction_descent`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentReport {
    pub index: usize,
    pub index_coprime_to_p: bool,
    pub simples_checked: usize,
    pub negligibles_checked: usize,
    pub violations: Vec<String>,
}

impl DescentReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Restrict every simple and every negligible indecomposable of a run to
/// `h`: negligibles must restrict to negligibles, simples must keep a
/// summand of nonzero dimension.
pub fn verify_restriction_descent(
    run: &FusionRun,
    h: &Subgroup,
    opts: &DecompOptions,
) -> Result<DescentReport> {
    let g = &run.group;
    let p = run.field.p() as usize;
    let index = g.order() / h.order();
    let target = subgroup_group(g, h, "H")?;
    let mut rep = DescentReport {
        index,
        index_coprime_to_p: !index.is_multiple_of(p),
        ..Default::default()
    };
    if !rep.index_coprime_to_p {
        log::warn!("index {index} is divisible by p = {p}; the check is empirical only");
    }
    for (k, r) in run.negligibles.records().iter().enumerate() {
        let dec = decompose(&r.module.restrict(h, &target)?, opts)?;
        rep.negligibles_checked += 1;
        for s in &dec.summands {
            if s.module.dim_mod_p() != 0 {
                rep.violations.push(format!(
                    "negligible {} (dim {}) restricts with a summand of dim {}",
                    run.negligibles.label_of(k),
                    r.dim(),
                    s.module.dim()
                ));
                break;
            }
        }
    }
    for (k, r) in run.simples.records().iter().enumerate() {
        let dec = decompose(&r.module.restrict(h, &target)?, opts)?;
        rep.simples_checked += 1;
        if dec.summands.iter().all(|s| s.module.dim_mod_p() == 0) {
            rep.violations.push(format!(
                "simple {} restricts to a negligible module",
                run.simples.label_of(k)
            ));
        }
    }
    Ok(rep)
}

/// The unique summand of nonzero dimension of `x` restricted to `n`
/// (given with its permutation group `n_group`).
pub fn green_correspondent(
    x: &GModule,
    n: &Subgroup,
    n_group: &GroupRef,
    opts: &DecompOptions,
) -> Result<GModule> {
    if x.dim_mod_p() == 0 {
        return Err(Error::NegligibleInput);
    }
    let dec = decompose(&x.restrict(n, n_group)?, opts)?;
    let mut live: Vec<GModule> = dec
        .summands
        .into_iter()
        .map(|s| s.module)
        .filter(|m| m.dim_mod_p() != 0)
        .collect();
    if live.len() != 1 {
        return Err(Error::NotUnique { count: live.len() });
    }
    Ok(live.pop().expect("one summand"))
}

/// Result of [`verify_equivalence`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub simples_g: usize,
    pub simples_n: usize,
    /// `bijection[i]` is the N-simple corresponding to G-simple `i`.
    pub bijection: Vec<Option<usize>>,
    pub labels: Vec<(String, Option<String>)>,
    pub constants_agree: bool,
    pub verdict: bool,
    pub problems: Vec<String>,
}

/// Green correspondence on simples must be a bijection transporting every
/// structure constant. `run_n` must be a run over the permutation group of
/// `n` (as built by `subgroup_group`).
pub fn verify_equivalence(
    run_g: &FusionRun,
    run_n: &FusionRun,
    n: &Subgroup,
) -> Result<EquivalenceReport> {
    let mut rep = EquivalenceReport {
        simples_g: run_g.num_simples(),
        simples_n: run_n.num_simples(),
        ..Default::default()
    };
    if run_g.field != run_n.field {
        rep.problems.push("runs over different fields".into());
        return Ok(rep);
    }
    if !run_g.closed || !run_n.closed {
        rep.problems.push("both runs must be closed".into());
    }
    let opts = run_g.options.decomp();
    for r in run_g.simples.records() {
        let target = match green_correspondent(&r.module, n, &run_n.group, &opts) {
            Ok(y) => run_n.simples.lookup(&y)?.map(|(k, _)| k),
            Err(Error::NotUnique { count }) => {
                rep.problems.push(format!(
                    "{}: {count} summands of nonzero dimension",
                    r.label
                ));
                None
            }
            Err(e) => return Err(e),
        };
        if target.is_none() {
            rep.problems.push(format!(
                "{} has no correspondent among the N-simples",
                r.label
            ));
        }
        rep.labels.push((
            r.label.clone(),
            target.map(|k| run_n.simples.label_of(k).to_string()),
        ));
        rep.bijection.push(target);
    }
    let mut hit = vec![false; rep.simples_n];
    let mut injective = true;
    for &t in rep.bijection.iter().flatten() {
        injective &= !std::mem::replace(&mut hit[t], true);
    }
    let bijective =
        injective && rep.bijection.iter().all(Option::is_some) && hit.iter().all(|&h| h);
    if !bijective {
        rep.problems
            .push("correspondence is not a bijection".into());
    } else {
        let sigma: Vec<usize> = rep
            .bijection
            .iter()
            .map(|x| x.expect("bijective"))
            .collect();
        rep.constants_agree = is_isomorphism(&run_g.ring()?, &run_n.ring()?, &sigma);
        if !rep.constants_agree {
            rep.problems
                .push("structure constants are not transported".into());
        }
    }
    rep.verdict = rep.problems.is_empty();
    Ok(rep)
}

/// Smallest p-subgroup (up to conjugacy) relative to which `x` is
/// projective, by Higman's criterion.
pub fn vertex(x: &GModule, p: u64) -> Result<Subgroup> {
    let mut cands = x.group().p_subgroups_up_to_conjugacy(p)?;
    cands.sort_by_key(|h| h.order());
    for h in cands {
        if x.higman_projective(&h)? {
            return Ok(h);
        }
    }
    Err(Error::Mismatch(
        "no p-subgroup candidate is a vertex".into(),
    ))
}

/// Semisimplify over the subgroup `h` from the restrictions of the
/// generators of `run`.
pub fn restricted_run(run: &FusionRun, h: &Subgroup, name: &str) -> Result<FusionRun> {
    let hg = subgroup_group(&run.group, h, name)?;
    let gens = run
        .generator_names
        .iter()
        .zip(&run.generators)
        .map(|(s, m)| Ok((s.clone(), m.restrict(h, &hg)?)))
        .collect::<Result<Vec<_>>>()?;
    semisimplify(&hg, &run.field, &gens, &run.options)
}

/// Vertex of one simple of a run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexRow {
    pub simple: String,
    pub dim: usize,
    pub vertex_order: usize,
    pub is_sylow: bool,
}

/// Vertex of every simple of `run`, compared with the Sylow p-subgroup.
pub fn vertex_sweep(run: &FusionRun) -> Result<Vec<VertexRow>> {
    let p = run.field.p() as u64;
    let sylow = run.group.sylow(p).order();
    let labels = run.ring()?.basis().to_vec();
    (0..run.num_simples())
        .map(|k| {
            let v = vertex(run.module(k), p)?;
            Ok(VertexRow {
                simple: labels[k].clone(),
                dim: run.module(k).dim(),
                vertex_order: v.order(),
                is_sylow: v.order() == sylow,
            })
        })
        .collect()
}

/// Result of [`sp_image_check`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpReport {
    pub p: u64,
    pub simples: usize,
    pub closed: bool,
    pub index_v_pm1: Option<usize>,
    pub index_v_pm2: Option<usize>,
    /// Order of the image of V_{p-1} in the ring.
    pub chi_order: Option<usize>,
    /// Isomorphism onto Ver_p^+ ⊠ Z[Z/2(p-1)] with the two pins.
    pub isomorphism: Option<Vec<usize>>,
    pub verdict: bool,
}

/// Semisimplify S_p over GF(p) from `V_{p-1}` (permutation module modulo
/// constants) and `V_{p-2}` (sum-zero vectors modulo constants), and match
/// the ring with `Ver_p^+ ⊠ Z[Z/2(p-1)]` sending `V_{p-1}` to a generator
/// `χ` and `V_{p-2}` to `L_{p-2} χ^{p-1}`.
pub fn sp_image_check(p: u64, opts: &RunOptions) -> Result<SpReport> {
    let g = catalog(&format!("symmetric:{p}"))?;
    let f = Fq::prime(p)?;
    let v1 = generator_module("perm_mod_constants", &g, &f)?;
    let v2 = generator_module("sum_zero_mod_constants", &g, &f)?;
    let run = semisimplify(
        &g,
        &f,
        &[
            ("perm_mod_constants".into(), v1.clone()),
            ("sum_zero_mod_constants".into(), v2.clone()),
        ],
        opts,
    )?;
    let ring = run.ring()?;
    let i1 = run.class_of(&v1)?;
    let i2 = run.class_of(&v2)?;
    let chi_order = i1.and_then(|i| ring.order(i));
    let m = 2 * (p as usize - 1);
    let target = ver_p_plus(p as usize)?.product_ring(&group_ring(&[m as u64], None)?)?;
    let chi = target
        .index_of(&format!("L1.g({})", 1))
        .ok_or_else(|| Error::Mismatch("target ring lacks χ".into()))?;
    let l_chi = target
        .index_of(&format!("L{}.g({})", p - 2, p - 1))
        .ok_or_else(|| Error::Mismatch("target ring lacks L_(p-2) χ^(p-1)".into()))?;
    let isomorphism = match (i1, i2, run.closed) {
        (Some(a), Some(b), true) => iso_search(
            &ring,
            &target,
            &IsoOptions::with_pins(vec![(a, chi), (b, l_chi)]),
        )?,
        _ => None,
    };
    Ok(SpReport {
        p,
        simples: run.num_simples(),
        closed: run.closed,
        index_v_pm1: i1,
        index_v_pm2: i2,
        chi_order,
        verdict: isomorphism.is_some() && chi_order == Some(m),
        isomorphism,
    })
}
