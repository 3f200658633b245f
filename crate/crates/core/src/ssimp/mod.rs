//! Semisimplification of Rep_k(G): breadth-first generation of the fusion
//! ring spanned by given modules, and checks of the functors between
//! semisimplifications (restriction descent, Green correspondence,
//! equivalence with the Sylow normalizer, vertices).

mod checks;
mod generators;

pub use checks::{
    green_correspondent, restricted_run, sp_image_check, verify_equivalence,
    verify_restriction_descent, vertex, vertex_sweep, DescentReport, EquivalenceReport, SpReport,
    VertexRow,
};
pub use generators::{generator_module, heller_power, subset_module, two_row_specht};

pub use crate::basedring::Budget;
use crate::basedring::{closure, BasedRing, BasedRingJson, FusionOracle, Summand};
use crate::decomp::{decompose, DecompOptions, Decomposition, Registry};
use crate::error::{Error, Result};
use crate::exact_linalg::Fq;
use crate::groups::{GroupRef, GroupSpec};
use crate::modrep::GModule;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub budget: Budget,
    pub seed: u64,
    /// Worker threads for the tensor decompositions of one layer.
    pub jobs: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            budget: Budget::default(),
            seed: 0,
            jobs: 1,
        }
    }
}

impl RunOptions {
    pub fn with_seed(seed: u64) -> Self {
        RunOptions {
            seed,
            ..Default::default()
        }
    }

    pub fn decomp(&self) -> DecompOptions {
        DecompOptions {
            allow_extension: false,
            ..DecompOptions::with_seed(self.seed)
        }
    }
}

const NEGLIGIBLE_CAP: usize = 256;

/// The outcome of [`semisimplify`]: the simple objects reached (registry
/// index 0 is the unit), their duals and the structure constants of every
/// product computed.
#[derive(Clone, Debug)]
pub struct FusionRun {
    pub group: GroupRef,
    pub field: Fq,
    pub generator_names: Vec<String>,
    pub generators: Vec<GModule>,
    pub options: RunOptions,
    pub simples: Registry,
    /// Indecomposables of dimension divisible by p met during the run.
    pub negligibles: Registry,
    pub word_length: Vec<usize>,
    pub duals: Vec<usize>,
    pub products: BTreeMap<(usize, usize), Vec<(usize, u64)>>,
    pub closed: bool,
    pub stop_reason: Option<String>,
}

struct ModuleOracle {
    unit: GModule,
    simples: Registry,
    negligibles: Registry,
    dopts: DecompOptions,
    jobs: usize,
}

fn summands(dec: Decomposition) -> Vec<Summand<GModule>> {
    dec.summands
        .into_iter()
        .map(|s| Summand {
            negligible: s.module.dim_mod_p() == 0,
            object: s.module,
        })
        .collect()
}

impl FusionOracle for ModuleOracle {
    type Obj = GModule;

    fn unit(&self) -> GModule {
        self.unit.clone()
    }

    fn lookup(&self, x: &GModule) -> Result<Option<usize>> {
        Ok(self.simples.lookup(x)?.map(|(k, _)| k))
    }

    fn register(&mut self, x: GModule) -> Result<usize> {
        Ok(self.simples.insert(&x)?.0)
    }

    fn object(&self, i: usize) -> &GModule {
        &self.simples.record(i).module
    }

    fn dual(&self, x: &GModule) -> Result<GModule> {
        Ok(x.dual())
    }

    fn split(&self, x: &GModule) -> Result<Vec<Summand<GModule>>> {
        Ok(summands(decompose(x, &self.dopts)?))
    }

    fn size(&self, x: &GModule) -> usize {
        x.dim()
    }

    fn products(&self, pairs: &[(usize, usize)]) -> Vec<Result<Vec<Summand<GModule>>>> {
        let modules: Vec<Result<GModule>> = pairs
            .iter()
            .map(|&(i, j)| self.object(i).tensor(self.object(j)))
            .collect();
        decompose_all(modules, &self.dopts, self.jobs)
            .into_iter()
            .map(|r| r.map(summands))
            .collect()
    }

    fn note_negligible(&mut self, x: &GModule) -> Result<()> {
        if self.negligibles.len() < NEGLIGIBLE_CAP {
            self.negligibles.insert(x)?;
        }
        Ok(())
    }

    fn commutative(&self) -> bool {
        true
    }
}

fn decompose_all(
    modules: Vec<Result<GModule>>,
    opts: &DecompOptions,
    jobs: usize,
) -> Vec<Result<Decomposition>> {
    let one = |m: &Result<GModule>| {
        m.as_ref()
            .map_err(Clone::clone)
            .and_then(|m| decompose(m, opts))
    };
    if jobs <= 1 || modules.len() <= 1 {
        return modules.iter().map(one).collect();
    }
    let chunk = modules.len().div_ceil(jobs);
    std::thread::scope(|s| {
        let handles: Vec<_> = modules
            .chunks(chunk)
            .map(|c| s.spawn(move || c.iter().map(one).collect::<Vec<_>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("decomposition worker panicked"))
            .collect()
    })
}

/// Semisimplification by word-length closure (see
/// [`crate::basedring::closure`]): simples are the summands of dimension
/// prime to p of words in the generators and their duals.
///
/// When a summand is not absolutely indecomposable over the given field
/// the whole run restarts over the required extension.
pub fn semisimplify(
    group: &GroupRef,
    field: &Fq,
    generators: &[(String, GModule)],
    opts: &RunOptions,
) -> Result<FusionRun> {
    let mut cur_field = field.clone();
    loop {
        let gens = generators
            .iter()
            .map(|(_, m)| {
                if cur_field == *field {
                    Ok(m.clone())
                } else {
                    m.extend_field(&cur_field)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        match semisimplify_fixed(group, &cur_field, generators, gens, opts) {
            Err(Error::NeedsExtension(t)) => {
                if t > 8 || t <= cur_field.degree() {
                    return Err(Error::ExtensionCapExceeded { cap: 8 });
                }
                cur_field = Fq::new(field.p() as u64, t)?;
            }
            other => return other,
        }
    }
}

fn semisimplify_fixed(
    group: &GroupRef,
    field: &Fq,
    generators: &[(String, GModule)],
    gens: Vec<GModule>,
    opts: &RunOptions,
) -> Result<FusionRun> {
    for g in &gens {
        if **g.group() != **group {
            return Err(Error::Mismatch("generator over a different group".into()));
        }
        if g.field() != field {
            return Err(Error::FieldMismatch);
        }
    }
    let mut oracle = ModuleOracle {
        unit: GModule::trivial(group, field),
        simples: Registry::new(group, field),
        negligibles: Registry::new(group, field),
        dopts: opts.decomp(),
        jobs: opts.jobs,
    };
    let c = closure(&mut oracle, &gens, opts.budget)?;
    Ok(FusionRun {
        group: group.clone(),
        field: field.clone(),
        generator_names: generators.iter().map(|(n, _)| n.clone()).collect(),
        generators: gens,
        options: opts.clone(),
        simples: oracle.simples,
        negligibles: oracle.negligibles,
        word_length: c.word_length,
        duals: c.duals,
        products: c.products,
        closed: c.closed,
        stop_reason: c.stop_reason,
    })
}

/// Provenance block of a serialized run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub group: GroupSpec,
    pub prime: u64,
    pub field_degree: u32,
    pub generators: Vec<String>,
    pub budget: Budget,
    pub seed: u64,
    pub closed: bool,
    pub simple_dims: Vec<usize>,
    pub word_lengths: Vec<usize>,
}

/// A run as based-ring JSON plus provenance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FusionRunJson {
    pub basis: Vec<String>,
    pub unit: usize,
    pub dual: Vec<usize>,
    pub constants: Vec<[u64; 4]>,
    pub truncated: bool,
    pub level: Option<u32>,
    pub provenance: Provenance,
}

impl FusionRunJson {
    pub fn ring(&self) -> Result<BasedRing> {
        BasedRing::from_json(&BasedRingJson {
            basis: self.basis.clone(),
            unit: self.unit,
            dual: self.dual.clone(),
            constants: self.constants.clone(),
            truncated: self.truncated,
            level: self.level,
        })
    }
}

impl FusionRun {
    pub fn num_simples(&self) -> usize {
        self.simples.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.simples.records().iter().map(|r| r.dim()).collect()
    }

    pub fn module(&self, k: usize) -> &GModule {
        &self.simples.record(k).module
    }

    /// The computed fusion ring; truncated at the word-length budget when
    /// the run did not close.
    pub fn ring(&self) -> Result<BasedRing> {
        let constants = self
            .products
            .iter()
            .flat_map(|(&(i, j), row)| row.iter().map(move |&(k, v)| (i, j, k, v)));
        let truncated = !self.closed;
        BasedRing::new(
            self.simples
                .records()
                .iter()
                .map(|r| r.label.clone())
                .collect(),
            0,
            self.duals.clone(),
            constants,
            truncated,
            truncated.then_some(self.options.budget.max_word_length as u32),
        )
    }

    /// The simple class of a module with exactly one summand of nonzero
    /// dimension.
    pub fn class_of(&self, m: &GModule) -> Result<Option<usize>> {
        let m = if m.field() == &self.field {
            m.clone()
        } else {
            m.extend_field(&self.field)?
        };
        let dec = decompose(&m, &self.options.decomp())?;
        let live: Vec<&GModule> = dec
            .summands
            .iter()
            .map(|s| &s.module)
            .filter(|x| x.dim_mod_p() != 0)
            .collect();
        match live.as_slice() {
            [x] => Ok(self.simples.lookup(x)?.map(|(k, _)| k)),
            _ => Ok(None),
        }
    }

    pub fn to_json(&self) -> Result<FusionRunJson> {
        let r = self.ring()?.to_json();
        Ok(FusionRunJson {
            basis: r.basis,
            unit: r.unit,
            dual: r.dual,
            constants: r.constants,
            truncated: r.truncated,
            level: r.level,
            provenance: Provenance {
                group: self.group.spec().clone(),
                prime: self.field.p() as u64,
                field_degree: self.field.degree(),
                generators: self.generator_names.clone(),
                budget: self.options.budget,
                seed: self.options.seed,
                closed: self.closed,
                simple_dims: self.dims(),
                word_lengths: self.word_length.clone(),
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basedring::{group_ring, iso_search, ver_p, IsoOptions};
    use crate::groups::catalog;

    fn run(group: &str, p: u64, gens: &[&str], opts: &RunOptions) -> FusionRun {
        let g = catalog(group).unwrap();
        let f = Fq::prime(p).unwrap();
        let gs: Vec<(String, GModule)> = gens
            .iter()
            .map(|s| (s.to_string(), generator_module(s, &g, &f).unwrap()))
            .collect();
        semisimplify(&g, &f, &gs, opts).unwrap()
    }

    #[test]
    fn cyclic_five_gives_verlinde() {
        let r = run("cyclic:5", 5, &["jordan:2"], &RunOptions::default());
        assert!(r.closed);
        assert_eq!(r.num_simples(), 4);
        let ring = r.ring().unwrap();
        assert!(ring.validate().ok);
        assert!(
            iso_search(&ring, &ver_p(5).unwrap(), &IsoOptions::default())
                .unwrap()
                .is_some()
        );
        let json = serde_json::to_string(&r.to_json().unwrap()).unwrap();
        let back: FusionRunJson = serde_json::from_str(&json).unwrap();
        assert_eq!(back.ring().unwrap(), ring);
    }

    #[test]
    fn s3_mod_3_is_cyclic_of_order_four() {
        let r = run(
            "symmetric:3",
            3,
            &["perm_mod_constants", "sum_zero_mod_constants"],
            &RunOptions::default(),
        );
        assert!(r.closed);
        assert_eq!(r.num_simples(), 4);
        let ring = r.ring().unwrap();
        assert!(iso_search(
            &ring,
            &group_ring(&[4], None).unwrap(),
            &IsoOptions::default()
        )
        .unwrap()
        .is_some());
    }

    #[test]
    fn parallel_run_is_identical() {
        let a = run("cyclic:7", 7, &["jordan:2"], &RunOptions::default());
        let b = run(
            "cyclic:7",
            7,
            &["jordan:2"],
            &RunOptions {
                jobs: 3,
                ..Default::default()
            },
        );
        assert_eq!(
            serde_json::to_string(&a.to_json().unwrap()).unwrap(),
            serde_json::to_string(&b.to_json().unwrap()).unwrap()
        );
    }

    #[test]
    fn klein_four_partial_run() {
        let opts = RunOptions {
            budget: Budget {
                max_word_length: 2,
                ..Default::default()
            },
            ..Default::default()
        };
        let r = run("klein_four", 2, &["heller:1"], &opts);
        assert!(!r.closed);
        let ring = r.ring().unwrap();
        assert_eq!(r.dims(), vec![1, 3, 3, 5, 5]);
        for i in 0..ring.rank() {
            if let Some(row) = ring.product(i, ring.dual(i)) {
                assert_eq!(row, &[(ring.unit(), 1)][..]);
            }
        }
    }

    #[test]
    fn specht_module_has_expected_dimension() {
        let g = catalog("symmetric:5").unwrap();
        let f = Fq::prime(3).unwrap();
        let m = generator_module("specht:2", &g, &f).unwrap();
        assert_eq!(m.dim(), 5);
        m.validate().unwrap();
        assert_eq!(generator_module("subsets:2", &g, &f).unwrap().dim(), 10);
    }

    #[test]
    fn s3_equivalence_with_normalizer() {
        let g = catalog("symmetric:3").unwrap();
        let f = Fq::prime(3).unwrap();
        let opts = RunOptions::default();
        let gens: Vec<(String, GModule)> = ["perm_mod_constants", "sign"]
            .iter()
            .map(|s| (s.to_string(), generator_module(s, &g, &f).unwrap()))
            .collect();
        let rg = semisimplify(&g, &f, &gens, &opts).unwrap();
        let n = g.normalizer(&g.sylow(3));
        let ng = crate::modrep::subgroup_group(&g, &n, "N").unwrap();
        let ngens: Vec<(String, GModule)> = gens
            .iter()
            .map(|(s, m)| (s.clone(), m.restrict(&n, &ng).unwrap()))
            .collect();
        let rn = semisimplify(&ng, &f, &ngens, &opts).unwrap();
        let rep = verify_equivalence(&rg, &rn, &n).unwrap();
        assert!(rep.verdict, "{rep:?}");
        let d = verify_restriction_descent(&rg, &n, &opts.decomp()).unwrap();
        assert!(d.ok() && d.index_coprime_to_p);
    }

    #[test]
    fn green_correspondent_rejects_negligible() {
        let g = catalog("symmetric:3").unwrap();
        let f = Fq::prime(3).unwrap();
        let n = g.sylow(3);
        let ng = crate::modrep::subgroup_group(&g, &n, "P").unwrap();
        let perm = generator_module("perm", &g, &f).unwrap();
        assert!(matches!(
            green_correspondent(&perm, &n, &ng, &RunOptions::default().decomp()),
            Err(Error::NegligibleInput)
        ));
    }

    #[test]
    fn vertex_of_trivial_module_is_sylow() {
        let g = catalog("symmetric:3").unwrap();
        let f = Fq::prime(3).unwrap();
        assert_eq!(vertex(&GModule::trivial(&g, &f), 3).unwrap().order(), 3);
        assert_eq!(vertex(&GModule::regular(&g, &f), 3).unwrap().order(), 1);
    }

    #[test]
    fn s3_sp_image() {
        let rep = sp_image_check(3, &RunOptions::default()).unwrap();
        assert_eq!(rep.simples, 4);
        assert_eq!(rep.chi_order, Some(4));
        assert!(rep.verdict, "{rep:?}");
    }
}
