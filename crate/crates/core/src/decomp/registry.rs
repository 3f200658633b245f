use super::{decompose, engine::iso_indecomposable, DecompOptions, Decomposition};
use crate::error::{Error, Result};
use crate::exact_linalg::{charpoly, Fq, Mat};
use crate::groups::{GroupRef, GroupSpec};
use crate::modrep::{FieldJson, GModule, ModuleJson};
use serde::{Deserialize, Serialize};

/// A representative of one isomorphism class of indecomposables.
#[derive(Clone, Debug)]
pub struct IndecRecord {
    pub label: String,
    pub module: GModule,
    invariants: Vec<Vec<u32>>,
}

impl IndecRecord {
    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    pub fn dim_mod_p(&self) -> u32 {
        self.module.dim_mod_p()
    }
}

/// Isomorphism classes of indecomposable modules for one group and field,
/// labelled `G@F/I{k}` in insertion order.
#[derive(Clone, Debug)]
pub struct Registry {
    group: GroupRef,
    field: Fq,
    records: Vec<IndecRecord>,
}

/// One isomorphism class in a decomposition.
#[derive(Clone, Debug)]
pub struct ClassifiedSummand {
    pub index: usize,
    pub label: String,
    pub multiplicity: usize,
    /// One inclusion/projection pair per copy.
    pub inclusions: Vec<Mat<Fq>>,
    pub projections: Vec<Mat<Fq>>,
}

/// A decomposition with summands identified in a registry, sorted by
/// registry index.
#[derive(Clone, Debug)]
pub struct Classification {
    pub summands: Vec<ClassifiedSummand>,
}

impl Classification {
    /// `(index, multiplicity)` pairs.
    pub fn multiset(&self) -> Vec<(usize, usize)> {
        self.summands
            .iter()
            .map(|s| (s.index, s.multiplicity))
            .collect()
    }
}

fn invariants(m: &GModule) -> Result<Vec<Vec<u32>>> {
    m.action()
        .iter()
        .map(|a| Ok(charpoly(a)?.coeffs().to_vec()))
        .collect()
}

impl Registry {
    pub fn new(group: &GroupRef, field: &Fq) -> Self {
        Registry {
            group: group.clone(),
            field: field.clone(),
            records: Vec::new(),
        }
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> &[IndecRecord] {
        &self.records
    }

    pub fn record(&self, index: usize) -> &IndecRecord {
        &self.records[index]
    }

    pub fn label_of(&self, index: usize) -> &str {
        &self.records[index].label
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        self.records.iter().position(|r| r.label == label)
    }

    fn label_for(&self, k: usize) -> String {
        format!("{}@{}/I{k}", self.group.name(), self.field.name())
    }

    fn check(&self, m: &GModule) -> Result<()> {
        if **m.group() != *self.group {
            return Err(Error::Mismatch(
                "module group differs from registry group".into(),
            ));
        }
        if *m.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    /// Index of the class of an indecomposable module, with an isomorphism
    /// `representative -> m`.
    pub fn lookup(&self, m: &GModule) -> Result<Option<(usize, Mat<Fq>)>> {
        self.check(m)?;
        let inv = invariants(m)?;
        for (k, r) in self.records.iter().enumerate() {
            if r.dim() != m.dim() || r.invariants != inv {
                continue;
            }
            if let Some(iso) = iso_indecomposable(r.module.rep(), m.rep())? {
                return Ok(Some((k, iso)));
            }
        }
        Ok(None)
    }

    /// Register an indecomposable module; returns its index and whether the
    /// class is new.
    pub fn insert(&mut self, m: &GModule) -> Result<(usize, bool)> {
        if let Some((k, _)) = self.lookup(m)? {
            return Ok((k, false));
        }
        let k = self.records.len();
        self.records.push(IndecRecord {
            label: self.label_for(k),
            module: m.clone(),
            invariants: invariants(m)?,
        });
        Ok((k, true))
    }

    /// Decompose over the registry field and identify every summand.
    /// Needing a field extension is reported as `NeedsExtension`.
    pub fn classify(&mut self, a: &GModule, opts: &DecompOptions) -> Result<Classification> {
        self.check(a)?;
        let strict = DecompOptions {
            allow_extension: false,
            ..opts.clone()
        };
        let dec = decompose(a, &strict)?;
        self.classify_decomposition(&dec)
    }

    pub fn classify_decomposition(&mut self, dec: &Decomposition) -> Result<Classification> {
        let mut out: Vec<ClassifiedSummand> = Vec::new();
        for s in &dec.summands {
            let (k, _) = self.insert(&s.module)?;
            match out.iter_mut().find(|c| c.index == k) {
                Some(c) => {
                    c.multiplicity += 1;
                    c.inclusions.push(s.inclusion.clone());
                    c.projections.push(s.projection.clone());
                }
                None => out.push(ClassifiedSummand {
                    index: k,
                    label: self.records[k].label.clone(),
                    multiplicity: 1,
                    inclusions: vec![s.inclusion.clone()],
                    projections: vec![s.projection.clone()],
                }),
            }
        }
        out.sort_by_key(|c| c.index);
        Ok(Classification { summands: out })
    }

    pub fn to_json(&self) -> RegistryJson {
        RegistryJson {
            group: self.group.spec().clone(),
            field: FieldJson {
                p: self.field.p() as u64,
                degree: self.field.degree(),
            },
            entries: self
                .records
                .iter()
                .map(|r| RegistryEntryJson {
                    label: r.label.clone(),
                    dim: r.dim(),
                    module: ModuleJson::from_module(&r.module),
                })
                .collect(),
        }
    }

    /// Rebuild a registry from its dump, over an already enumerated group.
    pub fn from_json(j: &RegistryJson, group: &GroupRef) -> Result<Self> {
        let field = Fq::new(j.field.p, j.field.degree)?;
        let mut reg = Registry::new(group, &field);
        for e in &j.entries {
            let m = e.module.to_module_over(group)?;
            if m.dim() != e.dim {
                return Err(Error::Parse(format!(
                    "entry {} has wrong dimension",
                    e.label
                )));
            }
            if *m.field() != field {
                return Err(Error::FieldMismatch);
            }
            reg.records.push(IndecRecord {
                label: e.label.clone(),
                invariants: invariants(&m)?,
                module: m,
            });
        }
        Ok(reg)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegistryEntryJson {
    pub label: String,
    pub dim: usize,
    pub module: ModuleJson,
}

/// Registry dump: labels, dimensions and representative modules.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegistryJson {
    pub group: GroupSpec,
    pub field: FieldJson,
    pub entries: Vec<RegistryEntryJson>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::catalog;

    #[test]
    fn labels_and_roundtrip() {
        let g = catalog("cyclic:5").unwrap();
        let f = Fq::prime(5).unwrap();
        let mut reg = Registry::new(&g, &f);
        let j2 = GModule::jordan(&g, &f, 2).unwrap();
        let j3 = GModule::jordan(&g, &f, 3).unwrap();
        let c = reg
            .classify(&j2.tensor(&j3).unwrap(), &DecompOptions::default())
            .unwrap();
        let dims: Vec<usize> = c
            .summands
            .iter()
            .map(|s| reg.record(s.index).dim())
            .collect();
        assert_eq!(c.summands.iter().map(|s| s.multiplicity).sum::<usize>(), 2);
        assert!(dims.contains(&2) && dims.contains(&4));
        assert!(reg.label_of(0).starts_with("Z5@F5/I"));
        let dump = serde_json::to_string(&reg.to_json()).unwrap();
        let back: RegistryJson = serde_json::from_str(&dump).unwrap();
        let reg2 = Registry::from_json(&back, &g).unwrap();
        assert_eq!(reg2.len(), reg.len());
        assert_eq!(serde_json::to_string(&reg2.to_json()).unwrap(), dump);
        assert_eq!(
            reg2.lookup(&j2.tensor(&j3).unwrap()).unwrap().map(|x| x.0),
            None
        );
    }
}
