use super::GModule;
use crate::error::{Error, Result};
use crate::exact_linalg::{Field, Fq, Mat};
use crate::groups::{GroupRef, GroupSpec};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldJson {
    pub p: u64,
    pub degree: u32,
}

/// Module file format. Entries are integers reduced mod p, or coefficient
/// lists over the prime field when the degree exceeds one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleJson {
    pub field: FieldJson,
    pub group: GroupSpec,
    pub dim: usize,
    pub action: BTreeMap<String, Vec<Vec<Value>>>,
}

fn entry_to_json(f: &Fq, x: u32) -> Value {
    if f.degree() == 1 {
        Value::from(x)
    } else {
        Value::from(f.coeffs(x))
    }
}

fn entry_from_json(f: &Fq, v: &Value) -> Result<u32> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|x| f.from_int(x))
            .ok_or_else(|| Error::Parse(format!("entry {n} is not an integer"))),
        Value::Array(cs) => {
            let c = cs
                .iter()
                .map(|c| {
                    c.as_i64()
                        .map(|x| x.rem_euclid(f.p() as i64) as u32)
                        .ok_or_else(|| Error::Parse("coefficient is not an integer".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            f.from_coeffs(&c)
        }
        _ => Err(Error::Parse(format!("bad matrix entry {v}"))),
    }
}

impl ModuleJson {
    pub fn from_module(m: &GModule) -> Self {
        let f = m.field();
        let action = m
            .action()
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let rows = (0..a.rows())
                    .map(|i| a.row(i).iter().map(|&x| entry_to_json(f, x)).collect())
                    .collect();
                (format!("g{k}"), rows)
            })
            .collect();
        ModuleJson {
            field: FieldJson {
                p: f.p() as u64,
                degree: f.degree(),
            },
            group: m.group().spec().clone(),
            dim: m.dim(),
            action,
        }
    }

    /// Build and validate the module, enumerating the group.
    pub fn to_module(&self) -> Result<GModule> {
        let g = self.group.build()?;
        self.to_module_over(&g)
    }

    /// Build and validate over an already enumerated group.
    pub fn to_module_over(&self, g: &GroupRef) -> Result<GModule> {
        let f = Fq::new(self.field.p, self.field.degree)?;
        if self.action.len() != g.num_generators() {
            return Err(Error::InvalidModule(format!(
                "{} action matrices for {} generators",
                self.action.len(),
                g.num_generators()
            )));
        }
        let mut gens = Vec::with_capacity(g.num_generators());
        for k in 0..g.num_generators() {
            let rows = self
                .action
                .get(&format!("g{k}"))
                .ok_or_else(|| Error::Parse(format!("missing action for g{k}")))?;
            if rows.len() != self.dim || rows.iter().any(|r| r.len() != self.dim) {
                return Err(Error::InvalidModule(format!(
                    "g{k} is not {0}x{0}",
                    self.dim
                )));
            }
            let data = rows
                .iter()
                .flatten()
                .map(|v| entry_from_json(&f, v))
                .collect::<Result<Vec<_>>>()?;
            gens.push(Mat::from_vec(&f, self.dim, self.dim, data)?);
        }
        let m = GModule::new(g, &f, self.dim, gens)?;
        m.validate()?;
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::catalog;

    #[test]
    fn module_json_roundtrip() {
        let s3 = catalog("symmetric:3").unwrap();
        let f = Fq::new(5, 2).unwrap();
        let m = GModule::permutation(&s3, &f);
        let j = ModuleJson::from_module(&m);
        let text = serde_json::to_string(&j).unwrap();
        let back: ModuleJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_module().unwrap(), m);
    }

    #[test]
    fn parse_literal_module() {
        let text = r#"{"field":{"p":3,"degree":1},"group":"cyclic:3","dim":2,
                      "action":{"g0":[[1,1],[0,1]]}}"#;
        let j: ModuleJson = serde_json::from_str(text).unwrap();
        assert_eq!(j.to_module().unwrap().dim(), 2);
        let bad = r#"{"field":{"p":3,"degree":1},"group":"cyclic:3","dim":2,
                      "action":{"g0":[[1,1],[0,2]]}}"#;
        let j: ModuleJson = serde_json::from_str(bad).unwrap();
        assert!(j.to_module().is_err());
    }
}
