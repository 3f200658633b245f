//! Runtime-typed field handles, for callers (CLI, bindings) that pick the
//! field from input data.

use super::{CycloElem, CycloField, Field, Fq, RatFunc, RatFuncField, Rationals};
use crate::error::{Error, Result};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldKind {
    PrimePower { p: u64, r: u32 },
    Rationals,
    Cyclotomic { n: u64 },
    RationalFunctions,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExactField {
    Fq(Fq),
    Q(Rationals),
    Cyclo(CycloField),
    RatFunc(RatFuncField),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ElemData {
    Fq(u32),
    Q(BigRational),
    Cyclo(CycloElem),
    RatFunc(RatFunc),
}

/// A field element together with its owning field.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldElem {
    pub owner: ExactField,
    pub data: ElemData,
}

pub fn field_make(kind: FieldKind) -> Result<ExactField> {
    Ok(match kind {
        FieldKind::PrimePower { p, r } => {
            if r == 0 {
                return Err(Error::InvalidField(
                    "extension degree must be at least 1".into(),
                ));
            }
            ExactField::Fq(Fq::new(p, r)?)
        }
        FieldKind::Rationals => ExactField::Q(Rationals),
        FieldKind::Cyclotomic { n } => {
            if n == 0 {
                return Err(Error::InvalidField(
                    "cyclotomic order must be at least 1".into(),
                ));
            }
            ExactField::Cyclo(CycloField::new(n))
        }
        FieldKind::RationalFunctions => ExactField::RatFunc(RatFuncField),
    })
}

macro_rules! dispatch2 {
    ($self:ident, $a:ident, $b:ident, $op:ident) => {{
        if $a.owner != $b.owner {
            return Err(Error::FieldMismatch);
        }
        let data = match (&$a.owner, &$a.data, &$b.data) {
            (ExactField::Fq(f), ElemData::Fq(x), ElemData::Fq(y)) => ElemData::Fq(f.$op(x, y)),
            (ExactField::Q(f), ElemData::Q(x), ElemData::Q(y)) => ElemData::Q(f.$op(x, y)),
            (ExactField::Cyclo(f), ElemData::Cyclo(x), ElemData::Cyclo(y)) => {
                ElemData::Cyclo(f.$op(x, y))
            }
            (ExactField::RatFunc(f), ElemData::RatFunc(x), ElemData::RatFunc(y)) => {
                ElemData::RatFunc(f.$op(x, y))
            }
            _ => return Err(Error::FieldMismatch),
        };
        Ok(FieldElem {
            owner: $a.owner.clone(),
            data,
        })
    }};
}

impl ExactField {
    pub fn kind(&self) -> FieldKind {
        match self {
            ExactField::Fq(f) => FieldKind::PrimePower {
                p: f.p() as u64,
                r: f.degree(),
            },
            ExactField::Q(_) => FieldKind::Rationals,
            ExactField::Cyclo(f) => FieldKind::Cyclotomic { n: f.order() },
            ExactField::RatFunc(_) => FieldKind::RationalFunctions,
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            ExactField::Fq(f) => f.characteristic(),
            _ => 0,
        }
    }

    pub fn from_int(&self, n: i64) -> FieldElem {
        let data = match self {
            ExactField::Fq(f) => ElemData::Fq(f.from_int(n)),
            ExactField::Q(f) => ElemData::Q(f.from_int(n)),
            ExactField::Cyclo(f) => ElemData::Cyclo(f.from_int(n)),
            ExactField::RatFunc(f) => ElemData::RatFunc(f.from_int(n)),
        };
        FieldElem {
            owner: self.clone(),
            data,
        }
    }

    /// The distinguished generator: t for GF(p^r) and Q(t), zeta for Q(zeta_n).
    pub fn generator(&self) -> FieldElem {
        let data = match self {
            ExactField::Fq(f) => ElemData::Fq(if f.degree() == 1 { 1 } else { f.p() }),
            ExactField::Q(f) => ElemData::Q(f.one()),
            ExactField::Cyclo(f) => ElemData::Cyclo(f.zeta()),
            ExactField::RatFunc(f) => ElemData::RatFunc(f.t()),
        };
        FieldElem {
            owner: self.clone(),
            data,
        }
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> Result<FieldElem> {
        dispatch2!(self, a, b, add)
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> Result<FieldElem> {
        dispatch2!(self, a, b, sub)
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> Result<FieldElem> {
        dispatch2!(self, a, b, mul)
    }

    pub fn inv(&self, a: &FieldElem) -> Result<Option<FieldElem>> {
        if a.owner != *self {
            return Err(Error::FieldMismatch);
        }
        let data = match (self, &a.data) {
            (ExactField::Fq(f), ElemData::Fq(x)) => f.inv(x).map(ElemData::Fq),
            (ExactField::Q(f), ElemData::Q(x)) => f.inv(x).map(ElemData::Q),
            (ExactField::Cyclo(f), ElemData::Cyclo(x)) => f.inv(x).map(ElemData::Cyclo),
            (ExactField::RatFunc(f), ElemData::RatFunc(x)) => f.inv(x).map(ElemData::RatFunc),
            _ => return Err(Error::FieldMismatch),
        };
        Ok(data.map(|data| FieldElem {
            owner: self.clone(),
            data,
        }))
    }
}

impl FieldElem {
    pub fn mul(&self, other: &FieldElem) -> Result<FieldElem> {
        self.owner.mul(self, other)
    }

    pub fn add(&self, other: &FieldElem) -> Result<FieldElem> {
        self.owner.add(self, other)
    }

    pub fn sub(&self, other: &FieldElem) -> Result<FieldElem> {
        self.owner.sub(self, other)
    }

    pub fn inv(&self) -> Result<Option<FieldElem>> {
        self.owner.inv(self)
    }
}

impl std::fmt::Display for FieldElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match (&self.owner, &self.data) {
            (ExactField::Fq(k), ElemData::Fq(x)) => k.fmt_elem(x),
            (ExactField::Q(k), ElemData::Q(x)) => k.fmt_elem(x),
            (ExactField::Cyclo(k), ElemData::Cyclo(x)) => k.fmt_elem(x),
            (ExactField::RatFunc(k), ElemData::RatFunc(x)) => k.fmt_elem(x),
            _ => "<invalid>".into(),
        };
        f.write_str(&s)
    }
}
