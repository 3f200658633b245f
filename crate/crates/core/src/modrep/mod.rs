//! Modules over group algebras (and over algebras given by generator
//! matrices), with the monoidal operations, restriction and induction,
//! Heller shifts, relative projectivity and negligibility of morphisms.

mod gmodule;
mod json;
pub(crate) mod rep;

pub use gmodule::{subgroup_group, GModule, ModMorphism};
pub use json::{FieldJson, ModuleJson};
pub use rep::{complete_basis, Rep};
