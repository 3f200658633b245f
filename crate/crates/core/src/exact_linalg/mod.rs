//! Exact scalar fields and dense linear algebra over them.
//!
//! Every field implements [`Field`]; matrices ([`Mat`]) and polynomials
//! ([`UniPoly`]) are generic over it. Finite fields use a compact `u32`
//! encoding so the dense kernels stay cheap; the characteristic-zero fields
//! (rationals, cyclotomic fields, rational functions) use big integers and
//! keep every element in a canonical reduced form.

mod cyclotomic;
mod dynamic;
mod factor;
mod fq;
mod mat;
mod poly;
mod ratfunc;
mod rational;

pub use cyclotomic::{cyclotomic_polynomial, CycloElem, CycloField};
pub use dynamic::{field_make, ElemData, ExactField, FieldElem, FieldKind};
pub use factor::{factor, split_for_fitting, FittingSplit};
pub use fq::{is_prime, Embedding, Fq};
pub use mat::{charpoly, EchelonBasis, Mat};
pub use poly::UniPoly;
pub use ratfunc::{RatFunc, RatFuncField};
pub use rational::Rationals;

use rand_chacha::ChaCha8Rng;
use std::fmt::Debug;
use std::hash::Hash;

/// A field with exact arithmetic and canonical element representation.
///
/// Equality of elements is plain data equality.
pub trait Field: Clone + Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + Hash + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn characteristic(&self) -> u64;
    /// Number of elements, `None` when infinite.
    fn order(&self) -> Option<u64>;
    fn random_elem(&self, rng: &mut ChaCha8Rng) -> Self::Elem;
    fn fmt_elem(&self, a: &Self::Elem) -> String;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `dst[i] += c * src[i]`.
    fn axpy(&self, dst: &mut [Self::Elem], c: &Self::Elem, src: &[Self::Elem]) {
        if self.is_zero(c) {
            return;
        }
        for (d, s) in dst.iter_mut().zip(src) {
            if !self.is_zero(s) {
                *d = self.add(d, &self.mul(c, s));
            }
        }
    }

    /// `dst[i] *= c`.
    fn scale(&self, dst: &mut [Self::Elem], c: &Self::Elem) {
        for d in dst.iter_mut() {
            *d = self.mul(d, c);
        }
    }
}
