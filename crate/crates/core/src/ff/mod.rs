//! Exact arithmetic over finite fields: prime fields, extensions, dense matrices,
//! polynomial factorization and the invariant-subspace machinery used by the
//! solvers.

mod ext;
mod fq;
mod matrix;
mod module;
mod poly;
mod prime;

use std::fmt::Debug;
use std::hash::Hash;

use rand::Rng;

pub use ext::ExtField;
pub use fq::{prime_power, Fq, FqEmbedding};
pub use matrix::{Matrix, Subspace};
pub use module::{eval_poly_at_matrix, field_from_matrix, invariant_subspace, min_poly, min_poly_coeffs, FieldIso};
pub use poly::{factor_poly, first_irreducible, is_irreducible, Poly};
pub use prime::PrimeField;

/// A finite field with a runtime-chosen parameterization.
pub trait Field: Clone + Debug + Send + Sync {
    type Elem: Clone + Eq + Hash + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn from_u64(&self, v: u64) -> Self::Elem;
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;
    fn characteristic(&self) -> u64;
    /// Number of elements.
    fn size(&self) -> u128;
    /// Appends a canonical word encoding of `a` to `out`.
    fn encode(&self, a: &Self::Elem, out: &mut Vec<u64>);

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn pow(&self, a: &Self::Elem, mut e: u128) -> Self::Elem {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}
