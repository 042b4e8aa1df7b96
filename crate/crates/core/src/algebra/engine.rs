//! Target algebras for representation checks.

use crate::error::Result;
use crate::scalar::{self, Scalar};

/// An exact *-algebra in which identities can be decided.
pub trait StarEngine: Sync {
    type Elem: Clone + Send + Sync + std::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem>;
    fn scale(&self, c: &Scalar, x: &Self::Elem) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem>;
    fn star(&self, x: &Self::Elem) -> Self::Elem;
    fn equals(&self, x: &Self::Elem, y: &Self::Elem) -> Result<bool>;
    fn render(&self, x: &Self::Elem) -> String;

    /// Cheap sufficient test for zero, used to prune evaluations.
    fn is_trivially_zero(&self, _x: &Self::Elem) -> bool {
        false
    }

    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem> {
        self.add(x, &self.scale(&-scalar::one(), y))
    }

    fn sum(&self, xs: &[Self::Elem]) -> Result<Self::Elem> {
        let mut acc = self.zero();
        for x in xs {
            acc = self.add(&acc, x)?;
        }
        Ok(acc)
    }

    fn product(&self, xs: &[&Self::Elem]) -> Result<Self::Elem> {
        let (first, rest) = xs.split_first().expect("nonempty product");
        let mut acc = (*first).clone();
        for x in rest {
            acc = self.mul(&acc, x)?;
        }
        Ok(acc)
    }
}
