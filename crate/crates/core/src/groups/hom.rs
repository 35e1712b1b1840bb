use std::fmt::Debug;
use std::sync::Arc;

use super::{Element, Group};
use crate::error::{Result, SdlpError};
use crate::ff::{Matrix, PrimeField};

/// An effectively computable group homomorphism into a labelled group.
pub trait Hom: Send + Sync + Debug {
    fn target(&self) -> &Group;
    fn apply(&self, x: &Element) -> Element;
    fn describe(&self) -> String {
        format!("{self:?}")
    }
}

#[derive(Debug, Clone)]
pub struct IdentityHom {
    group: Group,
}

impl IdentityHom {
    pub fn new(group: Group) -> Self {
        Self { group }
    }
}

impl Hom for IdentityHom {
    fn target(&self) -> &Group {
        &self.group
    }
    fn apply(&self, x: &Element) -> Element {
        x.clone()
    }
    fn describe(&self) -> String {
        "identity".into()
    }
}

/// The constant map onto the trivial group.
#[derive(Debug, Clone)]
pub struct TrivialHom {
    target: Group,
}

impl Default for TrivialHom {
    fn default() -> Self {
        Self { target: Group::trivial() }
    }
}

impl Hom for TrivialHom {
    fn target(&self) -> &Group {
        &self.target
    }
    fn apply(&self, _x: &Element) -> Element {
        self.target.identity()
    }
    fn describe(&self) -> String {
        "trivial".into()
    }
}

/// `F_p^d -> F_p^r`, `v -> M v`.
#[derive(Debug, Clone)]
pub struct LinearHom {
    field: PrimeField,
    matrix: Matrix<u64>,
    target: Group,
}

impl LinearHom {
    pub fn new(field: PrimeField, matrix: Matrix<u64>) -> Result<Self> {
        let target = Group::vector(field.p(), matrix.rows())?;
        Ok(Self { field, matrix, target })
    }

    pub fn matrix(&self) -> &Matrix<u64> {
        &self.matrix
    }
}

impl Hom for LinearHom {
    fn target(&self) -> &Group {
        &self.target
    }
    fn apply(&self, x: &Element) -> Element {
        Element(self.matrix.mul_vec(&self.field, &x.0))
    }
    fn describe(&self) -> String {
        format!("linear {}x{}", self.matrix.rows(), self.matrix.cols())
    }
}

/// Heisenberg group onto `F_p^2` by its two superdiagonal entries.
#[derive(Debug, Clone)]
pub struct HeisenbergTop {
    target: Group,
}

impl HeisenbergTop {
    pub fn new(p: u64) -> Result<Self> {
        Ok(Self { target: Group::vector(p, 2)? })
    }
}

impl Hom for HeisenbergTop {
    fn target(&self) -> &Group {
        &self.target
    }
    fn apply(&self, x: &Element) -> Element {
        Element(vec![x.0[0], x.0[1]])
    }
    fn describe(&self) -> String {
        "superdiagonal".into()
    }
}

/// Projection of a direct product onto a sub-product of its factors.
#[derive(Debug, Clone)]
pub struct Projection {
    source: Group,
    keep: Vec<usize>,
    target: Group,
}

impl Projection {
    pub fn new(source: &Group, keep: Vec<usize>) -> Result<Self> {
        let factors = source
            .factors()
            .ok_or_else(|| SdlpError::malformed("projection needs a product group"))?;
        if keep.iter().any(|i| *i >= factors.len()) {
            return Err(SdlpError::malformed("projection index out of range"));
        }
        let target = match keep.as_slice() {
            [] => Group::trivial(),
            [i] => factors[*i].clone(),
            _ => Group::product(keep.iter().map(|i| factors[*i].clone()).collect())?,
        };
        Ok(Self { source: source.clone(), keep, target })
    }
}

impl Hom for Projection {
    fn target(&self) -> &Group {
        &self.target
    }
    fn apply(&self, x: &Element) -> Element {
        if self.keep.is_empty() {
            return self.target.identity();
        }
        Element(self.keep.iter().flat_map(|i| self.source.component(x, *i).0).collect())
    }
    fn describe(&self) -> String {
        format!("projection onto factors {:?}", self.keep)
    }
}

/// `second ∘ first`.
#[derive(Debug, Clone)]
pub struct Compose {
    first: Arc<dyn Hom>,
    second: Arc<dyn Hom>,
}

impl Compose {
    pub fn new(first: Arc<dyn Hom>, second: Arc<dyn Hom>) -> Self {
        Self { first, second }
    }
}

impl Hom for Compose {
    fn target(&self) -> &Group {
        self.second.target()
    }
    fn apply(&self, x: &Element) -> Element {
        self.second.apply(&self.first.apply(x))
    }
    fn describe(&self) -> String {
        format!("{} after {}", self.second.describe(), self.first.describe())
    }
}
