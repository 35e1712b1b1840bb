use std::collections::HashMap;
use std::sync::Arc;

use super::group::Backend;
use super::{Element, Group};
use crate::arith::{mul_mod, pow_mod};
use crate::error::{Result, SdlpError};
use crate::ff::{Field, Fq, Matrix, PrimeField};
use crate::oracles::Factorization;

/// Largest group for which table endomorphisms are accepted.
pub const TABLE_LIMIT: usize = 1 << 12;

/// An endomorphism in an effectively evaluable representation.
#[derive(Clone, Debug)]
pub struct Endo {
    rep: Arc<EndoRep>,
    declared_order: Option<Factorization>,
}

#[derive(Debug)]
pub enum EndoRep {
    Identity,
    /// `v -> B v` on `F_p^d`.
    Linear { field: PrimeField, matrix: Matrix<u64> },
    /// `x -> factor * x` on `Z_n` or `F_p^d`.
    Power { factor: u64, modulus: u64 },
    /// `x -> c^-1 τ(x) c` on matrix backends.
    MatrixAuto(MatrixAuto),
    /// Explicit images keyed by code-word.
    Table(HashMap<Vec<u64>, Element>),
    /// The induced map on a pair-image group: acts on the preimage component.
    Induced(Endo),
    /// Componentwise on a direct product.
    Product(Vec<Endo>),
    /// `outer ∘ inner`.
    Composite(Endo, Endo),
}

/// `x -> c^-1 τ(x) c` where `τ` is a Frobenius power, optionally followed by
/// inverse-transpose.
#[derive(Clone, Debug)]
pub struct MatrixAuto {
    fq: Fq,
    c: Matrix<u64>,
    c_inv: Matrix<u64>,
    frob: u32,
    inv_transpose: bool,
}

impl MatrixAuto {
    pub fn new(fq: Fq, c: Matrix<u64>, frob: u32, inv_transpose: bool) -> Result<Self> {
        if !c.is_square() {
            return Err(SdlpError::malformed("conjugating matrix must be square"));
        }
        let c_inv = c
            .inverse(&fq)
            .ok_or_else(|| SdlpError::malformed("conjugating matrix is singular"))?;
        let frob = frob % fq.degree() as u32;
        Ok(Self { fq, c, c_inv, frob, inv_transpose })
    }

    pub fn field(&self) -> &Fq {
        &self.fq
    }

    pub fn conjugator(&self) -> &Matrix<u64> {
        &self.c
    }

    pub fn frobenius_power(&self) -> u32 {
        self.frob
    }

    pub fn has_inverse_transpose(&self) -> bool {
        self.inv_transpose
    }

    pub fn is_inner(&self) -> bool {
        self.frob == 0 && !self.inv_transpose
    }

    fn tau(&self, x: &Matrix<u64>) -> Matrix<u64> {
        let mut y = x.clone();
        if self.frob > 0 {
            let e = (self.fq.prime_field().p() as u128).pow(self.frob);
            y = y.map(|a| self.fq.pow(a, e));
        }
        if self.inv_transpose {
            y = y.inverse(&self.fq).expect("invertible").transpose();
        }
        y
    }

    pub fn apply_matrix(&self, x: &Matrix<u64>) -> Matrix<u64> {
        let t = self.tau(x);
        self.c_inv.mul(&self.fq, &t).mul(&self.fq, &self.c)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let c = self.tau(&other.c).mul(&self.fq, &self.c);
        let c_inv = c.inverse(&self.fq).expect("product of invertible matrices");
        Self {
            fq: self.fq.clone(),
            c,
            c_inv,
            frob: (self.frob + other.frob) % self.fq.degree() as u32,
            inv_transpose: self.inv_transpose ^ other.inv_transpose,
        }
    }

    fn identity_like(&self) -> Self {
        let id = Matrix::identity(&self.fq, self.c.rows());
        Self { fq: self.fq.clone(), c: id.clone(), c_inv: id, frob: 0, inv_transpose: false }
    }

    /// Order of the outer part `τ`.
    pub fn tau_order(&self) -> u128 {
        let e = self.fq.degree() as u128;
        let f = self.frob as u128;
        let frob_order = if f == 0 { 1 } else { e / crate::arith::gcd(e, f) };
        if self.inv_transpose {
            crate::arith::lcm(frob_order, 2).unwrap()
        } else {
            frob_order
        }
    }
}

impl Endo {
    fn from_rep(rep: EndoRep) -> Self {
        Self { rep: Arc::new(rep), declared_order: None }
    }

    pub fn identity() -> Self {
        Self::from_rep(EndoRep::Identity)
    }

    pub fn linear(field: PrimeField, matrix: Matrix<u64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(SdlpError::malformed("linear map must be square"));
        }
        if matrix.data().iter().any(|x| *x >= field.p()) {
            return Err(SdlpError::malformed("matrix entry outside the field"));
        }
        Ok(Self::from_rep(EndoRep::Linear { field, matrix }))
    }

    pub fn power(factor: u64, modulus: u64) -> Self {
        Self::from_rep(EndoRep::Power { factor: factor % modulus.max(1), modulus })
    }

    /// Conjugation `x -> c^-1 x c`.
    pub fn conjugation(fq: Fq, c: Matrix<u64>) -> Result<Self> {
        Ok(Self::from_rep(EndoRep::MatrixAuto(MatrixAuto::new(fq, c, 0, false)?)))
    }

    pub fn matrix_auto(auto: MatrixAuto) -> Self {
        Self::from_rep(EndoRep::MatrixAuto(auto))
    }

    /// Tabulates `f` over every element of `group` (at most `TABLE_LIMIT`).
    pub fn table(group: &Group, f: impl Fn(&Element) -> Element) -> Result<Self> {
        if matches!(group.backend(), Backend::PairImage { .. }) {
            return Err(SdlpError::NotApplicable("tables need uniquely encoded elements".into()));
        }
        let elems = group.enumerate(TABLE_LIMIT)?;
        let map = elems.into_iter().map(|x| {
            let y = f(&x);
            (x.0, y)
        });
        Ok(Self::from_rep(EndoRep::Table(map.collect())))
    }

    pub fn from_table(map: HashMap<Vec<u64>, Element>) -> Self {
        Self::from_rep(EndoRep::Table(map))
    }

    pub fn induced(inner: Endo) -> Self {
        let order = inner.declared_order.clone();
        Self { rep: Arc::new(EndoRep::Induced(inner)), declared_order: order }
    }

    pub fn product(parts: Vec<Endo>) -> Self {
        Self::from_rep(EndoRep::Product(parts))
    }

    /// Attaches a known multiple of the order.
    pub fn with_order(mut self, order: Factorization) -> Self {
        self.declared_order = Some(order);
        self
    }

    pub fn declared_order(&self) -> Option<&Factorization> {
        self.declared_order.as_ref()
    }

    pub fn rep(&self) -> &EndoRep {
        &self.rep
    }

    pub fn is_identity_rep(&self) -> bool {
        match &*self.rep {
            EndoRep::Identity => true,
            EndoRep::Power { factor, modulus } => *factor == 1 % modulus,
            EndoRep::Linear { field, matrix } => matrix.is_identity(field),
            EndoRep::MatrixAuto(a) => a.is_inner() && a.c.is_identity(&a.fq),
            EndoRep::Induced(e) => e.is_identity_rep(),
            EndoRep::Product(parts) => parts.iter().all(|e| e.is_identity_rep()),
            _ => false,
        }
    }

    pub fn apply(&self, group: &Group, x: &Element) -> Element {
        match &*self.rep {
            EndoRep::Identity => x.clone(),
            EndoRep::Linear { field, matrix } => Element(matrix.mul_vec(field, &x.0)),
            EndoRep::Power { factor, modulus } => {
                Element(x.0.iter().map(|v| mul_mod(*v, *factor, *modulus)).collect())
            }
            EndoRep::MatrixAuto(a) => {
                let m = group.as_matrix(x).expect("matrix automorphism on a matrix backend");
                group
                    .from_matrix(&a.apply_matrix(&m))
                    .expect("matrix automorphism preserves the backend")
            }
            EndoRep::Table(map) => map
                .get(&x.0)
                .cloned()
                .unwrap_or_else(|| panic!("element {x} outside the table domain")),
            EndoRep::Induced(inner) => match group.backend() {
                Backend::PairImage { inner: g, .. } => inner.apply(g, x),
                _ => inner.apply(group, x),
            },
            EndoRep::Product(parts) => {
                let factors = group.factors().expect("product endomorphism on a product group");
                let mut w = Vec::with_capacity(x.0.len());
                for (i, (e, f)) in parts.iter().zip(factors).enumerate() {
                    w.extend(e.apply(f, &group.component(x, i)).0);
                }
                Element(w)
            }
            EndoRep::Composite(outer, inner) => outer.apply(group, &inner.apply(group, x)),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Endo) -> Endo {
        let rep = match (&*self.rep, &*other.rep) {
            (EndoRep::Identity, _) => return other.clone(),
            (_, EndoRep::Identity) => return self.clone(),
            (
                EndoRep::Linear { field, matrix: a },
                EndoRep::Linear { matrix: b, .. },
            ) => EndoRep::Linear { field: *field, matrix: a.mul(field, b) },
            (
                EndoRep::Power { factor: a, modulus },
                EndoRep::Power { factor: b, modulus: m2 },
            ) if modulus == m2 => EndoRep::Power { factor: mul_mod(*a, *b, *modulus), modulus: *modulus },
            (EndoRep::MatrixAuto(a), EndoRep::MatrixAuto(b)) => EndoRep::MatrixAuto(a.compose(b)),
            (EndoRep::Table(a), EndoRep::Table(b)) => EndoRep::Table(
                b.iter()
                    .map(|(k, v)| (k.clone(), a.get(&v.0).cloned().expect("table closed")))
                    .collect(),
            ),
            (EndoRep::Induced(a), EndoRep::Induced(b)) => EndoRep::Induced(a.compose(b)),
            (EndoRep::Product(a), EndoRep::Product(b)) if a.len() == b.len() => {
                EndoRep::Product(a.iter().zip(b).map(|(x, y)| x.compose(y)).collect())
            }
            _ => EndoRep::Composite(self.clone(), other.clone()),
        };
        Endo::from_rep(rep)
    }

    /// `σ^n`.
    pub fn pow(&self, n: u128) -> Endo {
        let order = self.declared_order.clone();
        let rep = match &*self.rep {
            EndoRep::Identity => EndoRep::Identity,
            _ if n == 0 => EndoRep::Identity,
            EndoRep::Linear { field, matrix } => {
                EndoRep::Linear { field: *field, matrix: matrix.pow(field, n) }
            }
            EndoRep::Power { factor, modulus } => {
                EndoRep::Power { factor: pow_mod(*factor, n, *modulus), modulus: *modulus }
            }
            EndoRep::Induced(inner) => EndoRep::Induced(inner.pow(n)),
            EndoRep::Product(parts) => EndoRep::Product(parts.iter().map(|e| e.pow(n)).collect()),
            EndoRep::MatrixAuto(a) => {
                let mut acc = a.identity_like();
                let mut base = a.clone();
                let mut e = n;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = acc.compose(&base);
                    }
                    e >>= 1;
                    if e > 0 {
                        base = base.compose(&base);
                    }
                }
                EndoRep::MatrixAuto(acc)
            }
            EndoRep::Table(_) | EndoRep::Composite(..) => {
                let mut acc = Endo::identity();
                let mut base = self.clone();
                let mut e = n;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = acc.compose(&base);
                    }
                    e >>= 1;
                    if e > 0 {
                        base = base.compose(&base);
                    }
                }
                return Endo { rep: acc.rep, declared_order: order };
            }
        };
        Endo { rep: Arc::new(rep), declared_order: order }
    }

    /// Checks that `σ` maps generators into the ambient backend and respects
    /// products on sampled pairs.
    pub fn validate(&self, group: &Group, samples: usize, seed: u64) -> Result<()> {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let check = |x: &Element| -> Result<Element> {
            let y = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| self.apply(group, x)))
                .map_err(|_| SdlpError::malformed("endomorphism cannot be evaluated on this group"))?;
            if !group.contains(&y) {
                return Err(SdlpError::malformed("endomorphism leaves the group"));
            }
            Ok(y)
        };
        for x in group.generators() {
            check(x)?;
        }
        if !group.is_identity(&check(&group.identity())?) {
            return Err(SdlpError::malformed("endomorphism does not fix the identity"));
        }
        for _ in 0..samples {
            let a = group.random(&mut rng);
            let b = group.random(&mut rng);
            let lhs = check(&group.mul(&a, &b))?;
            let rhs = group.mul(&check(&a)?, &check(&b)?);
            if !group.eq(&lhs, &rhs) {
                return Err(SdlpError::malformed("map is not a homomorphism"));
            }
        }
        Ok(())
    }

    pub fn describe(&self) -> String {
        match &*self.rep {
            EndoRep::Identity => "identity".into(),
            EndoRep::Linear { matrix, .. } => format!("linear {}x{}", matrix.rows(), matrix.cols()),
            EndoRep::Power { factor, modulus } => format!("power x{factor} mod {modulus}"),
            EndoRep::MatrixAuto(a) if a.is_inner() => "conjugation".into(),
            EndoRep::MatrixAuto(a) => format!(
                "matrix automorphism (frobenius^{}{})",
                a.frob,
                if a.inv_transpose { ", inverse-transpose" } else { "" }
            ),
            EndoRep::Table(m) => format!("table on {} elements", m.len()),
            EndoRep::Induced(e) => format!("induced by {}", e.describe()),
            EndoRep::Product(parts) => {
                let v: Vec<String> = parts.iter().map(|e| e.describe()).collect();
                format!("product[{}]", v.join(", "))
            }
            EndoRep::Composite(a, b) => format!("{} after {}", a.describe(), b.describe()),
        }
    }
}
