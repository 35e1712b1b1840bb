use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use rand::Rng;

use super::{Element, Hom, Label};
use crate::arith::{bit_length, gcd};
use crate::error::{Result, SdlpError};
use crate::ff::{Field, Fq, Matrix, PrimeField};
use crate::oracles::{factor_integer, gl_exponent_multiple, Factorization};

/// Concrete group families.
#[derive(Debug)]
pub enum Backend {
    /// `Z_n` under addition.
    Cyclic { n: u64, primes: Vec<u64> },
    /// `F_p^d` under addition.
    Vector { field: PrimeField, d: usize },
    /// A subgroup of `GL_d(F_q)`; elements are row-major entry codes.
    Matrix { fq: Fq, d: usize, unitriangular: bool },
    /// Upper unitriangular 3x3 matrices over `F_p`, stored as `(a, b, c)` for
    /// `[[1, a, c], [0, 1, b], [0, 0, 1]]`.
    Heisenberg { field: PrimeField },
    /// Direct product; code-words are concatenated.
    Product { factors: Vec<Group>, offsets: Vec<usize> },
    /// The image of `psi` on `inner`, encoded by preimages and labelled by images.
    PairImage { inner: Group, psi: Arc<dyn Hom> },
}

/// A group handle: a backend plus a generating set. Subgroups share the backend.
#[derive(Clone)]
pub struct Group {
    backend: Arc<Backend>,
    gens: Arc<Vec<Element>>,
    full: bool,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

impl Group {
    fn from_backend(backend: Backend, gens: Vec<Element>, full: bool) -> Self {
        Self { backend: Arc::new(backend), gens: Arc::new(gens), full }
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(SdlpError::malformed("cyclic group order must be positive"));
        }
        let mut primes = Vec::new();
        for (p, e) in factor_integer(n as u128, 0).pairs() {
            primes.extend(std::iter::repeat(*p as u64).take(*e as usize));
        }
        let gens = if n > 1 { vec![Element(vec![1])] } else { Vec::new() };
        Ok(Self::from_backend(Backend::Cyclic { n, primes }, gens, true))
    }

    pub fn trivial() -> Self {
        Self::cyclic(1).expect("trivial group")
    }

    pub fn vector(p: u64, d: usize) -> Result<Self> {
        let field = PrimeField::new(p)?;
        let gens = (0..d)
            .map(|i| {
                let mut v = vec![0; d];
                v[i] = 1;
                Element(v)
            })
            .collect();
        Ok(Self::from_backend(Backend::Vector { field, d }, gens, true))
    }

    pub fn heisenberg(p: u64) -> Result<Self> {
        let field = PrimeField::new(p)?;
        let gens = vec![Element(vec![1, 0, 0]), Element(vec![0, 1, 0])];
        Ok(Self::from_backend(Backend::Heisenberg { field }, gens, true))
    }

    /// The subgroup of `GL_d(F_q)` generated by `generators` (row-major matrices).
    pub fn matrix(fq: Fq, d: usize, generators: Vec<Matrix<u64>>) -> Result<Self> {
        if d == 0 {
            return Err(SdlpError::malformed("matrix dimension must be positive"));
        }
        let mut gens = Vec::new();
        for m in &generators {
            if m.rows() != d || m.cols() != d {
                return Err(SdlpError::malformed("generator has wrong dimensions"));
            }
            if m.data().iter().any(|c| !fq.contains(*c)) {
                return Err(SdlpError::malformed("matrix entry outside the field"));
            }
            if fq.is_zero(&m.det(&fq)) {
                return Err(SdlpError::malformed("generator is singular"));
            }
            gens.push(Element(m.data().to_vec()));
        }
        let unitriangular = generators.iter().all(|m| is_unitriangular(&fq, m));
        Ok(Self::from_backend(Backend::Matrix { fq, d, unitriangular }, gens, false))
    }

    pub fn product(factors: Vec<Group>) -> Result<Self> {
        if factors.is_empty() {
            return Err(SdlpError::malformed("product needs at least one factor"));
        }
        let mut offsets = vec![0];
        for f in &factors {
            offsets.push(offsets.last().unwrap() + f.width());
        }
        let width = *offsets.last().unwrap();
        let mut gens = Vec::new();
        for (i, f) in factors.iter().enumerate() {
            for x in f.generators() {
                let mut w = Vec::with_capacity(width);
                for (j, g) in factors.iter().enumerate() {
                    if i == j {
                        w.extend_from_slice(&x.0);
                    } else {
                        w.extend_from_slice(&g.identity().0);
                    }
                }
                gens.push(Element(w));
            }
        }
        let full = factors.iter().all(|f| f.full);
        Ok(Self::from_backend(Backend::Product { factors, offsets }, gens, full))
    }

    /// `Im(psi)` encoded by preimages in `inner`.
    pub fn pair_image(inner: Group, psi: Arc<dyn Hom>) -> Self {
        let gens = inner.generators().to_vec();
        Self::from_backend(Backend::PairImage { inner, psi }, gens, false)
    }

    /// The subgroup generated by `gens`, sharing this group's backend.
    pub fn subgroup(&self, gens: Vec<Element>) -> Self {
        let gens = gens.into_iter().filter(|x| !self.is_identity(x)).collect();
        Self { backend: self.backend.clone(), gens: Arc::new(gens), full: false }
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn generators(&self) -> &[Element] {
        &self.gens
    }

    /// Whether the generating set is the backend's standard one for the whole
    /// ambient group.
    pub fn is_full(&self) -> bool {
        self.full
    }

    pub fn same_backend(&self, other: &Group) -> bool {
        Arc::ptr_eq(&self.backend, &other.backend)
    }

    /// Number of words in a code-word.
    pub fn width(&self) -> usize {
        match &*self.backend {
            Backend::Cyclic { .. } => 1,
            Backend::Vector { d, .. } => *d,
            Backend::Matrix { d, .. } => d * d,
            Backend::Heisenberg { .. } => 3,
            Backend::Product { offsets, .. } => *offsets.last().unwrap(),
            Backend::PairImage { inner, .. } => inner.width(),
        }
    }

    /// Bit length of a code-word; an upper bound for `log2 |G|`.
    pub fn codeword_bits(&self) -> u32 {
        match &*self.backend {
            Backend::Cyclic { n, .. } => bit_length(*n as u128 - 1),
            Backend::Vector { field, d } => *d as u32 * bit_length(field.p() as u128 - 1),
            Backend::Matrix { fq, d, .. } => (d * d) as u32 * bit_length(fq.q() as u128 - 1),
            Backend::Heisenberg { field } => 3 * bit_length(field.p() as u128 - 1),
            Backend::Product { factors, .. } => factors.iter().map(|f| f.codeword_bits()).sum(),
            Backend::PairImage { inner, .. } => inner.codeword_bits(),
        }
    }

    pub fn identity(&self) -> Element {
        match &*self.backend {
            Backend::Cyclic { .. } => Element(vec![0]),
            Backend::Vector { d, .. } => Element(vec![0; *d]),
            Backend::Matrix { fq, d, .. } => Element(Matrix::identity(fq, *d).into_data()),
            Backend::Heisenberg { .. } => Element(vec![0; 3]),
            Backend::Product { factors, .. } => {
                Element(factors.iter().flat_map(|f| f.identity().0).collect())
            }
            Backend::PairImage { inner, .. } => inner.identity(),
        }
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        match &*self.backend {
            Backend::Cyclic { n, .. } => Element(vec![crate::arith::add_mod(a.0[0], b.0[0], *n)]),
            Backend::Vector { field, .. } => {
                Element(a.0.iter().zip(&b.0).map(|(x, y)| field.add(x, y)).collect())
            }
            Backend::Matrix { fq, d, .. } => {
                let x = Matrix::new(*d, *d, a.0.clone());
                let y = Matrix::new(*d, *d, b.0.clone());
                Element(x.mul(fq, &y).into_data())
            }
            Backend::Heisenberg { field: f } => {
                let (x, y) = (&a.0, &b.0);
                Element(vec![
                    f.add(&x[0], &y[0]),
                    f.add(&x[1], &y[1]),
                    f.add(&f.add(&x[2], &y[2]), &f.mul(&x[0], &y[1])),
                ])
            }
            Backend::Product { factors, offsets } => {
                let mut w = Vec::with_capacity(self.width());
                for (i, f) in factors.iter().enumerate() {
                    let (lo, hi) = (offsets[i], offsets[i + 1]);
                    let x = Element(a.0[lo..hi].to_vec());
                    let y = Element(b.0[lo..hi].to_vec());
                    w.extend(f.mul(&x, &y).0);
                }
                Element(w)
            }
            Backend::PairImage { inner, .. } => inner.mul(a, b),
        }
    }

    pub fn inv(&self, a: &Element) -> Element {
        match &*self.backend {
            Backend::Cyclic { n, .. } => Element(vec![(n - a.0[0] % n) % n]),
            Backend::Vector { field, .. } => Element(a.0.iter().map(|x| field.neg(x)).collect()),
            Backend::Matrix { fq, d, .. } => {
                let x = Matrix::new(*d, *d, a.0.clone());
                Element(x.inverse(fq).expect("group elements are invertible").into_data())
            }
            Backend::Heisenberg { field: f } => {
                let x = &a.0;
                Element(vec![f.neg(&x[0]), f.neg(&x[1]), f.add(&f.neg(&x[2]), &f.mul(&x[0], &x[1]))])
            }
            Backend::Product { factors, offsets } => {
                let mut w = Vec::with_capacity(self.width());
                for (i, f) in factors.iter().enumerate() {
                    w.extend(f.inv(&Element(a.0[offsets[i]..offsets[i + 1]].to_vec())).0);
                }
                Element(w)
            }
            Backend::PairImage { inner, .. } => inner.inv(a),
        }
    }

    pub fn pow(&self, a: &Element, mut e: u128) -> Element {
        let mut acc = self.identity();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// `a^-1 b^-1 a b`.
    pub fn commutator(&self, a: &Element, b: &Element) -> Element {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(&self.inv(&ba), &ab)
    }

    pub fn label(&self, a: &Element) -> Label {
        match &*self.backend {
            Backend::PairImage { psi, .. } => psi.target().label(&psi.apply(a)),
            _ => Label(a.0.clone()),
        }
    }

    pub fn eq(&self, a: &Element, b: &Element) -> bool {
        match &*self.backend {
            Backend::PairImage { .. } => self.label(a) == self.label(b),
            _ => a == b,
        }
    }

    pub fn is_identity(&self, a: &Element) -> bool {
        self.eq(a, &self.identity())
    }

    /// Whether `a` is a well-formed element of the ambient backend.
    pub fn contains(&self, a: &Element) -> bool {
        if a.0.len() != self.width() {
            return false;
        }
        match &*self.backend {
            Backend::Cyclic { n, .. } => a.0[0] < *n,
            Backend::Vector { field, .. } => a.0.iter().all(|x| *x < field.p()),
            Backend::Matrix { fq, d, unitriangular } => {
                if a.0.iter().any(|x| !fq.contains(*x)) {
                    return false;
                }
                let m = Matrix::new(*d, *d, a.0.clone());
                !fq.is_zero(&m.det(fq)) && (!unitriangular || is_unitriangular(fq, &m))
            }
            Backend::Heisenberg { field } => a.0.iter().all(|x| *x < field.p()),
            Backend::Product { factors, offsets } => factors
                .iter()
                .enumerate()
                .all(|(i, f)| f.contains(&Element(a.0[offsets[i]..offsets[i + 1]].to_vec()))),
            Backend::PairImage { inner, .. } => inner.contains(a),
        }
    }

    /// A random element: uniform for full standard backends, a random word in
    /// the generators otherwise.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Element {
        if self.full {
            return self.uniform_ambient(rng);
        }
        let mut x = self.identity();
        if self.gens.is_empty() {
            return x;
        }
        let steps = 2 * self.gens.len() + 8;
        for _ in 0..steps {
            let g = &self.gens[rng.gen_range(0..self.gens.len())];
            let e = rng.gen_range(0..1u128 << 20);
            x = self.mul(&x, &self.pow(g, e));
        }
        x
    }

    fn uniform_ambient<R: Rng + ?Sized>(&self, rng: &mut R) -> Element {
        match &*self.backend {
            Backend::Cyclic { n, .. } => Element(vec![rng.gen_range(0..*n)]),
            Backend::Vector { field, d } => Element((0..*d).map(|_| field.random(rng)).collect()),
            Backend::Heisenberg { field } => Element((0..3).map(|_| field.random(rng)).collect()),
            Backend::Product { factors, .. } => {
                Element(factors.iter().flat_map(|f| f.random(rng).0).collect())
            }
            Backend::Matrix { .. } | Backend::PairImage { .. } => {
                unreachable!("not a full backend")
            }
        }
    }

    /// The `i`-th component of a product element.
    pub fn component(&self, a: &Element, i: usize) -> Element {
        match &*self.backend {
            Backend::Product { offsets, .. } => Element(a.0[offsets[i]..offsets[i + 1]].to_vec()),
            _ => panic!("component() on a non-product group"),
        }
    }

    pub fn factors(&self) -> Option<&[Group]> {
        match &*self.backend {
            Backend::Product { factors, .. } => Some(factors),
            _ => None,
        }
    }

    /// A multiple of the exponent of the ambient group.
    pub fn exponent_multiple(&self) -> Result<Factorization> {
        match &*self.backend {
            Backend::Cyclic { primes, .. } => {
                Ok(Factorization::from_pairs(primes.iter().map(|p| (*p as u128, 1))))
            }
            Backend::Vector { field, .. } => Ok(Factorization::prime(field.p() as u128)),
            Backend::Heisenberg { field } => {
                let p = field.p() as u128;
                Ok(Factorization::from_pairs([(p, if p == 2 { 2 } else { 1 })]))
            }
            Backend::Matrix { fq, d, .. } => gl_exponent_multiple(fq, *d),
            Backend::Product { factors, .. } => {
                let mut acc = Factorization::one();
                for f in factors {
                    acc = acc.lcm(&f.exponent_multiple()?);
                }
                Ok(acc)
            }
            Backend::PairImage { psi, .. } => psi.target().exponent_multiple(),
        }
    }

    /// Exact order of `a`.
    pub fn element_order(&self, a: &Element) -> Result<Factorization> {
        let mult = self.exponent_multiple()?;
        if !self.is_identity(&self.pow(a, mult.value().ok_or_else(too_big)?)) {
            return Err(SdlpError::internal("exponent multiple does not annihilate element"));
        }
        Ok(mult.reduce_order(|n| self.is_identity(&self.pow(a, n))))
    }

    /// Relative orders of a polycyclic series of the ambient group, if built in.
    pub fn pc_primes(&self) -> Option<Vec<u64>> {
        match &*self.backend {
            Backend::Cyclic { primes, .. } => Some(primes.clone()),
            Backend::Vector { field, d } => Some(vec![field.p(); *d]),
            Backend::Heisenberg { field } => Some(vec![field.p(); 3]),
            Backend::Matrix { fq, d, unitriangular: true } => {
                let e = fq.degree();
                Some(vec![fq.prime_field().p(); e * d * (d - 1) / 2])
            }
            Backend::Matrix { .. } => None,
            Backend::Product { factors, .. } => {
                let mut out = Vec::new();
                for f in factors {
                    out.extend(f.pc_primes()?);
                }
                Some(out)
            }
            Backend::PairImage { psi, .. } => psi.target().pc_primes(),
        }
    }

    /// Depth and leading exponent of `a` in the built-in polycyclic series;
    /// `Some(None)` for the identity, `None` if no series is built in.
    pub fn pc_lead(&self, a: &Element) -> Option<Option<(usize, u64)>> {
        match &*self.backend {
            Backend::Cyclic { primes, .. } => {
                let mut v = a.0[0];
                for (i, p) in primes.iter().enumerate() {
                    let e = v % p;
                    if e != 0 {
                        return Some(Some((i, e)));
                    }
                    v /= p;
                }
                Some(None)
            }
            Backend::Vector { .. } | Backend::Heisenberg { .. } => {
                Some(a.0.iter().enumerate().find(|(_, x)| **x != 0).map(|(i, x)| (i, *x)))
            }
            Backend::Matrix { fq, d, unitriangular: true } => {
                let e = fq.degree();
                let mut depth = 0;
                for k in 1..*d {
                    for i in 0..d - k {
                        let digits = fq.decode(a.0[i * d + i + k]);
                        if let Some(j) = digits.iter().position(|c| *c != 0) {
                            return Some(Some((depth + j, digits[j])));
                        }
                        depth += e;
                    }
                }
                Some(None)
            }
            Backend::Matrix { .. } => None,
            Backend::Product { factors, offsets } => {
                let mut base = 0;
                for (i, f) in factors.iter().enumerate() {
                    let x = Element(a.0[offsets[i]..offsets[i + 1]].to_vec());
                    if let Some((dep, e)) = f.pc_lead(&x)? {
                        return Some(Some((base + dep, e)));
                    }
                    base += f.pc_primes()?.len();
                }
                Some(None)
            }
            Backend::PairImage { psi, .. } => psi.target().pc_lead(&psi.apply(a)),
        }
    }

    /// Entry field and dimension when elements have a matrix view.
    pub fn matrix_field(&self) -> Option<(Fq, usize)> {
        match &*self.backend {
            Backend::Matrix { fq, d, .. } => Some((fq.clone(), *d)),
            Backend::Heisenberg { field } => Some((Fq::new(field.p()).ok()?, 3)),
            Backend::PairImage { psi, .. } => psi.target().matrix_field(),
            _ => None,
        }
    }

    pub fn as_matrix(&self, a: &Element) -> Option<Matrix<u64>> {
        match &*self.backend {
            Backend::Matrix { d, .. } => Some(Matrix::new(*d, *d, a.0.clone())),
            Backend::Heisenberg { .. } => {
                let (x, y, z) = (a.0[0], a.0[1], a.0[2]);
                Some(Matrix::from_rows(vec![vec![1, x, z], vec![0, 1, y], vec![0, 0, 1]]))
            }
            Backend::PairImage { psi, .. } => psi.target().as_matrix(&psi.apply(a)),
            _ => None,
        }
    }

    /// Inverse of `as_matrix` for backends whose code-words are matrices.
    pub fn from_matrix(&self, m: &Matrix<u64>) -> Option<Element> {
        match &*self.backend {
            Backend::Matrix { d, .. } if m.rows() == *d && m.cols() == *d => {
                Some(Element(m.data().to_vec()))
            }
            Backend::Heisenberg { field } if m.rows() == 3 && m.cols() == 3 => {
                is_unitriangular(field, m).then(|| Element(vec![*m.get(0, 1), *m.get(1, 2), *m.get(0, 2)]))
            }
            _ => None,
        }
    }

    /// All elements of the group generated by the generators, by closure.
    pub fn enumerate(&self, cap: usize) -> Result<Vec<Element>> {
        let mut seen: HashSet<Label> = HashSet::new();
        let mut out = vec![self.identity()];
        seen.insert(self.label(&out[0]));
        let mut queue = VecDeque::from([self.identity()]);
        while let Some(x) = queue.pop_front() {
            for g in self.gens.iter() {
                let y = self.mul(&x, g);
                if seen.insert(self.label(&y)) {
                    if out.len() >= cap {
                        return Err(SdlpError::InstanceTooLarge(format!(
                            "group has more than {cap} elements"
                        )));
                    }
                    out.push(y.clone());
                    queue.push_back(y);
                }
            }
        }
        Ok(out)
    }

    /// Order of the ambient backend when it is a fixed finite set that fits.
    pub fn ambient_order(&self) -> Option<u128> {
        match &*self.backend {
            Backend::Cyclic { n, .. } => Some(*n as u128),
            Backend::Vector { field, d } => (field.p() as u128).checked_pow(*d as u32),
            Backend::Heisenberg { field } => (field.p() as u128).checked_pow(3),
            Backend::Product { factors, .. } => factors
                .iter()
                .try_fold(1u128, |acc, f| acc.checked_mul(f.ambient_order()?)),
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        let base = match &*self.backend {
            Backend::Cyclic { n, .. } => format!("Cyclic({n})"),
            Backend::Vector { field, d } => format!("Vector({}, {d})", field.p()),
            Backend::Matrix { fq, d, .. } => {
                format!("MatrixGroup(q={}, d={d}, {} generators)", fq.q(), self.gens.len())
            }
            Backend::Heisenberg { field } => format!("Heisenberg({})", field.p()),
            Backend::Product { factors, .. } => {
                let parts: Vec<String> = factors.iter().map(|f| f.describe()).collect();
                parts.join(" x ")
            }
            Backend::PairImage { inner, psi } => {
                format!("Im[{} -> {}]", inner.describe(), psi.target().describe())
            }
        };
        if self.full {
            base
        } else {
            format!("{base}<{} gens>", self.gens.len())
        }
    }

    /// Cyclic subgroup order hint: for `Cyclic(n)` subgroups, `n / gcd(n, gens)`.
    pub fn cyclic_subgroup_order(&self) -> Option<u64> {
        match &*self.backend {
            Backend::Cyclic { n, .. } => {
                let g = self.gens.iter().fold(*n as u128, |acc, x| gcd(acc, x.0[0] as u128));
                Some((*n as u128 / g) as u64)
            }
            _ => None,
        }
    }
}

fn too_big() -> SdlpError {
    SdlpError::InstanceTooLarge("order multiple exceeds 128 bits".into())
}

pub(crate) fn is_unitriangular<F: Field<Elem = u64>>(f: &F, m: &Matrix<u64>) -> bool {
    let d = m.rows();
    (0..d).all(|i| {
        (0..d).all(|j| {
            let v = m.get(i, j);
            match i.cmp(&j) {
                std::cmp::Ordering::Equal => f.is_one(v),
                std::cmp::Ordering::Greater => f.is_zero(v),
                std::cmp::Ordering::Less => true,
            }
        })
    })
}
