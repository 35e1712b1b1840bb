use super::Field;

/// Dense row-major matrix over a field element type `E`. Field operations take the
/// field as an explicit argument so that runtime-parameterized fields stay cheap.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone + Eq> Matrix<E> {
    pub fn new(rows: usize, cols: usize, data: Vec<E>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_cols(cols: &[Vec<E>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |col| col.len());
        let data = (0..r)
            .flat_map(|i| cols.iter().map(move |col| col[i].clone()))
            .collect();
        Self::new(r, c, data)
    }

    pub fn zeros<F: Field<Elem = E>>(f: &F, rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![f.zero(); rows * cols])
    }

    pub fn identity<F: Field<Elem = E>>(f: &F, n: usize) -> Self {
        let mut m = Self::zeros(f, n, n);
        for i in 0..n {
            m.data[i * n + i] = f.one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[E] {
        &self.data
    }

    pub fn into_data(self) -> Vec<E> {
        self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let data = (0..self.cols)
            .flat_map(|j| (0..self.rows).map(move |i| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect();
        Self::new(self.cols, self.rows, data)
    }

    pub fn map<G: Clone + Eq>(&self, mut f: impl FnMut(&E) -> G) -> Matrix<G> {
        Matrix::new(self.rows, self.cols, self.data.iter().map(&mut f).collect())
    }

    pub fn mul<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(&out.data[idx], &f.mul(a, other.get(k, j)));
                }
            }
        }
        out
    }

    pub fn add<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect();
        Self::new(self.rows, self.cols, data)
    }

    pub fn sub<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.sub(a, b)).collect();
        Self::new(self.rows, self.cols, data)
    }

    pub fn scale<F: Field<Elem = E>>(&self, f: &F, s: &E) -> Self {
        self.map(|a| f.mul(a, s))
    }

    pub fn mul_vec<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Vec<E> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
            })
            .collect()
    }

    pub fn is_identity<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.is_square() && *self == Self::identity(f, self.rows)
    }

    pub fn is_zero<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.data.iter().all(|a| f.is_zero(a))
    }

    pub fn pow<F: Field<Elem = E>>(&self, f: &F, mut e: u128) -> Self {
        assert!(self.is_square());
        let mut acc = Self::identity(f, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(f, &base);
            }
        }
        acc
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref<F: Field<Elem = E>>(&self, f: &F) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| !f.is_zero(m.get(i, c))) else {
                continue;
            };
            if piv != r {
                for j in 0..m.cols {
                    m.data.swap(piv * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.inv(m.get(r, c)).expect("pivot nonzero");
            for j in 0..m.cols {
                let v = f.mul(m.get(r, j), &inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c).clone();
                if f.is_zero(&factor) {
                    continue;
                }
                for j in 0..m.cols {
                    let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank<F: Field<Elem = E>>(&self, f: &F) -> usize {
        self.rref(f).1.len()
    }

    /// Basis of `{v : M v = 0}`, one vector per free column.
    pub fn nullspace<F: Field<Elem = E>>(&self, f: &F) -> Vec<Vec<E>> {
        let (r, pivots) = self.rref(f);
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r.get(row, free));
            }
            basis.push(v);
        }
        basis
    }

    pub fn inverse<F: Field<Elem = E>>(&self, f: &F) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(f, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, f.one());
        }
        let (r, pivots) = aug.rref(f);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let data = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| r.get(i, n + j).clone())
            .collect();
        Some(Self::new(n, n, data))
    }

    pub fn det<F: Field<Elem = E>>(&self, f: &F) -> E {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut det = f.one();
        for c in 0..n {
            let Some(piv) = (c..n).find(|&i| !f.is_zero(m.get(i, c))) else {
                return f.zero();
            };
            if piv != c {
                for j in 0..n {
                    m.data.swap(piv * n + j, c * n + j);
                }
                det = f.neg(&det);
            }
            let pv = m.get(c, c).clone();
            det = f.mul(&det, &pv);
            let inv = f.inv(&pv).unwrap();
            for i in c + 1..n {
                let factor = f.mul(m.get(i, c), &inv);
                if f.is_zero(&factor) {
                    continue;
                }
                for j in c..n {
                    let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    /// Some solution `x` of `M x = b`.
    pub fn solve<F: Field<Elem = E>>(&self, f: &F, b: &[E]) -> Option<Vec<E>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(f, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref(f);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![f.zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row, self.cols).clone();
        }
        Some(x)
    }
}

/// A linear subspace of `F^n`, stored as reduced row-echelon basis rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace<E> {
    ambient: usize,
    basis: Vec<Vec<E>>,
    pivots: Vec<usize>,
}

impl<E: Clone + Eq> Subspace<E> {
    pub fn span<F: Field<Elem = E>>(f: &F, ambient: usize, vectors: &[Vec<E>]) -> Self {
        if vectors.is_empty() {
            return Self { ambient, basis: Vec::new(), pivots: Vec::new() };
        }
        let m = Matrix::from_rows(vectors.to_vec());
        let (r, pivots) = m.rref(f);
        let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Self { ambient, basis, pivots }
    }

    pub fn whole<F: Field<Elem = E>>(f: &F, n: usize) -> Self {
        let id = Matrix::identity(f, n);
        Self::span(f, n, &(0..n).map(|i| id.row(i).to_vec()).collect::<Vec<_>>())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Pivot columns of the echelon basis.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis(&self) -> &[Vec<E>] {
        &self.basis
    }

    /// Coordinates in the echelon basis, or `None` if `v` is outside.
    pub fn coords<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Option<Vec<E>> {
        let c: Vec<E> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let back = self.combine(f, &c);
        (back == v).then_some(c)
    }

    pub fn contains<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> bool {
        self.coords(f, v).is_some()
    }

    pub fn combine<F: Field<Elem = E>>(&self, f: &F, coords: &[E]) -> Vec<E> {
        let mut out = vec![f.zero(); self.ambient];
        for (c, b) in coords.iter().zip(&self.basis) {
            if f.is_zero(c) {
                continue;
            }
            for (o, x) in out.iter_mut().zip(b) {
                *o = f.add(o, &f.mul(c, x));
            }
        }
        out
    }

    pub fn is_invariant<F: Field<Elem = E>>(&self, f: &F, b: &Matrix<E>) -> bool {
        self.basis.iter().all(|v| self.contains(f, &b.mul_vec(f, v)))
    }

    /// Matrix of `b` restricted to this (invariant) subspace in the echelon basis.
    pub fn restrict<F: Field<Elem = E>>(&self, f: &F, b: &Matrix<E>) -> Option<Matrix<E>> {
        let cols = self
            .basis
            .iter()
            .map(|v| self.coords(f, &b.mul_vec(f, v)))
            .collect::<Option<Vec<_>>>()?;
        Some(Matrix::from_cols(&cols))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::PrimeField;
    use proptest::prelude::*;

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    #[test]
    fn nullspace_examples() {
        let f = f5();
        assert!(Matrix::<u64>::identity(&f, 3).nullspace(&f).is_empty());
        assert_eq!(Matrix::<u64>::zeros(&f, 2, 2).nullspace(&f).len(), 2);
        let m = Matrix::from_rows(vec![vec![1, 2], vec![2, 4]]);
        let ns = m.nullspace(&f);
        assert_eq!(ns.len(), 1);
        // Oracle: enumerate all 25 vectors; the kernel is exactly the multiples of (3, 1).
        let kernel: Vec<(u64, u64)> = (0..5)
            .flat_map(|a| (0..5).map(move |b| (a, b)))
            .filter(|&(a, b)| (a + 2 * b) % 5 == 0)
            .collect();
        assert_eq!(kernel.len(), 5);
        assert!(kernel.contains(&(3, 1)));
        let v = &ns[0];
        assert!(kernel.contains(&(v[0], v[1])));
        assert_ne!((v[0], v[1]), (0, 0));
    }

    #[test]
    fn inverse_and_det() {
        let f = f5();
        let m = Matrix::from_rows(vec![vec![0, 4], vec![1, 4]]);
        let inv = m.inverse(&f).unwrap();
        assert!(m.mul(&f, &inv).is_identity(&f));
        assert_eq!(m.det(&f), 1);
        let sing = Matrix::from_rows(vec![vec![1, 2], vec![2, 4]]);
        assert_eq!(sing.inverse(&f), None);
        assert_eq!(sing.det(&f), 0);
    }

    #[test]
    fn subspace_coords_roundtrip() {
        let f = f5();
        let s = Subspace::span(&f, 3, &[vec![1, 2, 3], vec![0, 1, 1]]);
        assert_eq!(s.dim(), 2);
        let v = s.combine(&f, &[2, 3]);
        assert!(s.contains(&f, &v));
        assert!(!s.contains(&f, &[0, 0, 1]));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn rank_nullity(rows in 1usize..=6, cols in 1usize..=6, seed in prop::collection::vec(0u64..7, 36)) {
            let f = PrimeField::new(7).unwrap();
            let m = Matrix::new(rows, cols, seed[..rows * cols].to_vec());
            let ns = m.nullspace(&f);
            prop_assert_eq!(m.rank(&f) + ns.len(), cols);
            for v in &ns {
                prop_assert!(m.mul_vec(&f, v).iter().all(|x| *x == 0));
            }
            prop_assert_eq!(Subspace::span(&f, cols, &ns).dim(), ns.len());
            if rows == cols {
                prop_assert_eq!(m.inverse(&f).is_some(), m.det(&f) != 0);
                prop_assert_eq!(m.det(&f) != 0, ns.is_empty());
            }
        }
    }
}
