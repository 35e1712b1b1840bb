//! `F_p[x]`-module structure of a single matrix: minimal polynomial, minimal
//! invariant subspaces, and the field generated by a matrix with irreducible
//! minimal polynomial.

use super::{factor_poly, is_irreducible, ExtField, Field, Matrix, Poly, PrimeField, Subspace};
use crate::error::{Result, SdlpError};

/// Monic minimal polynomial coefficients (constant term first) over any field.
pub fn min_poly_coeffs<F: Field>(f: &F, b: &Matrix<F::Elem>) -> Vec<F::Elem> {
    assert!(b.is_square(), "min_poly needs a square matrix");
    let n = b.rows();
    let mut powers: Vec<Vec<F::Elem>> = vec![Matrix::identity(f, n).into_data()];
    let mut cur = Matrix::identity(f, n);
    for _ in 1..=n {
        cur = cur.mul(f, b);
        powers.push(cur.data().to_vec());
        let m = Matrix::from_cols(&powers);
        let ns = m.nullspace(f);
        if let Some(v) = ns.first() {
            // Only one dependency can appear at the first dependent power, and it
            // necessarily involves the newest power.
            let lead = v.last().unwrap().clone();
            let inv = f.inv(&lead).expect("dependency involves the top power");
            return v.iter().map(|c| f.mul(c, &inv)).collect();
        }
    }
    unreachable!("Cayley-Hamilton bounds the minimal polynomial degree by n")
}

pub fn min_poly(f: &PrimeField, b: &Matrix<u64>) -> Poly {
    Poly::new(f, min_poly_coeffs(f, b))
}

/// Evaluates `poly(B)`.
pub fn eval_poly_at_matrix(f: &PrimeField, poly: &Poly, b: &Matrix<u64>) -> Matrix<u64> {
    let n = b.rows();
    let mut acc = Matrix::zeros(f, n, n);
    for c in poly.coeffs().iter().rev() {
        acc = acc.mul(f, b).add(f, &Matrix::identity(f, n).scale(f, c));
    }
    acc
}

/// A minimal nontrivial proper `B`-invariant subspace of `space`, or `None` when
/// `space` is an irreducible module. `space` must be `B`-invariant.
pub fn invariant_subspace(
    f: &PrimeField,
    b: &Matrix<u64>,
    space: &Subspace<u64>,
    seed: u64,
) -> Option<Subspace<u64>> {
    let k = space.dim();
    if k <= 1 {
        return None;
    }
    let restricted = space
        .restrict(f, b)
        .expect("invariant_subspace requires an invariant input space");
    let m = min_poly(f, &restricted);
    let factors = factor_poly(f, &m, seed);
    if factors.len() == 1 && factors[0].1 == 1 && factors[0].0.degree() == Some(k) {
        return None;
    }
    // Any nonzero v killed by an irreducible factor g generates a cyclic submodule
    // isomorphic to F_p[x]/(g), which is simple.
    let g = &factors[0].0;
    let kernel = eval_poly_at_matrix(f, g, &restricted).nullspace(f);
    let v = kernel.first().expect("irreducible factor of min poly has a kernel");
    let deg = g.degree().unwrap();
    let mut orbit = vec![v.clone()];
    for _ in 1..deg {
        let next = restricted.mul_vec(f, orbit.last().unwrap());
        orbit.push(next);
    }
    let ambient: Vec<Vec<u64>> = orbit.iter().map(|c| space.combine(f, c)).collect();
    Some(Subspace::span(f, space.ambient(), &ambient))
}

/// The field `F_p[B]` for a matrix whose minimal polynomial is irreducible, with
/// `B` identified with the class of `x`.
#[derive(Clone, Debug)]
pub struct FieldIso {
    field: ExtField,
    matrix: Matrix<u64>,
}

pub fn field_from_matrix(f: &PrimeField, b: &Matrix<u64>) -> Result<FieldIso> {
    let m = min_poly(f, b);
    if !is_irreducible(f, &m) {
        return Err(SdlpError::NotAField);
    }
    Ok(FieldIso {
        field: ExtField::new(*f, m)?,
        matrix: b.clone(),
    })
}

impl FieldIso {
    pub fn field(&self) -> &ExtField {
        &self.field
    }

    pub fn matrix(&self) -> &Matrix<u64> {
        &self.matrix
    }

    /// Image of `B` itself.
    pub fn generator(&self) -> Vec<u64> {
        self.field.generator_x()
    }

    /// `u(B) -> u mod m`.
    pub fn poly_to_field(&self, u: &Poly) -> Vec<u64> {
        self.field.from_poly(u)
    }

    /// Field element `c -> c(B)`.
    pub fn field_to_matrix(&self, c: &[u64]) -> Matrix<u64> {
        eval_poly_at_matrix(self.field.base(), &self.field.to_poly(c), &self.matrix)
    }

    /// Inverse of `field_to_matrix` on the algebra generated by `B`.
    pub fn matrix_to_field(&self, m: &Matrix<u64>) -> Option<Vec<u64>> {
        let f = self.field.base();
        let n = self.matrix.rows();
        let mut cols = Vec::new();
        let mut cur = Matrix::identity(f, n);
        for _ in 0..self.field.degree() {
            cols.push(cur.data().to_vec());
            cur = cur.mul(f, &self.matrix);
        }
        let sys = Matrix::from_cols(&cols);
        let c = sys.solve(f, m.data())?;
        (sys.mul_vec(f, &c) == m.data()).then_some(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    fn companion() -> Matrix<u64> {
        Matrix::from_rows(vec![vec![0, 4], vec![1, 4]])
    }

    #[test]
    fn min_poly_examples() {
        let f = f5();
        assert_eq!(min_poly(&f, &Matrix::identity(&f, 3)), Poly::new(&f, vec![4, 1]));
        assert_eq!(min_poly(&f, &Matrix::zeros(&f, 2, 2)), Poly::x());
        let b = companion();
        // Oracle: B^2 + B + I = 0 by direct multiplication.
        let check = b.mul(&f, &b).add(&f, &b).add(&f, &Matrix::identity(&f, 2));
        assert!(check.is_zero(&f));
        assert_eq!(min_poly(&f, &b), Poly::new(&f, vec![1, 1, 1]));
    }

    #[test]
    fn invariant_subspace_examples() {
        let f = f5();
        let whole = Subspace::whole(&f, 2);
        assert_eq!(invariant_subspace(&f, &companion(), &whole, 0), None);

        let diag = Matrix::from_rows(vec![vec![1, 0], vec![0, 2]]);
        let w = invariant_subspace(&f, &diag, &whole, 0).unwrap();
        assert_eq!(w.dim(), 1);
        let lines = [Subspace::span(&f, 2, &[vec![1, 0]]), Subspace::span(&f, 2, &[vec![0, 1]])];
        assert!(lines.contains(&w));

        let w = invariant_subspace(&f, &Matrix::identity(&f, 2), &whole, 0).unwrap();
        assert_eq!(w.dim(), 1);
    }

    #[test]
    fn field_from_matrix_examples() {
        let f = f5();
        let iso = field_from_matrix(&f, &companion()).unwrap();
        assert_eq!(iso.field().modulus(), &Poly::new(&f, vec![1, 1, 1]));
        assert_eq!(iso.matrix_to_field(&companion()), Some(iso.generator()));

        let one = Matrix::from_rows(vec![vec![2u64]]);
        let iso = field_from_matrix(&f, &one).unwrap();
        assert_eq!(iso.field().degree(), 1);
        assert_eq!(iso.generator(), vec![2]);

        let diag = Matrix::from_rows(vec![vec![1, 0], vec![0, 2]]);
        assert_eq!(field_from_matrix(&f, &diag).unwrap_err(), SdlpError::NotAField);
    }

    #[test]
    fn field_iso_is_ring_homomorphism() {
        let f = PrimeField::new(7).unwrap();
        // companion of x^3 + x + 4? pick an irreducible cubic and conjugate.
        let m = crate::ff::first_irreducible(&f, 3);
        let c = m.coeffs();
        let comp = Matrix::from_rows(vec![
            vec![0, 0, f.neg(&c[0])],
            vec![1, 0, f.neg(&c[1])],
            vec![0, 1, f.neg(&c[2])],
        ]);
        let iso = field_from_matrix(&f, &comp).unwrap();
        let k = iso.field();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let u: Vec<u64> = (0..3).map(|_| rng.gen_range(0..7)).collect();
            let v: Vec<u64> = (0..3).map(|_| rng.gen_range(0..7)).collect();
            let mu = iso.field_to_matrix(&u);
            let mv = iso.field_to_matrix(&v);
            assert_eq!(iso.field_to_matrix(&k.mul(&u, &v)), mu.mul(&f, &mv));
            assert_eq!(iso.field_to_matrix(&k.add(&u, &v)), mu.add(&f, &mv));
            assert_eq!(iso.matrix_to_field(&mu), Some(u));
        }
    }
}
