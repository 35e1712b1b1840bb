use std::sync::Arc;

use rand::Rng;

use super::{is_irreducible, Field, Poly, PrimeField};
use crate::error::{Result, SdlpError};

/// `F_p[x] / (m(x))` for a monic irreducible `m` of degree `e`.
/// Elements are fixed-width coefficient vectors of length `e`, constant term first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtField {
    inner: Arc<Inner>,
}

#[derive(Debug, PartialEq, Eq)]
struct Inner {
    base: PrimeField,
    modulus: Poly,
    degree: usize,
}

impl ExtField {
    /// Builds the extension, verifying that `modulus` is monic and irreducible.
    pub fn new(base: PrimeField, modulus: Poly) -> Result<Self> {
        let degree = modulus
            .degree()
            .filter(|d| *d >= 1)
            .ok_or_else(|| SdlpError::malformed("extension modulus must have degree >= 1"))?;
        if !modulus.is_monic() {
            return Err(SdlpError::malformed("extension modulus must be monic"));
        }
        if !is_irreducible(&base, &modulus) {
            return Err(SdlpError::NotAField);
        }
        let order = (base.p() as u128).checked_pow(degree as u32);
        if order.is_none() {
            return Err(SdlpError::InstanceTooLarge(
                "field order exceeds 2^128".into(),
            ));
        }
        Ok(Self {
            inner: Arc::new(Inner {
                base,
                modulus,
                degree,
            }),
        })
    }

    pub fn base(&self) -> &PrimeField {
        &self.inner.base
    }

    pub fn modulus(&self) -> &Poly {
        &self.inner.modulus
    }

    pub fn degree(&self) -> usize {
        self.inner.degree
    }

    /// Reduces a polynomial into the field.
    pub fn from_poly(&self, poly: &Poly) -> Vec<u64> {
        let r = poly.rem(self.base(), self.modulus());
        let mut v = r.into_coeffs();
        v.resize(self.degree(), 0);
        v
    }

    pub fn to_poly(&self, a: &[u64]) -> Poly {
        Poly::new(self.base(), a.to_vec())
    }

    /// The class of `x`.
    pub fn generator_x(&self) -> Vec<u64> {
        self.from_poly(&Poly::x())
    }
}

impl Field for ExtField {
    type Elem = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        vec![0; self.degree()]
    }

    fn one(&self) -> Vec<u64> {
        let mut v = vec![0; self.degree()];
        v[0] = 1;
        v
    }

    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let f = self.base();
        a.iter().zip(b).map(|(x, y)| f.add(x, y)).collect()
    }

    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let f = self.base();
        a.iter().zip(b).map(|(x, y)| f.sub(x, y)).collect()
    }

    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        let f = self.base();
        a.iter().map(|x| f.neg(x)).collect()
    }

    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let f = self.base();
        let e = self.degree();
        let p = f.p() as u128;
        // Accumulate in u128 and reduce lazily; p < 2^64 so each product < 2^128
        // only when reduced per term.
        let mut prod = vec![0u64; 2 * e - 1];
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let t = ((*x as u128 * *y as u128) % p) as u64;
                prod[i + j] = f.add(&prod[i + j], &t);
            }
        }
        let m = self.modulus().coeffs();
        for k in (e..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            // x^k = x^(k-e) * x^e and x^e = -sum m_i x^i
            for i in 0..e {
                let idx = k - e + i;
                prod[idx] = f.sub(&prod[idx], &f.mul(&c, &m[i]));
            }
        }
        prod.truncate(e);
        prod
    }

    fn inv(&self, a: &Vec<u64>) -> Option<Vec<u64>> {
        if a.iter().all(|c| *c == 0) {
            return None;
        }
        let f = self.base();
        let (g, s, _) = self.to_poly(a).ext_gcd(f, self.modulus());
        debug_assert!(g.is_one());
        Some(self.from_poly(&s))
    }

    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|c| *c == 0)
    }

    fn from_u64(&self, v: u64) -> Vec<u64> {
        let mut out = self.zero();
        out[0] = self.base().reduce(v);
        out
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u64> {
        (0..self.degree()).map(|_| self.base().random(rng)).collect()
    }

    fn characteristic(&self) -> u64 {
        self.base().p()
    }

    fn size(&self) -> u128 {
        (self.base().p() as u128).pow(self.degree() as u32)
    }

    fn encode(&self, a: &Vec<u64>, out: &mut Vec<u64>) {
        out.extend_from_slice(a);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f25_basics() {
        let f = PrimeField::new(5).unwrap();
        let k = ExtField::new(f, Poly::new(&f, vec![1, 1, 1])).unwrap();
        let x = k.generator_x();
        // x^3 = 1 since x^2 + x + 1 divides x^3 - 1.
        assert_eq!(k.pow(&x, 3), k.one());
        assert_ne!(k.pow(&x, 1), k.one());
        for a in 0..5 {
            for b in 0..5 {
                let v = vec![a, b];
                if k.is_zero(&v) {
                    continue;
                }
                let w = k.inv(&v).unwrap();
                assert_eq!(k.mul(&v, &w), k.one());
            }
        }
        assert_eq!(k.size(), 25);
    }

    #[test]
    fn reducible_modulus_rejected() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(
            ExtField::new(f, Poly::new(&f, vec![4, 0, 1])),
            Err(SdlpError::NotAField)
        );
    }
}
