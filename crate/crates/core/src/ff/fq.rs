use rand::Rng;

use super::{first_irreducible, ExtField, Field, Poly, PrimeField};
use crate::arith::is_prime;
use crate::error::{Result, SdlpError};

/// `F_q`, `q = p^e`, with elements packed into a single word: the coefficient
/// vector `(c_0, ..., c_{e-1})` of the polynomial basis is written in base `p`.
/// This is the entry type of matrix-group backends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fq {
    prime: PrimeField,
    q: u64,
    ext: Option<ExtField>,
}

impl Fq {
    /// `F_q` with the lexicographically first irreducible modulus when `q` is a
    /// proper prime power.
    pub fn new(q: u64) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or_else(|| SdlpError::malformed(format!("{q} is not a prime power")))?;
        let prime = PrimeField::new(p)?;
        if e == 1 {
            return Ok(Self { prime, q, ext: None });
        }
        let modulus = first_irreducible(&prime, e as usize);
        Self::with_modulus(prime, modulus)
    }

    pub fn with_modulus(prime: PrimeField, modulus: Poly) -> Result<Self> {
        let e = modulus.degree().unwrap_or(0);
        if e <= 1 {
            let q = prime.p();
            return Ok(Self { prime, q, ext: None });
        }
        let q = (prime.p() as u128)
            .checked_pow(e as u32)
            .filter(|q| *q < (1u128 << 63))
            .ok_or_else(|| SdlpError::InstanceTooLarge("matrix entry field above 2^63".into()))?
            as u64;
        let ext = ExtField::new(prime, modulus)?;
        Ok(Self { prime, q, ext: Some(ext) })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn prime_field(&self) -> &PrimeField {
        &self.prime
    }

    pub fn degree(&self) -> usize {
        self.ext.as_ref().map_or(1, |e| e.degree())
    }

    pub fn modulus(&self) -> Option<&Poly> {
        self.ext.as_ref().map(|e| e.modulus())
    }

    pub fn is_prime(&self) -> bool {
        self.ext.is_none()
    }

    pub fn decode(&self, a: u64) -> Vec<u64> {
        let p = self.prime.p();
        let mut v = Vec::with_capacity(self.degree());
        let mut a = a;
        for _ in 0..self.degree() {
            v.push(a % p);
            a /= p;
        }
        v
    }

    pub fn encode_coeffs(&self, coeffs: &[u64]) -> u64 {
        let p = self.prime.p();
        coeffs.iter().rev().fold(0u64, |acc, c| acc * p + c)
    }

    pub fn frobenius(&self, a: u64) -> u64 {
        self.pow(&a, self.prime.p() as u128)
    }

    /// Checks that `a` is a valid code.
    pub fn contains(&self, a: u64) -> bool {
        a < self.q
    }

    /// An extension `F_{q^k}` together with an embedding of `F_q` into it.
    pub fn extension(&self, k: usize) -> Result<FqEmbedding> {
        let e = self.degree();
        let big_modulus = first_irreducible(&self.prime, e * k);
        let big = Fq::with_modulus(self.prime, big_modulus)?;
        if e == 1 {
            return Ok(FqEmbedding { big, root: None });
        }
        // Locate a root of the small modulus in the big field by exhaustive search.
        let m = self.modulus().expect("proper extension");
        if big.q > (1 << 24) {
            return Err(SdlpError::InstanceTooLarge("extension too large to embed".into()));
        }
        let root = (0..big.q)
            .find(|r| {
                let val = m
                    .coeffs()
                    .iter()
                    .rev()
                    .fold(0u64, |acc, c| big.add(&big.mul(&acc, r), c));
                val == 0
            })
            .ok_or_else(|| SdlpError::internal("subfield modulus has no root in extension"))?;
        Ok(FqEmbedding { big, root: Some(root) })
    }
}

/// An inclusion `F_q -> F_{q^k}`.
#[derive(Clone, Debug)]
pub struct FqEmbedding {
    pub big: Fq,
    root: Option<u64>,
}

impl FqEmbedding {
    pub fn embed(&self, small: &Fq, a: u64) -> u64 {
        match self.root {
            None => a,
            Some(r) => small
                .decode(a)
                .iter()
                .rev()
                .fold(0u64, |acc, c| self.big.add(&self.big.mul(&acc, &r), c)),
        }
    }
}

/// Decomposes `q = p^e`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    if is_prime(q) {
        return Some((q, 1));
    }
    let p = (2..).take_while(|d: &u64| d * d <= q).find(|d| q % d == 0)?;
    let mut e = 0;
    let mut r = q;
    while r % p == 0 {
        r /= p;
        e += 1;
    }
    (r == 1 && is_prime(p)).then_some((p, e))
}

impl Field for Fq {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        match &self.ext {
            None => self.prime.add(a, b),
            Some(ext) => self.encode_coeffs(&ext.add(&self.decode(*a), &self.decode(*b))),
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        match &self.ext {
            None => self.prime.sub(a, b),
            Some(ext) => self.encode_coeffs(&ext.sub(&self.decode(*a), &self.decode(*b))),
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        self.sub(&0, a)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        match &self.ext {
            None => self.prime.mul(a, b),
            Some(ext) => {
                if *a == 0 || *b == 0 {
                    return 0;
                }
                self.encode_coeffs(&ext.mul(&self.decode(*a), &self.decode(*b)))
            }
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        match &self.ext {
            None => self.prime.inv(a),
            Some(ext) => ext.inv(&self.decode(*a)).map(|v| self.encode_coeffs(&v)),
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn from_u64(&self, v: u64) -> u64 {
        self.prime.reduce(v)
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.q)
    }
    fn characteristic(&self) -> u64 {
        self.prime.p()
    }
    fn size(&self) -> u128 {
        self.q as u128
    }
    fn encode(&self, a: &u64, out: &mut Vec<u64>) {
        out.push(*a);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn f9_is_a_field() {
        let k = Fq::new(9).unwrap();
        for a in 1..9 {
            let b = k.inv(&a).unwrap();
            assert_eq!(k.mul(&a, &b), 1);
        }
        // multiplicative group is cyclic of order 8
        let has_generator = (1..9u64).any(|g| (1..8u128).all(|e| k.pow(&g, e) != 1));
        assert!(has_generator);
    }

    #[test]
    fn embedding_is_a_ring_map() {
        let k = Fq::new(4).unwrap();
        let emb = k.extension(2).unwrap();
        assert_eq!(emb.big.q(), 16);
        for a in 0..4 {
            for b in 0..4 {
                let prod = emb.embed(&k, k.mul(&a, &b));
                assert_eq!(prod, emb.big.mul(&emb.embed(&k, a), &emb.embed(&k, b)));
                let sum = emb.embed(&k, k.add(&a, &b));
                assert_eq!(sum, emb.big.add(&emb.embed(&k, a), &emb.embed(&k, b)));
            }
        }
    }
}
