//! Dense univariate polynomials over a prime field, with squarefree,
//! distinct-degree and Cantor-Zassenhaus equal-degree factorization.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Field, PrimeField};

/// Coefficients stored constant term first, with no trailing zeros.
/// The zero polynomial has an empty coefficient list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    coeffs: Vec<u64>,
}

impl Poly {
    pub fn new(f: &PrimeField, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c = f.reduce(*c);
        }
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![1] }
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Poly { coeffs: vec![0, 1] }
    }

    pub fn constant(f: &PrimeField, c: u64) -> Self {
        Poly::new(f, vec![c])
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u64> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    pub fn monic(&self, f: &PrimeField) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = f.inv(&self.lead()).expect("nonzero lead");
        self.scale(f, inv)
    }

    pub fn scale(&self, f: &PrimeField, s: u64) -> Self {
        Poly::new(f, self.coeffs.iter().map(|c| f.mul(c, &s)).collect())
    }

    pub fn add(&self, f: &PrimeField, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.add(&self.coeff(i), &other.coeff(i))).collect();
        Poly::new(f, coeffs)
    }

    pub fn sub(&self, f: &PrimeField, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.sub(&self.coeff(i), &other.coeff(i))).collect();
        Poly::new(f, coeffs)
    }

    pub fn mul(&self, f: &PrimeField, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(a, b));
            }
        }
        Poly::new(f, out)
    }

    /// Quotient and remainder. Panics on division by zero.
    pub fn div_rem(&self, f: &PrimeField, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let inv_lead = f.inv(&divisor.lead()).expect("nonzero lead");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = f.mul(&rem[i], &inv_lead);
            if c == 0 {
                continue;
            }
            quot[i - dd] = c;
            for (j, d) in divisor.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                rem[idx] = f.sub(&rem[idx], &f.mul(&c, d));
            }
        }
        rem.truncate(dd);
        (Poly::new(f, quot), Poly::new(f, rem))
    }

    pub fn rem(&self, f: &PrimeField, divisor: &Self) -> Self {
        self.div_rem(f, divisor).1
    }

    /// Monic gcd.
    pub fn gcd(&self, f: &PrimeField, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(f, &b);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// Extended gcd: returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, f: &PrimeField, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(f, &r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(f, &q.mul(f, &s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(f, &q.mul(f, &t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = f.inv(&r0.lead()).unwrap();
        (r0.scale(f, inv), s0.scale(f, inv), t0.scale(f, inv))
    }

    pub fn derivative(&self, f: &PrimeField) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| f.mul(c, &f.from_u64(i as u64)))
            .collect();
        Poly::new(f, coeffs)
    }

    pub fn eval(&self, f: &PrimeField, x: u64) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, c| f.add(&f.mul(&acc, &x), c))
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, f: &PrimeField, mut e: u128, modulus: &Self) -> Self {
        let mut acc = Poly::one().rem(f, modulus);
        let mut base = self.rem(f, modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base).rem(f, modulus);
            }
            base = base.mul(f, &base).rem(f, modulus);
            e >>= 1;
        }
        acc
    }

    pub fn random_below(f: &PrimeField, degree: usize, rng: &mut impl Rng) -> Self {
        Poly::new(f, (0..degree).map(|_| f.random(rng)).collect())
    }
}

/// Factors a monic polynomial into irreducible monic factors with multiplicities.
/// Output is sorted by (degree, coefficients). Randomized splitting uses `seed`.
pub fn factor_poly(f: &PrimeField, poly: &Poly, seed: u64) -> Vec<(Poly, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    if poly.degree().unwrap_or(0) == 0 {
        return out;
    }
    for (sqf, mult) in squarefree(f, &poly.monic(f)) {
        for (block, d) in distinct_degree(f, &sqf) {
            for irr in equal_degree(f, &block, d, &mut rng) {
                out.push((irr, mult));
            }
        }
    }
    out.sort_by(|a, b| (a.0.degree(), &a.0.coeffs).cmp(&(b.0.degree(), &b.0.coeffs)));
    // Merge identical factors that may come from different squarefree layers.
    let mut merged: Vec<(Poly, u32)> = Vec::new();
    for (p, m) in out {
        match merged.last_mut() {
            Some(last) if last.0 == p => last.1 += m,
            _ => merged.push((p, m)),
        }
    }
    merged
}

fn squarefree(f: &PrimeField, poly: &Poly) -> Vec<(Poly, u32)> {
    let p = f.p() as usize;
    let mut out = Vec::new();
    let d = poly.derivative(f);
    if d.is_zero() {
        // poly = g(x^p) = g(x)^p over F_p.
        let root = Poly::new(f, poly.coeffs.iter().step_by(p).copied().collect());
        return squarefree(f, &root)
            .into_iter()
            .map(|(q, m)| (q, m * p as u32))
            .collect();
    }
    let mut c = poly.gcd(f, &d);
    let mut w = poly.div_rem(f, &c).0;
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(f, &c);
        let fac = w.div_rem(f, &y).0;
        if !fac.is_one() {
            out.push((fac.monic(f), i));
        }
        w = y;
        c = c.div_rem(f, &w).0;
        i += 1;
    }
    if !c.is_one() && !c.is_zero() {
        let root = Poly::new(f, c.coeffs.iter().step_by(p).copied().collect());
        for (q, m) in squarefree(f, &root) {
            out.push((q, m * p as u32));
        }
    }
    out
}

/// Splits a squarefree monic polynomial into products of irreducibles of equal degree.
fn distinct_degree(f: &PrimeField, poly: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let mut rest = poly.clone();
    let x = Poly::x();
    let mut h = x.rem(f, &rest);
    let mut d = 1;
    while rest.degree().unwrap_or(0) >= 2 * d {
        h = h.pow_mod(f, f.p() as u128, &rest);
        let g = rest.gcd(f, &h.sub(f, &x));
        if !g.is_one() {
            rest = rest.div_rem(f, &g).0;
            h = h.rem(f, &rest);
            out.push((g, d));
        }
        d += 1;
    }
    if let Some(deg) = rest.degree() {
        if deg > 0 {
            out.push((rest, deg));
        }
    }
    out
}

fn equal_degree(f: &PrimeField, poly: &Poly, d: usize, rng: &mut impl Rng) -> Vec<Poly> {
    let n = poly.degree().unwrap_or(0);
    if n == d {
        return vec![poly.monic(f)];
    }
    loop {
        let a = Poly::random_below(f, n, rng);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let candidate = splitting_element(f, &a, poly, d);
        let g = poly.gcd(f, &candidate);
        let gd = g.degree().unwrap_or(0);
        if gd > 0 && gd < n {
            let other = poly.div_rem(f, &g).0;
            let mut out = equal_degree(f, &g, d, rng);
            out.extend(equal_degree(f, &other, d, rng));
            return out;
        }
    }
}

/// `a^((p^d - 1)/2) - 1` for odd p, or the trace `a + a^2 + ... + a^(2^(d-1))` for p = 2.
fn splitting_element(f: &PrimeField, a: &Poly, modulus: &Poly, d: usize) -> Poly {
    let p = f.p() as u128;
    if p == 2 {
        let mut t = a.rem(f, modulus);
        let mut acc = t.clone();
        for _ in 1..d {
            t = t.mul(f, &t).rem(f, modulus);
            acc = acc.add(f, &t);
        }
        return acc;
    }
    // (p^d - 1)/2 = (p - 1)/2 * (1 + p + ... + p^(d-1)): take the norm-like product
    // a * a^p * ... * a^(p^(d-1)) first, then raise to (p - 1)/2.
    let mut t = a.rem(f, modulus);
    let mut acc = t.clone();
    for _ in 1..d {
        t = t.pow_mod(f, p, modulus);
        acc = acc.mul(f, &t).rem(f, modulus);
    }
    acc.pow_mod(f, (p - 1) / 2, modulus).sub(f, &Poly::one())
}

/// Rabin-style irreducibility test via distinct-degree factorization.
pub fn is_irreducible(f: &PrimeField, poly: &Poly) -> bool {
    let Some(n) = poly.degree() else {
        return false;
    };
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let monic = poly.monic(f);
    if !monic.gcd(f, &monic.derivative(f)).is_one() {
        return false;
    }
    let x = Poly::x();
    let mut h = x.clone();
    for _ in 1..=n / 2 {
        h = h.pow_mod(f, f.p() as u128, &monic);
        if !monic.gcd(f, &h.sub(f, &x)).is_one() {
            return false;
        }
    }
    true
}

/// The lexicographically first monic irreducible polynomial of the given degree.
pub fn first_irreducible(f: &PrimeField, degree: usize) -> Poly {
    let p = f.p();
    let mut tail = vec![0u64; degree];
    loop {
        let mut coeffs = tail.clone();
        coeffs.push(1);
        let cand = Poly::new(f, coeffs);
        if is_irreducible(f, &cand) {
            return cand;
        }
        // Increment the counter over the low coefficients.
        let mut i = 0;
        loop {
            tail[i] += 1;
            if tail[i] < p {
                break;
            }
            tail[i] = 0;
            i += 1;
            assert!(i < degree, "no irreducible polynomial found");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    #[test]
    fn factor_linear() {
        let f = f5();
        let x = Poly::x();
        assert_eq!(factor_poly(&f, &x, 0), vec![(x, 1)]);
    }

    #[test]
    fn factor_difference_of_squares() {
        let f = f5();
        let poly = Poly::new(&f, vec![4, 0, 1]); // x^2 - 1
        let got = factor_poly(&f, &poly, 7);
        assert_eq!(
            got,
            vec![(Poly::new(&f, vec![1, 1]), 1), (Poly::new(&f, vec![4, 1]), 1)]
        );
    }

    #[test]
    fn x2_x_1_irreducible_over_f5() {
        let f = f5();
        let poly = Poly::new(&f, vec![1, 1, 1]);
        // Oracle: no root among the five field elements.
        assert!((0..5).all(|a| poly.eval(&f, a) != 0));
        assert_eq!(factor_poly(&f, &poly, 3), vec![(poly.clone(), 1)]);
        assert!(is_irreducible(&f, &poly));
    }

    #[test]
    fn repeated_and_inseparable_factors() {
        let f = PrimeField::new(3).unwrap();
        // (x+1)^3 * (x^2+1)^2 over F_3
        let a = Poly::new(&f, vec![1, 1]);
        let b = Poly::new(&f, vec![1, 0, 1]);
        let poly = a.mul(&f, &a).mul(&f, &a).mul(&f, &b).mul(&f, &b);
        assert_eq!(factor_poly(&f, &poly, 1), vec![(a, 3), (b, 2)]);
    }

    #[test]
    fn characteristic_two_trace_split() {
        let f = PrimeField::new(2).unwrap();
        // x^4 + x^2 + x = x (x^3 + x + 1) ... and (x^2+x+1)(x^3+x+1)
        let a = Poly::new(&f, vec![1, 1, 1]);
        let b = Poly::new(&f, vec![1, 1, 0, 1]);
        let c = Poly::new(&f, vec![1, 0, 1, 1]);
        let poly = a.mul(&f, &b).mul(&f, &c);
        let got = factor_poly(&f, &poly, 9);
        assert_eq!(got.len(), 3);
        let prod = got.iter().fold(Poly::one(), |acc, (q, m)| {
            (0..*m).fold(acc, |acc, _| acc.mul(&f, q))
        });
        assert_eq!(prod, poly);
    }

    #[test]
    fn first_irreducible_is_irreducible() {
        for (p, e) in [(2u64, 3usize), (3, 2), (5, 3), (7, 4)] {
            let f = PrimeField::new(p).unwrap();
            let m = first_irreducible(&f, e);
            assert_eq!(m.degree(), Some(e));
            assert_eq!(factor_poly(&f, &m, 0).len(), 1);
        }
    }

    fn small_prime() -> impl Strategy<Value = u64> {
        prop::sample::select(vec![2u64, 3, 5, 7, 11, 13, 31, 97])
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn factor_product_roundtrip(p in small_prime(), tail in prop::collection::vec(0u64..97, 0..8), seed in 0u64..1000) {
            let f = PrimeField::new(p).unwrap();
            let mut coeffs = tail;
            coeffs.push(1);
            let poly = Poly::new(&f, coeffs);
            let factors = factor_poly(&f, &poly, seed);
            let prod = factors.iter().fold(Poly::one(), |acc, (q, m)| {
                (0..*m).fold(acc, |acc, _| acc.mul(&f, q))
            });
            prop_assert_eq!(prod, poly);
            for (q, _) in &factors {
                prop_assert!(q.is_monic());
                prop_assert!(is_irreducible(&f, q));
            }
        }
    }
}
