//! Integer factorization (trial division + Pollard-Brent rho) standing in for the
//! quantum factoring oracle.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{gcd, is_prime_u128, mul_mod_u128};
use crate::error::{Result, SdlpError};

/// A factored positive integer: sorted `(prime, exponent)` pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Factorization {
    factors: Vec<(u128, u32)>,
}

impl Factorization {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u128, u32)>) -> Self {
        let mut map: BTreeMap<u128, u32> = BTreeMap::new();
        for (p, e) in pairs {
            if e > 0 {
                *map.entry(p).or_default() += e;
            }
        }
        Self { factors: map.into_iter().collect() }
    }

    pub fn prime(p: u128) -> Self {
        Self::from_pairs([(p, 1)])
    }

    pub fn pairs(&self) -> &[(u128, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u128> + '_ {
        self.factors.iter().map(|(p, _)| *p)
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// The represented integer; `None` if it does not fit in 128 bits.
    pub fn value(&self) -> Option<u128> {
        self.factors
            .iter()
            .try_fold(1u128, |acc, (p, e)| acc.checked_mul(p.checked_pow(*e)?))
    }

    pub fn exponent_of(&self, p: u128) -> u32 {
        self.factors.iter().find(|(q, _)| *q == p).map_or(0, |(_, e)| *e)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_pairs(self.factors.iter().chain(&other.factors).copied())
    }

    pub fn lcm(&self, other: &Self) -> Self {
        let mut map: BTreeMap<u128, u32> = self.factors.iter().copied().collect();
        for (p, e) in &other.factors {
            let slot = map.entry(*p).or_default();
            *slot = (*slot).max(*e);
        }
        Self::from_pairs(map)
    }

    /// Divides out one copy of `p`; panics if absent.
    pub fn without_one(&self, p: u128) -> Self {
        let pairs = self.factors.iter().map(|&(q, e)| if q == p { (q, e - 1) } else { (q, e) });
        Self::from_pairs(pairs)
    }

    /// `self / gcd(self, k)`.
    pub fn quotient_by_gcd(&self, k: u128) -> Self {
        if k == 0 {
            return Self::one();
        }
        let pairs = self.factors.iter().map(|&(p, e)| {
            let mut f = 0u32;
            let mut r = k;
            while r > 0 && r % p == 0 && f < e {
                r /= p;
                f += 1;
            }
            (p, e - f)
        });
        Self::from_pairs(pairs)
    }

    /// All divisors in increasing order.
    pub fn divisors(&self) -> Vec<u128> {
        let mut divs = vec![1u128];
        for &(p, e) in &self.factors {
            let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
            for d in &divs {
                let mut x = *d;
                next.push(x);
                for _ in 0..e {
                    match x.checked_mul(p) {
                        Some(y) => {
                            x = y;
                            next.push(x);
                        }
                        None => break,
                    }
                }
            }
            divs = next;
        }
        divs.sort_unstable();
        divs
    }

    /// Given that `self` is a multiple of the order of something, shrinks it to the
    /// exact order using `is_trivial_at(n)` ("the thing raised to n is trivial").
    pub fn reduce_order(&self, mut is_trivial_at: impl FnMut(u128) -> bool) -> Self {
        let mut cur = self.clone();
        for p in self.primes().collect::<Vec<_>>() {
            while cur.exponent_of(p) > 0 {
                let cand = cur.without_one(p);
                match cand.value() {
                    Some(v) if is_trivial_at(v) => cur = cand,
                    _ => break,
                }
            }
        }
        cur
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

/// Complete prime factorization of `n >= 1`; deterministic for a given seed.
pub fn factor_integer(n: u128, seed: u64) -> Factorization {
    assert!(n >= 1, "factor_integer needs n >= 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    let mut n = n;
    for p in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            pairs.push((p, e));
        }
    }
    let mut d = 41u128;
    while d < 1 << 12 && d * d <= n {
        let mut e = 0;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        if e > 0 {
            pairs.push((d, e));
        }
        d += 2;
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u128(m) {
            pairs.push((m, 1));
            continue;
        }
        let f = pollard_brent(m, &mut rng);
        stack.push(f);
        stack.push(m / f);
    }
    Factorization::from_pairs(pairs)
}

/// A nontrivial factor of the composite `n`.
fn pollard_brent(n: u128, rng: &mut impl Rng) -> u128 {
    if n % 2 == 0 {
        return 2;
    }
    if let Some(r) = perfect_square_root(n) {
        return r;
    }
    loop {
        let c = rng.gen_range(1..n);
        let mut y = rng.gen_range(0..n);
        let step = |x: u128| (mul_mod_u128(x, x, n) + c) % n;
        let m = 128u64;
        let mut g = 1u128;
        let mut r = 1u64;
        let mut q = 1u128;
        let mut x = y;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = step(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = step(y);
                    q = mul_mod_u128(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = step(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
}

fn perfect_square_root(n: u128) -> Option<u128> {
    let r = crate::arith::ceil_sqrt(n);
    (r * r == n).then_some(r)
}

/// Factorization of `base^e - 1` through its cyclotomic pieces `Phi_k(base)`, `k | e`.
pub fn factor_power_minus_one(base: u128, e: u32, seed: u64) -> Result<Factorization> {
    let total = base
        .checked_pow(e)
        .ok_or_else(|| SdlpError::InstanceTooLarge(format!("{base}^{e} exceeds 128 bits")))?;
    if e == 0 || total <= 1 {
        return Ok(Factorization::one());
    }
    let divisors: Vec<u32> = (1..=e).filter(|k| e % k == 0).collect();
    let mut cyclo: BTreeMap<u32, u128> = BTreeMap::new();
    let mut out = Factorization::one();
    for &k in &divisors {
        let mut v = base.pow(k) - 1;
        for (&d, &phi) in &cyclo {
            if k % d == 0 {
                v /= phi;
            }
        }
        cyclo.insert(k, v);
        out = out.mul(&factor_integer(v, seed ^ k as u64));
    }
    Ok(out)
}
