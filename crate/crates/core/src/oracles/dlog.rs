//! Discrete logarithms: brute force, baby-step giant-step, Pollard rho and
//! Pohlig-Hellman over any domain with a canonical key.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Factorization;
use crate::arith::{ceil_sqrt, inv_mod_u128, mul_mod_u128};
use crate::config::{Config, DlogOracle};
use crate::error::{Result, SdlpError};
use crate::ff::{Field, Matrix};
use crate::groups::{Element, Group, Label};

/// Orders at or below this are searched exhaustively.
pub const BRUTE_LIMIT: u128 = 1 << 10;

/// A multiplicative structure in which discrete logarithms are taken.
pub trait DlogDomain {
    type E: Clone;
    type K: Hash + Eq;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn one(&self) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
    fn key(&self, a: &Self::E) -> Self::K;

    fn same(&self, a: &Self::E, b: &Self::E) -> bool {
        self.key(a) == self.key(b)
    }

    fn pow(&self, a: &Self::E, mut e: u128) -> Self::E {
        let mut acc = self.one();
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
}

pub struct GroupDomain<'a>(pub &'a Group);

impl DlogDomain for GroupDomain<'_> {
    type E = Element;
    type K = Label;
    fn mul(&self, a: &Element, b: &Element) -> Element {
        self.0.mul(a, b)
    }
    fn one(&self) -> Element {
        self.0.identity()
    }
    fn inv(&self, a: &Element) -> Element {
        self.0.inv(a)
    }
    fn key(&self, a: &Element) -> Label {
        self.0.label(a)
    }
    fn pow(&self, a: &Element, e: u128) -> Element {
        self.0.pow(a, e)
    }
}

/// The unit group of a field.
pub struct FieldDomain<'a, F: Field>(pub &'a F);

impl<F: Field> DlogDomain for FieldDomain<'_, F> {
    type E = F::Elem;
    type K = F::Elem;
    fn mul(&self, a: &F::Elem, b: &F::Elem) -> F::Elem {
        self.0.mul(a, b)
    }
    fn one(&self) -> F::Elem {
        self.0.one()
    }
    fn inv(&self, a: &F::Elem) -> F::Elem {
        self.0.inv(a).expect("unit")
    }
    fn key(&self, a: &F::Elem) -> F::Elem {
        a.clone()
    }
}

/// Invertible `n x n` matrices.
pub struct MatrixDomain<'a, F: Field> {
    pub field: &'a F,
    pub n: usize,
}

impl<F: Field> DlogDomain for MatrixDomain<'_, F> {
    type E = Matrix<F::Elem>;
    type K = Vec<F::Elem>;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E {
        a.mul(self.field, b)
    }
    fn one(&self) -> Self::E {
        Matrix::identity(self.field, self.n)
    }
    fn inv(&self, a: &Self::E) -> Self::E {
        a.inverse(self.field).expect("invertible")
    }
    fn key(&self, a: &Self::E) -> Vec<F::Elem> {
        a.data().to_vec()
    }
    fn pow(&self, a: &Self::E, e: u128) -> Self::E {
        a.pow(self.field, e)
    }
}

/// Smallest `t < bound` with `base^t = target`, by exhaustive search.
pub fn dlog_brute<D: DlogDomain>(dom: &D, base: &D::E, target: &D::E, bound: u128) -> Option<u128> {
    let key = dom.key(target);
    let mut x = dom.one();
    for t in 0..bound.max(1) {
        if dom.key(&x) == key {
            return Some(t);
        }
        x = dom.mul(&x, base);
    }
    None
}

/// Smallest `t` with `base^t = target`, assuming `ord(base) <= bound`.
pub fn dlog_bsgs<D: DlogDomain>(
    dom: &D,
    base: &D::E,
    target: &D::E,
    bound: u128,
    mem: u64,
) -> Result<Option<u128>> {
    let m = ceil_sqrt(bound.max(1)).max(1);
    if m > mem as u128 {
        return Err(SdlpError::InstanceTooLarge(format!(
            "baby-step table of {m} entries exceeds cap {mem}"
        )));
    }
    let mut table: HashMap<D::K, u128> = HashMap::with_capacity(m as usize);
    let mut x = dom.one();
    for j in 0..m {
        table.entry(dom.key(&x)).or_insert(j);
        x = dom.mul(&x, base);
    }
    // x = base^m now
    let giant = dom.inv(&x);
    let mut gamma = target.clone();
    for i in 0..=m {
        if let Some(j) = table.get(&dom.key(&gamma)) {
            let t = i * m + j;
            if dom.same(&dom.pow(base, t), target) {
                return Ok(Some(t));
            }
        }
        gamma = dom.mul(&gamma, &giant);
    }
    Ok(None)
}

fn partition<K: Hash>(k: &K) -> u64 {
    let mut h = DefaultHasher::new();
    k.hash(&mut h);
    h.finish() % 3
}

/// Pollard rho for `base` of prime order `ell`; `None` if `target` is not found
/// in `<base>` after several restarts.
pub fn dlog_rho<D: DlogDomain>(
    dom: &D,
    base: &D::E,
    target: &D::E,
    ell: u128,
    seed: u64,
    max_steps: u64,
) -> Result<Option<u128>> {
    if dom.same(target, &dom.one()) {
        return Ok(Some(0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let step = |x: &D::E, a: u128, b: u128| -> (D::E, u128, u128) {
        match partition(&dom.key(x)) {
            0 => (dom.mul(x, target), a, (b + 1) % ell),
            1 => (dom.mul(x, x), mul_mod_u128(a, 2, ell), mul_mod_u128(b, 2, ell)),
            _ => (dom.mul(x, base), (a + 1) % ell, b),
        }
    };
    let mut steps = 0u64;
    for _attempt in 0..8 {
        let a0 = rng.gen_range(0..ell);
        let b0 = rng.gen_range(0..ell);
        let x0 = dom.mul(&dom.pow(base, a0), &dom.pow(target, b0));
        let (mut xt, mut at, mut bt) = (x0.clone(), a0, b0);
        let (mut xh, mut ah, mut bh) = step(&x0, a0, b0);
        // Brent: power-of-two checkpoints.
        let mut power = 1u64;
        let mut lam = 1u64;
        while !dom.same(&xt, &xh) {
            if power == lam {
                xt = xh.clone();
                at = ah;
                bt = bh;
                power *= 2;
                lam = 0;
            }
            let next = step(&xh, ah, bh);
            xh = next.0;
            ah = next.1;
            bh = next.2;
            lam += 1;
            steps += 1;
            if steps > max_steps {
                return Err(SdlpError::OrbitCapExceeded(max_steps));
            }
        }
        // at + s bt = ah + s bh  (mod ell)
        let db = (bt + ell - bh) % ell;
        if db == 0 {
            continue;
        }
        let da = (ah + ell - at) % ell;
        let s = mul_mod_u128(da, inv_mod_u128(db, ell).expect("ell prime"), ell);
        if dom.same(&dom.pow(base, s), target) {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

/// Smallest `t >= 0` with `base^t = target` given `ord(base) <= bound`.
pub fn dlog<D: DlogDomain>(
    dom: &D,
    base: &D::E,
    target: &D::E,
    bound: u128,
    cfg: &Config,
) -> Result<Option<u128>> {
    if dom.same(target, &dom.one()) {
        return Ok(Some(0));
    }
    let found = if bound <= BRUTE_LIMIT || cfg.oracle == DlogOracle::Brute {
        if bound > cfg.max_walk as u128 {
            return Err(SdlpError::InstanceTooLarge(format!(
                "exhaustive search over {bound} exponents exceeds cap"
            )));
        }
        dlog_brute(dom, base, target, bound)
    } else {
        dlog_bsgs(dom, base, target, bound, cfg.bsgs_mem)?
    };
    debug_assert!(found.map_or(true, |t| dom.same(&dom.pow(base, t), target)));
    Ok(found)
}

fn dlog_prime<D: DlogDomain>(
    dom: &D,
    base: &D::E,
    target: &D::E,
    ell: u128,
    cfg: &Config,
    salt: u64,
) -> Result<Option<u128>> {
    if dom.same(target, &dom.one()) {
        return Ok(Some(0));
    }
    match cfg.oracle {
        _ if ell <= BRUTE_LIMIT => Ok(dlog_brute(dom, base, target, ell)),
        DlogOracle::Brute => dlog(dom, base, target, ell, cfg),
        DlogOracle::Bsgs => dlog_bsgs(dom, base, target, ell, cfg.bsgs_mem),
        DlogOracle::Rho => dlog_rho(dom, base, target, ell, cfg.seed ^ salt, cfg.max_walk.max(1 << 40)),
    }
}

/// Smallest `t` with `base^t = target`, where `order` is the exact order of
/// `base`. Pohlig-Hellman reduces to prime-order subproblems.
pub fn dlog_with_order<D: DlogDomain>(
    dom: &D,
    base: &D::E,
    target: &D::E,
    order: &Factorization,
    cfg: &Config,
) -> Result<Option<u128>> {
    let n = order
        .value()
        .ok_or_else(|| SdlpError::InstanceTooLarge("order exceeds 128 bits".into()))?;
    if dom.same(target, &dom.one()) {
        return Ok(Some(0));
    }
    if n <= BRUTE_LIMIT {
        return Ok(dlog_brute(dom, base, target, n));
    }
    let mut residue = 0u128;
    let mut modulus = 1u128;
    for &(ell, e) in order.pairs() {
        let pe = ell.pow(e);
        let cof = n / pe;
        let gamma = dom.pow(base, cof);
        let eta = dom.pow(target, cof);
        let gamma1 = dom.pow(&gamma, ell.pow(e - 1));
        let mut x = 0u128;
        let mut ellk = 1u128;
        for k in 0..e {
            let shifted = dom.mul(&eta, &dom.inv(&dom.pow(&gamma, x)));
            let delta = dom.pow(&shifted, ell.pow(e - 1 - k));
            match dlog_prime(dom, &gamma1, &delta, ell, cfg, (ell as u64) ^ k as u64)? {
                Some(d) => x += d * ellk,
                None => return Ok(None),
            }
            ellk = ellk.saturating_mul(ell);
        }
        // CRT: t = residue (mod modulus), t = x (mod pe)
        let inv = inv_mod_u128(modulus % pe, pe).expect("coprime moduli");
        let diff = (x + pe - residue % pe) % pe;
        let k = mul_mod_u128(diff, inv, pe);
        residue += modulus * k;
        modulus *= pe;
    }
    let t = residue % n;
    Ok(dom.same(&dom.pow(base, t), target).then_some(t))
}

/// Smallest `t` with `base^t = target` in a labelled group.
pub fn group_dlog(group: &Group, base: &Element, target: &Element, cfg: &Config) -> Result<Option<u128>> {
    let order = group.element_order(base)?;
    dlog_with_order(&GroupDomain(group), base, target, &order, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::{ExtField, Poly, PrimeField};

    struct ModP(u64);

    impl DlogDomain for ModP {
        type E = u64;
        type K = u64;
        fn mul(&self, a: &u64, b: &u64) -> u64 {
            crate::arith::mul_mod(*a, *b, self.0)
        }
        fn one(&self) -> u64 {
            1
        }
        fn inv(&self, a: &u64) -> u64 {
            crate::arith::inv_mod(*a, self.0).unwrap()
        }
        fn key(&self, a: &u64) -> u64 {
            *a
        }
    }

    #[test]
    fn spec_examples() {
        let cfg = Config::default();
        let dom = ModP(101);
        assert_eq!(dlog(&dom, &2, &1, 100, &cfg).unwrap(), Some(0));
        assert_eq!(dlog(&dom, &2, &32, 100, &cfg).unwrap(), Some(5));

        let f = PrimeField::new(5).unwrap();
        let k = ExtField::new(f, Poly::new(&f, vec![1, 1, 1])).unwrap();
        let x = k.generator_x();
        // Oracle: enumerate the powers of x; <x> has three elements.
        let powers: Vec<Vec<u64>> = (0..3).map(|e| k.pow(&x, e)).collect();
        assert_eq!(k.pow(&x, 3), k.one());
        for (e, target) in powers.iter().enumerate() {
            let got = dlog(&FieldDomain(&k), &x, target, 24, &cfg).unwrap();
            assert_eq!(got, Some(e as u128));
        }
        let outside = vec![2, 0];
        assert!(!powers.contains(&outside));
        assert_eq!(dlog(&FieldDomain(&k), &x, &outside, 24, &cfg).unwrap(), None);
    }

    #[test]
    fn bsgs_returns_smallest_exponent() {
        let cfg = Config::default();
        let p = 1_000_003u64;
        let dom = ModP(p);
        let g = 2u64;
        for t in [0u128, 1, 17, 999, 123_456, 1_000_000] {
            let target = dom.pow(&g, t);
            let got = dlog_bsgs(&dom, &g, &target, (p - 1) as u128, cfg.bsgs_mem).unwrap().unwrap();
            assert_eq!(dom.pow(&g, got), target);
            assert!(got <= t);
        }
    }

    #[test]
    fn pohlig_hellman_and_rho_agree() {
        let p = 1_000_003u64;
        let dom = ModP(p);
        let n = super::super::factor_integer((p - 1) as u128, 0);
        let g = 2u64;
        let order = n.reduce_order(|e| dom.pow(&g, e) == 1);
        for oracle in [DlogOracle::Bsgs, DlogOracle::Rho, DlogOracle::Brute] {
            let cfg = Config { oracle, ..Config::default() };
            for t in [5u128, 77_777, 500_000] {
                let target = dom.pow(&g, t);
                let got = dlog_with_order(&dom, &g, &target, &order, &cfg).unwrap().unwrap();
                assert_eq!(got, t % order.value().unwrap());
            }
        }
        // a non-residue is outside the subgroup generated by a square
        let sq = dom.pow(&g, 2);
        let sq_order = order.reduce_order(|e| dom.pow(&sq, e) == 1);
        let cfg = Config::default();
        assert_eq!(dlog_with_order(&dom, &sq, &g, &sq_order, &cfg).unwrap(), None);
    }

    #[test]
    fn rho_on_prime_order_subgroup() {
        // 2^31 - 1 is prime; work in the order-q subgroup for q | p - 1.
        let p = 2_147_483_647u64;
        let dom = ModP(p);
        let q = 331u128; // divides p - 1
        let n = 3u64.pow(2) * 7 * 11 * 31 * 151 * 331;
        assert_eq!(n as u128 * 2, (p - 1) as u128);
        let base = dom.pow(&7, ((p - 1) as u128) / q);
        assert_ne!(base, 1);
        let target = dom.pow(&base, 123);
        let got = dlog_rho(&dom, &base, &target, q, 1, 1 << 30).unwrap();
        assert_eq!(got, Some(123));
    }

    #[test]
    fn memory_cap_reported() {
        let dom = ModP(1_000_003);
        let err = dlog_bsgs(&dom, &2, &3, 1 << 40, 1 << 10).unwrap_err();
        assert!(matches!(err, SdlpError::InstanceTooLarge(_)));
    }
}
