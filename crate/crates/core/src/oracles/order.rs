//! Orders of matrices, field units and endomorphisms.

use std::collections::{HashMap, HashSet};
use std::sync::{Mutex, OnceLock};

use super::{brent, factor_integer, factor_power_minus_one, Factorization};
use crate::arith::{gcd, lcm};
use crate::config::Config;
use crate::error::{Result, SdlpError};
use crate::ff::{factor_poly, min_poly, Field, Fq, Matrix, PrimeField, Subspace};
use crate::groups::{Backend, Endo, EndoRep, Group, TABLE_LIMIT};

fn memo() -> &'static Mutex<HashMap<(u128, usize), Factorization>> {
    static CACHE: OnceLock<Mutex<HashMap<(u128, usize), Factorization>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Factorization of `q^e - 1`, memoized.
pub fn unit_group_order(q: u128, e: usize) -> Result<Factorization> {
    let key = (q, e + (1 << 20));
    if let Some(f) = memo().lock().unwrap().get(&key) {
        return Ok(f.clone());
    }
    let f = factor_power_minus_one(q, e as u32, 0)?;
    memo().lock().unwrap().insert(key, f.clone());
    Ok(f)
}

/// A multiple of the exponent of `GL_d(F_q)` with `q = p^f`:
/// `lcm_{e <= d}(q^e - 1) * p^k` with `p^k >= d` minimal.
pub fn gl_exponent_multiple_q(q: u128, p: u128, d: usize) -> Result<Factorization> {
    if let Some(f) = memo().lock().unwrap().get(&(q, d)) {
        return Ok(f.clone());
    }
    let mut acc = Factorization::one();
    for e in 1..=d {
        acc = acc.lcm(&unit_group_order(q, e)?);
    }
    let mut k = 0u32;
    let mut pk = 1u128;
    while pk < d as u128 {
        pk *= p;
        k += 1;
    }
    acc = acc.mul(&Factorization::from_pairs([(p, k)]));
    if acc.value().is_none() {
        return Err(SdlpError::InstanceTooLarge("GL exponent exceeds 128 bits".into()));
    }
    memo().lock().unwrap().insert((q, d), acc.clone());
    Ok(acc)
}

pub fn gl_exponent_multiple(fq: &Fq, d: usize) -> Result<Factorization> {
    gl_exponent_multiple_q(fq.q() as u128, fq.prime_field().p() as u128, d)
}

/// Exact multiplicative order of an invertible square matrix.
pub fn matrix_order<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Result<Factorization> {
    if !m.is_square() {
        return Err(SdlpError::malformed("matrix order needs a square matrix"));
    }
    if f.is_zero(&m.det(f)) {
        return Err(SdlpError::NotAnAutomorphism);
    }
    let mult = gl_exponent_multiple_q(f.size(), f.characteristic() as u128, m.rows())?;
    Ok(mult.reduce_order(|n| m.pow(f, n).is_identity(f)))
}

/// Exact order of an invertible matrix over `F_p`, from the factor degrees
/// of its minimal polynomial.
pub fn linear_order(f: &PrimeField, m: &Matrix<u64>) -> Result<Factorization> {
    if !m.is_square() {
        return Err(SdlpError::malformed("matrix order needs a square matrix"));
    }
    if m.rows() == 0 {
        return Ok(Factorization::one());
    }
    if f.is_zero(&m.det(f)) {
        return Err(SdlpError::NotAnAutomorphism);
    }
    let p = f.p() as u128;
    let mut mult = Factorization::one();
    let mut max_mult = 1u32;
    for (g, e) in factor_poly(f, &min_poly(f, m), 0) {
        mult = mult.lcm(&unit_group_order(p, g.degree().unwrap_or(0))?);
        max_mult = max_mult.max(e);
    }
    let mut k = 0u32;
    let mut pk = 1u128;
    while pk < max_mult as u128 {
        pk *= p;
        k += 1;
    }
    mult = mult.mul(&Factorization::from_pairs([(p, k)]));
    if mult.value().is_none() {
        return Err(SdlpError::InstanceTooLarge("matrix order exceeds 128 bits".into()));
    }
    Ok(mult.reduce_order(|n| m.pow(f, n).is_identity(f)))
}

/// Exact multiplicative order of a nonzero field element.
pub fn field_element_order<F: Field>(f: &F, a: &F::Elem) -> Result<Factorization> {
    if f.is_zero(a) {
        return Err(SdlpError::internal("zero has no multiplicative order"));
    }
    let mult = unit_group_order(f.size(), 1)?;
    Ok(mult.reduce_order(|n| f.is_one(&f.pow(a, n))))
}

/// Order of `a` modulo `m` (`gcd(a, m) = 1`).
pub fn multiplicative_order(a: u64, m: u64) -> Result<Factorization> {
    if m == 1 {
        return Ok(Factorization::one());
    }
    if gcd(a as u128, m as u128) != 1 {
        return Err(SdlpError::NotAnAutomorphism);
    }
    // φ(m) as a factorization
    let mut phi = Factorization::one();
    for &(p, e) in factor_integer(m as u128, 0).pairs() {
        phi = phi.mul(&Factorization::from_pairs([(p, e - 1)]));
        phi = phi.mul(&factor_integer(p - 1, 0));
    }
    Ok(phi.reduce_order(|n| crate::arith::pow_mod(a, n, m) == 1))
}

/// Exact order of `σ` on `group` (the lcm over generators of the periods of
/// `t -> σ^t(x_i)`); errors with `NotAnAutomorphism` if `σ` is not injective there.
pub fn endo_order(sigma: &Endo, group: &Group, cfg: &Config) -> Result<Factorization> {
    let gens = group.generators();
    if gens.is_empty() {
        return Ok(Factorization::one());
    }
    let multiple = match sigma.declared_order() {
        Some(o) => Some(o.clone()),
        None => order_multiple(sigma, group, cfg)?,
    };
    let fixes_gens = |n: u128| {
        let s = sigma.pow(n);
        gens.iter().all(|x| group.eq(&s.apply(group, x), x))
    };
    match multiple {
        Some(m) => {
            let v = m.value().ok_or_else(|| SdlpError::InstanceTooLarge("order overflow".into()))?;
            if !fixes_gens(v) {
                if sigma.declared_order().is_some() {
                    return Err(SdlpError::malformed("declared order does not annihilate the map"));
                }
                return brent_order(sigma, group, cfg);
            }
            Ok(m.reduce_order(fixes_gens))
        }
        None => brent_order(sigma, group, cfg),
    }
}

fn brent_order(sigma: &Endo, group: &Group, cfg: &Config) -> Result<Factorization> {
    let mut acc = 1u128;
    for x in group.generators() {
        let (index, period) = brent(
            x.clone(),
            |y| sigma.apply(group, y),
            |y| group.label(y),
            cfg.max_walk,
        )?;
        if index > 0 {
            return Err(SdlpError::NotAnAutomorphism);
        }
        acc = lcm(acc, period).ok_or_else(|| SdlpError::InstanceTooLarge("order overflow".into()))?;
    }
    Ok(factor_integer(acc, cfg.seed))
}

/// A multiple of the order from the representation, when one is cheap.
fn order_multiple(sigma: &Endo, group: &Group, cfg: &Config) -> Result<Option<Factorization>> {
    Ok(match sigma.rep() {
        EndoRep::Identity => Some(Factorization::one()),
        EndoRep::Linear { field, matrix } => {
            if !matches!(group.backend(), Backend::Vector { .. }) {
                return Ok(None);
            }
            let vecs: Vec<Vec<u64>> = group.generators().iter().map(|x| x.0.clone()).collect();
            let span = Subspace::span(field, matrix.rows(), &vecs);
            match span.restrict(field, matrix) {
                Some(r) => Some(linear_order(field, &r)?),
                None => None,
            }
        }
        EndoRep::Power { factor, modulus } => match group.backend() {
            Backend::Cyclic { .. } => {
                let m = group.cyclic_subgroup_order().unwrap();
                Some(multiplicative_order(*factor % m.max(1), m)?)
            }
            Backend::Vector { .. } => {
                if *factor == 0 {
                    return Err(SdlpError::NotAnAutomorphism);
                }
                Some(multiplicative_order(*factor, *modulus)?)
            }
            _ => None,
        },
        EndoRep::MatrixAuto(a) => {
            let t = a.tau_order();
            let inner = sigma.pow(t);
            let EndoRep::MatrixAuto(c) = inner.rep() else { return Ok(None) };
            let co = matrix_order(c.field(), c.conjugator())?;
            Some(co.mul(&factor_integer(t, 0)))
        }
        EndoRep::Table(_) => {
            let elems = group.enumerate(TABLE_LIMIT)?;
            let set: HashSet<_> = elems.iter().map(|x| group.label(x)).collect();
            let mut seen = HashSet::new();
            for x in &elems {
                let y = group.label(&sigma.apply(group, x));
                if !set.contains(&y) || !seen.insert(y) {
                    return Err(SdlpError::NotAnAutomorphism);
                }
            }
            None
        }
        EndoRep::Induced(inner) => match group.backend() {
            Backend::PairImage { inner: g, .. } => Some(endo_order(inner, g, cfg)?),
            _ => None,
        },
        EndoRep::Product(parts) => {
            let Some(factors) = group.factors() else { return Ok(None) };
            if !group.is_full() {
                return Ok(None);
            }
            let mut acc = Factorization::one();
            for (e, f) in parts.iter().zip(factors) {
                acc = acc.lcm(&endo_order(e, f, cfg)?);
            }
            Some(acc)
        }
        EndoRep::Composite(..) => None,
    })
}
