use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Result, SdlpError};
use crate::groups::SdlpInstance;

/// Tail length and cycle length of `t -> ρ^t(1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitShape {
    pub index: u128,
    pub period: u128,
}

/// Brent cycle detection on `x0, f(x0), f(f(x0)), …`; returns `(index, period)`.
pub fn brent<T: Clone, K: Eq + Hash>(
    x0: T,
    mut f: impl FnMut(&T) -> T,
    key: impl Fn(&T) -> K,
    cap: u64,
) -> Result<(u128, u128)> {
    let mut power = 1u64;
    let mut lam = 1u64;
    let mut tortoise = x0.clone();
    let mut hare = f(&x0);
    let mut steps = 1u64;
    while key(&tortoise) != key(&hare) {
        if power == lam {
            tortoise = hare.clone();
            power *= 2;
            lam = 0;
        }
        hare = f(&hare);
        lam += 1;
        steps += 1;
        if steps > cap {
            return Err(SdlpError::OrbitCapExceeded(cap));
        }
    }
    let mut tortoise = x0.clone();
    let mut hare = x0;
    for _ in 0..lam {
        hare = f(&hare);
    }
    let mut mu = 0u64;
    while key(&tortoise) != key(&hare) {
        tortoise = f(&tortoise);
        hare = f(&hare);
        mu += 1;
        if mu > cap {
            return Err(SdlpError::OrbitCapExceeded(cap));
        }
    }
    Ok((mu as u128, lam as u128))
}

/// Exact orbit shape. Automorphisms have index 0 and their period is found by
/// reducing the multiple `n * ord(ρ^n(1))`, `n = ord(σ)`; endomorphisms are walked.
pub fn orbit_index_period(inst: &SdlpInstance, cfg: &Config) -> Result<OrbitShape> {
    if inst.is_automorphism(cfg)? {
        let n = inst.sigma_order(cfg)?;
        let nv = n.value().ok_or_else(|| SdlpError::InstanceTooLarge("order overflow".into()))?;
        let c = inst.rho(nv);
        let mult = n.mul(&inst.group.element_order(&c)?);
        if mult.value().is_none() {
            return Err(SdlpError::InstanceTooLarge("orbit period exceeds 128 bits".into()));
        }
        let one = inst.group.identity();
        let period = mult.reduce_order(|t| inst.group.eq(&inst.rho(t), &one));
        return Ok(OrbitShape { index: 0, period: period.value().unwrap() });
    }
    let group = &inst.group;
    let (index, period) = brent(
        group.identity(),
        |x| group.mul(&inst.g, &inst.sigma.apply(group, x)),
        |x| group.label(x),
        cfg.max_walk,
    )?;
    Ok(OrbitShape { index, period })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::{Matrix, PrimeField};
    use crate::groups::{Element, Endo, Group};

    fn naive_shape(inst: &SdlpInstance, limit: usize) -> OrbitShape {
        let mut seen = std::collections::HashMap::new();
        let mut x = inst.group.identity();
        for t in 0..limit {
            if let Some(&s) = seen.get(&inst.group.label(&x)) {
                return OrbitShape { index: s as u128, period: (t - s) as u128 };
            }
            seen.insert(inst.group.label(&x), t);
            x = inst.group.mul(&inst.g, &inst.sigma.apply(&inst.group, &x));
        }
        panic!("orbit longer than limit");
    }

    #[test]
    fn spec_examples() {
        let cfg = Config::default();
        let c8 = Group::cyclic(8).unwrap();
        let inst = SdlpInstance::new(c8, Endo::power(2, 8), Element(vec![1]), Element(vec![7]));
        // Oracle: orbit 0, 1, 3, 7, 7, …
        assert_eq!(naive_shape(&inst, 10), OrbitShape { index: 3, period: 1 });
        assert_eq!(orbit_index_period(&inst, &cfg).unwrap(), OrbitShape { index: 3, period: 1 });

        let f = PrimeField::new(5).unwrap();
        let b = Matrix::from_rows(vec![vec![0, 4], vec![1, 4]]);
        let v = Group::vector(5, 2).unwrap();
        let inst = SdlpInstance::new(v, Endo::linear(f, b).unwrap(), Element(vec![1, 0]), Element(vec![0, 0]));
        assert_eq!(naive_shape(&inst, 100), OrbitShape { index: 0, period: 3 });
        assert_eq!(orbit_index_period(&inst, &cfg).unwrap(), OrbitShape { index: 0, period: 3 });
    }

    #[test]
    fn cap_is_enforced() {
        let cfg = Config { max_walk: 4, ..Config::default() };
        let c = Group::cyclic(1000).unwrap();
        let inst = SdlpInstance::new(c, Endo::power(0, 1000), Element(vec![1]), Element(vec![1]));
        // σ = 0 is not injective, so the orbit is walked: 0, 1, 1, …
        assert_eq!(orbit_index_period(&inst, &cfg).unwrap(), OrbitShape { index: 1, period: 1 });
        let big = Group::cyclic(1 << 20).unwrap();
        let inst = SdlpInstance::new(big, Endo::power(2, 1 << 20), Element(vec![1]), Element(vec![1]));
        let walked = orbit_index_period(&inst, &Config { max_walk: 4, ..Config::default() });
        assert_eq!(walked, Err(SdlpError::OrbitCapExceeded(4)));
    }
}
