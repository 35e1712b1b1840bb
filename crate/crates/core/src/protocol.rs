//! Semidirect-product key exchange (SPDKE), transcripts, and the key-recovery
//! attack through the SDLP solvers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{Config, Ctx};
use crate::error::{Result, SdlpError};
use crate::ff::{Field, Fq, Matrix};
use crate::groups::{rho_pow, Element, Endo, Group, Label, SdlpInstance, SolutionSet};
use crate::oracles::orbit_index_period;
use crate::solvers::{solve, NormalChain, SolverKind};

/// A group, an endomorphism and a public base element.
#[derive(Clone, Debug)]
pub struct Platform {
    pub group: Group,
    pub sigma: Endo,
    pub g: Element,
    pub chain: Option<NormalChain>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Secrets {
    pub x: u128,
    pub y: u128,
}

/// Public values `A = ρ^x(1)`, `B = ρ^y(1)` and both derived keys.
#[derive(Clone, Debug)]
pub struct ExchangeTranscript {
    pub group: Group,
    pub sigma: Endo,
    pub g: Element,
    pub a: Element,
    pub b: Element,
    pub secrets: Option<Secrets>,
    pub k_a: Element,
    pub k_b: Element,
}

impl ExchangeTranscript {
    pub fn key_label(&self) -> Label {
        self.group.label(&self.k_a)
    }

    pub fn without_secrets(&self) -> Self {
        Self { secrets: None, ..self.clone() }
    }
}

/// Runs both sides of the exchange: `K_A = A σ^x(B)`, `K_B = B σ^y(A)`.
pub fn spdke_exchange(group: &Group, sigma: &Endo, g: &Element, x: u128, y: u128) -> Result<ExchangeTranscript> {
    if x == 0 || y == 0 {
        return Err(SdlpError::malformed("secret exponents must be positive"));
    }
    let a = rho_pow(group, sigma, g, x);
    let b = rho_pow(group, sigma, g, y);
    let k_a = group.mul(&a, &sigma.pow(x).apply(group, &b));
    let k_b = group.mul(&b, &sigma.pow(y).apply(group, &a));
    if !group.eq(&k_a, &k_b) {
        return Err(SdlpError::internal("exchange keys differ"));
    }
    Ok(ExchangeTranscript {
        group: group.clone(),
        sigma: sigma.clone(),
        g: g.clone(),
        a,
        b,
        secrets: Some(Secrets { x, y }),
        k_a,
        k_b,
    })
}

/// Draws `x, y` from `[1, index + period)` when the orbit shape is computable,
/// else from `[1, 2^32)`.
pub fn draw_secrets<R: Rng + ?Sized>(platform: &Platform, cfg: &Config, rng: &mut R) -> Secrets {
    let probe = SdlpInstance::new(
        platform.group.clone(),
        platform.sigma.clone(),
        platform.g.clone(),
        platform.group.identity(),
    );
    let bound = match orbit_index_period(&probe, cfg) {
        Ok(shape) => (shape.index + shape.period).max(2),
        Err(_) => 1 << 32,
    };
    Secrets { x: rng.gen_range(1..bound), y: rng.gen_range(1..bound) }
}

#[derive(Clone, Debug)]
pub struct AttackOutcome {
    pub solution: SolutionSet,
    /// The exponent used, a member of Alice's solution class.
    pub x: u128,
    pub key: Element,
}

impl AttackOutcome {
    pub fn matches(&self, transcript: &ExchangeTranscript) -> bool {
        transcript.group.eq(&self.key, &transcript.k_a)
    }
}

/// Solves `SDLP(g, A)` and rebuilds the key as `A σ^{x'}(B)`.
pub fn spdke_attack(
    transcript: &ExchangeTranscript,
    kind: SolverKind,
    chain: Option<&NormalChain>,
    ctx: &Ctx,
) -> Result<AttackOutcome> {
    let t = transcript;
    let inst = SdlpInstance::new(t.group.clone(), t.sigma.clone(), t.g.clone(), t.a.clone());
    let solution = solve(&inst, kind, chain, ctx)?;
    let x = solution.min().ok_or(SdlpError::NoSolution)?;
    let key = t.group.mul(&t.a, &t.sigma.pow(x).apply(&t.group, &t.b));
    Ok(AttackOutcome { solution, x, key })
}

/// Upper-unitriangular `3 × 3` matrices over `F_p` with conjugation by a random
/// invertible upper-triangular matrix, a random non-central `g`, and the chain
/// `1 < Z(G) < G`.
pub fn heisenberg_instance(p: u64, seed: u64) -> Result<Platform> {
    if p == 2 {
        return Err(SdlpError::malformed("Heisenberg platform needs an odd prime"));
    }
    let group = Group::heisenberg(p)?;
    let fq = Fq::new(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Matrix::identity(&fq, 3);
    for i in 0..3 {
        c.set(i, i, rng.gen_range(1..p));
        for j in i + 1..3 {
            c.set(i, j, rng.gen_range(0..p));
        }
    }
    debug_assert!(!fq.is_zero(&c.det(&fq)));
    let sigma = Endo::conjugation(fq, c)?;
    let g = loop {
        let g = group.random(&mut rng);
        if g.0[0] != 0 || g.0[1] != 0 {
            break g;
        }
    };
    let chain = NormalChain::heisenberg(&group)?;
    Ok(Platform { group, sigma, g, chain: Some(chain) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_exponents() {
        let pf = heisenberg_instance(5, 3).unwrap();
        let t = spdke_exchange(&pf.group, &pf.sigma, &pf.g, 1, 1).unwrap();
        assert_eq!(t.a, pf.g);
        assert_eq!(t.b, pf.g);
        let expect = pf.group.mul(&pf.g, &pf.sigma.apply(&pf.group, &pf.g));
        assert!(pf.group.eq(&t.k_a, &expect));
    }

    #[test]
    fn zero_exponent_is_rejected() {
        let pf = heisenberg_instance(3, 0).unwrap();
        assert!(spdke_exchange(&pf.group, &pf.sigma, &pf.g, 0, 2).is_err());
    }
}
