//! Instance transformations with solution recombination: endomorphism to
//! automorphism, shift to a power of `σ`, and recursion through a quotient.

mod trace;

use std::sync::Arc;

pub use trace::{ReductionTrace, StepKind, TraceStep};

use crate::config::Ctx;
use crate::error::{Result, SdlpError};
use crate::groups::{
    induced_automorphism, rho_pow_inverse_apply, Element, Endo, Group, Hom, SdlpInstance,
    SolutionSet,
};

/// Restriction of an endomorphism instance to `K = σ^k(G)`.
#[derive(Clone, Debug)]
pub struct AutomorphismReduction {
    pub k: u32,
    pub sub: SdlpInstance,
}

/// Builds `SDLP(K, σ|_K)` for `σ^k(g)`, `σ^k(h)` with `k` the code-word bit length.
pub fn reduce_to_automorphism_case(inst: &SdlpInstance) -> AutomorphismReduction {
    let k = inst.group.codeword_bits().max(1);
    let sk = inst.sigma.pow(k as u128);
    let group = &inst.group;
    let gens: Vec<Element> = group.generators().iter().map(|x| sk.apply(group, x)).collect();
    let image = group.subgroup(gens);
    let sub = SdlpInstance::new(
        image,
        inst.sigma.clone(),
        sk.apply(group, &inst.g),
        sk.apply(group, &inst.h),
    );
    AutomorphismReduction { k, sub }
}

impl AutomorphismReduction {
    /// Every solution is `≡ s (mod r)` for the sub-solutions `{s + r m}`; the
    /// tail has length at most `k`, so the first hit is found among
    /// `m <= ⌈k/r⌉ + 1`.
    pub fn recombine(&self, inst: &SdlpInstance, sub_solution: &SolutionSet, ctx: &Ctx) -> SolutionSet {
        let out = match *sub_solution {
            SolutionSet::Empty => SolutionSet::Empty,
            SolutionSet::Singleton { t0 } => {
                if inst.is_solution(t0) {
                    SolutionSet::singleton(t0)
                } else {
                    SolutionSet::Empty
                }
            }
            SolutionSet::Progression { t0: s, period: r } => {
                let steps = (self.k as u128).div_ceil(r) + 1;
                let hit = (0..=steps).map(|m| s + r * m).find(|t| inst.is_solution(*t));
                match hit {
                    None => SolutionSet::Empty,
                    Some(x0) if inst.is_solution(x0 + r) => SolutionSet::progression(x0, r),
                    Some(x0) => SolutionSet::singleton(x0),
                }
            }
        };
        ctx.record(
            StepKind::EndoToAuto { k: self.k, r: sub_solution.period() },
            format!("exhaustive tail search gives {out}"),
        );
        out
    }
}

/// The `k` instances over `σ^k` obtained by splitting `t = s + k t'`.
#[derive(Clone, Debug)]
pub struct PowerShift {
    pub k: u128,
    pub subs: Vec<SdlpInstance>,
}

pub fn shift_to_power(inst: &SdlpInstance, k: u128, ctx: &Ctx) -> Result<PowerShift> {
    if k == 0 {
        return Err(SdlpError::malformed("power shift needs k >= 1"));
    }
    let n = inst.sigma_order(ctx.cfg())?;
    let nv = n.value().ok_or_else(|| SdlpError::InstanceTooLarge("order overflow".into()))?;
    let group = &inst.group;
    let g_k = inst.rho(k);
    let sigma_k = inst.sigma.pow(k).with_order(n.quotient_by_gcd(k));
    let mut subs = Vec::with_capacity(k as usize);
    for s in 0..k {
        let h_s = rho_pow_inverse_apply(group, &inst.sigma, Some(nv), &inst.g, s, &inst.h)?;
        subs.push(SdlpInstance::new(group.clone(), sigma_k.clone(), g_k.clone(), h_s));
    }
    ctx.record(StepKind::PowerShift { k }, format!("{k} sub-instances over sigma^{k}"));
    Ok(PowerShift { k, subs })
}

impl PowerShift {
    /// Solution `t'` of sub-instance `s` yields `s + k t'`; the union is canonicalized.
    pub fn recombine(&self, solutions: &[SolutionSet]) -> Result<SolutionSet> {
        let lifted: Vec<SolutionSet> = solutions
            .iter()
            .enumerate()
            .map(|(s, sol)| sol.affine(s as u128, self.k))
            .collect();
        SolutionSet::union(&lifted)
    }
}

/// `SDLP(Im ψ, σ̄)` plus the data for the follow-up in `M = ker ψ`.
#[derive(Clone, Debug)]
pub struct QuotientReduction {
    pub quotient: SdlpInstance,
    psi: Arc<dyn Hom>,
    kernel: Group,
}

/// Quotient via the pair-image encoding; `kernel` is `ker ψ` given by generators.
pub fn recurse_through_quotient(
    inst: &SdlpInstance,
    psi: Arc<dyn Hom>,
    kernel: Group,
) -> Result<QuotientReduction> {
    let (image, induced) =
        induced_automorphism(&inst.group, psi.clone(), &inst.sigma, kernel.generators())?;
    let mut induced = induced;
    if let Some(o) = inst.sigma.declared_order() {
        induced = induced.with_order(o.clone());
    }
    let quotient = SdlpInstance::new(image, induced, inst.g.clone(), inst.h.clone());
    Ok(QuotientReduction { quotient, psi, kernel })
}

/// What remains after the quotient instance is solved.
#[derive(Clone, Debug)]
pub enum FollowUp {
    Resolved(SolutionSet),
    Pending { sub: SdlpInstance, t0: u128, n0: u128 },
}

impl FollowUp {
    /// `{t0 + n0 u : u solves the follow-up}`.
    pub fn finish(&self, sub_solution: &SolutionSet) -> SolutionSet {
        match self {
            FollowUp::Resolved(s) => *s,
            FollowUp::Pending { t0, n0, .. } => sub_solution.affine(*t0, *n0),
        }
    }
}

impl QuotientReduction {
    /// Uses an explicitly constructed quotient instance (e.g. a linear image).
    pub fn direct(quotient: SdlpInstance, psi: Arc<dyn Hom>, kernel: Group) -> Self {
        Self { quotient, psi, kernel }
    }

    pub fn psi(&self) -> &Arc<dyn Hom> {
        &self.psi
    }

    pub fn kernel(&self) -> &Group {
        &self.kernel
    }

    pub fn follow_up(&self, inst: &SdlpInstance, quotient_solution: &SolutionSet, ctx: &Ctx) -> Result<FollowUp> {
        let out = match *quotient_solution {
            SolutionSet::Empty => FollowUp::Resolved(SolutionSet::Empty),
            SolutionSet::Singleton { t0 } => FollowUp::Resolved(if inst.is_solution(t0) {
                SolutionSet::singleton(t0)
            } else {
                SolutionSet::Empty
            }),
            SolutionSet::Progression { t0, period: n0 } => {
                let n = inst.sigma_order(ctx.cfg())?;
                let nv = n.value().ok_or_else(|| SdlpError::InstanceTooLarge("order overflow".into()))?;
                let group = &inst.group;
                let g1 = inst.rho(n0);
                let h1 = rho_pow_inverse_apply(group, &inst.sigma, Some(nv), &inst.g, t0, &inst.h)?;
                let target = self.psi.target();
                if !target.is_identity(&self.psi.apply(&g1)) || !target.is_identity(&self.psi.apply(&h1)) {
                    return Err(SdlpError::internal("follow-up elements are not in the kernel"));
                }
                let sigma = inst.sigma.pow(n0).with_order(n.quotient_by_gcd(n0));
                let sub = SdlpInstance::new(self.kernel.clone(), sigma, g1, h1);
                FollowUp::Pending { sub, t0, n0 }
            }
        };
        let (t0, n0) = match &out {
            FollowUp::Pending { t0, n0, .. } => (Some(*t0), Some(*n0)),
            FollowUp::Resolved(_) => (None, None),
        };
        ctx.record(
            StepKind::QuotientRecursion { t0, n0 },
            format!("quotient {} gave {quotient_solution}", self.quotient.group.describe()),
        );
        Ok(out)
    }

    /// Solves the quotient with `solve_quotient`, then the follow-up with
    /// `solve_kernel`, and recombines.
    pub fn solve(
        &self,
        inst: &SdlpInstance,
        ctx: &Ctx,
        solve_quotient: impl FnOnce(&SdlpInstance) -> Result<SolutionSet>,
        solve_kernel: impl FnOnce(&SdlpInstance) -> Result<SolutionSet>,
    ) -> Result<SolutionSet> {
        let q = ctx.nested(|| solve_quotient(&self.quotient))?;
        match self.follow_up(inst, &q, ctx)? {
            FollowUp::Resolved(s) => Ok(s),
            f @ FollowUp::Pending { .. } => {
                let FollowUp::Pending { sub, .. } = &f else { unreachable!() };
                let s = ctx.nested(|| solve_kernel(sub))?;
                Ok(f.finish(&s))
            }
        }
    }
}

/// The instance on a trivial group: every `t` if `h = 1`, else none.
pub fn solve_trivial(inst: &SdlpInstance) -> SolutionSet {
    if inst.group.is_identity(&inst.h) {
        if inst.group.is_identity(&inst.g) {
            SolutionSet::all()
        } else {
            SolutionSet::singleton(0)
        }
    } else {
        SolutionSet::Empty
    }
}

/// Sub-instance with `σ` replaced by an endomorphism of known order.
pub fn with_sigma(inst: &SdlpInstance, sigma: Endo) -> SdlpInstance {
    SdlpInstance::new(inst.group.clone(), sigma, inst.g.clone(), inst.h.clone())
}
