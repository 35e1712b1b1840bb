use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::config::Ctx;
use crate::error::{Result, SdlpError};
use crate::groups::{Backend, Element, Endo, Group, HeisenbergTop, Hom, IdentityHom, SdlpInstance, SolutionSet};
use crate::reductions::{recurse_through_quotient, solve_trivial};

use super::{solve_brute, solve_matrix_inner, solve_small_order, solve_solvable};

/// How the image instance at one chain level is solved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseTag {
    Small,
    SmallOrderAut,
    Solvable,
    /// Optional known `n` with `σ^n` inner.
    MatrixInner(Option<u64>),
}

impl FromStr for CaseTag {
    type Err = SdlpError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "small" => CaseTag::Small,
            "small-order-aut" => CaseTag::SmallOrderAut,
            "solvable" => CaseTag::Solvable,
            "matrix-inner" => CaseTag::MatrixInner(None),
            _ => match s.strip_prefix("matrix-inner:") {
                Some(n) => CaseTag::MatrixInner(Some(
                    n.parse().map_err(|_| SdlpError::malformed(format!("bad inner power in tag {s}")))?,
                )),
                None => return Err(SdlpError::malformed(format!("unknown case tag {s}"))),
            },
        })
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseTag::Small => write!(f, "small"),
            CaseTag::SmallOrderAut => write!(f, "small-order-aut"),
            CaseTag::Solvable => write!(f, "solvable"),
            CaseTag::MatrixInner(None) => write!(f, "matrix-inner"),
            CaseTag::MatrixInner(Some(n)) => write!(f, "matrix-inner:{n}"),
        }
    }
}

/// `M_i` with `ψ_i` (kernel `M_{i-1}`).
#[derive(Clone, Debug)]
pub struct ChainLevel {
    pub subgroup: Group,
    pub psi: Arc<dyn Hom>,
    pub tag: CaseTag,
}

/// A series `1 = M_0 < M_1 < … < M_k = G` of `σ`-invariant normal subgroups;
/// `levels[i - 1]` describes `M_i`.
#[derive(Clone, Debug)]
pub struct NormalChain {
    pub levels: Vec<ChainLevel>,
}

impl NormalChain {
    pub fn new(levels: Vec<ChainLevel>) -> Result<Self> {
        if levels.is_empty() {
            return Err(SdlpError::malformed("normal chain needs at least one level"));
        }
        Ok(Self { levels })
    }

    /// Spot-checks that each `M_{i-1}` lies in `ker ψ_i` and is `σ`-invariant.
    pub fn validate(&self, sigma: &Endo) -> Result<()> {
        for i in 1..self.levels.len() {
            let lower = &self.levels[i - 1].subgroup;
            let psi = &self.levels[i].psi;
            for x in lower.generators() {
                if !psi.target().is_identity(&psi.apply(x)) {
                    return Err(SdlpError::malformed(format!("level {}: generator outside the kernel", i + 1)));
                }
                if !psi.target().is_identity(&psi.apply(&sigma.apply(lower, x))) {
                    return Err(SdlpError::KernelNotInvariant.at_level(i + 1));
                }
            }
        }
        Ok(())
    }

    /// Single level solved by the polycyclic solver.
    pub fn single(group: &Group, tag: CaseTag) -> Self {
        Self {
            levels: vec![ChainLevel {
                subgroup: group.clone(),
                psi: Arc::new(IdentityHom::new(group.clone())),
                tag,
            }],
        }
    }

    /// `1 < Z(G) < G` for the Heisenberg group.
    pub fn heisenberg(group: &Group) -> Result<Self> {
        let Backend::Heisenberg { field } = group.backend() else {
            return Err(SdlpError::malformed("not a Heisenberg group"));
        };
        let center = group.subgroup(vec![Element(vec![0, 0, 1])]);
        Ok(Self {
            levels: vec![
                ChainLevel {
                    subgroup: center,
                    psi: Arc::new(IdentityHom::new(group.clone())),
                    tag: CaseTag::Solvable,
                },
                ChainLevel {
                    subgroup: group.clone(),
                    psi: Arc::new(HeisenbergTop::new(field.p())?),
                    tag: CaseTag::Solvable,
                },
            ],
        })
    }

    /// A built-in chain for backends that have one.
    pub fn builtin(group: &Group) -> Option<Self> {
        match group.backend() {
            Backend::Heisenberg { .. } if group.is_full() => Self::heisenberg(group).ok(),
            _ if group.pc_primes().is_some() => Some(Self::single(group, CaseTag::Solvable)),
            _ if group.matrix_field().is_some() => Some(Self::single(group, CaseTag::MatrixInner(None))),
            _ => None,
        }
    }
}

/// Folds quotient recursion down the chain, solving each image instance by
/// its tag, and self-verifies the result.
pub fn solve_master(inst: &SdlpInstance, chain: &NormalChain, ctx: &Ctx) -> Result<SolutionSet> {
    chain.validate(&inst.sigma)?;
    let out = solve_level(inst, chain, chain.levels.len(), ctx)?;
    if !inst.verify(&out) {
        return Err(SdlpError::internal("master solution failed verification"));
    }
    Ok(out)
}

fn solve_level(inst: &SdlpInstance, chain: &NormalChain, i: usize, ctx: &Ctx) -> Result<SolutionSet> {
    if i == 0 {
        return Ok(solve_trivial(inst));
    }
    let level = &chain.levels[i - 1];
    let kernel = if i >= 2 {
        chain.levels[i - 2].subgroup.clone()
    } else {
        inst.group.subgroup(Vec::new())
    };
    let wrap = |e: SdlpError| match e {
        SdlpError::Level { .. } => e,
        e => e.at_level(i),
    };
    let qr = recurse_through_quotient(inst, level.psi.clone(), kernel).map_err(wrap)?;
    qr.solve(
        inst,
        ctx,
        |q| dispatch(level.tag, q, ctx).map_err(wrap),
        |sub| solve_level(sub, chain, i - 1, ctx),
    )
    .map_err(wrap)
}

fn dispatch(tag: CaseTag, inst: &SdlpInstance, ctx: &Ctx) -> Result<SolutionSet> {
    match tag {
        CaseTag::Small => solve_brute(inst, ctx),
        CaseTag::SmallOrderAut => solve_small_order(inst, ctx),
        CaseTag::Solvable => solve_solvable(inst, ctx),
        CaseTag::MatrixInner(hint) => solve_matrix_inner(inst, hint, ctx),
    }
}
