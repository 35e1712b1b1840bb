//! Base-case solvers, the chain solver, and automatic dispatch.

mod brute;
mod elementary;
mod master;
mod matrix_inner;
mod small_order;
mod solvable;

use std::fmt;
use std::str::FromStr;

pub use brute::solve_brute;
pub use elementary::{linear_data, solve_elementary_abelian};
pub use master::{solve_master, CaseTag, ChainLevel, NormalChain};
pub use matrix_inner::{
    find_conjugator, intertwiner_space, random_intertwiner, solve_matrix_inner, solve_orbit_problem,
    Intertwiner, OrbitProblemInstance, OrbitSolution,
};
pub use small_order::solve_small_order;
pub use solvable::solve_solvable;

use crate::config::Ctx;
use crate::error::{Result, SdlpError};
use crate::groups::{SdlpInstance, SolutionSet};
use crate::reductions::{reduce_to_automorphism_case, StepKind};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum SolverKind {
    #[default]
    Auto,
    SmallOrder,
    ElemAbelian,
    Solvable,
    MatrixInner,
    Master,
    Brute,
}

impl SolverKind {
    pub const ALL: [SolverKind; 7] = [
        SolverKind::Auto,
        SolverKind::SmallOrder,
        SolverKind::ElemAbelian,
        SolverKind::Solvable,
        SolverKind::MatrixInner,
        SolverKind::Master,
        SolverKind::Brute,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Auto => "auto",
            SolverKind::SmallOrder => "small-order",
            SolverKind::ElemAbelian => "elem-abelian",
            SolverKind::Solvable => "solvable",
            SolverKind::MatrixInner => "matrix-inner",
            SolverKind::Master => "master",
            SolverKind::Brute => "brute",
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverKind {
    type Err = SdlpError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| SdlpError::malformed(format!("unknown solver {s}")))
    }
}

/// Runs the chosen solver. Endomorphisms that are not automorphisms are first
/// restricted to their eventual image. Every answer is self-verified.
pub fn solve(inst: &SdlpInstance, kind: SolverKind, chain: Option<&NormalChain>, ctx: &Ctx) -> Result<SolutionSet> {
    let out = if kind != SolverKind::Brute && !inst.is_automorphism(ctx.cfg())? {
        let red = reduce_to_automorphism_case(inst);
        let sub = if red.sub.is_automorphism(ctx.cfg())? {
            ctx.nested(|| solve_automorphism(&red.sub, kind, None, ctx))?
        } else {
            ctx.nested(|| solve_brute(&red.sub, ctx))?
        };
        red.recombine(inst, &sub, ctx)
    } else {
        solve_automorphism(inst, kind, chain, ctx)?
    };
    if !inst.verify(&out) {
        return Err(SdlpError::internal(format!("solution {out} failed verification")));
    }
    Ok(out)
}

fn solve_automorphism(
    inst: &SdlpInstance,
    kind: SolverKind,
    chain: Option<&NormalChain>,
    ctx: &Ctx,
) -> Result<SolutionSet> {
    match kind {
        SolverKind::Auto => auto(inst, chain, ctx),
        SolverKind::SmallOrder => solve_small_order(inst, ctx),
        SolverKind::ElemAbelian => solve_elementary_abelian(inst, ctx),
        SolverKind::Solvable => solve_solvable(inst, ctx),
        SolverKind::MatrixInner => solve_matrix_inner(inst, None, ctx),
        SolverKind::Master => match chain {
            Some(c) => solve_master(inst, c, ctx),
            None => {
                let c = NormalChain::builtin(&inst.group)
                    .ok_or_else(|| SdlpError::NotApplicable("master solver needs a normal chain".into()))?;
                solve_master(inst, &c, ctx)
            }
        },
        SolverKind::Brute => solve_brute(inst, ctx),
    }
}

fn auto(inst: &SdlpInstance, chain: Option<&NormalChain>, ctx: &Ctx) -> Result<SolutionSet> {
    if let Some(c) = chain {
        return solve_master(inst, c, ctx);
    }
    if linear_data(inst).is_some() {
        return solve_elementary_abelian(inst, ctx);
    }
    if inst.group.pc_primes().is_some() {
        return solve_solvable(inst, ctx);
    }
    if inst.group.matrix_field().is_some() {
        match solve_matrix_inner(inst, None, ctx) {
            Err(SdlpError::NoInnerPower(_)) => {
                ctx.record(StepKind::Note, "no inner power found; falling back");
            }
            other => return other,
        }
    }
    match solve_small_order(inst, ctx) {
        Err(SdlpError::AutomorphismOrderTooLarge { .. }) => solve_brute(inst, ctx),
        other => other,
    }
}
