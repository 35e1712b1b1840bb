use crate::config::Ctx;
use crate::error::{Result, SdlpError};
use crate::groups::{SdlpInstance, SolutionSet};
use crate::oracles::group_dlog;
use crate::reductions::{shift_to_power, StepKind};

/// Shifts to `σ^k` with `k = ord(σ)`, after which every sub-instance is a plain
/// discrete logarithm `h' = g'^t`.
pub fn solve_small_order(inst: &SdlpInstance, ctx: &Ctx) -> Result<SolutionSet> {
    let k = inst.sigma_order_value(ctx.cfg())?;
    let bound = ctx.cfg().small_order_bound;
    if k > bound {
        return Err(SdlpError::AutomorphismOrderTooLarge { order: k, bound });
    }
    ctx.record(StepKind::Solver { name: "small-order".into() }, format!("ord(sigma) = {k}"));
    let shift = shift_to_power(inst, k, ctx)?;
    let mut sols = Vec::with_capacity(shift.subs.len());
    for sub in &shift.subs {
        sols.push(ctx.nested(|| trivial_sigma(sub, ctx))?);
    }
    shift.recombine(&sols)
}

/// `σ` acts trivially: `ρ^t(1) = g^t`.
fn trivial_sigma(inst: &SdlpInstance, ctx: &Ctx) -> Result<SolutionSet> {
    let group = &inst.group;
    if group.is_identity(&inst.g) {
        return Ok(if group.is_identity(&inst.h) { SolutionSet::all() } else { SolutionSet::Empty });
    }
    let ord = group.element_order(&inst.g)?;
    let period = ord.value().ok_or_else(|| SdlpError::InstanceTooLarge("order overflow".into()))?;
    Ok(match group_dlog(group, &inst.g, &inst.h, ctx.cfg())? {
        Some(t) => SolutionSet::progression(t, period),
        None => SolutionSet::Empty,
    })
}
