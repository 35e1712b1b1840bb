use crate::config::Ctx;
use crate::error::{Result, SdlpError};
use crate::groups::{SdlpInstance, SolutionSet};
use crate::oracles::orbit_index_period;
use crate::reductions::StepKind;

/// Walks `ρ^t(1)` over one full tail and cycle.
pub fn solve_brute(inst: &SdlpInstance, ctx: &Ctx) -> Result<SolutionSet> {
    let shape = orbit_index_period(inst, ctx.cfg())?;
    let len = shape.index + shape.period;
    if len > ctx.cfg().max_walk as u128 {
        return Err(SdlpError::OrbitCapExceeded(ctx.cfg().max_walk));
    }
    let group = &inst.group;
    let target = group.label(&inst.h);
    let mut x = group.identity();
    let mut out = SolutionSet::Empty;
    for t in 0..len {
        if group.label(&x) == target {
            out = if t < shape.index {
                SolutionSet::singleton(t)
            } else {
                SolutionSet::progression(t, shape.period)
            };
            break;
        }
        x = group.mul(&inst.g, &inst.sigma.apply(group, &x));
    }
    ctx.record(
        StepKind::Solver { name: "brute".into() },
        format!("index {}, period {}: {out}", shape.index, shape.period),
    );
    Ok(out)
}
