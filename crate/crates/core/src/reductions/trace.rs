use std::fmt;

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StepKind {
    /// Endomorphism replaced by its restriction to the stable image `σ^k(G)`.
    EndoToAuto { k: u32, r: Option<u128> },
    /// `σ` replaced by `σ^k`, one sub-instance per residue.
    PowerShift { k: u128 },
    /// Quotient solved first, then a follow-up in the kernel.
    QuotientRecursion { t0: Option<u128>, n0: Option<u128> },
    /// A base solver was applied.
    Solver { name: String },
    Note,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub depth: usize,
    pub id: usize,
    #[serde(flatten)]
    pub kind: StepKind,
    pub detail: String,
}

/// Ordered log of the reductions and solvers used for one solve.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ReductionTrace {
    pub steps: Vec<TraceStep>,
}

impl fmt::Display for ReductionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            let pad = "  ".repeat(s.depth);
            let head = match &s.kind {
                StepKind::EndoToAuto { k, r } => match r {
                    Some(r) => format!("endo-to-auto k={k} r={r}"),
                    None => format!("endo-to-auto k={k}"),
                },
                StepKind::PowerShift { k } => format!("power-shift k={k}"),
                StepKind::QuotientRecursion { t0, n0 } => match (t0, n0) {
                    (Some(t0), Some(n0)) => format!("quotient-recursion t0={t0} n0={n0}"),
                    _ => "quotient-recursion".to_string(),
                },
                StepKind::Solver { name } => format!("solver {name}"),
                StepKind::Note => "note".to_string(),
            };
            writeln!(f, "{pad}#{} {head}: {}", s.id, s.detail)?;
        }
        Ok(())
    }
}
