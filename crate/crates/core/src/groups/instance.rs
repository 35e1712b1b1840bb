use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use super::{rho_pow, Element, Endo, Group};
use crate::arith::gcd;
use crate::config::Config;
use crate::error::{Result, SdlpError};
use crate::oracles::{endo_order, Factorization};

/// The set of all solutions `t >= 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SolutionSet {
    Empty,
    Singleton { t0: u128 },
    Progression { t0: u128, period: u128 },
}

impl SolutionSet {
    pub fn singleton(t0: u128) -> Self {
        SolutionSet::Singleton { t0 }
    }

    pub fn progression(t0: u128, period: u128) -> Self {
        assert!(period > 0, "progression period must be positive");
        SolutionSet::Progression { t0, period }
    }

    /// Every `t >= 0`.
    pub fn all() -> Self {
        Self::progression(0, 1)
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, SolutionSet::Empty)
    }

    pub fn min(&self) -> Option<u128> {
        match self {
            SolutionSet::Empty => None,
            SolutionSet::Singleton { t0 } | SolutionSet::Progression { t0, .. } => Some(*t0),
        }
    }

    pub fn period(&self) -> Option<u128> {
        match self {
            SolutionSet::Progression { period, .. } => Some(*period),
            _ => None,
        }
    }

    pub fn contains(&self, t: u128) -> bool {
        match *self {
            SolutionSet::Empty => false,
            SolutionSet::Singleton { t0 } => t == t0,
            SolutionSet::Progression { t0, period } => t >= t0 && (t - t0) % period == 0,
        }
    }

    /// Members below `bound`, in increasing order.
    pub fn members_below(&self, bound: u128) -> Vec<u128> {
        match *self {
            SolutionSet::Empty => Vec::new(),
            SolutionSet::Singleton { t0 } => if t0 < bound { vec![t0] } else { Vec::new() },
            SolutionSet::Progression { t0, period } => {
                let mut out = Vec::new();
                let mut t = t0;
                while t < bound {
                    out.push(t);
                    t = match t.checked_add(period) {
                        Some(v) => v,
                        None => break,
                    };
                }
                out
            }
        }
    }

    /// Image under `t -> a + b t`.
    pub fn affine(&self, a: u128, b: u128) -> Self {
        match *self {
            SolutionSet::Empty => SolutionSet::Empty,
            SolutionSet::Singleton { t0 } => Self::singleton(a + b * t0),
            SolutionSet::Progression { t0, period } => Self::progression(a + b * t0, b * period),
        }
    }

    /// Canonical union of sets that together form a single set of this kind.
    pub fn union(sets: &[SolutionSet]) -> Result<Self> {
        let mut offsets = Vec::new();
        let mut period = 0u128;
        let mut singles = Vec::new();
        for s in sets {
            match *s {
                SolutionSet::Empty => {}
                SolutionSet::Singleton { t0 } => singles.push(t0),
                SolutionSet::Progression { t0, period: p } => {
                    offsets.push(t0);
                    period = gcd(period, p);
                }
            }
        }
        if offsets.is_empty() {
            singles.sort_unstable();
            singles.dedup();
            return match singles.as_slice() {
                [] => Ok(SolutionSet::Empty),
                [t] => Ok(Self::singleton(*t)),
                _ => Err(SdlpError::internal("union of distinct singletons")),
            };
        }
        let base = *offsets.iter().min().unwrap();
        for o in &offsets {
            period = gcd(period, o - base);
        }
        let out = Self::progression(base, period);
        if singles.iter().any(|t| !out.contains(*t)) {
            return Err(SdlpError::internal("singleton outside progression in union"));
        }
        Ok(out)
    }
}

impl fmt::Display for SolutionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolutionSet::Empty => write!(f, "empty"),
            SolutionSet::Singleton { t0 } => write!(f, "{{{t0}}}"),
            SolutionSet::Progression { t0, period } => write!(f, "{{{t0} + {period}k}}"),
        }
    }
}

/// One SDLP question: find all `t` with `h = ρ^t(1)` for `ρ(x) = g σ(x)`.
#[derive(Clone, Debug)]
pub struct SdlpInstance {
    pub group: Group,
    pub sigma: Endo,
    pub g: Element,
    pub h: Element,
    order: Arc<OnceLock<Factorization>>,
}

impl SdlpInstance {
    pub fn new(group: Group, sigma: Endo, g: Element, h: Element) -> Self {
        Self { group, sigma, g, h, order: Arc::new(OnceLock::new()) }
    }

    /// Records the exact order of `σ` on this group.
    pub fn with_sigma_order(self, order: Factorization) -> Self {
        let _ = self.order.set(order);
        self
    }

    /// Exact order of `σ` on the group; errors if `σ` is not an automorphism.
    pub fn sigma_order(&self, cfg: &Config) -> Result<Factorization> {
        if let Some(o) = self.order.get() {
            return Ok(o.clone());
        }
        let o = endo_order(&self.sigma, &self.group, cfg)?;
        Ok(self.order.get_or_init(|| o).clone())
    }

    pub fn sigma_order_value(&self, cfg: &Config) -> Result<u128> {
        self.sigma_order(cfg)?
            .value()
            .ok_or_else(|| SdlpError::InstanceTooLarge("order exceeds 128 bits".into()))
    }

    pub fn is_automorphism(&self, cfg: &Config) -> Result<bool> {
        match self.sigma_order(cfg) {
            Ok(_) => Ok(true),
            Err(SdlpError::NotAnAutomorphism) => Ok(false),
            Err(e) => Err(e),
        }
    }

    pub fn rho(&self, t: u128) -> Element {
        rho_pow(&self.group, &self.sigma, &self.g, t)
    }

    pub fn is_solution(&self, t: u128) -> bool {
        self.group.eq(&self.rho(t), &self.h)
    }

    /// Checks the representative and the next member of a returned set.
    pub fn verify(&self, set: &SolutionSet) -> bool {
        match *set {
            SolutionSet::Empty => true,
            SolutionSet::Singleton { t0 } => self.is_solution(t0),
            SolutionSet::Progression { t0, period } => {
                self.is_solution(t0) && self.is_solution(t0 + period)
            }
        }
    }
}
