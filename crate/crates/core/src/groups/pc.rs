//! Induced polycyclic generating sequences for subgroups of backends with a
//! built-in polycyclic series.

use std::collections::BTreeMap;

use super::{Element, Group};
use crate::arith::inv_mod;
use crate::error::{Result, SdlpError};

/// An induced pcgs: one element per occupied depth, each with leading exponent 1.
#[derive(Clone, Debug)]
pub struct Pcgs {
    group: Group,
    primes: Vec<u64>,
    table: BTreeMap<usize, Element>,
}

impl Pcgs {
    pub fn empty(group: &Group) -> Result<Self> {
        let primes = group.pc_primes().ok_or(SdlpError::CompositionSeriesRequired)?;
        Ok(Self { group: group.clone(), primes, table: BTreeMap::new() })
    }

    /// Induced pcgs of the subgroup generated by `gens`.
    pub fn induced(group: &Group, gens: &[Element]) -> Result<Self> {
        let mut pcgs = Self::empty(group)?;
        for g in gens {
            pcgs.add(g)?;
        }
        Ok(pcgs)
    }

    fn lead(&self, x: &Element) -> Result<Option<(usize, u64)>> {
        self.group.pc_lead(x).ok_or(SdlpError::CompositionSeriesRequired)
    }

    /// Reduces `x` modulo the table; the identity iff `x` is in the subgroup.
    pub fn sift(&self, x: &Element) -> Result<Element> {
        let mut x = x.clone();
        while let Some((d, e)) = self.lead(&x)? {
            match self.table.get(&d) {
                Some(t) => {
                    let p = self.primes[d];
                    x = self.group.mul(&x, &self.group.pow(t, (p - e) as u128));
                }
                None => return Ok(x),
            }
        }
        Ok(x)
    }

    pub fn contains(&self, x: &Element) -> Result<bool> {
        Ok(self.lead(&self.sift(x)?)?.is_none())
    }

    /// Extends the table to a pcgs of `<self, x>`; returns whether it grew.
    pub fn add(&mut self, x: &Element) -> Result<bool> {
        let before = self.table.len();
        let mut queue = vec![x.clone()];
        while let Some(y) = queue.pop() {
            let r = self.sift(&y)?;
            let Some((d, e)) = self.lead(&r)? else { continue };
            let p = self.primes[d];
            let k = inv_mod(e, p).ok_or_else(|| SdlpError::internal("leading exponent not invertible"))?;
            let r = self.group.pow(&r, k as u128);
            queue.push(self.group.pow(&r, p as u128));
            for t in self.table.values() {
                queue.push(self.group.commutator(&r, t));
            }
            self.table.insert(d, r);
        }
        Ok(self.table.len() > before)
    }

    /// Pcgs of the normal closure of `gens` under conjugation by `by`.
    pub fn normal_closure(group: &Group, gens: &[Element], by: &[Element]) -> Result<Self> {
        let mut pcgs = Self::induced(group, gens)?;
        loop {
            let mut grew = false;
            let current: Vec<Element> = pcgs.elements().to_vec();
            for s in &current {
                for c in by {
                    let y = group.mul(&group.mul(&group.inv(c), s), c);
                    grew |= pcgs.add(&y)?;
                }
            }
            if !grew {
                return Ok(pcgs);
            }
        }
    }

    pub fn elements(&self) -> Vec<Element> {
        self.table.values().cloned().collect()
    }

    pub fn depths(&self) -> Vec<usize> {
        self.table.keys().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn prime_at(&self, depth: usize) -> u64 {
        self.primes[depth]
    }

    /// Order of the subgroup, if it fits.
    pub fn order(&self) -> Option<u128> {
        self.table
            .keys()
            .try_fold(1u128, |acc, d| acc.checked_mul(self.primes[*d] as u128))
    }

    /// Leading exponent of `x` at `depth`, zero if `x` lies deeper.
    pub fn exponent_at(&self, x: &Element, depth: usize) -> Result<u64> {
        Ok(match self.lead(x)? {
            Some((d, e)) if d == depth => e,
            Some((d, _)) if d < depth => {
                return Err(SdlpError::internal("element above the subgroup's first depth"))
            }
            _ => 0,
        })
    }
}
