//! Semidirect exponentiation.

use super::{Element, Endo, Group};
use crate::error::{Result, SdlpError};

/// `σ^i(x)`.
pub fn sigma_pow_apply(group: &Group, sigma: &Endo, i: u128, x: &Element) -> Element {
    if i == 0 {
        return x.clone();
    }
    sigma.pow(i).apply(group, x)
}

/// `ρ^t(1) = g σ(g) ⋯ σ^{t-1}(g)` by binary doubling.
pub fn rho_pow(group: &Group, sigma: &Endo, g: &Element, t: u128) -> Element {
    rho_pow_with_power(group, sigma, g, t).0
}

/// `(ρ^t(1), σ^t)`.
pub fn rho_pow_with_power(group: &Group, sigma: &Endo, g: &Element, t: u128) -> (Element, Endo) {
    let mut r = group.identity();
    let mut s = Endo::identity();
    if t == 0 {
        return (r, s);
    }
    for bit in (0..128 - t.leading_zeros()).rev() {
        // ρ^{2s}(1) = ρ^s(1) σ^s(ρ^s(1))
        r = group.mul(&r, &s.apply(group, &r));
        s = s.compose(&s);
        if (t >> bit) & 1 == 1 {
            // ρ^{s+1}(1) = ρ^s(1) σ^s(g)
            r = group.mul(&r, &s.apply(group, g));
            s = s.compose(sigma);
        }
    }
    (r, s)
}

/// Left-to-right product; reference implementation.
pub fn rho_pow_naive(group: &Group, sigma: &Endo, g: &Element, t: u128) -> Element {
    let mut acc = group.identity();
    let mut term = g.clone();
    for _ in 0..t {
        acc = group.mul(&acc, &term);
        term = sigma.apply(group, &term);
    }
    acc
}

/// `ρ^{-s}(h) = σ^{-s}(ρ^s(1)^{-1} h)` with `σ^{-s} = σ^{n - (s mod n)}` for a
/// multiple `n` of the order of `σ`.
pub fn rho_pow_inverse_apply(
    group: &Group,
    sigma: &Endo,
    order: Option<u128>,
    g: &Element,
    s: u128,
    h: &Element,
) -> Result<Element> {
    if s == 0 {
        return Ok(h.clone());
    }
    let n = order.ok_or(SdlpError::NotAnAutomorphism)?;
    let r = rho_pow(group, sigma, g, s);
    let y = group.mul(&group.inv(&r), h);
    let back = (n - s % n) % n;
    Ok(sigma_pow_apply(group, sigma, back, &y))
}
