//! Black-box groups with unique labelling, concrete backends, endomorphisms
//! and semidirect exponentiation.

mod element;
mod endo;
mod group;
mod hom;
mod instance;
mod pc;
mod rho;

use std::sync::Arc;

pub use element::{Element, Label};
pub use endo::{Endo, EndoRep, MatrixAuto, TABLE_LIMIT};
pub use group::{Backend, Group};
pub use hom::{Compose, HeisenbergTop, Hom, IdentityHom, LinearHom, Projection, TrivialHom};
pub use instance::{SdlpInstance, SolutionSet};
pub use pc::Pcgs;
pub use rho::{rho_pow, rho_pow_inverse_apply, rho_pow_naive, rho_pow_with_power, sigma_pow_apply};

use crate::error::{Result, SdlpError};

/// The image of `psi` as a pair-image group, with the automorphism induced by
/// `sigma`. `kernel_gens` (if known) are spot-checked for invariance.
pub fn induced_automorphism(
    group: &Group,
    psi: Arc<dyn Hom>,
    sigma: &Endo,
    kernel_gens: &[Element],
) -> Result<(Group, Endo)> {
    let target = psi.target().clone();
    for k in kernel_gens {
        if !target.is_identity(&psi.apply(k)) {
            return Err(SdlpError::KernelNotInvariant);
        }
        if !target.is_identity(&psi.apply(&sigma.apply(group, k))) {
            return Err(SdlpError::KernelNotInvariant);
        }
    }
    Ok((Group::pair_image(group.clone(), psi), Endo::induced(sigma.clone())))
}
