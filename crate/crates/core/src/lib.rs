//! Semidirect discrete logarithms over black-box groups.
//!
//! Given a finite group `G`, an endomorphism `σ` and elements `g`, `h`, the
//! semidirect discrete logarithm problem asks for every `t >= 0` with
//! `h = g · σ(g) · σ²(g) ⋯ σ^{t-1}(g)`. This crate provides exact finite-field
//! linear algebra, several group backends, classical discrete-log and order
//! oracles, the structural reductions and solvers built on them, and a
//! simulation of the key exchange whose security rests on the problem.

pub mod arith;
pub mod cli;
pub mod config;
pub mod error;
pub mod ff;
pub mod groups;
pub mod oracles;
pub mod protocol;
pub mod reductions;
pub mod solvers;

pub use config::{Config, Ctx, DlogOracle};
pub use error::{Result, SdlpError};
pub use groups::{Element, Endo, Group, Hom, Label, SdlpInstance, SolutionSet};
