//! Spectral theory of the Bergman-type operators
//! `K_α f(z) = ∫ f(w) (1-⟨z,w⟩)^{-α} dv(w)` and `K_α⁺` (kernel
//! `|1-⟨z,w⟩|^{-α}`) on the unit ball of `ℂ^d`, with independent numerical
//! oracles for every closed form.

// `!(x < y)` is used deliberately so NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ballquad;
pub mod classify;
pub mod error;
pub mod operator;
pub mod quadrature;
pub mod specfun;
pub mod spectral;
pub mod sum;

pub use error::{Error, Result};
