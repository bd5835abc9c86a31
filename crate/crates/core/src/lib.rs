//! Coherent-state mean-field dynamics for bilinear Hamiltonians built from
//! one h(3) degree of freedom (a field mode) and one su(2) degree of freedom
//! (a collective spin), together with the first quantum corrections around
//! the mean field and a brute-force truncated-basis oracle.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the experiment
//! runner and the command line live in the `semiclassical` crate.
//!
//! Module map:
//!
//! - [`algebra`]: coherent-state labels, overlaps, generator expectations and
//!   the displacement relations `A_i D(z) = D(z)(Σ_k g_ik A_k + k_i)`.
//! - [`model`]: the bilinear Hamiltonian class, the maser instance,
//!   mean-field coefficients and the classical energy.
//! - [`dynamics`]: label equations of motion, generalized actions,
//!   trajectories, scaling and Lyapunov estimation.
//! - [`corrections`]: the first-order kernel `c(t)`, `C(t)` and the
//!   second-order linear entropy.
//! - [`oracle`]: exact evolution in a truncated Fock ⊗ spin-J basis.
//! - [`projection`]: moving a state onto an energy surface.
//! - [`conventions`]: the phase and sign conventions everything above uses.

#![no_std]
#![forbid(unsafe_code)]
// `num_traits::Float` supplies float methods where core lacks them
#![allow(unused_imports)]

extern crate alloc;

pub mod algebra;
pub mod conventions;
pub mod corrections;
pub mod dynamics;
mod error;
pub mod model;
pub mod ode;
pub mod oracle;
pub mod projection;

pub use error::{Error, Result};
pub use num_complex::Complex64;
