#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Classical, group-theoretic and semiclassical machinery for harmonically
//! confined anyons.
//!
//! The crate is organised bottom-up:
//!
//! * [`symplectic`]: the OSp(4N,R) basis, ortho-symplectic checks and
//!   one-parameter group actions on the 4N-dimensional phase space.
//! * [`observables`]: energy, angular momenta, orientation signatures and the
//!   closed-form angular-momentum flows.
//! * [`families`]: orientation classes, same-sign connection paths,
//!   completeness probes and the invariant subgroup.
//! * [`regularized`]: flux-regularized relative dynamics of two anyons and the
//!   reflecting half orbits.
//! * [`semiclassical`]: leading-order periodic-orbit eigenvalues.
//! * [`exact`]: the exact two-anyon spectrum, partition function, density of
//!   states, both propagator resummations and the Fourier analysis of g(E).
//!
//! Units are ħ = ω = 1 throughout; energies are multiples of ħω.

pub mod acceptance;
pub mod config;
pub mod error;
pub mod exact;
pub mod export;
pub mod families;
pub mod observables;
pub mod ode;
pub mod regularized;
pub mod semiclassical;
pub mod symplectic;

pub use error::{Error, Result};
