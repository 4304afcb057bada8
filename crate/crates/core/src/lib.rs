//! Simulation and verification toolkit for entanglement detection on random
//! states.
//!
//! The crate is `no_std` (it needs `alloc`) and holds only the algorithmic
//! pieces:
//!
//! - [`tensor`]: dense complex matrices, partial trace and transpose,
//!   Hermitian eigenvalues, SWAP and copy-permutation operators, unravelling.
//! - [`random`]: seeded Haar samplers and the induced ensembles used as
//!   benchmark distributions (global Haar vs. product-by-construction).
//! - [`criteria`]: exact criterion values (SWAP witness, PPT, purity) and the
//!   closed-form detection power of the SWAP witness.
//! - [`protocols`]: finite-shot detection protocols (witness estimation,
//!   randomized-measurement purity, two-copy SWAP test).
//! - [`analysis`]: completeness/soundness statistics, budget search, scaling
//!   fits, total-variation bounds and Monte Carlo checks of the moment lemmas.
//!
//! IO, the CLI and parallel execution live in the `edplab` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod analysis;
pub mod criteria;
mod error;
pub mod protocols;
pub mod random;
pub mod runner;
pub mod tensor;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
