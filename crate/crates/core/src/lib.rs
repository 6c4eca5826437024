//! Exact additive-combinatorics kernels over finite abelian groups.
//!
//! Groups are presented as products of cyclic factors `Z/m_1 x ... x Z/m_r`,
//! which covers both `Z/N` and `F_q^n` for prime `q`. Sets are dense bitsets,
//! convolutions of integer-valued functions are exact (number-theoretic
//! transform modulo a 62-bit prime), and every structural claim the engines
//! make (density increments, witnesses, certificates) is re-verified against
//! the underlying bitsets before it is returned.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command
//! line front end and thread pools live in the `addcomb` companion crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bohr;
pub mod construct;
pub mod equation;
mod error;
mod fft;
pub mod group;
pub mod increment;
mod linalg;
mod ntt;
pub mod periodicity;
pub mod spectral;
pub mod structure;

pub use error::{Error, Result};
pub use group::{GroupSet, GroupSpec};

/// Exact densities and ratios. Every density comparison in the crate goes
/// through this type; floats are reserved for norms and character values.
pub type Ratio = num_rational::Ratio<u64>;

/// Absolute tolerance used for Bohr-norm membership and spectrum thresholds.
pub const TOLERANCE: f64 = 1e-12;
