//! Numerical core for concurrence speed limits of two-qubit states.
//!
//! The crate is `no_std` (with `alloc`). It covers the dense complex
//! kernel ([`linalg`]), state constructors ([`qstate`]), concurrence
//! ([`entanglement`]), local-unitary orbit extremization and the
//! spectral lower bound ([`optimize`]), speed-limit times ([`speedlimit`])
//! and the Lieb-Robinson comparator ([`lrb`]).
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod entanglement;
pub mod error;
pub mod linalg;
pub mod lrb;
pub mod nelder_mead;
pub mod optimize;
pub mod qstate;
pub mod speedlimit;
pub mod tolerance;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, HermitianEig, C64};
pub use qstate::{BellDiagonalSpec, DensityMatrix, LocalUnitaryParams, Sl2cParams};
pub use tolerance::Tolerances;
