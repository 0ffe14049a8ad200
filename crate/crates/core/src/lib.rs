//! Spherical functions `ψ_λ` of complex Cartan motion groups, computed from root-system
//! data.
//!
//! The crate covers the full chain from a Cartan type to a boundedness verdict:
//!
//! * [`rootsys`] builds exact rational root systems and the product `π` of positive roots.
//! * [`weyl`] generates the Weyl group and normalizes spectral parameters.
//! * [`sympoly`] differentiates the alternating sum exactly at singular parameters.
//! * [`expasym`] handles one-variable exponential polynomials and their growth.
//! * [`spherical`] evaluates `ψ_λ` on and off the singular strata.
//! * [`bounded`] decides boundedness and emits re-checkable certificates.
//! * [`oracle`] provides independent numerical ground truth.
//!
//! Everything is `no_std` with `alloc`.

#![no_std]

extern crate alloc;

pub mod bounded;
pub mod error;
pub mod expasym;
pub mod oracle;
pub mod rational;
pub mod rootsys;
pub mod spherical;
pub mod sympoly;
pub mod weyl;

pub use bounded::{BoundednessCertificate, GrowthProbe, InequalityTable, Verdict};
pub use error::Error;
pub use expasym::{ExpPoly, ExpTerm};
pub use rational::{GaussRat, Rat};
pub use rootsys::{CartanType, RootSystem};
pub use spherical::{MotionGroup, PsiValue, SpectralParameter};
pub use weyl::{WeylElement, WeylGroup};
