//! Trace-moment integrals `∫_G ∏_j Tr ρ_λ(g^j)^{a_j} · conj(Tr ρ_λ(g^j))^{b_j} dg`
//! over compact simply connected semisimple Lie groups, evaluated three
//! independent ways:
//!
//! * [`charring`]: exact signed integers from the character ring
//!   (Adams operations and Racah–Speiser reflection),
//! * [`torusquad`]: Weyl integration over the maximal torus on an
//!   aliasing-free grid,
//! * [`asymptotics`]: closed-form leading terms as the tensor power grows.
//!
//! [`harness`] ties them together into convergence reports.

pub mod asymptotics;
pub mod charring;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod repweights;
pub mod rootsys;
pub mod torusquad;

pub use error::{Error, Result};
pub use rootsys::{pairing, Covector, FundamentalGroup, RootSystem, Weight};
