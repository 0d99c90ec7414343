//! Desk-scale verification lab for the period geometry of elliptic surfaces
//! over an elliptic base with twelve nodal fibers.
//!
//! The crate has three layers:
//!
//! * floating-point geometry over the complex projective plane
//!   ([`numkit`], [`cubic`], [`pencil`], [`ec`]) feeding the two period-map
//!   dominance experiments ([`iib`], [`iif`]),
//! * an exact integer-lattice engine ([`lattice`]) and exact section
//!   arithmetic on a Weierstrass curve ([`sections`]),
//! * a seeded, deterministic experiment runner ([`report`]) exposed through
//!   the `period-lab` binary.

pub mod cubic;
pub mod ec;
pub mod iib;
pub mod iif;
pub mod lattice;
pub mod numkit;
pub mod pencil;
pub mod report;
pub mod sections;
pub mod tol;

pub use tol::ToleranceProfile;
