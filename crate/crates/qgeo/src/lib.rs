//! # qgeo
//!
//! Monotone Riemannian metrics on qubit state space and two-qubit
//! entanglement measures, with an audit engine for the closed-form
//! identities that tie the two together on specific entangled-state
//! families.
//!
//! The crate is organized bottom-up:
//!
//! - [`matrix`]: dense complex matrices and the 2x2/4x4 spectral kernels
//!   (cyclic Jacobi eigensolver, partial trace/transpose, trace norm,
//!   PSD square root, commutators).
//! - [`states`]: validated density matrices, the entangled-state family
//!   generators, and the JSON state-file format.
//! - [`entanglement`]: negativity and Wootters concurrence.
//! - [`geometry`]: Morozova-Cencov functions, tangent vectors, metric
//!   evaluation, Kraus channels, and the CPTP contraction check.
//! - [`relations`]: the relation registry, audit engine, parameter
//!   sweeps, and CSV report formats.
//! - [`config`]: every tolerance in one place.

#![forbid(unsafe_code)]

pub mod config;
pub mod entanglement;
pub mod error;
pub mod geometry;
pub mod matrix;
pub mod relations;
pub mod states;

pub use config::Config;
pub use entanglement::{concurrence, negativity, negativity_wrt, spin_flip};
pub use error::{Error, Result};
pub use geometry::{
    apply_channel, metric_eval, metric_form, monotonicity_check, tangent_from_generator,
    KrausChannel, McFunction, TangentVector,
};
pub use matrix::{
    commutator_i, herm_eig, hs_inner, kron, partial_trace, partial_transpose, psd_sqrt, trace_norm,
    ComplexMatrix, EigenDecomposition, Pauli, Subsystem,
};
pub use relations::{registry, AuditEngine, AuditOutcome, Relation, Verdict};
pub use states::{
    bell, mems_rank2, mems_rank3, mems_rank4, mjw_mems, nmems, pure_schmidt, DensityMatrix, Family,
    FamilyDescriptor,
};
