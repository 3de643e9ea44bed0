//! Numerical tolerances and run configuration.
//!
//! Every threshold used by validation and evaluation lives here. The
//! defaults sit three or more orders of magnitude above the residuals the
//! 2x2/4x4 spectral kernels actually achieve, and well below every
//! physical scale in the state families, so they separate algebra from
//! floating-point noise without masking real defects.

use crate::matrix::Subsystem;

/// Hermiticity tolerance: max |M[i][j] - conj(M[j][i])| accepted.
pub const TOL_HERM: f64 = 1e-10;

/// PSD tolerance: eigenvalues in [-TOL_PSD, 0) are clipped to 0, anything
/// below is an error.
pub const TOL_PSD: f64 = 1e-10;

/// Unit-trace tolerance for density matrices.
pub const TOL_TRACE: f64 = 1e-12;

/// Tangent components below this floor are dropped before a metric term is
/// evaluated (the 0 * infinity convention at rank-deficient base points).
pub const COMPONENT_FLOOR: f64 = 1e-14;

/// Audit residual threshold separating CONFIRMED from DEVIATION.
pub const RESIDUAL_THRESHOLD: f64 = 1e-10;

/// Audit domains require the reduced-state eigenvalue gap to exceed this
/// margin; at maximally mixed subsystems every relation degenerates to 0 = 0.
pub const REDUCED_GAP_MARGIN: f64 = 1e-6;

/// Clipping window for tiny negative measure values near separability.
pub const MEASURE_CLIP: f64 = 1e-12;

/// Monotonicity slack: contraction must hold up to this additive tolerance.
pub const MONOTONE_SLACK: f64 = 1e-10;

/// Runtime configuration assembled by the CLI; defaults mirror the
/// constants above.
#[derive(Debug, Clone)]
pub struct Config {
    pub tol_herm: f64,
    pub tol_psd: f64,
    pub residual_threshold: f64,
    pub mc_function: String,
    pub subsystem: Subsystem,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            tol_herm: TOL_HERM,
            tol_psd: TOL_PSD,
            residual_threshold: RESIDUAL_THRESHOLD,
            mc_function: "bures".to_string(),
            subsystem: Subsystem::First,
        }
    }
}

impl Config {
    /// Tolerances must be positive and the MC function registered.
    pub fn validate(&self) -> crate::error::Result<()> {
        for (name, value) in [
            ("tol-herm", self.tol_herm),
            ("tol-psd", self.tol_psd),
            ("residual-threshold", self.residual_threshold),
        ] {
            if value.is_nan() || value <= 0.0 {
                return Err(crate::error::Error::InvalidParameter {
                    family: "config",
                    constraint: format!("{name} must be positive, got {value}"),
                });
            }
        }
        crate::geometry::McFunction::by_name(&self.mc_function)?;
        Ok(())
    }

    pub fn mc(&self) -> crate::error::Result<crate::geometry::McFunction> {
        crate::geometry::McFunction::by_name(&self.mc_function)
    }

    pub fn engine(&self) -> crate::error::Result<crate::relations::AuditEngine> {
        Ok(crate::relations::AuditEngine {
            mc: self.mc()?,
            residual_threshold: self.residual_threshold,
            subsystem: self.subsystem,
        })
    }
}
