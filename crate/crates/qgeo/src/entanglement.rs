//! Two-qubit entanglement measures: negativity and Wootters concurrence.
//!
//! Negativity follows the (||rho^T_A||_1 - 1)/2 convention, so it ranges
//! over [0, 1/2] with 1/2 at Bell states. Concurrence is computed through
//! the Hermitian similarity M = sqrt(rho) rho~ sqrt(rho), which shares its
//! spectrum with rho rho~ but needs no non-Hermitian eigensolver.

use crate::config::{MEASURE_CLIP, TOL_PSD};
use crate::error::{Error, Result};
use crate::matrix::{
    herm_eig, kron, partial_transpose, psd_sqrt, trace_norm, ComplexMatrix, Pauli, Subsystem,
};
use crate::states::DensityMatrix;

fn require_two_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::WrongDimension {
            expected: 4,
            got: rho.dim(),
        });
    }
    Ok(())
}

fn clip_measure(x: f64, upper: f64) -> f64 {
    if x < 0.0 && x > -MEASURE_CLIP {
        0.0
    } else if x > upper && x < upper + MEASURE_CLIP {
        upper
    } else {
        x
    }
}

/// Negativity (||rho^T_A1||_1 - 1)/2.
pub fn negativity(rho: &DensityMatrix) -> Result<f64> {
    negativity_wrt(rho, Subsystem::First)
}

/// Negativity with the partial transpose taken on the chosen subsystem;
/// both conventions give the same value for Hermitian states.
pub fn negativity_wrt(rho: &DensityMatrix, part: Subsystem) -> Result<f64> {
    require_two_qubits(rho)?;
    let pt = partial_transpose(rho.matrix(), part)?;
    let n = (trace_norm(&pt)? - 1.0) / 2.0;
    Ok(clip_measure(n, 0.5))
}

/// Spin-flipped state (sy (x) sy) conj(rho) (sy (x) sy); conjugation is in
/// the computational basis. Hermitian, PSD, trace one.
pub fn spin_flip(rho: &DensityMatrix) -> Result<ComplexMatrix> {
    require_two_qubits(rho)?;
    let syy = kron(&Pauli::Y.matrix(), &Pauli::Y.matrix());
    Ok(&(&syy * &rho.matrix().conj()) * &syy)
}

/// Wootters concurrence max{0, l1 - l2 - l3 - l4} where l_i are the
/// non-increasing square roots of the spectrum of rho rho~.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    let lambdas = concurrence_spectrum(rho)?;
    let c = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3];
    Ok(clip_measure(c.max(0.0), 1.0))
}

/// The four Wootters lambdas, non-increasing.
///
/// Eigenvalues of M with |l| <= TOL_PSD are treated as exact zeros before
/// the square root; the sqrt would otherwise amplify O(1e-16) rounding in
/// genuinely-zero modes to O(1e-8) in the lambdas.
pub fn concurrence_spectrum(rho: &DensityMatrix) -> Result<[f64; 4]> {
    require_two_qubits(rho)?;
    let root = psd_sqrt(rho.matrix())?;
    let flipped = spin_flip(rho)?;
    let m = &(&root * &flipped) * &root;
    let eig = herm_eig(&m)?;
    let mut out = [0.0; 4];
    for (slot, &l) in out.iter_mut().zip(&eig.values) {
        if l < -TOL_PSD {
            return Err(Error::NotPsd { min_eigenvalue: l });
        }
        *slot = if l.abs() <= TOL_PSD { 0.0 } else { l.sqrt() };
    }
    Ok(out)
}
