//! Validated density matrices and generators for every state family the
//! audit covers.
//!
//! All amplitudes are taken real and non-negative (Schmidt form); complex
//! phases are a local-unitary orbit and are exercised by the invariance
//! property tests instead of extra parameters.
//!
//! Families:
//! - `pure_schmidt(alpha)`: |psi> = alpha|00> + beta|11>, beta = sqrt(1-alpha^2)
//! - `mems_rank4(p2, p4)`: Ishizaka-Hiroshima rank-4 MEMS with
//!   p3 = p2 + p4 - sqrt(p2 p4) and p1 from normalization
//! - `mems_rank3(p2)`, `mems_rank2(p1)`: the rank-3 / rank-2 members
//! - `mjw_mems(r)`: the negativity-measure MEMS family
//! - `nmems(p, alpha)`: p |psi><psi| + (1-p) |01><01|
//! - `bell()`: the |Phi+> projector

use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;

use crate::config::{TOL_HERM, TOL_PSD, TOL_TRACE};
use crate::error::{Error, Result};
use crate::matrix::{herm_eig, partial_trace, ComplexMatrix, Subsystem};

/// Trace-one PSD Hermitian matrix of dimension 2 or 4.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates with the default tolerances.
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        Self::with_tolerances(mat, TOL_HERM, TOL_PSD)
    }

    pub fn with_tolerances(mat: ComplexMatrix, tol_herm: f64, tol_psd: f64) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::NotSquare {
                rows: mat.rows(),
                cols: mat.cols(),
            });
        }
        if mat.rows() != 2 && mat.rows() != 4 {
            return Err(Error::WrongDimension {
                expected: 2,
                got: mat.rows(),
            });
        }
        mat.check_hermitian(tol_herm)?;
        let tr = mat.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > TOL_TRACE {
            return Err(Error::TraceNotOne { trace: tr.re });
        }
        let eig = herm_eig(&mat)?;
        let min = eig.values.iter().copied().fold(f64::INFINITY, f64::min);
        if min < -tol_psd {
            return Err(Error::NotPsd {
                min_eigenvalue: min,
            });
        }
        Ok(Self { mat })
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    /// Eigenvalues, non-increasing.
    pub fn spectrum(&self) -> Vec<f64> {
        herm_eig(&self.mat)
            .expect("validated state stays Hermitian")
            .values
    }

    /// Tr rho^2.
    pub fn purity(&self) -> f64 {
        (&self.mat * &self.mat).trace().re
    }

    /// Partial trace keeping one subsystem, re-validated as a qubit state.
    pub fn reduce(&self, keep: Subsystem) -> Result<DensityMatrix> {
        let t = partial_trace(&self.mat, keep)?;
        DensityMatrix::new(t)
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn param_err(family: &'static str, constraint: impl Into<String>) -> Error {
    Error::InvalidParameter {
        family,
        constraint: constraint.into(),
    }
}

/// |Phi+> = (|00> + |11>)/sqrt(2) as a projector.
pub fn bell() -> DensityMatrix {
    let inv = 1.0 / 2f64.sqrt();
    let ket = [c(inv), c(0.0), c(0.0), c(inv)];
    DensityMatrix::new(ComplexMatrix::projector(&ket)).expect("Bell projector is a valid state")
}

/// Projector onto alpha|00> + beta|11| with beta = sqrt(1 - alpha^2).
/// Endpoints are rejected; they give product states (see
/// [`pure_schmidt_unrestricted`] for the audit edge cases).
pub fn pure_schmidt(alpha: f64) -> Result<DensityMatrix> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(param_err(
            "pure_schmidt",
            format!("alpha must lie in (0,1), got {alpha}"),
        ));
    }
    pure_schmidt_unrestricted(alpha)
}

/// As [`pure_schmidt`] but allowing the product-state endpoints alpha = 0, 1.
pub fn pure_schmidt_unrestricted(alpha: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(param_err(
            "pure_schmidt",
            format!("alpha must lie in [0,1], got {alpha}"),
        ));
    }
    let beta = (1.0 - alpha * alpha).sqrt();
    let ket = [c(alpha), c(0.0), c(0.0), c(beta)];
    DensityMatrix::new(ComplexMatrix::projector(&ket))
}

fn psi_minus_projector() -> ComplexMatrix {
    let inv = 1.0 / 2f64.sqrt();
    ComplexMatrix::projector(&[c(0.0), c(inv), c(-inv), c(0.0)])
}

fn psi_plus_projector() -> ComplexMatrix {
    let inv = 1.0 / 2f64.sqrt();
    ComplexMatrix::projector(&[c(0.0), c(inv), c(inv), c(0.0)])
}

fn basis_projector(idx: usize) -> ComplexMatrix {
    let mut ket = [c(0.0); 4];
    ket[idx] = c(1.0);
    ComplexMatrix::projector(&ket)
}

/// Rank-4 MEMS: p1 |psi-><psi-| + p2 |00><00| + p3 |psi+><psi+| + p4 |11><11|
/// with p3 = p2 + p4 - sqrt(p2 p4) and p1 = 1 - p2 - p3 - p4.
///
/// The eigenvalues must come out in the order p1 >= p2 >= p3 >= p4 > 0;
/// violations name the failing constraint.
pub fn mems_rank4(p2: f64, p4: f64) -> Result<DensityMatrix> {
    const F: &str = "mems_rank4";
    if p4.is_nan() || p4 <= 0.0 {
        return Err(param_err(F, format!("p4 must be positive, got {p4}")));
    }
    if p2 < p4 {
        return Err(param_err(
            F,
            format!("p2 >= p4 required, got p2={p2}, p4={p4}"),
        ));
    }
    let p3 = p2 + p4 - (p2 * p4).sqrt();
    let p1 = 1.0 - p2 - p3 - p4;
    if p1 < p2 {
        return Err(param_err(
            F,
            format!("p1 >= p2 required, derived p1={p1} < p2={p2}"),
        ));
    }
    let mix = &(&(&psi_minus_projector().scale_re(p1) + &basis_projector(0).scale_re(p2))
        + &psi_plus_projector().scale_re(p3))
        + &basis_projector(3).scale_re(p4);
    DensityMatrix::new(mix)
}

/// Rank-3 MEMS: the p4 = 0 member, so p3 = p2 and p1 = 1 - 2 p2.
pub fn mems_rank3(p2: f64) -> Result<DensityMatrix> {
    const F: &str = "mems_rank3";
    if p2.is_nan() || p2 <= 0.0 {
        return Err(param_err(F, format!("p2 must be positive, got {p2}")));
    }
    let p1 = 1.0 - 2.0 * p2;
    if p1 < p2 {
        return Err(param_err(
            F,
            format!("p1 >= p2 requires p2 <= 1/3, got {p2}"),
        ));
    }
    let mix = &(&psi_minus_projector().scale_re(p1) + &basis_projector(0).scale_re(p2))
        + &psi_plus_projector().scale_re(p2);
    DensityMatrix::new(mix)
}

/// Rank-2 MEMS: p1 |psi-><psi-| + (1-p1) |00><00|.
pub fn mems_rank2(p1: f64) -> Result<DensityMatrix> {
    if !(p1 > 0.0 && p1 < 1.0) {
        return Err(param_err(
            "mems_rank2",
            format!("p1 must lie in (0,1), got {p1}"),
        ));
    }
    let mix = &psi_minus_projector().scale_re(p1) + &basis_projector(0).scale_re(1.0 - p1);
    DensityMatrix::new(mix)
}

/// MEMS for the negativity measure: with s = sqrt(3 r^2 + 1),
/// diagonal ((1+s)/6, (4-2s)/6, 0, (1+s)/6) plus coherence r/2 between
/// |00> and |11>. r = 1 gives the Bell projector, r = 0 a diagonal
/// separable state.
pub fn mjw_mems(r: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&r) {
        return Err(param_err(
            "mjw_mems",
            format!("r must lie in [0,1], got {r}"),
        ));
    }
    let s = (3.0 * r * r + 1.0).sqrt();
    let corner = (1.0 + s) / 6.0;
    let middle = (4.0 - 2.0 * s) / 6.0;
    let mut m = ComplexMatrix::zeros(4, 4);
    m[(0, 0)] = c(corner);
    m[(1, 1)] = c(middle);
    m[(3, 3)] = c(corner);
    m[(0, 3)] = c(r / 2.0);
    m[(3, 0)] = c(r / 2.0);
    DensityMatrix::new(m)
}

/// Non-maximally entangled mixed state p |psi><psi| + (1-p) |01><01| with
/// |psi> = alpha|00> + beta|11>.
pub fn nmems(p: f64, alpha: f64) -> Result<DensityMatrix> {
    const F: &str = "nmems";
    if !(p > 0.0 && p <= 1.0) {
        return Err(param_err(F, format!("p must lie in (0,1], got {p}")));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(param_err(
            F,
            format!("alpha must lie in (0,1), got {alpha}"),
        ));
    }
    let beta = (1.0 - alpha * alpha).sqrt();
    let psi = ComplexMatrix::projector(&[c(alpha), c(0.0), c(0.0), c(beta)]);
    let mix = &psi.scale_re(p) + &basis_projector(1).scale_re(1.0 - p);
    DensityMatrix::new(mix)
}

/// The state families; open parameters live in [`FamilyDescriptor`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    PureSchmidt,
    MemsRank4,
    MemsRank3,
    MemsRank2,
    MjwMems,
    Nmems,
    Bell,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::PureSchmidt => "pure",
            Family::MemsRank4 => "mems4",
            Family::MemsRank3 => "mems3",
            Family::MemsRank2 => "mems2",
            Family::MjwMems => "mjw",
            Family::Nmems => "nmems",
            Family::Bell => "bell",
        }
    }

    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            Family::PureSchmidt => &["alpha"],
            Family::MemsRank4 => &["p2", "p4"],
            Family::MemsRank3 => &["p2"],
            Family::MemsRank2 => &["p1"],
            Family::MjwMems => &["r"],
            Family::Nmems => &["p", "alpha"],
            Family::Bell => &[],
        }
    }
}

/// One concrete parameter point of a family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyDescriptor {
    PureSchmidt { alpha: f64 },
    MemsRank4 { p2: f64, p4: f64 },
    MemsRank3 { p2: f64 },
    MemsRank2 { p1: f64 },
    MjwMems { r: f64 },
    Nmems { p: f64, alpha: f64 },
    Bell,
}

impl FamilyDescriptor {
    pub fn family(&self) -> Family {
        match self {
            FamilyDescriptor::PureSchmidt { .. } => Family::PureSchmidt,
            FamilyDescriptor::MemsRank4 { .. } => Family::MemsRank4,
            FamilyDescriptor::MemsRank3 { .. } => Family::MemsRank3,
            FamilyDescriptor::MemsRank2 { .. } => Family::MemsRank2,
            FamilyDescriptor::MjwMems { .. } => Family::MjwMems,
            FamilyDescriptor::Nmems { .. } => Family::Nmems,
            FamilyDescriptor::Bell => Family::Bell,
        }
    }

    pub fn generate(&self) -> Result<DensityMatrix> {
        match *self {
            FamilyDescriptor::PureSchmidt { alpha } => pure_schmidt(alpha),
            FamilyDescriptor::MemsRank4 { p2, p4 } => mems_rank4(p2, p4),
            FamilyDescriptor::MemsRank3 { p2 } => mems_rank3(p2),
            FamilyDescriptor::MemsRank2 { p1 } => mems_rank2(p1),
            FamilyDescriptor::MjwMems { r } => mjw_mems(r),
            FamilyDescriptor::Nmems { p, alpha } => nmems(p, alpha),
            FamilyDescriptor::Bell => Ok(bell()),
        }
    }

    /// Named parameter values in the family's canonical order.
    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match *self {
            FamilyDescriptor::PureSchmidt { alpha } => vec![("alpha", alpha)],
            FamilyDescriptor::MemsRank4 { p2, p4 } => vec![("p2", p2), ("p4", p4)],
            FamilyDescriptor::MemsRank3 { p2 } => vec![("p2", p2)],
            FamilyDescriptor::MemsRank2 { p1 } => vec![("p1", p1)],
            FamilyDescriptor::MjwMems { r } => vec![("r", r)],
            FamilyDescriptor::Nmems { p, alpha } => vec![("p", p), ("alpha", alpha)],
            FamilyDescriptor::Bell => vec![],
        }
    }
}

impl std::fmt::Display for FamilyDescriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.family().name())?;
        for (name, value) in self.params() {
            write!(f, " {name}={value}")?;
        }
        Ok(())
    }
}

#[derive(Deserialize)]
struct StateFile {
    dims: Vec<usize>,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

fn matrix_from_file(sf: &StateFile) -> Result<ComplexMatrix> {
    let dim: usize = sf.dims.iter().product();
    if !(sf.dims == vec![2] || sf.dims == vec![2, 2]) {
        return Err(Error::BadStateFile(format!(
            "dims must be [2] or [2,2], got {:?}",
            sf.dims
        )));
    }
    if sf.re.len() != dim || sf.im.len() != dim {
        return Err(Error::BadStateFile(format!(
            "expected {dim} rows in re and im"
        )));
    }
    let mut data = Vec::with_capacity(dim * dim);
    for (r_row, i_row) in sf.re.iter().zip(&sf.im) {
        if r_row.len() != dim || i_row.len() != dim {
            return Err(Error::BadStateFile(format!(
                "expected {dim} columns in every row"
            )));
        }
        for (&re, &im) in r_row.iter().zip(i_row) {
            data.push(Complex64::new(re, im));
        }
    }
    ComplexMatrix::new(dim, dim, data)
}

/// Serializes a matrix to the state-file JSON schema with 17 significant
/// digits per component.
pub fn write_matrix_json<W: Write>(w: &mut W, m: &ComplexMatrix) -> Result<()> {
    let dims = if m.rows() == 4 { "[2,2]" } else { "[2]" };
    let render = |pick: fn(&Complex64) -> f64| -> String {
        let rows: Vec<String> = (0..m.rows())
            .map(|i| {
                let cells: Vec<String> = (0..m.cols())
                    .map(|j| format!("{:.16e}", pick(&m[(i, j)])))
                    .collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        format!("[{}]", rows.join(","))
    };
    writeln!(
        w,
        "{{\"dims\":{dims},\"re\":{},\"im\":{}}}",
        render(|z| z.re),
        render(|z| z.im)
    )?;
    Ok(())
}

pub fn save_state(path: &Path, rho: &DensityMatrix) -> Result<()> {
    let mut buf = Vec::new();
    write_matrix_json(&mut buf, rho.matrix())?;
    fs::write(path, buf)?;
    Ok(())
}

/// Loads and re-validates a density matrix from the JSON schema.
pub fn load_state(path: &Path) -> Result<DensityMatrix> {
    load_state_with(path, TOL_HERM, TOL_PSD)
}

pub fn load_state_with(path: &Path, tol_herm: f64, tol_psd: f64) -> Result<DensityMatrix> {
    let sf: StateFile = serde_json::from_str(&fs::read_to_string(path)?)?;
    DensityMatrix::with_tolerances(matrix_from_file(&sf)?, tol_herm, tol_psd)
}

/// Loads a Hermitian operator (e.g. a tangent generator) from the same
/// schema; only Hermiticity is enforced.
pub fn load_hermitian(path: &Path) -> Result<ComplexMatrix> {
    let sf: StateFile = serde_json::from_str(&fs::read_to_string(path)?)?;
    let m = matrix_from_file(&sf)?;
    m.check_hermitian(TOL_HERM)?;
    Ok(m)
}
