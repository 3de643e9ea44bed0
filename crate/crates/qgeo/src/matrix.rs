//! Dense complex matrices and the small-matrix spectral kernels the rest
//! of the crate is built on: Hermitian eigendecomposition (cyclic Jacobi),
//! Kronecker products, partial trace/transpose, trace norm, PSD square
//! root, and the commutator map i[rho, K].
//!
//! Everything here is sized for 1x1 up to 4x4; there is no general
//! eigensolver and no sparse storage.

use num_complex::Complex64;

use crate::config::{TOL_HERM, TOL_PSD};
use crate::error::{Error, Result};

/// Which tensor factor of a 2 (x) 2 system an operation refers to.
/// Basis ordering is |00>, |01>, |10>, |11> with the first factor's index
/// varying slowest.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Dense complex matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                rows,
                cols,
                len: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a square matrix from real row slices.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n, rows.first().map_or(0, |r| r.len()));
        for (i, row) in rows.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = Complex64::new(x, 0.0);
            }
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &x) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(x, 0.0);
        }
        m
    }

    /// Rank-1 projector |v><v| from a ket given as amplitudes.
    pub fn projector(ket: &[Complex64]) -> Self {
        let n = ket.len();
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = ket[i] * ket[j].conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    /// Entrywise complex conjugate (no transpose).
    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        debug_assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn scale_re(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Max |M[i][j] - conj(M[j][i])| over all entries; 0 for exactly
    /// Hermitian input.
    pub fn hermiticity_deficit(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = (self[(i, j)] - self[(j, i)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn check_hermitian(&self, tol: f64) -> Result<()> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let deficit = self.hermiticity_deficit();
        if deficit > tol {
            return Err(Error::NotHermitian {
                max_asymmetry: deficit,
            });
        }
        Ok(())
    }

    /// (M + M^dagger)/2; kills asymmetry noise before spectral work.
    fn symmetrized(&self) -> Self {
        let dag = self.dagger();
        let mut out = Self::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = (self[(i, j)] + dag[(i, j)]) * 0.5;
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl std::ops::Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "shape mismatch in add"
        );
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl std::ops::Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "shape mismatch in sub"
        );
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl std::ops::Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimension mismatch in mul");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

/// Pauli operators; the tangent generators used throughout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> ComplexMatrix {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let data = match self {
            Pauli::X => vec![o, l, l, o],
            Pauli::Y => vec![o, -i, i, o],
            Pauli::Z => vec![l, o, o, -l],
        };
        ComplexMatrix {
            rows: 2,
            cols: 2,
            data,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Pauli::X => "sx",
            Pauli::Y => "sy",
            Pauli::Z => "sz",
        }
    }
}

/// Hilbert-Schmidt inner product Tr(X^dagger Y).
pub fn hs_inner(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<Complex64> {
    if !x.is_square() {
        return Err(Error::NotSquare {
            rows: x.rows,
            cols: x.cols,
        });
    }
    if x.rows != y.rows || x.cols != y.cols {
        return Err(Error::DimensionMismatch {
            left: x.rows,
            right: y.rows,
        });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..x.rows {
        for j in 0..x.cols {
            acc += x[(i, j)].conj() * y[(i, j)];
        }
    }
    Ok(acc)
}

/// Kronecker product a (x) b.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(a.rows * b.rows, a.cols * b.cols);
    for ia in 0..a.rows {
        for ja in 0..a.cols {
            let f = a[(ia, ja)];
            if f.norm_sqr() == 0.0 {
                continue;
            }
            for ib in 0..b.rows {
                for jb in 0..b.cols {
                    out[(ia * b.rows + ib, ja * b.cols + jb)] = f * b[(ib, jb)];
                }
            }
        }
    }
    out
}

/// Eigendecomposition of a Hermitian matrix: real eigenvalues sorted
/// non-increasing and a unitary whose columns are the matching
/// eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub basis: ComplexMatrix,
}

impl EigenDecomposition {
    /// U diag(values) U^dagger.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = ComplexMatrix::from_diagonal(&self.values);
        &(&self.basis * &d) * &self.basis.dagger()
    }
}

const JACOBI_MAX_SWEEPS: usize = 64;

/// Hermitian eigendecomposition by cyclic Jacobi rotations.
///
/// Each rotation zeroes one off-diagonal entry exactly: the complex phase
/// of A[p][q] is absorbed into the rotation so the 2x2 subproblem reduces
/// to the real symmetric case. Sweeps continue until the off-diagonal
/// Frobenius mass falls below 1e-14 relative to the input scale.
pub fn herm_eig(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    m.check_hermitian(TOL_HERM)?;
    let n = m.rows;
    let mut a = m.symmetrized();
    let mut v = ComplexMatrix::identity(n);
    let stop = 1e-14 * a.frobenius_norm().max(1.0);

    let mut off = off_diagonal_mass(&a);
    let mut sweeps = 0;
    while off > stop {
        if sweeps >= JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let b = a[(p, q)].norm();
                if b <= f64::MIN_POSITIVE {
                    continue;
                }
                let u = a[(p, q)] / b; // e^{i phi}
                let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * b);
                // Smaller root of t^2 - 2 tau t - 1 = 0.
                let t = if tau >= 0.0 {
                    -1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                let mut j = ComplexMatrix::identity(n);
                j[(p, p)] = Complex64::new(c, 0.0);
                j[(p, q)] = -u * s;
                j[(q, p)] = u.conj() * s;
                j[(q, q)] = Complex64::new(c, 0.0);

                a = &(&j.dagger() * &a) * &j;
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                v = &v * &j;
            }
        }
        off = off_diagonal_mass(&a);
        sweeps += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap());

    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut basis = ComplexMatrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            basis[(row, col)] = v[(row, src)];
        }
    }
    Ok(EigenDecomposition { values, basis })
}

fn off_diagonal_mass(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Trace over one factor of a 2 (x) 2 system; returns the 2x2 state of the
/// kept factor.
pub fn partial_trace(m: &ComplexMatrix, keep: Subsystem) -> Result<ComplexMatrix> {
    if m.rows != 4 || m.cols != 4 {
        return Err(Error::WrongDimension {
            expected: 4,
            got: m.rows,
        });
    }
    let mut out = ComplexMatrix::zeros(2, 2);
    for i in 0..2 {
        for j in 0..2 {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..2 {
                acc += match keep {
                    Subsystem::First => m[(i * 2 + k, j * 2 + k)],
                    Subsystem::Second => m[(k * 2 + i, k * 2 + j)],
                };
            }
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}

/// Transpose the indices of one tensor factor only.
pub fn partial_transpose(m: &ComplexMatrix, part: Subsystem) -> Result<ComplexMatrix> {
    if m.rows != 4 || m.cols != 4 {
        return Err(Error::WrongDimension {
            expected: 4,
            got: m.rows,
        });
    }
    let mut out = ComplexMatrix::zeros(4, 4);
    for i1 in 0..2 {
        for i2 in 0..2 {
            for j1 in 0..2 {
                for j2 in 0..2 {
                    let src = match part {
                        Subsystem::First => (j1 * 2 + i2, i1 * 2 + j2),
                        Subsystem::Second => (i1 * 2 + j2, j1 * 2 + i2),
                    };
                    out[(i1 * 2 + i2, j1 * 2 + j2)] = m[src];
                }
            }
        }
    }
    Ok(out)
}

/// Trace norm of a Hermitian matrix: sum of |eigenvalue|.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    let eig = herm_eig(m)?;
    Ok(eig.values.iter().map(|l| l.abs()).sum())
}

/// Hermitian PSD square root. Eigenvalues within -TOL_PSD of zero are
/// clipped; anything lower is rejected.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = herm_eig(m)?;
    let min = eig.values.iter().copied().fold(f64::INFINITY, f64::min);
    if min < -TOL_PSD {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    let roots: Vec<f64> = eig.values.iter().map(|&l| l.max(0.0).sqrt()).collect();
    let d = ComplexMatrix::from_diagonal(&roots);
    Ok(&(&eig.basis * &d) * &eig.basis.dagger())
}

/// i[rho, K] = i(rho K - K rho); Hermitian and traceless for Hermitian
/// inputs, which is asserted on the result.
pub fn commutator_i(rho: &ComplexMatrix, k: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !rho.is_square() {
        return Err(Error::NotSquare {
            rows: rho.rows,
            cols: rho.cols,
        });
    }
    if rho.rows != k.rows || rho.cols != k.cols {
        return Err(Error::DimensionMismatch {
            left: rho.rows,
            right: k.rows,
        });
    }
    let i = Complex64::new(0.0, 1.0);
    let out = (&(rho * k) - &(k * rho)).scale(i);
    assert!(
        out.hermiticity_deficit() <= 1e-12 * out.max_abs().max(1.0),
        "commutator output must be Hermitian"
    );
    assert!(
        out.trace().norm() <= 1e-12,
        "commutator output must be traceless"
    );
    Ok(out)
}
