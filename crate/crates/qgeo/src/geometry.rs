//! Monotone Riemannian metrics on density-matrix space.
//!
//! A symmetric Morozova-Cencov function c(l, m) with the homogeneity law
//! c(tl, tm) = c(l, m)/t defines, together with its constant C = l c(l, l),
//! a metric on the tangent space at a state rho. With rho diagonalized as
//! U diag(l) U^dagger and the tangent rotated into that eigenbasis as
//! A' = U^dagger A U, the squared length is
//!
//!   K(A, A) = C sum_i A'_ii^2 / l_i + 2 sum_{i<j} |A'_ij|^2 c(l_i, l_j)
//!
//! Tangent components below [`COMPONENT_FLOOR`] are dropped before a term
//! is evaluated; a surviving component over a vanishing eigenvalue means
//! the tangent points off the rank stratum and the formula diverges, which
//! is reported as an error rather than guessed around. Tangents of the
//! commutator form i[rho, K] have exact zeros at every such slot, so the
//! whole pipeline built on them never hits the boundary case.
//!
//! Monotonicity (metric contraction under CPTP maps) is checked with the
//! channel applied to both the base point and the tangent. The variant
//! that keeps the tangent fixed is available for comparison but is not a
//! statement any test relies on: a fixed A is not tangent at Lambda(rho)
//! in any natural sense.

use std::sync::Arc;

use num_complex::Complex64;

use crate::config::{COMPONENT_FLOOR, MONOTONE_SLACK, TOL_HERM, TOL_PSD, TOL_TRACE};
use crate::error::{Error, Result};
use crate::matrix::{commutator_i, herm_eig, kron, ComplexMatrix};
use crate::states::DensityMatrix;

/// Traceless Hermitian matrix: a tangent direction on the state manifold.
#[derive(Debug, Clone)]
pub struct TangentVector {
    mat: ComplexMatrix,
}

impl TangentVector {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        mat.check_hermitian(TOL_HERM)?;
        let tr = mat.trace().norm();
        if tr > TOL_TRACE {
            return Err(Error::NotTraceless {
                trace_magnitude: tr,
            });
        }
        Ok(Self { mat })
    }

    pub fn base_dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    /// Largest component magnitude; zero tangents give zero metric.
    pub fn max_component(&self) -> f64 {
        self.mat.max_abs()
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            mat: self.mat.scale_re(factor),
        }
    }
}

/// i[rho, K] wrapped as a tangent vector at rho.
pub fn tangent_from_generator(rho: &DensityMatrix, k: &ComplexMatrix) -> Result<TangentVector> {
    k.check_hermitian(TOL_HERM)?;
    if k.rows() != rho.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: k.rows(),
        });
    }
    TangentVector::new(commutator_i(rho.matrix(), k)?)
}

/// A Morozova-Cencov function together with its constant C.
#[derive(Clone)]
pub struct McFunction {
    name: String,
    c: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
    big_c: f64,
}

impl std::fmt::Debug for McFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("McFunction")
            .field("name", &self.name)
            .field("big_c", &self.big_c)
            .finish()
    }
}

impl McFunction {
    /// Wraps a symmetric homogeneous function; C is fixed by the diagonal
    /// law C = l c(l, l) evaluated at l = 1.
    pub fn new(
        name: impl Into<String>,
        c: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        let big_c = c(1.0, 1.0);
        Self {
            name: name.into(),
            c: Arc::new(c),
            big_c,
        }
    }

    /// The default function 2/(l + m); C = 1. Generates the Bures (SLD)
    /// metric, the minimal monotone one.
    pub fn bures() -> Self {
        Self::new("bures", |l, m| 2.0 / (l + m))
    }

    /// Kubo-Mori function (ln l - ln m)/(l - m), extended continuously
    /// across the diagonal.
    pub fn kubo_mori() -> Self {
        Self::new("kubo-mori", |l: f64, m: f64| {
            if (l - m).abs() < 1e-12 * (l + m) {
                2.0 / (l + m)
            } else {
                (l.ln() - m.ln()) / (l - m)
            }
        })
    }

    /// Right-logarithmic-derivative function (l + m)/(2 l m), the maximal
    /// monotone choice.
    pub fn rld() -> Self {
        Self::new("rld", |l, m| (l + m) / (2.0 * l * m))
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "bures" => Ok(Self::bures()),
            "kubo-mori" => Ok(Self::kubo_mori()),
            "rld" => Ok(Self::rld()),
            other => Err(Error::UnknownMcFunction(other.to_string())),
        }
    }

    pub fn registered_names() -> &'static [&'static str] {
        &["bures", "kubo-mori", "rld"]
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn c(&self, l: f64, m: f64) -> f64 {
        (self.c)(l, m)
    }

    pub fn big_c(&self) -> f64 {
        self.big_c
    }
}

fn rotate_to_eigenbasis(basis: &ComplexMatrix, a: &ComplexMatrix) -> ComplexMatrix {
    &(&basis.dagger() * a) * basis
}

fn stratum_err(i: usize, j: usize, component: f64) -> Error {
    Error::StratumBoundary {
        detail: format!(
            "component ({i},{j}) of magnitude {component:.3e} sits over a vanishing eigenvalue"
        ),
    }
}

/// Squared length K(A, A) of a tangent at rho under the chosen MC function.
pub fn metric_eval(rho: &DensityMatrix, a: &TangentVector, f: &McFunction) -> Result<f64> {
    if a.base_dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: a.base_dim(),
        });
    }
    let eig = herm_eig(rho.matrix())?;
    let rot = rotate_to_eigenbasis(&eig.basis, a.matrix());
    let n = rho.dim();
    let mut total = 0.0;
    for i in 0..n {
        let d = rot[(i, i)].re;
        if d.abs() < COMPONENT_FLOOR {
            continue;
        }
        let l = eig.values[i];
        if l <= TOL_PSD {
            return Err(stratum_err(i, i, d.abs()));
        }
        total += f.big_c() * d * d / l;
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let mag = rot[(i, j)].norm();
            if mag < COMPONENT_FLOOR {
                continue;
            }
            let (li, lj) = (eig.values[i], eig.values[j]);
            if li <= TOL_PSD && lj <= TOL_PSD {
                return Err(stratum_err(i, j, mag));
            }
            let cv = f.c(li.max(0.0), lj.max(0.0));
            if !cv.is_finite() {
                return Err(stratum_err(i, j, mag));
            }
            total += 2.0 * mag * mag * cv;
        }
    }
    Ok(total)
}

/// Sesquilinear extension of [`metric_eval`]: conjugate-linear in `a`,
/// linear in `b`, with K(a, b) = conj(K(b, a)) and K(a, a) real.
pub fn metric_form(
    rho: &DensityMatrix,
    a: &TangentVector,
    b: &TangentVector,
    f: &McFunction,
) -> Result<Complex64> {
    if a.base_dim() != rho.dim() || b.base_dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: a.base_dim(),
        });
    }
    let eig = herm_eig(rho.matrix())?;
    let ra = rotate_to_eigenbasis(&eig.basis, a.matrix());
    let rb = rotate_to_eigenbasis(&eig.basis, b.matrix());
    let n = rho.dim();
    let mut total = Complex64::new(0.0, 0.0);
    for i in 0..n {
        let (da, db) = (ra[(i, i)].re, rb[(i, i)].re);
        if da.abs() < COMPONENT_FLOOR || db.abs() < COMPONENT_FLOOR {
            continue;
        }
        let l = eig.values[i];
        if l <= TOL_PSD {
            return Err(stratum_err(i, i, da.abs().max(db.abs())));
        }
        total += f.big_c() * da * db / l;
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let (za, zb) = (ra[(i, j)], rb[(i, j)]);
            if za.norm() < COMPONENT_FLOOR || zb.norm() < COMPONENT_FLOOR {
                continue;
            }
            let (li, lj) = (eig.values[i], eig.values[j]);
            if li <= TOL_PSD && lj <= TOL_PSD {
                return Err(stratum_err(i, j, za.norm().max(zb.norm())));
            }
            let cv = f.c(li.max(0.0), lj.max(0.0));
            if !cv.is_finite() {
                return Err(stratum_err(i, j, za.norm().max(zb.norm())));
            }
            // The (j,i) slot contributes the conjugate term.
            let z = za.conj() * zb;
            total += (z + z.conj()) * cv;
        }
    }
    Ok(total)
}

/// CPTP map in Kraus form; completeness sum K_i^dagger K_i = I is enforced
/// at construction.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    ops: Vec<ComplexMatrix>,
}

impl KrausChannel {
    pub fn new(ops: Vec<ComplexMatrix>) -> Result<Self> {
        let dim = match ops.first() {
            Some(k) => k.rows(),
            None => return Err(Error::ChannelIncomplete { deficit: 1.0 }),
        };
        for k in &ops {
            if !k.is_square() || k.rows() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: k.rows(),
                });
            }
        }
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for k in &ops {
            sum = &sum + &(&k.dagger() * k);
        }
        let deficit = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if deficit > 1e-12 {
            return Err(Error::ChannelIncomplete { deficit });
        }
        Ok(Self { ops })
    }

    pub fn dim(&self) -> usize {
        self.ops[0].rows()
    }

    pub fn kraus_ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    /// Channel acting independently on both qubits of a 2 (x) 2 system:
    /// Kraus set {K_i (x) K_j}.
    pub fn two_qubit_lift(&self) -> Result<KrausChannel> {
        let mut ops = Vec::with_capacity(self.ops.len() * self.ops.len());
        for a in &self.ops {
            for b in &self.ops {
                ops.push(kron(a, b));
            }
        }
        KrausChannel::new(ops)
    }
}

/// sum_i K_i m K_i^dagger.
pub fn apply_channel(ch: &KrausChannel, m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if m.rows() != ch.dim() || m.cols() != ch.dim() {
        return Err(Error::DimensionMismatch {
            left: ch.dim(),
            right: m.rows(),
        });
    }
    let mut out = ComplexMatrix::zeros(m.rows(), m.cols());
    for k in &ch.ops {
        out = &out + &(&(k * m) * &k.dagger());
    }
    Ok(out)
}

fn real_scaled(m: ComplexMatrix, factor: f64) -> ComplexMatrix {
    m.scale_re(factor)
}

/// Identity channel on `dim`-dimensional states.
pub fn identity_channel(dim: usize) -> KrausChannel {
    KrausChannel::new(vec![ComplexMatrix::identity(dim)]).expect("identity is trace preserving")
}

fn check_unit_interval(name: &'static str, q: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::InvalidParameter {
            family: name,
            constraint: format!("parameter must lie in [0,1], got {q}"),
        });
    }
    Ok(())
}

/// Depolarizing channel: Kraus {sqrt(1-3q/4) I, sqrt(q)/2 sx, sqrt(q)/2 sy,
/// sqrt(q)/2 sz}. q = 1 maps every qubit to I/2.
pub fn depolarizing(q: f64) -> Result<KrausChannel> {
    check_unit_interval("depolarizing", q)?;
    use crate::matrix::Pauli;
    let w = (q.max(0.0)).sqrt() / 2.0;
    KrausChannel::new(vec![
        real_scaled(
            ComplexMatrix::identity(2),
            (1.0 - 3.0 * q / 4.0).max(0.0).sqrt(),
        ),
        real_scaled(Pauli::X.matrix(), w),
        real_scaled(Pauli::Y.matrix(), w),
        real_scaled(Pauli::Z.matrix(), w),
    ])
}

/// Dephasing channel: Kraus {sqrt(1-q) I, sqrt(q) sz}; scales off-diagonal
/// entries by 1 - 2q.
pub fn dephasing(q: f64) -> Result<KrausChannel> {
    check_unit_interval("dephasing", q)?;
    use crate::matrix::Pauli;
    KrausChannel::new(vec![
        real_scaled(ComplexMatrix::identity(2), (1.0 - q).max(0.0).sqrt()),
        real_scaled(Pauli::Z.matrix(), q.sqrt()),
    ])
}

/// Amplitude damping: K0 = [[1,0],[0,sqrt(1-g)]], K1 = [[0,sqrt(g)],[0,0]].
pub fn amplitude_damping(gamma: f64) -> Result<KrausChannel> {
    check_unit_interval("amplitude-damping", gamma)?;
    let mut k0 = ComplexMatrix::identity(2);
    k0[(1, 1)] = Complex64::new((1.0 - gamma).max(0.0).sqrt(), 0.0);
    let mut k1 = ComplexMatrix::zeros(2, 2);
    k1[(0, 1)] = Complex64::new(gamma.sqrt(), 0.0);
    KrausChannel::new(vec![k0, k1])
}

/// Bit-flip channel: Kraus {sqrt(1-q) I, sqrt(q) sx}.
pub fn bit_flip(q: f64) -> Result<KrausChannel> {
    check_unit_interval("bit-flip", q)?;
    use crate::matrix::Pauli;
    KrausChannel::new(vec![
        real_scaled(ComplexMatrix::identity(2), (1.0 - q).max(0.0).sqrt()),
        real_scaled(Pauli::X.matrix(), q.sqrt()),
    ])
}

/// Labeled sample of every built-in qubit channel over a parameter grid in
/// (0, 1); the raw constructors take arbitrary parameters.
pub fn builtin_channels() -> Vec<(String, KrausChannel)> {
    let mut out = Vec::new();
    for &q in &[0.1, 0.3, 0.5, 0.7, 0.9] {
        out.push((format!("depolarizing:{q}"), depolarizing(q).unwrap()));
        out.push((format!("dephasing:{q}"), dephasing(q).unwrap()));
        out.push((
            format!("amplitude-damping:{q}"),
            amplitude_damping(q).unwrap(),
        ));
        out.push((format!("bit-flip:{q}"), bit_flip(q).unwrap()));
    }
    out
}

/// Parses "name:param" channel specs, e.g. "depolarizing:0.5" or
/// "identity".
pub fn channel_by_spec(spec: &str) -> Result<KrausChannel> {
    if spec == "identity" {
        return Ok(identity_channel(2));
    }
    let (name, param) = spec
        .split_once(':')
        .ok_or_else(|| Error::UnknownChannel(spec.to_string()))?;
    let q: f64 = param
        .parse()
        .map_err(|_| Error::UnknownChannel(spec.to_string()))?;
    match name {
        "depolarizing" => depolarizing(q),
        "dephasing" => dephasing(q),
        "amplitude-damping" => amplitude_damping(q),
        "bit-flip" => bit_flip(q),
        _ => Err(Error::UnknownChannel(spec.to_string())),
    }
}

/// Whether the channel is applied to the tangent along with the base point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TangentTransport {
    /// Standard contraction statement: compare K_{L(rho)}(L(A)) with
    /// K_rho(A).
    WithChannel,
    /// Keep A fixed at the new base point; for comparison only.
    Fixed,
}

#[derive(Debug, Clone, Copy)]
pub struct MonotonicityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

#[derive(Debug, Clone)]
pub enum MonotonicityVerdict {
    Checked(MonotonicityReport),
    /// The transformed pair left the metric's domain; not a failure.
    Skipped {
        reason: String,
    },
}

/// Contraction check K_{L(rho)}(L(A), L(A)) <= K_rho(A, A) + slack.
pub fn monotonicity_check(
    rho: &DensityMatrix,
    a: &TangentVector,
    ch: &KrausChannel,
    f: &McFunction,
) -> Result<MonotonicityVerdict> {
    monotonicity_check_with(rho, a, ch, f, TangentTransport::WithChannel)
}

pub fn monotonicity_check_with(
    rho: &DensityMatrix,
    a: &TangentVector,
    ch: &KrausChannel,
    f: &McFunction,
    transport: TangentTransport,
) -> Result<MonotonicityVerdict> {
    let rhs = match metric_eval(rho, a, f) {
        Ok(v) => v,
        Err(Error::StratumBoundary { detail }) => {
            return Ok(MonotonicityVerdict::Skipped { reason: detail })
        }
        Err(e) => return Err(e),
    };
    let mapped_state = DensityMatrix::new(apply_channel(ch, rho.matrix())?)?;
    let mapped_tangent = match transport {
        TangentTransport::WithChannel => TangentVector::new(apply_channel(ch, a.matrix())?)?,
        TangentTransport::Fixed => a.clone(),
    };
    let lhs = match metric_eval(&mapped_state, &mapped_tangent, f) {
        Ok(v) => v,
        Err(Error::StratumBoundary { detail }) => {
            return Ok(MonotonicityVerdict::Skipped { reason: detail })
        }
        Err(e) => return Err(e),
    };
    Ok(MonotonicityVerdict::Checked(MonotonicityReport {
        lhs,
        rhs,
        holds: lhs <= rhs + MONOTONE_SLACK,
    }))
}
