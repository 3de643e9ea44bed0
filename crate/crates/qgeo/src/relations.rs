//! Registry of closed-form metric-entanglement identities and the audit
//! engine that confirms or refutes each one numerically.
//!
//! Each relation pairs a state family with a closed form for the reduced
//! state's Riemannian metric in terms of an entanglement measure of the
//! full state. The audit recomputes the left side end to end (generator ->
//! partial trace -> commutator tangent -> metric) and the right side from
//! the measures, then compares over a deterministic parameter grid.
//!
//! R1-R5 are exact identities and audit CONFIRMED. R6 and R7 as registered
//! in their original closed forms do not survive direct evaluation; each
//! carries a corrected candidate that does, and the audit always reports
//! both residuals side by side rather than silently swapping formulas.
//!
//! Audit domains exclude parameter points whose reduced state is maximally
//! mixed (eigenvalue gap below [`REDUCED_GAP_MARGIN`]): the metric
//! vanishes there and every relation degenerates.

use std::io::Write;

use crate::config::{REDUCED_GAP_MARGIN, RESIDUAL_THRESHOLD};
use crate::entanglement::{concurrence, negativity_wrt};
use crate::error::{Error, Result};
use crate::geometry::{metric_eval, tangent_from_generator, McFunction};
use crate::matrix::{Pauli, Subsystem};
use crate::states::{Family, FamilyDescriptor};

/// Entanglement measures of the full two-qubit state at one grid point.
#[derive(Debug, Clone, Copy)]
pub struct Measures {
    pub negativity: f64,
    pub concurrence: f64,
}

/// Which metric quantity the closed form is stated for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricSide {
    K,
    SqrtK,
}

impl MetricSide {
    fn apply(self, k: f64) -> f64 {
        match self {
            MetricSide::K => k,
            MetricSide::SqrtK => k.max(0.0).sqrt(),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            MetricSide::K => "K",
            MetricSide::SqrtK => "sqrt(K)",
        }
    }
}

/// A closed form: display text plus an evaluator over (point, measures).
#[derive(Clone, Copy)]
pub struct ClosedForm {
    pub text: &'static str,
    pub eval: fn(&FamilyDescriptor, &Measures) -> f64,
}

/// One registered identity.
#[derive(Clone, Copy)]
pub struct Relation {
    pub id: &'static str,
    pub family: Family,
    pub generator: Pauli,
    pub lhs: MetricSide,
    pub published: ClosedForm,
    pub corrected: Option<ClosedForm>,
}

fn alpha_of(point: &FamilyDescriptor) -> f64 {
    match *point {
        FamilyDescriptor::PureSchmidt { alpha } | FamilyDescriptor::Nmems { alpha, .. } => alpha,
        _ => panic!("relation applied to wrong family"),
    }
}

fn p4_of(point: &FamilyDescriptor) -> f64 {
    match *point {
        FamilyDescriptor::MemsRank4 { p4, .. } => p4,
        _ => panic!("relation applied to wrong family"),
    }
}

fn p3_of_rank3(point: &FamilyDescriptor) -> f64 {
    match *point {
        // p3 = p2 for the rank-3 family.
        FamilyDescriptor::MemsRank3 { p2 } => p2,
        _ => panic!("relation applied to wrong family"),
    }
}

/// All seven relations, in id order.
pub fn registry() -> Vec<Relation> {
    let pure_rhs = ClosedForm {
        text: "K = 4(1 - 4 N^2)",
        eval: |_, m| 4.0 * (1.0 - 4.0 * m.negativity * m.negativity),
    };
    vec![
        Relation {
            id: "R1",
            family: Family::PureSchmidt,
            generator: Pauli::X,
            lhs: MetricSide::K,
            published: pure_rhs,
            corrected: None,
        },
        Relation {
            id: "R2",
            family: Family::PureSchmidt,
            generator: Pauli::Y,
            lhs: MetricSide::K,
            published: pure_rhs,
            corrected: None,
        },
        Relation {
            id: "R3",
            family: Family::MemsRank4,
            generator: Pauli::X,
            lhs: MetricSide::SqrtK,
            published: ClosedForm {
                text: "sqrt(K) = (2/3)(1 - C) - 4 p4",
                eval: |pt, m| (2.0 / 3.0) * (1.0 - m.concurrence) - 4.0 * p4_of(pt),
            },
            corrected: None,
        },
        Relation {
            id: "R4",
            family: Family::MemsRank3,
            generator: Pauli::X,
            lhs: MetricSide::SqrtK,
            published: ClosedForm {
                text: "sqrt(K) = 2(1 - C) - 4 p3",
                eval: |pt, m| 2.0 * (1.0 - m.concurrence) - 4.0 * p3_of_rank3(pt),
            },
            corrected: None,
        },
        Relation {
            id: "R5",
            family: Family::MemsRank2,
            generator: Pauli::X,
            lhs: MetricSide::SqrtK,
            published: ClosedForm {
                text: "sqrt(K) = 2(1 - C)",
                eval: |_, m| 2.0 * (1.0 - m.concurrence),
            },
            corrected: None,
        },
        Relation {
            id: "R6",
            family: Family::MjwMems,
            generator: Pauli::X,
            lhs: MetricSide::SqrtK,
            published: ClosedForm {
                text: "sqrt(K) = (4/3)(1 - N)",
                eval: |_, m| (4.0 / 3.0) * (1.0 - m.negativity),
            },
            corrected: Some(ClosedForm {
                text: "sqrt(K) = (2/3)(1 - 2 N)",
                eval: |_, m| (2.0 / 3.0) * (1.0 - 2.0 * m.negativity),
            }),
        },
        Relation {
            id: "R7",
            family: Family::Nmems,
            generator: Pauli::X,
            lhs: MetricSide::SqrtK,
            published: ClosedForm {
                text: "sqrt(K) = 2(1 - 2 (alpha/beta) C)",
                eval: |pt, m| {
                    let a = alpha_of(pt);
                    let b = (1.0 - a * a).sqrt();
                    2.0 * (1.0 - 2.0 * (a / b) * m.concurrence)
                },
            },
            corrected: Some(ClosedForm {
                text: "sqrt(K) = 2 |1 - (beta/alpha) C|",
                eval: |pt, m| {
                    let a = alpha_of(pt);
                    let b = (1.0 - a * a).sqrt();
                    2.0 * (1.0 - (b / a) * m.concurrence).abs()
                },
            }),
        },
    ]
}

pub fn relation_by_id(id: &str) -> Result<Relation> {
    registry()
        .into_iter()
        .find(|r| r.id.eq_ignore_ascii_case(id))
        .ok_or_else(|| Error::UnknownRelation(id.to_string()))
}

/// Inclusive evenly spaced grid.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![a],
        _ => {
            let step = (b - a) / (n - 1) as f64;
            (0..n).map(|i| a + step * i as f64).collect()
        }
    }
}

/// Reduced-state eigenvalue gap of the generated state; used by the
/// maximally-mixed exclusion filter.
fn reduced_gap(point: &FamilyDescriptor, subsystem: Subsystem) -> Result<f64> {
    let spec = point.generate()?.reduce(subsystem)?.spectrum();
    Ok(spec[0] - spec[1])
}

impl Relation {
    /// Deterministic audit grid at the given per-parameter density, with
    /// maximally-mixed-subsystem points excluded by margin.
    ///
    /// The two-parameter windows are chosen so every grid point is a valid
    /// family member with strictly positive concurrence (for R3 that means
    /// p2 + p4 < 1/3), keeping the published forms on their own terms.
    pub fn domain(&self, density: usize) -> Vec<FamilyDescriptor> {
        let candidates: Vec<FamilyDescriptor> = match self.family {
            Family::PureSchmidt => linspace(0.01, 0.99, density)
                .into_iter()
                .map(|alpha| FamilyDescriptor::PureSchmidt { alpha })
                .collect(),
            Family::MemsRank4 => {
                let mut pts = Vec::with_capacity(density * density);
                for p2 in linspace(0.1, 0.24, density) {
                    for p4 in linspace(0.001, 0.08, density) {
                        pts.push(FamilyDescriptor::MemsRank4 { p2, p4 });
                    }
                }
                pts
            }
            Family::MemsRank3 => linspace(0.005, 0.32, density)
                .into_iter()
                .map(|p2| FamilyDescriptor::MemsRank3 { p2 })
                .collect(),
            Family::MemsRank2 => linspace(0.01, 0.99, density)
                .into_iter()
                .map(|p1| FamilyDescriptor::MemsRank2 { p1 })
                .collect(),
            Family::MjwMems => linspace(0.0, 0.99, density)
                .into_iter()
                .map(|r| FamilyDescriptor::MjwMems { r })
                .collect(),
            Family::Nmems => {
                let mut pts = Vec::with_capacity(density * density);
                for p in linspace(0.05, 0.95, density) {
                    for alpha in linspace(0.05, 0.95, density) {
                        pts.push(FamilyDescriptor::Nmems { p, alpha });
                    }
                }
                pts
            }
            Family::Bell => vec![FamilyDescriptor::Bell],
        };
        candidates
            .into_iter()
            .filter(|pt| {
                pt.generate().is_ok()
                    && reduced_gap(pt, Subsystem::First)
                        .map(|g| g > REDUCED_GAP_MARGIN)
                        .unwrap_or(false)
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Confirmed,
    Deviation,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Confirmed => write!(f, "CONFIRMED"),
            Verdict::Deviation => write!(f, "DEVIATION"),
        }
    }
}

impl std::str::FromStr for Verdict {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "CONFIRMED" => Ok(Verdict::Confirmed),
            "DEVIATION" => Ok(Verdict::Deviation),
            other => Err(Error::UnknownRelation(format!("bad verdict '{other}'"))),
        }
    }
}

/// Numeric results at one evaluated grid point.
#[derive(Debug, Clone, Copy)]
pub struct AuditValues {
    pub lhs: f64,
    pub rhs_published: f64,
    pub residual_published: f64,
    pub rhs_corrected: Option<f64>,
    pub residual_corrected: Option<f64>,
}

/// One grid point of an audit; `values` is None when the metric left the
/// rank stratum and the point was skipped (logged, never dropped).
#[derive(Debug, Clone)]
pub struct AuditRow {
    pub point: FamilyDescriptor,
    pub values: Option<AuditValues>,
    pub skip_reason: Option<String>,
}

#[derive(Debug, Clone)]
pub struct AuditOutcome {
    pub relation_id: &'static str,
    pub family: Family,
    pub generator: Pauli,
    pub published_text: &'static str,
    pub corrected_text: Option<&'static str>,
    pub rows: Vec<AuditRow>,
    pub verdict: Verdict,
    pub evaluated: usize,
    pub skipped: usize,
    pub max_residual_published: f64,
    pub max_residual_corrected: Option<f64>,
}

/// Runs audits and sweeps with a fixed MC function, residual threshold,
/// and subsystem convention.
#[derive(Debug, Clone)]
pub struct AuditEngine {
    pub mc: McFunction,
    pub residual_threshold: f64,
    pub subsystem: Subsystem,
}

impl Default for AuditEngine {
    fn default() -> Self {
        Self {
            mc: McFunction::bures(),
            residual_threshold: RESIDUAL_THRESHOLD,
            subsystem: Subsystem::First,
        }
    }
}

impl AuditEngine {
    /// Full numeric pipeline at one point: reduced-state metric for the
    /// given generator, plus both measures.
    fn evaluate_point(
        &self,
        point: &FamilyDescriptor,
        generator: Pauli,
    ) -> Result<(f64, Measures)> {
        let rho = point.generate()?;
        let reduced = rho.reduce(self.subsystem)?;
        let tangent = tangent_from_generator(&reduced, &generator.matrix())?;
        let k = metric_eval(&reduced, &tangent, &self.mc)?;
        let measures = Measures {
            negativity: negativity_wrt(&rho, self.subsystem)?,
            concurrence: concurrence(&rho)?,
        };
        Ok((k, measures))
    }

    pub fn audit(&self, rel: &Relation, grid_density: usize) -> Result<AuditOutcome> {
        let domain = rel.domain(grid_density);
        if domain.is_empty() {
            return Err(Error::InvalidParameter {
                family: "audit",
                constraint: format!("empty grid for {} at density {grid_density}", rel.id),
            });
        }
        let mut rows = Vec::with_capacity(domain.len());
        let mut max_pub = 0.0f64;
        let mut max_corr: Option<f64> = rel.corrected.map(|_| 0.0);
        let mut skipped = 0usize;
        for point in domain {
            match self.evaluate_point(&point, rel.generator) {
                Ok((k, measures)) => {
                    let lhs = rel.lhs.apply(k);
                    let rhs_published = (rel.published.eval)(&point, &measures);
                    let residual_published = (lhs - rhs_published).abs();
                    max_pub = max_pub.max(residual_published);
                    let (rhs_corrected, residual_corrected) = match rel.corrected {
                        Some(form) => {
                            let rhs = (form.eval)(&point, &measures);
                            let res = (lhs - rhs).abs();
                            max_corr = max_corr.map(|m| m.max(res));
                            (Some(rhs), Some(res))
                        }
                        None => (None, None),
                    };
                    rows.push(AuditRow {
                        point,
                        values: Some(AuditValues {
                            lhs,
                            rhs_published,
                            residual_published,
                            rhs_corrected,
                            residual_corrected,
                        }),
                        skip_reason: None,
                    });
                }
                Err(Error::StratumBoundary { detail }) => {
                    skipped += 1;
                    rows.push(AuditRow {
                        point,
                        values: None,
                        skip_reason: Some(detail),
                    });
                }
                Err(other) => return Err(other),
            }
        }
        let evaluated = rows.len() - skipped;
        let verdict = if evaluated > 0 && max_pub < self.residual_threshold {
            Verdict::Confirmed
        } else {
            Verdict::Deviation
        };
        Ok(AuditOutcome {
            relation_id: rel.id,
            family: rel.family,
            generator: rel.generator,
            published_text: rel.published.text,
            corrected_text: rel.corrected.map(|f| f.text),
            rows,
            verdict,
            evaluated,
            skipped,
            max_residual_published: max_pub,
            max_residual_corrected: max_corr,
        })
    }

    /// Family sweep: measures and metric values across a parameter grid in
    /// lexicographic parameter order, with no boundary exclusions.
    pub fn sweep(&self, family: Family, density: usize) -> Result<SweepTable> {
        let points: Vec<FamilyDescriptor> = match family {
            Family::PureSchmidt => linspace(0.05, 0.95, density)
                .into_iter()
                .map(|alpha| FamilyDescriptor::PureSchmidt { alpha })
                .collect(),
            Family::MemsRank4 => {
                let mut pts = Vec::new();
                for p2 in linspace(0.1, 0.24, density) {
                    for p4 in linspace(0.001, 0.08, density) {
                        pts.push(FamilyDescriptor::MemsRank4 { p2, p4 });
                    }
                }
                pts
            }
            Family::MemsRank3 => linspace(0.01, 1.0 / 3.0, density)
                .into_iter()
                .map(|p2| FamilyDescriptor::MemsRank3 { p2 })
                .collect(),
            Family::MemsRank2 => linspace(0.01, 0.99, density)
                .into_iter()
                .map(|p1| FamilyDescriptor::MemsRank2 { p1 })
                .collect(),
            Family::MjwMems => linspace(0.0, 1.0, density)
                .into_iter()
                .map(|r| FamilyDescriptor::MjwMems { r })
                .collect(),
            Family::Nmems => {
                let mut pts = Vec::new();
                for p in linspace(0.05, 1.0, density) {
                    for alpha in linspace(0.05, 0.95, density) {
                        pts.push(FamilyDescriptor::Nmems { p, alpha });
                    }
                }
                pts
            }
            Family::Bell => vec![FamilyDescriptor::Bell],
        };
        let mut rows = Vec::with_capacity(points.len());
        for point in points {
            let rho = point.generate()?;
            let reduced = rho.reduce(self.subsystem)?;
            let k_sx = metric_eval(
                &reduced,
                &tangent_from_generator(&reduced, &Pauli::X.matrix())?,
                &self.mc,
            )?;
            let k_sy = metric_eval(
                &reduced,
                &tangent_from_generator(&reduced, &Pauli::Y.matrix())?,
                &self.mc,
            )?;
            rows.push(SweepRow {
                point,
                negativity: negativity_wrt(&rho, self.subsystem)?,
                concurrence: concurrence(&rho)?,
                k_sx,
                k_sy,
                sqrt_k_sx: k_sx.max(0.0).sqrt(),
            });
        }
        Ok(SweepTable { family, rows })
    }
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub point: FamilyDescriptor,
    pub negativity: f64,
    pub concurrence: f64,
    pub k_sx: f64,
    pub k_sy: f64,
    pub sqrt_k_sx: f64,
}

#[derive(Debug, Clone)]
pub struct SweepTable {
    pub family: Family,
    pub rows: Vec<SweepRow>,
}

/// Parameter columns of the audit CSV, in canonical order; relations fill
/// the ones their family uses and leave the rest empty.
pub const AUDIT_PARAM_COLUMNS: [&str; 6] = ["alpha", "p", "p1", "p2", "p4", "r"];

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt17(x: Option<f64>) -> String {
    x.map(fmt17).unwrap_or_default()
}

/// Audit CSV: header
/// `relation_id,params...,lhs,rhs_paper,residual_paper,rhs_corrected,residual_corrected,status`
/// with one parameter column per name in [`AUDIT_PARAM_COLUMNS`].
pub fn write_audit_csv<W: Write>(
    w: &mut W,
    outcomes: &[AuditOutcome],
    residual_threshold: f64,
) -> Result<()> {
    writeln!(
        w,
        "relation_id,{},lhs,rhs_paper,residual_paper,rhs_corrected,residual_corrected,status",
        AUDIT_PARAM_COLUMNS.join(",")
    )?;
    for outcome in outcomes {
        for row in &outcome.rows {
            let params = row.point.params();
            let cells: Vec<String> = AUDIT_PARAM_COLUMNS
                .iter()
                .map(|col| {
                    params
                        .iter()
                        .find(|(name, _)| name == col)
                        .map(|(_, v)| fmt17(*v))
                        .unwrap_or_default()
                })
                .collect();
            match &row.values {
                Some(v) => {
                    let status = if v.residual_published < residual_threshold {
                        "OK"
                    } else {
                        "DEVIATION"
                    };
                    writeln!(
                        w,
                        "{},{},{},{},{},{},{},{}",
                        outcome.relation_id,
                        cells.join(","),
                        fmt17(v.lhs),
                        fmt17(v.rhs_published),
                        fmt17(v.residual_published),
                        opt17(v.rhs_corrected),
                        opt17(v.residual_corrected),
                        status
                    )?;
                }
                None => {
                    writeln!(
                        w,
                        "{},{},,,,,,SKIPPED",
                        outcome.relation_id,
                        cells.join(",")
                    )?;
                }
            }
        }
    }
    Ok(())
}

/// Sweep CSV: family parameter columns followed by
/// `negativity,concurrence,k_sx,k_sy,sqrt_k_sx`.
pub fn write_sweep_csv<W: Write>(w: &mut W, table: &SweepTable) -> Result<()> {
    let mut header: Vec<&str> = table.family.param_names().to_vec();
    header.extend(["negativity", "concurrence", "k_sx", "k_sy", "sqrt_k_sx"]);
    writeln!(w, "{}", header.join(","))?;
    for row in &table.rows {
        let mut cells: Vec<String> = row.point.params().iter().map(|(_, v)| fmt17(*v)).collect();
        cells.extend([
            fmt17(row.negativity),
            fmt17(row.concurrence),
            fmt17(row.k_sx),
            fmt17(row.k_sy),
            fmt17(row.sqrt_k_sx),
        ]);
        writeln!(w, "{}", cells.join(","))?;
    }
    Ok(())
}

/// Per-relation verdict lines for terminal output.
pub fn render_summary(outcomes: &[AuditOutcome]) -> String {
    let mut out = String::new();
    for o in outcomes {
        out.push_str(&format!(
            "{} [{}] {}: points={} skipped={} max_residual_paper={:.3e}",
            o.relation_id,
            o.family.name(),
            o.verdict,
            o.evaluated,
            o.skipped,
            o.max_residual_published,
        ));
        if let Some(mc) = o.max_residual_corrected {
            out.push_str(&format!(" max_residual_corrected={mc:.3e}"));
        }
        out.push('\n');
        out.push_str(&format!(
            "    published form: {} (generator {})\n",
            o.published_text,
            o.generator.label()
        ));
        if let Some(t) = o.corrected_text {
            out.push_str(&format!("    corrected form: {t}\n"));
        }
        for row in o.rows.iter().filter(|r| r.values.is_none()) {
            out.push_str(&format!(
                "    skipped {}: {}\n",
                row.point,
                row.skip_reason.as_deref().unwrap_or("stratum boundary")
            ));
        }
    }
    out
}

/// Expected-status files are CSV lines `relation_id,verdict`; a header
/// line is allowed and ignored.
pub fn parse_expected_status(text: &str) -> Result<Vec<(String, Verdict)>> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.eq_ignore_ascii_case("relation_id,verdict") {
            continue;
        }
        let (id, verdict) = line
            .split_once(',')
            .ok_or_else(|| Error::BadStateFile(format!("bad expected-status line '{line}'")))?;
        out.push((id.trim().to_string(), verdict.parse()?));
    }
    Ok(out)
}
