//! Command-line surface: measures, metrics, sweeps, channel application,
//! and the relation audit.
//!
//! Exit codes: 0 on success, 2 on validation/usage failure, 3 when an
//! audit reports a DEVIATION (or mismatches an --expect file), so CI can
//! pin the known-deviation set without parsing text.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qgeo::config::{RESIDUAL_THRESHOLD, TOL_HERM, TOL_PSD};
use qgeo::geometry::{
    channel_by_spec, monotonicity_check_with, MonotonicityVerdict, TangentTransport,
};
use qgeo::relations::{
    parse_expected_status, registry, relation_by_id, render_summary, write_audit_csv,
    write_sweep_csv, Relation, Verdict,
};
use qgeo::states::{
    load_hermitian, load_state_with, save_state, DensityMatrix, Family, FamilyDescriptor,
};
use qgeo::{
    apply_channel, concurrence, metric_eval, negativity_wrt, tangent_from_generator, Config, Error,
    Pauli, Subsystem, TangentVector,
};

#[derive(Parser)]
#[command(
    name = "qgeo",
    about = "Monotone Riemannian metrics on qubit states, two-qubit entanglement measures, and closed-form identity audits",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print negativity, concurrence, and reduced-state spectra of a
    /// two-qubit state
    Measure(MeasureArgs),
    /// Print the Riemannian metric K and sqrt(K) for a tangent i[rho, K]
    Metric(MetricArgs),
    /// Write a CSV of measures and metric values over a family parameter
    /// grid
    Sweep(SweepArgs),
    /// Audit the registered closed-form relations numerically
    Audit(AuditArgs),
    /// Apply a Kraus channel to a state and optionally check metric
    /// contraction
    Channel(ChannelArgs),
}

#[derive(Args)]
struct StateSource {
    /// State family: pure | bell | mems4 | mems3 | mems2 | mjw | nmems
    #[arg(long, conflicts_with = "file")]
    family: Option<String>,
    /// Schmidt coefficient for pure/nmems
    #[arg(long)]
    alpha: Option<f64>,
    /// Mixing weight for nmems
    #[arg(long)]
    p: Option<f64>,
    /// Largest eigenvalue for mems2
    #[arg(long)]
    p1: Option<f64>,
    /// Second eigenvalue for mems4/mems3
    #[arg(long)]
    p2: Option<f64>,
    /// Smallest eigenvalue for mems4
    #[arg(long)]
    p4: Option<f64>,
    /// Coherence parameter for mjw
    #[arg(long)]
    r: Option<f64>,
    /// Load the state from a JSON file instead of a family spec
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct CommonOpts {
    /// Subsystem used for reductions and the partial transpose
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    subsystem: u8,
    /// Registered MC function: bures | kubo-mori | rld
    #[arg(long, default_value = "bures")]
    mc_function: String,
    /// Hermiticity tolerance for state validation
    #[arg(long, default_value_t = TOL_HERM)]
    tol_herm: f64,
    /// Negative-eigenvalue tolerance for state validation
    #[arg(long, default_value_t = TOL_PSD)]
    tol_psd: f64,
    /// Residual below which an audited relation counts as CONFIRMED
    #[arg(long, default_value_t = RESIDUAL_THRESHOLD)]
    residual_threshold: f64,
}

impl CommonOpts {
    fn config(&self) -> Result<Config, Error> {
        let config = Config {
            tol_herm: self.tol_herm,
            tol_psd: self.tol_psd,
            residual_threshold: self.residual_threshold,
            mc_function: self.mc_function.clone(),
            subsystem: if self.subsystem == 1 {
                Subsystem::First
            } else {
                Subsystem::Second
            },
        };
        config.validate()?;
        Ok(config)
    }
}

#[derive(Args)]
struct MeasureArgs {
    #[command(flatten)]
    source: StateSource,
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Args)]
struct MetricArgs {
    #[command(flatten)]
    source: StateSource,
    #[command(flatten)]
    common: CommonOpts,
    /// Tangent generator: sx | sy | sz | path to a Hermitian-matrix JSON
    /// file
    #[arg(long, default_value = "sx")]
    generator: String,
}

#[derive(Args)]
struct SweepArgs {
    /// State family to sweep
    #[arg(long)]
    family: String,
    /// Grid points per parameter
    #[arg(long, default_value_t = 50)]
    grid: usize,
    /// Output CSV path
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Args)]
struct AuditArgs {
    /// Comma-separated relation ids (default: all seven)
    #[arg(long)]
    relations: Option<String>,
    /// Grid points per parameter
    #[arg(long, default_value_t = 50)]
    grid: usize,
    /// Optional output CSV path for the per-point report
    #[arg(long)]
    out: Option<PathBuf>,
    /// Expected-status CSV (relation_id,verdict); exit 0 iff actual
    /// verdicts match
    #[arg(long)]
    expect: Option<PathBuf>,
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Args)]
struct ChannelArgs {
    #[command(flatten)]
    source: StateSource,
    #[command(flatten)]
    common: CommonOpts,
    /// Channel spec: identity | depolarizing:q | dephasing:q |
    /// amplitude-damping:g | bit-flip:q
    #[arg(long)]
    channel: String,
    /// Output path for the mapped state
    #[arg(long)]
    out: PathBuf,
    /// Optional tangent generator (sx|sy|sz) for a contraction report
    #[arg(long)]
    generator: Option<String>,
    /// Compare without mapping the tangent through the channel
    #[arg(long)]
    fixed_tangent: bool,
}

/// 12 significant digits for human-readable numbers.
fn fmt12(x: f64) -> String {
    format!("{x:.11e}")
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter {
        family: "cli",
        constraint: msg.into(),
    }
}

impl StateSource {
    fn descriptor(&self) -> Result<FamilyDescriptor, Error> {
        let name = self
            .family
            .as_deref()
            .ok_or_else(|| invalid("--family or --file required"))?;
        let need = |v: Option<f64>, flag: &str| {
            v.ok_or_else(|| invalid(format!("--{flag} is required for family {name}")))
        };
        match name {
            "pure" => Ok(FamilyDescriptor::PureSchmidt {
                alpha: need(self.alpha, "alpha")?,
            }),
            "bell" => Ok(FamilyDescriptor::Bell),
            "mems4" => Ok(FamilyDescriptor::MemsRank4 {
                p2: need(self.p2, "p2")?,
                p4: need(self.p4, "p4")?,
            }),
            "mems3" => Ok(FamilyDescriptor::MemsRank3 {
                p2: need(self.p2, "p2")?,
            }),
            "mems2" => Ok(FamilyDescriptor::MemsRank2 {
                p1: need(self.p1, "p1")?,
            }),
            "mjw" => Ok(FamilyDescriptor::MjwMems {
                r: need(self.r, "r")?,
            }),
            "nmems" => Ok(FamilyDescriptor::Nmems {
                p: need(self.p, "p")?,
                alpha: need(self.alpha, "alpha")?,
            }),
            other => Err(invalid(format!("unknown family '{other}'"))),
        }
    }

    fn load(&self, config: &Config) -> Result<DensityMatrix, Error> {
        match &self.file {
            Some(path) => load_state_with(path, config.tol_herm, config.tol_psd),
            None => self.descriptor()?.generate(),
        }
    }
}

fn parse_family(name: &str) -> Result<Family, Error> {
    match name {
        "pure" => Ok(Family::PureSchmidt),
        "bell" => Ok(Family::Bell),
        "mems4" => Ok(Family::MemsRank4),
        "mems3" => Ok(Family::MemsRank3),
        "mems2" => Ok(Family::MemsRank2),
        "mjw" => Ok(Family::MjwMems),
        "nmems" => Ok(Family::Nmems),
        other => Err(invalid(format!("unknown family '{other}'"))),
    }
}

fn parse_generator(spec: &str) -> Result<qgeo::ComplexMatrix, Error> {
    match spec {
        "sx" => Ok(Pauli::X.matrix()),
        "sy" => Ok(Pauli::Y.matrix()),
        "sz" => Ok(Pauli::Z.matrix()),
        path => load_hermitian(std::path::Path::new(path)),
    }
}

fn spectrum_text(rho: &DensityMatrix) -> String {
    let parts: Vec<String> = rho.spectrum().iter().map(|l| fmt12(*l)).collect();
    format!("[{}]", parts.join(", "))
}

fn cmd_measure(args: &MeasureArgs) -> Result<(), Error> {
    let config = args.common.config()?;
    let rho = args.source.load(&config)?;
    if rho.dim() != 4 {
        return Err(Error::WrongDimension {
            expected: 4,
            got: rho.dim(),
        });
    }
    println!(
        "negativity  = {}",
        fmt12(negativity_wrt(&rho, config.subsystem)?)
    );
    println!("concurrence = {}", fmt12(concurrence(&rho)?));
    println!(
        "reduced A1 spectrum = {}",
        spectrum_text(&rho.reduce(Subsystem::First)?)
    );
    println!(
        "reduced A2 spectrum = {}",
        spectrum_text(&rho.reduce(Subsystem::Second)?)
    );
    Ok(())
}

fn reduced_for_metric(rho: DensityMatrix, subsystem: Subsystem) -> Result<DensityMatrix, Error> {
    if rho.dim() == 4 {
        rho.reduce(subsystem)
    } else {
        Ok(rho)
    }
}

fn cmd_metric(args: &MetricArgs) -> Result<(), Error> {
    let config = args.common.config()?;
    let mc = config.mc()?;
    let rho = reduced_for_metric(args.source.load(&config)?, config.subsystem)?;
    let generator = parse_generator(&args.generator)?;
    let tangent = tangent_from_generator(&rho, &generator)?;
    let k = metric_eval(&rho, &tangent, &mc)?;
    println!("K       = {}", fmt12(k));
    println!("sqrt(K) = {}", fmt12(k.max(0.0).sqrt()));
    if tangent.max_component() < 1e-12 {
        println!("note: tangent i[rho, K] vanishes (state commutes with the generator), so the metric is zero");
    }
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), Error> {
    let engine = args.common.config()?.engine()?;
    let table = engine.sweep(parse_family(&args.family)?, args.grid)?;
    let mut buf = Vec::new();
    write_sweep_csv(&mut buf, &table)?;
    fs::write(&args.out, buf)?;
    println!("wrote {} rows to {}", table.rows.len(), args.out.display());
    Ok(())
}

fn selected_relations(arg: &Option<String>) -> Result<Vec<Relation>, Error> {
    match arg {
        None => Ok(registry()),
        Some(list) => list
            .split(',')
            .map(|id| relation_by_id(id.trim()))
            .collect(),
    }
}

fn cmd_audit(args: &AuditArgs) -> Result<ExitCode, Error> {
    let engine = args.common.config()?.engine()?;
    let relations = selected_relations(&args.relations)?;
    let mut outcomes = Vec::with_capacity(relations.len());
    for rel in &relations {
        outcomes.push(engine.audit(rel, args.grid)?);
    }
    print!("{}", render_summary(&outcomes));
    if let Some(path) = &args.out {
        let mut buf = Vec::new();
        write_audit_csv(&mut buf, &outcomes, engine.residual_threshold)?;
        fs::write(path, buf)?;
        println!("wrote per-point report to {}", path.display());
    }
    let code = match &args.expect {
        Some(path) => {
            let expected = parse_expected_status(&fs::read_to_string(path)?)?;
            let mut ok = true;
            for outcome in &outcomes {
                match expected.iter().find(|(id, _)| id == outcome.relation_id) {
                    Some((_, verdict)) if *verdict == outcome.verdict => {}
                    Some((_, verdict)) => {
                        ok = false;
                        println!(
                            "expect mismatch: {} is {}, expected {}",
                            outcome.relation_id, outcome.verdict, verdict
                        );
                    }
                    None => {
                        ok = false;
                        println!("expect mismatch: {} not covered", outcome.relation_id);
                    }
                }
            }
            if ok {
                println!("verdicts match expected status");
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
        None => {
            if outcomes.iter().all(|o| o.verdict == Verdict::Confirmed) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
    };
    Ok(code)
}

fn cmd_channel(args: &ChannelArgs) -> Result<(), Error> {
    let config = args.common.config()?;
    let rho = args.source.load(&config)?;
    let qubit_channel = channel_by_spec(&args.channel)?;
    let mapped = if rho.dim() == 4 {
        apply_channel(&qubit_channel.two_qubit_lift()?, rho.matrix())?
    } else {
        apply_channel(&qubit_channel, rho.matrix())?
    };
    let mapped = DensityMatrix::with_tolerances(mapped, config.tol_herm, config.tol_psd)?;
    save_state(&args.out, &mapped)?;
    println!("wrote mapped state to {}", args.out.display());

    if let Some(spec) = &args.generator {
        let mc = config.mc()?;
        let base = reduced_for_metric(rho, config.subsystem)?;
        let tangent =
            TangentVector::new(qgeo::commutator_i(base.matrix(), &parse_generator(spec)?)?)?;
        let transport = if args.fixed_tangent {
            TangentTransport::Fixed
        } else {
            TangentTransport::WithChannel
        };
        match monotonicity_check_with(&base, &tangent, &qubit_channel, &mc, transport)? {
            MonotonicityVerdict::Checked(rep) => {
                println!("contraction: lhs = {}", fmt12(rep.lhs));
                println!("contraction: rhs = {}", fmt12(rep.rhs));
                println!("holds = {}", rep.holds);
            }
            MonotonicityVerdict::Skipped { reason } => {
                println!("contraction check skipped: {reason}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Measure(args) => cmd_measure(args).map(|()| ExitCode::SUCCESS),
        Cmd::Metric(args) => cmd_metric(args).map(|()| ExitCode::SUCCESS),
        Cmd::Sweep(args) => cmd_sweep(args).map(|()| ExitCode::SUCCESS),
        Cmd::Audit(args) => cmd_audit(args),
        Cmd::Channel(args) => cmd_channel(args).map(|()| ExitCode::SUCCESS),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
