//! Command-line front end for the quantum prisoners' dilemma toolkit:
//! evaluate payoffs, certify equilibria, locate entanglement thresholds,
//! classify the strategic form, and emit figure-ready CSV sweeps.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qpd::equilibria::{certify, entangled_conditions, product_conditions, ConfigFamily};
use qpd::{
    classify_quad, payoff_pair, quad_entangled_with, quad_product_with, sweep_quads_with,
    threshold_scan, ClassicalPayoffMatrix, EntanglementConfig, GameConfig, Measurement, Method,
    NamedStrategy, PayoffQuad, ProfileName, StrategyParams, StrategyProfile,
};

/// Equality tolerance for element-ordering classification, in payoff units.
const CLASS_EPS: f64 = 1e-9;

#[derive(Parser)]
#[command(
    name = "qpd",
    version,
    about = "Quantum prisoners' dilemma: payoffs, equilibria, thresholds, classification, sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expected payoffs for a strategy profile, with the closed form
    /// alongside the simulation when the basis admits one.
    Payoff(PayoffArgs),
    /// Certify whether a profile is a Nash equilibrium.
    Nash(NashArgs),
    /// Locate the entanglement where a profile's equilibrium status flips.
    Threshold(ThresholdArgs),
    /// Classify the strategic form at a given entanglement.
    Classify(ClassifyArgs),
    /// Write a CSV sweep of the strategic-form elements over the
    /// entanglement axis.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasurementKind {
    /// Bell-like payoff basis (delta = pi/2).
    Entangled,
    /// Product payoff basis (delta = 0).
    Product,
    /// Explicit basis entanglement; requires --delta.
    General,
}

#[derive(Args)]
struct MeasurementArgs {
    /// Measurement basis for the payoff operators.
    #[arg(long, value_enum, default_value_t = MeasurementKind::Entangled)]
    measurement: MeasurementKind,

    /// Measurement-basis entanglement in radians (only with
    /// `--measurement general`).
    #[arg(long)]
    delta: Option<f64>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct EntanglementArgs {
    /// Initial-state entanglement xi in radians.
    #[arg(long)]
    xi: Option<f64>,

    /// Entanglement given as sin(xi) in [0, 1], the entangled-basis axis.
    #[arg(long = "sin-xi")]
    sin_xi: Option<f64>,

    /// Entanglement given as sin^2(xi/2) in [0, 1], the product-basis axis.
    #[arg(long)]
    x: Option<f64>,
}

#[derive(Args)]
struct PayoffArgs {
    #[command(flatten)]
    measurement: MeasurementArgs,
    #[command(flatten)]
    entanglement: EntanglementArgs,

    /// Alice's strategy: C, D, Q, or raw "theta,phi" in radians.
    #[arg(long, value_parser = parse_strategy)]
    a: StrategyParams,

    /// Bob's strategy: C, D, Q, or raw "theta,phi" in radians.
    #[arg(long, value_parser = parse_strategy)]
    b: StrategyParams,

    /// Override the classical payoff elements as "R,S,T,U".
    #[arg(long, value_parser = parse_matrix)]
    matrix: Option<ClassicalPayoffMatrix>,
}

#[derive(Args)]
struct NashArgs {
    #[command(flatten)]
    measurement: MeasurementArgs,
    #[command(flatten)]
    entanglement: EntanglementArgs,

    /// Alice's strategy: C, D, Q, or raw "theta,phi" in radians.
    #[arg(long, value_parser = parse_strategy)]
    a: StrategyParams,

    /// Bob's strategy: C, D, Q, or raw "theta,phi" in radians.
    #[arg(long, value_parser = parse_strategy)]
    b: StrategyParams,

    /// Override the classical payoff elements as "R,S,T,U".
    #[arg(long, value_parser = parse_matrix)]
    matrix: Option<ClassicalPayoffMatrix>,

    /// Deviation-grid resolution per axis.
    #[arg(long, default_value_t = 64)]
    grid: usize,

    /// Payoff tolerance below which a deviation gain counts as zero.
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
}

#[derive(Args)]
struct ThresholdArgs {
    #[command(flatten)]
    measurement: MeasurementArgs,

    /// Profile to certify while scanning: CC, CD, DC, DD, QQ, QD or DQ.
    #[arg(long, value_parser = parse_profile)]
    profile: ProfileName,

    /// Lower end of the scan, in the measurement's natural parameter.
    #[arg(long, default_value_t = 0.0)]
    lo: f64,

    /// Upper end of the scan, in the measurement's natural parameter.
    #[arg(long, default_value_t = 1.0)]
    hi: f64,

    /// Reported precision of the threshold location.
    #[arg(long, default_value_t = 1e-6)]
    scan_tol: f64,

    /// Override the classical payoff elements as "R,S,T,U".
    #[arg(long, value_parser = parse_matrix)]
    matrix: Option<ClassicalPayoffMatrix>,

    /// Deviation-grid resolution per axis.
    #[arg(long, default_value_t = 64)]
    grid: usize,

    /// Payoff tolerance below which a deviation gain counts as zero.
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    measurement: MeasurementArgs,
    #[command(flatten)]
    entanglement: EntanglementArgs,

    /// Override the classical payoff elements as "R,S,T,U".
    #[arg(long, value_parser = parse_matrix)]
    matrix: Option<ClassicalPayoffMatrix>,

    /// Deviation-grid resolution per axis (numeric certification only).
    #[arg(long, default_value_t = 64)]
    grid: usize,

    /// Payoff tolerance below which a deviation gain counts as zero.
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    measurement: MeasurementArgs,

    /// Number of evenly spaced samples over the sweep axis.
    #[arg(long, default_value_t = 400)]
    samples: usize,

    /// Override the classical payoff elements as "R,S,T,U".
    #[arg(long, value_parser = parse_matrix)]
    matrix: Option<ClassicalPayoffMatrix>,

    /// Deviation-grid resolution per axis (numeric certification only).
    #[arg(long, default_value_t = 64)]
    grid: usize,

    /// Payoff tolerance below which a deviation gain counts as zero.
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,

    /// Write the CSV here instead of stdout.
    #[arg(long)]
    output: Option<std::path::PathBuf>,
}

enum CliError {
    Usage(String),
    Run(String),
}

impl From<qpd::Error> for CliError {
    fn from(e: qpd::Error) -> Self {
        use qpd::Error::*;
        match e {
            AngleOutOfRange { .. }
            | NonFinitePayoff { .. }
            | GridTooCoarse { .. }
            | TooFewSamples { .. }
            | BadScanInterval { .. }
            | GeneralMeasurementSweep => CliError::Usage(e.to_string()),
            NoThresholdCrossing | NotNormalized(_) | NotUnitary(_) | ComplexTrace(_) => {
                CliError::Run(e.to_string())
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Payoff(args) => run_payoff(args),
        Command::Nash(args) => run_nash(args),
        Command::Threshold(args) => run_threshold(args),
        Command::Classify(args) => run_classify(args),
        Command::Sweep(args) => run_sweep(args),
    }
}

fn parse_strategy(s: &str) -> Result<StrategyParams, String> {
    if let Ok(named) = NamedStrategy::from_str(s) {
        return Ok(named.params());
    }
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!(
            "expected C, D, Q or \"theta,phi\" in radians, got `{s}`"
        ));
    }
    let theta: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| format!("cannot parse theta from `{}`", parts[0]))?;
    let phi: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| format!("cannot parse phi from `{}`", parts[1]))?;
    StrategyParams::new(theta, phi).map_err(|e| e.to_string())
}

fn parse_matrix(s: &str) -> Result<ClassicalPayoffMatrix, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err(format!("expected four comma-separated values, got `{s}`"));
    }
    let mut v = [0.0f64; 4];
    for (slot, raw) in v.iter_mut().zip(&parts) {
        *slot = raw
            .trim()
            .parse()
            .map_err(|_| format!("cannot parse payoff element from `{raw}`"))?;
    }
    ClassicalPayoffMatrix::new(v[0], v[1], v[2], v[3]).map_err(|e| e.to_string())
}

fn parse_profile(s: &str) -> Result<ProfileName, String> {
    s.parse()
}

fn resolve_measurement(args: &MeasurementArgs) -> Result<Measurement, CliError> {
    match args.measurement {
        MeasurementKind::Entangled | MeasurementKind::Product => {
            if args.delta.is_some() {
                return Err(CliError::Usage(
                    "--delta only applies with --measurement general".into(),
                ));
            }
            Ok(match args.measurement {
                MeasurementKind::Entangled => Measurement::Entangled,
                _ => Measurement::Product,
            })
        }
        MeasurementKind::General => {
            let delta = args.delta.ok_or_else(|| {
                CliError::Usage("--measurement general requires --delta".into())
            })?;
            Ok(Measurement::General(delta))
        }
    }
}

/// Convert the user's entanglement flag to xi in radians. The xi domain check
/// itself is left to the engine, which caps xi at pi/2 except under the
/// product basis.
fn resolve_xi(args: &EntanglementArgs) -> Result<f64, CliError> {
    if let Some(xi) = args.xi {
        return Ok(xi);
    }
    if let Some(s) = args.sin_xi {
        if !(0.0..=1.0).contains(&s) {
            return Err(CliError::Usage(format!("--sin-xi {s} is outside [0, 1]")));
        }
        return Ok(s.asin());
    }
    if let Some(x) = args.x {
        if !(0.0..=1.0).contains(&x) {
            return Err(CliError::Usage(format!("--x {x} is outside [0, 1]")));
        }
        return Ok(2.0 * x.sqrt().asin());
    }
    unreachable!("clap enforces the entanglement group")
}

fn build_config(
    xi: f64,
    m: Measurement,
    payoffs: ClassicalPayoffMatrix,
) -> Result<GameConfig, CliError> {
    let ent = match m {
        Measurement::Product => EntanglementConfig::extended(xi, m.delta())?,
        _ => EntanglementConfig::new(xi, m.delta())?,
    };
    Ok(GameConfig::new(ent, payoffs))
}

fn natural_name(m: Measurement) -> &'static str {
    match m {
        Measurement::Entangled => "sin_xi",
        Measurement::Product => "x",
        Measurement::General(_) => "xi",
    }
}

fn param_to_xi(m: Measurement, p: f64) -> Result<f64, CliError> {
    match m {
        Measurement::Entangled => {
            if !(0.0..=1.0).contains(&p) {
                return Err(CliError::Usage(format!("sin_xi = {p} is outside [0, 1]")));
            }
            Ok(p.asin())
        }
        Measurement::Product => {
            if !(0.0..=1.0).contains(&p) {
                return Err(CliError::Usage(format!("x = {p} is outside [0, 1]")));
            }
            Ok(2.0 * p.sqrt().asin())
        }
        Measurement::General(_) => Ok(p),
    }
}

fn xi_to_param(m: Measurement, xi: f64) -> f64 {
    match m {
        Measurement::Entangled => xi.sin(),
        Measurement::Product => (xi / 2.0).sin().powi(2),
        Measurement::General(_) => xi,
    }
}

/// Equilibria among the named profiles: the closed analytic conditions when
/// they apply (canonical matrix, entangled or product basis), numeric
/// certification otherwise.
fn named_equilibria(
    m: Measurement,
    xi: f64,
    payoffs: &ClassicalPayoffMatrix,
    grid: usize,
    tol: f64,
) -> Result<(Vec<ProfileName>, Method), CliError> {
    let canonical = *payoffs == ClassicalPayoffMatrix::DEFAULT;
    let delta = m.delta();
    if canonical && delta == FRAC_PI_2 {
        return Ok((entangled_conditions(xi), Method::Analytic));
    }
    if canonical && delta == 0.0 {
        return Ok((product_conditions(xi), Method::Analytic));
    }
    let cfg = build_config(xi, m, *payoffs)?;
    let mut out = Vec::new();
    for name in ProfileName::ALL {
        if certify(&cfg, &StrategyProfile::named(name), grid, tol)?.is_ne {
            out.push(name);
        }
    }
    out.sort();
    Ok((out, Method::Numeric))
}

fn ne_list(names: &[ProfileName], sep: &str) -> String {
    if names.is_empty() {
        return "none".to_string();
    }
    names
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(sep)
}

fn run_payoff(args: PayoffArgs) -> Result<(), CliError> {
    let m = resolve_measurement(&args.measurement)?;
    let xi = resolve_xi(&args.entanglement)?;
    let payoffs = args.matrix.unwrap_or_default();
    let cfg = build_config(xi, m, payoffs)?;

    let (sa, sb) = payoff_pair(&cfg, args.a, args.b)?;
    println!("A={} B={}", g12(sa), g12(sb));

    let delta = m.delta();
    let closed = if delta == FRAC_PI_2 {
        Some(qpd::payoff_entangled_with(&payoffs, xi, args.a, args.b)?)
    } else if delta == 0.0 {
        Some(qpd::payoff_product_with(&payoffs, xi, args.a, args.b)?)
    } else {
        None
    };
    if let Some((ca, cb)) = closed {
        println!("closed-form A={} B={}", g12(ca), g12(cb));
        println!("difference A={} B={}", g12(sa - ca), g12(sb - cb));
    }
    Ok(())
}

fn run_nash(args: NashArgs) -> Result<(), CliError> {
    let m = resolve_measurement(&args.measurement)?;
    let xi = resolve_xi(&args.entanglement)?;
    let payoffs = args.matrix.unwrap_or_default();
    let cfg = build_config(xi, m, payoffs)?;

    // Recover the profile name when both strategies are named moves.
    let profile = ProfileName::ALL
        .into_iter()
        .find(|n| {
            let p = StrategyProfile::named(*n);
            p.a == args.a && p.b == args.b
        })
        .map(StrategyProfile::named)
        .unwrap_or_else(|| StrategyProfile::new(args.a, args.b));

    let cert = certify(&cfg, &profile, args.grid, args.tol)?;
    let label = match cert.profile.name {
        Some(name) => name.to_string(),
        None => format!(
            "a=({},{}) b=({},{})",
            g12(profile.a.theta()),
            g12(profile.a.phi()),
            g12(profile.b.theta()),
            g12(profile.b.phi())
        ),
    };
    println!("profile: {label}");
    println!("is_ne: {}", cert.is_ne);
    println!("is_strict: {}", cert.is_strict);
    println!("margin_a: {}", g12(cert.margin_a));
    println!("margin_b: {}", g12(cert.margin_b));
    println!("method: {}", cert.method);
    Ok(())
}

fn run_threshold(args: ThresholdArgs) -> Result<(), CliError> {
    let m = resolve_measurement(&args.measurement)?;
    let payoffs = args.matrix.unwrap_or_default();
    let family = ConfigFamily::new(m.delta(), payoffs);
    let profile = StrategyProfile::named(args.profile);
    let name = natural_name(m);

    let lo = param_to_xi(m, args.lo)?;
    let hi = param_to_xi(m, args.hi)?;
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(CliError::Usage(format!(
            "scan range [{}, {}] is empty",
            args.lo, args.hi
        )));
    }
    let ne_at = |xi: f64| -> Result<bool, CliError> {
        Ok(certify(&family.config_at(xi)?, &profile, args.grid, args.tol)?.is_ne)
    };

    let (ne_lo, ne_hi) = (ne_at(lo)?, ne_at(hi)?);
    if ne_lo != ne_hi {
        let root = threshold_scan(&family, &profile, lo, hi, args.scan_tol, args.grid, args.tol)?;
        println!("{name} = {:.6} ± {:e}", xi_to_param(m, root), args.scan_tol);
        return Ok(());
    }

    // Same outcome at both ends: the equilibrium may live on an interior
    // band. Split once at the midpoint and report both edges.
    let mid = 0.5 * (lo + hi);
    if ne_at(mid)? == ne_lo {
        return Err(CliError::Run(format!(
            "profile {} has the same certification outcome across the whole scan range",
            args.profile
        )));
    }
    let low_edge = threshold_scan(&family, &profile, lo, mid, args.scan_tol, args.grid, args.tol)?;
    let high_edge =
        threshold_scan(&family, &profile, mid, hi, args.scan_tol, args.grid, args.tol)?;
    println!("{name} = {:.6} ± {:e}", xi_to_param(m, low_edge), args.scan_tol);
    println!("{name} = {:.6} ± {:e}", xi_to_param(m, high_edge), args.scan_tol);
    Ok(())
}

fn run_classify(args: ClassifyArgs) -> Result<(), CliError> {
    let m = resolve_measurement(&args.measurement)?;
    let xi = resolve_xi(&args.entanglement)?;
    let payoffs = args.matrix.unwrap_or_default();

    let delta = m.delta();
    let quad = if delta == FRAC_PI_2 {
        quad_entangled_with(&payoffs, xi)?
    } else if delta == 0.0 {
        quad_product_with(&payoffs, xi)?
    } else {
        // No closed form away from the two special bases: read the elements
        // off the simulation at the four classical profiles.
        let cfg = build_config(xi, m, payoffs)?;
        let c = NamedStrategy::Cooperate.params();
        let d = NamedStrategy::Defect.params();
        PayoffQuad::new(
            payoff_pair(&cfg, c, c)?.0,
            payoff_pair(&cfg, c, d)?.0,
            payoff_pair(&cfg, d, c)?.0,
            payoff_pair(&cfg, d, d)?.0,
        )
    };

    let class = classify_quad(&quad, CLASS_EPS);
    let (ne, method) = named_equilibria(m, xi, &payoffs, args.grid, args.tol)?;
    println!("{class}; NE: {}", ne_list(&ne, ", "));
    println!(
        "quad: R={} S={} T={} U={}",
        g12(quad.r),
        g12(quad.s),
        g12(quad.t),
        g12(quad.u)
    );
    println!("ne_source: {method}");
    Ok(())
}

fn run_sweep(args: SweepArgs) -> Result<(), CliError> {
    let m = resolve_measurement(&args.measurement)?;
    let payoffs = args.matrix.unwrap_or_default();
    let rows = sweep_quads_with(&payoffs, m, args.samples)?;

    let mut out = String::from("param,R,S,T,U,class,ne_set\n");
    for (p, quad) in rows {
        let xi = param_to_xi(m, p)?;
        let class = classify_quad(&quad, CLASS_EPS);
        let (ne, _) = named_equilibria(m, xi, &payoffs, args.grid, args.tol)?;
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            g12(p),
            g12(quad.r),
            g12(quad.s),
            g12(quad.t),
            g12(quad.u),
            class,
            ne_list(&ne, "|")
        )
        .expect("writing to a String cannot fail");
    }

    match &args.output {
        Some(path) => std::fs::write(path, out)
            .map_err(|e| CliError::Run(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{out}"),
    }
    Ok(())
}

/// Format with up to 12 significant digits, trailing zeros trimmed.
/// Deterministic for equal inputs, so CSV output is byte-for-byte stable.
fn g12(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let exp = v.abs().log10().floor() as i32;
    if (-4..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_fixed(format!("{v:.decimals$}"))
    } else {
        let s = format!("{v:.11e}");
        match s.split_once('e') {
            Some((mantissa, exponent)) => {
                format!("{}e{}", trim_fixed(mantissa.to_string()), exponent)
            }
            None => s,
        }
    }
}

fn trim_fixed(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}
