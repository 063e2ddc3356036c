//! CLI surface: constants | table | fraction | bounds | experiment.
//!
//! Exit codes: 0 success, 1 user error, 2 internal error, 3 inequality
//! violation finding.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use lindeberg::bounds::{
    aex_two_sided, asymptotic_lower_bounds, compute_table3, compute_table4, BoundKind, BoundTarget,
    ConstantBound, Optimizer1D, RefGamma, ReferenceRow, REFERENCE_TABLE_ESSEEN, REFERENCE_TABLE_ROZOVSKII,
};
use lindeberg::constants::core_constants;
use lindeberg::dist::DiscreteDistribution;
use lindeberg::experiments::{
    esseen_expansion_experiment, inequality_fuzzer, three_point_bessel_experiment, FuzzConfig,
};
use lindeberg::fractions::{
    esseen_fraction_iid, rozovskii_fraction_iid, two_point_fraction_closed_form, Attained,
    FractionKind, FractionParams, WeightFunction, WeightKind,
};
use lindeberg::{abe_lower_esseen, abe_lower_rozovskii, exact_constant_lower_bounds, gamma0, Error};

#[derive(Parser)]
#[command(
    name = "lindeberg",
    version,
    about = "Convergence-rate constants for the Lindeberg CLT: truncated-moment fractions, exact distances, and two-sided bounds"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum Format {
    #[default]
    Table,
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableId {
    #[value(name = "3")]
    Computed3,
    #[value(name = "4")]
    Computed4,
    Ref1,
    Ref2,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WeightArg {
    Gstar,
    Gc,
    G0,
    G1,
}

impl WeightArg {
    fn kind(self) -> WeightKind {
        match self {
            WeightArg::Gstar => WeightKind::Star,
            WeightArg::Gc => WeightKind::Const,
            WeightArg::G0 => WeightKind::G0,
            WeightArg::G1 => WeightKind::G1,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TypeArg {
    Esseen,
    Rozovskii,
}

impl TypeArg {
    fn kind(self) -> FractionKind {
        match self {
            TypeArg::Esseen => FractionKind::Esseen,
            TypeArg::Rozovskii => FractionKind::Rozovskii,
        }
    }
}

/// `inf` is accepted for ε; everything else must be a positive number.
fn parse_eps(s: &str) -> Result<f64, String> {
    let v = match s {
        "inf" | "infinity" | "Inf" => f64::INFINITY,
        _ => s.parse::<f64>().map_err(|e| e.to_string())?,
    };
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("epsilon must be > 0, got {v}"))
    }
}

/// `gstar` is accepted for γ (the table columns use it); `inf` too.
fn parse_gamma(s: &str) -> Result<f64, String> {
    let v = match s {
        "gstar" | "gamma_star" => core_constants().gamma_star,
        "inf" | "infinity" | "Inf" => f64::INFINITY,
        _ => s.parse::<f64>().map_err(|e| e.to_string())?,
    };
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("gamma must be > 0, got {v}"))
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Print every named constant (x0, kappa, gamma_star, x_phi, c_phi, p_phi, p0, gamma0).
    Constants {
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Print a bound table: 3 and 4 are computed, ref1/ref2 are quoted reference data.
    Table {
        which: TableId,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Evaluate a truncated-moment fraction on a distribution file.
    Fraction {
        /// JSON file: `{"atoms":[{"x": -1.0, "p": 0.5}, ...]}`.
        dist_file: PathBuf,
        /// Number of i.i.d. copies.
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Weight function.
        #[arg(long, value_enum, default_value_t = WeightArg::Gstar)]
        g: WeightArg,
        /// Truncation range endpoint; `inf` accepted.
        #[arg(long, value_parser = parse_eps, default_value = "1")]
        eps: f64,
        #[arg(long, value_parser = parse_gamma, default_value = "1")]
        gamma: f64,
        /// Which fraction to evaluate.
        #[arg(long = "type", value_enum, default_value_t = TypeArg::Esseen)]
        kind: TypeArg,
        /// Also evaluate the two-point closed form and report the difference.
        #[arg(long)]
        closed_form: bool,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Print every lower/upper constant bound at (eps, gamma).
    Bounds {
        #[arg(long, value_parser = parse_eps)]
        eps: f64,
        #[arg(long, value_parser = parse_gamma)]
        gamma: f64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Run a convergence experiment or the inequality fuzzer; writes a CSV report.
    Experiment {
        #[command(subcommand)]
        which: ExperimentCmd,
    },
}

#[derive(Subcommand)]
enum ExperimentCmd {
    /// Delta_n sqrt(n) for two-point(p) sums against its lattice-edge limit.
    Esseen {
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 10_000)]
        n_max: usize,
        /// Output CSV path (default: esseen-expansion.csv).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// P(S_n = 0)/2 for three-point(alpha/n) sums against e^-alpha I0(alpha)/2.
    Bessel {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 2000)]
        n_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Randomized inequality checks against the quoted reference constants.
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 200)]
        n_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum CliError {
    /// Bad input from the user: exit 1.
    User(String),
    /// Internal failure: exit 2.
    Internal(String),
    /// An inequality violation finding: exit 3.
    Finding(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. }
            | Error::Validation(_)
            | Error::Domain { .. }
            | Error::InvalidWeight(_)
            | Error::SizeLimit { .. }
            | Error::InfiniteEpsilonUnsupported
            | Error::UnsupportedWeight => CliError::User(e.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    // Die quietly when the downstream pager/head closes the pipe.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(1);
        }
        Err(e) => {
            // --help / --version.
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::User(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Finding(msg)) => {
            eprintln!("VIOLATION FINDING: {msg}");
            ExitCode::from(3)
        }
    }
}

fn fmt_eps(eps: f64) -> String {
    if eps.is_infinite() {
        "inf".to_string()
    } else {
        format!("{eps}")
    }
}

fn fmt_ref_gamma(g: RefGamma) -> String {
    match g {
        RefGamma::Value(v) if v.is_infinite() => "inf".to_string(),
        RefGamma::Value(v) => format!("{v}"),
        RefGamma::GammaStar => "gstar".to_string(),
        RefGamma::Any => "any".to_string(),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Constants { format } => cmd_constants(format),
        Cmd::Table { which, format } => cmd_table(which, format),
        Cmd::Fraction { dist_file, n, g, eps, gamma, kind, closed_form, format } => {
            cmd_fraction(dist_file, n, g, eps, gamma, kind, closed_form, format)
        }
        Cmd::Bounds { eps, gamma, format } => cmd_bounds(eps, gamma, format),
        Cmd::Experiment { which } => cmd_experiment(which),
    }
}

fn cmd_constants(format: Format) -> Result<(), CliError> {
    let c = core_constants();
    let rows: [(&str, f64); 8] = [
        ("x0", c.x0),
        ("kappa", c.kappa),
        ("gamma_star", c.gamma_star),
        ("x_phi", c.x_phi),
        ("c_phi", c.c_phi),
        ("p_phi", c.p_phi),
        ("p0", c.p0),
        ("gamma0", gamma0()),
    ];
    match format {
        Format::Table => {
            for (name, v) in rows {
                println!("{name:<11} {v:.10}");
            }
        }
        Format::Csv => {
            println!("name,value");
            for (name, v) in rows {
                println!("{name},{v:.10}");
            }
        }
        Format::Json => {
            let obj: serde_json::Map<String, serde_json::Value> =
                rows.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
            println!("{}", serde_json::Value::Object(obj));
        }
    }
    Ok(())
}

fn print_reference_table(rows: &[ReferenceRow], label: &str, format: Format) {
    match format {
        Format::Table => {
            println!("# reference data quoted from prior work ({label})");
            println!("{:<8} {:<8} {:<8}", "eps", "gamma", "bound");
            for r in rows {
                println!("{:<8} {:<8} {:<8}", fmt_eps(r.epsilon), fmt_ref_gamma(r.gamma), r.bound);
            }
        }
        Format::Csv => {
            println!("# reference data quoted from prior work ({label})");
            println!("eps,gamma,bound");
            for r in rows {
                println!("{},{},{}", fmt_eps(r.epsilon), fmt_ref_gamma(r.gamma), r.bound);
            }
        }
        Format::Json => {
            let arr: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| json!({"eps": fmt_eps(r.epsilon), "gamma": fmt_ref_gamma(r.gamma), "bound": r.bound}))
                .collect();
            println!("{}", json!({"provenance": "reference data quoted from prior work", "table": label, "rows": arr}));
        }
    }
}

fn cmd_table(which: TableId, format: Format) -> Result<(), CliError> {
    match which {
        TableId::Computed3 => {
            let rows = compute_table3().map_err(CliError::from)?;
            match format {
                Format::Table => {
                    println!("{:<10} {:<8} {:<8} {:<10}", "kind", "eps", "gamma", "bound");
                    for r in &rows {
                        let kind = match r.kind {
                            FractionKind::Esseen => "esseen",
                            FractionKind::Rozovskii => "rozovskii",
                        };
                        println!("{kind:<10} {:<8} {:<8} {:<10.5}", fmt_eps(r.epsilon), fmt_ref_gamma(r.gamma), r.value);
                    }
                }
                Format::Csv => {
                    println!("kind,eps,gamma,bound");
                    for r in &rows {
                        let kind = match r.kind {
                            FractionKind::Esseen => "esseen",
                            FractionKind::Rozovskii => "rozovskii",
                        };
                        println!("{kind},{},{},{}", fmt_eps(r.epsilon), fmt_ref_gamma(r.gamma), r.value);
                    }
                }
                Format::Json => {
                    let arr: Vec<serde_json::Value> = rows
                        .iter()
                        .map(|r| {
                            json!({
                                "kind": match r.kind { FractionKind::Esseen => "esseen", FractionKind::Rozovskii => "rozovskii" },
                                "eps": fmt_eps(r.epsilon),
                                "gamma": fmt_ref_gamma(r.gamma),
                                "bound": r.value,
                            })
                        })
                        .collect();
                    println!("{}", json!({"rows": arr}));
                }
            }
        }
        TableId::Computed4 => {
            let cols = compute_table4().map_err(CliError::from)?;
            match format {
                Format::Table => {
                    println!("{:<8} {:<10} {:<10}", "gamma", "p", "bound");
                    for c in &cols {
                        println!("{:<8} {:<10.4} {:<10.4}", c.gamma, c.witness_p, c.value);
                    }
                }
                Format::Csv => {
                    println!("gamma,p,bound");
                    for c in &cols {
                        println!("{},{},{}", c.gamma, c.witness_p, c.value);
                    }
                }
                Format::Json => {
                    let arr: Vec<serde_json::Value> = cols
                        .iter()
                        .map(|c| json!({"gamma": c.gamma, "p": c.witness_p, "bound": c.value}))
                        .collect();
                    println!("{}", json!({"rows": arr}));
                }
            }
        }
        TableId::Ref1 => print_reference_table(&REFERENCE_TABLE_ESSEEN, "esseen", format),
        TableId::Ref2 => print_reference_table(&REFERENCE_TABLE_ROZOVSKII, "rozovskii", format),
    }
    Ok(())
}

/// Recovers the weight p if the distribution is exactly the standardized
/// two-point law.
fn two_point_weight(d: &DiscreteDistribution) -> Option<f64> {
    let atoms = d.atoms();
    if atoms.len() != 2 {
        return None;
    }
    let (lo, hi) = (atoms[0], atoms[1]);
    let p = hi.p;
    let q = lo.p;
    if (hi.x - (q / p).sqrt()).abs() <= 1e-9 && (lo.x + (p / q).sqrt()).abs() <= 1e-9 {
        Some(p)
    } else {
        None
    }
}

fn fmt_attained(a: Attained) -> String {
    match a {
        Attained::At(z) => format!("z = {z}"),
        Attained::FromLeft(z) => format!("z -> {z}-"),
        Attained::FromRight(z) => format!("z -> {z}+"),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_fraction(
    dist_file: PathBuf,
    n: usize,
    g: WeightArg,
    eps: f64,
    gamma: f64,
    kind: TypeArg,
    closed_form: bool,
    format: Format,
) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&dist_file)
        .map_err(|e| CliError::User(format!("cannot read {}: {e}", dist_file.display())))?;
    let dist = DiscreteDistribution::from_json(&text).map_err(CliError::from)?;
    let params = FractionParams::new(eps, gamma).map_err(CliError::from)?;
    let weight: WeightFunction = g.kind().into();
    let value = match kind.kind() {
        FractionKind::Esseen => esseen_fraction_iid(&dist, n, &weight, &params),
        FractionKind::Rozovskii => rozovskii_fraction_iid(&dist, n, &weight, &params),
    }
    .map_err(CliError::from)?;

    let closed = if closed_form {
        let p = two_point_weight(&dist).ok_or_else(|| {
            CliError::User("--closed-form requires a standardized two-point distribution".to_string())
        })?;
        // The mirrored law (p < 1/2) has identical fractions.
        let p_eff = if p < 0.5 { 1.0 - p } else { p };
        Some(
            two_point_fraction_closed_form(kind.kind(), g.kind(), p_eff, n, &params)
                .map_err(CliError::from)?,
        )
    } else {
        None
    };

    match format {
        Format::Table => {
            println!("value      {:.12}", value.value);
            println!("attained   {}", fmt_attained(value.attained_z));
            if let Some(cf) = closed {
                println!("closed     {:.12}", cf);
                println!("difference {:.3e}", value.value - cf);
            }
        }
        Format::Csv => {
            let mut header = String::from("value,attained");
            let mut row = format!("{},{}", value.value, fmt_attained(value.attained_z));
            if let Some(cf) = closed {
                header.push_str(",closed,difference");
                row.push_str(&format!(",{},{}", cf, value.value - cf));
            }
            println!("{header}");
            println!("{row}");
        }
        Format::Json => {
            let mut obj = json!({
                "value": value.value,
                "attained": fmt_attained(value.attained_z),
            });
            if let Some(cf) = closed {
                obj["closed"] = json!(cf);
                obj["difference"] = json!(value.value - cf);
            }
            println!("{obj}");
        }
    }
    Ok(())
}

fn target_label(t: BoundTarget) -> &'static str {
    match t {
        BoundTarget::AexUpperEsseen => "AEX upper (esseen)",
        BoundTarget::AexUpperRozovskii => "AEX upper (rozovskii)",
        BoundTarget::ExactFloor => "floor (all exact constants)",
        BoundTarget::ExactEsseenLower => "exact C_E lower",
        BoundTarget::ExactRozovskiiLower => "exact C_R lower",
        BoundTarget::AEsseenLower => "A_E lower",
        BoundTarget::ARozovskiiLower => "A_R lower",
        BoundTarget::OptimisticEsseenLower => "C_E(g1) lower",
        BoundTarget::OptimisticRozovskiiLower => "C_R(g1) lower",
        BoundTarget::AbeEsseenLower => "ABE lower (esseen)",
        BoundTarget::AbeRozovskiiLower => "ABE lower (rozovskii)",
        BoundTarget::LowAexLower => "LowAEX lower",
        BoundTarget::CondUpAexG0Lower => "CondUpAEX(g0) lower",
        BoundTarget::CondUpAexG1Lower => "CondUpAEX(g1) lower",
        BoundTarget::AexG0EsseenLower => "AEX(g0) lower (esseen)",
        BoundTarget::AexG0RozovskiiLower => "AEX(g0) lower (rozovskii)",
    }
}

fn bound_json(b: &ConstantBound) -> serde_json::Value {
    json!({
        "target": target_label(b.target),
        "kind": match b.kind { BoundKind::Lower => "lower", BoundKind::Upper => "upper" },
        "eps": fmt_eps(b.epsilon),
        "gamma": b.gamma,
        "value": b.value,
        "witness_p": b.witness_p,
    })
}

fn cmd_bounds(eps: f64, gamma: f64, format: Format) -> Result<(), CliError> {
    let params = FractionParams::new(eps, gamma).map_err(CliError::from)?;
    let opt = Optimizer1D::default();
    let mut bounds = exact_constant_lower_bounds(&params, &opt).map_err(CliError::from)?;
    if gamma.is_finite() {
        bounds.push(abe_lower_esseen(gamma, &opt).map_err(CliError::from)?);
    }
    bounds.push(abe_lower_rozovskii(&params).map_err(CliError::from)?);
    bounds.extend(asymptotic_lower_bounds(&params).map_err(CliError::from)?);
    let two = aex_two_sided(&params).map_err(CliError::from)?;
    bounds.push(two.esseen.lower);
    bounds.push(two.esseen.upper);
    if let Some(roz) = two.rozovskii {
        bounds.push(roz.lower);
        bounds.push(roz.upper);
    }

    match format {
        Format::Table => {
            println!("bounds at eps = {}, gamma = {}", fmt_eps(eps), gamma);
            println!("{:<28} {:<6} {:<22} witness p", "target", "kind", "value");
            for b in &bounds {
                let witness = b.witness_p.map(|p| format!("{p:.6}")).unwrap_or_else(|| "-".to_string());
                let kind = match b.kind {
                    BoundKind::Lower => "lower",
                    BoundKind::Upper => "upper",
                };
                println!("{:<28} {:<6} {:<22.12} {witness}", target_label(b.target), kind, b.value);
            }
        }
        Format::Csv => {
            println!("target,kind,eps,gamma,value,witness_p");
            for b in &bounds {
                let witness = b.witness_p.map(|p| p.to_string()).unwrap_or_default();
                let kind = match b.kind {
                    BoundKind::Lower => "lower",
                    BoundKind::Upper => "upper",
                };
                println!("{},{kind},{},{},{},{witness}", target_label(b.target), fmt_eps(b.epsilon), b.gamma, b.value);
            }
        }
        Format::Json => {
            let arr: Vec<serde_json::Value> = bounds.iter().map(bound_json).collect();
            println!("{}", json!({"eps": fmt_eps(eps), "gamma": gamma, "bounds": arr}));
        }
    }
    Ok(())
}

fn write_report(path: &PathBuf, csv: &str) -> Result<(), CliError> {
    std::fs::write(path, csv).map_err(|e| CliError::Internal(format!("cannot write {}: {e}", path.display())))?;
    println!("report written to {}", path.display());
    Ok(())
}

fn cmd_experiment(which: ExperimentCmd) -> Result<(), CliError> {
    match which {
        ExperimentCmd::Esseen { p, n_max, out } => {
            let n_values: Vec<usize> = (1..=n_max).collect();
            let report = esseen_expansion_experiment(p, &n_values).map_err(CliError::from)?;
            let path = out.unwrap_or_else(|| PathBuf::from("esseen-expansion.csv"));
            write_report(&path, &report.to_csv())?;
            println!(
                "target {:.10}; running max of final 20% = {:.10}; |tail err| = {:.3e}",
                report.target,
                report.tail_running_max(),
                report.max_abs_error_at_tail
            );
            Ok(())
        }
        ExperimentCmd::Bessel { alpha, n_max, out } => {
            let mut n_values: Vec<usize> = Vec::new();
            let mut n = 50;
            while n < n_max {
                if n % 2 == 0 && n as f64 > alpha {
                    n_values.push(n);
                }
                n *= 2;
            }
            let top = if n_max % 2 == 0 { n_max } else { n_max - 1 };
            if top as f64 > alpha && n_values.last() != Some(&top) {
                n_values.push(top);
            }
            let report = three_point_bessel_experiment(alpha, &n_values).map_err(CliError::from)?;
            let path = out.unwrap_or_else(|| PathBuf::from("bessel.csv"));
            write_report(&path, &report.to_csv())?;
            let last = report.observed.last().unwrap();
            println!(
                "target {:.10}; observed at n = {} is {:.10}; |err| = {:.3e}",
                report.target,
                report.n_values.last().unwrap(),
                last,
                (last - report.target).abs()
            );
            Ok(())
        }
        ExperimentCmd::Fuzz { seed, trials, n_max, out } => {
            let cfg = FuzzConfig { seed, trials, max_n: n_max };
            let report = inequality_fuzzer(&cfg).map_err(CliError::from)?;
            let path = out.unwrap_or_else(|| PathBuf::from("fuzz.csv"));
            write_report(&path, &report.to_csv())?;
            println!(
                "{} trials; max ratio esseen {:.6}, rozovskii {:.6}",
                report.trials, report.max_esseen_ratio, report.max_rozovskii_ratio
            );
            if !report.violations.is_empty() {
                for v in &report.violations {
                    eprintln!("trial {}: {}", v.trial, v.message);
                }
                return Err(CliError::Finding(format!(
                    "{} inequality violation(s); see stderr and {}",
                    report.violations.len(),
                    path.display()
                )));
            }
            Ok(())
        }
    }
}
