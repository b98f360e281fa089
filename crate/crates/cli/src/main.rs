//! `fwexpand`: expansion, Landau spectra, moments, splittings, grid gauge
//! checks and the Dirac identity suite from the command line.
//!
//! Exit codes: 0 success, 1 an identity check failed, 2 configuration error,
//! 3 precondition violation, 4 eigensolver did not converge.

mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fwexpand::algebra::hamiltonian::dirac_hamiltonian;
use fwexpand::algebra::render::{render_grouped, render_plain, render_square_grouped, render_square_plain};
use fwexpand::algebra::{OperatorSum, Pauli};
use fwexpand::fw::{fw_reduce, two_component, Branch, ExpansionReport, TwoComponentHamiltonian};
use fwexpand::grid::{
    gauge_invariance_report, ConfigError, Constants, FieldConfig, Grid2D, GridConfig, GridError, Potential,
    SolverError, SolverOptions, SpinOrbitForm, TermToggles,
};
use fwexpand::identities::identity_suite;
use fwexpand::landau::{
    format_rational, format_significant, magnetic_moment, spectrum_csv, spectrum_table, spin_splitting, LandauError,
    Spin, SpectrumRow, UnitsMode, UnitsSystem,
};
use fwexpand::scalar::parse_decimal_rational;
use num_rational::BigRational;

use table::{csv_cell, Format, Table};

const UNITS_ENV: &str = "FWEXPAND_UNITS";

#[derive(Parser)]
#[command(name = "fwexpand", version, about = "Foldy-Wouthuysen expansion and Landau-level workbench")]
struct Cli {
    /// Unit system; the default comes from FWEXPAND_UNITS, else natural.
    #[arg(long, global = true)]
    units: Option<UnitsMode>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Significant digits of printed numbers.
    #[arg(long, global = true, default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..=80))]
    precision: u32,
    /// TOML grid description for `gauge-check`.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Print the reduced Hamiltonian: four-component, or one block with --branch.
    Expand(ExpandArgs),
    /// Exact and expanded Landau energies.
    Spectrum(SpectrumArgs),
    /// Energy-dependent magnetic moment μ(ε).
    Moment(MomentArgs),
    /// Spin splitting ε(n,+) − ε(n,−).
    Splitting(SplittingArgs),
    /// Lowest grid eigenvalues in the Landau and symmetric gauges.
    GaugeCheck(GaugeArgs),
    /// Exact Dirac-matrix identities.
    Identities(IdentityArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum BranchArg {
    Upper,
    Lower,
}

#[derive(Args)]
struct ExpandArgs {
    #[arg(long, value_enum)]
    branch: Option<BranchArg>,
    /// Order in 1/c beyond the rest energy; only 2 is implemented.
    #[arg(long, default_value_t = 2)]
    order: u32,
    /// Also list the products dropped by the degree cutoff.
    #[arg(long)]
    ledger: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpinArg {
    #[value(name = "+1", alias = "up")]
    Up,
    #[value(name = "-1", alias = "down")]
    Down,
    Both,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Field values, comma separated, exact decimals or fractions.
    #[arg(long = "B", value_delimiter = ',', value_parser = rational, default_value = "0.02", allow_hyphen_values = true)]
    b: Vec<BigRational>,
    /// Landau levels: `3`, `0..5` (exclusive), `0..=5` or a comma list of these.
    #[arg(long, default_value = "0..=5", value_parser = levels)]
    n: LevelSet,
    #[arg(long, default_value = "0", value_parser = rational, allow_hyphen_values = true)]
    pz: BigRational,
    #[arg(long, value_enum, default_value_t = SpinArg::Both, allow_hyphen_values = true)]
    s: SpinArg,
}

#[derive(Args)]
struct MomentArgs {
    /// Energies in units of mc².
    #[arg(long, value_delimiter = ',', value_parser = rational, conflicts_with = "epsilon")]
    epsilon_factors: Vec<BigRational>,
    /// Energies in the chosen units.
    #[arg(long, value_delimiter = ',', value_parser = rational)]
    epsilon: Vec<BigRational>,
}

#[derive(Args)]
struct SplittingArgs {
    #[arg(long = "B", value_delimiter = ',', value_parser = rational, default_value = "0.02", allow_hyphen_values = true)]
    b: Vec<BigRational>,
    #[arg(long, default_value = "0..=20", value_parser = levels)]
    n: LevelSet,
    #[arg(long, default_value = "0", value_parser = rational, allow_hyphen_values = true)]
    pz: BigRational,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpinOrbitArg {
    Pi,
    P,
    Off,
}

#[derive(Args)]
struct GaugeArgs {
    /// Grid points per side.
    #[arg(long, default_value_t = 64)]
    n: usize,
    /// Box side.
    #[arg(long, default_value_t = 100.0)]
    length: f64,
    #[arg(long = "B", default_value_t = 0.02, allow_hyphen_values = true)]
    b: f64,
    /// Harmonic confinement `U = (k/2)|r − r₀|²`; 0 disables it.
    #[arg(long, default_value_t = 0.0004)]
    harmonic_k: f64,
    /// Potential minimum `x,y`.
    #[arg(long, default_value = "40,0", value_parser = point, allow_hyphen_values = true)]
    center: (f64, f64),
    #[arg(long, value_enum, default_value_t = SpinOrbitArg::Pi)]
    spin_orbit: SpinOrbitArg,
    /// Number of eigenvalues, at most 32.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..=32))]
    eigs: u64,
}

#[derive(Args)]
struct IdentityArgs {
    #[arg(long, default_value_t = 100)]
    pairs: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Debug, Clone)]
struct LevelSet(Vec<u32>);

fn rational(s: &str) -> Result<BigRational, String> {
    parse_decimal_rational(s).map_err(|e| e.to_string())
}

fn point(s: &str) -> Result<(f64, f64), String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected `x,y`, got `{s}`"))?;
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("invalid coordinate `{t}`"));
    Ok((num(x)?, num(y)?))
}

fn levels(s: &str) -> Result<LevelSet, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        let num = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("invalid level `{t}` in `{s}`"));
        if let Some((a, b)) = part.split_once("..=") {
            out.extend(num(a)?..=num(b)?);
        } else if let Some((a, b)) = part.split_once("..") {
            out.extend(num(a)?..num(b)?);
        } else {
            out.push(num(part)?);
        }
    }
    if out.is_empty() {
        return Err(format!("`{s}` selects no levels"));
    }
    out.sort_unstable();
    out.dedup();
    Ok(LevelSet(out))
}

#[derive(Debug)]
enum CliError {
    Check(String),
    Config(String),
    Precondition(String),
    Solver(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Check(_) => 1,
            CliError::Config(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Solver(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Check(m) | CliError::Config(m) | CliError::Precondition(m) | CliError::Solver(m) => m,
        }
    }
}

impl From<LandauError> for CliError {
    fn from(e: LandauError) -> Self {
        CliError::Precondition(e.to_string())
    }
}

impl From<GridError> for CliError {
    fn from(e: GridError) -> Self {
        match e {
            GridError::Solver(s @ SolverError::NotConverged { .. }) => CliError::Solver(s.to_string()),
            other => CliError::Precondition(other.to_string()),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Grid(g) => g.into(),
            other => CliError::Config(other.to_string()),
        }
    }
}

fn internal(e: impl std::fmt::Display) -> CliError {
    CliError::Precondition(e.to_string())
}

/// Flag, then config file, then environment, then natural units.
fn resolve_units(flag: Option<UnitsMode>, config: Option<UnitsMode>) -> Result<UnitsMode, CliError> {
    if let Some(u) = flag.or(config) {
        return Ok(u);
    }
    match std::env::var(UNITS_ENV) {
        Ok(v) if !v.trim().is_empty() => v.parse().map_err(|e| CliError::Config(format!("{UNITS_ENV}: {e}"))),
        _ => Ok(UnitsMode::Natural),
    }
}

fn run(cli: &Cli) -> Result<String, CliError> {
    let grid_config = match (&cli.verb, &cli.config) {
        (Verb::GaugeCheck(_), Some(path)) => Some(GridConfig::from_path(path)?),
        (_, Some(_)) => return Err(CliError::Config("--config applies to gauge-check only".into())),
        _ => None,
    };
    let mode = resolve_units(cli.units, grid_config.as_ref().and_then(|c| c.units))?;
    let units = UnitsSystem::from_mode(mode);
    let digits = cli.precision;
    match &cli.verb {
        Verb::Expand(a) => expand(a, cli.format),
        Verb::Spectrum(a) => spectrum(a, &units, cli.format, digits),
        Verb::Moment(a) => moment(a, &units, cli.format, digits),
        Verb::Splitting(a) => splitting(a, &units, cli.format, digits),
        Verb::GaugeCheck(a) => gauge_check(a, grid_config, &units, cli.format, digits),
        Verb::Identities(a) => identities(a, cli.format),
    }
}

fn two_component_parts(h: &TwoComponentHamiltonian) -> [(&'static str, &OperatorSum<Pauli>); 6] {
    [
        ("rest", &h.rest),
        ("potential", &h.potential),
        ("kinetic", &h.kinetic),
        ("zeeman", &h.zeeman),
        ("spin_orbit", &h.spin_orbit),
        ("darwin", &h.darwin),
    ]
}

fn signed((neg, body): (bool, String)) -> String {
    if neg { format!("-{body}") } else { body }
}

fn expand(a: &ExpandArgs, format: Format) -> Result<String, CliError> {
    if a.order != 2 {
        return Err(CliError::Precondition(format!("expansion order {} is not available; only 2 is", a.order)));
    }
    let report: ExpansionReport = fw_reduce(&dirac_hamiltonian()).map_err(internal)?;
    let mut rows: Vec<(String, String)> = Vec::new();
    match a.branch {
        None => {
            let h = &report.final_hamiltonian;
            let body = if format == Format::Latex { render_grouped(h, true) } else { render_plain(h) };
            rows.push(("H".into(), body));
        }
        Some(b) => {
            let branch = if matches!(b, BranchArg::Upper) { Branch::Upper } else { Branch::Lower };
            let h = two_component(&report, branch).map_err(internal)?;
            let latex = format == Format::Latex;
            let mut parts: Vec<(String, String)> = two_component_parts(&h)
                .into_iter()
                .map(|(name, s)| (name.to_string(), if latex { render_grouped(s, true) } else { render_plain(s) }))
                .collect();
            let square = if latex { render_square_grouped(&h.mass_correction, true) } else { render_square_plain(&h.mass_correction) };
            parts.insert(4, ("mass_correction".into(), signed(square)));
            rows.extend(parts);
        }
    }
    let ledger: Vec<String> = if a.ledger { report.dropped.iter().map(|d| d.to_string()).collect() } else { Vec::new() };
    let mut out = String::new();
    match format {
        Format::Text => {
            for (name, body) in &rows {
                out.push_str(&format!("{name}: {body}\n"));
            }
            for d in &ledger {
                out.push_str(&format!("# dropped {d}\n"));
            }
        }
        Format::Csv => {
            out.push_str("term,expression\n");
            for (name, body) in &rows {
                out.push_str(&format!("{name},{}\n", csv_cell(body)));
            }
            for d in &ledger {
                out.push_str(&format!("dropped,{}\n", csv_cell(d)));
            }
        }
        Format::Latex => {
            out.push_str("\\begin{align}\n");
            let last = rows.len() - 1;
            for (i, (name, body)) in rows.iter().enumerate() {
                let end = if i == last { "" } else { " \\\\" };
                out.push_str(&format!("H_{{\\mathrm{{{}}}}} &= {body}{end}\n", name.replace('_', "\\_")));
            }
            out.push_str("\\end{align}\n");
            for d in &ledger {
                out.push_str(&format!("% dropped {d}\n"));
            }
        }
    }
    Ok(out)
}

fn spectrum(a: &SpectrumArgs, units: &UnitsSystem, format: Format, digits: u32) -> Result<String, CliError> {
    let rows: Vec<SpectrumRow> = spectrum_table(&a.n.0, &a.b, &a.pz, units)?
        .into_iter()
        .filter(|r| match a.s {
            SpinArg::Both => true,
            SpinArg::Up => r.quantum.s == Spin::Up,
            SpinArg::Down => r.quantum.s == Spin::Down,
        })
        .collect();
    let csv = spectrum_csv(&rows, digits);
    if format == Format::Csv {
        return Ok(csv);
    }
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap_or_default().split(',').collect();
    let mut t = Table::new(&header);
    for line in lines {
        t.push(line.split(',').map(str::to_string).collect());
    }
    Ok(t.render(format))
}

fn moment(a: &MomentArgs, units: &UnitsSystem, format: Format, digits: u32) -> Result<String, CliError> {
    let energies: Vec<BigRational> = if !a.epsilon.is_empty() {
        a.epsilon.clone()
    } else if !a.epsilon_factors.is_empty() {
        a.epsilon_factors.iter().map(|f| f * units.rest_energy()).collect()
    } else {
        return Err(CliError::Config("moment needs --epsilon-factors or --epsilon".into()));
    };
    let mu_b = units.bohr_magneton();
    let mut t = Table::new(&["epsilon", "mu", "mu_over_mu_B"]);
    for eps in &energies {
        let mu = magnetic_moment(eps, units)?;
        t.push(vec![format_rational(eps, digits), format_rational(&mu, digits), format_rational(&(&mu / &mu_b), digits)]);
    }
    Ok(t.render(format))
}

fn splitting(a: &SplittingArgs, units: &UnitsSystem, format: Format, digits: u32) -> Result<String, CliError> {
    let mut t = Table::new(&["B", "n", "splitting"]);
    for b in &a.b {
        for &n in &a.n.0 {
            let s = spin_splitting(n, &a.pz, b, units)?;
            t.push(vec![format_rational(b, digits), n.to_string(), format_significant(&s, digits)]);
        }
    }
    Ok(t.render(format))
}

fn float(x: f64, digits: u32) -> String {
    format!("{:.*e}", digits.saturating_sub(1) as usize, x)
}

fn gauge_check(
    a: &GaugeArgs,
    config: Option<GridConfig>,
    units: &UnitsSystem,
    format: Format,
    digits: u32,
) -> Result<String, CliError> {
    let (grid, fields, toggles, k, options) = match config {
        Some(c) => (c.grid, c.fields, c.toggles, c.solver.k, c.solver.options),
        None => {
            let grid = Grid2D::new(a.n, a.length)?;
            let potential = if a.harmonic_k == 0.0 {
                Potential::None
            } else {
                Potential::Harmonic { k: a.harmonic_k, center: a.center }
            };
            let so = match a.spin_orbit {
                SpinOrbitArg::Pi => SpinOrbitForm::PiForm,
                SpinOrbitArg::P => SpinOrbitForm::PForm,
                SpinOrbitArg::Off => SpinOrbitForm::Off,
            };
            let fields = FieldConfig { b: a.b, potential };
            (grid, fields, TermToggles::full(so), a.eigs as usize, SolverOptions::default())
        }
    };
    let c = Constants::from(units);
    let r = gauge_invariance_report(&grid, &fields, &toggles, k, &options, &c)?;
    let mut t = Table::new(&["index", "landau", "symmetric", "relative_difference"]);
    for (i, (l, s)) in r.landau.iter().zip(&r.symmetric).enumerate() {
        let scale = l.abs().max(s.abs());
        let rel = if scale == 0.0 { 0.0 } else { (l - s).abs() / scale };
        t.push(vec![i.to_string(), float(*l, digits), float(*s, digits), float(rel, 3)]);
    }
    let summary = [
        ("max_relative_discrepancy", float(r.max_relative_discrepancy, 3)),
        ("covariance_defect", float(r.covariance_defect, 3)),
        ("max_residual", float(r.max_residual, 3)),
    ];
    let mut out = String::new();
    let comment = match format {
        Format::Latex => "%",
        _ => "#",
    };
    out.push_str(&format!(
        "{comment} grid n={} l={} h={} B={} toggles={:?}\n",
        grid.n,
        grid.l,
        float(grid.h(), digits),
        fields.b,
        toggles
    ));
    for (name, value) in &summary {
        out.push_str(&format!("{comment} {name} {value}\n"));
    }
    out.push_str(&t.render(format));
    Ok(out)
}

fn identities(a: &IdentityArgs, format: Format) -> Result<String, CliError> {
    let report = identity_suite(a.pairs, a.seed);
    let mut t = Table::new(&["identity", "passed", "failed"]);
    for c in &report.checks {
        t.push(vec![c.name.to_string(), c.passed.to_string(), c.failed.to_string()]);
    }
    t.push(vec!["total".into(), report.passed().to_string(), report.failed().to_string()]);
    let out = t.render(format);
    if report.all_passed() {
        Ok(out)
    } else {
        print!("{out}");
        Err(CliError::Check(format!("{} identity check(s) failed", report.failed())))
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("fwexpand: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_sets() {
        assert_eq!(levels("3").unwrap().0, vec![3]);
        assert_eq!(levels("0..3").unwrap().0, vec![0, 1, 2]);
        assert_eq!(levels("4,0..=2,2").unwrap().0, vec![0, 1, 2, 4]);
        assert!(levels("a").is_err());
        assert!(levels("3..3").is_err());
    }

    #[test]
    fn error_codes() {
        assert_eq!(CliError::from(LandauError::NonPositiveField).code(), 3);
        assert_eq!(CliError::from(GridError::Solver(SolverError::NotConverged { iterations: 1, residual: 1.0 })).code(), 4);
        assert_eq!(CliError::from(ConfigError::Invalid("x".into())).code(), 2);
        assert_eq!(CliError::from(ConfigError::Grid(GridError::TooFewPoints(3))).code(), 3);
    }
}
