//! TOML description of a grid run.
//!
//! ```toml
//! gauge = "landau"        # or "symmetric"; omitted means both where relevant
//! units = "natural"
//!
//! [grid]
//! n = 64
//! l = 100.0
//!
//! [field]
//! b = 0.02
//! potential = "harmonic"  # or "none"
//! k = 0.0004
//! center = [12.5, 0.0]
//!
//! [terms]
//! kinetic = true
//! zeeman = true
//! mass_correction = true
//! spin_orbit_pi = true
//! spin_orbit_p = false
//! darwin = true
//!
//! [solver]
//! k = 10
//! tol = 1e-10
//! ```

use serde::Deserialize;

use super::{FieldConfig, GaugeChoice, Grid2D, GridError, Potential, SolverOptions, TermToggles};
use crate::landau::UnitsMode;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error(transparent)]
    Grid(#[from] GridError),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Raw {
    gauge: Option<String>,
    units: Option<String>,
    grid: RawGrid,
    #[serde(default)]
    field: RawField,
    #[serde(default)]
    terms: RawTerms,
    #[serde(default)]
    solver: RawSolver,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    n: usize,
    l: f64,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawField {
    #[serde(default)]
    b: f64,
    potential: Option<String>,
    k: Option<f64>,
    center: Option<[f64; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawTerms {
    kinetic: bool,
    zeeman: bool,
    mass_correction: bool,
    spin_orbit_pi: bool,
    spin_orbit_p: bool,
    darwin: bool,
}

impl Default for RawTerms {
    fn default() -> Self {
        Self { kinetic: true, zeeman: true, mass_correction: false, spin_orbit_pi: false, spin_orbit_p: false, darwin: false }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSolver {
    k: Option<usize>,
    tol: Option<f64>,
    max_iter: Option<usize>,
    degree: Option<usize>,
    seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverSettings {
    pub k: usize,
    pub options: SolverOptions,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridConfig {
    pub grid: Grid2D,
    pub gauge: Option<GaugeChoice>,
    pub units: Option<UnitsMode>,
    pub fields: FieldConfig,
    pub toggles: TermToggles,
    pub solver: SolverSettings,
}

pub fn parse_gauge(s: &str) -> Result<GaugeChoice, ConfigError> {
    match s.to_ascii_lowercase().as_str() {
        "landau" => Ok(GaugeChoice::Landau),
        "symmetric" => Ok(GaugeChoice::Symmetric),
        other => Err(ConfigError::Invalid(format!("unknown gauge `{other}`"))),
    }
}

impl GridConfig {
    pub fn from_toml(src: &str) -> Result<Self, ConfigError> {
        let raw: Raw = toml::from_str(src)?;
        let grid = Grid2D::new(raw.grid.n, raw.grid.l)?;
        let gauge = raw.gauge.as_deref().map(parse_gauge).transpose()?;
        let units = raw
            .units
            .as_deref()
            .map(|u| u.parse::<UnitsMode>().map_err(|e| ConfigError::Invalid(e.to_string())))
            .transpose()?;
        if raw.field.b < 0.0 {
            return Err(GridError::NegativeField(raw.field.b).into());
        }
        let potential = match raw.field.potential.as_deref().unwrap_or("none") {
            "none" => {
                if raw.field.k.is_some() || raw.field.center.is_some() {
                    return Err(ConfigError::Invalid("`k`/`center` given without a harmonic potential".into()));
                }
                Potential::None
            }
            "harmonic" => {
                let k = raw.field.k.ok_or_else(|| ConfigError::Invalid("harmonic potential needs `k`".into()))?;
                let [x, y] = raw.field.center.unwrap_or([0.0, 0.0]);
                Potential::Harmonic { k, center: (x, y) }
            }
            other => return Err(ConfigError::Invalid(format!("unknown potential `{other}`"))),
        };
        let t = raw.terms;
        let toggles = TermToggles {
            kinetic: t.kinetic,
            zeeman: t.zeeman,
            mass_correction: t.mass_correction,
            darwin: t.darwin,
            ..TermToggles::default()
        }
        .with_spin_orbit_flags(t.spin_orbit_pi, t.spin_orbit_p)?;
        let defaults = SolverOptions::default();
        let s = raw.solver;
        let k = s.k.unwrap_or(10);
        if k == 0 || k > 32 {
            return Err(ConfigError::Invalid(format!("solver k must lie in 1..=32, got {k}")));
        }
        let tol = s.tol.unwrap_or(defaults.tol);
        if !(tol > 0.0) {
            return Err(ConfigError::Invalid(format!("solver tol must be positive, got {tol}")));
        }
        let options = SolverOptions {
            tol,
            max_iter: s.max_iter.unwrap_or(defaults.max_iter),
            degree: s.degree.unwrap_or(defaults.degree),
            seed: s.seed.unwrap_or(defaults.seed),
            ..defaults
        };
        Ok(Self {
            grid,
            gauge,
            units,
            fields: FieldConfig { b: raw.field.b, potential },
            toggles,
            solver: SolverSettings { k, options },
        })
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self, ConfigError> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::SpinOrbitForm;

    #[test]
    fn parses_full_example() {
        let cfg = GridConfig::from_toml(
            r#"
            gauge = "symmetric"
            [grid]
            n = 64
            l = 100.0
            [field]
            b = 0.02
            potential = "harmonic"
            k = 0.0004
            center = [12.5, 0.0]
            [terms]
            mass_correction = true
            spin_orbit_pi = true
            darwin = true
            "#,
        )
        .unwrap();
        assert_eq!(cfg.gauge, Some(GaugeChoice::Symmetric));
        assert_eq!(cfg.toggles, TermToggles::full(SpinOrbitForm::PiForm));
        assert_eq!(cfg.fields.potential, Potential::Harmonic { k: 0.0004, center: (12.5, 0.0) });
        assert_eq!(cfg.solver.k, 10);
    }

    #[test]
    fn rejects_conflicts_and_typos() {
        let base = "[grid]\nn = 32\nl = 10.0\n";
        assert!(matches!(
            GridConfig::from_toml(&format!("{base}[terms]\nspin_orbit_pi = true\nspin_orbit_p = true\n")),
            Err(ConfigError::Grid(GridError::ToggleConflict))
        ));
        assert!(matches!(GridConfig::from_toml(&format!("{base}[terms]\nzeman = true\n")), Err(ConfigError::Parse(_))));
        assert!(GridConfig::from_toml("[grid]\nn = 8\nl = 10.0\n").is_err());
        assert!(GridConfig::from_toml(&format!("{base}[solver]\nk = 40\n")).is_err());
    }
}
