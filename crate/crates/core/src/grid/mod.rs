//! Finite-difference two-component Hamiltonian on a square grid.
//!
//! Sites sit at `x_i = −L/2 + i·h`, `i = 0..N`, `h = L/(N−1)`. The outermost
//! ring carries the Dirichlet condition `ψ = 0`, so the unknowns are the
//! `(N−2)²` interior sites per spin component. With `Π = p + eA` (electron
//! charge `−e`), momentum-bearing operators carry Peierls link factors
//! `exp((ie/ħ)∫A·dl)`. These are exact for the linear vector potentials used
//! here, so the two gauges give unitarily equivalent matrices.

mod config;
mod eigen;

use std::fmt;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use sprs::{CsMat, TriMat};

pub use config::{ConfigError, GridConfig, SolverSettings};
pub use eigen::{lowest_eigenvalues, lowest_eigenvalues_with, EigenResult, SolverError, SolverOptions};

use crate::landau::{Spin, UnitsSystem};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GridError {
    #[error("grid needs at least 16 points per side, got {0}")]
    TooFewPoints(usize),
    #[error("box length must be positive, got {0}")]
    BadLength(f64),
    #[error("magnetic field must be non-negative, got {0}")]
    NegativeField(f64),
    #[error("grid too coarse: magnetic length {magnetic_length:.4} is below 2h = {two_h:.4}")]
    TooCoarse { magnetic_length: f64, two_h: f64 },
    #[error("spin-orbit toggles conflict: choose either the Π form or the p form")]
    ToggleConflict,
    #[error("Hamiltonian couples the two spin components; no spin block exists")]
    SpinMixing,
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// Square box of `n × n` points with side `l`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    pub n: usize,
    pub l: f64,
}

impl Grid2D {
    pub fn new(n: usize, l: f64) -> Result<Self, GridError> {
        if n < 16 {
            return Err(GridError::TooFewPoints(n));
        }
        if !(l > 0.0 && l.is_finite()) {
            return Err(GridError::BadLength(l));
        }
        Ok(Self { n, l })
    }

    pub fn h(&self) -> f64 {
        self.l / (self.n as f64 - 1.0)
    }

    /// Interior points per side.
    pub fn m(&self) -> usize {
        self.n - 2
    }

    pub fn sites(&self) -> usize {
        self.m() * self.m()
    }

    /// Coordinate of grid line `i` (`0..n`).
    pub fn coord(&self, i: usize) -> f64 {
        -self.l / 2.0 + i as f64 * self.h()
    }

    /// Matrix index of interior site `(i, j)` (grid lines `1..n−1`) for spin `s`.
    pub fn index(&self, i: usize, j: usize, s: Spin) -> usize {
        let block = match s {
            Spin::Up => 0,
            Spin::Down => 1,
        };
        block * self.sites() + (j - 1) * self.m() + (i - 1)
    }

    fn interior(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        (1..n - 1).flat_map(move |j| (1..n - 1).map(move |i| (i, j)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Potential {
    #[default]
    None,
    /// Confining potential energy `U = (k/2)|r − r₀|²`, i.e. `V = −U/e`.
    Harmonic { k: f64, center: (f64, f64) },
}

impl Potential {
    pub fn harmonic(k: f64) -> Self {
        Potential::Harmonic { k, center: (0.0, 0.0) }
    }

    /// Potential energy `U = −eV` at `(x, y)`.
    pub fn energy(&self, x: f64, y: f64) -> f64 {
        match *self {
            Potential::None => 0.0,
            Potential::Harmonic { k, center: (x0, y0) } => 0.5 * k * ((x - x0).powi(2) + (y - y0).powi(2)),
        }
    }

    /// `E = −∇V = ∇U / e`, analytic.
    pub fn electric_field(&self, x: f64, y: f64, e: f64) -> (f64, f64) {
        match *self {
            Potential::None => (0.0, 0.0),
            Potential::Harmonic { k, center: (x0, y0) } => (k * (x - x0) / e, k * (y - y0) / e),
        }
    }

    /// `∇·E`, analytic.
    pub fn div_e(&self, e: f64) -> f64 {
        match *self {
            Potential::None => 0.0,
            Potential::Harmonic { k, .. } => 2.0 * k / e,
        }
    }
}

/// Uniform `B ẑ` plus an in-plane electrostatic potential.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FieldConfig {
    pub b: f64,
    pub potential: Potential,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GaugeChoice {
    /// `A = (−B y, 0, 0)`.
    Landau,
    /// `A = (B/2)(−y, x, 0)`.
    Symmetric,
}

impl GaugeChoice {
    /// `A(x, y)`.
    pub fn vector_potential(self, b: f64, x: f64, y: f64) -> (f64, f64) {
        match self {
            GaugeChoice::Landau => (-b * y, 0.0),
            GaugeChoice::Symmetric => (-0.5 * b * y, 0.5 * b * x),
        }
    }
}

impl fmt::Display for GaugeChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GaugeChoice::Landau => "landau",
            GaugeChoice::Symmetric => "symmetric",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SpinOrbitForm {
    #[default]
    Off,
    /// `σ·(E×Π)` with covariant differences.
    PiForm,
    /// `σ·(E×p)` with plain differences; not gauge covariant.
    PForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TermToggles {
    pub kinetic: bool,
    pub zeeman: bool,
    pub mass_correction: bool,
    pub spin_orbit: SpinOrbitForm,
    pub darwin: bool,
}

impl TermToggles {
    pub fn pauli() -> Self {
        Self { kinetic: true, zeeman: true, mass_correction: false, spin_orbit: SpinOrbitForm::Off, darwin: false }
    }

    pub fn full(spin_orbit: SpinOrbitForm) -> Self {
        Self { kinetic: true, zeeman: true, mass_correction: true, spin_orbit, darwin: true }
    }

    /// Builds toggles from separate Π-form and p-form switches.
    pub fn with_spin_orbit_flags(mut self, pi_form: bool, p_form: bool) -> Result<Self, GridError> {
        self.spin_orbit = match (pi_form, p_form) {
            (true, true) => return Err(GridError::ToggleConflict),
            (true, false) => SpinOrbitForm::PiForm,
            (false, true) => SpinOrbitForm::PForm,
            (false, false) => SpinOrbitForm::Off,
        };
        Ok(self)
    }
}

impl Default for TermToggles {
    fn default() -> Self {
        Self::pauli()
    }
}

/// `ħ, e, m, c` as floating-point numbers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub hbar: f64,
    pub e: f64,
    pub m: f64,
    pub c: f64,
}

impl From<&UnitsSystem> for Constants {
    fn from(u: &UnitsSystem) -> Self {
        let f = |r: &num_rational::BigRational| r.to_f64().expect("finite constant");
        Self { hbar: f(&u.hbar), e: f(&u.e), m: f(&u.m), c: f(&u.c) }
    }
}

impl Constants {
    pub fn natural() -> Self {
        Self { hbar: 1.0, e: 1.0, m: 1.0, c: 1.0 }
    }

    pub fn magnetic_length(&self, b: f64) -> f64 {
        (self.hbar / (self.e * b)).sqrt()
    }

    pub fn cyclotron_energy(&self, b: f64) -> f64 {
        self.hbar * self.e * b / self.m
    }

    pub fn bohr_magneton(&self) -> f64 {
        self.e * self.hbar / (2.0 * self.m)
    }
}

/// Sparse Hermitian matrix of dimension `2(N−2)²`: spin-up block first.
#[derive(Debug, Clone)]
pub struct GridHamiltonian {
    pub grid: Grid2D,
    pub gauge: GaugeChoice,
    pub matrix: CsMat<Complex64>,
}

impl GridHamiltonian {
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// `max |H − H†| / max |H|` over entries.
    pub fn hermiticity_defect(&self) -> f64 {
        let h = &self.matrix;
        let ht = h.transpose_view().to_csr();
        let mut worst = 0.0f64;
        let mut scale = 0.0f64;
        for (row, vec) in h.outer_iterator().enumerate() {
            for (col, &v) in vec.iter() {
                scale = scale.max(v.norm());
                let w = ht.get(row, col).copied().unwrap_or_default().conj();
                worst = worst.max((v - w).norm());
            }
        }
        for (row, vec) in ht.outer_iterator().enumerate() {
            for (col, &v) in vec.iter() {
                if h.get(row, col).is_none() {
                    worst = worst.max(v.norm());
                }
            }
        }
        if scale == 0.0 { 0.0 } else { worst / scale }
    }

    /// The `(N−2)² × (N−2)²` block of spin `s`, if the spins decouple.
    pub fn spin_block(&self, s: Spin) -> Result<CsMat<Complex64>, GridError> {
        let sites = self.grid.sites();
        let offset = match s {
            Spin::Up => 0,
            Spin::Down => sites,
        };
        let mut tri = TriMat::new((sites, sites));
        for (row, vec) in self.matrix.outer_iterator().enumerate() {
            for (col, &v) in vec.iter() {
                if (row < sites) != (col < sites) {
                    if v != Complex64::zero() {
                        return Err(GridError::SpinMixing);
                    }
                    continue;
                }
                if (offset..offset + sites).contains(&row) {
                    tri.add_triplet(row - offset, col - offset, v);
                }
            }
        }
        Ok(tri.to_csr())
    }
}

fn phase(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

/// Link factor `exp((ie/ħ)∫_r^{r+h ê} A·dl)`; the midpoint rule is exact for linear `A`.
fn link(gauge: Option<GaugeChoice>, c: &Constants, b: f64, x: f64, y: f64, dx: f64, dy: f64) -> Complex64 {
    let Some(gauge) = gauge else {
        return Complex64::new(1.0, 0.0);
    };
    let (ax, ay) = gauge.vector_potential(b, x + dx / 2.0, y + dy / 2.0);
    phase(c.e / c.hbar * (ax * dx + ay * dy))
}

/// Single-component operators on interior sites, as triplet lists.
struct Stencils {
    /// `Π²/2m`
    kinetic: Vec<(usize, usize, Complex64)>,
    /// `½{E_x, Π_y} − ½{E_y, Π_x}` (or with `p`), without the `σ_z` prefactor.
    spin_orbit: Vec<(usize, usize, Complex64)>,
}

fn stencils(
    grid: &Grid2D,
    gauge: GaugeChoice,
    fields: &FieldConfig,
    toggles: &TermToggles,
    c: &Constants,
) -> Stencils {
    let h = grid.h();
    let m = grid.m();
    let site = |i: usize, j: usize| (j - 1) * m + (i - 1);
    let inside = |i: isize, j: isize| i >= 1 && j >= 1 && i <= m as isize && j <= m as isize;
    let hop = c.hbar * c.hbar / (2.0 * c.m * h * h);
    let mut kinetic = Vec::new();
    let mut spin_orbit = Vec::new();
    let so_gauge = match toggles.spin_orbit {
        SpinOrbitForm::PiForm => Some(gauge),
        _ => None,
    };
    for (i, j) in grid.interior() {
        let (x, y) = (grid.coord(i), grid.coord(j));
        let r = site(i, j);
        kinetic.push((r, r, Complex64::new(4.0 * hop, 0.0)));
        for (di, dj) in [(1isize, 0isize), (-1, 0), (0, 1), (0, -1)] {
            let (ni, nj) = (i as isize + di, j as isize + dj);
            if !inside(ni, nj) {
                continue;
            }
            let rn = site(ni as usize, nj as usize);
            let (dx, dy) = (di as f64 * h, dj as f64 * h);
            let u = link(Some(gauge), c, fields.b, x, y, dx, dy);
            kinetic.push((r, rn, -hop * u));
            if toggles.spin_orbit == SpinOrbitForm::Off {
                continue;
            }
            // Π_d[r, r ± ê_d] = ∓ iħ U / 2h ; ½{E_e, Π_d}[r, r'] = ½(E_e(r) + E_e(r'))Π_d[r, r']
            let (xn, yn) = (grid.coord(ni as usize), grid.coord(nj as usize));
            let (ex, ey) = fields.potential.electric_field(x, y, c.e);
            let (exn, eyn) = fields.potential.electric_field(xn, yn, c.e);
            let u_so = link(so_gauge, c, fields.b, x, y, dx, dy);
            let sign = (di + dj) as f64;
            let pi_entry = Complex64::new(0.0, -sign * c.hbar / (2.0 * h)) * u_so;
            // E×Π|_z = E_x Π_y − E_y Π_x
            let weight = if dj != 0 { 0.5 * (ex + exn) } else { -0.5 * (ey + eyn) };
            spin_orbit.push((r, rn, weight * pi_entry));
        }
    }
    Stencils { kinetic, spin_orbit }
}

/// Assembles the Hamiltonian without the rest energy: potential, kinetic,
/// Zeeman, quartic correction, spin-orbit and Darwin terms as toggled.
pub fn build_hamiltonian(
    grid: &Grid2D,
    gauge: GaugeChoice,
    fields: &FieldConfig,
    toggles: &TermToggles,
    units: &UnitsSystem,
) -> Result<GridHamiltonian, GridError> {
    build_with_constants(grid, gauge, fields, toggles, &Constants::from(units))
}

pub fn build_with_constants(
    grid: &Grid2D,
    gauge: GaugeChoice,
    fields: &FieldConfig,
    toggles: &TermToggles,
    c: &Constants,
) -> Result<GridHamiltonian, GridError> {
    if fields.b < 0.0 {
        return Err(GridError::NegativeField(fields.b));
    }
    let h = grid.h();
    if fields.b > 0.0 {
        let lb = c.magnetic_length(fields.b);
        if lb < 2.0 * h {
            return Err(GridError::TooCoarse { magnetic_length: lb, two_h: 2.0 * h });
        }
        if !(4.0 * h < lb && lb < grid.l / 6.0) {
            log::warn!("magnetic length {lb:.4} outside the window (4h, L/6) = ({:.4}, {:.4})", 4.0 * h, grid.l / 6.0);
        }
    }
    let sites = grid.sites();
    let dim = 2 * sites;
    let st = stencils(grid, gauge, fields, toggles, c);
    let mu_b = c.bohr_magneton() * fields.b;
    let spins = [(Spin::Up, 1.0), (Spin::Down, -1.0)];

    // even Pauli operator K = Π²/2m + μσ·B, needed alone for the quartic term
    let mut k_tri = TriMat::new((dim, dim));
    for (s, sign) in spins {
        let off = grid.index(1, 1, s);
        if toggles.kinetic {
            for &(r, q, v) in &st.kinetic {
                k_tri.add_triplet(off + r, off + q, v);
            }
        }
        if toggles.zeeman {
            for r in 0..sites {
                k_tri.add_triplet(off + r, off + r, Complex64::new(sign * mu_b, 0.0));
            }
        }
    }
    let k_op: CsMat<Complex64> = k_tri.to_csr();

    let mut rest = TriMat::new((dim, dim));
    let so_coeff = c.e * c.hbar / (4.0 * c.m * c.m * c.c * c.c);
    let darwin = c.e * c.hbar * c.hbar / (8.0 * c.m * c.m * c.c * c.c) * fields.potential.div_e(c.e);
    for (s, sign) in spins {
        let off = grid.index(1, 1, s);
        for (i, j) in grid.interior() {
            let r = grid.index(i, j, s);
            let mut diag = fields.potential.energy(grid.coord(i), grid.coord(j));
            if toggles.darwin {
                diag += darwin;
            }
            if diag != 0.0 {
                rest.add_triplet(r, r, Complex64::new(diag, 0.0));
            }
        }
        if toggles.spin_orbit != SpinOrbitForm::Off {
            for &(r, q, v) in &st.spin_orbit {
                rest.add_triplet(off + r, off + q, sign * so_coeff * v);
            }
        }
    }
    let mut matrix: CsMat<Complex64> = &k_op + &rest.to_csr::<usize>();
    if toggles.mass_correction {
        let k2: CsMat<Complex64> = &k_op * &k_op;
        let scale = Complex64::new(-1.0 / (2.0 * c.m * c.c * c.c), 0.0);
        matrix = &matrix + &k2.map(|v| v * scale);
    }
    Ok(GridHamiltonian { grid: *grid, gauge, matrix })
}

/// Diagonal of `U` with `U H_landau U† = H_symmetric`: `exp(−ieχ/ħ)`, `χ = Bxy/2`.
pub fn gauge_map(grid: &Grid2D, b: f64, c: &Constants) -> Vec<Complex64> {
    let mut d = vec![Complex64::zero(); 2 * grid.sites()];
    for s in [Spin::Up, Spin::Down] {
        for (i, j) in grid.interior() {
            let chi = 0.5 * b * grid.coord(i) * grid.coord(j);
            d[grid.index(i, j, s)] = phase(-c.e * chi / c.hbar);
        }
    }
    d
}

/// `max |U H_landau U† − H_symmetric| / max |H|` over entries.
pub fn gauge_covariance_defect(landau: &GridHamiltonian, symmetric: &GridHamiltonian, u: &[Complex64]) -> f64 {
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    let a = &landau.matrix;
    let s = &symmetric.matrix;
    for (row, vec) in a.outer_iterator().enumerate() {
        for (col, &v) in vec.iter() {
            let mapped = u[row] * v * u[col].conj();
            let target = s.get(row, col).copied().unwrap_or_default();
            worst = worst.max((mapped - target).norm());
            scale = scale.max(v.norm());
        }
    }
    for (row, vec) in s.outer_iterator().enumerate() {
        for (col, &v) in vec.iter() {
            if a.get(row, col).is_none() {
                worst = worst.max(v.norm());
            }
        }
    }
    if scale == 0.0 { 0.0 } else { worst / scale }
}

/// Spectra of the two gauges and their largest relative disagreement.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeReport {
    pub landau: Vec<f64>,
    pub symmetric: Vec<f64>,
    /// `max_i |ε_L − ε_S| / |ε|`
    pub max_relative_discrepancy: f64,
    /// Entrywise defect of `U H_L U† = H_S`.
    pub covariance_defect: f64,
    pub max_residual: f64,
}

pub fn gauge_invariance_report(
    grid: &Grid2D,
    fields: &FieldConfig,
    toggles: &TermToggles,
    k: usize,
    options: &SolverOptions,
    c: &Constants,
) -> Result<GaugeReport, GridError> {
    let hl = build_with_constants(grid, GaugeChoice::Landau, fields, toggles, c)?;
    let hs = build_with_constants(grid, GaugeChoice::Symmetric, fields, toggles, c)?;
    let covariance_defect = gauge_covariance_defect(&hl, &hs, &gauge_map(grid, fields.b, c));
    let el = lowest_eigenvalues_with(&hl.matrix, k, options)?;
    let es = lowest_eigenvalues_with(&hs.matrix, k, options)?;
    let max_relative_discrepancy = el
        .values
        .iter()
        .zip(&es.values)
        .map(|(a, b)| {
            let scale = a.abs().max(b.abs());
            if scale == 0.0 { 0.0 } else { (a - b).abs() / scale }
        })
        .fold(0.0, f64::max);
    let max_residual = el.residuals.iter().chain(&es.residuals).copied().fold(0.0, f64::max);
    Ok(GaugeReport { landau: el.values, symmetric: es.values, max_relative_discrepancy, covariance_defect, max_residual })
}

/// Groups sorted eigenvalues whose neighbours lie within `tol`, returning
/// `(lowest, mean, size)` per cluster.
pub fn clusters(values: &[f64], tol: f64) -> Vec<Cluster> {
    let mut out = Vec::new();
    let mut current: Vec<f64> = Vec::new();
    let close = |c: &[f64]| Cluster { lowest: c[0], mean: c.iter().sum::<f64>() / c.len() as f64, size: c.len() };
    for &v in values {
        if let Some(&last) = current.last() {
            if v - last > tol {
                out.push(close(&current));
                current.clear();
            }
        }
        current.push(v);
    }
    if !current.is_empty() {
        out.push(close(&current));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cluster {
    pub lowest: f64,
    pub mean: f64,
    pub size: usize,
}

/// Bulk Landau levels: clusters of at least `min_size` nearly degenerate
/// eigenvalues, with tolerance `ħω_c/100`. Each level is the lowest member of
/// its cluster, since states near the walls are pushed up, never down.
pub fn bulk_levels(values: &[f64], cyclotron_energy: f64, min_size: usize) -> Vec<f64> {
    clusters(values, cyclotron_energy / 100.0)
        .into_iter()
        .filter(|c| c.size >= min_size)
        .map(|c| c.lowest)
        .collect()
}

/// One row of a grid-refinement study.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub h: f64,
    /// Lowest eigenvalue of the spin-down block (`n = 0, s = −1`).
    pub lowest: f64,
    /// `lowest − (ħω_c/2 − μB)`.
    pub lowest_error: f64,
    /// Gap to the next bulk level of the same block, if resolved.
    pub gap: Option<f64>,
}

/// Kinetic-plus-Zeeman spectra on grids of increasing `N` at fixed `L`,
/// compared with the Landau formula.
pub fn landau_convergence(
    b: f64,
    l: f64,
    sizes: &[usize],
    k: usize,
    options: &SolverOptions,
    c: &Constants,
) -> Result<Vec<ConvergenceRow>, GridError> {
    let fields = FieldConfig { b, potential: Potential::None };
    let hw = c.cyclotron_energy(b);
    let mut rows = Vec::new();
    for &n in sizes {
        let grid = Grid2D::new(n, l)?;
        let h = build_with_constants(&grid, GaugeChoice::Landau, &fields, &TermToggles::pauli(), c)?;
        let block = h.spin_block(Spin::Down)?;
        let eig = lowest_eigenvalues_with(&block, k, options)?;
        let levels = if hw > 0.0 { bulk_levels(&eig.values, hw, 3) } else { eig.values.clone() };
        let lowest = eig.values[0];
        let expected = hw / 2.0 - c.bohr_magneton() * b;
        rows.push(ConvergenceRow {
            n,
            h: grid.h(),
            lowest,
            lowest_error: lowest - expected,
            gap: levels.get(1).map(|next| next - levels[0]),
        });
    }
    Ok(rows)
}
