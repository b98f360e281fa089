//! Relativistic Landau levels of an electron in a uniform magnetic field:
//! exact energies, their `1/c²` expansion, and the energy-dependent spin moment.
//!
//! Inputs are exact rationals. Square roots are evaluated to
//! [`WORKING_DIGITS`] significant digits and rounded only for display.

use std::fmt;
use std::num::NonZeroU64;

use bigdecimal::{BigDecimal, Context, RoundingMode};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::hamiltonian::{pi_squared, spin_dot_b};
use crate::algebra::{ConstantMonomial, Factor, OperatorSum, Pauli};
use crate::dirac::Axis;
use crate::fw::TwoComponentHamiltonian;
use crate::scalar::parse_decimal_rational;

/// Significant digits carried through square roots and differences.
pub const WORKING_DIGITS: u64 = 80;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LandauError {
    #[error("magnetic field must be non-negative, got {0}")]
    NegativeField(String),
    #[error("spin splitting needs a positive magnetic field")]
    NonPositiveField,
    #[error("energy {0} lies below the rest energy")]
    BelowRestEnergy(String),
    #[error("Hamiltonian term does not have the expected Landau form: {0}")]
    UnexpectedTerm(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum UnitsMode {
    /// `ħ = m = c = e = 1`.
    #[default]
    Natural,
    /// CODATA 2018 values in SI units.
    Si,
}

impl std::str::FromStr for UnitsMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "natural" => Ok(UnitsMode::Natural),
            "si" => Ok(UnitsMode::Si),
            other => Err(format!("unknown units `{other}` (expected natural or si)")),
        }
    }
}

/// Exact values of the constants `ħ, m, c, e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitsSystem {
    pub mode: UnitsMode,
    pub hbar: BigRational,
    pub m: BigRational,
    pub c: BigRational,
    pub e: BigRational,
}

fn dec(s: &str) -> BigRational {
    parse_decimal_rational(s).expect("valid constant literal")
}

impl UnitsSystem {
    pub fn natural() -> Self {
        let one = BigRational::one();
        Self { mode: UnitsMode::Natural, hbar: one.clone(), m: one.clone(), c: one.clone(), e: one }
    }

    pub fn si() -> Self {
        Self {
            mode: UnitsMode::Si,
            hbar: dec("1.054571817e-34"),
            m: dec("9.1093837015e-31"),
            c: dec("299792458"),
            e: dec("1.602176634e-19"),
        }
    }

    pub fn from_mode(mode: UnitsMode) -> Self {
        match mode {
            UnitsMode::Natural => Self::natural(),
            UnitsMode::Si => Self::si(),
        }
    }

    pub fn rest_energy(&self) -> BigRational {
        &self.m * &self.c * &self.c
    }

    /// `ω_c = eB/m`.
    pub fn cyclotron_frequency(&self, b: &BigRational) -> BigRational {
        &self.e * b / &self.m
    }

    /// `μ_B = eħ/2m`.
    pub fn bohr_magneton(&self) -> BigRational {
        &self.e * &self.hbar / (BigRational::from_integer(2.into()) * &self.m)
    }

    /// Numeric value of `coeff · ħ^a e^b m^c c^d`; `None` for a complex coefficient.
    pub fn evaluate(&self, mono: &ConstantMonomial) -> Option<BigRational> {
        if !mono.coeff.im.is_zero() {
            return None;
        }
        let p = mono.powers;
        let pow = |x: &BigRational, k: i32| -> BigRational {
            let base = if k < 0 { x.recip() } else { x.clone() };
            num_traits::pow(base, k.unsigned_abs() as usize)
        };
        Some(&mono.coeff.re * pow(&self.hbar, p.hbar) * pow(&self.e, p.e) * pow(&self.m, p.m) * pow(&self.c, p.c))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Spin {
    Down,
    Up,
}

impl Spin {
    pub fn sign(self) -> i64 {
        match self {
            Spin::Up => 1,
            Spin::Down => -1,
        }
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Spin::Up => "+1",
            Spin::Down => "-1",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LandauQuantum {
    pub n: u32,
    pub p_z: BigRational,
    pub s: Spin,
}

impl LandauQuantum {
    pub fn new(n: u32, p_z: BigRational, s: Spin) -> Self {
        Self { n, p_z, s }
    }

    pub fn at_rest(n: u32, s: Spin) -> Self {
        Self::new(n, BigRational::zero(), s)
    }
}

fn check_field(b: &BigRational) -> Result<(), LandauError> {
    if b.is_negative() {
        return Err(LandauError::NegativeField(b.to_string()));
    }
    Ok(())
}

/// `D = ħω_c(n + ½) + p_z²/2m ± μB`, exact.
pub fn d_value(q: &LandauQuantum, b: &BigRational, units: &UnitsSystem) -> Result<BigRational, LandauError> {
    check_field(b)?;
    let half = BigRational::new(1.into(), 2.into());
    let orbital = &units.hbar * units.cyclotron_frequency(b) * (BigRational::from_integer(q.n.into()) + &half);
    let longitudinal = &q.p_z * &q.p_z / (BigRational::from_integer(2.into()) * &units.m);
    let spin = units.bohr_magneton() * b * BigRational::from_integer(q.s.sign().into());
    Ok(orbital + longitudinal + spin)
}

pub fn working_context() -> Context {
    Context::new(NonZeroU64::new(WORKING_DIGITS).expect("nonzero"), RoundingMode::HalfEven)
}

/// Rational to decimal, correctly rounded to [`WORKING_DIGITS`] digits.
pub fn rational_to_decimal(r: &BigRational) -> BigDecimal {
    let num = BigDecimal::from(r.numer().clone());
    let den = BigDecimal::from(r.denom().clone());
    // the division itself carries the crate default of 100 digits
    working_context().round_decimal(num / den)
}

/// Exact rational value of a finite decimal.
pub fn decimal_to_rational(d: &BigDecimal) -> BigRational {
    let (digits, scale) = d.as_bigint_and_exponent();
    let ten = BigInt::from(10);
    if scale >= 0 {
        BigRational::new(digits, num_traits::pow(ten, scale as usize))
    } else {
        BigRational::from_integer(digits * num_traits::pow(ten, (-scale) as usize))
    }
}

/// `√r` to [`WORKING_DIGITS`] digits; `r ≥ 0`.
pub fn sqrt_rational(r: &BigRational) -> BigDecimal {
    rational_to_decimal(r)
        .sqrt_with_context(&working_context())
        .expect("non-negative radicand")
}

/// `ε = [(mc²)² + 2mc²·D]^{1/2}`.
pub fn exact_energy(q: &LandauQuantum, b: &BigRational, units: &UnitsSystem) -> Result<BigDecimal, LandauError> {
    let d = d_value(q, b, units)?;
    let mc2 = units.rest_energy();
    let radicand = &mc2 * &mc2 + BigRational::from_integer(2.into()) * &mc2 * &d;
    Ok(sqrt_rational(&radicand))
}

/// `ε ≈ mc² + D − D²/2mc²`, exact.
pub fn expanded_energy(q: &LandauQuantum, b: &BigRational, units: &UnitsSystem) -> Result<BigRational, LandauError> {
    let d = d_value(q, b, units)?;
    let mc2 = units.rest_energy();
    if BigRational::from_integer(2.into()) * &d >= mc2 {
        log::warn!("2D = {} is not small against mc²; the expansion is unreliable", &d * BigRational::from_integer(2.into()));
    }
    Ok(&mc2 + &d - &d * &d / (BigRational::from_integer(2.into()) * &mc2))
}

/// `mc² [1 + (2/mc²)(ħω_c(n+½) + p_z²/2m ± μB)]^{1/2}`, evaluated as written.
pub fn sqrt_hamiltonian_energy(
    q: &LandauQuantum,
    b: &BigRational,
    units: &UnitsSystem,
) -> Result<BigDecimal, LandauError> {
    let d = d_value(q, b, units)?;
    let mc2 = units.rest_energy();
    let x = BigRational::one() + BigRational::from_integer(2.into()) * &d / &mc2;
    let root = sqrt_rational(&x);
    Ok(working_context().round_decimal(rational_to_decimal(&mc2) * root))
}

/// First three terms of the square-root Hamiltonian's series:
/// `mc²(1 + x/2 − x²/8)` with `x = 2D/mc²`.
pub fn sqrt_hamiltonian_series(q: &LandauQuantum, b: &BigRational, units: &UnitsSystem) -> Result<BigRational, LandauError> {
    let d = d_value(q, b, units)?;
    let mc2 = units.rest_energy();
    let x = BigRational::from_integer(2.into()) * &d / &mc2;
    let r = |n: i64, k: i64| BigRational::new(n.into(), k.into());
    Ok(&mc2 * (BigRational::one() + &x * r(1, 2) - &x * &x * r(1, 8)))
}

/// `μ(ε) = eħc²/2ε`, exact for a rational energy.
pub fn magnetic_moment(epsilon: &BigRational, units: &UnitsSystem) -> Result<BigRational, LandauError> {
    if epsilon < &units.rest_energy() {
        return Err(LandauError::BelowRestEnergy(epsilon.to_string()));
    }
    let two = BigRational::from_integer(2.into());
    Ok(&units.e * &units.hbar * &units.c * &units.c / (two * epsilon))
}

/// `ε(n, +) − ε(n, −)`.
pub fn spin_splitting(n: u32, p_z: &BigRational, b: &BigRational, units: &UnitsSystem) -> Result<BigDecimal, LandauError> {
    if !b.is_positive() {
        return Err(LandauError::NonPositiveField);
    }
    Ok(splitting_unchecked(n, p_z, b, units))
}

fn splitting_unchecked(n: u32, p_z: &BigRational, b: &BigRational, units: &UnitsSystem) -> BigDecimal {
    let up = exact_energy(&LandauQuantum::new(n, p_z.clone(), Spin::Up), b, units).expect("field checked");
    let down = exact_energy(&LandauQuantum::new(n, p_z.clone(), Spin::Down), b, units).expect("field checked");
    working_context().round_decimal(up - down)
}

/// One line of a spectrum table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumRow {
    pub quantum: LandauQuantum,
    pub b: BigRational,
    pub d: BigRational,
    pub exact: BigDecimal,
    pub expanded: BigRational,
    pub residual: BigDecimal,
    pub splitting: BigDecimal,
}

pub fn spectrum_row(q: LandauQuantum, b: &BigRational, units: &UnitsSystem) -> Result<SpectrumRow, LandauError> {
    let d = d_value(&q, b, units)?;
    let exact = exact_energy(&q, b, units)?;
    let expanded = expanded_energy(&q, b, units)?;
    let residual = working_context().round_decimal(&exact - rational_to_decimal(&expanded));
    let splitting = splitting_unchecked(q.n, &q.p_z, b, units);
    Ok(SpectrumRow { quantum: q, b: b.clone(), d, exact, expanded, residual, splitting })
}

/// Rows for every field in `fields` and level in `levels`, ordered by field as
/// given, then `n` ascending, then spin `+1` before `−1`.
pub fn spectrum_table(
    levels: &[u32],
    fields: &[BigRational],
    p_z: &BigRational,
    units: &UnitsSystem,
) -> Result<Vec<SpectrumRow>, LandauError> {
    let mut ns = levels.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let mut rows = Vec::new();
    for b in fields {
        for &n in &ns {
            for s in [Spin::Up, Spin::Down] {
                rows.push(spectrum_row(LandauQuantum::new(n, p_z.clone(), s), b, units)?);
            }
        }
    }
    Ok(rows)
}

pub const CSV_HEADER: &str = "n,p_z,s,B,D,epsilon_exact,epsilon_expanded,residual,splitting";

/// CSV with [`CSV_HEADER`] columns, numbers rounded to `digits` significant digits.
pub fn spectrum_csv(rows: &[SpectrumRow], digits: u32) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let fields = [
            r.quantum.n.to_string(),
            format_rational(&r.quantum.p_z, digits),
            r.quantum.s.to_string(),
            format_rational(&r.b, digits),
            format_rational(&r.d, digits),
            format_significant(&r.exact, digits),
            format_rational(&r.expanded, digits),
            format_significant(&r.residual, digits),
            format_significant(&r.splitting, digits),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn format_rational(r: &BigRational, digits: u32) -> String {
    format_significant(&rational_to_decimal(r), digits)
}

/// Rounds to `digits` significant digits. Plain notation for magnitudes in
/// `[1e-5, 1e15)`, scientific otherwise; trailing zeros are trimmed.
pub fn format_significant(x: &BigDecimal, digits: u32) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let prec = NonZeroU64::new(digits.max(1) as u64).expect("nonzero");
    let rounded = x.with_precision_round(prec, RoundingMode::HalfEven).normalized();
    let (int, scale) = rounded.as_bigint_and_exponent();
    let negative = int.is_negative();
    let mantissa = int.abs().to_string();
    // value = mantissa × 10^(−scale); exponent of the leading digit:
    let exp10 = mantissa.len() as i64 - 1 - scale;
    let sign = if negative { "-" } else { "" };
    if (-5..15).contains(&exp10) {
        return format!("{sign}{}", rounded.abs().to_plain_string());
    }
    let (lead, rest) = mantissa.split_at(1);
    if rest.is_empty() {
        format!("{sign}{lead}e{exp10}")
    } else {
        format!("{sign}{lead}.{rest}e{exp10}")
    }
}

/// Eigenvalue of the two-component Hamiltonian's rest, kinetic, Zeeman and
/// quartic terms on the Landau state `q` of a uniform field `B ẑ`, with no
/// electric field.
///
/// The kinetic and Zeeman terms must be multiples of `Π²` and `σ·B`; their
/// coefficients are read from the symbolic terms, and the quartic term must be
/// the square of their sum.
pub fn pauli_landau_eigenvalue(
    h: &TwoComponentHamiltonian,
    q: &LandauQuantum,
    b: &BigRational,
    units: &UnitsSystem,
) -> Result<BigRational, LandauError> {
    check_field(b)?;
    let unexpected = |what: &str| LandauError::UnexpectedTerm(what.to_string());
    let coefficient_of = |sum: &OperatorSum<Pauli>, pattern: OperatorSum<Pauli>, label: Pauli, factors: &[Factor], what: &str| {
        let t = sum
            .terms()
            .find(|t| t.label == label && t.factors == factors)
            .ok_or_else(|| unexpected(what))?;
        let mono = t.monomial();
        let expected = pattern.scale(&mono).assume(sum.assumptions()).map_err(|e| unexpected(&e.to_string()))?;
        if expected != *sum {
            return Err(unexpected(what));
        }
        units.evaluate(&mono).ok_or_else(|| unexpected(what))
    };
    let a_kin = coefficient_of(&h.kinetic, pi_squared(), Pauli::I, &[Factor::Pi(Axis::X), Factor::Pi(Axis::X)], "kinetic")?;
    let zeeman_factors = [Factor::Field(crate::algebra::Field::b(Axis::Z))];
    let a_zee = coefficient_of(&h.zeeman, spin_dot_b(), Pauli::sigma(Axis::Z), &zeeman_factors, "zeeman")?;
    let base = h.kinetic.try_add(&h.zeeman).map_err(|e| unexpected(&e.to_string()))?;
    if h.mass_correction.base != base || h.mass_correction.prefix != Pauli::I {
        return Err(unexpected("mass correction is not the square of kinetic + zeeman"));
    }
    let rest = h.rest.as_monomial().ok_or_else(|| unexpected("rest"))?;
    let rest = units.evaluate(&rest).ok_or_else(|| unexpected("rest"))?;
    let prefactor = units.evaluate(&h.mass_correction.prefactor).ok_or_else(|| unexpected("mass correction"))?;

    // Π_x² + Π_y² → ħeB(2n+1), Π_z → p_z, σ_z → s
    let perp = &units.hbar * &units.e * b * BigRational::from_integer((2 * q.n + 1).into());
    let pauli = a_kin * (perp + &q.p_z * &q.p_z) + a_zee * b * BigRational::from_integer(q.s.sign().into());
    Ok(rest + &pauli + prefactor * &pauli * &pauli)
}
