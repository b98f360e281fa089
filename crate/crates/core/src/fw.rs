//! Foldy–Wouthuysen reduction of the Dirac Hamiltonian to order `1/c²`.
//!
//! Each stage conjugates with `exp(iS)` where `S = (−i/2mc²) β O_odd`, summing
//! the nested-commutator series and discarding every product whose `c` degree
//! falls below the cutoff.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{
    AlgebraError, Assumptions, ConstantMonomial, EvenSquare, OperatorSum, OperatorTerm, Pauli, Powers,
};
use crate::dirac::{Axis, Gamma};
use crate::scalar::GaussianRational;

/// Lowest `c` degree retained.
pub const DEGREE_CUTOFF: i32 = -2;

/// Commutator orders summed per stage.
pub const DEFAULT_K_MAX: u32 = 5;

/// Number of successive conjugations.
pub const STAGES: u8 = 3;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FwError {
    #[error("generator input is not purely odd")]
    NotOdd,
    #[error("generator has a term of c degree {0}; it must be negative")]
    GeneratorDegree(i32),
    #[error("commutator order must be at least 1")]
    ZeroOrder,
    #[error("the commutator series tail reaches c degree {0}, above the cutoff")]
    TailAboveCutoff(i32),
    #[error("odd terms survive the final stage at c degree {0}")]
    OddResidue(i32),
    #[error("even Hamiltonian term does not fit the two-component form: {0}")]
    Unclassified(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Hermitian generator `S` of one conjugation stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FWGenerator {
    pub generator: OperatorSum,
    pub stage: u8,
}

impl FWGenerator {
    /// `iS = (1/2mc²) β O_odd`.
    pub fn i_s(&self) -> OperatorSum {
        self.generator.scale_by(&GaussianRational::i())
    }

    pub fn is_zero(&self) -> bool {
        self.generator.is_zero()
    }
}

fn inverse_two_m_c2() -> ConstantMonomial {
    ConstantMonomial::new(GaussianRational::ratio(1, 2), Powers::new(0, 0, -1, -2))
}

/// `S = (−i/2mc²) β · odd`.
pub fn generator_from_odd(odd: &OperatorSum, stage: u8) -> Result<FWGenerator, FwError> {
    if !odd.is_odd() {
        return Err(FwError::NotOdd);
    }
    let factor = inverse_two_m_c2().mul(&ConstantMonomial::new(-GaussianRational::i(), Powers::ONE));
    let generator = OperatorSum::label(Gamma::BETA).mul(odd)?.scale(&factor);
    Ok(FWGenerator { generator, stage })
}

/// Products skipped by grading, aggregated by stage, commutator order and degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct DroppedEntry {
    pub stage: u8,
    pub order: u32,
    pub c_degree: i32,
    pub count: usize,
}

impl fmt::Display for DroppedEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "stage {} order {}: {} product(s) at c^{}",
            self.stage, self.order, self.count, self.c_degree
        )
    }
}

fn record(ledger: &mut BTreeMap<(u8, u32, i32), usize>, stage: u8, order: u32, dropped: &BTreeMap<i32, usize>) {
    for (&deg, &n) in dropped {
        *ledger.entry((stage, order, deg)).or_default() += n;
    }
}

/// `[A, B]` keeping only products of degree `≥ cutoff`.
fn truncated_commutator(
    a: &OperatorSum,
    b: &OperatorSum,
    cutoff: i32,
    ledger: &mut BTreeMap<(u8, u32, i32), usize>,
    stage: u8,
    order: u32,
) -> Result<OperatorSum, AlgebraError> {
    let (ab, d1) = a.mul_truncated(b, cutoff)?;
    let (ba, d2) = b.mul_truncated(a, cutoff)?;
    record(ledger, stage, order, &d1);
    record(ledger, stage, order, &d2);
    ab.try_sub(&ba)
}

/// `Σ_{k=0}^{k_max} (1/k!) ad_{iS}^k(H)` truncated at [`DEGREE_CUTOFF`].
///
/// Returns the conjugated Hamiltonian and the dropped-product ledger.
pub fn bch_conjugate(
    h: &OperatorSum,
    s: &FWGenerator,
    k_max: u32,
) -> Result<(OperatorSum, Vec<DroppedEntry>), FwError> {
    if k_max == 0 {
        return Err(FwError::ZeroOrder);
    }
    let mut ledger = BTreeMap::new();
    let (kept, below) = h.truncate(DEGREE_CUTOFF);
    for t in below.terms() {
        *ledger.entry((s.stage, 0, t.c_degree())).or_default() += 1;
    }
    if s.is_zero() {
        return Ok((kept, flatten(ledger)));
    }
    let i_s = s.i_s();
    if let Some(top) = i_s.max_c_degree().filter(|&d| d >= 0) {
        return Err(FwError::GeneratorDegree(top));
    }
    let mut acc = kept.clone();
    let mut term = kept;
    for k in 1..=k_max {
        let inv_k = GaussianRational::ratio(1, k as i64);
        term = truncated_commutator(&i_s, &term, DEGREE_CUTOFF, &mut ledger, s.stage, k)?.scale_by(&inv_k);
        if term.is_zero() {
            break;
        }
        acc = acc.try_add(&term)?;
    }
    if !term.is_zero() {
        // the first omitted order must already lie entirely below the cutoff
        let mut scratch = BTreeMap::new();
        let tail = truncated_commutator(&i_s, &term, DEGREE_CUTOFF, &mut scratch, s.stage, k_max + 1)?;
        if let Some(d) = tail.max_c_degree() {
            return Err(FwError::TailAboveCutoff(d));
        }
        for (key, n) in scratch {
            *ledger.entry(key).or_default() += n;
        }
    }
    Ok((acc, flatten(ledger)))
}

fn flatten(ledger: BTreeMap<(u8, u32, i32), usize>) -> Vec<DroppedEntry> {
    ledger
        .into_iter()
        .map(|((stage, order, c_degree), count)| DroppedEntry { stage, order, c_degree, count })
        .collect()
}

/// One conjugation stage: its generator and the Hamiltonian it produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageReport {
    pub generator: FWGenerator,
    pub output: OperatorSum,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionReport {
    pub stages: Vec<StageReport>,
    pub dropped: Vec<DroppedEntry>,
    pub final_hamiltonian: OperatorSum,
}

/// Applies the stages `S`, `S′`, `S″` with `k_max` commutator orders each.
pub fn fw_reduce_with(h: &OperatorSum, k_max: u32) -> Result<ExpansionReport, FwError> {
    let mut current = h.clone();
    let mut stages = Vec::new();
    let mut dropped = Vec::new();
    for stage in 1..=STAGES {
        let (_, odd) = current.even_odd_split();
        let generator = generator_from_odd(&odd, stage)?;
        let (next, ledger) = bch_conjugate(&current, &generator, k_max)?;
        dropped.extend(ledger);
        log::debug!("stage {stage}: generator has {} terms, output {} terms", generator.generator.len(), next.len());
        stages.push(StageReport { generator, output: next.clone() });
        current = next;
    }
    let (even, odd) = current.even_odd_split();
    if let Some(d) = odd.max_c_degree() {
        return Err(FwError::OddResidue(d));
    }
    Ok(ExpansionReport { stages, dropped, final_hamiltonian: even })
}

/// [`fw_reduce_with`] at the default commutator order.
pub fn fw_reduce(h: &OperatorSum) -> Result<ExpansionReport, FwError> {
    fw_reduce_with(h, DEFAULT_K_MAX)
}

/// Which diagonal block of the Dirac spinor to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// Positive energies: `β → +1`.
    Upper,
    /// Negative energies: `β → −1`.
    Lower,
}

impl Branch {
    pub fn sign(self) -> i64 {
        match self {
            Branch::Upper => 1,
            Branch::Lower => -1,
        }
    }
}

/// Maps an even Dirac label to the 2×2 block: `I → 1`, `β → ±1`, `Σ_k → σ_k`,
/// `βΣ_k → ±σ_k`. Odd labels have no image.
pub fn block_label(g: Gamma, branch: Branch) -> Option<(GaussianRational, Pauli)> {
    let s = GaussianRational::from_integer(branch.sign());
    if g == Gamma::I {
        return Some((GaussianRational::from_integer(1), Pauli::I));
    }
    if g == Gamma::BETA {
        return Some((s, Pauli::I));
    }
    for k in Axis::ALL {
        if g == Gamma::sigma(k) {
            return Some((GaussianRational::from_integer(1), Pauli::sigma(k)));
        }
        if g == Gamma::beta_sigma(k) {
            return Some((s, Pauli::sigma(k)));
        }
    }
    None
}

/// The two-component Hamiltonian split into its physical terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoComponentHamiltonian {
    pub branch: Branch,
    /// `±mc²`
    pub rest: OperatorSum<Pauli>,
    /// `−eV`
    pub potential: OperatorSum<Pauli>,
    /// `±Π²/2m`
    pub kinetic: OperatorSum<Pauli>,
    /// `±μσ·B`
    pub zeeman: OperatorSum<Pauli>,
    /// `∓(1/2mc²)(Π²/2m + μσ·B)²`, unexpanded
    pub mass_correction: EvenSquare<Pauli>,
    /// `(eħ/4m²c²)σ·(E×Π)`
    pub spin_orbit: OperatorSum<Pauli>,
    /// `(eħ²/8m²c²)(∇·E)`
    pub darwin: OperatorSum<Pauli>,
}

/// Names of the seven terms in display order.
pub const TERM_NAMES: [&str; 7] = ["rest", "potential", "kinetic", "zeeman", "mass_correction", "spin_orbit", "darwin"];

impl TwoComponentHamiltonian {
    /// Sum of all terms with the square expanded in operator order.
    pub fn total(&self) -> Result<OperatorSum<Pauli>, AlgebraError> {
        let mut acc = self.rest.clone();
        for part in [&self.potential, &self.kinetic, &self.zeeman, &self.spin_orbit, &self.darwin] {
            acc = acc.try_add(part)?;
        }
        acc.try_add(&self.mass_correction.expand()?)
    }

    pub fn assumptions(&self) -> Assumptions {
        self.rest.assumptions()
    }

    /// `(eħ/8m²c²) σ·(E×Π − Π×E)`, the explicitly Hermitian spin-orbit form.
    pub fn spin_orbit_symmetrized(&self) -> Result<OperatorSum<Pauli>, AlgebraError> {
        use crate::algebra::hamiltonian::spin_dot_cross;
        use crate::algebra::{Factor, Field};
        let a = self.assumptions();
        let e = |k| Factor::Field(Field::e(k));
        let diff = spin_dot_cross::<Pauli>(e, Factor::Pi, a).try_sub(&spin_dot_cross(Factor::Pi, e, a))?;
        Ok(diff.scale(&ConstantMonomial::new(GaussianRational::ratio(1, 8), Powers::new(1, 1, -2, -2))))
    }
}

fn has_electric(t: &OperatorTerm<Pauli>) -> bool {
    t.fields().any(|f| f.is_electric())
}

/// Reduces the even Hamiltonian of `report` to one diagonal block and splits
/// it into its physical terms.
pub fn two_component(report: &ExpansionReport, branch: Branch) -> Result<TwoComponentHamiltonian, FwError> {
    let h = &report.final_hamiltonian;
    let (_, odd) = h.even_odd_split();
    if let Some(d) = odd.max_c_degree() {
        return Err(FwError::OddResidue(d));
    }
    let block = h
        .map_labels(|g| block_label(g, branch))
        .ok_or_else(|| FwError::Unclassified("odd Dirac label in the even Hamiltonian".into()))?;

    let rest = block.filter(|t| t.c_degree() == 2);
    let potential = block.filter(|t| t.c_degree() == 0 && has_electric(t));
    let kinetic = block.filter(|t| t.c_degree() == 0 && !has_electric(t) && t.label == Pauli::I);
    let zeeman = block.filter(|t| t.c_degree() == 0 && !has_electric(t) && t.label != Pauli::I);
    let spin_orbit = block.filter(|t| t.c_degree() == -2 && has_electric(t) && t.label != Pauli::I);
    let darwin = block.filter(|t| t.c_degree() == -2 && has_electric(t) && t.label == Pauli::I);
    let quartic = block.filter(|t| t.c_degree() == -2 && !has_electric(t));

    let classified = [&rest, &potential, &kinetic, &zeeman, &spin_orbit, &darwin, &quartic]
        .iter()
        .map(|s| s.len())
        .sum::<usize>();
    if classified != block.len() {
        let stray = block.filter(|t| ![2, 0, -2].contains(&t.c_degree()));
        return Err(FwError::Unclassified(crate::algebra::render_plain(&stray)));
    }

    let rest_mono = rest
        .as_monomial()
        .ok_or_else(|| FwError::Unclassified("rest energy is not a constant".into()))?;
    // −1/(2·rest) · (kinetic + zeeman)²
    let prefactor = rest_mono
        .inverse()
        .ok_or_else(|| FwError::Unclassified("zero rest energy".into()))?
        .mul(&ConstantMonomial::new(GaussianRational::ratio(-1, 2), Powers::ONE));
    let mass_correction =
        EvenSquare { prefactor, prefix: Pauli::I, base: kinetic.try_add(&zeeman)? };
    let expanded = mass_correction.expand()?;
    if expanded != quartic {
        let diff = quartic.try_sub(&expanded)?;
        return Err(FwError::Unclassified(format!(
            "quartic terms differ from the squared Pauli operator by {}",
            crate::algebra::render_plain(&diff)
        )));
    }
    Ok(TwoComponentHamiltonian { branch, rest, potential, kinetic, zeeman, mass_correction, spin_orbit, darwin })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::hamiltonian::{dirac_hamiltonian, kinetic_odd, rest_energy};

    #[test]
    fn generator_degree_and_hermiticity() {
        let s = generator_from_odd(&kinetic_odd(), 1).unwrap();
        assert_eq!(s.generator.c_degrees().into_iter().collect::<Vec<_>>(), vec![-1]);
        assert!(s.generator.is_hermitian().unwrap());
        assert!(generator_from_odd(&rest_energy(), 1).is_err());
        assert!(generator_from_odd(&OperatorSum::zero(), 2).unwrap().is_zero());
    }

    #[test]
    fn zero_generator_is_identity() {
        let h = dirac_hamiltonian();
        let s = FWGenerator { generator: OperatorSum::zero(), stage: 1 };
        let (out, ledger) = bch_conjugate(&h, &s, 5).unwrap();
        assert_eq!(out, h);
        assert!(ledger.is_empty());
    }

    #[test]
    fn first_order_cancels_odd_term() {
        let s = generator_from_odd(&kinetic_odd(), 1).unwrap();
        let c = s.i_s().commutator(&rest_energy()).unwrap();
        assert_eq!(c, -&kinetic_odd());
    }

    #[test]
    fn reduction_runs_and_is_even() {
        let report = fw_reduce(&dirac_hamiltonian()).unwrap();
        assert!(report.final_hamiltonian.is_even());
        assert!(report.dropped.iter().all(|d| d.c_degree <= -3));
        assert!(report.stages[2].generator.is_zero());
        let upper = two_component(&report, Branch::Upper).unwrap();
        assert_eq!(upper.spin_orbit_symmetrized().unwrap(), upper.spin_orbit);
        two_component(&report, Branch::Lower).unwrap();
    }

    #[test]
    fn block_map_rejects_odd_labels() {
        assert!(block_label(Gamma::alpha(Axis::X), Branch::Upper).is_none());
        let (s, p) = block_label(Gamma::beta_sigma(Axis::Y), Branch::Lower).unwrap();
        assert_eq!((s, p), (GaussianRational::from_integer(-1), Pauli::sigma(Axis::Y)));
    }
}
