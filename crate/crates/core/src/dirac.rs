//! Exact 4×4 Dirac matrices in the standard (Dirac) representation.
//!
//! `β = diag(I₂, −I₂)`, `α_k = [[0, σ_k], [σ_k, 0]]`, `Σ_k = diag(σ_k, σ_k)`.
//! The sixteen-element basis used for canonical decomposition is, in order,
//!
//! ```text
//! I, β, α_x, α_y, α_z, Σ_x, Σ_y, Σ_z, βα_x, βα_y, βα_z, βΣ_x, βΣ_y, βΣ_z, γ5, βγ5
//! ```
//!
//! with `γ5 = [[0, I₂], [I₂, 0]]`. Every element is a phase times a Kronecker
//! product `τ_a ⊗ σ_b`, so the basis is orthogonal under `tr(A†B)` and products of
//! basis elements are again basis elements up to a phase in `{±1, ±i}`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalar::GaussianRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Axis {
        Self::ALL[i]
    }

    pub fn letter(self) -> char {
        ['x', 'y', 'z'][self.index()]
    }

    pub fn from_letter(c: char) -> Option<Axis> {
        match c {
            'x' => Some(Axis::X),
            'y' => Some(Axis::Y),
            'z' => Some(Axis::Z),
            _ => None,
        }
    }
}

/// Levi-Civita symbol `ε_ijk`.
pub fn levi_civita(i: Axis, j: Axis, k: Axis) -> i64 {
    let (i, j, k) = (i.index() as i64, j.index() as i64, k.index() as i64);
    (i - j) * (j - k) * (k - i) / 2
}

/// The axis completing `(i, j)` to a permutation, if `i ≠ j`.
pub fn third_axis(i: Axis, j: Axis) -> Option<Axis> {
    if i == j {
        None
    } else {
        Some(Axis::from_index(3 - i.index() - j.index()))
    }
}

/// Unit phases produced by products of basis elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    One,
    I,
    MinusOne,
    MinusI,
}

impl Phase {
    pub fn to_scalar(self) -> GaussianRational {
        match self {
            Phase::One => GaussianRational::one(),
            Phase::I => GaussianRational::i(),
            Phase::MinusOne => -GaussianRational::one(),
            Phase::MinusI => -GaussianRational::i(),
        }
    }

    fn from_scalar(z: &GaussianRational) -> Option<Phase> {
        [Phase::One, Phase::I, Phase::MinusOne, Phase::MinusI]
            .into_iter()
            .find(|p| &p.to_scalar() == z)
    }

    pub fn mul(self, other: Phase) -> Phase {
        let idx = |p: Phase| match p {
            Phase::One => 0,
            Phase::I => 1,
            Phase::MinusOne => 2,
            Phase::MinusI => 3,
        };
        [Phase::One, Phase::I, Phase::MinusOne, Phase::MinusI][(idx(self) + idx(other)) % 4]
    }
}

/// Exact 4×4 complex matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DiracMatrix {
    pub entries: [[GaussianRational; 4]; 4],
}

impl DiracMatrix {
    pub fn zero() -> Self {
        Self { entries: std::array::from_fn(|_| std::array::from_fn(|_| GaussianRational::zero())) }
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.entries[i][i] = GaussianRational::one();
        }
        m
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> GaussianRational) -> Self {
        Self { entries: std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))) }
    }

    /// Kronecker product `outer ⊗ inner` of two 2×2 matrices.
    fn kron(outer: &Mat2, inner: &Mat2) -> Self {
        Self::from_fn(|i, j| &outer[i / 2][j / 2] * &inner[i % 2][j % 2])
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        Self::from_fn(|i, j| &self.entries[i][j] * s)
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(|i, j| self.entries[j][i].conj())
    }

    pub fn trace(&self) -> GaussianRational {
        (0..4).fold(GaussianRational::zero(), |acc, i| &acc + &self.entries[i][i])
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Zero::is_zero)
    }

    pub fn is_hermitian(&self) -> bool {
        *self == self.adjoint()
    }

    /// Exact matrix product.
    pub fn product(&self, other: &DiracMatrix) -> DiracMatrix {
        Self::from_fn(|i, j| {
            (0..4).fold(GaussianRational::zero(), |acc, k| {
                &acc + &(&self.entries[i][k] * &other.entries[k][j])
            })
        })
    }

    /// `AB − BA`.
    pub fn commutator(&self, other: &DiracMatrix) -> DiracMatrix {
        &self.product(other) - &other.product(self)
    }

    /// `AB + BA`.
    pub fn anticommutator(&self, other: &DiracMatrix) -> DiracMatrix {
        &self.product(other) + &other.product(self)
    }
}

impl<'a> Add<&'a DiracMatrix> for &'a DiracMatrix {
    type Output = DiracMatrix;
    fn add(self, rhs: &DiracMatrix) -> DiracMatrix {
        DiracMatrix::from_fn(|i, j| &self.entries[i][j] + &rhs.entries[i][j])
    }
}

impl<'a> Sub<&'a DiracMatrix> for &'a DiracMatrix {
    type Output = DiracMatrix;
    fn sub(self, rhs: &DiracMatrix) -> DiracMatrix {
        DiracMatrix::from_fn(|i, j| &self.entries[i][j] - &rhs.entries[i][j])
    }
}

impl<'a> Mul<&'a DiracMatrix> for &'a DiracMatrix {
    type Output = DiracMatrix;
    fn mul(self, rhs: &DiracMatrix) -> DiracMatrix {
        self.product(rhs)
    }
}

impl Neg for &DiracMatrix {
    type Output = DiracMatrix;
    fn neg(self) -> DiracMatrix {
        DiracMatrix::from_fn(|i, j| -&self.entries[i][j])
    }
}

impl fmt::Debug for DiracMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|z| z.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

type Mat2 = [[GaussianRational; 2]; 2];

fn mat2(entries: [[(i64, i64); 2]; 2]) -> Mat2 {
    entries.map(|row| {
        row.map(|(re, im)| {
            GaussianRational::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
        })
    })
}

/// Pauli matrix `σ_0 = I` or `σ_k` for `k = 1, 2, 3`.
pub fn pauli_matrix(index: usize) -> Mat2 {
    match index {
        0 => mat2([[(1, 0), (0, 0)], [(0, 0), (1, 0)]]),
        1 => mat2([[(0, 0), (1, 0)], [(1, 0), (0, 0)]]),
        2 => mat2([[(0, 0), (0, -1)], [(0, 1), (0, 0)]]),
        3 => mat2([[(1, 0), (0, 0)], [(0, 0), (-1, 0)]]),
        _ => panic!("Pauli index out of range: {index}"),
    }
}

/// Label of one of the sixteen basis matrices.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gamma(u8);

/// Whether a matrix commutes (even) or anticommutes (odd) with `β`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

const GAMMA_NAMES: [&str; 16] = [
    "I", "β", "α_x", "α_y", "α_z", "Σ_x", "Σ_y", "Σ_z", "βα_x", "βα_y", "βα_z", "βΣ_x", "βΣ_y",
    "βΣ_z", "γ5", "βγ5",
];

const GAMMA_ASCII: [&str; 16] = [
    "I", "beta", "alpha_x", "alpha_y", "alpha_z", "Sigma_x", "Sigma_y", "Sigma_z", "betaalpha_x",
    "betaalpha_y", "betaalpha_z", "betaSigma_x", "betaSigma_y", "betaSigma_z", "gamma5",
    "betagamma5",
];

const GAMMA_LATEX: [&str; 16] = [
    "", "\\beta", "\\alpha_x", "\\alpha_y", "\\alpha_z", "\\Sigma_x", "\\Sigma_y", "\\Sigma_z",
    "\\beta\\alpha_x", "\\beta\\alpha_y", "\\beta\\alpha_z", "\\beta\\Sigma_x", "\\beta\\Sigma_y",
    "\\beta\\Sigma_z", "\\gamma_5", "\\beta\\gamma_5",
];

impl Gamma {
    pub const I: Gamma = Gamma(0);
    pub const BETA: Gamma = Gamma(1);
    pub const GAMMA5: Gamma = Gamma(14);
    pub const BETA_GAMMA5: Gamma = Gamma(15);

    pub fn alpha(k: Axis) -> Gamma {
        Gamma(2 + k.index() as u8)
    }

    pub fn sigma(k: Axis) -> Gamma {
        Gamma(5 + k.index() as u8)
    }

    pub fn beta_alpha(k: Axis) -> Gamma {
        Gamma(8 + k.index() as u8)
    }

    pub fn beta_sigma(k: Axis) -> Gamma {
        Gamma(11 + k.index() as u8)
    }

    pub fn all() -> impl Iterator<Item = Gamma> {
        (0..16u8).map(Gamma)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn from_index(i: usize) -> Option<Gamma> {
        (i < 16).then_some(Gamma(i as u8))
    }

    pub fn name(self) -> &'static str {
        GAMMA_NAMES[self.index()]
    }

    pub fn latex(self) -> &'static str {
        GAMMA_LATEX[self.index()]
    }

    pub fn from_name(s: &str) -> Option<Gamma> {
        GAMMA_NAMES
            .iter()
            .position(|n| *n == s)
            .or_else(|| GAMMA_ASCII.iter().position(|n| *n == s))
            .map(|i| Gamma(i as u8))
    }

    pub fn matrix(self) -> &'static DiracMatrix {
        &tables().basis.elements[self.index()]
    }

    /// `self · other = phase · label`.
    pub fn mul(self, other: Gamma) -> (Phase, Gamma) {
        tables().products[self.index()][other.index()]
    }

    pub fn parity(self) -> Parity {
        tables().parity[self.index()]
    }

    /// `+1` for Hermitian basis elements, `−1` for anti-Hermitian ones.
    pub fn adjoint_sign(self) -> i64 {
        tables().adjoint_sign[self.index()]
    }
}

impl fmt::Debug for Gamma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for Gamma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The sixteen basis matrices with their labels.
#[derive(Debug, Clone)]
pub struct GammaBasis {
    pub elements: Vec<DiracMatrix>,
    pub labels: Vec<&'static str>,
}

pub fn beta() -> DiracMatrix {
    DiracMatrix::kron(&pauli_matrix(3), &pauli_matrix(0))
}

pub fn alpha(k: Axis) -> DiracMatrix {
    DiracMatrix::kron(&pauli_matrix(1), &pauli_matrix(k.index() + 1))
}

pub fn sigma(k: Axis) -> DiracMatrix {
    DiracMatrix::kron(&pauli_matrix(0), &pauli_matrix(k.index() + 1))
}

pub fn gamma5() -> DiracMatrix {
    DiracMatrix::kron(&pauli_matrix(1), &pauli_matrix(0))
}

/// Builds `β, α_k, Σ_k` and completes them to the sixteen-element basis in the
/// fixed order documented at module level.
pub fn build_basis() -> GammaBasis {
    let b = beta();
    let mut elements = vec![DiracMatrix::identity(), b.clone()];
    elements.extend(Axis::ALL.map(alpha));
    elements.extend(Axis::ALL.map(sigma));
    elements.extend(Axis::ALL.map(|k| b.product(&alpha(k))));
    elements.extend(Axis::ALL.map(|k| b.product(&sigma(k))));
    elements.push(gamma5());
    elements.push(b.product(&gamma5()));
    GammaBasis { elements, labels: GAMMA_NAMES.to_vec() }
}

impl GammaBasis {
    /// Unique coefficients `c_i` with `M = Σ c_i Γ_i`.
    ///
    /// Uses orthogonality `tr(Γ_i† Γ_j) = 4 δ_ij`.
    pub fn decompose(&self, m: &DiracMatrix) -> Vec<GaussianRational> {
        let quarter = GaussianRational::ratio(1, 4);
        self.elements
            .iter()
            .map(|g| &g.adjoint().product(m).trace() * &quarter)
            .collect()
    }

    pub fn recompose(&self, coefficients: &[GaussianRational]) -> DiracMatrix {
        assert_eq!(coefficients.len(), self.elements.len());
        self.elements
            .iter()
            .zip(coefficients)
            .fold(DiracMatrix::zero(), |acc, (g, c)| &acc + &g.scale(c))
    }
}

/// `decompose` against the canonical basis.
pub fn decompose(m: &DiracMatrix) -> Vec<GaussianRational> {
    tables().basis.decompose(m)
}

/// `α·v` for a rational 3-vector.
pub fn alpha_dot(v: &[BigRational; 3]) -> DiracMatrix {
    Axis::ALL.iter().fold(DiracMatrix::zero(), |acc, &k| {
        &acc + &alpha(k).scale(&GaussianRational::real(v[k.index()].clone()))
    })
}

/// `(C·D) I + i Σ·(C×D)`.
pub fn vector_identity_rhs(c: &[BigRational; 3], d: &[BigRational; 3]) -> DiracMatrix {
    let dot = (0..3).fold(BigRational::zero(), |acc, k| acc + &c[k] * &d[k]);
    let cross = [
        &c[1] * &d[2] - &c[2] * &d[1],
        &c[2] * &d[0] - &c[0] * &d[2],
        &c[0] * &d[1] - &c[1] * &d[0],
    ];
    let mut out = DiracMatrix::identity().scale(&GaussianRational::real(dot));
    for k in Axis::ALL {
        let coeff = GaussianRational::imag(cross[k.index()].clone());
        out = &out + &sigma(k).scale(&coeff);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiracError {
    #[error("(α·C)(α·D) differs from (C·D) + iΣ·(C×D)")]
    VectorIdentityViolated,
}

/// Computes `(α·C)(α·D)` and checks it against `(C·D) I + iΣ·(C×D)`.
pub fn vector_identity(c: &[BigRational; 3], d: &[BigRational; 3]) -> Result<DiracMatrix, DiracError> {
    let lhs = alpha_dot(c).product(&alpha_dot(d));
    if lhs == vector_identity_rhs(c, d) {
        Ok(lhs)
    } else {
        Err(DiracError::VectorIdentityViolated)
    }
}

struct Tables {
    basis: GammaBasis,
    products: [[(Phase, Gamma); 16]; 16],
    parity: [Parity; 16],
    adjoint_sign: [i64; 16],
}

fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let basis = build_basis();
        let b = beta();
        let products = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let m = basis.elements[i].product(&basis.elements[j]);
                let coeffs = basis.decompose(&m);
                let (idx, c) = coeffs
                    .iter()
                    .enumerate()
                    .find(|(_, c)| !c.is_zero())
                    .expect("product of invertible matrices is nonzero");
                let phase = Phase::from_scalar(c).expect("basis closes under products up to a phase");
                (phase, Gamma(idx as u8))
            })
        });
        let parity = std::array::from_fn(|i| {
            let g = &basis.elements[i];
            if g.commutator(&b).is_zero() {
                Parity::Even
            } else if g.anticommutator(&b).is_zero() {
                Parity::Odd
            } else {
                unreachable!("basis element neither commutes nor anticommutes with β")
            }
        });
        let adjoint_sign = std::array::from_fn(|i| {
            let g = &basis.elements[i];
            if g.is_hermitian() { 1 } else { -1 }
        });
        Tables { basis, products, parity, adjoint_sign }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn i_times(m: &DiracMatrix) -> DiracMatrix {
        m.scale(&GaussianRational::i())
    }

    #[test]
    fn sigma_z_is_diag() {
        let expected = DiracMatrix::from_fn(|i, j| {
            if i != j {
                GaussianRational::zero()
            } else if i % 2 == 0 {
                GaussianRational::one()
            } else {
                -GaussianRational::one()
            }
        });
        assert_eq!(sigma(Axis::Z), expected);
    }

    #[test]
    fn squares_and_anticommutators() {
        let id = DiracMatrix::identity();
        assert_eq!(beta().product(&beta()), id);
        for k in Axis::ALL {
            assert_eq!(alpha(k).product(&alpha(k)), id);
            assert_eq!(sigma(k).product(&sigma(k)), id);
            assert!(beta().anticommutator(&alpha(k)).is_zero());
        }
    }

    #[test]
    fn pauli_products() {
        assert_eq!(alpha(Axis::X).product(&alpha(Axis::Y)), i_times(&sigma(Axis::Z)));
        assert_eq!(sigma(Axis::X).product(&sigma(Axis::Y)), i_times(&sigma(Axis::Z)));
        assert_eq!(alpha(Axis::Z).product(&alpha(Axis::Z)), DiracMatrix::identity());
    }

    #[test]
    fn commutator_examples() {
        let two_i = GaussianRational::new(BigRational::zero(), BigRational::from_integer(2.into()));
        assert_eq!(alpha(Axis::X).commutator(&alpha(Axis::Y)), sigma(Axis::Z).scale(&two_i));
        assert!(beta().commutator(&sigma(Axis::Z)).is_zero());
        let ba = beta().product(&alpha(Axis::X));
        assert_eq!(beta().commutator(&alpha(Axis::X)), ba.scale(&GaussianRational::from_integer(2)));
    }

    #[test]
    fn basis_is_orthogonal() {
        let basis = build_basis();
        for (i, a) in basis.elements.iter().enumerate() {
            for (j, b) in basis.elements.iter().enumerate() {
                let t = a.adjoint().product(b).trace();
                let expected = if i == j { GaussianRational::from_integer(4) } else { GaussianRational::zero() };
                assert_eq!(t, expected, "tr(Γ{i}† Γ{j})");
            }
        }
    }

    #[test]
    fn parity_and_hermiticity_of_named_elements() {
        assert_eq!(Gamma::BETA.parity(), Parity::Even);
        for k in Axis::ALL {
            assert_eq!(Gamma::alpha(k).parity(), Parity::Odd);
            assert_eq!(Gamma::sigma(k).parity(), Parity::Even);
            assert_eq!(Gamma::beta_alpha(k).adjoint_sign(), -1);
            assert!(alpha(k).is_hermitian() && sigma(k).is_hermitian());
        }
        assert!(beta().is_hermitian());
        assert_eq!(Gamma::GAMMA5.parity(), Parity::Odd);
    }

    #[test]
    fn label_products_match_matrices() {
        for a in Gamma::all() {
            for b in Gamma::all() {
                let (phase, c) = a.mul(b);
                assert_eq!(a.matrix().product(b.matrix()), c.matrix().scale(&phase.to_scalar()));
            }
        }
    }

    #[test]
    fn names_round_trip() {
        for g in Gamma::all() {
            assert_eq!(Gamma::from_name(g.name()), Some(g));
        }
        assert_eq!(Gamma::from_name("Sigma_y"), Some(Gamma::sigma(Axis::Y)));
    }

    #[test]
    fn levi_civita_signs() {
        assert_eq!(levi_civita(Axis::X, Axis::Y, Axis::Z), 1);
        assert_eq!(levi_civita(Axis::Y, Axis::X, Axis::Z), -1);
        assert_eq!(levi_civita(Axis::Z, Axis::X, Axis::Y), 1);
        assert_eq!(levi_civita(Axis::X, Axis::X, Axis::Z), 0);
    }
}
