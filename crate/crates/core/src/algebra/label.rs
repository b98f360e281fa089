use std::fmt;
use std::hash::Hash;

use crate::dirac::{levi_civita, third_axis, Axis, Gamma, Phase};

/// Spin-space matrix labels an operator term can carry.
///
/// Implemented by the 4×4 [`Gamma`] basis and the 2×2 [`Pauli`] basis.
pub trait SpinLabel: Copy + Ord + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static {
    const IDENTITY: Self;

    /// `self · other = phase · label`.
    fn product(self, other: Self) -> (Phase, Self);

    /// `+1` when the basis matrix is Hermitian, `−1` when anti-Hermitian.
    fn adjoint_sign(self) -> i64;

    fn symbol(self) -> &'static str;

    fn latex(self) -> &'static str;

    fn from_symbol(s: &str) -> Option<Self>;

    /// Component `k` of the spin vector (`Σ_k` or `σ_k`).
    fn spin(k: Axis) -> Self;

    /// Labels used as scalar-like prefixes when grouping output (`I`, and `β` for Dirac).
    fn prefixes() -> &'static [Self];

    /// Symbol of the spin vector, used by grouped rendering (`Σ` or `σ`).
    fn spin_vector_symbol(latex: bool) -> &'static str;

    /// Component `k` of the odd velocity vector `α`, if the family has one.
    fn alpha(_k: Axis) -> Option<Self> {
        None
    }
}

impl SpinLabel for Gamma {
    const IDENTITY: Self = Gamma::I;

    fn product(self, other: Self) -> (Phase, Self) {
        self.mul(other)
    }

    fn adjoint_sign(self) -> i64 {
        Gamma::adjoint_sign(self)
    }

    fn symbol(self) -> &'static str {
        self.name()
    }

    fn latex(self) -> &'static str {
        Gamma::latex(self)
    }

    fn from_symbol(s: &str) -> Option<Self> {
        Gamma::from_name(s)
    }

    fn spin(k: Axis) -> Self {
        Gamma::sigma(k)
    }

    fn prefixes() -> &'static [Self] {
        &[Gamma::I, Gamma::BETA]
    }

    fn spin_vector_symbol(latex: bool) -> &'static str {
        if latex { "\\mathbf{\\Sigma}" } else { "Σ" }
    }

    fn alpha(k: Axis) -> Option<Self> {
        Some(Gamma::alpha(k))
    }
}

/// `σ_0 = I, σ_x, σ_y, σ_z` acting on two-component spinors.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pauli(u8);

const PAULI_NAMES: [&str; 4] = ["I", "σ_x", "σ_y", "σ_z"];
const PAULI_ASCII: [&str; 4] = ["I", "sigma_x", "sigma_y", "sigma_z"];
const PAULI_LATEX: [&str; 4] = ["", "\\sigma_x", "\\sigma_y", "\\sigma_z"];

impl Pauli {
    pub const I: Pauli = Pauli(0);

    pub fn sigma(k: Axis) -> Pauli {
        Pauli(1 + k.index() as u8)
    }

    pub fn axis(self) -> Option<Axis> {
        (self.0 > 0).then(|| Axis::from_index(self.0 as usize - 1))
    }
}

impl fmt::Debug for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(PAULI_NAMES[self.0 as usize])
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(PAULI_NAMES[self.0 as usize])
    }
}

impl SpinLabel for Pauli {
    const IDENTITY: Self = Pauli::I;

    fn product(self, other: Self) -> (Phase, Self) {
        match (self.axis(), other.axis()) {
            (None, _) => (Phase::One, other),
            (_, None) => (Phase::One, self),
            (Some(a), Some(b)) if a == b => (Phase::One, Pauli::I),
            (Some(a), Some(b)) => {
                let c = third_axis(a, b).expect("distinct axes");
                let phase = if levi_civita(a, b, c) > 0 { Phase::I } else { Phase::MinusI };
                (phase, Pauli::sigma(c))
            }
        }
    }

    fn adjoint_sign(self) -> i64 {
        1
    }

    fn symbol(self) -> &'static str {
        PAULI_NAMES[self.0 as usize]
    }

    fn latex(self) -> &'static str {
        PAULI_LATEX[self.0 as usize]
    }

    fn from_symbol(s: &str) -> Option<Self> {
        PAULI_NAMES
            .iter()
            .position(|n| *n == s)
            .or_else(|| PAULI_ASCII.iter().position(|n| *n == s))
            .map(|i| Pauli(i as u8))
    }

    fn spin(k: Axis) -> Self {
        Pauli::sigma(k)
    }

    fn prefixes() -> &'static [Self] {
        &[Pauli::I]
    }

    fn spin_vector_symbol(latex: bool) -> &'static str {
        if latex { "\\boldsymbol{\\sigma}" } else { "σ" }
    }
}
