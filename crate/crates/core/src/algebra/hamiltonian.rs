//! Building blocks of the Dirac Hamiltonian `H = βmc² + U + O` and the
//! commutators that appear in its even expansion.

use super::label::SpinLabel;
use super::sum::OperatorSum;
use super::symbols::{Assumptions, ConstantMonomial, Factor, Field, Powers};
use super::AlgebraError;
use crate::dirac::{levi_civita, Axis, Gamma};
use crate::scalar::GaussianRational;

fn mono(num: i64, den: i64, powers: Powers) -> ConstantMonomial {
    ConstantMonomial::new(GaussianRational::ratio(num, den), powers)
}

fn word<L: SpinLabel>(coeff: ConstantMonomial, label: L, factors: &[Factor], a: Assumptions) -> OperatorSum<L> {
    OperatorSum::term_with(coeff, label, factors, a).expect("normal-ordered literal words never overflow")
}

/// `β m c²`.
pub fn rest_energy() -> OperatorSum {
    OperatorSum::label(Gamma::BETA).scale(&mono(1, 1, Powers::new(0, 0, 1, 2)))
}

/// `U = −e V`.
pub fn potential_energy() -> OperatorSum {
    OperatorSum::field(Field::V).scale(&mono(-1, 1, Powers::new(0, 1, 0, 0)))
}

/// `O = c α·Π`.
pub fn kinetic_odd() -> OperatorSum {
    alpha_dot(Factor::Pi).scale(&mono(1, 1, Powers::new(0, 0, 0, 1)))
}

/// `β m c² − e V + c α·Π`.
pub fn dirac_hamiltonian() -> OperatorSum {
    &(&rest_energy() + &potential_energy()) + &kinetic_odd()
}

/// `Σ_k α_k F_k` for a vector of factors.
pub fn alpha_dot(component: impl Fn(Axis) -> Factor) -> OperatorSum {
    let mut out = OperatorSum::zero();
    for k in Axis::ALL {
        out = &out + &word(ConstantMonomial::one(), Gamma::alpha(k), &[component(k)], Assumptions::NONE);
    }
    out
}

/// `Σ_k Π_k Π_k`.
pub fn pi_squared<L: SpinLabel>() -> OperatorSum<L> {
    let mut out = OperatorSum::zero();
    for k in Axis::ALL {
        out = &out + &word(ConstantMonomial::one(), L::IDENTITY, &[Factor::Pi(k), Factor::Pi(k)], Assumptions::NONE);
    }
    out
}

/// `Σ·B` with the label family's spin vector.
pub fn spin_dot_b<L: SpinLabel>() -> OperatorSum<L> {
    let mut out = OperatorSum::zero();
    for k in Axis::ALL {
        out = &out + &word(ConstantMonomial::one(), L::spin(k), &[Factor::Field(Field::b(k))], Assumptions::NONE);
    }
    out
}

/// `Σ·(X×Y) = ε_ljk Σ_l X_j Y_k` with the factors multiplied in the written order.
pub fn spin_dot_cross<L: SpinLabel>(
    x: impl Fn(Axis) -> Factor,
    y: impl Fn(Axis) -> Factor,
    assumptions: Assumptions,
) -> OperatorSum<L> {
    let mut out = OperatorSum::zero().with_assumptions(assumptions).expect("empty sum");
    for l in Axis::ALL {
        for j in Axis::ALL {
            for k in Axis::ALL {
                let eps = levi_civita(l, j, k);
                if eps == 0 {
                    continue;
                }
                out = &out + &word(mono(eps, 1, Powers::ONE), L::spin(l), &[x(j), y(k)], assumptions);
            }
        }
    }
    out
}

/// `Σ·(E×Π)`.
pub fn spin_orbit<L: SpinLabel>(assumptions: Assumptions) -> OperatorSum<L> {
    spin_dot_cross(|j| Factor::Field(Field::e(j)), Factor::Pi, assumptions)
}

/// `∇·E = Σ_k ∂_k E_k`.
pub fn div_e<L: SpinLabel>(assumptions: Assumptions) -> OperatorSum<L> {
    let mut out = OperatorSum::zero().with_assumptions(assumptions).expect("empty sum");
    for k in Axis::ALL {
        let f = Factor::Field(Field::e(k).derivative(k));
        out = &out + &word(ConstantMonomial::one(), L::IDENTITY, &[f], assumptions);
    }
    out
}

/// `Σ·(∇×E) = ε_ljk Σ_l ∂_j E_k`.
pub fn spin_dot_curl_e<L: SpinLabel>(assumptions: Assumptions) -> OperatorSum<L> {
    let mut out = OperatorSum::zero().with_assumptions(assumptions).expect("empty sum");
    for l in Axis::ALL {
        for j in Axis::ALL {
            for k in Axis::ALL {
                let eps = levi_civita(l, j, k);
                if eps != 0 {
                    let f = Factor::Field(Field::e(k).derivative(j));
                    out = &out + &word(mono(eps, 1, Powers::ONE), L::spin(l), &[f], assumptions);
                }
            }
        }
    }
    out
}

/// `O² / divisor` for a purely odd `O`.
pub fn square_even(odd: &OperatorSum, divisor: &ConstantMonomial) -> Result<OperatorSum, AlgebraError> {
    if !odd.is_odd() {
        return Err(AlgebraError::NotOdd);
    }
    let inv = divisor
        .inverse()
        .ok_or_else(|| AlgebraError::Unsupported("division by a zero monomial".into()))?;
    Ok(odd.mul(odd)?.scale(&inv))
}

/// `Π²/2m + μ Σ·B` with `μ = eħ/2m`: the even operator whose square forms the
/// quartic correction.
pub fn pauli_kinetic<L: SpinLabel>() -> OperatorSum<L> {
    let half_m = mono(1, 2, Powers::new(0, 0, -1, 0));
    let mu = mono(1, 2, Powers::new(1, 1, -1, 0));
    &pi_squared::<L>().scale(&half_m) + &spin_dot_b::<L>().scale(&mu)
}

/// `prefactor · prefix · base²`, kept unexpanded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvenSquare<L: SpinLabel = Gamma> {
    pub prefactor: ConstantMonomial,
    pub prefix: L,
    pub base: OperatorSum<L>,
}

impl<L: SpinLabel> EvenSquare<L> {
    /// Exact noncommutative expansion `prefactor · prefix · base · base`.
    pub fn expand(&self) -> Result<OperatorSum<L>, AlgebraError> {
        let sq = self.base.mul(&self.base)?;
        Ok(OperatorSum::label(self.prefix).mul(&sq)?.scale(&self.prefactor))
    }

    /// Binomial expansion `a² + 2ab + b²` of `(a + b)²`, where `a` is the
    /// spin-independent part of the base. Valid only when `a` and `b` commute,
    /// which requires a uniform magnetic field.
    pub fn expand_binomial(&self) -> Result<OperatorSum<L>, AlgebraError> {
        if !self.base.assumptions().uniform_b {
            return Err(AlgebraError::Unsupported(
                "binomial expansion of the even square requires a uniform magnetic field".into(),
            ));
        }
        let a = self.base.filter(|t| t.label == L::IDENTITY);
        let b = self.base.filter(|t| t.label != L::IDENTITY);
        let two = ConstantMonomial::new(GaussianRational::from_integer(2), Powers::ONE);
        let sq = &(&a.mul(&a)? + &a.mul(&b)?.scale(&two)) + &b.mul(&b)?;
        Ok(OperatorSum::label(self.prefix).mul(&sq)?.scale(&self.prefactor))
    }
}

/// `[α·Π, α·E]` evaluated through Dirac-matrix products.
pub fn double_commutator_ou(assumptions: Assumptions) -> Result<OperatorSum, AlgebraError> {
    let a_pi = alpha_dot(Factor::Pi).with_assumptions(assumptions)?;
    let a_e = alpha_dot(|k| Factor::Field(Field::e(k))).with_assumptions(assumptions)?;
    a_pi.commutator(&a_e)
}

/// `[α·Π, α·E]` evaluated through the vector identity
/// `(α·C)(α·D) = C·D + iΣ·(C×D)` with operator-valued `C, D`, i.e.
/// `Π·E − E·Π + iΣ·(Π×E − E×Π)`, never multiplying `α` matrices.
pub fn double_commutator_ou_vector_form(assumptions: Assumptions) -> Result<OperatorSum, AlgebraError> {
    let pi = Factor::Pi;
    let e = |k| Factor::Field(Field::e(k));
    let mut dots = OperatorSum::zero().with_assumptions(assumptions)?;
    for k in Axis::ALL {
        dots = dots.try_add(&OperatorSum::term_with(ConstantMonomial::one(), Gamma::I, &[pi(k), e(k)], assumptions)?)?;
        dots = dots.try_sub(&OperatorSum::term_with(ConstantMonomial::one(), Gamma::I, &[e(k), pi(k)], assumptions)?)?;
    }
    let crosses = spin_dot_cross::<Gamma>(pi, e, assumptions).try_sub(&spin_dot_cross(e, pi, assumptions))?;
    dots.try_add(&crosses.scale_by(&GaussianRational::i()))
}

/// Right side `−iħ(∇·E) + ħΣ·(∇×E) − 2iΣ·(E×Π)`; with `curl_free` the
/// middle term is omitted.
pub fn double_commutator_ou_expected(curl_free: bool) -> OperatorSum {
    let a = if curl_free { Assumptions::curl_free() } else { Assumptions::NONE };
    let hbar = Powers::new(1, 0, 0, 0);
    let minus_i_hbar = ConstantMonomial::new(-GaussianRational::i(), hbar);
    let minus_2i = ConstantMonomial::new(&GaussianRational::i() * &GaussianRational::from_integer(-2), Powers::ONE);
    let mut out = &div_e::<Gamma>(a).scale(&minus_i_hbar) + &spin_orbit::<Gamma>(a).scale(&minus_2i);
    if !curl_free {
        out = &out + &spin_dot_curl_e::<Gamma>(a).scale(&mono(1, 1, hbar));
    }
    out
}

/// Vector-route result minus the two-term form, which must be exactly `ħΣ·(∇×E)` without
/// assumptions on `E`.
pub fn curl_discrepancy() -> Result<OperatorSum, AlgebraError> {
    let full = double_commutator_ou_vector_form(Assumptions::NONE)?;
    let two_term = double_commutator_ou_expected(true).with_assumptions(Assumptions::NONE)?;
    full.try_sub(&two_term)
}

/// `ħ Σ·(∇×E)`.
pub fn hbar_spin_dot_curl_e(assumptions: Assumptions) -> OperatorSum {
    spin_dot_curl_e::<Gamma>(assumptions).scale(&mono(1, 1, Powers::new(1, 0, 0, 0)))
}
