//! Exact checks of the Dirac-matrix identities and of the two evaluations of
//! `[α·Π, α·E]`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::hamiltonian::{
    curl_discrepancy, double_commutator_ou, double_commutator_ou_expected, double_commutator_ou_vector_form,
    hbar_spin_dot_curl_e,
};
use crate::algebra::Assumptions;
use crate::dirac::{alpha, levi_civita, pauli_matrix, sigma, vector_identity, Axis, DiracMatrix};
use crate::scalar::GaussianRational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
}

impl IdentityCheck {
    fn new(name: &'static str) -> Self {
        Self { name, passed: 0, failed: 0 }
    }

    fn record(&mut self, ok: bool) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.failed == 0)
    }

    pub fn passed(&self) -> usize {
        self.checks.iter().map(|c| c.passed).sum()
    }

    pub fn failed(&self) -> usize {
        self.checks.iter().map(|c| c.failed).sum()
    }
}

fn eps_sigma(k: Axis, j: Axis, scale: GaussianRational) -> DiracMatrix {
    Axis::ALL.iter().fold(DiracMatrix::zero(), |acc, &l| {
        let e = levi_civita(k, j, l);
        if e == 0 {
            acc
        } else {
            &acc + &sigma(l).scale(&(&scale * &GaussianRational::from_integer(e)))
        }
    })
}

/// A random rational in `[-bound, bound]` with denominator up to `bound`.
pub fn random_rational(rng: &mut impl Rng, bound: i64) -> BigRational {
    let num = rng.gen_range(-bound * bound..=bound * bound);
    let den = rng.gen_range(1..=bound);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn random_vector(rng: &mut impl Rng, bound: i64) -> [BigRational; 3] {
    std::array::from_fn(|_| random_rational(rng, bound))
}

/// Runs every identity; `random_pairs` extra vector pairs for `(α·C)(α·D)`.
pub fn identity_suite(random_pairs: usize, seed: u64) -> IdentityReport {
    let i = GaussianRational::i();
    let mut checks = Vec::new();

    let mut block = IdentityCheck::new("Σ_k = diag(σ_k, σ_k)");
    for k in Axis::ALL {
        let s = pauli_matrix(k.index() + 1);
        let expected = DiracMatrix::from_fn(|r, c| {
            if r / 2 == c / 2 { s[r % 2][c % 2].clone() } else { GaussianRational::zero() }
        });
        block.record(sigma(k) == expected);
    }
    checks.push(block);

    let mut product = IdentityCheck::new("α_k α_j = δ_kj + iε_kjl Σ_l");
    let mut commutator = IdentityCheck::new("[α_k, α_j] = −2iε_jkl Σ_l");
    for k in Axis::ALL {
        for j in Axis::ALL {
            let delta = if k == j { DiracMatrix::identity() } else { DiracMatrix::zero() };
            product.record(alpha(k).product(&alpha(j)) == &delta + &eps_sigma(k, j, i.clone()));
            let minus_2i = &i * &GaussianRational::from_integer(-2);
            commutator.record(alpha(k).commutator(&alpha(j)) == eps_sigma(j, k, minus_2i));
        }
    }
    checks.push(product);
    checks.push(commutator);

    let mut vector = IdentityCheck::new("(α·C)(α·D) = C·D + iΣ·(C×D)");
    let unit = |a: Axis| -> [BigRational; 3] {
        std::array::from_fn(|n| BigRational::from_integer(BigInt::from(i64::from(n == a.index()))))
    };
    for a in Axis::ALL {
        for b in Axis::ALL {
            vector.record(vector_identity(&unit(a), &unit(b)).is_ok());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random_pairs {
        let c = random_vector(&mut rng, 9);
        let d = random_vector(&mut rng, 9);
        vector.record(vector_identity(&c, &d).is_ok());
    }
    checks.push(vector);

    let mut routes = IdentityCheck::new("[α·Π, α·E]: α-product route = vector route");
    for assumptions in [Assumptions::NONE, Assumptions::curl_free()] {
        let agree = match (double_commutator_ou(assumptions), double_commutator_ou_vector_form(assumptions)) {
            (Ok(a), Ok(b)) => a == b && a == double_commutator_ou_expected(assumptions.curl_free_e),
            _ => false,
        };
        routes.record(agree);
    }
    checks.push(routes);

    let mut curl = IdentityCheck::new("route difference = ħΣ·(∇×E), zero when curl-free");
    curl.record(curl_discrepancy().is_ok_and(|d| d == hbar_spin_dot_curl_e(Assumptions::NONE)));
    curl.record(hbar_spin_dot_curl_e(Assumptions::curl_free()).is_zero());
    checks.push(curl);

    IdentityReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes() {
        let report = identity_suite(20, 7);
        assert!(report.all_passed(), "{report:?}");
        assert_eq!(report.passed(), 3 + 9 + 9 + 9 + 20 + 2 + 2);
    }
}
