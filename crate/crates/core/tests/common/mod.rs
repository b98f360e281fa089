//! Independent oracles shared by the integration tests. Nothing here calls
//! into the algebra engine beyond reading its data types.
#![allow(dead_code)]

use std::collections::BTreeMap;

use fwexpand::algebra::{Factor, Field, FieldBase, OperatorSum, SpinLabel};
use fwexpand::dirac::{Axis, DiracMatrix};
use fwexpand::scalar::GaussianRational;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub fn gr(num: i64, den: i64) -> GaussianRational {
    GaussianRational::ratio(num, den)
}

pub fn q(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn i_unit() -> GaussianRational {
    GaussianRational::i()
}

// ---------------------------------------------------------------------------
// 4×4 matrices as plain arrays

pub type M4 = [[GaussianRational; 4]; 4];

pub fn m4_mul(a: &M4, b: &M4) -> M4 {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (0..4).fold(GaussianRational::zero(), |acc, k| &acc + &(&a[i][k] * &b[k][j])))
    })
}

/// Block-diagonal `diag(s, s)` from a 2×2 block written out by hand.
pub fn block_diag(s: [[(i64, i64); 2]; 2]) -> M4 {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            if i / 2 == j / 2 {
                let (re, im) = s[i % 2][j % 2];
                GaussianRational::new(q(re, 1), q(im, 1))
            } else {
                GaussianRational::zero()
            }
        })
    })
}

pub const PAULI_X: [[(i64, i64); 2]; 2] = [[(0, 0), (1, 0)], [(1, 0), (0, 0)]];
pub const PAULI_Y: [[(i64, i64); 2]; 2] = [[(0, 0), (0, -1)], [(0, 1), (0, 0)]];
pub const PAULI_Z: [[(i64, i64); 2]; 2] = [[(1, 0), (0, 0)], [(0, 0), (-1, 0)]];

pub fn to_m4(m: &DiracMatrix) -> M4 {
    m.entries.clone()
}

/// Solves the dense system `A x = b` over Gaussian rationals by elimination.
pub fn solve_exact(mut a: Vec<Vec<GaussianRational>>, mut b: Vec<GaussianRational>) -> Option<Vec<GaussianRational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].inv()?;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = &a[r][col] * &inv;
                for c in col..n {
                    let d = &f * &a[col][c];
                    a[r][c] -= &d;
                }
                let d = &f * &b[col];
                b[r] -= &d;
            }
        }
    }
    Some((0..n).map(|i| &b[i] * &a[i][i].inv().unwrap()).collect())
}

// ---------------------------------------------------------------------------
// Polynomials in (x, y, z) and concrete fields

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Poly(pub BTreeMap<[u32; 3], GaussianRational>);

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::term(c, [0, 0, 0])
    }

    pub fn term(c: GaussianRational, powers: [u32; 3]) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.0.insert(powers, c);
        }
        p
    }

    pub fn var(axis: usize) -> Self {
        let mut powers = [0; 3];
        powers[axis] = 1;
        Self::term(GaussianRational::one(), powers)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (k, v) in &other.0 {
            let entry = out.0.entry(*k).or_insert_with(GaussianRational::zero);
            *entry += v;
            if entry.is_zero() {
                out.0.remove(k);
            }
        }
        out
    }

    pub fn scale(&self, c: &GaussianRational) -> Poly {
        let mut out = Poly::zero();
        for (k, v) in &self.0 {
            let p = v * c;
            if !p.is_zero() {
                out.0.insert(*k, p);
            }
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ka, va) in &self.0 {
            for (kb, vb) in &other.0 {
                let k = [ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2]];
                out = out.add(&Poly::term(va * vb, k));
            }
        }
        out
    }

    pub fn deriv(&self, axis: usize) -> Poly {
        let mut out = Poly::zero();
        for (k, v) in &self.0 {
            if k[axis] > 0 {
                let mut kk = *k;
                kk[axis] -= 1;
                out = out.add(&Poly::term(v * &GaussianRational::from_integer(i64::from(k[axis])), kk));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

/// Explicit `V(r)`, `A(r)` and numeric values of `ħ, e, m, c`. `Π = −iħ∇ + eA`,
/// `E = −∇V`, `B = ∇×A`.
pub struct Concrete {
    pub v: Poly,
    pub a: [Poly; 3],
    pub hbar: GaussianRational,
    pub e: GaussianRational,
    pub m: GaussianRational,
    pub c: GaussianRational,
}

impl Concrete {
    /// Cubic `V` and a non-uniform divergence-free `B`.
    pub fn generic() -> Self {
        let x = Poly::var(0);
        let y = Poly::var(1);
        let z = Poly::var(2);
        let v = x.mul(&x).scale(&gr(3, 2)).add(&y.mul(&y).scale(&gr(-1, 3))).add(&x.mul(&y).mul(&z).scale(&gr(2, 1)));
        let a = [
            y.scale(&gr(-5, 2)).add(&y.mul(&z).mul(&z)),
            x.mul(&x).scale(&gr(1, 2)).add(&z.scale(&gr(3, 1))),
            x.mul(&y).scale(&gr(-1, 1)),
        ];
        Self { v, a, hbar: gr(2, 1), e: gr(3, 1), m: gr(5, 1), c: gr(7, 1) }
    }

    /// `V = (k/2)(x² + y²)`, `A = (−By, 0, 0)`.
    pub fn harmonic_uniform(k: GaussianRational, b: GaussianRational) -> Self {
        let x = Poly::var(0);
        let y = Poly::var(1);
        let half_k = &k * &gr(1, 2);
        let v = x.mul(&x).add(&y.mul(&y)).scale(&half_k);
        let a = [y.scale(&-b), Poly::zero(), Poly::zero()];
        Self { v, a, hbar: gr(2, 1), e: gr(3, 1), m: gr(5, 1), c: gr(7, 1) }
    }

    pub fn field(&self, f: Field) -> Poly {
        let mut p = match f.base {
            FieldBase::V => self.v.clone(),
            FieldBase::E(k) => self.v.deriv(k.index()).scale(&gr(-1, 1)),
            FieldBase::B(k) => {
                let (i, j) = ((k.index() + 1) % 3, (k.index() + 2) % 3);
                self.a[j].deriv(i).add(&self.a[i].deriv(j).scale(&gr(-1, 1)))
            }
        };
        for axis in Axis::ALL {
            for _ in 0..f.deriv.count(axis) {
                p = p.deriv(axis.index());
            }
        }
        p
    }

    pub fn apply_factor(&self, f: Factor, psi: &Poly) -> Poly {
        match f {
            Factor::Field(field) => self.field(field).mul(psi),
            Factor::Pi(k) => {
                let minus_i_hbar = &(-GaussianRational::i()) * &self.hbar;
                psi.deriv(k.index()).scale(&minus_i_hbar).add(&self.a[k.index()].mul(psi).scale(&self.e))
            }
        }
    }

    /// Applies the word right to left.
    pub fn apply_word(&self, word: &[Factor], psi: &Poly) -> Poly {
        word.iter().rev().fold(psi.clone(), |acc, &f| self.apply_factor(f, &acc))
    }

    fn power(base: &GaussianRational, exp: i32) -> GaussianRational {
        let p = base.pow(exp.unsigned_abs());
        if exp < 0 { p.inv().unwrap() } else { p }
    }

    pub fn constant(&self, powers: fwexpand::algebra::Powers) -> GaussianRational {
        [(&self.hbar, powers.hbar), (&self.e, powers.e), (&self.m, powers.m), (&self.c, powers.c)]
            .into_iter()
            .fold(GaussianRational::one(), |acc, (b, k)| &acc * &Self::power(b, k))
    }

    /// Action of every spin-label component of `sum` on `psi`.
    pub fn apply_sum<L: SpinLabel>(&self, sum: &OperatorSum<L>, psi: &Poly) -> BTreeMap<L, Poly> {
        let mut out: BTreeMap<L, Poly> = BTreeMap::new();
        for t in sum.terms() {
            let scale = &t.coeff * &self.constant(t.powers);
            let value = self.apply_word(&t.factors, psi).scale(&scale);
            let entry = out.entry(t.label).or_default();
            *entry = entry.add(&value);
        }
        out.retain(|_, p| !p.is_zero());
        out
    }
}

/// A handful of test functions.
pub fn test_functions() -> Vec<Poly> {
    let one = GaussianRational::one();
    vec![
        Poly::constant(one.clone()),
        Poly::term(one.clone(), [1, 0, 0]),
        Poly::term(gr(2, 3), [0, 2, 1]),
        Poly::term(one.clone(), [1, 1, 1]).add(&Poly::term(gr(-1, 2), [0, 0, 3])),
        Poly::term(GaussianRational::i(), [2, 1, 0]),
    ]
}

// ---------------------------------------------------------------------------
// Square roots by integer arithmetic

/// `⌊√n⌋` by Newton iteration on integers.
pub fn isqrt(n: &BigUint) -> BigUint {
    if n.is_zero() {
        return BigUint::zero();
    }
    let mut x = BigUint::one() << ((n.bits() / 2) + 1);
    loop {
        let y = (&x + n / &x) >> 1;
        if y >= x {
            return x;
        }
        x = y;
    }
}

/// `√r` truncated to `digits` decimal places, as a decimal string.
pub fn sqrt_digits(r: &BigRational, digits: u32) -> String {
    assert!(!r.is_negative());
    let scale = BigUint::from(10u32).pow(2 * digits);
    let numer = r.numer().to_biguint().unwrap() * scale;
    let denom = r.denom().to_biguint().unwrap();
    let root = isqrt(&(numer / denom));
    let s = root.to_string();
    let d = digits as usize;
    let padded = format!("{:0>width$}", s, width = d + 1);
    let (int, frac) = padded.split_at(padded.len() - d);
    format!("{int}.{frac}")
}

/// First `n` significant digits of a decimal string (no rounding).
pub fn significant(s: &str, n: usize) -> String {
    s.chars().filter(|c| c.is_ascii_digit()).skip_while(|&c| c == '0').take(n).collect()
}
