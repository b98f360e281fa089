use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::{Add, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use super::label::SpinLabel;
use super::symbols::{
    canonical_field, Assumptions, ConstantMonomial, Factor, Field, FieldBase, Powers,
    MAX_DERIVATIVE_ORDER,
};
use super::AlgebraError;
use crate::dirac::{levi_civita, third_axis, Axis, Gamma, Parity};
use crate::scalar::GaussianRational;

/// Map key of a term: everything except the coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TermKey<L> {
    pub powers: Powers,
    pub label: L,
    pub factors: Vec<Factor>,
}

impl<L: SpinLabel> Ord for TermKey<L> {
    /// Highest `c` power first, then by factor word, label and remaining constants.
    fn cmp(&self, other: &Self) -> Ordering {
        (Reverse(self.powers.c), &self.factors, self.label, self.powers)
            .cmp(&(Reverse(other.powers.c), &other.factors, other.label, other.powers))
    }
}

impl<L: SpinLabel> PartialOrd for TermKey<L> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// One term `coeff · ħ^a e^b m^c c^d · Γ · F₁F₂…` of an operator sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorTerm<L> {
    pub coeff: GaussianRational,
    pub powers: Powers,
    pub label: L,
    pub factors: Vec<Factor>,
}

impl<L: SpinLabel> OperatorTerm<L> {
    pub fn new(monomial: ConstantMonomial, label: L, factors: Vec<Factor>) -> Self {
        Self { coeff: monomial.coeff, powers: monomial.powers, label, factors }
    }

    pub fn c_degree(&self) -> i32 {
        self.powers.c
    }

    pub fn monomial(&self) -> ConstantMonomial {
        ConstantMonomial::new(self.coeff.clone(), self.powers)
    }

    pub fn pi_count(&self) -> usize {
        self.factors.iter().filter(|f| matches!(f, Factor::Pi(_))).count()
    }

    pub fn fields(&self) -> impl Iterator<Item = Field> + '_ {
        self.factors.iter().filter_map(|f| match f {
            Factor::Field(field) => Some(*field),
            Factor::Pi(_) => None,
        })
    }
}

/// Sum of normal-ordered operator terms with exact coefficients.
///
/// No two terms share a key and no stored coefficient is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorSum<L = Gamma> {
    terms: BTreeMap<TermKey<L>, GaussianRational>,
    assumptions: Assumptions,
}

impl<L: SpinLabel> Default for OperatorSum<L> {
    fn default() -> Self {
        Self::zero()
    }
}

/// Normal-ordering result for a unit-coefficient word.
#[derive(Debug)]
struct NormalOrdered {
    terms: Vec<(GaussianRational, Powers, Vec<Factor>)>,
    potential_differentiated: bool,
}

fn is_inverted(a: Factor, b: Factor) -> bool {
    match (a, b) {
        (Factor::Pi(_), Factor::Field(_)) => true,
        (Factor::Pi(x), Factor::Pi(y)) => x > y,
        _ => false,
    }
}

/// `∂_axis field` as a canonical combination. The flag reports whether `V` was
/// differentiated, which introduces `E = −∇V`.
fn differentiate(
    field: Field,
    axis: Axis,
    assumptions: Assumptions,
) -> Result<(Vec<(i64, Field)>, bool), AlgebraError> {
    match field.base {
        FieldBase::V => Ok((vec![(-1, Field::e(axis))], true)),
        FieldBase::B(_) if assumptions.uniform_b => Ok((Vec::new(), false)),
        _ => {
            let next = field.derivative(axis);
            if next.deriv.order() > MAX_DERIVATIVE_ORDER {
                return Err(AlgebraError::DerivativeOverflow { field: next.to_string() });
            }
            Ok((canonical_field(next, assumptions), false))
        }
    }
}

/// Expands every field of `word` into its canonical combination.
fn canonical_words(word: &[Factor], assumptions: Assumptions) -> Vec<(i64, Vec<Factor>)> {
    let mut words = vec![(1i64, Vec::with_capacity(word.len()))];
    for &factor in word {
        match factor {
            Factor::Pi(_) => words.iter_mut().for_each(|(_, w)| w.push(factor)),
            Factor::Field(field) => {
                let combo = canonical_field(field, assumptions);
                if combo.len() == 1 && combo[0].0 == 1 {
                    words.iter_mut().for_each(|(_, w)| w.push(Factor::Field(combo[0].1)));
                    continue;
                }
                let mut next = Vec::with_capacity(words.len() * combo.len());
                for (k, w) in &words {
                    for (j, f) in &combo {
                        let mut w2 = w.clone();
                        w2.push(Factor::Field(*f));
                        next.push((k * j, w2));
                    }
                }
                words = next;
            }
        }
    }
    words
}

/// Rewrites a word into normal order using
/// `[Π_i, f] = −iħ ∂_i f` and `[Π_i, Π_j] = −iħe ε_ijk B_k`.
fn normal_order(word: &[Factor], assumptions: Assumptions) -> Result<NormalOrdered, AlgebraError> {
    let minus_i = -GaussianRational::i();
    let mut stack: Vec<(GaussianRational, Powers, Vec<Factor>)> = canonical_words(word, assumptions)
        .into_iter()
        .map(|(k, w)| (GaussianRational::from_integer(k), Powers::ONE, w))
        .collect();
    let mut done: HashMap<(Powers, Vec<Factor>), GaussianRational> = HashMap::new();
    let mut potential_differentiated = false;

    while let Some((coeff, powers, mut w)) = stack.pop() {
        let Some(i) = w.windows(2).position(|p| is_inverted(p[0], p[1])) else {
            let n_fields = w.iter().take_while(|f| matches!(f, Factor::Field(_))).count();
            w[..n_fields].sort_unstable();
            let slot = done.entry((powers, w)).or_insert_with(GaussianRational::zero);
            *slot += &coeff;
            continue;
        };
        match (w[i], w[i + 1]) {
            (Factor::Pi(a), Factor::Field(f)) => {
                let (derivs, touched) = differentiate(f, a, assumptions)?;
                potential_differentiated |= touched;
                let commutator_powers = powers + Powers::new(1, 0, 0, 0);
                for (k, g) in derivs {
                    let mut w2 = Vec::with_capacity(w.len() - 1);
                    w2.extend_from_slice(&w[..i]);
                    w2.push(Factor::Field(g));
                    w2.extend_from_slice(&w[i + 2..]);
                    let c = &(&coeff * &minus_i) * &GaussianRational::from_integer(k);
                    stack.push((c, commutator_powers, w2));
                }
                w.swap(i, i + 1);
                stack.push((coeff, powers, w));
            }
            (Factor::Pi(b), Factor::Pi(a)) => {
                let k = third_axis(b, a).expect("inverted momenta have distinct axes");
                let eps = levi_civita(b, a, k);
                let mut w2 = Vec::with_capacity(w.len() - 1);
                w2.extend_from_slice(&w[..i]);
                w2.push(Factor::Field(Field::b(k)));
                w2.extend_from_slice(&w[i + 2..]);
                let c = &(&coeff * &minus_i) * &GaussianRational::from_integer(eps);
                stack.push((c, powers + Powers::new(1, 1, 0, 0), w2));
                w.swap(i, i + 1);
                stack.push((coeff, powers, w));
            }
            _ => unreachable!("only Π-field and Π-Π pairs are inverted"),
        }
    }

    let terms = done
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((p, w), c)| (c, p, w))
        .collect();
    Ok(NormalOrdered { terms, potential_differentiated })
}

type CacheKey = (Vec<Factor>, Assumptions);

fn normal_order_cached(word: &[Factor], assumptions: Assumptions) -> Result<Arc<NormalOrdered>, AlgebraError> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<NormalOrdered>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (word.to_vec(), assumptions);
    if let Some(hit) = cache.lock().expect("normal-order cache poisoned").get(&key) {
        return Ok(Arc::clone(hit));
    }
    let computed = Arc::new(normal_order(word, assumptions)?);
    cache
        .lock()
        .expect("normal-order cache poisoned")
        .insert(key, Arc::clone(&computed));
    Ok(computed)
}

/// Counts of products skipped by a graded multiplication, keyed by `c` degree.
pub type DroppedCounts = BTreeMap<i32, usize>;

impl<L: SpinLabel> OperatorSum<L> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new(), assumptions: Assumptions::NONE }
    }

    pub fn one() -> Self {
        Self::constant(ConstantMonomial::one())
    }

    pub fn constant(monomial: ConstantMonomial) -> Self {
        Self::from_raw(monomial, L::IDENTITY, Vec::new())
    }

    pub fn label(label: L) -> Self {
        Self::from_raw(ConstantMonomial::one(), label, Vec::new())
    }

    pub fn pi(axis: Axis) -> Self {
        Self::from_raw(ConstantMonomial::one(), L::IDENTITY, vec![Factor::Pi(axis)])
    }

    pub fn field(field: Field) -> Self {
        let mut out = Self::zero();
        for (k, f) in canonical_field(field, Assumptions::NONE) {
            out.accumulate(
                TermKey { powers: Powers::ONE, label: L::IDENTITY, factors: vec![Factor::Field(f)] },
                &GaussianRational::from_integer(k),
            );
        }
        out
    }

    /// Term whose factor word is already in normal order with canonical fields.
    fn from_raw(monomial: ConstantMonomial, label: L, factors: Vec<Factor>) -> Self {
        let mut out = Self::zero();
        out.accumulate(TermKey { powers: monomial.powers, label, factors }, &monomial.coeff);
        out
    }

    /// Builds a single term from an arbitrary factor word, normal-ordering it.
    pub fn term(monomial: ConstantMonomial, label: L, factors: &[Factor]) -> Result<Self, AlgebraError> {
        Self::term_with(monomial, label, factors, Assumptions::NONE)
    }

    pub fn term_with(
        monomial: ConstantMonomial,
        label: L,
        factors: &[Factor],
        assumptions: Assumptions,
    ) -> Result<Self, AlgebraError> {
        let mut out = Self { terms: BTreeMap::new(), assumptions };
        let ordered = normal_order_cached(factors, assumptions)?;
        for (c, p, w) in &ordered.terms {
            out.accumulate(
                TermKey { powers: monomial.powers + *p, label, factors: w.clone() },
                &(&monomial.coeff * c),
            );
        }
        if ordered.potential_differentiated && !assumptions.curl_free_e {
            out.assumptions.curl_free_e = true;
            out = out.canonicalize()?;
        }
        Ok(out)
    }

    fn accumulate(&mut self, key: TermKey<L>, coeff: &GaussianRational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(existing) => {
                *existing += coeff;
                if existing.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, coeff.clone());
            }
        }
    }

    pub fn assumptions(&self) -> Assumptions {
        self.assumptions
    }

    /// Adds assumptions and renormalizes.
    pub fn assume(&self, extra: Assumptions) -> Result<Self, AlgebraError> {
        self.with_assumptions(self.assumptions.union(extra))
    }

    /// Replaces the assumption set and renormalizes under it.
    ///
    /// Dropping an assumption never changes terms: symbols normalized under a
    /// stronger set are valid symbols under a weaker one.
    pub fn with_assumptions(&self, assumptions: Assumptions) -> Result<Self, AlgebraError> {
        let mut out = self.clone();
        out.assumptions = assumptions;
        out.canonicalize()
    }

    /// Re-normalizes every term under the current assumptions. Idempotent.
    pub fn canonicalize(&self) -> Result<Self, AlgebraError> {
        let mut out = Self { terms: BTreeMap::new(), assumptions: self.assumptions };
        for (key, coeff) in &self.terms {
            let t = Self::term_with(
                ConstantMonomial::new(coeff.clone(), key.powers),
                key.label,
                &key.factors,
                self.assumptions,
            )?;
            out.assumptions = out.assumptions.union(t.assumptions);
            out.absorb(t);
        }
        if out.assumptions != self.assumptions {
            return out.canonicalize();
        }
        Ok(out)
    }

    fn absorb(&mut self, other: Self) {
        for (k, c) in other.terms {
            self.accumulate(k, &c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = OperatorTerm<L>> + '_ {
        self.terms.iter().map(|(k, c)| OperatorTerm {
            coeff: c.clone(),
            powers: k.powers,
            label: k.label,
            factors: k.factors.clone(),
        })
    }

    pub fn coefficient(&self, powers: Powers, label: L, factors: &[Factor]) -> GaussianRational {
        let key = TermKey { powers, label, factors: factors.to_vec() };
        self.terms.get(&key).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = OperatorTerm<L>>, assumptions: Assumptions) -> Result<Self, AlgebraError> {
        let mut out = Self { terms: BTreeMap::new(), assumptions };
        for t in terms {
            let s = Self::term_with(ConstantMonomial::new(t.coeff, t.powers), t.label, &t.factors, assumptions)?;
            out.assumptions = out.assumptions.union(s.assumptions);
            out.absorb(s);
        }
        out.canonicalize()
    }

    /// Keeps the terms satisfying `pred`. Normal form is preserved.
    pub fn filter(&self, mut pred: impl FnMut(&OperatorTerm<L>) -> bool) -> Self {
        let mut out = Self { terms: BTreeMap::new(), assumptions: self.assumptions };
        for t in self.terms() {
            if pred(&t) {
                out.accumulate(TermKey { powers: t.powers, label: t.label, factors: t.factors }, &t.coeff);
            }
        }
        out
    }

    pub fn c_degrees(&self) -> BTreeSet<i32> {
        self.terms.keys().map(|k| k.powers.c).collect()
    }

    pub fn max_c_degree(&self) -> Option<i32> {
        self.c_degrees().last().copied()
    }

    pub fn min_c_degree(&self) -> Option<i32> {
        self.c_degrees().first().copied()
    }

    /// Splits into terms with `c_degree ≥ min_degree` and the rest.
    pub fn truncate(&self, min_degree: i32) -> (Self, Self) {
        (self.filter(|t| t.c_degree() >= min_degree), self.filter(|t| t.c_degree() < min_degree))
    }

    pub fn scale(&self, m: &ConstantMonomial) -> Self {
        let mut out = Self { terms: BTreeMap::new(), assumptions: self.assumptions };
        if m.coeff.is_zero() {
            return out;
        }
        for (k, c) in &self.terms {
            let key = TermKey { powers: k.powers + m.powers, label: k.label, factors: k.factors.clone() };
            out.terms.insert(key, c * &m.coeff);
        }
        out
    }

    pub fn scale_by(&self, s: &GaussianRational) -> Self {
        self.scale(&ConstantMonomial::new(s.clone(), Powers::ONE))
    }

    fn combine(&self, other: &Self, sign: i64) -> Result<Self, AlgebraError> {
        let assumptions = self.assumptions.union(other.assumptions);
        let mut out = self.clone();
        out.assumptions = assumptions;
        let s = GaussianRational::from_integer(sign);
        for (k, c) in &other.terms {
            out.accumulate(k.clone(), &(c * &s));
        }
        if assumptions != self.assumptions || assumptions != other.assumptions {
            out = out.canonicalize()?;
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.combine(other, 1)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.combine(other, -1)
    }

    /// Exact product, normal-ordered.
    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.mul_graded(other, None).map(|(p, _)| p)
    }

    /// Product keeping only pairs whose combined `c` degree is at least
    /// `min_degree`. Skipped pairs are counted by degree and never evaluated.
    pub fn mul_truncated(&self, other: &Self, min_degree: i32) -> Result<(Self, DroppedCounts), AlgebraError> {
        self.mul_graded(other, Some(min_degree))
    }

    fn mul_graded(&self, other: &Self, min_degree: Option<i32>) -> Result<(Self, DroppedCounts), AlgebraError> {
        let assumptions = self.assumptions.union(other.assumptions);
        let mut acc: HashMap<TermKey<L>, GaussianRational> = HashMap::new();
        let mut dropped = DroppedCounts::new();
        let mut touched = false;
        let mut word = Vec::new();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let powers = k1.powers + k2.powers;
                if let Some(min) = min_degree {
                    if powers.c < min {
                        *dropped.entry(powers.c).or_default() += 1;
                        continue;
                    }
                }
                let (phase, label) = k1.label.product(k2.label);
                let coeff = &(c1 * c2) * &phase.to_scalar();
                word.clear();
                word.extend_from_slice(&k1.factors);
                word.extend_from_slice(&k2.factors);
                let ordered = normal_order_cached(&word, assumptions)?;
                touched |= ordered.potential_differentiated;
                for (c, p, w) in &ordered.terms {
                    let key = TermKey { powers: powers + *p, label, factors: w.clone() };
                    *acc.entry(key).or_insert_with(GaussianRational::zero) += &(&coeff * c);
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let mut out = Self { terms, assumptions };
        if touched && !assumptions.curl_free_e {
            out.assumptions.curl_free_e = true;
            out = out.canonicalize()?;
        }
        Ok((out, dropped))
    }

    /// `XY − YX`.
    pub fn commutator(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.mul(other)?.try_sub(&other.mul(self)?)
    }

    pub fn pow(&self, n: u32) -> Result<Self, AlgebraError> {
        let mut acc = Self::one().with_assumptions(self.assumptions)?;
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Formal adjoint: `Π`, `V`, `E`, `B` Hermitian, labels per their basis matrix.
    pub fn adjoint(&self) -> Result<Self, AlgebraError> {
        let mut out = Self { terms: BTreeMap::new(), assumptions: self.assumptions };
        for t in self.terms() {
            let coeff = &t.coeff.conj() * &GaussianRational::from_integer(t.label.adjoint_sign());
            let reversed: Vec<Factor> = t.factors.iter().rev().copied().collect();
            let s = Self::term_with(ConstantMonomial::new(coeff, t.powers), t.label, &reversed, self.assumptions)?;
            out.assumptions = out.assumptions.union(s.assumptions);
            out.absorb(s);
        }
        out.canonicalize()
    }

    pub fn is_hermitian(&self) -> Result<bool, AlgebraError> {
        Ok(self.adjoint()? == *self)
    }

    /// Replaces each label by `scalar · new_label`, e.g. `β → ±1`, `Σ_k → σ_k`.
    pub fn map_labels<M: SpinLabel>(
        &self,
        mut f: impl FnMut(L) -> Option<(GaussianRational, M)>,
    ) -> Option<OperatorSum<M>> {
        let mut out = OperatorSum::<M> { terms: BTreeMap::new(), assumptions: self.assumptions };
        for (k, c) in &self.terms {
            let (s, label) = f(k.label)?;
            out.accumulate(TermKey { powers: k.powers, label, factors: k.factors.clone() }, &(c * &s));
        }
        Some(out)
    }

    /// Sets every field matching `pred` to zero.
    pub fn substitute_zero(&self, mut pred: impl FnMut(Field) -> bool) -> Self {
        self.filter(|t| !t.fields().any(&mut pred))
    }

    /// Terms with `label` and no other content, as a constant: used to read off
    /// scalar parts.
    pub fn as_monomial(&self) -> Option<ConstantMonomial> {
        if self.terms.len() != 1 {
            return None;
        }
        let (k, c) = self.terms.iter().next()?;
        (k.label == L::IDENTITY && k.factors.is_empty()).then(|| ConstantMonomial::new(c.clone(), k.powers))
    }
}

impl OperatorSum<Gamma> {
    /// Splits into the parts commuting (even) and anticommuting (odd) with `β`.
    pub fn even_odd_split(&self) -> (Self, Self) {
        (
            self.filter(|t| t.label.parity() == Parity::Even),
            self.filter(|t| t.label.parity() == Parity::Odd),
        )
    }

    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|k| k.label.parity() == Parity::Even)
    }

    pub fn is_odd(&self) -> bool {
        self.terms.keys().all(|k| k.label.parity() == Parity::Odd)
    }
}

impl<L: SpinLabel> Add for &OperatorSum<L> {
    type Output = OperatorSum<L>;
    /// Panics only when renormalization overflows the derivative cap, which
    /// cannot happen when both operands are already normal-ordered.
    fn add(self, rhs: &OperatorSum<L>) -> OperatorSum<L> {
        self.try_add(rhs).expect("sum of normal forms")
    }
}

impl<L: SpinLabel> Sub for &OperatorSum<L> {
    type Output = OperatorSum<L>;
    fn sub(self, rhs: &OperatorSum<L>) -> OperatorSum<L> {
        self.try_sub(rhs).expect("difference of normal forms")
    }
}

impl<L: SpinLabel> Neg for &OperatorSum<L> {
    type Output = OperatorSum<L>;
    fn neg(self) -> OperatorSum<L> {
        self.scale_by(&-GaussianRational::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::symbols::MultiIndex;

    type Sum = OperatorSum<Gamma>;

    fn mono(coeff: GaussianRational, powers: Powers) -> ConstantMonomial {
        ConstantMonomial::new(coeff, powers)
    }

    #[test]
    fn pi_x_pi_y_commutator_is_magnetic_field() {
        let c = Sum::pi(Axis::X).commutator(&Sum::pi(Axis::Y)).unwrap();
        let expected = Sum::field(Field::b(Axis::Z)).scale(&mono(-GaussianRational::i(), Powers::new(1, 1, 0, 0)));
        assert_eq!(c, expected);
    }

    #[test]
    fn pi_past_potential() {
        let prod = Sum::pi(Axis::X).mul(&Sum::field(Field::V)).unwrap();
        let v_pi = Sum::term(ConstantMonomial::one(), Gamma::I, &[Factor::Field(Field::V), Factor::Pi(Axis::X)]).unwrap();
        // Π_x V = V Π_x − iħ ∂_x V = V Π_x + iħ E_x
        let ie = Sum::field(Field::e(Axis::X)).scale(&mono(GaussianRational::i(), Powers::new(1, 0, 0, 0)));
        assert_eq!(prod, (&v_pi + &ie).with_assumptions(prod.assumptions()).unwrap());
        assert!(prod.assumptions().curl_free_e, "differentiating V marks E as a gradient");
    }

    #[test]
    fn identity_is_neutral() {
        let x = Sum::pi(Axis::Y).mul(&Sum::field(Field::b(Axis::X))).unwrap();
        assert_eq!(Sum::one().mul(&x).unwrap(), x);
        assert_eq!(x.mul(&Sum::one()).unwrap(), x);
    }

    #[test]
    fn derivative_cap_is_enforced() {
        let word = [Factor::Pi(Axis::X), Factor::Pi(Axis::X), Factor::Pi(Axis::X), Factor::Field(Field::e(Axis::Y))];
        let err = Sum::term(ConstantMonomial::one(), Gamma::I, &word).unwrap_err();
        assert!(matches!(err, AlgebraError::DerivativeOverflow { .. }));
    }

    #[test]
    fn canonicalize_is_idempotent() {
        let word = [Factor::Pi(Axis::Z), Factor::Pi(Axis::Y), Factor::Field(Field::b(Axis::Z))];
        let s = Sum::term(ConstantMonomial::one(), Gamma::BETA, &word).unwrap();
        let once = s.canonicalize().unwrap();
        assert_eq!(once, s);
        assert_eq!(once.canonicalize().unwrap(), once);
        // ∂_z B_z never survives
        for t in s.terms() {
            for f in t.fields() {
                if let FieldBase::B(Axis::Z) = f.base {
                    assert_eq!(f.deriv.count(Axis::Z), 0);
                }
            }
        }
    }

    #[test]
    fn truncation_counts_dropped_pairs() {
        let a = Sum::pi(Axis::X).scale(&mono(GaussianRational::one(), Powers::new(0, 0, 0, -2)));
        let b = Sum::pi(Axis::Y).scale(&mono(GaussianRational::one(), Powers::new(0, 0, 0, -1)));
        let (p, dropped) = a.mul_truncated(&b, -2).unwrap();
        assert!(p.is_zero());
        assert_eq!(dropped.get(&-3), Some(&1));
    }

    #[test]
    fn momentum_is_hermitian_and_beta_alpha_is_not() {
        assert!(Sum::pi(Axis::X).is_hermitian().unwrap());
        let ba = Sum::label(Gamma::beta_alpha(Axis::X));
        assert_eq!(ba.adjoint().unwrap(), -&ba);
        // E_x Π_y is not Hermitian unless ∂_y E_x is dropped
        let ep = Sum::term(ConstantMonomial::one(), Gamma::I, &[Factor::Field(Field::e(Axis::X)), Factor::Pi(Axis::Y)]).unwrap();
        assert!(!ep.is_hermitian().unwrap());
    }

    #[test]
    fn uniform_field_kills_gradient_terms() {
        let u = Assumptions { curl_free_e: false, uniform_b: true };
        let s = Sum::term_with(ConstantMonomial::one(), Gamma::I, &[Factor::Pi(Axis::X), Factor::Field(Field::b(Axis::Z))], u).unwrap();
        assert_eq!(s.len(), 1);
        let t = s.terms().next().unwrap();
        assert_eq!(t.factors, vec![Factor::Field(Field::b(Axis::Z)), Factor::Pi(Axis::X)]);
        let _ = MultiIndex::default();
    }
}
