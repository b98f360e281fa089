mod common;

use std::collections::BTreeMap;

use common::*;
use fwexpand::algebra::hamiltonian::*;
use fwexpand::algebra::{
    parse_operator, render_grouped, render_plain, Assumptions, ConstantMonomial, EvenSquare, Factor, Field, OperatorSum,
    Powers,
};
use fwexpand::dirac::{decompose, Axis, Gamma};
use fwexpand::scalar::GaussianRational;
use num_traits::Zero;
use proptest::prelude::*;

fn mono(num: i64, den: i64, hbar: i32, e: i32, m: i32, c: i32) -> ConstantMonomial {
    ConstantMonomial::new(gr(num, den), Powers::new(hbar, e, m, c))
}

fn word(m: ConstantMonomial, label: Gamma, factors: &[Factor]) -> OperatorSum {
    OperatorSum::term(m, label, factors).unwrap()
}

fn pi(k: Axis) -> Factor {
    Factor::Pi(k)
}

fn f(field: Field) -> Factor {
    Factor::Field(field)
}

/// Oracle action of `Σ coeff · matrix · word` with the matrix split over the
/// Γ basis by hand.
fn oracle_action(
    concrete: &Concrete,
    parts: &[(fwexpand::dirac::DiracMatrix, GaussianRational, Vec<Factor>)],
    psi: &Poly,
) -> BTreeMap<Gamma, Poly> {
    let mut out: BTreeMap<Gamma, Poly> = BTreeMap::new();
    for (matrix, coeff, w) in parts {
        let action = concrete.apply_word(w, psi);
        for (index, c) in decompose(matrix).into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let entry = out.entry(Gamma::from_index(index).unwrap()).or_default();
            *entry = entry.add(&action.scale(&(&c * coeff)));
        }
    }
    out.retain(|_, p| !p.is_zero());
    out
}

#[test]
fn hamiltonian_grading() {
    let h = dirac_hamiltonian();
    assert_eq!(rest_energy().c_degrees().into_iter().collect::<Vec<_>>(), vec![2]);
    assert_eq!(potential_energy().c_degrees().into_iter().collect::<Vec<_>>(), vec![0]);
    assert_eq!(kinetic_odd().c_degrees().into_iter().collect::<Vec<_>>(), vec![1]);
    assert_eq!(h.coefficient(Powers::new(0, 0, 1, 2), Gamma::BETA, &[]), gr(1, 1));
    assert_eq!(h.coefficient(Powers::new(0, 1, 0, 0), Gamma::I, &[f(Field::V)]), gr(-1, 1));
    for k in Axis::ALL {
        assert_eq!(h.coefficient(Powers::new(0, 0, 0, 1), Gamma::alpha(k), &[pi(k)]), gr(1, 1));
    }
}

#[test]
fn identity_is_neutral() {
    let h = dirac_hamiltonian();
    assert_eq!(OperatorSum::one().mul(&h).unwrap(), h);
    assert_eq!(h.mul(&OperatorSum::one()).unwrap(), h);
}

#[test]
fn alpha_pi_squared() {
    let a_pi = alpha_dot(Factor::Pi);
    let product = a_pi.mul(&a_pi).unwrap();
    let expected = &pi_squared::<Gamma>() + &spin_dot_b::<Gamma>().scale(&mono(1, 1, 1, 1, 0, 0));
    assert_eq!(product, expected);
    // Σ_kj α_k α_j Π_k Π_j against the concrete oracle
    let concrete = Concrete::generic();
    let mut parts = Vec::new();
    for k in Axis::ALL {
        for j in Axis::ALL {
            let m = fwexpand::dirac::alpha(k).product(&fwexpand::dirac::alpha(j));
            parts.push((m, gr(1, 1), vec![pi(k), pi(j)]));
        }
    }
    for psi in test_functions() {
        assert_eq!(concrete.apply_sum(&product, &psi), oracle_action(&concrete, &parts, &psi));
    }
}

#[test]
fn momentum_past_potential() {
    let product = OperatorSum::pi(Axis::X).mul(&OperatorSum::field(Field::V)).unwrap();
    let i_hbar = ConstantMonomial::new(GaussianRational::i(), Powers::new(1, 0, 0, 0));
    let expected = &word(ConstantMonomial::one(), Gamma::I, &[f(Field::V), pi(Axis::X)])
        + &word(i_hbar, Gamma::I, &[f(Field::e(Axis::X))]);
    // differentiating V introduces E = −∇V, so the result is curl-free
    assert_eq!(product, expected.assume(Assumptions::curl_free()).unwrap());
    let concrete = Concrete::harmonic_uniform(gr(3, 1), gr(0, 1));
    for psi in test_functions() {
        let direct = concrete.apply_word(&[pi(Axis::X), f(Field::V)], &psi);
        assert_eq!(concrete.apply_sum(&product, &psi).remove(&Gamma::I).unwrap_or_default(), direct);
    }
}

#[test]
fn momentum_commutator_is_magnetic_field() {
    let c = OperatorSum::pi(Axis::X).commutator(&OperatorSum::pi(Axis::Y)).unwrap();
    let expected = word(ConstantMonomial::new(-GaussianRational::i(), Powers::new(1, 1, 0, 0)), Gamma::I, &[f(Field::b(Axis::Z))]);
    assert_eq!(c, expected);
    // A = (−By, 0, 0) acting on polynomials
    let b = gr(5, 3);
    let concrete = Concrete::harmonic_uniform(gr(0, 1), b.clone());
    let minus_i_hbar_e = &(&(-GaussianRational::i()) * &concrete.hbar) * &concrete.e;
    for psi in test_functions() {
        let xy = concrete.apply_word(&[pi(Axis::X), pi(Axis::Y)], &psi);
        let yx = concrete.apply_word(&[pi(Axis::Y), pi(Axis::X)], &psi);
        let direct = xy.add(&yx.scale(&gr(-1, 1)));
        assert_eq!(direct, psi.scale(&(&minus_i_hbar_e * &b)));
        assert_eq!(concrete.apply_sum(&c, &psi).remove(&Gamma::I).unwrap_or_default(), direct);
    }
}

#[test]
fn momentum_potential_commutator() {
    let c = OperatorSum::pi(Axis::X).commutator(&OperatorSum::field(Field::V)).unwrap();
    let expected = word(ConstantMonomial::new(GaussianRational::i(), Powers::new(1, 0, 0, 0)), Gamma::I, &[f(Field::e(Axis::X))]);
    assert_eq!(c, expected.assume(Assumptions::curl_free()).unwrap());
}

#[test]
fn odd_potential_commutator_sign() {
    // derived: [O, U] = −icħe α·E
    let c = kinetic_odd().commutator(&potential_energy()).unwrap();
    let expected = alpha_dot(|k| f(Field::e(k))).scale(&ConstantMonomial::new(-GaussianRational::i(), Powers::new(1, 1, 0, 1)));
    assert_eq!(c, expected.assume(Assumptions::curl_free()).unwrap());
}

#[test]
fn odd_square() {
    let two_mc2 = mono(2, 1, 0, 0, 1, 2);
    let sq = square_even(&kinetic_odd(), &two_mc2).unwrap();
    assert_eq!(sq, pauli_kinetic::<Gamma>());
    let no_b = sq.substitute_zero(|field| field.is_magnetic());
    assert_eq!(no_b, pi_squared::<Gamma>().scale(&mono(1, 2, 0, 0, -1, 0)));
    assert!(square_even(&rest_energy(), &two_mc2).is_err());

    let o2 = kinetic_odd().mul(&kinetic_odd()).unwrap();
    let o4 = o2.mul(&o2).unwrap().scale(&mono(1, 8, 0, 0, -3, -6));
    let square = EvenSquare { prefactor: mono(1, 2, 0, 0, -1, -2), prefix: Gamma::I, base: pauli_kinetic::<Gamma>() };
    assert_eq!(square.expand().unwrap(), o4);
    assert!(square.expand_binomial().is_err());
    let uniform = EvenSquare {
        base: pauli_kinetic::<Gamma>().assume(Assumptions { curl_free_e: false, uniform_b: true }).unwrap(),
        ..square.clone()
    };
    assert_eq!(uniform.expand_binomial().unwrap(), uniform.expand().unwrap());
}

#[test]
fn double_commutator_forms() {
    let full = double_commutator_ou(Assumptions::NONE).unwrap();
    assert_eq!(full, double_commutator_ou_expected(false));
    assert_eq!(full.len(), 3 + 6 + 6);
    let curl_free = double_commutator_ou(Assumptions::curl_free()).unwrap();
    assert_eq!(curl_free, double_commutator_ou_expected(true));
    // ∇·E contributes the only field-only terms
    assert_eq!(curl_free.filter(|t| t.factors.iter().all(|x| matches!(x, Factor::Field(_)))).len(), 3);
    assert_eq!(double_commutator_ou_vector_form(Assumptions::NONE).unwrap(), full);
    assert_eq!(curl_discrepancy().unwrap(), hbar_spin_dot_curl_e(Assumptions::NONE));
    assert!(hbar_spin_dot_curl_e(Assumptions::curl_free()).is_zero());
}

#[test]
fn double_commutator_against_oracle() {
    // [α·Π, α·E] = Σ_kj (α_k α_j Π_k E_j − α_j α_k E_j Π_k), evaluated word by word
    let full = double_commutator_ou(Assumptions::NONE).unwrap();
    let concrete = Concrete::generic();
    let mut parts = Vec::new();
    for k in Axis::ALL {
        for j in Axis::ALL {
            let akj = fwexpand::dirac::alpha(k).product(&fwexpand::dirac::alpha(j));
            let ajk = fwexpand::dirac::alpha(j).product(&fwexpand::dirac::alpha(k));
            parts.push((akj, gr(1, 1), vec![pi(k), f(Field::e(j))]));
            parts.push((ajk, gr(-1, 1), vec![f(Field::e(j)), pi(k)]));
        }
    }
    for psi in test_functions() {
        assert_eq!(concrete.apply_sum(&full, &psi), oracle_action(&concrete, &parts, &psi));
    }
}

#[test]
fn even_odd_split_examples() {
    let (even, odd) = rest_energy().even_odd_split();
    assert_eq!(even, rest_energy());
    assert!(odd.is_zero());
    let (even, odd) = kinetic_odd().even_odd_split();
    assert!(even.is_zero());
    assert_eq!(odd, kinetic_odd());
    let h = dirac_hamiltonian();
    let (even, odd) = h.even_odd_split();
    assert_eq!(&even + &odd, h);
}

#[test]
fn rendering() {
    assert_eq!(render_plain(&rest_energy()), "β m c^2");
    assert_eq!(render_plain(&OperatorSum::<Gamma>::zero()), "0");
    let sq = square_even(&kinetic_odd(), &mono(2, 1, 0, 0, 1, 2)).unwrap();
    assert_eq!(render_grouped(&sq, false), "(1/2m) Π² + (eħ/2m) Σ·B");
}

#[test]
fn render_parse_round_trip() {
    let sums = [
        dirac_hamiltonian(),
        double_commutator_ou(Assumptions::NONE).unwrap(),
        square_even(&kinetic_odd(), &mono(2, 1, 0, 0, 1, 2)).unwrap(),
        OperatorSum::zero(),
    ];
    for s in sums {
        let text = render_plain(&s);
        let back = parse_operator::<Gamma>(&text, s.assumptions()).unwrap();
        assert_eq!(back, s, "{text}");
    }
}

// ---------------------------------------------------------------------------
// random words

fn factor() -> impl Strategy<Value = Factor> {
    let axis = prop_oneof![Just(Axis::X), Just(Axis::Y), Just(Axis::Z)];
    prop_oneof![
        3 => axis.clone().prop_map(Factor::Pi),
        1 => Just(Factor::Field(Field::V)),
        1 => axis.clone().prop_map(|k| Factor::Field(Field::e(k))),
        1 => axis.prop_map(|k| Factor::Field(Field::b(k))),
    ]
}

fn label() -> impl Strategy<Value = Gamma> {
    (0usize..16).prop_map(|i| Gamma::from_index(i).unwrap())
}

fn powers() -> impl Strategy<Value = Powers> {
    (0i32..2, 0i32..2, -1i32..1, -2i32..2).prop_map(|(h, e, m, c)| Powers::new(h, e, m, c))
}

fn single() -> impl Strategy<Value = (ConstantMonomial, Gamma, Vec<Factor>)> {
    ((-4i64..=4).prop_filter("nonzero", |n| *n != 0), 1i64..4, powers(), label(), prop::collection::vec(factor(), 0..3))
        .prop_map(|(n, d, p, l, w)| (ConstantMonomial::new(gr(n, d), p), l, w))
}

fn small_sum() -> impl Strategy<Value = Vec<(ConstantMonomial, Gamma, Vec<Factor>)>> {
    prop::collection::vec(single(), 1..3)
}

fn build(parts: &[(ConstantMonomial, Gamma, Vec<Factor>)]) -> Option<OperatorSum> {
    let mut out = OperatorSum::zero();
    for (m, l, w) in parts {
        out = out.try_add(&OperatorSum::term(m.clone(), *l, w).ok()?).ok()?;
    }
    Some(out)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn associativity(a in small_sum(), b in small_sum(), c in small_sum()) {
        let (Some(x), Some(y), Some(z)) = (build(&a), build(&b), build(&c)) else { return Ok(()) };
        let left = x.mul(&y).and_then(|xy| xy.mul(&z));
        let right = y.mul(&z).and_then(|yz| x.mul(&yz));
        if let (Ok(l), Ok(r)) = (left, right) {
            prop_assert_eq!(l, r);
        }
    }

    #[test]
    fn jacobi(a in single(), b in single(), c in single()) {
        let (Some(x), Some(y), Some(z)) = (build(&[a]), build(&[b]), build(&[c])) else { return Ok(()) };
        let cyc = |p: &OperatorSum, q: &OperatorSum, r: &OperatorSum| q.commutator(r).and_then(|qr| p.commutator(&qr));
        if let (Ok(t1), Ok(t2), Ok(t3)) = (cyc(&x, &y, &z), cyc(&y, &z, &x), cyc(&z, &x, &y)) {
            let total = t1.try_add(&t2).and_then(|s| s.try_add(&t3)).unwrap();
            prop_assert!(total.is_zero(), "{}", render_plain(&total));
        }
    }

    #[test]
    fn grading(a in single(), b in single()) {
        let (Some(x), Some(y)) = (build(&[a]), build(&[b])) else { return Ok(()) };
        if let Ok(c) = x.commutator(&y) {
            let expected = x.max_c_degree().unwrap() + y.max_c_degree().unwrap();
            for d in c.c_degrees() {
                prop_assert_eq!(d, expected);
            }
        }
    }

    #[test]
    fn canonicalize_idempotent(a in small_sum()) {
        let Some(x) = build(&a) else { return Ok(()) };
        let once = x.canonicalize().unwrap();
        prop_assert_eq!(once.canonicalize().unwrap(), once.clone());
        prop_assert_eq!(once, x);
    }

    #[test]
    fn normal_order_matches_concrete_oracle(w in prop::collection::vec(factor(), 1..5), l in label()) {
        let Ok(sum) = OperatorSum::term(ConstantMonomial::one(), l, &w) else { return Ok(()) };
        let concrete = Concrete::generic();
        for psi in test_functions() {
            let mut expected = BTreeMap::new();
            let direct = concrete.apply_word(&w, &psi);
            if !direct.is_zero() {
                expected.insert(l, direct);
            }
            prop_assert_eq!(concrete.apply_sum(&sum, &psi), expected);
        }
    }
}
