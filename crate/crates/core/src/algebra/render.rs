//! Text and LaTeX emitters for operator sums.
//!
//! The plain form is the canonical grammar read back by [`super::parse`]:
//! each term is `coefficient label constants factors`, juxtaposed with spaces,
//! e.g. `β m c^2 - e V + c α_x Π_x`. The grouped form recognizes vector
//! patterns such as `Π²`, `Σ·B` and `Σ·(E×Π)` for human-readable output.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::hamiltonian::{div_e, pi_squared, spin_dot_b, spin_dot_cross, spin_dot_curl_e, spin_orbit, EvenSquare};
use super::label::SpinLabel;
use super::sum::{OperatorSum, OperatorTerm};
use super::symbols::{Assumptions, ConstantMonomial, Factor, Field, Powers};
use crate::dirac::Axis;
use crate::scalar::GaussianRational;

fn rational_plain(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn rational_latex(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", r.numer(), r.denom())
    }
}

/// Splits a coefficient into a leading sign and a magnitude string in the
/// plain grammar. The magnitude is `None` when it equals one.
fn split_sign_plain(c: &GaussianRational) -> (bool, Option<String>) {
    let imag = |im: &BigRational| {
        if im.abs().is_one() { "i".to_string() } else { format!("{} i", rational_plain(&im.abs())) }
    };
    match (c.re.is_zero(), c.im.is_zero()) {
        (_, true) => {
            let abs = c.re.abs();
            (c.re.is_negative(), (!abs.is_one()).then(|| rational_plain(&abs)))
        }
        (true, false) => (c.im.is_negative(), Some(imag(&c.im))),
        (false, false) => {
            let neg = c.re.is_negative();
            let (re, im) = if neg { (-c.re.clone(), -c.im.clone()) } else { (c.re.clone(), c.im.clone()) };
            let sign = if im.is_negative() { '-' } else { '+' };
            (neg, Some(format!("({} {} {})", rational_plain(&re), sign, imag(&im))))
        }
    }
}

fn split_sign_latex(c: &GaussianRational) -> (bool, Option<String>) {
    let imag = |im: &BigRational| {
        if im.abs().is_one() { "i".to_string() } else { format!("{} i", rational_latex(&im.abs())) }
    };
    match (c.re.is_zero(), c.im.is_zero()) {
        (_, true) => {
            let abs = c.re.abs();
            (c.re.is_negative(), (!abs.is_one()).then(|| rational_latex(&abs)))
        }
        (true, false) => (c.im.is_negative(), Some(imag(&c.im))),
        (false, false) => {
            let neg = c.re.is_negative();
            let (re, im) = if neg { (-c.re.clone(), -c.im.clone()) } else { (c.re.clone(), c.im.clone()) };
            let sign = if im.is_negative() { '-' } else { '+' };
            (neg, Some(format!("\\left({} {} {}\\right)", rational_latex(&re), sign, imag(&im))))
        }
    }
}

fn powers_latex(p: Powers) -> String {
    let items = [("\\hbar", p.hbar), ("e", p.e), ("m", p.m), ("c", p.c)];
    items
        .iter()
        .filter(|(_, k)| *k != 0)
        .map(|(s, k)| if *k == 1 { s.to_string() } else { format!("{s}^{{{k}}}") })
        .collect::<Vec<_>>()
        .join(" ")
}

fn term_body_plain<L: SpinLabel>(t: &OperatorTerm<L>) -> (bool, String) {
    let (neg, mag) = split_sign_plain(&t.coeff);
    let mut parts: Vec<String> = mag.into_iter().collect();
    if t.label != L::IDENTITY {
        parts.push(t.label.symbol().to_string());
    }
    let consts = t.powers.plain();
    if !consts.is_empty() {
        parts.push(consts);
    }
    parts.extend(t.factors.iter().map(|f| f.to_string()));
    if parts.is_empty() {
        parts.push("1".into());
    }
    (neg, parts.join(" "))
}

fn term_body_latex<L: SpinLabel>(t: &OperatorTerm<L>) -> (bool, String) {
    let (neg, mag) = split_sign_latex(&t.coeff);
    let mut parts: Vec<String> = mag.into_iter().collect();
    if t.label != L::IDENTITY {
        parts.push(t.label.latex().to_string());
    }
    let consts = powers_latex(t.powers);
    if !consts.is_empty() {
        parts.push(consts);
    }
    parts.extend(t.factors.iter().map(|f| f.latex()));
    if parts.is_empty() {
        parts.push("1".into());
    }
    (neg, parts.join(" "))
}

fn join_signed(items: impl IntoIterator<Item = (bool, String)>) -> String {
    let mut out = String::new();
    for (neg, body) in items {
        match (out.is_empty(), neg) {
            (true, false) => out.push_str(&body),
            (true, true) => {
                out.push('-');
                out.push_str(&body);
            }
            (false, false) => {
                out.push_str(" + ");
                out.push_str(&body);
            }
            (false, true) => {
                out.push_str(" - ");
                out.push_str(&body);
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Canonical plain-text form; parses back to the same normal form.
pub fn render_plain<L: SpinLabel>(s: &OperatorSum<L>) -> String {
    join_signed(s.terms().map(|t| term_body_plain(&t)))
}

/// Term-by-term LaTeX.
pub fn render_latex<L: SpinLabel>(s: &OperatorSum<L>) -> String {
    join_signed(s.terms().map(|t| term_body_latex(&t)))
}

/// Plain form of `prefactor · prefix · [base]^2`.
pub fn render_square_plain<L: SpinLabel>(sq: &EvenSquare<L>) -> (bool, String) {
    let (neg, mag) = split_sign_plain(&sq.prefactor.coeff);
    let mut parts: Vec<String> = mag.into_iter().collect();
    let consts = sq.prefactor.powers.plain();
    if !consts.is_empty() {
        parts.push(consts);
    }
    if sq.prefix != L::IDENTITY {
        parts.push(sq.prefix.symbol().to_string());
    }
    parts.push(format!("[{}]^2", render_plain(&sq.base)));
    (neg, parts.join(" "))
}

/// `(eħ/4m²c²)`-style rendering of a constant monomial, with the sign split off.
/// Returns an empty magnitude for a bare `1`.
pub fn monomial_fraction(m: &ConstantMonomial, latex: bool) -> (bool, String) {
    let c = &m.coeff;
    let (num_sym, den_sym) = m.powers.split_fraction(latex);
    if !c.im.is_zero() {
        // complex coefficients have no fraction form: fall back to the term grammar
        let (neg, mag) = if latex { split_sign_latex(c) } else { split_sign_plain(c) };
        let consts = if latex { powers_latex(m.powers) } else { m.powers.plain() };
        let body = [mag.unwrap_or_default(), consts].iter().filter(|s| !s.is_empty()).cloned().collect::<Vec<_>>().join(" ");
        return (neg, body);
    }
    let neg = c.re.is_negative();
    let abs = c.re.abs();
    let (n, d): (BigInt, BigInt) = (abs.numer().clone(), abs.denom().clone());
    let mut num = String::new();
    if !n.is_one() || num_sym.is_empty() {
        num.push_str(&n.to_string());
    }
    if latex && !num.is_empty() && !num_sym.is_empty() {
        num.push(' ');
    }
    num.push_str(&num_sym);
    let mut den = String::new();
    if !d.is_one() {
        den.push_str(&d.to_string());
    }
    if latex && !den.is_empty() && !den_sym.is_empty() {
        den.push(' ');
    }
    den.push_str(&den_sym);
    let body = if den.is_empty() {
        if num == "1" { String::new() } else { num }
    } else if latex {
        format!("\\frac{{{num}}}{{{den}}}")
    } else {
        format!("({num}/{den})")
    };
    (neg, body)
}

struct Pattern<L: SpinLabel> {
    plain: String,
    latex: String,
    sum: OperatorSum<L>,
}

fn patterns<L: SpinLabel>(assumptions: Assumptions) -> Vec<Pattern<L>> {
    let sp = L::spin_vector_symbol(false);
    let sl = L::spin_vector_symbol(true);
    let e = |k| Factor::Field(Field::e(k));
    let mut out = vec![
        Pattern { plain: "Π²".into(), latex: "\\mathbf{\\Pi}^2".into(), sum: pi_squared::<L>() },
        Pattern { plain: format!("{sp}·B"), latex: format!("{sl}\\cdot\\mathbf{{B}}"), sum: spin_dot_b::<L>() },
        Pattern {
            plain: format!("{sp}·(E×Π)"),
            latex: format!("{sl}\\cdot(\\mathbf{{E}}\\times\\mathbf{{\\Pi}})"),
            sum: spin_orbit::<L>(assumptions),
        },
        Pattern {
            plain: format!("{sp}·(Π×E)"),
            latex: format!("{sl}\\cdot(\\mathbf{{\\Pi}}\\times\\mathbf{{E}})"),
            sum: spin_dot_cross::<L>(Factor::Pi, e, assumptions),
        },
        Pattern { plain: "(∇·E)".into(), latex: "(\\nabla\\cdot\\mathbf{E})".into(), sum: div_e::<L>(assumptions) },
        Pattern {
            plain: format!("{sp}·(∇×E)"),
            latex: format!("{sl}\\cdot(\\nabla\\times\\mathbf{{E}})"),
            sum: spin_dot_curl_e::<L>(assumptions),
        },
    ];
    if L::alpha(Axis::X).is_some() {
        let alpha_dot = |f: &dyn Fn(Axis) -> Factor| {
            let mut s = OperatorSum::<L>::zero();
            for k in Axis::ALL {
                let label = L::alpha(k).expect("family has α");
                s = &s + &OperatorSum::term(ConstantMonomial::one(), label, &[f(k)]).expect("single factor");
            }
            s
        };
        out.push(Pattern { plain: "α·Π".into(), latex: "\\boldsymbol{\\alpha}\\cdot\\mathbf{\\Pi}".into(), sum: alpha_dot(&Factor::Pi) });
        out.push(Pattern { plain: "α·E".into(), latex: "\\boldsymbol{\\alpha}\\cdot\\mathbf{E}".into(), sum: alpha_dot(&e) });
    }
    out.retain(|p| !p.sum.is_zero());
    out
}

/// Finds `M · prefix · pattern` contained in `rest` that covers term `t`.
fn match_group<L: SpinLabel>(
    rest: &OperatorSum<L>,
    t: &OperatorTerm<L>,
    pattern: &OperatorSum<L>,
    prefix: L,
) -> Option<(ConstantMonomial, OperatorSum<L>)> {
    let shifted = OperatorSum::label(prefix).mul(pattern).ok()?;
    for p in shifted.terms() {
        if p.label != t.label || p.factors != t.factors {
            continue;
        }
        let scale = ConstantMonomial::new(&t.coeff / &p.coeff, Powers::new(
            t.powers.hbar - p.powers.hbar,
            t.powers.e - p.powers.e,
            t.powers.m - p.powers.m,
            t.powers.c - p.powers.c,
        ));
        let candidate = shifted.scale(&scale);
        let covered = candidate
            .terms()
            .all(|c| rest.coefficient(c.powers, c.label, &c.factors) == c.coeff);
        if covered {
            return Some((scale, candidate));
        }
    }
    None
}

/// Human-readable rendering that groups vector patterns, e.g.
/// `β m c² - e V + (1/2m) β Π² + (eħ/2m) β Σ·B`.
pub fn render_grouped<L: SpinLabel>(s: &OperatorSum<L>, latex: bool) -> String {
    let pats = patterns::<L>(s.assumptions());
    let mut rest = s.clone();
    let mut items = Vec::new();
    while let Some(t) = { let next = rest.terms().next(); next } {
        let mut found = None;
        'search: for pat in &pats {
            for &prefix in L::prefixes() {
                if let Some((scale, covered)) = match_group(&rest, &t, &pat.sum, prefix) {
                    found = Some((scale, prefix, pat, covered));
                    break 'search;
                }
            }
        }
        match found {
            Some((scale, prefix, pat, covered)) => {
                let (neg, mag) = monomial_fraction(&scale, latex);
                let mut parts: Vec<String> = Vec::new();
                if !mag.is_empty() {
                    parts.push(mag);
                }
                if prefix != L::IDENTITY {
                    parts.push(if latex { prefix.latex() } else { prefix.symbol() }.to_string());
                }
                parts.push(if latex { pat.latex.clone() } else { pat.plain.clone() });
                items.push((group_key(&t), (neg, parts.join(" "))));
                rest = &rest - &covered;
            }
            None => {
                let single = rest.filter(|u| u.label == t.label && u.factors == t.factors && u.powers == t.powers);
                items.push((group_key(&t), grouped_term(&t, latex)));
                rest = &rest - &single;
            }
        }
    }
    items.sort_by_key(|(key, _)| *key);
    join_signed(items.into_iter().map(|(_, item)| item))
}

/// Display order: descending `c` degree, then fewer field factors, then more momenta.
fn group_key<L: SpinLabel>(t: &OperatorTerm<L>) -> (std::cmp::Reverse<i32>, usize, std::cmp::Reverse<usize>) {
    let fields = t.factors.len() - t.pi_count();
    (std::cmp::Reverse(t.c_degree()), fields, std::cmp::Reverse(t.pi_count()))
}

fn grouped_term<L: SpinLabel>(t: &OperatorTerm<L>, latex: bool) -> (bool, String) {
    let (neg, mag) = monomial_fraction(&t.monomial(), latex);
    let mut parts: Vec<String> = Vec::new();
    if !mag.is_empty() {
        parts.push(mag);
    }
    if t.label != L::IDENTITY {
        parts.push(if latex { t.label.latex() } else { t.label.symbol() }.to_string());
    }
    for f in &t.factors {
        parts.push(if latex { f.latex() } else { f.to_string() });
    }
    if parts.is_empty() {
        parts.push("1".into());
    }
    (neg, parts.join(" "))
}

/// Grouped rendering of `prefactor · prefix · (base)²`.
pub fn render_square_grouped<L: SpinLabel>(sq: &EvenSquare<L>, latex: bool) -> (bool, String) {
    let (neg, mag) = monomial_fraction(&sq.prefactor, latex);
    let mut parts: Vec<String> = Vec::new();
    if !mag.is_empty() {
        parts.push(mag);
    }
    if sq.prefix != L::IDENTITY {
        parts.push(if latex { sq.prefix.latex() } else { sq.prefix.symbol() }.to_string());
    }
    let inner = render_grouped(&sq.base, latex);
    parts.push(if latex { format!("\\left({inner}\\right)^2") } else { format!("({inner})²") });
    (neg, parts.join(" "))
}

/// Joins already-rendered signed pieces with ` + ` / ` - `.
pub fn join_terms(items: impl IntoIterator<Item = (bool, String)>) -> String {
    join_signed(items)
}
