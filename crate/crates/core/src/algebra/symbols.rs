use std::fmt;
use std::ops::Add;

use num_traits::{One, Zero};

use crate::dirac::Axis;
use crate::scalar::GaussianRational;

/// Highest total derivative order carried by field symbols.
pub const MAX_DERIVATIVE_ORDER: u8 = 2;

/// Position-dependent field kinds. `A` never appears; only `Π`, `B` and `E` do.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FieldBase {
    V,
    E(Axis),
    B(Axis),
}

/// Counts of `∂_x, ∂_y, ∂_z` applied to a field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MultiIndex(pub [u8; 3]);

impl MultiIndex {
    pub fn order(self) -> u8 {
        self.0.iter().sum()
    }

    pub fn plus(mut self, axis: Axis) -> Self {
        self.0[axis.index()] += 1;
        self
    }

    /// Removes one derivative along `axis`; `None` if there is none.
    pub fn minus(mut self, axis: Axis) -> Option<Self> {
        let slot = &mut self.0[axis.index()];
        if *slot == 0 {
            return None;
        }
        *slot -= 1;
        Some(self)
    }

    pub fn count(self, axis: Axis) -> u8 {
        self.0[axis.index()]
    }

    /// `"xy"` for `∂_x∂_y`.
    pub fn letters(self) -> String {
        Axis::ALL
            .iter()
            .flat_map(|&a| std::iter::repeat_n(a.letter(), self.count(a) as usize))
            .collect()
    }
}

/// A field, possibly differentiated: `V`, `E_j`, `B_j`, `∂_xy E_z`, ...
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Field {
    pub base: FieldBase,
    pub deriv: MultiIndex,
}

impl Field {
    pub const V: Field = Field { base: FieldBase::V, deriv: MultiIndex([0; 3]) };

    pub fn e(axis: Axis) -> Field {
        Field { base: FieldBase::E(axis), deriv: MultiIndex::default() }
    }

    pub fn b(axis: Axis) -> Field {
        Field { base: FieldBase::B(axis), deriv: MultiIndex::default() }
    }

    pub fn derivative(self, axis: Axis) -> Field {
        Field { base: self.base, deriv: self.deriv.plus(axis) }
    }

    pub fn is_electric(self) -> bool {
        matches!(self.base, FieldBase::V | FieldBase::E(_))
    }

    pub fn is_magnetic(self) -> bool {
        matches!(self.base, FieldBase::B(_))
    }

    fn base_symbol(self) -> String {
        match self.base {
            FieldBase::V => "V".into(),
            FieldBase::E(a) => format!("E_{}", a.letter()),
            FieldBase::B(a) => format!("B_{}", a.letter()),
        }
    }

    pub fn latex(self) -> String {
        let base = match self.base {
            FieldBase::V => "V".to_string(),
            FieldBase::E(a) => format!("E_{}", a.letter()),
            FieldBase::B(a) => format!("B_{}", a.letter()),
        };
        if self.deriv.order() == 0 {
            base
        } else {
            format!("(\\partial_{{{}}} {})", self.deriv.letters(), base)
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.deriv.order() == 0 {
            f.write_str(&self.base_symbol())
        } else {
            write!(f, "∂_{}{}", self.deriv.letters(), self.base_symbol())
        }
    }
}

/// One factor of an operator word. Fields sort before momenta, which is the
/// normal order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Factor {
    Field(Field),
    Pi(Axis),
}

impl Factor {
    pub fn latex(self) -> String {
        match self {
            Factor::Field(field) => field.latex(),
            Factor::Pi(a) => format!("\\Pi_{}", a.letter()),
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Field(field) => write!(f, "{field}"),
            Factor::Pi(a) => write!(f, "Π_{}", a.letter()),
        }
    }
}

/// Exponents of the formal constants `ħ, e, m, c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Powers {
    pub hbar: i32,
    pub e: i32,
    pub m: i32,
    pub c: i32,
}

impl Powers {
    pub const ONE: Powers = Powers { hbar: 0, e: 0, m: 0, c: 0 };

    pub fn new(hbar: i32, e: i32, m: i32, c: i32) -> Self {
        Self { hbar, e, m, c }
    }

    pub fn inverse(self) -> Self {
        Self::new(-self.hbar, -self.e, -self.m, -self.c)
    }

    pub fn scaled(self, k: i32) -> Self {
        Self::new(self.hbar * k, self.e * k, self.m * k, self.c * k)
    }

    pub fn is_one(self) -> bool {
        self == Self::ONE
    }

    fn entries(self) -> [(&'static str, &'static str, i32); 4] {
        [("ħ", "\\hbar", self.hbar), ("e", "e", self.e), ("m", "m", self.m), ("c", "c", self.c)]
    }

    /// `ħ e m^-1 c^2` style; empty string for no constants.
    pub fn plain(self) -> String {
        self.entries()
            .iter()
            .filter(|(_, _, p)| *p != 0)
            .map(|(s, _, p)| if *p == 1 { s.to_string() } else { format!("{s}^{p}") })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Numerator and denominator symbol strings, e.g. `("eħ", "m²c²")`.
    pub fn split_fraction(self, latex: bool) -> (String, String) {
        let mut num = String::new();
        let mut den = String::new();
        // e before ħ reads naturally in `eħ/2m`
        let order = [1usize, 0, 2, 3];
        let entries = self.entries();
        for idx in order {
            let (plain, tex, p) = entries[idx];
            if p == 0 {
                continue;
            }
            let sym = if latex { tex } else { plain };
            let target = if p > 0 { &mut num } else { &mut den };
            let abs = p.unsigned_abs();
            if latex && !target.is_empty() {
                target.push(' ');
            }
            target.push_str(sym);
            if abs > 1 {
                if latex {
                    target.push_str(&format!("^{{{abs}}}"));
                } else {
                    target.push_str(&superscript(abs));
                }
            }
        }
        (num, den)
    }
}

fn superscript(n: u32) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string().chars().map(|c| DIGITS[c.to_digit(10).unwrap() as usize]).collect()
}

impl Add for Powers {
    type Output = Powers;
    fn add(self, o: Powers) -> Powers {
        Powers::new(self.hbar + o.hbar, self.e + o.e, self.m + o.m, self.c + o.c)
    }
}

/// Exact coefficient times a product of formal constants.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConstantMonomial {
    pub coeff: GaussianRational,
    pub powers: Powers,
}

impl ConstantMonomial {
    pub fn new(coeff: GaussianRational, powers: Powers) -> Self {
        Self { coeff, powers }
    }

    pub fn one() -> Self {
        Self::new(GaussianRational::one(), Powers::ONE)
    }

    pub fn c_degree(&self) -> i32 {
        self.powers.c
    }

    pub fn mul(&self, other: &ConstantMonomial) -> ConstantMonomial {
        ConstantMonomial::new(&self.coeff * &other.coeff, self.powers + other.powers)
    }

    pub fn inverse(&self) -> Option<ConstantMonomial> {
        Some(ConstantMonomial::new(self.coeff.inv()?, self.powers.inverse()))
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }
}

/// Assumptions under which field symbols are normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Assumptions {
    /// `∇×E = 0`: derivatives of `E` are symmetric (`E = −∇V`).
    pub curl_free_e: bool,
    /// `B` is constant: all derivatives of `B` vanish.
    pub uniform_b: bool,
}

impl Assumptions {
    pub const NONE: Assumptions = Assumptions { curl_free_e: false, uniform_b: false };

    pub fn curl_free() -> Self {
        Self { curl_free_e: true, uniform_b: false }
    }

    pub fn union(self, other: Assumptions) -> Assumptions {
        Assumptions {
            curl_free_e: self.curl_free_e || other.curl_free_e,
            uniform_b: self.uniform_b || other.uniform_b,
        }
    }
}

/// A linear combination of field symbols with integer coefficients.
pub(crate) type FieldCombination = Vec<(i64, Field)>;

/// Canonical representative(s) of a field symbol under `assumptions`.
///
/// * `∂^d B_z` with a `z`-derivative is rewritten with `∇·B = 0`.
/// * Under `uniform_b`, differentiated `B` vanishes.
/// * Under `curl_free_e`, `∂^d E_j` depends only on `d + e_j`; the component
///   index is moved to the smallest axis present.
pub(crate) fn canonical_field(field: Field, assumptions: Assumptions) -> FieldCombination {
    match field.base {
        FieldBase::V => vec![(1, field)],
        FieldBase::E(j) => {
            if !assumptions.curl_free_e || field.deriv.order() == 0 {
                return vec![(1, field)];
            }
            let total = field.deriv.plus(j);
            let k = Axis::ALL.into_iter().find(|&a| total.count(a) > 0).expect("nonempty");
            let deriv = total.minus(k).expect("k present");
            vec![(1, Field { base: FieldBase::E(k), deriv })]
        }
        FieldBase::B(j) => {
            if field.deriv.order() == 0 {
                return vec![(1, field)];
            }
            if assumptions.uniform_b {
                return Vec::new();
            }
            if j == Axis::Z {
                if let Some(rest) = field.deriv.minus(Axis::Z) {
                    return vec![
                        (-1, Field { base: FieldBase::B(Axis::X), deriv: rest.plus(Axis::X) }),
                        (-1, Field { base: FieldBase::B(Axis::Y), deriv: rest.plus(Axis::Y) }),
                    ];
                }
            }
            vec![(1, field)]
        }
    }
}
