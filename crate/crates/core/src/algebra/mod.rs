//! Noncommutative operator algebra over Dirac labels, kinetic momenta and fields.

pub mod hamiltonian;
mod label;
pub mod parse;
pub mod render;
mod sum;
mod symbols;

pub use hamiltonian::EvenSquare;
pub use parse::{parse_operator, ParseError};
pub use render::{render_grouped, render_latex, render_plain};
pub use label::{Pauli, SpinLabel};
pub use sum::{DroppedCounts, OperatorSum, OperatorTerm, TermKey};
pub use symbols::{
    Assumptions, ConstantMonomial, Factor, Field, FieldBase, MultiIndex, Powers, MAX_DERIVATIVE_ORDER,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("derivative order cap exceeded while forming {field}")]
    DerivativeOverflow { field: String },
    #[error("operator is not purely odd")]
    NotOdd,
    #[error("operator is not purely even")]
    NotEven,
    #[error("{0}")]
    Unsupported(String),
}
