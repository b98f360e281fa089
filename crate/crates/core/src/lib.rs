pub mod algebra;
pub mod dirac;
pub mod fw;
pub mod grid;
pub mod identities;
pub mod landau;
pub mod scalar;
