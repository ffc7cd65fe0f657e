//! Exact coefficient-ring and zeta-expression arithmetic.

pub mod motive;
pub mod parse;
pub mod zeta;

pub use motive::{MotiveExpr, SymbolMonomial};
pub use parse::parse_motive_expr;
pub use zeta::{Binomial, FactorStyle, NormalZeta, ZetaExpr, ZetaFactor};
