//! Exact symbolic computation of motivic zeta functions from combinatorial
//! stratification data.
//!
//! The crate evaluates the naive, dlt, topological, stringy and global
//! degeneration zeta functions of a stratified model, normalizes them over
//! binomial denominators, reads off candidate and effective poles, generates
//! snc models for monomial functions from smooth fans (with star-subdivision
//! moves to test blow-up invariance), and verifies closed forms against a
//! brute-force jet-counting oracle over finite fields.
//!
//! All arithmetic is exact: big-integer coefficients, exact rationals, and a
//! free polynomial model of the coefficient ring in which class symbols are
//! independent transcendentals.

pub mod engine;
pub mod error;
pub mod jets;
pub mod model;
pub mod poles;
pub mod qfun;
pub mod ring;
pub mod toric;
pub mod util;

pub use error::{Error, Result, Violation};
pub use model::{load_model, model_from_json, DivisorDatum, ModelKind, StratifiedModel, StratumDatum};
pub use ring::{Binomial, FactorStyle, MotiveExpr, NormalZeta, ZetaExpr, ZetaFactor};
