//! Homogeneous polynomials and polynomial differential forms.

mod form;
mod parse;
mod poly;

pub use form::{index_set, indices_of, wedge_sign, DiffForm, IndexSet, MAX_FORM_VARS};
pub use parse::{infer_nvars, poly_parse};
pub use poly::{GradedPolynomial, Monomial};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("variable index {index} out of range for {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },
    #[error("variable counts differ ({left} vs {right})")]
    NvarsMismatch { left: usize, right: usize },
    #[error("expected a homogeneous value")]
    NonHomogeneous,
    #[error("expected a form of a single form degree")]
    MixedFormDegree,
}
