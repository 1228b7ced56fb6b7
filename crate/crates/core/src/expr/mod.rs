//! Exact graded polynomial kernel.
//!
//! Expressions are polynomials over `ℚ` in the jet coordinates of even and
//! odd fields (plus optional polynomial dependence on the base coordinates).
//! Odd variables anticommute, so every monomial stores its odd factors in the
//! global canonical variable order and the coefficient absorbs the sign.

mod display;
mod multi_index;
mod poly;
mod system;

use thiserror::Error;

pub use display::{format_component, format_jet_var, format_rational, ExprDisplay};
pub use multi_index::MultiIndex;
pub use poly::{Expr, Monomial};
pub use system::{Component, FieldDecl, FieldId, FieldRole, FieldSystem, Grading, JetVar, Parity};

pub type Rational = num::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("base dimension must be positive")]
    InvalidBaseDim,
    #[error("field `{0}` declared twice")]
    DuplicateField(String),
    #[error("field `{0}` has an empty or zero-sized fiber shape")]
    InvalidShape(String),
    #[error("field `{field}` with role {role:?} has the wrong parity")]
    RoleParity { field: String, role: FieldRole },
    #[error("ghost `{0}` cannot be paired with the requested parameter")]
    InvalidGhostPairing(String),
    #[error("too many fields")]
    TooManyFields,
    #[error("unknown field id {0}")]
    UnknownField(u16),
    #[error("fiber index {index:?} out of range for field `{field}`")]
    FiberOutOfRange { field: String, index: Vec<usize> },
    #[error("base dimension mismatch: expected {expected}, found {found}")]
    BaseDimMismatch { expected: usize, found: usize },
    #[error("variable {0} does not belong to this field system")]
    ForeignVariable(String),
}

#[cfg(test)]
mod tests;
