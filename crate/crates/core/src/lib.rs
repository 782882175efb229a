//! Exact-arithmetic models of generalized geometric structures on invariant
//! frames.
//!
//! Everything in this crate computes over Gaussian rationals, so each
//! classifier returns a decision (with a witness on failure), never an
//! approximation.  The crate is organised around five layers:
//!
//! * [`exactalg`] — scalars, dense matrices, reduced row-echelon form,
//!   kernels, eigenspaces and canonical subspaces;
//! * [`frame`] — invariant frames with constant structure coefficients,
//!   invariant forms, the exterior/interior calculus and the (twisted)
//!   Courant bracket;
//! * [`structures`] — big-tangent-bundle operators, generalized almost
//!   contact/complex/metric structures and every classification predicate;
//! * [`constructions`] — bridges from classical tensor data (almost contact
//!   metric triples, complex and symplectic structures) and the product
//!   constructions;
//! * [`catalog`] — named built-in instances with their expected
//!   classification records.

pub mod catalog;
pub mod constructions;
pub mod exactalg;
pub mod frame;
pub mod structures;

use thiserror::Error;

/// Errors shared by all modules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix has non-real entries")]
    NotReal,
    #[error("operands belong to different frames")]
    FrameMismatch,
    #[error("frame carries no three-form twist")]
    MissingTwist,
    #[error("interior product of a degree-zero form")]
    DegreeZero,
    #[error("two-form is not closed")]
    NotClosed,
    #[error("span is not isotropic for the neutral pairing")]
    NotIsotropic,
    #[error("{0} is not invertible")]
    NotInvertible(&'static str),
    #[error("structure axioms fail: {0}")]
    Axioms(String),
    #[error("frame dimension must be positive")]
    EmptyFrame,
    #[error("unknown catalog id: {0}")]
    UnknownId(String),
}

/// One named check with an optional witness describing a failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckItem {
    pub name: String,
    pub pass: bool,
    pub witness: Option<String>,
}

impl CheckItem {
    pub fn pass(name: impl Into<String>) -> Self {
        CheckItem { name: name.into(), pass: true, witness: None }
    }

    pub fn fail(name: impl Into<String>, witness: impl Into<String>) -> Self {
        CheckItem { name: name.into(), pass: false, witness: Some(witness.into()) }
    }
}

/// A list of named checks; empty witness list means everything passed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub items: Vec<CheckItem>,
}

impl CheckReport {
    pub fn new() -> Self {
        CheckReport { items: Vec::new() }
    }

    pub fn push(&mut self, item: CheckItem) {
        self.items.push(item);
    }

    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckItem> {
        self.items.iter().filter(|i| !i.pass)
    }
}
