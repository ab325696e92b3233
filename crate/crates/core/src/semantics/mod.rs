//! Bounded explicit models: hom tables of presented categories, element
//! tables of profunctors, the coend composite and isomorphism checks.
//!
//! A table built at depth `k` holds every class with a representative of at
//! most `k` category symbols. It is stabilized when completion succeeded and
//! one extension round past `k` found no new class, in which case it is the
//! whole model. A profunctor table is stabilized when its element
//! enumeration is complete, even over infinite base categories: the actions
//! by generating symbols are then total.

mod coend;
mod iso;
mod tables;

use std::fmt;

use thiserror::Error;

use crate::presentations::{CrossPath, PresentationError, Term};
use crate::syntax::Path;

pub use coend::coend_compose;
pub use iso::{check_mu_iso, check_mu_naturality, check_unit_hom, find_table_iso, IsoReport, IsoScope, IsoStatus, NaturalityReport};
pub use tables::{
    category_table, curried_table, instance_table, profunctor_table, saturate_theory, uncurried_table, CatElement, CrossElement,
    FiniteCategoryTable, ProfunctorSource, ProfunctorTable,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemanticsError {
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("middle tables differ: {0}")]
    MiddleMismatch(String),
    #[error("base tables differ: {0}")]
    BaseMismatch(String),
}

impl From<crate::prover::ProverError> for SemanticsError {
    fn from(e: crate::prover::ProverError) -> Self {
        SemanticsError::Presentation(e.into())
    }
}

/// Representative of a class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rep {
    Path(Path),
    Cross(CrossPath),
    Term(Term),
    Pair(Box<Rep>, Box<Rep>),
}

impl fmt::Display for Rep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rep::Path(p) => write!(f, "{p}"),
            Rep::Cross(c) => write!(f, "{c}"),
            Rep::Term(t) => write!(f, "{t}"),
            Rep::Pair(a, b) => write!(f, "<{a}, {b}>"),
        }
    }
}
