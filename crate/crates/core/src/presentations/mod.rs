//! Instance, uncurried and curried presentations, their morphisms, the
//! collage construction and validation up to provable equality.

mod curried;
mod instance;
mod uncurried;
mod validate;

use serde::Serialize;
use thiserror::Error;

use crate::prover::{ProofOutcome, ProverError, Verdict};
use crate::syntax::{Name, SyntaxError};

pub use curried::{at_name, CurriedMorphism, CurriedPresentation};
pub use instance::{Generator, InstanceMorphism, InstancePresentation, Term, TermEquation};
pub use uncurried::{build_collage, fiber_instance, CrossEquation, CrossPath, ProSym, UncurriedMorphism, UncurriedPresentation};
pub use validate::{
    morphisms_equal, validate_cat_morphism, validate_curried, validate_curried_morphism, validate_instance_morphism, validate_morphism,
    validate_uncurried_morphism, AnyMorphism, CrossProver, TermProver,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Prover(#[from] ProverError),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(Name),
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("duplicate name `{0}`")]
    Duplicate(Name),
    #[error("base mismatch: {0}")]
    BaseMismatch(String),
    #[error("no image given for `{0}`")]
    MissingImage(Name),
    #[error("not composable: {0}")]
    NotComposable(String),
    #[error("`{0}` is not a cross-path")]
    NotACrossPath(String),
    #[error("action of `{symbol}` has no image for generator `{generator}`")]
    MissingAction { symbol: Name, generator: Name },
    #[error("frame mismatch: {0}")]
    FrameMismatch(String),
    #[error("morphisms are of different kinds")]
    KindMismatch,
    #[error("morphisms are not parallel")]
    NotParallel,
    #[error("morphism `{0}` is not globular")]
    NonGlobular(Name),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ValidationStatus {
    Valid,
    /// Some obligation was refuted by a completed rewrite system.
    Invalid,
    /// Nothing refuted, but some obligation was not proved within budget.
    Inconclusive,
}

/// One equation that has to hold up to provable equality.
#[derive(Clone, Debug)]
pub struct Obligation {
    /// Where the obligation comes from, e.g. `eq 0` or `square (f, y)`.
    pub label: String,
    pub lhs: String,
    pub rhs: String,
    pub outcome: ProofOutcome,
}

#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub subject: Name,
    pub obligations: Vec<Obligation>,
}

impl ValidationReport {
    pub fn new(subject: impl Into<Name>) -> Self {
        ValidationReport { subject: subject.into(), obligations: Vec::new() }
    }

    pub fn push(&mut self, label: impl Into<String>, lhs: impl ToString, rhs: impl ToString, outcome: ProofOutcome) {
        self.obligations.push(Obligation { label: label.into(), lhs: lhs.to_string(), rhs: rhs.to_string(), outcome });
    }

    pub fn extend(&mut self, prefix: &str, other: ValidationReport) {
        for mut o in other.obligations {
            o.label = format!("{prefix}: {}", o.label);
            self.obligations.push(o);
        }
    }

    pub fn status(&self) -> ValidationStatus {
        if self.obligations.iter().any(|o| o.outcome.is_refuted()) {
            ValidationStatus::Invalid
        } else if self.obligations.iter().all(|o| o.outcome.is_proved()) {
            ValidationStatus::Valid
        } else {
            ValidationStatus::Inconclusive
        }
    }

    pub fn is_valid(&self) -> bool {
        self.status() == ValidationStatus::Valid
    }

    /// The first refuted obligation.
    pub fn counterexample(&self) -> Option<&Obligation> {
        self.obligations.iter().find(|o| o.outcome.is_refuted())
    }

    /// Obligations that are not proved, refuted ones included.
    pub fn open(&self) -> impl Iterator<Item = &Obligation> {
        self.obligations.iter().filter(|o| !o.outcome.is_proved())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let obligations: Vec<serde_json::Value> = self
            .obligations
            .iter()
            .map(|o| {
                let mut v = serde_json::json!({ "label": o.label, "lhs": o.lhs, "rhs": o.rhs });
                let verdict = serde_json::to_value(o.outcome.verdict).expect("verdict serializes");
                if let (Some(obj), serde_json::Value::Object(vm)) = (v.as_object_mut(), verdict) {
                    obj.extend(vm);
                }
                v
            })
            .collect();
        serde_json::json!({ "subject": self.subject.as_str(), "status": self.status(), "obligations": obligations })
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let status = match self.status() {
            ValidationStatus::Valid => "valid",
            ValidationStatus::Invalid => "invalid",
            ValidationStatus::Inconclusive => "inconclusive",
        };
        writeln!(f, "{}: {status}", self.subject)?;
        for o in &self.obligations {
            let v = match o.outcome.verdict {
                Verdict::Proved { depth } => format!("proved (depth {depth})"),
                Verdict::Decided { equal: true } => "decided equal".to_string(),
                Verdict::Decided { equal: false } => "decided distinct".to_string(),
                Verdict::NotProvedWithinBudget => "not proved within budget".to_string(),
            };
            writeln!(f, "  {}: {} = {}  {v}", o.label, o.lhs, o.rhs)?;
        }
        Ok(())
    }
}
