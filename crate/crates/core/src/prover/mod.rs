//! Word problems for presentations: bounded congruence closure, completion,
//! and a shared three-valued answer.

mod closure;
mod completion;
mod derivation;
mod theory;

use std::sync::{Arc, OnceLock};

use serde::Serialize;
use thiserror::Error;

use crate::syntax::{CatMorphism, CatPresentation, Name, Path, SyntaxError};

pub use closure::{Closure, MAX_UNIVERSE};
pub use completion::{complete, CompletionFailure, RewriteSystem, Rule};
pub use derivation::{derivation_json, replay, Derivation, ReplayError, Step};
pub use theory::{FunInfo, Origin, SortInfo, Theory, TheoryBuilder, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProverError {
    #[error("paths are not parallel: `{lhs}` and `{rhs}`")]
    NonParallel { lhs: String, rhs: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(Name),
    #[error("unknown sort `{0}`")]
    UnknownSort(Name),
    #[error("ill-typed word `{0}`")]
    IllTyped(String),
    #[error("morphisms are not parallel")]
    NotParallel,
    #[error("morphisms are of different kinds")]
    KindMismatch,
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}

/// Search limits shared by closure, completion and enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Budget {
    pub max_path_length: usize,
    pub max_closure_rounds: usize,
    pub max_kb_steps: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_path_length: 8, max_closure_rounds: 16, max_kb_steps: 500 }
    }
}

impl Budget {
    pub fn with_length(self, n: usize) -> Self {
        Budget { max_path_length: n, ..self }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
pub struct BudgetUsed {
    pub path_length: usize,
    pub closure_rounds: usize,
    pub kb_steps: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// A derivation was found; `depth` is its height.
    Proved { depth: usize },
    /// No derivation inside the budget; says nothing about the converse.
    NotProvedWithinBudget,
    /// Exact answer from a completed rewrite system.
    Decided { equal: bool },
}

#[derive(Clone, Debug)]
pub struct ProofOutcome {
    pub verdict: Verdict,
    pub witness: Option<Arc<Derivation>>,
    pub budget_used: BudgetUsed,
}

impl ProofOutcome {
    pub fn is_proved(&self) -> bool {
        matches!(self.verdict, Verdict::Proved { .. } | Verdict::Decided { equal: true })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self.verdict, Verdict::Decided { equal: false })
    }

    fn bare(verdict: Verdict) -> Self {
        ProofOutcome { verdict, witness: None, budget_used: BudgetUsed::default() }
    }

    /// Combines per-component answers: all proved, any refuted, or unknown.
    pub fn all(parts: impl IntoIterator<Item = ProofOutcome>) -> ProofOutcome {
        let mut any_closure = false;
        let mut depth = 0;
        let mut unknown = false;
        let mut used = BudgetUsed::default();
        for p in parts {
            used.path_length = used.path_length.max(p.budget_used.path_length);
            used.closure_rounds = used.closure_rounds.max(p.budget_used.closure_rounds);
            used.kb_steps = used.kb_steps.max(p.budget_used.kb_steps);
            match p.verdict {
                Verdict::Decided { equal: false } => {
                    return ProofOutcome { verdict: p.verdict, witness: None, budget_used: used };
                }
                Verdict::Decided { equal: true } => {}
                Verdict::Proved { depth: d } => {
                    any_closure = true;
                    depth = depth.max(d);
                }
                Verdict::NotProvedWithinBudget => unknown = true,
            }
        }
        let verdict = if unknown {
            Verdict::NotProvedWithinBudget
        } else if any_closure {
            Verdict::Proved { depth }
        } else {
            Verdict::Decided { equal: true }
        };
        ProofOutcome { verdict, witness: None, budget_used: used }
    }
}

/// Which procedures [`Prover`] may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Completion when it finishes within budget, closure otherwise.
    #[default]
    Auto,
    ClosureOnly,
    CompletionOnly,
}

/// Canonical class key: exact normal forms or closure classes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Canon {
    Normal(Word),
    Class(usize),
}

/// Decision procedures for one theory; completion and closure are built on first use.
pub struct Prover {
    theory: Arc<Theory>,
    budget: Budget,
    strategy: Strategy,
    completion: OnceLock<Result<Arc<RewriteSystem>, CompletionFailure>>,
    closure: OnceLock<Arc<Closure>>,
}

impl std::fmt::Debug for Prover {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Prover").field("theory", self.theory.name()).field("budget", &self.budget).finish()
    }
}

impl Prover {
    pub fn new(theory: Arc<Theory>, budget: Budget) -> Self {
        Prover::with_strategy(theory, budget, Strategy::Auto)
    }

    pub fn with_strategy(theory: Arc<Theory>, budget: Budget, strategy: Strategy) -> Self {
        Prover { theory, budget, strategy, completion: OnceLock::new(), closure: OnceLock::new() }
    }

    pub fn for_category(cat: &CatPresentation, budget: Budget) -> Result<Self, ProverError> {
        Ok(Prover::new(Arc::new(Theory::from_category(cat)?), budget))
    }

    pub fn theory(&self) -> &Arc<Theory> {
        &self.theory
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    /// The completed system, if completion is allowed and finished within budget.
    pub fn rewrite_system(&self) -> Option<&Arc<RewriteSystem>> {
        if self.strategy == Strategy::ClosureOnly {
            return None;
        }
        self.completion_result().as_ref().ok()
    }

    pub fn completion_result(&self) -> &Result<Arc<RewriteSystem>, CompletionFailure> {
        self.completion.get_or_init(|| complete(&self.theory, self.budget.max_kb_steps).map(Arc::new))
    }

    pub fn closure(&self) -> &Arc<Closure> {
        self.closure.get_or_init(|| Arc::new(Closure::build(&self.theory, self.budget.max_path_length, self.budget.max_closure_rounds)))
    }

    /// Class keys agree only for provably equal words; with completion they
    /// agree exactly for equal words.
    pub fn canonical(&self, w: &Word) -> Option<Canon> {
        if let Some(rs) = self.rewrite_system() {
            return Some(Canon::Normal(rs.normalize(w)));
        }
        if self.strategy == Strategy::CompletionOnly {
            return None;
        }
        self.closure().class_of(w).map(Canon::Class)
    }

    /// True when [`Prover::canonical`] decides equality exactly.
    pub fn is_exact(&self) -> bool {
        self.rewrite_system().is_some()
    }

    pub fn prove_words(&self, a: &Word, b: &Word) -> Result<ProofOutcome, ProverError> {
        let th = &self.theory;
        if !th.is_well_typed(a) || !th.is_well_typed(b) {
            return Err(ProverError::IllTyped(format!("{} / {}", th.render(a), th.render(b))));
        }
        if a.src != b.src || a.tgt != b.tgt {
            return Err(ProverError::NonParallel { lhs: th.render(a), rhs: th.render(b) });
        }
        if let Some(rs) = self.rewrite_system() {
            let (na, pa) = rs.normalize_with_proof(th, a);
            let (nb, pb) = rs.normalize_with_proof(th, b);
            let used = BudgetUsed { kb_steps: rs.steps_used(), ..Default::default() };
            if na == nb {
                return Ok(ProofOutcome {
                    verdict: Verdict::Decided { equal: true },
                    witness: Some(Derivation::trans(pa, Derivation::sym(pb))),
                    budget_used: used,
                });
            }
            return Ok(ProofOutcome { verdict: Verdict::Decided { equal: false }, witness: None, budget_used: used });
        }
        let mut used = match self.completion_result() {
            Err(CompletionFailure::StepBudget { steps, .. }) if self.strategy != Strategy::ClosureOnly => {
                BudgetUsed { kb_steps: *steps, ..Default::default() }
            }
            _ => BudgetUsed::default(),
        };
        if self.strategy == Strategy::CompletionOnly {
            return Ok(ProofOutcome { budget_used: used, ..ProofOutcome::bare(Verdict::NotProvedWithinBudget) });
        }
        if a == b {
            return Ok(ProofOutcome {
                verdict: Verdict::Proved { depth: 1 },
                witness: Some(Derivation::refl(a.clone())),
                budget_used: used,
            });
        }
        let cl = self.closure();
        used.path_length = cl.max_len();
        used.closure_rounds = cl.rounds_used();
        match cl.explain(th, a, b) {
            Some(d) => Ok(ProofOutcome { verdict: Verdict::Proved { depth: d.depth() }, witness: Some(d), budget_used: used }),
            None => Ok(ProofOutcome { budget_used: used, ..ProofOutcome::bare(Verdict::NotProvedWithinBudget) }),
        }
    }

    /// Paths of a plain (non-collage) theory, by local names.
    pub fn prove_paths(&self, p: &Path, q: &Path) -> Result<ProofOutcome, ProverError> {
        let a = self.theory.word(Origin::Plain, p)?;
        let b = self.theory.word(Origin::Plain, q)?;
        self.prove_words(&a, &b)
    }
}

/// Decides or searches for `p ≈ q` in the presentation `cat`.
pub fn prove_path_eq(cat: &CatPresentation, p: &Path, q: &Path, budget: Budget) -> Result<ProofOutcome, ProverError> {
    Prover::for_category(cat, budget)?.prove_paths(p, q)
}

/// Completion of a category presentation under its term order.
pub fn complete_rewrite_system(cat: &CatPresentation, budget: Budget) -> Result<(Arc<Theory>, RewriteSystem), ProverError> {
    let th = Arc::new(Theory::from_category(cat)?);
    match complete(&th, budget.max_kb_steps) {
        Ok(rs) => Ok((th, rs)),
        Err(e) => Err(ProverError::IllTyped(e.to_string())),
    }
}

/// Provable equality of parallel morphisms of category presentations.
pub fn cat_morphisms_equal(f: &CatMorphism, g: &CatMorphism, budget: Budget) -> Result<ProofOutcome, ProverError> {
    if f.source() != g.source() || f.target() != g.target() {
        return Err(ProverError::NotParallel);
    }
    if f.sort_map() != g.sort_map() {
        return Ok(ProofOutcome::bare(Verdict::Decided { equal: false }));
    }
    let prover = Prover::for_category(f.target(), budget)?;
    let mut parts = Vec::new();
    for (sym, img) in f.fun_map() {
        parts.push(prover.prove_paths(img, &g.fun_map()[sym])?);
    }
    Ok(ProofOutcome::all(parts))
}
