use std::collections::HashMap;
use std::sync::Arc;

use crate::prover::{cat_morphisms_equal, Budget, BudgetUsed, Canon, ProofOutcome, Prover, Strategy, Verdict, Word};
use crate::syntax::{CatMorphism, CatPresentation};

use super::curried::{CurriedMorphism, CurriedPresentation};
use super::instance::{InstanceMorphism, InstancePresentation, Term};
use super::uncurried::{CrossPath, UncurriedMorphism, UncurriedPresentation};
use super::{PresentationError, ValidationReport};

/// Provable equality of terms of one instance presentation.
#[derive(Debug)]
pub struct TermProver {
    inst: Arc<InstancePresentation>,
    prover: Prover,
}

impl TermProver {
    pub fn new(inst: Arc<InstancePresentation>, budget: Budget) -> Result<Self, PresentationError> {
        TermProver::with_strategy(inst, budget, Strategy::Auto)
    }

    pub fn with_strategy(inst: Arc<InstancePresentation>, budget: Budget, strategy: Strategy) -> Result<Self, PresentationError> {
        let th = Arc::new(inst.theory()?);
        Ok(TermProver { inst, prover: Prover::with_strategy(th, budget, strategy) })
    }

    pub fn instance(&self) -> &Arc<InstancePresentation> {
        &self.inst
    }

    pub fn prover(&self) -> &Prover {
        &self.prover
    }

    pub fn word(&self, t: &Term) -> Result<Word, PresentationError> {
        self.inst.term_word(self.prover.theory(), t)
    }

    pub fn term(&self, w: &Word) -> Term {
        self.inst.word_term(self.prover.theory(), w)
    }

    pub fn prove(&self, a: &Term, b: &Term) -> Result<ProofOutcome, PresentationError> {
        Ok(self.prover.prove_words(&self.word(a)?, &self.word(b)?)?)
    }

    pub fn canonical(&self, t: &Term) -> Result<Option<Canon>, PresentationError> {
        Ok(self.prover.canonical(&self.word(t)?))
    }
}

/// Provable equality of cross-paths in the collage of an uncurried presentation.
#[derive(Debug)]
pub struct CrossProver {
    pres: Arc<UncurriedPresentation>,
    prover: Prover,
}

impl CrossProver {
    pub fn new(pres: Arc<UncurriedPresentation>, budget: Budget) -> Result<Self, PresentationError> {
        CrossProver::with_strategy(pres, budget, Strategy::Auto)
    }

    pub fn with_strategy(pres: Arc<UncurriedPresentation>, budget: Budget, strategy: Strategy) -> Result<Self, PresentationError> {
        let th = Arc::new(pres.theory()?);
        Ok(CrossProver { pres, prover: Prover::with_strategy(th, budget, strategy) })
    }

    pub fn presentation(&self) -> &Arc<UncurriedPresentation> {
        &self.pres
    }

    pub fn prover(&self) -> &Prover {
        &self.prover
    }

    pub fn word(&self, cp: &CrossPath) -> Result<Word, PresentationError> {
        self.pres.cross_word(self.prover.theory(), cp)
    }

    pub fn cross(&self, w: &Word) -> Option<CrossPath> {
        self.pres.word_cross(self.prover.theory(), w)
    }

    pub fn prove(&self, a: &CrossPath, b: &CrossPath) -> Result<ProofOutcome, PresentationError> {
        Ok(self.prover.prove_words(&self.word(a)?, &self.word(b)?)?)
    }

    pub fn canonical(&self, cp: &CrossPath) -> Result<Option<Canon>, PresentationError> {
        Ok(self.prover.canonical(&self.word(cp)?))
    }
}

/// A borrowed morphism of any of the four kinds.
#[derive(Clone, Copy, Debug)]
pub enum AnyMorphism<'a> {
    Cat(&'a CatMorphism),
    Instance(&'a InstanceMorphism),
    Uncurried(&'a UncurriedMorphism),
    Curried(&'a CurriedMorphism),
}

pub fn validate_morphism(m: AnyMorphism<'_>, budget: Budget) -> Result<ValidationReport, PresentationError> {
    match m {
        AnyMorphism::Cat(f) => validate_cat_morphism(f, budget),
        AnyMorphism::Instance(f) => validate_instance_morphism(f, budget),
        AnyMorphism::Uncurried(f) => validate_uncurried_morphism(f, budget),
        AnyMorphism::Curried(f) => validate_curried_morphism(f, budget),
    }
}

/// Each source equation must map to a provable equality of the target.
pub fn validate_cat_morphism(f: &CatMorphism, budget: Budget) -> Result<ValidationReport, PresentationError> {
    let mut report = ValidationReport::new(f.name().clone());
    let prover = Prover::for_category(f.target(), budget)?;
    for (i, eq) in f.source().eqs().iter().enumerate() {
        let (l, r) = (f.apply(&eq.lhs)?, f.apply(&eq.rhs)?);
        let out = prover.prove_paths(&l, &r)?;
        report.push(format!("eq {i} ({} = {})", eq.lhs, eq.rhs), &l, &r, out);
    }
    Ok(report)
}

fn base_report(f: &CatMorphism, budget: Budget) -> Result<Option<ValidationReport>, PresentationError> {
    if f.is_identity_like() && f.source() == f.target() {
        return Ok(None);
    }
    validate_cat_morphism(f, budget).map(Some)
}

fn instance_obligations(f: &InstanceMorphism, target: &TermProver, report: &mut ValidationReport) -> Result<(), PresentationError> {
    for (i, eq) in f.source().eqs().iter().enumerate() {
        let (l, r) = (f.apply(&eq.lhs)?, f.apply(&eq.rhs)?);
        let out = target.prove(&l, &r)?;
        report.push(format!("eq {i} ({eq})"), &l, &r, out);
    }
    Ok(())
}

pub fn validate_instance_morphism(f: &InstanceMorphism, budget: Budget) -> Result<ValidationReport, PresentationError> {
    let mut report = ValidationReport::new(f.name().clone());
    if let Some(base) = base_report(f.base_map(), budget)? {
        report.extend("base", base);
    }
    let target = TermProver::new(f.target().clone(), budget)?;
    instance_obligations(f, &target, &mut report)?;
    Ok(report)
}

pub fn validate_uncurried_morphism(f: &UncurriedMorphism, budget: Budget) -> Result<ValidationReport, PresentationError> {
    let mut report = ValidationReport::new(f.name().clone());
    let target = CrossProver::new(f.target().clone(), budget)?;
    for (i, eq) in f.source().eqs().iter().enumerate() {
        let (l, r) = (f.apply(&eq.lhs)?, f.apply(&eq.rhs)?);
        let out = target.prove(&l, &r)?;
        report.push(format!("eq {i} ({eq})"), &l, &r, out);
    }
    Ok(report)
}

/// One [`TermProver`] per sort, built on first use.
struct Fibers<'a> {
    pres: &'a CurriedPresentation,
    budget: Budget,
    provers: HashMap<String, TermProver>,
}

impl<'a> Fibers<'a> {
    fn new(pres: &'a CurriedPresentation, budget: Budget) -> Self {
        Fibers { pres, budget, provers: HashMap::new() }
    }

    fn at(&mut self, c: &str) -> Result<&TermProver, PresentationError> {
        if !self.provers.contains_key(c) {
            let p = TermProver::new(self.pres.at(c).clone(), self.budget)?;
            self.provers.insert(c.to_string(), p);
        }
        Ok(&self.provers[c])
    }
}

/// Each action is a valid instance morphism, and each left equation
/// `p = p'` gives `P(p)(x) ≈ P(p')(x)` for every generator `x`.
pub fn validate_curried(p: &CurriedPresentation, budget: Budget) -> Result<ValidationReport, PresentationError> {
    let mut report = ValidationReport::new(p.name().clone());
    let mut fibers = Fibers::new(p, budget);
    for f in p.left().funs() {
        let action = p.action(f.name.as_str())?;
        let mut sub = ValidationReport::new(action.name().clone());
        instance_obligations(&action, fibers.at(f.src.as_str())?, &mut sub)?;
        report.extend(&format!("act {}", f.name), sub);
    }
    for (i, eq) in p.left().eqs().iter().enumerate() {
        let (c, c2) = (eq.lhs.src(), eq.lhs.tgt());
        for g in p.at(c2.as_str()).gens() {
            let x = Term::generator(g.name.clone(), g.sort.clone());
            let l = p.act_path(&eq.lhs, &x)?;
            let r = p.act_path(&eq.rhs, &x)?;
            let out = fibers.at(c.as_str())?.prove(&l, &r)?;
            report.push(format!("eq {i} ({} = {}) at {}", eq.lhs, eq.rhs, g.name), &l, &r, out);
        }
    }
    Ok(report)
}

/// Frame maps and components are valid, and every square
/// `φ_c(P(f)(x)) ≈ P'(F0 f)(φ_c'(x))` commutes.
pub fn validate_curried_morphism(m: &CurriedMorphism, budget: Budget) -> Result<ValidationReport, PresentationError> {
    let mut report = ValidationReport::new(m.name().clone());
    if let Some(r) = base_report(m.left_map(), budget)? {
        report.extend("left", r);
    }
    if let Some(r) = base_report(m.right_map(), budget)? {
        report.extend("right", r);
    }
    let (src, tgt) = (m.source(), m.target());
    let mut fibers = Fibers::new(tgt, budget);
    for c in src.left().sorts() {
        let comp = m.component(c.as_str())?;
        let tc = m.left_map().apply_sort(c).expect("total").clone();
        let mut sub = ValidationReport::new(comp.name().clone());
        instance_obligations(&comp, fibers.at(tc.as_str())?, &mut sub)?;
        report.extend(&format!("component {c}"), sub);
    }
    for f in src.left().funs() {
        let tc = m.left_map().apply_sort(&f.src).expect("total").clone();
        let ff = &m.left_map().fun_map()[&f.name];
        for g in src.at(f.tgt.as_str()).gens() {
            let x = Term::generator(g.name.clone(), g.sort.clone());
            let l = m.apply(f.src.as_str(), &src.act_term(f.name.as_str(), &x)?)?;
            let r = tgt.act_path(ff, &m.apply(f.tgt.as_str(), &x)?)?;
            let out = fibers.at(tc.as_str())?.prove(&l, &r)?;
            report.push(format!("square ({}, {})", f.name, g.name), &l, &r, out);
        }
    }
    Ok(report)
}

fn distinct() -> ProofOutcome {
    ProofOutcome { verdict: Verdict::Decided { equal: false }, witness: None, budget_used: BudgetUsed::default() }
}

fn frames_equal(f: &CatMorphism, g: &CatMorphism, budget: Budget) -> Result<ProofOutcome, PresentationError> {
    Ok(cat_morphisms_equal(f, g, budget)?)
}

fn same_cat(a: &Arc<CatPresentation>, b: &Arc<CatPresentation>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Provable equality of parallel morphisms of the same kind.
pub fn morphisms_equal(a: AnyMorphism<'_>, b: AnyMorphism<'_>, budget: Budget) -> Result<ProofOutcome, PresentationError> {
    match (a, b) {
        (AnyMorphism::Cat(f), AnyMorphism::Cat(g)) => Ok(cat_morphisms_equal(f, g, budget)?),
        (AnyMorphism::Instance(f), AnyMorphism::Instance(g)) => {
            if f.source() != g.source() || f.target() != g.target() {
                return Err(PresentationError::NotParallel);
            }
            let base = frames_equal(f.base_map(), g.base_map(), budget)?;
            if base.is_refuted() {
                return Ok(base);
            }
            let target = TermProver::new(f.target().clone(), budget)?;
            let mut parts = vec![base];
            for (gen, img) in f.images() {
                parts.push(target.prove(img, &g.images()[gen])?);
            }
            Ok(ProofOutcome::all(parts))
        }
        (AnyMorphism::Uncurried(f), AnyMorphism::Uncurried(g)) => {
            if f.source() != g.source() || f.target() != g.target() {
                return Err(PresentationError::NotParallel);
            }
            let target = CrossProver::new(f.target().clone(), budget)?;
            let mut parts = Vec::new();
            for (p, img) in f.images() {
                parts.push(target.prove(img, &g.images()[p])?);
            }
            Ok(ProofOutcome::all(parts))
        }
        (AnyMorphism::Curried(f), AnyMorphism::Curried(g)) => {
            if f.source() != g.source() || f.target() != g.target() {
                return Err(PresentationError::NotParallel);
            }
            if !same_cat(f.left_map().target(), g.left_map().target()) {
                return Err(PresentationError::NotParallel);
            }
            if f.left_map().sort_map() != g.left_map().sort_map() {
                return Ok(distinct());
            }
            let mut parts = vec![frames_equal(f.left_map(), g.left_map(), budget)?, frames_equal(f.right_map(), g.right_map(), budget)?];
            if parts.iter().any(ProofOutcome::is_refuted) {
                return Ok(distinct());
            }
            let mut fibers = Fibers::new(f.target(), budget);
            for (c, imgs) in f.components() {
                let tc = f.left_map().apply_sort(c).expect("total").clone();
                for (gen, img) in imgs {
                    parts.push(fibers.at(tc.as_str())?.prove(img, &g.components()[c][gen])?);
                }
            }
            Ok(ProofOutcome::all(parts))
        }
        _ => Err(PresentationError::KindMismatch),
    }
}
