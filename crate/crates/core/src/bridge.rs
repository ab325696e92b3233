//! Uncurrying, the curryability checks and currying back.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;
use serde::Serialize;
use thiserror::Error;

use crate::presentations::{
    at_name, fiber_instance, morphisms_equal, validate_curried, validate_curried_morphism, AnyMorphism, CrossEquation, CrossPath,
    CrossProver, CurriedMorphism, CurriedPresentation, PresentationError, ProSym, Term, TermProver, UncurriedMorphism,
    UncurriedPresentation, ValidationReport, ValidationStatus,
};
use crate::prover::{Budget, BudgetUsed, Canon, ProofOutcome};
use crate::syntax::{Name, Path};

#[derive(Debug, Error, Clone)]
pub enum BridgeError {
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("morphism `{0}` is not globular")]
    NonGlobular(Name),
    #[error("no right cross-path found for {}", .0.join(", "))]
    NongenerativityUnverified(Vec<String>),
    #[error("curried result fails validation at {equation}")]
    CurryValidationFailed { equation: String, report: ValidationReport },
    #[error("curried result could not be validated within budget: {}", .open.join(", "))]
    CurryValidationInconclusive { open: Vec<String>, report: ValidationReport },
}

/// Symbol names of the uncurried form, keyed by `(sort, generator)`: the
/// generator name when it is unambiguous, `p@c` otherwise.
pub fn bar_names(p: &CurriedPresentation) -> IndexMap<(Name, Name), Name> {
    let mut count: HashMap<&Name, usize> = HashMap::new();
    for inst in p.instances().values() {
        for g in inst.gens() {
            *count.entry(&g.name).or_default() += 1;
        }
    }
    let clash = |n: &str| p.left().fun(n).is_some() || p.right().fun(n).is_some();
    let mut out = IndexMap::new();
    for (c, inst) in p.instances() {
        for g in inst.gens() {
            let name = if count[&g.name] == 1 && !clash(g.name.as_str()) { g.name.clone() } else { Name::new(format!("{}@{c}", g.name)) };
            out.insert((c.clone(), g.name.clone()), name);
        }
    }
    out
}

fn bar_term(names: &IndexMap<(Name, Name), Name>, c: &Name, t: &Term) -> CrossPath {
    CrossPath::new(Path::identity(c.clone()), names[&(c.clone(), t.gen().clone())].clone(), t.path().clone())
}

/// `P̄`: one symbol per generator, the instance equations, and
/// `f.p̄ = overline(P(f)(p))` for every symbol `f` and generator `p`.
pub fn uncurry(p: &CurriedPresentation) -> UncurriedPresentation {
    let names = bar_names(p);
    let mut u = UncurriedPresentation::new(format!("{}_bar", p.name()), p.left().clone(), p.right().clone());
    for ((c, _), bar) in &names {
        let g = p.at(c.as_str()).gens().iter().find(|g| names[&(c.clone(), g.name.clone())] == *bar).expect("generator");
        u = u.with_pro(bar.clone(), c.clone(), g.sort.clone());
    }
    for (c, inst) in p.instances() {
        for eq in inst.eqs() {
            u = u.with_eq(bar_term(&names, c, &eq.lhs), bar_term(&names, c, &eq.rhs));
        }
    }
    for f in p.left().funs() {
        for g in p.at(f.tgt.as_str()).gens() {
            let pre = Path::new_unchecked(f.src.clone(), f.tgt.clone(), vec![f.name.clone()]);
            let lhs = CrossPath::new(pre, names[&(f.tgt.clone(), g.name.clone())].clone(), Path::identity(g.sort.clone()));
            let img = p.act_image(f.name.as_str(), g.name.as_str()).expect("total action");
            u = u.with_eq(lhs, bar_term(&names, &f.src, img));
        }
    }
    u
}

/// `F̄(p̄) = overline(F_c(p))` for a globular curried morphism.
pub fn uncurry_morphism(m: &CurriedMorphism) -> Result<UncurriedMorphism, BridgeError> {
    if !m.is_globular() {
        return Err(BridgeError::NonGlobular(m.name().clone()));
    }
    let (sn, tn) = (bar_names(m.source()), bar_names(m.target()));
    let mut images = IndexMap::new();
    for (c, imgs) in m.components() {
        for (g, t) in imgs {
            images.insert(sn[&(c.clone(), g.clone())].clone(), bar_term(&tn, c, t));
        }
    }
    let source = Arc::new(uncurry(m.source()));
    let target = Arc::new(uncurry(m.target()));
    Ok(UncurriedMorphism::new(format!("{}_bar", m.name()), source, target, images)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    /// Certified.
    Holds,
    /// No counterexample inside the enumeration bound.
    HoldsUpToBudget,
    FailsWithWitness,
    InconclusiveWithinBudget,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Path(CrossPath),
    Pair(CrossPath, CrossPath),
    Equation(CrossEquation),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Path(p) => write!(f, "{p}"),
            Witness::Pair(a, b) => write!(f, "({a}, {b})"),
            Witness::Equation(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub status: CheckStatus,
    pub witnesses: Vec<Witness>,
    pub budget_used: BudgetUsed,
}

impl CheckOutcome {
    fn new(status: CheckStatus, witnesses: Vec<Witness>, budget_used: BudgetUsed) -> Self {
        CheckOutcome { status, witnesses, budget_used }
    }

    pub fn holds(&self) -> bool {
        matches!(self.status, CheckStatus::Holds | CheckStatus::HoldsUpToBudget)
    }
}

fn short_left_paths(q: &UncurriedPresentation) -> Vec<CrossPath> {
    let mut out = Vec::new();
    for f in q.left().funs() {
        for p in q.pros().iter().filter(|p| p.src == f.tgt) {
            let pre = Path::new_unchecked(f.src.clone(), f.tgt.clone(), vec![f.name.clone()]);
            out.push(CrossPath::new(pre, p.name.clone(), Path::identity(p.tgt.clone())));
        }
    }
    out
}

/// Right cross-paths out of `c` with at most `max_len` symbols in all,
/// shortest first, ties in declaration order.
pub fn right_cross_paths(q: &UncurriedPresentation, c: &Name, max_len: usize) -> Vec<CrossPath> {
    if max_len == 0 {
        return Vec::new();
    }
    let pros: Vec<&ProSym> = q.pros().iter().filter(|p| &p.src == c).collect();
    let tails: Vec<Vec<Path>> = pros.iter().map(|p| q.right().paths_from(&p.tgt, max_len - 1)).collect();
    let mut out = Vec::new();
    for len in 0..max_len {
        for (p, ts) in pros.iter().zip(&tails) {
            for t in ts.iter().filter(|t| t.len() == len) {
                out.push(CrossPath::new(Path::identity(c.clone()), p.name.clone(), t.clone()));
            }
        }
    }
    out
}

/// The equation pairing each short left cross-path with a right one, if
/// every equation is right-right or short-left-vs-right and each short left
/// cross-path occurs exactly once.
fn strict_pairing(q: &UncurriedPresentation) -> Result<IndexMap<CrossPath, CrossPath>, Box<Witness>> {
    let mut pairing: IndexMap<CrossPath, CrossPath> = IndexMap::new();
    let mut seen: HashMap<CrossPath, usize> = HashMap::new();
    for eq in q.eqs() {
        let (l, r) = (&eq.lhs, &eq.rhs);
        let pair = match (l.is_right(), r.is_right()) {
            (true, true) => None,
            (false, true) if l.is_short_left() => Some((l, r)),
            (true, false) if r.is_short_left() => Some((r, l)),
            _ => return Err(Box::new(Witness::Equation(eq.clone()))),
        };
        if let Some((s, rr)) = pair {
            *seen.entry(s.clone()).or_default() += 1;
            pairing.insert(s.clone(), rr.clone());
        }
    }
    for l in short_left_paths(q) {
        if seen.get(&l).copied().unwrap_or(0) != 1 {
            return Err(Box::new(Witness::Path(l)));
        }
    }
    Ok(pairing)
}

fn key(prover: &CrossProver, cp: &CrossPath) -> Result<Option<Canon>, PresentationError> {
    prover.canonical(cp)
}

fn used(prover: &CrossProver, budget: Budget) -> BudgetUsed {
    let p = prover.prover();
    match p.rewrite_system() {
        Some(rs) => BudgetUsed { kb_steps: rs.steps_used(), ..Default::default() },
        None => BudgetUsed { path_length: budget.max_path_length, closure_rounds: p.closure().rounds_used(), ..Default::default() },
    }
}

/// First right cross-path, in enumeration order, provably equal to `l`.
fn find_right(
    q: &UncurriedPresentation,
    prover: &CrossProver,
    l: &CrossPath,
    budget: Budget,
) -> Result<Option<CrossPath>, PresentationError> {
    let Some(k) = key(prover, l)? else { return Ok(None) };
    for r in right_cross_paths(q, l.src(), budget.max_path_length) {
        if r.tgt() == l.tgt() && key(prover, &r)?.as_ref() == Some(&k) {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

/// Strict mode is the syntactic scan; otherwise each short left cross-path
/// is matched against right cross-paths inside the budget.
pub fn check_nongenerative(q: &UncurriedPresentation, budget: Budget, strict: bool) -> Result<CheckOutcome, BridgeError> {
    q.check()?;
    if strict {
        return Ok(match strict_pairing(q) {
            Ok(_) => CheckOutcome::new(CheckStatus::Holds, Vec::new(), BudgetUsed::default()),
            Err(w) => CheckOutcome::new(CheckStatus::FailsWithWitness, vec![*w], BudgetUsed::default()),
        });
    }
    let prover = CrossProver::new(Arc::new(q.clone()), budget)?;
    let mut missing = Vec::new();
    for l in short_left_paths(q) {
        if find_right(q, &prover, &l, budget)?.is_none() {
            missing.push(Witness::Path(l));
        }
    }
    let status = if missing.is_empty() { CheckStatus::Holds } else { CheckStatus::InconclusiveWithinBudget };
    Ok(CheckOutcome::new(status, missing, used(&prover, budget)))
}

/// Right cross-paths that are equal in `Q` are compared again in the fiber
/// `Q^c`. A pair separated by a completed system for `Q^c` is a certified
/// counterexample; the first one in enumeration order is reported.
pub fn check_conservative(q: &UncurriedPresentation, budget: Budget) -> Result<CheckOutcome, BridgeError> {
    q.check()?;
    let prover = CrossProver::new(Arc::new(q.clone()), budget)?;
    let mut candidates = Vec::new();
    for c in q.left().sorts() {
        let fiber = TermProver::new(Arc::new(fiber_instance(q, c.as_str())?), budget)?;
        let mut reps: HashMap<Canon, (CrossPath, Option<Canon>)> = HashMap::new();
        for r in right_cross_paths(q, c, budget.max_path_length) {
            let Some(k) = key(&prover, &r)? else { continue };
            let t = Term::new(r.pro().clone(), r.post().clone());
            let fk = fiber.canonical(&t)?;
            match reps.get(&k) {
                None => {
                    reps.insert(k, (r, fk));
                }
                Some((rep, rk)) if fk.is_none() || rk.is_none() || *rk != fk => {
                    let rep_t = Term::new(rep.pro().clone(), rep.post().clone());
                    let out = fiber.prove(&rep_t, &t)?;
                    if out.is_refuted() {
                        let w = Witness::Pair(rep.clone(), r.clone());
                        return Ok(CheckOutcome::new(CheckStatus::FailsWithWitness, vec![w], used(&prover, budget)));
                    }
                    if !out.is_proved() {
                        candidates.push(Witness::Pair(rep.clone(), r.clone()));
                    }
                }
                Some(_) => {}
            }
        }
    }
    let status = if !candidates.is_empty() {
        CheckStatus::InconclusiveWithinBudget
    } else if q.eqs().is_empty() {
        CheckStatus::Holds
    } else {
        CheckStatus::HoldsUpToBudget
    };
    Ok(CheckOutcome::new(status, candidates, used(&prover, budget)))
}

/// `P(c) = Q^c`, and `P(f)(p)` the right cross-path paired with `f.p` by
/// the equations when the pairing is strict, else the first right
/// cross-path found provably equal to `f.p`. The result is validated.
pub fn curry(q: &UncurriedPresentation, budget: Budget) -> Result<CurriedPresentation, BridgeError> {
    q.check()?;
    let name = Name::new(format!("{}_curried", q.name()));
    let mut at = IndexMap::new();
    for c in q.left().sorts() {
        at.insert(c.clone(), Arc::new(fiber_instance(q, c.as_str())?.renamed(at_name(&name, c))));
    }
    let chosen: IndexMap<CrossPath, CrossPath> = match strict_pairing(q) {
        Ok(pairing) => pairing,
        Err(_) => {
            let prover = CrossProver::new(Arc::new(q.clone()), budget)?;
            let mut chosen = IndexMap::new();
            let mut missing = Vec::new();
            for l in short_left_paths(q) {
                match find_right(q, &prover, &l, budget)? {
                    Some(r) => {
                        chosen.insert(l, r);
                    }
                    None => missing.push(l.to_string()),
                }
            }
            if !missing.is_empty() {
                return Err(BridgeError::NongenerativityUnverified(missing));
            }
            chosen
        }
    };
    let mut act: IndexMap<Name, IndexMap<Name, Term>> = IndexMap::new();
    for (l, r) in &chosen {
        let f = l.pre().syms()[0].clone();
        act.entry(f).or_default().insert(l.pro().clone(), Term::new(r.pro().clone(), r.post().clone()));
    }
    let p = CurriedPresentation::new(name, q.left().clone(), q.right().clone(), at, act)?;
    let report = validate_curried(&p, budget)?;
    match report.status() {
        ValidationStatus::Valid => Ok(p),
        ValidationStatus::Invalid => {
            let bad = report.counterexample().expect("refuted obligation");
            let equation = format!("{}: {} = {}", bad.label, bad.lhs, bad.rhs);
            Err(BridgeError::CurryValidationFailed { equation, report })
        }
        ValidationStatus::Inconclusive => {
            let open = report.open().map(|o| format!("{}: {} = {}", o.label, o.lhs, o.rhs)).collect();
            Err(BridgeError::CurryValidationInconclusive { open, report })
        }
    }
}

/// `P ≅ curry(uncurry(P))` by generator renaming, with both composites
/// compared to identities.
#[derive(Clone, Debug)]
pub struct RoundTrip {
    pub curried: Arc<CurriedPresentation>,
    pub forward: CurriedMorphism,
    pub backward: CurriedMorphism,
    pub forward_report: ValidationReport,
    pub backward_report: ValidationReport,
    pub identities: ProofOutcome,
}

impl RoundTrip {
    pub fn is_iso(&self) -> bool {
        self.forward_report.is_valid() && self.backward_report.is_valid() && self.identities.is_proved()
    }
}

pub fn round_trip(p: &CurriedPresentation, budget: Budget) -> Result<RoundTrip, BridgeError> {
    let names = bar_names(p);
    let source = Arc::new(p.clone());
    let curried = Arc::new(curry(&uncurry(p), budget)?);
    let mut fwd: IndexMap<Name, IndexMap<Name, Term>> = IndexMap::new();
    let mut bwd: IndexMap<Name, IndexMap<Name, Term>> = IndexMap::new();
    for ((c, g), bar) in &names {
        let sort = p.at(c.as_str()).gen(g.as_str()).expect("generator").sort.clone();
        fwd.entry(c.clone()).or_default().insert(g.clone(), Term::generator(bar.clone(), sort.clone()));
        bwd.entry(c.clone()).or_default().insert(bar.clone(), Term::generator(g.clone(), sort));
    }
    let forward = CurriedMorphism::globular("bar", source.clone(), curried.clone(), fwd)?;
    let backward = CurriedMorphism::globular("unbar", curried.clone(), source.clone(), bwd)?;
    let forward_report = validate_curried_morphism(&forward, budget)?;
    let backward_report = validate_curried_morphism(&backward, budget)?;
    let there = forward.then(&backward)?;
    let back = backward.then(&forward)?;
    let a = morphisms_equal(AnyMorphism::Curried(&there), AnyMorphism::Curried(&CurriedMorphism::identity(source)), budget)?;
    let b = morphisms_equal(AnyMorphism::Curried(&back), AnyMorphism::Curried(&CurriedMorphism::identity(curried.clone())), budget)?;
    Ok(RoundTrip { curried, forward, backward, forward_report, backward_report, identities: ProofOutcome::all([a, b]) })
}
