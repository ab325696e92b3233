use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::compose::{compose_curried, compose_curried_morphisms, tensor, unit_presentation};
use crate::presentations::{CurriedMorphism, CurriedPresentation, Term, TermProver};
use crate::prover::{Budget, ProofOutcome};
use crate::syntax::CatPresentation;

use super::coend::coend_model;
use super::tables::{CategoryModel, CurriedModel, ProfunctorTable};
use super::{Rep, SemanticsError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsoScope {
    /// Both sides are stabilized, so the tables are the whole models.
    Exhaustive,
    /// Checked on the classes that fit in tables of this depth.
    Fragment { depth: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoStatus {
    Iso { scope: IsoScope },
    NotIso { reason: String },
    Inconclusive { reason: String },
}

#[derive(Clone, Debug)]
pub struct IsoReport {
    pub status: IsoStatus,
    /// Representative pairs of the bijection, source first.
    pub map: Vec<(String, String)>,
    pub checked_squares: usize,
}

impl IsoReport {
    pub fn is_iso(&self) -> bool {
        matches!(self.status, IsoStatus::Iso { .. })
    }

    pub fn is_exhaustive_iso(&self) -> bool {
        self.status == IsoStatus::Iso { scope: IsoScope::Exhaustive }
    }

    pub fn to_json(&self) -> Value {
        let mut v = match &self.status {
            IsoStatus::Iso { scope: IsoScope::Exhaustive } => json!({ "status": "iso", "scope": "exhaustive" }),
            IsoStatus::Iso { scope: IsoScope::Fragment { depth } } => json!({ "status": "iso", "scope": "fragment", "depth": depth }),
            IsoStatus::NotIso { reason } => json!({ "status": "not_iso", "reason": reason }),
            IsoStatus::Inconclusive { reason } => json!({ "status": "inconclusive", "reason": reason }),
        };
        v["checked_squares"] = json!(self.checked_squares);
        v["map"] = self.map.iter().map(|(a, b)| json!([a, b])).collect();
        v
    }
}

impl fmt::Display for IsoReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.status {
            IsoStatus::Iso { scope: IsoScope::Exhaustive } => writeln!(f, "iso (exhaustive)")?,
            IsoStatus::Iso { scope: IsoScope::Fragment { depth } } => writeln!(f, "iso on the depth-{depth} fragment")?,
            IsoStatus::NotIso { reason } => writeln!(f, "not iso: {reason}")?,
            IsoStatus::Inconclusive { reason } => writeln!(f, "inconclusive: {reason}")?,
        }
        for (a, b) in &self.map {
            writeln!(f, "  {a} |-> {b}")?;
        }
        writeln!(f, "  {} squares checked", self.checked_squares)
    }
}

/// Failure bookkeeping: certified failures give `NotIso`, the rest
/// `Inconclusive`.
struct Verdicts {
    failure: Option<(bool, String)>,
}

impl Verdicts {
    fn fail(&mut self, certified: bool, reason: String) {
        match &self.failure {
            Some((true, _)) => {}
            Some((false, _)) if !certified => {}
            _ => self.failure = Some((certified, reason)),
        }
    }

    fn status(self, scope: IsoScope) -> IsoStatus {
        match self.failure {
            None => IsoStatus::Iso { scope },
            Some((true, reason)) => IsoStatus::NotIso { reason },
            Some((false, reason)) => IsoStatus::Inconclusive { reason },
        }
    }
}

fn check_bases(t1: &ProfunctorTable, t2: &ProfunctorTable) -> Result<(), SemanticsError> {
    if !t1.left().same_shape(t2.left()) || !t1.right().same_shape(t2.right()) {
        return Err(SemanticsError::BaseMismatch(format!("{} and {}", t1.name(), t2.name())));
    }
    Ok(())
}

struct Search<'a> {
    t1: &'a ProfunctorTable,
    t2: &'a ProfunctorTable,
    strict: bool,
    out1: Vec<Vec<(bool, usize, usize)>>,
}

impl Search<'_> {
    fn image(&self, t: &ProfunctorTable, left: bool, a: usize, x: usize) -> Option<usize> {
        if left {
            t.left_action(a, x)
        } else {
            t.right_action(x, a)
        }
    }

    fn assign(&self, map: &mut [Option<usize>], used: &mut [bool], x: usize, y: usize) -> bool {
        let mut queue = vec![(x, y)];
        while let Some((x, y)) = queue.pop() {
            match map[x] {
                Some(z) if z == y => continue,
                Some(_) => return false,
                None => {}
            }
            let (e1, e2) = (&self.t1.elements()[x], &self.t2.elements()[y]);
            if used[y] || e1.src != e2.src || e1.tgt != e2.tgt {
                return false;
            }
            map[x] = Some(y);
            used[y] = true;
            for &(left, a, x2) in &self.out1[x] {
                match self.image(self.t2, left, a, y) {
                    Some(y2) => queue.push((x2, y2)),
                    None if self.strict => return false,
                    None => {}
                }
            }
        }
        true
    }

    fn run(&self, map: Vec<Option<usize>>, used: Vec<bool>) -> Option<Vec<Option<usize>>> {
        let Some(x) = map.iter().position(|m| m.is_none()) else { return Some(map) };
        for y in 0..self.t2.len() {
            if used[y] {
                continue;
            }
            let (mut m, mut u) = (map.clone(), used.clone());
            if self.assign(&mut m, &mut u, x, y) {
                if let Some(done) = self.run(m, u) {
                    return Some(done);
                }
            }
        }
        None
    }
}

/// Backtracking search for a bijection commuting with both actions.
/// Unstabilized inputs give `Inconclusive` whatever the search finds.
pub fn find_table_iso(t1: &ProfunctorTable, t2: &ProfunctorTable) -> Result<IsoReport, SemanticsError> {
    check_bases(t1, t2)?;
    let exact = t1.stabilized() && t2.stabilized();
    let mut verdicts = Verdicts { failure: None };
    if !exact {
        verdicts.fail(false, "tables are not stabilized".into());
    }
    let report = |verdicts: Verdicts, map: Vec<(String, String)>, squares| IsoReport {
        status: verdicts.status(IsoScope::Exhaustive),
        map,
        checked_squares: squares,
    };
    for (ci, c) in t1.left().objects().iter().enumerate() {
        for (di, d) in t1.right().objects().iter().enumerate() {
            let n1 = t1.elements().iter().filter(|e| e.src == ci && e.tgt == di).count();
            let n2 = t2.elements().iter().filter(|e| e.src == ci && e.tgt == di).count();
            if n1 != n2 {
                verdicts.fail(exact, format!("({c}, {d}) has {n1} elements on one side and {n2} on the other"));
                return Ok(report(verdicts, Vec::new(), 0));
            }
        }
    }
    let mut out1 = vec![Vec::new(); t1.len()];
    for (&(u, x), &x2) in t1.left_actions() {
        out1[x].push((true, u, x2));
    }
    for (&(x, h), &x2) in t1.right_actions() {
        out1[x].push((false, h, x2));
    }
    let squares = t1.left_actions().len() + t1.right_actions().len();
    let search = Search { t1, t2, strict: exact, out1 };
    match search.run(vec![None; t1.len()], vec![false; t2.len()]) {
        Some(map) => {
            let pairs = map
                .iter()
                .enumerate()
                .map(|(x, y)| (t1.elements()[x].rep.to_string(), t2.elements()[y.expect("total")].rep.to_string()))
                .collect();
            Ok(report(verdicts, pairs, squares))
        }
        None => {
            verdicts.fail(exact, "no equivariant bijection exists".into());
            Ok(report(verdicts, Vec::new(), 0))
        }
    }
}

fn term_of(rep: &Rep) -> &Term {
    match rep {
        Rep::Term(t) => t,
        _ => unreachable!("curried tables hold terms"),
    }
}

/// The explicit map `⟨[s], [t]⟩ ↦ [s ⊗ t]` from the coend of the tables of
/// `P` and `Q` to the table of `P ⊛ Q`, checked for well-definedness on
/// every member pair, injectivity, surjectivity and equivariance.
///
/// On unstabilized inputs only the classes whose image fits in the bounded
/// composite table are compared, and the result is scoped to that fragment.
pub fn check_mu_iso(p: &CurriedPresentation, q: &CurriedPresentation, budget: Budget) -> Result<IsoReport, SemanticsError> {
    let mp = CurriedModel::build(p, budget)?;
    let mq = CurriedModel::build(q, budget)?;
    let co = coend_model(&mp.table, &mq.table)?;
    let composite = compose_curried(p, q)?;
    let mr = CurriedModel::build(&composite, budget)?;
    let (ct, rt) = (&co.table, &mr.table);
    check_bases(ct, rt)?;
    let exhaustive = ct.stabilized() && rt.stabilized();
    let certified = mr.is_exact();
    let scope = if exhaustive { IsoScope::Exhaustive } else { IsoScope::Fragment { depth: budget.max_path_length } };
    let mut v = Verdicts { failure: None };
    let lefts = p.left().sorts();

    let mut mu: Vec<Option<usize>> = Vec::with_capacity(ct.len());
    for (k, members) in co.members.iter().enumerate() {
        let mut value: Option<(usize, String)> = None;
        for &(x, y) in members {
            let xe = &mp.table.elements()[x];
            let (s, t) = (term_of(&xe.rep), term_of(&mq.table.elements()[y].rep));
            let st = tensor(p, q, lefts[xe.src].as_str(), s, t)?.to_term();
            match mr.classify(xe.src, &st)? {
                Some(r) => match &value {
                    None => value = Some((r, format!("<{s}, {t}>"))),
                    Some((r0, first)) if *r0 != r => {
                        let reason = format!(
                            "not well defined: {first} and <{s}, {t}> are related but map to {} and {}",
                            rt.elements()[*r0].rep,
                            rt.elements()[r].rep
                        );
                        v.fail(certified, reason);
                    }
                    Some(_) => {}
                },
                None if exhaustive => v.fail(false, format!("{st} is not classified in the composite table")),
                None => {}
            }
        }
        if value.is_none() && exhaustive {
            v.fail(false, format!("no image for {}", ct.elements()[k].rep));
        }
        mu.push(value.map(|(r, _)| r));
    }

    let mut seen: HashMap<usize, usize> = HashMap::new();
    for (k, r) in mu.iter().enumerate() {
        if let Some(r) = r {
            if let Some(k0) = seen.insert(*r, k) {
                let reason =
                    format!("not injective: {} and {} both map to {}", ct.elements()[k0].rep, ct.elements()[k].rep, rt.elements()[*r].rep);
                v.fail(exhaustive && certified, reason);
            }
        }
    }
    let hit: HashSet<usize> = mu.iter().flatten().copied().collect();
    if let Some(r) = (0..rt.len()).find(|r| !hit.contains(r)) {
        v.fail(exhaustive && certified, format!("not surjective: {} has no preimage", rt.elements()[r].rep));
    }

    let mut squares = 0;
    let mut square = |v: &mut Verdicts, what: &str, moved: Option<usize>, image: Option<usize>, via: String| match (moved, image) {
        (Some(a), Some(b)) => {
            squares += 1;
            if a != b {
                v.fail(certified, format!("{what} square fails at {via}"));
            }
        }
        (None, None) => {}
        _ if exhaustive => v.fail(false, format!("{what} square is partial at {via}")),
        _ => {}
    };
    for (&(u, k), &k2) in ct.left_actions() {
        let Some(r) = mu[k] else { continue };
        let via = format!("({}, {})", ct.left().elements()[u].rep, ct.elements()[k].rep);
        square(&mut v, "left", mu[k2], rt.left_action(u, r), via);
    }
    for (&(k, h), &k2) in ct.right_actions() {
        let Some(r) = mu[k] else { continue };
        let via = format!("({}, {})", ct.elements()[k].rep, ct.right().elements()[h].rep);
        square(&mut v, "right", mu[k2], rt.right_action(r, h), via);
    }

    let map = mu
        .iter()
        .enumerate()
        .filter_map(|(k, r)| r.map(|r| (ct.elements()[k].rep.to_string(), rt.elements()[r].rep.to_string())))
        .collect();
    Ok(IsoReport { status: v.status(scope), map, checked_squares: squares })
}

#[derive(Clone, Debug)]
pub struct NaturalityReport {
    pub outcome: ProofOutcome,
    pub squares: usize,
    /// Pairs whose square was refuted or left open.
    pub open: Vec<String>,
}

/// `(φ ⊛ ψ)(s ⊗ t) ≈ φ(s) ⊗ ψ(t)` for every pair of table elements of the
/// sources: naturality of `μ` in both arguments.
pub fn check_mu_naturality(phi: &CurriedMorphism, psi: &CurriedMorphism, budget: Budget) -> Result<NaturalityReport, SemanticsError> {
    let (p, q) = (phi.source(), psi.source());
    let (p2, q2) = (phi.target(), psi.target());
    let mp = CurriedModel::build(p, budget)?;
    let mq = CurriedModel::build(q, budget)?;
    let both = compose_curried_morphisms(phi, psi)?;
    let mut provers: HashMap<String, TermProver> = HashMap::new();
    let mut parts = Vec::new();
    let mut open = Vec::new();
    for xe in mp.table.elements() {
        let c = &p.left().sorts()[xe.src];
        let c2 = phi.left_map().apply_sort(c).expect("total").clone();
        let s = term_of(&xe.rep);
        for ye in mq.table.elements().iter().filter(|ye| ye.src == xe.tgt) {
            let t = term_of(&ye.rep);
            let lhs = both.apply(c.as_str(), &tensor(p, q, c.as_str(), s, t)?.to_term())?;
            let rhs = tensor(p2, q2, c2.as_str(), &phi.apply(c.as_str(), s)?, &psi.apply(s.sort().as_str(), t)?)?.to_term();
            if !provers.contains_key(c2.as_str()) {
                provers.insert(c2.to_string(), TermProver::new(both.target().at(c2.as_str()).clone(), budget)?);
            }
            let outcome = provers[c2.as_str()].prove(&lhs, &rhs)?;
            if !outcome.is_proved() {
                open.push(format!("<{s}, {t}>: {lhs} vs {rhs}"));
            }
            parts.push(outcome);
        }
    }
    let squares = parts.len();
    Ok(NaturalityReport { outcome: ProofOutcome::all(parts), squares, open })
}

/// `ε: ⟦U(C)⟧(c, c') -> ⟦C⟧(c, c')`, `x_c.u ↦ [u]`, checked for
/// bijectivity per component and equivariance on both sides.
pub fn check_unit_hom(cat: &CatPresentation, budget: Budget) -> Result<IsoReport, SemanticsError> {
    let unit = unit_presentation(&Arc::new(cat.clone()));
    let mu = CurriedModel::build(&unit, budget)?;
    let cm = CategoryModel::from_category(cat, budget)?;
    let (ut, ht) = (&mu.table, &cm.table);
    let exhaustive = ut.stabilized() && ht.stabilized();
    let certified = exhaustive;
    let scope = if exhaustive { IsoScope::Exhaustive } else { IsoScope::Fragment { depth: budget.max_path_length } };
    let mut v = Verdicts { failure: None };
    let eps: Vec<Option<usize>> = ut.elements().iter().map(|e| cm.classify_path(term_of(&e.rep).path())).collect();
    let mut seen = HashMap::new();
    for (x, (e, img)) in ut.elements().iter().zip(&eps).enumerate() {
        match img {
            Some(h) => {
                let he = &ht.elements()[*h];
                if he.src != e.src || he.tgt != e.tgt {
                    v.fail(true, format!("{} lands in the wrong hom set", e.rep));
                }
                if let Some(x0) = seen.insert(*h, x) {
                    v.fail(certified, format!("not injective: {} and {}", ut.elements()[x0].rep, e.rep));
                }
            }
            None => v.fail(false, format!("{} has no image", e.rep)),
        }
    }
    let hit: HashSet<usize> = eps.iter().flatten().copied().collect();
    if let Some(h) = (0..ht.len()).find(|h| !hit.contains(h)) {
        v.fail(certified, format!("not surjective: {} has no preimage", ht.elements()[h].rep));
    }
    let mut squares = 0;
    for (&(u, x), &x2) in ut.left_actions() {
        if let (Some(a), Some(b)) = (eps[x], eps[x2]) {
            if let Some(ua) = ht.compose(u, a) {
                squares += 1;
                if ua != b {
                    v.fail(true, format!("left square fails at ({}, {})", ht.elements()[u].rep, ut.elements()[x].rep));
                }
            }
        }
    }
    for (&(x, h), &x2) in ut.right_actions() {
        if let (Some(a), Some(b)) = (eps[x], eps[x2]) {
            if let Some(ah) = ht.compose(a, h) {
                squares += 1;
                if ah != b {
                    v.fail(true, format!("right square fails at ({}, {})", ut.elements()[x].rep, ht.elements()[h].rep));
                }
            }
        }
    }
    let map = eps
        .iter()
        .enumerate()
        .filter_map(|(x, h)| h.map(|h| (ut.elements()[x].rep.to_string(), ht.elements()[h].rep.to_string())))
        .collect();
    Ok(IsoReport { status: v.status(scope), map, checked_squares: squares })
}
