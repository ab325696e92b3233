//! Composition of curried presentations, its action on morphisms, units and
//! the coherence cells between iterated composites.

use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;

use crate::presentations::{
    at_name, morphisms_equal, validate_curried_morphism, AnyMorphism, CurriedMorphism, CurriedPresentation, InstancePresentation,
    PresentationError, Term, ValidationReport,
};
use crate::prover::{Budget, ProofOutcome};
use crate::syntax::{CatMorphism, CatPresentation, Name, Path};

fn wrap(n: &str) -> String {
    if n.contains('*') {
        format!("[{n}]")
    } else {
        n.to_string()
    }
}

/// Printable name of `p ⊗ q`: `p*q`, bracketing components that contain `*`.
pub fn tensor_name(p: &str, q: &str) -> Name {
    Name::new(format!("{}*{}", wrap(p), wrap(q)))
}

/// `(p ⊗ q).h` in canonical split form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TensorTerm {
    pub p: Name,
    pub q: Name,
    pub h: Path,
}

impl TensorTerm {
    pub fn to_term(&self) -> Term {
        Term::new(tensor_name(self.p.as_str(), self.q.as_str()), self.h.clone())
    }
}

impl fmt::Display for TensorTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_term())
    }
}

fn check_composable(p: &CurriedPresentation, q: &CurriedPresentation) -> Result<(), PresentationError> {
    if p.right() != q.left() {
        return Err(PresentationError::BaseMismatch(format!(
            "{} ends at {} but {} starts at {}",
            p.name(),
            p.right().name(),
            q.name(),
            q.left().name()
        )));
    }
    Ok(())
}

/// `s ⊗ t` for `s = p.g` a term of `P(c)` and `t` a term of `Q(d)`:
/// `p ⊗ Q(g)(t)`, then `p ⊗ q.h = (p ⊗ q).h`.
pub fn tensor(p: &CurriedPresentation, q: &CurriedPresentation, c: &str, s: &Term, t: &Term) -> Result<TensorTerm, PresentationError> {
    check_composable(p, q)?;
    if !p.left().has_sort(c) {
        return Err(PresentationError::TypeMismatch(format!("{c} is not a sort of {}", p.left().name())));
    }
    p.at(c).check_term(s)?;
    q.at(s.sort().as_str()).check_term(t)?;
    let moved = q.act_path(s.path(), t)?;
    Ok(TensorTerm { p: s.gen().clone(), q: moved.gen().clone(), h: moved.path().clone() })
}

/// `P ⊛ Q`: at each `c`, generators `p ⊗ q`, the equations `p ⊗ t = p ⊗ t'`
/// for each generator `p` and equation of `Q(type p)`, then `s ⊗ q = s' ⊗ q`
/// for each equation of `P(c)` and generator `q`; actions `P(f)(p) ⊗ q`.
pub fn compose_curried(p: &CurriedPresentation, q: &CurriedPresentation) -> Result<CurriedPresentation, PresentationError> {
    check_composable(p, q)?;
    let name = tensor_name(p.name().as_str(), q.name().as_str());
    let mut at = IndexMap::new();
    for (c, pc) in p.instances() {
        let mut inst = InstancePresentation::new(at_name(&name, c), q.right().clone());
        for g in pc.gens() {
            for h in q.at(g.sort.as_str()).gens() {
                inst = inst.with_gen(tensor_name(g.name.as_str(), h.name.as_str()), h.sort.clone());
            }
        }
        for g in pc.gens() {
            let x = Term::generator(g.name.clone(), g.sort.clone());
            for eq in q.at(g.sort.as_str()).eqs() {
                let l = tensor(p, q, c.as_str(), &x, &eq.lhs)?.to_term();
                let r = tensor(p, q, c.as_str(), &x, &eq.rhs)?.to_term();
                inst = inst.with_eq(l, r);
            }
        }
        for eq in pc.eqs() {
            for h in q.at(eq.lhs.sort().as_str()).gens() {
                let y = Term::generator(h.name.clone(), h.sort.clone());
                let l = tensor(p, q, c.as_str(), &eq.lhs, &y)?.to_term();
                let r = tensor(p, q, c.as_str(), &eq.rhs, &y)?.to_term();
                inst = inst.with_eq(l, r);
            }
        }
        at.insert(c.clone(), Arc::new(inst));
    }
    let mut act = IndexMap::new();
    for f in p.left().funs() {
        let mut images = IndexMap::new();
        for g in p.at(f.tgt.as_str()).gens() {
            let moved = p.act_image(f.name.as_str(), g.name.as_str()).expect("total action");
            for h in q.at(g.sort.as_str()).gens() {
                let y = Term::generator(h.name.clone(), h.sort.clone());
                let img = tensor(p, q, f.src.as_str(), moved, &y)?.to_term();
                images.insert(tensor_name(g.name.as_str(), h.name.as_str()), img);
            }
        }
        act.insert(f.name.clone(), images);
    }
    CurriedPresentation::new(name, p.left().clone(), q.right().clone(), at, act)
}

fn unit_gen(c: &Name) -> Name {
    Name::new(format!("x_{c}"))
}

/// `U(C)`: one generator `x_c` at each sort, `f` acting by `x_c' ↦ x_c.f`.
pub fn unit_presentation(cat: &Arc<CatPresentation>) -> CurriedPresentation {
    let name = Name::new(format!("U[{}]", cat.name()));
    let at = cat
        .sorts()
        .iter()
        .map(|c| (c.clone(), Arc::new(InstancePresentation::new(at_name(&name, c), cat.clone()).with_gen(unit_gen(c), c.clone()))))
        .collect();
    let act = cat
        .funs()
        .iter()
        .map(|f| {
            let img = Term::new(unit_gen(&f.src), Path::new_unchecked(f.src.clone(), f.tgt.clone(), vec![f.name.clone()]));
            (f.name.clone(), IndexMap::from([(unit_gen(&f.tgt), img)]))
        })
        .collect();
    CurriedPresentation::new(name, cat.clone(), cat.clone(), at, act).expect("unit presentation is well typed")
}

/// `φ ⊛ ψ`: `p ⊗ q ↦ φ_c(p) ⊗ ψ_d(q)`.
pub fn compose_curried_morphisms(phi: &CurriedMorphism, psi: &CurriedMorphism) -> Result<CurriedMorphism, PresentationError> {
    if phi.right_map() != psi.left_map() {
        return Err(PresentationError::FrameMismatch(format!("right frame of {} differs from left frame of {}", phi.name(), psi.name())));
    }
    let source = Arc::new(compose_curried(phi.source(), psi.source())?);
    let target = Arc::new(compose_curried(phi.target(), psi.target())?);
    let mut components = IndexMap::new();
    for (c, pc) in phi.source().instances() {
        let tc = phi.left_map().apply_sort(c).expect("total");
        let mut images = IndexMap::new();
        for g in pc.gens() {
            let x = Term::generator(g.name.clone(), g.sort.clone());
            let px = phi.apply(c.as_str(), &x)?;
            for h in psi.source().at(g.sort.as_str()).gens() {
                let y = Term::generator(h.name.clone(), h.sort.clone());
                let qy = psi.apply(g.sort.as_str(), &y)?;
                let img = tensor(phi.target(), psi.target(), tc.as_str(), &px, &qy)?.to_term();
                images.insert(tensor_name(g.name.as_str(), h.name.as_str()), img);
            }
        }
        components.insert(c.clone(), images);
    }
    CurriedMorphism::new(
        tensor_name(phi.name().as_str(), psi.name().as_str()),
        source,
        target,
        phi.left_map().clone(),
        psi.right_map().clone(),
        components,
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellKind {
    /// `(P ⊛ Q) ⊛ R → P ⊛ (Q ⊛ R)`.
    Associator,
    /// `U(C) ⊛ P → P`.
    LeftUnitor,
    /// `P ⊛ U(D) → P`.
    RightUnitor,
}

/// An invertible globular cell together with its inverse.
#[derive(Clone, Debug)]
pub struct CoherenceCell {
    pub kind: CellKind,
    pub forward: CurriedMorphism,
    pub inverse: CurriedMorphism,
}

fn globular_pair(
    name: String,
    source: Arc<CurriedPresentation>,
    target: Arc<CurriedPresentation>,
    pairs: Vec<(Name, Name, Name, Name)>,
) -> Result<(CurriedMorphism, CurriedMorphism), PresentationError> {
    // (sort, source generator, target generator, generator sort)
    let mut fwd: IndexMap<Name, IndexMap<Name, Term>> = IndexMap::new();
    let mut bwd: IndexMap<Name, IndexMap<Name, Term>> = IndexMap::new();
    for (c, a, b, d) in pairs {
        fwd.entry(c.clone()).or_default().insert(a.clone(), Term::generator(b.clone(), d.clone()));
        bwd.entry(c).or_default().insert(b, Term::generator(a, d));
    }
    let f = CurriedMorphism::globular(name.clone(), source.clone(), target.clone(), fwd)?;
    let g = CurriedMorphism::globular(format!("{name}^-1"), target, source, bwd)?;
    Ok((f, g))
}

pub fn associator(p: &CurriedPresentation, q: &CurriedPresentation, r: &CurriedPresentation) -> Result<CoherenceCell, PresentationError> {
    let source = Arc::new(compose_curried(&compose_curried(p, q)?, r)?);
    let target = Arc::new(compose_curried(p, &compose_curried(q, r)?)?);
    let mut pairs = Vec::new();
    for (c, pc) in p.instances() {
        for a in pc.gens() {
            for b in q.at(a.sort.as_str()).gens() {
                for e in r.at(b.sort.as_str()).gens() {
                    let left = tensor_name(tensor_name(a.name.as_str(), b.name.as_str()).as_str(), e.name.as_str());
                    let right = tensor_name(a.name.as_str(), tensor_name(b.name.as_str(), e.name.as_str()).as_str());
                    pairs.push((c.clone(), left, right, e.sort.clone()));
                }
            }
        }
    }
    let name = format!("alpha[{},{},{}]", p.name(), q.name(), r.name());
    let (forward, inverse) = globular_pair(name, source, target, pairs)?;
    Ok(CoherenceCell { kind: CellKind::Associator, forward, inverse })
}

pub fn left_unitor(p: &CurriedPresentation) -> Result<CoherenceCell, PresentationError> {
    let u = unit_presentation(p.left());
    let source = Arc::new(compose_curried(&u, p)?);
    let target = Arc::new(p.clone());
    let mut pairs = Vec::new();
    for (c, pc) in p.instances() {
        for a in pc.gens() {
            pairs.push((c.clone(), tensor_name(unit_gen(c).as_str(), a.name.as_str()), a.name.clone(), a.sort.clone()));
        }
    }
    let (forward, inverse) = globular_pair(format!("lambda[{}]", p.name()), source, target, pairs)?;
    Ok(CoherenceCell { kind: CellKind::LeftUnitor, forward, inverse })
}

pub fn right_unitor(p: &CurriedPresentation) -> Result<CoherenceCell, PresentationError> {
    let u = unit_presentation(p.right());
    let source = Arc::new(compose_curried(p, &u)?);
    let target = Arc::new(p.clone());
    let mut pairs = Vec::new();
    for (c, pc) in p.instances() {
        for a in pc.gens() {
            pairs.push((c.clone(), tensor_name(a.name.as_str(), unit_gen(&a.sort).as_str()), a.name.clone(), a.sort.clone()));
        }
    }
    let (forward, inverse) = globular_pair(format!("rho[{}]", p.name()), source, target, pairs)?;
    Ok(CoherenceCell { kind: CellKind::RightUnitor, forward, inverse })
}

/// Dispatches on `kind`: three presentations for the associator, one for a unitor.
pub fn coherence_cell(kind: CellKind, args: &[&CurriedPresentation]) -> Result<CoherenceCell, PresentationError> {
    match (kind, args) {
        (CellKind::Associator, [p, q, r]) => associator(p, q, r),
        (CellKind::LeftUnitor, [p]) => left_unitor(p),
        (CellKind::RightUnitor, [p]) => right_unitor(p),
        _ => Err(PresentationError::FrameMismatch(format!("{kind:?} given {} presentations", args.len()))),
    }
}

fn identity_on(p: &CurriedPresentation) -> CurriedMorphism {
    CurriedMorphism::identity(Arc::new(p.clone()))
}

/// Both composites of a cell with its inverse, compared with identities.
pub fn check_invertible(cell: &CoherenceCell, budget: Budget) -> Result<ProofOutcome, PresentationError> {
    let there = cell.forward.then(&cell.inverse)?;
    let back = cell.inverse.then(&cell.forward)?;
    let a = morphisms_equal(AnyMorphism::Curried(&there), AnyMorphism::Curried(&identity_on(cell.forward.source())), budget)?;
    let b = morphisms_equal(AnyMorphism::Curried(&back), AnyMorphism::Curried(&identity_on(cell.forward.target())), budget)?;
    Ok(ProofOutcome::all([a, b]))
}

/// `α^{PQ,R,S} ; α^{P,Q,RS}` against `(α^{P,Q,R} ⊛ 1) ; α^{P,QR,S} ; (1 ⊛ α^{Q,R,S})`.
pub fn pentagon(
    p: &CurriedPresentation,
    q: &CurriedPresentation,
    r: &CurriedPresentation,
    s: &CurriedPresentation,
    budget: Budget,
) -> Result<ProofOutcome, PresentationError> {
    let pq = compose_curried(p, q)?;
    let qr = compose_curried(q, r)?;
    let rs = compose_curried(r, s)?;
    let top = associator(&pq, r, s)?.forward.then(&associator(p, q, &rs)?.forward)?;
    let first = compose_curried_morphisms(&associator(p, q, r)?.forward, &identity_on(s))?;
    let last = compose_curried_morphisms(&identity_on(p), &associator(q, r, s)?.forward)?;
    let bottom = first.then(&associator(p, &qr, s)?.forward)?.then(&last)?;
    morphisms_equal(AnyMorphism::Curried(&top), AnyMorphism::Curried(&bottom), budget)
}

/// `ρ^P ⊛ 1_Q` against `α^{P,U,Q} ; (1_P ⊛ λ^Q)`.
pub fn triangle(p: &CurriedPresentation, q: &CurriedPresentation, budget: Budget) -> Result<ProofOutcome, PresentationError> {
    let u = unit_presentation(p.right());
    let direct = compose_curried_morphisms(&right_unitor(p)?.forward, &identity_on(q))?;
    let via = associator(p, &u, q)?.forward.then(&compose_curried_morphisms(&identity_on(p), &left_unitor(q)?.forward)?)?;
    morphisms_equal(AnyMorphism::Curried(&direct), AnyMorphism::Curried(&via), budget)
}

/// One line of a law suite run.
#[derive(Clone, Debug)]
pub struct LawCheck {
    pub law: String,
    pub outcome: ProofOutcome,
    pub report: Option<ValidationReport>,
}

impl LawCheck {
    pub fn holds(&self) -> bool {
        self.outcome.is_proved() && self.report.as_ref().is_none_or(ValidationReport::is_valid)
    }
}

fn cell_checks(cell: &CoherenceCell, budget: Budget, out: &mut Vec<LawCheck>) -> Result<(), PresentationError> {
    for m in [&cell.forward, &cell.inverse] {
        let report = validate_curried_morphism(m, budget)?;
        let outcome = ProofOutcome::all(report.obligations.iter().map(|o| o.outcome.clone()));
        out.push(LawCheck { law: format!("valid {}", m.name()), outcome, report: Some(report) });
    }
    out.push(LawCheck { law: format!("invertible {}", cell.forward.name()), outcome: check_invertible(cell, budget)?, report: None });
    Ok(())
}

/// Unitors of every presentation, associators and pentagons over composable
/// triples and quadruples drawn from `ps`, triangles over composable pairs.
pub fn coherence_suite(ps: &[&CurriedPresentation], budget: Budget) -> Result<Vec<LawCheck>, PresentationError> {
    let mut out = Vec::new();
    for p in ps {
        cell_checks(&left_unitor(p)?, budget, &mut out)?;
        cell_checks(&right_unitor(p)?, budget, &mut out)?;
    }
    let composable = |a: &CurriedPresentation, b: &CurriedPresentation| a.right() == b.left();
    for p in ps {
        for q in ps.iter().filter(|q| composable(p, q)) {
            out.push(LawCheck { law: format!("triangle {} {}", p.name(), q.name()), outcome: triangle(p, q, budget)?, report: None });
            for r in ps.iter().filter(|r| composable(q, r)) {
                cell_checks(&associator(p, q, r)?, budget, &mut out)?;
                for s in ps.iter().filter(|s| composable(r, s)) {
                    let outcome = pentagon(p, q, r, s, budget)?;
                    let law = format!("pentagon {} {} {} {}", p.name(), q.name(), r.name(), s.name());
                    out.push(LawCheck { law, outcome, report: None });
                }
            }
        }
    }
    Ok(out)
}

/// `U(F)`: `x_c ↦ x_{F c}` over `F` on both sides.
pub fn unit_morphism(f: &CatMorphism) -> Result<CurriedMorphism, PresentationError> {
    let source = Arc::new(unit_presentation(f.source()));
    let target = Arc::new(unit_presentation(f.target()));
    let components = f
        .source()
        .sorts()
        .iter()
        .map(|c| {
            let fc = f.apply_sort(c).expect("total").clone();
            (c.clone(), IndexMap::from([(unit_gen(c), Term::generator(unit_gen(&fc), fc))]))
        })
        .collect();
    CurriedMorphism::new(format!("U[{}]", f.name()), source, target, f.clone(), f.clone(), components)
}
