//! Derivations built from the six rules of provable equality, and a replay
//! checker that re-derives every conclusion from the theory alone.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use super::theory::{Theory, Word};

#[derive(Debug)]
pub enum Step {
    /// An equation of the theory, as written.
    Axiom(usize),
    Refl,
    Sym(Arc<Derivation>),
    Trans(Arc<Derivation>, Arc<Derivation>),
    /// From `p = q` infer `p.f = q.f`.
    Post(Arc<Derivation>, u32),
    /// From `p = q` infer `f.p = f.q`.
    Pre(u32, Arc<Derivation>),
}

/// A node of a proof DAG together with the equation it claims.
#[derive(Debug)]
pub struct Derivation {
    pub lhs: Word,
    pub rhs: Word,
    pub step: Step,
    depth: usize,
}

impl Derivation {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn axiom(th: &Theory, eq: usize) -> Arc<Derivation> {
        let (l, r) = &th.eqs()[eq];
        Arc::new(Derivation { lhs: l.clone(), rhs: r.clone(), step: Step::Axiom(eq), depth: 1 })
    }

    pub fn refl(w: Word) -> Arc<Derivation> {
        Arc::new(Derivation { lhs: w.clone(), rhs: w, step: Step::Refl, depth: 1 })
    }

    pub fn is_refl(&self) -> bool {
        matches!(self.step, Step::Refl)
    }

    pub fn sym(d: Arc<Derivation>) -> Arc<Derivation> {
        match &d.step {
            Step::Refl => d,
            Step::Sym(inner) => inner.clone(),
            _ => Arc::new(Derivation { lhs: d.rhs.clone(), rhs: d.lhs.clone(), depth: d.depth + 1, step: Step::Sym(d) }),
        }
    }

    pub fn trans(a: Arc<Derivation>, b: Arc<Derivation>) -> Arc<Derivation> {
        debug_assert_eq!(a.rhs, b.lhs, "trans premises do not meet");
        if a.is_refl() {
            return b;
        }
        if b.is_refl() {
            return a;
        }
        Arc::new(Derivation { lhs: a.lhs.clone(), rhs: b.rhs.clone(), depth: a.depth.max(b.depth) + 1, step: Step::Trans(a, b) })
    }

    pub fn post(th: &Theory, d: Arc<Derivation>, f: u32) -> Arc<Derivation> {
        let tgt = th.funs()[f as usize].tgt;
        let ext = |w: &Word| {
            let mut syms = w.syms.clone();
            syms.push(f);
            Word { src: w.src, tgt, syms }
        };
        let (lhs, rhs) = (ext(&d.lhs), ext(&d.rhs));
        if d.is_refl() {
            return Derivation::refl(lhs);
        }
        Arc::new(Derivation { lhs, rhs, depth: d.depth + 1, step: Step::Post(d, f) })
    }

    pub fn pre(th: &Theory, f: u32, d: Arc<Derivation>) -> Arc<Derivation> {
        let src = th.funs()[f as usize].src;
        let ext = |w: &Word| {
            let mut syms = Vec::with_capacity(w.syms.len() + 1);
            syms.push(f);
            syms.extend_from_slice(&w.syms);
            Word { src, tgt: w.tgt, syms }
        };
        let (lhs, rhs) = (ext(&d.lhs), ext(&d.rhs));
        if d.is_refl() {
            return Derivation::refl(lhs);
        }
        Arc::new(Derivation { lhs, rhs, depth: d.depth + 1, step: Step::Pre(f, d) })
    }

    /// `u.p.v = u.q.v` from `p = q`.
    pub fn in_context(th: &Theory, u: &[u32], d: Arc<Derivation>, v: &[u32]) -> Arc<Derivation> {
        let mut d = d;
        for &f in v {
            d = Derivation::post(th, d, f);
        }
        for &f in u.iter().rev() {
            d = Derivation::pre(th, f, d);
        }
        d
    }

    /// Number of distinct nodes in the DAG.
    pub fn size(self: &Arc<Self>) -> usize {
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![self.clone()];
        while let Some(d) = stack.pop() {
            if !seen.insert(Arc::as_ptr(&d)) {
                continue;
            }
            stack.extend(children(&d).into_iter().cloned());
        }
        seen.len()
    }
}

fn children(d: &Derivation) -> Vec<&Arc<Derivation>> {
    match &d.step {
        Step::Axiom(_) | Step::Refl => vec![],
        Step::Sym(a) | Step::Post(a, _) | Step::Pre(_, a) => vec![a],
        Step::Trans(a, b) => vec![a, b],
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReplayError {
    #[error("axiom {0} is not an equation of the theory")]
    NoSuchAxiom(usize),
    #[error("node {node}: recorded conclusion does not follow from its rule")]
    WrongConclusion { node: usize },
    #[error("node {node}: transitivity premises do not meet")]
    Disconnected { node: usize },
    #[error("node {node}: word is not well typed")]
    IllTyped { node: usize },
    #[error("node {node}: symbol does not compose with the premise")]
    BadExtension { node: usize },
}

/// Re-derives the conclusion of every node and compares it with the recorded one.
/// Returns the equation proved by the root.
pub fn replay(th: &Theory, root: &Arc<Derivation>) -> Result<(Word, Word), ReplayError> {
    let mut done: HashMap<*const Derivation, (Word, Word)> = HashMap::new();
    let mut ids: HashMap<*const Derivation, usize> = HashMap::new();
    let mut stack: Vec<(Arc<Derivation>, bool)> = vec![(root.clone(), false)];
    while let Some((d, expanded)) = stack.pop() {
        let key = Arc::as_ptr(&d);
        if done.contains_key(&key) {
            continue;
        }
        let kids = children(&d);
        if !expanded && kids.iter().any(|k| !done.contains_key(&Arc::as_ptr(k))) {
            stack.push((d.clone(), true));
            for k in kids {
                stack.push((k.clone(), false));
            }
            continue;
        }
        let node = ids.len();
        ids.insert(key, node);
        let get = |a: &Arc<Derivation>| done[&Arc::as_ptr(a)].clone();
        let concl = match &d.step {
            Step::Axiom(i) => th.eqs().get(*i).cloned().ok_or(ReplayError::NoSuchAxiom(*i))?,
            Step::Refl => {
                if !th.is_well_typed(&d.lhs) {
                    return Err(ReplayError::IllTyped { node });
                }
                (d.lhs.clone(), d.lhs.clone())
            }
            Step::Sym(a) => {
                let (l, r) = get(a);
                (r, l)
            }
            Step::Trans(a, b) => {
                let (l1, r1) = get(a);
                let (l2, r2) = get(b);
                if r1 != l2 {
                    return Err(ReplayError::Disconnected { node });
                }
                (l1, r2)
            }
            Step::Post(a, f) => {
                let (l, r) = get(a);
                let info = th.funs().get(*f as usize).ok_or(ReplayError::BadExtension { node })?;
                if info.src != l.tgt || info.src != r.tgt {
                    return Err(ReplayError::BadExtension { node });
                }
                let ext = |mut w: Word| {
                    w.syms.push(*f);
                    w.tgt = info.tgt;
                    w
                };
                (ext(l), ext(r))
            }
            Step::Pre(f, a) => {
                let (l, r) = get(a);
                let info = th.funs().get(*f as usize).ok_or(ReplayError::BadExtension { node })?;
                if info.tgt != l.src || info.tgt != r.src {
                    return Err(ReplayError::BadExtension { node });
                }
                let ext = |mut w: Word| {
                    w.syms.insert(0, *f);
                    w.src = info.src;
                    w
                };
                (ext(l), ext(r))
            }
        };
        if concl.0 != d.lhs || concl.1 != d.rhs {
            return Err(ReplayError::WrongConclusion { node });
        }
        done.insert(key, concl);
    }
    Ok(done[&Arc::as_ptr(root)].clone())
}

#[derive(Serialize)]
struct NodeJson {
    id: usize,
    rule: &'static str,
    lhs: String,
    rhs: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    axiom: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    symbol: Option<String>,
    premises: Vec<usize>,
}

/// Flattens the DAG into numbered nodes, premises before conclusions.
pub fn derivation_json(th: &Theory, root: &Arc<Derivation>) -> serde_json::Value {
    let mut ids: HashMap<*const Derivation, usize> = HashMap::new();
    let mut nodes = Vec::new();
    let mut stack: Vec<(Arc<Derivation>, bool)> = vec![(root.clone(), false)];
    while let Some((d, expanded)) = stack.pop() {
        if ids.contains_key(&Arc::as_ptr(&d)) {
            continue;
        }
        let kids = children(&d);
        if !expanded {
            stack.push((d.clone(), true));
            for k in kids.into_iter().rev() {
                stack.push((k.clone(), false));
            }
            continue;
        }
        let premises: Vec<usize> = kids.iter().map(|k| ids[&Arc::as_ptr(k)]).collect();
        let (rule, axiom, symbol) = match &d.step {
            Step::Axiom(i) => ("axiom", Some(*i), None),
            Step::Refl => ("refl", None, None),
            Step::Sym(_) => ("sym", None, None),
            Step::Trans(..) => ("trans", None, None),
            Step::Post(_, f) => ("post", None, Some(th.funs()[*f as usize].name.to_string())),
            Step::Pre(f, _) => ("pre", None, Some(th.funs()[*f as usize].name.to_string())),
        };
        let id = nodes.len();
        ids.insert(Arc::as_ptr(&d), id);
        nodes.push(NodeJson { id, rule, lhs: th.render(&d.lhs), rhs: th.render(&d.rhs), axiom, symbol, premises });
    }
    serde_json::json!({ "root": ids[&Arc::as_ptr(root)], "nodes": nodes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prover::Theory;
    use crate::syntax::CatPresentation;

    #[test]
    fn forged_conclusion_is_rejected() {
        let c = CatPresentation::new("M").with_sort("*").with_fun("f", "*", "*").with_fun("g", "*", "*").with_eq_str("f.g", "g.f");
        let th = Theory::from_category(&c).unwrap();
        let ax = Derivation::axiom(&th, 0);
        assert!(replay(&th, &ax).is_ok());
        let forged = Arc::new(Derivation { lhs: ax.lhs.clone(), rhs: ax.lhs.clone(), step: Step::Sym(ax.clone()), depth: 2 });
        assert_eq!(replay(&th, &forged), Err(ReplayError::WrongConclusion { node: 1 }));
        let bad_post = Arc::new(Derivation { lhs: ax.lhs.clone(), rhs: ax.rhs.clone(), step: Step::Post(ax.clone(), 0), depth: 2 });
        assert!(replay(&th, &bad_post).is_err());
    }
}
