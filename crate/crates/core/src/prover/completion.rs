//! Knuth–Bendix completion for typed string rewriting under shortlex.
//!
//! Every rule keeps a derivation of `lhs = rhs`, so rewriting yields
//! replayable proofs.

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::sync::Arc;

use thiserror::Error;

use super::derivation::Derivation;
use super::theory::{Theory, Word};

/// Rules longer than this are taken as a sign of divergence.
const MAX_RULE_LEN: usize = 64;

#[derive(Clone, Debug)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: Word,
    pub proof: Arc<Derivation>,
}

/// A confluent, terminating system for a theory.
#[derive(Clone, Debug)]
pub struct RewriteSystem {
    rules: Vec<Rule>,
    steps_used: usize,
    critical_pairs: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompletionFailure {
    #[error("completion did not finish within {steps} steps ({rules} rules so far)")]
    StepBudget { steps: usize, rules: usize },
    #[error("completion produced a rule of length {len}; giving up")]
    RuleTooLong { len: usize },
}

fn find(hay: &[u32], needle: &[u32]) -> Option<usize> {
    if needle.is_empty() || needle.len() > hay.len() {
        return None;
    }
    hay.windows(needle.len()).position(|w| w == needle)
}

/// First match position and rule index, scanning left to right.
fn first_redex(rules: &[Option<Rule>], w: &[u32]) -> Option<(usize, usize)> {
    for i in 0..w.len() {
        for (j, r) in rules.iter().enumerate() {
            if let Some(r) = r {
                let l = &r.lhs.syms;
                if w.len() - i >= l.len() && &w[i..i + l.len()] == l.as_slice() {
                    return Some((i, j));
                }
            }
        }
    }
    None
}

fn rewrite_step(th: &Theory, w: &Word, i: usize, r: &Rule) -> (Word, Arc<Derivation>) {
    let u = &w.syms[..i];
    let v = &w.syms[i + r.lhs.len()..];
    let d = Derivation::in_context(th, u, r.proof.clone(), v);
    debug_assert_eq!(&d.lhs, w);
    (d.rhs.clone(), d)
}

fn normalize_in(th: &Theory, rules: &[Option<Rule>], w: &Word) -> (Word, Arc<Derivation>) {
    let mut cur = w.clone();
    let mut proof = Derivation::refl(w.clone());
    while let Some((i, j)) = first_redex(rules, &cur.syms) {
        let (next, step) = rewrite_step(th, &cur, i, rules[j].as_ref().expect("live rule"));
        proof = Derivation::trans(proof, step);
        cur = next;
    }
    (cur, proof)
}

/// All overlaps `r1.lhs = x.y`, `r2.lhs = y.z` with `y` nonempty and proper.
fn overlaps(th: &Theory, r1: &Rule, r2: &Rule, same: bool) -> Vec<Arc<Derivation>> {
    let (a, b) = (&r1.lhs.syms, &r2.lhs.syms);
    let mut out = Vec::new();
    let max = a.len().min(b.len());
    for l in 1..=max {
        if same && l == a.len() {
            continue;
        }
        if l == b.len() && l <= a.len() {
            // r2.lhs inside r1.lhs: cannot happen between inter-reduced rules.
            continue;
        }
        if a[a.len() - l..] != b[..l] {
            continue;
        }
        let x = &a[..a.len() - l];
        let z = &b[l..];
        let left = Derivation::in_context(th, &[], r1.proof.clone(), z);
        let right = Derivation::in_context(th, x, r2.proof.clone(), &[]);
        debug_assert_eq!(left.lhs, right.lhs);
        out.push(Derivation::trans(Derivation::sym(left), right));
    }
    out
}

impl RewriteSystem {
    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn steps_used(&self) -> usize {
        self.steps_used
    }

    /// Number of critical pairs checked to join in the final system.
    pub fn critical_pairs(&self) -> usize {
        self.critical_pairs
    }

    fn live(&self) -> Vec<Option<Rule>> {
        self.rules.iter().cloned().map(Some).collect()
    }

    pub fn normalize(&self, w: &Word) -> Word {
        let mut cur = w.syms.clone();
        'outer: loop {
            for i in 0..cur.len() {
                for r in &self.rules {
                    let l = &r.lhs.syms;
                    if cur.len() - i >= l.len() && &cur[i..i + l.len()] == l.as_slice() {
                        cur.splice(i..i + l.len(), r.rhs.syms.iter().copied());
                        continue 'outer;
                    }
                }
            }
            break;
        }
        Word { src: w.src, tgt: w.tgt, syms: cur }
    }

    pub fn normalize_with_proof(&self, th: &Theory, w: &Word) -> (Word, Arc<Derivation>) {
        normalize_in(th, &self.live(), w)
    }

    /// No left-hand side occurs in `syms`.
    pub fn is_irreducible(&self, syms: &[u32]) -> bool {
        self.rules.iter().all(|r| find(syms, &r.lhs.syms).is_none())
    }

    /// Irreducibility of `syms` given that everything but the last symbol is irreducible.
    pub fn suffix_irreducible(&self, syms: &[u32]) -> bool {
        self.rules.iter().all(|r| !syms.ends_with(&r.lhs.syms) || r.lhs.syms.is_empty())
    }

    pub fn display(&self, th: &Theory) -> Vec<String> {
        self.rules.iter().map(|r| format!("{} -> {}", th.render(&r.lhs), th.render(&r.rhs))).collect()
    }
}

/// Runs completion on the equations of `th` under shortlex and, when that
/// fails and `th` weighs some symbols, again under `Theory::cmp_reduction`.
/// Each attempt gets the full step budget.
pub fn complete(th: &Theory, max_steps: usize) -> Result<RewriteSystem, CompletionFailure> {
    let shortlex = complete_under(th, max_steps, |a, b| th.cmp_shortlex(a, b));
    match shortlex {
        Err(_) if th.is_weighted() => complete_under(th, max_steps, |a, b| th.cmp_reduction(a, b)),
        done => done,
    }
}

fn complete_under(th: &Theory, max_steps: usize, order: impl Fn(&[u32], &[u32]) -> Ordering) -> Result<RewriteSystem, CompletionFailure> {
    let mut rules: Vec<Option<Rule>> = Vec::new();
    let mut pending: VecDeque<Arc<Derivation>> = (0..th.eqs().len()).map(|i| Derivation::axiom(th, i)).collect();
    let mut steps = 0usize;
    loop {
        while let Some(eq) = pending.pop_front() {
            steps += 1;
            if steps > max_steps {
                return Err(CompletionFailure::StepBudget { steps: max_steps, rules: rules.iter().flatten().count() });
            }
            let (a, da) = normalize_in(th, &rules, &eq.lhs);
            let (b, db) = normalize_in(th, &rules, &eq.rhs);
            if a.syms == b.syms {
                continue;
            }
            // da: lhs = a, db: rhs = b, eq: lhs = rhs; so a = b.
            let a_to_b = Derivation::trans(Derivation::trans(Derivation::sym(da), eq), db);
            let rule = match order(&a.syms, &b.syms) {
                Ordering::Greater => Rule { lhs: a, rhs: b, proof: a_to_b },
                _ => Rule { lhs: b, rhs: a, proof: Derivation::sym(a_to_b) },
            };
            if rule.lhs.len() > MAX_RULE_LEN {
                return Err(CompletionFailure::RuleTooLong { len: rule.lhs.len() });
            }
            for slot in rules.iter_mut() {
                let Some(old) = slot else { continue };
                if find(&old.lhs.syms, &rule.lhs.syms).is_some() {
                    pending.push_back(old.proof.clone());
                    *slot = None;
                }
            }
            rules.push(Some(rule.clone()));
            let n = rules.len();
            for j in 0..n - 1 {
                let needs = matches!(&rules[j], Some(old) if find(&old.rhs.syms, &rule.lhs.syms).is_some());
                if needs {
                    let old = rules[j].take().expect("live");
                    let (nf, p) = normalize_in(th, &rules, &old.rhs);
                    rules[j] = Some(Rule { lhs: old.lhs, rhs: nf, proof: Derivation::trans(old.proof, p) });
                }
            }
            let new = rules[n - 1].clone().expect("just added");
            for (j, slot) in rules.iter().enumerate().take(n) {
                let Some(other) = slot.clone() else { continue };
                let same = j == n - 1;
                pending.extend(overlaps(th, &new, &other, same));
                if !same {
                    pending.extend(overlaps(th, &other, &new, false));
                }
            }
        }
        // Final certificate: every critical pair joins.
        let live: Vec<Rule> = rules.iter().flatten().cloned().collect();
        let mut joined = 0usize;
        for (i, r1) in live.iter().enumerate() {
            for (j, r2) in live.iter().enumerate() {
                for cp in overlaps(th, r1, r2, i == j) {
                    let (a, _) = normalize_in(th, &rules, &cp.lhs);
                    let (b, _) = normalize_in(th, &rules, &cp.rhs);
                    if a.syms == b.syms {
                        joined += 1;
                    } else {
                        pending.push_back(cp);
                    }
                }
            }
        }
        if pending.is_empty() {
            return Ok(RewriteSystem { rules: live, steps_used: steps, critical_pairs: joined });
        }
    }
}
