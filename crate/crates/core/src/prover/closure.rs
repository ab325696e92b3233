//! Bounded congruence closure over all well-typed words up to a length.
//!
//! Unions are recorded in a proof forest so that any equality found can be
//! turned back into a derivation.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use super::derivation::Derivation;
use super::theory::{Theory, Word};

/// Hard cap on the universe; whole length levels are dropped to respect it.
pub const MAX_UNIVERSE: usize = 400_000;

#[derive(Clone, Copy, Debug)]
enum Reason {
    /// `a = u.l.v`, `b = u.r.v` for equation `eq` (flipped swaps `l` and `r`).
    Axiom { eq: usize, flipped: bool, at: usize },
    /// `a = f.a'`, `b = f.b'` with `a' ~ b'`.
    Pre,
    /// `a = a'.f`, `b = b'.f` with `a' ~ b'`.
    Post,
}

#[derive(Clone, Copy, Debug)]
struct Edge {
    a: usize,
    b: usize,
    reason: Reason,
}

#[derive(Debug)]
pub struct Closure {
    words: Vec<Word>,
    index: HashMap<Word, usize>,
    tail: Vec<Option<usize>>,
    init: Vec<Option<usize>>,
    parent: Vec<usize>,
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
    max_len: usize,
    rounds_used: usize,
    saturated: bool,
}

impl Closure {
    pub fn build(th: &Theory, max_len: usize, rounds: usize) -> Closure {
        let mut words: Vec<Word> = (0..th.sorts().len() as u32).map(Word::identity).collect();
        let mut init: Vec<Option<usize>> = vec![None; words.len()];
        let mut level_start = 0;
        let mut reached = 0;
        for len in 1..=max_len {
            let level_end = words.len();
            let mut fresh = Vec::new();
            let mut fresh_init = Vec::new();
            for i in level_start..level_end {
                for &f in th.out_funs(words[i].tgt) {
                    let mut syms = words[i].syms.clone();
                    syms.push(f);
                    fresh.push(Word { src: words[i].src, tgt: th.funs()[f as usize].tgt, syms });
                    fresh_init.push(Some(i));
                }
                if words.len() + fresh.len() > MAX_UNIVERSE {
                    break;
                }
            }
            if words.len() + fresh.len() > MAX_UNIVERSE {
                break;
            }
            level_start = level_end;
            words.extend(fresh);
            init.extend(fresh_init);
            reached = len;
        }
        let index: HashMap<Word, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let tail = words
            .iter()
            .map(|w| {
                if w.syms.is_empty() {
                    return None;
                }
                let rest = th.typed(w.syms[1..].to_vec(), w.tgt);
                index.get(&rest).copied()
            })
            .collect();
        let n = words.len();
        let mut c = Closure {
            words,
            index,
            tail,
            init,
            parent: (0..n).collect(),
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
            max_len: reached,
            rounds_used: 0,
            saturated: false,
        };
        c.seed(th);
        c.congruence(rounds);
        c
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn root(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize, reason: Reason) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        let e = self.edges.len();
        self.edges.push(Edge { a, b, reason });
        self.adj[a].push(e);
        self.adj[b].push(e);
        true
    }

    fn seed(&mut self, th: &Theory) {
        for w in 0..self.words.len() {
            for (eq, (l, r)) in th.eqs().iter().enumerate() {
                for (flipped, from, to) in [(false, l, r), (true, r, l)] {
                    let pat = &from.syms;
                    if pat.is_empty() || pat.len() > self.words[w].syms.len() {
                        continue;
                    }
                    let syms = self.words[w].syms.clone();
                    for at in 0..=syms.len() - pat.len() {
                        if &syms[at..at + pat.len()] != pat.as_slice() {
                            continue;
                        }
                        let mut out = syms[..at].to_vec();
                        out.extend_from_slice(&to.syms);
                        out.extend_from_slice(&syms[at + pat.len()..]);
                        let target = Word { src: self.words[w].src, tgt: self.words[w].tgt, syms: out };
                        if let Some(&t) = self.index.get(&target) {
                            self.union(w, t, Reason::Axiom { eq, flipped, at });
                        }
                    }
                }
            }
        }
    }

    fn congruence(&mut self, rounds: usize) {
        for round in 0..rounds {
            let mut changed = false;
            let mut pre: HashMap<(u32, usize), usize> = HashMap::new();
            let mut post: HashMap<(usize, u32), usize> = HashMap::new();
            for w in 0..self.words.len() {
                if self.words[w].syms.is_empty() {
                    continue;
                }
                if let Some(t) = self.tail[w] {
                    let key = (self.words[w].syms[0], self.find(t));
                    match pre.get(&key) {
                        Some(&o) => changed |= self.union(o, w, Reason::Pre),
                        None => {
                            pre.insert(key, w);
                        }
                    }
                }
                if let Some(i) = self.init[w] {
                    let key = (self.find(i), *self.words[w].syms.last().expect("nonempty"));
                    match post.get(&key) {
                        Some(&o) => changed |= self.union(o, w, Reason::Post),
                        None => {
                            post.insert(key, w);
                        }
                    }
                }
            }
            self.rounds_used = round + 1;
            if !changed {
                self.saturated = true;
                return;
            }
        }
    }

    /// Longest word length actually enumerated.
    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn rounds_used(&self) -> usize {
        self.rounds_used
    }

    /// The last round merged nothing.
    pub fn saturated(&self) -> bool {
        self.saturated
    }

    pub fn universe(&self) -> &[Word] {
        &self.words
    }

    pub fn id_of(&self, w: &Word) -> Option<usize> {
        self.index.get(w).copied()
    }

    /// Class identifier (the smallest member index) of an enumerated word.
    pub fn class_of(&self, w: &Word) -> Option<usize> {
        self.id_of(w).map(|i| self.root(i))
    }

    pub fn same_class(&self, a: &Word, b: &Word) -> Option<bool> {
        Some(self.class_of(a)? == self.class_of(b)?)
    }

    /// Derivation of `a = b` for two words known to be in one class.
    pub fn explain(&self, th: &Theory, a: &Word, b: &Word) -> Option<Arc<Derivation>> {
        let (ia, ib) = (self.id_of(a)?, self.id_of(b)?);
        if self.root(ia) != self.root(ib) {
            return None;
        }
        let mut memo = HashMap::new();
        Some(self.explain_ids(th, ia, ib, &mut memo))
    }

    fn forest_path(&self, from: usize, to: usize) -> Vec<(usize, bool)> {
        let mut prev: HashMap<usize, (usize, usize)> = HashMap::new();
        let mut queue = VecDeque::from([from]);
        prev.insert(from, (usize::MAX, usize::MAX));
        while let Some(x) = queue.pop_front() {
            if x == to {
                break;
            }
            for &e in &self.adj[x] {
                let Edge { a, b, .. } = self.edges[e];
                let y = if a == x { b } else { a };
                if let std::collections::hash_map::Entry::Vacant(v) = prev.entry(y) {
                    v.insert((x, e));
                    queue.push_back(y);
                }
            }
        }
        let mut path = Vec::new();
        let mut cur = to;
        while cur != from {
            let (p, e) = prev[&cur];
            // forward when the edge was recorded as p -> cur
            path.push((e, self.edges[e].a == p));
            cur = p;
        }
        path.reverse();
        path
    }

    fn explain_ids(&self, th: &Theory, a: usize, b: usize, memo: &mut HashMap<(usize, usize), Arc<Derivation>>) -> Arc<Derivation> {
        if a == b {
            return Derivation::refl(self.words[a].clone());
        }
        if let Some(d) = memo.get(&(a, b)) {
            return d.clone();
        }
        let mut proof = Derivation::refl(self.words[a].clone());
        for (e, forward) in self.forest_path(a, b) {
            let step = self.edge_proof(th, e, memo);
            let step = if forward { step } else { Derivation::sym(step) };
            proof = Derivation::trans(proof, step);
        }
        memo.insert((a, b), proof.clone());
        proof
    }

    fn edge_proof(&self, th: &Theory, e: usize, memo: &mut HashMap<(usize, usize), Arc<Derivation>>) -> Arc<Derivation> {
        let Edge { a, b, reason } = self.edges[e];
        match reason {
            Reason::Axiom { eq, flipped, at } => {
                let ax = Derivation::axiom(th, eq);
                let ax = if flipped { Derivation::sym(ax) } else { ax };
                let w = &self.words[a].syms;
                let u = &w[..at];
                let v = &w[at + ax.lhs.len()..];
                Derivation::in_context(th, u, ax, v)
            }
            Reason::Pre => {
                let (ta, tb) = (self.tail[a].expect("tail"), self.tail[b].expect("tail"));
                let inner = self.explain_ids(th, ta, tb, memo);
                Derivation::pre(th, self.words[a].syms[0], inner)
            }
            Reason::Post => {
                let (ia, ib) = (self.init[a].expect("init"), self.init[b].expect("init"));
                let inner = self.explain_ids(th, ia, ib, memo);
                Derivation::post(th, inner, *self.words[a].syms.last().expect("nonempty"))
            }
        }
    }
}
