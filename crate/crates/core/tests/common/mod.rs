#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use profpres::dsl::{parse_workspace, Workspace};
use profpres::presentations::{validate_curried, CrossProver, TermProver, ValidationStatus};
use profpres::prover::{Budget, Prover, Theory, Word};
use profpres::semantics::{check_mu_iso, IsoScope, IsoStatus};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CORPUS: &str = include_str!("../../corpus/corpus.prof");

pub fn corpus() -> Workspace {
    parse_workspace(CORPUS).expect("corpus parses")
}

/// Union-find over plain integers.
pub struct Classes(Vec<usize>);

impl Classes {
    pub fn new(n: usize) -> Self {
        Classes((0..n).collect())
    }

    pub fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.0[x] = r;
        r
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a] = b;
    }

    pub fn count(&mut self) -> usize {
        (0..self.0.len()).filter(|&x| self.find(x) == x).count()
    }
}

/// Classes of the coend of two free one-symbol profunctors truncated at
/// depth `k`: pairs `(p.f^n, f^m.q)` with `n, m <= k`, glued along
/// `(p.f^(n+1), f^m.q) ~ (p.f^n, f^(m+1).q)` whenever both pairs are present.
pub fn free_coend_classes(k: usize) -> usize {
    let idx = |n: usize, m: usize| n * (k + 1) + m;
    let mut uf = Classes::new((k + 1) * (k + 1));
    for n in 0..k {
        for m in 0..k {
            uf.union(idx(n + 1, m), idx(n, m + 1));
        }
    }
    uf.count()
}

/// Normal form of the right word `w` after `q` in the fiber at `*`, where
/// only `q = q.b` holds: a leading run of `b` is absorbed by `q`.
pub fn fiber_normal(w: &str) -> String {
    w.trim_start_matches('b').to_string()
}

/// Normal form of `f^m.q.w` in the collage, where also `f.q = q.a`: each
/// `f` becomes a leading `a`, then `q.a^n.b = f^n.q.b = f^n.q = q.a^n`
/// removes every `b`.
pub fn collage_normal(m: usize, w: &str) -> String {
    "a".repeat(m) + &w.replace('b', "")
}

/// Shortlex-first pair of right words that the collage identifies while the
/// fiber keeps them apart, rendered as cross-paths.
pub fn conservativity_witness(max_len: usize) -> Option<(String, String)> {
    let mut words = vec![String::new()];
    for len in 1..=max_len {
        let mut next = Vec::new();
        for w in words.iter().filter(|w| w.len() == len - 1) {
            for c in ["a", "b"] {
                next.push(format!("{w}{c}"));
            }
        }
        words.extend(next);
    }
    let key = |w: &String| (w.len(), w.clone());
    words.sort_by_key(key);
    type Ranked = ((usize, String, String), (String, String));
    let mut best: Option<Ranked> = None;
    for (i, u) in words.iter().enumerate() {
        for v in &words[i + 1..] {
            if fiber_normal(u) != fiber_normal(v) && collage_normal(0, u) == collage_normal(0, v) {
                let rank = (u.len().max(v.len()), u.clone(), v.clone());
                if best.as_ref().is_none_or(|(r, _)| rank < *r) {
                    best = Some((rank, (u.clone(), v.clone())));
                }
            }
        }
    }
    let show = |w: &str| std::iter::once("q".to_string()).chain(w.chars().map(String::from)).collect::<Vec<_>>().join(".");
    best.map(|(_, (u, v))| (show(&u), show(&v)))
}

/// Index of a class `<p.f^n, ...>` of the coend of `Papp` and `Qapp`: `f`s on the left
/// plus `f`s and `a`s on the right, counted from the representative text.
pub fn shift_class_index(rep: &str) -> usize {
    let inner = rep.trim_start_matches('<').trim_end_matches('>');
    let (l, r) = inner.split_once(", ").expect("pair representative");
    let count = |s: &str, sym: &str| s.split('.').filter(|x| *x == sym).count();
    count(l, "f") + count(r, "f") + count(r, "a")
}

/// Random small workspaces for the comparison-map property.
pub struct RandomCat {
    pub name: String,
    pub sorts: Vec<String>,
    /// (name, src, tgt)
    pub funs: Vec<(String, String, String)>,
    pub eqs: Vec<(String, String)>,
}

impl RandomCat {
    /// At most one endomorphism per sort, made idempotent or of period two,
    /// and symbols between distinct sorts only in increasing order, so every
    /// hom set is finite.
    pub fn generate(rng: &mut impl Rng, name: &str, prefix: &str) -> Self {
        let n = rng.gen_range(1..=3);
        let sorts: Vec<String> = (0..n).map(|i| format!("{prefix}{i}")).collect();
        let (mut funs, mut eqs) = (Vec::new(), Vec::new());
        for (i, s) in sorts.iter().enumerate() {
            if rng.gen_bool(0.6) {
                let e = format!("{prefix}e{i}");
                funs.push((e.clone(), s.clone(), s.clone()));
                if rng.gen_bool(0.5) {
                    eqs.push((format!("{e}.{e}"), e.clone()));
                } else {
                    eqs.push((format!("{e}.{e}.{e}"), e.clone()));
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(0.5) {
                    funs.push((format!("{prefix}h{i}{j}"), sorts[i].clone(), sorts[j].clone()));
                }
            }
        }
        RandomCat { name: name.to_string(), sorts, funs, eqs }
    }

    pub fn render(&self) -> String {
        let mut s = format!("category {} {{\n  sorts {};\n", self.name, self.sorts.join(", "));
        for (f, a, b) in &self.funs {
            s += &format!("  fun {f} : {a} -> {b};\n");
        }
        for (l, r) in &self.eqs {
            s += &format!("  eq {l} = {r};\n");
        }
        s + "}\n"
    }

    /// A random path of at most `max` symbols from `sort`, with its target.
    pub fn walk(&self, rng: &mut impl Rng, sort: &str, max: usize) -> (Vec<String>, String) {
        let (mut syms, mut at) = (Vec::new(), sort.to_string());
        for _ in 0..rng.gen_range(0..=max) {
            let out: Vec<_> = self.funs.iter().filter(|f| f.1 == at).collect();
            let Some(f) = out.choose(rng) else { break };
            syms.push(f.0.clone());
            at = f.2.clone();
        }
        (syms, at)
    }
}

type Gens = Vec<(String, String)>;

fn term(rng: &mut impl Rng, right: &RandomCat, gens: &Gens) -> (String, String) {
    let (g, s) = gens.choose(rng).expect("generators");
    let (syms, tgt) = right.walk(rng, s, 2);
    (std::iter::once(g.clone()).chain(syms).collect::<Vec<_>>().join("."), tgt)
}

fn term_of_sort(rng: &mut impl Rng, right: &RandomCat, gens: &Gens, sort: &str) -> Option<String> {
    (0..40).map(|_| term(rng, right, gens)).find(|(_, s)| s == sort).map(|(t, _)| t)
}

/// Text of a random curried presentation `left -> right`; `None` when an
/// action image of the right sort was not found.
pub fn random_curried(rng: &mut impl Rng, name: &str, left: &RandomCat, right: &RandomCat, tag: &str) -> Option<String> {
    let mut at: BTreeMap<String, Gens> = BTreeMap::new();
    let mut body = String::new();
    for (i, c) in left.sorts.iter().enumerate() {
        let gens: Gens = (0..rng.gen_range(1..=3)).map(|j| (format!("{tag}{i}{j}"), right.sorts.choose(rng).unwrap().clone())).collect();
        body += &format!("  at {c} {{\n");
        for (g, s) in &gens {
            body += &format!("    gen {g} : {s};\n");
        }
        for _ in 0..rng.gen_range(0..=2) {
            let (l, s) = term(rng, right, &gens);
            if let Some(r) = term_of_sort(rng, right, &gens, &s) {
                if r != l {
                    body += &format!("    eq {l} = {r};\n");
                }
            }
        }
        body += "  }\n";
        at.insert(c.clone(), gens);
    }
    for (f, src, tgt) in &left.funs {
        body += &format!("  act {f} {{");
        for (g, s) in &at[tgt] {
            body += &format!(" {g} -> {};", term_of_sort(rng, right, &at[src], s)?);
        }
        body += " }\n";
    }
    Some(format!("curried {name} : {} -> {} {{\n{body}}}\n", left.name, right.name))
}

/// `C`, `D`, `E` and curried `P : C -> D`, `Q : D -> E`.
pub fn random_workspace(rng: &mut impl Rng) -> Option<String> {
    let c = RandomCat::generate(rng, "C", "c");
    let d = RandomCat::generate(rng, "D", "d");
    let e = RandomCat::generate(rng, "E", "e");
    let p = random_curried(rng, "P", &c, &d, "x")?;
    let q = random_curried(rng, "Q", &d, &e, "y")?;
    Some([c.render(), d.render(), e.render(), p, q].join("\n"))
}

/// Every well-typed path of `cat` up to `max` symbols, as `(src, tgt, text)`.
pub fn all_paths(cat: &profpres::syntax::CatPresentation, max: usize) -> Vec<(String, String, String)> {
    let mut out = BTreeSet::new();
    for s in cat.sorts() {
        for p in cat.paths_from(s, max) {
            out.insert((p.src().to_string(), p.tgt().to_string(), p.to_string()));
        }
    }
    out.into_iter().collect()
}

/// Outcome counts of the comparison map over random composable pairs.
#[derive(Debug, Default)]
pub struct Tally {
    pub exhaustive: usize,
    pub fragment: usize,
    pub skipped: usize,
    pub squares: usize,
    pub classes: usize,
    pub failures: Vec<String>,
}

pub fn random_mu_checks(seed: u64, wanted: usize) -> Tally {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = Tally::default();
    let budget = Budget::default().with_length(6);
    let mut attempts = 0;
    while tally.exhaustive < wanted && attempts < 50 * wanted {
        attempts += 1;
        let Some(text) = random_workspace(&mut rng) else { continue };
        let ws = parse_workspace(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
        let (p, q) = (ws.curried("P").unwrap(), ws.curried("Q").unwrap());
        let valid = |x| validate_curried(x, Budget::default()).map(|r| r.status() == ValidationStatus::Valid).unwrap_or(false);
        if !valid(p) || !valid(q) {
            tally.skipped += 1;
            continue;
        }
        let report = check_mu_iso(p, q, budget);
        if let Ok(r) = &report {
            tally.squares += r.checked_squares;
            tally.classes += r.map.len();
        }
        match report.map(|r| r.status) {
            Ok(IsoStatus::Iso { scope: IsoScope::Exhaustive }) => tally.exhaustive += 1,
            Ok(IsoStatus::Iso { .. }) => tally.fragment += 1,
            Ok(IsoStatus::Inconclusive { .. }) => tally.skipped += 1,
            Ok(IsoStatus::NotIso { reason }) => tally.failures.push(format!("{reason}\n{text}")),
            Err(e) => tally.failures.push(format!("{e}\n{text}")),
        }
    }
    tally
}

/// Every compiled theory in the corpus: categories, instances, the fibers of
/// curried presentations and the collages of uncurried ones.
pub fn corpus_theories() -> Vec<Arc<Theory>> {
    let ws = corpus();
    let b = Budget::default();
    let mut out = Vec::new();
    for e in ws.entities() {
        use profpres::dsl::Entity::*;
        match e {
            Category(c) => out.push(Prover::for_category(c, b).unwrap().theory().clone()),
            Instance(i) => out.push(TermProver::new(i.clone(), b).unwrap().prover().theory().clone()),
            Curried(p) => {
                for inst in p.instances().values() {
                    out.push(TermProver::new(inst.clone(), b).unwrap().prover().theory().clone());
                }
            }
            Uncurried(q) => out.push(CrossProver::new(q.clone(), b).unwrap().prover().theory().clone()),
            _ => {}
        }
    }
    out
}

/// Well-typed words of length at most `max`, grouped by endpoints.
pub fn words(th: &Theory, max: usize) -> BTreeMap<(u32, u32), Vec<Word>> {
    let mut out: BTreeMap<(u32, u32), Vec<Word>> = BTreeMap::new();
    for s in 0..th.sorts().len() as u32 {
        let mut layer = vec![Word::identity(s)];
        for _ in 0..=max {
            let mut next = Vec::new();
            for w in layer {
                if w.len() < max {
                    for &f in th.out_funs(w.tgt) {
                        let mut syms = w.syms.clone();
                        syms.push(f);
                        next.push(th.typed(syms, s));
                    }
                }
                out.entry((w.src, w.tgt)).or_default().push(w);
            }
            layer = next;
        }
    }
    out
}

pub fn pairs(th: &Theory, max: usize) -> Vec<(Word, Word)> {
    let mut out = Vec::new();
    for ws in words(th, max).values() {
        for (i, a) in ws.iter().enumerate() {
            for b in &ws[i + 1..] {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}
