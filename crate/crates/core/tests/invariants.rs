mod common;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use common::{corpus, random_workspace, Classes, RandomCat, CORPUS};
use indexmap::IndexMap;
use profpres::bridge::{bar_names, check_nongenerative, round_trip, uncurry};
use profpres::compose::{compose_curried, tensor};
use profpres::dsl::parse_workspace;
use profpres::presentations::{
    fiber_instance, CrossPath, CrossProver, CurriedPresentation, InstancePresentation, Term, TermProver, UncurriedPresentation,
};
use profpres::prover::{Budget, Canon, Origin, Prover, Verdict};
use profpres::semantics::{
    category_table, check_mu_iso, coend_compose, curried_table, instance_table, uncurried_table, FiniteCategoryTable, IsoStatus,
    ProfunctorTable,
};
use profpres::syntax::{apply_morphism, compose_paths, CatMorphism, CatPresentation, Name, Path};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn at(k: usize) -> Budget {
    Budget::default().with_length(k)
}

fn curried_corpus() -> Vec<Arc<CurriedPresentation>> {
    let ws = corpus();
    ["Pc", "Qc", "Rc"].iter().map(|n| ws.curried(n).unwrap().clone()).collect()
}

fn uncurried_corpus() -> Vec<Arc<UncurriedPresentation>> {
    let ws = corpus();
    let mut out: Vec<_> = ["Pu", "Qu", "Papp", "Qapp"].iter().map(|n| ws.uncurried(n).unwrap().clone()).collect();
    out.extend(curried_corpus().iter().map(|p| Arc::new(uncurry(p))));
    out
}

/// Every term `g.h` of `inst` with `h` of at most `max` symbols.
fn terms(inst: &InstancePresentation, max: usize) -> Vec<Term> {
    inst.gens().iter().flat_map(|g| inst.base().paths_from(&g.sort, max).into_iter().map(|h| Term::new(g.name.clone(), h))).collect()
}

fn path_of(cat: &CatPresentation, from: &str, syms: &[String]) -> Path {
    if syms.is_empty() {
        Path::identity(from)
    } else {
        cat.path(&syms.join(".")).unwrap()
    }
}

fn decided_equal(v: &Verdict) -> bool {
    matches!(v, Verdict::Proved { .. } | Verdict::Decided { equal: true })
}

// Paths.

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn path_concatenation_is_associative_and_unital(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cat = RandomCat::generate(&mut rng, "C", "c");
        let pres = parse_workspace(&cat.render()).unwrap().category("C").unwrap().clone();
        let s0 = cat.sorts[rng.gen_range(0..cat.sorts.len())].clone();
        let (a, s1) = cat.walk(&mut rng, &s0, 4);
        let (b, s2) = cat.walk(&mut rng, &s1, 4);
        let (c, _) = cat.walk(&mut rng, &s2, 4);
        let (p, q, r) = (path_of(&pres, &s0, &a), path_of(&pres, &s1, &b), path_of(&pres, &s2, &c));
        let left = compose_paths(&compose_paths(&p, &q).unwrap(), &r).unwrap();
        let right = compose_paths(&p, &compose_paths(&q, &r).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(compose_paths(&Path::identity(p.src().clone()), &p).unwrap(), p.clone());
        prop_assert_eq!(compose_paths(&p, &Path::identity(p.tgt().clone())).unwrap(), p.clone());
        for x in [&p, &q, &r, &left] {
            prop_assert_eq!(&pres.path(&x.to_string()).unwrap(), x);
        }
    }

    #[test]
    fn morphisms_distribute_over_concatenation(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cat = RandomCat::generate(&mut rng, "C", "c");
        let pres = parse_workspace(&cat.render()).unwrap().category("C").unwrap().clone();
        // Each symbol goes to a random parallel path, falling back to itself.
        let mut fmap = IndexMap::new();
        for (f, src, tgt) in &cat.funs {
            let img = (0..20)
                .map(|_| cat.walk(&mut rng, src, 3))
                .find(|(syms, end)| end == tgt && !syms.is_empty())
                .map_or_else(|| vec![f.clone()], |(syms, _)| syms);
            fmap.insert(Name::new(f), path_of(&pres, src, &img));
        }
        let smap = cat.sorts.iter().map(|s| (Name::new(s), Name::new(s))).collect();
        let f = CatMorphism::new("F", pres.clone(), pres.clone(), smap, fmap).unwrap();
        let s0 = cat.sorts[rng.gen_range(0..cat.sorts.len())].clone();
        let (a, s1) = cat.walk(&mut rng, &s0, 4);
        let (b, _) = cat.walk(&mut rng, &s1, 4);
        let (p, q) = (path_of(&pres, &s0, &a), path_of(&pres, &s1, &b));
        let whole = apply_morphism(&f, &compose_paths(&p, &q).unwrap()).unwrap();
        let parts = compose_paths(&apply_morphism(&f, &p).unwrap(), &apply_morphism(&f, &q).unwrap()).unwrap();
        prop_assert_eq!(whole, parts);
    }
}

#[test]
fn corpus_morphism_distributes_exhaustively() {
    let ws = corpus();
    let f = ws.cat_morphism("F").unwrap();
    let m = f.source();
    let paths = m.paths_from(&Name::new("*"), 4);
    for p in &paths {
        for q in &paths {
            let whole = apply_morphism(f, &compose_paths(p, q).unwrap()).unwrap();
            let parts = compose_paths(&apply_morphism(f, p).unwrap(), &apply_morphism(f, q).unwrap()).unwrap();
            assert_eq!(whole, parts, "F({p}.{q})");
        }
        assert_eq!(&m.path(&p.to_string()).unwrap(), p);
    }
}

// Error spans.

/// Byte ranges of `//` comments, from the first slash to the newline.
fn comment_ranges(text: &str) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut from = 0;
    while let Some(i) = text[from..].find("//") {
        let start = from + i;
        let end = text[start..].find('\n').map_or(text.len(), |j| start + j);
        out.push((start, end));
        from = end;
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn stray_characters_are_reported_where_they_stand(pos in 0..CORPUS.len(), ch in prop::sample::select(vec!['`', '\\', '"'])) {
        prop_assume!(CORPUS.is_char_boundary(pos));
        let comments = comment_ranges(CORPUS);
        // Splitting `//` or `->` makes its first half the offending token.
        prop_assume!(!comments.iter().any(|&(s, _)| pos == s + 1));
        prop_assume!(!(pos > 0 && CORPUS[pos - 1..].starts_with("->")));
        let mut text = CORPUS.to_string();
        text.insert(pos, ch);
        let in_comment = comments.iter().any(|&(s, e)| pos > s + 1 && pos <= e);
        match parse_workspace(&text) {
            Ok(_) => prop_assert!(in_comment, "accepted a stray {ch:?} at {pos}"),
            Err(e) => {
                prop_assert!(!in_comment, "{e}");
                let span = e.span();
                prop_assert!(span.start <= pos && pos < span.end.max(span.start + 1), "{e} does not cover byte {pos}");
            }
        }
    }
}

// Collages.

/// A cross path as (left symbols, profunctor symbol, right symbols).
type Cross = (Vec<String>, String, Vec<String>);

fn show(c: &Cross) -> String {
    c.0.iter().chain(std::iter::once(&c.1)).chain(&c.2).cloned().collect::<Vec<_>>().join(".")
}

/// Classes of cross paths of at most `max` symbols under the relation
/// generated by: the equations; reflexivity, symmetry, transitivity;
/// replacing the left part by an equal path of the left category, or the
/// right part by an equal path of the right category; prefixing a left
/// symbol; appending a right symbol. Equality of the categories comes from
/// their own provers, never from the collage.
struct EightRules {
    items: Vec<Cross>,
    index: HashMap<Cross, usize>,
    classes: Classes,
}

impl EightRules {
    fn new(q: &UncurriedPresentation, max: usize) -> Self {
        let (l, r) = (q.left(), q.right());
        let left_paths: Vec<Path> = l.sorts().iter().flat_map(|s| l.paths_from(s, max - 1)).collect();
        let mut items = Vec::new();
        for pro in q.pros() {
            for pre in left_paths.iter().filter(|p| *p.tgt() == pro.src) {
                for post in r.paths_from(&pro.tgt, max - 1 - pre.len()) {
                    let names = |p: &Path| p.syms().iter().map(|s| s.to_string()).collect::<Vec<_>>();
                    items.push((names(pre), pro.name.to_string(), names(&post)));
                }
            }
        }
        let index: HashMap<Cross, usize> = items.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        let mut classes = Classes::new(items.len());
        for eq in q.eqs() {
            let key = |c: &CrossPath| {
                let names = |p: &Path| p.syms().iter().map(|s| s.to_string()).collect::<Vec<_>>();
                (names(c.pre()), c.pro().to_string(), names(c.post()))
            };
            if let (Some(&a), Some(&b)) = (index.get(&key(&eq.lhs)), index.get(&key(&eq.rhs))) {
                classes.union(a, b);
            }
        }
        let exact = |cat: &CatPresentation| {
            let prover = Prover::for_category(cat, Budget::default()).unwrap();
            assert!(prover.is_exact(), "{} has no complete system", cat.name());
            prover
        };
        let (lp, rp) = (exact(l), exact(r));
        let canon = |prover: &Prover, cat: &CatPresentation, from: &Name, syms: &[String]| -> Canon {
            let p = path_of(cat, from.as_str(), syms);
            prover.canonical(&prover.theory().word(Origin::Plain, &p).unwrap()).unwrap()
        };
        let mut by_left: HashMap<(Canon, String, Vec<String>), usize> = HashMap::new();
        let mut by_right: HashMap<(Vec<String>, String, Canon), usize> = HashMap::new();
        for (i, (pre, pro, post)) in items.iter().enumerate() {
            let sym = q.pro(pro).unwrap();
            let start = if pre.is_empty() { sym.src.clone() } else { l.fun(&pre[0]).unwrap().src.clone() };
            let kl = (canon(&lp, l, &start, pre), pro.clone(), post.clone());
            match by_left.get(&kl) {
                Some(&j) => classes.union(i, j),
                None => {
                    by_left.insert(kl, i);
                }
            }
            let kr = (pre.clone(), pro.clone(), canon(&rp, r, &sym.tgt, post));
            match by_right.get(&kr) {
                Some(&j) => classes.union(i, j),
                None => {
                    by_right.insert(kr, i);
                }
            }
        }
        let mut rules = EightRules { items, index, classes };
        rules.close(q);
        rules
    }

    /// Closes under prefixing left symbols and appending right symbols.
    fn close(&mut self, q: &UncurriedPresentation) {
        let mut keys: Vec<(bool, String)> = q.left().funs().iter().map(|f| (true, f.name.to_string())).collect();
        keys.extend(q.right().funs().iter().map(|f| (false, f.name.to_string())));
        let moves: Vec<Vec<Option<usize>>> = self
            .items
            .iter()
            .map(|(pre, pro, post)| {
                keys.iter()
                    .map(|(front, s)| {
                        let next = if *front {
                            (std::iter::once(s.clone()).chain(pre.iter().cloned()).collect(), pro.clone(), post.clone())
                        } else {
                            (pre.clone(), pro.clone(), post.iter().cloned().chain(std::iter::once(s.clone())).collect())
                        };
                        self.index.get(&next).copied()
                    })
                    .collect()
            })
            .collect();
        loop {
            let mut changed = false;
            for k in 0..keys.len() {
                let mut seen: HashMap<usize, usize> = HashMap::new();
                for (i, row) in moves.iter().enumerate() {
                    let Some(j) = row[k] else { continue };
                    let root = self.classes.find(i);
                    match seen.get(&root) {
                        Some(&other) if self.classes.find(other) != self.classes.find(j) => {
                            self.classes.union(other, j);
                            changed = true;
                        }
                        Some(_) => {}
                        None => {
                            seen.insert(root, j);
                        }
                    }
                }
            }
            if !changed {
                return;
            }
        }
    }

    fn related(&mut self, a: &Cross, b: &Cross) -> bool {
        let (i, j) = (self.index[a], self.index[b]);
        self.classes.find(i) == self.classes.find(j)
    }
}

#[test]
fn collage_equality_is_the_eight_rule_relation() {
    let mut compared = 0;
    for q in uncurried_corpus() {
        let mut oracle = EightRules::new(&q, 9);
        let prover = CrossProver::new(q.clone(), at(10)).unwrap();
        let small: Vec<Cross> = oracle.items.iter().filter(|c| c.0.len() + c.2.len() < 5).cloned().collect();
        let cross = |c: &Cross| q.cross(&show(c)).unwrap();
        for (i, a) in small.iter().enumerate() {
            let ca = cross(a);
            for b in &small[i + 1..] {
                let cb = cross(b);
                if ca.src() != cb.src() || ca.tgt() != cb.tgt() {
                    continue;
                }
                let verdict = prover.prove(&ca, &cb).unwrap().verdict;
                assert!(!matches!(verdict, Verdict::NotProvedWithinBudget), "{}: {} vs {} undecided", q.name(), show(a), show(b));
                assert_eq!(decided_equal(&verdict), oracle.related(a, b), "{}: {} vs {}", q.name(), show(a), show(b));
                compared += 1;
            }
        }
    }
    assert!(compared > 1000, "{compared}");
}

#[test]
fn proved_cross_paths_stay_cross_paths() {
    for q in uncurried_corpus() {
        let prover = CrossProver::new(q.clone(), at(8)).unwrap();
        let th = prover.prover().theory().clone();
        for ws in common::words(&th, 5).values() {
            let crossing: Vec<_> = ws.iter().filter(|w| prover.cross(w).is_some()).collect();
            for w in ws {
                if prover.cross(w).is_some() {
                    continue;
                }
                for c in &crossing {
                    let out = prover.prover().prove_words(c, w).unwrap();
                    assert!(!out.is_proved(), "{}: {} equals the non-cross word {}", q.name(), th.render(c), th.render(w));
                }
            }
            // Normal forms of cross paths are cross paths.
            for c in &crossing {
                if let Some(Canon::Normal(n)) = prover.prover().canonical(c) {
                    assert!(prover.cross(&n).is_some(), "{}: {} normalizes to {}", q.name(), th.render(c), th.render(&n));
                }
            }
        }
    }
}

// Terms.

fn corpus_instances() -> Vec<Arc<InstancePresentation>> {
    let ws = corpus();
    let mut out = vec![ws.instance("I").unwrap().clone()];
    for p in curried_corpus() {
        out.extend(p.instances().values().cloned());
    }
    for q in uncurried_corpus() {
        for c in q.left().sorts() {
            out.push(Arc::new(fiber_instance(&q, c.as_str()).unwrap()));
        }
    }
    out
}

#[test]
fn terms_split_uniquely_into_generator_and_path() {
    for inst in corpus_instances() {
        let all = terms(&inst, 4);
        let texts: BTreeSet<String> = all.iter().map(|t| t.to_string()).collect();
        assert_eq!(texts.len(), all.len(), "{}: two terms print alike", inst.name());
        for t in &all {
            let back = inst.term(&t.to_string()).unwrap();
            assert_eq!(&back, t);
            assert!(inst.gen(back.gen().as_str()).is_some());
            assert_eq!(back.path().src(), &inst.gen(back.gen().as_str()).unwrap().sort);
        }
    }
}

#[test]
fn fibers_of_uncurried_images_have_the_barred_generators() {
    for p in curried_corpus() {
        let names = bar_names(&p);
        let bar = uncurry(&p);
        for (c, inst) in p.instances() {
            let fiber = fiber_instance(&bar, c.as_str()).unwrap();
            let got: BTreeSet<(String, String)> = fiber.gens().iter().map(|g| (g.name.to_string(), g.sort.to_string())).collect();
            let want: BTreeSet<(String, String)> =
                inst.gens().iter().map(|g| (names[&(c.clone(), g.name.clone())].to_string(), g.sort.to_string())).collect();
            assert_eq!(got, want, "{} at {c}", p.name());
        }
    }
}

// Composites.

fn composable_pairs() -> Vec<(Arc<CurriedPresentation>, Arc<CurriedPresentation>)> {
    let ps = curried_corpus();
    let mut out = Vec::new();
    for p in &ps {
        for q in &ps {
            if p.right() == q.left() {
                out.push((p.clone(), q.clone()));
            }
        }
    }
    out
}

#[test]
fn tensor_respects_provable_equality() {
    let mut checked = 0;
    for (p, q) in composable_pairs() {
        let pq = compose_curried(&p, &q).unwrap();
        for (c, pc) in p.instances() {
            let left = TermProver::new(pc.clone(), at(6)).unwrap();
            let whole = TermProver::new(pq.at(c.as_str()).clone(), at(8)).unwrap();
            let ss = terms(pc, 3);
            for s in &ss {
                for s2 in ss.iter().filter(|s2| s2.sort() == s.sort()) {
                    if !left.prove(s, s2).unwrap().is_proved() {
                        continue;
                    }
                    let qd = q.at(s.sort().as_str());
                    let right = TermProver::new(qd.clone(), at(6)).unwrap();
                    let ts = terms(qd, 3);
                    for t in &ts {
                        for t2 in ts.iter().filter(|t2| t2.sort() == t.sort()) {
                            if !right.prove(t, t2).unwrap().is_proved() {
                                continue;
                            }
                            let a = tensor(&p, &q, c.as_str(), s, t).unwrap().to_term();
                            let b = tensor(&p, &q, c.as_str(), s2, t2).unwrap().to_term();
                            assert!(whole.prove(&a, &b).unwrap().is_proved(), "{s} ⊗ {t} vs {s2} ⊗ {t2}");
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    assert!(checked > 100, "{checked}");
}

/// `(P ⊛ Q)(f)(s ⊗ t)` and `P(f)(s) ⊗ t` as values.
fn action_splits(p: &CurriedPresentation, q: &CurriedPresentation, max: usize) -> usize {
    let pq = compose_curried(p, q).unwrap();
    let mut checked = 0;
    for f in p.left().funs() {
        let fp = Path::new_unchecked(f.src.clone(), f.tgt.clone(), vec![f.name.clone()]);
        let pc = p.at(f.tgt.as_str());
        for s in terms(pc, max) {
            for t in terms(q.at(s.sort().as_str()), max) {
                let st = tensor(p, q, f.tgt.as_str(), &s, &t).unwrap();
                let lhs = pq.act_path(&fp, &st.to_term()).unwrap();
                let moved = p.act_path(&fp, &s).unwrap();
                let rhs = tensor(p, q, f.src.as_str(), &moved, &t).unwrap().to_term();
                assert_eq!(lhs, rhs, "{}({}) on {s} ⊗ {t}", pq.name(), f.name);
                checked += 1;
            }
        }
    }
    checked
}

/// Generator and equation counts of `P ⊛ Q` at each sort.
fn composite_counts(p: &CurriedPresentation, q: &CurriedPresentation) {
    let pq = compose_curried(p, q).unwrap();
    for (c, pc) in p.instances() {
        let gens: usize = pc.gens().iter().map(|g| q.at(g.sort.as_str()).gens().len()).sum();
        let eqs: usize = pc.gens().iter().map(|g| q.at(g.sort.as_str()).eqs().len()).sum::<usize>()
            + pc.eqs().iter().map(|e| q.at(e.lhs.sort().as_str()).gens().len()).sum::<usize>();
        let inst = pq.at(c.as_str());
        assert_eq!(inst.gens().len(), gens, "{} at {c}", pq.name());
        assert_eq!(inst.eqs().len(), eqs, "{} at {c}", pq.name());
    }
}

#[test]
fn composite_actions_split_and_counts_add_up_on_the_corpus() {
    let mut checked = 0;
    for (p, q) in composable_pairs() {
        checked += action_splits(&p, &q, 4);
        composite_counts(&p, &q);
        let pq = Arc::new(compose_curried(&p, &q).unwrap());
        for (r, s) in composable_pairs() {
            if r == q {
                checked += action_splits(&pq, &s, 2);
                composite_counts(&pq, &s);
            }
        }
    }
    assert!(checked > 500, "{checked}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composite_actions_split_and_counts_add_up_on_random_pairs(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some(text) = random_workspace(&mut rng) else { return Ok(()) };
        let ws = parse_workspace(&text).unwrap();
        let (p, q) = (ws.curried("P").unwrap(), ws.curried("Q").unwrap());
        action_splits(p, q, 3);
        composite_counts(p, q);
    }
}

// Uncurrying.

#[test]
fn left_symbols_move_through_barred_generators() {
    let mut checked = 0;
    for p in curried_corpus() {
        let names = bar_names(&p);
        let bar = Arc::new(uncurry(&p));
        let prover = CrossProver::new(bar.clone(), at(8)).unwrap();
        let left = p.left();
        for c in left.sorts() {
            for f in left.paths_from(c, 3) {
                let pc = p.at(f.tgt().as_str());
                for t in terms(pc, 3) {
                    let lhs = CrossPath::new(f.clone(), names[&(f.tgt().clone(), t.gen().clone())].clone(), t.path().clone());
                    let moved = p.act_path(&f, &t).unwrap();
                    let rhs =
                        CrossPath::new(Path::identity(c.clone()), names[&(c.clone(), moved.gen().clone())].clone(), moved.path().clone());
                    let out = prover.prove(&lhs, &rhs).unwrap();
                    assert!(out.is_proved(), "{}: {lhs} vs {rhs}: {:?}", p.name(), out.verdict);
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 100, "{checked}");
}

#[test]
fn uncurried_images_are_strict_and_round_trip() {
    for p in curried_corpus() {
        let bar = uncurry(&p);
        let out = check_nongenerative(&bar, Budget::default(), true).unwrap();
        assert!(out.holds(), "{}", p.name());
        let rt = round_trip(&p, Budget::default()).unwrap();
        assert!(rt.is_iso(), "{}", p.name());
    }
}

/// Uncurrying preserves and reflects equality of elements, and every cross
/// path of the image is equal to a barred term, so the element sets agree.
#[test]
fn uncurrying_preserves_the_elements() {
    for p in curried_corpus() {
        let names = bar_names(&p);
        let bar = Arc::new(uncurry(&p));
        let cross = CrossProver::new(bar.clone(), at(8)).unwrap();
        for (c, pc) in p.instances() {
            let inside = TermProver::new(pc.clone(), at(8)).unwrap();
            let ts = terms(pc, 3);
            let barred =
                |t: &Term| CrossPath::new(Path::identity(c.clone()), names[&(c.clone(), t.gen().clone())].clone(), t.path().clone());
            for (i, s) in ts.iter().enumerate() {
                for t in ts[i + 1..].iter().filter(|t| t.sort() == s.sort()) {
                    let a = inside.prove(s, t).unwrap().verdict;
                    let b = cross.prove(&barred(s), &barred(t)).unwrap().verdict;
                    assert_eq!(decided_equal(&a), decided_equal(&b), "{} at {c}: {s} vs {t}", p.name());
                }
            }
        }
        let table_p = curried_table(&p, at(4)).unwrap();
        let table_bar = uncurried_table(&bar, at(4)).unwrap();
        let r = profpres::semantics::find_table_iso(&table_p, &table_bar).unwrap();
        match (&r.status, table_p.stabilized() && table_bar.stabilized()) {
            (IsoStatus::Iso { .. }, true) => {}
            (IsoStatus::Inconclusive { .. }, false) => {}
            (s, exact) => panic!("{}: {s:?} with exact = {exact}", p.name()),
        }
    }
}

// Tables.

/// Literal lookups of the category laws, independent of the table's own check.
fn category_laws(t: &FiniteCategoryTable) -> Vec<String> {
    let mut out = Vec::new();
    let els = t.elements();
    for (a, e) in els.iter().enumerate() {
        for (x, y) in [(t.identity(e.src), a), (a, t.identity(e.tgt))] {
            if let Some(r) = t.compose(x, y) {
                if r != a {
                    out.push(format!("unit at {}", e.rep));
                }
            }
        }
        for b in (0..els.len()).filter(|&b| els[b].src == e.tgt) {
            for c in (0..els.len()).filter(|&c| els[c].src == els[b].tgt) {
                let l = t.compose(a, b).and_then(|ab| t.compose(ab, c));
                let r = t.compose(b, c).and_then(|bc| t.compose(a, bc));
                if let (Some(l), Some(r)) = (l, r) {
                    if l != r {
                        out.push(format!("assoc at {} {} {}", e.rep, els[b].rep, els[c].rep));
                    }
                }
            }
        }
    }
    out
}

fn profunctor_laws(t: &ProfunctorTable) -> Vec<String> {
    let (l, r) = (t.left(), t.right());
    let mut out = Vec::new();
    for (x, e) in t.elements().iter().enumerate() {
        if t.left_action(l.identity(e.src), x).is_some_and(|y| y != x) || t.right_action(x, r.identity(e.tgt)).is_some_and(|y| y != x) {
            out.push(format!("unit at {}", e.rep));
        }
        for u in (0..l.len()).filter(|&u| l.elements()[u].tgt == e.src) {
            for v in (0..l.len()).filter(|&v| l.elements()[v].tgt == l.elements()[u].src) {
                let step = t.left_action(u, x).and_then(|ux| t.left_action(v, ux));
                let once = l.compose(v, u).and_then(|vu| t.left_action(vu, x));
                if let (Some(a), Some(b)) = (step, once) {
                    if a != b {
                        out.push(format!("left action at {}", e.rep));
                    }
                }
            }
            for h in (0..r.len()).filter(|&h| r.elements()[h].src == e.tgt) {
                let a = t.left_action(u, x).and_then(|ux| t.right_action(ux, h));
                let b = t.right_action(x, h).and_then(|xh| t.left_action(u, xh));
                if let (Some(a), Some(b)) = (a, b) {
                    if a != b {
                        out.push(format!("actions do not commute at {}", e.rep));
                    }
                }
            }
        }
        for h in (0..r.len()).filter(|&h| r.elements()[h].src == e.tgt) {
            for k in (0..r.len()).filter(|&k| r.elements()[k].src == r.elements()[h].tgt) {
                let step = t.right_action(x, h).and_then(|xh| t.right_action(xh, k));
                let once = r.compose(h, k).and_then(|hk| t.right_action(x, hk));
                if let (Some(a), Some(b)) = (step, once) {
                    if a != b {
                        out.push(format!("right action at {}", e.rep));
                    }
                }
            }
        }
    }
    out
}

#[test]
fn every_table_satisfies_the_laws() {
    let ws = corpus();
    let mut tables = 0;
    for k in 1..=4 {
        for cat in ["M", "N", "O", "E", "C", "D", "T", "Nf", "AB"] {
            let t = category_table(ws.category(cat).unwrap(), at(k)).unwrap();
            assert_eq!(category_laws(&t), Vec::<String>::new(), "{cat} at {k}");
            assert!(t.law_violations().is_empty(), "{cat} at {k}");
            tables += 1;
        }
        let mut pros: Vec<ProfunctorTable> = Vec::new();
        for p in curried_corpus() {
            pros.push(curried_table(&p, at(k)).unwrap());
        }
        for q in uncurried_corpus() {
            pros.push(uncurried_table(&q, at(k)).unwrap());
        }
        pros.push(instance_table(ws.instance("I").unwrap(), at(k)).unwrap());
        for (p, q) in composable_pairs() {
            pros.push(coend_compose(&curried_table(&p, at(k)).unwrap(), &curried_table(&q, at(k)).unwrap()).unwrap());
            pros.push(curried_table(&compose_curried(&p, &q).unwrap(), at(k)).unwrap());
        }
        let (pu, qu) = (ws.uncurried("Pu").unwrap(), ws.uncurried("Qu").unwrap());
        pros.push(coend_compose(&uncurried_table(pu, at(k)).unwrap(), &uncurried_table(qu, at(k)).unwrap()).unwrap());
        for t in &pros {
            assert_eq!(profunctor_laws(t), Vec::<String>::new(), "{} at {k}", t.name());
            assert!(t.law_violations().is_empty(), "{} at {k}", t.name());
            tables += 1;
        }
    }
    assert!(tables > 80, "{tables}");
}

/// The comparison map on one pair, each property checked separately against
/// the two tables.
/// `Ok(None)` when the comparison is inconclusive. On a fragment the
/// properties are checked against the bounded tables.
fn mu_properties(p: &CurriedPresentation, q: &CurriedPresentation, budget: Budget) -> Result<Option<usize>, String> {
    let report = check_mu_iso(p, q, budget).map_err(|e| e.to_string())?;
    match &report.status {
        IsoStatus::NotIso { reason } => return Err(reason.clone()),
        IsoStatus::Inconclusive { .. } => return Ok(None),
        IsoStatus::Iso { .. } => {}
    }
    let coend = coend_compose(&curried_table(p, budget).unwrap(), &curried_table(q, budget).unwrap()).unwrap();
    let pq = compose_curried(p, q).unwrap();
    let comp = curried_table(&pq, budget).unwrap();
    let index = |t: &ProfunctorTable, rep: &str| t.find(rep).ok_or(format!("{rep} is not a class of {}", t.name()));
    let mut img: BTreeMap<usize, usize> = BTreeMap::new();
    for (a, b) in &report.map {
        let (x, y) = (index(&coend, a)?, index(&comp, b)?);
        if img.insert(x, y).is_some() {
            return Err(format!("{a} is mapped twice"));
        }
    }
    // Total.
    if img.len() != coend.len() {
        return Err(format!("{} of {} classes mapped", img.len(), coend.len()));
    }
    // Injective.
    let targets: BTreeSet<usize> = img.values().copied().collect();
    if targets.len() != img.len() {
        return Err("two classes share an image".into());
    }
    // Surjective.
    if targets.len() != comp.len() {
        return Err(format!("{} of {} composite classes hit", targets.len(), comp.len()));
    }
    // Equivariant, both sides over the same base tables.
    if coend.left() != comp.left() || coend.right() != comp.right() {
        return Err("base tables differ".into());
    }
    for (&(u, x), &ux) in coend.left_actions() {
        if comp.left_action(u, img[&x]) != Some(img[&ux]) {
            return Err(format!("left action {u} on {}", coend.elements()[x].rep));
        }
    }
    for (&(x, h), &xh) in coend.right_actions() {
        if comp.right_action(img[&x], h) != Some(img[&xh]) {
            return Err(format!("right action {h} on {}", coend.elements()[x].rep));
        }
    }
    // Well defined: the generating identification <s.g, t> ~ <s, Q(g)(t)>
    // goes to provably equal composites.
    let mut checked = 0;
    for (c, pc) in p.instances() {
        let whole = TermProver::new(pq.at(c.as_str()).clone(), budget.with_length(8)).unwrap();
        for s in terms(pc, 2) {
            let d = s.sort().clone();
            for g in p.right().paths_from(&d, 2) {
                let sg = s.then(&g).unwrap();
                for t in terms(q.at(g.tgt().as_str()), 2) {
                    let a = tensor(p, q, c.as_str(), &sg, &t).unwrap().to_term();
                    let moved = q.act_path(&g, &t).unwrap();
                    let b = tensor(p, q, c.as_str(), &s, &moved).unwrap().to_term();
                    if !whole.prove(&a, &b).unwrap().is_proved() {
                        return Err(format!("<{sg}, {t}> and <{s}, {moved}> have different images"));
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(Some(checked))
}

#[test]
fn comparison_map_properties_hold_one_by_one() {
    let ws = corpus();
    let (pc, qc) = (ws.curried("Pc").unwrap(), ws.curried("Qc").unwrap());
    assert!(mu_properties(pc, qc, at(5)).unwrap().is_some_and(|n| n > 0));
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d75);
    let (mut exhaustive, mut attempts) = (0, 0);
    while exhaustive < 40 && attempts < 2000 {
        attempts += 1;
        let Some(text) = random_workspace(&mut rng) else { continue };
        let ws = parse_workspace(&text).unwrap();
        let (p, q) = (ws.curried("P").unwrap(), ws.curried("Q").unwrap());
        let valid = |x| profpres::presentations::validate_curried(x, Budget::default()).map(|r| r.is_valid()).unwrap_or(false);
        if !valid(p) || !valid(q) {
            continue;
        }
        let exact = check_mu_iso(p, q, at(6)).unwrap().is_exhaustive_iso();
        match mu_properties(p, q, at(6)) {
            Ok(Some(_)) if exact => exhaustive += 1,
            Ok(_) => {}
            Err(e) => panic!("{e}\n{text}"),
        }
    }
    assert!(exhaustive >= 40, "{exhaustive} in {attempts}");
}

#[test]
fn larger_budgets_only_refine() {
    let ws = corpus();
    for cat in ["M", "N", "D", "Nf", "AB"] {
        let cat = ws.category(cat).unwrap();
        let prover = Prover::for_category(cat, Budget::default()).unwrap();
        assert!(prover.is_exact());
        for k in 1..=5 {
            let (small, big) = (category_table(cat, at(k)).unwrap(), category_table(cat, at(k + 1)).unwrap());
            let reps: BTreeSet<String> = big.elements().iter().map(|e| e.rep.to_string()).collect();
            // Distinct classes are certified distinct, and each keeps its
            // representative, so none merge at the next depth.
            for (i, a) in small.elements().iter().enumerate() {
                assert!(reps.contains(&a.rep.to_string()), "{} lost {} at {}", cat.name(), a.rep, k + 1);
                for b in small.elements()[i + 1..].iter().filter(|b| (a.src, a.tgt) == (b.src, b.tgt)) {
                    assert!(prover.prove_paths(&a.rep, &b.rep).unwrap().is_refuted(), "{} vs {}", a.rep, b.rep);
                }
            }
        }
    }
    for p in curried_corpus() {
        for k in 1..=4 {
            let (small, big) = (curried_table(&p, at(k)).unwrap(), curried_table(&p, at(k + 1)).unwrap());
            let reps: BTreeSet<String> = big.elements().iter().map(|e| e.rep.to_string()).collect();
            for e in small.elements() {
                assert!(reps.contains(&e.rep.to_string()), "{} lost {} at {}", p.name(), e.rep, k + 1);
            }
        }
    }
}
