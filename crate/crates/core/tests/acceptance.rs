//! One line per acceptance criterion; exits non-zero if any fails.

mod common;

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use profpres::bridge::{check_conservative, check_nongenerative, curry, round_trip, uncurry, BridgeError, CheckStatus, Witness};
use profpres::compose::{coherence_suite, compose_curried, unit_presentation};
use profpres::dsl::{export_json, parse_workspace, render, Entity};
use profpres::presentations::{morphisms_equal, validate_morphism, AnyMorphism, CurriedPresentation, ValidationStatus};
use profpres::prover::{replay, Budget, Prover, Strategy, Verdict};
use profpres::semantics::{
    check_mu_iso, check_unit_hom, coend_compose, profunctor_table, uncurried_table, ProfunctorSource, ProfunctorTable,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl ToString) -> String {
    e.to_string()
}

fn curried_corpus() -> Result<Vec<CurriedPresentation>, String> {
    let ws = common::corpus();
    let mut out: Vec<_> = ["Pc", "Qc", "Rc"].iter().map(|n| (**ws.curried(n).unwrap()).clone()).collect();
    for n in ["Pu", "Papp"] {
        out.push(curry(ws.uncurried(n).unwrap(), Budget::default()).map_err(err)?);
    }
    Ok(out)
}

fn morphism_validity() -> Outcome {
    let ws = common::corpus();
    let (m, f) = (ws.category("M").unwrap(), ws.cat_morphism("F").unwrap());
    let report = validate_morphism(AnyMorphism::Cat(f), Budget::default()).map_err(err)?;
    ensure(report.status() == ValidationStatus::Valid, || format!("{report}"))?;
    let ob = report.obligations.iter().find(|o| o.lhs == "f.f.f.g" && o.rhs == "f.g.f.f").ok_or("no f.f.f.g = f.g.f.f obligation")?;
    let d = ob.outcome.witness.as_ref().ok_or("no derivation")?;
    let prover = Prover::for_category(m, Budget::default()).map_err(err)?;
    replay(prover.theory(), d).map_err(err)?;
    Ok(format!("F valid, f.f.f.g = f.g.f.f replayed ({} nodes)", d.size()))
}

fn not_faithful() -> Outcome {
    let ws = common::corpus();
    let (a, b) = (ws.cat_morphism("S_fg").unwrap(), ws.cat_morphism("S_gf").unwrap());
    let eq = morphisms_equal(AnyMorphism::Cat(a), AnyMorphism::Cat(b), Budget::default()).map_err(err)?;
    ensure(eq.is_proved(), || format!("{:?}", eq.verdict))?;
    ensure(a != b, || "structurally equal".into())?;
    Ok(format!("provably equal ({:?}), structurally different", eq.verdict))
}

fn composite() -> Outcome {
    let ws = common::corpus();
    let pq = compose_curried(ws.curried("Pc").unwrap(), ws.curried("Qc").unwrap()).map_err(err)?;
    let inst = pq.at("*");
    let images: usize = pq.actions().values().map(|m| m.len()).sum();
    ensure(inst.gens().len() == 2 && inst.eqs().len() == 3 && images == 4, || {
        format!("{} gens, {} eqs, {images} images", inst.gens().len(), inst.eqs().len())
    })?;
    let text = render(&Entity::from(pq));
    ensure(text == include_str!("golden/compose_pc_qc.prof"), || format!("differs from golden:\n{text}"))?;
    Ok("2 generators, 3 equations, 4 images; matches golden".into())
}

fn class(t: &ProfunctorTable, rep: &str) -> Result<usize, String> {
    t.find(rep).ok_or_else(|| format!("no class {rep}"))
}

fn hom(t: &profpres::semantics::FiniteCategoryTable, rep: &str) -> Result<usize, String> {
    t.elements().iter().position(|e| e.rep.to_string() == rep).ok_or_else(|| format!("no morphism {rep}"))
}

fn composite_table() -> Outcome {
    let ws = common::corpus();
    let pq = compose_curried(ws.curried("Pc").unwrap(), ws.curried("Qc").unwrap()).map_err(err)?;
    let t = profunctor_table(ProfunctorSource::Curried(&pq), Budget::default()).map_err(err)?;
    ensure(t.len() == 3 && t.stabilized(), || format!("{t}"))?;
    let (x, y, yt) = (class(&t, "x*q")?, class(&t, "y*q")?, class(&t, "y*q.t")?);
    let expected = [(x, x), (y, yt), (yt, yt)];
    for sym in ["f", "g"] {
        let u = hom(t.left(), sym)?;
        for (a, b) in expected {
            ensure(t.left_action(u, a) == Some(b), || format!("{sym} acts wrongly on class {a}\n{t}"))?;
        }
    }
    let h = hom(t.right(), "t")?;
    for (a, b) in expected {
        ensure(t.right_action(a, h) == Some(b), || format!("t acts wrongly on class {a}\n{t}"))?;
    }
    Ok("3 classes x*q, y*q, y*q.t; f, g and t act as listed; stabilized".into())
}

fn comparison_iso() -> Outcome {
    let ws = common::corpus();
    let budget = Budget::default().with_length(4);
    let r = check_mu_iso(ws.curried("Pc").unwrap(), ws.curried("Qc").unwrap(), budget).map_err(err)?;
    ensure(r.is_iso(), || format!("Pc, Qc: {r}"))?;
    let ps = curried_corpus()?;
    for p in &ps {
        let l = check_mu_iso(&unit_presentation(p.left()), p, budget).map_err(err)?;
        ensure(l.is_iso(), || format!("U, {}: {l}", p.name()))?;
        let r = check_mu_iso(p, &unit_presentation(p.right()), budget).map_err(err)?;
        ensure(r.is_iso(), || format!("{}, U: {r}", p.name()))?;
    }
    let t = common::random_mu_checks(0x5eed, 200);
    ensure(t.failures.is_empty(), || t.failures.join("\n---\n"))?;
    ensure(t.exhaustive >= 200, || format!("{t:?}"))?;
    Ok(format!("Pc*Qc and units on {} presentations iso; {} random finite pairs exhaustive iso, 0 failures", ps.len(), t.exhaustive))
}

fn growth() -> Outcome {
    let ws = common::corpus();
    let (p, q) = (ws.uncurried("Pu").unwrap(), ws.uncurried("Qu").unwrap());
    let (mut coend, mut fiber) = (Vec::new(), Vec::new());
    for k in 1..=6 {
        let b = Budget::default().with_length(k);
        let tq = uncurried_table(q, b).map_err(err)?;
        let t = coend_compose(&uncurried_table(p, b).map_err(err)?, &tq).map_err(err)?;
        ensure(t.len() == common::free_coend_classes(k), || {
            format!("depth {k}: {} classes, oracle {}", t.len(), common::free_coend_classes(k))
        })?;
        ensure(tq.len() == k + 1, || format!("depth {k}: Qu has {} classes, expected {}", tq.len(), k + 1))?;
        coend.push(t.len());
        fiber.push(tq.len());
    }
    let increasing = |v: &[usize]| v.windows(2).all(|w| w[0] < w[1]);
    ensure(increasing(&coend) && increasing(&fiber), || format!("{coend:?} {fiber:?}"))?;
    Ok(format!("coend classes {coend:?}, Qu(d,e) classes {fiber:?}, strictly increasing, equal to enumeration"))
}

fn round_trips() -> Outcome {
    let budget = Budget::default();
    let ps = curried_corpus()?;
    for p in &ps {
        let rt = round_trip(p, budget).map_err(err)?;
        ensure(rt.is_iso(), || format!("{}: {} / {}", p.name(), rt.forward_report, rt.backward_report))?;
        let u = uncurry(p);
        let ng = check_nongenerative(&u, budget, true).map_err(err)?;
        ensure(ng.status == CheckStatus::Holds, || format!("{}: {:?}", p.name(), ng.status))?;
        let c = check_conservative(&u, budget).map_err(err)?;
        ensure(c.holds(), || format!("{}: {:?} {:?}", p.name(), c.status, c.witnesses))?;
    }
    Ok(format!("{} presentations: iso round trip, strictly nongenerative, no conservativity counterexample", ps.len()))
}

fn counterexample() -> Outcome {
    let ws = common::corpus();
    let budget = Budget::default();
    let (p, q) = (ws.uncurried("Papp").unwrap(), ws.uncurried("Qapp").unwrap());
    for u in [p, q] {
        let s = check_nongenerative(u, budget, false).map_err(err)?.status;
        ensure(s == CheckStatus::Holds, || format!("{} nongenerative: {s:?}", u.name()))?;
    }
    let c = check_conservative(q, budget).map_err(err)?;
    ensure(c.status == CheckStatus::FailsWithWitness, || format!("{:?}", c.status))?;
    let (a, b) = common::conservativity_witness(3).ok_or("oracle found no witness")?;
    let first = c.witnesses.first().ok_or("no witness")?;
    let Witness::Pair(wa, wb) = first else { return Err(format!("witness {first} is not a pair")) };
    ensure((wa.to_string(), wb.to_string()) == (a.clone(), b.clone()), || format!("witness {first}, oracle ({a}, {b})"))?;
    match curry(q, budget) {
        Err(BridgeError::CurryValidationFailed { .. }) => {}
        other => return Err(format!("curry: {:?}", other.map(|p| p.name().clone()))),
    }
    for k in 1..=5 {
        let b = budget.with_length(k);
        let t = coend_compose(&uncurried_table(p, b).map_err(err)?, &uncurried_table(q, b).map_err(err)?).map_err(err)?;
        let idx: Vec<usize> = t.elements().iter().map(|e| common::shift_class_index(&e.rep.to_string())).collect();
        let set: BTreeSet<usize> = idx.iter().copied().collect();
        ensure(set.len() == idx.len() && set == (0..=2 * k).collect(), || format!("depth {k}: classes {idx:?}"))?;
        let (ha, hb) = (hom(t.right(), "a")?, hom(t.right(), "b")?);
        let mut shifted = 0;
        for (x, &n) in idx.iter().enumerate() {
            if let Some(y) = t.right_action(x, ha) {
                ensure(idx[y] == n + 1, || format!("depth {k}: pq_{n} . a = pq_{}", idx[y]))?;
                shifted += 1;
            }
            ensure(t.right_action(x, hb) == Some(x), || format!("depth {k}: b moves pq_{n}"))?;
        }
        ensure(shifted >= 2 * k, || format!("depth {k}: a defined on only {shifted} classes"))?;
    }
    Ok(format!("both nongenerative; witness {first} matches oracle; curry fails validation; pq_0..pq_2k with a-shift, b-fix at depths 1-5"))
}

fn coherence() -> Outcome {
    let ps = curried_corpus()?;
    let refs: Vec<&CurriedPresentation> = ps.iter().collect();
    let laws = coherence_suite(&refs, Budget::default()).map_err(err)?;
    let failed: Vec<&str> = laws.iter().filter(|l| !l.holds()).map(|l| l.law.as_str()).collect();
    ensure(failed.is_empty(), || format!("failed: {failed:?}"))?;
    let count = |prefix: &str| laws.iter().filter(|l| l.law.starts_with(prefix)).count();
    ensure(count("pentagon") > 0 && count("triangle") > 0 && count("valid alpha") > 0, || {
        "suite lacks pentagon, triangle or associator".into()
    })?;
    let ws = common::corpus();
    let mut cats = 0;
    for c in ws.entities().filter_map(|e| if let Entity::Category(c) = e { Some(c) } else { None }) {
        let r = check_unit_hom(c, Budget::default().with_length(3)).map_err(err)?;
        ensure(r.is_iso(), || format!("unit {}: {r}", c.name()))?;
        cats += 1;
    }
    Ok(format!(
        "{} checks hold ({} pentagons, {} triangles); unit iso on {cats} categories",
        laws.len(),
        count("pentagon"),
        count("triangle")
    ))
}

fn prover_hygiene() -> Outcome {
    let budget = Budget::default();
    let mut compared = 0;
    for th in common::corpus_theories() {
        let auto = Prover::with_strategy(th.clone(), budget, Strategy::Auto);
        let closure = Prover::with_strategy(th.clone(), budget, Strategy::ClosureOnly);
        for (a, b) in common::pairs(&th, 6) {
            let (x, y) = (auto.prove_words(&a, &b).map_err(err)?, closure.prove_words(&a, &b).map_err(err)?);
            ensure(!(y.is_proved() && x.is_refuted()), || format!("{}: {} = {}", th.name(), th.render(&a), th.render(&b)))?;
            compared += 1;
        }
    }
    let ladder = [
        Budget { max_path_length: 2, max_closure_rounds: 2, max_kb_steps: 10 },
        Budget { max_path_length: 4, max_closure_rounds: 4, max_kb_steps: 50 },
        Budget::default(),
    ];
    let mut rungs = 0;
    for th in common::corpus_theories() {
        let ps = common::pairs(&th, 4);
        let mut prev: Option<Vec<Verdict>> = None;
        for b in ladder {
            let prover = Prover::with_strategy(th.clone(), b, Strategy::Auto);
            let now: Vec<Verdict> =
                ps.iter().map(|(x, y)| prover.prove_words(x, y).map(|o| o.verdict)).collect::<Result<_, _>>().map_err(err)?;
            if let Some(prev) = &prev {
                for (p, n) in prev.iter().zip(&now) {
                    let lost = match p {
                        Verdict::Proved { .. } | Verdict::Decided { equal: true } => {
                            !matches!(n, Verdict::Proved { .. } | Verdict::Decided { equal: true })
                        }
                        Verdict::Decided { equal: false } => n != p,
                        Verdict::NotProvedWithinBudget => false,
                    };
                    ensure(!lost, || format!("{}: {p:?} became {n:?} at {b:?}", th.name()))?;
                    rungs += 1;
                }
            }
            prev = Some(now);
        }
    }
    Ok(format!("{compared} pairs, no contradiction; {rungs} ladder steps monotone"))
}

fn dsl_round_trip() -> Outcome {
    let ws = common::corpus();
    let again = parse_workspace(&ws.render()).map_err(err)?;
    ensure(again == ws, || "parse(render(corpus)) differs".into())?;
    let other = common::corpus();
    for e in ws.entities() {
        ensure(export_json(e) == export_json(other.get(e.name().as_str()).unwrap()), || format!("{} export differs", e.name()))?;
    }
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_profpres"))
            .args(["check", concat!(env!("CARGO_MANIFEST_DIR"), "/corpus/corpus.prof"), "--format", "json"])
            .output()
            .map(|o| o.stdout)
    };
    ensure(run().map_err(err)? == run().map_err(err)?, || "CLI JSON differs between runs".into())?;
    Ok(format!("{} entities round trip; JSON byte-identical across parses and processes", ws.len()))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);
    let criteria: [Criterion; 11] = [
        ("morphism validity", morphism_validity, Some(Duration::from_secs(1))),
        ("semantics is not faithful", not_faithful, None),
        ("curried composition", composite, None),
        ("composite table", composite_table, None),
        ("comparison map iso", comparison_iso, None),
        ("coend growth", growth, None),
        ("curry round trip", round_trips, None),
        ("conservativity counterexample", counterexample, None),
        ("coherence laws", coherence, None),
        ("prover hygiene", prover_hygiene, None),
        ("dsl round trip", dsl_round_trip, None),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut result = check();
        let elapsed = start.elapsed();
        if let (Ok(_), Some(limit)) = (&result, limit) {
            if elapsed > *limit {
                result = Err(format!("took {elapsed:?}, limit {limit:?}"));
            }
        }
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{} ms]", i + 1, elapsed.as_millis()),
            Err(e) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {e} [{} ms]", i + 1, elapsed.as_millis());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
