mod common;

use profpres::bridge::curry;
use profpres::compose::unit_presentation;
use profpres::presentations::CurriedPresentation;
use profpres::prover::Budget;
use profpres::semantics::{check_mu_iso, IsoStatus};

/// Curried corpus entries plus the curried forms of the curryable uncurried ones.
fn corpus_curried() -> Vec<CurriedPresentation> {
    let ws = common::corpus();
    let mut out: Vec<_> = ["Pc", "Qc", "Rc"].iter().map(|n| (**ws.curried(n).unwrap()).clone()).collect();
    for n in ["Pu", "Papp"] {
        out.push(curry(ws.uncurried(n).unwrap(), Budget::default()).unwrap());
    }
    out
}

#[test]
fn units_on_either_side_of_every_corpus_presentation() {
    let budget = Budget::default().with_length(4);
    for p in corpus_curried() {
        let left = check_mu_iso(&unit_presentation(p.left()), &p, budget).unwrap();
        assert!(left.is_iso(), "U * {}: {left}", p.name());
        let right = check_mu_iso(&p, &unit_presentation(p.right()), budget).unwrap();
        assert!(right.is_iso(), "{} * U: {right}", p.name());
    }
}

#[test]
fn composable_corpus_pairs() {
    let ps = corpus_curried();
    let mut seen = 0;
    for p in &ps {
        for q in ps.iter().filter(|q| q.left() == p.right()) {
            let r = check_mu_iso(p, q, Budget::default().with_length(4)).unwrap();
            assert!(!matches!(r.status, IsoStatus::NotIso { .. }), "{} * {}: {r}", p.name(), q.name());
            if (p.name().as_str(), q.name().as_str()) == ("Pc", "Qc") {
                assert!(r.is_iso(), "{r}");
            }
            seen += 1;
        }
    }
    assert!(seen >= 3, "only {seen} composable pairs");
}

#[test]
fn comparison_map_is_an_iso_on_random_finite_pairs() {
    let t = common::random_mu_checks(0x5eed, 200);
    assert!(t.failures.is_empty(), "{}", t.failures.join("\n---\n"));
    assert!(t.exhaustive >= 200, "{t:?}");
    assert!(t.classes >= 5 * t.exhaustive, "random pairs are too small: {t:?}");
}
