//! Hand-built presentations shared by unit tests.

use std::sync::Arc;

use indexmap::IndexMap;

use crate::presentations::{CurriedPresentation, InstancePresentation, Term};
use crate::syntax::{CatPresentation, Name};

pub fn m() -> Arc<CatPresentation> {
    Arc::new(CatPresentation::new("M").with_sort("*").with_fun("f", "*", "*").with_fun("g", "*", "*").with_eq_str("f.g", "g.f"))
}

pub fn n() -> Arc<CatPresentation> {
    Arc::new(CatPresentation::new("N").with_sort("*").with_fun("s", "*", "*"))
}

pub fn o() -> Arc<CatPresentation> {
    Arc::new(CatPresentation::new("O").with_sort("*").with_fun("t", "*", "*"))
}

pub fn images(inst: &InstancePresentation, pairs: &[(&str, &str)]) -> IndexMap<Name, Term> {
    pairs.iter().map(|(g, t)| (Name::new(*g), inst.term(t).unwrap())).collect()
}

/// One-sort curried presentation from explicit generator data.
pub fn curried(
    name: &str,
    left: Arc<CatPresentation>,
    right: Arc<CatPresentation>,
    gens: &[&str],
    eqs: &[(&str, &str)],
    act: &[(&str, &[(&str, &str)])],
) -> CurriedPresentation {
    let mut inst = InstancePresentation::new(format!("{name}@*"), right.clone());
    for g in gens {
        inst = inst.with_gen(*g, "*");
    }
    for (l, r) in eqs {
        inst = inst.with_eq_str(l, r);
    }
    let inst = Arc::new(inst);
    let act = act.iter().map(|(f, pairs)| (Name::new(*f), images(&inst, pairs))).collect();
    CurriedPresentation::new(name, left, right, IndexMap::from([(Name::new("*"), inst)]), act).unwrap()
}

pub fn pc() -> CurriedPresentation {
    curried("Pc", m(), n(), &["x", "y"], &[("x.s", "x")], &[("f", &[("x", "x"), ("y", "y.s")]), ("g", &[("x", "x"), ("y", "y.s.s")])])
}

pub fn qc() -> CurriedPresentation {
    curried("Qc", n(), o(), &["q"], &[("q.t.t", "q.t")], &[("s", &[("q", "q.t")])])
}
