use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::presentations::{CrossPath, CrossProver, CurriedPresentation, InstancePresentation, Term, TermProver, UncurriedPresentation};
use crate::prover::{Budget, Canon, Origin, Prover, Theory, Word};
use crate::syntax::{CatPresentation, FunSym, Name, Path};

use super::{Rep, SemanticsError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatElement {
    pub src: usize,
    pub tgt: usize,
    pub rep: Path,
}

/// Hom classes of a presented category up to the table depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCategoryTable {
    name: Name,
    objects: Vec<Name>,
    elements: Vec<CatElement>,
    identities: Vec<usize>,
    compose: BTreeMap<(usize, usize), usize>,
    depth: usize,
    stabilized: bool,
}

impl FiniteCategoryTable {
    pub fn name(&self) -> &Name {
        &self.name
    }

    pub fn objects(&self) -> &[Name] {
        &self.objects
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o.as_str() == name)
    }

    pub fn elements(&self) -> &[CatElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn identity(&self, object: usize) -> usize {
        self.identities[object]
    }

    pub fn hom(&self, c: usize, d: usize) -> Vec<usize> {
        (0..self.elements.len()).filter(|&i| self.elements[i].src == c && self.elements[i].tgt == d).collect()
    }

    /// `a` then `b`, when the composite class lies inside the table.
    pub fn compose(&self, a: usize, b: usize) -> Option<usize> {
        self.compose.get(&(a, b)).copied()
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn stabilized(&self) -> bool {
        self.stabilized
    }

    /// Same objects and the same representatives in the same order.
    pub fn same_shape(&self, other: &FiniteCategoryTable) -> bool {
        self.objects == other.objects && self.elements == other.elements
    }

    /// Unit and associativity failures among defined composites.
    pub fn law_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.elements.len();
        for a in 0..n {
            let e = &self.elements[a];
            if self.compose(self.identities[e.src], a).is_some_and(|x| x != a)
                || self.compose(a, self.identities[e.tgt]).is_some_and(|x| x != a)
            {
                out.push(format!("identity law fails at {}", e.rep));
            }
        }
        for (&(a, b), &ab) in &self.compose {
            for c in (0..n).filter(|&c| self.elements[c].src == self.elements[b].tgt) {
                let (Some(bc), Some(l)) = (self.compose(b, c), self.compose(ab, c)) else { continue };
                if let Some(r) = self.compose(a, bc) {
                    if l != r {
                        let (x, y, z) = (&self.elements[a].rep, &self.elements[b].rep, &self.elements[c].rep);
                        out.push(format!("associativity fails at ({x}, {y}, {z})"));
                    }
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": "category_table",
            "name": self.name.as_str(),
            "depth": self.depth,
            "stabilized": self.stabilized,
            "objects": self.objects.iter().map(|o| o.as_str()).collect::<Vec<_>>(),
            "elements": self.elements.iter().map(|e| json!({
                "src": self.objects[e.src].as_str(),
                "tgt": self.objects[e.tgt].as_str(),
                "rep": e.rep.to_string(),
            })).collect::<Vec<_>>(),
            "compose": self.compose.iter().map(|(&(a, b), &c)| json!([a, b, c])).collect::<Vec<_>>(),
        })
    }
}

fn status(depth: usize, stabilized: bool) -> String {
    if stabilized {
        format!("depth {depth}, stabilized")
    } else {
        format!("depth {depth}, not stabilized")
    }
}

impl fmt::Display for FiniteCategoryTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "table {} ({}, {} classes)", self.name, status(self.depth, self.stabilized), self.elements.len())?;
        for (i, e) in self.elements.iter().enumerate() {
            writeln!(f, "  [{i}] {} : {} -> {}", e.rep, self.objects[e.src], self.objects[e.tgt])?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossElement {
    pub src: usize,
    pub tgt: usize,
    pub rep: Rep,
}

/// Elements of a profunctor `C^op × D -> Set` up to the table depth, with
/// both actions by hom classes of the base tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfunctorTable {
    name: Name,
    left: Arc<FiniteCategoryTable>,
    right: Arc<FiniteCategoryTable>,
    elements: Vec<CrossElement>,
    left_act: BTreeMap<(usize, usize), usize>,
    right_act: BTreeMap<(usize, usize), usize>,
    depth: usize,
    stabilized: bool,
}

impl ProfunctorTable {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_parts(
        name: Name,
        left: Arc<FiniteCategoryTable>,
        right: Arc<FiniteCategoryTable>,
        elements: Vec<CrossElement>,
        left_act: BTreeMap<(usize, usize), usize>,
        right_act: BTreeMap<(usize, usize), usize>,
        depth: usize,
        stabilized: bool,
    ) -> Self {
        ProfunctorTable { name, left, right, elements, left_act, right_act, depth, stabilized }
    }

    pub fn name(&self) -> &Name {
        &self.name
    }

    pub fn left(&self) -> &Arc<FiniteCategoryTable> {
        &self.left
    }

    pub fn right(&self) -> &Arc<FiniteCategoryTable> {
        &self.right
    }

    pub fn elements(&self) -> &[CrossElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Elements over `(c, d)`, by object names.
    pub fn component(&self, c: &str, d: &str) -> Vec<usize> {
        let (Some(c), Some(d)) = (self.left.object_index(c), self.right.object_index(d)) else { return Vec::new() };
        (0..self.elements.len()).filter(|&i| self.elements[i].src == c && self.elements[i].tgt == d).collect()
    }

    /// `u · x` for a left class `u : c' -> c` and `x` over `(c, d)`.
    pub fn left_action(&self, u: usize, x: usize) -> Option<usize> {
        self.left_act.get(&(u, x)).copied()
    }

    /// `x · h` for `x` over `(c, d)` and a right class `h : d -> d'`.
    pub fn right_action(&self, x: usize, h: usize) -> Option<usize> {
        self.right_act.get(&(x, h)).copied()
    }

    pub fn left_actions(&self) -> &BTreeMap<(usize, usize), usize> {
        &self.left_act
    }

    pub fn right_actions(&self) -> &BTreeMap<(usize, usize), usize> {
        &self.right_act
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn stabilized(&self) -> bool {
        self.stabilized
    }

    pub fn find(&self, rep: &str) -> Option<usize> {
        self.elements.iter().position(|e| e.rep.to_string() == rep)
    }

    pub fn with_name(mut self, name: impl Into<Name>) -> Self {
        self.name = name.into();
        self
    }

    /// Same table with representatives rewritten by `f`.
    pub fn map_reps(mut self, f: impl Fn(&Rep) -> Rep) -> Self {
        for e in &mut self.elements {
            e.rep = f(&e.rep);
        }
        self
    }

    /// Action laws among defined entries: identities act trivially, both
    /// actions respect composition and commute with each other.
    pub fn law_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let (l, r) = (&self.left, &self.right);
        for (x, e) in self.elements.iter().enumerate() {
            if self.left_action(l.identity(e.src), x).is_some_and(|y| y != x) {
                out.push(format!("left identity moves {}", e.rep));
            }
            if self.right_action(x, r.identity(e.tgt)).is_some_and(|y| y != x) {
                out.push(format!("right identity moves {}", e.rep));
            }
        }
        for (&(u, x), &ux) in &self.left_act {
            for v in (0..l.len()).filter(|&v| l.elements()[v].tgt == l.elements()[u].src) {
                let (Some(lhs), Some(vu)) = (self.left_action(v, ux), l.compose(v, u)) else { continue };
                if self.left_action(vu, x).is_some_and(|rhs| rhs != lhs) {
                    out.push(format!(
                        "left action not functorial at ({}, {}, {})",
                        l.elements()[v].rep,
                        l.elements()[u].rep,
                        self.elements[x].rep
                    ));
                }
            }
            for h in (0..r.len()).filter(|&h| r.elements()[h].src == self.elements[x].tgt) {
                let (Some(lhs), Some(xh)) = (self.right_action(ux, h), self.right_action(x, h)) else { continue };
                if self.left_action(u, xh).is_some_and(|rhs| rhs != lhs) {
                    out.push(format!(
                        "actions do not commute at ({}, {}, {})",
                        l.elements()[u].rep,
                        self.elements[x].rep,
                        r.elements()[h].rep
                    ));
                }
            }
        }
        for (&(x, h), &xh) in &self.right_act {
            for k in (0..r.len()).filter(|&k| r.elements()[k].src == r.elements()[h].tgt) {
                let (Some(lhs), Some(hk)) = (self.right_action(xh, k), r.compose(h, k)) else { continue };
                if self.right_action(x, hk).is_some_and(|rhs| rhs != lhs) {
                    out.push(format!(
                        "right action not functorial at ({}, {}, {})",
                        self.elements[x].rep,
                        r.elements()[h].rep,
                        r.elements()[k].rep
                    ));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let triples = |m: &BTreeMap<(usize, usize), usize>| m.iter().map(|(&(a, b), &c)| json!([a, b, c])).collect::<Vec<_>>();
        json!({
            "kind": "profunctor_table",
            "name": self.name.as_str(),
            "depth": self.depth,
            "stabilized": self.stabilized,
            "left": self.left.to_json(),
            "right": self.right.to_json(),
            "elements": self.elements.iter().map(|e| json!({
                "src": self.left.objects()[e.src].as_str(),
                "tgt": self.right.objects()[e.tgt].as_str(),
                "rep": e.rep.to_string(),
            })).collect::<Vec<_>>(),
            "left_action": triples(&self.left_act),
            "right_action": triples(&self.right_act),
        })
    }
}

/// Elements, then the actions of single symbols.
impl fmt::Display for ProfunctorTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "table {} ({}, {} classes)", self.name, status(self.depth, self.stabilized), self.elements.len())?;
        for (i, e) in self.elements.iter().enumerate() {
            writeln!(f, "  [{i}] {} : ({}, {})", e.rep, self.left.objects()[e.src], self.right.objects()[e.tgt])?;
        }
        let symbol = |t: &FiniteCategoryTable, u: usize| match &t.elements()[u].rep {
            p if p.len() == 1 => Some(p.to_string()),
            _ => None,
        };
        for (&(u, x), &y) in &self.left_act {
            if let Some(s) = symbol(&self.left, u) {
                writeln!(f, "  {s} . {} = {}", self.elements[x].rep, self.elements[y].rep)?;
            }
        }
        for (&(x, h), &y) in &self.right_act {
            if let Some(s) = symbol(&self.right, h) {
                writeln!(f, "  {} . {s} = {}", self.elements[x].rep, self.elements[y].rep)?;
            }
        }
        Ok(())
    }
}

/// Enumeration needs room for one symbol past the table depth plus the
/// generator symbol of terms and cross-paths.
fn prover_budget(budget: Budget) -> Budget {
    budget.with_length(budget.max_path_length + 2)
}

fn single(f: &FunSym) -> Path {
    Path::new_unchecked(f.src.clone(), f.tgt.clone(), vec![f.name.clone()])
}

/// Symbols out of `sort` in term order.
fn funs_from<'a>(cat: &'a CatPresentation, sort: &Name) -> Vec<&'a FunSym> {
    let order = cat.term_order();
    let mut out: Vec<&FunSym> = cat.funs().iter().filter(|f| &f.src == sort).collect();
    out.sort_by_key(|f| order.iter().position(|n| *n == f.name));
    out
}

/// A category table together with the prover that classifies its paths.
pub(crate) struct CategoryModel {
    pub table: Arc<FiniteCategoryTable>,
    prover: Prover,
    keys: HashMap<Canon, usize>,
    words: Vec<Word>,
}

impl CategoryModel {
    pub fn from_theory(th: Arc<Theory>, budget: Budget) -> Self {
        let depth = budget.max_path_length;
        let prover = Prover::new(th.clone(), prover_budget(budget));
        let mut exact = prover.is_exact();
        let mut keys: HashMap<Canon, usize> = HashMap::new();
        let mut words: Vec<Word> = Vec::new();
        let mut frontier = Vec::new();
        for s in 0..th.sorts().len() as u32 {
            let w = Word::identity(s);
            match prover.canonical(&w) {
                Some(k) if !keys.contains_key(&k) => {
                    keys.insert(k, words.len());
                    frontier.push(words.len());
                    words.push(w);
                }
                Some(_) => {}
                None => exact = false,
            }
        }
        let identities: Vec<usize> = (0..th.sorts().len()).collect();
        let mut stable = false;
        for n in 1..=depth + 1 {
            let mut fresh = Vec::new();
            for &i in &frontier {
                for &f in th.out_funs(words[i].tgt) {
                    let mut syms = words[i].syms.clone();
                    syms.push(f);
                    let w = th.typed(syms, words[i].src);
                    match prover.canonical(&w) {
                        Some(k) if !keys.contains_key(&k) => {
                            if n <= depth {
                                keys.insert(k, words.len());
                                words.push(w);
                            }
                            fresh.push(words.len() - 1);
                        }
                        Some(_) => {}
                        None => exact = false,
                    }
                }
            }
            if fresh.is_empty() {
                stable = true;
                break;
            }
            frontier = fresh;
        }
        let elements: Vec<CatElement> =
            words.iter().map(|w| CatElement { src: w.src as usize, tgt: w.tgt as usize, rep: th.path(w) }).collect();
        let mut compose = BTreeMap::new();
        for (a, wa) in words.iter().enumerate() {
            for (b, wb) in words.iter().enumerate() {
                if let Some(w) = th.concat(wa, wb) {
                    if let Some(c) = prover.canonical(&w).and_then(|k| keys.get(&k).copied()) {
                        compose.insert((a, b), c);
                    }
                }
            }
        }
        let table = FiniteCategoryTable {
            name: th.name().clone(),
            objects: th.sorts().iter().map(|s| s.name.clone()).collect(),
            elements,
            identities,
            compose,
            depth,
            stabilized: exact && stable,
        };
        CategoryModel { table: Arc::new(table), prover, keys, words }
    }

    pub fn from_category(cat: &CatPresentation, budget: Budget) -> Result<Self, SemanticsError> {
        Ok(CategoryModel::from_theory(Arc::new(Theory::from_category(cat)?), budget))
    }

    pub fn classify_word(&self, w: &Word) -> Option<usize> {
        self.keys.get(&self.prover.canonical(w)?).copied()
    }

    pub fn classify_path(&self, p: &Path) -> Option<usize> {
        self.classify_word(&self.prover.theory().word(Origin::Plain, p).ok()?)
    }

    #[allow(dead_code)]
    pub fn word(&self, i: usize) -> &Word {
        &self.words[i]
    }
}

/// Enumerates `P ≅ ⟦P⟧` at the depth of `budget`: classes of terms
/// `x.g` with `|g| <= depth` at each left sort.
pub(crate) struct CurriedModel {
    pub table: ProfunctorTable,
    provers: Vec<TermProver>,
    keys: Vec<HashMap<Canon, usize>>,
    exact: bool,
}

impl CurriedModel {
    pub fn build(p: &CurriedPresentation, budget: Budget) -> Result<Self, SemanticsError> {
        let left = CategoryModel::from_category(p.left(), budget)?;
        let right = CategoryModel::from_category(p.right(), budget)?;
        let depth = budget.max_path_length;
        let mut exact = true;
        let mut stable_all = true;
        let mut elements = Vec::new();
        let mut provers = Vec::new();
        let mut keys = Vec::new();
        for (ci, c) in p.left().sorts().iter().enumerate() {
            let prover = TermProver::new(p.at(c.as_str()).clone(), prover_budget(budget))?;
            exact &= prover.prover().is_exact();
            let mut k: HashMap<Canon, usize> = HashMap::new();
            let mut frontier: Vec<Term> = p.at(c.as_str()).gens().iter().map(|g| Term::generator(g.name.clone(), g.sort.clone())).collect();
            let mut candidates = std::mem::take(&mut frontier);
            let mut stable = false;
            for n in 0..=depth + 1 {
                let mut fresh = Vec::new();
                for t in candidates {
                    match prover.canonical(&t)? {
                        Some(key) if !k.contains_key(&key) => {
                            if n <= depth {
                                k.insert(key, elements.len());
                                let tgt = right.table.object_index(t.sort().as_str()).expect("right sort");
                                elements.push(CrossElement { src: ci, tgt, rep: Rep::Term(t.clone()) });
                            }
                            fresh.push(t);
                        }
                        Some(_) => {}
                        None => exact = false,
                    }
                }
                if fresh.is_empty() {
                    stable = true;
                    break;
                }
                candidates = Vec::new();
                for t in &fresh {
                    for f in funs_from(p.right(), t.sort()) {
                        candidates.push(t.then(&single(f))?);
                    }
                }
            }
            stable_all &= stable;
            provers.push(prover);
            keys.push(k);
        }
        let mut model = CurriedModel {
            table: ProfunctorTable {
                name: p.name().clone(),
                left: left.table.clone(),
                right: right.table.clone(),
                elements,
                left_act: BTreeMap::new(),
                right_act: BTreeMap::new(),
                depth,
                stabilized: exact && stable_all,
            },
            provers,
            keys,
            exact,
        };
        let mut left_act = BTreeMap::new();
        let mut right_act = BTreeMap::new();
        for (x, e) in model.table.elements.iter().enumerate() {
            let Rep::Term(t) = &e.rep else { unreachable!() };
            for (h, he) in right.table.elements().iter().enumerate().filter(|(_, he)| he.src == e.tgt) {
                if let Some(y) = model.classify(e.src, &t.then(&he.rep)?)? {
                    right_act.insert((x, h), y);
                }
            }
            for (u, ue) in left.table.elements().iter().enumerate().filter(|(_, ue)| ue.tgt == e.src) {
                if let Some(y) = model.classify(ue.src, &p.act_path(&ue.rep, t)?)? {
                    left_act.insert((u, x), y);
                }
            }
        }
        model.table.left_act = left_act;
        model.table.right_act = right_act;
        Ok(model)
    }

    /// Table index of the class of `t` in the instance at left sort `ci`.
    pub fn classify(&self, ci: usize, t: &Term) -> Result<Option<usize>, SemanticsError> {
        Ok(self.provers[ci].canonical(t)?.and_then(|k| self.keys[ci].get(&k).copied()))
    }

    /// Every instance prover decides equality exactly.
    pub fn is_exact(&self) -> bool {
        self.exact
    }
}

/// Cross-path classes of the collage, `u.p.h` with `|u| + |h| <= depth`.
pub(crate) struct UncurriedModel {
    pub table: ProfunctorTable,
}

impl UncurriedModel {
    pub fn build(q: &UncurriedPresentation, budget: Budget) -> Result<Self, SemanticsError> {
        q.check()?;
        let left = CategoryModel::from_category(q.left(), budget)?;
        let right = CategoryModel::from_category(q.right(), budget)?;
        let depth = budget.max_path_length;
        let prover = CrossProver::new(Arc::new(q.clone()), prover_budget(budget))?;
        let th = prover.prover().theory().clone();
        let mut exact = prover.prover().is_exact();
        let mut stable = false;
        let mut keys: HashMap<Canon, usize> = HashMap::new();
        let mut elements = Vec::new();
        let mut candidates: Vec<CrossPath> = q
            .pros()
            .iter()
            .map(|pro| CrossPath::new(Path::identity(pro.src.clone()), pro.name.clone(), Path::identity(pro.tgt.clone())))
            .collect();
        for n in 0..=depth + 1 {
            let mut keyed = Vec::new();
            for cp in candidates {
                let w = prover.word(&cp)?;
                keyed.push((w, cp));
            }
            keyed.sort_by(|a, b| th.cmp_shortlex(&a.0.syms, &b.0.syms));
            let mut fresh = Vec::new();
            for (w, cp) in keyed {
                match prover.prover().canonical(&w) {
                    Some(key) if !keys.contains_key(&key) => {
                        if n <= depth {
                            keys.insert(key, elements.len());
                            let src = left.table.object_index(cp.src().as_str()).expect("left sort");
                            let tgt = right.table.object_index(cp.tgt().as_str()).expect("right sort");
                            elements.push(CrossElement { src, tgt, rep: Rep::Cross(cp.clone()) });
                        }
                        fresh.push(cp);
                    }
                    Some(_) => {}
                    None => exact = false,
                }
            }
            if fresh.is_empty() {
                stable = true;
                break;
            }
            candidates = Vec::new();
            for r in &fresh {
                for f in q.left().funs().iter().filter(|f| &f.tgt == r.src()) {
                    candidates.push(r.after_left(&single(f))?);
                }
                for g in funs_from(q.right(), r.tgt()) {
                    candidates.push(r.then_right(&single(g))?);
                }
            }
        }
        let classify =
            |cp: &CrossPath| -> Result<Option<usize>, SemanticsError> { Ok(prover.canonical(cp)?.and_then(|k| keys.get(&k).copied())) };
        let mut left_act = BTreeMap::new();
        let mut right_act = BTreeMap::new();
        for (x, e) in elements.iter().enumerate() {
            let Rep::Cross(cp) = &e.rep else { unreachable!() };
            for (h, he) in right.table.elements().iter().enumerate().filter(|(_, he)| he.src == e.tgt) {
                if let Some(y) = classify(&cp.then_right(&he.rep)?)? {
                    right_act.insert((x, h), y);
                }
            }
            for (u, ue) in left.table.elements().iter().enumerate().filter(|(_, ue)| ue.tgt == e.src) {
                if let Some(y) = classify(&cp.after_left(&ue.rep)?)? {
                    left_act.insert((u, x), y);
                }
            }
        }
        let table = ProfunctorTable {
            name: q.name().clone(),
            stabilized: exact && stable,
            left: left.table,
            right: right.table,
            elements,
            left_act,
            right_act,
            depth,
        };
        Ok(UncurriedModel { table })
    }
}

/// `⟦C⟧` enumerated breadth-first up to `budget.max_path_length`.
pub fn saturate_theory(th: &Theory, budget: Budget) -> FiniteCategoryTable {
    Arc::unwrap_or_clone(CategoryModel::from_theory(Arc::new(th.clone()), budget).table)
}

pub fn category_table(cat: &CatPresentation, budget: Budget) -> Result<FiniteCategoryTable, SemanticsError> {
    Ok(saturate_theory(&Theory::from_category(cat)?, budget))
}

pub fn curried_table(p: &CurriedPresentation, budget: Budget) -> Result<ProfunctorTable, SemanticsError> {
    Ok(CurriedModel::build(p, budget)?.table)
}

pub fn uncurried_table(q: &UncurriedPresentation, budget: Budget) -> Result<ProfunctorTable, SemanticsError> {
    Ok(UncurriedModel::build(q, budget)?.table)
}

/// An instance as a profunctor out of the terminal category.
pub fn instance_table(inst: &InstancePresentation, budget: Budget) -> Result<ProfunctorTable, SemanticsError> {
    uncurried_table(&inst.to_uncurried(), budget)
}

#[derive(Clone, Copy, Debug)]
pub enum ProfunctorSource<'a> {
    Uncurried(&'a UncurriedPresentation),
    Curried(&'a CurriedPresentation),
    Instance(&'a InstancePresentation),
}

pub fn profunctor_table(src: ProfunctorSource<'_>, budget: Budget) -> Result<ProfunctorTable, SemanticsError> {
    match src {
        ProfunctorSource::Uncurried(q) => uncurried_table(q, budget),
        ProfunctorSource::Curried(p) => curried_table(p, budget),
        ProfunctorSource::Instance(i) => instance_table(i, budget),
    }
}
