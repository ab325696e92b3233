use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;

use crate::prover::{Origin, Theory, TheoryBuilder, Word};
use crate::syntax::{compose_paths, typecheck_path, CatPresentation, Equation, Name, Path};

use super::instance::{InstancePresentation, Term};
use super::PresentationError;

/// A profunctor symbol `p : c -> d` from a left sort to a right sort.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProSym {
    pub name: Name,
    pub src: Name,
    pub tgt: Name,
}

/// `u.p.v`: a left path, one profunctor symbol, a right path.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CrossPath {
    pre: Path,
    pro: Name,
    post: Path,
}

impl CrossPath {
    pub fn new(pre: Path, pro: impl Into<Name>, post: Path) -> Self {
        CrossPath { pre, pro: pro.into(), post }
    }

    pub fn pre(&self) -> &Path {
        &self.pre
    }

    pub fn pro(&self) -> &Name {
        &self.pro
    }

    pub fn post(&self) -> &Path {
        &self.post
    }

    pub fn src(&self) -> &Name {
        self.pre.src()
    }

    pub fn tgt(&self) -> &Name {
        self.post.tgt()
    }

    /// No left symbols: `p.g`.
    pub fn is_right(&self) -> bool {
        self.pre.is_identity()
    }

    /// Exactly `f.p` with a single left symbol and nothing after.
    pub fn is_short_left(&self) -> bool {
        self.pre.len() == 1 && self.post.is_identity()
    }

    /// Length counting every symbol, the profunctor symbol included.
    pub fn len(&self) -> usize {
        self.pre.len() + 1 + self.post.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn then_right(&self, g: &Path) -> Result<CrossPath, PresentationError> {
        Ok(CrossPath { pre: self.pre.clone(), pro: self.pro.clone(), post: compose_paths(&self.post, g)? })
    }

    pub fn after_left(&self, f: &Path) -> Result<CrossPath, PresentationError> {
        Ok(CrossPath { pre: compose_paths(f, &self.pre)?, pro: self.pro.clone(), post: self.post.clone() })
    }
}

impl fmt::Display for CrossPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.pre.syms() {
            write!(f, "{s}.")?;
        }
        write!(f, "{}", self.pro)?;
        for s in self.post.syms() {
            write!(f, ".{s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CrossPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}: {} -> {}", self.src(), self.tgt())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CrossEquation {
    pub lhs: CrossPath,
    pub rhs: CrossPath,
}

impl fmt::Display for CrossEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// Profunctor symbols and equations between cross-paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UncurriedPresentation {
    name: Name,
    left: Arc<CatPresentation>,
    right: Arc<CatPresentation>,
    pros: Vec<ProSym>,
    eqs: Vec<CrossEquation>,
}

impl UncurriedPresentation {
    pub fn new(name: impl Into<Name>, left: Arc<CatPresentation>, right: Arc<CatPresentation>) -> Self {
        UncurriedPresentation { name: name.into(), left, right, pros: Vec::new(), eqs: Vec::new() }
    }

    pub(crate) fn from_parts(
        name: Name,
        left: Arc<CatPresentation>,
        right: Arc<CatPresentation>,
        pros: Vec<ProSym>,
        eqs: Vec<CrossEquation>,
    ) -> Self {
        UncurriedPresentation { name, left, right, pros, eqs }
    }

    pub fn with_pro(mut self, name: impl Into<Name>, src: impl Into<Name>, tgt: impl Into<Name>) -> Self {
        self.pros.push(ProSym { name: name.into(), src: src.into(), tgt: tgt.into() });
        self
    }

    pub fn with_eq(mut self, lhs: CrossPath, rhs: CrossPath) -> Self {
        self.eqs.push(CrossEquation { lhs, rhs });
        self
    }

    /// Adds an equation written as cross-paths; panics when they do not parse.
    pub fn with_eq_str(self, lhs: &str, rhs: &str) -> Self {
        let l = self.cross(lhs).expect("well-typed lhs");
        let r = self.cross(rhs).expect("well-typed rhs");
        self.with_eq(l, r)
    }

    pub fn name(&self) -> &Name {
        &self.name
    }

    pub fn left(&self) -> &Arc<CatPresentation> {
        &self.left
    }

    pub fn right(&self) -> &Arc<CatPresentation> {
        &self.right
    }

    pub fn pros(&self) -> &[ProSym] {
        &self.pros
    }

    pub fn eqs(&self) -> &[CrossEquation] {
        &self.eqs
    }

    pub fn pro(&self, name: &str) -> Option<&ProSym> {
        self.pros.iter().find(|p| p.name.as_str() == name)
    }

    /// Parses `f.p.g`; the profunctor symbol splits left from right.
    pub fn cross(&self, text: &str) -> Result<CrossPath, PresentationError> {
        let parts: Vec<&str> = text.trim().split('.').map(str::trim).collect();
        let hits: Vec<usize> = parts.iter().enumerate().filter(|(_, s)| self.pro(s).is_some()).map(|(i, _)| i).collect();
        let [k] = hits.as_slice() else {
            return Err(PresentationError::NotACrossPath(text.to_string()));
        };
        let p = self.pro(parts[*k]).expect("hit");
        let pre: Vec<Name> = parts[..*k].iter().map(Name::new).collect();
        let post: Vec<Name> = parts[k + 1..].iter().map(Name::new).collect();
        let pre = if pre.is_empty() { Path::identity(p.src.clone()) } else { typecheck_path(&self.left, &pre, None)? };
        let post = typecheck_path(&self.right, &post, Some(&p.tgt))?;
        let cp = CrossPath::new(pre, p.name.clone(), post);
        self.check_cross(&cp)?;
        Ok(cp)
    }

    pub fn check_cross(&self, cp: &CrossPath) -> Result<(), PresentationError> {
        let p = self.pro(cp.pro.as_str()).ok_or_else(|| PresentationError::UnknownGenerator(cp.pro.clone()))?;
        self.left.check_path(&cp.pre)?;
        self.right.check_path(&cp.post)?;
        if cp.pre.tgt() != &p.src || cp.post.src() != &p.tgt {
            return Err(PresentationError::TypeMismatch(format!("cross-path {cp}")));
        }
        Ok(())
    }

    pub fn check(&self) -> Result<(), PresentationError> {
        for (i, p) in self.pros.iter().enumerate() {
            if !self.left.has_sort(p.src.as_str()) || !self.right.has_sort(p.tgt.as_str()) {
                return Err(PresentationError::TypeMismatch(format!("profunctor symbol {} : {} -> {}", p.name, p.src, p.tgt)));
            }
            if self.pros[..i].iter().any(|q| q.name == p.name) {
                return Err(PresentationError::Duplicate(p.name.clone()));
            }
            if self.left.fun(p.name.as_str()).is_some() || self.right.fun(p.name.as_str()).is_some() {
                return Err(PresentationError::Duplicate(p.name.clone()));
            }
        }
        for eq in &self.eqs {
            self.check_cross(&eq.lhs)?;
            self.check_cross(&eq.rhs)?;
            if eq.lhs.src() != eq.rhs.src() || eq.lhs.tgt() != eq.rhs.tgt() {
                return Err(PresentationError::TypeMismatch(format!("equation {eq} is not parallel")));
            }
        }
        Ok(())
    }

    /// Compiles the collage; see [`build_collage`].
    pub fn theory(&self) -> Result<Theory, PresentationError> {
        self.check()?;
        collage_theory(self)
    }

    pub fn cross_word(&self, th: &Theory, cp: &CrossPath) -> Result<Word, PresentationError> {
        let pre = th.word(Origin::Left, cp.pre())?;
        let post = th.word(Origin::Right, cp.post())?;
        let p = th.fun_id(Origin::Pro, cp.pro().as_str()).ok_or_else(|| PresentationError::UnknownGenerator(cp.pro().clone()))?;
        let info = &th.funs()[p as usize];
        if info.src != pre.tgt || info.tgt != post.src {
            return Err(PresentationError::TypeMismatch(format!("cross-path {cp}")));
        }
        let mut syms = pre.syms;
        syms.push(p);
        syms.extend(post.syms);
        Ok(Word { src: pre.src, tgt: post.tgt, syms })
    }

    /// Splits a collage word at its profunctor symbol; `None` for left- or right-only words.
    pub fn word_cross(&self, th: &Theory, w: &Word) -> Option<CrossPath> {
        let k = w.syms.iter().position(|&f| th.funs()[f as usize].origin == Origin::Pro)?;
        let info = &th.funs()[w.syms[k] as usize];
        let pre = Word { src: w.src, tgt: info.src, syms: w.syms[..k].to_vec() };
        let post = Word { src: info.tgt, tgt: w.tgt, syms: w.syms[k + 1..].to_vec() };
        Some(CrossPath::new(th.local_path(&pre), info.local.clone(), th.local_path(&post)))
    }
}

/// Theory of the collage: sorts `C + D`, symbols `C + P + D`, equations
/// `C_E + P_E + D_E`, symbols ranked in that order. Left symbols outweigh
/// the right part of every profunctor equation; completion falls back to
/// that weighted order, which pushes them through profunctor symbols, when
/// shortlex diverges.
pub(crate) fn collage_theory(p: &UncurriedPresentation) -> Result<Theory, PresentationError> {
    let mut b = TheoryBuilder::new(format!("|{}|", p.name()));
    let left_eqs = p.left().eqs().len();
    let (ls, lf) = b.category(p.left(), Origin::Left)?;
    let heavy = 1 + p.eqs().iter().flat_map(|e| [e.lhs.post().len(), e.rhs.post().len()]).max().unwrap_or(0) as u32;
    for f in lf {
        b.weigh(f, heavy);
    }
    let sort_l = |n: &Name| p.left().sorts().iter().position(|s| s == n).map(|i| ls[i]);
    // Profunctor symbols must be added before the right category so that
    // ranks follow declaration order; sorts of D are needed first.
    let tag_r = p.right().name().clone();
    let rs: Vec<u32> = p.right().sorts().iter().map(|s| b.sort(s, Origin::Right, &tag_r)).collect();
    let sort_r = |n: &Name| p.right().sorts().iter().position(|s| s == n).map(|i| rs[i]);
    let tag_p = p.name().clone();
    let mut pro_ids = Vec::new();
    for q in p.pros() {
        let s = sort_l(&q.src).ok_or_else(|| PresentationError::TypeMismatch(format!("{} source", q.name)))?;
        let t = sort_r(&q.tgt).ok_or_else(|| PresentationError::TypeMismatch(format!("{} target", q.name)))?;
        pro_ids.push(b.fun(&q.name, s, t, Origin::Pro, &tag_p));
    }
    b.rank_next(pro_ids);
    let mut rf = Vec::new();
    for f in p.right().funs() {
        let (s, t) = (sort_r(&f.src).expect("checked"), sort_r(&f.tgt).expect("checked"));
        rf.push(b.fun(&f.name, s, t, Origin::Right, &tag_r));
    }
    for o in p.right().term_order() {
        b.rank_next([rf[p.right().fun_index(o.as_str()).expect("ordered symbol")]]);
    }
    let mut th = b.build();
    let mut eqs: Vec<(Word, Word)> = th.eqs().to_vec();
    debug_assert_eq!(eqs.len(), left_eqs);
    for eq in p.eqs() {
        eqs.push((p.cross_word(&th, &eq.lhs)?, p.cross_word(&th, &eq.rhs)?));
    }
    for eq in p.right().eqs() {
        eqs.push((th.word(Origin::Right, &eq.lhs)?, th.word(Origin::Right, &eq.rhs)?));
    }
    th.set_eqs(eqs);
    Ok(th)
}

/// The collage as a plain category presentation, with colliding names
/// disambiguated by origin.
pub fn build_collage(p: &UncurriedPresentation) -> Result<CatPresentation, PresentationError> {
    let th = p.theory()?;
    let mut c = CatPresentation::new(th.name().clone());
    for s in th.sorts() {
        c = c.with_sort(s.name.clone());
    }
    for f in th.funs() {
        c = c.with_fun(f.name.clone(), th.sorts()[f.src as usize].name.clone(), th.sorts()[f.tgt as usize].name.clone());
    }
    for (l, r) in th.eqs() {
        c = c.with_eq(Equation::new(th.path(l), th.path(r)));
    }
    let mut order: Vec<(u32, Name)> = th.funs().iter().enumerate().map(|(i, f)| (th.rank(i as u32), f.name.clone())).collect();
    order.sort();
    let order: Vec<Name> = order.into_iter().map(|(_, n)| n).collect();
    let decl: Vec<Name> = th.funs().iter().map(|f| f.name.clone()).collect();
    if order != decl {
        c = c.with_order(order);
    }
    Ok(c)
}

/// Globular morphism: each profunctor symbol to a cross-path of the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UncurriedMorphism {
    name: Name,
    source: Arc<UncurriedPresentation>,
    target: Arc<UncurriedPresentation>,
    images: IndexMap<Name, CrossPath>,
}

impl UncurriedMorphism {
    pub fn new(
        name: impl Into<Name>,
        source: Arc<UncurriedPresentation>,
        target: Arc<UncurriedPresentation>,
        images: IndexMap<Name, CrossPath>,
    ) -> Result<Self, PresentationError> {
        if source.left() != target.left() || source.right() != target.right() {
            return Err(PresentationError::BaseMismatch(format!("{} and {} have different bases", source.name(), target.name())));
        }
        let mut ordered = IndexMap::new();
        for p in source.pros() {
            let img = images.get(&p.name).ok_or_else(|| PresentationError::MissingImage(p.name.clone()))?;
            target.check_cross(img)?;
            if img.src() != &p.src || img.tgt() != &p.tgt {
                return Err(PresentationError::TypeMismatch(format!("image {img} of {}", p.name)));
            }
            ordered.insert(p.name.clone(), img.clone());
        }
        if let Some(extra) = images.keys().find(|k| source.pro(k.as_str()).is_none()) {
            return Err(PresentationError::UnknownGenerator(extra.clone()));
        }
        Ok(UncurriedMorphism { name: name.into(), source, target, images: ordered })
    }

    pub fn name(&self) -> &Name {
        &self.name
    }

    pub fn source(&self) -> &Arc<UncurriedPresentation> {
        &self.source
    }

    pub fn target(&self) -> &Arc<UncurriedPresentation> {
        &self.target
    }

    pub fn images(&self) -> &IndexMap<Name, CrossPath> {
        &self.images
    }

    /// `F(u.p.v) = u.F(p).v`.
    pub fn apply(&self, cp: &CrossPath) -> Result<CrossPath, PresentationError> {
        let img = self.images.get(cp.pro()).ok_or_else(|| PresentationError::UnknownGenerator(cp.pro().clone()))?;
        img.after_left(cp.pre())?.then_right(cp.post())
    }
}

/// The instance of right cross-paths out of the left sort `c`: one generator
/// per profunctor symbol from `c`, and the equations whose sides are both
/// right cross-paths from `c`.
pub fn fiber_instance(p: &UncurriedPresentation, c: &str) -> Result<InstancePresentation, PresentationError> {
    if !p.left().has_sort(c) {
        return Err(PresentationError::Syntax(crate::syntax::SyntaxError::UnknownSort(Name::new(c))));
    }
    let mut inst = InstancePresentation::new(super::at_name(p.name(), &Name::new(c)), p.right().clone());
    for q in p.pros().iter().filter(|q| q.src.as_str() == c) {
        inst = inst.with_gen(q.name.clone(), q.tgt.clone());
    }
    for eq in p.eqs() {
        if eq.lhs.src().as_str() == c && eq.lhs.is_right() && eq.rhs.is_right() {
            inst = inst
                .with_eq(Term::new(eq.lhs.pro().clone(), eq.lhs.post().clone()), Term::new(eq.rhs.pro().clone(), eq.rhs.post().clone()));
        }
    }
    Ok(inst)
}
