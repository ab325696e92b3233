use std::sync::Arc;

use indexmap::IndexMap;

use crate::syntax::{CatMorphism, CatPresentation, Name, Path};

use super::instance::{InstanceMorphism, InstancePresentation, Term};
use super::PresentationError;

/// Name given to the instance at sort `c` of a curried presentation `p`.
pub fn at_name(p: &Name, c: &Name) -> Name {
    Name::new(format!("{p}@{c}"))
}

/// A right-category instance for each left sort, and for each left symbol
/// `f : c -> c'` a map from generators of `P(c')` to terms of `P(c)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurriedPresentation {
    name: Name,
    left: Arc<CatPresentation>,
    right: Arc<CatPresentation>,
    at: IndexMap<Name, Arc<InstancePresentation>>,
    act: IndexMap<Name, IndexMap<Name, Term>>,
}

impl CurriedPresentation {
    /// Checks that every instance lives over `right` and every action image is well typed.
    pub fn new(
        name: impl Into<Name>,
        left: Arc<CatPresentation>,
        right: Arc<CatPresentation>,
        at: IndexMap<Name, Arc<InstancePresentation>>,
        act: IndexMap<Name, IndexMap<Name, Term>>,
    ) -> Result<Self, PresentationError> {
        let name = name.into();
        let mut at_sorted = IndexMap::new();
        for c in left.sorts() {
            let inst = at.get(c).ok_or_else(|| PresentationError::MissingImage(c.clone()))?;
            if **inst.base() != *right {
                return Err(PresentationError::BaseMismatch(format!("{} is not over {}", inst.name(), right.name())));
            }
            inst.check()?;
            at_sorted.insert(c.clone(), inst.clone());
        }
        if let Some(extra) = at.keys().find(|k| !left.has_sort(k.as_str())) {
            return Err(PresentationError::Syntax(crate::syntax::SyntaxError::UnknownSort(extra.clone())));
        }
        let mut act_sorted = IndexMap::new();
        for f in left.funs() {
            let (src, tgt) = (&at_sorted[&f.src], &at_sorted[&f.tgt]);
            let empty = IndexMap::new();
            let given = act.get(&f.name).unwrap_or(&empty);
            let mut images = IndexMap::new();
            for g in tgt.gens() {
                let img = given
                    .get(&g.name)
                    .ok_or_else(|| PresentationError::MissingAction { symbol: f.name.clone(), generator: g.name.clone() })?;
                src.check_term(img)?;
                if img.sort() != &g.sort {
                    return Err(PresentationError::TypeMismatch(format!(
                        "action of {} sends {} to {img}, which is not over {}",
                        f.name, g.name, g.sort
                    )));
                }
                images.insert(g.name.clone(), img.clone());
            }
            if let Some(extra) = given.keys().find(|k| tgt.gen(k.as_str()).is_none()) {
                return Err(PresentationError::UnknownGenerator(extra.clone()));
            }
            act_sorted.insert(f.name.clone(), images);
        }
        if let Some(extra) = act.keys().find(|k| left.fun(k.as_str()).is_none()) {
            return Err(PresentationError::Syntax(crate::syntax::SyntaxError::UnknownSymbol(extra.clone())));
        }
        Ok(CurriedPresentation { name, left, right, at: at_sorted, act: act_sorted })
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

    pub fn at(&self, c: &str) -> &Arc<InstancePresentation> {
        &self.at[c]
    }

    pub fn instances(&self) -> &IndexMap<Name, Arc<InstancePresentation>> {
        &self.at
    }

    pub fn actions(&self) -> &IndexMap<Name, IndexMap<Name, Term>> {
        &self.act
    }

    pub fn act_image(&self, f: &str, gen: &str) -> Option<&Term> {
        self.act.get(f)?.get(gen)
    }

    /// `P(f)` as a morphism `P(c') -> P(c)` for `f : c -> c'`.
    pub fn action(&self, f: &str) -> Result<InstanceMorphism, PresentationError> {
        let sym = self.left.fun(f).ok_or_else(|| PresentationError::Syntax(crate::syntax::SyntaxError::UnknownSymbol(Name::new(f))))?;
        InstanceMorphism::globular(format!("{}({f})", self.name), self.at[&sym.tgt].clone(), self.at[&sym.src].clone(), self.act[f].clone())
    }

    /// `P(f)(x.g) = P(f)(x).g`.
    pub fn act_term(&self, f: &str, t: &Term) -> Result<Term, PresentationError> {
        let img = self.act_image(f, t.gen().as_str()).ok_or_else(|| PresentationError::UnknownGenerator(t.gen().clone()))?;
        img.then(t.path())
    }

    /// `P(p)` for a left path `p : c -> c'`, applied to a term of `P(c')`;
    /// the last symbol acts first.
    pub fn act_path(&self, p: &Path, t: &Term) -> Result<Term, PresentationError> {
        let mut cur = t.clone();
        for f in p.syms().iter().rev() {
            cur = self.act_term(f.as_str(), &cur)?;
        }
        Ok(cur)
    }

    pub fn with_name(mut self, name: impl Into<Name>) -> Self {
        self.name = name.into();
        self
    }
}

/// Components `F_c : P(c) -> P'(F0 c)` over `F1`, as generator images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurriedMorphism {
    name: Name,
    source: Arc<CurriedPresentation>,
    target: Arc<CurriedPresentation>,
    left_map: CatMorphism,
    right_map: CatMorphism,
    components: IndexMap<Name, IndexMap<Name, Term>>,
}

impl CurriedMorphism {
    pub fn new(
        name: impl Into<Name>,
        source: Arc<CurriedPresentation>,
        target: Arc<CurriedPresentation>,
        left_map: CatMorphism,
        right_map: CatMorphism,
        components: IndexMap<Name, IndexMap<Name, Term>>,
    ) -> Result<Self, PresentationError> {
        let frame_ok = **left_map.source() == **source.left()
            && **left_map.target() == **target.left()
            && **right_map.source() == **source.right()
            && **right_map.target() == **target.right();
        if !frame_ok {
            return Err(PresentationError::FrameMismatch(format!("{} -> {}", source.name(), target.name())));
        }
        let mut sorted = IndexMap::new();
        for (c, inst) in source.instances() {
            let tc = left_map.apply_sort(c).expect("total");
            let tinst = target.at(tc.as_str());
            let empty = IndexMap::new();
            let given = components.get(c).unwrap_or(&empty);
            let mut images = IndexMap::new();
            for g in inst.gens() {
                let img = given.get(&g.name).ok_or_else(|| PresentationError::MissingImage(g.name.clone()))?;
                tinst.check_term(img)?;
                if img.sort() != right_map.apply_sort(&g.sort).expect("total") {
                    return Err(PresentationError::TypeMismatch(format!("component at {c} sends {} to {img}", g.name)));
                }
                images.insert(g.name.clone(), img.clone());
            }
            if let Some(extra) = given.keys().find(|k| inst.gen(k.as_str()).is_none()) {
                return Err(PresentationError::UnknownGenerator(extra.clone()));
            }
            sorted.insert(c.clone(), images);
        }
        Ok(CurriedMorphism { name: name.into(), source, target, left_map, right_map, components: sorted })
    }

    /// Same left and right categories, identity frame.
    pub fn globular(
        name: impl Into<Name>,
        source: Arc<CurriedPresentation>,
        target: Arc<CurriedPresentation>,
        components: IndexMap<Name, IndexMap<Name, Term>>,
    ) -> Result<Self, PresentationError> {
        let l = CatMorphism::identity(source.left().clone());
        let r = CatMorphism::identity(source.right().clone());
        CurriedMorphism::new(name, source, target, l, r, components)
    }

    pub fn identity(p: Arc<CurriedPresentation>) -> Self {
        let components = p
            .instances()
            .iter()
            .map(|(c, inst)| {
                let m = inst.gens().iter().map(|g| (g.name.clone(), Term::generator(g.name.clone(), g.sort.clone()))).collect();
                (c.clone(), m)
            })
            .collect();
        CurriedMorphism {
            name: Name::new(format!("id_{}", p.name())),
            left_map: CatMorphism::identity(p.left().clone()),
            right_map: CatMorphism::identity(p.right().clone()),
            source: p.clone(),
            target: p,
            components,
        }
    }

    pub fn name(&self) -> &Name {
        &self.name
    }

    pub fn source(&self) -> &Arc<CurriedPresentation> {
        &self.source
    }

    pub fn target(&self) -> &Arc<CurriedPresentation> {
        &self.target
    }

    pub fn left_map(&self) -> &CatMorphism {
        &self.left_map
    }

    pub fn right_map(&self) -> &CatMorphism {
        &self.right_map
    }

    pub fn components(&self) -> &IndexMap<Name, IndexMap<Name, Term>> {
        &self.components
    }

    pub fn is_globular(&self) -> bool {
        self.left_map.is_identity_like()
            && self.right_map.is_identity_like()
            && self.source.left() == self.target.left()
            && self.source.right() == self.target.right()
    }

    pub fn component(&self, c: &str) -> Result<InstanceMorphism, PresentationError> {
        let tc = self.left_map.apply_sort(&Name::new(c)).ok_or_else(|| PresentationError::UnknownGenerator(Name::new(c)))?;
        InstanceMorphism::new(
            format!("{}_{c}", self.name),
            self.source.at(c).clone(),
            self.target.at(tc.as_str()).clone(),
            self.right_map.clone(),
            self.components[c].clone(),
        )
    }

    /// `F_c(x.g) = F_c(x).F1(g)`.
    pub fn apply(&self, c: &str, t: &Term) -> Result<Term, PresentationError> {
        let img = self.components[c].get(t.gen()).ok_or_else(|| PresentationError::UnknownGenerator(t.gen().clone()))?;
        img.then(&self.right_map.apply(t.path())?)
    }

    /// Vertical composite: `self` first.
    pub fn then(&self, next: &CurriedMorphism) -> Result<CurriedMorphism, PresentationError> {
        if *self.target != *next.source {
            return Err(PresentationError::NotComposable(format!("{} then {}", self.name, next.name)));
        }
        let mut components = IndexMap::new();
        for (c, imgs) in &self.components {
            let tc = self.left_map.apply_sort(c).expect("total");
            let mut out = IndexMap::new();
            for (g, t) in imgs {
                out.insert(g.clone(), next.apply(tc.as_str(), t)?);
            }
            components.insert(c.clone(), out);
        }
        Ok(CurriedMorphism {
            name: Name::new(format!("{};{}", self.name, next.name)),
            source: self.source.clone(),
            target: next.target.clone(),
            left_map: self.left_map.then(&next.left_map)?,
            right_map: self.right_map.then(&next.right_map)?,
            components,
        })
    }

    pub fn with_name(mut self, name: impl Into<Name>) -> Self {
        self.name = name.into();
        self
    }
}
