use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;

use crate::prover::{Origin, Theory, Word};
use crate::syntax::{compose_paths, CatMorphism, CatPresentation, Name, Path};

use super::uncurried::{collage_theory, CrossEquation, CrossPath, ProSym, UncurriedPresentation};
use super::PresentationError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: Name,
    pub sort: Name,
}

/// `x.g`: a generator followed by a path of the base category.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    gen: Name,
    path: Path,
}

impl Term {
    pub fn new(gen: impl Into<Name>, path: Path) -> Self {
        Term { gen: gen.into(), path }
    }

    pub fn generator(gen: impl Into<Name>, sort: impl Into<Name>) -> Self {
        Term { gen: gen.into(), path: Path::identity(sort) }
    }

    pub fn gen(&self) -> &Name {
        &self.gen
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// The sort this term lives over.
    pub fn sort(&self) -> &Name {
        self.path.tgt()
    }

    pub fn then(&self, g: &Path) -> Result<Term, PresentationError> {
        Ok(Term { gen: self.gen.clone(), path: compose_paths(&self.path, g)? })
    }

    pub fn with_gen(&self, gen: Name) -> Term {
        Term { gen, path: self.path.clone() }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.gen)?;
        for s in self.path.syms() {
            write!(f, ".{s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}: {}", self.sort())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TermEquation {
    pub lhs: Term,
    pub rhs: Term,
}

impl fmt::Display for TermEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// `<generators | equations>` over a base category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstancePresentation {
    name: Name,
    base: Arc<CatPresentation>,
    gens: Vec<Generator>,
    eqs: Vec<TermEquation>,
}

impl InstancePresentation {
    pub fn new(name: impl Into<Name>, base: Arc<CatPresentation>) -> Self {
        InstancePresentation { name: name.into(), base, gens: Vec::new(), eqs: Vec::new() }
    }

    pub fn with_gen(mut self, name: impl Into<Name>, sort: impl Into<Name>) -> Self {
        self.gens.push(Generator { name: name.into(), sort: sort.into() });
        self
    }

    pub fn with_eq(mut self, lhs: Term, rhs: Term) -> Self {
        self.eqs.push(TermEquation { lhs, rhs });
        self
    }

    /// Adds `lhs = rhs` written as terms; panics when they do not parse.
    pub fn with_eq_str(self, lhs: &str, rhs: &str) -> Self {
        let l = self.term(lhs).expect("well-typed lhs");
        let r = self.term(rhs).expect("well-typed rhs");
        self.with_eq(l, r)
    }

    pub fn name(&self) -> &Name {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<Name>) -> Self {
        self.name = name.into();
        self
    }

    pub fn base(&self) -> &Arc<CatPresentation> {
        &self.base
    }

    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }

    pub fn eqs(&self) -> &[TermEquation] {
        &self.eqs
    }

    pub fn gen(&self, name: &str) -> Option<&Generator> {
        self.gens.iter().find(|g| g.name.as_str() == name)
    }

    /// Parses `x` or `x.f.g`.
    pub fn term(&self, text: &str) -> Result<Term, PresentationError> {
        let mut parts = text.trim().split('.').map(str::trim);
        let head = parts.next().unwrap_or("");
        let g = self.gen(head).ok_or_else(|| PresentationError::UnknownGenerator(Name::new(head)))?;
        let syms: Vec<Name> = parts.map(Name::new).collect();
        let path = crate::syntax::typecheck_path(&self.base, &syms, Some(&g.sort))?;
        Ok(Term { gen: g.name.clone(), path })
    }

    pub fn check_term(&self, t: &Term) -> Result<(), PresentationError> {
        let g = self.gen(t.gen.as_str()).ok_or_else(|| PresentationError::UnknownGenerator(t.gen.clone()))?;
        if t.path.src() != &g.sort {
            return Err(PresentationError::TypeMismatch(format!("term {t} does not start at sort {}", g.sort)));
        }
        self.base.check_path(&t.path)?;
        Ok(())
    }

    /// Structural problems: unknown sorts, ill-typed or non-parallel equations.
    pub fn check(&self) -> Result<(), PresentationError> {
        for (i, g) in self.gens.iter().enumerate() {
            if !self.base.has_sort(g.sort.as_str()) {
                return Err(PresentationError::Syntax(crate::syntax::SyntaxError::UnknownSort(g.sort.clone())));
            }
            if self.gens[..i].iter().any(|h| h.name == g.name) {
                return Err(PresentationError::Duplicate(g.name.clone()));
            }
        }
        for eq in &self.eqs {
            self.check_term(&eq.lhs)?;
            self.check_term(&eq.rhs)?;
            if eq.lhs.sort() != eq.rhs.sort() {
                return Err(PresentationError::TypeMismatch(format!("equation {eq} relates terms over different sorts")));
            }
        }
        Ok(())
    }

    /// The same data as an uncurried presentation out of the terminal category.
    pub fn to_uncurried(&self) -> UncurriedPresentation {
        let one = Arc::new(CatPresentation::terminal());
        let star = one.sorts()[0].clone();
        let pros = self.gens.iter().map(|g| ProSym { name: g.name.clone(), src: star.clone(), tgt: g.sort.clone() }).collect();
        let eqs = self.eqs.iter().map(|e| CrossEquation { lhs: self.cross_of(&e.lhs, &star), rhs: self.cross_of(&e.rhs, &star) }).collect();
        UncurriedPresentation::from_parts(self.name.clone(), one, self.base.clone(), pros, eqs)
    }

    fn cross_of(&self, t: &Term, star: &Name) -> CrossPath {
        CrossPath::new(Path::identity(star.clone()), t.gen.clone(), t.path.clone())
    }

    /// The collage of `1` and the base: generators become symbols out of `*`.
    pub fn theory(&self) -> Result<Theory, PresentationError> {
        self.check()?;
        let u = self.to_uncurried();
        collage_theory(&u)
    }

    pub fn term_word(&self, th: &Theory, t: &Term) -> Result<Word, PresentationError> {
        let g = th.fun_id(Origin::Pro, t.gen.as_str()).ok_or_else(|| PresentationError::UnknownGenerator(t.gen.clone()))?;
        let tail = th.word(Origin::Right, &t.path)?;
        if th.funs()[g as usize].tgt != tail.src {
            return Err(PresentationError::TypeMismatch(format!("term {t}")));
        }
        let mut syms = vec![g];
        syms.extend(tail.syms);
        Ok(Word { src: th.funs()[g as usize].src, tgt: tail.tgt, syms })
    }

    /// Inverse of [`InstancePresentation::term_word`] for words out of `*`.
    pub fn word_term(&self, th: &Theory, w: &Word) -> Term {
        let g = &th.funs()[w.syms[0] as usize];
        let rest = Word { src: g.tgt, tgt: w.tgt, syms: w.syms[1..].to_vec() };
        Term { gen: g.local.clone(), path: th.local_path(&rest) }
    }
}

/// Generators to terms, over a morphism of base categories.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceMorphism {
    name: Name,
    source: Arc<InstancePresentation>,
    target: Arc<InstancePresentation>,
    base_map: CatMorphism,
    images: IndexMap<Name, Term>,
}

impl InstanceMorphism {
    pub fn new(
        name: impl Into<Name>,
        source: Arc<InstancePresentation>,
        target: Arc<InstancePresentation>,
        base_map: CatMorphism,
        images: IndexMap<Name, Term>,
    ) -> Result<Self, PresentationError> {
        if **base_map.source() != **source.base() || **base_map.target() != **target.base() {
            return Err(PresentationError::BaseMismatch(format!(
                "{} does not go from {} to {}",
                base_map.name(),
                source.base().name(),
                target.base().name()
            )));
        }
        let mut ordered = IndexMap::new();
        for g in source.gens() {
            let img = images.get(&g.name).ok_or_else(|| PresentationError::MissingImage(g.name.clone()))?;
            target.check_term(img)?;
            let want = base_map.apply_sort(&g.sort).expect("total sort map");
            if img.sort() != want {
                return Err(PresentationError::TypeMismatch(format!("image {img} of {} should live over {want}", g.name)));
            }
            ordered.insert(g.name.clone(), img.clone());
        }
        if let Some(extra) = images.keys().find(|k| source.gen(k.as_str()).is_none()) {
            return Err(PresentationError::UnknownGenerator(extra.clone()));
        }
        Ok(InstanceMorphism { name: name.into(), source, target, base_map, images: ordered })
    }

    /// Globular morphism over the identity of the shared base.
    pub fn globular(
        name: impl Into<Name>,
        source: Arc<InstancePresentation>,
        target: Arc<InstancePresentation>,
        images: IndexMap<Name, Term>,
    ) -> Result<Self, PresentationError> {
        let id = CatMorphism::identity(source.base().clone());
        InstanceMorphism::new(name, source, target, id, images)
    }

    pub fn identity(inst: Arc<InstancePresentation>) -> Self {
        let images = inst.gens().iter().map(|g| (g.name.clone(), Term::generator(g.name.clone(), g.sort.clone()))).collect();
        let base_map = CatMorphism::identity(inst.base().clone());
        InstanceMorphism { name: Name::new(format!("id_{}", inst.name())), source: inst.clone(), target: inst, base_map, images }
    }

    pub fn name(&self) -> &Name {
        &self.name
    }

    pub fn source(&self) -> &Arc<InstancePresentation> {
        &self.source
    }

    pub fn target(&self) -> &Arc<InstancePresentation> {
        &self.target
    }

    pub fn base_map(&self) -> &CatMorphism {
        &self.base_map
    }

    pub fn images(&self) -> &IndexMap<Name, Term> {
        &self.images
    }

    pub fn image(&self, gen: &str) -> Option<&Term> {
        self.images.get(gen)
    }

    /// `F(x.g) = F(x).F1(g)`.
    pub fn apply(&self, t: &Term) -> Result<Term, PresentationError> {
        let img = self.images.get(t.gen()).ok_or_else(|| PresentationError::UnknownGenerator(t.gen().clone()))?;
        img.then(&self.base_map.apply(t.path())?)
    }

    /// Diagrammatic composite: `self` first.
    pub fn then(&self, next: &InstanceMorphism) -> Result<InstanceMorphism, PresentationError> {
        if *self.target != *next.source {
            return Err(PresentationError::NotComposable(format!("{} then {}", self.name, next.name)));
        }
        let mut images = IndexMap::new();
        for (g, t) in &self.images {
            images.insert(g.clone(), next.apply(t)?);
        }
        Ok(InstanceMorphism {
            name: Name::new(format!("{};{}", self.name, next.name)),
            source: self.source.clone(),
            target: next.target.clone(),
            base_map: self.base_map.then(&next.base_map)?,
            images,
        })
    }

    pub fn with_name(mut self, name: impl Into<Name>) -> Self {
        self.name = name.into();
        self
    }
}
