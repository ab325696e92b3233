//! Category presentations, typed paths and morphisms of presentations.

use std::borrow::Borrow;
use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

/// Interned identifier for sorts, symbols and generators.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name(Arc<str>);

impl Name {
    pub fn new(s: impl AsRef<str>) -> Self {
        Name(Arc::from(s.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl Borrow<str> for Name {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name::new(s)
    }
}

impl From<String> for Name {
    fn from(s: String) -> Self {
        Name(Arc::from(s))
    }
}

impl From<&Name> for Name {
    fn from(n: &Name) -> Self {
        n.clone()
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl Serialize for Name {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SyntaxError {
    #[error("unknown function symbol `{0}`")]
    UnknownSymbol(Name),
    #[error("unknown sort `{0}`")]
    UnknownSort(Name),
    #[error("composition mismatch at position {position}: expected a symbol out of `{expected}`, `{symbol}` starts at `{found}`")]
    CompositionMismatch { position: usize, symbol: Name, expected: Name, found: Name },
    #[error("cannot compose: `{left}` ends at `{left_tgt}` but `{right}` starts at `{right_src}`")]
    EndpointMismatch { left: String, left_tgt: Name, right: String, right_src: Name },
    #[error("path `{0}` does not belong to the source presentation")]
    ForeignPath(String),
    #[error("an empty path needs an explicit sort")]
    EmptyPathNeedsSort,
    #[error("no image given for `{0}`")]
    MissingImage(Name),
    #[error("image of `{symbol}` is `{image}`: expected a path {expected_src} -> {expected_tgt}")]
    IllTypedImage { symbol: Name, image: String, expected_src: Name, expected_tgt: Name },
}

/// A function symbol `name : src -> tgt`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FunSym {
    pub name: Name,
    pub src: Name,
    pub tgt: Name,
}

/// A path `f0.f1...` in diagrammatic order, or the identity on `src` when empty.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    src: Name,
    tgt: Name,
    syms: Vec<Name>,
}

impl Path {
    pub fn identity(sort: impl Into<Name>) -> Self {
        let s = sort.into();
        Path { src: s.clone(), tgt: s, syms: Vec::new() }
    }

    /// Builds a path without consulting a presentation; endpoints are taken on trust.
    pub fn new_unchecked(src: impl Into<Name>, tgt: impl Into<Name>, syms: Vec<Name>) -> Self {
        Path { src: src.into(), tgt: tgt.into(), syms }
    }

    pub fn src(&self) -> &Name {
        &self.src
    }

    pub fn tgt(&self) -> &Name {
        &self.tgt
    }

    pub fn syms(&self) -> &[Name] {
        &self.syms
    }

    pub fn len(&self) -> usize {
        self.syms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syms.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.syms.is_empty()
    }

    /// Diagrammatic composite `self.other`.
    pub fn then(&self, other: &Path) -> Result<Path, SyntaxError> {
        compose_paths(self, other)
    }

    /// Path with the symbols rendered by `rename`; endpoints rewritten by `sort`.
    pub fn map_names(&self, sort: impl Fn(&Name) -> Name, sym: impl Fn(&Name) -> Name) -> Path {
        Path { src: sort(&self.src), tgt: sort(&self.tgt), syms: self.syms.iter().map(sym).collect() }
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syms.is_empty() {
            return write!(f, "id({})", self.src);
        }
        for (i, s) in self.syms.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}: {} -> {}", self.src, self.tgt)
    }
}

/// `p.q`; identities are neutral on either side.
pub fn compose_paths(p: &Path, q: &Path) -> Result<Path, SyntaxError> {
    if p.tgt != q.src {
        return Err(SyntaxError::EndpointMismatch {
            left: p.to_string(),
            left_tgt: p.tgt.clone(),
            right: q.to_string(),
            right_src: q.src.clone(),
        });
    }
    let mut syms = p.syms.clone();
    syms.extend(q.syms.iter().cloned());
    Ok(Path { src: p.src.clone(), tgt: q.tgt.clone(), syms })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Equation {
    pub lhs: Path,
    pub rhs: Path,
}

impl Equation {
    pub fn new(lhs: Path, rhs: Path) -> Self {
        Equation { lhs, rhs }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// Problems reported by [`validate_presentation`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "diagnostic")]
pub enum Diagnostic {
    DuplicateSort { sort: Name },
    DuplicateSymbol { symbol: Name },
    UnknownSort { symbol: Name, sort: Name },
    UnknownSymbol { equation: usize, symbol: Name },
    CompositionMismatch { equation: usize, position: usize },
    NonParallelEquation { equation: usize },
    BadTermOrder { reason: String },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::DuplicateSort { sort } => write!(f, "sort `{sort}` declared twice"),
            Diagnostic::DuplicateSymbol { symbol } => write!(f, "symbol `{symbol}` declared twice"),
            Diagnostic::UnknownSort { symbol, sort } => {
                write!(f, "symbol `{symbol}` mentions unknown sort `{sort}`")
            }
            Diagnostic::UnknownSymbol { equation, symbol } => {
                write!(f, "equation {equation} uses unknown symbol `{symbol}`")
            }
            Diagnostic::CompositionMismatch { equation, position } => {
                write!(f, "equation {equation}: symbols do not compose at position {position}")
            }
            Diagnostic::NonParallelEquation { equation } => {
                write!(f, "equation {equation} relates paths with different endpoints")
            }
            Diagnostic::BadTermOrder { reason } => write!(f, "term order: {reason}"),
        }
    }
}

/// A presentation `<sorts, symbols | equations>` of a category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatPresentation {
    name: Name,
    sorts: Vec<Name>,
    funs: Vec<FunSym>,
    eqs: Vec<Equation>,
    order: Option<Vec<Name>>,
}

impl CatPresentation {
    pub fn new(name: impl Into<Name>) -> Self {
        CatPresentation { name: name.into(), sorts: Vec::new(), funs: Vec::new(), eqs: Vec::new(), order: None }
    }

    /// The terminal presentation `1`: one sort `*`, nothing else.
    pub fn terminal() -> Self {
        CatPresentation::new("1").with_sort("*")
    }

    pub fn with_sort(mut self, sort: impl Into<Name>) -> Self {
        self.sorts.push(sort.into());
        self
    }

    pub fn with_fun(mut self, name: impl Into<Name>, src: impl Into<Name>, tgt: impl Into<Name>) -> Self {
        self.funs.push(FunSym { name: name.into(), src: src.into(), tgt: tgt.into() });
        self
    }

    pub fn with_eq(mut self, eq: Equation) -> Self {
        self.eqs.push(eq);
        self
    }

    /// Adds an equation written as `"f.g"`, `"id(*)"`; panics on a malformed path.
    pub fn with_eq_str(self, lhs: &str, rhs: &str) -> Self {
        let l = self.path(lhs).expect("well-typed lhs");
        let r = self.path(rhs).expect("well-typed rhs");
        self.with_eq(Equation::new(l, r))
    }

    /// Overrides the symbol precedence used by completion (first is smallest).
    pub fn with_order(mut self, order: Vec<Name>) -> Self {
        self.order = Some(order);
        self
    }

    pub fn name(&self) -> &Name {
        &self.name
    }

    pub fn sorts(&self) -> &[Name] {
        &self.sorts
    }

    pub fn funs(&self) -> &[FunSym] {
        &self.funs
    }

    pub fn eqs(&self) -> &[Equation] {
        &self.eqs
    }

    pub fn explicit_order(&self) -> Option<&[Name]> {
        self.order.as_deref()
    }

    /// Symbols in completion precedence, smallest first.
    pub fn term_order(&self) -> Vec<Name> {
        match &self.order {
            Some(o) => o.clone(),
            None => self.funs.iter().map(|f| f.name.clone()).collect(),
        }
    }

    pub fn has_sort(&self, s: &str) -> bool {
        self.sorts.iter().any(|x| x.as_str() == s)
    }

    pub fn fun(&self, name: &str) -> Option<&FunSym> {
        self.funs.iter().find(|f| f.name.as_str() == name)
    }

    pub fn fun_index(&self, name: &str) -> Option<usize> {
        self.funs.iter().position(|f| f.name.as_str() == name)
    }

    /// Parses `"f.g.h"` or `"id(c)"` and typechecks it.
    pub fn path(&self, text: &str) -> Result<Path, SyntaxError> {
        let text = text.trim();
        if let Some(inner) = text.strip_prefix("id(").and_then(|t| t.strip_suffix(')')) {
            let s = inner.trim();
            if !self.has_sort(s) {
                return Err(SyntaxError::UnknownSort(Name::new(s)));
            }
            return Ok(Path::identity(s));
        }
        let syms: Vec<Name> = text.split('.').map(|s| Name::new(s.trim())).collect();
        typecheck_path(self, &syms, None)
    }

    /// All paths out of `sort` with at most `max_len` symbols, shortest first,
    /// equal lengths in declaration order of their symbols.
    pub fn paths_from(&self, sort: &Name, max_len: usize) -> Vec<Path> {
        let mut out = vec![Path::identity(sort.clone())];
        let mut frontier = 0;
        for _ in 0..max_len {
            let end = out.len();
            for i in frontier..end {
                let cur = out[i].clone();
                for f in self.funs.iter().filter(|f| f.src == cur.tgt) {
                    let mut syms = cur.syms.clone();
                    syms.push(f.name.clone());
                    out.push(Path { src: sort.clone(), tgt: f.tgt.clone(), syms });
                }
            }
            frontier = end;
        }
        out
    }

    /// Checks that `p` is a well-typed path of this presentation.
    pub fn check_path(&self, p: &Path) -> Result<(), SyntaxError> {
        if p.is_identity() {
            if !self.has_sort(p.src.as_str()) {
                return Err(SyntaxError::UnknownSort(p.src.clone()));
            }
            if p.src != p.tgt {
                return Err(SyntaxError::ForeignPath(format!("{p:?}")));
            }
            return Ok(());
        }
        let typed = typecheck_path(self, &p.syms, Some(&p.src))?;
        if typed.tgt != p.tgt {
            return Err(SyntaxError::ForeignPath(format!("{p:?}")));
        }
        Ok(())
    }
}

/// Resolves each symbol and checks that consecutive symbols compose.
/// An empty sequence needs `start` and yields its identity.
pub fn typecheck_path(cat: &CatPresentation, syms: &[Name], start: Option<&Name>) -> Result<Path, SyntaxError> {
    let Some(first) = syms.first() else {
        let s = start.ok_or(SyntaxError::EmptyPathNeedsSort)?;
        if !cat.has_sort(s.as_str()) {
            return Err(SyntaxError::UnknownSort(s.clone()));
        }
        return Ok(Path::identity(s.clone()));
    };
    let f0 = cat.fun(first.as_str()).ok_or_else(|| SyntaxError::UnknownSymbol(first.clone()))?;
    if let Some(s) = start {
        if *s != f0.src {
            return Err(SyntaxError::CompositionMismatch {
                position: 0,
                symbol: first.clone(),
                expected: s.clone(),
                found: f0.src.clone(),
            });
        }
    }
    let mut cur = f0.tgt.clone();
    for (i, s) in syms.iter().enumerate().skip(1) {
        let f = cat.fun(s.as_str()).ok_or_else(|| SyntaxError::UnknownSymbol(s.clone()))?;
        if f.src != cur {
            return Err(SyntaxError::CompositionMismatch { position: i, symbol: s.clone(), expected: cur, found: f.src.clone() });
        }
        cur = f.tgt.clone();
    }
    Ok(Path { src: f0.src.clone(), tgt: cur, syms: syms.to_vec() })
}

/// Reports every structural problem; an empty result means the presentation is well formed.
pub fn validate_presentation(cat: &CatPresentation) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for (i, s) in cat.sorts.iter().enumerate() {
        if cat.sorts[..i].contains(s) {
            out.push(Diagnostic::DuplicateSort { sort: s.clone() });
        }
    }
    for (i, f) in cat.funs.iter().enumerate() {
        if cat.funs[..i].iter().any(|g| g.name == f.name) {
            out.push(Diagnostic::DuplicateSymbol { symbol: f.name.clone() });
        }
        for s in [&f.src, &f.tgt] {
            if !cat.has_sort(s.as_str()) {
                out.push(Diagnostic::UnknownSort { symbol: f.name.clone(), sort: s.clone() });
            }
        }
    }
    for (i, eq) in cat.eqs.iter().enumerate() {
        let mut sides_ok = true;
        for side in [&eq.lhs, &eq.rhs] {
            match cat.check_path(side) {
                Ok(()) => {}
                Err(SyntaxError::UnknownSymbol(symbol)) => {
                    sides_ok = false;
                    out.push(Diagnostic::UnknownSymbol { equation: i, symbol })
                }
                Err(SyntaxError::CompositionMismatch { position, .. }) => {
                    sides_ok = false;
                    out.push(Diagnostic::CompositionMismatch { equation: i, position })
                }
                Err(_) => {
                    sides_ok = false;
                    out.push(Diagnostic::NonParallelEquation { equation: i })
                }
            }
        }
        if sides_ok && (eq.lhs.src != eq.rhs.src || eq.lhs.tgt != eq.rhs.tgt) {
            out.push(Diagnostic::NonParallelEquation { equation: i });
        }
    }
    if let Some(order) = &cat.order {
        let mut names: Vec<&Name> = order.iter().collect();
        names.sort();
        let mut decl: Vec<&Name> = cat.funs.iter().map(|f| &f.name).collect();
        decl.sort();
        if names != decl {
            out.push(Diagnostic::BadTermOrder { reason: "must list every function symbol exactly once".into() });
        }
    }
    out
}

/// A morphism of presentations: sorts to sorts, symbols to paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatMorphism {
    name: Name,
    source: Arc<CatPresentation>,
    target: Arc<CatPresentation>,
    sort_map: IndexMap<Name, Name>,
    fun_map: IndexMap<Name, Path>,
}

impl CatMorphism {
    /// Checks that every sort and symbol has a well-typed image.
    pub fn new(
        name: impl Into<Name>,
        source: Arc<CatPresentation>,
        target: Arc<CatPresentation>,
        sort_map: IndexMap<Name, Name>,
        fun_map: IndexMap<Name, Path>,
    ) -> Result<Self, SyntaxError> {
        let mut sorts = IndexMap::new();
        for s in source.sorts() {
            let img = sort_map.get(s).ok_or_else(|| SyntaxError::MissingImage(s.clone()))?;
            if !target.has_sort(img.as_str()) {
                return Err(SyntaxError::UnknownSort(img.clone()));
            }
            sorts.insert(s.clone(), img.clone());
        }
        let mut funs = IndexMap::new();
        for f in source.funs() {
            let img = fun_map.get(&f.name).ok_or_else(|| SyntaxError::MissingImage(f.name.clone()))?;
            target.check_path(img)?;
            let (es, et) = (&sorts[&f.src], &sorts[&f.tgt]);
            if img.src() != es || img.tgt() != et {
                return Err(SyntaxError::IllTypedImage {
                    symbol: f.name.clone(),
                    image: img.to_string(),
                    expected_src: es.clone(),
                    expected_tgt: et.clone(),
                });
            }
            funs.insert(f.name.clone(), img.clone());
        }
        for k in sort_map.keys() {
            if !source.has_sort(k.as_str()) {
                return Err(SyntaxError::UnknownSort(k.clone()));
            }
        }
        for k in fun_map.keys() {
            if source.fun(k.as_str()).is_none() {
                return Err(SyntaxError::UnknownSymbol(k.clone()));
            }
        }
        Ok(CatMorphism { name: name.into(), source, target, sort_map: sorts, fun_map: funs })
    }

    pub fn identity(cat: Arc<CatPresentation>) -> Self {
        let sort_map = cat.sorts().iter().map(|s| (s.clone(), s.clone())).collect();
        let fun_map =
            cat.funs().iter().map(|f| (f.name.clone(), Path::new_unchecked(f.src.clone(), f.tgt.clone(), vec![f.name.clone()]))).collect();
        CatMorphism { name: Name::new(format!("id_{}", cat.name())), source: cat.clone(), target: cat, sort_map, fun_map }
    }

    pub fn name(&self) -> &Name {
        &self.name
    }

    pub fn source(&self) -> &Arc<CatPresentation> {
        &self.source
    }

    pub fn target(&self) -> &Arc<CatPresentation> {
        &self.target
    }

    pub fn sort_map(&self) -> &IndexMap<Name, Name> {
        &self.sort_map
    }

    pub fn fun_map(&self) -> &IndexMap<Name, Path> {
        &self.fun_map
    }

    pub fn apply_sort(&self, s: &Name) -> Option<&Name> {
        self.sort_map.get(s)
    }

    /// True when every sort and symbol is sent to itself.
    pub fn is_identity_like(&self) -> bool {
        self.sort_map.iter().all(|(a, b)| a == b) && self.fun_map.iter().all(|(f, p)| p.syms().len() == 1 && &p.syms()[0] == f)
    }

    /// Homomorphic extension to paths.
    pub fn apply(&self, p: &Path) -> Result<Path, SyntaxError> {
        self.source.check_path(p).map_err(|_| SyntaxError::ForeignPath(p.to_string()))?;
        let start = self.sort_map[p.src()].clone();
        let mut out = Path::identity(start);
        for s in p.syms() {
            out = compose_paths(&out, &self.fun_map[s])?;
        }
        Ok(out)
    }

    /// Diagrammatic composite: first `self`, then `next`.
    pub fn then(&self, next: &CatMorphism) -> Result<CatMorphism, SyntaxError> {
        if *self.target != *next.source {
            return Err(SyntaxError::ForeignPath(format!(
                "{} ends at {}, {} starts at {}",
                self.name,
                self.target.name(),
                next.name,
                next.source.name()
            )));
        }
        let sort_map = self.sort_map.iter().map(|(s, t)| (s.clone(), next.sort_map[t].clone())).collect();
        let mut fun_map = IndexMap::new();
        for (f, img) in &self.fun_map {
            fun_map.insert(f.clone(), next.apply(img)?);
        }
        Ok(CatMorphism {
            name: Name::new(format!("{};{}", self.name, next.name)),
            source: self.source.clone(),
            target: next.target.clone(),
            sort_map,
            fun_map,
        })
    }

    pub fn with_name(mut self, name: impl Into<Name>) -> Self {
        self.name = name.into();
        self
    }
}

/// Applies `f` to `p`; see [`CatMorphism::apply`].
pub fn apply_morphism(f: &CatMorphism, p: &Path) -> Result<Path, SyntaxError> {
    f.apply(p)
}
