//! The `.prof` text format: parsing into a resolved [`Workspace`],
//! canonical rendering and JSON export.
//!
//! ```text
//! category M { sorts *; fun f : * -> *; fun g : * -> *; eq f.g = g.f; }
//! curried Pc : M -> N {
//!   at * { gen x : *; gen y : *; eq x.s = x; }
//!   act f { x -> x; y -> y.s; }
//!   act g { x -> x; y -> y.s.s; }
//! }
//! morphism F : M -> M { f -> f.f; g -> f.g; }
//! ```

mod json;
mod lexer;
mod parser;
mod render;
mod resolve;

use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;
use thiserror::Error;

use crate::presentations::{
    CurriedMorphism, CurriedPresentation, InstanceMorphism, InstancePresentation, UncurriedMorphism, UncurriedPresentation,
};
use crate::syntax::{CatMorphism, CatPresentation, Name};

pub use render::quote_name;

/// A region of the source text, in bytes and in 1-based lines and columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    pub file: Arc<str>,
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
    pub end_line: usize,
    pub end_column: usize,
}

impl SourceSpan {
    pub(crate) fn join(&self, other: &SourceSpan) -> SourceSpan {
        SourceSpan { end: other.end, end_line: other.end_line, end_column: other.end_column, ..self.clone() }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{span}: lex error: {message}")]
pub struct LexError {
    pub message: String,
    pub span: SourceSpan,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{span}: parse error: {message}")]
pub struct ParseError {
    pub message: String,
    pub span: SourceSpan,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{span}: {message}")]
pub struct ResolveError {
    pub message: String,
    pub span: SourceSpan,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DslError {
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Resolve(#[from] ResolveError),
}

impl DslError {
    pub(crate) fn lex(message: impl Into<String>, span: SourceSpan) -> Self {
        DslError::Lex(LexError { message: message.into(), span })
    }

    pub(crate) fn parse(message: impl Into<String>, span: SourceSpan) -> Self {
        DslError::Parse(ParseError { message: message.into(), span })
    }

    pub(crate) fn resolve(message: impl Into<String>, span: SourceSpan) -> Self {
        DslError::Resolve(ResolveError { message: message.into(), span })
    }

    pub fn span(&self) -> &SourceSpan {
        match self {
            DslError::Lex(e) => &e.span,
            DslError::Parse(e) => &e.span,
            DslError::Resolve(e) => &e.span,
        }
    }

    /// The offending line with a caret under the span.
    pub fn snippet(&self, text: &str) -> String {
        let span = self.span();
        let line = text.lines().nth(span.line - 1).unwrap_or("");
        let width = if span.end_line == span.line { (span.end_column - span.column).max(1) } else { 1 };
        format!("{line}\n{}{}", " ".repeat(span.column - 1), "^".repeat(width))
    }
}

/// Anything that can be declared in a `.prof` file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Entity {
    Category(Arc<CatPresentation>),
    Instance(Arc<InstancePresentation>),
    Uncurried(Arc<UncurriedPresentation>),
    Curried(Arc<CurriedPresentation>),
    CatMorphism(Arc<CatMorphism>),
    InstanceMorphism(Arc<InstanceMorphism>),
    UncurriedMorphism(Arc<UncurriedMorphism>),
    CurriedMorphism(Arc<CurriedMorphism>),
}

impl Entity {
    pub fn name(&self) -> &Name {
        match self {
            Entity::Category(e) => e.name(),
            Entity::Instance(e) => e.name(),
            Entity::Uncurried(e) => e.name(),
            Entity::Curried(e) => e.name(),
            Entity::CatMorphism(e) => e.name(),
            Entity::InstanceMorphism(e) => e.name(),
            Entity::UncurriedMorphism(e) => e.name(),
            Entity::CurriedMorphism(e) => e.name(),
        }
    }

    /// The `"kind"` discriminator of the JSON export.
    pub fn kind(&self) -> &'static str {
        match self {
            Entity::Category(_) => "category",
            Entity::Instance(_) => "instance",
            Entity::Uncurried(_) => "uncurried",
            Entity::Curried(_) => "curried",
            Entity::CatMorphism(_) => "category_morphism",
            Entity::InstanceMorphism(_) => "instance_morphism",
            Entity::UncurriedMorphism(_) => "uncurried_morphism",
            Entity::CurriedMorphism(_) => "curried_morphism",
        }
    }

    pub fn render(&self) -> String {
        render::entity(self)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json::entity(self)
    }
}

impl From<CatPresentation> for Entity {
    fn from(e: CatPresentation) -> Self {
        Entity::Category(Arc::new(e))
    }
}

impl From<InstancePresentation> for Entity {
    fn from(e: InstancePresentation) -> Self {
        Entity::Instance(Arc::new(e))
    }
}

impl From<UncurriedPresentation> for Entity {
    fn from(e: UncurriedPresentation) -> Self {
        Entity::Uncurried(Arc::new(e))
    }
}

impl From<CurriedPresentation> for Entity {
    fn from(e: CurriedPresentation) -> Self {
        Entity::Curried(Arc::new(e))
    }
}

impl From<CatMorphism> for Entity {
    fn from(e: CatMorphism) -> Self {
        Entity::CatMorphism(Arc::new(e))
    }
}

impl From<InstanceMorphism> for Entity {
    fn from(e: InstanceMorphism) -> Self {
        Entity::InstanceMorphism(Arc::new(e))
    }
}

impl From<UncurriedMorphism> for Entity {
    fn from(e: UncurriedMorphism) -> Self {
        Entity::UncurriedMorphism(Arc::new(e))
    }
}

impl From<CurriedMorphism> for Entity {
    fn from(e: CurriedMorphism) -> Self {
        Entity::CurriedMorphism(Arc::new(e))
    }
}

/// Named entities in declaration order, every reference resolved.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Workspace {
    entities: IndexMap<Name, Entity>,
}

macro_rules! getter {
    ($fn:ident, $variant:ident, $ty:ty) => {
        pub fn $fn(&self, name: &str) -> Option<&Arc<$ty>> {
            match self.entities.get(name)? {
                Entity::$variant(e) => Some(e),
                _ => None,
            }
        }
    };
}

impl Workspace {
    pub fn new() -> Self {
        Workspace::default()
    }

    /// Adds an entity built in code; fails on a duplicate name.
    pub fn insert(&mut self, e: impl Into<Entity>) -> Result<(), Name> {
        let e = e.into();
        let name = e.name().clone();
        if self.entities.contains_key(&name) {
            return Err(name);
        }
        self.entities.insert(name, e);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Entity> {
        self.entities.get(name)
    }

    pub fn entities(&self) -> impl Iterator<Item = &Entity> {
        self.entities.values()
    }

    pub fn names(&self) -> impl Iterator<Item = &Name> {
        self.entities.keys()
    }

    pub fn len(&self) -> usize {
        self.entities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entities.is_empty()
    }

    getter!(category, Category, CatPresentation);
    getter!(instance, Instance, InstancePresentation);
    getter!(uncurried, Uncurried, UncurriedPresentation);
    getter!(curried, Curried, CurriedPresentation);
    getter!(cat_morphism, CatMorphism, CatMorphism);
    getter!(instance_morphism, InstanceMorphism, InstanceMorphism);
    getter!(uncurried_morphism, UncurriedMorphism, UncurriedMorphism);
    getter!(curried_morphism, CurriedMorphism, CurriedMorphism);

    /// Canonical text of every entity, blank-line separated.
    pub fn render(&self) -> String {
        self.entities.values().map(Entity::render).collect::<Vec<_>>().join("\n")
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "kind": "workspace",
            "entities": self.entities.values().map(Entity::to_json).collect::<Vec<_>>(),
        })
    }
}

pub fn parse_workspace(text: &str) -> Result<Workspace, DslError> {
    parse_workspace_named(text, "<input>")
}

/// As [`parse_workspace`], with `file` recorded in every span.
pub fn parse_workspace_named(text: &str, file: &str) -> Result<Workspace, DslError> {
    let lines = lexer::Lines::new(file, text);
    let toks = lexer::lex(&lines, text)?;
    let decls = parser::Parser::new(toks).workspace()?;
    resolve::resolve(decls)
}

pub fn render(e: &Entity) -> String {
    e.render()
}

/// Pretty-printed JSON with a trailing newline; keys keep a fixed order.
pub fn export_json(e: &Entity) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(&e.to_json()).expect("json values serialize");
    out.push(b'\n');
    out
}

#[cfg(test)]
mod tests;
