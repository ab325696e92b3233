use crate::syntax::Name;

use super::lexer::{Tok, Token};
use super::{DslError, SourceSpan};

#[derive(Clone, Debug)]
pub(crate) struct Ident {
    pub name: Name,
    pub span: SourceSpan,
}

/// `id(SORT)` or `a.b.c`; the span covers the whole path.
#[derive(Clone, Debug)]
pub(crate) struct PathAst {
    pub id_sort: Option<Ident>,
    pub syms: Vec<Ident>,
    pub span: SourceSpan,
}

#[derive(Clone, Debug)]
pub(crate) struct Typed {
    pub name: Ident,
    pub src: Ident,
    pub tgt: Ident,
}

#[derive(Clone, Debug)]
pub(crate) struct EqAst {
    pub lhs: PathAst,
    pub rhs: PathAst,
    pub span: SourceSpan,
}

#[derive(Clone, Debug, Default)]
pub(crate) struct InstBody {
    pub gens: Vec<(Ident, Ident)>,
    pub eqs: Vec<EqAst>,
}

/// `ID -> PATH;` entries of `act` and morphism blocks.
pub(crate) type Entries = Vec<(Ident, PathAst)>;

#[derive(Clone, Debug)]
pub(crate) enum DeclBody {
    Category { sorts: Vec<Ident>, funs: Vec<Typed>, eqs: Vec<EqAst>, order: Option<(Vec<Ident>, SourceSpan)> },
    Instance { on: Ident, body: InstBody },
    Uncurried { left: Ident, right: Ident, pros: Vec<Typed>, eqs: Vec<EqAst> },
    Curried { left: Ident, right: Ident, at: Vec<(Ident, InstBody)>, act: Vec<(Ident, Entries)> },
    Morphism { source: Ident, target: Ident, via: Vec<Ident>, sorts: Vec<(Ident, Ident)>, entries: Entries, at: Vec<(Ident, Entries)> },
}

#[derive(Clone, Debug)]
pub(crate) struct Decl {
    pub name: Ident,
    pub body: DeclBody,
}

pub(crate) struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    pub fn new(toks: Vec<Token>) -> Self {
        Parser { toks, pos: 0 }
    }

    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, wanted: &str) -> DslError {
        let t = self.peek();
        DslError::parse(format!("expected {wanted}, found {}", t.tok.describe()), t.span.clone())
    }

    fn expect(&mut self, tok: Tok) -> Result<SourceSpan, DslError> {
        if self.peek().tok == tok {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn eat(&mut self, tok: Tok) -> bool {
        if self.peek().tok == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn ident(&mut self, what: &str) -> Result<Ident, DslError> {
        match &self.peek().tok {
            Tok::Ident(s, _) => {
                let name = Name::new(s);
                let span = self.bump().span;
                Ok(Ident { name, span })
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s, false) if s == kw)
    }

    fn keyword(&mut self, kw: &str) -> Result<Ident, DslError> {
        if self.is_keyword(kw) {
            self.ident(kw)
        } else {
            Err(self.unexpected(&format!("`{kw}`")))
        }
    }

    pub fn workspace(&mut self) -> Result<Vec<Decl>, DslError> {
        let mut out = Vec::new();
        while self.peek().tok != Tok::Eof {
            out.push(self.decl()?);
        }
        Ok(out)
    }

    fn decl(&mut self) -> Result<Decl, DslError> {
        let kw = match &self.peek().tok {
            Tok::Ident(s, false) if ["category", "instance", "uncurried", "curried", "morphism"].contains(&s.as_str()) => s.clone(),
            _ => return Err(self.unexpected("`category`, `instance`, `uncurried`, `curried` or `morphism`")),
        };
        self.bump();
        let name = self.ident("a name")?;
        let body = match kw.as_str() {
            "category" => self.category()?,
            "instance" => {
                self.keyword("on")?;
                let on = self.ident("a category name")?;
                self.expect(Tok::LBrace)?;
                let body = self.inst_body()?;
                self.expect(Tok::RBrace)?;
                DeclBody::Instance { on, body }
            }
            "uncurried" => self.uncurried()?,
            "curried" => self.curried()?,
            _ => self.morphism()?,
        };
        Ok(Decl { name, body })
    }

    fn frame(&mut self) -> Result<(Ident, Ident), DslError> {
        self.expect(Tok::Colon)?;
        let a = self.ident("a source name")?;
        self.expect(Tok::Arrow)?;
        let b = self.ident("a target name")?;
        Ok((a, b))
    }

    fn typed(&mut self, what: &str) -> Result<Typed, DslError> {
        let name = self.ident(what)?;
        self.expect(Tok::Colon)?;
        let src = self.ident("a sort")?;
        self.expect(Tok::Arrow)?;
        let tgt = self.ident("a sort")?;
        self.expect(Tok::Semi)?;
        Ok(Typed { name, src, tgt })
    }

    fn list(&mut self, what: &str) -> Result<Vec<Ident>, DslError> {
        let mut out = Vec::new();
        if self.peek().tok == Tok::Semi {
            return Ok(out);
        }
        loop {
            out.push(self.ident(what)?);
            if !self.eat(Tok::Comma) {
                return Ok(out);
            }
        }
    }

    fn category(&mut self) -> Result<DeclBody, DslError> {
        self.expect(Tok::LBrace)?;
        let (mut sorts, mut funs, mut eqs, mut order) = (Vec::new(), Vec::new(), Vec::new(), None);
        loop {
            if self.eat(Tok::RBrace) {
                return Ok(DeclBody::Category { sorts, funs, eqs, order });
            }
            if self.is_keyword("sorts") {
                self.bump();
                sorts.extend(self.list("a sort")?);
                self.expect(Tok::Semi)?;
            } else if self.is_keyword("fun") {
                self.bump();
                funs.push(self.typed("a function symbol")?);
            } else if self.is_keyword("eq") {
                eqs.push(self.equation()?);
            } else if self.is_keyword("order") {
                let kw = self.bump().span;
                if order.is_some() {
                    return Err(DslError::parse("a second `order` annotation", kw));
                }
                let names = self.list("a function symbol")?;
                self.expect(Tok::Semi)?;
                order = Some((names, kw));
            } else {
                return Err(self.unexpected("`sorts`, `fun`, `eq`, `order` or `}`"));
            }
        }
    }

    fn path(&mut self) -> Result<PathAst, DslError> {
        let first = self.ident("a path")?;
        if first.name.as_str() == "id" && self.peek().tok == Tok::LParen {
            self.bump();
            let sort = self.ident("a sort")?;
            let close = self.expect(Tok::RParen)?;
            let span = first.span.join(&close);
            return Ok(PathAst { id_sort: Some(sort), syms: Vec::new(), span });
        }
        let mut span = first.span.clone();
        let mut syms = vec![first];
        while self.eat(Tok::Dot) {
            let s = self.ident("a symbol")?;
            span = span.join(&s.span);
            syms.push(s);
        }
        Ok(PathAst { id_sort: None, syms, span })
    }

    fn equation(&mut self) -> Result<EqAst, DslError> {
        let kw = self.keyword("eq")?;
        let lhs = self.path()?;
        self.expect(Tok::Eq)?;
        let rhs = self.path()?;
        let end = self.expect(Tok::Semi)?;
        Ok(EqAst { lhs, rhs, span: kw.span.join(&end) })
    }

    fn inst_body(&mut self) -> Result<InstBody, DslError> {
        let mut body = InstBody::default();
        loop {
            if self.is_keyword("gen") {
                self.bump();
                let names = self.list("a generator")?;
                self.expect(Tok::Colon)?;
                let sort = self.ident("a sort")?;
                self.expect(Tok::Semi)?;
                body.gens.extend(names.into_iter().map(|n| (n, sort.clone())));
            } else if self.is_keyword("eq") {
                body.eqs.push(self.equation()?);
            } else if self.peek().tok == Tok::RBrace {
                return Ok(body);
            } else {
                return Err(self.unexpected("`gen`, `eq` or `}`"));
            }
        }
    }

    fn uncurried(&mut self) -> Result<DeclBody, DslError> {
        let (left, right) = self.frame()?;
        self.expect(Tok::LBrace)?;
        let (mut pros, mut eqs) = (Vec::new(), Vec::new());
        loop {
            if self.eat(Tok::RBrace) {
                return Ok(DeclBody::Uncurried { left, right, pros, eqs });
            }
            if self.is_keyword("pro") {
                self.bump();
                pros.push(self.typed("a profunctor symbol")?);
            } else if self.is_keyword("eq") {
                eqs.push(self.equation()?);
            } else {
                return Err(self.unexpected("`pro`, `eq` or `}`"));
            }
        }
    }

    fn entries(&mut self) -> Result<Entries, DslError> {
        self.expect(Tok::LBrace)?;
        let mut out = Vec::new();
        while !self.eat(Tok::RBrace) {
            let key = self.ident("a symbol or `}`")?;
            self.expect(Tok::Arrow)?;
            let img = self.path()?;
            self.expect(Tok::Semi)?;
            out.push((key, img));
        }
        Ok(out)
    }

    fn curried(&mut self) -> Result<DeclBody, DslError> {
        let (left, right) = self.frame()?;
        self.expect(Tok::LBrace)?;
        let (mut at, mut act) = (Vec::new(), Vec::new());
        loop {
            if self.eat(Tok::RBrace) {
                return Ok(DeclBody::Curried { left, right, at, act });
            }
            if self.is_keyword("at") {
                self.bump();
                let sort = self.ident("a sort")?;
                self.expect(Tok::LBrace)?;
                let body = self.inst_body()?;
                self.expect(Tok::RBrace)?;
                at.push((sort, body));
            } else if self.is_keyword("act") {
                self.bump();
                let f = self.ident("a function symbol")?;
                act.push((f, self.entries()?));
            } else {
                return Err(self.unexpected("`at`, `act` or `}`"));
            }
        }
    }

    fn morphism(&mut self) -> Result<DeclBody, DslError> {
        let (source, target) = self.frame()?;
        let mut via = Vec::new();
        if self.is_keyword("via") {
            self.bump();
            via = self.list("a morphism name")?;
        }
        self.expect(Tok::LBrace)?;
        let (mut sorts, mut entries, mut at) = (Vec::new(), Vec::new(), Vec::new());
        loop {
            if self.eat(Tok::RBrace) {
                return Ok(DeclBody::Morphism { source, target, via, sorts, entries, at });
            }
            let is_entry = *self.peek_at(1) == Tok::Arrow;
            if self.is_keyword("sort") && !is_entry {
                self.bump();
                let a = self.ident("a sort")?;
                self.expect(Tok::Arrow)?;
                let b = self.ident("a sort")?;
                self.expect(Tok::Semi)?;
                sorts.push((a, b));
            } else if self.is_keyword("at") && !is_entry {
                self.bump();
                let sort = self.ident("a sort")?;
                at.push((sort, self.entries()?));
            } else {
                let key = self.ident("`sort`, `at`, a symbol or `}`")?;
                self.expect(Tok::Arrow)?;
                let img = self.path()?;
                self.expect(Tok::Semi)?;
                entries.push((key, img));
            }
        }
    }
}
