use std::collections::HashMap;
use std::sync::Arc;

use indexmap::IndexMap;

use crate::presentations::{
    at_name, CrossPath, CurriedMorphism, CurriedPresentation, InstanceMorphism, InstancePresentation, Term, UncurriedMorphism,
    UncurriedPresentation,
};
use crate::syntax::{typecheck_path, validate_presentation, CatMorphism, CatPresentation, Equation, Name, Path, SyntaxError};

use super::parser::{Decl, DeclBody, Entries, EqAst, Ident, InstBody, PathAst, Typed};
use super::{DslError, Entity, SourceSpan, Workspace};

type R<T> = Result<T, DslError>;

fn err<T>(message: impl Into<String>, span: &SourceSpan) -> R<T> {
    Err(DslError::resolve(message, span.clone()))
}

/// Points a typing error at the symbol it concerns when possible.
fn syntax_err<T>(e: SyntaxError, syms: &[Ident], whole: &SourceSpan) -> R<T> {
    let span = match &e {
        SyntaxError::UnknownSymbol(n) => syms.iter().find(|s| &s.name == n).map_or(whole, |s| &s.span),
        SyntaxError::CompositionMismatch { position, .. } => syms.get(*position).map_or(whole, |s| &s.span),
        _ => whole,
    };
    err(e.to_string(), span)
}

fn names(syms: &[Ident]) -> Vec<Name> {
    syms.iter().map(|s| s.name.clone()).collect()
}

fn check_sort(cat: &CatPresentation, s: &Ident) -> R<()> {
    if cat.has_sort(s.name.as_str()) {
        Ok(())
    } else {
        err(format!("`{}` is not a sort of {}", s.name, cat.name()), &s.span)
    }
}

fn cat_path(cat: &CatPresentation, ast: &PathAst) -> R<Path> {
    if let Some(s) = &ast.id_sort {
        check_sort(cat, s)?;
        return Ok(Path::identity(s.name.clone()));
    }
    typecheck_path(cat, &names(&ast.syms), None).or_else(|e| syntax_err(e, &ast.syms, &ast.span))
}

fn term(inst: &InstancePresentation, ast: &PathAst) -> R<Term> {
    if ast.id_sort.is_some() {
        return err("a term starts with a generator", &ast.span);
    }
    let head = &ast.syms[0];
    let Some(g) = inst.gen(head.name.as_str()) else {
        return err(format!("`{}` is not a generator of {}", head.name, inst.name()), &head.span);
    };
    let rest = &ast.syms[1..];
    let path = typecheck_path(inst.base(), &names(rest), Some(&g.sort)).or_else(|e| syntax_err(e, rest, &ast.span))?;
    Ok(Term::new(g.name.clone(), path))
}

fn cross(pres: &UncurriedPresentation, ast: &PathAst) -> R<CrossPath> {
    if ast.id_sort.is_some() {
        return err("a cross-path contains a profunctor symbol", &ast.span);
    }
    let hits: Vec<usize> = (0..ast.syms.len()).filter(|&i| pres.pro(ast.syms[i].name.as_str()).is_some()).collect();
    let k = match hits.as_slice() {
        [k] => *k,
        [] => return err(format!("no profunctor symbol of {} in this cross-path", pres.name()), &ast.span),
        [_, second, ..] => return err("a cross-path has exactly one profunctor symbol", &ast.syms[*second].span),
    };
    let p = pres.pro(ast.syms[k].name.as_str()).expect("hit");
    let (pre_syms, post_syms) = (&ast.syms[..k], &ast.syms[k + 1..]);
    let pre = typecheck_path(pres.left(), &names(pre_syms), pre_syms.is_empty().then_some(&p.src))
        .or_else(|e| syntax_err(e, pre_syms, &ast.span))?;
    if pre.tgt() != &p.src {
        return err(format!("`{}` starts at {} but the left path ends at {}", p.name, p.src, pre.tgt()), &ast.syms[k].span);
    }
    let post = typecheck_path(pres.right(), &names(post_syms), Some(&p.tgt)).or_else(|e| syntax_err(e, post_syms, &ast.span))?;
    Ok(CrossPath::new(pre, p.name.clone(), post))
}

fn parallel(eq: &EqAst, l: (&Name, &Name), r: (&Name, &Name)) -> R<()> {
    if l == r {
        Ok(())
    } else {
        err(format!("the sides of this equation are not parallel: {} -> {} and {} -> {}", l.0, l.1, r.0, r.1), &eq.span)
    }
}

fn no_duplicates<'a>(items: impl Iterator<Item = &'a Ident>, what: &str) -> R<()> {
    let mut seen = HashMap::new();
    for id in items {
        if seen.insert(id.name.clone(), ()).is_some() {
            return err(format!("{what} `{}` declared twice", id.name), &id.span);
        }
    }
    Ok(())
}

fn instance(name: Name, base: Arc<CatPresentation>, body: &InstBody, at: &Ident) -> R<InstancePresentation> {
    no_duplicates(body.gens.iter().map(|(g, _)| g), "generator")?;
    let mut inst = InstancePresentation::new(name, base.clone());
    for (g, s) in &body.gens {
        check_sort(&base, s)?;
        inst = inst.with_gen(g.name.clone(), s.name.clone());
    }
    for eq in &body.eqs {
        let (l, r) = (term(&inst, &eq.lhs)?, term(&inst, &eq.rhs)?);
        if l.sort() != r.sort() {
            return err(format!("the sides of this equation live over {} and {}", l.sort(), r.sort()), &eq.span);
        }
        inst = inst.with_eq(l, r);
    }
    inst.check().or_else(|e| err(e.to_string(), &at.span))?;
    Ok(inst)
}

fn typed_sorts(t: &Typed, src: &CatPresentation, tgt: &CatPresentation) -> R<()> {
    check_sort(src, &t.src)?;
    check_sort(tgt, &t.tgt)
}

/// Same-named sort, else the only sort of the target.
pub(crate) fn default_sort(s: &Name, target: &CatPresentation) -> Option<Name> {
    if target.has_sort(s.as_str()) {
        Some(s.clone())
    } else if let [only] = target.sorts() {
        Some(only.clone())
    } else {
        None
    }
}

struct Resolver {
    decls: Vec<Decl>,
    index: HashMap<Name, usize>,
    done: Vec<Option<Entity>>,
    visiting: Vec<bool>,
}

pub(crate) fn resolve(decls: Vec<Decl>) -> R<Workspace> {
    let mut index = HashMap::new();
    for (i, d) in decls.iter().enumerate() {
        if index.insert(d.name.name.clone(), i).is_some() {
            return err(format!("`{}` is declared twice", d.name.name), &d.name.span);
        }
    }
    let n = decls.len();
    let mut r = Resolver { decls, index, done: vec![None; n], visiting: vec![false; n] };
    let mut ws = Workspace::new();
    for i in 0..n {
        let e = r.entity_at(i)?;
        ws.insert(e).expect("names are unique");
    }
    Ok(ws)
}

impl Resolver {
    fn entity(&mut self, id: &Ident) -> R<Entity> {
        match self.index.get(&id.name) {
            Some(&i) => self.entity_at(i),
            None => err(format!("`{}` is not declared", id.name), &id.span),
        }
    }

    fn entity_at(&mut self, i: usize) -> R<Entity> {
        if let Some(e) = &self.done[i] {
            return Ok(e.clone());
        }
        let decl = self.decls[i].clone();
        if self.visiting[i] {
            return err(format!("`{}` refers to itself", decl.name.name), &decl.name.span);
        }
        self.visiting[i] = true;
        let e = self.build(&decl)?;
        self.visiting[i] = false;
        self.done[i] = Some(e.clone());
        Ok(e)
    }

    fn category(&mut self, id: &Ident) -> R<Arc<CatPresentation>> {
        match self.entity(id)? {
            Entity::Category(c) => Ok(c),
            other => err(format!("`{}` is a {}, not a category", id.name, other.kind()), &id.span),
        }
    }

    /// A declared category morphism, or `id_C` for the identity of a category `C`.
    fn cat_morphism(&mut self, id: &Ident) -> R<CatMorphism> {
        if !self.index.contains_key(&id.name) {
            if let Some(c) = id.name.as_str().strip_prefix("id_") {
                let cat = self.category(&Ident { name: Name::new(c), span: id.span.clone() })?;
                return Ok(CatMorphism::identity(cat));
            }
        }
        match self.entity(id)? {
            Entity::CatMorphism(m) => Ok((*m).clone()),
            other => err(format!("`{}` is a {}, not a category morphism", id.name, other.kind()), &id.span),
        }
    }

    fn build(&mut self, d: &Decl) -> R<Entity> {
        let name = d.name.name.clone();
        Ok(match &d.body {
            DeclBody::Category { sorts, funs, eqs, order } => Entity::from(self.build_category(d, sorts, funs, eqs, order)?),
            DeclBody::Instance { on, body } => {
                let base = self.category(on)?;
                Entity::from(instance(name, base, body, &d.name)?)
            }
            DeclBody::Uncurried { left, right, pros, eqs } => {
                let (l, r) = (self.category(left)?, self.category(right)?);
                no_duplicates(pros.iter().map(|t| &t.name), "profunctor symbol")?;
                let mut u = UncurriedPresentation::new(name, l.clone(), r.clone());
                for t in pros {
                    typed_sorts(t, &l, &r)?;
                    if l.fun(t.name.name.as_str()).is_some() || r.fun(t.name.name.as_str()).is_some() {
                        return err(format!("`{}` is already a function symbol", t.name.name), &t.name.span);
                    }
                    u = u.with_pro(t.name.name.clone(), t.src.name.clone(), t.tgt.name.clone());
                }
                for eq in eqs {
                    let (a, b) = (cross(&u, &eq.lhs)?, cross(&u, &eq.rhs)?);
                    parallel(eq, (a.src(), a.tgt()), (b.src(), b.tgt()))?;
                    u = u.with_eq(a, b);
                }
                u.check().or_else(|e| err(e.to_string(), &d.name.span))?;
                Entity::from(u)
            }
            DeclBody::Curried { left, right, at, act } => Entity::from(self.build_curried(d, left, right, at, act)?),
            DeclBody::Morphism { source, target, via, sorts, entries, at } => {
                let (s, t) = (self.entity(source)?, self.entity(target)?);
                self.build_morphism(d, (&s, source), (&t, target), via, sorts, entries, at)?
            }
        })
    }

    fn build_category(
        &mut self,
        d: &Decl,
        sorts: &[Ident],
        funs: &[Typed],
        eqs: &[EqAst],
        order: &Option<(Vec<Ident>, SourceSpan)>,
    ) -> R<CatPresentation> {
        no_duplicates(sorts.iter(), "sort")?;
        no_duplicates(funs.iter().map(|t| &t.name), "function symbol")?;
        let mut cat = CatPresentation::new(d.name.name.clone());
        for s in sorts {
            cat = cat.with_sort(s.name.clone());
        }
        for t in funs {
            check_sort(&cat, &t.src)?;
            check_sort(&cat, &t.tgt)?;
            cat = cat.with_fun(t.name.name.clone(), t.src.name.clone(), t.tgt.name.clone());
        }
        for eq in eqs {
            let (l, r) = (cat_path(&cat, &eq.lhs)?, cat_path(&cat, &eq.rhs)?);
            parallel(eq, (l.src(), l.tgt()), (r.src(), r.tgt()))?;
            cat = cat.with_eq(Equation::new(l, r));
        }
        if let Some((names, kw)) = order {
            no_duplicates(names.iter(), "symbol")?;
            if let Some(bad) = names.iter().find(|n| cat.fun(n.name.as_str()).is_none()) {
                return err(format!("`{}` is not a function symbol", bad.name), &bad.span);
            }
            if names.len() != funs.len() {
                return err("the order must list every function symbol", kw);
            }
            cat = cat.with_order(names.iter().map(|n| n.name.clone()).collect());
        }
        if let Some(diag) = validate_presentation(&cat).first() {
            return err(diag.to_string(), &d.name.span);
        }
        Ok(cat)
    }

    fn build_curried(
        &mut self,
        d: &Decl,
        left: &Ident,
        right: &Ident,
        at: &[(Ident, InstBody)],
        act: &[(Ident, Entries)],
    ) -> R<CurriedPresentation> {
        let (l, r) = (self.category(left)?, self.category(right)?);
        let name = d.name.name.clone();
        no_duplicates(at.iter().map(|(s, _)| s), "`at` block for sort")?;
        no_duplicates(act.iter().map(|(f, _)| f), "`act` block for symbol")?;
        let mut insts = IndexMap::new();
        for (s, body) in at {
            check_sort(&l, s)?;
            let inst = instance(at_name(&name, &s.name), r.clone(), body, s)?;
            insts.insert(s.name.clone(), Arc::new(inst));
        }
        if let Some(c) = l.sorts().iter().find(|c| !insts.contains_key(*c)) {
            return err(format!("no `at` block for sort {c}"), &d.name.span);
        }
        let mut acts = IndexMap::new();
        for (f, entries) in act {
            let Some(sym) = l.fun(f.name.as_str()) else {
                return err(format!("`{}` is not a function symbol of {}", f.name, l.name()), &f.span);
            };
            let (src, tgt) = (&insts[&sym.src], &insts[&sym.tgt]);
            let images = self.term_images(entries, tgt, src, |s| s.clone(), f)?;
            acts.insert(sym.name.clone(), images);
        }
        if let Some(f) = l.funs().iter().find(|f| !acts.contains_key(&f.name) && !insts[&f.tgt].gens().is_empty()) {
            return err(format!("no `act` block for {}", f.name), &d.name.span);
        }
        CurriedPresentation::new(name, l, r, insts, acts).or_else(|e| err(e.to_string(), &d.name.span))
    }

    /// `gen -> term` entries for every generator of `from`, as terms of `into`.
    fn term_images(
        &self,
        entries: &Entries,
        from: &InstancePresentation,
        into: &InstancePresentation,
        sort: impl Fn(&Name) -> Name,
        block: &Ident,
    ) -> R<IndexMap<Name, Term>> {
        no_duplicates(entries.iter().map(|(g, _)| g), "image for")?;
        let mut out = IndexMap::new();
        for (g, img) in entries {
            let Some(gen) = from.gen(g.name.as_str()) else {
                return err(format!("`{}` is not a generator of {}", g.name, from.name()), &g.span);
            };
            let t = term(into, img)?;
            let want = sort(&gen.sort);
            if t.sort() != &want {
                return err(format!("`{t}` lives over {} but {} needs {want}", t.sort(), g.name), &img.span);
            }
            out.insert(gen.name.clone(), t);
        }
        if let Some(g) = from.gens().iter().find(|g| !out.contains_key(&g.name)) {
            return err(format!("no image for generator {}", g.name), &block.span);
        }
        Ok(out)
    }

    fn via(&mut self, via: &[Ident], want: usize, default: impl Fn() -> Option<Vec<CatMorphism>>, at: &Ident) -> R<Vec<CatMorphism>> {
        if via.is_empty() {
            return default().map_or_else(|| err("the frames differ, so `via` is required", &at.span), Ok);
        }
        if via.len() != want {
            return err(format!("`via` takes {want} category morphism(s)"), &via[0].span);
        }
        via.iter().map(|v| self.cat_morphism(v)).collect()
    }

    #[allow(clippy::too_many_arguments)]
    fn build_morphism(
        &mut self,
        d: &Decl,
        (s, sid): (&Entity, &Ident),
        (t, tid): (&Entity, &Ident),
        via: &[Ident],
        sorts: &[(Ident, Ident)],
        entries: &Entries,
        at: &[(Ident, Entries)],
    ) -> R<Entity> {
        let name = d.name.name.clone();
        let only_entries = |ok_via: bool| -> R<()> {
            if let Some((s, _)) = sorts.first() {
                return err("`sort` lines only belong to category morphisms", &s.span);
            }
            if let Some((c, _)) = at.first() {
                return err("`at` blocks only belong to curried morphisms", &c.span);
            }
            if !ok_via {
                if let Some(v) = via.first() {
                    return err("`via` does not apply here", &v.span);
                }
            }
            Ok(())
        };
        let wrap = |e: crate::presentations::PresentationError| DslError::resolve(e.to_string(), d.name.span.clone());
        match (s, t) {
            (Entity::Category(a), Entity::Category(b)) => {
                if let Some(v) = via.first() {
                    return err("`via` does not apply to category morphisms", &v.span);
                }
                if let Some((c, _)) = at.first() {
                    return err("`at` blocks only belong to curried morphisms", &c.span);
                }
                no_duplicates(sorts.iter().map(|(x, _)| x), "sort")?;
                no_duplicates(entries.iter().map(|(x, _)| x), "image for")?;
                let mut sort_map = IndexMap::new();
                for (x, y) in sorts {
                    check_sort(a, x)?;
                    check_sort(b, y)?;
                    sort_map.insert(x.name.clone(), y.name.clone());
                }
                for x in a.sorts() {
                    if !sort_map.contains_key(x) {
                        let Some(y) = default_sort(x, b) else {
                            return err(format!("no image for sort {x}; add `sort {x} -> ...;`"), &d.name.span);
                        };
                        sort_map.insert(x.clone(), y);
                    }
                }
                let mut fun_map = IndexMap::new();
                for (f, img) in entries {
                    let Some(sym) = a.fun(f.name.as_str()) else {
                        return err(format!("`{}` is not a function symbol of {}", f.name, a.name()), &f.span);
                    };
                    let (es, et) = (&sort_map[&sym.src], &sort_map[&sym.tgt]);
                    let p = if img.id_sort.is_none() {
                        typecheck_path(b, &names(&img.syms), Some(es)).or_else(|e| syntax_err(e, &img.syms, &img.span))?
                    } else {
                        cat_path(b, img)?
                    };
                    if p.src() != es || p.tgt() != et {
                        return err(format!("`{p}` is not a path {es} -> {et}"), &img.span);
                    }
                    fun_map.insert(sym.name.clone(), p);
                }
                if let Some(f) = a.funs().iter().find(|f| !fun_map.contains_key(&f.name)) {
                    return err(format!("no image for {}", f.name), &d.name.span);
                }
                let m = CatMorphism::new(name, a.clone(), b.clone(), sort_map, fun_map).or_else(|e| err(e.to_string(), &d.name.span))?;
                Ok(Entity::from(m))
            }
            (Entity::Instance(a), Entity::Instance(b)) => {
                only_entries(true)?;
                let same = a.base() == b.base();
                let base = self.via(via, 1, || same.then(|| vec![CatMorphism::identity(a.base().clone())]), tid)?.remove(0);
                let images = self.term_images(entries, a, b, |s| base.apply_sort(s).cloned().unwrap_or_else(|| s.clone()), &d.name)?;
                Ok(Entity::from(InstanceMorphism::new(name, a.clone(), b.clone(), base, images).map_err(wrap)?))
            }
            (Entity::Uncurried(a), Entity::Uncurried(b)) => {
                only_entries(false)?;
                no_duplicates(entries.iter().map(|(x, _)| x), "image for")?;
                let mut images = IndexMap::new();
                for (p, img) in entries {
                    let Some(sym) = a.pro(p.name.as_str()) else {
                        return err(format!("`{}` is not a profunctor symbol of {}", p.name, a.name()), &p.span);
                    };
                    let cp = cross(b, img)?;
                    if cp.src() != &sym.src || cp.tgt() != &sym.tgt {
                        return err(format!("`{cp}` is not a cross-path {} -> {}", sym.src, sym.tgt), &img.span);
                    }
                    images.insert(sym.name.clone(), cp);
                }
                Ok(Entity::from(UncurriedMorphism::new(name, a.clone(), b.clone(), images).map_err(wrap)?))
            }
            (Entity::Curried(a), Entity::Curried(b)) => {
                if let Some((x, _)) = sorts.first() {
                    return err("`sort` lines only belong to category morphisms", &x.span);
                }
                if let Some((x, _)) = entries.first() {
                    return err("curried morphisms list images inside `at` blocks", &x.span);
                }
                let same = a.left() == b.left() && a.right() == b.right();
                let frame = self.via(
                    via,
                    2,
                    || same.then(|| vec![CatMorphism::identity(a.left().clone()), CatMorphism::identity(a.right().clone())]),
                    tid,
                )?;
                let (lm, rm) = (frame[0].clone(), frame[1].clone());
                if lm.source() != a.left() || lm.target() != b.left() || rm.source() != a.right() || rm.target() != b.right() {
                    return err("the `via` morphisms do not match the frames", &via[0].span);
                }
                no_duplicates(at.iter().map(|(c, _)| c), "`at` block for sort")?;
                let mut comps = IndexMap::new();
                for (c, entries) in at {
                    check_sort(a.left(), c)?;
                    let tc = lm.apply_sort(&c.name).expect("total");
                    let images = self.term_images(
                        entries,
                        a.at(c.name.as_str()),
                        b.at(tc.as_str()),
                        |s| rm.apply_sort(s).expect("total").clone(),
                        c,
                    )?;
                    comps.insert(c.name.clone(), images);
                }
                if let Some(c) = a.left().sorts().iter().find(|c| !comps.contains_key(*c) && !a.at(c.as_str()).gens().is_empty()) {
                    return err(format!("no `at` block for sort {c}"), &d.name.span);
                }
                Ok(Entity::from(CurriedMorphism::new(name, a.clone(), b.clone(), lm, rm, comps).map_err(wrap)?))
            }
            (a, b) => err(
                format!("cannot map a {} to a {}", a.kind(), b.kind()),
                if a.kind().ends_with("morphism") { &sid.span } else { &tid.span },
            ),
        }
    }
}
