use std::fmt::Write;

use crate::presentations::{CrossPath, CurriedPresentation, InstancePresentation, Term};
use crate::syntax::{CatMorphism, CatPresentation, Name, Path};

use super::lexer::is_ident_char;
use super::resolve::default_sort;
use super::Entity;

/// The name as written in `.prof` text: bare when every character is an
/// identifier character, quoted otherwise.
pub fn quote_name(n: &str) -> String {
    if !n.is_empty() && n.chars().all(is_ident_char) {
        n.to_string()
    } else {
        format!("\"{n}\"")
    }
}

fn q(n: &Name) -> String {
    quote_name(n.as_str())
}

fn syms(s: &[Name]) -> String {
    s.iter().map(q).collect::<Vec<_>>().join(".")
}

pub(crate) fn path(p: &Path) -> String {
    if p.is_identity() {
        format!("id({})", q(p.src()))
    } else {
        syms(p.syms())
    }
}

pub(crate) fn term(t: &Term) -> String {
    std::iter::once(t.gen()).chain(t.path().syms()).map(q).collect::<Vec<_>>().join(".")
}

pub(crate) fn cross(c: &CrossPath) -> String {
    c.pre().syms().iter().chain(std::iter::once(c.pro())).chain(c.post().syms()).map(q).collect::<Vec<_>>().join(".")
}

/// `{ a; b; }` on one line when short, one entry per line otherwise.
fn block(out: &mut String, indent: &str, head: &str, lines: &[String]) {
    let one = format!("{indent}{head} {{ {} }}", lines.join(" "));
    if lines.is_empty() || one.chars().count() <= 80 {
        let _ = writeln!(out, "{}", if lines.is_empty() { format!("{indent}{head} {{ }}") } else { one });
    } else {
        let _ = writeln!(out, "{indent}{head} {{");
        for l in lines {
            let _ = writeln!(out, "{indent}  {l}");
        }
        let _ = writeln!(out, "{indent}}}");
    }
}

fn category(c: &CatPresentation) -> String {
    let mut out = format!("category {} {{\n", q(c.name()));
    if !c.sorts().is_empty() {
        let _ = writeln!(out, "  sorts {};", c.sorts().iter().map(q).collect::<Vec<_>>().join(", "));
    }
    for f in c.funs() {
        let _ = writeln!(out, "  fun {} : {} -> {};", q(&f.name), q(&f.src), q(&f.tgt));
    }
    for e in c.eqs() {
        let _ = writeln!(out, "  eq {} = {};", path(&e.lhs), path(&e.rhs));
    }
    if let Some(order) = c.explicit_order() {
        let _ = writeln!(out, "  order {};", order.iter().map(q).collect::<Vec<_>>().join(", "));
    }
    out.push_str("}\n");
    out
}

fn inst_lines(i: &InstancePresentation) -> Vec<String> {
    let mut lines: Vec<String> = i.gens().iter().map(|g| format!("gen {} : {};", q(&g.name), q(&g.sort))).collect();
    lines.extend(i.eqs().iter().map(|e| format!("eq {} = {};", term(&e.lhs), term(&e.rhs))));
    lines
}

fn images<'a>(it: impl Iterator<Item = (&'a Name, String)>) -> Vec<String> {
    it.map(|(k, v)| format!("{} -> {v};", q(k))).collect()
}

fn curried(p: &CurriedPresentation) -> String {
    let mut out = format!("curried {} : {} -> {} {{\n", q(p.name()), q(p.left().name()), q(p.right().name()));
    for (c, inst) in p.instances() {
        block(&mut out, "  ", &format!("at {}", q(c)), &inst_lines(inst));
    }
    for (f, imgs) in p.actions() {
        if !imgs.is_empty() {
            block(&mut out, "  ", &format!("act {}", q(f)), &images(imgs.iter().map(|(g, t)| (g, term(t)))));
        }
    }
    out.push_str("}\n");
    out
}

fn via(maps: &[&CatMorphism]) -> String {
    if maps.iter().all(|m| **m == CatMorphism::identity(m.source().clone())) {
        String::new()
    } else {
        format!(" via {}", maps.iter().map(|m| q(m.name())).collect::<Vec<_>>().join(", "))
    }
}

fn head(name: &Name, s: &Name, t: &Name, via: &str) -> String {
    format!("morphism {} : {} -> {}{via} {{\n", q(name), q(s), q(t))
}

pub(crate) fn entity(e: &Entity) -> String {
    match e {
        Entity::Category(c) => category(c),
        Entity::Instance(i) => {
            let mut out = format!("instance {} on {} {{\n", q(i.name()), q(i.base().name()));
            for l in inst_lines(i) {
                let _ = writeln!(out, "  {l}");
            }
            out.push_str("}\n");
            out
        }
        Entity::Uncurried(u) => {
            let mut out = format!("uncurried {} : {} -> {} {{\n", q(u.name()), q(u.left().name()), q(u.right().name()));
            for p in u.pros() {
                let _ = writeln!(out, "  pro {} : {} -> {};", q(&p.name), q(&p.src), q(&p.tgt));
            }
            for e in u.eqs() {
                let _ = writeln!(out, "  eq {} = {};", cross(&e.lhs), cross(&e.rhs));
            }
            out.push_str("}\n");
            out
        }
        Entity::Curried(p) => curried(p),
        Entity::CatMorphism(m) => {
            let mut out = head(m.name(), m.source().name(), m.target().name(), "");
            for (a, b) in m.sort_map() {
                if default_sort(a, m.target()).as_ref() != Some(b) {
                    let _ = writeln!(out, "  sort {} -> {};", q(a), q(b));
                }
            }
            for l in images(m.fun_map().iter().map(|(f, p)| (f, path(p)))) {
                let _ = writeln!(out, "  {l}");
            }
            out.push_str("}\n");
            out
        }
        Entity::InstanceMorphism(m) => {
            let mut out = head(m.name(), m.source().name(), m.target().name(), &via(&[m.base_map()]));
            for l in images(m.images().iter().map(|(g, t)| (g, term(t)))) {
                let _ = writeln!(out, "  {l}");
            }
            out.push_str("}\n");
            out
        }
        Entity::UncurriedMorphism(m) => {
            let mut out = head(m.name(), m.source().name(), m.target().name(), "");
            for l in images(m.images().iter().map(|(p, c)| (p, cross(c)))) {
                let _ = writeln!(out, "  {l}");
            }
            out.push_str("}\n");
            out
        }
        Entity::CurriedMorphism(m) => {
            let mut out = head(m.name(), m.source().name(), m.target().name(), &via(&[m.left_map(), m.right_map()]));
            for (c, imgs) in m.components() {
                if !imgs.is_empty() {
                    block(&mut out, "  ", &format!("at {}", q(c)), &images(imgs.iter().map(|(g, t)| (g, term(t)))));
                }
            }
            out.push_str("}\n");
            out
        }
    }
}
