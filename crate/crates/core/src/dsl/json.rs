use serde_json::{json, Value};

use crate::presentations::InstancePresentation;
use crate::syntax::{CatMorphism, CatPresentation};

use super::Entity;

fn category(c: &CatPresentation) -> Value {
    let mut v = json!({
        "kind": "category",
        "name": c.name(),
        "sorts": c.sorts(),
        "funs": c.funs().iter().map(|f| json!({ "name": f.name, "src": f.src, "tgt": f.tgt })).collect::<Vec<_>>(),
        "eqs": c.eqs().iter().map(|e| json!({ "lhs": e.lhs.to_string(), "rhs": e.rhs.to_string() })).collect::<Vec<_>>(),
    });
    if let Some(order) = c.explicit_order() {
        v["order"] = json!(order);
    }
    v
}

fn inst_body(i: &InstancePresentation) -> (Value, Value) {
    (
        i.gens().iter().map(|g| json!({ "name": g.name, "sort": g.sort })).collect(),
        i.eqs().iter().map(|e| json!({ "lhs": e.lhs.to_string(), "rhs": e.rhs.to_string() })).collect(),
    )
}

fn frame(m: &CatMorphism) -> Value {
    if *m == CatMorphism::identity(m.source().clone()) {
        Value::Null
    } else {
        json!(m.name())
    }
}

pub(crate) fn entity(e: &Entity) -> Value {
    match e {
        Entity::Category(c) => category(c),
        Entity::Instance(i) => {
            let (gens, eqs) = inst_body(i);
            json!({ "kind": "instance", "name": i.name(), "on": i.base().name(), "gens": gens, "eqs": eqs })
        }
        Entity::Uncurried(u) => json!({
            "kind": "uncurried",
            "name": u.name(),
            "left": u.left().name(),
            "right": u.right().name(),
            "pros": u.pros().iter().map(|p| json!({ "name": p.name, "src": p.src, "tgt": p.tgt })).collect::<Vec<_>>(),
            "eqs": u.eqs().iter().map(|e| json!({ "lhs": e.lhs.to_string(), "rhs": e.rhs.to_string() })).collect::<Vec<_>>(),
        }),
        Entity::Curried(p) => json!({
            "kind": "curried",
            "name": p.name(),
            "left": p.left().name(),
            "right": p.right().name(),
            "at": p.instances().iter().map(|(c, i)| {
                let (gens, eqs) = inst_body(i);
                json!({ "sort": c, "gens": gens, "eqs": eqs })
            }).collect::<Vec<_>>(),
            "act": p.actions().iter().map(|(f, imgs)| json!({
                "fun": f,
                "images": imgs.iter().map(|(g, t)| json!({ "gen": g, "term": t.to_string() })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        }),
        Entity::CatMorphism(m) => json!({
            "kind": "category_morphism",
            "name": m.name(),
            "source": m.source().name(),
            "target": m.target().name(),
            "sorts": m.sort_map().iter().map(|(a, b)| json!({ "from": a, "to": b })).collect::<Vec<_>>(),
            "funs": m.fun_map().iter().map(|(f, p)| json!({ "from": f, "to": p.to_string() })).collect::<Vec<_>>(),
        }),
        Entity::InstanceMorphism(m) => json!({
            "kind": "instance_morphism",
            "name": m.name(),
            "source": m.source().name(),
            "target": m.target().name(),
            "via": frame(m.base_map()),
            "images": m.images().iter().map(|(g, t)| json!({ "gen": g, "term": t.to_string() })).collect::<Vec<_>>(),
        }),
        Entity::UncurriedMorphism(m) => json!({
            "kind": "uncurried_morphism",
            "name": m.name(),
            "source": m.source().name(),
            "target": m.target().name(),
            "images": m.images().iter().map(|(p, c)| json!({ "pro": p, "path": c.to_string() })).collect::<Vec<_>>(),
        }),
        Entity::CurriedMorphism(m) => json!({
            "kind": "curried_morphism",
            "name": m.name(),
            "source": m.source().name(),
            "target": m.target().name(),
            "via_left": frame(m.left_map()),
            "via_right": frame(m.right_map()),
            "at": m.components().iter().map(|(c, imgs)| json!({
                "sort": c,
                "images": imgs.iter().map(|(g, t)| json!({ "gen": g, "term": t.to_string() })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        }),
    }
}
