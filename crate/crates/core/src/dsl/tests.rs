use super::*;

const CORPUS: &str = include_str!("../../corpus/corpus.prof");

#[test]
fn corpus_parses_and_round_trips() {
    let ws = parse_workspace(CORPUS).unwrap();
    assert!(ws.len() >= 20);
    let again = parse_workspace(&ws.render()).unwrap();
    assert_eq!(ws, again);
    assert_eq!(ws.render(), again.render());
    for e in ws.entities() {
        let alone: String = e.render();
        assert!(alone.ends_with("}\n"), "{alone}");
    }
}

#[test]
fn small_examples() {
    let ws = parse_workspace("category M { sorts *; fun f : * -> *; fun g : * -> *; eq f.g = g.f; }").unwrap();
    let m = ws.category("M").unwrap();
    assert_eq!((m.sorts().len(), m.funs().len(), m.eqs().len()), (1, 2, 1));
    assert!(ws.get("M").unwrap().render().contains("eq f.g = g.f;"));
    let e = parse_workspace("category E { sorts *; }").unwrap();
    assert!(e.category("E").unwrap().funs().is_empty());
    let ws = parse_workspace("category N { sorts *; fun s : * -> *; } instance I on N { gen x : *; gen y : *; eq x.s = x; }").unwrap();
    assert_eq!(ws.instance("I").unwrap().gens().len(), 2);
    let ws = parse_workspace("category E { sorts *; fun e : * -> *; eq e.e = id(*); }").unwrap();
    assert!(ws.get("E").unwrap().render().contains("eq e.e = id(*);"));
}

#[test]
fn forward_references_and_order() {
    let ws = parse_workspace("instance I on N { gen x : *; } category N { sorts *; fun s : * -> *; fun u : * -> *; order u, s; }").unwrap();
    assert_eq!(ws.names().map(|n| n.as_str()).collect::<Vec<_>>(), ["I", "N"]);
    assert_eq!(ws.category("N").unwrap().explicit_order().unwrap()[0].as_str(), "u");
    let again = parse_workspace(&ws.render()).unwrap();
    assert_eq!(ws, again);
}

#[test]
fn quoted_names_survive() {
    let src = "category \"my cat\" { sorts *; fun \"f^-1\" : * -> *; }";
    let ws = parse_workspace(src).unwrap();
    let text = ws.render();
    assert!(text.contains("\"f^-1\""));
    assert_eq!(parse_workspace(&text).unwrap(), ws);
}

fn error_at(src: &str) -> (DslError, String) {
    let e = parse_workspace(src).unwrap_err();
    let s = e.span();
    (e.clone(), src[s.start..s.end].to_string())
}

#[test]
fn errors_point_at_the_offending_token() {
    let (e, tok) = error_at("category M { sorts *; fun f : * -> *; eq f.h = f; }");
    assert!(matches!(e, DslError::Resolve(_)));
    assert_eq!(tok, "h");
    let (e, tok) = error_at("category M { sorts *; fun f : * -> * }");
    assert!(matches!(e, DslError::Parse(_)));
    assert_eq!(tok, "}");
    let (e, tok) = error_at("category M { sorts *; fun f : * => *; }");
    assert!(matches!(e, DslError::Lex(_)), "{e}");
    assert_eq!(tok, ">");
    let (e, tok) = error_at("category M { sorts *; } instance I on Q { }");
    assert!(matches!(e, DslError::Resolve(_)));
    assert_eq!(tok, "Q");
    let (_, tok) = error_at("category M { sorts a, b; fun f : a -> b; fun g : a -> b; eq f.g = f; }");
    assert_eq!(tok, "g");
    let (e, _) = error_at("category M { sorts *; } /* open");
    assert_eq!((e.span().line, e.span().column), (1, 25));
    let (_, tok) = error_at("category M { sorts *; }\ncategory M { sorts *; }");
    assert_eq!(tok, "M");
    assert_eq!(parse_workspace("category M { sorts *; }\ncategory M { sorts *; }").unwrap_err().span().line, 2);
}

#[test]
fn morphism_kinds_resolve() {
    let ws = parse_workspace(CORPUS).unwrap();
    assert_eq!(ws.cat_morphism("F").unwrap().fun_map()["g"].to_string(), "f.g");
    assert!(ws.instance_morphism("I_shift").is_some());
    assert!(ws.uncurried_morphism("Pu_shift").is_some());
    assert!(ws.curried_morphism("Qc_shift").is_some());
    let bad = format!("{CORPUS}\nmorphism X : M -> Pc {{ }}");
    assert!(parse_workspace(&bad).unwrap_err().to_string().contains("cannot map a category to a curried"));
}

#[test]
fn json_is_deterministic_and_tagged() {
    let ws = parse_workspace(CORPUS).unwrap();
    let m = ws.get("M").unwrap();
    let text = String::from_utf8(export_json(m)).unwrap();
    assert!(text.starts_with("{\n  \"kind\": \"category\""));
    let compact = serde_json::to_string(&m.to_json()).unwrap();
    assert!(compact.contains(r#""funs":[{"name":"f","src":"*","tgt":"*"},{"name":"g","src":"*","tgt":"*"}]"#));
    let pc = serde_json::to_string(&ws.get("Pc").unwrap().to_json()).unwrap();
    assert!(pc.contains(r#""at":[{"sort":"*""#) && pc.contains(r#""act":[{"fun":"f""#));
    for e in ws.entities() {
        assert_eq!(export_json(e), export_json(&e.clone()));
    }
}
