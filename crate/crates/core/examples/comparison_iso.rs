//! Compare the coend of two tables with the table of the composite
//! presentation, and check units against hom tables.

use profpres::compose::unit_presentation;
use profpres::dsl::parse_workspace;
use profpres::prover::Budget;
use profpres::semantics::{check_mu_iso, check_unit_hom};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ws = parse_workspace(include_str!("../corpus/corpus.prof"))?;
    let budget = Budget::default().with_length(4);
    let (p, q) = (ws.curried("Pc").expect("Pc"), ws.curried("Qc").expect("Qc"));
    print!("Pc, Qc: {}", check_mu_iso(p, q, budget)?);
    let u = unit_presentation(p.left());
    println!("U, Pc: {}", check_mu_iso(&u, p, budget)?.is_iso());
    let u = unit_presentation(p.right());
    println!("Pc, U: {}", check_mu_iso(p, &u, budget)?.is_iso());
    for name in ["M", "N", "E"] {
        let r = check_unit_hom(ws.category(name).expect("category"), budget)?;
        println!("unit {name}: {}", r.to_string().lines().next().unwrap_or_default());
    }
    Ok(())
}
