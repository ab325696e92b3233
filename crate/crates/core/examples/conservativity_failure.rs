//! A nongenerative presentation that is not conservative, so it does not
//! curry, and its coend grows without bound.

use profpres::bridge::{check_conservative, check_nongenerative, curry};
use profpres::dsl::parse_workspace;
use profpres::prover::Budget;
use profpres::semantics::{coend_compose, uncurried_table};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ws = parse_workspace(include_str!("../corpus/corpus.prof"))?;
    let budget = Budget::default();
    let (p, q) = (ws.uncurried("Papp").expect("Papp"), ws.uncurried("Qapp").expect("Qapp"));
    for u in [p, q] {
        println!("{} nongenerative: {:?}", u.name(), check_nongenerative(u, budget, false)?.status);
    }
    let c = check_conservative(q, budget)?;
    println!("Qapp conservative: {:?}", c.status);
    for w in &c.witnesses {
        println!("  witness {w}");
    }
    match curry(q, budget) {
        Ok(_) => println!("curried unexpectedly"),
        Err(e) => println!("curry: {e}"),
    }
    for depth in 1..=5 {
        let b = budget.with_length(depth);
        let t = coend_compose(&uncurried_table(p, b)?, &uncurried_table(q, b)?)?;
        println!("depth {depth}: {} classes", t.len());
    }
    Ok(())
}
