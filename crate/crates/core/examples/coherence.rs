//! Associators, unitors, pentagon and triangle for a cycle of curried
//! presentations.

use profpres::compose::coherence_suite;
use profpres::dsl::parse_workspace;
use profpres::prover::Budget;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ws = parse_workspace(include_str!("../corpus/corpus.prof"))?;
    let ps: Vec<_> = ["Pc", "Qc", "Rc"].iter().map(|n| ws.curried(n).expect("curried").as_ref()).collect();
    for law in coherence_suite(&ps, Budget::default())? {
        println!("{:<5} {}", if law.holds() { "ok" } else { "FAIL" }, law.law);
    }
    Ok(())
}
