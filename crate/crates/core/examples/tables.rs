//! Bounded set-valued semantics: the table of a composite and the growth of
//! a coend that never stabilizes.

use profpres::compose::compose_curried;
use profpres::dsl::parse_workspace;
use profpres::prover::Budget;
use profpres::semantics::{coend_compose, curried_table, uncurried_table};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ws = parse_workspace(include_str!("../corpus/corpus.prof"))?;
    let pq = compose_curried(ws.curried("Pc").expect("Pc"), ws.curried("Qc").expect("Qc"))?;
    print!("{}", curried_table(&pq, Budget::default().with_length(4))?);
    let (pu, qu) = (ws.uncurried("Pu").expect("Pu"), ws.uncurried("Qu").expect("Qu"));
    for depth in 1..=6 {
        let budget = Budget::default().with_length(depth);
        let t = coend_compose(&uncurried_table(pu, budget)?, &uncurried_table(qu, budget)?)?;
        println!("depth {depth}: {} classes, stabilized {}", t.len(), t.stabilized());
    }
    Ok(())
}
