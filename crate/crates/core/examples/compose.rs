//! Compose two curried presentations and print the result.

use profpres::compose::compose_curried;
use profpres::dsl::{parse_workspace, render, Entity};
use profpres::presentations::validate_curried;
use profpres::prover::Budget;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ws = parse_workspace(include_str!("../corpus/corpus.prof"))?;
    let (p, q) = (ws.curried("Pc").expect("Pc"), ws.curried("Qc").expect("Qc"));
    let pq = compose_curried(p, q)?;
    print!("{}", render(&Entity::from(pq.clone())));
    print!("{}", validate_curried(&pq, Budget::default())?);
    Ok(())
}
