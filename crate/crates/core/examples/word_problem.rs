//! Decide an equation between paths and replay the derivation.

use profpres::dsl::parse_workspace;
use profpres::prover::{derivation_json, replay, Budget, Prover};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ws = parse_workspace(include_str!("../corpus/corpus.prof"))?;
    let m = ws.category("M").expect("M");
    let prover = Prover::for_category(m, Budget::default())?;
    println!("complete rewrite system: {}", prover.is_exact());
    let (lhs, rhs) = (m.path("f.f.f.g")?, m.path("f.g.f.f")?);
    let outcome = prover.prove_paths(&lhs, &rhs)?;
    println!("{lhs} = {rhs}: {:?}", outcome.verdict);
    let d = outcome.witness.expect("a derivation");
    replay(prover.theory(), &d)?;
    println!("{}", serde_json::to_string_pretty(&derivation_json(prover.theory(), &d))?);
    Ok(())
}
