//! Uncurry a curried presentation, check the result, and curry it back.

use profpres::bridge::{check_conservative, check_nongenerative, round_trip, uncurry};
use profpres::dsl::{parse_workspace, render, Entity};
use profpres::prover::Budget;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ws = parse_workspace(include_str!("../corpus/corpus.prof"))?;
    let budget = Budget::default();
    for name in ["Pc", "Qc", "Rc"] {
        let p = ws.curried(name).expect("curried");
        let u = uncurry(p);
        print!("{}", render(&Entity::from(u.clone())));
        println!("strictly nongenerative: {:?}", check_nongenerative(&u, budget, true)?.status);
        println!("conservative: {:?}", check_conservative(&u, budget)?.status);
        let rt = round_trip(p, budget)?;
        println!("{name} ~ {}: {}\n", rt.curried.name(), rt.is_iso());
    }
    Ok(())
}
