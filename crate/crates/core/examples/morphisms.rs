//! Validate morphisms, and compare two that are provably equal without being
//! syntactically the same.

use profpres::dsl::parse_workspace;
use profpres::presentations::{morphisms_equal, validate_morphism, AnyMorphism};
use profpres::prover::Budget;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ws = parse_workspace(include_str!("../corpus/corpus.prof"))?;
    let budget = Budget::default();
    for name in ["F", "S_fg", "I_shift", "Pc_shift", "Qc_shift", "Pu_shift"] {
        let m = match ws.get(name).expect("declared") {
            profpres::dsl::Entity::CatMorphism(m) => AnyMorphism::Cat(m),
            profpres::dsl::Entity::InstanceMorphism(m) => AnyMorphism::Instance(m),
            profpres::dsl::Entity::UncurriedMorphism(m) => AnyMorphism::Uncurried(m),
            profpres::dsl::Entity::CurriedMorphism(m) => AnyMorphism::Curried(m),
            _ => unreachable!(),
        };
        print!("{}", validate_morphism(m, budget)?);
    }
    let (a, b) = (ws.cat_morphism("S_fg").expect("S_fg"), ws.cat_morphism("S_gf").expect("S_gf"));
    let eq = morphisms_equal(AnyMorphism::Cat(a), AnyMorphism::Cat(b), budget)?;
    println!("S_fg == S_gf structurally: {}", a == b);
    println!("S_fg ~ S_gf: {:?}", eq.verdict);
    Ok(())
}
