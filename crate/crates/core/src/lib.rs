pub mod bridge;
pub mod cli;
pub mod compose;
pub mod dsl;
#[cfg(test)]
mod fixtures;
pub mod presentations;
pub mod prover;
pub mod semantics;
pub mod syntax;
