//! Parse a workspace, render it back, and export it as JSON.

use profpres::dsl::parse_workspace;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = include_str!("../corpus/corpus.prof");
    let ws = parse_workspace(text)?;
    let again = parse_workspace(&ws.render())?;
    println!("{} entities, round trip identical: {}", ws.len(), again.render() == ws.render());
    if std::env::args().any(|a| a == "--json") {
        println!("{}", serde_json::to_string_pretty(&ws.to_json())?);
    } else {
        print!("{}", ws.render());
    }
    Ok(())
}
