//! Read and write dual graphs as JSON, compact encodings and DOT.

use kdg::enumeration;
use kdg::families::FamilySpec;
use kdg::WeightedDualGraph;

fn main() -> kdg::Result<()> {
    let text = r#"{
        "vertices": [
            {"id": "x", "genus": 0, "self": -3},
            {"id": "a", "genus": 0, "self": -2},
            {"id": "b", "genus": 0, "self": -2}
        ],
        "edges": [{"a": "x", "b": "a", "m": 1}, {"a": "a", "b": "b", "m": 1}]
    }"#;
    let g = WeightedDualGraph::from_json(text)?;
    println!("admissible: {}", g.validate().is_admissible());
    println!("encoding:   {}", enumeration::encode(&g));
    println!("round trip: {}", WeightedDualGraph::from_json(&g.to_json())? == g);

    let v = FamilySpec::TripleV { n: 1 }.generate()?;
    println!("\nV(n=1) as JSON:\n{}", v.to_json());
    println!("\nV(n=1) as DOT:\n{}", v.to_dot());

    // a (-1)-curve is rejected with the offending vertex named
    let bad = r#"{"vertices": [{"id": "c", "genus": 0, "self": -1}]}"#;
    let g = WeightedDualGraph::from_json(bad)?;
    if let Err(e) = g.require_admissible() {
        println!("rejected: {e}");
    }
    Ok(())
}
