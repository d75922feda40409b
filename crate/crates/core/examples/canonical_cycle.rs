//! Build a dual graph by hand and print its numerical invariants.
//!
//! The graph is an elliptic curve of self-intersection -1 (minimality only
//! rules out rational (-1)-curves) joined to a (-3)-curve and a (-2)-chain.

use kdg::invariants::{self, InvariantReport};
use kdg::WeightedDualGraph;

fn main() -> kdg::Result<()> {
    let mut g = WeightedDualGraph::new();
    let e = g.add_vertex("E", 1, -1)?;
    let x = g.add_vertex("x", 0, -3)?;
    let a = g.add_vertex("a", 0, -2)?;
    let b = g.add_vertex("b", 0, -2)?;
    g.add_edge(e, x, 1)?;
    g.add_edge(x, a, 1)?;
    g.add_edge(a, b, 1)?;

    let report = InvariantReport::compute(&g)?;
    print!("{}", report.to_text(&g));

    // K·Z and Z² give p_a(Z) through adjunction
    let z = invariants::fundamental_cycle(&g)?;
    println!("p_a(Z) from the cycle itself: {}", invariants::cycle_pa(&g, &z)?);

    // the single (-3)-curve is the smallest nonzero value
    let mut x31 = WeightedDualGraph::new();
    x31.add_vertex("x", 0, -3)?;
    println!("\nsingle (-3)-curve: -K^2 = {}", invariants::k_squared(&x31)?);
    Ok(())
}
