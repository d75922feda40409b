//! Insert chains of (-2)-curves between two adjacent (-2)-curves and check
//! the exact difference identities at every step.

use kdg::transforms::{self, InsertionSite};
use kdg::WeightedDualGraph;

fn main() -> kdg::Result<()> {
    // (-3) - (-2) - (-2) - (-4)
    let mut g = WeightedDualGraph::new();
    let ids = ["x", "p", "q", "y"];
    let selfs = [-3, -2, -2, -4];
    for (id, s) in ids.iter().zip(selfs) {
        g.add_vertex(*id, 0, s)?;
    }
    for i in 1..4 {
        g.add_edge(i - 1, i, 1)?;
    }

    let site = InsertionSite::new(1, 2);
    println!("inserting between p and q");
    for n in [1, 2, 3, 5, 10, 50] {
        let r = transforms::verify_insertion(&g, site, n)?;
        println!(
            "n={n:<3} -K^2 {} -> {}   m_p {} -> {}   all identities hold: {}",
            r.k_squared_before, r.k_squared_after, r.m1, r.m1_prime, r.all_hold
        );
        for c in r.checks.iter().filter(|c| !c.holds) {
            println!("   failed {}: {} vs {}", c.name, c.lhs, c.rhs);
        }
    }

    // symmetric props carry equal coefficients, and then -K² does not move
    let g = kdg::families::FamilySpec::DoubleThree { n: 2 }.generate()?;
    for site in transforms::insertion_sites(&g) {
        let r = transforms::verify_insertion(&g, site, 4)?;
        println!(
            "(-3)-(-2)-(-2)-(-3) at ({}, {}): m = {} on both props, -K^2 {} -> {}",
            g.id(site.first),
            g.id(site.second),
            r.m1,
            r.k_squared_before,
            r.k_squared_after
        );
    }
    Ok(())
}
