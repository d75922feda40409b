//! -K² of the rational triple point families, computed from the graph and
//! compared with the closed forms.

use kdg::families::{self, FamilySpec};
use kdg::rational;

fn main() -> kdg::Result<()> {
    let fixed = [FamilySpec::TripleVII, FamilySpec::TripleVIII, FamilySpec::TripleIX];
    for spec in fixed {
        let k2 = kdg::invariants::k_squared(&spec.generate()?)?;
        println!("{spec:<6} -K^2 = {k2}");
    }

    let sweeps = [
        (FamilySpec::TripleII { n: 0, s: 2 }, "n", 0),
        (FamilySpec::TripleIV { n: 0 }, "n", 0),
        (FamilySpec::TripleV { n: 0 }, "n", 0),
        (FamilySpec::TripleVI { n: 1 }, "n", 1),
    ];
    for (base, param, from) in sweeps {
        println!("\n{} as {param} grows:", base.name());
        for row in families::sweep(&base, param, from..=8)? {
            println!(
                "  {param}={:<2} {:>8} ~ {:<14} closed form {:>8}  {}",
                row.value,
                rational::to_canonical(&row.k_squared),
                rational::to_decimal(&row.k_squared, 10),
                rational::to_canonical(&row.closed_form),
                if row.matches() { "ok" } else { "MISMATCH" }
            );
        }
    }
    Ok(())
}
