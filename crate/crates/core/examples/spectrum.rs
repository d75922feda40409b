//! Enumerate small dual graphs up to isomorphism and list the values of -K²
//! in [0, 1].

use kdg::enumeration::{self, EnumBounds};
use kdg::rational::int;

fn main() -> kdg::Result<()> {
    let bounds = EnumBounds::new(4, -5, 1, 2);
    let entries = enumeration::enumerate(&bounds)?;
    println!("{} graphs with at most 4 vertices, self >= -5, genus <= 1, multiplicity <= 2\n", entries.len());

    let report = enumeration::spectrum_report(&entries, &int(0), &int(1));
    print!("{}", report.to_text());

    println!("\ngraphs with 0 < -K^2 < 1:");
    for e in enumeration::below_one(&entries) {
        println!("  {:<40} {:>6}  Z^2 = {}", e.encoding, e.k_squared.to_string(), e.z_squared);
    }
    Ok(())
}
