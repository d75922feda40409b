//! Limits of -K² as (-2)-strings are stretched, computed by contracting the
//! strings in the limit and cross-checked with a Möbius fit of the values
//! at finite lengths.

use kdg::families::FamilySpec;
use kdg::transforms;

fn show(spec: FamilySpec, params: &[&str]) -> kdg::Result<()> {
    let g = spec.generate()?;
    let strings = params
        .iter()
        .map(|p| spec.string_for_param(&g, p))
        .collect::<kdg::Result<Vec<_>>>()?;
    let got = transforms::limit_k_squared(&g, &strings)?;
    let expected = spec.expected_limit(params)?;
    println!("{spec:<28} stretching {params:?}: limit {}, expected {expected}", got.value);
    if let [s] = strings.as_slice() {
        println!("{:<28} Möbius fit agrees: {}", "", transforms::mobius_limit_crosscheck(&g, s)? == got.value);
    }
    Ok(())
}

fn main() -> kdg::Result<()> {
    // accumulation points m/(m+1) and 1 below 1
    for n in 0..4 {
        show(FamilySpec::TripleII { n, s: 2 }, &["s"])?;
    }
    show(FamilySpec::TripleII { n: 1, s: 2 }, &["n"])?;
    show(FamilySpec::TripleI { n: 1, s: 1, t: 0 }, &["n", "s"])?;

    // k/m plus an integer from two genus-k/2 curves
    show(FamilySpec::TwoCurve { k: 2, m: 1, n: 3 }, &["n"])?;
    show(FamilySpec::TwoCurve { k: 4, m: 2, n: 3 }, &["n"])?;

    // r²/k from a single higher-genus curve with one or two tails
    show(FamilySpec::Tail { r: 3, k: 2, n: 2 }, &["n"])?;
    show(FamilySpec::TwoTail { r: 4, k: 4, n: 2, s: 2 }, &["n", "s"])?;

    // VI has no finite limit
    show(FamilySpec::TripleVI { n: 2 }, &["n"])?;
    Ok(())
}
