//! Property suites over random graphs, the family corpus and the enumerated spectrum.
//!
//! Each suite returns a [`SuiteReport`] with the number of checks run and a
//! message per failure. Random graphs come from a seeded rejection sampler,
//! so a given seed always reproduces the same run.

use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::enumeration::{self, EnumBounds, SpectrumEntry};
use crate::error::{Error, Result};
use crate::families::{self, FamilySpec};
use crate::graph::{VertexData, WeightedDualGraph};
use crate::invariants::{self, Classification};
use crate::linalg;
use crate::rational::{int, rat, Rational};
use crate::transforms::{self, LimitValue};

pub const DEFAULT_SEED: u64 = 0x6b64_6721;
pub const DEFAULT_TRIALS: usize = 200;

/// Insertion lengths exercised at every site.
pub const INSERTION_LENGTHS: &[usize] = &[1, 2, 3, 5, 10];

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn new(name: &str) -> Self {
        SuiteReport {
            name: name.to_string(),
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    /// Count an operation that must succeed, keeping its value.
    pub fn expect<T>(&mut self, r: Result<T>, what: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.cases += 1;
                self.failures.push(format!("{}: {e}", what()));
                None
            }
        }
    }

    pub fn merge(&mut self, other: SuiteReport) {
        self.cases += other.cases;
        self.failures.extend(other.failures);
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for f in &self.failures {
            let _ = writeln!(s, "FAIL {f}");
        }
        let _ = writeln!(
            s,
            "suite {}: {} checks, {} passed, {} failed",
            self.name,
            self.cases,
            self.cases - self.failures.len(),
            self.failures.len()
        );
        s
    }
}

/// Draw a connected negative-definite minimal graph within `b`.
///
/// Half of the vertices are (-2)-curves so that insertion sites and strings
/// are common; the rest are uniform over the allowed vertex data. Candidates
/// that are not negative definite are rejected.
pub fn random_admissible(rng: &mut StdRng, b: &EnumBounds) -> Result<WeightedDualGraph> {
    b.check()?;
    let types = b.vertex_types();
    let minus_two = VertexData::new(0, -2);
    for _ in 0..100_000 {
        let n = rng.gen_range(1..=b.max_vertices);
        let vertices: Vec<VertexData> = (0..n)
            .map(|_| {
                if rng.gen_bool(0.5) {
                    minus_two
                } else {
                    types[rng.gen_range(0..types.len())]
                }
            })
            .collect();
        let mut edges = Vec::new();
        let mult = |rng: &mut StdRng| {
            if b.max_edge_multiplicity > 1 && rng.gen_bool(0.15) {
                rng.gen_range(2..=b.max_edge_multiplicity)
            } else {
                1
            }
        };
        for v in 1..n {
            let u = rng.gen_range(0..v);
            edges.push((u, v, mult(rng)));
        }
        for v in 1..n {
            for u in 0..v {
                if !edges.iter().any(|&(a, c, _)| (a, c) == (u, v)) && rng.gen_bool(0.08) {
                    edges.push((u, v, mult(rng)));
                }
            }
        }
        let g = WeightedDualGraph::from_parts(vertices, &edges)?;
        if g.require_admissible().is_ok() {
            return Ok(g);
        }
    }
    Err(Error::Assertion("rejection sampler found no admissible graph".into()))
}

/// Bounds used for random graphs in [`lemmas_suite`].
pub fn random_bounds() -> EnumBounds {
    EnumBounds::new(7, -5, 1, 2)
}

pub fn random_graphs(seed: u64, trials: usize, b: &EnumBounds) -> Result<Vec<WeightedDualGraph>> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..trials).map(|_| random_admissible(&mut rng, b)).collect()
}

/// `M m = c`, `-K² >= 0`, nonzero `-K² >= 1/3`, and the weighted-sum bound.
pub fn check_canonical(g: &WeightedDualGraph, label: &str, report: &mut SuiteReport) {
    let Some(k) = report.expect(invariants::canonical_cycle(g), || format!("{label}: canonical cycle"))
    else {
        return;
    };
    let mk = linalg::RatMatrix::mul_vec(&g.intersection_matrix(), &k.coefficients);
    report.record(mk.ok().as_ref() == Some(&g.adjunction_degrees()), || {
        format!("{label}: M m != c")
    });
    let Some(k2) = report.expect(invariants::k_squared(g), || format!("{label}: -K²")) else {
        return;
    };
    report.record(!k2.is_negative(), || format!("{label}: -K² = {k2} < 0"));
    report.record(k2.is_zero() || k2 >= rat(1, 3), || {
        format!("{label}: -K² = {k2} in (0, 1/3)")
    });
    let w = invariants::weighted_sum_bound(g, &k2);
    report.record(w.holds, || format!("{label}: -K² = {k2} < weighted sum {}", w.rhs));
}

/// Verify the insertion identities at up to `max_sites` sites of `g`.
pub fn check_insertions(g: &WeightedDualGraph, label: &str, max_sites: usize, report: &mut SuiteReport) {
    for site in transforms::insertion_sites(g).into_iter().take(max_sites) {
        for &n in INSERTION_LENGTHS {
            let what = || format!("{label}: insertion at ({}, {}) n={n}", g.id(site.first), g.id(site.second));
            let result = transforms::verify_insertion(g, site, n);
            if let Err(Error::Precondition(_)) = result {
                // the grown graph left the negative definite range
                continue;
            }
            if let Some(r) = report.expect(result, what) {
                report.record(r.all_hold, || {
                    let bad: Vec<&str> = r
                        .checks
                        .iter()
                        .filter(|c| !c.holds)
                        .map(|c| c.name.as_str())
                        .collect();
                    format!("{}: {}", what(), bad.join(", "))
                });
            }
        }
    }
}

/// Every connected induced subgraph has `-K²` at most that of `g`.
pub fn check_subgraph_monotonicity(g: &WeightedDualGraph, label: &str, report: &mut SuiteReport) {
    let n = g.num_vertices();
    if n > 10 {
        return;
    }
    let Some(full) = report.expect(invariants::k_squared(g), || format!("{label}: -K²")) else {
        return;
    };
    for mask in 1u32..(1 << n) - 1 {
        let keep: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let Ok(sub) = g.subgraph(&keep) else { continue };
        if !sub.is_connected() {
            continue;
        }
        if let Some(k2) = report.expect(invariants::k_squared(&sub), || format!("{label}: subgraph {keep:?}")) {
            report.record(k2 <= full, || {
                format!("{label}: subgraph {keep:?} has -K² = {k2} > {full}")
            });
        }
    }
}

/// Random-graph and family-corpus checks of the canonical cycle, the
/// insertion identities and subgraph monotonicity.
pub fn lemmas_suite(seed: u64, trials: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("lemmas");
    for spec in families::family_corpus(3, 3) {
        let g = spec.generate()?;
        let label = spec.to_string();
        check_canonical(&g, &label, &mut report);
        check_insertions(&g, &label, 2, &mut report);
    }
    for (t, g) in random_graphs(seed, trials, &random_bounds())?.iter().enumerate() {
        let label = format!("random #{t} [{}]", enumeration::encode(g));
        check_canonical(g, &label, &mut report);
        check_insertions(g, &label, 3, &mut report);
        check_subgraph_monotonicity(g, &label, &mut report);
    }
    Ok(report)
}

/// Closed form, admissibility, coefficient formula and string limits of one family member.
pub fn check_family(spec: &FamilySpec, report: &mut SuiteReport) {
    let label = spec.to_string();
    let Some(g) = report.expect(spec.generate(), || format!("{label}: generate")) else {
        return;
    };
    report.record(g.validate().is_admissible(), || format!("{label}: not admissible"));
    let Some(k2) = report.expect(invariants::k_squared(&g), || format!("{label}: -K²")) else {
        return;
    };
    let closed = spec.closed_form_k2();
    report.record(k2 == closed, || format!("{label}: -K² = {k2}, closed form {closed}"));

    if let Some(coeff) = spec.two_curve_coefficient() {
        if let Some(k) = report.expect(invariants::canonical_cycle(&g), || format!("{label}: K")) {
            for id in ["e1", "e2"] {
                let i = g.index_of(id).expect("two-curve vertices");
                let got = &k.coefficients[i];
                report.record(*got == coeff, || {
                    format!("{label}: coefficient of {id} is {got}, formula {coeff}")
                });
            }
        }
    }

    for &param in spec.stretchable_params() {
        let Ok(s) = spec.string_for_param(&g, param) else {
            continue;
        };
        if !s.is_stretchable() {
            continue;
        }
        let what = || format!("{label}: limit in {param}");
        let Some(expected) = report.expect(spec.expected_limit(&[param]), what) else {
            continue;
        };
        if let Some(out) = report.expect(transforms::limit_k_squared(&g, std::slice::from_ref(&s)), what) {
            report.record(out.value == expected, || {
                format!("{}: {} expected {expected}", what(), out.value)
            });
        }
        if let Some(m) = report.expect(transforms::mobius_limit_crosscheck(&g, &s), what) {
            report.record(m == expected, || format!("{}: Möbius fit {m} expected {expected}", what()));
        }
    }
}

pub fn families_suite(max_triple: u64, max_other: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("families");
    for spec in families::family_corpus(max_triple, max_other) {
        check_family(&spec, &mut report);
    }
    Ok(report)
}

/// Bounds used by the spectrum suite.
pub fn spectrum_bounds() -> EnumBounds {
    EnumBounds::new(4, -5, 1, 2)
}

/// Spectrum facts on a list of enumerated entries.
pub fn check_spectrum(entries: &[SpectrumEntry], report: &mut SuiteReport) {
    let third = rat(1, 3);
    let one = Rational::one();
    for e in entries {
        let label = &e.encoding;
        report.record(!e.k_squared.is_negative(), || format!("{label}: -K² < 0"));
        if e.k_squared.is_zero() {
            report.record(e.classification == Classification::RationalDouble, || {
                format!("{label}: -K² = 0 but class {}", e.classification)
            });
            continue;
        }
        report.record(e.k_squared >= third, || format!("{label}: -K² = {} < 1/3", e.k_squared));
        if e.k_squared == third {
            report.record(label == "0:-3|", || format!("{label}: attains 1/3"));
        }
        if e.k_squared < one {
            report.record(
                e.classification == Classification::RationalTriple && e.z_squared == -3,
                || format!("{label}: -K² = {} < 1 with class {} and Z² = {}", e.k_squared, e.classification, e.z_squared),
            );
        }
        if e.classification.is_rational() {
            let m = int(-e.z_squared);
            report.record(e.k_squared >= &m - int(4), || {
                format!("{label}: -K² = {} below multiplicity bound", e.k_squared)
            });
            report.record(e.k_squared >= &m + int(1) - int(5), || {
                format!("{label}: -K² = {} below embedding-dimension bound", e.k_squared)
            });
        }
    }
}

pub fn spectrum_suite(b: &EnumBounds) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("spectrum");
    let entries = enumeration::enumerate(b)?;
    check_spectrum(&entries, &mut report);
    for e in &entries {
        let g = e.graph()?;
        let k2 = &e.k_squared;
        let w = invariants::weighted_sum_bound(&g, k2);
        report.record(w.holds, || format!("{}: weighted-sum bound fails", e.encoding));
    }
    Ok(report)
}

/// Limit of a family along a parameter, with the closed-form expectation.
pub fn family_limit(spec: &FamilySpec, params: &[&str]) -> Result<(LimitValue, LimitValue)> {
    let g = spec.generate()?;
    let strings = params
        .iter()
        .map(|p| spec.string_for_param(&g, p))
        .collect::<Result<Vec<_>>>()?;
    let got = transforms::limit_k_squared(&g, &strings)?.value;
    Ok((got, spec.expected_limit(params)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampler_is_reproducible() {
        let a = random_graphs(7, 20, &random_bounds()).unwrap();
        let b = random_graphs(7, 20, &random_bounds()).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|g| g.validate().is_admissible()));
    }

    #[test]
    fn small_suites_pass() {
        let r = lemmas_suite(1, 10).unwrap();
        assert!(r.passed(), "{}", r.to_text());
        let r = families_suite(3, 2).unwrap();
        assert!(r.passed(), "{}", r.to_text());
        let r = spectrum_suite(&EnumBounds::new(3, -4, 1, 2)).unwrap();
        assert!(r.passed(), "{}", r.to_text());
    }
}
