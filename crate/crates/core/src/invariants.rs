//! Numerical invariants of a dual graph.
//!
//! The numerical canonical cycle `K = Σ m_i A_i` is the unique rational
//! cycle with `K·A_i = c_i` for the adjunction degrees `c`, i.e. the
//! solution of `M m = c` for the intersection matrix `M`. Everything else
//! here (`-K²`, the fundamental cycle, arithmetic genera, the numerical
//! index, the classification and the inequality checks) is derived from it
//! and from `M`.

use std::fmt::{self, Write as _};

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Cycle, WeightedDualGraph};
use crate::linalg;
use crate::rational::{self, int, rat, Rational};

/// Default multiple of `Z` searched by [`pa_max_bounded`].
pub const DEFAULT_PA_BOUND: u32 = 3;

/// Largest number of cycles [`pa_max_bounded`] will visit.
pub const PA_SEARCH_LIMIT: u128 = 20_000_000;

pub fn canonical_cycle(g: &WeightedDualGraph) -> Result<Cycle> {
    g.require_negative_definite()?;
    let m = linalg::solve(&g.intersection_matrix(), &g.adjunction_degrees())?;
    Ok(Cycle::new(m))
}

/// `-K²`, computed as `-mᵀMm` and as `-Σ m_i c_i`; the two must agree.
pub fn k_squared(g: &WeightedDualGraph) -> Result<Rational> {
    let k = canonical_cycle(g)?;
    k_squared_from(g, &k)
}

fn k_squared_from(g: &WeightedDualGraph, k: &Cycle) -> Result<Rational> {
    let quadratic = -linalg::quadratic_form(&g.intersection_matrix(), &k.coefficients)?;
    let linear = -linalg::dot(&k.coefficients, &g.adjunction_degrees());
    if quadratic != linear {
        return Err(Error::Assertion(format!(
            "-K² mismatch: quadratic form {quadratic}, linear form {linear}"
        )));
    }
    Ok(linear)
}

fn integer_matrix(g: &WeightedDualGraph) -> Vec<Vec<i64>> {
    let n = g.num_vertices();
    let mut m = vec![vec![0i64; n]; n];
    for (i, v) in g.vertices().iter().enumerate() {
        m[i][i] = v.self_int;
    }
    for e in g.edges() {
        m[e.a][e.b] = e.mult as i64;
        m[e.b][e.a] = e.mult as i64;
    }
    m
}

/// Minimal integral cycle `Z >= Σ A_i` with `Z·A_i <= 0` for every `i`.
///
/// Computation sequence: start from `Σ A_i` and add the lowest-index `A_i`
/// with `Z·A_i > 0` until none is left.
pub fn fundamental_cycle(g: &WeightedDualGraph) -> Result<Cycle> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    g.require_negative_definite()?;
    let m = integer_matrix(g);
    let n = g.num_vertices();
    let mut z = vec![1i64; n];
    let mut mz: Vec<i64> = (0..n).map(|i| m[i].iter().sum()).collect();
    while let Some(i) = (0..n).find(|&i| mz[i] > 0) {
        z[i] += 1;
        for (j, row) in m.iter().enumerate() {
            mz[j] += row[i];
        }
    }
    Ok(Cycle::from_integers(&z))
}

/// `p_a(D) = 1 + (D² + K·D)/2` with `K·D = Σ d_i c_i`.
pub fn cycle_pa(g: &WeightedDualGraph, d: &Cycle) -> Result<i64> {
    if d.len() != g.num_vertices() {
        return Err(Error::DimensionMismatch {
            expected: g.num_vertices(),
            got: d.len(),
        });
    }
    if !d.is_integral() {
        return Err(Error::NonIntegral);
    }
    let d2 = g.intersect(&d.coefficients, &d.coefficients)?;
    let kd = linalg::dot(&d.coefficients, &g.adjunction_degrees());
    let twice = d2 + kd;
    let two = int(2);
    let half = &twice / &two;
    if !half.is_integer() {
        return Err(Error::Assertion(format!("D² + K·D = {twice} is odd")));
    }
    (half + Rational::one())
        .to_integer()
        .to_i64()
        .ok_or_else(|| Error::Assertion("p_a out of range".into()))
}

/// Largest `p_a(D)` over integral cycles `0 < D <= bound·Z`.
///
/// This is a lower bound for the arithmetic genus of the singularity and is
/// non-decreasing in `bound`.
pub fn pa_max_bounded(g: &WeightedDualGraph, bound: u32) -> Result<i64> {
    if bound < 1 {
        return Err(Error::Domain("search bound must be >= 1".into()));
    }
    g.require_admissible()?;
    let z = fundamental_cycle(g)?.to_integers().expect("integral Z");
    let caps: Vec<i64> = z.iter().map(|&zi| zi * bound as i64).collect();
    let size: u128 = caps.iter().map(|&c| c as u128 + 1).product();
    if size > PA_SEARCH_LIMIT {
        return Err(Error::Bounds(format!(
            "arithmetic genus search over {size} cycles exceeds {PA_SEARCH_LIMIT}"
        )));
    }
    let m = integer_matrix(g);
    let c: Vec<i64> = g.vertices().iter().map(|v| v.adjunction_degree()).collect();
    let n = caps.len();
    let mut d = vec![0i64; n];
    let mut md = vec![0i64; n];
    let mut q = 0i64; // D²
    let mut kd = 0i64; // K·D
    let mut best = i64::MIN;
    // odometer over the box; each step changes one coordinate
    'outer: loop {
        let mut i = 0;
        loop {
            if i == n {
                break 'outer;
            }
            let delta = if d[i] < caps[i] { 1 } else { -d[i] };
            q += 2 * delta * md[i] + delta * delta * m[i][i];
            for (j, row) in m.iter().enumerate() {
                md[j] += delta * row[i];
            }
            kd += delta * c[i];
            d[i] += delta;
            if delta > 0 {
                break;
            }
            i += 1;
        }
        debug_assert!((q + kd) % 2 == 0);
        best = best.max(1 + (q + kd) / 2);
    }
    Ok(best)
}

/// Least positive `r` such that `r·K` is integral.
pub fn numerical_index(g: &WeightedDualGraph) -> Result<u64> {
    let k = canonical_cycle(g)?;
    index_of_cycle(&k)
}

fn index_of_cycle(k: &Cycle) -> Result<u64> {
    rational::denominator_lcm(&k.coefficients)
        .to_u64()
        .ok_or_else(|| Error::Assertion("numerical index does not fit in u64".into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    RationalDouble,
    RationalTriple,
    RationalOther,
    NonRationalOrUnknown,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::RationalDouble => "rational-double",
            Classification::RationalTriple => "rational-triple",
            Classification::RationalOther => "rational-other",
            Classification::NonRationalOrUnknown => "non-rational-or-unknown",
        }
    }

    pub fn is_rational(&self) -> bool {
        !matches!(self, Classification::NonRationalOrUnknown)
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn classify(g: &WeightedDualGraph) -> Result<Classification> {
    g.require_admissible()?;
    let k2 = k_squared(g)?;
    let z = fundamental_cycle(g)?;
    let pa_z = cycle_pa(g, &z)?;
    let z2 = g.intersect(&z.coefficients, &z.coefficients)?;
    classify_from(g, &k2, pa_z, &z2)
}

fn classify_from(
    g: &WeightedDualGraph,
    k2: &Rational,
    pa_z: i64,
    z2: &Rational,
) -> Result<Classification> {
    let all_minus_two = g.vertices().iter().all(|v| v.is_minus_two());
    if k2.is_zero() != all_minus_two {
        return Err(Error::Assertion(format!(
            "-K² = {k2} but all-(-2) configuration is {all_minus_two}"
        )));
    }
    Ok(if k2.is_zero() {
        Classification::RationalDouble
    } else if pa_z == 0 {
        if *z2 == int(-3) {
            Classification::RationalTriple
        } else {
            Classification::RationalOther
        }
    } else {
        Classification::NonRationalOrUnknown
    })
}

/// One instantiated inequality `lhs >= rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub name: String,
    #[serde(with = "crate::rational::serde_str")]
    pub lhs: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub rhs: Rational,
    pub holds: bool,
    /// `lhs == rhs`, reported only where equality is meaningful.
    pub equality: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl BoundCheck {
    fn new(name: &str, lhs: Rational, rhs: Rational, note: Option<String>) -> Self {
        BoundCheck {
            name: name.to_string(),
            holds: lhs >= rhs,
            equality: lhs == rhs,
            lhs,
            rhs,
            note,
        }
    }
}

pub const CHECK_WEIGHTED_SUM: &str = "weighted_sum_lower_bound";
pub const CHECK_UNIVERSAL: &str = "universal_lower_bound";
pub const CHECK_MULTIPLICITY: &str = "multiplicity_bound";
pub const CHECK_EMBEDDING_DIMENSION: &str = "embedding_dimension_bound";
pub const CHECK_ARITHMETIC_GENUS: &str = "arithmetic_genus_bound";

/// Evaluate every inequality that applies to `g`.
pub fn bound_checks(g: &WeightedDualGraph) -> Result<Vec<BoundCheck>> {
    InvariantReport::compute(g).map(|r| r.bound_checks)
}

/// `-K² >= Σ (K·A_i)² / (-A_i²)`.
pub fn weighted_sum_bound(g: &WeightedDualGraph, k2: &Rational) -> BoundCheck {
    let rhs: Rational = g
        .vertices()
        .iter()
        .map(|v| {
            let c = v.adjunction_degree();
            rat(c * c, -v.self_int)
        })
        .sum();
    BoundCheck::new(CHECK_WEIGHTED_SUM, k2.clone(), rhs, None)
}

fn build_checks(
    g: &WeightedDualGraph,
    k2: &Rational,
    class: Classification,
    z2: &Rational,
) -> Result<Vec<BoundCheck>> {
    let mut checks = vec![weighted_sum_bound(g, k2)];

    if k2.is_zero() {
        let mut c = BoundCheck::new(
            CHECK_UNIVERSAL,
            k2.clone(),
            Rational::zero(),
            Some("vacuous: rational double point".into()),
        );
        c.equality = false;
        checks.push(c);
    } else {
        checks.push(BoundCheck::new(CHECK_UNIVERSAL, k2.clone(), rat(1, 3), None));
    }

    if class.is_rational() {
        // for rational singularities mult = -Z² and embdim = -Z² + 1
        let mult = -z2.clone();
        let embdim = &mult + Rational::one();
        checks.push(BoundCheck::new(
            CHECK_MULTIPLICITY,
            k2.clone(),
            &mult - int(4),
            Some(format!("mult = -Z² = {mult}")),
        ));
        checks.push(BoundCheck::new(
            CHECK_EMBEDDING_DIMENSION,
            k2.clone(),
            &embdim - int(5),
            Some(format!("embdim = -Z² + 1 = {embdim}")),
        ));
        checks.push(BoundCheck::new(
            CHECK_ARITHMETIC_GENUS,
            k2.clone(),
            int(-3),
            Some("p_a = 0 (rational)".into()),
        ));
    } else {
        match pa_max_bounded(g, DEFAULT_PA_BOUND) {
            Ok(pa) => checks.push(BoundCheck::new(
                CHECK_ARITHMETIC_GENUS,
                k2.clone(),
                int(4 * pa - 3),
                Some(format!(
                    "p_a lower bound {pa} from cycles D <= {DEFAULT_PA_BOUND}Z"
                )),
            )),
            Err(Error::Bounds(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(checks)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    /// Coefficients `m_i` of `K`.
    pub canonical: Cycle,
    #[serde(with = "crate::rational::serde_str")]
    pub k_squared: Rational,
    pub fundamental: Cycle,
    pub z_squared: i64,
    pub k_dot_z: i64,
    pub pa_z: i64,
    pub numerical_index: u64,
    pub classification: Classification,
    pub bound_checks: Vec<BoundCheck>,
}

impl InvariantReport {
    pub fn compute(g: &WeightedDualGraph) -> Result<Self> {
        g.require_admissible()?;
        let canonical = canonical_cycle(g)?;
        let k2 = k_squared_from(g, &canonical)?;
        if k2.is_negative() {
            return Err(Error::Assertion(format!("-K² = {k2} is negative")));
        }
        let fundamental = fundamental_cycle(g)?;
        let z2 = g.intersect(&fundamental.coefficients, &fundamental.coefficients)?;
        let kz = linalg::dot(&fundamental.coefficients, &g.adjunction_degrees());
        let pa_z = cycle_pa(g, &fundamental)?;
        let classification = classify_from(g, &k2, pa_z, &z2)?;
        let numerical_index = index_of_cycle(&canonical)?;
        let bound_checks = build_checks(g, &k2, classification, &z2)?;
        Ok(InvariantReport {
            canonical,
            k_squared: k2,
            fundamental,
            z_squared: small(&z2)?,
            k_dot_z: small(&kz)?,
            pa_z,
            numerical_index,
            classification,
            bound_checks,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Human-readable table.
    pub fn to_text(&self, g: &WeightedDualGraph) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "-K^2            {}  (~{})",
            self.k_squared,
            rational::to_decimal(&self.k_squared, 12)
        );
        let _ = writeln!(s, "classification  {}", self.classification);
        let _ = writeln!(s, "numerical index {}", self.numerical_index);
        let _ = writeln!(s, "Z^2             {}", self.z_squared);
        let _ = writeln!(s, "K.Z             {}", self.k_dot_z);
        let _ = writeln!(s, "p_a(Z)          {}", self.pa_z);
        let _ = writeln!(s);
        let _ = writeln!(s, "{:<12} {:>5} {:>5} {:>14} {:>4}", "vertex", "genus", "self", "K coeff", "Z");
        for i in 0..g.num_vertices() {
            let v = g.vertex(i);
            let _ = writeln!(
                s,
                "{:<12} {:>5} {:>5} {:>14} {:>4}",
                g.id(i),
                v.genus,
                v.self_int,
                self.canonical.coefficients[i].to_string(),
                self.fundamental.coefficients[i].to_string()
            );
        }
        let _ = writeln!(s);
        let _ = writeln!(s, "{:<28} {:>12} {:>12}  result", "check", "lhs", "rhs");
        for c in &self.bound_checks {
            let status = match (c.holds, c.equality) {
                (true, true) => "holds (equality)",
                (true, false) => "holds",
                (false, _) => "FAILS",
            };
            let _ = write!(
                s,
                "{:<28} {:>12} {:>12}  {status}",
                c.name,
                c.lhs.to_string(),
                c.rhs.to_string()
            );
            if let Some(note) = &c.note {
                let _ = write!(s, "  [{note}]");
            }
            s.push('\n');
        }
        s
    }
}

fn small(q: &Rational) -> Result<i64> {
    if !q.is_integer() {
        return Err(Error::NonIntegral);
    }
    q.to_integer()
        .to_i64()
        .ok_or_else(|| Error::Assertion(format!("{q} out of range")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexData;

    fn chain(selfs: &[i64]) -> WeightedDualGraph {
        let vs = selfs.iter().map(|&w| VertexData::new(0, w)).collect();
        let es: Vec<_> = (1..selfs.len()).map(|i| (i - 1, i, 1)).collect();
        WeightedDualGraph::from_parts(vs, &es).unwrap()
    }

    fn elliptic(w: i64) -> WeightedDualGraph {
        WeightedDualGraph::from_parts(vec![VertexData::new(1, w)], &[]).unwrap()
    }

    fn d4() -> WeightedDualGraph {
        WeightedDualGraph::from_parts(
            vec![VertexData::new(0, -2); 4],
            &[(0, 1, 1), (0, 2, 1), (0, 3, 1)],
        )
        .unwrap()
    }

    #[test]
    fn canonical_cycles() {
        assert_eq!(canonical_cycle(&chain(&[-3])).unwrap().coefficients, vec![rat(-1, 3)]);
        assert!(canonical_cycle(&chain(&[-2, -2, -2])).unwrap().is_zero());
        assert_eq!(
            canonical_cycle(&chain(&[-3, -2])).unwrap().coefficients,
            vec![rat(-2, 5), rat(-1, 5)]
        );
        let bad = WeightedDualGraph::from_parts(
            vec![VertexData::new(0, -2); 2],
            &[(0, 1, 2)],
        )
        .unwrap();
        assert_eq!(canonical_cycle(&bad), Err(Error::NotNegativeDefinite));
    }

    #[test]
    fn k_squared_values() {
        assert_eq!(k_squared(&chain(&[-3])).unwrap(), rat(1, 3));
        for n in 0..6 {
            let mut selfs = vec![-3];
            selfs.extend(std::iter::repeat_n(-2, n));
            selfs.push(-3);
            assert_eq!(k_squared(&chain(&selfs)).unwrap(), int(1), "n = {n}");
        }
        assert_eq!(k_squared(&elliptic(-4)).unwrap(), int(4));
    }

    #[test]
    fn fundamental_cycles() {
        assert_eq!(fundamental_cycle(&chain(&[-2; 4])).unwrap().to_integers(), Some(vec![1; 4]));
        assert_eq!(fundamental_cycle(&d4()).unwrap().to_integers(), Some(vec![2, 1, 1, 1]));
        let x31 = chain(&[-3]);
        let z = fundamental_cycle(&x31).unwrap();
        assert_eq!(z.to_integers(), Some(vec![1]));
        assert_eq!(x31.intersect(&z.coefficients, &z.coefficients).unwrap(), int(-3));
        let two = WeightedDualGraph::from_parts(vec![VertexData::new(0, -2); 2], &[]).unwrap();
        assert_eq!(fundamental_cycle(&two), Err(Error::Disconnected));
    }

    #[test]
    fn arithmetic_genera() {
        let x31 = chain(&[-3]);
        assert_eq!(cycle_pa(&x31, &Cycle::from_integers(&[1])).unwrap(), 0);
        let g = WeightedDualGraph::from_parts(
            vec![VertexData::new(2, -3), VertexData::new(0, -2)],
            &[(0, 1, 1)],
        )
        .unwrap();
        assert_eq!(cycle_pa(&g, &Cycle::from_integers(&[1, 0])).unwrap(), 2);
        assert_eq!(cycle_pa(&g, &Cycle::from_integers(&[0, 1])).unwrap(), 0);
        assert_eq!(cycle_pa(&g, &Cycle::new(vec![rat(1, 2), int(0)])), Err(Error::NonIntegral));
        for w in 1..6 {
            let e = elliptic(-w);
            let z = fundamental_cycle(&e).unwrap();
            assert_eq!(cycle_pa(&e, &z).unwrap(), 1);
        }
    }

    #[test]
    fn bounded_genus_search() {
        assert_eq!(pa_max_bounded(&d4(), 2).unwrap(), 0);
        assert_eq!(pa_max_bounded(&elliptic(-2), 3).unwrap(), 1);
        assert_eq!(pa_max_bounded(&chain(&[-3]), 3).unwrap(), 0);
        assert!(matches!(pa_max_bounded(&chain(&[-3]), 0), Err(Error::Domain(_))));
        // brute force over the same box, written without the odometer
        let g = WeightedDualGraph::from_parts(
            vec![VertexData::new(1, -2), VertexData::new(0, -2), VertexData::new(0, -3)],
            &[(0, 1, 1), (1, 2, 1)],
        )
        .unwrap();
        let z = fundamental_cycle(&g).unwrap().to_integers().unwrap();
        for b in 1..=3 {
            let mut best = i64::MIN;
            for a in 0..=b * z[0] {
                for c in 0..=b * z[1] {
                    for d in 0..=b * z[2] {
                        if a + c + d == 0 {
                            continue;
                        }
                        best = best.max(cycle_pa(&g, &Cycle::from_integers(&[a, c, d])).unwrap());
                    }
                }
            }
            assert_eq!(pa_max_bounded(&g, b as u32).unwrap(), best);
        }
    }

    #[test]
    fn indices_and_classes() {
        assert_eq!(numerical_index(&chain(&[-3])).unwrap(), 3);
        assert_eq!(numerical_index(&elliptic(-7)).unwrap(), 1);
        assert_eq!(numerical_index(&d4()).unwrap(), 1);
        assert_eq!(classify(&d4()).unwrap(), Classification::RationalDouble);
        assert_eq!(classify(&chain(&[-3])).unwrap(), Classification::RationalTriple);
        assert_eq!(classify(&chain(&[-4])).unwrap(), Classification::RationalOther);
        assert_eq!(classify(&elliptic(-3)).unwrap(), Classification::NonRationalOrUnknown);
    }

    #[test]
    fn checks() {
        let r = InvariantReport::compute(&chain(&[-3])).unwrap();
        let weighted = &r.bound_checks[0];
        assert_eq!((weighted.lhs.clone(), weighted.rhs.clone()), (rat(1, 3), rat(1, 3)));
        let uni = r.bound_checks.iter().find(|c| c.name == CHECK_UNIVERSAL).unwrap();
        assert!(uni.holds && uni.equality);

        let r = InvariantReport::compute(&elliptic(-4)).unwrap();
        let genus = r.bound_checks.iter().find(|c| c.name == CHECK_ARITHMETIC_GENUS).unwrap();
        assert_eq!((genus.lhs.clone(), genus.rhs.clone()), (int(4), int(1)));
        assert!(genus.holds);
        assert!(r.bound_checks.iter().all(|c| c.name != CHECK_MULTIPLICITY));

        let json = r.to_json();
        let back: InvariantReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        assert!(json.contains("\"k_squared\": \"4\""));
    }
}
