//! Named dual-graph families with closed-form `-K²`.
//!
//! Each [`FamilySpec`] generates a concrete graph and carries its own
//! closed-form value, so the two routes can be compared exactly. Where a
//! family hangs a (-2)-configuration off the (-3)-curve `x`, the attachment
//! point is the one whose contraction factor `det(G - v)/det(G)` reproduces
//! the closed form:
//!
//! | family | attached configuration       | factor          |
//! |--------|------------------------------|-----------------|
//! | II     | long-tail end of `D_{s+3}`   | 1               |
//! | III    | second vertex of `A_s`       | 2(s-1)/(s+1)    |
//! | IV     | fork leaf of `D_5`           | 5/4             |
//! | V      | tip of a 2-arm of `E_6`      | 4/3             |
//! | VI     | third vertex of `A_{n+2}`    | 3n/(n+3)        |
//! | VII    | fork leaf of `D_6`           | 3/2             |
//! | VIII   | fork leaf of `D_7`           | 7/4             |
//! | IX     | tip of the long arm of `E_7` | 3/2             |

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::WeightedDualGraph;
use crate::rational::{int, rat, Rational};
use crate::transforms::{string_containing, LimitValue, StringDescriptor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilySpec {
    A { n: u64 },
    D { n: u64 },
    E6,
    E7,
    E8,
    TripleI { n: u64, s: u64, t: u64 },
    TripleII { n: u64, s: u64 },
    TripleIII { n: u64, s: u64 },
    TripleIV { n: u64 },
    TripleV { n: u64 },
    TripleVI { n: u64 },
    TripleVII,
    TripleVIII,
    TripleIX,
    /// Two genus-`k/2` curves of self-intersection `-(2km+2)` on the first
    /// curve of an `A_n` chain.
    TwoCurve { k: u64, m: u64, n: u64 },
    /// `A_n` chain ending in a genus-`(r-k+1)/2` curve of self-intersection `-(k+1)`.
    Tail { r: u64, k: u64, n: u64 },
    /// Genus-`(r-k)/2` curve of self-intersection `-(k+2)` with arms `n`, `s`.
    TwoTail { r: u64, k: u64, n: u64, s: u64 },
    /// `(-3) - (-2)^n - (-3)`.
    DoubleThree { n: u64 },
    /// One genus-1 curve of self-intersection `-w`.
    SimpleElliptic { w: u64 },
    /// A (-5)-curve meeting four (-3)-curves.
    NonLcStar,
}

pub const FAMILY_NAMES: &[&str] = &[
    "A", "D", "E6", "E7", "E8", "I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX",
    "two-curve", "tail", "two-tail", "double-three", "simple-elliptic", "non-lc-star",
];

impl FamilySpec {
    pub fn name(&self) -> &'static str {
        use FamilySpec::*;
        match self {
            A { .. } => "A",
            D { .. } => "D",
            E6 => "E6",
            E7 => "E7",
            E8 => "E8",
            TripleI { .. } => "I",
            TripleII { .. } => "II",
            TripleIII { .. } => "III",
            TripleIV { .. } => "IV",
            TripleV { .. } => "V",
            TripleVI { .. } => "VI",
            TripleVII => "VII",
            TripleVIII => "VIII",
            TripleIX => "IX",
            TwoCurve { .. } => "two-curve",
            Tail { .. } => "tail",
            TwoTail { .. } => "two-tail",
            DoubleThree { .. } => "double-three",
            SimpleElliptic { .. } => "simple-elliptic",
            NonLcStar => "non-lc-star",
        }
    }

    pub fn param_names(name: &str) -> Result<&'static [&'static str]> {
        Ok(match name {
            "A" | "D" | "IV" | "V" | "VI" | "double-three" => &["n"],
            "E6" | "E7" | "E8" | "VII" | "VIII" | "IX" | "non-lc-star" => &[],
            "I" => &["n", "s", "t"],
            "II" | "III" => &["n", "s"],
            "two-curve" => &["k", "m", "n"],
            "tail" => &["r", "k", "n"],
            "two-tail" => &["r", "k", "n", "s"],
            "simple-elliptic" => &["w"],
            other => return Err(Error::Domain(format!("unknown family {other:?}"))),
        })
    }

    /// Parameters in declaration order.
    pub fn params(&self) -> Vec<(&'static str, u64)> {
        use FamilySpec::*;
        match *self {
            A { n } | D { n } | TripleIV { n } | TripleV { n } | TripleVI { n } | DoubleThree { n } => {
                vec![("n", n)]
            }
            E6 | E7 | E8 | TripleVII | TripleVIII | TripleIX | NonLcStar => vec![],
            TripleI { n, s, t } => vec![("n", n), ("s", s), ("t", t)],
            TripleII { n, s } | TripleIII { n, s } => vec![("n", n), ("s", s)],
            TwoCurve { k, m, n } => vec![("k", k), ("m", m), ("n", n)],
            Tail { r, k, n } => vec![("r", r), ("k", k), ("n", n)],
            TwoTail { r, k, n, s } => vec![("r", r), ("k", k), ("n", n), ("s", s)],
            SimpleElliptic { w } => vec![("w", w)],
        }
    }

    /// Build and domain-check a spec from its name and parameter values.
    pub fn from_params(name: &str, params: &BTreeMap<String, u64>) -> Result<Self> {
        let names = Self::param_names(name)?;
        for key in params.keys() {
            if !names.contains(&key.as_str()) {
                return Err(Error::Domain(format!("family {name} has no parameter {key:?}")));
            }
        }
        let get = |p: &str| -> Result<u64> {
            params
                .get(p)
                .copied()
                .ok_or_else(|| Error::Domain(format!("family {name} needs parameter {p}")))
        };
        use FamilySpec::*;
        let spec = match name {
            "A" => A { n: get("n")? },
            "D" => D { n: get("n")? },
            "E6" => E6,
            "E7" => E7,
            "E8" => E8,
            "I" => TripleI { n: get("n")?, s: get("s")?, t: get("t")? },
            "II" => TripleII { n: get("n")?, s: get("s")? },
            "III" => TripleIII { n: get("n")?, s: get("s")? },
            "IV" => TripleIV { n: get("n")? },
            "V" => TripleV { n: get("n")? },
            "VI" => TripleVI { n: get("n")? },
            "VII" => TripleVII,
            "VIII" => TripleVIII,
            "IX" => TripleIX,
            "two-curve" => TwoCurve { k: get("k")?, m: get("m")?, n: get("n")? },
            "tail" => Tail { r: get("r")?, k: get("k")?, n: get("n")? },
            "two-tail" => TwoTail { r: get("r")?, k: get("k")?, n: get("n")?, s: get("s")? },
            "double-three" => DoubleThree { n: get("n")? },
            "simple-elliptic" => SimpleElliptic { w: get("w")? },
            "non-lc-star" => NonLcStar,
            _ => unreachable!("param_names rejected unknown names"),
        };
        spec.check_domain()?;
        Ok(spec)
    }

    /// The same family with one parameter replaced.
    pub fn with_param(&self, param: &str, value: u64) -> Result<Self> {
        let mut map: BTreeMap<String, u64> =
            self.params().into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        if !map.contains_key(param) {
            return Err(Error::Domain(format!("family {} has no parameter {param:?}", self.name())));
        }
        map.insert(param.to_string(), value);
        Self::from_params(self.name(), &map)
    }

    pub fn check_domain(&self) -> Result<()> {
        use FamilySpec::*;
        let fail = |why: &str| Err(Error::Domain(format!("{self}: {why}")));
        match *self {
            A { n } if n < 1 => fail("A_n needs n >= 1"),
            D { n } if n < 4 => fail("D_n needs n >= 4"),
            TripleIII { s, .. } if s < 2 => fail("III needs s >= 2"),
            TripleVI { n } if n < 1 => fail("VI needs n >= 1"),
            TwoCurve { k, m, n } if k < 2 || k % 2 != 0 || m < 1 || n < 1 => {
                fail("needs k even >= 2, m >= 1, n >= 1")
            }
            Tail { r, k, .. } if r < 1 || k < 1 || (r + k) % 2 == 0 || r + 1 < k => {
                fail("needs r, k >= 1, r - k odd and r >= k - 1")
            }
            TwoTail { r, k, .. } if k < 1 || r < k || (r - k) % 2 != 0 => {
                fail("needs k >= 1, r >= k and r - k even")
            }
            SimpleElliptic { w } if w < 1 => fail("needs w >= 1"),
            _ => Ok(()),
        }
    }

    pub fn generate(&self) -> Result<WeightedDualGraph> {
        self.check_domain()?;
        use FamilySpec::*;
        let mut b = Builder::default();
        match *self {
            A { n } => {
                b.arm(None, "a", n);
            }
            D { n } => {
                b.d_config("d", n);
            }
            E6 => {
                b.e_config("e", 2);
            }
            E7 => {
                b.e_config("e", 3);
            }
            E8 => {
                b.e_config("e", 4);
            }
            TripleI { n, s, t } => {
                let x = b.vertex("x", 0, -3);
                b.arm(Some(x), "n", n);
                b.arm(Some(x), "s", s);
                b.arm(Some(x), "t", t);
            }
            TripleII { n, s } => {
                let x = b.vertex("x", 0, -3);
                b.arm(Some(x), "n", n);
                let (long_end, _) = b.d_config("d", s + 3);
                b.edge(x, long_end);
            }
            TripleIII { n, s } => {
                let x = b.vertex("x", 0, -3);
                b.arm(Some(x), "n", n);
                let chain = b.arm(None, "c", s);
                b.edge(x, chain[1]);
            }
            TripleIV { n } => {
                let x = b.vertex("x", 0, -3);
                b.arm(Some(x), "n", n);
                let (_, leaf) = b.d_config("d", 5);
                b.edge(x, leaf);
            }
            TripleV { n } => {
                let x = b.vertex("x", 0, -3);
                b.arm(Some(x), "n", n);
                let tips = b.e_config("e", 2);
                b.edge(x, tips.short_tip);
            }
            TripleVI { n } => {
                let x = b.vertex("x", 0, -3);
                let chain = b.arm(None, "c", n + 2);
                b.edge(x, chain[2]);
            }
            TripleVII | TripleVIII => {
                let x = b.vertex("x", 0, -3);
                let size = if *self == TripleVII { 6 } else { 7 };
                let (_, leaf) = b.d_config("d", size);
                b.edge(x, leaf);
            }
            TripleIX => {
                let x = b.vertex("x", 0, -3);
                let tips = b.e_config("e", 3);
                b.edge(x, tips.long_tip);
            }
            TwoCurve { k, m, n } => {
                let chain = b.arm(None, "f", n);
                let w = -(2 * k as i64 * m as i64 + 2);
                for id in ["e1", "e2"] {
                    let e = b.vertex(id, (k / 2) as u32, w);
                    b.edge(chain[0], e);
                }
            }
            Tail { r, k, n } => {
                let chain = b.arm(None, "o", n);
                let x = b.vertex("x", ((r + 1 - k) / 2) as u32, -(k as i64 + 1));
                if let Some(&last) = chain.last() {
                    b.edge(last, x);
                }
            }
            TwoTail { r, k, n, s } => {
                let x = b.vertex("x", ((r - k) / 2) as u32, -(k as i64 + 2));
                b.arm(Some(x), "n", n);
                b.arm(Some(x), "s", s);
            }
            DoubleThree { n } => {
                let x1 = b.vertex("x1", 0, -3);
                let chain = b.arm(Some(x1), "o", n);
                let x2 = b.vertex("x2", 0, -3);
                b.edge(chain.last().copied().unwrap_or(x1), x2);
            }
            SimpleElliptic { w } => {
                b.vertex("e", 1, -(w as i64));
            }
            NonLcStar => {
                let z = b.vertex("z", 0, -5);
                for k in 1..=4 {
                    let y = b.vertex(&format!("y{k}"), 0, -3);
                    b.edge(z, y);
                }
            }
        }
        b.finish()
    }

    /// Closed-form `-K²`.
    pub fn closed_form_k2(&self) -> Rational {
        match self.formula(&[]) {
            Ok(LimitValue::Finite(q)) => q,
            other => unreachable!("closed forms are finite for finite parameters: {other:?}"),
        }
    }

    /// Closed-form limit as every parameter in `stretched` tends to infinity.
    pub fn expected_limit(&self, stretched: &[&str]) -> Result<LimitValue> {
        let allowed = self.stretchable_params();
        for p in stretched {
            if !allowed.contains(p) {
                return Err(Error::Domain(format!("{} cannot stretch parameter {p:?}", self.name())));
            }
        }
        self.formula(stretched)
    }

    /// Parameters that count (-2)-curves in a string hanging off the graph.
    pub fn stretchable_params(&self) -> &'static [&'static str] {
        use FamilySpec::*;
        match self {
            D { .. } | TripleIV { .. } | TripleV { .. } | TripleVI { .. } => &["n"],
            TwoCurve { .. } | Tail { .. } | DoubleThree { .. } => &["n"],
            TripleI { .. } => &["n", "s", "t"],
            TripleII { .. } | TripleIII { .. } | TwoTail { .. } => &["n", "s"],
            _ => &[],
        }
    }

    fn formula(&self, stretched: &[&str]) -> Result<LimitValue> {
        use FamilySpec::*;
        let inf = |p: &str| stretched.contains(&p);
        // n/(n+1), tending to 1
        let frac = |p: &str, n: u64| -> Rational {
            if inf(p) {
                int(1)
            } else {
                rat(n as i64, n as i64 + 1)
            }
        };
        let recip = |q: Rational| -> LimitValue {
            if q.is_zero() {
                LimitValue::Divergent
            } else {
                LimitValue::Finite(q.recip())
            }
        };
        let fin = LimitValue::Finite;
        Ok(match *self {
            A { .. } | D { .. } | E6 | E7 | E8 => fin(int(0)),
            TripleI { n, s, t } => recip(int(3) - frac("n", n) - frac("s", s) - frac("t", t)),
            TripleII { n, .. } => {
                if inf("n") {
                    fin(int(1))
                } else {
                    fin(rat(n as i64 + 1, n as i64 + 2))
                }
            }
            TripleIII { n, s } => {
                let arm = if inf("s") { int(2) } else { rat(2 * (s as i64 - 1), s as i64 + 1) };
                recip(int(3) - frac("n", n) - arm)
            }
            TripleIV { n } => fin(if inf("n") {
                rat(4, 3)
            } else {
                rat(4 * n as i64 + 4, 3 * n as i64 + 7)
            }),
            TripleV { n } => fin(if inf("n") {
                rat(3, 2)
            } else {
                rat(3 * n as i64 + 3, 2 * n as i64 + 5)
            }),
            TripleVI { n } => {
                if inf("n") {
                    LimitValue::Divergent
                } else {
                    fin(rat(n as i64 + 3, 9))
                }
            }
            TripleVII | TripleIX => fin(rat(2, 3)),
            TripleVIII => fin(rat(4, 5)),
            TwoCurve { k, m, n } => {
                let (k, m) = (int(k as i64), int(m as i64));
                let one = int(1);
                let odd = int(2) * &m + &one;
                // 1 + 1/n, tending to 1
                let g = if inf("n") { one.clone() } else { &one + rat(1, n as i64) };
                let num = int(2) * &g * &k * &k * &odd * &odd;
                let den = (int(2) * &k * &m + int(2)) * &g - int(2);
                fin(num / den)
            }
            Tail { r, k, n } => {
                let r2 = int((r * r) as i64);
                recip((int(k as i64 + 1) - frac("n", n)) / r2)
            }
            TwoTail { r, k, n, s } => {
                let r2 = int((r * r) as i64);
                recip((int(k as i64 + 2) - frac("n", n) - frac("s", s)) / r2)
            }
            DoubleThree { .. } => fin(int(1)),
            SimpleElliptic { w } => fin(int(w as i64)),
            NonLcStar => fin(rat(71, 11)),
        })
    }

    /// The printed coefficient of the two genus curves in [`FamilySpec::TwoCurve`].
    pub fn two_curve_coefficient(&self) -> Option<Rational> {
        let FamilySpec::TwoCurve { k, m, n } = *self else {
            return None;
        };
        let (k, m) = (int(k as i64), int(m as i64));
        let g = int(1) + rat(1, n as i64);
        let num = &g * &k * (int(2) * &m + int(1));
        let den = (int(2) * &k * &m + int(2)) * (-g) + int(2);
        Some(num / den)
    }

    /// The maximal string of `g = self.generate()` whose length grows with `param`.
    pub fn string_for_param(&self, g: &WeightedDualGraph, param: &str) -> Result<StringDescriptor> {
        use FamilySpec::*;
        if !self.stretchable_params().contains(&param) {
            return Err(Error::Domain(format!("{} cannot stretch parameter {param:?}", self.name())));
        }
        let marker = match (self, param) {
            (D { .. }, _) => "d1",
            (TripleII { .. }, "s") => "d1",
            (TripleIII { .. }, "s") => "c3",
            (TripleVI { .. }, _) => "c4",
            (TwoCurve { .. }, _) => "f2",
            (Tail { .. }, _) | (DoubleThree { .. }, _) => "o1",
            (_, "n") => "n1",
            (_, "s") => "s1",
            (_, "t") => "t1",
            _ => unreachable!(),
        };
        let v = g.index_of(marker).ok_or_else(|| {
            Error::Precondition(format!("{self}: parameter {param} is too small to carry a string"))
        })?;
        string_containing(g, v).ok_or_else(|| {
            Error::Precondition(format!("{self}: no (-2)-string through {marker}"))
        })
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params = self.params();
        if params.is_empty() {
            return f.write_str(self.name());
        }
        let body: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{}({})", self.name(), body.join(","))
    }
}

#[derive(Default)]
struct Builder {
    g: WeightedDualGraph,
    error: Option<Error>,
}

struct ETips {
    short_tip: usize,
    long_tip: usize,
}

impl Builder {
    fn vertex(&mut self, id: &str, genus: u32, self_int: i64) -> usize {
        match self.g.add_vertex(id, genus, self_int) {
            Ok(i) => i,
            Err(e) => {
                self.error.get_or_insert(e);
                0
            }
        }
    }

    fn edge(&mut self, a: usize, b: usize) {
        if let Err(e) = self.g.add_edge(a, b, 1) {
            self.error.get_or_insert(e);
        }
    }

    /// Chain `prefix1 … prefixN` of (-2)-curves, the first joined to `from`.
    fn arm(&mut self, from: Option<usize>, prefix: &str, len: u64) -> Vec<usize> {
        let mut out = Vec::with_capacity(len as usize);
        let mut prev = from;
        for j in 1..=len {
            let v = self.vertex(&format!("{prefix}{j}"), 0, -2);
            if let Some(p) = prev {
                self.edge(p, v);
            }
            prev = Some(v);
            out.push(v);
        }
        out
    }

    /// `D_k` (`k >= 3`): chain `d1 … d_{k-2}` with two leaves at `d_{k-2}`.
    /// Returns the long-tail end and one fork leaf.
    fn d_config(&mut self, prefix: &str, k: u64) -> (usize, usize) {
        let chain = self.arm(None, prefix, k - 2);
        let fork = *chain.last().unwrap();
        let l1 = self.vertex(&format!("{prefix}l1"), 0, -2);
        let l2 = self.vertex(&format!("{prefix}l2"), 0, -2);
        self.edge(fork, l1);
        self.edge(fork, l2);
        (chain[0], l1)
    }

    /// `E_{long+4}`: centre with arms of 1, 2 and `long` further curves.
    fn e_config(&mut self, prefix: &str, long: u64) -> ETips {
        let c = self.vertex(&format!("{prefix}0"), 0, -2);
        self.arm(Some(c), &format!("{prefix}a"), 1);
        let short = self.arm(Some(c), &format!("{prefix}b"), 2);
        let long = self.arm(Some(c), &format!("{prefix}c"), long);
        ETips {
            short_tip: *short.last().unwrap(),
            long_tip: *long.last().unwrap(),
        }
    }

    fn finish(self) -> Result<WeightedDualGraph> {
        match self.error {
            Some(e) => Err(e),
            None => Ok(self.g),
        }
    }
}

/// The family corpus: every triple family with parameters up to `max_triple`,
/// the parameterised constructions with parameters up to `max_other`, and the
/// fixed members.
pub fn family_corpus(max_triple: u64, max_other: u64) -> Vec<FamilySpec> {
    use FamilySpec::*;
    let mut out = vec![E6, E7, E8, TripleVII, TripleVIII, TripleIX, NonLcStar];
    for n in 1..=max_triple {
        out.push(A { n });
    }
    for n in 4..=max_triple.max(4) {
        out.push(D { n });
    }
    for n in 0..=max_triple {
        for s in 0..=max_triple {
            for t in 0..=max_triple {
                out.push(TripleI { n, s, t });
            }
            out.push(TripleII { n, s });
            if s >= 2 {
                out.push(TripleIII { n, s });
            }
        }
        out.push(TripleIV { n });
        out.push(TripleV { n });
        if n >= 1 {
            out.push(TripleVI { n });
        }
        out.push(DoubleThree { n });
    }
    for k in (2..=max_other).step_by(2) {
        for m in 1..=max_other {
            for n in 1..=max_other {
                out.push(TwoCurve { k, m, n });
            }
        }
    }
    for r in 1..=max_other {
        for k in 1..=max_other {
            for n in 0..=max_other {
                let tail = Tail { r, k, n };
                if tail.check_domain().is_ok() {
                    out.push(tail);
                }
                for s in 0..=max_other {
                    let two = TwoTail { r, k, n, s };
                    if two.check_domain().is_ok() {
                        out.push(two);
                    }
                }
            }
        }
    }
    for w in 1..=max_other {
        out.push(SimpleElliptic { w });
    }
    out
}

/// One row of a parameter sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepRow {
    pub spec: FamilySpec,
    pub value: u64,
    pub k_squared: Rational,
    pub closed_form: Rational,
}

impl SweepRow {
    pub fn matches(&self) -> bool {
        self.k_squared == self.closed_form
    }
}

/// Evaluate `-K²` directly and by closed form while `param` runs over `range`.
pub fn sweep(
    base: &FamilySpec,
    param: &str,
    range: std::ops::RangeInclusive<u64>,
) -> Result<Vec<SweepRow>> {
    range
        .map(|value| {
            let spec = base.with_param(param, value)?;
            let g = spec.generate()?;
            Ok(SweepRow {
                spec,
                value,
                k_squared: crate::invariants::k_squared(&g)?,
                closed_form: spec.closed_form_k2(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::k_squared;

    #[test]
    fn small_members() {
        let x31 = FamilySpec::TripleI { n: 0, s: 0, t: 0 }.generate().unwrap();
        assert_eq!(x31.num_vertices(), 1);
        assert_eq!(x31.vertex(0).self_int, -3);

        let dt = FamilySpec::DoubleThree { n: 0 }.generate().unwrap();
        assert_eq!(dt.num_vertices(), 2);
        assert_eq!(k_squared(&dt).unwrap(), int(1));

        let star = FamilySpec::NonLcStar.generate().unwrap();
        assert_eq!(star.num_vertices(), 5);
        assert_eq!(k_squared(&star).unwrap(), rat(71, 11));
    }

    #[test]
    fn printed_values() {
        assert_eq!(FamilySpec::TripleVIII.closed_form_k2(), rat(4, 5));
        assert_eq!(FamilySpec::TripleIII { n: 0, s: 2 }.closed_form_k2(), rat(3, 7));
        assert_eq!(FamilySpec::TwoCurve { k: 2, m: 1, n: 1 }.closed_form_k2(), rat(72, 5));
        assert_eq!(FamilySpec::A { n: 7 }.closed_form_k2(), int(0));
        assert_eq!(FamilySpec::SimpleElliptic { w: 9 }.closed_form_k2(), int(9));
    }

    #[test]
    fn expected_limits() {
        let tt = FamilySpec::TwoTail { r: 4, k: 4, n: 1, s: 1 };
        assert_eq!(tt.expected_limit(&["n", "s"]).unwrap(), LimitValue::Finite(int(4)));
        assert_eq!(
            FamilySpec::TripleII { n: 3, s: 2 }.expected_limit(&["n"]).unwrap(),
            LimitValue::Finite(int(1))
        );
        assert_eq!(
            FamilySpec::TripleVI { n: 3 }.expected_limit(&["n"]).unwrap(),
            LimitValue::Divergent
        );
        assert_eq!(
            FamilySpec::TwoCurve { k: 2, m: 1, n: 3 }.expected_limit(&["n"]).unwrap(),
            LimitValue::Finite(int(18))
        );
        assert!(FamilySpec::TripleVII.expected_limit(&["n"]).is_err());
    }

    #[test]
    fn domains() {
        assert!(FamilySpec::TripleIII { n: 0, s: 1 }.generate().is_err());
        assert!(FamilySpec::TripleVI { n: 0 }.generate().is_err());
        assert!(FamilySpec::Tail { r: 2, k: 2, n: 1 }.check_domain().is_err());
        assert!(FamilySpec::Tail { r: 1, k: 2, n: 1 }.check_domain().is_ok());
        assert!(FamilySpec::Tail { r: 1, k: 4, n: 1 }.check_domain().is_err());
        assert!(FamilySpec::TwoTail { r: 3, k: 4, n: 1, s: 0 }.check_domain().is_err());
        assert!(FamilySpec::TwoCurve { k: 3, m: 1, n: 1 }.check_domain().is_err());
    }

    #[test]
    fn params_round_trip() {
        let mut p = BTreeMap::new();
        p.insert("n".to_string(), 2);
        p.insert("s".to_string(), 4);
        let spec = FamilySpec::from_params("III", &p).unwrap();
        assert_eq!(spec, FamilySpec::TripleIII { n: 2, s: 4 });
        assert_eq!(spec.to_string(), "III(n=2,s=4)");
        assert_eq!(spec.with_param("s", 7).unwrap(), FamilySpec::TripleIII { n: 2, s: 7 });
        p.insert("q".to_string(), 1);
        assert!(FamilySpec::from_params("III", &p).is_err());
        assert!(FamilySpec::from_params("XI", &BTreeMap::new()).is_err());
    }

    #[test]
    fn sweeps_match() {
        let rows = sweep(&FamilySpec::TripleIV { n: 0 }, "n", 0..=6).unwrap();
        assert_eq!(rows.len(), 7);
        assert!(rows.iter().all(SweepRow::matches));
    }
}
