//! Bounded enumeration of admissible dual graphs up to isomorphism.
//!
//! Vertex-data multisets are generated first, sorted, so that relabellings
//! may only permute vertices with equal data. For each multiset the edge
//! multiplicities are filled in column by column. After each column the new
//! leading principal minor must have sign `(-1)^k`, and the partial graph
//! must be lexicographically minimal among its relabellings; both prune
//! whole subtrees. Every connected leaf is then the canonical
//! representative of its isomorphism class.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{VertexData, WeightedDualGraph};
use crate::invariants::Classification;
use crate::rational::{self, Rational};

/// Largest vertex count accepted by [`enumerate`].
pub const MAX_ENUM_VERTICES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumBounds {
    pub max_vertices: usize,
    /// Most negative self-intersection allowed.
    pub min_self: i64,
    pub max_genus: u32,
    pub max_edge_multiplicity: u32,
    pub connected_only: bool,
}

impl EnumBounds {
    pub fn new(max_vertices: usize, min_self: i64, max_genus: u32, max_edge_multiplicity: u32) -> Self {
        EnumBounds {
            max_vertices,
            min_self,
            max_genus,
            max_edge_multiplicity,
            connected_only: true,
        }
    }

    pub fn check(&self) -> Result<()> {
        if self.max_vertices == 0 || self.max_vertices > MAX_ENUM_VERTICES {
            return Err(Error::Bounds(format!(
                "max_vertices must be in 1..={MAX_ENUM_VERTICES}, got {}",
                self.max_vertices
            )));
        }
        if self.min_self > -1 {
            return Err(Error::Bounds(format!("min_self must be <= -1, got {}", self.min_self)));
        }
        if !self.connected_only {
            return Err(Error::Bounds(
                "only connected graphs carry the invariants; connected_only must be true".into(),
            ));
        }
        Ok(())
    }

    /// Vertex data allowed by the bounds, in encoding order: genus ascending,
    /// then self-intersection descending.
    pub fn vertex_types(&self) -> Vec<VertexData> {
        let mut out = Vec::new();
        for genus in 0..=self.max_genus {
            for self_int in (self.min_self..=-1).rev() {
                let v = VertexData::new(genus, self_int);
                if !v.is_minus_one() {
                    out.push(v);
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub encoding: String,
    #[serde(with = "crate::rational::serde_str")]
    pub k_squared: Rational,
    pub classification: Classification,
    pub z_squared: i64,
    pub numerical_index: u64,
}

impl SpectrumEntry {
    pub fn graph(&self) -> Result<WeightedDualGraph> {
        decode(&self.encoding)
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.encoding,
            rational::to_canonical(&self.k_squared),
            rational::to_decimal(&self.k_squared, 12),
            self.classification,
            self.z_squared,
            self.numerical_index
        )
    }
}

/// Spectrum invariants computed in fixed-width integer arithmetic.
///
/// `K = y / det` with `y = adj(M) c` by Cramer's rule; with at most
/// [`MAX_ENUM_VERTICES`] vertices and bounded entries nothing overflows
/// `i128`, and any overflow panics in checked builds rather than wrapping.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FastInvariants {
    /// `-K²` as a reduced fraction with positive denominator.
    pub k2_num: i128,
    pub k2_den: i128,
    pub z_squared: i64,
    pub pa_z: i64,
    pub numerical_index: u64,
    pub classification: Classification,
}

impl FastInvariants {
    pub fn k_squared(&self) -> Rational {
        Rational::new(self.k2_num.into(), self.k2_den.into())
    }

    /// `-K²` compared with `p/q` (`q > 0`).
    pub fn cmp_k2(&self, p: i128, q: i128) -> std::cmp::Ordering {
        (self.k2_num * q).cmp(&(p * self.k2_den))
    }
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `(det M, adj(M) c)` by fraction-free elimination without pivoting.
///
/// `M` must have nonzero leading principal minors, which holds for negative
/// definite forms. Returns `None` if a pivot vanishes.
pub fn solve_i128(m: &[Vec<i64>], c: &[i64]) -> Option<(i128, Vec<i128>)> {
    const N: usize = MAX_ENUM_VERTICES;
    let n = m.len();
    if n == 0 || n > N {
        return None;
    }
    let mut a = [[0i128; N + 1]; N];
    for i in 0..n {
        for j in 0..n {
            a[i][j] = m[i][j] as i128;
        }
        a[i][n] = c[i] as i128;
    }
    let mut prev = 1i128;
    for p in 0..n {
        if a[p][p] == 0 {
            return None;
        }
        for i in p + 1..n {
            for j in p + 1..=n {
                a[i][j] = (a[i][j] * a[p][p] - a[i][p] * a[p][j]) / prev;
            }
            a[i][p] = 0;
        }
        prev = a[p][p];
    }
    let det = a[n - 1][n - 1];
    // back substitution for x = det * M^-1 c, which is integral
    let mut x = vec![0i128; n];
    for i in (0..n).rev() {
        let mut acc = det * a[i][n];
        for j in i + 1..n {
            acc -= a[i][j] * x[j];
        }
        x[i] = acc / a[i][i];
    }
    Some((det, x))
}

/// `-K²` as a reduced fraction, from the integer matrix and adjunction degrees.
pub fn k_squared_i128(m: &[Vec<i64>], c: &[i64]) -> Option<(i128, i128)> {
    let (det, y) = solve_i128(m, c)?;
    Some(reduced_k2(det, &y, c))
}

fn reduced_k2(det: i128, y: &[i128], c: &[i64]) -> (i128, i128) {
    // -K² = -c·y / det
    let mut num = -c.iter().zip(y).map(|(&ci, &yi)| ci as i128 * yi).sum::<i128>();
    let mut den = det;
    if den < 0 {
        num = -num;
        den = -den;
    }
    let g = gcd(num, den).max(1);
    (num / g, den / g)
}

/// Invariants of the negative definite connected graph with integer
/// intersection matrix `m` and vertex data `data`.
pub fn fast_invariants(m: &[Vec<i64>], data: &[VertexData]) -> Result<FastInvariants> {
    let n = m.len();
    let c: Vec<i64> = data.iter().map(VertexData::adjunction_degree).collect();
    let (det, y) = solve_i128(m, &c).ok_or(Error::NotNegativeDefinite)?;
    let (k2_num, k2_den) = reduced_k2(det, &y, &c);

    let common = y.iter().fold(det, |acc, &yi| gcd(acc, yi));
    let numerical_index = u64::try_from((det / common).abs())
        .map_err(|_| Error::Assertion("numerical index out of range".into()))?;

    // fundamental cycle by the computation sequence
    let mut z = vec![1i64; n];
    let mut mz: Vec<i64> = (0..n).map(|i| m[i].iter().sum()).collect();
    while let Some(i) = (0..n).find(|&i| mz[i] > 0) {
        z[i] += 1;
        for (j, row) in m.iter().enumerate() {
            mz[j] += row[i];
        }
    }
    let z_squared: i64 = z.iter().zip(&mz).map(|(a, b)| a * b).sum();
    let kz: i64 = z.iter().zip(&c).map(|(a, b)| a * b).sum();
    if (z_squared + kz) % 2 != 0 {
        return Err(Error::Assertion(format!("Z² + K·Z = {} is odd", z_squared + kz)));
    }
    let pa_z = 1 + (z_squared + kz) / 2;

    let all_minus_two = data.iter().all(VertexData::is_minus_two);
    if (k2_num == 0) != all_minus_two {
        return Err(Error::Assertion(format!(
            "-K² = {k2_num}/{k2_den} but all-(-2) configuration is {all_minus_two}"
        )));
    }
    let classification = if k2_num == 0 {
        Classification::RationalDouble
    } else if pa_z == 0 {
        if z_squared == -3 {
            Classification::RationalTriple
        } else {
            Classification::RationalOther
        }
    } else {
        Classification::NonRationalOrUnknown
    };
    Ok(FastInvariants {
        k2_num,
        k2_den,
        z_squared,
        pa_z,
        numerical_index,
        classification,
    })
}

/// One isomorphism class found by the enumeration, in canonical labelling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumeratedGraph {
    pub vertices: Vec<VertexData>,
    /// Edge multiplicities in [`pair_order`].
    pub upper: Vec<u32>,
    pub invariants: FastInvariants,
}

impl EnumeratedGraph {
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn matrix(&self) -> Vec<Vec<i64>> {
        matrix_of(&self.vertices, &self.upper)
    }

    /// Edges `(a, b, mult)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize, u32)> {
        let mut edges: Vec<_> = pair_order(self.vertices.len())
            .into_iter()
            .zip(&self.upper)
            .filter(|(_, &m)| m > 0)
            .map(|((a, b), &m)| (a, b, m))
            .collect();
        edges.sort_unstable();
        edges
    }

    pub fn graph(&self) -> Result<WeightedDualGraph> {
        WeightedDualGraph::from_parts(self.vertices.clone(), &self.edges())
    }

    pub fn encoding(&self) -> String {
        let mut s = String::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                s.push(';');
            }
            let _ = write!(s, "{}:{}", v.genus, v.self_int);
        }
        s.push('|');
        for (k, (a, b, m)) in self.edges().into_iter().enumerate() {
            if k > 0 {
                s.push(';');
            }
            let _ = write!(s, "{a}-{b}:{m}");
        }
        s
    }

    pub fn entry(&self) -> SpectrumEntry {
        SpectrumEntry {
            encoding: self.encoding(),
            k_squared: self.invariants.k_squared(),
            classification: self.invariants.classification,
            z_squared: self.invariants.z_squared,
            numerical_index: self.invariants.numerical_index,
        }
    }
}

fn matrix_of(vertices: &[VertexData], upper: &[u32]) -> Vec<Vec<i64>> {
    let n = vertices.len();
    let mut m = vec![vec![0i64; n]; n];
    for (i, v) in vertices.iter().enumerate() {
        m[i][i] = v.self_int;
    }
    for (&(i, j), &mult) in pair_order(n).iter().zip(upper) {
        m[i][j] = mult as i64;
        m[j][i] = mult as i64;
    }
    m
}

/// Visit every admissible graph within `b`, one per isomorphism class.
///
/// `f` runs on the current rayon pool; its non-`None` results are returned
/// in canonical order: by vertex count, then vertex-data sequence, then
/// adjacency. The order does not depend on the number of threads.
pub fn scan<T, F>(b: &EnumBounds, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&EnumeratedGraph) -> Option<T> + Sync,
{
    b.check()?;
    let types = b.vertex_types();
    let mut multisets = Vec::new();
    for size in 1..=b.max_vertices {
        let mut current = Vec::with_capacity(size);
        multisets_of(types.len(), size, 0, &mut current, &mut multisets);
    }
    let chunks: Vec<Vec<T>> = multisets
        .par_iter()
        .map(|ms| {
            let data: Vec<VertexData> = ms.iter().map(|&t| types[t]).collect();
            let mut out = Vec::new();
            for upper in canonical_adjacencies(&data, b.max_edge_multiplicity) {
                let invariants = fast_invariants(&matrix_of(&data, &upper), &data)?;
                let g = EnumeratedGraph {
                    vertices: data.clone(),
                    upper,
                    invariants,
                };
                out.extend(f(&g));
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(chunks.into_iter().flatten().collect())
}

/// Every admissible graph within `b` with its invariants, in canonical order.
pub fn enumerate(b: &EnumBounds) -> Result<Vec<SpectrumEntry>> {
    scan(b, |g| Some(g.entry()))
}

fn multisets_of(
    types: usize,
    size: usize,
    from: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if current.len() == size {
        out.push(current.clone());
        return;
    }
    for t in from..types {
        current.push(t);
        multisets_of(types, size, t, current, out);
        current.pop();
    }
}

const N: usize = MAX_ENUM_VERTICES;

/// Vertex pairs in column-major order `(0,1), (0,2), (1,2), (0,3), …`.
///
/// All pairs among the first `k` vertices come before any pair involving a
/// later vertex, so the canonical graph restricted to its first `k`
/// vertices is again canonical. The search relies on this to discard
/// non-canonical prefixes early.
pub fn pair_order(n: usize) -> Vec<(usize, usize)> {
    (1..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect()
}

/// Orderly depth-first search over edge multiplicities.
struct Search {
    n: usize,
    max_mult: u32,
    /// Symmetric integer intersection matrix under construction.
    m: [[i64; N]; N],
    order: Vec<(usize, usize)>,
    /// `prefix_perms[k]`: non-identity data-preserving relabellings of `0..k`.
    prefix_perms: Vec<Vec<Vec<usize>>>,
    found: Vec<Vec<u32>>,
}

impl Search {
    fn run(&mut self, pair: usize) {
        if pair == self.order.len() {
            if connected(&self.m, self.n) {
                self.found.push(self.order.iter().map(|&(i, j)| self.m[i][j] as u32).collect());
            }
            return;
        }
        let (i, j) = self.order[pair];
        let closes_column = i + 1 == j;
        for mult in 0..=self.max_mult {
            // every 2x2 principal minor must be positive
            if (mult as i64).pow(2) >= self.m[i][i] * self.m[j][j] {
                break;
            }
            self.m[i][j] = mult as i64;
            self.m[j][i] = mult as i64;
            if closes_column && !(leading_minor_ok(&self.m, j + 1) && self.prefix_is_minimal(j + 1)) {
                continue;
            }
            self.run(pair + 1);
        }
        self.m[i][j] = 0;
        self.m[j][i] = 0;
    }

    /// Whether no relabelling of the first `k` vertices gives a
    /// lexicographically smaller column-major prefix.
    fn prefix_is_minimal(&self, k: usize) -> bool {
        let len = k * (k - 1) / 2;
        'perm: for p in &self.prefix_perms[k] {
            for &(i, j) in &self.order[..len] {
                let x = self.m[p[i]][p[j]];
                let y = self.m[i][j];
                if x != y {
                    if x < y {
                        return false;
                    }
                    continue 'perm;
                }
            }
        }
        true
    }
}

/// Canonical adjacencies (column-major, see [`pair_order`]) of all connected
/// negative definite graphs on the sorted vertex data `data`, ascending.
fn canonical_adjacencies(data: &[VertexData], max_mult: u32) -> Vec<Vec<u32>> {
    let n = data.len();
    let mut m = [[0i64; N]; N];
    for (i, v) in data.iter().enumerate() {
        m[i][i] = v.self_int;
    }
    let prefix_perms = (0..=n)
        .map(|k| {
            let identity: Vec<usize> = (0..k).collect();
            block_permutations(&data[..k])
                .into_iter()
                .filter(|p| *p != identity)
                .collect()
        })
        .collect();
    let mut search = Search {
        n,
        max_mult,
        m,
        order: pair_order(n),
        prefix_perms,
        found: Vec::new(),
    };
    search.run(0);
    search.found
}

/// Permutations of `0..n` that map each run of equal vertex data to itself.
fn block_permutations(data: &[VertexData]) -> Vec<Vec<usize>> {
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for (i, v) in data.iter().enumerate() {
        match blocks.last_mut() {
            Some(b) if data[b[0]] == *v => b.push(i),
            _ => blocks.push(vec![i]),
        }
    }
    let mut perms = vec![Vec::new()];
    for block in &blocks {
        let mut next = Vec::new();
        for arrangement in permutations(block) {
            for p in &perms {
                let mut q = p.clone();
                q.extend_from_slice(&arrangement);
                next.push(q);
            }
        }
        perms = next;
    }
    perms
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for k in 0..items.len() {
        let mut rest = items.to_vec();
        let first = rest.remove(k);
        for mut tail in permutations(&rest) {
            tail.insert(0, first);
            out.push(tail);
        }
    }
    out
}

fn connected(m: &[[i64; N]; N], n: usize) -> bool {
    let mut seen = 1u32;
    let mut stack = [0usize; N];
    let mut top = 1;
    while top > 0 {
        top -= 1;
        let i = stack[top];
        for j in 0..n {
            if seen & (1 << j) == 0 && m[i][j] != 0 {
                seen |= 1 << j;
                stack[top] = j;
                top += 1;
            }
        }
    }
    seen == (1u32 << n) - 1
}

/// Whether the leading `k x k` minor has sign `(-1)^k`, assuming all
/// smaller leading minors already do (so Bareiss needs no pivoting).
fn leading_minor_ok(m: &[[i64; N]; N], k: usize) -> bool {
    let mut a = [[0i128; N]; N];
    for i in 0..k {
        for j in 0..k {
            a[i][j] = m[i][j] as i128;
        }
    }
    let mut prev: i128 = 1;
    for p in 0..k - 1 {
        if a[p][p] == 0 {
            return false;
        }
        for i in p + 1..k {
            for j in p + 1..k {
                a[i][j] = (a[i][j] * a[p][p] - a[i][p] * a[p][j]) / prev;
            }
        }
        prev = a[p][p];
    }
    let det = a[k - 1][k - 1];
    if k.is_multiple_of(2) {
        det > 0
    } else {
        det < 0
    }
}

/// Text encoding `g:s;g:s|i-j:m;…` of vertex data and edges, in vertex order.
pub fn encode(g: &WeightedDualGraph) -> String {
    let mut s = String::new();
    for (i, v) in g.vertices().iter().enumerate() {
        if i > 0 {
            s.push(';');
        }
        let _ = write!(s, "{}:{}", v.genus, v.self_int);
    }
    s.push('|');
    for (k, e) in g.edges().iter().enumerate() {
        if k > 0 {
            s.push(';');
        }
        let _ = write!(s, "{}-{}:{}", e.a, e.b, e.mult);
    }
    s
}

pub fn decode(encoding: &str) -> Result<WeightedDualGraph> {
    let bad = || Error::Parse(format!("malformed graph encoding {encoding:?}"));
    let (vs, es) = encoding.split_once('|').ok_or_else(bad)?;
    let mut vertices = Vec::new();
    for part in vs.split(';') {
        let (genus, self_int) = part.split_once(':').ok_or_else(bad)?;
        vertices.push(VertexData::new(
            genus.parse().map_err(|_| bad())?,
            self_int.parse().map_err(|_| bad())?,
        ));
    }
    let mut edges = Vec::new();
    for part in es.split(';').filter(|p| !p.is_empty()) {
        let (ends, mult) = part.split_once(':').ok_or_else(bad)?;
        let (a, b) = ends.split_once('-').ok_or_else(bad)?;
        edges.push((
            a.parse().map_err(|_| bad())?,
            b.parse().map_err(|_| bad())?,
            mult.parse().map_err(|_| bad())?,
        ));
    }
    WeightedDualGraph::from_parts(vertices, &edges)
}

pub const CSV_HEADER: &str = "encoding,k2_exact,k2_decimal,class,z2,index";

pub fn to_csv(entries: &[SpectrumEntry]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for e in entries {
        s.push_str(&e.csv_row());
        s.push('\n');
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumValue {
    #[serde(with = "crate::rational::serde_str")]
    pub value: Rational,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumReport {
    #[serde(with = "crate::rational::serde_str")]
    pub lo: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub hi: Rational,
    /// Distinct values in `[lo, hi]`, ascending, with multiplicities.
    pub values: Vec<SpectrumValue>,
    /// Differences between consecutive distinct values.
    #[serde(with = "crate::rational::serde_vec")]
    pub gaps: Vec<Rational>,
    pub by_class: BTreeMap<String, usize>,
}

impl SpectrumReport {
    pub fn min(&self) -> Option<&Rational> {
        self.values.first().map(|v| &v.value)
    }

    pub fn max(&self) -> Option<&Rational> {
        self.values.last().map(|v| &v.value)
    }

    /// Smallest value strictly above zero.
    pub fn min_positive(&self) -> Option<&Rational> {
        self.values.iter().map(|v| &v.value).find(|v| v.is_positive())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "interval [{}, {}]", self.lo, self.hi);
        for v in &self.values {
            let _ = writeln!(
                s,
                "{:>12}  {:>14}  x{}",
                rational::to_canonical(&v.value),
                rational::to_decimal(&v.value, 12),
                v.count
            );
        }
        for (class, count) in &self.by_class {
            let _ = writeln!(s, "{class}: {count}");
        }
        s
    }
}

pub fn spectrum_report(entries: &[SpectrumEntry], lo: &Rational, hi: &Rational) -> SpectrumReport {
    spectrum_report_from(entries.iter().map(|e| (&e.k_squared, e.classification)), lo, hi)
}

/// [`spectrum_report`] over bare `(-K², class)` pairs.
pub fn spectrum_report_from<'a>(
    values: impl IntoIterator<Item = (&'a Rational, Classification)>,
    lo: &Rational,
    hi: &Rational,
) -> SpectrumReport {
    let mut counts: BTreeMap<Rational, usize> = BTreeMap::new();
    let mut by_class = BTreeMap::new();
    for (k2, class) in values.into_iter().filter(|(k2, _)| *k2 >= lo && *k2 <= hi) {
        *counts.entry(k2.clone()).or_default() += 1;
        *by_class.entry(class.to_string()).or_default() += 1;
    }
    let values: Vec<SpectrumValue> = counts
        .into_iter()
        .map(|(value, count)| SpectrumValue { value, count })
        .collect();
    let gaps = values.windows(2).map(|w| &w[1].value - &w[0].value).collect();
    SpectrumReport {
        lo: lo.clone(),
        hi: hi.clone(),
        values,
        gaps,
        by_class,
    }
}

/// Entries with `-K²` strictly inside `(0, 1)`.
pub fn below_one(entries: &[SpectrumEntry]) -> impl Iterator<Item = &SpectrumEntry> {
    entries
        .iter()
        .filter(|e| e.k_squared.is_positive() && e.k_squared < Rational::from_integer(1.into()))
}
