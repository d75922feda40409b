//! Weighted dual graphs of resolutions.
//!
//! A vertex is an exceptional curve `A_i`, recorded only through its
//! arithmetic genus and self-intersection number. An edge carries the
//! intersection number `A_i·A_j >= 1`. Vertex order is index order
//! throughout the crate: the intersection matrix, cycles and reports are all
//! indexed the same way.

use std::collections::HashSet;
use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, RatMatrix, RatVector};
use crate::rational::{int, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexData {
    /// Arithmetic genus `p_a(A_i)`.
    pub genus: u32,
    /// Self-intersection `A_i²`, always `<= -1`.
    pub self_int: i64,
}

impl VertexData {
    pub fn new(genus: u32, self_int: i64) -> Self {
        VertexData { genus, self_int }
    }

    /// A smooth rational curve with self-intersection -2.
    pub fn is_minus_two(&self) -> bool {
        self.genus == 0 && self.self_int == -2
    }

    pub fn is_minus_one(&self) -> bool {
        self.genus == 0 && self.self_int == -1
    }

    /// `K·A_i = 2 p_a(A_i) - 2 - A_i²` by adjunction.
    pub fn adjunction_degree(&self) -> i64 {
        2 * self.genus as i64 - 2 - self.self_int
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub mult: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct WeightedDualGraph {
    ids: Vec<String>,
    vertices: Vec<VertexData>,
    /// Sorted by `(a, b)` with `a < b`; one record per pair.
    edges: Vec<Edge>,
}

impl WeightedDualGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Build from vertex data and `(a, b, mult)` triples. Ids default to `v0, v1, …`.
    pub fn from_parts(vertices: Vec<VertexData>, edges: &[(usize, usize, u32)]) -> Result<Self> {
        let mut g = WeightedDualGraph::new();
        for (i, v) in vertices.into_iter().enumerate() {
            g.add_vertex(format!("v{i}"), v.genus, v.self_int)?;
        }
        for &(a, b, m) in edges {
            g.add_edge(a, b, m)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, id: impl Into<String>, genus: u32, self_int: i64) -> Result<usize> {
        let id = id.into();
        if self_int > -1 {
            return Err(Error::InvalidGraph(format!(
                "vertex {id}: self-intersection {self_int} must be <= -1"
            )));
        }
        if self.index_of(&id).is_some() {
            return Err(Error::InvalidGraph(format!("duplicate vertex id {id:?}")));
        }
        self.ids.push(id);
        self.vertices.push(VertexData::new(genus, self_int));
        Ok(self.vertices.len() - 1)
    }

    pub fn add_edge(&mut self, a: usize, b: usize, mult: u32) -> Result<()> {
        let n = self.vertices.len();
        if a >= n || b >= n {
            return Err(Error::InvalidGraph(format!("edge ({a}, {b}) out of range")));
        }
        if a == b {
            return Err(Error::InvalidGraph(format!("self-loop at vertex {}", self.ids[a])));
        }
        if mult == 0 {
            return Err(Error::InvalidGraph("edge multiplicity must be >= 1".into()));
        }
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        match self.edges.binary_search_by(|e| (e.a, e.b).cmp(&(a, b))) {
            Ok(_) => Err(Error::InvalidGraph(format!(
                "duplicate edge between {} and {}",
                self.ids[a], self.ids[b]
            ))),
            Err(pos) => {
                self.edges.insert(pos, Edge { a, b, mult });
                Ok(())
            }
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[VertexData] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> VertexData {
        self.vertices[i]
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Intersection number `A_a·A_b` for `a != b` (0 when not adjacent).
    pub fn edge_mult(&self, a: usize, b: usize) -> u32 {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        self.edges
            .binary_search_by(|e| (e.a, e.b).cmp(&(a, b)))
            .map(|pos| self.edges[pos].mult)
            .unwrap_or(0)
    }

    /// Neighbours of `i` with edge multiplicities, in index order.
    pub fn neighbors(&self, i: usize) -> Vec<(usize, u32)> {
        let mut out: Vec<(usize, u32)> = self
            .edges
            .iter()
            .filter_map(|e| {
                if e.a == i {
                    Some((e.b, e.mult))
                } else if e.b == i {
                    Some((e.a, e.mult))
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn degree(&self, i: usize) -> usize {
        self.edges.iter().filter(|e| e.a == i || e.b == i).count()
    }

    /// The matrix `(A_i·A_j)`: self-intersections on the diagonal, edge multiplicities off it.
    pub fn intersection_matrix(&self) -> RatMatrix {
        let n = self.num_vertices();
        let mut m = RatMatrix::zeros(n);
        for (i, v) in self.vertices.iter().enumerate() {
            m.set(i, i, int(v.self_int));
        }
        for e in &self.edges {
            m.set(e.a, e.b, int(e.mult as i64));
            m.set(e.b, e.a, int(e.mult as i64));
        }
        m
    }

    /// The vector `c` with `c_i = K·A_i = 2 p_a(A_i) - 2 - A_i²`.
    pub fn adjunction_degrees(&self) -> RatVector {
        self.vertices.iter().map(|v| int(v.adjunction_degree())).collect()
    }

    /// Connected components as sorted index lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.num_vertices();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in &self.edges {
            let (ra, rb) = (find(&mut parent, e.a), find(&mut parent, e.b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut comps: Vec<Vec<usize>> = Vec::new();
        let mut root_slot = vec![usize::MAX; n];
        for i in 0..n {
            let r = find(&mut parent, i);
            if root_slot[r] == usize::MAX {
                root_slot[r] = comps.len();
                comps.push(Vec::new());
            }
            comps[root_slot[r]].push(i);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    pub fn validate(&self) -> ValidationReport {
        let mut messages = Vec::new();
        let connected = self.num_vertices() > 0 && self.is_connected();
        if self.num_vertices() == 0 {
            messages.push("empty graph".to_string());
        } else if !connected {
            messages.push(format!("not connected: {} components", self.components().len()));
        }
        let negative_definite = self.num_vertices() > 0
            && linalg::is_negative_definite(&self.intersection_matrix()).unwrap_or(false);
        if !negative_definite {
            messages.push("intersection matrix is not negative definite".to_string());
        }
        let minus_ones: Vec<&str> = (0..self.num_vertices())
            .filter(|&i| self.vertices[i].is_minus_one())
            .map(|i| self.id(i))
            .collect();
        let minimal = minus_ones.is_empty();
        for id in minus_ones {
            messages.push(format!("not minimal: (-1)-curve {id}"));
        }
        ValidationReport {
            connected,
            negative_definite,
            minimal,
            messages,
        }
    }

    /// Errors in order of precedence: `(-1)`-curve, disconnected, not negative definite.
    pub fn require_admissible(&self) -> Result<()> {
        if self.num_vertices() == 0 {
            return Err(Error::InvalidGraph("empty graph".into()));
        }
        if let Some(i) = (0..self.num_vertices()).find(|&i| self.vertices[i].is_minus_one()) {
            return Err(Error::NotMinimal(self.id(i).to_string()));
        }
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        self.require_negative_definite()
    }

    pub fn require_negative_definite(&self) -> Result<()> {
        if self.num_vertices() == 0 {
            return Err(Error::InvalidGraph("empty graph".into()));
        }
        if linalg::is_negative_definite(&self.intersection_matrix())? {
            Ok(())
        } else {
            Err(Error::NotNegativeDefinite)
        }
    }

    /// Induced subgraph on `keep`, in the order given.
    pub fn subgraph(&self, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::Precondition("subgraph of an empty vertex subset".into()));
        }
        let mut pos = vec![usize::MAX; self.num_vertices()];
        for (new, &old) in keep.iter().enumerate() {
            if old >= self.num_vertices() || pos[old] != usize::MAX {
                return Err(Error::Precondition(format!("invalid vertex subset entry {old}")));
            }
            pos[old] = new;
        }
        let mut g = WeightedDualGraph::new();
        for &old in keep {
            let v = self.vertices[old];
            g.add_vertex(self.ids[old].clone(), v.genus, v.self_int)?;
        }
        for e in &self.edges {
            if pos[e.a] != usize::MAX && pos[e.b] != usize::MAX {
                g.add_edge(pos[e.a], pos[e.b], e.mult)?;
            }
        }
        Ok(g)
    }

    /// `v_{ij} = D·D'` for integral or rational cycles on this graph.
    pub fn intersect(&self, d: &[Rational], e: &[Rational]) -> Result<Rational> {
        let md = self.intersection_matrix().mul_vec(e)?;
        Ok(linalg::dot(d, &md))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("graph document serializes")
    }

    pub fn to_document(&self) -> GraphDocument {
        GraphDocument {
            vertices: (0..self.num_vertices())
                .map(|i| VertexRecord {
                    id: self.ids[i].clone(),
                    genus: self.vertices[i].genus,
                    self_int: self.vertices[i].self_int,
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeRecord {
                    a: self.ids[e.a].clone(),
                    b: self.ids[e.b].clone(),
                    m: e.mult,
                })
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: GraphDocument =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_document(&doc)
    }

    pub fn from_document(doc: &GraphDocument) -> Result<Self> {
        let mut g = WeightedDualGraph::new();
        for (k, v) in doc.vertices.iter().enumerate() {
            if v.self_int > -1 {
                return Err(Error::Parse(format!(
                    "vertices[{k}].self: {} must be <= -1",
                    v.self_int
                )));
            }
            g.add_vertex(v.id.clone(), v.genus, v.self_int)
                .map_err(|e| Error::Parse(format!("vertices[{k}]: {e}")))?;
        }
        let mut seen = HashSet::new();
        for (k, e) in doc.edges.iter().enumerate() {
            let a = g
                .index_of(&e.a)
                .ok_or_else(|| Error::Parse(format!("edges[{k}].a: unknown vertex {:?}", e.a)))?;
            let b = g
                .index_of(&e.b)
                .ok_or_else(|| Error::Parse(format!("edges[{k}].b: unknown vertex {:?}", e.b)))?;
            if a == b {
                return Err(Error::Parse(format!("edges[{k}]: self-loop at {:?}", e.a)));
            }
            if e.m == 0 {
                return Err(Error::Parse(format!("edges[{k}].m: multiplicity must be >= 1")));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::Parse(format!(
                    "edges[{k}]: duplicate edge between {:?} and {:?}",
                    e.a, e.b
                )));
            }
            g.add_edge(a, b, e.m)?;
        }
        Ok(g)
    }

    /// Graphviz rendering: nodes labelled `id [g, w]`, edge labels for multiplicity > 1.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph dual {\n");
        for i in 0..self.num_vertices() {
            let v = self.vertices[i];
            let _ = writeln!(
                s,
                "  n{i} [label=\"{} [{}, {}]\"];",
                self.ids[i], v.genus, v.self_int
            );
        }
        for e in &self.edges {
            if e.mult > 1 {
                let _ = writeln!(s, "  n{} -- n{} [label=\"{}\"];", e.a, e.b, e.mult);
            } else {
                let _ = writeln!(s, "  n{} -- n{};", e.a, e.b);
            }
        }
        s.push_str("}\n");
        s
    }
}

/// On-disk JSON form of a graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub vertices: Vec<VertexRecord>,
    #[serde(default)]
    pub edges: Vec<EdgeRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexRecord {
    pub id: String,
    pub genus: u32,
    #[serde(rename = "self")]
    pub self_int: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub a: String,
    pub b: String,
    pub m: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub connected: bool,
    pub negative_definite: bool,
    /// No genus-0 vertex with self-intersection -1.
    pub minimal: bool,
    pub messages: Vec<String>,
}

impl ValidationReport {
    pub fn is_admissible(&self) -> bool {
        self.connected && self.negative_definite && self.minimal
    }
}

/// A cycle `Σ d_i A_i` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cycle {
    #[serde(with = "crate::rational::serde_vec")]
    pub coefficients: RatVector,
}

impl Cycle {
    pub fn new(coefficients: RatVector) -> Self {
        Cycle { coefficients }
    }

    pub fn from_integers(coefficients: &[i64]) -> Self {
        Cycle::new(coefficients.iter().map(|&d| int(d)).collect())
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.coefficients.iter().all(|q| q.is_integer())
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|q| q.is_zero())
    }

    /// Integer coefficients, if integral and each fits in an `i64`.
    pub fn to_integers(&self) -> Option<Vec<i64>> {
        self.coefficients
            .iter()
            .map(|q| {
                if q.is_integer() {
                    i64::try_from(q.numer()).ok()
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn all_nonpositive(&self) -> bool {
        self.coefficients.iter().all(|q| !q.is_positive())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn chain(selfs: &[i64]) -> WeightedDualGraph {
        let vs = selfs.iter().map(|&w| VertexData::new(0, w)).collect();
        let es: Vec<_> = (1..selfs.len()).map(|i| (i - 1, i, 1)).collect();
        WeightedDualGraph::from_parts(vs, &es).unwrap()
    }

    #[test]
    fn matrices() {
        assert_eq!(chain(&[-3]).intersection_matrix(), RatMatrix::from_i64(&[[-3]]));
        assert_eq!(
            chain(&[-2, -2]).intersection_matrix(),
            RatMatrix::from_i64(&[[-2, 1], [1, -2]])
        );
        assert_eq!(
            chain(&[-3, -2]).intersection_matrix(),
            RatMatrix::from_i64(&[[-3, 1], [1, -2]])
        );
    }

    #[test]
    fn validation_flags() {
        let r = chain(&[-2, -2]).validate();
        assert!(r.connected && r.negative_definite && r.minimal && r.is_admissible());

        let r = chain(&[-1]).validate();
        assert!(!r.minimal);
        assert!(r.messages.iter().any(|m| m.contains("(-1)-curve")));

        let g = WeightedDualGraph::from_parts(
            vec![VertexData::new(0, -2), VertexData::new(0, -2)],
            &[(0, 1, 2)],
        )
        .unwrap();
        assert!(!g.validate().negative_definite);

        // genus 1, self -1 is not a (-1)-curve in the minimality sense
        let g = WeightedDualGraph::from_parts(vec![VertexData::new(1, -1)], &[]).unwrap();
        assert!(g.validate().is_admissible());

        let two = WeightedDualGraph::from_parts(
            vec![VertexData::new(0, -2), VertexData::new(0, -3)],
            &[],
        )
        .unwrap();
        let r = two.validate();
        assert!(!r.connected && r.negative_definite);
        assert_eq!(two.require_admissible(), Err(Error::Disconnected));
    }

    #[test]
    fn adjunction() {
        let g = WeightedDualGraph::from_parts(
            vec![
                VertexData::new(0, -3),
                VertexData::new(0, -2),
                VertexData::new(1, -5),
            ],
            &[],
        )
        .unwrap();
        assert_eq!(g.adjunction_degrees(), vec![int(1), int(0), int(5)]);
    }

    #[test]
    fn subgraphs() {
        let a3 = chain(&[-2, -2, -2]);
        assert_eq!(a3.subgraph(&[0, 1, 2]).unwrap(), a3);
        let mid = a3.subgraph(&[1]).unwrap();
        assert_eq!(mid.num_vertices(), 1);
        assert!(mid.vertex(0).is_minus_two());
        assert!(a3.subgraph(&[]).is_err());

        let mut star = WeightedDualGraph::new();
        let c = star.add_vertex("x", 0, -3).unwrap();
        for k in 0..3 {
            let leaf = star.add_vertex(format!("o{k}"), 0, -2).unwrap();
            star.add_edge(c, leaf, 1).unwrap();
        }
        let center = star.subgraph(&[c]).unwrap();
        assert_eq!(center.vertex(0), VertexData::new(0, -3));
        assert!(center.edges().is_empty());
    }

    #[test]
    fn construction_rejects_bad_edges() {
        let mut g = chain(&[-2, -2]);
        assert!(g.add_edge(1, 0, 1).is_err());
        assert!(g.add_edge(0, 0, 1).is_err());
        assert!(g.add_edge(0, 5, 1).is_err());
        assert!(g.add_vertex("v0", 0, -2).is_err());
        assert!(g.add_vertex("z", 0, 0).is_err());
    }

    #[test]
    fn json_documents() {
        let g = WeightedDualGraph::from_json(r#"{"vertices":[{"id":"x","genus":0,"self":-3}]}"#)
            .unwrap();
        assert_eq!(g.num_vertices(), 1);

        let dup = r#"{"vertices":[{"id":"a","genus":0,"self":-2},{"id":"b","genus":0,"self":-2}],
                      "edges":[{"a":"a","b":"b","m":1},{"a":"b","b":"a","m":1}]}"#;
        let err = WeightedDualGraph::from_json(dup).unwrap_err();
        assert!(matches!(err, Error::Parse(ref m) if m.contains("edges[1]")), "{err}");

        let bad_genus = r#"{"vertices":[{"id":"a","genus":-1,"self":-2}]}"#;
        let err = WeightedDualGraph::from_json(bad_genus).unwrap_err();
        assert!(matches!(err, Error::Parse(ref m) if m.contains("line")), "{err}");

        let bad_self = r#"{"vertices":[{"id":"a","genus":0,"self":0}]}"#;
        assert!(WeightedDualGraph::from_json(bad_self).is_err());

        let unknown = r#"{"vertices":[{"id":"a","genus":0,"self":-2}],"edges":[{"a":"a","b":"q","m":1}]}"#;
        assert!(WeightedDualGraph::from_json(unknown).is_err());

        let g = chain(&[-3, -2, -2]);
        assert_eq!(WeightedDualGraph::from_json(&g.to_json()).unwrap(), g);
    }

    #[test]
    fn dot_export() {
        let g = WeightedDualGraph::from_parts(
            vec![VertexData::new(0, -3), VertexData::new(1, -4)],
            &[(0, 1, 2)],
        )
        .unwrap();
        let dot = g.to_dot();
        assert!(dot.contains("label=\"v0 [0, -3]\""));
        assert!(dot.contains("n0 -- n1 [label=\"2\"]"));
    }

    #[test]
    fn cycles() {
        let c = Cycle::new(vec![rat(-1, 3), int(2)]);
        assert!(!c.is_integral());
        assert_eq!(Cycle::from_integers(&[2, 1]).to_integers(), Some(vec![2, 1]));
        let g = chain(&[-3, -2]);
        let z = Cycle::from_integers(&[1, 1]);
        assert_eq!(g.intersect(&z.coefficients, &z.coefficients).unwrap(), int(-3));
    }
}
