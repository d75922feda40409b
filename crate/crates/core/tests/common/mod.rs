//! Slow, independent reference computations used to check the library.
#![allow(dead_code)]

use kdg::rational::{int, Rational};
use kdg::{Cycle, VertexData, WeightedDualGraph};
use num_traits::{One, Signed, Zero};

/// Determinant by Laplace expansion along the first row.
pub fn cofactor_det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    if n == 0 {
        return Rational::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut total = Rational::zero();
    for col in 0..n {
        if m[0][col].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Rational>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != col)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][col] * cofactor_det(&minor);
        if col % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

pub fn int_matrix(rows: &[Vec<i64>]) -> Vec<Vec<Rational>> {
    rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
}

/// Coefficients of `det(λI - M)`, constant term first, by Faddeev–LeVerrier.
pub fn char_poly(m: &[Vec<Rational>]) -> Vec<Rational> {
    let n = m.len();
    let mul = |a: &[Vec<Rational>], b: &[Vec<Rational>]| -> Vec<Vec<Rational>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum())
                    .collect()
            })
            .collect()
    };
    // coeffs[k] multiplies λ^(n-k)
    let mut coeffs = vec![Rational::one()];
    let mut mk: Vec<Vec<Rational>> = vec![vec![Rational::zero(); n]; n];
    for k in 1..=n {
        let mut next = mul(m, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[k - 1];
        }
        mk = next;
        let am = mul(m, &mk);
        let trace: Rational = (0..n).map(|i| am[i][i].clone()).sum();
        coeffs.push(-trace / int(k as i64));
    }
    coeffs.reverse();
    coeffs
}

/// A symmetric matrix is negative definite iff every coefficient of its
/// characteristic polynomial is positive: the roots are real, and a real-rooted
/// monic polynomial has only negative roots exactly when its coefficients are
/// all positive.
pub fn negdef_oracle(m: &[Vec<Rational>]) -> bool {
    char_poly(m).iter().all(|c| c.is_positive())
}

/// `M⁻¹ c` by Cramer's rule with cofactor determinants.
pub fn cramer_solve(m: &[Vec<Rational>], c: &[Rational]) -> Option<Vec<Rational>> {
    let d = cofactor_det(m);
    if d.is_zero() {
        return None;
    }
    Some(
        (0..m.len())
            .map(|i| {
                let replaced: Vec<Vec<Rational>> = m
                    .iter()
                    .zip(c)
                    .map(|(row, ci)| {
                        let mut r = row.clone();
                        r[i] = ci.clone();
                        r
                    })
                    .collect();
                cofactor_det(&replaced) / &d
            })
            .collect(),
    )
}

pub fn graph_matrix(g: &WeightedDualGraph) -> Vec<Vec<Rational>> {
    let n = g.num_vertices();
    let mut m = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        m[i][i] = int(g.vertex(i).self_int);
    }
    for e in g.edges() {
        m[e.a][e.b] = int(e.mult as i64);
        m[e.b][e.a] = int(e.mult as i64);
    }
    m
}

pub fn adjunction(g: &WeightedDualGraph) -> Vec<Rational> {
    g.vertices()
        .iter()
        .map(|v| int(2 * v.genus as i64 - 2 - v.self_int))
        .collect()
}

/// `-K²` via Cramer's rule.
pub fn k_squared_oracle(g: &WeightedDualGraph) -> Rational {
    let m = graph_matrix(g);
    let c = adjunction(g);
    let k = cramer_solve(&m, &c).expect("nonsingular");
    let mut q = Rational::zero();
    for i in 0..k.len() {
        for j in 0..k.len() {
            q += &k[i] * &m[i][j] * &k[j];
        }
    }
    -q
}

/// The fundamental cycle as the componentwise minimum of all cycles
/// `1 <= z_i <= bound` with `Z·A_i <= 0`.
///
/// Anti-nef cycles are closed under taking minima, so if the box holds any
/// of them its minimum is the global one. Returns `None` if the box holds none.
pub fn fundamental_cycle_oracle(g: &WeightedDualGraph, bound: i64) -> Option<Vec<i64>> {
    let n = g.num_vertices();
    let m: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        g.vertex(i).self_int
                    } else {
                        g.edge_mult(i, j) as i64
                    }
                })
                .collect()
        })
        .collect();
    let mut z = vec![1i64; n];
    let mut best: Option<Vec<i64>> = None;
    loop {
        let anti_nef = (0..n).all(|i| (0..n).map(|j| m[i][j] * z[j]).sum::<i64>() <= 0);
        if anti_nef {
            best = Some(match best {
                None => z.clone(),
                Some(b) => b.iter().zip(&z).map(|(x, y)| *x.min(y)).collect(),
            });
        }
        let mut k = 0;
        loop {
            if k == n {
                return best;
            }
            if z[k] < bound {
                z[k] += 1;
                break;
            }
            z[k] = 1;
            k += 1;
        }
    }
}

pub fn chain(selfs: &[i64]) -> WeightedDualGraph {
    let verts: Vec<VertexData> = selfs.iter().map(|&s| VertexData::new(0, s)).collect();
    let edges: Vec<(usize, usize, u32)> = (1..selfs.len()).map(|i| (i - 1, i, 1)).collect();
    WeightedDualGraph::from_parts(verts, &edges).unwrap()
}

pub fn cycle_ints(c: &Cycle) -> Vec<i64> {
    c.to_integers().expect("integral cycle")
}
