//! Exact dense linear algebra over [`Rational`].
//!
//! Integral inputs go through fraction-free (Bareiss) elimination on
//! [`BigInt`]s, which keeps every intermediate value a minor of the input.
//! Matrices with genuinely rational entries use ordinary Gaussian
//! elimination over the rationals.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

pub type RatVector = Vec<Rational>;

/// Square matrix of exact rationals, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    dim: usize,
    entries: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(dim: usize) -> Self {
        RatMatrix {
            dim,
            entries: vec![Rational::zero(); dim * dim],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::NotSquare {
                    rows: dim,
                    cols: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(RatMatrix { dim, entries })
    }

    /// Convenience constructor for integer matrices. Panics if not square.
    pub fn from_i64<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| Rational::from_integer(x.into())).collect())
            .collect();
        Self::from_rows(rows).expect("square integer matrix")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.entries[i * self.dim + j] = value;
    }

    pub fn add_to(&mut self, i: usize, j: usize, delta: &Rational) {
        self.entries[i * self.dim + j] += delta;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        (0..self.dim).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = RatMatrix::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (i + 1..self.dim).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|q| q.is_integer())
    }

    /// The submatrix on `keep` (rows and columns, in the given order).
    pub fn principal_submatrix(&self, keep: &[usize]) -> Self {
        let mut out = RatMatrix::zeros(keep.len());
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<RatVector> {
        self.check_len(v.len())?;
        Ok((0..self.dim).map(|i| dot(self.row(i), v)).collect())
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: len,
            });
        }
        Ok(())
    }

    fn to_bigint_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.dim)
            .map(|i| self.row(i).iter().map(|q| q.numer().clone()).collect())
            .collect()
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Exact determinant. The empty matrix has determinant 1.
pub fn det(m: &RatMatrix) -> Rational {
    if m.is_integral() {
        Rational::from_integer(bareiss_det(m.to_bigint_rows()))
    } else {
        gaussian_det(m.rows())
    }
}

fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

fn gaussian_det(mut a: Vec<Vec<Rational>>) -> Rational {
    let n = a.len();
    let mut d = Rational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return Rational::zero();
        };
        if p != k {
            a.swap(k, p);
            d = -d;
        }
        let pivot = a[k][k].clone();
        d *= &pivot;
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &pivot;
            for j in k..n {
                let v = &f * &a[k][j];
                a[i][j] -= v;
            }
        }
    }
    d
}

/// Leading principal minors `det(m[..k, ..k])` for `k = 1..=dim`.
pub fn leading_principal_minors(m: &RatMatrix) -> Vec<Rational> {
    let n = m.dim();
    let mut minors = Vec::with_capacity(n);
    if m.is_integral() {
        // Without pivoting, the k-th Bareiss pivot is the k-th leading minor.
        let mut a = m.to_bigint_rows();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                break;
            }
            minors.push(Rational::from_integer(a[k][k].clone()));
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
    } else {
        let mut a = m.rows();
        let mut acc = Rational::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                break;
            }
            acc *= &a[k][k];
            minors.push(acc.clone());
            let pivot = a[k][k].clone();
            for i in k + 1..n {
                let f = &a[i][k] / &pivot;
                for j in k..n {
                    let v = &f * &a[k][j];
                    a[i][j] -= v;
                }
            }
        }
    }
    // a zero pivot: the remaining minors need their own determinants
    for k in minors.len()..n {
        let keep: Vec<usize> = (0..=k).collect();
        minors.push(det(&m.principal_submatrix(&keep)));
    }
    minors
}

/// Sign test on leading principal minors: `(-1)^k det_k > 0` for every `k`.
pub fn is_negative_definite(m: &RatMatrix) -> Result<bool> {
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let minors = leading_principal_minors(m);
    Ok(minors.iter().enumerate().all(|(k, d)| {
        // k is 0-based, so the minor has size k + 1
        if k % 2 == 0 {
            d.is_negative()
        } else {
            d.is_positive()
        }
    }))
}

/// Exact solution of `m x = c`.
pub fn solve(m: &RatMatrix, c: &[Rational]) -> Result<RatVector> {
    m.check_len(c.len())?;
    if m.is_integral() {
        bareiss_solve(m, c)
    } else {
        gaussian_solve(m.rows(), c.to_vec())
    }
}

fn bareiss_solve(m: &RatMatrix, c: &[Rational]) -> Result<RatVector> {
    let n = m.dim();
    // Scale the right-hand side to integers; the scale divides out at the end.
    let scale = crate::rational::denominator_lcm(c);
    let mut a = m.to_bigint_rows();
    for (row, ci) in a.iter_mut().zip(c) {
        row.push((ci * Rational::from_integer(scale.clone())).to_integer());
    }
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let r = (k + 1..n)
                .find(|&r| !a[r][k].is_zero())
                .ok_or(Error::Singular { stage: k })?;
            a.swap(k, r);
        }
        for i in k + 1..n {
            for j in k + 1..=n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = Rational::from_integer(a[i][n].clone());
        for j in i + 1..n {
            acc -= Rational::from_integer(a[i][j].clone()) * &x[j];
        }
        x[i] = acc / Rational::from_integer(a[i][i].clone());
    }
    let scale = Rational::from_integer(scale);
    Ok(x.into_iter().map(|v| v / &scale).collect())
}

fn gaussian_solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Result<RatVector> {
    let n = a.len();
    for k in 0..n {
        let p = (k..n)
            .find(|&r| !a[r][k].is_zero())
            .ok_or(Error::Singular { stage: k })?;
        if p != k {
            a.swap(k, p);
            b.swap(k, p);
        }
        let pivot = a[k][k].clone();
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &pivot;
            for j in k..n {
                let v = &f * &a[k][j];
                a[i][j] -= v;
            }
            let v = &f * &b[k];
            b[i] -= v;
        }
    }
    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = b[i].clone();
        for j in i + 1..n {
            acc -= &a[i][j] * &x[j];
        }
        x[i] = acc / &a[i][i];
    }
    Ok(x)
}

/// `vᵀ m v`.
pub fn quadratic_form(m: &RatMatrix, v: &[Rational]) -> Result<Rational> {
    let mv = m.mul_vec(v)?;
    Ok(dot(v, &mv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn determinants() {
        assert_eq!(det(&RatMatrix::from_i64(&[[-3]])), int(-3));
        assert_eq!(det(&RatMatrix::from_i64(&[[-2, 1], [1, -2]])), int(3));
        assert_eq!(det(&RatMatrix::zeros(0)), int(1));
        // needs a row swap
        assert_eq!(det(&RatMatrix::from_i64(&[[0, 1], [1, 0]])), int(-1));
        let r = RatMatrix::from_rows(vec![
            vec![rat(-3, 2), rat(1, 2)],
            vec![rat(1, 2), rat(-3, 2)],
        ])
        .unwrap();
        assert_eq!(det(&r), int(2));
    }

    #[test]
    fn negative_definiteness() {
        let a2 = RatMatrix::from_i64(&[[-2, 1], [1, -2]]);
        assert!(is_negative_definite(&a2).unwrap());
        assert!(!is_negative_definite(&RatMatrix::from_i64(&[[-2, 2], [2, -2]])).unwrap());
        assert!(!is_negative_definite(&RatMatrix::from_i64(&[[-1, 2], [2, -1]])).unwrap());
        assert_eq!(
            is_negative_definite(&RatMatrix::from_i64(&[[-2, 1], [0, -2]])),
            Err(Error::NotSymmetric)
        );
        // zero leading minor followed by nonzero ones
        let m = RatMatrix::from_i64(&[[0, 1], [1, 0]]);
        assert_eq!(leading_principal_minors(&m), vec![int(0), int(-1)]);
        assert!(!is_negative_definite(&m).unwrap());
    }

    #[test]
    fn solves() {
        let x = solve(&RatMatrix::from_i64(&[[-3]]), &[int(1)]).unwrap();
        assert_eq!(x, vec![rat(-1, 3)]);
        let m = RatMatrix::from_i64(&[[-3, 1], [1, -2]]);
        let x = solve(&m, &[int(1), int(0)]).unwrap();
        assert_eq!(x, vec![rat(-2, 5), rat(-1, 5)]);
        assert_eq!(quadratic_form(&m, &x).unwrap(), rat(-2, 5));
        let a3 = RatMatrix::from_i64(&[[-2, 1, 0], [1, -2, 1], [0, 1, -2]]);
        assert_eq!(solve(&a3, &[int(0), int(0), int(0)]).unwrap(), vec![int(0); 3]);
        // rational right-hand side through the integral path
        let x = solve(&m, &[rat(1, 2), int(0)]).unwrap();
        assert_eq!(x, vec![rat(-1, 5), rat(-1, 10)]);
    }

    #[test]
    fn singular_reports_stage() {
        let m = RatMatrix::from_i64(&[[-2, 2], [2, -2]]);
        assert_eq!(solve(&m, &[int(1), int(0)]), Err(Error::Singular { stage: 1 }));
        let r = RatMatrix::from_rows(vec![
            vec![rat(1, 2), rat(1, 2)],
            vec![rat(1, 2), rat(1, 2)],
        ])
        .unwrap();
        assert_eq!(solve(&r, &[int(1), int(0)]), Err(Error::Singular { stage: 1 }));
    }

    #[test]
    fn rational_solve_and_form() {
        let r = RatMatrix::from_rows(vec![
            vec![rat(-3, 2), rat(1, 2)],
            vec![rat(1, 2), rat(-3, 2)],
        ])
        .unwrap();
        let x = solve(&r, &[int(1), int(1)]).unwrap();
        assert_eq!(x, vec![int(-1), int(-1)]);
        assert_eq!(r.mul_vec(&x).unwrap(), vec![int(1), int(1)]);
        assert_eq!(quadratic_form(&r, &[int(0), int(0)]).unwrap(), int(0));
        assert!(quadratic_form(&r, &[int(0)]).is_err());
    }
}
