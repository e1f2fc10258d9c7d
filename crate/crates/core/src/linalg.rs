//! Small dense linear algebra on `Vec`-backed vectors and matrices.
//!
//! Everything here is sized by the chart dimension (≤ 8) or the embedding
//! dimension (≤ 8), so plain loops with fixed summation order are used.

use crate::error::{Error, Result};
use crate::jets::Jet3;
use crate::scalar::Real;

pub type Vector<S> = Vec<S>;
pub type Matrix<S> = Vec<Vec<S>>;

/// Bilinear form of the embedding space: Euclidean, or Minkowski with the
/// last coordinate timelike.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Signature {
    Euclidean,
    Minkowski,
}

impl Signature {
    pub fn inner<S: Real>(self, a: &[S], b: &[S]) -> S {
        debug_assert_eq!(a.len(), b.len());
        let mut acc = S::zero();
        let last = a.len() - 1;
        for (i, (&x, &y)) in a.iter().zip(b).enumerate() {
            if i == last && self == Signature::Minkowski {
                acc = acc - x * y;
            } else {
                acc = acc + x * y;
            }
        }
        acc
    }

    pub fn inner_jets<S: Real>(self, a: &[Jet3<S>], b: &[Jet3<S>]) -> Jet3<S> {
        debug_assert_eq!(a.len(), b.len());
        let last = a.len() - 1;
        let signed = |i: usize| {
            let t = &a[i] * &b[i];
            if i == last && self == Signature::Minkowski {
                -t
            } else {
                t
            }
        };
        let mut acc = signed(0);
        for i in 1..a.len() {
            acc = acc + signed(i);
        }
        acc
    }

    /// Diagonal of the Gram matrix in the standard basis.
    pub fn diag<S: Real>(self, m: usize) -> Vec<S> {
        let mut d = vec![S::one(); m];
        if self == Signature::Minkowski {
            d[m - 1] = -S::one();
        }
        d
    }

    /// `sqrt(|⟨v, v⟩|)`.
    pub fn norm<S: Real>(self, v: &[S]) -> S {
        self.inner(v, v).abs().sqrt()
    }
}

pub fn norm<S: Real>(v: &[S]) -> S {
    Signature::Euclidean.norm(v)
}

pub fn dot<S: Real>(a: &[S], b: &[S]) -> S {
    Signature::Euclidean.inner(a, b)
}

pub fn scaled<S: Real>(v: &[S], s: S) -> Vector<S> {
    v.iter().map(|&x| x * s).collect()
}

pub fn add<S: Real>(a: &[S], b: &[S]) -> Vector<S> {
    a.iter().zip(b).map(|(&x, &y)| x + y).collect()
}

pub fn sub<S: Real>(a: &[S], b: &[S]) -> Vector<S> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

/// `y += s * x`.
pub fn axpy<S: Real>(y: &mut [S], s: S, x: &[S]) {
    for (a, &b) in y.iter_mut().zip(x) {
        *a = *a + s * b;
    }
}

pub fn zeros<S: Real>(n: usize) -> Vector<S> {
    vec![S::zero(); n]
}

pub fn identity<S: Real>(n: usize) -> Matrix<S> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect())
        .collect()
}

pub fn mat_vec<S: Real>(a: &Matrix<S>, x: &[S]) -> Vector<S> {
    a.iter().map(|row| dot(row, x)).collect()
}

pub fn mat_mul<S: Real>(a: &Matrix<S>, b: &Matrix<S>) -> Matrix<S> {
    let k = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..k).fold(S::zero(), |acc, l| acc + row[l] * b[l][j]))
                .collect()
        })
        .collect()
}

pub fn transpose<S: Real>(a: &Matrix<S>) -> Matrix<S> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| (0..rows).map(|i| a[i][j]).collect()).collect()
}

/// Largest absolute entry of `a − b`.
pub fn max_abs_diff<S: Real>(a: &Matrix<S>, b: &Matrix<S>) -> S {
    let mut m = S::zero();
    for (ra, rb) in a.iter().zip(b) {
        for (&x, &y) in ra.iter().zip(rb) {
            m = m.max((x - y).abs());
        }
    }
    m
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant<S: Real>(a: &Matrix<S>) -> S {
    let n = a.len();
    let mut m = a.clone();
    let mut det = S::one();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap())
            .unwrap();
        if m[piv][col] == S::zero() {
            return S::zero();
        }
        if piv != col {
            m.swap(col, piv);
            det = -det;
        }
        det = det * m[col][col];
        for i in (col + 1)..n {
            let f = m[i][col] / m[col][col];
            for j in col..n {
                m[i][j] = m[i][j] - f * m[col][j];
            }
        }
    }
    det
}

/// Gauss–Jordan inverse with partial pivoting.
pub fn inverse<S: Real>(a: &Matrix<S>) -> Result<Matrix<S>> {
    let n = a.len();
    let mut m: Matrix<S> = a.clone();
    let mut inv = identity::<S>(n);
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap())
            .unwrap();
        if m[piv][col].abs() < S::epsilon() {
            return Err(Error::Singular("matrix inverse pivot vanished".into()));
        }
        m.swap(col, piv);
        inv.swap(col, piv);
        let p = m[col][col];
        for j in 0..n {
            m[col][j] = m[col][j] / p;
            inv[col][j] = inv[col][j] / p;
        }
        for i in 0..n {
            if i != col {
                let f = m[i][col];
                if f != S::zero() {
                    for j in 0..n {
                        m[i][j] = m[i][j] - f * m[col][j];
                        inv[i][j] = inv[i][j] - f * inv[col][j];
                    }
                }
            }
        }
    }
    Ok(inv)
}

/// Inverse of a jet-valued symmetric positive definite matrix by
/// Gauss–Jordan without pivoting (pivots of an SPD matrix stay positive).
pub fn inverse_spd_jets<S: Real>(a: &[Vec<Jet3<S>>]) -> Result<Vec<Vec<Jet3<S>>>> {
    let n = a.len();
    let dim = a[0][0].dim();
    let mut m: Vec<Vec<Jet3<S>>> = a.to_vec();
    let mut inv: Vec<Vec<Jet3<S>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Jet3::constant(if i == j { S::one() } else { S::zero() }, dim))
                .collect()
        })
        .collect();
    for col in 0..n {
        if m[col][col].value() <= S::zero() {
            return Err(Error::Rank("metric is not positive definite".into()));
        }
        let r = m[col][col].recip()?;
        for j in 0..n {
            m[col][j] = &m[col][j] * &r;
            inv[col][j] = &inv[col][j] * &r;
        }
        for i in 0..n {
            if i == col {
                continue;
            }
            let f = m[i][col].clone();
            for j in 0..n {
                let t = &f * &m[col][j];
                m[i][j] = &m[i][j] - &t;
                let t = &f * &inv[col][j];
                inv[i][j] = &inv[i][j] - &t;
            }
        }
    }
    Ok(inv)
}

/// Eigen-decomposition of a small symmetric matrix by cyclic Jacobi rotations.
#[derive(Clone, Debug)]
pub struct SymmetricEigen<S> {
    /// Eigenvalues in ascending order.
    pub values: Vec<S>,
    /// `vectors[k]` is the unit eigenvector of `values[k]`.
    pub vectors: Vec<Vector<S>>,
}

pub fn symmetric_eigen<S: Real>(a: &Matrix<S>) -> SymmetricEigen<S> {
    let n = a.len();
    let mut m = a.clone();
    let mut v = identity::<S>(n);
    let two = S::lit(2.0);
    for _sweep in 0..100 {
        let mut off = S::zero();
        let mut scale = S::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off = off + m[i][j] * m[i][j];
                }
                scale = scale + m[i][j] * m[i][j];
            }
        }
        if off <= S::epsilon() * S::epsilon() * scale || off == S::zero() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if m[p][q] == S::zero() {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (two * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + S::one()).sqrt());
                let c = S::one() / (t * t + S::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for row in v.iter_mut() {
                    let vkp = row[p];
                    let vkq = row[q];
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i][i].partial_cmp(&m[j][j]).unwrap());
    SymmetricEigen {
        values: order.iter().map(|&k| m[k][k]).collect(),
        vectors: order
            .iter()
            .map(|&k| (0..n).map(|r| v[r][k]).collect())
            .collect(),
    }
}

/// Random orthogonal matrix from Gram–Schmidt on the supplied entries.
pub fn orthonormalize_rows<S: Real>(rows: &Matrix<S>) -> Result<Matrix<S>> {
    let mut out: Matrix<S> = Vec::with_capacity(rows.len());
    for r in rows {
        let mut v = r.clone();
        for _ in 0..2 {
            for q in &out {
                let c = dot(&v, q);
                axpy(&mut v, -c, q);
            }
        }
        let nv = norm(&v);
        if nv < S::lit(1e-8) {
            return Err(Error::Rank("rows are linearly dependent".into()));
        }
        out.push(scaled(&v, S::one() / nv));
    }
    Ok(out)
}
