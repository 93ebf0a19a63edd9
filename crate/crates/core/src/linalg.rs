//! Dense exact rational linear algebra: reduced row echelon form, kernels,
//! span comparison and orthogonal complements. Pivoting is deterministic
//! (first nonzero entry in column order) so all outputs are reproducible.

use crate::error::{Error, Result};
use crate::scalar::Rational;
use alloc::vec::Vec;
use alloc::{format, vec};
use num_traits::{One, Zero};

pub type Vector = Vec<Rational>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vector>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|v| v.len()).unwrap_or(0);
        for row in &rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch { left: c, right: row.len() });
            }
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vector> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mat_mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { left: self.cols, right: other.rows });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(r, c).clone();
                    out.set(r, c, cur + a * b);
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Rational]) -> Result<Vector> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch { left: self.cols, right: v.len() });
        }
        Ok((0..self.rows)
            .map(|r| {
                let mut acc = Rational::zero();
                for c in 0..self.cols {
                    let a = self.get(r, c);
                    if !a.is_zero() && !v[c].is_zero() {
                        acc += a * &v[c];
                    }
                }
                acc
            })
            .collect())
    }
}

#[derive(Debug, Clone)]
pub struct Rref {
    pub reduced: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Reduced row echelon form with deterministic pivoting: for each column in
/// order, the first row with a nonzero entry becomes the pivot row.
pub fn rref(m: &Matrix) -> Rref {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut pivots = Vec::new();
    let mut pr = 0usize;
    for pc in 0..cols {
        if pr >= rows {
            break;
        }
        let Some(sel) = (pr..rows).find(|&r| !a.get(r, pc).is_zero()) else {
            continue;
        };
        if sel != pr {
            for c in 0..cols {
                let tmp = a.get(sel, c).clone();
                a.set(sel, c, a.get(pr, c).clone());
                a.set(pr, c, tmp);
            }
        }
        let inv = {
            let p = a.get(pr, pc).clone();
            Rational::one() / p
        };
        for c in pc..cols {
            let v = a.get(pr, c).clone() * &inv;
            a.set(pr, c, v);
        }
        for r in 0..rows {
            if r == pr || a.get(r, pc).is_zero() {
                continue;
            }
            let factor = a.get(r, pc).clone();
            for c in pc..cols {
                let v = a.get(r, c).clone() - &factor * a.get(pr, c);
                a.set(r, c, v);
            }
        }
        pivots.push(pc);
        pr += 1;
    }
    Rref { reduced: a, rank: pr, pivots }
}

pub fn rank(rows: &[Vector]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    rref(&Matrix::from_rows(rows.to_vec()).expect("ragged rows")).rank
}

/// Basis of `{ v | m v = 0 }`; size is `cols - rank`.
pub fn kernel_basis(m: &Matrix) -> Vec<Vector> {
    let r = rref(m);
    let cols = m.cols;
    let mut is_pivot = vec![false; cols];
    for &p in &r.pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..cols).filter(|&c| !is_pivot[c]).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &fc in &free {
        let mut v = vec![Rational::zero(); cols];
        v[fc] = Rational::one();
        for (prow, &pc) in r.pivots.iter().enumerate() {
            let coeff = r.reduced.get(prow, fc).clone();
            if !coeff.is_zero() {
                v[pc] = -coeff;
            }
        }
        basis.push(v);
    }
    basis
}

fn check_same_dim(a: &[Vector], b: &[Vector]) -> Result<usize> {
    let dim = a.iter().chain(b.iter()).map(|v| v.len()).next().unwrap_or(0);
    for v in a.iter().chain(b.iter()) {
        if v.len() != dim {
            return Err(Error::DimensionMismatch { left: dim, right: v.len() });
        }
    }
    Ok(dim)
}

/// True iff the rational spans coincide, via ranks of stacked matrices.
pub fn span_equal(a: &[Vector], b: &[Vector]) -> Result<bool> {
    check_same_dim(a, b)?;
    let ra = rank(a);
    let rb = rank(b);
    if ra != rb {
        return Ok(false);
    }
    let mut stacked = a.to_vec();
    stacked.extend(b.iter().cloned());
    Ok(rank(&stacked) == ra)
}

/// True iff `span(sub)` is contained in `span(sup)`.
pub fn span_contains(sup: &[Vector], sub: &[Vector]) -> Result<bool> {
    check_same_dim(sup, sub)?;
    let rs = rank(sup);
    let mut stacked = sup.to_vec();
    stacked.extend(sub.iter().cloned());
    Ok(rank(&stacked) == rs)
}

/// True iff `v` lies in the span of `rows`.
pub fn span_member(rows: &[Vector], v: &Vector) -> Result<bool> {
    span_contains(rows, core::slice::from_ref(v))
}

/// Canonical basis of a span: the nonzero rows of the RREF.
pub fn span_basis(rows: &[Vector]) -> Vec<Vector> {
    if rows.is_empty() {
        return Vec::new();
    }
    let r = rref(&Matrix::from_rows(rows.to_vec()).expect("ragged rows"));
    (0..r.rank).map(|i| r.reduced.row(i).to_vec()).collect()
}

/// Basis of `{ w | <v, w> = 0 for all v in span }` for a nondegenerate square
/// pairing: the kernel of `S P` where `S` stacks the spanning vectors.
pub fn orthogonal_complement(span: &[Vector], pairing: &Matrix) -> Result<Vec<Vector>> {
    if pairing.rows() != pairing.cols() {
        return Err(Error::DimensionMismatch { left: pairing.rows(), right: pairing.cols() });
    }
    if rref(pairing).rank != pairing.rows() {
        return Err(Error::DegeneratePairing);
    }
    let dim = pairing.rows();
    if span.is_empty() {
        return Ok(Matrix::identity(dim).row_vecs());
    }
    for v in span {
        if v.len() != dim {
            return Err(Error::DimensionMismatch { left: dim, right: v.len() });
        }
    }
    let s = Matrix::from_rows(span.to_vec())?;
    let sp = s.mat_mul(pairing)?;
    Ok(kernel_basis(&sp))
}

/// Solves `stack(x, y)` in `ker [A | -U]` and returns the basis of the
/// projection to the `x` block: all `x` with `A x` in the column span of `U`.
/// `A` is given by columns (images of basis vectors); `u` spans the target.
pub fn preimage_of_span(a_cols: &[Vector], u: &[Vector]) -> Result<Vec<Vector>> {
    let out_dim = a_cols.first().map(|v| v.len()).unwrap_or(0);
    for v in a_cols.iter().chain(u.iter()) {
        if v.len() != out_dim {
            return Err(Error::DimensionMismatch { left: out_dim, right: v.len() });
        }
    }
    let n = a_cols.len();
    let k = u.len();
    // rows = out_dim, cols = n + k
    let mut m = Matrix::zeros(out_dim, n + k);
    for (j, col) in a_cols.iter().enumerate() {
        for i in 0..out_dim {
            m.set(i, j, col[i].clone());
        }
    }
    for (j, col) in u.iter().enumerate() {
        for i in 0..out_dim {
            m.set(i, n + j, -col[i].clone());
        }
    }
    let ker = kernel_basis(&m);
    let projected: Vec<Vector> = ker.into_iter().map(|v| v[..n].to_vec()).collect();
    Ok(span_basis(&projected))
}

/// Pretty-printer for error messages.
pub fn format_vector(v: &[Rational]) -> alloc::string::String {
    let parts: Vec<alloc::string::String> = v.iter().map(|x| format!("{x}")).collect();
    format!("[{}]", parts.join(", "))
}
