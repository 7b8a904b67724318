//! Exact dense matrices over the rationals.
//!
//! Rank and kernel computations run fraction-free (Bareiss) after clearing
//! denominators row by row. Matrices arising from graded Jacobian pieces can
//! reach a few hundred rows, where Bareiss minors grow too large; those are
//! routed through a modular engine whose answers are certified exactly (a
//! mod-p elimination bounds the rank from below, and an exactly verified
//! rational kernel bounds it from above).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::frac::Frac;
use crate::modrank;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FracMat {
    rows: usize,
    cols: usize,
    a: Vec<Frac>,
}

impl FracMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FracMat {
            rows,
            cols,
            a: vec![Frac::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = FracMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Frac::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Frac>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Internal("ragged rows".into()));
        }
        Ok(FracMat {
            rows: r,
            cols: c,
            a: rows.into_iter().flatten().collect(),
        })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Frac {
        &self.a[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Frac) {
        self.a[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> FracMat {
        let mut t = FracMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn matmul(&self, other: &FracMat) -> Result<FracMat> {
        if self.cols != other.rows {
            return Err(Error::Internal("matmul shape mismatch".into()));
        }
        let mut out = FracMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let v = self.get(i, k);
                if v.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let w = other.get(k, j);
                    if w.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j) + v * w;
                    out.set(i, j, cur);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Frac]) -> Result<Vec<Frac>> {
        if v.len() != self.cols {
            return Err(Error::Internal("mul_vec shape mismatch".into()));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut s = Frac::zero();
                for j in 0..self.cols {
                    let m = self.get(i, j);
                    if !m.is_zero() && !v[j].is_zero() {
                        s += m * &v[j];
                    }
                }
                s
            })
            .collect())
    }

    /// Rows scaled to integers (does not change rank or kernel).
    pub fn cleared_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let mut lcm = BigInt::one();
                for j in 0..self.cols {
                    lcm = lcm.lcm(self.get(i, j).denom());
                }
                (0..self.cols)
                    .map(|j| {
                        let f = self.get(i, j);
                        f.numer() * (&lcm / f.denom())
                    })
                    .collect()
            })
            .collect()
    }

    /// Exact rank and a basis of the right kernel via fraction-free (Bareiss)
    /// elimination. Kernel vectors are integral, content one, first nonzero
    /// entry positive, and satisfy `M v = 0` exactly.
    pub fn kernel_and_rank(&self) -> (usize, Vec<Vec<Frac>>) {
        let m = self.cleared_rows();
        let (rank, pivots, ech) = bareiss_echelon(m, self.cols);
        let kernel = kernel_from_echelon(&ech, &pivots, self.cols);
        debug_assert_eq!(rank + kernel.len(), self.cols);
        (rank, kernel)
    }

    /// Rank and pivot columns of the fraction-free echelon form.
    pub fn echelon_pivots(&self) -> (usize, Vec<usize>) {
        let m = self.cleared_rows();
        let (rank, pivots, _) = bareiss_echelon(m, self.cols);
        (rank, pivots)
    }

    /// Exact rank. Uses Bareiss directly on small matrices and the certified
    /// modular engine on large ones.
    pub fn rank_exact(&self) -> usize {
        if self.rows.min(self.cols) <= 32 || self.rows * self.cols <= 2400 {
            let m = self.cleared_rows();
            bareiss_echelon(m, self.cols).0
        } else {
            modrank::rank_certified(self)
        }
    }

    /// Exact right kernel basis (certified), for matrices too large for
    /// Bareiss back-substitution.
    pub fn kernel_exact(&self) -> Vec<Vec<Frac>> {
        if self.rows.min(self.cols) <= 32 || self.rows * self.cols <= 2400 {
            self.kernel_and_rank().1
        } else {
            modrank::kernel_certified(self)
        }
    }

    pub fn left_kernel_exact(&self) -> Vec<Vec<Frac>> {
        self.transpose().kernel_exact()
    }

    /// Determinant by Bareiss. Square matrices only.
    pub fn det(&self) -> Result<Frac> {
        if self.rows != self.cols {
            return Err(Error::Internal("det of non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Frac::one());
        }
        // clear a common denominator per row and divide back at the end
        let mut denom = Frac::one();
        let cleared = (0..n)
            .map(|i| {
                let mut lcm = BigInt::one();
                for j in 0..n {
                    lcm = lcm.lcm(self.get(i, j).denom());
                }
                denom *= Frac::from_integer(lcm.clone());
                (0..n)
                    .map(|j| {
                        let f = self.get(i, j);
                        f.numer() * (&lcm / f.denom())
                    })
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>();
        let d = bareiss_det(cleared);
        Ok(Frac::from_integer(d) / denom)
    }

    /// Inverse via Gauss-Jordan over the rationals. Intended for the small
    /// coordinate-change matrices.
    pub fn inverse(&self) -> Result<FracMat> {
        if self.rows != self.cols {
            return Err(Error::Internal("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug: Vec<Vec<Frac>> = (0..n)
            .map(|i| {
                let mut row: Vec<Frac> = (0..n).map(|j| self.get(i, j).clone()).collect();
                row.extend((0..n).map(|j| if i == j { Frac::one() } else { Frac::zero() }));
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| !aug[r][col].is_zero())
                .ok_or(Error::SingularTransform)?;
            aug.swap(col, piv);
            let inv = aug[col][col].clone();
            for x in aug[col].iter_mut() {
                *x /= &inv;
            }
            for r in 0..n {
                if r != col && !aug[r][col].is_zero() {
                    let f = aug[r][col].clone();
                    for j in 0..2 * n {
                        let upd = &aug[col][j] * &f;
                        aug[r][j] -= upd;
                    }
                }
            }
        }
        FracMat::from_rows(aug.into_iter().map(|r| r[n..].to_vec()).collect())
    }
}

/// One-step fraction-free row echelon. Returns rank, pivot columns and the
/// integer echelon rows.
fn bareiss_echelon(mut m: Vec<Vec<BigInt>>, cols: usize) -> (usize, Vec<usize>, Vec<Vec<BigInt>>) {
    let rows = m.len();
    let mut prev = BigInt::one();
    let mut r = 0usize;
    let mut pivots = Vec::new();
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let (head, tail) = m.split_at_mut(r + 1);
        let prow = &head[r];
        for row in tail.iter_mut() {
            let mic = row[c].clone();
            for j in (c + 1)..cols {
                let v = (&prow[c] * &row[j] - &mic * &prow[j]) / &prev;
                row[j] = v;
            }
            row[c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    (r, pivots, m)
}

fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut prev = BigInt::one();
    let mut sign = 1i32;
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return BigInt::zero();
        };
        if pr != c {
            m.swap(c, pr);
            sign = -sign;
        }
        let (head, tail) = m.split_at_mut(c + 1);
        let prow = &head[c];
        for row in tail.iter_mut() {
            let mic = row[c].clone();
            for j in (c + 1)..n {
                let v = (&prow[c] * &row[j] - &mic * &prow[j]) / &prev;
                row[j] = v;
            }
            row[c] = BigInt::zero();
        }
        prev = m[c][c].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Back-substitute the echelon form to a kernel basis, one vector per free
/// column. Vectors are normalized to integer entries with content one and
/// positive first nonzero entry.
fn kernel_from_echelon(ech: &[Vec<BigInt>], pivots: &[usize], cols: usize) -> Vec<Vec<Frac>> {
    let rank = pivots.len();
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; cols];
        for &p in pivots {
            v[p] = true;
        }
        v
    };
    let mut basis = Vec::new();
    for fc in 0..cols {
        if is_pivot[fc] {
            continue;
        }
        let mut v = vec![Frac::zero(); cols];
        v[fc] = Frac::one();
        for k in (0..rank).rev() {
            let pc = pivots[k];
            let mut s = Frac::zero();
            for j in (pc + 1)..cols {
                if !ech[k][j].is_zero() && !v[j].is_zero() {
                    s += Frac::from_integer(ech[k][j].clone()) * &v[j];
                }
            }
            v[pc] = -s / Frac::from_integer(ech[k][pc].clone());
        }
        normalize_vector(&mut v);
        basis.push(v);
    }
    basis
}

/// Scale to integer entries, content one, first nonzero entry positive.
pub(crate) fn normalize_vector(v: &mut [Frac]) {
    let mut lcm = BigInt::one();
    for x in v.iter() {
        lcm = lcm.lcm(x.denom());
    }
    let mut gcd = BigInt::zero();
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    for x in &ints {
        gcd = gcd.gcd(x);
    }
    if gcd.is_zero() {
        return;
    }
    let first = ints.iter().find(|x| !x.is_zero()).unwrap();
    let scale = if first.is_negative() { -gcd } else { gcd };
    for (slot, x) in v.iter_mut().zip(ints) {
        *slot = Frac::from_integer(x / &scale);
    }
}

/// An invertible change of homogeneous coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearChange {
    mat: FracMat,
    inv: FracMat,
}

impl LinearChange {
    pub fn new(mat: FracMat) -> Result<Self> {
        let inv = mat.inverse().map_err(|_| Error::SingularTransform)?;
        Ok(LinearChange { mat, inv })
    }

    pub fn identity(n: usize) -> Self {
        LinearChange {
            mat: FracMat::identity(n),
            inv: FracMat::identity(n),
        }
    }

    /// Columns are the images of the new basis vectors.
    pub fn from_columns(cols: Vec<Vec<Frac>>) -> Result<Self> {
        let n = cols.len();
        let mut m = FracMat::zeros(n, n);
        for (j, col) in cols.iter().enumerate() {
            if col.len() != n {
                return Err(Error::Internal("column length mismatch".into()));
            }
            for i in 0..n {
                m.set(i, j, col[i].clone());
            }
        }
        LinearChange::new(m)
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn mat(&self) -> &FracMat {
        &self.mat
    }

    pub fn inverse(&self) -> LinearChange {
        LinearChange {
            mat: self.inv.clone(),
            inv: self.mat.clone(),
        }
    }

    /// `self` then `other`: substituting through `compose` equals applying
    /// `self` first and `other` second.
    pub fn compose(&self, other: &LinearChange) -> LinearChange {
        let mat = self.mat.matmul(&other.mat).expect("square");
        let inv = other.inv.matmul(&self.inv).expect("square");
        LinearChange { mat, inv }
    }

    /// Image of a point (column vector).
    pub fn apply_point(&self, p: &[Frac]) -> Result<Vec<Frac>> {
        self.mat.mul_vec(p)
    }

    pub fn apply_point_inv(&self, p: &[Frac]) -> Result<Vec<Frac>> {
        self.inv.mul_vec(p)
    }

    pub fn is_identity(&self) -> bool {
        self.mat == FracMat::identity(self.dim())
    }

    pub fn det(&self) -> Frac {
        self.mat.det().expect("square")
    }
}
