use std::fmt;

use super::subspace::Subspace;
use super::vector::{field_inv, FFVector};
use crate::arith::is_prime;
use crate::error::{param_err, Result};

/// Largest characteristic handled by the byte-row kernels.
pub const MAX_CHAR: u32 = 251;

pub fn check_field(p: u32) -> Result<()> {
    if !is_prime(p as u64) {
        return Err(param_err!("characteristic {p} is not prime"));
    }
    if p > MAX_CHAR {
        return Err(param_err!("characteristic {p} exceeds {MAX_CHAR}"));
    }
    Ok(())
}

/// Dense matrix over `F_p`, stored as rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FFMatrix {
    p: u32,
    cols: usize,
    rows: Vec<FFVector>,
}

impl fmt::Debug for FFMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FFMatrix over F{} ({}x{})", self.p, self.nrows(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {:?}", r.to_vec())?;
        }
        Ok(())
    }
}

/// Result of Gauss-Jordan elimination.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: FFMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl FFMatrix {
    pub fn zero(p: u32, rows: usize, cols: usize) -> Self {
        FFMatrix {
            p,
            cols,
            rows: (0..rows).map(|_| FFVector::zero(p, cols)).collect(),
        }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        FFMatrix {
            p,
            cols: n,
            rows: (0..n).map(|i| FFVector::unit(p, n, i)).collect(),
        }
    }

    /// Build from residue rows; entries are reduced mod `p`.
    pub fn from_rows(p: u32, rows: &[Vec<u32>]) -> Result<Self> {
        check_field(p)?;
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(param_err!("ragged rows"));
        }
        Ok(FFMatrix {
            p,
            cols,
            rows: rows.iter().map(|r| FFVector::from_residues(p, r)).collect(),
        })
    }

    pub fn from_vectors(p: u32, cols: usize, rows: Vec<FFVector>) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == cols && r.p() == p));
        FFMatrix { p, cols, rows }
    }

    /// Column-convention permutation matrix: `e_i ↦ e_{perm[i]}`.
    pub fn permutation(p: u32, perm: &[u32]) -> Self {
        let n = perm.len();
        let mut m = Self::zero(p, n, n);
        for (i, &j) in perm.iter().enumerate() {
            m.rows[j as usize].set(i, 1);
        }
        m
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, x: u32) {
        self.rows[i].set(j, x % self.p)
    }

    pub fn row(&self, i: usize) -> &FFVector {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[FFVector] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<FFVector> {
        self.rows
    }

    pub fn to_vecs(&self) -> Vec<Vec<u32>> {
        self.rows.iter().map(|r| r.to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_zero())
    }

    pub fn transpose(&self) -> FFMatrix {
        let mut t = Self::zero(self.p, self.cols, self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            for j in 0..self.cols {
                let x = r.get(j);
                if x != 0 {
                    t.rows[j].set(i, x);
                }
            }
        }
        t
    }

    pub fn mul(&self, other: &FFMatrix) -> Result<FFMatrix> {
        if self.cols != other.nrows() || self.p != other.p {
            return Err(param_err!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows(),
                self.cols,
                other.nrows(),
                other.cols
            ));
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                FFVector::linear_combination(
                    self.p,
                    other.cols,
                    (0..self.cols)
                        .map(|k| (r.get(k), &other.rows[k]))
                        .filter(|(c, _)| *c != 0),
                )
            })
            .collect();
        Ok(FFMatrix {
            p: self.p,
            cols: other.cols,
            rows,
        })
    }

    /// `M v` with `v` a column vector.
    pub fn mul_vec(&self, v: &FFVector) -> Result<FFVector> {
        if v.len() != self.cols {
            return Err(param_err!("vector length {} vs {} columns", v.len(), self.cols));
        }
        Ok(self.apply(v))
    }

    /// Unchecked `M v`.
    pub(crate) fn apply(&self, v: &FFVector) -> FFVector {
        let mut out = FFVector::zero(self.p, self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            let x = r.dot(v);
            if x != 0 {
                out.set(i, x);
            }
        }
        out
    }

    pub fn add(&self, other: &FFMatrix) -> Result<FFMatrix> {
        self.add_scaled(1, other)
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: u32, other: &FFMatrix) -> Result<FFMatrix> {
        if self.nrows() != other.nrows() || self.cols != other.cols {
            return Err(param_err!("shape mismatch in matrix sum"));
        }
        let mut out = self.clone();
        for (a, b) in out.rows.iter_mut().zip(&other.rows) {
            a.axpy(c, b);
        }
        Ok(out)
    }

    pub fn scale(&mut self, c: u32) {
        for r in &mut self.rows {
            r.scale(c);
        }
    }

    pub fn trace(&self) -> u32 {
        let n = self.nrows().min(self.cols);
        (0..n).fold(0, |acc, i| (acc + self.get(i, i)) % self.p)
    }

    /// Unique reduced row-echelon form.
    pub fn rref(&self) -> Rref {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(r) = (rank..rows.len()).find(|&r| rows[r].get(col) != 0) else {
                continue;
            };
            rows.swap(rank, r);
            let lead = rows[rank].get(col);
            if lead != 1 {
                rows[rank].scale(field_inv(lead, self.p));
            }
            let (head, tail) = rows.split_at_mut(rank);
            let (pivot_row, tail) = tail.split_first_mut().unwrap();
            for other in head.iter_mut().chain(tail.iter_mut()) {
                let c = other.get(col);
                if c != 0 {
                    other.axpy(self.p - c, pivot_row);
                }
            }
            pivots.push(col);
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        Rref {
            matrix: FFMatrix {
                p: self.p,
                cols: self.cols,
                rows,
            },
            rank,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// `{x : M x = 0}`.
    pub fn kernel(&self) -> Subspace {
        let Rref {
            matrix,
            rank,
            pivots,
        } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = FFVector::unit(self.p, self.cols, free);
            for (k, &pc) in pivots.iter().enumerate().take(rank) {
                let x = matrix.rows[k].get(free);
                if x != 0 {
                    v.set(pc, self.p - x);
                }
            }
            basis.push(v);
        }
        Subspace::from_vectors(self.p, self.cols, basis)
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<FFMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.cols;
        let aug_rows: Vec<FFVector> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut a = FFVector::zero(self.p, 2 * n);
                for j in 0..n {
                    a.set(j, r.get(j));
                }
                a.set(n + i, 1);
                a
            })
            .collect();
        let r = FFMatrix::from_vectors(self.p, 2 * n, aug_rows).rref();
        if r.rank < n || (n > 0 && r.pivots[n - 1] >= n) {
            return None;
        }
        let rows = r
            .matrix
            .rows
            .iter()
            .map(|row| {
                let mut v = FFVector::zero(self.p, n);
                for j in 0..n {
                    v.set(j, row.get(n + j));
                }
                v
            })
            .collect();
        Some(FFMatrix {
            p: self.p,
            cols: n,
            rows,
        })
    }

    /// Some `x` with `M x = v`, or `None`.
    pub fn solve(&self, v: &FFVector) -> Result<Option<FFVector>> {
        if v.len() != self.nrows() {
            return Err(param_err!(
                "right-hand side length {} vs {} rows",
                v.len(),
                self.nrows()
            ));
        }
        let n = self.cols;
        let aug_rows: Vec<FFVector> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut a = FFVector::zero(self.p, n + 1);
                for j in 0..n {
                    a.set(j, r.get(j));
                }
                a.set(n, v.get(i));
                a
            })
            .collect();
        let aug = FFMatrix::from_vectors(self.p, n + 1, aug_rows);
        let Rref {
            matrix, pivots, ..
        } = aug.rref();
        if pivots.last() == Some(&n) {
            return Ok(None);
        }
        let mut x = FFVector::zero(self.p, n);
        for (k, &pc) in pivots.iter().enumerate() {
            x.set(pc, matrix.rows[k].get(n));
        }
        Ok(Some(x))
    }
}
