use crate::error::Error;
use crate::exactmath::{Field, Scalar};

/// Dense row-major matrix over the session field.  `0 x n` and `n x 0`
/// matrices are legal and show up constantly as empty Hom-spaces.
#[derive(Clone, PartialEq, Debug)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            field,
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Matrix::zero(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.at(i, j).add(&a.mul(b));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row >= self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.at(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(row, p);
            let inv = self.at(row, col).inv().expect("pivot nonzero");
            for j in col..self.cols {
                let v = self.at(row, j).mul(&inv);
                self.set(row, j, v);
            }
            for r in 0..self.rows {
                if r == row || self.at(r, col).is_zero() {
                    continue;
                }
                let factor = self.at(r, col).clone();
                for j in col..self.cols {
                    let v = self.at(r, j).sub(&factor.mul(self.at(row, j)));
                    self.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            let ia = a * self.cols + j;
            let ib = b * self.cols + j;
            self.entries.swap(ia, ib);
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Rank together with a kernel basis, returned as the columns of a
    /// `cols x nullity` matrix.  Exact: `self * basis = 0` on the nose.
    pub fn rank_kernel(&self) -> (usize, Matrix) {
        let mut m = self.clone();
        let pivots = m.rref();
        let rank = pivots.len();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut kernel = Matrix::zero(self.field, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            kernel.set(fc, k, self.field.one());
            for (r, &pc) in pivots.iter().enumerate() {
                kernel.set(pc, k, m.at(r, fc).neg());
            }
        }
        (rank, kernel)
    }

    /// Solves `self * x = b` for each column of `b`; `None` when inconsistent.
    pub fn solve(&self, b: &Matrix) -> Result<Option<Matrix>, Error> {
        if self.rows != b.rows {
            return Err(Error::Dimension(format!(
                "solve: {} rows vs {} rows",
                self.rows, b.rows
            )));
        }
        // Row-reduce the augmented matrix, pivoting only inside `self`.
        let mut aug = Matrix::zero(self.field, self.rows, self.cols + b.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.at(i, j).clone());
            }
            for j in 0..b.cols {
                aug.set(i, self.cols + j, b.at(i, j).clone());
            }
        }
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row >= aug.rows {
                break;
            }
            let Some(p) = (row..aug.rows).find(|&r| !aug.at(r, col).is_zero()) else {
                continue;
            };
            aug.swap_rows(row, p);
            let inv = aug.at(row, col).inv().expect("pivot nonzero");
            for j in col..aug.cols {
                let v = aug.at(row, j).mul(&inv);
                aug.set(row, j, v);
            }
            for r in 0..aug.rows {
                if r == row || aug.at(r, col).is_zero() {
                    continue;
                }
                let factor = aug.at(r, col).clone();
                for j in col..aug.cols {
                    let v = aug.at(r, j).sub(&factor.mul(aug.at(row, j)));
                    aug.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        for r in row..self.rows {
            for j in 0..b.cols {
                if !aug.at(r, self.cols + j).is_zero() {
                    return Ok(None);
                }
            }
        }
        let mut x = Matrix::zero(self.field, self.cols, b.cols);
        for (r, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(pc, j, aug.at(r, self.cols + j).clone());
            }
        }
        Ok(Some(x))
    }

    /// Indices of `candidates` columns that enlarge the column space of
    /// `self`, scanned left to right.  Used to lift quotient-space bases.
    pub fn column_space_extension(&self, candidates: &Matrix) -> Vec<usize> {
        assert_eq!(self.rows, candidates.rows);
        let mut basis = self.clone();
        let mut rank = basis.rank();
        let mut picked = Vec::new();
        for j in 0..candidates.cols {
            let mut trial = Matrix::zero(self.field, self.rows, basis.cols + 1);
            for i in 0..self.rows {
                for c in 0..basis.cols {
                    trial.set(i, c, basis.at(i, c).clone());
                }
                trial.set(i, basis.cols, candidates.at(i, j).clone());
            }
            let r = trial.rank();
            if r > rank {
                rank = r;
                basis = trial;
                picked.push(j);
            }
        }
        picked
    }
}
