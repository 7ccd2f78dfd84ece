use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix with arbitrary-precision entries.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows_i64(rows: Vec<Vec<i64>>) -> IntMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().map(BigInt::from).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.at(i, j) + a * other.at(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -self.at(r, j);
            self.set(r, j, v);
        }
    }

    /// row[dest] += c * row[src]
    fn row_addmul(&mut self, dest: usize, src: usize, c: &BigInt) {
        for j in 0..self.cols {
            let v = self.at(dest, j) + c * self.at(src, j);
            self.set(dest, j, v);
        }
    }

    /// col[dest] += c * col[src]
    fn col_addmul(&mut self, dest: usize, src: usize, c: &BigInt) {
        for i in 0..self.rows {
            let v = self.at(i, dest) + c * self.at(i, src);
            self.set(i, dest, v);
        }
    }
}

/// Smith normal form `U * A * V = diag(d_1, ..., d_r)` with `d_i | d_{i+1}`,
/// all `d_i > 0`, and `U`, `V` unimodular.  `diagonal` holds exactly the `r`
/// positive invariant factors.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diagonal: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// `U * a * V` as a full rows x cols diagonal matrix, for checking.
    pub fn diagonal_matrix(&self, rows: usize, cols: usize) -> IntMatrix {
        let mut d = IntMatrix::zero(rows, cols);
        for (i, f) in self.diagonal.iter().enumerate() {
            d.set(i, i, f.clone());
        }
        d
    }
}

/// Elementary row/column reduction with minimal-absolute-value pivoting,
/// tracking the unimodular transforms.  Entries can grow, hence `BigInt`.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let rows = a.rows();
    let cols = a.cols();
    let mut b = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    let mut k = 0;
    while k < rows.min(cols) {
        let Some((pi, pj)) = min_abs_nonzero(&b, k) else {
            break;
        };
        b.swap_rows(k, pi);
        u.swap_rows(k, pi);
        b.swap_cols(k, pj);
        v.swap_cols(k, pj);

        loop {
            // Move the smallest remaining entry to the pivot seat.
            let (pi, pj) = min_abs_nonzero(&b, k).expect("pivot exists");
            b.swap_rows(k, pi);
            u.swap_rows(k, pi);
            b.swap_cols(k, pj);
            v.swap_cols(k, pj);
            if b.at(k, k).is_negative() {
                b.negate_row(k);
                u.negate_row(k);
            }

            let pivot = b.at(k, k).clone();
            let mut clean = true;
            for r in k + 1..rows {
                let q = b.at(r, k) / &pivot;
                if !q.is_zero() {
                    let c = -q;
                    b.row_addmul(r, k, &c);
                    u.row_addmul(r, k, &c);
                }
                if !b.at(r, k).is_zero() {
                    clean = false;
                }
            }
            for c in k + 1..cols {
                let q = b.at(k, c) / &pivot;
                if !q.is_zero() {
                    let m = -q;
                    b.col_addmul(c, k, &m);
                    v.col_addmul(c, k, &m);
                }
                if !b.at(k, c).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Pivot row/column are clear; enforce divisibility of the rest.
            match find_nondivisible(&b, k, &pivot) {
                Some((r, _)) => {
                    b.row_addmul(k, r, &BigInt::one());
                    u.row_addmul(k, r, &BigInt::one());
                }
                None => break,
            }
        }
        k += 1;
    }

    let mut diagonal = Vec::new();
    for i in 0..rows.min(cols) {
        if b.at(i, i).is_zero() {
            break;
        }
        diagonal.push(b.at(i, i).clone());
    }
    SmithForm { diagonal, u, v }
}

fn min_abs_nonzero(b: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    let mut best_abs = BigInt::zero();
    for i in k..b.rows() {
        for j in k..b.cols() {
            let e = b.at(i, j);
            if e.is_zero() {
                continue;
            }
            let a = e.abs();
            if best.is_none() || a < best_abs {
                best = Some((i, j));
                best_abs = a;
            }
        }
    }
    best
}

fn find_nondivisible(b: &IntMatrix, k: usize, pivot: &BigInt) -> Option<(usize, usize)> {
    for i in k + 1..b.rows() {
        for j in k + 1..b.cols() {
            if !b.at(i, j).mod_floor(pivot).is_zero() {
                return Some((i, j));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{Field, Matrix};

    fn check(a: &IntMatrix) -> SmithForm {
        let snf = smith_normal_form(a);
        // U * A * V equals the diagonal form.
        let lhs = snf.u.mul(a).mul(&snf.v);
        assert_eq!(lhs, snf.diagonal_matrix(a.rows(), a.cols()));
        // Divisibility chain and positivity.
        for w in snf.diagonal.windows(2) {
            assert!(w[1].mod_floor(&w[0]).is_zero(), "{} | {}", w[0], w[1]);
        }
        assert!(snf.diagonal.iter().all(|d| d.is_positive()));
        // Transforms are unimodular.
        assert!(det(&snf.u).abs().is_one());
        assert!(det(&snf.v).abs().is_one());
        snf
    }

    fn det(m: &IntMatrix) -> BigInt {
        // Determinant over Q via elimination; exact because entries are integers.
        let n = m.rows();
        assert_eq!(n, m.cols());
        let mut q = Matrix::zero(Field::Q, n, n);
        for i in 0..n {
            for j in 0..n {
                q.set(i, j, Field::Q.parse(&m.at(i, j).to_string()).unwrap());
            }
        }
        let mut sign = 1i64;
        let mut acc = Field::Q.one();
        let mut a = q;
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a.at(r, col).is_zero()) else {
                return BigInt::zero();
            };
            if p != col {
                sign = -sign;
                for j in 0..n {
                    let x = a.at(col, j).clone();
                    let y = a.at(p, j).clone();
                    a.set(col, j, y);
                    a.set(p, j, x);
                }
            }
            acc = acc.mul(a.at(col, col));
            let inv = a.at(col, col).inv().unwrap();
            for r in col + 1..n {
                let f = a.at(r, col).mul(&inv);
                for j in col..n {
                    let v = a.at(r, j).sub(&f.mul(a.at(col, j)));
                    a.set(r, j, v);
                }
            }
        }
        let acc = if sign < 0 { acc.neg() } else { acc };
        match acc {
            crate::exactmath::Scalar::Q(r) => {
                assert!(num_traits::One::is_one(r.denom()));
                r.numer().clone()
            }
            _ => unreachable!(),
        }
    }

    /// Brute-force oracle: the structure of Z^2 / <(2,0),(0,3)> by direct
    /// enumeration of the 6 residue classes and their element orders.
    #[test]
    fn diag_2_3_matches_enumerated_quotient() {
        let mut orders = Vec::new();
        for x in 0..2i64 {
            for y in 0..3i64 {
                let mut k = 1;
                while (k * x) % 2 != 0 || (k * y) % 3 != 0 {
                    k += 1;
                }
                orders.push(k);
            }
        }
        assert_eq!(orders.len(), 6);
        assert_eq!(*orders.iter().max().unwrap(), 6); // cyclic of order 6

        let a = IntMatrix::from_rows_i64(vec![vec![2, 0], vec![0, 3]]);
        let snf = check(&a);
        assert_eq!(
            snf.diagonal,
            vec![BigInt::from(1), BigInt::from(6)],
            "diag(2,3) has invariant factors (1, 6)"
        );
    }

    #[test]
    fn identity_and_zero() {
        let id = IntMatrix::identity(4);
        let snf = check(&id);
        assert_eq!(snf.diagonal, vec![BigInt::one(); 4]);

        let z = IntMatrix::zero(3, 2);
        let snf = check(&z);
        assert!(snf.diagonal.is_empty());
    }

    #[test]
    fn empty_shapes() {
        for (r, c) in [(0, 3), (3, 0), (0, 0)] {
            let snf = check(&IntMatrix::zero(r, c));
            assert!(snf.diagonal.is_empty());
        }
    }

    #[test]
    fn invariant_factors_stable_under_permutation() {
        let base = IntMatrix::from_rows_i64(vec![
            vec![2, 4, 4],
            vec![-6, 6, 12],
            vec![10, 4, 16],
        ]);
        let reference = check(&base).diagonal;
        // All row and column swaps of the input.
        for (r1, r2) in [(0, 1), (0, 2), (1, 2)] {
            for (c1, c2) in [(0, 1), (0, 2), (1, 2)] {
                let mut m = base.clone();
                m.swap_rows(r1, r2);
                m.swap_cols(c1, c2);
                assert_eq!(check(&m).diagonal, reference);
            }
        }
    }

    #[test]
    fn random_matrices_reduce() {
        let mut state = 7u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..25 {
            let rows = (next() % 4 + 1) as usize;
            let cols = (next() % 4 + 1) as usize;
            let mut m = IntMatrix::zero(rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    m.set(i, j, BigInt::from((next() % 21) as i64 - 10));
                }
            }
            check(&m);
        }
    }
}
