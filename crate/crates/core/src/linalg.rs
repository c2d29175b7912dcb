//! Dense matrices and sparse row echelon forms over an exact [`Field`].

use std::collections::HashMap;
use std::fmt;

use crate::field::Field;

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<F>) -> Option<Self> {
        (data.len() == rows * cols).then_some(Matrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[F] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Field::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out: Matrix<F> = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = out.data[idx].clone() + a.clone() * b.clone();
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.clone() - b.clone())
            .collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &F) -> Matrix<F> {
        let data = self.data.iter().map(|a| a.clone() * c.clone()).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn transpose(&self) -> Matrix<F> {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn pow(&self, k: u32) -> Matrix<F> {
        assert!(self.is_square());
        let mut acc = Matrix::identity(self.rows);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Top-left `rows x cols` block.
    pub fn block(&self, rows: usize, cols: usize) -> Matrix<F> {
        Matrix::from_fn(rows, cols, |i, j| self.get(i, j).clone())
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..i.min(self.cols)).all(|j| self.get(i, j).is_zero()))
    }

    pub fn is_strictly_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols.min(i + 1)).all(|j| self.get(i, j).is_zero()))
    }

    pub fn rank(&self) -> usize {
        let mut ech = SparseEchelon::new(self.cols);
        for i in 0..self.rows {
            ech.insert(self.row_sparse(i));
        }
        ech.rank()
    }

    pub fn row_sparse(&self, i: usize) -> Vec<(usize, F)> {
        (0..self.cols)
            .filter_map(|j| {
                let v = self.get(i, j);
                (!v.is_zero()).then(|| (j, v.clone()))
            })
            .collect()
    }

    /// Gauss-Jordan inverse, `None` when singular.
    pub fn inverse(&self) -> Option<Matrix<F>> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            a.swap_rows(pivot, col);
            inv.swap_rows(pivot, col);
            let p = a.get(col, col).inv()?;
            a.scale_row(col, &p);
            inv.scale_row(col, &p);
            for r in 0..n {
                if r != col && !a.get(r, col).is_zero() {
                    let f = a.get(r, col).clone();
                    a.add_row_multiple(r, col, &(-f.clone()));
                    inv.add_row_multiple(r, col, &(-f));
                }
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, c: &F) {
        for j in 0..self.cols {
            let idx = r * self.cols + j;
            self.data[idx] = self.data[idx].clone() * c.clone();
        }
    }

    /// row `dst` += c * row `src`
    fn add_row_multiple(&mut self, dst: usize, src: usize, c: &F) {
        for j in 0..self.cols {
            let v = self.get(src, j).clone();
            if v.is_zero() {
                continue;
            }
            let idx = dst * self.cols + j;
            self.data[idx] = self.data[idx].clone() + c.clone() * v;
        }
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.cols
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.rows
    }
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| format!("{:?}", self.data[i * self.cols + j])).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Sparse vector: strictly increasing column indices with nonzero values.
pub type SparseVec<F> = Vec<(usize, F)>;

/// `a + c * b` on sparse vectors.
fn axpy<F: Field>(a: &[(usize, F)], c: &F, b: &[(usize, F)]) -> SparseVec<F> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, c.clone() * b[j].1.clone()));
            j += 1;
        } else {
            let v = a[i].1.clone() + c.clone() * b[j].1.clone();
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incrementally maintained row echelon form. Pivot rows are normalized so
/// their leading coefficient is one.
#[derive(Clone, Debug)]
pub struct SparseEchelon<F> {
    cols: usize,
    pivots: HashMap<usize, SparseVec<F>>,
}

impl<F: Field> SparseEchelon<F> {
    pub fn new(cols: usize) -> Self {
        SparseEchelon { cols, pivots: HashMap::new() }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` against the current pivots.
    pub fn reduce(&self, mut row: SparseVec<F>) -> SparseVec<F> {
        row.retain(|(_, v)| !v.is_zero());
        while let Some((lead, coeff)) = row.first().cloned() {
            match self.pivots.get(&lead) {
                Some(p) => row = axpy(&row, &(-coeff), p),
                None => break,
            }
        }
        row
    }

    /// Inserts a row; returns `true` when it raised the rank.
    pub fn insert(&mut self, row: SparseVec<F>) -> bool {
        debug_assert!(row.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(row.iter().all(|(c, _)| *c < self.cols));
        let row = self.reduce(row);
        let Some((lead, coeff)) = row.first().cloned() else {
            return false;
        };
        let inv = coeff.inv().expect("nonzero leading coefficient");
        let row = row.into_iter().map(|(c, v)| (c, v * inv.clone())).collect();
        self.pivots.insert(lead, row);
        true
    }

    pub fn contains(&self, row: SparseVec<F>) -> bool {
        self.reduce(row).is_empty()
    }

    /// Basis of the solution space of the homogeneous system whose equations
    /// are the inserted rows. One vector per free column, with a one in that
    /// column and zeros in the other free columns.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        let mut pivot_cols: Vec<usize> = self.pivots.keys().copied().collect();
        pivot_cols.sort_unstable_by(|a, b| b.cmp(a));
        (0..self.cols)
            .filter(|c| !self.pivots.contains_key(c))
            .map(|free| {
                let mut x = vec![F::zero(); self.cols];
                x[free] = F::one();
                for &p in &pivot_cols {
                    let row = &self.pivots[&p];
                    let mut acc = F::zero();
                    for (c, v) in row.iter().skip(1) {
                        if !x[*c].is_zero() {
                            acc = acc + v.clone() * x[*c].clone();
                        }
                    }
                    x[p] = -acc;
                }
                x
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rational};

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    #[test]
    fn rank_of_small_matrices() {
        let m = Matrix::from_fn(3, 3, |i, j| q((i * 3 + j) as i64 + 1));
        assert_eq!(m.rank(), 2);
        assert_eq!(Matrix::<Rational>::identity(4).rank(), 4);
        assert_eq!(Matrix::<Rational>::zeros(2, 5).rank(), 0);
    }

    #[test]
    fn rank_depends_on_characteristic() {
        // det = 2
        let data = [1, 1, 1, -1];
        let over_q = Matrix::from_fn(2, 2, |i, j| q(data[i * 2 + j]));
        let over_f2 = Matrix::from_fn(2, 2, |i, j| Fp::<2>::new(data[i * 2 + j]));
        assert_eq!(over_q.rank(), 2);
        assert_eq!(over_f2.rank(), 1);
    }

    #[test]
    fn inverse_round_trip() {
        let m = Matrix::from_fn(3, 3, |i, j| if i <= j { q((i + 2 * j) as i64 + 1) } else { q(0) });
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(3));
        assert!(inv.is_upper_triangular());
        let singular = Matrix::from_fn(2, 2, |_, _| q(1));
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn nullspace_solves_system() {
        let m = Matrix::from_fn(2, 4, |i, j| q([[1, 2, 0, -1], [0, 1, 1, 1]][i][j]));
        let mut ech = SparseEchelon::new(4);
        for i in 0..2 {
            ech.insert(m.row_sparse(i));
        }
        let basis = ech.nullspace();
        assert_eq!(basis.len(), 2);
        for v in &basis {
            for i in 0..2 {
                let dot = (0..4).fold(q(0), |acc, j| acc + m.get(i, j).clone() * v[j].clone());
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn strict_upper_detection() {
        let mut m = Matrix::<Rational>::zeros(3, 3);
        m.set(0, 2, q(1));
        assert!(m.is_strictly_upper_triangular());
        m.set(1, 1, q(1));
        assert!(!m.is_strictly_upper_triangular());
        assert!(m.is_upper_triangular());
    }
}
