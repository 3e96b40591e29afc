//! Dense matrices over ℚ(i) with exact elimination.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Row-major dense matrix. Values are never mutated after construction
/// through the public API; every operation returns a new matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |r, c| if r == c { Scalar::one() } else { Scalar::zero() })
    }

    pub fn scalar(s: Scalar) -> Self {
        Matrix {
            rows: 1,
            cols: 1,
            data: vec![s],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from rows; `cols` is needed to type empty inputs.
    pub fn from_rows(rows: Vec<Vec<Scalar>>, cols: usize) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (k, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {k} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(Matrix { rows: n, cols, data })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), cols, "ragged integer matrix");
                r.iter().map(|&x| Scalar::from_int(x))
            })
            .collect();
        Matrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// A single column.
    pub fn column(entries: Vec<Scalar>) -> Self {
        Matrix {
            rows: entries.len(),
            cols: 1,
            data: entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Scalar] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn col(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Matrix::identity(self.rows)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut data = vec![Scalar::zero(); self.rows * other.cols];
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        data[r * other.cols + c] += &(a * b);
                    }
                }
            }
        }
        Ok(Matrix {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    fn zip_with(&self, other: &Matrix, op: &str, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot {op} {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, "add", |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, "subtract", |a, b| a - b)
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn trace(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok((0..self.rows).map(|k| self.get(k, k).clone()).sum())
    }

    pub fn kron(&self, other: &Matrix) -> Matrix {
        let (br, bc) = (other.rows, other.cols);
        Matrix::from_fn(self.rows * br, self.cols * bc, |r, c| {
            self.get(r / br, c / bc) * other.get(r % br, c % bc)
        })
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Matrix {
        Matrix::from_fn(rows.len(), cols.len(), |r, c| {
            self.get(rows.start + r, cols.start + c).clone()
        })
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        Matrix::from_fn(rows.len(), self.cols, |r, c| self.get(rows[r], c).clone())
    }

    pub fn select_cols(&self, cols: &[usize]) -> Matrix {
        Matrix::from_fn(self.rows, cols.len(), |r, c| self.get(r, cols[c]).clone())
    }

    /// Copy of `self` with `block` written at offset `(r0, c0)`.
    pub fn with_block(&self, r0: usize, c0: usize, block: &Matrix) -> Matrix {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        let mut out = self.clone();
        for r in 0..block.rows {
            for c in 0..block.cols {
                out.data[(r0 + r) * self.cols + c0 + c] = block.get(r, c).clone();
            }
        }
        out
    }

    pub fn block_diag(blocks: &[Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out = out.with_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn hstack(blocks: &[Matrix], rows: usize) -> Result<Matrix> {
        if let Some(b) = blocks.iter().find(|b| b.rows != rows) {
            return Err(Error::DimensionMismatch(format!(
                "hstack of a {}-row block into {rows} rows",
                b.rows
            )));
        }
        let cols = blocks.iter().map(|b| b.cols).sum();
        Ok(Matrix::from_fn(rows, cols, |r, mut c| {
            for b in blocks {
                if c < b.cols {
                    return b.get(r, c).clone();
                }
                c -= b.cols;
            }
            unreachable!()
        }))
    }

    pub fn vstack(blocks: &[Matrix], cols: usize) -> Result<Matrix> {
        if let Some(b) = blocks.iter().find(|b| b.cols != cols) {
            return Err(Error::DimensionMismatch(format!(
                "vstack of a {}-column block into {cols} columns",
                b.cols
            )));
        }
        let mut data = Vec::new();
        for b in blocks {
            data.extend_from_slice(&b.data);
        }
        Ok(Matrix {
            rows: blocks.iter().map(|b| b.rows).sum(),
            cols,
            data,
        })
    }

    /// Column-major flattening, used to compare spans of matrices.
    pub fn vectorize(&self) -> Vec<Scalar> {
        (0..self.cols).flat_map(|c| self.col(c)).collect()
    }

    /// Reduced row echelon form. Among candidate pivots in a column the
    /// entry with the smallest bit size is chosen.
    pub fn rref(&self) -> Echelon {
        let mut m = self.to_rows();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let best = (row..self.rows)
                .filter(|&r| !m[r][col].is_zero())
                .min_by_key(|&r| m[r][col].bit_size());
            let Some(p) = best else { continue };
            m.swap(row, p);
            let inv = m[row][col].inv().expect("nonzero pivot");
            for x in m[row].iter_mut().skip(col) {
                *x = &*x * &inv;
            }
            let pivot_row = m[row].clone();
            for (r, other) in m.iter_mut().enumerate() {
                if r == row || other[col].is_zero() {
                    continue;
                }
                let f = other[col].clone();
                for (x, p) in other.iter_mut().zip(&pivot_row).skip(col) {
                    if !p.is_zero() {
                        *x -= &(&f * p);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        Echelon {
            reduced: Matrix::from_rows(m, self.cols).expect("rows preserved"),
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the right null space, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let Echelon { reduced, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Scalar::zero(); self.cols];
                v[f] = Scalar::one();
                for (k, &p) in pivots.iter().enumerate() {
                    v[p] = -reduced.get(k, f);
                }
                v
            })
            .collect()
    }

    /// Kernel basis as the columns of a `cols × nullity` matrix.
    pub fn kernel_matrix(&self) -> Matrix {
        let basis = self.kernel_basis();
        Matrix::from_fn(self.cols, basis.len(), |r, c| basis[c][r].clone())
    }

    /// Column-reduced echelon basis of the column space, returned as the
    /// columns of an `rows × rank` matrix, plus the pivot row of each
    /// basis column. Each basis column has a 1 in its pivot row and 0 in
    /// the other pivot rows.
    pub fn column_space(&self) -> (Matrix, Vec<usize>) {
        let Echelon { reduced, pivots } = self.transpose().rref();
        let r = pivots.len();
        (reduced.submatrix(0..r, 0..self.rows).transpose(), pivots)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn invert(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let aug = Matrix::hstack(&[self.clone(), Matrix::identity(n)], n)?;
        let Echelon { reduced, pivots } = aug.rref();
        if pivots.len() < n || pivots.get(n.wrapping_sub(1)).is_some_and(|&p| p >= n) {
            return Err(Error::Singular);
        }
        Ok(reduced.submatrix(0..n, n..2 * n))
    }

    /// Solves `self · x = b` for one particular solution, if any.
    pub fn solve(&self, b: &Matrix) -> Result<Option<Matrix>> {
        if b.rows != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has {} rows, expected {}",
                b.rows, self.rows
            )));
        }
        let aug = Matrix::hstack(&[self.clone(), b.clone()], self.rows)?;
        let Echelon { reduced, pivots } = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut x = Matrix::zeros(self.cols, b.cols);
        for (k, &p) in pivots.iter().enumerate() {
            for c in 0..b.cols {
                x.data[p * b.cols + c] = reduced.get(k, self.cols + c).clone();
            }
        }
        Ok(Some(x))
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{}x{}{:?}", self.rows, self.cols, self.to_rows())
    }
}

/// Rows of canonical scalar strings; the shape of an empty matrix is
/// carried by the surrounding schema.
impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

/// Raw row data of a matrix as it appears in JSON documents.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MatrixRows(pub Vec<Vec<Scalar>>);

impl MatrixRows {
    pub fn into_matrix(self, rows: usize, cols: usize) -> Result<Matrix> {
        if self.0.len() != rows {
            return Err(Error::DimensionMismatch(format!(
                "{} rows, expected {rows}",
                self.0.len()
            )));
        }
        Matrix::from_rows(self.0, cols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Scalar {
        t.parse().unwrap()
    }

    fn swap() -> Matrix {
        Matrix::from_ints(&[&[0, 1], &[1, 0]])
    }

    #[test]
    fn mat_mul_examples() {
        let m = Matrix::from_ints(&[&[3, -1], &[4, 7]]);
        assert_eq!(Matrix::identity(2).mul(&m).unwrap(), m);
        assert_eq!(swap().mul(&swap()).unwrap(), Matrix::identity(2));
        let a = Matrix::from_rows(vec![vec![s("1/2"), s("i")]], 2).unwrap();
        let b = Matrix::from_ints(&[&[2], &[0]]);
        assert_eq!(a.mul(&b).unwrap(), Matrix::from_ints(&[&[1]]));
        assert!(matches!(a.mul(&a), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::zeros(3, 3).rank(), 0);
        assert_eq!(Matrix::identity(4).rank(), 4);
        assert_eq!(Matrix::from_ints(&[&[1, 2], &[2, 4]]).rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(Matrix::identity(2).kernel_basis().is_empty());
        assert_eq!(Matrix::zeros(2, 3).kernel_basis().len(), 3);
        let k = Matrix::from_ints(&[&[1, 2]]).kernel_basis();
        assert_eq!(k.len(), 1);
        // proportional to (-2, 1)
        assert_eq!(&k[0][0] * &Scalar::from_int(1), &k[0][1] * &Scalar::from_int(-2));
        assert!(!k[0][1].is_zero());
    }

    #[test]
    fn invert_examples() {
        assert_eq!(Matrix::identity(3).invert().unwrap(), Matrix::identity(3));
        assert_eq!(swap().invert().unwrap(), swap());
        let d = Matrix::from_rows(vec![vec![s("2"), s("0")], vec![s("0"), s("i")]], 2).unwrap();
        let expect = Matrix::from_rows(vec![vec![s("1/2"), s("0")], vec![s("0"), s("-i")]], 2).unwrap();
        assert_eq!(d.invert().unwrap(), expect);
        assert_eq!(Matrix::from_ints(&[&[1, 2], &[2, 4]]).invert(), Err(Error::Singular));
        assert!(matches!(Matrix::zeros(1, 2).invert(), Err(Error::NotSquare { .. })));
        assert_eq!(Matrix::zeros(0, 0).invert().unwrap(), Matrix::zeros(0, 0));
    }

    #[test]
    fn kron_examples() {
        assert_eq!(Matrix::identity(2).kron(&Matrix::identity(3)), Matrix::identity(6));
        let m = Matrix::from_ints(&[&[1, 2], &[3, 4]]);
        assert_eq!(Matrix::from_ints(&[&[2]]).kron(&m), m.scale(&Scalar::from_int(2)));
        // swap ⊗ swap sends e_(a,b) to e_(1-a,1-b): index 0<->3, 1<->2
        let expect = Matrix::from_ints(&[&[0, 0, 0, 1], &[0, 0, 1, 0], &[0, 1, 0, 0], &[1, 0, 0, 0]]);
        assert_eq!(swap().kron(&swap()), expect);
    }

    #[test]
    fn column_space_is_reduced() {
        let m = Matrix::from_ints(&[&[1, 2, 0], &[2, 4, 0], &[0, 0, 3]]);
        let (basis, pivots) = m.column_space();
        assert_eq!(basis.cols(), 2);
        assert_eq!(pivots, vec![0, 2]);
        assert_eq!(basis.select_rows(&pivots), Matrix::identity(2));
    }

    #[test]
    fn solve_finds_particular_solution() {
        let a = Matrix::from_ints(&[&[1, 1], &[0, 1]]);
        let b = Matrix::from_ints(&[&[3], &[1]]);
        let x = a.solve(&b).unwrap().unwrap();
        assert_eq!(a.mul(&x).unwrap(), b);
        let sing = Matrix::from_ints(&[&[1, 1], &[1, 1]]);
        assert!(sing.solve(&Matrix::from_ints(&[&[1], &[0]])).unwrap().is_none());
    }
}
