//! Dense exact matrices and the elimination engine behind every rank,
//! kernel and solve in the crate.
//!
//! Pivoting is fixed: the leftmost column with a nonzero entry at or below
//! the current row, taking the topmost such row. Results are therefore
//! deterministic for a given input.

use std::fmt;

use crate::error::MatrixError;
use crate::field::{ExactScalar, Field, Vector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<ExactScalar>,
}

impl ExactMatrix {
    /// Row-major constructor. Entries are coerced into a common field.
    pub fn new(rows: usize, cols: usize, data: Vec<ExactScalar>) -> Result<Self, MatrixError> {
        if data.len() != rows * cols {
            return Err(MatrixError::EntryCount {
                rows,
                cols,
                expected: rows * cols,
                got: data.len(),
            });
        }
        let mut field = Field::Rational;
        for x in &data {
            field = field.join(x.field())?;
        }
        let data = data
            .into_iter()
            .map(|x| x.coerce(field))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ExactMatrix { rows, cols, field, data })
    }

    pub fn zeros(rows: usize, cols: usize, field: Field) -> Self {
        let z = ExactScalar::zero().coerce(field).expect("rational embeds everywhere");
        ExactMatrix {
            rows,
            cols,
            field,
            data: vec![z; rows * cols],
        }
    }

    pub fn identity(n: usize, field: Field) -> Self {
        let mut m = Self::zeros(n, n, field);
        for i in 0..n {
            m.data[i * n + i] = ExactScalar::one().coerce(field).unwrap();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<ExactScalar>>) -> Result<Self, MatrixError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(MatrixError::Shape("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Convenience for tests and fixtures: integer entries.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| ExactScalar::from_i64(v)).collect())
                .collect(),
        )
        .expect("rectangular integer matrix")
    }

    pub fn diagonal(entries: &[ExactScalar]) -> Result<Self, MatrixError> {
        let n = entries.len();
        let mut data = vec![ExactScalar::zero(); n * n];
        for (i, e) in entries.iter().enumerate() {
            data[i * n + i] = e.clone();
        }
        Self::new(n, n, data)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vector]) -> Result<Self, MatrixError> {
        let cols = columns.len();
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in columns {
                if c.len() != rows {
                    return Err(MatrixError::Shape(format!(
                        "column of length {} in a matrix with {rows} rows",
                        c.len()
                    )));
                }
                data.push(c[r].clone());
            }
        }
        Self::new(rows, cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn entries(&self) -> &[ExactScalar] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> &ExactScalar {
        &self.data[r * self.cols + c]
    }

    /// Panics if `value` lives in a field incompatible with the matrix.
    pub fn set(&mut self, r: usize, c: usize, value: ExactScalar) {
        let field = self.field.join(value.field()).unwrap_or_else(|e| panic!("{e}"));
        if field != self.field {
            self.retag(field);
        }
        self.data[r * self.cols + c] = value.coerce(field).unwrap();
    }

    fn retag(&mut self, field: Field) {
        for x in &mut self.data {
            *x = x.coerce(field).unwrap();
        }
        self.field = field;
    }

    /// Copy of the matrix tagged with a (compatible) larger field.
    pub fn with_field(&self, field: Field) -> Result<Self, MatrixError> {
        let joined = self.field.join(field)?;
        let mut m = self.clone();
        m.retag(joined);
        Ok(m)
    }

    pub fn row(&self, r: usize) -> &[ExactScalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        ExactMatrix {
            rows: self.cols,
            cols: self.rows,
            field: self.field,
            data,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(ExactScalar::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|r| (0..r).all(|c| self.get(r, c) == self.get(c, r)))
    }

    pub fn mul(&self, rhs: &ExactMatrix) -> Result<ExactMatrix, MatrixError> {
        if self.cols != rhs.rows {
            return Err(MatrixError::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let field = self.field.join(rhs.field)?;
        let mut out = ExactMatrix::zeros(self.rows, rhs.cols, field);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[ExactScalar]) -> Result<Vector, MatrixError> {
        if v.len() != self.cols {
            return Err(MatrixError::Shape(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let mut acc = ExactScalar::zero();
            for (a, b) in self.row(r).iter().zip(v) {
                if !a.is_zero() && !b.is_zero() {
                    acc += &a.checked_mul(b)?;
                }
            }
            out.push(acc);
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &ExactMatrix) -> Result<ExactMatrix, MatrixError> {
        self.zip_with(rhs, |a, b| a.checked_add(b))
    }

    pub fn sub(&self, rhs: &ExactMatrix) -> Result<ExactMatrix, MatrixError> {
        self.zip_with(rhs, |a, b| a.checked_sub(b))
    }

    fn zip_with(
        &self,
        rhs: &ExactMatrix,
        f: impl Fn(&ExactScalar, &ExactScalar) -> Result<ExactScalar, crate::error::FieldError>,
    ) -> Result<ExactMatrix, MatrixError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(MatrixError::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| f(a, b))
            .collect::<Result<Vec<_>, _>>()?;
        ExactMatrix::new(self.rows, self.cols, data)
    }

    pub fn scale(&self, s: &ExactScalar) -> Result<ExactMatrix, MatrixError> {
        let data = self
            .data
            .iter()
            .map(|a| a.checked_mul(s))
            .collect::<Result<Vec<_>, _>>()?;
        ExactMatrix::new(self.rows, self.cols, data)
    }

    /// Kronecker product; index `(i·rhs.rows + k, j·rhs.cols + l)`.
    pub fn kron(&self, rhs: &ExactMatrix) -> Result<ExactMatrix, MatrixError> {
        let field = self.field.join(rhs.field)?;
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        let mut out = ExactMatrix::zeros(rows, cols, field);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        let b = rhs.get(k, l);
                        if !b.is_zero() {
                            out.data[(i * rhs.rows + k) * cols + j * rhs.cols + l] = a * b;
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Vertical concatenation.
    pub fn stack(blocks: &[&ExactMatrix]) -> Result<ExactMatrix, MatrixError> {
        let cols = blocks.first().map_or(0, |b| b.cols);
        if blocks.iter().any(|b| b.cols != cols) {
            return Err(MatrixError::Shape("stacked blocks differ in width".into()));
        }
        let rows = blocks.iter().map(|b| b.rows).sum();
        let data = blocks.iter().flat_map(|b| b.data.iter().cloned()).collect();
        ExactMatrix::new(rows, cols, data)
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.row_vectors();
        eliminate(&mut rows, self.cols, false).len()
    }

    /// Basis of the right null space, one vector per non-pivot column.
    pub fn kernel_basis(&self) -> Vec<Vector> {
        let mut rows = self.row_vectors();
        let pivots = eliminate(&mut rows, self.cols, true);
        kernel_from_rref(&rows, &pivots, self.cols, self.field)
    }

    /// Some `x` with `self·x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[ExactScalar]) -> Result<Option<Vector>, MatrixError> {
        if b.len() != self.rows {
            return Err(MatrixError::Shape(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let mut rows: Vec<Vector> = (0..self.rows)
            .map(|r| {
                let mut v = self.row(r).to_vec();
                v.push(b[r].clone());
                v
            })
            .collect();
        let pivots = eliminate(&mut rows, self.cols + 1, true);
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let zero = ExactScalar::zero().coerce(self.field.join(field_of(b))?)?;
        let mut x = vec![zero; self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = rows[i][self.cols].clone();
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Result<ExactMatrix, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::Shape("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut rows: Vec<Vector> = (0..n)
            .map(|r| {
                let mut v = self.row(r).to_vec();
                v.extend((0..n).map(|c| if c == r { ExactScalar::one() } else { ExactScalar::zero() }));
                v
            })
            .collect();
        let pivots = eliminate(&mut rows, n, true);
        if pivots.len() < n {
            return Err(MatrixError::Singular);
        }
        let data = rows.into_iter().flat_map(|r| r.into_iter().skip(n)).collect();
        ExactMatrix::new(n, n, data)?.with_field(self.field)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }
}

fn field_of(v: &[ExactScalar]) -> Field {
    v.iter().fold(Field::Rational, |f, x| f.join(x.field()).unwrap_or(f))
}

/// Gaussian elimination on `rows`, pivoting only within the first
/// `pivot_cols` columns. With `reduced`, produces reduced row echelon form
/// (pivots normalized to one, cleared above and below). Returns the pivot
/// columns in order; row `i` of the result carries pivot `i`.
pub(crate) fn eliminate(rows: &mut [Vector], pivot_cols: usize, reduced: bool) -> Vec<usize> {
    let nrows = rows.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("pivot is nonzero");
        let width = rows[r].len();
        for j in c..width {
            if !rows[r][j].is_zero() {
                rows[r][j] = &rows[r][j] * &inv;
            }
        }
        let support: Vec<usize> = (c..width).filter(|&j| !rows[r][j].is_zero()).collect();
        let (head, tail) = rows.split_at_mut(r);
        let (pivot_row, below) = tail.split_first_mut().expect("row r exists");
        let clear = |row: &mut Vector| {
            if row[c].is_zero() {
                return;
            }
            let f = row[c].clone();
            for &j in &support {
                let delta = &f * &pivot_row[j];
                row[j] -= &delta;
            }
        };
        for row in below.iter_mut() {
            clear(row);
        }
        if reduced {
            for row in head.iter_mut() {
                clear(row);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub(crate) fn kernel_from_rref(rows: &[Vector], pivots: &[usize], cols: usize, field: Field) -> Vec<Vector> {
    let zero = ExactScalar::zero().coerce(field).unwrap();
    let one = ExactScalar::one().coerce(field).unwrap();
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![zero.clone(); cols];
            v[f] = one.clone();
            for (i, &pc) in pivots.iter().enumerate() {
                if !rows[i][f].is_zero() {
                    v[pc] = -&rows[i][f];
                }
            }
            v
        })
        .collect()
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Helpers on plain vectors.
pub mod vecops {
    use super::*;

    pub fn zeros(n: usize, field: Field) -> Vector {
        vec![ExactScalar::zero().coerce(field).unwrap(); n]
    }

    pub fn add(a: &[ExactScalar], b: &[ExactScalar]) -> Vector {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(a: &[ExactScalar], b: &[ExactScalar]) -> Vector {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn scale(a: &[ExactScalar], s: &ExactScalar) -> Vector {
        a.iter().map(|x| x * s).collect()
    }

    pub fn axpy(acc: &mut [ExactScalar], s: &ExactScalar, x: &[ExactScalar]) {
        if s.is_zero() {
            return;
        }
        for (a, b) in acc.iter_mut().zip(x) {
            if !b.is_zero() {
                *a += &(s * b);
            }
        }
    }

    pub fn dot(a: &[ExactScalar], b: &[ExactScalar]) -> ExactScalar {
        let mut acc = ExactScalar::zero();
        for (x, y) in a.iter().zip(b) {
            if !x.is_zero() && !y.is_zero() {
                acc += &(x * y);
            }
        }
        acc
    }

    pub fn is_zero(a: &[ExactScalar]) -> bool {
        a.iter().all(ExactScalar::is_zero)
    }

    /// Tensor (Kronecker) product of two vectors, index `i·b.len() + j`.
    pub fn kron(a: &[ExactScalar], b: &[ExactScalar]) -> Vector {
        let mut out = Vec::with_capacity(a.len() * b.len());
        for x in a {
            for y in b {
                out.push(x * y);
            }
        }
        out
    }

    pub fn from_i64(v: &[i64]) -> Vector {
        v.iter().map(|&x| ExactScalar::from_i64(x)).collect()
    }
}

/// Incrementally maintained row-echelon basis of a subspace; used to extend
/// a basis of a subspace to a basis of a larger one deterministically.
#[derive(Clone, Debug, Default)]
pub struct EchelonBasis {
    rows: Vec<(usize, Vector)>,
}

impl EchelonBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[ExactScalar]) -> Vector {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let f = v[*p].clone();
                vecops::axpy(&mut v, &-f, row);
            }
        }
        v
    }

    pub fn contains(&self, v: &[ExactScalar]) -> bool {
        vecops::is_zero(&self.reduce(v))
    }

    /// Adds `v` if independent of the current span; reports whether it was.
    pub fn insert(&mut self, v: &[ExactScalar]) -> bool {
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].inv().unwrap();
        r = vecops::scale(&r, &inv);
        for (_, row) in &mut self.rows {
            if !row[p].is_zero() {
                let f = row[p].clone();
                vecops::axpy(row, &-f, &r);
            }
        }
        self.rows.push((p, r));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> ExactScalar {
        ExactScalar::from_frac(n, d)
    }

    #[test]
    fn rank_examples() {
        assert_eq!(ExactMatrix::identity(3, Field::Rational).rank(), 3);
        assert_eq!(ExactMatrix::zeros(2, 2, Field::Rational).rank(), 0);
        assert_eq!(ExactMatrix::from_i64(&[&[1, 2], &[2, 4]]).rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        let k = ExactMatrix::from_i64(&[&[1, 1]]).kernel_basis();
        assert_eq!(k, vec![vecops::from_i64(&[-1, 1])]);
        assert!(ExactMatrix::identity(3, Field::Rational).kernel_basis().is_empty());
        let z = ExactMatrix::zeros(2, 2, Field::Rational).kernel_basis();
        assert_eq!(z.len(), 2);
        assert_eq!(ExactMatrix::from_columns(2, &z).unwrap().rank(), 2);
    }

    #[test]
    fn solve_examples() {
        let b = vecops::from_i64(&[3, -1, 4]);
        let x = ExactMatrix::identity(3, Field::Rational).solve(&b).unwrap();
        assert_eq!(x, Some(b));
        let col = ExactMatrix::from_i64(&[&[1], &[1]]);
        assert_eq!(col.solve(&vecops::from_i64(&[0, 1])).unwrap(), None);
        let two = ExactMatrix::from_i64(&[&[2]]);
        assert_eq!(two.solve(&vecops::from_i64(&[1])).unwrap(), Some(vec![q(1, 2)]));
    }

    #[test]
    fn solve_rejects_bad_rhs_length() {
        let m = ExactMatrix::identity(2, Field::Rational);
        assert!(m.solve(&vecops::from_i64(&[1])).is_err());
    }

    #[test]
    fn gaussian_inverse() {
        let i = ExactScalar::i();
        let m = ExactMatrix::from_rows(vec![
            vec![ExactScalar::one(), i.clone()],
            vec![-&i, ExactScalar::from_i64(2)],
        ])
        .unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), ExactMatrix::identity(2, Field::Gaussian));
    }

    #[test]
    fn entry_count_checked() {
        assert!(matches!(
            ExactMatrix::new(2, 2, vec![ExactScalar::one()]),
            Err(MatrixError::EntryCount { .. })
        ));
    }

    #[test]
    fn echelon_basis_extends() {
        let mut b = EchelonBasis::new();
        assert!(b.insert(&vecops::from_i64(&[1, 1, 0])));
        assert!(!b.insert(&vecops::from_i64(&[2, 2, 0])));
        assert!(b.insert(&vecops::from_i64(&[0, 1, 0])));
        assert!(b.contains(&vecops::from_i64(&[5, -3, 0])));
        assert!(!b.contains(&vecops::from_i64(&[0, 0, 1])));
    }
}
