use std::fmt;

use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

/// Dense matrix over a single exact field, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<Scalar>,
}

/// Result of reduction to reduced row echelon form.
struct Echelon {
    matrix: ExactMatrix,
    pivots: Vec<usize>,
}

impl ExactMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            field,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    /// Builds a matrix from rows; every entry must lie in `field` and rows must be rectangular.
    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::InvalidInput(format!(
                    "ragged rows: expected {c} entries, found {}",
                    row.len()
                )));
            }
            for s in row {
                if s.field() != field {
                    return Err(Error::InvalidInput(format!(
                        "entry in {} inside a matrix over {field}",
                        s.field()
                    )));
                }
                data.push(s);
            }
        }
        Ok(ExactMatrix {
            rows: r,
            cols: c,
            field,
            data,
        })
    }

    /// Builds a matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<Scalar>]) -> Result<Self> {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::InvalidInput(format!(
                    "column {j} has length {}, expected {rows}",
                    col.len()
                )));
            }
            for (i, s) in col.iter().enumerate() {
                if s.field() != field {
                    return Err(Error::InvalidInput(format!(
                        "entry in {} inside a matrix over {field}",
                        s.field()
                    )));
                }
                m.data[i * m.cols + j] = s.clone();
            }
        }
        Ok(m)
    }

    /// Small integer matrices, mostly for tests and examples.
    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        Self::from_rows(field, rows).expect("rectangular integer matrix")
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

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert_eq!(v.field(), self.field, "entry field must match matrix field");
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != other.rows {
            return Err(Error::InvalidInput(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        let mut out = Self::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::InvalidInput(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let mut out = vec![self.field.zero(); self.rows];
        for (i, o) in out.iter_mut().enumerate() {
            for (a, b) in self.row(i).iter().zip(v) {
                if !a.is_zero() && !b.is_zero() {
                    *o += &a.try_mul(b)?;
                }
            }
        }
        Ok(out)
    }

    pub fn to_field(&self, target: Field) -> Result<ExactMatrix> {
        let data = self
            .data
            .iter()
            .map(|s| s.to_field(target))
            .collect::<Result<Vec<_>>>()?;
        Ok(ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            field: target,
            data,
        })
    }

    fn echelon(&self) -> Echelon {
        let mut m = self.clone();
        let (rows, cols) = (m.rows, m.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..cols {
                    m.data.swap(p * cols + j, r * cols + j);
                }
            }
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..cols {
                let v = &m.data[r * cols + j] * &inv;
                m.data[r * cols + j] = v;
            }
            for i in 0..rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in c..cols {
                    let sub = &factor * &m.data[r * cols + j];
                    if !sub.is_zero() {
                        m.data[i * cols + j] -= &sub;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { matrix: m, pivots }
    }

    /// Exact rank by Gauss-Jordan elimination over the matrix field.
    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Basis of the right kernel, returned as the columns of a `cols x (cols - rank)` matrix.
    pub fn kernel_basis(&self) -> ExactMatrix {
        let Echelon { matrix, pivots } = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = ExactMatrix::zeros(self.field, self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            basis.data[f * free.len() + k] = self.field.one();
            for (r, &p) in pivots.iter().enumerate() {
                let v = -matrix.get(r, f);
                basis.data[p * free.len() + k] = v;
            }
        }
        basis
    }

    /// Coefficients `c` with `self * c = v`, or `None` when `v` is outside the column span.
    pub fn solve_membership(&self, v: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if v.len() != self.rows {
            return Err(Error::InvalidInput(format!(
                "target has length {}, span vectors have length {}",
                v.len(),
                self.rows
            )));
        }
        let mut aug = ExactMatrix::zeros(self.field, self.rows, self.cols + 1);
        for (i, vi) in v.iter().enumerate() {
            for j in 0..self.cols {
                aug.data[i * (self.cols + 1) + j] = self.get(i, j).clone();
            }
            if vi.field() != self.field {
                return Err(Error::FieldMismatch(vi.field(), self.field));
            }
            aug.data[i * (self.cols + 1) + self.cols] = vi.clone();
        }
        let Echelon { matrix, pivots } = aug.echelon();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut coeffs = vec![self.field.zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            coeffs[p] = matrix.get(r, self.cols).clone();
        }
        Ok(Some(coeffs))
    }

    /// Determinant of a square matrix.
    pub fn determinant(&self) -> Result<Scalar> {
        if self.rows != self.cols {
            return Err(Error::InvalidInput(format!(
                "determinant of a non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut m = self.data.clone();
        let mut det = self.field.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[i * n + c].is_zero()) else {
                return Ok(self.field.zero());
            };
            if p != c {
                for j in 0..n {
                    m.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let pivot = m[c * n + c].clone();
            det *= &pivot;
            let inv = pivot.inv().expect("nonzero pivot");
            for i in c + 1..n {
                if m[i * n + c].is_zero() {
                    continue;
                }
                let factor = &m[i * n + c] * &inv;
                for j in c..n {
                    let sub = &factor * &m[c * n + j];
                    if !sub.is_zero() {
                        m[i * n + j] -= &sub;
                    }
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<ExactMatrix> {
        if self.rows != self.cols {
            return Err(Error::InvalidInput("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = ExactMatrix::zeros(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.data[i * 2 * n + j] = self.get(i, j).clone();
            }
            aug.data[i * 2 * n + n + i] = self.field.one();
        }
        let Echelon { matrix, pivots } = aug.echelon();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::DivisionByZero);
        }
        let mut inv = ExactMatrix::zeros(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.data[i * n + j] = matrix.get(i, n + j).clone();
            }
        }
        Ok(inv)
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn rank_of_zero_and_identity() {
        assert_eq!(ExactMatrix::zeros(q(), 3, 3).rank(), 0);
        assert_eq!(ExactMatrix::identity(q(), 4).rank(), 4);
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        for n in 1..5 {
            assert_eq!(ExactMatrix::identity(q(), n).kernel_basis().cols(), 0);
        }
    }

    #[test]
    fn kernel_of_single_relation() {
        let m = ExactMatrix::from_i64(q(), &[&[1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 1);
        let v = k.column(0);
        assert_eq!(&v[0] + &v[1], q().zero());
        assert!(!v[0].is_zero());
    }

    #[test]
    fn mixed_fields_rejected() {
        let f = Field::prime(7).unwrap();
        let rows = vec![vec![q().one(), f.one()]];
        assert!(matches!(
            ExactMatrix::from_rows(q(), rows),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn solve_membership_basic() {
        let id = ExactMatrix::identity(q(), 3);
        let v: Vec<Scalar> = [4, -2, 7].iter().map(|&x| q().from_i64(x)).collect();
        assert_eq!(id.solve_membership(&v).unwrap(), Some(v.clone()));
        let span = ExactMatrix::from_i64(q(), &[&[1], &[0]]);
        let target = vec![q().zero(), q().one()];
        assert_eq!(span.solve_membership(&target).unwrap(), None);
    }

    #[test]
    fn determinant_and_inverse() {
        let m = ExactMatrix::from_i64(q(), &[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(m.determinant().unwrap(), q().from_i64(18));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), ExactMatrix::identity(q(), 3));
        let singular = ExactMatrix::from_i64(q(), &[&[1, 2], &[2, 4]]);
        assert!(singular.inverse().is_err());
        assert!(singular.determinant().unwrap().is_zero());
    }
}
