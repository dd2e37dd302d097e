use std::fmt;

use super::field::{Field, FieldElement, FieldError};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("{op}: dimension mismatch ({}x{} vs {}x{})", left.0, left.1, right.0, right.1)]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("{op}: operands live in different fields ({left} vs {right})")]
    FieldMismatch {
        op: &'static str,
        left: String,
        right: String,
    },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("target rows are not in the row space")]
    NoSolution,
    #[error("ragged rows: row {row} has {len} entries, expected {expected}")]
    Ragged {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Dense row-major matrix over a finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl FieldMatrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        FieldMatrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![FieldElement::ZERO; rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    /// `x · I_n`.
    pub fn scalar(field: &Field, x: FieldElement, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = x;
        }
        m
    }

    pub fn from_elements(
        field: &Field,
        rows: usize,
        cols: usize,
        data: Vec<FieldElement>,
    ) -> Result<Self, MatrixError> {
        if data.len() != rows * cols {
            return Err(MatrixError::Ragged {
                row: 0,
                len: data.len(),
                expected: rows * cols,
            });
        }
        Ok(FieldMatrix {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    /// Builds a matrix from rows of packed element values.
    pub fn from_rows<R: AsRef<[u64]>>(field: &Field, rows: &[R]) -> Result<Self, MatrixError> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(MatrixError::Ragged {
                    row: i,
                    len: row.len(),
                    expected: cols,
                });
            }
            for &v in row {
                data.push(field.element(v)?);
            }
        }
        Ok(FieldMatrix {
            field: field.clone(),
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Rows of packed element values.
    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|x| x.value() as u64).collect())
            .collect()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        assert!(r < self.rows && c < self.cols);
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: FieldElement) {
        assert!(r < self.rows && c < self.cols);
        self.data[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    fn check_field(&self, other: &Self, op: &'static str) -> Result<(), MatrixError> {
        if self.field != other.field {
            return Err(MatrixError::FieldMismatch {
                op,
                left: self.field.to_string(),
                right: other.field.to_string(),
            });
        }
        Ok(())
    }

    fn mismatch(&self, other: &Self, op: &'static str) -> MatrixError {
        MatrixError::DimensionMismatch {
            op,
            left: self.shape(),
            right: other.shape(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_field(other, "mul")?;
        if self.cols != other.rows {
            return Err(self.mismatch(other, "mul"));
        }
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.data[i * self.cols + l];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.data[l * other.cols + j];
                    let slot = &mut out.data[i * other.cols + j];
                    *slot = f.add(*slot, f.mul(a, b));
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product `self · v`.
    pub fn apply(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(v.len(), self.cols);
        let f = &self.field;
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(f.zero(), |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_field(other, "add")?;
        if self.shape() != other.shape() {
            return Err(self.mismatch(other, "add"));
        }
        let f = &self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Ok(FieldMatrix {
            data,
            ..self.clone()
        })
    }

    pub fn scale(&self, x: FieldElement) -> Self {
        let f = &self.field;
        FieldMatrix {
            data: self.data.iter().map(|&a| f.mul(a, x)).collect(),
            ..self.clone()
        }
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        out
    }

    /// Stacks matrices vertically. All parts must share the field and column count.
    pub fn vstack(field: &Field, cols: usize, parts: &[&FieldMatrix]) -> Result<Self, MatrixError> {
        let mut out = Self::zeros(field, 0, cols);
        for part in parts {
            out.check_field(part, "vstack")?;
            if part.cols != cols {
                return Err(out.mismatch(part, "vstack"));
            }
            out.data.extend_from_slice(&part.data);
            out.rows += part.rows;
        }
        Ok(out)
    }

    /// Sub-matrix copy.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        let mut out = Self::zeros(&self.field, rows, cols);
        for r in 0..rows {
            let src = (r0 + r) * self.cols + c0;
            out.data[r * cols..(r + 1) * cols].copy_from_slice(&self.data[src..src + cols]);
        }
        out
    }

    /// Writes `src` into this matrix at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, src: &FieldMatrix) {
        assert!(r0 + src.rows <= self.rows && c0 + src.cols <= self.cols);
        for r in 0..src.rows {
            let dst = (r0 + r) * self.cols + c0;
            self.data[dst..dst + src.cols].copy_from_slice(src.row(r));
        }
    }

    /// In-place reduction to reduced row echelon form, restricting pivots to the
    /// first `pivot_cols` columns. Returns the pivot column of each leading row.
    fn rref_in_place(&mut self, pivot_cols: usize) -> Vec<usize> {
        let f = self.field.clone();
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..pivot_cols {
            if lead == self.rows {
                break;
            }
            // first nonzero pivot
            let Some(pr) = (lead..self.rows).find(|&r| !self.data[r * cols + c].is_zero()) else {
                continue;
            };
            if pr != lead {
                for j in 0..cols {
                    self.data.swap(pr * cols + j, lead * cols + j);
                }
            }
            let inv = f.inv(self.data[lead * cols + c]).expect("pivot is nonzero");
            for j in 0..cols {
                let v = &mut self.data[lead * cols + j];
                *v = f.mul(*v, inv);
            }
            for r in 0..self.rows {
                if r == lead {
                    continue;
                }
                let factor = self.data[r * cols + c];
                if factor.is_zero() {
                    continue;
                }
                for j in 0..cols {
                    let sub = f.mul(factor, self.data[lead * cols + j]);
                    let v = &mut self.data[r * cols + j];
                    *v = f.sub(*v, sub);
                }
            }
            pivots.push(c);
            lead += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        work.rref_in_place(self.cols).len()
    }

    pub fn inverse(&self) -> Result<Self, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut aug = Self::zeros(&self.field, n, 2 * n);
        aug.set_block(0, 0, self);
        aug.set_block(0, n, &Self::identity(&self.field, n));
        if aug.rref_in_place(n).len() < n {
            return Err(MatrixError::NotInvertible);
        }
        Ok(aug.block(0, n, n, n))
    }

    /// Finds `X` with `X · g = target`. Free variables are fixed to zero, so the
    /// result is deterministic.
    pub fn solve_left(g: &Self, target: &Self) -> Result<Self, MatrixError> {
        g.check_field(target, "solve_left")?;
        if g.cols != target.cols {
            return Err(g.mismatch(target, "solve_left"));
        }
        // X g = T  <=>  g^T X^T = T^T
        let n = g.rows;
        let mut aug = Self::zeros(&g.field, g.cols, n + target.rows);
        aug.set_block(0, 0, &g.transpose());
        aug.set_block(0, n, &target.transpose());
        let pivots = aug.rref_in_place(n);
        let rhs_cols = target.rows;
        for r in pivots.len()..aug.rows {
            if (0..rhs_cols).any(|j| !aug.get(r, n + j).is_zero()) {
                return Err(MatrixError::NoSolution);
            }
        }
        let mut xt = Self::zeros(&g.field, n, rhs_cols);
        for (r, &c) in pivots.iter().enumerate() {
            for j in 0..rhs_cols {
                xt.set(c, j, aug.get(r, n + j));
            }
        }
        Ok(xt.transpose())
    }

    /// Kronecker product with `I_k`: block (i, j) is `self[i][j] · I_k`.
    pub fn kron_identity(&self, k: usize) -> Self {
        assert!(k >= 1, "kron_identity needs k >= 1");
        let mut out = Self::zeros(&self.field, self.rows * k, self.cols * k);
        let oc = out.cols;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let x = self.data[i * self.cols + j];
                for d in 0..k {
                    out.data[(i * k + d) * oc + j * k + d] = x;
                }
            }
        }
        out
    }
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.field, self.to_rows())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    fn mat(f: &Field, rows: &[&[u64]]) -> FieldMatrix {
        FieldMatrix::from_rows(f, rows).unwrap()
    }

    #[test]
    fn mul_examples() {
        let f3 = gf(3);
        let x = mat(&f3, &[&[1, 2], &[0, 2]]);
        assert_eq!(FieldMatrix::identity(&f3, 2).mul(&x).unwrap(), x);

        let f2 = gf(2);
        let a = mat(&f2, &[&[1, 1], &[0, 1]]);
        let b = mat(&f2, &[&[1, 0], &[1, 1]]);
        assert_eq!(a.mul(&b).unwrap(), mat(&f2, &[&[0, 1], &[1, 1]]));

        let f5 = gf(5);
        assert_eq!(
            mat(&f5, &[&[2]]).mul(&mat(&f5, &[&[3]])).unwrap(),
            mat(&f5, &[&[1]])
        );
    }

    #[test]
    fn mul_errors() {
        let f2 = gf(2);
        let a = FieldMatrix::zeros(&f2, 2, 3);
        assert!(matches!(
            a.mul(&a),
            Err(MatrixError::DimensionMismatch { .. })
        ));
        let b = FieldMatrix::zeros(&gf(3), 3, 2);
        assert!(matches!(a.mul(&b), Err(MatrixError::FieldMismatch { .. })));
    }

    #[test]
    fn rank_examples() {
        let f2 = gf(2);
        assert_eq!(FieldMatrix::zeros(&f2, 3, 3).rank(), 0);
        for k in 1..5 {
            assert_eq!(FieldMatrix::identity(&f2, k).rank(), k);
        }
        assert_eq!(mat(&f2, &[&[1, 1], &[1, 1]]).rank(), 1);
    }

    #[test]
    fn inverse_examples() {
        let f3 = gf(3);
        let i3 = FieldMatrix::identity(&f3, 3);
        assert_eq!(i3.inverse().unwrap(), i3);
        assert_eq!(mat(&f3, &[&[2]]).inverse().unwrap(), mat(&f3, &[&[2]]));
        // q = 6 over GF(3) is the zero element
        let q = f3.from_int(6);
        assert_eq!(
            FieldMatrix::scalar(&f3, q, 1).inverse(),
            Err(MatrixError::NotInvertible)
        );
        assert!(matches!(
            FieldMatrix::zeros(&f3, 2, 3).inverse(),
            Err(MatrixError::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn solve_left_examples() {
        let f2 = gf(2);
        let t = mat(&f2, &[&[1, 0], &[1, 1]]);
        assert_eq!(
            FieldMatrix::solve_left(&FieldMatrix::identity(&f2, 2), &t).unwrap(),
            t
        );
        let g = mat(&f2, &[&[1, 1], &[0, 1]]);
        assert_eq!(
            FieldMatrix::solve_left(&g, &mat(&f2, &[&[1, 0]])).unwrap(),
            mat(&f2, &[&[1, 1]])
        );
        assert_eq!(
            FieldMatrix::solve_left(&mat(&f2, &[&[1, 1]]), &mat(&f2, &[&[1, 0]])),
            Err(MatrixError::NoSolution)
        );
        assert!(matches!(
            FieldMatrix::solve_left(&g, &mat(&f2, &[&[1, 0, 1]])),
            Err(MatrixError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn solve_left_fixes_free_variables_to_zero() {
        // duplicate rows: the second copy is a free variable
        let f3 = gf(3);
        let g = mat(&f3, &[&[1, 0], &[1, 0], &[0, 1]]);
        let x = FieldMatrix::solve_left(&g, &mat(&f3, &[&[2, 1]])).unwrap();
        assert_eq!(x, mat(&f3, &[&[2, 0, 1]]));
    }

    #[test]
    fn kron_identity_examples() {
        let f2 = gf(2);
        let a = mat(&f2, &[&[1, 1], &[0, 1]]);
        assert_eq!(a.kron_identity(1), a);
        assert_eq!(
            mat(&f2, &[&[1]]).kron_identity(3),
            FieldMatrix::identity(&f2, 3)
        );
        assert_eq!(
            a.kron_identity(2),
            mat(
                &f2,
                &[&[1, 0, 1, 0], &[0, 1, 0, 1], &[0, 0, 1, 0], &[0, 0, 0, 1]]
            )
        );
    }

    #[test]
    fn extension_field_matrices() {
        let f4 = Field::new(2, 2).unwrap();
        // x has inverse x + 1 in GF(4) = GF(2)[x]/(x^2+x+1); packed x = 2, x+1 = 3
        let a = mat(&f4, &[&[2]]);
        assert_eq!(a.inverse().unwrap(), mat(&f4, &[&[3]]));
        let b = mat(&f4, &[&[2, 3], &[1, 1]]);
        let inv = b.inverse().unwrap();
        assert_eq!(b.mul(&inv).unwrap(), FieldMatrix::identity(&f4, 2));
    }
}
