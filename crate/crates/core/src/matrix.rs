//! Small dense matrices over [`CycNum`], with a floating-point exit for
//! spectra.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::cyclotomic::{CycField, CycNum};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycMatrix {
    field: CycField,
    rows: usize,
    cols: usize,
    data: Vec<CycNum>,
}

impl CycMatrix {
    pub fn zeros(field: CycField, rows: usize, cols: usize) -> Self {
        CycMatrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: CycField, n: usize) -> Self {
        Self::from_fn(
            field,
            n,
            n,
            |i, j| {
                if i == j {
                    field.one()
                } else {
                    field.zero()
                }
            },
        )
    }

    pub fn from_fn(
        field: CycField,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> CycNum,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CycMatrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn field(&self) -> CycField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &CycNum {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CycNum) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &CycMatrix) -> Result<CycMatrix> {
        if self.cols != other.rows {
            return Err(Error::Domain(format!(
                "shape mismatch {}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.field, self.rows, other.cols, |i, j| {
            let mut acc = self.field.zero();
            for k in 0..self.cols {
                let a = self.get(i, k);
                let b = other.get(k, j);
                if !a.is_zero() && !b.is_zero() {
                    acc += &(a * b);
                }
            }
            acc
        }))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CycMatrix {
        Self::from_fn(self.field, self.cols, self.rows, |i, j| {
            self.get(j, i).conj()
        })
    }

    pub fn sub(&self, other: &CycMatrix) -> CycMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.field, self.rows, self.cols, |i, j| {
            self.get(i, j) - other.get(i, j)
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(CycNum::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    /// `A·A* - I`, zero exactly when the rows are orthonormal.
    pub fn unitarity_defect(&self) -> CycMatrix {
        let gram = self.mul(&self.adjoint()).expect("square shapes agree");
        gram.sub(&CycMatrix::identity(self.field, self.rows))
    }

    pub fn to_complex(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).to_complex())
    }

    /// Largest entry modulus of the complex embedding.
    pub fn max_abs(&self) -> f64 {
        self.data
            .iter()
            .map(|x| x.to_complex().norm())
            .fold(0.0, f64::max)
    }

    /// Entries in text form, row-major.
    pub fn to_text(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect()
    }
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    let eig = SymmetricEigen::try_new(m.clone(), 1e-15, 10_000)
        .ok_or_else(|| Error::Numeric("Hermitian eigenvalue solver did not converge".into()))?;
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.total_cmp(b));
    Ok(vals)
}
