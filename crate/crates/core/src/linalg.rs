//! Small dense LU factorization used for the collocation operators.
//!
//! The matrices involved are at most a few hundred rows, so a plain
//! partial-pivoting Doolittle factorization is all that is needed.

use ndarray::{Array1, Array2, ArrayView1};

use crate::error::BasisError;
use crate::scalar::Real;

#[derive(Debug, Clone)]
pub(crate) struct Lu<T> {
    lu: Array2<T>,
    perm: Vec<usize>,
}

impl<T: Real> Lu<T> {
    pub(crate) fn factor(a: &Array2<T>) -> Result<Self, BasisError> {
        let n = a.nrows();
        assert_eq!(n, a.ncols(), "LU requires a square matrix");
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.iter().fold(T::zero(), |m, &x| m.max(x.abs()));
        let tiny = scale * T::epsilon() * T::from_usize_lossy(n.max(1));
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[[i, k]].abs()))
                .fold((k, T::zero()), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pmax <= tiny || !pmax.is_finite() {
                return Err(BasisError::SingularOperator { column: k });
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    lu.swap([p, j], [k, j]);
                }
            }
            let pivot = lu[[k, k]];
            for i in k + 1..n {
                let f = lu[[i, k]] / pivot;
                lu[[i, k]] = f;
                if f != T::zero() {
                    for j in k + 1..n {
                        let u = lu[[k, j]];
                        lu[[i, j]] -= f * u;
                    }
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub(crate) fn solve(&self, b: ArrayView1<'_, T>) -> Array1<T> {
        let n = self.lu.nrows();
        let mut x: Array1<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[[i, j]] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.lu[[i, j]] * x[j];
            }
            x[i] = s / self.lu[[i, i]];
        }
        x
    }

    /// Solves `A X = B` column by column.
    pub(crate) fn solve_matrix(&self, b: &Array2<T>) -> Array2<T> {
        let mut out = Array2::zeros(b.raw_dim());
        for (j, col) in b.columns().into_iter().enumerate() {
            out.column_mut(j).assign(&self.solve(col));
        }
        out
    }

    pub(crate) fn inverse(&self) -> Array2<T> {
        self.solve_matrix(&Array2::eye(self.lu.nrows()))
    }
}
