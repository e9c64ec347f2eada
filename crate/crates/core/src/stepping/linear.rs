use nalgebra::{DMatrix, DVector, Dyn, LU};

use crate::error::{Error, Result};

/// Relative residual accepted from a dense solve.
pub const RESIDUAL_TOL: f64 = 1e-11;

/// Pivot magnitude, relative to the largest pivot, below which a matrix is
/// treated as singular.
const PIVOT_TOL: f64 = 1e-14;

/// LU factorization of a square system, reused across right-hand sides.
#[derive(Debug, Clone)]
pub struct LinearSolver {
    matrix: DMatrix<f64>,
    lu: LU<f64, Dyn, Dyn>,
}

fn norm1(m: &DMatrix<f64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `||A||_1 ||A^{-1}||_1`, infinite if the inverse cannot be formed.
pub fn condition_estimate(m: &DMatrix<f64>) -> f64 {
    match m.clone().try_inverse() {
        Some(inv) => norm1(m) * norm1(&inv),
        None => f64::INFINITY,
    }
}

impl LinearSolver {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidArgument(format!(
                "system matrix is {}x{}, not square",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let lu = matrix.clone().lu();
        let pivots = lu.u().diagonal().map(f64::abs);
        let largest = pivots.max();
        if pivots.len() > 0 && !(pivots.min() > PIVOT_TOL * largest) {
            return Err(Error::SingularSystem {
                cond_estimate: condition_estimate(&matrix),
            });
        }
        Ok(LinearSolver { matrix, lu })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Solves `A x = rhs`, with one refinement sweep if the first residual is large.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let b = DVector::from_column_slice(rhs);
        let singular = || Error::SingularSystem {
            cond_estimate: condition_estimate(&self.matrix),
        };
        let mut x = self.lu.solve(&b).ok_or_else(singular)?;
        let limit = RESIDUAL_TOL * b.amax();
        let mut r = &b - &self.matrix * &x;
        if r.amax() > limit {
            x += self.lu.solve(&r).ok_or_else(singular)?;
            r = &b - &self.matrix * &x;
        }
        if r.amax() > limit {
            return Err(Error::ResidualTooLarge {
                residual: r.amax(),
                limit,
            });
        }
        Ok(x.as_slice().to_vec())
    }

    /// Solves for every column of `rhs`.
    pub fn solve_matrix(&self, rhs: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        self.lu.solve(rhs).ok_or_else(|| Error::SingularSystem {
            cond_estimate: condition_estimate(&self.matrix),
        })
    }
}

/// One-off dense solve with the residual check.
pub fn solve_implicit(matrix: &DMatrix<f64>, rhs: &[f64]) -> Result<Vec<f64>> {
    LinearSolver::new(matrix.clone())?.solve(rhs)
}
