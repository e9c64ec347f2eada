use nalgebra::{DMatrix, DVector};

use crate::error::Result;
use crate::matstab::stages::StageMatrices;
use crate::stepping::LinearSolver;

/// Full-vector step matrices `U^{n+1} = T1 U^n + T2 U^{n-1}` and their
/// restriction to the active unknowns, `V^{n+1} = B1 V^n + B2 V^{n-1}`.
#[derive(Debug, Clone)]
pub struct ThreeLevelUpdate {
    pub t1: DMatrix<f64>,
    pub t2: DMatrix<f64>,
    pub b1: DMatrix<f64>,
    pub b2: DMatrix<f64>,
    /// Global index of each active unknown.
    pub active: Vec<usize>,
    /// Maps active values to the full vector that satisfies the constraints.
    pub extension: DMatrix<f64>,
}

impl ThreeLevelUpdate {
    pub fn dim(&self) -> usize {
        self.active.len()
    }

    /// Full unknown vector whose active entries are `v` and whose
    /// constraint entries solve the boundary and interpolation equations.
    pub fn extend(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.extension * v
    }

    pub fn restrict(&self, u: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(self.active.len(), self.active.iter().map(|&i| u[i]))
    }

    /// One step of the compressed recurrence.
    pub fn step(&self, vn: &DVector<f64>, vnm1: &DVector<f64>) -> DVector<f64> {
        &self.b1 * vn + &self.b2 * vnm1
    }
}

fn select(m: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

/// Composes the stage solve with `n_u` dissipation sweeps and eliminates
/// the constraint unknowns.
pub fn compress(stages: &StageMatrices, n_u: u32) -> Result<ThreeLevelUpdate> {
    let q0 = LinearSolver::new(stages.q0.clone())?;
    let mut t1 = q0.solve_matrix(&stages.q1)?;
    let mut t2 = q0.solve_matrix(&stages.q2)?;
    if n_u > 0 {
        let p0 = LinearSolver::new(stages.p0.clone())?;
        let m = p0.solve_matrix(&stages.p1)?;
        let nm = p0.solve_matrix(&stages.p2)?;
        for _ in 0..n_u {
            t1 = &m * &t1;
            t2 = &m * &t2 + &nm;
        }
    }

    let (act, cons) = (&stages.active, &stages.constraints);
    let n = stages.dim();
    let mut extension = DMatrix::zeros(n, act.len());
    for (k, &i) in act.iter().enumerate() {
        extension[(i, k)] = 1.0;
    }
    if !cons.is_empty() {
        let cc = LinearSolver::new(select(&stages.q0, cons, cons))?;
        let dep = -cc.solve_matrix(&select(&stages.q0, cons, act))?;
        for (r, &i) in cons.iter().enumerate() {
            extension.row_mut(i).copy_from(&dep.row(r));
        }
    }
    let b1 = select(&t1, act, &(0..n).collect::<Vec<_>>()) * &extension;
    let b2 = select(&t2, act, &(0..n).collect::<Vec<_>>()) * &extension;
    Ok(ThreeLevelUpdate {
        t1,
        t2,
        b1,
        b2,
        active: act.clone(),
        extension,
    })
}
