use nalgebra::DMatrix;

use crate::error::Result;
use crate::grid::{OversetGrid1D, PointKind, Side};
use crate::operators::{dissipation_stencil, laplacian_squared_stencil, laplacian_stencil, Order};
use crate::stepping::{DissipationMode, SchemeConfig};

/// Matrices of one time step over the full unknown vector.
///
/// Stages 1 and 2 read `Q0 U^(0) = Q1 U^n + Q2 U^{n-1}`, each dissipation
/// sweep reads `P0 U^(k) = P1 U^(k-1) + P2 U^{n-1}`. Unknowns are ordered as
/// in [`OversetGrid1D::global`]: the left grid from its first ghost to its
/// last interpolation point, then the right grid.
#[derive(Debug, Clone)]
pub struct StageMatrices {
    pub q0: DMatrix<f64>,
    pub q1: DMatrix<f64>,
    pub q2: DMatrix<f64>,
    pub p0: DMatrix<f64>,
    pub p1: DMatrix<f64>,
    pub p2: DMatrix<f64>,
    /// Global indices of the active points, increasing.
    pub active: Vec<usize>,
    /// Global indices of boundary, ghost and interpolation rows, increasing.
    pub constraints: Vec<usize>,
    pub dt: f64,
    /// Number of dissipation sweeps the configuration asks for (0 if none).
    pub n_u: u32,
}

impl StageMatrices {
    pub fn dim(&self) -> usize {
        self.q0.nrows()
    }
}

fn add_row(m: &mut DMatrix<f64>, row: usize, cols: impl Fn(isize) -> usize, j: isize, stencil: &[f64], f: f64) {
    let half = (stencil.len() / 2) as isize;
    for (k, a) in stencil.iter().enumerate() {
        m[(row, cols(j + k as isize - half))] += f * a;
    }
}

/// Boundary, ghost and interpolation rows, as used in `Q0` and `P0`.
fn constraint_rows(grid: &OversetGrid1D, m: &mut DMatrix<f64>) {
    for side in [Side::Left, Side::Right] {
        let g = grid.component(side);
        for j in g.indices() {
            let r = grid.global(side, j);
            match g.kind(j) {
                PointKind::Active => {}
                PointKind::Dirichlet => m[(r, r)] = 1.0,
                PointKind::Ghost => {
                    m[(r, r)] = 1.0;
                    m[(r, grid.global(side, g.ghost_mirror(j)))] = 1.0;
                }
                PointKind::Interpolation => m[(r, r)] = 1.0,
            }
        }
        for st in grid.stencils_for(side) {
            let r = grid.global(side, st.target_index);
            for (w, d) in st.weights.iter().zip(st.donor_indices()) {
                m[(r, grid.global(st.donor, d))] -= w;
            }
        }
    }
}

/// Assembles the stage matrices with the time step the configuration's CFL
/// target gives on `grid`.
pub fn assemble_stages(grid: &OversetGrid1D, config: &SchemeConfig) -> Result<StageMatrices> {
    assemble_stages_with_dt(grid, config, config.time_step(grid))
}

pub fn assemble_stages_with_dt(grid: &OversetGrid1D, config: &SchemeConfig, dt: f64) -> Result<StageMatrices> {
    config.validate()?;
    grid.check_explicit()?;
    if config.order != grid.order {
        return Err(crate::Error::InvalidArgument(format!(
            "grid built for order {} but scheme has order {}",
            grid.order, config.order
        )));
    }
    let n = grid.total_len();
    let mut q0 = DMatrix::zeros(n, n);
    let mut q1 = DMatrix::zeros(n, n);
    let mut q2 = DMatrix::zeros(n, n);
    let mut p0 = DMatrix::zeros(n, n);
    let mut p1 = DMatrix::zeros(n, n);
    let mut p2 = DMatrix::zeros(n, n);
    constraint_rows(grid, &mut q0);
    constraint_rows(grid, &mut p0);

    let dt2 = dt * dt;
    let fourth = config.order == Order::Four;
    let corrections = config.dissipation == DissipationMode::PredictorCorrector && config.dissipation_active();
    let monolithic = config.dissipation == DissipationMode::Monolithic;
    let mut active = Vec::new();
    for side in [Side::Left, Side::Right] {
        let g = grid.component(side);
        let (a2, a4) = config.weights(config.mode(side));
        let b2 = 1.0 - 2.0 * a2;
        let b4 = a2 - 2.0 * a4 - 1.0 / 12.0;
        let lap = laplacian_stencil(config.order, g.h, config.c);
        let l2sq = laplacian_squared_stencil(g.h, config.c);
        let q = dissipation_stencil(config.order, g.h, config.c);
        let s = 0.5 * config.dissipation_params(g.h, dt)?.nu_gamma * dt;
        let col = |j: isize| grid.global(side, j);
        for j in g.active_indices() {
            let r = col(j);
            active.push(r);
            q0[(r, r)] += 1.0;
            q1[(r, r)] += 2.0;
            q2[(r, r)] -= 1.0;
            add_row(&mut q0, r, col, j, &lap, -a2 * dt2);
            add_row(&mut q1, r, col, j, &lap, b2 * dt2);
            add_row(&mut q2, r, col, j, &lap, a2 * dt2);
            if fourth {
                add_row(&mut q0, r, col, j, &l2sq, a4 * dt2 * dt2);
                add_row(&mut q1, r, col, j, &l2sq, -b4 * dt2 * dt2);
                add_row(&mut q2, r, col, j, &l2sq, -a4 * dt2 * dt2);
            }
            if monolithic {
                add_row(&mut q0, r, col, j, &q, s);
                add_row(&mut q2, r, col, j, &q, s);
            }
            p0[(r, r)] = 1.0;
            p1[(r, r)] = 1.0;
            if corrections {
                add_row(&mut p1, r, col, j, &q, -s);
                add_row(&mut p2, r, col, j, &q, s);
            }
        }
    }
    active.sort_unstable();
    let mut is_active = vec![false; n];
    for &a in &active {
        is_active[a] = true;
    }
    let constraints = (0..n).filter(|&i| !is_active[i]).collect();
    Ok(StageMatrices {
        q0,
        q1,
        q2,
        p0,
        p1,
        p2,
        active,
        constraints,
        dt,
        n_u: if corrections { config.n_u } else { 0 },
    })
}
