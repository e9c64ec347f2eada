//! Grid-refinement studies against the standing mode
//! `u = sin(m pi (x+1)/2) cos(c m pi t/2)` on [-1, 1].

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::grid::{build_overset, OversetGrid1D, PointKind, Side};
use crate::stepping::config::SchemeConfig;
use crate::stepping::overset::{max_norm, FieldState, OversetStepper};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRecord {
    pub level: usize,
    pub n_right: usize,
    pub n_left: usize,
    pub h_left: f64,
    pub h_right: f64,
    pub dt: f64,
    pub steps: usize,
    pub t_final: f64,
    pub max_error: f64,
    /// `log2` of the error ratio to the previous level.
    pub order: Option<f64>,
}

/// One row of a time history.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub n: usize,
    pub t: f64,
    pub max_norm: f64,
    pub error_if_exact: f64,
}

pub fn standing_mode(mode: u32, c: f64) -> impl Fn(f64, f64) -> f64 {
    let k = mode as f64 * PI / 2.0;
    move |x, t| (k * (x + 1.0)).sin() * (c * k * t).cos()
}

/// Max error over all non-ghost points.
pub fn max_error(grid: &OversetGrid1D, levels: &[Vec<f64>], exact: impl Fn(f64) -> f64) -> f64 {
    let mut err: f64 = 0.0;
    for side in [Side::Left, Side::Right] {
        let g = grid.component(side);
        for j in g.indices() {
            if g.kind(j) != PointKind::Ghost {
                err = err.max((levels[side.index()][g.slot(j)] - exact(g.x(j))).abs());
            }
        }
    }
    err
}

/// Runs the standing mode to `t_final` with the time step shortened so that
/// `t_final` is hit exactly; returns the history and the final state.
pub fn simulate_standing_mode(
    grid: &OversetGrid1D,
    config: &SchemeConfig,
    mode: u32,
    t_final: f64,
) -> Result<(Vec<RunRecord>, FieldState)> {
    let dt_target = config.time_step(grid);
    let steps = ((t_final / dt_target) - 1e-9).ceil().max(1.0) as usize;
    let dt = t_final / steps as f64;
    let stepper = OversetStepper::with_dt(grid, *config, dt)?;
    let u = standing_mode(mode, config.c);
    let record = |levels: &[Vec<f64>], n: usize| RunRecord {
        n,
        t: n as f64 * dt,
        max_norm: max_norm(levels),
        error_if_exact: max_error(grid, levels, |x| u(x, n as f64 * dt)),
    };
    let mut state = stepper.start(|x| u(x, 0.0), |_| 0.0)?;
    let mut history = vec![record(&state.previous, 0), record(&state.current, 1)];
    while state.step < steps {
        state = stepper.advance(&state)?;
        history.push(record(&state.current, state.step));
    }
    Ok((history, state))
}

/// Error at `t_final` on `levels` grids with `N_R = n_right0 * 2^l`.
pub fn run_convergence(
    mode: u32,
    delta: f64,
    n_right0: usize,
    levels: usize,
    config: &SchemeConfig,
    t_final: f64,
) -> Result<Vec<ConvergenceRecord>> {
    config.validate()?;
    let mut out: Vec<ConvergenceRecord> = Vec::with_capacity(levels);
    for level in 0..levels {
        let n_right = n_right0 << level;
        let grid = build_overset(delta, n_right, config.order)?;
        let (history, state) = simulate_standing_mode(&grid, config, mode, t_final)?;
        let max_error = history.last().map(|r| r.error_if_exact).unwrap_or(0.0);
        let order = out.last().and_then(|prev: &ConvergenceRecord| {
            (prev.max_error > 0.0 && max_error > 0.0).then(|| (prev.max_error / max_error).log2())
        });
        out.push(ConvergenceRecord {
            level,
            n_right,
            n_left: grid.left.n_active,
            h_left: grid.left.h,
            h_right: grid.right.h,
            dt: state.dt,
            steps: state.step,
            t_final,
            max_error,
            order,
        });
    }
    Ok(out)
}
