//! Time stepping on the two-grid overset configuration.
//!
//! A step runs in three stages. Explicit grids are advanced pointwise, then
//! the implicit grids are solved together with their boundary and
//! interpolation rows, and finally `n_u` predictor-corrector dissipation
//! sweeps are applied. Boundary and interpolation conditions are re-imposed
//! after every stage and every correction.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{ComponentGrid1D, OversetGrid1D, PointKind, Side};
use crate::operators::{dissipation_stencil, laplacian_squared_stencil, laplacian_stencil, DissipationParams, Order};
use crate::stepping::config::{DissipationMode, SchemeConfig, TimeMode};
use crate::stepping::linear::LinearSolver;

const SIDES: [Side; 2] = [Side::Left, Side::Right];

/// Solution at two time levels. Each level holds one array per grid,
/// including ghost and interpolation slots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldState {
    pub step: usize,
    pub dt: f64,
    pub current: Vec<Vec<f64>>,
    pub previous: Vec<Vec<f64>>,
}

impl FieldState {
    pub fn zeros(lengths: &[usize], dt: f64) -> Self {
        let z: Vec<Vec<f64>> = lengths.iter().map(|&n| vec![0.0; n]).collect();
        FieldState {
            step: 0,
            dt,
            current: z.clone(),
            previous: z,
        }
    }

    pub fn time(&self) -> f64 {
        self.step as f64 * self.dt
    }

    pub fn max_norm(&self) -> f64 {
        max_norm(&self.current)
    }
}

pub fn max_norm(levels: &[Vec<f64>]) -> f64 {
    levels
        .iter()
        .flat_map(|u| u.iter())
        .fold(0.0, |m, v| m.max(v.abs()))
}

/// Initial data for the first step. `w` is `2 dt u1 + (dt^3/3) L_2 u1` on
/// active points, the odd-in-time part of the Taylor start at fourth order.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstStepTerms {
    pub u0: Vec<Vec<f64>>,
    pub u1: Vec<Vec<f64>>,
    pub w: Option<Vec<Vec<f64>>>,
}

impl FirstStepTerms {
    /// Samples `u0`, `u1` at every point and imposes the constraints on both.
    pub fn sample(grid: &OversetGrid1D, dt: f64, c: f64, u0: impl Fn(f64) -> f64, u1: impl Fn(f64) -> f64) -> Self {
        let mut a: Vec<Vec<f64>> = SIDES.iter().map(|&s| grid.component(s).coordinates().iter().map(|&x| u0(x)).collect()).collect();
        let mut b: Vec<Vec<f64>> = SIDES.iter().map(|&s| grid.component(s).coordinates().iter().map(|&x| u1(x)).collect()).collect();
        apply_constraints(grid, &mut a);
        apply_constraints(grid, &mut b);
        let w = (grid.order == Order::Four).then(|| {
            SIDES
                .iter()
                .map(|&s| {
                    let g = grid.component(s);
                    let l2 = laplacian_stencil(Order::Two, g.h, c);
                    let u = &b[s.index()];
                    let mut w = vec![0.0; g.len()];
                    for j in g.active_indices() {
                        let k = g.slot(j);
                        w[k] = 2.0 * dt * u[k] + dt.powi(3) / 3.0 * stencil_at(u, k, &l2);
                    }
                    w
                })
                .collect()
        });
        FirstStepTerms { u0: a, u1: b, w }
    }
}

pub(crate) fn stencil_at(u: &[f64], slot: usize, st: &[f64]) -> f64 {
    let half = st.len() / 2;
    let mut s = 0.0;
    for (k, a) in st.iter().enumerate() {
        s += a * u[slot + k - half];
    }
    s
}

/// Dirichlet value, then odd reflection into the ghost points.
pub fn apply_boundary(g: &ComponentGrid1D, u: &mut [f64]) {
    u[g.slot(g.dirichlet_index)] = 0.0;
    for &j in &g.ghost_indices {
        u[g.slot(j)] = -u[g.slot(g.ghost_mirror(j))];
    }
}

/// Fills the interpolation points of `target` from the other grid.
pub fn interpolate(grid: &OversetGrid1D, target: Side, levels: &mut [Vec<f64>]) {
    let (left, right) = levels.split_at_mut(1);
    let (tvals, dvals) = match target {
        Side::Left => (&mut left[0], &right[0]),
        Side::Right => (&mut right[0], &left[0]),
    };
    let tg = grid.component(target);
    let dg = grid.component(target.other());
    for s in grid.stencils_for(target) {
        let mut v = 0.0;
        for (w, j) in s.weights.iter().zip(s.donor_indices()) {
            v += w * dvals[dg.slot(j)];
        }
        tvals[tg.slot(s.target_index)] = v;
    }
}

/// Boundary conditions on both grids, then interpolation on both.
pub fn apply_constraints(grid: &OversetGrid1D, levels: &mut [Vec<f64>]) {
    for s in SIDES {
        apply_boundary(grid.component(s), &mut levels[s.index()]);
    }
    for s in SIDES {
        interpolate(grid, s, levels);
    }
}

struct GridOps {
    mode: TimeMode,
    alpha2: f64,
    alpha4: f64,
    lap: Vec<f64>,
    lap2: Vec<f64>,
    l2sq: Vec<f64>,
    q: Vec<f64>,
    diss: DissipationParams,
}

/// Dense system over the points of all implicit grids.
struct ImplicitSystem {
    sides: Vec<Side>,
    offsets: Vec<usize>,
    solver: LinearSolver,
}

impl ImplicitSystem {
    fn offset(&self, side: Side) -> Option<usize> {
        self.sides.iter().position(|s| *s == side).map(|i| self.offsets[i])
    }
}

/// Reusable stepper for one grid, configuration and time step.
pub struct OversetStepper<'a> {
    grid: &'a OversetGrid1D,
    config: SchemeConfig,
    dt: f64,
    ops: [GridOps; 2],
    plain: Option<ImplicitSystem>,
    monolithic: Option<ImplicitSystem>,
}

impl<'a> OversetStepper<'a> {
    /// Stepper with the time step chosen from the configuration's CFL target.
    pub fn new(grid: &'a OversetGrid1D, config: SchemeConfig) -> Result<Self> {
        let dt = config.time_step(grid);
        Self::with_dt(grid, config, dt)
    }

    pub fn with_dt(grid: &'a OversetGrid1D, config: SchemeConfig, dt: f64) -> Result<Self> {
        config.validate()?;
        if config.order != grid.order {
            return Err(Error::InvalidArgument(format!(
                "grid built for order {} but scheme has order {}",
                grid.order, config.order
            )));
        }
        if !(dt > 0.0) {
            return Err(Error::InvalidArgument(format!("time step must be positive, got {dt}")));
        }
        grid.check_explicit()?;
        let make_ops = |side: Side| -> Result<GridOps> {
            let g = grid.component(side);
            let mode = config.mode(side);
            let (alpha2, alpha4) = config.weights(mode);
            Ok(GridOps {
                mode,
                alpha2,
                alpha4,
                lap: laplacian_stencil(config.order, g.h, config.c),
                lap2: laplacian_stencil(Order::Two, g.h, config.c),
                l2sq: laplacian_squared_stencil(g.h, config.c),
                q: dissipation_stencil(config.order, g.h, config.c),
                diss: config.dissipation_params(g.h, dt)?,
            })
        };
        let ops = [make_ops(Side::Left)?, make_ops(Side::Right)?];
        let mut stepper = OversetStepper {
            grid,
            config,
            dt,
            ops,
            plain: None,
            monolithic: None,
        };
        stepper.plain = stepper.build_system(false)?;
        if config.dissipation == DissipationMode::Monolithic {
            stepper.monolithic = stepper.build_system(true)?;
        }
        Ok(stepper)
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn grid(&self) -> &OversetGrid1D {
        self.grid
    }

    pub fn config(&self) -> &SchemeConfig {
        &self.config
    }

    pub fn dissipation(&self, side: Side) -> &DissipationParams {
        &self.ops[side.index()].diss
    }

    fn implicit_stencil(&self, side: Side, with_q: bool) -> Vec<f64> {
        let o = &self.ops[side.index()];
        let dt2 = self.dt * self.dt;
        let width = if with_q { o.q.len() } else { 5 };
        let mut st = vec![0.0; width];
        let mid = width / 2;
        let mut add = |s: &[f64], f: f64| {
            let off = mid - s.len() / 2;
            for (k, a) in s.iter().enumerate() {
                st[off + k] += f * a;
            }
        };
        add(&o.lap, -o.alpha2 * dt2);
        if self.config.order == Order::Four {
            add(&o.l2sq, o.alpha4 * dt2 * dt2);
        }
        if with_q {
            add(&o.q, 0.5 * o.diss.nu_gamma * self.dt);
        }
        st[mid] += 1.0;
        st
    }

    fn build_system(&self, with_q: bool) -> Result<Option<ImplicitSystem>> {
        let sides: Vec<Side> = SIDES
            .iter()
            .copied()
            .filter(|&s| self.config.mode(s) == TimeMode::Implicit)
            .collect();
        if sides.is_empty() {
            return Ok(None);
        }
        let mut offsets = Vec::new();
        let mut n = 0;
        for &s in &sides {
            offsets.push(n);
            n += self.grid.component(s).len();
        }
        let col = |side: Side, j: isize| -> Option<usize> {
            sides
                .iter()
                .position(|s| *s == side)
                .map(|i| offsets[i] + self.grid.component(side).slot(j))
        };
        let mut m = DMatrix::zeros(n, n);
        for &s in &sides {
            let g = self.grid.component(s);
            let st = self.implicit_stencil(s, with_q);
            let half = (st.len() / 2) as isize;
            for j in g.indices() {
                let row = col(s, j).expect("implicit side");
                match g.kind(j) {
                    PointKind::Active => {
                        for (k, a) in st.iter().enumerate() {
                            if *a != 0.0 {
                                m[(row, col(s, j + k as isize - half).unwrap())] += a;
                            }
                        }
                    }
                    PointKind::Dirichlet => m[(row, row)] = 1.0,
                    PointKind::Ghost => {
                        m[(row, row)] = 1.0;
                        m[(row, col(s, g.ghost_mirror(j)).unwrap())] = 1.0;
                    }
                    PointKind::Interpolation => {
                        m[(row, row)] = 1.0;
                        let sten = self
                            .grid
                            .stencils_for(s)
                            .find(|t| t.target_index == j)
                            .expect("every interpolation point has a stencil");
                        if col(sten.donor, sten.donor_start).is_some() {
                            for (w, d) in sten.weights.iter().zip(sten.donor_indices()) {
                                m[(row, col(sten.donor, d).unwrap())] -= w;
                            }
                        }
                    }
                }
            }
        }
        Ok(Some(ImplicitSystem {
            sides,
            offsets,
            solver: LinearSolver::new(m)?,
        }))
    }

    /// Right-hand side of the stage-1/2 update at the active points of `side`.
    fn step_rhs(&self, side: Side, un: &[f64], unm1: &[f64], with_q: bool) -> Vec<f64> {
        let g = self.grid.component(side);
        let o = &self.ops[side.index()];
        let dt2 = self.dt * self.dt;
        let beta2 = 1.0 - 2.0 * o.alpha2;
        let beta4 = o.alpha2 - 2.0 * o.alpha4 - 1.0 / 12.0;
        let w2: Vec<f64> = un.iter().zip(unm1).map(|(a, b)| beta2 * a + o.alpha2 * b).collect();
        let w4: Vec<f64> = un.iter().zip(unm1).map(|(a, b)| beta4 * a + o.alpha4 * b).collect();
        let mut rhs = vec![0.0; g.len()];
        for j in g.active_indices() {
            let k = g.slot(j);
            let mut v = 2.0 * un[k] - unm1[k] + dt2 * stencil_at(&w2, k, &o.lap);
            if self.config.order == Order::Four {
                v -= dt2 * dt2 * stencil_at(&w4, k, &o.l2sq);
            }
            if with_q {
                v += 0.5 * o.diss.nu_gamma * self.dt * stencil_at(unm1, k, &o.q);
            }
            rhs[k] = v;
        }
        rhs
    }

    fn first_step_rhs(&self, side: Side, u0: &[f64], u1: &[f64]) -> Vec<f64> {
        let g = self.grid.component(side);
        let o = &self.ops[side.index()];
        let dt = self.dt;
        let dt2 = dt * dt;
        let beta2 = 1.0 - 2.0 * o.alpha2;
        let beta4 = o.alpha2 - 2.0 * o.alpha4 - 1.0 / 12.0;
        let w2: Vec<f64> = u0.iter().zip(u1).map(|(a, b)| 0.5 * beta2 * a - o.alpha2 * dt * b).collect();
        let w4: Vec<f64> = u0.iter().zip(u1).map(|(a, b)| 0.5 * beta4 * a - o.alpha4 * dt * b).collect();
        let mut rhs = vec![0.0; g.len()];
        for j in g.active_indices() {
            let k = g.slot(j);
            let mut v = u0[k] + dt * u1[k] + dt2 * stencil_at(&w2, k, &o.lap);
            if self.config.order == Order::Four {
                v += dt2 * dt / 6.0 * stencil_at(u1, k, &o.lap2);
                v -= dt2 * dt2 * stencil_at(&w4, k, &o.l2sq);
            }
            rhs[k] = v;
        }
        rhs
    }

    /// Stages 1 and 2: explicit grids take their right-hand side directly,
    /// implicit grids solve for it; constraints are imposed on the result.
    fn solve_stages(&self, rhs: [Vec<f64>; 2], system: Option<&ImplicitSystem>) -> Result<Vec<Vec<f64>>> {
        let mut out: Vec<Vec<f64>> = SIDES.iter().map(|&s| vec![0.0; self.grid.component(s).len()]).collect();
        for s in SIDES {
            if self.ops[s.index()].mode == TimeMode::Explicit {
                let g = self.grid.component(s);
                for j in g.active_indices() {
                    out[s.index()][g.slot(j)] = rhs[s.index()][g.slot(j)];
                }
                apply_boundary(g, &mut out[s.index()]);
            }
        }
        if let Some(sys) = system {
            let mut b = vec![0.0; sys.solver.dim()];
            for &s in &sys.sides {
                let g = self.grid.component(s);
                let off = sys.offset(s).unwrap();
                for j in g.active_indices() {
                    b[off + g.slot(j)] = rhs[s.index()][g.slot(j)];
                }
                for sten in self.grid.stencils_for(s) {
                    if sys.offset(sten.donor).is_none() {
                        let dg = self.grid.component(sten.donor);
                        let dv = &out[sten.donor.index()];
                        let v: f64 = sten.weights.iter().zip(sten.donor_indices()).map(|(w, d)| w * dv[dg.slot(d)]).sum();
                        b[off + g.slot(sten.target_index)] = v;
                    }
                }
            }
            let x = sys.solver.solve(&b)?;
            for &s in &sys.sides {
                let off = sys.offset(s).unwrap();
                let n = self.grid.component(s).len();
                out[s.index()].copy_from_slice(&x[off..off + n]);
            }
        }
        for s in SIDES {
            if self.ops[s.index()].mode == TimeMode::Explicit {
                interpolate(self.grid, s, &mut out);
            }
        }
        Ok(out)
    }

    /// Stage 3: `n_u` sweeps of `U <- U - (nu dt / 2) Q (U - U^{n-1})`.
    fn dissipate(&self, mut u: Vec<Vec<f64>>, unm1: &[Vec<f64>]) -> Vec<Vec<f64>> {
        if self.config.dissipation != DissipationMode::PredictorCorrector || !self.config.dissipation_active() {
            return u;
        }
        for _ in 0..self.config.n_u {
            let mut next = u.clone();
            for s in SIDES {
                let g = self.grid.component(s);
                let o = &self.ops[s.index()];
                let f = 0.5 * o.diss.nu_gamma * self.dt;
                let d: Vec<f64> = u[s.index()].iter().zip(&unm1[s.index()]).map(|(a, b)| a - b).collect();
                for j in g.active_indices() {
                    let k = g.slot(j);
                    next[s.index()][k] = u[s.index()][k] - f * stencil_at(&d, k, &o.q);
                }
            }
            apply_constraints(self.grid, &mut next);
            u = next;
        }
        u
    }

    /// Implicit (or Taylor, on explicit grids) first step from `u0`, `u1`.
    pub fn first_step(&self, terms: &FirstStepTerms) -> Result<FieldState> {
        let rhs = [
            self.first_step_rhs(Side::Left, &terms.u0[0], &terms.u1[0]),
            self.first_step_rhs(Side::Right, &terms.u0[1], &terms.u1[1]),
        ];
        let u1 = self.solve_stages(rhs, self.plain.as_ref())?;
        Ok(FieldState {
            step: 1,
            dt: self.dt,
            current: u1,
            previous: terms.u0.clone(),
        })
    }

    /// Samples initial data and takes the first step.
    pub fn start(&self, u0: impl Fn(f64) -> f64, u1: impl Fn(f64) -> f64) -> Result<FieldState> {
        self.first_step(&FirstStepTerms::sample(self.grid, self.dt, self.config.c, u0, u1))
    }

    /// One step of the partitioned scheme with predictor-corrector dissipation.
    pub fn advance_spie(&self, state: &FieldState) -> Result<FieldState> {
        self.check_state(state)?;
        let rhs = [
            self.step_rhs(Side::Left, &state.current[0], &state.previous[0], false),
            self.step_rhs(Side::Right, &state.current[1], &state.previous[1], false),
        ];
        let predicted = self.solve_stages(rhs, self.plain.as_ref())?;
        let next = self.dissipate(predicted, &state.previous);
        Ok(FieldState {
            step: state.step + 1,
            dt: self.dt,
            current: next,
            previous: state.current.clone(),
        })
    }

    /// One step with the dissipation folded into the implicit system.
    pub fn advance_monolithic_uw(&self, state: &FieldState) -> Result<FieldState> {
        self.check_state(state)?;
        let sys = self.monolithic.as_ref().ok_or_else(|| {
            Error::InvalidArgument("stepper was not configured for monolithic dissipation".into())
        })?;
        let rhs = [
            self.step_rhs(Side::Left, &state.current[0], &state.previous[0], true),
            self.step_rhs(Side::Right, &state.current[1], &state.previous[1], true),
        ];
        let next = self.solve_stages(rhs, Some(sys))?;
        Ok(FieldState {
            step: state.step + 1,
            dt: self.dt,
            current: next,
            previous: state.current.clone(),
        })
    }

    /// Steps with whichever dissipation form the configuration selects.
    pub fn advance(&self, state: &FieldState) -> Result<FieldState> {
        match self.config.dissipation {
            DissipationMode::Monolithic => self.advance_monolithic_uw(state),
            _ => self.advance_spie(state),
        }
    }

    fn check_state(&self, state: &FieldState) -> Result<()> {
        let ok = state.current.len() == 2
            && state.previous.len() == 2
            && SIDES.iter().all(|&s| {
                let n = self.grid.component(s).len();
                state.current[s.index()].len() == n && state.previous[s.index()].len() == n
            });
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument("state arrays do not match the grid".into()))
        }
    }
}

/// Single step without keeping a stepper around.
pub fn advance_spie(state: &FieldState, grid: &OversetGrid1D, config: &SchemeConfig) -> Result<FieldState> {
    OversetStepper::with_dt(grid, *config, state.dt)?.advance_spie(state)
}

/// First step without keeping a stepper around.
pub fn first_step(terms: &FirstStepTerms, grid: &OversetGrid1D, config: &SchemeConfig, dt: f64) -> Result<FieldState> {
    OversetStepper::with_dt(grid, *config, dt)?.first_step(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::build_overset;
    use crate::stepping::config::SchemeConfig;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_state(grid: &OversetGrid1D, dt: f64, seed: u64) -> FieldState {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut st = FieldState::zeros(&[grid.left.len(), grid.right.len()], dt);
        for lev in [&mut st.current, &mut st.previous] {
            for v in lev.iter_mut().flat_map(|u| u.iter_mut()) {
                *v = rng.random_range(-1.0..1.0);
            }
            apply_constraints(grid, lev);
        }
        st
    }

    #[test]
    fn zero_state_stays_zero() {
        let g = build_overset(0.7, 10, Order::Four).unwrap();
        let s = OversetStepper::new(&g, SchemeConfig::spie(Order::Four)).unwrap();
        let z = FieldState::zeros(&[g.left.len(), g.right.len()], s.dt());
        let n = s.advance_spie(&z).unwrap();
        assert_eq!(n.max_norm(), 0.0);
    }

    #[test]
    fn explicit_step_matches_reference_leapfrog() {
        let g = build_overset(1.0, 10, Order::Two).unwrap();
        let cfg = SchemeConfig::eme(Order::Two).with_gamma(0.0);
        let s = OversetStepper::new(&g, cfg).unwrap();
        let st = random_state(&g, s.dt(), 3);
        let next = s.advance_spie(&st).unwrap();

        // independent update: leapfrog at active points, then boundary and interpolation
        let lam2 = (s.dt() / g.left.h).powi(2);
        let mut refv = st.current.clone();
        for (side, gi) in [(Side::Left, 0), (Side::Right, 1)] {
            let c = g.component(side);
            let (u, um) = (&st.current[gi], &st.previous[gi]);
            for j in c.active_indices() {
                let k = c.slot(j);
                refv[gi][k] = 2.0 * u[k] - um[k] + lam2 * (u[k + 1] - 2.0 * u[k] + u[k - 1]);
            }
        }
        apply_constraints(&g, &mut refv);
        for gi in 0..2 {
            for (a, b) in next.current[gi].iter().zip(&refv[gi]) {
                assert!((a - b).abs() <= 1e-14, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn constraints_hold_after_step() {
        let g = build_overset(0.5, 10, Order::Two).unwrap();
        let s = OversetStepper::new(&g, SchemeConfig::spie(Order::Two).with_gamma(0.3)).unwrap();
        let st = random_state(&g, s.dt(), 11);
        let next = s.advance_spie(&st).unwrap();
        let mut again = next.current.clone();
        apply_constraints(&g, &mut again);
        for gi in 0..2 {
            for (a, b) in next.current[gi].iter().zip(&again[gi]) {
                assert!((a - b).abs() <= 1e-14);
            }
        }
    }

    #[test]
    fn corrections_match_closed_form() {
        // U^{n+1} = R^{n_u} U^(0) + (I - R^{n_u}) U^{n-1}, R = I - (nu dt/2) Q, on
        // the active points with constraints applied between sweeps.
        let g = build_overset(1.2, 10, Order::Four).unwrap();
        let cfg = SchemeConfig::eme(Order::Four).with_corrections(3, 0.9);
        let s = OversetStepper::new(&g, cfg).unwrap();
        let st = random_state(&g, s.dt(), 5);
        let rhs = [
            s.step_rhs(Side::Left, &st.current[0], &st.previous[0], false),
            s.step_rhs(Side::Right, &st.current[1], &st.previous[1], false),
        ];
        let u0 = s.solve_stages(rhs, None).unwrap();
        let direct = s.dissipate(u0.clone(), &st.previous);
        // the difference d = U - U^{n-1} obeys d <- R d with constraints, since
        // U^{n-1} satisfies the same homogeneous constraints
        let mut d: Vec<Vec<f64>> = u0.iter().zip(&st.previous).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect()).collect();
        for _ in 0..3 {
            let mut nd = d.clone();
            for side in SIDES {
                let c = g.component(side);
                let f = 0.5 * s.dissipation(side).nu_gamma * s.dt();
                for j in c.active_indices() {
                    let k = c.slot(j);
                    nd[side.index()][k] = d[side.index()][k] - f * stencil_at(&d[side.index()], k, &s.ops[side.index()].q);
                }
            }
            apply_constraints(&g, &mut nd);
            d = nd;
        }
        for gi in 0..2 {
            for k in 0..d[gi].len() {
                let closed = st.previous[gi][k] + d[gi][k];
                assert!((closed - direct[gi][k]).abs() <= 1e-13);
            }
        }
    }

    #[test]
    fn first_step_of_zero_data() {
        let g = build_overset(0.9, 10, Order::Four).unwrap();
        let s = OversetStepper::new(&g, SchemeConfig::ime(Order::Four)).unwrap();
        let st = s.start(|_| 0.0, |_| 0.0).unwrap();
        assert_eq!(st.max_norm(), 0.0);
        assert_eq!(st.step, 1);
    }

    #[test]
    fn w_term_for_linear_velocity() {
        let g = build_overset(1.0, 10, Order::Four).unwrap();
        let t = FirstStepTerms::sample(&g, 0.05, 1.0, |_| 0.0, |x| 2.0 * x + 1.0);
        let w = t.w.unwrap();
        for s in SIDES {
            let c = g.component(s);
            // constraints break linearity next to the boundary and interpolation points
            for j in c.active_indices().filter(|&j| c.is_active(j - 1) && c.is_active(j + 1)) {
                let k = c.slot(j);
                assert!((w[s.index()][k] - 2.0 * 0.05 * t.u1[s.index()][k]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn monolithic_without_dissipation_is_plain() {
        let g = build_overset(0.8, 10, Order::Two).unwrap();
        let plain = SchemeConfig::ime(Order::Two).with_dissipation(DissipationMode::None);
        let mono = SchemeConfig::ime(Order::Two)
            .with_dissipation(DissipationMode::Monolithic)
            .with_gamma(0.0);
        let a = OversetStepper::new(&g, plain).unwrap();
        let b = OversetStepper::new(&g, mono).unwrap();
        let st = random_state(&g, a.dt(), 9);
        let x = a.advance(&st).unwrap();
        let y = b.advance(&st).unwrap();
        for gi in 0..2 {
            for (p, q) in x.current[gi].iter().zip(&y.current[gi]) {
                assert!((p - q).abs() <= 1e-13);
            }
        }
    }

    #[test]
    fn mismatched_state_is_rejected() {
        let g = build_overset(1.0, 10, Order::Two).unwrap();
        let s = OversetStepper::new(&g, SchemeConfig::eme(Order::Two)).unwrap();
        let bad = FieldState::zeros(&[3, 4], s.dt());
        assert!(s.advance_spie(&bad).is_err());
    }
}
