//! The same schemes on a single periodic 1D grid, where every point is active.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::operators::{dissipation_stencil, laplacian_squared_stencil, laplacian_stencil, periodic_matrix, DissipationParams, Order};
use crate::stepping::config::{DissipationMode, SchemeConfig, TimeMode};
use crate::stepping::linear::LinearSolver;
use crate::stepping::overset::FieldState;

pub struct PeriodicStepper {
    n: usize,
    h: f64,
    dt: f64,
    config: SchemeConfig,
    alpha2: f64,
    alpha4: f64,
    lap: DMatrix<f64>,
    lap2: DMatrix<f64>,
    l2sq: DMatrix<f64>,
    q: DMatrix<f64>,
    diss: DissipationParams,
    plain: LinearSolver,
    monolithic: Option<LinearSolver>,
}

impl PeriodicStepper {
    /// Grid of `n` points with spacing `h`; the time mode is `config.modes[0]`.
    pub fn new(n: usize, h: f64, config: SchemeConfig) -> Result<Self> {
        let dt = config.time_step_for(&[(h, config.modes[0])]);
        Self::with_dt(n, h, config, dt)
    }

    pub fn with_dt(n: usize, h: f64, config: SchemeConfig, dt: f64) -> Result<Self> {
        config.validate()?;
        let reach = config.order.dissipation_reach();
        if n < 2 * reach + 1 {
            return Err(Error::InvalidArgument(format!("periodic grid needs at least {} points", 2 * reach + 1)));
        }
        if !(h > 0.0) || !(dt > 0.0) {
            return Err(Error::InvalidArgument("spacing and time step must be positive".into()));
        }
        let (alpha2, alpha4) = config.weights(config.modes[0]);
        let c = config.c;
        let lap = periodic_matrix(&laplacian_stencil(config.order, h, c), n);
        let lap2 = periodic_matrix(&laplacian_stencil(Order::Two, h, c), n);
        let l2sq = periodic_matrix(&laplacian_squared_stencil(h, c), n);
        let q = periodic_matrix(&dissipation_stencil(config.order, h, c), n);
        let diss = config.dissipation_params(h, dt)?;
        let dt2 = dt * dt;
        let mut a = DMatrix::identity(n, n) - &lap * (alpha2 * dt2);
        if config.order == Order::Four {
            a += &l2sq * (alpha4 * dt2 * dt2);
        }
        let monolithic = if config.dissipation == DissipationMode::Monolithic {
            Some(LinearSolver::new(&a + &q * (0.5 * diss.nu_gamma * dt))?)
        } else {
            None
        };
        Ok(PeriodicStepper {
            n,
            h,
            dt,
            config,
            alpha2,
            alpha4,
            lap,
            lap2,
            l2sq,
            q,
            diss,
            plain: LinearSolver::new(a)?,
            monolithic,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dissipation(&self) -> &DissipationParams {
        &self.diss
    }

    fn is_explicit(&self) -> bool {
        self.config.modes[0] == TimeMode::Explicit
    }

    fn vec(u: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(u)
    }

    fn step_rhs(&self, un: &DVector<f64>, unm1: &DVector<f64>) -> DVector<f64> {
        let dt2 = self.dt * self.dt;
        let beta2 = 1.0 - 2.0 * self.alpha2;
        let beta4 = self.alpha2 - 2.0 * self.alpha4 - 1.0 / 12.0;
        let mut rhs = un * 2.0 - unm1 + &self.lap * (un * beta2 + unm1 * self.alpha2) * dt2;
        if self.config.order == Order::Four {
            rhs -= &self.l2sq * (un * beta4 + unm1 * self.alpha4) * (dt2 * dt2);
        }
        rhs
    }

    fn solve(&self, rhs: DVector<f64>) -> Result<Vec<f64>> {
        if self.is_explicit() {
            return Ok(rhs.as_slice().to_vec());
        }
        self.plain.solve(rhs.as_slice())
    }

    pub fn first_step(&self, u0: &[f64], u1: &[f64]) -> Result<FieldState> {
        self.check(u0)?;
        self.check(u1)?;
        let (a, b) = (Self::vec(u0), Self::vec(u1));
        let dt = self.dt;
        let dt2 = dt * dt;
        let beta2 = 1.0 - 2.0 * self.alpha2;
        let beta4 = self.alpha2 - 2.0 * self.alpha4 - 1.0 / 12.0;
        let mut rhs = &a + &b * dt + &self.lap * (&a * (0.5 * beta2) - &b * (self.alpha2 * dt)) * dt2;
        if self.config.order == Order::Four {
            rhs += &self.lap2 * &b * (dt2 * dt / 6.0);
            rhs -= &self.l2sq * (&a * (0.5 * beta4) - &b * (self.alpha4 * dt)) * (dt2 * dt2);
        }
        let u = self.solve(rhs)?;
        Ok(FieldState {
            step: 1,
            dt,
            current: vec![u],
            previous: vec![u0.to_vec()],
        })
    }

    /// Step with predictor-corrector dissipation (or none).
    pub fn advance_pc(&self, state: &FieldState) -> Result<FieldState> {
        let (un, unm1) = self.levels(state)?;
        let mut u = Self::vec(&self.solve(self.step_rhs(&un, &unm1))?);
        if self.config.dissipation == DissipationMode::PredictorCorrector && self.config.dissipation_active() {
            let f = 0.5 * self.diss.nu_gamma * self.dt;
            for _ in 0..self.config.n_u {
                u = &u - &self.q * (&u - &unm1) * f;
            }
        }
        Ok(self.next(state, u.as_slice().to_vec()))
    }

    /// Step with the dissipation inside the implicit system.
    pub fn advance_monolithic_uw(&self, state: &FieldState) -> Result<FieldState> {
        let solver = self.monolithic.as_ref().ok_or_else(|| {
            Error::InvalidArgument("stepper was not configured for monolithic dissipation".into())
        })?;
        let (un, unm1) = self.levels(state)?;
        let rhs = self.step_rhs(&un, &unm1) + &self.q * &unm1 * (0.5 * self.diss.nu_gamma * self.dt);
        let u = solver.solve(rhs.as_slice())?;
        Ok(self.next(state, u))
    }

    pub fn advance(&self, state: &FieldState) -> Result<FieldState> {
        match self.config.dissipation {
            DissipationMode::Monolithic => self.advance_monolithic_uw(state),
            _ => self.advance_pc(state),
        }
    }

    fn levels(&self, state: &FieldState) -> Result<(DVector<f64>, DVector<f64>)> {
        if state.current.len() != 1 || state.previous.len() != 1 {
            return Err(Error::InvalidArgument("periodic state holds exactly one grid".into()));
        }
        self.check(&state.current[0])?;
        self.check(&state.previous[0])?;
        Ok((Self::vec(&state.current[0]), Self::vec(&state.previous[0])))
    }

    fn check(&self, u: &[f64]) -> Result<()> {
        if u.len() == self.n {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("expected {} values, got {}", self.n, u.len())))
        }
    }

    fn next(&self, state: &FieldState, u: Vec<f64>) -> FieldState {
        FieldState {
            step: state.step + 1,
            dt: self.dt,
            current: vec![u],
            previous: state.current.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{amplification, fourier_symbols};
    use nalgebra::Complex;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn random(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
    }

    #[test]
    fn constant_data_first_step() {
        for cfg in [SchemeConfig::ime(Order::Four), SchemeConfig::eme(Order::Two)] {
            let s = PeriodicStepper::new(16, 0.1, cfg).unwrap();
            let st = s.first_step(&[1.5; 16], &[0.0; 16]).unwrap();
            for v in &st.current[0] {
                assert!((v - 1.5).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn monolithic_without_dissipation_is_plain() {
        let base = SchemeConfig::ime(Order::Two).with_cfl(10.0);
        let a = PeriodicStepper::new(32, 1.0 / 32.0, base.with_dissipation(DissipationMode::None)).unwrap();
        let b = PeriodicStepper::new(32, 1.0 / 32.0, base.with_dissipation(DissipationMode::Monolithic).with_gamma(0.0)).unwrap();
        let st = FieldState {
            step: 1,
            dt: a.dt(),
            current: vec![random(32, 1)],
            previous: vec![random(32, 2)],
        };
        let x = a.advance(&st).unwrap();
        let y = b.advance(&st).unwrap();
        for (p, q) in x.current[0].iter().zip(&y.current[0]) {
            assert!((p - q).abs() < 1e-13);
        }
    }

    /// Two steps of a Fourier mode reveal the amplification factor: with
    /// `U^n = A a_+^n + B a_-^n`, the predicted `U^2` from the roots must match.
    fn check_mode(cfg: SchemeConfig, k: usize) {
        let n = 24;
        let h = 1.0 / n as f64;
        let s = PeriodicStepper::new(n, h, cfg).unwrap();
        let theta = 2.0 * PI * k as f64 / n as f64;
        let nu = s.dissipation().nu_gamma;
        let sc = cfg.symbol_config(nu);
        let q = amplification(&fourier_symbols(&[theta / h], &[h], cfg.c, s.dt(), &sc), &sc);
        let (ap, am) = (q.roots[0], q.roots[1]);
        // U^0 = e^{i theta j}, U^1 = a_+ U^0: then U^2 = a_+^2 U^0 exactly.
        let re = |z: Complex<f64>, j: usize| (z * Complex::from_polar(1.0, theta * j as f64)).re;
        let im = |z: Complex<f64>, j: usize| (z * Complex::from_polar(1.0, theta * j as f64)).im;
        let one = Complex::new(1.0, 0.0);
        for (part, f) in [("re", &re as &dyn Fn(Complex<f64>, usize) -> f64), ("im", &im)] {
            let st = FieldState {
                step: 1,
                dt: s.dt(),
                current: vec![(0..n).map(|j| f(ap, j)).collect()],
                previous: vec![(0..n).map(|j| f(one, j)).collect()],
            };
            let next = s.advance(&st).unwrap();
            for j in 0..n {
                let want = f(ap * ap, j);
                assert!((next.current[0][j] - want).abs() <= 1e-10, "{part} k={k}: {} vs {want}", next.current[0][j]);
            }
        }
        assert!((ap * am - q.c_coef).norm() < 1e-12);
    }

    #[test]
    fn fourier_modes_follow_the_symbol_quadratic() {
        let mono = SchemeConfig::ime(Order::Two).with_cfl(10.0).with_dissipation(DissipationMode::Monolithic);
        let pc4 = SchemeConfig::ime(Order::Four).with_corrections(2, 1.5);
        let pc2 = SchemeConfig::ime(Order::Two).with_cfl(3.0).with_corrections(3, 0.7);
        let eme4 = SchemeConfig::eme(Order::Four).with_cfl(0.8).with_corrections(1, 0.9);
        for cfg in [mono, pc4, pc2, eme4] {
            for k in [0, 1, 5, 12] {
                check_mode(cfg, k);
            }
        }
    }

    #[test]
    fn time_reversal_without_dissipation() {
        for cfg in [SchemeConfig::eme(Order::Four), SchemeConfig::ime(Order::Two), SchemeConfig::ime(Order::Four)] {
            let cfg = cfg.with_dissipation(DissipationMode::None);
            let s = PeriodicStepper::new(40, 0.05, cfg).unwrap();
            let u0 = random(40, 4);
            let mut st = s.first_step(&u0, &random(40, 5)).unwrap();
            let u1 = st.current[0].clone();
            for _ in 0..50 {
                st = s.advance(&st).unwrap();
            }
            let mut back = FieldState {
                step: 0,
                dt: s.dt(),
                current: st.previous.clone(),
                previous: st.current.clone(),
            };
            for _ in 0..50 {
                back = s.advance(&back).unwrap();
            }
            let scale = u0.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            for j in 0..40 {
                assert!((back.current[0][j] - u0[j]).abs() <= 1e-9 * scale);
                assert!((back.previous[0][j] - u1[j]).abs() <= 1e-9 * scale);
            }
        }
    }
}
