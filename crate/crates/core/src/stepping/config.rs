use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{OversetGrid1D, Side};
use crate::operators::{dissipation_coefficient, sigma_for, DissipationParams, Order};
use crate::symbols::{SymbolConfig, Variant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TimeMode {
    Explicit,
    Implicit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DissipationMode {
    None,
    Monolithic,
    PredictorCorrector,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SchemeCase {
    Eme,
    Ime,
    Spie,
}

impl SchemeCase {
    pub fn name(self, order: Order) -> String {
        let s = match self {
            SchemeCase::Eme => "EME",
            SchemeCase::Ime => "IME",
            SchemeCase::Spie => "SPIE",
        };
        format!("{s}{}", order.p())
    }

    /// Parses names like `EME2` or `SPIE4`.
    pub fn parse(name: &str) -> Result<(SchemeCase, Order)> {
        let upper = name.to_ascii_uppercase();
        let (case, rest) = if let Some(r) = upper.strip_prefix("SPIE") {
            (SchemeCase::Spie, r)
        } else if let Some(r) = upper.strip_prefix("EME") {
            (SchemeCase::Eme, r)
        } else if let Some(r) = upper.strip_prefix("IME") {
            (SchemeCase::Ime, r)
        } else {
            return Err(Error::InvalidArgument(format!("unknown scheme {name:?}")));
        };
        let p: usize = rest
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("scheme {name:?} needs an order suffix 2 or 4")))?;
        Ok((case, Order::from_p(p)?))
    }
}

/// Scheme parameters shared by the time steppers and the matrix analysis.
///
/// `modes` holds the time mode of the left and right grid; single-grid runs
/// use the first entry. The dissipation strength is `gamma * nu_p` with
/// `nu_p = s_f / (2^{p+1} lambda_g)` evaluated per grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchemeConfig {
    pub order: Order,
    pub alpha2: f64,
    pub alpha4: f64,
    pub modes: [TimeMode; 2],
    pub dissipation: DissipationMode,
    pub gamma: f64,
    pub n_u: u32,
    pub s_f: f64,
    pub c: f64,
    pub cfl: f64,
}

impl SchemeConfig {
    pub fn new(case: SchemeCase, order: Order) -> Self {
        let (modes, cfl, n_u) = match (case, order) {
            (SchemeCase::Eme, _) => ([TimeMode::Explicit; 2], 0.9, 1),
            (SchemeCase::Ime, Order::Two) => ([TimeMode::Implicit; 2], 4.0, 4),
            (SchemeCase::Ime, Order::Four) => ([TimeMode::Implicit; 2], 5.0, 5),
            (SchemeCase::Spie, _) => ([TimeMode::Explicit, TimeMode::Implicit], 0.9, 1),
        };
        SchemeConfig {
            order,
            alpha2: 0.25,
            alpha4: 1.0 / 12.0,
            modes,
            dissipation: DissipationMode::PredictorCorrector,
            gamma: 1.0,
            n_u,
            s_f: 0.9,
            c: 1.0,
            cfl,
        }
    }

    pub fn eme(order: Order) -> Self {
        Self::new(SchemeCase::Eme, order)
    }

    pub fn ime(order: Order) -> Self {
        Self::new(SchemeCase::Ime, order)
    }

    pub fn spie(order: Order) -> Self {
        Self::new(SchemeCase::Spie, order)
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_dissipation(mut self, mode: DissipationMode) -> Self {
        self.dissipation = mode;
        self
    }

    pub fn with_corrections(mut self, n_u: u32, s_f: f64) -> Self {
        self.n_u = n_u;
        self.s_f = s_f;
        self
    }

    pub fn with_cfl(mut self, cfl: f64) -> Self {
        self.cfl = cfl;
        self
    }

    pub fn with_modes(mut self, left: TimeMode, right: TimeMode) -> Self {
        self.modes = [left, right];
        self
    }

    pub fn beta2(&self) -> f64 {
        1.0 - 2.0 * self.alpha2
    }

    pub fn beta4(&self) -> f64 {
        self.alpha2 - 2.0 * self.alpha4 - 1.0 / 12.0
    }

    pub fn mode(&self, side: Side) -> TimeMode {
        self.modes[side.index()]
    }

    /// `(alpha2, alpha4)` used on a grid; both vanish on explicit grids.
    pub fn weights(&self, mode: TimeMode) -> (f64, f64) {
        match (mode, self.order) {
            (TimeMode::Explicit, _) => (0.0, 0.0),
            (TimeMode::Implicit, Order::Two) => (self.alpha2, 0.0),
            (TimeMode::Implicit, Order::Four) => (self.alpha2, self.alpha4),
        }
    }

    pub fn all_explicit(&self) -> bool {
        self.modes.iter().all(|m| *m == TimeMode::Explicit)
    }

    pub fn dissipation_active(&self) -> bool {
        self.dissipation != DissipationMode::None && self.gamma > 0.0 && self.s_f > 0.0
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if !(self.c > 0.0) {
            return bad(format!("wave speed must be positive, got {}", self.c));
        }
        if !(self.cfl > 0.0) {
            return bad(format!("CFL number must be positive, got {}", self.cfl));
        }
        if !(0.0..=1.0).contains(&self.gamma) {
            return bad(format!("gamma must lie in [0, 1], got {}", self.gamma));
        }
        if !self.alpha2.is_finite() || !self.alpha4.is_finite() || self.alpha2 < 0.0 || self.alpha4 < 0.0 {
            return bad(format!("implicit weights must be nonnegative, got ({}, {})", self.alpha2, self.alpha4));
        }
        if self.dissipation != DissipationMode::None {
            let sigma = sigma_for(self.n_u.max(1)) as f64;
            if !(self.s_f >= 0.0) || self.s_f >= sigma {
                return Err(Error::BoundViolation { s_f: self.s_f, sigma });
            }
        }
        if self.dissipation == DissipationMode::Monolithic && self.modes.contains(&TimeMode::Explicit) {
            return bad("monolithic dissipation needs every grid to be implicit".into());
        }
        Ok(())
    }

    /// Time step for a set of grid spacings with their modes: the CFL target
    /// is met on the finest explicit grid, or on the finest grid if all are implicit.
    pub fn time_step_for(&self, spacings: &[(f64, TimeMode)]) -> f64 {
        let explicit = spacings
            .iter()
            .filter(|(_, m)| *m == TimeMode::Explicit)
            .map(|(h, _)| *h)
            .fold(f64::INFINITY, f64::min);
        let h_min = if explicit.is_finite() {
            explicit
        } else {
            spacings.iter().map(|(h, _)| *h).fold(f64::INFINITY, f64::min)
        };
        self.cfl * h_min / self.c
    }

    pub fn time_step(&self, grid: &OversetGrid1D) -> f64 {
        self.time_step_for(&[
            (grid.left.h, self.modes[0]),
            (grid.right.h, self.modes[1]),
        ])
    }

    /// Dissipation parameters on a grid of spacing `h` at time step `dt`.
    pub fn dissipation_params(&self, h: f64, dt: f64) -> Result<DissipationParams> {
        if self.dissipation == DissipationMode::None || self.s_f == 0.0 {
            return Ok(DissipationParams::none());
        }
        let lambda = self.c * dt / h;
        Ok(dissipation_coefficient(self.order, self.n_u.max(1), self.s_f, &[lambda])?.with_gamma(self.gamma))
    }

    /// Fourier-analysis view of the scheme used on the first grid, at dissipation `nu_p`.
    pub fn symbol_config(&self, nu_p: f64) -> SymbolConfig {
        let (a2, a4) = self.weights(self.modes[0]);
        let base = SymbolConfig::ime(self.order, a2, a4);
        let variant = match self.dissipation {
            DissipationMode::None => Variant::Plain,
            DissipationMode::Monolithic => Variant::Monolithic { nu_p },
            DissipationMode::PredictorCorrector => Variant::PredictorCorrector { nu_p, n_u: self.n_u },
        };
        base.with_variant(variant)
    }
}
