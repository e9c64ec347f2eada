use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{build_overset, SweepPlan};
use crate::matstab::compress::compress;
use crate::matstab::spectrum::{spectrum, SpectrumReport, TOL_A};
use crate::matstab::stages::assemble_stages;
use crate::matstab::verify::{verify_compression, DEFAULT_SEED};
use crate::stepping::{SchemeConfig, TimeMode};

/// One (delta, gamma) cell of a sweep. Cells whose analysis failed carry the
/// message in `error`, are reported unstable and have no eigenvalue count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub scheme: String,
    pub p: usize,
    pub delta: f64,
    pub gamma: f64,
    pub n_u: u32,
    pub s_f: f64,
    pub stable: bool,
    pub max_modulus: f64,
    pub unstable_count: usize,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaCount {
    pub gamma: f64,
    pub n_unstable_grids: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpotCheck {
    pub delta: f64,
    pub gamma: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub results: Vec<SweepResult>,
    pub counts: Vec<GammaCount>,
    pub spot_checks: Vec<SpotCheck>,
    /// Deltas where full dissipation leaves a larger growth factor than none.
    pub monotonicity_violations: Vec<f64>,
}

impl SweepSummary {
    pub fn count_at(&self, gamma: f64) -> Option<usize> {
        self.counts
            .iter()
            .find(|c| (c.gamma - gamma).abs() < 1e-12)
            .map(|c| c.n_unstable_grids)
    }

    pub fn max_spot_deviation(&self) -> f64 {
        self.spot_checks.iter().map(|s| s.deviation).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    pub n_right: usize,
    pub tol_a: f64,
    /// Worker threads; `None` uses every available core.
    pub jobs: Option<usize>,
    /// Cells re-checked against direct time stepping.
    pub spot_checks: usize,
    pub seed: u64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            n_right: 10,
            tol_a: TOL_A,
            jobs: None,
            spot_checks: 5,
            seed: DEFAULT_SEED,
        }
    }
}

/// `EMEp`, `IMEp` or `SPIEp` from the grid modes.
pub fn scheme_tag(config: &SchemeConfig) -> String {
    let p = config.order.p();
    match config.modes {
        [TimeMode::Explicit, TimeMode::Explicit] => format!("EME{p}"),
        [TimeMode::Implicit, TimeMode::Implicit] => format!("IME{p}"),
        _ => format!("SPIE{p}"),
    }
}

/// Spectrum of the compressed update on one grid.
pub fn cell_spectrum(delta: f64, gamma: f64, config: &SchemeConfig, n_right: usize, tol_a: f64) -> Result<SpectrumReport> {
    let grid = build_overset(delta, n_right, config.order)?;
    let cfg = config.with_gamma(gamma);
    let stages = assemble_stages(&grid, &cfg)?;
    let update = compress(&stages, stages.n_u)?;
    spectrum(&update, tol_a)
}

fn run_cell(delta: f64, gamma: f64, config: &SchemeConfig, opts: &SweepOptions) -> SweepResult {
    let mut r = SweepResult {
        scheme: scheme_tag(config),
        p: config.order.p(),
        delta,
        gamma,
        n_u: config.n_u,
        s_f: config.s_f,
        stable: false,
        max_modulus: f64::NAN,
        unstable_count: 0,
        error: None,
    };
    match cell_spectrum(delta, gamma, config, opts.n_right, opts.tol_a) {
        Ok(s) => {
            r.stable = s.stable();
            r.max_modulus = s.max_modulus;
            r.unstable_count = s.unstable_count;
        }
        Err(e) => r.error = Some(e.to_string()),
    }
    r
}

/// Analyses every (delta, gamma) cell of `plan` and counts unstable grids per gamma.
pub fn run_sweep(plan: &SweepPlan, config: &SchemeConfig, opts: &SweepOptions) -> Result<SweepSummary> {
    plan.validate()?;
    config.with_gamma(1.0).validate()?;
    let deltas = plan.deltas();
    let cells: Vec<(f64, f64)> = plan
        .gamma_values
        .iter()
        .flat_map(|&g| deltas.iter().map(move |&d| (d, g)))
        .collect();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = opts.jobs {
        builder = builder.num_threads(j.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start worker pool: {e}")))?;
    let results: Vec<SweepResult> = pool.install(|| cells.par_iter().map(|&(d, g)| run_cell(d, g, config, opts)).collect());

    let counts = plan
        .gamma_values
        .iter()
        .map(|&g| GammaCount {
            gamma: g,
            n_unstable_grids: results.iter().filter(|r| r.gamma == g && !r.stable).count(),
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let picks = sample(&mut rng, cells.len(), opts.spot_checks.min(cells.len())).into_vec();
    let spot_checks = pool.install(|| {
        picks
            .par_iter()
            .map(|&i| {
                let (delta, gamma) = cells[i];
                let deviation = build_overset(delta, opts.n_right, config.order)
                    .and_then(|g| verify_compression(&g, &config.with_gamma(gamma), 20, opts.seed))
                    .unwrap_or(f64::NAN);
                SpotCheck { delta, gamma, deviation }
            })
            .collect()
    });

    let at = |g: f64| -> Vec<&SweepResult> { results.iter().filter(|r| r.gamma == g).collect() };
    let mut monotonicity_violations = Vec::new();
    if plan.gamma_values.contains(&0.0) && plan.gamma_values.contains(&1.0) {
        for (lo, hi) in at(0.0).into_iter().zip(at(1.0)) {
            if hi.max_modulus > lo.max_modulus.max(1.0) + opts.tol_a {
                monotonicity_violations.push(lo.delta);
            }
        }
    }
    Ok(SweepSummary {
        results,
        counts,
        spot_checks,
        monotonicity_violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::Order;

    #[test]
    fn tags() {
        assert_eq!(scheme_tag(&SchemeConfig::spie(Order::Four)), "SPIE4");
        assert_eq!(scheme_tag(&SchemeConfig::ime(Order::Two)), "IME2");
        assert_eq!(scheme_tag(&SchemeConfig::eme(Order::Two)), "EME2");
    }

    #[test]
    fn small_sweep_is_consistent_and_deterministic() {
        let plan = SweepPlan::new(0.5, 1.5, 5, vec![0.0, 1.0]).unwrap();
        let cfg = SchemeConfig::eme(Order::Two);
        let opts = SweepOptions { jobs: Some(2), ..Default::default() };
        let a = run_sweep(&plan, &cfg, &opts).unwrap();
        assert_eq!(a.results.len(), 10);
        for r in &a.results {
            assert!(r.error.is_none());
            assert_eq!(r.stable, r.unstable_count == 0);
        }
        assert_eq!(a.count_at(1.0), Some(0));
        assert!(a.max_spot_deviation() <= 1e-11);
        let b = run_sweep(&plan, &cfg, &SweepOptions { jobs: Some(1), ..opts }).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn invalid_plan_is_rejected() {
        let plan = SweepPlan {
            delta_min: 2.0,
            delta_max: 1.0,
            n_delta: 3,
            gamma_values: vec![0.0],
        };
        assert!(run_sweep(&plan, &SchemeConfig::eme(Order::Two), &SweepOptions::default()).is_err());
    }
}
