use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::grid::{OversetGrid1D, Side};
use crate::matstab::compress::{compress, ThreeLevelUpdate};
use crate::matstab::stages::assemble_stages;
use crate::stepping::{FieldState, OversetStepper, SchemeConfig};

/// Seed used when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 20_240_917;

fn to_levels(grid: &OversetGrid1D, u: &DVector<f64>) -> Vec<Vec<f64>> {
    [Side::Left, Side::Right]
        .iter()
        .map(|&s| {
            let off = grid.offset(s);
            u.as_slice()[off..off + grid.component(s).len()].to_vec()
        })
        .collect()
}

fn from_levels(levels: &[Vec<f64>]) -> DVector<f64> {
    DVector::from_iterator(levels.iter().map(Vec::len).sum(), levels.iter().flatten().copied())
}

/// Runs the time stepper and the compressed recurrence side by side from
/// random active data (uniform on [-1, 1]) and returns the largest
/// deviation of the active values, relative to their size at that step.
pub fn verify_compression(grid: &OversetGrid1D, config: &SchemeConfig, n_steps: usize, seed: u64) -> Result<f64> {
    let stages = assemble_stages(grid, config)?;
    let update = compress(&stages, stages.n_u)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || DVector::from_fn(update.dim(), |_, _| rng.random_range(-1.0..=1.0));
    let v0 = draw();
    let v1 = draw();
    compare(grid, config, &update, stages.dt, v0, v1, n_steps)
}

/// Side-by-side comparison from given active data at two levels.
pub fn compare(
    grid: &OversetGrid1D,
    config: &SchemeConfig,
    update: &ThreeLevelUpdate,
    dt: f64,
    v0: DVector<f64>,
    v1: DVector<f64>,
    n_steps: usize,
) -> Result<f64> {
    let stepper = OversetStepper::with_dt(grid, *config, dt)?;
    let mut state = FieldState {
        step: 1,
        dt,
        current: to_levels(grid, &update.extend(&v1)),
        previous: to_levels(grid, &update.extend(&v0)),
    };
    let (mut vm, mut v) = (v0, v1);
    let mut worst: f64 = 0.0;
    for _ in 0..n_steps {
        state = stepper.advance(&state)?;
        let next = update.step(&v, &vm);
        let stepped = update.restrict(&from_levels(&state.current));
        let scale = next.amax();
        if scale > 0.0 {
            worst = worst.max((&stepped - &next).amax() / scale);
        } else {
            worst = worst.max(stepped.amax());
        }
        vm = v;
        v = next;
    }
    Ok(worst)
}
