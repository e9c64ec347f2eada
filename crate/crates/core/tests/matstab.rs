use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wavestab::grid::{build_overset, Side};
use wavestab::matstab::{assemble_stages, compress, spectrum, verify_compression, TOL_A};
use wavestab::stepping::{DissipationMode, FieldState, OversetStepper, SchemeConfig, TimeMode};
use wavestab::Order;

#[test]
fn interior_rows_reduce_to_leapfrog() {
    let g = build_overset(1.0, 10, Order::Two).unwrap();
    let cfg = SchemeConfig::eme(Order::Two).with_gamma(0.0);
    let st = assemble_stages(&g, &cfg).unwrap();
    let u = compress(&st, st.n_u).unwrap();
    let lam2 = (st.dt / g.left.h).powi(2);
    let pos = |i: usize| u.active.iter().position(|&a| a == i);
    let mut checked = 0;
    for side in [Side::Left, Side::Right] {
        let c = g.component(side);
        for j in c.active_indices().filter(|&j| c.is_active(j - 1) && c.is_active(j + 1)) {
            let row = pos(g.global(side, j)).unwrap();
            for k in 0..u.dim() {
                let col = u.active[k];
                let want = if col == g.global(side, j) {
                    2.0 - 2.0 * lam2
                } else if col == g.global(side, j - 1) || col == g.global(side, j + 1) {
                    lam2
                } else {
                    0.0
                };
                assert!((u.b1[(row, k)] - want).abs() < 1e-13);
                assert_eq!(u.b2[(row, k)], if k == row { -1.0 } else { 0.0 });
            }
            checked += 1;
        }
    }
    assert!(checked > 10);
}

#[test]
fn compression_matches_stepping_across_schemes() {
    let cases = [
        (0.35, SchemeConfig::spie(Order::Four).with_corrections(2, 1.9).with_gamma(0.6)),
        (1.7, SchemeConfig::ime(Order::Two).with_gamma(0.2)),
        (0.9, SchemeConfig::eme(Order::Four).with_gamma(1.0)),
        (1.2, SchemeConfig::spie(Order::Two).with_modes(TimeMode::Implicit, TimeMode::Explicit)),
        (
            0.6,
            SchemeConfig::ime(Order::Four)
                .with_dissipation(DissipationMode::Monolithic)
                .with_gamma(0.5),
        ),
    ];
    for (i, (delta, cfg)) in cases.into_iter().enumerate() {
        let g = build_overset(delta, 10, cfg.order).unwrap();
        let dev = verify_compression(&g, &cfg, 20, 100 + i as u64).unwrap();
        assert!(dev <= 1e-11, "case {i}: deviation {dev:e}");
    }
}

#[test]
fn spectra_pass_the_quadratic_residual_check() {
    for (delta, cfg) in [
        (0.25, SchemeConfig::ime(Order::Four)),
        (2.0, SchemeConfig::spie(Order::Four)),
        (1.0, SchemeConfig::eme(Order::Two)),
    ] {
        let g = build_overset(delta, 10, cfg.order).unwrap();
        let st = assemble_stages(&g, &cfg).unwrap();
        let r = spectrum(&compress(&st, st.n_u).unwrap(), TOL_A).unwrap();
        assert!(r.max_residual <= 1e-8);
        assert_eq!(r.eigenvalues.len(), 2 * st.active.len());
        assert_eq!(r.unstable_count, r.unstable().count());
    }
}

#[test]
fn stepping_grows_at_the_predicted_rate() {
    let g = build_overset(1.895, 10, Order::Two).unwrap();
    let cfg = SchemeConfig::eme(Order::Two).with_gamma(0.0);
    let st = assemble_stages(&g, &cfg).unwrap();
    let update = compress(&st, st.n_u).unwrap();
    let rate = spectrum(&update, TOL_A).unwrap().max_modulus;
    assert!(rate > 1.01);

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut draw = || DVector::from_fn(update.dim(), |_, _| rng.random_range(-1.0..1.0));
    let split = |u: DVector<f64>| -> Vec<Vec<f64>> {
        let n = g.left.len();
        vec![u.as_slice()[..n].to_vec(), u.as_slice()[n..].to_vec()]
    };
    let s = OversetStepper::with_dt(&g, cfg, st.dt).unwrap();
    let mut state = FieldState {
        step: 1,
        dt: st.dt,
        current: split(update.extend(&draw())),
        previous: split(update.extend(&draw())),
    };
    let mut norms = Vec::new();
    for _ in 0..800 {
        state = s.advance(&state).unwrap();
        norms.push(state.max_norm());
    }
    let observed = (norms[799] / norms[499]).powf(1.0 / 300.0);
    assert!((observed - rate).abs() < 2e-3, "observed {observed}, predicted {rate}");
}
