//! Von Neumann analysis: Fourier symbols of the discrete operators and the
//! amplification quadratics `a^2 - 2 b a + c = 0` of every scheme variant,
//! plus the stability-region predicates and the GKS interface probe.
//!
//! Quantities like `1 - b` and `1 + b` are formed from their own closed forms
//! rather than by subtraction, so roots that sit on the unit circle are
//! reported on it to rounding accuracy even for very large `z`.

use std::f64::consts::PI;

use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use crate::operators::Order;

pub type C64 = Complex<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Variant {
    /// IME (or EME when the weights vanish) without dissipation.
    Plain,
    /// Dissipation folded into the implicit system.
    Monolithic { nu_p: f64 },
    /// `n_u` explicit dissipation corrections after the predictor.
    PredictorCorrector { nu_p: f64, n_u: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymbolConfig {
    pub order: Order,
    pub alpha2: f64,
    pub alpha4: f64,
    pub variant: Variant,
}

impl SymbolConfig {
    pub fn ime(order: Order, alpha2: f64, alpha4: f64) -> Self {
        SymbolConfig {
            order,
            alpha2,
            alpha4: if order == Order::Two { 0.0 } else { alpha4 },
            variant: Variant::Plain,
        }
    }

    pub fn with_variant(mut self, variant: Variant) -> Self {
        self.variant = variant;
        self
    }

    pub fn beta2(&self) -> f64 {
        1.0 - 2.0 * self.alpha2
    }

    pub fn beta4(&self) -> f64 {
        self.alpha2 - 2.0 * self.alpha4 - 1.0 / 12.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolPoint {
    pub k: Vec<f64>,
    pub h: Vec<f64>,
    pub c: f64,
    pub dt: f64,
    /// Minus the symbol of `L_{2,h}`.
    pub lambda2_sq: f64,
    /// Minus the symbol of `L_{4,h}`.
    pub lambda4_sq: f64,
    /// Symbol of `Q_p`.
    pub q_p: f64,
    pub lambda_hat: f64,
    pub z: f64,
}

pub fn fourier_symbols(k: &[f64], h: &[f64], c: f64, dt: f64, cfg: &SymbolConfig) -> SymbolPoint {
    assert_eq!(k.len(), h.len(), "one wavenumber per axis");
    let p = cfg.order.p() as i32;
    let mut l2 = 0.0;
    let mut l4 = 0.0;
    let mut q = 0.0;
    for (&kd, &hd) in k.iter().zip(h) {
        let s = 4.0 * (0.5 * kd * hd).sin().powi(2);
        let sd = s / (hd * hd);
        l2 += sd;
        l4 += sd * (1.0 + s / 12.0);
        q += s.powi(p / 2 + 1) / hd;
    }
    let lambda2_sq = c * c * l2;
    let lambda4_sq = c * c * l4;
    let z = dt * dt;
    let lambda_hat = match cfg.order {
        Order::Two => cfg.alpha2 * lambda2_sq * z,
        Order::Four => cfg.alpha2 * lambda4_sq * z + cfg.alpha4 * lambda2_sq * lambda2_sq * z * z,
    };
    SymbolPoint {
        k: k.to_vec(),
        h: h.to_vec(),
        c,
        dt,
        lambda2_sq,
        lambda4_sq,
        q_p: c * q,
        lambda_hat,
        z,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmpQuad {
    pub b: f64,
    pub c_coef: f64,
    pub roots: [C64; 2],
    pub variant: Variant,
}

impl AmpQuad {
    pub fn max_modulus(&self) -> f64 {
        self.roots[0].norm().max(self.roots[1].norm())
    }
}

/// Predictor pieces: denominator `D = 1 + Lambda`, numerator `N`, and the
/// cancellation-free `D - N`, `D + N`.
struct Predictor {
    d: f64,
    n: f64,
    d_minus_n: f64,
    d_plus_n: f64,
}

fn predictor(sp: &SymbolPoint, cfg: &SymbolConfig) -> Predictor {
    let (lp, m) = match cfg.order {
        Order::Two => (sp.lambda2_sq * sp.z, 0.0),
        Order::Four => (sp.lambda4_sq * sp.z, (sp.lambda2_sq * sp.z).powi(2)),
    };
    let (a2, a4) = (cfg.alpha2, cfg.alpha4);
    let (b2, b4) = match cfg.order {
        Order::Two => (cfg.beta2(), 0.0),
        Order::Four => (cfg.beta2(), cfg.beta4()),
    };
    let (dm_m, dp_m) = match cfg.order {
        Order::Two => (0.0, 0.0),
        Order::Four => (0.5 * a2 - 1.0 / 24.0, 2.0 * a4 - 0.5 * a2 + 1.0 / 24.0),
    };
    Predictor {
        d: 1.0 + a2 * lp + a4 * m,
        n: 1.0 - 0.5 * b2 * lp - 0.5 * b4 * m,
        d_minus_n: 0.5 * lp + dm_m * m,
        d_plus_n: 2.0 + (2.0 * a2 - 0.5) * lp + dp_m * m,
    }
}

fn roots(b: f64, c: f64, disc: f64) -> [C64; 2] {
    if disc < 0.0 {
        let s = (-disc).sqrt();
        return [C64::new(b, s), C64::new(b, -s)];
    }
    let s = disc.sqrt();
    let big = if b >= 0.0 { b + s } else { b - s };
    if big == 0.0 {
        return [C64::new(0.0, 0.0); 2];
    }
    [C64::new(big, 0.0), C64::new(c / big, 0.0)]
}

pub fn amplification(sp: &SymbolPoint, cfg: &SymbolConfig) -> AmpQuad {
    let pr = predictor(sp, cfg);
    let (b, c, disc) = match cfg.variant {
        Variant::Plain => {
            let b = pr.n / pr.d;
            let disc = -(pr.d_minus_n / pr.d) * (pr.d_plus_n / pr.d);
            (b, 1.0, disc)
        }
        Variant::Monolithic { nu_p } => {
            let s = 0.5 * nu_p * sp.dt * sp.q_p;
            let den = pr.d + s;
            let b = pr.n / den;
            let c = (pr.d - s) / den;
            let disc = (s * s - pr.d_minus_n * pr.d_plus_n) / (den * den);
            (b, c, disc)
        }
        Variant::PredictorCorrector { nu_p, n_u } => {
            let r = 1.0 - 0.5 * nu_p * sp.dt * sp.q_p;
            let rn = r.powi(n_u as i32);
            let bp = pr.n / pr.d;
            let b = rn * bp;
            let c = 2.0 * rn - 1.0;
            let disc = (1.0 - rn).powi(2) - rn * rn * (pr.d_minus_n / pr.d) * (pr.d_plus_n / pr.d);
            (b, c, disc)
        }
    };
    AmpQuad {
        b,
        c_coef: c,
        roots: roots(b, c, disc),
        variant: cfg.variant,
    }
}

/// Slack for boundary points of the region whose defining expressions round.
const REGION_EPS: f64 = 1e-14;

/// Unconditional-stability region of the plain IME schemes.
pub fn stability_region(order: Order, alpha2: f64, alpha4: f64) -> bool {
    match order {
        Order::Two => alpha2 >= 0.25,
        Order::Four => {
            if alpha2 < 1.0 / 12.0 - REGION_EPS {
                return false;
            }
            let base = alpha2 / 4.0 - 1.0 / 48.0;
            if alpha2 >= 0.25 {
                alpha4 >= base - REGION_EPS
            } else {
                alpha4 >= base + 8.0 / 9.0 * (0.25 - alpha2).powi(2) - REGION_EPS
            }
        }
    }
}

/// `n` wavenumbers `theta = k h` covering (-pi, pi], including 0 and pi for even `n`.
pub fn brillouin_grid(n: usize) -> Vec<f64> {
    (0..n).map(|j| -PI + 2.0 * PI * (j + 1) as f64 / n as f64).collect()
}

pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.log10(), hi.log10());
    (0..n)
        .map(|i| 10f64.powf(a + (b - a) * i as f64 / (n - 1) as f64))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnconditionalReport {
    pub max_modulus: f64,
    pub argmax_theta: f64,
    pub argmax_z: f64,
    /// Largest `|c|` over nonzero wavenumbers.
    pub max_abs_c: f64,
    pub region_holds: bool,
    /// `max_modulus <= 1 + tol`.
    pub bounded: bool,
    pub tol: f64,
}

impl UnconditionalReport {
    /// The region predicate and the sampled bound agree where the predicate claims stability.
    pub fn consistent(&self) -> bool {
        !self.region_holds || self.bounded
    }
}

/// Samples `|a|` over `z = dt^2` and `theta = k h` on a 1D grid with `h = c = 1`.
pub fn verify_unconditional(cfg: &SymbolConfig, z_grid: &[f64], theta_grid: &[f64], tol: f64) -> UnconditionalReport {
    let mut rep = UnconditionalReport {
        max_modulus: 0.0,
        argmax_theta: f64::NAN,
        argmax_z: f64::NAN,
        max_abs_c: 0.0,
        region_holds: stability_region(cfg.order, cfg.alpha2, cfg.alpha4),
        bounded: true,
        tol,
    };
    for &z in z_grid {
        for &theta in theta_grid {
            let sp = fourier_symbols(&[theta], &[1.0], 1.0, z.sqrt(), cfg);
            let q = amplification(&sp, cfg);
            let m = q.max_modulus();
            if m > rep.max_modulus || rep.argmax_theta.is_nan() {
                rep.max_modulus = m;
                rep.argmax_theta = theta;
                rep.argmax_z = z;
            }
            if theta != 0.0 {
                rep.max_abs_c = rep.max_abs_c.max(q.c_coef.abs());
            }
        }
    }
    rep.bounded = rep.max_modulus <= 1.0 + tol;
    rep
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceRow {
    pub kh: f64,
    pub z: f64,
    pub abs_a_plus: f64,
    pub abs_a_minus: f64,
}

/// `|a|` over a (kh, z) grid in 1D with `h = c = 1`.
pub fn amplitude_surface(cfg: &SymbolConfig, theta_grid: &[f64], z_grid: &[f64]) -> Vec<SurfaceRow> {
    let mut rows = Vec::with_capacity(theta_grid.len() * z_grid.len());
    for &z in z_grid {
        for &theta in theta_grid {
            let q = amplification(&fourier_symbols(&[theta], &[1.0], 1.0, z.sqrt(), cfg), cfg);
            rows.push(SurfaceRow {
                kh: theta,
                z,
                abs_a_plus: q.roots[0].norm(),
                abs_a_minus: q.roots[1].norm(),
            });
        }
    }
    rows
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KappaSample {
    pub a: C64,
    pub kappa_left: [C64; 2],
    pub kappa_right: [C64; 2],
    /// `|kappa_{L+} kappa_{R+}|` with `+` the root inside the unit circle.
    pub decaying_product: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GksProbe {
    pub lambda: f64,
    pub alpha2: f64,
    pub precondition_ok: bool,
    pub theta: Vec<f64>,
    pub root_moduli: Vec<[f64; 2]>,
    /// Largest `||a| - 1|` over the theta grid.
    pub max_deviation: f64,
    pub kappa_samples: Vec<KappaSample>,
    /// Largest `|kappa_+ kappa_- - 1|` over both sides and all samples.
    pub max_kappa_product_error: f64,
    pub max_decaying_product: f64,
}

impl GksProbe {
    pub fn roots_on_unit_circle(&self, tol: f64) -> bool {
        self.max_deviation <= tol
    }

    pub fn no_interface_mode(&self) -> bool {
        self.max_decaying_product < 1.0
    }
}

fn kappa_roots(b: C64) -> [C64; 2] {
    let s = (b * b - 1.0).sqrt();
    let k1 = b + s;
    let k2 = b - s;
    // keep the larger root exact and recover the other from the unit product
    if k1.norm() >= k2.norm() {
        [1.0 / k1, k1]
    } else {
        [1.0 / k2, k2]
    }
}

/// Lemma check for the scheme `a - 2 + 1/a = lambda^2 (kappa - 2 + 1/kappa)(alpha2 a + beta2 + alpha2/a)`
/// with `kappa = e^{i theta}`, followed by a sample of `|a| > 1` for the
/// EME/IME interface with the explicit scheme on the left.
pub fn gks_check(lambda: f64, alpha2: f64, n_theta: usize) -> GksProbe {
    let precondition_ok = (lambda > 0.0 && lambda < 1.0 && alpha2 >= 0.0) || (lambda > 0.0 && alpha2 >= 0.25);
    let cfg = SymbolConfig::ime(Order::Two, alpha2, 0.0);
    let theta: Vec<f64> = (1..=n_theta)
        .map(|j| 2.0 * PI * j as f64 / (n_theta + 1) as f64)
        .collect();
    let mut root_moduli = Vec::with_capacity(n_theta);
    let mut max_deviation: f64 = 0.0;
    for &t in &theta {
        // h = c = 1 and dt = lambda
        let q = amplification(&fourier_symbols(&[t], &[1.0], 1.0, lambda, &cfg), &cfg);
        let m = [q.roots[0].norm(), q.roots[1].norm()];
        max_deviation = max_deviation.max((m[0] - 1.0).abs()).max((m[1] - 1.0).abs());
        root_moduli.push(m);
    }

    let beta2 = 1.0 - 2.0 * alpha2;
    let l2 = lambda * lambda;
    let mut kappa_samples = Vec::new();
    let mut max_kappa_product_error: f64 = 0.0;
    let mut max_decaying_product: f64 = 0.0;
    for &r in &[1.001, 1.01, 1.1, 1.5, 2.0, 4.0] {
        for j in 0..32 {
            let a = C64::from_polar(r, 2.0 * PI * (j as f64 + 0.5) / 32.0);
            let w = a - 2.0 + 1.0 / a;
            let b_left = 1.0 + w / (2.0 * l2);
            let b_right = 1.0 + w / (2.0 * l2 * (alpha2 * a + beta2 + alpha2 / a));
            let kl = kappa_roots(b_left);
            let kr = kappa_roots(b_right);
            for k in [kl, kr] {
                max_kappa_product_error = max_kappa_product_error.max((k[0] * k[1] - 1.0).norm());
            }
            let decaying_product = (kl[0] * kr[0]).norm();
            max_decaying_product = max_decaying_product.max(decaying_product);
            kappa_samples.push(KappaSample {
                a,
                kappa_left: kl,
                kappa_right: kr,
                decaying_product,
            });
        }
    }
    GksProbe {
        lambda,
        alpha2,
        precondition_ok,
        theta,
        root_moduli,
        max_deviation,
        kappa_samples,
        max_kappa_product_error,
        max_decaying_product,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{apply_l, apply_q, GridFunction};
    use proptest::prelude::*;

    fn ime2() -> SymbolConfig {
        SymbolConfig::ime(Order::Two, 0.25, 0.0)
    }

    #[test]
    fn symbol_values() {
        let cfg = SymbolConfig::ime(Order::Two, 0.25, 1.0 / 12.0);
        let sp = fourier_symbols(&[0.0], &[1.0], 1.0, 1.0, &cfg);
        assert_eq!((sp.lambda2_sq, sp.lambda4_sq, sp.q_p), (0.0, 0.0, 0.0));
        let sp = fourier_symbols(&[PI], &[1.0], 1.0, 1.0, &cfg);
        assert!((sp.lambda2_sq - 4.0).abs() < 1e-14);
        assert!((sp.lambda4_sq - 16.0 / 3.0).abs() < 1e-14);
        assert!((sp.q_p - 16.0).abs() < 1e-13);
        let sp = fourier_symbols(&[PI, PI], &[1.0, 1.0], 1.0, 1.0, &cfg);
        assert!((sp.lambda2_sq - 8.0).abs() < 1e-14);
    }

    #[test]
    fn ime2_quarter_weight_example() {
        // lambda2^2 z = 4 at theta = pi, dt = 1
        let sp = fourier_symbols(&[PI], &[1.0], 1.0, 1.0, &ime2());
        let q = amplification(&sp, &ime2());
        assert!(q.b.abs() < 1e-15);
        for r in q.roots {
            assert!((r.norm() - 1.0).abs() < 1e-15);
            assert!(r.re.abs() < 1e-15);
        }
    }

    #[test]
    fn zero_mode_double_root() {
        let cfg = SymbolConfig::ime(Order::Four, 0.25, 1.0 / 12.0)
            .with_variant(Variant::PredictorCorrector { nu_p: 0.1, n_u: 3 });
        let q = amplification(&fourier_symbols(&[0.0], &[1.0], 1.0, 2.0, &cfg), &cfg);
        assert_eq!(q.b, 1.0);
        assert_eq!(q.c_coef, 1.0);
        assert_eq!(q.roots, [C64::new(1.0, 0.0); 2]);
    }

    #[test]
    fn pc_without_dissipation_is_the_predictor() {
        let base = SymbolConfig::ime(Order::Four, 0.3, 0.1);
        let pc = base.with_variant(Variant::PredictorCorrector { nu_p: 0.0, n_u: 2 });
        for t in brillouin_grid(16) {
            let a = amplification(&fourier_symbols(&[t], &[0.1], 1.0, 0.7, &base), &base);
            let b = amplification(&fourier_symbols(&[t], &[0.1], 1.0, 0.7, &pc), &pc);
            assert_eq!(a.b, b.b);
            assert_eq!(b.c_coef, 1.0);
        }
    }

    #[test]
    fn region_predicate() {
        assert!(stability_region(Order::Two, 0.25, 0.0));
        assert!(!stability_region(Order::Two, 0.2499, 0.0));
        assert!(stability_region(Order::Four, 1.0 / 12.0, 2.0 / 81.0));
        assert!(!stability_region(Order::Four, 1.0 / 12.0, 2.0 / 81.0 - 1e-9));
        assert!(stability_region(Order::Four, 0.25, 1.0 / 12.0));
        assert!(stability_region(Order::Four, 0.25, 1.0 / 24.0));
        assert!(!stability_region(Order::Four, 0.08, 1.0));
    }

    #[test]
    fn ime2_region_sampled() {
        let z = log_grid(1e-4, 1e4, 64);
        let th = brillouin_grid(256);
        let r = verify_unconditional(&ime2(), &z, &th, 1e-12);
        assert!(r.bounded && r.consistent());
        assert!((r.max_modulus - 1.0).abs() <= 1e-12);
        let r = verify_unconditional(&SymbolConfig::ime(Order::Two, 0.1, 0.0), &z, &th, 1e-12);
        assert!(!r.bounded);
        assert!(r.argmax_z > 1.0);
    }

    #[test]
    fn monolithic_schur_conditions() {
        let cfg = ime2().with_variant(Variant::Monolithic { nu_p: 0.3 });
        let r = verify_unconditional(&cfg, &log_grid(1e-4, 1e4, 64), &brillouin_grid(256), 1e-12);
        assert!(r.bounded);
        assert!(r.max_abs_c < 1.0);
    }

    #[test]
    fn symbols_match_operators() {
        let n = 16usize;
        let h = 0.125;
        for m in 0..n {
            let k = 2.0 * PI * m as f64 / (n as f64 * h);
            for order in [Order::Two, Order::Four] {
                let cfg = SymbolConfig::ime(order, 0.0, 0.0);
                let sp = fourier_symbols(&[k], &[h], 1.3, 0.1, &cfg);
                let re = GridFunction::from_fn(&[n], 3, |i| (k * h * i[0] as f64).cos());
                let im = GridFunction::from_fn(&[n], 3, |i| (k * h * i[0] as f64).sin());
                let lre = apply_l(order, &re, &[h], 1.3).unwrap();
                let lim = apply_l(order, &im, &[h], 1.3).unwrap();
                let qre = apply_q(order, &re, &[h], 1.3).unwrap();
                let qim = apply_q(order, &im, &[h], 1.3).unwrap();
                let lam = match order {
                    Order::Two => sp.lambda2_sq,
                    Order::Four => sp.lambda4_sq,
                };
                let scale_l = 1.0 + lam;
                let scale_q = 1.0 + sp.q_p;
                for i in 0..n as isize {
                    assert!((lre.get(&[i]) + lam * re.get(&[i])).abs() <= 1e-10 * scale_l);
                    assert!((lim.get(&[i]) + lam * im.get(&[i])).abs() <= 1e-10 * scale_l);
                    assert!((qre.get(&[i]) - sp.q_p * re.get(&[i])).abs() <= 1e-10 * scale_q);
                    assert!((qim.get(&[i]) - sp.q_p * im.get(&[i])).abs() <= 1e-10 * scale_q);
                }
            }
        }
    }

    #[test]
    fn gks_lemma_cases() {
        let p = gks_check(0.9, 0.0, 2000);
        assert!(p.precondition_ok && p.roots_on_unit_circle(1e-10));
        assert!(p.no_interface_mode());
        assert!(p.max_kappa_product_error < 1e-10);
        let p = gks_check(5.0, 0.25, 2000);
        assert!(p.precondition_ok && p.roots_on_unit_circle(1e-10));
        let p = gks_check(2.0, 0.1, 10);
        assert!(!p.precondition_ok);
    }

    #[test]
    fn gks_zero_angle() {
        let cfg = ime2();
        let q = amplification(&fourier_symbols(&[0.0], &[1.0], 1.0, 5.0, &cfg), &cfg);
        assert_eq!(q.b, 1.0);
        assert_eq!(q.roots[0], q.roots[1]);
        assert_eq!(kappa_roots(C64::new(1.0, 0.0)), [C64::new(1.0, 0.0); 2]);
    }

    fn any_variant() -> impl Strategy<Value = Variant> {
        prop_oneof![
            Just(Variant::Plain),
            (0.0f64..2.0).prop_map(|nu_p| Variant::Monolithic { nu_p }),
            (0.0f64..0.2, 1u32..6).prop_map(|(nu_p, n_u)| Variant::PredictorCorrector { nu_p, n_u }),
        ]
    }

    proptest! {
        #[test]
        fn roots_solve_the_quadratic(
            theta in -PI..PI, dt in 0.01f64..20.0,
            a2 in 0.0f64..1.0, a4 in 0.0f64..0.5,
            four in any::<bool>(), variant in any_variant(),
        ) {
            let order = if four { Order::Four } else { Order::Two };
            let cfg = SymbolConfig::ime(order, a2, a4).with_variant(variant);
            let q = amplification(&fourier_symbols(&[theta], &[1.0], 1.0, dt, &cfg), &cfg);
            let prod = q.roots[0] * q.roots[1];
            prop_assert!((prod - q.c_coef).norm() <= 1e-12 * (1.0 + q.c_coef.abs()));
            for a in q.roots {
                let r = a * a - 2.0 * q.b * a + q.c_coef;
                prop_assert!(r.norm() <= 1e-10 * (1.0 + a.norm_sqr() + q.b.abs() * a.norm()));
            }
            if variant == Variant::Plain {
                prop_assert_eq!(q.c_coef, 1.0);
            }
        }

        #[test]
        fn fourth_order_symbol_ratio(theta in 1e-6f64..PI, h in 0.01f64..1.0) {
            let cfg = SymbolConfig::ime(Order::Four, 0.25, 1.0 / 12.0);
            let sp = fourier_symbols(&[theta / h], &[h], 1.0, 0.1, &cfg);
            let ratio = sp.lambda4_sq / sp.lambda2_sq;
            prop_assert!(ratio >= 1.0 - 1e-14 && ratio <= 4.0 / 3.0 + 1e-14);
            prop_assert!(sp.q_p >= 0.0);
        }

        #[test]
        fn region_implies_bounded(a2 in 0.25f64..2.0, extra in 0.0f64..0.5, theta in -PI..PI, logz in -4.0f64..4.0) {
            let a4 = a2 / 4.0 - 1.0 / 48.0 + extra;
            let cfg = SymbolConfig::ime(Order::Four, a2, a4);
            prop_assert!(stability_region(Order::Four, a2, a4));
            let q = amplification(&fourier_symbols(&[theta], &[1.0], 1.0, 10f64.powf(logz / 2.0), &cfg), &cfg);
            prop_assert!(q.max_modulus() <= 1.0 + 1e-12);
        }
    }
}
