//! Finite-difference operators on uniform grids: the compact Laplacians
//! `L_{p,h}`, the squared Laplacian `L_{2,h}^2`, the upwind dissipation `Q_p`
//! and the implicit operators `A_2`, `A_4`.
//!
//! Operators act on [`GridFunction`]s in one or two dimensions. A grid
//! function carries a halo of equal width on every side of every axis; an
//! operator with stencil reach `r` returns a grid function whose halo has
//! shrunk by `r`.

use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficients `kappa_m` of the compact Laplacian expansion.
pub const KAPPA: [f64; 4] = [1.0, -1.0 / 12.0, 1.0 / 90.0, -1.0 / 560.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Order {
    Two,
    Four,
}

impl Order {
    pub fn p(self) -> usize {
        match self {
            Order::Two => 2,
            Order::Four => 4,
        }
    }

    pub fn from_p(p: usize) -> Result<Order> {
        match p {
            2 => Ok(Order::Two),
            4 => Ok(Order::Four),
            _ => Err(Error::InvalidArgument(format!("order must be 2 or 4, got {p}"))),
        }
    }

    /// Half width of the Laplacian stencil.
    pub fn laplacian_reach(self) -> usize {
        self.p() / 2
    }

    /// Half width of the dissipation stencil.
    pub fn dissipation_reach(self) -> usize {
        self.p() / 2 + 1
    }
}

impl TryFrom<u8> for Order {
    type Error = String;
    fn try_from(p: u8) -> std::result::Result<Self, String> {
        Order::from_p(p as usize).map_err(|e| e.to_string())
    }
}

impl From<Order> for u8 {
    fn from(o: Order) -> u8 {
        o.p() as u8
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.p())
    }
}

/// Values on a 1D or 2D tensor grid, stored row-major with a uniform halo.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    shape: Vec<usize>,
    halo: usize,
    data: Vec<f64>,
}

impl GridFunction {
    pub fn zeros(shape: &[usize], halo: usize) -> Self {
        assert!(
            shape.len() == 1 || shape.len() == 2,
            "only 1D and 2D grid functions are supported"
        );
        let len = shape.iter().map(|n| n + 2 * halo).product();
        GridFunction {
            shape: shape.to_vec(),
            halo,
            data: vec![0.0; len],
        }
    }

    /// Builds a grid function from `f(index)`, evaluated on the interior and halo.
    pub fn from_fn(shape: &[usize], halo: usize, mut f: impl FnMut(&[isize]) -> f64) -> Self {
        let mut g = GridFunction::zeros(shape, halo);
        let h = halo as isize;
        match shape.len() {
            1 => {
                for i in -h..shape[0] as isize + h {
                    let v = f(&[i]);
                    g.set(&[i], v);
                }
            }
            _ => {
                for i in -h..shape[0] as isize + h {
                    for j in -h..shape[1] as isize + h {
                        let v = f(&[i, j]);
                        g.set(&[i, j], v);
                    }
                }
            }
        }
        g
    }

    /// 1D grid function from interior values with a periodic halo.
    pub fn periodic_1d(values: &[f64], halo: usize) -> Self {
        let n = values.len() as isize;
        GridFunction::from_fn(&[values.len()], halo, |idx| values[idx[0].rem_euclid(n) as usize])
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn ndim(&self) -> usize {
        self.shape.len()
    }

    pub fn halo(&self) -> usize {
        self.halo
    }

    fn stride(&self) -> usize {
        if self.ndim() == 2 {
            self.shape[1] + 2 * self.halo
        } else {
            1
        }
    }

    fn offset(&self, idx: &[isize]) -> usize {
        let h = self.halo as isize;
        match idx.len() {
            1 => (idx[0] + h) as usize,
            _ => (idx[0] + h) as usize * self.stride() + (idx[1] + h) as usize,
        }
    }

    pub fn get(&self, idx: &[isize]) -> f64 {
        self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[isize], v: f64) {
        let o = self.offset(idx);
        self.data[o] = v;
    }

    /// Interior values in row-major order.
    pub fn interior(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.shape.iter().product());
        match self.ndim() {
            1 => out.extend((0..self.shape[0] as isize).map(|i| self.get(&[i]))),
            _ => {
                for i in 0..self.shape[0] as isize {
                    for j in 0..self.shape[1] as isize {
                        out.push(self.get(&[i, j]));
                    }
                }
            }
        }
        out
    }

    /// Overwrites the halo with periodic copies of the interior.
    pub fn fill_periodic_halo(&mut self) {
        let h = self.halo as isize;
        let shape = self.shape.clone();
        let wrap = |i: isize, n: usize| i.rem_euclid(n as isize);
        match shape.len() {
            1 => {
                for i in (-h..0).chain(shape[0] as isize..shape[0] as isize + h) {
                    let v = self.get(&[wrap(i, shape[0])]);
                    self.set(&[i], v);
                }
            }
            _ => {
                for i in -h..shape[0] as isize + h {
                    for j in -h..shape[1] as isize + h {
                        let inside = (0..shape[0] as isize).contains(&i) && (0..shape[1] as isize).contains(&j);
                        if !inside {
                            let v = self.get(&[wrap(i, shape[0]), wrap(j, shape[1])]);
                            self.set(&[i, j], v);
                        }
                    }
                }
            }
        }
    }

    /// Copy restricted to a narrower halo.
    pub fn with_halo(&self, halo: usize) -> Result<GridFunction> {
        if halo > self.halo {
            return Err(Error::HaloTooSmall {
                have: self.halo,
                need: halo,
            });
        }
        Ok(GridFunction::from_fn(&self.shape, halo, |idx| self.get(idx)))
    }

    fn zip_with(&self, other: &GridFunction, f: impl Fn(f64, f64) -> f64) -> GridFunction {
        let halo = self.halo.min(other.halo);
        GridFunction::from_fn(&self.shape, halo, |idx| f(self.get(idx), other.get(idx)))
    }

    pub fn max_abs(&self) -> f64 {
        self.interior().iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Per-axis centered stencil, scaled as a whole.
#[derive(Debug, Clone, PartialEq)]
pub struct StencilOperator {
    pub coefficients: Vec<Vec<f64>>,
    pub scale: f64,
    pub ndim: usize,
}

impl StencilOperator {
    pub fn laplacian(order: Order, h: &[f64], c: f64) -> Self {
        StencilOperator {
            coefficients: h.iter().map(|&hd| laplacian_stencil(order, hd, 1.0)).collect(),
            scale: c * c,
            ndim: h.len(),
        }
    }

    pub fn dissipation(order: Order, h: &[f64], c: f64) -> Self {
        StencilOperator {
            coefficients: h.iter().map(|&hd| dissipation_stencil(order, hd, 1.0)).collect(),
            scale: c,
            ndim: h.len(),
        }
    }

    pub fn reach(&self) -> usize {
        self.coefficients.iter().map(|s| s.len() / 2).max().unwrap_or(0)
    }

    pub fn apply(&self, field: &GridFunction) -> Result<GridFunction> {
        if field.ndim() != self.ndim {
            return Err(Error::InvalidArgument(format!(
                "operator is {}D but the field is {}D",
                self.ndim,
                field.ndim()
            )));
        }
        let r = self.reach();
        if field.halo() < r {
            return Err(Error::HaloTooSmall {
                have: field.halo(),
                need: r,
            });
        }
        let out_halo = field.halo() - r;
        Ok(GridFunction::from_fn(field.shape(), out_halo, |idx| {
            let mut total = 0.0;
            for (axis, coef) in self.coefficients.iter().enumerate() {
                let half = (coef.len() / 2) as isize;
                let mut at = idx.to_vec();
                let mut s = 0.0;
                for (k, &a) in coef.iter().enumerate() {
                    at[axis] = idx[axis] + k as isize - half;
                    s += a * field.get(&at);
                }
                total += s;
            }
            self.scale * total
        }))
    }
}

/// 1D stencil of `L_{p,h}`, width `p+1`.
pub fn laplacian_stencil(order: Order, h: f64, c: f64) -> Vec<f64> {
    let s = c * c / (h * h);
    match order {
        Order::Two => vec![s, -2.0 * s, s],
        Order::Four => {
            // (D+D-) + kappa_1 h^2 (D+D-)^2
            let k = KAPPA[1];
            vec![
                k * s,
                (1.0 - 4.0 * k) * s,
                (-2.0 + 6.0 * k) * s,
                (1.0 - 4.0 * k) * s,
                k * s,
            ]
        }
    }
}

/// 1D stencil of `L_{2,h}^2`.
pub fn laplacian_squared_stencil(h: f64, c: f64) -> Vec<f64> {
    let s = (c * c / (h * h)).powi(2);
    vec![s, -4.0 * s, 6.0 * s, -4.0 * s, s]
}

/// 1D stencil of `Q_p = (c/h)(-D+D- h^2)^{p/2+1}`, width `p+3`.
pub fn dissipation_stencil(order: Order, h: f64, c: f64) -> Vec<f64> {
    let s = c / h;
    let base: &[f64] = match order {
        Order::Two => &[1.0, -4.0, 6.0, -4.0, 1.0],
        Order::Four => &[-1.0, 6.0, -15.0, 20.0, -15.0, 6.0, -1.0],
    };
    base.iter().map(|a| a * s).collect()
}

pub fn apply_l(order: Order, field: &GridFunction, h: &[f64], c: f64) -> Result<GridFunction> {
    StencilOperator::laplacian(order, h, c).apply(field)
}

/// `L_{2,h}` applied twice; needs a halo of two.
pub fn apply_l2sq(field: &GridFunction, h: &[f64], c: f64) -> Result<GridFunction> {
    if field.halo() < 2 {
        return Err(Error::HaloTooSmall {
            have: field.halo(),
            need: 2,
        });
    }
    let once = apply_l(Order::Two, field, h, c)?;
    apply_l(Order::Two, &once, h, c)
}

pub fn apply_q(order: Order, field: &GridFunction, h: &[f64], c: f64) -> Result<GridFunction> {
    StencilOperator::dissipation(order, h, c).apply(field)
}

/// Dense matrix of a centered stencil on a periodic 1D grid of `n` points.
pub fn periodic_matrix(stencil: &[f64], n: usize) -> DMatrix<f64> {
    let half = (stencil.len() / 2) as isize;
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for (k, &a) in stencil.iter().enumerate() {
            let j = (i as isize + k as isize - half).rem_euclid(n as isize) as usize;
            m[(i, j)] += a;
        }
    }
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ImplicitKind {
    A2,
    A4,
}

/// `A_2 = I - alpha2 dt^2 L_2` or `A_4 = I - alpha2 dt^2 L_4 + alpha4 dt^4 L_2^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImplicitOperator {
    pub kind: ImplicitKind,
    pub alpha2: f64,
    pub alpha4: f64,
    pub dt: f64,
}

impl ImplicitOperator {
    pub fn new(order: Order, alpha2: f64, alpha4: f64, dt: f64) -> Self {
        match order {
            Order::Two => ImplicitOperator {
                kind: ImplicitKind::A2,
                alpha2,
                alpha4: 0.0,
                dt,
            },
            Order::Four => ImplicitOperator {
                kind: ImplicitKind::A4,
                alpha2,
                alpha4,
                dt,
            },
        }
    }

    pub fn order(&self) -> Order {
        match self.kind {
            ImplicitKind::A2 => Order::Two,
            ImplicitKind::A4 => Order::Four,
        }
    }

    /// Centered 1D stencil of the operator.
    pub fn stencil(&self, h: f64, c: f64) -> Vec<f64> {
        let dt2 = self.dt * self.dt;
        let mut st: Vec<f64> = laplacian_stencil(self.order(), h, c)
            .iter()
            .map(|a| -self.alpha2 * dt2 * a)
            .collect();
        if self.kind == ImplicitKind::A4 {
            for (s, a) in st.iter_mut().zip(laplacian_squared_stencil(h, c)) {
                *s += self.alpha4 * dt2 * dt2 * a;
            }
        }
        let mid = st.len() / 2;
        st[mid] += 1.0;
        st
    }

    pub fn apply(&self, field: &GridFunction, h: &[f64], c: f64) -> Result<GridFunction> {
        let dt2 = self.dt * self.dt;
        let lu = apply_l(self.order(), field, h, c)?;
        let mut out = field.zip_with(&lu, |u, l| u - self.alpha2 * dt2 * l);
        if self.kind == ImplicitKind::A4 {
            let l2 = apply_l2sq(field, h, c)?;
            out = out.zip_with(&l2, |u, l| u + self.alpha4 * dt2 * dt2 * l);
        }
        Ok(out)
    }

    pub fn periodic_matrix(&self, n: usize, h: f64, c: f64) -> DMatrix<f64> {
        periodic_matrix(&self.stencil(h, c), n)
    }
}

/// Upwind dissipation parameters for the predictor-corrector and monolithic variants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DissipationParams {
    pub nu_p: f64,
    pub gamma: f64,
    pub nu_gamma: f64,
    pub n_u: u32,
    pub sigma_nu: u32,
    pub s_f: f64,
    /// Strict stability bound on `nu_p` for the predictor-corrector form.
    pub bound: f64,
}

impl DissipationParams {
    pub fn none() -> Self {
        DissipationParams {
            nu_p: 0.0,
            gamma: 0.0,
            nu_gamma: 0.0,
            n_u: 1,
            sigma_nu: 1,
            s_f: 0.0,
            bound: f64::INFINITY,
        }
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self.nu_gamma = gamma * self.nu_p;
        self
    }
}

pub fn sigma_for(n_u: u32) -> u32 {
    if n_u % 2 == 0 {
        2
    } else {
        1
    }
}

/// Upper bound `sigma / (2^{p+1} sum_d lambda_d)` on `nu_p`.
pub fn nu_bound(order: Order, n_u: u32, cfl_per_axis: &[f64]) -> f64 {
    let sum: f64 = cfl_per_axis.iter().sum();
    sigma_for(n_u) as f64 / (2f64.powi(order.p() as i32 + 1) * sum)
}

/// `nu_p = s_f / (2^{p+1} sum_d lambda_d)` at full strength (`gamma = 1`).
pub fn dissipation_coefficient(order: Order, n_u: u32, s_f: f64, cfl_per_axis: &[f64]) -> Result<DissipationParams> {
    if n_u < 1 {
        return Err(Error::InvalidArgument("n_u must be at least 1".into()));
    }
    if cfl_per_axis.is_empty() || cfl_per_axis.iter().any(|l| !(*l > 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "CFL numbers must be positive, got {cfl_per_axis:?}"
        )));
    }
    let sigma = sigma_for(n_u);
    if !(s_f >= 0.0) || s_f >= sigma as f64 {
        return Err(Error::BoundViolation {
            s_f,
            sigma: sigma as f64,
        });
    }
    let sum: f64 = cfl_per_axis.iter().sum();
    let nu_p = s_f / (2f64.powi(order.p() as i32 + 1) * sum);
    let bound = nu_bound(order, n_u, cfl_per_axis);
    debug_assert!(nu_p < bound);
    Ok(DissipationParams {
        nu_p,
        gamma: 1.0,
        nu_gamma: nu_p,
        n_u,
        sigma_nu: sigma,
        s_f,
        bound,
    })
}
