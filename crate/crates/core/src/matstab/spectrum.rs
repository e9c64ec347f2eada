use nalgebra::{Complex, DMatrix, DVector, Schur};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matstab::compress::ThreeLevelUpdate;

pub type C64 = Complex<f64>;

/// Growth tolerance: eigenvalues with `|a| <= 1 + TOL_A` count as stable.
pub const TOL_A: f64 = 1e-8;

/// Bound on `||(a^2 I - a B1 - B2) x|| / ||x||` accepted for an eigenpair.
pub const RESIDUAL_LIMIT: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<C64>,
    pub max_modulus: f64,
    pub unstable_count: usize,
    pub tol_a: f64,
    pub max_residual: f64,
}

impl SpectrumReport {
    pub fn stable(&self) -> bool {
        self.unstable_count == 0
    }

    pub fn unstable(&self) -> impl Iterator<Item = &C64> {
        self.eigenvalues.iter().filter(move |a| a.norm() > 1.0 + self.tol_a)
    }
}

/// `[[0, I], [B2, B1]]`.
pub fn companion(b1: &DMatrix<f64>, b2: &DMatrix<f64>) -> DMatrix<f64> {
    let n = b1.nrows();
    let mut c = DMatrix::zeros(2 * n, 2 * n);
    c.view_mut((0, n), (n, n)).fill_with_identity();
    c.view_mut((n, 0), (n, n)).copy_from(b2);
    c.view_mut((n, n), (n, n)).copy_from(b1);
    c
}

fn complexify(m: &DMatrix<f64>) -> DMatrix<C64> {
    m.map(|v| C64::new(v, 0.0))
}

/// `||(a^2 I - a B1 - B2) x|| / ||x||`.
pub fn quadratic_residual(b1: &DMatrix<C64>, b2: &DMatrix<C64>, a: C64, x: &DVector<C64>) -> f64 {
    let r = x * (a * a) - b1 * x * a - b2 * x;
    r.norm() / x.norm()
}

/// Diagonal blocks of a real quasi-triangular Schur factor as (start, size).
fn schur_blocks(t: &DMatrix<f64>) -> Vec<(usize, usize)> {
    let n = t.nrows();
    let mut blocks = Vec::new();
    let mut m = 0;
    while m < n {
        if m + 1 < n && t[(m + 1, m)] != 0.0 {
            blocks.push((m, 2));
            m += 2;
        } else {
            blocks.push((m, 1));
            m += 1;
        }
    }
    blocks
}

fn block_eigenvalues(t: &DMatrix<f64>, (m, size): (usize, usize)) -> Vec<C64> {
    if size == 1 {
        return vec![C64::new(t[(m, m)], 0.0)];
    }
    let (a, b, c, d) = (t[(m, m)], t[(m, m + 1)], t[(m + 1, m)], t[(m + 1, m + 1)]);
    let half = C64::new(0.5 * (a + d), 0.0);
    let disc = C64::new(b * c + 0.25 * (a - d) * (a - d), 0.0).sqrt();
    vec![half + disc, half - disc]
}

/// Eigenvector of the quasi-triangular `t` for the eigenvalue `lam` of block `k`,
/// by back substitution over the blocks above it.
fn schur_eigenvector(t: &DMatrix<f64>, blocks: &[(usize, usize)], k: usize, lam: C64, small: f64) -> DVector<C64> {
    let n = t.nrows();
    let mut y = DVector::from_element(n, C64::new(0.0, 0.0));
    let (m, size) = blocks[k];
    if size == 1 {
        y[m] = C64::new(1.0, 0.0);
    } else {
        let (a, b, c, d) = (t[(m, m)], t[(m, m + 1)], t[(m + 1, m)], t[(m + 1, m + 1)]);
        let first = (C64::new(b, 0.0), lam - a);
        let second = (lam - d, C64::new(c, 0.0));
        let pick = if first.0.norm() + first.1.norm() >= second.0.norm() + second.1.norm() {
            first
        } else {
            second
        };
        y[m] = pick.0;
        y[m + 1] = pick.1;
    }
    let end = m + size;
    let guard = |z: C64| if z.norm() < small { C64::new(small, 0.0) } else { z };
    for &(i, s) in blocks[..k].iter().rev() {
        let rhs = |r: usize| -> C64 {
            let mut acc = C64::new(0.0, 0.0);
            for j in (i + s)..end {
                acc -= y[j] * t[(r, j)];
            }
            acc
        };
        if s == 1 {
            y[i] = rhs(i) / guard(C64::new(t[(i, i)], 0.0) - lam);
        } else {
            let (r0, r1) = (rhs(i), rhs(i + 1));
            let a = C64::new(t[(i, i)], 0.0) - lam;
            let b = C64::new(t[(i, i + 1)], 0.0);
            let c = C64::new(t[(i + 1, i)], 0.0);
            let d = C64::new(t[(i + 1, i + 1)], 0.0) - lam;
            let det = guard(a * d - b * c);
            y[i] = (r0 * d - b * r1) / det;
            y[i + 1] = (a * r1 - c * r0) / det;
        }
    }
    y
}

/// Eigenvalues of the quadratic problem `a^2 x = a B1 x + B2 x` through the
/// companion matrix, with every eigenpair checked against the quadratic.
pub fn quadratic_spectrum(b1: &DMatrix<f64>, b2: &DMatrix<f64>, tol_a: f64) -> Result<SpectrumReport> {
    if b1.shape() != b2.shape() || !b1.is_square() {
        return Err(Error::InvalidArgument(format!(
            "B1 is {:?} and B2 is {:?}; both must be square and equal in size",
            b1.shape(),
            b2.shape()
        )));
    }
    let n = b1.nrows();
    if n == 0 {
        return Ok(SpectrumReport {
            eigenvalues: vec![],
            max_modulus: 0.0,
            unstable_count: 0,
            tol_a,
            max_residual: 0.0,
        });
    }
    let c = companion(b1, b2);
    let schur = Schur::try_new(c, f64::EPSILON, 100_000).ok_or(Error::Eigensolver)?;
    let (q, t) = schur.unpack();
    let blocks = schur_blocks(&t);
    let small = f64::EPSILON * t.amax().max(1.0);
    let qc = complexify(&q);
    let (b1c, b2c) = (complexify(b1), complexify(b2));
    let mut eigenvalues = Vec::with_capacity(2 * n);
    let mut max_residual: f64 = 0.0;
    for (k, &blk) in blocks.iter().enumerate() {
        for lam in block_eigenvalues(&t, blk) {
            let y = schur_eigenvector(&t, &blocks, k, lam, small);
            let v = &qc * y;
            let x = v.rows(0, n).into_owned();
            max_residual = max_residual.max(quadratic_residual(&b1c, &b2c, lam, &x));
            eigenvalues.push(lam);
        }
    }
    if !(max_residual <= RESIDUAL_LIMIT) {
        return Err(Error::ResidualTooLarge {
            residual: max_residual,
            limit: RESIDUAL_LIMIT,
        });
    }
    let max_modulus = eigenvalues.iter().map(|a| a.norm()).fold(0.0, f64::max);
    let unstable_count = eigenvalues.iter().filter(|a| a.norm() > 1.0 + tol_a).count();
    Ok(SpectrumReport {
        eigenvalues,
        max_modulus,
        unstable_count,
        tol_a,
        max_residual,
    })
}

/// Spectrum of a compressed update.
pub fn spectrum(update: &ThreeLevelUpdate, tol_a: f64) -> Result<SpectrumReport> {
    quadratic_spectrum(&update.b1, &update.b2, tol_a)
}
