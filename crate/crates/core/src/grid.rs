//! One-dimensional overset grids on [-1, 1].
//!
//! The right grid covers [0.5, 1] with `N_R` cells. The left grid starts at
//! -1 with spacing `h_L = delta * h_R` and is extended just far enough that
//! every interpolation point on either grid has a full Lagrange stencil made
//! of the other grid's non-interpolation points.
//!
//! Points are addressed by a grid-local index `j`. Left grid: Dirichlet at
//! `j = 0`, ghosts `-ng..-1`, active `1..=N_L`, interpolation
//! `N_L+1..=N_L+ng`. Right grid: interpolation `-ng..-1`, active
//! `0..N_R-1`, Dirichlet at `N_R`, ghosts `N_R+1..=N_R+ng`. Here
//! `ng = p/2 + 1`, wide enough for the dissipation stencil.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::Order;

/// Slack used when rounding fractional donor indices, so that targets that
/// sit on a cell midpoint up to roundoff break ties toward the larger index.
const TIE_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Side::Left => 0,
            Side::Right => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Boundary {
    Dirichlet,
}

/// Role of a grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointKind {
    Ghost,
    Dirichlet,
    Active,
    Interpolation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentGrid1D {
    pub side: Side,
    /// Coordinate of index 0, the left end of the grid's physical interval.
    pub x0: f64,
    pub h: f64,
    pub n_active: usize,
    pub n_ghost: usize,
    pub boundary: Boundary,
    pub dirichlet_index: isize,
    pub active_first: isize,
    pub active_last: isize,
    pub ghost_indices: Vec<isize>,
    pub interp_indices: Vec<isize>,
}

impl ComponentGrid1D {
    fn new(side: Side, x0: f64, h: f64, n_active: usize, n_ghost: usize) -> Self {
        let ng = n_ghost as isize;
        let n = n_active as isize;
        match side {
            Side::Left => ComponentGrid1D {
                side,
                x0,
                h,
                n_active,
                n_ghost,
                boundary: Boundary::Dirichlet,
                dirichlet_index: 0,
                active_first: 1,
                active_last: n,
                ghost_indices: (-ng..0).collect(),
                interp_indices: (n + 1..=n + ng).collect(),
            },
            Side::Right => ComponentGrid1D {
                side,
                x0,
                h,
                n_active,
                n_ghost,
                boundary: Boundary::Dirichlet,
                dirichlet_index: n,
                active_first: 0,
                active_last: n - 1,
                ghost_indices: (n + 1..=n + ng).collect(),
                interp_indices: (-ng..0).collect(),
            },
        }
    }

    pub fn first_index(&self) -> isize {
        -(self.n_ghost as isize)
    }

    /// Both grids end `n_ghost` points past index `n_active`.
    pub fn last_index(&self) -> isize {
        (self.n_active + self.n_ghost) as isize
    }

    /// Total number of stored points, including ghosts and interpolation points.
    pub fn len(&self) -> usize {
        (self.last_index() - self.first_index() + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Storage slot of index `j`.
    pub fn slot(&self, j: isize) -> usize {
        debug_assert!(j >= self.first_index() && j <= self.last_index());
        (j - self.first_index()) as usize
    }

    pub fn index_of_slot(&self, slot: usize) -> isize {
        slot as isize + self.first_index()
    }

    pub fn x(&self, j: isize) -> f64 {
        self.x0 + j as f64 * self.h
    }

    pub fn is_active(&self, j: isize) -> bool {
        j >= self.active_first && j <= self.active_last
    }

    pub fn kind(&self, j: isize) -> PointKind {
        if self.is_active(j) {
            PointKind::Active
        } else if j == self.dirichlet_index {
            PointKind::Dirichlet
        } else if self.interp_indices.contains(&j) {
            PointKind::Interpolation
        } else {
            PointKind::Ghost
        }
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<isize> {
        self.first_index()..=self.last_index()
    }

    pub fn active_indices(&self) -> impl Iterator<Item = isize> {
        self.active_first..=self.active_last
    }

    /// Index of the physical point that a ghost point mirrors (odd symmetry
    /// about the Dirichlet point).
    pub fn ghost_mirror(&self, j: isize) -> isize {
        2 * self.dirichlet_index - j
    }

    pub fn coordinates(&self) -> Vec<f64> {
        (self.first_index()..=self.last_index())
            .map(|j| self.x(j))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterpStencil {
    pub target: Side,
    pub target_index: isize,
    pub donor: Side,
    /// Leftmost donor index `m_k`; the stencil uses `m_k..=m_k + p`.
    pub donor_start: isize,
    pub weights: Vec<f64>,
}

impl InterpStencil {
    pub fn donor_indices(&self) -> impl Iterator<Item = isize> + '_ {
        (0..self.weights.len()).map(move |i| self.donor_start + i as isize)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OversetGrid1D {
    pub order: Order,
    pub left: ComponentGrid1D,
    pub right: ComponentGrid1D,
    pub delta: f64,
    pub b_left: f64,
    pub interp_stencils: Vec<InterpStencil>,
}

impl OversetGrid1D {
    pub fn component(&self, side: Side) -> &ComponentGrid1D {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    /// Number of unknowns over both grids.
    pub fn total_len(&self) -> usize {
        self.left.len() + self.right.len()
    }

    /// Offset of a grid's block in the global unknown vector (left block first).
    pub fn offset(&self, side: Side) -> usize {
        match side {
            Side::Left => 0,
            Side::Right => self.left.len(),
        }
    }

    /// Global position of point `j` on grid `side`.
    pub fn global(&self, side: Side, j: isize) -> usize {
        self.offset(side) + self.component(side).slot(j)
    }

    pub fn stencils_for(&self, target: Side) -> impl Iterator<Item = &InterpStencil> {
        self.interp_stencils.iter().filter(move |s| s.target == target)
    }

    /// Checks that no donor point is itself an interpolation point.
    pub fn check_explicit(&self) -> Result<()> {
        for s in &self.interp_stencils {
            let donor = self.component(s.donor);
            for j in s.donor_indices() {
                if donor.interp_indices.contains(&j) {
                    return Err(Error::ImplicitInterpolation(format!(
                        "donor {:?}[{}] of target {:?}[{}] is an interpolation point",
                        s.donor, j, s.target, s.target_index
                    )));
                }
                if j < donor.first_index() || j > donor.last_index() {
                    return Err(Error::ImplicitInterpolation(format!(
                        "donor {:?}[{}] lies outside its grid",
                        s.donor, j
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Lagrange weights for interpolating at `x` from values at `donors`.
pub fn lagrange_weights(donors: &[f64], x: f64) -> Result<Vec<f64>> {
    for (i, &a) in donors.iter().enumerate() {
        for &b in &donors[i + 1..] {
            if a == b {
                return Err(Error::DegenerateStencil(a, b));
            }
        }
    }
    Ok(donors
        .iter()
        .enumerate()
        .map(|(i, &xi)| {
            donors
                .iter()
                .enumerate()
                .filter(|&(m, _)| m != i)
                .map(|(_, &xm)| (x - xm) / (xi - xm))
                .product()
        })
        .collect())
}

/// Leftmost donor of the most centered `p+1` point stencil around the
/// fractional index `f`. Ties go to the larger index.
fn centered_start(f: f64, p: usize) -> isize {
    (f + 0.5 + TIE_EPS).floor() as isize - (p / 2) as isize
}

/// Fractional right-grid index of left-grid point `j`.
fn left_target_in_right(j: isize, delta: f64, n_right: usize) -> f64 {
    j as f64 * delta - 3.0 * n_right as f64
}

/// Fractional left-grid index of right-grid point `k`.
fn right_target_in_left(k: isize, delta: f64, n_right: usize) -> f64 {
    (3.0 * n_right as f64 + k as f64) / delta
}

/// Donor starts for every interpolation point, or `None` if some stencil
/// would reach into the donor grid's interpolation points. Stencils are
/// centered where possible and shifted inward near the far Dirichlet end.
fn donor_starts(delta: f64, n_right: usize, n_left: usize, p: usize) -> Option<Vec<(Side, isize, isize)>> {
    let ng = (p / 2 + 1) as isize;
    let pi = p as isize;
    let mut out = Vec::with_capacity(2 * ng as usize);
    for j in n_left as isize + 1..=n_left as isize + ng {
        let m = centered_start(left_target_in_right(j, delta, n_right), p);
        if m < 0 {
            return None;
        }
        out.push((Side::Left, j, m.min(n_right as isize - pi)));
    }
    for k in -ng..0 {
        let m = centered_start(right_target_in_left(k, delta, n_right), p);
        if m + pi > n_left as isize {
            return None;
        }
        out.push((Side::Right, k, m.max(0)));
    }
    Some(out)
}

pub fn build_overset(delta: f64, n_right: usize, order: Order) -> Result<OversetGrid1D> {
    let p = order.p();
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::InvalidArgument(format!("delta must be positive, got {delta}")));
    }
    if n_right < p + 2 {
        return Err(Error::InvalidArgument(format!(
            "N_R must be at least p+2 = {}, got {n_right}",
            p + 2
        )));
    }
    let h_right = 0.5 / n_right as f64;
    let h_left = delta * h_right;
    let n_ghost = p / 2 + 1;
    let max_n_left = (2.5 / h_left).ceil() as usize;

    let (n_left, starts) = (p + 1..=max_n_left)
        .find_map(|n| donor_starts(delta, n_right, n, p).map(|s| (n, s)))
        .ok_or(Error::InfeasibleOverlap {
            delta,
            n_right,
            max_n_left,
        })?;

    let left = ComponentGrid1D::new(Side::Left, -1.0, h_left, n_left, n_ghost);
    let right = ComponentGrid1D::new(Side::Right, 0.5, h_right, n_right, n_ghost);

    let mut interp_stencils = Vec::with_capacity(starts.len());
    for (target, index, start) in starts {
        let (tgrid, dgrid) = match target {
            Side::Left => (&left, &right),
            Side::Right => (&right, &left),
        };
        let donors: Vec<f64> = (0..=p as isize).map(|i| dgrid.x(start + i)).collect();
        let weights = lagrange_weights(&donors, tgrid.x(index))?;
        interp_stencils.push(InterpStencil {
            target,
            target_index: index,
            donor: target.other(),
            donor_start: start,
            weights,
        });
    }

    let grid = OversetGrid1D {
        order,
        b_left: -1.0 + n_left as f64 * h_left,
        left,
        right,
        delta,
        interp_stencils,
    };
    grid.check_explicit()?;
    Ok(grid)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPlan {
    pub delta_min: f64,
    pub delta_max: f64,
    pub n_delta: usize,
    pub gamma_values: Vec<f64>,
}

impl SweepPlan {
    pub fn new(delta_min: f64, delta_max: f64, n_delta: usize, gamma_values: Vec<f64>) -> Result<Self> {
        let plan = SweepPlan {
            delta_min,
            delta_max,
            n_delta,
            gamma_values,
        };
        plan.validate()?;
        Ok(plan)
    }

    /// The 101-grid, eleven-gamma sweep over delta in [0.25, 2].
    pub fn standard() -> Self {
        SweepPlan {
            delta_min: 0.25,
            delta_max: 2.0,
            n_delta: 101,
            gamma_values: (0..=10).map(|i| i as f64 / 10.0).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_delta < 1 {
            return Err(Error::InvalidArgument("n_delta must be at least 1".into()));
        }
        if !(self.delta_min > 0.0) || self.delta_min > self.delta_max {
            return Err(Error::InvalidArgument(format!(
                "need 0 < delta_min <= delta_max, got [{}, {}]",
                self.delta_min, self.delta_max
            )));
        }
        if let Some(g) = self.gamma_values.iter().find(|g| !(0.0..=1.0).contains(*g)) {
            return Err(Error::InvalidArgument(format!("gamma {g} is outside [0, 1]")));
        }
        Ok(())
    }

    pub fn deltas(&self) -> Vec<f64> {
        if self.n_delta == 1 {
            return vec![self.delta_min];
        }
        let step = (self.delta_max - self.delta_min) / (self.n_delta - 1) as f64;
        (0..self.n_delta)
            .map(|i| {
                if i + 1 == self.n_delta {
                    self.delta_max
                } else {
                    self.delta_min + i as f64 * step
                }
            })
            .collect()
    }
}

pub fn enumerate_grids(plan: &SweepPlan, n_right: usize, order: Order) -> Result<Vec<OversetGrid1D>> {
    plan.validate()?;
    plan.deltas()
        .into_iter()
        .map(|d| build_overset(d, n_right, order))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn lagrange_at_node_and_midpoints() {
        let h = 0.3;
        let nodes = [0.0, h, 2.0 * h];
        let w = lagrange_weights(&nodes, h).unwrap();
        assert_eq!(w, vec![0.0, 1.0, 0.0]);
        let w = lagrange_weights(&nodes, h / 2.0).unwrap();
        for (a, b) in w.iter().zip([0.375, 0.75, -0.125]) {
            assert!(close(*a, b, 1e-15));
        }
        let w = lagrange_weights(&nodes, 1.5 * h).unwrap();
        for (a, b) in w.iter().zip([-0.125, 0.75, 0.375]) {
            assert!(close(*a, b, 1e-15));
        }
    }

    #[test]
    fn lagrange_rejects_coincident_nodes() {
        assert!(matches!(
            lagrange_weights(&[0.0, 1.0, 1.0], 0.5),
            Err(Error::DegenerateStencil(..))
        ));
    }

    #[test]
    fn unit_ratio_grid() {
        let g = build_overset(1.0, 10, Order::Two).unwrap();
        assert!(close(g.left.h, 0.05, 1e-15));
        assert!(close(g.right.h, 0.05, 1e-15));
        assert!(g.b_left >= 0.5 - 1e-12);
        assert_eq!(g.left.n_ghost, 2);
        for s in &g.interp_stencils {
            assert_eq!(s.weights.len(), 3);
        }
        // Matching nodes: every stencil collapses to its middle point.
        for s in &g.interp_stencils {
            let w = &s.weights;
            assert!(close(w[0], 0.0, 1e-12) && close(w[1], 1.0, 1e-12) && close(w[2], 0.0, 1e-12));
        }
    }

    #[test]
    fn fine_left_grid_size() {
        let g = build_overset(0.25, 10, Order::Two).unwrap();
        assert!(close(g.left.h, 0.0125, 1e-15));
        assert!((115..=125).contains(&g.left.n_active), "N_L = {}", g.left.n_active);
    }

    #[test]
    fn point_classification() {
        let g = build_overset(0.8, 10, Order::Four).unwrap();
        assert_eq!(g.left.ghost_indices, vec![-3, -2, -1]);
        assert_eq!(g.left.active_first, 1);
        let nl = g.left.n_active as isize;
        assert_eq!(g.left.interp_indices, vec![nl + 1, nl + 2, nl + 3]);
        assert_eq!(g.right.interp_indices, vec![-3, -2, -1]);
        assert_eq!(g.right.active_last, 9);
        assert_eq!(g.right.dirichlet_index, 10);
        assert_eq!(g.right.ghost_indices, vec![11, 12, 13]);
        assert_eq!(g.left.len(), g.left.n_active + 7);
        assert_eq!(g.right.len(), 17);
        assert_eq!(g.left.ghost_mirror(-2), 2);
        assert_eq!(g.right.ghost_mirror(12), 8);
    }

    #[test]
    fn overlap_is_minimal() {
        for &delta in &[0.3, 0.77, 1.0, 1.55, 2.0] {
            for order in [Order::Two, Order::Four] {
                let g = build_overset(delta, 10, order).unwrap();
                let nl = g.left.n_active;
                assert!(donor_starts(delta, 10, nl - 1, order.p()).is_none());
            }
        }
    }

    #[test]
    fn targets_inside_donor_hull() {
        for i in 0..101 {
            let delta = 0.25 + 1.75 * i as f64 / 100.0;
            for order in [Order::Two, Order::Four] {
                let g = build_overset(delta, 10, order).unwrap();
                for s in &g.interp_stencils {
                    let t = g.component(s.target).x(s.target_index);
                    let d = g.component(s.donor);
                    let lo = d.x(s.donor_start);
                    let hi = d.x(s.donor_start + order.p() as isize);
                    assert!(t >= lo - 1e-12 && t <= hi + 1e-12);
                }
            }
        }
    }

    #[test]
    fn invalid_inputs() {
        assert!(build_overset(0.0, 10, Order::Two).is_err());
        assert!(build_overset(1.0, 3, Order::Two).is_err());
        assert!(build_overset(1.0, 5, Order::Four).is_err());
    }

    #[test]
    fn sweep_plan_deltas() {
        let plan = SweepPlan::standard();
        let d = plan.deltas();
        assert_eq!(d.len(), 101);
        assert_eq!(d[0], 0.25);
        assert_eq!(d[100], 2.0);
        assert!(close(d[50], 1.125, 1e-14));
        let single = SweepPlan::new(1.0, 1.0, 1, vec![0.5]).unwrap();
        let grids = enumerate_grids(&single, 10, Order::Two).unwrap();
        assert_eq!(grids.len(), 1);
        assert_eq!(grids[0].delta, 1.0);
        assert!(SweepPlan::new(1.0, 0.5, 3, vec![]).is_err());
        assert!(SweepPlan::new(0.5, 1.0, 3, vec![1.5]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = build_overset(1.3, 10, Order::Two).unwrap();
        let s = g.to_json().unwrap();
        let back: OversetGrid1D = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
    }
}
