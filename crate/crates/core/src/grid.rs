//! Uniform grids and the discretized joint amplitude.

use std::f64::consts::TAU;
use std::fmt;

use ndarray::{Array2, Zip};
use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::units::AxisUnit;

/// Cells inspected at each edge by the aliasing guard.
pub const GUARD_CELLS: usize = 3;
/// Maximum probability allowed inside the guard band.
pub const GUARD_TOLERANCE: f64 = 1e-6;

/// Uniformly sampled axis with `n` cells of width `extent / n`, cell centers
/// symmetric about `center`.
///
/// The grid remembers the extent and center of its conjugate so that
/// [`Grid1D::conjugate`] is an exact involution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    n: usize,
    extent: f64,
    center: f64,
    dual_extent: f64,
    dual_center: f64,
    unit: AxisUnit,
}

impl Grid1D {
    pub fn new(n: usize, extent: f64, center: f64, unit: AxisUnit) -> Result<Self> {
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "grid size must be a power of two ≥ 2, got {n}"
            )));
        }
        if !(extent.is_finite() && extent > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "grid extent must be positive, got {extent}"
            )));
        }
        if !center.is_finite() {
            return Err(Error::InvalidParameter("grid center must be finite".into()));
        }
        Ok(Self {
            n,
            extent,
            center,
            dual_extent: TAU * n as f64 / extent,
            dual_center: 0.0,
            unit,
        })
    }

    /// Position grid in mm centered at zero.
    pub fn position(n: usize, extent_mm: f64) -> Result<Self> {
        Self::new(n, extent_mm, 0.0, AxisUnit::Millimeter)
    }

    /// Momentum grid conjugate to a zero-centered position grid of the given extent.
    pub fn momentum_for_position_extent(n: usize, position_extent_mm: f64) -> Result<Self> {
        Ok(Self::position(n, position_extent_mm)?.conjugate())
    }

    /// Grid with `Δκ·Δx = 2π/n` relative to this one.
    pub fn conjugate(&self) -> Self {
        Self {
            n: self.n,
            extent: self.dual_extent,
            center: self.dual_center,
            dual_extent: self.extent,
            dual_center: self.center,
            unit: self.unit.dual(),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn unit(&self) -> AxisUnit {
        self.unit
    }

    pub fn spacing(&self) -> f64 {
        self.extent / self.n as f64
    }

    /// Offset of cell `j` from the center in units of the spacing.
    pub(crate) fn offset(&self, j: usize) -> f64 {
        j as f64 - (self.n as f64 - 1.0) / 2.0
    }

    pub fn coord(&self, j: usize) -> f64 {
        self.center + self.offset(j) * self.spacing()
    }

    pub fn coords(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.coord(j)).collect()
    }

    pub fn lower_edge(&self) -> f64 {
        self.center - 0.5 * self.extent
    }

    pub fn upper_edge(&self) -> f64 {
        self.center + 0.5 * self.extent
    }

    /// True when cell `n-1-j` sits at the mirror image of cell `j`.
    pub fn is_symmetric_about_zero(&self) -> bool {
        self.center == 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    Momentum,
    Position,
}

impl Basis {
    pub fn axis_unit(self) -> AxisUnit {
        match self {
            Basis::Momentum => AxisUnit::InverseMillimeter,
            Basis::Position => AxisUnit::Millimeter,
        }
    }

    pub fn dual(self) -> Self {
        match self {
            Basis::Momentum => Basis::Position,
            Basis::Position => Basis::Momentum,
        }
    }

    /// Coordinate symbol used in file headers and reports.
    pub fn symbol(self) -> &'static str {
        match self {
            Basis::Momentum => "kappa",
            Basis::Position => "x",
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::Momentum => f.write_str("momentum"),
            Basis::Position => f.write_str("position"),
        }
    }
}

fn check_axes(axis_s: &Grid1D, axis_i: &Grid1D, basis: Basis) -> Result<()> {
    for axis in [axis_s, axis_i] {
        if axis.unit() != basis.axis_unit() {
            return Err(Error::InvalidParameter(format!(
                "{basis} basis needs axes in {}, got {}",
                basis.axis_unit(),
                axis.unit()
            )));
        }
    }
    Ok(())
}

/// Joint two-photon amplitude sampled on `axis_s × axis_i`.
///
/// Rows index the signal coordinate and columns the idler coordinate.
/// Normalization is `Σ|ψ|²·Δs·Δi = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiphotonGrid {
    axis_s: Grid1D,
    axis_i: Grid1D,
    basis: Basis,
    amplitude: Array2<Complex64>,
    plane_wave: bool,
}

impl BiphotonGrid {
    pub fn new(
        axis_s: Grid1D,
        axis_i: Grid1D,
        basis: Basis,
        amplitude: Array2<Complex64>,
    ) -> Result<Self> {
        check_axes(&axis_s, &axis_i, basis)?;
        if amplitude.dim() != (axis_s.len(), axis_i.len()) {
            return Err(Error::InvalidParameter(format!(
                "amplitude shape {:?} does not match axes ({}, {})",
                amplitude.dim(),
                axis_s.len(),
                axis_i.len()
            )));
        }
        Ok(Self {
            axis_s,
            axis_i,
            basis,
            amplitude,
            plane_wave: false,
        })
    }

    pub(crate) fn with_plane_wave_flag(mut self, plane_wave: bool) -> Self {
        self.plane_wave = plane_wave;
        self
    }

    pub(crate) fn replace(
        &self,
        basis: Basis,
        axis_s: Grid1D,
        axis_i: Grid1D,
        amplitude: Array2<Complex64>,
    ) -> Self {
        Self {
            axis_s,
            axis_i,
            basis,
            amplitude,
            plane_wave: self.plane_wave,
        }
    }

    pub fn axis_s(&self) -> &Grid1D {
        &self.axis_s
    }

    pub fn axis_i(&self) -> &Grid1D {
        &self.axis_i
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn amplitude(&self) -> &Array2<Complex64> {
        &self.amplitude
    }

    pub(crate) fn amplitude_mut(&mut self) -> &mut Array2<Complex64> {
        &mut self.amplitude
    }

    /// Whether the state came from a plane-wave (single-ridge) pump. Its
    /// position density is uniform along `x₊` by construction.
    pub fn is_plane_wave(&self) -> bool {
        self.plane_wave
    }

    pub fn cell_area(&self) -> f64 {
        self.axis_s.spacing() * self.axis_i.spacing()
    }

    pub fn norm(&self) -> f64 {
        self.amplitude.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.cell_area()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let norm = self.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "cannot normalize amplitude with norm {norm}"
            )));
        }
        let scale = norm.sqrt().recip();
        self.amplitude.mapv_inplace(|a| a * scale);
        Ok(())
    }

    /// Probability mass per cell.
    pub fn density(&self) -> JointDensity {
        let area = self.cell_area();
        JointDensity {
            axis_s: self.axis_s,
            axis_i: self.axis_i,
            basis: self.basis,
            mass: self.amplitude.mapv(|a| a.norm_sqr() * area),
        }
    }

    /// Fraction of probability within `cells` cells of any grid edge.
    pub fn edge_leakage(&self, cells: usize) -> f64 {
        edge_fraction(&self.amplitude.mapv(|a| a.norm_sqr()), cells)
    }

    /// Fails with [`Error::GridTooSmall`] when more than
    /// [`GUARD_TOLERANCE`] of the probability sits in the edge band.
    pub fn check_aliasing(&self) -> Result<()> {
        let leakage = self.edge_leakage(GUARD_CELLS);
        if leakage < GUARD_TOLERANCE {
            Ok(())
        } else {
            Err(Error::GridTooSmall {
                basis: self.basis,
                leakage,
                cells: GUARD_CELLS,
            })
        }
    }
}

fn edge_fraction(weights: &Array2<f64>, cells: usize) -> f64 {
    let (ns, ni) = weights.dim();
    let total: f64 = weights.sum();
    if total <= 0.0 {
        return 0.0;
    }
    let cells_s = cells.min(ns);
    let cells_i = cells.min(ni);
    let mut edge = 0.0;
    for ((j, k), w) in weights.indexed_iter() {
        if j < cells_s || j + cells_s >= ns || k < cells_i || k + cells_i >= ni {
            edge += w;
        }
    }
    edge / total
}

/// Probability mass per cell on a pair of axes.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDensity {
    pub(crate) axis_s: Grid1D,
    pub(crate) axis_i: Grid1D,
    pub(crate) basis: Basis,
    pub(crate) mass: Array2<f64>,
}

/// First and second moments of a joint density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointMoments {
    pub mean_s: f64,
    pub mean_i: f64,
    pub var_s: f64,
    pub var_i: f64,
    pub cov_si: f64,
}

impl JointMoments {
    /// Variance along `u₋ = (u_s − u_i)/√2`.
    pub fn minus_variance(&self) -> f64 {
        0.5 * (self.var_s + self.var_i - 2.0 * self.cov_si)
    }

    /// Variance along `u₊ = (u_s + u_i)/√2`.
    pub fn plus_variance(&self) -> f64 {
        0.5 * (self.var_s + self.var_i + 2.0 * self.cov_si)
    }

    pub fn plus_minus_covariance(&self) -> f64 {
        0.5 * (self.var_s - self.var_i)
    }

    /// Variance of `u₋` conditioned on `u₊ = mean`, i.e. the width along the
    /// anti-diagonal slice for a Gaussian density.
    pub fn anti_diagonal_conditional_variance(&self) -> f64 {
        let c = self.plus_minus_covariance();
        self.minus_variance() - c * c / self.plus_variance()
    }
}

impl JointDensity {
    pub fn new(axis_s: Grid1D, axis_i: Grid1D, basis: Basis, mass: Array2<f64>) -> Result<Self> {
        check_axes(&axis_s, &axis_i, basis)?;
        if mass.dim() != (axis_s.len(), axis_i.len()) {
            return Err(Error::InvalidParameter(format!(
                "density shape {:?} does not match axes",
                mass.dim()
            )));
        }
        if mass.iter().any(|m| !(m.is_finite() && *m >= 0.0)) {
            return Err(Error::InvalidParameter(
                "density values must be finite and non-negative".into(),
            ));
        }
        Ok(Self {
            axis_s,
            axis_i,
            basis,
            mass,
        })
    }

    pub fn axis_s(&self) -> &Grid1D {
        &self.axis_s
    }

    pub fn axis_i(&self) -> &Grid1D {
        &self.axis_i
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    /// Probability mass per cell.
    pub fn mass(&self) -> &Array2<f64> {
        &self.mass
    }

    pub fn total(&self) -> f64 {
        self.mass.sum()
    }

    pub fn cell_area(&self) -> f64 {
        self.axis_s.spacing() * self.axis_i.spacing()
    }

    /// Copy scaled to unit total mass.
    pub fn normalized(&self) -> Result<Self> {
        let total = self.total();
        if total.is_nan() || total <= 0.0 {
            return Err(Error::InvalidParameter("density has zero mass".into()));
        }
        let mut out = self.clone();
        out.mass.mapv_inplace(|m| m / total);
        Ok(out)
    }

    pub fn edge_leakage(&self, cells: usize) -> f64 {
        edge_fraction(&self.mass, cells)
    }

    pub fn moments(&self) -> JointMoments {
        let xs = self.axis_s.coords();
        let xi = self.axis_i.coords();
        let total = self.total();
        let (mut ms, mut mi) = (0.0, 0.0);
        for ((j, k), m) in self.mass.indexed_iter() {
            ms += m * xs[j];
            mi += m * xi[k];
        }
        ms /= total;
        mi /= total;
        let (mut vs, mut vi, mut c) = (0.0, 0.0, 0.0);
        for ((j, k), m) in self.mass.indexed_iter() {
            let ds = xs[j] - ms;
            let di = xi[k] - mi;
            vs += m * ds * ds;
            vi += m * di * di;
            c += m * ds * di;
        }
        JointMoments {
            mean_s: ms,
            mean_i: mi,
            var_s: vs / total,
            var_i: vi / total,
            cov_si: c / total,
        }
    }

    /// Sums `factor × factor` blocks. Axis sizes shrink by `factor`
    /// (a power of two), mass is preserved.
    pub fn coarsen(&self, factor: usize) -> Result<Self> {
        let smallest = self.axis_s.len().min(self.axis_i.len());
        if !factor.is_power_of_two() || smallest / factor < 2 {
            return Err(Error::InvalidParameter(format!(
                "coarsening factor {factor} is not a power of two below the grid size"
            )));
        }
        if factor == 1 {
            return Ok(self.clone());
        }
        let coarse = |g: &Grid1D| Grid1D::new(g.len() / factor, g.extent(), g.center(), g.unit());
        let axis_s = coarse(&self.axis_s)?;
        let axis_i = coarse(&self.axis_i)?;
        let mut mass = Array2::<f64>::zeros((axis_s.len(), axis_i.len()));
        for ((j, k), m) in self.mass.indexed_iter() {
            mass[[j / factor, k / factor]] += m;
        }
        Ok(Self {
            axis_s,
            axis_i,
            basis: self.basis,
            mass,
        })
    }

    /// Largest absolute cellwise difference relative to the largest cell of
    /// `reference`.
    pub fn sup_relative_difference(&self, reference: &JointDensity) -> Result<f64> {
        if self.mass.dim() != reference.mass.dim() {
            return Err(Error::IncompatibleAxes("density shapes differ".into()));
        }
        let peak = reference.mass.iter().cloned().fold(0.0, f64::max);
        let mut worst: f64 = 0.0;
        Zip::from(&self.mass)
            .and(&reference.mass)
            .for_each(|a, b| worst = worst.max((a - b).abs()));
        Ok(if peak > 0.0 { worst / peak } else { worst })
    }
}
