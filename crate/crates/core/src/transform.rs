//! Basis changes of the joint amplitude, rotated `±` coordinates and
//! marginals.
//!
//! The position amplitude is `ψ(x_s,x_i) = (1/2π) ∬ ψ(κ_s,κ_i)
//! e^{-i(κ_s x_s + κ_i x_i)} dκ_s dκ_i`, so a linear phase `aκ_s` moves the
//! signal photon to `x_s + a`. On the grid this is a centered DFT whose
//! offsets are absorbed into per-axis phase ramps.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2, TAU};
use std::sync::Arc;

use ndarray::{Array1, Array2, Axis};
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::{Basis, BiphotonGrid, Grid1D, JointDensity};
use crate::parallel::for_each_row_init;

/// One axis of the centered transform `v_m ← Σ_j u_j e^{-i s u_j v_m}`.
struct AxisPlan {
    fft: Arc<dyn Fft<f64>>,
    pre: Vec<Complex64>,
    post: Vec<Complex64>,
}

impl AxisPlan {
    /// `sign = +1` maps momentum to position, `-1` the reverse.
    fn new(input: &Grid1D, sign: f64) -> Self {
        let n = input.len();
        let output = input.conjugate();
        let du = input.spacing();
        let dv = output.spacing();
        let (uc, vc) = (input.center(), output.center());
        let n64 = n as u64;

        // 2π c j / n with c = (n-1)/2 equals π((n-1)j mod 2n)/n; reducing
        // in integers keeps the ramp exact for large j.
        let half_turns = |j: usize| ((n64 - 1) * j as u64 % (2 * n64)) as f64 * PI / n as f64;
        let c2 = ((n64 - 1) * (n64 - 1) % (4 * n64)) as f64 * PI / (2.0 * n as f64);

        let constant = Complex64::from_polar(du / TAU.sqrt(), -sign * (uc * vc + c2));
        let pre = (0..n)
            .map(|j| {
                Complex64::from_polar(1.0, -sign * (vc * input.offset(j) * du - half_turns(j)))
            })
            .collect();
        let post = (0..n)
            .map(|m| {
                constant
                    * Complex64::from_polar(
                        1.0,
                        -sign * (uc * output.offset(m) * dv - half_turns(m)),
                    )
            })
            .collect();

        let mut planner = FftPlanner::new();
        let fft = if sign > 0.0 {
            planner.plan_fft_forward(n)
        } else {
            planner.plan_fft_inverse(n)
        };
        Self { fft, pre, post }
    }

    fn apply_rows(&self, data: &mut Array2<Complex64>) {
        let n = self.pre.len();
        let scratch_len = self.fft.get_inplace_scratch_len();
        for_each_row_init(
            data,
            || {
                (
                    vec![Complex64::default(); n],
                    vec![Complex64::default(); scratch_len],
                )
            },
            |(buffer, scratch), mut row| {
                for ((b, a), p) in buffer.iter_mut().zip(row.iter()).zip(&self.pre) {
                    *b = a * p;
                }
                self.fft.process_with_scratch(buffer, scratch);
                for ((a, b), q) in row.iter_mut().zip(buffer.iter()).zip(&self.post) {
                    *a = b * q;
                }
            },
        );
    }
}

fn transform(state: &BiphotonGrid, sign: f64) -> BiphotonGrid {
    let plan_i = AxisPlan::new(state.axis_i(), sign);
    let mut data = state.amplitude().to_owned();
    plan_i.apply_rows(&mut data);

    let plan_s = if state.axis_s() == state.axis_i() {
        plan_i
    } else {
        AxisPlan::new(state.axis_s(), sign)
    };
    let mut transposed = data.reversed_axes().as_standard_layout().into_owned();
    plan_s.apply_rows(&mut transposed);
    let data = transposed.reversed_axes().as_standard_layout().into_owned();

    state.replace(
        state.basis().dual(),
        state.axis_s().conjugate(),
        state.axis_i().conjugate(),
        data,
    )
}

fn expect_basis(state: &BiphotonGrid, expected: Basis) -> Result<()> {
    if state.basis() == expected {
        Ok(())
    } else {
        Err(Error::BasisMismatch {
            expected,
            found: state.basis(),
        })
    }
}

/// Momentum → position. Both sides pass through the aliasing guard, except
/// the position side of a plane-wave-pump state, which is uniform along
/// `x₊` by construction.
pub fn to_position_basis(state: &BiphotonGrid) -> Result<BiphotonGrid> {
    expect_basis(state, Basis::Momentum)?;
    state.check_aliasing()?;
    let out = transform(state, 1.0);
    if !out.is_plane_wave() {
        out.check_aliasing()?;
    }
    Ok(out)
}

/// Position → momentum, the inverse of [`to_position_basis`].
pub fn to_momentum_basis(state: &BiphotonGrid) -> Result<BiphotonGrid> {
    expect_basis(state, Basis::Position)?;
    if !state.is_plane_wave() {
        state.check_aliasing()?;
    }
    let out = transform(state, -1.0);
    out.check_aliasing()?;
    Ok(out)
}

/// Probability mass on the `(u₊, u₋)` axes, `u± = (u_s ± u_i)/√2`.
///
/// Rows index `u₊`, columns `u₋`.
#[derive(Debug, Clone, PartialEq)]
pub struct RotatedDistribution {
    axis_plus: Grid1D,
    axis_minus: Grid1D,
    basis: Basis,
    mass: Array2<f64>,
}

impl RotatedDistribution {
    pub fn axis_plus(&self) -> &Grid1D {
        &self.axis_plus
    }

    pub fn axis_minus(&self) -> &Grid1D {
        &self.axis_minus
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn mass(&self) -> &Array2<f64> {
        &self.mass
    }

    pub fn total(&self) -> f64 {
        self.mass.sum()
    }

    pub fn marginal_plus(&self) -> Marginal {
        Marginal::from_mass(self.axis_plus, self.mass.sum_axis(Axis(1)))
    }

    pub fn marginal_minus(&self) -> Marginal {
        Marginal::from_mass(self.axis_minus, self.mass.sum_axis(Axis(0)))
    }
}

/// Resamples a joint density onto rotated axes.
///
/// Each source cell's mass is split bilinearly over the four nearest
/// rotated cells, so mass is conserved to rounding. The output axes have
/// twice the points at `1/√2` the spacing, which covers the rotated square.
pub fn rotate_to_pm(density: &JointDensity) -> Result<RotatedDistribution> {
    let (gs, gi) = (density.axis_s(), density.axis_i());
    if gs.len() != gi.len() || (gs.spacing() - gi.spacing()).abs() > 1e-12 * gs.spacing() {
        return Err(Error::IncompatibleAxes(format!(
            "rotation needs equal axes, got {} cells of {} and {} cells of {}",
            gs.len(),
            gs.spacing(),
            gi.len(),
            gi.spacing()
        )));
    }
    let n = gs.len();
    let spacing = gs.spacing() * FRAC_1_SQRT_2;
    let extent = 2.0 * n as f64 * spacing;
    let axis_plus = Grid1D::new(
        2 * n,
        extent,
        (gs.center() + gi.center()) * FRAC_1_SQRT_2,
        gs.unit(),
    )?;
    let axis_minus = Grid1D::new(
        2 * n,
        extent,
        (gs.center() - gi.center()) * FRAC_1_SQRT_2,
        gs.unit(),
    )?;

    let m = 2 * n;
    let index = |axis: &Grid1D, u: f64| (u - axis.coord(0)) / spacing;
    let mut mass = Array2::<f64>::zeros((m, m));
    let coords_s = gs.coords();
    let coords_i = gi.coords();
    for ((j, k), &w) in density.mass().indexed_iter() {
        if w == 0.0 {
            continue;
        }
        let (s, i) = (coords_s[j], coords_i[k]);
        let p = index(&axis_plus, (s + i) * FRAC_1_SQRT_2);
        let q = index(&axis_minus, (s - i) * FRAC_1_SQRT_2);
        let (p0, q0) = (p.floor(), q.floor());
        let (tp, tq) = (p - p0, q - q0);
        let (p0, q0) = (p0 as isize, q0 as isize);
        for (dp, wp) in [(0, 1.0 - tp), (1, tp)] {
            for (dq, wq) in [(0, 1.0 - tq), (1, tq)] {
                let (a, b) = (p0 + dp, q0 + dq);
                let share = w * wp * wq;
                if share == 0.0 {
                    continue;
                }
                if a < 0 || b < 0 || a >= m as isize || b >= m as isize {
                    return Err(Error::IncompatibleAxes(
                        "rotated point falls outside the output axes".into(),
                    ));
                }
                mass[[a as usize, b as usize]] += share;
            }
        }
    }
    Ok(RotatedDistribution {
        axis_plus,
        axis_minus,
        basis: density.basis(),
        mass,
    })
}

/// One-dimensional probability mass per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Marginal {
    pub axis: Grid1D,
    pub mass: Array1<f64>,
}

impl Marginal {
    fn from_mass(axis: Grid1D, mass: Array1<f64>) -> Self {
        let total = mass.sum();
        let mass = if total > 0.0 { mass / total } else { mass };
        Self { axis, mass }
    }

    /// Probability per unit length.
    pub fn density(&self) -> Array1<f64> {
        &self.mass / self.axis.spacing()
    }

    pub fn mean(&self) -> f64 {
        self.central_moment_about(0.0, 1)
    }

    pub fn variance(&self) -> f64 {
        self.central_moment_about(self.mean(), 2)
    }

    /// Standardized third moment `γ₁`.
    pub fn skewness(&self) -> f64 {
        let mean = self.mean();
        let var = self.central_moment_about(mean, 2);
        self.central_moment_about(mean, 3) / var.powf(1.5)
    }

    fn central_moment_about(&self, about: f64, power: i32) -> f64 {
        self.mass
            .iter()
            .enumerate()
            .map(|(j, w)| w * (self.axis.coord(j) - about).powi(power))
            .sum()
    }
}

/// Signal and idler marginals, each normalized to 1.
pub fn marginals(density: &JointDensity) -> (Marginal, Marginal) {
    (
        Marginal::from_mass(*density.axis_s(), density.mass().sum_axis(Axis(1))),
        Marginal::from_mass(*density.axis_i(), density.mass().sum_axis(Axis(0))),
    )
}

/// Standardized moments of `u₋ = (u_s − u_i)/√2` taken directly from the
/// unrotated density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinusStatistics {
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
}

pub fn minus_statistics(density: &JointDensity) -> MinusStatistics {
    let cs = density.axis_s().coords();
    let ci = density.axis_i().coords();
    let total = density.total();
    let moment = |f: &dyn Fn(f64) -> f64| -> f64 {
        let mut acc = 0.0;
        for ((j, k), w) in density.mass().indexed_iter() {
            acc += w * f((cs[j] - ci[k]) * FRAC_1_SQRT_2);
        }
        acc / total
    };
    let mean = moment(&|u| u);
    let variance = moment(&|u| (u - mean).powi(2));
    let third = moment(&|u| (u - mean).powi(3));
    MinusStatistics {
        mean,
        variance,
        skewness: third / variance.powf(1.5),
    }
}

/// Variance of `u₋` along the slice `u_s = −u_i`, read from the cells
/// `(m, n−1−m)` of a grid whose two axes coincide and are centered on zero.
pub fn anti_diagonal_slice_variance(density: &JointDensity) -> Result<f64> {
    let (gs, gi) = (density.axis_s(), density.axis_i());
    if gs != gi || !gs.is_symmetric_about_zero() {
        return Err(Error::IncompatibleAxes(
            "anti-diagonal slice needs identical zero-centered axes".into(),
        ));
    }
    let n = gs.len();
    let mut total = 0.0;
    let mut first = 0.0;
    let mut second = 0.0;
    for m in 0..n {
        let w = density.mass()[[m, n - 1 - m]];
        let u = SQRT_2 * gs.coord(m);
        total += w;
        first += w * u;
        second += w * u * u;
    }
    if total <= 0.0 {
        return Err(Error::EstimationFailed(
            "no probability on the anti-diagonal".into(),
        ));
    }
    let mean = first / total;
    Ok(second / total - mean * mean)
}
