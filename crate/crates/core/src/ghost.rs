//! Coincidence (ghost) imaging of a bar object with position-domain
//! aberrations on both arms.
//!
//! The object sits in the signal arm's Fourier plane in front of a bucket
//! detector; the idler is scanned with a slit in its own Fourier plane.

use ndarray::{Array1, Axis};
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::aberration::{apply_all, Arm, ArmAssignment, PhaseDomain, PhaseProfile};
use crate::detection::{draw_poisson, scan_profile, slit_windows, NoiseModel, SlitScanConfig};
use crate::error::{Error, Result};
use crate::grid::{Grid1D, JointDensity};
use crate::spdc::{synthesize_state, CrystalPumpConfig, PumpProfile};
use crate::transform::{to_momentum_basis, to_position_basis};
use crate::units::FourierLens;

/// Equally spaced opaque bars on a clear background.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarObject {
    pub bar_width: f64,
    pub period: f64,
    pub n_bars: usize,
    pub center: f64,
}

impl Default for BarObject {
    fn default() -> Self {
        Self {
            bar_width: 0.4,
            period: 0.8,
            n_bars: 3,
            center: 0.0,
        }
    }
}

impl BarObject {
    pub fn validate(&self) -> Result<()> {
        if !(self.bar_width > 0.0 && self.bar_width < self.period && self.period.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "bars need 0 < width < period, got width {} and period {}",
                self.bar_width, self.period
            )));
        }
        if self.n_bars == 0 {
            return Err(Error::InvalidParameter("at least one bar is needed".into()));
        }
        if !self.center.is_finite() {
            return Err(Error::InvalidParameter(
                "object center must be finite".into(),
            ));
        }
        Ok(())
    }

    /// `[start, end)` of each bar.
    pub fn bars(&self) -> Vec<(f64, f64)> {
        let mid = (self.n_bars as f64 - 1.0) / 2.0;
        (0..self.n_bars)
            .map(|k| {
                let c = self.center + (k as f64 - mid) * self.period;
                (c - 0.5 * self.bar_width, c + 0.5 * self.bar_width)
            })
            .collect()
    }

    /// Outer edges of the bar pattern.
    pub fn span(&self) -> (f64, f64) {
        let half = 0.5 * ((self.n_bars as f64 - 1.0) * self.period + self.bar_width);
        (self.center - half, self.center + half)
    }

    /// `t(ρ)`: 0 on a bar, 1 elsewhere.
    pub fn transmission(&self, rho: f64) -> f64 {
        if self.bars().iter().any(|&(a, b)| rho >= a && rho < b) {
            0.0
        } else {
            1.0
        }
    }

    /// Transmitted fraction of the interval `[a, b]`.
    pub fn coverage(&self, a: f64, b: f64) -> f64 {
        let blocked: f64 = self
            .bars()
            .iter()
            .map(|&(lo, hi)| (b.min(hi) - a.max(lo)).max(0.0))
            .sum();
        1.0 - blocked / (b - a)
    }
}

/// What sits in front of the bucket detector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GhostObject {
    Bars(BarObject),
    Clear,
    Opaque,
}

impl GhostObject {
    fn coverage(&self, a: f64, b: f64) -> f64 {
        match self {
            GhostObject::Bars(bars) => bars.coverage(a, b),
            GhostObject::Clear => 1.0,
            GhostObject::Opaque => 0.0,
        }
    }
}

/// Full description of an imaging run. `scan` lengths are Fourier-plane
/// mm on the idler side; only `range_i` is used.
#[derive(Debug, Clone, PartialEq)]
pub struct GhostScenario {
    pub crystal: CrystalPumpConfig,
    pub pump: PumpProfile,
    /// Momentum axis used for both photons.
    pub grid: Grid1D,
    pub theta_s: PhaseProfile,
    pub theta_i: PhaseProfile,
    pub object: GhostObject,
    pub lens: FourierLens,
    pub scan: SlitScanConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GhostImageResult {
    /// Idler slit centers in the Fourier plane, mm.
    pub positions: Vec<f64>,
    pub rates: Vec<f64>,
    pub visibility: f64,
    pub low_modulation: bool,
    pub period: Option<f64>,
    /// Probability that the signal photon passes the object.
    pub transmitted_mass: f64,
    /// Joint position density after the aberrations.
    pub position_density: JointDensity,
    /// Joint momentum density after the aberrations, before the object.
    pub momentum_density: JointDensity,
}

/// Half-width of the region that holds the bar image.
fn modulated_window(object: &GhostObject) -> Option<(f64, f64)> {
    match object {
        // Momentum anticorrelation mirrors the object in the idler arm.
        GhostObject::Bars(b) => {
            let (lo, hi) = b.span();
            Some((-hi, -lo))
        }
        _ => None,
    }
}

/// Synthesis, position-domain phases, object, bucket and idler scan.
pub fn run_ghost_scenario(scenario: &GhostScenario) -> Result<GhostImageResult> {
    for theta in [&scenario.theta_s, &scenario.theta_i] {
        if theta.domain() != PhaseDomain::Position {
            return Err(Error::DomainMismatch {
                profile: theta.domain(),
                state: crate::grid::Basis::Position,
                wanted: crate::grid::Basis::Position,
            });
        }
    }
    scenario.scan.validate()?;
    if let GhostObject::Bars(b) = &scenario.object {
        b.validate()?;
    }

    let grid = &scenario.grid;
    let state = synthesize_state(&scenario.crystal, &scenario.pump, grid, grid)?;
    let position = to_position_basis(&state)?;
    let aberrated = apply_all(
        &position,
        &[
            ArmAssignment::new(Arm::Signal, scenario.theta_s.clone()),
            ArmAssignment::new(Arm::Idler, scenario.theta_i.clone()),
        ],
    )?;
    let momentum = to_momentum_basis(&aberrated)?;
    let momentum_density = momentum.density();

    // Object on the signal Fourier-plane coordinate.
    let lens = &scenario.lens;
    let axis_s = momentum_density.axis_s();
    let (rho_lo, rho_hi) = (
        lens.position(axis_s.lower_edge()),
        lens.position(axis_s.upper_edge()),
    );
    if let GhostObject::Bars(b) = &scenario.object {
        let (lo, hi) = b.span();
        if lo < rho_lo || hi > rho_hi {
            return Err(Error::OutOfRange(format!(
                "object [{lo}, {hi}] mm is clipped by the grid's Fourier plane [{rho_lo:.3}, {rho_hi:.3}] mm"
            )));
        }
    }
    let half_cell = 0.5 * lens.position(axis_s.spacing());
    let transmission: Array1<f64> = (0..axis_s.len())
        .map(|j| {
            let rho = lens.position(axis_s.coord(j));
            scenario.object.coverage(rho - half_cell, rho + half_cell)
        })
        .collect();

    // Bucket: idler mass conditioned on the signal passing the object.
    let mass = momentum_density.normalized()?;
    let weighted = mass.mass() * &transmission.insert_axis(Axis(1));
    let idler = weighted.sum_axis(Axis(0));
    let transmitted_mass = idler.sum();

    let scan = scenario.scan.through_lens(lens);
    let kappa_positions = scan.range_i.positions(scan.step);
    let windows = slit_windows(mass.axis_i(), &kappa_positions, scan.slit_width)?;
    let expected = scan_profile(&idler, &windows) * scan.total_counts;
    let rates: Vec<f64> = match scan.noise {
        NoiseModel::Noiseless => expected.to_vec(),
        NoiseModel::Poisson => expected
            .iter()
            .enumerate()
            .map(|(b, &m)| draw_poisson(m, scan.seed, b as u64))
            .collect::<Result<_>>()?,
    };
    let positions = scenario.scan.range_i.positions(scenario.scan.step);

    let (visibility, low_modulation) = match modulated_window(&scenario.object) {
        Some(window) => {
            let v = visibility_in(&positions, &rates, window)?;
            (v.value, v.low_modulation)
        }
        None => {
            let v = visibility(&rates);
            (v.value, v.low_modulation)
        }
    };
    let period = period_estimate(&positions, &rates).ok();

    Ok(GhostImageResult {
        positions,
        rates,
        visibility,
        low_modulation,
        period,
        transmitted_mass,
        position_density: aberrated.density(),
        momentum_density,
    })
}

/// Michelson contrast with a flag for traces flat within shot noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Visibility {
    pub value: f64,
    pub low_modulation: bool,
}

/// `(max − min)/(max + min)` of the whole trace. A swing below three
/// Poisson standard deviations of the mean counts as no modulation.
pub fn visibility(trace: &[f64]) -> Visibility {
    let none = Visibility {
        value: 0.0,
        low_modulation: true,
    };
    if trace.is_empty() {
        return none;
    }
    let max = trace.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = trace.iter().copied().fold(f64::INFINITY, f64::min);
    let mean = trace.iter().sum::<f64>() / trace.len() as f64;
    if max + min <= 0.0 || max - min < 3.0 * mean.sqrt() {
        return none;
    }
    Visibility {
        value: (max - min) / (max + min),
        low_modulation: false,
    }
}

/// [`visibility`] restricted to positions inside `window`.
pub fn visibility_in(positions: &[f64], rates: &[f64], window: (f64, f64)) -> Result<Visibility> {
    let slack = 1e-9 * (window.1 - window.0).abs().max(1.0);
    let inside: Vec<f64> = positions
        .iter()
        .zip(rates)
        .filter(|(x, _)| **x >= window.0 - slack && **x <= window.1 + slack)
        .map(|(_, r)| *r)
        .collect();
    if inside.is_empty() {
        return Err(Error::OutOfRange(format!(
            "no trace samples inside [{}, {}]",
            window.0, window.1
        )));
    }
    Ok(visibility(&inside))
}

/// Period of the strongest spectral component of an equally spaced trace.
///
/// Only frequencies with at least two cycles across the trace are
/// searched. The peak is refined by zero padding and a parabola through
/// the largest bin and its neighbours.
pub fn period_estimate(positions: &[f64], rates: &[f64]) -> Result<f64> {
    let n = positions.len();
    if n < 4 || rates.len() != n {
        return Err(Error::EstimationFailed(format!(
            "need at least 4 equally spaced samples, got {n}"
        )));
    }
    let step = positions[1] - positions[0];
    let span = step * n as f64;
    let mean = rates.iter().sum::<f64>() / n as f64;
    let padded = (16 * n).next_power_of_two();
    let mut buffer: Vec<Complex64> = rates
        .iter()
        .map(|r| Complex64::new(r - mean, 0.0))
        .chain(std::iter::repeat(Complex64::default()))
        .take(padded)
        .collect();
    FftPlanner::new()
        .plan_fft_forward(padded)
        .process(&mut buffer);
    let power: Vec<f64> = buffer.iter().map(|z| z.norm_sqr()).collect();

    let df = 1.0 / (padded as f64 * step);
    let first = ((2.0 / span) / df).ceil() as usize;
    let last = padded / 2;
    if first + 1 >= last {
        return Err(Error::EstimationFailed(
            "trace too short for two periods".into(),
        ));
    }
    let (peak, &peak_power) = power[first..last]
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, p)| (k + first, p))
        .expect("non-empty band");
    let total: f64 = power[1..last].iter().sum();
    if peak_power.is_nan()
        || peak_power <= 0.0
        || peak_power < 1e-12 * total.max(f64::MIN_POSITIVE)
        || total == 0.0
    {
        return Err(Error::EstimationFailed(
            "trace has no dominant frequency".into(),
        ));
    }
    let (a, b, c) = (power[peak - 1], power[peak], power[peak + 1]);
    let denom = a - 2.0 * b + c;
    let shift = if denom < 0.0 {
        0.5 * (a - c) / denom
    } else {
        0.0
    };
    Ok(1.0 / ((peak as f64 + shift) * df))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::TAU;

    #[test]
    fn bar_geometry() {
        let b = BarObject::default();
        let expected = [(-1.0, -0.6), (-0.2, 0.2), (0.6, 1.0)];
        for (got, want) in b.bars().iter().zip(expected) {
            assert_relative_eq!(got.0, want.0, epsilon = 1e-12);
            assert_relative_eq!(got.1, want.1, epsilon = 1e-12);
        }
        assert_eq!(b.span(), (-1.0, 1.0));
        assert_eq!(b.transmission(0.0), 0.0);
        assert_eq!(b.transmission(0.4), 1.0);
        assert_relative_eq!(b.coverage(0.1, 0.3), 0.5);
        assert!(BarObject {
            bar_width: 0.8,
            ..b
        }
        .validate()
        .is_err());
        assert!(BarObject { n_bars: 0, ..b }.validate().is_err());
    }

    #[test]
    fn square_wave_has_full_contrast() {
        let trace: Vec<f64> = (0..40)
            .map(|k| if (k / 4) % 2 == 0 { 100.0 } else { 0.0 })
            .collect();
        let v = visibility(&trace);
        assert_eq!(v.value, 1.0);
        assert!(!v.low_modulation);
    }

    #[test]
    fn constant_trace_has_no_contrast() {
        let v = visibility(&[500.0; 30]);
        assert_eq!(v.value, 0.0);
        assert!(v.low_modulation);
        assert!(visibility(&[0.0; 5]).low_modulation);
    }

    #[test]
    fn sinusoid_period() {
        let step = 0.1;
        let positions: Vec<f64> = (0..41).map(|k| -2.0 + k as f64 * step).collect();
        let rates: Vec<f64> = positions
            .iter()
            .map(|x| 10.0 + 3.0 * (TAU * x / 0.8).cos())
            .collect();
        let p = period_estimate(&positions, &rates).unwrap();
        // one spectral bin of the unpadded trace
        let bin = 0.8 * 0.8 / (41.0 * step);
        assert!((p - 0.8).abs() < bin, "{p}");
    }

    #[test]
    fn flat_trace_has_no_period() {
        let positions: Vec<f64> = (0..41).map(|k| k as f64 * 0.1).collect();
        assert!(matches!(
            period_estimate(&positions, &[7.0; 41]),
            Err(Error::EstimationFailed(_))
        ));
    }

    fn scenario(theta_i: f64, theta_s: f64, object: GhostObject) -> GhostScenario {
        let crystal = CrystalPumpConfig::default();
        GhostScenario {
            crystal,
            pump: crystal.pump_profile(),
            grid: Grid1D::momentum_for_position_extent(1024, 8.0).unwrap(),
            theta_s: PhaseProfile::quadratic(PhaseDomain::Position, theta_s).unwrap(),
            theta_i: PhaseProfile::quadratic(PhaseDomain::Position, theta_i).unwrap(),
            object,
            lens: FourierLens::apparatus_default(),
            scan: SlitScanConfig {
                noise: NoiseModel::Noiseless,
                ..SlitScanConfig::default()
            },
        }
    }

    #[test]
    fn opaque_object_blocks_everything() {
        let r = run_ghost_scenario(&scenario(0.0, 0.0, GhostObject::Opaque)).unwrap();
        assert!(r.rates.iter().all(|&x| x == 0.0));
        assert_eq!(r.transmitted_mass, 0.0);
    }

    #[test]
    fn clear_object_gives_flat_image() {
        let r = run_ghost_scenario(&scenario(0.0, 0.0, GhostObject::Clear)).unwrap();
        assert_relative_eq!(r.transmitted_mass, 1.0, max_relative = 1e-12);
        // Only the broad idler envelope remains: one smooth hump, no bars.
        assert!(r.visibility < 0.1, "{}", r.visibility);
        let n = r.rates.len();
        let peak = (0..n)
            .max_by(|&a, &b| r.rates[a].total_cmp(&r.rates[b]))
            .unwrap();
        assert!(r.rates[..=peak].windows(2).all(|w| w[0] <= w[1]));
        assert!(r.rates[peak..].windows(2).all(|w| w[0] >= w[1]));
        for k in 0..n {
            assert_relative_eq!(r.rates[k], r.rates[n - 1 - k], max_relative = 1e-9);
        }
    }

    #[test]
    fn totals_follow_transmitted_mass() {
        let mut s = scenario(0.0, 0.0, GhostObject::Bars(BarObject::default()));
        // Scan the whole idler Fourier plane with cell-sized slits.
        let lens = s.lens;
        let axis = s.grid;
        let cell = lens.position(axis.spacing());
        s.scan.slit_width = cell;
        s.scan.step = cell;
        s.scan.range_i = crate::detection::ScanRange::new(
            lens.position(axis.coord(0)),
            lens.position(axis.coord(axis.len() - 1)),
        );
        let r = run_ghost_scenario(&s).unwrap();
        let total: f64 = r.rates.iter().sum();
        assert_relative_eq!(
            total,
            r.transmitted_mass * s.scan.total_counts,
            max_relative = 1e-9
        );
        assert!(r.transmitted_mass < 1.0 && r.transmitted_mass > 0.0);
    }

    #[test]
    fn momentum_domain_theta_is_rejected() {
        let mut s = scenario(0.0, 0.0, GhostObject::Clear);
        s.theta_i = PhaseProfile::zero(PhaseDomain::Momentum);
        assert!(matches!(
            run_ghost_scenario(&s),
            Err(Error::DomainMismatch { .. })
        ));
    }

    #[test]
    fn clipped_object_is_rejected() {
        let s = scenario(
            0.0,
            0.0,
            GhostObject::Bars(BarObject {
                center: 100.0,
                ..BarObject::default()
            }),
        );
        assert!(matches!(run_ghost_scenario(&s), Err(Error::OutOfRange(_))));
    }
}
