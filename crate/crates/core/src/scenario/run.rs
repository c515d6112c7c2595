use super::config::{CorrelationSpec, ImagingSpec, ScenarioConfig, ScenarioKind};
use crate::aberration::{apply_all, Arm, ArmAssignment, PhaseProfile, APPARATUS_SIGNAL_DEFOCUS};
use crate::analytics::{
    evaluate_witness, fit_bivariate_gaussian, monte_carlo_errors, predicted_delta_x_minus_sq,
    predicted_marginal_delta_x_minus_sq, GaussianFitReport, WitnessReport,
};
use crate::detection::{slit_scan, CoincidenceHistogram};
use crate::error::Result;
use crate::ghost::{run_ghost_scenario, GhostImageResult, GhostObject, GhostScenario};
use crate::grid::{Grid1D, JointDensity};
use crate::spdc::synthesize_state;
use crate::transform::{
    anti_diagonal_slice_variance, minus_statistics, rotate_to_pm, to_position_basis,
    RotatedDistribution,
};

/// Moments read straight off the simulated grids.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridStatistics {
    /// Variance of `x₋` over the whole position distribution.
    pub marginal_delta_x_minus_sq: f64,
    /// Variance of `x₋` along `x_s = −x_i`.
    pub slice_delta_x_minus_sq: f64,
    pub x_minus_skewness: f64,
    pub delta_kappa_plus_sq: f64,
    /// Closed-form slice and marginal widths, when the phases are an
    /// opposite pair of pure quadratics.
    pub predicted_slice_delta_x_minus_sq: Option<f64>,
    pub predicted_marginal_delta_x_minus_sq: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct CorrelationOutcome {
    pub momentum_density: JointDensity,
    pub position_density: JointDensity,
    pub rotated_position: RotatedDistribution,
    pub histogram_position: CoincidenceHistogram,
    pub histogram_momentum: CoincidenceHistogram,
    pub statistics: GridStatistics,
    pub fit_position: Option<GaussianFitReport>,
    pub fit_momentum: Option<GaussianFitReport>,
    pub witness: Option<WitnessReport>,
}

#[derive(Debug, Clone)]
pub struct ImagingOutcome {
    pub image: GhostImageResult,
}

#[derive(Debug, Clone)]
pub enum ScenarioOutcome {
    Correlation(Box<CorrelationOutcome>),
    Imaging(Box<ImagingOutcome>),
}

/// Runs a scenario end to end.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ScenarioOutcome> {
    let axis = Grid1D::momentum_for_position_extent(cfg.grid.points, cfg.grid.position_extent_mm)?;
    match &cfg.kind {
        ScenarioKind::Correlation(spec) => {
            run_correlation(cfg, spec, axis).map(|o| ScenarioOutcome::Correlation(Box::new(o)))
        }
        ScenarioKind::Imaging(spec) => {
            run_imaging(cfg, spec, axis).map(|o| ScenarioOutcome::Imaging(Box::new(o)))
        }
    }
}

/// `β` with `φ″_s(0) = −φ″_i(0) = β` when the pair is pure quadratic.
fn opposite_quadratic(signal: &PhaseProfile, idler: &PhaseProfile) -> Option<f64> {
    let pure = |p: &PhaseProfile| {
        p.derivatives()
            .iter()
            .enumerate()
            .all(|(n, &c)| n == 2 || c == 0.0)
    };
    let beta = signal.derivative(2);
    (pure(signal) && pure(idler) && beta == -idler.derivative(2)).then_some(beta)
}

fn run_correlation(
    cfg: &ScenarioConfig,
    spec: &CorrelationSpec,
    axis: Grid1D,
) -> Result<CorrelationOutcome> {
    let signal = if spec.residual_defocus {
        let curvature = spec.signal.derivative(2) + APPARATUS_SIGNAL_DEFOCUS;
        spec.signal.clone().with_derivative(2, curvature)?
    } else {
        spec.signal.clone()
    };
    let state = synthesize_state(&cfg.crystal, &cfg.crystal.pump_profile(), &axis, &axis)?;
    let aberrated = apply_all(
        &state,
        &[
            ArmAssignment::new(Arm::Signal, signal.clone()),
            ArmAssignment::new(Arm::Idler, spec.idler.clone()),
        ],
    )?;
    let momentum_density = aberrated.density();
    let position_density = to_position_basis(&aberrated)?.density();
    let rotated_position = rotate_to_pm(&position_density)?;

    let minus = minus_statistics(&position_density);
    let beta = opposite_quadratic(&signal, &spec.idler);
    let statistics = GridStatistics {
        marginal_delta_x_minus_sq: minus.variance,
        slice_delta_x_minus_sq: anti_diagonal_slice_variance(&position_density)?,
        x_minus_skewness: minus.skewness,
        delta_kappa_plus_sq: momentum_density.moments().plus_variance(),
        predicted_slice_delta_x_minus_sq: beta.map(|b| predicted_delta_x_minus_sq(b, &cfg.crystal)),
        predicted_marginal_delta_x_minus_sq: beta
            .map(|b| predicted_marginal_delta_x_minus_sq(b, &cfg.crystal)),
    };

    let histogram_position = slit_scan(&position_density, &cfg.scan)?;
    let mut momentum_scan = cfg.scan.through_lens(&cfg.lens);
    momentum_scan.seed = cfg.scan.seed.wrapping_add(1);
    let histogram_momentum = slit_scan(&momentum_density, &momentum_scan)?;

    let (fit_position, fit_momentum, witness) = if cfg.analysis.fit {
        let fit = |hist: &CoincidenceHistogram, seed: u64| -> Result<GaussianFitReport> {
            let report = fit_bivariate_gaussian(hist)?;
            if cfg.analysis.monte_carlo_resamples == 0 {
                return Ok(report);
            }
            let errors =
                monte_carlo_errors(hist, &report, cfg.analysis.monte_carlo_resamples, seed)?;
            Ok(report.with_errors(&errors))
        };
        let fp = fit(&histogram_position, cfg.analysis.seed)?;
        let fm = fit(&histogram_momentum, cfg.analysis.seed.wrapping_add(1))?;
        let w = evaluate_witness(&fp, &fm)?;
        (Some(fp), Some(fm), Some(w))
    } else {
        (None, None, None)
    };

    Ok(CorrelationOutcome {
        momentum_density,
        position_density,
        rotated_position,
        histogram_position,
        histogram_momentum,
        statistics,
        fit_position,
        fit_momentum,
        witness,
    })
}

fn run_imaging(cfg: &ScenarioConfig, spec: &ImagingSpec, axis: Grid1D) -> Result<ImagingOutcome> {
    let scenario = GhostScenario {
        crystal: cfg.crystal,
        pump: cfg.crystal.pump_profile(),
        grid: axis,
        theta_s: spec.theta_s.clone(),
        theta_i: spec.theta_i.clone(),
        object: GhostObject::Bars(spec.object),
        lens: cfg.lens,
        scan: cfg.scan,
    };
    Ok(ImagingOutcome {
        image: run_ghost_scenario(&scenario)?,
    })
}
