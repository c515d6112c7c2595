//! Browser bindings: the joint position density under per-arm phases, a
//! ghost-imaging trace, and closed-form width curves.

use biphoton::aberration::{apply_all, Arm, ArmAssignment, PhaseDomain, PhaseProfile};
use biphoton::analytics::{
    predicted_delta_x_minus_sq, predicted_delta_x_minus_sq_expansion,
    predicted_marginal_delta_x_minus_sq,
};
use biphoton::detection::{NoiseModel, SlitScanConfig};
use biphoton::ghost::{run_ghost_scenario, BarObject, GhostObject, GhostScenario};
use biphoton::spdc::synthesize_state;
use biphoton::transform::{minus_statistics, to_position_basis};
use biphoton::{CrystalPumpConfig, FourierLens, Grid1D};
use wasm_bindgen::prelude::*;

const CORRELATION_POINTS: usize = 1024;
const CORRELATION_EXTENT_MM: f64 = 10.0;
const IMAGE_POINTS: usize = 128;
const GHOST_POINTS: usize = 1024;
const GHOST_EXTENT_MM: f64 = 8.0;

fn profile(domain: PhaseDomain, quadratic: f64, cubic: f64) -> Result<PhaseProfile, String> {
    PhaseProfile::zero(domain)
        .with_derivative(2, quadratic)
        .and_then(|p| p.with_derivative(3, cubic))
        .map_err(|e| e.to_string())
}

fn crystal(pump_width: f64) -> CrystalPumpConfig {
    CrystalPumpConfig {
        pump_width,
        ..CrystalPumpConfig::default()
    }
}

/// Joint position density, block-summed to a square image and scaled to a
/// peak of 1. Rows follow `x_s`, columns `x_i`, both increasing.
#[wasm_bindgen]
pub struct DensityImage {
    size: usize,
    half_extent: f64,
    values: Vec<f64>,
    delta_x_minus_sq: f64,
    skewness: f64,
    predicted: Option<f64>,
}

#[wasm_bindgen]
impl DensityImage {
    #[wasm_bindgen(getter)]
    pub fn size(&self) -> usize {
        self.size
    }

    /// Half-width of the square, mm.
    #[wasm_bindgen(getter)]
    pub fn half_extent(&self) -> f64 {
        self.half_extent
    }

    pub fn values(&self) -> Vec<f64> {
        self.values.clone()
    }

    /// Variance of `x₋` over the whole simulated grid, mm².
    #[wasm_bindgen(getter)]
    pub fn delta_x_minus_sq(&self) -> f64 {
        self.delta_x_minus_sq
    }

    #[wasm_bindgen(getter)]
    pub fn skewness(&self) -> f64 {
        self.skewness
    }

    /// Closed-form marginal width when the phases are an opposite pair of
    /// quadratics, otherwise NaN.
    #[wasm_bindgen(getter)]
    pub fn predicted(&self) -> f64 {
        self.predicted.unwrap_or(f64::NAN)
    }
}

pub fn compute_position_density(
    pump_width: f64,
    signal_quadratic: f64,
    signal_cubic: f64,
    idler_quadratic: f64,
    idler_cubic: f64,
) -> Result<DensityImage, String> {
    let cfg = crystal(pump_width);
    let axis = Grid1D::momentum_for_position_extent(CORRELATION_POINTS, CORRELATION_EXTENT_MM)
        .map_err(|e| e.to_string())?;
    let state =
        synthesize_state(&cfg, &cfg.pump_profile(), &axis, &axis).map_err(|e| e.to_string())?;
    let aberrated = apply_all(
        &state,
        &[
            ArmAssignment::new(
                Arm::Signal,
                profile(PhaseDomain::Momentum, signal_quadratic, signal_cubic)?,
            ),
            ArmAssignment::new(
                Arm::Idler,
                profile(PhaseDomain::Momentum, idler_quadratic, idler_cubic)?,
            ),
        ],
    )
    .map_err(|e| e.to_string())?;
    let density = to_position_basis(&aberrated)
        .map_err(|e| e.to_string())?
        .density();
    let stats = minus_statistics(&density);
    let coarse = density
        .coarsen(CORRELATION_POINTS / IMAGE_POINTS)
        .map_err(|e| e.to_string())?;
    let peak = coarse.mass().iter().cloned().fold(0.0, f64::max);
    let values = coarse.mass().iter().map(|m| m / peak).collect();
    let opposite =
        signal_cubic == 0.0 && idler_cubic == 0.0 && signal_quadratic == -idler_quadratic;
    Ok(DensityImage {
        size: IMAGE_POINTS,
        half_extent: 0.5 * coarse.axis_s().extent(),
        values,
        delta_x_minus_sq: stats.variance,
        skewness: stats.skewness,
        predicted: opposite.then(|| predicted_marginal_delta_x_minus_sq(signal_quadratic, &cfg)),
    })
}

/// Momentum-domain phases `φ″`, `φ‴` (mm², mm³) on each arm.
#[wasm_bindgen]
pub fn position_density(
    pump_width: f64,
    signal_quadratic: f64,
    signal_cubic: f64,
    idler_quadratic: f64,
    idler_cubic: f64,
) -> Result<DensityImage, JsError> {
    compute_position_density(
        pump_width,
        signal_quadratic,
        signal_cubic,
        idler_quadratic,
        idler_cubic,
    )
    .map_err(|e| JsError::new(&e))
}

/// Noiseless idler scan behind the three-bar object.
#[wasm_bindgen]
pub struct GhostTrace {
    positions: Vec<f64>,
    rates: Vec<f64>,
    visibility: f64,
    period: Option<f64>,
}

#[wasm_bindgen]
impl GhostTrace {
    pub fn positions(&self) -> Vec<f64> {
        self.positions.clone()
    }

    pub fn rates(&self) -> Vec<f64> {
        self.rates.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn visibility(&self) -> f64 {
        self.visibility
    }

    /// Estimated bar period, mm, or NaN when none is found.
    #[wasm_bindgen(getter)]
    pub fn period(&self) -> f64 {
        self.period.unwrap_or(f64::NAN)
    }
}

pub fn compute_ghost_trace(theta_s: f64, theta_i: f64) -> Result<GhostTrace, String> {
    let cfg = CrystalPumpConfig::default();
    let scenario = GhostScenario {
        crystal: cfg,
        pump: cfg.pump_profile(),
        grid: Grid1D::momentum_for_position_extent(GHOST_POINTS, GHOST_EXTENT_MM)
            .map_err(|e| e.to_string())?,
        theta_s: profile(PhaseDomain::Position, theta_s, 0.0)?,
        theta_i: profile(PhaseDomain::Position, theta_i, 0.0)?,
        object: GhostObject::Bars(BarObject::default()),
        lens: FourierLens::apparatus_default(),
        scan: SlitScanConfig {
            noise: NoiseModel::Noiseless,
            step: 0.05,
            ..SlitScanConfig::default()
        },
    };
    let image = run_ghost_scenario(&scenario).map_err(|e| e.to_string())?;
    Ok(GhostTrace {
        positions: image.positions,
        rates: image.rates,
        visibility: image.visibility,
        period: image.period,
    })
}

/// Position-domain curvatures `θ″` (mm⁻²) on each arm.
#[wasm_bindgen]
pub fn ghost_trace(theta_s: f64, theta_i: f64) -> Result<GhostTrace, JsError> {
    compute_ghost_trace(theta_s, theta_i).map_err(|e| JsError::new(&e))
}

/// `Δx₋²` against `β` for an opposite quadratic pair: exact slice width,
/// its second-order expansion and the marginal width.
#[wasm_bindgen]
pub struct WidthCurves {
    beta: Vec<f64>,
    slice: Vec<f64>,
    expansion: Vec<f64>,
    marginal: Vec<f64>,
}

#[wasm_bindgen]
impl WidthCurves {
    pub fn beta(&self) -> Vec<f64> {
        self.beta.clone()
    }

    pub fn slice(&self) -> Vec<f64> {
        self.slice.clone()
    }

    pub fn expansion(&self) -> Vec<f64> {
        self.expansion.clone()
    }

    pub fn marginal(&self) -> Vec<f64> {
        self.marginal.clone()
    }
}

#[wasm_bindgen]
pub fn width_curves(alpha: f64, pump_width: f64, beta_max: f64, samples: usize) -> WidthCurves {
    let cfg = CrystalPumpConfig {
        alpha,
        ..crystal(pump_width)
    };
    let samples = samples.max(2);
    let beta: Vec<f64> = (0..samples)
        .map(|k| -beta_max + 2.0 * beta_max * k as f64 / (samples - 1) as f64)
        .collect();
    WidthCurves {
        slice: beta
            .iter()
            .map(|&b| predicted_delta_x_minus_sq(b, &cfg))
            .collect(),
        expansion: beta
            .iter()
            .map(|&b| predicted_delta_x_minus_sq_expansion(b, &cfg))
            .collect(),
        marginal: beta
            .iter()
            .map(|&b| predicted_marginal_delta_x_minus_sq(b, &cfg))
            .collect(),
        beta,
    }
}
