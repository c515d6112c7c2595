//! Closed-form widths for the Gaussian-approximated two-photon state.
//!
//! `Δκ_p` below is the pump's angular-spectrum width
//! [`CrystalPumpConfig::pump_width`], zero for a plane wave.

use crate::spdc::CrystalPumpConfig;

fn plane_wave_width(cfg: &CrystalPumpConfig) -> f64 {
    let (l, kp, a) = (cfg.length_mm, cfg.pump_wavenumber, cfg.alpha);
    l * (a * a + 1.0) / (2.0 * kp * a)
}

/// Width `Δx₋²` of the position correlation along `x_s = −x_i` when the
/// arms carry `φ″_s(0) = −φ″_i(0) = β`:
///
/// `{[ℓα + k_pβ²Δκ_p²]² + ℓ²} / {2k_pℓα + 2k_p²β²Δκ_p²}`.
pub fn predicted_delta_x_minus_sq(beta: f64, cfg: &CrystalPumpConfig) -> f64 {
    let (l, kp) = (cfg.length_mm, cfg.pump_wavenumber);
    let y = l * cfg.alpha + kp * beta * beta * cfg.pump_width.powi(2);
    (y * y + l * l) / (2.0 * kp * y)
}

/// Coefficient of `β²Δκ_p²` in the second-order expansion of
/// [`predicted_delta_x_minus_sq`], `(α² − 1)/(2α²)`.
pub fn expansion_coefficient(alpha: f64) -> f64 {
    (alpha * alpha - 1.0) / (2.0 * alpha * alpha)
}

/// Second-order expansion of [`predicted_delta_x_minus_sq`] in `Δκ_p`.
pub fn predicted_delta_x_minus_sq_expansion(beta: f64, cfg: &CrystalPumpConfig) -> f64 {
    plane_wave_width(cfg) + expansion_coefficient(cfg.alpha) * beta * beta * cfg.pump_width.powi(2)
}

/// `|β|` at which [`predicted_delta_x_minus_sq`] is smallest:
/// `k_pβ²Δκ_p² = ℓ(1 − α)` for `α < 1`, otherwise zero.
pub fn minimizing_beta(cfg: &CrystalPumpConfig) -> f64 {
    if cfg.alpha >= 1.0 || cfg.pump_width == 0.0 {
        return 0.0;
    }
    (cfg.length_mm * (1.0 - cfg.alpha) / cfg.pump_wavenumber).sqrt() / cfg.pump_width
}

/// Marginal variance of `x₋ = (x_s − x_i)/√2` under the same cancelling
/// pair, `ℓ(α²+1)/(2k_pα) + β²Δκ_p²/2`. This is what a fit to the whole
/// joint distribution measures.
pub fn predicted_marginal_delta_x_minus_sq(beta: f64, cfg: &CrystalPumpConfig) -> f64 {
    plane_wave_width(cfg) + 0.5 * beta * beta * cfg.pump_width.powi(2)
}

/// Variance of the momentum difference `κ_s − κ_i`, `k_p/(αℓ)` in mm⁻².
/// The rotated coordinate `κ₋ = (κ_s − κ_i)/√2` has half of this.
pub fn delta_kappa_minus_sq(cfg: &CrystalPumpConfig) -> f64 {
    cfg.pump_wavenumber / (cfg.alpha * cfg.length_mm)
}

/// Variance of `κ₊ = (κ_s + κ_i)/√2`, `Δκ_p²/2`.
pub fn predicted_delta_kappa_plus_sq(cfg: &CrystalPumpConfig) -> f64 {
    0.5 * cfg.pump_width.powi(2)
}
