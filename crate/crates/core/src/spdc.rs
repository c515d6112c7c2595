//! Biphoton state synthesis: pump angular spectrum times phase matching.

use ndarray::Array2;
use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Basis, BiphotonGrid, Grid1D, JointDensity};
use crate::parallel::for_each_row;
use crate::units::wavenumber_from_wavelength;

/// Constant of the Gaussian fit to the phase-matching sinc.
pub const SINC_GAUSSIAN_ALPHA: f64 = 0.455;

/// Pump wavelength of the apparatus, mm.
pub const PUMP_WAVELENGTH_MM: f64 = 405e-6;

/// Degenerate signal/idler wavelength, mm.
pub const PHOTON_WAVELENGTH_MM: f64 = 810e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhaseMatching {
    ExactSinc,
    GaussianApprox,
}

/// Crystal and pump parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrystalPumpConfig {
    /// Crystal length ℓ, mm.
    pub length_mm: f64,
    /// Pump wavenumber k_p, mm⁻¹.
    pub pump_wavenumber: f64,
    /// Gaussian sinc-fit constant α.
    pub alpha: f64,
    /// Standard deviation of |𝓔|² in κ_s + κ_i, mm⁻¹. Zero means plane wave.
    pub pump_width: f64,
    pub phase_matching: PhaseMatching,
}

impl Default for CrystalPumpConfig {
    /// 2 mm crystal, 405 nm pump with a 1 mm (1/e² intensity) diameter.
    fn default() -> Self {
        Self {
            length_mm: 2.0,
            pump_wavenumber: wavenumber_from_wavelength(PUMP_WAVELENGTH_MM)
                .expect("constant wavelength is positive"),
            alpha: SINC_GAUSSIAN_ALPHA,
            pump_width: pump_width_from_diameter(1.0).expect("constant diameter is positive"),
            phase_matching: PhaseMatching::GaussianApprox,
        }
    }
}

impl CrystalPumpConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "{name} must be positive, got {v}"
                )))
            }
        };
        positive("crystal length", self.length_mm)?;
        positive("pump wavenumber", self.pump_wavenumber)?;
        positive("alpha", self.alpha)?;
        if !(self.pump_width.is_finite() && self.pump_width >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "pump width must be non-negative, got {}",
                self.pump_width
            )));
        }
        Ok(())
    }

    pub fn pump_profile(&self) -> PumpProfile {
        if self.pump_width == 0.0 {
            PumpProfile::PlaneWave
        } else {
            PumpProfile::Gaussian {
                width: self.pump_width,
            }
        }
    }
}

/// Angular-spectrum width of a collimated Gaussian pump with the given 1/e²
/// intensity diameter. With waist `w = d/2` the near field is
/// `exp(−x²/w²)`, whose angular intensity `exp(−κ²w²/2)` has std-dev `1/w`.
pub fn pump_width_from_diameter(diameter_mm: f64) -> Result<f64> {
    if !(diameter_mm.is_finite() && diameter_mm > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "pump diameter must be positive, got {diameter_mm}"
        )));
    }
    Ok(2.0 / diameter_mm)
}

/// Pump angular amplitude 𝓔 as a function of `u = κ_s + κ_i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PumpProfile {
    /// One-cell ridge on the `κ_s + κ_i = 0` anti-diagonal.
    PlaneWave,
    /// `𝓔(u) = exp(−u²/(4·width²))`, so |𝓔|² has std-dev `width`.
    Gaussian { width: f64 },
}

impl PumpProfile {
    pub fn amplitude(&self, u: f64) -> f64 {
        match *self {
            PumpProfile::PlaneWave => {
                if u == 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            PumpProfile::Gaussian { width } => (-u * u / (4.0 * width * width)).exp(),
        }
    }
}

/// Longitudinal wave-vector mismatch `(κ_s − κ_i)²/(2k_p)`.
pub fn delta_k_z(kappa_s: f64, kappa_i: f64, cfg: &CrystalPumpConfig) -> f64 {
    let d = kappa_s - kappa_i;
    d * d / (2.0 * cfg.pump_wavenumber)
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Unnormalized phase-matching function χ̃⁽²⁾(Δk_z).
///
/// `ExactSinc` returns `e^{−iℓΔk_z/2}·sinc(ℓΔk_z/2)`; `GaussianApprox`
/// returns `exp[−(ℓΔk_z/2)(α + i)]`. Both are `1` at `Δk_z = 0`.
pub fn phase_matching_amplitude(delta_kz: f64, cfg: &CrystalPumpConfig) -> Complex64 {
    let x = 0.5 * cfg.length_mm * delta_kz;
    match cfg.phase_matching {
        PhaseMatching::ExactSinc => Complex64::from_polar(sinc(x), -x),
        PhaseMatching::GaussianApprox => Complex64::from_polar((-cfg.alpha * x).exp(), -x),
    }
}

/// Joint momentum amplitude `𝓔(κ_s + κ_i)·χ̃⁽²⁾(Δk_z)` on the given grids,
/// normalized, with `H_s = H_i = 1`.
pub fn synthesize_state(
    cfg: &CrystalPumpConfig,
    pump: &PumpProfile,
    grid_s: &Grid1D,
    grid_i: &Grid1D,
) -> Result<BiphotonGrid> {
    cfg.validate()?;
    match (pump, cfg.pump_profile()) {
        (PumpProfile::PlaneWave, PumpProfile::PlaneWave) => {}
        (PumpProfile::Gaussian { width }, PumpProfile::Gaussian { width: w }) if *width == w => {}
        _ => {
            return Err(Error::InvalidParameter(format!(
                "pump profile {pump:?} disagrees with configured pump width {}",
                cfg.pump_width
            )))
        }
    }
    for g in [grid_s, grid_i] {
        if g.unit() != Basis::Momentum.axis_unit() || !g.is_symmetric_about_zero() {
            return Err(Error::InvalidParameter(
                "synthesis needs momentum grids centered at κ = 0".into(),
            ));
        }
    }

    let ks = grid_s.coords();
    let ki = grid_i.coords();
    let mut amplitude = Array2::<Complex64>::zeros((ks.len(), ki.len()));

    let plane_wave = matches!(pump, PumpProfile::PlaneWave);
    if plane_wave {
        if grid_s != grid_i {
            return Err(Error::InvalidParameter(
                "plane-wave ridge needs identical signal and idler grids".into(),
            ));
        }
        let n = ks.len();
        for j in 0..n {
            let (a, b) = (ks[j], ki[n - 1 - j]);
            amplitude[[j, n - 1 - j]] = phase_matching_amplitude(delta_k_z(a, b, cfg), cfg);
        }
    } else {
        for_each_row(&mut amplitude, |j, mut row| {
            let kappa_s = ks[j];
            for (k, a) in row.iter_mut().enumerate() {
                let kappa_i = ki[k];
                *a = phase_matching_amplitude(delta_k_z(kappa_s, kappa_i, cfg), cfg)
                    * pump.amplitude(kappa_s + kappa_i);
            }
        });
    }

    let mut state = BiphotonGrid::new(*grid_s, *grid_i, Basis::Momentum, amplitude)?
        .with_plane_wave_flag(plane_wave);
    state.normalize()?;
    state.check_aliasing()?;
    Ok(state)
}

/// Joint momentum distribution `|ψ(κ_s, κ_i)|²` as probability mass per cell.
pub fn momentum_distribution(state: &BiphotonGrid) -> Result<JointDensity> {
    if state.basis() != Basis::Momentum {
        return Err(Error::BasisMismatch {
            expected: Basis::Momentum,
            found: state.basis(),
        });
    }
    state.density().normalized()
}
