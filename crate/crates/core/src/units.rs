//! Units convention and coordinate mappings.
//!
//! Lengths are millimeters, transverse momenta are wavenumbers in mm⁻¹ and
//! ħ = 1, so a momentum `p = ħκ` is reported as `κ` and the Heisenberg-type
//! witness bound `ħ²/4` is `1/4`.

use std::f64::consts::TAU;
use std::fmt;

use crate::error::{Error, Result};

/// Reduced Planck constant in the working units.
pub const HBAR: f64 = 1.0;

/// Lower bound of `Δx₋²·Δκ₊²` for separable states.
pub const WITNESS_BOUND: f64 = HBAR * HBAR / 4.0;

/// Unit carried by a grid axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AxisUnit {
    Millimeter,
    InverseMillimeter,
}

impl AxisUnit {
    pub fn dual(self) -> Self {
        match self {
            AxisUnit::Millimeter => AxisUnit::InverseMillimeter,
            AxisUnit::InverseMillimeter => AxisUnit::Millimeter,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            AxisUnit::Millimeter => "mm",
            AxisUnit::InverseMillimeter => "mm^-1",
        }
    }
}

impl fmt::Display for AxisUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

fn require_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be positive and finite, got {value}"
        )))
    }
}

/// `k = 2π/λ`, wavelength in mm.
pub fn wavenumber_from_wavelength(lambda_mm: f64) -> Result<f64> {
    require_positive("wavelength", lambda_mm)?;
    Ok(TAU / lambda_mm)
}

/// Position `ρ = fκ/k` in the back focal plane of a lens of focal length `f`.
pub fn fourier_plane_position(kappa: f64, focal_length_mm: f64, wavenumber: f64) -> Result<f64> {
    require_positive("focal length", focal_length_mm)?;
    require_positive("wavenumber", wavenumber)?;
    Ok(focal_length_mm * kappa / wavenumber)
}

/// Inverse of [`fourier_plane_position`].
pub fn position_to_kappa(rho_mm: f64, focal_length_mm: f64, wavenumber: f64) -> Result<f64> {
    require_positive("focal length", focal_length_mm)?;
    require_positive("wavenumber", wavenumber)?;
    Ok(rho_mm * wavenumber / focal_length_mm)
}

/// A validated lens mapping between transverse wavenumber and Fourier-plane
/// position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierLens {
    focal_length_mm: f64,
    wavenumber: f64,
}

impl FourierLens {
    pub fn new(focal_length_mm: f64, wavenumber: f64) -> Result<Self> {
        require_positive("focal length", focal_length_mm)?;
        require_positive("wavenumber", wavenumber)?;
        Ok(Self {
            focal_length_mm,
            wavenumber,
        })
    }

    /// L1 of the apparatus (f = 400 mm) at the degenerate 810 nm wavelength.
    pub fn apparatus_default() -> Self {
        Self {
            focal_length_mm: 400.0,
            wavenumber: TAU / 810e-6,
        }
    }

    pub fn focal_length_mm(&self) -> f64 {
        self.focal_length_mm
    }

    pub fn wavenumber(&self) -> f64 {
        self.wavenumber
    }

    /// mm of Fourier-plane position per mm⁻¹ of wavenumber.
    pub fn scale(&self) -> f64 {
        self.focal_length_mm / self.wavenumber
    }

    pub fn position(&self, kappa: f64) -> f64 {
        kappa * self.scale()
    }

    pub fn kappa(&self, rho_mm: f64) -> f64 {
        rho_mm / self.scale()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn wavenumbers_of_pump_and_photons() {
        let kp = wavenumber_from_wavelength(405e-6).unwrap();
        assert_relative_eq!(kp, 1.5514e4, max_relative = 1e-4);
        let k = wavenumber_from_wavelength(810e-6).unwrap();
        assert_relative_eq!(k, 7.757e3, max_relative = 1e-4);
        assert_relative_eq!(wavenumber_from_wavelength(TAU).unwrap(), 1.0);
    }

    #[test]
    fn non_positive_wavelength_is_rejected() {
        assert!(matches!(
            wavenumber_from_wavelength(0.0),
            Err(Error::InvalidParameter(_))
        ));
        assert!(wavenumber_from_wavelength(-1.0).is_err());
        assert!(wavenumber_from_wavelength(f64::NAN).is_err());
    }

    #[test]
    fn fourier_plane_mapping() {
        let k = wavenumber_from_wavelength(810e-6).unwrap();
        assert_eq!(fourier_plane_position(0.0, 400.0, k).unwrap(), 0.0);
        let rho = fourier_plane_position(19.39, 400.0, k).unwrap();
        assert_relative_eq!(rho, 1.0, max_relative = 1e-3);
        let back = position_to_kappa(rho, 400.0, k).unwrap();
        assert_relative_eq!(back, 19.39, max_relative = 1e-14);
        assert!(fourier_plane_position(1.0, 0.0, k).is_err());
        assert!(position_to_kappa(1.0, 400.0, -k).is_err());
    }

    #[test]
    fn lens_matches_free_functions() {
        let lens = FourierLens::apparatus_default();
        let k = wavenumber_from_wavelength(810e-6).unwrap();
        assert_relative_eq!(
            lens.position(12.5),
            fourier_plane_position(12.5, 400.0, k).unwrap(),
            max_relative = 1e-15
        );
        assert!(FourierLens::new(400.0, 0.0).is_err());
    }

    proptest::proptest! {
        #[test]
        fn fourier_mapping_is_linear(a in -5.0f64..5.0, b in -5.0f64..5.0,
                                     k1 in -300.0f64..300.0, k2 in -300.0f64..300.0) {
            let k = TAU / 810e-6;
            let f = |x: f64| fourier_plane_position(x, 400.0, k).unwrap();
            let lhs = f(a * k1 + b * k2);
            let rhs = a * f(k1) + b * f(k2);
            let scale = f(a.abs() * k1.abs() + b.abs() * k2.abs()).max(1e-300);
            proptest::prop_assert!((lhs - rhs).abs() <= 1e-14 * scale);
        }
    }
}
