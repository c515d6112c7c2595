//! Product-of-variances entanglement witness.

use super::fit::GaussianFitReport;
use crate::error::{Error, Result};
use crate::grid::Basis;
use crate::units::WITNESS_BOUND;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessReport {
    /// `Δx₋²·Δκ₊²`.
    pub product: f64,
    pub bound: f64,
    /// `product < bound`: entanglement is verified.
    pub violated: bool,
    pub product_se: f64,
    pub delta_x_minus_sq: f64,
    pub delta_kappa_plus_sq: f64,
}

/// Combines `Δx₋²` from a position-basis fit with `Δκ₊²` from a
/// momentum-basis fit. Relative errors add in quadrature.
pub fn evaluate_witness(
    fit_position: &GaussianFitReport,
    fit_momentum: &GaussianFitReport,
) -> Result<WitnessReport> {
    for (fit, expected) in [
        (fit_position, Basis::Position),
        (fit_momentum, Basis::Momentum),
    ] {
        if fit.basis != expected {
            return Err(Error::BasisMismatch {
                expected,
                found: fit.basis,
            });
        }
    }
    let x = fit_position.delta_minus_sq;
    let k = fit_momentum.delta_plus_sq;
    let product = x * k;
    let product_se =
        product * ((fit_position.se_minus / x).powi(2) + (fit_momentum.se_plus / k).powi(2)).sqrt();
    Ok(WitnessReport {
        product,
        bound: WITNESS_BOUND,
        violated: product < WITNESS_BOUND,
        product_se,
        delta_x_minus_sq: x,
        delta_kappa_plus_sq: k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::fit::fit_bivariate_gaussian;
    use crate::analytics::fit::GaussianSurface;
    use crate::detection::{CoincidenceHistogram, ScanRange, SlitScanConfig};
    use approx::assert_relative_eq;
    use ndarray::Array2;

    fn fit(basis: Basis, covariance: [[f64; 2]; 2]) -> GaussianFitReport {
        let surface = GaussianSurface {
            amplitude: 100.0,
            mean: [0.0, 0.0],
            covariance,
        };
        let positions = ScanRange::symmetric(3.0).positions(0.1);
        let counts = Array2::from_shape_fn((positions.len(), positions.len()), |(p, q)| {
            surface.rate(positions[p], positions[q])
        });
        let h = CoincidenceHistogram::new(
            positions.clone(),
            positions,
            counts,
            basis,
            SlitScanConfig::default(),
        )
        .unwrap();
        fit_bivariate_gaussian(&h).unwrap()
    }

    #[test]
    fn bound_is_a_quarter() {
        let x = fit(Basis::Position, [[0.5, 0.45], [0.45, 0.5]]);
        let k = fit(Basis::Momentum, [[0.5, -0.45], [-0.45, 0.5]]);
        let w = evaluate_witness(&x, &k).unwrap();
        assert_eq!(w.bound, 0.25);
        assert_relative_eq!(w.product, 0.05 * 0.05, max_relative = 1e-3);
        assert!(w.violated);
    }

    #[test]
    fn separable_product_is_not_violated() {
        let x = fit(Basis::Position, [[0.6, 0.0], [0.0, 0.6]]);
        let k = fit(Basis::Momentum, [[0.6, 0.0], [0.0, 0.6]]);
        let w = evaluate_witness(&x, &k).unwrap();
        assert!(!w.violated);
        assert_eq!(w.violated, w.product < 0.25);
    }

    #[test]
    fn error_propagates_in_quadrature() {
        let mut x = fit(Basis::Position, [[0.6, 0.0], [0.0, 0.6]]);
        let mut k = fit(Basis::Momentum, [[0.6, 0.0], [0.0, 0.6]]);
        x.se_minus = 0.03 * x.delta_minus_sq;
        k.se_plus = 0.04 * k.delta_plus_sq;
        let w = evaluate_witness(&x, &k).unwrap();
        assert_relative_eq!(w.product_se, 0.05 * w.product, max_relative = 1e-12);
    }

    #[test]
    fn basis_mix_up_is_rejected() {
        let x = fit(Basis::Position, [[0.6, 0.0], [0.0, 0.6]]);
        assert!(matches!(
            evaluate_witness(&x, &x),
            Err(Error::BasisMismatch { .. })
        ));
        let k = fit(Basis::Momentum, [[0.6, 0.0], [0.0, 0.6]]);
        assert!(matches!(
            evaluate_witness(&k, &x),
            Err(Error::BasisMismatch { .. })
        ));
    }
}
