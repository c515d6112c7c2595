//! Parametric Monte Carlo errors: counts are redrawn from the fitted rate
//! surface and refitted.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use super::fit::{
    fit_bivariate_gaussian_with, FitOptions, GaussianFitReport, PoissonGaussianModel,
};
use crate::detection::CoincidenceHistogram;
use crate::error::{Error, Result};
use crate::parallel::map_indexed;

/// Smallest accepted number of resamples.
pub const MIN_RESAMPLES: usize = 100;
/// Offset of the resample streams.
const RESAMPLE_STREAM_BASE: u64 = 1 << 63;

/// Largest tolerated fraction of failed refits.
pub const MAX_FAILURE_FRACTION: f64 = 0.05;

/// Spread of refitted quantities across resamples.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloErrors {
    /// Standard deviation of `Δ₋²`.
    pub se_minus: f64,
    /// Standard deviation of `Δ₊²`.
    pub se_plus: f64,
    /// Standard deviations of `[A, μ_s, μ_i, Σ_ss, Σ_ii, Σ_si]`.
    pub surface: [f64; 6],
    pub resamples: usize,
    pub failures: usize,
}

fn observables(fit: &GaussianFitReport) -> [f64; 8] {
    let s = &fit.surface;
    [
        s.amplitude,
        s.mean[0],
        s.mean[1],
        s.covariance[0][0],
        s.covariance[1][1],
        s.covariance[0][1],
        fit.delta_minus_sq,
        fit.delta_plus_sq,
    ]
}

/// Redraws every bin as Poisson(fitted rate) `n_resamples` times, refits
/// each draw from the fitted parameters and reports the sample standard
/// deviations. Resample `r` uses ChaCha stream `r + 2⁶³` of `seed`, which
/// no histogram bin stream reaches.
pub fn monte_carlo_errors(
    hist: &CoincidenceHistogram,
    fit: &GaussianFitReport,
    n_resamples: usize,
    seed: u64,
) -> Result<MonteCarloErrors> {
    if n_resamples < MIN_RESAMPLES {
        return Err(Error::InvalidParameter(format!(
            "at least {MIN_RESAMPLES} resamples needed, got {n_resamples}"
        )));
    }
    let rates = PoissonGaussianModel::new(hist).rates(&fit.parameters);
    let options = FitOptions::default();
    let outcomes = map_indexed(n_resamples, |r| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(RESAMPLE_STREAM_BASE | r as u64);
        let mut counts = rates.clone();
        for c in counts.iter_mut() {
            *c = if *c > 0.0 {
                Poisson::new(*c).map(|d| d.sample(&mut rng)).unwrap_or(0.0)
            } else {
                0.0
            };
        }
        let draw = CoincidenceHistogram {
            counts,
            ..hist.clone()
        };
        fit_bivariate_gaussian_with(&draw, &options, Some(fit.parameters))
            .ok()
            .map(|f| observables(&f))
    });
    let successes: Vec<[f64; 8]> = outcomes.iter().flatten().copied().collect();
    let failures = n_resamples - successes.len();
    if failures as f64 > MAX_FAILURE_FRACTION * n_resamples as f64 || successes.len() < 2 {
        return Err(Error::UnstableFit {
            failures,
            resamples: n_resamples,
        });
    }
    let count = successes.len() as f64;
    let spread: [f64; 8] = std::array::from_fn(|k| {
        let mean = successes.iter().map(|o| o[k]).sum::<f64>() / count;
        let ss = successes.iter().map(|o| (o[k] - mean).powi(2)).sum::<f64>();
        (ss / (count - 1.0)).sqrt()
    });
    Ok(MonteCarloErrors {
        se_minus: spread[6],
        se_plus: spread[7],
        surface: std::array::from_fn(|k| spread[k]),
        resamples: n_resamples,
        failures,
    })
}
