//! Poisson maximum-likelihood fit of a bivariate Gaussian rate surface.
//!
//! The rate in the bin centred at `x` is `λ = A exp(−½|L⁻¹(x − μ)|²)` with
//! `L = [[e^a, 0], [b, e^c]]`, so `Σ = LLᵀ` stays positive definite for every
//! parameter vector `θ = [ln A, μ_s, μ_i, a, b, c]`.

use nalgebra::{Matrix6, Vector6};

use crate::detection::CoincidenceHistogram;
use crate::error::{Error, FitIterate, Result};
use crate::grid::Basis;

/// Index of each entry of the parameter vector.
pub const LN_AMPLITUDE: usize = 0;
pub const MEAN_S: usize = 1;
pub const MEAN_I: usize = 2;

/// Bins with nonzero counts needed for a fit.
pub const MIN_NONZERO_BINS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub max_iterations: usize,
    /// Convergence threshold on `sqrt(gᵀI⁻¹g / Σn)`.
    pub tolerance: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            tolerance: 1e-8,
        }
    }
}

/// Amplitude, centre and covariance of a Gaussian rate surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianSurface {
    pub amplitude: f64,
    pub mean: [f64; 2],
    pub covariance: [[f64; 2]; 2],
}

impl GaussianSurface {
    pub fn from_parameters(theta: &[f64; 6]) -> Self {
        let (l11, l21, l22) = (theta[3].exp(), theta[4], theta[5].exp());
        Self {
            amplitude: theta[LN_AMPLITUDE].exp(),
            mean: [theta[MEAN_S], theta[MEAN_I]],
            covariance: [[l11 * l11, l11 * l21], [l11 * l21, l21 * l21 + l22 * l22]],
        }
    }

    pub fn to_parameters(&self) -> Result<[f64; 6]> {
        let [[s11, s12], [_, s22]] = self.covariance;
        let det = s11 * s22 - s12 * s12;
        if !(self.amplitude > 0.0 && s11 > 0.0 && det > 0.0) {
            return Err(Error::InvalidParameter(
                "surface needs a positive amplitude and positive-definite covariance".into(),
            ));
        }
        let l11 = s11.sqrt();
        let l21 = s12 / l11;
        let l22 = (s22 - l21 * l21).sqrt();
        Ok([
            self.amplitude.ln(),
            self.mean[0],
            self.mean[1],
            l11.ln(),
            l21,
            l22.ln(),
        ])
    }

    /// Variance along `(u_s − u_i)/√2`.
    pub fn delta_minus_sq(&self) -> f64 {
        let [[s11, s12], [_, s22]] = self.covariance;
        0.5 * (s11 + s22 - 2.0 * s12)
    }

    /// Variance along `(u_s + u_i)/√2`.
    pub fn delta_plus_sq(&self) -> f64 {
        let [[s11, s12], [_, s22]] = self.covariance;
        0.5 * (s11 + s22 + 2.0 * s12)
    }

    pub fn rate(&self, s: f64, i: f64) -> f64 {
        let [[s11, s12], [_, s22]] = self.covariance;
        let det = s11 * s22 - s12 * s12;
        let (ds, di) = (s - self.mean[0], i - self.mean[1]);
        let q = (s22 * ds * ds - 2.0 * s12 * ds * di + s11 * di * di) / det;
        self.amplitude * (-0.5 * q).exp()
    }
}

/// Poisson log-likelihood of a histogram under the Gaussian rate model.
pub struct PoissonGaussianModel<'a> {
    hist: &'a CoincidenceHistogram,
}

struct Evaluation {
    log_likelihood: f64,
    gradient: Vector6<f64>,
    fisher: Matrix6<f64>,
}

impl<'a> PoissonGaussianModel<'a> {
    pub fn new(hist: &'a CoincidenceHistogram) -> Self {
        Self { hist }
    }

    /// `Σ n ln λ − λ`, dropping the parameter-free `ln n!`.
    pub fn log_likelihood(&self, theta: &[f64; 6]) -> f64 {
        let mut total = 0.0;
        self.visit(theta, |n, ln_rate, _| total += n * ln_rate - ln_rate.exp());
        total
    }

    pub fn gradient(&self, theta: &[f64; 6]) -> [f64; 6] {
        self.evaluate(theta).gradient.into()
    }

    pub fn rates(&self, theta: &[f64; 6]) -> ndarray::Array2<f64> {
        let mut out = Vec::with_capacity(self.hist.counts.len());
        self.visit(theta, |_, ln_rate, _| out.push(ln_rate.exp()));
        ndarray::Array2::from_shape_vec(self.hist.counts.dim(), out).expect("histogram shape")
    }

    fn evaluate(&self, theta: &[f64; 6]) -> Evaluation {
        let mut log_likelihood = 0.0;
        let mut gradient = Vector6::zeros();
        let mut fisher = Matrix6::zeros();
        self.visit(theta, |n, ln_rate, d| {
            let rate = ln_rate.exp();
            log_likelihood += n * ln_rate - rate;
            gradient += d * (n - rate);
            fisher += d * d.transpose() * rate;
        });
        Evaluation {
            log_likelihood,
            gradient,
            fisher,
        }
    }

    /// Calls `f(counts, ln λ, ∂ln λ/∂θ)` for every bin in row-major order.
    fn visit(&self, theta: &[f64; 6], mut f: impl FnMut(f64, f64, &Vector6<f64>)) {
        let [ln_a, mu_s, mu_i, a, b, c] = *theta;
        let (ea, ec) = ((-a).exp(), (-c).exp());
        for (p, &s) in self.hist.positions_s.iter().enumerate() {
            let z1 = (s - mu_s) * ea;
            for (q, &i) in self.hist.positions_i.iter().enumerate() {
                let z2 = ((i - mu_i) - b * z1) * ec;
                let ln_rate = ln_a - 0.5 * (z1 * z1 + z2 * z2);
                // ∂z1: μ_s → −e^{−a}, a → −z1
                // ∂z2: μ_s → b e^{−a} e^{−c}, μ_i → −e^{−c}, a → b z1 e^{−c}, b → −z1 e^{−c}, c → −z2
                let d = Vector6::new(
                    1.0,
                    z1 * ea - z2 * b * ea * ec,
                    z2 * ec,
                    z1 * z1 - z2 * b * z1 * ec,
                    z2 * z1 * ec,
                    z2 * z2,
                );
                f(self.hist.counts[[p, q]], ln_rate, &d);
            }
        }
    }
}

/// Result of [`fit_bivariate_gaussian`], with Monte Carlo errors once
/// attached by [`GaussianFitReport::with_errors`].
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianFitReport {
    pub basis: Basis,
    pub surface: GaussianSurface,
    pub mean: [f64; 2],
    pub covariance: [[f64; 2]; 2],
    pub delta_minus_sq: f64,
    pub delta_plus_sq: f64,
    pub se_minus: f64,
    pub se_plus: f64,
    /// Standard errors of `[A, μ_s, μ_i, Σ_ss, Σ_ii, Σ_si]`, when known.
    pub surface_se: Option<[f64; 6]>,
    /// Total counts in the histogram.
    pub n_samples: f64,
    pub iterations: usize,
    pub log_likelihood: f64,
    pub parameters: [f64; 6],
}

impl GaussianFitReport {
    fn new(
        basis: Basis,
        theta: [f64; 6],
        n_samples: f64,
        iterations: usize,
        log_likelihood: f64,
    ) -> Self {
        let surface = GaussianSurface::from_parameters(&theta);
        Self {
            basis,
            surface,
            mean: surface.mean,
            covariance: surface.covariance,
            delta_minus_sq: surface.delta_minus_sq(),
            delta_plus_sq: surface.delta_plus_sq(),
            se_minus: 0.0,
            se_plus: 0.0,
            surface_se: None,
            n_samples,
            iterations,
            log_likelihood,
            parameters: theta,
        }
    }

    pub fn with_errors(mut self, errors: &super::MonteCarloErrors) -> Self {
        self.se_minus = errors.se_minus;
        self.se_plus = errors.se_plus;
        self.surface_se = Some(errors.surface);
        self
    }
}

/// Weighted sample moments as a starting point.
fn initial_parameters(hist: &CoincidenceHistogram) -> Result<[f64; 6]> {
    let total = hist.counts.sum();
    let (mut ms, mut mi) = (0.0, 0.0);
    for ((p, q), &n) in hist.counts.indexed_iter() {
        ms += n * hist.positions_s[p];
        mi += n * hist.positions_i[q];
    }
    ms /= total;
    mi /= total;
    let (mut vs, mut vi, mut c) = (0.0, 0.0, 0.0);
    for ((p, q), &n) in hist.counts.indexed_iter() {
        let (ds, di) = (hist.positions_s[p] - ms, hist.positions_i[q] - mi);
        vs += n * ds * ds;
        vi += n * di * di;
        c += n * ds * di;
    }
    let (vs, vi, c) = (vs / total, vi / total, c / total);
    let det = vs * vi - c * c;
    let trace = vs + vi;
    if trace.is_nan() || trace <= 0.0 || det / (trace * trace) < 1e-10 {
        return Err(Error::SingularFit(format!(
            "sample covariance is rank deficient (det {det:e}, trace {trace:e})"
        )));
    }
    let mut theta = GaussianSurface {
        amplitude: 1.0,
        mean: [ms, mi],
        covariance: [[vs, c], [c, vi]],
    }
    .to_parameters()?;
    // Match the total rate to the total counts.
    let model = PoissonGaussianModel::new(hist);
    let unit: f64 = model.rates(&theta).sum();
    theta[LN_AMPLITUDE] = (total / unit).ln();
    Ok(theta)
}

/// Maximum-likelihood fit with the default options.
pub fn fit_bivariate_gaussian(hist: &CoincidenceHistogram) -> Result<GaussianFitReport> {
    fit_bivariate_gaussian_with(hist, &FitOptions::default(), None)
}

/// Fisher scoring with a backtracking line search. `start` overrides the
/// moment-based initial point.
pub fn fit_bivariate_gaussian_with(
    hist: &CoincidenceHistogram,
    options: &FitOptions,
    start: Option<[f64; 6]>,
) -> Result<GaussianFitReport> {
    let nonzero = hist.nonzero_bins();
    if nonzero < MIN_NONZERO_BINS {
        return Err(Error::SingularFit(format!(
            "{nonzero} nonzero bins, at least {MIN_NONZERO_BINS} needed"
        )));
    }
    let total = hist.counts.sum();
    let mut theta = match start {
        Some(t) => t,
        None => initial_parameters(hist)?,
    };
    let model = PoissonGaussianModel::new(hist);
    let mut eval = model.evaluate(&theta);
    let mut last_norm = f64::INFINITY;
    for iteration in 0..options.max_iterations {
        let Some(step) = eval.fisher.cholesky().map(|ch| ch.solve(&eval.gradient)) else {
            return Err(Error::SingularFit(format!(
                "Fisher information lost rank at iteration {iteration}"
            )));
        };
        let norm = (eval.gradient.dot(&step).max(0.0) / total).sqrt();
        last_norm = norm;
        if norm <= options.tolerance {
            return Ok(GaussianFitReport::new(
                hist.basis,
                theta,
                total,
                iteration,
                eval.log_likelihood,
            ));
        }
        let full: [f64; 6] = std::array::from_fn(|k| theta[k] + step[k]);
        // Once the predicted gain is below the rounding of the summed
        // likelihood, comparing values is meaningless; take the full step.
        let predicted_gain = 0.5 * eval.gradient.dot(&step);
        let mut accepted = None;
        if predicted_gain < 1e-9 * (1.0 + eval.log_likelihood.abs()) {
            accepted = Some(full);
        } else {
            let mut scale = 1.0;
            for _ in 0..40 {
                let trial: [f64; 6] = std::array::from_fn(|k| theta[k] + scale * step[k]);
                let candidate = model.log_likelihood(&trial);
                if candidate.is_finite() && candidate > eval.log_likelihood {
                    accepted = Some(trial);
                    break;
                }
                scale *= 0.5;
            }
        }
        match accepted {
            Some(trial) => {
                theta = trial;
                eval = model.evaluate(&theta);
            }
            // No ascent direction left at double precision.
            None if norm <= 1e3 * options.tolerance => {
                return Ok(GaussianFitReport::new(
                    hist.basis,
                    theta,
                    total,
                    iteration,
                    eval.log_likelihood,
                ));
            }
            None => break,
        }
    }
    Err(Error::NonConvergence {
        iterations: options.max_iterations,
        last: FitIterate {
            params: theta,
            log_likelihood: eval.log_likelihood,
            gradient_norm: last_norm,
        },
    })
}

/// Central-difference gradient, for checking [`PoissonGaussianModel::gradient`].
pub fn numerical_gradient(
    model: &PoissonGaussianModel<'_>,
    theta: &[f64; 6],
    step: f64,
) -> [f64; 6] {
    std::array::from_fn(|k| {
        let h = step * theta[k].abs().max(1.0);
        let mut up = *theta;
        let mut down = *theta;
        up[k] += h;
        down[k] -= h;
        (model.log_likelihood(&up) - model.log_likelihood(&down)) / (2.0 * h)
    })
}
