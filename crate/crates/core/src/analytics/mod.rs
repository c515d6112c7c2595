//! Closed-form predictions, Gaussian fitting, Monte Carlo errors and the
//! entanglement witness.

pub mod closed_form;
pub mod fit;
pub mod monte_carlo;
pub mod witness;

pub use closed_form::{
    delta_kappa_minus_sq, expansion_coefficient, minimizing_beta, predicted_delta_kappa_plus_sq,
    predicted_delta_x_minus_sq, predicted_delta_x_minus_sq_expansion,
    predicted_marginal_delta_x_minus_sq,
};
pub use fit::{
    fit_bivariate_gaussian, fit_bivariate_gaussian_with, numerical_gradient, FitOptions,
    GaussianFitReport, GaussianSurface, PoissonGaussianModel,
};
pub use monte_carlo::{monte_carlo_errors, MonteCarloErrors};
pub use witness::{evaluate_witness, WitnessReport};
