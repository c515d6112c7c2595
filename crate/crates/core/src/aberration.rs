//! Per-arm polynomial phase aberrations and their nonlocal cancellation.

use std::fmt;

use ndarray::Array1;
use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Basis, BiphotonGrid};
use crate::parallel::for_each_row;

/// Orders 0 through 5 are stored unless a profile is built explicitly longer.
pub const DEFAULT_MAX_ORDER: usize = 5;

/// Residual alignment defocus of the apparatus on the signal arm, mm².
pub const APPARATUS_SIGNAL_DEFOCUS: f64 = -0.0052;

/// Coordinate a phase profile is a function of.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhaseDomain {
    /// φ(κ), coefficients in mmⁿ. Acts in the momentum basis.
    Momentum,
    /// θ(x), coefficients in mm⁻ⁿ. Acts in the position basis.
    Position,
}

impl PhaseDomain {
    pub fn basis(self) -> Basis {
        match self {
            PhaseDomain::Momentum => Basis::Momentum,
            PhaseDomain::Position => Basis::Position,
        }
    }

    /// Unit of the order-`n` derivative, e.g. `mm^2` or `mm^-2`.
    pub fn coefficient_unit(self, order: usize) -> String {
        match (self, order) {
            (_, 0) => "rad".to_string(),
            (PhaseDomain::Momentum, 1) => "mm".to_string(),
            (PhaseDomain::Momentum, n) => format!("mm^{n}"),
            (PhaseDomain::Position, n) => format!("mm^-{n}"),
        }
    }
}

impl fmt::Display for PhaseDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhaseDomain::Momentum => f.write_str("momentum-domain"),
            PhaseDomain::Position => f.write_str("position-domain"),
        }
    }
}

/// Phase `φ(u) = Σ cₙ uⁿ/n!` stored as derivatives `cₙ = φ⁽ⁿ⁾(0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseProfile {
    domain: PhaseDomain,
    derivatives: Vec<f64>,
}

impl PhaseProfile {
    pub fn new(domain: PhaseDomain, derivatives: Vec<f64>) -> Result<Self> {
        if derivatives.is_empty() {
            return Err(Error::InvalidParameter(
                "phase profile needs at least the zeroth-order coefficient".into(),
            ));
        }
        if derivatives.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter(
                "phase coefficients must be finite".into(),
            ));
        }
        Ok(Self {
            domain,
            derivatives,
        })
    }

    pub fn zero(domain: PhaseDomain) -> Self {
        Self {
            domain,
            derivatives: vec![0.0; DEFAULT_MAX_ORDER + 1],
        }
    }

    /// Pure defocus `φ″(0) = curvature`.
    pub fn quadratic(domain: PhaseDomain, curvature: f64) -> Result<Self> {
        Self::zero(domain).with_derivative(2, curvature)
    }

    /// Copy with `φ⁽ᵒʳᵈᵉʳ⁾(0)` set, growing the stored order if needed.
    pub fn with_derivative(mut self, order: usize, value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "order-{order} coefficient must be finite"
            )));
        }
        if order >= self.derivatives.len() {
            self.derivatives.resize(order + 1, 0.0);
        }
        self.derivatives[order] = value;
        Ok(self)
    }

    pub fn domain(&self) -> PhaseDomain {
        self.domain
    }

    /// Highest stored order.
    pub fn order(&self) -> usize {
        self.derivatives.len() - 1
    }

    pub fn derivatives(&self) -> &[f64] {
        &self.derivatives
    }

    pub fn derivative(&self, order: usize) -> f64 {
        self.derivatives.get(order).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.derivatives.iter().all(|&c| c == 0.0)
    }

    pub fn evaluate(&self, u: f64) -> f64 {
        // Horner on cₙ/n!
        let n = self.derivatives.len();
        let mut factorial = vec![1.0; n];
        for k in 1..n {
            factorial[k] = factorial[k - 1] * k as f64;
        }
        self.derivatives
            .iter()
            .zip(&factorial)
            .rev()
            .fold(0.0, |acc, (c, f)| acc * u + c / f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Arm {
    Signal,
    Idler,
}

impl fmt::Display for Arm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arm::Signal => f.write_str("signal"),
            Arm::Idler => f.write_str("idler"),
        }
    }
}

/// A phase profile applied to one arm.
#[derive(Debug, Clone, PartialEq)]
pub struct ArmAssignment {
    pub arm: Arm,
    pub profile: PhaseProfile,
}

impl ArmAssignment {
    pub fn new(arm: Arm, profile: PhaseProfile) -> Self {
        Self { arm, profile }
    }
}

/// Multiplies the amplitude by `exp[iφ(u)]` along the assigned arm's axis.
pub fn apply_aberration(state: &BiphotonGrid, assignment: &ArmAssignment) -> Result<BiphotonGrid> {
    let profile = &assignment.profile;
    let wanted = profile.domain().basis();
    if state.basis() != wanted {
        return Err(Error::DomainMismatch {
            profile: profile.domain(),
            state: state.basis(),
            wanted,
        });
    }
    let mut out = state.clone();
    if profile.is_zero() {
        return Ok(out);
    }
    let axis = match assignment.arm {
        Arm::Signal => state.axis_s(),
        Arm::Idler => state.axis_i(),
    };
    let phasors: Array1<Complex64> = axis
        .coords()
        .into_iter()
        .map(|u| Complex64::from_polar(1.0, profile.evaluate(u)))
        .collect();
    match assignment.arm {
        Arm::Signal => for_each_row(out.amplitude_mut(), |j, mut row| {
            let p = phasors[j];
            row.mapv_inplace(|a| a * p);
        }),
        Arm::Idler => for_each_row(out.amplitude_mut(), |_, mut row| {
            row.zip_mut_with(&phasors, |a, p| *a *= p);
        }),
    }
    Ok(out)
}

/// Applies each assignment in turn.
pub fn apply_all(state: &BiphotonGrid, assignments: &[ArmAssignment]) -> Result<BiphotonGrid> {
    assignments
        .iter()
        .try_fold(state.clone(), |s, a| apply_aberration(&s, a))
}

/// Profile on the other arm that cancels `profile` for perfectly
/// anticorrelated momenta: `φ_out(κ) = −φ_in(−κ)`, i.e. even orders negated
/// and odd orders kept.
pub fn cancellation_partner(profile: &PhaseProfile) -> PhaseProfile {
    let derivatives = profile
        .derivatives
        .iter()
        .enumerate()
        .map(|(n, &c)| if n % 2 == 0 { -c } else { c })
        .collect();
    PhaseProfile {
        domain: profile.domain,
        derivatives,
    }
}

/// Power-series coefficients of `φ_s(κ) + φ_i(−κ)` through `order`:
/// `[φ_s(0)+φ_i(0), φ′_s(0)−φ′_i(0), (φ″_s(0)+φ″_i(0))/2!, …]`.
pub fn joint_phase_expansion(
    phi_s: &PhaseProfile,
    phi_i: &PhaseProfile,
    order: usize,
) -> Result<Vec<f64>> {
    let stored = phi_s.order().min(phi_i.order());
    if order > stored {
        return Err(Error::InsufficientOrder {
            stored,
            requested: order,
        });
    }
    let mut factorial = 1.0;
    Ok((0..=order)
        .map(|n| {
            if n > 0 {
                factorial *= n as f64;
            }
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            (phi_s.derivatives[n] + sign * phi_i.derivatives[n]) / factorial
        })
        .collect())
}
