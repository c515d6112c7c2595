use super::config::{CorrelationSpec, ImagingSpec, ScenarioConfig};
use crate::aberration::{cancellation_partner, PhaseDomain, PhaseProfile};

/// Quadratic one-arm aberration for the witness series, mm².
const WITNESS_BETA: f64 = 0.01;
/// Quadratic part of the skew series, mm².
const SKEW_BETA: f64 = 0.005;
/// Cubic part of the skew series, mm³.
const SKEW_CUBIC: f64 = 2e-5;
/// Idler-arm position curvature in the imaging series, mm⁻².
const IMAGING_THETA: f64 = 73.7;

#[derive(Debug, Clone, Copy)]
pub struct Builtin {
    pub name: &'static str,
    pub description: &'static str,
    build: fn() -> ScenarioConfig,
}

impl Builtin {
    pub fn config(&self) -> ScenarioConfig {
        (self.build)()
    }
}

fn momentum(terms: &[(usize, f64)]) -> PhaseProfile {
    terms
        .iter()
        .try_fold(PhaseProfile::zero(PhaseDomain::Momentum), |p, &(n, c)| {
            p.with_derivative(n, c)
        })
        .expect("finite built-in coefficients")
}

fn position(terms: &[(usize, f64)]) -> PhaseProfile {
    terms
        .iter()
        .try_fold(PhaseProfile::zero(PhaseDomain::Position), |p, &(n, c)| {
            p.with_derivative(n, c)
        })
        .expect("finite built-in coefficients")
}

fn correlation(name: &'static str, signal: PhaseProfile, idler: PhaseProfile) -> ScenarioConfig {
    let description = REGISTRY
        .iter()
        .find(|b| b.name == name)
        .map_or("", |b| b.description);
    ScenarioConfig::correlation(
        name,
        description,
        CorrelationSpec {
            signal,
            idler,
            residual_defocus: false,
        },
    )
}

fn imaging(name: &'static str, theta_s: PhaseProfile, theta_i: PhaseProfile) -> ScenarioConfig {
    let description = REGISTRY
        .iter()
        .find(|b| b.name == name)
        .map_or("", |b| b.description);
    ScenarioConfig::imaging(
        name,
        description,
        ImagingSpec {
            theta_s,
            theta_i,
            ..ImagingSpec::default()
        },
    )
}

fn skew_idler() -> PhaseProfile {
    momentum(&[(2, SKEW_BETA), (3, SKEW_CUBIC)])
}

const REGISTRY: &[Builtin] = &[
    Builtin {
        name: "fig2a",
        description: "EPR correlations without aberrations",
        build: || correlation("fig2a", momentum(&[]), momentum(&[])),
    },
    Builtin {
        name: "fig2b",
        description: "quadratic phase on the idler only",
        build: || correlation("fig2b", momentum(&[]), momentum(&[(2, WITNESS_BETA)])),
    },
    Builtin {
        name: "fig2c",
        description: "quadratic phase on the signal only",
        build: || correlation("fig2c", momentum(&[(2, -WITNESS_BETA)]), momentum(&[])),
    },
    Builtin {
        name: "fig2d",
        description: "opposite quadratic phases on both arms",
        build: || {
            correlation(
                "fig2d",
                momentum(&[(2, -WITNESS_BETA)]),
                momentum(&[(2, WITNESS_BETA)]),
            )
        },
    },
    Builtin {
        name: "fig3a",
        description: "quadratic and cubic phase on the idler",
        build: || correlation("fig3a", momentum(&[]), skew_idler()),
    },
    Builtin {
        name: "fig3b",
        description: "cubic term cancelled by an equal cubic on the signal",
        build: || correlation("fig3b", momentum(&[(3, SKEW_CUBIC)]), skew_idler()),
    },
    Builtin {
        name: "fig3c",
        description: "all orders cancelled by the partner phase on the signal",
        build: || {
            let idler = skew_idler();
            correlation("fig3c", cancellation_partner(&idler), idler)
        },
    },
    Builtin {
        name: "fig4a",
        description: "ghost image of three bars without aberrations",
        build: || imaging("fig4a", position(&[]), position(&[])),
    },
    Builtin {
        name: "fig4b",
        description: "ghost image with a position-domain curvature on the idler",
        build: || imaging("fig4b", position(&[]), position(&[(2, IMAGING_THETA)])),
    },
    Builtin {
        name: "fig4c",
        description: "ghost image with the curvature cancelled on the signal",
        build: || {
            imaging(
                "fig4c",
                position(&[(2, -IMAGING_THETA)]),
                position(&[(2, IMAGING_THETA)]),
            )
        },
    },
];

pub fn builtins() -> &'static [Builtin] {
    REGISTRY
}

pub fn builtin_names() -> impl Iterator<Item = &'static str> {
    REGISTRY.iter().map(|b| b.name)
}

pub fn builtin(name: &str) -> Option<ScenarioConfig> {
    REGISTRY
        .iter()
        .find(|b| b.name == name)
        .map(Builtin::config)
}

/// Closest built-in name, if any is reasonably close.
pub fn suggest(name: &str) -> Option<&'static str> {
    let lower = name.to_ascii_lowercase();
    builtin_names()
        .map(|n| (strsim::levenshtein(&lower, n), n))
        .filter(|&(d, _)| d <= 2)
        .min_by_key(|&(d, _)| d)
        .map(|(_, n)| n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::config::{format_config, parse_config, ScenarioKind};

    #[test]
    fn ten_builtins() {
        let names: Vec<_> = builtin_names().collect();
        assert_eq!(
            names,
            [
                "fig2a", "fig2b", "fig2c", "fig2d", "fig3a", "fig3b", "fig3c", "fig4a", "fig4b",
                "fig4c"
            ]
        );
        for b in builtins() {
            let cfg = b.config();
            assert_eq!(cfg.name, b.name);
            assert_eq!(cfg.description, b.description);
        }
    }

    #[test]
    fn every_builtin_round_trips() {
        for b in builtins() {
            let cfg = b.config();
            assert_eq!(
                parse_config(&format_config(&cfg)).unwrap(),
                cfg,
                "{}",
                b.name
            );
        }
    }

    #[test]
    fn suggestions() {
        assert_eq!(suggest("fig2e"), Some("fig2a"));
        assert_eq!(suggest("FIG4C"), Some("fig4c"));
        assert_eq!(suggest("fig44c"), Some("fig4c"));
        assert_eq!(suggest("witness"), None);
    }

    #[test]
    fn skew_series_structure() {
        let ScenarioKind::Correlation(b) = builtin("fig3b").unwrap().kind else {
            panic!()
        };
        assert_eq!(b.signal.derivative(3), b.idler.derivative(3));
        assert_eq!(b.signal.derivative(2), 0.0);
        let ScenarioKind::Correlation(c) = builtin("fig3c").unwrap().kind else {
            panic!()
        };
        assert_eq!(c.signal.derivative(2), -c.idler.derivative(2));
        assert_eq!(c.signal.derivative(3), c.idler.derivative(3));
    }
}
