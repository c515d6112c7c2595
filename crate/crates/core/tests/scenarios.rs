use biphoton::analytics::WitnessReport;
use biphoton::ghost::GhostImageResult;
use biphoton::scenario::{
    builtin, builtins, format_config, load, parse_config, run_scenario, ScenarioError,
    ScenarioOutcome,
};

fn witness(name: &str) -> WitnessReport {
    match run_scenario(&builtin(name).unwrap()).unwrap() {
        ScenarioOutcome::Correlation(o) => o.witness.unwrap(),
        ScenarioOutcome::Imaging(_) => panic!("{name} is an imaging scenario"),
    }
}

fn image(name: &str) -> GhostImageResult {
    match run_scenario(&builtin(name).unwrap()).unwrap() {
        ScenarioOutcome::Imaging(o) => o.image,
        ScenarioOutcome::Correlation(_) => panic!("{name} is a correlation scenario"),
    }
}

#[test]
fn every_builtin_runs_at_default_config() {
    for b in builtins() {
        let outcome = run_scenario(&b.config());
        assert!(outcome.is_ok(), "{}: {:?}", b.name, outcome.err());
    }
}

#[test]
fn unaberrated_pairs_violate_the_bound() {
    let w = witness("fig2a");
    assert!(w.violated);
    assert!(w.product + 3.0 * w.product_se < 0.25);
}

#[test]
fn opposite_phases_restore_entanglement_but_not_fully() {
    let (a, b, d) = (witness("fig2a"), witness("fig2b"), witness("fig2d"));
    assert!(!b.violated);
    assert!(d.violated);
    assert!(d.delta_x_minus_sq < b.delta_x_minus_sq);
    assert!(d.product > a.product);
}

#[test]
fn cancellation_recovers_ghost_visibility() {
    let (b, c) = (image("fig4b"), image("fig4c"));
    assert!(c.visibility > b.visibility);
    assert!(!c.low_modulation);
}

#[test]
fn skew_series_follows_cancellation() {
    let skew = |name| match run_scenario(&builtin(name).unwrap()).unwrap() {
        ScenarioOutcome::Correlation(o) => o.statistics.x_minus_skewness,
        ScenarioOutcome::Imaging(_) => unreachable!(),
    };
    let (a, b, c) = (skew("fig3a"), skew("fig3b"), skew("fig3c"));
    assert!(a.abs() > 0.2);
    assert!(b.abs() < 0.05);
    // A finite pump leaves a residual cross term, so the partner phase
    // reduces the skew without removing it.
    assert!(c.abs() < 0.5 * a.abs(), "{a} {c}");
}

#[test]
fn residual_defocus_widens_cancelled_pair() {
    let mut cfg = builtin("fig2d").unwrap();
    let plain = run_scenario(&cfg).unwrap();
    if let biphoton::scenario::ScenarioKind::Correlation(spec) = &mut cfg.kind {
        spec.residual_defocus = true;
    }
    let defocused = run_scenario(&cfg).unwrap();
    let width = |o: &ScenarioOutcome| match o {
        ScenarioOutcome::Correlation(c) => c.statistics.marginal_delta_x_minus_sq,
        ScenarioOutcome::Imaging(_) => unreachable!(),
    };
    assert!(width(&defocused) > width(&plain));
}

#[test]
fn exported_config_gives_identical_outcome() {
    for name in ["fig3c", "fig4b"] {
        let cfg = builtin(name).unwrap();
        let reparsed = parse_config(&format_config(&cfg)).unwrap();
        let a = run_scenario(&cfg).unwrap();
        let b = run_scenario(&reparsed).unwrap();
        match (a, b) {
            (ScenarioOutcome::Correlation(a), ScenarioOutcome::Correlation(b)) => {
                assert_eq!(a.histogram_position, b.histogram_position);
                assert_eq!(a.fit_momentum, b.fit_momentum);
            }
            (ScenarioOutcome::Imaging(a), ScenarioOutcome::Imaging(b)) => {
                assert_eq!(a.image.rates, b.image.rates);
            }
            _ => panic!("{name}: kinds differ"),
        }
    }
}

#[test]
fn load_reports_unknown_names_and_bad_files() {
    match load("fig3aa") {
        Err(ScenarioError::UnknownScenario { suggestion, .. }) => {
            assert_eq!(suggestion.as_deref(), Some("fig3a"))
        }
        other => panic!("unexpected {other:?}"),
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.cfg");
    std::fs::write(
        &path,
        "name = x\n[scan]\nstep_mm = 0.1\nstep_mm = 0.2\n[correlation]\n",
    )
    .unwrap();
    let err = load(path.to_str().unwrap()).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    assert!(err.to_string().contains("line 4"), "{err}");
}

#[test]
fn guard_failures_map_to_exit_3() {
    let mut cfg = builtin("fig2a").unwrap();
    cfg.grid.points = 256;
    let err: ScenarioError = run_scenario(&cfg).unwrap_err().into();
    assert_eq!(err.exit_code(), 3);
}
