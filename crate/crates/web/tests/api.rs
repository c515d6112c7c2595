use biphoton_web::{compute_ghost_trace, compute_position_density, width_curves};

#[test]
fn unaberrated_positions_are_correlated() {
    let img = compute_position_density(2.0, 0.0, 0.0, 0.0, 0.0).unwrap();
    let n = img.size();
    let values = img.values();
    assert_eq!(values.len(), n * n);
    assert_eq!(values.iter().cloned().fold(0.0, f64::max), 1.0);
    let coord =
        |j: usize| -img.half_extent() + (j as f64 + 0.5) * 2.0 * img.half_extent() / n as f64;
    let (mut ss, mut ii, mut si) = (0.0, 0.0, 0.0);
    for j in 0..n {
        for k in 0..n {
            let w = values[j * n + k];
            ss += w * coord(j) * coord(j);
            ii += w * coord(k) * coord(k);
            si += w * coord(j) * coord(k);
        }
    }
    // Photons leave the crystal from the same point: x_s ≈ x_i.
    assert!(si / (ss * ii).sqrt() > 0.99);
    assert!((img.delta_x_minus_sq() / img.predicted() - 1.0).abs() < 0.02);
}

#[test]
fn one_arm_phase_widens_and_has_no_prediction() {
    let img = compute_position_density(2.0, 0.0, 0.0, 0.01, 0.0).unwrap();
    assert!(img.delta_x_minus_sq() > 0.1);
    assert!(img.predicted().is_nan());
}

#[test]
fn ghost_trace_recovers_with_cancellation() {
    let blurred = compute_ghost_trace(0.0, 73.7).unwrap();
    let cancelled = compute_ghost_trace(-73.7, 73.7).unwrap();
    assert_eq!(cancelled.positions().len(), cancelled.rates().len());
    assert!(cancelled.visibility() > blurred.visibility());
    assert!((cancelled.period() - 0.8).abs() < 0.05);
}

#[test]
fn width_curves_share_the_axis() {
    let c = width_curves(0.455, 2.0, 0.01, 11);
    assert_eq!(c.beta().len(), 11);
    assert_eq!(c.beta()[5], 0.0);
    assert_eq!(c.slice()[5], c.marginal()[5]);
    assert!(c.marginal()[0] > c.marginal()[5]);
    assert_eq!(c.expansion().len(), 11);
}
