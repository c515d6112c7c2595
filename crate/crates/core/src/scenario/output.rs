//! CSV and report files. Floats use `Display` or `LowerExp`, both of which
//! give the shortest text that reads back to the same value.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use ndarray::Array2;

use super::config::ScenarioConfig;
use super::run::{CorrelationOutcome, ImagingOutcome, ScenarioOutcome};
use super::ScenarioError;
use crate::analytics::GaussianFitReport;
use crate::detection::{CoincidenceHistogram, NoiseModel};
use crate::grid::{Basis, Grid1D};
use crate::units::FourierLens;

/// Joint densities are block-summed to at most this many points per axis.
pub const MAX_CSV_POINTS: usize = 256;

fn axis_label(basis: Basis, arm: &str) -> String {
    match basis {
        Basis::Position => format!("x_{arm}_mm"),
        Basis::Momentum => format!("kappa_{arm}_per_mm"),
    }
}

/// Writes `axis_a, axis_b, value` rows with value = probability per unit
/// area, after block-summing to [`MAX_CSV_POINTS`].
fn density_csv(header: [&str; 2], axis_a: &Grid1D, axis_b: &Grid1D, mass: &Array2<f64>) -> String {
    let factor = |g: &Grid1D| (g.len() / MAX_CSV_POINTS).max(1);
    let (fa, fb) = (factor(axis_a), factor(axis_b));
    let coarse = |g: &Grid1D, f: usize| {
        Grid1D::new(g.len() / f, g.extent(), g.center(), g.unit()).expect("coarsened axis is valid")
    };
    let (ca, cb) = (coarse(axis_a, fa), coarse(axis_b, fb));
    let mut blocks = Array2::<f64>::zeros((ca.len(), cb.len()));
    for ((j, k), m) in mass.indexed_iter() {
        blocks[[j / fa, k / fb]] += m;
    }
    let area = ca.spacing() * cb.spacing();
    let mut out = format!("{},{},value\n", header[0], header[1]);
    for ((j, k), m) in blocks.indexed_iter() {
        let _ = writeln!(out, "{},{},{:e}", ca.coord(j), cb.coord(k), m / area);
    }
    out
}

fn histogram_csv(hist: &CoincidenceHistogram, lens: Option<&FourierLens>) -> String {
    let mut out = match lens {
        Some(_) => String::from("rho_s_mm,rho_i_mm,kappa_s_per_mm,kappa_i_per_mm,counts\n"),
        None => String::from("x_s_mm,x_i_mm,counts\n"),
    };
    for ((p, q), n) in hist.counts.indexed_iter() {
        let (a, b) = (hist.positions_s[p], hist.positions_i[q]);
        let _ = match lens {
            Some(l) => writeln!(out, "{},{},{a},{b},{n}", l.position(a), l.position(b)),
            None => writeln!(out, "{a},{b},{n}"),
        };
    }
    out
}

struct Report(String);

impl Report {
    fn new(cfg: &ScenarioConfig, kind: &str) -> Self {
        let mut r = Report(String::new());
        r.line("scenario", &cfg.name);
        r.line("kind", kind);
        r.line("grid_points", cfg.grid.points);
        r.line("position_extent_mm", cfg.grid.position_extent_mm);
        r.line("scan_seed", cfg.scan.seed);
        r.line("analysis_seed", cfg.analysis.seed);
        let noise = match cfg.scan.noise {
            NoiseModel::Poisson => "poisson",
            NoiseModel::Noiseless => "noiseless",
        };
        r.line("noise", noise);
        r.line("total_counts", cfg.scan.total_counts);
        r
    }

    fn line(&mut self, key: &str, value: impl std::fmt::Display) {
        let _ = writeln!(self.0, "{key} = {value}");
    }

    fn optional(&mut self, key: &str, value: Option<f64>) {
        if let Some(v) = value {
            self.line(key, v);
        }
    }

    fn fit(&mut self, prefix: &str, fit: &GaussianFitReport) {
        let s = &fit.surface;
        self.line(&format!("{prefix}_amplitude"), s.amplitude);
        self.line(&format!("{prefix}_mean_s"), s.mean[0]);
        self.line(&format!("{prefix}_mean_i"), s.mean[1]);
        self.line(&format!("{prefix}_sigma_ss"), s.covariance[0][0]);
        self.line(&format!("{prefix}_sigma_ii"), s.covariance[1][1]);
        self.line(&format!("{prefix}_sigma_si"), s.covariance[0][1]);
        self.line(&format!("{prefix}_delta_minus_sq"), fit.delta_minus_sq);
        self.line(&format!("{prefix}_delta_plus_sq"), fit.delta_plus_sq);
        if fit.surface_se.is_some() {
            self.line(&format!("{prefix}_se_minus"), fit.se_minus);
            self.line(&format!("{prefix}_se_plus"), fit.se_plus);
        }
        self.line(&format!("{prefix}_iterations"), fit.iterations);
        self.line(&format!("{prefix}_log_likelihood"), fit.log_likelihood);
    }
}

fn correlation_files(cfg: &ScenarioConfig, o: &CorrelationOutcome) -> Vec<(&'static str, String)> {
    let m = &o.momentum_density;
    let p = &o.position_density;
    let r = &o.rotated_position;
    let marginal = r.marginal_minus();
    let mut x_minus = String::from("x_minus_mm,density\n");
    for (j, d) in marginal.density().iter().enumerate() {
        let _ = writeln!(x_minus, "{},{d:e}", marginal.axis.coord(j));
    }

    let mut report = Report::new(cfg, "correlation");
    let st = &o.statistics;
    report.line(
        "grid_marginal_delta_x_minus_sq_mm2",
        st.marginal_delta_x_minus_sq,
    );
    report.line("grid_slice_delta_x_minus_sq_mm2", st.slice_delta_x_minus_sq);
    report.line("grid_x_minus_skewness", st.x_minus_skewness);
    report.line("grid_delta_kappa_plus_sq_per_mm2", st.delta_kappa_plus_sq);
    report.optional(
        "predicted_slice_delta_x_minus_sq_mm2",
        st.predicted_slice_delta_x_minus_sq,
    );
    report.optional(
        "predicted_marginal_delta_x_minus_sq_mm2",
        st.predicted_marginal_delta_x_minus_sq,
    );
    if let Some(f) = &o.fit_position {
        report.fit("fit_position", f);
    }
    if let Some(f) = &o.fit_momentum {
        report.fit("fit_momentum", f);
    }
    if let Some(w) = &o.witness {
        report.line("witness_delta_x_minus_sq_mm2", w.delta_x_minus_sq);
        report.line("witness_delta_kappa_plus_sq_per_mm2", w.delta_kappa_plus_sq);
        report.line("witness_product", w.product);
        report.line("witness_product_se", w.product_se);
        report.line("witness_bound", w.bound);
        report.line("witness_violated", w.violated);
    }

    vec![
        (
            "density_momentum.csv",
            density_csv(
                ["kappa_s_per_mm", "kappa_i_per_mm"],
                m.axis_s(),
                m.axis_i(),
                m.mass(),
            ),
        ),
        (
            "density_position.csv",
            density_csv(["x_s_mm", "x_i_mm"], p.axis_s(), p.axis_i(), p.mass()),
        ),
        (
            "density_position_pm.csv",
            density_csv(
                ["x_plus_mm", "x_minus_mm"],
                r.axis_plus(),
                r.axis_minus(),
                r.mass(),
            ),
        ),
        ("marginal_x_minus.csv", x_minus),
        (
            "histogram_position.csv",
            histogram_csv(&o.histogram_position, None),
        ),
        (
            "histogram_momentum.csv",
            histogram_csv(&o.histogram_momentum, Some(&cfg.lens)),
        ),
        ("report.txt", report.0),
    ]
}

fn imaging_files(cfg: &ScenarioConfig, o: &ImagingOutcome) -> Vec<(&'static str, String)> {
    let img = &o.image;
    let mut trace = String::from("rho_i_mm,kappa_i_per_mm,rate\n");
    for (rho, rate) in img.positions.iter().zip(&img.rates) {
        let _ = writeln!(trace, "{rho},{},{rate}", cfg.lens.kappa(*rho));
    }
    let mut report = Report::new(cfg, "imaging");
    report.line("visibility", img.visibility);
    report.line("low_modulation", img.low_modulation);
    match img.period {
        Some(p) => report.line("period_mm", p),
        None => report.line("period_mm", "none"),
    }
    report.line("transmitted_mass", img.transmitted_mass);

    let m = &img.momentum_density;
    let p = &img.position_density;
    let label = |b, arm| axis_label(b, arm);
    vec![
        (
            "density_momentum.csv",
            density_csv(
                [&label(m.basis(), "s"), &label(m.basis(), "i")],
                m.axis_s(),
                m.axis_i(),
                m.mass(),
            ),
        ),
        (
            "density_position.csv",
            density_csv(
                [&label(p.basis(), "s"), &label(p.basis(), "i")],
                p.axis_s(),
                p.axis_i(),
                p.mass(),
            ),
        ),
        ("trace.csv", trace),
        ("report.txt", report.0),
    ]
}

/// Writes every output file of `outcome` into `dir`, creating it if
/// needed, and returns the paths in writing order.
pub fn write_outputs(
    cfg: &ScenarioConfig,
    outcome: &ScenarioOutcome,
    dir: &Path,
) -> Result<Vec<PathBuf>, ScenarioError> {
    fs::create_dir_all(dir).map_err(|e| ScenarioError::io(dir, e))?;
    let files = match outcome {
        ScenarioOutcome::Correlation(o) => correlation_files(cfg, o),
        ScenarioOutcome::Imaging(o) => imaging_files(cfg, o),
    };
    files
        .into_iter()
        .map(|(name, contents)| {
            let path = dir.join(name);
            fs::write(&path, contents).map_err(|e| ScenarioError::io(&path, e))?;
            Ok(path)
        })
        .collect()
}
