//! Slit-scan coincidence measurement with finite slit width and optional
//! shot noise.

use ndarray::{Array1, Array2};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};
use crate::grid::{Basis, Grid1D, JointDensity};
use crate::parallel::map_indexed;
use crate::units::FourierLens;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NoiseModel {
    /// Expected counts, real-valued.
    Noiseless,
    /// Independent Poisson draws per bin.
    Poisson,
}

/// Closed interval of slit-center positions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRange {
    pub start: f64,
    pub end: f64,
}

impl ScanRange {
    pub fn new(start: f64, end: f64) -> Self {
        Self { start, end }
    }

    pub fn symmetric(half_width: f64) -> Self {
        Self::new(-half_width, half_width)
    }

    /// Slit centers `start, start + step, …` not beyond `end`.
    pub fn positions(&self, step: f64) -> Vec<f64> {
        if self.end < self.start {
            return Vec::new();
        }
        let count = ((self.end - self.start) / step + 1e-9).floor() as usize + 1;
        (0..count).map(|k| self.start + k as f64 * step).collect()
    }

    fn scaled(&self, factor: f64) -> Self {
        Self::new(self.start * factor, self.end * factor)
    }
}

/// Slit geometry and count budget. Lengths are in the coordinate of the
/// density being scanned; [`SlitScanConfig::through_lens`] converts a
/// Fourier-plane scan in mm to wavenumbers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlitScanConfig {
    pub slit_width: f64,
    pub step: f64,
    pub range_s: ScanRange,
    pub range_i: ScanRange,
    pub total_counts: f64,
    pub seed: u64,
    pub noise: NoiseModel,
}

impl Default for SlitScanConfig {
    fn default() -> Self {
        Self {
            slit_width: 0.1,
            step: 0.1,
            range_s: ScanRange::symmetric(2.0),
            range_i: ScanRange::symmetric(2.0),
            total_counts: 1e5,
            seed: 0,
            noise: NoiseModel::Poisson,
        }
    }
}

impl SlitScanConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.slit_width.is_finite() && self.slit_width > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "slit width must be positive, got {}",
                self.slit_width
            )));
        }
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "scan step must be positive, got {}",
                self.step
            )));
        }
        if !(self.total_counts.is_finite() && self.total_counts >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "total counts must be non-negative, got {}",
                self.total_counts
            )));
        }
        for r in [self.range_s, self.range_i] {
            if !(r.start.is_finite() && r.end.is_finite()) {
                return Err(Error::InvalidParameter("scan range must be finite".into()));
            }
        }
        Ok(())
    }

    /// Same scan with every length mapped from Fourier-plane mm to mm⁻¹.
    pub fn through_lens(&self, lens: &FourierLens) -> Self {
        let factor = 1.0 / lens.scale();
        Self {
            slit_width: self.slit_width * factor,
            step: self.step * factor,
            range_s: self.range_s.scaled(factor),
            range_i: self.range_i.scaled(factor),
            ..*self
        }
    }
}

/// Coincidence counts per slit pair. Rows follow `positions_s`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoincidenceHistogram {
    pub positions_s: Vec<f64>,
    pub positions_i: Vec<f64>,
    pub counts: Array2<f64>,
    pub basis: Basis,
    pub config: SlitScanConfig,
}

impl CoincidenceHistogram {
    pub fn new(
        positions_s: Vec<f64>,
        positions_i: Vec<f64>,
        counts: Array2<f64>,
        basis: Basis,
        config: SlitScanConfig,
    ) -> Result<Self> {
        if counts.dim() != (positions_s.len(), positions_i.len()) {
            return Err(Error::InvalidParameter(format!(
                "counts shape {:?} does not match {}×{} slit positions",
                counts.dim(),
                positions_s.len(),
                positions_i.len()
            )));
        }
        if counts.iter().any(|&c| !(c.is_finite() && c >= 0.0)) {
            return Err(Error::InvalidParameter(
                "counts must be finite and non-negative".into(),
            ));
        }
        Ok(Self {
            positions_s,
            positions_i,
            counts,
            basis,
            config,
        })
    }

    pub fn nonzero_bins(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0.0).count()
    }
}

/// Fractional overlap of a slit window with the grid cells it touches.
#[derive(Debug, Clone)]
pub(crate) struct Window {
    pub first: usize,
    pub weights: Vec<f64>,
}

pub(crate) fn slit_windows(axis: &Grid1D, centers: &[f64], width: f64) -> Result<Vec<Window>> {
    let dx = axis.spacing();
    let lower = axis.lower_edge();
    let tolerance = 1e-9 * dx;
    centers
        .iter()
        .map(|&c| {
            let (a, b) = (c - 0.5 * width, c + 0.5 * width);
            if a < lower - tolerance || b > axis.upper_edge() + tolerance {
                return Err(Error::OutOfRange(format!(
                    "slit window [{a:.6}, {b:.6}] leaves the grid [{:.6}, {:.6}]",
                    lower,
                    axis.upper_edge()
                )));
            }
            let first = (((a - lower) / dx).floor().max(0.0) as usize).min(axis.len() - 1);
            let last = (((b - lower) / dx).ceil() as usize).clamp(first + 1, axis.len());
            let weights = (first..last)
                .map(|j| {
                    let lo = lower + j as f64 * dx;
                    let hi = lo + dx;
                    ((b.min(hi) - a.max(lo)) / dx).max(0.0)
                })
                .collect();
            Ok(Window { first, weights })
        })
        .collect()
}

/// Expected mass seen through each window of a 1D mass profile.
pub(crate) fn scan_profile(mass: &Array1<f64>, windows: &[Window]) -> Array1<f64> {
    windows
        .iter()
        .map(|w| {
            w.weights
                .iter()
                .enumerate()
                .map(|(k, f)| f * mass[w.first + k])
                .sum()
        })
        .collect()
}

/// Probability detected by each slit pair, before scaling to counts.
fn expected_mass(density: &JointDensity, ws: &[Window], wi: &[Window]) -> Array2<f64> {
    let mass = density.mass();
    let ni = mass.ncols();
    // Signal windows first: (n_s positions × ni cells).
    let rows = map_indexed(ws.len(), |p| {
        let w = &ws[p];
        let mut acc = vec![0.0; ni];
        for (k, f) in w.weights.iter().enumerate() {
            for (a, m) in acc.iter_mut().zip(mass.row(w.first + k)) {
                *a += f * m;
            }
        }
        acc
    });
    let mut out = Array2::zeros((ws.len(), wi.len()));
    for (p, row) in rows.iter().enumerate() {
        for (q, w) in wi.iter().enumerate() {
            out[[p, q]] = w
                .weights
                .iter()
                .enumerate()
                .map(|(k, f)| f * row[w.first + k])
                .sum();
        }
    }
    out
}

/// Separable boxcar integration of the density over each slit pair,
/// scaled to `total_counts`, with optional Poisson noise.
pub fn slit_scan(density: &JointDensity, cfg: &SlitScanConfig) -> Result<CoincidenceHistogram> {
    cfg.validate()?;
    let density = density.normalized()?;
    let positions_s = cfg.range_s.positions(cfg.step);
    let positions_i = cfg.range_i.positions(cfg.step);
    let ws = slit_windows(density.axis_s(), &positions_s, cfg.slit_width)?;
    let wi = slit_windows(density.axis_i(), &positions_i, cfg.slit_width)?;
    let rates = expected_mass(&density, &ws, &wi) * cfg.total_counts;
    let counts = match cfg.noise {
        NoiseModel::Noiseless => rates,
        NoiseModel::Poisson => poisson_counts(&rates, cfg.seed)?,
    };
    CoincidenceHistogram::new(positions_s, positions_i, counts, density.basis(), *cfg)
}

/// Poisson draws with means `rates`, one ChaCha stream per bin so the
/// result does not depend on evaluation order.
pub fn poisson_counts(rates: &Array2<f64>, seed: u64) -> Result<Array2<f64>> {
    let ncols = rates.ncols();
    let flat = map_indexed(rates.len(), |b| {
        let mean = rates[[b / ncols, b % ncols]];
        draw_poisson(mean, seed, b as u64)
    });
    let flat = flat.into_iter().collect::<Result<Vec<f64>>>()?;
    Ok(Array2::from_shape_vec(rates.dim(), flat).expect("shape preserved"))
}

pub(crate) fn draw_poisson(mean: f64, seed: u64, stream: u64) -> Result<f64> {
    if mean <= 0.0 {
        return Ok(0.0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let dist = Poisson::new(mean)
        .map_err(|e| Error::InvalidParameter(format!("Poisson mean {mean}: {e}")))?;
    Ok(dist.sample(&mut rng))
}

/// Sum of all counts.
pub fn expected_counts_total(hist: &CoincidenceHistogram) -> f64 {
    hist.counts.sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::marginals;
    use approx::assert_relative_eq;

    fn gaussian_density(n: usize, extent: f64, sigma: f64) -> JointDensity {
        let g = Grid1D::position(n, extent).unwrap();
        let c = g.coords();
        let mass = Array2::from_shape_fn((n, n), |(j, k)| {
            (-(c[j] * c[j] + c[k] * c[k]) / (2.0 * sigma * sigma)).exp()
        });
        let total = mass.sum();
        JointDensity::new(g, g, Basis::Position, mass / total).unwrap()
    }

    fn noiseless(width: f64, step: f64, half: f64, total: f64) -> SlitScanConfig {
        SlitScanConfig {
            slit_width: width,
            step,
            range_s: ScanRange::symmetric(half),
            range_i: ScanRange::symmetric(half),
            total_counts: total,
            seed: 1,
            noise: NoiseModel::Noiseless,
        }
    }

    #[test]
    fn scan_positions() {
        assert_eq!(ScanRange::symmetric(2.0).positions(0.1).len(), 41);
        assert!(ScanRange::new(1.0, 0.0).positions(0.1).is_empty());
        assert_eq!(ScanRange::new(0.0, 0.0).positions(0.1), vec![0.0]);
    }

    #[test]
    fn one_cell_slit_reproduces_density() {
        let d = gaussian_density(64, 4.0, 0.5);
        let g = d.axis_s();
        let dx = g.spacing();
        let cfg = SlitScanConfig {
            slit_width: dx,
            step: dx,
            range_s: ScanRange::new(g.coord(0), g.coord(63)),
            range_i: ScanRange::new(g.coord(0), g.coord(63)),
            ..noiseless(dx, dx, 0.0, 1000.0)
        };
        let h = slit_scan(&d, &cfg).unwrap();
        assert_eq!(h.counts.dim(), (64, 64));
        for ((j, k), c) in h.counts.indexed_iter() {
            assert!((c - 1000.0 * d.mass()[[j, k]]).abs() <= 1e-9 * 1000.0 * d.mass()[[32, 32]]);
        }
        assert_relative_eq!(expected_counts_total(&h), 1000.0, max_relative = 1e-12);
    }

    #[test]
    fn boxcar_broadening_adds_w2_over_12() {
        let sigma = 0.05;
        let w = 0.1;
        let d = gaussian_density(1024, 2.0, sigma);
        let step = d.axis_s().spacing();
        let cfg = noiseless(w, step, 0.6, 1.0);
        let h = slit_scan(&d, &cfg).unwrap();
        let row: Vec<f64> = h.counts.sum_axis(ndarray::Axis(1)).to_vec();
        let total: f64 = row.iter().sum();
        let var: f64 = row
            .iter()
            .zip(&h.positions_s)
            .map(|(c, x)| c * x * x)
            .sum::<f64>()
            / total;
        let expected = (sigma * sigma + w * w / 12.0).sqrt();
        assert_relative_eq!(var.sqrt(), expected, max_relative = 0.02);
    }

    #[test]
    fn poisson_scan_is_reproducible() {
        let d = gaussian_density(256, 6.0, 0.6);
        let cfg = SlitScanConfig {
            noise: NoiseModel::Poisson,
            seed: 42,
            ..noiseless(0.1, 0.1, 2.0, 1e4)
        };
        let a = slit_scan(&d, &cfg).unwrap();
        let b = slit_scan(&d, &cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.counts.iter().all(|c| c.fract() == 0.0 && *c >= 0.0));
        let other = slit_scan(&d, &SlitScanConfig { seed: 43, ..cfg }).unwrap();
        assert_ne!(a.counts, other.counts);
    }

    #[test]
    fn totals() {
        let d = gaussian_density(256, 8.0, 0.5);
        let full = slit_scan(&d, &noiseless(0.125, 0.125, 3.9375, 5000.0)).unwrap();
        assert_relative_eq!(expected_counts_total(&full), 5000.0, max_relative = 1e-9);

        let half = SlitScanConfig {
            range_s: ScanRange::new(0.0625, 3.9375),
            ..noiseless(0.125, 0.125, 3.9375, 5000.0)
        };
        let h = slit_scan(&d, &half).unwrap();
        assert_relative_eq!(expected_counts_total(&h), 2500.0, max_relative = 1e-6);

        let empty = SlitScanConfig {
            range_s: ScanRange::new(1.0, 0.0),
            ..noiseless(0.1, 0.1, 1.0, 5000.0)
        };
        assert_eq!(expected_counts_total(&slit_scan(&d, &empty).unwrap()), 0.0);
    }

    #[test]
    fn poisson_total_within_five_sigma() {
        let d = gaussian_density(256, 8.0, 0.5);
        let cfg = SlitScanConfig {
            noise: NoiseModel::Poisson,
            ..noiseless(0.1, 0.1, 2.0, 2e4)
        };
        let expected = slit_scan(
            &d,
            &SlitScanConfig {
                noise: NoiseModel::Noiseless,
                ..cfg
            },
        )
        .unwrap();
        let mean = expected_counts_total(&expected);
        let noisy = expected_counts_total(&slit_scan(&d, &cfg).unwrap());
        assert!((noisy - mean).abs() < 5.0 * mean.sqrt());
    }

    #[test]
    fn window_leaving_grid_is_rejected() {
        let d = gaussian_density(64, 2.0, 0.2);
        assert!(matches!(
            slit_scan(&d, &noiseless(0.1, 0.1, 1.0, 1.0)),
            Err(Error::OutOfRange(_))
        ));
    }

    #[test]
    fn separable_density_gives_separable_histogram() {
        let g = Grid1D::position(128, 4.0).unwrap();
        let c = g.coords();
        let mass = Array2::from_shape_fn((128, 128), |(j, k)| {
            (-(c[j] - 0.3).powi(2) / 0.5).exp() * (-(c[k] + 0.1).powi(2) / 0.2).exp()
        });
        let total = mass.sum();
        let d = JointDensity::new(g, g, Basis::Position, mass / total).unwrap();
        let h = slit_scan(&d, &noiseless(0.1, 0.1, 1.5, 1.0)).unwrap();
        let rs = h.counts.sum_axis(ndarray::Axis(1));
        let ri = h.counts.sum_axis(ndarray::Axis(0));
        let t = h.counts.sum();
        for ((p, q), v) in h.counts.indexed_iter() {
            assert!((v - rs[p] * ri[q] / t).abs() < 1e-12);
        }
    }

    #[test]
    fn smoothing_never_narrows_marginal() {
        let d = gaussian_density(512, 4.0, 0.3);
        let dx = d.axis_s().spacing();
        let (ms, _) = marginals(&d);
        for cells in [1usize, 3, 8, 20] {
            let cfg = noiseless(cells as f64 * dx, dx, 1.5, 1.0);
            let h = slit_scan(&d, &cfg).unwrap();
            let row = h.counts.sum_axis(ndarray::Axis(1));
            let t = row.sum();
            let var: f64 = row
                .iter()
                .zip(&h.positions_s)
                .map(|(c, x)| c * x * x)
                .sum::<f64>()
                / t;
            assert!(
                var >= ms.variance() * (1.0 - 1e-6),
                "{cells}: {var} < {}",
                ms.variance()
            );
        }
    }

    #[test]
    fn poisson_mean_converges() {
        let d = gaussian_density(64, 8.0, 1.0);
        let cfg = noiseless(1.0, 1.0, 2.0, 400.0);
        let expected = slit_scan(&d, &cfg).unwrap();
        let mut sum = Array2::<f64>::zeros(expected.counts.dim());
        let seeds = 100;
        for seed in 0..seeds {
            let h = slit_scan(
                &d,
                &SlitScanConfig {
                    noise: NoiseModel::Poisson,
                    seed,
                    ..cfg
                },
            )
            .unwrap();
            sum += &h.counts;
        }
        for (s, e) in sum.iter().zip(expected.counts.iter()) {
            let mean = s / seeds as f64;
            let se = (e / seeds as f64).sqrt();
            assert!((mean - e).abs() <= 3.0 * se + 1e-12, "{mean} vs {e}");
        }
    }

    #[test]
    fn lens_converts_fourier_plane_lengths() {
        let lens = FourierLens::apparatus_default();
        let cfg = SlitScanConfig::default().through_lens(&lens);
        assert_relative_eq!(cfg.slit_width, lens.kappa(0.1), max_relative = 1e-15);
        assert_relative_eq!(cfg.range_s.end, lens.kappa(2.0), max_relative = 1e-15);
        assert_eq!(cfg.total_counts, SlitScanConfig::default().total_counts);
    }
}
