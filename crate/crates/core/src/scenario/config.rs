//! Line-oriented `key = value` scenario files with `[section]` headers.
//!
//! ```text
//! name = fig2b
//! [crystal]
//! length_mm = 2
//! [correlation]
//! idler = 2, 0.01, mm^2
//! ```
//!
//! `#` starts a comment. Phase terms are `order, value, unit` triples and
//! may repeat; every other key appears at most once.

use std::collections::HashSet;
use std::fmt::{self, Write as _};
use std::path::PathBuf;

use thiserror::Error;

use crate::aberration::{PhaseDomain, PhaseProfile};
use crate::detection::{NoiseModel, ScanRange, SlitScanConfig};
use crate::ghost::BarObject;
use crate::spdc::{CrystalPumpConfig, PhaseMatching};
use crate::units::{wavenumber_from_wavelength, FourierLens};

/// Highest phase order accepted in a file.
const MAX_FILE_ORDER: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ConfigError {
    /// 1-based; 0 for problems not tied to one line.
    pub line: usize,
    pub message: String,
}

impl ConfigError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub points: usize,
    pub position_extent_mm: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            points: 1024,
            position_extent_mm: 10.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisConfig {
    pub fit: bool,
    /// Zero skips the Monte Carlo errors.
    pub monte_carlo_resamples: usize,
    pub seed: u64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            fit: true,
            monte_carlo_resamples: 200,
            seed: 0,
        }
    }
}

/// Momentum-domain phases for a correlation measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationSpec {
    pub signal: PhaseProfile,
    pub idler: PhaseProfile,
    /// Adds the apparatus' residual signal defocus.
    pub residual_defocus: bool,
}

impl Default for CorrelationSpec {
    fn default() -> Self {
        Self {
            signal: PhaseProfile::zero(PhaseDomain::Momentum),
            idler: PhaseProfile::zero(PhaseDomain::Momentum),
            residual_defocus: false,
        }
    }
}

/// Position-domain phases and bar object for a ghost-imaging run.
#[derive(Debug, Clone, PartialEq)]
pub struct ImagingSpec {
    pub object: BarObject,
    pub theta_s: PhaseProfile,
    pub theta_i: PhaseProfile,
}

impl Default for ImagingSpec {
    fn default() -> Self {
        Self {
            object: BarObject::default(),
            theta_s: PhaseProfile::zero(PhaseDomain::Position),
            theta_i: PhaseProfile::zero(PhaseDomain::Position),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioKind {
    Correlation(CorrelationSpec),
    Imaging(ImagingSpec),
}

/// Everything needed to run one scenario.
///
/// `scan` lengths are crystal-plane mm for position scans and Fourier-plane
/// mm (mapped through `lens`) for momentum scans and imaging.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub name: String,
    pub description: String,
    pub crystal: CrystalPumpConfig,
    pub grid: GridSpec,
    pub lens: FourierLens,
    pub scan: SlitScanConfig,
    pub analysis: AnalysisConfig,
    pub kind: ScenarioKind,
    pub output: Option<PathBuf>,
}

impl ScenarioConfig {
    /// Correlation scenario with default apparatus settings.
    pub fn correlation(name: &str, description: &str, spec: CorrelationSpec) -> Self {
        Self {
            name: name.to_string(),
            description: description.to_string(),
            crystal: CrystalPumpConfig::default(),
            grid: GridSpec::default(),
            lens: FourierLens::apparatus_default(),
            scan: SlitScanConfig::default(),
            analysis: AnalysisConfig::default(),
            kind: ScenarioKind::Correlation(spec),
            output: None,
        }
    }

    /// Imaging scenario with default apparatus settings.
    pub fn imaging(name: &str, description: &str, spec: ImagingSpec) -> Self {
        Self {
            kind: ScenarioKind::Imaging(spec),
            grid: GridSpec {
                points: 1024,
                position_extent_mm: 8.0,
            },
            ..Self::correlation(name, description, CorrelationSpec::default())
        }
    }
}

fn parse_f64(line: usize, key: &str, value: &str) -> Result<f64, ConfigError> {
    value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| ConfigError::at(line, format!("{key}: expected a number, got {value:?}")))
}

fn parse_usize(line: usize, key: &str, value: &str) -> Result<usize, ConfigError> {
    value.parse::<usize>().map_err(|_| {
        ConfigError::at(
            line,
            format!("{key}: expected a non-negative integer, got {value:?}"),
        )
    })
}

fn parse_u64(line: usize, key: &str, value: &str) -> Result<u64, ConfigError> {
    value.parse::<u64>().map_err(|_| {
        ConfigError::at(
            line,
            format!("{key}: expected a non-negative integer, got {value:?}"),
        )
    })
}

fn parse_bool(line: usize, key: &str, value: &str) -> Result<bool, ConfigError> {
    match value {
        "true" | "yes" | "on" => Ok(true),
        "false" | "no" | "off" => Ok(false),
        _ => Err(ConfigError::at(
            line,
            format!("{key}: expected true or false, got {value:?}"),
        )),
    }
}

fn parse_range(line: usize, key: &str, value: &str) -> Result<ScanRange, ConfigError> {
    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(ConfigError::at(
            line,
            format!("{key}: expected \"start, end\", got {value:?}"),
        ));
    }
    Ok(ScanRange::new(
        parse_f64(line, key, parts[0])?,
        parse_f64(line, key, parts[1])?,
    ))
}

/// Parses `order, value, unit` and checks the unit against the domain.
fn parse_term(
    line: usize,
    key: &str,
    value: &str,
    domain: PhaseDomain,
) -> Result<(usize, f64), ConfigError> {
    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(ConfigError::at(
            line,
            format!("{key}: expected \"order, value, unit\", got {value:?}"),
        ));
    }
    let order = parse_usize(line, key, parts[0])?;
    if order > MAX_FILE_ORDER {
        return Err(ConfigError::at(
            line,
            format!("{key}: order {order} exceeds {MAX_FILE_ORDER}"),
        ));
    }
    let coefficient = parse_f64(line, key, parts[1])?;
    let expected = domain.coefficient_unit(order);
    if parts[2] != expected {
        return Err(ConfigError::at(
            line,
            format!(
                "{key}: order-{order} {domain} coefficient must be in {expected}, got {}",
                parts[2]
            ),
        ));
    }
    Ok((order, coefficient))
}

fn add_term(
    profile: PhaseProfile,
    line: usize,
    term: (usize, f64),
) -> Result<PhaseProfile, ConfigError> {
    profile
        .with_derivative(term.0, term.1)
        .map_err(|e| ConfigError::at(line, e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Section {
    Top,
    Crystal,
    Grid,
    Optics,
    Scan,
    Analysis,
    Correlation,
    Imaging,
    Output,
}

impl Section {
    fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "crystal" => Section::Crystal,
            "grid" => Section::Grid,
            "optics" => Section::Optics,
            "scan" => Section::Scan,
            "analysis" => Section::Analysis,
            "correlation" => Section::Correlation,
            "imaging" => Section::Imaging,
            "output" => Section::Output,
            _ => return None,
        })
    }
}

/// Parses a scenario file.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let mut cfg = ScenarioConfig::correlation("", "", CorrelationSpec::default());
    let mut correlation: Option<CorrelationSpec> = None;
    let mut imaging: Option<ImagingSpec> = None;
    let mut grid_seen = false;
    let mut section = Section::Top;
    let mut seen_sections = HashSet::new();
    let mut seen_keys = HashSet::new();

    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(name) = content.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let name = name.trim();
            section = Section::parse(name)
                .ok_or_else(|| ConfigError::at(line, format!("unknown section [{name}]")))?;
            if !seen_sections.insert(section) {
                return Err(ConfigError::at(
                    line,
                    format!("section [{name}] appears twice"),
                ));
            }
            match section {
                Section::Correlation | Section::Imaging => {
                    if correlation.is_some() || imaging.is_some() {
                        return Err(ConfigError::at(
                            line,
                            "a scenario has either [correlation] or [imaging], not both",
                        ));
                    }
                    if section == Section::Correlation {
                        correlation = Some(CorrelationSpec::default());
                    } else {
                        imaging = Some(ImagingSpec::default());
                    }
                }
                Section::Grid => grid_seen = true,
                _ => {}
            }
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| {
                ConfigError::at(line, format!("expected key = value, got {content:?}"))
            })?;
        let repeatable = matches!(section, Section::Correlation | Section::Imaging)
            && matches!(key, "signal" | "idler");
        if !repeatable && !seen_keys.insert((section, key.to_string())) {
            return Err(ConfigError::at(line, format!("{key} is set twice")));
        }
        let unknown = || ConfigError::at(line, format!("unknown key {key:?} in this section"));

        match section {
            Section::Top => match key {
                "name" => cfg.name = value.to_string(),
                "description" => cfg.description = value.to_string(),
                _ => return Err(unknown()),
            },
            Section::Crystal => match key {
                "length_mm" => cfg.crystal.length_mm = parse_f64(line, key, value)?,
                "pump_wavenumber_per_mm" => {
                    cfg.crystal.pump_wavenumber = parse_f64(line, key, value)?
                }
                "pump_wavelength_mm" => {
                    cfg.crystal.pump_wavenumber =
                        wavenumber_from_wavelength(parse_f64(line, key, value)?)
                            .map_err(|e| ConfigError::at(line, e.to_string()))?
                }
                "alpha" => cfg.crystal.alpha = parse_f64(line, key, value)?,
                "pump_width_per_mm" => cfg.crystal.pump_width = parse_f64(line, key, value)?,
                "phase_matching" => {
                    cfg.crystal.phase_matching = match value {
                        "gaussian" => PhaseMatching::GaussianApprox,
                        "sinc" => PhaseMatching::ExactSinc,
                        _ => {
                            return Err(ConfigError::at(
                                line,
                                format!("phase_matching: expected gaussian or sinc, got {value:?}"),
                            ))
                        }
                    }
                }
                _ => return Err(unknown()),
            },
            Section::Grid => match key {
                "points" => cfg.grid.points = parse_usize(line, key, value)?,
                "position_extent_mm" => cfg.grid.position_extent_mm = parse_f64(line, key, value)?,
                _ => return Err(unknown()),
            },
            Section::Optics => {
                let (mut f, mut k) = (cfg.lens.focal_length_mm(), cfg.lens.wavenumber());
                match key {
                    "focal_length_mm" => f = parse_f64(line, key, value)?,
                    "wavenumber_per_mm" => k = parse_f64(line, key, value)?,
                    "wavelength_mm" => {
                        k = wavenumber_from_wavelength(parse_f64(line, key, value)?)
                            .map_err(|e| ConfigError::at(line, e.to_string()))?
                    }
                    _ => return Err(unknown()),
                }
                cfg.lens =
                    FourierLens::new(f, k).map_err(|e| ConfigError::at(line, e.to_string()))?;
            }
            Section::Scan => match key {
                "slit_width_mm" => cfg.scan.slit_width = parse_f64(line, key, value)?,
                "step_mm" => cfg.scan.step = parse_f64(line, key, value)?,
                "range_s_mm" => cfg.scan.range_s = parse_range(line, key, value)?,
                "range_i_mm" => cfg.scan.range_i = parse_range(line, key, value)?,
                "total_counts" => cfg.scan.total_counts = parse_f64(line, key, value)?,
                "seed" => cfg.scan.seed = parse_u64(line, key, value)?,
                "noise" => {
                    cfg.scan.noise = match value {
                        "poisson" => NoiseModel::Poisson,
                        "noiseless" => NoiseModel::Noiseless,
                        _ => {
                            return Err(ConfigError::at(
                                line,
                                format!("noise: expected poisson or noiseless, got {value:?}"),
                            ))
                        }
                    }
                }
                _ => return Err(unknown()),
            },
            Section::Analysis => match key {
                "fit" => cfg.analysis.fit = parse_bool(line, key, value)?,
                "monte_carlo_resamples" => {
                    cfg.analysis.monte_carlo_resamples = parse_usize(line, key, value)?
                }
                "seed" => cfg.analysis.seed = parse_u64(line, key, value)?,
                _ => return Err(unknown()),
            },
            Section::Correlation => {
                let spec = correlation.as_mut().expect("section opened");
                match key {
                    "signal" => {
                        let term = parse_term(line, key, value, PhaseDomain::Momentum)?;
                        spec.signal = add_term(spec.signal.clone(), line, term)?;
                    }
                    "idler" => {
                        let term = parse_term(line, key, value, PhaseDomain::Momentum)?;
                        spec.idler = add_term(spec.idler.clone(), line, term)?;
                    }
                    "residual_defocus" => spec.residual_defocus = parse_bool(line, key, value)?,
                    _ => return Err(unknown()),
                }
            }
            Section::Imaging => {
                let spec = imaging.as_mut().expect("section opened");
                match key {
                    "signal" => {
                        let term = parse_term(line, key, value, PhaseDomain::Position)?;
                        spec.theta_s = add_term(spec.theta_s.clone(), line, term)?;
                    }
                    "idler" => {
                        let term = parse_term(line, key, value, PhaseDomain::Position)?;
                        spec.theta_i = add_term(spec.theta_i.clone(), line, term)?;
                    }
                    "bar_width_mm" => spec.object.bar_width = parse_f64(line, key, value)?,
                    "period_mm" => spec.object.period = parse_f64(line, key, value)?,
                    "n_bars" => spec.object.n_bars = parse_usize(line, key, value)?,
                    "center_mm" => spec.object.center = parse_f64(line, key, value)?,
                    _ => return Err(unknown()),
                }
            }
            Section::Output => match key {
                "directory" => cfg.output = Some(PathBuf::from(value)),
                _ => return Err(unknown()),
            },
        }
    }

    cfg.kind = match (correlation, imaging) {
        (Some(c), None) => ScenarioKind::Correlation(c),
        (None, Some(i)) => {
            if !grid_seen {
                cfg.grid.position_extent_mm = 8.0;
            }
            ScenarioKind::Imaging(i)
        }
        _ => {
            return Err(ConfigError::at(
                0,
                "exactly one of [correlation] or [imaging] is required",
            ))
        }
    };
    if cfg.name.is_empty() {
        return Err(ConfigError::at(0, "name is required"));
    }
    validate(&cfg).map_err(|message| ConfigError::at(0, message))?;
    Ok(cfg)
}

fn validate(cfg: &ScenarioConfig) -> Result<(), String> {
    cfg.crystal.validate().map_err(|e| e.to_string())?;
    cfg.scan.validate().map_err(|e| e.to_string())?;
    crate::grid::Grid1D::position(cfg.grid.points, cfg.grid.position_extent_mm)
        .map_err(|e| e.to_string())?;
    if let ScenarioKind::Imaging(spec) = &cfg.kind {
        spec.object.validate().map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn write_profile(out: &mut String, key: &str, profile: &PhaseProfile) -> fmt::Result {
    for (order, &c) in profile.derivatives().iter().enumerate() {
        if c != 0.0 {
            writeln!(
                out,
                "{key} = {order}, {c}, {}",
                profile.domain().coefficient_unit(order)
            )?;
        }
    }
    Ok(())
}

/// Serializes a config so that [`parse_config`] returns an equal value.
pub fn format_config(cfg: &ScenarioConfig) -> String {
    let mut out = String::new();
    let s = &mut out;
    let _ = (|| -> fmt::Result {
        writeln!(s, "name = {}", cfg.name)?;
        if !cfg.description.is_empty() {
            writeln!(s, "description = {}", cfg.description)?;
        }
        let c = &cfg.crystal;
        writeln!(s, "\n[crystal]")?;
        writeln!(s, "length_mm = {}", c.length_mm)?;
        writeln!(s, "pump_wavenumber_per_mm = {}", c.pump_wavenumber)?;
        writeln!(s, "alpha = {}", c.alpha)?;
        writeln!(s, "pump_width_per_mm = {}", c.pump_width)?;
        let pm = match c.phase_matching {
            PhaseMatching::GaussianApprox => "gaussian",
            PhaseMatching::ExactSinc => "sinc",
        };
        writeln!(s, "phase_matching = {pm}")?;
        writeln!(s, "\n[grid]")?;
        writeln!(s, "points = {}", cfg.grid.points)?;
        writeln!(s, "position_extent_mm = {}", cfg.grid.position_extent_mm)?;
        writeln!(s, "\n[optics]")?;
        writeln!(s, "focal_length_mm = {}", cfg.lens.focal_length_mm())?;
        writeln!(s, "wavenumber_per_mm = {}", cfg.lens.wavenumber())?;
        let sc = &cfg.scan;
        writeln!(s, "\n[scan]")?;
        writeln!(s, "slit_width_mm = {}", sc.slit_width)?;
        writeln!(s, "step_mm = {}", sc.step)?;
        writeln!(s, "range_s_mm = {}, {}", sc.range_s.start, sc.range_s.end)?;
        writeln!(s, "range_i_mm = {}, {}", sc.range_i.start, sc.range_i.end)?;
        writeln!(s, "total_counts = {}", sc.total_counts)?;
        let noise = match sc.noise {
            NoiseModel::Poisson => "poisson",
            NoiseModel::Noiseless => "noiseless",
        };
        writeln!(s, "noise = {noise}")?;
        writeln!(s, "seed = {}", sc.seed)?;
        writeln!(s, "\n[analysis]")?;
        writeln!(s, "fit = {}", cfg.analysis.fit)?;
        writeln!(
            s,
            "monte_carlo_resamples = {}",
            cfg.analysis.monte_carlo_resamples
        )?;
        writeln!(s, "seed = {}", cfg.analysis.seed)?;
        match &cfg.kind {
            ScenarioKind::Correlation(spec) => {
                writeln!(s, "\n[correlation]")?;
                write_profile(s, "signal", &spec.signal)?;
                write_profile(s, "idler", &spec.idler)?;
                writeln!(s, "residual_defocus = {}", spec.residual_defocus)?;
            }
            ScenarioKind::Imaging(spec) => {
                writeln!(s, "\n[imaging]")?;
                writeln!(s, "bar_width_mm = {}", spec.object.bar_width)?;
                writeln!(s, "period_mm = {}", spec.object.period)?;
                writeln!(s, "n_bars = {}", spec.object.n_bars)?;
                writeln!(s, "center_mm = {}", spec.object.center)?;
                write_profile(s, "signal", &spec.theta_s)?;
                write_profile(s, "idler", &spec.theta_i)?;
            }
        }
        if let Some(dir) = &cfg.output {
            writeln!(s, "\n[output]")?;
            writeln!(s, "directory = {}", dir.display())?;
        }
        Ok(())
    })();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
name = demo
description = one-arm defocus
[crystal]
length_mm = 2   # BBO
alpha = 0.455
pump_width_per_mm = 2
[scan]
range_s_mm = -1.5, 1.5
noise = noiseless
[correlation]
idler = 2, 0.01, mm^2
idler = 3, 2e-5, mm^3
";

    #[test]
    fn parses_sample() {
        let cfg = parse_config(SAMPLE).unwrap();
        assert_eq!(cfg.name, "demo");
        assert_eq!(cfg.scan.range_s, ScanRange::new(-1.5, 1.5));
        assert_eq!(cfg.scan.noise, NoiseModel::Noiseless);
        let ScenarioKind::Correlation(spec) = &cfg.kind else {
            panic!("expected correlation")
        };
        assert_eq!(spec.idler.derivative(2), 0.01);
        assert_eq!(spec.idler.derivative(3), 2e-5);
        assert!(spec.signal.is_zero());
        assert_eq!(cfg.grid, GridSpec::default());
    }

    #[test]
    fn round_trips_through_text() {
        let cfg = parse_config(SAMPLE).unwrap();
        let again = parse_config(&format_config(&cfg)).unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn imaging_defaults_to_eight_mm() {
        let cfg = parse_config("name = g\n[imaging]\nidler = 2, 73.7, mm^-2\n").unwrap();
        assert_eq!(cfg.grid.position_extent_mm, 8.0);
        let ScenarioKind::Imaging(spec) = &cfg.kind else {
            panic!("expected imaging")
        };
        assert_eq!(spec.theta_i.derivative(2), 73.7);
        assert_eq!(spec.object, BarObject::default());
    }

    fn error_of(text: &str) -> ConfigError {
        parse_config(text).unwrap_err()
    }

    #[test]
    fn diagnostics_carry_line_numbers() {
        assert_eq!(
            error_of("name = x\n[crystal]\nlength_mm = abc\n[correlation]\n").line,
            3
        );
        assert_eq!(error_of("name = x\n[lasers]\n").line, 2);
        let e = error_of("name = x\n[correlation]\nidler = 2, 0.01, mm^-2\n");
        assert_eq!(e.line, 3);
        assert!(e.message.contains("mm^2"));
        assert_eq!(
            error_of("name = x\n[crystal]\nalpha = 1\nalpha = 2\n[correlation]\n").line,
            4
        );
        assert_eq!(error_of("name = x\nwhat\n").line, 2);
        assert_eq!(
            error_of("name = x\n[correlation]\nidler = 2, 0.01\n").line,
            3
        );
    }

    #[test]
    fn exactly_one_kind() {
        assert!(error_of("name = x\n").message.contains("exactly one"));
        let both = error_of("name = x\n[correlation]\n[imaging]\n");
        assert_eq!(both.line, 3);
    }

    #[test]
    fn invalid_values_are_config_errors() {
        assert!(parse_config("name = x\n[crystal]\nlength_mm = -2\n[correlation]\n").is_err());
        assert!(parse_config("name = x\n[grid]\npoints = 1000\n[correlation]\n").is_err());
        assert!(parse_config("name = x\n[correlation]\n").is_ok());
        assert!(parse_config("[correlation]\n").is_err());
    }
}
