//! Run configuration file.
//!
//! TOML with the sections `[mirrors]`, `[dipole]`, `[detuning]`, `[drive]`,
//! `[scan]` and `[output]`. Every section and key is optional; missing values
//! fall back to the defaults below. Invalid values are reported with the line
//! they appear on.

use std::ops::Range;
use std::path::PathBuf;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};
use serde_json::json;
use toml::Spanned;

use super::CliError;
use crate::cavity::{CavityConfig, Detuning, DipoleOrientation, Position};
use crate::fieldmap::Drive;

pub const DEFAULT_RHO: f64 = 0.98;
pub const DEFAULT_THETA_M_DEG: f64 = 45.0;
/// R = 1 cm at 780 nm.
pub const DEFAULT_K_R: f64 = 8.0e4;
/// Seventeen significant digits reproduce every f64 exactly.
pub const DEFAULT_PRECISION: usize = 17;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    mirrors: RawMirrors,
    #[serde(default)]
    dipole: RawDipole,
    #[serde(default)]
    detuning: RawDetuning,
    #[serde(default)]
    drive: RawDrive,
    #[serde(default)]
    scan: RawScan,
    #[serde(default)]
    output: RawOutput,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMirrors {
    rho: Option<Spanned<f64>>,
    theta_m_deg: Option<Spanned<f64>>,
    #[serde(rename = "kR")]
    k_r: Option<Spanned<f64>>,
    diffraction_correction: Option<bool>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawOrientation {
    Named(String),
    Vector([f64; 3]),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDipole {
    orientation: Option<Spanned<RawOrientation>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDetuning {
    linewidths: Option<Spanned<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDrive {
    pi_e: Option<Spanned<f64>>,
    rabi: Option<Spanned<f64>>,
    laser_detuning: Option<Spanned<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScan {
    #[serde(rename = "type")]
    kind: Option<Spanned<String>>,
    start: Option<Spanned<f64>>,
    stop: Option<Spanned<f64>>,
    n_points: Option<Spanned<i64>>,
    x_start: Option<Spanned<f64>>,
    x_stop: Option<Spanned<f64>>,
    x_points: Option<Spanned<i64>>,
    offset: Option<Spanned<[f64; 3]>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    path: Option<String>,
    format: Option<Spanned<String>>,
    precision: Option<Spanned<i64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown output format {other:?}; expected csv or json")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanKind {
    Detuning,
    Axial,
    Transverse,
    Plane,
}

/// Scan settings as written; each subcommand fills in its own defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanSettings {
    pub kind: Option<ScanKind>,
    kind_line: usize,
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub n_points: Option<usize>,
    pub x_start: Option<f64>,
    pub x_stop: Option<f64>,
    pub x_points: Option<usize>,
    pub offset: Position,
}

impl ScanSettings {
    /// Errors unless the configured scan type is one of `allowed`.
    pub fn require_kind(&self, allowed: &[ScanKind], command: &str) -> Result<Option<ScanKind>, CliError> {
        match self.kind {
            Some(k) if !allowed.contains(&k) => Err(CliError::Config(format!(
                "line {}: scan type {:?} is not available for `{command}`",
                self.kind_line, k
            ))),
            k => Ok(k),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSettings {
    pub path: Option<PathBuf>,
    pub format: Format,
    /// Significant digits of every number written.
    pub precision: usize,
}

/// Fully validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub cavity: CavityConfig,
    pub orientation: DipoleOrientation,
    pub detuning: Detuning,
    pub drive: Option<Drive>,
    pub scan: ScanSettings,
    pub output: OutputSettings,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig::from_toml_str("").expect("defaults are valid")
    }
}

struct Source<'a>(&'a str);

impl Source<'_> {
    fn line(&self, span: Range<usize>) -> usize {
        self.0[..span.start.min(self.0.len())].matches('\n').count() + 1
    }

    fn error<T>(&self, value: &Spanned<T>, message: impl std::fmt::Display) -> CliError {
        CliError::Config(format!("line {}: {message}", self.line(value.span())))
    }
}

fn count(source: &Source, value: &Spanned<i64>, min: i64, what: &str) -> Result<usize, CliError> {
    if *value.get_ref() < min {
        return Err(source.error(value, format!("{what} must be at least {min}, got {}", value.get_ref())));
    }
    Ok(*value.get_ref() as usize)
}

impl RunConfig {
    pub fn from_path(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn from_toml_str(text: &str) -> Result<Self, CliError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        let src = Source(text);

        let m = &raw.mirrors;
        let rho = m.rho.as_ref().map_or(DEFAULT_RHO, |v| *v.get_ref());
        let theta_deg = m.theta_m_deg.as_ref().map_or(DEFAULT_THETA_M_DEG, |v| *v.get_ref());
        let k_r = m.k_r.as_ref().map_or(DEFAULT_K_R, |v| *v.get_ref());
        let correction = m.diffraction_correction.unwrap_or(false);
        let cavity = CavityConfig::from_degrees(rho, k_r, theta_deg, correction).map_err(|e| {
            // point at the value most likely responsible
            let culprit = if !(0.0..1.0).contains(&rho) {
                m.rho.as_ref()
            } else if !(k_r >= crate::cavity::MIN_K_R_MIRROR) {
                m.k_r.as_ref()
            } else {
                m.theta_m_deg.as_ref()
            };
            match culprit {
                Some(v) => src.error(v, e),
                None => CliError::Config(format!("[mirrors]: {e}")),
            }
        })?;

        let orientation = match &raw.dipole.orientation {
            None => DipoleOrientation::Isotropic,
            Some(v) => match v.get_ref() {
                RawOrientation::Named(name) => match name.as_str() {
                    "parallel" => DipoleOrientation::Parallel,
                    "perpendicular" => DipoleOrientation::Perpendicular,
                    "isotropic" => DipoleOrientation::Isotropic,
                    other => {
                        return Err(src.error(
                            v,
                            format!("unknown orientation {other:?}; expected parallel, perpendicular, isotropic or [x, y, z]"),
                        ))
                    }
                },
                RawOrientation::Vector(d) => {
                    DipoleOrientation::fixed(Vector3::from(*d)).map_err(|e| src.error(v, e))?
                }
            },
        };

        let detuning = match &raw.detuning.linewidths {
            None => Detuning::resonant(),
            Some(v) => Detuning::from_linewidths(*v.get_ref(), rho).map_err(|e| src.error(v, e))?,
        };

        let d = &raw.drive;
        let drive = match (&d.pi_e, &d.rabi, &d.laser_detuning) {
            (None, None, None) => None,
            (Some(p), None, None) => {
                let value = *p.get_ref();
                if !(0.0..=0.5).contains(&value) {
                    return Err(src.error(p, format!("pi_e = {value} must lie in [0, 0.5]")));
                }
                Some(Drive::Population(value))
            }
            (None, Some(r), l) => {
                if !(*r.get_ref() >= 0.0) {
                    return Err(src.error(r, "rabi frequency must be non-negative"));
                }
                Some(Drive::WeakDrive {
                    rabi: *r.get_ref(),
                    laser_detuning: l.as_ref().map_or(0.0, |l| *l.get_ref()),
                })
            }
            (None, None, Some(l)) => return Err(src.error(l, "laser_detuning needs rabi")),
            (Some(p), _, _) => {
                return Err(src.error(p, "pi_e and (rabi, laser_detuning) are mutually exclusive"));
            }
        };

        let s = &raw.scan;
        let kind = match &s.kind {
            None => None,
            Some(v) => Some(match v.get_ref().as_str() {
                "detuning" => ScanKind::Detuning,
                "axial" => ScanKind::Axial,
                "transverse" => ScanKind::Transverse,
                "plane" => ScanKind::Plane,
                other => {
                    return Err(src.error(
                        v,
                        format!("unknown scan type {other:?}; expected detuning, axial, transverse or plane"),
                    ))
                }
            }),
        };
        let n_points = s.n_points.as_ref().map(|v| count(&src, v, 2, "n_points")).transpose()?;
        let x_points = s.x_points.as_ref().map(|v| count(&src, v, 2, "x_points")).transpose()?;
        if let (Some(a), Some(b)) = (&s.start, &s.stop) {
            if !(a.get_ref() < b.get_ref()) {
                return Err(src.error(b, format!("scan stop {} must exceed start {}", b.get_ref(), a.get_ref())));
            }
        }
        if let (Some(a), Some(b)) = (&s.x_start, &s.x_stop) {
            if !(a.get_ref() < b.get_ref()) {
                return Err(src.error(b, format!("x_stop {} must exceed x_start {}", b.get_ref(), a.get_ref())));
            }
        }
        let offset = match &s.offset {
            None => Position::center(),
            Some(v) => Position::new(Vector3::from(*v.get_ref())).map_err(|e| src.error(v, e))?,
        };
        let scan = ScanSettings {
            kind,
            kind_line: s.kind.as_ref().map_or(0, |v| src.line(v.span())),
            start: s.start.as_ref().map(|v| *v.get_ref()),
            stop: s.stop.as_ref().map(|v| *v.get_ref()),
            n_points,
            x_start: s.x_start.as_ref().map(|v| *v.get_ref()),
            x_stop: s.x_stop.as_ref().map(|v| *v.get_ref()),
            x_points,
            offset,
        };

        let o = &raw.output;
        let format = match &o.format {
            None => Format::Csv,
            Some(v) => v.get_ref().parse().map_err(|e: String| src.error(v, e))?,
        };
        let precision = match &o.precision {
            None => DEFAULT_PRECISION,
            Some(v) => {
                let p = count(&src, v, 1, "precision")?;
                if p > 17 {
                    return Err(src.error(v, "precision beyond 17 significant digits carries no information"));
                }
                p
            }
        };
        let output = OutputSettings { path: o.path.as_ref().map(PathBuf::from), format, precision };

        Ok(RunConfig { cavity, orientation, detuning, drive, scan, output })
    }

    /// Resolved configuration as written into JSON metadata.
    pub fn to_json(&self) -> serde_json::Value {
        let kr = self.scan.offset.kr();
        json!({
            "mirrors": {
                "rho": self.cavity.rho(),
                "transmission": self.cavity.transmission(),
                "theta_m_deg": self.cavity.theta_m().to_degrees(),
                "kR": self.cavity.k_r_mirror(),
                "diffraction_correction": self.cavity.apply_diffraction_correction(),
                "numerical_aperture": self.cavity.numerical_aperture(),
            },
            "dipole": { "orientation": self.orientation.label() },
            "detuning": { "linewidths": self.detuning.linewidths(), "phi0": self.detuning.phi0() },
            "drive": self.drive,
            "scan": {
                "type": self.scan.kind,
                "start": self.scan.start,
                "stop": self.scan.stop,
                "n_points": self.scan.n_points,
                "x_start": self.scan.x_start,
                "x_stop": self.scan.x_stop,
                "x_points": self.scan.x_points,
                "offset": [kr.x, kr.y, kr.z],
            },
            "output": { "format": self.output.format, "precision": self.output.precision },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err(text: &str) -> String {
        match RunConfig::from_toml_str(text) {
            Err(CliError::Config(m)) => m,
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn defaults() {
        let c = RunConfig::default();
        assert_eq!(c.cavity.rho(), 0.98);
        assert_eq!(c.cavity.k_r_mirror(), 8e4);
        assert!((c.cavity.theta_m() - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert_eq!(c.orientation, DipoleOrientation::Isotropic);
        assert_eq!(c.output.precision, 17);
        assert!(c.drive.is_none());
    }

    #[test]
    fn full_file() {
        let c = RunConfig::from_toml_str(
            r#"
[mirrors]
rho = 0.95
theta_m_deg = 40.0
kR = 1e5
diffraction_correction = true

[dipole]
orientation = [0.0, 0.6, 0.8]

[detuning]
linewidths = -0.5

[drive]
rabi = 0.1
laser_detuning = 0.0

[scan]
type = "plane"
start = -10.0
stop = 10.0
n_points = 5
x_points = 3

[output]
format = "json"
precision = 15
"#,
        )
        .unwrap();
        assert!(c.cavity.apply_diffraction_correction());
        assert!(matches!(c.orientation, DipoleOrientation::Fixed(_)));
        assert_eq!(c.drive, Some(Drive::WeakDrive { rabi: 0.1, laser_detuning: 0.0 }));
        assert_eq!(c.scan.kind, Some(ScanKind::Plane));
        assert_eq!(c.scan.x_points, Some(3));
        assert_eq!(c.output.format, Format::Json);
    }

    #[test]
    fn reflectivity_above_one_names_line() {
        let m = err("[mirrors]\ntheta_m_deg = 45.0\nrho = 1.2\n");
        assert!(m.starts_with("line 3:"), "{m}");
        assert!(m.contains("rho"), "{m}");
    }

    #[test]
    fn drive_exclusive() {
        let m = err("[drive]\npi_e = 0.05\nrabi = 0.1\n");
        assert!(m.starts_with("line 2:") && m.contains("mutually exclusive"), "{m}");
        assert!(err("[drive]\nlaser_detuning = 1.0\n").contains("needs rabi"));
        assert!(err("[drive]\npi_e = 0.7\n").contains("[0, 0.5]"));
    }

    #[test]
    fn bad_values_name_their_lines() {
        assert!(err("[dipole]\norientation = \"diagonal\"\n").starts_with("line 2:"));
        assert!(err("[dipole]\norientation = [1.0, 1.0, 0.0]\n").contains("unit norm"));
        assert!(err("\n\n[scan]\nn_points = 1\n").starts_with("line 4:"));
        assert!(err("[scan]\nstart = 3.0\nstop = 1.0\n").starts_with("line 3:"));
        assert!(err("[scan]\noffset = [0.0, 0.0, 500.0]\n").starts_with("line 2:"));
        assert!(err("[output]\nformat = \"xml\"\n").starts_with("line 2:"));
        assert!(err("[detuning]\nlinewidths = 1e6\n").starts_with("line 2:"));
        assert!(err("[mirrors]\nkR = 10.0\n").starts_with("line 2:"));
    }

    #[test]
    fn unknown_keys_rejected() {
        let m = err("[mirrors]\nreflectivity = 0.9\n");
        assert!(m.contains("reflectivity"), "{m}");
        assert!(m.contains("line 2"), "{m}");
    }
}
