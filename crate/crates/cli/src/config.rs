//! JSON run configuration: a flat, versioned schema with unit-aware
//! inputs. Everything is converted to SI at the parsing boundary; the
//! library below only ever sees SI.

use crate::CliError;
use deco_core::gas::PhysicalConstants;
use deco_core::xsection::{k_from_c6, BeamState, PowerLawCrossSection};
use serde::Deserialize;
use std::path::{Path, PathBuf};

pub const SCHEMA_VERSION: u32 = 1;

/// 1 mbar = 100 Pa exactly.
const MBAR_TO_PA: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MassUnit {
    #[default]
    Amu,
    Kg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PressureUnit {
    /// experimental convention; the default
    #[default]
    Mbar,
    Pa,
}

/// Raw deserialized configuration. Field-level invariants are enforced
/// by [`RunConfig::resolve`], which is the only way to obtain usable
/// values.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    #[serde(default)]
    pub gas_species: Option<String>,
    /// kelvin
    pub temperature: f64,
    pub gas_mass: f64,
    #[serde(default)]
    pub gas_mass_unit: MassUnit,
    pub test_mass: f64,
    #[serde(default)]
    pub test_mass_unit: MassUnit,
    /// m/s
    pub speed_v0: f64,
    #[serde(default)]
    pub pressure_unit: PressureUnit,
    /// single working pressure (decoherence-function)
    #[serde(default)]
    pub pressure: Option<f64>,
    /// scan range (visibility)
    #[serde(default)]
    pub pressure_min: Option<f64>,
    #[serde(default)]
    pub pressure_max: Option<f64>,
    #[serde(default)]
    pub pressure_points: Option<usize>,
    /// J·m⁶; mutually exclusive with the explicit (K, alpha) pair
    #[serde(default)]
    pub c6: Option<f64>,
    #[serde(default)]
    pub prefactor_k: Option<f64>,
    #[serde(default)]
    pub exponent_alpha: Option<f64>,
    /// seconds
    pub flight_time: f64,
    #[serde(default = "default_v0_ref")]
    pub v0_reference_visibility: f64,
    /// xsection sweep bounds, m/s (defaults span x = 1e-3 .. 10)
    #[serde(default)]
    pub v0_min: Option<f64>,
    #[serde(default)]
    pub v0_max: Option<f64>,
    #[serde(default)]
    pub v0_points: Option<usize>,
    /// kernel width, kg·m/s (decoherence-function)
    #[serde(default)]
    pub q_width: Option<f64>,
    #[serde(default)]
    pub q_points: Option<usize>,
    /// separation sweep, m (defaults span 1e-2 .. 1e3 in units of ħ/q_width)
    #[serde(default)]
    pub delta_x_min: Option<f64>,
    #[serde(default)]
    pub delta_x_max: Option<f64>,
    #[serde(default)]
    pub delta_x_points: Option<usize>,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
}

fn default_v0_ref() -> f64 {
    1.0
}

/// Fully validated SI-unit configuration.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub gas_species: Option<String>,
    pub temperature: f64,
    pub gas_mass: f64,
    pub beam: BeamState,
    pub cross_section: PowerLawCrossSection,
    pub flight_time: f64,
    pub v0_ref: f64,
    pub pressure: Option<f64>,
    pub pressure_range: Option<(f64, f64, usize)>,
    pub v0_sweep: Option<(f64, f64, usize)>,
    pub q_width: Option<f64>,
    pub q_points: usize,
    pub delta_sweep: Option<(f64, f64, usize)>,
    pub output_path: Option<PathBuf>,
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn require_positive(name: &str, value: f64) -> Result<f64, CliError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(bad(format!(
            "{name} must be finite and positive, got {value}"
        )))
    }
}

pub fn load(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| bad(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| bad(format!("invalid config JSON: {e}")))
}

impl RunConfig {
    pub fn resolve(&self) -> Result<Resolved, CliError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(bad(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let constants = PhysicalConstants::SI;

        let temperature = require_positive("temperature", self.temperature)?;
        let gas_mass = match self.gas_mass_unit {
            MassUnit::Amu => {
                require_positive("gas_mass", self.gas_mass)? * constants.atomic_mass_unit
            }
            MassUnit::Kg => require_positive("gas_mass", self.gas_mass)?,
        };
        let test_mass = match self.test_mass_unit {
            MassUnit::Amu => {
                require_positive("test_mass", self.test_mass)? * constants.atomic_mass_unit
            }
            MassUnit::Kg => require_positive("test_mass", self.test_mass)?,
        };
        let speed_v0 = require_positive("speed_v0", self.speed_v0)?;
        let beam = BeamState::new(test_mass, speed_v0).map_err(|e| bad(e.to_string()))?;

        let cross_section = match (self.c6, self.prefactor_k, self.exponent_alpha) {
            (Some(c6), None, None) => k_from_c6(require_positive("c6", c6)?, &constants)
                .map_err(|e| bad(e.to_string()))?,
            (None, Some(k), Some(alpha)) => {
                PowerLawCrossSection::new(k, alpha).map_err(|e| bad(e.to_string()))?
            }
            (None, Some(_), None) | (None, None, Some(_)) => {
                return Err(bad("prefactor_k and exponent_alpha must be given together"))
            }
            (None, None, None) => {
                return Err(bad(
                    "cross-section missing: give c6 or (prefactor_k, exponent_alpha)",
                ))
            }
            _ => {
                return Err(bad(
                    "give either c6 or (prefactor_k, exponent_alpha), not both",
                ))
            }
        };

        let flight_time = require_positive("flight_time", self.flight_time)?;
        let v0_ref = self.v0_reference_visibility;
        if !(v0_ref > 0.0 && v0_ref <= 1.0) {
            return Err(bad(format!(
                "v0_reference_visibility must lie in (0, 1], got {v0_ref}"
            )));
        }

        let to_pa = match self.pressure_unit {
            PressureUnit::Mbar => MBAR_TO_PA,
            PressureUnit::Pa => 1.0,
        };
        let pressure = self
            .pressure
            .map(|p| require_positive("pressure", p).map(|p| p * to_pa))
            .transpose()?;
        let pressure_range = match (self.pressure_min, self.pressure_max) {
            (Some(lo), Some(hi)) => {
                let lo = require_positive("pressure_min", lo)? * to_pa;
                let hi = require_positive("pressure_max", hi)? * to_pa;
                if !(lo < hi) {
                    return Err(bad("pressure_min must be below pressure_max"));
                }
                let points = self.pressure_points.unwrap_or(40);
                if points < 2 {
                    return Err(bad("pressure_points must be at least 2"));
                }
                Some((lo, hi, points))
            }
            (None, None) => None,
            _ => return Err(bad("pressure_min and pressure_max must be given together")),
        };

        let v0_sweep = match (self.v0_min, self.v0_max) {
            (Some(lo), Some(hi)) => {
                let lo = require_positive("v0_min", lo)?;
                let hi = require_positive("v0_max", hi)?;
                if !(lo < hi) {
                    return Err(bad("v0_min must be below v0_max"));
                }
                let points = self.v0_points.unwrap_or(50);
                if points < 2 {
                    return Err(bad("v0_points must be at least 2"));
                }
                Some((lo, hi, points))
            }
            (None, None) => None,
            _ => return Err(bad("v0_min and v0_max must be given together")),
        };

        let q_width = self
            .q_width
            .map(|w| require_positive("q_width", w))
            .transpose()?;
        let q_points = self.q_points.unwrap_or(512);
        if q_points < 64 {
            return Err(bad("q_points must be at least 64"));
        }

        let delta_sweep = match (self.delta_x_min, self.delta_x_max) {
            (Some(lo), Some(hi)) => {
                let lo = require_positive("delta_x_min", lo)?;
                let hi = require_positive("delta_x_max", hi)?;
                if !(lo < hi) {
                    return Err(bad("delta_x_min must be below delta_x_max"));
                }
                let points = self.delta_x_points.unwrap_or(64);
                if points < 2 {
                    return Err(bad("delta_x_points must be at least 2"));
                }
                Some((lo, hi, points))
            }
            (None, None) => None,
            _ => return Err(bad("delta_x_min and delta_x_max must be given together")),
        };

        Ok(Resolved {
            gas_species: self.gas_species.clone(),
            temperature,
            gas_mass,
            beam,
            cross_section,
            flight_time,
            v0_ref,
            pressure,
            pressure_range,
            v0_sweep,
            q_width,
            q_points,
            delta_sweep,
            output_path: self.output_path.clone(),
        })
    }
}
