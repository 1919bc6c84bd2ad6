//! The three CSV-producing subcommands. Each returns the full file
//! contents as a string; identical configurations produce identical
//! bytes.

use crate::config::Resolved;
use crate::csv::{format_value, CsvBuilder};
use crate::CliError;
use deco_core::decoherence::{
    decoherence_function, decoherence_rate, visibility, visibility_pressure_scan, MomentumKernel,
    ScanConfig,
};
use deco_core::gas::{most_probable_speed, GasState, PhysicalConstants};
use deco_core::specfun::SpecfunConfig;
use deco_core::xsection::{sigma_macro_exact, sigma_macro_quadrature, sigma_macro_series};

fn log_spaced(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let (ln_lo, ln_hi) = (lo.ln(), hi.ln());
    (0..points)
        .map(|i| (ln_lo + (ln_hi - ln_lo) * i as f64 / (points - 1) as f64).exp())
        .collect()
}

fn gas_template(resolved: &Resolved) -> Result<GasState, CliError> {
    GasState::new(resolved.temperature, resolved.gas_mass, 0.0)
        .map_err(|e| CliError::Config(e.to_string()))
}

fn species_note(resolved: &Resolved) -> Vec<String> {
    let mut notes = Vec::new();
    if let Some(species) = &resolved.gas_species {
        notes.push(format!("gas_species = {species}"));
    }
    if resolved.cross_section.singular_endpoint() {
        notes.push("note = singular-endpoint power law (alpha <= -3)".to_string());
    }
    notes
}

/// Sweep of the thermally averaged cross-section over incoming speed:
/// closed form, first-order series, and the quadrature oracle side by
/// side.
pub fn cmd_xsection(resolved: &Resolved) -> Result<String, CliError> {
    let gas = gas_template(resolved)?;
    let vmp = most_probable_speed(&gas);
    let (lo, hi, points) = resolved.v0_sweep.unwrap_or((1e-3 * vmp, 10.0 * vmp, 50));
    let cfg = SpecfunConfig::default();

    let mut csv = CsvBuilder::new(
        &[
            "v0_m_per_s",
            "x",
            "sigma_exact_m2",
            "sigma_series1_m2",
            "sigma_quadrature_m2",
        ],
        &species_note(resolved),
    );
    for v0 in log_spaced(lo, hi, points) {
        let exact = sigma_macro_exact(&resolved.cross_section, v0, vmp, &cfg)?;
        let series1 = sigma_macro_series(&resolved.cross_section, v0, vmp, 1)?;
        let quad = sigma_macro_quadrature(&resolved.cross_section, v0, vmp, 1e-300, 1e-10)?;
        csv.row(&[v0, v0 / vmp, exact, series1, quad]);
    }
    Ok(csv.finish())
}

/// Visibility against pressure, log-spaced rows, with the half-
/// visibility pressure appended as a footer comment.
pub fn cmd_visibility(resolved: &Resolved) -> Result<String, CliError> {
    let (lo, hi, points) = resolved
        .pressure_range
        .ok_or_else(|| CliError::Config("visibility needs pressure_min/pressure_max".into()))?;
    let scan = ScanConfig {
        gas_temperature: resolved.temperature,
        gas_particle_mass: resolved.gas_mass,
        beam: resolved.beam,
        cross_section: resolved.cross_section,
        flight_time: resolved.flight_time,
        v0_reference_visibility: resolved.v0_ref,
        pressure_min: lo,
        pressure_max: hi,
        points,
    };
    let result = visibility_pressure_scan(&scan)?;

    let mut csv = CsvBuilder::new(
        &["pressure_Pa", "n_per_m3", "Gamma_per_s", "V"],
        &species_note(resolved),
    );
    for row in &result.rows {
        csv.row(&[row.pressure, row.number_density, row.rate, row.visibility]);
    }
    csv.footer(&format!("p_half_Pa = {}", format_value(result.p_half)));
    Ok(csv.finish())
}

/// Spatial decoherence function for a Gaussian momentum kernel whose
/// total rate comes from the full pressure → density → Γ chain.
pub fn cmd_decoherence_function(resolved: &Resolved) -> Result<String, CliError> {
    let pressure = resolved
        .pressure
        .ok_or_else(|| CliError::Config("decoherence-function needs pressure".into()))?;
    let q_width = resolved
        .q_width
        .ok_or_else(|| CliError::Config("decoherence-function needs q_width".into()))?;

    let gas = GasState::with_pressure(resolved.temperature, resolved.gas_mass, pressure)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let vmp = most_probable_speed(&gas);
    let cfg = SpecfunConfig::default();
    let sigma = sigma_macro_exact(&resolved.cross_section, resolved.beam.speed_v0(), vmp, &cfg)?;
    let gamma = decoherence_rate(&gas, &resolved.beam, sigma);
    let kernel = MomentumKernel::gaussian(gamma, q_width, resolved.q_points)?;

    let coherence_length = PhysicalConstants::SI.reduced_planck / q_width;
    let (lo, hi, points) =
        resolved
            .delta_sweep
            .unwrap_or((1e-2 * coherence_length, 1e3 * coherence_length, 64));

    let mut notes = species_note(resolved);
    notes.push(format!(
        "Gamma_per_s = {}",
        format_value(kernel.gamma_total())
    ));
    let mut csv = CsvBuilder::new(&["delta_x_m", "F_per_s", "F_over_Gamma"], &notes);
    // zero separation first: the off-diagonal decay vanishes there
    let mut deltas = vec![0.0];
    deltas.extend(log_spaced(lo, hi, points));
    for delta in deltas {
        let f = decoherence_function(&kernel, delta);
        csv.row(&[delta, f, f / kernel.gamma_total()]);
    }
    Ok(csv.finish())
}

/// Reference visibility chain used by tests: returns (Γ, V) computed
/// through the library for one pressure.
pub fn visibility_chain_reference(
    resolved: &Resolved,
    pressure: f64,
) -> Result<(f64, f64), CliError> {
    let gas = GasState::with_pressure(resolved.temperature, resolved.gas_mass, pressure)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let vmp = most_probable_speed(&gas);
    let sigma = sigma_macro_exact(
        &resolved.cross_section,
        resolved.beam.speed_v0(),
        vmp,
        &SpecfunConfig::default(),
    )?;
    let rate = decoherence_rate(&gas, &resolved.beam, sigma);
    let v = visibility(resolved.v0_ref, rate, resolved.flight_time)?;
    Ok((rate, v))
}
