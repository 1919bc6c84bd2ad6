//! The `validate` subcommand: every oracle cross-check the library
//! promises, run against fixed reference inputs, reported one line per
//! check. Output is deterministic for fixed options, so repeated runs
//! produce byte-identical reports.

use crate::csv::VERSION;
use crate::CliError;
use deco_core::decoherence::{
    decoherence_function, decoherence_rate, evolve_density_matrix, visibility_pressure_scan,
    DensityMatrix, MomentumKernel, ScanConfig,
};
use deco_core::gas::{most_probable_speed, GasState, PhysicalConstants};
use deco_core::num_complex::Complex64;
use deco_core::quad;
use deco_core::rng::SplitMix64;
use deco_core::specfun::{gr_integral_closed_form, SpecfunConfig};
use deco_core::xsection::{
    k_from_c6, sigma_macro_exact, sigma_macro_montecarlo, sigma_macro_quadrature,
    sigma_macro_series, BeamState, PowerLawCrossSection,
};
use std::fmt::Write;

#[derive(Debug, Clone, Copy)]
pub struct ValidateOptions {
    pub seed: u64,
    pub samples: usize,
    /// relative perturbation injected into the closed-form prefactor;
    /// nonzero values must make the suite fail
    pub perturb_k: f64,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions {
            seed: 20_260_810,
            samples: 1_000_000,
            perturb_k: 0.0,
        }
    }
}

struct Check {
    name: &'static str,
    /// largest observed defect as a fraction of its tolerance
    worst: f64,
    detail: String,
}

impl Check {
    fn passed(&self) -> bool {
        self.worst <= 1.0
    }
}

const ALPHAS: [f64; 5] = [-0.4, -1.0, 0.0, 1.0, 2.0];
const X_VALUES: [f64; 7] = [0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0];
const VMP_REF: f64 = 419.0;
const K_REF: f64 = 3.7e-19;

fn perturbed(
    pl: &PowerLawCrossSection,
    opts: &ValidateOptions,
) -> Result<PowerLawCrossSection, CliError> {
    Ok(pl.with_scaled_prefactor(1.0 + opts.perturb_k)?)
}

fn check_exact_vs_quadrature(opts: &ValidateOptions) -> Result<Check, CliError> {
    let cfg = SpecfunConfig::default();
    let tol = 1e-8;
    let mut worst = 0.0_f64;
    for alpha in ALPHAS {
        let pl = PowerLawCrossSection::new(K_REF, alpha)?;
        let pl_exact = perturbed(&pl, opts)?;
        for x in X_VALUES {
            let v0 = x * VMP_REF;
            let exact = sigma_macro_exact(&pl_exact, v0, VMP_REF, &cfg)?;
            let quadr = sigma_macro_quadrature(&pl, v0, VMP_REF, 1e-300, 1e-10)?;
            worst = worst.max(((exact - quadr) / exact).abs() / tol);
        }
    }
    Ok(Check {
        name: "closed form vs quadrature (35 grid points)",
        worst,
        detail: format!("max rel err {:.3e}, tol {tol:.1e}", worst * tol),
    })
}

fn check_exact_vs_monte_carlo(opts: &ValidateOptions) -> Result<Check, CliError> {
    let cfg = SpecfunConfig::default();
    let constants = PhysicalConstants::SI;
    let gas = GasState::new(300.0, 39.948 * constants.atomic_mass_unit, 1e15)?;
    let vmp = most_probable_speed(&gas);
    let pl = k_from_c6(1e-76, &constants)?;
    let pl_exact = perturbed(&pl, opts)?;
    let mut worst = 0.0_f64;
    let mut sigmas = Vec::new();
    for x in [0.5, 1.0, 2.0] {
        let v0 = x * vmp;
        let exact = sigma_macro_exact(&pl_exact, v0, vmp, &cfg)?;
        let estimate = sigma_macro_montecarlo(&pl, v0, &gas, opts.samples, opts.seed)?;
        let deviation = (estimate.mean - exact).abs() / estimate.std_error;
        sigmas.push(deviation);
        worst = worst.max(deviation / 4.0);
    }
    Ok(Check {
        name: "closed form vs Monte Carlo (x = 0.5, 1, 2)",
        worst,
        detail: format!(
            "deviations {:.2}/{:.2}/{:.2} std errors, gate 4",
            sigmas[0], sigmas[1], sigmas[2]
        ),
    })
}

fn check_second_moment_polynomial(opts: &ValidateOptions) -> Result<Check, CliError> {
    let cfg = SpecfunConfig::default();
    let tol = 1e-12;
    let pl = PowerLawCrossSection::new(K_REF, 1.0)?;
    let pl_exact = perturbed(&pl, opts)?;
    let mut rng = SplitMix64::new(0xA11CE);
    let mut worst = 0.0_f64;
    for _ in 0..20 {
        let v0 = 20.0 + 800.0 * rng.next_f64();
        let vmp = 50.0 + 600.0 * rng.next_f64();
        let sigma = sigma_macro_exact(&pl_exact, v0, vmp, &cfg)?;
        let expect = K_REF * (v0 * v0 + 1.5 * vmp * vmp);
        worst = worst.max(((v0 * sigma - expect) / expect).abs() / tol);
    }
    Ok(Check {
        name: "alpha = 1 second-moment polynomial (20 draws)",
        worst,
        detail: format!("max rel err {:.3e}, tol {tol:.1e}", worst * tol),
    })
}

fn check_series_expansion(_opts: &ValidateOptions) -> Result<Check, CliError> {
    let cfg = SpecfunConfig::default();
    let pl = PowerLawCrossSection::new(K_REF, -0.4)?;
    // first-order coefficient of the small-x expansion must be 1/5
    let coeff_tol = 1e-12;
    let x = 0.5;
    let v0 = x * VMP_REF;
    let s0 = sigma_macro_series(&pl, v0, VMP_REF, 0)?;
    let s1 = sigma_macro_series(&pl, v0, VMP_REF, 1)?;
    let coeff = (s1 / s0 - 1.0) / (x * x);
    let coeff_defect = ((coeff - 0.2) / 0.2).abs() / coeff_tol;

    // order-1 truncation error must drop ~1e4x when x drops 10x
    let resid = |x: f64| -> Result<f64, CliError> {
        let v0 = x * VMP_REF;
        let exact = sigma_macro_exact(&pl, v0, VMP_REF, &cfg)?;
        let series = sigma_macro_series(&pl, v0, VMP_REF, 1)?;
        Ok(((series - exact) / exact).abs())
    };
    let ratio = resid(1e-2)? / resid(1e-3)?;
    let ratio_defect = (ratio / 1e4 - 1.0).abs() / 0.1;

    Ok(Check {
        name: "series coefficient 1/5 and x^4 residual law",
        worst: coeff_defect.max(ratio_defect),
        detail: format!("coefficient {coeff:.15}, residual ratio {ratio:.1}"),
    })
}

fn check_large_x_asymptote(opts: &ValidateOptions) -> Result<Check, CliError> {
    let cfg = SpecfunConfig::default();
    let tol = 1e-2;
    let mut worst = 0.0_f64;
    for alpha in [-0.4, 0.0, 1.0] {
        let pl = perturbed(&PowerLawCrossSection::new(K_REF, alpha)?, opts)?;
        let v0 = 50.0 * VMP_REF;
        let sigma = sigma_macro_exact(&pl, v0, VMP_REF, &cfg)?;
        let ratio = sigma / (K_REF * v0.powf(alpha));
        worst = worst.max((ratio - 1.0).abs() / tol);
    }
    Ok(Check {
        name: "large-x asymptote sigma -> K v0^alpha at x = 50",
        worst,
        detail: format!("max |ratio - 1| {:.3e}, tol {tol:.1e}", worst * tol),
    })
}

fn check_integral_identity(_opts: &ValidateOptions) -> Result<Check, CliError> {
    let tol = 1e-8;
    let mut worst = 0.0_f64;
    for mu in [0.8, 1.0, 1.3, 2.0] {
        for g in [0.5, 2.0, 5.0] {
            let direct = quad::integrate(
                |t: f64| t.powf(2.0 * mu - 1.0) * (-t * t).exp() * (g * t).sinh(),
                0.0,
                0.5 * g + 12.0,
                1e-300,
                1e-11,
            )?
            .value;
            let closed = gr_integral_closed_form(mu, g)?;
            worst = worst.max(((direct - closed) / closed).abs() / tol);
        }
    }
    Ok(Check {
        name: "sinh-Gaussian integral identity (12 grid points)",
        worst,
        detail: format!("max rel err {:.3e}, tol {tol:.1e}", worst * tol),
    })
}

/// Reference chain shared by the quantum-side checks: argon at
/// 1e-7 mbar / 300 K, C6 = 1e-76 J m^6, beam at 100 m/s.
fn reference_rate() -> Result<f64, CliError> {
    let constants = PhysicalConstants::SI;
    let gas = GasState::with_pressure(300.0, 39.948 * constants.atomic_mass_unit, 1e-5)?;
    let beam = BeamState::new(720.0 * constants.atomic_mass_unit, 100.0)?;
    let pl = k_from_c6(1e-76, &constants)?;
    let sigma = sigma_macro_exact(
        &pl,
        beam.speed_v0(),
        most_probable_speed(&gas),
        &SpecfunConfig::default(),
    )?;
    Ok(decoherence_rate(&gas, &beam, sigma))
}

const Q_WIDTH: f64 = 1e-27;
const HBAR: f64 = 1.054_571_817e-34;

fn check_decoherence_function(_opts: &ValidateOptions) -> Result<Check, CliError> {
    let gamma = reference_rate()?;
    let kernel = MomentumKernel::gaussian(gamma, Q_WIDTH, 512)?;
    let gamma = kernel.gamma_total();
    let length = HBAR / Q_WIDTH;

    // exact zero at zero separation
    let f0 = decoherence_function(&kernel, 0.0);
    let mut worst = if f0 == 0.0 { 0.0 } else { f64::INFINITY };

    // saturation at Gamma for separations far beyond ħ/q_width
    let far = decoherence_function(&kernel, 1e3 * length);
    worst = worst.max(((far - gamma).abs() / gamma) / 1e-3);

    // Gaussian kernel against its characteristic-function closed form
    for factor in [0.1, 1.0, 10.0] {
        let delta = factor * length;
        let expect = gamma * (1.0 - (-(Q_WIDTH * delta / HBAR).powi(2) / 2.0).exp());
        let got = decoherence_function(&kernel, delta);
        worst = worst.max(((got - expect).abs() / gamma) / 1e-6);
    }
    Ok(Check {
        name: "decoherence function F(0), F(inf), Gaussian law",
        worst,
        detail: format!("F(0) = {f0:e}, F(far)/Gamma = {:.6}", far / gamma),
    })
}

fn two_packet_state(points: usize) -> Result<DensityMatrix, CliError> {
    let length = HBAR / Q_WIDTH;
    let xs: Vec<f64> = (0..points)
        .map(|i| (-6.4 + 12.8 * i as f64 / (points - 1) as f64) * length)
        .collect();
    let width = 0.4 * length;
    let psi: Vec<Complex64> = xs
        .iter()
        .map(|&x| {
            let a = (-(x - 4.0 * length).powi(2) / (4.0 * width * width)).exp();
            let b = (-(x + 4.0 * length).powi(2) / (4.0 * width * width)).exp();
            Complex64::new(a + b, 0.0)
        })
        .collect();
    Ok(DensityMatrix::from_wavefunction(xs, &psi)?)
}

fn check_density_matrix_evolution(_opts: &ValidateOptions) -> Result<Check, CliError> {
    let gamma = reference_rate()?;
    let kernel = MomentumKernel::gaussian(gamma, Q_WIDTH, 512)?;
    let gamma = kernel.gamma_total();
    let rho = two_packet_state(129)?;
    let length = HBAR / Q_WIDTH;
    let scale = rho.values().iter().map(|v| v.norm()).fold(0.0, f64::max);

    let lobe_norm = |m: &DensityMatrix| -> f64 {
        let xs = m.x_grid();
        let mut acc = 0.0;
        for i in 0..xs.len() {
            for j in 0..xs.len() {
                if xs[i] < -2.0 * length && xs[j] > 2.0 * length {
                    acc += m.values()[(i, j)].norm_sqr();
                }
            }
        }
        acc.sqrt()
    };
    let norm0 = lobe_norm(&rho);

    let mut worst = 0.0_f64;
    let mut lobe_worst = 0.0_f64;
    for gt in [0.5, 1.0, 2.0, 3.0] {
        let t = gt / gamma;
        let evolved = evolve_density_matrix(&rho, &kernel, t)?;
        // structure: hermiticity and trace to 1e-12, diagonal exact
        worst = worst.max(evolved.hermiticity_defect() / (1e-12 * scale));
        worst = worst.max((evolved.trace_weighted() - rho.trace_weighted()).norm() / 1e-12);
        for i in 0..rho.x_grid().len() {
            if evolved.values()[(i, i)] != rho.values()[(i, i)] {
                worst = f64::INFINITY;
            }
        }
        // far-lobe decay at the total rate
        let ratio = lobe_norm(&evolved) / norm0;
        let expect = (-gt).exp();
        lobe_worst = lobe_worst.max(((ratio - expect) / expect).abs() / 1e-3);
    }
    worst = worst.max(lobe_worst);

    // semigroup composition
    let (t1, t2) = (0.4 / gamma, 1.7 / gamma);
    let two = evolve_density_matrix(&evolve_density_matrix(&rho, &kernel, t1)?, &kernel, t2)?;
    let one = evolve_density_matrix(&rho, &kernel, t1 + t2)?;
    for (a, b) in two.values().iter().zip(one.values()) {
        worst = worst.max((a - b).norm() / (1e-12 * scale));
    }

    Ok(Check {
        name: "density-matrix evolution and far-lobe decay",
        worst,
        detail: format!("worst lobe-decay defect {:.3e} of 1e-3", lobe_worst),
    })
}

fn check_visibility_scan(_opts: &ValidateOptions) -> Result<Check, CliError> {
    let constants = PhysicalConstants::SI;
    let scan = ScanConfig {
        gas_temperature: 300.0,
        gas_particle_mass: 39.948 * constants.atomic_mass_unit,
        beam: BeamState::new(720.0 * constants.atomic_mass_unit, 100.0)?,
        cross_section: k_from_c6(1e-76, &constants)?,
        flight_time: 1e-3,
        v0_reference_visibility: 1.0,
        pressure_min: 1e-6,
        pressure_max: 1e-2,
        points: 40,
    };
    let result = visibility_pressure_scan(&scan)?;

    // ln V must be exactly linear in pressure
    let n = result.rows.len() as f64;
    let xs: Vec<f64> = result.rows.iter().map(|r| r.pressure).collect();
    let ys: Vec<f64> = result.rows.iter().map(|r| r.visibility.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let scale = ys.iter().map(|y| y.abs()).fold(0.0, f64::max);
    let mut worst = 0.0_f64;
    for (x, y) in xs.iter().zip(&ys) {
        worst = worst.max(((y - (my + slope * (x - mx))).abs() / scale) / 1e-12);
    }

    // closed-form half-visibility pressure must agree with the rows
    let idx = result
        .rows
        .iter()
        .position(|r| r.visibility < 0.5 * scan.v0_reference_visibility);
    match idx {
        Some(i) if i > 0 => {
            if !(result.rows[i - 1].pressure <= result.p_half
                && result.p_half <= result.rows[i].pressure)
            {
                worst = f64::INFINITY;
            }
        }
        _ => worst = f64::INFINITY,
    }
    Ok(Check {
        name: "visibility scan linearity and p_half bracket",
        worst,
        detail: format!("p_half = {:.6e} Pa", result.p_half),
    })
}

/// Run the whole suite; returns the printable report and whether every
/// check passed.
pub fn run_validate(opts: &ValidateOptions) -> Result<(String, bool), CliError> {
    if opts.samples < 1000 {
        return Err(CliError::Config("samples must be at least 1000".into()));
    }
    let checks: Vec<Check> = vec![
        check_exact_vs_quadrature(opts)?,
        check_exact_vs_monte_carlo(opts)?,
        check_second_moment_polynomial(opts)?,
        check_series_expansion(opts)?,
        check_large_x_asymptote(opts)?,
        check_integral_identity(opts)?,
        check_decoherence_function(opts)?,
        check_density_matrix_evolution(opts)?,
        check_visibility_scan(opts)?,
    ];

    let mut report = String::new();
    writeln!(report, "decoherence-kit v{VERSION} validation report").unwrap();
    writeln!(
        report,
        "seed={} samples={} perturb_k={:e}",
        opts.seed, opts.samples, opts.perturb_k
    )
    .unwrap();
    let mut all_pass = true;
    for (i, check) in checks.iter().enumerate() {
        let status = if check.passed() { "PASS" } else { "FAIL" };
        all_pass &= check.passed();
        writeln!(
            report,
            "[{:>2}/{}] {:<52} worst {:>9.3e} of tolerance  {}",
            i + 1,
            checks.len(),
            check.name,
            check.worst,
            status
        )
        .unwrap();
        writeln!(report, "       {}", check.detail).unwrap();
    }
    writeln!(
        report,
        "RESULT: {} ({}/{} checks)",
        if all_pass { "PASS" } else { "FAIL" },
        checks.iter().filter(|c| c.passed()).count(),
        checks.len()
    )
    .unwrap();
    Ok((report, all_pass))
}
