//! Acceptance suite: every release gate in one target, one test per
//! criterion, each printing a PASS line with its measured margin
//! (visible with `--nocapture`). Tolerances are pinned here, not
//! configurable.
//!
//! Run with: cargo test -p deco-cli --test acceptance -- --nocapture

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
use std::time::Instant;

const HBAR: f64 = 1.054_571_817e-34;
const Q_WIDTH: f64 = 1e-27;

fn cfg() -> SpecfunConfig {
    SpecfunConfig::default()
}

fn argon(density: f64) -> GasState {
    GasState::new(
        300.0,
        39.948 * PhysicalConstants::SI.atomic_mass_unit,
        density,
    )
    .unwrap()
}

/// Γ from the full reference chain: argon at 1e-7 mbar / 300 K,
/// C6 = 1e-76 J·m⁶, 720 u beam at 100 m/s.
fn reference_chain() -> (f64, BeamState) {
    let gas = argon(deco_core::density_from_pressure(1e-5, 300.0).unwrap());
    let beam = BeamState::new(720.0 * PhysicalConstants::SI.atomic_mass_unit, 100.0).unwrap();
    let pl = k_from_c6(1e-76, &PhysicalConstants::SI).unwrap();
    let sigma = sigma_macro_exact(&pl, beam.speed_v0(), most_probable_speed(&gas), &cfg()).unwrap();
    (decoherence_rate(&gas, &beam, sigma), beam)
}

#[test]
fn c01_closed_form_vs_quadrature_grid() {
    let start = Instant::now();
    let vmp = 419.0;
    let mut worst = 0.0_f64;
    for alpha in [-0.4, -1.0, 0.0, 1.0, 2.0] {
        let pl = PowerLawCrossSection::new(3.7e-19, alpha).unwrap();
        for x in [0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0] {
            let v0 = x * vmp;
            let exact = sigma_macro_exact(&pl, v0, vmp, &cfg()).unwrap();
            let quadr = sigma_macro_quadrature(&pl, v0, vmp, 1e-300, 1e-10).unwrap();
            let rel = ((exact - quadr) / exact).abs();
            assert!(rel <= 1e-8, "alpha={alpha} x={x}: rel {rel:e}");
            worst = worst.max(rel);
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "grid took {elapsed:?}");
    println!("PASS closed form vs quadrature: 35 points, max rel err {worst:.3e} (tol 1e-8), {elapsed:?}");
}

#[test]
fn c02_closed_form_vs_monte_carlo() {
    let start = Instant::now();
    let gas = argon(1e15);
    let vmp = most_probable_speed(&gas);
    let pl = k_from_c6(1e-76, &PhysicalConstants::SI).unwrap();
    let mut worst = 0.0_f64;
    for x in [0.5, 1.0, 2.0] {
        let v0 = x * vmp;
        let exact = sigma_macro_exact(&pl, v0, vmp, &cfg()).unwrap();
        let est = sigma_macro_montecarlo(&pl, v0, &gas, 1_000_000, 0xACCE97).unwrap();
        let deviation = (est.mean - exact).abs() / est.std_error;
        assert!(
            deviation <= 4.0,
            "x={x}: {deviation:.2} standard errors (mean {}, exact {exact})",
            est.mean
        );
        worst = worst.max(deviation);
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "Monte Carlo took {elapsed:?}");
    println!(
        "PASS closed form vs Monte Carlo: 3x1e6 samples, worst deviation {worst:.2} sigma (gate 4), {elapsed:?}"
    );
}

#[test]
fn c03_alpha_one_polynomial_exactness() {
    let k = 3.7e-19;
    let pl = PowerLawCrossSection::new(k, 1.0).unwrap();
    let mut rng = SplitMix64::new(0xBEEF);
    let mut worst = 0.0_f64;
    for _ in 0..20 {
        let v0 = 20.0 + 800.0 * rng.next_f64();
        let vmp = 50.0 + 600.0 * rng.next_f64();
        let sigma = sigma_macro_exact(&pl, v0, vmp, &cfg()).unwrap();
        let expect = k * (v0 * v0 + 1.5 * vmp * vmp);
        let rel = ((v0 * sigma - expect) / expect).abs();
        assert!(rel <= 1e-12, "v0={v0} vmp={vmp}: rel {rel:e}");
        worst = worst.max(rel);
    }
    println!("PASS alpha=1 second-moment polynomial: 20 random pairs, max rel err {worst:.3e} (tol 1e-12)");
}

#[test]
fn c04_series_first_order_coefficient_and_residual_law() {
    let pl = PowerLawCrossSection::new(3.7e-19, -0.4).unwrap();
    let vmp = 419.0;

    // expansion reads lead * (1 + x²/5 + O(x⁴)); extract the x² weight
    let x = 0.5;
    let s0 = sigma_macro_series(&pl, x * vmp, vmp, 0).unwrap();
    let s1 = sigma_macro_series(&pl, x * vmp, vmp, 1).unwrap();
    let coeff = (s1 / s0 - 1.0) / (x * x);
    assert!(
        ((coeff - 0.2) / 0.2).abs() <= 1e-12,
        "first-order coefficient {coeff}"
    );

    // truncation residual scales as x⁴: a decade in x is 1e4 in residual
    let resid = |x: f64| {
        let v0 = x * vmp;
        let exact = sigma_macro_exact(&pl, v0, vmp, &cfg()).unwrap();
        let series = sigma_macro_series(&pl, v0, vmp, 1).unwrap();
        ((series - exact) / exact).abs()
    };
    let ratio = resid(1e-2) / resid(1e-3);
    assert!(
        (0.9e4..=1.1e4).contains(&ratio),
        "residual ratio {ratio} outside [0.9e4, 1.1e4]"
    );
    println!("PASS series expansion: coefficient {coeff:.15} (=1/5 to 1e-12), residual ratio {ratio:.0} in [0.9e4, 1.1e4]");
}

#[test]
fn c05_large_x_asymptote() {
    let vmp = 419.0;
    let mut worst = 0.0_f64;
    for alpha in [-0.4, 0.0, 1.0] {
        let pl = PowerLawCrossSection::new(3.7e-19, alpha).unwrap();
        let v0 = 50.0 * vmp;
        let sigma = sigma_macro_exact(&pl, v0, vmp, &cfg()).unwrap();
        let ratio = sigma / (3.7e-19 * v0.powf(alpha));
        assert!(
            (0.99..=1.01).contains(&ratio),
            "alpha={alpha}: ratio {ratio}"
        );
        worst = worst.max((ratio - 1.0).abs());
    }
    println!("PASS large-x asymptote at x=50: max |ratio-1| {worst:.3e} (band 1e-2)");
}

#[test]
fn c06_integral_identity_closed_form_vs_quadrature() {
    let mut worst = 0.0_f64;
    for mu in [0.8, 1.0, 1.3, 2.0] {
        for g in [0.5, 2.0, 5.0] {
            let direct = quad::integrate(
                |t: f64| t.powf(2.0 * mu - 1.0) * (-t * t).exp() * (g * t).sinh(),
                0.0,
                0.5 * g + 12.0,
                1e-300,
                1e-11,
            )
            .unwrap()
            .value;
            let closed = gr_integral_closed_form(mu, g).unwrap();
            let rel = ((direct - closed) / closed).abs();
            assert!(rel <= 1e-8, "mu={mu} g={g}: rel {rel:e}");
            worst = worst.max(rel);
        }
    }
    println!("PASS sinh-Gaussian integral identity: 12 points, max rel err {worst:.3e} (tol 1e-8)");
}

#[test]
fn c07_decoherence_function_limits_and_gaussian_law() {
    let (gamma_chain, _) = reference_chain();
    let kernel = MomentumKernel::gaussian(gamma_chain, Q_WIDTH, 512).unwrap();
    let gamma = kernel.gamma_total();
    let length = HBAR / Q_WIDTH;

    let f0 = decoherence_function(&kernel, 0.0);
    assert_eq!(f0, 0.0, "F(0) must vanish exactly");

    let far = decoherence_function(&kernel, 1e3 * length);
    assert!(
        (far - gamma).abs() <= 1e-3 * gamma,
        "F(far) = {far}, Gamma = {gamma}"
    );

    let mut worst = 0.0_f64;
    for factor in [0.1, 1.0, 10.0] {
        let delta = factor * length;
        let got = decoherence_function(&kernel, delta);
        let expect = gamma * (1.0 - (-(Q_WIDTH * delta / HBAR).powi(2) / 2.0).exp());
        let defect = (got - expect).abs() / gamma;
        assert!(defect <= 1e-6, "delta factor {factor}: defect {defect:e}");
        worst = worst.max(defect);
    }
    println!(
        "PASS decoherence function: F(0)=0 exact, F(far)/Gamma within 1e-3, Gaussian law max defect {worst:.3e} (tol 1e-6)"
    );
}

fn two_packet_state(points: usize) -> DensityMatrix {
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
    DensityMatrix::from_wavefunction(xs, &psi).unwrap()
}

#[test]
fn c08_density_matrix_evolution() {
    let (gamma_chain, _) = reference_chain();
    let kernel = MomentumKernel::gaussian(gamma_chain, Q_WIDTH, 512).unwrap();
    let gamma = kernel.gamma_total();
    let rho = two_packet_state(129);
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

    let mut worst_lobe = 0.0_f64;
    for gt in [0.5, 1.0, 2.0, 3.0] {
        let evolved = evolve_density_matrix(&rho, &kernel, gt / gamma).unwrap();
        assert!(evolved.hermiticity_defect() <= 1e-12 * scale);
        assert!((evolved.trace_weighted() - rho.trace_weighted()).norm() <= 1e-12);
        for i in 0..rho.x_grid().len() {
            assert_eq!(evolved.values()[(i, i)], rho.values()[(i, i)]);
        }
        let ratio = lobe_norm(&evolved) / norm0;
        let expect = (-gt).exp();
        let rel = ((ratio - expect) / expect).abs();
        assert!(rel <= 1e-3, "Gamma t = {gt}: lobe rel defect {rel:e}");
        worst_lobe = worst_lobe.max(rel);
    }

    let (t1, t2) = (0.4 / gamma, 1.7 / gamma);
    let two = evolve_density_matrix(
        &evolve_density_matrix(&rho, &kernel, t1).unwrap(),
        &kernel,
        t2,
    )
    .unwrap();
    let one = evolve_density_matrix(&rho, &kernel, t1 + t2).unwrap();
    for (a, b) in two.values().iter().zip(one.values()) {
        assert!((a - b).norm() <= 1e-12 * scale);
    }
    println!(
        "PASS density-matrix evolution: structure to 1e-12, diagonal exact, far-lobe e^-Gt defect {worst_lobe:.3e} (tol 1e-3), semigroup to 1e-12"
    );
}

#[test]
fn c09_visibility_scan_linearity_and_p_half() {
    let scan = ScanConfig {
        gas_temperature: 300.0,
        gas_particle_mass: 39.948 * PhysicalConstants::SI.atomic_mass_unit,
        beam: BeamState::new(720.0 * PhysicalConstants::SI.atomic_mass_unit, 100.0).unwrap(),
        cross_section: k_from_c6(1e-76, &PhysicalConstants::SI).unwrap(),
        flight_time: 1e-3,
        v0_reference_visibility: 1.0,
        pressure_min: 1e-6,
        pressure_max: 1e-2,
        points: 40,
    };
    let result = visibility_pressure_scan(&scan).unwrap();

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
        let rel = (y - (my + slope * (x - mx))).abs() / scale;
        assert!(rel <= 1e-12, "regression residual {rel:e}");
        worst = worst.max(rel);
    }

    let idx = result
        .rows
        .iter()
        .position(|r| r.visibility < 0.5)
        .expect("scan must cross V0/2");
    assert!(idx > 0, "half-visibility must not be the first row");
    assert!(result.rows[idx - 1].pressure <= result.p_half);
    assert!(result.p_half <= result.rows[idx].pressure);
    println!(
        "PASS visibility scan: max regression residual {worst:.3e} (tol 1e-12), p_half {:.4e} Pa bracketed by rows {} and {}",
        result.p_half,
        idx - 1,
        idx
    );
}

#[test]
fn c10_validate_command_is_deterministic() {
    let start = Instant::now();
    let bin = env!("CARGO_BIN_EXE_decoherence-kit");
    let run = || {
        std::process::Command::new(bin)
            .args(["validate", "--seed", "20260810", "--samples", "1000000"])
            .output()
            .unwrap()
    };
    let first = run();
    let second = run();
    assert_eq!(first.status.code(), Some(0), "first run must pass");
    assert_eq!(second.status.code(), Some(0), "second run must pass");
    assert_eq!(
        first.stdout, second.stdout,
        "reports must be byte-identical"
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "two runs took {elapsed:?}");
    println!(
        "PASS validate determinism: two runs, exit 0, {} byte report identical, {elapsed:?}",
        first.stdout.len()
    );
}
