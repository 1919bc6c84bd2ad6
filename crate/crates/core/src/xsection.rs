//! Power-law microscopic cross-sections σ_micro(v) = K v^α and the
//! thermally averaged macroscopic cross-section
//!
//! ```text
//! σ_macro(v₀) = ∫ d³u f_MB(u) (|v₀−u|/v₀) σ_micro(|v₀−u|)
//! ```
//!
//! evaluated four independent ways:
//!
//! - [`sigma_macro_exact`] — closed form
//!   K (2/√π) Γ(α/2+2) (v_mp^(α+1)/v₀) M(−(α+1)/2, 3/2; −x²), x = v₀/v_mp;
//! - [`sigma_macro_series`] — Taylor truncation of the closed form in x;
//! - [`sigma_macro_quadrature`] — adaptive quadrature of the reduced
//!   1-D integral (oracle #1);
//! - [`sigma_macro_montecarlo`] — direct sampling of the 3-D thermal
//!   average (oracle #2).
//!
//! The quartet shares one contract so any pair can be diffed.

use crate::error::{Error, Result};
use crate::gas::{GasState, MbSampler, PhysicalConstants};
use crate::quad;
use crate::specfun::{gamma, kummer_m, SpecfunConfig};
use rayon::prelude::*;

/// σ_micro = K v^α with K > 0 and α > −4 (the thermal average diverges
/// at or below −4; α ≤ −3 additionally makes the reduced integrand
/// singular at zero relative speed, see [`PowerLawCrossSection::singular_endpoint`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawCrossSection {
    prefactor_k: f64,
    exponent_alpha: f64,
}

impl PowerLawCrossSection {
    pub fn new(prefactor_k: f64, exponent_alpha: f64) -> Result<Self> {
        if !(prefactor_k > 0.0 && prefactor_k.is_finite()) {
            return Err(Error::Domain {
                context: "PowerLawCrossSection",
                value: prefactor_k,
                requirement: "prefactor_K > 0",
            });
        }
        if !(exponent_alpha > -4.0 && exponent_alpha.is_finite()) {
            return Err(Error::Domain {
                context: "PowerLawCrossSection",
                value: exponent_alpha,
                requirement: "exponent_alpha > -4",
            });
        }
        Ok(PowerLawCrossSection {
            prefactor_k,
            exponent_alpha,
        })
    }

    pub fn prefactor_k(&self) -> f64 {
        self.prefactor_k
    }

    pub fn exponent_alpha(&self) -> f64 {
        self.exponent_alpha
    }

    /// True for −4 < α ≤ −3, where the reduced 1-D integrand carries an
    /// integrable endpoint singularity.
    pub fn singular_endpoint(&self) -> bool {
        self.exponent_alpha <= -3.0
    }

    /// Cross-section with the prefactor scaled by `factor`; used by the
    /// validation harness to inject controlled perturbations.
    pub fn with_scaled_prefactor(&self, factor: f64) -> Result<Self> {
        PowerLawCrossSection::new(self.prefactor_k * factor, self.exponent_alpha)
    }
}

/// Test particle: mass M and sharp incoming speed v₀ (momentum
/// p₀ = M v₀).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamState {
    test_mass: f64,
    speed_v0: f64,
}

impl BeamState {
    pub fn new(test_mass: f64, speed_v0: f64) -> Result<Self> {
        if !(test_mass > 0.0 && test_mass.is_finite()) {
            return Err(Error::Domain {
                context: "BeamState",
                value: test_mass,
                requirement: "test_mass > 0",
            });
        }
        if !(speed_v0 > 0.0 && speed_v0.is_finite()) {
            return Err(Error::Domain {
                context: "BeamState",
                value: speed_v0,
                requirement: "speed_v0 > 0",
            });
        }
        Ok(BeamState {
            test_mass,
            speed_v0,
        })
    }

    pub fn test_mass(&self) -> f64 {
        self.test_mass
    }

    pub fn speed_v0(&self) -> f64 {
        self.speed_v0
    }

    pub fn momentum(&self) -> f64 {
        self.test_mass * self.speed_v0
    }
}

/// Power law induced by the attractive potential U(r) = −C₆/r⁶:
///
/// ```text
/// K = (π⁶ 3/8)^(2/5) / (sin(π/5) Γ(2/5)) · (C₆/ħ)^(2/5),   α = −2/5
/// ```
pub fn k_from_c6(c6: f64, constants: &PhysicalConstants) -> Result<PowerLawCrossSection> {
    if !(c6 > 0.0 && c6.is_finite()) {
        return Err(Error::Domain {
            context: "k_from_c6",
            value: c6,
            requirement: "c6 > 0",
        });
    }
    let pi = std::f64::consts::PI;
    let dimensionless = (pi.powi(6) * 0.375).powf(0.4) / ((pi / 5.0).sin() * gamma(0.4)?);
    let k = dimensionless * (c6 / constants.reduced_planck).powf(0.4);
    PowerLawCrossSection::new(k, -0.4)
}

/// Single-collision cross-section K v_rel^α.
pub fn sigma_micro(pl: &PowerLawCrossSection, v_rel: f64) -> Result<f64> {
    if v_rel < 0.0 || (v_rel == 0.0 && pl.exponent_alpha < 0.0) {
        return Err(Error::Domain {
            context: "sigma_micro",
            value: v_rel,
            requirement: "v_rel > 0 (v_rel = 0 permitted only for alpha >= 0)",
        });
    }
    if v_rel == 0.0 {
        return Ok(if pl.exponent_alpha == 0.0 {
            pl.prefactor_k
        } else {
            0.0
        });
    }
    Ok(pl.prefactor_k * v_rel.powf(pl.exponent_alpha))
}

fn check_speeds(context: &'static str, v0: f64, vmp: f64) -> Result<()> {
    if !(v0 > 0.0 && v0.is_finite()) {
        return Err(Error::Domain {
            context,
            value: v0,
            requirement: "v0 > 0",
        });
    }
    if !(vmp > 0.0 && vmp.is_finite()) {
        return Err(Error::Domain {
            context,
            value: vmp,
            requirement: "vmp > 0",
        });
    }
    Ok(())
}

/// Exact thermally averaged cross-section,
/// K (2/√π) Γ(α/2+2) (v_mp^(α+1)/v₀) M(−(α/2+1/2), 3/2; −(v₀/v_mp)²).
pub fn sigma_macro_exact(
    pl: &PowerLawCrossSection,
    v0: f64,
    vmp: f64,
    cfg: &SpecfunConfig,
) -> Result<f64> {
    check_speeds("sigma_macro_exact", v0, vmp)?;
    let alpha = pl.exponent_alpha;
    let x = v0 / vmp;
    let a = -(0.5 * alpha + 0.5);
    let phi = kummer_m(a, 1.5, -x * x, cfg)?;
    Ok(pl.prefactor_k
        * std::f64::consts::FRAC_2_SQRT_PI
        * gamma(0.5 * alpha + 2.0)?
        * vmp.powf(alpha + 1.0)
        / v0
        * phi)
}

/// Taylor truncation of the closed form:
/// K (2/√π) Γ(α/2+2) (v_mp^(α+1)/v₀) Σ_{n≤order} (a)ₙ/(3/2)ₙ (−x²)ⁿ/n!.
///
/// Useful as an expansion in the small parameter x = v₀/v_mp; `order`
/// is capped at 10.
pub fn sigma_macro_series(
    pl: &PowerLawCrossSection,
    v0: f64,
    vmp: f64,
    order: usize,
) -> Result<f64> {
    check_speeds("sigma_macro_series", v0, vmp)?;
    if order > 10 {
        return Err(Error::Domain {
            context: "sigma_macro_series",
            value: order as f64,
            requirement: "order <= 10",
        });
    }
    let alpha = pl.exponent_alpha;
    let x = v0 / vmp;
    let a = -(0.5 * alpha + 0.5);
    let mut sum = 1.0;
    let mut term = 1.0;
    for n in 0..order {
        let nf = n as f64;
        term *= (a + nf) / (1.5 + nf) * (-x * x) / (nf + 1.0);
        sum += term;
    }
    Ok(pl.prefactor_k
        * std::f64::consts::FRAC_2_SQRT_PI
        * gamma(0.5 * alpha + 2.0)?
        * vmp.powf(alpha + 1.0)
        / v0
        * sum)
}

/// Thermally averaged cross-section by adaptive quadrature of the
/// reduced 1-D integral (u = v_mp t, x = v₀/v_mp):
///
/// ```text
/// σ = K (2/√π) (v_mp^(α+2)/v₀²) e^(−x²) ∫₀^∞ t^(α+2) e^(−t²) sinh(2tx) dt
/// ```
///
/// The exponential factors are always combined as
/// (1/2)(e^(−(t−x)²) − e^(−(t+x)²)), which stays in range at any x; the
/// raw factors overflow beyond x ≈ 27. For α ≤ −3 the integrable
/// endpoint singularity on [0, ε] is integrated analytically from the
/// small-t expansion of the integrand.
pub fn sigma_macro_quadrature(
    pl: &PowerLawCrossSection,
    v0: f64,
    vmp: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<f64> {
    check_speeds("sigma_macro_quadrature", v0, vmp)?;
    if !(abs_tol > 0.0) || !(rel_tol > 0.0) {
        return Err(Error::Domain {
            context: "sigma_macro_quadrature",
            value: if abs_tol > 0.0 { rel_tol } else { abs_tol },
            requirement: "tolerances > 0",
        });
    }
    let alpha = pl.exponent_alpha;
    let x = v0 / vmp;
    let scale =
        pl.prefactor_k * std::f64::consts::FRAC_2_SQRT_PI * vmp.powf(alpha + 2.0) / (v0 * v0);
    let upper = x + 12.0;

    let integrand = |t: f64| {
        let d = t - x;
        let s = t + x;
        t.powf(alpha + 2.0) * 0.5 * ((-d * d).exp() - (-s * s).exp())
    };

    // analytic head over [0, ε] when t^(α+2) is singular:
    // integrand ≈ e^(−x²) [2x t^(α+3) + (4x³/3 − 2x) t^(α+5)]
    let (lower, head) = if alpha <= -3.0 {
        let eps = 1e-3_f64;
        let e = (-x * x).exp();
        let head = e
            * (2.0 * x * eps.powf(alpha + 4.0) / (alpha + 4.0)
                + (4.0 * x.powi(3) / 3.0 - 2.0 * x) * eps.powf(alpha + 6.0) / (alpha + 6.0));
        (eps, head)
    } else {
        (0.0, 0.0)
    };

    let mut points = vec![lower];
    for p in [1.0, x - 6.0, x + 6.0] {
        if p > lower + 1e-9 && p < upper - 1e-9 {
            points.push(p);
        }
    }
    points.push(upper);
    points.sort_by(f64::total_cmp);
    points.dedup(); // x - 6 can land exactly on an existing breakpoint

    let inner = quad::integrate_with_breakpoints(integrand, &points, abs_tol / scale, rel_tol)?;
    Ok(scale * (inner.value + head))
}

/// Monte-Carlo estimate: sample mean and its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub std_error: f64,
}

const MC_CHUNK: u64 = 1 << 16;

/// Thermally averaged cross-section by direct Monte-Carlo sampling of
/// the velocity average: the sample mean of K |v₀ − u|^(α+1) / v₀ over
/// Maxwell–Boltzmann draws u.
///
/// Deterministic for a fixed seed: samples are indexed, chunk sums are
/// reduced in index order, so the result is independent of the rayon
/// thread count.
pub fn sigma_macro_montecarlo(
    pl: &PowerLawCrossSection,
    v0: f64,
    gas: &GasState,
    samples: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    if samples < 1000 {
        return Err(Error::Domain {
            context: "sigma_macro_montecarlo",
            value: samples as f64,
            requirement: "samples >= 1000",
        });
    }
    if !(v0 > 0.0 && v0.is_finite()) {
        return Err(Error::Domain {
            context: "sigma_macro_montecarlo",
            value: v0,
            requirement: "v0 > 0",
        });
    }
    let sampler = MbSampler::new(gas, seed);
    let alpha = pl.exponent_alpha;
    let k = pl.prefactor_k;
    let n = samples as u64;

    let chunk_starts: Vec<u64> = (0..n).step_by(MC_CHUNK as usize).collect();
    let partials: Vec<(f64, f64)> = chunk_starts
        .par_iter()
        .map(|&start| {
            let end = (start + MC_CHUNK).min(n);
            let mut sum = 0.0;
            let mut sumsq = 0.0;
            for i in start..end {
                let mut stream = sampler.stream(i);
                // |v0 - u| = 0 has probability zero; redraw inside the
                // stream if it ever happens
                let w = loop {
                    let u = stream.next_velocity();
                    let dx = v0 - u[0];
                    let w2 = dx * dx + u[1] * u[1] + u[2] * u[2];
                    if w2 > 0.0 {
                        break w2.sqrt();
                    }
                };
                let y = k * w.powf(alpha + 1.0) / v0;
                sum += y;
                sumsq += y * y;
            }
            (sum, sumsq)
        })
        .collect();

    let (sum, sumsq) = partials
        .into_iter()
        .fold((0.0, 0.0), |(s, q), (ps, pq)| (s + ps, q + pq));
    let nf = samples as f64;
    let mean = sum / nf;
    let variance = ((sumsq - nf * mean * mean) / (nf - 1.0)).max(0.0);
    Ok(MonteCarloEstimate {
        mean,
        std_error: (variance / nf).sqrt(),
    })
}
