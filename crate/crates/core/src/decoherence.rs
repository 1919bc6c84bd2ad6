//! Decoherence observables.
//!
//! Classical side: the rate Γ = n v₀ σ_macro(v₀), the visibility decay
//! V = V₀ exp(−Γt), and pressure scans of both.
//!
//! Quantum side: an isotropic momentum-transfer kernel G(q) normalized
//! so that ∫ G(q) 4πq² dq = Γ, the spatial decoherence function
//!
//! ```text
//! F(Δx) = Γ − ∫ G(q) 4πq² sinc(qΔx/ħ) dq
//! ```
//!
//! (the decay rate of the position off-diagonal ρ(x, x+Δx); F(0) = 0,
//! F(∞) → Γ as the oscillatory average washes out), and the
//! collisions-only density-matrix evolution
//! ρ(x, x', t) = ρ(x, x', 0) e^(−F(x−x') t), which damps interference
//! terms while leaving populations untouched.
//!
//! Coherence is tracked along one axis; the isotropic 3-D kernel enters
//! through the sinc projection, which keeps F exact for radial kernels
//! without any 3-D grid.

use crate::error::{Error, Result};
use crate::gas::{density_from_pressure, most_probable_speed, GasState, PhysicalConstants};
use crate::specfun::SpecfunConfig;
use crate::xsection::{sigma_macro_exact, BeamState, PowerLawCrossSection};
use ndarray::Array2;
use num_complex::Complex64;

/// sinc(y) = sin(y)/y with the 0/0 limit handled by series.
fn sinc(y: f64) -> f64 {
    let y = y.abs();
    if y < 1e-4 {
        let y2 = y * y;
        1.0 - y2 / 6.0 + y2 * y2 / 120.0
    } else {
        y.sin() / y
    }
}

/// Radial momentum-transfer kernel: nonnegative weights G(q) on a
/// strictly increasing grid of momentum magnitudes, normalized so the
/// trapezoidal ∫ G(q) 4πq² dq equals `gamma_total`.
///
/// Stands in for the product of the collisional kernel and the gas
/// structure factor at the beam momentum, which is only ever needed
/// through this radial weight.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumKernel {
    q_grid: Vec<f64>,
    weights: Vec<f64>,
    gamma_total: f64,
}

/// Trapezoid of 4π q² G(q) φ(q) over the kernel grid. The kernel
/// normalization and the decoherence function must go through this one
/// routine so that F(0) vanishes identically.
fn radial_trapezoid(q: &[f64], g: &[f64], phase: impl Fn(f64) -> f64) -> f64 {
    let f = |i: usize| 4.0 * std::f64::consts::PI * q[i] * q[i] * g[i] * phase(q[i]);
    let mut sum = 0.0;
    let mut prev = f(0);
    for i in 1..q.len() {
        let cur = f(i);
        sum += 0.5 * (prev + cur) * (q[i] - q[i - 1]);
        prev = cur;
    }
    sum
}

impl MomentumKernel {
    /// Radial Gaussian G(q) ∝ exp(−q²/(2 q_width²)) tabulated on
    /// [0, 8 q_width], renormalized to `gamma_total`.
    pub fn gaussian(gamma_total: f64, q_width: f64, q_points: usize) -> Result<Self> {
        if !(gamma_total > 0.0 && gamma_total.is_finite()) {
            return Err(Error::Domain {
                context: "MomentumKernel::gaussian",
                value: gamma_total,
                requirement: "gamma_total > 0",
            });
        }
        if !(q_width > 0.0 && q_width.is_finite()) {
            return Err(Error::Domain {
                context: "MomentumKernel::gaussian",
                value: q_width,
                requirement: "q_width > 0",
            });
        }
        if q_points < 64 {
            return Err(Error::Domain {
                context: "MomentumKernel::gaussian",
                value: q_points as f64,
                requirement: "q_points >= 64",
            });
        }
        let h = 8.0 * q_width / (q_points - 1) as f64;
        let q_grid: Vec<f64> = (0..q_points).map(|i| i as f64 * h).collect();
        let weights: Vec<f64> = q_grid
            .iter()
            .map(|&q| (-q * q / (2.0 * q_width * q_width)).exp())
            .collect();
        Self::renormalized(q_grid, weights, gamma_total)
    }

    /// Kernel from tabulated weights, rescaled so the normalization
    /// invariant holds with `renormalize_to` as the total rate.
    pub fn from_table(q_grid: Vec<f64>, weights: Vec<f64>, renormalize_to: f64) -> Result<Self> {
        if !(renormalize_to > 0.0 && renormalize_to.is_finite()) {
            return Err(Error::Domain {
                context: "MomentumKernel::from_table",
                value: renormalize_to,
                requirement: "renormalize_to > 0",
            });
        }
        Self::renormalized(q_grid, weights, renormalize_to)
    }

    fn renormalized(q_grid: Vec<f64>, mut weights: Vec<f64>, gamma: f64) -> Result<Self> {
        const CTX: &str = "MomentumKernel";
        if q_grid.len() < 2 || q_grid.len() != weights.len() {
            return Err(Error::invalid(
                CTX,
                "q_grid and weights need equal lengths of at least 2",
            ));
        }
        if !(q_grid[0] >= 0.0) {
            return Err(Error::invalid(
                CTX,
                "momentum magnitudes must be nonnegative",
            ));
        }
        if q_grid.windows(2).any(|w| !(w[0] < w[1])) || q_grid.iter().any(|q| !q.is_finite()) {
            return Err(Error::invalid(
                CTX,
                "q_grid must be finite and strictly increasing",
            ));
        }
        if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(Error::invalid(
                CTX,
                "weights must be finite and nonnegative",
            ));
        }
        let raw = radial_trapezoid(&q_grid, &weights, |_| 1.0);
        if !(raw > 0.0) {
            return Err(Error::invalid(CTX, "weights integrate to zero"));
        }
        let scale = gamma / raw;
        for w in &mut weights {
            *w *= scale;
        }
        // store the recomputed integral rather than the requested rate:
        // F(0) then cancels exactly, not merely to rounding
        let gamma_total = radial_trapezoid(&q_grid, &weights, |_| 1.0);
        Ok(MomentumKernel {
            q_grid,
            weights,
            gamma_total,
        })
    }

    pub fn q_grid(&self) -> &[f64] {
        &self.q_grid
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Total rate Γ = ∫ G 4πq² dq encoded by the kernel.
    pub fn gamma_total(&self) -> f64 {
        self.gamma_total
    }
}

/// Decay rate of the off-diagonal element at separation `delta_x`:
/// F(Δ) = Γ − ∫ G(q) 4πq² sinc(qΔ/ħ) dq ∈ [0, 2Γ], with F(0) = 0
/// exactly and F(Δ→∞) → Γ.
pub fn decoherence_function(kernel: &MomentumKernel, delta_x: f64) -> f64 {
    let r = delta_x.abs() / PhysicalConstants::SI.reduced_planck;
    let averaged = radial_trapezoid(&kernel.q_grid, &kernel.weights, |q| sinc(q * r));
    kernel.gamma_total - averaged
}

/// Total scattering rate Γ = n v₀ σ.
pub fn decoherence_rate(gas: &GasState, beam: &BeamState, sigma: f64) -> f64 {
    gas.number_density() * beam.speed_v0() * sigma
}

/// Fringe visibility V = V₀ e^(−Γt).
pub fn visibility(v0_ref: f64, rate: f64, time: f64) -> Result<f64> {
    if !(v0_ref > 0.0 && v0_ref <= 1.0) {
        return Err(Error::Domain {
            context: "visibility",
            value: v0_ref,
            requirement: "0 < V0 <= 1",
        });
    }
    if !(rate >= 0.0 && rate.is_finite()) {
        return Err(Error::Domain {
            context: "visibility",
            value: rate,
            requirement: "rate >= 0",
        });
    }
    if !(time >= 0.0 && time.is_finite()) {
        return Err(Error::Domain {
            context: "visibility",
            value: time,
            requirement: "time >= 0",
        });
    }
    Ok(v0_ref * (-rate * time).exp())
}

/// Inputs for a visibility-versus-pressure scan. The gas temperature
/// and particle mass act as a template; the number density is derived
/// from each scanned pressure.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub gas_temperature: f64,
    pub gas_particle_mass: f64,
    pub beam: BeamState,
    pub cross_section: PowerLawCrossSection,
    /// time of flight through the apparatus, s
    pub flight_time: f64,
    /// reference visibility V₀
    pub v0_reference_visibility: f64,
    pub pressure_min: f64,
    pub pressure_max: f64,
    pub points: usize,
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        const CTX: &str = "ScanConfig";
        if !(self.gas_temperature > 0.0 && self.gas_temperature.is_finite()) {
            return Err(Error::Domain {
                context: CTX,
                value: self.gas_temperature,
                requirement: "gas_temperature > 0",
            });
        }
        if !(self.gas_particle_mass > 0.0 && self.gas_particle_mass.is_finite()) {
            return Err(Error::Domain {
                context: CTX,
                value: self.gas_particle_mass,
                requirement: "gas_particle_mass > 0",
            });
        }
        if !(self.flight_time > 0.0 && self.flight_time.is_finite()) {
            return Err(Error::Domain {
                context: CTX,
                value: self.flight_time,
                requirement: "flight_time > 0",
            });
        }
        if !(self.v0_reference_visibility > 0.0 && self.v0_reference_visibility <= 1.0) {
            return Err(Error::Domain {
                context: CTX,
                value: self.v0_reference_visibility,
                requirement: "0 < V0 <= 1",
            });
        }
        if !(self.pressure_min > 0.0 && self.pressure_min < self.pressure_max)
            || !self.pressure_max.is_finite()
        {
            return Err(Error::Domain {
                context: CTX,
                value: self.pressure_min,
                requirement: "0 < pressure_min < pressure_max",
            });
        }
        if self.points < 2 {
            return Err(Error::Domain {
                context: CTX,
                value: self.points as f64,
                requirement: "points >= 2",
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub pressure: f64,
    pub number_density: f64,
    pub rate: f64,
    pub visibility: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub rows: Vec<ScanRow>,
    /// pressure at which V = V₀/2, from the exact inversion
    /// p_half = ln2 k_B T / (v₀ σ t)
    pub p_half: f64,
    /// thermally averaged cross-section used for every row
    pub sigma_macro: f64,
    pub most_probable_speed: f64,
}

/// Visibility at `points` log-spaced pressures. The cross-section is
/// pressure-independent, so ln(V/V₀) is exactly linear in p.
pub fn visibility_pressure_scan(cfg: &ScanConfig) -> Result<ScanResult> {
    cfg.validate()?;
    let template = GasState::new(cfg.gas_temperature, cfg.gas_particle_mass, 0.0)?;
    let vmp = most_probable_speed(&template);
    let sigma = sigma_macro_exact(
        &cfg.cross_section,
        cfg.beam.speed_v0(),
        vmp,
        &SpecfunConfig::default(),
    )?;

    let ln_min = cfg.pressure_min.ln();
    let ln_max = cfg.pressure_max.ln();
    let mut rows = Vec::with_capacity(cfg.points);
    for i in 0..cfg.points {
        let frac = i as f64 / (cfg.points - 1) as f64;
        let pressure = (ln_min + frac * (ln_max - ln_min)).exp();
        let n = density_from_pressure(pressure, cfg.gas_temperature)?;
        let gas = GasState::new(cfg.gas_temperature, cfg.gas_particle_mass, n)?;
        let rate = decoherence_rate(&gas, &cfg.beam, sigma);
        let vis = visibility(cfg.v0_reference_visibility, rate, cfg.flight_time)?;
        rows.push(ScanRow {
            pressure,
            number_density: n,
            rate,
            visibility: vis,
        });
    }

    let p_half = std::f64::consts::LN_2 * PhysicalConstants::SI.boltzmann * cfg.gas_temperature
        / (cfg.beam.speed_v0() * sigma * cfg.flight_time);
    Ok(ScanResult {
        rows,
        p_half,
        sigma_macro: sigma,
        most_probable_speed: vmp,
    })
}

/// Complex density matrix over a uniform 1-D position grid; Hermitian
/// with unit grid-weighted trace after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    x_grid: Vec<f64>,
    values: Array2<Complex64>,
}

impl DensityMatrix {
    pub fn new(x_grid: Vec<f64>, mut values: Array2<Complex64>) -> Result<Self> {
        const CTX: &str = "DensityMatrix";
        let n = x_grid.len();
        if n < 2 {
            return Err(Error::invalid(CTX, "grid needs at least two points"));
        }
        if values.dim() != (n, n) {
            return Err(Error::invalid(
                CTX,
                format!("values must be {n}x{n} to match the grid"),
            ));
        }
        let dx = x_grid[1] - x_grid[0];
        if !(dx > 0.0) {
            return Err(Error::invalid(CTX, "grid must be increasing"));
        }
        for w in x_grid.windows(2) {
            if ((w[1] - w[0]) - dx).abs() > 1e-9 * dx {
                return Err(Error::invalid(CTX, "grid must be uniform"));
            }
        }

        let max_abs = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if !(max_abs > 0.0) || !max_abs.is_finite() {
            return Err(Error::invalid(
                CTX,
                "values must be finite and not all zero",
            ));
        }
        for i in 0..n {
            for j in 0..=i {
                let defect = (values[(i, j)] - values[(j, i)].conj()).norm();
                if defect > 1e-12 * max_abs {
                    return Err(Error::invalid(
                        CTX,
                        format!("not Hermitian at ({i},{j}): defect {defect:e}"),
                    ));
                }
            }
        }

        let trace: Complex64 = (0..n).map(|i| values[(i, i)]).sum();
        let weighted = trace.re * dx;
        if !(weighted > 0.0) || trace.im.abs() > 1e-12 * trace.re.abs() {
            return Err(Error::invalid(
                CTX,
                "grid-weighted trace must be real positive",
            ));
        }
        values.mapv_inplace(|v| v / weighted);
        Ok(DensityMatrix { x_grid, values })
    }

    /// Pure state ρ = |ψ⟩⟨ψ| from amplitudes tabulated on the grid.
    pub fn from_wavefunction(x_grid: Vec<f64>, psi: &[Complex64]) -> Result<Self> {
        if psi.len() != x_grid.len() {
            return Err(Error::invalid(
                "DensityMatrix",
                "wavefunction length must match the grid",
            ));
        }
        let n = psi.len();
        let values = Array2::from_shape_fn((n, n), |(i, j)| psi[i] * psi[j].conj());
        DensityMatrix::new(x_grid, values)
    }

    pub fn x_grid(&self) -> &[f64] {
        &self.x_grid
    }

    pub fn values(&self) -> &Array2<Complex64> {
        &self.values
    }

    pub fn spacing(&self) -> f64 {
        self.x_grid[1] - self.x_grid[0]
    }

    /// Grid-weighted trace Σᵢ ρ(xᵢ,xᵢ) Δx.
    pub fn trace_weighted(&self) -> Complex64 {
        let n = self.x_grid.len();
        let trace: Complex64 = (0..n).map(|i| self.values[(i, i)]).sum();
        trace * Complex64::new(self.spacing(), 0.0)
    }

    /// Largest |ρ(xᵢ,xⱼ) − ρ(xⱼ,xᵢ)*| over the matrix.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.x_grid.len();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..=i {
                worst = worst.max((self.values[(i, j)] - self.values[(j, i)].conj()).norm());
            }
        }
        worst
    }
}

/// Collisions-only evolution over `time`: every off-diagonal element is
/// damped as e^(−F(|xᵢ−xⱼ|) t). The propagator is closed-form, so there
/// is no time-stepping error; the diagonal is exactly invariant and the
/// map composes as a semigroup.
pub fn evolve_density_matrix(
    rho0: &DensityMatrix,
    kernel: &MomentumKernel,
    time: f64,
) -> Result<DensityMatrix> {
    if !(time >= 0.0 && time.is_finite()) {
        return Err(Error::Domain {
            context: "evolve_density_matrix",
            value: time,
            requirement: "time >= 0",
        });
    }
    let n = rho0.x_grid.len();
    let dx = rho0.spacing();
    // one decay factor per grid separation; F(0) = 0 keeps decay[0] = 1
    let decay: Vec<f64> = (0..n)
        .map(|d| (-decoherence_function(kernel, d as f64 * dx) * time).exp())
        .collect();
    let values = Array2::from_shape_fn((n, n), |(i, j)| {
        let d = i.abs_diff(j);
        rho0.values[(i, j)] * decay[d]
    });
    Ok(DensityMatrix {
        x_grid: rho0.x_grid.clone(),
        values,
    })
}
