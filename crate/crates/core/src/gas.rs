//! Background-gas model: thermodynamic state, the Maxwell–Boltzmann
//! velocity distribution and its most probable speed
//! v_mp = sqrt(2 k_B T / m), ideal-gas pressure-to-density conversion,
//! and seeded velocity sampling for the Monte-Carlo oracle.
//!
//! Everything is in SI units; unit conversion belongs at the CLI
//! boundary.

use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// Fixed CODATA/SI constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// k_B, J/K
    pub boltzmann: f64,
    /// ħ, J·s
    pub reduced_planck: f64,
    /// u, kg
    pub atomic_mass_unit: f64,
}

impl PhysicalConstants {
    pub const SI: PhysicalConstants = PhysicalConstants {
        boltzmann: 1.380_649e-23,
        reduced_planck: 1.054_571_817e-34,
        atomic_mass_unit: 1.660_539_066_60e-27,
    };
}

/// Thermodynamic state of the background gas: temperature T, particle
/// mass m, and number density n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasState {
    temperature: f64,
    particle_mass: f64,
    number_density: f64,
}

impl GasState {
    pub fn new(temperature: f64, particle_mass: f64, number_density: f64) -> Result<Self> {
        if !(temperature > 0.0 && temperature.is_finite()) {
            return Err(Error::Domain {
                context: "GasState",
                value: temperature,
                requirement: "temperature > 0",
            });
        }
        if !(particle_mass > 0.0 && particle_mass.is_finite()) {
            return Err(Error::Domain {
                context: "GasState",
                value: particle_mass,
                requirement: "particle_mass > 0",
            });
        }
        if !(number_density >= 0.0 && number_density.is_finite()) {
            return Err(Error::Domain {
                context: "GasState",
                value: number_density,
                requirement: "number_density >= 0",
            });
        }
        Ok(GasState {
            temperature,
            particle_mass,
            number_density,
        })
    }

    /// Gas state with the density derived from pressure through the
    /// ideal-gas law.
    pub fn with_pressure(temperature: f64, particle_mass: f64, pressure: f64) -> Result<Self> {
        let n = density_from_pressure(pressure, temperature)?;
        GasState::new(temperature, particle_mass, n)
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn particle_mass(&self) -> f64 {
        self.particle_mass
    }

    pub fn number_density(&self) -> f64 {
        self.number_density
    }
}

/// Most probable speed v_mp = sqrt(2 k_B T / m) of the gas.
pub fn most_probable_speed(gas: &GasState) -> f64 {
    (2.0 * PhysicalConstants::SI.boltzmann * gas.temperature / gas.particle_mass).sqrt()
}

/// Ideal-gas number density n = p / (k_B T).
pub fn density_from_pressure(pressure: f64, temperature: f64) -> Result<f64> {
    if !(pressure >= 0.0 && pressure.is_finite()) {
        return Err(Error::Domain {
            context: "density_from_pressure",
            value: pressure,
            requirement: "pressure >= 0",
        });
    }
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(Error::Domain {
            context: "density_from_pressure",
            value: temperature,
            requirement: "temperature > 0",
        });
    }
    Ok(pressure / (PhysicalConstants::SI.boltzmann * temperature))
}

/// Maxwell–Boltzmann velocity density
/// f(u) = (π v_mp²)^(−3/2) exp(−|u|²/v_mp²); integrates to 1 over
/// velocity space.
pub fn mb_pdf(u: [f64; 3], gas: &GasState) -> f64 {
    let vmp2 = 2.0 * PhysicalConstants::SI.boltzmann * gas.temperature / gas.particle_mass;
    let norm = (std::f64::consts::PI * vmp2).powf(-1.5);
    let u2 = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
    norm * (-u2 / vmp2).exp()
}

/// Counter-seeded Maxwell–Boltzmann velocity sampler.
///
/// Sample `i` is a deterministic function of `(seed, i)`, so any
/// partition of the index range — across threads or across calls —
/// produces the same velocities.
#[derive(Debug, Clone, Copy)]
pub struct MbSampler {
    seed: u64,
    /// per-component standard deviation, v_mp / sqrt(2)
    sigma: f64,
}

impl MbSampler {
    pub fn new(gas: &GasState, seed: u64) -> Self {
        MbSampler {
            seed,
            sigma: most_probable_speed(gas) / std::f64::consts::SQRT_2,
        }
    }

    /// The random stream owned by sample `index`.
    pub fn stream(&self, index: u64) -> VelocityStream {
        VelocityStream {
            rng: SplitMix64::for_index(self.seed, index),
            sigma: self.sigma,
        }
    }

    pub fn sample(&self, index: u64) -> [f64; 3] {
        self.stream(index).next_velocity()
    }
}

/// Gaussian velocity stream for one sample index. Successive draws stay
/// inside the stream, which keeps rejection-style guards deterministic.
#[derive(Debug, Clone)]
pub struct VelocityStream {
    rng: SplitMix64,
    sigma: f64,
}

impl VelocityStream {
    pub fn next_velocity(&mut self) -> [f64; 3] {
        let (g0, g1) = self.rng.next_gaussian_pair();
        let (g2, _) = self.rng.next_gaussian_pair();
        [self.sigma * g0, self.sigma * g1, self.sigma * g2]
    }
}

/// `count` i.i.d. Maxwell–Boltzmann velocity draws, deterministic for a
/// fixed seed.
pub fn mb_sample(gas: &GasState, seed: u64, count: usize) -> Result<Vec<[f64; 3]>> {
    if count == 0 {
        return Err(Error::Domain {
            context: "mb_sample",
            value: 0.0,
            requirement: "count >= 1",
        });
    }
    let sampler = MbSampler::new(gas, seed);
    Ok((0..count as u64).map(|i| sampler.sample(i)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const KB: f64 = 1.380_649e-23;

    fn argon(density: f64) -> GasState {
        GasState::new(
            300.0,
            39.948 * PhysicalConstants::SI.atomic_mass_unit,
            density,
        )
        .unwrap()
    }

    #[test]
    fn state_invariants() {
        assert!(GasState::new(0.0, 1.0, 1.0).is_err());
        assert!(GasState::new(300.0, -1.0, 1.0).is_err());
        assert!(GasState::new(300.0, 1.0, -1.0).is_err());
        assert!(GasState::new(300.0, 1.0, 0.0).is_ok());
    }

    #[test]
    fn most_probable_speed_forced_unit_case() {
        // k_B T = 0.5 J and m = 1 kg force v_mp = 1 m/s
        let gas = GasState::new(0.5 / KB, 1.0, 0.0).unwrap();
        assert_relative_eq!(most_probable_speed(&gas), 1.0, max_relative = 1e-15);
    }

    #[test]
    fn most_probable_speed_argon() {
        assert_relative_eq!(
            most_probable_speed(&argon(0.0)),
            353.382_628_863_524_28,
            max_relative = 1e-14
        );
    }

    #[test]
    fn most_probable_speed_temperature_scaling() {
        let m = 4.3e-26;
        let g1 = GasState::new(120.0, m, 0.0).unwrap();
        let g4 = GasState::new(480.0, m, 0.0).unwrap();
        assert_relative_eq!(
            most_probable_speed(&g4),
            2.0 * most_probable_speed(&g1),
            max_relative = 1e-15
        );
    }

    #[test]
    fn density_from_pressure_values() {
        assert_relative_eq!(
            density_from_pressure(KB * 300.0, 300.0).unwrap(),
            1.0,
            max_relative = 1e-15
        );
        // 1e-7 mbar at room temperature
        assert_relative_eq!(
            density_from_pressure(1e-5, 300.0).unwrap(),
            2.414_323_505_346_640_1e15,
            max_relative = 1e-15
        );
        assert_eq!(density_from_pressure(0.0, 300.0).unwrap(), 0.0);
        assert!(density_from_pressure(-1.0, 300.0).is_err());
        assert!(density_from_pressure(1.0, 0.0).is_err());
    }

    #[test]
    fn pdf_peak_and_isotropy() {
        let gas = argon(1e15);
        let vmp2 = most_probable_speed(&gas).powi(2);
        assert_relative_eq!(
            mb_pdf([0.0; 3], &gas),
            (std::f64::consts::PI * vmp2).powf(-1.5),
            max_relative = 1e-15
        );
        // depends on |u| only
        let p = mb_pdf([100.0, -40.0, 7.0], &gas);
        assert_relative_eq!(p, mb_pdf([7.0, 100.0, -40.0], &gas), max_relative = 1e-14);
        assert_relative_eq!(p, mb_pdf([-100.0, 40.0, -7.0], &gas), max_relative = 1e-14);
        // strictly below the peak away from the origin
        assert!(p < mb_pdf([0.0; 3], &gas));
    }

    #[test]
    fn pdf_normalization_by_radial_quadrature() {
        let gas = argon(0.0);
        let vmp = most_probable_speed(&gas);
        // ∫ 4π u² f(|u|) du over [0, 8 v_mp], composite Simpson
        let n = 4000;
        let h = 8.0 * vmp / n as f64;
        let radial = |u: f64| 4.0 * std::f64::consts::PI * u * u * mb_pdf([u, 0.0, 0.0], &gas);
        let mut sum = radial(0.0) + radial(8.0 * vmp);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            sum += w * radial(i as f64 * h);
        }
        let integral = sum * h / 3.0;
        assert_relative_eq!(integral, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn sampling_is_deterministic_and_partitionable() {
        let gas = argon(1e15);
        let a = mb_sample(&gas, 7, 64).unwrap();
        let b = mb_sample(&gas, 7, 64).unwrap();
        assert_eq!(a, b);
        // per-index access reproduces the batch exactly
        let sampler = MbSampler::new(&gas, 7);
        for (i, v) in a.iter().enumerate() {
            assert_eq!(sampler.sample(i as u64), *v);
        }
        // a different seed decorrelates
        let c = mb_sample(&gas, 8, 64).unwrap();
        assert_ne!(a, c);
        assert!(mb_sample(&gas, 7, 0).is_err());
    }

    #[test]
    fn sample_moments() {
        let gas = argon(1e15);
        let vmp = most_probable_speed(&gas);
        let n = 1_000_000usize;
        let sampler = MbSampler::new(&gas, 20_260_810);
        let mut comp_sum = [0.0_f64; 3];
        let mut sq_sum = 0.0;
        let mut sq_sq_sum = 0.0;
        for i in 0..n as u64 {
            let u = sampler.sample(i);
            let u2 = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
            for (acc, component) in comp_sum.iter_mut().zip(u) {
                *acc += component;
            }
            sq_sum += u2;
            sq_sq_sum += u2 * u2;
        }
        let nf = n as f64;
        // <|u|^2> = (3/2) v_mp^2 within 5 sample standard errors
        let mean_sq = sq_sum / nf;
        let var_sq = (sq_sq_sum / nf - mean_sq * mean_sq) * nf / (nf - 1.0);
        let se = (var_sq / nf).sqrt();
        assert!(
            (mean_sq - 1.5 * vmp * vmp).abs() < 5.0 * se,
            "mean |u|^2 = {mean_sq}, expected {} +- {se}",
            1.5 * vmp * vmp
        );
        // component means vanish within 5 standard errors (sd = v_mp/sqrt(2))
        let comp_se = vmp / std::f64::consts::SQRT_2 / nf.sqrt();
        for acc in comp_sum {
            assert!((acc / nf).abs() < 5.0 * comp_se);
        }
    }

    // double-precision erfc (Numerical Recipes rational approximation,
    // fractional error below 1.2e-7) — oracle use only
    fn erfc_approx(x: f64) -> f64 {
        let z = x.abs();
        let t = 1.0 / (1.0 + 0.5 * z);
        let ans = t
            * (-z * z - 1.26551223
                + t * (1.00002368
                    + t * (0.37409196
                        + t * (0.09678418
                            + t * (-0.18628806
                                + t * (0.27886807
                                    + t * (-1.13520398
                                        + t * (1.48851587
                                            + t * (-0.82215223 + t * 0.17087277)))))))))
                .exp();
        if x >= 0.0 {
            ans
        } else {
            2.0 - ans
        }
    }

    #[test]
    fn sampled_speed_cdf_matches_analytic() {
        // Kolmogorov–Smirnov distance between the empirical speed CDF and
        // F(s) = erf(y) - (2/sqrt(pi)) y exp(-y^2), y = s/v_mp
        let gas = argon(1e15);
        let vmp = most_probable_speed(&gas);
        let n = 1_000_000usize;
        let sampler = MbSampler::new(&gas, 1234);
        let mut speeds: Vec<f64> = (0..n as u64)
            .map(|i| {
                let u = sampler.sample(i);
                (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt()
            })
            .collect();
        speeds.sort_by(f64::total_cmp);
        let mut ks = 0.0_f64;
        for (i, s) in speeds.iter().enumerate() {
            let y = s / vmp;
            let cdf =
                (1.0 - erfc_approx(y)) - 2.0 / std::f64::consts::PI.sqrt() * y * (-y * y).exp();
            let lo = i as f64 / n as f64;
            let hi = (i + 1) as f64 / n as f64;
            ks = ks.max((cdf - lo).abs()).max((hi - cdf).abs());
        }
        assert!(ks < 0.002, "KS distance {ks}");
    }
}
