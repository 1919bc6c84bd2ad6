//! Deterministic pseudo-random numbers for the Monte-Carlo oracle.
//!
//! The generator is SplitMix64 (Steele, Lea & Flood's 64-bit finalizer
//! with the golden-gamma increment), written out explicitly so the
//! sequence is reproducible bit-for-bit across releases of this crate.
//! Sampling is counter-seeded: every sample index owns an independent
//! stream derived from `(seed, index)`, so an index range can be
//! partitioned across threads without changing any drawn value.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// SplitMix64: state advances by the golden gamma, outputs are the
/// mixed state.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Stream generator for sample `index` under `seed`. The double
    /// mix decorrelates neighbouring indices.
    pub fn for_index(seed: u64, index: u64) -> Self {
        SplitMix64 {
            state: mix64(seed ^ mix64(index.wrapping_add(GOLDEN_GAMMA))),
        }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform draw on [0, 1) with 53 random mantissa bits.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// One standard-normal pair via the Marsaglia polar method.
    pub fn next_gaussian_pair(&mut self) -> (f64, f64) {
        loop {
            let a = 2.0 * self.next_f64() - 1.0;
            let b = 2.0 * self.next_f64() - 1.0;
            let s = a * a + b * b;
            if s > 0.0 && s < 1.0 {
                let f = (-2.0 * s.ln() / s).sqrt();
                return (a * f, b * f);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible() {
        let mut a = SplitMix64::for_index(42, 7);
        let mut b = SplitMix64::for_index(42, 7);
        for _ in 0..32 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn neighbouring_streams_differ() {
        let mut a = SplitMix64::for_index(42, 7);
        let mut b = SplitMix64::for_index(42, 8);
        let same = (0..64).filter(|_| a.next_u64() == b.next_u64()).count();
        assert_eq!(same, 0);
    }

    #[test]
    fn uniform_in_unit_interval() {
        let mut rng = SplitMix64::new(1);
        for _ in 0..10_000 {
            let u = rng.next_f64();
            assert!((0.0..1.0).contains(&u));
        }
    }

    #[test]
    fn gaussian_pair_moments() {
        let mut rng = SplitMix64::new(99);
        let n = 200_000;
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for _ in 0..n {
            let (a, b) = rng.next_gaussian_pair();
            sum += a + b;
            sumsq += a * a + b * b;
        }
        let m = sum / (2.0 * n as f64);
        let v = sumsq / (2.0 * n as f64);
        assert!(m.abs() < 5.0 / (2.0 * n as f64).sqrt());
        assert!((v - 1.0).abs() < 0.01);
    }
}
