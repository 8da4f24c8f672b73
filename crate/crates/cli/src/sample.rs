//! Low-discrepancy sampling of the parameter box.
//!
//! Points come from the Halton sequence in bases 2, 3, 5 with a
//! Cranley-Patterson shift drawn from the seed, so a seed fixes every point.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BASES: [u8; 3] = [2, 3, 5];

/// Parameter box: x and tau as open intervals, m as an inclusive range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub xmin: f64,
    pub xmax: f64,
    pub taumin: f64,
    pub taumax: f64,
    pub mmin: u32,
    pub mmax: u32,
}

impl Domain {
    pub fn describe(&self) -> String {
        format!(
            "x in ({}, {}), tau in ({}, {}), m in {}..={}",
            self.xmin, self.xmax, self.taumin, self.taumax, self.mmin, self.mmax
        )
    }

    /// Maps a point of the unit cube into the box.
    pub fn map(&self, u: [f64; 3]) -> (f64, f64, u32) {
        let x = self.xmin + u[0] * (self.xmax - self.xmin);
        let tau = self.taumin + u[1] * (self.taumax - self.taumin);
        let span = (self.mmax - self.mmin + 1) as f64;
        let m = self.mmin + ((u[2] * span) as u32).min(self.mmax - self.mmin);
        (x, tau, m)
    }
}

/// Shifted Halton sequence in three dimensions.
#[derive(Debug, Clone)]
pub struct Sampler {
    shift: [f64; 3],
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self {
            shift: std::array::from_fn(|_| rng.random::<f64>()),
        }
    }

    /// The `i`-th point of the unit cube, `i` counted from zero.
    pub fn unit(&self, i: usize) -> [f64; 3] {
        std::array::from_fn(|d| {
            let v = halton::number(BASES[d], i + 1) + self.shift[d];
            // keep strictly inside (0, 1)
            let f = v.fract();
            if f == 0.0 {
                0.5 * f64::EPSILON
            } else {
                f
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_points() {
        let a = Sampler::new(42);
        let b = Sampler::new(42);
        let c = Sampler::new(43);
        for i in 0..100 {
            assert_eq!(a.unit(i), b.unit(i));
        }
        assert_ne!(a.unit(0), c.unit(0));
    }

    #[test]
    fn points_stay_in_the_box() {
        let d = Domain {
            xmin: 1.001,
            xmax: 100.0,
            taumin: 0.0,
            taumax: 100.0,
            mmin: 3,
            mmax: 7,
        };
        let s = Sampler::new(1);
        let mut seen = [false; 5];
        for i in 0..2000 {
            let (x, tau, m) = d.map(s.unit(i));
            assert!(x > 1.001 && x < 100.0 && (0.0..100.0).contains(&tau));
            seen[(m - 3) as usize] = true;
        }
        assert!(seen.iter().all(|&b| b));
    }

    #[test]
    fn low_discrepancy_in_each_axis() {
        let s = Sampler::new(9);
        let n = 4096;
        for d in 0..3 {
            let mut bins = [0usize; 16];
            for i in 0..n {
                bins[(s.unit(i)[d] * 16.0) as usize] += 1;
            }
            assert!(bins.iter().all(|&c| c.abs_diff(n / 16) <= 4), "{bins:?}");
        }
    }
}
