//! Seeded sampling of complex numbers and determinant-one matrices.
//!
//! Streams come from ChaCha8 seeded with a `u64`, so every generator in the
//! crate is a deterministic function of its seed on every platform.

use core::f64::consts::PI;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::{Complex, Mat3};

/// Entries of sampled matrices are resampled when larger than this.
pub const ENTRY_BOUND: f64 = 4.0;

/// Sampled matrices with `|det|` below this are resampled before rescaling.
pub const MIN_DET: f64 = 1e-3;

/// Deterministic sampler.
#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    /// Sampler seeded with `seed`.
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Uniform in `[0, 1)`, 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Standard normal (Box–Muller).
    pub fn normal(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(2.0 * PI * u2)
    }

    /// Complex number with independent standard normal parts.
    pub fn complex_normal(&mut self) -> Complex {
        Complex::new(self.normal(), self.normal())
    }

    /// Complex normal conditioned on modulus at most [`ENTRY_BOUND`].
    pub fn bounded_complex(&mut self) -> Complex {
        loop {
            let z = self.complex_normal();
            if z.norm() <= ENTRY_BOUND {
                return z;
            }
        }
    }

    /// `r·e^{iθ}` with `ln r` uniform on `[ln r_min, ln r_max]`.
    pub fn log_uniform_complex(&mut self, r_min: f64, r_max: f64) -> Complex {
        let r = libm::exp(self.range(libm::log(r_min), libm::log(r_max)));
        Complex::from_polar(r, self.range(-PI, PI))
    }

    /// Random matrix with bounded Gaussian entries, rescaled by a cube root
    /// of its determinant to determinant one.
    pub fn sl3(&mut self) -> Mat3 {
        loop {
            let mut rows = [[Complex::new(0.0, 0.0); 3]; 3];
            for row in rows.iter_mut() {
                for e in row.iter_mut() {
                    *e = self.bounded_complex();
                }
            }
            let m = Mat3::from_rows(rows);
            let det = m.det();
            if det.norm() >= MIN_DET {
                return m.scale(det.powf(-1.0 / 3.0));
            }
        }
    }

    /// Random unipotent upper-triangular matrix.
    pub fn unipotent(&mut self) -> Mat3 {
        Mat3::unipotent(self.complex_normal(), self.complex_normal(), self.complex_normal())
    }
}
