//! Seeded random streams.
//!
//! Every random draw in the crate goes through an explicitly passed [`Rng`].
//! Independent sub-computations get their own stream derived from a base seed
//! with [`derive`]: the ChaCha key is the base seed and the stream id selects
//! the ChaCha stream, so results do not depend on evaluation order.

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::matrix::{CMatrix, C64};

pub type Rng = ChaCha20Rng;

pub fn seeded(seed: u64) -> Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Stream `stream` of the generator keyed by `seed`.
pub fn derive(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Standard complex normal: real and imaginary parts i.i.d. N(0, 1/2).
pub fn complex_normal(rng: &mut Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn complex_gaussian_matrix(rows: usize, cols: usize, rng: &mut Rng) -> CMatrix {
    // filled column by column so the draw order is part of the layout contract
    CMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

pub fn real_gaussian_matrix(rows: usize, cols: usize, rng: &mut Rng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| C64::new(rng.sample(StandardNormal), 0.0))
}

pub fn uniform(rng: &mut Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..=hi)
}

/// Uniform point on the unit circle.
pub fn unit_circle(rng: &mut Rng) -> C64 {
    let theta = rng.random_range(0.0..std::f64::consts::TAU);
    C64::from_polar(1.0, theta)
}
