//! Seeded random sources.
//!
//! Every random quantity in the crate is drawn from `ChaCha8Rng`
//! (`rand_chacha`), seeded with `seed_from_u64(seed)`. Independent streams of
//! one seed (optimizer restarts, for example) are selected with
//! `set_stream(index)`. Gaussian variates come from `rand_distr::StandardNormal`.
//! Both are portable, so a seed reproduces the same numbers on every platform.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::field::FieldTag;
use crate::numerics::norm_sqr;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Stream `stream` of `seed`; stream 0 is the same generator as [`seeded`].
pub fn seeded_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform unit vector on the sphere of `K^d` (Gaussian sampling then normalization).
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, d: usize, field: FieldTag) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..d)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = match field {
                    FieldTag::Real => 0.0,
                    FieldTag::Complex => rng.sample(StandardNormal),
                };
                Complex64::new(re, im)
            })
            .collect();
        let n = norm_sqr(&v).sqrt();
        if n > 1e-150 {
            return v.into_iter().map(|z| z / n).collect();
        }
    }
}
