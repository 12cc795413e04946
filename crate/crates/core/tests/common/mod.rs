#![allow(dead_code)]

use framebound_core::measure::QuadratureMeasure;
use framebound_core::{rng, FieldTag, SampledFrame};
use num_complex::Complex64;
use rand::Rng;

/// `n` random unit vectors in `K^d` on atoms of random weight in `[0.2, 2)`.
pub fn weighted_unit_frame(n: usize, d: usize, field: FieldTag, seed: u64) -> SampledFrame {
    let mut r = rng::seeded(seed);
    let vectors = (0..n).map(|_| rng::unit_vector(&mut r, d, field)).collect();
    let weights = (0..n).map(|_| r.random_range(0.2..2.0)).collect();
    SampledFrame::new(field, d, QuadratureMeasure::weighted(weights, true).unwrap(), vectors).unwrap()
}

/// Random vectors of norm in `[0.5, 1.5)` on random atoms.
pub fn weighted_frame(n: usize, d: usize, field: FieldTag, seed: u64) -> SampledFrame {
    let mut r = rng::seeded(seed);
    let vectors = (0..n)
        .map(|_| {
            let len: f64 = r.random_range(0.5..1.5);
            rng::unit_vector(&mut r, d, field).into_iter().map(|z| z * len).collect()
        })
        .collect();
    let weights = (0..n).map(|_| r.random_range(0.2..2.0)).collect();
    SampledFrame::new(field, d, QuadratureMeasure::weighted(weights, true).unwrap(), vectors).unwrap()
}

pub fn field(complex: bool) -> FieldTag {
    if complex {
        FieldTag::Complex
    } else {
        FieldTag::Real
    }
}

/// Naive `Σ_j Σ_k w_j w_k |⟨τ_j, τ_k⟩|^{2m}` over the pairs selected by `keep`.
pub fn brute_double_sum(f: &SampledFrame, m: i32, keep: impl Fn(usize, usize) -> bool) -> f64 {
    let v = f.vectors();
    let w = f.weights();
    let mut total = 0.0;
    for j in 0..v.len() {
        for k in 0..v.len() {
            if keep(j, k) {
                let g: Complex64 = v[j].iter().zip(&v[k]).map(|(a, b)| a * b.conj()).sum();
                total += w[j] * w[k] * g.norm_sqr().powi(m);
            }
        }
    }
    total
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}
