//! Finite discretizations of a measure space `(Ω, μ)`.
//!
//! A [`QuadratureMeasure`] is a list of nodes with positive weights. The
//! `atomic` flag decides what the diagonal `Δ = {(α, α)}` of `Ω × Ω` weighs:
//!
//! * atomic: the nodes are genuine atoms, so `(μ×μ)(Δ) = Σ w²` and
//!   off-diagonal double integrals skip the `j = k` terms exactly;
//! * atomless: the nodes are quadrature cells of a diffuse measure, so
//!   `(μ×μ)(Δ) = 0` and off-diagonal integrals are the full double sum (the
//!   `j = k` terms are an `O(h)` artifact that vanishes under refinement).

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::field::FieldTag;
use crate::numerics::compensated_sum;
use crate::rng;

/// Parameter point attached to a quadrature node.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    /// Opaque 1-based label (counting measures, file input).
    Label(usize),
    /// Real coordinates (interval nodes).
    Point(Vec<f64>),
    /// A sampled unit vector (sphere and projective-space Monte Carlo).
    Vector(Vec<Complex64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureMeasure {
    nodes: Vec<Node>,
    weights: Vec<f64>,
    atomic: bool,
}

/// `μ(Ω)`, `(μ×μ)(Δ)` and `(μ×μ)((Ω×Ω)\Δ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MassSummary {
    pub total: f64,
    pub diagonal: f64,
    pub offdiag: f64,
}

impl MassSummary {
    /// Builds a summary from the total and diagonal mass; `offdiag = total² − diagonal`.
    pub fn new(total: f64, diagonal: f64) -> Self {
        Self {
            total,
            diagonal,
            offdiag: total * total - diagonal,
        }
    }
}

impl QuadratureMeasure {
    pub fn new(nodes: Vec<Node>, weights: Vec<f64>, atomic: bool) -> Result<Self> {
        if weights.is_empty() {
            return Err(invalid("a measure needs at least one node"));
        }
        if nodes.len() != weights.len() {
            return Err(invalid(format!("{} nodes but {} weights", nodes.len(), weights.len())));
        }
        if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| !(w.is_finite() && **w > 0.0)) {
            return Err(invalid(format!("weight {i} must be positive and finite, got {w}")));
        }
        Ok(Self { nodes, weights, atomic })
    }

    /// Labelled nodes `1..=n` with the given weights.
    pub fn weighted(weights: Vec<f64>, atomic: bool) -> Result<Self> {
        let nodes = (1..=weights.len()).map(Node::Label).collect();
        Self::new(nodes, weights, atomic)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn is_atomic(&self) -> bool {
        self.atomic
    }

    /// True for the counting measure: atomic with every weight exactly 1.
    pub fn is_counting(&self) -> bool {
        self.atomic && self.weights.iter().all(|&w| w == 1.0)
    }

    pub fn mass_summary(&self) -> MassSummary {
        mass_summary(self)
    }
}

pub fn counting_measure(n: usize) -> Result<QuadratureMeasure> {
    if n == 0 {
        return Err(invalid("counting measure needs n >= 1"));
    }
    QuadratureMeasure::weighted(vec![1.0; n], true)
}

/// Composite trapezoid rule on `[a, b]` with `n` equally spaced nodes.
pub fn uniform_interval(a: f64, b: f64, n: usize) -> Result<QuadratureMeasure> {
    if !(a.is_finite() && b.is_finite()) || b <= a {
        return Err(invalid(format!("interval needs finite a < b, got [{a}, {b}]")));
    }
    if n < 2 {
        return Err(invalid(format!("trapezoid rule needs at least 2 nodes, got {n}")));
    }
    let h = (b - a) / (n - 1) as f64;
    let nodes = (0..n)
        .map(|i| {
            let x = if i == n - 1 { b } else { a + i as f64 * h };
            Node::Point(vec![x])
        })
        .collect();
    let weights = (0..n)
        .map(|i| if i == 0 || i == n - 1 { 0.5 * h } else { h })
        .collect();
    QuadratureMeasure::new(nodes, weights, false)
}

/// `n` i.i.d. uniform points of the unit sphere in `K^d`, each of weight `1/n`.
/// The sampled vectors are stored as the node labels.
pub fn monte_carlo_sphere(d: usize, field: FieldTag, n: usize, seed: u64) -> Result<QuadratureMeasure> {
    if d == 0 {
        return Err(invalid("dimension must be at least 1"));
    }
    if n == 0 {
        return Err(invalid("Monte Carlo measure needs n >= 1"));
    }
    let mut rng = rng::seeded(seed);
    let nodes = (0..n).map(|_| Node::Vector(rng::unit_vector(&mut rng, d, field))).collect();
    QuadratureMeasure::new(nodes, vec![1.0 / n as f64; n], false)
}

pub fn mass_summary(q: &QuadratureMeasure) -> MassSummary {
    let total = compensated_sum(q.weights.iter().copied());
    let diagonal = if q.atomic {
        compensated_sum(q.weights.iter().map(|w| w * w))
    } else {
        0.0
    };
    MassSummary::new(total, diagonal)
}
