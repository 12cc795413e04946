//! Frame-quality functionals: coherence, CRMS, frame potential,
//! equiangularity and tightness.

use serde::Serialize;

use crate::bounds::{welch_continuous, EQUALITY_TOL};
use crate::error::{invalid, Result};
use crate::frames::{frame_operator, SampledFrame, TIGHT_TOL};

/// Default tolerance on `max |(|⟨τ_j,τ_k⟩| − γ)|` for equiangularity.
pub const EQUIANGULAR_TOL: f64 = 1e-8;

/// `max_{j≠k} |⟨τ_j, τ_k⟩|`; `None` for a single node.
pub fn coherence(f: &SampledFrame) -> Option<f64> {
    f.pair_max(f64::sqrt)
}

/// `sqrt(∫_{(Ω×Ω)\Δ} |⟨τ_α,τ_β⟩|² / (μ×μ)((Ω×Ω)\Δ))`; `None` when the
/// off-diagonal mass vanishes.
pub fn crms(f: &SampledFrame) -> Result<Option<f64>> {
    if !f.is_normalized() {
        return Err(invalid("CRMS requires a normalized family"));
    }
    let mass = f.mass_summary();
    if !(mass.offdiag > 0.0) {
        return Ok(None);
    }
    let integral = f.pair_sum(|s| s, !f.measure().is_atomic());
    Ok(Some((integral / mass.offdiag).sqrt()))
}

/// `FP = ∬|⟨τ_α,τ_β⟩|² dμ dμ`, summed over samples.
pub fn frame_potential(f: &SampledFrame) -> f64 {
    f.pair_sum(|s| s, true)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Equiangularity {
    pub equiangular: bool,
    /// Mean of `|⟨τ_j, τ_k⟩|` over `j < k`.
    pub gamma: f64,
    pub max_deviation: f64,
}

/// `None` for a single node.
pub fn equiangularity(f: &SampledFrame, tol: f64) -> Option<Equiangularity> {
    if f.len() < 2 {
        return None;
    }
    let mut moduli = Vec::with_capacity(f.len() * (f.len() - 1) / 2);
    f.for_each_pair(|_, _, g| moduli.push(g.norm()));
    let gamma = moduli.iter().sum::<f64>() / moduli.len() as f64;
    let max_deviation = moduli.iter().map(|m| (m - gamma).abs()).fold(0.0, f64::max);
    Some(Equiangularity { equiangular: max_deviation <= tol, gamma, max_deviation })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EqualityCertificate {
    pub coherence_sq: f64,
    /// First-order sup bound `[μ²/d − Δ]/offdiag`.
    pub sup_lb: f64,
    pub equiangular: bool,
    pub gamma: f64,
    /// Equiangular with `γ² = sup_lb`: the family is a Welch-equiangular frame.
    pub welch_equiangular: bool,
    /// `coherence² = sup_lb` within the bound-report tolerance.
    pub equality: bool,
    /// `welch_equiangular ⇒ equality` holds.
    pub consistent: bool,
}

/// Compares `coherence²` with the first-order sup bound.
///
/// Equiangularity alone does not force equality (two unit vectors at any
/// angle are equiangular), so the implication is checked for equiangular
/// families whose common value is the bound itself.
pub fn equality_certificate(f: &SampledFrame) -> Result<EqualityCertificate> {
    if !f.is_normalized() {
        return Err(invalid("equality certificate requires a normalized family"));
    }
    let mass = f.mass_summary();
    let (Some(coh), Some(sup_lb)) = (coherence(f), welch_continuous(&mass, f.dim(), 1)?.sup_lb) else {
        return Err(invalid("equality certificate needs two nodes and positive off-diagonal mass"));
    };
    let eq = equiangularity(f, EQUIANGULAR_TOL).expect("two or more nodes");
    let scale = EQUALITY_TOL * sup_lb.abs().max(1.0);
    let coherence_sq = coh * coh;
    let equality = (coherence_sq - sup_lb).abs() <= scale;
    let welch_equiangular = eq.equiangular && (eq.gamma * eq.gamma - sup_lb).abs() <= scale;
    Ok(EqualityCertificate {
        coherence_sq,
        sup_lb,
        equiangular: eq.equiangular,
        gamma: eq.gamma,
        welch_equiangular,
        equality,
        consistent: !welch_equiangular || equality,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricsReport {
    pub coherence: Option<f64>,
    /// `None` for non-normalized families or zero off-diagonal mass.
    pub crms: Option<f64>,
    pub potential: f64,
    pub tight: bool,
    /// `b / a`, `None` when the frame does not span.
    pub bound_ratio: Option<f64>,
    pub equiangular: bool,
    pub gamma: Option<f64>,
    pub max_deviation: Option<f64>,
}

pub fn metrics_report(f: &SampledFrame) -> Result<MetricsReport> {
    let op = frame_operator(f)?;
    let eq = equiangularity(f, EQUIANGULAR_TOL);
    let crms = if f.is_normalized() { crms(f)? } else { None };
    Ok(MetricsReport {
        coherence: coherence(f),
        crms,
        potential: frame_potential(f),
        tight: op.is_tight(TIGHT_TOL),
        bound_ratio: op.bound_ratio(),
        equiangular: eq.is_some_and(|e| e.equiangular),
        gamma: eq.map(|e| e.gamma),
        max_deviation: eq.map(|e| e.max_deviation),
    })
}
