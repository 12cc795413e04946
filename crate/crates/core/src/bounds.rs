//! Welch-type lower bounds: closed forms, left-hand sides evaluated on a
//! sampled frame, and [`BoundReport`]s comparing the two.
//!
//! Throughout, `C(d, m) = binom(d + m − 1, m)` is the dimension of the
//! symmetric tensor power `Sym^m` of a `d`-dimensional space.
//!
//! Suprema over `α ≠ β` are replaced by maxima over distinct quadrature nodes.
//! For atomless measures this under-approximates the true supremum by
//! `O(mesh)`; reports carry the node count so callers can refine.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::field::FieldTag;
use crate::frames::{canonical_dual, frame_operator, is_dual_pair, SampledFrame};
use crate::measure::MassSummary;
use crate::metrics;
use crate::numerics::{compensated_sum, inner, matrix_power_trace, norm_sqr, CompensatedSum};

/// Relative tolerance (against `max(1, |rhs|)`) for equality detection and for
/// the satisfied check.
pub const EQUALITY_TOL: f64 = 1e-6;
/// Tolerance on `|⟨τ_α, ω_α⟩ − ⟨τ_0, ω_0⟩|` for the dual pairing to count as constant.
pub const PAIRING_TOL: f64 = 1e-8;

const MAX_EXACT: u128 = 1 << 53;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundId {
    /// `∬|⟨τ_α,τ_β⟩|^{2m} ≥ μ(Ω)²/C(d,m)` for normalized families.
    WelchIntegral,
    /// `sup_{α≠β}|⟨τ_α,τ_β⟩|^{2m} ≥ [μ(Ω)²/C(d,m) − (μ×μ)(Δ)] / (μ×μ)(Ω²\Δ)`.
    WelchSup,
    /// Non-normalized integral form with `(∫‖τ‖^{2m})²` on the right.
    GeneralizedIntegral,
    GeneralizedSup,
    /// Discrete sum bound `Σ_{j,k}|⟨τ_j,τ_k⟩|^{2m} ≥ n²/C(d,m)`.
    DiscreteSum,
    /// Discrete max bound `max_{j≠k}|⟨τ_j,τ_k⟩|^{2m} ≥ (n/C(d,m) − 1)/(n − 1)`.
    DiscreteMax,
    PWelch,
    /// Jensen bound on `(1/d) Tra(S^r)` against `(μ(Ω)/d)^r`.
    TracePower,
    BukhCox,
    Orthoplex,
    Levenstein,
    Exponential,
    /// Dual-frame sup bound under a constant pairing `⟨τ_α, ω_α⟩`.
    DualWelch,
    /// Dual-frame sup bound without the constant-pairing hypothesis.
    DualWelchCorollary,
    /// `∬|⟨τ_α, ω_β⟩|² ≥ d` for any dual pair.
    DualDimension,
    /// `I_CRMS ≥ sqrt(first-order sup bound)`.
    Crms,
    /// `μ(Ω)² ≥ FP`.
    PotentialUpper,
    /// `FP ≥ (μ×μ)(Δ)`.
    PotentialDiagonal,
    /// `b · d ≥ μ(Ω)` for normalized families with upper frame bound `b`.
    MassDimension,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundReport {
    pub bound: BoundId,
    /// Order `m`, exponent `p` or power `r`, when the bound has one.
    pub order: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
    /// `lhs − rhs`.
    pub gap: f64,
    pub equality: bool,
    /// The right-hand side is not positive, so the bound says nothing.
    pub vacuous: bool,
    /// Number of quadrature nodes behind the left-hand side.
    pub nodes: usize,
}

impl BoundReport {
    /// Report for the inequality `lhs ≥ rhs`.
    pub fn new(bound: BoundId, order: Option<f64>, lhs: f64, rhs: f64, nodes: usize) -> Self {
        let gap = lhs - rhs;
        let scale = EQUALITY_TOL * rhs.abs().max(1.0);
        Self {
            bound,
            order,
            lhs,
            rhs,
            satisfied: gap >= -scale,
            gap,
            equality: gap.abs() <= scale,
            vacuous: rhs <= 0.0,
            nodes,
        }
    }
}

/// One entry of [`check_all`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum BoundOutcome {
    Report(BoundReport),
    NotApplicable {
        bound: BoundId,
        order: Option<f64>,
        reason: String,
    },
}

impl BoundOutcome {
    fn na(bound: BoundId, order: Option<f64>, reason: impl Into<String>) -> Self {
        BoundOutcome::NotApplicable { bound, order, reason: reason.into() }
    }

    pub fn report(&self) -> Option<&BoundReport> {
        match self {
            BoundOutcome::Report(r) => Some(r),
            BoundOutcome::NotApplicable { .. } => None,
        }
    }

    pub fn bound(&self) -> BoundId {
        match self {
            BoundOutcome::Report(r) => r.bound,
            BoundOutcome::NotApplicable { bound, .. } => *bound,
        }
    }
}

/// `binom(d + m − 1, m)`, exact; errors once the value exceeds `2^53`.
pub fn sym_dim(d: usize, m: u32) -> Result<u64> {
    if d == 0 || m == 0 {
        return Err(invalid(format!("sym_dim needs d >= 1 and m >= 1, got d = {d}, m = {m}")));
    }
    let mut c: u128 = 1;
    for i in 1..=m as u128 {
        // c = binom(d − 1 + i, i) after this step; the division is exact.
        c = c * (d as u128 - 1 + i) / i;
        if c > MAX_EXACT {
            return Err(Error::Range(format!("binom({}, {m}) exceeds 2^53", d as u64 + m as u64 - 1)));
        }
    }
    Ok(c as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WelchDiscrete {
    pub sum_lb: f64,
    /// `None` when `n = 1`.
    pub max_lb: Option<f64>,
}

/// Discrete Welch bounds for `n` unit vectors in dimension `d`.
///
/// `max_lb` is evaluated as the single quotient `(n − C) / (C (n − 1))` of
/// exact integers, which is also the rounding path of [`welch_continuous`] on
/// counting measures.
pub fn welch_discrete(n: usize, d: usize, m: u32) -> Result<WelchDiscrete> {
    if d == 0 || n < d {
        return Err(invalid(format!("Welch bounds need n >= d >= 1, got n = {n}, d = {d}")));
    }
    let c = sym_dim(d, m)? as f64;
    let nf = n as f64;
    let sum_lb = (nf * nf) / c;
    let max_lb = (n >= 2).then(|| (nf - c) / (c * (nf - 1.0)));
    Ok(WelchDiscrete { sum_lb, max_lb })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WelchContinuous {
    pub integral_lb: f64,
    /// `None` when the off-diagonal mass vanishes.
    pub sup_lb: Option<f64>,
}

/// Continuous Welch bounds from the masses of `(Ω, μ)`.
pub fn welch_continuous(mass: &MassSummary, d: usize, m: u32) -> Result<WelchContinuous> {
    let c = sym_dim(d, m)? as f64;
    let t2 = mass.total * mass.total;
    let integral_lb = t2 / c;
    // [μ²/C − Δ]/offdiag, written with a single division
    let sup_lb = (mass.offdiag > 0.0).then(|| (t2 - c * mass.diagonal) / (c * mass.offdiag));
    Ok(WelchContinuous { integral_lb, sup_lb })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LhsValues {
    /// `∬|⟨τ_α,τ_β⟩|^{2m} dμ dμ` as the full double sum.
    pub full: f64,
    /// Integral over `(Ω×Ω)\Δ`: the `j ≠ k` terms for atomic measures, the full
    /// sum for atomless ones.
    pub offdiag: f64,
    /// `max_{j≠k}|⟨τ_j,τ_k⟩|^{2m}`, `None` for a single node.
    pub sup: Option<f64>,
}

pub fn evaluate_lhs(f: &SampledFrame, m: u32) -> Result<LhsValues> {
    if m == 0 {
        return Err(invalid("order m must be at least 1"));
    }
    let kernel = |s: f64| s.powi(m as i32);
    let full = f.pair_sum(kernel, true);
    let offdiag = if f.measure().is_atomic() { f.pair_sum(kernel, false) } else { full };
    Ok(LhsValues { full, offdiag, sup: f.pair_max(kernel) })
}

fn require_normalized(f: &SampledFrame, what: &str) -> Result<()> {
    if f.is_normalized() {
        Ok(())
    } else {
        Err(invalid(format!("{what} requires a normalized family")))
    }
}

/// Integral and sup forms of the order-`m` continuous Welch bound for a
/// normalized family. The sup report is `None` when it does not apply (a
/// single node or zero off-diagonal mass).
pub fn welch_bounds(f: &SampledFrame, m: u32) -> Result<(BoundReport, Option<BoundReport>)> {
    require_normalized(f, "the continuous Welch bound")?;
    let lhs = evaluate_lhs(f, m)?;
    let rhs = welch_continuous(&f.mass_summary(), f.dim(), m)?;
    let order = Some(m as f64);
    let integral = BoundReport::new(BoundId::WelchIntegral, order, lhs.full, rhs.integral_lb, f.len());
    let sup = match (lhs.sup, rhs.sup_lb) {
        (Some(l), Some(r)) => Some(BoundReport::new(BoundId::WelchSup, order, l, r, f.len())),
        _ => None,
    };
    Ok((integral, sup))
}

/// Welch bounds for families that need not be normalized: the right-hand side
/// uses `(∫‖τ_α‖^{2m} dμ)²` and the diagonal term `∫_Δ ‖τ_α‖^{4m}`.
pub fn welch_generalized(f: &SampledFrame, m: u32) -> Result<(BoundReport, Option<BoundReport>)> {
    let lhs = evaluate_lhs(f, m)?;
    let c = sym_dim(f.dim(), m)? as f64;
    let mass = f.mass_summary();
    let norms: Vec<f64> = f.vectors().iter().map(|v| norm_sqr(v)).collect();
    let moment = compensated_sum(f.weights().iter().zip(&norms).map(|(w, s)| w * s.powi(m as i32)));
    let diagonal = if f.measure().is_atomic() {
        compensated_sum(f.weights().iter().zip(&norms).map(|(w, s)| w * w * s.powi(2 * m as i32)))
    } else {
        0.0
    };
    let order = Some(m as f64);
    let integral_rhs = moment * moment / c;
    let integral = BoundReport::new(BoundId::GeneralizedIntegral, order, lhs.full, integral_rhs, f.len());
    let sup = match lhs.sup {
        Some(l) if mass.offdiag > 0.0 => Some(BoundReport::new(
            BoundId::GeneralizedSup,
            order,
            l,
            (moment * moment - c * diagonal) / (c * mass.offdiag),
            f.len(),
        )),
        _ => None,
    };
    Ok((integral, sup))
}

/// `∬|⟨τ_α,τ_β⟩|^p ≥ offdiag^{1−p/2} (μ(Ω)²/d − Δ)^{p/2} + Δ` for `p > 2`.
///
/// When `μ(Ω)²/d < Δ` the Hölder term is taken as zero, leaving `Δ`.
pub fn p_welch(f: &SampledFrame, p: f64) -> Result<BoundReport> {
    if !(p > 2.0) || !p.is_finite() {
        return Err(invalid(format!("p-Welch bound needs 2 < p < ∞, got {p}")));
    }
    require_normalized(f, "the p-Welch bound")?;
    let mass = f.mass_summary();
    if !(mass.offdiag > 0.0) {
        return Err(invalid("p-Welch bound needs positive off-diagonal mass"));
    }
    let half = p / 2.0;
    let lhs = f.pair_sum(|s| s.powf(half), true);
    let rhs = p_welch_rhs(&mass, f.dim(), p)?;
    Ok(BoundReport::new(BoundId::PWelch, Some(p), lhs, rhs, f.len()))
}

/// Right-hand side of [`p_welch`] from the masses alone.
pub fn p_welch_rhs(mass: &MassSummary, d: usize, p: f64) -> Result<f64> {
    if !(p > 2.0) || !p.is_finite() {
        return Err(invalid(format!("p-Welch bound needs 2 < p < ∞, got {p}")));
    }
    if d == 0 || !(mass.offdiag > 0.0) {
        return Err(invalid("p-Welch bound needs d >= 1 and positive off-diagonal mass"));
    }
    let half = p / 2.0;
    let base = (mass.total * mass.total / d as f64 - mass.diagonal).max(0.0);
    Ok(mass.offdiag.powf(1.0 - half) * base.powf(half) + mass.diagonal)
}

/// Jensen bound on the eigenvalues of `S`: `(1/d) Tra(S^r) ≥ (μ(Ω)/d)^r` for
/// `r ≥ 1` and the reverse for `0 < r < 1`.
///
/// The report always reads `lhs ≥ rhs`, so for `r < 1` the two sides are swapped.
pub fn trace_power_bound(f: &SampledFrame, r: f64) -> Result<BoundReport> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(invalid(format!("trace power bound needs r > 0, got {r}")));
    }
    require_normalized(f, "the trace power bound")?;
    let d = f.dim() as f64;
    let op = frame_operator(f)?;
    let mean_power = matrix_power_trace(&op.operator, r)? / d;
    let power_of_mean = (f.mass_summary().total / d).powf(r);
    let (lhs, rhs) = if r >= 1.0 { (mean_power, power_of_mean) } else { (power_of_mean, mean_power) };
    Ok(BoundReport::new(BoundId::TracePower, Some(r), lhs, rhs, f.len()))
}

/// Maximum number of equiangular lines: `d²` over `C`, `d(d+1)/2` over `R`.
pub fn gerzon(d: usize, field: FieldTag) -> u64 {
    let d = d as u64;
    match field {
        FieldTag::Complex => d * d,
        FieldTag::Real => d * (d + 1) / 2,
    }
}

/// Coherence lower bounds (on `|⟨·,·⟩|`, not squared) for `n` unit vectors in `K^d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AltBounds {
    /// Requires `n > d`.
    pub bukh_cox: Option<f64>,
    /// Requires `n > Z(d, K)`.
    pub orthoplex: Option<f64>,
    /// Requires `n > Z(d, K)`.
    pub levenstein: Option<f64>,
    pub exponential: f64,
}

impl AltBounds {
    pub fn entries(&self) -> [(BoundId, Option<f64>); 4] {
        [
            (BoundId::BukhCox, self.bukh_cox),
            (BoundId::Orthoplex, self.orthoplex),
            (BoundId::Levenstein, self.levenstein),
            (BoundId::Exponential, Some(self.exponential)),
        ]
    }

    /// Largest applicable value.
    pub fn best(&self) -> Option<(BoundId, f64)> {
        self.entries()
            .into_iter()
            .filter_map(|(id, v)| v.map(|v| (id, v)))
            .fold(None, |best: Option<(BoundId, f64)>, (id, v)| match best {
                Some((_, b)) if b >= v => best,
                _ => Some((id, v)),
            })
    }
}

pub fn alt_bounds(n: usize, d: usize, field: FieldTag) -> Result<AltBounds> {
    if n < 2 || d == 0 {
        return Err(invalid(format!("coherence bounds need n >= 2 and d >= 1, got n = {n}, d = {d}")));
    }
    let m = field.m_field();
    let nf = n as f64;
    let df = d as f64;
    let z_d = gerzon(d, field);

    let bukh_cox = (n > d).then(|| {
        let z = gerzon(n - d, field) as f64;
        let excess = (n - d) as f64;
        z / (nf * (1.0 + m * (excess - 1.0) * (1.0 / m + excess).sqrt()) - z)
    });
    let beyond_gerzon = n as u64 > z_d;
    let orthoplex = beyond_gerzon.then(|| 1.0 / df.sqrt());
    let levenstein = beyond_gerzon.then(|| {
        let md1 = m * df + 1.0;
        ((nf * (m + 1.0) - df * md1) / ((nf - df) * md1)).sqrt()
    });
    // d = 1: n^{-1/0} = n^{-∞} = 0, giving the correct value 1.
    let exponential = 1.0 - 2.0 * nf.powf(-1.0 / (df - 1.0));
    Ok(AltBounds { bukh_cox, orthoplex, levenstein, exponential })
}

fn require_dual(t: &SampledFrame, w: &SampledFrame) -> Result<()> {
    let chk = is_dual_pair(t, w)?;
    if chk.is_dual {
        Ok(())
    } else {
        Err(invalid(format!("frames are not a dual pair (residual {:e})", chk.residual)))
    }
}

/// `∬|⟨τ_α, ω_β⟩|² dμ dμ ≥ d` for a dual pair.
pub fn dual_dim_check(t: &SampledFrame, w: &SampledFrame) -> Result<BoundReport> {
    require_dual(t, w)?;
    let wt = t.weights();
    let mut total = CompensatedSum::new();
    for (a, ta) in t.vectors().iter().enumerate() {
        let row: f64 = w
            .vectors()
            .iter()
            .zip(wt)
            .map(|(wb, &weight)| weight * inner(ta, wb).norm_sqr())
            .sum();
        total.add(wt[a] * row);
    }
    Ok(BoundReport::new(BoundId::DualDimension, None, total.value(), t.dim() as f64, t.len()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DualWelchReport {
    /// `⟨τ_α, ω_α⟩` is the same for every node (within `PAIRING_TOL`).
    pub constant_pairing: bool,
    /// The bound `d(μ² − dΔ)/(μ² · offdiag)`, present only under a constant pairing.
    pub main: Option<BoundReport>,
    /// `[d − ∫_Δ |⟨τ_α, ω_α⟩|²] / offdiag`, valid for every dual pair.
    pub corollary: BoundReport,
}

impl DualWelchReport {
    pub fn satisfied(&self) -> bool {
        self.corollary.satisfied && self.main.is_none_or(|m| m.satisfied)
    }
}

/// Sup bound on `|⟨τ_α, ω_β⟩|²` over distinct nodes for a dual pair.
pub fn dual_welch(t: &SampledFrame, w: &SampledFrame) -> Result<DualWelchReport> {
    require_dual(t, w)?;
    let mass = t.mass_summary();
    if !(mass.offdiag > 0.0) || t.len() < 2 {
        return Err(invalid("dual Welch bound needs at least two nodes and positive off-diagonal mass"));
    }
    let d = t.dim() as f64;
    let mut sup = 0.0_f64;
    for (a, ta) in t.vectors().iter().enumerate() {
        for (b, wb) in w.vectors().iter().enumerate() {
            if a != b {
                sup = sup.max(inner(ta, wb).norm_sqr());
            }
        }
    }
    let pairing: Vec<Complex64> = t.vectors().iter().zip(w.vectors()).map(|(ta, wa)| inner(ta, wa)).collect();
    let first = pairing[0];
    let constant_pairing = pairing
        .iter()
        .all(|p| (p - first).norm() <= PAIRING_TOL * first.norm().max(1.0));

    let diag_pairing = if t.measure().is_atomic() {
        compensated_sum(t.weights().iter().zip(&pairing).map(|(w, p)| w * w * p.norm_sqr()))
    } else {
        0.0
    };
    let corollary = BoundReport::new(BoundId::DualWelchCorollary, None, sup, (d - diag_pairing) / mass.offdiag, t.len());
    let main = constant_pairing.then(|| {
        let t2 = mass.total * mass.total;
        let rhs = d * (t2 - d * mass.diagonal) / (t2 * mass.offdiag);
        BoundReport::new(BoundId::DualWelch, None, sup, rhs, t.len())
    });
    Ok(DualWelchReport { constant_pairing, main, corollary })
}

/// Every bound that applies to `f` for the requested orders `m`, exponents `p`
/// and powers `r`. Inapplicable bounds are listed with the reason.
pub fn check_all(f: &SampledFrame, orders: &[u32], ps: &[f64], rs: &[f64]) -> Result<Vec<BoundOutcome>> {
    use BoundOutcome::Report;

    let mut out = Vec::new();
    let normalized = f.is_normalized();
    let counting = f.measure().is_counting();
    let mass = f.mass_summary();
    const NOT_NORMALIZED: &str = "family is not normalized";

    for &m in orders {
        let order = Some(m as f64);
        if normalized {
            let (integral, sup) = welch_bounds(f, m)?;
            out.push(Report(integral));
            out.push(match sup {
                Some(s) => Report(s),
                None => BoundOutcome::na(BoundId::WelchSup, order, "needs two nodes and positive off-diagonal mass"),
            });
        } else {
            out.push(BoundOutcome::na(BoundId::WelchIntegral, order, NOT_NORMALIZED));
            out.push(BoundOutcome::na(BoundId::WelchSup, order, NOT_NORMALIZED));
        }

        let (integral, sup) = welch_generalized(f, m)?;
        out.push(Report(integral));
        out.push(match sup {
            Some(s) => Report(s),
            None => BoundOutcome::na(BoundId::GeneralizedSup, order, "needs two nodes and positive off-diagonal mass"),
        });

        if normalized && counting && f.len() >= f.dim() {
            let lhs = evaluate_lhs(f, m)?;
            let rhs = welch_discrete(f.len(), f.dim(), m)?;
            out.push(Report(BoundReport::new(BoundId::DiscreteSum, order, lhs.full, rhs.sum_lb, f.len())));
            out.push(match (lhs.sup, rhs.max_lb) {
                (Some(l), Some(r)) => Report(BoundReport::new(BoundId::DiscreteMax, order, l, r, f.len())),
                _ => BoundOutcome::na(BoundId::DiscreteMax, order, "needs n >= 2"),
            });
        } else {
            let reason = "needs a normalized family on a counting measure with n >= d";
            out.push(BoundOutcome::na(BoundId::DiscreteSum, order, reason));
            out.push(BoundOutcome::na(BoundId::DiscreteMax, order, reason));
        }
    }

    for &p in ps {
        out.push(if !normalized {
            BoundOutcome::na(BoundId::PWelch, Some(p), NOT_NORMALIZED)
        } else if !(p > 2.0) {
            BoundOutcome::na(BoundId::PWelch, Some(p), "needs p > 2")
        } else if !(mass.offdiag > 0.0) {
            BoundOutcome::na(BoundId::PWelch, Some(p), "needs positive off-diagonal mass")
        } else {
            Report(p_welch(f, p)?)
        });
    }

    for &r in rs {
        out.push(if !normalized {
            BoundOutcome::na(BoundId::TracePower, Some(r), NOT_NORMALIZED)
        } else if !(r > 0.0) {
            BoundOutcome::na(BoundId::TracePower, Some(r), "needs r > 0")
        } else {
            Report(trace_power_bound(f, r)?)
        });
    }

    let coherence = metrics::coherence(f);
    match coherence {
        Some(coh) if normalized && counting => {
            let alt = alt_bounds(f.len(), f.dim(), f.field())?;
            for (id, value) in alt.entries() {
                out.push(match value {
                    Some(v) => Report(BoundReport::new(id, None, coh, v, f.len())),
                    None => BoundOutcome::na(id, None, "side condition on n fails"),
                });
            }
        }
        _ => {
            for id in [BoundId::BukhCox, BoundId::Orthoplex, BoundId::Levenstein, BoundId::Exponential] {
                out.push(BoundOutcome::na(id, None, "needs a normalized family of n >= 2 vectors on a counting measure"));
            }
        }
    }

    let op = frame_operator(f)?;
    if normalized {
        let fp = metrics::frame_potential(f);
        let t2 = mass.total * mass.total;
        out.push(Report(BoundReport::new(BoundId::PotentialUpper, None, t2, fp, f.len())));
        out.push(Report(BoundReport::new(BoundId::PotentialDiagonal, None, fp, mass.diagonal, f.len())));
        out.push(Report(BoundReport::new(
            BoundId::MassDimension,
            None,
            op.upper * f.dim() as f64,
            mass.total,
            f.len(),
        )));
        match (metrics::crms(f)?, welch_continuous(&mass, f.dim(), 1)?.sup_lb) {
            (Some(c), Some(lb)) => out.push(Report(BoundReport::new(BoundId::Crms, None, c, lb.max(0.0).sqrt(), f.len()))),
            _ => out.push(BoundOutcome::na(BoundId::Crms, None, "needs positive off-diagonal mass")),
        }
    } else {
        for id in [BoundId::PotentialUpper, BoundId::PotentialDiagonal, BoundId::MassDimension, BoundId::Crms] {
            out.push(BoundOutcome::na(id, None, NOT_NORMALIZED));
        }
    }

    if op.spans() {
        let dual = canonical_dual(f)?;
        out.push(Report(dual_dim_check(f, &dual)?));
        if f.len() >= 2 && mass.offdiag > 0.0 {
            let dw = dual_welch(f, &dual)?;
            out.push(match dw.main {
                Some(m) => Report(m),
                None => BoundOutcome::na(BoundId::DualWelch, None, "pairing ⟨τ_α, S⁻¹τ_α⟩ is not constant"),
            });
            out.push(Report(dw.corollary));
        } else {
            let reason = "needs two nodes and positive off-diagonal mass";
            out.push(BoundOutcome::na(BoundId::DualWelch, None, reason));
            out.push(BoundOutcome::na(BoundId::DualWelchCorollary, None, reason));
        }
    } else {
        let reason = "family does not span (no canonical dual)";
        for id in [BoundId::DualDimension, BoundId::DualWelch, BoundId::DualWelchCorollary] {
            out.push(BoundOutcome::na(id, None, reason));
        }
    }

    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::{builtin, Builtin};
    use crate::measure::{counting_measure, uniform_interval};
    use std::f64::consts::PI;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn sym_dim_values() {
        for d in 1..10 {
            assert_eq!(sym_dim(d, 1).unwrap(), d as u64);
        }
        assert_eq!(sym_dim(2, 2).unwrap(), 3);
        assert_eq!(sym_dim(3, 2).unwrap(), 6);
        assert_eq!(sym_dim(4, 3).unwrap(), 20);
        assert!(matches!(sym_dim(1000, 1000), Err(Error::Range(_))));
        assert!(sym_dim(0, 1).is_err());
        assert!(sym_dim(2, 0).is_err());
    }

    #[test]
    fn discrete_welch_values() {
        let w = welch_discrete(4, 2, 1).unwrap();
        assert_eq!(w.sum_lb, 8.0);
        assert_eq!(w.max_lb, Some(1.0 / 3.0));
        for d in 2..6 {
            assert_eq!(welch_discrete(d, d, 1).unwrap().max_lb.unwrap(), 0.0);
        }
        let w = welch_discrete(4, 2, 2).unwrap();
        assert_eq!(w.sum_lb, 16.0 / 3.0);
        assert!((w.max_lb.unwrap() - 1.0 / 9.0).abs() < 1e-16);
        assert_eq!(welch_discrete(1, 1, 1).unwrap().max_lb, None);
        assert!(welch_discrete(2, 3, 1).is_err());
        // vacuous bound is reported as computed
        assert!(welch_discrete(3, 2, 3).unwrap().max_lb.unwrap() < 0.0);
    }

    #[test]
    fn continuous_welch_values() {
        let mass = MassSummary::new(2.0 * PI, 0.0);
        let w = welch_continuous(&mass, 2, 1).unwrap();
        assert!((w.integral_lb - 2.0 * PI * PI).abs() < 1e-12);
        assert!((w.sup_lb.unwrap() - 0.5).abs() < 1e-15);

        let w = welch_continuous(&counting_measure(4).unwrap().mass_summary(), 2, 1).unwrap();
        assert_eq!(w.sup_lb, Some(1.0 / 3.0));

        let w = welch_continuous(&MassSummary::new(3.5, 0.0), 1, 1).unwrap();
        assert_eq!(w.integral_lb, 3.5 * 3.5);
        assert_eq!(welch_continuous(&counting_measure(1).unwrap().mass_summary(), 1, 1).unwrap().sup_lb, None);
    }

    #[test]
    fn generalized_single_atom() {
        let f = SampledFrame::new(FieldTag::Real, 1, counting_measure(1).unwrap(), vec![vec![Complex64::new(2.0, 0.0)]]).unwrap();
        let (integral, sup) = welch_generalized(&f, 1).unwrap();
        assert_eq!(integral.lhs, 16.0);
        assert_eq!(integral.rhs, 16.0);
        assert!(integral.equality);
        assert!(sup.is_none());
    }

    #[test]
    fn generalized_reduces_for_normalized() {
        let f = builtin(&Builtin::RandomUnit { n: 9, d: 3, field: FieldTag::Complex, seed: 3 }).unwrap();
        for m in 1..4 {
            let (gi, gs) = welch_generalized(&f, m).unwrap();
            let (wi, ws) = welch_bounds(&f, m).unwrap();
            assert!(close(gi.rhs, wi.rhs, 1e-13));
            assert!(close(gs.unwrap().rhs, ws.unwrap().rhs, 1e-13));
            assert_eq!(gi.lhs, wi.lhs);
        }
    }

    #[test]
    fn p_welch_examples() {
        let cs = builtin(&Builtin::CosSin { nodes: 513 }).unwrap();
        let r = p_welch(&cs, 4.0).unwrap();
        assert!(close(r.lhs, 1.5 * PI * PI, 1e-9));
        assert!(close(r.rhs, PI * PI, 1e-12));
        assert!(r.satisfied && !r.equality);

        let onb = builtin(&Builtin::Onb { d: 3 }).unwrap();
        let r = p_welch(&onb, 4.0).unwrap();
        assert_eq!((r.lhs, r.rhs), (3.0, 3.0));
        assert!(r.equality);

        assert!(p_welch(&cs, 2.0).is_err());
        // counting measure on 4 atoms, d = 2: 12^{-1} · 4² + 4 = 16/3, the SIC value 4 + 12/9
        let rhs = p_welch_rhs(&counting_measure(4).unwrap().mass_summary(), 2, 4.0).unwrap();
        assert!((rhs - (16.0 / 12.0 + 4.0)).abs() < 1e-14);
        assert!(p_welch(&cs, 1.0).is_err());
    }

    #[test]
    fn trace_power_examples() {
        let cs = builtin(&Builtin::CosSin { nodes: 513 }).unwrap();
        let r = trace_power_bound(&cs, 2.0).unwrap();
        assert!(close(r.lhs, PI * PI, 1e-12) && close(r.rhs, PI * PI, 1e-12));
        assert!(r.equality);
        let r = trace_power_bound(&cs, 1.0).unwrap();
        assert!(close(r.lhs, PI, 1e-12) && r.equality);
        for r in [0.5, 3.0] {
            assert!(trace_power_bound(&builtin(&Builtin::Harmonic { n: 5, d: 3 }).unwrap(), r).unwrap().equality);
        }
        let rand = builtin(&Builtin::RandomUnit { n: 6, d: 3, field: FieldTag::Real, seed: 1 }).unwrap();
        for r in [0.3, 0.5, 2.0, 3.5] {
            let rep = trace_power_bound(&rand, r).unwrap();
            assert!(rep.satisfied && !rep.equality, "r = {r}: {rep:?}");
        }
        assert!(trace_power_bound(&cs, 0.0).is_err());
    }

    #[test]
    fn gerzon_values() {
        assert_eq!(gerzon(2, FieldTag::Complex), 4);
        assert_eq!(gerzon(2, FieldTag::Real), 3);
        assert_eq!(gerzon(1, FieldTag::Real), 1);
        assert_eq!(gerzon(1, FieldTag::Complex), 1);
    }

    #[test]
    fn alt_bound_values() {
        let a = alt_bounds(3, 2, FieldTag::Complex).unwrap();
        assert!((a.bukh_cox.unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(a.orthoplex, None);

        let a = alt_bounds(17, 4, FieldTag::Complex).unwrap();
        assert_eq!(a.orthoplex, Some(0.5));

        let a = alt_bounds(6, 2, FieldTag::Complex).unwrap();
        assert!((a.levenstein.unwrap() - 0.5_f64.sqrt()).abs() < 1e-15);

        let a = alt_bounds(2, 2, FieldTag::Complex).unwrap();
        assert_eq!(a.exponential, 0.0);
        assert_eq!(a.bukh_cox, None);

        assert_eq!(alt_bounds(5, 1, FieldTag::Real).unwrap().exponential, 1.0);
        assert!(alt_bounds(1, 1, FieldTag::Real).is_err());
    }

    #[test]
    fn dual_bounds_onb() {
        let onb = builtin(&Builtin::Onb { d: 3 }).unwrap();
        let dd = dual_dim_check(&onb, &onb).unwrap();
        assert_eq!((dd.lhs, dd.rhs), (3.0, 3.0));
        assert!(dd.equality);
        let dw = dual_welch(&onb, &onb).unwrap();
        assert!(dw.constant_pairing);
        let main = dw.main.unwrap();
        assert_eq!((main.lhs, main.rhs), (0.0, 0.0));
        assert!(main.equality);
    }

    #[test]
    fn dual_bounds_parseval_reduce_to_welch() {
        // A Parseval frame is its own canonical dual, and for unit norms the
        // pairing is constant, so the dual bound equals the first-order sup bound.
        let f = builtin(&Builtin::Harmonic { n: 5, d: 2 }).unwrap();
        let p = f.scaled(Complex64::new((2.0_f64 / 5.0).sqrt(), 0.0)).unwrap();
        let dw = dual_welch(&p, &p).unwrap();
        assert!(dw.constant_pairing);
        let main = dw.main.unwrap();
        let (_, sup) = welch_bounds(&f, 1).unwrap();
        // sup over |⟨τ,τ⟩|² scales by (2/5)² while the bound scales the same way
        assert!(close(main.lhs, sup.unwrap().lhs * 4.0 / 25.0, 1e-12));
    }

    #[test]
    fn dual_bounds_simplex_brute_force() {
        let f = builtin(&Builtin::SimplexEtf { d: 2 }).unwrap();
        let dual = canonical_dual(&f).unwrap();
        // S = (3/2) I, so ω = (2/3) τ and |⟨τ_a, ω_b⟩|² = (4/9)(1/4) = 1/9 off the diagonal
        let mut brute: f64 = 0.0;
        for a in 0..3 {
            for b in 0..3 {
                if a != b {
                    brute = brute.max(inner(&f.vectors()[a], &dual.vectors()[b]).norm_sqr());
                }
            }
        }
        assert!((brute - 1.0 / 9.0).abs() < 1e-15);
        let dw = dual_welch(&f, &dual).unwrap();
        assert_eq!(dw.corollary.lhs, brute);
        assert!(dw.satisfied());
        assert!(dual_welch(&f, &f).is_err());
    }

    #[test]
    fn dual_dim_cos_sin() {
        let cs = builtin(&Builtin::CosSin { nodes: 513 }).unwrap();
        let dual = cs.scaled(Complex64::new(1.0 / PI, 0.0)).unwrap();
        let r = dual_dim_check(&cs, &dual).unwrap();
        assert!(close(r.lhs, 2.0, 1e-9));
        assert!(r.equality);
    }

    #[test]
    fn lhs_values() {
        let cs = builtin(&Builtin::CosSin { nodes: 513 }).unwrap();
        let l = evaluate_lhs(&cs, 1).unwrap();
        assert!(close(l.full, 2.0 * PI * PI, 1e-9));
        assert_eq!(l.full, l.offdiag);
        assert!(l.sup.unwrap() >= 1.0 - 1e-12);
        let l = evaluate_lhs(&cs, 2).unwrap();
        assert!(close(l.full, 1.5 * PI * PI, 1e-9));
        let l = evaluate_lhs(&builtin(&Builtin::Onb { d: 4 }).unwrap(), 1).unwrap();
        assert_eq!((l.full, l.offdiag, l.sup), (4.0, 0.0, Some(0.0)));
        let single = builtin(&Builtin::Onb { d: 1 }).unwrap();
        assert_eq!(evaluate_lhs(&single, 1).unwrap().sup, None);
    }

    fn find(out: &[BoundOutcome], id: BoundId, order: Option<f64>) -> BoundReport {
        *out.iter()
            .filter_map(BoundOutcome::report)
            .find(|r| r.bound == id && r.order == order)
            .unwrap_or_else(|| panic!("missing {id:?} {order:?}"))
    }

    #[test]
    fn check_all_examples() {
        let cs = builtin(&Builtin::CosSin { nodes: 513 }).unwrap();
        let out = check_all(&cs, &[1, 2], &[4.0], &[2.0]).unwrap();
        assert!(find(&out, BoundId::WelchIntegral, Some(1.0)).equality);
        let m2 = find(&out, BoundId::WelchIntegral, Some(2.0));
        assert!(m2.satisfied && !m2.equality);
        assert!(out.iter().filter_map(BoundOutcome::report).all(|r| r.satisfied));

        let sic = builtin(&Builtin::SicD2).unwrap();
        let out = check_all(&sic, &[1, 2], &[], &[]).unwrap();
        let sum = find(&out, BoundId::DiscreteSum, Some(2.0));
        assert!((sum.lhs - 16.0 / 3.0).abs() < 1e-12 && sum.equality);
        assert!(find(&out, BoundId::DiscreteMax, Some(1.0)).equality);
        assert!(out.iter().filter_map(BoundOutcome::report).all(|r| r.satisfied));
    }

    #[test]
    fn check_all_non_normalized() {
        let q = uniform_interval(0.0, 1.0, 4).unwrap();
        let vectors = (0..4).map(|i| vec![Complex64::new(1.0 + i as f64, 0.0), Complex64::new(0.5, -0.25 * i as f64)]).collect();
        let f = SampledFrame::new(FieldTag::Complex, 2, q, vectors).unwrap();
        let out = check_all(&f, &[1], &[3.0], &[2.0]).unwrap();
        assert!(matches!(out[0], BoundOutcome::NotApplicable { bound: BoundId::WelchIntegral, .. }));
        assert!(find(&out, BoundId::GeneralizedIntegral, Some(1.0)).satisfied);
    }
}
