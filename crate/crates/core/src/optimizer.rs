//! Projected gradient descent over `n` unit vectors in `K^d` with the counting
//! measure: low-coherence packings and frame-potential minimizers.
//!
//! Coherence is approached through the smoothed objectives
//! `f_p = (Σ_{j<k} |⟨τ_j,τ_k⟩|^{2p})^{1/p}`, one stage per entry of the
//! exponent schedule, each stage warm-started from the last. Potentials are
//! `Σ_{j,k} |⟨τ_j,τ_k⟩|^{2m}` including the diagonal.
//!
//! Gradients are taken in real coordinates `(Re τ, Im τ)` and stored as
//! complex numbers `∂/∂Re + i ∂/∂Im`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{alt_bounds, sym_dim, welch_discrete, BoundId};
use crate::error::{invalid, Result};
use crate::field::FieldTag;
use crate::frames::{frame_operator, SampledFrame};
use crate::measure::counting_measure;
use crate::metrics;
use crate::numerics::{inner, norm_sqr};
use crate::rng;

pub const DEFAULT_P_SCHEDULE: [f64; 6] = [2.0, 4.0, 8.0, 16.0, 32.0, 64.0];
/// Iterations over which the relative objective change is measured.
pub const STALL_WINDOW: usize = 50;
/// Tolerance for the equiangular and tight flags of an optimized candidate.
pub const CANDIDATE_TOL: f64 = 1e-4;
/// Finite-difference step of [`gradient_check`].
pub const FD_STEP: f64 = 1e-6;
/// Pass threshold on the max relative component error.
pub const GRADIENT_TOL: f64 = 1e-5;

const MAX_HALVINGS: usize = 40;
const STEP_GROWTH: f64 = 1.2;
const MAX_STEP_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Objective {
    Coherence,
    /// Order-`m` potential; `m = 1` is the frame potential.
    Potential { m: u32 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub n: usize,
    pub d: usize,
    pub field: FieldTag,
    pub objective: Objective,
    pub seed: u64,
    pub restarts: usize,
    /// Iteration budget per restart, split evenly across the stages.
    pub max_iters: usize,
    pub p_schedule: Vec<f64>,
    pub step: f64,
    pub tol: f64,
    /// Worker threads for restarts; results do not depend on it.
    pub jobs: usize,
}

impl OptimizerConfig {
    pub fn new(n: usize, d: usize, field: FieldTag, objective: Objective) -> Self {
        Self {
            n,
            d,
            field,
            objective,
            seed: 0,
            restarts: 1,
            max_iters: 20_000,
            p_schedule: DEFAULT_P_SCHEDULE.to_vec(),
            step: 0.1,
            tol: 1e-10,
            jobs: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 || self.n < self.d {
            return Err(invalid(format!("optimizer needs n >= d >= 1, got n = {}, d = {}", self.n, self.d)));
        }
        if self.restarts == 0 || self.max_iters == 0 || self.jobs == 0 {
            return Err(invalid("restarts, max_iters and jobs must be positive"));
        }
        if !(self.step > 0.0 && self.step.is_finite()) || !(self.tol >= 0.0) {
            return Err(invalid("step must be positive and finite, tol non-negative"));
        }
        if let Objective::Potential { m } = self.objective {
            sym_dim(self.d, m)?;
        }
        if self.objective == Objective::Coherence {
            if self.p_schedule.is_empty() {
                return Err(invalid("p_schedule is empty"));
            }
            if self.p_schedule.iter().any(|&p| !(p > 1.0) || !p.is_finite()) {
                return Err(invalid("every smoothing exponent must be finite and > 1"));
            }
            if self.p_schedule.windows(2).any(|w| w[1] <= w[0]) {
                return Err(invalid("p_schedule must be strictly ascending"));
            }
        }
        Ok(())
    }

    /// The smooth objectives minimized in turn.
    pub fn stages(&self) -> Vec<SmoothObjective> {
        match self.objective {
            Objective::Coherence => self.p_schedule.iter().map(|&p| SmoothObjective::Coherence { p }).collect(),
            Objective::Potential { m } => vec![SmoothObjective::Potential { m }],
        }
    }
}

/// A differentiable objective on `n` vectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SmoothObjective {
    /// `(Σ_{j<k} s_jk^p)^{1/p}` with `s_jk = |⟨τ_j,τ_k⟩|²`.
    Coherence { p: f64 },
    /// `Σ_{j,k} s_jk^m`.
    Potential { m: u32 },
}

impl SmoothObjective {
    pub fn value(&self, x: &[Vec<Complex64>]) -> f64 {
        match *self {
            SmoothObjective::Coherence { p } => {
                let s = pair_moduli(x);
                let max = s.iter().fold(0.0, |a: f64, &(_, _, v, _)| a.max(v));
                if max == 0.0 {
                    return 0.0;
                }
                let sum: f64 = s.iter().map(|&(_, _, v, _)| (v / max).powf(p)).sum();
                max * sum.powf(1.0 / p)
            }
            SmoothObjective::Potential { m } => {
                let off: f64 = pair_moduli(x).iter().map(|&(_, _, v, _)| v.powi(m as i32)).sum();
                let diag: f64 = x.iter().map(|v| norm_sqr(v).powi(2 * m as i32)).sum();
                2.0 * off + diag
            }
        }
    }

    /// Euclidean gradient in the complex encoding of the module docs.
    pub fn gradient(&self, x: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
        let d = x.first().map_or(0, Vec::len);
        let mut grad = vec![vec![Complex64::new(0.0, 0.0); d]; x.len()];
        let pairs = pair_moduli(x);
        // ∇_{τ_j} s_jk = 2 g τ_k,  ∇_{τ_k} s_jk = 2 conj(g) τ_j
        let mut add_pair = |j: usize, k: usize, g: Complex64, coef: f64| {
            let a = g * (2.0 * coef);
            let b = g.conj() * (2.0 * coef);
            for i in 0..d {
                grad[j][i] += a * x[k][i];
                grad[k][i] += b * x[j][i];
            }
        };
        match *self {
            SmoothObjective::Coherence { p } => {
                let max = pairs.iter().fold(0.0, |a: f64, &(_, _, v, _)| a.max(v));
                if max == 0.0 {
                    return grad;
                }
                let sum: f64 = pairs.iter().map(|&(_, _, v, _)| (v / max).powf(p)).sum();
                let outer = sum.powf(1.0 / p - 1.0);
                for &(j, k, v, g) in &pairs {
                    add_pair(j, k, g, outer * (v / max).powf(p - 1.0));
                }
            }
            SmoothObjective::Potential { m } => {
                for &(j, k, v, g) in &pairs {
                    // both orders (j, k) and (k, j) appear in the double sum
                    add_pair(j, k, g, 2.0 * m as f64 * v.powi(m as i32 - 1));
                }
                for (j, v) in x.iter().enumerate() {
                    let coef = 4.0 * m as f64 * norm_sqr(v).powi(2 * m as i32 - 1);
                    for i in 0..d {
                        grad[j][i] += v[i] * coef;
                    }
                }
            }
        }
        grad
    }
}

/// `(j, k, |g|², g)` for `j < k`, `g = ⟨τ_j, τ_k⟩`.
fn pair_moduli(x: &[Vec<Complex64>]) -> Vec<(usize, usize, f64, Complex64)> {
    let n = x.len();
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for j in 0..n {
        for k in (j + 1)..n {
            let g = inner(&x[j], &x[k]);
            out.push((j, k, g.norm_sqr(), g));
        }
    }
    out
}

/// Removes the radial component `Re⟨G_j, τ_j⟩ τ_j` of each row and, over the
/// reals, any imaginary part.
fn project_tangent(mut grad: Vec<Vec<Complex64>>, x: &[Vec<Complex64>], field: FieldTag) -> Vec<Vec<Complex64>> {
    for (g, v) in grad.iter_mut().zip(x) {
        let radial = inner(g, v).re / norm_sqr(v);
        for (gi, vi) in g.iter_mut().zip(v) {
            *gi -= vi * radial;
            if field == FieldTag::Real {
                gi.im = 0.0;
            }
        }
    }
    grad
}

fn normalize(v: &mut [Complex64]) {
    let norm = norm_sqr(v).sqrt();
    for z in v.iter_mut() {
        *z /= norm;
    }
}

fn retract(x: &[Vec<Complex64>], dir: &[Vec<Complex64>], eta: f64) -> Vec<Vec<Complex64>> {
    x.iter()
        .zip(dir)
        .map(|(v, g)| {
            let mut w: Vec<Complex64> = v.iter().zip(g).map(|(a, b)| a - b * eta).collect();
            normalize(&mut w);
            w
        })
        .collect()
}

fn frob(x: &[Vec<Complex64>]) -> f64 {
    x.iter().map(|v| norm_sqr(v)).sum::<f64>().sqrt()
}

/// One stage of backtracking descent; returns the iterations taken.
fn descend(obj: &SmoothObjective, x: &mut Vec<Vec<Complex64>>, budget: usize, cfg: &OptimizerConfig) -> usize {
    let mut f = obj.value(x);
    let mut eta = cfg.step;
    let mut history = Vec::with_capacity(budget.min(100_000) + 1);
    history.push(f);
    let mut it = 0;
    while it < budget && f > 0.0 {
        let dir = project_tangent(obj.gradient(x), x, cfg.field);
        if frob(&dir) == 0.0 {
            break;
        }
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let trial = retract(x, &dir, eta);
            let ft = obj.value(&trial);
            if ft <= f {
                accepted = Some((trial, ft));
                break;
            }
            eta *= 0.5;
        }
        let Some((trial, ft)) = accepted else { break };
        *x = trial;
        f = ft;
        it += 1;
        eta = (eta * STEP_GROWTH).min(MAX_STEP_FACTOR * cfg.step);
        history.push(f);
        if it >= STALL_WINDOW && (history[it - STALL_WINDOW] - f).abs() <= cfg.tol * f.abs() {
            break;
        }
    }
    it
}

fn achieved(objective: Objective, x: &[Vec<Complex64>]) -> f64 {
    match objective {
        Objective::Coherence => pair_moduli(x).iter().fold(0.0, |a: f64, &(_, _, v, _)| a.max(v)).sqrt(),
        Objective::Potential { m } => SmoothObjective::Potential { m }.value(x),
    }
}

fn initial(cfg: &OptimizerConfig, restart: usize) -> Vec<Vec<Complex64>> {
    let mut rng = rng::seeded_stream(cfg.seed, restart as u64);
    (0..cfg.n).map(|_| rng::unit_vector(&mut rng, cfg.d, cfg.field)).collect()
}

struct RestartOutcome {
    vectors: Vec<Vec<Complex64>>,
    achieved: f64,
    iterations: usize,
}

fn run_restart(cfg: &OptimizerConfig, restart: usize) -> RestartOutcome {
    let mut x = initial(cfg, restart);
    let stages = cfg.stages();
    let budget = (cfg.max_iters / stages.len()).max(1);
    let iterations = stages.iter().map(|obj| descend(obj, &mut x, budget, cfg)).sum();
    RestartOutcome { achieved: achieved(cfg.objective, &x), vectors: x, iterations }
}

/// Best applicable lower bound on the achieved value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Certificate {
    pub bound: BoundId,
    pub order: Option<f64>,
    pub value: f64,
    /// `achieved − value`.
    pub gap: f64,
}

#[derive(Debug, Clone)]
pub struct OptimizerResult {
    pub vectors: SampledFrame,
    pub achieved: f64,
    pub certificate: Certificate,
    pub equiangular: bool,
    pub tight: bool,
    pub best_restart: usize,
    pub iterations_used: Vec<usize>,
    pub restart_values: Vec<f64>,
}

/// Serializable view of an [`OptimizerResult`] without the vectors.
#[derive(Debug, Clone, Serialize)]
pub struct OptimizerSummary {
    pub n: usize,
    pub d: usize,
    pub field: FieldTag,
    pub objective: Objective,
    pub achieved: f64,
    pub certificate: Certificate,
    pub equiangular: bool,
    pub tight: bool,
    pub best_restart: usize,
    pub iterations_used: Vec<usize>,
    pub restart_values: Vec<f64>,
}

impl OptimizerResult {
    pub fn summary(&self, cfg: &OptimizerConfig) -> OptimizerSummary {
        OptimizerSummary {
            n: cfg.n,
            d: cfg.d,
            field: cfg.field,
            objective: cfg.objective,
            achieved: self.achieved,
            certificate: self.certificate,
            equiangular: self.equiangular,
            tight: self.tight,
            best_restart: self.best_restart,
            iterations_used: self.iterations_used.clone(),
            restart_values: self.restart_values.clone(),
        }
    }
}

fn certificate(cfg: &OptimizerConfig, value: f64) -> Result<Certificate> {
    let (bound, order, lb) = match cfg.objective {
        Objective::Coherence => {
            let mut best = (BoundId::DiscreteMax, Some(1.0), 0.0);
            if let Some(lb) = welch_discrete(cfg.n, cfg.d, 1)?.max_lb {
                best.2 = lb.max(0.0).sqrt();
            }
            if cfg.n >= 2 {
                for (id, v) in alt_bounds(cfg.n, cfg.d, cfg.field)?.entries() {
                    if let Some(v) = v.filter(|&v| v > best.2) {
                        best = (id, None, v);
                    }
                }
            }
            best
        }
        Objective::Potential { m } => (BoundId::DiscreteSum, Some(m as f64), welch_discrete(cfg.n, cfg.d, m)?.sum_lb),
    };
    Ok(Certificate { bound, order, value: lb, gap: value - lb })
}

fn optimize(cfg: &OptimizerConfig) -> Result<OptimizerResult> {
    cfg.validate()?;
    let outcomes: Vec<RestartOutcome> = if cfg.jobs > 1 && cfg.restarts > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build()
            .map_err(|e| invalid(format!("cannot start worker pool: {e}")))?;
        pool.install(|| (0..cfg.restarts).into_par_iter().map(|r| run_restart(cfg, r)).collect())
    } else {
        (0..cfg.restarts).map(|r| run_restart(cfg, r)).collect()
    };
    let best_restart = (0..outcomes.len())
        .min_by(|&a, &b| outcomes[a].achieved.total_cmp(&outcomes[b].achieved).then(a.cmp(&b)))
        .expect("at least one restart");
    let iterations_used = outcomes.iter().map(|o| o.iterations).collect();
    let restart_values = outcomes.iter().map(|o| o.achieved).collect();
    let best = outcomes.into_iter().nth(best_restart).expect("index in range");

    let frame = SampledFrame::new_normalized(cfg.field, cfg.d, counting_measure(cfg.n)?, best.vectors)?;
    let certificate = certificate(cfg, best.achieved)?;
    let equiangular = metrics::equiangularity(&frame, CANDIDATE_TOL).is_none_or(|e| e.equiangular);
    let tight = match cfg.objective {
        Objective::Potential { m: 1 } => certificate.gap <= 1e-6 * certificate.value,
        _ => frame_operator(&frame)?.is_tight(CANDIDATE_TOL),
    };
    Ok(OptimizerResult {
        vectors: frame,
        achieved: best.achieved,
        certificate,
        equiangular,
        tight,
        best_restart,
        iterations_used,
        restart_values,
    })
}

/// Searches for `n` unit vectors of small coherence.
pub fn minimize_coherence(cfg: &OptimizerConfig) -> Result<OptimizerResult> {
    if cfg.objective != Objective::Coherence {
        return Err(invalid("minimize_coherence needs the coherence objective"));
    }
    optimize(cfg)
}

/// Searches for `n` unit vectors of small order-`m` potential.
pub fn minimize_potential(cfg: &OptimizerConfig) -> Result<OptimizerResult> {
    if !matches!(cfg.objective, Objective::Potential { .. }) {
        return Err(invalid("minimize_potential needs a potential objective"));
    }
    optimize(cfg)
}

/// Dispatches on `cfg.objective`.
pub fn run(cfg: &OptimizerConfig) -> Result<OptimizerResult> {
    optimize(cfg)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GradientCheck {
    pub objective: SmoothObjective,
    /// Max over real coordinates of `|a − fd| / max(|a|, |fd|, floor)` with
    /// `floor = 1e−4 · max(1, ‖a‖_∞)`.
    pub max_rel_error: f64,
    /// Norm of the tangent-projected gradient.
    pub riemannian_norm: f64,
    pub passed: bool,
}

/// Analytic gradient against central differences at `x`, one real coordinate
/// at a time (imaginary coordinates only over `C`).
pub fn gradient_check_at(obj: &SmoothObjective, field: FieldTag, x: &[Vec<Complex64>]) -> GradientCheck {
    let grad = obj.gradient(x);
    let mut analytic = Vec::new();
    let mut numeric = Vec::new();
    let mut probe = x.to_vec();
    let parts: &[Complex64] = match field {
        FieldTag::Real => &[Complex64::new(1.0, 0.0)],
        FieldTag::Complex => &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)],
    };
    for j in 0..x.len() {
        for i in 0..x[j].len() {
            for &unit in parts {
                let base = probe[j][i];
                probe[j][i] = base + unit * FD_STEP;
                let up = obj.value(&probe);
                probe[j][i] = base - unit * FD_STEP;
                let down = obj.value(&probe);
                probe[j][i] = base;
                numeric.push((up - down) / (2.0 * FD_STEP));
                analytic.push(if unit.re == 1.0 { grad[j][i].re } else { grad[j][i].im });
            }
        }
    }
    let scale = analytic.iter().fold(0.0, |a: f64, v| a.max(v.abs()));
    let floor = 1e-4 * scale.max(1.0);
    let max_rel_error = analytic
        .iter()
        .zip(&numeric)
        .map(|(a, fd)| (a - fd).abs() / a.abs().max(fd.abs()).max(floor))
        .fold(0.0, f64::max);
    let riemannian_norm = frob(&project_tangent(grad, x, field));
    GradientCheck { objective: *obj, max_rel_error, riemannian_norm, passed: max_rel_error <= GRADIENT_TOL }
}

/// [`gradient_check_at`] for every stage objective of `cfg` at a random
/// configuration drawn from `probe_seed`.
pub fn gradient_check(cfg: &OptimizerConfig, probe_seed: u64) -> Result<Vec<GradientCheck>> {
    cfg.validate()?;
    let mut rng = rng::seeded(probe_seed);
    let x: Vec<Vec<Complex64>> = (0..cfg.n).map(|_| rng::unit_vector(&mut rng, cfg.d, cfg.field)).collect();
    Ok(cfg.stages().iter().map(|obj| gradient_check_at(obj, cfg.field, &x)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: usize, d: usize, field: FieldTag, objective: Objective) -> OptimizerConfig {
        OptimizerConfig { restarts: 4, seed: 1, ..OptimizerConfig::new(n, d, field, objective) }
    }

    #[test]
    fn validation() {
        assert!(cfg(2, 3, FieldTag::Real, Objective::Coherence).validate().is_err());
        let mut c = cfg(3, 2, FieldTag::Real, Objective::Coherence);
        c.p_schedule = vec![4.0, 2.0];
        assert!(c.validate().is_err());
        c.p_schedule = vec![1.0, 2.0];
        assert!(c.validate().is_err());
        c.p_schedule = vec![2.0];
        c.restarts = 0;
        assert!(c.validate().is_err());
        assert!(minimize_potential(&cfg(3, 2, FieldTag::Real, Objective::Coherence)).is_err());
        assert!(minimize_coherence(&cfg(3, 2, FieldTag::Real, Objective::Potential { m: 1 })).is_err());
    }

    #[test]
    fn mercedes_benz_packing() {
        let r = minimize_coherence(&cfg(3, 2, FieldTag::Real, Objective::Coherence)).unwrap();
        assert!((r.achieved - 0.5).abs() < 1e-3, "{}", r.achieved);
        assert!((r.certificate.value - 0.5).abs() < 1e-15);
        assert!(r.achieved >= r.certificate.value - 1e-6);
        assert!(r.vectors.vectors().iter().flatten().all(|z| z.im == 0.0));
    }

    #[test]
    fn sic_packing() {
        let r = minimize_coherence(&cfg(4, 2, FieldTag::Complex, Objective::Coherence)).unwrap();
        assert!((r.achieved - (1.0_f64 / 3.0).sqrt()).abs() < 1e-3, "{}", r.achieved);
    }

    #[test]
    fn orthonormal_basis_found() {
        for field in [FieldTag::Real, FieldTag::Complex] {
            let r = minimize_coherence(&cfg(3, 3, field, Objective::Coherence)).unwrap();
            assert!(r.achieved < 1e-6, "{field}: {}", r.achieved);
            let r = minimize_potential(&cfg(3, 3, field, Objective::Potential { m: 1 })).unwrap();
            assert!((r.achieved - 3.0).abs() < 1e-6);
        }
    }

    #[test]
    fn tight_frame_by_potential() {
        let r = minimize_potential(&cfg(5, 2, FieldTag::Complex, Objective::Potential { m: 1 })).unwrap();
        assert!((r.achieved - 12.5).abs() < 1e-6, "{}", r.achieved);
        assert!(r.tight);
    }

    #[test]
    fn order_two_potential_finds_sic() {
        let r = minimize_potential(&cfg(4, 2, FieldTag::Complex, Objective::Potential { m: 2 })).unwrap();
        assert!((r.achieved - 16.0 / 3.0).abs() < 1e-4, "{}", r.achieved);
        assert!(r.equiangular);
        let c = metrics::coherence(&r.vectors).unwrap();
        assert!((c * c - 1.0 / 3.0).abs() < 1e-3);
    }

    #[test]
    fn deterministic_across_jobs() {
        let mut c = cfg(5, 3, FieldTag::Complex, Objective::Coherence);
        c.max_iters = 3000;
        let a = minimize_coherence(&c).unwrap();
        c.jobs = 3;
        let b = minimize_coherence(&c).unwrap();
        assert_eq!(a.achieved.to_bits(), b.achieved.to_bits());
        assert_eq!(a.restart_values, b.restart_values);
        assert_eq!(a.vectors.vectors(), b.vectors.vectors());
    }

    #[test]
    fn gradients_match_finite_differences() {
        for field in [FieldTag::Real, FieldTag::Complex] {
            for (n, d, obj) in [(3, 2, Objective::Potential { m: 1 }), (4, 3, Objective::Potential { m: 2 }), (4, 2, Objective::Coherence)] {
                for check in gradient_check(&cfg(n, d, field, obj), 7).unwrap() {
                    assert!(check.passed, "{field} {check:?}");
                }
            }
        }
    }

    #[test]
    fn onb_is_critical_for_potential() {
        let onb: Vec<Vec<Complex64>> =
            (0..3).map(|i| (0..3).map(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect()).collect();
        let check = gradient_check_at(&SmoothObjective::Potential { m: 1 }, FieldTag::Complex, &onb);
        assert!(check.riemannian_norm <= 1e-8);
        assert!(check.passed);
    }

    #[test]
    fn iterates_stay_on_sphere() {
        let r = minimize_coherence(&cfg(6, 3, FieldTag::Complex, Objective::Coherence)).unwrap();
        for v in r.vectors.vectors() {
            assert!((norm_sqr(v).sqrt() - 1.0).abs() <= 1e-12);
        }
        assert!(r.achieved >= r.certificate.value - 1e-6);
    }
}
