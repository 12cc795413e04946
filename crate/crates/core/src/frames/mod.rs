//! Sampled frames: one vector per node of a [`QuadratureMeasure`].
//!
//! Integrals against `μ` become weighted sums over the nodes, so the frame
//! operator is `S = Σ_α w_α τ_α τ_α*`.

mod builtin;
mod io;

pub use builtin::{builtin, Builtin};
pub use io::{FrameFile, FrameFileEntry, FrameFileNode};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::field::FieldTag;
use crate::measure::{MassSummary, QuadratureMeasure};
use crate::numerics::{
    compensated_sum, eig_hermitian, inner, norm_sqr, solve_hpd, ComplexMatrix, CompensatedSum, EigenDecomposition,
    HermitianMatrix,
};

/// Tolerance on `|‖τ_α‖ − 1|` for a family to count as normalized.
pub const NORMALIZED_TOL: f64 = 1e-10;
/// Frobenius tolerance, per `√d`, on `Σ w ω τ* − I` for a dual pair.
pub const DUAL_TOL: f64 = 1e-8;
/// A frame spans when `a > SPAN_TOL * b`.
pub const SPAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct SampledFrame {
    field: FieldTag,
    dim: usize,
    measure: QuadratureMeasure,
    vectors: Vec<Vec<Complex64>>,
    normalized: bool,
}

impl SampledFrame {
    /// Validates shapes, finiteness and (for real frames) vanishing imaginary
    /// parts. The normalized flag is detected, not imposed.
    pub fn new(field: FieldTag, dim: usize, measure: QuadratureMeasure, vectors: Vec<Vec<Complex64>>) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("dimension must be at least 1"));
        }
        if vectors.len() != measure.len() {
            return Err(invalid(format!("{} vectors for {} nodes", vectors.len(), measure.len())));
        }
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(invalid(format!("vector {i} has length {}, expected {dim}", v.len())));
            }
            if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(invalid(format!("vector {i} has non-finite entries")));
            }
            if field == FieldTag::Real && v.iter().any(|z| z.im != 0.0) {
                return Err(invalid(format!("vector {i} has imaginary parts in a real frame")));
            }
        }
        let normalized = vectors.iter().all(|v| (norm_sqr(v).sqrt() - 1.0).abs() <= NORMALIZED_TOL);
        Ok(Self { field, dim, measure, vectors, normalized })
    }

    /// Like [`SampledFrame::new`] but rejects families that are not unit-norm.
    pub fn new_normalized(
        field: FieldTag,
        dim: usize,
        measure: QuadratureMeasure,
        vectors: Vec<Vec<Complex64>>,
    ) -> Result<Self> {
        let f = Self::new(field, dim, measure, vectors)?;
        if !f.normalized {
            let worst = f
                .vectors
                .iter()
                .map(|v| (norm_sqr(v).sqrt() - 1.0).abs())
                .fold(0.0, f64::max);
            return Err(invalid(format!("family is not normalized (max |‖τ‖ − 1| = {worst:e})")));
        }
        Ok(f)
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn measure(&self) -> &QuadratureMeasure {
        &self.measure
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    pub fn weights(&self) -> &[f64] {
        self.measure.weights()
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn mass_summary(&self) -> MassSummary {
        self.measure.mass_summary()
    }

    /// Same measure, vectors mapped through `f`.
    pub fn map_vectors(&self, f: impl Fn(&[Complex64]) -> Vec<Complex64>) -> Result<Self> {
        let vectors = self.vectors.iter().map(|v| f(v)).collect();
        Self::new(self.field, self.dim, self.measure.clone(), vectors)
    }

    /// Every vector multiplied by the scalar `c`.
    pub fn scaled(&self, c: Complex64) -> Result<Self> {
        let field = if c.im == 0.0 { self.field } else { FieldTag::Complex };
        let vectors = self.vectors.iter().map(|v| v.iter().map(|z| z * c).collect()).collect();
        Self::new(field, self.dim, self.measure.clone(), vectors)
    }

    pub fn gram_entry(&self, j: usize, k: usize) -> Complex64 {
        inner(&self.vectors[j], &self.vectors[k])
    }

    /// Visits every unordered pair `j < k` with `⟨τ_j, τ_k⟩`, row by row.
    pub fn for_each_pair(&self, mut f: impl FnMut(usize, usize, Complex64)) {
        let n = self.vectors.len();
        for j in 0..n {
            let vj = &self.vectors[j];
            for k in (j + 1)..n {
                f(j, k, inner(vj, &self.vectors[k]));
            }
        }
    }

    /// `Σ_j Σ_k w_j w_k K(|⟨τ_j, τ_k⟩|²)`, with the `j = k` terms included iff
    /// `include_diagonal`. The kernel receives the squared modulus.
    ///
    /// Rows are summed in a fixed order and combined with compensated summation.
    pub fn pair_sum(&self, kernel: impl Fn(f64) -> f64, include_diagonal: bool) -> f64 {
        let w = self.weights();
        let n = self.vectors.len();
        let mut total = CompensatedSum::new();
        for j in 0..n {
            let vj = &self.vectors[j];
            let mut row = 0.0;
            for (wk, vk) in w[j + 1..].iter().zip(&self.vectors[j + 1..]) {
                row += wk * kernel(inner(vj, vk).norm_sqr());
            }
            total.add(2.0 * w[j] * row);
            if include_diagonal {
                let nj = norm_sqr(vj);
                total.add(w[j] * w[j] * kernel(nj * nj));
            }
        }
        total.value()
    }

    /// Largest `K(|⟨τ_j, τ_k⟩|²)` over distinct nodes; `None` for a single node.
    pub fn pair_max(&self, kernel: impl Fn(f64) -> f64) -> Option<f64> {
        if self.len() < 2 {
            return None;
        }
        let mut best = f64::NEG_INFINITY;
        self.for_each_pair(|_, _, g| best = best.max(kernel(g.norm_sqr())));
        Some(best)
    }
}

/// Frame operator together with its spectrum-derived quantities.
#[derive(Debug, Clone)]
pub struct FrameOperatorReport {
    pub operator: HermitianMatrix,
    pub eigen: EigenDecomposition,
    /// Lower frame bound `a` (smallest eigenvalue, clamped at zero).
    pub lower: f64,
    /// Upper frame bound `b`.
    pub upper: f64,
    pub trace: f64,
    pub trace_sq: f64,
}

impl FrameOperatorReport {
    /// `|b − a| ≤ tol · b`.
    pub fn is_tight(&self, tol: f64) -> bool {
        (self.upper - self.lower).abs() <= tol * self.upper
    }

    /// `b / a`, `None` when `a = 0`.
    pub fn bound_ratio(&self) -> Option<f64> {
        (self.lower > 0.0).then(|| self.upper / self.lower)
    }

    pub fn spans(&self) -> bool {
        self.upper > 0.0 && self.lower > SPAN_TOL * self.upper
    }
}

/// Serializable digest of a [`FrameOperatorReport`].
#[derive(Debug, Clone, Serialize)]
pub struct FrameOperatorDigest {
    pub lower: f64,
    pub upper: f64,
    pub trace: f64,
    pub trace_sq: f64,
    pub tight: bool,
    pub bound_ratio: Option<f64>,
}

impl From<&FrameOperatorReport> for FrameOperatorDigest {
    fn from(r: &FrameOperatorReport) -> Self {
        Self {
            lower: r.lower,
            upper: r.upper,
            trace: r.trace,
            trace_sq: r.trace_sq,
            tight: r.is_tight(TIGHT_TOL),
            bound_ratio: r.bound_ratio(),
        }
    }
}

/// Relative tolerance on `b − a` for tightness.
pub const TIGHT_TOL: f64 = 1e-6;

/// `S = Σ_α w_α τ_α τ_α*` with its eigen-side traces.
pub fn frame_operator(f: &SampledFrame) -> Result<FrameOperatorReport> {
    let d = f.dim();
    let w = f.weights();
    let mut acc = vec![Complex64::new(0.0, 0.0); d * d];
    for (wa, v) in w.iter().zip(f.vectors()) {
        for i in 0..d {
            let vi = v[i] * *wa;
            for j in i..d {
                acc[i * d + j] += vi * v[j].conj();
            }
        }
    }
    let operator = HermitianMatrix::from_upper(d, |i, j| acc[i * d + j]);
    let eigen = eig_hermitian(&operator)?;
    let values = eigen.psd_values()?;
    let trace = compensated_sum(values.iter().copied());
    let trace_sq = compensated_sum(values.iter().map(|l| l * l));
    Ok(FrameOperatorReport {
        lower: values[0],
        upper: values[d - 1],
        operator,
        eigen,
        trace,
        trace_sq,
    })
}

/// `Tra(S) = ∫‖τ_α‖² dμ` and `Tra(S²) = ∬|⟨τ_α, τ_β⟩|² dμ dμ` evaluated on the
/// sample side, without forming `S`.
pub fn trace_identities(f: &SampledFrame) -> (f64, f64) {
    let trace = compensated_sum(f.weights().iter().zip(f.vectors()).map(|(w, v)| w * norm_sqr(v)));
    let trace_sq = f.pair_sum(|s| s, true);
    (trace, trace_sq)
}

/// The canonical dual `{S⁻¹τ_α}` over the same measure.
pub fn canonical_dual(f: &SampledFrame) -> Result<SampledFrame> {
    let report = frame_operator(f)?;
    if !report.spans() {
        return Err(Error::SingularOperator(format!(
            "frame operator is rank deficient (a = {:e}, b = {:e})",
            report.lower, report.upper
        )));
    }
    let b = ComplexMatrix::from_columns(f.dim(), f.vectors());
    let x = solve_hpd(&report.operator, &b)?;
    let mut vectors = x.columns();
    if f.field() == FieldTag::Real {
        for v in &mut vectors {
            for z in v.iter_mut() {
                z.im = 0.0;
            }
        }
    }
    SampledFrame::new(f.field(), f.dim(), f.measure().clone(), vectors)
}

/// `{S^{-1/2} τ_α}`, a Parseval frame when `f` spans.
pub fn parseval(f: &SampledFrame) -> Result<SampledFrame> {
    let root = inverse_sqrt(f)?;
    let mut g = f.map_vectors(|v| root.as_matrix().mul_vec(v))?;
    if f.field() == FieldTag::Real {
        g = g.map_vectors(|v| v.iter().map(|z| Complex64::new(z.re, 0.0)).collect())?;
    }
    Ok(g)
}

fn inverse_sqrt(f: &SampledFrame) -> Result<HermitianMatrix> {
    let report = frame_operator(f)?;
    if !report.spans() {
        return Err(Error::SingularOperator(format!(
            "frame operator is rank deficient (a = {:e}, b = {:e})",
            report.lower, report.upper
        )));
    }
    Ok(report.eigen.map(|l| 1.0 / l.sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DualCheck {
    pub is_dual: bool,
    /// `‖Σ_α w_α ω_α τ_α* − I‖_F`.
    pub residual: f64,
}

/// Checks `θ_ω* θ_τ = I`, i.e. `Σ_α w_α ω_α τ_α* = I` within `DUAL_TOL · √d`.
pub fn is_dual_pair(t: &SampledFrame, w: &SampledFrame) -> Result<DualCheck> {
    if t.dim() != w.dim() || t.len() != w.len() {
        return Err(invalid(format!(
            "frames differ in shape: dim {} vs {}, {} vs {} nodes",
            t.dim(),
            w.dim(),
            t.len(),
            w.len()
        )));
    }
    if t.field() != w.field() {
        return Err(invalid("frames are over different fields"));
    }
    let same_weights = t
        .weights()
        .iter()
        .zip(w.weights())
        .all(|(a, b)| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()));
    if !same_weights {
        return Err(invalid("frames are sampled on different measures"));
    }
    let d = t.dim();
    let mut m = ComplexMatrix::zeros(d, d);
    for ((wa, tv), wv) in t.weights().iter().zip(t.vectors()).zip(w.vectors()) {
        for i in 0..d {
            let oi = wv[i] * *wa;
            for j in 0..d {
                m[(i, j)] += oi * tv[j].conj();
            }
        }
    }
    let residual = m.sub(&ComplexMatrix::identity(d))?.frobenius_norm();
    Ok(DualCheck {
        is_dual: residual <= DUAL_TOL * (d as f64).sqrt(),
        residual,
    })
}

/// `Tra(T) = ∫⟨T S^{-1/2}τ_α, S^{-1/2}τ_α⟩ dμ`.
pub fn trace_via_frame(t: &ComplexMatrix, f: &SampledFrame) -> Result<Complex64> {
    if t.rows() != f.dim() || t.cols() != f.dim() {
        return Err(invalid(format!(
            "operator is {}x{}, frame dimension is {}",
            t.rows(),
            t.cols(),
            f.dim()
        )));
    }
    let root = inverse_sqrt(f)?;
    let mut re = CompensatedSum::new();
    let mut im = CompensatedSum::new();
    for (w, v) in f.weights().iter().zip(f.vectors()) {
        let u = root.as_matrix().mul_vec(v);
        let z = inner(&t.mul_vec(&u), &u) * *w;
        re.add(z.re);
        im.add(z.im);
    }
    Ok(Complex64::new(re.value(), im.value()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::counting_measure;
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn onb(d: usize) -> SampledFrame {
        builtin(&Builtin::Onb { d }).unwrap()
    }

    fn cos_sin(n: usize) -> SampledFrame {
        builtin(&Builtin::CosSin { nodes: n }).unwrap()
    }

    #[test]
    fn onb_is_parseval() {
        let r = frame_operator(&onb(2)).unwrap();
        assert_eq!((r.lower, r.upper), (1.0, 1.0));
        assert_eq!(r.operator, HermitianMatrix::identity(2));
    }

    #[test]
    fn cos_sin_operator_is_pi_identity() {
        let r = frame_operator(&cos_sin(513)).unwrap();
        let err = r
            .operator
            .as_matrix()
            .sub(&ComplexMatrix::identity(2).scale(PI))
            .unwrap()
            .frobenius_norm();
        assert!(err < 1e-6, "‖S − πI‖ = {err:e}");
    }

    #[test]
    fn rank_one_operator() {
        let f = SampledFrame::new(FieldTag::Complex, 2, counting_measure(1).unwrap(), vec![vec![c(1.0), c(0.0)]]).unwrap();
        let r = frame_operator(&f).unwrap();
        assert_eq!(r.operator, HermitianMatrix::diag(&[1.0, 0.0]));
        assert_eq!(r.lower, 0.0);
        assert!(!r.spans());
    }

    #[test]
    fn trace_identities_examples() {
        let (t, t2) = trace_identities(&onb(3));
        assert_eq!((t, t2), (3.0, 3.0));

        let f = cos_sin(513);
        let (t, t2) = trace_identities(&f);
        assert!((t - 2.0 * PI).abs() < 1e-12);
        assert!((t2 - 2.0 * PI * PI).abs() < 1e-6 * 2.0 * PI * PI);
        let r = frame_operator(&f).unwrap();
        assert!((r.trace - t).abs() <= 1e-9 * t);
        assert!((r.trace_sq - t2).abs() <= 1e-9 * t2);
    }

    #[test]
    fn canonical_dual_examples() {
        let f = onb(3);
        let dual = canonical_dual(&f).unwrap();
        assert_eq!(dual.vectors(), f.vectors());

        let f = cos_sin(513);
        let dual = canonical_dual(&f).unwrap();
        for (v, u) in f.vectors().iter().zip(dual.vectors()) {
            for (a, b) in v.iter().zip(u) {
                assert!((a / PI - b).norm() < 1e-6);
            }
        }
        assert!(is_dual_pair(&f, &dual).unwrap().is_dual);

        let line = SampledFrame::new(
            FieldTag::Complex,
            2,
            counting_measure(2).unwrap(),
            vec![vec![c(1.0), c(0.0)], vec![c(-2.0), c(0.0)]],
        )
        .unwrap();
        assert!(matches!(canonical_dual(&line), Err(Error::SingularOperator(_))));
    }

    #[test]
    fn dual_pair_checks() {
        let f = onb(3);
        let chk = is_dual_pair(&f, &f).unwrap();
        assert!(chk.is_dual && chk.residual == 0.0);

        let twice = f.scaled(c(2.0)).unwrap();
        assert!(!is_dual_pair(&f, &twice).unwrap().is_dual);

        let cs = cos_sin(513);
        let scaled = cs.scaled(c(1.0 / PI)).unwrap();
        assert!(is_dual_pair(&cs, &scaled).unwrap().is_dual);

        assert!(is_dual_pair(&onb(2), &onb(3)).is_err());
    }

    #[test]
    fn trace_via_frame_examples() {
        let f = builtin(&Builtin::RandomUnit { n: 7, d: 3, field: FieldTag::Complex, seed: 4 }).unwrap();
        let t = trace_via_frame(&ComplexMatrix::identity(3), &f).unwrap();
        assert!((t - c(3.0)).norm() < 1e-10);

        let t = trace_via_frame(&ComplexMatrix::diag(&[1.0, 2.0]), &cos_sin(513)).unwrap();
        assert!((t - c(3.0)).norm() < 1e-6);

        let t = trace_via_frame(&ComplexMatrix::zeros(2, 2), &cos_sin(33)).unwrap();
        assert!(t.norm() < 1e-12);

        let bad = SampledFrame::new(FieldTag::Complex, 2, counting_measure(1).unwrap(), vec![vec![c(1.0), c(0.0)]]).unwrap();
        assert!(matches!(trace_via_frame(&ComplexMatrix::identity(2), &bad), Err(Error::SingularOperator(_))));
    }

    #[test]
    fn normalization_is_checked() {
        let q = counting_measure(1).unwrap();
        assert!(SampledFrame::new_normalized(FieldTag::Real, 1, q.clone(), vec![vec![c(2.0)]]).is_err());
        let f = SampledFrame::new(FieldTag::Real, 1, q.clone(), vec![vec![c(2.0)]]).unwrap();
        assert!(!f.is_normalized());
        assert!(SampledFrame::new(FieldTag::Real, 1, q.clone(), vec![vec![Complex64::new(1.0, 1.0)]]).is_err());
        assert!(SampledFrame::new(FieldTag::Real, 1, q.clone(), vec![vec![c(f64::NAN)]]).is_err());
        assert!(SampledFrame::new(FieldTag::Real, 2, q, vec![vec![c(1.0)]]).is_err());
    }

    #[test]
    fn parseval_operator_is_identity() {
        let f = builtin(&Builtin::RandomUnit { n: 9, d: 4, field: FieldTag::Real, seed: 11 }).unwrap();
        let p = parseval(&f).unwrap();
        let r = frame_operator(&p).unwrap();
        let err = r.operator.as_matrix().sub(&ComplexMatrix::identity(4)).unwrap().frobenius_norm();
        assert!(err < 1e-8);
    }
}
