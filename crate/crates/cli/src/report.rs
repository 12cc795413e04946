use std::fmt::Write as _;

use framebound_core::bounds::{check_all, BoundId, BoundOutcome, BoundReport};
use framebound_core::frames::{frame_operator, FrameOperatorDigest};
use framebound_core::metrics::{metrics_report, MetricsReport};
use framebound_core::{FieldTag, Result, SampledFrame};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct FrameSummary {
    pub source: String,
    pub field: FieldTag,
    pub dim: usize,
    pub nodes: usize,
    pub total_mass: f64,
    pub diagonal_mass: f64,
    pub offdiag_mass: f64,
    pub atomic: bool,
    pub normalized: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct NotApplicable {
    pub bound: BoundId,
    pub order: Option<f64>,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub frame: FrameSummary,
    pub frame_operator: FrameOperatorDigest,
    pub metrics: MetricsReport,
    pub bounds: Vec<BoundReport>,
    pub not_applicable: Vec<NotApplicable>,
    pub all_satisfied: bool,
}

impl AnalysisReport {
    pub fn build(source: String, f: &SampledFrame, orders: &[u32], ps: &[f64], rs: &[f64]) -> Result<Self> {
        let mass = f.mass_summary();
        let frame = FrameSummary {
            source,
            field: f.field(),
            dim: f.dim(),
            nodes: f.len(),
            total_mass: mass.total,
            diagonal_mass: mass.diagonal,
            offdiag_mass: mass.offdiag,
            atomic: f.measure().is_atomic(),
            normalized: f.is_normalized(),
        };
        let mut bounds = Vec::new();
        let mut not_applicable = Vec::new();
        for outcome in check_all(f, orders, ps, rs)? {
            match outcome {
                BoundOutcome::Report(r) => bounds.push(r),
                BoundOutcome::NotApplicable { bound, order, reason } => {
                    not_applicable.push(NotApplicable { bound, order, reason })
                }
            }
        }
        Ok(Self {
            frame,
            frame_operator: FrameOperatorDigest::from(&frame_operator(f)?),
            metrics: metrics_report(f)?,
            all_satisfied: bounds.iter().all(|b| b.satisfied),
            bounds,
            not_applicable,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize") + "\n"
    }

    pub fn to_text(&self) -> String {
        let f = &self.frame;
        let op = &self.frame_operator;
        let m = &self.metrics;
        let mut out = String::new();
        let atomic = if f.atomic { "atomic" } else { "atomless" };
        let _ = writeln!(out, "frame        {} ({}^{}, {} nodes, {atomic})", f.source, f.field, f.dim, f.nodes);
        let _ = writeln!(
            out,
            "mass         total {}, diagonal {}, off-diagonal {}",
            num(f.total_mass),
            num(f.diagonal_mass),
            num(f.offdiag_mass)
        );
        let _ = writeln!(
            out,
            "operator     a = {}, b = {}, trace {}, trace of square {}{}",
            num(op.lower),
            num(op.upper),
            num(op.trace),
            num(op.trace_sq),
            if op.tight { ", tight" } else { "" }
        );
        let _ = writeln!(out, "coherence    {}", opt(m.coherence));
        let _ = writeln!(out, "crms         {}", opt(m.crms));
        let _ = writeln!(out, "potential    {}", num(m.potential));
        let _ = writeln!(
            out,
            "equiangular  {} (mean {}, max deviation {})",
            if m.equiangular { "yes" } else { "no" },
            opt(m.gamma),
            opt(m.max_deviation)
        );
        let _ = writeln!(out);
        let _ = writeln!(out, "{:<22} {:>5}  {:>24} {:>24}  status", "bound", "order", "lhs", "rhs");
        for b in &self.bounds {
            let status = if !b.satisfied {
                "VIOLATED"
            } else if b.equality {
                "equality"
            } else if b.vacuous {
                "vacuous"
            } else {
                "ok"
            };
            let _ = writeln!(
                out,
                "{:<22} {:>5}  {:>24} {:>24}  {status}",
                bound_name(b.bound),
                opt(b.order),
                num(b.lhs),
                num(b.rhs)
            );
        }
        if !self.not_applicable.is_empty() {
            let _ = writeln!(out, "\nnot applicable");
            for na in &self.not_applicable {
                let order = na.order.map(|o| format!(" ({o})")).unwrap_or_default();
                let _ = writeln!(out, "  {}{order}: {}", bound_name(na.bound), na.reason);
            }
        }
        out
    }
}

pub fn bound_name(id: BoundId) -> String {
    serde_json::to_value(id)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .expect("bound ids serialize as strings")
}

pub fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_owned(), num)
}

/// Shortest round-trip decimal, switching to exponent form below `1e-4`.
pub fn num(x: f64) -> String {
    if x != 0.0 && x.abs() < 1e-4 {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}
