use std::f64::consts::PI;
use std::fmt;
use std::fs;
use std::path::Path;

use framebound_core::bounds::{
    alt_bounds, gerzon, p_welch_rhs, welch_bounds, welch_discrete, AltBounds, BoundReport,
};
use framebound_core::frames::{builtin, frame_operator};
use framebound_core::measure::counting_measure;
use framebound_core::metrics::{coherence, frame_potential};
use framebound_core::numerics::ComplexMatrix;
use framebound_core::optimizer::{self, Objective, OptimizerConfig, OptimizerSummary};
use framebound_core::{Builtin, Error, FieldTag, SampledFrame};
use serde::Serialize;

use crate::args::{AnalyzeArgs, BoundsArgs, CircleArgs, ObjectiveArg, OptimizeArgs};
use crate::report::{bound_name, num, opt, AnalysisReport};

/// Process exit status of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Violation,
}

impl Status {
    fn from_ok(ok: bool) -> Self {
        if ok {
            Status::Ok
        } else {
            Status::Violation
        }
    }

    pub fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Violation => 1,
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Validation(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Validation(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Validation(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) | Error::Range(_) => CliError::Usage(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

type CmdResult = std::result::Result<Status, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Validation(format!("cannot write {}: {e}", path.display())))
}

fn to_json(value: &impl Serialize) -> String {
    serde_json::to_string_pretty(value).expect("outputs always serialize") + "\n"
}

fn check_shape(n: usize, d: usize) -> Result<(), CliError> {
    if d == 0 || n < d {
        return Err(usage(format!("need n >= d >= 1, got n = {n}, d = {d}")));
    }
    Ok(())
}

fn check_orders(orders: &[u32], ps: &[f64], rs: &[f64]) -> Result<(), CliError> {
    if orders.contains(&0) {
        return Err(usage("orders must be at least 1"));
    }
    if let Some(p) = ps.iter().find(|p| !(**p > 2.0 && p.is_finite())) {
        return Err(usage(format!("exponents p must satisfy 2 < p < inf, got {p}")));
    }
    if let Some(r) = rs.iter().find(|r| !(**r > 0.0 && r.is_finite())) {
        return Err(usage(format!("powers r must be positive, got {r}")));
    }
    Ok(())
}

#[derive(Serialize)]
struct WelchRow {
    order: u32,
    sum_lb: f64,
    max_lb: Option<f64>,
    coherence_lb: Option<f64>,
}

#[derive(Serialize)]
struct PWelchRow {
    p: f64,
    rhs: f64,
}

#[derive(Serialize)]
struct BoundsTable {
    n: usize,
    d: usize,
    field: FieldTag,
    welch: Vec<WelchRow>,
    p_welch: Vec<PWelchRow>,
    alt: Option<AltBounds>,
    gerzon: u64,
}

pub fn bounds(args: BoundsArgs) -> CmdResult {
    check_shape(args.n, args.d)?;
    check_orders(&args.orders, &args.ps, &[])?;
    let mut welch = Vec::new();
    for &m in &args.orders {
        let w = welch_discrete(args.n, args.d, m)?;
        welch.push(WelchRow {
            order: m,
            sum_lb: w.sum_lb,
            max_lb: w.max_lb,
            coherence_lb: w.max_lb.map(|lb| lb.max(0.0).powf(0.5 / m as f64)),
        });
    }
    let mass = counting_measure(args.n)?.mass_summary();
    let p_welch = if mass.offdiag > 0.0 {
        args.ps
            .iter()
            .map(|&p| Ok(PWelchRow { p, rhs: p_welch_rhs(&mass, args.d, p)? }))
            .collect::<Result<Vec<_>, Error>>()?
    } else {
        Vec::new()
    };
    let alt = if args.n >= 2 { Some(alt_bounds(args.n, args.d, args.field)?) } else { None };
    let table = BoundsTable { n: args.n, d: args.d, field: args.field, welch, p_welch, alt, gerzon: gerzon(args.d, args.field) };

    println!("{} unit vectors in {}^{}", table.n, table.field, table.d);
    for row in &table.welch {
        println!(
            "welch m={:<3} sum_lb {:<24} max_lb {:<24} coherence_lb {}",
            row.order,
            num(row.sum_lb),
            opt(row.max_lb),
            opt(row.coherence_lb)
        );
    }
    for row in &table.p_welch {
        println!("p_welch p={:<4} rhs {}", row.p, num(row.rhs));
    }
    if let Some(alt) = &table.alt {
        for (id, v) in alt.entries() {
            println!("{:<14} {}", bound_name(id), v.map_or_else(|| "n/a".to_owned(), num));
        }
    }
    println!("gerzon         {}", table.gerzon);
    if let Some(path) = &args.json {
        write_file(path, &to_json(&table))?;
    }
    Ok(Status::Ok)
}

fn load_frame(args: &AnalyzeArgs) -> Result<(String, SampledFrame), CliError> {
    match (&args.builtin, &args.frame) {
        (Some(b), _) => Ok((b.to_string(), builtin(b)?)),
        (None, Some(path)) => {
            let f = SampledFrame::load(path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
            Ok((path.display().to_string(), f))
        }
        (None, None) => Err(usage("one of --builtin or --frame is required")),
    }
}

fn gram_csv(f: &SampledFrame) -> String {
    let mut out = String::from("j,k,abs_inner\n");
    f.for_each_pair(|j, k, g| out.push_str(&format!("{j},{k},{}\n", g.norm())));
    out
}

pub fn analyze(args: AnalyzeArgs) -> CmdResult {
    check_orders(&args.orders, &args.ps, &args.rs)?;
    let (source, f) = load_frame(&args)?;
    let report = AnalysisReport::build(source, &f, &args.orders, &args.ps, &args.rs)?;
    if args.json {
        print!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    if let Some(path) = &args.output {
        write_file(path, &report.to_json())?;
    }
    if let Some(path) = &args.dump_gram {
        write_file(path, &gram_csv(&f))?;
    }
    Ok(Status::from_ok(report.all_satisfied))
}

pub fn optimize(args: OptimizeArgs) -> CmdResult {
    check_shape(args.n, args.d)?;
    let objective = match args.objective {
        ObjectiveArg::Coherence => Objective::Coherence,
        ObjectiveArg::Potential => Objective::Potential { m: args.m },
    };
    let cfg = OptimizerConfig {
        seed: args.seed,
        restarts: args.restarts,
        max_iters: args.iters,
        p_schedule: args.p_schedule.clone(),
        step: args.step,
        tol: args.tol,
        jobs: args.jobs,
        ..OptimizerConfig::new(args.n, args.d, args.field, objective)
    };
    let result = optimizer::run(&cfg)?;
    let summary: OptimizerSummary = result.summary(&cfg);
    let what = match objective {
        Objective::Coherence => "coherence".to_owned(),
        Objective::Potential { m } => format!("order-{m} potential"),
    };
    println!("{what} of {} unit vectors in {}^{}", cfg.n, cfg.field, cfg.d);
    println!("achieved      {}", num(summary.achieved));
    println!("certificate   {} ({})", num(summary.certificate.value), bound_name(summary.certificate.bound));
    println!("gap           {}", num(summary.certificate.gap));
    println!("equiangular   {}", summary.equiangular);
    println!("tight         {}", summary.tight);
    println!("best restart  {} of {}", summary.best_restart, cfg.restarts);
    if let Some(path) = &args.out {
        result.vectors.save(path).map_err(|e| CliError::Validation(e.to_string()))?;
    }
    if let Some(path) = &args.json {
        write_file(path, &to_json(&summary))?;
    }
    Ok(Status::from_ok(summary.achieved >= summary.certificate.value - 1e-6))
}

#[derive(Serialize)]
struct Check {
    name: &'static str,
    value: f64,
    target: f64,
    passed: bool,
}

#[derive(Serialize)]
struct CircleReport {
    nodes: usize,
    checks: Vec<Check>,
    integral: BoundReport,
    sup: Option<BoundReport>,
    all_passed: bool,
}

/// Relative tolerance of the operator and potential checks.
const CIRCLE_TOL: f64 = 1e-6;

pub fn circle_example(args: CircleArgs) -> CmdResult {
    if args.nodes < 3 {
        return Err(usage(format!("need at least 3 nodes, got {}", args.nodes)));
    }
    let f = builtin(&Builtin::CosSin { nodes: args.nodes })?;
    let op = frame_operator(&f)?;
    let pi_id = ComplexMatrix::identity(2).scale(PI);
    let op_err = op.operator.as_matrix().sub(&pi_id)?.frobenius_norm() / pi_id.frobenius_norm();
    let fp = frame_potential(&f);
    let fp_target = 2.0 * PI * PI;
    let (integral, sup) = welch_bounds(&f, 1)?;
    let coh = coherence(&f).unwrap_or(0.0);

    let mut checks = vec![
        Check { name: "operator_relative_error", value: op_err, target: CIRCLE_TOL, passed: op_err <= CIRCLE_TOL },
        Check {
            name: "frame_potential",
            value: fp,
            target: fp_target,
            passed: (fp - fp_target).abs() <= CIRCLE_TOL * fp_target,
        },
        Check {
            name: "integral_bound_rhs",
            value: integral.rhs,
            target: fp_target,
            passed: integral.equality && (integral.rhs - fp_target).abs() <= 1e-12 * fp_target,
        },
        Check { name: "coherence_squared", value: coh * coh, target: 0.999, passed: coh * coh >= 0.999 },
    ];
    if let Some(s) = &sup {
        checks.push(Check { name: "sup_bound_rhs", value: s.rhs, target: 0.5, passed: s.rhs == 0.5 && s.satisfied });
    }
    let all_passed = sup.is_some() && checks.iter().all(|c| c.passed);

    println!("(cos a, sin a) on [0, 2pi], {} trapezoid nodes", args.nodes);
    for c in &checks {
        println!("{:<24} {:<24} target {:<24} {}", c.name, num(c.value), num(c.target), if c.passed { "pass" } else { "FAIL" });
    }
    let report = CircleReport { nodes: args.nodes, checks, integral, sup, all_passed };
    if let Some(path) = &args.json {
        write_file(path, &to_json(&report))?;
    }
    Ok(Status::from_ok(all_passed))
}
