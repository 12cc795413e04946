use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::SampledFrame;
use crate::error::{invalid, Error, Result};
use crate::field::FieldTag;
use crate::measure::{counting_measure, monte_carlo_sphere, uniform_interval, Node};
use crate::rng;

/// Named test configurations.
///
/// The compact text form is `name` or `name:p1,p2,...`, e.g. `cos_sin:513`,
/// `harmonic:7,3`, `random_unit:12,3,C,5`.
#[derive(Debug, Clone, PartialEq)]
pub enum Builtin {
    /// `(cos α, sin α)` on the trapezoid discretization of `[0, 2π]`.
    CosSin { nodes: usize },
    /// Standard basis of `R^d` with counting measure.
    Onb { d: usize },
    /// `d + 1` unit vectors in `R^d` with pairwise inner product `−1/d`.
    SimplexEtf { d: usize },
    /// First `d` columns of the `n`-point character table, rows scaled to unit norm.
    Harmonic { n: usize, d: usize },
    /// The four tetrahedral states of `C^2`, `|⟨·,·⟩|² = 1/3`.
    SicD2,
    RandomUnit { n: usize, d: usize, field: FieldTag, seed: u64 },
    /// The sampled points of [`monte_carlo_sphere`] used as the frame itself.
    CpMonteCarlo { d: usize, field: FieldTag, n: usize, seed: u64 },
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::CosSin { nodes } => write!(f, "cos_sin:{nodes}"),
            Builtin::Onb { d } => write!(f, "onb:{d}"),
            Builtin::SimplexEtf { d } => write!(f, "simplex_etf:{d}"),
            Builtin::Harmonic { n, d } => write!(f, "harmonic:{n},{d}"),
            Builtin::SicD2 => write!(f, "sic_d2"),
            Builtin::RandomUnit { n, d, field, seed } => write!(f, "random_unit:{n},{d},{field},{seed}"),
            Builtin::CpMonteCarlo { d, field, n, seed } => write!(f, "cp_monte_carlo:{d},{field},{n},{seed}"),
        }
    }
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, params) = match s.split_once(':') {
            Some((n, p)) => (n.trim(), p.split(',').map(str::trim).collect::<Vec<_>>()),
            None => (s.trim(), Vec::new()),
        };
        let expect = |k: usize| -> Result<()> {
            if params.len() == k {
                Ok(())
            } else {
                Err(invalid(format!("builtin `{name}` takes {k} parameter(s), got {}", params.len())))
            }
        };
        let count = |i: usize| -> Result<usize> {
            params[i]
                .parse()
                .map_err(|_| invalid(format!("parameter `{}` of `{name}` is not a count", params[i])))
        };
        let seed = |i: usize| -> Result<u64> {
            params[i]
                .parse()
                .map_err(|_| invalid(format!("parameter `{}` of `{name}` is not a seed", params[i])))
        };
        match name {
            "cos_sin" => {
                expect(1)?;
                Ok(Builtin::CosSin { nodes: count(0)? })
            }
            "onb" => {
                expect(1)?;
                Ok(Builtin::Onb { d: count(0)? })
            }
            "simplex_etf" => {
                expect(1)?;
                Ok(Builtin::SimplexEtf { d: count(0)? })
            }
            "harmonic" => {
                expect(2)?;
                Ok(Builtin::Harmonic { n: count(0)?, d: count(1)? })
            }
            "sic_d2" => {
                expect(0)?;
                Ok(Builtin::SicD2)
            }
            "random_unit" => {
                expect(4)?;
                Ok(Builtin::RandomUnit { n: count(0)?, d: count(1)?, field: params[2].parse()?, seed: seed(3)? })
            }
            "cp_monte_carlo" => {
                expect(4)?;
                Ok(Builtin::CpMonteCarlo { d: count(0)?, field: params[1].parse()?, n: count(2)?, seed: seed(3)? })
            }
            other => Err(invalid(format!("unknown builtin frame `{other}`"))),
        }
    }
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn builtin(spec: &Builtin) -> Result<SampledFrame> {
    match *spec {
        Builtin::CosSin { nodes } => {
            let q = uniform_interval(0.0, 2.0 * PI, nodes)?;
            let vectors = q
                .nodes()
                .iter()
                .map(|node| match node {
                    Node::Point(p) => vec![re(p[0].cos()), re(p[0].sin())],
                    _ => unreachable!("interval nodes are points"),
                })
                .collect();
            SampledFrame::new_normalized(FieldTag::Real, 2, q, vectors)
        }
        Builtin::Onb { d } => {
            if d == 0 {
                return Err(invalid("onb needs d >= 1"));
            }
            let vectors = (0..d)
                .map(|i| (0..d).map(|j| re(if i == j { 1.0 } else { 0.0 })).collect())
                .collect();
            SampledFrame::new_normalized(FieldTag::Real, d, counting_measure(d)?, vectors)
        }
        Builtin::SimplexEtf { d } => simplex_etf(d),
        Builtin::Harmonic { n, d } => {
            if d == 0 || n < d {
                return Err(invalid(format!("harmonic frame needs n >= d >= 1, got n = {n}, d = {d}")));
            }
            let scale = 1.0 / (d as f64).sqrt();
            let vectors = (0..n)
                .map(|j| {
                    (0..d)
                        .map(|k| {
                            // reduce j·k mod n before scaling to keep the angle small
                            let angle = 2.0 * PI * ((j * k) % n) as f64 / n as f64;
                            Complex64::from_polar(scale, angle)
                        })
                        .collect()
                })
                .collect();
            SampledFrame::new_normalized(FieldTag::Complex, d, counting_measure(n)?, vectors)
        }
        Builtin::SicD2 => {
            // Bloch vectors of a regular tetrahedron: the north pole and three
            // points at polar angle θ with cos θ = −1/3.
            let a = (1.0_f64 / 3.0).sqrt();
            let b = (2.0_f64 / 3.0).sqrt();
            let mut vectors = vec![vec![re(1.0), re(0.0)]];
            for k in 0..3 {
                let phi = 2.0 * PI * k as f64 / 3.0;
                vectors.push(vec![re(a), Complex64::from_polar(b, phi)]);
            }
            SampledFrame::new_normalized(FieldTag::Complex, 2, counting_measure(4)?, vectors)
        }
        Builtin::RandomUnit { n, d, field, seed } => {
            if d == 0 || n == 0 {
                return Err(invalid("random_unit needs n >= 1 and d >= 1"));
            }
            let mut rng = rng::seeded(seed);
            let vectors = (0..n).map(|_| rng::unit_vector(&mut rng, d, field)).collect();
            SampledFrame::new_normalized(field, d, counting_measure(n)?, vectors)
        }
        Builtin::CpMonteCarlo { d, field, n, seed } => {
            let q = monte_carlo_sphere(d, field, n, seed)?;
            let vectors = q
                .nodes()
                .iter()
                .map(|node| match node {
                    Node::Vector(v) => v.clone(),
                    _ => unreachable!("sphere nodes carry vectors"),
                })
                .collect();
            SampledFrame::new_normalized(field, d, q, vectors)
        }
    }
}

/// Centred standard basis of `R^{d+1}` written in Helmert coordinates of the
/// hyperplane `Σ x = 0`, rescaled to unit length.
fn simplex_etf(d: usize) -> Result<SampledFrame> {
    if d == 0 {
        return Err(invalid("simplex_etf needs d >= 1"));
    }
    let n = d + 1;
    let scale = (n as f64 / d as f64).sqrt();
    // Helmert row k (1-based): (1, ..., 1, −k, 0, ...) / sqrt(k(k+1)), with k ones.
    let helmert = |k: usize, i: usize| -> f64 {
        let norm = ((k * (k + 1)) as f64).sqrt();
        if i < k {
            1.0 / norm
        } else if i == k {
            -(k as f64) / norm
        } else {
            0.0
        }
    };
    let vectors = (0..n)
        .map(|i| (1..=d).map(|k| re(scale * helmert(k, i))).collect())
        .collect();
    SampledFrame::new_normalized(FieldTag::Real, d, counting_measure(n)?, vectors)
}
