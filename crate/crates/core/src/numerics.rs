//! Dense complex linear algebra for the small matrices that appear in frame
//! computations: frame operators, Gram blocks and their spectral functions.
//!
//! Hermitian eigenproblems are solved with cyclic complex Jacobi rotations.
//! Everything here is sized for `d` up to a few hundred.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

/// Absolute tolerance on `A[j][k] - conj(A[k][j])` for a matrix to count as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Eigenvalues below `PSD_CLAMP * λ_max` are treated as zero in PSD operations.
pub const PSD_CLAMP: f64 = 1e-14;
/// Jacobi stops once the off-diagonal Frobenius mass is below this fraction of `‖A‖_F`.
pub const JACOBI_TOL: f64 = 1e-14;
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Minimum `λ_min / λ_max` for [`solve_hpd`] to accept a matrix as positive definite.
pub const HPD_TOL: f64 = 1e-12;

/// Neumaier-compensated running sum. Deterministic for a fixed summation order.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Compensated sum of an iterator of reals.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<CompensatedSum>().value()
}

/// `⟨x, y⟩ = Σ x_i conj(y_i)`, linear in the first argument.
pub fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    debug_assert_eq!(x.len(), y.len());
    x.iter()
        .zip(y)
        .fold(Complex64::new(0.0, 0.0), |acc, (a, b)| acc + a * b.conj())
}

pub fn norm_sqr(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum()
}

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting wrong lengths and non-finite values.
    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(invalid(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                entries.len()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(invalid("matrix entries must be finite"));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self { rows, cols, entries }
    }

    /// Real diagonal matrix.
    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<Complex64>]) -> Self {
        Self::from_fn(rows, columns.len(), |i, j| columns[j][i])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Complex64>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(invalid(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out.entries[i * other.cols + j] += a * other.entries[k * other.cols + j];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, x.len(), "dimension mismatch in mul_vec");
        (0..self.rows)
            .map(|i| {
                self.entries[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(x)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(invalid("shape mismatch in matrix subtraction"));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z * c).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6e}{:+.6e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Square self-adjoint matrix. Construction checks the Hermitian invariant.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(invalid(format!("Hermitian matrix must be square, got {}x{}", m.rows, m.cols)));
        }
        let n = m.rows;
        for i in 0..n {
            if m[(i, i)].im.abs() > HERMITIAN_TOL {
                return Err(invalid(format!("diagonal entry {i} has imaginary part {:e}", m[(i, i)].im)));
            }
            for j in (i + 1)..n {
                let dev = (m[(i, j)] - m[(j, i)].conj()).norm();
                if dev > HERMITIAN_TOL {
                    return Err(invalid(format!("entries ({i},{j}) and ({j},{i}) are not conjugate (deviation {dev:e})")));
                }
            }
        }
        Ok(Self(m))
    }

    /// Builds `A` from its upper triangle (diagonal included), mirroring the rest.
    /// Diagonal imaginary parts are dropped, so the result is Hermitian by construction.
    pub fn from_upper(n: usize, mut upper: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(upper(i, i).re, 0.0);
            for j in (i + 1)..n {
                let z = upper(i, j);
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        Self(m)
    }

    pub fn identity(n: usize) -> Self {
        Self(ComplexMatrix::identity(n))
    }

    pub fn diag(values: &[f64]) -> Self {
        Self(ComplexMatrix::diag(values))
    }

    pub fn dim(&self) -> usize {
        self.0.rows
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.frobenius_norm()
    }

    pub fn eig(&self) -> Result<EigenDecomposition> {
        eig_hermitian(self)
    }
}

impl Index<(usize, usize)> for HermitianMatrix {
    type Output = Complex64;

    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.0[idx]
    }
}

/// Eigenvalues ascending, eigenvectors as the matching columns.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// `V · diag(f(λ)) · V*`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let n = self.values.len();
        let fv: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        let v = &self.vectors;
        HermitianMatrix::from_upper(n, |i, j| {
            (0..n).map(|k| v[(i, k)] * v[(j, k)].conj() * fv[k]).sum()
        })
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.map(|l| l)
    }

    /// Eigenvalues with tiny negative rounding noise clamped to zero.
    ///
    /// Fails if some eigenvalue is negative beyond `PSD_CLAMP * λ_max`.
    pub fn psd_values(&self) -> Result<Vec<f64>> {
        let scale = self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let cut = PSD_CLAMP * scale;
        self.values
            .iter()
            .map(|&l| {
                if l < -cut {
                    Err(invalid(format!("matrix is not positive semidefinite (eigenvalue {l:e})")))
                } else if l < cut {
                    Ok(0.0)
                } else {
                    Ok(l)
                }
            })
            .collect()
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Each rotation first removes the phase of the pivot `a_pq` with a diagonal
/// unitary, then applies a real Givens rotation to the resulting real 2x2
/// block. Sweeps continue until the off-diagonal Frobenius mass is at most
/// `JACOBI_TOL * ‖A‖_F`.
pub fn eig_hermitian(a: &HermitianMatrix) -> Result<EigenDecomposition> {
    let n = a.dim();
    let mut m = a.as_matrix().clone();
    let mut v = ComplexMatrix::identity(n);
    let norm = m.frobenius_norm();
    let target = JACOBI_TOL * norm;

    let off_mass = |m: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = off_mass(&m) <= target;
    let mut sweep = 0;
    while !converged {
        if sweep == JACOBI_MAX_SWEEPS {
            return Err(Error::NumericFailure(format!(
                "Jacobi eigensolver did not converge in {JACOBI_MAX_SWEEPS} sweeps (off-diagonal mass {:e})",
                off_mass(&m)
            )));
        }
        sweep += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                // Once the pivot is negligible against both diagonal entries
                // it can be dropped without changing the eigenvalues beyond rounding.
                if sweep > 3 && mag <= f64::EPSILON * 0.5 * (app.abs().sqrt() * aqq.abs().sqrt()) {
                    m[(p, q)] = Complex64::new(0.0, 0.0);
                    m[(q, p)] = Complex64::new(0.0, 0.0);
                    continue;
                }
                let phase = apq / mag; // e^{iφ}
                let theta = (aqq - app) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // U acts on columns p, q:
                //   U_pp = c, U_pq = s, U_qp = -s e^{-iφ}, U_qq = c e^{-iφ}
                let e_minus = phase.conj();
                let upp = Complex64::new(c, 0.0);
                let upq = Complex64::new(s, 0.0);
                let uqp = -e_minus * s;
                let uqq = e_minus * c;
                // M <- M U
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = mkp * upp + mkq * uqp;
                    m[(k, q)] = mkp * upq + mkq * uqq;
                }
                // M <- U* M
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = upp.conj() * mpk + uqp.conj() * mqk;
                    m[(q, k)] = upq.conj() * mpk + uqq.conj() * mqk;
                }
                m[(p, q)] = Complex64::new(0.0, 0.0);
                m[(q, p)] = Complex64::new(0.0, 0.0);
                m[(p, p)].im = 0.0;
                m[(q, q)].im = 0.0;
                // V <- V U
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * upp + vkq * uqp;
                    v[(k, q)] = vkp * upq + vkq * uqq;
                }
            }
        }
        converged = off_mass(&m) <= target;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(EigenDecomposition { values, vectors })
}

/// Solves `A X = B` for Hermitian positive definite `A` through its eigendecomposition.
pub fn solve_hpd(a: &HermitianMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if b.rows() != a.dim() {
        return Err(invalid(format!("right-hand side has {} rows, expected {}", b.rows(), a.dim())));
    }
    let eig = eig_hermitian(a)?;
    let max = eig.max();
    let min = eig.min();
    if max <= 0.0 || min <= HPD_TOL * max {
        return Err(Error::SingularOperator(format!(
            "matrix is not positive definite (eigenvalues in [{min:e}, {max:e}])"
        )));
    }
    let vstar_b = eig.vectors.adjoint().matmul(b)?;
    let scaled = ComplexMatrix::from_fn(vstar_b.rows(), vstar_b.cols(), |i, j| vstar_b[(i, j)] / eig.values[i]);
    eig.vectors.matmul(&scaled)
}

/// `Tra(A^r) = Σ λ_k^r` for positive semidefinite `A`.
pub fn matrix_power_trace(a: &HermitianMatrix, r: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(invalid(format!("power must be a positive real, got {r}")));
    }
    let eig = eig_hermitian(a)?;
    let values = eig.psd_values()?;
    Ok(compensated_sum(values.iter().map(|&l| if l == 0.0 { 0.0 } else { l.powf(r) })))
}
