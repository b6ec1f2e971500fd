//! Dense complex matrices and the few factorizations the frame computations need.
//!
//! Eigenvalues of Hermitian matrices come from a cyclic Jacobi iteration. Each rotation
//! first removes the phase of the pivot `a_pq` with a diagonal unitary, then applies a real
//! Givens rotation, so the iteration stays in exact Hermitian form.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Off-diagonal threshold for Jacobi convergence, relative to `max(1, ||A||_F)`.
pub const JACOBI_TOL: f64 = 1e-12;
/// Hard cap on Jacobi sweeps.
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Relative residual target for conjugate gradients.
pub const CG_TOL: f64 = 1e-12;

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

/// Frame operators, integrated representations and shift matrices are all `CMatrix`.
pub type OperatorMatrix = CMatrix;

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<Complex64>]) -> Result<Self> {
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::structural("column length does not match row count"));
        }
        Ok(Self::from_fn(rows, columns.len(), |i, j| columns[j][i]))
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

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, rhs: &CMatrix) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::structural(format!(
                "matrix product {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                for (o, b) in orow.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.cols {
            return Err(Error::structural("matrix-vector length mismatch"));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            data: self.data.iter().map(|a| a * s).collect(),
            ..self.clone()
        }
    }

    pub fn add(&self, rhs: &CMatrix) -> Result<Self> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &CMatrix) -> Result<Self> {
        self.zip_with(rhs, |a, b| a - b)
    }

    fn zip_with(&self, rhs: &CMatrix, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::structural("matrix shapes differ"));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub(crate) fn add_assign_scaled(&mut self, rhs: &CMatrix, s: Complex64) {
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b * s;
        }
    }

    /// Adds `s * u v^H`.
    pub(crate) fn add_outer(&mut self, u: &[Complex64], v: &[Complex64], s: f64) {
        for (i, &ui) in u.iter().enumerate() {
            if ui == ZERO {
                continue;
            }
            let su = ui * s;
            let row = &mut self.data[i * self.cols..(i + 1) * self.cols];
            for (a, vj) in row.iter_mut().zip(v) {
                *a += su * vj.conj();
            }
        }
    }

    /// Largest entrywise modulus of `self - rhs`.
    pub fn max_abs_diff(&self, rhs: &CMatrix) -> f64 {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise deviation from Hermitian symmetry.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Spectral decomposition `A = V diag(values) V^H` of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub vectors: CMatrix,
    pub sweeps: usize,
    pub converged: bool,
}

fn off_diagonal_max(a: &CMatrix) -> f64 {
    let n = a.rows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max(a[(i, j)].norm());
        }
    }
    worst
}

/// Cyclic Jacobi eigensolver for Hermitian matrices. The input is symmetrized first.
pub fn hermitian_eigen(input: &CMatrix) -> Result<HermitianEigen> {
    if !input.is_square() {
        return Err(Error::structural("eigendecomposition of a non-square matrix"));
    }
    let n = input.rows();
    let mut a = CMatrix::from_fn(n, n, |i, j| (input[(i, j)] + input[(j, i)].conj()) * 0.5);
    let mut v = CMatrix::identity(n);
    let threshold = JACOBI_TOL * a.frobenius_norm().max(1.0);

    let mut sweeps = 0;
    let mut converged = off_diagonal_max(&a) < threshold;
    while !converged && sweeps < JACOBI_MAX_SWEEPS {
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        converged = off_diagonal_max(&a) < threshold;
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermitianEigen {
        values,
        vectors,
        sweeps,
        converged,
    })
}

/// One Jacobi rotation annihilating `a[p][q]`.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // phase so that diag(1, e^{-i phi}) makes the pivot real and positive
    let phase = (apq / r).conj();
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.is_finite() {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    } else {
        0.0
    };
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // W = diag(1, phase) * [[c, s], [-s, c]]
    let w00 = Complex64::new(c, 0.0);
    let w01 = Complex64::new(s, 0.0);
    let w10 = phase * (-s);
    let w11 = phase * c;

    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * w00 + akq * w10;
        a[(k, q)] = akp * w01 + akq * w11;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = w00.conj() * apk + w10.conj() * aqk;
        a[(q, k)] = w01.conj() * apk + w11.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * w00 + vkq * w10;
        v[(k, q)] = vkp * w01 + vkq * w11;
    }
}

pub fn hermitian_eigenvalues(a: &CMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_eigen(a)?.values)
}

/// Largest singular value, via the Gram matrix of the smaller side.
pub fn spectral_norm(a: &CMatrix) -> Result<f64> {
    if a.rows() == 0 || a.cols() == 0 {
        return Ok(0.0);
    }
    let gram = if a.cols() <= a.rows() {
        a.adjoint().matmul(a)?
    } else {
        a.matmul(&a.adjoint())?
    };
    let top = hermitian_eigenvalues(&gram)?.last().copied().unwrap_or(0.0);
    Ok(top.max(0.0).sqrt())
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Solves `A x = b` for Hermitian positive definite `A`.
///
/// Conjugate gradients to a relative residual of [`CG_TOL`]; if that stalls, falls back to the
/// Jacobi eigendecomposition.
pub fn solve_hermitian_pd(a: &CMatrix, b: &[Complex64]) -> Result<Vec<Complex64>> {
    if !a.is_square() || a.rows() != b.len() {
        return Err(Error::structural("solve: shape mismatch"));
    }
    let n = b.len();
    let bnorm = norm(b);
    if bnorm == 0.0 {
        return Ok(vec![ZERO; n]);
    }
    let target = CG_TOL * bnorm;
    let mut x = vec![ZERO; n];
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut rs = dot(&r, &r).re;
    for _ in 0..(4 * n + 20) {
        let ap = a.mul_vec(&p)?;
        let pap = dot(&ap, &p).re;
        if pap.is_nan() || pap <= 0.0 {
            break;
        }
        let alpha = rs / pap;
        for i in 0..n {
            x[i] += p[i] * alpha;
            r[i] -= ap[i] * alpha;
        }
        let rs_new = dot(&r, &r).re;
        if rs_new.sqrt() <= target {
            // confirm against the true residual
            let ax = a.mul_vec(&x)?;
            let true_res: Vec<Complex64> = b.iter().zip(&ax).map(|(u, v)| u - v).collect();
            if norm(&true_res) <= target {
                return Ok(x);
            }
            r = true_res;
            p = r.clone();
            rs = dot(&r, &r).re;
            continue;
        }
        let beta = rs_new / rs;
        for i in 0..n {
            p[i] = r[i] + p[i] * beta;
        }
        rs = rs_new;
    }
    solve_by_eigen(a, b)
}

fn solve_by_eigen(a: &CMatrix, b: &[Complex64]) -> Result<Vec<Complex64>> {
    let eig = hermitian_eigen(a)?;
    let n = b.len();
    let mut x = vec![ZERO; n];
    for (j, &lambda) in eig.values.iter().enumerate() {
        if lambda <= 0.0 {
            return Err(Error::structural("solve: matrix is not positive definite"));
        }
        let col = eig.vectors.column(j);
        let coef = dot(b, &col) / lambda;
        for i in 0..n {
            x[i] += col[i] * coef;
        }
    }
    Ok(x)
}

/// Numerical rank by Gaussian elimination with complete pivoting.
///
/// A pivot counts when its modulus exceeds `rel_tol` times the largest entry of `a`.
pub fn rank(a: &CMatrix, rel_tol: f64) -> usize {
    let (m, n) = (a.rows(), a.cols());
    let mut w = a.clone();
    let tol = rel_tol * a.max_abs();
    if tol == 0.0 {
        return 0;
    }
    let mut r = 0;
    while r < m.min(n) {
        let mut best = (r, r, 0.0f64);
        for i in r..m {
            for j in r..n {
                let v = w[(i, j)].norm();
                if v > best.2 {
                    best = (i, j, v);
                }
            }
        }
        if best.2 <= tol {
            break;
        }
        let (pi, pj, _) = best;
        for j in 0..n {
            let tmp = w[(r, j)];
            w[(r, j)] = w[(pi, j)];
            w[(pi, j)] = tmp;
        }
        for i in 0..m {
            let tmp = w[(i, r)];
            w[(i, r)] = w[(i, pj)];
            w[(i, pj)] = tmp;
        }
        let pivot = w[(r, r)];
        for i in (r + 1)..m {
            let f = w[(i, r)] / pivot;
            if f == ZERO {
                continue;
            }
            for j in r..n {
                let d = w[(r, j)] * f;
                w[(i, j)] -= d;
            }
        }
        r += 1;
    }
    r
}
