//! Gabor analysis, synthesis and frame operators over a measured subgroup.
//!
//! All sums over `Delta` carry the subgroup's per-point weight, so with counting measure the
//! frame operator is `S = sum_j sum_z <., pi(z) eta_j> pi(z) eta_j`. Frame bounds are the
//! extreme eigenvalues of `S`, which are the optimal constants in the frame inequality.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::MeasuredSubgroup;
use crate::linalg::{hermitian_eigenvalues, solve_hermitian_pd, spectral_norm, CMatrix};
use crate::shift::apply_shift;
use crate::window::{inner, Window};

/// Default invertibility threshold, relative to `max(B, 1)`.
pub const DEFAULT_FRAME_TOL: f64 = 1e-9;

// Operator assembly splits the subgroup into this many chunks regardless of thread count,
// and merges the partial sums in chunk order.
const ASSEMBLY_CHUNKS: usize = 16;

/// Optimal lower and upper frame bounds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameBounds {
    #[serde(rename = "A")]
    pub lower: f64,
    #[serde(rename = "B")]
    pub upper: f64,
}

impl FrameBounds {
    /// Extreme eigenvalues of a Hermitian positive semidefinite operator.
    pub fn of_operator(s: &CMatrix) -> Result<Self> {
        let ev = hermitian_eigenvalues(s)?;
        let lower = ev.first().copied().unwrap_or(0.0);
        let upper = ev.last().copied().unwrap_or(0.0);
        Ok(Self { lower, upper })
    }

    pub fn is_frame(&self, tol: f64) -> bool {
        self.lower > tol * self.upper.max(1.0)
    }

    pub fn is_tight(&self, tol: f64) -> bool {
        (self.upper - self.lower).abs() <= tol * self.upper.max(1.0)
    }
}

/// A (multi-window) Gabor system `(pi(z) eta_j)` for `z` in `Delta`.
#[derive(Clone, Debug)]
pub struct GaborSystem {
    subgroup: MeasuredSubgroup,
    windows: Vec<Window>,
}

impl GaborSystem {
    pub fn new(subgroup: MeasuredSubgroup, windows: Vec<Window>) -> Result<Self> {
        if windows.is_empty() {
            return Err(Error::structural("a Gabor system needs at least one window"));
        }
        for w in &windows {
            w.check_group(subgroup.group())?;
        }
        Ok(Self { subgroup, windows })
    }

    pub fn single(window: Window, subgroup: MeasuredSubgroup) -> Result<Self> {
        Self::new(subgroup, vec![window])
    }

    pub fn subgroup(&self) -> &MeasuredSubgroup {
        &self.subgroup
    }

    pub fn windows(&self) -> &[Window] {
        &self.windows
    }
}

/// Analysis matrix, `|Delta| x |G|`: row `z` is `conj(pi(z) eta)`, so `(C xi)_z = <xi, pi(z) eta>`.
pub fn analysis(eta: &Window, delta: &MeasuredSubgroup) -> Result<CMatrix> {
    eta.check_group(delta.group())?;
    let g = delta.group();
    let n = g.order();
    let rows: Vec<Vec<Complex64>> = delta
        .indices()
        .iter()
        .map(|&p| apply_shift(g, p, eta.values()))
        .collect();
    Ok(CMatrix::from_fn(delta.len(), n, |i, j| rows[i][j].conj()))
}

/// Synthesis matrix, `|G| x |Delta|`: column `z` is `weight * pi(z) gamma`.
pub fn synthesis(gamma: &Window, delta: &MeasuredSubgroup) -> Result<CMatrix> {
    gamma.check_group(delta.group())?;
    let g = delta.group();
    let k = delta.weight_f64();
    let cols: Vec<Vec<Complex64>> = delta
        .indices()
        .iter()
        .map(|&p| apply_shift(g, p, gamma.values()))
        .collect();
    Ok(CMatrix::from_fn(g.order(), delta.len(), |i, j| cols[j][i] * k))
}

/// Operator norm of `C_eta` into `l^2(Delta)` with the subgroup's weight.
pub fn analysis_norm(eta: &Window, delta: &MeasuredSubgroup) -> Result<f64> {
    Ok(delta.weight_f64().sqrt() * spectral_norm(&analysis(eta, delta)?)?)
}

/// Frame operator `S = sum_j weight * sum_z pi(z) eta_j (pi(z) eta_j)^H`, assembled directly.
pub fn frame_operator(sys: &GaborSystem) -> Result<CMatrix> {
    let delta = &sys.subgroup;
    let g = delta.group();
    let n = g.order();
    let k = delta.weight_f64();
    let idx = delta.indices();
    let chunk = idx.len().div_ceil(ASSEMBLY_CHUNKS).max(1);
    let partials: Vec<CMatrix> = idx
        .par_chunks(chunk)
        .map(|points| {
            let mut acc = CMatrix::zeros(n, n);
            for eta in &sys.windows {
                for &p in points {
                    let v = apply_shift(g, p, eta.values());
                    acc.add_outer(&v, &v, k);
                }
            }
            acc
        })
        .collect();
    let mut s = CMatrix::zeros(n, n);
    for part in &partials {
        s.add_assign_scaled(part, Complex64::new(1.0, 0.0));
    }
    Ok(s)
}

/// Frame-like operator `S_{eta,gamma} = D_gamma C_eta`.
pub fn frame_like(eta: &Window, gamma: &Window, delta: &MeasuredSubgroup) -> Result<CMatrix> {
    synthesis(gamma, delta)?.matmul(&analysis(eta, delta)?)
}

pub fn frame_bounds(sys: &GaborSystem) -> Result<FrameBounds> {
    FrameBounds::of_operator(&frame_operator(sys)?)
}

/// Whether the system is a frame: `A > tol * max(B, 1)`.
pub fn is_frame(sys: &GaborSystem, tol: f64) -> Result<bool> {
    Ok(frame_bounds(sys)?.is_frame(tol))
}

/// Eigenvalues of the frame operator, largest first.
pub fn spectrum(sys: &GaborSystem) -> Result<Vec<f64>> {
    let mut ev = hermitian_eigenvalues(&frame_operator(sys)?)?;
    ev.reverse();
    Ok(ev)
}

/// Canonical dual windows `S^{-1} eta_j`.
pub fn dual_window(sys: &GaborSystem) -> Result<Vec<Window>> {
    let s = frame_operator(sys)?;
    let bounds = FrameBounds::of_operator(&s)?;
    if !bounds.is_frame(DEFAULT_FRAME_TOL) {
        return Err(Error::NotAFrame(bounds));
    }
    let g = sys.subgroup.group();
    sys.windows
        .iter()
        .map(|eta| Window::new(g, solve_hermitian_pd(&s, eta.values())?))
        .collect()
}

/// `sum_j weight * sum_z <xi, pi(z) duals_j> pi(z) windows_j`.
pub fn reconstruct(xi: &Window, sys: &GaborSystem, duals: &[Window]) -> Result<Window> {
    if duals.len() != sys.windows.len() {
        return Err(Error::structural("one dual per window is required"));
    }
    let delta = &sys.subgroup;
    let g = delta.group();
    xi.check_group(g)?;
    let k = delta.weight_f64();
    let mut out = vec![Complex64::new(0.0, 0.0); g.order()];
    for (eta, gamma) in sys.windows.iter().zip(duals) {
        for &p in delta.indices() {
            let coef = inner(xi.values(), &apply_shift(g, p, gamma.values())) * k;
            for (o, v) in out.iter_mut().zip(apply_shift(g, p, eta.values())) {
                *o += coef * v;
            }
        }
    }
    Window::new(g, out)
}

/// Frame operator through the adjoint subgroup:
/// `s(Delta)^{-1} sum_{w in Delta°} <eta, pi(w) eta> pi(w)` (counting measure on `Delta°`).
pub fn janssen_frame_operator(eta: &Window, delta: &MeasuredSubgroup) -> Result<CMatrix> {
    eta.check_group(delta.group())?;
    let g = delta.group();
    let n = g.order();
    let adjoint = delta.adjoint()?;
    let inv_size = 1.0 / delta.size_f64();
    let mut out = CMatrix::zeros(n, n);
    for &p in adjoint.indices() {
        let coef = inner(eta.values(), &apply_shift(g, p, eta.values())) * inv_size;
        if coef == Complex64::new(0.0, 0.0) {
            continue;
        }
        let (x, w) = g.tf_split(p);
        for t in 0..n {
            out[(t, g.sub_idx(t, x))] += coef * g.character_idx(w, t);
        }
    }
    Ok(out)
}
