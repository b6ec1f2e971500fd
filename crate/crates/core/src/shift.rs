//! Translations, modulations and time-frequency shifts `pi(x, w) = M_w T_x`.
//!
//! Shifts act directly on value vectors in `O(|G|)`; [`shift_matrix`] materializes one when a
//! matrix is needed.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::{FiniteAbelianGroup, GroupElement, TFPoint};
use crate::linalg::CMatrix;
use crate::window::Window;

/// `(pi(z) v)(t) = w(t) v(t - x)` for the plane index `p = (x, w)`.
pub(crate) fn apply_shift(group: &FiniteAbelianGroup, p: usize, v: &[Complex64]) -> Vec<Complex64> {
    let (x, w) = group.tf_split(p);
    (0..group.order())
        .map(|t| group.character_idx(w, t) * v[group.sub_idx(t, x)])
        .collect()
}

/// `(pi(z)^* v)(t) = conj(w(t + x)) v(t + x)`.
pub(crate) fn apply_shift_adjoint(
    group: &FiniteAbelianGroup,
    p: usize,
    v: &[Complex64],
) -> Vec<Complex64> {
    let (x, w) = group.tf_split(p);
    (0..group.order())
        .map(|t| {
            let s = group.add_idx(t, x);
            group.character_idx(w, s).conj() * v[s]
        })
        .collect()
}

/// Heisenberg cocycle on plane indices: `c((x, w), (y, tau)) = conj(tau(x))`.
pub(crate) fn cocycle_idx(group: &FiniteAbelianGroup, p: usize, q: usize) -> Complex64 {
    let (x, _) = group.tf_split(p);
    let (_, tau) = group.tf_split(q);
    group.character_idx(tau, x).conj()
}

fn check_point(g: &GroupElement, group: &FiniteAbelianGroup) -> Result<()> {
    if g.group() != group {
        return Err(Error::structural(format!(
            "shift parameter over {} applied to a window over {}",
            g.group(),
            group
        )));
    }
    Ok(())
}

/// `(T_x v)(t) = v(t - x)`.
pub fn translate(x: &GroupElement, xi: &Window) -> Result<Window> {
    check_point(x, xi.group())?;
    let g = xi.group();
    Window::new(g, apply_shift(g, g.tf_join(x.index(), 0), xi.values()))
}

/// `(M_w v)(t) = w(t) v(t)`.
pub fn modulate(w: &GroupElement, xi: &Window) -> Result<Window> {
    check_point(w, xi.group())?;
    let g = xi.group();
    Window::new(g, apply_shift(g, g.tf_join(0, w.index()), xi.values()))
}

/// `pi(z) xi = M_w T_x xi`.
pub fn tf_shift(z: &TFPoint, xi: &Window) -> Result<Window> {
    let g = xi.group();
    check_point(&z.x, g)?;
    let p = g.tf_index(z)?;
    Window::new(g, apply_shift(g, p, xi.values()))
}

/// `pi(z)^* xi`.
pub fn tf_shift_adjoint(z: &TFPoint, xi: &Window) -> Result<Window> {
    let g = xi.group();
    check_point(&z.x, g)?;
    let p = g.tf_index(z)?;
    Window::new(g, apply_shift_adjoint(g, p, xi.values()))
}

/// The Heisenberg 2-cocycle `c((x, w), (y, tau)) = conj(tau(x))`.
pub fn heisenberg_cocycle(z: &TFPoint, w: &TFPoint) -> Result<Complex64> {
    let g = z.group();
    if w.group() != g {
        return Err(Error::structural("cocycle arguments over different groups"));
    }
    Ok(cocycle_idx(g, g.tf_index(z)?, g.tf_index(w)?))
}

pub(crate) fn shift_matrix_idx(group: &FiniteAbelianGroup, p: usize) -> CMatrix {
    let (x, w) = group.tf_split(p);
    let n = group.order();
    let mut m = CMatrix::zeros(n, n);
    for t in 0..n {
        m[(t, group.sub_idx(t, x))] = group.character_idx(w, t);
    }
    m
}

/// The unitary matrix of `pi(z)` on `C^G`.
pub fn shift_matrix(z: &TFPoint) -> Result<CMatrix> {
    let g = z.group();
    Ok(shift_matrix_idx(g, g.tf_index(z)?))
}
