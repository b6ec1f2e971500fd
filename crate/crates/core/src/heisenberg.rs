//! The Heisenberg bimodule over a measured subgroup, realized on `C^G`.
//!
//! The left algebra lives on `Delta` with the Heisenberg cocycle, the right algebra on the
//! adjoint subgroup with the conjugate cocycle and weight `1 / s(Delta)`.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gabor::{frame_operator, FrameBounds, GaborSystem, DEFAULT_FRAME_TOL};
use crate::group::{FiniteAbelianGroup, MeasuredSubgroup, Rational};
use crate::linalg::{hermitian_eigenvalues, rank, solve_hermitian_pd, CMatrix};
use crate::shift::apply_shift;
use crate::twisted::TwistedSeq;
use crate::window::{inner, Window};

/// `Delta` together with its adjoint subgroup carrying weight `1 / s(Delta)`.
#[derive(Clone, Debug)]
pub struct ModuleContext {
    delta: Arc<MeasuredSubgroup>,
    adjoint: Arc<MeasuredSubgroup>,
}

impl ModuleContext {
    pub fn new(delta: MeasuredSubgroup) -> Result<Self> {
        let adjoint = delta.adjoint()?;
        Ok(Self {
            delta: Arc::new(delta),
            adjoint: Arc::new(adjoint),
        })
    }

    pub fn delta(&self) -> &Arc<MeasuredSubgroup> {
        &self.delta
    }

    pub fn adjoint(&self) -> &Arc<MeasuredSubgroup> {
        &self.adjoint
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        self.delta.group()
    }

    pub fn size(&self) -> Result<Rational> {
        self.delta.size()
    }

    fn check(&self, w: &Window) -> Result<()> {
        w.check_group(self.group())
    }

    fn check_left(&self, a: &TwistedSeq) -> Result<()> {
        if a.conjugated() || !a.domain().same_domain(&self.delta) {
            return Err(Error::mismatch("left action needs a sequence on Delta with the plain cocycle"));
        }
        Ok(())
    }

    fn check_right(&self, b: &TwistedSeq) -> Result<()> {
        if !b.conjugated() || !b.domain().same_domain(&self.adjoint) {
            return Err(Error::mismatch(
                "right action needs a sequence on the adjoint subgroup with the conjugate cocycle",
            ));
        }
        Ok(())
    }
}

/// `z -> <xi, pi(z) eta>` on `Delta`.
pub fn left_inner(xi: &Window, eta: &Window, ctx: &ModuleContext) -> Result<TwistedSeq> {
    ctx.check(xi)?;
    ctx.check(eta)?;
    let g = ctx.group();
    let coeffs: Vec<Complex64> = ctx
        .delta
        .indices()
        .par_iter()
        .map(|&p| inner(xi.values(), &apply_shift(g, p, eta.values())))
        .collect();
    TwistedSeq::new(ctx.delta.clone(), false, coeffs)
}

/// `w -> <pi(w) eta, xi>` on the adjoint subgroup.
pub fn right_inner(xi: &Window, eta: &Window, ctx: &ModuleContext) -> Result<TwistedSeq> {
    ctx.check(xi)?;
    ctx.check(eta)?;
    let g = ctx.group();
    let coeffs: Vec<Complex64> = ctx
        .adjoint
        .indices()
        .par_iter()
        .map(|&p| inner(&apply_shift(g, p, eta.values()), xi.values()))
        .collect();
    TwistedSeq::new(ctx.adjoint.clone(), true, coeffs)
}

pub fn left_act(a: &TwistedSeq, xi: &Window, ctx: &ModuleContext) -> Result<Window> {
    ctx.check_left(a)?;
    ctx.check(xi)?;
    Window::new(ctx.group(), a.apply(xi.values()))
}

pub fn right_act(xi: &Window, b: &TwistedSeq, ctx: &ModuleContext) -> Result<Window> {
    ctx.check_right(b)?;
    ctx.check(xi)?;
    Window::new(ctx.group(), b.apply(xi.values()))
}

/// Module norm: the square root of the top eigenvalue of the frame operator.
pub fn module_norm(eta: &Window, ctx: &ModuleContext) -> Result<f64> {
    ctx.check(eta)?;
    if eta.is_zero() {
        return Ok(0.0);
    }
    let s = frame_operator(&GaborSystem::single(eta.clone(), (*ctx.delta).clone())?)?;
    let top = hermitian_eigenvalues(&s)?.last().copied().unwrap_or(0.0);
    Ok(top.max(0.0).sqrt())
}

/// Matrix of `xi -> left_inner(xi, eta) . gamma`, assembled one basis vector at a time.
pub fn theta_matrix(eta: &Window, gamma: &Window, ctx: &ModuleContext) -> Result<CMatrix> {
    ctx.check(eta)?;
    ctx.check(gamma)?;
    let g = ctx.group();
    let n = g.order();
    let columns = (0..n)
        .into_par_iter()
        .map(|i| {
            let e = Window::delta(g, i)?;
            Ok(left_act(&left_inner(&e, eta, ctx)?, gamma, ctx)?.into_values())
        })
        .collect::<Result<Vec<_>>>()?;
    CMatrix::from_columns(n, &columns)
}

/// `sum_j Theta_{eta_j, eta_j}`.
pub fn module_frame_operator(windows: &[Window], ctx: &ModuleContext) -> Result<CMatrix> {
    let n = ctx.group().order();
    let mut s = CMatrix::zeros(n, n);
    for eta in windows {
        s.add_assign_scaled(&theta_matrix(eta, eta, ctx)?, Complex64::new(1.0, 0.0));
    }
    Ok(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModuleFrameCheck {
    pub generating: bool,
    pub bounds: FrameBounds,
}

/// Whether the windows generate the module, and the spectral bounds of the module frame operator.
///
/// `generating` is decided from the rank of the span of all shifted windows, which does not
/// go through the frame operator; a pivot counts when it exceeds `sqrt(tol)` times the largest.
pub fn module_frame_check(windows: &[Window], ctx: &ModuleContext, tol: f64) -> Result<ModuleFrameCheck> {
    if windows.is_empty() {
        return Err(Error::structural("module_frame_check needs at least one window"));
    }
    for w in windows {
        ctx.check(w)?;
    }
    let bounds = FrameBounds::of_operator(&module_frame_operator(windows, ctx)?)?;
    let g = ctx.group();
    let n = g.order();
    let columns: Vec<Vec<Complex64>> = windows
        .iter()
        .flat_map(|eta| ctx.delta.indices().iter().map(move |&p| apply_shift(g, p, eta.values())))
        .collect();
    let span = CMatrix::from_columns(n, &columns)?;
    let generating = windows.iter().any(|w| !w.is_zero()) && rank(&span, tol.sqrt()) == n;
    Ok(ModuleFrameCheck { generating, bounds })
}

/// Coefficients `a_j = left_inner(xi, S^{-1} eta_j)` with `xi = sum_j a_j . eta_j`.
pub fn module_expansion(xi: &Window, windows: &[Window], ctx: &ModuleContext) -> Result<Vec<TwistedSeq>> {
    ctx.check(xi)?;
    if windows.is_empty() {
        return Err(Error::structural("module_expansion needs at least one window"));
    }
    let s = module_frame_operator(windows, ctx)?;
    let bounds = FrameBounds::of_operator(&s)?;
    if !bounds.is_frame(DEFAULT_FRAME_TOL) {
        return Err(Error::NotAFrame(bounds));
    }
    windows
        .iter()
        .map(|eta| {
            let dual = Window::new(ctx.group(), solve_hermitian_pd(&s, eta.values())?)?;
            left_inner(xi, &dual, ctx)
        })
        .collect()
}

/// `sum_j a_j . eta_j`.
pub fn module_synthesis(coeffs: &[TwistedSeq], windows: &[Window], ctx: &ModuleContext) -> Result<Window> {
    if coeffs.len() != windows.len() {
        return Err(Error::structural("one coefficient sequence per window is required"));
    }
    let mut out = Window::zeros(ctx.group());
    for (a, eta) in coeffs.iter().zip(windows) {
        out = out.add(&left_act(a, eta, ctx)?)?;
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalizationCheck {
    pub left_trace: Complex64,
    pub inner: Complex64,
    pub right_trace: Complex64,
}

impl LocalizationCheck {
    pub fn max_gap(&self) -> f64 {
        (self.left_trace - self.inner)
            .norm()
            .max((self.right_trace - self.inner).norm())
    }
}

/// Traces of the left and right inner products against the plain inner product `<xi, eta>`.
pub fn localization_check(xi: &Window, eta: &Window, ctx: &ModuleContext) -> Result<LocalizationCheck> {
    let left_trace = left_inner(xi, eta, ctx)?.trace();
    let right_trace = right_inner(eta, xi, ctx)?.trace();
    let inner = xi
        .values()
        .iter()
        .zip(eta.values())
        .map(|(a, b)| a * b.conj())
        .sum();
    Ok(LocalizationCheck {
        left_trace,
        inner,
        right_trace,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FigaCheck {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub abs_gap: f64,
    pub rel_gap: f64,
}

/// Both sides of the four-window identity
/// `sum_Delta <eta, pi(z) gamma><pi(z) xi, psi> = s^{-1} sum_{Delta°} <xi, pi(w) gamma><pi(w) eta, psi>`.
pub fn figa_check(
    eta: &Window,
    gamma: &Window,
    xi: &Window,
    psi: &Window,
    ctx: &ModuleContext,
) -> Result<FigaCheck> {
    for w in [eta, gamma, xi, psi] {
        ctx.check(w)?;
    }
    let g = ctx.group();
    let k = ctx.delta.weight_f64();
    let lhs: Complex64 = ctx
        .delta
        .indices()
        .iter()
        .map(|&p| {
            inner(eta.values(), &apply_shift(g, p, gamma.values()))
                * inner(&apply_shift(g, p, xi.values()), psi.values())
        })
        .sum::<Complex64>()
        * k;
    let rhs: Complex64 = ctx
        .adjoint
        .indices()
        .iter()
        .map(|&p| {
            inner(xi.values(), &apply_shift(g, p, gamma.values()))
                * inner(&apply_shift(g, p, eta.values()), psi.values())
        })
        .sum::<Complex64>()
        / ctx.delta.size_f64();
    let abs_gap = (lhs - rhs).norm();
    Ok(FigaCheck {
        lhs,
        rhs,
        abs_gap,
        rel_gap: abs_gap / (1.0 + lhs.norm()),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormScaling {
    pub norm_delta: f64,
    pub norm_adjoint: f64,
    pub ratio: f64,
    /// `log(ratio) / log(s)`; absent when `s = 1` or the window is zero.
    pub exponent: Option<f64>,
}

/// Module norms of `eta` over `Delta` and over the adjoint subgroup, both with counting measure.
pub fn dual_lattice_norm_scaling(eta: &Window, ctx: &ModuleContext) -> Result<NormScaling> {
    if ctx.delta.weight() != Rational::from_integer(1) {
        return Err(Error::structural("norm scaling needs Delta with counting measure"));
    }
    let norm_delta = module_norm(eta, ctx)?;
    let dual = ModuleContext::new(ctx.adjoint.with_weight(Rational::from_integer(1))?)?;
    let norm_adjoint = module_norm(eta, &dual)?;
    if norm_delta == 0.0 {
        return Ok(NormScaling {
            norm_delta,
            norm_adjoint,
            ratio: 0.0,
            exponent: None,
        });
    }
    let ratio = norm_adjoint / norm_delta;
    let s = ctx.delta.size_f64();
    let exponent = (s != 1.0).then(|| ratio.ln() / s.ln());
    Ok(NormScaling {
        norm_delta,
        norm_adjoint,
        ratio,
        exponent,
    })
}
