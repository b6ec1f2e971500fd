//! Randomized verification suite for one `(G, Delta)` pair.
//!
//! Each identity is evaluated on seeded random inputs and reports both sides' largest
//! absolute gap and relative gap `|lhs - rhs| / (1 + |lhs|)`. An identity passes when the
//! relative gap stays within its tolerance.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::gabor::{
    analysis_norm, dual_window, frame_like, frame_operator, is_frame, janssen_frame_operator, reconstruct,
    GaborSystem,
};
use crate::group::{format_rational, MeasuredSubgroup, Rational};
use crate::heisenberg::{
    dual_lattice_norm_scaling, figa_check, left_act, left_inner, localization_check, module_expansion,
    module_frame_check, module_norm, module_synthesis, right_act, right_inner, theta_matrix, ModuleContext,
};
use crate::linalg::CMatrix;
use crate::rng::SignalRng;
use crate::shift::{apply_shift, cocycle_idx};
use crate::twisted::TwistedSeq;
use crate::window::Window;

#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Random cases per identity.
    pub cases: usize,
    /// Threshold passed to the frame test.
    pub frame_tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            cases: 20,
            frame_tol: crate::gabor::DEFAULT_FRAME_TOL,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub name: String,
    pub cases: usize,
    pub max_abs_gap: f64,
    pub max_rel_gap: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub group: Vec<u32>,
    pub subgroup_order: usize,
    pub adjoint_order: usize,
    pub size: String,
    pub seed: u64,
    pub identities: Vec<IdentityReport>,
    /// `log(ratio) / log(s)` for the adjoint-subgroup norm scaling; absent when `s = 1`.
    pub measured_exponent: Option<f64>,
    pub pass: bool,
}

#[derive(Default)]
struct Gap {
    cases: usize,
    max_abs: f64,
    max_rel: f64,
    exponent: Option<f64>,
}

impl Gap {
    fn push(&mut self, abs: f64, scale: f64) {
        self.cases += 1;
        self.max_abs = self.max_abs.max(abs);
        self.max_rel = self.max_rel.max(abs / (1.0 + scale));
    }

    fn push_c(&mut self, lhs: Complex64, rhs: Complex64) {
        self.push((lhs - rhs).norm(), lhs.norm());
    }

    fn push_m(&mut self, lhs: &CMatrix, rhs: &CMatrix) {
        self.push(lhs.max_abs_diff(rhs), lhs.max_abs());
    }

    fn push_w(&mut self, lhs: &Window, rhs: &Window) {
        let scale = lhs.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
        self.push(lhs.max_abs_diff(rhs), scale);
    }

    fn push_s(&mut self, lhs: &TwistedSeq, rhs: &TwistedSeq) {
        let scale = lhs.coeffs().iter().map(|v| v.norm()).fold(0.0, f64::max);
        self.push(lhs.max_abs_diff(rhs), scale);
    }
}

struct Fixture {
    ctx: ModuleContext,
    cases: usize,
    frame_tol: f64,
}

impl Fixture {
    fn seq(&self, rng: &mut SignalRng, right: bool) -> Result<TwistedSeq> {
        let domain = if right { self.ctx.adjoint() } else { self.ctx.delta() };
        TwistedSeq::new(domain.clone(), right, rng.complex_vec(domain.len()))
    }

    fn window(&self, rng: &mut SignalRng) -> Window {
        rng.window(self.ctx.group())
    }
}

type Check = fn(&Fixture, &mut SignalRng) -> Result<Gap>;

const CHECKS: &[(&str, f64, Check)] = &[
    ("cocycle_identity", 1e-12, check_cocycle),
    ("shift_composition", 1e-12, check_composition),
    ("twisted_associativity", 1e-11, check_associativity),
    ("involution_laws", 1e-11, check_involution),
    ("integrated_representation", 1e-11, check_representation),
    ("tracial_property", 1e-11, check_tracial),
    ("localization", 1e-12, check_localization),
    ("imprimitivity", 1e-10, check_imprimitivity),
    ("norm_chain", 1e-9, check_norm_chain),
    ("embedding_bound", 1e-12, check_embedding),
    ("theta_equals_frame_like", 1e-10, check_theta),
    ("figa", 1e-10, check_figa),
    ("janssen", 1e-10, check_janssen),
    ("generator_equivalence", 0.0, check_generators),
    ("reconstruction", 1e-9, check_reconstruction),
    ("adjoint_norm_scaling", 1e-9, check_norm_scaling),
];

/// Runs every identity on `delta`. Identities run in parallel; the report keeps a fixed order.
pub fn verify_suite(delta: &MeasuredSubgroup, cfg: &VerifyConfig) -> Result<VerifyReport> {
    let fx = Fixture {
        ctx: ModuleContext::new(delta.clone())?,
        cases: cfg.cases.max(1),
        frame_tol: cfg.frame_tol,
    };
    let results = CHECKS
        .par_iter()
        .enumerate()
        .map(|(i, (name, tol, check))| {
            let mut rng = SignalRng::new(cfg.seed ^ (i as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let gap = check(&fx, &mut rng)?;
            let report = IdentityReport {
                name: name.to_string(),
                cases: gap.cases,
                max_abs_gap: gap.max_abs,
                max_rel_gap: gap.max_rel,
                pass: gap.max_rel <= *tol,
            };
            Ok((report, gap.exponent))
        })
        .collect::<Result<Vec<_>>>()?;
    let measured_exponent = results.iter().find_map(|(_, e)| *e);
    let identities: Vec<IdentityReport> = results.into_iter().map(|(r, _)| r).collect();
    Ok(VerifyReport {
        group: delta.group().orders().to_vec(),
        subgroup_order: delta.len(),
        adjoint_order: fx.ctx.adjoint().len(),
        size: format_rational(&delta.size()?),
        seed: cfg.seed,
        pass: identities.iter().all(|r| r.pass),
        identities,
        measured_exponent,
    })
}

/// Plane indices for `arity`-tuples: all of them when there are at most `limit`, else a sample.
fn tuples(plane: usize, arity: u32, limit: usize, rng: &mut SignalRng) -> Vec<Vec<usize>> {
    let total = plane.checked_pow(arity).unwrap_or(usize::MAX);
    if total <= limit {
        (0..total)
            .map(|mut t| {
                (0..arity)
                    .map(|_| {
                        let d = t % plane;
                        t /= plane;
                        d
                    })
                    .collect()
            })
            .collect()
    } else {
        (0..limit)
            .map(|_| (0..arity).map(|_| rng.index(plane)).collect())
            .collect()
    }
}

fn check_cocycle(fx: &Fixture, rng: &mut SignalRng) -> Result<Gap> {
    let g = fx.ctx.group();
    let mut gap = Gap::default();
    for t in tuples(g.plane_order(), 3, 20_000, rng) {
        let (z, w, u) = (t[0], t[1], t[2]);
        let lhs = cocycle_idx(g, z, w) * cocycle_idx(g, g.tf_add(z, w), u);
        let rhs = cocycle_idx(g, z, g.tf_add(w, u)) * cocycle_idx(g, w, u);
        gap.push_c(lhs, rhs);
    }
    Ok(gap)
}

fn check_composition(fx: &Fixture, rng: &mut SignalRng) -> Result<Gap> {
    let g = fx.ctx.group();
    let v = fx.window(rng);
    let mut gap = Gap::default();
    for t in tuples(g.plane_order(), 2, 2_000, rng) {
        let (z, w) = (t[0], t[1]);
        let lhs = apply_shift(g, z, &apply_shift(g, w, v.values()));
        let c = cocycle_idx(g, z, w);
        let rhs: Vec<Complex64> = apply_shift(g, g.tf_add(z, w), v.values()).into_iter().map(|x| x * c).collect();
        gap.push_w(&Window::new(g, lhs)?, &Window::new(g, rhs)?);
    }
    Ok(gap)
}

fn check_associativity(fx: &Fixture, rng: &mut SignalRng) -> Result<Gap> {
    let mut gap = Gap::default();
    for i in 0..fx.cases {
        let right = i % 2 == 1;
        let (a, b, c) = (fx.seq(rng, right)?, fx.seq(rng, right)?, fx.seq(rng, right)?);
        gap.push_s(&a.convolve(&b)?.convolve(&c)?, &a.convolve(&b.convolve(&c)?)?);
    }
    Ok(gap)
}

fn check_involution(fx: &Fixture, rng: &mut SignalRng) -> Result<Gap> {
    let mut gap = Gap::default();
    for i in 0..fx.cases {
        let right = i % 2 == 1;
        let (a, b) = (fx.seq(rng, right)?, fx.seq(rng, right)?);
        gap.push_s(&a.involution().involution(), &a);
        gap.push_s(&a.convolve(&b)?.involution(), &b.involution().convolve(&a.involution())?);
    }
    Ok(gap)
}

fn check_representation(fx: &Fixture, rng: &mut SignalRng) -> Result<Gap> {
    let mut gap = Gap::default();
    for i in 0..fx.cases {
        let right = i % 2 == 1;
        let (a, b) = (fx.seq(rng, right)?, fx.seq(rng, right)?);
        let (ra, rb) = (a.integrated_rep(), b.integrated_rep());
        // The conjugate-cocycle algebra acts through adjoint shifts, which reverses products.
        let product = if right { rb.matmul(&ra)? } else { ra.matmul(&rb)? };
        gap.push_m(&a.convolve(&b)?.integrated_rep(), &product);
        gap.push_m(&a.involution().integrated_rep(), &ra.adjoint());
    }
    Ok(gap)
}

fn check_tracial(fx: &Fixture, rng: &mut SignalRng) -> Result<Gap> {
    let mut gap = Gap::default();
    for i in 0..fx.cases {
        let right = i % 2 == 1;
        let (a, b) = (fx.seq(rng, right)?, fx.seq(rng, right)?);
        let bs = b.involution();
        gap.push_c(a.convolve(&bs)?.trace(), bs.convolve(&a)?.trace());
    }
    Ok(gap)
}

fn check_localization(fx: &Fixture, rng: &mut SignalRng) -> Result<Gap> {
    let mut gap = Gap::default();
    for i in 0..fx.cases {
        let right = i % 2 == 1;
        let (a, b) = (fx.seq(rng, right)?, fx.seq(rng, right)?);
        let k = a.domain().weight_f64();
        let pairing: Complex64 = a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| x * y.conj()).sum::<Complex64>() * k;
        gap.push_c(a.l2_localization_inner(&b)?, pairing);

        let chk = localization_check(&fx.window(rng), &fx.window(rng), &fx.ctx)?;
        gap.push_c(chk.left_trace, chk.inner);
        gap.push_c(chk.right_trace, chk.inner);
    }
    Ok(gap)
}

fn check_imprimitivity(fx: &Fixture, rng: &mut SignalRng) -> Result<Gap> {
    let ctx = &fx.ctx;
    let mut gap = Gap::default();
    for _ in 0..fx.cases {
        let (xi, eta, gamma) = (fx.window(rng), fx.window(rng), fx.window(rng));
        let lhs = left_act(&left_inner(&xi, &eta, ctx)?, &gamma, ctx)?;
        let rhs = right_act(&xi, &right_inner(&eta, &gamma, ctx)?, ctx)?;
        gap.push_w(&lhs, &rhs);
    }
    Ok(gap)
}

fn check_norm_chain(fx: &Fixture, rng: &mut SignalRng) -> Result<Gap> {
    let ctx = &fx.ctx;
    let mut gap = Gap::default();
    for _ in 0..fx.cases {
        let eta = fx.window(rng);
        let m = module_norm(&eta, ctx)?;
        let c = analysis_norm(&eta, ctx.delta())?;
        let a = left_inner(&eta, &eta, ctx)?.cstar_norm()?.sqrt();
        gap.push((m - c).abs(), m);
        gap.push((m - a).abs(), m);
    }
    Ok(gap)
}

fn check_embedding(fx: &Fixture, rng: &mut SignalRng) -> Result<Gap> {
    let ctx = &fx.ctx;
    let s = ctx.delta().size_f64();
    let mut gap = Gap::default();
    for _ in 0..fx.cases {
        let eta = fx.window(rng);
        let bound = s.sqrt() * module_norm(&eta, ctx)?;
        gap.push((eta.norm() - bound).max(0.0), bound);
    }
    Ok(gap)
}

fn check_theta(fx: &Fixture, rng: &mut SignalRng) -> Result<Gap> {
    let ctx = &fx.ctx;
    let mut gap = Gap::default();
    for _ in 0..fx.cases.min(8) {
        let (eta, gamma) = (fx.window(rng), fx.window(rng));
        gap.push_m(&theta_matrix(&eta, &gamma, ctx)?, &frame_like(&eta, &gamma, ctx.delta())?);
    }
    Ok(gap)
}

fn check_figa(fx: &Fixture, rng: &mut SignalRng) -> Result<Gap> {
    let mut gap = Gap::default();
    for _ in 0..fx.cases {
        let w: Vec<Window> = (0..4).map(|_| fx.window(rng)).collect();
        let f = figa_check(&w[0], &w[1], &w[2], &w[3], &fx.ctx)?;
        gap.push_c(f.lhs, f.rhs);
    }
    Ok(gap)
}

fn check_janssen(fx: &Fixture, rng: &mut SignalRng) -> Result<Gap> {
    let delta = fx.ctx.delta();
    let mut gap = Gap::default();
    for _ in 0..fx.cases.min(8) {
        let eta = fx.window(rng);
        let s = frame_operator(&GaborSystem::single(eta.clone(), (**delta).clone())?)?;
        gap.push_m(&janssen_frame_operator(&eta, delta)?, &s);
    }
    Ok(gap)
}

fn check_generators(fx: &Fixture, rng: &mut SignalRng) -> Result<Gap> {
    let mut gap = Gap::default();
    for k in 1..=3 {
        let ws: Vec<Window> = (0..k).map(|_| fx.window(rng)).collect();
        let chk = module_frame_check(&ws, &fx.ctx, fx.frame_tol)?;
        let sys = GaborSystem::new((**fx.ctx.delta()).clone(), ws)?;
        let disagree = chk.generating != is_frame(&sys, fx.frame_tol)?;
        gap.push(if disagree { 1.0 } else { 0.0 }, 0.0);
    }
    Ok(gap)
}

fn check_reconstruction(fx: &Fixture, rng: &mut SignalRng) -> Result<Gap> {
    let ctx = &fx.ctx;
    let mut gap = Gap::default();
    for k in 1..=3 {
        let ws: Vec<Window> = (0..k).map(|_| fx.window(rng)).collect();
        let sys = GaborSystem::new((**ctx.delta()).clone(), ws.clone())?;
        if !is_frame(&sys, fx.frame_tol)? {
            continue;
        }
        let duals = dual_window(&sys)?;
        let xi = fx.window(rng);
        gap.push_w(&reconstruct(&xi, &sys, &duals)?, &xi);
        let coeffs = module_expansion(&xi, &ws, ctx)?;
        gap.push_w(&module_synthesis(&coeffs, &ws, ctx)?, &xi);
    }
    Ok(gap)
}

fn check_norm_scaling(fx: &Fixture, rng: &mut SignalRng) -> Result<Gap> {
    let counting = fx.ctx.delta().with_weight(Rational::from_integer(1))?;
    let ctx = ModuleContext::new(counting)?;
    let mut ratios = Vec::with_capacity(fx.cases);
    let mut exponent = None;
    for _ in 0..fx.cases {
        let out = dual_lattice_norm_scaling(&fx.window(rng), &ctx)?;
        exponent = exponent.or(out.exponent);
        ratios.push(out.ratio);
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let var = ratios.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / ratios.len() as f64;
    let spread = if mean > 0.0 { var.sqrt() / mean } else { 0.0 };
    Ok(Gap {
        cases: ratios.len(),
        max_abs: spread,
        max_rel: spread,
        exponent,
    })
}
