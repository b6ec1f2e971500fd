mod common;

use common::*;
use heisenmod_core::{
    all_subgroups, analysis, is_frame, left_act, left_inner, module_frame_check, module_norm, right_act,
    right_inner, GaborSystem, ModuleContext, Rational, SignalRng, Window, DEFAULT_FRAME_TOL,
};

#[test]
fn sup_quotient_approaches_module_norm_from_below() {
    let g = cyclic(8);
    let delta = lattice1(&g, &[(2, 2), (0, 4)]);
    let ctx = ModuleContext::new(delta.clone()).unwrap();
    let mut rng = SignalRng::new(1);
    for _ in 0..3 {
        let eta = rng.window(&g);
        let m = module_norm(&eta, &ctx).unwrap();
        let c_mat = analysis(&eta, &delta).unwrap();
        let mut best: f64 = 0.0;
        for _ in 0..200 {
            let xi = rng.window(&g);
            let coeffs = c_mat.mul_vec(xi.values()).unwrap();
            let q = (delta.weight_f64() * ip(&coeffs, &coeffs).re).sqrt() / xi.norm();
            assert!(q <= m * (1.0 + 1e-12));
            best = best.max(q);
        }
        // Refine the best direction by power iteration to close the gap.
        let s = frame_operator(std::slice::from_ref(&eta), &delta);
        let top = power_top(&s, rng.window(&g).values(), 400).sqrt();
        assert!(best <= m && (m - top) / m < 1e-6, "m={m} top={top}");
    }
}

#[test]
fn imprimitivity_against_brute_force() {
    let g = cyclic(6);
    let orders = g.orders().to_vec();
    let delta = lattice1(&g, &[(2, 0), (0, 3)]);
    let ctx = ModuleContext::new(delta.clone()).unwrap();
    let mut rng = SignalRng::new(2);
    for _ in 0..5 {
        let (xi, eta, gamma) = (rng.window(&g), rng.window(&g), rng.window(&g));
        let lhs = left_act(&left_inner(&xi, &eta, &ctx).unwrap(), &gamma, &ctx).unwrap();
        let rhs = right_act(&xi, &right_inner(&eta, &gamma, &ctx).unwrap(), &ctx).unwrap();

        // Direct sum: k sum_z <xi, pi(z) eta> pi(z) gamma.
        let mut direct = vec![c(0.0, 0.0); g.order()];
        for z in points(&delta) {
            let m = shift(&orders, &z);
            let coef = ip(xi.values(), &apply(&m, eta.values())) * delta.weight_f64();
            for (d, v) in direct.iter_mut().zip(apply(&m, gamma.values())) {
                *d += coef * v;
            }
        }
        let direct = Window::new(&g, direct).unwrap();
        assert!(lhs.max_abs_diff(&direct) < 1e-10);
        assert!(rhs.max_abs_diff(&direct) < 1e-10);
    }
}

#[test]
fn generator_verdicts_match_frame_verdicts_up_to_twelve() {
    let mut rng = SignalRng::new(12);
    let mut cases = 0;
    for n in 9..=12 {
        for delta in all_subgroups(&cyclic(n), Rational::from_integer(1)).unwrap() {
            let ctx = ModuleContext::new(delta.clone()).unwrap();
            for k in 1..=3 {
                let ws: Vec<Window> = (0..k).map(|_| rng.window(delta.group())).collect();
                let chk = module_frame_check(&ws, &ctx, DEFAULT_FRAME_TOL).unwrap();
                let sys = GaborSystem::new(delta.clone(), ws).unwrap();
                assert_eq!(chk.generating, is_frame(&sys, DEFAULT_FRAME_TOL).unwrap(), "{delta:?} k={k}");
                cases += 1;
            }
        }
    }
    assert!(cases > 300);
}

#[test]
fn tight_window_attains_embedding_bound() {
    // delta_0 on the full plane of Z_2 gives S = 2I: ||eta||^2 = s * ||S||.
    let g = cyclic(2);
    let full = heisenmod_core::MeasuredSubgroup::full_plane(&g, Rational::from_integer(1)).unwrap();
    let ctx = ModuleContext::new(full.clone()).unwrap();
    let eta = Window::delta(&g, 0).unwrap();
    let m = module_norm(&eta, &ctx).unwrap();
    assert!((eta.norm() - full.size_f64().sqrt() * m).abs() < 1e-14);
}
