//! Brute-force reference implementations built from coordinates and `exp`, sharing no
//! arithmetic with the library beyond element enumeration.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use heisenmod_core::{
    CMatrix, Complex64, FiniteAbelianGroup, MeasuredSubgroup, Rational, TFPoint, TwistedSeq, Window,
};

pub type Pt = (Vec<i64>, Vec<i64>);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn pt(z: &TFPoint) -> Pt {
    let f = |e: &heisenmod_core::GroupElement| e.coords().iter().map(|&v| v as i64).collect();
    (f(&z.x), f(&z.w))
}

pub fn cyclic(n: u32) -> FiniteAbelianGroup {
    FiniteAbelianGroup::cyclic(n).unwrap()
}

pub fn lattice(g: &FiniteAbelianGroup, gens: &[(&[i64], &[i64])], k: Rational) -> MeasuredSubgroup {
    let pts: Vec<TFPoint> = gens.iter().map(|(x, w)| g.tf_point(x, w).unwrap()).collect();
    MeasuredSubgroup::from_generators(g, &pts, k).unwrap()
}

pub fn lattice1(g: &FiniteAbelianGroup, gens: &[(i64, i64)]) -> MeasuredSubgroup {
    let pts: Vec<TFPoint> = gens.iter().map(|&(x, w)| g.tf_point(&[x], &[w]).unwrap()).collect();
    MeasuredSubgroup::from_generators(g, &pts, Rational::from_integer(1)).unwrap()
}

/// Mixed-radix index, first coordinate most significant.
pub fn index(orders: &[u32], x: &[i64]) -> usize {
    x.iter()
        .zip(orders)
        .fold(0usize, |acc, (&v, &n)| acc * n as usize + v.rem_euclid(n as i64) as usize)
}

pub fn coords(orders: &[u32], mut i: usize) -> Vec<i64> {
    let mut out = vec![0i64; orders.len()];
    for (slot, &n) in out.iter_mut().zip(orders).rev() {
        *slot = (i % n as usize) as i64;
        i /= n as usize;
    }
    out
}

pub fn chi(orders: &[u32], w: &[i64], x: &[i64]) -> Complex64 {
    let t: f64 = w
        .iter()
        .zip(x)
        .zip(orders)
        .map(|((&a, &b), &n)| (a * b).rem_euclid(n as i64) as f64 / n as f64)
        .sum();
    Complex64::from_polar(1.0, TAU * t.fract())
}

pub fn add(orders: &[u32], a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).zip(orders).map(|((x, y), &n)| (x + y).rem_euclid(n as i64)).collect()
}

pub fn neg(orders: &[u32], a: &[i64]) -> Vec<i64> {
    a.iter().zip(orders).map(|(x, &n)| (-x).rem_euclid(n as i64)).collect()
}

pub fn pt_add(orders: &[u32], z: &Pt, w: &Pt) -> Pt {
    (add(orders, &z.0, &w.0), add(orders, &z.1, &w.1))
}

pub fn pt_neg(orders: &[u32], z: &Pt) -> Pt {
    (neg(orders, &z.0), neg(orders, &z.1))
}

/// `c((x, w), (y, tau)) = conj(tau(x))`.
pub fn cocycle(orders: &[u32], z: &Pt, w: &Pt) -> Complex64 {
    chi(orders, &w.1, &z.0).conj()
}

/// Dense `M_w T_x`.
pub fn shift(orders: &[u32], z: &Pt) -> CMatrix {
    let n: usize = orders.iter().map(|&v| v as usize).product();
    let mut m = CMatrix::zeros(n, n);
    for t in 0..n {
        let tc = coords(orders, t);
        let src = add(orders, &tc, &neg(orders, &z.0));
        m[(t, index(orders, &src))] = chi(orders, &z.1, &tc);
    }
    m
}

pub fn apply(m: &CMatrix, v: &[Complex64]) -> Vec<Complex64> {
    m.mul_vec(v).unwrap()
}

pub fn ip(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

pub fn points(delta: &MeasuredSubgroup) -> Vec<Pt> {
    delta.elements().iter().map(pt).collect()
}

/// `sum_j k sum_z (pi(z) eta_j)(pi(z) eta_j)^H`.
pub fn frame_operator(windows: &[Window], delta: &MeasuredSubgroup) -> CMatrix {
    let orders = delta.group().orders().to_vec();
    let n = delta.group().order();
    let k = delta.weight_f64();
    let mut s = CMatrix::zeros(n, n);
    for eta in windows {
        for z in points(delta) {
            let v = apply(&shift(&orders, &z), eta.values());
            for i in 0..n {
                for j in 0..n {
                    s[(i, j)] += v[i] * v[j].conj() * k;
                }
            }
        }
    }
    s
}

/// `k sum_z <xi, pi(z) eta> pi(z) gamma` as a matrix.
pub fn frame_like(eta: &Window, gamma: &Window, delta: &MeasuredSubgroup) -> CMatrix {
    let orders = delta.group().orders().to_vec();
    let n = delta.group().order();
    let k = delta.weight_f64();
    let mut s = CMatrix::zeros(n, n);
    for z in points(delta) {
        let m = shift(&orders, &z);
        let u = apply(&m, gamma.values());
        let v = apply(&m, eta.values());
        for i in 0..n {
            for j in 0..n {
                s[(i, j)] += u[i] * v[j].conj() * k;
            }
        }
    }
    s
}

pub type Seq = BTreeMap<Pt, Complex64>;

pub fn seq_of(a: &TwistedSeq) -> Seq {
    a.entries().iter().map(|(z, v)| (pt(z), *v)).collect()
}

fn kappa(orders: &[u32], z: &Pt, w: &Pt, conj: bool) -> Complex64 {
    let v = cocycle(orders, z, w);
    if conj {
        v.conj()
    } else {
        v
    }
}

/// Twisted convolution by the double sum over pairs.
pub fn convolve(orders: &[u32], a: &Seq, b: &Seq, k: f64, conj: bool) -> Seq {
    let mut out: Seq = a.keys().map(|z| (z.clone(), c(0.0, 0.0))).collect();
    for (w, av) in a {
        for (u, bv) in b {
            let z = pt_add(orders, w, u);
            *out.entry(z).or_insert(c(0.0, 0.0)) += av * bv * kappa(orders, w, u, conj) * k;
        }
    }
    out
}

pub fn involution(orders: &[u32], a: &Seq, conj: bool) -> Seq {
    a.keys()
        .map(|z| {
            let m = pt_neg(orders, z);
            (z.clone(), (kappa(orders, z, &m, conj) * a[&m]).conj())
        })
        .collect()
}

pub fn rep(orders: &[u32], a: &Seq, k: f64, conj: bool) -> CMatrix {
    let n: usize = orders.iter().map(|&v| v as usize).product();
    let mut out = CMatrix::zeros(n, n);
    for (z, v) in a {
        let m = shift(orders, z);
        let m = if conj { m.adjoint() } else { m };
        out = out.add(&m.scale(v * k)).unwrap();
    }
    out
}

pub fn seq_gap(a: &Seq, b: &Seq) -> f64 {
    a.iter()
        .map(|(z, v)| (v - b.get(z).copied().unwrap_or(c(0.0, 0.0))).norm())
        .fold(0.0, f64::max)
}

/// Largest eigenvalue by power iteration on a PSD matrix, as a floor for the true value.
pub fn power_top(s: &CMatrix, start: &[Complex64], iters: usize) -> f64 {
    let mut v = start.to_vec();
    let mut lambda = 0.0;
    for _ in 0..iters {
        let w = s.mul_vec(&v).unwrap();
        let norm = ip(&w, &w).re.sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        lambda = ip(&w, &v).re / ip(&v, &v).re;
        v = w.iter().map(|x| x / norm).collect();
    }
    lambda
}
