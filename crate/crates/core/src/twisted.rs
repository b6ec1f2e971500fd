//! The twisted group algebra of a measured subgroup.
//!
//! A [`TwistedSeq`] is a function on the subgroup `Delta`. With `conjugated = false` it lives in
//! the algebra for the Heisenberg cocycle `c`; with `conjugated = true` it lives in the algebra
//! for `conj(c)`, which is how the right coefficient algebra on the adjoint subgroup is modelled.
//! Both share one code path parameterized by the twist `kappa`.
//!
//! The integrated representation is `weight * sum_z a(z) pi(z)` for the plain twist and
//! `weight * sum_w b(w) pi(w)^*` for the conjugated one. The former is a *-homomorphism; the
//! latter reverses products, `rep(a * b) = rep(b) rep(a)`, as a right action must.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{MeasuredSubgroup, TFPoint};
use crate::linalg::{spectral_norm, CMatrix};
use crate::shift::{apply_shift, apply_shift_adjoint, cocycle_idx, shift_matrix_idx};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Debug)]
pub struct TwistedSeq {
    domain: Arc<MeasuredSubgroup>,
    conjugated: bool,
    coeffs: Vec<Complex64>,
}

impl TwistedSeq {
    /// Coefficients are given in the domain's element order.
    pub fn new(domain: Arc<MeasuredSubgroup>, conjugated: bool, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != domain.len() {
            return Err(Error::structural(format!(
                "{} coefficients for a subgroup of order {}",
                coeffs.len(),
                domain.len()
            )));
        }
        Ok(Self {
            domain,
            conjugated,
            coeffs,
        })
    }

    pub fn zeros(domain: Arc<MeasuredSubgroup>, conjugated: bool) -> Self {
        let n = domain.len();
        Self {
            domain,
            conjugated,
            coeffs: vec![ZERO; n],
        }
    }

    /// Builds a sequence from `(point, value)` pairs; repeated points accumulate.
    pub fn from_points(
        domain: Arc<MeasuredSubgroup>,
        conjugated: bool,
        entries: &[(TFPoint, Complex64)],
    ) -> Result<Self> {
        let mut out = Self::zeros(domain, conjugated);
        for (z, v) in entries {
            let pos = out.position_of(z)?;
            out.coeffs[pos] += v;
        }
        Ok(out)
    }

    /// The point mass `delta_z`.
    pub fn delta(domain: Arc<MeasuredSubgroup>, conjugated: bool, z: &TFPoint) -> Result<Self> {
        Self::from_points(domain, conjugated, &[(z.clone(), Complex64::new(1.0, 0.0))])
    }

    /// The multiplicative identity `weight^{-1} delta_0`.
    pub fn unit(domain: Arc<MeasuredSubgroup>, conjugated: bool) -> Self {
        let k = domain.weight_f64();
        let mut out = Self::zeros(domain, conjugated);
        out.coeffs[0] = Complex64::new(1.0 / k, 0.0);
        out
    }

    fn position_of(&self, z: &TFPoint) -> Result<usize> {
        let p = self.domain.group().tf_index(z)?;
        self.domain
            .position(p)
            .ok_or_else(|| Error::structural(format!("point {z:?} is outside the subgroup")))
    }

    pub fn domain(&self) -> &Arc<MeasuredSubgroup> {
        &self.domain
    }

    pub fn conjugated(&self) -> bool {
        self.conjugated
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Value at `z`, or an error when `z` is outside the domain.
    pub fn get(&self, z: &TFPoint) -> Result<Complex64> {
        Ok(self.coeffs[self.position_of(z)?])
    }

    /// `(point, value)` pairs in domain order.
    pub fn entries(&self) -> Vec<(TFPoint, Complex64)> {
        self.domain.elements().into_iter().zip(self.coeffs.iter().copied()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == ZERO)
    }

    fn kappa(&self, p: usize, q: usize) -> Complex64 {
        let c = cocycle_idx(self.domain.group(), p, q);
        if self.conjugated {
            c.conj()
        } else {
            c
        }
    }

    fn check_compatible(&self, other: &TwistedSeq) -> Result<()> {
        if self.conjugated != other.conjugated {
            return Err(Error::mismatch("sequences with different twists"));
        }
        if !(Arc::ptr_eq(&self.domain, &other.domain) || self.domain.same_domain(&other.domain)) {
            return Err(Error::mismatch("sequences on different subgroups or measures"));
        }
        Ok(())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
            ..self.clone()
        }
    }

    pub fn add(&self, other: &TwistedSeq) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(Self {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
            ..self.clone()
        })
    }

    /// Largest coefficient gap; infinite for incompatible sequences.
    pub fn max_abs_diff(&self, other: &TwistedSeq) -> f64 {
        if self.check_compatible(other).is_err() {
            return f64::INFINITY;
        }
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Twisted convolution `(a * b)(z) = weight * sum_w kappa(w, z - w) a(w) b(z - w)`.
    pub fn convolve(&self, other: &TwistedSeq) -> Result<TwistedSeq> {
        self.check_compatible(other)?;
        let dom = &self.domain;
        let g = dom.group();
        let k = dom.weight_f64();
        let support: Vec<(usize, Complex64)> = dom
            .indices()
            .iter()
            .copied()
            .zip(self.coeffs.iter().copied())
            .filter(|(_, a)| *a != ZERO)
            .collect();
        let coeffs = dom
            .indices()
            .par_iter()
            .map(|&z| {
                let mut acc = ZERO;
                for &(w, a) in &support {
                    let d = g.tf_sub(z, w);
                    // d lies in the subgroup because z and w do
                    let b = other.coeffs[dom.position(d).expect("subgroup closed under subtraction")];
                    if b != ZERO {
                        acc += self.kappa(w, d) * a * b;
                    }
                }
                acc * k
            })
            .collect();
        Ok(TwistedSeq {
            domain: dom.clone(),
            conjugated: self.conjugated,
            coeffs,
        })
    }

    /// `a^*(z) = conj(kappa(z, -z) a(-z))`.
    pub fn involution(&self) -> TwistedSeq {
        let dom = &self.domain;
        let g = dom.group();
        let coeffs = dom
            .indices()
            .iter()
            .map(|&z| {
                let mz = g.tf_neg(z);
                let a = self.coeffs[dom.position(mz).expect("subgroup closed under negation")];
                (self.kappa(z, mz) * a).conj()
            })
            .collect();
        TwistedSeq {
            domain: dom.clone(),
            conjugated: self.conjugated,
            coeffs,
        }
    }

    /// Canonical trace `a(0)`.
    pub fn trace(&self) -> Complex64 {
        // index 0 is the identity and sorts first
        self.coeffs[0]
    }

    /// The represented operator on `C^G`.
    pub fn integrated_rep(&self) -> CMatrix {
        let g = self.domain.group();
        let n = g.order();
        let k = self.domain.weight_f64();
        let mut out = CMatrix::zeros(n, n);
        for (&p, &a) in self.domain.indices().iter().zip(&self.coeffs) {
            if a == ZERO {
                continue;
            }
            let m = shift_matrix_idx(g, p);
            let m = if self.conjugated { m.adjoint() } else { m };
            out.add_assign_scaled(&m, a * k);
        }
        out
    }

    /// `integrated_rep(self) * v` without forming the matrix.
    pub(crate) fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let g = self.domain.group();
        let k = self.domain.weight_f64();
        let mut out = vec![ZERO; g.order()];
        for (&p, &a) in self.domain.indices().iter().zip(&self.coeffs) {
            if a == ZERO {
                continue;
            }
            let shifted = if self.conjugated {
                apply_shift_adjoint(g, p, v)
            } else {
                apply_shift(g, p, v)
            };
            for (o, s) in out.iter_mut().zip(shifted) {
                *o += s * a * k;
            }
        }
        out
    }

    /// C*-norm, computed as the operator norm in the (faithful) Schroedinger representation.
    pub fn cstar_norm(&self) -> Result<f64> {
        if self.is_zero() {
            return Ok(0.0);
        }
        spectral_norm(&self.integrated_rep())
    }

    /// Localization inner product `tr(a * b^*)`.
    pub fn l2_localization_inner(&self, other: &TwistedSeq) -> Result<Complex64> {
        self.check_compatible(other)?;
        Ok(self.convolve(&other.involution())?.trace())
    }

    /// `tr(a * a^*)^{1/2}`.
    pub fn localization_norm(&self) -> Result<f64> {
        Ok(self.l2_localization_inner(self)?.re.max(0.0).sqrt())
    }
}

pub fn twisted_convolve(a: &TwistedSeq, b: &TwistedSeq) -> Result<TwistedSeq> {
    a.convolve(b)
}

pub fn involution(a: &TwistedSeq) -> TwistedSeq {
    a.involution()
}

pub fn trace(a: &TwistedSeq) -> Complex64 {
    a.trace()
}

pub fn integrated_rep(a: &TwistedSeq) -> CMatrix {
    a.integrated_rep()
}

pub fn cstar_norm(a: &TwistedSeq) -> Result<f64> {
    a.cstar_norm()
}

pub fn l2_localization_inner(a: &TwistedSeq, b: &TwistedSeq) -> Result<Complex64> {
    a.l2_localization_inner(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{FiniteAbelianGroup, Rational};
    use crate::rng::SignalRng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn full_z4() -> (FiniteAbelianGroup, Arc<MeasuredSubgroup>) {
        let g = FiniteAbelianGroup::cyclic(4).unwrap();
        let d = MeasuredSubgroup::full_plane(&g, Rational::from_integer(1)).unwrap();
        (g, Arc::new(d))
    }

    fn random_seq(d: &Arc<MeasuredSubgroup>, conj: bool, rng: &mut SignalRng) -> TwistedSeq {
        TwistedSeq::new(d.clone(), conj, rng.complex_vec(d.len())).unwrap()
    }

    #[test]
    fn delta_products_pick_up_the_cocycle() {
        let (g, d) = full_z4();
        let p = |x, w| g.tf_point(&[x], &[w]).unwrap();
        let a = TwistedSeq::delta(d.clone(), false, &p(1, 0)).unwrap();
        let b = TwistedSeq::delta(d.clone(), false, &p(0, 1)).unwrap();
        let ab = a.convolve(&b).unwrap();
        let ba = b.convolve(&a).unwrap();
        let expect_ab = TwistedSeq::delta(d.clone(), false, &p(1, 1)).unwrap().scale(c(0.0, -1.0));
        let expect_ba = TwistedSeq::delta(d.clone(), false, &p(1, 1)).unwrap();
        assert!(ab.max_abs_diff(&expect_ab) < 1e-15);
        assert!(ba.max_abs_diff(&expect_ba) < 1e-15);
    }

    #[test]
    fn unit_is_identity_for_scaled_measure() {
        let g = FiniteAbelianGroup::cyclic(6).unwrap();
        let d = Arc::new(
            MeasuredSubgroup::from_generators(
                &g,
                &[g.tf_point(&[2], &[0]).unwrap(), g.tf_point(&[0], &[3]).unwrap()],
                Rational::new(3, 7),
            )
            .unwrap(),
        );
        let mut rng = SignalRng::new(1);
        let a = random_seq(&d, false, &mut rng);
        let one = TwistedSeq::unit(d.clone(), false);
        assert!(a.convolve(&one).unwrap().max_abs_diff(&a) < 1e-13);
        assert!(one.convolve(&a).unwrap().max_abs_diff(&a) < 1e-13);
        assert!((one.trace() - c(7.0 / 3.0, 0.0)).norm() < 1e-15);
        assert!(one.integrated_rep().max_abs_diff(&CMatrix::identity(6)) < 1e-14);
        assert!((one.cstar_norm().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn involution_examples() {
        let (g, d) = full_z4();
        let p = |x, w| g.tf_point(&[x], &[w]).unwrap();
        let e = TwistedSeq::delta(d.clone(), false, &p(0, 0)).unwrap();
        assert!(e.involution().max_abs_diff(&e) == 0.0);
        let a = TwistedSeq::delta(d.clone(), false, &p(1, 1)).unwrap();
        let expect = TwistedSeq::delta(d.clone(), false, &p(3, 3)).unwrap().scale(c(0.0, -1.0));
        assert!(a.involution().max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn trace_examples() {
        let (g, d) = full_z4();
        let e = TwistedSeq::delta(d.clone(), false, &g.tf_point(&[0], &[0]).unwrap()).unwrap();
        assert_eq!(e.trace(), c(1.0, 0.0));
        let z = TwistedSeq::delta(d.clone(), false, &g.tf_point(&[2], &[1]).unwrap()).unwrap();
        assert_eq!(z.trace(), c(0.0, 0.0));
    }

    #[test]
    fn integrated_rep_and_norm_on_separable_lattice() {
        let g = FiniteAbelianGroup::cyclic(4).unwrap();
        let p = |x, w| g.tf_point(&[x], &[w]).unwrap();
        let d = Arc::new(
            MeasuredSubgroup::from_generators(&g, &[p(2, 0), p(0, 2)], Rational::from_integer(1)).unwrap(),
        );
        let a = TwistedSeq::from_points(d.clone(), false, &[(p(0, 0), c(1.0, 0.0)), (p(0, 2), c(1.0, 0.0))])
            .unwrap();
        let expect = CMatrix::from_diagonal(&[2.0, 0.0, 2.0, 0.0]);
        assert!(a.integrated_rep().max_abs_diff(&expect) < 1e-15);
        assert!((a.cstar_norm().unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(TwistedSeq::zeros(d, false).cstar_norm().unwrap(), 0.0);
    }

    #[test]
    fn right_representation_reverses_products() {
        let (_, d) = full_z4();
        let mut rng = SignalRng::new(4);
        let a = random_seq(&d, true, &mut rng);
        let b = random_seq(&d, true, &mut rng);
        let rab = a.convolve(&b).unwrap().integrated_rep();
        let ra = a.integrated_rep();
        let rb = b.integrated_rep();
        assert!(rab.max_abs_diff(&rb.matmul(&ra).unwrap()) < 1e-10);
        // and it genuinely differs from the forward order on a noncommutative domain
        assert!(rab.max_abs_diff(&ra.matmul(&rb).unwrap()) > 1e-3);
        assert!(a.involution().integrated_rep().max_abs_diff(&ra.adjoint()) < 1e-12);
    }

    #[test]
    fn apply_matches_matrix() {
        let (g, d) = full_z4();
        let mut rng = SignalRng::new(8);
        let v = rng.complex_vec(g.order());
        for conj in [false, true] {
            let a = random_seq(&d, conj, &mut rng);
            let direct = a.apply(&v);
            let via = a.integrated_rep().mul_vec(&v).unwrap();
            let gap = direct.iter().zip(&via).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
            assert!(gap < 1e-12);
        }
    }

    #[test]
    fn localization_inner_examples() {
        let (g, d) = full_z4();
        let p = |x, w| g.tf_point(&[x], &[w]).unwrap();
        let a = TwistedSeq::delta(d.clone(), false, &p(1, 3)).unwrap();
        let b = TwistedSeq::delta(d.clone(), false, &p(2, 3)).unwrap();
        assert!((a.l2_localization_inner(&a).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(a.l2_localization_inner(&b).unwrap(), c(0.0, 0.0));

        let scaled = Arc::new(d.with_weight(Rational::new(1, 4)).unwrap());
        let a = TwistedSeq::delta(scaled, false, &p(1, 3)).unwrap();
        assert!((a.l2_localization_inner(&a).unwrap() - c(0.25, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn incompatible_sequences_are_rejected() {
        let (g, d) = full_z4();
        let a = TwistedSeq::zeros(d.clone(), false);
        let b = TwistedSeq::zeros(d.clone(), true);
        assert!(matches!(a.convolve(&b), Err(Error::DomainMismatch(_))));
        let other = Arc::new(MeasuredSubgroup::trivial(&g, Rational::from_integer(1)).unwrap());
        let c0 = TwistedSeq::zeros(other, false);
        assert!(matches!(a.l2_localization_inner(&c0), Err(Error::DomainMismatch(_))));
        let outside = g.tf_point(&[1], &[0]).unwrap();
        assert!(c0.get(&outside).is_err());
    }
}
