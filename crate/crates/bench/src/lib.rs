//! Fixtures shared by the benchmarks.

use heisenmod_core::{FiniteAbelianGroup, MeasuredSubgroup, Rational, Window};

/// `aZ x bZ` inside the plane over `Z_n`, with counting measure.
pub fn separable(n: u32, a: i64, b: i64) -> MeasuredSubgroup {
    let g = FiniteAbelianGroup::cyclic(n).unwrap();
    let gens = [g.tf_point(&[a], &[0]).unwrap(), g.tf_point(&[0], &[b]).unwrap()];
    MeasuredSubgroup::from_generators(&g, &gens, Rational::from_integer(1)).unwrap()
}

pub fn windows(delta: &MeasuredSubgroup, count: u64) -> Vec<Window> {
    (0..count).map(|s| Window::randn(delta.group(), s)).collect()
}
