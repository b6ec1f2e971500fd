use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::FiniteAbelianGroup;
use crate::rng::SignalRng;

/// A signal on `G`: one complex value per group element, in index order.
///
/// The inner product is `<a, b> = sum_t a(t) conj(b(t))` (counting measure on `G`).
#[derive(Clone, PartialEq)]
pub struct Window {
    group: FiniteAbelianGroup,
    values: Vec<Complex64>,
}

impl fmt::Debug for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Window({}, {:?})", self.group, self.values)
    }
}

impl Window {
    pub fn new(group: &FiniteAbelianGroup, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::structural(format!(
                "window has {} values, group {} has order {}",
                values.len(),
                group,
                group.order()
            )));
        }
        Ok(Self::from_values_unchecked(group, values))
    }

    pub(crate) fn from_values_unchecked(group: &FiniteAbelianGroup, values: Vec<Complex64>) -> Self {
        Self {
            group: group.clone(),
            values,
        }
    }

    pub fn zeros(group: &FiniteAbelianGroup) -> Self {
        Self::from_values_unchecked(group, vec![Complex64::new(0.0, 0.0); group.order()])
    }

    /// Unit impulse at the element with flat index `index`.
    pub fn delta(group: &FiniteAbelianGroup, index: usize) -> Result<Self> {
        if index >= group.order() {
            return Err(Error::structural(format!(
                "delta index {index} out of range for {group}"
            )));
        }
        let mut w = Self::zeros(group);
        w.values[index] = Complex64::new(1.0, 0.0);
        Ok(w)
    }

    pub fn constant(group: &FiniteAbelianGroup) -> Self {
        Self::from_values_unchecked(group, vec![Complex64::new(1.0, 0.0); group.order()])
    }

    /// Seeded complex Gaussian window; see [`SignalRng`] for the exact stream.
    pub fn randn(group: &FiniteAbelianGroup, seed: u64) -> Self {
        SignalRng::new(seed).window(group)
    }

    /// Parses `delta:<index>`, `const` or `randn:<seed>`.
    pub fn from_descriptor(group: &FiniteAbelianGroup, desc: &str) -> Result<Self> {
        let bad = |m: String| Error::parse("window", m);
        let desc = desc.trim();
        match desc.split_once(':') {
            None if desc == "const" => Ok(Self::constant(group)),
            Some(("delta", i)) => {
                let i: usize = i
                    .trim()
                    .parse()
                    .map_err(|_| bad(format!("bad delta index in {desc:?}")))?;
                Self::delta(group, i).map_err(|e| bad(e.to_string()))
            }
            Some(("randn", s)) => {
                let s: u64 = s
                    .trim()
                    .parse()
                    .map_err(|_| bad(format!("bad seed in {desc:?}")))?;
                Ok(Self::randn(group, s))
            }
            _ => Err(bad(format!(
                "unknown window {desc:?} (expected delta:<i>, const or randn:<seed>)"
            ))),
        }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub(crate) fn check_group(&self, group: &FiniteAbelianGroup) -> Result<()> {
        if &self.group != group {
            return Err(Error::mismatch(format!(
                "window over {} used with {}",
                self.group, group
            )));
        }
        Ok(())
    }

    /// `<self, other> = sum_t self(t) conj(other(t))`.
    pub fn inner(&self, other: &Window) -> Result<Complex64> {
        other.check_group(&self.group)?;
        Ok(inner(&self.values, &other.values))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == Complex64::new(0.0, 0.0))
    }

    pub fn scale(&self, s: Complex64) -> Window {
        Self::from_values_unchecked(&self.group, self.values.iter().map(|v| v * s).collect())
    }

    pub fn add(&self, other: &Window) -> Result<Window> {
        other.check_group(&self.group)?;
        Ok(Self::from_values_unchecked(
            &self.group,
            self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        ))
    }

    pub fn sub(&self, other: &Window) -> Result<Window> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Largest pointwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Window) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

pub(crate) fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}
