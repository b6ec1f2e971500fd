//! JSON forms of subgroups, windows and twisted sequences.
//!
//! Plane points are `[[x...], [w...]]`, complex numbers `[re, im]`, rationals `"p/q"`.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{format_rational, parse_rational, FiniteAbelianGroup, MeasuredSubgroup, Rational, TFPoint};
use crate::twisted::TwistedSeq;
use crate::window::Window;

/// A plane point as `([x...], [w...])`.
pub type PointJson = (Vec<i64>, Vec<i64>);

pub fn point_to_json(z: &TFPoint) -> PointJson {
    let coords = |g: &crate::group::GroupElement| g.coords().iter().map(|&c| c as i64).collect();
    (coords(&z.x), coords(&z.w))
}

pub fn point_from_json(group: &FiniteAbelianGroup, p: &PointJson) -> Result<TFPoint> {
    group
        .tf_point(&p.0, &p.1)
        .map_err(|e| Error::parse("generators", e.to_string()))
}

pub fn parse_group(orders: &[u32]) -> Result<FiniteAbelianGroup> {
    FiniteAbelianGroup::new(orders.to_vec()).map_err(|e| Error::parse("group", e.to_string()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubgroupJson {
    pub group: Vec<u32>,
    #[serde(default)]
    pub generators: Vec<PointJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<String>,
}

impl SubgroupJson {
    pub fn build(&self) -> Result<MeasuredSubgroup> {
        let group = parse_group(&self.group)?;
        build_subgroup(&group, &self.generators, self.weight.as_deref())
    }

    pub fn from_subgroup(delta: &MeasuredSubgroup) -> Self {
        Self {
            group: delta.group().orders().to_vec(),
            generators: delta.generators().iter().map(point_to_json).collect(),
            weight: Some(format_rational(&delta.weight())),
        }
    }
}

pub fn build_subgroup(
    group: &FiniteAbelianGroup,
    generators: &[PointJson],
    weight: Option<&str>,
) -> Result<MeasuredSubgroup> {
    let gens = generators
        .iter()
        .map(|p| point_from_json(group, p))
        .collect::<Result<Vec<_>>>()?;
    let weight = match weight {
        Some(w) => parse_rational(w)?,
        None => Rational::from_integer(1),
    };
    MeasuredSubgroup::from_generators(group, &gens, weight).map_err(|e| Error::parse("weight", e.to_string()))
}

/// Full element listing of a subgroup with its weight and size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubgroupListing {
    pub group: Vec<u32>,
    pub order: usize,
    pub elements: Vec<PointJson>,
    pub weight: String,
    pub size: String,
}

impl SubgroupListing {
    pub fn of(delta: &MeasuredSubgroup) -> Result<Self> {
        Ok(Self {
            group: delta.group().orders().to_vec(),
            order: delta.len(),
            elements: delta.elements().iter().map(point_to_json).collect(),
            weight: format_rational(&delta.weight()),
            size: format_rational(&delta.size()?),
        })
    }
}

/// A window given either by descriptor (`"delta:i"`, `"const"`, `"randn:seed"`) or by values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WindowJson {
    Named(String),
    Values(Vec<Complex64>),
}

impl WindowJson {
    pub fn build(&self, group: &FiniteAbelianGroup) -> Result<Window> {
        match self {
            WindowJson::Named(d) => Window::from_descriptor(group, d),
            WindowJson::Values(v) => Window::new(group, v.clone()).map_err(|e| Error::parse("windows", e.to_string())),
        }
    }

    pub fn from_window(w: &Window) -> Self {
        WindowJson::Values(w.values().to_vec())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwistedJson {
    pub subgroup: SubgroupJson,
    pub conjugated: bool,
    pub coeffs: Vec<(PointJson, Complex64)>,
}

impl TwistedJson {
    pub fn from_seq(a: &TwistedSeq) -> Self {
        Self {
            subgroup: SubgroupJson::from_subgroup(a.domain()),
            conjugated: a.conjugated(),
            coeffs: a
                .entries()
                .iter()
                .map(|(z, v)| (point_to_json(z), *v))
                .collect(),
        }
    }

    pub fn build(&self) -> Result<TwistedSeq> {
        let domain = Arc::new(self.subgroup.build()?);
        let group = domain.group().clone();
        let entries = self
            .coeffs
            .iter()
            .map(|(p, v)| Ok((point_from_json(&group, p)?, *v)))
            .collect::<Result<Vec<_>>>()?;
        TwistedSeq::from_points(domain, self.conjugated, &entries)
            .map_err(|e| Error::parse("coeffs", e.to_string()))
    }
}
