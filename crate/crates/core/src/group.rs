//! Finite abelian groups, their duals, and measured subgroups of the time-frequency plane.
//!
//! A group is an explicit product `Z_{n_1} x ... x Z_{n_r}`. The dual group reuses the same
//! coordinates, paired by `(w, x) -> exp(2 pi i sum_j w_j x_j / n_j)`.
//!
//! Elements are addressed internally by a mixed-radix index with the first coordinate most
//! significant, so index order is lexicographic coordinate order. A point `(x, w)` of
//! `G x G^` has plane index `index(x) * |G| + index(w)`.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{Error, Result};

/// Exact rational used for measure weights and sizes.
pub type Rational = Ratio<i64>;

/// Largest supported group order. Keeps plane indices and adjoint enumeration tractable.
pub const MAX_ORDER: usize = 1 << 16;

struct GroupInner {
    orders: Vec<u32>,
    order: usize,
    // strides[j] = product of orders[j+1..]
    strides: Vec<usize>,
    // lcm of the orders; characters take values in the exponent-th roots of unity
    exponent: u64,
    // exponent / orders[j]
    scale: Vec<u64>,
    roots: Vec<Complex64>,
}

/// A finite abelian group `Z_{n_1} x ... x Z_{n_r}`, also used as its own dual.
#[derive(Clone)]
pub struct FiniteAbelianGroup {
    inner: Arc<GroupInner>,
}

impl PartialEq for FiniteAbelianGroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.orders == other.inner.orders
    }
}

impl Eq for FiniteAbelianGroup {}

impl fmt::Debug for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteAbelianGroup({:?})", self.inner.orders)
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inner.orders.is_empty() {
            return write!(f, "Z_1");
        }
        let parts: Vec<String> = self.inner.orders.iter().map(|n| format!("Z_{n}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

/// `exp(2 pi i k / n)`, exact at quarter turns and conjugate-symmetric.
fn unit_root(k: u64, n: u64) -> Complex64 {
    let k = k % n;
    if (4 * k).is_multiple_of(n) {
        return match (4 * k) / n {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    if 2 * k > n {
        return unit_root(n - k, n).conj();
    }
    let angle = std::f64::consts::TAU * (k as f64) / (n as f64);
    Complex64::new(angle.cos(), angle.sin())
}

impl FiniteAbelianGroup {
    pub fn new(orders: Vec<u32>) -> Result<Self> {
        if orders.contains(&0) {
            return Err(Error::structural("cyclic factor orders must be at least 1"));
        }
        let mut order: usize = 1;
        for &n in &orders {
            order = order
                .checked_mul(n as usize)
                .filter(|&o| o <= MAX_ORDER)
                .ok_or_else(|| Error::structural(format!("group order exceeds {MAX_ORDER}")))?;
        }
        let mut strides = vec![1usize; orders.len()];
        for j in (0..orders.len().saturating_sub(1)).rev() {
            strides[j] = strides[j + 1] * orders[j + 1] as usize;
        }
        let exponent = orders.iter().fold(1u64, |acc, &n| acc.lcm(&(n as u64)));
        let scale = orders.iter().map(|&n| exponent / n as u64).collect();
        let roots = (0..exponent).map(|k| unit_root(k, exponent)).collect();
        Ok(Self {
            inner: Arc::new(GroupInner {
                orders,
                order,
                strides,
                exponent,
                scale,
                roots,
            }),
        })
    }

    pub fn cyclic(n: u32) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn orders(&self) -> &[u32] {
        &self.inner.orders
    }

    /// `|G|`.
    pub fn order(&self) -> usize {
        self.inner.order
    }

    pub fn rank(&self) -> usize {
        self.inner.orders.len()
    }

    /// Number of points of `G x G^`.
    pub fn plane_order(&self) -> usize {
        self.inner.order * self.inner.order
    }

    /// Builds an element, reducing each coordinate mod its factor order.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.rank() {
            return Err(Error::structural(format!(
                "element has {} coordinates, group {} has rank {}",
                coords.len(),
                self,
                self.rank()
            )));
        }
        let coords = coords
            .iter()
            .zip(&self.inner.orders)
            .map(|(&c, &n)| c.rem_euclid(n as i64) as u32)
            .collect();
        Ok(GroupElement {
            group: self.clone(),
            coords,
        })
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            group: self.clone(),
            coords: vec![0; self.rank()],
        }
    }

    /// Element with the given flat index.
    pub fn element_at(&self, index: usize) -> GroupElement {
        GroupElement {
            group: self.clone(),
            coords: self.digits(index),
        }
    }

    /// All elements in index (lexicographic) order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order()).map(|i| self.element_at(i))
    }

    pub(crate) fn digits(&self, index: usize) -> Vec<u32> {
        self.inner
            .strides
            .iter()
            .zip(&self.inner.orders)
            .map(|(&s, &n)| ((index / s) % n as usize) as u32)
            .collect()
    }

    pub(crate) fn index_of_digits(&self, coords: &[u32]) -> usize {
        coords
            .iter()
            .zip(&self.inner.strides)
            .map(|(&c, &s)| c as usize * s)
            .sum()
    }

    pub fn index_of(&self, g: &GroupElement) -> Result<usize> {
        self.check_member(g)?;
        Ok(self.index_of_digits(&g.coords))
    }

    fn check_member(&self, g: &GroupElement) -> Result<()> {
        if &g.group != self {
            return Err(Error::structural(format!(
                "element of {} used with group {}",
                g.group, self
            )));
        }
        Ok(())
    }

    pub(crate) fn add_idx(&self, a: usize, b: usize) -> usize {
        let mut out = 0;
        for (&s, &n) in self.inner.strides.iter().zip(&self.inner.orders) {
            let n = n as usize;
            let da = (a / s) % n;
            let db = (b / s) % n;
            out += ((da + db) % n) * s;
        }
        out
    }

    pub(crate) fn neg_idx(&self, a: usize) -> usize {
        let mut out = 0;
        for (&s, &n) in self.inner.strides.iter().zip(&self.inner.orders) {
            let n = n as usize;
            let d = (a / s) % n;
            out += ((n - d) % n) * s;
        }
        out
    }

    pub(crate) fn sub_idx(&self, a: usize, b: usize) -> usize {
        self.add_idx(a, self.neg_idx(b))
    }

    /// The exponent `L` (lcm of the factor orders); characters are `L`-th roots of unity.
    pub fn exponent(&self) -> u64 {
        self.inner.exponent
    }

    /// Phase `k` in `Z_L` with `character(w, x) = exp(2 pi i k / L)`.
    pub(crate) fn phase_idx(&self, w: usize, x: usize) -> u64 {
        let l = self.inner.exponent;
        let mut acc = 0u64;
        for ((&s, &n), &sc) in self
            .inner
            .strides
            .iter()
            .zip(&self.inner.orders)
            .zip(&self.inner.scale)
        {
            let n = n as usize;
            let dw = ((w / s) % n) as u64;
            let dx = ((x / s) % n) as u64;
            acc = (acc + (dw * dx % l) * sc) % l;
        }
        acc
    }

    pub(crate) fn root(&self, phase: u64) -> Complex64 {
        self.inner.roots[(phase % self.inner.exponent) as usize]
    }

    pub(crate) fn character_idx(&self, w: usize, x: usize) -> Complex64 {
        self.root(self.phase_idx(w, x))
    }

    // plane indices

    pub(crate) fn tf_split(&self, p: usize) -> (usize, usize) {
        (p / self.order(), p % self.order())
    }

    pub(crate) fn tf_join(&self, x: usize, w: usize) -> usize {
        x * self.order() + w
    }

    pub(crate) fn tf_add(&self, p: usize, q: usize) -> usize {
        let (px, pw) = self.tf_split(p);
        let (qx, qw) = self.tf_split(q);
        self.tf_join(self.add_idx(px, qx), self.add_idx(pw, qw))
    }

    pub(crate) fn tf_neg(&self, p: usize) -> usize {
        let (x, w) = self.tf_split(p);
        self.tf_join(self.neg_idx(x), self.neg_idx(w))
    }

    pub(crate) fn tf_sub(&self, p: usize, q: usize) -> usize {
        self.tf_add(p, self.tf_neg(q))
    }

    pub fn tf_point_at(&self, p: usize) -> TFPoint {
        let (x, w) = self.tf_split(p);
        TFPoint {
            x: self.element_at(x),
            w: self.element_at(w),
        }
    }

    pub fn tf_index(&self, z: &TFPoint) -> Result<usize> {
        Ok(self.tf_join(self.index_of(&z.x)?, self.index_of(&z.w)?))
    }

    /// Builds a plane point from raw coordinates, reducing mod the factor orders.
    pub fn tf_point(&self, x: &[i64], w: &[i64]) -> Result<TFPoint> {
        Ok(TFPoint {
            x: self.element(x)?,
            w: self.element(w)?,
        })
    }

    /// Whether the shifts at `p` and `q` commute, decided exactly: `tau(x) == omega(y)`.
    pub(crate) fn tf_commute_idx(&self, p: usize, q: usize) -> bool {
        let (x, omega) = self.tf_split(p);
        let (y, tau) = self.tf_split(q);
        self.phase_idx(tau, x) == self.phase_idx(omega, y)
    }
}

/// An element of `G` (or of `G^`, which shares the coordinates).
#[derive(Clone)]
pub struct GroupElement {
    group: FiniteAbelianGroup,
    coords: Vec<u32>,
}

impl GroupElement {
    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn index(&self) -> usize {
        self.group.index_of_digits(&self.coords)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &GroupElement) -> Result<GroupElement> {
        self.group.check_member(other)?;
        Ok(self.group.element_at(self.group.add_idx(self.index(), other.index())))
    }

    pub fn neg(&self) -> GroupElement {
        self.group.element_at(self.group.neg_idx(self.index()))
    }

    pub fn sub(&self, other: &GroupElement) -> Result<GroupElement> {
        self.add(&other.neg())
    }
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.coords == other.coords
    }
}

impl Eq for GroupElement {}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.coords.cmp(&other.coords)
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coords)
    }
}

/// The pairing `<w, x> = exp(2 pi i sum_j w_j x_j / n_j)` between `G^` and `G`.
pub fn character(w: &GroupElement, x: &GroupElement) -> Result<Complex64> {
    if w.group != x.group {
        return Err(Error::structural(format!(
            "character pairs {} with {}",
            w.group, x.group
        )));
    }
    Ok(w.group.character_idx(w.index(), x.index()))
}

/// A point `(x, w)` of the time-frequency plane `G x G^`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TFPoint {
    pub x: GroupElement,
    pub w: GroupElement,
}

impl TFPoint {
    pub fn new(x: GroupElement, w: GroupElement) -> Result<Self> {
        if x.group != w.group {
            return Err(Error::structural("time and frequency parts over different groups"));
        }
        Ok(Self { x, w })
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.x.group
    }

    pub fn add(&self, other: &TFPoint) -> Result<TFPoint> {
        Ok(TFPoint {
            x: self.x.add(&other.x)?,
            w: self.w.add(&other.w)?,
        })
    }

    pub fn neg(&self) -> TFPoint {
        TFPoint {
            x: self.x.neg(),
            w: self.w.neg(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.w.is_zero()
    }
}

impl fmt::Debug for TFPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?},{:?})", self.x, self.w)
    }
}

/// Smallest subgroup of the plane containing `gens`, as a sorted index list.
pub(crate) fn closure(group: &FiniteAbelianGroup, gens: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; group.plane_order()];
    let mut queue = VecDeque::new();
    seen[0] = true;
    queue.push_back(0usize);
    let mut out = Vec::new();
    while let Some(p) = queue.pop_front() {
        out.push(p);
        for &g in gens {
            let q = group.tf_add(p, g);
            if !seen[q] {
                seen[q] = true;
                queue.push_back(q);
            }
        }
    }
    out.sort_unstable();
    out
}

/// A short generating list for a subgroup given by its sorted elements.
fn reduce_generators(group: &FiniteAbelianGroup, elements: &[usize]) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span = vec![0usize];
    for &p in elements {
        if span.binary_search(&p).is_err() {
            gens.push(p);
            span = closure(group, &gens);
            if span.len() == elements.len() {
                break;
            }
        }
    }
    gens
}

/// A subgroup of `G x G^` with a per-point measure weight.
#[derive(Clone)]
pub struct MeasuredSubgroup {
    group: FiniteAbelianGroup,
    indices: Vec<usize>,
    generators: Vec<usize>,
    weight: Rational,
}

impl PartialEq for MeasuredSubgroup {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.weight == other.weight && self.indices == other.indices
    }
}

impl fmt::Debug for MeasuredSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MeasuredSubgroup")
            .field("group", &self.group)
            .field("order", &self.indices.len())
            .field("weight", &format_rational(&self.weight))
            .finish()
    }
}

impl MeasuredSubgroup {
    /// Closure of `gens` in `G x G^` with the given per-point weight.
    pub fn from_generators(
        group: &FiniteAbelianGroup,
        gens: &[TFPoint],
        weight: Rational,
    ) -> Result<Self> {
        let idx = gens
            .iter()
            .map(|g| group.tf_index(g))
            .collect::<Result<Vec<_>>>()?;
        Self::from_generator_indices(group, &idx, weight)
    }

    pub(crate) fn from_generator_indices(
        group: &FiniteAbelianGroup,
        gens: &[usize],
        weight: Rational,
    ) -> Result<Self> {
        check_weight(&weight)?;
        if group.order() == 0 {
            return Err(Error::structural("empty ambient group"));
        }
        let mut generators: Vec<usize> = gens.iter().copied().filter(|&g| g != 0).collect();
        generators.sort_unstable();
        generators.dedup();
        let indices = closure(group, &generators);
        let out = Self {
            group: group.clone(),
            indices,
            generators,
            weight,
        };
        out.size()?;
        Ok(out)
    }

    /// The whole plane `G x G^`.
    pub fn full_plane(group: &FiniteAbelianGroup, weight: Rational) -> Result<Self> {
        let gens: Vec<usize> = (0..group.rank())
            .flat_map(|j| {
                let mut e = vec![0u32; group.rank()];
                e[j] = 1;
                let i = group.index_of_digits(&e);
                [group.tf_join(i, 0), group.tf_join(0, i)]
            })
            .collect();
        Self::from_generator_indices(group, &gens, weight)
    }

    pub fn trivial(group: &FiniteAbelianGroup, weight: Rational) -> Result<Self> {
        Self::from_generator_indices(group, &[], weight)
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    /// Sorted plane indices of the elements.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn generator_indices(&self) -> &[usize] {
        &self.generators
    }

    /// Elements in lexicographic order.
    pub fn elements(&self) -> Vec<TFPoint> {
        self.indices.iter().map(|&p| self.group.tf_point_at(p)).collect()
    }

    pub fn generators(&self) -> Vec<TFPoint> {
        self.generators.iter().map(|&p| self.group.tf_point_at(p)).collect()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn weight(&self) -> Rational {
        self.weight
    }

    pub fn weight_f64(&self) -> f64 {
        rational_to_f64(&self.weight)
    }

    /// Position of a plane index within the element list.
    pub(crate) fn position(&self, p: usize) -> Option<usize> {
        self.indices.binary_search(&p).ok()
    }

    pub fn contains(&self, z: &TFPoint) -> bool {
        self.group
            .tf_index(z)
            .map(|p| self.position(p).is_some())
            .unwrap_or(false)
    }

    /// `s(Delta) = |G| / (weight * |Delta|)`: the mass of the quotient plane.
    pub fn size(&self) -> Result<Rational> {
        let num = self.group.order() as i128 * *self.weight.denom() as i128;
        let den = self.indices.len() as i128 * *self.weight.numer() as i128;
        rational_from_i128(num, den)
    }

    pub fn size_f64(&self) -> f64 {
        self.group.order() as f64 / (self.weight_f64() * self.indices.len() as f64)
    }

    /// Same element set with a different weight.
    pub fn with_weight(&self, weight: Rational) -> Result<Self> {
        check_weight(&weight)?;
        let out = Self {
            weight,
            ..self.clone()
        };
        out.size()?;
        Ok(out)
    }

    pub fn same_domain(&self, other: &Self) -> bool {
        self == other
    }

    /// The adjoint subgroup: all plane points whose shifts commute with every shift in `self`,
    /// weighted by `1 / s(self)`.
    pub fn adjoint(&self) -> Result<Self> {
        let plane = self.group.plane_order();
        let indices: Vec<usize> = (0..plane)
            .filter(|&q| self.generators.iter().all(|&p| self.group.tf_commute_idx(p, q)))
            .collect();
        let generators = reduce_generators(&self.group, &indices);
        let weight = self.size()?.recip();
        Ok(Self {
            group: self.group.clone(),
            indices,
            generators,
            weight,
        })
    }
}

fn check_weight(w: &Rational) -> Result<()> {
    if *w.numer() <= 0 {
        return Err(Error::structural("subgroup weight must be positive"));
    }
    Ok(())
}

fn rational_from_i128(num: i128, den: i128) -> Result<Rational> {
    let g = num.gcd(&den);
    let (n, d) = (num / g, den / g);
    match (i64::try_from(n), i64::try_from(d)) {
        (Ok(n), Ok(d)) => Ok(Rational::new(n, d)),
        _ => Err(Error::structural("rational overflow in size computation")),
    }
}

/// Convenience wrapper matching the free-function form.
pub fn subgroup_from_generators(
    group: &FiniteAbelianGroup,
    gens: &[TFPoint],
    weight: Rational,
) -> Result<MeasuredSubgroup> {
    MeasuredSubgroup::from_generators(group, gens, weight)
}

pub fn adjoint_subgroup(delta: &MeasuredSubgroup) -> Result<MeasuredSubgroup> {
    delta.adjoint()
}

/// Every subgroup of `G x G^`, each with the given weight, in a deterministic order
/// (by order, then lexicographically by element list).
pub fn all_subgroups(group: &FiniteAbelianGroup, weight: Rational) -> Result<Vec<MeasuredSubgroup>> {
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut found: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    let mut queue: VecDeque<(Vec<usize>, Vec<usize>)> = VecDeque::new();
    let trivial = vec![0usize];
    seen.insert(trivial.clone());
    queue.push_back((Vec::new(), trivial));
    while let Some((gens, elems)) = queue.pop_front() {
        for q in 0..group.plane_order() {
            if elems.binary_search(&q).is_ok() {
                continue;
            }
            let mut g2 = gens.clone();
            g2.push(q);
            let e2 = closure(group, &g2);
            if seen.insert(e2.clone()) {
                queue.push_back((g2, e2));
            }
        }
        found.push((gens, elems));
    }
    found.sort_by(|a, b| a.1.len().cmp(&b.1.len()).then_with(|| a.1.cmp(&b.1)));
    found
        .into_iter()
        .map(|(gens, _)| MeasuredSubgroup::from_generator_indices(group, &gens, weight))
        .collect()
}

/// Haar measure conventions on a finite group.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureTable {
    /// Per-point mass on `G` (counting).
    pub group_weight: Rational,
    /// Per-point mass on `G^` (dual measure, `1/|G|`).
    pub dual_weight: Rational,
    /// Per-point mass on `G x G^` (product measure).
    pub plane_weight: Rational,
    /// Default per-point mass on user-built subgroups (counting).
    pub subgroup_weight: Rational,
    group_order: usize,
}

impl MeasureTable {
    /// Total mass of `G x G^`; equals `|G|`.
    pub fn plane_mass(&self) -> Rational {
        let n = self.group_order as i64;
        self.plane_weight * Rational::from_integer(n * n)
    }
}

pub fn default_measures(group: &FiniteAbelianGroup) -> MeasureTable {
    let n = group.order() as i64;
    MeasureTable {
        group_weight: Rational::from_integer(1),
        dual_weight: Rational::new(1, n),
        plane_weight: Rational::new(1, n),
        subgroup_weight: Rational::from_integer(1),
        group_order: group.order(),
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Always `p/q`, including `q = 1`.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `p/q` or a bare integer `p`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = |m: &str| Error::parse("rational", format!("{m}: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: i64 = n.parse().map_err(|_| bad("bad numerator"))?;
    let d: i64 = d.parse().map_err(|_| bad("bad denominator"))?;
    if d == 0 {
        return Err(bad("zero denominator"));
    }
    Ok(Rational::new(n, d))
}
