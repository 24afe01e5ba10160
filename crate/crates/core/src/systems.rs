//! Trigonometric orthonormal systems on the circle, their conjugates and
//! tensor products, and the equispaced grids on which they are sampled.
//!
//! All systems are orthonormal for the normalized measure `dt/2π` on
//! `(−π, π]`. On an `N`-point grid the trapezoid rule integrates every
//! trigonometric polynomial of degree `< N` exactly, so a system of maximal
//! frequency `n` is discretely orthonormal as soon as `N ≥ 2n + 1`.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::spaces::Scalar;

/// `N` equispaced nodes `t_j = −π + 2πj/N` carrying the weight `1/N` each.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadratureGrid {
    nodes: usize,
}

impl QuadratureGrid {
    pub fn new(nodes: usize) -> Result<Self> {
        if nodes == 0 {
            return Err(Error::Config("a grid needs at least one node".into()));
        }
        Ok(QuadratureGrid { nodes })
    }

    /// `max(256, 8(n + 1))` nodes: oversampled so that quadrature of `‖·‖²`
    /// for non-Euclidean norms stays accurate.
    pub fn default_for(max_frequency: usize) -> Self {
        QuadratureGrid {
            nodes: 256.max(8 * (max_frequency + 1)),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes
    }

    pub fn is_empty(&self) -> bool {
        self.nodes == 0
    }

    pub fn weight(&self) -> f64 {
        1.0 / self.nodes as f64
    }

    #[inline]
    pub fn node(&self, j: usize) -> f64 {
        -PI + 2.0 * PI * j as f64 / self.nodes as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.nodes).map(|j| self.node(j))
    }

    /// The grid with twice as many nodes, used for doubling checks.
    pub fn doubled(&self) -> Self {
        QuadratureGrid {
            nodes: 2 * self.nodes,
        }
    }

    /// Largest frequency `k` with `2k < N`, i.e. resolved without aliasing.
    pub fn nyquist(&self) -> usize {
        (self.nodes - 1) / 2
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TrigSystem {
    /// `(e_lo, …, e_hi)` with `e_k(t) = exp(ikt)`.
    Exponential { lo: i64, hi: i64 },
    /// `(c_1, …, c_n)` with `c_k(t) = √2 cos kt`.
    Cosine(usize),
    /// `(s_1, …, s_n)` with `s_k(t) = √2 sin kt`.
    Sine(usize),
    Conjugate(Box<TrigSystem>),
}

impl TrigSystem {
    pub fn exponential(n: usize) -> Self {
        TrigSystem::Exponential { lo: 1, hi: n as i64 }
    }

    pub fn exponential_range(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::Config(format!("empty frequency range {lo}..{hi}")));
        }
        Ok(TrigSystem::Exponential { lo, hi })
    }

    pub fn cosine(n: usize) -> Self {
        TrigSystem::Cosine(n)
    }

    pub fn sine(n: usize) -> Self {
        TrigSystem::Sine(n)
    }

    /// The complex conjugate system. Real systems are their own conjugate.
    pub fn conj(&self) -> Self {
        match self {
            TrigSystem::Cosine(_) | TrigSystem::Sine(_) => self.clone(),
            TrigSystem::Conjugate(inner) => (**inner).clone(),
            other => TrigSystem::Conjugate(Box::new(other.clone())),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            TrigSystem::Exponential { lo, hi } => (hi - lo + 1) as usize,
            TrigSystem::Cosine(n) | TrigSystem::Sine(n) => *n,
            TrigSystem::Conjugate(inner) => inner.size(),
        }
    }

    pub fn max_frequency(&self) -> usize {
        match self {
            TrigSystem::Exponential { lo, hi } => lo.unsigned_abs().max(hi.unsigned_abs()) as usize,
            TrigSystem::Cosine(n) | TrigSystem::Sine(n) => *n,
            TrigSystem::Conjugate(inner) => inner.max_frequency(),
        }
    }

    pub fn is_real(&self) -> bool {
        match self {
            TrigSystem::Cosine(_) | TrigSystem::Sine(_) => true,
            TrigSystem::Exponential { lo, hi } => *lo == 0 && *hi == 0,
            TrigSystem::Conjugate(inner) => inner.is_real(),
        }
    }

    /// Member `i` (zero-based) at `t`; no range check.
    #[inline]
    pub(crate) fn value(&self, i: usize, t: f64) -> Scalar {
        match self {
            TrigSystem::Exponential { lo, .. } => {
                let k = (*lo + i as i64) as f64;
                Scalar::new((k * t).cos(), (k * t).sin())
            }
            TrigSystem::Cosine(_) => Scalar::new(SQRT_2 * ((i + 1) as f64 * t).cos(), 0.0),
            TrigSystem::Sine(_) => Scalar::new(SQRT_2 * ((i + 1) as f64 * t).sin(), 0.0),
            TrigSystem::Conjugate(inner) => inner.value(i, t).conj(),
        }
    }

    /// Member `k` (one-based, `1 ≤ k ≤ size`) at `t`.
    pub fn evaluate(&self, k: usize, t: f64) -> Result<Scalar> {
        if k == 0 || k > self.size() {
            return Err(Error::MemberIndex {
                index: k,
                size: self.size(),
            });
        }
        Ok(self.value(k - 1, t))
    }
}

impl fmt::Display for TrigSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrigSystem::Exponential { lo: 1, hi } => write!(f, "E:{hi}"),
            TrigSystem::Exponential { lo, hi } => write!(f, "Erange:{lo}..{hi}"),
            TrigSystem::Cosine(n) => write!(f, "C:{n}"),
            TrigSystem::Sine(n) => write!(f, "S:{n}"),
            TrigSystem::Conjugate(inner) => match &**inner {
                TrigSystem::Exponential { lo: 1, hi } => write!(f, "Ebar:{hi}"),
                TrigSystem::Exponential { lo, hi } => write!(f, "Ebar:{lo}..{hi}"),
                other => write!(f, "conj({other})"),
            },
        }
    }
}

/// The system `(a_k ⊗ b_k)` on the torus, `(s, t) ↦ a_k(s) b_k(t)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TensorSystem {
    left: TrigSystem,
    right: TrigSystem,
}

impl TensorSystem {
    pub fn left(&self) -> &TrigSystem {
        &self.left
    }

    pub fn right(&self) -> &TrigSystem {
        &self.right
    }

    pub fn size(&self) -> usize {
        self.left.size()
    }

    pub fn swap(&self) -> Self {
        TensorSystem {
            left: self.right.clone(),
            right: self.left.clone(),
        }
    }

    pub fn evaluate(&self, k: usize, s: f64, t: f64) -> Result<Scalar> {
        Ok(self.left.evaluate(k, s)? * self.right.evaluate(k, t)?)
    }
}

pub fn tensor(left: &TrigSystem, right: &TrigSystem) -> Result<TensorSystem> {
    if left.size() != right.size() {
        return Err(Error::TensorSize {
            left: left.size(),
            right: right.size(),
        });
    }
    Ok(TensorSystem {
        left: left.clone(),
        right: right.clone(),
    })
}

/// Either a system on the circle or a tensor system on the torus.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum System {
    Trig(TrigSystem),
    Tensor(TensorSystem),
}

impl From<TrigSystem> for System {
    fn from(s: TrigSystem) -> Self {
        System::Trig(s)
    }
}

impl From<TensorSystem> for System {
    fn from(s: TensorSystem) -> Self {
        System::Tensor(s)
    }
}

impl System {
    pub fn size(&self) -> usize {
        match self {
            System::Trig(s) => s.size(),
            System::Tensor(s) => s.size(),
        }
    }

    pub fn max_frequency(&self) -> usize {
        match self {
            System::Trig(s) => s.max_frequency(),
            System::Tensor(s) => s.left.max_frequency().max(s.right.max_frequency()),
        }
    }

    pub fn is_real(&self) -> bool {
        match self {
            System::Trig(s) => s.is_real(),
            System::Tensor(s) => s.left.is_real() && s.right.is_real(),
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            System::Trig(s) => System::Trig(s.conj()),
            System::Tensor(s) => System::Tensor(TensorSystem {
                left: s.left.conj(),
                right: s.right.conj(),
            }),
        }
    }

    /// Member `k` at a point of the circle or, for tensor systems, of the torus.
    pub fn evaluate(&self, k: usize, point: Point) -> Result<Scalar> {
        match (self, point) {
            (System::Trig(s), Point::Circle(t)) => s.evaluate(k, t),
            (System::Tensor(s), Point::Torus(a, b)) => s.evaluate(k, a, b),
            _ => Err(Error::Config(
                "point does not match the system's domain".into(),
            )),
        }
    }

    pub fn domain(&self, grid: QuadratureGrid) -> Domain {
        match self {
            System::Trig(_) => Domain::Circle(grid),
            System::Tensor(_) => Domain::Torus(grid, grid),
        }
    }

    /// Fails when some member frequency is not resolved by the grid.
    pub fn check_resolved(&self, grid: &QuadratureGrid) -> Result<()> {
        let f = self.max_frequency();
        if 2 * f >= grid.len() {
            return Err(Error::Aliasing {
                frequency: f,
                nodes: grid.len(),
            });
        }
        Ok(())
    }

    /// Samples every member on the system's domain over `grid`.
    pub fn sample(&self, grid: QuadratureGrid) -> SampledSystem {
        let size = self.size();
        let domain = self.domain(grid);
        let m = domain.len();
        let mut values = Vec::with_capacity(m * size);
        match self {
            System::Trig(s) => {
                for t in grid.nodes() {
                    values.extend((0..size).map(|i| s.value(i, t)));
                }
            }
            System::Tensor(s) => {
                let left: Vec<Vec<Scalar>> =
                    grid.nodes().map(|t| (0..size).map(|i| s.left.value(i, t)).collect()).collect();
                let right: Vec<Vec<Scalar>> =
                    grid.nodes().map(|t| (0..size).map(|i| s.right.value(i, t)).collect()).collect();
                for l in &left {
                    for r in &right {
                        values.extend(l.iter().zip(r).map(|(a, b)| a * b));
                    }
                }
            }
        }
        SampledSystem {
            size,
            nodes: m,
            weight: domain.weight(),
            real: self.is_real(),
            values,
        }
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            System::Trig(s) => write!(f, "{s}"),
            System::Tensor(t) => {
                let tag = |s: &TrigSystem| match s {
                    TrigSystem::Exponential { lo: 1, .. } => Some("E"),
                    TrigSystem::Cosine(_) => Some("C"),
                    TrigSystem::Sine(_) => Some("S"),
                    TrigSystem::Conjugate(inner)
                        if matches!(**inner, TrigSystem::Exponential { lo: 1, .. }) =>
                    {
                        Some("Ebar")
                    }
                    _ => None,
                };
                match (tag(&t.left), tag(&t.right)) {
                    (Some(a), Some(b)) => write!(f, "{a}x{b}:{}", t.size()),
                    _ => write!(f, "({})x({})", t.left, t.right),
                }
            }
        }
    }
}

fn parse_usize(s: &str, position: usize) -> Result<usize> {
    s.parse::<usize>()
        .map_err(|_| Error::parse(position, format!("bad size `{s}`")))
        .and_then(|n| {
            if n == 0 {
                Err(Error::parse(position, "size must be positive"))
            } else {
                Ok(n)
            }
        })
}

fn parse_range(s: &str, position: usize) -> Result<(i64, i64)> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| Error::parse(position, format!("expected `lo..hi`, got `{s}`")))?;
    let lo = a
        .parse::<i64>()
        .map_err(|_| Error::parse(position, format!("bad bound `{a}`")))?;
    let hi = b
        .parse::<i64>()
        .map_err(|_| Error::parse(position + a.len() + 2, format!("bad bound `{b}`")))?;
    if lo > hi {
        return Err(Error::parse(position, format!("empty range `{s}`")));
    }
    Ok((lo, hi))
}

fn named_system(tag: &str, n: usize) -> Option<TrigSystem> {
    match tag {
        "E" => Some(TrigSystem::exponential(n)),
        "C" => Some(TrigSystem::cosine(n)),
        "S" => Some(TrigSystem::sine(n)),
        "Ebar" => Some(TrigSystem::exponential(n).conj()),
        _ => None,
    }
}

/// Parses `E:n`, `C:n`, `S:n`, `Ebar:n`, `Erange:lo..hi`, `Ebar:lo..hi`
/// and tensor literals `AxB:n` with `A, B ∈ {E, Ebar, C, S}`.
impl FromStr for System {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::parse(0, format!("expected `<system>:<size>` in `{s}`")))?;
        let pos = head.len() + 1;
        if head == "Erange" {
            let (lo, hi) = parse_range(rest, pos)?;
            return Ok(TrigSystem::exponential_range(lo, hi)?.into());
        }
        if head == "Ebar" && rest.contains("..") {
            let (lo, hi) = parse_range(rest, pos)?;
            return Ok(TrigSystem::exponential_range(lo, hi)?.conj().into());
        }
        let n = parse_usize(rest, pos)?;
        if let Some(sys) = named_system(head, n) {
            return Ok(sys.into());
        }
        if let Some((a, b)) = head.split_once('x') {
            let left = named_system(a, n)
                .ok_or_else(|| Error::parse(0, format!("unknown system `{a}`")))?;
            let right = named_system(b, n)
                .ok_or_else(|| Error::parse(a.len() + 1, format!("unknown system `{b}`")))?;
            return Ok(tensor(&left, &right)?.into());
        }
        Err(Error::parse(0, format!("unknown system `{head}`")))
    }
}

impl Serialize for System {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for System {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Point {
    Circle(f64),
    Torus(f64, f64),
}

/// The sampling nodes of a grid function: a circle grid or a product grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    Circle(QuadratureGrid),
    Torus(QuadratureGrid, QuadratureGrid),
}

impl Domain {
    pub fn len(&self) -> usize {
        match self {
            Domain::Circle(g) => g.len(),
            Domain::Torus(a, b) => a.len() * b.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn weight(&self) -> f64 {
        1.0 / self.len() as f64
    }

    /// Node `m`; product nodes are ordered with the second coordinate fastest.
    pub fn point(&self, m: usize) -> Point {
        match self {
            Domain::Circle(g) => Point::Circle(g.node(m)),
            Domain::Torus(a, b) => Point::Torus(a.node(m / b.len()), b.node(m % b.len())),
        }
    }

    pub fn circle_grid(&self) -> Option<QuadratureGrid> {
        match self {
            Domain::Circle(g) => Some(*g),
            Domain::Torus(..) => None,
        }
    }

    pub fn doubled(&self) -> Domain {
        match self {
            Domain::Circle(g) => Domain::Circle(g.doubled()),
            Domain::Torus(a, b) => Domain::Torus(a.doubled(), b.doubled()),
        }
    }
}

/// Member values on every node, node-major: `values[m * size + k]`.
#[derive(Clone, Debug)]
pub struct SampledSystem {
    pub(crate) size: usize,
    pub(crate) nodes: usize,
    pub(crate) weight: f64,
    pub(crate) real: bool,
    pub(crate) values: Vec<Scalar>,
}

impl SampledSystem {
    #[inline]
    pub(crate) fn row(&self, m: usize) -> &[Scalar] {
        &self.values[m * self.size..(m + 1) * self.size]
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }
}

/// Largest entrywise deviation of the discrete Gram matrix from the identity.
pub fn gram_deviation(system: &System, grid: QuadratureGrid) -> f64 {
    let sampled = system.sample(grid);
    let n = sampled.size;
    let mut gram = vec![Scalar::new(0.0, 0.0); n * n];
    for m in 0..sampled.nodes {
        let row = sampled.row(m);
        for j in 0..n {
            for k in 0..n {
                gram[j * n + k] += row[j] * row[k].conj();
            }
        }
    }
    let mut dev: f64 = 0.0;
    for j in 0..n {
        for k in 0..n {
            let target = if j == k { 1.0 } else { 0.0 };
            let g = gram[j * n + k] * sampled.weight;
            dev = dev.max((g - target).norm());
        }
    }
    dev
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Scalar, b: Scalar) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn evaluate_examples() {
        let c = TrigSystem::cosine(3);
        assert!(close(c.evaluate(1, 0.0).unwrap(), Scalar::new(SQRT_2, 0.0)));
        let s = TrigSystem::sine(3);
        assert!(close(s.evaluate(2, PI / 4.0).unwrap(), Scalar::new(SQRT_2, 0.0)));
        let e = TrigSystem::exponential(3);
        assert!(close(e.evaluate(2, PI / 2.0).unwrap(), Scalar::new(-1.0, 0.0)));
        assert_eq!(
            e.evaluate(4, 0.0).unwrap_err(),
            Error::MemberIndex { index: 4, size: 3 }
        );
        assert!(e.evaluate(0, 0.0).unwrap_err().to_string().contains("member index"));
    }

    #[test]
    fn gram_examples() {
        assert!(gram_deviation(&TrigSystem::exponential(8).into(), QuadratureGrid::new(17).unwrap()) < 1e-12);
        assert!(gram_deviation(&TrigSystem::cosine(4).into(), QuadratureGrid::new(9).unwrap()) < 1e-12);
        // e_1..e_8 differ by at most 7, so 8 nodes still separate them
        assert!(gram_deviation(&TrigSystem::exponential(8).into(), QuadratureGrid::new(8).unwrap()) < 1e-12);
        let with_zero = TrigSystem::exponential_range(0, 8).unwrap();
        assert!(gram_deviation(&with_zero.into(), QuadratureGrid::new(8).unwrap()) >= 0.5);
    }

    #[test]
    fn tensor_examples() {
        let t = tensor(&TrigSystem::sine(3), &TrigSystem::cosine(3)).unwrap();
        assert!(t.evaluate(2, PI / 2.0, 0.0).unwrap().norm() < 1e-12);
        let ss = tensor(&TrigSystem::sine(2), &TrigSystem::sine(2)).unwrap();
        assert!(gram_deviation(&ss.into(), QuadratureGrid::new(5).unwrap()) < 1e-12);
        assert_eq!(
            tensor(&TrigSystem::sine(2), &TrigSystem::cosine(3)).unwrap_err(),
            Error::TensorSize { left: 2, right: 3 }
        );
    }

    #[test]
    fn conjugation() {
        let e = TrigSystem::exponential_range(-3, 4).unwrap();
        let cc = TrigSystem::Conjugate(Box::new(TrigSystem::Conjugate(Box::new(e.clone()))));
        for k in 1..=e.size() {
            for t in [-2.0, 0.3, 1.7] {
                assert_eq!(cc.evaluate(k, t).unwrap(), e.evaluate(k, t).unwrap());
                assert_eq!(e.conj().evaluate(k, t).unwrap(), e.evaluate(k, t).unwrap().conj());
            }
        }
        assert_eq!(e.conj().conj(), e);
        assert_eq!(TrigSystem::cosine(3).conj(), TrigSystem::cosine(3));
    }

    #[test]
    fn literals() {
        for lit in ["E:4", "C:8", "S:2", "Ebar:3", "Erange:-2..5", "SxC:3", "ExEbar:2"] {
            let s: System = lit.parse().unwrap();
            assert_eq!(s.to_string(), lit);
        }
        assert_eq!(
            "Erange:-2..2".parse::<System>().unwrap().size(),
            5
        );
        assert!("Q:3".parse::<System>().is_err());
        assert!("E:0".parse::<System>().is_err());
    }

    #[test]
    fn grid_is_symmetric_under_reflection() {
        let g = QuadratureGrid::new(10).unwrap();
        for j in 0..10 {
            let t = -g.node(j);
            let mirrored = g.node((10 - j) % 10);
            assert!(((t - mirrored) / (2.0 * PI)).round() * 2.0 * PI - (t - mirrored) < 1e-12);
        }
    }
}
