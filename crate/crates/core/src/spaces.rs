//! Finite-dimensional normed spaces, their duals, and matrices acting between them.
//!
//! Vectors are slices of complex scalars. A space over the real field simply
//! keeps every imaginary part at zero; the optimizers respect that by only
//! moving along real directions.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Scalar = Complex64;

/// Sesquilinear pairing `Σ x_i conj(y_i)`.
pub fn pairing(x: &[Scalar], y: &[Scalar]) -> Scalar {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

/// Sign of a complex number, with `sign(0) = +1`.
#[inline]
fn unit_phase(z: Scalar) -> Scalar {
    let r = z.norm();
    if r == 0.0 {
        Scalar::new(1.0, 0.0)
    } else {
        z / r
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

type NormFn = dyn Fn(&[Scalar]) -> f64 + Send + Sync;
type SubgradientFn = dyn Fn(&[Scalar]) -> Vec<Scalar> + Send + Sync;

/// A caller-supplied norm. The dual has to be provided explicitly when it is needed.
#[derive(Clone)]
pub struct CustomNorm {
    pub name: String,
    norm: Arc<NormFn>,
    subgradient: Arc<SubgradientFn>,
    dual: Option<Arc<NormedSpace>>,
}

impl CustomNorm {
    pub fn new(
        name: impl Into<String>,
        norm: impl Fn(&[Scalar]) -> f64 + Send + Sync + 'static,
        subgradient: impl Fn(&[Scalar]) -> Vec<Scalar> + Send + Sync + 'static,
    ) -> Self {
        CustomNorm {
            name: name.into(),
            norm: Arc::new(norm),
            subgradient: Arc::new(subgradient),
            dual: None,
        }
    }

    pub fn with_dual(mut self, dual: NormedSpace) -> Self {
        self.dual = Some(Arc::new(dual));
        self
    }
}

impl fmt::Debug for CustomNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomNorm")
            .field("name", &self.name)
            .field("has_dual", &self.dual.is_some())
            .finish()
    }
}

#[derive(Clone, Debug)]
pub enum NormKind {
    /// `p ∈ [1, ∞]`; `f64::INFINITY` is the max norm.
    Lp(f64),
    /// `‖x‖ = (Σ |w_i x_i|^p)^{1/p}`.
    WeightedLp { p: f64, weights: Vec<f64> },
    Custom(CustomNorm),
}

#[derive(Clone, Debug)]
pub struct NormedSpace {
    dim: usize,
    field: Field,
    kind: NormKind,
}

fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidSpace(format!("exponent {p} is not in [1, inf]")));
    }
    Ok(())
}

/// Conjugate exponent `p/(p-1)`, with `1 ↔ ∞`.
pub fn conjugate_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

fn lp_norm<I: Iterator<Item = f64> + Clone>(moduli: I, p: f64) -> f64 {
    if p == 1.0 {
        moduli.sum()
    } else if p == 2.0 {
        // scaled to avoid overflow on large entries
        let m = moduli.clone().fold(0.0, f64::max);
        if m == 0.0 {
            return 0.0;
        }
        m * moduli.map(|a| (a / m) * (a / m)).sum::<f64>().sqrt()
    } else if p.is_infinite() {
        moduli.fold(0.0, f64::max)
    } else {
        let m = moduli.clone().fold(0.0, f64::max);
        if m == 0.0 {
            return 0.0;
        }
        m * moduli.map(|a| (a / m).powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

/// Subgradient of the plain ℓ_p norm at a nonzero vector.
fn lp_subgradient(x: &[Scalar], p: f64, norm: f64) -> Vec<Scalar> {
    if p == 1.0 {
        x.iter().map(|&z| unit_phase(z)).collect()
    } else if p.is_infinite() {
        let mut best = 0;
        let mut best_mod = -1.0;
        for (i, z) in x.iter().enumerate() {
            let a = z.norm();
            if a > best_mod {
                best = i;
                best_mod = a;
            }
        }
        let mut g = vec![Scalar::new(0.0, 0.0); x.len()];
        g[best] = unit_phase(x[best]);
        g
    } else if p == 2.0 {
        x.iter().map(|z| z / norm).collect()
    } else {
        x.iter()
            .map(|&z| {
                let a = z.norm();
                if a == 0.0 {
                    Scalar::new(0.0, 0.0)
                } else {
                    unit_phase(z) * (a / norm).powf(p - 1.0)
                }
            })
            .collect()
    }
}

impl NormedSpace {
    /// Complex ℓ_p^dim.
    pub fn lp(p: f64, dim: usize) -> Result<Self> {
        check_exponent(p)?;
        if dim == 0 {
            return Err(Error::InvalidSpace("dimension must be positive".into()));
        }
        Ok(NormedSpace {
            dim,
            field: Field::Complex,
            kind: NormKind::Lp(p),
        })
    }

    pub fn l1(dim: usize) -> Self {
        Self::lp(1.0, dim).expect("positive dimension")
    }

    pub fn l2(dim: usize) -> Self {
        Self::lp(2.0, dim).expect("positive dimension")
    }

    pub fn linf(dim: usize) -> Self {
        Self::lp(f64::INFINITY, dim).expect("positive dimension")
    }

    pub fn weighted_lp(p: f64, weights: Vec<f64>) -> Result<Self> {
        check_exponent(p)?;
        if weights.is_empty() {
            return Err(Error::InvalidSpace("dimension must be positive".into()));
        }
        if weights.iter().any(|&w| w.is_nan() || w <= 0.0 || !w.is_finite()) {
            return Err(Error::InvalidSpace("weights must be positive and finite".into()));
        }
        Ok(NormedSpace {
            dim: weights.len(),
            field: Field::Complex,
            kind: NormKind::WeightedLp { p, weights },
        })
    }

    pub fn custom(dim: usize, norm: CustomNorm) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidSpace("dimension must be positive".into()));
        }
        if let Some(d) = &norm.dual {
            if d.dim != dim {
                return Err(Error::InvalidSpace("dual has a different dimension".into()));
            }
        }
        Ok(NormedSpace {
            dim,
            field: Field::Complex,
            kind: NormKind::Custom(norm),
        })
    }

    pub fn with_field(mut self, field: Field) -> Self {
        self.field = field;
        self
    }

    pub fn real(self) -> Self {
        self.with_field(Field::Real)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_real(&self) -> bool {
        self.field == Field::Real
    }

    pub fn kind(&self) -> &NormKind {
        &self.kind
    }

    fn check_dim(&self, x: &[Scalar]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(())
    }

    pub fn norm(&self, x: &[Scalar]) -> Result<f64> {
        self.check_dim(x)?;
        Ok(self.norm_of(x))
    }

    /// Norm without the dimension check; used in inner loops.
    #[inline]
    pub(crate) fn norm_of(&self, x: &[Scalar]) -> f64 {
        match &self.kind {
            NormKind::Lp(p) => lp_norm(x.iter().map(|z| z.norm()), *p),
            NormKind::WeightedLp { p, weights } => {
                lp_norm(x.iter().zip(weights).map(|(z, w)| w * z.norm()), *p)
            }
            NormKind::Custom(c) => (c.norm)(x),
        }
    }

    /// A dual vector `x'` with `Re⟨x, x'⟩ = ‖x‖` and dual norm one.
    ///
    /// Ties in ℓ_∞ go to the lowest index and zero coordinates in ℓ_1 take
    /// the value `+1`, so the result is deterministic.
    pub fn norm_subgradient(&self, x: &[Scalar]) -> Result<Vec<Scalar>> {
        self.check_dim(x)?;
        let n = self.norm_of(x);
        if n == 0.0 {
            return Err(Error::SubgradientAtZero);
        }
        Ok(self.subgradient_of(x, n))
    }

    /// Subgradient at a nonzero `x` whose norm `n` is already known.
    pub(crate) fn subgradient_of(&self, x: &[Scalar], n: f64) -> Vec<Scalar> {
        match &self.kind {
            NormKind::Lp(p) => lp_subgradient(x, *p, n),
            NormKind::WeightedLp { p, weights } => {
                let wx: Vec<Scalar> = x.iter().zip(weights).map(|(z, w)| z * *w).collect();
                let mut g = lp_subgradient(&wx, *p, n);
                for (gi, w) in g.iter_mut().zip(weights) {
                    *gi *= *w;
                }
                g
            }
            NormKind::Custom(c) => (c.subgradient)(x),
        }
    }

    pub fn dual(&self) -> Result<NormedSpace> {
        let kind = match &self.kind {
            NormKind::Lp(p) => NormKind::Lp(conjugate_exponent(*p)),
            NormKind::WeightedLp { p, weights } => NormKind::WeightedLp {
                p: conjugate_exponent(*p),
                weights: weights.iter().map(|w| 1.0 / w).collect(),
            },
            NormKind::Custom(c) => match &c.dual {
                Some(d) => return Ok((**d).clone().with_field(self.field)),
                None => return Err(Error::NoDual(c.name.clone())),
            },
        };
        Ok(NormedSpace {
            dim: self.dim,
            field: self.field,
            kind,
        })
    }

    /// Weights `w` such that `‖x‖ = ‖(w_i x_i)‖_2`, when the norm is Euclidean up to scaling.
    ///
    /// One-dimensional ℓ_p spaces qualify for every `p`.
    pub fn hilbert_weights(&self) -> Option<Vec<f64>> {
        match &self.kind {
            NormKind::Lp(p) if *p == 2.0 || self.dim == 1 => Some(vec![1.0; self.dim]),
            NormKind::WeightedLp { p, weights } if *p == 2.0 || self.dim == 1 => {
                Some(weights.clone())
            }
            _ => None,
        }
    }

    pub fn is_hilbert(&self) -> bool {
        self.hilbert_weights().is_some()
    }

    /// Exponent of an ℓ_p or weighted ℓ_p norm.
    pub fn exponent(&self) -> Option<f64> {
        match &self.kind {
            NormKind::Lp(p) | NormKind::WeightedLp { p, .. } => Some(*p),
            NormKind::Custom(_) => None,
        }
    }

    /// Evaluates the norm on two spaces for equality of their definitions.
    pub fn same_norm(&self, other: &NormedSpace) -> bool {
        if self.dim != other.dim || self.field != other.field {
            return false;
        }
        match (&self.kind, &other.kind) {
            (NormKind::Lp(a), NormKind::Lp(b)) => a == b,
            (
                NormKind::WeightedLp { p: a, weights: u },
                NormKind::WeightedLp { p: b, weights: v },
            ) => a == b && u == v,
            (NormKind::Custom(a), NormKind::Custom(b)) => Arc::ptr_eq(&a.norm, &b.norm),
            _ => false,
        }
    }
}

impl PartialEq for NormedSpace {
    fn eq(&self, other: &Self) -> bool {
        self.same_norm(other)
    }
}

fn fmt_exponent(p: f64) -> String {
    if p.is_infinite() {
        "inf".to_string()
    } else {
        format!("{p}")
    }
}

impl fmt::Display for NormedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            NormKind::Lp(p) => write!(f, "l{}:{}", fmt_exponent(*p), self.dim)?,
            NormKind::WeightedLp { p, weights } => {
                let w: Vec<String> = weights.iter().map(|w| format!("{w}")).collect();
                write!(f, "wlp:p={},w={}", fmt_exponent(*p), w.join(";"))?
            }
            NormKind::Custom(c) => write!(f, "custom:{}:{}", c.name, self.dim)?,
        }
        if self.field == Field::Real {
            write!(f, ":real")?;
        }
        Ok(())
    }
}

fn parse_exponent(s: &str, position: usize) -> Result<f64> {
    let p = if s == "inf" {
        f64::INFINITY
    } else {
        s.parse::<f64>()
            .map_err(|_| Error::parse(position, format!("bad exponent `{s}`")))?
    };
    check_exponent(p).map_err(|_| Error::parse(position, format!("exponent `{s}` below 1")))?;
    Ok(p)
}

/// Parses `l1:4`, `l2:8`, `linf:3`, `l3.5:2`, `wlp:p=3,w=1;2;0.5`, each
/// optionally followed by `:real` or `:complex`.
impl FromStr for NormedSpace {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (body, field) = if let Some(b) = s.strip_suffix(":real") {
            (b, Field::Real)
        } else if let Some(b) = s.strip_suffix(":complex") {
            (b, Field::Complex)
        } else {
            (s, Field::Complex)
        };
        let Some(colon) = body.find(':') else {
            return Err(Error::parse(0, format!("expected `<norm>:<params>` in `{s}`")));
        };
        let (head, rest) = (&body[..colon], &body[colon + 1..]);
        let rest_pos = colon + 1;
        let space = if head == "wlp" {
            let mut p = None;
            let mut weights = None;
            let mut offset = rest_pos;
            for part in rest.split(',') {
                if let Some(v) = part.strip_prefix("p=") {
                    p = Some(parse_exponent(v, offset + 2)?);
                } else if let Some(v) = part.strip_prefix("w=") {
                    let mut ws = Vec::new();
                    let mut wpos = offset + 2;
                    for item in v.split(';') {
                        let w = item
                            .parse::<f64>()
                            .map_err(|_| Error::parse(wpos, format!("bad weight `{item}`")))?;
                        ws.push(w);
                        wpos += item.len() + 1;
                    }
                    weights = Some(ws);
                } else {
                    return Err(Error::parse(offset, format!("unknown key in `{part}`")));
                }
                offset += part.len() + 1;
            }
            let p = p.ok_or_else(|| Error::parse(rest_pos, "missing `p=`"))?;
            let weights = weights.ok_or_else(|| Error::parse(rest_pos, "missing `w=`"))?;
            NormedSpace::weighted_lp(p, weights)?
        } else if let Some(exp) = head.strip_prefix('l') {
            let p = parse_exponent(exp, 1)?;
            let dim = rest
                .parse::<usize>()
                .map_err(|_| Error::parse(rest_pos, format!("bad dimension `{rest}`")))?;
            if dim == 0 {
                return Err(Error::parse(rest_pos, "dimension must be positive"));
            }
            NormedSpace::lp(p, dim)?
        } else {
            return Err(Error::parse(0, format!("unknown norm `{head}`")));
        };
        Ok(space.with_field(field))
    }
}

impl Serialize for NormedSpace {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for NormedSpace {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A matrix between two normed spaces.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearOperator {
    domain: NormedSpace,
    codomain: NormedSpace,
    matrix: DMatrix<Scalar>,
}

impl LinearOperator {
    /// `matrix` has `codomain.dim()` rows and `domain.dim()` columns.
    pub fn new(domain: NormedSpace, codomain: NormedSpace, matrix: DMatrix<Scalar>) -> Result<Self> {
        if matrix.nrows() != codomain.dim() || matrix.ncols() != domain.dim() {
            return Err(Error::InvalidOperator(format!(
                "matrix is {}x{}, spaces need {}x{}",
                matrix.nrows(),
                matrix.ncols(),
                codomain.dim(),
                domain.dim()
            )));
        }
        if domain.field() != codomain.field() {
            return Err(Error::InvalidOperator(
                "domain and codomain have different scalar fields".into(),
            ));
        }
        if domain.is_real() && matrix.iter().any(|z| z.im != 0.0) {
            return Err(Error::InvalidOperator(
                "complex entries on a real space".into(),
            ));
        }
        Ok(LinearOperator {
            domain,
            codomain,
            matrix,
        })
    }

    pub fn identity(space: &NormedSpace) -> Self {
        let d = space.dim();
        LinearOperator {
            domain: space.clone(),
            codomain: space.clone(),
            matrix: DMatrix::identity(d, d),
        }
    }

    pub fn domain(&self) -> &NormedSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &NormedSpace {
        &self.codomain
    }

    pub fn matrix(&self) -> &DMatrix<Scalar> {
        &self.matrix
    }

    pub fn apply(&self, x: &[Scalar]) -> Result<Vec<Scalar>> {
        if x.len() != self.domain.dim() {
            return Err(Error::Dimension {
                expected: self.domain.dim(),
                got: x.len(),
            });
        }
        let mut out = vec![Scalar::new(0.0, 0.0); self.codomain.dim()];
        self.apply_into(x, &mut out);
        Ok(out)
    }

    #[inline]
    pub(crate) fn apply_into(&self, x: &[Scalar], out: &mut [Scalar]) {
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = Scalar::new(0.0, 0.0);
            for (j, xj) in x.iter().enumerate() {
                acc += self.matrix[(i, j)] * xj;
            }
            *o = acc;
        }
    }

    /// `out = A^* y` with the conjugate transpose of the matrix.
    #[inline]
    pub(crate) fn apply_adjoint_into(&self, y: &[Scalar], out: &mut [Scalar]) {
        for (j, o) in out.iter_mut().enumerate() {
            let mut acc = Scalar::new(0.0, 0.0);
            for (i, yi) in y.iter().enumerate() {
                acc += self.matrix[(i, j)].conj() * yi;
            }
            *o = acc;
        }
    }

    /// The adjoint `T': Y' → X'`, represented by the conjugate transpose.
    pub fn adjoint(&self) -> Result<LinearOperator> {
        Ok(LinearOperator {
            domain: self.codomain.dual()?,
            codomain: self.domain.dual()?,
            matrix: self.matrix.adjoint(),
        })
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LinearOperator) -> Result<LinearOperator> {
        if inner.codomain.dim() != self.domain.dim() {
            return Err(Error::Dimension {
                expected: self.domain.dim(),
                got: inner.codomain.dim(),
            });
        }
        LinearOperator::new(
            inner.domain.clone(),
            self.codomain.clone(),
            &self.matrix * &inner.matrix,
        )
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().all(|z| *z == Scalar::new(0.0, 0.0))
    }

    /// Largest singular value of `W_Y T W_X^{-1}`, i.e. the operator norm, when
    /// both spaces are (weighted) Euclidean. Returns the top right singular
    /// vector mapped back to the domain as well.
    pub fn hilbert_norm(&self) -> Option<(f64, Vec<Scalar>)> {
        let wx = self.domain.hilbert_weights()?;
        let wy = self.codomain.hilbert_weights()?;
        let (rows, cols) = self.matrix.shape();
        if self.domain.is_real() {
            // real SVD keeps the singular vector real
            let scaled = DMatrix::from_fn(rows, cols, |i, j| self.matrix[(i, j)].re * (wy[i] / wx[j]));
            let svd = scaled.svd(false, true);
            let v_t = svd.v_t.as_ref()?;
            let (idx, sigma) = top_singular(svd.singular_values.iter().copied());
            let v = (0..cols).map(|j| Scalar::new(v_t[(idx, j)] / wx[j], 0.0)).collect();
            return Some((sigma.max(0.0), v));
        }
        let scaled = DMatrix::from_fn(rows, cols, |i, j| self.matrix[(i, j)] * (wy[i] / wx[j]));
        let svd = scaled.svd(false, true);
        let v_t = svd.v_t.as_ref()?;
        let (idx, sigma) = top_singular(svd.singular_values.iter().copied());
        let v: Vec<Scalar> = (0..cols)
            .map(|j| v_t[(idx, j)].conj() / wx[j])
            .collect();
        Some((sigma.max(0.0), v))
    }
}

fn top_singular(values: impl Iterator<Item = f64>) -> (usize, f64) {
    values
        .enumerate()
        .fold((0, -1.0), |acc, (i, s)| if s > acc.1 { (i, s) } else { acc })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Scalar {
        Scalar::new(re, 0.0)
    }

    #[test]
    fn norm_examples() {
        assert_eq!(NormedSpace::l2(2).norm(&[c(3.0), c(4.0)]).unwrap(), 5.0);
        assert_eq!(NormedSpace::l1(2).norm(&[c(3.0), c(-4.0)]).unwrap(), 7.0);
        assert_eq!(
            NormedSpace::linf(3)
                .norm(&[c(1.0), c(-2.0), c(0.5)])
                .unwrap(),
            2.0
        );
    }

    #[test]
    fn norm_errors() {
        let e = NormedSpace::l2(3).norm(&[c(1.0)]).unwrap_err();
        assert!(e.to_string().contains("dimension"));
        let e = NormedSpace::weighted_lp(2.0, vec![1.0, -1.0]).unwrap_err();
        assert!(e.to_string().contains("invalid space"));
    }

    #[test]
    fn subgradient_examples() {
        let g = NormedSpace::l2(2).norm_subgradient(&[c(3.0), c(4.0)]).unwrap();
        assert!((g[0] - c(0.6)).norm() < 1e-15 && (g[1] - c(0.8)).norm() < 1e-15);

        let x = [c(2.0), c(2.0)];
        let g = NormedSpace::linf(2).norm_subgradient(&x).unwrap();
        assert_eq!(g, vec![c(1.0), c(0.0)]);
        assert_eq!(pairing(&x, &g).re, 2.0);

        let x = [c(0.0), c(-5.0)];
        let g = NormedSpace::l1(2).norm_subgradient(&x).unwrap();
        assert_eq!(g, vec![c(1.0), c(-1.0)]);
        assert_eq!(pairing(&x, &g).re, 5.0);

        let e = NormedSpace::l1(2).norm_subgradient(&[c(0.0), c(0.0)]).unwrap_err();
        assert_eq!(e, Error::SubgradientAtZero);
    }

    #[test]
    fn dual_examples() {
        assert_eq!(NormedSpace::l1(4).dual().unwrap(), NormedSpace::linf(4));
        assert_eq!(NormedSpace::l2(3).dual().unwrap(), NormedSpace::l2(3));
        let w = NormedSpace::weighted_lp(3.0, vec![1.0, 2.0]).unwrap();
        assert_eq!(
            w.dual().unwrap(),
            NormedSpace::weighted_lp(1.5, vec![1.0, 0.5]).unwrap()
        );
    }

    #[test]
    fn custom_without_dual() {
        let norm = CustomNorm::new("max", |x| x.iter().map(|z| z.norm()).fold(0.0, f64::max), |x| {
            x.to_vec()
        });
        let s = NormedSpace::custom(2, norm).unwrap();
        assert!(matches!(s.dual(), Err(Error::NoDual(_))));
    }

    #[test]
    fn adjoint_of_real_matrix_is_transpose() {
        let m = DMatrix::from_row_slice(2, 2, &[c(1.0), c(2.0), c(0.0), c(1.0)]);
        let t = LinearOperator::new(NormedSpace::l1(2), NormedSpace::l2(2), m).unwrap();
        let a = t.adjoint().unwrap();
        assert_eq!(a.domain(), &NormedSpace::l2(2));
        assert_eq!(a.codomain(), &NormedSpace::linf(2));
        let expect = DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(2.0), c(1.0)]);
        assert_eq!(a.matrix(), &expect);
    }

    #[test]
    fn identity_adjoint_on_l2() {
        let i = LinearOperator::identity(&NormedSpace::l2(3));
        assert_eq!(i.adjoint().unwrap(), i);
    }

    #[test]
    fn literals_round_trip() {
        for lit in ["l1:4", "l2:8", "linf:3", "l3.5:2", "wlp:p=3,w=1;2;0.5", "l1:2:real"] {
            let s: NormedSpace = lit.parse().unwrap();
            assert_eq!(s.to_string(), lit);
        }
        assert_eq!("l2:3:complex".parse::<NormedSpace>().unwrap().to_string(), "l2:3");
        let e = "l2:x".parse::<NormedSpace>().unwrap_err();
        assert_eq!(
            e,
            Error::Parse {
                position: 3,
                message: "bad dimension `x`".into()
            }
        );
    }

    #[test]
    fn hilbert_norm_of_diagonal() {
        let m = DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(0.0)]);
        let t = LinearOperator::new(NormedSpace::l2(2), NormedSpace::l2(2), m).unwrap();
        let (s, v) = t.hilbert_norm().unwrap();
        assert!((s - 1.0).abs() < 1e-15);
        assert!((v[0].norm() - 1.0).abs() < 1e-15);
        assert!(t.compose(&t).unwrap().hilbert_norm().is_some());
        assert!(LinearOperator::identity(&NormedSpace::l1(2)).hilbert_norm().is_none());
    }

    #[test]
    fn real_space_rejects_complex_matrix() {
        let s = NormedSpace::l2(1).real();
        let m = DMatrix::from_element(1, 1, Scalar::new(0.0, 1.0));
        assert!(LinearOperator::new(s.clone(), s, m).is_err());
    }
}
