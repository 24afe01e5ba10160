//! System norms of vector tuples, L₂ norms of sampled functions, Fourier
//! coefficients and modulation.
//!
//! A [`GridFunction`] is identified with its trigonometric interpolant of
//! degree below `N/2`; Fourier coefficients computed by node sums are exact
//! under that identification.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spaces::{NormedSpace, Scalar};
use crate::systems::{Domain, QuadratureGrid, SampledSystem, System};

const ZERO: Scalar = Scalar::new(0.0, 0.0);

/// An `n`-tuple `(x_1, …, x_n)` of vectors of one space, stored flat.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VectorTuple {
    space: NormedSpace,
    entries: Vec<Vec<Scalar>>,
}

impl VectorTuple {
    pub fn new(space: NormedSpace, entries: Vec<Vec<Scalar>>) -> Result<Self> {
        for e in &entries {
            if e.len() != space.dim() {
                return Err(Error::Dimension {
                    expected: space.dim(),
                    got: e.len(),
                });
            }
        }
        if space.is_real() && entries.iter().flatten().any(|z| z.im != 0.0) {
            return Err(Error::InvalidSpace("complex entry in a real space".into()));
        }
        Ok(VectorTuple { space, entries })
    }

    pub(crate) fn from_flat(space: NormedSpace, flat: &[Scalar]) -> Self {
        let entries = flat.chunks(space.dim()).map(|c| c.to_vec()).collect();
        VectorTuple { space, entries }
    }

    pub fn zeros(space: NormedSpace, n: usize) -> Self {
        let entries = vec![vec![ZERO; space.dim()]; n];
        VectorTuple { space, entries }
    }

    pub fn space(&self) -> &NormedSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry `h`, zero-based.
    pub fn get(&self, h: usize) -> &[Scalar] {
        &self.entries[h]
    }

    pub fn entries(&self) -> &[Vec<Scalar>] {
        &self.entries
    }

    pub(crate) fn flat(&self) -> Vec<Scalar> {
        self.entries.iter().flatten().copied().collect()
    }

    /// Largest entrywise difference to another tuple of the same shape.
    pub fn max_abs_diff(&self, other: &VectorTuple) -> f64 {
        self.entries
            .iter()
            .flatten()
            .zip(other.entries.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Samples of an X-valued function on a circle grid or a product grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    space: NormedSpace,
    domain: Domain,
    values: Vec<Scalar>,
}

impl GridFunction {
    /// `values` holds `domain.len()` samples of `space.dim()` entries each, flat.
    pub fn new(space: NormedSpace, domain: Domain, values: Vec<Scalar>) -> Result<Self> {
        let expected = domain.len() * space.dim();
        if values.len() != expected {
            return Err(Error::Dimension {
                expected,
                got: values.len(),
            });
        }
        Ok(GridFunction {
            space,
            domain,
            values,
        })
    }

    pub fn zeros(space: NormedSpace, domain: Domain) -> Self {
        let values = vec![ZERO; domain.len() * space.dim()];
        GridFunction {
            space,
            domain,
            values,
        }
    }

    /// Samples `f(t)` on every node of a circle grid.
    pub fn from_fn(
        space: NormedSpace,
        grid: QuadratureGrid,
        mut f: impl FnMut(f64) -> Vec<Scalar>,
    ) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.len() * space.dim());
        for t in grid.nodes() {
            let v = f(t);
            if v.len() != space.dim() {
                return Err(Error::Dimension {
                    expected: space.dim(),
                    got: v.len(),
                });
            }
            values.extend(v);
        }
        Ok(GridFunction {
            space,
            domain: Domain::Circle(grid),
            values,
        })
    }

    pub fn space(&self) -> &NormedSpace {
        &self.space
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn sample(&self, m: usize) -> &[Scalar] {
        let d = self.space.dim();
        &self.values[m * d..(m + 1) * d]
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub(crate) fn into_values(self) -> Vec<Scalar> {
        self.values
    }

    /// Largest entrywise difference to another function on the same nodes.
    pub fn max_abs_diff(&self, other: &GridFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Evaluates the trigonometric interpolant on another circle grid.
    ///
    /// For even `N` the Nyquist coefficient is split evenly between `±N/2`.
    pub fn interpolate(&self, grid: QuadratureGrid) -> Result<GridFunction> {
        let src = self.domain.circle_grid().ok_or_else(|| {
            Error::Config("interpolation is only defined on circle grids".into())
        })?;
        let n = src.len();
        let d = self.space.dim();
        let lo = -((n as i64 - 1) / 2);
        let hi = n as i64 / 2;
        let mut coeffs = Vec::with_capacity((hi - lo + 1) as usize);
        for k in lo..=hi {
            let mut c = vec![ZERO; d];
            for j in 0..n {
                let t = src.node(j);
                let phase = Scalar::new((k as f64 * t).cos(), -(k as f64 * t).sin());
                for (ci, v) in c.iter_mut().zip(self.sample(j)) {
                    *ci += v * phase;
                }
            }
            for ci in c.iter_mut() {
                *ci /= n as f64;
            }
            coeffs.push((k, c));
        }
        let nyquist_split = n % 2 == 0;
        GridFunction::from_fn(self.space.clone(), grid, |t| {
            let mut out = vec![ZERO; d];
            for (k, c) in &coeffs {
                if nyquist_split && *k == hi {
                    let kt = *k as f64 * t;
                    // cos(kt) = (e_k + e_{-k})/2 reproduces the samples and stays real
                    let w = kt.cos();
                    for (o, ci) in out.iter_mut().zip(c) {
                        *o += ci * w;
                    }
                } else {
                    let kt = *k as f64 * t;
                    let e = Scalar::new(kt.cos(), kt.sin());
                    for (o, ci) in out.iter_mut().zip(c) {
                        *o += ci * e;
                    }
                }
            }
            out
        })
    }
}

/// `Σ_k x_k a_k(node m)` for flat tuple storage.
#[inline]
pub(crate) fn synthesize_node(sampled: &SampledSystem, m: usize, flat: &[Scalar], dim: usize, out: &mut [Scalar]) {
    out.fill(ZERO);
    let row = sampled.row(m);
    if sampled.real {
        for (k, a) in row.iter().enumerate() {
            let a = a.re;
            if a == 0.0 {
                continue;
            }
            let x = &flat[k * dim..(k + 1) * dim];
            for (o, xi) in out.iter_mut().zip(x) {
                *o += xi * a;
            }
        }
    } else {
        for (k, a) in row.iter().enumerate() {
            let x = &flat[k * dim..(k + 1) * dim];
            for (o, xi) in out.iter_mut().zip(x) {
                *o += xi * a;
            }
        }
    }
}

/// `‖(x_k)|A‖` for a flat tuple against a pre-sampled system.
pub(crate) fn sampled_norm(space: &NormedSpace, sampled: &SampledSystem, flat: &[Scalar]) -> f64 {
    let dim = space.dim();
    let mut buf = vec![ZERO; dim];
    let mut acc = 0.0;
    for m in 0..sampled.nodes {
        synthesize_node(sampled, m, flat, dim, &mut buf);
        let v = space.norm_of(&buf);
        acc += v * v;
    }
    (acc * sampled.weight).sqrt()
}

fn check_tuple(xs: &VectorTuple, system: &System) -> Result<()> {
    if xs.len() != system.size() {
        return Err(Error::SizeMismatch(format!(
            "tuple has {} entries, system has {} members",
            xs.len(),
            system.size()
        )));
    }
    Ok(())
}

/// `‖(x_k)|A‖ = (∫ ‖Σ x_k a_k‖² dμ)^{1/2}` by node sums on `grid`
/// (on the product grid for tensor systems).
pub fn system_norm(xs: &VectorTuple, system: &System, grid: QuadratureGrid) -> Result<f64> {
    check_tuple(xs, system)?;
    let sampled = system.sample(grid);
    Ok(sampled_norm(xs.space(), &sampled, &xs.flat()))
}

/// The system norm together with the relative change when the grid is doubled.
pub fn system_norm_with_doubling(
    xs: &VectorTuple,
    system: &System,
    grid: QuadratureGrid,
) -> Result<(f64, f64)> {
    let value = system_norm(xs, system, grid)?;
    let fine = system_norm(xs, system, grid.doubled())?;
    Ok((value, relative_difference(value, fine)))
}

pub(crate) fn relative_difference(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// `‖f|L₂‖ = (Σ ‖f(t_j)‖² / N)^{1/2}`.
pub fn l2_norm(f: &GridFunction) -> f64 {
    let d = f.space.dim();
    let acc: f64 = f
        .values
        .chunks(d)
        .map(|v| {
            let n = f.space.norm_of(v);
            n * n
        })
        .sum();
    (acc * f.domain.weight()).sqrt()
}

fn check_domain(f: &GridFunction, system: &System) -> Result<QuadratureGrid> {
    let grid = match (f.domain, system) {
        (Domain::Circle(g), System::Trig(_)) => g,
        (Domain::Torus(a, b), System::Tensor(_)) if a == b => a,
        _ => {
            return Err(Error::Config(
                "grid function and system live on different domains".into(),
            ))
        }
    };
    system.check_resolved(&grid)?;
    Ok(grid)
}

/// `⟨f, ā_k⟩ = ∫ f(s) conj(a_k(s)) dμ(s)` for every member.
pub fn fourier_coefficients(f: &GridFunction, system: &System) -> Result<VectorTuple> {
    let grid = check_domain(f, system)?;
    let sampled = system.sample(grid);
    let flat = coefficients_sampled(&sampled, f.space.dim(), &f.values);
    Ok(VectorTuple::from_flat(f.space.clone(), &flat))
}

pub(crate) fn coefficients_sampled(sampled: &SampledSystem, dim: usize, values: &[Scalar]) -> Vec<Scalar> {
    let n = sampled.size;
    let mut out = vec![ZERO; n * dim];
    for m in 0..sampled.nodes {
        let row = sampled.row(m);
        let v = &values[m * dim..(m + 1) * dim];
        for (k, a) in row.iter().enumerate() {
            let ac = a.conj();
            let o = &mut out[k * dim..(k + 1) * dim];
            for (oi, vi) in o.iter_mut().zip(v) {
                *oi += vi * ac;
            }
        }
    }
    for o in out.iter_mut() {
        *o *= sampled.weight;
    }
    out
}

/// Samples `Σ x_k a_k` on the system's domain.
pub fn synthesize(xs: &VectorTuple, system: &System, grid: QuadratureGrid) -> Result<GridFunction> {
    check_tuple(xs, system)?;
    let sampled = system.sample(grid);
    let dim = xs.space().dim();
    let flat = xs.flat();
    let mut values = vec![ZERO; sampled.nodes * dim];
    for m in 0..sampled.nodes {
        synthesize_node(&sampled, m, &flat, dim, &mut values[m * dim..(m + 1) * dim]);
    }
    Ok(GridFunction {
        space: xs.space().clone(),
        domain: system.domain(grid),
        values,
    })
}

/// Pointwise multiplication by `e_l(t) = exp(ilt)`.
pub fn modulate(f: &GridFunction, l: i64) -> Result<GridFunction> {
    let grid = f
        .domain
        .circle_grid()
        .ok_or_else(|| Error::Config("modulation needs a circle grid".into()))?;
    let d = f.space.dim();
    let mut values = f.values.clone();
    for (j, chunk) in values.chunks_mut(d).enumerate() {
        let lt = l as f64 * grid.node(j);
        let e = Scalar::new(lt.cos(), lt.sin());
        for v in chunk {
            *v *= e;
        }
    }
    Ok(GridFunction {
        space: f.space.clone(),
        domain: f.domain,
        values,
    })
}

/// Composite Simpson rule on `[a, b]`, doubling the panel count until two
/// successive levels agree to `rel_tol`.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    let rule = |panels: usize| {
        let h = (b - a) / panels as f64;
        let mut acc = f(a) + f(b);
        for i in 1..panels {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f(a + i as f64 * h);
        }
        acc * h / 3.0
    };
    let mut panels = 64;
    let mut prev = rule(panels);
    loop {
        panels *= 2;
        let next = rule(panels);
        let scale = next.abs().max(f64::MIN_POSITIVE);
        if (next - prev).abs() <= rel_tol * scale || panels >= 1 << 22 {
            return next;
        }
        prev = next;
    }
}

/// `((2/π) ∫_a^b ‖F(t)‖² dt)^{1/2}`, the scaling used for cosine and sine sums
/// on sub-intervals of `[0, π]`.
pub fn interval_norm(space: &NormedSpace, a: f64, b: f64, integrand: impl Fn(f64) -> Vec<Scalar>) -> f64 {
    let sq = simpson(
        |t| {
            let v = space.norm_of(&integrand(t));
            v * v
        },
        a,
        b,
        1e-9,
    );
    (2.0 / PI * sq).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::TrigSystem;
    use std::f64::consts::SQRT_2;

    fn c(re: f64) -> Scalar {
        Scalar::new(re, 0.0)
    }

    #[test]
    fn single_element() {
        let grid = QuadratureGrid::default_for(1);
        for space in [NormedSpace::l1(3), NormedSpace::linf(3), NormedSpace::lp(3.0, 3).unwrap()] {
            let x = vec![c(1.0), c(-1.0), c(0.5)];
            let scale = 2.0 / space.norm(&x).unwrap();
            let x: Vec<Scalar> = x.iter().map(|v| v * scale).collect();
            let xs = VectorTuple::new(space, vec![x]).unwrap();
            for sys in [TrigSystem::sine(1), TrigSystem::cosine(1), TrigSystem::exponential(1)] {
                let v = system_norm(&xs, &sys.into(), grid).unwrap();
                assert!((v - 2.0).abs() < 1e-12, "{v}");
            }
        }
    }

    #[test]
    fn parseval_on_l2() {
        let xs = VectorTuple::new(
            NormedSpace::l2(3),
            vec![vec![c(1.0), c(0.0), c(0.0)], vec![c(0.0), c(1.0), c(0.0)]],
        )
        .unwrap();
        let v = system_norm(&xs, &TrigSystem::cosine(2).into(), QuadratureGrid::default_for(2)).unwrap();
        assert!((v - SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn scalar_cosine_sum_against_fine_reference() {
        // |√2 cos t + √2 cos 2t|² averaged over dt/2π, by a 10⁶-point midpoint sum
        let reference = {
            let m = 1_000_000;
            let h = 2.0 * PI / m as f64;
            let s: f64 = (0..m)
                .map(|i| {
                    let t = -PI + (i as f64 + 0.5) * h;
                    let v = SQRT_2 * t.cos() + SQRT_2 * (2.0 * t).cos();
                    v * v
                })
                .sum();
            (s / m as f64).sqrt()
        };
        let xs = VectorTuple::new(NormedSpace::linf(1), vec![vec![c(1.0)], vec![c(1.0)]]).unwrap();
        let v = system_norm(&xs, &TrigSystem::cosine(2).into(), QuadratureGrid::default_for(2)).unwrap();
        assert!((v - reference).abs() < 1e-6);
    }

    #[test]
    fn size_mismatch() {
        let xs = VectorTuple::zeros(NormedSpace::l2(2), 3);
        assert!(system_norm(&xs, &TrigSystem::cosine(2).into(), QuadratureGrid::default_for(2)).is_err());
    }

    #[test]
    fn l2_norm_examples() {
        let grid = QuadratureGrid::new(32).unwrap();
        let space = NormedSpace::l1(2);
        let f = GridFunction::from_fn(space.clone(), grid, |_| vec![c(1.0), c(-2.0)]).unwrap();
        assert!((l2_norm(&f) - 3.0).abs() < 1e-14);

        let x = [c(0.6), c(0.8)];
        let g = GridFunction::from_fn(NormedSpace::l2(2), grid, |t| {
            let e = Scalar::new(t.cos(), t.sin());
            x.iter().map(|v| v * e).collect()
        })
        .unwrap();
        assert!((l2_norm(&g) - 1.0).abs() < 1e-14);

        let xs = VectorTuple::new(NormedSpace::l2(2), vec![x.to_vec(), vec![c(-1.0), c(2.0)]]).unwrap();
        let sys: System = TrigSystem::cosine(2).into();
        let f = synthesize(&xs, &sys, grid).unwrap();
        assert!((l2_norm(&f) - system_norm(&xs, &sys, grid).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn fourier_examples() {
        let grid = QuadratureGrid::new(16).unwrap();
        let space = NormedSpace::l2(2);
        let sys: System = TrigSystem::exponential(3).into();
        let xs = VectorTuple::new(
            space.clone(),
            vec![vec![c(1.0), c(2.0)], vec![Scalar::new(0.0, 1.0), c(0.0)], vec![c(-3.0), c(0.5)]],
        )
        .unwrap();
        let f = synthesize(&xs, &sys, grid).unwrap();
        assert!(fourier_coefficients(&f, &sys).unwrap().max_abs_diff(&xs) < 1e-12);

        let konst = GridFunction::from_fn(space.clone(), grid, |_| vec![c(1.0), c(1.0)]).unwrap();
        let zero = fourier_coefficients(&konst, &sys).unwrap();
        assert!(zero.max_abs_diff(&VectorTuple::zeros(space.clone(), 3)) < 1e-12);

        let cos2 = GridFunction::from_fn(space.clone(), grid, |t| {
            let v = SQRT_2 * (2.0 * t).cos();
            vec![c(v), c(-v)]
        })
        .unwrap();
        let s = fourier_coefficients(&cos2, &TrigSystem::sine(3).into()).unwrap();
        assert!(s.max_abs_diff(&VectorTuple::zeros(space, 3)) < 1e-12);
    }

    #[test]
    fn fourier_aliasing() {
        let grid = QuadratureGrid::new(8).unwrap();
        let f = GridFunction::zeros(NormedSpace::l2(1), Domain::Circle(grid));
        let e = fourier_coefficients(&f, &TrigSystem::exponential(4).into()).unwrap_err();
        assert!(matches!(e, Error::Aliasing { .. }));
    }

    #[test]
    fn modulate_examples() {
        let grid = QuadratureGrid::new(24).unwrap();
        let space = NormedSpace::l1(2);
        let f = GridFunction::from_fn(space.clone(), grid, |t| {
            let e = Scalar::new((3.0 * t).cos(), (3.0 * t).sin());
            vec![e * 2.0, e * -1.0]
        })
        .unwrap();
        assert_eq!(modulate(&f, 0).unwrap(), f);
        let g = modulate(&f, -3).unwrap();
        let konst = GridFunction::from_fn(space, grid, |_| vec![c(2.0), c(-1.0)]).unwrap();
        assert!(g.max_abs_diff(&konst) < 1e-12);
        assert!((l2_norm(&modulate(&f, 7).unwrap()) - l2_norm(&f)).abs() < 1e-12);
    }

    #[test]
    fn interpolation_reproduces_band_limited_functions() {
        let space = NormedSpace::l2(1);
        let f = |t: f64| vec![Scalar::new((2.0 * t).cos() + 0.5 * (3.0 * t).sin(), t.sin())];
        let coarse = GridFunction::from_fn(space.clone(), QuadratureGrid::new(9).unwrap(), f).unwrap();
        let fine = coarse.interpolate(QuadratureGrid::new(20).unwrap()).unwrap();
        let direct = GridFunction::from_fn(space, QuadratureGrid::new(20).unwrap(), f).unwrap();
        assert!(fine.max_abs_diff(&direct) < 1e-12);
    }

    #[test]
    fn simpson_polynomial() {
        let v = simpson(|t| t * t, 0.0, 3.0, 1e-12);
        assert!((v - 9.0).abs() < 1e-12);
    }
}
