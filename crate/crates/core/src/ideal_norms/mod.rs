//! Estimators for the ideal norms
//!
//! * `ρ(T|B,A)`: the least `c` with `‖(Tx_k)|B‖ ≤ c ‖(x_k)|A‖` for all tuples,
//! * `δ(T|B,A)`: the least `c` with `‖(T⟨f, ā_k⟩)|B‖ ≤ c ‖f|L₂‖` for all `f`,
//! * `μ_n(T) = max{ρ(T|C_n,S_n), ρ(T|S_n,C_n)}`.
//!
//! Outside Euclidean spaces these are suprema of nonconvex ratios, so the
//! estimators return certified lower bounds: the reported value is the ratio
//! at a concrete certificate. On (weighted) ℓ₂ spaces every system norm is the
//! Euclidean tuple norm and both ideal norms equal the operator norm, which is
//! returned exactly.

mod ascent;
mod objective;
mod oracle;

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norms::{relative_difference, synthesize, GridFunction, VectorTuple};
use crate::spaces::{LinearOperator, Scalar};
use crate::systems::{QuadratureGrid, System, TrigSystem};

use ascent::{best_index, gaussian, multistart, StartResult};
use objective::{DeltaObjective, Objective, RhoObjective};

pub use oracle::brute_force_rho;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    /// Relative directional-derivative threshold at which a start stops.
    pub gradient_tolerance: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            restarts: 32,
            max_iterations: 500,
            gradient_tolerance: 1e-9,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = max_iterations;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iterations == 0 || self.gradient_tolerance.is_nan() || self.gradient_tolerance <= 0.0 {
            return Err(Error::Config(
                "restarts, iterations and tolerance must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    Tuple(VectorTuple),
    Function(GridFunction),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdealNormEstimate {
    /// Lower bound, attained at the certificate.
    pub value: f64,
    pub certificate: Certificate,
    pub restarts_used: usize,
    pub iterations: usize,
    pub best_per_restart: Vec<f64>,
    /// True when the value is the exact ideal norm (Euclidean spaces, zero operator).
    pub exact: bool,
}

impl IdealNormEstimate {
    pub fn tuple(&self) -> Option<&VectorTuple> {
        match &self.certificate {
            Certificate::Tuple(t) => Some(t),
            Certificate::Function(_) => None,
        }
    }

    pub fn function(&self) -> Option<&GridFunction> {
        match &self.certificate {
            Certificate::Function(f) => Some(f),
            Certificate::Tuple(_) => None,
        }
    }
}

fn check_sizes(to: &System, from: &System) -> Result<usize> {
    if to.size() != from.size() {
        return Err(Error::SizeMismatch(format!(
            "systems have {} and {} members",
            to.size(),
            from.size()
        )));
    }
    Ok(from.size())
}

/// Ratio `‖(Tx_k)|B‖ / ‖(x_k)|A‖` at a tuple.
pub fn rho_ratio(
    t: &LinearOperator,
    to: &System,
    from: &System,
    grid: QuadratureGrid,
    xs: &VectorTuple,
) -> Result<f64> {
    check_sizes(to, from)?;
    if xs.len() != from.size() || xs.space().dim() != t.domain().dim() {
        return Err(Error::SizeMismatch("certificate does not fit the operator".into()));
    }
    let obj = RhoObjective {
        op: t,
        to: to.sample(grid),
        from: from.sample(grid),
    };
    Ok(obj.ratio(&xs.flat()))
}

/// Ratio `‖(T⟨f, ā_k⟩)|B‖ / ‖f|L₂‖` at a grid function. `B` is sampled on
/// the same grid as `f`.
pub fn delta_ratio(t: &LinearOperator, to: &System, from: &System, f: &GridFunction) -> Result<f64> {
    check_sizes(to, from)?;
    let grid = circle_or_torus_grid(f)?;
    if from.domain(grid) != f.domain() {
        return Err(Error::Config("grid function does not live on the domain of A".into()));
    }
    from.check_resolved(&grid)?;
    let obj = DeltaObjective {
        op: t,
        to: to.sample(grid),
        from: from.sample(grid),
        dual: None,
    };
    Ok(obj.ratio(f.values()))
}

fn circle_or_torus_grid(f: &GridFunction) -> Result<QuadratureGrid> {
    match f.domain() {
        crate::systems::Domain::Circle(g) => Ok(g),
        crate::systems::Domain::Torus(a, b) if a == b => Ok(a),
        _ => Err(Error::Config("unequal product grids are not supported".into())),
    }
}

/// Tuple `(v, 0, …, 0)` for a single direction `v`.
fn single_entry_tuple(t: &LinearOperator, n: usize, v: Vec<Scalar>) -> VectorTuple {
    let mut entries = vec![vec![Scalar::new(0.0, 0.0); t.domain().dim()]; n];
    entries[0] = v;
    VectorTuple::new(t.domain().clone(), entries).expect("dimension matches the domain")
}

/// Exact answer on Euclidean spaces and for the zero operator.
fn exact_estimate(t: &LinearOperator, n: usize) -> Option<(f64, VectorTuple)> {
    let dim = t.domain().dim();
    if t.is_zero() {
        let mut e = vec![Scalar::new(0.0, 0.0); dim];
        e[0] = Scalar::new(1.0, 0.0);
        let norm = t.domain().norm_of(&e);
        let e = e.into_iter().map(|v| v / norm).collect();
        return Some((0.0, single_entry_tuple(t, n, e)));
    }
    let (sigma, v) = t.hilbert_norm()?;
    let norm = t.domain().norm_of(&v);
    let v = v.into_iter().map(|z| z / norm).collect();
    Some((sigma, single_entry_tuple(t, n, v)))
}

fn assemble(
    results: Vec<Option<StartResult>>,
    to_certificate: impl Fn(Vec<Scalar>) -> Certificate,
) -> Result<IdealNormEstimate> {
    let best = best_index(&results)
        .ok_or_else(|| Error::Config("every start collapsed to the zero tuple".into()))?;
    let best_per_restart = results
        .iter()
        .map(|r| r.as_ref().map_or(0.0, |r| r.value))
        .collect();
    let iterations = results.iter().flatten().map(|r| r.iterations).sum();
    let restarts_used = results.len();
    let mut results = results;
    let StartResult { value, point, .. } = results[best].take().expect("best start exists");
    Ok(IdealNormEstimate {
        value,
        certificate: to_certificate(point),
        restarts_used,
        iterations,
        best_per_restart,
        exact: false,
    })
}

/// Lower bound for `ρ(T|B,A)` by projected gradient ascent with random restarts.
pub fn rho_estimate(
    t: &LinearOperator,
    to: &System,
    from: &System,
    grid: QuadratureGrid,
    cfg: &OptimizerConfig,
) -> Result<IdealNormEstimate> {
    cfg.validate()?;
    let n = check_sizes(to, from)?;
    to.check_resolved(&grid)?;
    from.check_resolved(&grid)?;
    if let Some((value, xs)) = exact_estimate(t, n) {
        return Ok(IdealNormEstimate {
            value,
            certificate: Certificate::Tuple(xs),
            restarts_used: 0,
            iterations: 0,
            best_per_restart: Vec::new(),
            exact: true,
        });
    }
    let obj = RhoObjective {
        op: t,
        to: to.sample(grid),
        from: from.sample(grid),
    };
    let len = obj.len();
    let real = obj.real();
    let results = multistart(&obj, Vec::new(), cfg, |rng: &mut ChaCha8Rng, _| gaussian(rng, len, real));
    let space = t.domain().clone();
    assemble(results, |p| Certificate::Tuple(VectorTuple::from_flat(space.clone(), &p)))
}

/// Lower bound for `δ(T|B,A)`; runs [`rho_estimate`] first to seed the search.
pub fn delta_estimate(
    t: &LinearOperator,
    to: &System,
    from: &System,
    grid: QuadratureGrid,
    cfg: &OptimizerConfig,
) -> Result<IdealNormEstimate> {
    check_delta_grid(to, from, grid)?;
    let rho = rho_estimate(t, to, from, grid, cfg)?;
    delta_estimate_seeded(t, to, from, grid, cfg, &rho, &[])
}

fn check_delta_grid(to: &System, from: &System, grid: QuadratureGrid) -> Result<usize> {
    let n = check_sizes(to, from)?;
    let required = 4 * n.max(from.max_frequency()).max(to.max_frequency());
    if grid.len() < required {
        return Err(Error::InsufficientBandwidth {
            nodes: grid.len(),
            required,
        });
    }
    Ok(n)
}

/// Lower bound for `δ(T|B,A)` seeded with a `ρ(T|B,A)` certificate and any
/// number of warm-start functions.
///
/// Embedding the ρ-certificate as `f = Σ x_k a_k` reproduces its ratio
/// exactly, so the result is never below `rho.value` (up to rounding).
pub fn delta_estimate_seeded(
    t: &LinearOperator,
    to: &System,
    from: &System,
    grid: QuadratureGrid,
    cfg: &OptimizerConfig,
    rho: &IdealNormEstimate,
    warm: &[GridFunction],
) -> Result<IdealNormEstimate> {
    cfg.validate()?;
    let n = check_delta_grid(to, from, grid)?;
    to.check_resolved(&grid)?;
    from.check_resolved(&grid)?;
    let rho_seed = match &rho.certificate {
        Certificate::Tuple(xs) => synthesize(xs, from, grid)?,
        Certificate::Function(_) => {
            return Err(Error::Config("the seed must be a ρ certificate".into()))
        }
    };
    if let Some((value, xs)) = exact_estimate(t, n) {
        return Ok(IdealNormEstimate {
            value,
            certificate: Certificate::Function(synthesize(&xs, from, grid)?),
            restarts_used: 0,
            iterations: 0,
            best_per_restart: Vec::new(),
            exact: true,
        });
    }
    let domain = from.domain(grid);
    for w in warm {
        if w.domain() != domain || w.space().dim() != t.domain().dim() {
            return Err(Error::Config("warm start does not live on the domain of A".into()));
        }
    }
    let obj = DeltaObjective {
        op: t,
        to: to.sample(grid),
        from: from.sample(grid),
        dual: t.domain().dual().ok(),
    };
    let real = obj.real();
    let dim = t.domain().dim();
    let bandwidth = (2 * n).min(grid.nyquist()) as i64;
    let nodes: Vec<f64> = grid.nodes().collect();
    let points = domain.len();

    let mut seeds = vec![rho_seed.into_values()];
    seeds.extend(warm.iter().map(|w| w.values().to_vec()));
    let random_start = |rng: &mut ChaCha8Rng, r: usize| {
        if r % 2 == 1 || domain.circle_grid().is_none() {
            // white noise over every node
            gaussian(rng, points * dim, real)
        } else {
            // random trigonometric polynomial of degree 2n
            let coeffs = gaussian(rng, (2 * bandwidth as usize + 1) * dim, real);
            let mut values = vec![Scalar::new(0.0, 0.0); points * dim];
            for (j, t) in nodes.iter().enumerate() {
                for (i, k) in (-bandwidth..=bandwidth).enumerate() {
                    let e = if real {
                        Scalar::new((k as f64 * t).cos(), 0.0)
                    } else {
                        Scalar::new((k as f64 * t).cos(), (k as f64 * t).sin())
                    };
                    for d in 0..dim {
                        values[j * dim + d] += coeffs[i * dim + d] * e;
                    }
                }
            }
            values
        }
    };
    let results = multistart(&obj, seeds, cfg, random_start);
    let space = t.domain().clone();
    assemble(results, |p| {
        Certificate::Function(GridFunction::new(space.clone(), domain, p).expect("sample count"))
    })
}

/// Both branches of `μ_n(T)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MuEstimate {
    /// `ρ(T|C_n, S_n)`.
    pub cos_sin: IdealNormEstimate,
    /// `ρ(T|S_n, C_n)`.
    pub sin_cos: IdealNormEstimate,
}

impl MuEstimate {
    pub fn value(&self) -> f64 {
        self.cos_sin.value.max(self.sin_cos.value)
    }

    /// The branch attaining the maximum (the `C,S` branch on ties).
    pub fn best(&self) -> &IdealNormEstimate {
        if self.sin_cos.value > self.cos_sin.value {
            &self.sin_cos
        } else {
            &self.cos_sin
        }
    }
}

/// `μ_n(T)` as the larger of the two ρ estimates, both run with `cfg`.
pub fn mu_estimate(
    t: &LinearOperator,
    n: usize,
    grid: QuadratureGrid,
    cfg: &OptimizerConfig,
) -> Result<MuEstimate> {
    let c: System = TrigSystem::cosine(n).into();
    let s: System = TrigSystem::sine(n).into();
    Ok(MuEstimate {
        cos_sin: rho_estimate(t, &c, &s, grid, cfg)?,
        sin_cos: rho_estimate(t, &s, &c, grid, cfg)?,
    })
}

/// `δ̂(T|B,A)` and `δ̂(T'|Ā,B̄)` with the same optimizer settings.
pub fn duality_estimates(
    t: &LinearOperator,
    to: &System,
    from: &System,
    grid: QuadratureGrid,
    cfg: &OptimizerConfig,
) -> Result<(IdealNormEstimate, IdealNormEstimate)> {
    let adjoint = t.adjoint()?;
    let primal = delta_estimate(t, to, from, grid, cfg)?;
    let dual = delta_estimate(&adjoint, &from.conj(), &to.conj(), grid, cfg)?;
    Ok((primal, dual))
}

/// `|δ̂(T|B,A) − δ̂(T'|Ā,B̄)|`. Both sides are lower bounds, so this is a
/// diagnostic of optimizer quality rather than a test of the identity.
pub fn duality_gap(
    t: &LinearOperator,
    to: &System,
    from: &System,
    grid: QuadratureGrid,
    cfg: &OptimizerConfig,
) -> Result<f64> {
    let (p, d) = duality_estimates(t, to, from, grid, cfg)?;
    Ok((p.value - d.value).abs())
}

/// Relative change of the certificate's ratio when the grid is doubled.
///
/// Function certificates are carried to the finer grid by trigonometric
/// interpolation.
pub fn doubling_residual(
    estimate: &IdealNormEstimate,
    t: &LinearOperator,
    to: &System,
    from: &System,
    grid: QuadratureGrid,
) -> Result<f64> {
    let fine = grid.doubled();
    let value = match &estimate.certificate {
        Certificate::Tuple(xs) => rho_ratio(t, to, from, fine, xs)?,
        Certificate::Function(f) => {
            if f.domain().circle_grid().is_none() {
                return Ok(0.0);
            }
            delta_ratio(t, to, from, &f.interpolate(fine)?)?
        }
    };
    Ok(relative_difference(estimate.value, value))
}
