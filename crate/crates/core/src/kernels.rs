//! Dirichlet and de la Vallée Poussin kernels.
//!
//! `D_k(t) = Σ_{|l|≤k} e^{ilt}` and `V_m = (1/m) Σ_{k=m}^{2m−1} D_k`. The
//! smoothing operator `V_m` is applied by multiplying Fourier coefficients,
//! which on a grid is the same as circular convolution with the sampled kernel.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norms::GridFunction;
use crate::spaces::Scalar;
use crate::systems::QuadratureGrid;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelSpec {
    Dirichlet(usize),
    ValleePoussin(usize),
}

impl KernelSpec {
    pub fn dirichlet(k: usize) -> Self {
        KernelSpec::Dirichlet(k)
    }

    /// Panics on `m = 0`.
    pub fn vallee_poussin(m: usize) -> Self {
        assert!(m > 0, "de la Vallée Poussin index must be positive");
        KernelSpec::ValleePoussin(m)
    }

    /// Largest frequency with a nonzero coefficient.
    pub fn degree(&self) -> usize {
        match self {
            KernelSpec::Dirichlet(k) => *k,
            KernelSpec::ValleePoussin(m) => 2 * m - 1,
        }
    }

    /// Fourier coefficient at frequency `k`.
    pub fn coefficient(&self, k: i64) -> f64 {
        match self {
            KernelSpec::Dirichlet(d) => {
                if k.unsigned_abs() as usize <= *d {
                    1.0
                } else {
                    0.0
                }
            }
            KernelSpec::ValleePoussin(m) => vp_coefficient(*m, k),
        }
    }
}

fn dirichlet_sum(k: usize, t: f64) -> Scalar {
    let mut acc = Scalar::new(0.0, 0.0);
    for l in -(k as i64)..=(k as i64) {
        let lt = l as f64 * t;
        acc += Scalar::new(lt.cos(), lt.sin());
    }
    acc
}

/// Kernel value at `t` by direct summation of exponentials.
pub fn kernel_eval(spec: KernelSpec, t: f64) -> f64 {
    let z = match spec {
        KernelSpec::Dirichlet(k) => dirichlet_sum(k, t),
        KernelSpec::ValleePoussin(m) => {
            let s: Scalar = (m..2 * m).map(|k| dirichlet_sum(k, t)).sum();
            s / m as f64
        }
    };
    debug_assert!(z.im.abs() < 1e-12 * (1.0 + z.re.abs()), "kernel not real: {z}");
    z.re
}

/// `1` for `|k| ≤ m`, `(2m − |k|)/m` for `m < |k| < 2m`, `0` for `|k| ≥ 2m`.
pub fn vp_coefficient(m: usize, k: i64) -> f64 {
    let a = k.unsigned_abs() as usize;
    if a <= m {
        1.0
    } else if a < 2 * m {
        (2 * m - a) as f64 / m as f64
    } else {
        0.0
    }
}

/// `(1/2π) ∫ |V_m(t)| dt` by the node rule on `grid`; needs `N ≥ 8(2m − 1)`.
pub fn vp_l1_norm(m: usize, grid: QuadratureGrid) -> Result<f64> {
    let required = 8 * (2 * m - 1);
    if grid.len() < required {
        return Err(Error::InsufficientBandwidth {
            nodes: grid.len(),
            required,
        });
    }
    let spec = KernelSpec::vallee_poussin(m);
    let s: f64 = grid.nodes().map(|t| kernel_eval(spec, t).abs()).sum();
    Ok(s * grid.weight())
}

/// `V_m f = Σ_{|k|≤2m−1} v_k ⟨f, ē_k⟩ e_k`, sampled on the grid of `f`.
pub fn vp_apply(m: usize, f: &GridFunction) -> Result<GridFunction> {
    let grid = f
        .domain()
        .circle_grid()
        .ok_or_else(|| Error::Config("de la Vallée Poussin smoothing needs a circle grid".into()))?;
    let degree = 2 * m - 1;
    if degree > grid.nyquist() {
        return Err(Error::Aliasing {
            frequency: degree,
            nodes: grid.len(),
        });
    }
    let d = f.space().dim();
    let n = grid.len();
    let mut coeffs = Vec::with_capacity(2 * degree + 1);
    for k in -(degree as i64)..=(degree as i64) {
        let v = vp_coefficient(m, k);
        let mut c = vec![Scalar::new(0.0, 0.0); d];
        if v != 0.0 {
            for j in 0..n {
                let kt = k as f64 * grid.node(j);
                let phase = Scalar::new(kt.cos(), -kt.sin());
                for (ci, x) in c.iter_mut().zip(f.sample(j)) {
                    *ci += x * phase;
                }
            }
            for ci in c.iter_mut() {
                *ci *= v / n as f64;
            }
        }
        coeffs.push((k, c));
    }
    GridFunction::from_fn(f.space().clone(), grid, |t| {
        let mut out = vec![Scalar::new(0.0, 0.0); d];
        for (k, c) in &coeffs {
            let kt = *k as f64 * t;
            let e = Scalar::new(kt.cos(), kt.sin());
            for (o, ci) in out.iter_mut().zip(c) {
                *o += ci * e;
            }
        }
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::l2_norm;
    use crate::spaces::NormedSpace;
    use std::f64::consts::PI;

    #[test]
    fn kernel_examples() {
        assert!((kernel_eval(KernelSpec::dirichlet(3), 0.0) - 7.0).abs() < 1e-12);
        assert!((kernel_eval(KernelSpec::dirichlet(1), PI) + 1.0).abs() < 1e-12);
        // (1/2)(D_2(0) + D_3(0)) = (5 + 7)/2
        assert!((kernel_eval(KernelSpec::vallee_poussin(2), 0.0) - 6.0).abs() < 1e-12);
        for m in 1..6 {
            assert!((kernel_eval(KernelSpec::vallee_poussin(m), 0.0) - 3.0 * m as f64).abs() < 1e-10);
        }
    }

    #[test]
    fn coefficient_examples() {
        assert_eq!(vp_coefficient(2, 3), 0.5);
        assert_eq!(vp_coefficient(5, 0), 1.0);
        assert_eq!(vp_coefficient(3, -6), 0.0);
        assert_eq!(KernelSpec::vallee_poussin(4).degree(), 7);
    }

    #[test]
    fn l1_norm_of_first_kernel() {
        // V_1 = 1 + 2cos t; ∫|1 + 2cos t| dt/2π = 1/3 + 2√3/π
        let exact = 1.0 / 3.0 + 2.0 * 3f64.sqrt() / PI;
        let v = vp_l1_norm(1, QuadratureGrid::new(1 << 14).unwrap()).unwrap();
        assert!((v - exact).abs() < 1e-6, "{v} vs {exact}");
        assert!(vp_l1_norm(4, QuadratureGrid::new(40).unwrap()).is_err());
    }

    fn mode(space: &NormedSpace, grid: QuadratureGrid, k: i64, x: &[Scalar]) -> GridFunction {
        GridFunction::from_fn(space.clone(), grid, |t| {
            let e = Scalar::new((k as f64 * t).cos(), (k as f64 * t).sin());
            x.iter().map(|v| v * e).collect()
        })
        .unwrap()
    }

    #[test]
    fn apply_examples() {
        let space = NormedSpace::l1(2);
        let grid = QuadratureGrid::new(32).unwrap();
        let x = [Scalar::new(1.0, -1.0), Scalar::new(2.0, 0.0)];
        let m = 2;

        let mut band = mode(&space, grid, -2, &x);
        for k in -1..=2 {
            let g = mode(&space, grid, k, &x);
            band = GridFunction::new(
                space.clone(),
                band.domain(),
                band.values().iter().zip(g.values()).map(|(a, b)| a + b * (k as f64 + 0.5)).collect(),
            )
            .unwrap();
        }
        assert!(vp_apply(m, &band).unwrap().max_abs_diff(&band) < 1e-10);

        let high = mode(&space, grid, 4, &x);
        assert!(l2_norm(&vp_apply(m, &high).unwrap()) < 1e-12);

        let mid = mode(&space, grid, 3, &x);
        let half: Vec<Scalar> = x.iter().map(|v| v * 0.5).collect();
        assert!(vp_apply(m, &mid).unwrap().max_abs_diff(&mode(&space, grid, 3, &half)) < 1e-12);
    }

    #[test]
    fn apply_rejects_aliasing() {
        let f = GridFunction::zeros(NormedSpace::l2(1), crate::systems::Domain::Circle(QuadratureGrid::new(8).unwrap()));
        assert!(matches!(vp_apply(3, &f), Err(Error::Aliasing { .. })));
    }
}
