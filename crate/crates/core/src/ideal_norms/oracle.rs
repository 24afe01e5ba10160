//! Dense-net ground truth for `ρ` on tiny instances.

use std::f64::consts::PI;

use super::objective::{Objective, RhoObjective};
use crate::error::{Error, Result};
use crate::spaces::{LinearOperator, Scalar};
use crate::systems::{QuadratureGrid, System};

const MAX_DOF: usize = 6;
const POLISHED: usize = 8;

/// Point on the unit Euclidean sphere of `R^{angles.len()+1}`.
fn sphere_point(angles: &[f64], out: &mut [f64]) {
    let mut s = 1.0;
    for (i, a) in angles.iter().enumerate() {
        out[i] = s * a.cos();
        s *= a.sin();
    }
    out[angles.len()] = s;
}

fn to_complex(x: &[f64], real: bool) -> Vec<Scalar> {
    if real {
        x.iter().map(|&v| Scalar::new(v, 0.0)).collect()
    } else {
        x.chunks(2).map(|c| Scalar::new(c[0], c[1])).collect()
    }
}

/// `ρ(T|B,A)` by exhaustive search over hyperspherical angles with step
/// `π/net_resolution`, followed by a pattern-search polish of the best net
/// points. Limited to six real degrees of freedom.
pub fn brute_force_rho(
    t: &LinearOperator,
    to: &System,
    from: &System,
    grid: QuadratureGrid,
    net_resolution: usize,
) -> Result<f64> {
    if to.size() != from.size() {
        return Err(Error::SizeMismatch(format!(
            "systems have {} and {} members",
            to.size(),
            from.size()
        )));
    }
    to.check_resolved(&grid)?;
    from.check_resolved(&grid)?;
    if net_resolution == 0 {
        return Err(Error::Config("net resolution must be positive".into()));
    }
    let real = t.domain().is_real();
    let dof = from.size() * t.domain().dim() * if real { 1 } else { 2 };
    if dof > MAX_DOF {
        return Err(Error::OracleScope { dof, limit: MAX_DOF });
    }
    let obj = RhoObjective {
        op: t,
        to: to.sample(grid),
        from: from.sample(grid),
    };
    let mut x = vec![0.0; dof];
    let mut eval = |angles: &[f64]| {
        sphere_point(angles, &mut x);
        obj.ratio(&to_complex(&x, real))
    };
    if dof == 1 {
        return Ok(eval(&[]));
    }

    // the ratio is even, so the last angle only needs [0, π)
    let m = dof - 1;
    let r = net_resolution;
    let step = PI / r as f64;
    let mut counters = vec![0usize; m];
    let mut angles = vec![0.0; m];
    let mut top: Vec<(f64, Vec<f64>)> = Vec::with_capacity(POLISHED + 1);
    loop {
        for (a, &c) in angles.iter_mut().zip(&counters) {
            *a = c as f64 * step;
        }
        let v = eval(&angles);
        if top.len() < POLISHED || v > top[top.len() - 1].0 {
            top.push((v, angles.clone()));
            top.sort_by(|a, b| b.0.total_cmp(&a.0));
            top.truncate(POLISHED);
        }
        // odometer; polar angles take r+1 values, the last takes r
        let mut i = 0;
        loop {
            if i == m {
                return Ok(polish(&mut eval, top, step));
            }
            let limit = if i == m - 1 { r } else { r + 1 };
            counters[i] += 1;
            if counters[i] < limit {
                break;
            }
            counters[i] = 0;
            i += 1;
        }
    }
}

fn polish(eval: &mut impl FnMut(&[f64]) -> f64, top: Vec<(f64, Vec<f64>)>, step: f64) -> f64 {
    let mut best = 0.0f64;
    for (mut v, mut a) in top {
        let mut h = step;
        while h > 1e-9 {
            let mut moved = false;
            for i in 0..a.len() {
                for sign in [1.0, -1.0] {
                    let old = a[i];
                    a[i] = old + sign * h;
                    let c = eval(&a);
                    if c > v {
                        v = c;
                        moved = true;
                    } else {
                        a[i] = old;
                    }
                }
            }
            if !moved {
                h *= 0.5;
            }
        }
        best = best.max(v);
    }
    best
}
