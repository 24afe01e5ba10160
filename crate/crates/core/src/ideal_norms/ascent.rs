//! Multi-start ascent for a ratio of two norms.
//!
//! Each start is renormalized onto the unit sphere of the denominator after
//! every move. A move is a closed-form power step when the objective offers
//! one, otherwise a gradient step with backtracking by halving; when both fail
//! a few random probes are tried before the start is declared converged.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::objective::Objective;
use super::OptimizerConfig;
use crate::seed::rng_for;
use crate::spaces::Scalar;

/// Denominators below this are treated as the zero tuple.
pub(crate) const ZERO_DENOMINATOR: f64 = 1e-14;

const STALL_TOLERANCE: f64 = 1e-13;
const STALL_LIMIT: usize = 8;
const PROBES: usize = 12;
const MIN_STEP: f64 = 1e-10;

#[derive(Clone, Debug)]
pub(crate) struct StartResult {
    pub value: f64,
    pub point: Vec<Scalar>,
    pub iterations: usize,
}

pub(crate) fn gaussian(rng: &mut ChaCha8Rng, len: usize, real: bool) -> Vec<Scalar> {
    (0..len)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = if real { 0.0 } else { rng.sample(StandardNormal) };
            Scalar::new(re, im)
        })
        .collect()
}

fn euclid(z: &[Scalar]) -> f64 {
    z.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize<O: Objective + ?Sized>(obj: &O, z: &mut [Scalar]) -> bool {
    let d = obj.denominator(z);
    if d.is_nan() || d <= ZERO_DENOMINATOR || !d.is_finite() {
        return false;
    }
    for v in z.iter_mut() {
        *v /= d;
    }
    true
}

/// Runs one start. `None` when the start point has a vanishing denominator.
pub(crate) fn ascend<O: Objective + ?Sized>(
    obj: &O,
    start: Vec<Scalar>,
    cfg: &OptimizerConfig,
    rng: &mut ChaCha8Rng,
) -> Option<StartResult> {
    let real = obj.real();
    let mut z = start;
    if real {
        for v in z.iter_mut() {
            v.im = 0.0;
        }
    }
    if !normalize(obj, &mut z) {
        return None;
    }
    let mut r = obj.numerator(&z);
    let mut step = 0.25;
    let mut stall = 0;
    let mut iterations = 0;

    while iterations < cfg.max_iterations {
        iterations += 1;
        let mut next: Option<(Vec<Scalar>, f64)> = None;

        if let Some(mut cand) = obj.power_step(&z) {
            if normalize(obj, &mut cand) {
                let rc = obj.numerator(&cand);
                if rc > r {
                    next = Some((cand, rc));
                }
            }
        }

        if next.is_none() {
            let (_, mut g) = obj.ratio_gradient(&z);
            if real {
                for v in g.iter_mut() {
                    v.im = 0.0;
                }
            }
            let gn = euclid(&g);
            let zn = euclid(&z);
            if gn * zn <= cfg.gradient_tolerance * r.max(f64::MIN_POSITIVE) {
                break;
            }
            let mut s = step;
            while s >= MIN_STEP {
                let scale = s * zn / gn;
                let mut cand: Vec<Scalar> = z.iter().zip(&g).map(|(a, b)| a + b * scale).collect();
                if normalize(obj, &mut cand) {
                    let rc = obj.numerator(&cand);
                    if rc > r {
                        step = (2.0 * s).min(1.0);
                        next = Some((cand, rc));
                        break;
                    }
                }
                s *= 0.5;
            }
            if next.is_none() {
                step = 0.25;
            }
        }

        if next.is_none() {
            // nonsmooth kink: random probes at a few scales
            let zn = euclid(&z);
            'probe: for p in 0..PROBES {
                let scale = zn * 10f64.powi(-((p % 4) as i32) - 1);
                let dir = gaussian(rng, z.len(), real);
                let dn = euclid(&dir);
                let mut cand: Vec<Scalar> = z.iter().zip(&dir).map(|(a, b)| a + b * (scale / dn)).collect();
                if normalize(obj, &mut cand) {
                    let rc = obj.numerator(&cand);
                    if rc > r {
                        next = Some((cand, rc));
                        break 'probe;
                    }
                }
            }
        }

        match next {
            Some((cand, rc)) => {
                if rc - r <= STALL_TOLERANCE * r {
                    stall += 1;
                } else {
                    stall = 0;
                }
                z = cand;
                r = rc;
                if stall >= STALL_LIMIT {
                    break;
                }
            }
            None => break,
        }
    }

    let value = obj.ratio(&z);
    Some(StartResult {
        value,
        point: z,
        iterations,
    })
}

/// Best result over the given seed points followed by `cfg.restarts` random
/// starts. Random start `r` draws from the stream `(cfg.seed, r)`, so more
/// restarts only ever add starts.
pub(crate) fn multistart<O, F>(
    obj: &O,
    seeds: Vec<Vec<Scalar>>,
    cfg: &OptimizerConfig,
    random_start: F,
) -> Vec<Option<StartResult>>
where
    O: Objective,
    F: Fn(&mut ChaCha8Rng, usize) -> Vec<Scalar> + Sync,
{
    let n_seeds = seeds.len();
    let mut results: Vec<Option<StartResult>> = seeds
        .into_par_iter()
        .enumerate()
        .map(|(i, s)| {
            let mut rng = rng_for(cfg.seed ^ 0x5EED_0000_0000_0000, i as u64);
            ascend(obj, s, cfg, &mut rng)
        })
        .collect();
    let random: Vec<Option<StartResult>> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = rng_for(cfg.seed, r as u64);
            // a start on the zero tuple is redrawn from the same stream
            for _ in 0..8 {
                let start = random_start(&mut rng, r);
                if let Some(res) = ascend(obj, start, cfg, &mut rng) {
                    return Some(res);
                }
            }
            None
        })
        .collect();
    results.extend(random);
    debug_assert_eq!(results.len(), n_seeds + cfg.restarts);
    results
}

/// Index of the best start; ties go to the lowest index.
pub(crate) fn best_index(results: &[Option<StartResult>]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, r) in results.iter().enumerate() {
        if let Some(r) = r {
            if best.is_none_or(|(_, v)| r.value > v) {
                best = Some((i, r.value));
            }
        }
    }
    best.map(|(i, _)| i)
}
