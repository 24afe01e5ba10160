//! Ratio objectives for the two ideal norms, with Euclidean gradients.
//!
//! Gradients are taken with respect to the real pairing `Re Σ ⟨dz_i, g_i⟩`,
//! i.e. a complex vector `g` stands for the real gradient `(Re g, Im g)`.

use crate::norms::{coefficients_sampled, sampled_norm, synthesize_node};
use crate::spaces::{LinearOperator, NormedSpace, Scalar};
use crate::systems::SampledSystem;

const ZERO: Scalar = Scalar::new(0.0, 0.0);

pub(crate) trait Objective: Sync {
    /// Number of complex variables.
    fn len(&self) -> usize;

    fn real(&self) -> bool;

    fn numerator(&self, z: &[Scalar]) -> f64;

    fn denominator(&self, z: &[Scalar]) -> f64;

    fn ratio(&self, z: &[Scalar]) -> f64 {
        let d = self.denominator(z);
        if d == 0.0 {
            0.0
        } else {
            self.numerator(z) / d
        }
    }

    /// Ratio and its gradient at `z`.
    fn ratio_gradient(&self, z: &[Scalar]) -> (f64, Vec<Scalar>);

    /// Maximizer of `Re⟨·, ∂numerator(z)⟩` on the unit sphere of the
    /// denominator, when it has a closed form.
    fn power_step(&self, _z: &[Scalar]) -> Option<Vec<Scalar>> {
        None
    }
}

/// Value and gradient of `‖(y_k)|A‖` for a flat tuple.
pub(crate) fn sampled_norm_grad(
    space: &NormedSpace,
    sampled: &SampledSystem,
    flat: &[Scalar],
) -> (f64, Vec<Scalar>) {
    let dim = space.dim();
    let mut buf = vec![ZERO; dim];
    let mut grad = vec![ZERO; flat.len()];
    let mut acc = 0.0;
    for m in 0..sampled.nodes {
        synthesize_node(sampled, m, flat, dim, &mut buf);
        let v = space.norm_of(&buf);
        if v == 0.0 {
            continue;
        }
        acc += v * v;
        let s = space.subgradient_of(&buf, v);
        let row = sampled.row(m);
        for (k, a) in row.iter().enumerate() {
            let coef = a.conj() * v;
            if coef == ZERO {
                continue;
            }
            let g = &mut grad[k * dim..(k + 1) * dim];
            for (gi, si) in g.iter_mut().zip(&s) {
                *gi += si * coef;
            }
        }
    }
    let value = (acc * sampled.weight).sqrt();
    if value > 0.0 {
        let scale = sampled.weight / value;
        for g in grad.iter_mut() {
            *g *= scale;
        }
    }
    (value, grad)
}

fn apply_tuple(op: &LinearOperator, x: &[Scalar], dx: usize, dy: usize) -> Vec<Scalar> {
    let n = x.len() / dx;
    let mut y = vec![ZERO; n * dy];
    for k in 0..n {
        op.apply_into(&x[k * dx..(k + 1) * dx], &mut y[k * dy..(k + 1) * dy]);
    }
    y
}

fn apply_adjoint_tuple(op: &LinearOperator, y: &[Scalar], dx: usize, dy: usize) -> Vec<Scalar> {
    let n = y.len() / dy;
    let mut x = vec![ZERO; n * dx];
    for k in 0..n {
        op.apply_adjoint_into(&y[k * dy..(k + 1) * dy], &mut x[k * dx..(k + 1) * dx]);
    }
    x
}

/// `‖(Tx_k)|B‖ / ‖(x_k)|A‖` over tuples.
pub(crate) struct RhoObjective<'a> {
    pub op: &'a LinearOperator,
    pub to: SampledSystem,
    pub from: SampledSystem,
}

impl RhoObjective<'_> {
    fn dims(&self) -> (usize, usize) {
        (self.op.domain().dim(), self.op.codomain().dim())
    }
}

impl Objective for RhoObjective<'_> {
    fn len(&self) -> usize {
        self.from.size * self.op.domain().dim()
    }

    fn real(&self) -> bool {
        self.op.domain().is_real()
    }

    fn numerator(&self, z: &[Scalar]) -> f64 {
        let (dx, dy) = self.dims();
        let y = apply_tuple(self.op, z, dx, dy);
        sampled_norm(self.op.codomain(), &self.to, &y)
    }

    fn denominator(&self, z: &[Scalar]) -> f64 {
        sampled_norm(self.op.domain(), &self.from, z)
    }

    fn ratio_gradient(&self, z: &[Scalar]) -> (f64, Vec<Scalar>) {
        let (dx, dy) = self.dims();
        let (den, g_den) = sampled_norm_grad(self.op.domain(), &self.from, z);
        let y = apply_tuple(self.op, z, dx, dy);
        let (num, g_y) = sampled_norm_grad(self.op.codomain(), &self.to, &y);
        let g_num = apply_adjoint_tuple(self.op, &g_y, dx, dy);
        ratio_grad(num, den, &g_num, &g_den)
    }
}

fn ratio_grad(num: f64, den: f64, g_num: &[Scalar], g_den: &[Scalar]) -> (f64, Vec<Scalar>) {
    if den == 0.0 {
        return (0.0, vec![ZERO; g_num.len()]);
    }
    let r = num / den;
    let g = g_num
        .iter()
        .zip(g_den)
        .map(|(a, b)| (a - b * r) / den)
        .collect();
    (r, g)
}

/// `‖(T⟨f, ā_k⟩)|B‖ / ‖f|L₂‖` over grid functions on the domain of `A`.
pub(crate) struct DeltaObjective<'a> {
    pub op: &'a LinearOperator,
    pub to: SampledSystem,
    pub from: SampledSystem,
    /// Dual of the domain, for the closed-form power step.
    pub dual: Option<NormedSpace>,
}

impl DeltaObjective<'_> {
    fn dims(&self) -> (usize, usize) {
        (self.op.domain().dim(), self.op.codomain().dim())
    }

    fn numerator_grad(&self, z: &[Scalar]) -> (f64, Vec<Scalar>) {
        let (dx, dy) = self.dims();
        let c = coefficients_sampled(&self.from, dx, z);
        let y = apply_tuple(self.op, &c, dx, dy);
        let (num, g_y) = sampled_norm_grad(self.op.codomain(), &self.to, &y);
        let g_c = apply_adjoint_tuple(self.op, &g_y, dx, dy);
        // ⟨f, ā_k⟩ = w Σ_m f_m conj(a_k(m)), so ∂/∂f_m = w Σ_k a_k(m) g_c[k]
        let w = self.from.weight;
        let mut g = vec![ZERO; z.len()];
        for m in 0..self.from.nodes {
            let row = self.from.row(m);
            let gm = &mut g[m * dx..(m + 1) * dx];
            for (k, a) in row.iter().enumerate() {
                let gc = &g_c[k * dx..(k + 1) * dx];
                for (o, v) in gm.iter_mut().zip(gc) {
                    *o += v * a;
                }
            }
            for o in gm.iter_mut() {
                *o *= w;
            }
        }
        (num, g)
    }
}

impl Objective for DeltaObjective<'_> {
    fn len(&self) -> usize {
        self.from.nodes * self.op.domain().dim()
    }

    fn real(&self) -> bool {
        self.op.domain().is_real()
    }

    fn numerator(&self, z: &[Scalar]) -> f64 {
        let (dx, dy) = self.dims();
        let c = coefficients_sampled(&self.from, dx, z);
        let y = apply_tuple(self.op, &c, dx, dy);
        sampled_norm(self.op.codomain(), &self.to, &y)
    }

    fn denominator(&self, z: &[Scalar]) -> f64 {
        let space = self.op.domain();
        let acc: f64 = z
            .chunks(space.dim())
            .map(|v| {
                let n = space.norm_of(v);
                n * n
            })
            .sum();
        (acc * self.from.weight).sqrt()
    }

    fn ratio_gradient(&self, z: &[Scalar]) -> (f64, Vec<Scalar>) {
        let space = self.op.domain();
        let dx = space.dim();
        let w = self.from.weight;
        let den = self.denominator(z);
        let mut g_den = vec![ZERO; z.len()];
        if den > 0.0 {
            for (m, v) in z.chunks(dx).enumerate() {
                let n = space.norm_of(v);
                if n == 0.0 {
                    continue;
                }
                let s = space.subgradient_of(v, n);
                for (o, si) in g_den[m * dx..(m + 1) * dx].iter_mut().zip(s) {
                    *o = si * (w * n / den);
                }
            }
        }
        let (num, g_num) = self.numerator_grad(z);
        ratio_grad(num, den, &g_num, &g_den)
    }

    fn power_step(&self, z: &[Scalar]) -> Option<Vec<Scalar>> {
        let dual = self.dual.as_ref()?;
        let (_, g) = self.numerator_grad(z);
        let dx = self.op.domain().dim();
        let w = self.from.weight;
        let real = self.real();
        let mut out = vec![ZERO; z.len()];
        for (m, gm) in g.chunks(dx).enumerate() {
            let gamma: Vec<Scalar> = gm
                .iter()
                .map(|v| {
                    let v = v / w;
                    if real {
                        Scalar::new(v.re, 0.0)
                    } else {
                        v
                    }
                })
                .collect();
            let size = dual.norm_of(&gamma);
            if size == 0.0 {
                continue;
            }
            let u = dual.subgradient_of(&gamma, size);
            for (o, ui) in out[m * dx..(m + 1) * dx].iter_mut().zip(u) {
                *o = ui * size;
            }
        }
        Some(out)
    }
}
