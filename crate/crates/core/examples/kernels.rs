//! Dirichlet and de la Vallée Poussin kernels: values, coefficients,
//! L1 norms and smoothing of a vector-valued function.

use umdnorms::kernels::vp_coefficient;
use umdnorms::norms::l2_norm;
use umdnorms::prelude::*;

fn main() -> umdnorms::Result<()> {
    for m in [1, 2, 4, 8, 16, 32, 64] {
        let grid = QuadratureGrid::new(16 * (2 * m - 1))?;
        let at_zero = kernel_eval(KernelSpec::vallee_poussin(m), 0.0);
        println!("m = {m:>2}: V_m(0) = {at_zero:>6.1}, L1 norm {:.6}", vp_l1_norm(m, grid)?);
    }
    let m = 4;
    let coeffs: Vec<String> = (0..=2 * m as i64).map(|k| format!("{:.2}", vp_coefficient(m, k))).collect();
    println!("coefficients of V_{m} for k = 0..{}: {}", 2 * m, coeffs.join(" "));

    // a square wave in ℓ∞²; smoothing keeps frequencies up to m and never
    // grows the norm by more than the kernel's L1 norm
    let grid = QuadratureGrid::new(256)?;
    let space = NormedSpace::linf(2);
    let f = GridFunction::from_fn(space, grid, |t| {
        let s = if t.sin() >= 0.0 { 1.0 } else { -1.0 };
        vec![Scalar::new(s, 0.0), Scalar::new(t.cos(), 0.0)]
    })?;
    for m in [1, 4, 16] {
        let g = vp_apply(m, &f)?;
        println!("||V_{m} f|| / ||f|| = {:.6}", l2_norm(&g) / l2_norm(&f));
    }
    Ok(())
}
