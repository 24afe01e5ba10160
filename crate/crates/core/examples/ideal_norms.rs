//! Lower bounds for ρ, δ and μ of the identity on ℓ₁², with certificates.

use umdnorms::prelude::*;

fn main() -> umdnorms::Result<()> {
    let space = NormedSpace::l1(2);
    let t = LinearOperator::identity(&space);
    let n = 4;
    let grid = QuadratureGrid::default_for(n);
    let cfg = OptimizerConfig::default().with_restarts(16).with_seed(7);
    let c: System = TrigSystem::cosine(n).into();
    let s: System = TrigSystem::sine(n).into();
    let e: System = TrigSystem::exponential(n).into();

    let rho = rho_estimate(&t, &s, &c, grid, &cfg)?;
    println!("rho(S,C) >= {:.6}  ({} restarts, {} iterations)", rho.value, rho.restarts_used, rho.iterations);
    if let Some(xs) = rho.tuple() {
        for (k, x) in xs.entries().iter().enumerate() {
            println!("  x_{} = {:?}", k + 1, x.iter().map(|z| format!("{:.4}", z)).collect::<Vec<_>>());
        }
    }
    println!("  on the doubled grid it moves by {:.2e}", doubling_residual(&rho, &t, &s, &c, grid)?);

    let delta = delta_estimate(&t, &e, &e, grid, &cfg)?;
    println!("delta(E,E) >= {:.6}", delta.value);

    let mu = mu_estimate(&t, n, grid, &cfg)?;
    println!("mu_{n} >= {:.6} (C,S: {:.6}, S,C: {:.6})", mu.value(), mu.cos_sin.value, mu.sin_cos.value);

    // on Euclidean spaces every ideal norm is the largest singular value
    let m = nalgebra::DMatrix::from_row_slice(2, 2, &[
        Scalar::new(1.0, 0.0), Scalar::new(2.0, 0.0),
        Scalar::new(0.0, 0.0), Scalar::new(1.0, 0.0),
    ]);
    let a = LinearOperator::new(NormedSpace::l2(2), NormedSpace::l2(2), m)?;
    let exact = delta_estimate(&a, &s, &c, grid, &cfg)?;
    println!("on l2:2, delta(S,C) = {:.12} exact = {}", exact.value, exact.exact);
    Ok(())
}
