//! The optimizer against an exhaustive angle net on a tiny real instance.

use umdnorms::prelude::*;

fn main() -> umdnorms::Result<()> {
    let space = NormedSpace::linf(2).real();
    let t = LinearOperator::identity(&space);
    let grid = QuadratureGrid::default_for(2);
    let c: System = TrigSystem::cosine(2).into();
    let s: System = TrigSystem::sine(2).into();

    for restarts in [1, 4, 16, 64] {
        let cfg = OptimizerConfig::default().with_restarts(restarts);
        let est = rho_estimate(&t, &s, &c, grid, &cfg)?;
        println!("{restarts:>2} restarts: {:.8}", est.value);
    }
    for resolution in [6, 12, 24] {
        println!("net {resolution:>2}:      {:.8}", brute_force_rho(&t, &s, &c, grid, resolution)?);
    }

    // the net grows exponentially, so it stops at six real unknowns
    let wide = LinearOperator::identity(&NormedSpace::linf(4).real());
    if let Err(e) = brute_force_rho(&wide, &s, &c, grid, 8) {
        println!("linf:4:real, n = 2: {e}");
    }
    Ok(())
}
