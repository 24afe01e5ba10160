//! System norms of a tuple of vectors in a few spaces.
//!
//! On ℓ₂ every orthonormal system gives the Euclidean tuple norm; on ℓ₁ and
//! ℓ∞ the exponential, cosine and sine systems disagree.

use umdnorms::norms::system_norm_with_doubling;
use umdnorms::prelude::*;

fn main() -> umdnorms::Result<()> {
    let rows = vec![
        vec![Scalar::new(1.0, 0.0), Scalar::new(0.0, 0.0), Scalar::new(-1.0, 0.5)],
        vec![Scalar::new(0.0, 0.0), Scalar::new(2.0, 0.0), Scalar::new(0.5, 0.0)],
        vec![Scalar::new(0.5, -0.5), Scalar::new(1.0, 0.0), Scalar::new(0.0, 0.0)],
    ];
    let n = rows.len();
    let grid = QuadratureGrid::default_for(n);
    let systems: [System; 3] = [
        TrigSystem::exponential(n).into(),
        TrigSystem::cosine(n).into(),
        TrigSystem::sine(n).into(),
    ];

    println!("{:<8} {:<6} {:>12} {:>12}", "space", "system", "norm", "doubling");
    for space in [NormedSpace::l1(3), NormedSpace::l2(3), NormedSpace::linf(3), NormedSpace::lp(3.0, 3)?] {
        let xs = VectorTuple::new(space.clone(), rows.clone())?;
        for s in &systems {
            let (value, residual) = system_norm_with_doubling(&xs, s, grid)?;
            println!("{:<8} {:<6} {:>12.8} {:>12.2e}", space.to_string(), s.to_string(), value, residual);
        }
    }

    // literals as accepted on the command line
    let w: NormedSpace = "wlp:p=3,w=1;2;0.5".parse()?;
    let xs = VectorTuple::new(w.clone(), rows)?;
    let ebar: System = "Ebar:3".parse()?;
    println!("{w} {ebar}: {:.8}", system_norm(&xs, &ebar, grid)?);
    Ok(())
}
