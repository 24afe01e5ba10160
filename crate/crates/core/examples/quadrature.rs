//! Discrete orthonormality of the trigonometric systems on equispaced grids,
//! and where it breaks.

use umdnorms::prelude::*;
use umdnorms::systems::gram_deviation;

fn main() -> umdnorms::Result<()> {
    println!("{:>4} {:>6} {:>12} {:>12} {:>12}", "n", "nodes", "E", "C", "S");
    for n in [1, 4, 16, 64] {
        let grid = QuadratureGrid::new(2 * n + 1)?;
        let dev = |s: System| gram_deviation(&s, grid);
        println!(
            "{n:>4} {:>6} {:>12.2e} {:>12.2e} {:>12.2e}",
            grid.len(),
            dev(TrigSystem::exponential(n).into()),
            dev(TrigSystem::cosine(n).into()),
            dev(TrigSystem::sine(n).into()),
        );
    }

    // frequencies 0..8 contain a pair eight apart, which an 8-node grid aliases
    let grid = QuadratureGrid::new(8)?;
    let range: System = TrigSystem::exponential_range(0, 8)?.into();
    println!("{range} on {} nodes: {:.3}", grid.len(), gram_deviation(&range, grid));

    // sampling refuses unresolved systems
    let s: System = TrigSystem::sine(9).into();
    if let Err(e) = s.check_resolved(&grid) {
        println!("S:9 on 8 nodes: {e}");
    }
    Ok(())
}
