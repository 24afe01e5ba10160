//! δ(ℰ_n,ℰ_n) and μ_n for the identity on ℓ₂⁴ and ℓ₁⁴ as n grows.
//!
//! Run with `--release`; pass an upper n as the first argument.

use umdnorms::cli::{growth_scan, GrowthConfig, NRange};
use umdnorms::prelude::*;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let hi: usize = std::env::args().nth(1).map_or(Ok(8), |s| s.parse())?;
    for space in [NormedSpace::l2(4), NormedSpace::l1(4)] {
        let cfg = GrowthConfig {
            space: space.clone(),
            n: NRange { lo: 1, hi },
            optimizer: OptimizerConfig::default().with_restarts(8),
            grid: None,
            warm_start: false,
        };
        println!("{space}");
        growth_scan(&cfg, |r| {
            println!("  n = {:>3}  delta {:.6}  mu {:.6}", r.n, r.delta_ee, r.mu);
            Ok(())
        })?;
    }
    Ok(())
}
