//! A short run of the check suite with a tally per check.

use std::collections::BTreeMap;

use umdnorms::prelude::*;
use umdnorms::verify::{check_constant_chain, check_identities, check_tuple_inequalities, summarize, Verdict};

fn main() -> umdnorms::Result<()> {
    let spaces = [NormedSpace::l1(2), NormedSpace::l2(3), NormedSpace::linf(3)];
    let mut results = check_identities(20, 1);
    results.extend(check_tuple_inequalities(60, &spaces, 8, 1));
    let cfg = OptimizerConfig::default().with_restarts(8).with_seed(1);
    results.extend(check_constant_chain(&[NormedSpace::l1(2)], &[2, 4], &cfg)?);

    let mut by_id: BTreeMap<&str, (usize, usize, f64)> = BTreeMap::new();
    for r in &results {
        let entry = by_id.entry(&r.id).or_insert((0, 0, 0.0));
        entry.0 += 1;
        entry.1 += usize::from(r.verdict == Verdict::Fail);
        if r.constant > 0.0 {
            entry.2 = entry.2.max(r.ratio / r.constant);
        }
    }
    for (id, (count, failed, worst)) in by_id {
        println!("{id:<40} {count:>4} runs {failed:>2} failed  worst ratio/constant {worst:.3}");
    }
    let s = summarize(&results);
    println!("passed {} failed {} informational {}", s.passed, s.failed, s.informational);
    Ok(())
}
