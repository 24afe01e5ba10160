//! Driving the command-line layer in-process: parse, print back, execute.

use clap::Parser;
use umdnorms::cli::{execute, EstimateRecord, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = RunConfig::try_parse_from(["umdnorms", "delta", "--from", "C:3", "--to", "S:3", "--space", "l1:2", "--restarts", "4"])?;
    println!("canonical: {}", cfg.to_args().join(" "));

    let mut out = Vec::new();
    execute(&cfg, &mut out)?;
    let text = String::from_utf8(out)?;
    let record: EstimateRecord = serde_json::from_str(&text)?;
    print!("{text}");
    println!("value {:.6} with seed {}", record.value, record.seed);
    Ok(())
}
