//! Acceptance run: one pass/fail line per criterion.
//!
//! Each criterion writes its result lines to `<tmp>/first/<k>.txt`; the
//! determinism criterion recomputes them into `<tmp>/second` and compares
//! bytes. Set `UMDNORMS_ACCEPTANCE_FULL=1` to recompute the two long scans
//! in full instead of a sample of their independent cells and rows.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::Instant;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use umdnorms::cli::{read_growth, GrowthRecord};
use umdnorms::kernels::{kernel_eval, vp_apply, vp_coefficient, vp_l1_norm, KernelSpec};
use umdnorms::norms::{l2_norm, GridFunction};
use umdnorms::prelude::*;
use umdnorms::systems::gram_deviation;
use umdnorms::verify::{
    check_constant_chain, check_identities, check_tuple_inequalities, CheckClass, CheckResult, Verdict,
};

const SEED: u64 = 20240;
const GROWTH_RESTARTS: usize = 8;

struct Outcome {
    pass: bool,
    detail: String,
    lines: Vec<String>,
}

fn c(re: f64, im: f64) -> Scalar {
    Scalar::new(re, im)
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).unwrap()
}

fn systems(n: usize) -> Vec<System> {
    vec![
        TrigSystem::exponential(n).into(),
        TrigSystem::cosine(n).into(),
        TrigSystem::sine(n).into(),
    ]
}

/// Largest singular value by power iteration on `AᴴA`, started from all ones
/// plus a fixed perturbation.
fn power_sigma(a: &DMatrix<Scalar>) -> f64 {
    let g = a.adjoint() * a;
    let mut v = nalgebra::DVector::from_fn(g.nrows(), |i, _| c(1.0 + 0.1 * i as f64, 0.05 * i as f64));
    let mut lambda = 0.0;
    for _ in 0..20000 {
        let w = &g * &v;
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        let next = norm / v.norm();
        v = w / c(norm, 0.0);
        if (next - lambda).abs() <= 1e-16 * next {
            lambda = next;
            break;
        }
        lambda = next;
    }
    lambda.sqrt()
}

fn hilbert_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let cfg = OptimizerConfig::default().with_seed(SEED);
    let mut worst: f64 = 0.0;
    let mut lines = Vec::new();
    for trial in 0..50 {
        let rows = rng.gen_range(1..=5);
        let cols = rng.gen_range(1..=5);
        let n = rng.gen_range(1..=12);
        let m = DMatrix::from_fn(rows, cols, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let sigma = power_sigma(&m);
        let t = LinearOperator::new(NormedSpace::l2(cols), NormedSpace::l2(rows), m).unwrap();
        let grid = QuadratureGrid::default_for(n);
        for to in systems(n) {
            for from in systems(n) {
                let r = rho_estimate(&t, &to, &from, grid, &cfg).unwrap();
                let d = delta_estimate(&t, &to, &from, grid, &cfg).unwrap();
                for v in [r.value, d.value] {
                    worst = worst.max((v - sigma).abs() / sigma);
                }
                lines.push(format!("{trial} {to} {from} {} {} {}", json(&r.value), json(&d.value), json(&sigma)));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        pass: worst <= 1e-10 && secs < 60.0,
        detail: format!("max relative error {worst:.2e} over 450 pairs, {secs:.1} s"),
        lines,
    }
}

fn gram_exactness() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut lines = Vec::new();
    for n in 1..=64 {
        let grid = QuadratureGrid::new(2 * n + 1).unwrap();
        for s in systems(n) {
            let lib = gram_deviation(&s, grid);
            // direct sums of the closed-form members
            let mut direct: f64 = 0.0;
            for j in 0..n {
                for k in 0..n {
                    let mut acc = c(0.0, 0.0);
                    for m in 0..grid.len() {
                        let t = -PI + 2.0 * PI * m as f64 / grid.len() as f64;
                        acc += member(&s, j, t) * member(&s, k, t).conj();
                    }
                    let g = acc / grid.len() as f64;
                    direct = direct.max((g - c(if j == k { 1.0 } else { 0.0 }, 0.0)).norm());
                }
            }
            worst = worst.max(lib).max(direct);
            lines.push(format!("{s} {} {}", json(&lib), json(&direct)));
        }
    }
    Outcome {
        pass: worst < 1e-12,
        detail: format!("max deviation {worst:.2e} for n <= 64 on 2n+1 nodes"),
        lines,
    }
}

fn member(s: &System, k: usize, t: f64) -> Scalar {
    let f = (k + 1) as f64;
    match s.to_string().as_bytes()[0] {
        b'E' => c((f * t).cos(), (f * t).sin()),
        b'C' => c(2f64.sqrt() * (f * t).cos(), 0.0),
        _ => c(2f64.sqrt() * (f * t).sin(), 0.0),
    }
}

fn vallee_poussin() -> Outcome {
    let mut lines = Vec::new();
    let mut coeff_err: f64 = 0.0;
    for m in 1..=32 {
        let grid = QuadratureGrid::new(8 * m).unwrap();
        for k in -(2 * m as i64 + 2)..=(2 * m as i64 + 2) {
            let mut acc = c(0.0, 0.0);
            for t in grid.nodes() {
                acc += kernel_eval(KernelSpec::vallee_poussin(m), t) * c((k as f64 * t).cos(), -(k as f64 * t).sin());
            }
            let q = acc / grid.len() as f64;
            coeff_err = coeff_err.max((q - c(vp_coefficient(m, k), 0.0)).norm());
        }
    }
    let mut l1_max: f64 = 0.0;
    for m in 1..=64 {
        let v = vp_l1_norm(m, QuadratureGrid::new(16 * (2 * m - 1)).unwrap()).unwrap();
        l1_max = l1_max.max(v);
        lines.push(format!("l1 {m} {}", json(&v)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
    let spaces = [NormedSpace::l1(3), NormedSpace::linf(3), NormedSpace::l2(2), NormedSpace::linf(2).real()];
    let mut excess = f64::MIN;
    for i in 0..200 {
        let space = spaces[i % spaces.len()].clone();
        let m = rng.gen_range(1..=16);
        let grid = QuadratureGrid::new(16 * (2 * m - 1)).unwrap();
        let real = space.is_real();
        let f = GridFunction::from_fn(space.clone(), grid, |_| {
            (0..space.dim())
                .map(|_| c(rng.gen_range(-1.0..1.0), if real { 0.0 } else { rng.gen_range(-1.0..1.0) }))
                .collect()
        })
        .unwrap();
        let lhs = l2_norm(&vp_apply(m, &f).unwrap());
        let rhs = l2_norm(&f);
        excess = excess.max(lhs - 3.0 * rhs);
        lines.push(format!("apply {space} {m} {} {}", json(&lhs), json(&rhs)));
    }
    Outcome {
        pass: coeff_err <= 1e-10 && l1_max <= 3.0 + 1e-6 && excess <= 1e-9,
        detail: format!(
            "coefficient error {coeff_err:.2e}, max L1 norm {l1_max:.6}, max ||V f|| - 3||f|| = {excess:.3}"
        ),
        lines,
    }
}

fn tuple_spaces() -> Vec<NormedSpace> {
    let mut out = Vec::new();
    for dim in 1..=6 {
        out.extend([NormedSpace::l1(dim), NormedSpace::l2(dim), NormedSpace::linf(dim)]);
    }
    out
}

fn constructive_sweep() -> Outcome {
    let mut results = check_tuple_inequalities(1000, &tuple_spaces(), 16, SEED);
    results.extend(check_identities(1000, SEED));
    let failed: Vec<&CheckResult> = results.iter().filter(|r| r.failed()).collect();
    let identity_worst = results
        .iter()
        .filter(|r| r.class == CheckClass::Identity)
        .map(|r| r.lhs)
        .fold(0.0, f64::max);
    let checked = results.iter().filter(|r| r.verdict != Verdict::Informational).count();
    for f in failed.iter().take(5) {
        eprintln!("  violation: {}", json(f));
    }
    Outcome {
        pass: failed.is_empty(),
        detail: format!(
            "{} violations in {checked} checks over 1000 instances, worst identity residual {identity_worst:.2e}",
            failed.len()
        ),
        lines: results.iter().map(json).collect(),
    }
}

fn chain_spaces() -> Vec<NormedSpace> {
    vec![NormedSpace::l1(2), NormedSpace::l1(3), NormedSpace::linf(2), NormedSpace::linf(3)]
}

fn chain_config() -> OptimizerConfig {
    OptimizerConfig::default().with_restarts(64).with_seed(SEED)
}

fn constant_chain() -> Outcome {
    let results = check_constant_chain(&chain_spaces(), &[2, 4, 8, 12], &chain_config()).unwrap();
    let failed = results.iter().filter(|r| r.failed()).count();
    let mut margins = Vec::new();
    for id in [
        "sine_cosine_by_cosine_sine",
        "cosine_sine_by_sine_cosine",
        "exponential_delta_by_mu",
        "delta_sine_cosine_by_exponential",
        "delta_cosine_sine_by_exponential",
    ] {
        let worst = results
            .iter()
            .filter(|r| r.id == id)
            .map(|r| r.ratio / r.constant)
            .fold(0.0, f64::max);
        margins.push(format!("{id} {worst:.3}"));
    }
    for r in results.iter().filter(|r| r.failed()) {
        eprintln!("  failure: {}", json(r));
    }
    Outcome {
        pass: failed == 0,
        detail: format!("{failed} failures in {} lines; worst ratio/constant: {}", results.len(), margins.join(", ")),
        lines: results.iter().map(json).collect(),
    }
}

fn oracle_equivalence() -> Outcome {
    let space = NormedSpace::linf(2).real();
    let t = LinearOperator::identity(&space);
    let grid = QuadratureGrid::default_for(2);
    let cfg = OptimizerConfig::default().with_restarts(64).with_seed(SEED);
    let mut worst: f64 = 0.0;
    let mut lines = Vec::new();
    let (e, cs, sn) = (systems(2)[0].clone(), systems(2)[1].clone(), systems(2)[2].clone());
    for (to, from) in [(&sn, &cs), (&cs, &sn), (&e, &e)] {
        let est = rho_estimate(&t, to, from, grid, &cfg).unwrap().value;
        let truth = brute_force_rho(&t, to, from, grid, 24).unwrap();
        worst = worst.max((est - truth).abs() / truth);
        lines.push(format!("{to} {from} {} {}", json(&est), json(&truth)));
    }
    Outcome {
        pass: worst <= 0.01,
        detail: format!("max relative gap {worst:.2e} on real linf:2, n = 2"),
        lines,
    }
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_umdnorms")
}

fn run_growth(space: &str, range: &str, restarts: usize, out: &Path) {
    let status = Command::new(bin())
        .args(["growth", "--space", space, "--n", range, "--seed", &SEED.to_string()])
        .args(["--restarts", &restarts.to_string(), "--out"])
        .arg(out)
        .status()
        .expect("run umdnorms");
    assert!(status.success(), "growth {space} {range} failed");
}

fn growth_contrast(dir: &Path) -> Outcome {
    let start = Instant::now();
    let hilbert = dir.join("growth_l2_4.csv");
    let l1 = dir.join("growth_l1_8.csv");
    run_growth("l2:4", "1..32", 32, &hilbert);
    run_growth("l1:8", "1..32", GROWTH_RESTARTS, &l1);
    let h = read_growth(&hilbert).unwrap();
    let g = read_growth(&l1).unwrap();
    let flat = h.iter().map(|r| (r.delta_ee - 1.0).abs()).fold(0.0, f64::max);
    let drop = g.windows(2).map(|w| w[0].delta_ee - w[1].delta_ee).fold(f64::MIN, f64::max);
    let first = g[0].delta_ee;
    let max = g.iter().map(|r| r.delta_ee).fold(f64::MIN, f64::max);
    let secs = start.elapsed().as_secs_f64();
    // the chain constants row by row, reported alongside
    let chain_ok = g.iter().all(|r: &GrowthRecord| {
        r.rho_sc <= 2.0 * r.rho_cs * 1.05 && r.rho_cs <= 9.0 * r.rho_sc * 1.05 && r.delta_ee <= 96.0 * r.mu * 1.05
    });
    let mut lines = Vec::new();
    for p in [&hilbert, &l1] {
        lines.extend(fs::read_to_string(p).unwrap().lines().map(String::from));
    }
    Outcome {
        pass: h.len() == 32 && g.len() == 32 && flat <= 1e-6 && drop <= 0.02 && max > first && secs < 1800.0,
        detail: format!(
            "l2:4 max |delta-1| {flat:.1e}; l1:8 largest drop {drop:.4}, delta(n=1) {first:.4}, max {max:.4}, \
             margin {:.4}; row-wise chain ratios {}; {secs:.0} s",
            max - first,
            if chain_ok { "hold" } else { "violated" }
        ),
        lines,
    }
}

fn data_rows(path: &Path) -> Vec<String> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(String::from)
        .collect()
}

fn determinism(first: &Path, second: &Path, work: &Path) -> Outcome {
    let full = std::env::var("UMDNORMS_ACCEPTANCE_FULL").is_ok_and(|v| v == "1");
    let mut mismatched = Vec::new();
    let mut compare = |name: &str, lines: Vec<String>| {
        let path = second.join(name);
        fs::write(&path, lines.join("\n")).unwrap();
        if fs::read(first.join(name)).unwrap() != fs::read(&path).unwrap() {
            mismatched.push(name.to_string());
        }
    };
    compare("1.txt", hilbert_oracle().lines);
    compare("2.txt", gram_exactness().lines);
    compare("3.txt", vallee_poussin().lines);
    compare("4.txt", constructive_sweep().lines);
    compare("6.txt", oracle_equivalence().lines);
    let mut sampled = String::new();
    if full {
        compare("5.txt", constant_chain().lines);
        let dir = work.join("second_growth");
        fs::create_dir_all(&dir).unwrap();
        compare("7.txt", growth_contrast(&dir).lines);
    } else {
        // chain cells and growth rows depend only on their own seed
        let reference: Vec<String> = fs::read_to_string(first.join("5.txt")).unwrap().lines().map(String::from).collect();
        let cells = check_constant_chain(&[NormedSpace::l1(2), NormedSpace::linf(3)], &[2, 12], &chain_config()).unwrap();
        for r in &cells {
            if !reference.contains(&json(r)) {
                mismatched.push(format!("5.txt cell {} n={}", r.instance.space, r.instance.n));
                break;
            }
        }
        let whole = data_rows(&work.join("first_growth").join("growth_l1_8.csv"));
        for (range, idx) in [("1..4", 0..4), ("31..32", 30..32)] {
            let out = work.join(format!("rows_{}.csv", range.replace("..", "_")));
            run_growth("l1:8", range, GROWTH_RESTARTS, &out);
            if data_rows(&out) != whole[idx] {
                mismatched.push(format!("7 growth rows {range}"));
            }
        }
        let out = work.join("again_l2_4.csv");
        run_growth("l2:4", "1..32", 32, &out);
        if fs::read(&out).unwrap() != fs::read(work.join("first_growth").join("growth_l2_4.csv")).unwrap() {
            mismatched.push("7 growth l2:4".into());
        }
        sampled = "; criteria 5 and 7 by sampled cells and rows".into();
    }
    Outcome {
        pass: mismatched.is_empty(),
        detail: if mismatched.is_empty() {
            format!("reruns byte-identical{sampled}")
        } else {
            format!("differences in {}", mismatched.join(", "))
        },
        lines: Vec::new(),
    }
}

fn main() -> ExitCode {
    // `cargo test -- --list` and filters should not trigger the long run
    let args: Vec<String> = std::env::args().collect();
    if args.iter().any(|a| a == "--list") {
        println!("acceptance: test");
        return ExitCode::SUCCESS;
    }
    let tmp = tempfile::tempdir().unwrap();
    let work: PathBuf = tmp.path().to_path_buf();
    let first = work.join("first");
    let second = work.join("second");
    for d in [&first, &second, &work.join("first_growth")] {
        fs::create_dir_all(d).unwrap();
    }

    let names = [
        "hilbert oracle",
        "quadrature exactness",
        "de la Vallee Poussin",
        "constructive sweep",
        "chain constants at estimate level",
        "oracle equivalence",
        "growth contrast",
        "determinism",
    ];
    let mut all = true;
    for (k, name) in names.iter().enumerate() {
        let id = k + 1;
        let outcome = match id {
            1 => hilbert_oracle(),
            2 => gram_exactness(),
            3 => vallee_poussin(),
            4 => constructive_sweep(),
            5 => constant_chain(),
            6 => oracle_equivalence(),
            7 => growth_contrast(&work.join("first_growth")),
            _ => determinism(&first, &second, &work),
        };
        if id < 8 {
            fs::write(first.join(format!("{id}.txt")), outcome.lines.join("\n")).unwrap();
        }
        all &= outcome.pass;
        println!(
            "criterion {id} ({name}): {} - {}",
            if outcome.pass { "PASS" } else { "FAIL" },
            outcome.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
