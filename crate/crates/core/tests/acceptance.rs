use std::collections::BTreeMap;
use std::path::Path;
use std::time::{Duration, Instant};

use codecrit::bounds::{bound_report, delta_epsilon, delta_epsilon_exact, pipeline_bound, TSIRELSON};
use codecrit::cli::config::IsingConfig;
use codecrit::codes::{linear_code, random_code, Alphabet, Code, Word};
use codecrit::complexity::code_proxy;
use codecrit::fractal::{box_dimension, BoxCountConfig, DEFAULT_BOX_CAP};
use codecrit::ising::{
    energy_correlator, estimate_nu, run_mc_observe, Algorithm, MCConfig, SpinLattice, ONSAGER_TC,
};
use codecrit::statmech::{
    critical_beta, keane_residual, partition_function, partition_function_code, rescale_to_keane,
    WeightAssignment,
};
use codecrit::stats::blocking_error;
use num_rational::Rational64;
use rand::Rng as _;

type Outcome = (bool, String);

fn exact_counts() -> BoxCountConfig {
    BoxCountConfig {
        cap: DEFAULT_BOX_CAP,
        fallback_samples: None,
        seed: 0,
    }
}

fn criterion_1() -> Outcome {
    let mut codes = vec![
        Code::from_strs(2, &["00", "11"]).unwrap(),
        Code::from_strs(2, &["00", "01", "10"]).unwrap(),
        Code::full(2, 2).unwrap(),
    ];
    for i in 0..10u64 {
        let q = 2 + (i % 2) as u32;
        let n = 2 + (i % 3) as usize;
        let total = u64::from(q).pow(n as u32);
        let size = 2 + (i * 7) % (total - 2);
        codes.push(random_code(q, n, size, 100 + i).unwrap());
    }
    let mut worst = 0.0f64;
    for c in &codes {
        let est = box_dimension(c, &[1, 2, 3, 4], &exact_counts()).unwrap();
        if est.counts.len() != 4 || est.any_sampled() {
            return (false, format!("code of size {} was not enumerated exactly", c.size()));
        }
        worst = worst.max((est.normalized_dimension - c.rate()).abs());
    }
    (worst <= 1e-12, format!("{} codes, max |dim - rate| = {worst:.2e} (tol 1e-12)", codes.len()))
}

fn prefix_code(q: u32, n: usize, size: u64) -> Code {
    let words = (0..size).map(|i| Word::from_index(i, q, n)).collect();
    Code::new(Alphabet::new(q).unwrap(), n, words).unwrap()
}

fn criterion_2() -> Outcome {
    let cases: [(u32, usize, u64); 6] = [(2, 4, 4), (2, 8, 16), (2, 12, 64), (3, 6, 27), (2, 16, 4096), (3, 8, 81)];
    let mut worst = 0.0f64;
    let mut divergence_ok = true;
    for (q, n, size) in cases {
        let code = prefix_code(q, n, size);
        let rate = code.rate();
        let w = WeightAssignment::uniform_keane(&code, rate).unwrap();
        for k in 0..50 {
            let beta = rate + 0.05 + 0.1 * f64::from(k);
            let direct = partition_function(&w, beta).unwrap().value();
            let closed = partition_function_code(q, n, rate, beta).value();
            match (direct, closed) {
                (Some(a), Some(b)) => worst = worst.max((a - b).abs()),
                _ => return (false, format!("q={q} n={n}: divergent at beta={beta}")),
            }
        }
        for k in 1..=20 {
            let beta = rate * f64::from(k) / 20.0;
            divergence_ok &= partition_function_code(q, n, rate, beta).is_divergent();
            if k < 20 {
                divergence_ok &= partition_function(&w, beta).unwrap().is_divergent();
            }
        }
    }
    (
        worst <= 1e-12 && divergence_ok,
        format!("max |Z - Z_closed| = {worst:.2e} (tol 1e-12), divergence below R flagged: {divergence_ok}"),
    )
}

fn criterion_3() -> Outcome {
    let mut r = codecrit::rng::stream(3, 0);
    let mut worst_res = 0.0f64;
    let mut worst_beta = 0.0f64;
    for i in 0..100u64 {
        let q = 2 + (i % 2) as u32;
        let n = 3 + (i % 4) as usize;
        let total = u64::from(q).pow(n as u32);
        let size = r.random_range(2..=total.min(200));
        let code = random_code(q, n, size, 1000 + i).unwrap();
        let rate = code.rate();
        let scale = (size as f64).ln() / rate;
        let raw: BTreeMap<Word, f64> = code
            .words()
            .iter()
            .map(|w| (w.clone(), scale * r.random_range(0.5..3.0)))
            .collect();
        let w = match rescale_to_keane(&raw, rate) {
            Ok(w) => w,
            Err(e) => return (false, format!("assignment {i}: {e}")),
        };
        worst_res = worst_res.max(keane_residual(&w).abs());
        let b = match critical_beta(&w) {
            Ok(b) => b.beta,
            Err(e) => return (false, format!("assignment {i}: {e}")),
        };
        worst_beta = worst_beta.max((b - rate).abs());
    }
    (
        worst_res <= 1e-12 && worst_beta <= 1e-8,
        format!("max residual = {worst_res:.2e} (tol 1e-12), max |beta* - R| = {worst_beta:.2e} (tol 1e-8)"),
    )
}

fn criterion_4() -> Outcome {
    let gens: [Vec<Vec<u32>>; 3] = [
        vec![vec![1, 1, 1, 1, 0, 0, 0, 0], vec![0, 0, 1, 1, 1, 1, 0, 0]],
        vec![
            vec![1, 0, 0, 0, 0, 1, 1, 1],
            vec![0, 1, 0, 0, 1, 0, 1, 1],
            vec![0, 0, 1, 0, 1, 1, 0, 1],
            vec![0, 0, 0, 1, 1, 1, 1, 0],
        ],
        vec![
            vec![1, 0, 0, 0, 0, 0, 1, 1],
            vec![0, 1, 0, 0, 0, 0, 1, 0],
            vec![0, 0, 1, 0, 0, 0, 0, 1],
            vec![0, 0, 0, 1, 0, 0, 1, 1],
            vec![0, 0, 0, 0, 1, 0, 1, 0],
            vec![0, 0, 0, 0, 0, 1, 0, 1],
        ],
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for g in &gens {
        let code = linear_code(g, 2).unwrap().into_code();
        let k = code_proxy(&code, 4096, 4, 1).unwrap();
        ok &= (k - code.rate()).abs() <= 0.1;
        parts.push(format!("R={} k={k:.3}", code.rate()));
    }
    (ok, format!("{} (tol 0.1)", parts.join(", ")))
}

fn criterion_5() -> Outcome {
    let plan = IsingConfig::default().plan_for(2, 1, false).unwrap();
    let fit = estimate_nu(2, &plan.ls, &plan.temps, &plan.scan).unwrap();
    let rel = (fit.tc - ONSAGER_TC).abs() / ONSAGER_TC;
    let rs: Vec<usize> = (1..=plan.correlator_l / 4).collect();
    let corr = energy_correlator(2, plan.correlator_l, fit.tc, &plan.scan, &rs).unwrap();
    let ok = rel <= 0.02 && (fit.nu - 1.0).abs() <= 0.15 && (corr.exponent - 2.0).abs() <= 0.3;
    (
        ok,
        format!(
            "T_c = {:.4} +/- {:.4} (rel dev {:.4}, tol 0.02), nu = {:.3} +/- {:.3} (1 +/- 0.15), \
             correlator exponent at L={} = {:.3} +/- {:.3} (2 +/- 0.3)",
            fit.tc, fit.tc_err, rel, fit.nu, fit.nu_err, plan.correlator_l, corr.exponent, corr.exponent_err
        ),
    )
}

fn criterion_6() -> Outcome {
    let plan = IsingConfig::default().plan_for(3, 1, false).unwrap();
    let fit = estimate_nu(3, &plan.ls, &plan.temps, &plan.scan).unwrap();
    let b = pipeline_bound(3, fit.nu, fit.nu_err).unwrap();
    let (lo, hi) = b.band.unwrap();
    let ok = (fit.nu - 0.63).abs() <= 0.08 && b.band_contains(2.82537);
    (
        ok,
        format!(
            "Ls={:?} nu = {:.4} +/- {:.4} (0.63 +/- 0.08), 2D_eps = {:.4}, band [{lo:.4}, {hi:.4}] contains 2.82537: {}",
            plan.ls,
            fit.nu,
            fit.nu_err,
            b.bound,
            b.band_contains(2.82537)
        ),
    )
}

fn criterion_7() -> Outcome {
    let plan = IsingConfig::default().plan_for(4, 1, false).unwrap();
    let fit = estimate_nu(4, &plan.ls, &plan.temps, &plan.scan).unwrap();
    let b = pipeline_bound(4, fit.nu, fit.nu_err).unwrap();
    let within = (b.bound - 4.0).abs() <= b.bound_err;
    let ok = (fit.nu - 0.5).abs() <= 0.12 && b.band_contains(4.0);
    let (lo, hi) = b.band.unwrap();
    (
        ok,
        format!(
            "Ls={:?} nu = {:.4} +/- {:.4} (0.5 +/- 0.12; plain power law {:.4}), 2D_eps = {:.3} +/- {:.3}, \
             band [{lo:.3}, {hi:.3}] contains 4: {}, within 1 sigma: {within}",
            plan.ls,
            fit.nu,
            fit.nu_err,
            fit.nu_uncorrected,
            b.bound,
            b.bound_err,
            b.band_contains(4.0)
        ),
    )
}

fn criterion_8() -> Outcome {
    let two = delta_epsilon_exact(2, 1.0).map(|r| r * 2);
    let four = delta_epsilon_exact(4, 0.5).map(|r| r * 2);
    let exact = two == Some(Rational64::from_integer(2)) && four == Some(Rational64::from_integer(4));
    let plain = 2.0 * delta_epsilon(2, 1.0).unwrap() == 2.0 && 2.0 * delta_epsilon(4, 0.5).unwrap() == 4.0;
    let r = bound_report(3, 0.62999, 0.00005).unwrap();
    let gap = TSIRELSON - r.bound;
    let ok = exact
        && plain
        && (r.bound - 2.82537).abs() <= 5e-5
        && (gap - 0.0031).abs() <= 0.0003
        && (r.s - 3.41267).abs() <= 0.00013
        && r.s <= 3.426 + 0.016;
    (
        ok,
        format!(
            "exact anchors 2 and 4: {exact}, 2D_eps(3, 0.62999) = {:.6}, Tsirelson gap = {gap:.5}, S = {:.6}",
            r.bound, r.s
        ),
    )
}

fn criterion_9() -> Outcome {
    let t = 2.0;
    let mut weights = [0.0f64; 16];
    for (s, w) in weights.iter_mut().enumerate() {
        let spins: Vec<i8> = (0..4).map(|i| if s >> i & 1 == 1 { 1 } else { -1 }).collect();
        let e = SpinLattice::from_spins(2, 2, spins).unwrap().energy();
        *w = (-(e as f64) / t).exp();
    }
    let z: f64 = weights.iter().sum();
    let cfg = MCConfig {
        algorithm: Algorithm::Metropolis,
        temperature: t,
        sweeps: 401_000,
        thermalization: 1_000,
        seed: 9,
        stream: 0,
        stride: 1,
    };
    let mut states = Vec::new();
    run_mc_observe(&cfg, SpinLattice::ordered(2, 2, 1).unwrap(), |lat| {
        states.push(lat.state_index().unwrap() as usize)
    })
    .unwrap();
    let mut worst = 0.0f64;
    for s in 0..16 {
        let ind: Vec<f64> = states.iter().map(|&x| f64::from(u8::from(x == s))).collect();
        let p = ind.iter().sum::<f64>() / ind.len() as f64;
        let sigma = blocking_error(&ind);
        worst = worst.max((p - weights[s] / z).abs() / sigma);
    }
    (worst <= 3.0, format!("{} samples, max |p - p_exact| / sigma = {worst:.2} over 16 states (tol 3)", states.len()))
}

fn run_cli(args: &[&str]) -> i32 {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = codecrit::cli::run(std::iter::once("codecrit").chain(args.iter().copied()), &mut out, &mut err);
    if code != 0 {
        eprintln!("{}", String::from_utf8_lossy(&err));
    }
    code
}

fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut files = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let mut bytes = std::fs::read(&p).unwrap();
                if p.file_name().is_some_and(|n| n == "manifest.json") {
                    let mut v: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
                    v.as_object_mut().unwrap().remove("timestamp");
                    bytes = serde_json::to_vec(&v).unwrap();
                }
                files.insert(p.strip_prefix(dir).unwrap().display().to_string(), bytes);
            }
        }
    }
    files
}

fn criterion_10() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let code = tmp.path().join("code.txt");
    std::fs::write(&code, "q=2 n=2\n00\n11\n").unwrap();
    let config = tmp.path().join("config.json");
    std::fs::write(
        &config,
        r#"{"ising": {"sweeps": 2500, "thermalization": 500, "ls": [4, 8]},
            "pipeline": {"word_sweeps": 200}}"#,
    )
    .unwrap();
    let code_s = code.to_str().unwrap();
    let config_s = config.to_str().unwrap();
    let commands: Vec<(&str, Vec<&str>)> = vec![
        ("rate", vec!["rate", code_s]),
        ("fractal", vec!["fractal", "--words", "00,01,10", "--depths", "1..4"]),
        ("complexity", vec!["complexity", "--random-words", "200", "--word-length", "32", "--code", code_s, "--concatenation", "256", "--samples", "2"]),
        ("statmech", vec!["statmech", "--keane"]),
        ("ising", vec!["--config", config_s, "ising", "--d", "2", "--correlator", "--correlator-l", "8"]),
        ("bound", vec!["bound", "--N", "6"]),
        ("pipeline", vec!["--config", config_s, "pipeline", "--dims", "2", "--words", "256", "--word-length", "12"]),
    ];
    let mut failed = Vec::new();
    for (name, args) in &commands {
        let out = tmp.path().join(name);
        let out_s = out.to_str().unwrap();
        let mut full = vec!["--seed", "5", "--out", out_s];
        full.extend(args.iter().copied());
        let first_code = run_cli(&full);
        let first = snapshot(&out);
        let second_code = run_cli(&full);
        let second = snapshot(&out);
        if first_code != 0 || second_code != 0 || first.is_empty() || first != second {
            failed.push(*name);
        }
    }
    (
        failed.is_empty(),
        if failed.is_empty() {
            format!("{} subcommands byte-identical on rerun", commands.len())
        } else {
            format!("differing or failing: {failed:?}")
        },
    )
}

fn main() {
    let criteria: [(u32, fn() -> Outcome, Duration); 10] = [
        (1, criterion_1, Duration::from_secs(5)),
        (2, criterion_2, Duration::from_secs(5)),
        (3, criterion_3, Duration::from_secs(10)),
        (4, criterion_4, Duration::from_secs(60)),
        (5, criterion_5, Duration::from_secs(15 * 60)),
        (6, criterion_6, Duration::from_secs(45 * 60)),
        (7, criterion_7, Duration::from_secs(45 * 60)),
        (8, criterion_8, Duration::from_secs(1)),
        (9, criterion_9, Duration::from_secs(60)),
        (10, criterion_10, Duration::from_secs(10 * 60)),
    ];
    let filter: Vec<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failures = 0;
    for (id, f, budget) in criteria {
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let t0 = Instant::now();
        let (ok, detail) = f();
        let elapsed = t0.elapsed();
        let ok = ok && elapsed <= budget;
        if !ok {
            failures += 1;
        }
        println!(
            "criterion {id:>2}: {} | {detail} | {:.1}s (budget {}s)",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
