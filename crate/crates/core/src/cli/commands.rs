use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use rand::Rng as _;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::config::{ExperimentConfig, IsingConfig, IsingPlan};
use super::output::{csv_field, csv_preamble, ensure_dir, read_text, write_csv, write_json, write_text};
use crate::bounds::{self, BoundReport};
use crate::codes::{linear_code, Alphabet, Code, Word};
use crate::complexity::{code_proxy, kolmogorov_order, neighbor_graph, ProxyConfig, COMPRESSOR_VERSION};
use crate::fractal::{box_dimension, BoxCountConfig};
use crate::ising::{
    crossing_from_scan, energy_correlator, nu_from_scan, run_cell, run_wordlattice_mc, temperature_grid,
    CorrelatorFit, CriticalFit, MCConfig, Observables, Scan, WordLattice,
};
use crate::statmech::{
    critical_beta, keane_residual, partition_function, partition_function_code, rescale_to_keane,
    WeightAssignment,
};
use crate::{rng, Error, Result};

fn load_code(path: &Path) -> Result<Code> {
    Code::from_text(&read_text(path)?).map_err(|e| match e {
        Error::Parse { line, message } => Error::Parse {
            line,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    })
}

/// Rate table of the configured code files.
pub fn cmd_rate(cfg: &ExperimentConfig) -> Result<String> {
    if cfg.rate.codes.is_empty() {
        return Err(Error::Invalid("no code files given".into()));
    }
    let mut body = String::from("file,q,n,size,rate\n");
    for p in &cfg.rate.codes {
        let c = load_code(p)?;
        let _ = writeln!(
            body,
            "{},{},{},{},{:?}",
            csv_field(&p.display().to_string()),
            c.q(),
            c.n(),
            c.size(),
            c.rate()
        );
    }
    ensure_dir(&cfg.out)?;
    write_csv(&cfg.out.join("rate.csv"), cfg, &body)?;
    Ok(body)
}

fn fractal_code(cfg: &ExperimentConfig) -> Result<Code> {
    match &cfg.fractal.code {
        Some(p) => load_code(p),
        None => {
            let words: Vec<&str> = cfg.fractal.words.iter().map(String::as_str).collect();
            Code::from_strs(cfg.fractal.q, &words)
        }
    }
}

/// Box-counting dimension report.
pub fn cmd_fractal(cfg: &ExperimentConfig) -> Result<String> {
    let code = fractal_code(cfg)?;
    let est = box_dimension(
        &code,
        &cfg.fractal.depths,
        &BoxCountConfig {
            cap: cfg.budget.box_cap,
            fallback_samples: cfg.budget.fallback_samples,
            seed: cfg.seed,
        },
    )?;
    let sampled: Vec<usize> = est.counts.iter().filter(|c| c.sampled).map(|c| c.depth).collect();
    let note = (!sampled.is_empty()).then(|| {
        format!(
            "enumeration budget of {} exceeded; depths {sampled:?} estimated from {} sampled points",
            cfg.budget.box_cap,
            cfg.budget.fallback_samples.unwrap_or(0)
        )
    });
    ensure_dir(&cfg.out)?;
    write_csv(&cfg.out.join("fractal.csv"), cfg, &est.to_csv(code.q()))?;
    write_json(
        &cfg.out.join("fractal.json"),
        cfg,
        &json!({"rate": code.rate(), "estimate": est, "note": note}),
    )?;
    let mut s = format!(
        "rate={:?}\nraw_dimension={:?}\nnormalized_dimension={:?}\nfit_residual={:?}\n",
        code.rate(),
        est.raw_dimension,
        est.normalized_dimension,
        est.fit_residual
    );
    if let Some(n) = note {
        let _ = writeln!(s, "note: {n}");
    }
    Ok(s)
}

fn random_words(count: usize, length: usize, seed: u64) -> Result<Vec<Word>> {
    let mut r = rng::stream(seed, 0);
    let mut seen = std::collections::HashSet::new();
    let mut words = Vec::with_capacity(count);
    let mut tries = 0usize;
    while words.len() < count {
        let letters: Vec<u8> = (0..length).map(|_| u8::from(r.random::<bool>())).collect();
        if seen.insert(letters.clone()) {
            words.push(Word::new(letters, Alphabet::binary())?);
        }
        tries += 1;
        if tries > 64 * count.max(1) {
            return Err(Error::Invalid(format!(
                "cannot draw {count} distinct binary words of length {length}"
            )));
        }
    }
    Ok(words)
}

#[derive(Serialize)]
struct CodeProxy {
    rate: f64,
    mean_kappa: f64,
    concatenation: usize,
    samples: usize,
}

/// Kolmogorov order, neighbor graph and, for a code file, the code-level
/// proxy against the rate.
pub fn cmd_complexity(cfg: &ExperimentConfig) -> Result<String> {
    let cc = &cfg.complexity;
    let (words, q, code) = match &cc.code {
        Some(p) => {
            let c = load_code(p)?;
            (c.words().to_vec(), c.q(), Some(c))
        }
        None => (random_words(cc.random_words, cc.word_length, cfg.seed)?, 2, None),
    };
    let pc = ProxyConfig {
        min_length: cc.min_length,
        block: 1,
    };
    let order = kolmogorov_order(&words, q, &pc, cc.tau)?;
    let graph = neighbor_graph(&order, cc.neighbors, cc.tau)?;
    let proxy = match &code {
        Some(c) => Some(CodeProxy {
            rate: c.rate(),
            mean_kappa: code_proxy(c, cc.concatenation, cc.samples, cfg.seed)?,
            concatenation: cc.concatenation,
            samples: cc.samples,
        }),
        None => None,
    };
    let at = |rank: usize| &order.words[order.permutation[rank]];
    let mut edges = String::from("rank,neighbor_rank,word,neighbor_word\n");
    for (i, j) in graph.edges() {
        let _ = writeln!(edges, "{i},{j},{},{}", at(i), at(j));
    }
    ensure_dir(&cfg.out)?;
    write_csv(&cfg.out.join("order.csv"), cfg, &order.to_csv())?;
    write_csv(&cfg.out.join("graph.csv"), cfg, &edges)?;
    let report = json!({
        "compressor": COMPRESSOR_VERSION,
        "tau": cc.tau,
        "words": words.len(),
        "clusters": order.clusters.len(),
        "hamming_rank_correlation": order.hamming_rank_correlation(),
        "graph": {"label": graph.label, "max_degree": graph.max_degree, "edges": graph.edges().len()},
        "code_proxy": proxy,
    });
    write_json(&cfg.out.join("complexity.json"), cfg, &report)?;
    let mut s = format!(
        "compressor={COMPRESSOR_VERSION}\nwords={}\nclusters={}\ngraph={} edges={}\n",
        words.len(),
        order.clusters.len(),
        graph.label,
        graph.edges().len()
    );
    if let Some(p) = proxy {
        let _ = writeln!(s, "rate={:?}\nmean_kappa={:?}", p.rate, p.mean_kappa);
    }
    Ok(s)
}

/// Partition-function scan, closed-form comparison and critical `β`.
pub fn cmd_statmech(cfg: &ExperimentConfig) -> Result<String> {
    let sc = &cfg.statmech;
    let alphabet = Alphabet::new(sc.q)?;
    if sc.n == 0 || !(sc.rate > 0.0 && sc.rate <= 1.0) {
        return Err(Error::Invalid(format!("need n >= 1 and 0 < rate <= 1, got n={} rate={}", sc.n, sc.rate)));
    }
    let size = (sc.rate * sc.n as f64 * f64::from(sc.q).ln()).exp();
    let rounded = size.round();
    if (size - rounded).abs() > 1e-9 * rounded || rounded > (1u64 << 22) as f64 {
        return Err(Error::Invalid(format!(
            "q^(R n) = {size} must be an integer of at most 2^22 words"
        )));
    }
    let words: Vec<Word> = (0..rounded as u64).map(|i| Word::from_index(i, sc.q, sc.n)).collect();
    let code = Code::new(alphabet, sc.n, words)?;
    let rate = code.rate();
    let w = if sc.keane {
        let mut r = rng::stream(cfg.seed, 0);
        let raw: BTreeMap<Word, f64> = code
            .words()
            .iter()
            .map(|x| (x.clone(), 0.5 + r.random::<f64>()))
            .collect();
        rescale_to_keane(&raw, rate)?
    } else {
        WeightAssignment::uniform_keane(&code, rate)?
    };
    let residual = keane_residual(&w);
    let mut body = String::from("beta,S,Z,Z_closed,abs_diff\n");
    let mut max_diff: f64 = 0.0;
    for beta in temperature_grid(sc.beta_min, sc.beta_max, sc.points) {
        let direct = partition_function(&w, beta)?;
        let z = direct.value().map_or_else(|| "DIVERGENT".to_string(), |z| format!("{z:?}"));
        let (closed, diff) = if sc.keane {
            (String::new(), String::new())
        } else {
            let c = partition_function_code(sc.q, sc.n, rate, beta);
            match (direct.value(), c.value()) {
                (Some(a), Some(b)) => {
                    max_diff = max_diff.max((a - b).abs());
                    (format!("{b:?}"), format!("{:?}", (a - b).abs()))
                }
                (_, v) => (v.map_or_else(|| "DIVERGENT".to_string(), |b| format!("{b:?}")), String::new()),
            }
        };
        let _ = writeln!(body, "{beta:?},{:?},{z},{closed},{diff}", direct.s);
    }
    let crit = critical_beta(&w)?;
    ensure_dir(&cfg.out)?;
    write_csv(&cfg.out.join("statmech.csv"), cfg, &body)?;
    write_json(
        &cfg.out.join("critical.json"),
        cfg,
        &json!({"rate": rate, "words": code.size(), "keane_residual": residual, "critical": crit}),
    )?;
    let mut s = format!(
        "rate={rate:?}\nkeane_residual={residual:.12}\ncritical_beta={:?}\n",
        crit.beta
    );
    if !sc.keane {
        let _ = writeln!(s, "max_abs_diff_closed_form={max_diff:e}");
    }
    Ok(s)
}

/// Checkpoint behavior of [`cmd_ising`].
#[derive(Debug, Clone, Copy, Default)]
pub struct IsingRun {
    pub resume: bool,
    pub stop_after_cells: Option<usize>,
}

fn cell_path(dir: &Path, idx: usize, l: usize) -> PathBuf {
    dir.join("cells").join(format!("cell_{idx:03}_L{l}.csv"))
}

fn cell_text(cfg: &ExperimentConfig, idx: usize, l: usize, obs: &Observables) -> String {
    format!(
        "{}# cell={idx} L={l} T={:?} sites={} update_rate={:?}\n{}",
        csv_preamble(cfg),
        obs.temperature,
        obs.sites,
        obs.update_rate,
        obs.to_csv()
    )
}

/// Reads a finished cell back; `None` when absent or written under a
/// different config.
fn read_cell(cfg: &ExperimentConfig, path: &Path) -> Option<Observables> {
    let text = std::fs::read_to_string(path).ok()?;
    let pre = csv_preamble(cfg);
    let rest = text.strip_prefix(&pre)?;
    let mut lines = rest.lines();
    let meta = lines.next()?.strip_prefix("# ")?;
    let field = |k: &str| {
        meta.split(' ')
            .find_map(|kv| kv.strip_prefix(k).and_then(|v| v.strip_prefix('=')))
    };
    let temperature: f64 = field("T")?.parse().ok()?;
    let sites: usize = field("sites")?.parse().ok()?;
    let update_rate: f64 = field("update_rate")?.parse().ok()?;
    if lines.next()? != "sweep,e,m" {
        return None;
    }
    let n = sites as f64;
    let mut obs = Observables {
        temperature,
        sites,
        sweep: Vec::new(),
        energy: Vec::new(),
        magnetization: Vec::new(),
        update_rate,
    };
    for l in lines {
        let mut it = l.split(',');
        obs.sweep.push(it.next()?.parse().ok()?);
        obs.energy.push((it.next()?.parse::<f64>().ok()? * n).round() as i64);
        obs.magnetization.push((it.next()?.parse::<f64>().ok()? * n).round() as i64);
    }
    Some(obs)
}

#[derive(Serialize)]
struct IsingReport<'a> {
    d: usize,
    ls: &'a [usize],
    temperatures: &'a [f64],
    scan: crate::ising::ScanConfig,
    fit: Option<CriticalFit>,
    crossing: Option<crate::ising::BinderCrossing>,
    bound: Option<BoundReport>,
    correlator: Option<CorrelatorFit>,
}

fn binder_table(scan: &Scan) -> String {
    let mut s = String::from("L,T,samples,U4,U4_err,dU4_dbeta,abs_m,abs_m_err,e,e_err,chi,chi_err,update_rate\n");
    for (li, &l) in scan.ls.iter().enumerate() {
        for (ti, &t) in scan.temps.iter().enumerate() {
            let o = scan.cell(li, ti);
            let sm = o.summary();
            let (_, du) = scan.binder_at(li, t, None);
            let _ = writeln!(
                s,
                "{l},{t:?},{},{:?},{:?},{du:?},{:?},{:?},{:?},{:?},{:?},{:?},{:?}",
                sm.samples,
                sm.binder.value,
                sm.binder.error,
                sm.abs_magnetization.value,
                sm.abs_magnetization.error,
                sm.energy_density.value,
                sm.energy_density.error,
                sm.susceptibility.value,
                sm.susceptibility.error,
                o.update_rate
            );
        }
    }
    s
}

/// Runs (or resumes) the cells of a plan. Returns `None` when stopped early.
fn run_cells(cfg: &ExperimentConfig, plan: &IsingPlan, dir: &Path, run: &IsingRun) -> Result<Option<Vec<Observables>>> {
    let nt = plan.temps.len();
    let total = plan.ls.len() * nt;
    let mut cells: Vec<Option<Observables>> = (0..total)
        .map(|idx| {
            if run.resume {
                read_cell(cfg, &cell_path(dir, idx, plan.ls[idx / nt]))
            } else {
                None
            }
        })
        .collect();
    let mut missing: Vec<usize> = (0..total).filter(|&i| cells[i].is_none()).collect();
    let stop = run.stop_after_cells.is_some_and(|k| k < missing.len());
    if let Some(k) = run.stop_after_cells {
        missing.truncate(k);
    }
    let done = missing
        .par_iter()
        .map(|&idx| {
            let (l, t) = (plan.ls[idx / nt], plan.temps[idx % nt]);
            let obs = run_cell(plan.d, l, t, &plan.scan, idx)?;
            write_text(&cell_path(dir, idx, l), &cell_text(cfg, idx, l, &obs))?;
            Ok((idx, obs))
        })
        .collect::<Result<Vec<_>>>()?;
    for (idx, obs) in done {
        cells[idx] = Some(obs);
    }
    if stop {
        return Ok(None);
    }
    Ok(Some(cells.into_iter().map(|c| c.expect("all cells present")).collect()))
}

/// Full analysis of one plan: crossing, `ν`, bound and optional correlator.
fn analyze(cfg: &ExperimentConfig, plan: &IsingPlan, dir: &Path, cells: Vec<Observables>, correlator: bool) -> Result<(CriticalFit, BoundReport, Option<CorrelatorFit>)> {
    let scan = Scan::from_cells(plan.d, &plan.ls, &plan.temps, plan.scan.blocks, cells)?;
    write_csv(&dir.join("binder.csv"), cfg, &binder_table(&scan))?;
    let crossing = crossing_from_scan(&scan)?;
    let mut cs = String::from("L1,L2,T,err,U4\n");
    for p in &crossing.pairs {
        let _ = writeln!(cs, "{},{},{:?},{:?},{:?}", p.l1, p.l2, p.temperature, p.error, p.binder);
    }
    write_csv(&dir.join("crossings.csv"), cfg, &cs)?;
    let fit = nu_from_scan(&scan, crossing)?;
    let bound = bounds::pipeline_bound(plan.d as u32, fit.nu, fit.nu_err)?;
    let corr = if correlator {
        let l = plan.correlator_l;
        let rs: Vec<usize> = (1..=l / 4).collect();
        let c = energy_correlator(plan.d, l, fit.tc, &plan.scan, &rs)?;
        write_csv(&dir.join("correlator.csv"), cfg, &c.to_csv())?;
        Some(c)
    } else {
        None
    };
    Ok((fit, bound, corr))
}

/// Checkpointed `(L, T)` scan, Binder crossing, `ν` fit and bound.
pub fn cmd_ising(cfg: &ExperimentConfig, run: &IsingRun) -> Result<String> {
    let plan = cfg.ising.plan(cfg.seed, cfg.quick)?;
    let dir = cfg.out.join(format!("ising_d{}", plan.d));
    ensure_dir(&dir)?;
    let Some(cells) = run_cells(cfg, &plan, &dir, run)? else {
        return Ok(format!(
            "stopped after {} new cells; rerun with --resume to continue\n",
            run.stop_after_cells.unwrap_or(0)
        ));
    };
    if plan.ls.len() < 3 {
        let scan = Scan::from_cells(plan.d, &plan.ls, &plan.temps, plan.scan.blocks, cells)?;
        write_csv(&dir.join("binder.csv"), cfg, &binder_table(&scan))?;
        let crossing = crossing_from_scan(&scan)?;
        let s = format!("T_c = {:.5} +/- {:.5}\n", crossing.tc, crossing.tc_err);
        write_json(
            &dir.join("fit.json"),
            cfg,
            &IsingReport {
                d: plan.d,
                ls: &plan.ls,
                temperatures: &plan.temps,
                scan: plan.scan,
                fit: None,
                crossing: Some(crossing),
                bound: None,
                correlator: None,
            },
        )?;
        return Ok(s);
    }
    let (fit, bound, corr) = analyze(cfg, &plan, &dir, cells, cfg.ising.correlator)?;
    let mut s = format!(
        "d = {}  T_c = {:.5} +/- {:.5}  nu = {:.4} +/- {:.4}\n",
        plan.d, fit.tc, fit.tc_err, fit.nu, fit.nu_err
    );
    if let Some(c) = &corr {
        let _ = writeln!(
            s,
            "energy correlator exponent = {:.3} +/- {:.3}{}",
            c.exponent,
            c.exponent_err,
            if c.reliable { "" } else { " (unreliable)" }
        );
    }
    s.push_str(&bound.to_table());
    write_json(
        &dir.join("fit.json"),
        cfg,
        &IsingReport {
            d: plan.d,
            ls: &plan.ls,
            temperatures: &plan.temps,
            scan: plan.scan,
            crossing: Some(fit.crossing.clone()),
            fit: Some(fit),
            bound: Some(bound),
            correlator: corr,
        },
    )?;
    Ok(s)
}

/// Literature exponent for `d`.
fn literature_nu(d: u32) -> (f64, f64) {
    match d {
        2 => (1.0, 0.0),
        3 => (bounds::NU_3D_BOOTSTRAP, bounds::NU_3D_BOOTSTRAP_ERR),
        _ => (0.5, 0.0),
    }
}

/// Bound report for `(d, ν ± δν)`; `ν` defaults to the literature value.
pub fn cmd_bound(cfg: &ExperimentConfig) -> Result<String> {
    let b = &cfg.bound;
    let from_n = b.neighbors.map(bounds::n_to_dimension).transpose()?;
    let d = match (b.d, from_n) {
        (Some(d), Some(n)) if d != n => {
            return Err(Error::Invalid(format!("--d {d} disagrees with --N (d = {n})")));
        }
        (Some(d), _) | (None, Some(d)) => d,
        (None, None) => return Err(Error::Invalid("give --d or --N".into())),
    };
    if !(2..=4).contains(&d) {
        return Err(Error::UnknownRegime(d));
    }
    let (nu, nu_err) = match b.nu {
        Some(nu) => (nu, b.nu_err.unwrap_or(0.0)),
        None => {
            let (nu, e) = literature_nu(d);
            (nu, b.nu_err.unwrap_or(e))
        }
    };
    let report = bounds::bound_report(d, nu, nu_err)?;
    ensure_dir(&cfg.out)?;
    write_json(&cfg.out.join("bound.json"), cfg, &report)?;
    Ok(report.to_table())
}

#[derive(Serialize)]
struct DimensionResult {
    d: usize,
    neighbors: usize,
    fit: CriticalFit,
    bound: BoundReport,
    reference: f64,
    reference_in_band: bool,
}

/// Reference bound per dimension: classical, published 3D value, PR box.
fn reference_bound(d: usize) -> f64 {
    match d {
        2 => bounds::CLASSICAL,
        3 => bounds::PUBLISHED_3D[0].1,
        _ => bounds::PR_BOX,
    }
}

/// Codes → complexity order → Monte Carlo → bounds, with one manifest.
pub fn cmd_pipeline(cfg: &ExperimentConfig) -> Result<String> {
    let pc = &cfg.pipeline;
    ensure_dir(&cfg.out)?;

    let gen: Vec<Vec<u32>> = vec![
        vec![1, 0, 0, 0, 0, 1, 1, 1],
        vec![0, 1, 0, 0, 1, 0, 1, 1],
        vec![0, 0, 1, 0, 1, 1, 0, 1],
        vec![0, 0, 0, 1, 1, 1, 1, 0],
    ];
    let code = linear_code(&gen, 2)?.into_code();
    let dim = box_dimension(
        &code,
        &[1, 2, 3],
        &BoxCountConfig {
            cap: cfg.budget.box_cap,
            fallback_samples: cfg.budget.fallback_samples,
            seed: cfg.seed,
        },
    )?;
    let kappa = code_proxy(&code, cfg.complexity.concatenation, cfg.complexity.samples, cfg.seed)?;

    let words = random_words(pc.words, pc.word_length, cfg.seed)?;
    let order = kolmogorov_order(&words, 2, &ProxyConfig::default(), cfg.complexity.tau)?;
    let graph = neighbor_graph(&order, pc.neighbors, cfg.complexity.tau)?;
    let ordered: Vec<Word> = order.permutation.iter().map(|&i| order.words[i].clone()).collect();
    let wl = WordLattice::from_graph(&graph, &ordered)?;
    let word_mc = MCConfig {
        algorithm: crate::ising::Algorithm::Metropolis,
        temperature: 4.5,
        sweeps: pc.word_sweeps.max(2),
        thermalization: pc.word_sweeps / 5,
        seed: cfg.seed,
        stream: 0,
        stride: 1,
    };
    let (wobs, _) = run_wordlattice_mc(&wl, &word_mc)?;
    let wsum = wobs.summary();

    let ising = IsingConfig {
        ls: Vec::new(),
        t_min: None,
        t_max: None,
        points: None,
        ..cfg.ising.clone()
    };
    let mut results = Vec::new();
    for &d in &pc.dims {
        let plan = ising.plan_for(d, cfg.seed, cfg.quick)?;
        let dir = cfg.out.join(format!("pipeline_d{d}"));
        ensure_dir(&dir)?;
        let cells = run_cells(cfg, &plan, &dir, &IsingRun::default())?.expect("no early stop");
        let (fit, bound, _) = analyze(cfg, &plan, &dir, cells, false)?;
        let reference = reference_bound(d);
        results.push(DimensionResult {
            d,
            neighbors: 2 * d,
            reference_in_band: bound.band_contains(reference),
            reference,
            fit,
            bound,
        });
    }

    let mut table = String::from("d,N,nu,nu_err,bound,bound_err,band_lo,band_hi,reference,reference_in_band\n");
    for r in &results {
        let (lo, hi) = r.bound.band.unwrap_or((f64::NAN, f64::NAN));
        let _ = writeln!(
            table,
            "{},{},{:.5},{:.5},{:.5},{:.5},{:.5},{:.5},{},{}",
            r.d, r.neighbors, r.fit.nu, r.fit.nu_err, r.bound.bound, r.bound.bound_err, lo, hi, r.reference, r.reference_in_band
        );
    }
    write_csv(&cfg.out.join("pipeline.csv"), cfg, &table)?;
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let manifest = json!({
        "timestamp": timestamp,
        "code": {
            "generator": gen,
            "rate": code.rate(),
            "normalized_dimension": dim.normalized_dimension,
            "mean_kappa": kappa,
            "compressor": COMPRESSOR_VERSION,
        },
        "complexity": {
            "words": pc.words,
            "word_length": pc.word_length,
            "clusters": order.clusters.len(),
            "graph": graph.label,
            "max_degree": graph.max_degree,
            "hamming_rank_correlation": order.hamming_rank_correlation(),
        },
        "proxy_lattice": {
            "label": wl.label(),
            "temperature": word_mc.temperature,
            "summary": wsum,
        },
        "dimensions": results,
    });
    write_json(&cfg.out.join("manifest.json"), cfg, &manifest)?;
    let mut s = format!(
        "code rate {:.4}  normalized dimension {:.4}  mean kappa {:.4}\n",
        code.rate(),
        dim.normalized_dimension,
        kappa
    );
    let _ = writeln!(
        s,
        "proxy graph ({}) U4 = {:.3} +/- {:.3}",
        wl.label(),
        wsum.binder.value,
        wsum.binder.error
    );
    s.push_str(&table);
    Ok(s)
}
