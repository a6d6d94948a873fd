use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::dynamics::{metropolis_sweep_with, metropolis_table, wolff_step_with};
use super::lattice::SpinLattice;
use crate::rng;
use crate::stats::{blocking_error, jackknife, mean};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Metropolis,
    Wolff,
}

/// One Monte Carlo run. During thermalization a Wolff "sweep" is as many
/// cluster flips as it takes to flip `L^d` spins; afterwards it is a fixed
/// number of clusters, `L^d` over the mean cluster size seen so far.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MCConfig {
    pub algorithm: Algorithm,
    pub temperature: f64,
    /// Total sweeps, thermalization included.
    pub sweeps: usize,
    pub thermalization: usize,
    pub seed: u64,
    /// Random stream of the seed; independent cells use distinct streams.
    pub stream: u64,
    /// Measure every `stride` sweeps after thermalization.
    pub stride: usize,
}

impl MCConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.temperature > 0.0) {
            return Err(Error::Invalid(format!(
                "temperature must be positive, got {}",
                self.temperature
            )));
        }
        if self.sweeps <= self.thermalization {
            return Err(Error::Invalid(format!(
                "sweeps ({}) must exceed thermalization ({})",
                self.sweeps, self.thermalization
            )));
        }
        if self.stride == 0 {
            return Err(Error::Invalid("measurement stride must be at least 1".into()));
        }
        Ok(())
    }
}

/// Measured time series of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observables {
    pub temperature: f64,
    /// Spin (or letter) count used to normalize densities.
    pub sites: usize,
    pub sweep: Vec<usize>,
    /// Total energy per measurement.
    pub energy: Vec<i64>,
    /// Total magnetization per measurement.
    pub magnetization: Vec<i64>,
    /// Metropolis acceptance fraction or mean Wolff cluster size.
    pub update_rate: f64,
}

/// Mean with error bar.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub temperature: f64,
    pub samples: usize,
    pub energy_density: Estimate,
    pub abs_magnetization: Estimate,
    pub susceptibility: Estimate,
    pub binder: Estimate,
}

/// `U4 = 1 − ⟨m⁴⟩ / (3⟨m²⟩²)`.
pub fn binder_cumulant(m: &[f64]) -> f64 {
    let m2 = mean(&m.iter().map(|x| x * x).collect::<Vec<_>>());
    let m4 = mean(&m.iter().map(|x| x.powi(4)).collect::<Vec<_>>());
    if m2 == 0.0 {
        return 0.0;
    }
    1.0 - m4 / (3.0 * m2 * m2)
}

/// Number of jackknife blocks used for derived quantities.
pub const JACKKNIFE_BLOCKS: usize = 20;

fn block_ranges(len: usize, blocks: usize) -> Vec<(usize, usize)> {
    let blocks = blocks.min(len).max(1);
    (0..blocks)
        .map(|b| (b * len / blocks, (b + 1) * len / blocks))
        .collect()
}

/// Jackknife estimate of a statistic of a series.
fn jackknife_stat(xs: &[f64], stat: impl Fn(&[f64]) -> f64) -> Estimate {
    let full = stat(xs);
    let ranges = block_ranges(xs.len(), JACKKNIFE_BLOCKS);
    if ranges.len() < 2 {
        return Estimate { value: full, error: 0.0 };
    }
    let reps: Vec<f64> = ranges
        .iter()
        .map(|&(s, e)| {
            let rest: Vec<f64> = xs[..s].iter().chain(&xs[e..]).copied().collect();
            stat(&rest)
        })
        .collect();
    let (_, err) = jackknife(&reps);
    Estimate { value: full, error: err }
}

impl Observables {
    pub fn len(&self) -> usize {
        self.energy.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energy.is_empty()
    }

    pub fn energy_density(&self) -> Vec<f64> {
        self.energy.iter().map(|&e| e as f64 / self.sites as f64).collect()
    }

    pub fn magnetization_density(&self) -> Vec<f64> {
        self.magnetization
            .iter()
            .map(|&m| m as f64 / self.sites as f64)
            .collect()
    }

    pub fn mean_abs_magnetization(&self) -> Estimate {
        let a: Vec<f64> = self.magnetization_density().iter().map(|m| m.abs()).collect();
        Estimate {
            value: mean(&a),
            error: blocking_error(&a),
        }
    }

    pub fn mean_energy_density(&self) -> Estimate {
        let e = self.energy_density();
        Estimate {
            value: mean(&e),
            error: blocking_error(&e),
        }
    }

    pub fn binder(&self) -> Estimate {
        jackknife_stat(&self.magnetization_density(), binder_cumulant)
    }

    /// `χ = N(⟨m²⟩ − ⟨|m|⟩²)/T`.
    pub fn susceptibility(&self) -> Estimate {
        let n = self.sites as f64;
        let t = self.temperature;
        jackknife_stat(&self.magnetization_density(), |m| {
            let m2 = mean(&m.iter().map(|x| x * x).collect::<Vec<_>>());
            let ma = mean(&m.iter().map(|x| x.abs()).collect::<Vec<_>>());
            (n * (m2 - ma * ma) / t).max(0.0)
        })
    }

    pub fn summary(&self) -> Summary {
        Summary {
            temperature: self.temperature,
            samples: self.len(),
            energy_density: self.mean_energy_density(),
            abs_magnetization: self.mean_abs_magnetization(),
            susceptibility: self.susceptibility(),
            binder: self.binder(),
        }
    }

    /// `sweep,e,m` rows.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("sweep,e,m\n");
        for ((sw, &e), &m) in self.sweep.iter().zip(&self.energy).zip(&self.magnetization) {
            let n = self.sites as f64;
            let _ = writeln!(s, "{},{:.17e},{:.17e}", sw, e as f64 / n, m as f64 / n);
        }
        s
    }
}

/// Runs `cfg` from the initial lattice `lat` and returns the measured series.
pub fn run_mc(cfg: &MCConfig, lat: SpinLattice) -> Result<Observables> {
    run_mc_with_lattice(cfg, lat).map(|(obs, _)| obs)
}

/// [`run_mc`] that also hands back the final lattice.
pub fn run_mc_with_lattice(cfg: &MCConfig, lat: SpinLattice) -> Result<(Observables, SpinLattice)> {
    run_mc_observe(cfg, lat, |_| {})
}

/// [`run_mc`] calling `measure` on the lattice at every measurement.
pub fn run_mc_observe(
    cfg: &MCConfig,
    mut lat: SpinLattice,
    mut measure: impl FnMut(&SpinLattice),
) -> Result<(Observables, SpinLattice)> {
    cfg.validate()?;
    let mut rng = rng::stream(cfg.seed, cfg.stream);
    let n = lat.sites();
    let table = metropolis_table(lat.d(), cfg.temperature);
    let p_add = -(-2.0 / cfg.temperature).exp_m1();
    let mut stack = Vec::new();
    let measured = (cfg.sweeps - cfg.thermalization).div_ceil(cfg.stride);
    let mut obs = Observables {
        temperature: cfg.temperature,
        sites: n,
        sweep: Vec::with_capacity(measured),
        energy: Vec::with_capacity(measured),
        magnetization: Vec::with_capacity(measured),
        update_rate: 0.0,
    };
    let mut updates = 0usize;
    let mut steps = 0usize;
    let mut clusters = 1usize;
    for sweep in 0..cfg.sweeps {
        match cfg.algorithm {
            Algorithm::Metropolis => {
                updates += metropolis_sweep_with(&mut lat, &table, &mut rng);
                steps += n;
            }
            Algorithm::Wolff if sweep < cfg.thermalization.max(1) => {
                let mut flipped = 0;
                while flipped < n {
                    let c = wolff_step_with(&mut lat, p_add, &mut stack, &mut rng);
                    flipped += c;
                    updates += c;
                    steps += 1;
                }
                clusters = ((n * steps) as f64 / updates as f64).round().max(1.0) as usize;
            }
            Algorithm::Wolff => {
                for _ in 0..clusters {
                    updates += wolff_step_with(&mut lat, p_add, &mut stack, &mut rng);
                    steps += 1;
                }
            }
        }
        if sweep >= cfg.thermalization && (sweep - cfg.thermalization) % cfg.stride == 0 {
            obs.sweep.push(sweep);
            obs.energy.push(lat.energy());
            obs.magnetization.push(lat.magnetization());
            measure(&lat);
        }
    }
    obs.update_rate = updates as f64 / steps.max(1) as f64;
    Ok((obs, lat))
}

/// Block sums for single-histogram reweighting to one inverse temperature.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    w: f64,
    m2: f64,
    m4: f64,
    e: f64,
    m2e: f64,
    m4e: f64,
}

impl Moments {
    fn minus(&self, o: &Moments) -> Moments {
        Moments {
            w: self.w - o.w,
            m2: self.m2 - o.m2,
            m4: self.m4 - o.m4,
            e: self.e - o.e,
            m2e: self.m2e - o.m2e,
            m4e: self.m4e - o.m4e,
        }
    }

    fn plus(&self, o: &Moments) -> Moments {
        Moments {
            w: self.w + o.w,
            m2: self.m2 + o.m2,
            m4: self.m4 + o.m4,
            e: self.e + o.e,
            m2e: self.m2e + o.m2e,
            m4e: self.m4e + o.m4e,
        }
    }

    /// `(U4, dU4/dβ)`.
    fn binder(&self) -> (f64, f64) {
        let w = self.w;
        let (a, b, e) = (self.m4 / w, self.m2 / w, self.e / w);
        let da = -(self.m4e / w - a * e);
        let db = -(self.m2e / w - b * e);
        let u = 1.0 - a / (3.0 * b * b);
        let du = -(da * b - 2.0 * a * db) / (3.0 * b * b * b);
        (u, du)
    }
}

/// Reweighted Binder cumulant and its `β` derivative, with per-block
/// moments for the jackknife.
#[derive(Debug, Clone)]
pub struct Reweighted {
    blocks: Vec<Moments>,
    total: Moments,
}

impl Reweighted {
    pub fn binder(&self) -> (f64, f64) {
        self.total.binder()
    }

    pub fn blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Estimate with block `b` left out.
    pub fn binder_without(&self, b: usize) -> (f64, f64) {
        self.total.minus(&self.blocks[b]).binder()
    }
}

impl Observables {
    /// Reweights the series from its own temperature to `1/beta`.
    pub fn reweight(&self, beta: f64, blocks: usize) -> Reweighted {
        let beta0 = 1.0 / self.temperature;
        let n = self.sites as f64;
        let e_ref = mean(&self.energy.iter().map(|&e| e as f64).collect::<Vec<_>>());
        let expo: Vec<f64> = self
            .energy
            .iter()
            .map(|&e| -(beta - beta0) * (e as f64 - e_ref))
            .collect();
        let shift = expo.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let ranges = block_ranges(self.len(), blocks);
        let blocks: Vec<Moments> = ranges
            .iter()
            .map(|&(s, e)| {
                let mut acc = Moments::default();
                for i in s..e {
                    let w = (expo[i] - shift).exp();
                    let m = self.magnetization[i] as f64 / n;
                    let m2 = m * m;
                    let de = self.energy[i] as f64 - e_ref;
                    acc.w += w;
                    acc.m2 += w * m2;
                    acc.m4 += w * m2 * m2;
                    acc.e += w * de;
                    acc.m2e += w * m2 * de;
                    acc.m4e += w * m2 * m2 * de;
                }
                acc
            })
            .collect();
        let total = blocks.iter().fold(Moments::default(), |a, b| a.plus(b));
        Reweighted { blocks, total }
    }
}
