use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::lattice::SpinLattice;
use super::observables::{run_mc, Algorithm, MCConfig, Observables};
use crate::stats::{fit_line_weighted, jackknife, mean};
use crate::{Error, Result};

/// Monte Carlo settings shared by every `(L, T)` cell of a scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub algorithm: Algorithm,
    pub sweeps: usize,
    pub thermalization: usize,
    pub stride: usize,
    pub seed: u64,
    /// Jackknife blocks for reweighted quantities.
    pub blocks: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::Wolff,
            sweeps: 22_000,
            thermalization: 2_000,
            stride: 1,
            seed: 1,
            blocks: 20,
        }
    }
}

impl ScanConfig {
    /// Config of cell `index`; the cell index selects the random stream.
    pub fn cell(&self, temperature: f64, index: usize) -> MCConfig {
        MCConfig {
            algorithm: self.algorithm,
            temperature,
            sweeps: self.sweeps,
            thermalization: self.thermalization,
            seed: self.seed,
            stream: index as u64,
            stride: self.stride,
        }
    }
}

/// Runs one cell from an ordered start.
pub fn run_cell(d: usize, l: usize, temperature: f64, cfg: &ScanConfig, index: usize) -> Result<Observables> {
    run_mc(&cfg.cell(temperature, index), SpinLattice::ordered(d, l, 1)?)
}

/// Cell index of `(size index, temperature index)`.
pub fn cell_index(li: usize, ti: usize, temps: usize) -> usize {
    li * temps + ti
}

/// Simulated `(L, T)` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Scan {
    pub d: usize,
    pub ls: Vec<usize>,
    pub temps: Vec<f64>,
    pub blocks: usize,
    /// Row-major by size, then temperature.
    pub cells: Vec<Observables>,
}

fn check_grid(d: usize, ls: &[usize], temps: &[f64]) -> Result<()> {
    if !(2..=4).contains(&d) {
        return Err(Error::Invalid(format!("lattice dimension must be 2, 3 or 4, got {d}")));
    }
    if ls.len() < 2 {
        return Err(Error::Invalid("at least two lattice sizes are required".into()));
    }
    if let Some(l) = ls.iter().find(|&&l| l < 2) {
        return Err(Error::Invalid(format!("lattice side must be at least 2, got {l}")));
    }
    if temps.len() < 2 || temps.windows(2).any(|w| !(w[0] < w[1])) || temps[0] <= 0.0 {
        return Err(Error::Invalid(
            "temperature grid needs at least two strictly increasing positive values".into(),
        ));
    }
    Ok(())
}

/// Runs every cell of the grid in parallel.
pub fn scan(d: usize, ls: &[usize], temps: &[f64], cfg: &ScanConfig) -> Result<Scan> {
    check_grid(d, ls, temps)?;
    let jobs: Vec<(usize, usize)> = (0..ls.len())
        .flat_map(|li| (0..temps.len()).map(move |ti| (li, ti)))
        .collect();
    let cells = jobs
        .par_iter()
        .map(|&(li, ti)| run_cell(d, ls[li], temps[ti], cfg, cell_index(li, ti, temps.len())))
        .collect::<Result<Vec<_>>>()?;
    Scan::from_cells(d, ls, temps, cfg.blocks, cells)
}

impl Scan {
    pub fn from_cells(d: usize, ls: &[usize], temps: &[f64], blocks: usize, cells: Vec<Observables>) -> Result<Self> {
        check_grid(d, ls, temps)?;
        if cells.len() != ls.len() * temps.len() {
            return Err(Error::LengthMismatch {
                expected: ls.len() * temps.len(),
                got: cells.len(),
            });
        }
        if cells.iter().any(|c| c.len() < blocks.max(2)) {
            return Err(Error::Invalid("every cell needs at least one measurement per block".into()));
        }
        Ok(Self {
            d,
            ls: ls.to_vec(),
            temps: temps.to_vec(),
            blocks,
            cells,
        })
    }

    pub fn cell(&self, li: usize, ti: usize) -> &Observables {
        &self.cells[cell_index(li, ti, self.temps.len())]
    }

    fn nearest(&self, t: f64) -> usize {
        let beta = 1.0 / t;
        (0..self.temps.len())
            .min_by(|&a, &b| {
                let da = (1.0 / self.temps[a] - beta).abs();
                let db = (1.0 / self.temps[b] - beta).abs();
                da.total_cmp(&db)
            })
            .unwrap_or(0)
    }

    /// `(U4, dU4/dβ)` of size `li` at `t`, reweighted from the nearest cell,
    /// optionally leaving out one jackknife block.
    pub fn binder_at(&self, li: usize, t: f64, leave_out: Option<usize>) -> (f64, f64) {
        let rw = self.cell(li, self.nearest(t)).reweight(1.0 / t, self.blocks);
        match leave_out {
            Some(b) => rw.binder_without(b),
            None => rw.binder(),
        }
    }
}

/// Crossing of the Binder curves of two sizes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairCrossing {
    pub l1: usize,
    pub l2: usize,
    pub temperature: f64,
    pub error: f64,
    pub binder: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinderCrossing {
    pub tc: f64,
    pub tc_err: f64,
    /// Standard deviation of the pairwise crossings.
    pub spread: f64,
    /// Root mean square of the pairwise jackknife errors.
    pub statistical: f64,
    pub pairs: Vec<PairCrossing>,
}

/// Root of `f` on the grid: first sign change, then bisection.
fn crossing(temps: &[f64], f: impl Fn(f64) -> f64) -> Option<f64> {
    let vals: Vec<f64> = temps.iter().map(|&t| f(t)).collect();
    let k = vals.windows(2).position(|w| w[0] <= 0.0 && w[1] > 0.0 || w[0] >= 0.0 && w[1] < 0.0)?;
    let (mut lo, mut hi) = (temps[k], temps[k + 1]);
    let flo = vals[k];
    if flo == 0.0 {
        return Some(lo);
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Pairwise Binder crossings of an existing scan.
pub fn crossing_from_scan(scan: &Scan) -> Result<BinderCrossing> {
    let mut pairs = Vec::new();
    for a in 0..scan.ls.len() {
        for b in a + 1..scan.ls.len() {
            let diff = |t: f64, lo: Option<usize>| scan.binder_at(a, t, lo).0 - scan.binder_at(b, t, lo).0;
            let t = crossing(&scan.temps, |t| diff(t, None)).ok_or(Error::NoCrossing {
                l1: scan.ls[a],
                l2: scan.ls[b],
            })?;
            let reps: Vec<f64> = (0..scan.blocks)
                .filter_map(|blk| crossing(&scan.temps, |t| diff(t, Some(blk))))
                .collect();
            let error = if reps.len() >= 2 { jackknife(&reps).1 } else { 0.0 };
            pairs.push(PairCrossing {
                l1: scan.ls[a],
                l2: scan.ls[b],
                temperature: t,
                error,
                binder: 0.5 * (scan.binder_at(a, t, None).0 + scan.binder_at(b, t, None).0),
            });
        }
    }
    let ts: Vec<f64> = pairs.iter().map(|p| p.temperature).collect();
    let tc = mean(&ts);
    let spread = if ts.len() > 1 {
        (ts.iter().map(|t| (t - tc).powi(2)).sum::<f64>() / (ts.len() - 1) as f64).sqrt()
    } else {
        0.0
    };
    let statistical = (pairs.iter().map(|p| p.error * p.error).sum::<f64>() / pairs.len() as f64).sqrt();
    let mut tc_err = spread.hypot(statistical);
    if tc_err <= 0.0 {
        // Half the grid spacing around the crossing as a floor.
        tc_err = 0.5 * scan.temps.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    }
    Ok(BinderCrossing {
        tc,
        tc_err,
        spread,
        statistical,
        pairs,
    })
}

/// Runs the scan and locates the Binder crossing.
pub fn binder_crossing(d: usize, ls: &[usize], temps: &[f64], cfg: &ScanConfig) -> Result<(Scan, BinderCrossing)> {
    let s = scan(d, ls, temps, cfg)?;
    let c = crossing_from_scan(&s)?;
    Ok((s, c))
}

/// `dU4/dβ` at the critical temperature for one size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinderSlope {
    pub l: usize,
    pub binder: f64,
    pub derivative: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalFit {
    pub d: usize,
    pub tc: f64,
    pub tc_err: f64,
    pub nu: f64,
    pub nu_err: f64,
    /// Jackknife part of `nu_err`.
    pub nu_statistical: f64,
    /// Part of `nu_err` from moving `T_c` by `±tc_err`.
    pub nu_from_tc: f64,
    pub method: String,
    /// Exponent `p` divided out as `(ln L)^p` before the fit.
    pub log_correction: f64,
    /// `ν` from the plain power-law fit, for comparison.
    pub nu_uncorrected: f64,
    /// Log–log slope, equal to `1/ν`.
    pub slope: f64,
    pub chi2: f64,
    pub dof: usize,
    pub slopes: Vec<BinderSlope>,
    pub crossing: BinderCrossing,
}

/// Exponent `p` of the multiplicative correction `(ln L)^p` to
/// `dU4/dβ ∝ L^{1/ν}`: `1/6` at the upper critical dimension, else `0`.
pub fn log_correction(d: usize) -> f64 {
    if d == 4 {
        1.0 / 6.0
    } else {
        0.0
    }
}

fn slope_at(scan: &Scan, t: f64, leave_out: Option<usize>, p: f64) -> Option<(f64, f64, usize)> {
    let xs: Vec<f64> = scan.ls.iter().map(|&l| (l as f64).ln()).collect();
    let mut ys = Vec::with_capacity(xs.len());
    let mut ws = Vec::with_capacity(xs.len());
    for li in 0..scan.ls.len() {
        let du = scan.binder_at(li, t, leave_out).1;
        if !(du > 0.0) {
            return None;
        }
        ys.push(du.ln() - p * xs[li].ln());
        let reps: Vec<f64> = (0..scan.blocks).map(|b| scan.binder_at(li, t, Some(b)).1).collect();
        let err = jackknife(&reps).1 / du;
        ws.push(if err > 0.0 { 1.0 / (err * err) } else { 1.0 });
    }
    let fit = fit_line_weighted(&xs, &ys, &ws)?;
    Some((fit.slope, fit.chi2, fit.dof))
}

/// `ν` from the size scaling of `dU4/dβ ∝ L^{1/ν}` at the crossing.
pub fn nu_from_scan(scan: &Scan, crossing: BinderCrossing) -> Result<CriticalFit> {
    if scan.ls.len() < 3 {
        return Err(Error::Invalid(format!(
            "estimating nu needs at least 3 lattice sizes, got {}",
            scan.ls.len()
        )));
    }
    let tc = crossing.tc;
    let p = log_correction(scan.d);
    let (slope, chi2, dof) =
        slope_at(scan, tc, None, p).ok_or_else(|| Error::Numeric("Binder derivative is not positive".into()))?;
    if !(slope > 0.0) {
        return Err(Error::NonPositiveExponent(slope));
    }
    let nu = 1.0 / slope;
    let reps: Vec<f64> = (0..scan.blocks)
        .filter_map(|b| slope_at(scan, tc, Some(b), p))
        .map(|(s, _, _)| 1.0 / s)
        .collect();
    let nu_statistical = if reps.len() >= 2 { jackknife(&reps).1 } else { 0.0 };
    let shifted: Vec<f64> = [tc - crossing.tc_err, tc + crossing.tc_err]
        .iter()
        .filter_map(|&t| slope_at(scan, t, None, p))
        .map(|(s, _, _)| 1.0 / s)
        .collect();
    let nu_from_tc = match shifted.as_slice() {
        [a, b] => 0.5 * (a - b).abs(),
        _ => 0.0,
    };
    let nu_uncorrected = slope_at(scan, tc, None, 0.0).map_or(f64::NAN, |(s, _, _)| 1.0 / s);
    let slopes = (0..scan.ls.len())
        .map(|li| {
            let (u, du) = scan.binder_at(li, tc, None);
            let reps: Vec<f64> = (0..scan.blocks).map(|b| scan.binder_at(li, tc, Some(b)).1).collect();
            BinderSlope {
                l: scan.ls[li],
                binder: u,
                derivative: du,
                error: jackknife(&reps).1,
            }
        })
        .collect();
    Ok(CriticalFit {
        d: scan.d,
        tc,
        tc_err: crossing.tc_err,
        nu,
        nu_err: nu_statistical.hypot(nu_from_tc).max(f64::EPSILON),
        nu_statistical,
        nu_from_tc,
        method: if p == 0.0 {
            "binder-derivative".into()
        } else {
            format!("binder-derivative, (ln L)^{p:.4} corrected")
        },
        log_correction: p,
        nu_uncorrected,
        slope,
        chi2,
        dof,
        slopes,
        crossing,
    })
}

/// Scan, crossing and `ν` fit in one call.
pub fn estimate_nu(d: usize, ls: &[usize], temps: &[f64], cfg: &ScanConfig) -> Result<CriticalFit> {
    if ls.len() < 3 {
        return Err(Error::Invalid(format!(
            "estimating nu needs at least 3 lattice sizes, got {}",
            ls.len()
        )));
    }
    let (s, c) = binder_crossing(d, ls, temps, cfg)?;
    nu_from_scan(&s, c)
}

/// `n` evenly spaced temperatures from `lo` to `hi`.
pub fn temperature_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![lo];
    }
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}
