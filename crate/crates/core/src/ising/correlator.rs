use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::criticality::ScanConfig;
use super::lattice::{shift, SpinLattice};
use super::observables::run_mc_observe;
use crate::stats::{fit_line_weighted, jackknife, mean};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelatorPoint {
    pub r: usize,
    pub c: f64,
    pub error: f64,
}

/// `C_ε(r) = ⟨ε_x ε_{x+r}⟩ − ⟨ε⟩²` with `ε_x = (1/d) Σ_μ s_x s_{x+μ}`,
/// averaged over sites and axes, and the power-law exponent fitted over
/// `2 ≤ r ≤ L/4`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelatorFit {
    pub d: usize,
    pub l: usize,
    pub temperature: f64,
    pub points: Vec<CorrelatorPoint>,
    pub exponent: f64,
    pub exponent_err: f64,
    pub amplitude: f64,
    pub chi2: f64,
    pub dof: usize,
    pub fit_range: (usize, usize),
    pub reliable: bool,
    pub note: Option<String>,
}

impl CorrelatorFit {
    /// `r,C,err` rows.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("r,C,err\n");
        for p in &self.points {
            let _ = writeln!(s, "{},{:.17e},{:.17e}", p.r, p.c, p.error);
        }
        s
    }
}

struct Series {
    /// Per measurement: mean of `ε_x`.
    eps: Vec<f64>,
    /// Per distance, per measurement: mean of `ε_x ε_{x+r}`.
    pair: Vec<Vec<f64>>,
}

fn correlator(s: &Series, k: usize, keep: &dyn Fn(usize) -> bool) -> f64 {
    let idx: Vec<usize> = (0..s.eps.len()).filter(|&i| keep(i)).collect();
    let e = mean(&idx.iter().map(|&i| s.eps[i]).collect::<Vec<_>>());
    mean(&idx.iter().map(|&i| s.pair[k][i]).collect::<Vec<_>>()) - e * e
}

fn fit(rs: &[usize], cs: &[f64], errs: &[f64]) -> Option<(f64, f64, f64, usize)> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut ws = Vec::new();
    for ((&r, &c), &e) in rs.iter().zip(cs).zip(errs) {
        if c <= 0.0 {
            return None;
        }
        xs.push((r as f64).ln());
        ys.push(c.ln());
        let rel = e / c;
        ws.push(if rel > 0.0 { 1.0 / (rel * rel) } else { 1.0 });
    }
    let f = fit_line_weighted(&xs, &ys, &ws)?;
    Some((-f.slope, f.intercept.exp(), f.chi2, f.dof))
}

/// Simulates a `d`-dimensional lattice of side `l` at `temperature` and
/// measures the energy correlator at the distances `rs`.
pub fn energy_correlator(
    d: usize,
    l: usize,
    temperature: f64,
    cfg: &ScanConfig,
    rs: &[usize],
) -> Result<CorrelatorFit> {
    if rs.is_empty() || rs.iter().any(|&r| r == 0 || 2 * r > l) {
        return Err(Error::Invalid(format!(
            "correlator distances must lie in 1..={} for L = {l}",
            l / 2
        )));
    }
    let lat = SpinLattice::ordered(d, l, 1)?;
    let n = lat.sites();
    let geom = lat.geometry().clone();
    let tables: Vec<Vec<Vec<u32>>> = rs
        .iter()
        .map(|&r| {
            (0..d)
                .map(|mu| (0..n).map(|i| shift(i, l, mu, r) as u32).collect())
                .collect()
        })
        .collect();
    let mut series = Series {
        eps: Vec::new(),
        pair: vec![Vec::new(); rs.len()],
    };
    let mut bond = vec![0i32; n];
    let norm_pair = (n * d * d * d) as f64;
    run_mc_observe(&cfg.cell(temperature, 0), lat, |lat| {
        let s = lat.spins();
        let mut total = 0i64;
        for (i, b) in bond.iter_mut().enumerate() {
            let si = i32::from(s[i]);
            *b = (0..d).map(|mu| si * i32::from(s[geom.forward(i, mu)])).sum();
            total += i64::from(*b);
        }
        series.eps.push(total as f64 / (n * d) as f64);
        for (k, tab) in tables.iter().enumerate() {
            let mut acc = 0i64;
            for t in tab {
                for (i, &j) in t.iter().enumerate() {
                    acc += i64::from(bond[i] * bond[j as usize]);
                }
            }
            series.pair[k].push(acc as f64 / norm_pair);
        }
    })?;

    let len = series.eps.len();
    let blocks = cfg.blocks.clamp(2, len.max(2));
    let block_of = |i: usize| i * blocks / len;
    let mut points = Vec::with_capacity(rs.len());
    let mut reps: Vec<Vec<f64>> = vec![Vec::with_capacity(rs.len()); blocks];
    for (k, &r) in rs.iter().enumerate() {
        let c = correlator(&series, k, &|_| true);
        let rep: Vec<f64> = (0..blocks)
            .map(|b| correlator(&series, k, &|i| block_of(i) != b))
            .collect();
        for (b, v) in rep.iter().enumerate() {
            reps[b].push(*v);
        }
        points.push(CorrelatorPoint {
            r,
            c,
            error: jackknife(&rep).1,
        });
    }

    let (rmin, rmax) = (2, l / 4);
    let sel: Vec<usize> = (0..rs.len()).filter(|&k| (rmin..=rmax).contains(&rs[k])).collect();
    let fr: Vec<usize> = sel.iter().map(|&k| rs[k]).collect();
    let fc: Vec<f64> = sel.iter().map(|&k| points[k].c).collect();
    let fe: Vec<f64> = sel.iter().map(|&k| points[k].error).collect();

    let mut note = None;
    if sel.len() < 3 {
        note = Some(format!("fewer than 3 distances in {rmin}..={rmax}"));
    } else if let Some(k) = sel.iter().find(|&&k| points[k].c < 2.0 * points[k].error) {
        note = Some(format!("signal below noise at r = {}", rs[*k]));
    }
    let fitted = if sel.len() >= 2 { fit(&fr, &fc, &fe) } else { None };
    let (exponent, amplitude, chi2, dof) = fitted.unwrap_or((f64::NAN, f64::NAN, f64::NAN, 0));
    if fitted.is_none() && note.is_none() {
        note = Some("non-positive correlator in fit range".into());
    }
    if note.is_none() && dof > 0 && chi2 / dof as f64 > 10.0 {
        note = Some(format!("poor power-law fit, chi2/dof = {:.1}", chi2 / dof as f64));
    }
    let exps: Vec<f64> = reps
        .iter()
        .filter_map(|rep| {
            let c: Vec<f64> = sel.iter().map(|&k| rep[k]).collect();
            fit(&fr, &c, &fe).map(|f| f.0)
        })
        .collect();
    let exponent_err = if exps.len() >= 2 { jackknife(&exps).1 } else { f64::NAN };
    Ok(CorrelatorFit {
        d,
        l,
        temperature,
        points,
        exponent,
        exponent_err,
        amplitude,
        chi2,
        dof,
        fit_range: (rmin, rmax),
        reliable: note.is_none(),
        note,
    })
}
