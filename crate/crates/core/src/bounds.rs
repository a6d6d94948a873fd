//! Energy-operator dimension `Δ_ε = d − 1/ν` and the correlation bound
//! `2Δ_ε`, with error propagation and reference comparisons.
//!
//! Anchors: `(d, ν) = (2, 1)` gives the classical value 2 and `(4, 1/2)`
//! gives the PR-box value 4. When `ν` is a simple rational the computation
//! runs in exact rational arithmetic and is rounded once at the end.

use std::fmt::Write as _;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const CLASSICAL: f64 = 2.0;
pub const TSIRELSON: f64 = std::f64::consts::SQRT_2 * 2.0;
pub const PR_BOX: f64 = 4.0;

/// Bootstrap value of the 3D Ising correlation-length exponent.
pub const NU_3D_BOOTSTRAP: f64 = 0.62999;
pub const NU_3D_BOOTSTRAP_ERR: f64 = 0.00005;

/// Measured CHSH-type values, as `(label, quantity, value, error)`.
pub const EXPERIMENTS: &[(&str, Quantity, f64, f64)] = &[
    ("three-setting correlation experiment", Quantity::S, 3.426, 0.016),
    ("photonic CHSH experiment", Quantity::Bound, 2.827, 0.017),
];

/// Published values of `2Δ_ε` for `d = 3`, reported next to the computed one.
pub const PUBLISHED_3D: &[(&str, f64)] = &[("published 2.82537(2)", 2.82537), ("published 2.82534", 2.82534)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    /// `S = Δ_ε + 2`.
    S,
    /// `2Δ_ε`.
    Bound,
}

fn check(d: u32, nu: f64) -> Result<()> {
    if !(2..=4).contains(&d) {
        return Err(Error::Invalid(format!("dimension must be 2, 3 or 4, got {d}")));
    }
    if !(nu > 0.0 && nu.is_finite()) {
        return Err(Error::NonPositiveExponent(nu));
    }
    Ok(())
}

/// `ν` as a fraction with denominator at most 1000, when that is exact.
fn simple_rational(nu: f64) -> Option<Rational64> {
    (1..=1000i64).find_map(|den| {
        let num = (nu * den as f64).round();
        let r = Rational64::new(num as i64, den);
        (num > 0.0 && (*r.numer() as f64 / *r.denom() as f64) == nu).then_some(r)
    })
}

/// `d − 1/ν`.
pub fn delta_epsilon(d: u32, nu: f64) -> Result<f64> {
    check(d, nu)?;
    Ok(match delta_epsilon_exact(d, nu) {
        Some(r) => ratio_to_f64(r),
        None => f64::from(d) - 1.0 / nu,
    })
}

/// Exact `d − 1/ν` when `ν` is a simple rational.
pub fn delta_epsilon_exact(d: u32, nu: f64) -> Option<Rational64> {
    let r = simple_rational(nu)?;
    Some(Rational64::from_integer(i64::from(d)) - r.recip())
}

fn ratio_to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `N ↦ d = N/2` for the supported neighbor counts 4, 6, 8.
pub fn n_to_dimension(n: u32) -> Result<u32> {
    match n {
        4 | 6 | 8 => Ok(n / 2),
        _ => Err(Error::UnknownRegime(n)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NuSource {
    Literature,
    Simulated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub label: String,
    pub quantity: Quantity,
    pub value: f64,
    pub error: f64,
    pub computed: f64,
    /// `computed ≤ value + error`.
    pub within: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub d: u32,
    pub nu: f64,
    pub nu_err: f64,
    pub delta_epsilon: f64,
    pub delta_epsilon_err: f64,
    pub bound: f64,
    pub bound_err: f64,
    /// `S = Δ_ε + 2`.
    pub s: f64,
    pub s_err: f64,
    pub exact: bool,
    pub source: NuSource,
    pub classical: f64,
    pub tsirelson: f64,
    pub pr_box: f64,
    /// `reference − bound` for classical, Tsirelson and PR box.
    pub gap_classical: f64,
    pub gap_tsirelson: f64,
    pub gap_pr_box: f64,
    pub experiments: Vec<Comparison>,
    pub published: Vec<(String, f64)>,
    /// `[bound(ν − 2δν), bound(ν + 2δν)]` for simulated exponents; the lower
    /// end is `−∞` when `ν − 2δν ≤ 0`.
    pub band: Option<(f64, f64)>,
}

/// Full report for `(d, ν ± δν)`; `δΔ = δν/ν²`, `δ(2Δ) = 2δν/ν²`.
pub fn bound_report(d: u32, nu: f64, nu_err: f64) -> Result<BoundReport> {
    check(d, nu)?;
    if !(nu_err >= 0.0) {
        return Err(Error::Invalid(format!("δν must be nonnegative, got {nu_err}")));
    }
    let exact = delta_epsilon_exact(d, nu);
    let (delta, bound, s) = match exact {
        Some(r) => (
            ratio_to_f64(r),
            ratio_to_f64(r * 2),
            ratio_to_f64(r + 2),
        ),
        None => {
            let de = f64::from(d) - 1.0 / nu;
            (de, 2.0 * de, de + 2.0)
        }
    };
    let delta_err = nu_err / (nu * nu);
    let experiments = EXPERIMENTS
        .iter()
        .map(|&(label, quantity, value, error)| {
            let computed = match quantity {
                Quantity::S => s,
                Quantity::Bound => bound,
            };
            Comparison {
                label: label.to_string(),
                quantity,
                value,
                error,
                computed,
                within: computed <= value + error,
            }
        })
        .collect();
    let published = if d == 3 {
        PUBLISHED_3D.iter().map(|&(l, v)| (l.to_string(), v)).collect()
    } else {
        Vec::new()
    };
    Ok(BoundReport {
        d,
        nu,
        nu_err,
        delta_epsilon: delta,
        delta_epsilon_err: delta_err,
        bound,
        bound_err: 2.0 * delta_err,
        s,
        s_err: delta_err,
        exact: exact.is_some(),
        source: NuSource::Literature,
        classical: CLASSICAL,
        tsirelson: TSIRELSON,
        pr_box: PR_BOX,
        gap_classical: CLASSICAL - bound,
        gap_tsirelson: TSIRELSON - bound,
        gap_pr_box: PR_BOX - bound,
        experiments,
        published,
        band: None,
    })
}

/// Report for a simulated exponent, with the `±2δν` band.
pub fn pipeline_bound(d: u32, nu: f64, nu_err: f64) -> Result<BoundReport> {
    let mut r = bound_report(d, nu, nu_err)?;
    r.source = NuSource::Simulated;
    let lo = nu - 2.0 * nu_err;
    let hi = nu + 2.0 * nu_err;
    let at = |v: f64| 2.0 * (f64::from(d) - 1.0 / v);
    let lower = if lo > 0.0 { at(lo) } else { f64::NEG_INFINITY };
    r.band = Some((lower, at(hi)));
    Ok(r)
}

impl BoundReport {
    pub fn band_contains(&self, x: f64) -> bool {
        self.band.is_some_and(|(lo, hi)| lo <= x && x <= hi)
    }

    /// Human-readable comparison table.
    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "d = {}  nu = {:.6} +/- {:.6}  ({:?}{})",
            self.d,
            self.nu,
            self.nu_err,
            self.source,
            if self.exact { ", exact" } else { "" }
        );
        let _ = writeln!(s, "Delta_eps      = {:.7} +/- {:.7}", self.delta_epsilon, self.delta_epsilon_err);
        let _ = writeln!(s, "2 Delta_eps    = {:.7} +/- {:.7}", self.bound, self.bound_err);
        let _ = writeln!(s, "S = Delta + 2  = {:.7} +/- {:.7}", self.s, self.s_err);
        if let Some((lo, hi)) = self.band {
            let _ = writeln!(s, "2-sigma band   = [{lo:.5}, {hi:.5}]");
        }
        let _ = writeln!(s, "{:<22}{:>12}{:>14}", "reference", "value", "ref - bound");
        for (name, v, g) in [
            ("classical", self.classical, self.gap_classical),
            ("Tsirelson 2*sqrt(2)", self.tsirelson, self.gap_tsirelson),
            ("PR box", self.pr_box, self.gap_pr_box),
        ] {
            let _ = writeln!(s, "{name:<22}{v:>12.7}{g:>14.7}");
        }
        for (label, v) in &self.published {
            let _ = writeln!(s, "{label:<22}{v:>12.5}{:>14.7}", v - self.bound);
        }
        for e in &self.experiments {
            let _ = writeln!(
                s,
                "{:<40} {:?} = {:.3} +/- {:.3}  computed {:.5}  {}",
                e.label,
                e.quantity,
                e.value,
                e.error,
                e.computed,
                if e.within { "<= bound+err" } else { "exceeds" }
            );
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_epsilon_examples() {
        assert_eq!(delta_epsilon(2, 1.0).unwrap(), 1.0);
        assert_eq!(delta_epsilon(4, 0.5).unwrap(), 2.0);
        let d = delta_epsilon(3, 0.62999).unwrap();
        assert!((d - 1.412_673_217_035_191_1).abs() < 1e-12);
        assert!(matches!(delta_epsilon(3, 0.0), Err(Error::NonPositiveExponent(_))));
        assert!(matches!(delta_epsilon(3, -1.0), Err(Error::NonPositiveExponent(_))));
        assert!(delta_epsilon(5, 1.0).is_err());
    }

    #[test]
    fn exact_path_for_anchors() {
        assert_eq!(delta_epsilon_exact(2, 1.0), Some(Rational64::from_integer(1)));
        assert_eq!(delta_epsilon_exact(4, 0.5), Some(Rational64::from_integer(2)));
        assert_eq!(delta_epsilon_exact(3, 0.62999), None);
        assert!(bound_report(4, 0.5, 0.0).unwrap().exact);
    }

    #[test]
    fn report_examples() {
        let r = bound_report(3, 0.62999, 0.00005).unwrap();
        assert!((r.bound - 2.82535).abs() < 1e-5);
        assert!((r.bound_err - 0.00025).abs() < 1e-5);
        assert!((r.gap_tsirelson - 0.00308).abs() < 1e-5);
        assert!((r.s - 3.412_673_2).abs() < 1e-7);
        assert!(r.experiments.iter().all(|e| e.within));
        assert_eq!(r.published.len(), 2);

        let r = bound_report(2, 1.0, 0.0).unwrap();
        assert_eq!(r.bound, CLASSICAL);
        assert_eq!(r.gap_classical, 0.0);
        assert!(r.published.is_empty());
    }

    #[test]
    fn n_to_dimension_examples() {
        assert_eq!(n_to_dimension(6).unwrap(), 3);
        assert_eq!(n_to_dimension(4).unwrap(), 2);
        assert_eq!(n_to_dimension(8).unwrap(), 4);
        assert!(matches!(n_to_dimension(5), Err(Error::UnknownRegime(5))));
        assert!(n_to_dimension(10).is_err());
    }

    #[test]
    fn pipeline_band() {
        let r = pipeline_bound(3, 0.63, 0.04).unwrap();
        assert_eq!(r.source, NuSource::Simulated);
        let (lo, hi) = r.band.unwrap();
        assert!((lo - 2.0 * (3.0 - 1.0 / 0.55)).abs() < 1e-12);
        assert!((hi - 2.0 * (3.0 - 1.0 / 0.71)).abs() < 1e-12);
        assert!(r.band_contains(2.82537));
    }

    #[test]
    fn table_mentions_references() {
        let t = bound_report(3, 0.62999, 0.00005).unwrap().to_table();
        assert!(t.contains("Tsirelson"));
        assert!(t.contains("PR box"));
    }
}
