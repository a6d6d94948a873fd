//! Statistical mechanics of weighted code words.
//!
//! Each word `a` carries a positive weight `λ_a`. A state of the free
//! system is a finite tuple of words with energy `λ_{a1} + … + λ_{am}`, and
//! the partition function is `Z(β) = 1 / (1 − Σ_a e^{−βλ_a})`, finite only
//! while the sum stays below one. The Keane normalization
//! `Σ_a e^{−Rλ_a} = 1` places the critical point exactly at `β = R`.
//!
//! Divergence is an ordinary result ([`Partition::Divergent`]), not an error.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::codes::{Code, Word};
use crate::stats::compensated_sum;
use crate::{Error, Result};

/// Tolerance under which the Keane residual counts as zero.
pub const KEANE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightAssignment {
    weights: BTreeMap<Word, f64>,
    rate: f64,
}

impl WeightAssignment {
    pub fn new(weights: BTreeMap<Word, f64>, rate: f64) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyCode);
        }
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(Error::Invalid(format!("rate must be positive, got {rate}")));
        }
        if let Some((w, l)) = weights.iter().find(|(_, &l)| !(l > 0.0 && l.is_finite())) {
            return Err(Error::NonPositiveWeight(format!("λ({w}) = {l}")));
        }
        Ok(Self { weights, rate })
    }

    /// Pairs words with weights in order.
    pub fn from_pairs<I: IntoIterator<Item = (Word, f64)>>(pairs: I, rate: f64) -> Result<Self> {
        Self::new(pairs.into_iter().collect(), rate)
    }

    /// Every word of `code` weighted `λ`.
    pub fn uniform(code: &Code, lambda: f64, rate: f64) -> Result<Self> {
        Self::from_pairs(code.words().iter().map(|w| (w.clone(), lambda)), rate)
    }

    /// Uniform weights `ln(#W)/R`, which satisfy the Keane condition.
    pub fn uniform_keane(code: &Code, rate: f64) -> Result<Self> {
        Self::uniform(code, (code.size() as f64).ln() / rate, rate)
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn get(&self, w: &Word) -> Option<f64> {
        self.weights.get(w).copied()
    }

    pub fn weights(&self) -> impl Iterator<Item = (&Word, f64)> {
        self.weights.iter().map(|(w, &l)| (w, l))
    }

    fn lambdas(&self) -> impl Iterator<Item = f64> + '_ {
        self.weights.values().copied()
    }

    /// `S(β) = Σ_a e^{−βλ_a}`, compensated.
    pub fn boltzmann_sum(&self, beta: f64) -> f64 {
        compensated_sum(self.lambdas().map(|l| (-beta * l).exp()))
    }

    /// Copy with every weight multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(
            self.weights.iter().map(|(w, &l)| (w.clone(), l * c)).collect(),
            self.rate,
        )
    }
}

/// `Σ_a e^{−Rλ_a} − 1`; zero when the Keane condition holds.
pub fn keane_residual(w: &WeightAssignment) -> f64 {
    compensated_sum(
        w.lambdas()
            .map(|l| (-w.rate * l).exp())
            .chain(std::iter::once(-1.0)),
    )
}

/// Shifts all weights by `ln(S(R))/R` so the Keane condition holds.
pub fn rescale_to_keane(raw: &BTreeMap<Word, f64>, rate: f64) -> Result<WeightAssignment> {
    let w = WeightAssignment::new(raw.clone(), rate)?;
    let shift = w.boltzmann_sum(rate).ln() / rate;
    let shifted: BTreeMap<Word, f64> = raw.iter().map(|(k, &l)| (k.clone(), l + shift)).collect();
    if let Some((k, l)) = shifted.iter().find(|(_, &l)| l <= 0.0) {
        return Err(Error::NonPositiveWeight(format!(
            "shift {shift:.6e} drives λ({k}) to {l:.6e}; the code is too large for rate {rate}"
        )));
    }
    WeightAssignment::new(shifted, rate)
}

/// `λ_{a1} + … + λ_{am}` for a tuple of words.
pub fn hstat_eigenvalue(tuple: &[Word], w: &WeightAssignment) -> Result<f64> {
    tuple
        .iter()
        .map(|a| w.get(a).ok_or_else(|| Error::UnknownWord(a.to_string())))
        .collect::<Result<Vec<f64>>>()
        .map(|v| compensated_sum(v))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Partition {
    Finite { z: f64 },
    Divergent,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartitionResult {
    pub beta: f64,
    /// `Σ e^{−βλ_a}` (or `q^{(R−β)n}` for the closed form).
    pub s: f64,
    pub z: Partition,
}

impl PartitionResult {
    fn from_sum(beta: f64, s: f64) -> Self {
        let z = if s < 1.0 {
            Partition::Finite { z: 1.0 / (1.0 - s) }
        } else {
            Partition::Divergent
        };
        Self { beta, s, z }
    }

    pub fn value(&self) -> Option<f64> {
        match self.z {
            Partition::Finite { z } => Some(z),
            Partition::Divergent => None,
        }
    }

    pub fn is_divergent(&self) -> bool {
        matches!(self.z, Partition::Divergent)
    }
}

pub fn partition_function(w: &WeightAssignment, beta: f64) -> Result<PartitionResult> {
    if !(beta > 0.0) {
        return Err(Error::Invalid(format!("β must be positive, got {beta}")));
    }
    Ok(PartitionResult::from_sum(beta, w.boltzmann_sum(beta)))
}

/// Closed form `Z_C(β) = (1 − q^{(R−β)n})^{−1}`, divergent for `β ≤ R`.
pub fn partition_function_code(q: u32, n: usize, rate: f64, beta: f64) -> PartitionResult {
    let s = ((rate - beta) * n as f64 * f64::from(q).ln()).exp();
    if beta <= rate {
        return PartitionResult {
            beta,
            s,
            z: Partition::Divergent,
        };
    }
    PartitionResult::from_sum(beta, s)
}

/// One bisection step record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalBeta {
    pub beta: f64,
    pub residual: f64,
    pub history: Vec<Bracket>,
}

/// Root `β*` of `Σ_a e^{−βλ_a} = 1` by bracketing and bisection.
pub fn critical_beta(w: &WeightAssignment) -> Result<CriticalBeta> {
    let f = |b: f64| compensated_sum(w.lambdas().map(|l| (-b * l).exp()).chain(std::iter::once(-1.0)));
    let mut lo = 0.0;
    if f(lo) <= 0.0 {
        return Err(Error::NoBracket);
    }
    let mut hi = 1.0;
    let mut history = Vec::new();
    while f(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::NoBracket);
        }
        history.push(Bracket {
            lo,
            hi,
            residual: f(hi),
        });
    }
    let mut mid = 0.5 * (lo + hi);
    let mut r = f(mid);
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        r = f(mid);
        history.push(Bracket { lo, hi, residual: r });
        if r > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 4.0 * f64::EPSILON * mid.abs() {
            break;
        }
    }
    if r.abs() > 1e-10 {
        return Err(Error::Numeric(format!(
            "bisection stalled with residual {r:.3e}"
        )));
    }
    Ok(CriticalBeta {
        beta: mid,
        residual: r,
        history,
    })
}

/// Phase `q^{itn} = exp(i·t·n·ln q)` of the time evolution on words of length `n`.
pub fn evolution_phase(q: u32, n: usize, t: f64) -> Complex64 {
    Complex64::from_polar(1.0, t * n as f64 * f64::from(q).ln())
}

/// `beta,S,Z` rows; `Z` is `DIVERGENT` where the series does not converge.
pub fn scan_csv(rows: &[PartitionResult]) -> String {
    let mut s = String::from("beta,S,Z\n");
    for r in rows {
        let z = r
            .value()
            .map_or_else(|| "DIVERGENT".to_string(), |z| format!("{z:.17e}"));
        let _ = writeln!(s, "{:.17e},{:.17e},{}", r.beta, r.s, z);
    }
    s
}
