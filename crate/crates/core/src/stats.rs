//! Small numerical helpers shared by the physics modules: compensated
//! summation, blocking and jackknife error bars, least-squares lines.

/// Neumaier (improved Kahan) compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = NeumaierSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Compensated sum of an iterator.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<NeumaierSum>().value()
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    compensated_sum(xs.iter().copied()) / xs.len() as f64
}

/// Standard error of the mean of a correlated series by repeated pairwise
/// blocking. Returns the largest naive error over all levels that still
/// have at least 32 blocks, which is the plateau value once blocks exceed
/// the autocorrelation time.
pub fn blocking_error(xs: &[f64]) -> f64 {
    let mut level: Vec<f64> = xs.to_vec();
    let mut best = 0.0f64;
    while level.len() >= 32 {
        let n = level.len() as f64;
        let m = mean(&level);
        let var = level.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
        best = best.max((var / n).sqrt());
        level = level.chunks_exact(2).map(|p| 0.5 * (p[0] + p[1])).collect();
    }
    if best == 0.0 && xs.len() >= 2 {
        let n = xs.len() as f64;
        let m = mean(xs);
        let var = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
        best = (var / n).sqrt();
    }
    best
}

/// Jackknife mean and error of leave-one-block-out estimates.
pub fn jackknife(estimates: &[f64]) -> (f64, f64) {
    let b = estimates.len() as f64;
    let m = mean(estimates);
    let var = estimates.iter().map(|x| (x - m) * (x - m)).sum::<f64>() * (b - 1.0) / b;
    (m, var.sqrt())
}

/// Result of fitting `y = intercept + slope·x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Weighted residual sum of squares (plain RSS when unweighted).
    pub chi2: f64,
    pub dof: usize,
}

/// Ordinary least squares through `(x, y)`.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Option<LineFit> {
    let w = vec![1.0; xs.len()];
    fit_line_weighted(xs, ys, &w)
}

/// Weighted least squares; `weights` are `1/σ²`.
pub fn fit_line_weighted(xs: &[f64], ys: &[f64], weights: &[f64]) -> Option<LineFit> {
    if xs.len() < 2 || xs.len() != ys.len() || xs.len() != weights.len() {
        return None;
    }
    let sw = compensated_sum(weights.iter().copied());
    let mx = compensated_sum(xs.iter().zip(weights).map(|(x, w)| x * w)) / sw;
    let my = compensated_sum(ys.iter().zip(weights).map(|(y, w)| y * w)) / sw;
    let sxx = compensated_sum(xs.iter().zip(weights).map(|(x, w)| w * (x - mx) * (x - mx)));
    if sxx <= 0.0 {
        return None;
    }
    let sxy = compensated_sum(
        xs.iter()
            .zip(ys)
            .zip(weights)
            .map(|((x, y), w)| w * (x - mx) * (y - my)),
    );
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let chi2 = xs
        .iter()
        .zip(ys)
        .zip(weights)
        .map(|((x, y), w)| {
            let r = y - intercept - slope * x;
            w * r * r
        })
        .sum();
    Some(LineFit {
        slope,
        intercept,
        chi2,
        dof: xs.len() - 2,
    })
}

/// Average ranks (1-based) with ties sharing their mean rank.
fn ranks(xs: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut r = vec![0.0; xs.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && xs[idx[j + 1]] == xs[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            r[k] = avg;
        }
        i = j + 1;
    }
    r
}

/// Spearman rank correlation; `None` when either side is constant.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let (rx, ry) = (ranks(xs), ranks(ys));
    let (mx, my) = (mean(&rx), mean(&ry));
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neumaier_recovers_cancelled_terms() {
        let s = compensated_sum([1.0, 1e100, 1.0, -1e100]);
        assert_eq!(s, 2.0);
    }

    #[test]
    fn line_fit_exact() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| 0.5 + 2.0 * x).collect();
        let f = fit_line(&xs, &ys).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-14);
        assert!((f.intercept - 0.5).abs() < 1e-14);
        assert!(f.chi2 < 1e-24);
    }

    #[test]
    fn blocking_matches_naive_for_iid() {
        let xs: Vec<f64> = (0..4096).map(|i| ((i * 7919) % 101) as f64).collect();
        let e = blocking_error(&xs);
        assert!(e > 0.0);
    }

    #[test]
    fn spearman_perfect_and_reversed() {
        let a = [1.0, 2.0, 3.0, 4.0];
        assert!((spearman(&a, &[10.0, 20.0, 30.0, 40.0]).unwrap() - 1.0).abs() < 1e-12);
        assert!((spearman(&a, &[4.0, 3.0, 2.0, 1.0]).unwrap() + 1.0).abs() < 1e-12);
        assert!(spearman(&a, &[1.0, 1.0, 1.0, 1.0]).is_none());
    }

    #[test]
    fn jackknife_of_constant_has_zero_error() {
        let (m, e) = jackknife(&[3.0; 10]);
        assert_eq!(m, 3.0);
        assert_eq!(e, 0.0);
    }
}
