//! The digit-matrix fractal of a code.
//!
//! A point of `[0,1]^n` is read as an infinite matrix whose `k`-th column
//! holds the base-`q` digits of coordinate `k`. The fractal of a code `C`
//! keeps the points whose matrix rows all lie in `C`. At depth `m` the
//! fractal meets exactly the half-open `q`-adic boxes of side `q^-m` whose
//! `m × n` digit block has rows in `C`.
//!
//! Box counting in the Euclidean cube gives the raw dimension `n·R`; the
//! normalized (per-coordinate) dimension `raw / n` equals the rate `R`.
//! Both are reported.

use std::collections::HashSet;
use std::fmt::Write as _;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::codes::{Code, CodeFamily, Word};
use crate::rng;
use crate::stats::fit_line;
use crate::{Error, Result};

/// Default enumeration budget (boxes per depth).
pub const DEFAULT_BOX_CAP: u64 = 10_000_000;

/// A finite-depth digit matrix whose rows are code words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitMatrix {
    q: u32,
    n: usize,
    rows: Vec<Word>,
}

impl DigitMatrix {
    pub fn new(code: &Code, rows: Vec<Word>) -> Result<Self> {
        for r in &rows {
            if !code.contains(r) {
                return Err(Error::UnknownWord(r.to_string()));
            }
        }
        Ok(Self {
            q: code.q(),
            n: code.n(),
            rows,
        })
    }

    pub fn depth(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Word] {
        &self.rows
    }

    /// Lower-left corner of the matrix's box: `x_k = Σ_j M[j][k] q^-j`.
    pub fn to_point(&self) -> Vec<f64> {
        matrix_to_point(self)
    }
}

/// `x_k = Σ_{j=1..m} M[j][k]·q^{-j}`, evaluated by Horner's rule from the
/// deepest row so every partial value stays exact as long as it fits.
pub fn matrix_to_point(m: &DigitMatrix) -> Vec<f64> {
    let q = f64::from(m.q);
    (0..m.n)
        .map(|k| {
            m.rows
                .iter()
                .rev()
                .fold(0.0, |acc, row| (acc + f64::from(row.letters()[k])) / q)
        })
        .collect()
}

fn digit_bits(q: u32) -> u32 {
    32 - (q - 1).leading_zeros()
}

/// Distinct `q`-adic boxes hit by a set of depth-`m` digit blocks. Each
/// block is packed row by row into a key, so equal keys mean equal boxes.
fn distinct_boxes<'a, I>(q: u32, n: usize, m: usize, blocks: I) -> u64
where
    I: Iterator<Item = Vec<&'a Word>>,
{
    let bits = digit_bits(q) as usize;
    if m * n * bits <= 128 {
        let mut keys: Vec<u128> = blocks
            .map(|rows| {
                rows.iter()
                    .flat_map(|w| w.letters())
                    .fold(0u128, |k, &d| (k << bits) | u128::from(d))
            })
            .collect();
        keys.sort_unstable();
        keys.dedup();
        keys.len() as u64
    } else {
        let set: HashSet<Vec<u8>> = blocks
            .map(|rows| rows.iter().flat_map(|w| w.letters().iter().copied()).collect())
            .collect();
        set.len() as u64
    }
}

/// Exact number of depth-`m` boxes occupied by the fractal of `code`,
/// found by enumerating every row choice.
pub fn enumerate_boxes(code: &Code, depth: usize, cap: u64) -> Result<u64> {
    let needed = (code.size() as f64).powi(depth as i32);
    if needed > cap as f64 {
        return Err(Error::BudgetExceeded { needed, cap });
    }
    let words = code.words();
    let total = code.size().pow(depth as u32);
    let blocks = (0..total).map(|mut idx| {
        let mut rows = Vec::with_capacity(depth);
        for _ in 0..depth {
            rows.push(&words[idx % words.len()]);
            idx /= words.len();
        }
        rows
    });
    Ok(distinct_boxes(code.q(), code.n(), depth, blocks))
}

/// Monte Carlo sample of the depth-`m` fractal: each point is a matrix of
/// i.i.d. uniformly chosen rows.
#[derive(Debug, Clone)]
pub struct FractalSample {
    code: Code,
    depth: usize,
    /// Row choices (indices into `code.words()`) per sampled point.
    choices: Vec<Vec<u32>>,
}

pub fn sample_fractal(code: &Code, depth: usize, count: usize, seed: u64) -> Result<FractalSample> {
    if count == 0 {
        return Err(Error::Invalid("sample count must be at least 1".into()));
    }
    let mut rng = rng::from_seed(seed);
    let size = code.size() as u32;
    let choices = (0..count)
        .map(|_| (0..depth).map(|_| rng.random_range(0..size)).collect())
        .collect();
    Ok(FractalSample {
        code: code.clone(),
        depth,
        choices,
    })
}

impl FractalSample {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.choices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.choices.is_empty()
    }

    pub fn matrix(&self, i: usize) -> DigitMatrix {
        DigitMatrix {
            q: self.code.q(),
            n: self.code.n(),
            rows: self.choices[i]
                .iter()
                .map(|&c| self.code.words()[c as usize].clone())
                .collect(),
        }
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|i| matrix_to_point(&self.matrix(i))).collect()
    }

    /// Occupied boxes at depth `m ≤ depth`.
    pub fn occupancy(&self, m: usize) -> u64 {
        let m = m.min(self.depth);
        let words = self.code.words();
        distinct_boxes(
            self.code.q(),
            self.code.n(),
            m,
            self.choices
                .iter()
                .map(|c| c[..m].iter().map(|&i| &words[i as usize]).collect()),
        )
    }

    /// Box dimension from sampled occupancy.
    pub fn box_dimension(&self, depths: &[usize]) -> Result<DimensionEstimate> {
        let counts: Vec<BoxCount> = depths
            .iter()
            .map(|&m| BoxCount {
                depth: m,
                boxes: self.occupancy(m),
                sampled: true,
            })
            .collect();
        DimensionEstimate::fit(self.code.q(), self.code.n(), counts, Embedding::PerCoordinate)
    }

    /// CSV dump: one row per point, `n` coordinate columns.
    pub fn points_csv(&self) -> String {
        let n = self.code.n();
        let mut s = (0..n).map(|k| format!("x{k}")).collect::<Vec<_>>().join(",");
        s.push('\n');
        for p in self.points() {
            let row: Vec<String> = p.iter().map(|x| format!("{x:.17e}")).collect();
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }
}

/// Occupied-box count at one depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxCount {
    pub depth: usize,
    pub boxes: u64,
    pub sampled: bool,
}

/// How points are placed in space before counting boxes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Embedding {
    /// Digit matrix in `[0,1]^n`; boxes of side `q^-m`; `raw = n·R`.
    PerCoordinate,
    /// Rows concatenated into one base-`q` expansion in `[0,1]`; depth is
    /// the number of digits. Used to compare codes of different lengths.
    Sequence,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionEstimate {
    /// Slope of `ln N_m` against `m·ln q`.
    pub raw_dimension: f64,
    /// `raw / n` (per coordinate); comparable to the rate.
    pub normalized_dimension: f64,
    /// Root-mean-square residual of the line fit.
    pub fit_residual: f64,
    pub counts: Vec<BoxCount>,
    pub embedding: Embedding,
    pub n: usize,
}

impl DimensionEstimate {
    fn fit(q: u32, n: usize, counts: Vec<BoxCount>, embedding: Embedding) -> Result<Self> {
        if counts.len() < 2 {
            return Err(Error::Invalid(
                "box counting needs at least two usable depths".into(),
            ));
        }
        let lq = f64::from(q).ln();
        let xs: Vec<f64> = counts.iter().map(|c| c.depth as f64 * lq).collect();
        let ys: Vec<f64> = counts.iter().map(|c| (c.boxes as f64).ln()).collect();
        let f = fit_line(&xs, &ys)
            .ok_or_else(|| Error::Invalid("box counting needs two distinct depths".into()))?;
        let dims = match embedding {
            Embedding::PerCoordinate => n,
            Embedding::Sequence => 1,
        };
        Ok(Self {
            raw_dimension: f.slope,
            normalized_dimension: f.slope / dims as f64,
            fit_residual: (f.chi2 / counts.len() as f64).sqrt(),
            counts,
            embedding,
            n,
        })
    }

    pub fn any_sampled(&self) -> bool {
        self.counts.iter().any(|c| c.sampled)
    }

    /// `depth,boxes,m_ln_q,ln_boxes,sampled` rows.
    pub fn to_csv(&self, q: u32) -> String {
        let mut s = String::from("depth,boxes,m_ln_q,ln_boxes,sampled\n");
        for c in &self.counts {
            let _ = writeln!(
                s,
                "{},{},{:.17e},{:.17e},{}",
                c.depth,
                c.boxes,
                c.depth as f64 * f64::from(q).ln(),
                (c.boxes as f64).ln(),
                c.sampled
            );
        }
        s
    }
}

/// Enumeration budget and the sampling fallback used past it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxCountConfig {
    pub cap: u64,
    /// Points per sampled depth; `None` disables the fallback.
    pub fallback_samples: Option<usize>,
    pub seed: u64,
}

impl Default for BoxCountConfig {
    fn default() -> Self {
        Self {
            cap: DEFAULT_BOX_CAP,
            fallback_samples: Some(100_000),
            seed: 0,
        }
    }
}

/// Box-counting dimension of the code fractal over `depths`. Depths within
/// the budget are enumerated exactly; the rest are sampled when the fallback
/// is enabled and skipped otherwise.
pub fn box_dimension(code: &Code, depths: &[usize], cfg: &BoxCountConfig) -> Result<DimensionEstimate> {
    if depths.len() < 2 {
        return Err(Error::Invalid("at least two depths are required".into()));
    }
    let mut counts = Vec::with_capacity(depths.len());
    let mut over_budget = None;
    for &m in depths {
        match enumerate_boxes(code, m, cfg.cap) {
            Ok(boxes) => counts.push(BoxCount {
                depth: m,
                boxes,
                sampled: false,
            }),
            Err(e @ Error::BudgetExceeded { .. }) => {
                if let Some(samples) = cfg.fallback_samples {
                    let s = sample_fractal(code, m, samples, cfg.seed ^ m as u64)?;
                    counts.push(BoxCount {
                        depth: m,
                        boxes: s.occupancy(m),
                        sampled: true,
                    });
                } else {
                    over_budget = Some(e);
                }
            }
            Err(e) => return Err(e),
        }
    }
    if counts.len() < 2 {
        return Err(over_budget.unwrap_or_else(|| Error::Invalid("not enough depths".into())));
    }
    DimensionEstimate::fit(code.q(), code.n(), counts, Embedding::PerCoordinate)
}

/// Prefixes of length `len` of all concatenations of code words.
fn sequence_prefixes(code: &Code, len: usize, cap: u64, out: &mut HashSet<Vec<u8>>) -> Result<()> {
    let n = code.n();
    let full = len / n;
    let rem = len % n;
    let tails: HashSet<&[u8]> = code.words().iter().map(|w| &w.letters()[..rem]).collect();
    let needed = (code.size() as f64).powi(full as i32) * tails.len() as f64;
    if needed > cap as f64 {
        return Err(Error::BudgetExceeded { needed, cap });
    }
    let tails: Vec<&[u8]> = tails.into_iter().collect();
    let words = code.words();
    let total = words.len().pow(full as u32);
    for mut idx in 0..total {
        let mut prefix = Vec::with_capacity(len);
        for _ in 0..full {
            prefix.extend_from_slice(words[idx % words.len()].letters());
            idx /= words.len();
        }
        for t in &tails {
            let mut p = prefix.clone();
            p.extend_from_slice(t);
            out.insert(p);
        }
    }
    Ok(())
}

/// Dimension of the union of the fractals of a family's members.
///
/// Members sharing one length are unioned box by box in `[0,1]^n` at depths
/// `1..=depth`. Members of different lengths are compared in the sequence
/// embedding at digit lengths `n_max..=depth·n_max`, the common refinement
/// where every member's boxes are defined.
pub fn family_dimension(family: &CodeFamily, depth: usize, cap: u64) -> Result<DimensionEstimate> {
    let codes = family.codes();
    let q = codes[0].q();
    let n0 = codes[0].n();
    if codes.iter().all(|c| c.n() == n0) {
        let mut counts = Vec::new();
        for m in 1..=depth {
            let needed: f64 = codes.iter().map(|c| (c.size() as f64).powi(m as i32)).sum();
            if needed > cap as f64 {
                break;
            }
            let mut set: HashSet<Vec<u8>> = HashSet::new();
            for c in codes {
                let words = c.words();
                for mut idx in 0..words.len().pow(m as u32) {
                    let mut key = Vec::with_capacity(m * n0);
                    for _ in 0..m {
                        key.extend_from_slice(words[idx % words.len()].letters());
                        idx /= words.len();
                    }
                    set.insert(key);
                }
            }
            counts.push(BoxCount {
                depth: m,
                boxes: set.len() as u64,
                sampled: false,
            });
        }
        return DimensionEstimate::fit(q, n0, counts, Embedding::PerCoordinate);
    }
    let n_max = codes.iter().map(Code::n).max().unwrap_or(1);
    let mut counts = Vec::new();
    for len in n_max..=depth * n_max {
        let mut set = HashSet::new();
        let mut ok = true;
        for c in codes {
            if sequence_prefixes(c, len, cap, &mut set).is_err() || set.len() as u64 > cap {
                ok = false;
                break;
            }
        }
        if !ok {
            break;
        }
        counts.push(BoxCount {
            depth: len,
            boxes: set.len() as u64,
            sampled: false,
        });
    }
    DimensionEstimate::fit(q, n_max, counts, Embedding::Sequence)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::Alphabet;

    fn code(q: u32, ws: &[&str]) -> Code {
        Code::from_strs(q, ws).unwrap()
    }

    #[test]
    fn matrix_to_point_examples() {
        let c = code(2, &["0", "1"]);
        let m = DigitMatrix::new(&c, vec![c.words()[1].clone(), c.words()[1].clone()]).unwrap();
        assert_eq!(m.to_point(), vec![0.75]);

        let c = code(2, &["11", "00"]);
        let a = Alphabet::binary();
        let m = DigitMatrix::new(&c, vec![Word::parse("11", a).unwrap(), Word::parse("00", a).unwrap()]).unwrap();
        assert_eq!(m.to_point(), vec![0.5, 0.5]);

        let a3 = Alphabet::new(3).unwrap();
        let c = code(3, &["0", "1", "2"]);
        let m = DigitMatrix::new(&c, vec![Word::parse("2", a3).unwrap(), Word::parse("1", a3).unwrap()]).unwrap();
        assert!((m.to_point()[0] - 7.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn digit_matrix_rejects_foreign_rows() {
        let c = code(2, &["00", "11"]);
        let w = Word::parse("01", Alphabet::binary()).unwrap();
        assert!(DigitMatrix::new(&c, vec![w]).is_err());
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(enumerate_boxes(&code(2, &["00", "11"]), 3, DEFAULT_BOX_CAP).unwrap(), 8);
        assert_eq!(enumerate_boxes(&code(2, &["00", "11"]), 0, DEFAULT_BOX_CAP).unwrap(), 1);
        assert_eq!(enumerate_boxes(&code(2, &["00", "01", "10"]), 4, DEFAULT_BOX_CAP).unwrap(), 81);
        assert!(matches!(
            enumerate_boxes(&code(2, &["00", "01", "10"]), 20, DEFAULT_BOX_CAP),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn wide_keys_fall_back_to_vectors() {
        // 20 rows × 8 columns × 1 bit = 160 bits > 128.
        let c = code(2, &["00000000", "11111111"]);
        assert_eq!(enumerate_boxes(&c, 20, DEFAULT_BOX_CAP).unwrap(), 1 << 20);
    }

    #[test]
    fn box_dimension_examples() {
        let depths: Vec<usize> = (1..=6).collect();
        let cfg = BoxCountConfig::default();
        let d = box_dimension(&code(2, &["00", "11"]), &depths, &cfg).unwrap();
        assert!((d.raw_dimension - 1.0).abs() < 1e-12);
        assert!((d.normalized_dimension - 0.5).abs() < 1e-12);
        let d = box_dimension(&Code::full(2, 2).unwrap(), &depths[..4], &cfg).unwrap();
        assert!((d.normalized_dimension - 1.0).abs() < 1e-12);
        let d = box_dimension(&code(2, &["00", "01", "10"]), &depths, &cfg).unwrap();
        assert!((d.normalized_dimension - 0.792_481_250_360_578_1).abs() < 1e-12);
        assert!(box_dimension(&code(2, &["00", "11"]), &[3], &cfg).is_err());
    }

    #[test]
    fn box_dimension_budget_without_fallback() {
        let cfg = BoxCountConfig {
            cap: 10,
            fallback_samples: None,
            seed: 0,
        };
        let c = code(2, &["00", "01", "10"]);
        assert!(matches!(
            box_dimension(&c, &[5, 6, 7], &cfg),
            Err(Error::BudgetExceeded { .. })
        ));
        let cfg = BoxCountConfig {
            fallback_samples: Some(5000),
            ..cfg
        };
        let d = box_dimension(&c, &[1, 2, 5], &cfg).unwrap();
        assert!(d.any_sampled());
    }

    #[test]
    fn sample_examples() {
        let c = code(2, &["00"]);
        let s = sample_fractal(&c, 1, 1, 3).unwrap();
        assert_eq!(s.points(), vec![vec![0.0, 0.0]]);

        let c = code(2, &["00", "11"]);
        let a = sample_fractal(&c, 5, 100, 11).unwrap();
        let b = sample_fractal(&c, 5, 100, 11).unwrap();
        assert_eq!(a.points(), b.points());
        assert!(sample_fractal(&c, 5, 0, 11).is_err());
    }

    #[test]
    fn sampled_dimension_close_to_exact() {
        let c = code(2, &["00", "11"]);
        let s = sample_fractal(&c, 12, 100_000, 1).unwrap();
        let depths: Vec<usize> = (1..=12).collect();
        let d = s.box_dimension(&depths).unwrap();
        assert!((d.raw_dimension - 1.0).abs() < 0.05, "{}", d.raw_dimension);
    }

    #[test]
    fn family_examples() {
        let c = code(2, &["00", "01", "10"]);
        let single = CodeFamily::new(vec![c.clone()], c.rate()).unwrap();
        let fd = family_dimension(&single, 6, DEFAULT_BOX_CAP).unwrap();
        let bd = box_dimension(&c, &(1..=6).collect::<Vec<_>>(), &BoxCountConfig::default()).unwrap();
        assert!((fd.normalized_dimension - bd.normalized_dimension).abs() < 1e-12);

        let small = code(2, &["00", "01"]);
        let nested = CodeFamily::new(vec![small, c.clone()], c.rate()).unwrap();
        let fd = family_dimension(&nested, 6, DEFAULT_BOX_CAP).unwrap();
        assert!((fd.normalized_dimension - c.rate()).abs() < 1e-12);

        let fam = CodeFamily::new(
            vec![
                code(2, &["000", "111"]),
                code(2, &["00000", "00111", "11100", "11011"]),
                code(2, &["01", "10"]),
            ],
            0.5,
        )
        .unwrap();
        let fd = family_dimension(&fam, 6, DEFAULT_BOX_CAP).unwrap();
        assert_eq!(fd.embedding, Embedding::Sequence);
        assert!((fd.normalized_dimension - 0.5).abs() < 0.05, "{}", fd.normalized_dimension);
    }
}
