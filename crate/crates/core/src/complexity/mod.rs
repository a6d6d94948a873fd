//! Compression-based complexity proxy and the ordering it induces on words.
//!
//! Kolmogorov complexity is uncomputable. The proxy `κ̂` is the compressed
//! size of a string under the in-repo [`Lz78`] compressor, normalized by the
//! string's raw information content `length · log2 q`, so incompressible
//! strings sit near 1 and constant strings near 0.

mod lz78;

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use lz78::{Lz78, COMPRESSOR_VERSION};

use rand::Rng as _;

use crate::codes::{Code, Word};
use crate::rng;
use crate::stats::spearman;
use crate::{Error, Result};

/// Default equal-complexity tolerance in normalized `κ̂` units.
pub const DEFAULT_TAU: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProxyConfig {
    /// Strings shorter than this are flagged low-confidence.
    pub min_length: usize,
    /// Symbols per compressor token.
    pub block: usize,
}

impl Default for ProxyConfig {
    fn default() -> Self {
        Self {
            min_length: 16,
            block: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProxyEstimate {
    pub kappa: f64,
    pub low_confidence: bool,
}

/// `κ̂ = bits / (length · log2 q)`.
pub fn proxy_complexity(symbols: &[u8], q: u32, cfg: &ProxyConfig) -> Result<ProxyEstimate> {
    if symbols.is_empty() {
        return Err(Error::Invalid("complexity of an empty string".into()));
    }
    if q < 2 {
        return Err(Error::AlphabetTooSmall(q));
    }
    if let Some(&s) = symbols.iter().find(|&&s| u32::from(s) >= q) {
        return Err(Error::LetterOutOfRange {
            letter: u32::from(s),
            position: symbols.iter().position(|&x| x == s).unwrap_or(0),
            q,
        });
    }
    let bits = Lz78::with_block(cfg.block).compressed_bits(symbols, q);
    Ok(ProxyEstimate {
        kappa: bits / (symbols.len() as f64 * f64::from(q).log2()),
        low_confidence: symbols.len() < cfg.min_length,
    })
}

/// `count` codewords drawn uniformly with replacement, concatenated.
pub fn codeword_concatenation(code: &Code, count: usize, seed: u64, stream: u64) -> Vec<u8> {
    let mut rng = rng::stream(seed, stream);
    let words = code.words();
    let mut out = Vec::with_capacity(count * code.n());
    for _ in 0..count {
        out.extend_from_slice(words[rng.random_range(0..words.len())].letters());
    }
    out
}

/// Mean `κ̂` over `samples` concatenations of `count` codewords, tokenized
/// one codeword per compressor token.
pub fn code_proxy(code: &Code, count: usize, samples: usize, seed: u64) -> Result<f64> {
    if count == 0 || samples == 0 {
        return Err(Error::Invalid("need at least one codeword and one sample".into()));
    }
    let cfg = ProxyConfig {
        block: code.n(),
        ..ProxyConfig::default()
    };
    let ks = (0..samples as u64)
        .into_par_iter()
        .map(|i| proxy_complexity(&codeword_concatenation(code, count, seed, i), code.q(), &cfg).map(|p| p.kappa))
        .collect::<Result<Vec<f64>>>()?;
    Ok(ks.iter().sum::<f64>() / ks.len() as f64)
}

/// Words arranged by increasing proxy complexity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KolmogorovOrder {
    pub words: Vec<Word>,
    pub proxies: Vec<f64>,
    /// `permutation[rank]` is the index into `words` of the word at `rank`.
    pub permutation: Vec<usize>,
    /// Clusters as half-open rank ranges `[start, end)`.
    pub clusters: Vec<(usize, usize)>,
    pub tau: f64,
    pub compressor: String,
}

impl KolmogorovOrder {
    /// Proxy of the word at `rank`.
    pub fn proxy_at(&self, rank: usize) -> f64 {
        self.proxies[self.permutation[rank]]
    }

    /// `rank_of[i]` is the rank of `words[i]`.
    pub fn inverse(&self) -> Vec<usize> {
        let mut inv = vec![0; self.permutation.len()];
        for (rank, &i) in self.permutation.iter().enumerate() {
            inv[i] = rank;
        }
        inv
    }

    /// Runs of ranks whose proxies stay within `tau` of the run's first word.
    pub fn clusters_with(&self, tau: f64) -> Vec<(usize, usize)> {
        cluster_runs(
            &self
                .permutation
                .iter()
                .map(|&i| self.proxies[i])
                .collect::<Vec<_>>(),
            tau,
        )
    }

    /// Cluster id of each rank.
    pub fn cluster_ids(&self) -> Vec<usize> {
        let mut ids = vec![0; self.permutation.len()];
        for (c, &(s, e)) in self.clusters.iter().enumerate() {
            ids[s..e].fill(c);
        }
        ids
    }

    /// Spearman correlation between proxy and Hamming weight (diagnostic only).
    pub fn hamming_rank_correlation(&self) -> Option<f64> {
        let w: Vec<f64> = self.words.iter().map(|w| w.hamming_weight() as f64).collect();
        spearman(&self.proxies, &w)
    }

    /// `word,kappa,cluster,rank` rows in rank order.
    pub fn to_csv(&self) -> String {
        let ids = self.cluster_ids();
        let mut s = String::from("word,kappa,cluster,rank\n");
        for (rank, &i) in self.permutation.iter().enumerate() {
            let _ = writeln!(s, "{},{:.17e},{},{}", self.words[i], self.proxies[i], ids[rank], rank);
        }
        s
    }
}

fn cluster_runs(sorted: &[f64], tau: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=sorted.len() {
        if i == sorted.len() || sorted[i] - sorted[start] > tau {
            out.push((start, i));
            start = i;
        }
    }
    out
}

/// Stable sort of `words` by `(κ̂, lexicographic)`. Proxies are computed in
/// parallel; assembly is by index, so the result does not depend on thread
/// count.
pub fn kolmogorov_order(words: &[Word], q: u32, cfg: &ProxyConfig, tau: f64) -> Result<KolmogorovOrder> {
    if words.is_empty() {
        return Err(Error::Invalid("cannot order an empty word list".into()));
    }
    if !(tau >= 0.0) {
        return Err(Error::Invalid(format!("tolerance must be nonnegative, got {tau}")));
    }
    let proxies = words
        .par_iter()
        .map(|w| proxy_complexity(w.letters(), q, cfg).map(|p| p.kappa))
        .collect::<Result<Vec<f64>>>()?;
    let mut permutation: Vec<usize> = (0..words.len()).collect();
    permutation.sort_by(|&a, &b| {
        proxies[a]
            .total_cmp(&proxies[b])
            .then_with(|| words[a].cmp(&words[b]))
    });
    let sorted: Vec<f64> = permutation.iter().map(|&i| proxies[i]).collect();
    Ok(KolmogorovOrder {
        words: words.to_vec(),
        clusters: cluster_runs(&sorted, tau),
        proxies,
        permutation,
        tau,
        compressor: COMPRESSOR_VERSION.to_string(),
    })
}

/// Undirected graph on ranks of a [`KolmogorovOrder`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighborGraph {
    pub adjacency: Vec<Vec<usize>>,
    pub max_degree: usize,
    /// Always `"kolmogorov-proxy"`: the graph comes from a computable
    /// stand-in for the true order.
    pub label: String,
}

impl NeighborGraph {
    pub fn sites(&self) -> usize {
        self.adjacency.len()
    }

    /// Each undirected edge once, as `(i, j)` with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, ns)| ns.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.adjacency
            .iter()
            .enumerate()
            .all(|(i, ns)| ns.iter().all(|&j| self.adjacency[j].binary_search(&i).is_ok()))
    }
}

/// Links every rank to up to `N` nearest ranks in the order.
///
/// Equal-complexity clusters with at least `N + 1` words form their own
/// segment; consecutive smaller clusters are merged into one segment. Within
/// a segment of `M` words, rank `i` is joined to `i ± 1, …, i ± N/2`
/// (cyclically), which is `N`-regular when `M ≥ N + 1` and complete when
/// `M ≤ N + 1`.
pub fn neighbor_graph(order: &KolmogorovOrder, n_neighbors: u32, tau: f64) -> Result<NeighborGraph> {
    if !matches!(n_neighbors, 4 | 6 | 8) {
        return Err(Error::UnknownRegime(n_neighbors));
    }
    let n = n_neighbors as usize;
    let mut segments: Vec<(usize, usize)> = Vec::new();
    let mut pending: Option<(usize, usize)> = None;
    for (s, e) in order.clusters_with(tau) {
        if e - s > n {
            if let Some(p) = pending.take() {
                segments.push(p);
            }
            segments.push((s, e));
        } else {
            pending = Some(match pending {
                Some((ps, _)) => (ps, e),
                None => (s, e),
            });
        }
    }
    if let Some(p) = pending {
        segments.push(p);
    }

    let sites = order.permutation.len();
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); sites];
    for (s, e) in segments {
        let m = e - s;
        for i in 0..m {
            for off in 1..=n / 2 {
                let j = (i + off) % m;
                if j != i {
                    adj[s + i].insert(s + j);
                    adj[s + j].insert(s + i);
                }
            }
        }
    }
    Ok(NeighborGraph {
        adjacency: adj.into_iter().map(|s| s.into_iter().collect()).collect(),
        max_degree: n,
        label: "kolmogorov-proxy".into(),
    })
}
