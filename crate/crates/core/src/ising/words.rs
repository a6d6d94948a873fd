use rand::Rng as _;

use super::lattice::Geometry;
use super::observables::{MCConfig, Observables};
use crate::codes::{word_product, Alphabet, Word};
use crate::complexity::NeighborGraph;
use crate::rng;
use crate::{Error, Result};

/// Binary words of a common length on the sites of a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct WordLattice {
    n: usize,
    /// Letter `k` of site `i` at `n·i + k`, as `±1`.
    spins: Vec<i8>,
    /// Neighbors of each site, with multiplicity.
    adjacency: Vec<Vec<u32>>,
    /// Each bond once.
    bonds: Vec<(u32, u32)>,
    label: String,
}

fn word_spins(words: &[Word]) -> Result<(usize, Vec<i8>)> {
    let n = words.first().ok_or(Error::EmptyCode)?.len();
    if n == 0 {
        return Err(Error::EmptyWord);
    }
    let mut spins = Vec::with_capacity(n * words.len());
    for w in words {
        if w.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: w.len() });
        }
        if let Some(&x) = w.letters().iter().find(|&&x| x > 1) {
            return Err(Error::NotBinary(u32::from(x) + 1));
        }
        spins.extend((0..n).map(|k| w.spin(k)));
    }
    Ok((n, spins))
}

impl WordLattice {
    /// Words on a periodic hypercubic lattice; bond `(i, i+μ)` once per site
    /// and axis.
    pub fn regular(d: usize, l: usize, words: &[Word]) -> Result<Self> {
        let geom = Geometry::new(d, l)?;
        if words.len() != geom.sites {
            return Err(Error::LengthMismatch {
                expected: geom.sites,
                got: words.len(),
            });
        }
        let (n, spins) = word_spins(words)?;
        let adjacency = (0..geom.sites).map(|i| geom.all(i).to_vec()).collect();
        let bonds = (0..geom.sites)
            .flat_map(|i| (0..d).map(move |mu| (i, mu)))
            .map(|(i, mu)| (i as u32, geom.forward(i, mu) as u32))
            .collect();
        Ok(Self {
            n,
            spins,
            adjacency,
            bonds,
            label: format!("hypercubic d={d} L={l}"),
        })
    }

    /// Words on the sites of a neighbor graph, site `i` holding `words[i]`.
    pub fn from_graph(graph: &NeighborGraph, words: &[Word]) -> Result<Self> {
        if words.len() != graph.sites() {
            return Err(Error::LengthMismatch {
                expected: graph.sites(),
                got: words.len(),
            });
        }
        if let Some(a) = graph.adjacency.iter().find(|a| a.len() > graph.max_degree) {
            return Err(Error::Invalid(format!(
                "site degree {} exceeds the neighbor count {}",
                a.len(),
                graph.max_degree
            )));
        }
        if !graph.is_symmetric() {
            return Err(Error::Invalid("neighbor graph must be symmetric".into()));
        }
        let (n, spins) = word_spins(words)?;
        let adjacency: Vec<Vec<u32>> = graph
            .adjacency
            .iter()
            .map(|a| a.iter().map(|&j| j as u32).collect())
            .collect();
        let bonds = graph.edges().into_iter().map(|(i, j)| (i as u32, j as u32)).collect();
        Ok(Self {
            n,
            spins,
            adjacency,
            bonds,
            label: graph.label.clone(),
        })
    }

    /// Every site holds the same word.
    pub fn uniform_regular(d: usize, l: usize, word: &Word) -> Result<Self> {
        let sites = Geometry::new(d, l)?.sites;
        Self::regular(d, l, &vec![word.clone(); sites])
    }

    pub fn sites(&self) -> usize {
        self.adjacency.len()
    }

    pub fn word_length(&self) -> usize {
        self.n
    }

    pub fn bonds(&self) -> &[(u32, u32)] {
        &self.bonds
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn word(&self, i: usize) -> Word {
        let letters = self.spins[self.n * i..self.n * (i + 1)]
            .iter()
            .map(|&s| u8::from(s > 0))
            .collect();
        Word::new(letters, Alphabet::binary()).expect("letters are binary")
    }

    pub fn words(&self) -> Vec<Word> {
        (0..self.sites()).map(|i| self.word(i)).collect()
    }

    /// Sum of all letter values.
    pub fn magnetization(&self) -> i64 {
        self.spins.iter().map(|&s| i64::from(s)).sum()
    }

    fn energy_fast(&self) -> i64 {
        let n = self.n;
        self.bonds
            .iter()
            .map(|&(i, j)| {
                let (a, b) = (n * i as usize, n * j as usize);
                (0..n)
                    .map(|k| i64::from(self.spins[a + k] * self.spins[b + k]))
                    .sum::<i64>()
            })
            .sum::<i64>()
            .wrapping_neg()
    }

    fn local_field(&self, i: usize, k: usize) -> i32 {
        self.adjacency[i]
            .iter()
            .map(|&j| i32::from(self.spins[self.n * j as usize + k]))
            .sum()
    }
}

/// `H₂ = −Σ_bonds Σ_k s_k(a_i)·s_k(a_j)`: minus the sum over bonds of the
/// letter values of the product word, with `a ↦ −1` and `b ↦ +1`.
pub fn energy_h2(wl: &WordLattice) -> f64 {
    let words = wl.words();
    let mut e = 0i64;
    for &(i, j) in &wl.bonds {
        let p = word_product(&words[i as usize], &words[j as usize]).expect("binary words of equal length");
        e -= (0..p.len()).map(|k| i64::from(p.spin(k))).sum::<i64>();
    }
    e as f64
}

/// Single-letter Metropolis dynamics of `H₂`. A sweep is one proposal per
/// letter; the observables are normalized per letter.
pub fn run_wordlattice_mc(wl: &WordLattice, cfg: &MCConfig) -> Result<(Observables, WordLattice)> {
    cfg.validate()?;
    let mut wl = wl.clone();
    let letters = wl.spins.len();
    let degree = wl.adjacency.iter().map(Vec::len).max().unwrap_or(0);
    // Acceptance indexed by s·h + degree.
    let table: Vec<f64> = (0..=2 * degree)
        .map(|k| {
            let de = 2.0 * (k as f64 - degree as f64);
            if de <= 0.0 {
                1.0
            } else {
                (-de / cfg.temperature).exp()
            }
        })
        .collect();
    let mut rng = rng::stream(cfg.seed, cfg.stream);
    let mut energy = wl.energy_fast();
    let mut mag = wl.magnetization();
    let mut obs = Observables {
        temperature: cfg.temperature,
        sites: letters,
        sweep: Vec::new(),
        energy: Vec::new(),
        magnetization: Vec::new(),
        update_rate: 0.0,
    };
    let mut accepted = 0usize;
    for sweep in 0..cfg.sweeps {
        for _ in 0..letters {
            let u = rng.random_range(0..letters);
            let (i, k) = (u / wl.n, u % wl.n);
            let s = i32::from(wl.spins[u]);
            let sh = s * wl.local_field(i, k);
            let p = table[(sh + degree as i32) as usize];
            if p >= 1.0 || rng.random::<f64>() < p {
                wl.spins[u] = -wl.spins[u];
                energy += i64::from(2 * sh);
                mag -= i64::from(2 * s);
                accepted += 1;
            }
        }
        if sweep >= cfg.thermalization && (sweep - cfg.thermalization) % cfg.stride == 0 {
            obs.sweep.push(sweep);
            obs.energy.push(energy);
            obs.magnetization.push(mag);
        }
    }
    obs.update_rate = accepted as f64 / (letters * cfg.sweeps) as f64;
    Ok((obs, wl))
}
