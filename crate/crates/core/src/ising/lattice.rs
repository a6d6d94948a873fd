use std::sync::Arc;

use rand::Rng as _;

use crate::rng::Rng;
use crate::{Error, Result};

/// Neighbor table of a periodic hypercubic lattice. For site `i`, entries
/// `2d·i .. 2d·i + d` are the `+μ` neighbors and the next `d` the `−μ` ones.
#[derive(Debug, PartialEq, Eq)]
pub struct Geometry {
    pub d: usize,
    pub l: usize,
    pub sites: usize,
    pub neighbors: Vec<u32>,
}

impl Geometry {
    pub fn new(d: usize, l: usize) -> Result<Self> {
        if !(2..=4).contains(&d) {
            return Err(Error::Invalid(format!("lattice dimension must be 2, 3 or 4, got {d}")));
        }
        if l < 2 {
            return Err(Error::Invalid(format!("lattice side must be at least 2, got {l}")));
        }
        let sites = l.pow(d as u32);
        let mut neighbors = vec![0u32; sites * 2 * d];
        for i in 0..sites {
            for mu in 0..d {
                neighbors[2 * d * i + mu] = shift(i, l, mu, 1) as u32;
                neighbors[2 * d * i + d + mu] = shift(i, l, mu, l - 1) as u32;
            }
        }
        Ok(Self { d, l, sites, neighbors })
    }

    #[inline]
    pub fn forward(&self, i: usize, mu: usize) -> usize {
        self.neighbors[2 * self.d * i + mu] as usize
    }

    #[inline]
    pub fn all(&self, i: usize) -> &[u32] {
        &self.neighbors[2 * self.d * i..2 * self.d * (i + 1)]
    }

    /// Number of bonds under the forward-bond convention (`d·L^d`).
    pub fn bonds(&self) -> usize {
        self.d * self.sites
    }
}

/// Site reached from `i` by `r` steps along axis `mu` (periodic).
#[inline]
pub fn shift(i: usize, l: usize, mu: usize, r: usize) -> usize {
    let stride = l.pow(mu as u32);
    let c = (i / stride) % l;
    let nc = (c + r) % l;
    i + nc * stride - c * stride
}

/// ±1 spins on a periodic `d`-dimensional lattice of side `L`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinLattice {
    geom: Arc<Geometry>,
    spins: Vec<i8>,
}

impl SpinLattice {
    /// All spins equal to `spin` (`+1` or `−1`).
    pub fn ordered(d: usize, l: usize, spin: i8) -> Result<Self> {
        if spin != 1 && spin != -1 {
            return Err(Error::Invalid(format!("spin must be ±1, got {spin}")));
        }
        let geom = Arc::new(Geometry::new(d, l)?);
        let spins = vec![spin; geom.sites];
        Ok(Self { geom, spins })
    }

    /// Independent uniform ±1 spins.
    pub fn random(d: usize, l: usize, rng: &mut Rng) -> Result<Self> {
        let geom = Arc::new(Geometry::new(d, l)?);
        let spins = (0..geom.sites)
            .map(|_| if rng.random::<bool>() { 1 } else { -1 })
            .collect();
        Ok(Self { geom, spins })
    }

    pub fn from_spins(d: usize, l: usize, spins: Vec<i8>) -> Result<Self> {
        let geom = Arc::new(Geometry::new(d, l)?);
        if spins.len() != geom.sites || spins.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Invalid("spins must be ±1 with one per site".into()));
        }
        Ok(Self { geom, spins })
    }

    pub fn d(&self) -> usize {
        self.geom.d
    }

    pub fn l(&self) -> usize {
        self.geom.l
    }

    pub fn sites(&self) -> usize {
        self.geom.sites
    }

    pub fn geometry(&self) -> &Arc<Geometry> {
        &self.geom
    }

    pub fn spins(&self) -> &[i8] {
        &self.spins
    }

    pub(crate) fn spins_mut(&mut self) -> &mut [i8] {
        &mut self.spins
    }

    /// `−Σ_i Σ_μ s_i s_{i+μ}` with every forward bond counted once.
    pub fn energy(&self) -> i64 {
        let d = self.geom.d;
        let mut e = 0i64;
        for i in 0..self.geom.sites {
            let s = i64::from(self.spins[i]);
            for mu in 0..d {
                e -= s * i64::from(self.spins[self.geom.forward(i, mu)]);
            }
        }
        e
    }

    pub fn magnetization(&self) -> i64 {
        self.spins.iter().map(|&s| i64::from(s)).sum()
    }

    /// Sum of the `2d` neighbor spins of `i`; flipping `i` changes the
    /// energy by `2 s_i h_i`.
    #[inline]
    pub fn local_field(&self, i: usize) -> i32 {
        self.geom.all(i).iter().map(|&j| i32::from(self.spins[j as usize])).sum()
    }

    /// Spin configuration index for lattices with at most 63 sites
    /// (bit `i` set when spin `i` is `+1`).
    pub fn state_index(&self) -> Option<u64> {
        (self.spins.len() < 64).then(|| {
            self.spins
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, &s)| acc | (u64::from(s > 0) << i))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn ordered_2x2_energy() {
        let lat = SpinLattice::ordered(2, 2, 1).unwrap();
        assert_eq!(lat.energy(), -8);
        assert_eq!(lat.magnetization(), 4);
    }

    #[test]
    fn ordered_energy_counts_every_bond_once() {
        for d in 2..=4 {
            for l in 2..=4 {
                let lat = SpinLattice::ordered(d, l, -1).unwrap();
                assert_eq!(lat.energy(), -((d * l.pow(d as u32)) as i64));
            }
        }
    }

    #[test]
    fn local_field_matches_energy_difference() {
        let mut r = rng::from_seed(5);
        for (d, l) in [(2, 2), (2, 3), (3, 4), (4, 3)] {
            let mut lat = SpinLattice::random(d, l, &mut r).unwrap();
            for i in 0..lat.sites() {
                let before = lat.energy();
                let de = 2 * i64::from(lat.spins[i]) * i64::from(lat.local_field(i));
                lat.spins[i] = -lat.spins[i];
                assert_eq!(lat.energy() - before, de);
            }
        }
    }

    #[test]
    fn rejects_invalid_shapes() {
        assert!(SpinLattice::ordered(2, 1, 1).is_err());
        assert!(SpinLattice::ordered(5, 3, 1).is_err());
        assert!(SpinLattice::ordered(2, 3, 0).is_err());
        assert!(SpinLattice::from_spins(2, 2, vec![1, 1, 1]).is_err());
    }

    #[test]
    fn shift_wraps() {
        assert_eq!(shift(3, 4, 0, 1), 0);
        assert_eq!(shift(12, 4, 1, 1), 0);
        assert_eq!(shift(5, 4, 1, 3), 1);
    }
}
