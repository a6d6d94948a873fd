use rand::Rng as _;

use super::lattice::SpinLattice;
use crate::rng::Rng;

/// Acceptance probabilities `min(1, e^{−ΔE/T})` indexed by `(s·h + 2d)/2`.
pub(crate) fn metropolis_table(d: usize, temperature: f64) -> Vec<f64> {
    (0..=2 * d)
        .map(|k| {
            let sh = 2 * k as i32 - 2 * d as i32;
            let de = 2.0 * f64::from(sh);
            if de <= 0.0 {
                1.0
            } else {
                (-de / temperature).exp()
            }
        })
        .collect()
}

/// `L^d` single-spin Metropolis proposals at uniformly random sites.
/// Returns the number of accepted flips.
pub fn metropolis_sweep(lat: &mut SpinLattice, temperature: f64, rng: &mut Rng) -> usize {
    let table = metropolis_table(lat.d(), temperature);
    metropolis_sweep_with(lat, &table, rng)
}

pub(crate) fn metropolis_sweep_with(lat: &mut SpinLattice, table: &[f64], rng: &mut Rng) -> usize {
    let n = lat.sites();
    let d = lat.d() as i32;
    let mut accepted = 0;
    for _ in 0..n {
        let i = rng.random_range(0..n);
        let s = i32::from(lat.spins()[i]);
        let k = ((s * lat.local_field(i) + 2 * d) / 2) as usize;
        let p = table[k];
        if p >= 1.0 || rng.random::<f64>() < p {
            lat.spins_mut()[i] = -lat.spins()[i];
            accepted += 1;
        }
    }
    accepted
}

/// Grows one Wolff cluster from a random seed with bond probability
/// `1 − e^{−2/T}` and flips it. Returns the cluster size.
pub fn wolff_step(lat: &mut SpinLattice, temperature: f64, rng: &mut Rng) -> usize {
    let p_add = -(-2.0 / temperature).exp_m1();
    let mut stack = Vec::new();
    wolff_step_with(lat, p_add, &mut stack, rng)
}

pub(crate) fn wolff_step_with(
    lat: &mut SpinLattice,
    p_add: f64,
    stack: &mut Vec<u32>,
    rng: &mut Rng,
) -> usize {
    let geom = lat.geometry().clone();
    let seed = rng.random_range(0..lat.sites());
    let spin = lat.spins()[seed];
    stack.clear();
    stack.push(seed as u32);
    lat.spins_mut()[seed] = -spin;
    let mut size = 1;
    while let Some(i) = stack.pop() {
        for &j in geom.all(i as usize) {
            let j = j as usize;
            if lat.spins()[j] == spin && (p_add >= 1.0 || rng.random::<f64>() < p_add) {
                lat.spins_mut()[j] = -spin;
                stack.push(j as u32);
                size += 1;
            }
        }
    }
    size
}
