//! Words on lattice sites coupled through the letterwise word product,
//! on a regular lattice and on the complexity-order neighbor graph.

use codecrit::codes::{random_code, Word};
use codecrit::complexity::{kolmogorov_order, neighbor_graph, ProxyConfig, DEFAULT_TAU};
use codecrit::ising::{energy_h2, run_wordlattice_mc, Algorithm, MCConfig, WordLattice};

fn main() -> codecrit::Result<()> {
    let cfg = |t: f64| MCConfig {
        algorithm: Algorithm::Metropolis,
        temperature: t,
        sweeps: 3_000,
        thermalization: 500,
        seed: 4,
        stream: 0,
        stride: 1,
    };

    let ground = WordLattice::uniform_regular(3, 4, &Word::from_ab("bbbb")?)?;
    println!("uniform 4-letter words on a 4^3 lattice: H2 = {}", energy_h2(&ground));
    for t in [3.0, 4.5, 6.0] {
        let (obs, _) = run_wordlattice_mc(&ground, &cfg(t))?;
        let s = obs.summary();
        println!(
            "  T = {t}: e = {:.4}, |m| = {:.4}, U4 = {:.4}",
            s.energy_density.value, s.abs_magnetization.value, s.binder.value
        );
    }

    let words = random_code(2, 16, 512, 9)?;
    let order = kolmogorov_order(words.words(), 2, &ProxyConfig::default(), DEFAULT_TAU)?;
    let graph = neighbor_graph(&order, 6, DEFAULT_TAU)?;
    let ranked: Vec<Word> = order.permutation.iter().map(|&i| order.words[i].clone()).collect();
    let wl = WordLattice::from_graph(&graph, &ranked)?;
    let (obs, end) = run_wordlattice_mc(&wl, &cfg(4.5))?;
    println!(
        "512 words on the N=6 {} graph: H2 {} -> {}, |m| = {:.4}",
        wl.label(),
        energy_h2(&wl),
        energy_h2(&end),
        obs.mean_abs_magnetization().value
    );
    Ok(())
}
