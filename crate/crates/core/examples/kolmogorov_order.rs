//! Compression-based complexity proxy, the induced word order and its
//! neighbor graph.

use codecrit::codes::{linear_code, random_code};
use codecrit::complexity::{
    code_proxy, kolmogorov_order, neighbor_graph, proxy_complexity, ProxyConfig, DEFAULT_TAU,
};

fn main() -> codecrit::Result<()> {
    let cfg = ProxyConfig::default();
    let periodic: Vec<u8> = (0..2048).map(|i| (i % 2) as u8).collect();
    let mut state = 0x9e37_79b9_u32;
    let noisy: Vec<u8> = (0..2048)
        .map(|_| {
            state ^= state << 13;
            state ^= state >> 17;
            state ^= state << 5;
            (state & 1) as u8
        })
        .collect();
    println!("periodic string  {:.4}", proxy_complexity(&periodic, 2, &cfg)?.kappa);
    println!("xorshift string  {:.4}", proxy_complexity(&noisy, 2, &cfg)?.kappa);

    let words = random_code(2, 32, 200, 3)?;
    let order = kolmogorov_order(words.words(), 2, &cfg, DEFAULT_TAU)?;
    println!(
        "200 random 32-bit words: {} clusters, proxies {:.3}..{:.3}",
        order.clusters.len(),
        order.proxy_at(0),
        order.proxy_at(order.words.len() - 1)
    );
    for rank in 0..3 {
        println!("  rank {rank}: {}", order.words[order.permutation[rank]]);
    }
    let graph = neighbor_graph(&order, 6, DEFAULT_TAU)?;
    println!(
        "N=6 graph: {} sites, {} edges, symmetric {}",
        graph.sites(),
        graph.edges().len(),
        graph.is_symmetric()
    );

    let code = linear_code(
        &[
            vec![1, 0, 0, 0, 0, 1, 1, 1],
            vec![0, 1, 0, 0, 1, 0, 1, 1],
            vec![0, 0, 1, 0, 1, 1, 0, 1],
            vec![0, 0, 0, 1, 1, 1, 1, 0],
        ],
        2,
    )?
    .into_code();
    println!(
        "[8,4] code, rate {}: mean proxy of codeword streams {:.3}",
        code.rate(),
        code_proxy(&code, 4096, 4, 1)?
    );
    Ok(())
}
