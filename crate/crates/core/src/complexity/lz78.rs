//! LZ78 dictionary compressor with adaptive arithmetic-code lengths.
//!
//! The input is cut into tokens of `block` symbols. Tokens are parsed into
//! LZ78 phrases with a dictionary trie: walk down while the next token has a
//! child, add a new leaf on the first miss and restart at the root. Each
//! token is charged the ideal code length of an adaptive PPM-D model whose
//! context is the current trie node; tokens never seen at a node escape to
//! an order-0 model (with exclusion), then to a uniform code over tokens
//! not seen anywhere. The reported size is the sum of `−log2 p`, i.e. the
//! length an arithmetic coder reaches to within two bits.

use std::collections::HashMap;

/// Version tag embedded in every complexity report.
pub const COMPRESSOR_VERSION: &str = "lz78-trie-ppmd/1";

#[derive(Debug, Default)]
struct Counts {
    total: u64,
    seen: Vec<(u64, u64)>,
}

impl Counts {
    fn get(&self, tok: u64) -> Option<u64> {
        self.seen.iter().find(|(t, _)| *t == tok).map(|&(_, c)| c)
    }

    fn bump(&mut self, tok: u64) {
        self.total += 1;
        match self.seen.iter_mut().find(|(t, _)| *t == tok) {
            Some((_, c)) => *c += 1,
            None => self.seen.push((tok, 1)),
        }
    }
}

/// PPM-D probability of a seen token: `(2c − 1) / 2t`, or `c / t` once the
/// context has seen the whole alphabet and needs no escape.
fn seen_cost(count: u64, total: u64, distinct: u64, alphabet: f64) -> f64 {
    if distinct as f64 >= alphabet {
        -(count as f64 / total as f64).log2()
    } else {
        -((2 * count - 1) as f64 / (2 * total) as f64).log2()
    }
}

fn escape_cost(total: u64, distinct: u64) -> f64 {
    if total == 0 {
        0.0
    } else {
        -(distinct as f64 / (2 * total) as f64).log2()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lz78 {
    block: usize,
}

impl Default for Lz78 {
    fn default() -> Self {
        Self { block: 1 }
    }
}

impl Lz78 {
    /// `block` symbols per token; must be at least 1.
    pub fn with_block(block: usize) -> Self {
        Self { block: block.max(1) }
    }

    pub fn block(&self) -> usize {
        self.block
    }

    /// Compressed size in bits of `symbols` over a `q`-letter alphabet.
    pub fn compressed_bits(&self, symbols: &[u8], q: u32) -> f64 {
        let b = self.block;
        let alphabet = f64::from(q).powi(b as i32);
        let tokens = symbols.chunks_exact(b).map(|c| {
            c.iter()
                .fold(0u64, |acc, &s| acc * u64::from(q) + u64::from(s))
        });
        let tail = symbols.len() % b;

        let mut trie: HashMap<(u32, u64), u32> = HashMap::new();
        let mut nodes: Vec<Counts> = vec![Counts::default()];
        let mut global: HashMap<u64, u64> = HashMap::new();
        let mut global_total = 0u64;
        let mut node = 0u32;
        let mut bits = 0.0;

        for tok in tokens {
            let ctx = &nodes[node as usize];
            let distinct = ctx.seen.len() as u64;
            match ctx.get(tok) {
                Some(c) => bits += seen_cost(c, ctx.total, distinct, alphabet),
                None => {
                    bits += escape_cost(ctx.total, distinct);
                    // Order-0 fallback, excluding tokens the context already predicts.
                    let mut g_total = global_total;
                    let mut g_distinct = global.len() as u64;
                    for (t, _) in &ctx.seen {
                        if let Some(&gc) = global.get(t) {
                            g_total -= gc;
                            g_distinct -= 1;
                        }
                    }
                    let remaining = alphabet - distinct as f64;
                    match global.get(&tok) {
                        Some(&gc) => bits += seen_cost(gc, g_total, g_distinct, remaining),
                        None => {
                            bits += escape_cost(g_total, g_distinct);
                            bits += (remaining - g_distinct as f64).log2();
                        }
                    }
                    *global.entry(tok).or_insert(0) += 1;
                    global_total += 1;
                }
            }
            nodes[node as usize].bump(tok);
            match trie.get(&(node, tok)) {
                Some(&child) => node = child,
                None => {
                    let id = nodes.len() as u32;
                    nodes.push(Counts::default());
                    trie.insert((node, tok), id);
                    node = 0;
                }
            }
        }
        bits + tail as f64 * f64::from(q).log2()
    }
}
