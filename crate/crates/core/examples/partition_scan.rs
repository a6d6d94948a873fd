//! Partition function of a code, its closed form and the transition at
//! the rate.

use std::collections::BTreeMap;

use codecrit::codes::{random_code, Code};
use codecrit::statmech::{
    critical_beta, evolution_phase, keane_residual, partition_function, partition_function_code, rescale_to_keane,
    scan_csv, WeightAssignment,
};

fn main() -> codecrit::Result<()> {
    let code = Code::new(
        codecrit::codes::Alphabet::binary(),
        8,
        (0..16).map(|i| codecrit::codes::Word::from_index(i, 2, 8)).collect(),
    )?;
    let rate = code.rate();
    let w = WeightAssignment::uniform_keane(&code, rate)?;
    println!("16 words of length 8, rate {rate}");
    println!("{:>6} {:>14} {:>14}", "beta", "direct", "closed form");
    let mut rows = Vec::new();
    for k in 0..8 {
        let beta = 0.3 + 0.1 * f64::from(k);
        let d = partition_function(&w, beta)?;
        let c = partition_function_code(2, 8, rate, beta);
        let show = |z: Option<f64>| z.map_or_else(|| "DIVERGENT".into(), |z| format!("{z:.10}"));
        println!("{beta:>6.2} {:>14} {:>14}", show(d.value()), show(c.value()));
        rows.push(d);
    }
    print!("{}", scan_csv(&rows[..3]));

    let other = random_code(3, 5, 40, 2)?;
    let mut state = 1u64;
    let raw: BTreeMap<_, _> = other
        .words()
        .iter()
        .map(|x| {
            state = state.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1);
            (x.clone(), 3.0 + (state >> 40) as f64 / (1u64 << 24) as f64)
        })
        .collect();
    let keane = rescale_to_keane(&raw, other.rate())?;
    let crit = critical_beta(&keane)?;
    println!(
        "random ternary code, rate {:.6}: Keane residual {:.1e}, critical beta {:.12}",
        other.rate(),
        keane_residual(&keane),
        crit.beta
    );
    println!("phase q^(itn) at t = 0.25, q = 2, n = 8: {:.6}", evolution_phase(2, 8, 0.25));
    Ok(())
}
