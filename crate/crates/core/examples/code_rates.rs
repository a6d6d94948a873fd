//! Rates of a few small codes, including linear codes over prime fields.

use codecrit::codes::{linear_code, random_code, Code};

fn main() -> codecrit::Result<()> {
    let named = [
        ("{00, 11}", Code::from_strs(2, &["00", "11"])?),
        ("{00, 01, 10}", Code::from_strs(2, &["00", "01", "10"])?),
        ("A^3", Code::full(2, 3)?),
        ("random q=3 n=4, 20 words", random_code(3, 4, 20, 7)?),
    ];
    for (name, c) in &named {
        println!("{name:<28} size {:>4}  rate {:.6}", c.size(), c.rate());
    }

    let hamming = linear_code(
        &[
            vec![1, 0, 0, 0, 0, 1, 1],
            vec![0, 1, 0, 0, 1, 0, 1],
            vec![0, 0, 1, 0, 1, 1, 0],
            vec![0, 0, 0, 1, 1, 1, 1],
        ],
        2,
    )?;
    let (k, n) = hamming.rate_exact();
    println!("[7,4] Hamming code: {} words, rate {k}/{n}", hamming.code().size());

    let ternary = linear_code(&[vec![1, 1, 1], vec![0, 1, 2]], 3)?;
    println!("ternary [3,2] code: {} words, rate {:.6}", ternary.code().size(), ternary.code().rate());
    Ok(())
}
