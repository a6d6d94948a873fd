//! Box-counting dimension of code fractals, exact and sampled.

use codecrit::codes::{Code, CodeFamily};
use codecrit::fractal::{box_dimension, family_dimension, sample_fractal, BoxCountConfig, DEFAULT_BOX_CAP};

fn main() -> codecrit::Result<()> {
    let code = Code::from_strs(2, &["00", "01", "10"])?;
    let exact = box_dimension(&code, &[1, 2, 3, 4, 5, 6], &BoxCountConfig::default())?;
    println!("Sierpinski code {{00, 01, 10}}, rate {:.6}", code.rate());
    print!("{}", exact.to_csv(2));
    println!(
        "raw dimension {:.6}, normalized {:.6}",
        exact.raw_dimension, exact.normalized_dimension
    );

    let sample = sample_fractal(&code, 8, 50_000, 1)?;
    let sampled = sample.box_dimension(&[1, 2, 3, 4, 5])?;
    println!("sampled normalized dimension {:.4}", sampled.normalized_dimension);

    let tight = BoxCountConfig {
        cap: 1_000,
        fallback_samples: Some(20_000),
        seed: 1,
    };
    let mixed = box_dimension(&code, &[1, 2, 3, 4, 5, 6, 7, 8], &tight)?;
    println!(
        "with a 1000-box budget: normalized {:.4}, sampled depths: {}",
        mixed.normalized_dimension,
        mixed.any_sampled()
    );

    let family = CodeFamily::new(
        vec![Code::from_strs(2, &["0", "1"])?, Code::from_strs(2, &["00", "01", "10", "11"])?],
        1.0,
    )?;
    let fam = family_dimension(&family, 4, DEFAULT_BOX_CAP)?;
    println!("family of full codes: normalized {:.4} ({:?})", fam.normalized_dimension, fam.embedding);
    Ok(())
}
