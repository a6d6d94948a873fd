//! The whole chain through the command-line entry point: code rate and
//! fractal dimension, complexity order, Monte Carlo and bounds. Runs the
//! quick two-dimensional preset unless dimensions are given, e.g. `2,3,4`.

fn main() {
    let dims = std::env::args().nth(1).unwrap_or_else(|| "2".into());
    let out = std::env::temp_dir().join("codecrit-pipeline");
    let args = ["codecrit", "--quick", "--out", out.to_str().unwrap(), "pipeline", "--dims", &dims];
    let code = codecrit::cli::run(args, &mut std::io::stdout(), &mut std::io::stderr());
    println!("outputs in {}", out.display());
    std::process::exit(code);
}
