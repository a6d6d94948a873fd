//! Binder-cumulant crossing and the exponent fit for a hypercubic Ising
//! model. Pass `2`, `3` or `4` for the dimension and optionally a sweep
//! count; the default is a quick two-dimensional run.

use codecrit::cli::config::IsingConfig;
use codecrit::ising::{estimate_nu, ONSAGER_TC};

fn main() -> codecrit::Result<()> {
    let mut args = std::env::args().skip(1);
    let d: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(2);
    let mut plan = IsingConfig::default().plan_for(d, 1, true)?;
    if let Some(s) = args.next().and_then(|a| a.parse().ok()) {
        plan.scan.sweeps = s;
        plan.scan.thermalization = s / 10;
    }
    println!("d = {d}, L = {:?}, {} temperatures, {} sweeps per cell", plan.ls, plan.temps.len(), plan.scan.sweeps);
    let fit = estimate_nu(d, &plan.ls, &plan.temps, &plan.scan)?;
    for p in &fit.crossing.pairs {
        println!("  L = {:>2} x {:>2}: T = {:.4} +/- {:.4}, U4 = {:.4}", p.l1, p.l2, p.temperature, p.error, p.binder);
    }
    println!("T_c = {:.4} +/- {:.4}", fit.tc, fit.tc_err);
    if d == 2 {
        println!("exact T_c = {ONSAGER_TC:.7}");
    }
    for s in &fit.slopes {
        println!("  L = {:>2}: U4 = {:.4}, dU4/dbeta = {:.3} +/- {:.3}", s.l, s.binder, s.derivative, s.error);
    }
    println!("nu = {:.4} +/- {:.4} ({})", fit.nu, fit.nu_err, fit.method);
    Ok(())
}
