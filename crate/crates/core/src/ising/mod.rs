//! Spin and word lattices, Metropolis and Wolff dynamics, Binder-cumulant
//! criticality, `ν` estimation and the energy correlator.

mod correlator;
mod criticality;
mod dynamics;
mod lattice;
mod observables;
mod words;

pub use correlator::{energy_correlator, CorrelatorFit, CorrelatorPoint};
pub use criticality::{
    binder_crossing, cell_index, crossing_from_scan, estimate_nu, log_correction, nu_from_scan, run_cell, scan,
    temperature_grid, BinderCrossing, BinderSlope, CriticalFit, PairCrossing, Scan, ScanConfig,
};
pub use dynamics::{metropolis_sweep, wolff_step};
pub use lattice::{shift, Geometry, SpinLattice};
pub use observables::{
    binder_cumulant, run_mc, run_mc_observe, run_mc_with_lattice, Algorithm, Estimate, MCConfig,
    Observables, Reweighted, Summary, JACKKNIFE_BLOCKS,
};
pub use words::{energy_h2, run_wordlattice_mc, WordLattice};

/// Exact critical temperature of the square-lattice model, `2/ln(1+√2)`.
pub const ONSAGER_TC: f64 = 2.269_185_314_213_022;
