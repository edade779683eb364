//! Fixtures shared by the solver benchmarks.

use hedgehog_core::{ModelParams, SolverOptions};

/// Temperature used throughout the benchmarks.
pub const T: f64 = 200.0;

pub fn model() -> ModelParams {
    ModelParams::new(T).expect("valid temperature")
}

/// Solver options with a coarser integrator tolerance for quick iterations.
pub fn quick_options() -> SolverOptions {
    let mut o = SolverOptions::default();
    o.shooting.tol = 1e-10;
    o
}
