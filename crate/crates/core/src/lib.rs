//! Radial hedgehog solutions of the Landau-de Gennes model: shooting solver,
//! energy and bound checks, and biaxial stability tests.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod integrator;
pub mod io;
pub mod model;
pub mod perturbation;
pub mod profile;
pub mod quadrature;

pub use analysis::{
    check_bounds, farfield_fit, gradient_bound, reduced_energy, tensor_residual, BoundCheck, EnergyReport,
    FarFieldFit, GradientReport, ResidualReport,
};
pub use error::{Error, Result};
pub use model::{derive_model_params, nondimensionalize, ModelParams, PhysicalParams, ReducedGeometry, Validation};
pub use perturbation::{
    biaxial_delta, second_variation_biaxial, second_variation_general, stability_map, stability_threshold,
    BiaxialPerturbation, Family, MapCell, MapOptions, PerturbationReport, StabilityVerdict, TensorDirection,
};
pub use profile::{
    classify_shot, series_coefficients, solve_finite_ball, solve_semi_infinite, Domain, Profile, SeriesExpansion,
    ShotClass, ShotOutcome, ShootingConfig, SolverOptions,
};
