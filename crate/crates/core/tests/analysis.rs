mod common;

use hedgehog_core::analysis::{constant_profile, energy_density, farfield_residuals, tensor_rhs};
use hedgehog_core::profile::{uniform_grid, AnalyticField};
use hedgehog_core::{
    farfield_fit, gradient_bound, reduced_energy, solve_finite_ball, solve_semi_infinite, tensor_residual, Domain,
    Error, ModelParams, Profile, SolverOptions,
};
use nalgebra::Vector3;

fn m200() -> ModelParams {
    ModelParams::new(200.0).unwrap()
}

fn semi200() -> (ModelParams, Profile) {
    let m = m200();
    let p = solve_semi_infinite(&m, 50.0, &SolverOptions::default()).unwrap();
    (m, p)
}

fn trial(r: f64) -> (f64, f64, f64) {
    let q = r * r + 1.0;
    (r * r / q, 2.0 * r / (q * q), (2.0 - 6.0 * r * r) / (q * q * q))
}

#[test]
fn residual_of_non_solution_equals_scaled_scalar_defect() {
    let m = m200();
    let field = AnalyticField { f: |r| trial(r).0, extent: 30.0 };
    let radii = [0.7, 1.0, 2.5, 5.0];
    let rep = tensor_residual(&field, &m, &radii, 1e-3).unwrap();
    // the defect is sqrt(3/2) D (n n - I/3); its largest entry along (1,2,2)/3 is 4/9
    let k = (1.5f64).sqrt() * 4.0 / 9.0;
    for s in &rep.samples {
        let (h, dh, d2h) = trial(s.r);
        let defect = (d2h - m.second_derivative(s.r, h, dh)).abs();
        assert!((s.residual - k * defect).abs() <= 1e-5 * k * defect, "r = {}: {} vs {}", s.r, s.residual, k * defect);
    }
}

#[test]
fn tensor_equation_reduces_to_radial_equation() {
    let m = m200();
    let n = Vector3::new(1.0, 2.0, 2.0) / 3.0;
    for h in [0.1, 0.5, 0.9, 1.0] {
        let q = (1.5f64).sqrt() * h * common::uniaxial(&n);
        let rhs = tensor_rhs(&m, &q);
        // scalar bulk force: -h + h^3 + (3 h_+/t)(h^3 - h^2)
        let k = 3.0 * m.h_plus / m.t;
        let scalar = -h + h * h * h + k * (h * h * h - h * h);
        let expect = (1.5f64).sqrt() * scalar * common::uniaxial(&n);
        assert!((rhs - expect).amax() <= 1e-13, "h = {h}");
    }
}

#[test]
fn solved_profile_satisfies_tensor_equation() {
    let (m, p) = semi200();
    let rep = tensor_residual(&p, &m, &[1.0, 5.0, 20.0], 1e-3).unwrap();
    assert!(rep.max < 1e-5, "residual {}", rep.max);
}

#[test]
fn residual_drops_fourfold_on_stencil_halving() {
    let (m, p) = semi200();
    let at = |r: f64, d: f64| tensor_residual(&p, &m, &[r], d).unwrap().max;
    let ratio = at(1.0, 1e-3) / at(1.0, 5e-4);
    assert!((3.5..4.6).contains(&ratio), "r = 1, stencil 1e-3: ratio {ratio}");
    for r in [1.0, 5.0, 20.0] {
        let ratio = at(r, 0.02) / at(r, 0.01);
        assert!((3.8..4.2).contains(&ratio), "r = {r}, stencil 0.02: ratio {ratio}");
    }
}

#[test]
fn residual_rejects_stencils_outside_domain() {
    let (m, p) = semi200();
    assert!(matches!(tensor_residual(&p, &m, &[49.9995], 1e-3), Err(Error::StencilOutsideDomain { .. })));
    assert!(matches!(tensor_residual(&p, &m, &[5e-4], 1e-3), Err(Error::StencilOutsideDomain { .. })));
    assert!(tensor_residual(&p, &m, &[1.0], 0.0).is_err());
}

#[test]
fn energy_density_matches_tensor_energy() {
    let m = m200();
    for r in [0.5, 1.5, 4.0] {
        let (h, dh, _) = trial(r);
        let q = |x: &Vector3<f64>| common::hedgehog(|s| trial(s).0, x);
        let avg = common::sphere_average(r, |x| common::density(&m, &q, x, 1e-5));
        let expect = energy_density(&m, r, h, dh);
        assert!((r * r * avg - expect).abs() <= 1e-7 * expect.abs(), "r = {r}: {} vs {expect}", r * r * avg);
    }
}

#[test]
fn constant_profile_energy_is_three_r() {
    let m = m200();
    for radius in [0.3, 5.0, 50.0] {
        let p = constant_profile(200.0, 1.0, radius, 0.01).unwrap();
        let e = reduced_energy(&p, &m);
        assert!((e.i_h - 3.0 * radius).abs() <= 1e-12 * radius + e.quadrature_error);
    }
}

#[test]
fn hedgehog_energy_is_below_three_r() {
    let m = m200();
    let p = solve_finite_ball(&m, 50.0, &SolverOptions::default()).unwrap();
    let e = reduced_energy(&p, &m);
    assert!(e.i_h > 0.0 && e.i_h + e.quadrature_error < 150.0, "I_h = {}", e.i_h);
    assert_eq!(e.i_tensor, 4.0 * std::f64::consts::PI * e.i_h);
    assert!(e.below_bound && e.nonnegative);
}

#[test]
fn energy_converges_under_grid_refinement() {
    let m = m200();
    let energy = |spacing: f64| {
        let grid = uniform_grid(10.0, spacing, 4);
        let h = grid.iter().map(|&r| trial(r).0).collect();
        let dh = grid.iter().map(|&r| trial(r).1).collect();
        let p = Profile::from_samples(200.0, grid, h, dh, 1.0, Domain::FiniteBall { radius: 10.0 }).unwrap();
        reduced_energy(&p, &m)
    };
    let (a, b, c) = (energy(0.1), energy(0.05), energy(0.025));
    let ratio = (a.i_h - b.i_h) / (b.i_h - c.i_h);
    assert!((14.0..18.0).contains(&ratio), "Simpson refinement ratio {ratio}");
    assert!((b.i_h - c.i_h).abs() <= 2.0 * c.quadrature_error.max(1e-14) * 16.0);
}

#[test]
fn far_field_coefficient_at_t200() {
    let (m, p) = semi200();
    let fit = farfield_fit(&p, &m, (25.0, 45.0)).unwrap();
    assert!(fit.relative_error < 0.01, "relative error {}", fit.relative_error);
    for r in [25.0, 30.0, 35.0, 40.0, 45.0] {
        let g = r * r * (1.0 - p.eval(r).0);
        assert!((g - m.farfield_coeff).abs() / m.farfield_coeff < 0.01, "r = {r}: {g}");
    }
    let res = farfield_residuals(&p, &m, 40.0).unwrap();
    assert!(res.second_derivative < 0.05 && res.first_derivative < 0.05 && res.balance < 0.05, "{res:?}");
    assert!(farfield_fit(&p, &m, (5.0, 45.0)).is_err());
    assert!(farfield_fit(&p, &m, (25.0, 60.0)).is_err());
}

#[test]
fn gradient_bound_is_attained_in_the_core() {
    let (_, p) = semi200();
    let g = gradient_bound(&p, None);
    assert!(g.max > 0.3 && g.max < 1.0, "max {}", g.max);
    assert!(g.r_at_max > 1.0 && g.r_at_max < 4.0);
    assert!(g.max_tensor_norm >= g.max);
}
