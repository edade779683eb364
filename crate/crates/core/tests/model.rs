use approx::assert_relative_eq;
use hedgehog_core::{derive_model_params, nondimensionalize, Error, ModelParams, PhysicalParams, Validation};
use proptest::prelude::*;

fn t_grid() -> Vec<f64> {
    (0..50).map(|i| 1.01 * (1000.0f64 / 1.01).powf(i as f64 / 49.0)).collect()
}

#[test]
fn closed_form_identities_on_t_grid() {
    for t in t_grid() {
        let m = ModelParams::new(t).unwrap();
        let hp = m.h_plus;
        assert!((2.0 * hp * hp - 3.0 * hp - t).abs() <= 1e-12 * t, "h_+ identity at t = {t}");
        assert!(m.bulk_potential(1.0).abs() <= 1e-12, "f(1) at t = {t}");
        assert!(m.bulk_potential_derivative(1.0).abs() <= 1e-12, "f'(1) at t = {t}");
        assert!((m.farfield_coeff - t * m.lambda_t_sq).abs() <= 1e-12, "far-field identity at t = {t}");
        assert_relative_eq!(m.farfield_coeff, 6.0 / (2.0 + 3.0 * hp / t), max_relative = 1e-14);
    }
}

#[test]
fn reference_values_at_t200() {
    let m = ModelParams::new(200.0).unwrap();
    assert_relative_eq!(m.h_plus, (3.0 + 1609f64.sqrt()) / 4.0, max_relative = 1e-15);
    assert_relative_eq!(m.farfield_coeff, 2.77563, max_relative = 2e-6);
    assert_relative_eq!(m.c_t, 0.5 + m.h_plus / 200.0 - m.h_plus * m.h_plus / 400.0, max_relative = 1e-14);
}

#[test]
fn strict_rejects_t_at_most_one() {
    for t in [1.0, 0.5, -3.0, f64::NAN, f64::INFINITY] {
        let e = derive_model_params(t, Validation::Strict).unwrap_err();
        assert!(matches!(e, Error::TemperatureOutOfRange { .. } | Error::Domain(_)), "t = {t}: {e:?}");
    }
    let m = derive_model_params(1.0, Validation::Relaxed).unwrap();
    assert_eq!(m.t, 1.0);
    assert!(derive_model_params(0.5, Validation::Relaxed).is_err());
    assert!(derive_model_params(1.0001, Validation::Strict).is_ok());
}

#[test]
fn nondimensionalization_of_physical_constants() {
    let p = PhysicalParams {
        a2: 1.3e5,
        b2: 1.6e6,
        c2: 3.9e6,
        l: 4e-11,
        r_real: 1e-8,
    };
    let (t, g) = nondimensionalize(&p, Validation::Strict).unwrap();
    assert_relative_eq!(t, 27.0 * p.a2 * p.c2 / (p.b2 * p.b2), max_relative = 1e-15);
    assert_relative_eq!(g.xi, (27.0 * p.c2 * p.l / (p.b2 * p.b2)).sqrt(), max_relative = 1e-15);
    assert_relative_eq!(g.r_bar, p.r_real / g.xi, max_relative = 1e-15);
    assert_relative_eq!(g.r_tilde, t.sqrt() * g.r_bar, max_relative = 1e-15);
    let bad = PhysicalParams { l: -1.0, ..p };
    assert!(nondimensionalize(&bad, Validation::Strict).is_err());
}

#[test]
fn core_amplitude_interval_at_t200() {
    let m = ModelParams::new(200.0).unwrap();
    let (lo, hi) = m.core_amplitude_bounds();
    assert_relative_eq!(lo, 1.0 / 14.0, max_relative = 1e-15);
    assert_relative_eq!(hi, 1.0 / (200.0 * m.lambda_t_sq), max_relative = 1e-15);
}

proptest! {
    #[test]
    fn envelopes_are_ordered(t in 1.001f64..5000.0, r in 0.0f64..200.0) {
        let m = ModelParams::new(t).unwrap();
        let lo = ModelParams::lower_envelope(r);
        let hi = m.upper_envelope(r);
        prop_assert!(lo <= hi);
        prop_assert!((0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi));
    }

    #[test]
    fn bulk_potential_is_positive_below_bulk_value(t in 1.001f64..5000.0, h in 0.0f64..0.999) {
        let m = ModelParams::new(t).unwrap();
        prop_assert!(m.bulk_potential(h) > 0.0);
        prop_assert!(m.bulk_potential(1.0).abs() < 1e-12);
    }

    #[test]
    fn potential_derivatives_match_differences(t in 1.5f64..2000.0, h in 0.05f64..1.5) {
        let m = ModelParams::new(t).unwrap();
        let d = 1e-5;
        let fd1 = (m.bulk_potential(h + d) - m.bulk_potential(h - d)) / (2.0 * d);
        let fd2 = (m.bulk_potential_derivative(h + d) - m.bulk_potential_derivative(h - d)) / (2.0 * d);
        prop_assert!((fd1 - m.bulk_potential_derivative(h)).abs() < 1e-7);
        prop_assert!((fd2 - m.bulk_potential_second_derivative(h)).abs() < 1e-6);
    }

    #[test]
    fn ode_rhs_rejects_origin(t in 1.001f64..1000.0, h in 0.0f64..1.0) {
        let m = ModelParams::new(t).unwrap();
        prop_assert!(m.ode_rhs(0.0, h, 0.0).is_err());
        let (dh, d2h) = m.ode_rhs(1.0, h, 0.25).unwrap();
        prop_assert_eq!(dh, 0.25);
        prop_assert_eq!(d2h, m.second_derivative(1.0, h, 0.25));
    }
}
