//! Energies and pointwise checks of solved profiles.

use nalgebra::{Matrix3, Vector3};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::profile::{uniform_grid, Domain, Profile, RadialField};
use crate::quadrature::{simpson_with_error, GaussRule};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyReport {
    #[serde(rename = "I_h")]
    pub i_h: f64,
    /// `4 pi I_h`.
    #[serde(rename = "I_tensor")]
    pub i_tensor: f64,
    /// Energy of the constant profile `h = 1`, `3R`.
    #[serde(rename = "bound_3R")]
    pub bound_3r: f64,
    pub quadrature_error: f64,
    pub nonnegative: bool,
    pub below_bound: bool,
}

/// Integrand of the reduced energy, `r^2 (h'^2 / 2 + f(h)) + 3 h^2`.
pub fn energy_density(m: &ModelParams, r: f64, h: f64, dh: f64) -> f64 {
    r * r * (0.5 * dh * dh + m.bulk_potential(h)) + 3.0 * h * h
}

fn is_uniform(grid: &[f64]) -> bool {
    let n = grid.len() - 1;
    let dx = grid[n] / n as f64;
    grid.iter()
        .enumerate()
        .all(|(i, &r)| (r - i as f64 * dx).abs() <= 1e-12 * grid[n])
}

/// Reduced energy of `p` on its whole grid.
///
/// Uniform grids with an interval count divisible by four use Simpson with a
/// Richardson error estimate; other grids fall back to Gauss-Legendre on the
/// interpolant, comparing 4 and 8 nodes per cell.
pub fn reduced_energy(p: &Profile, m: &ModelParams) -> EnergyReport {
    let n = p.len() - 1;
    let (i_h, err) = if n.is_multiple_of(4) && is_uniform(&p.grid) {
        let vals: Vec<f64> = p
            .grid
            .iter()
            .zip(p.h.iter().zip(&p.dh))
            .map(|(&r, (&h, &dh))| energy_density(m, r, h, dh))
            .collect();
        simpson_with_error(&vals, p.end() / n as f64).expect("grid checked")
    } else {
        let f = |r: f64| {
            let (h, dh) = p.eval(r);
            energy_density(m, r, h, dh)
        };
        let fine = GaussRule::new(8).composite(&p.grid, f);
        let coarse = GaussRule::new(4).composite(&p.grid, f);
        (fine, (fine - coarse).abs())
    };
    let bound = 3.0 * p.end();
    EnergyReport {
        i_h,
        i_tensor: 4.0 * std::f64::consts::PI * i_h,
        bound_3r: bound,
        quadrature_error: err,
        nonnegative: i_h >= -err,
        below_bound: i_h <= bound + err,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheck {
    pub lower_ok: bool,
    pub upper_ok: bool,
    /// Largest amount by which `h` falls below `r^2/(r^2+14)`, zero if never.
    pub max_lower_violation: f64,
    /// Largest amount by which `h` exceeds `r^2/(r^2+t lambda_t^2)`, zero if never.
    pub max_upper_violation: f64,
    pub checked_range: [f64; 2],
    pub tolerance: f64,
    pub a2: f64,
    pub a2_interval: [f64; 2],
    pub a2_ok: bool,
    pub warning: Option<String>,
}

/// Radius below which a finite ball is outside the large-domain regime of the
/// envelope bounds.
pub const LARGE_DOMAIN_RADIUS: f64 = 20.0;

/// Compare `h` with the core envelopes at every grid point.
pub fn check_bounds(p: &Profile, m: &ModelParams, tol: f64) -> BoundCheck {
    let mut lower = 0.0f64;
    let mut upper = 0.0f64;
    for (&r, &h) in p.grid.iter().zip(&p.h) {
        lower = lower.max(ModelParams::lower_envelope(r) - h);
        upper = upper.max(h - m.upper_envelope(r));
    }
    let (lo, hi) = m.core_amplitude_bounds();
    let warning = match p.domain {
        Domain::FiniteBall { radius } if radius < LARGE_DOMAIN_RADIUS => Some(format!(
            "envelope bounds are large-domain estimates; R = {radius} is below {LARGE_DOMAIN_RADIUS}"
        )),
        _ => None,
    };
    BoundCheck {
        lower_ok: lower <= tol,
        upper_ok: upper <= tol,
        max_lower_violation: lower,
        max_upper_violation: upper,
        checked_range: [p.grid[0], p.end()],
        tolerance: tol,
        a2: p.a2,
        a2_interval: [lo, hi],
        a2_ok: p.a2 >= lo && p.a2 <= hi,
        warning,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FarFieldResiduals {
    pub r: f64,
    /// `r^2 |h''|`.
    pub second_derivative: f64,
    /// `r |h'|`.
    pub first_derivative: f64,
    /// `|6 - r^2 h (1-h)(1 + (1 + 3 h_+/t) h)|`.
    pub balance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FarFieldFit {
    pub coeff_empirical: f64,
    pub coeff_closed_form: f64,
    pub relative_error: f64,
    pub window: [f64; 2],
    pub residuals: FarFieldResiduals,
}

/// Far-field residuals of the profile at radius `r`.
pub fn farfield_residuals(p: &Profile, m: &ModelParams, r: f64) -> Result<FarFieldResiduals> {
    if !(r > 0.0) || r > p.end() {
        return Err(Error::Domain(format!("radius {r} outside (0, {}]", p.end())));
    }
    let (h, dh) = p.eval(r);
    let d2h = m.second_derivative(r, h, dh);
    let k = 3.0 * m.cubic_ratio();
    Ok(FarFieldResiduals {
        r,
        second_derivative: r * r * d2h.abs(),
        first_derivative: r * dh.abs(),
        balance: (6.0 - r * r * h * (1.0 - h) * (1.0 + (1.0 + k) * h)).abs(),
    })
}

/// Smallest admissible lower end of a far-field window.
pub const FARFIELD_MIN_RADIUS: f64 = 10.0;

/// Estimate the limit of `r^2 (1 - h)`.
///
/// `g = r^2 (1-h)` behaves like `c - D/r^2`; the value at the window midpoint
/// is corrected by the two-point extrapolation against the upper end.
pub fn farfield_fit(p: &Profile, m: &ModelParams, window: (f64, f64)) -> Result<FarFieldFit> {
    let (a, b) = window;
    if !(a >= FARFIELD_MIN_RADIUS) || !(b > a) || b > p.end() {
        return Err(Error::Domain(format!(
            "far-field window [{a}, {b}] must satisfy {FARFIELD_MIN_RADIUS} <= lower < upper <= {}",
            p.end()
        )));
    }
    let mid = 0.5 * (a + b);
    let g = |r: f64| r * r * (1.0 - p.eval(r).0);
    let (g_mid, g_hi) = (g(mid), g(b));
    let coeff = g_mid + (g_hi - g_mid) * b * b / (b * b - mid * mid);
    let residuals = farfield_residuals(p, m, mid)?;
    Ok(FarFieldFit {
        coeff_empirical: coeff,
        coeff_closed_form: m.farfield_coeff,
        relative_error: (coeff - m.farfield_coeff).abs() / m.farfield_coeff,
        window: [a, b],
        residuals,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GradientReport {
    /// Max of `sqrt(h'^2 + 3 h^2/r^2)` over the checked grid points.
    pub max: f64,
    pub r_at_max: f64,
    /// Max of the full tensor gradient norm `sqrt(h'^2 + 6 h^2/r^2)`.
    pub max_tensor_norm: f64,
    pub checked_range: [f64; 2],
}

/// Gradient bound over grid points in `range` (whole grid when `None`).
pub fn gradient_bound(p: &Profile, range: Option<(f64, f64)>) -> GradientReport {
    let (lo, hi) = range.unwrap_or((p.grid[0], p.end()));
    let mut best = (0.0f64, lo);
    let mut tensor = 0.0f64;
    for ((&r, &h), &dh) in p.grid.iter().zip(&p.h).zip(&p.dh) {
        if r < lo || r > hi {
            continue;
        }
        let q = if r > 0.0 { h * h / (r * r) } else { 0.0 };
        let g = (dh * dh + 3.0 * q).sqrt();
        if g > best.0 {
            best = (g, r);
        }
        tensor = tensor.max((dh * dh + 6.0 * q).sqrt());
    }
    GradientReport {
        max: best.0,
        r_at_max: best.1,
        max_tensor_norm: tensor,
        checked_range: [lo, hi],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualSample {
    pub r: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub spacing: f64,
    pub direction: [f64; 3],
    pub samples: Vec<ResidualSample>,
    pub max: f64,
}

/// Unit direction of the sample points; it has no zero components, so every
/// tensor entry is exercised.
pub const RESIDUAL_DIRECTION: [f64; 3] = [1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0];

fn hedgehog_tensor(field: &dyn RadialField, center: f64, x: &Vector3<f64>) -> Matrix3<f64> {
    let r = x.norm();
    let n = x * x.transpose() / (r * r) - Matrix3::identity() / 3.0;
    (1.5f64).sqrt() * field.value_near(center, r) * n
}

/// Right side of the tensor equilibrium equation.
pub fn tensor_rhs(m: &ModelParams, q: &Matrix3<f64>) -> Matrix3<f64> {
    let tr2 = (q * q).trace();
    let hp_t = m.h_plus / m.t;
    -q - 3.0 * 6f64.sqrt() * hp_t * (q * q - Matrix3::identity() * tr2 / 3.0) + 2.0 * m.h_plus * hp_t * q * tr2
}

/// Max componentwise defect of the tensor equilibrium equation for the
/// hedgehog built from `field`, with a 7-point Cartesian Laplacian.
pub fn tensor_residual(
    field: &dyn RadialField,
    m: &ModelParams,
    sample_radii: &[f64],
    spacing: f64,
) -> Result<ResidualReport> {
    if !(spacing > 0.0) {
        return Err(Error::Domain(format!("stencil spacing must be positive, got {spacing}")));
    }
    let dir = Vector3::from(RESIDUAL_DIRECTION);
    let end = field.extent();
    let mut samples = Vec::with_capacity(sample_radii.len());
    for &r in sample_radii {
        if !(r - spacing > 0.0) || r + spacing > end {
            return Err(Error::StencilOutsideDomain { r, spacing, end });
        }
        let x0 = dir * r;
        let q0 = hedgehog_tensor(field, r, &x0);
        let mut lap = Matrix3::zeros();
        for k in 0..3 {
            let mut e = Vector3::zeros();
            e[k] = spacing;
            lap += hedgehog_tensor(field, r, &(x0 + e)) + hedgehog_tensor(field, r, &(x0 - e)) - 2.0 * q0;
        }
        lap /= spacing * spacing;
        let defect = lap - tensor_rhs(m, &q0);
        samples.push(ResidualSample {
            r,
            residual: defect.amax(),
        });
    }
    let max = samples.iter().map(|s| s.residual).fold(0.0, f64::max);
    Ok(ResidualReport {
        spacing,
        direction: RESIDUAL_DIRECTION,
        samples,
        max,
    })
}

/// Profile with `h` equal to `value` at every grid point, including the origin.
pub fn constant_profile(t: f64, value: f64, radius: f64, spacing: f64) -> Result<Profile> {
    let grid = uniform_grid(radius, spacing, 4);
    let n = grid.len();
    Profile::from_samples(t, grid, vec![value; n], vec![0.0; n], 0.0, Domain::FiniteBall { radius })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::AnalyticField;

    fn m200() -> ModelParams {
        ModelParams::new(200.0).unwrap()
    }

    #[test]
    fn constant_one_has_energy_three_r() {
        let m = m200();
        let p = constant_profile(200.0, 1.0, 7.5, 0.01).unwrap();
        let e = reduced_energy(&p, &m);
        assert!((e.i_h - 22.5).abs() < 1e-10, "{}", e.i_h);
        assert_eq!(e.bound_3r, 22.5);
        assert_eq!(e.i_tensor, 4.0 * std::f64::consts::PI * e.i_h);
    }

    #[test]
    fn zero_profile_energy_is_bulk_offset() {
        let m = m200();
        let p = constant_profile(200.0, 0.0, 3.0, 0.01).unwrap();
        let e = reduced_energy(&p, &m);
        assert!((e.i_h - m.c_t * 9.0).abs() < 1e-12);
        assert_eq!(gradient_bound(&p, None).max, 0.0);
    }

    #[test]
    fn gradient_of_constant_profile_is_director_gradient() {
        let p = constant_profile(200.0, 1.0, 5.0, 0.01).unwrap();
        let g = gradient_bound(&p, Some((0.5, 5.0)));
        assert!((g.max - 3f64.sqrt() / 0.5).abs() < 1e-12);
        assert!((g.max_tensor_norm - 6f64.sqrt() / 0.5).abs() < 1e-12);
    }

    #[test]
    fn isotropic_field_has_zero_residual() {
        let f = AnalyticField { f: |_| 0.0, extent: 10.0 };
        let r = tensor_residual(&f, &m200(), &[1.0, 5.0], 1e-3).unwrap();
        assert_eq!(r.max, 0.0);
    }

    #[test]
    fn stencil_must_fit() {
        let f = AnalyticField { f: |_| 0.0, extent: 10.0 };
        let m = m200();
        assert!(matches!(
            tensor_residual(&f, &m, &[9.9995], 1e-3),
            Err(Error::StencilOutsideDomain { .. })
        ));
        assert!(tensor_residual(&f, &m, &[5e-4], 1e-3).is_err());
    }

    #[test]
    fn shifted_profile_violates_upper_bound() {
        let m = m200();
        let grid = uniform_grid(40.0, 0.05, 200);
        let h: Vec<f64> = grid.iter().map(|&r| m.upper_envelope(r) + 0.1).collect();
        let dh = vec![0.0; grid.len()];
        let p = Profile::from_samples(200.0, grid, h, dh, 0.2, Domain::SemiInfinite { r_max: 40.0 }).unwrap();
        let b = check_bounds(&p, &m, 1e-6);
        assert!(!b.upper_ok);
        assert!((b.max_upper_violation - 0.1).abs() < 1e-12);
        assert!(b.lower_ok);
        assert!(b.warning.is_none());
    }

    #[test]
    fn farfield_window_is_checked() {
        let m = m200();
        let p = constant_profile(200.0, 1.0, 30.0, 0.01).unwrap();
        assert!(farfield_fit(&p, &m, (5.0, 25.0)).is_err());
        assert!(farfield_fit(&p, &m, (25.0, 45.0)).is_err());
        let f = farfield_fit(&p, &m, (12.0, 28.0)).unwrap();
        assert_eq!(f.coeff_empirical, 0.0);
    }
}
